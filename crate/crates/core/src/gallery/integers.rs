//! The additive group of integers. Its endomorphisms are the multipliers
//! `ε_a(b) = ab`, sampled at the frame `U = (1)` by `r(h) = h(1)`.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{differ, sampled_law};
use crate::algebra::Rank;
use crate::commutativity::{sampled_commutativity, sampled_conjugate_commutation, SampledLaw};
use crate::error::{Error, Result};
use crate::symbolic::{seeded_rng, OpSignature, SymbolicAlgebra, SymbolicBasis};

pub const SAMPLE_BOUND: i64 = 1000;

#[derive(Debug, Clone)]
pub struct Integers {
    signature: Vec<OpSignature>,
}

impl Default for Integers {
    fn default() -> Self {
        Integers {
            signature: vec![
                OpSignature::new("+", Rank::numbered(2)),
                OpSignature::new("−", Rank::numbered(1)),
                OpSignature::new("0", Rank::nullary()),
            ],
        }
    }
}

impl SymbolicAlgebra for Integers {
    type Elem = i64;

    fn name(&self) -> &str {
        "integers"
    }

    fn signature(&self) -> &[OpSignature] {
        &self.signature
    }

    fn apply(&self, op: usize, args: &[i64]) -> Result<i64> {
        match op {
            0 => args[0]
                .checked_add(args[1])
                .ok_or(Error::Overflow("integer sum")),
            1 => args[0]
                .checked_neg()
                .ok_or(Error::Overflow("integer negation")),
            _ => Ok(0),
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> i64 {
        rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)
    }
}

impl SymbolicBasis for Integers {
    fn frame(&self) -> Vec<i64> {
        vec![1]
    }

    /// `η_M(a) = M_0 · a`.
    fn conjugate(&self, a: &i64, matrix: &[i64]) -> Result<i64> {
        matrix[0]
            .checked_mul(*a)
            .ok_or(Error::Overflow("integer product"))
    }
}

/// The endomorphism `b ↦ m·b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMultiplier(pub i64);

impl IntMultiplier {
    pub fn apply(self, b: i64) -> Result<i64> {
        self.0.checked_mul(b).ok_or(Error::Overflow("multiplier"))
    }

    /// Composition `self · other`.
    pub fn compose(self, other: IntMultiplier) -> Result<IntMultiplier> {
        self.0
            .checked_mul(other.0)
            .map(IntMultiplier)
            .ok_or(Error::Overflow("multiplier product"))
    }

    /// The image of `+`: the pointwise sum of two multipliers.
    pub fn sum(self, other: IntMultiplier) -> Result<IntMultiplier> {
        self.0
            .checked_add(other.0)
            .map(IntMultiplier)
            .ok_or(Error::Overflow("multiplier sum"))
    }
}

impl std::fmt::Display for IntMultiplier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ε[{}]", self.0)
    }
}

/// `r(h) = h(1)`.
pub fn sampling(h: IntMultiplier) -> Result<i64> {
    h.apply(1)
}

/// `ε_a`.
pub fn extension(a: i64) -> IntMultiplier {
    IntMultiplier(a)
}

/// `S_0 = {1}` and `S_{k+1} = S_k ∪ {s + 1 | s ∈ S_k}`.
pub fn bounded_closure(steps: usize) -> BTreeSet<i64> {
    let mut set = BTreeSet::from([1]);
    for _ in 0..steps {
        let next: Vec<i64> = set.iter().map(|s| s + 1).collect();
        set.extend(next);
    }
    set
}

pub const MULTIPLIER_BOUND: i64 = 100;
pub const CLOSURE_STEPS: usize = 50;

/// Every sampled identity of the integer example.
pub fn integers_check(samples: u64, seed: u64) -> Result<Vec<SampledLaw>> {
    let z = Integers::default();
    let mut laws = Vec::new();

    let mut rng = seeded_rng(seed, 0x10);
    let multipliers: Vec<i64> = (-MULTIPLIER_BOUND..=MULTIPLIER_BOUND).collect();
    laws.push(sampled_law(
        "extension after sampling is the identity",
        multipliers.len() as u64,
        |k| {
            let h = IntMultiplier(multipliers[k as usize]);
            let b = z.sample(&mut rng);
            Ok(differ(
                || vec![h.to_string(), b.to_string()],
                extension(sampling(h)?).apply(b)?,
                h.apply(b)?,
            ))
        },
    )?);
    let mut rng = seeded_rng(seed, 0x11);
    laws.push(sampled_law(
        "sampling after extension is the identity",
        samples,
        |_| {
            let a = z.sample(&mut rng);
            Ok(differ(|| vec![a.to_string()], sampling(extension(a))?, a))
        },
    )?);
    let mut rng = seeded_rng(seed, 0x12);
    laws.push(sampled_law(
        "multipliers are endomorphisms",
        samples,
        |_| {
            let (m, a, b) = (
                IntMultiplier(z.sample(&mut rng)),
                z.sample(&mut rng),
                z.sample(&mut rng),
            );
            Ok(differ(
                || vec![m.to_string(), a.to_string(), b.to_string()],
                m.apply(a + b)?,
                m.apply(a)? + m.apply(b)?,
            )
            .or(differ(
                || vec![m.to_string(), a.to_string()],
                m.apply(-a)?,
                -m.apply(a)?,
            ))
            .or(differ(|| vec![m.to_string()], m.apply(0)?, 0)))
        },
    )?);
    let mut rng = seeded_rng(seed, 0x13);
    laws.push(sampled_law(
        "generator equals the multiplier",
        samples,
        |_| {
            let (a, b) = (z.sample(&mut rng), z.sample(&mut rng));
            Ok(differ(
                || vec![a.to_string(), b.to_string()],
                z.conjugate(&a, &[b])?,
                extension(a).apply(b)?,
            ))
        },
    )?);
    let mut rng = seeded_rng(seed, 0x14);
    laws.push(sampled_law(
        "composition is multiplication and the image of + is addition",
        samples,
        |_| {
            let (a, b, c) = (z.sample(&mut rng), z.sample(&mut rng), z.sample(&mut rng));
            let (ea, eb) = (extension(a), extension(b));
            let composed = ea.compose(eb)?.apply(c)?;
            let added = ea.sum(eb)?.apply(c)?;
            Ok(differ(
                || vec![a.to_string(), b.to_string(), c.to_string()],
                composed,
                ea.apply(eb.apply(c)?)?,
            )
            .or(differ(
                || vec![a.to_string(), b.to_string()],
                ea.compose(eb)?,
                IntMultiplier(a * b),
            ))
            .or(differ(
                || vec![a.to_string(), b.to_string(), c.to_string()],
                added,
                ea.apply(c)? + eb.apply(c)?,
            )))
        },
    )?);
    let mut rng = seeded_rng(seed, 0x15);
    laws.push(sampled_law(
        "ring laws of the endowed monoid",
        samples,
        |_| {
            let (a, b, c) = (
                extension(z.sample(&mut rng)),
                extension(z.sample(&mut rng)),
                extension(z.sample(&mut rng)),
            );
            let inputs = || vec![a.to_string(), b.to_string(), c.to_string()];
            let (one, zero) = (IntMultiplier(1), IntMultiplier(0));
            Ok(
                differ(inputs, a.compose(b)?.compose(c)?, a.compose(b.compose(c)?)?)
                    .or(differ(inputs, a.sum(b)?.sum(c)?, a.sum(b.sum(c)?)?))
                    .or(differ(
                        inputs,
                        a.compose(b.sum(c)?)?,
                        a.compose(b)?.sum(a.compose(c)?)?,
                    ))
                    .or(differ(
                        inputs,
                        a.sum(b)?.compose(c)?,
                        a.compose(c)?.sum(b.compose(c)?)?,
                    ))
                    .or(differ(inputs, a.compose(b)?, b.compose(a)?))
                    .or(differ(inputs, a.sum(b)?, b.sum(a)?))
                    .or(differ(inputs, one.compose(a)?, a))
                    .or(differ(inputs, zero.sum(a)?, a)),
            )
        },
    )?);
    laws.push(sampled_law(
        "closure of {1} after k steps is {1..k+1}",
        CLOSURE_STEPS as u64 + 1,
        |k| {
            let got = bounded_closure(k as usize);
            let expected: BTreeSet<i64> = (1..=k as i64 + 1).collect();
            let fmt = |s: &BTreeSet<i64>| format!("{s:?}");
            Ok(
                differ(|| vec![k.to_string()], fmt(&got), fmt(&expected)).or(differ(
                    || vec![k.to_string()],
                    got.contains(&0) || got.contains(&-1),
                    false,
                )),
            )
        },
    )?);
    let mut rng = seeded_rng(seed, 0x16);
    laws.extend(sampled_commutativity(&z, samples, &mut rng)?);
    let mut rng = seeded_rng(seed, 0x17);
    laws.push(sampled_conjugate_commutation(&z, samples, &mut rng)?);
    Ok(laws)
}
