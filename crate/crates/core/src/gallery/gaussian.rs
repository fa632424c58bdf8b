//! The additive group of Gaussian integers `a′ + a″ι` with frame `(1, ι)`.
//! Endomorphisms are 2×2 integer matrices acting on `(a′, a″)`.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{differ, sampled_law};
use crate::algebra::Rank;
use crate::commutativity::{sampled_commutativity, sampled_conjugate_commutation, SampledLaw};
use crate::error::{Error, Result};
use crate::symbolic::{seeded_rng, OpSignature, SymbolicAlgebra, SymbolicBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    pub fn new(re: i64, im: i64) -> Self {
        GaussInt { re, im }
    }

    pub fn plus(self, o: GaussInt) -> Result<GaussInt> {
        let ovf = || Error::Overflow("gaussian sum");
        Ok(GaussInt::new(
            self.re.checked_add(o.re).ok_or_else(ovf)?,
            self.im.checked_add(o.im).ok_or_else(ovf)?,
        ))
    }

    pub fn negated(self) -> Result<GaussInt> {
        let ovf = || Error::Overflow("gaussian negation");
        Ok(GaussInt::new(
            self.re.checked_neg().ok_or_else(ovf)?,
            self.im.checked_neg().ok_or_else(ovf)?,
        ))
    }

    /// `n · self` for an integer `n`.
    pub fn scale(self, n: i64) -> Result<GaussInt> {
        let ovf = || Error::Overflow("gaussian scaling");
        Ok(GaussInt::new(
            self.re.checked_mul(n).ok_or_else(ovf)?,
            self.im.checked_mul(n).ok_or_else(ovf)?,
        ))
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0 {
            write!(f, "{}−{}ι", self.re, self.im.unsigned_abs())
        } else {
            write!(f, "{}+{}ι", self.re, self.im)
        }
    }
}

/// An additive endomorphism: column `k` is the image of the `k`-th frame
/// member, so `h(a) = a′·col0 + a″·col1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IntMatrix {
    pub entries: [[i64; 2]; 2],
}

impl IntMatrix {
    pub const IDENTITY: IntMatrix = IntMatrix {
        entries: [[1, 0], [0, 1]],
    };

    pub fn apply(&self, a: GaussInt) -> Result<GaussInt> {
        let [[p, q], [r, s]] = self.entries;
        let ovf = || Error::Overflow("matrix action");
        let dot = |x: i64, y: i64| -> Result<i64> {
            x.checked_mul(a.re)
                .and_then(|u| y.checked_mul(a.im).and_then(|v| u.checked_add(v)))
                .ok_or_else(ovf)
        };
        Ok(GaussInt::new(dot(p, q)?, dot(r, s)?))
    }

    /// The images of the frame.
    pub fn columns(&self) -> [GaussInt; 2] {
        let [[p, q], [r, s]] = self.entries;
        [GaussInt::new(p, r), GaussInt::new(q, s)]
    }

    pub fn from_columns(cols: [GaussInt; 2]) -> IntMatrix {
        IntMatrix {
            entries: [[cols[0].re, cols[1].re], [cols[0].im, cols[1].im]],
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

#[derive(Debug, Clone)]
pub struct GaussianIntegers {
    signature: Vec<OpSignature>,
}

impl Default for GaussianIntegers {
    fn default() -> Self {
        GaussianIntegers {
            signature: vec![
                OpSignature::new("+", Rank::numbered(2)),
                OpSignature::new("−", Rank::numbered(1)),
                OpSignature::new("0", Rank::nullary()),
            ],
        }
    }
}

pub const SAMPLE_BOUND: i64 = 1000;
pub const MATRIX_BOUND: i64 = 50;
pub const BOX_BOUND: i64 = 10;

impl SymbolicAlgebra for GaussianIntegers {
    type Elem = GaussInt;

    fn name(&self) -> &str {
        "gaussian integers"
    }

    fn signature(&self) -> &[OpSignature] {
        &self.signature
    }

    fn apply(&self, op: usize, args: &[GaussInt]) -> Result<GaussInt> {
        match op {
            0 => args[0].plus(args[1]),
            1 => args[0].negated(),
            _ => Ok(GaussInt::ZERO),
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> GaussInt {
        GaussInt::new(
            rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND),
            rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND),
        )
    }
}

impl SymbolicBasis for GaussianIntegers {
    fn frame(&self) -> Vec<GaussInt> {
        vec![GaussInt::ONE, GaussInt::I]
    }

    /// `η_M(a) = a′·M_0 + a″·M_1`.
    fn conjugate(&self, a: &GaussInt, matrix: &[GaussInt]) -> Result<GaussInt> {
        extension([matrix[0], matrix[1]]).apply(*a)
    }
}

/// `r_U(h) = (h(1), h(ι))`.
pub fn sampling(h: &IntMatrix) -> Result<[GaussInt; 2]> {
    Ok([h.apply(GaussInt::ONE)?, h.apply(GaussInt::I)?])
}

/// `η_M` as a matrix.
pub fn extension(m: [GaussInt; 2]) -> IntMatrix {
    IntMatrix::from_columns(m)
}

/// `γ_a(b) = (a′ + a″)·b`.
pub fn gamma(a: GaussInt, b: GaussInt) -> Result<GaussInt> {
    b.scale(a.re.checked_add(a.im).ok_or(Error::Overflow("gamma"))?)
}

/// `j(m_0·1 + m_1·ι) = (m_0, m_1)` with each coordinate read as the
/// dilatation `γ` of an integer, i.e. a scaling factor.
pub fn j(a: GaussInt) -> [i64; 2] {
    [a.re, a.im]
}

pub fn j_inverse(m: [i64; 2]) -> Result<GaussInt> {
    GaussInt::ONE.scale(m[0])?.plus(GaussInt::I.scale(m[1])?)
}

fn sample_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut e = || rng.gen_range(-MATRIX_BOUND..=MATRIX_BOUND);
    IntMatrix {
        entries: [[e(), e()], [e(), e()]],
    }
}

/// Every sampled identity of the Gaussian example.
pub fn gaussian_check(samples: u64, seed: u64) -> Result<Vec<SampledLaw>> {
    let z = GaussianIntegers::default();
    let mut laws = Vec::new();

    let mut rng = seeded_rng(seed, 0x30);
    laws.push(sampled_law(
        "extension after sampling is the identity",
        samples,
        |_| {
            let h = sample_matrix(&mut rng);
            let b = z.sample(&mut rng);
            Ok(differ(
                || vec![h.to_string(), b.to_string()],
                extension(sampling(&h)?).apply(b)?,
                h.apply(b)?,
            )
            .or(differ(|| vec![h.to_string()], extension(sampling(&h)?), h)))
        },
    )?);
    let mut rng = seeded_rng(seed, 0x31);
    laws.push(sampled_law(
        "sampling after extension is the identity",
        samples,
        |_| {
            let m = [z.sample(&mut rng), z.sample(&mut rng)];
            let back = sampling(&extension(m))?;
            Ok(
                differ(|| vec![m[0].to_string(), m[1].to_string()], back[0], m[0]).or(differ(
                    || vec![m[0].to_string(), m[1].to_string()],
                    back[1],
                    m[1],
                )),
            )
        },
    )?);
    let mut rng = seeded_rng(seed, 0x32);
    laws.push(sampled_law(
        "matrices act as endomorphisms",
        samples,
        |_| {
            let h = sample_matrix(&mut rng);
            let (a, b) = (z.sample(&mut rng), z.sample(&mut rng));
            let inputs = || vec![h.to_string(), a.to_string(), b.to_string()];
            Ok(
                differ(inputs, h.apply(a.plus(b)?)?, h.apply(a)?.plus(h.apply(b)?)?)
                    .or(differ(
                        inputs,
                        h.apply(a.negated()?)?,
                        h.apply(a)?.negated()?,
                    ))
                    .or(differ(inputs, h.apply(GaussInt::ZERO)?, GaussInt::ZERO)),
            )
        },
    )?);
    let mut rng = seeded_rng(seed, 0x33);
    laws.push(sampled_law(
        "γ_a(b) = (a′ + a″)b agrees with χ_a on constant matrices",
        samples,
        |_| {
            let (a, b) = (z.sample(&mut rng), z.sample(&mut rng));
            Ok(differ(
                || vec![a.to_string(), b.to_string()],
                gamma(a, b)?,
                z.conjugate(&a, &[b, b])?,
            ))
        },
    )?);
    let side = (2 * BOX_BOUND + 1) as u64;
    laws.push(sampled_law(
        "j is a bijection on the bounded box",
        side * side,
        |k| {
            let a = GaussInt::new((k / side) as i64 - BOX_BOUND, (k % side) as i64 - BOX_BOUND);
            let m = j(a);
            Ok(differ(|| vec![a.to_string()], j_inverse(m)?, a).or(differ(
                || vec![a.to_string()],
                format!("{:?}", j(j_inverse(m)?)),
                format!("{m:?}"),
            )))
        },
    )?);
    let mut rng = seeded_rng(seed, 0x34);
    laws.extend(sampled_commutativity(&z, samples, &mut rng)?);
    let mut rng = seeded_rng(seed, 0x35);
    laws.push(sampled_conjugate_commutation(&z, samples, &mut rng)?);
    Ok(laws)
}
