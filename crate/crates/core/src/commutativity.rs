//! The medial law `f(g · m) = g(f · c_m)` for every `m: R -> A^S`.

use serde::Serialize;

use crate::algebra::{checked_tuple_count, Algebra, Elem, Odometer, Rank, SetAryOp};
use crate::combinator::FunctionTable;
use crate::elementary::elementary_closure;
use crate::error::{Error, Result};
use crate::representation::Representation;
use crate::symbolic::SymbolicAlgebra;
use crate::Limits;

/// A violating `m`, one row per label of `f`'s rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MedialWitness {
    pub m: Vec<Vec<Elem>>,
    pub lhs: Elem,
    pub rhs: Elem,
}

impl MedialWitness {
    /// The same violation read as one of `(g, f)`.
    pub fn transposed(&self, s: usize) -> MedialWitness {
        MedialWitness {
            m: (0..s)
                .map(|j| self.m.iter().map(|row| row[j]).collect())
                .collect(),
            lhs: self.rhs,
            rhs: self.lhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MedialOutcome {
    pub cases: u64,
    pub witness: Option<MedialWitness>,
}

impl MedialOutcome {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// Exhaustive check over all `|A|^(|R|·|S|)` arrays in canonical order,
/// stopping at the first violation.
pub fn medial_law(
    f: &(impl SetAryOp + ?Sized),
    g: &(impl SetAryOp + ?Sized),
    size: usize,
    max_cases: usize,
) -> Result<MedialOutcome> {
    let (r, s) = (f.rank().len(), g.rank().len());
    let cells = r
        .checked_mul(s)
        .ok_or_else(|| Error::guard("medial cases", "overflow", max_cases))?;
    checked_tuple_count(size, cells, "medial cases", max_cases)?;
    let mut odo = Odometer::new(size, cells);
    let mut gm = vec![0; r];
    let mut fc = vec![0; s];
    let mut column = vec![0; r];
    let mut cases = 0;
    while let Some(t) = odo.next_tuple() {
        cases += 1;
        for (i, slot) in gm.iter_mut().enumerate() {
            *slot = g.apply(&t[i * s..(i + 1) * s]);
        }
        for (j, slot) in fc.iter_mut().enumerate() {
            for (i, c) in column.iter_mut().enumerate() {
                *c = t[i * s + j];
            }
            *slot = f.apply(&column);
        }
        let (lhs, rhs) = (f.apply(&gm), g.apply(&fc));
        if lhs != rhs {
            return Ok(MedialOutcome {
                cases,
                witness: Some(MedialWitness {
                    m: (0..r).map(|i| t[i * s..(i + 1) * s].to_vec()).collect(),
                    lhs,
                    rhs,
                }),
            });
        }
    }
    Ok(MedialOutcome {
        cases,
        witness: None,
    })
}

/// The medial law for one ordered pair of fundamental operations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MedialReport {
    pub f: String,
    pub g: String,
    pub holds: bool,
    pub cases: u64,
    /// True when the result was obtained from the reversed pair.
    pub derived: bool,
    pub witness: Option<MedialWitness>,
}

pub fn ops_commute(alg: &Algebra, f: usize, g: usize, limits: &Limits) -> Result<MedialReport> {
    let (fo, go) = (alg.operation(f), alg.operation(g));
    let outcome = medial_law(fo, go, alg.size(), limits.max_cases)?;
    Ok(MedialReport {
        f: fo.symbol().to_string(),
        g: go.symbol().to_string(),
        holds: outcome.holds(),
        cases: outcome.cases,
        derived: false,
        witness: outcome.witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutativityReport {
    pub commutative: bool,
    pub pairs: Vec<MedialReport>,
}

impl CommutativityReport {
    pub fn first_failure(&self) -> Option<&MedialReport> {
        self.pairs.iter().find(|p| !p.holds)
    }
}

/// Checks every ordered pair of operations. With `both_directions` off,
/// only pairs `(i, j)` with `i <= j` are evaluated and the reversed pair is
/// filled in by symmetry, transposing any witness.
pub fn is_commutative(
    alg: &Algebra,
    limits: &Limits,
    both_directions: bool,
) -> Result<CommutativityReport> {
    let n = alg.operations().len();
    let mut table: Vec<Vec<Option<MedialReport>>> = vec![vec![None; n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            if both_directions || i <= j {
                *slot = Some(ops_commute(alg, i, j, limits)?);
            }
        }
    }
    if !both_directions {
        for (i, j) in (0..n).flat_map(|i| (0..i).map(move |j| (i, j))) {
            let s = alg.operation(i).rank().len();
            let src = table[j][i].as_ref().expect("computed");
            let mirrored = MedialReport {
                f: src.g.clone(),
                g: src.f.clone(),
                holds: src.holds,
                cases: 0,
                derived: true,
                witness: src.witness.as_ref().map(|w| w.transposed(s)),
            };
            table[i][j] = Some(mirrored);
        }
    }
    let pairs: Vec<MedialReport> = table
        .into_iter()
        .flatten()
        .map(|p| p.expect("filled"))
        .collect();
    Ok(CommutativityReport {
        commutative: pairs.iter().all(|p| p.holds),
        pairs,
    })
}

/// A failing pair of members of `L_Y`, by position in the closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairFailure {
    pub first: usize,
    pub second: usize,
    pub witness: MedialWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementaryCommutation {
    pub arity: usize,
    pub closure_size: usize,
    pub pairs: u64,
    pub cases: u64,
    pub failure: Option<PairFailure>,
    /// Each fundamental operation against each projection.
    pub projection_pairs: u64,
    pub projection_cases: u64,
    pub projection_failure: Option<(String, String, MedialWitness)>,
}

impl ElementaryCommutation {
    pub fn holds(&self) -> bool {
        self.failure.is_none() && self.projection_failure.is_none()
    }
}

/// All ordered pairs of `L_Y` against the medial law, plus every
/// fundamental operation against every projection of arity `Y`.
pub fn check_elementary_commutation(
    alg: &Algebra,
    arity: &Rank,
    limits: &Limits,
) -> Result<ElementaryCommutation> {
    let closure = elementary_closure(alg, arity, limits.max_tables)?;
    let q = alg.size();
    let mut report = ElementaryCommutation {
        arity: arity.len(),
        closure_size: closure.len(),
        pairs: 0,
        cases: 0,
        failure: None,
        projection_pairs: 0,
        projection_cases: 0,
        projection_failure: None,
    };
    'pairs: for (i, a) in closure.functions().iter().enumerate() {
        for (j, b) in closure.functions().iter().enumerate() {
            let outcome = medial_law(&a.table, &b.table, q, limits.max_cases)?;
            report.pairs += 1;
            report.cases += outcome.cases;
            if let Some(witness) = outcome.witness {
                report.failure = Some(PairFailure {
                    first: i,
                    second: j,
                    witness,
                });
                break 'pairs;
            }
        }
    }
    'proj: for op in alg.operations() {
        for x in 0..arity.len() {
            let p = FunctionTable::projection(arity.clone(), x, q)?;
            let outcome = medial_law(op, &p, q, limits.max_cases)?;
            report.projection_pairs += 1;
            report.projection_cases += outcome.cases;
            if let Some(w) = outcome.witness {
                report.projection_failure =
                    Some((op.symbol().to_string(), arity.labels()[x].clone(), w));
                break 'proj;
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugateFailure {
    pub a: Elem,
    pub b: Elem,
    pub witness: MedialWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugateCommutation {
    pub cases: u64,
    pub failure: Option<ConjugateFailure>,
}

/// `χ_a(χ_b · 𝓜) = χ_b(χ_a · c_𝓜)` for all `a`, `b` and square arrays `𝓜`.
pub fn check_conjugate_commutation(
    rep: &Representation,
    limits: &Limits,
) -> Result<ConjugateCommutation> {
    let chi = rep
        .conjugates()
        .ok_or_else(|| Error::NotABasis("conjugate functions need a bijective sampling".into()))?;
    let q = rep.carrier_size();
    let mut report = ConjugateCommutation {
        cases: 0,
        failure: None,
    };
    for (a, fa) in chi.iter().enumerate() {
        for (b, fb) in chi.iter().enumerate() {
            let outcome = medial_law(fa, fb, q, limits.max_cases)?;
            report.cases += outcome.cases;
            if let Some(witness) = outcome.witness {
                report.failure = Some(ConjugateFailure { a, b, witness });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// A sampled violation, rendered with the carrier's `Display`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampledWitness {
    pub sample: u64,
    pub inputs: Vec<Vec<String>>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampledLaw {
    pub law: String,
    pub samples: u64,
    pub witness: Option<SampledWitness>,
}

impl SampledLaw {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// The medial law for two operations of a symbolic algebra on `samples`
/// random arrays `m`.
pub fn sampled_medial<S: SymbolicAlgebra>(
    alg: &S,
    f: usize,
    g: usize,
    samples: u64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<SampledLaw> {
    let sig = alg.signature();
    let (r, s) = (sig[f].rank.len(), sig[g].rank.len());
    let law = format!("{} commutes with {}", sig[f].symbol, sig[g].symbol);
    for k in 0..samples {
        let m: Vec<Vec<S::Elem>> = (0..r)
            .map(|_| (0..s).map(|_| alg.sample(rng)).collect())
            .collect();
        let gm = m
            .iter()
            .map(|row| alg.apply(g, row))
            .collect::<Result<Vec<_>>>()?;
        let fc = (0..s)
            .map(|j| alg.apply(f, &m.iter().map(|row| row[j].clone()).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let (lhs, rhs) = (alg.apply(f, &gm)?, alg.apply(g, &fc)?);
        if lhs != rhs {
            return Ok(SampledLaw {
                law,
                samples: k + 1,
                witness: Some(SampledWitness {
                    sample: k,
                    inputs: render_rows(&m),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                }),
            });
        }
    }
    Ok(SampledLaw {
        law,
        samples,
        witness: None,
    })
}

/// Sampled medial law over every ordered pair of operations.
pub fn sampled_commutativity<S: SymbolicAlgebra>(
    alg: &S,
    samples: u64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Vec<SampledLaw>> {
    let n = alg.signature().len();
    let mut out = Vec::with_capacity(n * n);
    for f in 0..n {
        for g in 0..n {
            out.push(sampled_medial(alg, f, g, samples, rng)?);
        }
    }
    Ok(out)
}

/// Sampled `χ_a(χ_b · 𝓜) = χ_b(χ_a · c_𝓜)` for a symbolic basis.
pub fn sampled_conjugate_commutation<S: crate::symbolic::SymbolicBasis>(
    alg: &S,
    samples: u64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<SampledLaw> {
    let x = alg.frame().len();
    let law = "conjugates commute".to_string();
    for k in 0..samples {
        let a = alg.sample(rng);
        let b = alg.sample(rng);
        let mm: Vec<Vec<S::Elem>> = (0..x)
            .map(|_| (0..x).map(|_| alg.sample(rng)).collect())
            .collect();
        let inner_b = mm
            .iter()
            .map(|row| alg.conjugate(&b, row))
            .collect::<Result<Vec<_>>>()?;
        let lhs = alg.conjugate(&a, &inner_b)?;
        let inner_a = (0..x)
            .map(|j| alg.conjugate(&a, &mm.iter().map(|row| row[j].clone()).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let rhs = alg.conjugate(&b, &inner_a)?;
        if lhs != rhs {
            let mut inputs = vec![vec![a.to_string(), b.to_string()]];
            inputs.extend(render_rows(&mm));
            return Ok(SampledLaw {
                law,
                samples: k + 1,
                witness: Some(SampledWitness {
                    sample: k,
                    inputs,
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                }),
            });
        }
    }
    Ok(SampledLaw {
        law,
        samples,
        witness: None,
    })
}

fn render_rows<T: std::fmt::Display>(rows: &[Vec<T>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Carrier, Operation};
    use crate::representation::{Frame, Method};

    fn semilattice() -> Algebra {
        let carrier = Carrier::new(["∅", "{x}", "{y}", "{x,y}"]).unwrap();
        let zero = Operation::tabulated("0", Rank::nullary(), 4, vec![0]).unwrap();
        let union = Operation::from_fn("∪", Rank::numbered(2), 4, |a| a[0] | a[1]).unwrap();
        Algebra::new("powerset", carrier, vec![zero, union]).unwrap()
    }

    fn boolean() -> Algebra {
        let carrier = Carrier::new(["⊥", "x", "¬x", "⊤"]).unwrap();
        let and = Operation::from_fn("∧", Rank::numbered(2), 4, |a| a[0] & a[1]).unwrap();
        let not = Operation::from_fn("¬", Rank::numbered(1), 4, |a| 3 - a[0]).unwrap();
        let bot = Operation::tabulated("⊥", Rank::nullary(), 4, vec![0]).unwrap();
        Algebra::new("boolean", carrier, vec![and, not, bot]).unwrap()
    }

    #[test]
    fn union_is_medial() {
        let alg = semilattice();
        let r = ops_commute(&alg, 1, 1, &Limits::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.cases, 256);
        let z = ops_commute(&alg, 0, 1, &Limits::default()).unwrap();
        assert!(z.holds);
        assert_eq!(z.cases, 1);
        assert!(
            is_commutative(&alg, &Limits::default(), true)
                .unwrap()
                .commutative
        );
    }

    #[test]
    fn negation_and_meet_do_not_commute() {
        let alg = boolean();
        let r = ops_commute(&alg, 1, 0, &Limits::default()).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w.m, vec![vec![0, 1]]);
        assert_eq!((w.lhs, w.rhs), (3, 2));
        let report = is_commutative(&alg, &Limits::default(), false).unwrap();
        assert!(!report.commutative);
    }

    #[test]
    fn derived_witnesses_violate_the_reversed_law() {
        let alg = boolean();
        let report = is_commutative(&alg, &Limits::default(), false).unwrap();
        for p in report.pairs.iter().filter(|p| p.derived && !p.holds) {
            let f = alg.operation(alg.op_index(&p.f).unwrap());
            let g = alg.operation(alg.op_index(&p.g).unwrap());
            let w = p.witness.as_ref().unwrap();
            let gm: Vec<Elem> = w.m.iter().map(|row| g.apply(row)).collect();
            let cm: Vec<Elem> = (0..g.rank().len())
                .map(|j| f.apply(&w.m.iter().map(|r| r[j]).collect::<Vec<_>>()))
                .collect();
            assert_eq!(f.apply(&gm), w.lhs);
            assert_eq!(g.apply(&cm), w.rhs);
            assert_ne!(w.lhs, w.rhs);
        }
    }

    #[test]
    fn nullary_pairs_need_equal_constants() {
        let carrier = Carrier::new(["a", "b"]).unwrap();
        let c0 = Operation::tabulated("c0", Rank::nullary(), 2, vec![0]).unwrap();
        let c1 = Operation::tabulated("c1", Rank::nullary(), 2, vec![1]).unwrap();
        let alg = Algebra::new("two-constants", carrier, vec![c0, c1]).unwrap();
        let r = ops_commute(&alg, 0, 1, &Limits::default()).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().m, Vec::<Vec<Elem>>::new());
    }

    #[test]
    fn elementary_functions_commute_on_the_semilattice() {
        let alg = semilattice();
        let one =
            check_elementary_commutation(&alg, &Rank::numbered(1), &Limits::default()).unwrap();
        assert!(one.holds());
        assert_eq!(one.closure_size, 2);
        assert_eq!(one.pairs, 4);
        let empty =
            check_elementary_commutation(&alg, &Rank::nullary(), &Limits::default()).unwrap();
        assert!(empty.holds());
        assert_eq!(empty.pairs, 1);
    }

    #[test]
    fn conjugates_commute_on_the_semilattice() {
        let alg = semilattice();
        let f = Frame::new(Rank::new(["x", "y"]).unwrap(), vec![1, 2]).unwrap();
        let rep = Representation::build(&alg, &f, Method::Brute, &Limits::default()).unwrap();
        let c = check_conjugate_commutation(&rep, &Limits::default()).unwrap();
        assert_eq!(c.cases, 4 * 4 * 256);
        assert!(c.failure.is_none());
    }

    #[test]
    fn guard_applies() {
        let alg = semilattice();
        let tight = Limits {
            max_cases: 10,
            ..Limits::default()
        };
        assert!(matches!(
            ops_commute(&alg, 1, 1, &tight),
            Err(Error::GuardExceeded { .. })
        ));
    }
}
