//! Endomorphism enumeration and the sampling map `r_U(h) = h · U` of a frame.
//!
//! When `r_U` is a bijection onto the matrices `A^X`, its inverse `η`
//! rebuilds an endomorphism from a matrix and the conjugate functions are
//! `χ_a(M) = η_M(a)`.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    checked_tuple_count, decode_into, encode, Algebra, Carrier, Elem, Odometer, Operation, Rank,
    SetAryOp, UnaryMap,
};
use crate::combinator::FunctionTable;
use crate::elementary::{check_frame, elementary_generator, GeneratorOutcome};
use crate::error::{Error, Result};
use crate::Limits;

/// An indexing `U: X -> A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    rank: Rank,
    values: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameFile {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(rename = "U")]
    pub u: Vec<FrameEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameEntry {
    pub index: String,
    pub value: String,
}

impl Frame {
    pub fn new(rank: Rank, values: Vec<Elem>) -> Result<Self> {
        if rank.len() != values.len() {
            return Err(Error::RankMismatch {
                expected: rank.len(),
                found: values.len(),
            });
        }
        Ok(Frame { rank, values })
    }

    pub fn rank(&self) -> &Rank {
        &self.rank
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn is_injective(&self) -> bool {
        let distinct: BTreeSet<Elem> = self.values.iter().copied().collect();
        distinct.len() == self.values.len()
    }

    pub fn from_file(file: FrameFile, carrier: &Carrier) -> Result<Self> {
        let rank = Rank::new(file.x)?;
        let mut values: Vec<Option<Elem>> = vec![None; rank.len()];
        for entry in &file.u {
            let slot = rank
                .position(&entry.index)
                .ok_or_else(|| Error::UnknownElement {
                    context: "frame indices".into(),
                    name: entry.index.clone(),
                })?;
            if values[slot].is_some() {
                return Err(Error::DuplicateLabel(entry.index.clone()));
            }
            values[slot] =
                Some(
                    carrier
                        .position(&entry.value)
                        .ok_or_else(|| Error::UnknownElement {
                            context: "frame values".into(),
                            name: entry.value.clone(),
                        })?,
                );
        }
        let found = values.iter().filter(|v| v.is_some()).count();
        if found != rank.len() {
            return Err(Error::RankMismatch {
                expected: rank.len(),
                found,
            });
        }
        Frame::new(
            rank,
            values.into_iter().map(|v| v.expect("checked")).collect(),
        )
    }

    pub fn from_json(text: &str, carrier: &Carrier) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?, carrier)
    }

    pub fn load(path: impl AsRef<Path>, carrier: &Carrier) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?, carrier)
    }

    pub fn to_file(&self, carrier: &Carrier) -> FrameFile {
        FrameFile {
            x: self.rank.labels().to_vec(),
            u: self
                .rank
                .labels()
                .iter()
                .zip(&self.values)
                .map(|(index, &v)| FrameEntry {
                    index: index.clone(),
                    value: carrier.name(v).to_string(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Backtrack,
}

/// All endomorphisms in lexicographic order of their value lists.
pub fn enumerate_endomorphisms(
    alg: &Algebra,
    method: Method,
    limits: &Limits,
) -> Result<Vec<UnaryMap>> {
    if !alg.is_tabulated() {
        return Err(Error::RuleBased(alg.name().to_string()));
    }
    match method {
        Method::Brute => brute_force(alg, limits),
        Method::Backtrack => Backtracker::new(alg).run(),
    }
}

fn brute_force(alg: &Algebra, limits: &Limits) -> Result<Vec<UnaryMap>> {
    let q = alg.size();
    if q > limits.max_carrier {
        return Err(Error::guard(
            "brute-force carrier size",
            q,
            limits.max_carrier,
        ));
    }
    let mut found = Vec::new();
    let mut odo = Odometer::new(q, q);
    let mut image = Vec::new();
    'candidates: while let Some(h) = odo.next_tuple() {
        for op in alg.operations() {
            let mut args = Odometer::new(q, op.rank().len());
            while let Some(a) = args.next_tuple() {
                image.clear();
                image.extend(a.iter().map(|&e| h[e]));
                if h[op.apply(a)] != op.apply(&image) {
                    continue 'candidates;
                }
            }
        }
        found.push(UnaryMap::new(h.to_vec()));
    }
    Ok(found)
}

const UNSET: Elem = Elem::MAX;

/// Depth-first search over partial maps. Whenever every argument of a
/// constraint `h(f(a)) = f(h · a)` is assigned, the constraint forces the
/// value at `f(a)` or reports a conflict.
struct Backtracker<'a> {
    ops: Vec<&'a Operation>,
    q: usize,
    constraints: Vec<Constraint>,
    watch: Vec<Vec<usize>>,
    missing: Vec<usize>,
    h: Vec<Elem>,
    trail: Vec<Elem>,
    queue: Vec<usize>,
}

struct Constraint {
    op: usize,
    args: Vec<Elem>,
    result: Elem,
}

impl<'a> Backtracker<'a> {
    fn new(alg: &'a Algebra) -> Self {
        let q = alg.size();
        let ops: Vec<&Operation> = alg.operations().iter().collect();
        let mut constraints = Vec::new();
        let mut watch = vec![Vec::new(); q];
        let mut missing = Vec::new();
        for (i, op) in ops.iter().enumerate() {
            let mut odo = Odometer::new(q, op.rank().len());
            while let Some(a) = odo.next_tuple() {
                let id = constraints.len();
                let distinct: BTreeSet<Elem> = a.iter().copied().collect();
                for &e in &distinct {
                    watch[e].push(id);
                }
                missing.push(distinct.len());
                constraints.push(Constraint {
                    op: i,
                    args: a.to_vec(),
                    result: op.apply(a),
                });
            }
        }
        Backtracker {
            ops,
            q,
            constraints,
            watch,
            missing,
            h: vec![UNSET; q],
            trail: Vec::new(),
            queue: Vec::new(),
        }
    }

    fn run(mut self) -> Result<Vec<UnaryMap>> {
        let mut found = Vec::new();
        let ready: Vec<usize> = (0..self.constraints.len())
            .filter(|&c| self.missing[c] == 0)
            .collect();
        self.queue.extend(ready);
        if self.propagate() {
            self.search(&mut found);
        }
        Ok(found)
    }

    fn search(&mut self, found: &mut Vec<UnaryMap>) {
        let Some(e) = self.h.iter().position(|&v| v == UNSET) else {
            found.push(UnaryMap::new(self.h.clone()));
            return;
        };
        for v in 0..self.q {
            let mark = self.trail.len();
            if self.assign(e, v) && self.propagate() {
                self.search(found);
            }
            self.undo(mark);
        }
    }

    fn assign(&mut self, e: Elem, v: Elem) -> bool {
        if self.h[e] != UNSET {
            return self.h[e] == v;
        }
        self.h[e] = v;
        self.trail.push(e);
        for &c in &self.watch[e] {
            self.missing[c] -= 1;
            if self.missing[c] == 0 {
                self.queue.push(c);
            }
        }
        true
    }

    fn propagate(&mut self) -> bool {
        let mut image = Vec::new();
        while let Some(c) = self.queue.pop() {
            let con = &self.constraints[c];
            image.clear();
            image.extend(con.args.iter().map(|&a| self.h[a]));
            let forced = self.ops[con.op].apply(&image);
            let target = con.result;
            if !self.assign(target, forced) {
                self.queue.clear();
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().expect("non-empty trail");
            self.h[e] = UNSET;
            for &c in &self.watch[e] {
                self.missing[c] += 1;
            }
        }
    }
}

/// Why `r_U` fails to be a bijection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Bijectivity {
    Bijective,
    /// Two endomorphisms (indices into the sorted list) share a sample.
    NotInjective {
        first: usize,
        second: usize,
        sample: Vec<Elem>,
    },
    /// A matrix that is the sample of no endomorphism.
    NotSurjective {
        missing: Vec<Elem>,
    },
}

/// The sampling of all endomorphisms at a frame, with `η` and `χ` when the
/// sampling is bijective.
#[derive(Debug, Clone)]
pub struct Representation {
    frame: Frame,
    size: usize,
    endos: Vec<UnaryMap>,
    samples: Vec<Vec<Elem>>,
    bijectivity: Bijectivity,
    /// Matrix position -> endomorphism index, when bijective.
    extension: Option<Vec<usize>>,
    conjugates: Option<Vec<FunctionTable>>,
}

impl Representation {
    pub fn build(alg: &Algebra, frame: &Frame, method: Method, limits: &Limits) -> Result<Self> {
        let endos = enumerate_endomorphisms(alg, method, limits)?;
        Self::from_endomorphisms(alg, frame, endos, limits)
    }

    /// Builds from a precomputed endomorphism list (sorted, duplicate free).
    pub fn from_endomorphisms(
        alg: &Algebra,
        frame: &Frame,
        endos: Vec<UnaryMap>,
        limits: &Limits,
    ) -> Result<Self> {
        check_frame(alg, frame)?;
        let q = alg.size();
        let matrices = checked_tuple_count(q, frame.rank().len(), "matrices", limits.max_cases)?;
        let samples: Vec<Vec<Elem>> = endos
            .iter()
            .map(|h| frame.values().iter().map(|&u| h.apply(u)).collect())
            .collect();

        let mut hit: Vec<Option<usize>> = vec![None; matrices];
        let mut bijectivity = Bijectivity::Bijective;
        for (i, s) in samples.iter().enumerate() {
            let slot = &mut hit[encode(q, s)];
            match slot {
                Some(first) => {
                    bijectivity = Bijectivity::NotInjective {
                        first: *first,
                        second: i,
                        sample: s.clone(),
                    };
                    break;
                }
                None => *slot = Some(i),
            }
        }
        if bijectivity == Bijectivity::Bijective {
            if let Some(m) = hit.iter().position(Option::is_none) {
                let mut missing = vec![0; frame.rank().len()];
                decode_into(q, m, &mut missing);
                bijectivity = Bijectivity::NotSurjective { missing };
            }
        }

        let (extension, conjugates) = if bijectivity == Bijectivity::Bijective {
            let extension: Vec<usize> = hit.into_iter().map(|i| i.expect("surjective")).collect();
            // η · r_U = id on endomorphisms and r_U · η = id on matrices.
            let left = samples
                .iter()
                .enumerate()
                .all(|(i, s)| extension[encode(q, s)] == i);
            let right = extension
                .iter()
                .enumerate()
                .all(|(m, &i)| encode(q, &samples[i]) == m);
            if !(left && right) {
                return Err(Error::Inconsistent(
                    "sampling and extension are not mutually inverse".into(),
                ));
            }
            let conjugates = (0..q)
                .map(|a| {
                    FunctionTable::new(
                        frame.rank().clone(),
                        q,
                        extension.iter().map(|&i| endos[i].apply(a)).collect(),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            (Some(extension), Some(conjugates))
        } else {
            (None, None)
        };

        Ok(Representation {
            frame: frame.clone(),
            size: q,
            endos,
            samples,
            bijectivity,
            extension,
            conjugates,
        })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn carrier_size(&self) -> usize {
        self.size
    }

    pub fn endomorphisms(&self) -> &[UnaryMap] {
        &self.endos
    }

    pub fn contains_endomorphism(&self, h: &UnaryMap) -> bool {
        self.endos.binary_search(h).is_ok()
    }

    /// `r_U(h_i)`.
    pub fn sample(&self, i: usize) -> &[Elem] {
        &self.samples[i]
    }

    pub fn bijectivity(&self) -> &Bijectivity {
        &self.bijectivity
    }

    pub fn is_bijective(&self) -> bool {
        self.bijectivity == Bijectivity::Bijective
    }

    /// `η_M`, the endomorphism with matrix `M`.
    pub fn extension(&self, matrix: &[Elem]) -> Option<&UnaryMap> {
        let ext = self.extension.as_ref()?;
        (matrix.len() == self.frame.rank().len() && matrix.iter().all(|&m| m < self.size))
            .then(|| &self.endos[ext[encode(self.size, matrix)]])
    }

    pub fn conjugates(&self) -> Option<&[FunctionTable]> {
        self.conjugates.as_deref()
    }

    pub fn conjugate(&self, a: Elem) -> Option<&FunctionTable> {
        self.conjugates.as_ref().map(|c| &c[a])
    }

    /// The algebra on the same carrier whose operations are the `χ_a`.
    pub fn conjugate_algebra(&self, carrier: &Carrier) -> Option<Result<Algebra>> {
        let chi = self.conjugates.as_ref()?;
        let ops = chi
            .iter()
            .enumerate()
            .map(|(a, t)| {
                Operation::tabulated(
                    format!("χ[{}]", carrier.name(a)),
                    t.arity().clone(),
                    self.size,
                    t.values().to_vec(),
                )
            })
            .collect::<Result<Vec<_>>>();
        Some(ops.and_then(|ops| Algebra::new("conjugates", carrier.clone(), ops)))
    }
}

/// How the elementary route to `χ` ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ElementaryRoute {
    Exists,
    NotGenerator {
        unreachable: Vec<Elem>,
    },
    NotIndependent {
        value: Elem,
        first: String,
        second: String,
    },
}

/// First `(h, a, M)` where `h(χ_a(M)) ≠ χ_a(h · M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationViolation {
    pub map: Vec<Elem>,
    pub element: Elem,
    pub matrix: Vec<Elem>,
}

/// Outcome of comparing the elementary generator with the representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisCriterion {
    /// `U` generates the carrier, the premise of the criterion.
    pub premise: bool,
    pub elementary: ElementaryRoute,
    pub bijective: bool,
    /// Both routes agree on existence; `None` when the premise fails.
    pub biconditional: Option<bool>,
    /// The elementary `χ_a` equal the tables read from `η`.
    pub conjugates_agree: Option<bool>,
    /// Cases of `h(χ_a(M)) = χ_a(h · M)` checked over the endomorphisms.
    pub conjugation_cases: u64,
    pub conjugation_violation: Option<ConjugationViolation>,
    pub endomorphisms: usize,
    pub conjugate_endomorphisms: Option<usize>,
    /// The conjugate algebra has exactly the same endomorphisms.
    pub same_endomorphisms: Option<bool>,
}

impl BasisCriterion {
    pub fn holds(&self) -> bool {
        if !self.premise {
            return true;
        }
        self.biconditional == Some(true)
            && self.conjugates_agree != Some(false)
            && self.conjugation_violation.is_none()
            && self.same_endomorphisms != Some(false)
    }
}

/// Checks that a generating frame has an elementary function generator
/// exactly when its sampling is bijective, and that in that case the
/// conjugate algebra has the same endomorphisms as the original.
pub fn verify_basis_criterion(
    alg: &Algebra,
    rep: &Representation,
    limits: &Limits,
) -> Result<BasisCriterion> {
    let frame = rep.frame();
    let q = alg.size();
    let outcome = elementary_generator(alg, frame, limits.max_tables)?;
    let premise = !matches!(outcome, GeneratorOutcome::NotGenerator { .. });
    let elementary = match &outcome {
        GeneratorOutcome::Generator(_) => ElementaryRoute::Exists,
        GeneratorOutcome::NotGenerator { unreachable } => ElementaryRoute::NotGenerator {
            unreachable: unreachable.clone(),
        },
        GeneratorOutcome::NotIndependent {
            value,
            first,
            second,
        } => ElementaryRoute::NotIndependent {
            value: *value,
            first: first.witness.render(alg, frame.rank()),
            second: second.witness.render(alg, frame.rank()),
        },
    };
    let bijective = rep.is_bijective();
    let mut report = BasisCriterion {
        premise,
        biconditional: premise.then_some((elementary == ElementaryRoute::Exists) == bijective),
        elementary,
        bijective,
        conjugates_agree: None,
        conjugation_cases: 0,
        conjugation_violation: None,
        endomorphisms: rep.endomorphisms().len(),
        conjugate_endomorphisms: None,
        same_endomorphisms: None,
    };
    let (Some(generator), Some(chi)) = (outcome.generator(), rep.conjugates()) else {
        return Ok(report);
    };
    report.conjugates_agree = Some(generator.tables().zip(chi).all(|(a, b)| a == b));

    let x = frame.rank().len();
    let matrices = checked_tuple_count(q, x, "matrices", limits.max_cases)?;
    let mut image = vec![0; x];
    let mut point = vec![0; x];
    'outer: for h in rep.endomorphisms() {
        for (a, table) in chi.iter().enumerate() {
            for m in 0..matrices {
                decode_into(q, m, &mut point);
                for (slot, &p) in image.iter_mut().zip(&point) {
                    *slot = h.apply(p);
                }
                report.conjugation_cases += 1;
                if h.apply(table.value_at_index(m)) != table.apply(&image) {
                    report.conjugation_violation = Some(ConjugationViolation {
                        map: h.values().to_vec(),
                        element: a,
                        matrix: point.clone(),
                    });
                    break 'outer;
                }
            }
        }
    }

    let conjugate_alg = rep.conjugate_algebra(alg.carrier()).expect("bijective")?;
    let conjugate_endos = enumerate_endomorphisms(&conjugate_alg, Method::Backtrack, limits)?;
    report.conjugate_endomorphisms = Some(conjugate_endos.len());
    report.same_endomorphisms = Some(conjugate_endos == rep.endomorphisms());
    Ok(report)
}
