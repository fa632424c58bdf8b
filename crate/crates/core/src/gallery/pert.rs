//! Project-scheduling algebra. Elements are partial schedules, i.e. partial
//! maps from events to natural times, under the empty schedule `0`, the
//! pointwise-max join `⊔` and the parallel successor `s`. A project matrix
//! `M` assigns each event the times of its outgoing activities; `η_M` is one
//! step of the forward pass.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{differ, sampled_law};
use crate::algebra::Rank;
use crate::commutativity::{sampled_commutativity, sampled_conjugate_commutation, SampledLaw};
use crate::error::{Error, Result};
use crate::symbolic::{seeded_rng, OpSignature, SymbolicAlgebra, SymbolicBasis};

/// A partial schedule.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schedule(pub BTreeMap<String, u64>);

impl Schedule {
    pub fn empty() -> Self {
        Schedule::default()
    }

    pub fn single(event: &str, time: u64) -> Self {
        Schedule(BTreeMap::from([(event.to_string(), time)]))
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, u64)]) -> Self {
        Schedule(
            pairs
                .iter()
                .map(|(e, t)| (e.as_ref().to_string(), *t))
                .collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, event: &str) -> Option<u64> {
        self.0.get(event).copied()
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    /// `a ⊔ b`: pointwise max over the union of the domains.
    pub fn join(&self, other: &Schedule) -> Schedule {
        let mut out = self.0.clone();
        for (e, &t) in &other.0 {
            let slot = out.entry(e.clone()).or_insert(t);
            *slot = (*slot).max(t);
        }
        Schedule(out)
    }

    /// `s^n(a)`: every time deferred by `n`.
    pub fn delay(&self, n: u64) -> Result<Schedule> {
        self.0
            .iter()
            .map(|(e, &t)| {
                t.checked_add(n)
                    .map(|v| (e.clone(), v))
                    .ok_or(Error::Overflow("schedule delay"))
            })
            .collect::<Result<_>>()
            .map(Schedule)
    }

    pub fn successor(&self) -> Result<Schedule> {
        self.delay(1)
    }

    /// Largest time, `None` for the empty schedule.
    pub fn max_time(&self) -> Option<u64> {
        self.0.values().copied().max()
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let items: Vec<String> = self.0.iter().map(|(e, t)| format!("({e},{t})")).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// A project: the event set and, for each event, the schedule of its
/// successors' activity times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PertProject {
    events: Vec<String>,
    rows: Vec<Schedule>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectFile {
    pub events: Vec<String>,
    #[serde(rename = "M")]
    pub m: Vec<ProjectRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectRow {
    pub event: String,
    pub successors: Vec<Activity>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Activity {
    pub event: String,
    pub time: u64,
}

impl PertProject {
    /// Rows are given in event order; every scheduled event must be known.
    pub fn new(events: Vec<String>, rows: Vec<Schedule>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for e in &events {
            if !seen.insert(e.as_str()) {
                return Err(Error::DuplicateLabel(e.clone()));
            }
        }
        if rows.len() != events.len() {
            return Err(Error::ArityMismatch(format!(
                "{} events but {} rows",
                events.len(),
                rows.len()
            )));
        }
        for row in &rows {
            if let Some(e) = row.domain().find(|e| !seen.contains(e)) {
                return Err(Error::UnknownElement {
                    context: "project successors".into(),
                    name: e.to_string(),
                });
            }
        }
        Ok(PertProject { events, rows })
    }

    pub fn events(&self) -> &[String] {
        &self.events
    }

    pub fn rows(&self) -> &[Schedule] {
        &self.rows
    }

    pub fn row(&self, event: &str) -> Option<&Schedule> {
        self.events
            .iter()
            .position(|e| e == event)
            .map(|i| &self.rows[i])
    }

    /// Events without a row get the empty schedule.
    pub fn from_file(file: ProjectFile) -> Result<Self> {
        let mut rows = vec![None; file.events.len()];
        for row in file.m {
            let i = file
                .events
                .iter()
                .position(|e| *e == row.event)
                .ok_or_else(|| Error::UnknownElement {
                    context: "project rows".into(),
                    name: row.event.clone(),
                })?;
            if rows[i].is_some() {
                return Err(Error::DuplicateRow { symbol: row.event });
            }
            let mut sched = BTreeMap::new();
            for a in row.successors {
                if sched.insert(a.event.clone(), a.time).is_some() {
                    return Err(Error::DuplicateRow {
                        symbol: format!("{} -> {}", row.event, a.event),
                    });
                }
            }
            rows[i] = Some(Schedule(sched));
        }
        PertProject::new(
            file.events,
            rows.into_iter().map(Option::unwrap_or_default).collect(),
        )
    }

    pub fn to_file(&self) -> ProjectFile {
        ProjectFile {
            events: self.events.clone(),
            m: self
                .events
                .iter()
                .zip(&self.rows)
                .map(|(e, row)| ProjectRow {
                    event: e.clone(),
                    successors: row
                        .0
                        .iter()
                        .map(|(s, &t)| Activity {
                            event: s.clone(),
                            time: t,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        PertProject::from_file(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        PertProject::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }
}

/// The four-event project `a -> b (1)`, `a -> c (3)`, `b -> d (7)`,
/// `c -> d (2)`.
pub fn diamond_project() -> PertProject {
    let events: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
    let rows = vec![
        Schedule::from_pairs(&[("b", 1), ("c", 3)]),
        Schedule::from_pairs(&[("d", 7)]),
        Schedule::from_pairs(&[("d", 2)]),
        Schedule::empty(),
    ];
    PertProject::new(events, rows).expect("well formed")
}

/// `η_M(a)` with `M` given by rows in `events` order.
fn eta_rows(events: &[String], rows: &[Schedule], a: &Schedule) -> Result<Schedule> {
    let mut out: BTreeMap<String, u64> = BTreeMap::new();
    for (x, &ax) in &a.0 {
        let i = events
            .iter()
            .position(|e| e == x)
            .ok_or_else(|| Error::UnknownElement {
                context: "schedule".into(),
                name: x.clone(),
            })?;
        for (y, &my) in &rows[i].0 {
            let t = my.checked_add(ax).ok_or(Error::Overflow("activity time"))?;
            let slot = out.entry(y.clone()).or_insert(t);
            *slot = (*slot).max(t);
        }
    }
    Ok(Schedule(out))
}

/// One forward-pass step: `[η_M(a)]_y = max{M_x(y) + a(x)}`.
pub fn pert_eta(project: &PertProject, a: &Schedule) -> Result<Schedule> {
    eta_rows(&project.events, &project.rows, a)
}

/// Iterates `η_M` from `seed` until the empty schedule. The seed itself is
/// not part of the trajectory, which always ends with `∅`.
pub fn forward_pass(project: &PertProject, seed: &Schedule) -> Result<Vec<Schedule>> {
    let mut trajectory = Vec::new();
    let mut current = seed.clone();
    for _ in 0..=project.events.len() {
        let next = pert_eta(project, &current)?;
        trajectory.push(next.clone());
        if next.is_empty() {
            return Ok(trajectory);
        }
        current = next;
    }
    let witness = current.domain().next().unwrap_or_default().to_string();
    Err(Error::Cycle(witness))
}

/// Earliest event times: the join of the seed and its whole trajectory.
pub fn earliest_times(project: &PertProject, seed: &Schedule) -> Result<Schedule> {
    Ok(forward_pass(project, seed)?
        .iter()
        .fold(seed.clone(), |acc, s| acc.join(s)))
}

/// A dilatation of the scheduling algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "delay", rename_all = "kebab-case")]
pub enum PertDilatation {
    /// `k_∅`.
    EmptyConstant,
    /// `s^n`.
    Delay(u64),
}

impl PertDilatation {
    pub fn apply(self, a: &Schedule) -> Result<Schedule> {
        match self {
            PertDilatation::EmptyConstant => Ok(Schedule::empty()),
            PertDilatation::Delay(n) => a.delay(n),
        }
    }

    /// `self · other`.
    pub fn compose(self, other: PertDilatation) -> Result<PertDilatation> {
        match (self, other) {
            (PertDilatation::Delay(n), PertDilatation::Delay(m)) => n
                .checked_add(m)
                .map(PertDilatation::Delay)
                .ok_or(Error::Overflow("delay composition")),
            _ => Ok(PertDilatation::EmptyConstant),
        }
    }

    /// `k_∅ ↦ 0`, `s^n ↦ n + 1`.
    pub fn as_natural(self) -> Result<u64> {
        match self {
            PertDilatation::EmptyConstant => Ok(0),
            PertDilatation::Delay(n) => n
                .checked_add(1)
                .ok_or(Error::Overflow("delay identification")),
        }
    }
}

impl fmt::Display for PertDilatation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PertDilatation::EmptyConstant => write!(f, "k_∅"),
            PertDilatation::Delay(n) => write!(f, "s^{n}"),
        }
    }
}

/// `μ(a)`, the largest time of a non-empty schedule.
pub fn mu(a: &Schedule) -> Option<u64> {
    a.max_time()
}

/// `γ_a`: `k_∅` for the empty schedule, otherwise the delay `s^μ(a)`.
pub fn gamma(a: &Schedule) -> PertDilatation {
    mu(a).map_or(PertDilatation::EmptyConstant, PertDilatation::Delay)
}

/// `ν(a)`: `0` for `∅`, otherwise `μ(a) + 1`.
pub fn nu(a: &Schedule) -> Result<u64> {
    gamma(a).as_natural()
}

/// Successor on the naturals fixing 0.
pub fn nat_successor(n: u64) -> Result<u64> {
    if n == 0 {
        Ok(0)
    } else {
        n.checked_add(1).ok_or(Error::Overflow("natural successor"))
    }
}

/// `n ⊕ m = n + m − 1` when both are nonzero, otherwise 0.
pub fn nat_oplus(n: u64, m: u64) -> Result<u64> {
    if n == 0 || m == 0 {
        Ok(0)
    } else {
        n.checked_add(m - 1).ok_or(Error::Overflow("natural ⊕"))
    }
}

/// `j_a(x)`: `k_∅` off the domain of `a`, otherwise `s^a(x)`.
pub fn j(a: &Schedule, events: &[String]) -> Result<Vec<PertDilatation>> {
    if let Some(e) = a.domain().find(|e| !events.iter().any(|x| x == e)) {
        return Err(Error::UnknownElement {
            context: "schedule".into(),
            name: e.to_string(),
        });
    }
    Ok(events
        .iter()
        .map(|x| {
            a.get(x)
                .map_or(PertDilatation::EmptyConstant, PertDilatation::Delay)
        })
        .collect())
}

/// Inverse of [`j`].
pub fn j_inverse(events: &[String], deltas: &[PertDilatation]) -> Schedule {
    Schedule(
        events
            .iter()
            .zip(deltas)
            .filter_map(|(x, d)| match d {
                PertDilatation::Delay(n) => Some((x.clone(), *n)),
                PertDilatation::EmptyConstant => None,
            })
            .collect(),
    )
}

pub const MAX_SAMPLED_TIME: u64 = 20;
pub const MAX_SAMPLED_NATURAL: u64 = 1_000_000;

/// The scheduling algebra over a fixed event set.
#[derive(Debug, Clone)]
pub struct PertAlgebra {
    events: Vec<String>,
    signature: Vec<OpSignature>,
}

impl PertAlgebra {
    pub fn new(events: Vec<String>) -> Self {
        PertAlgebra {
            events,
            signature: vec![
                OpSignature::new("0", Rank::nullary()),
                OpSignature::new("⊔", Rank::numbered(2)),
                OpSignature::new("s", Rank::numbered(1)),
            ],
        }
    }

    pub fn events(&self) -> &[String] {
        &self.events
    }

    /// A random project matrix over the event set.
    pub fn sample_matrix(&self, rng: &mut ChaCha8Rng) -> Vec<Schedule> {
        self.events.iter().map(|_| self.sample(rng)).collect()
    }
}

impl SymbolicAlgebra for PertAlgebra {
    type Elem = Schedule;

    fn name(&self) -> &str {
        "project schedules"
    }

    fn signature(&self) -> &[OpSignature] {
        &self.signature
    }

    fn apply(&self, op: usize, args: &[Schedule]) -> Result<Schedule> {
        match op {
            0 => Ok(Schedule::empty()),
            1 => Ok(args[0].join(&args[1])),
            _ => args[0].successor(),
        }
    }

    /// Each event is scheduled with probability one half.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Schedule {
        let mut out = BTreeMap::new();
        for e in &self.events {
            if rng.gen_bool(0.5) {
                out.insert(e.clone(), rng.gen_range(0..=MAX_SAMPLED_TIME));
            }
        }
        Schedule(out)
    }
}

impl SymbolicBasis for PertAlgebra {
    /// `U_x = {(x, 0)}`.
    fn frame(&self) -> Vec<Schedule> {
        self.events.iter().map(|e| Schedule::single(e, 0)).collect()
    }

    fn conjugate(&self, a: &Schedule, matrix: &[Schedule]) -> Result<Schedule> {
        eta_rows(&self.events, matrix, a)
    }
}

/// A natural number biased towards the special values 0 and 1.
fn sample_natural(rng: &mut ChaCha8Rng) -> u64 {
    match rng.gen_range(0..8) {
        0 => 0,
        1 => 1,
        _ => rng.gen_range(0..=MAX_SAMPLED_NATURAL),
    }
}

fn sample_dilatation(rng: &mut ChaCha8Rng) -> PertDilatation {
    if rng.gen_range(0..6) == 0 {
        PertDilatation::EmptyConstant
    } else {
        PertDilatation::Delay(rng.gen_range(0..=MAX_SAMPLED_TIME))
    }
}

/// Every sampled identity of the scheduling example over `events`.
pub fn pert_check(events: &[String], samples: u64, seed: u64) -> Result<Vec<SampledLaw>> {
    let alg = PertAlgebra::new(events.to_vec());
    let frame = alg.frame();
    let mut laws = Vec::new();

    let mut rng = seeded_rng(seed, 0x20);
    laws.extend(sampled_commutativity(&alg, samples, &mut rng)?);
    let mut rng = seeded_rng(seed, 0x21);
    laws.push(sampled_conjugate_commutation(&alg, samples, &mut rng)?);

    let mut rng = seeded_rng(seed, 0x22);
    laws.push(sampled_law(
        "η_M sends the frame to the rows of M",
        samples,
        |_| {
            let m = alg.sample_matrix(&mut rng);
            for (u, row) in frame.iter().zip(&m) {
                let got = alg.conjugate(u, &m)?;
                if let Some(w) = differ(|| vec![u.to_string(), format!("{m:?}")], &got, row) {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        },
    )?);

    let mut rng = seeded_rng(seed, 0x23);
    laws.push(sampled_law("η_M is an endomorphism", samples, |_| {
        let m = alg.sample_matrix(&mut rng);
        let (a, b) = (alg.sample(&mut rng), alg.sample(&mut rng));
        let eta = |x: &Schedule| alg.conjugate(x, &m);
        let inputs = || vec![a.to_string(), b.to_string()];
        Ok(differ(inputs, eta(&a.join(&b))?, eta(&a)?.join(&eta(&b)?))
            .or(differ(inputs, eta(&a.successor()?)?, eta(&a)?.successor()?))
            .or(differ(inputs, eta(&Schedule::empty())?, Schedule::empty())))
    })?);

    let mut rng = seeded_rng(seed, 0x24);
    laws.push(sampled_law(
        "schedules decompose over delayed frame members",
        samples,
        |_| {
            let a = alg.sample(&mut rng);
            let mut rebuilt = Schedule::empty();
            for (x, u) in events.iter().zip(&frame) {
                if let Some(t) = a.get(x) {
                    rebuilt = rebuilt.join(&u.delay(t)?);
                }
            }
            Ok(differ(|| vec![a.to_string()], rebuilt, a.clone()))
        },
    )?);

    let mut rng = seeded_rng(seed, 0x25);
    laws.push(sampled_law(
        "γ_a agrees with χ_a on constant matrices",
        samples,
        |_| {
            let (a, b) = (alg.sample(&mut rng), alg.sample(&mut rng));
            let constant = vec![b.clone(); events.len()];
            Ok(differ(
                || vec![a.to_string(), b.to_string()],
                gamma(&a).apply(&b)?,
                alg.conjugate(&a, &constant)?,
            ))
        },
    )?);

    let mut rng = seeded_rng(seed, 0x26);
    laws.push(sampled_law(
        "ν is a homomorphism onto the natural semilattice",
        samples,
        |_| {
            let (a, b) = (alg.sample(&mut rng), alg.sample(&mut rng));
            let inputs = || vec![a.to_string(), b.to_string()];
            Ok(differ(inputs, nu(&a.join(&b))?, nu(&a)?.max(nu(&b)?))
                .or(differ(
                    inputs,
                    nu(&a.successor()?)?,
                    nat_successor(nu(&a)?)?,
                ))
                .or(differ(inputs, nu(&Schedule::empty())?, 0)))
        },
    )?);

    let mut rng = seeded_rng(seed, 0x27);
    laws.push(sampled_law(
        "⊕ is a commutative monoid with unit 1 and absorbing 0",
        samples,
        |_| {
            let (n, m, k) = (
                sample_natural(&mut rng),
                sample_natural(&mut rng),
                sample_natural(&mut rng),
            );
            let inputs = || vec![n.to_string(), m.to_string(), k.to_string()];
            Ok(differ(
                inputs,
                nat_oplus(nat_oplus(n, m)?, k)?,
                nat_oplus(n, nat_oplus(m, k)?)?,
            )
            .or(differ(inputs, nat_oplus(n, m)?, nat_oplus(m, n)?))
            .or(differ(inputs, nat_oplus(1, n)?, n))
            .or(differ(inputs, nat_oplus(0, n)?, 0)))
        },
    )?);

    let mut rng = seeded_rng(seed, 0x28);
    laws.push(sampled_law(
        "composition of dilatations maps to ⊕",
        samples,
        |_| {
            let (d, e) = (sample_dilatation(&mut rng), sample_dilatation(&mut rng));
            let a = alg.sample(&mut rng);
            let inputs = || vec![d.to_string(), e.to_string(), a.to_string()];
            let de = d.compose(e)?;
            Ok(differ(
                inputs,
                de.as_natural()?,
                nat_oplus(d.as_natural()?, e.as_natural()?)?,
            )
            .or(differ(inputs, de.apply(&a)?, d.apply(&e.apply(&a)?)?)))
        },
    )?);

    let mut rng = seeded_rng(seed, 0x29);
    laws.push(sampled_law(
        "j and its inverse are mutually inverse",
        samples,
        |_| {
            let a = alg.sample(&mut rng);
            let deltas: Vec<PertDilatation> =
                events.iter().map(|_| sample_dilatation(&mut rng)).collect();
            let back = j(&j_inverse(events, &deltas), events)?;
            Ok(differ(
                || vec![a.to_string()],
                j_inverse(events, &j(&a, events)?),
                a.clone(),
            )
            .or(differ(
                || vec![format!("{deltas:?}")],
                format!("{back:?}"),
                format!("{deltas:?}"),
            )))
        },
    )?);

    Ok(laws)
}
