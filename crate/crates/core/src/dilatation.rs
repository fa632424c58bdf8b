//! Dilatations (`Δ = E ∩ L′`), their indicators, the generator
//! `γ_d = χ_d · k`, and the endowed dilatation monoid built over `Δ`.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    checked_tuple_count, decode_into, encode, Algebra, Carrier, Elem, Odometer, Rank, SetAryOp,
    UnaryMap,
};
use crate::commutativity::{check_conjugate_commutation, is_commutative};
use crate::elementary::rankless;
use crate::error::{Error, Result};
use crate::representation::Representation;
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DilatationAnalysis {
    /// `E ∩ L′`, sorted.
    pub delta: Vec<UnaryMap>,
    /// `χ_d · k` for every element `d`.
    pub equalized: Vec<UnaryMap>,
    /// Index into `delta` of `γ_d`, or `None` when `d` is no indicator.
    pub gamma: Vec<Option<usize>>,
    /// `I_δ` for each member of `delta`.
    pub indicators: Vec<Vec<Elem>>,
    pub full: bool,
    /// Indicators found through `Δ` and through `E` coincide, and the
    /// `γ` images cover `Δ` whenever they are required to.
    pub routes_agree: bool,
    /// The frame is empty, so the identity is the dilatation without indicators.
    pub empty_frame: bool,
}

impl DilatationAnalysis {
    pub fn indicator_set(&self) -> Vec<Elem> {
        (0..self.gamma.len())
            .filter(|&d| self.gamma[d].is_some())
            .collect()
    }

    pub fn non_indicators(&self) -> Vec<Elem> {
        (0..self.gamma.len())
            .filter(|&d| self.gamma[d].is_none())
            .collect()
    }

    /// Members of `Δ` with no indicator.
    pub fn indicatorless(&self) -> Vec<usize> {
        (0..self.delta.len())
            .filter(|&i| self.indicators[i].is_empty())
            .collect()
    }

    pub fn position(&self, h: &UnaryMap) -> Option<usize> {
        self.delta.binary_search(h).ok()
    }
}

pub fn analyze_dilatations(
    alg: &Algebra,
    rep: &Representation,
    limits: &Limits,
) -> Result<DilatationAnalysis> {
    let chi = rep
        .conjugates()
        .ok_or_else(|| Error::NotABasis("dilatations need a bijective sampling".into()))?;
    let q = alg.size();
    let lprime = rankless(alg, limits.max_tables)?;
    let delta: Vec<UnaryMap> = rep
        .endomorphisms()
        .iter()
        .filter(|h| lprime.contains(*h))
        .cloned()
        .collect();

    let x = rep.frame().rank().len();
    let equalized: Vec<UnaryMap> = chi
        .iter()
        .map(|t| {
            UnaryMap::new(
                (0..q)
                    .map(|a| t.value_at_index(encode(q, &vec![a; x])))
                    .collect(),
            )
        })
        .collect();
    let via_delta: Vec<Option<usize>> = equalized
        .iter()
        .map(|e| delta.binary_search(e).ok())
        .collect();
    let via_endos: Vec<bool> = equalized
        .iter()
        .map(|e| rep.contains_endomorphism(e))
        .collect();

    let mut indicators = vec![Vec::new(); delta.len()];
    for (d, g) in via_delta.iter().enumerate() {
        if let Some(i) = g {
            indicators[*i].push(d);
        }
    }
    let full = via_delta.iter().all(Option::is_some);
    let empty_frame = x == 0;
    let same_indicators = via_delta
        .iter()
        .zip(&via_endos)
        .all(|(a, b)| a.is_some() == *b);
    let covered = indicators.iter().all(|i| !i.is_empty());
    let identity_only = delta.len() == 1 && delta[0].is_identity();
    let routes_agree = same_indicators && (!full || covered) && (!empty_frame || identity_only);

    Ok(DilatationAnalysis {
        delta,
        equalized,
        gamma: via_delta,
        indicators,
        full,
        routes_agree,
        empty_frame,
    })
}

/// The operation `φ_f` induced on `Δ` by `φ_f(ε)(a) = f(ε_r(a))_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageOp {
    pub symbol: String,
    pub rank: Rank,
    /// Every value of `φ_f` lies in `Δ`.
    pub inherited: bool,
    /// Indices into `Δ`, over `Δ^R` in canonical order; present when inherited.
    pub table: Option<Vec<usize>>,
}

impl ImageOp {
    pub fn apply(&self, delta_size: usize, args: &[usize]) -> Option<usize> {
        self.table.as_ref().map(|t| t[encode(delta_size, args)])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndowedMonoid {
    pub delta: Vec<UnaryMap>,
    pub unit: usize,
    /// `product[i][j]` is the index of `δ_i · δ_j`.
    pub product: Vec<Vec<usize>>,
    pub image_ops: Vec<ImageOp>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MonoidOutcome {
    Built(EndowedMonoid),
    /// Not every element is an indicator. The partial monoid keeps only the
    /// image operations that stay inside `Δ`.
    NotFull {
        non_indicators: Vec<Elem>,
        partial: EndowedMonoid,
    },
}

impl MonoidOutcome {
    pub fn built(&self) -> Option<&EndowedMonoid> {
        match self {
            MonoidOutcome::Built(m) => Some(m),
            MonoidOutcome::NotFull { .. } => None,
        }
    }
}

pub fn build_endowed_monoid(
    alg: &Algebra,
    analysis: &DilatationAnalysis,
    limits: &Limits,
) -> Result<MonoidOutcome> {
    let delta = &analysis.delta;
    let n = delta.len();
    let find = |h: &UnaryMap| delta.binary_search(h).ok();
    let unit = delta
        .iter()
        .position(UnaryMap::is_identity)
        .ok_or_else(|| Error::Inconsistent("identity is not a dilatation".into()))?;
    let product = delta
        .iter()
        .map(|a| {
            delta
                .iter()
                .map(|b| {
                    find(&a.compose(b)).ok_or_else(|| {
                        Error::Inconsistent("dilatations not closed under composition".into())
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let q = alg.size();
    let mut image_ops = Vec::with_capacity(alg.operations().len());
    for op in alg.operations() {
        let r = op.rank().len();
        checked_tuple_count(n, r, "image operation rows", limits.max_cases)?;
        let mut table = Vec::new();
        let mut inherited = true;
        let mut eps = Odometer::new(n, r);
        let mut args = vec![0; r];
        while let Some(e) = eps.next_tuple() {
            let phi = UnaryMap::new(
                (0..q)
                    .map(|a| {
                        for (slot, &i) in args.iter_mut().zip(e) {
                            *slot = delta[i].apply(a);
                        }
                        op.apply(&args)
                    })
                    .collect(),
            );
            match find(&phi) {
                Some(i) => table.push(i),
                None => {
                    inherited = false;
                    break;
                }
            }
        }
        image_ops.push(ImageOp {
            symbol: op.symbol().to_string(),
            rank: op.rank().clone(),
            inherited,
            table: inherited.then_some(table),
        });
    }
    let monoid = EndowedMonoid {
        delta: delta.clone(),
        unit,
        product,
        image_ops,
    };

    if !analysis.full {
        return Ok(MonoidOutcome::NotFull {
            non_indicators: analysis.non_indicators(),
            partial: monoid,
        });
    }
    if let Some(op) = monoid.image_ops.iter().find(|o| !o.inherited) {
        return Err(Error::Inconsistent(format!(
            "image of `{}` leaves Δ on a full carrier",
            op.symbol
        )));
    }
    // γ(f(a)) = φ_f(γ · a) for every argument tuple.
    for (op, image) in alg.operations().iter().zip(&monoid.image_ops) {
        let mut args = Odometer::new(q, op.rank().len());
        let mut gammas = vec![0; op.rank().len()];
        while let Some(a) = args.next_tuple() {
            for (slot, &e) in gammas.iter_mut().zip(a) {
                *slot = analysis.gamma[e].expect("full");
            }
            if analysis.gamma[op.apply(a)] != image.apply(n, &gammas) {
                return Err(Error::Inconsistent(format!(
                    "γ is not a homomorphism for `{}`",
                    op.symbol()
                )));
            }
        }
    }
    Ok(MonoidOutcome::Built(monoid))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonoidLaws {
    pub associative: bool,
    pub unit: bool,
    pub commutative: bool,
    pub constant_members: usize,
}

impl MonoidLaws {
    pub fn hold(&self) -> bool {
        self.associative && self.unit && self.commutative && self.constant_members <= 1
    }
}

pub fn monoid_laws(m: &EndowedMonoid) -> MonoidLaws {
    let n = m.delta.len();
    let p = &m.product;
    let associative =
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| p[p[a][b]][c] == p[a][p[b][c]])));
    let unit = (0..n).all(|a| p[m.unit][a] == a && p[a][m.unit] == a);
    let commutative = (0..n).all(|a| (0..n).all(|b| p[a][b] == p[b][a]));
    let constant_members = m
        .delta
        .iter()
        .filter(|d| d.constant_value().is_some())
        .count();
    MonoidLaws {
        associative,
        unit,
        commutative,
        constant_members,
    }
}

/// First failing instance of a distributive law, as indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub symbol: String,
    pub dilatation: usize,
    pub args: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Distributivities {
    /// `δ · φ(ε) = φ(b_δ · ε)`.
    pub homogeneous_cases: u64,
    pub homogeneous_failure: Option<LawFailure>,
    /// `φ(ε)(a) = f(c_ε(a))`; `args` holds `ε` then `a`.
    pub image_cases: u64,
    pub image_failure: Option<LawFailure>,
    /// `δ(f(a)) = f(δ · a)`; `args` holds the element tuple `a`.
    pub application_cases: u64,
    pub application_failure: Option<LawFailure>,
}

impl Distributivities {
    pub fn hold(&self) -> bool {
        self.homogeneous_failure.is_none()
            && self.image_failure.is_none()
            && self.application_failure.is_none()
    }
}

/// Checks the three distributive laws exhaustively for the inherited
/// image operations.
pub fn check_distributivities(
    alg: &Algebra,
    m: &EndowedMonoid,
    limits: &Limits,
) -> Result<Distributivities> {
    let n = m.delta.len();
    let q = alg.size();
    let mut out = Distributivities {
        homogeneous_cases: 0,
        homogeneous_failure: None,
        image_cases: 0,
        image_failure: None,
        application_cases: 0,
        application_failure: None,
    };
    for (op, image) in alg.operations().iter().zip(&m.image_ops) {
        let r = op.rank().len();
        let symbol = op.symbol().to_string();
        if image.inherited {
            checked_tuple_count(n, r, "distributivity cases", limits.max_cases)?;
            let mut shifted = vec![0; r];
            let mut cell = vec![0; r];
            let mut eps = Odometer::new(n, r);
            while let Some(e) = eps.next_tuple() {
                let phi = image.apply(n, e).expect("inherited");
                for d in 0..n {
                    out.homogeneous_cases += 1;
                    for (slot, &i) in shifted.iter_mut().zip(e) {
                        *slot = m.product[d][i];
                    }
                    if out.homogeneous_failure.is_none()
                        && m.product[d][phi] != image.apply(n, &shifted).expect("inherited")
                    {
                        out.homogeneous_failure = Some(LawFailure {
                            symbol: symbol.clone(),
                            dilatation: d,
                            args: e.to_vec(),
                        });
                    }
                }
                for a in 0..q {
                    out.image_cases += 1;
                    for (slot, &i) in cell.iter_mut().zip(e) {
                        *slot = m.delta[i].apply(a);
                    }
                    if out.image_failure.is_none() && m.delta[phi].apply(a) != op.apply(&cell) {
                        let mut args = e.to_vec();
                        args.push(a);
                        out.image_failure = Some(LawFailure {
                            symbol: symbol.clone(),
                            dilatation: phi,
                            args,
                        });
                    }
                }
            }
        }
        checked_tuple_count(q, r, "distributivity cases", limits.max_cases)?;
        let mut args = Odometer::new(q, r);
        let mut image_args = vec![0; r];
        while let Some(a) = args.next_tuple() {
            for (d, delta) in m.delta.iter().enumerate() {
                out.application_cases += 1;
                for (slot, &e) in image_args.iter_mut().zip(a) {
                    *slot = delta.apply(e);
                }
                if out.application_failure.is_none()
                    && delta.apply(op.apply(a)) != op.apply(&image_args)
                {
                    out.application_failure = Some(LawFailure {
                        symbol: symbol.clone(),
                        dilatation: d,
                        args: a.to_vec(),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Commutativity implies fullness and an endowed monoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutativeFullness {
    pub commutative: bool,
    pub full: bool,
    pub monoid_built: bool,
    /// Every `χ_a · k` is an endomorphism.
    pub equalized_endomorphisms: usize,
    /// `None` when not commutative or when the check exceeds the case guard.
    pub conjugates_commute: Option<bool>,
    pub holds: bool,
}

pub fn check_commutative_fullness(
    alg: &Algebra,
    rep: &Representation,
    limits: &Limits,
) -> Result<CommutativeFullness> {
    let commutative = is_commutative(alg, limits, false)?.commutative;
    let analysis = analyze_dilatations(alg, rep, limits)?;
    let monoid = build_endowed_monoid(alg, &analysis, limits)?;
    let equalized_endomorphisms = analysis
        .equalized
        .iter()
        .filter(|e| rep.contains_endomorphism(e))
        .count();
    // Skipped, not failed, when the exhaustive check exceeds the case guard.
    let conjugates_commute = if commutative {
        match check_conjugate_commutation(rep, limits) {
            Ok(report) => Some(report.failure.is_none()),
            Err(Error::GuardExceeded { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let monoid_built = monoid.built().is_some();
    let holds = !commutative
        || (analysis.full
            && monoid_built
            && equalized_endomorphisms == alg.size()
            && conjugates_commute != Some(false));
    Ok(CommutativeFullness {
        commutative,
        full: analysis.full,
        monoid_built,
        equalized_endomorphisms,
        conjugates_commute,
        holds,
    })
}

/// On-disk form of an endowed monoid, with dilatations as element names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidFile {
    pub delta: Vec<Vec<String>>,
    pub unit: usize,
    pub product: Vec<Vec<usize>>,
    pub image_ops: Vec<ImageOpFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageOpFile {
    pub symbol: String,
    pub rank: Vec<String>,
    pub inherited: bool,
    pub table: Vec<ImageRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRow {
    pub args: Vec<usize>,
    pub value: usize,
}

impl EndowedMonoid {
    pub fn to_file(&self, carrier: &Carrier) -> MonoidFile {
        let n = self.delta.len();
        MonoidFile {
            delta: self.delta.iter().map(|d| d.render(carrier)).collect(),
            unit: self.unit,
            product: self.product.clone(),
            image_ops: self
                .image_ops
                .iter()
                .map(|op| ImageOpFile {
                    symbol: op.symbol.clone(),
                    rank: op.rank.labels().to_vec(),
                    inherited: op.inherited,
                    table: op
                        .table
                        .iter()
                        .flat_map(|t| {
                            t.iter().enumerate().map(|(row, &value)| {
                                let mut args = vec![0; op.rank.len()];
                                decode_into(n, row, &mut args);
                                ImageRow { args, value }
                            })
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}
