//! The file-driven commands: `endos`, `basis`, `dilatations` and
//! `commutative`.

use std::path::Path;

use algebench_core::commutativity::{
    check_conjugate_commutation, check_elementary_commutation, is_commutative, MedialWitness,
};
use algebench_core::dilatation::{
    analyze_dilatations, build_endowed_monoid, check_commutative_fullness, check_distributivities,
    monoid_laws, DilatationAnalysis, MonoidOutcome,
};
use algebench_core::representation::{
    enumerate_endomorphisms, verify_basis_criterion, Bijectivity, Method,
};
use algebench_core::{Algebra, Carrier, Elem, Frame, Rank, Representation, UnaryMap};
use serde_json::{json, Value};

use crate::report::{Outcome, Report, ReportBuilder};
use crate::{display, CliError, GlobalOpts};

pub(crate) fn names(carrier: &Carrier, elems: &[Elem]) -> Vec<String> {
    carrier.render(elems)
}

pub(crate) fn render_maps(carrier: &Carrier, maps: &[UnaryMap]) -> Vec<Vec<String>> {
    maps.iter().map(|h| h.render(carrier)).collect()
}

pub(crate) fn set_string(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

pub(crate) fn render_medial(carrier: &Carrier, w: &MedialWitness) -> Value {
    json!({
        "m": w.m.iter().map(|row| names(carrier, row)).collect::<Vec<_>>(),
        "lhs": carrier.name(w.lhs),
        "rhs": carrier.name(w.rhs),
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Brute => "brute",
        Method::Backtrack => "backtrack",
    }
}

pub fn cmd_endos(
    g: &GlobalOpts,
    path: &Path,
    method: Method,
    list: bool,
    cross_check: bool,
) -> Result<Report, CliError> {
    let alg = Algebra::load(path)?;
    let limits = g.limits();
    let mut b = ReportBuilder::new("endos", vec![display(path)], g.seed, g.samples);
    let mut found = None;
    b.check("endomorphism enumeration", || {
        let endos = enumerate_endomorphisms(&alg, method, &limits)?;
        let mut detail = json!({
            "method": method_name(method),
            "carrier_size": alg.size(),
            "count": endos.len(),
        });
        if list {
            detail["endomorphisms"] = json!(render_maps(alg.carrier(), &endos));
        }
        let summary = format!("{} endomorphisms ({})", endos.len(), method_name(method));
        found = Some(endos);
        Ok((true, summary, detail))
    })?;
    if cross_check {
        let other = match method {
            Method::Brute => Method::Backtrack,
            Method::Backtrack => Method::Brute,
        };
        b.check("brute force and backtracking agree", || {
            let first = match found {
                Some(f) => f,
                None => enumerate_endomorphisms(&alg, method, &limits)?,
            };
            let second = enumerate_endomorphisms(&alg, other, &limits)?;
            let first_only: Vec<_> = first.iter().filter(|h| second.binary_search(h).is_err()).collect();
            let second_only: Vec<_> = second.iter().filter(|h| first.binary_search(h).is_err()).collect();
            let detail = json!({
                method_name(method): first.len(),
                method_name(other): second.len(),
                "only_first": first_only.iter().map(|h| h.render(alg.carrier())).collect::<Vec<_>>(),
                "only_second": second_only.iter().map(|h| h.render(alg.carrier())).collect::<Vec<_>>(),
            });
            Ok((first == second, format!("{} vs {}", first.len(), second.len()), detail))
        })?;
    }
    Ok(b.finish())
}

pub(crate) fn bijectivity_outcome(alg: &Algebra, rep: &Representation) -> Outcome {
    let c = alg.carrier();
    let x = rep.frame().rank().len();
    let endos = rep.endomorphisms();
    let (summary, witness) = match rep.bijectivity() {
        Bijectivity::Bijective => (
            format!("{} endomorphisms, one per matrix in A^{x}", endos.len()),
            Value::Null,
        ),
        Bijectivity::NotInjective {
            first,
            second,
            sample,
        } => (
            "two endomorphisms share a sample".to_string(),
            json!({
                "kind": "not-injective",
                "first": endos[*first].render(c),
                "second": endos[*second].render(c),
                "sample": names(c, sample),
            }),
        ),
        Bijectivity::NotSurjective { missing } => (
            "a matrix extends to no endomorphism".to_string(),
            json!({ "kind": "not-surjective", "missing": names(c, missing) }),
        ),
    };
    let detail = json!({
        "frame": names(c, rep.frame().values()),
        "endomorphisms": endos.len(),
        "witness": witness,
    });
    (rep.is_bijective(), summary, detail)
}

pub(crate) fn basis_criterion_outcome(
    alg: &Algebra,
    rep: &Representation,
    g: &GlobalOpts,
) -> Result<Outcome, CliError> {
    let c = verify_basis_criterion(alg, rep, &g.limits())?;
    let summary = if !c.premise {
        "frame does not generate the carrier; nothing to compare".to_string()
    } else {
        format!(
            "elementary generator {}, sampling {}bijective",
            if c.elementary == algebench_core::representation::ElementaryRoute::Exists {
                "exists"
            } else {
                "absent"
            },
            if c.bijective { "" } else { "not " }
        )
    };
    Ok((c.holds(), summary, serde_json::to_value(&c)?))
}

pub fn cmd_basis(
    g: &GlobalOpts,
    alg_path: &Path,
    frame_path: &Path,
    method: Method,
) -> Result<Report, CliError> {
    let alg = Algebra::load(alg_path)?;
    let frame = Frame::load(frame_path, alg.carrier())?;
    let rep = Representation::build(&alg, &frame, method, &g.limits())?;
    let mut b = ReportBuilder::new(
        "basis",
        vec![display(alg_path), display(frame_path)],
        g.seed,
        g.samples,
    );
    b.check("sampling at the frame is bijective", || {
        Ok(bijectivity_outcome(&alg, &rep))
    })?;
    b.check(
        "elementary generator exists iff the frame is a basis",
        || basis_criterion_outcome(&alg, &rep, g),
    )?;
    Ok(b.finish())
}

pub(crate) fn dilatation_outcome(alg: &Algebra, a: &DilatationAnalysis) -> Outcome {
    let c = alg.carrier();
    let delta = render_maps(c, &a.delta);
    let indicators: Vec<Vec<String>> = a.indicators.iter().map(|i| names(c, i)).collect();
    let d = names(c, &a.indicator_set());
    let summary = format!("|Δ| = {}, indicators D = {}", a.delta.len(), set_string(&d));
    let detail = json!({
        "delta": delta,
        "indicators": indicators,
        "indicator_set": d,
        "non_indicators": names(c, &a.non_indicators()),
        "full": a.full,
        "routes_agree": a.routes_agree,
    });
    (a.routes_agree, summary, detail)
}

pub fn cmd_dilatations(
    g: &GlobalOpts,
    alg_path: &Path,
    frame_path: &Path,
    emit_monoid: Option<&Path>,
) -> Result<Report, CliError> {
    let alg = Algebra::load(alg_path)?;
    let frame = Frame::load(frame_path, alg.carrier())?;
    let limits = g.limits();
    let rep = Representation::build(&alg, &frame, Method::Backtrack, &limits)?;
    let mut inputs = vec![display(alg_path), display(frame_path)];
    if let Some(p) = emit_monoid {
        inputs.push(display(p));
    }
    let mut b = ReportBuilder::new("dilatations", inputs, g.seed, g.samples);
    if !b.check("sampling at the frame is bijective", || {
        Ok(bijectivity_outcome(&alg, &rep))
    })? {
        return Ok(b.finish());
    }
    let analysis = analyze_dilatations(&alg, &rep, &limits)?;
    b.check("dilatations and indicators agree via Δ and via E", || {
        Ok(dilatation_outcome(&alg, &analysis))
    })?;
    b.check("every element is an indicator", || {
        let missing = names(alg.carrier(), &analysis.non_indicators());
        let summary = if analysis.full {
            "full".to_string()
        } else {
            format!("not full; non-indicators {}", set_string(&missing))
        };
        Ok((analysis.full, summary, json!({ "non_indicators": missing })))
    })?;
    let outcome = build_endowed_monoid(&alg, &analysis, &limits)?;
    b.check("endowed dilatation monoid", || {
        Ok(monoid_outcome(&alg, &outcome))
    })?;
    if let Some(m) = outcome.built() {
        b.check("dilatation monoid laws", || {
            let laws = monoid_laws(m);
            let summary = format!(
                "commutative monoid, {} constant member(s)",
                laws.constant_members
            );
            Ok((laws.hold(), summary, serde_json::to_value(&laws)?))
        })?;
        b.check("distributive laws", || {
            let d = check_distributivities(&alg, m, &limits)?;
            let summary = format!(
                "{} homogeneous, {} image, {} application cases",
                d.homogeneous_cases, d.image_cases, d.application_cases
            );
            Ok((d.hold(), summary, serde_json::to_value(&d)?))
        })?;
        if let Some(path) = emit_monoid {
            std::fs::write(
                path,
                serde_json::to_string_pretty(&m.to_file(alg.carrier()))? + "\n",
            )?;
        }
    }
    b.check("commutativity implies fullness", || {
        let cf = check_commutative_fullness(&alg, &rep, &limits)?;
        let summary = if cf.commutative {
            format!(
                "commutative; full {}, monoid built {}",
                cf.full, cf.monoid_built
            )
        } else {
            "not commutative; holds vacuously".to_string()
        };
        Ok((cf.holds, summary, serde_json::to_value(&cf)?))
    })?;
    Ok(b.finish())
}

pub(crate) fn monoid_outcome(alg: &Algebra, outcome: &MonoidOutcome) -> Outcome {
    match outcome {
        MonoidOutcome::Built(m) => (
            true,
            format!("built on {} dilatations", m.delta.len()),
            serde_json::to_value(m.to_file(alg.carrier())).expect("monoid serializes"),
        ),
        MonoidOutcome::NotFull { non_indicators, .. } => {
            let missing = names(alg.carrier(), non_indicators);
            (
                false,
                format!("absent; non-indicators {}", set_string(&missing)),
                json!({ "non_indicators": missing }),
            )
        }
    }
}

pub(crate) fn operations_commute_outcome(
    alg: &Algebra,
    g: &GlobalOpts,
) -> Result<Outcome, CliError> {
    let report = is_commutative(alg, &g.limits(), false)?;
    let cases: u64 = report.pairs.iter().map(|p| p.cases).sum();
    let pairs = report.pairs.len();
    match report.first_failure() {
        None => Ok((
            true,
            format!("{pairs} ordered pairs, {cases} cases"),
            json!({ "pairs": pairs, "cases": cases }),
        )),
        Some(p) => {
            let w = p.witness.as_ref().expect("failing pair has a witness");
            Ok((
                false,
                format!("({}, {}) violate the medial law", p.f, p.g),
                json!({
                    "f": p.f,
                    "g": p.g,
                    "witness": render_medial(alg.carrier(), w),
                }),
            ))
        }
    }
}

pub(crate) fn elementary_commute_outcome(
    alg: &Algebra,
    y: usize,
    g: &GlobalOpts,
) -> Result<Outcome, CliError> {
    let e = check_elementary_commutation(alg, &Rank::numbered(y), &g.limits())?;
    let summary = format!(
        "|L_{y}| = {}, {} pairs, {} projection pairs",
        e.closure_size, e.pairs, e.projection_pairs
    );
    Ok((e.holds(), summary, serde_json::to_value(&e)?))
}

pub(crate) fn conjugates_commute_outcome(
    alg: &Algebra,
    rep: &Representation,
    g: &GlobalOpts,
) -> Result<Outcome, CliError> {
    let cc = check_conjugate_commutation(rep, &g.limits())?;
    let detail = match &cc.failure {
        None => json!({ "cases": cc.cases }),
        Some(f) => json!({
            "a": alg.carrier().name(f.a),
            "b": alg.carrier().name(f.b),
            "witness": render_medial(alg.carrier(), &f.witness),
        }),
    };
    Ok((cc.failure.is_none(), format!("{} cases", cc.cases), detail))
}

pub fn cmd_commutative(
    g: &GlobalOpts,
    alg_path: &Path,
    y: usize,
    frame_path: Option<&Path>,
) -> Result<Report, CliError> {
    let alg = Algebra::load(alg_path)?;
    let mut inputs = vec![display(alg_path)];
    if let Some(p) = frame_path {
        inputs.push(display(p));
    }
    let mut b = ReportBuilder::new("commutative", inputs, g.seed, g.samples);
    b.check("operations commute pairwise", || {
        operations_commute_outcome(&alg, g)
    })?;
    b.check(
        &format!("elementary functions of arity {y} commute"),
        || elementary_commute_outcome(&alg, y, g),
    )?;
    if let Some(path) = frame_path {
        let frame = Frame::load(path, alg.carrier())?;
        let rep = Representation::build(&alg, &frame, Method::Backtrack, &g.limits())?;
        if b.check("sampling at the frame is bijective", || {
            Ok(bijectivity_outcome(&alg, &rep))
        })? {
            b.check("conjugate functions commute", || {
                conjugates_commute_outcome(&alg, &rep, g)
            })?;
        }
    }
    Ok(b.finish())
}
