//! The `gallery` command: worked examples run through the generic pipeline
//! or through their symbolic checks.

use std::path::Path;

use algebench_core::commutativity::{is_commutative, SampledLaw};
use algebench_core::dilatation::{
    analyze_dilatations, build_endowed_monoid, check_commutative_fullness, check_distributivities,
};
use algebench_core::gallery::boolean::build_boolean_example;
use algebench_core::gallery::gaussian::gaussian_check;
use algebench_core::gallery::integers::integers_check;
use algebench_core::gallery::pert::{
    diamond_project, earliest_times, forward_pass, pert_check, PertProject, Schedule,
};
use algebench_core::gallery::semilattice::{
    build_powerset_semilattice, incidence_transform, is_two_element_lattice, union_extension,
};
use algebench_core::representation::{enumerate_endomorphisms, Method};
use algebench_core::{Algebra, Frame, Representation, UnaryMap};
use serde_json::json;

use crate::commands::{
    basis_criterion_outcome, bijectivity_outcome, conjugates_commute_outcome, dilatation_outcome,
    elementary_commute_outcome, monoid_outcome, names, operations_commute_outcome, render_maps,
    render_medial, set_string,
};
use crate::report::{Report, ReportBuilder};
use crate::{display, CliError, GalleryCommand, GlobalOpts};

const POINT_NAMES: [&str; 4] = ["x", "y", "z", "w"];

pub fn cmd_gallery(g: &GlobalOpts, example: &GalleryCommand) -> Result<Report, CliError> {
    match example {
        GalleryCommand::Semilattice {
            points,
            export_algebra,
            export_frame,
        } => {
            let report = semilattice(g, *points)?;
            let (alg, frame) = build_powerset_semilattice(&POINT_NAMES[..*points])?;
            export(
                &alg,
                &frame,
                export_algebra.as_deref(),
                export_frame.as_deref(),
            )?;
            Ok(report)
        }
        GalleryCommand::Boolean {
            export_algebra,
            export_frame,
        } => {
            let (alg, frame) = build_boolean_example()?;
            export(
                &alg,
                &frame,
                export_algebra.as_deref(),
                export_frame.as_deref(),
            )?;
            boolean(g)
        }
        GalleryCommand::Pert {
            project,
            forward,
            seed_event,
            export_project,
        } => {
            let (p, input) = match project {
                Some(path) => (PertProject::load(path)?, display(path)),
                None => (diamond_project(), "diamond".to_string()),
            };
            if let Some(path) = export_project {
                std::fs::write(path, p.to_json()? + "\n")?;
            }
            pert(g, &p, input, *forward, seed_event.as_deref())
        }
        GalleryCommand::Integers => Ok(sampled_report(
            g,
            "gallery integers",
            integers_check(g.samples, g.seed)?,
        )),
        GalleryCommand::Gaussian => Ok(sampled_report(
            g,
            "gallery gaussian",
            gaussian_check(g.samples, g.seed)?,
        )),
    }
}

fn export(
    alg: &Algebra,
    frame: &Frame,
    alg_path: Option<&Path>,
    frame_path: Option<&Path>,
) -> Result<(), CliError> {
    if let Some(p) = alg_path {
        std::fs::write(p, alg.to_json()? + "\n")?;
    }
    if let Some(p) = frame_path {
        std::fs::write(
            p,
            serde_json::to_string_pretty(&frame.to_file(alg.carrier()))? + "\n",
        )?;
    }
    Ok(())
}

/// The full pipeline on the powerset semilattice.
pub fn semilattice(g: &GlobalOpts, points: usize) -> Result<Report, CliError> {
    if points == 0 || points > POINT_NAMES.len() {
        return Err(CliError::Usage(format!(
            "--points must be between 1 and {}",
            POINT_NAMES.len()
        )));
    }
    let limits = g.limits();
    let point_names: Vec<String> = POINT_NAMES[..points]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let (alg, frame) = build_powerset_semilattice(&point_names)?;
    let q = alg.size();
    let rep = Representation::build(&alg, &frame, Method::Backtrack, &limits)?;
    let mut b = ReportBuilder::new(
        "gallery semilattice",
        vec![format!("points={points}")],
        g.seed,
        g.samples,
    );

    b.check("endomorphism count is |A|^|X|", || {
        let expected = q.pow(points as u32);
        let count = rep.endomorphisms().len();
        let mut detail = json!({ "backtrack": count, "expected": expected });
        let mut ok = count == expected;
        if q <= limits.max_carrier && points <= 2 {
            let brute = enumerate_endomorphisms(&alg, Method::Brute, &limits)?;
            ok &= brute == rep.endomorphisms();
            detail["brute"] = json!(brute.len());
        }
        Ok((ok, format!("{count} = {q}^{points}"), detail))
    })?;
    b.check("sampling at the frame is bijective", || {
        Ok(bijectivity_outcome(&alg, &rep))
    })?;
    b.check("union formula matches the generic extension", || {
        let mut matrix = vec![0; points];
        let mut checked = 0u64;
        for m in 0..q.pow(points as u32) {
            let mut k = m;
            for slot in matrix.iter_mut().rev() {
                *slot = k % q;
                k /= q;
            }
            let Some(h) = rep.extension(&matrix) else {
                return Ok((
                    false,
                    "no extension".into(),
                    json!({ "matrix": names(alg.carrier(), &matrix) }),
                ));
            };
            for a in 0..q {
                checked += 1;
                if h.apply(a) != union_extension(&matrix, a) {
                    let detail = json!({
                        "matrix": names(alg.carrier(), &matrix),
                        "element": alg.carrier().name(a),
                        "generic": alg.carrier().name(h.apply(a)),
                        "formula": alg.carrier().name(union_extension(&matrix, a)),
                    });
                    return Ok((false, "tables differ".into(), detail));
                }
            }
        }
        Ok((
            true,
            format!("{checked} values"),
            json!({ "values": checked }),
        ))
    })?;
    b.check(
        "elementary generator exists iff the frame is a basis",
        || basis_criterion_outcome(&alg, &rep, g),
    )?;
    b.check("operations commute pairwise", || {
        operations_commute_outcome(&alg, g)
    })?;
    let arities: &[usize] = if points <= 2 { &[1, 2] } else { &[1] };
    for &y in arities {
        b.check(
            &format!("elementary functions of arity {y} commute"),
            || elementary_commute_outcome(&alg, y, g),
        )?;
    }
    if points <= 2 {
        b.check("conjugate functions commute", || {
            conjugates_commute_outcome(&alg, &rep, g)
        })?;
    }
    let analysis = analyze_dilatations(&alg, &rep, &limits)?;
    b.check(
        "dilatations are the empty constant and the identity",
        || {
            let (ok, summary, detail) = dilatation_outcome(&alg, &analysis);
            let expected = vec![UnaryMap::constant(q, 0), UnaryMap::identity(q)];
            Ok((
                ok && analysis.full && analysis.delta == expected,
                summary,
                detail,
            ))
        },
    )?;
    let outcome = build_endowed_monoid(&alg, &analysis, &limits)?;
    b.check("endowed monoid is the two-element bounded lattice", || {
        let (built, summary, detail) = monoid_outcome(&alg, &outcome);
        let lattice = outcome
            .built()
            .is_some_and(|m| is_two_element_lattice(&alg, m));
        Ok((built && lattice, summary, detail))
    })?;
    if let Some(m) = outcome.built() {
        b.check("distributive laws", || {
            let d = check_distributivities(&alg, m, &limits)?;
            let summary = format!(
                "{} homogeneous, {} image, {} application cases",
                d.homogeneous_cases, d.image_cases, d.application_cases
            );
            Ok((d.hold(), summary, serde_json::to_value(&d)?))
        })?;
    }
    b.check("commutativity implies fullness", || {
        let cf = check_commutative_fullness(&alg, &rep, &limits)?;
        Ok((
            cf.holds,
            format!("commutative {}, full {}", cf.commutative, cf.full),
            serde_json::to_value(&cf)?,
        ))
    })?;
    b.check("incidence vectors give an isomorphic algebra", || {
        let t = incidence_transform(&alg, &point_names)?;
        let pairs: Vec<(String, String)> = (0..q)
            .map(|e| {
                (
                    alg.carrier().name(e).to_string(),
                    t.algebra.carrier().name(t.map[e]).to_string(),
                )
            })
            .collect();
        Ok((
            t.is_isomorphism,
            format!("{q} elements mapped"),
            json!({ "map": pairs }),
        ))
    })?;
    Ok(b.finish())
}

/// The Boolean example, where commutativity fails.
pub fn boolean(g: &GlobalOpts) -> Result<Report, CliError> {
    let limits = g.limits();
    let (alg, frame) = build_boolean_example()?;
    let c = alg.carrier();
    let rep = Representation::build(&alg, &frame, Method::Backtrack, &limits)?;
    let mut b = ReportBuilder::new("gallery boolean", vec!["boolean".into()], g.seed, g.samples);

    b.check("endomorphisms are free on the image of x", || {
        let n = rep.endomorphisms().len();
        Ok((
            n == 4,
            format!("{n} endomorphisms"),
            json!({ "endomorphisms": render_maps(c, rep.endomorphisms()) }),
        ))
    })?;
    b.check("sampling at the frame is bijective", || {
        Ok(bijectivity_outcome(&alg, &rep))
    })?;
    b.check(
        "elementary generator exists iff the frame is a basis",
        || basis_criterion_outcome(&alg, &rep, g),
    )?;
    b.check("commutativity fails with a (¬, ∧) witness", || {
        let report = is_commutative(&alg, &limits, false)?;
        let pair = report
            .pairs
            .iter()
            .find(|p| p.f == "¬" && p.g == "∧" && !p.holds);
        match pair.and_then(|p| p.witness.as_ref()) {
            Some(w) => Ok((
                !report.commutative,
                "¬ and ∧ violate the medial law".into(),
                json!({ "f": "¬", "g": "∧", "witness": render_medial(c, w) }),
            )),
            None => Ok((
                false,
                "no (¬, ∧) witness".into(),
                json!({ "commutative": report.commutative }),
            )),
        }
    })?;
    let analysis = analyze_dilatations(&alg, &rep, &limits)?;
    b.check("the identity is the only dilatation", || {
        let (ok, summary, detail) = dilatation_outcome(&alg, &analysis);
        Ok((
            ok && analysis.delta == [UnaryMap::identity(4)],
            summary,
            detail,
        ))
    })?;
    b.check("x is the only indicator", || {
        let d = names(c, &analysis.indicator_set());
        Ok((
            d == ["x"],
            format!("D = {}", set_string(&d)),
            json!({ "indicator_set": d }),
        ))
    })?;
    let outcome = build_endowed_monoid(&alg, &analysis, &limits)?;
    b.check("not full and no endowed monoid", || {
        let missing = names(c, &analysis.non_indicators());
        Ok((
            !analysis.full && outcome.built().is_none(),
            format!("non-indicators {}", set_string(&missing)),
            json!({ "full": analysis.full, "non_indicators": missing, "monoid_built": outcome.built().is_some() }),
        ))
    })?;
    b.check("commutativity implies fullness", || {
        let cf = check_commutative_fullness(&alg, &rep, &limits)?;
        Ok((
            cf.holds,
            "not commutative; holds vacuously".into(),
            serde_json::to_value(&cf)?,
        ))
    })?;
    Ok(b.finish())
}

fn pert(
    g: &GlobalOpts,
    project: &PertProject,
    input: String,
    forward: bool,
    seed_event: Option<&str>,
) -> Result<Report, CliError> {
    let mut b = ReportBuilder::new("gallery pert", vec![input], g.seed, g.samples);
    if forward {
        let event = match seed_event {
            Some(e) => e.to_string(),
            None => project
                .events()
                .first()
                .cloned()
                .ok_or_else(|| CliError::Usage("project has no events".into()))?,
        };
        if !project.events().contains(&event) {
            return Err(CliError::Usage(format!("unknown seed event `{event}`")));
        }
        let seed = Schedule::single(&event, 0);
        b.check(&format!("forward pass from {seed}"), || {
            let trajectory = forward_pass(project, &seed)?;
            let times = earliest_times(project, &seed)?;
            let steps: Vec<String> = trajectory.iter().map(ToString::to_string).collect();
            let summary = format!("trajectory [{}], earliest times {times}", steps.join(", "));
            Ok((
                true,
                summary,
                json!({ "trajectory": steps, "earliest_times": times }),
            ))
        })?;
    }
    push_laws(&mut b, pert_check(project.events(), g.samples, g.seed)?)?;
    Ok(b.finish())
}

fn push_laws(b: &mut ReportBuilder, laws: Vec<SampledLaw>) -> Result<(), CliError> {
    for law in laws {
        b.check(&law.law.clone(), || {
            let summary = match &law.witness {
                None => format!("{} samples", law.samples),
                Some(w) => format!("fails at sample {}: {} ≠ {}", w.sample, w.lhs, w.rhs),
            };
            Ok((law.holds(), summary, serde_json::to_value(&law)?))
        })?;
    }
    Ok(())
}

fn sampled_report(g: &GlobalOpts, command: &str, laws: Vec<SampledLaw>) -> Report {
    let name = command.rsplit(' ').next().unwrap_or(command).to_string();
    let mut b = ReportBuilder::new(command, vec![name], g.seed, g.samples);
    push_laws(&mut b, laws).expect("sampled laws serialize");
    b.finish()
}
