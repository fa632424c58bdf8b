//! Acceptance suite. Each test checks one criterion against an oracle written
//! here from first principles and prints a single PASS/FAIL line.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use algebench::Cli;
use algebench_core::combinator::set_ary_compose;
use algebench_core::commutativity::{
    check_conjugate_commutation, check_elementary_commutation, is_commutative,
};
use algebench_core::dilatation::{
    analyze_dilatations, build_endowed_monoid, check_commutative_fullness, check_distributivities,
    monoid_laws,
};
use algebench_core::elementary::elementary_closure;
use algebench_core::gallery::boolean::build_boolean_example;
use algebench_core::gallery::gaussian::{self, gaussian_check, GaussInt};
use algebench_core::gallery::integers::{self, integers_check, IntMultiplier};
use algebench_core::gallery::pert::{
    self, earliest_times, forward_pass, nat_oplus, nat_successor, nu, pert_check, PertDilatation,
    PertProject, Schedule,
};
use algebench_core::gallery::semilattice::build_powerset_semilattice;
use algebench_core::representation::{enumerate_endomorphisms, verify_basis_criterion, Method};
use algebench_core::{
    Algebra, Carrier, Error, FunctionTable, Limits, Operation, Rank, Representation, SetAryOp,
    UnaryMap,
};
use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Prints the verdict outside the test harness capture, then asserts it.
fn verdict(n: u32, title: &str, ok: bool, note: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "{tag} criterion {n:02} {title}: {note}");
    assert!(ok, "criterion {n} failed: {note}");
}

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn limits() -> Limits {
    Limits::default()
}

// ---------------------------------------------------------------- oracles

/// Position of an argument tuple, first argument most significant.
fn index_of(q: usize, args: &[usize]) -> usize {
    let mut i = 0;
    for &a in args {
        i = i * q + a;
    }
    i
}

/// Every tuple of `len` digits below `q`, first digit most significant.
fn tuples(q: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..q).map(move |d| {
                    let mut t = t.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}

/// A raw operation: arity and values in tuple order.
#[derive(Clone)]
struct RawOp {
    arity: usize,
    table: Vec<usize>,
}

impl RawOp {
    fn at(&self, q: usize, args: &[usize]) -> usize {
        self.table[index_of(q, args)]
    }
}

fn raw_ops(alg: &Algebra) -> Vec<RawOp> {
    let q = alg.size();
    alg.operations()
        .iter()
        .map(|op| {
            let arity = op.rank().len();
            RawOp {
                arity,
                table: tuples(q, arity).iter().map(|t| op.apply(t)).collect(),
            }
        })
        .collect()
}

fn is_hom(q: usize, ops: &[RawOp], h: &[usize]) -> bool {
    ops.iter().all(|op| {
        tuples(q, op.arity).iter().all(|t| {
            let image: Vec<usize> = t.iter().map(|&a| h[a]).collect();
            h[op.at(q, t)] == op.at(q, &image)
        })
    })
}

/// All endomorphisms in lexicographic order. Maps are built one value at a
/// time; a prefix is dropped once an argument tuple inside the assigned
/// range breaks an operation whose value is also assigned.
fn oracle_endos(q: usize, ops: &[RawOp]) -> Vec<Vec<usize>> {
    fn extend(q: usize, ops: &[RawOp], h: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = h.len();
        let consistent = ops.iter().all(|op| {
            tuples(k, op.arity).iter().all(|t| {
                let v = op.at(q, t);
                let image: Vec<usize> = t.iter().map(|&a| h[a]).collect();
                v >= k || h[v] == op.at(q, &image)
            })
        });
        if !consistent {
            return;
        }
        if k == q {
            out.push(h.clone());
            return;
        }
        for v in 0..q {
            h.push(v);
            extend(q, ops, h, out);
            h.pop();
        }
    }
    let mut out = Vec::new();
    extend(q, ops, &mut Vec::new(), &mut out);
    assert!(out.iter().all(|h| is_hom(q, ops, h)));
    out
}

fn subuniverse(q: usize, ops: &[RawOp], frame: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = frame.iter().copied().collect();
    loop {
        let members: Vec<usize> = set.iter().copied().collect();
        let before = set.len();
        for op in ops {
            for t in tuples(members.len(), op.arity) {
                let args: Vec<usize> = t.iter().map(|&i| members[i]).collect();
                set.insert(op.at(q, &args));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// Sampling at `frame` is injective and hits every matrix.
fn sampling_bijective(q: usize, endos: &[Vec<usize>], frame: &[usize]) -> bool {
    let samples: BTreeSet<Vec<usize>> = endos
        .iter()
        .map(|h| frame.iter().map(|&u| h[u]).collect())
        .collect();
    samples.len() == endos.len() && samples.len() == q.pow(frame.len() as u32)
}

/// A function on argument tuples, as the oracles see it.
type Oracle = dyn Fn(&[usize]) -> usize;

/// Searches every `r × s` array for a violation of
/// `f(g(row_0), .., g(row_{r-1})) = g(f(col_0), .., f(col_{s-1}))`.
fn medial_violation(
    q: usize,
    f: &dyn Fn(&[usize]) -> usize,
    r: usize,
    g: &dyn Fn(&[usize]) -> usize,
    s: usize,
) -> Option<(Vec<usize>, usize, usize)> {
    for cells in tuples(q, r * s) {
        let rows: Vec<usize> = (0..r).map(|i| g(&cells[i * s..(i + 1) * s])).collect();
        let cols: Vec<usize> = (0..s)
            .map(|j| f(&(0..r).map(|i| cells[i * s + j]).collect::<Vec<_>>()))
            .collect();
        let (lhs, rhs) = (f(&rows), g(&cols));
        if lhs != rhs {
            return Some((cells, lhs, rhs));
        }
    }
    None
}

fn table_fn(t: &FunctionTable) -> impl Fn(&[usize]) -> usize + '_ {
    let q = t.carrier_size();
    move |args| t.values()[index_of(q, args)]
}

/// Union semilattice extension: `η_M(Y)` is the union of `M_i` over `i ∈ Y`.
fn union_of_rows(matrix: &[usize], subset: usize) -> usize {
    let mut acc = 0;
    for (i, &row) in matrix.iter().enumerate() {
        if subset & (1 << i) != 0 {
            acc |= row;
        }
    }
    acc
}

// ---------------------------------------------------------------- criteria

#[test]
fn acceptance_01_two_point_semilattice_endomorphisms() {
    let start = Instant::now();
    let (alg, frame) = build_powerset_semilattice(&["x", "y"]).unwrap();
    let endos = enumerate_endomorphisms(&alg, Method::Brute, &limits()).unwrap();
    let found: Vec<Vec<usize>> = endos.iter().map(|h| h.values().to_vec()).collect();

    // Bitmask oracle over all 256 maps of the four subsets.
    let mut oracle = Vec::new();
    for code in 0..256usize {
        let h: Vec<usize> = (0..4).map(|i| (code >> (2 * (3 - i))) & 3).collect();
        let preserves = h[0] == 0 && (0..4).all(|a| (0..4).all(|b| h[a | b] == h[a] | h[b]));
        if preserves {
            oracle.push(h);
        }
    }

    let rep = Representation::from_endomorphisms(&alg, &frame, endos.clone(), &limits()).unwrap();
    let mut round_trips = rep.is_bijective();
    for (i, h) in endos.iter().enumerate() {
        let m = rep.sample(i).to_vec();
        round_trips &= m == vec![h.apply(1), h.apply(2)];
        round_trips &= rep.extension(&m) == Some(h);
    }
    for m in tuples(4, 2) {
        let ext = rep.extension(&m);
        round_trips &= ext.is_some_and(|h| vec![h.apply(1), h.apply(2)] == m);
        round_trips &= ext.is_some_and(|h| (0..4).all(|y| h.apply(y) == union_of_rows(&m, y)));
    }
    let elapsed = start.elapsed();
    let ok =
        found.len() == 16 && found == oracle && round_trips && elapsed < Duration::from_secs(1);
    verdict(
        1,
        "two-point semilattice",
        ok,
        &format!(
            "{} endomorphisms, r_U round trips both ways, {elapsed:?}",
            found.len()
        ),
    );
}

#[test]
fn acceptance_02_three_point_semilattice_endomorphisms() {
    let start = Instant::now();
    let (alg, frame) = build_powerset_semilattice(&["x", "y", "z"]).unwrap();
    let endos = enumerate_endomorphisms(&alg, Method::Backtrack, &limits()).unwrap();
    let found: BTreeSet<Vec<usize>> = endos.iter().map(|h| h.values().to_vec()).collect();

    let family: BTreeSet<Vec<usize>> = tuples(8, 3)
        .iter()
        .map(|m| (0..8).map(|y| union_of_rows(m, y)).collect())
        .collect();
    let all_homs = family
        .iter()
        .all(|h| h[0] == 0 && (0..8).all(|a| (0..8).all(|b| h[a | b] == h[a] | h[b])));

    let rep = Representation::from_endomorphisms(&alg, &frame, endos, &limits()).unwrap();
    let elapsed = start.elapsed();
    let ok = found.len() == 512
        && found == family
        && all_homs
        && rep.is_bijective()
        && elapsed < Duration::from_secs(30);
    verdict(
        2,
        "three-point semilattice",
        ok,
        &format!(
            "{} endomorphisms equal the union family, {elapsed:?}",
            found.len()
        ),
    );
}

/// A random algebra on `q` elements whose random frame generates it.
fn random_generated_algebra(rng: &mut ChaCha8Rng) -> (Algebra, Vec<RawOp>, Vec<usize>) {
    loop {
        let q: usize = rng.gen_range(2..=4);
        let n_ops = rng.gen_range(1..=3);
        let ops: Vec<RawOp> = (0..n_ops)
            .map(|_| {
                let arity = rng.gen_range(0..=2);
                let table = (0..q.pow(arity as u32))
                    .map(|_| rng.gen_range(0..q))
                    .collect();
                RawOp { arity, table }
            })
            .collect();
        // L_X has up to q^(q^|X|) tables; two-element frames only for q = 2
        // keep it within the default closure guard.
        let frame_len = if q == 2 { rng.gen_range(1..=2) } else { 1 };
        let mut pool: Vec<usize> = (0..q).collect();
        let mut frame = Vec::new();
        for _ in 0..frame_len {
            frame.push(pool.remove(rng.gen_range(0..pool.len())));
        }
        if subuniverse(q, &ops, &frame).len() != q {
            continue;
        }
        let carrier = Carrier::new((0..q).map(|i| format!("e{i}"))).unwrap();
        let operations = ops
            .iter()
            .enumerate()
            .map(|(k, op)| {
                Operation::tabulated(
                    format!("f{k}"),
                    Rank::numbered(op.arity),
                    q,
                    op.table.clone(),
                )
                .unwrap()
            })
            .collect();
        let alg = Algebra::new("random", carrier, operations).unwrap();
        return (alg, ops, frame);
    }
}

#[test]
fn acceptance_03_basis_criterion() {
    let mut cases: Vec<(String, Algebra, algebench_core::Frame)> = Vec::new();
    let (a, f) = build_powerset_semilattice(&["x", "y"]).unwrap();
    cases.push(("semilattice on 2 points".into(), a, f));
    let (a, f) = build_powerset_semilattice(&["x", "y", "z"]).unwrap();
    cases.push(("semilattice on 3 points".into(), a, f));
    let (a, f) = build_boolean_example().unwrap();
    cases.push(("boolean".into(), a, f));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for k in 0..24 {
        let (alg, _, frame) = random_generated_algebra(&mut rng);
        let labels: Vec<String> = (0..frame.len()).map(|i| format!("u{i}")).collect();
        let frame = algebench_core::Frame::new(Rank::new(labels).unwrap(), frame).unwrap();
        cases.push((format!("random algebra {k}"), alg, frame));
    }

    let big = limits();
    let mut failures = Vec::new();
    let mut bijective = 0;
    for (name, alg, frame) in &cases {
        let q = alg.size();
        let ops = raw_ops(alg);
        let oracle = oracle_endos(q, &ops);
        let oracle_bij = sampling_bijective(q, &oracle, frame.values());
        let premise = subuniverse(q, &ops, frame.values()).len() == q;
        let rep = Representation::build(alg, frame, Method::Backtrack, &big).unwrap();
        let listed: Vec<Vec<usize>> = rep
            .endomorphisms()
            .iter()
            .map(|h| h.values().to_vec())
            .collect();
        let criterion = verify_basis_criterion(alg, &rep, &big).unwrap();
        bijective += usize::from(oracle_bij);
        let ok = premise
            && listed == oracle
            && rep.is_bijective() == oracle_bij
            && criterion.premise
            && criterion.bijective == oracle_bij
            && criterion.holds();
        if !ok {
            failures.push(name.clone());
        }
    }
    verdict(
        3,
        "basis criterion",
        failures.is_empty() && cases.len() >= 23,
        &format!(
            "{} algebras ({} bijective), failures: {:?}",
            cases.len(),
            bijective,
            failures
        ),
    );
}

#[test]
fn acceptance_04_elementary_functions_commute() {
    let (alg, _) = build_powerset_semilattice(&["x", "y"]).unwrap();
    let q = 4;
    let zero = |_: &[usize]| 0usize;
    let union = |a: &[usize]| a[0] | a[1];
    let ops: [(&Oracle, usize); 2] = [(&zero, 0), (&union, 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut notes = Vec::new();
    let mut ok = true;

    for y in 1..=2usize {
        let arity = Rank::numbered(y);
        let closure = elementary_closure(&alg, &arity, 10_000).unwrap();
        let tables: Vec<FunctionTable> = closure
            .functions()
            .iter()
            .map(|f| f.table.clone())
            .collect();
        let found: BTreeSet<Vec<usize>> = tables.iter().map(|t| t.values().to_vec()).collect();
        // L_Y is the set of unions over subsets of the projections.
        let oracle: BTreeSet<Vec<usize>> = (0..1usize << y)
            .map(|s| tuples(q, y).iter().map(|m| union_of_rows(m, s)).collect())
            .collect();
        ok &= found == oracle;

        for a in &tables {
            for b in &tables {
                ok &= medial_violation(q, &table_fn(a), y, &table_fn(b), y).is_none();
            }
            for (op, r) in ops {
                ok &= medial_violation(q, op, r, &table_fn(a), y).is_none();
                ok &= medial_violation(q, &table_fn(a), y, op, r).is_none();
            }
        }
        for x in 0..y {
            let p = move |m: &[usize]| m[x];
            for (op, r) in ops {
                ok &= medial_violation(q, op, r, &p, y).is_none();
            }
        }

        // Random set-ary compositions stay inside L_Y and keep commuting.
        for _ in 0..50 {
            let outer_is_op = rng.gen_bool(0.5);
            let composed = if outer_is_op {
                let g = alg.operation(rng.gen_range(0..alg.operations().len()));
                let family: Vec<FunctionTable> = (0..g.rank().len())
                    .map(|_| tables[rng.gen_range(0..tables.len())].clone())
                    .collect();
                set_ary_compose(g, &family, &arity, q).unwrap()
            } else {
                let g = &tables[rng.gen_range(0..tables.len())];
                let family: Vec<FunctionTable> = (0..y)
                    .map(|_| tables[rng.gen_range(0..tables.len())].clone())
                    .collect();
                set_ary_compose(g, &family, &arity, q).unwrap()
            };
            ok &= found.contains(composed.values());
            for (op, r) in ops {
                ok &= medial_violation(q, op, r, &table_fn(&composed), y).is_none();
            }
        }

        let report = check_elementary_commutation(&alg, &arity, &limits()).unwrap();
        ok &= report.holds() && report.closure_size == oracle.len();
        notes.push(format!("|L_{y}| = {}", found.len()));
    }
    verdict(4, "elementary functions commute", ok, &notes.join(", "));
}

#[test]
fn acceptance_05_conjugate_functions_commute() {
    let (alg, frame) = build_powerset_semilattice(&["x", "y"]).unwrap();
    let rep = Representation::build(&alg, &frame, Method::Backtrack, &limits()).unwrap();
    let report = check_conjugate_commutation(&rep, &limits()).unwrap();

    let mut tables_match = true;
    let mut oracle_commutes = true;
    for a in 0..4 {
        let chi = rep.conjugate(a).unwrap();
        let expected: Vec<usize> = tuples(4, 2).iter().map(|m| union_of_rows(m, a)).collect();
        tables_match &= chi.values() == expected.as_slice();
        for b in 0..4 {
            let other = rep.conjugate(b).unwrap();
            oracle_commutes &=
                medial_violation(4, &table_fn(chi), 2, &table_fn(other), 2).is_none();
        }
    }
    let ok = report.cases == 4096 && report.failure.is_none() && tables_match && oracle_commutes;
    verdict(
        5,
        "conjugate functions commute",
        ok,
        &format!(
            "{} cases, {} failures",
            report.cases,
            usize::from(report.failure.is_some())
        ),
    );
}

#[test]
fn acceptance_06_commutative_implies_full_monoid() {
    let mut ok = true;
    let mut notes = Vec::new();
    for points in [&["x", "y"][..], &["x", "y", "z"][..]] {
        let (alg, frame) = build_powerset_semilattice(points).unwrap();
        let q = alg.size();
        let rep = Representation::build(&alg, &frame, Method::Backtrack, &limits()).unwrap();
        let fullness = check_commutative_fullness(&alg, &rep, &limits()).unwrap();
        ok &= fullness.commutative && fullness.full && fullness.monoid_built && fullness.holds;

        let analysis = analyze_dilatations(&alg, &rep, &limits()).unwrap();
        let empty = UnaryMap::constant(q, 0);
        let id = UnaryMap::identity(q);
        ok &= analysis.delta == vec![empty.clone(), id.clone()];
        ok &= analysis.full;

        let outcome = build_endowed_monoid(&alg, &analysis, &limits()).unwrap();
        let Some(m) = outcome.built() else {
            verdict(6, "commutative implies full", false, "monoid not built");
            return;
        };
        let pos = |h: &[usize]| m.delta.iter().position(|d| d.values() == h).unwrap();
        let top = pos(id.values());
        let bottom = pos(empty.values());
        ok &= m.unit == top;
        for a in 0..2 {
            for b in 0..2 {
                let composed: Vec<usize> = (0..q)
                    .map(|v| m.delta[a].apply(m.delta[b].apply(v)))
                    .collect();
                let meet = if a == top && b == top { top } else { bottom };
                ok &= m.product[a][b] == pos(&composed) && m.product[a][b] == meet;
                let pointwise: Vec<usize> = (0..q)
                    .map(|v| m.delta[a].apply(v) | m.delta[b].apply(v))
                    .collect();
                let join = if a == top || b == top { top } else { bottom };
                let union = &m.image_ops[alg.op_index("∪").unwrap()];
                ok &= union.apply(2, &[a, b]) == Some(pos(&pointwise));
                ok &= union.apply(2, &[a, b]) == Some(join);
            }
        }
        ok &= m.image_ops[alg.op_index("0").unwrap()].apply(2, &[]) == Some(bottom);
        ok &= monoid_laws(m).hold();
        ok &= check_distributivities(&alg, m, &limits()).unwrap().hold();
        notes.push(format!(
            "{} points: Δ = [k_∅, id], meet/join lattice",
            points.len()
        ));
    }
    verdict(6, "commutative implies full", ok, &notes.join("; "));
}

#[test]
fn acceptance_07_boolean_counterexample() {
    let (alg, frame) = build_boolean_example().unwrap();
    let report = is_commutative(&alg, &limits(), false).unwrap();
    let and = |a: &[usize]| a[0] & a[1];
    let not = |a: &[usize]| 3 - a[0];
    let eval = |symbol: &str, args: &[usize]| {
        if symbol == "∧" {
            and(args)
        } else {
            not(args)
        }
    };

    let pair = report
        .pairs
        .iter()
        .find(|p| !p.holds && ((p.f == "¬" && p.g == "∧") || (p.f == "∧" && p.g == "¬")));
    let mut witness_ok = false;
    let mut note = String::from("no (¬, ∧) witness");
    if let Some(p) = pair {
        let w = p.witness.as_ref().unwrap();
        let rows: Vec<usize> = w.m.iter().map(|row| eval(&p.g, row)).collect();
        let s = w.m[0].len();
        let cols: Vec<usize> = (0..s)
            .map(|j| eval(&p.f, &w.m.iter().map(|row| row[j]).collect::<Vec<_>>()))
            .collect();
        let (lhs, rhs) = (eval(&p.f, &rows), eval(&p.g, &cols));
        witness_ok = lhs == w.lhs && rhs == w.rhs && lhs != rhs;
        note = format!("({}, {}) witness {:?}: {} ≠ {}", p.f, p.g, w.m, lhs, rhs);
    }

    let rep = Representation::build(&alg, &frame, Method::Backtrack, &limits()).unwrap();
    let analysis = analyze_dilatations(&alg, &rep, &limits()).unwrap();
    let monoid = build_endowed_monoid(&alg, &analysis, &limits()).unwrap();
    let x = alg.carrier().position("x").unwrap();
    let ok = !report.commutative
        && witness_ok
        && analysis.delta == vec![UnaryMap::identity(4)]
        && analysis.indicator_set() == vec![x]
        && !analysis.full
        && monoid.built().is_none();
    verdict(
        7,
        "boolean counterexample",
        ok,
        &format!("{note}; |Δ| = {}, D = {{x}}", analysis.delta.len()),
    );
}

/// Longest path lengths from `source` over the reachable events, memoized.
fn longest_paths(n: usize, edges: &[Vec<(usize, u64)>], source: usize) -> BTreeMap<usize, u64> {
    fn visit(
        v: usize,
        target: usize,
        edges: &[Vec<(usize, u64)>],
        memo: &mut Vec<Option<Option<u64>>>,
    ) -> Option<u64> {
        // Longest path from v to target, None when target is unreachable.
        if let Some(known) = memo[v] {
            return known;
        }
        let best = if v == target {
            Some(0)
        } else {
            edges[v]
                .iter()
                .filter_map(|&(w, t)| visit(w, target, edges, memo).map(|d| d + t))
                .max()
        };
        memo[v] = Some(best);
        best
    }
    let mut out = BTreeMap::new();
    for target in 0..n {
        let mut memo = vec![None; n];
        if let Some(d) = visit(source, target, edges, &mut memo) {
            out.insert(target, d);
        }
    }
    out
}

fn project_from_edges(n: usize, edges: &[Vec<(usize, u64)>]) -> (Vec<String>, PertProject) {
    let events: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let rows = edges
        .iter()
        .map(|out| Schedule(out.iter().map(|&(w, t)| (events[w].clone(), t)).collect()))
        .collect();
    let project = PertProject::new(events.clone(), rows).unwrap();
    (events, project)
}

#[test]
fn acceptance_08_forward_pass() {
    let project = PertProject::load(fixture("fig2.json")).unwrap();
    let seed = Schedule::single("a", 0);
    let trajectory = forward_pass(&project, &seed).unwrap();
    let expected = vec![
        Schedule::from_pairs(&[("b", 1), ("c", 3)]),
        Schedule::from_pairs(&[("d", 8)]),
        Schedule::empty(),
    ];
    let times = earliest_times(&project, &seed).unwrap();
    let names = ["a", "b", "c", "d"];
    let edges = vec![vec![(1, 1), (2, 3)], vec![(3, 7)], vec![(3, 2)], vec![]];
    let oracle = longest_paths(4, &edges, 0);
    let mut ok = trajectory == expected && times.get("d") == Some(8);
    ok &= oracle.iter().all(|(&v, &d)| times.get(names[v]) == Some(d))
        && times.0.len() == oracle.len();

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let edges: Vec<Vec<(usize, u64)>> = (0..n)
            .map(|i| {
                let mut out = Vec::new();
                for w in i + 1..n {
                    if rng.gen_bool(0.5) {
                        out.push((w, rng.gen_range(0..=9)));
                    }
                }
                out
            })
            .collect();
        let (events, project) = project_from_edges(n, &edges);
        let got = earliest_times(&project, &Schedule::single(&events[0], 0)).unwrap();
        let want: BTreeMap<String, u64> = longest_paths(n, &edges, 0)
            .into_iter()
            .map(|(v, d)| (events[v].clone(), d))
            .collect();
        if got.0 != want {
            mismatches += 1;
        }
    }
    let (_, cyclic) = project_from_edges(2, &[vec![(1, 1)], vec![(0, 1)]]);
    let cycle_detected = matches!(
        forward_pass(&cyclic, &Schedule::single("e0", 0)),
        Err(Error::Cycle(_))
    );
    ok &= mismatches == 0 && cycle_detected;
    verdict(
        8,
        "forward pass",
        ok,
        &format!(
            "diamond d = {:?}, 200 random projects with {mismatches} mismatches",
            times.get("d")
        ),
    );
}

fn random_schedule(rng: &mut ChaCha8Rng, events: &[String]) -> Schedule {
    let mut out = BTreeMap::new();
    for e in events {
        if rng.gen_bool(0.5) {
            out.insert(e.clone(), rng.gen_range(0..=20));
        }
    }
    Schedule(out)
}

fn oracle_nu(a: &Schedule) -> u64 {
    a.0.values().max().map_or(0, |m| m + 1)
}

fn oracle_oplus(n: u64, m: u64) -> u64 {
    if n == 0 || m == 0 {
        0
    } else {
        n + m - 1
    }
}

#[test]
fn acceptance_09_natural_semilattice() {
    let events: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    for _ in 0..1000 {
        let a = random_schedule(&mut rng, &events);
        let b = random_schedule(&mut rng, &events);
        let joined = a.join(&b);
        ok &= nu(&a).unwrap() == oracle_nu(&a);
        ok &= nu(&joined).unwrap() == oracle_nu(&a).max(oracle_nu(&b));
        let shifted = a.successor().unwrap();
        ok &= shifted.0
            == a.0
                .iter()
                .map(|(k, v)| (k.clone(), v + 1))
                .collect::<BTreeMap<_, _>>();
        ok &= nu(&shifted).unwrap() == nat_successor(oracle_nu(&a)).unwrap();

        let small = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.2) {
                rng.gen_range(0..=1)
            } else {
                rng.gen_range(0..=1_000_000)
            }
        };
        let (n, m, k) = (small(&mut rng), small(&mut rng), small(&mut rng));
        ok &= nat_oplus(n, m).unwrap() == oracle_oplus(n, m);
        ok &= nat_oplus(n, m).unwrap() == nat_oplus(m, n).unwrap();
        ok &= nat_oplus(nat_oplus(n, m).unwrap(), k).unwrap()
            == nat_oplus(n, nat_oplus(m, k).unwrap()).unwrap();
        ok &= nat_oplus(n, 1).unwrap() == n && nat_oplus(n, 0).unwrap() == 0;

        let d1 = pert::gamma(&a);
        let d2 = pert::gamma(&b);
        ok &= d1.compose(d2).unwrap().as_natural().unwrap()
            == oracle_oplus(d1.as_natural().unwrap(), d2.as_natural().unwrap());
        ok &= d1.apply(&b).unwrap().0
            == match d1 {
                PertDilatation::EmptyConstant => BTreeMap::new(),
                PertDilatation::Delay(s) => b.0.iter().map(|(e, t)| (e.clone(), t + s)).collect(),
            };
    }
    ok &= nu(&Schedule::empty()).unwrap() == 0;
    let laws = pert_check(&events, 1000, 0).unwrap();
    let failing: Vec<&str> = laws
        .iter()
        .filter(|l| !l.holds())
        .map(|l| l.law.as_str())
        .collect();
    ok &= failing.is_empty();
    verdict(
        9,
        "natural semilattice and ⊕",
        ok,
        &format!(
            "1000 samples, {} sampled laws, failing: {failing:?}",
            laws.len()
        ),
    );
}

#[test]
fn acceptance_10_integers() {
    let laws = integers_check(1000, 0).unwrap();
    let failing: Vec<&str> = laws
        .iter()
        .filter(|l| !l.holds())
        .map(|l| l.law.as_str())
        .collect();
    let mut ok = failing.is_empty();
    for k in 0..=50usize {
        let expected: BTreeSet<i64> = (1..=k as i64 + 1).collect();
        ok &= integers::bounded_closure(k) == expected;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let (a, b, c) = (
            rng.gen_range(-1000..=1000i64),
            rng.gen_range(-1000..=1000i64),
            rng.gen_range(-1000..=1000i64),
        );
        let (ea, eb) = (IntMultiplier(a), IntMultiplier(b));
        ok &= integers::sampling(integers::extension(a)).unwrap() == a;
        ok &= ea.apply(c).unwrap() == a * c;
        ok &= ea.compose(eb).unwrap().apply(c).unwrap() == a * (b * c);
        ok &= ea.sum(eb).unwrap().apply(c).unwrap() == a * c + b * c;
    }
    ok &= IntMultiplier(i64::MAX).apply(2).is_err();
    verdict(
        10,
        "integers",
        ok,
        &format!("{} sampled laws, failing: {failing:?}", laws.len()),
    );
}

#[test]
fn acceptance_11_gaussian_integers() {
    let laws = gaussian_check(1000, 0).unwrap();
    let failing: Vec<&str> = laws
        .iter()
        .filter(|l| !l.holds())
        .map(|l| l.law.as_str())
        .collect();
    let example = gaussian::gamma(GaussInt::new(2, 3), GaussInt::new(1, -1)).unwrap();
    let mut ok = failing.is_empty() && example == GaussInt::new(5, -5);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let a = GaussInt::new(rng.gen_range(-100..=100), rng.gen_range(-100..=100));
        let b = GaussInt::new(rng.gen_range(-100..=100), rng.gen_range(-100..=100));
        let k = a.re + a.im;
        ok &= gaussian::gamma(a, b).unwrap() == GaussInt::new(k * b.re, k * b.im);
        ok &= gaussian::j_inverse(gaussian::j(a)).unwrap() == a;
    }
    verdict(
        11,
        "gaussian integers",
        ok,
        &format!(
            "{} sampled laws, γ_(2+3ι)(1−ι) = {example}, failing: {failing:?}",
            laws.len()
        ),
    );
}

#[test]
fn acceptance_12_reports_are_deterministic() {
    let commands: Vec<Vec<String>> = vec![
        vec![
            "endos".into(),
            fixture("semilattice2.json"),
            "--cross-check".into(),
        ],
        vec![
            "basis".into(),
            fixture("semilattice2.json"),
            fixture("canonical2.json"),
        ],
        vec![
            "basis".into(),
            fixture("boolean.json"),
            fixture("boolean_frame.json"),
        ],
        vec![
            "dilatations".into(),
            fixture("semilattice2.json"),
            fixture("canonical2.json"),
        ],
        vec![
            "dilatations".into(),
            fixture("boolean.json"),
            fixture("boolean_frame.json"),
        ],
        vec![
            "commutative".into(),
            fixture("semilattice2.json"),
            "--y".into(),
            "2".into(),
            "--frame".into(),
            fixture("canonical2.json"),
        ],
        vec!["commutative".into(), fixture("boolean.json")],
        vec!["gallery".into(), "semilattice".into()],
        vec!["gallery".into(), "boolean".into()],
        vec![
            "gallery".into(),
            "pert".into(),
            fixture("fig2.json"),
            "--forward".into(),
        ],
        vec!["gallery".into(), "integers".into()],
        vec!["gallery".into(), "gaussian".into()],
    ];
    let mut differing = Vec::new();
    for args in &commands {
        let argv = std::iter::once("algebench".to_string())
            .chain(args.iter().cloned())
            .chain(["--seed".to_string(), "0".to_string()]);
        let cli = Cli::try_parse_from(argv).unwrap();
        let first = algebench::run(&cli).unwrap().body_json();
        let second = algebench::run(&cli).unwrap().body_json();
        if first != second {
            differing.push(args.join(" "));
        }
    }
    verdict(
        12,
        "deterministic reports",
        differing.is_empty(),
        &format!(
            "{} commands run twice, differing: {differing:?}",
            commands.len()
        ),
    );
}
