//! Elementary functions `L_Y`: the closure of the projections `A^Y -> A`
//! under composition with the fundamental operations.
//!
//! The closure runs breadth first by term depth. Every round only builds
//! tuples that contain at least one function found in the previous round,
//! so each combination is tried once. Functions are deduplicated by table
//! and keep the first (hence shallowest) term that produced them.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::{
    checked_tuple_count, encode, Algebra, Elem, Odometer, Rank, SetAryOp, UnaryMap,
};
use crate::combinator::{compose_values, FunctionTable};
use crate::error::{Error, Result};
use crate::representation::Frame;

/// Largest `|A|^|Y|` for which tables are built.
const MAX_ROWS: usize = 1 << 20;
/// Cap on row evaluations performed by one closure.
const MAX_WORK: u64 = 1 << 33;

/// A term over projections and fundamental operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Projection(usize),
    Apply { op: usize, args: Vec<Arc<Term>> },
}

impl Term {
    pub fn eval(&self, alg: &Algebra, point: &[Elem]) -> Elem {
        match self {
            Term::Projection(x) => point[*x],
            Term::Apply { op, args } => {
                let values: Vec<Elem> = args.iter().map(|t| t.eval(alg, point)).collect();
                alg.operation(*op).apply(&values)
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Projection(_) => 0,
            Term::Apply { args, .. } => 1 + args.iter().map(|t| t.depth()).max().unwrap_or(0),
        }
    }

    /// Prefix notation, e.g. `∪(p, 0())`.
    pub fn render(&self, alg: &Algebra, arity: &Rank) -> String {
        let mut out = String::new();
        self.render_into(alg, arity, &mut out);
        out
    }

    fn render_into(&self, alg: &Algebra, arity: &Rank, out: &mut String) {
        match self {
            Term::Projection(x) => out.push_str(&arity.labels()[*x]),
            Term::Apply { op, args } => {
                let _ = write!(out, "{}(", alg.operation(*op).symbol());
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    t.render_into(alg, arity, out);
                }
                out.push(')');
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementaryFunction {
    pub table: FunctionTable,
    pub witness: Arc<Term>,
}

impl ElementaryFunction {
    /// Re-evaluates the witness at every point and compares with the table.
    pub fn witness_matches(&self, alg: &Algebra) -> bool {
        let q = self.table.carrier_size();
        let mut odo = Odometer::new(q, self.table.arity().len());
        let mut row = 0;
        while let Some(point) = odo.next_tuple() {
            if self.witness.eval(alg, point) != self.table.value_at_index(row) {
                return false;
            }
            row += 1;
        }
        true
    }
}

/// The members of `L_Y` in discovery order.
#[derive(Debug, Clone)]
pub struct Closure {
    arity: Rank,
    functions: Vec<ElementaryFunction>,
    index: HashMap<Vec<Elem>, usize>,
    complete: bool,
}

impl Closure {
    pub fn arity(&self) -> &Rank {
        &self.arity
    }

    pub fn functions(&self) -> &[ElementaryFunction] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// False when the table cap stopped the search early.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn position(&self, values: &[Elem]) -> Option<usize> {
        self.index.get(values).copied()
    }

    pub fn contains(&self, table: &FunctionTable) -> bool {
        table.arity() == &self.arity && self.index.contains_key(table.values())
    }
}

/// `L_Y`, failing with a guard error if more than `guard` tables appear.
pub fn elementary_closure(alg: &Algebra, arity: &Rank, guard: usize) -> Result<Closure> {
    let closure = bounded_closure(alg, arity, guard)?;
    if closure.complete {
        Ok(closure)
    } else {
        Err(Error::guard(
            "elementary closure tables",
            format!("> {guard}"),
            guard,
        ))
    }
}

/// Like [`elementary_closure`] but returns the partial set, flagged
/// incomplete, when the cap is hit.
pub fn bounded_closure(alg: &Algebra, arity: &Rank, guard: usize) -> Result<Closure> {
    let q = alg.size();
    let rows = checked_tuple_count(q, arity.len(), "elementary table rows", MAX_ROWS)?;
    let mut closure = Closure {
        arity: arity.clone(),
        functions: Vec::new(),
        index: HashMap::new(),
        complete: true,
    };
    let mut tables: Vec<Arc<[Elem]>> = Vec::new();

    for x in 0..arity.len() {
        let values = FunctionTable::projection(arity.clone(), x, q)?.into_values();
        if !insert(
            q,
            &mut closure,
            &mut tables,
            values,
            Arc::new(Term::Projection(x)),
            guard,
        ) {
            return Ok(closure);
        }
    }

    let mut frontier_start = 0;
    let mut first_round = true;
    let mut work: u64 = 0;
    loop {
        let frontier_end = tables.len();
        if !first_round && frontier_start == frontier_end {
            break;
        }
        for (op_index, op) in alg.operations().iter().enumerate() {
            let r = op.rank().len();
            if r == 0 {
                if first_round {
                    let values = compose_values(op, &[], rows);
                    let term = Arc::new(Term::Apply {
                        op: op_index,
                        args: vec![],
                    });
                    if !insert(q, &mut closure, &mut tables, values, term, guard) {
                        return Ok(closure);
                    }
                }
                continue;
            }
            // Position `i` takes a frontier member, earlier positions take
            // older members, later positions take anything seen before
            // this round.
            for i in 0..r {
                let ranges: Vec<(usize, usize)> = (0..r)
                    .map(|k| match k.cmp(&i) {
                        std::cmp::Ordering::Less => (0, frontier_start),
                        std::cmp::Ordering::Equal => (frontier_start, frontier_end),
                        std::cmp::Ordering::Greater => (0, frontier_end),
                    })
                    .collect();
                if ranges.iter().any(|(lo, hi)| lo >= hi) {
                    continue;
                }
                let mut choice: Vec<usize> = ranges.iter().map(|&(lo, _)| lo).collect();
                loop {
                    work += rows as u64;
                    if work > MAX_WORK {
                        return Err(Error::guard("elementary closure work", work, MAX_WORK));
                    }
                    let family: Vec<&[Elem]> = choice.iter().map(|&c| &*tables[c]).collect();
                    let values = compose_values(op, &family, rows);
                    if !closure.index.contains_key(&values) {
                        let term = Arc::new(Term::Apply {
                            op: op_index,
                            args: choice
                                .iter()
                                .map(|&c| closure.functions[c].witness.clone())
                                .collect(),
                        });
                        if !insert(q, &mut closure, &mut tables, values, term, guard) {
                            return Ok(closure);
                        }
                    }
                    if !advance(&mut choice, &ranges) {
                        break;
                    }
                }
            }
        }
        first_round = false;
        frontier_start = frontier_end;
    }
    Ok(closure)
}

fn advance(choice: &mut [usize], ranges: &[(usize, usize)]) -> bool {
    for k in (0..choice.len()).rev() {
        choice[k] += 1;
        if choice[k] < ranges[k].1 {
            return true;
        }
        choice[k] = ranges[k].0;
    }
    false
}

/// Adds a table if new. Returns false once the cap is exceeded.
fn insert(
    q: usize,
    closure: &mut Closure,
    tables: &mut Vec<Arc<[Elem]>>,
    values: Vec<Elem>,
    witness: Arc<Term>,
    guard: usize,
) -> bool {
    if closure.index.contains_key(&values) {
        return true;
    }
    if closure.functions.len() >= guard {
        closure.complete = false;
        return false;
    }
    let shared: Arc<[Elem]> = values.clone().into();
    closure
        .index
        .insert(values.clone(), closure.functions.len());
    tables.push(shared);
    closure.functions.push(ElementaryFunction {
        table: FunctionTable::from_parts(closure.arity.clone(), q, values),
        witness,
    });
    true
}

/// The rank-less functions `L′`: each `ℓ ∈ L_1` read as a unary map.
pub fn rankless(alg: &Algebra, guard: usize) -> Result<BTreeSet<UnaryMap>> {
    let closure = elementary_closure(alg, &Rank::numbered(1), guard)?;
    Ok(closure
        .functions()
        .iter()
        .map(|f| UnaryMap::new(f.table.values().to_vec()))
        .collect())
}

/// The subuniverse generated by the range of `frame`.
pub fn generated_subuniverse(alg: &Algebra, frame: &Frame) -> BTreeSet<Elem> {
    let q = alg.size();
    let mut member = vec![false; q];
    let mut members: Vec<Elem> = Vec::new();
    for &u in frame.values() {
        if !member[u] {
            member[u] = true;
            members.push(u);
        }
    }
    let mut checked = 0;
    let mut first_round = true;
    loop {
        let known = members.len();
        if !first_round && checked == known {
            break;
        }
        for op in alg.operations() {
            let r = op.rank().len();
            if r == 0 {
                let v = op.apply(&[]);
                if !member[v] {
                    member[v] = true;
                    members.push(v);
                }
                continue;
            }
            let mut odo = Odometer::new(known, r);
            let mut args = vec![0; r];
            while let Some(t) = odo.next_tuple() {
                if t.iter().all(|&i| i < checked) {
                    continue;
                }
                for (slot, &i) in args.iter_mut().zip(t) {
                    *slot = members[i];
                }
                let v = op.apply(&args);
                if !member[v] {
                    member[v] = true;
                    members.push(v);
                }
            }
        }
        first_round = false;
        checked = known;
    }
    members.into_iter().collect()
}

/// The elementary function generator `χ: A -> L_X` of a frame.
#[derive(Debug, Clone)]
pub struct ElementaryGenerator {
    chi: Vec<ElementaryFunction>,
}

impl ElementaryGenerator {
    pub fn chi(&self, a: Elem) -> &ElementaryFunction {
        &self.chi[a]
    }

    pub fn tables(&self) -> impl Iterator<Item = &FunctionTable> {
        self.chi.iter().map(|f| &f.table)
    }
}

#[derive(Debug, Clone)]
pub enum GeneratorOutcome {
    Generator(ElementaryGenerator),
    /// Some elements are not `ℓ(U)` for any `ℓ ∈ L_X`.
    NotGenerator {
        unreachable: Vec<Elem>,
    },
    /// Two distinct members of `L_X` agree at `U`.
    NotIndependent {
        value: Elem,
        first: ElementaryFunction,
        second: ElementaryFunction,
    },
}

impl GeneratorOutcome {
    pub fn generator(&self) -> Option<&ElementaryGenerator> {
        match self {
            GeneratorOutcome::Generator(g) => Some(g),
            _ => None,
        }
    }
}

/// Builds `L_X` and reads off `χ`, or explains why it does not exist.
pub fn elementary_generator(
    alg: &Algebra,
    frame: &Frame,
    guard: usize,
) -> Result<GeneratorOutcome> {
    check_frame(alg, frame)?;
    let closure = elementary_closure(alg, frame.rank(), guard)?;
    let q = alg.size();
    let at_frame = encode(q, frame.values());
    let mut by_value: Vec<Option<usize>> = vec![None; q];
    let mut clash = None;
    for (i, f) in closure.functions().iter().enumerate() {
        let v = f.table.value_at_index(at_frame);
        match by_value[v] {
            None => by_value[v] = Some(i),
            Some(j) if clash.is_none() => clash = Some((v, j, i)),
            Some(_) => {}
        }
    }
    let unreachable: Vec<Elem> = (0..q).filter(|&a| by_value[a].is_none()).collect();
    if !unreachable.is_empty() {
        return Ok(GeneratorOutcome::NotGenerator { unreachable });
    }
    if let Some((value, first, second)) = clash {
        return Ok(GeneratorOutcome::NotIndependent {
            value,
            first: closure.functions()[first].clone(),
            second: closure.functions()[second].clone(),
        });
    }
    let chi = by_value
        .into_iter()
        .map(|i| closure.functions()[i.expect("every element reached")].clone())
        .collect();
    Ok(GeneratorOutcome::Generator(ElementaryGenerator { chi }))
}

pub(crate) fn check_frame(alg: &Algebra, frame: &Frame) -> Result<()> {
    match frame.values().iter().find(|&&u| u >= alg.size()) {
        Some(bad) => Err(Error::UnknownElement {
            context: "frame".into(),
            name: bad.to_string(),
        }),
        None => Ok(()),
    }
}
