//! Finite carriers, set-ary operations and the algebra container.
//!
//! Elements are positions in the carrier's canonical order. Every tabulation in
//! the crate (operation tables, function tables, matrices) enumerates argument
//! tuples in the same mixed-radix order: the first rank label is the most
//! significant digit, so iteration is lexicographic in carrier order.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of a finite carrier, identified by its canonical position.
pub type Elem = usize;

/// Ordered, duplicate-free list of element names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Carrier {
    names: Vec<String>,
    index: HashMap<String, Elem>,
}

impl Carrier {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        Ok(Carrier { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    // A carrier is never empty; kept for the usual `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn position(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn render(&self, elems: &[Elem]) -> Vec<String> {
        elems.iter().map(|&e| self.names[e].clone()).collect()
    }
}

/// An index set used as the rank of an operation or the arity of a function.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rank(Arc<[String]>);

impl serde::Serialize for Rank {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

impl Rank {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Rank(labels.into()))
    }

    pub fn nullary() -> Self {
        Rank(Arc::from(Vec::<String>::new()))
    }

    /// The rank `{0, 1, ..., n-1}`.
    pub fn numbered(n: usize) -> Self {
        Rank((0..n).map(|i| i.to_string()).collect::<Vec<_>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.0.iter().position(|l| l == label)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(","))
    }
}

/// A point of `A^R`: one carrier element per rank label.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    rank: Rank,
    values: Vec<Elem>,
}

impl Assignment {
    pub fn new(rank: Rank, values: Vec<Elem>) -> Result<Self> {
        if rank.len() != values.len() {
            return Err(Error::RankMismatch {
                expected: rank.len(),
                found: values.len(),
            });
        }
        Ok(Assignment { rank, values })
    }

    pub fn rank(&self) -> &Rank {
        &self.rank
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn get(&self, label: &str) -> Option<Elem> {
        self.rank.position(label).map(|i| self.values[i])
    }
}

/// `radix^len`, or `None` on overflow.
pub fn tuple_count(radix: usize, len: usize) -> Option<usize> {
    u32::try_from(len).ok().and_then(|l| radix.checked_pow(l))
}

pub(crate) fn checked_tuple_count(
    radix: usize,
    len: usize,
    what: &'static str,
    limit: usize,
) -> Result<usize> {
    match tuple_count(radix, len) {
        Some(n) if n <= limit => Ok(n),
        Some(n) => Err(Error::guard(what, n, limit)),
        None => Err(Error::guard(what, format!("{radix}^{len}"), limit)),
    }
}

/// Position of a tuple in canonical order.
#[inline]
pub fn encode(radix: usize, digits: &[Elem]) -> usize {
    digits.iter().fold(0, |acc, &d| acc * radix + d)
}

/// Inverse of [`encode`] for a tuple of `out.len()` digits.
pub fn decode_into(radix: usize, mut index: usize, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = index % radix;
        index /= radix;
    }
}

/// Enumerates all tuples in `radix^len` in canonical order, last digit fastest.
#[derive(Debug, Clone)]
pub struct Odometer {
    digits: Vec<Elem>,
    radix: usize,
    started: bool,
    done: bool,
}

impl Odometer {
    pub fn new(radix: usize, len: usize) -> Self {
        Odometer {
            digits: vec![0; len],
            radix,
            started: false,
            done: radix == 0 && len > 0,
        }
    }

    pub fn next_tuple(&mut self) -> Option<&[Elem]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.radix {
                return Some(&self.digits);
            }
            self.digits[i] = 0;
        }
        self.done = true;
        None
    }
}

/// Anything that maps `A^rank -> A` over a finite carrier.
pub trait SetAryOp {
    fn rank(&self) -> &Rank;
    /// Arguments listed in rank-label order; must lie in the carrier.
    fn apply(&self, args: &[Elem]) -> Elem;
}

pub type RuleFn = Arc<dyn Fn(&[Elem]) -> Elem + Send + Sync>;

#[derive(Clone)]
pub enum OpBody {
    Table(Vec<Elem>),
    Rule(RuleFn),
}

impl fmt::Debug for OpBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpBody::Table(t) => f.debug_tuple("Table").field(t).finish(),
            OpBody::Rule(_) => f.write_str("Rule(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Operation {
    symbol: String,
    rank: Rank,
    size: usize,
    body: OpBody,
}

impl Operation {
    /// A tabulated operation; `table` lists values in canonical tuple order.
    pub fn tabulated(
        symbol: impl Into<String>,
        rank: Rank,
        size: usize,
        table: Vec<Elem>,
    ) -> Result<Self> {
        let symbol = symbol.into();
        let expected = tuple_count(size, rank.len())
            .ok_or_else(|| Error::guard("table rows", "overflow", usize::MAX))?;
        if table.len() != expected {
            return Err(Error::PartialTable {
                symbol,
                expected,
                found: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= size) {
            return Err(Error::ValueOutsideCarrier {
                symbol,
                value: bad.to_string(),
            });
        }
        Ok(Operation {
            symbol,
            rank,
            size,
            body: OpBody::Table(table),
        })
    }

    /// Tabulates `f` over every argument tuple.
    pub fn from_fn(
        symbol: impl Into<String>,
        rank: Rank,
        size: usize,
        mut f: impl FnMut(&[Elem]) -> Elem,
    ) -> Result<Self> {
        let mut table = Vec::new();
        let mut odo = Odometer::new(size, rank.len());
        while let Some(args) = odo.next_tuple() {
            table.push(f(args));
        }
        Self::tabulated(symbol, rank, size, table)
    }

    /// An operation evaluated on demand rather than from a table.
    pub fn from_rule(
        symbol: impl Into<String>,
        rank: Rank,
        size: usize,
        rule: impl Fn(&[Elem]) -> Elem + Send + Sync + 'static,
    ) -> Self {
        Operation {
            symbol: symbol.into(),
            rank,
            size,
            body: OpBody::Rule(Arc::new(rule)),
        }
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn carrier_size(&self) -> usize {
        self.size
    }

    pub fn body(&self) -> &OpBody {
        &self.body
    }

    pub fn table(&self) -> Option<&[Elem]> {
        match &self.body {
            OpBody::Table(t) => Some(t),
            OpBody::Rule(_) => None,
        }
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.body, OpBody::Table(_))
    }

    /// Checked evaluation at an assignment over the operation's rank.
    pub fn eval(&self, args: &Assignment) -> Result<Elem> {
        if args.rank() != &self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank.len(),
                found: args.rank().len(),
            });
        }
        if let Some(&bad) = args.values().iter().find(|&&v| v >= self.size) {
            return Err(Error::UnknownElement {
                context: format!("arguments of `{}`", self.symbol),
                name: bad.to_string(),
            });
        }
        let value = self.apply(args.values());
        if value >= self.size {
            return Err(Error::ValueOutsideCarrier {
                symbol: self.symbol.clone(),
                value: value.to_string(),
            });
        }
        Ok(value)
    }

    /// The same operation with its rule expanded into a table.
    pub fn tabulate(&self) -> Result<Operation> {
        match &self.body {
            OpBody::Table(_) => Ok(self.clone()),
            OpBody::Rule(rule) => {
                Operation::from_fn(self.symbol.clone(), self.rank.clone(), self.size, |a| {
                    rule(a)
                })
            }
        }
    }
}

impl SetAryOp for Operation {
    fn rank(&self) -> &Rank {
        &self.rank
    }

    #[inline]
    fn apply(&self, args: &[Elem]) -> Elem {
        match &self.body {
            OpBody::Table(t) => t[encode(self.size, args)],
            OpBody::Rule(rule) => rule(args),
        }
    }
}

/// A total map `A -> A`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct UnaryMap(Vec<Elem>);

impl UnaryMap {
    pub fn new(values: Vec<Elem>) -> Self {
        UnaryMap(values)
    }

    pub fn identity(size: usize) -> Self {
        UnaryMap((0..size).collect())
    }

    pub fn constant(size: usize, value: Elem) -> Self {
        UnaryMap(vec![value; size])
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.0[a]
    }

    /// `self · inner`, i.e. `a ↦ self(inner(a))`.
    pub fn compose(&self, inner: &UnaryMap) -> UnaryMap {
        UnaryMap(inner.0.iter().map(|&a| self.0[a]).collect())
    }

    pub fn values(&self) -> &[Elem] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn constant_value(&self) -> Option<Elem> {
        let first = *self.0.first()?;
        self.0.iter().all(|&v| v == first).then_some(first)
    }

    pub fn render(&self, carrier: &Carrier) -> Vec<String> {
        carrier.render(&self.0)
    }
}

/// Where a unary map fails to commute with an operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomomorphismViolation {
    pub op: usize,
    pub args: Vec<Elem>,
}

#[derive(Debug, Clone)]
pub struct Algebra {
    name: String,
    carrier: Carrier,
    ops: Vec<Operation>,
}

impl Algebra {
    pub fn new(name: impl Into<String>, carrier: Carrier, ops: Vec<Operation>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::EmptyOperations);
        }
        let mut seen = HashSet::new();
        for op in &ops {
            if !seen.insert(op.symbol()) {
                return Err(Error::DuplicateSymbol(op.symbol().to_string()));
            }
            if op.carrier_size() != carrier.len() {
                return Err(Error::ArityMismatch(format!(
                    "operation `{}` is defined on {} elements, carrier has {}",
                    op.symbol(),
                    op.carrier_size(),
                    carrier.len()
                )));
            }
        }
        Ok(Algebra {
            name: name.into(),
            carrier,
            ops,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn operations(&self) -> &[Operation] {
        &self.ops
    }

    pub fn operation(&self, i: usize) -> &Operation {
        &self.ops[i]
    }

    pub fn op_index(&self, symbol: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.symbol() == symbol)
    }

    pub fn algebra_type(&self) -> Vec<&Rank> {
        self.ops.iter().map(SetAryOp::rank).collect()
    }

    pub fn is_tabulated(&self) -> bool {
        self.ops.iter().all(Operation::is_tabulated)
    }

    pub fn tabulate(&self) -> Result<Algebra> {
        let ops = self
            .ops
            .iter()
            .map(Operation::tabulate)
            .collect::<Result<Vec<_>>>()?;
        Algebra::new(self.name.clone(), self.carrier.clone(), ops)
    }

    pub fn eval(&self, op: usize, args: &Assignment) -> Result<Elem> {
        self.ops[op].eval(args)
    }

    /// First operation/argument tuple (canonical order) where `h` is not a homomorphism.
    pub fn homomorphism_violation(&self, h: &UnaryMap) -> Option<HomomorphismViolation> {
        let mut image = Vec::new();
        for (i, op) in self.ops.iter().enumerate() {
            let mut odo = Odometer::new(self.size(), op.rank().len());
            while let Some(args) = odo.next_tuple() {
                image.clear();
                image.extend(args.iter().map(|&a| h.apply(a)));
                if h.apply(op.apply(args)) != op.apply(&image) {
                    return Some(HomomorphismViolation {
                        op: i,
                        args: args.to_vec(),
                    });
                }
            }
        }
        None
    }

    pub fn is_endomorphism(&self, h: &UnaryMap) -> bool {
        h.len() == self.size() && self.homomorphism_violation(h).is_none()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile = serde_json::from_str(text)?;
        file.into_algebra()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_file(&self) -> Result<AlgebraFile> {
        let tabulated = self.tabulate()?;
        let operations = tabulated
            .ops
            .iter()
            .map(|op| {
                let table = op.table().expect("tabulated");
                let mut rows = Vec::with_capacity(table.len());
                let mut odo = Odometer::new(self.size(), op.rank().len());
                let mut k = 0;
                while let Some(args) = odo.next_tuple() {
                    rows.push(RowFile {
                        args: self.carrier.render(args),
                        value: self.carrier.name(table[k]).to_string(),
                    });
                    k += 1;
                }
                OperationFile {
                    symbol: op.symbol().to_string(),
                    rank: op.rank().labels().to_vec(),
                    table: rows,
                }
            })
            .collect();
        Ok(AlgebraFile {
            name: self.name.clone(),
            elements: self.carrier.names().to_vec(),
            operations,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file()?)?)
    }
}

/// On-disk algebra description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub elements: Vec<String>,
    pub operations: Vec<OperationFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperationFile {
    pub symbol: String,
    pub rank: Vec<String>,
    pub table: Vec<RowFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowFile {
    pub args: Vec<String>,
    pub value: String,
}

impl AlgebraFile {
    pub fn into_algebra(self) -> Result<Algebra> {
        let carrier = Carrier::new(self.elements)?;
        let q = carrier.len();
        let mut ops = Vec::with_capacity(self.operations.len());
        for op in self.operations {
            let rank = Rank::new(op.rank)?;
            let expected = tuple_count(q, rank.len())
                .filter(|&n| n <= 1 << 24)
                .ok_or_else(|| {
                    Error::guard("table rows", format!("{q}^{}", rank.len()), 1 << 24)
                })?;
            let mut table: Vec<Option<Elem>> = vec![None; expected];
            let mut args = Vec::with_capacity(rank.len());
            for row in &op.table {
                if row.args.len() != rank.len() {
                    return Err(Error::RowArity {
                        symbol: op.symbol,
                        expected: rank.len(),
                        found: row.args.len(),
                    });
                }
                args.clear();
                for name in &row.args {
                    args.push(
                        carrier
                            .position(name)
                            .ok_or_else(|| Error::UnknownElement {
                                context: format!("arguments of `{}`", op.symbol),
                                name: name.clone(),
                            })?,
                    );
                }
                let value =
                    carrier
                        .position(&row.value)
                        .ok_or_else(|| Error::ValueOutsideCarrier {
                            symbol: op.symbol.clone(),
                            value: row.value.clone(),
                        })?;
                let slot = &mut table[encode(q, &args)];
                if slot.is_some() {
                    return Err(Error::DuplicateRow { symbol: op.symbol });
                }
                *slot = Some(value);
            }
            if op.table.len() != expected {
                return Err(Error::PartialTable {
                    symbol: op.symbol,
                    expected,
                    found: op.table.len(),
                });
            }
            let table = table
                .into_iter()
                .map(|v| v.expect("all rows present"))
                .collect();
            ops.push(Operation::tabulated(op.symbol, rank, q, table)?);
        }
        Algebra::new(self.name, carrier, ops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boolean_like() -> Algebra {
        let carrier = Carrier::new(["0", "1"]).unwrap();
        let and = Operation::from_fn("and", Rank::numbered(2), 2, |a| a[0] & a[1]).unwrap();
        let zero = Operation::tabulated("0", Rank::nullary(), 2, vec![0]).unwrap();
        Algebra::new("b2", carrier, vec![and, zero]).unwrap()
    }

    #[test]
    fn carrier_rejects_empty_and_duplicates() {
        assert!(matches!(
            Carrier::new(Vec::<String>::new()),
            Err(Error::EmptyCarrier)
        ));
        assert!(matches!(
            Carrier::new(["a", "a"]),
            Err(Error::DuplicateElement(_))
        ));
    }

    #[test]
    fn odometer_order_is_lexicographic() {
        let mut odo = Odometer::new(2, 2);
        let mut seen = vec![];
        while let Some(t) = odo.next_tuple() {
            seen.push(t.to_vec());
        }
        assert_eq!(seen, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        for (i, t) in seen.iter().enumerate() {
            assert_eq!(encode(2, t), i);
        }
        let mut empty = Odometer::new(3, 0);
        assert_eq!(empty.next_tuple(), Some(&[][..]));
        assert_eq!(empty.next_tuple(), None);
    }

    #[test]
    fn eval_checks_rank() {
        let alg = boolean_like();
        let and = alg.op_index("and").unwrap();
        let ok = Assignment::new(Rank::numbered(2), vec![1, 0]).unwrap();
        assert_eq!(alg.eval(and, &ok).unwrap(), 0);
        let wrong = Assignment::new(Rank::numbered(1), vec![1]).unwrap();
        assert!(matches!(
            alg.eval(and, &wrong),
            Err(Error::RankMismatch { .. })
        ));
        let zero = alg.op_index("0").unwrap();
        assert_eq!(
            alg.eval(zero, &Assignment::new(Rank::nullary(), vec![]).unwrap())
                .unwrap(),
            0
        );
    }

    #[test]
    fn rule_outputs_are_checked() {
        let op = Operation::from_rule("bad", Rank::numbered(1), 2, |_| 5);
        let args = Assignment::new(Rank::numbered(1), vec![0]).unwrap();
        assert!(matches!(
            op.eval(&args),
            Err(Error::ValueOutsideCarrier { .. })
        ));
        assert!(op.tabulate().is_err());
    }

    #[test]
    fn empty_operation_list_rejected() {
        let carrier = Carrier::new(["a"]).unwrap();
        assert!(matches!(
            Algebra::new("x", carrier, vec![]),
            Err(Error::EmptyOperations)
        ));
    }

    #[test]
    fn file_round_trip() {
        let alg = boolean_like();
        let back = Algebra::from_json(&alg.to_json().unwrap()).unwrap();
        assert_eq!(back.to_file().unwrap(), alg.to_file().unwrap());
    }

    #[test]
    fn load_rejects_bad_tables() {
        let partial = r#"{"name":"p","elements":["a","b"],"operations":[
            {"symbol":"f","rank":["0"],"table":[{"args":["a"],"value":"a"}]}]}"#;
        assert!(matches!(
            Algebra::from_json(partial),
            Err(Error::PartialTable {
                expected: 2,
                found: 1,
                ..
            })
        ));
        let outside = r#"{"name":"p","elements":["a"],"operations":[
            {"symbol":"f","rank":[],"table":[{"args":[],"value":"zz"}]}]}"#;
        let err = Algebra::from_json(outside).unwrap_err();
        assert!(err.to_string().contains("value outside carrier"), "{err}");
        let dup = r#"{"name":"p","elements":["a"],"operations":[
            {"symbol":"f","rank":[],"table":[{"args":[],"value":"a"},{"args":[],"value":"a"}]}]}"#;
        assert!(matches!(
            Algebra::from_json(dup),
            Err(Error::DuplicateRow { .. })
        ));
        let none = r#"{"name":"p","elements":["a"],"operations":[]}"#;
        assert!(matches!(
            Algebra::from_json(none),
            Err(Error::EmptyOperations)
        ));
        let empty = r#"{"name":"p","elements":[],"operations":[]}"#;
        assert!(matches!(
            Algebra::from_json(empty),
            Err(Error::EmptyCarrier)
        ));
    }

    #[test]
    fn homomorphism_violation_is_first_in_order() {
        let alg = boolean_like();
        assert!(alg.is_endomorphism(&UnaryMap::identity(2)));
        let swap = UnaryMap::new(vec![1, 0]);
        let v = alg.homomorphism_violation(&swap).unwrap();
        assert_eq!(
            v,
            HomomorphismViolation {
                op: 0,
                args: vec![0, 1]
            }
        );
    }
}
