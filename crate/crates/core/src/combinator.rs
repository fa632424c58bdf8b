//! Constant functions, the exchange (transposition) combinator and set-ary
//! composition `ℓ = g · c_G`.

use crate::algebra::{tuple_count, Assignment, Elem, Odometer, Rank, SetAryOp};
use crate::error::{Error, Result};

/// A total function `A^arity -> A`, values in canonical tuple order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    arity: Rank,
    size: usize,
    values: Vec<Elem>,
}

impl FunctionTable {
    pub fn new(arity: Rank, size: usize, values: Vec<Elem>) -> Result<Self> {
        let rows = rows(size, &arity)?;
        if values.len() != rows {
            return Err(Error::PartialTable {
                symbol: format!("function of arity {arity}"),
                expected: rows,
                found: values.len(),
            });
        }
        if let Some(&v) = values.iter().find(|&&v| v >= size) {
            return Err(Error::ValueOutsideCarrier {
                symbol: format!("function of arity {arity}"),
                value: v.to_string(),
            });
        }
        Ok(FunctionTable {
            arity,
            size,
            values,
        })
    }

    pub fn from_fn(arity: Rank, size: usize, mut f: impl FnMut(&[Elem]) -> Elem) -> Result<Self> {
        let mut values = Vec::with_capacity(rows(size, &arity)?);
        let mut odo = Odometer::new(size, arity.len());
        while let Some(m) = odo.next_tuple() {
            values.push(f(m));
        }
        Self::new(arity, size, values)
    }

    /// `p_x(M) = M(x)` for the label at position `x`.
    pub fn projection(arity: Rank, x: usize, size: usize) -> Result<Self> {
        if x >= arity.len() {
            return Err(Error::ArityMismatch(format!("no label {x} in {arity}")));
        }
        Self::from_fn(arity, size, |m| m[x])
    }

    pub(crate) fn from_parts(arity: Rank, size: usize, values: Vec<Elem>) -> Self {
        FunctionTable {
            arity,
            size,
            values,
        }
    }

    pub fn arity(&self) -> &Rank {
        &self.arity
    }

    pub fn carrier_size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Elem> {
        self.values
    }

    /// Value at the tuple with the given canonical position.
    pub fn value_at_index(&self, row: usize) -> Elem {
        self.values[row]
    }

    pub fn constant_value(&self) -> Option<Elem> {
        let first = *self.values.first()?;
        self.values.iter().all(|&v| v == first).then_some(first)
    }
}

impl SetAryOp for FunctionTable {
    fn rank(&self) -> &Rank {
        &self.arity
    }

    #[inline]
    fn apply(&self, args: &[Elem]) -> Elem {
        self.values[crate::algebra::encode(self.size, args)]
    }
}

fn rows(size: usize, arity: &Rank) -> Result<usize> {
    tuple_count(size, arity.len())
        .filter(|&n| n <= 1 << 26)
        .ok_or_else(|| {
            Error::guard(
                "function table rows",
                format!("{size}^{}", arity.len()),
                1 << 26,
            )
        })
}

/// The constant function `k_a: A^arity -> A`.
pub fn constant_fn(a: Elem, arity: &Rank, size: usize) -> Result<FunctionTable> {
    if a >= size {
        return Err(Error::ValueOutsideCarrier {
            symbol: "constant".into(),
            value: a.to_string(),
        });
    }
    let n = rows(size, arity)?;
    Ok(FunctionTable::from_parts(arity.clone(), size, vec![a; n]))
}

/// A total indexing of `domain` labels by values of type `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indexing<T> {
    domain: Rank,
    values: Vec<T>,
}

impl<T> Indexing<T> {
    pub fn new(domain: Rank, values: Vec<T>) -> Result<Self> {
        if domain.len() != values.len() {
            return Err(Error::RankMismatch {
                expected: domain.len(),
                found: values.len(),
            });
        }
        Ok(Indexing { domain, values })
    }

    pub fn domain(&self) -> &Rank {
        &self.domain
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, label: &str) -> Option<&T> {
        self.domain.position(label).map(|i| &self.values[i])
    }
}

/// The exchanged indexing: `m: I -> A^J` becomes `c_m: J -> A^I` with
/// `c_m(j)(i) = m_i(j)`.
///
/// With an empty `I` the inner rank `J` cannot be read off `m` and must be
/// passed in `inner`; when `I` is non-empty a supplied `inner` must agree.
pub fn exchange(m: &Indexing<Assignment>, inner: Option<&Rank>) -> Result<Indexing<Assignment>> {
    let outer = m.domain().clone();
    let inner = match (m.values().first(), inner) {
        (None, None) => return Err(Error::MissingInnerRank),
        (None, Some(j)) => j.clone(),
        (Some(first), given) => {
            let j = first.rank();
            if m.values().iter().any(|v| v.rank() != j) || given.is_some_and(|g| g != j) {
                return Err(Error::InconsistentInnerRank);
            }
            j.clone()
        }
    };
    let columns = (0..inner.len())
        .map(|j| {
            Assignment::new(
                outer.clone(),
                m.values().iter().map(|row| row.values()[j]).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Indexing::new(inner, columns)
}

/// Set-ary composition `ℓ = g · c_G` with `ℓ(M) = g(c_G(M))`.
///
/// `family` is indexed by the rank of `g`; every member must have arity
/// `arity`. For a nullary `g` the result is the constant `k_{g(∅)}`.
pub fn set_ary_compose(
    g: &(impl SetAryOp + ?Sized),
    family: &[FunctionTable],
    arity: &Rank,
    size: usize,
) -> Result<FunctionTable> {
    if family.len() != g.rank().len() {
        return Err(Error::ArityMismatch(format!(
            "composition needs {} functions, got {}",
            g.rank().len(),
            family.len()
        )));
    }
    if let Some(bad) = family
        .iter()
        .find(|t| t.arity() != arity || t.carrier_size() != size)
    {
        return Err(Error::ArityMismatch(format!(
            "family member of arity {} where {arity} was expected",
            bad.arity()
        )));
    }
    let n = rows(size, arity)?;
    let slices: Vec<&[Elem]> = family.iter().map(FunctionTable::values).collect();
    Ok(FunctionTable::from_parts(
        arity.clone(),
        size,
        compose_values(g, &slices, n),
    ))
}

/// Row-wise `g(G_0[row], ..., G_{s-1}[row])` over `rows` rows.
pub(crate) fn compose_values(
    g: &(impl SetAryOp + ?Sized),
    family: &[&[Elem]],
    rows: usize,
) -> Vec<Elem> {
    let mut args = vec![0; family.len()];
    (0..rows)
        .map(|row| {
            for (slot, column) in args.iter_mut().zip(family) {
                *slot = column[row];
            }
            g.apply(&args)
        })
        .collect()
}
