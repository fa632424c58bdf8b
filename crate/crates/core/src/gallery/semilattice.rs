//! Powerset union semilattices over a small point set. An element is the
//! bitmask of its points, with point `i` at bit `i`.

use crate::algebra::{Algebra, Carrier, Elem, Operation, Rank};
use crate::dilatation::EndowedMonoid;
use crate::error::{Error, Result};
use crate::representation::Frame;

pub const MAX_POINTS: usize = 4;

/// Name of the subset with the given mask, e.g. `{a,c}` or `∅`.
pub fn subset_name(points: &[String], mask: usize) -> String {
    if mask == 0 {
        return "∅".to_string();
    }
    let members: Vec<&str> = (0..points.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| points[i].as_str())
        .collect();
    format!("{{{}}}", members.join(","))
}

/// The semilattice with nullary `0` and binary `∪`, and the frame of
/// singletons `U_x = {x}`.
pub fn build_powerset_semilattice<S: AsRef<str>>(points: &[S]) -> Result<(Algebra, Frame)> {
    let n = points.len();
    if n == 0 || n > MAX_POINTS {
        return Err(Error::guard("semilattice points", n, MAX_POINTS));
    }
    let points: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
    let rank = Rank::new(points.iter().cloned())?;
    let size = 1 << n;
    let carrier = Carrier::new((0..size).map(|m| subset_name(&points, m)))?;
    let zero = Operation::tabulated("0", Rank::nullary(), size, vec![0])?;
    let union = Operation::from_fn("∪", Rank::numbered(2), size, |a| a[0] | a[1])?;
    let alg = Algebra::new(
        format!("powerset semilattice on {}", points.join(",")),
        carrier,
        vec![zero, union],
    )?;
    let frame = Frame::new(rank, (0..n).map(|i| 1 << i).collect())?;
    Ok((alg, frame))
}

/// `η_M(Y)`: the union of the rows `M_y` for `y ∈ Y`.
pub fn union_extension(matrix: &[usize], subset: usize) -> usize {
    matrix
        .iter()
        .enumerate()
        .filter(|(i, _)| subset >> i & 1 == 1)
        .fold(0, |acc, (_, &row)| acc | row)
}

/// The four-node graph `a -> {b, c}`, `b -> {d}`, `c -> {d}`, `d -> ∅`.
pub fn diamond_graph() -> (Vec<String>, Vec<usize>) {
    let points = ["a", "b", "c", "d"].map(String::from).to_vec();
    (points, vec![0b0110, 0b1000, 0b1000, 0b0000])
}

/// Rows of 0/1 entries, row `x` marking the successors of `x`.
pub fn incidence_matrix(matrix: &[usize], points: usize) -> Vec<Vec<u8>> {
    matrix
        .iter()
        .map(|&row| (0..points).map(|i| (row >> i & 1) as u8).collect())
        .collect()
}

/// The same semilattice presented on bit strings, with the isomorphism
/// taking each subset to its characteristic vector.
#[derive(Debug, Clone)]
pub struct IncidenceTransform {
    pub algebra: Algebra,
    /// Source element -> target element.
    pub map: Vec<Elem>,
    pub is_isomorphism: bool,
}

pub fn incidence_transform(source: &Algebra, points: &[String]) -> Result<IncidenceTransform> {
    let n = points.len();
    let size = 1usize << n;
    if source.size() != size {
        return Err(Error::ArityMismatch(format!(
            "{} points need {size} elements, carrier has {}",
            n,
            source.size()
        )));
    }
    let bits = |mask: usize| -> String {
        (0..n)
            .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    };
    let names: Vec<String> = (0..size).map(bits).collect();
    let carrier = Carrier::new(names.clone())?;
    let or = |a: &str, b: &str| -> String {
        a.chars()
            .zip(b.chars())
            .map(|(x, y)| if x == '1' || y == '1' { '1' } else { '0' })
            .collect()
    };
    let table: Vec<Elem> = (0..size * size)
        .map(|k| {
            carrier
                .position(&or(&names[k / size], &names[k % size]))
                .expect("closed")
        })
        .collect();
    let join = Operation::tabulated("or", Rank::numbered(2), size, table)?;
    let zero = Operation::tabulated(
        "0",
        Rank::nullary(),
        size,
        vec![carrier.position(&"0".repeat(n)).expect("zero")],
    )?;
    let algebra = Algebra::new("incidence vectors", carrier, vec![zero, join])?;

    let map: Vec<Elem> = (0..size)
        .map(|e| {
            let name = source.carrier().name(e);
            let mask = (0..size)
                .find(|&m| subset_name(points, m) == name)
                .unwrap_or(usize::MAX);
            algebra
                .carrier()
                .position(&bits(mask))
                .unwrap_or(usize::MAX)
        })
        .collect();
    let bijective = {
        let mut seen = vec![false; size];
        map.iter()
            .all(|&t| t < size && !std::mem::replace(&mut seen[t], true))
    };
    let (src_zero, src_union) = (source.op_index("0"), source.op_index("∪"));
    let is_isomorphism = bijective
        && match (src_zero, src_union) {
            (Some(z), Some(u)) => {
                let zero_ok = map[source.operation(z).table().expect("tabulated")[0]]
                    == algebra.operation(0).table().expect("tabulated")[0];
                let union_ok = (0..size).all(|a| {
                    (0..size).all(|b| {
                        use crate::algebra::SetAryOp;
                        map[source.operation(u).apply(&[a, b])]
                            == algebra.operation(1).apply(&[map[a], map[b]])
                    })
                });
                zero_ok && union_ok
            }
            _ => false,
        };
    Ok(IncidenceTransform {
        algebra,
        map,
        is_isomorphism,
    })
}

/// Whether an endowed monoid of a powerset semilattice is the two-element
/// bounded lattice: the unit is top, the other member is bottom,
/// composition is meet, the image of `∪` is join and the image of `0` is
/// bottom.
pub fn is_two_element_lattice(alg: &Algebra, m: &EndowedMonoid) -> bool {
    if m.delta.len() != 2 {
        return false;
    }
    let top = m.unit;
    let bottom = 1 - top;
    let level = |i: usize| usize::from(i == top);
    let meet_ok = (0..2).all(|a| (0..2).all(|b| level(m.product[a][b]) == level(a).min(level(b))));
    let find = |symbol: &str| alg.op_index(symbol).map(|i| &m.image_ops[i]);
    let join_ok = find("∪").is_some_and(|op| {
        (0..2).all(|a| {
            (0..2).all(|b| op.apply(2, &[a, b]).map(level) == Some(level(a).max(level(b))))
        })
    });
    let zero_ok = find("0").is_some_and(|op| op.apply(2, &[]) == Some(bottom));
    meet_ok && join_ok && zero_ok
}
