//! The free Boolean algebra on one generator `x`, a commutativity
//! counterexample with a single dilatation.

use crate::algebra::{Algebra, Carrier, Operation, Rank};
use crate::error::Result;
use crate::representation::Frame;

/// Elements are two-bit masks: `⊥ = 00`, `x = 01`, `¬x = 10`, `⊤ = 11`.
pub const ELEMENTS: [&str; 4] = ["⊥", "x", "¬x", "⊤"];

pub fn build_boolean_example() -> Result<(Algebra, Frame)> {
    let carrier = Carrier::new(ELEMENTS)?;
    let and = Operation::from_fn("∧", Rank::numbered(2), 4, |a| a[0] & a[1])?;
    let not = Operation::from_fn("¬", Rank::numbered(1), 4, |a| 3 - a[0])?;
    let bottom = Operation::tabulated("⊥", Rank::nullary(), 4, vec![0])?;
    let alg = Algebra::new("boolean", carrier, vec![and, not, bottom])?;
    let frame = Frame::new(Rank::new(["*"])?, vec![1])?;
    Ok((alg, frame))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Assignment;

    #[test]
    fn truth_tables() {
        let (alg, frame) = build_boolean_example().unwrap();
        let c = alg.carrier();
        let meet = alg.op_index("∧").unwrap();
        let args = Assignment::new(
            Rank::numbered(2),
            vec![c.position("⊤").unwrap(), c.position("⊥").unwrap()],
        )
        .unwrap();
        assert_eq!(alg.eval(meet, &args).unwrap(), c.position("⊥").unwrap());
        let neg = alg.op_index("¬").unwrap();
        let x = Assignment::new(Rank::numbered(1), vec![c.position("x").unwrap()]).unwrap();
        assert_eq!(c.name(alg.eval(neg, &x).unwrap()), "¬x");
        assert_eq!(c.name(frame.values()[0]), "x");
    }
}
