use std::fmt;
use std::str::FromStr;

use super::expr::GroupExpr;
use crate::error::{Error, Result};
use crate::rational::{int, ExtRational};

/// A weight `G ↦ w(G) ∈ Q ∪ {∞}` on stabilizer groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightFunction {
    /// Constant 1.
    Naive,
    /// χ(G).
    E,
    /// 1/χ(G), ∞ where χ(G) = 0.
    InvE,
    /// Class count of the adjoint quotient.
    O,
    /// Explicit values, matched against normalized group expressions.
    UserTable(Vec<(GroupExpr, ExtRational)>),
}

impl WeightFunction {
    pub fn value(&self, g: &GroupExpr) -> Result<ExtRational> {
        Ok(match self {
            WeightFunction::Naive => ExtRational::one(),
            WeightFunction::E => ExtRational::Finite(int(g.euler_char())),
            WeightFunction::InvE => ExtRational::Finite(int(g.euler_char())).recip(),
            WeightFunction::O => ExtRational::Finite(int(g.orbifold_weight()?)),
            WeightFunction::UserTable(rows) => {
                let g = g.clone().normalized();
                rows.iter()
                    .find(|(pat, _)| pat.clone().normalized() == g)
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| Error::UnsupportedGroup(format!("no table entry for {g}")))?
            }
        })
    }

    /// Known to satisfy `w(G×H) = w(G)·w(H)`.
    pub fn is_multiplicative(&self) -> bool {
        !matches!(self, WeightFunction::UserTable(_))
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            WeightFunction::Naive => "naive",
            WeightFunction::E => "e",
            WeightFunction::InvE => "inv-e",
            WeightFunction::O => "o",
            WeightFunction::UserTable(_) => "table",
        };
        f.write_str(s)
    }
}

impl FromStr for WeightFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(WeightFunction::Naive),
            "e" => Ok(WeightFunction::E),
            "inv-e" => Ok(WeightFunction::InvE),
            "o" => Ok(WeightFunction::O),
            other => Err(Error::Parse(format!("unknown weight {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupcat::library::{cyclic, symmetric};
    use crate::rational::ratio;

    #[test]
    fn weight_examples() {
        let z2 = GroupExpr::finite(cyclic(2));
        assert_eq!(WeightFunction::InvE.value(&z2).unwrap(), ExtRational::Finite(ratio(1, 2)));
        assert_eq!(WeightFunction::InvE.value(&GroupExpr::torus(1)).unwrap(), ExtRational::Infinity);
        for g in [z2.clone(), GroupExpr::torus(3), GroupExpr::gl(2)] {
            assert_eq!(WeightFunction::Naive.value(&g).unwrap(), ExtRational::one());
        }
        assert_eq!(
            WeightFunction::O.value(&GroupExpr::finite(symmetric(3))).unwrap(),
            ExtRational::from_int(3)
        );
        assert!(WeightFunction::O.value(&GroupExpr::gl(1)).is_err());
    }

    #[test]
    fn user_table() {
        let w = WeightFunction::UserTable(vec![
            (GroupExpr::Trivial, ExtRational::from_int(1)),
            (GroupExpr::Torus(1), ExtRational::Infinity),
        ]);
        assert_eq!(w.value(&GroupExpr::torus(1)).unwrap(), ExtRational::Infinity);
        assert_eq!(w.value(&GroupExpr::Torus(0)).unwrap(), ExtRational::from_int(1));
        assert!(w.value(&GroupExpr::unipotent(1)).is_err());
    }

    #[test]
    fn names_round_trip() {
        for w in [WeightFunction::Naive, WeightFunction::E, WeightFunction::InvE, WeightFunction::O] {
            assert_eq!(w.to_string().parse::<WeightFunction>().unwrap(), w);
        }
    }
}
