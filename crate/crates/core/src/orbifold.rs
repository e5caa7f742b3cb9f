//! Finite group actions on finite sets, the string-theory orbifold Euler
//! characteristic `χ(M, G) = |G|⁻¹ Σ_{gh = hg} |M^{g,h}|`, and its agreement
//! with `χ^orb` of the quotient stack `[M / G]`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::groupcat::library::permutation_of;
use crate::groupcat::{FiniteGroup, GroupExpr};
use crate::rational::{int, Rational};
use crate::strata::{chi_orbifold, ConstructibleFn, StratifiedStack, Stratum};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGSet {
    group: FiniteGroup,
    size: usize,
    /// `action[g][x]` is `g · x`.
    action: Vec<Vec<usize>>,
}

impl FiniteGSet {
    pub fn new(group: FiniteGroup, size: usize, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} permutations for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, perm) in action.iter().enumerate() {
            let mut hit = vec![false; size];
            if perm.len() != size {
                return Err(Error::InvalidAction(format!("row {g} has length {}", perm.len())));
            }
            for &y in perm {
                if y >= size || std::mem::replace(&mut hit[y], true) {
                    return Err(Error::InvalidAction(format!("row {g} is not a permutation")));
                }
            }
        }
        let e = group.identity();
        if (0..size).any(|x| action[e][x] != x) {
            return Err(Error::InvalidAction("identity does not act trivially".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                if let Some(x) = (0..size).find(|&x| action[gh][x] != action[g][action[h][x]]) {
                    return Err(Error::InvalidAction(format!(
                        "({}·{})·{x} ≠ {}·({}·{x})",
                        group.label(g),
                        group.label(h),
                        group.label(g),
                        group.label(h)
                    )));
                }
            }
        }
        Ok(FiniteGSet { group, size, action })
    }

    /// The group acting trivially on `size` points.
    pub fn trivial_action(group: FiniteGroup, size: usize) -> Self {
        let action = vec![(0..size).collect(); group.order()];
        FiniteGSet { group, size, action }
    }

    /// A permutation group (built with `library::permutation_group`) acting on
    /// its points.
    pub fn natural(group: FiniteGroup) -> Result<Self> {
        let action: Vec<Vec<usize>> = (0..group.order()).map(|g| permutation_of(&group, g)).collect();
        let size = action.first().map_or(0, Vec::len);
        Self::new(group, size, action)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    /// Orbits, each sorted, in order of their smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order()).map(|g| self.act(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.group.order()).filter(|&g| self.act(g, x) == x).collect()
    }

    /// Both sets under the same group, side by side.
    pub fn disjoint_union(&self, other: &FiniteGSet) -> Result<FiniteGSet> {
        if self.group != other.group {
            return Err(Error::InvalidAction("disjoint union needs a common group".into()));
        }
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&y| y + self.size)).collect())
            .collect();
        Ok(FiniteGSet { group: self.group.clone(), size: self.size + other.size, action })
    }

    /// `G × H` acting on `M × N` componentwise; point `(x, y)` is `x·|N| + y`.
    pub fn product(&self, other: &FiniteGSet) -> FiniteGSet {
        let group = self.group.direct_product(&other.group);
        let n = other.size;
        let k = other.group.order();
        let action = (0..group.order())
            .map(|gh| {
                let (g, h) = (gh / k, gh % k);
                (0..self.size * n).map(|p| self.act(g, p / n) * n + other.act(h, p % n)).collect()
            })
            .collect();
        FiniteGSet { group, size: self.size * n, action }
    }
}

/// `|G|⁻¹ Σ_{gh = hg} |{x : gx = hx = x}|`, by brute force over commuting pairs.
pub fn stringy_euler(a: &FiniteGSet) -> Rational {
    let g = &a.group;
    let n = g.order();
    let mut total: i64 = 0;
    for x in 0..n {
        for y in 0..n {
            if g.commute(x, y) {
                total += (0..a.size).filter(|&p| a.act(x, p) == p && a.act(y, p) == p).count() as i64;
            }
        }
    }
    let chi = Rational::new(BigInt::from(total), BigInt::from(n));
    debug_assert!(chi.is_integer(), "orbifold Euler characteristic must be integral");
    chi
}

/// `[M / G]`: one stratum per orbit, coarse χ 1, stabilizer the isotropy group
/// of the orbit's smallest point.
pub fn quotient_stack(a: &FiniteGSet) -> StratifiedStack {
    let strata = a
        .orbits()
        .into_iter()
        .map(|orbit| {
            let x = orbit[0];
            let (stab, _) = a.group.subgroup(&a.stabilizer(x)).expect("isotropy is a subgroup");
            Stratum::new(format!("orbit{x}"), 1, GroupExpr::finite(stab))
        })
        .collect();
    StratifiedStack::new(strata, false).expect("orbit ids are distinct")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhvwReport {
    pub stringy: Rational,
    pub orbifold: Rational,
}

impl DhvwReport {
    pub fn holds(&self) -> bool {
        self.stringy == self.orbifold
    }
}

/// Commuting-pair count against `χ^orb([M/G])`.
pub fn check_dhvw(a: &FiniteGSet) -> DhvwReport {
    let stack = Arc::new(quotient_stack(a));
    let one = ConstructibleFn::constant(stack, int(1));
    let orbifold = chi_orbifold(&one).expect("finite stabilizers have finite orbifold weight");
    DhvwReport { stringy: stringy_euler(a), orbifold }
}
