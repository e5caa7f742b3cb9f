//! Catalogue of affine algebraic groups with exact Euler characteristics,
//! finite-group machinery, and weight functions on stabilizers.

mod expr;
mod finite;
pub mod library;
mod weight;

pub use expr::GroupExpr;
pub use finite::{FiniteGroup, GroupHom};
pub use weight::WeightFunction;

use crate::error::Result;
use crate::rational::ExtRational;

pub fn euler_char_group(g: &GroupExpr) -> i64 {
    g.euler_char()
}

pub fn orbifold_weight(g: &GroupExpr) -> Result<i64> {
    g.orbifold_weight()
}

pub fn weight_value(w: &WeightFunction, g: &GroupExpr) -> Result<ExtRational> {
    w.value(g)
}

/// `(|ker h|, |im h|, |target| / |im h|)`.
pub fn hom_kernel_quotient(h: &GroupHom) -> (usize, usize, usize) {
    h.kernel_quotient()
}
