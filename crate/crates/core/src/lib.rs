//! Exact calculus of constructible functions on stratified algebraic stacks.
//!
//! A stack is modelled by finitely many strata, each with the Euler
//! characteristic of its coarse points and a constant stabilizer group from a
//! closed catalogue (finite groups, tori, unipotent groups, `GL_n`, and their
//! products). On top of that model the crate computes naive, weighted, stack
//! and orbifold Euler characteristics, pushforwards and pullbacks along
//! morphisms, fibre products over finite stabilizers, and the orbifold Euler
//! characteristic of finite group actions. All arithmetic is exact.

pub mod cartesian;
pub mod cli;
pub mod error;
pub mod gen;
pub mod groupcat;
pub mod json;
pub mod laws;
pub mod orbifold;
pub mod pushpull;
pub mod rational;
pub mod strata;

pub use error::{Error, Result};
pub use rational::{ExtRational, Rational};
