//! Stratified stacks, constructible sets and (locally) constructible functions,
//! and the naive, weighted, stack and orbifold Euler characteristics.
//!
//! A stack is a finite list of strata. Each stratum carries the Euler
//! characteristic of its coarse point set and a constant stabilizer group.
//! A stack may also carry a *remainder*: the unlisted part of a stack that
//! is only locally of finite type. Functions take a default value there,
//! and nothing is ever measured on it.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groupcat::{GroupExpr, WeightFunction};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub id: String,
    pub coarse_chi: i64,
    pub stabilizer: GroupExpr,
}

impl Stratum {
    pub fn new(id: impl Into<String>, coarse_chi: i64, stabilizer: GroupExpr) -> Self {
        Stratum { id: id.into(), coarse_chi, stabilizer: stabilizer.normalized() }
    }
}

#[derive(Debug, Clone)]
pub struct StratifiedStack {
    strata: Vec<Stratum>,
    has_remainder: bool,
    index: BTreeMap<String, usize>,
}

impl PartialEq for StratifiedStack {
    fn eq(&self, other: &Self) -> bool {
        self.has_remainder == other.has_remainder && self.strata == other.strata
    }
}

impl Eq for StratifiedStack {}

impl StratifiedStack {
    pub fn new(strata: Vec<Stratum>, has_remainder: bool) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, s) in strata.iter().enumerate() {
            if index.insert(s.id.clone(), i).is_some() {
                return Err(Error::DuplicateStratum(s.id.clone()));
            }
        }
        Ok(StratifiedStack { strata, has_remainder, index })
    }

    pub fn point() -> Self {
        Self::classifying(GroupExpr::Trivial)
    }

    /// `[pt / G]`.
    pub fn classifying(g: GroupExpr) -> Self {
        Self::new(vec![Stratum::new("pt", 1, g)], false).unwrap()
    }

    pub fn affine_space(m: u32) -> Self {
        Self::new(vec![Stratum::new(format!("A{m}"), 1, GroupExpr::Trivial)], false).unwrap()
    }

    /// Projective space stratified as `K^0 ⊔ K^1 ⊔ … ⊔ K^m`.
    pub fn projective_space(m: u32) -> Self {
        let strata = (0..=m).map(|k| Stratum::new(format!("A{k}"), 1, GroupExpr::Trivial)).collect();
        Self::new(strata, false).unwrap()
    }

    /// The torus `(K^×)^rank` as a one-stratum variety.
    pub fn torus(rank: u32) -> Self {
        let chi = i64::from(rank == 0);
        Self::new(vec![Stratum::new(format!("T{rank}"), chi, GroupExpr::Trivial)], false).unwrap()
    }

    /// Stratum-wise product: coarse χ multiply and stabilizers form products.
    pub fn product(&self, other: &StratifiedStack) -> StratifiedStack {
        let mut strata = Vec::with_capacity(self.len() * other.len());
        for a in &self.strata {
            for b in &other.strata {
                strata.push(Stratum::new(
                    format!("({},{})", a.id, b.id),
                    a.coarse_chi * b.coarse_chi,
                    GroupExpr::product(vec![a.stabilizer.clone(), b.stabilizer.clone()]),
                ));
            }
        }
        StratifiedStack::new(strata, self.has_remainder || other.has_remainder)
            .expect("pair ids are distinct")
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn stratum(&self, i: usize) -> &Stratum {
        &self.strata[i]
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn has_remainder(&self) -> bool {
        self.has_remainder
    }

    pub fn is_finite_type(&self) -> bool {
        !self.has_remainder
    }

    pub fn position(&self, id: &str) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownStratum(id.to_string()))
    }
}

pub(crate) fn same_stack(a: &Arc<StratifiedStack>, b: &Arc<StratifiedStack>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A finite set of strata of one stack. Never contains the remainder.
#[derive(Debug, Clone)]
pub struct ConstructibleSet {
    stack: Arc<StratifiedStack>,
    members: BTreeSet<usize>,
}

impl PartialEq for ConstructibleSet {
    fn eq(&self, other: &Self) -> bool {
        same_stack(&self.stack, &other.stack) && self.members == other.members
    }
}

impl ConstructibleSet {
    pub fn empty(stack: Arc<StratifiedStack>) -> Self {
        ConstructibleSet { stack, members: BTreeSet::new() }
    }

    pub fn all(stack: Arc<StratifiedStack>) -> Self {
        let members = (0..stack.len()).collect();
        ConstructibleSet { stack, members }
    }

    pub fn from_ids<S: AsRef<str>>(stack: Arc<StratifiedStack>, ids: &[S]) -> Result<Self> {
        let members = ids.iter().map(|id| stack.position(id.as_ref())).collect::<Result<_>>()?;
        Ok(ConstructibleSet { stack, members })
    }

    pub fn from_indices(stack: Arc<StratifiedStack>, idx: impl IntoIterator<Item = usize>) -> Self {
        let members: BTreeSet<usize> = idx.into_iter().collect();
        assert!(members.iter().all(|&i| i < stack.len()), "stratum index out of range");
        ConstructibleSet { stack, members }
    }

    pub fn stack(&self) -> &Arc<StratifiedStack> {
        &self.stack
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn ids(&self) -> Vec<&str> {
        self.members.iter().map(|&i| self.stack.stratum(i).id.as_str()).collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn indicator(&self) -> ConstructibleFn {
        let mut f = ConstructibleFn::zero(self.stack.clone());
        for &i in &self.members {
            f.values[i] = Rational::one();
        }
        f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Difference,
}

pub fn set_ops(op: SetOp, a: &ConstructibleSet, b: &ConstructibleSet) -> Result<ConstructibleSet> {
    if !same_stack(&a.stack, &b.stack) {
        return Err(Error::StackMismatch);
    }
    let members = match op {
        SetOp::Union => a.members.union(&b.members).copied().collect(),
        SetOp::Intersect => a.members.intersection(&b.members).copied().collect(),
        SetOp::Difference => a.members.difference(&b.members).copied().collect(),
    };
    Ok(ConstructibleSet { stack: a.stack.clone(), members })
}

/// A rational function on a stratified stack: one value per stratum plus a
/// default on the remainder.
///
/// On stacks without a remainder the default only fills strata left out of
/// a descriptor, so it is folded into the values and stored as 0. On stacks
/// with a remainder, a nonzero default makes the function locally
/// constructible but not constructible.
#[derive(Debug, Clone)]
pub struct ConstructibleFn {
    stack: Arc<StratifiedStack>,
    values: Vec<Rational>,
    default: Rational,
}

impl PartialEq for ConstructibleFn {
    fn eq(&self, other: &Self) -> bool {
        same_stack(&self.stack, &other.stack)
            && self.values == other.values
            && self.default == other.default
    }
}

impl ConstructibleFn {
    pub fn zero(stack: Arc<StratifiedStack>) -> Self {
        let values = vec![Rational::zero(); stack.len()];
        ConstructibleFn { stack, values, default: Rational::zero() }
    }

    /// The constant function `c`, including on the remainder.
    pub fn constant(stack: Arc<StratifiedStack>, c: Rational) -> Self {
        let values = vec![c.clone(); stack.len()];
        Self::from_parts(stack, values, c)
    }

    pub fn from_parts(stack: Arc<StratifiedStack>, values: Vec<Rational>, default: Rational) -> Self {
        assert_eq!(values.len(), stack.len(), "one value per stratum");
        let default = if stack.has_remainder() { default } else { Rational::zero() };
        ConstructibleFn { stack, values, default }
    }

    /// Values by stratum id; unlisted strata take `default`.
    pub fn from_map<S: AsRef<str>>(
        stack: Arc<StratifiedStack>,
        map: impl IntoIterator<Item = (S, Rational)>,
        default: Rational,
    ) -> Result<Self> {
        let mut values = vec![default.clone(); stack.len()];
        for (id, v) in map {
            values[stack.position(id.as_ref())?] = v;
        }
        Ok(Self::from_parts(stack, values, default))
    }

    pub fn stack(&self) -> &Arc<StratifiedStack> {
        &self.stack
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn value_of(&self, id: &str) -> Result<&Rational> {
        Ok(&self.values[self.stack.position(id)?])
    }

    pub fn default_value(&self) -> &Rational {
        &self.default
    }

    pub fn is_constructible(&self) -> bool {
        self.default.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.default.is_integer() && self.values.iter().all(Rational::is_integer)
    }

    pub fn support(&self) -> ConstructibleSet {
        let idx = (0..self.values.len()).filter(|&i| !self.values[i].is_zero());
        ConstructibleSet::from_indices(self.stack.clone(), idx)
    }

    pub(crate) fn require_constructible(&self) -> Result<()> {
        if self.is_constructible() { Ok(()) } else { Err(Error::NotConstructible) }
    }

    fn zip_with(
        &self,
        other: &ConstructibleFn,
        op: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<ConstructibleFn> {
        if !same_stack(&self.stack, &other.stack) {
            return Err(Error::StackMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| op(a, b)).collect();
        Ok(ConstructibleFn {
            stack: self.stack.clone(),
            values,
            default: op(&self.default, &other.default),
        })
    }

    pub fn add(&self, other: &ConstructibleFn) -> Result<ConstructibleFn> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ConstructibleFn) -> Result<ConstructibleFn> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ConstructibleFn) -> Result<ConstructibleFn> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> ConstructibleFn {
        ConstructibleFn {
            stack: self.stack.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            default: &self.default * c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointwiseOp {
    Add,
    Sub,
    Mul,
}

pub enum Operand<'a> {
    Fn(&'a ConstructibleFn),
    Scalar(Rational),
}

pub fn cf_pointwise(op: PointwiseOp, f: &ConstructibleFn, g: Operand<'_>) -> Result<ConstructibleFn> {
    let g = match g {
        Operand::Fn(g) => g.clone(),
        Operand::Scalar(c) if op == PointwiseOp::Mul => return Ok(f.scale(&c)),
        Operand::Scalar(c) => ConstructibleFn::constant(f.stack.clone(), c),
    };
    match op {
        PointwiseOp::Add => f.add(&g),
        PointwiseOp::Sub => f.sub(&g),
        PointwiseOp::Mul => f.mul(&g),
    }
}

/// χ^na of a constructible set: the sum of coarse χ over its strata.
pub fn chi_naive(c: &ConstructibleSet) -> i64 {
    c.members().map(|i| c.stack.stratum(i).coarse_chi).sum()
}

/// `Σ_s f(s) χ(s)`.
pub fn chi_naive_weighted(f: &ConstructibleFn) -> Result<Rational> {
    f.require_constructible()?;
    Ok(f.values
        .iter()
        .zip(f.stack.strata())
        .map(|(v, s)| v * int(s.coarse_chi))
        .sum())
}

/// `Σ_s f(s) w(Iso(s)) χ(s)`, undefined when `w = ∞` on the support of `f`.
pub fn chi_weighted(f: &ConstructibleFn, w: &WeightFunction) -> Result<Rational> {
    f.require_constructible()?;
    let mut total = Rational::zero();
    for (v, s) in f.values.iter().zip(f.stack.strata()) {
        if v.is_zero() {
            continue;
        }
        let weight = w.value(&s.stabilizer)?;
        let weighted = weight.weigh(v).map_err(|_| undefined_at(s, format!("{w} is infinite")))?;
        total += weighted * int(s.coarse_chi);
    }
    Ok(total)
}

pub fn chi_weighted_set(c: &ConstructibleSet, w: &WeightFunction) -> Result<Rational> {
    chi_weighted(&c.indicator(), w)
}

pub fn chi_stack(f: &ConstructibleFn) -> Result<Rational> {
    chi_weighted(f, &WeightFunction::InvE)
}

pub fn chi_orbifold(f: &ConstructibleFn) -> Result<Rational> {
    chi_weighted(f, &WeightFunction::O)
}

pub(crate) fn undefined_at(s: &Stratum, reason: String) -> Error {
    Error::UndefinedWeight { stratum: s.id.clone(), reason }
}
