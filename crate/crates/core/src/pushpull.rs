//! Morphisms of stratified stacks and the calculus of constructible
//! functions along them: naive, weighted and stack pushforwards, pullbacks,
//! pushforwards of locally constructible functions, and composition.
//!
//! A morphism sends each source stratum onto one target stratum. The record
//! for a stratum carries the Euler characteristic of the fibre of the coarse
//! map and the data of the induced map on stabilizers, either as two
//! declared numbers (lean) or as an explicit finite-group homomorphism
//! (rich). Strata must be equifibered: `χ(s) = fibre χ · χ(target(s))`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::groupcat::{GroupExpr, GroupHom, WeightFunction};
use crate::rational::{int, ratio, ExtRational, Rational};
use crate::strata::{
    chi_weighted, same_stack, undefined_at, ConstructibleFn, StratifiedStack, Stratum,
};

/// The induced map `Iso(x) → Iso(φ(x))` on stabilizers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabData {
    /// Declared `χ(Ker φ_*)` and `χ(Iso(φx) / φ_*(Iso x))`.
    Lean { kernel_chi: i64, quotient_chi: i64 },
    /// An explicit homomorphism of finite stabilizers.
    Rich(GroupHom),
}

impl StabData {
    pub fn lean(kernel_chi: i64, quotient_chi: i64) -> Self {
        StabData::Lean { kernel_chi, quotient_chi }
    }

    /// Identity stabilizer data on a stratum with stabilizer `g`.
    pub fn identity(g: &GroupExpr) -> Self {
        match g.as_finite() {
            Some(fg) => StabData::Rich(GroupHom::identity(&fg)),
            None => StabData::lean(1, 1),
        }
    }

    pub fn kernel_chi(&self) -> i64 {
        match self {
            StabData::Lean { kernel_chi, .. } => *kernel_chi,
            StabData::Rich(h) => h.kernel_quotient().0 as i64,
        }
    }

    pub fn quotient_chi(&self) -> i64 {
        match self {
            StabData::Lean { quotient_chi, .. } => *quotient_chi,
            StabData::Rich(h) => h.kernel_quotient().2 as i64,
        }
    }

    pub fn is_representable(&self) -> bool {
        match self {
            StabData::Rich(h) => h.is_injective(),
            StabData::Lean { kernel_chi, .. } => *kernel_chi == 1,
        }
    }

    pub fn is_rich(&self) -> bool {
        matches!(self, StabData::Rich(_))
    }

    /// `quotient χ / kernel χ`, or `None` when the kernel χ vanishes.
    pub fn multiplicity(&self) -> Option<Rational> {
        let (k, q) = match self {
            StabData::Lean { kernel_chi, quotient_chi } => (*kernel_chi, *quotient_chi),
            StabData::Rich(h) => {
                let (k, _, q) = h.kernel_quotient();
                (k as i64, q as i64)
            }
        };
        (k != 0).then(|| ratio(q, k))
    }

    fn then(&self, next: &StabData, at: &str) -> Result<StabData> {
        match (self, next) {
            (StabData::Rich(a), StabData::Rich(b)) => Ok(StabData::Rich(a.then(b)?)),
            (a, b) if a.is_representable() && b.is_representable() => {
                // ψ injective: G_z / ψφ(G_x) fibres over G_z / ψ(G_y) with fibre G_y / φ(G_x)
                Ok(StabData::lean(1, a.quotient_chi() * b.quotient_chi()))
            }
            _ => Err(Error::InsufficientStabData(format!(
                "lean stabilizer data at {at:?} is not representable"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumMap {
    /// Index of the target stratum.
    pub to: usize,
    pub fiber_chi: i64,
    pub stab: StabData,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemainderMap {
    pub fiber_chi: i64,
    pub stab: StabData,
}

/// A failed morphism invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub stratum: Option<String>,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.stratum {
            Some(s) => write!(f, "stratum {s:?}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StackMorphism {
    source: Arc<StratifiedStack>,
    target: Arc<StratifiedStack>,
    map: Vec<StratumMap>,
    remainder: Option<RemainderMap>,
}

impl PartialEq for StackMorphism {
    fn eq(&self, other: &Self) -> bool {
        same_stack(&self.source, &other.source)
            && same_stack(&self.target, &other.target)
            && self.map == other.map
            && self.remainder == other.remainder
    }
}

impl StackMorphism {
    /// Builds a morphism from one record per source stratum. Only shape is
    /// checked here; see [`validate_morphism`] for the invariants.
    pub fn new(
        source: Arc<StratifiedStack>,
        target: Arc<StratifiedStack>,
        map: Vec<StratumMap>,
        remainder: Option<RemainderMap>,
    ) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::InvalidMorphism(format!(
                "{} records for {} source strata",
                map.len(),
                source.len()
            )));
        }
        if let Some(r) = map.iter().find(|r| r.to >= target.len()) {
            return Err(Error::InvalidMorphism(format!("target index {} out of range", r.to)));
        }
        Ok(StackMorphism { source, target, map, remainder })
    }

    /// Records given by stratum id: `(source id, target id, fibre χ, stabilizer data)`.
    pub fn from_ids(
        source: Arc<StratifiedStack>,
        target: Arc<StratifiedStack>,
        records: Vec<(&str, &str, i64, StabData)>,
        remainder: Option<RemainderMap>,
    ) -> Result<Self> {
        let mut slots: Vec<Option<StratumMap>> = vec![None; source.len()];
        for (s, t, fiber_chi, stab) in records {
            let i = source.position(s)?;
            let to = target.position(t)?;
            if slots[i].replace(StratumMap { to, fiber_chi, stab }).is_some() {
                return Err(Error::InvalidMorphism(format!("stratum {s:?} mapped twice")));
            }
        }
        let map = slots
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    Error::InvalidMorphism(format!("stratum {:?} is not mapped", source.stratum(i).id))
                })
            })
            .collect::<Result<_>>()?;
        Self::new(source, target, map, remainder)
    }

    pub fn identity(stack: Arc<StratifiedStack>) -> Self {
        let map = stack
            .strata()
            .iter()
            .enumerate()
            .map(|(i, s)| StratumMap { to: i, fiber_chi: 1, stab: StabData::identity(&s.stabilizer) })
            .collect();
        let remainder = stack
            .has_remainder()
            .then(|| RemainderMap { fiber_chi: 1, stab: StabData::lean(1, 1) });
        StackMorphism { source: stack.clone(), target: stack, map, remainder }
    }

    pub fn source(&self) -> &Arc<StratifiedStack> {
        &self.source
    }

    pub fn target(&self) -> &Arc<StratifiedStack> {
        &self.target
    }

    pub fn records(&self) -> &[StratumMap] {
        &self.map
    }

    pub fn record(&self, i: usize) -> &StratumMap {
        &self.map[i]
    }

    pub fn remainder(&self) -> Option<&RemainderMap> {
        self.remainder.as_ref()
    }

    /// Preimages of bounded sets are bounded: every stratum lands on a listed
    /// stratum, and a source remainder is carried into the target remainder.
    pub fn is_finite_type(&self) -> bool {
        !self.source.has_remainder() || self.remainder.is_some()
    }

    pub fn is_representable(&self) -> bool {
        self.map.iter().all(|r| r.stab.is_representable())
            && self.remainder.as_ref().is_none_or(|r| r.stab.is_representable())
    }

    pub fn is_rich(&self) -> bool {
        self.map.iter().all(|r| r.stab.is_rich())
            && self.remainder.as_ref().is_none_or(|r| r.stab.is_rich())
    }

    fn source_stratum(&self, i: usize) -> &Stratum {
        self.source.stratum(i)
    }

    fn target_of(&self, i: usize) -> &Stratum {
        self.target.stratum(self.map[i].to)
    }

    fn validated(&self) -> Result<()> {
        validate_morphism(self).map_err(|v| Error::InvalidMorphism(v.to_string()))
    }
}

/// Checks every morphism invariant and reports the first violation.
pub fn validate_morphism(m: &StackMorphism) -> std::result::Result<(), Violation> {
    let both = m.source.has_remainder() && m.target.has_remainder();
    if m.remainder.is_some() != both {
        return Err(Violation {
            stratum: None,
            reason: "remainder record must be present exactly when both stacks have remainders"
                .into(),
        });
    }
    for (i, r) in m.map.iter().enumerate() {
        let s = m.source_stratum(i);
        let t = m.target_of(i);
        let fail = |reason: String| Err(Violation { stratum: Some(s.id.clone()), reason });
        if s.coarse_chi != r.fiber_chi * t.coarse_chi {
            return fail(format!(
                "coarse χ {} ≠ fibre χ {} · target χ {}",
                s.coarse_chi, r.fiber_chi, t.coarse_chi
            ));
        }
        match &r.stab {
            StabData::Rich(h) => {
                if !s.stabilizer.matches_finite(h.source()) {
                    return fail("homomorphism source is not the stratum stabilizer".into());
                }
                if !t.stabilizer.matches_finite(h.target()) {
                    return fail(format!(
                        "homomorphism target is not the stabilizer of {:?}",
                        t.id
                    ));
                }
            }
            StabData::Lean { kernel_chi, quotient_chi } => {
                // χ(G_x) = χ(K)·χ(I) and χ(G_y) = χ(I)·χ(G_y/I)
                let lhs = t.stabilizer.euler_char() * kernel_chi;
                let rhs = s.stabilizer.euler_char() * quotient_chi;
                if lhs != rhs {
                    return fail(format!(
                        "χ(target stabilizer)·kernel χ = {lhs} ≠ χ(source stabilizer)·quotient χ = {rhs}"
                    ));
                }
            }
        }
    }
    Ok(())
}

/// `m_φ = χ(Iso(φx)/φ_*(Iso x)) / χ(Ker φ_*)` on a source stratum.
pub fn m_phi(m: &StackMorphism, stratum: usize) -> Result<Rational> {
    m.map[stratum]
        .stab
        .multiplicity()
        .ok_or_else(|| Error::ZeroKernelChi(m.source_stratum(stratum).id.clone()))
}

pub fn m_phi_of(m: &StackMorphism, id: &str) -> Result<Rational> {
    m_phi(m, m.source.position(id)?)
}

fn require_source(m: &StackMorphism, f: &ConstructibleFn) -> Result<()> {
    if same_stack(m.source(), f.stack()) { Ok(()) } else { Err(Error::StackMismatch) }
}

/// Fibrewise sums over listed strata, without any checks.
fn push_values(m: &StackMorphism, values: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); m.target.len()];
    for (r, v) in m.map.iter().zip(values) {
        if !v.is_zero() {
            out[r.to] += v * int(r.fiber_chi);
        }
    }
    out
}

/// `(CF^na φ f)(t) = Σ_{s ↦ t} f(s)·χ(fibre of s)`.
pub fn pushforward_naive(m: &StackMorphism, f: &ConstructibleFn) -> Result<ConstructibleFn> {
    require_source(m, f)?;
    f.require_constructible()?;
    m.validated()?;
    let values = push_values(m, f.values());
    Ok(ConstructibleFn::from_parts(m.target.clone(), values, Rational::zero()))
}

/// `CF_w(φ) f = w_G^{-1} · CF^na(φ)(w_F · f)`. Undefined if `w = ∞` on any
/// source stratum or `w = 0` on any target stratum.
pub fn pushforward_weighted(
    m: &StackMorphism,
    f: &ConstructibleFn,
    w: &WeightFunction,
) -> Result<ConstructibleFn> {
    require_source(m, f)?;
    f.require_constructible()?;
    m.validated()?;
    let mut weighted = Vec::with_capacity(m.source.len());
    for (s, v) in m.source.strata().iter().zip(f.values()) {
        match w.value(&s.stabilizer)? {
            ExtRational::Finite(x) => weighted.push(x * v),
            ExtRational::Infinity => return Err(undefined_at(s, format!("{w} is infinite"))),
        }
    }
    let mut inverse = Vec::with_capacity(m.target.len());
    for t in m.target.strata() {
        let x = w.value(&t.stabilizer)?;
        if x.is_zero() {
            return Err(undefined_at(t, format!("{w} vanishes on a target stratum")));
        }
        inverse.push(x.recip().into_finite()?);
    }
    let values = push_values(m, &weighted)
        .into_iter()
        .zip(inverse)
        .map(|(v, inv)| v * inv)
        .collect();
    Ok(ConstructibleFn::from_parts(m.target.clone(), values, Rational::zero()))
}

/// `m_φ` on every source stratum. When `only` is given, strata outside it are
/// skipped and get multiplicity 0.
fn multiplicities(m: &StackMorphism, only: Option<&ConstructibleFn>) -> Result<Vec<Rational>> {
    (0..m.source.len())
        .map(|i| match only {
            Some(f) if f.value(i).is_zero() => Ok(Rational::zero()),
            _ => m_phi(m, i),
        })
        .collect()
}

/// `CF^stk(φ) f = CF^na(φ)(m_φ · f)`. Requires `χ(Ker φ_*) ≠ 0` on every
/// source stratum, not only on the support of `f`.
pub fn pushforward_stack(m: &StackMorphism, f: &ConstructibleFn) -> Result<ConstructibleFn> {
    push_stack(m, f, false)
}

/// As [`pushforward_stack`], but only requires `χ(Ker φ_*) ≠ 0` on the
/// support of `f`. Experimental; the functoriality laws are not claimed for it.
pub fn pushforward_stack_lenient(m: &StackMorphism, f: &ConstructibleFn) -> Result<ConstructibleFn> {
    push_stack(m, f, true)
}

fn push_stack(m: &StackMorphism, f: &ConstructibleFn, lenient: bool) -> Result<ConstructibleFn> {
    require_source(m, f)?;
    f.require_constructible()?;
    m.validated()?;
    let mult = multiplicities(m, lenient.then_some(f))?;
    let scaled: Vec<Rational> = f.values().iter().zip(&mult).map(|(v, k)| v * k).collect();
    let values = push_values(m, &scaled);
    Ok(ConstructibleFn::from_parts(m.target.clone(), values, Rational::zero()))
}

/// `ψ ∘ φ` for `φ = first: F → G` and `ψ = second: G → H`.
pub fn compose(first: &StackMorphism, second: &StackMorphism) -> Result<StackMorphism> {
    if !same_stack(&first.target, &second.source) {
        return Err(Error::StackMismatch);
    }
    let map = first
        .map
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let next = &second.map[r.to];
            Ok(StratumMap {
                to: next.to,
                fiber_chi: r.fiber_chi * next.fiber_chi,
                stab: r.stab.then(&next.stab, &first.source_stratum(i).id)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let remainder = match (&first.remainder, &second.remainder) {
        (Some(a), Some(b)) if first.source.has_remainder() && second.target.has_remainder() => {
            Some(RemainderMap {
                fiber_chi: a.fiber_chi * b.fiber_chi,
                stab: a.stab.then(&b.stab, "remainder")?,
            })
        }
        _ => None,
    };
    StackMorphism::new(first.source.clone(), second.target.clone(), map, remainder)
}

/// `φ^* f = f ∘ φ`.
pub fn pullback(m: &StackMorphism, f: &ConstructibleFn) -> Result<ConstructibleFn> {
    if !same_stack(m.target(), f.stack()) {
        return Err(Error::StackMismatch);
    }
    if !m.is_finite_type() {
        return Err(Error::NotFiniteType);
    }
    let values = m.map.iter().map(|r| f.value(r.to).clone()).collect();
    let default = if m.source.has_remainder() { f.default_value().clone() } else { Rational::zero() };
    Ok(ConstructibleFn::from_parts(m.source.clone(), values, default))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcfMode {
    Naive,
    Stack,
}

/// Pushforward of a locally constructible function along a finite-type
/// morphism. The remainder is carried along its own record.
pub fn pushforward_lcf(m: &StackMorphism, f: &ConstructibleFn, mode: LcfMode) -> Result<ConstructibleFn> {
    require_source(m, f)?;
    if !m.is_finite_type() {
        return Err(Error::NotFiniteType);
    }
    m.validated()?;
    let (values, default) = match mode {
        LcfMode::Naive => {
            let default = m
                .remainder
                .as_ref()
                .map_or_else(Rational::zero, |r| f.default_value() * int(r.fiber_chi));
            (push_values(m, f.values()), default)
        }
        LcfMode::Stack => {
            let mult = multiplicities(m, None)?;
            let scaled: Vec<Rational> = f.values().iter().zip(&mult).map(|(v, k)| v * k).collect();
            let default = match &m.remainder {
                Some(r) => {
                    let k = r.stab.multiplicity().ok_or_else(|| Error::ZeroKernelChi("remainder".into()))?;
                    f.default_value() * int(r.fiber_chi) * k
                }
                None => Rational::zero(),
            };
            (push_values(m, &scaled), default)
        }
    };
    Ok(ConstructibleFn::from_parts(m.target.clone(), values, default))
}

/// `χ_w(F, f) = χ_w(G, CF_w(φ) f)`, compared exactly.
pub fn check_conservation(m: &StackMorphism, f: &ConstructibleFn, w: &WeightFunction) -> Result<bool> {
    let pushed = pushforward_weighted(m, f, w)?;
    Ok(chi_weighted(f, w)? == chi_weighted(&pushed, w)?)
}

/// Multiplies `f` by `m_φ`, for callers that want the intermediate function.
pub fn weight_by_multiplicity(m: &StackMorphism, f: &ConstructibleFn) -> Result<ConstructibleFn> {
    require_source(m, f)?;
    let mult = multiplicities(m, None)?;
    let values = f.values().iter().zip(&mult).map(|(v, k)| v * k).collect();
    Ok(ConstructibleFn::from_parts(m.source.clone(), values, f.default_value().clone()))
}
