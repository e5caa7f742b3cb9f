//! Seeded property suites for the functoriality, conservation, Cartesian
//! square and orbifold laws.
//!
//! A suite runs `cases` independent cases; case `i` draws from
//! [`Gen::new(seed, i)`](Gen::new). Cases may run in parallel but reports list
//! them in index order, so a report depends only on `(suite, seed, cases)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cartesian::{fiber_product, verify_commutation};
use crate::error::{Error, Result};
use crate::gen::{Flavor, Gen, RichOptions, MAX_GROUP_ORDER};
use crate::groupcat::{GroupExpr, WeightFunction};
use crate::json::{function_to_desc, gset_to_desc, group_to_desc, morphism_to_inline_desc, stack_to_desc};
use crate::orbifold::{check_dhvw, stringy_euler};
use crate::pushpull::{
    check_conservation, compose, m_phi, pullback, pushforward_lcf, pushforward_naive, pushforward_stack,
    pushforward_weighted, validate_morphism, LcfMode, StabData, StackMorphism,
};
use crate::rational::int;
use crate::strata::{chi_weighted, ConstructibleFn, ConstructibleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Functoriality,
    StackFunctoriality,
    Cartesian,
    Weights,
    Dhvw,
    Conservation,
    StackWeight,
    Integrality,
    Lcf,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Functoriality,
        Suite::StackFunctoriality,
        Suite::Cartesian,
        Suite::Weights,
        Suite::Dhvw,
        Suite::Conservation,
        Suite::StackWeight,
        Suite::Integrality,
        Suite::Lcf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Functoriality => "functoriality",
            Suite::StackFunctoriality => "stack-functoriality",
            Suite::Cartesian => "cartesian",
            Suite::Weights => "weights",
            Suite::Dhvw => "dhvw",
            Suite::Conservation => "conservation",
            Suite::StackWeight => "stack-weight",
            Suite::Integrality => "integrality",
            Suite::Lcf => "lcf",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub case: u64,
    pub reason: String,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: u64,
    pub passed: u64,
    pub failed: u64,
    /// Case counts by tag, e.g. how many cases were non-representable.
    pub tallies: BTreeMap<String, u64>,
    pub first_failure: Option<Counterexample>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn tally(&self, tag: &str) -> u64 {
        self.tallies.get(tag).copied().unwrap_or(0)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} cases, {} passed, {} failed (seed {})",
            self.suite, self.cases, self.passed, self.failed, self.seed
        )?;
        for (tag, n) in &self.tallies {
            writeln!(f, "  {tag}: {n}")?;
        }
        if let Some(c) = &self.first_failure {
            writeln!(f, "  first counterexample (case {}): {}", c.case, c.reason)?;
            let text = serde_json::to_string_pretty(&c.witness).expect("witness serializes");
            for line in text.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

/// One case: its inputs, the first failed check and any tags.
struct Case {
    witness: serde_json::Map<String, Value>,
    failure: Option<String>,
    tags: Vec<&'static str>,
}

impl Case {
    fn new() -> Self {
        Case { witness: serde_json::Map::new(), failure: None, tags: Vec::new() }
    }

    fn record(&mut self, key: &str, value: Value) {
        self.witness.insert(key.to_string(), value);
    }

    fn morphism(&mut self, key: &str, m: &StackMorphism) {
        self.record(key, serde_json::to_value(morphism_to_inline_desc(m)).expect("serializes"));
    }

    fn function(&mut self, key: &str, f: &ConstructibleFn) {
        self.record(key, serde_json::to_value(function_to_desc(f, None)).expect("serializes"));
    }

    fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn attempt<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{what}: {e}"));
                None
            }
        }
    }

    fn tag(&mut self, tag: &'static str) {
        self.tags.push(tag);
    }
}

pub fn run_suite(suite: Suite, seed: u64, cases: u64) -> SuiteReport {
    let body: fn(&mut Gen, &mut Case) = match suite {
        Suite::Functoriality => functoriality_case,
        Suite::StackFunctoriality => stack_functoriality_case,
        Suite::Cartesian => cartesian_case,
        Suite::Weights => weights_case,
        Suite::Dhvw => dhvw_case,
        Suite::Conservation => conservation_case,
        Suite::StackWeight => stack_weight_case,
        Suite::Integrality => integrality_case,
        Suite::Lcf => lcf_case,
    };
    let results: Vec<Case> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut gen = Gen::new(seed, i);
            let mut case = Case::new();
            body(&mut gen, &mut case);
            case
        })
        .collect();
    let mut report = SuiteReport {
        suite: suite.name().to_string(),
        seed,
        cases,
        passed: 0,
        failed: 0,
        tallies: BTreeMap::new(),
        first_failure: None,
    };
    for (i, case) in results.into_iter().enumerate() {
        for tag in case.tags {
            *report.tallies.entry(tag.to_string()).or_default() += 1;
        }
        match case.failure {
            None => report.passed += 1,
            Some(reason) => {
                report.failed += 1;
                if report.first_failure.is_none() {
                    report.first_failure =
                        Some(Counterexample { case: i as u64, reason, witness: Value::Object(case.witness) });
                }
            }
        }
    }
    report
}

fn rich_pair(gen: &mut Gen, opts: &RichOptions, max_order: usize) -> (StackMorphism, StackMorphism) {
    let h = Arc::new(gen.finite_stack(4, max_order, false, "h"));
    let psi = gen.rich_morphism_into(&h, opts, "g");
    let phi = gen.rich_morphism_into(psi.source(), opts, "f");
    (phi, psi)
}

fn functoriality_case(gen: &mut Gen, case: &mut Case) {
    let (phi, psi) = rich_pair(gen, &RichOptions::default(), MAX_GROUP_ORDER);
    let f = gen.function(phi.source(), false);
    let g = gen.function(psi.target(), false);
    case.morphism("phi", &phi);
    case.morphism("psi", &psi);
    case.function("f", &f);
    case.function("g", &g);
    let Some(both) = case.attempt("compose", compose(&phi, &psi)) else { return };
    let lhs = pushforward_naive(&both, &f);
    let rhs = pushforward_naive(&phi, &f).and_then(|x| pushforward_naive(&psi, &x));
    if let (Some(l), Some(r)) = (case.attempt("composite pushforward", lhs), case.attempt("pushforward", rhs)) {
        case.check(l == r, || "naive pushforward does not compose".into());
    }
    let lhs = pullback(&both, &g);
    let rhs = pullback(&psi, &g).and_then(|x| pullback(&phi, &x));
    if let (Some(l), Some(r)) = (case.attempt("composite pullback", lhs), case.attempt("pullback", rhs)) {
        case.check(l == r, || "pullback is not contravariant".into());
    }
}

fn stack_functoriality_case(gen: &mut Gen, case: &mut Case) {
    let opts = RichOptions { kernel_chance: 0.6, ..RichOptions::default() };
    let (phi, psi) = rich_pair(gen, &opts, MAX_GROUP_ORDER);
    let f = gen.function(phi.source(), false);
    case.morphism("phi", &phi);
    case.morphism("psi", &psi);
    case.function("f", &f);
    if !(phi.is_representable() && psi.is_representable()) {
        case.tag("non-representable");
    }
    let Some(both) = case.attempt("compose", compose(&phi, &psi)) else { return };
    for (i, r) in phi.records().iter().enumerate() {
        let (Some(whole), Some(a), Some(b)) = (
            case.attempt("m of composite", m_phi(&both, i)),
            case.attempt("m of phi", m_phi(&phi, i)),
            case.attempt("m of psi", m_phi(&psi, r.to)),
        ) else {
            return;
        };
        case.check(whole == &a * &b, || {
            format!("m at {:?}: composite {whole}, product {}", phi.source().stratum(i).id, a * b)
        });
    }
    let lhs = pushforward_stack(&both, &f);
    let rhs = pushforward_stack(&phi, &f).and_then(|x| pushforward_stack(&psi, &x));
    if let (Some(l), Some(r)) = (case.attempt("composite pushforward", lhs), case.attempt("pushforward", rhs)) {
        case.check(l == r, || "stack pushforward does not compose".into());
    }
}

/// `|AβB| = |A|·|B| / |A ∩ βBβ⁻¹|`, by brute force.
fn double_coset_size(g: &crate::groupcat::FiniteGroup, a: &[usize], b: &[usize], beta: usize) -> usize {
    let conj: Vec<usize> = b.iter().map(|&y| g.mul(g.mul(beta, y), g.inv(beta))).collect();
    let meet = a.iter().filter(|x| conj.contains(x)).count();
    a.len() * b.len() / meet
}

fn cartesian_case(gen: &mut Gen, case: &mut Case) {
    let h = Arc::new(gen.finite_stack(3, 16, false, "h"));
    let phi_opts = RichOptions { injective: true, ..RichOptions::default() };
    let phi = gen.rich_morphism_into(&h, &phi_opts, "f");
    let psi = gen.rich_morphism_into(&h, &RichOptions::default(), "g");
    case.morphism("phi", &phi);
    case.morphism("psi", &psi);
    for (m, name) in [(&phi, "phi"), (&psi, "psi")] {
        for (i, r) in m.records().iter().enumerate() {
            let StabData::Rich(hom) = &r.stab else { continue };
            let gy = hom.target();
            let image = hom.image();
            let cosets = gy.double_cosets(&image, &[gy.identity()]).expect("image is a subgroup");
            case.check(cosets.iter().map(|c| c.1).sum::<usize>() == gy.order(), || {
                format!("{name} stratum {i}: double cosets do not partition")
            });
        }
    }
    // double cosets ψ(G_x) \ G_y / φ(G_z) against the orbit-stabilizer sizes
    for (a, ra) in psi.records().iter().enumerate() {
        for (b, rb) in phi.records().iter().enumerate() {
            if ra.to != rb.to {
                continue;
            }
            let (StabData::Rich(hp), StabData::Rich(hf)) = (&ra.stab, &rb.stab) else { continue };
            let gy = hp.target();
            let (left, right) = (hp.image(), hf.image());
            let Some(cosets) = case.attempt("double cosets", gy.double_cosets(&left, &right)) else { return };
            case.check(cosets.iter().map(|c| c.1).sum::<usize>() == gy.order(), || {
                format!("double cosets over ({a}, {b}) do not sum to |G_y|")
            });
            for &(beta, size) in &cosets {
                case.check(size == double_coset_size(gy, &left, &right, beta), || {
                    format!("double coset of {beta} over ({a}, {b}) has the wrong size")
                });
            }
        }
    }
    let Some(sq) = case.attempt("fiber product", fiber_product(&phi, &psi)) else { return };
    let pairs = psi.records().iter().flat_map(|a| phi.records().iter().filter(move |b| a.to == b.to)).count();
    if sq.e.len() > pairs {
        case.tag("split fibres");
    }
    case.record("e", serde_json::to_value(stack_to_desc(&sq.e)).expect("serializes"));
    for (m, name) in [(&sq.eta, "eta"), (&sq.theta, "theta")] {
        if let Err(v) = validate_morphism(m) {
            case.check(false, || format!("{name} is invalid: {v}"));
        }
    }
    case.check(sq.eta.is_representable(), || "eta is not representable".into());
    case.check(sq.theta.is_finite_type(), || "theta is not of finite type".into());
    for i in 0..phi.source().len() {
        let c = ConstructibleSet::from_indices(phi.source().clone(), [i]);
        let Some(report) = case.attempt("commutation", verify_commutation(&sq, &c)) else { return };
        case.check(report.holds(), || {
            format!("square does not commute on {:?}", phi.source().stratum(i).id)
        });
    }
}

const WEIGHTS: [WeightFunction; 4] = [WeightFunction::Naive, WeightFunction::E, WeightFunction::InvE, WeightFunction::O];

fn weights_case(gen: &mut Gen, case: &mut Case) {
    // explicit direct-product tables against the product of the factors
    let a = gen.finite_group(MAX_GROUP_ORDER);
    let b = gen.finite_group(MAX_GROUP_ORDER / a.order());
    let ab = a.direct_product(&b);
    case.record("a", serde_json::to_value(crate::json::finite_group_desc(&a)).expect("serializes"));
    case.record("b", serde_json::to_value(crate::json::finite_group_desc(&b)).expect("serializes"));
    case.check(ab.order() == a.order() * b.order(), || "e is not multiplicative on a direct product".into());
    case.check(
        ab.conjugacy_classes().len() == a.conjugacy_classes().len() * b.conjugacy_classes().len(),
        || "o is not multiplicative on a direct product".into(),
    );
    let (fa, fb, fab) = (GroupExpr::finite(a), GroupExpr::finite(b), GroupExpr::finite(ab));
    let joint = GroupExpr::product(vec![fa.clone(), fb.clone()]);
    case.check(joint.euler_char() == fab.euler_char(), || "e of the product expression".into());
    case.check(joint.orbifold_weight() == fab.orbifold_weight(), || "o of the product expression".into());

    // symbolic pairs from the catalogue
    let x = gen.group_expr(Flavor::NoGl);
    let y = gen.group_expr(Flavor::Any);
    case.record("x", serde_json::to_value(group_to_desc(&x)).expect("serializes"));
    case.record("y", serde_json::to_value(group_to_desc(&y)).expect("serializes"));
    let xy = GroupExpr::product(vec![x.clone(), y.clone()]);
    case.check(xy.euler_char() == x.euler_char() * y.euler_char(), || "e is not multiplicative".into());
    if let (Ok(p), Ok(q)) = (x.orbifold_weight(), y.orbifold_weight()) {
        case.check(xy.orbifold_weight() == Ok(p * q), || "o is not multiplicative".into());
    }

    // χ_w on product stacks and over partitions
    let s = Arc::new(gen.stack(3, Flavor::NoGl, false));
    let t = Arc::new(gen.stack(3, Flavor::NoGl, false));
    let st = Arc::new(s.product(&t));
    let f = gen.function(&s, false);
    let g = gen.function(&t, false);
    let fg = ConstructibleFn::from_parts(
        st.clone(),
        f.values().iter().flat_map(|u| g.values().iter().map(move |v| u * v)).collect(),
        int(0),
    );
    case.function("f", &f);
    case.function("g", &g);
    for w in &WEIGHTS {
        let (cf, cg, cfg) = (chi_weighted(&f, w), chi_weighted(&g, w), chi_weighted(&fg, w));
        if let (Ok(p), Ok(q)) = (&cf, &cg) {
            match &cfg {
                Ok(r) => case.check(r == &(p * q), || format!("chi_{w} is not multiplicative")),
                Err(e) => case.check(false, || format!("chi_{w} of the product: {e}")),
            }
        }
        let part: Vec<bool> = (0..s.len()).map(|_| gen.chance(0.5)).collect();
        let piece = |keep: bool| {
            let values = f.values().iter().zip(&part).map(|(v, &p)| if p == keep { v.clone() } else { int(0) }).collect();
            ConstructibleFn::from_parts(s.clone(), values, int(0))
        };
        if let (Ok(whole), Ok(u), Ok(v)) = (&cf, chi_weighted(&piece(true), w), chi_weighted(&piece(false), w)) {
            case.check(whole == &(u + v), || format!("chi_{w} is not additive"));
        }
    }
}

fn dhvw_case(gen: &mut Gen, case: &mut Case) {
    let a = gen.gset(MAX_GROUP_ORDER, 12);
    case.record("gset", serde_json::to_value(gset_to_desc(&a)).expect("serializes"));
    let chi = stringy_euler(&a);
    case.check(chi.is_integer(), || format!("stringy Euler characteristic {chi} is not an integer"));
    let r = check_dhvw(&a);
    case.check(r.holds(), || format!("commuting pairs give {}, orbifold weight gives {}", r.stringy, r.orbifold));
}

fn conservation_case(gen: &mut Gen, case: &mut Case) {
    let (w, flavor, tag) = match gen.range(0, 2) {
        0 => (WeightFunction::Naive, Flavor::Any, "weight naive"),
        1 => (WeightFunction::InvE, Flavor::Finite, "weight inv-e"),
        _ => (WeightFunction::O, Flavor::NonzeroOrbifold, "weight o"),
    };
    case.tag(tag);
    case.record("weight", json!(w.to_string()));
    let t = Arc::new(gen.stack(4, flavor, false));
    let m = if flavor == Flavor::Finite && gen.chance(0.5) {
        let t = Arc::new(gen.finite_stack(4, MAX_GROUP_ORDER, false, "t"));
        gen.rich_morphism_into(&t, &RichOptions::default(), "s")
    } else {
        gen.lean_morphism_into(&t, flavor)
    };
    let f = gen.function(m.source(), false);
    case.morphism("m", &m);
    case.function("f", &f);
    if let Some(ok) = case.attempt("conservation", check_conservation(&m, &f, &w)) {
        case.check(ok, || format!("chi_{w} is not conserved"));
    }
}

fn stack_weight_case(gen: &mut Gen, case: &mut Case) {
    let m = if gen.chance(0.5) {
        let t = Arc::new(gen.finite_stack(4, MAX_GROUP_ORDER, false, "t"));
        gen.rich_morphism_into(&t, &RichOptions::default(), "s")
    } else {
        let t = Arc::new(gen.stack(4, Flavor::NonzeroOrbifold, false));
        gen.lean_morphism_into(&t, Flavor::NonzeroOrbifold)
    };
    let f = gen.function(m.source(), false);
    case.morphism("m", &m);
    case.function("f", &f);
    let stk = pushforward_stack(&m, &f);
    let weighted = pushforward_weighted(&m, &f, &WeightFunction::InvE);
    if let (Some(a), Some(b)) = (case.attempt("stack pushforward", stk), case.attempt("weighted pushforward", weighted)) {
        case.check(a == b, || "stack and inverse-e pushforwards differ".into());
    }
}

fn integrality_case(gen: &mut Gen, case: &mut Case) {
    let t = Arc::new(gen.finite_stack(4, MAX_GROUP_ORDER, false, "t"));
    let opts = RichOptions { injective: true, ..RichOptions::default() };
    let m = gen.rich_morphism_into(&t, &opts, "s");
    let f = gen.function(m.source(), true);
    case.morphism("m", &m);
    case.function("f", &f);
    case.check(m.is_representable(), || "generated morphism is not representable".into());
    if let Some(g) = case.attempt("stack pushforward", pushforward_stack(&m, &f)) {
        case.check(g.is_integral(), || "stack pushforward of an integral function is not integral".into());
    }
}

fn lcf_case(gen: &mut Gen, case: &mut Case) {
    let h = Arc::new(gen.finite_stack(4, MAX_GROUP_ORDER, true, "h"));
    let rh = gen.finite_group(MAX_GROUP_ORDER);
    let psi = gen.rich_morphism_into(&h, &RichOptions { remainder: Some(rh), ..RichOptions::default() }, "g");
    let rg = match psi.remainder().map(|r| &r.stab) {
        Some(StabData::Rich(hom)) => hom.source().clone(),
        _ => unreachable!("the generator gives the source a rich remainder"),
    };
    let phi = gen.rich_morphism_into(psi.source(), &RichOptions { remainder: Some(rg), ..RichOptions::default() }, "f");
    let f = gen.lcf(phi.source());
    case.morphism("phi", &phi);
    case.morphism("psi", &psi);
    case.function("f", &f);
    let Some(both) = case.attempt("compose", compose(&phi, &psi)) else { return };
    for mode in [LcfMode::Naive, LcfMode::Stack] {
        let lhs = pushforward_lcf(&both, &f, mode);
        let rhs = pushforward_lcf(&phi, &f, mode).and_then(|x| pushforward_lcf(&psi, &x, mode));
        if let (Some(l), Some(r)) = (case.attempt("composite pushforward", lhs), case.attempt("pushforward", rhs)) {
            case.check(l == r, || format!("{mode:?} LCF pushforward does not compose"));
        }
    }
}
