//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use eulerstack::cartesian::{fiber_product, verify_commutation, verify_commutation_with, PushKind};
use eulerstack::groupcat::library::{cyclic, klein, symmetric};
use eulerstack::groupcat::{FiniteGroup, GroupExpr, GroupHom};
use eulerstack::laws::{run_suite, Suite, SuiteReport};
use eulerstack::orbifold::{check_dhvw, FiniteGSet};
use eulerstack::pushpull::{StabData, StackMorphism};
use eulerstack::rational::int;
use eulerstack::strata::{chi_naive, ConstructibleSet, StratifiedStack};

const SEED: u64 = 42;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn suite(s: Suite, cases: u64) -> (SuiteReport, Outcome) {
    let r = run_suite(s, SEED, cases);
    let detail = match &r.first_failure {
        None => format!("{}/{} cases", r.passed, r.cases),
        Some(c) => format!("{}/{} cases, case {} failed: {}", r.passed, r.cases, c.case, c.reason),
    };
    let ok = r.ok() && r.passed == cases;
    (r, outcome(ok, detail))
}

fn timed<T>(limit: Duration, f: impl FnOnce() -> T) -> (T, Duration, bool) {
    let start = Instant::now();
    let v = f();
    let took = start.elapsed();
    (v, took, took < limit)
}

fn catalogue_axioms() -> Outcome {
    let (bad, took, fast) = timed(Duration::from_millis(1), || {
        let mut bad = Vec::new();
        for m in 0..=5u32 {
            let a = Arc::new(StratifiedStack::affine_space(m));
            if chi_naive(&ConstructibleSet::all(a)) != 1 {
                bad.push(format!("K^{m}"));
            }
            let p = Arc::new(StratifiedStack::projective_space(m));
            if chi_naive(&ConstructibleSet::all(p)) != i64::from(m) + 1 {
                bad.push(format!("KP^{m}"));
            }
        }
        bad
    });
    let ok = bad.is_empty() && fast;
    outcome(ok, format!("m <= 5, wrong: {bad:?}, {took:?} (limit 1ms)"))
}

fn pt() -> Arc<StratifiedStack> {
    Arc::new(StratifiedStack::point())
}

fn point_square() -> Outcome {
    let h = Arc::new(StratifiedStack::classifying(GroupExpr::finite(cyclic(2))));
    let into = || {
        let hom = GroupHom::new(FiniteGroup::trivial(), cyclic(2), vec![0]).unwrap();
        StackMorphism::from_ids(pt(), h.clone(), vec![("pt", "pt", 1, StabData::Rich(hom))], None).unwrap()
    };
    let sq = fiber_product(&into(), &into()).unwrap();
    let c = ConstructibleSet::all(sq.phi.source().clone());
    let stk = verify_commutation(&sq, &c).unwrap();
    let na = verify_commutation_with(&sq, &c, PushKind::Naive).unwrap();
    let stk_ok = stk.holds() && stk.rows[0].1 == int(2) && stk.rows[0].2 == int(2);
    let na_fails = !na.holds() && na.rows[0].1 == int(2) && na.rows[0].2 == int(1);
    outcome(
        stk_ok && na_fails,
        format!(
            "pt/pt/[pt/Z2]: stack {} vs {}, naive {} vs {} (must differ)",
            stk.rows[0].1, stk.rows[0].2, na.rows[0].1, na.rows[0].2
        ),
    )
}

fn dhvw_fixtures() -> Outcome {
    let mut bad = Vec::new();
    let mut expect = |name: String, a: FiniteGSet, v: i64| {
        let r = check_dhvw(&a);
        if !(r.holds() && r.stringy == int(v)) {
            bad.push(name);
        }
    };
    expect("S3 on 3 points".into(), FiniteGSet::natural(symmetric(3)).unwrap(), 2);
    expect("(Z/2)^2 on a point".into(), FiniteGSet::trivial_action(klein(), 1), 4);
    for n in 0..=12 {
        expect(format!("trivial on {n}"), FiniteGSet::trivial_action(FiniteGroup::trivial(), n), n as i64);
    }
    outcome(bad.is_empty(), format!("fixtures wrong: {bad:?}"))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_eulerstack"))
            .args(["check", "--seed", "42", "--cases", "100"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        same && a.status.success() && b.status.success(),
        format!("{} bytes, identical: {same}, exit {:?}/{:?}", a.stdout.len(), a.status.code(), b.status.code()),
    )
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();

    results.push(("1 catalogue axioms", catalogue_axioms()));

    let (_, o) = suite(Suite::Weights, 200);
    results.push(("2 weight multiplicativity", o));

    let (r, took, fast) = timed(Duration::from_secs(1), || run_suite(Suite::Conservation, SEED, 200));
    let all_weights = ["weight naive", "weight inv-e", "weight o"].iter().all(|t| r.tally(t) > 0);
    results.push((
        "3 conservation",
        outcome(
            r.ok() && r.passed == 200 && all_weights && fast,
            format!("{}/200 cases, tallies {:?}, {took:?} (limit 1s)", r.passed, r.tallies),
        ),
    ));

    let (_, o) = suite(Suite::Functoriality, 200);
    results.push(("4 naive functoriality", o));

    let (r, o) = suite(Suite::StackFunctoriality, 200);
    let nonrep = r.tally("non-representable");
    results.push((
        "5 stack functoriality and m-multiplicativity",
        outcome(o.ok && nonrep >= 50, format!("{}, non-representable {nonrep} (need 50)", o.detail)),
    ));

    let (_, o) = suite(Suite::StackWeight, 100);
    results.push(("6 stack and inverse-e pushforwards agree", o));

    let ((r, fixed), took, fast) =
        timed(Duration::from_secs(5), || (run_suite(Suite::Cartesian, SEED, 100), point_square()));
    results.push((
        "7 cartesian commutation",
        outcome(
            r.ok() && r.passed == 100 && fixed.ok && fast,
            format!("{}/100 squares, {}, {took:?} (limit 5s)", r.passed, fixed.detail),
        ),
    ));

    let (_, o) = suite(Suite::Dhvw, 100);
    let fx = dhvw_fixtures();
    results.push(("8 orbifold Euler characteristic", outcome(o.ok && fx.ok, format!("{}, {}", o.detail, fx.detail))));

    let (_, o) = suite(Suite::Integrality, 100);
    results.push(("9 integrality", o));

    let (_, o) = suite(Suite::Lcf, 100);
    results.push(("10 LCF functoriality with remainders", o));

    results.push(("11 determinism", determinism()));

    let mut failed = 0;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
