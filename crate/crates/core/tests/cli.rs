use std::path::PathBuf;
use std::process::{Command, Output};

use eulerstack::json::{read_function, read_morphism, read_stack};
use eulerstack::rational::{int, ratio};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn eulerstack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulerstack"))
        .args(args)
        .current_dir(fixture(""))
        .env_remove("EULERSTACK_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn chi_of_projective_plane() {
    let o = eulerstack(&["chi", "kp2.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\n");
}

#[test]
fn chi_weights_on_bz2() {
    let o = eulerstack(&["chi", "bz2.json", "--weight", "inv-e"]);
    assert_eq!(stdout(&o), "1/2\n");
    let o = eulerstack(&["chi", "bz2.json", "--weight", "o"]);
    assert_eq!(stdout(&o), "2\n");
    let o = eulerstack(&["chi", "bz2.json", "-f", "one.json", "--weight", "e"]);
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn undefined_weight_is_a_domain_error() {
    let o = eulerstack(&["chi", "bgm.json", "--weight", "inv-e"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("T"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(eulerstack(&["chi", "missing.json"]).status.code(), Some(2));
    assert_eq!(eulerstack(&["chi", "kp2.json", "--weight", "x"]).status.code(), Some(2));
    assert_eq!(eulerstack(&["chi", "kp2.json", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(eulerstack(&["frobnicate"]).status.code(), Some(2));
    let o = eulerstack(&["push", "pt-to-bz2.json", "one.json", "--mode", "w:e", "--lcf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stringy_check() {
    let o = eulerstack(&["stringy", "s3-natural.json", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "chi(M,G) = 2 = chi_orb\n");
    let o = eulerstack(&["stringy", "klein-point.json"]);
    assert_eq!(stdout(&o), "chi(M,G) = 4\n");
}

#[test]
fn push_modes_write_functions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pushed.json");
    let out_s = out.to_str().unwrap();
    let o = eulerstack(&["push", "pt-to-bz2.json", "one.json", "--mode", "stk", "-o", out_s]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let f = read_function(&out, None).unwrap();
    assert_eq!(f.value_of("pt").unwrap(), &int(2));

    eulerstack(&["push", "bz2-to-pt.json", "one.json", "--mode", "w:inv-e", "-o", out_s]);
    assert_eq!(read_function(&out, None).unwrap().value_of("pt").unwrap(), &ratio(1, 2));
    eulerstack(&["push", "bz2-to-pt.json", "one.json", "--mode", "stk", "-o", out_s]);
    assert_eq!(read_function(&out, None).unwrap().value_of("pt").unwrap(), &ratio(1, 2));
    eulerstack(&["push", "kp1-to-pt.json", "kp1-one.json", "-o", out_s]);
    assert_eq!(read_function(&out, None).unwrap().value_of("pt").unwrap(), &int(2));
}

#[test]
fn lcf_push_carries_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pushed.json");
    let o = eulerstack(&["push", "x-to-y.json", "lcf.json", "--lcf", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let f = read_function(&out, None).unwrap();
    assert_eq!(f.value_of("t0").unwrap(), &int(6));
    assert_eq!(f.default_value(), &int(1));
    let o = eulerstack(&["push", "x-to-y.json", "lcf.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn pull_and_compose() {
    let o = eulerstack(&["pull", "bz2-to-pt.json", "one.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\"pt\": \"1\""));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = eulerstack(&["compose", "pt-to-bz2.json", "bz2-to-pt-rich.json", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (m, _) = read_morphism(&out).unwrap();
    assert_eq!(eulerstack::pushpull::m_phi(&m, 0).unwrap(), int(1));

    // lean non-representable composition is refused
    let o = eulerstack(&["compose", "bz2-to-pt.json", "pt-to-bz2.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fibprod_writes_square() {
    let dir = tempfile::tempdir().unwrap();
    let o = eulerstack(&["fibprod", "pt-to-bz2.json", "pt-to-bz2.json", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let e = read_stack(&dir.path().join("e.json")).unwrap();
    assert_eq!(e.len(), 2);
    let (eta, _) = read_morphism(&dir.path().join("eta.json")).unwrap();
    let (theta, _) = read_morphism(&dir.path().join("theta.json")).unwrap();
    assert!(eta.is_representable());
    assert_eq!(*eta.source(), *theta.source());
}

#[test]
fn json_envelope() {
    let o = eulerstack(&["--json", "chi", "bz2.json", "--weight", "inv-e"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "chi");
    assert_eq!(v["inputs"]["weight"], "inv-e");
    assert_eq!(v["result"]["value"], "1/2");
    let o = eulerstack(&["chi", "bgm.json", "--weight", "inv-e", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("undefined"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn check_uses_seed_from_environment() {
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_eulerstack"));
        c.args(["check", "--suite", "dhvw", "--cases", "5"]);
        match seed {
            Some(s) => c.env("EULERSTACK_SEED", s),
            None => c.env_remove("EULERSTACK_SEED"),
        };
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    assert!(run(Some("9")).contains("(seed 9)"));
    assert!(run(None).contains("(seed 0)"));
}
