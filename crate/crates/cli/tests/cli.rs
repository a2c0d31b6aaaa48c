use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn badseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_badseq")).args(args).env_remove("BADSEQ_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json_of(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(bytes)))
}

fn assert_schema(name: &str, v: &Value) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    if let Err(errs) = compiled.validate(v) {
        let msgs: Vec<String> = errs.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("{name}: {msgs:?}\n{v:#}");
    };
}

#[test]
fn ordinal_commands() {
    assert_eq!(stdout(&badseq(&["ordinal", "natsum", "w+1", "w"])), "w*2 + 1");
    assert_eq!(stdout(&badseq(&["ordinal", "norm", "w^w*2 + 3"])), "3");
    assert_eq!(stdout(&badseq(&["ordinal", "cmp", "w^2+1", "w*3"])), "greater");
    assert_eq!(stdout(&badseq(&["ordinal", "cmp", "w", "w"])), "equal");
    assert_eq!(stdout(&badseq(&["ordinal", "natprod", "w+1", "w+1"])), "w^2 + w*2 + 1");
    assert_eq!(stdout(&badseq(&["ordinal", "fundamental", "w^2", "--x", "3"])), "w*4");
    assert_eq!(stdout(&badseq(&["ordinal", "predecessor", "w", "--x", "3"])), "3");
}

#[test]
fn parse_and_usage_errors_exit_2() {
    assert_eq!(code(&badseq(&["ordinal", "norm", "w^"])), 2);
    assert_eq!(code(&badseq(&["ordinal", "fundamental", "3", "--x", "1"])), 2);
    assert_eq!(code(&badseq(&["hierarchy", "eval", "--kind", "nope", "--ordinal", "1", "--x", "1"])), 2);
    assert_eq!(code(&badseq(&["length", "compute", "--term", "Q(1)", "--n", "1"])), 2);
    assert_eq!(code(&badseq(&["--bogus"])), 2);
    assert_eq!(code(&badseq(&["--budget", "0", "ordinal", "norm", "1"])), 2);
}

#[test]
fn hierarchy_eval() {
    let ev = |kind: &str, a: &str, x: &str| stdout(&badseq(&["hierarchy", "eval", "--kind", kind, "--control", "succ", "--ordinal", a, "--x", x]));
    assert_eq!(ev("cichon", "w", "5"), "6");
    assert_eq!(ev("hardy", "0", "9"), "9");
    assert_eq!(ev("fast", "1", "3"), "7");
    let o = badseq(&["--format", "json", "hierarchy", "eval", "--kind", "hardy", "--ordinal", "w^2", "--x", "2"]);
    assert_eq!(code(&o), 0);
    let v = json_of(&o.stdout);
    assert_schema("hierarchy_report.schema.json", &v);
    assert_eq!(v["value"], "23");
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = badseq(&["--budget", "50", "hierarchy", "eval", "--kind", "hardy", "--ordinal", "w^w", "--x", "4"]);
    assert_eq!(code(&o), 3);
    let v = json_of(&o.stderr);
    assert_schema("budget_exceeded.schema.json", &v);
    assert!(v["steps"].as_u64().unwrap() > 50);

    let o = Command::new(env!("CARGO_BIN_EXE_badseq"))
        .args(["length", "compute", "--term", "CNF(w^w)", "--n", "3"])
        .env("BADSEQ_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_schema("budget_exceeded.schema.json", &json_of(&o.stderr));
}

#[test]
fn length_compute_and_recheck() {
    let o = badseq(&["length", "compute", "--term", "PMaj(N)", "--control", "succ", "--n", "1", "--witness"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("3\nwitness: "));

    let o = badseq(&["--format", "json", "length", "compute", "--term", "PMaj(N)", "--n", "1", "--witness"]);
    let v = json_of(&o.stdout);
    assert_schema("length_report.schema.json", &v);
    assert_eq!(v["length"], "3");
    assert_eq!(v["witness"]["certified_bad"], true);

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("w.json");
    std::fs::write(&good, serde_json::to_string(&v).unwrap()).unwrap();
    let o = badseq(&["--format", "json", "length", "recheck", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = json_of(&o.stdout);
    assert_schema("recheck_report.schema.json", &r);
    assert_eq!(r["passed"], true);

    // swapping the first two elements makes the sequence good
    let mut bad = v.clone();
    bad["witness"]["sequence"] = serde_json::json!([[0], [1], []]);
    let badf = dir.path().join("bad.json");
    std::fs::write(&badf, serde_json::to_string(&bad).unwrap()).unwrap();
    assert_eq!(code(&badseq(&["length", "recheck", badf.to_str().unwrap()])), 1);
}

#[test]
fn length_with_forbidden_and_mupper() {
    // P_f(ℕ) / {{0}} leaves only ∅
    let o = badseq(&["length", "compute", "--term", "PMaj(N)", "--forbidden", "[[0]]", "--n", "3"]);
    assert_eq!(stdout(&o), "1");
    assert_eq!(stdout(&badseq(&["length", "mupper", "--ordinal", "w", "--n", "3"])), "5");
}

#[test]
fn sweep_csv_and_json() {
    let o = badseq(&["length", "sweep", "--term", "CNF(w)", "--n-max", "3"]);
    assert_eq!(code(&o), 0);
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), ["n", "length", "m_upper", "h_bound"]);
    let lengths: Vec<String> = r.records().map(|x| x.unwrap()[1].to_string()).collect();
    assert_eq!(lengths, ["1", "2", "3", "4"]);

    let o = badseq(&["--format", "json", "length", "sweep", "--term", "G(2) + N", "--n-max", "2"]);
    assert_schema("sweep_report.schema.json", &json_of(&o.stdout));
}

#[test]
fn sandwich_report() {
    let o = badseq(&["--format", "json", "length", "sandwich", "--d", "1", "--n", "2"]);
    assert_eq!(code(&o), 0);
    let v = json_of(&o.stdout);
    assert_schema("sandwich_report.schema.json", &v);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] != "violated"));
}

#[test]
fn reflect_apply_and_verify() {
    let o = badseq(&["--format", "json", "reflect", "apply", "--which", "ord2maj", "--d", "2", "--element", "\"w^2 + w\""]);
    let v = json_of(&o.stdout);
    assert_schema("apply_report.schema.json", &v);
    assert_eq!(v["image"], serde_json::json!([[1, 2], [2, 1]]));

    let o = badseq(&["reflect", "apply", "--which", "maj2min", "--d", "2", "--element", "[[1,1]]"]);
    assert_eq!(stdout(&o), "[[0,2],[2,0]]");

    let o = badseq(&["--format", "json", "reflect", "verify", "--which", "maj2min", "--d", "2", "--nmax", "3"]);
    assert_eq!(code(&o), 0);
    let v = json_of(&o.stdout);
    assert_schema("verify_report.schema.json", &v);
    assert_eq!(v["passed"], true);

    let o = badseq(&["--format", "json", "reflect", "verify", "--which", "residual", "--term", "PMaj(N)", "--x", "[1]", "--n", "2", "--nmax", "2"]);
    assert_eq!(code(&o), 0);
    assert_schema("verify_report.schema.json", &json_of(&o.stdout));

    assert_eq!(code(&badseq(&["reflect", "verify", "--which", "residual", "--nmax", "1"])), 2);
    assert_eq!(code(&badseq(&["reflect", "apply", "--which", "ord2maj", "--d", "2", "--element", "\"w^w\""])), 2);
}

#[test]
fn verify_all_quick_is_deterministic() {
    let run = || badseq(&["--format", "json", "verify-all", "--profile", "quick", "--seed", "7"]);
    let a = run();
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let v = json_of(&a.stdout);
    assert_schema("verify_all.schema.json", &v);
    assert_eq!(v["passed"], true);
    assert_eq!(a.stdout, run().stdout);
}
