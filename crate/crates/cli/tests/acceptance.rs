//! Acceptance run: one line per criterion, exit status 1 if any fails.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::{json, Value};

type Check = Result<String, String>;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn all() -> String {
    fixture("all.json")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_algebroid")).args(args).output().expect("spawn algebroid");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

fn items(r: &Value) -> &[Value] {
    r["items"].as_array().map(Vec::as_slice).unwrap_or(&[])
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs suites over the shipped model; every check must pass and every id in `need` must be present.
fn suites(names: &[&str], need: &[&str]) -> Check {
    let model = all();
    let mut seen = Vec::new();
    let mut total = 0;
    for name in names {
        let (code, r) = run(&["--model", &model, "suite", "--name", name]);
        for i in items(&r) {
            let id = i["id"].as_str().unwrap_or_default().to_string();
            ensure(i["status"] == "pass", || format!("{id}: {} {}", i["status"], i["witness"]["residual"]))?;
            total += i["trials"].as_u64().unwrap_or(0);
            seen.push(id);
        }
        ensure(code == 0, || format!("suite {name} exited {code}: {}", r["error"]))?;
    }
    for id in need {
        ensure(seen.iter().any(|s| s == id), || format!("missing check {id}"))?;
    }
    Ok(format!("{} checks, {total} trials", seen.len()))
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.display().to_string()
}

fn result_of(args: &[&str]) -> Result<Value, String> {
    let (code, r) = run(args);
    ensure(code == 0, || format!("{args:?} exited {code}: {}", r["error"]))?;
    Ok(items(&r)[0]["result"].clone())
}

fn validates(path: &str) -> Result<(), String> {
    let (code, r) = run(&["--model", path, "validate"]);
    ensure(code == 0, || format!("{path} does not validate: {r}"))
}

fn c1_axioms() -> Check {
    let model = all();
    validates(&model)?;
    let (code, r) = run(&["--model", &fixture("broken_anchor.json"), "validate"]);
    let w = &items(&r)[0]["witness"];
    ensure(code == 1 && w["pair"] == json!([1, 2]), || format!("broken_anchor: exit {code}, witness {w}"))?;
    let msg = items(&r)[0]["error"].as_str().unwrap_or_default();
    ensure(msg.contains("anchor"), || format!("broken_anchor: {msg}"))?;
    let (code, r) = run(&["--model", &fixture("bad_jacobi.json"), "validate"]);
    let w = &items(&r)[0]["witness"];
    ensure(code == 1 && w["triple"] == json!([1, 2, 3]), || format!("bad_jacobi: exit {code}, witness {w}"))?;
    Ok("fixtures valid; anchor witness (1,2), Jacobi witness (1,2,3)".into())
}

fn c3_calibration() -> Check {
    let (code, r) = run(&["--model", &all(), "suite", "--name", "theorem-2", "--check", "calibration"]);
    let i = &items(&r)[0];
    ensure(code == 0 && i["status"] == "pass", || format!("calibration: {i}"))?;
    let notes = i["notes"].to_string();
    ensure(notes.contains("contraction order"), || format!("no convention recorded: {notes}"))?;
    Ok(i["notes"][0].as_str().unwrap_or_default().to_string())
}

fn c6_lifts() -> Check {
    let summary = suites(&["theorem-8"], &["theorem-8/lift-constructors", "theorem-8/iterated"])?;
    let dir = tempfile::tempdir().unwrap();
    let model = all();
    let algebroids = ["canonical1", "canonical2", "canonical3", "rank2", "so3"];
    for a in algebroids {
        for kind in ["tangent-algebroid", "cotangent-algebroid"] {
            let frag = result_of(&["--model", &model, "lift", "--kind", kind, "--algebroid", a])?;
            validates(&write(dir.path(), &format!("{kind}-{a}.json"), &frag["model"]))?;
        }
        let direct = result_of(&["--model", &model, "lift", "--kind", "cotangent-algebroid", "--algebroid", a])?;
        let lp = result_of(&["--model", &model, "lift", "--kind", "linear-poisson", "--algebroid", a, "--name", "LP"])?;
        let lp_path = write(dir.path(), &format!("lp-{a}.json"), &lp["model"]);
        let via = result_of(&["--model", &lp_path, "lift", "--kind", "cotangent-algebroid", "--poisson", "LP"])?;
        let strip = |v: &Value| {
            let alg = v["model"]["algebroids"].as_object().unwrap().values().next().unwrap().clone();
            let chart = v["model"]["charts"].as_object().unwrap().values().next().unwrap().clone();
            json!({"coords": chart, "fibers": alg["fibers"], "anchor": alg["anchor"], "c": alg["c"]})
        };
        ensure(strip(&direct) == strip(&via), || format!("{a}: cotangent lift differs from the Poisson route"))?;
    }
    for p in ["canonical_xp", "canonical_xypp", "so3_linear"] {
        let frag = result_of(&["--model", &model, "lift", "--kind", "cotangent-algebroid", "--poisson", p])?;
        validates(&write(dir.path(), &format!("ct-{p}.json"), &frag["model"]))?;
    }
    Ok(format!("{summary}; 13 lifted models validate; cotangent routes agree"))
}

fn c9_tangent_poisson() -> Check {
    let summary = suites(
        &["theorem-20"],
        &["theorem-20/tangent-poisson-closed", "theorem-20/tangent-poisson-formula"],
    )?;
    let dir = tempfile::tempdir().unwrap();
    let model = all();
    for p in ["canonical_xp", "canonical_xypp", "so3_linear"] {
        let frag = result_of(&["--model", &model, "lift", "--kind", "tangent-poisson", "--poisson", p])?;
        validates(&write(dir.path(), &format!("tp-{p}.json"), &frag["model"]))?;
    }
    let (_, r) = run(&["--model", &model, "suite", "--name", "theorem-20", "--check", "tangent-poisson-formula"]);
    let note = items(&r)[0]["notes"][0].as_str().unwrap_or_default().to_string();
    ensure(!note.is_empty(), || "formula discrepancy not recorded".into())?;
    Ok(format!("{summary}; lifted Poisson fixtures validate; note: {note}"))
}

fn c10_canonical() -> Check {
    let summary = suites(
        &["theorem-19", "theorem-21", "theorem-22", "theorem-23", "theorem-24", "eq-7-12", "eq-7-13"],
        &["theorem-19/involution", "theorem-24/nijenhuis", "theorem-24/h-injective", "theorem-24/g-injective"],
    )?;
    let m = fixture("canonical1.json");
    let fnn = result_of(&["--model", &m, "bracket", "--kind", "fn", "--a", "N", "--b", "N"])?;
    ensure(fnn["pretty"] == "0", || format!("[N,N] = {}", fnn["pretty"]))?;
    let g = result_of(&["--model", &m, "lift", "--kind", "Gmix", "--a", "N"])?;
    let dir = tempfile::tempdir().unwrap();
    let gm = write(
        dir.path(),
        "gn.json",
        &json!({"charts": {"xp": ["x", "p_x"]},
                "tensors": {"GN": {"owner": "xp", "kind": g["kind"], "degree": g["degree"], "terms": g["terms"]}}}),
    );
    let gg = result_of(&["--model", &gm, "bracket", "--kind", "schouten", "--a", "GN", "--b", "GN"])?;
    ensure(gg["pretty"] == "0", || format!("[G(N),G(N)] = {}", gg["pretty"]))?;
    Ok(format!("{summary}; N = dx⊗∂x: [N,N] = 0, G(N) = {}, [G(N),G(N)] = 0", g["pretty"].as_str().unwrap_or("?")))
}

fn c11_dual_path() -> Check {
    let (code, r) = run(&["--model", &all(), "suite", "--name", "theorem-16", "--check", "G-dual-path", "--trials", "100"]);
    let i = &items(&r)[0];
    ensure(code == 0 && i["status"] == "pass", || format!("G-dual-path: {i}"))?;
    let t = i["trials"].as_u64().unwrap_or(0);
    ensure(t >= 100 * 5, || format!("only {t} trials"))?;
    Ok(format!("{t} trials, both branches agree"))
}

fn c12_cli() -> Check {
    let model = all();
    let (code, r) = run(&["--model", &model, "suite", "--name", "all"]);
    let n = items(&r).len();
    let bad: Vec<&str> = items(&r).iter().filter(|i| i["status"] != "pass").filter_map(|i| i["id"].as_str()).collect();
    ensure(code == 0 && bad.is_empty(), || format!("suite all exited {code}; failing {bad:?}"))?;
    let (code, r) = run(&[
        "--model", &model, "suite", "--name", "theorem-2", "--check", "calibration", "--contraction-order", "default",
    ]);
    let w = items(&r)[0]["witness"].clone();
    ensure(code == 1 && w.is_object(), || format!("forced failure: exit {code}, witness {w}"))?;
    let replay: Vec<&str> = w["replay"].as_array().unwrap().iter().filter_map(Value::as_str).collect();
    let (code, again) = run(&replay);
    let w2 = &items(&again)[0]["witness"];
    ensure(code == 1 && w2["residual"] == w["residual"], || format!("replay gave {w2}"))?;
    Ok(format!("{n} checks pass; forced failure replays to residual {}", w["residual"]))
}

fn main() -> ExitCode {
    let min = |m: u64| Duration::from_secs(60 * m);
    let secs = Duration::from_secs;
    let criteria: Vec<(&str, Duration, fn() -> Check)> = vec![
        ("algebroid axioms", secs(1), c1_axioms),
        ("theorem-1 identities", secs(30), || suites(&["theorem-1"], &["theorem-1/1-dd", "theorem-1/6-l-i-commutator"])),
        ("theorem-2 calibration", secs(30), c3_calibration),
        ("graded Lie laws", min(3), || {
            suites(
                &["theorem-2", "theorem-3", "theorem-4", "eq-1-12"],
                &["theorem-2/antisymmetry", "theorem-2/jacobi", "theorem-3/jacobi", "theorem-4/jacobi", "theorem-4/eq-1-14", "eq-1-12/operator"],
            )
        }),
        ("Poisson suite", min(3), || {
            suites(
                &["theorem-5", "eq-2-6", "theorem-6", "theorem-7"],
                &["theorem-5/eq-2-2", "theorem-5/a", "eq-2-6/local", "theorem-6/d-compat", "theorem-6/eq-2-8-0-1", "theorem-6/eq-2-8-1-1", "theorem-7/c"],
            )
        }),
        ("lift constructors", secs(30), c6_lifts),
        ("vertical and complete lifts", min(5), || {
            suites(&["theorem-10", "theorem-11", "theorem-12", "theorem-13", "theorem-14"], &["theorem-12/classical"])
        }),
        ("cotangent lifts", min(3), || {
            suites(&["theorem-15", "theorem-17", "theorem-18"], &["theorem-15/g", "theorem-17/injective", "theorem-18/homomorphism"])
        }),
        ("tangent Poisson lift", min(1), c9_tangent_poisson),
        ("canonical case", min(5), c10_canonical),
        ("G dual path", min(1), c11_dual_path),
        ("CLI suite all and replay", min(15), c12_cli),
    ];
    let mut failed = 0;
    for (n, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let took = start.elapsed();
        let res = res.and_then(|s| {
            if took <= limit {
                Ok(s)
            } else {
                Err(format!("took {took:.2?}, limit {limit:?}"))
            }
        });
        match res {
            Ok(s) => println!("criterion {:>2} PASS  {name} ({took:.2?} < {limit:?}): {s}", n + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({took:.2?}): {e}", n + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
