use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.display().to_string()
}

struct Run {
    code: i32,
    json: Value,
    stdout: String,
    stderr: String,
}

fn algebroid(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_algebroid")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().unwrap(), json, stdout, stderr: String::from_utf8(out.stderr).unwrap() }
}

fn first_result(r: &Run) -> &Value {
    &r.json["items"][0]["result"]
}

#[test]
fn schouten_of_canonical_poisson_vanishes() {
    let m = fixture("canonical_xp.json");
    let r = algebroid(&["--model", &m, "bracket", "--kind", "schouten", "--a", "P", "--b", "P"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json["items"][0]["status"], "pass");
    assert_eq!(first_result(&r)["pretty"], "0");
}

#[test]
fn d_of_estar3_on_so3() {
    let m = fixture("so3.json");
    let r = algebroid(&["--model", &m, "d", "--algebroid", "so3", "--form", "estar3"]);
    assert_eq!(r.code, 0);
    assert_eq!(first_result(&r)["pretty"], "−e*1∧e*2");
    assert_eq!(first_result(&r)["terms"]["1,2"], "-1");
}

#[test]
fn theorem_12_suite_passes_nine_items() {
    let r = algebroid(&["suite", "--name", "theorem-12", "--seed", "7", "--trials", "50"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let items = r.json["items"].as_array().unwrap();
    assert_eq!(items.len(), 9);
    assert!(items.iter().all(|i| i["status"] == "pass"));
}

#[test]
fn dump_round_trips_byte_for_byte() {
    for f in ["so3.json", "canonical1.json", "rank2.json", "so3_linear.json", "all.json"] {
        let path = fixture(f);
        let r = algebroid(&["--model", &path, "dump"]);
        assert_eq!(r.code, 0, "{f}: {}", r.stdout);
        assert_eq!(r.stdout, std::fs::read_to_string(&path).unwrap(), "{f}");
    }
}

#[test]
fn dump_canonicalizes_loose_input() {
    let dir = tempfile::tempdir().unwrap();
    let loose = dir.path().join("loose.json");
    std::fs::write(
        &loose,
        r#"{"charts": {"c": ["x", "y"]},
            "tensors": {"w": {"owner": "c", "kind": "form", "degree": 2, "terms": {"2,1": "y*x + x*y", "1,1": "5"}}}}"#,
    )
    .unwrap();
    let once = algebroid(&["--model", loose.to_str().unwrap(), "dump"]).stdout;
    assert!(once.contains("\"1,2\": \"-2*x*y\""), "{once}");
    let canon = dir.path().join("canon.json");
    std::fs::write(&canon, &once).unwrap();
    assert_eq!(algebroid(&["--model", canon.to_str().unwrap(), "dump"]).stdout, once);
}

#[test]
fn broken_anchor_names_the_pair() {
    let r = algebroid(&["--model", &fixture("broken_anchor.json"), "validate"]);
    assert_eq!(r.code, 1);
    let item = &r.json["items"][0];
    assert_eq!(item["status"], "fail");
    assert_eq!(item["witness"]["pair"], serde_json::json!([1, 2]));
    assert_eq!(item["witness"]["residual"], "∂x");
}

#[test]
fn bad_jacobi_names_the_triple() {
    let r = algebroid(&["--model", &fixture("bad_jacobi.json"), "validate"]);
    assert_eq!(r.code, 1);
    assert_eq!(r.json["items"][0]["witness"]["triple"], serde_json::json!([1, 2, 3]));
}

#[test]
fn invalid_models_are_input_errors_for_other_commands() {
    let r = algebroid(&["--model", &fixture("broken_anchor.json"), "d", "--form", "x"]);
    assert_eq!(r.code, 2);
    assert!(r.json["error"].as_str().unwrap().contains("(1, 2)"));
}

#[test]
fn parse_errors_carry_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, r#"{"charts": {"c": ["x"]}, "poisson": {"p": {"chart": "c", "bivector": {"1,2": "x"}}}}"#).unwrap();
    let r = algebroid(&["--model", f.to_str().unwrap(), "validate"]);
    assert_eq!(r.code, 2);
    let e = r.json["error"].as_str().unwrap();
    assert!(e.contains("poisson.p.bivector"), "{e}");

    std::fs::write(&f, "{\"charts\": {\"c\": [\"x\"]},\n \"tensors\": {\"t\": {\"owner\": \"c\", \"kind\": \"form\", \"degree\": 0, \"terms\": {\"\": \"x +\"}}}}").unwrap();
    let r = algebroid(&["--model", f.to_str().unwrap(), "validate"]);
    assert_eq!(r.code, 2);
    assert!(r.json["error"].as_str().unwrap().contains("tensors.t.terms"));

    std::fs::write(&f, "{\"charts\": {\"c\": [\"x\"]},\n \"oops\": 1}").unwrap();
    let r = algebroid(&["--model", f.to_str().unwrap(), "validate"]);
    assert_eq!(r.code, 2);
    assert!(r.json["error"].as_str().unwrap().contains("line 2"));
}

#[test]
fn unknown_names_exit_with_2() {
    let m = fixture("so3.json");
    assert_eq!(algebroid(&["--model", &m, "d", "--form", "nothing"]).code, 2);
    assert_eq!(algebroid(&["suite", "--name", "theorem-99"]).code, 2);
    assert_eq!(algebroid(&["suite", "--name", "theorem-1", "--fixture", "nope"]).code, 2);
    assert_eq!(algebroid(&["frobnicate"]).code, 2);
}

#[test]
fn kind_mismatch_is_an_input_error() {
    let m = fixture("so3.json");
    let r = algebroid(&["--model", &m, "lift", "--kind", "Vpi", "--a", "e1"]);
    assert_eq!(r.code, 2);
    assert!(r.json["error"].as_str().unwrap().contains("kind mismatch"));
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        v["millis"] = Value::Null;
        for i in v["items"].as_array_mut().unwrap() {
            i["millis"] = Value::Null;
        }
        v
    };
    let args = ["suite", "--name", "theorem-4", "--seed", "3", "--trials", "4"];
    assert_eq!(strip(algebroid(&args).json), strip(algebroid(&args).json));
}

#[test]
fn failing_check_replays_to_the_same_residual() {
    let m = fixture("all.json");
    let r = algebroid(&["--model", &m, "suite", "--name", "theorem-2", "--check", "calibration", "--contraction-order", "default"]);
    assert_eq!(r.code, 1);
    let w = &r.json["items"][0]["witness"];
    let replay: Vec<&str> = w["replay"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let again = algebroid(&replay);
    assert_eq!(again.code, 1);
    let w2 = &again.json["items"][0]["witness"];
    assert_eq!(w2["residual"], w["residual"]);
    assert_eq!(w2["inputs"], w["inputs"]);
    assert_eq!(again.json["items"][0]["trials"], 1);
}

#[test]
fn lift_outputs_are_loadable_models() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixture("all.json");
    for (kind, flag, src) in [
        ("tangent-algebroid", "--algebroid", "rank2"),
        ("cotangent-algebroid", "--algebroid", "so3"),
        ("cotangent-algebroid", "--poisson", "so3_linear"),
        ("linear-poisson", "--algebroid", "rank2"),
        ("tangent-poisson", "--poisson", "so3_linear"),
    ] {
        let r = algebroid(&["--model", &m, "lift", "--kind", kind, flag, src]);
        assert_eq!(r.code, 0, "{kind}: {}", r.stdout);
        let f = dir.path().join(format!("{kind}-{src}.json"));
        std::fs::write(&f, serde_json::to_string(&first_result(&r)["model"]).unwrap()).unwrap();
        let v = algebroid(&["--model", f.to_str().unwrap(), "validate"]);
        assert_eq!(v.code, 0, "{kind} {src}: {}", v.stderr);
    }
}

#[test]
fn tangent_poisson_of_canonical_pair() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("xxi.json");
    std::fs::write(&f, r#"{"charts": {"c": ["x", "xi"]}, "poisson": {"P": {"chart": "c", "bivector": {"1,2": "-1"}}}}"#)
        .unwrap();
    let r = algebroid(&["--model", f.to_str().unwrap(), "lift", "--kind", "tangent-poisson", "--poisson", "P"]);
    assert_eq!(r.code, 0);
    // ∂_{ξ_dot}∧∂_x + ∂_ξ∧∂_{x_dot}
    let biv = &first_result(&r)["model"]["poisson"]["T_P"]["bivector"];
    assert_eq!(biv, &serde_json::json!({"1,4": "-1", "2,3": "1"}));
}

#[test]
fn lifts_of_named_tensors() {
    let m = fixture("canonical1.json");
    let pretty = |kind: &str, a: &str| {
        let r = algebroid(&["--model", &m, "lift", "--kind", kind, "--a", a]);
        assert_eq!(r.code, 0, "{kind}: {}", r.stdout);
        first_result(&r)["pretty"].as_str().unwrap().to_string()
    };
    assert_eq!(pretty("T", "xe"), "x_dot*ebar_x + x*edot_x");
    assert_eq!(pretty("V", "xe"), "x*ebar_x");
    assert_eq!(pretty("G", "xe"), "x*∂x − p_x*∂p_x");
    assert_eq!(pretty("J", "N"), "−p_x*∂p_x");
    assert_eq!(pretty("Gmix", "N"), "∂x∧∂p_x");
    assert_eq!(pretty("jstar", "N"), "p_x*dx");
    assert_eq!(pretty("kappa", "xe"), "x*∂x + x_dot*∂x_dot");
    assert_eq!(pretty("Vpi", "dx"), "∂p_x");
    assert_eq!(pretty("Vtau", "xe"), "x*∂y_x");
}

#[test]
fn eval_substitutes_values() {
    let m = fixture("canonical1.json");
    let r = algebroid(&["--model", &m, "eval", "--poly", "x^2+1", "--algebroid", "canonical1", "--at", "x=2"]);
    assert_eq!(first_result(&r)["pretty"], "5");
    let r = algebroid(&["--model", &m, "eval", "--a", "xe", "--at", "x=1/2"]);
    assert_eq!(first_result(&r)["terms"]["1"], "1/2");
    let r = algebroid(&["--model", &m, "eval", "--a", "xe", "--at", "q=1"]);
    assert_eq!(r.code, 2);
}

#[test]
fn suite_list_names_every_check() {
    let r = algebroid(&["suite", "--name", "all", "--list"]);
    assert_eq!(r.code, 0);
    let items = r.json["items"].as_array().unwrap();
    let ids: Vec<&str> = items.iter().map(|i| i["id"].as_str().unwrap()).collect();
    for want in ["theorem-1", "theorem-24", "eq-1-12", "eq-2-6", "eq-7-12", "eq-7-13"] {
        assert!(ids.contains(&want), "{want}");
    }
}
