use std::process::Command;

use serde_json::Value;

fn pfol(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pfol")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out, err) = pfol(&all);
    assert!(!out.is_empty(), "no output: {err}");
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn pclosed_examples() {
    let (code, r) = json(&["pclosed", "-p", "3", "d/dz", "--hypersurface", "z^3 - x*y"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["closed"], true);
    assert_eq!(r["inputs"]["vars"], serde_json::json!(["x", "y", "z"]));

    let (code, r) = json(&["pclosed", "-p", "2", "d/dx + x*d/dy"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["closed"], false);
    assert_eq!(r["results"]["p_power"], "d/dy");

    let (_, r) = json(&["pclosed", "-p", "5", "x*d/dx"]);
    assert_eq!(r["results"]["closed"], true);
    assert_eq!(r["results"]["witness"], "1");
}

#[test]
fn discrepancy_example() {
    let (code, r) = json(&["discrepancy", "--weights", "1,3", "-p", "3", "--foliation", "d/dx"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["canonical"], 3);
    assert_eq!(r["results"]["foliated"], 0);
    assert_eq!(r["results"]["ledger"]["E1"]["canonical"], 3);
}

#[test]
fn cone_example() {
    let (code, r) = json(&["cone", "--matrix", "[[2,5],[5,2]]"]);
    assert_eq!(code, 0);
    let cone = &r["results"]["cone"];
    assert_eq!(cone["boundary"]["irrational"]["discriminant"], 84);
    assert!(cone["notes"][0].as_str().unwrap().contains("no Mori fibre space"));
}

#[test]
fn cover_example() {
    let (code, r) = json(&["cover", "-p", "2", "-d", "2", "-f", "x*y", "-q", "4"]);
    assert_eq!(code, 0);
    let crit = r["results"]["critical_points"].as_array().unwrap();
    assert_eq!(crit.len(), 1);
    assert_eq!(crit[0]["nondegenerate"], true);
    assert_eq!(r["results"]["singular_points"].as_array().unwrap().len(), 1);
}

#[test]
fn cover_reports_genericity_fraction() {
    let (code, r) = json(&["cover", "-p", "3", "-f", "x^2 + y^2", "-q", "9", "--samples", "20", "--seed", "7"]);
    assert_eq!(code, 0);
    let g = &r["results"]["genericity"];
    assert_eq!(g["samples"], 20);
    let frac = g["fraction"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&frac));
    assert!(r["results"]["critical_points"][0]["normal_form"].is_array());
}

#[test]
fn config_files_and_schema_errors() {
    let dir = std::env::temp_dir().join(format!("pfol-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("tower.json");
    std::fs::write(
        &good,
        r#"{"p": 2, "steps": [{"weights": [1, 1]}, {"weights": [1, 2], "center": [1, 0]}], "foliation": "d/dx"}"#,
    )
    .unwrap();
    let (code, r) = json(&["discrepancy", "--config", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(r["results"]["ledger"]["E2"].is_object());

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"p": 2, "sections": "x"}"#).unwrap();
    let (code, _, err) = pfol(&["cover", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("config schema violation"), "{err}");

    let cone = dir.join("cone.json");
    std::fs::write(
        &cone,
        r#"{"matrix": [[1,0,0],[0,-1,0],[0,0,-1]], "shell": {"d": [0,0,0], "kf": [-1,0,0]}, "kf_series": {"l_square": 2, "p": 3, "m_max": 3}}"#,
    )
    .unwrap();
    let (code, r) = json(&["cone", "--config", cone.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["kf_square"], serde_json::json!({"1": 6, "2": 24, "3": 54}));
    assert_eq!(r["results"]["bpf_shell"]["shell_holds"], true);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn errors_carry_positions_and_exit_2() {
    let (code, _, err) = pfol(&["pclosed", "-p", "3", "x*d/dx +* y"]);
    assert_eq!(code, 2);
    assert!(err.contains("column 9"), "{err}");
    let (code, _, err) = pfol(&["pclosed", "-p", "3", "0*d/dx"]);
    assert_eq!(code, 2);
    assert!(err.contains("zero"), "{err}");
    let (code, _, err) = pfol(&["cover", "-p", "7", "-f", "x*y + u*w + s", "-q", "49"]);
    assert_eq!(code, 2);
    assert!(err.contains("budget"), "{err}");
}

/// Re-running a command on its echoed canonical inputs reproduces the report.
#[test]
fn canonical_inputs_round_trip() {
    let (_, first) = json(&["pclosed", "-p", "3", "x*d/dx+ y*d/dy + 2*d/dz", "--hypersurface", "z^3-x*y^2"]);
    let inputs = &first["inputs"];
    let vars: Vec<&str> = inputs["vars"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let vars = vars.join(",");
    let p = inputs["p"].to_string();
    let (_, second) = json(&[
        "pclosed",
        "-p",
        &p,
        inputs["derivation"].as_str().unwrap(),
        "--hypersurface",
        inputs["hypersurface"].as_str().unwrap(),
        "--vars",
        &vars,
    ]);
    assert_eq!(first, second);

    let (_, first) = json(&["cover", "-p", "5", "-f", "y^2 +x^3 - x", "-q", "5"]);
    let section = first["inputs"]["section"].as_str().unwrap().to_string();
    let (_, second) = json(&["cover", "-p", "5", "-f", &section, "-q", "5", "--vars", "x,y"]);
    assert_eq!(first, second);
}

#[test]
fn text_output_renders_the_same_report() {
    let (code, out, _) = pfol(&["bracket", "-p", "5", "x*d/dy", "y*d/dx"]);
    assert_eq!(code, 0);
    assert!(out.contains("bracket: x*d/dx - y*d/dy"));
    assert!(out.contains("[PASS] antisymmetry"));
    assert!(out.trim_end().ends_with("status: pass"));
}
