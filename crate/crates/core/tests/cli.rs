use colored_tensor::cli::run_with;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("ctm").chain(args.iter().copied()).map(String::from);
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn result(out: &str) -> Value {
    let v: Value = serde_json::from_str(out).unwrap();
    assert!(v["version"].is_string());
    v["result"].clone()
}

#[test]
fn enumerated_graphs_parse_back() {
    let (code, out, _) = call(&["graphs", "enumerate", "--D", "3", "--max-vertices", "6"]);
    assert_eq!(code, 0);
    let graphs = result(&out);
    for g in graphs.as_array().unwrap() {
        let text = g.to_string();
        let (code, out, _) = call(&["graphs", "canonical", "--graph", &text]);
        assert_eq!(code, 0);
        let r = result(&out);
        assert_eq!(r["key"], g["key"]);
        assert_eq!(&r["canonical"], g);
    }
}

#[test]
fn cut_output_feeds_contract() {
    let dir = std::env::temp_dir().join(format!("ctm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cut = dir.join("cut.json");
    let (code, out, _) = call(&["cut", "--graph", r#"{"D":3,"p":2,"sigma":[[1,2],[2,1],[1,2]],"loops":0}"#, "--edges", "1:1,2:2"]);
    assert_eq!(code, 0);
    std::fs::write(&cut, &out).unwrap();
    let (code, out, _) = call(&["contract", "--input", cut.to_str().unwrap(), "--white", "3", "--black", "3"]);
    assert_eq!(code, 0);
    let r = result(&out);
    assert_eq!(r["new_loops"], 1);
    assert_eq!(r["graph"]["loops"], 1);
    let (_, again, _) = call(&["graphs", "canonical", "--graph", r#"{"D":3,"p":2,"sigma":[[1,2],[2,1],[1,2]]}"#]);
    assert_eq!(r["graph"]["key"], result(&again)["key"]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn moments_exact_value() {
    let (code, out, err) = call(&["moments", "--graph", r#"[{"D":3,"p":1,"sigma":[[1],[1],[1]]}, "0301000000"]"#, "--N", "3", "--check"]);
    assert_eq!(code, 0, "{err}");
    // ⟨(Σ|M|²)²⟩ = N^3 (N^3 + 1).
    assert_eq!(result(&out)["value"], "756");
    assert!(err.starts_with("PASS"));
}

#[test]
fn sd_verify_lines() {
    let (code, _, err) = call(&["sd", "verify", "--D", "3", "--max-order", "6"]);
    assert_eq!(code, 0);
    assert_eq!(err.lines().filter(|l| l.starts_with("PASS")).count(), 17);
    let (code, _, err) = call(&["sd", "verify", "--D", "3", "--max-order", "4", "--convention", "w"]);
    assert_eq!(code, 1);
    assert!(err.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn flow_exit_codes() {
    assert_eq!(call(&["flow", "verify", "--D", "2", "--max-order", "6"]).0, 0);
    assert_eq!(call(&["flow", "verify", "--D", "2", "--max-order", "8", "--convention", "plus"]).0, 1);
    assert_eq!(call(&["flow", "verify", "--D", "2", "--max-order", "6", "--convention", "sideways"]).0, 2);
}

#[test]
fn input_errors() {
    let (code, _, err) = call(&["moments", "--graph", r#"[{"D":3,"p":1,"sigma":[[1],[1],[1]]},"#]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");
    let (code, _, err) = call(&["moments", "--graph", r#"[{"D":3,"p":1,"sigma":[[1],[1],[1]]}, {"D":2,"p":1,"sigma":[[1],[1]]}]"#]);
    assert_eq!(code, 2);
    assert!(err.contains("dimension"), "{err}");
    assert_eq!(call(&["graphs", "enumerate", "--D", "3", "--max-vertices", "4", "--bogus"]).0, 2);
    assert_eq!(call(&["cut", "--graph", "0301000000", "--edges", "1:1,1:1"]).0, 2);
}

#[test]
fn hopf_bracket_and_sd_bracket_agree() {
    let args = ["--a", "030201000100010100", "--b", "030201000101000001"];
    let (code, out, _) = call(&[&["hopf", "bracket"][..], &args].concat());
    assert_eq!(code, 0);
    let h = result(&out);
    assert_eq!(h["hopf"], h["schwinger_dyson"]);
    let (code, out, _) = call(&[&["sd", "bracket"][..], &args, &["--max-order", "6"]].concat());
    assert_eq!(code, 0);
    assert_eq!(result(&out)["terms"], h["schwinger_dyson"]);
}

#[test]
fn integrate_rows() {
    let (code, out, _) = call(&["flow", "integrate", "--D", "2", "--N", "2", "--t-end", "0.05", "--steps", "5", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,graph,value");
    // Six states of the four graphs with at most four vertices.
    assert_eq!(lines.len(), 1 + 6 * 4);
}
