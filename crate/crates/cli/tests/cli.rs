use std::process::{Command, Output};

fn pcells(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcells")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn cell_count(args: &[&str]) -> usize {
    let o = pcells(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let first = stdout(&o).lines().next().unwrap().to_string();
    first.rsplit(' ').next().unwrap().parse().unwrap()
}

#[test]
fn b2_right_cells() {
    assert_eq!(cell_count(&["cells", "--type", "B2", "--p", "0", "--side", "right"]), 4);
}

#[test]
fn a2_two_sided_cells() {
    assert_eq!(cell_count(&["cells", "--type", "A2", "--side", "two-sided"]), 3);
}

#[test]
fn c3_p2_fixture_right_cells() {
    assert_eq!(cell_count(&["cells", "--fixture", "c3p2", "--p", "2", "--side", "right"]), 17);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["cells", "--fixture", "c3p2", "--p", "2", "--format", "json"];
    let a = stdout(&pcells(&args));
    let b = stdout(&pcells(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 17);
}

#[test]
fn verify_suites_pass() {
    for args in [&["verify", "b2"][..], &["verify", "c3"], &["verify", "typea", "--n", "5"]] {
        let o = pcells(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains("PASS"));
    }
}

#[test]
fn rs_examples() {
    let o = pcells(&["rs", "312"]);
    assert_eq!(stdout(&o), "P=[[1,2],[3]]\nQ=[[1,3],[2]]\n");
    let o = pcells(&["rs", "2,1,4,3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["P"], serde_json::json!([[1, 3], [2, 4]]));
    assert_eq!(v["Q"], serde_json::json!([[1, 3], [2, 4]]));
}

#[test]
fn tau_classes() {
    assert!(stdout(&pcells(&["tau", "--type", "A1"])).starts_with("2 classes"));
    let o = pcells(&["tau", "--type", "A3"]);
    assert!(stdout(&o).starts_with("10 classes"), "{}", stdout(&o));
    assert_eq!(cell_count(&["cells", "--type", "A3", "--side", "left"]), 10);
}

#[test]
fn wgraph_round_trips_through_verify() {
    let dir = std::env::temp_dir().join(format!("pcells-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("g.json");
    let o = pcells(&[
        "wgraph", "--fixture", "c3p2", "--p", "2", "--cell", "2123", "--format", "json", "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = pcells(&["verify", "wgraph", "--type", "C3", "--graph", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn corrupted_table_exits_one() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/c3_p2.json");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture).unwrap()).unwrap();
    let entries = v["entries"].as_array_mut().unwrap();
    let victim = entries.iter_mut().find(|e| e["terms"].as_array().is_some_and(|t| t.len() > 1)).unwrap();
    victim["terms"][1]["coeff"] = serde_json::json!([[1, 1]]);
    let dir = std::env::temp_dir().join(format!("pcells-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("bad.json");
    std::fs::write(&file, serde_json::to_string(&v).unwrap()).unwrap();
    let path = file.to_str().unwrap();
    assert_eq!(pcells(&["cells", "--table", path, "--p", "2"]).status.code(), Some(1));
    assert_eq!(pcells(&["verify", "table", "--table", path, "--p", "2"]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(pcells(&["cells"]).status.code(), Some(2));
    assert_eq!(pcells(&["cells", "--type", "Q7"]).status.code(), Some(2));
    assert_eq!(pcells(&["cells", "--type", "B2", "--p", "3"]).status.code(), Some(2));
    assert_eq!(pcells(&["rs", "113"]).status.code(), Some(2));
    assert_eq!(pcells(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(pcells(&["frobnicate"]).status.code(), Some(2));
}
