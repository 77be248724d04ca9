//! End-to-end tests of the binary: the documented invocation examples,
//! exit codes, output formats, environment overrides, and round-trips of
//! printed syntax through the library parsers.

use std::process::{Command, Output};

use klr_specht::ground::GroundData;
use klr_specht::klr::{parse_element, Rewriter};
use klr_specht::tableaux::{parse_shape, parse_tableau};
use serde_json::Value;

fn run_with(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_klr-specht"));
    cmd.env_clear();
    for (key, value) in envs {
        cmd.env(key, value);
    }
    cmd.args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with(args, &[])
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn json(output: &Output) -> Value {
    serde_json::from_str(&stdout(output)).expect("json output")
}

#[test]
fn character_hook_has_two_terms() {
    let out = run(&[
        "character", "--shape", "2,1", "--charge", "0", "--e", "2", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["character"].as_array().unwrap().len(), 2);
    assert_eq!(v["policy"], "leftmost-descent-greedy");
    assert_eq!(v["ground"]["e"], 2);
    assert_eq!(v["ground"]["charge"], serde_json::json!([0]));
    assert!(v["version"].as_str().is_some());
    // The shape string round-trips through the parser.
    let mu = parse_shape(v["shape"].as_str().unwrap()).unwrap();
    assert_eq!(mu.size(), 3);
}

#[test]
fn character_empty_shape_is_empty() {
    let out = run(&[
        "character", "--shape", "-", "--charge", "0", "--e", "2", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank"], 1);
    let terms = v["character"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["degree"], 0);
    assert_eq!(terms[0]["residues"].as_array().unwrap().len(), 0);
}

#[test]
fn character_level_two_column_covers_eight_boxes() {
    let out = run(&[
        "character", "--shape", "3,1|2,2", "--charge", "0,0", "--e", "2",
        "--orientation", "column", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    for term in v["character"].as_array().unwrap() {
        assert_eq!(term["residues"].as_array().unwrap().len(), 8);
    }
    let rank: u64 = v["character"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["multiplicity"].as_u64().unwrap())
        .sum();
    assert_eq!(Value::from(rank), v["rank"]);
}

#[test]
fn character_csv_has_documented_columns() {
    let out = run(&[
        "character", "--shape", "2,1", "--charge", "0", "--e", "2", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("degree,residues,multiplicity"));
    assert_eq!(lines.next(), Some("-1,0.1.1,1"));
    assert_eq!(lines.next(), Some("1,0.1.1,1"));
    assert_eq!(lines.next(), None);
}

#[test]
fn garnir_reproduces_worked_example() {
    let out = run(&[
        "garnir", "--shape", "1|7,7,4,1", "--charge", "0,0", "--e", "2",
        "--node", "(2,3,2)", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["k"], 3);
    assert_eq!(v["f"], 2);
    assert_eq!(v["n"], 12);
    assert_eq!(v["coset_count"], 3);
    assert_eq!(v["gar_tableaux"].as_array().unwrap().len(), 3);
    // Printed element syntax parses back and normalizes to the same thing.
    let g = GroundData::new(2, &[0, 0]).unwrap();
    let raw = parse_element(v["element"]["display"].as_str().unwrap(), &g).unwrap();
    let rw = Rewriter::new(&g);
    let element = rw.normal_form(&raw, 20).unwrap();
    assert_eq!(element.term_count() as u64, v["element"]["terms"].as_u64().unwrap());
    // The Garnir and top tableau strings parse back as tableaux of the shape.
    let garnir = parse_tableau(v["garnir_tableau"].as_str().unwrap()).unwrap();
    let top = parse_tableau(v["top_tableau"].as_str().unwrap()).unwrap();
    assert_eq!(garnir.shape(), top.shape());
    assert_eq!(garnir.size(), 20);
}

#[test]
fn garnir_column_worked_example() {
    let out = run(&[
        "garnir", "--shape", "1|7,7,4,1", "--charge", "0,0", "--e", "2",
        "--node", "(3,1,2)", "--orientation", "column", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["k"], 2);
    assert_eq!(v["n"], 4);
}

#[test]
fn garnir_linear_quiver_has_single_term() {
    let out = run(&[
        "garnir", "--shape", "2,2", "--charge", "0", "--e", "0",
        "--node", "(1,1,1)", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["k"], 0);
    assert_eq!(v["n"], Value::Null);
    assert_eq!(v["coset_count"], 1);
    assert_eq!(v["element"]["terms"], 1);
}

#[test]
fn garnir_names_failed_adjacency() {
    let out = run(&[
        "garnir", "--shape", "2,2", "--charge", "0", "--e", "2", "--node", "(2,1,1)",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("below"), "{}", stderr(&out));

    let out = run(&[
        "garnir", "--shape", "2,2", "--charge", "0", "--e", "2", "--node", "(1,3,1)",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("outside the shape"), "{}", stderr(&out));
}

#[test]
fn straighten_standard_is_itself() {
    let out = run(&[
        "straighten", "1,3|2", "--shape", "2,1", "--charge", "0", "--e", "2",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let terms = v["expansion"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["coefficient"], "1");
    assert_eq!(terms[0]["tableau"], "1,3|2");
}

#[test]
fn straighten_hook_garnir_tableau_is_zero() {
    let out = run(&[
        "straighten", "2,3|1", "--shape", "2,1", "--charge", "0", "--e", "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().any(|l| l.trim() == "0"), "{}", stdout(&out));
}

#[test]
fn straighten_rejects_non_bijective_filling() {
    let out = run(&[
        "straighten", "1,1|2", "--shape", "2,1", "--charge", "0", "--e", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bijection"), "{}", stderr(&out));
}

#[test]
fn verify_braid_suite_passes() {
    let out = run(&[
        "verify", "--suite", "braid", "--e", "2", "--k", "2", "--lambda", "1,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("result: pass"));
}

#[test]
fn verify_all_suite_passes() {
    let out = run(&[
        "verify", "--suite", "all", "--shape", "2,1", "--charge", "0", "--e", "2",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let suites: Vec<&str> = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap())
        .collect();
    assert_eq!(
        suites,
        ["relations", "braid", "specht", "sign-twist", "duality", "induction"]
    );
    for suite in v["suites"].as_array().unwrap() {
        for check in suite["checks"].as_array().unwrap() {
            assert_eq!(
                check["failures"].as_array().unwrap().len(),
                0,
                "{} failed",
                check["name"]
            );
        }
    }
}

#[test]
fn verify_linear_quiver_skips_bricks() {
    let out = run(&[
        "verify", "--suite", "all", "--shape", "2,1", "--charge", "0", "--e", "0",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    let braid = &v["suites"].as_array().unwrap()[1];
    assert_eq!(braid["suite"], "braid");
    assert!(braid["note"].as_str().unwrap().contains("e >= 2"));
}

#[test]
fn verify_module_suite_needs_shape() {
    let out = run(&["verify", "--suite", "sign-twist", "--e", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--shape"));
}

#[test]
fn braid_suite_checks_k_against_lambda() {
    let out = run(&[
        "verify", "--suite", "braid", "--e", "2", "--k", "3", "--lambda", "1,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sums to 2"), "{}", stderr(&out));
}

#[test]
fn invalid_quiver_parameter_is_usage_error() {
    let out = run(&["character", "--shape", "2,1", "--charge", "0", "--e", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("must be 0 or >= 2"));
}

#[test]
fn size_cap_exits_with_resource_code() {
    let out = run(&[
        "character", "--shape", "4,4,4|4,4,4", "--charge", "0,0", "--e", "2",
        "--cap", "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("over the cap"));
}

#[test]
fn charge_level_must_match_components() {
    let out = run(&["character", "--shape", "2,1|1", "--charge", "0", "--e", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("components"));
}

#[test]
fn parse_errors_carry_byte_positions() {
    let out = run(&["character", "--shape", "2,x|1", "--charge", "0,0", "--e", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at byte 2"), "{}", stderr(&out));
}

#[test]
fn environment_variables_stand_in_for_flags() {
    let out = run_with(
        &["character"],
        &[
            ("KLRSPECHT_E", "2"),
            ("KLRSPECHT_CHARGE", "0"),
            ("KLRSPECHT_SHAPE", "2,1"),
            ("KLRSPECHT_FORMAT", "csv"),
        ],
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("degree,residues,multiplicity"));
}

#[test]
fn out_flag_writes_file_and_keeps_stdout_quiet() {
    let dir = std::env::temp_dir().join("klr-specht-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("char.json");
    let out = run(&[
        "character", "--shape", "2,1", "--charge", "0", "--e", "2",
        "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rank"], 2);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn verify_output_is_deterministic_per_seed() {
    let args = ["verify", "--suite", "relations", "--e", "3", "--seed", "11"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    assert_eq!(stdout(&first), stdout(&second));
}

#[test]
fn csv_is_reserved_for_characters() {
    let out = run(&[
        "verify", "--suite", "braid", "--e", "2", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("only available for character"));
}
