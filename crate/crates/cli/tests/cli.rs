use std::path::PathBuf;
use std::process::Command;

use sigma_cli::{run, Outcome};
use sigma_core::constructions::example_5_2;
use sigma_core::parse_map;

fn example(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../maps").join(name);
    p.to_string_lossy().into_owned()
}

fn sigma(args: &[&str]) -> Outcome {
    run(std::iter::once("sigma").chain(args.iter().copied()))
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("sigma-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn rotation_of_first_example() {
    let o = sigma(&["rot", &example("ex5_1_n3.map")]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.starts_with("rot = [-1/2, 1/2]\n"), "{}", o.stdout);
    assert!(o.stdout.contains("min cycle: ") && o.stdout.contains("max cycle: "));
}

#[test]
fn periods_of_second_example() {
    let o = sigma(&["periods", "--max", "20", &example("ex5_2.map")]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "periods[1..20] = {1,3,4,...,20}\n");
}

#[test]
fn periods_with_oracle_agree() {
    let o = sigma(&["periods", "--oracle", "--max", "10", &example("ex5_1_n4.map")]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("oracle[1..10] = {2,3,...,10} agrees"), "{}", o.stdout);
}

#[test]
fn periods_at_rotation_zero() {
    let o = sigma(&["periods-at", "0/1", &example("ex6_4.map")]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout, "periods(0/1)[1..20] = {6,7,...,20}\n");
    let o = sigma(&["periods-at", "-1/3", &example("ex5_2.map"), "--max", "12"]);
    assert_eq!(o.stdout, "periods(-1/3)[1..12] = {3}\n");
}

#[test]
fn verify_example_passes() {
    let o = sigma(&["verify-example", "6_4"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.lines().all(|l| !l.starts_with("FAIL")));
    assert!(o.stdout.contains("PASS 6_4 (default) rotation interval: rot = [-5, 1]"));
    let o = sigma(&["verify-example", "7_1"]);
    assert_eq!(o.code, 2);
}

#[test]
fn malformed_maps_exit_with_code_two() {
    let missing_degree = scratch("nodeg.map", "node a = R(0)\nnode t = B(0,1)\nimage a -> R(0)\nimage t -> R(0)\n");
    let o = sigma(&["periods", &missing_degree]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 0"), "{}", o.stderr);

    let off_grid = scratch("offgrid.map", "degree 1\nnode a = R(0)\nnode t = B(0,1)\nimage a -> R(1/2)\nimage t -> R(0)\n");
    let o = sigma(&["rot", &off_grid]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("image of node `a` is not a node translate"), "{}", o.stderr);

    let o = sigma(&["rot", &example("no_such_file.map")]);
    assert_eq!(o.code, 2);
}

#[test]
fn exhausted_budget_exits_with_code_three() {
    let o = sigma(&["periods", "--budget", "1", &example("ex6_4.map")]);
    assert_eq!(o.code, 3, "{}", o.stdout);
    assert!(o.stderr.starts_with("incomplete: "), "{}", o.stderr);
}

#[test]
fn emitted_maps_round_trip() {
    let o = sigma(&["emit", "ex5_2"]);
    assert_eq!(o.code, 0);
    assert_eq!(parse_map(&o.stdout).unwrap(), example_5_2(None).unwrap());
    let o = sigma(&["emit", "branch_1_5"]);
    assert_eq!(o.code, 0);
    assert_eq!(sigma(&["emit", "nonsense"]).code, 2);
}

#[test]
fn checked_in_examples_match_the_builders() {
    for name in ["ex5_1_n3", "ex5_1_n4", "ex5_1_n5", "ex5_2", "ex6_1_n3", "ex6_1_n4", "ex6_3_k3", "ex6_3_k4", "ex6_4", "type3_block"] {
        let emitted = sigma(&["emit", name]).stdout;
        let file = std::fs::read_to_string(example(&format!("{name}.map"))).unwrap();
        assert_eq!(parse_map(&file).unwrap(), parse_map(&emitted).unwrap(), "{name}");
    }
}

#[test]
fn dot_file_is_written() {
    let dot = scratch("g.dot", "");
    let o = sigma(&["graph", "--dot", &dot, &example("ex5_1_n3.map")]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("edge A_1 -> A_3 disp -1 sign +"), "{}", o.stdout);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
}

#[test]
fn orderings_commands() {
    assert_eq!(sigma(&["orders", "sh", "5", "3"]).stdout, "5 <=_Sh 3: true\n");
    assert_eq!(sigma(&["orders", "sh", "3", "5"]).stdout, "3 <=_Sh 5: false\n");
    assert_eq!(sigma(&["orders", "baldwin", "3", "7", "4"]).stdout, "7 <=_3 4: true\n");
    assert_eq!(sigma(&["orders", "expr", "M(0,1/2)", "--max", "10"]).stdout, "M(0,1/2) [1..10] = {3,4,...,10}\n");
    assert_eq!(sigma(&["orders", "baldwin", "3", "2", "4"]).code, 2);
}

#[test]
fn classify_reports_the_type_three_orbit() {
    let o = sigma(&["classify", "--max", "8", &example("type3_block.map")]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("shape AllN"));
    assert!(o.stdout.contains("witness period 6 rot 1/2"), "{}", o.stdout);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_sigma");
    let ok = Command::new(bin).args(["rot", &example("ex5_2.map")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).lines().next(), Some("rot = [-1/3, 1/3]"));
    let bad = Command::new(bin).arg("--no-such-flag").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
