use std::process::{Command, Output};

fn fibrecount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibrecount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn count_leaf() {
    let o = fibrecount(&["count", "a:-1=1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in [
        "F = 1",
        "W = 1",
        "J = 1",
        "L = 1",
        "degree = 1",
        "weight = -1",
    ] {
        assert!(out.lines().any(|l| l == line), "missing {line}: {out}");
    }
}

#[test]
fn count_four_vertices() {
    let o = fibrecount(&["count", "a:1=1,a:0=1,a:-1=2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("k = a:-1=2,a:0=1,a:1=1\n"));
    for line in ["F = 2", "W = 3/2", "J = 3", "L = 36", "degree = 4"] {
        assert!(out.lines().any(|l| l == line), "missing {line}: {out}");
    }
}

#[test]
fn count_rejects_wrong_weight() {
    let o = fibrecount(&["count", "a:0=1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("weight must be -1"));
}

#[test]
fn parse_errors_exit_2() {
    for spec in ["a:-2=1", "a:0", "a:0=1,a:0=2", "a:x=1", "a:0=0"] {
        let o = fibrecount(&["count", spec]);
        assert_eq!(o.status.code(), Some(2), "{spec}");
    }
    let o = fibrecount(&["count", "--alphabet", "a", "b:-1=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown decoration"));
}

#[test]
fn count_json_round_trips() {
    let o = fibrecount(&["count", "--format", "json", "b:-1=1,a:1=1,a:-1=1"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["W"]["num"], 1);
    assert_eq!(v["W"]["den"], 1);
    assert_eq!(v["L"], 6);
    assert_eq!(v["F"], 1);
    let k = v["k"].as_str().unwrap();
    assert_eq!(k, "a:-1=1,a:1=1,b:-1=1");
    let again = fibrecount(&["count", "--format", "json", k]);
    assert_eq!(stdout(&again), first);
}

#[test]
fn series_weighted_degree_one() {
    let o = fibrecount(&["series", "weighted", "--alphabet", "a", "--max-degree", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "a:-1=1 → 1\n");
}

#[test]
fn series_degree_three() {
    let o = fibrecount(&["series", "weighted", "--max-degree", "3"]);
    assert!(
        stdout(&o).lines().any(|l| l == "a:-1=2,a:1=1 → 1/2"),
        "{}",
        stdout(&o)
    );
    let o = fibrecount(&["series", "ordinary", "--max-degree", "3"]);
    assert!(
        stdout(&o).lines().any(|l| l == "a:-1=2,a:1=1 → 1"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn series_cap_exit_4() {
    let o = fibrecount(&["series", "weighted", "--max-degree", "13"]);
    assert_eq!(o.status.code(), Some(4));
    let o = fibrecount(&["oracle", "--max-n", "9"]);
    assert_eq!(o.status.code(), Some(4));
    let o = fibrecount(&["oracle", "--max-n", "3", "--alphabet", "a,b,c"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn lower_example() {
    let o = fibrecount(&["lower", "a:0=2", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ℓ = a:0=1, C = 2, target a:-1=1,a:0=1\n");
}

#[test]
fn transition_example() {
    let o = fibrecount(&["transition", "a:1=1", "a:-1=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "u^2/2\n");
    let o = fibrecount(&["transition", "a:-1=1", "a:0=1"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn coproduct_leaf() {
    for form in ["raw-dbar", "refined-C", "refined-D"] {
        let o = fibrecount(&["coproduct", "a:-1=1", form]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), "1 ⊗ a:-1=1 : 1\n", "{form}");
    }
}

#[test]
fn coproduct_forms_print_identically() {
    let base = stdout(&fibrecount(&[
        "coproduct",
        "a:1=1,a:-1=2,b:0=1",
        "raw-dbar",
    ]));
    for form in ["refined-C", "refined-D"] {
        let other = stdout(&fibrecount(&["coproduct", "a:1=1,a:-1=2,b:0=1", form]));
        assert_eq!(base, other);
    }
    assert!(
        base.lines().any(|l| l == "1 ⊗ a:-1=2,a:1=1,b:0=1 : 1"),
        "{base}"
    );
}

#[test]
fn oracle_two_decorations() {
    let o = fibrecount(&["oracle", "--alphabet", "a,b", "--max-n", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("all checks passed\n"));
}

#[test]
fn oracle_mutation_exit_1() {
    let o = fibrecount(&["oracle", "--max-n", "5", "--mutate", "w-numerator"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(
        out.contains(
            "first mismatch [weighted]: W_k closed form at a:-1=1,a:0=1: expected 1, got 2"
        ),
        "{out}"
    );
}

#[test]
fn oracle_json() {
    let o = fibrecount(&["oracle", "--max-n", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["first_mismatch"].is_null());
}
