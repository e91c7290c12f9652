use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_edgelab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("edgelab-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn span_of_p3() {
    let d = scratch("span");
    let g = write(&d, "p3.graph", "p edge 3 2\n0 1\n1 2\n");
    let o = run(&["span", &g]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn verify_reports_violations() {
    let d = scratch("verify");
    let g = write(&d, "p3.graph", "p edge 3 2\n0 1\n1 2\n");
    let bad = write(&d, "bad.lbl", "0 1 0\n1 2 1\n");
    let o = run(&["verify", &g, &bad, "--lambda", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "distance1-gap 0 1 0 1\n");
    let good = write(&d, "good.lbl", "c fine\n0 1 0\n1 2 2\n");
    assert_eq!(run(&["verify", &g, &good, "--lambda", "4"]).status.code(), Some(0));
}

#[test]
fn label_output_verifies_and_respects_pins() {
    let d = scratch("label");
    let g = write(&d, "c6.graph", "p edge 6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    for lambda in ["4", "5"] {
        let o = run(&["label", &g, "--lambda", lambda, "--pin", "2=4"]);
        assert_eq!(o.status.code(), Some(0));
        let lab = write(&d, "out.lbl", &stdout(&o));
        assert!(stdout(&o).lines().nth(2).unwrap().ends_with(" 4"));
        assert_eq!(run(&["verify", &g, &lab, "--lambda", lambda]).status.code(), Some(0));
    }
    // Span 3 is too small for a 6-cycle.
    assert_eq!(run(&["label", &g, "--lambda", "3"]).status.code(), Some(1));
}

#[test]
fn classify_line() {
    let d = scratch("classify");
    let g = write(&d, "star.graph", "p edge 5 4\n0 1\n0 2\n0 3\n0 4\n");
    let o = run(&["classify", &g]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "class=unlabelable-4 gaps= span_le4=false\n");
}

#[test]
fn budget_exit_code() {
    let d = scratch("budget");
    // K_5 at a hopeless span with a tiny budget.
    let mut text = String::from("p edge 5 10\n");
    for u in 0..5 {
        for v in u + 1..5 {
            text.push_str(&format!("{u} {v}\n"));
        }
    }
    let g = write(&d, "k5.graph", &text);
    let o = run(&["label", &g, "--lambda", "12", "--budget-nodes", "5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reduce_then_label_matches_nae() {
    let d = scratch("reduce");
    let cases = [
        ("sat.mcnf", "p mcnf 3 1\n1 2 3 0\n", 0),
        ("unsat.mcnf", "p mcnf 3 3\n1 1 2 0\n2 2 3 0\n1 1 3 0\n", 1),
    ];
    for (name, text, want) in cases {
        let f = write(&d, name, text);
        assert_eq!(run(&["nae", &f]).status.code(), Some(want));
        let out = d.join(name.replace(".mcnf", ""));
        let o = run(&["reduce", &f, "--lambda", "5", "-o", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let map = fs::read_to_string(out.join("g.map")).unwrap();
        assert!(map.lines().any(|l| l.starts_with("clause 0 in ")));
        let g = out.join("g.graph");
        let o = run(&["label", g.to_str().unwrap(), "--lambda", "5"]);
        assert_eq!(o.status.code(), Some(want), "{name}");
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["span", "/nonexistent.graph"]).status.code(), Some(2));
    let d = scratch("usage");
    let g = write(&d, "bad.graph", "p edge 2 1\n0 5\n");
    let o = run(&["span", &g]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn gadget_check_and_oracle() {
    let o = run(&["check-gadgets", "--lambda", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "variable lambda=6 pass\nclause lambda=6 pass\n");
    let o = run(&["oracle-compare", "--max-vertices", "6", "--lambda", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK 143\n");
}
