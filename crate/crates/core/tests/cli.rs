mod support;

use std::process::{Command, Output};

use rand::Rng;
use support::*;

fn finalform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finalform")).args(args).output().unwrap()
}

/// Deletes, duplicates or garbles one line of `text`.
fn mutate(rng: &mut Rng8, text: &str) -> String {
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let i = rng.gen_range(1..lines.len());
    match rng.gen_range(0..4) {
        0 => {
            lines.remove(i);
        }
        1 => {
            let copy = lines[i].clone();
            lines.insert(i, copy);
        }
        2 => lines[i] = lines[i].replacen(':', "", 1),
        _ => lines[i].push_str(" ???"),
    }
    lines.join("\n") + "\n"
}

#[test]
fn malformed_files_exit_with_status_two_and_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = rng(7);
    let mut rejected = 0;
    for file in ["ex1.cfg", "ex2.cfg", "hash.dfa", "anbncn.lqg"] {
        let text = read_data(file);
        for k in 0..25 {
            let bad = mutate(&mut rng, &text);
            let path = dir.path().join(format!("{k}-{file}"));
            std::fs::write(&path, &bad).unwrap();
            let out = finalform(&["validate", path.to_str().unwrap()]);
            let stderr = String::from_utf8_lossy(&out.stderr);
            match out.status.code() {
                Some(0) => {}
                Some(2) => {
                    assert!(stderr.contains("line "), "{file} mutation {k}: {stderr}\n{bad}");
                    rejected += 1;
                }
                other => panic!("{file} mutation {k}: status {other:?}\n{bad}"),
            }
        }
    }
    assert!(rejected > 50, "only {rejected} mutations were rejected");
}

#[test]
fn reports_are_deterministic() {
    let ex1 = data("ex1.cfg");
    let lqg = data("anbncn.lqg");
    let runs: [&[&str]; 4] = [
        &["enumerate", "--grammar", &ex1, "--final", "markpal:X,Y:#", "--max-len", "6"],
        &["member", "--grammar", &ex1, "--final", "markpal:X,Y:#", "--target", "the#110"],
        &["queue-to-cfg", "--lqg", &lqg],
        &["enumerate", "--lqg", &lqg, "--max-len", "9"],
    ];
    for args in runs {
        let (a, b) = (finalform(args), finalform(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn bounded_reports_end_with_completeness() {
    let ex2 = data("ex2.cfg");
    let palg = format!("palg:{}", data("ex2_final.cfg"));
    let out = finalform(&["enumerate", "--grammar", &ex2, "--final", &palg, "--max-len", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("1#0\n"), "{stdout}");
    assert!(stdout.ends_with("complete: yes\n"));

    let cut = finalform(&["member", "--grammar", &ex2, "--final", &palg, "--target", "1010#1001", "--node-cap", "5"]);
    assert_eq!(cut.status.code(), Some(3));
    assert!(String::from_utf8(cut.stdout).unwrap().ends_with("complete: no\n"));
}
