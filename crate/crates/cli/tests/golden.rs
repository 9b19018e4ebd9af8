//! Compares command output with the files under `tests/golden`.
//! Run with `UPDATE_GOLDEN=1` to rewrite them.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.ccv"));
    p.to_string_lossy().into_owned()
}

fn ccview(fixture_name: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccview"))
        .arg("--input")
        .arg(fixture(fixture_name))
        .args(args)
        .output()
        .expect("binary runs")
}

fn golden(name: &str, fixture_name: &str, args: &[&str], code: i32) {
    let out = ccview(fixture_name, args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &stdout).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(stdout, expected, "{name}");
}

#[test]
fn eval() {
    golden("eval_f_ab.txt", "single_column", &["eval", "--view", "f", "--state", "ab"], 0);
    golden("eval_h_a.txt", "single_column", &["eval", "--view", "h", "--state", "a"], 0);
    golden("eval_lines.json", "invoice", &["--format", "json", "eval", "--view", "lines", "--state", "sample"], 0);
}

#[test]
fn enumerate() {
    golden("enumerate_single_column.txt", "single_column", &["enumerate"], 0);
    golden("enumerate_projection.txt", "projection", &["enumerate"], 0);
}

#[test]
fn translate() {
    golden("translate_drop_k2.txt", "projection", &["translate", "--view", "pka", "--strategy", "pad", "--update", "drop_k2", "--state", "s1"], 0);
    golden("translate_add_c1.txt", "invoice", &["translate", "--view", "lines", "--strategy", "hier", "--update", "add_c1", "--state", "single"], 0);
    golden("translate_add_2q.json", "parts", &["--format", "json", "translate", "--view", "lookup", "--strategy", "fk", "--update", "add_2q", "--state", "sample"], 0);
}

#[test]
fn check() {
    golden("check_sel.txt", "single_column", &["check", "--view", "f", "--strategy", "sel"], 0);
    golden("check_combined.txt", "parts", &["check", "--view", "combined_fixture", "--strategy", "combined"], 1);
    golden("check_union.json", "union", &["--format", "json", "check", "--view", "u", "--strategy", "both"], 1);
}

#[test]
fn complements_and_correspondence() {
    golden("complement_pka.txt", "projection", &["complement", "--view", "pka"], 0);
    golden("complement_lines.txt", "invoice", &["complement", "--view", "lines"], 0);
    golden("correspond_f.txt", "single_column", &["correspond", "--view", "f", "--strategy", "sel", "--complement", "c"], 0);
    golden("correspond_lookup_all.txt", "parts", &["correspond", "--view", "lookup", "--strategy", "fk", "--complement", "catalogue_only"], 0);
}

#[test]
fn classify_and_heuristic() {
    golden("classify_fits.txt", "boxes", &["classify", "--join", "fits"], 0);
    golden("classify_line_join.txt", "invoice", &["classify", "--join", "line_join"], 0);
    golden("heuristic_lines.txt", "invoice", &["heuristic", "--view", "lines", "--strategy", "hier", "--state", "sample"], 0);
}

fn stderr_of(fixture_name: &str, args: &[&str]) -> (i32, String) {
    let out = ccview(fixture_name, args);
    assert!(out.stdout.is_empty());
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn errors_are_one_classified_line() {
    let cases: [(&str, &[&str], &str); 5] = [
        ("single_column", &["eval", "--view", "nope", "--state", "ab"], "error[ResolutionError] "),
        ("single_column", &["translate", "--view", "f", "--strategy", "id", "--update", "add_a", "--state", "ab"], "error[InvalidStrategy] "),
        ("boxes", &["complement", "--view", "fits"], "error[NoConstructiveComplement] "),
        ("single_column", &["eval", "--view", "f"], "error[UsageError] "),
        ("single_column", &["enumerate", "--max-tuples", "0"], "error[StateSpaceTooLarge] "),
    ];
    for (fx, args, prefix) in cases {
        let (code, err) = stderr_of(fx, args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(err.starts_with(prefix), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{err}");
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_ccview"))
        .args(["--input", "/nonexistent/x.ccv", "enumerate"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[IoError] /nonexistent/x.ccv: "));
}

#[test]
fn help_exits_cleanly() {
    let out = Command::new(env!("CARGO_BIN_EXE_ccview")).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("correspond"));
}
