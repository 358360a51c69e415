use std::io::Write;
use std::process::Command;

use abelianize::cli::run_captured;

fn run(args: &[&str]) -> (i32, String, String) {
    run_captured(std::iter::once("abelianize").chain(args.iter().copied()))
}

fn ok(args: &[&str]) -> String {
    let (status, out, err) = run(args);
    assert_eq!(status, 0, "{args:?}: {err}");
    out
}

fn config_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn documented_examples() {
    assert_eq!(ok(&["pairing", "--grassmannian", "2", "4", "--exps", "4,0"]), "2\n");
    assert_eq!(ok(&["betti", "--grassmannian", "2", "4"]), "1,1,2,1,1\n");
    assert_eq!(ok(&["euler", "--grassmannian", "2", "4"]), "6\n");
}

#[test]
fn pairing_csv_columns() {
    let out = ok(&["pairing", "--grassmannian", "2", "4", "--all", "--format", "csv"]);
    assert_eq!(out, "m_1,m_2,value\n4,0,2\n2,1,1\n0,2,1\n");
    let out = ok(&[
        "pairing",
        "--grassmannian",
        "2",
        "4",
        "--exps",
        "2,1",
        "--exps",
        "0,2",
        "--oracle",
    ]);
    assert_eq!(out, "2,1: 1 (oracle 1)\n0,2: 1 (oracle 1)\n");
}

#[test]
fn fractions_and_latex() {
    assert_eq!(
        ok(&["integrate", "--grassmannian", "2", "4", "--poly", "1/2*u1^2*u2^2"]),
        "1/2\n"
    );
    assert_eq!(
        ok(&[
            "integrate",
            "--grassmannian",
            "2",
            "4",
            "--poly=-1/3*u1^2*u2^2",
            "--latex"
        ]),
        "-\\frac{1}{3}\n"
    );
    assert_eq!(
        ok(&[
            "integrate",
            "--grassmannian",
            "2",
            "4",
            "--torus",
            "--poly",
            "u1^3*u2^3"
        ]),
        "1\n"
    );
}

#[test]
fn scalar_subcommands() {
    assert_eq!(ok(&["signature", "--grassmannian", "2", "4", "--cross-check"]), "2\n");
    assert_eq!(
        ok(&["charnum", "--grassmannian", "2", "4", "--class", "total-chern"]),
        "6\n"
    );
    assert_eq!(
        ok(&[
            "charnum",
            "--grassmannian",
            "2",
            "4",
            "--class",
            "l-class",
            "--format",
            "csv"
        ]),
        "value\n2\n"
    );
    assert_eq!(
        ok(&[
            "charnum",
            "--grassmannian",
            "1",
            "3",
            "--class",
            "custom",
            "--coeffs",
            "1,1"
        ]),
        "3\n"
    );
    assert_eq!(ok(&["index", "--grassmannian", "2", "4", "--bundle", "u1+u2"]), "6\n");
    assert_eq!(
        ok(&[
            "index",
            "--grassmannian",
            "2",
            "4",
            "--bundle",
            "2*u1+2*u2",
            "--opposite-positive"
        ]),
        "20\n"
    );
    assert_eq!(
        ok(&[
            "index",
            "--grassmannian",
            "2",
            "4",
            "--bundle",
            "u1+u2",
            "--show-forms",
            "--format",
            "csv"
        ]),
        "index,even,odd\n6,16,10\n"
    );
    assert_eq!(ok(&["index", "--grassmannian", "1", "2", "--bundle", "3*u1"]), "4\n");
}

#[test]
fn presentation_csv() {
    let out = ok(&["presentation", "--grassmannian", "2", "4", "--format", "csv"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("degree,dim_invariants,dim_ann,betti"));
    assert_eq!(lines.next(), Some("0,1,0,1"));
    assert_eq!(
        ok(&["betti", "--grassmannian", "2", "4", "--format", "csv"]),
        "degree,betti\n0,1\n1,1\n2,2\n3,1\n4,1\n"
    );
}

#[test]
fn oracle_check_passes() {
    let out = ok(&["oracle-check"]);
    assert!(out.ends_with("total: 70 pairings, 0 mismatches\n"), "{out}");
    assert_eq!(
        ok(&["oracle-check", "--grassmannian", "2", "4", "--format", "csv"]),
        "k,n,exponents,value,oracle\n2,4,4 0,2,2\n2,4,2 1,1,1\n2,4,0 2,1,1\n"
    );
}

#[test]
fn config_models_and_export() {
    let f = config_file(r#"{"schema":"1","ring":{"variables":"2","truncations":["5","5"]},"roots":"unitary:2"}"#);
    let path = f.path().to_str().unwrap();
    assert_eq!(ok(&["euler", "--config", path]), "10\n");
    let exported = ok(&["export-config", "--config", path]);
    let g = config_file(&exported);
    let path2 = g.path().to_str().unwrap();
    assert_eq!(
        ok(&["betti", "--config", path2]),
        ok(&["betti", "--grassmannian", "2", "5"])
    );
    assert_eq!(exported, ok(&["export-config", "--grassmannian", "2", "5"]));
}

#[test]
fn custom_series_from_config() {
    let f = config_file(
        r#"{"schema":"1","ring":{"variables":"1","truncations":["4"]},"roots":"unitary:1","custom_series":["1","1"]}"#,
    );
    assert_eq!(
        ok(&["charnum", "--config", f.path().to_str().unwrap(), "--class", "custom"]),
        "4\n"
    );
}

#[test]
fn config_errors_exit_2_with_location() {
    let f = config_file(r#"{"schema":"1","ring":{"variables":"2","truncations":["4","four"]},"roots":"unitary:2"}"#);
    let (status, _, err) = run(&["euler", "--config", f.path().to_str().unwrap()]);
    assert_eq!(status, 2);
    assert!(err.contains("ring.truncations[1]"), "{err}");

    let (status, _, err) = run(&["euler", "--config", "/nonexistent/model.json"]);
    assert_eq!(status, 2);
    assert!(err.contains("/nonexistent/model.json"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["euler"]).0, 2);
    let (status, _, err) = run(&["pairing", "--grassmannian", "2", "4", "--exps", "4"]);
    assert_eq!(status, 2);
    assert!(err.contains("--exps"), "{err}");
    let (status, _, err) = run(&["integrate", "--grassmannian", "2", "4", "--poly", "u3"]);
    assert_eq!(status, 2);
    assert!(err.contains("--poly"), "{err}");
    let (status, _, err) = run(&["index", "--grassmannian", "2", "4", "--bundle", "u1+u2:x"]);
    assert_eq!(status, 2);
    assert!(err.contains("--bundle") && err.contains("byte 6"), "{err}");
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "pairing",
        "--grassmannian",
        "3",
        "7",
        "--all",
        "--oracle",
        "--format",
        "csv",
    ];
    let first = ok(&args);
    for _ in 0..3 {
        assert_eq!(ok(&args), first);
    }
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_abelianize"))
        .args(["pairing", "--grassmannian", "2", "4", "--exps", "4,0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2\n");
    let bad = Command::new(env!("CARGO_BIN_EXE_abelianize"))
        .arg("nope")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
