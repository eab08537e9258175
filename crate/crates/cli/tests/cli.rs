use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_monodromy"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn pipe(first: &[&str], second: &[&str]) -> Output {
    let a = run(first, "");
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    run(second, &stdout(&a))
}

#[test]
fn hyperelliptic_certifies_full_sp() {
    let o = pipe(
        &["hyperelliptic", "--genus", "1", "--prime", "3"],
        &["certify", "--r", "1"],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("CONCLUSION: FullSp\n"), "{out}");
    assert!(out.starts_with("PARITY: alternating\nDIM: 2\nPRIME: 3\n"));
}

#[test]
fn twist_family_cross_validates() {
    let o = pipe(
        &["twist-family", "--roots", "2,3", "--prime", "5"],
        &["cross-validate", "--r", "2"],
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("DIM: 5\n"));
    assert!(out.contains("AGREEMENT: yes\n"));
    assert!(out.contains("EXACT_CLASS: KerSpinor\n"));
    assert!(out.contains("EXACT_ORDER: 9360000\n"));
}

#[test]
fn identity_tuple_is_not_certified() {
    let o = run(
        &["certify", "--r", "1"],
        "MODULUS 5 RANK 2 PUNCTURES 1\nAT 0\n1 0\n0 1\n",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("CONCLUSION: NotCertified(irreducibility)\n"));
}

#[test]
fn order_and_classify() {
    let file = stdout(&run(&["hyperelliptic", "--genus", "2", "--prime", "3"], ""));
    let o = run(&["order"], &file);
    assert_eq!(stdout(&o), "ORDER: 51840\n");
    let o = run(&["classify"], &file);
    let out = stdout(&o);
    assert_eq!(out.matches("Transvection").count(), 4);
    assert!(out.contains("PAIRING: alternating\n"));
}

#[test]
fn convolving_twice_with_minus_one_returns_the_kummer_tuple() {
    let kummer = "MODULUS 5 RANK 1 PUNCTURES 2\nAT 0\n4\nAT 1\n4\n";
    let once = run(&["convolve", "--lambda", "-1"], kummer);
    assert_eq!(once.status.code(), Some(0));
    let twice = run(&["convolve", "--lambda", "4"], &stdout(&once));
    assert_eq!(stdout(&twice), kummer);
}

#[test]
fn emitted_files_round_trip() {
    let file = stdout(&run(&["twist-family", "--roots", "2", "--prime", "7"], ""));
    let again = run(&["convolve", "--lambda", "1"], &file);
    assert_eq!(stdout(&again), file);
}

#[test]
fn predict_from_local_data() {
    let o = run(
        &[
            "predict",
            "--lambda",
            "-1",
            "--prime",
            "5",
            "--local=-1:1",
            "--local=-1:1",
            "--infinity",
            "1:1",
        ],
        "",
    );
    assert_eq!(stdout(&o), "RANK: 2\nLOCAL 0: {(1,2)}\nLOCAL 1: {(1,2)}\n");
}

#[test]
fn reports_are_reproducible() {
    let file = stdout(&run(&["twist-family", "--roots", "2", "--prime", "5"], ""));
    let a = run(&["--seed", "3", "cross-validate", "--r", "2"], &file);
    let b = run(&["--seed", "3", "cross-validate", "--r", "2"], &file);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_with_two() {
    for (args, input) in [
        (vec!["order"], "MODULUS 9 RANK 1 PUNCTURES 1\nAT 0\n2\n"),
        (vec!["order"], "MODULUS 5 RANK 1 PUNCTURES 1\nAT 0\n5\n"),
        (vec!["order"], "garbage\n"),
        (vec!["twist-family", "--roots", "1", "--prime", "5"], ""),
        (vec!["hyperelliptic", "--genus", "1", "--prime", "4"], ""),
        (
            vec!["convolve", "--lambda", "0"],
            "MODULUS 5 RANK 1 PUNCTURES 2\nAT 0\n4\nAT 1\n4\n",
        ),
    ] {
        let o = run(&args, input);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
    }
}

#[test]
fn comments_are_ignored() {
    let o = run(
        &["order"],
        "# header\nMODULUS 3 RANK 1 PUNCTURES 2\n# first\nAT 0\n2\nAT 1\n2\n",
    );
    assert_eq!(stdout(&o), "ORDER: 2\n");
}
