use std::io::Write;
use std::process::{Command, Output, Stdio};

fn ecorec(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ecorec"))
        .args(args)
        .env_remove("ECOREC_DATASET")
        .env_remove("ECOREC_CATALOG")
        .env_remove("ECOREC_STORE")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    format!("{}/../core/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn lookup_hit_and_miss() {
    let o = ecorec(&["lookup", "Congo"], "");
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("Congo: 77%"));

    let o = ecorec(&["lookup", "bunny"], "");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        String::from_utf8_lossy(&o.stderr).trim(),
        "Country not found. Remember to type with first letter capital."
    );
}

#[test]
fn classify_json_envelope() {
    let o = ecorec(&["--json", "classify", "31"], "");
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"]["standing"], "AVERAGE");
    assert_eq!(v["payload"]["long_label"], "In the average range");

    let o = ecorec(&["--json", "classify", "-3"], "");
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["code"], "OutOfRange");
}

#[test]
fn usage_error_exits_two() {
    let o = ecorec(&["frobnicate"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn chisq_text() {
    let o = ecorec(&["chisq", &data("stance_by_region.csv")], "");
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("The chi-square statistic is 31.4007."));
    assert!(out.contains("The p-value is < .00001."));
    assert!(out.contains("The result is significant at p < .05."));
}

#[test]
fn stats_and_wordcount() {
    let o = ecorec(&["stats", &data("countries_excerpt.csv"), "mismanaged_share_pct"], "");
    assert!(o.status.success());
    assert!(stdout(&o).contains("median: 9.5"));

    let o = ecorec(
        &[
            "wordcount",
            &data("fixture_paragraph.txt"),
            "plastic",
            "government",
            "--groups",
            &data("keyword_groups.toml"),
        ],
        "",
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("plastic\t9"));
    assert!(out.contains("government\t2"));
}

#[test]
fn session_resume_banks_points() {
    let store = tempfile::tempdir().unwrap();
    let store_arg = store.path().to_str().unwrap();
    let o = ecorec(&["session", "--store", store_arg], "Mexico\nYES\nHARD\n0 O\nDONE\n");
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("10 points in total"), "{out}");
    let id = out.lines().last().unwrap().split_whitespace().nth(2).unwrap().to_string();

    let o = ecorec(&["session", "--store", store_arg, "--resume", &id], "EASY\n2 O\nDONE\n");
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains(&format!("Resuming session {id} with 10 points.")), "{out}");
    assert!(out.contains("You earned 1 points this run and have 11 points in total."), "{out}");

    let o = ecorec(&["session", "--store", store_arg, "--resume", "missing"], "");
    assert_eq!(o.status.code(), Some(1));
}
