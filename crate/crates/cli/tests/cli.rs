use std::fs;
use std::process::{Command, Output};

use recon_ds::{ball, codes, reconstruct, BinSeq, CodeSpec, Family};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recon-ds"))
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
fn ball_prints_sorted_elements() {
    let o = run(&["ball", "0110"]);
    assert_eq!(o.status.code(), Some(0));
    let x: BinSeq = "0110".parse().unwrap();
    let expected: String = ball::ds_ball(&x).iter().map(|z| format!("{z}\n")).collect();
    assert_eq!(stdout(&o), expected);
    let lines: Vec<&str> = expected.lines().collect();
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);
}

#[test]
fn intersect_reports_cardinality() {
    let o = run(&["intersect", "0110", "1001"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let size = ball::ds_intersection(&"0110".parse().unwrap(), &"1001".parse().unwrap())
        .unwrap()
        .len();
    assert!(out.ends_with(&format!("size {size}\n")), "{out}");
    assert_eq!(out.lines().count(), size + 1);
}

#[test]
fn partition_json_has_all_subsets() {
    let o = run(&["intersect", "00000110", "00001001", "--partition"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "recon-ds/v1");
    for k in 1..=18 {
        assert!(v["B"][k.to_string()].is_array());
        assert!(v["E"][k.to_string()].is_array());
    }
    let size = ball::ds_intersection(&"00000110".parse().unwrap(), &"00001001".parse().unwrap())
        .unwrap()
        .len();
    assert_eq!(v["union_size"], size);
}

#[test]
fn verify_bounds_c14_passes() {
    let o = run(&[
        "verify", "--suite", "bounds", "--family", "c14", "--n", "12",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS bound.c14"));
}

#[test]
fn verify_writes_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&[
        "verify",
        "--suite",
        "counts",
        "--n-range",
        "8..10",
        "--jobs",
        "2",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["schema"], "recon-ds/v1");
    assert_eq!(v["passed"], true);
    assert!(v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["passed"] == true));
}

#[test]
fn failing_suite_exits_one() {
    // the B_5 forcing claim has counterexamples at n = 8
    let o = run(&["verify", "--suite", "structural", "--n", "8"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL c1.b5_forces_b13_b15_b17"));
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let o = run(&["enumerate", "--family", "c14", "--n", "12", "--s1", "30"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("--s1") && stderr(&o).contains("[0, 23]"),
        "{}",
        stderr(&o)
    );

    let o = run(&["enumerate", "--family", "c14", "--n", "12", "--h0", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--h0"));

    let o = run(&["stats", "--family", "c14", "--n", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--n"));

    let o = run(&[
        "verify", "--suite", "bounds", "--family", "c14", "--n", "30",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["ball", "01x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stats_matches_library_rows() {
    let o = run(&["stats", "--family", "c14", "--n-range", "8..10", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for (row, n) in rows.iter().zip(8..) {
        let lib = codes::best_residues(Family::C14, n).unwrap();
        assert_eq!(row["n"], n);
        assert_eq!(row["code_size"], lib.code_size);
    }
    let text = stdout(&run(&["stats", "--family", "c14", "--n-range", "8..10"]));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn enumerate_writes_codeword_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.txt");
    let o = run(&[
        "enumerate",
        "--family",
        "c14",
        "--n",
        "10",
        "--s0",
        "1",
        "--s1",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let spec = CodeSpec::new(Family::C14, 10).with_residues(recon_ds::Residues {
        s0: 1,
        s1: 3,
        ..Default::default()
    });
    let expected: String = codes::enumerate(&spec)
        .unwrap()
        .iter()
        .map(|w| format!("{w}\n"))
        .collect();
    assert_eq!(fs::read_to_string(&path).unwrap(), expected);
}

#[test]
fn decode_recovers_codeword_from_read_file() {
    let spec = CodeSpec::new(Family::C14, 10);
    let x = codes::enumerate(&spec).unwrap()[5];
    let reads = reconstruct::sample_reads(&x, 14, 11).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reads.txt");
    let body: String = reads.reads.iter().map(|r| format!("{r}\n")).collect();
    fs::write(&path, format!("# sampled reads\n{body}")).unwrap();
    let o = run(&[
        "decode",
        "--family",
        "c14",
        "--n",
        "10",
        "--reads-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), format!("{x}\n"));

    fs::write(&path, "0000\n").unwrap();
    let o = run(&[
        "decode",
        "--family",
        "c14",
        "--n",
        "10",
        "--reads-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn delta_prints_breakdown() {
    let o = run(&[
        "delta", "--x", "0110", "--y", "1001", "--dx", "2", "--ex", "3", "--dy", "4", "--ey", "1",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["identity_holds"], true);
    assert_eq!(v["breakdown"]["total"], v["breakdown"]["direct"]);

    let o = run(&[
        "delta", "--x", "0110", "--y", "1001", "--dx", "1", "--dy", "4",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identical_arguments_give_identical_bytes() {
    for args in [
        &[
            "simulate", "--family", "c14", "--n", "10", "--trials", "40", "--seed", "7", "--json",
        ][..],
        &[
            "verify",
            "--suite",
            "delta",
            "--n",
            "6",
            "--samples",
            "500",
            "--seed",
            "9",
            "--format",
            "json",
        ][..],
        &[
            "verify",
            "--suite",
            "reconstruct",
            "--family",
            "cl",
            "--n",
            "8",
            "--trials",
            "3",
        ][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
