use std::path::PathBuf;
use std::process::{Command, Output};

use entrate::output::EntropyRecord;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_entrate"));
    c.env_remove("ENTRATE_LOG");
    c
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn entrate")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn sweep_reproduces_example_one() {
    let cfg = config("example1.json");
    let out = stdout(&run(&["sweep", cfg.to_str().unwrap(), "--from", "10", "--to", "100", "--step", "10"]));
    assert!(out.starts_with("N,H_N,err_bound\n"));
    assert!(!out.contains('\r'));
    let want = [
        0.71399868740464, 0.70277846315804, 0.70083402087899, 0.70045844593354, 0.70038443295765,
        0.70036979023825, 0.70036689107994, 0.70036631697843, 0.70036620328938, 0.70036618077546,
    ];
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 10);
    for (row, w) in rows.iter().zip(want) {
        let h: f64 = row[1].parse().unwrap();
        assert!((h - w).abs() < 1e-10, "N={}: {h}", row[0]);
    }
}

#[test]
fn sweep_is_cauchy_within_bound() {
    let cfg = config("example2.json");
    let out = stdout(&run(&["sweep", cfg.to_str().unwrap(), "--from", "1", "--to", "40"]));
    let rows: Vec<(f64, f64)> = csv_rows(&out)
        .iter()
        .map(|r| (r[1].parse().unwrap(), r[2].parse().unwrap()))
        .collect();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            // 14 printed digits cost at most 1e-14 of slack each.
            assert!((rows[j].0 - rows[i].0).abs() <= rows[i].1 + 2e-14);
        }
    }
}

#[test]
fn entropy_example_two() {
    let cfg = config("example2.json");
    let out = stdout(&run(&["entropy", cfg.to_str().unwrap(), "--n-terms", "50"]));
    let h = out.lines().find(|l| l.starts_with("H_N")).unwrap();
    assert_eq!(h.split_whitespace().nth(1), Some("0.95961126164044"));
}

#[test]
fn log_base_flag_overrides_config() {
    let cfg = config("example2.json");
    let json = |base: &str| -> EntropyRecord {
        let o = run(&["entropy", cfg.to_str().unwrap(), "--format", "json", "--log-base", base]);
        serde_json::from_str(&stdout(&o)).unwrap()
    };
    let (q, two, e) = (json("q"), json("2"), json("e"));
    assert_eq!(two.log_base, "2");
    assert!((two.h_n - q.h_n * 3f64.log2()).abs() < 1e-12);
    assert!((e.h_n - q.h_n * 3f64.ln()).abs() < 1e-12);
}

#[test]
fn json_round_trip_is_exact() {
    let cfg = config("example1.json");
    let o = run(&["entropy", cfg.to_str().unwrap(), "--format", "json"]);
    let text = stdout(&o);
    let rec: EntropyRecord = serde_json::from_str(&text).unwrap();
    let model = entrate_core::validate_model(&[[0.85, 0.15], [0.28, 0.72]], &[0.01]).unwrap();
    let direct = entrate_core::entropy_rate(&model, 100, entrate_core::LogBase::Two).unwrap();
    assert_eq!(rec.h_n.to_bits(), direct.h_n.to_bits());
    assert_eq!(rec.err_bound, direct.err_bound);
    assert_eq!(serde_json::to_string(&rec).unwrap() + "\n", text);
    for key in ["\"q\"", "\"N\"", "\"log_base\"", "\"H_N\"", "\"err_bound\"", "\"gamma_hat\"", "\"r\"", "\"phi_hat\"", "\"A_dagger_norm\""] {
        assert!(text.contains(key), "{key}");
    }
}

#[test]
fn support_csv_layout() {
    let cfg = config("example2.json");
    let out = stdout(&run(&["support", cfg.to_str().unwrap(), "--n-terms", "5"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("j,m,w_0,w_1,w_2,c"));
    let rows = csv_rows(&out);
    // Two chains, m = 0..=5 each.
    assert_eq!(rows.len(), 12);
    for r in &rows {
        let w: f64 = r[2..5].iter().map(|x| x.parse::<f64>().unwrap()).sum();
        assert!((w - 1.0).abs() < 1e-12);
    }
    assert_eq!(rows[0][5], "1.0000000000000");
}

#[test]
fn oracle_csv_matches_library() {
    let cfg = config("example1.json");
    let out = stdout(&run(&["oracle", cfg.to_str().unwrap(), "--block-len", "8"]));
    assert!(out.starts_with("k,S_k,rate_avg,rate_cond\n"));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 8);
    let s1: f64 = rows[0][1].parse().unwrap();
    // Single-symbol entropy of the stationary output law.
    let pi1: f64 = 0.15 / 0.43;
    let p1 = (1.0 - 0.01) * pi1;
    let h = -(p1 * p1.log2() + (1.0 - p1) * (1.0 - p1).log2());
    assert!((s1 - h).abs() < 1e-12);
}

#[test]
fn validate_reports_ok() {
    for name in ["example1.json", "example2.json", "example1_fig2.json"] {
        let o = run(&["validate", config(name).to_str().unwrap()]);
        let text = stdout(&o);
        assert!(!text.contains("FAILED"), "{name}: {text}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    };
    let code = |args: &[&str]| run(args).status.code().unwrap();

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&["entropy", missing.to_str().unwrap()]), 3);

    let broken = write("broken.json", "{\"q\": 2,");
    assert_eq!(code(&["entropy", broken.to_str().unwrap()]), 1);

    let bad_row = write("bad_row.json", r#"{"q": 2, "transition": [[0.5, 0.6], [0.5, 0.5]], "epsilon": [0.1]}"#);
    let o = run(&["entropy", bad_row.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");

    let bad_eps = write("bad_eps.json", r#"{"q": 2, "transition": [[0.5, 0.5], [0.5, 0.5]], "epsilon": [1.5]}"#);
    assert_eq!(code(&["entropy", bad_eps.to_str().unwrap()]), 1);

    let extra = write("extra.json", r#"{"q": 2, "transition": [[0.5, 0.5], [0.5, 0.5]], "epsilon": [0.1], "x": 1}"#);
    assert_eq!(code(&["entropy", extra.to_str().unwrap()]), 1);

    let cfg = config("example1.json");
    assert_eq!(code(&["entropy", cfg.to_str().unwrap(), "--log-base", "10"]), 1);
    assert_eq!(code(&["sweep", cfg.to_str().unwrap(), "--from", "5", "--to", "1"]), 1);
    assert_eq!(code(&["sweep", cfg.to_str().unwrap(), "--from", "1", "--to", "5", "--step", "0"]), 1);
    assert_eq!(code(&["oracle", cfg.to_str().unwrap(), "--block-len", "40"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&[]), 1);
}

#[test]
fn logging_stays_off_stdout() {
    let cfg = config("example1.json");
    let quiet = run(&["entropy", cfg.to_str().unwrap(), "--format", "json"]);
    let loud = bin()
        .env("ENTRATE_LOG", "debug")
        .args(["entropy", cfg.to_str().unwrap(), "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(quiet.stderr.is_empty());
    assert!(!loud.stderr.is_empty());
}
