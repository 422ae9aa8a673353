use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command as Process;

use sseq_engine::{run, Command, Failure, Report, RunConfig, Status};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

/// Every shipped config with its command and expected exit code.
const SHIPPED: &[(&str, &str, i32)] = &[
    ("bpgl2-solve.json", "solve", 0),
    ("bpgl3-solve.json", "solve", 0),
    ("bpgl3-pages.json", "pages", 0),
    ("bbgm-solve.json", "solve", 0),
    ("bbgm-pages.json", "pages", 0),
    ("sb2-split-pages.json", "pages", 0),
    ("sb5-solve.json", "solve", 0),
    ("sb3-symbolic-chow.json", "sb-chow", 0),
    ("sb3-split-chow.json", "sb-chow", 0),
    ("torsion-15.json", "torsion", 0),
    ("torsion-4.json", "torsion", 0),
    ("ambiguous-field.json", "solve", 1),
];

fn engine(command: &str, config: &Path, out: &Path) -> (i32, String) {
    let o = Process::new(env!("CARGO_BIN_EXE_engine")).args([command, "--config"]).arg(config).arg("--out").arg(out).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap())
}

#[test]
fn shipped_configs_cover_the_directory() {
    let mut names: Vec<String> = fs::read_dir(configs()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    let mut listed: Vec<String> = SHIPPED.iter().map(|(n, _, _)| n.to_string()).collect();
    listed.sort();
    assert_eq!(names, listed);
}

#[test]
fn runs_are_deterministic_and_both_renderings_agree() {
    for &(name, command, code) in SHIPPED {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let (ca, stdout) = engine(command, &configs().join(name), a.path());
        let (cb, _) = engine(command, &configs().join(name), b.path());
        assert_eq!((ca, cb), (code, code), "{name}");
        for ext in ["json", "txt"] {
            let file = format!("{command}.{ext}");
            assert_eq!(fs::read(a.path().join(&file)).unwrap(), fs::read(b.path().join(&file)).unwrap(), "{name}: {file}");
        }
        let json = Report::from_json(&fs::read_to_string(a.path().join(format!("{command}.json"))).unwrap()).unwrap();
        let text = fs::read_to_string(a.path().join(format!("{command}.txt"))).unwrap();
        assert_eq!(stdout, text);
        assert_eq!(Report::from_text(&text).unwrap(), json, "{name}");
        assert_eq!(json.status.exit_code(), code);
    }
}

#[test]
fn second_run_comes_from_the_cache() {
    let out = tempfile::tempdir().unwrap();
    let config = configs().join("bpgl3-solve.json");
    let first = run(Command::Solve, &config, out.path()).unwrap();
    assert!(!first.from_cache);
    let key = &first.report.config_hash;
    assert!(out.path().join("cache").join(key).join("report.json").is_file());
    let second = run(Command::Solve, &config, out.path()).unwrap();
    assert!(second.from_cache);
    assert_eq!(first.report, second.report);
    // Whitespace and key order do not change the key.
    let cfg = RunConfig::parse(&fs::read_to_string(&config).unwrap()).unwrap();
    let respaced = out.path().join("respaced.json");
    fs::write(&respaced, cfg.canonical()).unwrap();
    assert!(run(Command::Solve, &respaced, out.path()).unwrap().from_cache);
}

#[test]
fn configuration_errors_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("solve", r#"{"instance": {"kind": "bpgl", "n": 1}}"#),
        ("solve", r#"{"instance": {"kind": "bpgl", "n": 3}, "bogus": true}"#),
        ("solve", r#"{"instance": {"kind": "bpgl", "n": 3}, "window": {"p_min": 4, "p_max": 2, "q_max": 1}}"#),
        ("pages", r#"{"command": "solve", "instance": {"kind": "bbgm"}}"#),
        ("sb-chow", r#"{"instance": {"kind": "bpgl", "n": 3}}"#),
        ("sb-chow", r#"{"instance": {"kind": "sb", "n": 4, "order": 3}}"#),
        ("torsion", r#"{"torsion": {"primes": [9], "k_max": 1}}"#),
        ("torsion", r#"{"torsion": {"primes": [2], "k_max": 1}}"#),
        ("torsion", r#"{"instance": {"kind": "bbgm"}}"#),
        ("solve", r#"{"instance": {"kind": "bbgm"}, "field": {"overrides": [{"p": 3, "q": 1, "group": {"free": 1}}]}}"#),
        ("solve", "not json"),
    ];
    for (i, (command, body)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad{i}.json"));
        fs::write(&path, body).unwrap();
        assert_eq!(engine(command, &path, &dir.path().join("out")).0, 3, "{body}");
    }
    assert_eq!(engine("solve", &dir.path().join("missing.json"), dir.path()).0, 3);
    assert_eq!(engine("frobnicate", &configs().join("bpgl2-solve.json"), dir.path()).0, 3);
}

#[test]
fn inconsistencies_exit_with_two() {
    let f: Failure = sseq_core::Error::Inconsistent("H^{1,1} is both K and Z".into()).into();
    assert_eq!(f.exit_code(), 2);
    assert_eq!(Status::Inconsistent.exit_code(), 2);
    let f: Failure = sseq_core::Error::InvalidInstance("n = 1".into()).into();
    assert_eq!(f.exit_code(), 3);
}

fn table_cell(r: &Report, title: &str, key: &[&str], column: &str) -> String {
    r.table(title).unwrap_or_else(|| panic!("no table {title}")).lookup(key, column).unwrap_or_else(|| panic!("no row {key:?} in {title}")).to_string()
}

#[test]
fn command_examples() {
    let go = |name: &str, command: Command| {
        let out = tempfile::tempdir().unwrap();
        run(command, &configs().join(name), out.path()).unwrap().report
    };
    let r = go("bpgl3-pages.json", Command::Pages);
    assert_eq!(table_cell(&r, "E_1", &["2", "1", "1"], "entry"), "Z");
    assert_eq!(table_cell(&r, "E_1", &["2", "1", "1"], "note"), "ker d_1 has index 3");
    assert_eq!(table_cell(&r, "E_2", &["2", "1", "1"], "entry"), "Z");

    let r = go("bbgm-pages.json", Command::Pages);
    assert_eq!(table_cell(&r, "E_1", &["3", "1", "0"], "entry"), "Z");
    // The total space is a point: d_1 is an isomorphism and both ends die.
    assert_eq!(table_cell(&r, "E_1", &["2", "1", "1"], "target"), "(3,1,0)");
    let e_inf = r.table("E_∞").unwrap();
    assert_eq!(e_inf.rows.iter().map(|row| row[..4].join(" ")).collect::<Vec<_>>(), ["0 0 0 Z", "1 1 0 K"]);

    let r = go("sb2-split-pages.json", Command::Pages);
    assert!(r.table("E_1").unwrap().rows.iter().all(|row| row[4] == "0"));
    assert!(r.notes.iter().any(|n| n.contains("degenerates")));

    let r = go("bpgl2-solve.json", Command::Solve);
    assert_eq!(table_cell(&r, "H^{p,q}(BPGL_2)", &["3", "1"], "group"), "Z/2");
    assert_eq!(table_cell(&r, "H^{p,q}(BPGL_2)", &["6", "2"], "group"), "Z/2");
    let r = go("bpgl3-solve.json", Command::Solve);
    assert_eq!(table_cell(&r, "H^{p,q}(BPGL_3)", &["6", "2"], "group"), "0");
    assert_eq!(table_cell(&r, "checks", &["vanishing"], "passed"), "yes");
    assert_eq!(table_cell(&r, "checks", &["invert-n"], "passed"), "yes");

    let r = go("sb5-solve.json", Command::Solve);
    assert_eq!(table_cell(&r, "CH^2", &["group"], "value"), "Z/5 ⊕ Z");

    let r = go("torsion-15.json", Command::Torsion);
    let primes: std::collections::BTreeSet<String> = r.table("torsion classes").unwrap().rows.iter().map(|row| row[1].clone()).collect();
    assert_eq!(primes.into_iter().collect::<Vec<_>>(), ["3", "5"]);
    assert_eq!(table_cell(&r, "torsion classes", &["z", "3", "1"], "degree"), "19");
    assert_eq!(table_cell(&r, "torsion classes", &["z", "3", "1"], "weight"), "9");

    let r = go("torsion-4.json", Command::Torsion);
    assert!(r.table("torsion classes").unwrap().rows.is_empty());
    assert!(r.notes.iter().any(|n| n.contains("no odd prime")));
}
