use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn toy() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/toy")
}

fn relalign(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relalign"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn parse_check_reports_coverage() {
    let wn = toy().join("wordnet");
    let o = relalign(&["parse-check", "--wordnet-dir", s(&wn)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("synsets\t39"), "{out}");
    assert!(out.contains("hypernym_coverage\t0.9744"), "{out}");
}

#[test]
fn report_from_config_with_flag_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = toy().join("config.toml");
    let o = relalign(&["report", "--config", s(&cfg), "--out", s(tmp.path()), "--seed", "7"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("report.json")).unwrap()).unwrap();
    let config = &report["provenance"]["config"];
    assert_eq!(config["seed"], 7);
    assert_eq!(config["threshold_step"], 0.05);
    assert_eq!(config["unrelated_pairs"], 200);
    assert!(tmp.path().join("figures/mismatch_matrix.svg").exists());
    assert!(tmp.path().join("curve_hyp.csv").exists());
}

#[test]
fn missing_wordnet_fails_with_stage_tag() {
    let tmp = tempfile::tempdir().unwrap();
    let responses = toy().join("responses.tsv");
    let o = relalign(&[
        "report",
        "--wordnet-dir",
        s(&tmp.path().join("nowhere")),
        "--responses",
        s(&responses),
        "--out",
        s(tmp.path()),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("[parse] missing WordNet file"), "{}", stderr(&o));
}

#[test]
fn invalid_settings_are_rejected() {
    let wn = toy().join("wordnet");
    let responses = toy().join("responses.tsv");
    let o = relalign(&["classify", "--wordnet-dir", s(&wn), "--responses", s(&responses), "--alpha", "1.5"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("[config]"), "{}", stderr(&o));
    let o = relalign(&["classify", "--scorer", "bert"]);
    assert!(!o.status.success());
    let o = relalign(&["classify", "--wordnet-dir", s(&wn)]);
    assert!(stderr(&o).contains("--responses"), "{}", stderr(&o));
}

#[test]
fn staged_runs_reuse_classified_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = toy().join("config.toml");
    let out = tmp.path();
    let o = relalign(&["classify", "--config", s(&cfg), "--out", s(out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("triplets\t73"));
    let classified = out.join("classified.csv");

    let o = relalign(&["analyze", "--config", s(&cfg), "--out", s(out), "--classified", s(&classified)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = relalign(&["gloss", "--config", s(&cfg), "--out", s(out), "--classified", s(&classified)]);
    assert!(o.status.success(), "{}", stderr(&o));

    // staged outputs agree with the single-shot golden files
    let golden = toy().join("golden");
    for name in ["association.csv", "mismatch_matrix.csv", "distance_corr.csv", "gloss_sim.csv", "tests.csv"] {
        assert_eq!(
            fs::read_to_string(out.join(name)).unwrap(),
            fs::read_to_string(golden.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn generate_tasks_writes_partitioned_sentences() {
    let tmp = tempfile::tempdir().unwrap();
    let seeds = toy().join("seeds.csv");
    let allow = toy().join("allowlist.txt");
    let o = relalign(&[
        "generate-tasks",
        "--seeds",
        s(&seeds),
        "--allowlist",
        s(&allow),
        "--subsets",
        "12",
        "--out",
        s(tmp.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("subsets\t12"), "{out}");
    let tasks = fs::read_to_string(tmp.path().join("tasks.csv")).unwrap();
    assert!(tasks.starts_with("subset,template_id,relation,target,rendered\n"));
    // the unicorn seed is outside the allowlist
    assert!(!tasks.contains("unicorn"));
    let again = tempfile::tempdir().unwrap();
    relalign(&["generate-tasks", "--seeds", s(&seeds), "--allowlist", s(&allow), "--subsets", "12", "--out", s(again.path())]);
    assert_eq!(tasks, fs::read_to_string(again.path().join("tasks.csv")).unwrap());
}
