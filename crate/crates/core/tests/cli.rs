use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_research-excellence");

fn cli(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn demo_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/demo.json")
}

/// A run directory with researchers.csv, publications.csv and run.json.
struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new(researchers: &str, publications: &str) -> Self {
        Self::with_run(researchers, publications, serde_json::json!({}))
    }

    fn with_run(researchers: &str, publications: &str, extra: serde_json::Value) -> Self {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("researchers.csv"),
            format!("id,field_id,discipline_id,rank,active_years,organization_id\n{researchers}"),
        )
        .unwrap();
        fs::write(
            dir.path().join("publications.csv"),
            format!("id,year,citations,subject_categories,byline\n{publications}"),
        )
        .unwrap();
        let mut run = serde_json::json!({
            "researchers": "researchers.csv",
            "publications": "publications.csv",
            "window": {"start_year": 2004, "end_year": 2008},
        });
        for (k, v) in extra.as_object().unwrap() {
            run[k] = v.clone();
        }
        fs::write(dir.path().join("run.json"), run.to_string()).unwrap();
        Self { dir }
    }

    fn run_json(&self) -> String {
        self.path("run.json")
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.dir.path().join(name)).unwrap()
    }
}

fn small_generated(seed: u64) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("gen.json");
    fs::write(
        &config,
        serde_json::json!({
            "seed": seed,
            "n_disciplines": 2,
            "fields_per_discipline": 2,
            "researchers_per_field": {"min": 40, "max": 40},
            "n_publications": 1500,
            "low_coverage_fields": 0,
        })
        .to_string(),
    )
    .unwrap();
    let d = dir.path().to_str().unwrap();
    let o = cli(&["generate", "--config", config.to_str().unwrap(), "--out", d]);
    assert!(o.status.success(), "{}", stderr(&o));
    dir
}

fn run_all(dir: &Path) {
    let run = dir.join("run.json");
    let run = run.to_str().unwrap();
    for cmd in ["compute", "analyze"] {
        let o = cli(&[cmd, "--config", run]);
        assert!(o.status.success(), "{cmd}: {}", stderr(&o));
    }
}

fn csv_column(text: &str, column: &str) -> Vec<String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let idx = reader.headers().unwrap().iter().position(|h| h == column).expect("column exists");
    reader.records().map(|r| r.unwrap()[idx].to_string()).collect()
}

#[test]
fn broken_reference_is_one_violation_with_exit_1() {
    let fixture = Fixture::new(
        "x,F1,D1,full,5,U1\n",
        "p1,2006,3,A,1|x|U1\np2,2006,1,A,1|ghost|U1\n",
    );
    let first = cli(&["validate", "--config", &fixture.run_json()]);
    assert_eq!(first.status.code(), Some(1));
    let out = stdout(&first);
    assert!(out.contains("ghost"), "{out}");
    assert!(out.trim_end().ends_with("1 violation(s)"), "{out}");
    let second = cli(&["validate", "--config", &fixture.run_json()]);
    assert_eq!(first.stdout, second.stdout);

    // compute refuses the same corpus as invalid input
    let compute = cli(&["compute", "--config", &fixture.run_json()]);
    assert_eq!(compute.status.code(), Some(1), "{}", stderr(&compute));
}

#[test]
fn hand_corpus_fss_through_compute() {
    let fixture = Fixture::new(
        "x,F1,D1,full,4,U1\ny,F1,D1,full,3,U1\n",
        "p1,2006,4,A,1|x|U1;2|-|U2\n\
         p2,2006,0,B,1|x|U1\n\
         p3,2006,9,C,1|x|U1;2|-|U3;3|-|U4\n\
         q1,2006,1,C,1|y|U1\nq2,2006,1,C,1|y|U1\nq3,2006,1,C,1|y|U1\n",
    );
    let o = cli(&["compute", "--config", &fixture.run_json()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let fss = fixture.read("out/fss.csv");
    let ids = csv_column(&fss, "researcher_id");
    let values = csv_column(&fss, "fss");
    let x = ids.iter().position(|id| id == "x").unwrap();
    assert_eq!(values[x].parse::<f64>().unwrap(), 0.375);

    let manifest: serde_json::Value = serde_json::from_str(&fixture.read("out/manifest.json")).unwrap();
    assert_eq!(manifest["counts"]["publications"], 6);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn external_baseline_replaces_the_corpus_one() {
    let researchers = "x,F1,D1,full,5,U1\n";
    let publications = "p1,2006,6,A,1|x|U1\n";
    let internal = Fixture::new(researchers, publications);
    assert!(cli(&["compute", "--config", &internal.run_json()]).status.success());
    assert_eq!(csv_column(&internal.read("out/fss.csv"), "fss"), ["0.2"]);

    let external = Fixture::with_run(researchers, publications, serde_json::json!({"baselines": "world.csv"}));
    fs::write(
        external.path("world.csv"),
        "year,category,mean_citations,n_cited\n2006,A,2.0,1000\n",
    )
    .unwrap();
    let o = cli(&["compute", "--config", &external.run_json()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(csv_column(&external.read("out/fss.csv"), "fss"), ["0.6"]);
}

#[test]
fn analyze_all_writes_five_reports() {
    let dir = small_generated(5);
    run_all(dir.path());
    for name in ["overlap", "producers", "correlation", "distribution", "case_control"] {
        let path = dir.path().join(format!("out/{name}.csv"));
        let text = fs::read_to_string(&path).unwrap_or_else(|_| panic!("{} missing", path.display()));
        assert!(text.lines().count() > 1, "{name} is empty");
    }
}

#[test]
fn markdown_and_json_reports() {
    let dir = small_generated(6);
    let run = dir.path().join("run.json");
    let run = run.to_str().unwrap();
    assert!(cli(&["compute", "--config", run]).status.success());
    for (format, ext) in [("markdown", "md"), ("json", "json")] {
        let o = cli(&["analyze", "--config", run, "--which", "overlap", "--format", format]);
        assert!(o.status.success(), "{}", stderr(&o));
        let text = fs::read_to_string(dir.path().join(format!("out/overlap.{ext}"))).unwrap();
        match ext {
            "md" => assert!(text.starts_with("## overlap")),
            _ => assert!(serde_json::from_str::<serde_json::Value>(&text).unwrap().is_array()),
        }
    }
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    for sub in [dir.to_path_buf(), dir.join("out")] {
        for entry in fs::read_dir(&sub).unwrap() {
            let path = entry.unwrap().path();
            if path.is_file() && path.file_name().unwrap() != "gen.json" {
                let rel = path.strip_prefix(dir).unwrap().display().to_string();
                files.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn reruns_are_byte_identical_and_seeds_matter() {
    let a = small_generated(9);
    let b = small_generated(9);
    let c = small_generated(10);
    for d in [&a, &b, &c] {
        run_all(d.path());
    }
    let (sa, sb, sc) = (snapshot(a.path()), snapshot(b.path()), snapshot(c.path()));
    assert!(sa.len() > 10);
    assert_eq!(sa, sb);
    let same = |name: &str| {
        let get = |s: &[(String, Vec<u8>)]| s.iter().find(|(n, _)| n == name).unwrap().1.clone();
        get(&sa) == get(&sc)
    };
    assert!(!same("publications.csv"));
    assert!(!same("out/overlap.csv"));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = cli(&["generate", "--out", d, "--seed", "77"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let truth: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ground_truth.json")).unwrap()).unwrap();
    assert_eq!(truth["seed"], 77);
}

#[test]
fn analyze_before_compute_names_the_missing_step() {
    let dir = small_generated(3);
    let run = dir.path().join("run.json");
    let o = cli(&["analyze", "--config", run.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("not found") && err.contains("research-excellence compute"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cli(&["compute"]).status.code(), Some(2));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    let dir = small_generated(4);
    let run = dir.path().join("run.json");
    let o = cli(&["analyze", "--config", run.to_str().unwrap(), "--which", "everything"]);
    assert_eq!(o.status.code(), Some(2));
}

/// One discipline of assistant professors with the 2×2 cells 51, 571, 12,
/// 3963, fed to `analyze` as precomputed artifacts.
#[test]
fn case_control_micro_fixture_reports_the_known_odds_ratio() {
    let (a, b, c, d) = (51, 571, 12, 3963);
    let mut researchers = String::new();
    let mut publications = String::new();
    let mut rankings = String::from("field_id,researcher_id,fss,percentile,is_ts\n");
    let mut hcas = String::from("publication_id\n");
    let groups = [(a, true, true), (b, false, true), (c, true, false), (d, false, false)];
    let mut n = 0;
    for (count, ts, case) in groups {
        for _ in 0..count {
            n += 1;
            let id = format!("r{n:05}");
            researchers.push_str(&format!("{id},F1,D1,assistant,5,U1\n"));
            let pid = format!("p{n:05}");
            publications.push_str(&format!("{pid},2006,{},A,1|{id}|U1\n", if case { 50 } else { 1 }));
            if case {
                hcas.push_str(&format!("{pid}\n"));
            }
            let pct = if ts { 99.0 } else { 10.0 };
            rankings.push_str(&format!("F1,{id},1.0,{pct},{ts}\n"));
        }
    }
    let fixture = Fixture::new(&researchers, &publications);
    fs::create_dir_all(fixture.path("out")).unwrap();
    fs::write(fixture.path("out/rankings.csv"), rankings).unwrap();
    fs::write(fixture.path("out/hcas.csv"), hcas).unwrap();
    fs::write(fixture.path("out/hca_thresholds.csv"), "year,category,min_citations_inclusive\n2006,A,50\n").unwrap();
    let manifest = serde_json::json!({
        "tool": "research-excellence",
        "version": "0",
        "config_hash": "",
        "artifacts": {"rankings": "rankings.csv", "hcas": "hcas.csv", "hca_thresholds": "hca_thresholds.csv"},
        "counts": {},
    });
    fs::write(fixture.path("out/manifest.json"), manifest.to_string()).unwrap();

    let o = cli(&["analyze", "--config", &fixture.run_json(), "--which", "case_control", "--rank", "assistant"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = fixture.read("out/case_control.csv");
    let disciplines = csv_column(&report, "discipline_id");
    let row = disciplines.iter().position(|x| x == "D1").unwrap();
    assert_eq!(csv_column(&report, "or")[row], "29.5");
    assert_eq!(csv_column(&report, "ci_low")[row], "15.6");
    assert_eq!(csv_column(&report, "ci_high")[row], "55.7");
    assert_eq!(csv_column(&report, "a_ts_cases")[row], "51");
    assert_eq!(csv_column(&report, "d_nonts_controls")[row], "3963");
}

#[test]
fn distribution_report_relative_column_sums_to_100() {
    let dir = small_generated(8);
    run_all(dir.path());
    let text = fs::read_to_string(dir.path().join("out/distribution.csv")).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut sums: std::collections::BTreeMap<(String, String), f64> = Default::default();
    for record in reader.records() {
        let r = record.unwrap();
        *sums.entry((r[0].to_string(), r[1].to_string())).or_default() += r[6].parse::<f64>().unwrap();
    }
    assert!(!sums.is_empty());
    for (key, sum) in sums {
        assert!((sum - 100.0).abs() < 1e-9, "{key:?} sums to {sum}");
    }
}

#[test]
fn bundled_demo_config_generates_a_valid_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = cli(&["generate", "--config", demo_config().to_str().unwrap(), "--out", d]);
    assert!(o.status.success(), "{}", stderr(&o));
    let run = dir.path().join("run.json");
    let o = cli(&["validate", "--config", run.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 violation(s)"));
}
