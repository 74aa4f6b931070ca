use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use apls_core::generators::{generate, FamilySpec};
use apls_core::labeling::ProofLabeling;
use apls_core::separators::path_shift_distribution;

fn apls(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apls")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("apls-cli-{name}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn path(&self, file: &str) -> String {
        self.0.join(file).to_str().unwrap().to_string()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn ok(args: &[&str]) -> Output {
    let out = apls(args);
    assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn report_value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in report"))
        .to_string()
}

#[test]
fn path_pipeline_end_to_end() {
    let s = Scratch::new("path");
    let (g, l, part) = (s.path("g"), s.path("l"), s.path("p"));
    ok(&["gen", "--family", "path", "--n", "100", "--out", &g]);
    let prove = ok(&["prove", "--graph", &g, "--r", "5", "--eps-prime", "1/2", "--out", &l]);
    assert!(String::from_utf8_lossy(&prove.stderr).contains("eps_measured = 2/7"));
    let verify = ok(&["verify", "--graph", &g, "--labels", &l]);
    assert_eq!(String::from_utf8_lossy(&verify.stdout), "verdict accept\n");
    ok(&["extract", "--graph", &g, "--labels", &l, "--out", &part]);
    assert!(fs::read_to_string(&part).unwrap().starts_with("partition 100 "));
    let report = String::from_utf8(ok(&["report", "--graph", &g, "--labels", &l]).stdout).unwrap();
    assert_eq!(report_value(&report, "verdict"), "accept");
    assert_eq!(report_value(&report, "alpha"), "154");
    assert_eq!(report_value(&report, "edit_bound"), "9/100");
    assert_eq!(report_value(&report, "certified_edit_fraction"), "1/1");
}

#[test]
fn expander_prover_declines() {
    let s = Scratch::new("rr");
    let g = s.path("g");
    ok(&["gen", "--family", "random-regular", "--n", "200", "3", "--seed", "42", "--out", &g]);
    let out = apls(&["prove", "--graph", &g, "--r", "3", "--eps-prime", "3/10"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("witness too rough"));
}

#[test]
fn rejections_and_format_errors() {
    let s = Scratch::new("reject");
    let (g, l, bad, other) = (s.path("g"), s.path("l"), s.path("bad"), s.path("other"));
    ok(&["gen", "--family", "cycle", "--n", "40", "--out", &g]);
    ok(&["gen", "--family", "path", "--n", "41", "--out", &other]);
    ok(&["prove", "--graph", &g, "--r", "3", "--eps-prime", "3/5", "--out", &l]);

    let mut labeling = ProofLabeling::from_text(&fs::read_to_string(&l).unwrap()).unwrap();
    labeling.labels[7].table[0] += 1;
    fs::write(&bad, labeling.to_text()).unwrap();
    let verify = apls(&["verify", "--graph", &g, "--labels", &bad]);
    assert_eq!(code(&verify), 1);
    assert!(String::from_utf8_lossy(&verify.stdout).starts_with("verdict reject\nreject "));
    assert_eq!(code(&apls(&["extract", "--graph", &g, "--labels", &bad])), 1);

    // Mismatched graph and labels.
    assert_eq!(code(&apls(&["verify", "--graph", &other, "--labels", &l])), 2);
    // Garbage files, missing files, bad flags.
    fs::write(&bad, "labels nonsense\n").unwrap();
    assert_eq!(code(&apls(&["verify", "--graph", &g, "--labels", &bad])), 2);
    assert_eq!(code(&apls(&["verify", "--graph", &g, "--labels", &s.path("missing")])), 2);
    assert_eq!(code(&apls(&["prove", "--graph", &g, "--r", "3"])), 2);
    assert_eq!(code(&apls(&["prove", "--graph", &g, "--r", "3", "--eps-prime", "0.5"])), 2);
    assert_eq!(code(&apls(&["prove", "--graph", &g, "--eps-prime", "1/2", "--witness", "magic"])), 2);
    assert_eq!(code(&apls(&["gen", "--family", "grid", "--n", "3"])), 2);
    assert_eq!(code(&apls(&["gen", "--family", "grid", "--n", "0", "3"])), 1);
    assert_eq!(code(&apls(&["verify", "--graph", &g, "--labels", &l, "--predicate", "bipartite"])), 2);
    // The header certifies d^2 eps' / 2 = 6/5 here.
    assert_eq!(code(&apls(&["verify", "--graph", &g, "--labels", &l, "--eps", "1/2"])), 2);
    ok(&["verify", "--graph", &g, "--labels", &l, "--eps", "6/5"]);
    // Alpha below the required value.
    assert_eq!(code(&apls(&["prove", "--graph", &g, "--r", "3", "--eps-prime", "3/5", "--alpha", "5"])), 1);
}

#[test]
fn witness_sources() {
    let s = Scratch::new("witness");
    let (g, sep, l, t, tl) = (s.path("g"), s.path("sep"), s.path("l"), s.path("t"), s.path("tl"));
    ok(&["gen", "--family", "path", "--n", "60", "--out", &g]);
    let graph = generate(&FamilySpec::Path { n: 60 }).unwrap();
    fs::write(&sep, path_shift_distribution(&graph, 8).unwrap().to_text()).unwrap();
    let sep_arg = format!("separators:{sep}");
    let prove = ok(&["prove", "--graph", &g, "--eps-prime", "3/4", "--witness", &sep_arg, "--out", &l]);
    assert!(String::from_utf8_lossy(&prove.stderr).contains("witness = separators"));
    ok(&["verify", "--graph", &g, "--labels", &l]);

    ok(&["gen", "--family", "tree", "--n", "2", "6", "--out", &t]);
    let prove = ok(&["prove", "--graph", &t, "--eps-prime", "3/4", "--witness", "auto", "--k-shift", "6", "--out", &tl]);
    assert!(String::from_utf8_lossy(&prove.stderr).contains("witness = tree-shift"));
    ok(&["verify", "--graph", &t, "--labels", &tl]);

    // --eps alone targets eps' = 2 eps / d^2; d = 2 gives eps' = eps / 2.
    let prove = ok(&["prove", "--graph", &g, "--r", "6", "--eps", "1", "--K", "30", "--out", &l]);
    assert!(String::from_utf8_lossy(&prove.stderr).contains("eps_measured = 1/4"));
    let header = fs::read_to_string(&l).unwrap();
    assert!(header.lines().next().unwrap().ends_with(" 1/2 30"), "{header}");
    ok(&["verify", "--graph", &g, "--labels", &l, "--eps", "1"]);
}

fn pipeline_outputs(s: &Scratch, jobs: &str) -> Vec<Vec<u8>> {
    let file = |name: &str| s.path(&format!("{name}-{jobs}"));
    let (g, l, p, rr) = (file("g"), file("l"), file("p"), file("rr"));
    let j = ["--jobs", jobs];
    ok(&[&j[..], &["gen", "--family", "grid", "--n", "12", "12", "--out", &g]].concat());
    ok(&[&j[..], &["gen", "--family", "random-regular", "--n", "200", "3", "--seed", "42", "--out", &rr]].concat());
    let prove = ok(&[&j[..], &["prove", "--graph", &g, "--r", "3", "--eps-prime", "9/10", "--out", &l]].concat());
    let verify = ok(&[&j[..], &["verify", "--graph", &g, "--labels", &l]].concat());
    let extract = ok(&[&j[..], &["extract", "--graph", &g, "--labels", &l, "--out", &p]].concat());
    let report = ok(&[&j[..], &["report", "--graph", &g, "--labels", &l]].concat());
    let read = |f: &str| fs::read(Path::new(f)).unwrap();
    vec![read(&g), read(&rr), read(&l), read(&p), prove.stderr, verify.stdout, extract.stderr, report.stdout]
}

#[test]
fn outputs_independent_of_jobs_and_reruns() {
    let s = Scratch::new("jobs");
    let reference = pipeline_outputs(&s, "1");
    for jobs in ["1", "2", "4"] {
        assert!(pipeline_outputs(&s, jobs) == reference, "--jobs {jobs} changed an output");
    }
    assert_eq!(code(&apls(&["--jobs", "0", "gen", "--family", "path", "--n", "3"])), 2);
}
