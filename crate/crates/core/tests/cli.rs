//! End-to-end tests of the command-line binary: exit codes, artifact
//! shapes, composability between subcommands, and configuration plumbing.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use moto::density::local_density;
use moto::distance::all_pairs;
use moto::graph::CollaborationGraph;
use moto::synthetic::{planted_clique_ring, random_graph, PlantedConfig};
use moto::team::TeamJson;

fn moto_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moto"))
}

fn run(args: &[&str]) -> Output {
    moto_bin().args(args).output().expect("spawn moto")
}

fn run_ok(args: &[&str]) -> String {
    let output = run(args);
    assert!(
        output.status.success(),
        "moto {args:?} failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).expect("utf-8 stdout")
}

fn planted_snapshot(dir: &Path) -> CollaborationGraph {
    let fixture = planted_clique_ring(&PlantedConfig::default()).unwrap();
    fixture.graph.write_snapshot(dir).unwrap();
    fixture.graph
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap())
        .unwrap_or_else(|err| panic!("malformed JSON at {}: {err}", path.display()))
}

struct Workspace {
    _tmp: tempfile::TempDir,
    root: PathBuf,
}

impl Workspace {
    fn new() -> Self {
        let tmp = tempfile::tempdir().unwrap();
        let root = tmp.path().to_path_buf();
        Workspace { _tmp: tmp, root }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }
}

#[test]
fn exit_codes_for_usage_and_help() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["evaluate", "--help"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["no-such-subcommand"]).status.code(), Some(1));
    assert_eq!(run(&["recognize"]).status.code(), Some(1));
}

#[test]
fn missing_graph_is_a_data_error() {
    let ws = Workspace::new();
    let output = run(&[
        "recognize",
        "--graph",
        &ws.arg("absent"),
        "--out",
        &ws.arg("out"),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        !ws.path("out").exists(),
        "failed run must not create outputs"
    );
    assert!(!String::from_utf8_lossy(&output.stderr).is_empty());
}

#[test]
fn evaluate_without_teams_file_writes_nothing() {
    let ws = Workspace::new();
    planted_snapshot(&ws.path("graph"));
    let output = run(&[
        "evaluate",
        "--graph",
        &ws.arg("graph"),
        "--teams",
        &ws.arg("no-teams.json"),
        "--out",
        &ws.arg("out"),
    ]);
    assert_ne!(output.status.code(), Some(0));
    assert!(!ws.path("out").exists());
}

#[test]
fn recognize_reruns_are_identical_and_feed_evaluate() {
    let ws = Workspace::new();
    planted_snapshot(&ws.path("graph"));
    let recognize = |out: &str| {
        run_ok(&[
            "recognize",
            "--graph",
            &ws.arg("graph"),
            "--out",
            &ws.arg(out),
            "--set",
            "dc=0.5",
            "--set",
            "centers=top:5",
        ]);
    };
    recognize("run1");
    recognize("run2");
    let teams_a = std::fs::read(ws.path("run1/teams.json")).unwrap();
    let teams_b = std::fs::read(ws.path("run2/teams.json")).unwrap();
    assert_eq!(teams_a, teams_b);

    let teams: Vec<TeamJson> = serde_json::from_slice(&teams_a).unwrap();
    assert_eq!(teams.len(), 5);
    assert!(teams
        .iter()
        .all(|t| t.members.len() == 8 && t.mode == "higher-order"));

    let summary = run_ok(&[
        "evaluate",
        "--graph",
        &ws.arg("graph"),
        "--teams",
        &ws.arg("run1/teams.json"),
        "--out",
        &ws.arg("eval"),
    ]);
    assert!(summary.contains("5 teams"), "summary line: {summary}");
    let metrics = std::fs::read_to_string(ws.path("eval/metrics.csv")).unwrap();
    assert!(
        metrics.starts_with("team_id,size,ccr,disconnected,triangles,separability,mean_citation\n")
    );
    assert_eq!(metrics.lines().count(), 6);
    let summary_json = read_json(&ws.path("eval/evaluation_summary.json"));
    assert_eq!(summary_json["team_count"], 5);
    assert_eq!(summary_json["mean_size"], 8.0);
}

#[test]
fn trac_teams_feed_evaluate_unchanged() {
    let ws = Workspace::new();
    planted_snapshot(&ws.path("graph"));
    run_ok(&[
        "trac",
        "--graph",
        &ws.arg("graph"),
        "--out",
        &ws.arg("trac"),
        "--set",
        "trac-edge-threshold=2",
    ]);
    let teams = read_json(&ws.path("trac/teams.json"));
    assert_eq!(teams.as_array().unwrap().len(), 5);
    assert_eq!(teams[0]["mode"], "trac");
    run_ok(&[
        "evaluate",
        "--graph",
        &ws.arg("graph"),
        "--teams",
        &ws.arg("trac/teams.json"),
        "--out",
        &ws.arg("eval"),
    ]);
    let summary = read_json(&ws.path("eval/evaluation_summary.json"));
    assert_eq!(summary["team_count"], 5);
}

#[test]
fn suggest_dc_scan_matches_library_occupancies() {
    let ws = Workspace::new();
    let graph = random_graph(150, 260, 21);
    graph.write_snapshot(&ws.path("graph")).unwrap();
    run_ok(&[
        "suggest-dc",
        "--graph",
        &ws.arg("graph"),
        "--out",
        &ws.arg("out"),
    ]);

    let index = all_pairs(&graph, 3.5).unwrap();
    let scan = std::fs::read_to_string(ws.path("out/dc_scan.csv")).unwrap();
    let mut lines = scan.lines();
    assert_eq!(lines.next().unwrap(), "d_c,mean_rho,occupancy,in_band");
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let d_c: f64 = fields[0].parse().unwrap();
        let occupancy: f64 = fields[2].parse().unwrap();
        let in_band: bool = fields[3].parse().unwrap();
        let rho = local_density(&index, d_c).unwrap();
        let expected =
            rho.iter().map(|&r| r as f64).sum::<f64>() / (graph.node_count() as f64).powi(2);
        assert!(
            (occupancy - expected).abs() < 1e-9,
            "d_c {d_c}: csv occupancy {occupancy} vs library {expected}"
        );
        assert_eq!(in_band, (0.01..=0.02).contains(&expected), "d_c {d_c}");
        rows += 1;
    }
    assert_eq!(rows, 25);
    let suggestion = read_json(&ws.path("out/dc_suggestion.json"));
    assert!(suggestion["chosen_d_c"].as_f64().unwrap() > 0.0);
}

#[test]
fn ingest_builds_graph_and_profile_matches_profile_subcommand() {
    let ws = Workspace::new();
    let corpus = ws.path("corpus.jsonl");
    let mut lines = String::new();
    // Three scholars publishing together from 2006 to 2011.
    for (id, year) in [("q1", 2006), ("q2", 2008), ("q3", 2011)] {
        lines.push_str(&format!(
            r#"{{"paper_id":"{id}","year":{year},"authors":["ada","ben","cyd"],"citations":3}}"#
        ));
        lines.push('\n');
    }
    std::fs::write(&corpus, lines).unwrap();
    let summary = run_ok(&[
        "ingest",
        "--input",
        corpus.to_str().unwrap(),
        "--out",
        &ws.arg("ingest"),
    ]);
    assert!(summary.contains("3 scholars"), "summary: {summary}");
    let nodes = std::fs::read_to_string(ws.path("ingest/nodes.tsv")).unwrap();
    assert_eq!(nodes.lines().count(), 3);
    assert!(nodes.starts_with("ada\t3\t\t9\n"), "nodes.tsv: {nodes}");

    run_ok(&[
        "profile",
        "--graph",
        &ws.arg("ingest"),
        "--out",
        &ws.arg("prof"),
    ]);
    assert_eq!(
        std::fs::read(ws.path("ingest/profile.json")).unwrap(),
        std::fs::read(ws.path("prof/profile.json")).unwrap()
    );
    let profile = read_json(&ws.path("prof/profile.json"));
    assert_eq!(profile["node_count"], 3);
    assert_eq!(profile["edge_count"], 3);
    assert_eq!(profile["triangle_count"], 1);
}

#[test]
fn motif_test_writes_ensemble_counts() {
    let ws = Workspace::new();
    planted_snapshot(&ws.path("graph"));
    run_ok(&[
        "motif-test",
        "--graph",
        &ws.arg("graph"),
        "--out",
        &ws.arg("out"),
        "--ensemble",
        "--set",
        "motif-replicates=40",
        "--set",
        "seed=3",
    ]);
    let ensemble = std::fs::read_to_string(ws.path("out/ensemble.csv")).unwrap();
    assert_eq!(ensemble.lines().count(), 41);
    assert_eq!(ensemble.lines().next().unwrap(), "replicate,triangles");
    let verdict = read_json(&ws.path("out/motif.json"));
    assert_eq!(verdict["params"]["replicates"], 40);
    assert_eq!(verdict["verdict"]["f_real"], 280);
}

#[test]
fn manifests_echo_resolved_config_and_hashes() {
    let ws = Workspace::new();
    planted_snapshot(&ws.path("graph"));
    let config = ws.path("run.conf");
    std::fs::write(
        &config,
        "dc = 2010-2013\ncenters = top:5\nmin-team-size = 3\n",
    )
    .unwrap();
    run_ok(&[
        "recognize",
        "--graph",
        &ws.arg("graph"),
        "--out",
        &ws.arg("out"),
        "--config",
        config.to_str().unwrap(),
        "--set",
        "dc=0.5",
    ]);
    let manifest = read_json(&ws.path("out/manifest-recognize.json"));
    assert_eq!(manifest["subcommand"], "recognize");
    // The --set override wins over the config file's preset.
    assert_eq!(manifest["resolved"]["d_c"], 0.5);
    assert_eq!(manifest["resolved"]["d_c_source"], "explicit");
    assert_eq!(manifest["config"]["min_team_size"], 3);
    for role in ["config", "nodes.tsv", "edges.tsv"] {
        let hash = manifest["inputs"][role].as_str().unwrap();
        assert_eq!(hash.len(), 64, "{role} hash: {hash}");
    }
    let outputs: Vec<&str> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(outputs.contains(&"teams.json"));
    assert!(!outputs.contains(&"manifest-recognize.json"));
}

#[test]
fn preset_cutoff_resolves_through_the_pipeline() {
    let ws = Workspace::new();
    planted_snapshot(&ws.path("graph"));
    run_ok(&[
        "cluster",
        "--graph",
        &ws.arg("graph"),
        "--out",
        &ws.arg("out"),
        "--set",
        "dc=2014-2017",
    ]);
    let manifest = read_json(&ws.path("out/manifest-cluster.json"));
    assert_eq!(manifest["resolved"]["d_c"], 1.4);
    assert_eq!(manifest["resolved"]["d_c_source"], "preset 2014-2017");
    let clusters = read_json(&ws.path("out/clusters.json"));
    assert_eq!(clusters["d_c"], 1.4);
}

#[test]
fn report_includes_interagency_and_histogram() {
    let ws = Workspace::new();
    planted_snapshot(&ws.path("graph"));
    run_ok(&[
        "recognize",
        "--graph",
        &ws.arg("graph"),
        "--out",
        &ws.arg("rec"),
        "--set",
        "dc=0.5",
        "--set",
        "centers=top:5",
    ]);
    let records = ws.path("records.jsonl");
    std::fs::write(
        &records,
        concat!(
            r#"{"paper_id":"r1","year":2010,"authors":["a"]}"#,
            "\n",
            r#"{"paper_id":"r2","year":2010,"authors":["a","b"]}"#,
            "\n",
        ),
    )
    .unwrap();
    run_ok(&[
        "report",
        "--graph",
        &ws.arg("graph"),
        "--teams",
        &ws.arg("rec/teams.json"),
        "--records",
        records.to_str().unwrap(),
        "--out",
        &ws.arg("out"),
    ]);
    let report = read_json(&ws.path("out/report.json"));
    assert_eq!(report["summary"]["team_count"], 5);
    let interagency = report["interagency"].as_array().unwrap();
    assert_eq!(interagency.len(), 1);
    assert_eq!(interagency[0]["size"], 8);
    let histogram = report["coauthor_histogram"].as_array().unwrap();
    assert_eq!(histogram.len(), 2);
    assert_eq!(histogram[0]["label"], "1");
    assert_eq!(histogram[1]["fraction"], 0.5);
}
