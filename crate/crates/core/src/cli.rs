//! Command-line front end: argument parsing, configuration resolution,
//! artifact writing, and exit-code mapping.
//!
//! Every subcommand computes its results fully in memory, then writes each
//! artifact atomically (temp file + rename) and finishes with a
//! `manifest-<subcommand>.json` echoing the resolved configuration and the
//! content hashes of all inputs. A failing run therefore never leaves a
//! partially written file, and a missing manifest marks an incomplete run.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_config_text, DcSetting, RunConfig, OCCUPANCY_BAND};
use crate::corpus::{self, IngestOptions};
use crate::density::{
    annotate_regions, assign_clusters, dc_scan_csv, decision_csv, decision_profile, select_centers,
    suggest_dc,
};
use crate::distance::all_pairs;
use crate::error::{Error, Result};
use crate::evaluation::{
    coauthor_distribution, evaluate_teams, interagency_report, metrics_csv, summarize,
};
use crate::graph::{CollaborationGraph, NodeId};
use crate::ioutil::{sha256_file, write_atomic};
use crate::motif::motif_significance;
use crate::team::{recognition_to_json, recognize, TeamJson};
use crate::trac::{trac_recognize, trac_to_json};

#[derive(Parser)]
#[command(
    name = "moto",
    version,
    about = "Recognize collaborative academic teams in co-authorship networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Plain-text key=value configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one configuration key, e.g. --set dc=0.5 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Maximum worker threads in parallel stages (never affects outputs).
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
    /// Directory receiving this subcommand's artifacts.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a publication corpus and build the collaboration graph.
    Ingest {
        /// Corpus file, one JSON publication record per line.
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Profile a stored collaboration graph.
    Profile {
        /// Directory holding nodes.tsv and edges.tsv.
        #[arg(long, value_name = "DIR")]
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Scan cutoff-distance candidates for the target occupancy band.
    SuggestDc {
        #[arg(long, value_name = "DIR")]
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compute the decision graph and assign nodes to centers.
    Cluster {
        #[arg(long, value_name = "DIR")]
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Recognize teams: clustering plus familiarity filtering.
    Recognize {
        #[arg(long, value_name = "DIR")]
        graph: PathBuf,
        /// Also write the bounded all-pairs distances as CSV.
        #[arg(long)]
        dump_distances: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the simplified intensity-threshold baseline.
    Trac {
        #[arg(long, value_name = "DIR")]
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compute per-team metrics for a recognized teams file.
    Evaluate {
        #[arg(long, value_name = "DIR")]
        graph: PathBuf,
        /// Teams JSON as written by recognize or trac.
        #[arg(long, value_name = "FILE")]
        teams: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Test whether triangles are a significant motif of the graph.
    MotifTest {
        #[arg(long, value_name = "DIR")]
        graph: PathBuf,
        /// Also write the per-replicate triangle counts as CSV.
        #[arg(long)]
        ensemble: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Aggregate teams into the summary tables (sizes, metrics,
    /// interagency proportions, co-author histogram).
    Report {
        #[arg(long, value_name = "DIR")]
        graph: PathBuf,
        #[arg(long, value_name = "FILE")]
        teams: PathBuf,
        /// Publication records for the co-author histogram; the configured
        /// field and window filters are applied before counting.
        #[arg(long, value_name = "FILE")]
        records: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Entry point for the binary: parse `std::env::args` and run.
pub fn run_from_env() -> i32 {
    run(std::env::args_os())
}

/// Parse the given arguments, run the subcommand, and return the process
/// exit code: 0 success, 1 usage error, 2 data error, 3 internal error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn load_config(common: &Common) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => parse_config_text(&read_text(path, "config file")?)?,
        None => RunConfig::default(),
    };
    for setting in &common.overrides {
        let Some((key, value)) = setting.split_once('=') else {
            return Err(Error::InvalidArgument(format!(
                "--set expects KEY=VALUE, got {setting:?}"
            )));
        };
        config.apply(key.trim(), value.trim())?;
    }
    Ok(config)
}

fn read_text(path: &Path, what: &str) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|err| Error::Data(format!("cannot read {what} {}: {err}", path.display())))
}

/// Run `work` inside a bounded rayon pool when `--workers` was given.
fn with_workers<T: Send>(
    workers: Option<usize>,
    work: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match workers {
        None => work(),
        Some(0) => Err(Error::InvalidArgument(
            "--workers must be at least 1".into(),
        )),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|err| Error::Internal(format!("cannot build worker pool: {err}")))?
            .install(work),
    }
}

/// Collected artifacts of one run, written together at the end.
struct Artifacts {
    out: PathBuf,
    files: Vec<(String, Vec<u8>)>,
    inputs: BTreeMap<String, String>,
    resolved: serde_json::Value,
}

#[derive(Serialize)]
struct Manifest<'a> {
    subcommand: &'a str,
    config: &'a RunConfig,
    resolved: &'a serde_json::Value,
    inputs: &'a BTreeMap<String, String>,
    outputs: Vec<&'a str>,
}

impl Artifacts {
    fn new(common: &Common) -> Result<Self> {
        let mut inputs = BTreeMap::new();
        if let Some(path) = &common.config {
            inputs.insert("config".to_string(), sha256_file(path)?);
        }
        Ok(Artifacts {
            out: common.out.clone(),
            files: Vec::new(),
            inputs,
            resolved: json!({}),
        })
    }

    /// Record one input file's content hash under a stable role name.
    fn hash_input(&mut self, role: &str, path: &Path) -> Result<()> {
        self.inputs.insert(role.to_string(), sha256_file(path)?);
        Ok(())
    }

    /// Record the graph snapshot files as inputs.
    fn hash_graph(&mut self, dir: &Path) -> Result<()> {
        self.hash_input("nodes.tsv", &dir.join("nodes.tsv"))?;
        self.hash_input("edges.tsv", &dir.join("edges.tsv"))
    }

    fn add_text(&mut self, name: &str, text: String) {
        self.files.push((name.to_string(), text.into_bytes()));
    }

    fn add_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|err| Error::Internal(format!("cannot serialize {name}: {err}")))?;
        text.push('\n');
        self.add_text(name, text);
        Ok(())
    }

    /// Write every artifact atomically, then the manifest last.
    fn write(self, subcommand: &str, config: &RunConfig) -> Result<()> {
        let manifest_name = format!("manifest-{subcommand}.json");
        for (name, bytes) in &self.files {
            write_atomic(&self.out.join(name), bytes)?;
        }
        let manifest = Manifest {
            subcommand,
            config,
            resolved: &self.resolved,
            inputs: &self.inputs,
            outputs: self.files.iter().map(|(name, _)| name.as_str()).collect(),
        };
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|err| Error::Internal(format!("cannot serialize manifest: {err}")))?;
        text.push('\n');
        write_atomic(&self.out.join(manifest_name), text.as_bytes())
    }
}

/// The concrete cutoff distance for this run, plus its provenance for the
/// manifest. Auto mode scans occupancies over the distance index.
fn resolve_dc(
    config: &RunConfig,
    distances: &crate::distance::DistanceIndex,
) -> Result<(f64, serde_json::Value)> {
    match &config.d_c {
        DcSetting::Value(v) => Ok((*v, json!({"d_c": v, "d_c_source": "explicit"}))),
        DcSetting::Preset(name) => {
            let value = config
                .d_c
                .fixed_value()
                .ok_or_else(|| Error::InvalidArgument(format!("unknown cutoff preset {name:?}")))?;
            Ok((
                value,
                json!({"d_c": value, "d_c_source": format!("preset {name}")}),
            ))
        }
        DcSetting::Auto => {
            let scan = suggest_dc(distances, OCCUPANCY_BAND.0, OCCUPANCY_BAND.1)?;
            Ok((
                scan.chosen_d_c,
                json!({
                    "d_c": scan.chosen_d_c,
                    "d_c_source": "occupancy-scan",
                    "d_c_in_band": scan.any_in_band,
                }),
            ))
        }
    }
}

/// Teams as parsed from JSON plus their members resolved to node ids.
type LoadedTeams = (Vec<TeamJson>, Vec<(String, Vec<NodeId>)>);

/// Parse a teams JSON file and resolve member ids against the graph.
fn load_teams(path: &Path, graph: &CollaborationGraph) -> Result<LoadedTeams> {
    let text = read_text(path, "teams file")?;
    let teams: Vec<TeamJson> = serde_json::from_str(&text)
        .map_err(|err| Error::Data(format!("malformed teams file {}: {err}", path.display())))?;
    let mut resolved = Vec::with_capacity(teams.len());
    for team in &teams {
        resolved.push((team.team_id.clone(), team.member_nodes(graph)?));
    }
    Ok((teams, resolved))
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Ingest { input, common } => cmd_ingest(&input, &common),
        Command::Profile { graph, common } => cmd_profile(&graph, &common),
        Command::SuggestDc { graph, common } => cmd_suggest_dc(&graph, &common),
        Command::Cluster { graph, common } => cmd_cluster(&graph, &common),
        Command::Recognize {
            graph,
            dump_distances,
            common,
        } => cmd_recognize(&graph, dump_distances, &common),
        Command::Trac { graph, common } => cmd_trac(&graph, &common),
        Command::Evaluate {
            graph,
            teams,
            common,
        } => cmd_evaluate(&graph, &teams, &common),
        Command::MotifTest {
            graph,
            ensemble,
            common,
        } => cmd_motif_test(&graph, ensemble, &common),
        Command::Report {
            graph,
            teams,
            records,
            common,
        } => cmd_report(&graph, &teams, records.as_deref(), &common),
    }
}

fn cmd_ingest(input: &Path, common: &Common) -> Result<String> {
    let config = load_config(common)?;
    let mut artifacts = Artifacts::new(common)?;
    artifacts.hash_input("corpus", input)?;
    let text = read_text(input, "corpus")?;
    let options = IngestOptions {
        window: config.window,
        min_career_years: config.min_career_years,
        fields: config.fields.clone(),
        keep_all_components: config.keep_all_components,
    };
    let (graph, report) = with_workers(common.workers, || corpus::ingest(&text, &options))?;
    let profile = corpus::profile(&graph);
    artifacts.add_text("nodes.tsv", graph.nodes_tsv());
    artifacts.add_text("edges.tsv", graph.edges_tsv());
    artifacts.add_json("profile.json", &profile)?;
    artifacts.add_json("ingest_report.json", &report)?;
    artifacts.write("ingest", &config)?;
    Ok(format!(
        "ingest: {} scholars, {} edges ({} records parsed, {} rejected)",
        graph.node_count(),
        graph.edge_count(),
        report.parsed_records,
        report.rejected.len()
    ))
}

fn cmd_profile(graph_dir: &Path, common: &Common) -> Result<String> {
    let config = load_config(common)?;
    let mut artifacts = Artifacts::new(common)?;
    artifacts.hash_graph(graph_dir)?;
    let graph = CollaborationGraph::read_snapshot(graph_dir)?;
    let profile = with_workers(common.workers, || Ok(corpus::profile(&graph)))?;
    artifacts.add_json("profile.json", &profile)?;
    artifacts.write("profile", &config)?;
    Ok(format!(
        "profile: {} nodes, {} edges, {} triangles, clustering {:.4}",
        profile.node_count,
        profile.edge_count,
        profile.triangle_count,
        profile.clustering_coefficient
    ))
}

fn cmd_suggest_dc(graph_dir: &Path, common: &Common) -> Result<String> {
    let config = load_config(common)?;
    let mut artifacts = Artifacts::new(common)?;
    artifacts.hash_graph(graph_dir)?;
    let graph = CollaborationGraph::read_snapshot(graph_dir)?;
    let suggestion = with_workers(common.workers, || {
        let distances = all_pairs(&graph, config.cap)?;
        suggest_dc(&distances, OCCUPANCY_BAND.0, OCCUPANCY_BAND.1)
    })?;
    artifacts.resolved = json!({"d_c": suggestion.chosen_d_c});
    artifacts.add_text("dc_scan.csv", dc_scan_csv(&suggestion));
    artifacts.add_json("dc_suggestion.json", &suggestion)?;
    artifacts.write("suggest-dc", &config)?;
    Ok(format!(
        "suggest-dc: d_c={} ({} of {} candidates in the {}%-{}% band)",
        suggestion.chosen_d_c,
        suggestion.candidates.iter().filter(|c| c.in_band).count(),
        suggestion.candidates.len(),
        OCCUPANCY_BAND.0 * 100.0,
        OCCUPANCY_BAND.1 * 100.0
    ))
}

#[derive(Serialize)]
struct ClusterOut {
    center: String,
    members: Vec<String>,
}

#[derive(Serialize)]
struct ClustersJson {
    d_c: f64,
    centers: Vec<String>,
    clusters: Vec<ClusterOut>,
    unassigned: Vec<String>,
}

fn cmd_cluster(graph_dir: &Path, common: &Common) -> Result<String> {
    let config = load_config(common)?;
    let mut artifacts = Artifacts::new(common)?;
    artifacts.hash_graph(graph_dir)?;
    let graph = CollaborationGraph::read_snapshot(graph_dir)?;
    let (d_c, resolved, profile, centers, clustering) = with_workers(common.workers, || {
        let distances = all_pairs(&graph, config.cap)?;
        let (d_c, resolved) = resolve_dc(&config, &distances)?;
        let profile = decision_profile(&distances, d_c)?;
        let centers = select_centers(&profile, &config.center_policy)?;
        let clustering = assign_clusters(&centers, &distances)?;
        Ok((d_c, resolved, profile, centers, clustering))
    })?;
    artifacts.resolved = resolved;
    let id_of = |v: &NodeId| graph.scholar_id(*v).to_string();
    let clusters = ClustersJson {
        d_c,
        centers: centers.iter().map(id_of).collect(),
        clusters: clustering
            .clusters()
            .iter()
            .zip(&centers)
            .map(|(members, center)| ClusterOut {
                center: graph.scholar_id(*center).to_string(),
                members: members.iter().map(id_of).collect(),
            })
            .collect(),
        unassigned: clustering.unassigned().iter().map(id_of).collect(),
    };
    artifacts.add_text(
        "decision_graph.csv",
        decision_csv(&graph, &profile, &centers),
    );
    artifacts.add_json("clusters.json", &clusters)?;
    artifacts.add_json(
        "regions.json",
        &annotate_regions(&graph, &profile, &centers)?,
    )?;
    artifacts.write("cluster", &config)?;
    Ok(format!(
        "cluster: {} centers over {} nodes, {} unassigned (d_c={})",
        centers.len(),
        graph.node_count(),
        clusters.unassigned.len(),
        d_c
    ))
}

#[derive(Serialize)]
struct RecognitionReport {
    mode: String,
    d_c: f64,
    team_count: usize,
    centers: Vec<String>,
    isolated: Vec<String>,
    dissolved_centers: Vec<String>,
    unassigned: Vec<String>,
    truncated_density: bool,
}

fn cmd_recognize(graph_dir: &Path, dump_distances: bool, common: &Common) -> Result<String> {
    let config = load_config(common)?;
    let mut artifacts = Artifacts::new(common)?;
    artifacts.hash_graph(graph_dir)?;
    let graph = CollaborationGraph::read_snapshot(graph_dir)?;
    let (d_c, resolved, recognition, distances_csv) = with_workers(common.workers, || {
        let distances = all_pairs(&graph, config.cap)?;
        let (d_c, resolved) = resolve_dc(&config, &distances)?;
        let recognition = recognize(&graph, &config.recognize_config(d_c))?;
        let csv = dump_distances.then(|| distances.to_csv(&graph));
        Ok((d_c, resolved, recognition, csv))
    })?;
    artifacts.resolved = resolved;
    let id_of = |v: &NodeId| graph.scholar_id(*v).to_string();
    let report = RecognitionReport {
        mode: recognition.mode.as_str().to_string(),
        d_c,
        team_count: recognition.teams.len(),
        centers: recognition.centers.iter().map(id_of).collect(),
        isolated: recognition.isolated.iter().map(id_of).collect(),
        dissolved_centers: recognition.dissolved_centers.iter().map(id_of).collect(),
        unassigned: recognition.unassigned.iter().map(id_of).collect(),
        truncated_density: recognition.truncated_density,
    };
    artifacts.add_json("teams.json", &recognition_to_json(&graph, &recognition))?;
    artifacts.add_text(
        "decision_graph.csv",
        decision_csv(&graph, &recognition.profile, &recognition.centers),
    );
    artifacts.add_json(
        "regions.json",
        &annotate_regions(&graph, &recognition.profile, &recognition.centers)?,
    )?;
    artifacts.add_json("recognition.json", &report)?;
    if let Some(csv) = distances_csv {
        artifacts.add_text("distances.csv", csv);
    }
    artifacts.write("recognize", &config)?;
    Ok(format!(
        "recognize: {} teams ({}), {} isolated, {} unassigned (d_c={})",
        report.team_count,
        report.mode,
        report.isolated.len(),
        report.unassigned.len(),
        d_c
    ))
}

fn cmd_trac(graph_dir: &Path, common: &Common) -> Result<String> {
    let config = load_config(common)?;
    let mut artifacts = Artifacts::new(common)?;
    artifacts.hash_graph(graph_dir)?;
    let graph = CollaborationGraph::read_snapshot(graph_dir)?;
    let teams = with_workers(common.workers, || trac_recognize(&graph, &config.trac))?;
    artifacts.add_json("teams.json", &trac_to_json(&graph, &teams))?;
    artifacts.write("trac", &config)?;
    Ok(format!(
        "trac: {} teams (intensity {}, W={}, phi_min={})",
        teams.len(),
        config.trac.intensity.as_str(),
        config.trac.edge_threshold,
        config.trac.phi_min
    ))
}

fn cmd_evaluate(graph_dir: &Path, teams_path: &Path, common: &Common) -> Result<String> {
    let config = load_config(common)?;
    let mut artifacts = Artifacts::new(common)?;
    artifacts.hash_graph(graph_dir)?;
    artifacts.hash_input("teams", teams_path)?;
    let graph = CollaborationGraph::read_snapshot(graph_dir)?;
    let (_, resolved_teams) = load_teams(teams_path, &graph)?;
    let (rows, summary) = with_workers(common.workers, || {
        let rows = evaluate_teams(&graph, &resolved_teams, config.ccr_mode)?;
        let summary = summarize(&graph, &resolved_teams, &rows);
        Ok((rows, summary))
    })?;
    artifacts.add_text("metrics.csv", metrics_csv(&rows));
    artifacts.add_json("evaluation_summary.json", &summary)?;
    artifacts.write("evaluate", &config)?;
    Ok(format!(
        "evaluate: {} teams, mean size {:.2}, mean ccr {:.4}, mean separability {:.4}",
        summary.team_count, summary.mean_size, summary.mean_ccr, summary.mean_separability
    ))
}

fn cmd_motif_test(graph_dir: &Path, ensemble: bool, common: &Common) -> Result<String> {
    let config = load_config(common)?;
    let mut artifacts = Artifacts::new(common)?;
    artifacts.hash_graph(graph_dir)?;
    let graph = CollaborationGraph::read_snapshot(graph_dir)?;
    let significance = with_workers(common.workers, || motif_significance(&graph, &config.motif))?;
    artifacts.add_json(
        "motif.json",
        &json!({"params": &config.motif, "verdict": &significance.verdict}),
    )?;
    if ensemble {
        artifacts.add_text("ensemble.csv", significance.ensemble_csv());
    }
    artifacts.write("motif-test", &config)?;
    let verdict = &significance.verdict;
    Ok(format!(
        "motif-test: triangles={} rand_mean={:.3} p={:.4} motif={}",
        verdict.f_real, verdict.f_rand_mean, verdict.p_estimate, verdict.is_motif
    ))
}

fn cmd_report(
    graph_dir: &Path,
    teams_path: &Path,
    records: Option<&Path>,
    common: &Common,
) -> Result<String> {
    let config = load_config(common)?;
    let mut artifacts = Artifacts::new(common)?;
    artifacts.hash_graph(graph_dir)?;
    artifacts.hash_input("teams", teams_path)?;
    if let Some(path) = records {
        artifacts.hash_input("records", path)?;
    }
    let graph = CollaborationGraph::read_snapshot(graph_dir)?;
    let (_, resolved_teams) = load_teams(teams_path, &graph)?;
    let records_text = match records {
        Some(path) => Some(read_text(path, "records")?),
        None => None,
    };
    let report = with_workers(common.workers, || {
        let rows = evaluate_teams(&graph, &resolved_teams, config.ccr_mode)?;
        let summary = summarize(&graph, &resolved_teams, &rows);
        let interagency = interagency_report(&graph, &resolved_teams, config.top_cited_share)?;
        let histogram = match &records_text {
            Some(text) => {
                let outcome = corpus::parse_publications(text);
                let fielded = corpus::filter_fields(&outcome.records, &config.fields);
                let windowed = match config.window {
                    Some((start, end)) => corpus::filter_window(&fielded, start, end)?,
                    None => fielded,
                };
                Some(coauthor_distribution(&windowed))
            }
            None => None,
        };
        Ok(json!({
            "summary": summary,
            "interagency": interagency,
            "coauthor_histogram": histogram,
        }))
    })?;
    artifacts.add_json("report.json", &report)?;
    artifacts.write("report", &config)?;
    Ok(format!(
        "report: {} teams over {} size classes",
        resolved_teams.len(),
        report["interagency"]
            .as_array()
            .map_or(0, |rows| rows.len())
    ))
}
