//! The five subcommands. Each writes its primary output to `out` and returns
//! an error for a non-zero exit.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use hrg::analysis::{
    clustering_coefficient, conditional_degree_check, degree_report, independence_check, scaling_experiment,
    ConditionalDegree, DegreeReport, IndependenceReport, ScalingReport,
};
use hrg::generator::generate_chung_lu;
use hrg::theory::{predict, TheoryPrediction};
use hrg::validate::{validate, ValidationConfig};
use hrg::{
    generate_accelerated, generate_naive, sample_positions, Algorithm, GeneratorKind, Graph, ModelParams, SampleSeed,
};

use crate::config::{GeneratorChoice, Overrides, RunConfig};
use crate::error::CliError;
use crate::io::{read_graph, to_json, write_atomic, write_graph};

#[derive(Parser, Debug)]
#[command(name = "hrg", version, about = "Binomial random hyperbolic graphs: generate, predict, analyze, validate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a graph and write edges.txt and positions.txt.
    Generate {
        #[command(flatten)]
        opts: Overrides,
    },
    /// Print the theoretical constants, expected-degree curve and degree law.
    Predict {
        #[command(flatten)]
        opts: Overrides,
        /// Number of types in [0, R] at which to tabulate the expected degree.
        #[arg(long, default_value_t = 33)]
        t_points: usize,
    },
    /// Degree statistics of a saved or freshly sampled graph.
    Analyze {
        #[command(flatten)]
        opts: Overrides,
        /// Directory written by `generate`; sample a new graph when unset.
        #[arg(long, value_name = "DIR")]
        graph: Option<PathBuf>,
    },
    /// Run the check battery for the regime of the parameters.
    Validate {
        #[command(flatten)]
        opts: Overrides,
    },
    /// Mean degree across vertex counts, optionally with the independence check.
    Scale {
        #[command(flatten)]
        opts: Overrides,
    },
}

impl Command {
    /// Whether the command's output is JSON.
    pub fn emits_json(&self) -> bool {
        !matches!(self, Command::Generate { .. })
    }
}

pub fn run(command: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Generate { opts } => cmd_generate(&RunConfig::resolve(opts)?, out),
        Command::Predict { opts, t_points } => cmd_predict(&RunConfig::resolve(opts)?, *t_points, out),
        Command::Analyze { opts, graph } => cmd_analyze(&RunConfig::resolve(opts)?, graph.as_deref(), out),
        Command::Validate { opts } => cmd_validate(&RunConfig::resolve(opts)?, out),
        Command::Scale { opts } => cmd_scale(&RunConfig::resolve(opts)?, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
}

fn algorithm(choice: GeneratorChoice) -> Result<Algorithm, CliError> {
    match choice {
        GeneratorChoice::Naive => Ok(Algorithm::Naive),
        GeneratorChoice::Accelerated => Ok(Algorithm::Accelerated),
        GeneratorChoice::ChungLu => Err(CliError::Usage(
            "the chung-lu generator is only available to `generate` and `analyze`".into(),
        )),
    }
}

pub fn build_graph(config: &RunConfig) -> Result<Graph, CliError> {
    let params = &config.params;
    let positions = sample_positions(params, SampleSeed::new(config.seed, config.stream));
    Ok(match config.generator {
        GeneratorChoice::Naive => generate_naive(positions, params, config.seed),
        GeneratorChoice::Accelerated => generate_accelerated(positions, params, config.seed),
        GeneratorChoice::ChungLu => generate_chung_lu(positions, params, config.seed)?,
    })
}

pub fn cmd_generate(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let start = Instant::now();
    let g = build_graph(config)?;
    let elapsed = start.elapsed().as_secs_f64();
    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let (edges, positions) = write_graph(&dir, &g)?;
    let n = g.vertex_count();
    let mut s = String::new();
    writeln!(s, "N            {n}").unwrap();
    writeln!(s, "edges        {}", g.edge_count()).unwrap();
    writeln!(s, "mean degree  {:.4}", 2.0 * g.edge_count() as f64 / n as f64).unwrap();
    writeln!(s, "generator    {}", g.provenance().kind).unwrap();
    writeln!(s, "wall time    {elapsed:.3} s").unwrap();
    writeln!(s, "wrote        {} {}", edges.display(), positions.display()).unwrap();
    emit(out, &s)
}

#[derive(Serialize)]
struct PredictOutput<'a> {
    command: &'static str,
    params: &'a ModelParams,
    prediction: TheoryPrediction,
}

pub fn cmd_predict(config: &RunConfig, t_points: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let prediction = predict(&config.params, config.k_cap as u64, t_points, config.omega)?;
    let json = to_json(&PredictOutput {
        command: "predict",
        params: &config.params,
        prediction,
    });
    write_or_emit(config, "prediction.json", &json, out)
}

fn write_or_emit(config: &RunConfig, name: &str, json: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match &config.out {
        Some(dir) => {
            let path = dir.join(name);
            write_atomic(&path, json.as_bytes())?;
            emit(out, &format!("wrote {}\n", path.display()))
        }
        None => emit(out, json),
    }
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    command: &'static str,
    params: &'a ModelParams,
    seed: u64,
    generator: GeneratorKind,
    edges: usize,
    degrees: &'a DegreeReport,
    clustering: f64,
    conditional_degree: Option<ConditionalDegree>,
    conditional_degree_error: Option<String>,
}

/// `k,N_k,N_k/N,mp_pmf` for `k` up to the larger of the maximum degree and
/// `k_cap`; the pmf column is empty where no prediction exists.
pub fn histogram_csv(report: &DegreeReport) -> String {
    let k_max = report.histogram.keys().next_back().copied().unwrap_or(0).max(report.k_cap);
    let mut s = String::from("k,N_k,N_k/N,mp_pmf\n");
    for k in 0..=k_max {
        let count = report.histogram.get(&k).copied().unwrap_or(0);
        let pmf = report
            .mp_pmf
            .as_ref()
            .and_then(|t| t.get(k))
            .map(|p| format!("{p:.10e}"))
            .unwrap_or_default();
        writeln!(s, "{k},{count},{:.10e},{pmf}", count as f64 / report.n.max(1) as f64).unwrap();
    }
    s
}

pub fn cmd_analyze(config: &RunConfig, graph: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let g = match graph {
        Some(dir) => read_graph(dir)?,
        None => build_graph(config)?,
    };
    let params = g.params();
    let report = degree_report(&g, config.k_min, config.k_cap)?;
    let (conditional, conditional_error) = if params.disc || !params.theory_valid {
        (None, Some("no prediction for these parameters".to_string()))
    } else {
        match conditional_degree_check(&g, 0.0, 0.05, config.omega) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        }
    };
    let json = to_json(&AnalyzeOutput {
        command: "analyze",
        params,
        seed: g.provenance().seed,
        generator: g.provenance().kind,
        edges: g.edge_count(),
        degrees: &report,
        clustering: clustering_coefficient(&g),
        conditional_degree: conditional,
        conditional_degree_error: conditional_error,
    });
    if let Some(dir) = &config.out {
        let csv = dir.join("histogram.csv");
        write_atomic(&csv, histogram_csv(&report).as_bytes())?;
        emit(out, &format!("wrote {}\n", csv.display()))?;
    }
    write_or_emit(config, "report.json", &json, out)
}

pub fn cmd_validate(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let vc = ValidationConfig {
        params: config.params,
        seed: config.seed,
        stream: config.stream,
        algorithm: algorithm(config.generator)?,
        k_min: config.k_min,
        k_cap: config.k_cap,
        n_grid: config.n_grid.clone(),
        replicates: config.replicates,
        omega: config.omega,
    };
    let report = validate(&vc)?;
    let json = to_json(&report);
    write_or_emit(config, "validation.json", &json, out)?;
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    for c in report.checks.iter().filter(|c| !c.passed) {
        log::error!("check {} failed: {}", c.name, c.criterion);
    }
    if failed > 0 {
        return Err(CliError::ChecksFailed { failed });
    }
    Ok(())
}

#[derive(Serialize)]
struct ScaleOutput<'a> {
    command: &'static str,
    params: &'a ModelParams,
    scaling: ScalingReport,
    independence: Option<IndependenceReport>,
}

pub fn cmd_scale(config: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let algorithm = algorithm(config.generator)?;
    let params = &config.params;
    let scaling = scaling_experiment(params, &config.n_grid, config.replicates, config.seed, algorithm)?;
    let independence = match config.samples {
        Some(samples) => Some(independence_check(params, config.m, samples, config.seed, algorithm)?),
        None => None,
    };
    let json = to_json(&ScaleOutput {
        command: "scale",
        params,
        scaling,
        independence,
    });
    write_or_emit(config, "scaling.json", &json, out)
}
