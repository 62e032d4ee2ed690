//! The `prar` command line.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::bench::{run_bench, to_csv, BenchPlan};
use crate::engine::{EngineOptions, SampleStats, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::graph::{Generator, Graph};
use crate::models::{
    critical_lambda_hardcore, threshold_for_delta, subcritical_check, ModelSpec, REFERENCE_TABLE,
};
use crate::oracle::{
    autonormal_moments_numeric, chi_square, empirical_probs, enumerate_distribution, enumerate_rooted_trees,
    tv_distance, Histogram,
};
use crate::rng::{DrawCounter, RngStream};
use crate::sampler::{Draw, Method, Sampler};

#[derive(Debug, Parser)]
#[command(name = "prar", version, about = "Exact samplers for graphical models and spanning trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw samples and write one configuration per line.
    Sample(SampleArgs),
    /// Compare a sampler against the exact distribution of a small instance.
    Check(CheckArgs),
    /// Show the drift quantity and critical values for a model.
    Threshold(ThresholdArgs),
    /// Measure draws per dimension across graph sizes; writes CSV.
    Bench(BenchArgs),
    /// List every spanning tree of a small graph directed toward a root.
    Trees(TreesArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Model, e.g. hardcore:lambda=1 or rc:p=0.25,q=2.
    #[arg(long)]
    pub model: Option<String>,
    /// grid:RxC, cycle:N, path:N, complete:N or file:PATH.
    #[arg(long)]
    pub graph: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Maximum primitive draws per sample.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Comma-separated dimension ids; default all.
    #[arg(long)]
    pub target: Option<String>,
    /// prar, backbone or ar.
    #[arg(long)]
    pub method: Option<String>,
    /// key=value file with defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Test hook: accept every proposal. Produces wrong samples.
    #[arg(long, hide = true)]
    pub corrupt_sampler: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
    /// Largest total variation distance that passes.
    #[arg(long, default_value_t = 0.01)]
    pub tv_max: f64,
    /// Smallest chi-square p-value that passes.
    #[arg(long, default_value_t = 0.001)]
    pub p_min: f64,
    #[arg(long, hide = true)]
    pub corrupt_sampler: bool,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub model: String,
    /// Maximum degree; alternative to --graph.
    #[arg(long, conflicts_with = "graph")]
    pub delta: Option<usize>,
    #[arg(long)]
    pub graph: Option<String>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: Common,
    /// Node counts, comma-separated and increasing. The --graph family is
    /// resized to each (square grids use the nearest side).
    #[arg(long)]
    pub sizes: String,
    #[arg(long, default_value_t = 20)]
    pub replications: usize,
}

#[derive(Debug, Args)]
pub struct TreesArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long, default_value_t = 0)]
    pub root: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// How a graph was specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Generated(Generator),
    File(PathBuf),
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.strip_prefix("file:") {
            Some(path) => Ok(GraphSpec::File(PathBuf::from(path))),
            None => Ok(GraphSpec::Generated(s.parse()?)),
        }
    }
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Generated(g) => Graph::generate(*g),
            GraphSpec::File(p) => Graph::read_edge_list(p),
        }
    }
}

/// Fully resolved settings for one run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub graph_spec: GraphSpec,
    pub graph: Graph,
    pub seed: u64,
    pub samples: u64,
    pub out: Option<PathBuf>,
    pub budget: u64,
    pub target: Option<Vec<usize>>,
    pub method: Method,
}

/// Reads `key=value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<HashMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_target(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("target '{t}': {e}"))))
        .collect()
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>().map_err(|e| Error::Parse(format!("{key}='{v}': {e}")))
}

impl Common {
    /// Merge flags over the config file (flags win) and apply defaults.
    pub fn resolve(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => read_config_file(p)?,
            None => HashMap::new(),
        };
        const KEYS: [&str; 8] = ["model", "graph", "seed", "samples", "out", "budget", "target", "method"];
        if let Some(k) = file.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown config key '{k}'")));
        }
        let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).cloned());

        let model: ModelSpec = pick(self.model.clone(), "model")
            .ok_or_else(|| Error::param("--model is required"))?
            .parse()?;
        let graph_spec: GraphSpec = pick(self.graph.clone(), "graph")
            .ok_or_else(|| Error::param("--graph is required"))?
            .parse()?;
        let graph = graph_spec.build()?;
        model.validate_for(&graph)?;
        let seed = match (self.seed, file.get("seed")) {
            (Some(s), _) => s,
            (None, Some(v)) => parse_num("seed", v)?,
            (None, None) => 0,
        };
        let samples = match (self.samples, file.get("samples")) {
            (Some(s), _) => s,
            (None, Some(v)) => parse_num("samples", v)?,
            (None, None) => 1,
        };
        if samples == 0 {
            return Err(Error::param("--samples must be at least 1"));
        }
        let budget = match (self.budget, file.get("budget")) {
            (Some(b), _) => b,
            (None, Some(v)) => parse_num("budget", v)?,
            (None, None) => DEFAULT_BUDGET,
        };
        let out = self.out.clone().or_else(|| file.get("out").map(PathBuf::from));
        let target = pick(self.target.clone(), "target").map(|t| parse_target(&t)).transpose()?;
        let method = pick(self.method.clone(), "method")
            .map(|m| m.parse())
            .transpose()?
            .unwrap_or_default();
        if let Some(t) = &target {
            let dims = model.dimension_count(&graph);
            if let Some(&bad) = t.iter().find(|&&d| d >= dims) {
                return Err(Error::param(format!("target {bad} out of range ({dims} dimensions)")));
            }
        }
        Ok(RunConfig {
            model,
            graph_spec,
            graph,
            seed,
            samples,
            out,
            budget,
            target,
            method,
        })
    }
}

impl RunConfig {
    fn options(&self, corrupt: bool) -> EngineOptions {
        EngineOptions {
            budget: self.budget,
            ignore_rejections: corrupt,
        }
    }

    /// Reported dimensions: the target in ascending order, or all.
    pub fn reported_dims(&self) -> Vec<usize> {
        match &self.target {
            Some(t) => {
                let mut t = t.clone();
                t.sort_unstable();
                t.dedup();
                t
            }
            None => (0..self.model.dimension_count(&self.graph)).collect(),
        }
    }
}

/// Sum of per-sample statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunTotals {
    pub samples: u64,
    /// Samples abandoned when the budget ran out (at most one).
    pub failed: u64,
    pub attempts: u64,
    pub rejections: u64,
    pub proposals: u64,
    pub recursion_depth_max: usize,
    pub draws: DrawCounter,
}

impl RunTotals {
    fn add(&mut self, s: &SampleStats) {
        self.samples += 1;
        self.attempts += s.attempts;
        self.rejections += s.rejections;
        self.proposals += s.proposals;
        self.recursion_depth_max = self.recursion_depth_max.max(s.recursion_depth_max);
        self.draws = self.draws + s.draws;
    }

    /// Work spent on a sample that ran out of budget; it does not count as
    /// a completed sample.
    fn add_partial(&mut self, draws: DrawCounter, attempts: u64) {
        self.failed += 1;
        self.attempts += attempts;
        self.draws = self.draws + draws;
    }

    fn render(&self, cfg: &RunConfig, status: &str) -> String {
        let mut out = String::new();
        let tried = self.samples + self.failed;
        let mean = |x: u64| if tried == 0 { 0.0 } else { x as f64 / tried as f64 };
        let _ = writeln!(out, "status={status}");
        let _ = writeln!(out, "model={}", cfg.model);
        let _ = writeln!(out, "graph_nodes={}", cfg.graph.node_count());
        let _ = writeln!(out, "graph_edges={}", cfg.graph.edge_count());
        let _ = writeln!(out, "method={}", cfg.method);
        let _ = writeln!(out, "seed={}", cfg.seed);
        let _ = writeln!(out, "samples_requested={}", cfg.samples);
        let _ = writeln!(out, "samples_completed={}", self.samples);
        let _ = writeln!(out, "samples_failed={}", self.failed);
        let _ = writeln!(out, "attempts_total={}", self.attempts);
        let _ = writeln!(out, "attempts_mean={:.6}", mean(self.attempts));
        let _ = writeln!(out, "rejections_total={}", self.rejections);
        let _ = writeln!(out, "proposals_total={}", self.proposals);
        let _ = writeln!(out, "recursion_depth_max={}", self.recursion_depth_max);
        let _ = writeln!(out, "draws_bernoulli={}", self.draws.bernoulli);
        let _ = writeln!(out, "draws_uniform={}", self.draws.uniform);
        let _ = writeln!(out, "draws_normal={}", self.draws.normal);
        let _ = writeln!(out, "draws_total={}", self.draws.total());
        out
    }
}

fn format_draw(draw: &Draw, dims: &[usize]) -> String {
    match draw {
        Draw::Bits(a) => a
            .project(dims)
            .expect("sampler resolves every target")
            .into_iter()
            .map(|b| if b { '1' } else { '0' })
            .collect::<String>()
            + "\n",
        Draw::Reals(a) => {
            let xs = a.project(dims).expect("sampler resolves every target");
            let parts: Vec<String> = xs.iter().map(|x| format!("{x:.16e}")).collect();
            parts.join(" ") + "\n"
        }
        Draw::Tree(t) => t.to_text() + "\n",
    }
}

/// Draw `cfg.samples` samples and render them. On failure the partial
/// totals are returned with the error.
pub fn sample_text(cfg: &RunConfig, corrupt: bool) -> (String, RunTotals, Result<()>) {
    let sampler = match Sampler::new(cfg.model.clone(), &cfg.graph, cfg.options(corrupt), cfg.method) {
        Ok(s) => s,
        Err(e) => return (String::new(), RunTotals::default(), Err(e)),
    };
    let dims = cfg.reported_dims();
    let mut rng = RngStream::new(cfg.seed);
    let mut text = String::new();
    let mut totals = RunTotals::default();
    for _ in 0..cfg.samples {
        match sampler.draw(Some(&dims), &mut rng) {
            Ok((draw, stats)) => {
                totals.add(&stats);
                text.push_str(&format_draw(&draw, &dims));
            }
            Err(e) => {
                if let Error::BudgetExceeded { draws, attempts, .. } = &e {
                    totals.add_partial(*draws, *attempts);
                }
                return (text, totals, Err(e));
            }
        }
    }
    (text, totals, Ok(()))
}

fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn cmd_sample(args: &SampleArgs) -> Result<()> {
    let cfg = args.common.resolve()?;
    let (text, totals, outcome) = sample_text(&cfg, args.corrupt_sampler);
    let status = match &outcome {
        Ok(()) => "ok",
        Err(Error::BudgetExceeded { .. }) => "budget_exceeded",
        Err(_) => "error",
    };
    let meta = totals.render(&cfg, status);
    match &cfg.out {
        Some(path) => {
            write_file(path, &text)?;
            write_file(&meta_path(path), &meta)?;
        }
        None => {
            print!("{text}");
            eprint!("{meta}");
        }
    }
    outcome
}

/// Outcome of comparing a sampler with an oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub lines: Vec<String>,
    pub pass: bool,
}

pub fn check(cfg: &RunConfig, tv_max: f64, p_min: f64, corrupt: bool) -> Result<CheckReport> {
    let sampler = Sampler::new(cfg.model.clone(), &cfg.graph, cfg.options(corrupt), cfg.method)?;
    let dims = cfg.reported_dims();
    let mut rng = RngStream::new(cfg.seed);
    let n = cfg.samples;
    let mut lines = vec![format!("model {} on {} nodes, N = {n}", cfg.model, cfg.graph.node_count())];

    let pass = match &cfg.model {
        ModelSpec::Wilson { root } => {
            let trees = enumerate_rooted_trees(&cfg.graph, *root)?;
            let index: HashMap<_, _> = trees.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
            let mut counts = vec![0u64; trees.len()];
            for _ in 0..n {
                let (draw, _) = sampler.draw(None, &mut rng)?;
                let t = draw.tree().expect("tree model");
                let i = index
                    .get(t)
                    .ok_or_else(|| Error::SupportMismatch("sampled parent map is not a spanning tree".into()))?;
                counts[*i] += 1;
            }
            let uniform = vec![1.0 / trees.len() as f64; trees.len()];
            verdict(&mut lines, &counts, &uniform, n, tv_max, p_min)?
        }
        ModelSpec::Autonormal(p) => {
            let exact = autonormal_moments_numeric(p, &cfg.graph)?;
            let mut sum = vec![0.0; dims.len()];
            let mut sum2 = vec![0.0; dims.len()];
            for _ in 0..n {
                let (draw, _) = sampler.draw(Some(&dims), &mut rng)?;
                for (k, x) in draw.reals(&dims).expect("real model").into_iter().enumerate() {
                    sum[k] += x;
                    sum2[k] += x * x;
                }
            }
            let mut ok = true;
            for (k, &d) in dims.iter().enumerate() {
                let mean = sum[k] / n as f64;
                let var = (sum2[k] / n as f64 - mean * mean).max(0.0) * n as f64 / (n as f64 - 1.0).max(1.0);
                let se = (var / n as f64).sqrt();
                let z = (mean - exact[d].0) / se;
                let good = z.abs() <= 3.0;
                ok &= good;
                lines.push(format!(
                    "node {d}: mean {mean:.6} exact {:.6} se {se:.2e} z {z:+.2} {}",
                    exact[d].0,
                    if good { "ok" } else { "FAIL" }
                ));
            }
            ok
        }
        model => {
            let oracle = enumerate_distribution(model, &cfg.graph)?.marginal(&dims)?;
            let mut hist = Histogram::new(dims.len())?;
            for _ in 0..n {
                let (draw, _) = sampler.draw(Some(&dims), &mut rng)?;
                hist.add(&draw.bits(&dims).expect("binary model"))?;
            }
            verdict(&mut lines, hist.counts(), oracle.probs(), n, tv_max, p_min)?
        }
    };
    lines.push(if pass { "PASS".into() } else { "FAIL".into() });
    Ok(CheckReport { lines, pass })
}

fn verdict(lines: &mut Vec<String>, counts: &[u64], probs: &[f64], n: u64, tv_max: f64, p_min: f64) -> Result<bool> {
    let tv = tv_distance(&empirical_probs(counts), probs)?;
    lines.push(format!("tv {tv:.6} (max {tv_max})"));
    match chi_square(counts, probs, n) {
        Ok(c) => {
            lines.push(format!(
                "chi-square {:.4} on {} dof, p = {:.6} (min {p_min})",
                c.statistic, c.dof, c.p_value
            ));
            Ok(tv < tv_max && c.p_value > p_min)
        }
        Err(Error::SupportMismatch(msg)) => {
            lines.push(format!("chi-square undefined: {msg}"));
            Ok(false)
        }
        Err(e) => Err(e),
    }
}

pub fn cmd_check(args: &CheckArgs) -> Result<bool> {
    let cfg = args.common.resolve()?;
    let report = check(&cfg, args.tv_max, args.p_min, args.corrupt_sampler)?;
    let text = report.lines.join("\n") + "\n";
    match &cfg.out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    Ok(report.pass)
}

pub fn threshold_text(args: &ThresholdArgs) -> Result<String> {
    let model: ModelSpec = args.model.parse()?;
    let report = match (&args.graph, args.delta) {
        (Some(g), _) => subcritical_check(&model, &g.parse::<GraphSpec>()?.build()?),
        (None, Some(d)) => threshold_for_delta(&model, d),
        (None, None) => return Err(Error::param("threshold needs --delta or --graph")),
    };
    let mut out = report.to_string();
    if let ModelSpec::Hardcore(_) = model {
        let _ = writeln!(out, "\ndelta  lambda_c   RR        CoA    1.13/(delta-2)");
        for row in REFERENCE_TABLE {
            let lc = critical_lambda_hardcore(row.delta)?;
            let _ = writeln!(
                out,
                "{:<6} {:<10.5} {:<9} {:<6} {:.5}",
                row.delta,
                lc,
                row.rr,
                row.coa,
                1.13 / (row.delta as f64 - 2.0)
            );
        }
    }
    Ok(out)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let cfg = args.common.resolve()?;
    let family = match cfg.graph_spec {
        GraphSpec::Generated(g) => g,
        GraphSpec::File(_) => return Err(Error::param("bench needs a generated graph family")),
    };
    let sizes = parse_target(&args.sizes)?;
    let plan = BenchPlan {
        model: cfg.model.clone(),
        family,
        sizes,
        replications: args.replications,
        seed: cfg.seed,
        options: EngineOptions::with_budget(cfg.budget),
        method: cfg.method,
    };
    let records = run_bench(&plan)?;
    for r in &records {
        if !r.threshold.subcritical {
            eprintln!("warning: n={} is not subcritical (gamma {:.4}); draw counts may explode", r.n, r.threshold.gamma);
        }
        if r.failures > 0 {
            eprintln!("warning: n={}: {} replications exceeded the draw budget", r.n, r.failures);
        }
    }
    let csv = to_csv(&records);
    match &cfg.out {
        Some(p) => write_file(p, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

pub fn cmd_trees(args: &TreesArgs) -> Result<()> {
    let g = args.graph.parse::<GraphSpec>()?.build()?;
    let trees = enumerate_rooted_trees(&g, args.root)?;
    let mut out = format!("# {} trees\n", trees.len());
    for t in &trees {
        out.push_str(&t.to_text());
        out.push('\n');
    }
    match &args.out {
        Some(p) => write_file(p, &out),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Sample(a) => cmd_sample(a).map(|()| 0),
        Command::Check(a) => cmd_check(a).map(|pass| if pass { 0 } else { 1 }),
        Command::Threshold(a) => threshold_text(a).map(|t| {
            print!("{t}");
            0
        }),
        Command::Bench(a) => cmd_bench(a).map(|()| 0),
        Command::Trees(a) => cmd_trees(a).map(|()| 0),
    };
    let _ = std::io::stdout().flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => 3,
                _ => 2,
            }
        }
    }
}

/// Histogram of rendered lines, for quick inspection in tests.
pub fn line_counts(text: &str) -> BTreeMap<&str, usize> {
    let mut m = BTreeMap::new();
    for l in text.lines() {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_spec_grammar() {
        assert_eq!(
            "grid:2x3".parse::<GraphSpec>().unwrap(),
            GraphSpec::Generated(Generator::Grid { rows: 2, cols: 3 })
        );
        assert_eq!("file:a/b.txt".parse::<GraphSpec>().unwrap(), GraphSpec::File("a/b.txt".into()));
        assert!("torus:3".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn flags_win_over_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "model = hardcore:lambda=2\ngraph=cycle:5\nseed=9 # comment\nsamples=3\n").unwrap();
        let common = Common {
            seed: Some(1),
            config: Some(path.clone()),
            ..Common::default()
        };
        let cfg = common.resolve().unwrap();
        assert_eq!(cfg.seed, 1);
        assert_eq!(cfg.samples, 3);
        assert_eq!(cfg.graph.node_count(), 5);
        assert_eq!(cfg.model.to_string(), "hardcore:lambda=2");

        fs::write(&path, "colour=blue\n").unwrap();
        assert!(common.resolve().is_err());
    }

    #[test]
    fn resolve_validates() {
        let base = Common {
            model: Some("hardcore:lambda=1".into()),
            graph: Some("path:2".into()),
            ..Common::default()
        };
        assert!(base.resolve().is_ok());
        assert!(Common { target: Some("0,5".into()), ..base.clone() }.resolve().is_err());
        assert!(Common { samples: Some(0), ..base.clone() }.resolve().is_err());
        assert!(Common { model: None, ..base.clone() }.resolve().is_err());
        assert!(Common { model: Some("wilson:root=4".into()), ..base }.resolve().is_err());
    }

    #[test]
    fn reals_are_printed_with_17_digits() {
        let mut a = crate::engine::PartialAssignment::new(1);
        a.insert(0, 0.1);
        let line = format_draw(&Draw::Reals(a), &[0]);
        assert_eq!(line.trim(), "1.0000000000000001e-1");
        assert_eq!(line.trim().parse::<f64>().unwrap(), 0.1);
    }
}
