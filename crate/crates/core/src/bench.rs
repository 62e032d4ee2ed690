//! Draw-count scaling measurements.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::engine::{EngineOptions, SampleStats};
use crate::error::{Error, Result};
use crate::graph::{Generator, Graph};
use crate::models::{subcritical_check, ModelSpec, ThresholdReport};
use crate::rng::RngStream;
use crate::sampler::{Method, Sampler};

pub const CSV_HEADER: &str =
    "model,n,m,delta,gamma,subcritical,N,draws_total,draws_per_dim,attempts_mean,seconds";

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub model: &'static str,
    pub n: usize,
    pub m: usize,
    pub threshold: ThresholdReport,
    /// Replications that finished within budget.
    pub replications: usize,
    pub failures: usize,
    pub draws_total: u64,
    /// Mean over replications of draws divided by the dimension count.
    pub draws_per_dim: f64,
    /// Standard error of `draws_per_dim` across replications.
    pub draws_per_dim_se: f64,
    pub attempts_mean: f64,
    pub seconds: f64,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{},{},{},{:.6},{:.6},{:.6}",
            self.model,
            self.n,
            self.m,
            self.threshold.delta,
            self.threshold.gamma,
            self.threshold.subcritical,
            self.replications,
            self.draws_total,
            self.draws_per_dim,
            self.attempts_mean,
            self.seconds
        )
    }
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in records {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

#[derive(Clone, Debug)]
pub struct BenchPlan {
    pub model: ModelSpec,
    pub family: Generator,
    /// Node counts, strictly increasing.
    pub sizes: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    pub options: EngineOptions,
    pub method: Method,
}

/// One full-configuration sample per replication at each size.
///
/// Replication `r` of the `k`-th size uses the stream `seed + k·R + r`, so
/// every replication has its own stream; results are reduced in
/// replication order, so the report does not depend on thread scheduling
/// (wall times aside).
pub fn run_bench(plan: &BenchPlan) -> Result<Vec<BenchRecord>> {
    if plan.sizes.is_empty() || plan.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("bench sizes must be nonempty and strictly increasing"));
    }
    if plan.replications == 0 {
        return Err(Error::param("bench needs at least one replication"));
    }
    let mut records = Vec::with_capacity(plan.sizes.len());
    for (k, &size) in plan.sizes.iter().enumerate() {
        let g = Graph::generate(plan.family.with_size(size))?;
        let model = fit_model(&plan.model, &g);
        let sampler = Sampler::new(model.clone(), &g, plan.options, plan.method)?;
        let dims = sampler.dimension_count().max(1) as f64;
        let base = (k * plan.replications) as u64;
        let clock = Instant::now();
        let outcomes: Vec<Result<SampleStats>> = (0..plan.replications)
            .into_par_iter()
            .map(|r| {
                let mut rng = RngStream::substream(plan.seed, base + r as u64);
                sampler.draw(None, &mut rng).map(|(_, s)| s)
            })
            .collect();
        let seconds = clock.elapsed().as_secs_f64();

        let mut per_dim = Vec::new();
        let mut draws_total = 0;
        let mut attempts = 0;
        let mut failures = 0;
        for o in outcomes {
            match o {
                Ok(s) => {
                    draws_total += s.draws.total();
                    attempts += s.attempts;
                    per_dim.push(s.draws.total() as f64 / dims);
                }
                Err(Error::BudgetExceeded { .. }) => failures += 1,
                Err(e) => return Err(e),
            }
        }
        let done = per_dim.len();
        let mean = per_dim.iter().sum::<f64>() / done as f64;
        let se = if done > 1 {
            let var = per_dim.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (done - 1) as f64;
            (var / done as f64).sqrt()
        } else {
            f64::NAN
        };
        records.push(BenchRecord {
            model: model.name(),
            n: g.node_count(),
            m: g.edge_count(),
            threshold: subcritical_check(&model, &g),
            replications: done,
            failures,
            draws_total,
            draws_per_dim: if done > 0 { mean } else { f64::NAN },
            draws_per_dim_se: se,
            attempts_mean: if done > 0 { attempts as f64 / done as f64 } else { f64::NAN },
            seconds,
        });
    }
    Ok(records)
}

/// Autonormal `y` given as a single value is spread over the nodes; a
/// per-node list cannot follow a changing size and is left as is (and then
/// rejected by validation).
fn fit_model(model: &ModelSpec, g: &Graph) -> ModelSpec {
    match model {
        ModelSpec::Autonormal(p) if p.y().len() == 1 => p
            .fitted_to(g.node_count())
            .map(ModelSpec::Autonormal)
            .unwrap_or_else(|_| model.clone()),
        _ => model.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bench_is_reproducible() {
        let plan = BenchPlan {
            model: "hardcore:lambda=0.5".parse().unwrap(),
            family: Generator::Cycle(3),
            sizes: vec![50, 100],
            replications: 8,
            seed: 4,
            options: EngineOptions::default(),
            method: Method::Prar,
        };
        let a = run_bench(&plan).unwrap();
        let b = run_bench(&plan).unwrap();
        assert_eq!(a.len(), 2);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.draws_total, y.draws_total);
            assert_eq!(x.attempts_mean, y.attempts_mean);
            assert!(x.draws_per_dim > 0.0);
        }
        let csv = to_csv(&a);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn sizes_must_increase() {
        let plan = BenchPlan {
            model: "hardcore:lambda=0.5".parse().unwrap(),
            family: Generator::Cycle(3),
            sizes: vec![100, 50],
            replications: 1,
            seed: 0,
            options: EngineOptions::default(),
            method: Method::Prar,
        };
        assert!(run_bench(&plan).is_err());
    }

    #[test]
    fn budget_failures_are_recorded() {
        let plan = BenchPlan {
            model: "hardcore:lambda=20".parse().unwrap(),
            family: Generator::Grid { rows: 1, cols: 1 },
            sizes: vec![400],
            replications: 3,
            seed: 0,
            options: EngineOptions::with_budget(50),
            method: Method::Prar,
        };
        let r = run_bench(&plan).unwrap();
        assert_eq!(r[0].failures, 3);
        assert!(r[0].draws_per_dim.is_nan());
    }
}
