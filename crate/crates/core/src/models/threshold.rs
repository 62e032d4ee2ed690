//! Drift quantities that decide whether the recursion shrinks on average.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::ModelSpec;

/// `γ(λ, Δ) = λ/(1+λ) · Σ_{i=1}^{Δ−1} (1 − λ/(1+λ)^Δ)^{i−1}`.
///
/// The expected number of new backbone nodes a hard-core tip spawns before
/// it is resolved. Zero for `Δ <= 1`.
pub fn gamma_hardcore(lambda: f64, delta: usize) -> f64 {
    if delta <= 1 || lambda <= 0.0 {
        return 0.0;
    }
    let a = lambda / (1.0 + lambda);
    let r = 1.0 - lambda / (1.0 + lambda).powi(delta as i32);
    let mut sum = 0.0;
    let mut term = 1.0;
    for _ in 1..delta {
        sum += term;
        term *= r;
    }
    a * sum
}

/// The `λ` at which `γ(λ, Δ) = 1`, by bisection to `1e-6` or tighter.
///
/// For `Δ = 2`, `γ = λ/(1+λ)` never reaches 1 and the result is infinite.
pub fn critical_lambda_hardcore(delta: usize) -> Result<f64> {
    if delta < 2 {
        return Err(Error::param(format!("critical lambda needs max degree >= 2, got {delta}")));
    }
    if delta == 2 {
        return Ok(f64::INFINITY);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while gamma_hardcore(hi, delta) < 1.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if gamma_hardcore(mid, delta) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Published critical values of two earlier exact samplers for hard-core,
/// kept for side-by-side display.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub delta: usize,
    /// Randomness recycler.
    pub rr: f64,
    /// Clan of ancestors.
    pub coa: f64,
}

pub const REFERENCE_TABLE: [ReferenceRow; 3] = [
    ReferenceRow { delta: 3, rr: 0.2, coa: 0.5 },
    ReferenceRow { delta: 4, rr: 0.142857, coa: 0.333 },
    ReferenceRow { delta: 5, rr: 0.111111, coa: 0.25 },
];

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdReport {
    pub model: &'static str,
    pub delta: usize,
    /// The drift quantity; the recursion is subcritical iff it is below 1.
    pub gamma: f64,
    pub subcritical: bool,
    /// Bound `C` on expected draws per node (hard-core, when subcritical).
    pub cost_bound: Option<f64>,
    /// Hard-core only.
    pub critical_lambda: Option<f64>,
    /// Further quantities worth showing next to `gamma`.
    pub extra: Vec<(&'static str, f64)>,
    pub notes: Vec<String>,
}

impl ThresholdReport {
    /// `gamma − 1`: negative means the unresolved count shrinks on average.
    pub fn drift(&self) -> f64 {
        self.gamma - 1.0
    }

    fn new(model: &'static str, delta: usize, gamma: f64) -> Self {
        Self {
            model,
            delta,
            gamma,
            subcritical: gamma < 1.0,
            cost_bound: None,
            critical_lambda: None,
            extra: Vec::new(),
            notes: Vec::new(),
        }
    }
}

/// Evaluate the model's drift on the maximum degree of `g`.
pub fn subcritical_check(model: &ModelSpec, g: &Graph) -> ThresholdReport {
    threshold_for_delta(model, g.max_degree())
}

/// Same as [`subcritical_check`] for a bare maximum degree.
pub fn threshold_for_delta(model: &ModelSpec, delta: usize) -> ThresholdReport {
    let below = delta.saturating_sub(1) as f64;
    match model {
        ModelSpec::Hardcore(p) => {
            let lambda = p.lambda();
            let gamma = gamma_hardcore(lambda, delta);
            let mut r = ThresholdReport::new("hardcore", delta, gamma);
            if r.subcritical {
                r.cost_bound = Some(1.0 + lambda * delta as f64 * below / (1.0 - gamma));
            }
            r.critical_lambda = critical_lambda_hardcore(delta).ok();
            r
        }
        ModelSpec::Strauss(p) => {
            let strength = p.alpha() * below;
            let mut r = ThresholdReport::new("strauss", delta, p.activity() * strength);
            r.extra.push(("alpha_times_delta_minus_1", strength));
            if strength > 1.0 {
                r.extra.push(("lambda_limit", 1.0 / (strength - 1.0)));
            } else {
                r.notes.push("alpha*(delta-1) <= 1: subcritical for every lambda".into());
            }
            r
        }
        ModelSpec::Autonormal(p) => {
            let beta = p.beta();
            let mut r = ThresholdReport::new("autonormal", delta, below * (1.0 - (-beta).exp()));
            let alt = below * (-beta).exp();
            r.extra.push(("delta_minus_1_times_exp_neg_beta", alt));
            r.extra.push(("beta_below_that", f64::from(u8::from(beta < alt))));
            r.notes.push(
                "gamma = (delta-1)(1-exp(-beta)) bounds the expected number of neighbors a node \
                 must look at; the other two quantities are shown for comparison"
                    .into(),
            );
            r
        }
        ModelSpec::RandomCluster(p) => {
            let mut r = ThresholdReport::new("random-cluster", delta, delta as f64 * p.p());
            r.notes.push("subcritical iff p < 1/delta".into());
            r
        }
        ModelSpec::Wilson { .. } => {
            let mut r = ThresholdReport::new("wilson", delta, 0.0);
            r.notes.push("no drift condition: cycle popping terminates on any connected graph".into());
            r
        }
    }
}

impl fmt::Display for ThresholdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model        {}", self.model)?;
        writeln!(f, "delta        {}", self.delta)?;
        writeln!(f, "gamma        {:.6}", self.gamma)?;
        writeln!(f, "drift        {:.6}", self.drift())?;
        writeln!(f, "subcritical  {}", self.subcritical)?;
        match self.cost_bound {
            Some(c) => writeln!(f, "C bound      {c:.6}")?,
            None => writeln!(f, "C bound      n/a")?,
        }
        if let Some(lc) = self.critical_lambda {
            writeln!(f, "lambda_c     {lc:.6}")?;
        }
        for (k, v) in &self.extra {
            writeln!(f, "{k}  {v:.6}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
