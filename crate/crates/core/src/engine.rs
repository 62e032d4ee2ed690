//! Partially recursive acceptance rejection and the plain AR baseline.
//!
//! # How the recursion is laid out
//!
//! A call `PRAR(S, D)` picks `d ∈ S`, draws `X(d)` from its marginal under
//! μ, and decides whether `X(d)` survives a joint acceptance test against an
//! exact draw from the model restricted to `D \ {d}`. That inner draw is
//! itself produced by `PRAR` and only revealed as far as the test needs.
//!
//! Unrolled, every resolved dimension is a *level* in a chain. Level `k`
//! holds dimension `d_k`, and the model seen below it is `D` minus
//! `d_1..=d_k`. From the point of view of level `k`, a dimension is:
//!
//! * removed if it sits at a level `<= k` (its interaction with `d_k` was
//!   charged to the shallower level),
//! * known if it sits deeper (it was resolved inside `k`'s own subtree and
//!   has been accepted),
//! * unknown otherwise; asking for it appends a new level at the end of the
//!   chain.
//!
//! A level whose test is still running is *pending*. Pending levels form a
//! stack; only the deepest one runs, and every level below it in the chain
//! is already accepted. When a pending level rejects, everything deeper is
//! discarded, its own label is redrawn and its test restarts. When it
//! accepts, control returns to the pending level above it.
//!
//! Top-level targets are queried in ascending id order. A target already
//! resolved as part of an earlier target's subtree is reused as is: the
//! revealed coordinates all come from one exact joint draw, no matter how
//! adaptively they are queried.
//!
//! The depth of the recursion is bounded only by the number of dimensions;
//! nothing here uses the call stack for it.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::rng::{DrawCounter, RngStream};

/// Draw budget applied when none is given: 10⁹ primitive draws per sample.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

const UNRESOLVED: u32 = u32::MAX;

/// What the deepest pending level sees when it looks at a dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lookup<L> {
    Removed,
    Known(L),
    Unknown,
}

/// Read access to the resolution state, from the point of view of one level.
pub trait View<L> {
    fn lookup(&self, dim: usize) -> Lookup<L>;

    fn is_removed(&self, dim: usize) -> bool {
        matches!(self.lookup(dim), Lookup::Removed)
    }
}

/// Outcome of advancing a level's acceptance test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Accept,
    Reject,
    /// The test cannot finish without the label of this unknown dimension.
    Need(usize),
}

/// A model as seen by the engine: a μ-marginal sampler per dimension and an
/// incremental acceptance test for the interaction between one dimension
/// and the rest of the model below it.
///
/// Every density here is a product of interaction factors bounded by 1, so
/// the bound `M` is 1 throughout and `accept_prob` is the factor `w₁₂`
/// itself.
pub trait ModelContract {
    type Label: Copy + PartialEq + Debug;
    /// Per-level test state (cursor, auxiliary uniforms, search frontier).
    type Check;

    fn dimension_count(&self) -> usize;

    /// Draw the label of `dim` from μ.
    fn sample_marginal(&self, dim: usize, rng: &mut RngStream) -> Self::Label;

    fn begin_check(&self, dim: usize, label: Self::Label) -> Self::Check;

    /// Run the test until it accepts, rejects, or needs an unknown label.
    /// Called again with the same `check` once that label is known.
    fn advance<V: View<Self::Label>>(
        &self,
        dim: usize,
        label: Self::Label,
        check: &mut Self::Check,
        view: &V,
        rng: &mut RngStream,
    ) -> Step;

    /// `min` of the interaction factor over every completion of the
    /// dimensions not removed; the chance the test passes without recursing.
    fn unconditional_accept_prob<V: View<Self::Label>>(
        &self,
        dim: usize,
        label: Self::Label,
        view: &V,
    ) -> f64;

    /// The interaction factor for a full completion (labels indexed by
    /// dimension; entries for removed dimensions are ignored).
    fn accept_prob<V: View<Self::Label>>(
        &self,
        dim: usize,
        label: Self::Label,
        view: &V,
        completion: &[Self::Label],
    ) -> f64;

    /// Unknown dimensions the exact test can depend on, given what is
    /// already resolved. May be larger than the smallest sufficient set.
    fn dependency_frontier<V: View<Self::Label>>(
        &self,
        dim: usize,
        label: Self::Label,
        view: &V,
    ) -> Vec<usize>;
}

/// Labels on the resolved dimensions `S′ ⊇ S`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialAssignment<L> {
    labels: Vec<Option<L>>,
    order: Vec<usize>,
}

impl<L: Copy> PartialAssignment<L> {
    pub fn new(dimension_count: usize) -> Self {
        Self {
            labels: vec![None; dimension_count],
            order: Vec::new(),
        }
    }

    pub(crate) fn insert(&mut self, dim: usize, label: L) {
        debug_assert!(self.labels[dim].is_none(), "dimension {dim} resolved twice");
        self.labels[dim] = Some(label);
        self.order.push(dim);
    }

    pub fn get(&self, dim: usize) -> Option<L> {
        self.labels.get(dim).copied().flatten()
    }

    pub fn contains(&self, dim: usize) -> bool {
        self.get(dim).is_some()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Resolved dimensions in level order (outermost first).
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// `(dim, label)` pairs in ascending dimension order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, L)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(d, l)| l.map(|l| (d, l)))
    }

    /// Labels for `dims`, in the order given; `None` if any is unresolved.
    pub fn project(&self, dims: &[usize]) -> Option<Vec<L>> {
        dims.iter().map(|&d| self.get(d)).collect()
    }

    /// Every label, if every dimension is resolved.
    pub fn to_dense(&self) -> Option<Vec<L>> {
        self.labels.iter().copied().collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SampleStats {
    /// Proposals made at the outermost level: 1 plus the rejections seen
    /// by levels opened directly for a target dimension.
    pub attempts: u64,
    /// Rejections at any level.
    pub rejections: u64,
    /// Labels drawn, including ones later discarded.
    pub proposals: u64,
    /// Largest number of simultaneously pending levels.
    pub recursion_depth_max: usize,
    pub draws: DrawCounter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    /// Maximum primitive draws for one sample before giving up.
    pub budget: u64,
    /// Mutation-testing hook: treat every rejection as an acceptance. The
    /// resulting sampler is wrong on purpose; exactness checks must catch it.
    pub ignore_rejections: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            ignore_rejections: false,
        }
    }
}

impl EngineOptions {
    pub fn with_budget(budget: u64) -> Self {
        Self {
            budget,
            ..Self::default()
        }
    }
}

struct Pending<C> {
    level: usize,
    check: C,
    top: bool,
}

/// Reusable PRAR sampler for one model; buffers persist across samples.
pub struct PrarSampler<'m, M: ModelContract> {
    model: &'m M,
    options: EngineOptions,
    depth_of: Vec<u32>,
    chain: Vec<(usize, M::Label)>,
    pending: Vec<Pending<M::Check>>,
}

struct LevelView<'a, L> {
    depth_of: &'a [u32],
    chain: &'a [(usize, L)],
    current: usize,
}

impl<L: Copy> View<L> for LevelView<'_, L> {
    #[inline]
    fn lookup(&self, dim: usize) -> Lookup<L> {
        match self.depth_of[dim] {
            UNRESOLVED => Lookup::Unknown,
            k if (k as usize) <= self.current => Lookup::Removed,
            k => Lookup::Known(self.chain[k as usize].1),
        }
    }
}

impl<'m, M: ModelContract> PrarSampler<'m, M> {
    pub fn new(model: &'m M, options: EngineOptions) -> Self {
        Self {
            model,
            options,
            depth_of: vec![UNRESOLVED; model.dimension_count()],
            chain: Vec::new(),
            pending: Vec::new(),
        }
    }

    /// Draw the labels of `target` (and possibly more) from one exact joint
    /// draw of the model.
    pub fn sample(
        &mut self,
        target: &[usize],
        rng: &mut RngStream,
    ) -> Result<(PartialAssignment<M::Label>, SampleStats)> {
        let n = self.model.dimension_count();
        if let Some(&bad) = target.iter().find(|&&d| d >= n) {
            return Err(Error::param(format!(
                "target dimension {bad} out of range for a model with {n} dimensions"
            )));
        }
        if n > UNRESOLVED as usize {
            return Err(Error::param("too many dimensions"));
        }
        let mut order = target.to_vec();
        order.sort_unstable();
        order.dedup();

        let start = rng.counter();
        let mut stats = SampleStats {
            attempts: 1,
            ..SampleStats::default()
        };
        let outcome = order
            .iter()
            .try_for_each(|&dim| self.resolve(dim, rng, start, &mut stats));
        stats.draws = rng.counter() - start;

        let result = outcome.map(|()| {
            let mut assignment = PartialAssignment::new(n);
            for &(dim, label) in &self.chain {
                assignment.insert(dim, label);
            }
            assignment
        });
        self.reset();
        result.map(|a| (a, stats))
    }

    fn reset(&mut self) {
        for &(dim, _) in &self.chain {
            self.depth_of[dim] = UNRESOLVED;
        }
        self.chain.clear();
        self.pending.clear();
    }

    fn open_level(&mut self, dim: usize, top: bool, rng: &mut RngStream, stats: &mut SampleStats) {
        let label = self.model.sample_marginal(dim, rng);
        stats.proposals += 1;
        let level = self.chain.len();
        self.depth_of[dim] = level as u32;
        self.chain.push((dim, label));
        self.pending.push(Pending {
            level,
            check: self.model.begin_check(dim, label),
            top,
        });
        stats.recursion_depth_max = stats.recursion_depth_max.max(self.pending.len());
    }

    fn resolve(
        &mut self,
        dim: usize,
        rng: &mut RngStream,
        start: DrawCounter,
        stats: &mut SampleStats,
    ) -> Result<()> {
        if self.depth_of[dim] != UNRESOLVED {
            return Ok(());
        }
        self.open_level(dim, true, rng, stats);

        while let Some(top) = self.pending.last_mut() {
            let used = (rng.counter() - start).total();
            if used > self.options.budget {
                stats.draws = rng.counter() - start;
                return Err(Error::BudgetExceeded {
                    budget: self.options.budget,
                    draws: stats.draws,
                    attempts: stats.attempts,
                });
            }
            let level = top.level;
            let (dim, label) = self.chain[level];
            let view = LevelView {
                depth_of: &self.depth_of,
                chain: &self.chain,
                current: level,
            };
            let step = self.model.advance(dim, label, &mut top.check, &view, rng);
            match step {
                Step::Accept => {
                    self.pending.pop();
                }
                Step::Reject if self.options.ignore_rejections => {
                    self.pending.pop();
                }
                Step::Reject => {
                    stats.rejections += 1;
                    if top.top {
                        stats.attempts += 1;
                    }
                    // Discard the failed attempt's subtree and redraw.
                    for &(d, _) in &self.chain[level + 1..] {
                        self.depth_of[d] = UNRESOLVED;
                    }
                    self.chain.truncate(level + 1);
                    let label = self.model.sample_marginal(dim, rng);
                    stats.proposals += 1;
                    self.chain[level].1 = label;
                    top.check = self.model.begin_check(dim, label);
                }
                Step::Need(next) => {
                    debug_assert_eq!(self.depth_of[next], UNRESOLVED, "model asked for a resolved dimension");
                    self.open_level(next, false, rng, stats);
                }
            }
        }
        Ok(())
    }
}

/// One PRAR draw of the labels on `target`.
pub fn prar_sample<M: ModelContract>(
    model: &M,
    target: &[usize],
    rng: &mut RngStream,
    options: EngineOptions,
) -> Result<(PartialAssignment<M::Label>, SampleStats)> {
    PrarSampler::new(model, options).sample(target, rng)
}

/// A target for plain acceptance rejection: an easy base measure and a
/// density ratio `w(x)/M ∈ [0, 1]`.
pub trait ArTarget {
    type Label: Copy;

    fn dimension_count(&self) -> usize;

    fn mu_sample(&self, rng: &mut RngStream) -> Vec<Self::Label>;

    fn weight_ratio(&self, config: &[Self::Label]) -> f64;
}

/// Draw full configurations from μ until one passes `U < w(X)/M`.
///
/// A proposal with ratio 1 is accepted without drawing `U`.
pub fn plain_ar_sample<T: ArTarget>(
    target: &T,
    rng: &mut RngStream,
    options: EngineOptions,
) -> Result<(Vec<T::Label>, SampleStats)> {
    let start = rng.counter();
    let mut stats = SampleStats::default();
    loop {
        stats.attempts += 1;
        stats.proposals += 1;
        let x = target.mu_sample(rng);
        let ratio = target.weight_ratio(&x);
        if ratio >= 1.0 || options.ignore_rejections || rng.uniform() < ratio {
            stats.draws = rng.counter() - start;
            return Ok((x, stats));
        }
        stats.rejections += 1;
        let used = rng.counter() - start;
        if used.total() > options.budget {
            return Err(Error::BudgetExceeded {
                budget: options.budget,
                draws: used,
                attempts: stats.attempts,
            });
        }
    }
}
