//! Joint dimension selection and motif-set search.
//!
//! Every window is tried as the query of a candidate set. Per dimension the
//! query's non-trivial `(k-1)`-NN are extracted; the `f` dimensions with the
//! smallest `(k-1)`-th neighbour distance are selected and the neighbour row
//! of the best of them becomes the candidate set. Its extent in the selected
//! dimensions is compared against the best so far.
//!
//! Pruning uses the largest query-to-member distance of the candidate set,
//! summed over the selected dimensions. That pair is one of the pairs the
//! extent maximises over, so the bound never exceeds the extent and pruning
//! cannot change the result. When `sqrt` of the measure is a metric the same
//! quantity bounds the extent from above by a factor of 4.

use alloc::vec;
use alloc::vec::Vec;

use crate::distance::{DistanceMeasure, DistanceSource};
use crate::error::{ensure_param, CoreError, Result};
use crate::knn::{KnnScratch, KnnTable};
use crate::series::OverlapRule;

/// Queries processed before the first update of the pruning threshold.
///
/// Blocks double up to [`MAX_QUERY_BLOCK`]. The schedule is fixed so that
/// counters and results do not depend on the thread count.
const FIRST_QUERY_BLOCK: usize = 16;
const MAX_QUERY_BLOCK: usize = 1024;

/// Where candidate sets come from once the `f` dimensions are selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CandidateSource {
    /// Neighbour row of the single lowest-distance selected dimension.
    #[default]
    BestDimension,
    /// Neighbour rows of every selected dimension; the smallest extent wins.
    SelectedDimensions,
}

/// Parameters of one search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LamaConfig {
    /// Motif set size.
    pub k: usize,
    /// Number of dimensions to select.
    pub f: usize,
    /// Trivial-match rule; its window must match the distance source.
    pub rule: OverlapRule,
    /// Skip candidates whose lower bound exceeds the best extent.
    pub pruning: bool,
    /// Candidate set construction.
    pub candidates: CandidateSource,
}

impl LamaConfig {
    /// Pruning on, candidates from the best dimension.
    pub fn new(k: usize, f: usize, rule: OverlapRule) -> Self {
        Self {
            k,
            f,
            rule,
            pruning: true,
            candidates: CandidateSource::BestDimension,
        }
    }

    /// Same configuration with pruning toggled.
    pub fn with_pruning(mut self, pruning: bool) -> Self {
        self.pruning = pruning;
        self
    }

    /// Same configuration with a different candidate source.
    pub fn with_candidates(mut self, candidates: CandidateSource) -> Self {
        self.candidates = candidates;
        self
    }

    pub(crate) fn validate(&self, source: &impl DistanceSource) -> Result<()> {
        ensure_param!(self.k >= 2, "motif set size k must be at least 2, got {}", self.k);
        ensure_param!(
            self.f >= 1 && self.f <= source.dims(),
            "f = {} outside [1, {}]",
            self.f,
            source.dims()
        );
        ensure_param!(
            self.rule.window() == source.window(),
            "overlap rule window {} differs from distance window {}",
            self.rule.window(),
            source.window()
        );
        Ok(())
    }
}

/// A discovered leitmotif.
#[derive(Debug, Clone, PartialEq)]
pub struct Leitmotif {
    /// Query window the set was built around.
    pub query: usize,
    /// Start offsets of the `k` occurrences, ascending.
    pub offsets: Vec<usize>,
    /// Selected dimensions, ascending.
    pub dims: Vec<usize>,
    /// Largest pairwise distance summed over `dims`.
    pub extent: f64,
    /// Window length.
    pub window: usize,
    /// Distance measure.
    pub measure: DistanceMeasure,
}

impl Leitmotif {
    /// Recomputes the extent from `source` without early abort.
    pub fn recompute_extent(&self, source: &impl DistanceSource) -> f64 {
        pairwise_extent(source, &self.dims, &self.offsets, f64::INFINITY)
    }
}

/// Work counters of a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LamaStats {
    /// Queries visited.
    pub queries: usize,
    /// Queries skipped because fewer than `f` dimensions had a feasible k-NN row.
    pub infeasible: usize,
    /// Candidates skipped by the lower bound.
    pub pruned: usize,
    /// Candidates whose extent was computed.
    pub evaluated: usize,
    /// Extent computations stopped early.
    pub aborted: usize,
}

impl core::ops::AddAssign for LamaStats {
    fn add_assign(&mut self, o: Self) {
        self.queries += o.queries;
        self.infeasible += o.infeasible;
        self.pruned += o.pruned;
        self.evaluated += o.evaluated;
        self.aborted += o.aborted;
    }
}

/// Result of [`lama`].
#[derive(Debug, Clone, PartialEq)]
pub struct LamaOutput {
    /// Minimum-extent leitmotif.
    pub leitmotif: Leitmotif,
    /// Work counters.
    pub stats: LamaStats,
}

/// One query's candidate after dimension selection.
#[derive(Debug, Clone, PartialEq)]
pub struct LeitmotifCandidate {
    /// Query window.
    pub query: usize,
    /// Per-dimension k-NN rows of the query.
    pub knn: KnnTable,
    /// Selected dimensions by ascending `(k-1)`-th neighbour distance.
    pub selected_dims: Vec<usize>,
    /// Offsets of the candidate set (query first).
    pub candidate_set: Vec<usize>,
    /// Sum of the `(k-1)`-th neighbour distance over the selected dimensions.
    pub knn_dist: f64,
    /// Largest query-to-member distance of the candidate set over the
    /// selected dimensions; a lower bound on its extent.
    pub bound: f64,
}

impl LeitmotifCandidate {
    /// Builds the candidate of `query`; `None` if fewer than `f` dimensions
    /// have a feasible k-NN row.
    pub fn build(
        source: &impl DistanceSource,
        query: usize,
        config: &LamaConfig,
        scratch: &mut KnnScratch,
    ) -> Option<Self> {
        let knn = source.knn_table(query, config.k, &config.rule, scratch);
        let (selected_dims, candidate_set) = select_f_dimensions(&knn, config.f)?;
        let knn_dist = selected_dims.iter().map(|&d| knn.row(d).kth_distance()).sum();
        let sorted = sorted_dims(&selected_dims);
        let bound = query_radius(source, &sorted, query, &candidate_set);
        Some(Self {
            query,
            knn,
            selected_dims,
            candidate_set,
            knn_dist,
            bound,
        })
    }
}

/// Picks the `f` dimensions with the smallest `(k-1)`-th neighbour distance
/// (ties by lower index) and returns them with the neighbour row of the first.
///
/// `None` when fewer than `f` dimensions have a feasible row.
pub fn select_f_dimensions(knn: &KnnTable, f: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    if f == 0 || f > knn.dims() {
        return None;
    }
    let mut order: Vec<usize> = (0..knn.dims()).collect();
    order.sort_by(|&a, &b| {
        knn.row(a)
            .kth_distance()
            .total_cmp(&knn.row(b).kth_distance())
            .then(a.cmp(&b))
    });
    order.truncate(f);
    if order.iter().any(|&d| !knn.row(d).feasible) {
        return None;
    }
    let candidate = knn.row(order[0]).offsets.clone();
    Some((order, candidate))
}

fn sorted_dims(dims: &[usize]) -> Vec<usize> {
    let mut v = dims.to_vec();
    v.sort_unstable();
    v
}

#[inline]
fn pair_distance(source: &impl DistanceSource, dims: &[usize], a: usize, b: usize) -> f64 {
    dims.iter().map(|&d| source.distance(d, a, b)).sum()
}

fn query_radius(source: &impl DistanceSource, dims: &[usize], query: usize, set: &[usize]) -> f64 {
    set.iter()
        .filter(|&&o| o != query)
        .map(|&o| pair_distance(source, dims, query, o))
        .fold(0.0, f64::max)
}

/// Largest pairwise distance of `offsets`, summed over `dims`.
///
/// Stops as soon as one pair exceeds `best_so_far` and returns that pair's
/// distance, which is then `> best_so_far`. Pass `f64::INFINITY` for the
/// exact extent. Pair sums are accumulated over `dims` in the order given.
pub fn pairwise_extent(source: &impl DistanceSource, dims: &[usize], offsets: &[usize], best_so_far: f64) -> f64 {
    let mut extent = 0.0f64;
    for (i, &a) in offsets.iter().enumerate() {
        for &b in &offsets[i + 1..] {
            let d = pair_distance(source, dims, a, b);
            if d > best_so_far {
                return d;
            }
            extent = extent.max(d);
        }
    }
    extent
}

#[derive(Debug, Clone)]
struct Best {
    extent: f64,
    query: usize,
    offsets: Vec<usize>,
    dims: Vec<usize>,
}

fn better(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (Some(x), Some(y)) => {
            if (y.extent, y.query) < (x.extent, x.query) {
                Some(y)
            } else {
                Some(x)
            }
        }
        (x, None) => x,
        (None, y) => y,
    }
}

fn visit_query(
    source: &impl DistanceSource,
    config: &LamaConfig,
    query: usize,
    threshold: f64,
    scratch: &mut KnnScratch,
) -> (LamaStats, Option<Best>) {
    let mut stats = LamaStats {
        queries: 1,
        ..LamaStats::default()
    };
    let Some(cand) = LeitmotifCandidate::build(source, query, config, scratch) else {
        stats.infeasible = 1;
        return (stats, None);
    };
    let dims = sorted_dims(&cand.selected_dims);
    let rows: Vec<Vec<usize>> = match config.candidates {
        CandidateSource::BestDimension => vec![cand.candidate_set.clone()],
        CandidateSource::SelectedDimensions => cand
            .selected_dims
            .iter()
            .map(|&d| cand.knn.row(d).offsets.clone())
            .collect(),
    };
    let mut best: Option<Best> = None;
    let mut any = false;
    for (r, set) in rows.into_iter().enumerate() {
        let bound = if r == 0 {
            cand.bound
        } else {
            query_radius(source, &dims, query, &set)
        };
        let limit = if config.pruning {
            best.as_ref().map_or(threshold, |b| b.extent.min(threshold))
        } else {
            f64::INFINITY
        };
        if config.pruning && bound > limit {
            continue;
        }
        any = true;
        let extent = pairwise_extent(source, &dims, &set, limit);
        if extent > limit {
            stats.aborted += 1;
            continue;
        }
        debug_assert!(bound <= extent, "lower bound {bound} above extent {extent}");
        if best.as_ref().is_none_or(|b| extent < b.extent) {
            let mut offsets = set;
            offsets.sort_unstable();
            best = Some(Best {
                extent,
                query,
                offsets,
                dims: dims.clone(),
            });
        }
    }
    if any {
        stats.evaluated = 1;
    } else {
        stats.pruned = 1;
    }
    (stats, best)
}

/// Runs the candidate search over every query window and returns the
/// minimum-extent leitmotif (ties broken by the smaller query offset).
///
/// Fails with [`CoreError::NoLeitmotif`] when no query has a feasible
/// candidate.
pub fn lama(source: &impl DistanceSource, config: &LamaConfig) -> Result<LamaOutput> {
    config.validate(source)?;
    let m = source.windows();
    let mut stats = LamaStats::default();
    let mut best: Option<Best> = None;
    let mut start = 0;
    let mut block = FIRST_QUERY_BLOCK;
    while start < m {
        let end = (start + block).min(m);
        block = (block * 2).min(MAX_QUERY_BLOCK);
        let threshold = best.as_ref().map_or(f64::INFINITY, |b| b.extent);
        let (block_stats, block_best) = run_block(source, config, start..end, threshold);
        stats += block_stats;
        best = better(best, block_best);
        start = end;
    }
    let best = best.ok_or(CoreError::NoLeitmotif)?;
    Ok(LamaOutput {
        leitmotif: Leitmotif {
            query: best.query,
            offsets: best.offsets,
            dims: best.dims,
            extent: best.extent,
            window: source.window(),
            measure: source.measure(),
        },
        stats,
    })
}

#[cfg(feature = "parallel")]
fn run_block(
    source: &impl DistanceSource,
    config: &LamaConfig,
    queries: core::ops::Range<usize>,
    threshold: f64,
) -> (LamaStats, Option<Best>) {
    use rayon::prelude::*;
    queries
        .into_par_iter()
        .fold(
            || (LamaStats::default(), None, KnnScratch::new()),
            |(mut stats, best, mut scratch), q| {
                let (s, b) = visit_query(source, config, q, threshold, &mut scratch);
                stats += s;
                (stats, better(best, b), scratch)
            },
        )
        .map(|(s, b, _)| (s, b))
        .reduce(
            || (LamaStats::default(), None),
            |(mut s1, b1), (s2, b2)| {
                s1 += s2;
                (s1, better(b1, b2))
            },
        )
}

#[cfg(not(feature = "parallel"))]
fn run_block(
    source: &impl DistanceSource,
    config: &LamaConfig,
    queries: core::ops::Range<usize>,
    threshold: f64,
) -> (LamaStats, Option<Best>) {
    let mut scratch = KnnScratch::new();
    let mut stats = LamaStats::default();
    let mut best = None;
    for q in queries {
        let (s, b) = visit_query(source, config, q, threshold, &mut scratch);
        stats += s;
        best = better(best, b);
    }
    (stats, best)
}
