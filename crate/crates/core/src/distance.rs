//! Subsequence distance measures and the per-dimension distance matrix.
//!
//! All four measures are evaluated from a sliding dot product. Rows of the
//! distance matrix are streamed STOMP-style: the dot product of windows
//! `(i, j)` is derived from `(i - 1, j - 1)` with one subtraction and one
//! addition, so a full `m x m` matrix costs `O(m^2)` regardless of `l`.
//!
//! Every diagonal is re-seeded with a direct `O(l)` dot product whenever the
//! smaller of the two offsets is a multiple of [`RESEED_PERIOD`]. The value of
//! a pair therefore depends only on the pair, not on which row or thread
//! produced it, which makes the matrix bit-exactly symmetric and lets the
//! sparse two-pass store reproduce dense values bit for bit.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{ensure_param, CoreError, Result};
use crate::knn::{KnnScratch, KnnTable};
use crate::series::{window_moments, MultivariateTimeSeries, OverlapRule, FLAT_EPSILON};

/// Rolling dot products are recomputed directly at this period along every
/// diagonal, bounding accumulated rounding error.
pub const RESEED_PERIOD: usize = 256;

/// Rows per work unit when streaming the matrix; a multiple of the reseed period.
pub(crate) const ROW_BLOCK: usize = 4 * RESEED_PERIOD;

/// Floor for the complexity estimate used by CID.
pub const COMPLEXITY_EPSILON: f64 = 1e-8;

/// Subsequence distance measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DistanceMeasure {
    /// Squared z-normalized Euclidean distance.
    #[default]
    ZNormalizedEuclidean,
    /// Squared Euclidean distance.
    Euclidean,
    /// Cosine distance `1 - cos`.
    Cosine,
    /// Complexity invariant distance: squared ED times the complexity factor.
    ComplexityInvariant,
}

impl DistanceMeasure {
    /// Short tag used in files and on the command line.
    pub fn tag(self) -> &'static str {
        match self {
            Self::ZNormalizedEuclidean => "zed",
            Self::Euclidean => "ed",
            Self::Cosine => "cd",
            Self::ComplexityInvariant => "cid",
        }
    }

    /// All measures.
    pub const ALL: [DistanceMeasure; 4] = [
        Self::ZNormalizedEuclidean,
        Self::Euclidean,
        Self::Cosine,
        Self::ComplexityInvariant,
    ];

    /// Whether distances are squared Euclidean, so their square roots obey the
    /// triangle inequality.
    pub fn is_squared_metric(self) -> bool {
        matches!(self, Self::ZNormalizedEuclidean | Self::Euclidean)
    }
}

impl fmt::Display for DistanceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for DistanceMeasure {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zed" | "z-ed" | "znorm" => Ok(Self::ZNormalizedEuclidean),
            "ed" | "euclidean" => Ok(Self::Euclidean),
            "cd" | "cosine" => Ok(Self::Cosine),
            "cid" => Ok(Self::ComplexityInvariant),
            other => Err(crate::error::param_error(format_args!(
                "unknown distance measure '{other}' (expected zed, ed, cd or cid)"
            ))),
        }
    }
}

/// Mean and population standard deviation of one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats {
    /// Arithmetic mean.
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

impl WindowStats {
    /// Two-pass statistics of `x`.
    pub fn of(x: &[f64]) -> Self {
        let l = x.len() as f64;
        let mean = x.iter().sum::<f64>() / l;
        let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / l;
        Self {
            mean,
            std: libm::sqrt(var),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn zed_from_dot(dot: f64, l: usize, a: WindowStats, b: WindowStats) -> f64 {
    let flat_a = a.std < FLAT_EPSILON;
    let flat_b = b.std < FLAT_EPSILON;
    let lf = l as f64;
    match (flat_a, flat_b) {
        (true, true) => 0.0,
        (true, false) | (false, true) => 2.0 * lf,
        (false, false) => {
            let rho = (dot - lf * a.mean * b.mean) / (lf * a.std * b.std);
            (2.0 * lf * (1.0 - rho.clamp(-1.0, 1.0))).max(0.0)
        }
    }
}

/// Squared z-normalized Euclidean distance `2l (1 - pearson(a, b))`.
///
/// Both windows flat gives 0; exactly one flat gives `2l`.
pub fn zed_squared(a: &[f64], b: &[f64], stats_a: WindowStats, stats_b: WindowStats) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    zed_from_dot(dot(a, b), a.len(), stats_a, stats_b)
}

/// Squared Euclidean distance.
pub fn ed_squared(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cosine distance `1 - a.b / (|a| |b|)` in `[0, 2]`; 1 if either vector is zero.
pub fn cosine_distance(a: &[f64], b: &[f64]) -> f64 {
    cosine_from_dot(dot(a, b), libm::sqrt(dot(a, a)), libm::sqrt(dot(b, b)))
}

fn cosine_from_dot(dot: f64, norm_a: f64, norm_b: f64) -> f64 {
    if norm_a == 0.0 || norm_b == 0.0 {
        return 1.0;
    }
    (1.0 - dot / (norm_a * norm_b)).clamp(0.0, 2.0)
}

/// Complexity estimate `sqrt(sum (x[i+1] - x[i])^2)`, floored at [`COMPLEXITY_EPSILON`].
pub fn complexity_estimate(x: &[f64]) -> f64 {
    let ce = libm::sqrt(x.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])).sum::<f64>());
    ce.max(COMPLEXITY_EPSILON)
}

fn complexity_factor(ce_a: f64, ce_b: f64) -> f64 {
    ce_a.max(ce_b) / ce_a.min(ce_b)
}

/// Complexity invariant distance: squared ED scaled by `max(CE) / min(CE)`.
pub fn cid(a: &[f64], b: &[f64]) -> f64 {
    ed_squared(a, b) * complexity_factor(complexity_estimate(a), complexity_estimate(b))
}

/// Bytes a dense `d x m x m` matrix of `f64` needs.
pub fn dense_bytes(dims: usize, windows: usize) -> usize {
    dims.saturating_mul(windows)
        .saturating_mul(windows)
        .saturating_mul(core::mem::size_of::<f64>())
}

/// Per-window terms a measure needs besides the dot product.
#[derive(Debug, Clone)]
struct DimTerms {
    /// Series values; shifted by the channel mean for ZED.
    x: Vec<f64>,
    mean: Vec<f64>,
    std: Vec<f64>,
    norm: Vec<f64>,
    complexity: Vec<f64>,
}

/// A series prepared for streaming one measure at one window length.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    measure: DistanceMeasure,
    window: usize,
    windows: usize,
    terms: Vec<DimTerms>,
}

impl Prepared {
    pub(crate) fn new(ts: &MultivariateTimeSeries, l: usize, measure: DistanceMeasure) -> Result<Self> {
        ts.check_window(l)?;
        let m = ts.num_windows(l);
        let mut flat = 0usize;
        let terms = (0..ts.dims())
            .map(|k| {
                let raw = ts.dim(k);
                let x: Vec<f64> = if measure == DistanceMeasure::ZNormalizedEuclidean {
                    // z-normalization is shift invariant; centering keeps the
                    // dot product away from catastrophic cancellation.
                    let shift = raw.iter().sum::<f64>() / raw.len() as f64;
                    raw.iter().map(|v| v - shift).collect()
                } else {
                    raw.to_vec()
                };
                let (mean, std) = window_moments(&x, l);
                flat += std.iter().filter(|&&s| s < FLAT_EPSILON).count();
                let mut norm = Vec::new();
                let mut complexity = Vec::new();
                if measure != DistanceMeasure::ZNormalizedEuclidean {
                    norm = (0..m).map(|i| libm::sqrt(dot(&x[i..i + l], &x[i..i + l]))).collect();
                }
                if measure == DistanceMeasure::ComplexityInvariant {
                    let mut diff = Vec::with_capacity(x.len());
                    diff.push(0.0);
                    let mut acc = 0.0;
                    for w in x.windows(2) {
                        acc += (w[1] - w[0]) * (w[1] - w[0]);
                        diff.push(acc);
                    }
                    complexity = (0..m)
                        .map(|i| libm::sqrt((diff[i + l - 1] - diff[i]).max(0.0)).max(COMPLEXITY_EPSILON))
                        .collect();
                }
                DimTerms {
                    x,
                    mean,
                    std,
                    norm,
                    complexity,
                }
            })
            .collect();
        if flat > 0 && measure == DistanceMeasure::ZNormalizedEuclidean {
            log::debug!(
                "{flat} flat windows at l = {l}: flat/flat pairs score 0, flat/structured pairs score {}",
                2 * l
            );
        }
        Ok(Self {
            measure,
            window: l,
            windows: m,
            terms,
        })
    }

    pub(crate) fn dims(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn windows(&self) -> usize {
        self.windows
    }

    fn direct_dot(&self, dim: usize, a: usize, b: usize) -> f64 {
        let (a, b) = (a.min(b), a.max(b));
        let x = &self.terms[dim].x;
        let l = self.window;
        dot(&x[a..a + l], &x[b..b + l])
    }

    /// Advances the dot product of `(a - 1, b - 1)` to `(a, b)`.
    #[inline]
    fn roll(&self, dim: usize, prev: f64, a: usize, b: usize) -> f64 {
        let (a, b) = (a.min(b), a.max(b));
        let x = &self.terms[dim].x;
        let l = self.window;
        prev - x[a - 1] * x[b - 1] + x[a + l - 1] * x[b + l - 1]
    }

    /// The dot product of windows `a` and `b` along the canonical chain.
    fn canonical_dot(&self, dim: usize, a: usize, b: usize) -> f64 {
        let (a, b) = (a.min(b), a.max(b));
        let seed = a - a % RESEED_PERIOD;
        let delta = b - a;
        let mut v = self.direct_dot(dim, seed, seed + delta);
        for p in seed + 1..=a {
            v = self.roll(dim, v, p, p + delta);
        }
        v
    }

    /// Distance of windows `a` and `b` given their dot product.
    #[inline]
    pub(crate) fn distance_from_dot(&self, dim: usize, a: usize, b: usize, dot: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let (a, b) = (a.min(b), a.max(b));
        let t = &self.terms[dim];
        match self.measure {
            DistanceMeasure::ZNormalizedEuclidean => zed_from_dot(
                dot,
                self.window,
                WindowStats {
                    mean: t.mean[a],
                    std: t.std[a],
                },
                WindowStats {
                    mean: t.mean[b],
                    std: t.std[b],
                },
            ),
            DistanceMeasure::Euclidean => ed_from_dot(dot, t.norm[a], t.norm[b]),
            DistanceMeasure::Cosine => cosine_from_dot(dot, t.norm[a], t.norm[b]),
            DistanceMeasure::ComplexityInvariant => {
                ed_from_dot(dot, t.norm[a], t.norm[b]) * complexity_factor(t.complexity[a], t.complexity[b])
            }
        }
    }

    /// Streams rows `rows` of dimension `dim`, calling `visit(i, row_i)`.
    pub(crate) fn stream_rows(&self, dim: usize, rows: core::ops::Range<usize>, mut visit: impl FnMut(usize, &[f64])) {
        if rows.is_empty() {
            return;
        }
        let mut cursor = RowCursor::new(self, dim, rows.start);
        let mut out = vec![0.0; self.windows];
        for i in rows {
            if i > cursor.row() {
                cursor.advance();
            }
            cursor.distances(&mut out);
            visit(i, &out);
        }
    }
}

/// Sliding dot products of one row of one dimension, advanced row by row.
pub(crate) struct RowCursor<'a> {
    prep: &'a Prepared,
    dim: usize,
    row: usize,
    qt: Vec<f64>,
}

impl<'a> RowCursor<'a> {
    pub(crate) fn new(prep: &'a Prepared, dim: usize, row: usize) -> Self {
        let qt = (0..prep.windows).map(|j| prep.canonical_dot(dim, row, j)).collect();
        Self { prep, dim, row, qt }
    }

    pub(crate) fn row(&self) -> usize {
        self.row
    }

    /// Moves to the next row.
    pub(crate) fn advance(&mut self) {
        let i = self.row + 1;
        let prep = self.prep;
        for j in (0..self.qt.len()).rev() {
            self.qt[j] = if i.min(j) % RESEED_PERIOD == 0 {
                prep.direct_dot(self.dim, i, j)
            } else {
                prep.roll(self.dim, self.qt[j - 1], i, j)
            };
        }
        self.row = i;
    }

    /// Distances of the current row to every window.
    pub(crate) fn distances(&self, out: &mut [f64]) {
        for (j, (o, &d)) in out.iter_mut().zip(&self.qt).enumerate() {
            *o = self.prep.distance_from_dot(self.dim, self.row, j, d);
        }
    }
}

fn ed_from_dot(dot: f64, norm_a: f64, norm_b: f64) -> f64 {
    (norm_a * norm_a + norm_b * norm_b - 2.0 * dot).max(0.0)
}

/// Pairwise subsequence distances for every dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseDistanceMatrix {
    dims: usize,
    windows: usize,
    window: usize,
    measure: DistanceMeasure,
    data: Vec<f64>,
}

impl DenseDistanceMatrix {
    /// Distance of windows `i` and `j` in dimension `dim`.
    #[inline]
    pub fn get(&self, dim: usize, i: usize, j: usize) -> f64 {
        self.data[(dim * self.windows + i) * self.windows + j]
    }

    /// Row `i` of dimension `dim`.
    pub fn row(&self, dim: usize, i: usize) -> &[f64] {
        let start = (dim * self.windows + i) * self.windows;
        &self.data[start..start + self.windows]
    }

    /// Bytes held by the matrix.
    pub fn bytes(&self) -> usize {
        self.data.len() * core::mem::size_of::<f64>()
    }
}

/// Read access to pairwise distances plus per-dimension k-NN extraction.
///
/// Implemented by the dense matrix and by the sparse two-pass store; the
/// search in [`crate::lama`] is generic over it.
pub trait DistanceSource: Sync {
    /// Number of dimensions.
    fn dims(&self) -> usize;
    /// Number of windows `m = n - l + 1`.
    fn windows(&self) -> usize;
    /// Window length `l`.
    fn window(&self) -> usize;
    /// Measure the distances were computed with.
    fn measure(&self) -> DistanceMeasure;
    /// Distance of windows `a` and `b` in dimension `dim`.
    fn distance(&self, dim: usize, a: usize, b: usize) -> f64;
    /// Non-trivial k-NN of `query` in every dimension.
    fn knn_table(&self, query: usize, k: usize, rule: &OverlapRule, scratch: &mut KnnScratch) -> KnnTable;
}

impl DistanceSource for DenseDistanceMatrix {
    fn dims(&self) -> usize {
        self.dims
    }

    fn windows(&self) -> usize {
        self.windows
    }

    fn window(&self) -> usize {
        self.window
    }

    fn measure(&self) -> DistanceMeasure {
        self.measure
    }

    #[inline]
    fn distance(&self, dim: usize, a: usize, b: usize) -> f64 {
        self.get(dim, a, b)
    }

    fn knn_table(&self, query: usize, k: usize, rule: &OverlapRule, scratch: &mut KnnScratch) -> KnnTable {
        KnnTable::new(
            (0..self.dims)
                .map(|dim| scratch.search(self.row(dim, query), k, query, rule))
                .collect(),
        )
    }
}

/// Dense distance matrix with no memory budget.
pub fn pairwise_matrix(ts: &MultivariateTimeSeries, l: usize, measure: DistanceMeasure) -> Result<DenseDistanceMatrix> {
    pairwise_matrix_with_budget(ts, l, measure, usize::MAX)
}

/// Dense distance matrix; fails with [`CoreError::Capacity`] when `d * m^2`
/// doubles exceed `budget_bytes` (use [`crate::sparse`] instead).
pub fn pairwise_matrix_with_budget(
    ts: &MultivariateTimeSeries,
    l: usize,
    measure: DistanceMeasure,
    budget_bytes: usize,
) -> Result<DenseDistanceMatrix> {
    ts.check_window(l)?;
    let m = ts.num_windows(l);
    let required = dense_bytes(ts.dims(), m);
    if required > budget_bytes {
        return Err(CoreError::Capacity {
            required,
            budget: budget_bytes,
        });
    }
    ensure_param!(m >= 1, "no windows of length {l}");
    let prep = Prepared::new(ts, l, measure)?;
    let mut data = vec![0.0; ts.dims() * m * m];
    let fill = |dim: usize, block: usize, chunk: &mut [f64]| {
        let start = block * ROW_BLOCK;
        let end = (start + ROW_BLOCK).min(m);
        prep.stream_rows(dim, start..end, |i, row| {
            let off = (i - start) * m;
            chunk[off..off + m].copy_from_slice(row);
        });
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.par_chunks_mut(m * m).enumerate().for_each(|(dim, plane)| {
            plane
                .par_chunks_mut(ROW_BLOCK * m)
                .enumerate()
                .for_each(|(block, chunk)| fill(dim, block, chunk));
        });
    }
    #[cfg(not(feature = "parallel"))]
    for (dim, plane) in data.chunks_mut(m * m).enumerate() {
        for (block, chunk) in plane.chunks_mut(ROW_BLOCK * m).enumerate() {
            fill(dim, block, chunk);
        }
    }
    Ok(DenseDistanceMatrix {
        dims: ts.dims(),
        windows: m,
        window: l,
        measure,
        data,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn znorm(x: &[f64]) -> Vec<f64> {
        let s = WindowStats::of(x);
        x.iter().map(|v| (v - s.mean) / s.std).collect()
    }

    fn random_series(rng: &mut ChaCha8Rng, d: usize, n: usize) -> MultivariateTimeSeries {
        let values = (0..d * n).map(|_| rng.random_range(-3.0..3.0)).collect();
        MultivariateTimeSeries::new(d, n, values).unwrap()
    }

    fn naive(measure: DistanceMeasure, a: &[f64], b: &[f64]) -> f64 {
        match measure {
            DistanceMeasure::ZNormalizedEuclidean => ed_squared(&znorm(a), &znorm(b)),
            DistanceMeasure::Euclidean => ed_squared(a, b),
            DistanceMeasure::Cosine => cosine_distance(a, b),
            DistanceMeasure::ComplexityInvariant => cid(a, b),
        }
    }

    #[test]
    fn zed_identity() {
        let a = [0.3, -1.0, 2.0, 0.5];
        assert!(zed_squared(&a, &a, WindowStats::of(&a), WindowStats::of(&a)).abs() < 1e-12);
    }

    #[test]
    fn zed_reversed_ramp_is_maximal() {
        let a = [0.0, 1.0, 2.0];
        let b = [2.0, 1.0, 0.0];
        let d = zed_squared(&a, &b, WindowStats::of(&a), WindowStats::of(&b));
        assert!((d - 12.0).abs() < 1e-9);
    }

    #[test]
    fn zed_shift_invariant() {
        let a = [0.0, 1.0, 2.0];
        let b = [10.0, 11.0, 12.0];
        assert!(zed_squared(&a, &b, WindowStats::of(&a), WindowStats::of(&b)).abs() < 1e-9);
    }

    #[test]
    fn zed_flat_conventions() {
        let flat = [1.0, 1.0, 1.0, 1.0];
        let other_flat = [7.0, 7.0, 7.0, 7.0];
        let jag = [0.0, 3.0, -1.0, 2.0];
        let s = WindowStats::of;
        assert_eq!(zed_squared(&flat, &other_flat, s(&flat), s(&other_flat)), 0.0);
        assert_eq!(zed_squared(&flat, &jag, s(&flat), s(&jag)), 8.0);
        assert_eq!(zed_squared(&jag, &flat, s(&jag), s(&flat)), 8.0);
    }

    #[test]
    fn other_measures() {
        assert_eq!(ed_squared(&[0.0, 0.0], &[3.0, 4.0]), 25.0);
        let a = [1.0, -2.0, 0.5];
        assert!(cosine_distance(&a, &a).abs() < 1e-12);
        assert_eq!(cosine_distance(&[0.0, 0.0], &[1.0, 2.0]), 1.0);
        let opposite = [-1.0, 2.0, -0.5];
        assert!((cosine_distance(&a, &opposite) - 2.0).abs() < 1e-12);
        // A flat window against a jagged one: CE ratio > 1 inflates the ED.
        let flat = [1.0, 1.0, 1.0, 1.0];
        let jag = [0.0, 2.0, 0.0, 2.0];
        let ed = ed_squared(&flat, &jag);
        assert_eq!(ed, 4.0);
        let c = cid(&flat, &jag);
        assert!(c > ed);
        assert!((c - 4.0 * libm::sqrt(12.0) / COMPLEXITY_EPSILON).abs() / c < 1e-12);
        let gentle = [0.0, 1.0, 2.0, 3.0];
        let steep = [0.0, 2.0, 4.0, 6.0];
        // CE 3^0.5 and 12^0.5: factor 2.
        assert!((cid(&gentle, &steep) - 2.0 * ed_squared(&gentle, &steep)).abs() < 1e-9);
    }

    #[test]
    fn measure_tags_round_trip() {
        for m in DistanceMeasure::ALL {
            assert_eq!(m.tag().parse::<DistanceMeasure>().unwrap(), m);
        }
        assert!("dtw".parse::<DistanceMeasure>().is_err());
    }

    #[test]
    fn matrix_diagonal_and_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ts = random_series(&mut rng, 2, 60);
        for measure in DistanceMeasure::ALL {
            let dm = pairwise_matrix(&ts, 6, measure).unwrap();
            for dim in 0..2 {
                for i in 0..dm.windows() {
                    assert_eq!(dm.get(dim, i, i), 0.0);
                    for j in 0..dm.windows() {
                        assert!(dm.get(dim, i, j) >= 0.0);
                        assert_eq!(dm.get(dim, i, j).to_bits(), dm.get(dim, j, i).to_bits());
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_matches_naive_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ts = random_series(&mut rng, 2, 40);
        let l = 5;
        for measure in DistanceMeasure::ALL {
            let dm = pairwise_matrix(&ts, l, measure).unwrap();
            for dim in 0..2 {
                let x = ts.dim(dim);
                for i in 0..dm.windows() {
                    for j in 0..dm.windows() {
                        if i == j {
                            continue;
                        }
                        let want = naive(measure, &x[i..i + l], &x[j..j + l]);
                        let got = dm.get(dim, i, j);
                        assert!(
                            (got - want).abs() <= 1e-6 * want.abs().max(1.0),
                            "{measure} ({i},{j}): {got} vs {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn matrix_spanning_reseeds_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ts = random_series(&mut rng, 1, 3 * ROW_BLOCK + 17);
        let l = 9;
        let dm = pairwise_matrix(&ts, l, DistanceMeasure::ZNormalizedEuclidean).unwrap();
        let x = ts.dim(0);
        for _ in 0..2000 {
            let i = rng.random_range(0..dm.windows());
            let j = rng.random_range(0..dm.windows());
            if i == j {
                continue;
            }
            let want = ed_squared(&znorm(&x[i..i + l]), &znorm(&x[j..j + l]));
            assert!((dm.get(0, i, j) - want).abs() <= 1e-6 * want.max(1.0));
        }
    }

    #[test]
    fn exact_repeat_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut rows: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..40).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        for row in &mut rows {
            for t in 0..6 {
                row[20 + t] = row[3 + t];
            }
        }
        let ts = MultivariateTimeSeries::from_dimensions(rows).unwrap();
        let dm = pairwise_matrix(&ts, 6, DistanceMeasure::ZNormalizedEuclidean).unwrap();
        for dim in 0..2 {
            assert!(dm.get(dim, 3, 20) < 1e-9);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let ts = MultivariateTimeSeries::new(2, 100, (0..200).map(|v| (v as f64).sin()).collect()).unwrap();
        let err = pairwise_matrix_with_budget(&ts, 10, DistanceMeasure::Euclidean, 1000).unwrap_err();
        assert_eq!(
            err,
            CoreError::Capacity {
                required: dense_bytes(2, 91),
                budget: 1000
            }
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn zed_affine_invariant(
            seed in any::<u64>(),
            scale in 0.1f64..10.0,
            offset in -50.0f64..50.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
            let b: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
            let b2: Vec<f64> = b.iter().map(|v| scale * v + offset).collect();
            let s = WindowStats::of;
            let d1 = zed_squared(&a, &b, s(&a), s(&b));
            let d2 = zed_squared(&a, &b2, s(&a), s(&b2));
            prop_assert!((d1 - d2).abs() < 1e-6);
        }

        #[test]
        fn zed_matrix_matches_naive(seed in any::<u64>(), n in 20usize..120, l in 3usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ts = random_series(&mut rng, 1, n);
            let dm = pairwise_matrix(&ts, l, DistanceMeasure::ZNormalizedEuclidean).unwrap();
            let x = ts.dim(0);
            for i in 0..dm.windows() {
                for j in i + 1..dm.windows() {
                    let want = ed_squared(&znorm(&x[i..i + l]), &znorm(&x[j..j + l]));
                    prop_assert!((dm.get(0, i, j) - want).abs() <= 1e-6 * want.max(1.0));
                }
            }
        }
    }

    #[test]
    fn one_dim_matrix_row_access() {
        let ts = MultivariateTimeSeries::new(1, 5, vec![0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        let dm = pairwise_matrix(&ts, 2, DistanceMeasure::Euclidean).unwrap();
        assert_eq!(dm.row(0, 0), &[0.0, 2.0, 0.0, 2.0]);
        assert_eq!(dm.bytes(), 16 * 8);
    }
}
