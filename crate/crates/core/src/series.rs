//! Time-series container, sliding-window statistics and the trivial-match rule.
//!
//! Offsets are 0-based throughout: window `i` covers `values[i..i + l]`.

use alloc::vec::Vec;

use crate::error::{ensure_param, Result};

/// Windows whose standard deviation falls below this are treated as flat.
pub const FLAT_EPSILON: f64 = 1e-8;

/// A `d x n` real matrix stored dimension-major: row `k` is channel `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateTimeSeries {
    values: Vec<f64>,
    dims: usize,
    len: usize,
}

impl MultivariateTimeSeries {
    /// Builds a series from dimension-major `values` (`dims * len` entries).
    pub fn new(dims: usize, len: usize, values: Vec<f64>) -> Result<Self> {
        ensure_param!(dims >= 1, "a series needs at least one dimension");
        ensure_param!(len >= 2, "a series needs at least two time stamps, got {len}");
        ensure_param!(
            values.len() == dims * len,
            "expected {} values for {dims} x {len}, got {}",
            dims * len,
            values.len()
        );
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(crate::error::param_error(format_args!(
                "non-finite value in dimension {} at time {}",
                pos / len,
                pos % len
            )));
        }
        Ok(Self { values, dims, len })
    }

    /// Builds a series from one vector per dimension.
    pub fn from_dimensions(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dims = rows.len();
        ensure_param!(dims >= 1, "a series needs at least one dimension");
        let len = rows[0].len();
        ensure_param!(
            rows.iter().all(|r| r.len() == len),
            "all dimensions must have the same length"
        );
        let values = rows.into_iter().flatten().collect();
        Self::new(dims, len, values)
    }

    /// Number of dimensions `d`.
    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Number of time stamps `n`.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; a valid series has at least two time stamps.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Channel `k` as a slice of `n` values.
    pub fn dim(&self, k: usize) -> &[f64] {
        &self.values[k * self.len..(k + 1) * self.len]
    }

    /// All values, dimension-major.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of windows of length `l`, i.e. `n - l + 1`.
    pub fn num_windows(&self, l: usize) -> usize {
        (self.len + 1).saturating_sub(l)
    }

    /// Keeps only the listed dimensions, in the given order.
    pub fn select_dimensions(&self, dims: &[usize]) -> Result<Self> {
        ensure_param!(!dims.is_empty(), "dimension selection is empty");
        let mut values = Vec::with_capacity(dims.len() * self.len);
        for &k in dims {
            ensure_param!(k < self.dims, "dimension {k} out of range (d = {})", self.dims);
            values.extend_from_slice(self.dim(k));
        }
        Self::new(dims.len(), self.len, values)
    }

    /// Applies `f` to every value.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.dims, self.len, self.values.iter().map(|&v| f(v)).collect())
    }

    pub(crate) fn check_window(&self, l: usize) -> Result<()> {
        ensure_param!(l >= 2 && l <= self.len, "window length {l} outside [2, {}]", self.len);
        Ok(())
    }
}

/// Per-window mean and population standard deviation for every dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingStats {
    window: usize,
    windows: usize,
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl SlidingStats {
    /// Window length `l`.
    pub fn window(&self) -> usize {
        self.window
    }

    /// Number of windows per dimension.
    pub fn windows(&self) -> usize {
        self.windows
    }

    /// Mean of window `i` in dimension `k`.
    pub fn mean(&self, k: usize, i: usize) -> f64 {
        self.means[k * self.windows + i]
    }

    /// Population standard deviation of window `i` in dimension `k`.
    pub fn std(&self, k: usize, i: usize) -> f64 {
        self.stds[k * self.windows + i]
    }

    /// Whether window `i` of dimension `k` is (numerically) constant.
    pub fn is_flat(&self, k: usize, i: usize) -> bool {
        self.std(k, i) < FLAT_EPSILON
    }

    /// Means of dimension `k`.
    pub fn means(&self, k: usize) -> &[f64] {
        &self.means[k * self.windows..(k + 1) * self.windows]
    }

    /// Standard deviations of dimension `k`.
    pub fn stds(&self, k: usize) -> &[f64] {
        &self.stds[k * self.windows..(k + 1) * self.windows]
    }
}

/// Sliding mean and population standard deviation of every length-`l` window.
///
/// One cumulative-sum pass per dimension. Values are shifted by the channel
/// mean first so that large offsets do not cancel in `E[x^2] - E[x]^2`.
pub fn sliding_mean_std(ts: &MultivariateTimeSeries, l: usize) -> Result<SlidingStats> {
    ts.check_window(l)?;
    let m = ts.num_windows(l);
    let mut means = Vec::with_capacity(ts.dims() * m);
    let mut stds = Vec::with_capacity(ts.dims() * m);
    for k in 0..ts.dims() {
        let (mu, sigma) = window_moments(ts.dim(k), l);
        means.extend(mu);
        stds.extend(sigma);
    }
    Ok(SlidingStats {
        window: l,
        windows: m,
        means,
        stds,
    })
}

const MOMENT_BLOCK: usize = 1024;

/// Per-window mean and population std of `x`.
///
/// Prefix sums are rebuilt every `MOMENT_BLOCK` windows around the block mean. Windows whose variance
/// is within reach of the cancellation error are recomputed directly.
pub(crate) fn window_moments(x: &[f64], l: usize) -> (Vec<f64>, Vec<f64>) {
    let m = x.len() + 1 - l;
    let lf = l as f64;
    let mut means = Vec::with_capacity(m);
    let mut stds = Vec::with_capacity(m);
    let mut sum = Vec::with_capacity(MOMENT_BLOCK + l);
    let mut sq = Vec::with_capacity(MOMENT_BLOCK + l);
    for b in (0..m).step_by(MOMENT_BLOCK) {
        let e = (b + MOMENT_BLOCK).min(m);
        let seg = &x[b..e + l - 1];
        let shift = seg.iter().sum::<f64>() / seg.len() as f64;
        sum.clear();
        sq.clear();
        sum.push(0.0);
        sq.push(0.0);
        let (mut s, mut q) = (0.0, 0.0);
        for &v in seg {
            let c = v - shift;
            s += c;
            q += c * c;
            sum.push(s);
            sq.push(q);
        }
        let var_err = 8.0 * f64::EPSILON * q / lf;
        for i in 0..e - b {
            let mean_c = (sum[i + l] - sum[i]) / lf;
            let var = ((sq[i + l] - sq[i]) / lf - mean_c * mean_c).max(0.0);
            if var < (var_err * 1e10).powi(2) {
                let (mu, sigma) = two_pass(&seg[i..i + l]);
                means.push(mu);
                stds.push(sigma);
            } else {
                means.push(mean_c + shift);
                stds.push(libm::sqrt(var));
            }
        }
    }
    (means, stds)
}

fn two_pass(w: &[f64]) -> (f64, f64) {
    let n = w.len() as f64;
    let mu = w.iter().sum::<f64>() / n;
    let var = w.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / n;
    (mu, libm::sqrt(var))
}

/// Trivial-match rule: windows `i` and `j` overlap iff
/// `ceil(i - l*alpha) <= j <= ceil(i + l*alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapRule {
    window: usize,
    alpha: f64,
}

impl OverlapRule {
    /// Rule for windows of length `window` with exclusion factor `alpha`.
    pub fn new(window: usize, alpha: f64) -> Result<Self> {
        ensure_param!(window >= 1, "window length must be positive");
        ensure_param!((0.0..=1.0).contains(&alpha), "alpha must lie in [0, 1], got {alpha}");
        Ok(Self { window, alpha })
    }

    /// Default rule, `alpha = 1`: windows may share at most one value.
    pub fn with_window(window: usize) -> Self {
        Self { window, alpha: 1.0 }
    }

    /// Window length.
    pub fn window(&self) -> usize {
        self.window
    }

    /// Exclusion factor.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Inclusive bounds `(ceil(i - l*alpha), ceil(i + l*alpha))`.
    pub fn bounds(&self, i: usize) -> (f64, f64) {
        let reach = self.window as f64 * self.alpha;
        let i = i as f64;
        (libm::ceil(i - reach), libm::ceil(i + reach))
    }

    /// Directed overlap test exactly as the rule is stated.
    pub fn overlaps(&self, i: usize, j: usize) -> bool {
        let (lo, hi) = self.bounds(i);
        let j = j as f64;
        lo <= j && j <= hi
    }

    /// Overlap in either direction; used for pairwise non-overlap of sets.
    pub fn conflicts(&self, a: usize, b: usize) -> bool {
        self.overlaps(a, b) || self.overlaps(b, a)
    }

    /// Upper bound on how many offsets one window excludes (itself included).
    pub(crate) fn zone_width(&self) -> usize {
        2 * libm::ceil(self.window as f64 * self.alpha) as usize + 1
    }
}

/// `true` iff windows `i` and `j` are trivial matches under `rule`.
pub fn is_overlapping(i: usize, j: usize, rule: &OverlapRule) -> bool {
    rule.overlaps(i, j)
}

/// `true` iff all offsets are pairwise non-overlapping under `rule`.
pub fn pairwise_disjoint(offsets: &[usize], rule: &OverlapRule) -> bool {
    offsets
        .iter()
        .enumerate()
        .all(|(a, &x)| offsets[a + 1..].iter().all(|&y| !rule.conflicts(x, y)))
}
