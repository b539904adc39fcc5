//! Learning the motif set size `k` and the motif length `l`.
//!
//! The extent function maps `k` to the extent of the leitmotif found for
//! that `k`. A sharp rise after a flat stretch marks the last `k` before the
//! set has to absorb an unrelated window. Across lengths, the area under the
//! normalized extent function dips where windows line up with a recurring
//! pattern.

use alloc::vec::Vec;

use crate::distance::{pairwise_matrix_with_budget, DistanceMeasure, DistanceSource};
use crate::error::{ensure_param, CoreError, Result};
use crate::lama::{lama, LamaConfig, Leitmotif};
use crate::series::{MultivariateTimeSeries, OverlapRule};
use crate::sparse::build_sparse;

/// Default elbow score threshold.
pub const ELBOW_THRESHOLD: f64 = 2.0;

/// Denominator floor of the elbow score, on the `[0, 1]` normalized scale.
///
/// A tiny floor makes any rise after an exactly flat step dominate every
/// later jump, however small; see [`find_elbows`].
pub const ELBOW_SLOPE_FLOOR: f64 = 0.01;

/// Candidate lengths `min, min + step, ...` up to `max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthSweep {
    /// Smallest length.
    pub min: usize,
    /// Largest length (included if reached by the step).
    pub max: usize,
    /// Step between lengths.
    pub step: usize,
}

impl LengthSweep {
    /// Lengths of the sweep, ascending.
    pub fn lengths(&self) -> Vec<usize> {
        if self.step == 0 || self.min > self.max {
            return Vec::new();
        }
        (self.min..=self.max).step_by(self.step).collect()
    }
}

/// Extents of the leitmotifs found for `k = 2..=k_max` at one length.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtentFunction {
    /// Window length.
    pub window: usize,
    /// Set sizes, `2..=k_max`.
    pub ks: Vec<usize>,
    /// Extent as returned by the search; `None` where no set was feasible.
    pub raw: Vec<Option<f64>>,
    /// Running maximum of `raw`; gaps carry the previous value.
    pub extents: Vec<f64>,
    /// Leitmotif per `k`, `None` where infeasible.
    pub leitmotifs: Vec<Option<Leitmotif>>,
}

impl ExtentFunction {
    /// Largest `k`.
    pub fn k_max(&self) -> usize {
        *self.ks.last().unwrap_or(&0)
    }

    /// Extent at `k`, if `k` is in range.
    pub fn extent(&self, k: usize) -> Option<f64> {
        self.ks.iter().position(|&x| x == k).map(|i| self.extents[i])
    }

    /// Area under the extent function, with extents divided by the largest
    /// one and `k` divided by `k_max`; trapezoid rule.
    ///
    /// Trailing infeasible `k` count as the maximum (1.0).
    pub fn area(&self) -> f64 {
        let top = self.extents.iter().copied().fold(0.0, f64::max);
        let k_max = self.k_max() as f64;
        if self.ks.len() < 2 {
            return 0.0;
        }
        let y = |i: usize| -> f64 {
            if self.raw[i..].iter().all(Option::is_none) {
                1.0
            } else if top > 0.0 {
                self.extents[i] / top
            } else {
                0.0
            }
        };
        (1..self.ks.len())
            .map(|i| {
                let dx = (self.ks[i] - self.ks[i - 1]) as f64 / k_max;
                dx * (y(i) + y(i - 1)) / 2.0
            })
            .sum()
    }
}

/// Runs the search for every `k` in `2..=k_max` over one distance source.
pub fn extent_function(
    source: &impl DistanceSource,
    k_max: usize,
    f: usize,
    rule: OverlapRule,
) -> Result<ExtentFunction> {
    extent_function_with(source.window(), k_max, |k| lama(source, &LamaConfig::new(k, f, rule)))
}

fn extent_function_with(
    window: usize,
    k_max: usize,
    mut run: impl FnMut(usize) -> Result<crate::lama::LamaOutput>,
) -> Result<ExtentFunction> {
    ensure_param!(k_max >= 2, "k_max must be at least 2, got {k_max}");
    let ks: Vec<usize> = (2..=k_max).collect();
    let mut raw = Vec::with_capacity(ks.len());
    let mut leitmotifs = Vec::with_capacity(ks.len());
    for &k in &ks {
        match run(k) {
            Ok(out) => {
                raw.push(Some(out.leitmotif.extent));
                leitmotifs.push(Some(out.leitmotif));
            }
            Err(CoreError::NoLeitmotif) => {
                raw.push(None);
                leitmotifs.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let mut extents = Vec::with_capacity(ks.len());
    let mut acc = 0.0f64;
    for (k, r) in ks.iter().zip(&raw) {
        if let Some(v) = *r {
            if v < acc {
                log::debug!("extent at k = {k} ({v}) below k - 1 ({acc}); using running maximum");
            }
            acc = acc.max(v);
        }
        extents.push(acc);
    }
    Ok(ExtentFunction {
        window,
        ks,
        raw,
        extents,
        leitmotifs,
    })
}

/// Extent function of `ts` at length `l`, using a dense matrix when it fits
/// into `budget_bytes` and a sparse store per `k` otherwise.
pub fn extent_function_for(
    ts: &MultivariateTimeSeries,
    l: usize,
    k_max: usize,
    f: usize,
    measure: DistanceMeasure,
    alpha: f64,
    budget_bytes: usize,
) -> Result<ExtentFunction> {
    let rule = OverlapRule::new(l, alpha)?;
    match pairwise_matrix_with_budget(ts, l, measure, budget_bytes) {
        Ok(dm) => extent_function(&dm, k_max, f, rule),
        Err(CoreError::Capacity { .. }) => extent_function_with(l, k_max, |k| {
            let cfg = LamaConfig::new(k, f, rule);
            build_sparse(ts, l, measure, &cfg, budget_bytes)?.search(true)
        }),
        Err(e) => Err(e),
    }
}

/// Ranked elbows of an extent function.
#[derive(Debug, Clone, PartialEq)]
pub struct Elbows {
    /// `(k, score)` pairs, highest score first. Never empty.
    pub ranked: Vec<(usize, f64)>,
    /// Whether the top score reached the threshold.
    pub confident: bool,
}

impl Elbows {
    /// Highest-ranked `k`.
    pub fn top(&self) -> usize {
        self.ranked[0].0
    }
}

/// Elbow scores of `ef` after min-max normalization to `[0, 1]`.
///
/// `s(k) = (EF(k+1) - EF(k)) / max(EF(k) - EF(k-1), floor)` for interior `k`.
pub fn elbow_scores(ks: &[usize], extents: &[f64], floor: f64) -> Vec<(usize, f64)> {
    let lo = extents.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = extents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if extents.len() < 3 || span.is_nan() || span <= 0.0 {
        return Vec::new();
    }
    let y: Vec<f64> = extents.iter().map(|v| (v - lo) / span).collect();
    (1..y.len() - 1)
        .map(|i| (ks[i], (y[i + 1] - y[i]) / (y[i] - y[i - 1]).max(floor)))
        .collect()
}

/// Elbows of `ef` with the default threshold and slope floor.
///
/// Returns every interior `k` whose score reaches `threshold` and is not
/// below the score of either neighbour, by descending score (ties: smaller
/// `k`). Without such a `k` the single highest-scoring `k` is returned with
/// `confident == false`. A flat or too short extent function yields `k_max`.
pub fn find_elbows(ef: &ExtentFunction) -> Elbows {
    find_elbows_with(&ef.ks, &ef.extents, ELBOW_THRESHOLD, ELBOW_SLOPE_FLOOR)
}

/// [`find_elbows`] with explicit threshold and slope floor.
pub fn find_elbows_with(ks: &[usize], extents: &[f64], threshold: f64, floor: f64) -> Elbows {
    let scores = elbow_scores(ks, extents, floor);
    if scores.is_empty() {
        return Elbows {
            ranked: alloc::vec![(*ks.last().unwrap_or(&0), 0.0)],
            confident: false,
        };
    }
    let by_score = |a: &(usize, f64), b: &(usize, f64)| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0));
    let mut ranked: Vec<(usize, f64)> = scores
        .iter()
        .enumerate()
        .filter(|&(i, &(_, s))| {
            s >= threshold && (i == 0 || scores[i - 1].1 <= s) && scores.get(i + 1).is_none_or(|n| n.1 <= s)
        })
        .map(|(_, &p)| p)
        .collect();
    ranked.sort_by(by_score);
    if ranked.is_empty() {
        let best = scores.iter().copied().min_by(by_score).unwrap_or((0, 0.0));
        return Elbows {
            ranked: alloc::vec![best],
            confident: false,
        };
    }
    Elbows {
        ranked,
        confident: true,
    }
}

/// Area under the extent function for every length of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthProfile {
    /// Lengths, ascending.
    pub lengths: Vec<usize>,
    /// Area per length.
    pub au_ef: Vec<f64>,
    /// Interior strict local minima, lowest area first.
    pub minima: Vec<usize>,
    /// Chosen length: the first minimum, or the lowest-area length.
    pub best: usize,
    /// `true` when there was no interior minimum.
    pub boundary: bool,
    /// Extent function per length.
    pub extent_functions: Vec<ExtentFunction>,
}

/// Sweep settings shared by the learning entry points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearnConfig {
    /// Largest motif set size tried.
    pub k_max: usize,
    /// Number of dimensions to select.
    pub f: usize,
    /// Distance measure.
    pub measure: DistanceMeasure,
    /// Trivial-match exclusion factor.
    pub alpha: f64,
    /// Bytes allowed for one dense matrix before falling back to the sparse store.
    pub budget_bytes: usize,
}

impl LearnConfig {
    /// ZED, `alpha = 1`, no memory limit.
    pub fn new(k_max: usize, f: usize) -> Self {
        Self {
            k_max,
            f,
            measure: DistanceMeasure::ZNormalizedEuclidean,
            alpha: 1.0,
            budget_bytes: usize::MAX,
        }
    }
}

/// Computes the area under the extent function for each length in `sweep`
/// and selects the interior strict local minima.
///
/// Lengths run one after another so that at most one distance matrix is
/// resident.
pub fn learn_length(ts: &MultivariateTimeSeries, sweep: LengthSweep, config: &LearnConfig) -> Result<LengthProfile> {
    let lengths = sweep.lengths();
    ensure_param!(
        !lengths.is_empty(),
        "empty length range {}..={} step {}",
        sweep.min,
        sweep.max,
        sweep.step
    );
    ensure_param!(sweep.min >= 2, "smallest length must be at least 2, got {}", sweep.min);
    ensure_param!(
        sweep.max <= ts.len() / 2,
        "largest length {} exceeds half the series length {}",
        sweep.max,
        ts.len()
    );
    let mut au_ef = Vec::with_capacity(lengths.len());
    let mut efs = Vec::with_capacity(lengths.len());
    for &l in &lengths {
        let ef = extent_function_for(
            ts,
            l,
            config.k_max,
            config.f,
            config.measure,
            config.alpha,
            config.budget_bytes,
        )?;
        au_ef.push(ef.area());
        efs.push(ef);
    }
    let mut minima: Vec<usize> = (1..lengths.len().saturating_sub(1))
        .filter(|&i| au_ef[i] < au_ef[i - 1] && au_ef[i] < au_ef[i + 1])
        .collect();
    minima.sort_by(|&a, &b| au_ef[a].total_cmp(&au_ef[b]).then(a.cmp(&b)));
    let boundary = minima.is_empty();
    let best = if boundary {
        if lengths.len() == 1 {
            log::warn!("single candidate length {}; nothing to compare", lengths[0]);
        }
        (0..lengths.len())
            .min_by(|&a, &b| au_ef[a].total_cmp(&au_ef[b]).then(a.cmp(&b)))
            .unwrap_or(0)
    } else {
        minima[0]
    };
    Ok(LengthProfile {
        best: lengths[best],
        minima: minima.iter().map(|&i| lengths[i]).collect(),
        lengths,
        au_ef,
        boundary,
        extent_functions: efs,
    })
}

/// How a parameter is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthChoice {
    /// Use this length.
    Fixed(usize),
    /// Learn it from the sweep.
    Sweep(LengthSweep),
}

/// Learned or pinned `(l, k)` with the evidence behind them.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnedParameters {
    /// Motif length.
    pub l: usize,
    /// Motif set size.
    pub k: usize,
    /// `false` when `l` came from the boundary of the sweep.
    pub l_confident: bool,
    /// `false` when no elbow reached the threshold.
    pub k_confident: bool,
    /// Length profile, when `l` was learned.
    pub profile: Option<LengthProfile>,
    /// Extent function at the chosen `l`, when `k` was learned.
    pub extent_function: Option<ExtentFunction>,
    /// Elbows of that extent function.
    pub elbows: Option<Elbows>,
}

/// Learns whatever is not pinned: `l` from the length profile, then `k` as
/// the top elbow of the extent function at that `l`.
pub fn learn_parameters(
    ts: &MultivariateTimeSeries,
    length: LengthChoice,
    k: Option<usize>,
    config: &LearnConfig,
) -> Result<LearnedParameters> {
    let (l, l_confident, profile) = match length {
        LengthChoice::Fixed(l) => (l, true, None),
        LengthChoice::Sweep(sweep) => {
            let p = learn_length(ts, sweep, config)?;
            (p.best, !p.boundary, Some(p))
        }
    };
    if let Some(k) = k {
        return Ok(LearnedParameters {
            l,
            k,
            l_confident,
            k_confident: true,
            profile,
            extent_function: None,
            elbows: None,
        });
    }
    let ef = match &profile {
        Some(p) => p.extent_functions[p.lengths.iter().position(|&x| x == l).unwrap_or(0)].clone(),
        None => extent_function_for(
            ts,
            l,
            config.k_max,
            config.f,
            config.measure,
            config.alpha,
            config.budget_bytes,
        )?,
    };
    let elbows = find_elbows(&ef);
    Ok(LearnedParameters {
        l,
        k: elbows.top(),
        l_confident,
        k_confident: elbows.confident,
        profile,
        extent_function: Some(ef),
        elbows: Some(elbows),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::pairwise_matrix;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ks(n: usize) -> Vec<usize> {
        (2..2 + n).collect()
    }

    #[test]
    fn hand_scored_elbow() {
        // Normalized already. s(3) = 0.05 / 0.01 = 5, s(4) = 0.95 / 0.05 = 19.
        let e = find_elbows_with(&ks(4), &[0.0, 0.0, 0.05, 1.0], 2.0, ELBOW_SLOPE_FLOOR);
        assert_eq!(e.top(), 4);
        assert!((e.ranked[0].1 - 19.0).abs() < 1e-9);
        assert!(e.confident);
        let scores = elbow_scores(&ks(4), &[0.0, 0.0, 0.05, 1.0], ELBOW_SLOPE_FLOOR);
        assert!((scores[0].1 - 5.0).abs() < 1e-9);
    }

    #[test]
    fn tiny_floor_prefers_first_rise() {
        let e = find_elbows_with(&ks(4), &[0.0, 0.0, 0.05, 1.0], 2.0, 1e-12);
        assert_eq!(e.top(), 3);
    }

    #[test]
    fn linear_falls_back_without_confidence() {
        let ef: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let e = find_elbows_with(&ks(8), &ef, 2.0, ELBOW_SLOPE_FLOOR);
        assert!(!e.confident);
        assert_eq!(e.ranked.len(), 1);
        assert!(e.ranked[0].1 < 2.0);
    }

    #[test]
    fn flat_returns_k_max() {
        let e = find_elbows_with(&ks(5), &[0.3; 5], 2.0, ELBOW_SLOPE_FLOOR);
        assert_eq!(e.top(), 6);
        assert!(!e.confident);
    }

    #[test]
    fn two_plateaus() {
        // Plateau up to k = 4, jump, plateau up to k = 7, larger jump.
        let ef = [0.0, 0.01, 0.02, 0.3, 0.31, 0.32, 1.0];
        let e = find_elbows_with(&ks(7), &ef, 2.0, ELBOW_SLOPE_FLOOR);
        let top: Vec<usize> = e.ranked.iter().map(|p| p.0).collect();
        assert_eq!(top, vec![7, 4]);
        assert!(e.ranked[0].1 > e.ranked[1].1);
    }

    #[test]
    fn single_entry_ef() {
        let ts = MultivariateTimeSeries::new(1, 60, (0..60).map(|i| libm::sin(i as f64 * 0.3)).collect()).unwrap();
        let dm = pairwise_matrix(&ts, 6, DistanceMeasure::ZNormalizedEuclidean).unwrap();
        let ef = extent_function(&dm, 2, 1, OverlapRule::with_window(6)).unwrap();
        assert_eq!(ef.ks, vec![2]);
        assert_eq!(ef.extents.len(), 1);
        assert_eq!(find_elbows(&ef).top(), 2);
    }

    fn implant(seed: u64, copies: usize, l: usize, n: usize) -> (MultivariateTimeSeries, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let pattern: Vec<f64> = (0..l)
            .map(|t| 3.0 * libm::sin(t as f64 * 0.5) + t as f64 * 0.1)
            .collect();
        let gap = n / copies;
        let starts: Vec<usize> = (0..copies).map(|c| c * gap + 5).collect();
        for &s in &starts {
            for (t, p) in pattern.iter().enumerate() {
                x[s + t] = p + rng.random_range(-0.01..0.01);
            }
        }
        (MultivariateTimeSeries::new(1, n, x).unwrap(), starts)
    }

    #[test]
    fn four_copies_jump_after_four() {
        let (ts, starts) = implant(3, 4, 20, 400);
        let dm = pairwise_matrix(&ts, 20, DistanceMeasure::ZNormalizedEuclidean).unwrap();
        let ef = extent_function(&dm, 7, 1, OverlapRule::with_window(20)).unwrap();
        let e4 = ef.extent(4).unwrap();
        let e5 = ef.extent(5).unwrap();
        assert!(e5 > 2.0 * e4, "EF(4) = {e4}, EF(5) = {e5}");
        assert_eq!(ef.leitmotifs[2].as_ref().unwrap().offsets, starts);
        assert!(ef.extents.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(find_elbows(&ef).top(), 4);
    }

    #[test]
    fn pair_extent_is_closest_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let n = rng.random_range(30..70);
            let ts = MultivariateTimeSeries::new(1, n, (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
            let l = 4;
            let rule = OverlapRule::with_window(l);
            let dm = pairwise_matrix(&ts, l, DistanceMeasure::ZNormalizedEuclidean).unwrap();
            let ef = extent_function(&dm, 3, 1, rule).unwrap();
            let m = dm.windows();
            let mut best = f64::INFINITY;
            for a in 0..m {
                for b in a + 1..m {
                    if !rule.conflicts(a, b) {
                        best = best.min(dm.get(0, a, b));
                    }
                }
            }
            assert_eq!(ef.raw[0], Some(best));
        }
    }

    #[test]
    fn area_normalization() {
        let ef = ExtentFunction {
            window: 5,
            ks: vec![2, 3, 4],
            raw: vec![Some(0.0), Some(2.0), Some(4.0)],
            extents: vec![0.0, 2.0, 4.0],
            leitmotifs: vec![None, None, None],
        };
        // y = 0, 0.5, 1 at x = 2/4, 3/4, 1.
        assert!((ef.area() - 0.25).abs() < 1e-12);
        let mut tail = ef.clone();
        tail.raw[2] = None;
        tail.extents[2] = 2.0;
        // y = 0, 1, 1 once the trailing gap counts as the maximum.
        assert!((tail.area() - 0.375).abs() < 1e-12);
    }

    #[test]
    fn length_profile_contracts() {
        let (ts, _) = implant(8, 3, 20, 500);
        let cfg = LearnConfig::new(5, 1);
        assert!(learn_length(
            &ts,
            LengthSweep {
                min: 30,
                max: 20,
                step: 1
            },
            &cfg
        )
        .is_err());
        assert!(learn_length(
            &ts,
            LengthSweep {
                min: 10,
                max: 400,
                step: 5
            },
            &cfg
        )
        .is_err());
        let single = learn_length(
            &ts,
            LengthSweep {
                min: 20,
                max: 20,
                step: 1,
            },
            &cfg,
        )
        .unwrap();
        assert!(single.minima.is_empty());
        assert!(single.boundary);
        assert_eq!(single.best, 20);
        let p = learn_length(
            &ts,
            LengthSweep {
                min: 10,
                max: 40,
                step: 5,
            },
            &cfg,
        )
        .unwrap();
        assert_eq!(p.lengths, vec![10, 15, 20, 25, 30, 35, 40]);
        for &l in &p.minima {
            let i = p.lengths.iter().position(|&x| x == l).unwrap();
            assert!(i > 0 && i + 1 < p.lengths.len());
            assert!(p.au_ef[i] < p.au_ef[i - 1] && p.au_ef[i] < p.au_ef[i + 1]);
        }
    }

    #[test]
    fn area_is_scale_invariant_under_zed() {
        let (ts, _) = implant(11, 3, 16, 300);
        let scaled = ts.map_values(|v| 3.0 * v).unwrap();
        let cfg = LearnConfig::new(5, 1);
        let sweep = LengthSweep {
            min: 10,
            max: 22,
            step: 4,
        };
        let a = learn_length(&ts, sweep, &cfg).unwrap();
        let b = learn_length(&scaled, sweep, &cfg).unwrap();
        for (x, y) in a.au_ef.iter().zip(&b.au_ef) {
            assert!((x - y).abs() < 1e-6, "{x} vs {y}");
        }
    }

    #[test]
    fn pinned_parameters() {
        let (ts, _) = implant(2, 4, 20, 400);
        let cfg = LearnConfig::new(7, 1);
        let p = learn_parameters(&ts, LengthChoice::Fixed(20), Some(3), &cfg).unwrap();
        assert_eq!((p.l, p.k), (20, 3));
        assert!(p.extent_function.is_none());
        let p = learn_parameters(&ts, LengthChoice::Fixed(20), None, &cfg).unwrap();
        assert!(p.profile.is_none());
        assert_eq!(p.k, 4);
        assert!(p.k_confident);
    }

    #[test]
    fn sparse_fallback_matches_dense() {
        let (ts, _) = implant(6, 3, 12, 200);
        let dense = extent_function_for(&ts, 12, 5, 1, DistanceMeasure::ZNormalizedEuclidean, 1.0, usize::MAX).unwrap();
        let budget = dense_budget(&ts, 12) - 1;
        let sparse = extent_function_for(&ts, 12, 5, 1, DistanceMeasure::ZNormalizedEuclidean, 1.0, budget).unwrap();
        assert_eq!(dense, sparse);
    }

    fn dense_budget(ts: &MultivariateTimeSeries, l: usize) -> usize {
        crate::distance::dense_bytes(ts.dims(), ts.num_windows(l))
    }

    proptest! {
        #[test]
        fn elbows_affine_invariant(
            ef in prop::collection::vec(0.0f64..10.0, 3..12),
            scale in 0.1f64..100.0,
            shift in -50.0f64..50.0,
        ) {
            let mut sorted = ef.clone();
            sorted.sort_by(f64::total_cmp);
            let k = ks(sorted.len());
            let a = find_elbows_with(&k, &sorted, 2.0, ELBOW_SLOPE_FLOOR);
            let moved: Vec<f64> = sorted.iter().map(|v| v * scale + shift).collect();
            let b = find_elbows_with(&k, &moved, 2.0, ELBOW_SLOPE_FLOOR);
            prop_assert_eq!(a.ranked.iter().map(|p| p.0).collect::<Vec<_>>(), b.ranked.iter().map(|p| p.0).collect::<Vec<_>>());
            prop_assert_eq!(a.confident, b.confident);
        }
    }
}
