//! Synthetic ground truth, the exhaustive oracle, precision/recall scoring
//! and the noise experiment.

use leitmotif_core::distance::{cid, cosine_distance, ed_squared};
use leitmotif_core::series::FLAT_EPSILON;
use leitmotif_core::{
    build_sparse, lama, pairwise_matrix_with_budget, CoreError, DistanceMeasure, LamaConfig, Leitmotif,
    MultivariateTimeSeries, OverlapRule,
};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// One implanted occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    /// 0-based start offset.
    pub start: usize,
    /// Length in time stamps.
    pub length: usize,
}

impl Occurrence {
    fn end(&self) -> usize {
        self.start + self.length
    }
}

/// Where a synthetic leitmotif was implanted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    /// Occurrences by ascending start.
    pub occurrences: Vec<Occurrence>,
    /// Implanted dimensions, ascending.
    pub dims: Vec<usize>,
    /// Number of occurrences.
    pub k: usize,
    /// Motif length.
    pub l: usize,
    /// Number of implanted dimensions.
    pub f: usize,
}

/// Parameters of [`generate_synthetic`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    /// RNG seed; equal seeds give identical series.
    pub seed: u64,
    /// Series length.
    pub n: usize,
    /// Number of dimensions.
    pub d: usize,
    /// Number of copies.
    pub k: usize,
    /// Copy length.
    pub l: usize,
    /// Dimensions carrying the copies.
    pub f: usize,
    /// Per-copy noise std relative to the template std; 0 gives exact copies.
    pub jitter: f64,
    /// Signal outside the copies.
    #[serde(default)]
    pub background: Background,
}

/// Background signal of synthetic series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Background {
    /// Independent standard Gaussian values.
    #[default]
    White,
    /// Cumulative sum of standard Gaussian steps, per dimension.
    RandomWalk,
}

/// Series with `k` copies of a smooth template implanted into `f` random
/// dimensions at random non-overlapping offsets; everything else is
/// standard Gaussian noise or its running sum (see [`Background`]).
///
/// Each implanted dimension has its own template, a sum of three sinusoids
/// of 0.5 to 1.5 cycles per copy with random phases, scaled to std 2. Every
/// copy is scaled by a factor in `[0.8, 1.2]` and gets Gaussian noise of std
/// `jitter * 2`; with `jitter == 0` copies are exact and unscaled.
pub fn generate_synthetic(cfg: &SynthConfig) -> Result<(MultivariateTimeSeries, GroundTruth), CoreError> {
    let SynthConfig { n, d, k, l, f, .. } = *cfg;
    if k < 1 || l < 2 || f < 1 || f > d || k * 2 * l > n || cfg.jitter.is_nan() || cfg.jitter < 0.0 {
        return Err(CoreError::Parameter(format!(
            "cannot implant k = {k} copies of length {l} into {f} of {d} dimensions of a series of length {n} \
             (need k * 2l <= n, 1 <= f <= d, jitter >= 0)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    let mut rows: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..n).map(|_| unit.sample(&mut rng)).collect())
        .collect();
    if cfg.background == Background::RandomWalk {
        for row in &mut rows {
            let mut acc = 0.0;
            for v in row.iter_mut() {
                acc += *v;
                *v = acc;
            }
        }
    }

    let mut dims: Vec<usize> = sample(&mut rng, d, f).into_vec();
    dims.sort_unstable();

    // Windows overlap when their starts are at most l apart, so every copy
    // reserves l + 1 slots; the slack is spread over k + 1 gaps.
    let slack = n - k * (l + 1) + 1;
    let mut cuts: Vec<usize> = (0..k).map(|_| rng.random_range(0..=slack)).collect();
    cuts.sort_unstable();
    let occurrences: Vec<Occurrence> = cuts
        .iter()
        .enumerate()
        .map(|(c, &cut)| Occurrence {
            start: cut + c * (l + 1),
            length: l,
        })
        .collect();

    for &dim in &dims {
        let template = smooth_template(&mut rng, l);
        for occ in &occurrences {
            let (scale, noise) = if cfg.jitter > 0.0 {
                (rng.random_range(0.8..=1.2), cfg.jitter * 2.0)
            } else {
                (1.0, 0.0)
            };
            for (t, v) in template.iter().enumerate() {
                let eps = if noise > 0.0 {
                    noise * unit.sample(&mut rng)
                } else {
                    0.0
                };
                rows[dim][occ.start + t] = scale * v + eps;
            }
        }
    }
    let ts = MultivariateTimeSeries::from_dimensions(rows)?;
    Ok((
        ts,
        GroundTruth {
            occurrences,
            dims,
            k,
            l,
            f,
        },
    ))
}

fn smooth_template(rng: &mut ChaCha8Rng, l: usize) -> Vec<f64> {
    let waves: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.random_range(0.5..=1.5),
                rng.random_range(0.5..=1.5),
                rng.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect();
    let mut x: Vec<f64> = (0..l)
        .map(|t| {
            let u = t as f64 / l as f64;
            waves
                .iter()
                .map(|&(a, c, p)| a * (std::f64::consts::TAU * c * u + p).sin())
                .sum()
        })
        .collect();
    let mean = x.iter().sum::<f64>() / l as f64;
    let std = (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / l as f64).sqrt();
    for v in &mut x {
        *v = 2.0 * (*v - mean) / std.max(1e-12);
    }
    x
}

/// Adds Gaussian noise of std `level * std(dim)` to every dimension.
pub fn add_noise(ts: &MultivariateTimeSeries, level: f64, seed: u64) -> Result<MultivariateTimeSeries, CoreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    let rows = (0..ts.dims())
        .map(|k| {
            let x = ts.dim(k);
            let mean = x.iter().sum::<f64>() / x.len() as f64;
            let std = (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / x.len() as f64).sqrt();
            x.iter().map(|v| v + level * std * unit.sample(&mut rng)).collect()
        })
        .collect();
    MultivariateTimeSeries::from_dimensions(rows)
}

/// Distance of two windows computed from scratch: z-normalize-then-ED for
/// ZED, the textbook formula otherwise.
pub fn naive_distance(measure: DistanceMeasure, a: &[f64], b: &[f64]) -> f64 {
    match measure {
        DistanceMeasure::ZNormalizedEuclidean => {
            let za = znorm(a);
            let zb = znorm(b);
            match (za, zb) {
                (None, None) => 0.0,
                (None, Some(_)) | (Some(_), None) => 2.0 * a.len() as f64,
                (Some(x), Some(y)) => x.iter().zip(&y).map(|(p, q)| (p - q) * (p - q)).sum(),
            }
        }
        DistanceMeasure::Euclidean => ed_squared(a, b),
        DistanceMeasure::Cosine => cosine_distance(a, b),
        DistanceMeasure::ComplexityInvariant => cid(a, b),
    }
}

fn znorm(x: &[f64]) -> Option<Vec<f64>> {
    let l = x.len() as f64;
    let mean = x.iter().sum::<f64>() / l;
    let std = (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / l).sqrt();
    (std >= FLAT_EPSILON).then(|| x.iter().map(|v| (v - mean) / std).collect())
}

/// Naive `d x m x m` distance table.
pub fn naive_table(ts: &MultivariateTimeSeries, l: usize, measure: DistanceMeasure) -> Vec<Vec<f64>> {
    let m = ts.num_windows(l);
    (0..ts.dims())
        .map(|dim| {
            let x = ts.dim(dim);
            let mut t = vec![0.0; m * m];
            for a in 0..m {
                for b in a + 1..m {
                    let v = naive_distance(measure, &x[a..a + l], &x[b..b + l]);
                    t[a * m + b] = v;
                    t[b * m + a] = v;
                }
            }
            t
        })
        .collect()
}

/// Default evaluation cap of [`brute_force_leitmotif`].
pub const BRUTE_FORCE_CAP: f64 = 1e7;

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exact minimum-extent leitmotif over every `f`-subset of dimensions and
/// every pairwise non-overlapping `k`-set of windows.
///
/// Distances come from [`naive_table`]. Ties go to the first dimension
/// subset in lexicographic order, then to the smallest offsets. Refuses when `C(m, k) * C(d, f)`
/// exceeds `cap`.
pub fn brute_force_leitmotif(
    ts: &MultivariateTimeSeries,
    l: usize,
    k: usize,
    f: usize,
    measure: DistanceMeasure,
    rule: &OverlapRule,
    cap: f64,
) -> Result<Leitmotif, CoreError> {
    let d = ts.dims();
    let m = ts.num_windows(l);
    let work = binomial(m, k) * binomial(d, f);
    if k < 2 || f < 1 || f > d || work > cap {
        return Err(CoreError::Parameter(format!(
            "brute force refused: C({m}, {k}) * C({d}, {f}) = {work:.0} evaluations (cap {cap:.0})"
        )));
    }
    let table = naive_table(ts, l, measure);
    let mut best: Option<Leitmotif> = None;
    for dims in subsets(d, f) {
        let mut sum = vec![0.0; m * m];
        for &dim in &dims {
            for (s, v) in sum.iter_mut().zip(&table[dim]) {
                *s += v;
            }
        }
        let mut bound = best.as_ref().map_or(f64::INFINITY, |b| b.extent);
        let mut found: Option<(f64, Vec<usize>)> = None;
        let mut set = Vec::with_capacity(k);
        search_sets(&sum, m, k, rule, &mut set, 0.0, &mut bound, &mut found);
        if let Some((extent, offsets)) = found {
            if best.as_ref().is_none_or(|b| extent < b.extent) {
                best = Some(Leitmotif {
                    query: offsets[0],
                    offsets,
                    dims: dims.clone(),
                    extent,
                    window: l,
                    measure,
                });
            }
        }
    }
    best.ok_or(CoreError::NoLeitmotif)
}

#[allow(clippy::too_many_arguments)]
fn search_sets(
    sum: &[f64],
    m: usize,
    k: usize,
    rule: &OverlapRule,
    set: &mut Vec<usize>,
    extent: f64,
    bound: &mut f64,
    found: &mut Option<(f64, Vec<usize>)>,
) {
    if set.len() == k {
        if extent < *bound {
            *bound = extent;
            *found = Some((extent, set.clone()));
        }
        return;
    }
    let start = set.last().map_or(0, |&o| o + 1);
    for next in start..m {
        if set.iter().any(|&o| rule.conflicts(o, next)) {
            continue;
        }
        let e = set.iter().map(|&o| sum[o * m + next]).fold(extent, f64::max);
        // Equal extents found later lose the lexicographic tie-break.
        if e >= *bound {
            continue;
        }
        set.push(next);
        search_sets(sum, m, k, rule, set, e, bound, found);
        set.pop();
    }
}

fn subsets(d: usize, f: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(f);
    fn rec(start: usize, d: usize, f: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == f {
            out.push(cur.clone());
            return;
        }
        for x in start..d {
            cur.push(x);
            rec(x + 1, d, f, cur, out);
            cur.pop();
        }
    }
    rec(0, d, f, &mut cur, &mut out);
    out
}

/// Precision and recall of found occurrences against the ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Matched found / found.
    pub precision: f64,
    /// Matched ground truth / ground truth.
    pub recall: f64,
    /// `(found index, ground-truth index)` pairs.
    pub matched: Vec<(usize, usize)>,
    /// Minimum overlap ratio for a match.
    pub overlap_threshold: f64,
}

/// Default overlap ratio for a match.
pub const DEFAULT_OVERLAP: f64 = 0.5;

/// Matches found intervals to ground-truth intervals one to one.
///
/// A pair qualifies when the intersection covers at least `threshold` of the
/// ground-truth length. Qualifying pairs are taken greedily by descending
/// overlap (ties: lower found index, then lower ground-truth index).
pub fn evaluate(found: &[Occurrence], gt: &[Occurrence], threshold: f64) -> Result<EvalReport, CoreError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(CoreError::Parameter(format!(
            "overlap threshold {threshold} outside (0, 1]"
        )));
    }
    let mut pairs = Vec::new();
    for (i, a) in found.iter().enumerate() {
        for (j, b) in gt.iter().enumerate() {
            let inter = a.end().min(b.end()).saturating_sub(a.start.max(b.start));
            let ratio = inter as f64 / b.length as f64;
            if b.length > 0 && ratio >= threshold {
                pairs.push((ratio, i, j));
            }
        }
    }
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used_found = vec![false; found.len()];
    let mut used_gt = vec![false; gt.len()];
    let mut matched = Vec::new();
    for (_, i, j) in pairs {
        if !used_found[i] && !used_gt[j] {
            used_found[i] = true;
            used_gt[j] = true;
            matched.push((i, j));
        }
    }
    matched.sort_unstable();
    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    Ok(EvalReport {
        precision: ratio(matched.len(), found.len()),
        recall: ratio(matched.len(), gt.len()),
        matched,
        overlap_threshold: threshold,
    })
}

/// Occurrences of a found leitmotif.
pub fn occurrences(motif: &Leitmotif) -> Vec<Occurrence> {
    motif
        .offsets
        .iter()
        .map(|&start| Occurrence {
            start,
            length: motif.window,
        })
        .collect()
}

/// Runs the search on the dense matrix when it fits into `budget_bytes`, on
/// the sparse store otherwise. Returns the output and whether the sparse
/// path was used.
pub fn discover(
    ts: &MultivariateTimeSeries,
    l: usize,
    measure: DistanceMeasure,
    config: &LamaConfig,
    budget_bytes: usize,
    force_sparse: bool,
) -> Result<(leitmotif_core::LamaOutput, bool), CoreError> {
    if !force_sparse {
        match pairwise_matrix_with_budget(ts, l, measure, budget_bytes) {
            Ok(dm) => return lama(&dm, config).map(|o| (o, false)),
            Err(CoreError::Capacity { required, budget }) => {
                log::info!("dense matrix needs {required} bytes, budget {budget}; using the sparse store");
            }
            Err(e) => return Err(e),
        }
    }
    let store = build_sparse(ts, l, measure, config, budget_bytes)?;
    store.search(config.pruning).map(|o| (o, true))
}

/// Settings of [`noise_experiment`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    /// Generator settings; `seed` is the first seed of the run.
    pub synth: SynthConfig,
    /// Noise levels as fractions of each dimension's std.
    pub levels: Vec<f64>,
    /// Seeds per level.
    pub seeds: usize,
    /// Overlap ratio for a match.
    pub threshold: f64,
}

/// Mean and std of precision and recall at one noise level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    /// Noise level.
    pub level: f64,
    /// Mean precision over seeds.
    pub precision_mean: f64,
    /// Population std of precision.
    pub precision_std: f64,
    /// Mean recall over seeds.
    pub recall_mean: f64,
    /// Population std of recall.
    pub recall_std: f64,
}

/// For each level and seed: generate, add noise, search with the true
/// `(l, k, f)` and score against the ground truth.
pub fn noise_experiment(cfg: &NoiseConfig) -> Result<Vec<NoiseRow>, CoreError> {
    if cfg.levels.is_empty() {
        return Err(CoreError::Parameter("noise level list is empty".into()));
    }
    if cfg.seeds == 0 {
        return Err(CoreError::Parameter("at least one seed is required".into()));
    }
    if let Some(bad) = cfg.levels.iter().find(|v| v.is_nan() || **v < 0.0) {
        return Err(CoreError::Parameter(format!("negative noise level {bad}")));
    }
    let mut rows = Vec::with_capacity(cfg.levels.len());
    for &level in &cfg.levels {
        let mut p = Vec::with_capacity(cfg.seeds);
        let mut r = Vec::with_capacity(cfg.seeds);
        for s in 0..cfg.seeds as u64 {
            let synth = SynthConfig {
                seed: cfg.synth.seed + s,
                ..cfg.synth
            };
            let (clean, gt) = generate_synthetic(&synth)?;
            let ts = add_noise(&clean, level, synth.seed)?;
            let lama_cfg = LamaConfig::new(gt.k, gt.f, OverlapRule::with_window(gt.l));
            let report = match discover(
                &ts,
                gt.l,
                DistanceMeasure::ZNormalizedEuclidean,
                &lama_cfg,
                usize::MAX,
                false,
            ) {
                Ok((out, _)) => evaluate(&occurrences(&out.leitmotif), &gt.occurrences, cfg.threshold)?,
                Err(CoreError::NoLeitmotif) => evaluate(&[], &gt.occurrences, cfg.threshold)?,
                Err(e) => return Err(e),
            };
            p.push(report.precision);
            r.push(report.recall);
        }
        let (pm, ps) = mean_std(&p);
        let (rm, rs) = mean_std(&r);
        rows.push(NoiseRow {
            level,
            precision_mean: pm,
            precision_std: ps,
            recall_mean: rm,
            recall_std: rs,
        });
    }
    Ok(rows)
}

fn mean_std(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use leitmotif_core::pairwise_matrix;
    use leitmotif_core::series::pairwise_disjoint;

    fn occ(start: usize, length: usize) -> Occurrence {
        Occurrence { start, length }
    }

    #[test]
    fn evaluation_examples() {
        let gt = [occ(0, 10), occ(30, 10)];
        let exact = evaluate(&gt, &gt, 0.5).unwrap();
        assert_eq!((exact.precision, exact.recall), (1.0, 1.0));

        let half = evaluate(&[occ(10, 10)], &[occ(15, 10)], 0.5).unwrap();
        assert_eq!(half.matched, vec![(0, 0)]);
        assert!(evaluate(&[occ(10, 10)], &[occ(15, 10)], 0.6)
            .unwrap()
            .matched
            .is_empty());

        let found = [occ(0, 10), occ(100, 10), occ(52, 10)];
        let truth = [occ(2, 10), occ(50, 10), occ(200, 10), occ(300, 10)];
        let r = evaluate(&found, &truth, 0.5).unwrap();
        assert_eq!(r.precision, 2.0 / 3.0);
        assert_eq!(r.recall, 2.0 / 4.0);
        assert!(evaluate(&found, &truth, 0.0).is_err());
    }

    #[test]
    fn one_to_one_matching() {
        // Both found intervals overlap the single truth; only the closer one counts.
        let r = evaluate(&[occ(3, 10), occ(1, 10)], &[occ(0, 10)], 0.5).unwrap();
        assert_eq!(r.matched, vec![(1, 0)]);
        assert_eq!(r.precision, 0.5);
        assert_eq!(r.recall, 1.0);
    }

    #[test]
    fn synthetic_is_deterministic_and_disjoint() {
        let cfg = SynthConfig {
            seed: 7,
            n: 600,
            d: 4,
            k: 5,
            l: 30,
            f: 2,
            jitter: 0.1,
            background: Background::White,
        };
        let (a, gt) = generate_synthetic(&cfg).unwrap();
        let (b, _) = generate_synthetic(&cfg).unwrap();
        assert_eq!(a, b);
        let starts: Vec<usize> = gt.occurrences.iter().map(|o| o.start).collect();
        assert!(pairwise_disjoint(&starts, &OverlapRule::with_window(30)));
        assert!(gt.occurrences.last().unwrap().end() <= 600);
        assert_eq!(gt.dims.len(), 2);
        assert!(generate_synthetic(&SynthConfig { k: 11, ..cfg }).is_err());
        assert!(generate_synthetic(&SynthConfig { f: 5, ..cfg }).is_err());
    }

    #[test]
    fn exact_implant_is_found() {
        let cfg = SynthConfig {
            seed: 3,
            n: 500,
            d: 3,
            k: 4,
            l: 25,
            f: 2,
            jitter: 0.0,
            background: Background::White,
        };
        let (ts, gt) = generate_synthetic(&cfg).unwrap();
        let dm = pairwise_matrix(&ts, 25, DistanceMeasure::ZNormalizedEuclidean).unwrap();
        let out = lama(&dm, &LamaConfig::new(4, 2, OverlapRule::with_window(25))).unwrap();
        let starts: Vec<usize> = gt.occurrences.iter().map(|o| o.start).collect();
        assert_eq!(out.leitmotif.offsets, starts);
        assert_eq!(out.leitmotif.dims, gt.dims);
        assert!(out.leitmotif.extent < 1e-9);
    }

    #[test]
    fn brute_force_pair_is_closest_full_dimensional_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ts = MultivariateTimeSeries::new(2, 24, (0..48).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
        let l = 4;
        let rule = OverlapRule::with_window(l);
        let bf = brute_force_leitmotif(
            &ts,
            l,
            2,
            2,
            DistanceMeasure::ZNormalizedEuclidean,
            &rule,
            BRUTE_FORCE_CAP,
        )
        .unwrap();
        let table = naive_table(&ts, l, DistanceMeasure::ZNormalizedEuclidean);
        let m = ts.num_windows(l);
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..m {
            for b in a + 1..m {
                let v = table[0][a * m + b] + table[1][a * m + b];
                if !rule.conflicts(a, b) && v < best.0 {
                    best = (v, a, b);
                }
            }
        }
        assert_eq!(bf.offsets, vec![best.1, best.2]);
        assert_eq!(bf.extent, best.0);
    }

    #[test]
    fn brute_force_refuses_large_instances() {
        let ts = MultivariateTimeSeries::new(1, 400, (0..400).map(|v| (v as f64).sin()).collect()).unwrap();
        let r = brute_force_leitmotif(
            &ts,
            5,
            5,
            1,
            DistanceMeasure::Euclidean,
            &OverlapRule::with_window(5),
            1e6,
        );
        assert!(matches!(r, Err(CoreError::Parameter(_))));
    }

    #[test]
    fn noise_experiment_contracts() {
        let synth = SynthConfig {
            seed: 0,
            n: 300,
            d: 2,
            k: 3,
            l: 20,
            f: 1,
            jitter: 0.0,
            background: Background::White,
        };
        let empty = NoiseConfig {
            synth,
            levels: vec![],
            seeds: 2,
            threshold: 0.5,
        };
        assert!(noise_experiment(&empty).is_err());
        let rows = noise_experiment(&NoiseConfig {
            levels: vec![0.0],
            ..empty
        })
        .unwrap();
        assert_eq!(rows[0].precision_mean, 1.0);
        assert_eq!(rows[0].recall_mean, 1.0);
    }
}
