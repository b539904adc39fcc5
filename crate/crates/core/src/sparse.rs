//! Two-pass sparse distance store for series too long for a dense matrix.
//!
//! Pass 1 streams the distance matrix row by row, runs the k-NN search and
//! dimension selection of each query, and memorizes which pairs the extent
//! of its candidate set will need. Many of those pairs point at rows not yet
//! (or no longer) in memory. Pass 2 streams the rows again and keeps exactly
//! the memorized pairs. Resident distance memory is one row per dimension per
//! worker plus the store.
//!
//! Both passes use the same kernel as [`crate::distance::pairwise_matrix`],
//! so stored values and k-NN rows are bit-identical to the dense path.

use alloc::vec;
use alloc::vec::Vec;

use crate::distance::{dense_bytes, DistanceMeasure, DistanceSource, Prepared, RowCursor, ROW_BLOCK};
use crate::error::{ensure_param, CoreError, Result};
use crate::knn::{KnnRow, KnnScratch, KnnTable};
use crate::lama::{lama, select_f_dimensions, CandidateSource, LamaConfig, LamaOutput};
use crate::series::{MultivariateTimeSeries, OverlapRule};

const OFFSET_BITS: u32 = 26;
const DIM_BITS: u32 = 12;
const OFFSET_MASK: u64 = (1 << OFFSET_BITS) - 1;
const DIM_MASK: u64 = (1 << DIM_BITS) - 1;

/// Every this many rows, both passes checksum the row for comparison.
const CHECKSUM_STRIDE: usize = 97;

/// Packed `(i, dim, j)` key with `i < j`; sorting groups keys by row `i`.
#[inline]
fn pack(dim: usize, a: usize, b: usize) -> u64 {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    ((i as u64) << (OFFSET_BITS + DIM_BITS)) | ((dim as u64) << OFFSET_BITS) | j as u64
}

#[inline]
fn key_row(key: u64) -> usize {
    (key >> (OFFSET_BITS + DIM_BITS)) as usize
}

#[inline]
fn unpack(key: u64) -> (usize, usize, usize) {
    (
        key_row(key),
        ((key >> OFFSET_BITS) & DIM_MASK) as usize,
        (key & OFFSET_MASK) as usize,
    )
}

fn checksum(row: &[f64]) -> u64 {
    row.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, v| {
        (h ^ v.to_bits()).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Memorized pairwise distances plus the k-NN rows of every query.
#[derive(Debug, Clone)]
pub struct SparseDistanceStore {
    dims: usize,
    windows: usize,
    window: usize,
    measure: DistanceMeasure,
    config: LamaConfig,
    keys: Vec<u64>,
    values: Vec<f64>,
    knn_offsets: Vec<u32>,
    knn_dists: Vec<f64>,
    knn_counts: Vec<u16>,
    memory_bound: usize,
    peak_bytes: usize,
}

struct BlockMemo {
    keys: Vec<u64>,
    offsets: Vec<u32>,
    dists: Vec<f64>,
    counts: Vec<u16>,
    checksums: Vec<u64>,
}

impl SparseDistanceStore {
    /// Number of memorized pairs (over all dimensions).
    pub fn entries(&self) -> usize {
        self.keys.len()
    }

    /// Search configuration the store was built for.
    pub fn config(&self) -> &LamaConfig {
        &self.config
    }

    /// Bytes held by the store: pair keys and values plus k-NN rows.
    pub fn stored_bytes(&self) -> usize {
        self.keys.len() * 8
            + self.values.len() * 8
            + self.knn_offsets.len() * 4
            + self.knn_dists.len() * 8
            + self.knn_counts.len() * 2
    }

    /// Peak distance-related bytes during the build, including row buffers
    /// and the unsorted key list of pass 1.
    pub fn peak_bytes(&self) -> usize {
        self.peak_bytes
    }

    /// Bytes the dense matrix would need for the same series.
    pub fn dense_bytes(&self) -> usize {
        dense_bytes(self.dims, self.windows)
    }

    /// Configured memory bound.
    pub fn memory_bound(&self) -> usize {
        self.memory_bound
    }

    /// Stored distance of windows `i` and `j` in dimension `dim`.
    ///
    /// `i == j` is 0 without storage. A pair pass 1 did not memorize is an
    /// error, never a silent recomputation.
    pub fn lookup(&self, dim: usize, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Ok(0.0);
        }
        self.keys
            .binary_search(&pack(dim, i, j))
            .map(|idx| self.values[idx])
            .map_err(|_| CoreError::MissingPair { dim, i, j })
    }

    /// Runs the search the store was built for.
    pub fn search(&self, pruning: bool) -> Result<LamaOutput> {
        lama(self, &self.config.with_pruning(pruning))
    }

    fn stored_row(&self, query: usize, dim: usize) -> KnnRow {
        let slot = query * self.dims + dim;
        let k = self.config.k;
        let count = self.knn_counts[slot] as usize;
        let base = slot * k;
        KnnRow {
            offsets: self.knn_offsets[base..base + count]
                .iter()
                .map(|&o| o as usize)
                .collect(),
            dists: self.knn_dists[base..base + count].to_vec(),
            feasible: count == k,
        }
    }
}

impl DistanceSource for SparseDistanceStore {
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

    fn distance(&self, dim: usize, a: usize, b: usize) -> f64 {
        match self.lookup(dim, a, b) {
            Ok(v) => v,
            Err(e) => panic!("sparse store bookkeeping: {e}"),
        }
    }

    fn knn_table(&self, query: usize, k: usize, rule: &OverlapRule, _: &mut KnnScratch) -> KnnTable {
        assert!(
            k == self.config.k && *rule == self.config.rule,
            "sparse store was built for k = {}, queried with k = {k}",
            self.config.k
        );
        KnnTable::new((0..self.dims).map(|dim| self.stored_row(query, dim)).collect())
    }
}

/// Builds the sparse store for one search configuration.
///
/// Fails with [`CoreError::Capacity`] when the memorized pairs and k-NN rows
/// would exceed `memory_bound` bytes.
pub fn build_sparse(
    ts: &MultivariateTimeSeries,
    l: usize,
    measure: DistanceMeasure,
    config: &LamaConfig,
    memory_bound: usize,
) -> Result<SparseDistanceStore> {
    ts.check_window(l)?;
    let m = ts.num_windows(l);
    let d = ts.dims();
    ensure_param!(config.k >= 2, "motif set size k must be at least 2, got {}", config.k);
    ensure_param!(config.f >= 1 && config.f <= d, "f = {} outside [1, {d}]", config.f);
    ensure_param!(config.rule.window() == l, "overlap rule window differs from l = {l}");
    ensure_param!(
        (m as u64) <= OFFSET_MASK,
        "series too long for the sparse store ({m} windows)"
    );
    ensure_param!((d as u64) <= DIM_MASK, "too many dimensions for the sparse store ({d})");
    ensure_param!(config.k <= u16::MAX as usize, "k too large");

    let prep = Prepared::new(ts, l, measure)?;
    let blocks: Vec<core::ops::Range<usize>> = (0..m).step_by(ROW_BLOCK).map(|s| s..(s + ROW_BLOCK).min(m)).collect();
    let workers = worker_count().min(blocks.len()).max(1);
    let row_bytes = workers * d * m * 8 * 2;

    // Pass 1: k-NN rows, dimension selection, memorized pairs.
    let memos: Vec<BlockMemo> = map_blocks(&blocks, |rows| pass_one(&prep, config, rows));
    let raw_keys: usize = memos.iter().map(|b| b.keys.len()).sum();
    let knn_bytes = m * d * config.k * 12 + m * d * 2;
    let pass_one_bytes = raw_keys * 8 + knn_bytes + row_bytes;
    if pass_one_bytes > memory_bound {
        return Err(CoreError::Capacity {
            required: pass_one_bytes,
            budget: memory_bound,
        });
    }

    let mut keys = Vec::with_capacity(raw_keys);
    let mut knn_offsets = Vec::with_capacity(m * d * config.k);
    let mut knn_dists = Vec::with_capacity(m * d * config.k);
    let mut knn_counts = Vec::with_capacity(m * d);
    let mut checksums = Vec::new();
    for memo in memos {
        keys.extend(memo.keys);
        knn_offsets.extend(memo.offsets);
        knn_dists.extend(memo.dists);
        knn_counts.extend(memo.counts);
        checksums.extend(memo.checksums);
    }
    keys.sort_unstable();
    keys.dedup();
    let stored = keys.len() * 16 + knn_bytes;
    if stored > memory_bound {
        return Err(CoreError::Capacity {
            required: stored,
            budget: memory_bound,
        });
    }
    log::debug!(
        "sparse pass 1: {} pairs memorized ({} before dedup) for m = {m}, d = {d}",
        keys.len(),
        raw_keys
    );

    // Pass 2: fill the memorized pairs, grouped by their smaller offset.
    let mut values = vec![0.0; keys.len()];
    let mut slices: Vec<(core::ops::Range<usize>, &[u64], &mut [f64])> = Vec::with_capacity(blocks.len());
    {
        let mut rest_keys: &[u64] = &keys;
        let mut rest_vals: &mut [f64] = &mut values;
        for rows in &blocks {
            let cut = rest_keys.partition_point(|&k| key_row(k) < rows.end);
            let (kh, kt) = rest_keys.split_at(cut);
            let (vh, vt) = core::mem::take(&mut rest_vals).split_at_mut(cut);
            slices.push((rows.clone(), kh, vh));
            rest_keys = kt;
            rest_vals = vt;
        }
    }
    let second: Vec<Vec<u64>> = map_slices(slices, |rows, keys, vals| pass_two(&prep, rows, keys, vals));
    let second: Vec<u64> = second.into_iter().flatten().collect();
    for (idx, (a, b)) in checksums.iter().zip(&second).enumerate() {
        if a != b {
            let row = (idx / d) * CHECKSUM_STRIDE;
            return Err(CoreError::RowMismatch { dim: idx % d, row });
        }
    }

    let peak_bytes = pass_one_bytes.max(stored + row_bytes);
    Ok(SparseDistanceStore {
        dims: d,
        windows: m,
        window: l,
        measure,
        config: *config,
        keys,
        values,
        knn_offsets,
        knn_dists,
        knn_counts,
        memory_bound,
        peak_bytes,
    })
}

fn pass_one(prep: &Prepared, config: &LamaConfig, rows: core::ops::Range<usize>) -> BlockMemo {
    let d = prep.dims();
    let m = prep.windows();
    let k = config.k;
    let mut cursors: Vec<RowCursor<'_>> = (0..d).map(|dim| RowCursor::new(prep, dim, rows.start)).collect();
    let mut buf = vec![0.0; m];
    let mut scratch = KnnScratch::new();
    let mut memo = BlockMemo {
        keys: Vec::new(),
        offsets: Vec::with_capacity(rows.len() * d * k),
        dists: Vec::with_capacity(rows.len() * d * k),
        counts: Vec::with_capacity(rows.len() * d),
        checksums: Vec::new(),
    };
    for i in rows.clone() {
        let mut knn_rows = Vec::with_capacity(d);
        for (dim, cursor) in cursors.iter_mut().enumerate() {
            if i > cursor.row() {
                cursor.advance();
            }
            cursor.distances(&mut buf);
            if i % CHECKSUM_STRIDE == 0 {
                memo.checksums.push(checksum(&buf));
            }
            let r = scratch.search(&buf, k, i, &config.rule);
            debug_assert!(dim == knn_rows.len());
            knn_rows.push(r);
        }
        for r in &knn_rows {
            memo.offsets.extend(r.offsets.iter().map(|&o| o as u32));
            memo.offsets.extend(core::iter::repeat_n(0, k - r.offsets.len()));
            memo.dists.extend_from_slice(&r.dists);
            memo.dists.extend(core::iter::repeat_n(0.0, k - r.dists.len()));
            memo.counts.push(r.offsets.len() as u16);
        }
        let table = KnnTable::new(knn_rows);
        let Some((dims, candidate)) = select_f_dimensions(&table, config.f) else {
            continue;
        };
        let sets: Vec<&[usize]> = match config.candidates {
            CandidateSource::BestDimension => vec![&candidate[..]],
            CandidateSource::SelectedDimensions => dims.iter().map(|&dim| &table.row(dim).offsets[..]).collect(),
        };
        for set in sets {
            for (x, &a) in set.iter().enumerate() {
                for &b in &set[x + 1..] {
                    for &dim in &dims {
                        memo.keys.push(pack(dim, a, b));
                    }
                }
            }
        }
    }
    memo
}

fn pass_two(prep: &Prepared, rows: core::ops::Range<usize>, keys: &[u64], vals: &mut [f64]) -> Vec<u64> {
    let d = prep.dims();
    let m = prep.windows();
    let mut cursors: Vec<RowCursor<'_>> = (0..d).map(|dim| RowCursor::new(prep, dim, rows.start)).collect();
    let mut bufs = vec![vec![0.0; m]; d];
    let mut sums = Vec::new();
    let mut at = 0;
    for i in rows {
        for (cursor, buf) in cursors.iter_mut().zip(bufs.iter_mut()) {
            if i > cursor.row() {
                cursor.advance();
            }
            cursor.distances(buf);
            if i % CHECKSUM_STRIDE == 0 {
                sums.push(checksum(buf));
            }
        }
        while at < keys.len() && key_row(keys[at]) == i {
            let (_, dim, j) = unpack(keys[at]);
            vals[at] = bufs[dim][j];
            at += 1;
        }
    }
    sums
}

#[cfg(feature = "parallel")]
fn worker_count() -> usize {
    rayon::current_num_threads()
}

#[cfg(not(feature = "parallel"))]
fn worker_count() -> usize {
    1
}

#[cfg(feature = "parallel")]
fn map_blocks<T: Send>(blocks: &[core::ops::Range<usize>], f: impl Fn(core::ops::Range<usize>) -> T + Sync) -> Vec<T> {
    use rayon::prelude::*;
    blocks.par_iter().map(|r| f(r.clone())).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_blocks<T>(blocks: &[core::ops::Range<usize>], f: impl Fn(core::ops::Range<usize>) -> T) -> Vec<T> {
    blocks.iter().map(|r| f(r.clone())).collect()
}

type Slice<'a> = (core::ops::Range<usize>, &'a [u64], &'a mut [f64]);

#[cfg(feature = "parallel")]
fn map_slices<T: Send>(
    slices: Vec<Slice<'_>>,
    f: impl Fn(core::ops::Range<usize>, &[u64], &mut [f64]) -> T + Sync,
) -> Vec<T> {
    use rayon::prelude::*;
    slices.into_par_iter().map(|(r, k, v)| f(r, k, v)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_slices<T>(slices: Vec<Slice<'_>>, f: impl Fn(core::ops::Range<usize>, &[u64], &mut [f64]) -> T) -> Vec<T> {
    slices.into_iter().map(|(r, k, v)| f(r, k, v)).collect()
}
