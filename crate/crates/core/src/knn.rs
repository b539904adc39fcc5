//! Per-dimension non-trivial nearest neighbours of a query window.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::series::OverlapRule;

/// The query plus up to `k - 1` neighbours in one dimension.
///
/// Entry 0 is always the query itself at distance 0, so a feasible row holds
/// exactly `k` offsets and its `(k-1)`-th neighbour sits at index `k - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnRow {
    /// Query first, then neighbours by ascending distance.
    pub offsets: Vec<usize>,
    /// Distance of each listed offset to the query.
    pub dists: Vec<f64>,
    /// Whether `k - 1` mutually non-overlapping neighbours were found.
    pub feasible: bool,
}

impl KnnRow {
    /// Distance to the farthest of the `k - 1` neighbours; `+inf` if infeasible.
    pub fn kth_distance(&self) -> f64 {
        if self.feasible {
            *self.dists.last().unwrap_or(&0.0)
        } else {
            f64::INFINITY
        }
    }
}

/// One [`KnnRow`] per dimension for a single query.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnTable {
    rows: Vec<KnnRow>,
}

impl KnnTable {
    /// Wraps per-dimension rows.
    pub fn new(rows: Vec<KnnRow>) -> Self {
        Self { rows }
    }

    /// Row of dimension `dim`.
    pub fn row(&self, dim: usize) -> &KnnRow {
        &self.rows[dim]
    }

    /// All rows.
    pub fn rows(&self) -> &[KnnRow] {
        &self.rows
    }

    /// Number of dimensions.
    pub fn dims(&self) -> usize {
        self.rows.len()
    }
}

fn by_distance(row: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b))
}

/// Reusable index buffer for repeated k-NN searches.
#[derive(Debug, Default, Clone)]
pub struct KnnScratch {
    idx: Vec<usize>,
}

impl KnnScratch {
    /// Empty scratch space.
    pub fn new() -> Self {
        Self::default()
    }

    /// See [`non_trivial_arg_knn`].
    pub fn search(&mut self, row: &[f64], k: usize, query: usize, rule: &OverlapRule) -> KnnRow {
        let mut offsets = Vec::with_capacity(k);
        let mut dists = Vec::with_capacity(k);
        offsets.push(query);
        dists.push(0.0);
        if k <= 1 {
            return KnnRow {
                offsets,
                dists,
                feasible: true,
            };
        }

        self.idx.clear();
        self.idx.extend((0..row.len()).filter(|&j| !rule.conflicts(query, j)));
        let total = self.idx.len();
        // Every rejected index lies in the zone of an accepted neighbour, so
        // the greedy pass finishes inside this many smallest entries.
        let mut prefix = ((k - 1) * (rule.zone_width() + 1)).max(1);
        let cmp = by_distance(row);
        loop {
            let p = prefix.min(total);
            if p < total {
                self.idx.select_nth_unstable_by(p - 1, &cmp);
            }
            self.idx[..p].sort_unstable_by(&cmp);
            offsets.truncate(1);
            dists.truncate(1);
            for &j in &self.idx[..p] {
                if offsets.iter().all(|&o| !rule.conflicts(o, j)) {
                    offsets.push(j);
                    dists.push(row[j]);
                    if offsets.len() == k {
                        return KnnRow {
                            offsets,
                            dists,
                            feasible: true,
                        };
                    }
                }
            }
            if p == total {
                return KnnRow {
                    offsets,
                    dists,
                    feasible: false,
                };
            }
            prefix *= 2;
        }
    }
}

/// The query plus its `k - 1` closest neighbours that overlap neither the
/// query nor each other, picked greedily by ascending `(distance, offset)`.
///
/// If fewer than `k - 1` such neighbours exist the row is returned with
/// `feasible == false`; it is never silently truncated.
pub fn non_trivial_arg_knn(row: &[f64], k: usize, query: usize, rule: &OverlapRule) -> KnnRow {
    KnnScratch::new().search(row, k, query, rule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    /// Full sort followed by the greedy filter.
    fn reference(row: &[f64], k: usize, query: usize, rule: &OverlapRule) -> (Vec<usize>, bool) {
        let mut idx: Vec<usize> = (0..row.len()).filter(|&j| j != query).collect();
        idx.sort_by(|&a, &b| row[a].partial_cmp(&row[b]).unwrap().then(a.cmp(&b)));
        let mut out = vec![query];
        for j in idx {
            if out.len() == k {
                break;
            }
            if out.iter().all(|&o| !rule.overlaps(o, j) && !rule.overlaps(j, o)) {
                out.push(j);
            }
        }
        let ok = out.len() == k;
        (out, ok)
    }

    #[test]
    fn hand_example() {
        let rule = OverlapRule::with_window(1);
        let r = non_trivial_arg_knn(&[0.0, 9.0, 1.0, 8.0, 2.0], 3, 0, &rule);
        assert!(r.feasible);
        assert_eq!(r.offsets, vec![0, 2, 4]);
        assert_eq!(r.dists, vec![0.0, 1.0, 2.0]);
        assert_eq!(r.kth_distance(), 2.0);
    }

    #[test]
    fn exact_duplicate_comes_first() {
        let rule = OverlapRule::with_window(3);
        let row = [0.0, 0.5, 0.7, 3.0, 4.0, 5.0, 0.0, 6.0, 2.0, 2.5];
        let r = non_trivial_arg_knn(&row, 2, 0, &rule);
        assert_eq!(r.offsets, vec![0, 6]);
        assert_eq!(r.dists[1], 0.0);
    }

    #[test]
    fn degenerate_length_is_infeasible() {
        let rule = OverlapRule::with_window(4);
        let r = non_trivial_arg_knn(&[0.0, 1.0, 2.0, 3.0], 2, 1, &rule);
        assert!(!r.feasible);
        assert_eq!(r.offsets, vec![1]);
        assert_eq!(r.kth_distance(), f64::INFINITY);
    }

    #[test]
    fn partial_result_reported_infeasible() {
        // Room for one neighbour but not two.
        let rule = OverlapRule::with_window(2);
        let row = [0.0, 1.0, 1.0, 0.5, 0.2];
        let r = non_trivial_arg_knn(&row, 3, 0, &rule);
        assert!(!r.feasible);
        assert_eq!(r.offsets, vec![0, 4]);
    }

    #[test]
    fn ties_prefer_smaller_offset() {
        let rule = OverlapRule::with_window(1);
        let r = non_trivial_arg_knn(&[0.0, 5.0, 1.0, 5.0, 1.0, 5.0, 1.0], 3, 0, &rule);
        assert_eq!(r.offsets, vec![0, 2, 4]);
    }

    proptest! {
        #[test]
        fn agrees_with_full_sort(
            row in prop::collection::vec(0.0f64..10.0, 2..200),
            k in 2usize..6,
            l in 1usize..8,
            alpha in prop::sample::select(vec![0.0, 0.3, 0.5, 1.0]),
            q in any::<prop::sample::Index>(),
        ) {
            let query = q.index(row.len());
            let rule = OverlapRule::new(l, alpha).unwrap();
            let got = non_trivial_arg_knn(&row, k, query, &rule);
            let (want, ok) = reference(&row, k, query, &rule);
            prop_assert_eq!(&got.offsets, &want);
            prop_assert_eq!(got.feasible, ok);
            // Pairwise non-overlapping and ascending.
            prop_assert!(crate::series::pairwise_disjoint(&got.offsets, &rule));
            prop_assert!(got.dists[1..].windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn zero_alpha_is_plain_k_smallest(
            row in prop::collection::vec(0.0f64..10.0, 3..100),
            k in 2usize..5,
        ) {
            let rule = OverlapRule::new(10, 0.0).unwrap();
            let got = non_trivial_arg_knn(&row, k, 0, &rule);
            let mut rest: Vec<(f64, usize)> = row.iter().copied().zip(0..).skip(1).collect();
            rest.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let want: Vec<usize> = core::iter::once(0).chain(rest.iter().take(k - 1).map(|p| p.1)).collect();
            if row.len() >= k {
                prop_assert_eq!(got.offsets, want);
            }
        }
    }
}
