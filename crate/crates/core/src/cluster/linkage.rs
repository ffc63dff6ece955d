use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Upper-triangular pairwise distances for `n` items, row-major without the
/// diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CondensedDistances {
    n: usize,
    values: Vec<f64>,
}

impl CondensedDistances {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::usage(format!(
                "{} condensed values do not describe {n} items",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(Error::usage(format!("distance {bad} outside [0, 1]")));
        }
        Ok(CondensedDistances { n, values })
    }

    /// Fills the matrix from `f(i, j)` for every `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                values.push(f(i, j));
            }
        }
        Self::new(n, values)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[offset(self.n, i, j)]
    }
}

#[inline]
fn offset(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i != j);
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    n * i - i * (i + 1) / 2 + (j - i - 1)
}

/// Candidate merge: average distance, then the two slot indices with the
/// smaller first. Slots are the minimum member position of each cluster, so
/// ordering by this key breaks distance ties by member rank.
#[derive(Debug, Clone, Copy)]
struct MergeKey {
    avg: f64,
    lo: usize,
    hi: usize,
}

impl MergeKey {
    fn new(avg: f64, a: usize, b: usize) -> Self {
        MergeKey {
            avg,
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    fn cmp(&self, other: &MergeKey) -> Ordering {
        self.avg
            .total_cmp(&other.avg)
            .then(self.lo.cmp(&other.lo))
            .then(self.hi.cmp(&other.hi))
    }

    fn partner_of(&self, slot: usize) -> usize {
        if self.lo == slot {
            self.hi
        } else {
            self.lo
        }
    }
}

struct State {
    n: usize,
    /// Sum of item distances across each pair of clusters, indexed by slot.
    sums: Vec<f64>,
    size: Vec<usize>,
    active: Vec<bool>,
    nearest: Vec<Option<MergeKey>>,
}

impl State {
    fn avg(&self, a: usize, b: usize) -> f64 {
        self.sums[offset(self.n, a, b)] / (self.size[a] * self.size[b]) as f64
    }

    fn key(&self, a: usize, b: usize) -> MergeKey {
        MergeKey::new(self.avg(a, b), a, b)
    }

    fn recompute_nearest(&mut self, a: usize) {
        let mut best: Option<MergeKey> = None;
        for b in (0..self.n).filter(|&b| b != a && self.active[b]) {
            let k = self.key(a, b);
            if best.is_none_or(|cur| k.cmp(&cur).is_lt()) {
                best = Some(k);
            }
        }
        self.nearest[a] = best;
    }
}

/// Average-linkage agglomerative clustering of items `0..n`, where item
/// order is rank order. Merges continue while the closest pair of clusters
/// has average distance `<= t`.
///
/// Returns clusters as ascending member lists, ordered by smallest member.
pub fn agglomerate(dist: &CondensedDistances, t: f64) -> Result<Vec<Vec<usize>>> {
    let n = dist.len();
    if n == 0 {
        return Err(Error::usage("cannot cluster an empty item list"));
    }
    let mut st = State {
        n,
        sums: dist.values.clone(),
        size: vec![1; n],
        active: vec![true; n],
        nearest: vec![None; n],
    };
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for a in 0..n {
        st.recompute_nearest(a);
    }

    let mut remaining = n;
    while remaining > 1 {
        let best = st
            .nearest
            .iter()
            .zip(&st.active)
            .filter_map(|(k, &on)| if on { *k } else { None })
            .min_by(|x, y| x.cmp(y))
            .expect("at least two active clusters");
        if best.avg > t {
            break;
        }
        let (keep, gone) = (best.lo, best.hi);

        for c in 0..n {
            if c != keep && c != gone && st.active[c] {
                let (kc, gc) = (offset(n, keep, c), offset(n, gone, c));
                st.sums[kc] += st.sums[gc];
            }
        }
        st.size[keep] += st.size[gone];
        st.active[gone] = false;
        st.nearest[gone] = None;
        let moved = std::mem::take(&mut members[gone]);
        members[keep].extend(moved);
        remaining -= 1;

        for c in 0..n {
            if c == keep || !st.active[c] {
                continue;
            }
            match st.nearest[c] {
                Some(k) if k.partner_of(c) == keep || k.partner_of(c) == gone => st.recompute_nearest(c),
                Some(k) => {
                    let cand = st.key(c, keep);
                    if cand.cmp(&k).is_lt() {
                        st.nearest[c] = Some(cand);
                    }
                }
                None => st.recompute_nearest(c),
            }
        }
        st.recompute_nearest(keep);
    }

    let mut out: Vec<Vec<usize>> = members
        .into_iter()
        .zip(&st.active)
        .filter_map(|(mut m, &on)| {
            on.then(|| {
                m.sort_unstable();
                m
            })
        })
        .collect();
    out.sort_by_key(|m| m[0]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(n: usize, pairs: &[((usize, usize), f64)]) -> CondensedDistances {
        CondensedDistances::from_fn(n, |i, j| {
            pairs
                .iter()
                .find(|((a, b), _)| (*a, *b) == (i, j))
                .map(|p| p.1)
                .unwrap()
        })
        .unwrap()
    }

    #[test]
    fn offsets_are_bijective() {
        let n = 7;
        let mut seen = vec![false; n * (n - 1) / 2];
        for i in 0..n {
            for j in i + 1..n {
                let o = offset(n, i, j);
                assert!(!seen[o]);
                seen[o] = true;
                assert_eq!(o, offset(n, j, i));
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn singleton() {
        let d = CondensedDistances::new(1, vec![]).unwrap();
        assert_eq!(agglomerate(&d, 0.7).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn empty_input_is_rejected() {
        let d = CondensedDistances::new(0, vec![]).unwrap();
        assert!(agglomerate(&d, 0.4).is_err());
    }

    #[test]
    fn stops_above_threshold() {
        // a-b at 0.1, then {a,b}-c averages 0.5
        let d = matrix(3, &[((0, 1), 0.1), ((0, 2), 0.5), ((1, 2), 0.5)]);
        assert_eq!(agglomerate(&d, 0.4).unwrap(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn merges_at_exactly_threshold() {
        // {a,b}-c averages (0.3 + 0.5) / 2 = 0.4
        let d = matrix(3, &[((0, 1), 0.1), ((0, 2), 0.3), ((1, 2), 0.5)]);
        assert_eq!(agglomerate(&d, 0.4).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn ties_prefer_lowest_ranks() {
        // all pairs tie at 0.25 and every average stays exactly 0.25
        let d = CondensedDistances::from_fn(4, |_, _| 0.25).unwrap();
        assert_eq!(agglomerate(&d, 0.25).unwrap(), vec![vec![0, 1, 2, 3]]);
        let d = matrix(
            4,
            &[((0, 1), 0.25), ((0, 2), 0.5), ((0, 3), 1.0), ((1, 2), 0.5), ((1, 3), 1.0), ((2, 3), 0.25)],
        );
        assert_eq!(agglomerate(&d, 0.3).unwrap(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(CondensedDistances::new(3, vec![0.1, 0.2]).is_err());
        assert!(CondensedDistances::new(2, vec![1.5]).is_err());
    }
}
