//! Brute-force ground truth by enumerating every composition of `n`.
//!
//! Compositions of `n >= 1` correspond to subsets of the `n - 1` gaps
//! between `n` unit cells: bit `i` of the cut set means "cut after cell
//! `i + 1`". The scan streams masks in order and never materializes the
//! whole list; [`aggregate`] splits the mask space into ranges handled by
//! independent workers and merges their partial reports.

use rayon::prelude::*;

use num_bigint::BigInt;

use crate::error::Error;
use crate::genfun::Threshold;
use crate::stats::{self, ExactRational, StatRow};

/// Default largest `n` the oracle will enumerate.
pub const DEFAULT_CAP: usize = 24;

/// Beyond this the cut set no longer fits in a `u64`.
pub const HARD_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    /// `None` if any part is zero.
    pub fn new(parts: Vec<usize>) -> Option<Self> {
        parts.iter().all(|&p| p > 0).then_some(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn from_cut_set(n: usize, mask: u64) -> Self {
        if n == 0 {
            return Self { parts: vec![] };
        }
        let mut parts = Vec::with_capacity(mask.count_ones() as usize + 1);
        let mut run = 1;
        for i in 0..n - 1 {
            if mask >> i & 1 == 1 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        Self { parts }
    }

    pub fn cut_set(&self) -> u64 {
        let mut mask = 0u64;
        let mut pos = 0;
        for &p in self.parts.iter().take(self.parts.len().saturating_sub(1)) {
            pos += p;
            mask |= 1 << (pos - 1);
        }
        mask
    }
}

/// Stream of compositions of `n` over a contiguous range of cut sets.
#[derive(Clone, Debug)]
pub struct Compositions {
    n: usize,
    next: u64,
    end: u64,
}

impl Compositions {
    fn mask_count(n: usize) -> u64 {
        if n == 0 {
            1
        } else {
            1u64 << (n - 1)
        }
    }

    /// The cut sets `start..end`, clamped to the valid range.
    pub fn range(n: usize, start: u64, end: u64) -> Self {
        let total = Self::mask_count(n);
        Self {
            n,
            next: start.min(total),
            end: end.min(total),
        }
    }
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        if self.next >= self.end {
            return None;
        }
        let m = Composition::from_cut_set(self.n, self.next);
        self.next += 1;
        Some(m)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

pub fn enumerate(n: usize) -> Result<Compositions, Error> {
    enumerate_capped(n, DEFAULT_CAP)
}

pub fn enumerate_capped(n: usize, cap: usize) -> Result<Compositions, Error> {
    check_cap(n, cap)?;
    Ok(Compositions::range(n, 0, u64::MAX))
}

fn check_cap(n: usize, cap: usize) -> Result<(), Error> {
    let cap = cap.min(HARD_CAP);
    if n > cap {
        Err(Error::OracleCap { n, cap })
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BigEvenStats {
    /// Number of large even parts.
    pub count: usize,
    /// 1-based index of the first large even part.
    pub first_pos: Option<usize>,
}

pub fn big_even_stats(m: &Composition, t: Threshold) -> BigEvenStats {
    let mut count = 0;
    let mut first_pos = None;
    for (i, &p) in m.parts.iter().enumerate() {
        if t.is_big(p) {
            count += 1;
            first_pos.get_or_insert(i + 1);
        }
    }
    BigEvenStats { count, first_pos }
}

/// Every statistic for one `(n, k)`, counted directly from the definitions.
///
/// Positional vectors are indexed by `l`. `late` runs to `ell_max + 1` so
/// the telescoping identity can be checked at `ell_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub n: usize,
    pub k: u32,
    pub ell_max: u32,
    pub histogram: Vec<u64>,
    pub c: u64,
    pub even: u64,
    pub odd: u64,
    pub total: u64,
    /// At least `l` parts and none of the first `l` is large even.
    pub late: Vec<u64>,
    /// First large even part at position `l + 1`.
    pub first_at: Vec<u64>,
    /// Exactly `l` parts, none large even.
    pub exactly_allowed: Vec<u64>,
    /// A large even part exists and the first one is at position `> l`.
    pub late_exists: Vec<u64>,
    /// Like `late` but also counting compositions with fewer than `l`
    /// parts when none of them is large even.
    pub late_including_short: Vec<u64>,
}

impl OracleReport {
    fn empty(n: usize, k: u32, ell_max: u32) -> Self {
        let len = ell_max as usize + 1;
        Self {
            n,
            k,
            ell_max,
            histogram: vec![],
            c: 0,
            even: 0,
            odd: 0,
            total: 0,
            late: vec![0; len + 1],
            first_at: vec![0; len],
            exactly_allowed: vec![0; len],
            late_exists: vec![0; len],
            late_including_short: vec![0; len],
        }
    }

    fn record(&mut self, m: &Composition, t: Threshold) {
        let s = big_even_stats(m, t);
        let r = m.parts.len();
        if self.histogram.len() <= s.count {
            self.histogram.resize(s.count + 1, 0);
        }
        self.histogram[s.count] += 1;
        if s.count == 0 {
            self.c += 1;
        }
        if s.count.is_multiple_of(2) {
            self.even += 1;
        } else {
            self.odd += 1;
        }
        self.total += s.count as u64;
        for (ell, slot) in self.late.iter_mut().enumerate() {
            if r >= ell && s.first_pos.is_none_or(|p| p > ell) {
                *slot += 1;
            }
        }
        for ell in 0..self.first_at.len() {
            let late_or_none = s.first_pos.is_none_or(|p| p > ell);
            if s.first_pos == Some(ell + 1) {
                self.first_at[ell] += 1;
            }
            if r == ell && s.count == 0 {
                self.exactly_allowed[ell] += 1;
            }
            if s.first_pos.is_some_and(|p| p > ell) {
                self.late_exists[ell] += 1;
            }
            if late_or_none {
                self.late_including_short[ell] += 1;
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        if self.histogram.len() < other.histogram.len() {
            self.histogram.resize(other.histogram.len(), 0);
        }
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
        self.c += other.c;
        self.even += other.even;
        self.odd += other.odd;
        self.total += other.total;
        let add = |a: &mut Vec<u64>, b: &[u64]| a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        add(&mut self.late, &other.late);
        add(&mut self.first_at, &other.first_at);
        add(&mut self.exactly_allowed, &other.exactly_allowed);
        add(&mut self.late_exists, &other.late_exists);
        add(&mut self.late_including_short, &other.late_including_short);
        self
    }

    pub fn compositions(&self) -> u64 {
        self.histogram.iter().sum()
    }

    /// The table row for position `ell`, in the exact engine's layout.
    pub fn stat_row(&self, ell: u32) -> StatRow {
        let ell = (ell as usize).min(self.first_at.len() - 1);
        let n = self.n;
        let all = stats::compositions_count(n);
        StatRow {
            n,
            a: self.histogram.iter().map(|&h| BigInt::from(h)).collect(),
            c: self.c.into(),
            even: (n > 0).then(|| self.even.into()),
            odd: (n > 0).then(|| self.odd.into()),
            total: self.total.into(),
            late: self.late[ell].into(),
            first_at: self.first_at[ell].into(),
            late_exists: self.late_exists[ell].into(),
            avg: (n > 0).then(|| ExactRational::new(self.total.into(), all)),
        }
    }
}

const CHUNK: u64 = 1 << 14;

pub fn aggregate(n: usize, t: Threshold, ell_max: u32) -> Result<OracleReport, Error> {
    aggregate_capped(n, t, ell_max, DEFAULT_CAP)
}

pub fn aggregate_capped(
    n: usize,
    t: Threshold,
    ell_max: u32,
    cap: usize,
) -> Result<OracleReport, Error> {
    check_cap(n, cap)?;
    let total = Compositions::mask_count(n);
    let chunks = total.div_ceil(CHUNK);
    let report = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut part = OracleReport::empty(n, t.k(), ell_max);
            for m in Compositions::range(n, i * CHUNK, (i + 1) * CHUNK) {
                part.record(&m, t);
            }
            part
        })
        .reduce(|| OracleReport::empty(n, t.k(), ell_max), OracleReport::merge);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn th(k: i64) -> Threshold {
        Threshold::new(k).unwrap()
    }

    fn comp(parts: &[usize]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn enumerate_small() {
        let got: HashSet<Vec<usize>> = enumerate(3).unwrap().map(|m| m.parts().to_vec()).collect();
        let want: HashSet<Vec<usize>> =
            [vec![3], vec![1, 2], vec![2, 1], vec![1, 1, 1]].into_iter().collect();
        assert_eq!(got, want);
        let zero: Vec<_> = enumerate(0).unwrap().collect();
        assert_eq!(zero, vec![Composition::new(vec![]).unwrap()]);
        assert_eq!(enumerate(4).unwrap().count(), 8);
    }

    #[test]
    fn enumeration_is_exhaustive_and_distinct() {
        for n in 1..=14 {
            let all: Vec<_> = enumerate(n).unwrap().collect();
            assert_eq!(all.len(), 1 << (n - 1));
            assert!(all.iter().all(|m| m.size() == n && !m.parts().is_empty()));
            let distinct: HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
        }
    }

    #[test]
    fn cut_set_round_trip() {
        for n in 0..=12 {
            for (mask, m) in enumerate(n).unwrap().enumerate() {
                assert_eq!(m.cut_set(), mask as u64);
                assert_eq!(Composition::from_cut_set(n, m.cut_set()), m);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(enumerate(25), Err(Error::OracleCap { n: 25, cap: 24 })));
        assert!(enumerate_capped(25, 30).is_ok());
        assert!(enumerate_capped(65, 100).is_err());
        assert!(aggregate(DEFAULT_CAP + 1, th(3), 0).is_err());
    }

    #[test]
    fn stats_of_single_compositions() {
        assert_eq!(
            big_even_stats(&comp(&[4]), th(2)),
            BigEvenStats { count: 1, first_pos: Some(1) }
        );
        for k in 1..6 {
            assert_eq!(
                big_even_stats(&comp(&[1, 1, 1]), th(k)),
                BigEvenStats { count: 0, first_pos: None }
            );
        }
        assert_eq!(
            big_even_stats(&comp(&[2, 6, 3, 8]), th(5)),
            BigEvenStats { count: 2, first_pos: Some(2) }
        );
        assert!(Composition::new(vec![1, 0]).is_none());
    }

    #[test]
    fn aggregate_examples() {
        let r = aggregate(4, th(2), 1).unwrap();
        assert_eq!(r.histogram, vec![7, 1]);
        assert_eq!((r.c, r.even, r.odd, r.total), (7, 7, 1, 1));
        assert_eq!(r.late[1], 7);
        assert_eq!(r.first_at[0], 1);

        let r = aggregate(10, th(12), 0).unwrap();
        assert_eq!((r.c, r.total), (512, 0));
        assert_eq!(r.compositions(), 512);

        let r = aggregate(0, th(3), 2).unwrap();
        assert_eq!(r.histogram, vec![1]);
        assert_eq!(r.late, vec![1, 0, 0, 0]);
        assert_eq!(r.first_at, vec![0, 0, 0]);
    }

    #[test]
    fn parallel_chunks_agree_with_serial_scan() {
        let t = th(3);
        let n = 17;
        let mut serial = OracleReport::empty(n, t.k(), 2);
        for m in enumerate(n).unwrap() {
            serial.record(&m, t);
        }
        assert_eq!(aggregate(n, t, 2).unwrap(), serial);
    }

    #[test]
    fn raw_telescoping() {
        for k in 1..=5 {
            for n in 0..=14 {
                let r = aggregate(n, th(k), 4).unwrap();
                for ell in 0..=4 {
                    assert_eq!(
                        r.late[ell],
                        r.exactly_allowed[ell] + r.first_at[ell] + r.late[ell + 1],
                        "k={k} n={n} ell={ell}"
                    );
                }
            }
        }
    }
}
