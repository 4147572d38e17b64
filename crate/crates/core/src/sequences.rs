//! s-sequences: integer labelings of a cycle of `s` projective lines traversed
//! `r` times, together with shift arithmetic, aperiodicity and canonical
//! representatives of shift orbits.
//!
//! Shifts always move by whole blocks of `s` entries. Shifting by a single
//! entry is not an admissible symmetry unless `s = 1`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// An integer sequence whose length is a positive multiple of `s`.
///
/// Indices are cyclic: `d_{i + rs} = d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SSeq {
    s: usize,
    entries: Vec<i64>,
}

impl SSeq {
    pub fn new(s: usize, entries: Vec<i64>) -> Result<Self> {
        if s == 0 {
            return Err(Error::ZeroComponents);
        }
        if entries.is_empty() || !entries.len().is_multiple_of(s) {
            return Err(Error::BadLength {
                s,
                len: entries.len(),
            });
        }
        Ok(SSeq { s, entries })
    }

    /// The zero sequence of length `s` (the unique aperiodic zero s-sequence).
    pub fn zero(s: usize) -> Result<Self> {
        SSeq::new(s, vec![0; s])
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Total length `rs`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of blocks `r`.
    pub fn blocks(&self) -> usize {
        self.entries.len() / self.s
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.entries
    }

    /// Cyclic 1-based access, `at(0) == at(rs)`.
    pub fn at(&self, i: i64) -> i64 {
        let n = self.len() as i64;
        self.entries[(i - 1).rem_euclid(n) as usize]
    }

    pub fn sum(&self) -> i64 {
        self.entries.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// `d > 0`: every entry non-negative and at least one strictly positive.
    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|&x| x >= 0) && self.entries.iter().any(|&x| x > 0)
    }

    /// The s-shift `d^k = (d_{ks+1}, ..., d_{rs}, d_1, ..., d_{ks})`, `k` taken mod `r`.
    pub fn shift_by(&self, k: i64) -> SSeq {
        let r = self.blocks() as i64;
        let offset = k.rem_euclid(r) as usize * self.s;
        let mut entries = Vec::with_capacity(self.len());
        entries.extend_from_slice(&self.entries[offset..]);
        entries.extend_from_slice(&self.entries[..offset]);
        SSeq { s: self.s, entries }
    }

    /// True iff the sequence is not a repetition of a shorter s-sequence.
    pub fn is_aperiodic(&self) -> bool {
        let r = self.blocks();
        (1..r)
            .filter(|p| r.is_multiple_of(*p))
            .all(|p| !has_period(&self.entries, p * self.s))
    }

    /// Lexicographically least element of the shift orbit.
    pub fn canonical_form(&self) -> SSeq {
        let r = self.blocks();
        let n = self.len();
        let mut best = 0;
        for k in 1..r {
            if rotation_cmp(&self.entries, k * self.s, best * self.s, n) == Ordering::Less {
                best = k;
            }
        }
        self.shift_by(best as i64)
    }

    pub fn is_canonical(&self) -> bool {
        let n = self.len();
        (1..self.blocks()).all(|k| rotation_cmp(&self.entries, k * self.s, 0, n) != Ordering::Less)
    }

    /// True iff `other` is some s-shift of `self`.
    pub fn is_shift_of(&self, other: &SSeq) -> bool {
        self.s == other.s
            && self.len() == other.len()
            && (0..self.blocks() as i64).any(|k| self.shift_by(k) == *other)
    }
}

fn has_period(entries: &[i64], p: usize) -> bool {
    (p..entries.len()).all(|i| entries[i] == entries[i - p])
}

/// Compares the rotations of `v` starting at `a` and at `b`.
fn rotation_cmp(v: &[i64], a: usize, b: usize, n: usize) -> Ordering {
    for i in 0..n {
        match v[(a + i) % n].cmp(&v[(b + i) % n]) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Ordered by `s`, then length, then entries.
impl Ord for SSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.s
            .cmp(&other.s)
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for SSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

/// One canonical representative of every aperiodic shift orbit of length at
/// most `max_r * s` with entries in `[lo, hi]`, ordered by (length, entries).
pub fn enumerate_canonical(s: usize, max_r: usize, lo: i64, hi: i64) -> Result<Vec<SSeq>> {
    if s == 0 {
        return Err(Error::ZeroComponents);
    }
    if lo > hi {
        return Err(Error::EmptyRange { lo, hi });
    }
    let mut out = Vec::new();
    for r in 1..=max_r {
        let n = r * s;
        let mut cur = vec![lo; n];
        loop {
            let seq = SSeq {
                s,
                entries: cur.clone(),
            };
            if seq.is_canonical() && seq.is_aperiodic() {
                out.push(seq);
            }
            // odometer, rightmost digit fastest: yields lexicographic order
            let mut pos = n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                if cur[pos] < hi {
                    cur[pos] += 1;
                    break;
                }
                cur[pos] = lo;
            }
            if pos == 0 && cur.iter().all(|&x| x == lo) {
                break;
            }
        }
    }
    Ok(out)
}

/// Canonical aperiodic s-sequences with `r` blocks, non-negative entries and
/// entry sum at most `max_sum`, in lexicographic order.
pub fn enumerate_nonneg_bounded(s: usize, r: usize, max_sum: i64) -> Result<Vec<SSeq>> {
    if s == 0 {
        return Err(Error::ZeroComponents);
    }
    if r == 0 {
        return Err(Error::NonPositive {
            what: "block count",
        });
    }
    let mut out = Vec::new();
    if max_sum < 0 {
        return Ok(out);
    }
    let mut cur = Vec::with_capacity(r * s);
    fill_bounded(s, r * s, max_sum, &mut cur, &mut out);
    Ok(out)
}

fn fill_bounded(s: usize, n: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<SSeq>) {
    if cur.len() == n {
        let seq = SSeq {
            s,
            entries: cur.clone(),
        };
        if seq.is_canonical() && seq.is_aperiodic() {
            out.push(seq);
        }
        return;
    }
    for x in 0..=budget {
        cur.push(x);
        fill_bounded(s, n, budget - x, cur, out);
        cur.pop();
    }
}
