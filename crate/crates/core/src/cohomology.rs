//! Closed-form invariants of the indecomposable bundles `G(d, m, λ)` on a
//! cyclic configuration: positive parts, θ, δ, `h⁰`/`h¹`, the Kahn
//! admissibility predicate and the rank of the associated Cohen–Macaulay
//! module over a cusp.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequences::SSeq;

/// The parameter `(d, m, λ)` of an indecomposable vector bundle.
///
/// Triples built with [`BundleTriple::new`] hold an aperiodic sequence in
/// canonical form. [`BundleTriple::any_sequence`] skips that check; the
/// bundle construction and its cohomology make sense for every s-sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BundleTriple {
    seq: SSeq,
    m: u32,
    lambda: Scalar,
}

impl BundleTriple {
    pub fn new(seq: SSeq, m: u32, lambda: Scalar) -> Result<Self> {
        if !seq.is_aperiodic() {
            return Err(Error::Periodic(seq.to_string()));
        }
        Self::any_sequence(seq.canonical_form(), m, lambda)
    }

    pub fn any_sequence(seq: SSeq, m: u32, lambda: Scalar) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroMultiplicity);
        }
        Ok(BundleTriple { seq, m, lambda })
    }

    pub fn seq(&self) -> &SSeq {
        &self.seq
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn lambda(&self) -> Scalar {
        self.lambda
    }

    /// Rank of `G(d, m, λ)`, equal to `m·r`.
    pub fn bundle_rank(&self) -> u64 {
        self.m as u64 * self.seq.blocks() as u64
    }

    pub fn with_m(&self, m: u32) -> Result<Self> {
        Self::any_sequence(self.seq.clone(), m, self.lambda)
    }
}

impl fmt::Display for BundleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.seq, self.m, self.lambda)
    }
}

/// Component count and `b_i = -E·E_i` of the exceptional cycle of a cusp.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CuspGeometry {
    s: usize,
    b: Vec<i64>,
}

impl CuspGeometry {
    pub fn new(s: usize, b: Vec<i64>) -> Result<Self> {
        if s == 0 {
            return Err(Error::ZeroComponents);
        }
        if b.len() != s {
            return Err(Error::InvalidGeometry(format!(
                "b has {} entries, expected s={s}",
                b.len()
            )));
        }
        if s == 1 && b[0] < 1 {
            return Err(Error::InvalidGeometry(
                "s=1 requires b_1 = -E.E >= 1".into(),
            ));
        }
        if let Some(neg) = b.iter().find(|&&x| x < 0) {
            return Err(Error::InvalidGeometry(format!("negative entry {neg} in b")));
        }
        if b.iter().all(|&x| x == 0) {
            return Err(Error::InvalidGeometry(
                "some component must have self-intersection below -2".into(),
            ));
        }
        Ok(CuspGeometry { s, b })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn b(&self) -> &[i64] {
        &self.b
    }

    /// The sequence `B = (b_1, ..., b_s)`.
    pub fn b_sequence(&self) -> SSeq {
        SSeq::new(self.s, self.b.clone()).expect("geometry invariants")
    }

    /// `B^r`: `B` repeated `r` times.
    pub fn b_power(&self, r: usize) -> SSeq {
        let entries = self.b.iter().copied().cycle().take(r * self.s).collect();
        SSeq::new(self.s, entries).expect("geometry invariants")
    }

    fn check(&self, seq: &SSeq) -> Result<()> {
        if seq.s() != self.s {
            return Err(Error::ComponentMismatch {
                expected: self.s,
                found: seq.s(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for CuspGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        write!(f, "s={} b=[{}]", self.s, b.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CohomReport {
    pub theta: u64,
    pub delta: u8,
    pub h0: u64,
    pub h1: u64,
}

/// A maximal cyclic run of non-negative entries, `d_{start+1} .. d_{start+len}`
/// in 1-based indexing (so `start` is the 0-based index of its first entry).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PositivePart {
    pub start: usize,
    pub len: usize,
}

pub fn positive_parts(seq: &SSeq) -> Vec<PositivePart> {
    let d = seq.entries();
    let n = d.len();
    let Some(first_neg) = d.iter().position(|&x| x < 0) else {
        return vec![PositivePart { start: 0, len: n }];
    };
    let mut parts = Vec::new();
    let mut run_start = None;
    // walk one full turn starting right after a negative entry
    for step in 1..=n {
        let i = (first_neg + step) % n;
        if d[i] >= 0 {
            run_start.get_or_insert((i, 0)).1 += 1;
        } else if let Some((start, len)) = run_start.take() {
            parts.push(PositivePart { start, len });
        }
    }
    parts.sort_by_key(|p| p.start);
    parts
}

fn part_theta(d: &[i64], part: PositivePart) -> u64 {
    let n = d.len();
    let all_zero = (0..part.len).all(|j| d[(part.start + j) % n] == 0);
    if part.len == n || all_zero {
        part.len as u64
    } else {
        part.len as u64 + 1
    }
}

/// θ(d): sum over positive parts of `l` (full-length or all-zero part) or `l + 1`.
pub fn theta(seq: &SSeq) -> u64 {
    positive_parts(seq)
        .into_iter()
        .map(|p| part_theta(seq.entries(), p))
        .sum()
}

fn delta_flag(seq: &SSeq, lambda_is_one: bool) -> u8 {
    u8::from(seq.is_zero() && lambda_is_one)
}

/// δ(d, λ) = 1 iff `d = 0` and `λ = 1`.
pub fn delta(seq: &SSeq, lambda: Scalar) -> u8 {
    delta_flag(seq, lambda.is_one())
}

/// `Σ (d_i + 1)⁺` and `Σ (d_i + 1)⁻`.
pub(crate) fn normalization_sums(seq: &SSeq) -> (i64, i64) {
    seq.entries().iter().fold((0, 0), |(pos, neg), &x| {
        let k = x + 1;
        (pos + k.max(0), neg + (-k).max(0))
    })
}

fn dims(seq: &SSeq, m: u32, lambda_is_one: bool) -> CohomReport {
    let th = theta(seq);
    let de = delta_flag(seq, lambda_is_one);
    let (pos, neg) = normalization_sums(seq);
    let m = m as i64;
    let rs = seq.len() as i64;
    let h0 = m * (pos - th as i64) + de as i64;
    let h1 = m * (neg + rs - th as i64) + de as i64;
    debug_assert!(h0 >= 0 && h1 >= 0);
    CohomReport {
        theta: th,
        delta: de,
        h0: h0 as u64,
        h1: h1 as u64,
    }
}

/// `dim H⁰(E, G)` and `dim H¹(E, G)` for `G = G(d, m, λ)` from the closed form.
pub fn cohom_dims(triple: &BundleTriple) -> CohomReport {
    dims(triple.seq(), triple.m(), triple.lambda().is_one())
}

/// Kahn's conditions for `G(d, m, λ)`: `d > 0`, or `d = 0` and `λ ≠ 1`.
pub fn kahn_condition(triple: &BundleTriple) -> bool {
    let d = triple.seq();
    d.is_positive() || (d.is_zero() && !triple.lambda().is_one())
}

/// `d - B^r`, componentwise.
pub fn twist_by_cycle(seq: &SSeq, geom: &CuspGeometry) -> Result<SSeq> {
    geom.check(seq)?;
    let b = geom.b_power(seq.blocks());
    let entries = seq
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(d, b)| d - b)
        .collect();
    SSeq::new(seq.s(), entries)
}

fn twisted_h0(seq: &SSeq, m: u32, lambda_is_one: bool, geom: &CuspGeometry) -> Result<u64> {
    let twisted = twist_by_cycle(seq, geom)?;
    Ok(dims(&twisted, m, lambda_is_one).h0)
}

fn require_kahn(triple: &BundleTriple) -> Result<()> {
    if kahn_condition(triple) {
        Ok(())
    } else {
        Err(Error::KahnViolation(triple.to_string()))
    }
}

/// `n(G) = dim H⁰(E, G(E))`, the number of free summands split off by the
/// reduction functor.
pub fn n_global(triple: &BundleTriple, geom: &CuspGeometry) -> Result<u64> {
    geom.check(triple.seq())?;
    require_kahn(triple)?;
    twisted_h0(triple.seq(), triple.m(), triple.lambda().is_one(), geom)
}

/// Rank of `M(d, m, λ)`: `m·r + n(G)`.
///
/// The printed statement of the classification gives `rs + n(G)`; the
/// bundle `G(d, m, λ)` has rank `m·r`, which is what is used here.
pub fn module_rank(triple: &BundleTriple, geom: &CuspGeometry) -> Result<u64> {
    Ok(triple.bundle_rank() + n_global(triple, geom)?)
}

/// Module rank at a generic `λ ∉ {1}`; `seq` must be non-negative.
pub(crate) fn generic_module_rank(seq: &SSeq, m: u32, geom: &CuspGeometry) -> Result<u64> {
    let n = twisted_h0(seq, m, false, geom)?;
    Ok(m as u64 * seq.blocks() as u64 + n)
}
