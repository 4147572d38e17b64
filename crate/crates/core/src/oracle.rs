//! Independent check of the cohomology formulas.
//!
//! `G(B)` is realized as an explicit subspace of the skyscraper space
//! `F(B) = ⊕_i (m·K(p'_i) ⊕ m·K(p''_i))`, the image of global sections of the
//! normalization is written down from the standard section basis on each
//! `P¹`, and `rk h(B) = dim(im f + G(B)) - dim G(B)` is obtained by exact
//! elimination. No θ/δ bookkeeping is involved.

use num_rational::Rational64;
use num_traits::One;
use serde::Serialize;

use crate::cohomology::{cohom_dims, normalization_sums, BundleTriple, CohomReport};
use crate::linalg::{stacked_ranks, SparseRow};

/// Which preimage of the node a coordinate of `F(B)` lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `p'_i ∈ E_i`
    Prime = 0,
    /// `p''_i ∈ E_i`
    DoublePrime = 1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSpace {
    rs: usize,
    m: usize,
    pub dim_f: usize,
    pub g_basis: Vec<SparseRow<Rational64>>,
    pub imf_basis: Vec<SparseRow<Rational64>>,
}

impl OracleSpace {
    /// Coordinate of `ε'_{ik}` / `ε''_{ik}` for 1-based `i` and `k`, ordered
    /// lexicographically by `(i, k, side)`.
    pub fn coord(&self, i: usize, k: usize, side: Side) -> usize {
        coord(self.m, i, k, side)
    }

    pub fn rs(&self) -> usize {
        self.rs
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

fn coord(m: usize, i: usize, k: usize, side: Side) -> usize {
    debug_assert!(i >= 1 && k >= 1 && k <= m);
    (((i - 1) * m) + (k - 1)) * 2 + side as usize
}

pub fn build_presentation(triple: &BundleTriple) -> OracleSpace {
    let d = triple.seq().entries();
    let rs = d.len();
    let m = triple.m() as usize;
    let lambda = triple.lambda().value();
    let one = Rational64::one();
    let c = |i, k, side| coord(m, i, k, side);

    let mut g_basis = Vec::with_capacity(m * rs);
    for i in 1..=rs {
        for k in 1..=m {
            let row = if i != rs {
                vec![
                    (c(i, k, Side::Prime), one),
                    (c(i + 1, k, Side::DoublePrime), one),
                ]
            } else if k != 1 {
                vec![
                    (c(rs, k, Side::Prime), one),
                    (c(1, k, Side::DoublePrime), lambda),
                    (c(1, k - 1, Side::DoublePrime), one),
                ]
            } else {
                vec![
                    (c(rs, 1, Side::Prime), one),
                    (c(1, 1, Side::DoublePrime), lambda),
                ]
            };
            g_basis.push(sorted(row));
        }
    }

    let mut imf_basis = Vec::new();
    for (idx, &di) in d.iter().enumerate() {
        let i = idx + 1;
        for k in 1..=m {
            match di {
                x if x > 0 => {
                    imf_basis.push(vec![(c(i, k, Side::Prime), one)]);
                    imf_basis.push(vec![(c(i, k, Side::DoublePrime), one)]);
                }
                0 => imf_basis.push(vec![
                    (c(i, k, Side::Prime), one),
                    (c(i, k, Side::DoublePrime), one),
                ]),
                _ => {}
            }
        }
    }

    OracleSpace {
        rs,
        m,
        dim_f: 2 * m * rs,
        g_basis,
        imf_basis,
    }
}

fn sorted(mut row: SparseRow<Rational64>) -> SparseRow<Rational64> {
    row.sort_by_key(|e| e.0);
    row
}

/// `(dim G(B), dim(im f + G(B)))`
pub fn span_dims(space: &OracleSpace) -> (usize, usize) {
    stacked_ranks(space.dim_f, &space.g_basis, &space.imf_basis)
}

/// Rank of `h(B): H⁰(G̃(B)) → H(B)` by exact elimination.
pub fn rank_of_h(triple: &BundleTriple) -> u64 {
    let (g, total) = span_dims(&build_presentation(triple));
    (total - g) as u64
}

/// Cohomology dimensions read off the long exact sequence with `rk h` from
/// the oracle.
///
/// `theta` and `delta` are recovered from `rk h = m·θ - δ` as
/// `θ = ⌈rk h / m⌉`, `δ = m·θ - rk h`; for `m = 1` this cannot see δ and
/// reports it as 0. They are diagnostics only.
pub fn oracle_dims(triple: &BundleTriple) -> CohomReport {
    dims_from_rank(triple, rank_of_h(triple))
}

/// [`oracle_dims`] for an already computed `rk h`.
pub fn dims_from_rank(triple: &BundleTriple, rank_h: u64) -> CohomReport {
    let rk = rank_h as i64;
    let m = triple.m() as i64;
    let rs = triple.seq().len() as i64;
    let (pos, neg) = normalization_sums(triple.seq());
    let h0 = m * pos - rk;
    let h1 = m * rs - rk + m * neg;
    let theta = (rk + m - 1) / m;
    let delta = m * theta - rk;
    CohomReport {
        theta: theta as u64,
        delta: delta.clamp(0, u8::MAX as i64) as u8,
        h0: h0 as u64,
        h1: h1 as u64,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaCheck {
    pub formula: CohomReport,
    pub oracle: CohomReport,
    pub agree: bool,
}

pub fn verify_formula(triple: &BundleTriple) -> FormulaCheck {
    let formula = cohom_dims(triple);
    let oracle = oracle_dims(triple);
    FormulaCheck {
        agree: formula.h0 == oracle.h0 && formula.h1 == oracle.h1,
        formula,
        oracle,
    }
}
