//! Indecomposable Cohen–Macaulay modules over a cusp singularity: labels,
//! rank-indexed enumeration of one-parameter families, family counts.
//!
//! Every indecomposable is either the free module `A` or `M(d, m, λ)` with
//! `d > 0`, or `d = 0` and `λ ≠ 1`. For a fixed `(d, m)` the modules form a
//! family over `K*`, or over `K* \ {1}` when `d = 0` or `d = B`; for `d = B`
//! the missing point `λ = 1` is an isolated module `M(B, m, 1)` of rank `m + 1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cohomology::{
    generic_module_rank, kahn_condition, module_rank, BundleTriple, CuspGeometry,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequences::SSeq;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CmKind {
    Free,
    Param(BundleTriple),
}

/// An indecomposable CM module over the cusp with geometry `geometry`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CmModuleLabel {
    geometry: CuspGeometry,
    kind: CmKind,
    rank: u64,
}

impl CmModuleLabel {
    pub fn free(geom: &CuspGeometry) -> Self {
        CmModuleLabel {
            geometry: geom.clone(),
            kind: CmKind::Free,
            rank: 1,
        }
    }

    pub fn geometry(&self) -> &CuspGeometry {
        &self.geometry
    }

    pub fn kind(&self) -> &CmKind {
        &self.kind
    }

    pub fn rank(&self) -> u64 {
        self.rank
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, CmKind::Free)
    }

    pub fn triple(&self) -> Option<&BundleTriple> {
        match &self.kind {
            CmKind::Free => None,
            CmKind::Param(t) => Some(t),
        }
    }
}

impl fmt::Display for CmModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CmKind::Free => f.write_str("A"),
            CmKind::Param(t) => write!(f, "M{t}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaBase {
    /// `K*`
    AllNonzero,
    /// `K* \ {1}`
    NonzeroExceptOne,
}

impl LambdaBase {
    pub fn contains(&self, lambda: Scalar) -> bool {
        match self {
            LambdaBase::AllNonzero => true,
            LambdaBase::NonzeroExceptOne => !lambda.is_one(),
        }
    }
}

/// The one-parameter family `λ ↦ M(seq, m, λ)`, `λ` ranging over `base`, all of
/// rank `rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FamilyDescriptor {
    pub seq: SSeq,
    pub m: u32,
    pub base: LambdaBase,
    pub rank: u64,
}

impl FamilyDescriptor {
    pub fn member(&self, geom: &CuspGeometry, lambda: Scalar) -> Result<CmModuleLabel> {
        if !self.base.contains(lambda) {
            return Err(Error::KahnViolation(format!(
                "({},{},{lambda})",
                self.seq, self.m
            )));
        }
        classify_label(&BundleTriple::new(self.seq.clone(), self.m, lambda)?, geom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankEnumeration {
    pub rank: u64,
    pub free: bool,
    pub families: Vec<FamilyDescriptor>,
    pub exceptional: Vec<CmModuleLabel>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GrowthTable {
    pub counts: BTreeMap<u64, usize>,
    pub exceptional: BTreeMap<u64, Vec<CmModuleLabel>>,
}

pub fn validate_cusp(s: i64, b: Vec<i64>) -> Result<CuspGeometry> {
    if s < 1 {
        return Err(Error::ZeroComponents);
    }
    CuspGeometry::new(s as usize, b)
}

pub fn classify_label(triple: &BundleTriple, geom: &CuspGeometry) -> Result<CmModuleLabel> {
    let seq = triple.seq();
    if seq.s() != geom.s() {
        return Err(Error::ComponentMismatch {
            expected: geom.s(),
            found: seq.s(),
        });
    }
    if !seq.is_aperiodic() {
        return Err(Error::Periodic(seq.to_string()));
    }
    if !kahn_condition(triple) {
        return Err(Error::KahnViolation(triple.to_string()));
    }
    let triple = BundleTriple::new(seq.clone(), triple.m(), triple.lambda())?;
    let rank = module_rank(&triple, geom)?;
    Ok(CmModuleLabel {
        geometry: geom.clone(),
        kind: CmKind::Param(triple),
        rank,
    })
}

fn family_base(seq: &SSeq, geom: &CuspGeometry) -> LambdaBase {
    if seq.is_zero() || *seq == geom.b_sequence() {
        LambdaBase::NonzeroExceptOne
    } else {
        LambdaBase::AllNonzero
    }
}

/// Largest admissible `Σ d_i` for `(r blocks, m)` at the given rank.
///
/// `n(G) = rank - m·r` and `n(G) ≥ χ(G(E)) = m·Σ(d_i - b_i)`.
pub(crate) fn euler_sum_bound(geom: &CuspGeometry, rank: u64, blocks: usize, m: u32) -> i64 {
    let n = rank as i64 - m as i64 * blocks as i64;
    let b_total: i64 = geom.b().iter().sum();
    n.div_euclid(m as i64) + blocks as i64 * b_total
}

/// Non-negative canonical aperiodic sequences with `blocks` blocks whose
/// twist `e = d - B^r` has `Σ_parts (sum(p) - [p ≠ 0]) = target`, i.e.
/// `n(G) = m·target` at generic `λ`.
///
/// Each maximal run of `e ≥ 0` contributes `max(sum - 1, 0)` to that total, so
/// the running total over a prefix is a lower bound and prunes the search.
fn search_twisted(geom: &CuspGeometry, blocks: usize, target: i64, sum_bound: i64) -> Vec<SSeq> {
    struct Walk<'a> {
        b: &'a [i64],
        n: usize,
        target: i64,
        cur: Vec<i64>,
        out: Vec<SSeq>,
    }

    impl Walk<'_> {
        fn go(&mut self, budget: i64, closed: i64, open: Option<i64>) {
            let i = self.cur.len();
            if i == self.n {
                let seq =
                    SSeq::new(self.b.len(), self.cur.clone()).expect("length is a multiple of s");
                if seq.is_canonical() && seq.is_aperiodic() {
                    self.out.push(seq);
                }
                return;
            }
            let bi = self.b[i % self.b.len()];
            for d in 0..=budget {
                let e = d - bi;
                let (closed, open) = if e < 0 {
                    (closed + open.map_or(0, |s| (s - 1).max(0)), None)
                } else {
                    (closed, Some(open.unwrap_or(0) + e))
                };
                if closed + open.map_or(0, |s| (s - 1).max(0)) > self.target {
                    // larger d only grows the open run
                    break;
                }
                self.cur.push(d);
                self.go(budget - d, closed, open);
                self.cur.pop();
            }
        }
    }

    let mut walk = Walk {
        b: geom.b(),
        n: blocks * geom.s(),
        target,
        cur: Vec::with_capacity(blocks * geom.s()),
        out: Vec::new(),
    };
    if sum_bound >= 0 {
        walk.go(sum_bound, 0, None);
    }
    walk.out
}

pub fn enumerate_rank(geom: &CuspGeometry, rank: u64) -> Result<RankEnumeration> {
    if rank == 0 {
        return Err(Error::NonPositive { what: "rank" });
    }
    let mut families = Vec::new();
    for blocks in 1..=rank as usize {
        for m in 1..=(rank / blocks as u64) as u32 {
            let n = rank - m as u64 * blocks as u64;
            if !n.is_multiple_of(m as u64) {
                continue;
            }
            let bound = euler_sum_bound(geom, rank, blocks, m);
            for seq in search_twisted(geom, blocks, (n / m as u64) as i64, bound) {
                if generic_module_rank(&seq, m, geom)? == rank {
                    families.push(FamilyDescriptor {
                        base: family_base(&seq, geom),
                        seq,
                        m,
                        rank,
                    });
                }
            }
        }
    }
    families.sort_by(|a, b| a.seq.cmp(&b.seq).then(a.m.cmp(&b.m)));

    let b_seq = geom.b_sequence();
    let mut exceptional = Vec::new();
    for m in 1..=rank as u32 {
        let label = classify_label(&BundleTriple::new(b_seq.clone(), m, Scalar::one())?, geom)?;
        if label.rank == rank {
            exceptional.push(label);
        }
    }

    Ok(RankEnumeration {
        rank,
        free: rank == 1,
        families,
        exceptional,
    })
}

pub fn family_counts(geom: &CuspGeometry, r_max: u64) -> Result<GrowthTable> {
    if r_max == 0 {
        return Err(Error::NonPositive { what: "r_max" });
    }
    let mut table = GrowthTable::default();
    for r in 1..=r_max {
        let e = enumerate_rank(geom, r)?;
        table.counts.insert(r, e.families.len());
        table.exceptional.insert(r, e.exceptional);
    }
    Ok(table)
}

/// All labels of rank at most `max_rank` with `λ` restricted to `lambdas`,
/// including the free module, in (rank, label) order.
pub fn labels_up_to_rank(
    geom: &CuspGeometry,
    max_rank: u64,
    lambdas: &[Scalar],
) -> Result<Vec<CmModuleLabel>> {
    let mut out = vec![CmModuleLabel::free(geom)];
    for r in 1..=max_rank {
        let e = enumerate_rank(geom, r)?;
        for fam in &e.families {
            for &l in lambdas.iter().filter(|&&l| fam.base.contains(l)) {
                out.push(fam.member(geom, l)?);
            }
        }
        if lambdas.iter().any(|l| l.is_one()) {
            out.extend(e.exceptional);
        }
    }
    out.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| a.cmp(b)));
    out.dedup();
    Ok(out)
}
