//! `T_pq` curve singularities via the surface `T_{pq2}`: resolution geometry,
//! the involution σ on sequences and modules, and descent of cusp labels to
//! curve labels through Knörrer's correspondence.

use std::fmt;

use serde::Serialize;

use crate::cohomology::{kahn_condition, BundleTriple, CuspGeometry};
use crate::cusp::{CmKind, CmModuleLabel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequences::SSeq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TpqCase {
    P3,
    P4,
    P5Plus,
}

/// Exceptional cycle of the minimal resolution of `T_{pq2}` and its σ-action.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TpqGeometry {
    pub p: u32,
    pub q: u32,
    pub case: TpqCase,
    /// `t = p - 3`, only for `p ≥ 5`
    pub t: Option<usize>,
    pub cusp: CuspGeometry,
}

pub fn geometry_of(p: u32, q: u32) -> Result<TpqGeometry> {
    // 1/p + 1/q < 1/2  <=>  2(p + q) < pq
    if p < 3 || q < p || 2 * (p as u64 + q as u64) >= p as u64 * q as u64 {
        return Err(Error::InvalidTpq { p, q });
    }
    let (case, t, s, b) = match p {
        3 => {
            let s = (q - 6) as usize;
            let mut b = vec![0; s];
            b[0] = 1;
            (TpqCase::P3, None, s, b)
        }
        4 => {
            let s = (q - 4) as usize;
            let mut b = vec![0; s];
            b[0] = 2;
            (TpqCase::P4, None, s, b)
        }
        _ => {
            let s = (p + q - 8) as usize;
            let t = (p - 3) as usize;
            let mut b = vec![0; s];
            b[0] = 1;
            b[t - 1] = 1;
            (TpqCase::P5Plus, Some(t), s, b)
        }
    };
    Ok(TpqGeometry {
        p,
        q,
        case,
        t,
        cusp: CuspGeometry::new(s, b)?,
    })
}

impl TpqGeometry {
    fn check(&self, seq: &SSeq) -> Result<()> {
        if seq.s() != self.cusp.s() {
            return Err(Error::ComponentMismatch {
                expected: self.cusp.s(),
                found: seq.s(),
            });
        }
        Ok(())
    }

    /// 0-based source index of `d'_{j+1}` in a sequence of length `n`.
    fn sigma_source(&self, j: usize, n: usize) -> usize {
        match self.t {
            // d'_1 = d_1, d'_i = d_{rs+2-i}
            None => (n - j) % n,
            // d'_i = d_{t+1-i} (cyclically)
            Some(t) => (t as i64 - 1 - j as i64).rem_euclid(n as i64) as usize,
        }
    }
}

pub fn apply_sigma(geom: &TpqGeometry, seq: &SSeq) -> Result<SSeq> {
    geom.check(seq)?;
    let d = seq.entries();
    let n = d.len();
    let entries = (0..n).map(|j| d[geom.sigma_source(j, n)]).collect();
    SSeq::new(seq.s(), entries)
}

/// `d^σ` equals some s-shift of `d`.
pub fn is_sigma_symmetric(geom: &TpqGeometry, seq: &SSeq) -> Result<bool> {
    Ok(apply_sigma(geom, seq)?.is_shift_of(seq))
}

/// `M(d, m, λ)^σ ≅ M(d^σ, m, 1/λ)`.
pub fn sigma_of_module(geom: &TpqGeometry, triple: &BundleTriple) -> Result<BundleTriple> {
    if !kahn_condition(triple) {
        return Err(Error::KahnViolation(triple.to_string()));
    }
    let image = apply_sigma(geom, triple.seq())?;
    BundleTriple::any_sequence(image.canonical_form(), triple.m(), triple.lambda().inv())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(lambda: Scalar) -> Option<Sign> {
        if lambda.is_one() {
            Some(Sign::Plus)
        } else if lambda.is_minus_one() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn scalar(&self) -> Scalar {
        match self {
            Sign::Plus => Scalar::one(),
            Sign::Minus => Scalar::minus_one(),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    One,
    Two,
}

impl Branch {
    pub fn index(&self) -> u8 {
        match self {
            Branch::One => 1,
            Branch::Two => 2,
        }
    }

    pub fn other(&self) -> Branch {
        match self {
            Branch::One => Branch::Two,
            Branch::Two => Branch::One,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TpqKind {
    /// The regular module `A'`.
    FreeCurve,
    /// `N(d, m, λ)`
    Single { seq: SSeq, m: u32, lambda: Scalar },
    /// `N_i(d, m, ±1)` for σ-symmetric `d`.
    Split {
        seq: SSeq,
        m: u32,
        sign: Sign,
        branch: Branch,
    },
}

/// An indecomposable CM module over the `T_pq` curve singularity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TpqModuleLabel {
    pub p: u32,
    pub q: u32,
    pub kind: TpqKind,
}

impl TpqModuleLabel {
    pub fn free(geom: &TpqGeometry) -> Self {
        TpqModuleLabel {
            p: geom.p,
            q: geom.q,
            kind: TpqKind::FreeCurve,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, TpqKind::FreeCurve)
    }

    /// Invariant check for labels built by hand.
    pub fn is_well_formed(&self, geom: &TpqGeometry) -> Result<bool> {
        Ok(match &self.kind {
            TpqKind::FreeCurve => true,
            TpqKind::Single { seq, lambda, .. } => {
                !(is_sigma_symmetric(geom, seq)? && lambda.is_sign())
            }
            TpqKind::Split { seq, sign, .. } => {
                is_sigma_symmetric(geom, seq)? && (!seq.is_zero() || *sign == Sign::Minus)
            }
        })
    }
}

impl fmt::Display for TpqModuleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TpqKind::FreeCurve => f.write_str("A'"),
            TpqKind::Single { seq, m, lambda } => write!(f, "N({seq},{m},{lambda})"),
            TpqKind::Split {
                seq,
                m,
                sign,
                branch,
            } => write!(f, "N{}({seq},{m},{sign})", branch.index()),
        }
    }
}

fn check_label_geometry(geom: &TpqGeometry, label: &TpqModuleLabel) -> Result<()> {
    if label.p != geom.p || label.q != geom.q {
        return Err(Error::GeometryMismatch);
    }
    Ok(())
}

/// Images of a cusp label under `M ↦ M/zM`, split into indecomposables.
pub fn descend(geom: &TpqGeometry, label: &CmModuleLabel) -> Result<Vec<TpqModuleLabel>> {
    if *label.geometry() != geom.cusp {
        return Err(Error::GeometryMismatch);
    }
    let wrap = |kind| TpqModuleLabel {
        p: geom.p,
        q: geom.q,
        kind,
    };
    let triple = match label.kind() {
        CmKind::Free => return Ok(vec![wrap(TpqKind::FreeCurve)]),
        CmKind::Param(t) => t,
    };
    let seq = triple.seq().clone();
    let m = triple.m();
    let lambda = triple.lambda();
    let split = match Sign::of(lambda) {
        Some(sign) if is_sigma_symmetric(geom, &seq)? && !(seq.is_zero() && lambda.is_one()) => {
            Some(sign)
        }
        _ => None,
    };
    Ok(match split {
        Some(sign) => [Branch::One, Branch::Two]
            .into_iter()
            .map(|branch| {
                wrap(TpqKind::Split {
                    seq: seq.clone(),
                    m,
                    sign,
                    branch,
                })
            })
            .collect(),
        None => vec![wrap(TpqKind::Single { seq, m, lambda })],
    })
}

/// Representative of the isomorphism class: `N(d, m, λ) ≅ N(d^σ, m, 1/λ)` are
/// the only identifications.
pub fn iso_class(geom: &TpqGeometry, label: &TpqModuleLabel) -> Result<TpqModuleLabel> {
    check_label_geometry(geom, label)?;
    let TpqKind::Single { seq, m, lambda } = &label.kind else {
        return Ok(label.clone());
    };
    let own = (seq.canonical_form(), *lambda);
    let mirrored = (apply_sigma(geom, seq)?.canonical_form(), lambda.inv());
    let (seq, lambda) = own.min(mirrored);
    Ok(TpqModuleLabel {
        p: label.p,
        q: label.q,
        kind: TpqKind::Single { seq, m: *m, lambda },
    })
}

pub fn tpq_iso(geom: &TpqGeometry, a: &TpqModuleLabel, b: &TpqModuleLabel) -> Result<bool> {
    Ok(iso_class(geom, a)? == iso_class(geom, b)?)
}
