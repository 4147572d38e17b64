//! Exact sparse Gaussian elimination over the rationals.
//!
//! Rows are eliminated in `Rational64` with checked arithmetic; on overflow the
//! whole computation is redone over `BigRational`.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Zero};

/// A sparse row: `(column, value)` pairs with strictly increasing columns and
/// nonzero values.
pub type SparseRow<T> = Vec<(usize, T)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// Field operations that may fail on overflow.
pub trait ExactField: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    /// `self - f * x`
    fn sub_mul(&self, f: &Self, x: &Self) -> Result<Self, Overflow>;
    fn mul(&self, other: &Self) -> Result<Self, Overflow>;
    fn neg(&self) -> Result<Self, Overflow>;
    fn div(&self, other: &Self) -> Result<Self, Overflow>;
}

impl ExactField for Rational64 {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn sub_mul(&self, f: &Self, x: &Self) -> Result<Self, Overflow> {
        let prod = f.checked_mul(x).ok_or(Overflow)?;
        self.checked_sub(&prod).ok_or(Overflow)
    }

    fn mul(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_mul(other).ok_or(Overflow)
    }

    fn neg(&self) -> Result<Self, Overflow> {
        let numer = self.numer().checked_neg().ok_or(Overflow)?;
        Ok(Rational64::new_raw(numer, *self.denom()))
    }

    fn div(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_div(other).ok_or(Overflow)
    }
}

impl ExactField for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn sub_mul(&self, f: &Self, x: &Self) -> Result<Self, Overflow> {
        Ok(self - f * x)
    }

    fn mul(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self * other)
    }

    fn neg(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }

    fn div(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self / other)
    }
}

/// Row echelon basis with pivots normalized to 1, indexed by pivot column.
#[derive(Debug, Clone)]
pub struct EchelonBasis<T> {
    pivots: Vec<Option<SparseRow<T>>>,
    rank: usize,
}

impl<T: ExactField> EchelonBasis<T> {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            pivots: vec![None; dim],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `row` against the basis; returns `true` if it was independent
    /// and has been added.
    pub fn insert(&mut self, mut row: SparseRow<T>) -> Result<bool, Overflow> {
        row.retain(|(_, v)| !v.is_zero());
        row.sort_by_key(|e| e.0);
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        loop {
            let Some((col, lead)) = row.first().cloned() else {
                return Ok(false);
            };
            match &self.pivots[col] {
                Some(pivot) => row = sub_scaled(&row, &lead, pivot)?,
                None => {
                    if !lead.is_one() {
                        for (_, v) in row.iter_mut() {
                            *v = v.div(&lead)?;
                        }
                    }
                    self.pivots[col] = Some(row);
                    self.rank += 1;
                    return Ok(true);
                }
            }
        }
    }
}

/// `a - f * b` for sorted sparse rows.
fn sub_scaled<T: ExactField>(
    a: &[(usize, T)],
    f: &T,
    b: &[(usize, T)],
) -> Result<SparseRow<T>, Overflow> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, b[j].1.mul(f)?.neg()?));
            j += 1;
        } else {
            let v = a[i].1.sub_mul(f, &b[j].1)?;
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

fn to_big(row: &[(usize, Rational64)]) -> SparseRow<BigRational> {
    row.iter()
        .map(|(c, v)| {
            (
                *c,
                BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom())),
            )
        })
        .collect()
}

fn stacked_in<T: ExactField>(
    dim: usize,
    base: impl IntoIterator<Item = SparseRow<T>>,
    extra: impl IntoIterator<Item = SparseRow<T>>,
) -> Result<(usize, usize), Overflow> {
    let mut ech = EchelonBasis::new(dim);
    for row in base {
        ech.insert(row)?;
    }
    let base_rank = ech.rank();
    for row in extra {
        ech.insert(row)?;
    }
    Ok((base_rank, ech.rank()))
}

/// Returns `(rank(base), rank(base ∪ extra))` computed exactly.
pub fn stacked_ranks(
    dim: usize,
    base: &[SparseRow<Rational64>],
    extra: &[SparseRow<Rational64>],
) -> (usize, usize) {
    let fast = stacked_in(dim, base.iter().cloned(), extra.iter().cloned());
    match fast {
        Ok(r) => r,
        Err(Overflow) => stacked_in(
            dim,
            base.iter().map(|r| to_big(r)),
            extra.iter().map(|r| to_big(r)),
        )
        .expect("big rationals do not overflow"),
    }
}

/// Exact rank of a set of rows in a space of dimension `dim`.
pub fn rank(dim: usize, rows: &[SparseRow<Rational64>]) -> usize {
    stacked_ranks(dim, rows, &[]).0
}
