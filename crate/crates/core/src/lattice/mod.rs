//! Even integral lattices given by a Gram matrix.
//!
//! All arithmetic is exact: pairings and reductions run on arbitrary
//! precision integers, and the signature is read off a rational congruence
//! diagonalization.

mod class;
pub(crate) mod linalg;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use thiserror::Error;

pub use class::DivisorClass;
pub(crate) use class::is_nonnegative;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("gram matrix is empty")]
    Empty,
    #[error("gram matrix is not square (row {row} has {len} entries, expected {rank})")]
    NotSquare { row: usize, len: usize, rank: usize },
    #[error("gram matrix is not symmetric at ({row},{col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("gram matrix has odd diagonal entry at index {index}; lattice must be even")]
    OddDiagonal { index: usize },
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero class has no primitive part")]
    ZeroClass,
}

/// Inertia `(n_plus, n_minus, n_zero)` of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

impl Signature {
    pub fn rank(&self) -> usize {
        self.plus + self.minus + self.zero
    }

    /// Signature `(1, rank - 1, 0)`.
    pub fn is_hyperbolic(&self) -> bool {
        self.plus == 1 && self.zero == 0
    }

    pub fn is_negative_definite(&self) -> bool {
        self.plus == 0 && self.zero == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.plus, self.minus, self.zero)
    }
}

/// A validated even lattice: symmetric Gram matrix with even diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<BigInt>>,
}

/// Integral basis of `h^perp` with the restricted Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalComplement {
    pub basis: Vec<DivisorClass>,
    pub gram: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn new(gram: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let rank = gram.len();
        if rank == 0 {
            return Err(LatticeError::Empty);
        }
        for (row, r) in gram.iter().enumerate() {
            if r.len() != rank {
                return Err(LatticeError::NotSquare { row, len: r.len(), rank });
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric { row: i, col: j });
                }
            }
            if gram[i][i].is_odd() {
                return Err(LatticeError::OddDiagonal { index: i });
            }
        }
        Ok(Self { gram })
    }

    /// Convenience constructor from small integer rows.
    pub fn from_rows<const N: usize>(rows: [[i64; N]; N]) -> Result<Self, LatticeError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().copied().map(BigInt::from).collect())
                .collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    pub fn pair(&self, v: &DivisorClass, w: &DivisorClass) -> Result<BigInt, LatticeError> {
        v.check_rank(self.rank())?;
        w.check_rank(self.rank())?;
        Ok(self.ip(v, w))
    }

    pub fn norm(&self, v: &DivisorClass) -> Result<BigInt, LatticeError> {
        self.pair(v, v)
    }

    /// Pairing without the dimension check; callers hold classes already
    /// validated against this lattice.
    pub(crate) fn ip(&self, v: &DivisorClass, w: &DivisorClass) -> BigInt {
        debug_assert_eq!(v.rank(), self.rank());
        debug_assert_eq!(w.rank(), self.rank());
        linalg::dot(v.coords(), &self.dual_coords(w))
    }

    pub(crate) fn sq(&self, v: &DivisorClass) -> BigInt {
        self.ip(v, v)
    }

    /// `gram . w`, the linear form `v -> pair(v, w)`.
    pub(crate) fn dual_coords(&self, w: &DivisorClass) -> Vec<BigInt> {
        linalg::mat_vec(&self.gram, w.coords())
    }

    pub fn signature(&self) -> Signature {
        let (plus, minus, zero) = linalg::inertia(&self.gram);
        Signature { plus, minus, zero }
    }

    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&self.gram)
    }

    /// Integral basis of `{w : pair(w, h) = 0}` in Hermite normal form,
    /// together with the induced Gram matrix.
    pub fn orthogonal_complement(&self, h: &DivisorClass) -> Result<OrthogonalComplement, LatticeError> {
        h.check_rank(self.rank())?;
        if h.is_zero() {
            return Err(LatticeError::ZeroClass);
        }
        let kernel = linalg::linear_form_kernel(&self.dual_coords(h));
        let gram = linalg::congruence(&self.gram, &kernel.basis);
        Ok(OrthogonalComplement {
            basis: kernel.basis.into_iter().map(DivisorClass::new).collect(),
            gram,
        })
    }

    /// Checks that `v` has this lattice's rank.
    pub fn check(&self, v: &DivisorClass) -> Result<(), LatticeError> {
        v.check_rank(self.rank())
    }
}

/// Matrix of pairings for a list of classes.
pub(crate) fn gram_of(lat: &Lattice, vs: &[DivisorClass]) -> Vec<Vec<BigInt>> {
    vs.iter()
        .map(|a| vs.iter().map(|b| lat.ip(a, b)).collect())
        .collect()
}
