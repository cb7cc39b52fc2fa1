use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::LatticeError;

/// An integer coordinate vector relative to a lattice basis.
///
/// The ordering is the canonical one used for every returned set of classes:
/// lexicographic on coordinates, larger entries first. Under it `(0,1,0)`
/// precedes `(0,0,1)` and `(1,-1)` precedes `(-1,1)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DivisorClass(Vec<BigInt>);

impl DivisorClass {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![BigInt::zero(); rank])
    }

    /// The `index`-th standard basis vector.
    pub fn basis(rank: usize, index: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[index] = BigInt::from(1);
        v
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the absolute coordinates; 0 for the zero vector.
    pub fn divisibility(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// The class divided by its divisibility.
    pub fn primitive_part(&self) -> Result<DivisorClass, LatticeError> {
        let d = self.divisibility();
        if d.is_zero() {
            return Err(LatticeError::ZeroClass);
        }
        Ok(Self(self.0.iter().map(|c| c / &d).collect()))
    }

    pub fn scaled(&self, k: &BigInt) -> DivisorClass {
        Self(self.0.iter().map(|c| c * k).collect())
    }

    pub(crate) fn check_rank(&self, rank: usize) -> Result<(), LatticeError> {
        if self.0.len() != rank {
            return Err(LatticeError::DimensionMismatch {
                expected: rank,
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

impl From<Vec<i64>> for DivisorClass {
    fn from(v: Vec<i64>) -> Self {
        Self(v.into_iter().map(BigInt::from).collect())
    }
}

impl<const N: usize> From<[i64; N]> for DivisorClass {
    fn from(v: [i64; N]) -> Self {
        Self(v.iter().copied().map(BigInt::from).collect())
    }
}

impl Ord for DivisorClass {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .cmp(&self.0)
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for DivisorClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;

    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        debug_assert_eq!(self.rank(), rhs.rank());
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;

    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        debug_assert_eq!(self.rank(), rhs.rank());
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;

    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|c| -c).collect())
    }
}

/// True when every coordinate is nonnegative.
pub(crate) fn is_nonnegative(v: &[BigInt]) -> bool {
    v.iter().all(|c| !c.is_negative())
}
