//! Enumeration of (-2)-vectors.
//!
//! In a hyperbolic lattice the set of roots is infinite, but the slice of
//! roots with fixed degree `d = pair(root, H)` against a class `H` of
//! positive square is a coset of the negative definite lattice `H^perp`,
//! hence finite. Each slice is enumerated exactly by branch-and-bound.

mod ellipsoid;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::linalg::{self, to_rational};
use crate::lattice::{DivisorClass, Lattice, LatticeError, Signature};
pub(crate) use ellipsoid::Ellipsoid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("form is not negative definite (signature {0})")]
    NotNegativeDefinite(Signature),
    #[error("target norm {0} must be negative")]
    NonNegativeNorm(BigInt),
    #[error("lattice is not hyperbolic (signature {0})")]
    NotHyperbolic(Signature),
    #[error("grading class {0} does not have positive square")]
    NonPositiveGrading(DivisorClass),
    #[error("degree must be positive, got {0}")]
    NonPositiveDegree(BigInt),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// All integer vectors `v` with `v^T gram v = m` for a negative definite
/// `gram` and negative `m`, sorted canonically. The result is closed under
/// negation.
pub fn enum_fixed_norm_negdef(gram: &[Vec<BigInt>], m: &BigInt) -> Result<Vec<DivisorClass>, RootError> {
    if !m.is_negative() {
        return Err(RootError::NonNegativeNorm(m.clone()));
    }
    // the rank-0 form only has the zero vector
    if gram.is_empty() {
        return Ok(Vec::new());
    }
    let lat = Lattice::new(gram.to_vec())?;
    let sig = lat.signature();
    if !sig.is_negative_definite() {
        return Err(RootError::NotNegativeDefinite(sig));
    }
    if m.is_odd() {
        return Ok(Vec::new());
    }
    let ellipsoid = Ellipsoid::new(&negated(gram)).expect("negative definite form");
    let centre = vec![BigRational::zero(); gram.len()];
    let radius = BigRational::from_integer(-m);
    let mut out: Vec<DivisorClass> = ellipsoid
        .points_within(&centre, &radius)
        .into_iter()
        .map(DivisorClass::new)
        .filter(|v| &lat.sq(v) == m)
        .collect();
    out.sort();
    Ok(out)
}

fn negated(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    m.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

/// Roots graded by degree against a fixed class `H` of positive square in a
/// hyperbolic lattice.
///
/// Precomputes a particular solution of `pair(x, H) = g` (with `g` the gcd of
/// the linear form), a basis of `H^perp`, and the completed-square data of
/// the negated restricted form. Degree slices then reduce to enumerating a
/// shifted ellipsoid.
#[derive(Debug, Clone)]
pub struct RootQuery {
    lattice: Lattice,
    grading: DivisorClass,
    gcd: BigInt,
    particular: DivisorClass,
    perp: Vec<DivisorClass>,
    ellipsoid: Ellipsoid,
    /// Centre of the ellipsoid for degree `g`; scales linearly in the degree.
    unit_centre: Vec<BigRational>,
    /// `norm(particular) + pair-vector . unit_centre`, the quadratic part of
    /// the radius per unit of `(d/g)^2`.
    unit_shift: BigRational,
}

impl RootQuery {
    pub fn new(lattice: &Lattice, grading: &DivisorClass) -> Result<Self, RootError> {
        lattice.check(grading)?;
        let sig = lattice.signature();
        if !sig.is_hyperbolic() {
            return Err(RootError::NotHyperbolic(sig));
        }
        if !lattice.sq(grading).is_positive() {
            return Err(RootError::NonPositiveGrading(grading.clone()));
        }
        let kernel = linalg::linear_form_kernel(&lattice.dual_coords(grading));
        let particular = DivisorClass::new(kernel.particular);
        let perp: Vec<DivisorClass> = kernel.basis.into_iter().map(DivisorClass::new).collect();
        let restricted = crate::lattice::gram_of(lattice, &perp);
        let positive = negated(&restricted);
        let ellipsoid = Ellipsoid::new(&positive).expect("H^perp is negative definite for H^2 > 0");

        let v: Vec<BigRational> = perp
            .iter()
            .map(|b| BigRational::from_integer(lattice.ip(&particular, b)))
            .collect();
        let unit_centre = if perp.is_empty() {
            Vec::new()
        } else {
            linalg::solve(&to_rational(&positive), &v).expect("positive definite is invertible")
        };
        let vt: BigRational = v.iter().zip(&unit_centre).map(|(a, b)| a * b).sum();
        let unit_shift = BigRational::from_integer(lattice.sq(&particular)) + vt;

        Ok(Self {
            lattice: lattice.clone(),
            grading: grading.clone(),
            gcd: kernel.gcd,
            particular,
            perp,
            ellipsoid,
            unit_centre,
            unit_shift,
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn grading(&self) -> &DivisorClass {
        &self.grading
    }

    pub fn degree(&self, v: &DivisorClass) -> BigInt {
        self.lattice.ip(v, &self.grading)
    }

    /// All `r` with `norm(r) = -2` and `pair(r, H) = d`, sorted canonically.
    pub fn roots_of_degree(&self, d: &BigInt) -> Result<Vec<DivisorClass>, RootError> {
        if !d.is_positive() {
            return Err(RootError::NonPositiveDegree(d.clone()));
        }
        Ok(self.slice(d, &BigInt::from(-2)))
    }

    /// Vectors of norm `m` and degree `d`.
    fn slice(&self, d: &BigInt, m: &BigInt) -> Vec<DivisorClass> {
        if !d.is_multiple_of(&self.gcd) {
            return Vec::new();
        }
        let s = BigRational::from_integer(d / &self.gcd);
        let base = self.particular.scaled(&(d / &self.gcd));
        // (k - t)^T P (k - t) = norm(base) - m + t^T P t, with t = s * unit_centre
        let centre: Vec<BigRational> = self.unit_centre.iter().map(|c| c * &s).collect();
        let radius = &s * &s * &self.unit_shift - BigRational::from_integer(m.clone());
        let mut out: Vec<DivisorClass> = self
            .ellipsoid
            .points_within(&centre, &radius)
            .into_iter()
            .map(|k| {
                let mut v = base.clone();
                for (ki, b) in k.iter().zip(&self.perp) {
                    if !ki.is_zero() {
                        v = &v + &b.scaled(ki);
                    }
                }
                v
            })
            .filter(|v| &self.lattice.sq(v) == m)
            .collect();
        debug_assert!(out.iter().all(|v| &self.degree(v) == d));
        out.sort();
        out
    }

    /// Roots `r` with `1 <= degree(r) <= max_degree` and `pair(r, target) <= threshold`,
    /// sorted by degree then canonically.
    pub fn roots_pairing_at_most(
        &self,
        target: &DivisorClass,
        threshold: &BigInt,
        max_degree: &BigInt,
    ) -> Result<Vec<(DivisorClass, BigInt)>, RootError> {
        self.lattice.check(target)?;
        let mut out = Vec::new();
        let mut d = BigInt::from(1);
        while &d <= max_degree {
            for r in self.roots_of_degree(&d)? {
                let p = self.lattice.ip(&r, target);
                if &p <= threshold {
                    out.push((r, p));
                }
            }
            d += 1;
        }
        Ok(out)
    }

    /// Roots of degree `1..=max_degree` pairing negatively with `target`.
    pub fn negative_roots_against(
        &self,
        target: &DivisorClass,
        max_degree: &BigInt,
    ) -> Result<Vec<(DivisorClass, BigInt)>, RootError> {
        self.roots_pairing_at_most(target, &BigInt::from(-1), max_degree)
    }
}

/// One-shot form of [`RootQuery::roots_of_degree`].
pub fn roots_of_degree(lat: &Lattice, ample: &DivisorClass, d: &BigInt) -> Result<Vec<DivisorClass>, RootError> {
    RootQuery::new(lat, ample)?.roots_of_degree(d)
}

/// One-shot form of [`RootQuery::negative_roots_against`].
pub fn negative_roots_against(
    lat: &Lattice,
    ample: &DivisorClass,
    target: &DivisorClass,
    max_degree: &BigInt,
) -> Result<Vec<(DivisorClass, BigInt)>, RootError> {
    RootQuery::new(lat, ample)?.negative_roots_against(target, max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().copied().map(BigInt::from).collect())
            .collect()
    }

    fn c(v: &[i64]) -> DivisorClass {
        DivisorClass::from(v.to_vec())
    }

    fn u() -> Lattice {
        Lattice::from_rows([[0, 1], [1, 0]]).unwrap()
    }

    fn l3() -> Lattice {
        Lattice::from_rows([[4, 0, 0], [0, -2, 1], [0, 1, -2]]).unwrap()
    }

    #[test]
    fn negdef_examples() {
        let r = enum_fixed_norm_negdef(&int(&[&[-2]]), &(-2).into()).unwrap();
        assert_eq!(r, vec![c(&[1]), c(&[-1])]);

        let a2 = int(&[&[-2, 1], &[1, -2]]);
        let r = enum_fixed_norm_negdef(&a2, &(-2).into()).unwrap();
        assert_eq!(
            r,
            vec![c(&[1, 1]), c(&[1, 0]), c(&[0, 1]), c(&[0, -1]), c(&[-1, 0]), c(&[-1, -1])]
        );
        assert!(enum_fixed_norm_negdef(&a2, &(-1).into()).unwrap().is_empty());
    }

    #[test]
    fn negdef_errors() {
        assert!(matches!(
            enum_fixed_norm_negdef(&int(&[&[0, 1], &[1, 0]]), &(-2).into()),
            Err(RootError::NotNegativeDefinite(_))
        ));
        assert!(matches!(
            enum_fixed_norm_negdef(&int(&[&[-2]]), &0.into()),
            Err(RootError::NonNegativeNorm(_))
        ));
    }

    #[test]
    fn degree_slices_on_hyperbolic_plane() {
        let q = RootQuery::new(&u(), &c(&[1, 2])).unwrap();
        assert_eq!(q.roots_of_degree(&1.into()).unwrap(), vec![c(&[1, -1])]);
        assert!(q.roots_of_degree(&2.into()).unwrap().is_empty());
        assert!(matches!(q.roots_of_degree(&0.into()), Err(RootError::NonPositiveDegree(_))));
    }

    #[test]
    fn degree_slices_on_l3() {
        let q = RootQuery::new(&l3(), &c(&[3, -1, -1])).unwrap();
        assert_eq!(q.roots_of_degree(&1.into()).unwrap(), vec![c(&[0, 1, 0]), c(&[0, 0, 1])]);
        assert_eq!(q.roots_of_degree(&2.into()).unwrap(), vec![c(&[0, 1, 1])]);
    }

    #[test]
    fn unsolvable_congruence_is_empty() {
        // every degree against (1,1) in U(2) is even
        let lat = Lattice::from_rows([[0, 2], [2, 0]]).unwrap();
        let q = RootQuery::new(&lat, &c(&[1, 1])).unwrap();
        assert!(q.roots_of_degree(&1.into()).unwrap().is_empty());
    }

    #[test]
    fn negative_roots_examples() {
        let got = negative_roots_against(&l3(), &c(&[3, -1, -1]), &c(&[1, 1, 1]), &14.into()).unwrap();
        for want in [(c(&[0, 1, 0]), -1), (c(&[0, 0, 1]), -1), (c(&[0, 1, 1]), -2)] {
            assert!(got.contains(&(want.0, want.1.into())));
        }
        assert_eq!(got[0].0, c(&[0, 1, 0]));

        let got = negative_roots_against(&u(), &c(&[1, 2]), &c(&[0, 2]), &10.into()).unwrap();
        assert!(got.is_empty());

        for (lat, h) in [(u(), c(&[1, 2])), (l3(), c(&[3, -1, -1]))] {
            assert!(negative_roots_against(&lat, &h, &h, &20.into()).unwrap().is_empty());
        }
    }

    #[test]
    fn rejects_bad_grading() {
        assert!(matches!(RootQuery::new(&u(), &c(&[1, -1])), Err(RootError::NonPositiveGrading(_))));
        let lat = Lattice::from_rows([[2, 0], [0, 2]]).unwrap();
        assert!(matches!(RootQuery::new(&lat, &c(&[1, 0])), Err(RootError::NotHyperbolic(_))));
    }

    #[test]
    fn rank_one_lattice_has_no_roots() {
        let lat = Lattice::from_rows([[2]]).unwrap();
        let q = RootQuery::new(&lat, &c(&[1])).unwrap();
        for d in 1..6 {
            assert!(q.roots_of_degree(&d.into()).unwrap().is_empty());
        }
    }
}
