//! Brute-force cross-checks for small instances.
//!
//! Nothing here is used by the classification path. Box scans run over
//! machine integers with checked arithmetic and are exponential in the rank;
//! they exist to validate root enumeration and the reduction-based
//! classifier on desk-scale lattices.
//!
//! Box bounds come from the positive definite majorant
//! `Q_H(x) = 2 (x.H)^2 / H^2 - x^2` of a hyperbolic form: every `x` satisfies
//! `x_i^2 <= Q_H(x) * (Q_H^{-1})_ii`, and `Q_H` is bounded on each slice of
//! interest (roots of bounded degree, or classes of nonnegative square and
//! bounded degree).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::lattice::{DivisorClass, Lattice};
use crate::surface::{Effectivity, LineBundleClass, SurfaceContext, SurfaceKind};
use crate::vanishing::{classify_h1, is_quasi_nef, H1Case, H1Classification};

/// Per-coordinate absolute value cap for a box scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoxBound(u32);

impl BoxBound {
    pub fn new(bound: u32) -> Option<Self> {
        (bound >= 1).then_some(Self(bound))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

fn small_gram(lat: &Lattice) -> Vec<Vec<i128>> {
    lat.gram()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128().expect("gram entry fits in i128")).collect())
        .collect()
}

fn small_norm(gram: &[Vec<i128>], v: &[i128]) -> i128 {
    let mut acc: i128 = 0;
    for (i, row) in gram.iter().enumerate() {
        let mut s: i128 = 0;
        for (g, x) in row.iter().zip(v) {
            s = s.checked_add(g.checked_mul(*x).expect("overflow")).expect("overflow");
        }
        acc = acc.checked_add(v[i].checked_mul(s).expect("overflow")).expect("overflow");
    }
    acc
}

fn small_dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Calls `f` on every vector of the box `[-bound, bound]^rank`.
fn scan_box(rank: usize, bound: i128, mut f: impl FnMut(&[i128])) {
    let mut v = vec![-bound; rank];
    loop {
        f(&v);
        let mut i = 0;
        loop {
            if i == rank {
                return;
            }
            if v[i] < bound {
                v[i] += 1;
                break;
            }
            v[i] = -bound;
            i += 1;
        }
    }
}

fn to_class(v: &[i128]) -> DivisorClass {
    DivisorClass::new(v.iter().map(|&x| BigInt::from(x)).collect())
}

/// All vectors of norm -2 with every coordinate in `[-bound, bound]`,
/// sorted canonically.
pub fn brute_roots_box(lat: &Lattice, bound: BoxBound) -> Vec<DivisorClass> {
    let gram = small_gram(lat);
    let mut out = Vec::new();
    scan_box(lat.rank(), bound.get() as i128, |v| {
        if small_norm(&gram, v) == -2 {
            out.push(to_class(v));
        }
    });
    out.sort();
    out
}

/// Rational inverse by Gauss-Jordan; kept local so the oracle does not share
/// linear algebra with the code it checks.
fn inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let pivot = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &pivot;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Smallest box containing every `x` with `Q_H(x) <= budget`, where `Q_H` is
/// the majorant of a hyperbolic lattice with respect to `ample`.
fn majorant_box(lat: &Lattice, ample: &DivisorClass, budget: &BigRational) -> u32 {
    let n = lat.rank();
    let gh: Vec<BigInt> = (0..n)
        .map(|i| (0..n).map(|j| &lat.gram()[i][j] * &ample.coords()[j]).sum())
        .collect();
    let h2: BigInt = gh.iter().zip(ample.coords()).map(|(a, b)| a * b).sum();
    assert!(h2.is_positive(), "ample class must have positive square");
    let q: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    BigRational::new(BigInt::from(2) * &gh[i] * &gh[j], h2.clone())
                        - BigRational::from_integer(lat.gram()[i][j].clone())
                })
                .collect()
        })
        .collect();
    let inv = inverse(&q).expect("majorant of a hyperbolic form is nonsingular");
    let worst = (0..n)
        .map(|i| {
            let t = budget * &inv[i][i];
            Roots::sqrt(&t.floor().to_integer())
        })
        .max()
        .unwrap_or_else(BigInt::zero);
    worst.to_u32().expect("box bound fits in u32").max(1)
}

/// A box containing every root of degree `1..=max_degree`:
/// `Q_H(r) = 2 d^2 / H^2 + 2`.
pub fn root_box_bound(lat: &Lattice, ample: &DivisorClass, max_degree: u32) -> BoxBound {
    let h2 = lat.norm(ample).expect("rank matches");
    let d = BigInt::from(max_degree);
    let budget = BigRational::new(BigInt::from(2) * &d * &d, h2) + BigRational::from_integer(2.into());
    BoxBound(majorant_box(lat, ample, &budget))
}

/// A box containing every class of nonnegative square and degree at most
/// `max_degree`: `Q_H(x) <= 2 d^2 / H^2`.
pub fn class_box_bound(lat: &Lattice, ample: &DivisorClass, max_degree: u32) -> BoxBound {
    let h2 = lat.norm(ample).expect("rank matches");
    let d = BigInt::from(max_degree);
    let budget = BigRational::new(BigInt::from(2) * &d * &d, h2);
    BoxBound(majorant_box(lat, ample, &budget))
}

/// A box containing every vector of norm `m < 0` in a negative definite form.
pub fn negdef_box_bound(gram: &[Vec<BigInt>], m: &BigInt) -> BoxBound {
    let p: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(-x)).collect())
        .collect();
    let inv = inverse(&p).expect("definite form is nonsingular");
    let budget = BigRational::from_integer(-m);
    let worst = (0..gram.len())
        .map(|i| Roots::sqrt(&(&budget * &inv[i][i]).floor().to_integer()))
        .max()
        .unwrap_or_else(BigInt::zero);
    BoxBound(worst.to_u32().expect("box bound fits in u32").max(1))
}

/// Exhaustive norm-`m` vectors of a small form inside a box.
pub fn brute_fixed_norm_box(gram: &[Vec<BigInt>], m: &BigInt, bound: BoxBound) -> Vec<DivisorClass> {
    let g: Vec<Vec<i128>> = gram
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128().expect("fits")).collect())
        .collect();
    let target = m.to_i128().expect("fits");
    let mut out = Vec::new();
    scan_box(gram.len(), bound.get() as i128, |v| {
        if small_norm(&g, v) == target {
            out.push(to_class(v));
        }
    });
    out.sort();
    out
}

/// First effective root `D` of degree `1..=max_degree` with `D.L <= -2`, in
/// (degree, canonical) order.
pub fn brute_case3_search(
    ctx: &SurfaceContext,
    l: &DivisorClass,
    max_degree: &BigInt,
) -> Option<(DivisorClass, BigInt)> {
    search_effective_roots(ctx, l, max_degree, -2)
}

fn search_effective_roots(
    ctx: &SurfaceContext,
    l: &DivisorClass,
    max_degree: &BigInt,
    threshold: i64,
) -> Option<(DivisorClass, BigInt)> {
    let threshold = BigInt::from(threshold);
    let lat = ctx.lattice();
    let mut d = BigInt::one();
    while &d <= max_degree {
        let roots = ctx.root_query().roots_of_degree(&d).expect("positive degree");
        for r in roots {
            if ctx.is_effective(&LineBundleClass::untwisted(r.clone())) != Effectivity::Effective {
                continue;
            }
            let p = lat.pair(&r, l).expect("rank matches");
            if p <= threshold {
                return Some((r, p));
            }
        }
        d += 1;
    }
    None
}

/// The definition of quasi-nefness checked directly: no effective root of
/// degree at most `pair(L, H)` pairs `<= -2` with `L`.
pub fn quasi_nef_by_definition(ctx: &SurfaceContext, l: &DivisorClass) -> bool {
    let degree = ctx.degree(l);
    brute_case3_search(ctx, l, &degree).is_none()
}

/// Nef by direct search over effective roots of degree at most `pair(L, H)`.
pub fn nef_by_definition(ctx: &SurfaceContext, l: &DivisorClass) -> bool {
    let degree = ctx.degree(l);
    search_effective_roots(ctx, l, &degree, -1).is_none()
}

/// Every effective bundle of nonnegative square with degree in `1..=cap`,
/// found by a box scan; on Enriques surfaces both torsion versions.
pub fn enumerate_effective_bundles(ctx: &SurfaceContext, cap: u32) -> Vec<LineBundleClass> {
    let lat = ctx.lattice();
    let bound = class_box_bound(lat, ctx.ample(), cap);
    let gram = small_gram(lat);
    let gh: Vec<i128> = {
        let h: Vec<i128> = ctx.ample().coords().iter().map(|x| x.to_i128().expect("fits")).collect();
        gram.iter().map(|row| small_dot(row, &h)).collect()
    };
    let mut classes = Vec::new();
    scan_box(lat.rank(), bound.get() as i128, |v| {
        let d = small_dot(v, &gh);
        if d >= 1 && d <= cap as i128 && small_norm(&gram, v) >= 0 {
            classes.push(to_class(v));
        }
    });
    classes.sort_by(|a, b| ctx.degree(a).cmp(&ctx.degree(b)).then_with(|| a.cmp(b)));
    let bits: &[bool] = match ctx.kind() {
        SurfaceKind::K3 => &[false],
        SurfaceKind::Enriques => &[false, true],
    };
    classes
        .into_iter()
        .flat_map(|c| bits.iter().map(move |&t| LineBundleClass::new(c.clone(), t)))
        .filter(|l| ctx.is_effective(l) == Effectivity::Effective)
        .collect()
}

/// Expected case label from direct searches only: an effective root pairing
/// `<= -2` gives case (iii); otherwise a nef isotropic multiple `n E` with
/// nonvanishing `h^1` by the case (i)/(ii) formulas; otherwise vanishing.
pub fn expected_case_label(ctx: &SurfaceContext, l: &LineBundleClass) -> &'static str {
    if brute_case3_search(ctx, &l.cls, &ctx.degree(&l.cls)).is_some() {
        return "CaseIII";
    }
    let lat = ctx.lattice();
    if !lat.norm(&l.cls).expect("rank").is_zero() || !nef_by_definition(ctx, &l.cls) {
        return "Vanishes";
    }
    let n = l.cls.divisibility().to_i64().expect("small multiple");
    let e = l.cls.primitive_part().expect("nonzero");
    match ctx.kind() {
        SurfaceKind::K3 if n >= 2 => "CaseI",
        SurfaceKind::K3 => "Vanishes",
        SurfaceKind::Enriques => {
            let flipped = ctx.flipped_half_fibers().contains(&e);
            let twisted = l.torsion ^ (flipped && n % 2 == 0);
            if n % 2 == 1 || !twisted {
                if n / 2 >= 1 {
                    "CaseI"
                } else {
                    "Vanishes"
                }
            } else if (n - 1) / 2 >= 1 {
                "CaseII"
            } else {
                "Vanishes"
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub bundle: LineBundleClass,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrossValidation {
    pub checked: usize,
    pub counts: BTreeMap<&'static str, usize>,
    pub mismatches: Vec<Mismatch>,
    /// Classifications of every checked bundle, in enumeration order.
    pub classifications: Vec<H1Classification>,
}

/// Classifies every effective bundle of nonnegative square and degree
/// `1..=cap` and compares with the direct searches: case (iii) against an
/// exhaustive root search, the remaining cases against the isotropic
/// multiple test, and quasi-nefness against its definition.
pub fn cross_validate(ctx: &SurfaceContext, cap: u32) -> CrossValidation {
    let mut report = CrossValidation::default();
    for l in enumerate_effective_bundles(ctx, cap) {
        report.checked += 1;
        let mut mismatch = |detail: String| {
            report.mismatches.push(Mismatch {
                bundle: l.clone(),
                detail,
            })
        };
        let classification = match classify_h1(ctx, &l) {
            Ok(c) => c,
            Err(e) => {
                mismatch(format!("classification failed: {e}"));
                continue;
            }
        };
        let got = classification.case.label();
        let want = expected_case_label(ctx, &l);
        if got != want {
            mismatch(format!("classifier says {got}, direct search says {want}"));
        }
        if let H1Case::CaseIII { witness, pairing } = &classification.case {
            let lat = ctx.lattice();
            let ok = lat.norm(witness).ok() == Some(BigInt::from(-2))
                && lat.pair(witness, &l.cls).ok().as_ref() == Some(pairing)
                && pairing <= &BigInt::from(-2)
                && ctx.is_effective(&LineBundleClass::untwisted(witness.clone())) == Effectivity::Effective;
            if !ok {
                mismatch(format!("witness {witness} does not verify"));
            }
        }
        match is_quasi_nef(ctx, &l) {
            Ok(q) if q.quasi_nef != quasi_nef_by_definition(ctx, &l.cls) => {
                mismatch(format!("quasi-nef {} disagrees with definition", q.quasi_nef))
            }
            Ok(_) => {}
            Err(e) => mismatch(format!("quasi-nef test failed: {e}")),
        }
        *report.counts.entry(got).or_default() += 1;
        report.classifications.push(classification);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::EnriquesMode;

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
    fn box_bound_rejects_zero() {
        assert!(BoxBound::new(0).is_none());
        assert_eq!(BoxBound::new(3).unwrap().get(), 3);
    }

    #[test]
    fn brute_roots_examples() {
        let b3 = BoxBound::new(3).unwrap();
        assert_eq!(brute_roots_box(&u(), b3), vec![c(&[1, -1]), c(&[-1, 1])]);
        let a2 = Lattice::from_rows([[-2, 1], [1, -2]]).unwrap();
        assert_eq!(brute_roots_box(&a2, BoxBound::new(2).unwrap()).len(), 6);
        let a1 = Lattice::from_rows([[-2]]).unwrap();
        assert_eq!(brute_roots_box(&a1, BoxBound::new(1).unwrap()), vec![c(&[1]), c(&[-1])]);
    }

    #[test]
    fn brute_output_closed_under_negation() {
        let roots = brute_roots_box(&l3(), BoxBound::new(4).unwrap());
        for r in &roots {
            assert!(roots.contains(&-r));
        }
    }

    #[test]
    fn case3_search_examples() {
        let ctx = SurfaceContext::k3(l3(), c(&[3, -1, -1])).unwrap();
        assert_eq!(
            brute_case3_search(&ctx, &c(&[1, 1, 1]), &14.into()),
            Some((c(&[0, 1, 1]), BigInt::from(-2)))
        );
        let ctx_u = SurfaceContext::k3(u(), c(&[1, 2])).unwrap();
        assert_eq!(brute_case3_search(&ctx_u, &c(&[0, 4]), &8.into()), None);
        for ctx in [ctx, ctx_u] {
            let h = ctx.ample().clone();
            assert_eq!(brute_case3_search(&ctx, &h, &ctx.degree(&h)), None);
        }
    }

    #[test]
    fn majorant_box_contains_small_roots() {
        // roots of degree 1 on U against (1,2) is (1,-1)
        let b = root_box_bound(&u(), &c(&[1, 2]), 1);
        assert!(b.get() >= 1);
        let roots = brute_roots_box(&u(), b);
        assert!(roots.contains(&c(&[1, -1])));
    }

    #[test]
    fn cross_validate_small_fixtures() {
        let r = cross_validate(&SurfaceContext::k3(u(), c(&[1, 2])).unwrap(), 6);
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
        assert!(r.checked > 0);

        let r = cross_validate(&SurfaceContext::k3(l3(), c(&[3, -1, -1])).unwrap(), 14);
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
        assert!(r.counts.get("CaseIII").copied().unwrap_or(0) >= 1);

        let rank_one = Lattice::from_rows([[2]]).unwrap();
        let r = cross_validate(&SurfaceContext::k3(rank_one, c(&[1])).unwrap(), 6);
        assert!(r.mismatches.is_empty());
        assert_eq!(r.counts.keys().copied().collect::<Vec<_>>(), vec!["Vanishes"]);

        let e = SurfaceContext::enriques(u(), c(&[1, 2]), EnriquesMode::Unnodal).unwrap();
        let r = cross_validate(&e, 6);
        assert!(r.mismatches.is_empty(), "{:?}", r.mismatches);
    }
}
