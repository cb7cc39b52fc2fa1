//! Classification of `h^1` vanishing for line bundles of nonnegative square.
//!
//! A nonzero effective `L` with `L^2 >= 0` has `h^1(L) != 0` exactly when
//!
//! * `L` is `n E` with `E` nef, primitive, isotropic and `n >= 2`
//!   (`h^1 = n - 1` on a K3 surface, `floor(n/2)` on an Enriques surface),
//! * on an Enriques surface, `L` is `n E + K_X` with `n >= 3`
//!   (`h^1 = floor((n - 1)/2)`), or
//! * some effective root `D` has `D.L <= -2`.
//!
//! The decision runs the fixed-component reduction: repeatedly subtract the
//! minimal-degree effective root `G` with `G.L < 0`. Such a root is an
//! irreducible (-2)-curve in the base locus of `|L|`, so `h^0` is unchanged
//! and `h^1` drops by `-G.L - 1`. A step with `G.L <= -2` certifies the third
//! case; its witness is lifted back to the original bundle by adding earlier
//! components. Otherwise `L^2` and `h^1` are preserved all the way down to a
//! nef class, where the isotropic test finishes the job.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{DivisorClass, LatticeError};
use crate::surface::{Effectivity, LineBundleClass, SurfaceContext, SurfaceError, SurfaceKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VanishingError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{bundle} is not effective; h^i({bundle}) = h^(2-i) of its Serre dual {serre_dual}")]
    NotEffective {
        bundle: LineBundleClass,
        serre_dual: LineBundleClass,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("effective classes {a} and {b} of nonnegative square pair to {pairing}")]
    LemmaViolation {
        a: DivisorClass,
        b: DivisorClass,
        pairing: BigInt,
    },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl VanishingError {
    /// True for failures that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, VanishingError::Internal(_) | VanishingError::LemmaViolation { .. })
    }
}

/// Optional cap on every root search; `None` uses the exhaustive bound
/// `pair(L, H)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_degree: Option<BigInt>,
}

impl SearchOptions {
    pub fn bounded(max_degree: BigInt) -> Self {
        Self {
            max_degree: Some(max_degree),
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.max_degree.is_some()
    }

    fn bound_for(&self, degree: &BigInt) -> BigInt {
        match &self.max_degree {
            Some(cap) => cap.min(degree).clone(),
            None => degree.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub gamma: DivisorClass,
    /// `pair(gamma, before)`, always negative.
    pub pairing: BigInt,
    pub before: LineBundleClass,
    pub after: LineBundleClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionChain {
    pub start: LineBundleClass,
    pub steps: Vec<ReductionStep>,
    /// Nef class reached at the end.
    pub final_class: LineBundleClass,
}

impl ReductionChain {
    /// The bundle before step `stage`, or the final class for `stage == steps.len()`.
    pub fn stage(&self, stage: usize) -> &LineBundleClass {
        self.steps.get(stage).map_or(&self.final_class, |s| &s.before)
    }

    /// Re-checks every per-step invariant by direct pairing computations:
    /// negative pairing, `after = before - gamma`, strictly decreasing
    /// degree, norms nondecreasing as `L'^2 = L^2 - 2 G.L - 2`, and constant
    /// Euler characteristic across steps with pairing `-1`.
    pub fn check_invariants(&self, ctx: &SurfaceContext) -> Result<(), String> {
        let lat = ctx.lattice();
        let mut current = &self.start;
        for (i, s) in self.steps.iter().enumerate() {
            if &s.before != current {
                return Err(format!("step {i}: chain is not contiguous"));
            }
            if lat.sq(&s.gamma) != BigInt::from(-2) {
                return Err(format!("step {i}: {} is not a root", s.gamma));
            }
            if ctx.is_effective(&LineBundleClass::untwisted(s.gamma.clone())) != Effectivity::Effective {
                return Err(format!("step {i}: {} is not effective", s.gamma));
            }
            let p = lat.ip(&s.gamma, &s.before.cls);
            if p != s.pairing || !p.is_negative() {
                return Err(format!("step {i}: recorded pairing {} but computed {p}", s.pairing));
            }
            if s.after.cls != &s.before.cls - &s.gamma || s.after.torsion != s.before.torsion {
                return Err(format!("step {i}: after != before - gamma"));
            }
            if ctx.degree(&s.after.cls) >= ctx.degree(&s.before.cls) {
                return Err(format!("step {i}: degree did not decrease"));
            }
            let (n0, n1) = (lat.sq(&s.before.cls), lat.sq(&s.after.cls));
            if n1 != &n0 - BigInt::from(2) * &p - 2 || n1 < n0 {
                return Err(format!("step {i}: norm {n0} -> {n1} inconsistent with pairing {p}"));
            }
            if p == BigInt::from(-1) && ctx.euler_char(&s.before) != ctx.euler_char(&s.after) {
                return Err(format!("step {i}: Euler characteristic changed across a -1 step"));
            }
            current = &s.after;
        }
        if current != &self.final_class {
            return Err("final class does not match the last step".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum H1Case {
    Vanishes,
    /// `L = n E`, `E` nef primitive isotropic, `n >= 2`.
    CaseI { n: BigInt, e: DivisorClass },
    /// Enriques only: `L = n E + K_X`, `n >= 3`.
    CaseII { n: BigInt, e: DivisorClass },
    /// An effective root pairing at most `-2` with `L`.
    CaseIII { witness: DivisorClass, pairing: BigInt },
}

impl H1Case {
    pub fn label(&self) -> &'static str {
        match self {
            H1Case::Vanishes => "Vanishes",
            H1Case::CaseI { .. } => "CaseI",
            H1Case::CaseII { .. } => "CaseII",
            H1Case::CaseIII { .. } => "CaseIII",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Classification {
    pub bundle: LineBundleClass,
    pub case: H1Case,
    pub h0: BigInt,
    pub h1: BigInt,
    pub h2: BigInt,
    pub euler_char: BigInt,
    pub reduction: ReductionChain,
    /// Depends on completeness of a declared nodal list.
    pub conditional: bool,
    /// Root searches were capped below the exhaustive bound.
    pub bounded_search: bool,
}

/// Removes fixed (-2)-components until the class is nef.
pub fn nef_reduce(ctx: &SurfaceContext, l: &LineBundleClass) -> Result<ReductionChain, VanishingError> {
    nef_reduce_with(ctx, l, &SearchOptions::default())
}

pub fn nef_reduce_with(
    ctx: &SurfaceContext,
    l: &LineBundleClass,
    opts: &SearchOptions,
) -> Result<ReductionChain, VanishingError> {
    ctx.require_effective_nonnegative(l)?;
    let lat = ctx.lattice();
    let max_steps = ctx.degree(&l.cls);
    let mut steps = Vec::new();
    let mut current = l.clone();
    loop {
        let bound = opts.bound_for(&ctx.degree(&current.cls));
        let Some((gamma, pairing)) = ctx.min_negative_effective_root(&current.cls, &bound)? else {
            break;
        };
        if BigInt::from(steps.len()) >= max_steps {
            return Err(VanishingError::Internal(format!(
                "reduction of {l} did not terminate within {max_steps} steps"
            )));
        }
        let after = LineBundleClass::new(&current.cls - &gamma, current.torsion);
        debug_assert!(lat.sq(&after.cls) >= lat.sq(&current.cls));
        steps.push(ReductionStep {
            gamma,
            pairing,
            before: current,
            after: after.clone(),
        });
        current = after;
    }
    Ok(ReductionChain {
        start: l.clone(),
        steps,
        final_class: current,
    })
}

/// `(n, E)` with `M = n E`, `E` primitive, for a nef effective isotropic `M`.
pub fn isotropic_type(ctx: &SurfaceContext, m: &LineBundleClass) -> Result<(BigInt, DivisorClass), VanishingError> {
    ctx.check_bundle(m)?;
    if m.cls.is_zero() {
        return Err(VanishingError::Precondition("isotropic type of the zero class".into()));
    }
    let norm = ctx.lattice().sq(&m.cls);
    if !norm.is_zero() {
        return Err(VanishingError::Precondition(format!("{m} has square {norm}, not 0")));
    }
    if !ctx.is_nef(m)?.nef {
        return Err(VanishingError::Precondition(format!("{m} is not nef")));
    }
    Ok(split_multiple(&m.cls))
}

fn split_multiple(cls: &DivisorClass) -> (BigInt, DivisorClass) {
    let n = cls.divisibility();
    let e = cls.primitive_part().expect("nonzero class");
    (n, e)
}

/// `h^1` data for a nef class `M` of nonnegative square.
struct NefData {
    case: H1Case,
    h0: BigInt,
    h1: BigInt,
}

fn nef_cohomology(ctx: &SurfaceContext, m: &LineBundleClass) -> Result<NefData, VanishingError> {
    let chi = ctx.euler_char(m);
    let h2 = ctx.h2(m)?;
    if m.cls.is_zero() {
        let h0 = if m.torsion { BigInt::zero() } else { BigInt::one() };
        return Ok(NefData {
            case: H1Case::Vanishes,
            h1: &h0 + &h2 - &chi,
            h0,
        });
    }
    let norm = ctx.lattice().sq(&m.cls);
    let (case, h1) = if norm.is_positive() {
        (H1Case::Vanishes, BigInt::zero())
    } else {
        let (n, e) = split_multiple(&m.cls);
        match ctx.kind() {
            SurfaceKind::K3 => {
                let h1 = &n - 1;
                if n >= BigInt::from(2) {
                    (H1Case::CaseI { n, e }, h1)
                } else {
                    (H1Case::Vanishes, h1)
                }
            }
            SurfaceKind::Enriques => {
                let twisted = ctx.effective_torsion_bit(&e, &n, m.torsion);
                if n.is_odd() || !twisted {
                    let h1 = n.div_floor(&BigInt::from(2));
                    if h1.is_zero() {
                        (H1Case::Vanishes, h1)
                    } else {
                        (H1Case::CaseI { n, e }, h1)
                    }
                } else {
                    let h1 = (&n - BigInt::one()).div_floor(&BigInt::from(2));
                    if h1.is_zero() {
                        (H1Case::Vanishes, h1)
                    } else {
                        (H1Case::CaseII { n, e }, h1)
                    }
                }
            }
        }
    };
    Ok(NefData {
        case,
        h0: &chi + &h1 - &h2,
        h1,
    })
}

pub fn classify_h1(ctx: &SurfaceContext, l: &LineBundleClass) -> Result<H1Classification, VanishingError> {
    classify_h1_with(ctx, l, &SearchOptions::default())
}

pub fn classify_h1_with(
    ctx: &SurfaceContext,
    l: &LineBundleClass,
    opts: &SearchOptions,
) -> Result<H1Classification, VanishingError> {
    ctx.check_bundle(l)?;
    let conditional = ctx.is_conditional();
    let euler_char = ctx.euler_char(l);

    if l.cls.is_zero() {
        let data = nef_cohomology(ctx, l)?;
        return Ok(H1Classification {
            bundle: l.clone(),
            case: H1Case::Vanishes,
            h2: ctx.h2(l)?,
            h0: data.h0,
            h1: data.h1,
            euler_char,
            reduction: ReductionChain {
                start: l.clone(),
                steps: Vec::new(),
                final_class: l.clone(),
            },
            conditional,
            bounded_search: opts.is_bounded(),
        });
    }
    let norm = ctx.lattice().sq(&l.cls);
    if norm.is_negative() {
        return Err(SurfaceError::NegativeSquare(l.clone()).into());
    }
    match ctx.is_effective(l) {
        Effectivity::Effective => {}
        Effectivity::NotEffective => {
            return Err(VanishingError::NotEffective {
                bundle: l.clone(),
                serre_dual: ctx.serre_dual(l),
            })
        }
        Effectivity::Undecidable => return Err(SurfaceError::Undecidable(l.clone()).into()),
    }

    let chain = nef_reduce_with(ctx, l, opts)?;
    let h2 = BigInt::zero();
    let final_data = nef_cohomology(ctx, &chain.final_class)?;
    let first_steep = chain.steps.iter().position(|s| s.pairing <= BigInt::from(-2));

    // h^0 is preserved by removing fixed components.
    let h0 = final_data.h0.clone();
    let h1 = &h0 + &h2 - &euler_char;
    let correction: BigInt = chain.steps.iter().map(|s| -&s.pairing - 1).sum();
    if h1 != &final_data.h1 + &correction || h1.is_negative() {
        return Err(VanishingError::Internal(format!(
            "h^1 bookkeeping for {l}: h^0 route gives {h1}, step route gives {} + {correction}",
            final_data.h1
        )));
    }

    let case = match first_steep {
        Some(stage) => {
            let start = chain.steps[stage].gamma.clone();
            let witness = lift_witness(ctx, &chain, &start, stage)?;
            let pairing = ctx.lattice().ip(&witness, &l.cls);
            H1Case::CaseIII { witness, pairing }
        }
        None if chain.steps.is_empty() => final_data.case,
        None => {
            if !final_data.h1.is_zero() {
                return Err(VanishingError::Internal(format!(
                    "{l} reduces through -1 steps to {} with h^1 = {}",
                    chain.final_class, final_data.h1
                )));
            }
            H1Case::Vanishes
        }
    };

    Ok(H1Classification {
        bundle: l.clone(),
        case,
        h0,
        h1,
        h2,
        euler_char,
        reduction: chain,
        conditional,
        bounded_search: opts.is_bounded(),
    })
}

/// Lifts an effective root pairing `<= -2` with the bundle at `stage` of the
/// chain to one pairing `<= -2` with the original bundle.
///
/// Walking backwards over a step that removed `G`: if `D` already pairs
/// `<= -2` with the earlier bundle it is kept; otherwise that pairing is
/// `-1`, `D.G = 1`, and `D + G` is a root pairing `-2`.
pub fn lift_witness(
    ctx: &SurfaceContext,
    chain: &ReductionChain,
    found: &DivisorClass,
    stage: usize,
) -> Result<DivisorClass, VanishingError> {
    let lat = ctx.lattice();
    lat.check(found)?;
    if stage > chain.steps.len() {
        return Err(VanishingError::Precondition(format!(
            "stage {stage} beyond chain of length {}",
            chain.steps.len()
        )));
    }
    let minus_two = BigInt::from(-2);
    let is_effective = |d: &DivisorClass| ctx.is_effective(&LineBundleClass::untwisted(d.clone())) == Effectivity::Effective;
    if lat.sq(found) != minus_two || !is_effective(found) || lat.ip(found, &chain.stage(stage).cls) > minus_two {
        return Err(VanishingError::Precondition(format!(
            "{found} is not an effective root pairing <= -2 with stage {stage}"
        )));
    }
    let mut delta = found.clone();
    for step in chain.steps[..stage].iter().rev() {
        let p = lat.ip(&delta, &step.before.cls);
        if p <= minus_two {
            continue;
        }
        if p != BigInt::from(-1) || lat.ip(&delta, &step.gamma) != BigInt::one() {
            return Err(VanishingError::Internal(format!(
                "cannot lift {delta} over {}: pairing {p}",
                step.gamma
            )));
        }
        delta = &delta + &step.gamma;
        if lat.sq(&delta) != minus_two || lat.ip(&delta, &step.before.cls) > minus_two {
            return Err(VanishingError::Internal(format!("lifted class {delta} is not a valid witness")));
        }
    }
    if !is_effective(&delta) {
        return Err(VanishingError::Internal(format!("lifted witness {delta} is not effective")));
    }
    Ok(delta)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiNefReport {
    pub quasi_nef: bool,
    /// Effective root pairing `<= -2` with `L` when not quasi-nef.
    pub witness: Option<DivisorClass>,
    /// `(n, E)` when `L` is numerically `n E` with `E` nef primitive isotropic and `n >= 2`.
    pub isotropic: Option<(BigInt, DivisorClass)>,
    pub classification: H1Classification,
}

/// Quasi-nef iff `h^1(L) = 0` or `L` is numerically a multiple `n E`,
/// `n >= 2`, of a nef primitive isotropic class.
pub fn is_quasi_nef(ctx: &SurfaceContext, l: &LineBundleClass) -> Result<QuasiNefReport, VanishingError> {
    is_quasi_nef_with(ctx, l, &SearchOptions::default())
}

pub fn is_quasi_nef_with(
    ctx: &SurfaceContext,
    l: &LineBundleClass,
    opts: &SearchOptions,
) -> Result<QuasiNefReport, VanishingError> {
    let classification = classify_h1_with(ctx, l, opts)?;
    let (quasi_nef, witness) = match &classification.case {
        H1Case::CaseIII { witness, .. } => (false, Some(witness.clone())),
        _ => (true, None),
    };
    let isotropic = if classification.reduction.steps.is_empty()
        && !l.cls.is_zero()
        && ctx.lattice().sq(&l.cls).is_zero()
    {
        Some(split_multiple(&l.cls)).filter(|(n, _)| n > &BigInt::one())
    } else {
        None
    };
    Ok(QuasiNefReport {
        quasi_nef,
        witness,
        isotropic,
        classification,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaAlignment {
    PositivePairing(BigInt),
    /// `A = a F`, `B = b F` with `F` primitive isotropic.
    CommonIsotropic { f: DivisorClass, a: BigInt, b: BigInt },
}

/// For effective `A`, `B` of nonnegative square: `A.B >= 0`, with equality
/// only when both are positive multiples of one primitive isotropic class.
pub fn check_lemma_alignment(
    ctx: &SurfaceContext,
    a: &DivisorClass,
    b: &DivisorClass,
) -> Result<LemmaAlignment, VanishingError> {
    for x in [a, b] {
        if x.is_zero() {
            return Err(VanishingError::Precondition("zero class".into()));
        }
        ctx.require_effective_nonnegative(&LineBundleClass::untwisted(x.clone()))?;
    }
    let lat = ctx.lattice();
    let pairing = lat.ip(a, b);
    if pairing.is_positive() {
        return Ok(LemmaAlignment::PositivePairing(pairing));
    }
    let violation = || VanishingError::LemmaViolation {
        a: a.clone(),
        b: b.clone(),
        pairing: pairing.clone(),
    };
    if pairing.is_negative() {
        return Err(violation());
    }
    let (ma, f) = split_multiple(a);
    let (mb, g) = split_multiple(b);
    if f != g || !lat.sq(&f).is_zero() {
        return Err(violation());
    }
    Ok(LemmaAlignment::CommonIsotropic { f, a: ma, b: mb })
}

pub fn h0(ctx: &SurfaceContext, l: &LineBundleClass) -> Result<BigInt, VanishingError> {
    Ok(classify_h1(ctx, l)?.h0)
}

pub fn h1(ctx: &SurfaceContext, l: &LineBundleClass) -> Result<BigInt, VanishingError> {
    Ok(classify_h1(ctx, l)?.h1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::surface::EnriquesMode;

    fn c(v: &[i64]) -> DivisorClass {
        DivisorClass::from(v.to_vec())
    }

    fn lb(v: &[i64]) -> LineBundleClass {
        LineBundleClass::untwisted(c(v))
    }

    fn k3_u() -> SurfaceContext {
        SurfaceContext::k3(Lattice::from_rows([[0, 1], [1, 0]]).unwrap(), c(&[1, 2])).unwrap()
    }

    fn k3_l3() -> SurfaceContext {
        SurfaceContext::k3(
            Lattice::from_rows([[4, 0, 0], [0, -2, 1], [0, 1, -2]]).unwrap(),
            c(&[3, -1, -1]),
        )
        .unwrap()
    }

    fn enriques_u() -> SurfaceContext {
        SurfaceContext::enriques(Lattice::from_rows([[0, 1], [1, 0]]).unwrap(), c(&[1, 2]), EnriquesMode::Unnodal)
            .unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn reduce_l3_example() {
        let chain = nef_reduce(&k3_l3(), &lb(&[1, 1, 1])).unwrap();
        let got: Vec<_> = chain.steps.iter().map(|s| (s.gamma.clone(), s.pairing.clone())).collect();
        assert_eq!(got, vec![(c(&[0, 1, 0]), big(-1)), (c(&[0, 0, 1]), big(-2))]);
        assert_eq!(chain.final_class, lb(&[1, 0, 0]));
        chain.check_invariants(&k3_l3()).unwrap();
    }

    #[test]
    fn reduce_nef_is_identity() {
        let chain = nef_reduce(&k3_u(), &lb(&[0, 3])).unwrap();
        assert!(chain.steps.is_empty());
        assert_eq!(chain.final_class, lb(&[0, 3]));
        for ctx in [k3_u(), k3_l3()] {
            let h = LineBundleClass::untwisted(ctx.ample().clone());
            assert!(nef_reduce(&ctx, &h).unwrap().steps.is_empty());
        }
    }

    #[test]
    fn isotropic_type_examples() {
        assert_eq!(isotropic_type(&k3_u(), &lb(&[0, 6])).unwrap(), (big(6), c(&[0, 1])));
        assert_eq!(isotropic_type(&k3_u(), &lb(&[0, 1])).unwrap(), (big(1), c(&[0, 1])));
        assert!(matches!(
            isotropic_type(&k3_l3(), &lb(&[1, 0, 0])),
            Err(VanishingError::Precondition(_))
        ));
    }

    #[test]
    fn classify_examples() {
        let r = classify_h1(&k3_u(), &lb(&[0, 4])).unwrap();
        assert_eq!(r.case, H1Case::CaseI { n: big(4), e: c(&[0, 1]) });
        assert_eq!((r.h0, r.h1), (big(5), big(3)));

        let r = classify_h1(&k3_l3(), &lb(&[1, 1, 1])).unwrap();
        assert_eq!(r.case, H1Case::CaseIII { witness: c(&[0, 1, 1]), pairing: big(-2) });
        assert_eq!((r.h0, r.h1, r.h2), (big(4), big(1), big(0)));

        let r = classify_h1(&enriques_u(), &lb(&[0, 2])).unwrap();
        assert_eq!(r.case, H1Case::CaseI { n: big(2), e: c(&[0, 1]) });
        assert_eq!((r.h0, r.h1), (big(2), big(1)));

        let r = classify_h1(&enriques_u(), &LineBundleClass::new(c(&[0, 2]), true)).unwrap();
        assert_eq!(r.case, H1Case::Vanishes);
        assert_eq!(r.h1, big(0));
    }

    #[test]
    fn lift_witness_examples() {
        let ctx = k3_l3();
        let chain = nef_reduce(&ctx, &lb(&[1, 1, 1])).unwrap();
        assert_eq!(lift_witness(&ctx, &chain, &c(&[0, 0, 1]), 1).unwrap(), c(&[0, 1, 1]));
        // already valid at stage 0
        assert_eq!(lift_witness(&ctx, &chain, &c(&[0, 1, 1]), 0).unwrap(), c(&[0, 1, 1]));
        assert!(matches!(
            lift_witness(&ctx, &chain, &c(&[0, 1, 0]), 0),
            Err(VanishingError::Precondition(_))
        ));
    }

    #[test]
    fn lift_identity_on_single_step_chain() {
        // L = B + R1 on L3: R1.L = -2, one step at stage 0
        let ctx = k3_l3();
        let l = lb(&[1, 1, 0]);
        let chain = nef_reduce(&ctx, &l).unwrap();
        assert_eq!(chain.steps.len(), 1);
        assert_eq!(chain.steps[0].pairing, big(-2));
        assert_eq!(lift_witness(&ctx, &chain, &c(&[0, 1, 0]), 0).unwrap(), c(&[0, 1, 0]));
    }

    #[test]
    fn quasi_nef_examples() {
        let r = is_quasi_nef(&k3_u(), &lb(&[0, 2])).unwrap();
        assert!(r.quasi_nef);
        assert_eq!(r.isotropic, Some((big(2), c(&[0, 1]))));

        let r = is_quasi_nef(&k3_l3(), &lb(&[1, 1, 1])).unwrap();
        assert!(!r.quasi_nef);
        assert_eq!(r.witness, Some(c(&[0, 1, 1])));

        for ctx in [k3_u(), k3_l3(), enriques_u()] {
            let h = LineBundleClass::untwisted(ctx.ample().clone());
            assert!(is_quasi_nef(&ctx, &h).unwrap().quasi_nef);
        }
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(
            check_lemma_alignment(&k3_u(), &c(&[0, 2]), &c(&[0, 3])).unwrap(),
            LemmaAlignment::CommonIsotropic { f: c(&[0, 1]), a: big(2), b: big(3) }
        );
        assert_eq!(
            check_lemma_alignment(&k3_u(), &c(&[1, 0]), &c(&[0, 1])).unwrap(),
            LemmaAlignment::PositivePairing(big(1))
        );
        assert_eq!(
            check_lemma_alignment(&k3_l3(), &c(&[1, 0, 0]), &c(&[1, 1, 1])).unwrap(),
            LemmaAlignment::PositivePairing(big(4))
        );
        assert!(check_lemma_alignment(&k3_u(), &c(&[0, -1]), &c(&[0, 1])).is_err());
    }

    #[test]
    fn h0_h1_wrappers() {
        assert_eq!((h0(&k3_u(), &lb(&[0, 2])).unwrap(), h1(&k3_u(), &lb(&[0, 2])).unwrap()), (big(3), big(1)));
        assert_eq!((h0(&k3_u(), &lb(&[1, 2])).unwrap(), h1(&k3_u(), &lb(&[1, 2])).unwrap()), (big(4), big(0)));
        let r = classify_h1(&k3_u(), &lb(&[0, 0])).unwrap();
        assert_eq!((r.h0, r.h1, r.h2), (big(1), big(0), big(1)));
        let r = classify_h1(&enriques_u(), &LineBundleClass::new(c(&[0, 0]), true)).unwrap();
        assert_eq!((r.h0, r.h1, r.h2), (big(0), big(0), big(1)));
    }

    #[test]
    fn non_effective_input_reports_serre_dual() {
        let err = classify_h1(&k3_u(), &lb(&[0, -2])).unwrap_err();
        assert_eq!(
            err,
            VanishingError::NotEffective { bundle: lb(&[0, -2]), serre_dual: lb(&[0, 2]) }
        );
        assert!(matches!(
            classify_h1(&k3_u(), &lb(&[1, -1])),
            Err(VanishingError::Surface(SurfaceError::NegativeSquare(_)))
        ));
    }

    #[test]
    fn enriques_formulas() {
        let ctx = enriques_u();
        for n in 2..=10i64 {
            let plain = h1(&ctx, &LineBundleClass::new(c(&[0, n]), false)).unwrap();
            assert_eq!(plain, big(n / 2));
            let twisted = h1(&ctx, &LineBundleClass::new(c(&[0, n]), true)).unwrap();
            assert_eq!(twisted, big((n - 1) / 2));
        }
    }

    #[test]
    fn flipped_half_fiber_swaps_even_cases() {
        let ctx = enriques_u().with_flipped_half_fiber(c(&[0, 1])).unwrap();
        let r = classify_h1(&ctx, &LineBundleClass::new(c(&[0, 4]), false)).unwrap();
        assert_eq!(r.case, H1Case::CaseII { n: big(4), e: c(&[0, 1]) });
        assert_eq!(r.h1, big(1));
        let r = classify_h1(&ctx, &LineBundleClass::new(c(&[0, 3]), false)).unwrap();
        assert_eq!(r.case, H1Case::CaseI { n: big(3), e: c(&[0, 1]) });
    }

    #[test]
    fn bounded_search_is_flagged() {
        let r = classify_h1_with(&k3_l3(), &lb(&[1, 1, 1]), &SearchOptions::bounded(big(1))).unwrap();
        assert!(r.bounded_search);
        assert_eq!(r.case.label(), "CaseIII");
    }
}
