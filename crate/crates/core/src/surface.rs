//! Surface-level semantics over a lattice model: K3 versus Enriques
//! constants, canonical torsion, Riemann-Roch, effectivity and nefness.
//!
//! The ample class fixes the orientation of the positive cone: a nonzero
//! class of nonnegative square is effective exactly when it has positive
//! degree against the ample class.
//!
//! On Enriques surfaces effectivity of a (-2)-class is not determined by the
//! lattice, so a context is either unnodal (no effective (-2)-classes at
//! all) or carries a declared list of nodal classes. Answers in the latter
//! mode are conditional on that list containing every (-2)-curve up to the
//! degrees searched.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{is_nonnegative, DivisorClass, Lattice, LatticeError, Signature};
use crate::roots::{enum_fixed_norm_negdef, RootError, RootQuery};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    K3,
    Enriques,
}

impl SurfaceKind {
    /// `chi(O_X)`: 2 on a K3 surface, 1 on an Enriques surface.
    pub fn chi_o(self) -> BigInt {
        match self {
            SurfaceKind::K3 => BigInt::from(2),
            SurfaceKind::Enriques => BigInt::one(),
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::K3 => f.write_str("K3"),
            SurfaceKind::Enriques => f.write_str("Enriques"),
        }
    }
}

pub fn chi_o(kind: SurfaceKind) -> BigInt {
    kind.chi_o()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnriquesMode {
    Unnodal,
    DeclaredNodal(Vec<DivisorClass>),
}

/// A numerical class together with a canonical-torsion bit. On an Enriques
/// surface `torsion = true` stands for `cls + K_X`; on a K3 surface the bit
/// must be clear.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LineBundleClass {
    pub cls: DivisorClass,
    pub torsion: bool,
}

impl LineBundleClass {
    pub fn new(cls: DivisorClass, torsion: bool) -> Self {
        Self { cls, torsion }
    }

    pub fn untwisted(cls: DivisorClass) -> Self {
        Self { cls, torsion: false }
    }
}

impl From<DivisorClass> for LineBundleClass {
    fn from(cls: DivisorClass) -> Self {
        Self::untwisted(cls)
    }
}

impl fmt::Display for LineBundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cls)?;
        if self.torsion {
            f.write_str("+K")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AmpleRejection {
    #[error("ample class does not have positive square")]
    NotPositiveSquare,
    #[error("root {0} lies on the wall of the ample class")]
    RootOnWall(DivisorClass),
    #[error("ample class pairs non-positively with declared nodal class {0}")]
    NegativeOnNodal(DivisorClass),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("lattice is not hyperbolic (signature {0})")]
    NotHyperbolic(Signature),
    #[error("invalid ample class: {0}")]
    Ample(#[from] AmpleRejection),
    #[error("declared nodal class {0} does not have square -2")]
    NodalNotRoot(DivisorClass),
    #[error("nodal classes and half-fiber declarations are only meaningful on Enriques surfaces")]
    EnriquesOnly,
    #[error("canonical torsion bit set on a K3 surface")]
    TorsionOnK3,
    #[error("half-fiber declaration {0} is not a primitive isotropic class of positive degree")]
    BadHalfFiber(DivisorClass),
    #[error("{0} is not effective")]
    NotEffective(LineBundleClass),
    #[error("{0} has negative square")]
    NegativeSquare(LineBundleClass),
    #[error("effectivity of {0} cannot be decided from the lattice data")]
    Undecidable(LineBundleClass),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Effectivity {
    Effective,
    NotEffective,
    Undecidable,
}

/// Outcome of a nef test. `violator` is the minimal-degree effective root
/// pairing negatively with the class (ties broken canonically).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NefStatus {
    pub nef: bool,
    pub violator: Option<(DivisorClass, BigInt)>,
}

/// Checks that `ample` is a valid ample class for `lattice` and the declared
/// nodal classes. The lattice must be hyperbolic.
pub fn validate_ample(lattice: &Lattice, ample: &DivisorClass, nodal: &[DivisorClass]) -> Result<(), SurfaceError> {
    lattice.check(ample)?;
    if !lattice.sq(ample).is_positive() {
        return Err(AmpleRejection::NotPositiveSquare.into());
    }
    let perp = lattice.orthogonal_complement(ample)?;
    let walls = enum_fixed_norm_negdef(&perp.gram, &BigInt::from(-2))?;
    if !walls.is_empty() {
        let mut all: Vec<DivisorClass> = walls
            .iter()
            .map(|k| {
                k.coords()
                    .iter()
                    .zip(&perp.basis)
                    .fold(DivisorClass::zero(lattice.rank()), |acc, (ki, b)| &acc + &b.scaled(ki))
            })
            .collect();
        all.sort();
        return Err(AmpleRejection::RootOnWall(all.swap_remove(0)).into());
    }
    for c in nodal {
        lattice.check(c)?;
        if !lattice.ip(ample, c).is_positive() {
            return Err(AmpleRejection::NegativeOnNodal(c.clone()).into());
        }
    }
    Ok(())
}

/// A validated surface model.
#[derive(Debug, Clone)]
pub struct SurfaceContext {
    kind: SurfaceKind,
    lattice: Lattice,
    ample: DivisorClass,
    mode: EnriquesMode,
    /// Pencils whose even multiples use the opposite torsion labelling.
    flipped_half_fibers: Vec<DivisorClass>,
    roots: RootQuery,
}

impl SurfaceContext {
    pub fn new(
        kind: SurfaceKind,
        lattice: Lattice,
        ample: DivisorClass,
        mode: EnriquesMode,
    ) -> Result<Self, SurfaceError> {
        let sig = lattice.signature();
        if !sig.is_hyperbolic() {
            return Err(SurfaceError::NotHyperbolic(sig));
        }
        let nodal: &[DivisorClass] = match (&mode, kind) {
            (EnriquesMode::DeclaredNodal(list), SurfaceKind::Enriques) => list,
            (EnriquesMode::DeclaredNodal(_), SurfaceKind::K3) => return Err(SurfaceError::EnriquesOnly),
            (EnriquesMode::Unnodal, _) => &[],
        };
        for c in nodal {
            lattice.check(c)?;
            if lattice.sq(c) != BigInt::from(-2) {
                return Err(SurfaceError::NodalNotRoot(c.clone()));
            }
        }
        validate_ample(&lattice, &ample, nodal)?;
        let roots = RootQuery::new(&lattice, &ample)?;
        let mode = match mode {
            EnriquesMode::DeclaredNodal(mut list) => {
                list.sort();
                list.dedup();
                EnriquesMode::DeclaredNodal(list)
            }
            m => m,
        };
        Ok(Self {
            kind,
            lattice,
            ample,
            mode,
            flipped_half_fibers: Vec::new(),
            roots,
        })
    }

    pub fn k3(lattice: Lattice, ample: DivisorClass) -> Result<Self, SurfaceError> {
        Self::new(SurfaceKind::K3, lattice, ample, EnriquesMode::Unnodal)
    }

    pub fn enriques(lattice: Lattice, ample: DivisorClass, mode: EnriquesMode) -> Result<Self, SurfaceError> {
        Self::new(SurfaceKind::Enriques, lattice, ample, mode)
    }

    /// Overrides the half-fiber torsion convention for the pencil of the
    /// primitive isotropic class `pencil`: for even `n`, the bundle `n E`
    /// with torsion bit `b` is treated as if it carried bit `1 - b`.
    pub fn with_flipped_half_fiber(mut self, pencil: DivisorClass) -> Result<Self, SurfaceError> {
        if self.kind != SurfaceKind::Enriques {
            return Err(SurfaceError::EnriquesOnly);
        }
        self.lattice.check(&pencil)?;
        let ok = !pencil.is_zero()
            && pencil.divisibility().is_one()
            && self.lattice.sq(&pencil).is_zero()
            && self.degree(&pencil).is_positive();
        if !ok {
            return Err(SurfaceError::BadHalfFiber(pencil));
        }
        if !self.flipped_half_fibers.contains(&pencil) {
            self.flipped_half_fibers.push(pencil);
            self.flipped_half_fibers.sort();
        }
        Ok(self)
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn chi_o(&self) -> BigInt {
        self.kind.chi_o()
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn ample(&self) -> &DivisorClass {
        &self.ample
    }

    pub fn mode(&self) -> &EnriquesMode {
        &self.mode
    }

    pub fn root_query(&self) -> &RootQuery {
        &self.roots
    }

    pub fn declared_nodal(&self) -> &[DivisorClass] {
        match &self.mode {
            EnriquesMode::DeclaredNodal(list) => list,
            EnriquesMode::Unnodal => &[],
        }
    }

    pub fn flipped_half_fibers(&self) -> &[DivisorClass] {
        &self.flipped_half_fibers
    }

    /// True when answers depend on the completeness of the declared nodal list.
    pub fn is_conditional(&self) -> bool {
        self.kind == SurfaceKind::Enriques && matches!(self.mode, EnriquesMode::DeclaredNodal(_))
    }

    /// Enriques model whose lattice is not even unimodular of rank 10.
    pub fn is_nonstandard_enriques(&self) -> bool {
        self.kind == SurfaceKind::Enriques && (self.lattice.rank() != 10 || !self.lattice.determinant().abs().is_one())
    }

    pub fn degree(&self, v: &DivisorClass) -> BigInt {
        self.lattice.ip(v, &self.ample)
    }

    /// Validates rank and the K3 torsion restriction.
    pub fn check_bundle(&self, l: &LineBundleClass) -> Result<(), SurfaceError> {
        self.lattice.check(&l.cls)?;
        if l.torsion && self.kind == SurfaceKind::K3 {
            return Err(SurfaceError::TorsionOnK3);
        }
        Ok(())
    }

    /// Riemann-Roch: `chi(L) = L^2 / 2 + chi(O_X)`.
    pub fn euler_char(&self, l: &LineBundleClass) -> BigInt {
        self.lattice.sq(&l.cls) / 2 + self.chi_o()
    }

    /// `K_X - L`.
    pub fn serre_dual(&self, l: &LineBundleClass) -> LineBundleClass {
        let torsion = match self.kind {
            SurfaceKind::K3 => false,
            SurfaceKind::Enriques => !l.torsion,
        };
        LineBundleClass::new(-&l.cls, torsion)
    }

    /// `h^2(L) = h^0(K_X - L)` for `L` effective or numerically trivial.
    pub fn h2(&self, l: &LineBundleClass) -> Result<BigInt, SurfaceError> {
        self.check_bundle(l)?;
        if l.cls.is_zero() {
            let dual = self.serre_dual(l);
            return Ok(if dual.torsion { BigInt::zero() } else { BigInt::one() });
        }
        match self.is_effective(l) {
            Effectivity::Effective => Ok(BigInt::zero()),
            Effectivity::NotEffective => Err(SurfaceError::NotEffective(l.clone())),
            Effectivity::Undecidable => Err(SurfaceError::Undecidable(l.clone())),
        }
    }

    pub fn is_effective(&self, l: &LineBundleClass) -> Effectivity {
        if l.cls.is_zero() {
            return if l.torsion {
                Effectivity::NotEffective
            } else {
                Effectivity::Effective
            };
        }
        let norm = self.lattice.sq(&l.cls);
        let degree = self.degree(&l.cls);
        if !norm.is_negative() {
            assert!(
                !degree.is_zero(),
                "nonzero class {} of square {norm} orthogonal to the ample class",
                l.cls
            );
            return if degree.is_positive() {
                Effectivity::Effective
            } else {
                Effectivity::NotEffective
            };
        }
        if !degree.is_positive() {
            return Effectivity::NotEffective;
        }
        let is_root = norm == BigInt::from(-2);
        match (self.kind, &self.mode) {
            (SurfaceKind::K3, _) if is_root => Effectivity::Effective,
            (SurfaceKind::K3, _) => Effectivity::Undecidable,
            (SurfaceKind::Enriques, EnriquesMode::Unnodal) if is_root => Effectivity::NotEffective,
            (SurfaceKind::Enriques, EnriquesMode::Unnodal) => Effectivity::Undecidable,
            (SurfaceKind::Enriques, EnriquesMode::DeclaredNodal(list)) => {
                if !l.torsion && nodal_combination(&self.lattice, &self.ample, list, &l.cls).is_some() {
                    Effectivity::Effective
                } else {
                    Effectivity::Undecidable
                }
            }
        }
    }

    /// Effective roots of degree `d`, sorted canonically.
    pub fn effective_roots_of_degree(&self, d: &BigInt) -> Result<Vec<DivisorClass>, SurfaceError> {
        match (self.kind, &self.mode) {
            (SurfaceKind::K3, _) => Ok(self.roots.roots_of_degree(d)?),
            (SurfaceKind::Enriques, EnriquesMode::Unnodal) => Ok(Vec::new()),
            (SurfaceKind::Enriques, EnriquesMode::DeclaredNodal(list)) => Ok(self
                .roots
                .roots_of_degree(d)?
                .into_iter()
                .filter(|r| nodal_combination(&self.lattice, &self.ample, list, r).is_some())
                .collect()),
        }
    }

    /// The minimal-degree effective root of degree at most `max_degree`
    /// pairing negatively with `cls`, ties broken canonically.
    pub fn min_negative_effective_root(
        &self,
        cls: &DivisorClass,
        max_degree: &BigInt,
    ) -> Result<Option<(DivisorClass, BigInt)>, SurfaceError> {
        if self.kind == SurfaceKind::Enriques && self.mode == EnriquesMode::Unnodal {
            return Ok(None);
        }
        let mut d = BigInt::one();
        while &d <= max_degree {
            for r in self.effective_roots_of_degree(&d)? {
                let p = self.lattice.ip(&r, cls);
                if p.is_negative() {
                    return Ok(Some((r, p)));
                }
            }
            d += 1;
        }
        Ok(None)
    }

    /// Nef test for an effective class of nonnegative square. Every effective
    /// root pairing negatively with `L` is a fixed component of `|L|`, so its
    /// degree is at most `pair(L, H)` and the search below is exhaustive.
    pub fn is_nef(&self, l: &LineBundleClass) -> Result<NefStatus, SurfaceError> {
        self.is_nef_bounded(l, None)
    }

    /// As [`Self::is_nef`], optionally capping the searched degree.
    pub fn is_nef_bounded(&self, l: &LineBundleClass, cap: Option<&BigInt>) -> Result<NefStatus, SurfaceError> {
        self.require_effective_nonnegative(l)?;
        let mut bound = self.degree(&l.cls);
        if let Some(cap) = cap {
            bound = bound.min(cap.clone());
        }
        let violator = self.min_negative_effective_root(&l.cls, &bound)?;
        Ok(NefStatus {
            nef: violator.is_none(),
            violator,
        })
    }

    pub(crate) fn require_effective_nonnegative(&self, l: &LineBundleClass) -> Result<(), SurfaceError> {
        self.check_bundle(l)?;
        match self.is_effective(l) {
            Effectivity::Effective => {}
            Effectivity::NotEffective => return Err(SurfaceError::NotEffective(l.clone())),
            Effectivity::Undecidable => return Err(SurfaceError::Undecidable(l.clone())),
        }
        if self.lattice.sq(&l.cls).is_negative() {
            return Err(SurfaceError::NegativeSquare(l.clone()));
        }
        Ok(())
    }

    /// Torsion bit of `n E` after applying any half-fiber override for `E`.
    pub(crate) fn effective_torsion_bit(&self, pencil: &DivisorClass, n: &BigInt, torsion: bool) -> bool {
        if n.is_even() && self.flipped_half_fibers.contains(pencil) {
            !torsion
        } else {
            torsion
        }
    }
}

/// Nonnegative multiplicities expressing `target` as a combination of the
/// given classes, each of positive degree. The search is bounded by the
/// degree of `target`.
pub(crate) fn nodal_combination(
    lattice: &Lattice,
    ample: &DivisorClass,
    nodal: &[DivisorClass],
    target: &DivisorClass,
) -> Option<Vec<BigInt>> {
    let degrees: Vec<BigInt> = nodal.iter().map(|c| lattice.ip(c, ample)).collect();
    let mut mult = vec![BigInt::zero(); nodal.len()];
    fn search(
        i: usize,
        rest: &DivisorClass,
        nodal: &[DivisorClass],
        degrees: &[BigInt],
        lattice: &Lattice,
        ample: &DivisorClass,
        mult: &mut Vec<BigInt>,
    ) -> bool {
        if rest.is_zero() {
            return true;
        }
        if i == nodal.len() {
            return false;
        }
        let remaining = lattice.ip(rest, ample);
        if !remaining.is_positive() {
            return false;
        }
        let max = &remaining / &degrees[i];
        let mut k = max.clone();
        loop {
            let next = rest - &nodal[i].scaled(&k);
            mult[i] = k.clone();
            if search(i + 1, &next, nodal, degrees, lattice, ample, mult) {
                return true;
            }
            if k.is_zero() {
                break;
            }
            k -= 1;
        }
        mult[i] = BigInt::zero();
        false
    }
    if search(0, target, nodal, &degrees, lattice, ample, &mut mult) {
        debug_assert!(is_nonnegative(&mult));
        Some(mult)
    } else {
        None
    }
}
