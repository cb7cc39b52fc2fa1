//! Instance documents: JSON with exact decimal integers only.
//!
//! ```json
//! {
//!   "surface": "K3",
//!   "gram": [[0, 1], [1, 0]],
//!   "ample": [1, 2],
//!   "bundles": [{ "label": "L", "coords": [0, 4] }]
//! }
//! ```
//!
//! Enriques documents may add `"enriques_mode": "unnodal" | "declared_nodal"`,
//! `"nodal_classes"` (declared mode only), `"flipped_half_fibers"` (primitive
//! isotropic classes whose even multiples use the opposite torsion labelling)
//! and a per-bundle `"torsion": 0 | 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{DivisorClass, Lattice};
use crate::surface::{EnriquesMode, LineBundleClass, SurfaceContext, SurfaceError, SurfaceKind};

/// An integer read from or written to JSON without passing through floating
/// point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactInt(pub BigInt);

impl<'de> Deserialize<'de> for ExactInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(deserializer)?;
        let text = n.to_string();
        if text.contains(['.', 'e', 'E']) {
            return Err(serde::de::Error::custom(format!("expected an exact integer, found {text}")));
        }
        BigInt::from_str(&text)
            .map(ExactInt)
            .map_err(|_| serde::de::Error::custom(format!("invalid integer {text}")))
    }
}

impl Serialize for ExactInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serde_json::Number::from_str(&self.0.to_string())
            .expect("decimal integer is a JSON number")
            .serialize(serializer)
    }
}

impl From<&BigInt> for ExactInt {
    fn from(b: &BigInt) -> Self {
        Self(b.clone())
    }
}

impl From<BigInt> for ExactInt {
    fn from(b: BigInt) -> Self {
        Self(b)
    }
}

impl fmt::Display for ExactInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn ints(v: &DivisorClass) -> Vec<ExactInt> {
    v.coords().iter().map(ExactInt::from).collect()
}

fn class(v: &[ExactInt]) -> DivisorClass {
    DivisorClass::new(v.iter().map(|x| x.0.clone()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum SurfaceName {
    K3,
    Enriques,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    Unnodal,
    DeclaredNodal,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleEntry {
    pub label: String,
    pub coords: Vec<ExactInt>,
    #[serde(default)]
    pub torsion: Option<ExactInt>,
}

/// The raw document as written.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub surface: SurfaceName,
    pub gram: Vec<Vec<ExactInt>>,
    pub ample: Vec<ExactInt>,
    #[serde(default)]
    pub enriques_mode: Option<ModeName>,
    #[serde(default)]
    pub nodal_classes: Option<Vec<Vec<ExactInt>>>,
    #[serde(default)]
    pub flipped_half_fibers: Option<Vec<Vec<ExactInt>>>,
    #[serde(default)]
    pub bundles: Vec<BundleEntry>,
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

impl InstanceError {
    fn invalid(field: impl Into<String>, message: impl fmt::Display) -> Self {
        InstanceError::Invalid {
            field: field.into(),
            message: message.to_string(),
        }
    }

    /// 2 for syntax errors, 3 for validation failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            InstanceError::Parse(_) => 2,
            InstanceError::Invalid { .. } => 3,
        }
    }
}

/// A parsed and validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub context: SurfaceContext,
    pub bundles: Vec<(String, LineBundleClass)>,
}

impl Instance {
    pub fn bundle(&self, label: &str) -> Option<&LineBundleClass> {
        self.bundles.iter().find(|(l, _)| l == label).map(|(_, b)| b)
    }
}

/// Strict syntactic parse.
pub fn parse_instance(text: &str) -> Result<InstanceDocument, InstanceError> {
    Ok(serde_json::from_str(text)?)
}

impl InstanceDocument {
    pub fn validate(&self) -> Result<Instance, InstanceError> {
        let gram: Vec<Vec<BigInt>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|x| x.0.clone()).collect())
            .collect();
        let lattice = Lattice::new(gram).map_err(|e| InstanceError::invalid("gram", e))?;
        let rank = lattice.rank();
        let check_len = |field: String, v: &[ExactInt]| {
            if v.len() == rank {
                Ok(())
            } else {
                Err(InstanceError::invalid(
                    field,
                    format!("expected {rank} coordinates, found {}", v.len()),
                ))
            }
        };
        check_len("ample".into(), &self.ample)?;

        let kind = match self.surface {
            SurfaceName::K3 => SurfaceKind::K3,
            SurfaceName::Enriques => SurfaceKind::Enriques,
        };
        if kind == SurfaceKind::K3 {
            for (field, present) in [
                ("enriques_mode", self.enriques_mode.is_some()),
                ("nodal_classes", self.nodal_classes.is_some()),
                ("flipped_half_fibers", self.flipped_half_fibers.is_some()),
            ] {
                if present {
                    return Err(InstanceError::invalid(field, "only allowed for Enriques surfaces"));
                }
            }
        }
        let mode = match (self.enriques_mode, &self.nodal_classes) {
            (Some(ModeName::DeclaredNodal), Some(list)) => {
                for (i, c) in list.iter().enumerate() {
                    check_len(format!("nodal_classes[{i}]"), c)?;
                }
                EnriquesMode::DeclaredNodal(list.iter().map(|c| class(c)).collect())
            }
            (Some(ModeName::DeclaredNodal), None) => {
                return Err(InstanceError::invalid("nodal_classes", "required in declared_nodal mode"))
            }
            (_, Some(_)) => {
                return Err(InstanceError::invalid("nodal_classes", "only allowed in declared_nodal mode"))
            }
            (_, None) => EnriquesMode::Unnodal,
        };

        let mut context = SurfaceContext::new(kind, lattice, class(&self.ample), mode).map_err(|e| {
            let field = match &e {
                SurfaceError::NotHyperbolic(_) => "gram",
                SurfaceError::NodalNotRoot(_) => "nodal_classes",
                _ => "ample",
            };
            InstanceError::invalid(field, e)
        })?;
        for (i, pencil) in self.flipped_half_fibers.iter().flatten().enumerate() {
            let field = format!("flipped_half_fibers[{i}]");
            check_len(field.clone(), pencil)?;
            context = context
                .with_flipped_half_fiber(class(pencil))
                .map_err(|e| InstanceError::invalid(field, e))?;
        }

        let mut bundles: Vec<(String, LineBundleClass)> = Vec::with_capacity(self.bundles.len());
        for (i, b) in self.bundles.iter().enumerate() {
            if bundles.iter().any(|(l, _)| l == &b.label) {
                return Err(InstanceError::invalid(
                    format!("bundles[{i}].label"),
                    format!("duplicate label {}", b.label),
                ));
            }
            check_len(format!("bundles[{i}].coords"), &b.coords)?;
            let torsion = match &b.torsion {
                None => false,
                Some(t) if t.0.is_zero() => false,
                Some(t) if t.0.is_one() => true,
                Some(t) => {
                    return Err(InstanceError::invalid(
                        format!("bundles[{i}].torsion"),
                        format!("expected 0 or 1, found {t}"),
                    ))
                }
            };
            let bundle = LineBundleClass::new(class(&b.coords), torsion);
            context
                .check_bundle(&bundle)
                .map_err(|e| InstanceError::invalid(format!("bundles[{i}].torsion"), e))?;
            bundles.push((b.label.clone(), bundle));
        }
        Ok(Instance { context, bundles })
    }
}

/// Parse and validate in one go.
pub fn load_instance(text: &str) -> Result<Instance, InstanceError> {
    parse_instance(text)?.validate()
}
