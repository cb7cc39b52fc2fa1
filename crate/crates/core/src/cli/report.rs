//! Machine-readable report schema. Field order is fixed by the struct
//! definitions, so identical inputs serialize to identical bytes.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::instance::{ints, ExactInt};
use crate::lattice::DivisorClass;
use crate::surface::{Effectivity, EnriquesMode, LineBundleClass, SurfaceContext, SurfaceKind};
use crate::vanishing::{H1Case, H1Classification, ReductionChain};

pub const SCHEMA: &str = "h1vanish.report";
pub const SCHEMA_VERSION: u32 = 1;

pub const EXACT_H1_NOTE: &str = "exact h1 via fixed-component reduction";
pub const CONDITIONAL_NOTE: &str = "conditional on nodal completeness";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub schema: String,
    pub version: u32,
    pub command: String,
    pub surface: String,
    pub chi_o: ExactInt,
    pub gram: Vec<Vec<ExactInt>>,
    pub ample: Vec<ExactInt>,
    pub enriques_mode: Option<String>,
    pub nodal_classes: Vec<Vec<ExactInt>>,
    pub nodal_hash: Option<String>,
    pub conditional: bool,
    pub conditional_note: Option<String>,
    pub flipped_half_fibers: Vec<Vec<ExactInt>>,
    pub nonstandard_enriques_lattice: bool,
    pub bounded_search: bool,
    pub max_degree: Option<ExactInt>,
}

impl Header {
    pub fn new(command: &str, ctx: &SurfaceContext, max_degree: Option<&BigInt>) -> Self {
        let nodal = ctx.declared_nodal();
        Header {
            schema: SCHEMA.into(),
            version: SCHEMA_VERSION,
            command: command.into(),
            surface: ctx.kind().to_string(),
            chi_o: ctx.chi_o().into(),
            gram: ctx
                .lattice()
                .gram()
                .iter()
                .map(|r| r.iter().map(ExactInt::from).collect())
                .collect(),
            ample: ints(ctx.ample()),
            enriques_mode: match (ctx.kind(), ctx.mode()) {
                (SurfaceKind::K3, _) => None,
                (SurfaceKind::Enriques, EnriquesMode::Unnodal) => Some("unnodal".into()),
                (SurfaceKind::Enriques, EnriquesMode::DeclaredNodal(_)) => Some("declared_nodal".into()),
            },
            nodal_classes: nodal.iter().map(ints).collect(),
            nodal_hash: ctx.is_conditional().then(|| nodal_hash(nodal)),
            conditional: ctx.is_conditional(),
            conditional_note: ctx.is_conditional().then(|| CONDITIONAL_NOTE.into()),
            flipped_half_fibers: ctx.flipped_half_fibers().iter().map(ints).collect(),
            nonstandard_enriques_lattice: ctx.is_nonstandard_enriques(),
            bounded_search: max_degree.is_some(),
            max_degree: max_degree.map(ExactInt::from),
        }
    }
}

/// SHA-256 over the canonically sorted nodal classes, rendered as
/// `(a,b,..);(c,d,..)`.
pub fn nodal_hash(nodal: &[DivisorClass]) -> String {
    let mut sorted = nodal.to_vec();
    sorted.sort();
    let text = sorted.iter().map(ToString::to_string).collect::<Vec<_>>().join(";");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootPairing {
    pub root: Vec<ExactInt>,
    pub pairing: ExactInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub gamma: Vec<ExactInt>,
    pub pairing: ExactInt,
    pub before: Vec<ExactInt>,
    pub after: Vec<ExactInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: String,
    pub n: Option<ExactInt>,
    pub e: Option<Vec<ExactInt>>,
    pub witness: Option<Vec<ExactInt>>,
    pub witness_pairing: Option<ExactInt>,
}

impl CaseReport {
    pub fn from_case(case: &H1Case) -> Self {
        let mut r = CaseReport {
            case: case.label().into(),
            n: None,
            e: None,
            witness: None,
            witness_pairing: None,
        };
        match case {
            H1Case::Vanishes => {}
            H1Case::CaseI { n, e } | H1Case::CaseII { n, e } => {
                r.n = Some(n.into());
                r.e = Some(ints(e));
            }
            H1Case::CaseIII { witness, pairing } => {
                r.witness = Some(ints(witness));
                r.witness_pairing = Some(pairing.into());
            }
        }
        r
    }
}

pub fn steps(chain: &ReductionChain) -> Vec<StepReport> {
    chain
        .steps
        .iter()
        .map(|s| StepReport {
            gamma: ints(&s.gamma),
            pairing: (&s.pairing).into(),
            before: ints(&s.before.cls),
            after: ints(&s.after.cls),
        })
        .collect()
}

pub fn effectivity_name(e: Effectivity) -> &'static str {
    match e {
        Effectivity::Effective => "effective",
        Effectivity::NotEffective => "not_effective",
        Effectivity::Undecidable => "undecidable",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleReport {
    pub label: String,
    pub coords: Vec<ExactInt>,
    pub torsion: u8,
    pub norm: ExactInt,
    pub degree: ExactInt,
    pub euler_char: ExactInt,
    pub effectivity: String,
    pub nef: Option<bool>,
    pub nef_violator: Option<RootPairing>,
    pub quasi_nef: Option<bool>,
    pub classification: Option<CaseReport>,
    pub h0: Option<ExactInt>,
    pub h1: Option<ExactInt>,
    pub h2: Option<ExactInt>,
    pub h1_method: Option<String>,
    pub reduction: Vec<StepReport>,
    pub final_class: Option<Vec<ExactInt>>,
    pub conditional: bool,
    pub error: Option<String>,
}

impl BundleReport {
    pub fn skeleton(ctx: &SurfaceContext, label: &str, l: &LineBundleClass) -> Self {
        let lat = ctx.lattice();
        BundleReport {
            label: label.into(),
            coords: ints(&l.cls),
            torsion: l.torsion as u8,
            norm: lat.norm(&l.cls).expect("validated rank").into(),
            degree: ctx.degree(&l.cls).into(),
            euler_char: ctx.euler_char(l).into(),
            effectivity: effectivity_name(ctx.is_effective(l)).into(),
            nef: None,
            nef_violator: None,
            quasi_nef: None,
            classification: None,
            h0: None,
            h1: None,
            h2: None,
            h1_method: None,
            reduction: Vec::new(),
            final_class: None,
            conditional: ctx.is_conditional(),
            error: None,
        }
    }

    pub fn fill(&mut self, c: &H1Classification) {
        self.classification = Some(CaseReport::from_case(&c.case));
        self.quasi_nef = Some(!matches!(c.case, H1Case::CaseIII { .. }));
        self.h0 = Some((&c.h0).into());
        self.h1 = Some((&c.h1).into());
        self.h2 = Some((&c.h2).into());
        self.h1_method = Some(match c.case {
            H1Case::CaseIII { .. } => EXACT_H1_NOTE.into(),
            _ => "theorem formula on the nef reduction".into(),
        });
        self.reduction = steps(&c.reduction);
        self.final_class = Some(ints(&c.reduction.final_class.cls));
        self.conditional = c.conditional;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub header: Header,
    pub bundles: Vec<BundleReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEntry {
    pub degree: ExactInt,
    pub root: Vec<ExactInt>,
    pub effectivity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsReport {
    #[serde(flatten)]
    pub header: Header,
    pub roots: Vec<RootEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceReport {
    #[serde(flatten)]
    pub header: Header,
    pub label: String,
    pub bundle: Vec<ExactInt>,
    pub torsion: u8,
    pub steps: Vec<StepReport>,
    pub final_class: Vec<ExactInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropicReport {
    pub n: ExactInt,
    pub e: Vec<ExactInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiNefOutput {
    #[serde(flatten)]
    pub header: Header,
    pub label: String,
    pub bundle: Vec<ExactInt>,
    pub torsion: u8,
    pub quasi_nef: bool,
    pub witness: Option<Vec<ExactInt>>,
    pub isotropic: Option<IsotropicReport>,
    pub classification: CaseReport,
    pub h1: ExactInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchReport {
    pub bundle: Vec<ExactInt>,
    pub torsion: u8,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    #[serde(flatten)]
    pub header: Header,
    pub cap: u32,
    pub checked: usize,
    pub counts: Vec<(String, usize)>,
    pub mismatches: Vec<MismatchReport>,
}

fn coords(v: &[ExactInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn bundle_name(v: &[ExactInt], torsion: u8) -> String {
    if torsion == 1 {
        format!("{}+K", coords(v))
    } else {
        coords(v)
    }
}

fn header_text(out: &mut String, h: &Header) {
    let _ = writeln!(out, "surface: {} (chi(O) = {})", h.surface, h.chi_o);
    let gram: Vec<String> = h.gram.iter().map(|r| coords(r)).collect();
    let _ = writeln!(out, "gram: [{}]", gram.join(", "));
    let _ = writeln!(out, "ample: {}", coords(&h.ample));
    if let Some(mode) = &h.enriques_mode {
        let _ = writeln!(out, "enriques mode: {mode}");
    }
    if let Some(hash) = &h.nodal_hash {
        let _ = writeln!(out, "nodal classes: {} (sha256 {hash})", h.nodal_classes.len());
    }
    if let Some(note) = &h.conditional_note {
        let _ = writeln!(out, "note: results are {note}");
    }
    if h.nonstandard_enriques_lattice {
        let _ = writeln!(out, "warning: lattice is not the rank-10 even unimodular Enriques lattice");
    }
    if let (true, Some(d)) = (h.bounded_search, &h.max_degree) {
        let _ = writeln!(out, "bounded search: root degrees capped at {d}");
    }
}

pub fn analyze_text(r: &AnalyzeReport) -> String {
    let mut out = String::new();
    header_text(&mut out, &r.header);
    for b in &r.bundles {
        let _ = writeln!(out);
        let _ = writeln!(out, "[{}] L = {}", b.label, bundle_name(&b.coords, b.torsion));
        let _ = writeln!(
            out,
            "  L^2 = {}, L.H = {}, chi = {}, {}",
            b.norm, b.degree, b.euler_char, b.effectivity
        );
        if let Some(err) = &b.error {
            let _ = writeln!(out, "  error: {err}");
            continue;
        }
        if let Some(nef) = b.nef {
            let _ = write!(out, "  nef: {nef}");
            if let Some(v) = &b.nef_violator {
                let _ = write!(out, " (violator {} with pairing {})", coords(&v.root), v.pairing);
            }
            let _ = writeln!(out);
        }
        if let Some(q) = b.quasi_nef {
            let _ = writeln!(out, "  quasi-nef: {q}");
        }
        if let Some(c) = &b.classification {
            let _ = write!(out, "  case: {}", c.case);
            if let (Some(n), Some(e)) = (&c.n, &c.e) {
                let _ = write!(out, " (n = {n}, E = {})", coords(e));
            }
            if let (Some(w), Some(p)) = (&c.witness, &c.witness_pairing) {
                let _ = write!(out, " (witness {} with pairing {p})", coords(w));
            }
            let _ = writeln!(out);
        }
        if let (Some(h0), Some(h1), Some(h2)) = (&b.h0, &b.h1, &b.h2) {
            let _ = writeln!(out, "  h0 = {h0}, h1 = {h1}, h2 = {h2}");
        }
        if let Some(m) = &b.h1_method {
            let _ = writeln!(out, "  h1 method: {m}");
        }
        for s in &b.reduction {
            let _ = writeln!(
                out,
                "  reduce: {} - {} = {} (pairing {})",
                coords(&s.before),
                coords(&s.gamma),
                coords(&s.after),
                s.pairing
            );
        }
    }
    out
}

pub fn roots_text(r: &RootsReport) -> String {
    let mut out = String::new();
    header_text(&mut out, &r.header);
    if r.roots.is_empty() {
        let _ = writeln!(out, "no roots");
    }
    for e in &r.roots {
        let _ = writeln!(out, "degree {}: {} [{}]", e.degree, coords(&e.root), e.effectivity);
    }
    out
}

pub fn reduce_text(r: &ReduceReport) -> String {
    let mut out = String::new();
    header_text(&mut out, &r.header);
    let _ = writeln!(out, "[{}] L = {}", r.label, bundle_name(&r.bundle, r.torsion));
    for s in &r.steps {
        let _ = writeln!(
            out,
            "  {} - {} = {} (pairing {})",
            coords(&s.before),
            coords(&s.gamma),
            coords(&s.after),
            s.pairing
        );
    }
    let _ = writeln!(out, "  final nef class: {}", coords(&r.final_class));
    out
}

pub fn quasinef_text(r: &QuasiNefOutput) -> String {
    let mut out = String::new();
    header_text(&mut out, &r.header);
    let _ = writeln!(out, "[{}] L = {}", r.label, bundle_name(&r.bundle, r.torsion));
    let _ = writeln!(out, "  quasi_nef = {}", r.quasi_nef);
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "  witness: {}", coords(w));
    }
    if let Some(iso) = &r.isotropic {
        let _ = writeln!(out, "  isotropic: n = {}, E = {}", iso.n, coords(&iso.e));
    }
    let _ = writeln!(out, "  case: {}, h1 = {}", r.classification.case, r.h1);
    out
}

pub fn oracle_text(r: &OracleReport) -> String {
    let mut out = String::new();
    header_text(&mut out, &r.header);
    let _ = writeln!(out, "cross-validated {} bundles with degree <= {}", r.checked, r.cap);
    for (case, n) in &r.counts {
        let _ = writeln!(out, "  {case}: {n}");
    }
    let _ = writeln!(out, "mismatches: {}", r.mismatches.len());
    for m in &r.mismatches {
        let _ = writeln!(out, "  {}: {}", bundle_name(&m.bundle, m.torsion), m.detail);
    }
    out
}
