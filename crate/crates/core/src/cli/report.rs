//! Report layout. Field order is the serialization order.

use serde::Serialize;

use super::config::SceneConfig;
use crate::crooked::{SchottkyReport, CERTIFY_TOL, CONTAINS_TOL};
use crate::holonomy::{FrickeCoords, Parity, TraceCoords, DERIVED_TOL, TRACE_TOL};
use crate::lorentz::{IsometryClass, CLASSIFY_TOL, LORENTZ_TOL};
use crate::margulis::{ConeClass, MuCoords, SIGN_TOL, TANGENT_STEP};
use crate::mesh::STEM_SEGMENTS;
use crate::minkowski::Vec3;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub passed: bool,
    pub identities: Identities,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSection>,
    pub provenance: Provenance,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Identities {
    pub fricke: FrickeCoords,
    pub trace_coords: TraceCoords,
    pub in_character_set: bool,
    pub trace_identity_residual: f64,
    pub length_identity_residual: f64,
    /// Largest `|ℓ(g) − ℓ|` over `A, B, X, Y` recomputed from the lifts.
    pub length_roundtrip_residual: f64,
    /// Largest determinant or fixed-vector residual over the word table.
    pub orientability_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub differentiated_trace_residual: Option<f64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundaryInvariants {
    #[serde(rename = "alpha_A")]
    pub alpha_a: f64,
    #[serde(rename = "alpha_B")]
    pub alpha_b: f64,
    #[serde(rename = "alpha_X")]
    pub alpha_x: f64,
    #[serde(rename = "alpha_Y")]
    pub alpha_y: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WordEntry {
    pub word: String,
    pub class: IsometryClass,
    pub parity: Parity,
    /// Absent for elliptic images.
    pub length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<MuCoords>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_invariants: Option<BoundaryInvariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_condition_number: Option<f64>,
    pub elliptic_words: usize,
    pub words: Vec<WordEntry>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Face {
    pub director: Vec3,
    pub vertex: Vec3,
}

#[derive(Clone, Debug, Serialize)]
pub struct DomainSection {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_target: Option<MuCoords>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub built: Option<BuiltDomain>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuiltDomain {
    pub coefficients: crate::margulis::VertexCoefficients,
    pub resolved: bool,
    pub epsilon: f64,
    /// `[p0, pA, pX]`.
    pub vertices: [Vec3; 3],
    pub faces: [Face; 4],
    pub mu_recovered: MuCoords,
    pub mu_error: f64,
    pub schottky: SchottkyReport,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Constants {
    pub derived_tol: f64,
    pub trace_tol: f64,
    pub classify_tol: f64,
    pub lorentz_tol: f64,
    pub sign_tol: f64,
    pub certify_tol: f64,
    pub contains_tol: f64,
    pub tangent_step: f64,
    pub mu_recovery_tol: f64,
    pub stem_segments: usize,
}

/// Bound on `|μ_recovered − μ_target| / (1 + |μ_target|)`.
pub const MU_RECOVERY_TOL: f64 = 1e-6;

impl Constants {
    pub fn current() -> Constants {
        Constants {
            derived_tol: DERIVED_TOL,
            trace_tol: TRACE_TOL,
            classify_tol: CLASSIFY_TOL,
            lorentz_tol: LORENTZ_TOL,
            sign_tol: SIGN_TOL,
            certify_tol: CERTIFY_TOL,
            contains_tol: CONTAINS_TOL,
            tangent_step: TANGENT_STEP,
            mu_recovery_tol: MU_RECOVERY_TOL,
            stem_segments: STEM_SEGMENTS,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub version: &'static str,
    pub seed: u64,
    pub constants: Constants,
    pub config: SceneConfig,
}

impl Provenance {
    pub fn new(config: &SceneConfig) -> Provenance {
        Provenance {
            version: env!("CARGO_PKG_VERSION"),
            seed: config.verify.seed,
            constants: Constants::current(),
            config: *config,
        }
    }
}
