//! Scene configuration, read from JSON.

use serde::{Deserialize, Serialize};

use crate::crooked::OracleParams;
use crate::holonomy::{FrickeCoords, Holonomy};
use crate::margulis::{
    cocycle_from_coefficients, linear_path, ray_representative, tangent_cocycle, Cocycle, MuCoords,
    VertexCoefficients, TANGENT_STEP,
};
use crate::minkowski::Vec3;
use crate::{Error, Result};

/// Default sampling seed.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrickeInput {
    #[serde(rename = "ell_A")]
    pub ell_a: f64,
    #[serde(rename = "ell_B")]
    pub ell_b: f64,
    #[serde(rename = "ell_X")]
    pub ell_x: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCocycle {
    #[serde(rename = "u_A")]
    pub u_a: [f64; 3],
    #[serde(rename = "u_X")]
    pub u_x: [f64; 3],
}

/// Straight-line deformation `ℓ(t) = ℓ + t·direction` differentiated at `t0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangentSpec {
    /// `(dℓ_A, dℓ_B, dℓ_X)`.
    pub direction: [f64; 3],
    #[serde(default)]
    pub t0: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_step() -> f64 {
    TANGENT_STEP
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuTarget {
    #[serde(rename = "alpha_A")]
    pub alpha_a: f64,
    #[serde(rename = "alpha_X")]
    pub alpha_x: f64,
    #[serde(rename = "alpha_Y")]
    pub alpha_y: f64,
}

impl From<MuTarget> for MuCoords {
    fn from(m: MuTarget) -> MuCoords {
        MuCoords::new(m.alpha_a, m.alpha_x, m.alpha_y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CocycleSpec {
    Vertices(VertexCoefficients),
    Raw(RawCocycle),
    Ray(u8),
    Tangent(TangentSpec),
    Mu(MuTarget),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Bound on identity residuals.
    pub identity: f64,
    /// Sign decisions for Margulis invariants.
    pub sign: f64,
    /// Slack of the sampling oracles.
    pub oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            identity: 1e-9,
            sign: crate::margulis::SIGN_TOL,
            oracle: 1e-7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub word_depth: usize,
    pub samples: usize,
    pub radius: f64,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub resolve_kissing: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            word_depth: 4,
            samples: 10_000,
            radius: 10.0,
            tolerances: Tolerances::default(),
            seed: DEFAULT_SEED,
            resolve_kissing: false,
        }
    }
}

impl VerifyConfig {
    pub fn oracle(&self) -> OracleParams {
        OracleParams {
            samples: self.samples,
            radius: self.radius,
            tol: self.tolerances.oracle,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub fricke: FrickeInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle_spec: Option<CocycleSpec>,
    #[serde(default)]
    pub verify: VerifyConfig,
}

fn field(name: &str, ok: bool, what: &str, value: impl std::fmt::Display) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} = {value}: {what}")))
    }
}

impl SceneConfig {
    /// Parses and validates; errors carry the JSON line and column or the
    /// offending field.
    pub fn from_json(text: &str) -> Result<SceneConfig> {
        let c: SceneConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.fricke;
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        field(
            "fricke.ell_A",
            finite_nonneg(f.ell_a),
            "must be >= 0",
            f.ell_a,
        )?;
        field(
            "fricke.ell_B",
            finite_nonneg(f.ell_b),
            "must be >= 0",
            f.ell_b,
        )?;
        field(
            "fricke.ell_X",
            f.ell_x.is_finite() && f.ell_x > 0.0,
            "must be > 0",
            f.ell_x,
        )?;
        let v = &self.verify;
        field(
            "verify.radius",
            v.radius.is_finite() && v.radius > 0.0,
            "must be > 0",
            v.radius,
        )?;
        field("verify.samples", v.samples > 0, "must be > 0", v.samples)?;
        let t = &v.tolerances;
        for (n, x) in [
            ("verify.tolerances.identity", t.identity),
            ("verify.tolerances.sign", t.sign),
            ("verify.tolerances.oracle", t.oracle),
        ] {
            field(n, x.is_finite() && x >= 0.0, "must be >= 0", x)?;
        }
        match &self.cocycle_spec {
            Some(CocycleSpec::Ray(r)) => field(
                "cocycle_spec.ray",
                (1..=4).contains(r),
                "must be 1, 2, 3 or 4",
                r,
            ),
            Some(CocycleSpec::Tangent(t)) => field(
                "cocycle_spec.tangent.step",
                t.step.is_finite() && t.step > 0.0,
                "must be > 0",
                t.step,
            ),
            Some(CocycleSpec::Raw(r)) => field(
                "cocycle_spec.raw",
                r.u_a.iter().chain(&r.u_x).all(|x| x.is_finite()),
                "entries must be finite",
                "non-finite",
            ),
            Some(CocycleSpec::Vertices(c)) => field(
                "cocycle_spec.vertices",
                c.to_array().iter().all(|x| x.is_finite()),
                "entries must be finite",
                "non-finite",
            ),
            Some(CocycleSpec::Mu(m)) => field(
                "cocycle_spec.mu",
                [m.alpha_a, m.alpha_x, m.alpha_y]
                    .iter()
                    .all(|x| x.is_finite()),
                "entries must be finite",
                "non-finite",
            ),
            None => Ok(()),
        }
    }

    pub fn fricke_coords(&self) -> Result<FrickeCoords> {
        let f = &self.fricke;
        FrickeCoords::complete(f.ell_a, f.ell_b, f.ell_x)
    }

    pub fn holonomy(&self) -> Result<Holonomy> {
        Holonomy::from_fricke(&self.fricke_coords()?)
    }

    fn base(&self) -> [f64; 3] {
        [self.fricke.ell_a, self.fricke.ell_b, self.fricke.ell_x]
    }

    /// The cocycle named by `cocycle_spec`; `None` for a μ target, which is
    /// resolved by the caller.
    pub fn cocycle(&self, h: &Holonomy) -> Result<Option<Cocycle>> {
        let spec = self
            .cocycle_spec
            .ok_or_else(|| Error::Config("cocycle_spec is required".into()))?;
        Ok(match spec {
            CocycleSpec::Vertices(c) => Some(cocycle_from_coefficients(h, &c)?),
            CocycleSpec::Raw(r) => Some(Cocycle::new(Vec3::from(r.u_a), Vec3::from(r.u_x))),
            CocycleSpec::Ray(k) => Some(ray_representative(h, k)?),
            CocycleSpec::Tangent(t) => {
                let path = linear_path(self.base(), t.direction);
                Some(tangent_cocycle(path, t.t0, t.step)?.cocycle)
            }
            CocycleSpec::Mu(_) => None,
        })
    }
}
