//! The three subcommands. `Err` is an input error; verification failures
//! are reported with `passed = false`.

use std::path::{Path, PathBuf};

use super::config::{CocycleSpec, SceneConfig};
use super::report::{
    BoundaryInvariants, BuiltDomain, Classification, DomainSection, Face, Identities, Provenance,
    Report, WordEntry, MU_RECOVERY_TOL,
};
use crate::crooked::{kissing_resolve, tame_domain, verify_schottky, CrookedDomain};
use crate::holonomy::{length_from_element, Generator, Holonomy, Word};
use crate::lorentz::{ad_to_lorentz, IsometryClass};
use crate::margulis::{
    classify_signs, coefficients_for_mu, differentiated_trace_residual, mu_condition_number,
    mu_inequality_terms, relation_residual, AffineDeformation, ConeClass, MuCoords,
};
use crate::mesh::export_mesh;
use crate::{Error, Result};

const WORD_GENERATORS: [Generator; 2] = [Generator::A, Generator::X];

fn words(cfg: &SceneConfig) -> Vec<Word> {
    Word::reduced_words(&WORD_GENERATORS, cfg.verify.word_depth)
}

fn identities(cfg: &SceneConfig, h: &Holonomy, table: &[Word]) -> Result<Identities> {
    let f = cfg.fricke_coords()?;
    let t = h.trace_coords();
    let expected = [
        (Generator::A, f.ell_a),
        (Generator::B, f.ell_b),
        (Generator::X, f.ell_x),
        (Generator::Y, f.ell_y),
    ];
    let mut roundtrip: f64 = 0.0;
    for (g, ell) in expected {
        let (_, l) = length_from_element(h.generator(g))?;
        roundtrip = roundtrip.max((l - ell).abs());
    }
    let orientability = table
        .iter()
        .map(|w| {
            let (d, e) = ad_to_lorentz(&h.evaluate(w)).orientability_residuals();
            d.max(e)
        })
        .fold(0.0, f64::max);
    Ok(Identities {
        fricke: f,
        trace_coords: t,
        in_character_set: t.in_character_set(),
        trace_identity_residual: t.identity_residual(),
        length_identity_residual: f.length_identity_residual(),
        length_roundtrip_residual: roundtrip,
        orientability_residual: orientability,
        relation_residual: None,
        differentiated_trace_residual: None,
    })
}

fn identities_pass(cfg: &SceneConfig, id: &Identities) -> bool {
    let tol = cfg.verify.tolerances.identity;
    let mut ok = id.in_character_set
        && id.trace_identity_residual < tol
        && id.length_identity_residual < tol
        && id.length_roundtrip_residual < tol
        && id.orientability_residual < tol;
    if let Some(r) = id.differentiated_trace_residual {
        ok &= r < tol;
    }
    ok
}

fn word_table(h: &Holonomy, d: Option<&AffineDeformation>, table: &[Word]) -> Vec<WordEntry> {
    table
        .iter()
        .map(|w| {
            let g = h.evaluate(w);
            let class = crate::lorentz::classify_lift(&g).class;
            let length = length_from_element(&g).ok().map(|(_, l)| l);
            let alpha = match (d, class) {
                (_, IsometryClass::Elliptic) | (None, _) => None,
                (Some(d), _) => d.margulis_invariant(w).ok(),
            };
            WordEntry {
                word: w.to_string(),
                class,
                parity: g.parity(),
                length,
                alpha,
            }
        })
        .collect()
}

fn classification(
    h: &Holonomy,
    d: Option<&AffineDeformation>,
    table: &[Word],
) -> Result<Classification> {
    let words = word_table(h, d, table);
    let elliptic_words = words
        .iter()
        .filter(|w| w.class == IsometryClass::Elliptic)
        .count();
    let (mu, boundary, cone) = match d {
        Some(d) => {
            let [alpha_a, alpha_b, alpha_x, alpha_y] = d.boundary_invariants()?;
            (
                Some(d.mu_coords()?),
                Some(BoundaryInvariants {
                    alpha_a,
                    alpha_b,
                    alpha_x,
                    alpha_y,
                }),
                Some(crate::margulis::cone_membership(d)?),
            )
        }
        None => (None, None, None),
    };
    Ok(Classification {
        mu,
        boundary_invariants: boundary,
        cone,
        mu_condition_number: d.map(|_| mu_condition_number(h)).transpose()?,
        elliptic_words,
        words,
    })
}

/// Trace coordinates, lengths, word classification and identity residuals.
pub fn cmd_holonomy(cfg: &SceneConfig) -> Result<Report> {
    let h = cfg.holonomy()?;
    let table = words(cfg);
    let id = identities(cfg, &h, &table)?;
    Ok(Report {
        command: "holonomy",
        passed: identities_pass(cfg, &id),
        identities: id,
        classification: Some(classification(&h, None, &table)?),
        domain: None,
        provenance: Provenance::new(cfg),
    })
}

fn deformation(cfg: &SceneConfig, h: &Holonomy) -> Result<AffineDeformation> {
    let u = match cfg.cocycle_spec {
        Some(CocycleSpec::Mu(m)) => crate::margulis::cocycle_with_mu(h, &m.into())?,
        _ => cfg
            .cocycle(h)?
            .expect("every non-μ variant names a cocycle"),
    };
    Ok(AffineDeformation::new(h.clone(), u))
}

/// μ coordinates, invariants over the word table, relation residuals and
/// cone classification.
pub fn cmd_invariants(cfg: &SceneConfig) -> Result<Report> {
    let h = cfg.holonomy()?;
    let d = deformation(cfg, &h)?;
    let table = words(cfg);
    let mut id = identities(cfg, &h, &table)?;
    id.relation_residual = Some(relation_residual(&d)?);
    id.differentiated_trace_residual = Some(differentiated_trace_residual(&d));
    Ok(Report {
        command: "invariants",
        passed: identities_pass(cfg, &id),
        identities: id,
        classification: Some(classification(&h, Some(&d), &table)?),
        domain: None,
        provenance: Provenance::new(cfg),
    })
}

const TERM_NAMES: [&str; 4] = ["alpha_A", "alpha_X", "alpha_Y", "cone gap"];

fn cone_failure(mu: &MuCoords, terms: &[f64; 4], tol: f64) -> String {
    let bad: Vec<String> = TERM_NAMES
        .iter()
        .zip(terms)
        .filter(|(_, &t)| !(t > tol))
        .map(|(n, t)| format!("{n} = {t:e}"))
        .collect();
    format!(
        "mu = ({}, {}, {}) is not in the open positive cone: {} not strictly positive",
        mu.alpha_a,
        mu.alpha_x,
        mu.alpha_y,
        bad.join(", ")
    )
}

enum Built {
    Domain(Box<CrookedDomain>, bool),
    Failed(String),
}

fn build(cfg: &SceneConfig, h: &Holonomy, mu: &Option<MuCoords>) -> Result<Built> {
    let outcome = match (cfg.cocycle_spec, mu) {
        (Some(CocycleSpec::Vertices(c)), _) => {
            if c.first_nonpositive().is_none() {
                tame_domain(h, &c).map(|d| (d, false))
            } else if cfg.verify.resolve_kissing {
                kissing_resolve(h, &c).map(|d| (d, true))
            } else {
                tame_domain(h, &c).map(|d| (d, false))
            }
        }
        (_, Some(mu)) => {
            let f = cfg.fricke_coords()?;
            let terms = mu_inequality_terms(mu, &f);
            if classify_signs(&terms, cfg.verify.tolerances.sign) != ConeClass::InteriorPlus {
                return Ok(Built::Failed(cone_failure(
                    mu,
                    &terms,
                    cfg.verify.tolerances.sign,
                )));
            }
            coefficients_for_mu(h, mu)
                .and_then(|c| kissing_resolve(h, &c))
                .map(|d| (d, true))
        }
        (_, None) => unreachable!("a μ target is computed for non-vertex specs"),
    };
    match outcome {
        Ok((d, resolved)) => Ok(Built::Domain(Box::new(d), resolved)),
        Err(
            e @ (Error::Kissing { .. }
            | Error::KissingUnresolved(_)
            | Error::OutsideCone(_)
            | Error::NotDisjoint(..)),
        ) => Ok(Built::Failed(e.to_string())),
        Err(e) => Err(e),
    }
}

/// Builds the crooked domain, verifies it, and writes one mesh per face
/// into `mesh_dir` when given. Returns the report and the mesh paths.
pub fn cmd_domain(cfg: &SceneConfig, mesh_dir: Option<&Path>) -> Result<(Report, Vec<PathBuf>)> {
    let h = cfg.holonomy()?;
    let mu_target = match cfg.cocycle_spec {
        Some(CocycleSpec::Mu(m)) => Some(MuCoords::from(m)),
        Some(CocycleSpec::Vertices(_)) => None,
        _ => Some(deformation(cfg, &h)?.mu_coords()?),
    };
    let table = words(cfg);
    let id = identities(cfg, &h, &table)?;
    let mut paths = Vec::new();
    let (section, classification, domain_ok) = match build(cfg, &h, &mu_target)? {
        Built::Failed(msg) => (
            DomainSection {
                status: "failed",
                error: Some(msg),
                mu_target,
                built: None,
            },
            None,
            false,
        ),
        Built::Domain(dom, resolved) => {
            let target = match mu_target {
                Some(m) => m,
                None => AffineDeformation::new(
                    h.clone(),
                    crate::margulis::cocycle_from_coefficients(&h, &dom.coefficients)?,
                )
                .mu_coords()?,
            };
            let recovered = dom.deformation.mu_coords()?;
            let mu_error = (recovered.to_vector() - target.to_vector()).amax()
                / (1.0 + target.to_vector().amax());
            let schottky = verify_schottky(&dom, cfg.verify.word_depth, &cfg.verify.oracle());
            if let Some(dir) = mesh_dir {
                std::fs::create_dir_all(dir).map_err(|e| Error::Io {
                    path: dir.display().to_string(),
                    message: e.to_string(),
                })?;
                for (k, plane) in dom.planes().iter().enumerate() {
                    let p = dir.join(format!("face_{k}.obj"));
                    export_mesh(plane, cfg.verify.radius, &p)?;
                    paths.push(p);
                }
            }
            let ok = schottky.passed && mu_error < MU_RECOVERY_TOL;
            let built = BuiltDomain {
                coefficients: dom.coefficients,
                resolved,
                epsilon: dom.epsilon,
                vertices: dom.vertices,
                faces: dom.faces.map(|f| Face {
                    director: f.director(),
                    vertex: f.vertex(),
                }),
                mu_recovered: recovered,
                mu_error,
                schottky,
            };
            let cls = classification(&h, Some(&dom.deformation), &[])?;
            (
                DomainSection {
                    status: if ok { "passed" } else { "failed" },
                    error: None,
                    mu_target: Some(target),
                    built: Some(built),
                },
                Some(cls),
                ok,
            )
        }
    };
    let passed = identities_pass(cfg, &id) && domain_ok;
    Ok((
        Report {
            command: "domain",
            passed,
            identities: id,
            classification,
            domain: Some(section),
            provenance: Provenance::new(cfg),
        },
        paths,
    ))
}
