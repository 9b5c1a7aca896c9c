//! Fundamental domains bounded by four crooked planes.
//!
//! Vertices `p₀, p_A, p_X` sit in the quadrants `𝒬₀, 𝒬_A, 𝒬_X`. The
//! deformation acts with origin `p₀`, so `ρ(A)(p₀) = p_A` and
//! `ρ(X)(p₀) = p_X`. The preimages `ρ(A)⁻¹C_A` and `ρ(X)⁻¹C_X` then share
//! the vertex `p₀`; separating them by `q_i = p₀ + ε(x⁻(u_i) − x⁺(u_i))`
//! gives the faces
//!
//! | face | halfspace          |
//! |------|--------------------|
//! | 0    | `H(v_A, ρ(A)q₁)`   |
//! | 1    | `H(u₁, q₁)`        |
//! | 2    | `H(v_X, ρ(X)q₂)`   |
//! | 3    | `H(u₂, q₂)`        |
//!
//! with `u₁ = −A⁻¹v_A`, `u₂ = X⁻¹v_X`, and `ρ(A)` pairing face 1 with face 0,
//! `ρ(X)` pairing face 3 with face 2.

use rand::Rng;
use rayon::prelude::*;

use super::oracle::{rng_for, sample_plane, OracleParams};
use super::{disjoint_sufficient, CrookedHalfspace, CrookedPlane, Quadrant, Verdict};
use crate::holonomy::{Generator, Holonomy, Word};
use crate::lorentz::{
    ad_to_lorentz, ideal_quadrilateral, null_frame, side_normal, IdealQuadrilateral,
};
use crate::margulis::{
    cocycle_from_vertices, resolve_coefficients, AffineDeformation, VertexCoefficients,
};
use crate::minkowski::Vec3;
use crate::{Error, Result};

/// Initial separation, relative to the vertex scale.
const EPS0: f64 = 1e-3;
/// Upper bound on interior samples kept for the word check.
const MAX_INTERIOR: usize = 512;

/// Directors and quadrants attached to the ideal quadrilateral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardConfiguration {
    pub quad: IdealQuadrilateral,
    pub v0: Vec3,
    pub va: Vec3,
    pub vx: Vec3,
    pub q0: Quadrant,
    pub qa: Quadrant,
    pub qx: Quadrant,
}

pub fn standard_configuration(h: &Holonomy) -> Result<StandardConfiguration> {
    let q = ideal_quadrilateral(h)?;
    Ok(StandardConfiguration {
        quad: q,
        v0: side_normal(&q.xa_minus, &q.x_neg_xb_plus)?,
        va: side_normal(&q.a_xb_plus, &q.xa_minus)?,
        vx: side_normal(&q.x_neg_xb_plus, &q.a_xb_plus)?,
        q0: Quadrant::new(q.xa_minus, -q.x_neg_xb_plus),
        qa: Quadrant::new(q.a_xb_plus, -q.xa_minus),
        qx: Quadrant::new(q.x_neg_xb_plus, -q.a_xb_plus),
    })
}

/// Options for domain construction; `None` uses the defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DomainOptions {
    /// Fixed vertex separation instead of the doubling search.
    pub epsilon: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct CrookedDomain {
    pub deformation: AffineDeformation,
    pub coefficients: VertexCoefficients,
    pub config: StandardConfiguration,
    /// `[p₀, p_A, p_X]`.
    pub vertices: [Vec3; 3],
    pub epsilon: f64,
    pub faces: [CrookedHalfspace; 4],
    /// `(generator, source, target)`: the generator maps face `source` onto
    /// the closure of the complement of face `target`.
    pub pairing: [(Generator, usize, usize); 2],
}

impl CrookedDomain {
    pub fn planes(&self) -> [CrookedPlane; 4] {
        self.faces.map(|f| *f.boundary())
    }

    /// A copy with the generators attached to the wrong face pairs.
    pub fn with_swapped_pairing(&self) -> CrookedDomain {
        CrookedDomain {
            pairing: [(Generator::A, 3, 0), (Generator::X, 1, 2)],
            ..self.clone()
        }
    }

    /// Certificates for the six pairs of faces.
    pub fn certificates(&self) -> Vec<(usize, usize, super::DisjointnessCertificate)> {
        let planes = self.planes();
        pairs()
            .map(|(i, j)| (i, j, disjoint_sufficient(&planes[i], &planes[j])))
            .collect()
    }
}

fn pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j)))
}

fn faces_for(
    d: &AffineDeformation,
    cfg: &StandardConfiguration,
    p0: &Vec3,
    eps: f64,
) -> Result<[CrookedHalfspace; 4]> {
    let la = ad_to_lorentz(d.holonomy().a());
    let lx = ad_to_lorentz(d.holonomy().x());
    let u1 = -la.inverse().apply(&cfg.va);
    let u2 = lx.inverse().apply(&cfg.vx);
    let bump = |u: &Vec3| -> Result<Vec3> {
        let (m, p) = null_frame(u)?;
        Ok(p0 + eps * (m - p))
    };
    let (q1, q2) = (bump(&u1)?, bump(&u2)?);
    let ra = d.affine_map(&Word::generator(Generator::A));
    let rx = d.affine_map(&Word::generator(Generator::X));
    Ok([
        CrookedHalfspace::new(cfg.va, ra.apply(&q1))?,
        CrookedHalfspace::new(u1, q1)?,
        CrookedHalfspace::new(cfg.vx, rx.apply(&q2))?,
        CrookedHalfspace::new(u2, q2)?,
    ])
}

fn first_uncertified(faces: &[CrookedHalfspace; 4]) -> Option<(usize, usize, f64)> {
    let planes = faces.map(|f| *f.boundary());
    pairs().find_map(|(i, j)| {
        let c = disjoint_sufficient(&planes[i], &planes[j]);
        (c.verdict != Verdict::Disjoint).then_some((i, j, c.margin))
    })
}

/// Separates the two preimage planes sharing the vertex `p₀`, doubling `ε`
/// from `EPS0·scale` until all six pairs are certified.
pub fn separate_vertices(
    d: &AffineDeformation,
    cfg: &StandardConfiguration,
    p0: &Vec3,
    scale: f64,
) -> Result<(f64, [CrookedHalfspace; 4])> {
    let mut eps = EPS0 * scale;
    let mut last = None;
    while eps <= scale {
        let faces = faces_for(d, cfg, p0, eps)?;
        match first_uncertified(&faces) {
            None => return Ok((eps, faces)),
            Some(bad) => last = Some(bad),
        }
        eps *= 2.0;
    }
    let (i, j, m) = last.unwrap_or((0, 0, f64::NAN));
    Err(Error::KissingUnresolved(format!(
        "faces {i} and {j} remain uncertified (margin {m:e}) for every separation up to {scale:e}"
    )))
}

/// The crooked domain of strictly positive vertex coefficients.
pub fn tame_domain(h: &Holonomy, c: &VertexCoefficients) -> Result<CrookedDomain> {
    tame_domain_with(h, c, DomainOptions::default())
}

pub fn tame_domain_with(
    h: &Holonomy,
    c: &VertexCoefficients,
    opts: DomainOptions,
) -> Result<CrookedDomain> {
    if let Some((name, value)) = c.first_nonpositive() {
        return Err(Error::Kissing { name, value });
    }
    let cfg = standard_configuration(h)?;
    let [p0, pa, px] = c.vertices(&cfg.quad);
    let u = cocycle_from_vertices(&p0, &pa, &px);
    let d = AffineDeformation::with_origin(h.clone(), u, p0);
    let scale = [p0, pa, px]
        .iter()
        .map(|p| p.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let (epsilon, faces) = match opts.epsilon {
        Some(eps) => {
            let faces = faces_for(&d, &cfg, &p0, eps)?;
            if let Some((i, j, m)) = first_uncertified(&faces) {
                return Err(Error::NotDisjoint(i, j, m));
            }
            (eps, faces)
        }
        None => separate_vertices(&d, &cfg, &p0, scale)?,
    };
    Ok(CrookedDomain {
        deformation: d,
        coefficients: *c,
        config: cfg,
        vertices: [p0, pa, px],
        epsilon,
        faces,
        pairing: [(Generator::A, 1, 0), (Generator::X, 3, 2)],
    })
}

/// Makes every coefficient strictly positive within the same cohomology
/// class, then builds the domain.
pub fn kissing_resolve(h: &Holonomy, c: &VertexCoefficients) -> Result<CrookedDomain> {
    let r = resolve_coefficients(h, c)?;
    tame_domain(h, &r)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PairingCheck {
    pub generator: String,
    pub source: usize,
    pub target: usize,
    pub samples: usize,
    /// Interior points of the source face landing in the target's interior.
    pub interior_failures: usize,
    /// Boundary points of the source face missing the target plane.
    pub boundary_failures: usize,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PlanePair {
    pub i: usize,
    pub j: usize,
    pub verdict: Verdict,
    pub margin: f64,
    pub witnesses: usize,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct WordCheck {
    pub depth: usize,
    pub words: usize,
    pub interior_samples: usize,
    pub images_inside: usize,
    pub min_separation: f64,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SchottkyReport {
    pub pairing: Vec<PairingCheck>,
    pub disjointness: Vec<PlanePair>,
    pub words: Option<WordCheck>,
    pub passed: bool,
}

fn ball_point<R: Rng>(rng: &mut R, center: &Vec3, radius: f64) -> Vec3 {
    loop {
        let d = Vec3::new(
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
            rng.gen_range(-1.0..=1.0),
        );
        if d.norm_squared() <= 1.0 {
            return center + d * radius;
        }
    }
}

fn check_pairing(
    dom: &CrookedDomain,
    (g, src, dst): (Generator, usize, usize),
    p: &OracleParams,
    stream: u64,
) -> PairingCheck {
    let map = dom.deformation.affine_map(&Word::generator(g));
    let (source, target) = (dom.faces[src], dom.faces[dst]);
    let mut rng = rng_for(p.seed, stream);
    let n = (p.samples / 4).max(1);
    let mut interior_failures = 0;
    let mut kept = 0;
    for _ in 0..n {
        let q = ball_point(&mut rng, &source.vertex(), p.radius);
        if !source.contains_interior(&q, p.tol) {
            continue;
        }
        kept += 1;
        if target.contains_interior(&map.apply(&q), p.tol) {
            interior_failures += 1;
        }
    }
    let boundary = sample_plane(source.boundary(), n, p.radius, &mut rng);
    let boundary_failures = boundary
        .iter()
        .filter(|q| !target.boundary().contains_tol(&map.apply(q), p.tol))
        .count();
    PairingCheck {
        generator: format!("{g:?}"),
        source: src,
        target: dst,
        samples: kept + boundary.len(),
        interior_failures,
        boundary_failures,
    }
}

fn in_interior(dom: &CrookedDomain, q: &Vec3, tol: f64) -> bool {
    dom.faces
        .iter()
        .all(|f| f.complement().contains_interior(q, tol))
}

/// Pairing, disjointness and word-image checks of a domain. `depth = 0`
/// skips the word section.
pub fn verify_schottky(dom: &CrookedDomain, depth: usize, p: &OracleParams) -> SchottkyReport {
    let pairing: Vec<PairingCheck> = dom
        .pairing
        .iter()
        .enumerate()
        .map(|(k, &pr)| check_pairing(dom, pr, p, 100 + k as u64))
        .collect();

    let planes = dom.planes();
    let samples: Vec<Vec<Vec3>> = (0..4)
        .into_par_iter()
        .map(|i| {
            sample_plane(
                &planes[i],
                p.samples,
                p.radius,
                &mut rng_for(p.seed, i as u64),
            )
        })
        .collect();
    let witness = |i: usize, j: usize| {
        let (mut plus, mut minus) = (0usize, 0usize);
        for q in &samples[i] {
            match planes[j].side(q, p.tol) {
                1 => plus += 1,
                -1 => minus += 1,
                _ => {}
            }
        }
        samples[i].len() - plus.max(minus)
    };
    let disjointness: Vec<PlanePair> = pairs()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, j)| {
            let c = disjoint_sufficient(&planes[i], &planes[j]);
            PlanePair {
                i,
                j,
                verdict: c.verdict,
                margin: c.margin,
                witnesses: witness(i, j) + witness(j, i),
            }
        })
        .collect();

    let words = (depth > 0).then(|| check_words(dom, depth, p));

    let passed = pairing
        .iter()
        .all(|c| c.interior_failures == 0 && c.boundary_failures == 0)
        && disjointness
            .iter()
            .all(|c| c.verdict == Verdict::Disjoint && c.witnesses == 0)
        && words
            .as_ref()
            .is_none_or(|w| w.images_inside == 0 && w.min_separation > 0.0);
    SchottkyReport {
        pairing,
        disjointness,
        words,
        passed,
    }
}

fn check_words(dom: &CrookedDomain, depth: usize, p: &OracleParams) -> WordCheck {
    let mut rng = rng_for(p.seed, 200);
    let center = dom.faces.iter().map(|f| f.vertex()).sum::<Vec3>() / 4.0;
    let mut interior = Vec::new();
    for _ in 0..p.samples {
        let q = ball_point(&mut rng, &center, p.radius);
        if in_interior(dom, &q, p.tol) {
            interior.push(q);
            if interior.len() == MAX_INTERIOR {
                break;
            }
        }
    }
    let words = Word::reduced_words(&[Generator::A, Generator::X], depth);
    let (inside, sep) = words
        .par_iter()
        .map(|w| {
            let g = dom.deformation.affine_map(w);
            let mut inside = 0usize;
            let mut sep = f64::INFINITY;
            for q in &interior {
                let img = g.apply(q);
                if in_interior(dom, &img, p.tol) {
                    inside += 1;
                }
                for r in &interior {
                    sep = sep.min((img - r).norm());
                }
            }
            (inside, sep)
        })
        .reduce(|| (0, f64::INFINITY), |a, b| (a.0 + b.0, a.1.min(b.1)));
    WordCheck {
        depth,
        words: words.len(),
        interior_samples: interior.len(),
        images_inside: inside,
        min_separation: sep,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crooked::consistent_directors;
    use crate::margulis::{cone_membership, ConeClass};

    fn symmetric() -> Holonomy {
        Holonomy::from_lengths(0.0, 0.0, 2.0 * 1f64.asinh()).unwrap()
    }

    #[test]
    fn standard_directors_are_consistent() {
        for h in [symmetric(), Holonomy::from_lengths(0.7, 1.3, 1.1).unwrap()] {
            let c = standard_configuration(&h).unwrap();
            assert!(consistent_directors(&[c.v0, c.va, c.vx]));
            use crate::minkowski::Minkowski;
            for (v, a, b) in [
                (c.v0, c.quad.xa_minus, c.quad.x_neg_xb_plus),
                (c.va, c.quad.a_xb_plus, c.quad.xa_minus),
                (c.vx, c.quad.x_neg_xb_plus, c.quad.a_xb_plus),
            ] {
                assert!(v.mdot(&a).abs() < 1e-10 && v.mdot(&b).abs() < 1e-10);
                assert!((v.mnorm2() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn all_ones_domain_verifies() {
        let h = symmetric();
        let d = tame_domain(&h, &VertexCoefficients::ones()).unwrap();
        let dirs = d.faces.map(|f| f.director());
        assert!(consistent_directors(&dirs));
        assert_eq!(
            cone_membership(&d.deformation).unwrap(),
            ConeClass::InteriorPlus
        );
        let p = OracleParams {
            samples: 2000,
            ..Default::default()
        };
        let r = verify_schottky(&d, 3, &p);
        assert!(r.passed, "{r:#?}");
        let w = r.words.unwrap();
        assert!(w.interior_samples > 0 && w.min_separation > 0.0);
    }

    #[test]
    fn depth_zero_skips_words() {
        let d = tame_domain(&symmetric(), &VertexCoefficients::ones()).unwrap();
        let p = OracleParams {
            samples: 300,
            ..Default::default()
        };
        assert!(verify_schottky(&d, 0, &p).words.is_none());
    }

    #[test]
    fn swapped_pairing_fails() {
        let d = tame_domain(&symmetric(), &VertexCoefficients::ones()).unwrap();
        let p = OracleParams {
            samples: 2000,
            ..Default::default()
        };
        let r = verify_schottky(&d.with_swapped_pairing(), 0, &p);
        assert!(!r.passed);
        assert!(r
            .pairing
            .iter()
            .any(|c| c.interior_failures > 0 || c.boundary_failures > 0));
    }

    #[test]
    fn zero_coefficient_is_kissing() {
        let mut c = VertexCoefficients::ones();
        c.r_x = 0.0;
        assert!(matches!(
            tame_domain(&symmetric(), &c),
            Err(Error::Kissing { name: "rX", .. })
        ));
    }

    #[test]
    fn vertices_lie_in_quadrants() {
        let h = Holonomy::from_lengths(0.4, 0.9, 1.7).unwrap();
        let c = VertexCoefficients::from_array([0.5, 1.5, 2.0, 0.25, 1.0, 3.0]);
        let cfg = standard_configuration(&h).unwrap();
        let [p0, pa, px] = c.vertices(&cfg.quad);
        let (r, s) = cfg.q0.coordinates(&p0).unwrap();
        assert!((r - 0.5).abs() < 1e-10 && (s - 1.5).abs() < 1e-10);
        assert!(cfg.qa.contains_strictly(&pa) && cfg.qx.contains_strictly(&px));
    }
}
