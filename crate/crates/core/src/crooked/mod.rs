//! Crooked planes and crooked halfspaces in Minkowski space.
//!
//! `C(v, p)` is the union of the wings `p + R x⁺(v) + R₊ v` and
//! `p + R x⁻(v) − R₊ v` with the stem `p + {x ∈ v⊥ : x·x ≤ 0}`.

mod domain;
mod oracle;

pub use domain::{
    kissing_resolve, separate_vertices, standard_configuration, tame_domain, verify_schottky,
    CrookedDomain, DomainOptions, PairingCheck, PlanePair, SchottkyReport, StandardConfiguration,
    WordCheck,
};
pub use oracle::{sample_plane, witnesses, OracleParams};

use nalgebra::{Matrix3, SMatrix, Vector3, Vector4};

use crate::lorentz::null_frame;
use crate::margulis::{max_min_along, AffineMap};
use crate::minkowski::{Minkowski, Vec3};
use crate::{Error, Result};

/// Strictness slack for the vertex-form certificate.
pub const CERTIFY_TOL: f64 = 1e-10;
/// Slack on the equality constraints of plane membership.
pub const CONTAINS_TOL: f64 = 1e-9;

/// `(x⁻(v), x⁺(v))`; see [`crate::lorentz::null_frame`].
pub fn null_frame_of_director(v: &Vec3) -> Result<(Vec3, Vec3)> {
    null_frame(v)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrookedPlane {
    pub vertex: Vec3,
    pub director: Vec3,
    x_minus: Vec3,
    x_plus: Vec3,
}

impl CrookedPlane {
    pub fn new(director: Vec3, vertex: Vec3) -> Result<CrookedPlane> {
        let (x_minus, x_plus) = null_frame(&director)?;
        Ok(CrookedPlane {
            vertex,
            director,
            x_minus,
            x_plus,
        })
    }

    pub fn x_minus(&self) -> &Vec3 {
        &self.x_minus
    }

    pub fn x_plus(&self) -> &Vec3 {
        &self.x_plus
    }

    /// Membership with slack `tol` (relative to `1 + |q − p|`).
    pub fn contains_tol(&self, q: &Vec3, tol: f64) -> bool {
        let d = q - self.vertex;
        let eps = tol * (1.0 + d.norm());
        let s = d.mdot(&self.director);
        let on_plus = d.mdot(&self.x_plus).abs() <= eps && s >= -eps;
        let on_minus = d.mdot(&self.x_minus).abs() <= eps && s <= eps;
        let on_stem = s.abs() <= eps && d.mnorm2() <= eps * (1.0 + d.norm());
        on_plus || on_minus || on_stem
    }

    pub fn contains(&self, q: &Vec3) -> bool {
        self.contains_tol(q, CONTAINS_TOL)
    }

    /// The two halfspaces bounded by this plane, `H(v, p)` and `H(−v, p)`.
    pub fn halfspaces(&self) -> (CrookedHalfspace, CrookedHalfspace) {
        (
            CrookedHalfspace::from_plane(*self, false),
            CrookedHalfspace::from_plane(*self, true),
        )
    }

    /// `+1` strictly inside `H(v, p)`, `-1` strictly inside `H(−v, p)`,
    /// `0` within `tol` of the plane.
    pub fn side(&self, q: &Vec3, tol: f64) -> i8 {
        let d = q - self.vertex;
        let eps = tol * (1.0 + d.norm());
        let s = d.mdot(&self.director);
        let tp = d.mdot(&self.x_plus);
        let tm = d.mdot(&self.x_minus);
        let plus = if s > eps {
            tp < -eps
        } else if s < -eps {
            tm > eps
        } else {
            tp < -eps && tm > eps
        };
        let minus = if s < -eps {
            tm < -eps
        } else if s > eps {
            tp > eps
        } else {
            tm < -eps && tp > eps
        };
        match (plus, minus) {
            (true, false) => 1,
            (false, true) => -1,
            _ => 0,
        }
    }
}

/// `H(v, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrookedHalfspace {
    plane: CrookedPlane,
    negated: bool,
}

impl CrookedHalfspace {
    pub fn new(director: Vec3, vertex: Vec3) -> Result<CrookedHalfspace> {
        Ok(CrookedHalfspace {
            plane: CrookedPlane::new(director, vertex)?,
            negated: false,
        })
    }

    fn from_plane(plane: CrookedPlane, negated: bool) -> CrookedHalfspace {
        CrookedHalfspace { plane, negated }
    }

    pub fn director(&self) -> Vec3 {
        if self.negated {
            -self.plane.director
        } else {
            self.plane.director
        }
    }

    pub fn vertex(&self) -> Vec3 {
        self.plane.vertex
    }

    pub fn boundary(&self) -> &CrookedPlane {
        &self.plane
    }

    /// The closed halfspace: with `d = q − p`,
    /// `d·x⁺(v) ≤ 0` if `d·v ≥ 0`; `d·x⁻(v) ≥ 0` if `d·v ≤ 0`; and on `v⊥`
    /// either condition suffices.
    pub fn contains(&self, q: &Vec3) -> bool {
        let d = q - self.plane.vertex;
        let (v, xp, xm) = if self.negated {
            (-self.plane.director, self.plane.x_minus, self.plane.x_plus)
        } else {
            (self.plane.director, self.plane.x_plus, self.plane.x_minus)
        };
        let s = d.mdot(&v);
        let first = d.mdot(&xp) <= 0.0;
        let second = d.mdot(&xm) >= 0.0;
        if s > 0.0 {
            first
        } else if s < 0.0 {
            second
        } else {
            first || second
        }
    }

    /// Strict interior membership with slack `tol`.
    pub fn contains_interior(&self, q: &Vec3, tol: f64) -> bool {
        let s = self.plane.side(q, tol);
        if self.negated {
            s == -1
        } else {
            s == 1
        }
    }

    pub fn complement(&self) -> CrookedHalfspace {
        CrookedHalfspace {
            plane: self.plane,
            negated: !self.negated,
        }
    }
}

pub fn crooked_contains(c: &CrookedPlane, q: &Vec3) -> bool {
    c.contains(q)
}

pub fn halfspace_contains(h: &CrookedHalfspace, q: &Vec3) -> bool {
    h.contains(q)
}

/// `v_i·v_j < 0` and `v_i·x±(v_j) ≤ 0` for all `i ≠ j`.
pub fn consistent_directors(vs: &[Vec3]) -> bool {
    let frames: Result<Vec<_>> = vs.iter().map(null_frame).collect();
    let Ok(frames) = frames else { return false };
    for (i, vi) in vs.iter().enumerate() {
        for (j, vj) in vs.iter().enumerate() {
            if i == j {
                continue;
            }
            let (m, p) = frames[j];
            if !(vi.mdot(vj) < 0.0) || vi.mdot(&m) > CERTIFY_TOL || vi.mdot(&p) > CERTIFY_TOL {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Disjoint,
    NotCertified,
    /// Directors parallel or not consistently oriented.
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct DisjointnessCertificate {
    pub verdict: Verdict,
    /// `max min(a₁, b₁, a₂, b₂)` over all decompositions.
    pub margin: f64,
    /// `[a₁, b₁, a₂, b₂]` at the optimum.
    pub coefficients: [f64; 4],
}

/// Vertex-form sufficient condition for disjointness: a common point `o`
/// with `pᵢ − o = aᵢx⁻(vᵢ) − bᵢx⁺(vᵢ)` and all `aᵢ, bᵢ > 0`. The
/// decompositions form a line; the certificate maximizes the smallest
/// coefficient along it.
pub fn disjoint_sufficient(c1: &CrookedPlane, c2: &CrookedPlane) -> DisjointnessCertificate {
    let indeterminate = DisjointnessCertificate {
        verdict: Verdict::Indeterminate,
        margin: f64::NAN,
        coefficients: [f64::NAN; 4],
    };
    let (v1, v2) = (c1.director, c2.director);
    let parallel = v1.cross(&v2).norm() <= 1e-12 * v1.norm() * v2.norm();
    if parallel || !consistent_directors(&[v1, v2]) {
        return indeterminate;
    }
    // unknowns (a2, b2, a1, b1)
    let m = SMatrix::<f64, 3, 4>::from_columns(&[c2.x_minus, -c2.x_plus, -c1.x_minus, c1.x_plus]);
    let minor = |skip: usize| {
        let cols: Vec<Vector3<f64>> = (0..4)
            .filter(|&j| j != skip)
            .map(|j| m.column(j).into_owned())
            .collect();
        Matrix3::from_columns(&cols).determinant()
    };
    let k = Vector4::new(minor(0), -minor(1), minor(2), -minor(3));
    let gram: Matrix3<f64> = m * m.transpose();
    let Some(y) = gram.lu().solve(&(c2.vertex - c1.vertex)) else {
        return indeterminate;
    };
    let c0: Vector4<f64> = m.transpose() * y;
    let kn = k.norm();
    let best = if kn > 0.0 {
        let k = k / kn;
        c0 + max_min_along(&c0, &k) * k
    } else {
        c0
    };
    let margin = best.min();
    DisjointnessCertificate {
        verdict: if margin > CERTIFY_TOL {
            Verdict::Disjoint
        } else {
            Verdict::NotCertified
        },
        margin,
        coefficients: [best[2], best[3], best[0], best[1]],
    }
}

/// `g(C(v, p)) = C(L(g)v, g(p))`.
pub fn transform_crooked(g: &AffineMap, c: &CrookedPlane) -> CrookedPlane {
    CrookedPlane::new(g.linear.apply(&c.director), g.apply(&c.vertex))
        .expect("Lorentz maps preserve spacelike vectors")
}

/// Image of `H(v, p)`: `H(Lv, gp)` for time-preserving `L`, `H(−Lv, gp)`
/// for time-reversing `L`.
pub fn transform_halfspace(g: &AffineMap, h: &CrookedHalfspace) -> CrookedHalfspace {
    let lv = g.linear.apply(&h.director());
    let v = if g.linear.reverses_time() { -lv } else { lv };
    CrookedHalfspace::new(v, g.apply(&h.vertex())).expect("Lorentz maps preserve spacelike vectors")
}

/// Nonnegative span `{r u + s w : r, s ≥ 0}` anchored at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrant {
    pub u: Vec3,
    pub w: Vec3,
}

impl Quadrant {
    pub fn new(u: Vec3, w: Vec3) -> Quadrant {
        Quadrant { u, w }
    }

    /// `(r, s)` with `p = r u + s w`, if `p` lies in the span (residual
    /// `< 1e-10`, relative to `1 + |p|`).
    pub fn coordinates(&self, p: &Vec3) -> Option<(f64, f64)> {
        let m = SMatrix::<f64, 3, 2>::from_columns(&[self.u, self.w]);
        let gram = m.transpose() * m;
        let rs = gram.lu().solve(&(m.transpose() * p))?;
        let resid = (m * rs - p).norm();
        (resid < 1e-10 * (1.0 + p.norm())).then_some((rs[0], rs[1]))
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        self.coordinates(p)
            .is_some_and(|(r, s)| r >= -1e-10 && s >= -1e-10)
    }

    pub fn contains_strictly(&self, p: &Vec3) -> bool {
        self.coordinates(p).is_some_and(|(r, s)| r > 0.0 && s > 0.0)
    }
}

/// Errors for a director that is not spacelike.
pub fn check_director(v: &Vec3) -> Result<()> {
    let q = v.mnorm2();
    if q > 0.0 {
        Ok(())
    } else {
        Err(Error::NotSpacelike { norm2: q })
    }
}
