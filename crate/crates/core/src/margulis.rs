//! Affine deformations: cocycles on the free generators `{A, X}`, Margulis
//! invariants, the coordinates `μ = (α_A, α_X, α_Y)` and the cone of
//! deformations whose four boundary and one-sided invariants share a sign.

use nalgebra::{DMatrix, Matrix3, SMatrix, Vector3, Vector4};

use crate::holonomy::{
    length_from_element, ExtSl2, FrickeCoords, Generator, Holonomy, Letter, Mat2, Parity, Word,
};
use crate::lorentz::{
    ad_to_lorentz, ideal_quadrilateral, lie_to_vec, vec_to_lie, IdealQuadrilateral, IsometryClass,
    LorentzMap,
};
use crate::minkowski::{Minkowski, Vec3};
use crate::{Error, Result};

/// Absolute bound on `α / |u|` below which an invariant counts as zero.
pub const SIGN_TOL: f64 = 1e-10;
/// Default central-difference step for tangent cocycles.
pub const TANGENT_STEP: f64 = 1e-5;

/// Translational parts `u(A)`, `u(X)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Cocycle {
    pub u_a: Vec3,
    pub u_x: Vec3,
}

impl Cocycle {
    pub fn zero() -> Cocycle {
        Cocycle {
            u_a: Vec3::zeros(),
            u_x: Vec3::zeros(),
        }
    }

    pub fn new(u_a: Vec3, u_x: Vec3) -> Cocycle {
        Cocycle { u_a, u_x }
    }

    pub fn scale(&self, c: f64) -> Cocycle {
        Cocycle {
            u_a: self.u_a * c,
            u_x: self.u_x * c,
        }
    }

    pub fn add(&self, o: &Cocycle) -> Cocycle {
        Cocycle {
            u_a: self.u_a + o.u_a,
            u_x: self.u_x + o.u_x,
        }
    }

    /// Euclidean norm of `(u_A, u_X)` in `R⁶`.
    pub fn norm(&self) -> f64 {
        (self.u_a.norm_squared() + self.u_x.norm_squared()).sqrt()
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.u_a.x, self.u_a.y, self.u_a.z, self.u_x.x, self.u_x.y, self.u_x.z,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Cocycle {
        Cocycle {
            u_a: Vec3::new(a[0], a[1], a[2]),
            u_x: Vec3::new(a[3], a[4], a[5]),
        }
    }
}

/// `u(γ) = v − ρ₀(γ)v` on the generators.
pub fn coboundary(v: &Vec3, h: &Holonomy) -> Cocycle {
    let la = ad_to_lorentz(h.a());
    let lx = ad_to_lorentz(h.x());
    Cocycle {
        u_a: v - la.apply(v),
        u_x: v - lx.apply(v),
    }
}

/// An affine map `p ↦ L p + t` with `L ∈ SO(2,1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub linear: LorentzMap,
    pub translation: Vec3,
}

impl AffineMap {
    pub fn identity() -> AffineMap {
        AffineMap {
            linear: LorentzMap::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn translation(t: Vec3) -> AffineMap {
        AffineMap {
            linear: LorentzMap::identity(),
            translation: t,
        }
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.linear.apply(p) + self.translation
    }

    pub fn compose(&self, o: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear.compose(&o.linear),
            translation: self.linear.apply(&o.translation) + self.translation,
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let li = self.linear.inverse();
        AffineMap {
            linear: li,
            translation: -li.apply(&self.translation),
        }
    }
}

/// A holonomy with a cocycle, acting by `p ↦ o + ρ₀(γ)(p − o) + u(γ)`.
#[derive(Clone, Debug)]
pub struct AffineDeformation {
    holonomy: Holonomy,
    cocycle: Cocycle,
    origin: Vec3,
    la: LorentzMap,
    lx: LorentzMap,
}

impl AffineDeformation {
    pub fn new(holonomy: Holonomy, cocycle: Cocycle) -> AffineDeformation {
        Self::with_origin(holonomy, cocycle, Vec3::zeros())
    }

    pub fn with_origin(holonomy: Holonomy, cocycle: Cocycle, origin: Vec3) -> AffineDeformation {
        let la = ad_to_lorentz(holonomy.a());
        let lx = ad_to_lorentz(holonomy.x());
        AffineDeformation {
            holonomy,
            cocycle,
            origin,
            la,
            lx,
        }
    }

    pub fn holonomy(&self) -> &Holonomy {
        &self.holonomy
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn origin(&self) -> &Vec3 {
        &self.origin
    }

    fn letter(&self, l: Letter) -> (LorentzMap, Vec3) {
        let (m, u) = match l.generator {
            Generator::A => (self.la, self.cocycle.u_a),
            Generator::X => (self.lx, self.cocycle.u_x),
            _ => unreachable!("word is in the {{A, X}} basis"),
        };
        if l.inverse {
            let mi = m.inverse();
            (mi, -mi.apply(&u))
        } else {
            (m, u)
        }
    }

    /// Linear part and cocycle value of a word, evaluated in the `{A, X}`
    /// basis by the cocycle rule `u(gh) = u(g) + ρ₀(g)u(h)`.
    pub fn linear_and_cocycle(&self, w: &Word) -> (LorentzMap, Vec3) {
        w.in_ax_basis().letters().iter().fold(
            (LorentzMap::identity(), Vec3::zeros()),
            |(m, u), &l| {
                let (ml, ul) = self.letter(l);
                (m.compose(&ml), u + m.apply(&ul))
            },
        )
    }

    pub fn evaluate_cocycle(&self, w: &Word) -> Vec3 {
        self.linear_and_cocycle(w).1
    }

    pub fn linear_part(&self, w: &Word) -> LorentzMap {
        self.linear_and_cocycle(w).0
    }

    /// The affine isometry `ρ(w)`.
    pub fn affine_map(&self, w: &Word) -> AffineMap {
        let (m, u) = self.linear_and_cocycle(w);
        AffineMap {
            linear: m,
            translation: self.origin - m.apply(&self.origin) + u,
        }
    }

    /// `u(w)·w⁰`, with `w⁰` the neutral vector of the linear part.
    ///
    /// Evaluated on the cyclic reduction in the `{A, X}` basis. For
    /// hyperbolic words `w⁰ = ±(p − (tr p/2) I)/N`, and with `⟨U, V⟩ = tr(UV)/2`
    /// the invariant becomes `±tr(U_w p)/(2N)`, where `tr(U_w p)` is a sum
    /// over letters of `tr(U_g R)` with `R` a cyclic rotation of the word.
    /// Rotations are as small as `p`, so no large cancellation occurs.
    pub fn margulis_invariant(&self, w: &Word) -> Result<f64> {
        let w = w.in_ax_basis().cyclic_reduce();
        let g = self.holonomy.evaluate(&w);
        let frame = crate::lorentz::frame_of(&g)?;
        if frame.class == IsometryClass::Parabolic {
            return Ok(self.evaluate_cocycle(&w).mdot(&frame.x_zero));
        }
        let p = g.real_part();
        let h = p.trace() / 2.0;
        let axis = lie_to_vec(&(p - Mat2::identity() * h));
        let det = match g.parity() {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        let norm = (h * h - det).sqrt();
        let sign = frame.x_zero.dot(&axis).signum();
        Ok(sign * self.trace_pairing(&w) / (2.0 * norm))
    }

    /// `tr(U_w p)` for a cyclically reduced word `w` in `{A, X}`.
    fn trace_pairing(&self, w: &Word) -> f64 {
        let letters = w.letters();
        let n = letters.len();
        let lift = |l: &Letter| {
            let g = *self.holonomy.generator(l.generator);
            if l.inverse {
                g.inverse()
            } else {
                g
            }
        };
        let rotation = |start: usize| {
            (0..n).fold(ExtSl2::identity(), |acc, i| {
                acc * lift(&letters[(start + i) % n])
            })
        };
        letters
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let u = match l.generator {
                    Generator::A => self.cocycle.u_a,
                    Generator::X => self.cocycle.u_x,
                    _ => unreachable!("word is in the {{A, X}} basis"),
                };
                let big_u = vec_to_lie(&u);
                // u(g⁻¹) = −Ad(g⁻¹)u(g) moves the pairing one rotation on
                if l.inverse {
                    -(big_u * rotation((k + 1) % n).real_part()).trace()
                } else {
                    (big_u * rotation(k).real_part()).trace()
                }
            })
            .sum()
    }

    pub fn mu_coords(&self) -> Result<MuCoords> {
        Ok(MuCoords {
            alpha_a: self.margulis_invariant(&Word::generator(Generator::A))?,
            alpha_x: self.margulis_invariant(&Word::generator(Generator::X))?,
            alpha_y: self.margulis_invariant(&Word::generator(Generator::Y))?,
        })
    }

    /// `[α_A, α_B, α_X, α_Y]`, each computed directly.
    pub fn boundary_invariants(&self) -> Result<[f64; 4]> {
        let f = |g| self.margulis_invariant(&Word::generator(g));
        Ok([
            f(Generator::A)?,
            f(Generator::B)?,
            f(Generator::X)?,
            f(Generator::Y)?,
        ])
    }
}

pub fn evaluate_cocycle(d: &AffineDeformation, w: &Word) -> Vec3 {
    d.evaluate_cocycle(w)
}

pub fn margulis_invariant(d: &AffineDeformation, w: &Word) -> Result<f64> {
    d.margulis_invariant(w)
}

pub fn mu_coords(d: &AffineDeformation) -> Result<MuCoords> {
    d.mu_coords()
}

/// Margulis invariants of `A`, `X`, `Y`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MuCoords {
    pub alpha_a: f64,
    pub alpha_x: f64,
    pub alpha_y: f64,
}

impl MuCoords {
    pub fn new(alpha_a: f64, alpha_x: f64, alpha_y: f64) -> MuCoords {
        MuCoords {
            alpha_a,
            alpha_x,
            alpha_y,
        }
    }

    pub fn to_vector(&self) -> Vector3<f64> {
        Vector3::new(self.alpha_a, self.alpha_x, self.alpha_y)
    }

    pub fn from_vector(v: &Vector3<f64>) -> MuCoords {
        MuCoords::new(v.x, v.y, v.z)
    }

    /// `α_B` solved from the linear relation; `None` at a cusp `ℓ_B = 0`.
    pub fn alpha_b(&self, f: &FrickeCoords) -> Option<f64> {
        let sb = (f.ell_b / 2.0).sinh();
        if sb == 0.0 {
            return None;
        }
        Some(relation_rhs(self, f) / sb)
    }
}

fn relation_rhs(mu: &MuCoords, f: &FrickeCoords) -> f64 {
    let (sx, cx) = ((f.ell_x / 2.0).sinh(), (f.ell_x / 2.0).cosh());
    let (sy, cy) = ((f.ell_y / 2.0).sinh(), (f.ell_y / 2.0).cosh());
    2.0 * cx * sy * mu.alpha_x + 2.0 * sx * cy * mu.alpha_y - (f.ell_a / 2.0).sinh() * mu.alpha_a
}

fn lengths_of(h: &Holonomy) -> Result<FrickeCoords> {
    if let Some(f) = h.fricke() {
        return Ok(*f);
    }
    let l = |g: &ExtSl2| length_from_element(g).map(|(_, l)| l);
    Ok(FrickeCoords {
        ell_a: l(h.a())?,
        ell_b: l(h.b())?,
        ell_x: l(h.x())?,
        ell_y: l(h.y())?,
        theta: f64::NAN,
    })
}

/// `|sinh(ℓA/2)α_A + sinh(ℓB/2)α_B − 2cosh(ℓX/2)sinh(ℓY/2)α_X −
/// 2sinh(ℓX/2)cosh(ℓY/2)α_Y|` with all four invariants computed directly.
pub fn relation_residual(d: &AffineDeformation) -> Result<f64> {
    let f = lengths_of(d.holonomy())?;
    let [aa, ab, ax, ay] = d.boundary_invariants()?;
    let mu = MuCoords::new(aa, ax, ay);
    Ok(((f.ell_b / 2.0).sinh() * ab - relation_rhs(&mu, &f)).abs())
}

fn traceless_vec(p: &Mat2) -> Vec3 {
    let t = p.trace() / 2.0;
    lie_to_vec(&(p - Mat2::identity() * t))
}

/// Residual of the derivative of `a + b + xy = 0` along the cocycle, written
/// with `d tr P = u·P₀` (`P₀` the traceless part). Unlike the length form it
/// stays valid when a boundary is a cusp.
pub fn differentiated_trace_residual(d: &AffineDeformation) -> f64 {
    let h = d.holonomy();
    let u = |g| d.evaluate_cocycle(&Word::generator(g));
    let x = h.x().real_trace();
    let y = h.y().real_trace();
    let da = u(Generator::A).mdot(&traceless_vec(h.a().real_part()));
    let db = u(Generator::B).mdot(&traceless_vec(h.b().real_part()));
    let dx = u(Generator::X).mdot(&traceless_vec(h.x().real_part()));
    let dy = u(Generator::Y).mdot(&traceless_vec(h.y().real_part()));
    (da + db + x * dy + y * dx).abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeClass {
    InteriorPlus,
    InteriorMinus,
    Boundary,
    Outside,
}

/// Classifies a tuple of invariants by their strict signs.
pub fn classify_signs(alphas: &[f64], tol: f64) -> ConeClass {
    let pos = alphas.iter().all(|&a| a > tol);
    let neg = alphas.iter().all(|&a| a < -tol);
    if pos {
        ConeClass::InteriorPlus
    } else if neg {
        ConeClass::InteriorMinus
    } else if alphas.iter().all(|&a| a >= -tol) || alphas.iter().all(|&a| a <= tol) {
        ConeClass::Boundary
    } else {
        ConeClass::Outside
    }
}

/// Cone class from the four directly computed invariants, normalized by the
/// cocycle norm.
pub fn cone_membership(d: &AffineDeformation) -> Result<ConeClass> {
    let n = d.cocycle().norm();
    let a = d.boundary_invariants()?;
    if n == 0.0 {
        return Ok(ConeClass::Boundary);
    }
    Ok(classify_signs(&a.map(|x| x / n), SIGN_TOL))
}

/// Cone class of a μ-triple through the inequality form: `α_A, α_X, α_Y`
/// of one strict sign and `sinh(ℓA/2)α_A` strictly between zero and
/// `2cosh(ℓX/2)sinh(ℓY/2)α_X + 2sinh(ℓX/2)cosh(ℓY/2)α_Y` in that sign.
pub fn mu_inequality_class(mu: &MuCoords, f: &FrickeCoords) -> ConeClass {
    if mu.to_vector().norm() == 0.0 {
        return ConeClass::Boundary;
    }
    classify_signs(&mu_inequality_terms(mu, f), SIGN_TOL)
}

/// `[α_A, α_X, α_Y, gap]` of the unit-normalized triple, where `gap` is
/// `2cosh(ℓX/2)sinh(ℓY/2)α_X + 2sinh(ℓX/2)cosh(ℓY/2)α_Y − sinh(ℓA/2)α_A`.
pub fn mu_inequality_terms(mu: &MuCoords, f: &FrickeCoords) -> [f64; 4] {
    let n = mu.to_vector().norm();
    let m = if n > 0.0 {
        MuCoords::from_vector(&(mu.to_vector() / n))
    } else {
        *mu
    };
    let sa = (f.ell_a / 2.0).sinh();
    let (sx, cx) = ((f.ell_x / 2.0).sinh(), (f.ell_x / 2.0).cosh());
    let (sy, cy) = ((f.ell_y / 2.0).sinh(), (f.ell_y / 2.0).cosh());
    let gap = 2.0 * cx * sy * m.alpha_x + 2.0 * sx * cy * m.alpha_y - sa * m.alpha_a;
    [m.alpha_a, m.alpha_x, m.alpha_y, gap]
}

/// Coefficients of the three vertices in their quadrants:
/// `p₀ = r₀x⁻(A) − s₀X(−x⁺(B))`, `p_A = r_A A(x⁺(B)) − s_A x⁻(A)`,
/// `p_X = r_X X(−x⁺(B)) − s_X A(x⁺(B))`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VertexCoefficients {
    pub r0: f64,
    pub s0: f64,
    #[serde(rename = "rA")]
    pub r_a: f64,
    #[serde(rename = "sA")]
    pub s_a: f64,
    #[serde(rename = "rX")]
    pub r_x: f64,
    #[serde(rename = "sX")]
    pub s_x: f64,
}

impl VertexCoefficients {
    pub const NAMES: [&'static str; 6] = ["r0", "s0", "rA", "sA", "rX", "sX"];

    pub fn ones() -> VertexCoefficients {
        VertexCoefficients::from_array([1.0; 6])
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.r0, self.s0, self.r_a, self.s_a, self.r_x, self.s_x]
    }

    pub fn from_array(a: [f64; 6]) -> VertexCoefficients {
        VertexCoefficients {
            r0: a[0],
            s0: a[1],
            r_a: a[2],
            s_a: a[3],
            r_x: a[4],
            s_x: a[5],
        }
    }

    /// `(p₀, p_A, p_X)`.
    pub fn vertices(&self, q: &IdealQuadrilateral) -> [Vec3; 3] {
        [
            self.r0 * q.xa_minus - self.s0 * q.x_neg_xb_plus,
            self.r_a * q.a_xb_plus - self.s_a * q.xa_minus,
            self.r_x * q.x_neg_xb_plus - self.s_x * q.a_xb_plus,
        ]
    }

    /// The first coefficient that is not strictly positive.
    pub fn first_nonpositive(&self) -> Option<(&'static str, f64)> {
        Self::NAMES
            .iter()
            .zip(self.to_array())
            .find(|(_, v)| !(*v > 0.0))
            .map(|(n, v)| (*n, v))
    }
}

/// `u(A) = p_A − p₀`, `u(X) = p_X − p₀`.
pub fn cocycle_from_vertices(p0: &Vec3, pa: &Vec3, px: &Vec3) -> Cocycle {
    Cocycle {
        u_a: pa - p0,
        u_x: px - p0,
    }
}

pub fn cocycle_from_coefficients(h: &Holonomy, c: &VertexCoefficients) -> Result<Cocycle> {
    let q = ideal_quadrilateral(h)?;
    let [p0, pa, px] = c.vertices(&q);
    Ok(cocycle_from_vertices(&p0, &pa, &px))
}

/// Unit coefficient vectors of the four rays spanning the closed cone.
pub fn ray_coefficients(ray: u8) -> Result<VertexCoefficients> {
    let mut a = [0.0; 6];
    match ray {
        1 => a[1] = 1.0,
        2 => a[2] = 1.0,
        3 => a[3] = 1.0,
        4 => a[0] = 1.0,
        _ => {
            return Err(Error::OutsideCone(format!(
                "ray index {ray} is not in 1..=4"
            )))
        }
    }
    Ok(VertexCoefficients::from_array(a))
}

/// Representative cocycle of ray `1..=4`:
/// `p₀ = −X(−x⁺B)`, `p_A = A(x⁺B)`, `p_A = −x⁻(A)`, `p₀ = x⁻(A)`.
pub fn ray_representative(h: &Holonomy, ray: u8) -> Result<Cocycle> {
    cocycle_from_coefficients(h, &ray_coefficients(ray)?)
}

/// The `3 × 6` matrix sending vertex coefficients to `μ`.
pub fn mu_matrix(h: &Holonomy) -> Result<SMatrix<f64, 3, 6>> {
    let mut m = SMatrix::<f64, 3, 6>::zeros();
    for j in 0..6 {
        let mut a = [0.0; 6];
        a[j] = 1.0;
        let u = cocycle_from_coefficients(h, &VertexCoefficients::from_array(a))?;
        let mu = AffineDeformation::new(h.clone(), u).mu_coords()?;
        m.set_column(j, &mu.to_vector());
    }
    Ok(m)
}

/// The `3 × 6` matrix sending `(u_A, u_X)` to `μ`.
pub fn raw_mu_matrix(h: &Holonomy) -> Result<SMatrix<f64, 3, 6>> {
    let mut m = SMatrix::<f64, 3, 6>::zeros();
    for j in 0..6 {
        let mut a = [0.0; 6];
        a[j] = 1.0;
        let mu = AffineDeformation::new(h.clone(), Cocycle::from_array(a)).mu_coords()?;
        m.set_column(j, &mu.to_vector());
    }
    Ok(m)
}

/// Condition number of `μ` restricted to the orthogonal complement of the
/// coboundaries in `R⁶`.
pub fn mu_condition_number(h: &Holonomy) -> Result<f64> {
    let m = raw_mu_matrix(h)?;
    let sv = DMatrix::from_column_slice(3, 6, m.as_slice()).singular_values();
    let (mx, mn) = sv
        .iter()
        .fold((0.0f64, f64::INFINITY), |(a, b), &s| (a.max(s), b.min(s)));
    Ok(mx / mn)
}

/// The minimum-norm raw cocycle with the given `μ`.
pub fn cocycle_with_mu(h: &Holonomy, mu: &MuCoords) -> Result<Cocycle> {
    let m = raw_mu_matrix(h)?;
    let gram: Matrix3<f64> = m * m.transpose();
    let y = gram
        .lu()
        .solve(&mu.to_vector())
        .ok_or_else(|| Error::OutsideCone("μ map is singular".into()))?;
    let x = m.transpose() * y;
    Ok(Cocycle::from_array([x[0], x[1], x[2], x[3], x[4], x[5]]))
}

/// Writes `μ` as a nonnegative combination `Σ tᵢ μ(rayᵢ)`, choosing among
/// the one-parameter family of solutions the one maximizing `min tᵢ`.
/// Returns the weights and that minimum.
pub fn four_ray_weights(h: &Holonomy, mu: &MuCoords) -> Result<([f64; 4], f64)> {
    let m = mu_matrix(h)?;
    // ray k uses coefficient column RAY_COL[k]
    const RAY_COL: [usize; 4] = [1, 2, 3, 0];
    let r = SMatrix::<f64, 3, 4>::from_columns(&RAY_COL.map(|c| m.column(c).into_owned()));
    // kernel: signed 3×3 minors
    let minor = |skip: usize| {
        let cols: Vec<Vector3<f64>> = (0..4)
            .filter(|&j| j != skip)
            .map(|j| r.column(j).into_owned())
            .collect();
        Matrix3::from_columns(&cols).determinant()
    };
    let k = Vector4::new(minor(0), -minor(1), minor(2), -minor(3));
    let gram: Matrix3<f64> = r * r.transpose();
    let y = gram
        .lu()
        .solve(&mu.to_vector())
        .ok_or_else(|| Error::OutsideCone("ray invariants are degenerate".into()))?;
    let t0: Vector4<f64> = r.transpose() * y;
    let k = k / k.norm();
    let s = max_min_along(&t0, &k);
    let t = t0 + s * k;
    let w = [t[0], t[1], t[2], t[3]];
    let m = w.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((w, m))
}

/// `argmax_s min_i (a + s k)_i`; the optimum of a concave piecewise-linear
/// function sits at a crossing of two coordinates.
pub(crate) fn max_min_along(a: &Vector4<f64>, k: &Vector4<f64>) -> f64 {
    let f = |s: f64| (a + s * k).min();
    let mut best = (f(0.0), 0.0);
    for i in 0..4 {
        for j in i + 1..4 {
            let dk = k[i] - k[j];
            if dk != 0.0 {
                let s = (a[j] - a[i]) / dk;
                let v = f(s);
                if v > best.0 {
                    best = (v, s);
                }
            }
        }
    }
    best.1
}

/// Vertex coefficients with `p_X = 0` realizing an interior point of the
/// positive cone as a combination of the four rays. This is a kissing
/// configuration; see [`resolve_coefficients`].
pub fn coefficients_for_mu(h: &Holonomy, mu: &MuCoords) -> Result<VertexCoefficients> {
    let (w, min) = four_ray_weights(h, mu)?;
    let scale = w
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    if !(min > SIGN_TOL * scale) {
        return Err(Error::OutsideCone(format!(
            "four-ray weights {w:?} are not all strictly positive"
        )));
    }
    Ok(VertexCoefficients {
        r0: w[3],
        s0: w[0],
        r_a: w[1],
        s_a: w[2],
        r_x: 0.0,
        s_x: 0.0,
    })
}

/// Makes `r_X, s_X` strictly positive while preserving `μ`: both are set to
/// `η` and the change is absorbed by `r₀` (in `α_X`) and `s_A` (in `α_Y`).
/// `η` is halved until `r₀` and `s_A` keep at least half their values.
/// Coefficients that are already strictly positive are returned unchanged.
pub fn resolve_coefficients(h: &Holonomy, c: &VertexCoefficients) -> Result<VertexCoefficients> {
    if c.first_nonpositive().is_none() {
        return Ok(*c);
    }
    let bad = |name: &str, v: f64| {
        Error::KissingUnresolved(format!(
            "coefficient {name} = {v} must be strictly positive"
        ))
    };
    for (n, v) in [("r0", c.r0), ("s0", c.s0), ("rA", c.r_a), ("sA", c.s_a)] {
        if !(v > 0.0) {
            return Err(bad(n, v));
        }
    }
    if c.r_x < 0.0 || c.s_x < 0.0 {
        return Err(bad("rX/sX", c.r_x.min(c.s_x)));
    }
    let m = mu_matrix(h)?;
    // columns: r0 s0 rA sA rX sX; rows: αA αX αY
    let (x_r0, y_sa) = (m[(1, 0)], m[(2, 3)]);
    if x_r0.abs() < 1e-14 || y_sa.abs() < 1e-14 {
        return Err(Error::KissingUnresolved("degenerate μ matrix".into()));
    }
    let mut eta = c.r0.min(c.s_a).max(1e-3);
    for _ in 0..60 {
        let (drx, dsx) = ((eta - c.r_x).max(0.0), (eta - c.s_x).max(0.0));
        let r0 = c.r0 - (m[(1, 4)] * drx + m[(1, 5)] * dsx) / x_r0;
        let sa = c.s_a - (m[(2, 4)] * drx + m[(2, 5)] * dsx) / y_sa;
        if r0 >= c.r0 / 2.0 && sa >= c.s_a / 2.0 {
            return Ok(VertexCoefficients {
                r0,
                s_a: sa,
                r_x: c.r_x.max(eta),
                s_x: c.s_x.max(eta),
                ..*c
            });
        }
        eta /= 2.0;
    }
    Err(Error::KissingUnresolved(
        "no perturbation keeps r0 and sA positive".into(),
    ))
}

/// A cocycle tangent to a path of holonomies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentCocycle {
    pub cocycle: Cocycle,
    /// The path is stationary at `t0` to machine precision.
    pub stationary: bool,
}

/// Central-difference tangent cocycle `u(γ) = 2·[ρ'(γ)ρ(γ)⁻¹]` of a path of
/// Fricke coordinates.
pub fn tangent_cocycle<F>(path: F, t0: f64, h: f64) -> Result<TangentCocycle>
where
    F: Fn(f64) -> Result<FrickeCoords>,
{
    let hol = |t| Holonomy::from_fricke(&path(t)?);
    let (hp, h0, hm) = (hol(t0 + h)?, hol(t0)?, hol(t0 - h)?);
    let u = |g: fn(&Holonomy) -> &ExtSl2| {
        let dp = (g(&hp).real_part() - g(&hm).real_part()) / (2.0 * h);
        let p0 = *g(&h0).real_part();
        let pinv = Mat2::new(p0[(1, 1)], -p0[(0, 1)], -p0[(1, 0)], p0[(0, 0)]) / p0.determinant();
        2.0 * lie_to_vec(&(dp * pinv))
    };
    let ux = u(Holonomy::x);
    let uy = u(Holonomy::y);
    let ua = ux + ad_to_lorentz(h0.x()).apply(&uy);
    let c = Cocycle { u_a: ua, u_x: ux };
    let scale = 1.0 + h0.x().real_part().amax() + h0.y().real_part().amax();
    if c.norm() <= 1e-14 * scale {
        return Ok(TangentCocycle {
            cocycle: Cocycle::zero(),
            stationary: true,
        });
    }
    Ok(TangentCocycle {
        cocycle: c,
        stationary: false,
    })
}

/// Straight-line path `ℓ(t) = ℓ + t·d` in `(ℓ_A, ℓ_B, ℓ_X)`.
pub fn linear_path(base: [f64; 3], dir: [f64; 3]) -> impl Fn(f64) -> Result<FrickeCoords> {
    move |t| {
        FrickeCoords::complete(
            base[0] + t * dir[0],
            base[1] + t * dir[1],
            base[2] + t * dir[2],
        )
    }
}

/// Class of a word's image and the parity of its lift.
pub fn word_class(h: &Holonomy, w: &Word) -> (IsometryClass, Parity) {
    let g = h.evaluate(w);
    let c = crate::lorentz::classify_lift(&g).class;
    (c, g.parity())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hol() -> Holonomy {
        Holonomy::from_lengths(0.7, 1.3, 1.1).unwrap()
    }

    #[test]
    fn trace_pairing_matches_the_definition() {
        let h = hol();
        let d = AffineDeformation::new(
            h.clone(),
            Cocycle::new(Vec3::new(0.3, -0.2, 0.5), Vec3::new(-0.4, 0.1, 0.7)),
        );
        for w in Word::reduced_words(&[Generator::X, Generator::Y], 3) {
            let g = h.evaluate(&w);
            if !crate::lorentz::classify_lift(&g).class.is_hyperbolic() {
                continue;
            }
            let x0 = crate::lorentz::frame_of(&g).unwrap().x_zero;
            let direct = d.evaluate_cocycle(&w).mdot(&x0);
            let a = d.margulis_invariant(&w).unwrap();
            assert!(
                (a - direct).abs() < 1e-10 * (1.0 + a.abs()),
                "{w}: {a} {direct}"
            );
        }
    }

    #[test]
    fn invariant_of_long_conjugate_matches_generator() {
        let h = Holonomy::from_lengths(1.1, 3.4, 0.2).unwrap();
        let d = AffineDeformation::new(
            h,
            Cocycle::new(Vec3::new(0.3, -0.2, 0.5), Vec3::new(-0.4, 0.1, 0.7)),
        );
        let short = d.margulis_invariant(&"YX".parse().unwrap()).unwrap();
        let long = d.margulis_invariant(&"YYYXyy".parse().unwrap()).unwrap();
        assert!((short - long).abs() < 1e-9, "{short} {long}");
        // u(g w g⁻¹) = u(g) + g u(w) − (g w g⁻¹) u(g)
        let (gm, gu) = d.linear_and_cocycle(&"YY".parse().unwrap());
        let (_, wu) = d.linear_and_cocycle(&"YX".parse().unwrap());
        let (cm, cu) = d.linear_and_cocycle(&"YYYXyy".parse().unwrap());
        assert!((cu - (gu + gm.apply(&wu) - cm.apply(&gu))).amax() < 1e-6 * cu.amax());
        let x0 = crate::lorentz::frame_of(&d.holonomy().evaluate(&"YX".parse().unwrap()))
            .unwrap()
            .x_zero;
        assert!(
            (short - wu.mdot(&x0)).abs() < 1e-9,
            "{short} {}",
            wu.mdot(&x0)
        );
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn cocycle_rule_on_relations() {
        let h = hol();
        let u = Cocycle::new(Vec3::new(0.3, -0.4, 1.2), Vec3::new(-0.7, 0.2, 0.5));
        let d = AffineDeformation::new(h.clone(), u);
        assert!((d.evaluate_cocycle(&w("A")) - u.u_a).amax() < 1e-14);
        assert_eq!(d.evaluate_cocycle(&Word::empty()), Vec3::zeros());
        // u(Y) = X̄(u(A) − u(X)), u(B) = Ȳ(u(X) − u(Y))
        let lx = ad_to_lorentz(h.x());
        let ly = ad_to_lorentz(h.y());
        let uy = lx.inverse().apply(&(u.u_a - u.u_x));
        assert!((d.evaluate_cocycle(&w("Y")) - uy).amax() < 1e-12);
        let ub = ly.inverse().apply(&(u.u_x - uy));
        assert!((d.evaluate_cocycle(&w("B")) - ub).amax() < 1e-12);
        // u(γ⁻¹) = −ρ₀(γ)⁻¹u(γ)
        let g = w("XaXXA");
        let lhs = d.evaluate_cocycle(&g.inverse());
        let rhs = -d.linear_part(&g).inverse().apply(&d.evaluate_cocycle(&g));
        assert!((lhs - rhs).amax() < 1e-10);
    }

    #[test]
    fn coboundaries_have_zero_invariants() {
        let h = hol();
        let v = Vec3::new(0.4, 1.1, -0.3);
        let d = AffineDeformation::new(h.clone(), coboundary(&v, &h));
        for word in Word::reduced_words(&[Generator::A, Generator::X], 3) {
            assert!(d.margulis_invariant(&word).unwrap().abs() < 1e-9);
        }
        assert_eq!(coboundary(&Vec3::zeros(), &h), Cocycle::zero());
    }

    #[test]
    fn origin_does_not_change_invariants() {
        let h = hol();
        let u = Cocycle::new(Vec3::new(0.3, -0.4, 1.2), Vec3::new(-0.7, 0.2, 0.5));
        let a = AffineDeformation::new(h.clone(), u).mu_coords().unwrap();
        let b = AffineDeformation::with_origin(h.clone(), u, Vec3::new(1.0, 2.0, 3.0))
            .mu_coords()
            .unwrap();
        assert!((a.to_vector() - b.to_vector()).amax() < 1e-12);
    }

    #[test]
    fn affine_map_is_homomorphism() {
        let h = hol();
        let u = Cocycle::new(Vec3::new(0.3, -0.4, 1.2), Vec3::new(-0.7, 0.2, 0.5));
        let d = AffineDeformation::with_origin(h, u, Vec3::new(0.5, 0.0, -1.0));
        let (g, k) = (w("AxA"), w("XXa"));
        let lhs = d.affine_map(&g.concat(&k));
        let rhs = d.affine_map(&g).compose(&d.affine_map(&k));
        let p = Vec3::new(0.1, 0.2, 0.3);
        assert!((lhs.apply(&p) - rhs.apply(&p)).amax() < 1e-10);
        // ρ(A) = ρ(X)ρ(Y)
        let xy = d.affine_map(&w("X")).compose(&d.affine_map(&w("Y")));
        assert!((xy.apply(&p) - d.affine_map(&w("A")).apply(&p)).amax() < 1e-10);
    }

    #[test]
    fn ray_sign_patterns() {
        let h = hol();
        // [αA, αB, αX, αY]; zeros per ray
        let zeros = [[1, 3], [1, 2], [0, 2], [0, 3]];
        for (k, z) in (1..=4).zip(zeros) {
            let d = AffineDeformation::new(h.clone(), ray_representative(&h, k).unwrap());
            let a = d.boundary_invariants().unwrap();
            for (i, &v) in a.iter().enumerate() {
                if z.contains(&i) {
                    assert!(v.abs() < 1e-10, "ray {k}: {a:?}");
                } else {
                    assert!(v > 1e-6, "ray {k}: {a:?}");
                }
            }
            assert_eq!(cone_membership(&d).unwrap(), ConeClass::Boundary);
        }
    }

    #[test]
    fn sum_of_rays_is_interior() {
        let h = hol();
        let u = (1..=4)
            .map(|k| ray_representative(&h, k).unwrap())
            .fold(Cocycle::zero(), |a, b| a.add(&b));
        let d = AffineDeformation::new(h.clone(), u);
        assert_eq!(cone_membership(&d).unwrap(), ConeClass::InteriorPlus);
        let d = AffineDeformation::new(h, u.scale(-1.0));
        assert_eq!(cone_membership(&d).unwrap(), ConeClass::InteriorMinus);
    }

    #[test]
    fn relation_holds_for_hyperbolic_boundaries() {
        let h = hol();
        let u = Cocycle::new(Vec3::new(0.3, -0.4, 1.2), Vec3::new(-0.7, 0.2, 0.5));
        let d = AffineDeformation::new(h, u);
        assert!(relation_residual(&d).unwrap() < 1e-9);
        assert!(differentiated_trace_residual(&d) < 1e-9);
    }

    #[test]
    fn differentiated_trace_holds_at_cusps() {
        let u = Cocycle::new(Vec3::new(0.3, -0.4, 1.2), Vec3::new(-0.7, 0.2, 0.5));
        for (la, lb) in [(0.0, 1.0), (1.0, 0.0), (0.0, 0.0)] {
            let h = Holonomy::from_lengths(la, lb, 1.1).unwrap();
            let d = AffineDeformation::new(h, u);
            assert!(differentiated_trace_residual(&d) < 1e-9);
        }
    }

    #[test]
    fn alpha_b_from_relation() {
        let h = hol();
        let u = Cocycle::new(Vec3::new(0.3, -0.4, 1.2), Vec3::new(-0.7, 0.2, 0.5));
        let d = AffineDeformation::new(h.clone(), u);
        let mu = d.mu_coords().unwrap();
        let direct = d.margulis_invariant(&w("B")).unwrap();
        assert!((mu.alpha_b(h.fricke().unwrap()).unwrap() - direct).abs() < 1e-9);
    }

    #[test]
    fn four_ray_solve_and_resolution_preserve_mu() {
        let h = hol();
        let m = mu_matrix(&h).unwrap();
        let target = m * nalgebra::Vector6::new(0.4, 0.9, 1.3, 0.7, 0.0, 0.0);
        let mu = MuCoords::from_vector(&target);
        let c = coefficients_for_mu(&h, &mu).unwrap();
        assert_eq!((c.r_x, c.s_x), (0.0, 0.0));
        let got = m * nalgebra::Vector6::from_row_slice(&c.to_array());
        assert!((got - target).amax() < 1e-10);
        let r = resolve_coefficients(&h, &c).unwrap();
        assert!(r.first_nonpositive().is_none());
        let got = m * nalgebra::Vector6::from_row_slice(&r.to_array());
        assert!((got - target).amax() < 1e-10);
        assert_eq!(resolve_coefficients(&h, &r).unwrap(), r);
    }

    #[test]
    fn rays_are_not_interior_targets() {
        let h = hol();
        let u = ray_representative(&h, 1).unwrap();
        let mu = AffineDeformation::new(h.clone(), u).mu_coords().unwrap();
        assert!(matches!(
            coefficients_for_mu(&h, &mu),
            Err(Error::OutsideCone(_))
        ));
    }

    #[test]
    fn minimum_norm_cocycle_has_requested_mu() {
        let h = hol();
        let mu = MuCoords::new(0.3, -1.0, 2.0);
        let u = cocycle_with_mu(&h, &mu).unwrap();
        let got = AffineDeformation::new(h.clone(), u).mu_coords().unwrap();
        assert!((got.to_vector() - mu.to_vector()).amax() < 1e-10);
        assert!(mu_condition_number(&h).unwrap().is_finite());
    }

    #[test]
    fn tangent_of_constant_path_is_stationary() {
        let t =
            tangent_cocycle(|_| FrickeCoords::complete(0.5, 0.5, 1.0), 0.0, TANGENT_STEP).unwrap();
        assert!(t.stationary);
        assert_eq!(t.cocycle, Cocycle::zero());
    }

    #[test]
    fn tangent_along_ell_x() {
        let path = linear_path([0.7, 1.3, 1.1], [0.0, 0.0, 1.0]);
        let t = tangent_cocycle(&path, 0.0, TANGENT_STEP).unwrap();
        let d = AffineDeformation::new(hol(), t.cocycle);
        assert!((d.margulis_invariant(&w("X")).unwrap() - 1.0).abs() < 1e-4);
        assert!(d.margulis_invariant(&w("A")).unwrap().abs() < 1e-6);
    }

    #[test]
    fn inequality_form() {
        let f = *hol().fricke().unwrap();
        assert_eq!(
            mu_inequality_class(&MuCoords::new(0.1, 1.0, 1.0), &f),
            ConeClass::InteriorPlus
        );
        assert_eq!(
            mu_inequality_class(&MuCoords::new(-0.1, -1.0, -1.0), &f),
            ConeClass::InteriorMinus
        );
        assert_eq!(
            mu_inequality_class(&MuCoords::new(0.0, 1.0, 1.0), &f),
            ConeClass::Boundary
        );
        assert_eq!(
            mu_inequality_class(&MuCoords::new(100.0, 1.0, 1.0), &f),
            ConeClass::Outside
        );
    }
}
