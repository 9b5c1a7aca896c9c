//! The adjoint representation `SL(2,C) ⊃ {P, iP} → SO(2,1)`, classification
//! of isometries, neutral frames and the ideal quadrilateral of a holonomy.

use std::f64::consts::TAU;

use crate::holonomy::{ExtSl2, Holonomy, Parity};
use crate::minkowski::{eta, lorentz_cross, orientation, Mat3, Minkowski, Vec3};
use crate::{Error, Result};

/// Trace slack for the classification thresholds `3` and `-1`.
pub const CLASSIFY_TOL: f64 = 1e-7;
/// Entrywise bound on `MᵀηM − η`.
pub const LORENTZ_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Transvection,
    GlideReflection,
}

impl IsometryClass {
    pub fn is_hyperbolic(self) -> bool {
        matches!(
            self,
            IsometryClass::Transvection | IsometryClass::GlideReflection
        )
    }
}

/// An element of `SO(2,1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzMap(Mat3);

impl LorentzMap {
    pub fn new(m: Mat3) -> Result<LorentzMap> {
        let l = LorentzMap(m);
        if l.form_residual() >= LORENTZ_TOL {
            return Err(Error::NotLorentz(format!(
                "|MᵀηM − η| = {:e}",
                l.form_residual()
            )));
        }
        if (m.determinant() - 1.0).abs() >= LORENTZ_TOL {
            return Err(Error::NotLorentz(format!("det M = {}", m.determinant())));
        }
        Ok(l)
    }

    pub fn new_unchecked(m: Mat3) -> LorentzMap {
        LorentzMap(m)
    }

    pub fn identity() -> LorentzMap {
        LorentzMap(Mat3::identity())
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    pub fn compose(&self, other: &LorentzMap) -> LorentzMap {
        LorentzMap(self.0 * other.0)
    }

    /// `η Mᵀ η`.
    pub fn inverse(&self) -> LorentzMap {
        let e = eta();
        LorentzMap(e * self.0.transpose() * e)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn reverses_time(&self) -> bool {
        self.0[(2, 2)] < 0.0
    }

    /// Entrywise `max |MᵀηM − η|`.
    pub fn form_residual(&self) -> f64 {
        let e = eta();
        (self.0.transpose() * e * self.0 - e).amax()
    }

    /// Residuals of `det M = 1` and of the fixed vector, both relative to the
    /// scale of `M` so that long words are judged on the same footing.
    pub fn orientability_residuals(&self) -> (f64, f64) {
        self.residuals_with(deflate(&(self.0 - Mat3::identity())))
    }

    fn residuals_with(&self, fixed: Option<Vec3>) -> (f64, f64) {
        let scale = self.0.amax().max(1.0);
        let det = (det3(&self.0) - 1.0).abs() / (scale * scale);
        let fixed = match fixed {
            Some(v) => (self.0 * v - v).amax() / (scale * v.amax()),
            None => 0.0,
        };
        (det, fixed)
    }

    /// Unit-spacelike (or null) vector spanning the kernel of `M − I`.
    pub fn fixed_vector(&self) -> Option<Vec3> {
        deflate(&(self.0 - Mat3::identity()))
    }
}

/// `ab − cd` with one rounding error.
fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = c * d;
    let e = (-c).mul_add(d, w);
    a.mul_add(b, -w) + e
}

/// Cofactor expansion with compensated 2×2 minors: the error is `O(ε s²)`
/// for a Lorentz map of scale `s`, whose cofactors have size `s`.
fn det3(m: &Mat3) -> f64 {
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
        diff_of_products(m[(r0, c0)], m[(r1, c1)], m[(r0, c1)], m[(r1, c0)])
    };
    m[(0, 0)] * minor(1, 2, 1, 2) - m[(0, 1)] * minor(1, 2, 0, 2) + m[(0, 2)] * minor(1, 2, 0, 1)
}

/// Orientability residuals of `Ad(g)`, measured against the traceless part
/// of the lift, which commutes with `g` and so spans a fixed line.
pub fn lift_orientability_residuals(g: &ExtSl2) -> (f64, f64) {
    let p = g.real_part();
    let axis = sl2_to_vec(&(p - crate::holonomy::Mat2::identity() * (p.trace() / 2.0)));
    let m = ad_to_lorentz(g);
    if axis.amax() == 0.0 {
        m.orientability_residuals()
    } else {
        m.residuals_with(Some(axis))
    }
}

/// Euclidean-unit vector in the kernel of a rank-2 matrix: the largest cross
/// product of a pair of its rows.
fn deflate(k: &Mat3) -> Option<Vec3> {
    let rows = [
        k.row(0).transpose(),
        k.row(1).transpose(),
        k.row(2).transpose(),
    ];
    let cands = [
        rows[0].cross(&rows[1]),
        rows[0].cross(&rows[2]),
        rows[1].cross(&rows[2]),
    ];
    let best = cands
        .iter()
        .max_by(|a, b| a.norm_squared().total_cmp(&b.norm_squared()))
        .copied()?;
    let n = best.norm();
    if n == 0.0 || !n.is_finite() {
        None
    } else {
        Some(best / n)
    }
}

/// `(a, (b+c)/2, (b−c)/2)` for the traceless matrix `[[a, b], [c, −a]]`.
fn sl2_to_vec(m: &crate::holonomy::Mat2) -> Vec3 {
    Vec3::new(
        (m[(0, 0)] - m[(1, 1)]) / 2.0,
        (m[(0, 1)] + m[(1, 0)]) / 2.0,
        (m[(0, 1)] - m[(1, 0)]) / 2.0,
    )
}

fn vec_to_sl2(v: &Vec3) -> crate::holonomy::Mat2 {
    crate::holonomy::Mat2::new(v.x, v.y + v.z, v.y - v.z, -v.x)
}

/// Identification of the Lie algebra `sl(2,R)` with Minkowski space.
pub fn lie_to_vec(m: &crate::holonomy::Mat2) -> Vec3 {
    sl2_to_vec(m)
}

pub fn vec_to_lie(v: &Vec3) -> crate::holonomy::Mat2 {
    vec_to_sl2(v)
}

/// The conjugation action of a lift on `sl(2,R)` in the basis
/// `e1 = [[1,0],[0,−1]]`, `e2 = [[0,1],[1,0]]`, `e3 = [[0,1],[−1,0]]`.
pub fn ad_to_lorentz(g: &ExtSl2) -> LorentzMap {
    let p = g.real_part();
    let det = p.determinant();
    let adj = crate::holonomy::Mat2::new(p[(1, 1)], -p[(0, 1)], -p[(1, 0)], p[(0, 0)]);
    let pinv = adj / det;
    let cols: Vec<Vec3> = [Vec3::x(), Vec3::y(), Vec3::z()]
        .iter()
        .map(|e| sl2_to_vec(&(p * vec_to_sl2(e) * pinv)))
        .collect();
    LorentzMap(Mat3::from_columns(&cols))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: IsometryClass,
    /// Trace within [`CLASSIFY_TOL`] of `3` or `-1`.
    pub near_threshold: bool,
}

pub fn classify(m: &LorentzMap, parity: Parity) -> Classification {
    classify_trace(m.trace(), m, parity)
}

/// Classification of a lift from its 2×2 trace: `tr Ad(p) = det(p) tr(p)² − 1`.
/// Stays reliable for long words whose adjoint entries lose precision.
pub fn classify_lift(g: &ExtSl2) -> Classification {
    let p = g.real_part();
    let t = match g.parity() {
        Parity::Even => p.trace().powi(2) - 1.0,
        Parity::Odd => -p.trace().powi(2) - 1.0,
    };
    classify_trace(t, &ad_to_lorentz(g), g.parity())
}

fn classify_trace(t: f64, m: &LorentzMap, parity: Parity) -> Classification {
    let near_threshold = (t - 3.0).abs() <= CLASSIFY_TOL || (t + 1.0).abs() <= CLASSIFY_TOL;
    let class = if parity == Parity::Even && t > 3.0 + CLASSIFY_TOL {
        IsometryClass::Transvection
    } else if parity == Parity::Even && (t - 3.0).abs() <= CLASSIFY_TOL {
        if (m.0 - Mat3::identity()).amax() <= CLASSIFY_TOL {
            IsometryClass::Identity
        } else {
            IsometryClass::Parabolic
        }
    } else if parity == Parity::Odd && t < -1.0 - CLASSIFY_TOL && m.reverses_time() {
        IsometryClass::GlideReflection
    } else {
        IsometryClass::Elliptic
    };
    Classification {
        class,
        near_threshold,
    }
}

/// Contracting, neutral and expanding directions of a non-elliptic isometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NeutralFrame {
    pub x_minus: Vec3,
    pub x_zero: Vec3,
    pub x_plus: Vec3,
    pub class: IsometryClass,
}

/// Null vectors spanning `v⊥` for a spacelike `v`, normalized to `x3 = 1`
/// and labelled so that `(x⁻, x⁺, v)` is positively oriented.
pub fn null_frame(v: &Vec3) -> Result<(Vec3, Vec3)> {
    let q = v.mnorm2();
    if !(q > 0.0) {
        return Err(Error::NotSpacelike { norm2: q });
    }
    // (a, b, 1) with a v1 + b v2 = v3 on the unit circle
    let r2 = v.x * v.x + v.y * v.y;
    let r = r2.sqrt();
    let foot = Vec3::new(v.x, v.y, 0.0) * (v.z / r2);
    let along = Vec3::new(-v.y, v.x, 0.0) * ((q / r2).sqrt() / r);
    let (a, b) = (foot + along + Vec3::z(), foot - along + Vec3::z());
    if orientation(&a, &b, v) > 0.0 {
        Ok((a, b))
    } else {
        Ok((b, a))
    }
}

pub fn neutral_frame(m: &LorentzMap, parity: Parity) -> Result<NeutralFrame> {
    frame_with(m, classify(m, parity).class, None)
}

/// `hyperbolic_axis`, unit spacelike, replaces the kernel of `M − I` for
/// hyperbolic classes.
fn frame_with(
    m: &LorentzMap,
    class: IsometryClass,
    hyperbolic_axis: Option<Vec3>,
) -> Result<NeutralFrame> {
    let m2 = m.0 * m.0;
    let probe = Vec3::z();
    let handed = |x0: Vec3| {
        if orientation(&probe, &(m2 * probe), &x0) < 0.0 {
            -x0
        } else {
            x0
        }
    };
    match class {
        IsometryClass::Identity | IsometryClass::Elliptic => Err(Error::NotHyperbolic { class }),
        IsometryClass::Parabolic => {
            let x0 = handed(m.fixed_vector().ok_or(Error::NotHyperbolic { class })?);
            let n = x0.future().normalize_x3();
            Ok(NeutralFrame {
                x_minus: n,
                x_zero: x0,
                x_plus: n,
                class,
            })
        }
        IsometryClass::Transvection | IsometryClass::GlideReflection => {
            let v = match hyperbolic_axis {
                Some(v) => v,
                None => m
                    .fixed_vector()
                    .ok_or(Error::NotHyperbolic { class })?
                    .normalize_spacelike(),
            };
            let x0 = handed(v);
            let (a, b) = null_frame(&x0)?;
            let ratio = |n: &Vec3| (m2 * n).z / n.z;
            let (x_minus, x_plus) = if ratio(&a) < ratio(&b) {
                (a, b)
            } else {
                (b, a)
            };
            Ok(NeutralFrame {
                x_minus,
                x_zero: x0,
                x_plus,
                class,
            })
        }
    }
}

/// The neutral frame of a lift. For hyperbolic lifts the axis is the
/// traceless part `p − (tr p / 2) I`, which commutes with `p` and stays
/// accurate when the adjoint image is badly conditioned.
pub fn frame_of(g: &ExtSl2) -> Result<NeutralFrame> {
    let p = g.real_part();
    let h = p.trace() / 2.0;
    let det = match g.parity() {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    // |axis|² = −det(p − hI) = h² − det p
    let axis = sl2_to_vec(&(p - crate::holonomy::Mat2::identity() * h)) / (h * h - det).sqrt();
    let m = ad_to_lorentz(g);
    frame_with(&m, classify_lift(g).class, Some(axis))
}

/// Vertices of the fundamental ideal quadrilateral, as future null vectors
/// with `x3 = 1`, in the order `x⁺(B), x⁻(A), A x⁺(B), X(−x⁺(B))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdealQuadrilateral {
    pub xb_plus: Vec3,
    pub xa_minus: Vec3,
    pub a_xb_plus: Vec3,
    pub x_neg_xb_plus: Vec3,
}

impl IdealQuadrilateral {
    pub fn vertices(&self) -> [Vec3; 4] {
        [
            self.xb_plus,
            self.xa_minus,
            self.a_xb_plus,
            self.x_neg_xb_plus,
        ]
    }
}

/// Relative failure of `A x⁺(B) ∝ X² x⁺(B)` with a positive factor.
pub const QUADRILATERAL_TOL: f64 = 1e-9;

pub fn ideal_quadrilateral(h: &Holonomy) -> Result<IdealQuadrilateral> {
    let fa = frame_of(h.a())?;
    let fb = frame_of(h.b())?;
    let la = ad_to_lorentz(h.a());
    let lx = ad_to_lorentz(h.x());
    let xb = fb.x_plus;
    let a_xb = la.apply(&xb);
    let x2_xb = lx.apply(&lx.apply(&xb));
    let cross = a_xb.cross(&x2_xb).norm() / (a_xb.norm() * x2_xb.norm());
    if cross > QUADRILATERAL_TOL || a_xb.dot(&x2_xb) <= 0.0 {
        return Err(Error::NotLorentz(format!(
            "A x⁺(B) and X² x⁺(B) are not positively proportional (sin = {cross:e})"
        )));
    }
    Ok(IdealQuadrilateral {
        xb_plus: xb,
        xa_minus: fa.x_minus,
        a_xb_plus: a_xb.normalize_x3(),
        x_neg_xb_plus: lx.apply(&-xb).normalize_x3(),
    })
}

/// Indices of `vs` sorted by counter-clockwise angle in the disc `x3 = 1`,
/// starting from `vs[0]`.
pub fn cyclic_order(vs: &[Vec3]) -> Vec<usize> {
    if vs.is_empty() {
        return Vec::new();
    }
    let base = crate::minkowski::disc_angle(&vs[0]);
    let mut idx: Vec<usize> = (0..vs.len()).collect();
    idx.sort_by(|&i, &j| {
        let ai = (crate::minkowski::disc_angle(&vs[i]) - base).rem_euclid(TAU);
        let aj = (crate::minkowski::disc_angle(&vs[j]) - base).rem_euclid(TAU);
        ai.total_cmp(&aj)
    });
    idx
}

/// Open arc of ideal points `{n : n·u > 0}` as (start angle, length).
fn ideal_arc(u: &Vec3) -> Result<(f64, f64)> {
    let (a, b) = null_frame(u)?;
    let (ta, tb) = (
        crate::minkowski::disc_angle(&a),
        crate::minkowski::disc_angle(&b),
    );
    let len = (tb - ta).rem_euclid(TAU);
    let mid = ta + len / 2.0;
    if Vec3::new(mid.cos(), mid.sin(), 1.0).mdot(u) > 0.0 {
        Ok((ta, len))
    } else {
        Ok((tb, TAU - len))
    }
}

/// Slack in radians for arcs sharing an endpoint.
const ARC_TOL: f64 = 1e-9;

fn arcs_disjoint(p: (f64, f64), q: (f64, f64)) -> bool {
    let d = (q.0 - p.0).rem_euclid(TAU);
    let e = (p.0 - q.0).rem_euclid(TAU);
    d >= p.1 - ARC_TOL && e >= q.1 - ARC_TOL
}

/// Normals of the four hyperbolic halfplanes bounded by the sides of the
/// quadrilateral: `𝔥_A`, `Ā(𝔥_A^c)`, `𝔥_X`, `X̄(𝔥_X^c)`.
pub fn template_normals(q: &IdealQuadrilateral, h: &Holonomy) -> Result<[Vec3; 4]> {
    let va = side_normal(&q.a_xb_plus, &q.xa_minus)?;
    let vx = side_normal(&q.x_neg_xb_plus, &q.a_xb_plus)?;
    let ainv = ad_to_lorentz(&h.a().inverse());
    let xinv = ad_to_lorentz(&h.x().inverse());
    Ok([va, -ainv.apply(&va), vx, xinv.apply(&vx)])
}

/// Unit spacelike normal of the geodesic from `m` to `p` with null frame
/// `(x⁻, x⁺) = (m, p)`.
pub fn side_normal(m: &Vec3, p: &Vec3) -> Result<Vec3> {
    let w = lorentz_cross(m, p);
    let q = w.mnorm2();
    if !(q > 0.0) {
        return Err(Error::NotSpacelike { norm2: q });
    }
    let v = w.normalize_spacelike();
    let (a, _) = null_frame(&v)?;
    if (a - m.normalize_x3()).amax() < (a - p.normalize_x3()).amax() {
        Ok(v)
    } else {
        Ok(-v)
    }
}

/// Pairwise disjointness of halfplanes given by spacelike normals, decided
/// on their ideal boundary arcs.
pub fn halfplanes_disjoint(normals: &[Vec3]) -> bool {
    let arcs: Result<Vec<_>> = normals.iter().map(ideal_arc).collect();
    let Ok(arcs) = arcs else { return false };
    for i in 0..arcs.len() {
        for j in i + 1..arcs.len() {
            if !arcs_disjoint(arcs[i], arcs[j]) {
                return false;
            }
        }
    }
    true
}

pub fn halfplane_template_check(h: &Holonomy) -> bool {
    let Ok(q) = ideal_quadrilateral(h) else {
        return false;
    };
    match template_normals(&q, h) {
        Ok(n) => halfplanes_disjoint(&n),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::Mat2;

    fn transvection(l: f64) -> ExtSl2 {
        ExtSl2::new_unchecked(
            Mat2::new((l / 2.0).exp(), 0.0, 0.0, (-l / 2.0).exp()),
            Parity::Even,
        )
    }

    fn glide(l: f64) -> ExtSl2 {
        ExtSl2::new_unchecked(
            Mat2::new((l / 2.0).exp(), 0.0, 0.0, -(-l / 2.0).exp()),
            Parity::Odd,
        )
    }

    #[test]
    fn displayed_matrices() {
        for l in [0.1, 1.0, 5.0] {
            let (c, s) = (f64::cosh(l), f64::sinh(l));
            let m = ad_to_lorentz(&transvection(l));
            let want = Mat3::new(1.0, 0.0, 0.0, 0.0, c, s, 0.0, s, c);
            assert!((m.matrix() - want).amax() < 1e-12 * c);
            let m = ad_to_lorentz(&glide(l));
            let want = Mat3::new(1.0, 0.0, 0.0, 0.0, -c, -s, 0.0, -s, -c);
            assert!((m.matrix() - want).amax() < 1e-12 * c);
        }
        assert_eq!(
            *ad_to_lorentz(&ExtSl2::identity()).matrix(),
            Mat3::identity()
        );
    }

    #[test]
    fn classification_examples() {
        let t = ad_to_lorentz(&transvection(1.0));
        assert_eq!(
            classify(&t, Parity::Even).class,
            IsometryClass::Transvection
        );
        let g = ad_to_lorentz(&glide(1.0));
        assert_eq!(
            classify(&g, Parity::Odd).class,
            IsometryClass::GlideReflection
        );
        let u = ad_to_lorentz(&ExtSl2::new_unchecked(
            Mat2::new(1.0, 1.0, 0.0, 1.0),
            Parity::Even,
        ));
        assert!((u.trace() - 3.0).abs() < 1e-15);
        let c = classify(&u, Parity::Even);
        assert_eq!(c.class, IsometryClass::Parabolic);
        assert!(c.near_threshold);
        let id = classify(&LorentzMap::identity(), Parity::Even);
        assert_eq!(id.class, IsometryClass::Identity);
        let r = ExtSl2::new_unchecked(
            Mat2::new(0.3f64.cos(), -0.3f64.sin(), 0.3f64.sin(), 0.3f64.cos()),
            Parity::Even,
        );
        assert_eq!(
            classify(&ad_to_lorentz(&r), Parity::Even).class,
            IsometryClass::Elliptic
        );
    }

    #[test]
    fn transvection_frame() {
        let f = frame_of(&transvection(1.0)).unwrap();
        assert!((f.x_zero - Vec3::x()).amax() < 1e-12);
        assert!((f.x_minus - Vec3::new(0.0, -1.0, 1.0)).amax() < 1e-12);
        assert!((f.x_plus - Vec3::new(0.0, 1.0, 1.0)).amax() < 1e-12);
    }

    #[test]
    fn glide_frame_is_that_of_its_square() {
        // M² is the transvection of length 2ℓ, so the frame agrees with it
        let f = frame_of(&glide(1.0)).unwrap();
        assert!((f.x_zero - Vec3::x()).amax() < 1e-12);
        assert!((f.x_minus - Vec3::new(0.0, -1.0, 1.0)).amax() < 1e-12);
        assert!((f.x_plus - Vec3::new(0.0, 1.0, 1.0)).amax() < 1e-12);
        let m = ad_to_lorentz(&glide(1.0));
        let m2 = m.matrix() * m.matrix();
        let lam2 = (-2.0f64).exp();
        assert!((m2 * f.x_minus - lam2 * f.x_minus).amax() < 1e-10);
        assert!((m2 * f.x_plus - f.x_plus / lam2).amax() < 1e-9);
        assert!((m.apply(&f.x_zero) - f.x_zero).amax() < 1e-12);
    }

    #[test]
    fn parabolic_frame() {
        // shear fixing the null line through (0,1,1)
        let u = ExtSl2::new_unchecked(Mat2::new(1.0, 1.0, 0.0, 1.0), Parity::Even);
        let f = frame_of(&u).unwrap();
        assert_eq!(f.class, IsometryClass::Parabolic);
        assert_eq!(f.x_plus, f.x_minus);
        assert!((f.x_plus - Vec3::new(0.0, 1.0, 1.0)).amax() < 1e-12);
        assert!(f.x_zero.cross(&f.x_plus).norm() < 1e-12);
        assert!((f.x_zero.norm() - 1.0).abs() < 1e-12);
        let m2 = {
            let m = ad_to_lorentz(&u);
            m.matrix() * m.matrix()
        };
        assert!(orientation(&Vec3::z(), &(m2 * Vec3::z()), &f.x_zero) > 0.0);
    }

    #[test]
    fn elliptic_and_identity_have_no_frame() {
        assert!(frame_of(&ExtSl2::identity()).is_err());
        let r = ExtSl2::new_unchecked(Mat2::new(0.0, -1.0, 1.0, 0.0), Parity::Even);
        assert!(matches!(frame_of(&r), Err(Error::NotHyperbolic { .. })));
    }

    #[test]
    fn null_frame_of_unit_director() {
        let (m, p) = null_frame(&Vec3::x()).unwrap();
        assert_eq!(m, Vec3::new(0.0, -1.0, 1.0));
        assert_eq!(p, Vec3::new(0.0, 1.0, 1.0));
        assert!(null_frame(&Vec3::z()).is_err());
    }

    #[test]
    fn inverse_and_validation() {
        let m = ad_to_lorentz(&glide(0.8));
        assert!(LorentzMap::new(*m.matrix()).is_ok());
        assert!((m.compose(&m.inverse()).matrix() - Mat3::identity()).amax() < 1e-12);
        assert!(m.reverses_time());
        assert!(LorentzMap::new(Mat3::identity() * 2.0).is_err());
        let (d, f) = m.orientability_residuals();
        assert!(d < 1e-12 && f < 1e-12);
    }

    #[test]
    fn long_word_residuals_stay_at_rounding_level() {
        let h = Holonomy::from_lengths(3.5, 3.9, 0.3).unwrap();
        let g = h.evaluate(&"YYYYYx".parse().unwrap());
        assert!(ad_to_lorentz(&g).matrix().amax() > 1e12);
        let (d, f) = lift_orientability_residuals(&g);
        assert!(d < 1e-12 && f < 1e-12, "{d} {f}");
    }

    #[test]
    fn symmetric_quadrilateral() {
        let h = Holonomy::from_lengths(0.0, 0.0, 2.0 * 1f64.asinh()).unwrap();
        let q = ideal_quadrilateral(&h).unwrap();
        let vs = q.vertices();
        for i in 0..4 {
            assert!(vs[i].mnorm2().abs() < 1e-12 && (vs[i].z - 1.0).abs() < 1e-15);
            for j in i + 1..4 {
                assert!(vs[i].cross(&vs[j]).norm() > 1e-3);
            }
        }
        assert!(halfplane_template_check(&h));
    }

    #[test]
    fn swapped_vertices_fail_template() {
        let h = Holonomy::from_lengths(0.5, 0.7, 1.2).unwrap();
        let q = ideal_quadrilateral(&h).unwrap();
        let bad = IdealQuadrilateral {
            xa_minus: q.a_xb_plus,
            a_xb_plus: q.xa_minus,
            ..q
        };
        let n = template_normals(&bad, &h).unwrap();
        assert!(!halfplanes_disjoint(&n));
    }

    #[test]
    fn arc_disjointness() {
        assert!(arcs_disjoint((0.0, 1.0), (1.0, 1.0)));
        assert!(!arcs_disjoint((0.0, 1.5), (1.0, 1.0)));
        assert!(arcs_disjoint((6.0, 0.5), (0.3, 1.0)));
        assert!(!arcs_disjoint((6.0, 1.0), (0.3, 1.0)));
    }
}
