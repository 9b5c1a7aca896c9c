//! Minkowski 3-space `R^{2,1}` with the form `x1*y1 + x2*y2 - x3*y3`.
//!
//! Vectors are plain `nalgebra` column vectors; the Lorentzian operations
//! live on the [`Minkowski`] extension trait. The time orientation is the
//! nappe with `x3 > 0`.
//!
//! The vector space carries the orientation in which the coordinate basis
//! `(e1, e2, e3)` is *negatively* oriented, i.e. [`orientation`] is the
//! negated coordinate determinant. With this orientation the neutral vector
//! of `diag(e^{l/2}, e^{-l/2})` is `+e1` and every sign convention downstream
//! (neutral vectors, null frames of directors, crooked halfspaces) agrees
//! with the positive cone of lengthening deformations.

use nalgebra::{Matrix3, Vector3};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// `diag(1, 1, -1)`.
pub fn eta() -> Mat3 {
    Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0))
}

/// Causal character of a vector relative to the light cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Causal {
    Zero,
    Spacelike,
    Timelike,
    Lightlike,
}

pub trait Minkowski {
    /// Lorentzian inner product.
    fn mdot(&self, other: &Self) -> f64;
    /// Lorentzian quadratic form `v.v`.
    fn mnorm2(&self) -> f64;
    /// Causal character. `tol` is relative to the squared Euclidean norm.
    fn causal(&self, tol: f64) -> Causal;
    fn is_future_pointing(&self) -> bool;
    /// `self` or `-self`, whichever has `x3 >= 0`.
    fn future(&self) -> Self;
    /// Rescales a causal vector to `x3 = 1`.
    fn normalize_x3(&self) -> Self;
    /// Rescales a spacelike vector to `v.v = 1`.
    fn normalize_spacelike(&self) -> Self;
}

impl Minkowski for Vec3 {
    fn mdot(&self, o: &Self) -> f64 {
        self.x * o.x + self.y * o.y - self.z * o.z
    }

    fn mnorm2(&self) -> f64 {
        self.mdot(self)
    }

    fn causal(&self, tol: f64) -> Causal {
        let e = self.norm_squared();
        if e == 0.0 {
            return Causal::Zero;
        }
        let q = self.mnorm2();
        if q.abs() <= tol * e {
            Causal::Lightlike
        } else if q > 0.0 {
            Causal::Spacelike
        } else {
            Causal::Timelike
        }
    }

    fn is_future_pointing(&self) -> bool {
        self.z > 0.0
    }

    fn future(&self) -> Self {
        if self.z < 0.0 {
            -self
        } else {
            *self
        }
    }

    fn normalize_x3(&self) -> Self {
        self / self.z
    }

    fn normalize_spacelike(&self) -> Self {
        self / self.mnorm2().sqrt()
    }
}

/// Lorentzian cross product: the unique vector with `(a ⊠ b).c = det[a b c]`.
pub fn lorentz_cross(a: &Vec3, b: &Vec3) -> Vec3 {
    let c = a.cross(b);
    Vec3::new(c.x, c.y, -c.z)
}

/// Orientation form of `V`; positive on right-handed triples.
pub fn orientation(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    -Mat3::from_columns(&[*a, *b, *c]).determinant()
}

/// Angle of a causal vector's projective image in the disc `x3 = 1`.
pub fn disc_angle(v: &Vec3) -> f64 {
    let n = v.normalize_x3();
    n.y.atan2(n.x)
}
