use std::ops::Mul;

use nalgebra::Matrix2;

pub type Mat2 = Matrix2<f64>;

/// Whether a lift is real (`P`) or purely imaginary (`iP`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// The trace of a lift, which is real for even and purely imaginary for odd
/// parity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LiftTrace {
    Real(f64),
    Imaginary(f64),
}

/// An element of `SL(2,C)` of the form `P` (even, `det P = 1`) or `iP` (odd,
/// `det P = -1`) with `P` real.
///
/// Products track the sign exactly: `(iP)(iQ) = -PQ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtSl2 {
    real: Mat2,
    parity: Parity,
}

impl ExtSl2 {
    /// Builds a lift without checking the determinant.
    pub fn new_unchecked(real: Mat2, parity: Parity) -> Self {
        ExtSl2 { real, parity }
    }

    /// Builds a lift, checking `det P = +1` (even) or `-1` (odd) to `tol`.
    pub fn new(real: Mat2, parity: Parity, tol: f64) -> crate::Result<Self> {
        let want = match parity {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        if (real.determinant() - want).abs() > tol {
            return Err(crate::Error::Parity(match parity {
                Parity::Even => "even lift needs det P = +1",
                Parity::Odd => "odd lift needs det P = -1",
            }));
        }
        Ok(ExtSl2 { real, parity })
    }

    pub fn identity() -> Self {
        ExtSl2 {
            real: Mat2::identity(),
            parity: Parity::Even,
        }
    }

    pub fn real_part(&self) -> &Mat2 {
        &self.real
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// `tr P`; the trace of the lift is this value times `1` or `i`.
    pub fn real_trace(&self) -> f64 {
        self.real.trace()
    }

    pub fn trace(&self) -> LiftTrace {
        match self.parity {
            Parity::Even => LiftTrace::Real(self.real.trace()),
            Parity::Odd => LiftTrace::Imaginary(self.real.trace()),
        }
    }

    pub fn inverse(&self) -> Self {
        // adj(P) / det(P) with det = +-1 exactly.
        let p = &self.real;
        let adj = Mat2::new(p[(1, 1)], -p[(0, 1)], -p[(1, 0)], p[(0, 0)]);
        match self.parity {
            // P^{-1} = adj P
            Parity::Even => ExtSl2 {
                real: adj,
                parity: Parity::Even,
            },
            // (iP)^{-1} = -i P^{-1} = -i (-adj P) = i adj P
            Parity::Odd => ExtSl2 {
                real: adj,
                parity: Parity::Odd,
            },
        }
    }

    pub fn neg(&self) -> Self {
        ExtSl2 {
            real: -self.real,
            parity: self.parity,
        }
    }

    pub fn max_abs_diff(&self, other: &ExtSl2) -> f64 {
        if self.parity != other.parity {
            return f64::INFINITY;
        }
        (self.real - other.real).amax()
    }
}

impl Mul for ExtSl2 {
    type Output = ExtSl2;
    fn mul(self, rhs: ExtSl2) -> ExtSl2 {
        let prod = self.real * rhs.real;
        let real = if self.parity.is_odd() && rhs.parity.is_odd() {
            -prod
        } else {
            prod
        };
        ExtSl2 {
            real,
            parity: self.parity + rhs.parity,
        }
    }
}

impl Mul for &ExtSl2 {
    type Output = ExtSl2;
    fn mul(self, rhs: &ExtSl2) -> ExtSl2 {
        *self * *rhs
    }
}
