use thiserror::Error;

use crate::lorentz::IsometryClass;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid length {name} = {value}: {reason}")]
    InvalidLength {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("inconsistent Fricke coordinates: cos(theta) = {cos_theta}")]
    InconsistentAngle { cos_theta: f64 },

    #[error("elliptic element (trace {trace}) has no translation length")]
    Elliptic { trace: f64 },

    #[error("element is {class:?}; a non-elliptic, non-identity isometry is required")]
    NotHyperbolic { class: IsometryClass },

    #[error("parity mismatch: {0}")]
    Parity(&'static str),

    #[error("not a Lorentz isometry: {0}")]
    NotLorentz(String),

    #[error("vector is not spacelike (v.v = {norm2})")]
    NotSpacelike { norm2: f64 },

    #[error("invalid word: {0}")]
    Word(String),

    #[error("coefficient {name} = {value} is not strictly positive: kissing configuration (resolve the kissing first)")]
    Kissing { name: &'static str, value: f64 },

    #[error("target is not in the open positive cone: {0}")]
    OutsideCone(String),

    #[error("kissing resolution failed: {0}")]
    KissingUnresolved(String),

    #[error("crooked planes {0} and {1} are not certified disjoint (margin {2})")]
    NotDisjoint(usize, usize, f64),

    #[error("invalid mesh radius {0}: must be positive and finite")]
    MeshRadius(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
