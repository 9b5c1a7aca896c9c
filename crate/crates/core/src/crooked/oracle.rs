//! Monte Carlo evidence for disjointness: points sampled on one crooked
//! plane, classified strictly against another.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CrookedPlane;
use crate::minkowski::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct OracleParams {
    pub samples: usize,
    /// Euclidean truncation radius around the vertex.
    pub radius: f64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            samples: 10_000,
            radius: 10.0,
            tol: 1e-7,
            seed: 0x5eed,
        }
    }
}

/// Stream-separated generator: equal `(seed, stream)` give equal samples.
pub(crate) fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `n` points of `C` within Euclidean distance `radius` of its vertex,
/// split evenly between the stem and the two wings.
pub fn sample_plane<R: Rng>(c: &CrookedPlane, n: usize, radius: f64, rng: &mut R) -> Vec<Vec3> {
    let xp = c.x_plus().normalize();
    let xm = c.x_minus().normalize();
    let v = c.director.normalize();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let d = match out.len() % 3 {
            0 => xp * rng.gen_range(-radius..=radius) + v * rng.gen_range(0.0..=radius),
            1 => xm * rng.gen_range(-radius..=radius) - v * rng.gen_range(0.0..=radius),
            _ => {
                let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                (xm * rng.gen_range(0.0..=radius) + xp * rng.gen_range(0.0..=radius)) * sign
            }
        };
        if d.norm() <= radius {
            out.push(c.vertex + d);
        }
    }
    out
}

/// Samples of `c1` that are not strictly on the majority side of `c2`.
/// Zero witnesses is consistent with `c1 ∩ c2 = ∅`.
pub fn witnesses(c1: &CrookedPlane, c2: &CrookedPlane, p: &OracleParams, stream: u64) -> usize {
    let mut rng = rng_for(p.seed, stream);
    let pts = sample_plane(c1, p.samples, p.radius, &mut rng);
    let (mut plus, mut minus) = (0usize, 0usize);
    for q in &pts {
        match c2.side(q, p.tol) {
            1 => plus += 1,
            -1 => minus += 1,
            _ => {}
        }
    }
    pts.len() - plus.max(minus)
}
