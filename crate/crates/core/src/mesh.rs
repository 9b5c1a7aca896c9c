//! Wavefront OBJ export of truncated crooked planes.
//!
//! The stem is fanned from the vertex over 64 boundary arc segments, half on
//! each timelike sector. Each wing is a half-disc in its own plane, meshed by
//! a polar grid of quads split into two triangles; the innermost ring is a fan.

use std::fmt::Write as _;
use std::path::Path;

use crate::crooked::CrookedPlane;
use crate::minkowski::Vec3;
use crate::{Error, Result};

pub const STEM_SEGMENTS: usize = 64;
const WING_RINGS: usize = 8;
const WING_SEGMENTS: usize = 32;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3>,
    /// 0-indexed.
    pub faces: Vec<[usize; 3]>,
}

impl TriangleMesh {
    fn push(&mut self, p: Vec3) -> usize {
        self.vertices.push(p);
        self.vertices.len() - 1
    }

    /// `v` lines then 1-indexed `f` lines, LF endings.
    pub fn to_obj(&self) -> String {
        let mut s = String::new();
        for v in &self.vertices {
            writeln!(s, "v {} {} {}", v.x, v.y, v.z).unwrap();
        }
        for f in &self.faces {
            writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
        }
        s
    }
}

/// Arc of radius `r` from unit `a` to unit `b` (angle `< π`), `n` segments.
fn arc(a: &Vec3, b: &Vec3, r: f64, n: usize) -> Vec<Vec3> {
    let w = a.dot(b).clamp(-1.0, 1.0).acos();
    let s = w.sin();
    (0..=n)
        .map(|k| {
            let t = k as f64 / n as f64;
            (a * ((1.0 - t) * w).sin() + b * (t * w).sin()) / s * r
        })
        .collect()
}

fn stem(m: &mut TriangleMesh, c: &CrookedPlane, r: f64) {
    let xp = c.x_plus().normalize();
    let xm = c.x_minus().normalize();
    let centre = m.push(c.vertex);
    for sign in [1.0, -1.0] {
        let pts: Vec<usize> = arc(&(xp * sign), &(xm * sign), r, STEM_SEGMENTS / 2)
            .into_iter()
            .map(|d| m.push(c.vertex + d))
            .collect();
        for w in pts.windows(2) {
            m.faces.push([centre, w[0], w[1]]);
        }
    }
}

/// Half-disc `{a e + b f : b ≥ 0, a² + b² ≤ r²}` about the vertex.
fn wing(m: &mut TriangleMesh, c: &CrookedPlane, e: &Vec3, toward: &Vec3, r: f64) {
    let f = (toward - e * e.dot(toward)).normalize();
    let centre = m.push(c.vertex);
    let ring = |m: &mut TriangleMesh, k: usize| -> Vec<usize> {
        let rk = r * k as f64 / WING_RINGS as f64;
        (0..=WING_SEGMENTS)
            .map(|j| {
                let th = std::f64::consts::PI * j as f64 / WING_SEGMENTS as f64;
                m.push(c.vertex + (e * th.cos() + f * th.sin()) * rk)
            })
            .collect()
    };
    let mut inner = ring(m, 1);
    for w in inner.windows(2) {
        m.faces.push([centre, w[0], w[1]]);
    }
    for k in 2..=WING_RINGS {
        let outer = ring(m, k);
        for j in 0..WING_SEGMENTS {
            let (a, b, c2, d) = (inner[j], inner[j + 1], outer[j + 1], outer[j]);
            m.faces.push([a, b, c2]);
            m.faces.push([a, c2, d]);
        }
        inner = outer;
    }
}

/// Triangulation of `C` truncated at Euclidean distance `radius` from its
/// vertex.
pub fn crooked_mesh(c: &CrookedPlane, radius: f64) -> Result<TriangleMesh> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::MeshRadius(radius));
    }
    let mut m = TriangleMesh::default();
    stem(&mut m, c, radius);
    let v = c.director;
    wing(&mut m, c, &c.x_plus().normalize(), &v, radius);
    wing(&mut m, c, &c.x_minus().normalize(), &-v, radius);
    Ok(m)
}

pub fn export_mesh(c: &CrookedPlane, radius: f64, path: &Path) -> Result<()> {
    let obj = crooked_mesh(c, radius)?.to_obj();
    std::fs::write(path, obj).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
