use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::datafile::DataFile;
use crate::algebra::cis;
use crate::error::{Error, Result};
use crate::geometry::BjorlingSurface;
use crate::surfaces::SurfaceMap;
use crate::weierstrass::{gauss_normal, Point3};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
    /// Keep only `theta in [0, pi)` and glue the seam by `z ~ -1/conj(z)`.
    pub quotient: bool,
    /// Treat `theta` as periodic (no duplicated seam column).
    pub wrap: bool,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        Self {
            r_min: 0.125,
            r_max: 8.0,
            n_r: 129,
            n_theta: 256,
            quotient: false,
            wrap: true,
        }
    }
}

impl SamplingSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.n_r < 2 || self.n_theta < 2 {
            return Err(Error::InvalidConfig("resolutions must be >= 2".into()));
        }
        if self.quotient {
            if self.n_theta % 2 != 0 {
                return Err(Error::InvalidConfig("quotient meshes need an even n_theta".into()));
            }
            if !self.wrap {
                return Err(Error::InvalidConfig("quotient meshes need wrap".into()));
            }
            if (self.r_min.ln() + self.r_max.ln()).abs() > 1e-12 {
                return Err(Error::InvalidConfig(
                    "quotient meshes need r_min * r_max = 1 so the seam can be glued".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn radius(&self, i: usize) -> f64 {
        let (lo, hi) = (self.r_min.ln(), self.r_max.ln());
        (lo + (hi - lo) * i as f64 / (self.n_r - 1) as f64).exp()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshMetadata {
    pub source: String,
    pub data: Option<DataFile>,
    pub sampling: Option<SamplingSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub normals: Vec<[f64; 3]>,
    pub faces: Vec<[u32; 3]>,
    pub metadata: MeshMetadata,
}

impl Mesh {
    pub fn validate(&self) -> Result<()> {
        if self.vertices.len() != self.normals.len() {
            return Err(Error::InvalidConfig("vertex and normal counts differ".into()));
        }
        if self.vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("mesh vertex"));
        }
        for n in &self.normals {
            let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            if !((len - 1.0).abs() < 1e-6) {
                return Err(Error::InvalidConfig(format!("normal of length {len} is not unit")));
            }
        }
        let count = self.vertices.len() as u32;
        if self.faces.iter().flatten().any(|&i| i >= count) {
            return Err(Error::InvalidConfig("face index out of range".into()));
        }
        Ok(())
    }
}

fn to_array(p: &Point3) -> [f64; 3] {
    [p[0], p[1], p[2]]
}

/// Grid faces over `rows x cols` vertices; `col_next` maps `(row, col)` to
/// the vertex index of the right neighbour, or `None` at an open edge.
fn grid_faces<F>(rows: usize, cols: usize, col_next: F) -> Vec<[u32; 3]>
where
    F: Fn(usize, usize) -> Option<(usize, usize)>,
{
    let idx = |i: usize, j: usize| (i * cols + j) as u32;
    let mut faces = Vec::with_capacity(2 * rows * cols);
    for i in 0..rows - 1 {
        for j in 0..cols {
            let (Some((i0, j0)), Some((i1, j1))) = (col_next(i, j), col_next(i + 1, j)) else {
                continue;
            };
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i1, j1), idx(i0, j0));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    faces
}

/// Samples `surface` on a log-polar grid. Rows are radii, columns angles.
pub fn build_mesh(surface: &SurfaceMap, spec: &SamplingSpec, metadata: MeshMetadata) -> Result<Mesh> {
    spec.validate()?;
    if spec.quotient && !surface.is_one_sided() {
        return Err(Error::InvalidConfig(format!(
            "{} does not descend to the one-sided quotient",
            surface.describe()
        )));
    }
    let period = surface.theta_period();
    let (rows, cols) = if spec.quotient {
        (spec.n_r, spec.n_theta / 2)
    } else {
        (spec.n_r, spec.n_theta)
    };
    let angle = |j: usize| {
        if spec.wrap {
            period * j as f64 / spec.n_theta as f64
        } else {
            period * j as f64 / (spec.n_theta - 1) as f64
        }
    };
    let rows_data: Vec<Vec<([f64; 3], [f64; 3])>> = (0..rows)
        .into_par_iter()
        .map(|i| {
            let r = spec.radius(i);
            (0..cols)
                .map(|j| {
                    let t = angle(j);
                    let x = surface.eval(r, t)?;
                    let z: Complex64 = r * cis(t);
                    Ok((to_array(&x), to_array(&gauss_normal(z))))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let (vertices, normals): (Vec<_>, Vec<_>) = rows_data.into_iter().flatten().unzip();

    let faces = if spec.quotient {
        // Column cols - 1 continues into column 0 at the antipodal radius.
        grid_faces(rows, cols, |i, j| {
            if j + 1 < cols {
                Some((i, j + 1))
            } else {
                Some((rows - 1 - i, 0))
            }
        })
    } else if spec.wrap {
        grid_faces(rows, cols, |i, j| Some((i, (j + 1) % cols)))
    } else {
        grid_faces(rows, cols, |i, j| (j + 1 < cols).then_some((i, j + 1)))
    };
    let mesh = Mesh {
        vertices,
        normals,
        faces,
        metadata: MeshMetadata {
            sampling: Some(*spec),
            ..metadata
        },
    };
    mesh.validate()?;
    Ok(mesh)
}

/// Samples a Björling solution on `[arc shrunk by margin] x [-strip, strip]`.
pub fn build_bjorling_mesh(
    surface: &BjorlingSurface,
    n_u: usize,
    n_v: usize,
    strip: f64,
    margin: f64,
    metadata: MeshMetadata,
) -> Result<Mesh> {
    if n_u < 2 || n_v < 2 {
        return Err(Error::InvalidConfig("resolutions must be >= 2".into()));
    }
    let (a, b) = surface.arc();
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("Björling mesh needs a bounded arc".into()));
    }
    let (lo, hi) = (a + margin * (b - a), b - margin * (b - a));
    let rows: Vec<Vec<([f64; 3], [f64; 3])>> = (0..n_v)
        .into_par_iter()
        .map(|i| {
            let v = -strip + 2.0 * strip * i as f64 / (n_v - 1) as f64;
            (0..n_u)
                .map(|j| {
                    let u = lo + (hi - lo) * j as f64 / (n_u - 1) as f64;
                    let x = surface.eval_uv(u, v)?;
                    let h = 1e-6;
                    let xu = surface.eval_uv(u + h, v)? - surface.eval_uv(u - h, v)?;
                    let xv = surface.eval_uv(u, v + h)? - surface.eval_uv(u, v - h)?;
                    let n = xu.cross(&xv);
                    let n = if n.norm() > 0.0 { n / n.norm() } else { Point3::z() };
                    Ok((to_array(&x), to_array(&n)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let (vertices, normals): (Vec<_>, Vec<_>) = rows.into_iter().flatten().unzip();
    let faces = grid_faces(n_v, n_u, |i, j| (j + 1 < n_u).then_some((i, j + 1)));
    let mesh = Mesh {
        vertices,
        normals,
        faces,
        metadata,
    };
    mesh.validate()?;
    Ok(mesh)
}
