//! Triangulated surfaces of revolution and OBJ export.
//!
//! The profile is revolved about the vertical axis at a fixed angular
//! resolution; samples on the axis collapse to apex vertices with triangle
//! fans, so closed profiles produce watertight meshes. Faces wind
//! counterclockwise seen from outside.

use super::MeasureError;
use crate::solver::GeneratingCurve;
use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

#[derive(Debug, Clone)]
pub struct MeshModel {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[u32; 3]>,
    pub attribution: BTreeMap<String, String>,
}

impl MeshModel {
    /// Total triangle area.
    pub fn area(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                let [a, b, c] = [
                    self.vertices[f[0] as usize],
                    self.vertices[f[1] as usize],
                    self.vertices[f[2] as usize],
                ];
                let u = sub(b, a);
                let v = sub(c, a);
                0.5 * norm(cross(u, v))
            })
            .sum()
    }

    /// Signed volume by the divergence theorem; positive for outward
    /// orientation of a closed mesh.
    pub fn signed_volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                let [a, b, c] = [
                    self.vertices[f[0] as usize],
                    self.vertices[f[1] as usize],
                    self.vertices[f[2] as usize],
                ];
                dot(a, cross(b, c)) / 6.0
            })
            .sum()
    }

    /// Number of edges that belong to exactly one face (0 for a closed
    /// mesh).
    pub fn boundary_edge_count(&self) -> usize {
        let mut counts: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for f in &self.faces {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                let key = (a.min(b), a.max(b));
                *counts.entry(key).or_insert(0) += 1;
            }
        }
        counts.values().filter(|&&c| c == 1).count()
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

const AXIS_EPS: f64 = 1e-12;

/// Revolves a profile curve into a triangle mesh. Higher-dimensional
/// profiles are meshed as their 3-slice (all extra angles frozen at 0).
pub fn revolve_mesh(
    curve: &GeneratingCurve,
    angular_resolution: usize,
) -> Result<MeshModel, MeasureError> {
    if angular_resolution < 8 {
        return Err(MeasureError::ResolutionTooLow {
            resolution: angular_resolution,
        });
    }
    let res = angular_resolution as u32;
    let mut vertices = Vec::new();
    let mut faces = Vec::new();

    // Ring index per sample: Some(base vertex) for off-axis samples,
    // None marks an apex (on-axis sample).
    #[derive(Clone, Copy)]
    enum Row {
        Ring(u32),
        Apex(u32),
    }
    let mut rows = Vec::with_capacity(curve.samples.len());
    for s in &curve.samples {
        if s.phi <= AXIS_EPS {
            let idx = vertices.len() as u32;
            vertices.push([0.0, 0.0, s.psi]);
            rows.push(Row::Apex(idx));
        } else {
            let base = vertices.len() as u32;
            for j in 0..res {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / res as f64;
                vertices.push([s.phi * theta.cos(), s.phi * theta.sin(), s.psi]);
            }
            rows.push(Row::Ring(base));
        }
    }

    for w in rows.windows(2) {
        match (w[0], w[1]) {
            (Row::Ring(a), Row::Ring(b)) => {
                for j in 0..res {
                    let jn = (j + 1) % res;
                    faces.push([a + j, a + jn, b + jn]);
                    faces.push([a + j, b + jn, b + j]);
                }
            }
            (Row::Apex(apex), Row::Ring(b)) => {
                for j in 0..res {
                    let jn = (j + 1) % res;
                    faces.push([apex, b + jn, b + j]);
                }
            }
            (Row::Ring(a), Row::Apex(apex)) => {
                for j in 0..res {
                    let jn = (j + 1) % res;
                    faces.push([apex, a + j, a + jn]);
                }
            }
            (Row::Apex(_), Row::Apex(_)) => {}
        }
    }

    let mut attribution = BTreeMap::new();
    attribution.insert("source_n".into(), curve.n().to_string());
    attribution.insert("angular_resolution".into(), angular_resolution.to_string());
    attribution.insert("profile_samples".into(), curve.samples.len().to_string());
    Ok(MeshModel {
        vertices,
        faces,
        attribution,
    })
}

/// Writes ASCII OBJ (`v`/`f` records, 1-based indices). Vertex coordinates
/// use the shortest round-trip decimal form, so a re-import reproduces them
/// bit-exactly.
pub fn write_obj<W: Write>(mesh: &MeshModel, mut w: W) -> io::Result<()> {
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
    }
    for f in &mesh.faces {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    Ok(())
}

/// Reads the `v`/`f` records written by [`write_obj`].
pub fn read_obj<R: BufRead>(r: R) -> io::Result<MeshModel> {
    fn malformed(what: &str) -> io::Error {
        io::Error::new(io::ErrorKind::InvalidData, format!("malformed {what} record"))
    }
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for line in r.lines() {
        let line = line?;
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let mut v = [0.0; 3];
                for slot in &mut v {
                    *slot = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| malformed("vertex"))?;
                }
                vertices.push(v);
            }
            Some("f") => {
                let mut f = [0u32; 3];
                for slot in &mut f {
                    let idx: u32 = parts
                        .next()
                        .and_then(|s| s.split('/').next())
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| malformed("face"))?;
                    *slot = idx - 1;
                }
                faces.push(f);
            }
            _ => {}
        }
    }
    Ok(MeshModel {
        vertices,
        faces,
        attribution: BTreeMap::new(),
    })
}
