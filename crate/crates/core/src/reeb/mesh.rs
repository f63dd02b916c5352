use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Triangulated closed disk; areas are normalized by `π` so the unit disk has
/// measure 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangulatedDisk {
    pub vertices: Vec<[f64; 2]>,
    /// Counter-clockwise vertex index triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<bool>,
}

fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

impl TriangulatedDisk {
    /// Checks indices, orientation and disk topology, and flags boundary
    /// vertices (those on edges used by a single triangle).
    pub fn new(vertices: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>) -> Result<TriangulatedDisk> {
        if triangles.is_empty() {
            return Err(Error::Mesh("no triangles".into()));
        }
        let nv = vertices.len();
        let mut uses: HashMap<(usize, usize), u32> = HashMap::new();
        let mut orientation = 0.0f64;
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= nv) {
                return Err(Error::Mesh(format!("triangle {t} references a missing vertex")));
            }
            let a = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if a == 0.0 || !a.is_finite() {
                return Err(Error::Mesh(format!("triangle {t} is degenerate")));
            }
            if orientation == 0.0 {
                orientation = a.signum();
            } else if a.signum() != orientation {
                return Err(Error::Mesh(format!("triangle {t} is not consistently oriented")));
            }
            for k in 0..3 {
                let (u, v) = (tri[k], tri[(k + 1) % 3]);
                *uses.entry((u.min(v), u.max(v))).or_default() += 1;
            }
        }
        if uses.values().any(|&c| c > 2) {
            return Err(Error::Mesh("an edge is shared by more than two triangles".into()));
        }
        let mut used = vec![false; nv];
        triangles.iter().flatten().for_each(|&i| used[i] = true);
        if used.iter().any(|u| !u) {
            return Err(Error::Mesh("isolated vertex".into()));
        }
        // a triangulated disk has Euler characteristic 1 and one boundary cycle
        let euler = nv as i64 - uses.len() as i64 + triangles.len() as i64;
        if euler != 1 {
            return Err(Error::Mesh(format!("Euler characteristic {euler}, expected 1")));
        }
        let mut boundary = vec![false; nv];
        let mut next: HashMap<usize, Vec<usize>> = HashMap::new();
        for (&(u, v), &c) in &uses {
            if c == 1 {
                boundary[u] = true;
                boundary[v] = true;
                next.entry(u).or_default().push(v);
                next.entry(v).or_default().push(u);
            }
        }
        if next.values().any(|nb| nb.len() != 2) {
            return Err(Error::Mesh("boundary is not a simple cycle".into()));
        }
        let start = *next.keys().next().expect("a disk has boundary");
        let (mut prev, mut cur, mut len) = (start, next[&start][0], 1);
        while cur != start {
            let nb = &next[&cur];
            let step = if nb[0] == prev { nb[1] } else { nb[0] };
            (prev, cur, len) = (cur, step, len + 1);
        }
        if len != next.len() {
            return Err(Error::Mesh("boundary has several components".into()));
        }
        let triangles = if orientation < 0.0 {
            triangles.into_iter().map(|[a, b, c]| [a, c, b]).collect()
        } else {
            triangles
        };
        Ok(TriangulatedDisk { vertices, triangles, boundary })
    }

    /// Concentric-ring triangulation of the unit disk: ring `k` (`1..=rings`)
    /// carries `6k` vertices at radius `k/rings`, giving `6·rings²` triangles.
    pub fn ring_disk(rings: usize) -> Result<TriangulatedDisk> {
        if rings == 0 {
            return Err(Error::OutOfRange("ring count must be positive".into()));
        }
        let mut vertices = vec![[0.0, 0.0]];
        let mut first = vec![0usize];
        for k in 1..=rings {
            first.push(vertices.len());
            let r = k as f64 / rings as f64;
            let m = 6 * k;
            for j in 0..m {
                let a = 2.0 * PI * j as f64 / m as f64;
                vertices.push([r * a.cos(), r * a.sin()]);
            }
        }
        let mut triangles = Vec::with_capacity(6 * rings * rings);
        for j in 0..6 {
            triangles.push([0, first[1] + j, first[1] + (j + 1) % 6]);
        }
        for k in 2..=rings {
            // stitch ring k-1 (inner) to ring k (outer) by angle
            let (mi, mo) = (6 * (k - 1), 6 * k);
            let inner = |i: usize| first[k - 1] + i % mi;
            let outer = |j: usize| first[k] + j % mo;
            let (mut i, mut j) = (0, 0);
            while i < mi || j < mo {
                // compare angles (i+1)/mi and (j+1)/mo without rounding
                let advance_inner = j == mo || (i < mi && (i + 1) * mo < (j + 1) * mi);
                if advance_inner {
                    triangles.push([inner(i), outer(j), inner(i + 1)]);
                    i += 1;
                } else {
                    triangles.push([inner(i), outer(j), outer(j + 1)]);
                    j += 1;
                }
            }
        }
        TriangulatedDisk::new(vertices, triangles)
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c]).abs()
    }

    /// Euclidean area over `π`.
    pub fn normalized_area(&self, t: usize) -> f64 {
        self.triangle_area(t) / PI
    }

    pub fn total_measure(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.normalized_area(t)).sum()
    }

    /// Undirected edges as sorted pairs, each once.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k].min(t[(k + 1) % 3]), t[k].max(t[(k + 1) % 3]))))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Longest edge length.
    pub fn mesh_size(&self) -> f64 {
        self.edges()
            .into_iter()
            .map(|(u, v)| {
                let (p, q) = (self.vertices[u], self.vertices[v]);
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .fold(0.0, f64::max)
    }
}
