//! Uniform periodic P1 triangulation with lumped mass.

use std::collections::BTreeMap;

use crate::domain::Domain;
use crate::error::{param_err, Result};
use crate::Vec2;

/// Off-diagonal coupling of a node with a neighbor `node`:
/// `c = ∫ φ_i ∇φ_j` and `k = ∫ ∇φ_i · ∇φ_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub node: usize,
    pub c: Vec2,
    pub k: f64,
}

/// `nx × ny` nodes on a doubly periodic rectangle; each grid square is split
/// along its rising diagonal into two triangles. Node `(i, j)` sits at
/// `lower + (i hx, j hy)` and has index `j nx + i`.
#[derive(Debug, Clone)]
pub struct PeriodicMesh {
    nx: usize,
    ny: usize,
    lower: Vec2,
    upper: Vec2,
    hx: f64,
    hy: f64,
    couplings: Vec<Vec<Coupling>>,
}

impl PeriodicMesh {
    pub fn new(domain: &Domain, nx: usize, ny: usize) -> Result<Self> {
        if !domain.is_fully_periodic() {
            return Err(param_err("domain", "the continuum solver needs a doubly periodic domain"));
        }
        if nx < 2 || ny < 2 {
            return Err(param_err("grid", "need at least 2 nodes per axis"));
        }
        let len = domain.lengths();
        let hx = len.x / nx as f64;
        let hy = len.y / ny as f64;
        let mut acc: Vec<BTreeMap<usize, (Vec2, f64)>> = vec![BTreeMap::new(); nx * ny];
        let idx = |i: usize, j: usize| (j % ny) * nx + (i % nx);
        for j in 0..ny {
            for i in 0..nx {
                let corners = [
                    (idx(i, j), Vec2::new(0.0, 0.0)),
                    (idx(i + 1, j), Vec2::new(hx, 0.0)),
                    (idx(i + 1, j + 1), Vec2::new(hx, hy)),
                    (idx(i, j + 1), Vec2::new(0.0, hy)),
                ];
                for tri in [[0, 1, 2], [0, 2, 3]] {
                    let p = tri.map(|k| corners[k].1);
                    let nodes = tri.map(|k| corners[k].0);
                    let area2 = (p[1] - p[0]).perp(&(p[2] - p[0]));
                    let area = 0.5 * area2;
                    let grad: [Vec2; 3] = std::array::from_fn(|k| {
                        let a = p[(k + 1) % 3];
                        let b = p[(k + 2) % 3];
                        Vec2::new(a.y - b.y, b.x - a.x) / area2
                    });
                    for a in 0..3 {
                        for b in 0..3 {
                            if nodes[a] == nodes[b] {
                                continue;
                            }
                            let e = acc[nodes[a]].entry(nodes[b]).or_insert((Vec2::zeros(), 0.0));
                            e.0 += grad[b] * (area / 3.0);
                            e.1 += area * grad[a].dot(&grad[b]);
                        }
                    }
                }
            }
        }
        let couplings =
            acc.into_iter().map(|m| m.into_iter().map(|(node, (c, k))| Coupling { node, c, k }).collect()).collect();
        Ok(Self { nx, ny, lower: domain.lower(), upper: domain.upper(), hx, hy, couplings })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn lower(&self) -> Vec2 {
        self.lower
    }
    pub fn upper(&self) -> Vec2 {
        self.upper
    }
    pub fn spacing(&self) -> (f64, f64) {
        (self.hx, self.hy)
    }
    pub fn h_min(&self) -> f64 {
        self.hx.min(self.hy)
    }

    /// Lumped (row-sum) mass of every node.
    pub fn lumped_mass(&self) -> f64 {
        self.hx * self.hy
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        (j % self.ny) * self.nx + (i % self.nx)
    }

    pub fn node_ij(&self, k: usize) -> (usize, usize) {
        (k % self.nx, k / self.nx)
    }

    pub fn node_position(&self, k: usize) -> Vec2 {
        let (i, j) = self.node_ij(k);
        self.lower + Vec2::new(i as f64 * self.hx, j as f64 * self.hy)
    }

    pub fn couplings(&self, k: usize) -> &[Coupling] {
        &self.couplings[k]
    }
}
