//! Cell-list candidate search with a brute-force oracle.

use crate::domain::Domain;
use crate::Vec2;

/// How the cell-list grid is sized.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum CutoffPolicy {
    /// Cell side of twice the largest radius.
    #[default]
    Auto,
    /// Requested cell side; raised to twice the largest radius if smaller.
    CellSize(f64),
}

/// Uniform bucket grid over the domain. Off-grid positions on open axes
/// are clamped into the edge cells, which keeps adjacency conservative.
#[derive(Debug, Clone)]
pub struct CellList {
    ncell: [usize; 2],
    inv_width: [f64; 2],
    lower: [f64; 2],
    periodic: [bool; 2],
    cell_of: Vec<usize>,
    starts: Vec<usize>,
    members: Vec<usize>,
}

impl CellList {
    pub fn build(domain: &Domain, positions: &[Vec2], cell_size: f64) -> Self {
        let len = domain.lengths();
        let lower = domain.lower();
        let mut ncell = [1usize; 2];
        let mut inv_width = [0.0; 2];
        for axis in 0..2 {
            let n = if cell_size > 0.0 && cell_size.is_finite() {
                ((len[axis] / cell_size).floor() as usize).max(1)
            } else {
                1
            };
            ncell[axis] = n;
            inv_width[axis] = n as f64 / len[axis];
        }
        let mut list = Self {
            ncell,
            inv_width,
            lower: [lower.x, lower.y],
            periodic: domain.periodic(),
            cell_of: Vec::with_capacity(positions.len()),
            starts: vec![0; ncell[0] * ncell[1] + 1],
            members: vec![0; positions.len()],
        };
        for p in positions {
            let c = list.cell_index(*p);
            list.cell_of.push(c);
            list.starts[c + 1] += 1;
        }
        for c in 0..ncell[0] * ncell[1] {
            list.starts[c + 1] += list.starts[c];
        }
        // counting sort; members within a cell stay in ascending floe order
        let mut fill = list.starts.clone();
        for (i, &c) in list.cell_of.iter().enumerate() {
            list.members[fill[c]] = i;
            fill[c] += 1;
        }
        list
    }

    fn axis_cell(&self, axis: usize, x: f64) -> usize {
        let f = ((x - self.lower[axis]) * self.inv_width[axis]).floor();
        let n = self.ncell[axis];
        if f < 0.0 {
            0
        } else if f >= n as f64 {
            n - 1
        } else {
            f as usize
        }
    }

    fn cell_index(&self, p: Vec2) -> usize {
        self.axis_cell(1, p.y) * self.ncell[0] + self.axis_cell(0, p.x)
    }

    fn axis_neighbors(&self, axis: usize, c: usize) -> ([usize; 3], usize) {
        let n = self.ncell[axis] as isize;
        let mut out = [0usize; 3];
        let mut k = 0;
        for d in -1isize..=1 {
            let raw = c as isize + d;
            let idx = if self.periodic[axis] {
                raw.rem_euclid(n)
            } else if raw < 0 || raw >= n {
                continue;
            } else {
                raw
            } as usize;
            if !out[..k].contains(&idx) {
                out[k] = idx;
                k += 1;
            }
        }
        (out, k)
    }

    /// Appends every floe sharing a 3x3 neighbourhood with `i`, excluding
    /// `i`, in ascending index order.
    pub fn candidates(&self, i: usize, out: &mut Vec<usize>) {
        out.clear();
        let c = self.cell_of[i];
        let (cx, cy) = (c % self.ncell[0], c / self.ncell[0]);
        let (xs, nx) = self.axis_neighbors(0, cx);
        let (ys, ny) = self.axis_neighbors(1, cy);
        for &y in &ys[..ny] {
            for &x in &xs[..nx] {
                let cell = y * self.ncell[0] + x;
                out.extend(self.members[self.starts[cell]..self.starts[cell + 1]].iter().copied().filter(|&j| j != i));
            }
        }
        out.sort_unstable();
    }

    pub fn len(&self) -> usize {
        self.cell_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_of.is_empty()
    }
}

pub(crate) fn cell_size_for(policy: CutoffPolicy, max_radius: f64) -> f64 {
    let floor = 2.0 * max_radius;
    match policy {
        CutoffPolicy::Auto => floor,
        CutoffPolicy::CellSize(s) => s.max(floor),
    }
}

/// Candidate pairs `(i, j)` with `i < j`; a superset of the contacting pairs.
pub fn candidate_pairs(
    domain: &Domain,
    positions: &[Vec2],
    radii: &[f64],
    policy: CutoffPolicy,
) -> Vec<(usize, usize)> {
    let max_r = radii.iter().copied().fold(0.0, f64::max);
    let list = CellList::build(domain, positions, cell_size_for(policy, max_r));
    let mut pairs = Vec::new();
    let mut buf = Vec::new();
    for i in 0..positions.len() {
        list.candidates(i, &mut buf);
        pairs.extend(buf.iter().filter(|&&j| j > i).map(|&j| (i, j)));
    }
    pairs
}

/// All-pairs oracle: every `(i, j)`, `i < j`, with `d < r_i + r_j`.
pub fn brute_force_contacts(domain: &Domain, positions: &[Vec2], radii: &[f64]) -> Vec<(usize, usize)> {
    let n = positions.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = domain.min_image(positions[i], positions[j]).norm();
            if d - (radii[i] + radii[j]) < 0.0 {
                out.push((i, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_periodic_grid_has_no_duplicates() {
        let dom = Domain::periodic_square_pi();
        let pos = vec![Vec2::new(0.0, 0.0), Vec2::new(3.0, 3.0), Vec2::new(-3.0, 1.0)];
        // cell size larger than half the box: a 1x1 grid
        let list = CellList::build(&dom, &pos, 5.0);
        let mut buf = Vec::new();
        list.candidates(0, &mut buf);
        assert_eq!(buf, vec![1, 2]);
    }

    #[test]
    fn open_axis_clamps_outliers() {
        let dom = Domain::open([0.0, 0.0], [10.0, 10.0]).unwrap();
        let pos = vec![Vec2::new(12.0, 5.0), Vec2::new(12.5, 5.0), Vec2::new(-3.0, 5.0)];
        let list = CellList::build(&dom, &pos, 1.0);
        let mut buf = Vec::new();
        list.candidates(0, &mut buf);
        assert_eq!(buf, vec![1]);
    }
}
