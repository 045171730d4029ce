//! Uniform Cartesian grid, node classification, and scalar fields.

use crate::geometry::LevelSetGeometry;
use std::sync::Arc;

/// Uniform 2D node-centered grid with square cells.
///
/// Node (i, j) sits at `origin + (i*dx, j*dx)`. On a periodic axis the nodes
/// tile the period `n*dx`, so index arithmetic wraps.
#[derive(Clone, Debug)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub origin: [f64; 2],
    pub periodic: [bool; 2],
}

impl Grid2D {
    /// Periodic unit square [0,1)^2 with nx nodes per axis.
    pub fn unit_periodic(nx: usize) -> Self {
        assert!(nx >= 8, "grids need at least 8 nodes per axis");
        Self {
            nx,
            ny: nx,
            dx: 1.0 / nx as f64,
            origin: [0.0, 0.0],
            periodic: [true, true],
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }

    #[inline]
    pub fn ij(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }

    #[inline]
    pub fn pos(&self, i: usize, j: usize) -> [f64; 2] {
        [
            self.origin[0] + i as f64 * self.dx,
            self.origin[1] + j as f64 * self.dx,
        ]
    }

    #[inline]
    pub fn extent(&self, axis: usize) -> usize {
        if axis == 0 {
            self.nx
        } else {
            self.ny
        }
    }

    /// Wrap a signed index along an axis. Callers must not step outside the
    /// lattice on non-periodic axes.
    #[inline]
    pub fn wrap(&self, v: isize, axis: usize) -> usize {
        let n = self.extent(axis) as isize;
        if self.periodic[axis] {
            (v.rem_euclid(n)) as usize
        } else {
            debug_assert!(v >= 0 && v < n, "index {v} escapes non-periodic axis");
            v as usize
        }
    }

    /// Neighbor at signed offset (di, dj), wrapping periodic axes.
    #[inline]
    pub fn offset(&self, i: usize, j: usize, di: isize, dj: isize) -> usize {
        let ii = self.wrap(i as isize + di, 0);
        let jj = self.wrap(j as isize + dj, 1);
        self.idx(ii, jj)
    }
}

/// Classification of a grid node relative to the problem domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    Interior,
    Affected,
    Exterior,
}

/// Per-node classification tags, shared by fields and operators.
#[derive(Clone, Debug)]
pub struct Mask {
    class: Vec<PointClass>,
}

impl Mask {
    pub fn all_interior(n: usize) -> Self {
        Self {
            class: vec![PointClass::Interior; n],
        }
    }

    #[inline]
    pub fn class(&self, idx: usize) -> PointClass {
        self.class[idx]
    }

    #[inline]
    pub fn is_exterior(&self, idx: usize) -> bool {
        self.class[idx] == PointClass::Exterior
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn count(&self, tag: PointClass) -> usize {
        self.class.iter().filter(|c| **c == tag).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = PointClass> + '_ {
        self.class.iter().copied()
    }
}

/// Classify every node of `grid` against `geometry`.
///
/// A node outside the problem domain is EXTERIOR. An in-domain node is
/// AFFECTED when any node of its one-dimensional stencil footprint
/// (half-width `w` along each axis) falls outside the domain, and INTERIOR
/// otherwise. With `interface` set, both sides of the zero level set belong
/// to the domain and "outside" means "across the interface".
pub fn classify_points(
    grid: &Grid2D,
    geometry: Option<&dyn LevelSetGeometry>,
    stencil_half_width: usize,
    interface: bool,
) -> Mask {
    let n = grid.node_count();
    let geometry = match geometry {
        None => return Mask::all_interior(n),
        Some(g) => g,
    };

    // Sign of phi at every node: +1 in the positive domain, -1 otherwise.
    let mut sign = vec![0i8; n];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            sign[grid.idx(i, j)] = if geometry.phi(grid.pos(i, j)) > 0.0 { 1 } else { -1 };
        }
    }

    let w = stencil_half_width as isize;
    let mut class = vec![PointClass::Interior; n];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let idx = grid.idx(i, j);
            let s = sign[idx];
            if !interface && s < 0 {
                class[idx] = PointClass::Exterior;
                continue;
            }
            let mut affected = false;
            'scan: for axis in 0..2 {
                for t in 1..=w {
                    for dir in [-1isize, 1] {
                        let (di, dj) = if axis == 0 { (dir * t, 0) } else { (0, dir * t) };
                        if sign[grid.offset(i, j, di, dj)] != s {
                            affected = true;
                            break 'scan;
                        }
                    }
                }
            }
            if affected {
                class[idx] = PointClass::Affected;
            }
        }
    }
    Mask { class }
}

/// Node values plus the classification they were produced under.
/// EXTERIOR entries stay exactly zero through every operator application,
/// and norms reduce over non-exterior nodes only.
#[derive(Clone, Debug)]
pub struct ScalarField {
    pub values: Vec<f64>,
    pub mask: Arc<Mask>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    L2,
    Linf,
}

impl ScalarField {
    pub fn zeros(mask: Arc<Mask>) -> Self {
        Self {
            values: vec![0.0; mask.len()],
            mask,
        }
    }

    /// Sample a function at non-exterior nodes; exterior nodes stay zero.
    pub fn from_fn(grid: &Grid2D, mask: Arc<Mask>, f: impl Fn([f64; 2]) -> f64) -> Self {
        let mut out = Self::zeros(mask);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let idx = grid.idx(i, j);
                if !out.mask.is_exterior(idx) {
                    out.values[idx] = f(grid.pos(i, j));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Zero out exterior entries; operators call this after sweeps.
    pub fn clear_exterior(&mut self) {
        for (i, v) in self.values.iter_mut().enumerate() {
            if self.mask.is_exterior(i) {
                *v = 0.0;
            }
        }
    }

    pub fn non_exterior_count(&self) -> usize {
        self.mask.len() - self.mask.count(PointClass::Exterior)
    }

    /// Mean over non-exterior nodes.
    pub fn mean(&self) -> f64 {
        let count = self.non_exterior_count();
        if count == 0 {
            return 0.0;
        }
        let mut sum = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            if !self.mask.is_exterior(i) {
                sum += v;
            }
        }
        sum / count as f64
    }

    /// Shift non-exterior values so their mean is zero.
    pub fn project_zero_mean(&mut self) {
        let mean = self.mean();
        for (i, v) in self.values.iter_mut().enumerate() {
            if !self.mask.is_exterior(i) {
                *v -= mean;
            }
        }
    }
}

/// Plain vector norm over non-exterior nodes (no grid-spacing weighting).
pub fn field_norm(field: &ScalarField, kind: NormKind) -> f64 {
    match kind {
        NormKind::L2 => {
            let mut s = 0.0;
            for (i, v) in field.values.iter().enumerate() {
                if !field.mask.is_exterior(i) {
                    s += v * v;
                }
            }
            s.sqrt()
        }
        NormKind::Linf => {
            let mut m = 0.0f64;
            for (i, v) in field.values.iter().enumerate() {
                if !field.mask.is_exterior(i) {
                    m = m.max(v.abs());
                }
            }
            m
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Circle;

    #[test]
    fn full_domain_all_interior() {
        let grid = Grid2D::unit_periodic(16);
        let mask = classify_points(&grid, None, 1, false);
        assert_eq!(mask.count(PointClass::Interior), grid.node_count());
    }

    #[test]
    fn affected_count_matches_brute_force_scan() {
        // Interior-of-circle domain immersed in the periodic unit square.
        let grid = Grid2D::unit_periodic(64);
        let circle = Circle::interior([0.5, 0.5], 0.3);
        let w = 1usize;
        let mask = classify_points(&grid, Some(&circle), w, false);

        let mut expected = 0;
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                if circle.phi(grid.pos(i, j)) <= 0.0 {
                    continue;
                }
                let mut hit = false;
                for (di, dj) in [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)] {
                    let ii = grid.wrap(i as isize + di, 0);
                    let jj = grid.wrap(j as isize + dj, 1);
                    if circle.phi(grid.pos(ii, jj)) <= 0.0 {
                        hit = true;
                    }
                }
                if hit {
                    expected += 1;
                }
            }
        }
        assert_eq!(mask.count(PointClass::Affected), expected);
    }

    #[test]
    fn wider_stencil_widens_affected_band() {
        let grid = Grid2D::unit_periodic(64);
        let circle = Circle::interior([0.5, 0.5], 0.3);
        let narrow = classify_points(&grid, Some(&circle), 1, false);
        let wide = classify_points(&grid, Some(&circle), 3, false);
        for idx in 0..grid.node_count() {
            if narrow.class(idx) == PointClass::Affected {
                assert_ne!(wide.class(idx), PointClass::Interior);
            }
        }
        assert!(wide.count(PointClass::Affected) >= narrow.count(PointClass::Affected));
    }

    #[test]
    fn norms_skip_exterior_nodes() {
        let grid = Grid2D::unit_periodic(8);
        let mut class = vec![PointClass::Interior; grid.node_count()];
        class[5] = PointClass::Exterior;
        let mask = Arc::new(Mask { class });
        let mut f = ScalarField::zeros(mask);
        assert_eq!(field_norm(&f, NormKind::L2), 0.0);
        assert_eq!(field_norm(&f, NormKind::Linf), 0.0);

        f.values[3] = 3.0;
        assert_eq!(field_norm(&f, NormKind::Linf), 3.0);
        assert_eq!(field_norm(&f, NormKind::L2), 3.0);

        f.values[5] = 1.0e6; // exterior junk must be invisible
        f.values[7] = 1.0;
        assert_eq!(field_norm(&f, NormKind::Linf), 3.0);
    }

    #[test]
    fn zero_mean_projection() {
        let grid = Grid2D::unit_periodic(16);
        let mask = Arc::new(classify_points(&grid, None, 1, false));
        let mut f = ScalarField::from_fn(&grid, mask, |x| 1.0 + x[0] * x[1]);
        f.project_zero_mean();
        let sum: f64 = f.values.iter().sum();
        let linf = field_norm(&f, NormKind::Linf);
        assert!(sum.abs() <= 1e-12 * linf.max(1.0));
    }
}
