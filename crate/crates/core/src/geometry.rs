//! Level-set geometries, grid-line intersections (control points), normals,
//! and the curvature resolution check.

use crate::error::{Error, Result};
use crate::grid::Grid2D;

/// Implicit geometry described by a level-set function.
///
/// The convention throughout: `phi > 0` marks the positive domain. For
/// immersed boundary problems the PDE lives on the positive side; for
/// interface problems both sides carry unknowns and the sign selects the
/// material. The gradient must not vanish near the zero set, and curvature
/// evaluations are only meaningful on it.
pub trait LevelSetGeometry: Send + Sync {
    fn phi(&self, x: [f64; 2]) -> f64;
    fn grad(&self, x: [f64; 2]) -> [f64; 2];
    /// Scalar curvature of the zero level set at a point on (or near) it.
    fn curvature(&self, x: [f64; 2]) -> f64;
    /// Points sampled along the zero set, used by resolution checks.
    fn boundary_samples(&self, count: usize) -> Vec<[f64; 2]>;
}

/// Unit normal at a point, oriented from the negative side into the
/// positive side (direction of increasing phi).
pub fn unit_normal(geometry: &dyn LevelSetGeometry, x: [f64; 2]) -> [f64; 2] {
    let g = geometry.grad(x);
    let n = (g[0] * g[0] + g[1] * g[1]).sqrt();
    assert!(n > 0.0, "level-set gradient vanished at ({}, {})", x[0], x[1]);
    [g[0] / n, g[1] / n]
}

/// Circle of radius r. `exterior` selects whether the positive domain is
/// outside (true) or inside (false) the circle.
#[derive(Clone, Debug)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
    sign: f64,
}

impl Circle {
    pub fn exterior(center: [f64; 2], radius: f64) -> Self {
        Self { center, radius, sign: 1.0 }
    }

    pub fn interior(center: [f64; 2], radius: f64) -> Self {
        Self { center, radius, sign: -1.0 }
    }
}

impl LevelSetGeometry for Circle {
    fn phi(&self, x: [f64; 2]) -> f64 {
        let dx = x[0] - self.center[0];
        let dy = x[1] - self.center[1];
        self.sign * ((dx * dx + dy * dy).sqrt() - self.radius)
    }

    fn grad(&self, x: [f64; 2]) -> [f64; 2] {
        let dx = x[0] - self.center[0];
        let dy = x[1] - self.center[1];
        let d = (dx * dx + dy * dy).sqrt();
        [self.sign * dx / d, self.sign * dy / d]
    }

    fn curvature(&self, x: [f64; 2]) -> f64 {
        let dx = x[0] - self.center[0];
        let dy = x[1] - self.center[1];
        1.0 / (dx * dx + dy * dy).sqrt()
    }

    fn boundary_samples(&self, count: usize) -> Vec<[f64; 2]> {
        (0..count)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                [
                    self.center[0] + self.radius * t.cos(),
                    self.center[1] + self.radius * t.sin(),
                ]
            })
            .collect()
    }
}

/// Five-lobed star: a circle of radius r0 perturbed by r_tilde*cos(5 theta).
/// The positive domain is the exterior of the body.
#[derive(Clone, Debug)]
pub struct Star {
    pub center: [f64; 2],
    pub r0: f64,
    pub r_tilde: f64,
    pub lobes: u32,
}

/// The standard star test body. Defaults: center (0.501, 0.502) unless a
/// center is supplied.
pub fn star_geometry(center: Option<[f64; 2]>, r0: f64, r_tilde: f64) -> Star {
    assert!(r_tilde < r0, "perturbation radius must stay below the mean radius");
    Star {
        center: center.unwrap_or([0.501, 0.502]),
        r0,
        r_tilde,
        lobes: 5,
    }
}

impl Star {
    fn polar(&self, x: [f64; 2]) -> (f64, f64) {
        let dx = x[0] - self.center[0];
        let dy = x[1] - self.center[1];
        ((dx * dx + dy * dy).sqrt(), dy.atan2(dx))
    }

    fn radius_at(&self, theta: f64) -> f64 {
        self.r0 + self.r_tilde * (self.lobes as f64 * theta).cos()
    }
}

impl LevelSetGeometry for Star {
    fn phi(&self, x: [f64; 2]) -> f64 {
        let (d, theta) = self.polar(x);
        d - self.radius_at(theta)
    }

    fn grad(&self, x: [f64; 2]) -> [f64; 2] {
        let (d, theta) = self.polar(x);
        let p = self.lobes as f64;
        // grad(d) = e_r; grad(theta) = e_theta / d.
        let (ct, st) = (theta.cos(), theta.sin());
        let dr_dtheta = -self.r_tilde * p * (p * theta).sin();
        [
            ct + dr_dtheta * st / d,
            st - dr_dtheta * ct / d,
        ]
    }

    fn curvature(&self, x: [f64; 2]) -> f64 {
        // Curvature of the polar curve r(theta) through this angle; exact on
        // the zero set, which is where the check samples it.
        let (_, theta) = self.polar(x);
        let p = self.lobes as f64;
        let r = self.radius_at(theta);
        let r1 = -self.r_tilde * p * (p * theta).sin();
        let r2 = -self.r_tilde * p * p * (p * theta).cos();
        (r * r + 2.0 * r1 * r1 - r * r2) / (r * r + r1 * r1).powf(1.5)
    }

    fn boundary_samples(&self, count: usize) -> Vec<[f64; 2]> {
        (0..count)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                let r = self.radius_at(t);
                [self.center[0] + r * t.cos(), self.center[1] + r * t.sin()]
            })
            .collect()
    }
}

/// Half-space phi = n.x - offset with constant unit normal.
#[derive(Clone, Debug)]
pub struct Line {
    pub normal: [f64; 2],
    pub offset: f64,
}

impl Line {
    pub fn new(normal: [f64; 2], offset: f64) -> Self {
        let n = (normal[0] * normal[0] + normal[1] * normal[1]).sqrt();
        Self {
            normal: [normal[0] / n, normal[1] / n],
            offset: offset / n,
        }
    }
}

impl LevelSetGeometry for Line {
    fn phi(&self, x: [f64; 2]) -> f64 {
        self.normal[0] * x[0] + self.normal[1] * x[1] - self.offset
    }

    fn grad(&self, _x: [f64; 2]) -> [f64; 2] {
        self.normal
    }

    fn curvature(&self, _x: [f64; 2]) -> f64 {
        0.0
    }

    fn boundary_samples(&self, count: usize) -> Vec<[f64; 2]> {
        // A segment of the line through its closest point to the origin.
        let base = [self.offset * self.normal[0], self.offset * self.normal[1]];
        let tangent = [-self.normal[1], self.normal[0]];
        (0..count)
            .map(|k| {
                let t = k as f64 / count.max(1) as f64 - 0.5;
                [base[0] + t * tangent[0], base[1] + t * tangent[1]]
            })
            .collect()
    }
}

/// Boundary or interface condition imposed on the immersed surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionKind {
    Dirichlet,
    Neumann,
    Jump,
}

/// Intersection location shifted for the low-order discretization.
#[derive(Clone, Copy, Debug)]
pub struct ShiftedIntersection {
    pub position: [f64; 2],
    pub psi_minus: f64,
    pub psi_plus: f64,
}

/// Intersection of a grid line with the zero level set.
///
/// `node_lo` is the flanking node with the smaller index along `axis`;
/// `psi_minus` is the distance from it to the crossing in units of dx, and
/// `psi_plus = 1 - psi_minus` the distance from the other flank.
#[derive(Clone, Debug)]
pub struct ControlPoint {
    pub position: [f64; 2],
    pub axis: usize,
    pub node_lo: [usize; 2],
    pub psi_minus: f64,
    pub psi_plus: f64,
    pub normal: [f64; 2],
    pub kind: ConditionKind,
    pub shifted: Option<ShiftedIntersection>,
    /// Sign of phi at the lower flanking node: true when it lies in the
    /// positive domain.
    pub lo_in_plus: bool,
}

impl ControlPoint {
    pub fn node_hi(&self, grid: &Grid2D) -> [usize; 2] {
        let mut hi = self.node_lo;
        hi[self.axis] = grid.wrap(self.node_lo[self.axis] as isize + 1, self.axis);
        hi
    }
}

/// Bisection iterations for crossing refinement. 40 halvings reduce the
/// bracket to ~1e-12 of a cell, matching the placement tolerance.
const BISECT_ITERS: usize = 40;

/// Degenerate crossings sitting exactly on a node are nudged into the cell
/// so that fractional spacings stay at least this large.
const PSI_FLOOR: f64 = 1e-6;

/// Locate every sign change of phi between adjacent nodes along both grid
/// axes. Cells whose edge hides more than one crossing (detected by midpoint
/// subdivision) signal under-resolved geometry.
pub fn find_control_points(
    grid: &Grid2D,
    geometry: &dyn LevelSetGeometry,
    kind: ConditionKind,
) -> Result<Vec<ControlPoint>> {
    let mut sign = vec![0i8; grid.node_count()];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            sign[grid.idx(i, j)] = if geometry.phi(grid.pos(i, j)) > 0.0 { 1 } else { -1 };
        }
    }

    let mut points = Vec::new();
    for axis in 0..2 {
        let (un, vn) = if axis == 0 {
            (grid.nx, grid.ny)
        } else {
            (grid.ny, grid.nx)
        };
        let cells = if grid.periodic[axis] { un } else { un - 1 };
        for v in 0..vn {
            for u in 0..cells {
                let (i, j) = if axis == 0 { (u, v) } else { (v, u) };
                let lo = grid.idx(i, j);
                let hi_i = if axis == 0 {
                    (grid.wrap(i as isize + 1, 0), j)
                } else {
                    (i, grid.wrap(j as isize + 1, 1))
                };
                let hi = grid.idx(hi_i.0, hi_i.1);

                let p_lo = grid.pos(i, j);
                let mut p_hi = p_lo;
                p_hi[axis] += grid.dx; // unwrapped position of the upper node

                let f_lo = geometry.phi(p_lo);
                let s_lo = sign[lo];
                let s_hi = sign[hi];

                if s_lo == s_hi {
                    // Same sign at both ends: a sign flip at the midpoint
                    // means two crossings hide in this edge.
                    let mid = [
                        0.5 * (p_lo[0] + p_hi[0]),
                        0.5 * (p_lo[1] + p_hi[1]),
                    ];
                    let s_mid = if geometry.phi(mid) > 0.0 { 1 } else { -1 };
                    if s_mid != s_lo {
                        return Err(Error::MultipleCrossings { axis, i, j });
                    }
                    continue;
                }

                // Bracketed bisection for the crossing parameter t in [0, 1].
                let (mut a, mut b) = (0.0f64, 1.0f64);
                let mut fa = f_lo;
                for _ in 0..BISECT_ITERS {
                    let m = 0.5 * (a + b);
                    let mut pm = p_lo;
                    pm[axis] += m * grid.dx;
                    let fm = geometry.phi(pm);
                    if fm == 0.0 {
                        a = m;
                        b = m;
                        break;
                    }
                    if (fm > 0.0) == (fa > 0.0) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                let t = (0.5 * (a + b)).clamp(PSI_FLOOR, 1.0 - PSI_FLOOR);
                let mut pos = p_lo;
                pos[axis] += t * grid.dx;

                points.push(ControlPoint {
                    position: pos,
                    axis,
                    node_lo: [i, j],
                    psi_minus: t,
                    psi_plus: 1.0 - t,
                    normal: unit_normal(geometry, pos),
                    kind,
                    shifted: None,
                    lo_in_plus: s_lo > 0,
                });
            }
        }
    }
    Ok(points)
}

/// True when the sampled curvature satisfies |kappa * dx| < 1/4 along the
/// whole zero set, the resolution requirement of the high-order interpolants.
pub fn check_curvature_constraint(geometry: &dyn LevelSetGeometry, dx: f64) -> bool {
    let samples = geometry.boundary_samples(10_000);
    samples
        .iter()
        .map(|x| (geometry.curvature(*x) * dx).abs())
        .fold(0.0, f64::max)
        < 0.25
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_control_points_on_circle() {
        // Center off the lattice so no crossing coincides with a node (the
        // degenerate-crossing nudge would otherwise move it by 1e-6 dx).
        let grid = Grid2D::unit_periodic(64);
        let c = Circle::exterior([0.501, 0.502], 0.25);
        let pts = find_control_points(&grid, &c, ConditionKind::Dirichlet).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            let dx = p.position[0] - 0.501;
            let dy = p.position[1] - 0.502;
            let d = (dx * dx + dy * dy).sqrt();
            assert!((d - 0.25).abs() <= 1e-10, "off-circle by {}", (d - 0.25).abs());
            // Normal points outward (increasing phi) and matches the radial
            // direction analytically.
            let nr = [dx / d, dy / d];
            assert!((p.normal[0] - nr[0]).abs() < 1e-8);
            assert!((p.normal[1] - nr[1]).abs() < 1e-8);
            let norm = (p.normal[0] * p.normal[0] + p.normal[1] * p.normal[1]).sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn no_crossing_means_no_points() {
        let grid = Grid2D::unit_periodic(32);
        let far = Circle::exterior([10.0, 10.0], 0.5);
        let pts = find_control_points(&grid, &far, ConditionKind::Dirichlet).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn flanking_nodes_have_opposite_signs() {
        let grid = Grid2D::unit_periodic(64);
        let star = star_geometry(None, 0.28, 0.025);
        let pts = find_control_points(&grid, &star, ConditionKind::Dirichlet).unwrap();
        for p in &pts {
            let lo = grid.pos(p.node_lo[0], p.node_lo[1]);
            let mut hi = lo;
            hi[p.axis] += grid.dx;
            let f_lo = star.phi(lo);
            let f_hi = star.phi(hi);
            assert!(f_lo * f_hi < 0.0);
            assert_eq!(p.lo_in_plus, f_lo > 0.0);
            assert!(p.psi_minus > 0.0 && p.psi_minus < 1.0);
            assert!((p.psi_minus + p.psi_plus - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn node_coincident_crossing_is_nudged() {
        // Vertical interface through x = 0.5 lands exactly on a node column.
        let grid = Grid2D::unit_periodic(8);
        let line = Line::new([1.0, 0.0], 0.5);
        let pts = find_control_points(&grid, &line, ConditionKind::Dirichlet).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            assert!(p.psi_minus >= PSI_FLOOR);
            assert!(p.psi_plus >= PSI_FLOOR);
        }
    }

    #[test]
    fn under_resolved_geometry_reports_multiple_crossings() {
        // A thin circle squeezed between two adjacent nodes flips sign twice
        // along one cell edge.
        let grid = Grid2D::unit_periodic(8);
        let tiny = Circle::interior([0.5 + 0.5 / 8.0, 0.5], 0.02);
        let err = find_control_points(&grid, &tiny, ConditionKind::Dirichlet);
        assert!(matches!(err, Err(Error::MultipleCrossings { .. })));
    }

    #[test]
    fn curvature_constraint_circle() {
        let c = Circle::exterior([0.5, 0.5], 0.2);
        // kappa = 1/r: dx = r/8 passes, dx = r/2 fails.
        assert!(check_curvature_constraint(&c, 0.2 / 8.0));
        assert!(!check_curvature_constraint(&c, 0.2 / 2.0));
    }

    #[test]
    fn curvature_constraint_star_at_64() {
        let star = star_geometry(None, 0.28, 0.025);
        assert!(check_curvature_constraint(&star, 1.0 / 64.0));
    }

    #[test]
    fn star_phi_zero_on_parametrized_boundary() {
        let star = star_geometry(None, 0.28, 0.025);
        for k in 0..17 {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / 17.0;
            let r = 0.28 + 0.025 * (5.0 * theta).cos();
            let x = [0.501 + r * theta.cos(), 0.502 + r * theta.sin()];
            assert!(star.phi(x).abs() < 1e-12);
        }
        assert!(star.phi([0.501, 0.502]) < 0.0);
        let far = [0.501 + 0.56, 0.502];
        assert!(star.phi(far) > 0.0);
    }

    #[test]
    fn star_gradient_matches_finite_differences() {
        let star = star_geometry(None, 0.28, 0.025);
        let h = 1e-6;
        for k in 0..11 {
            let theta = 0.17 + k as f64 * 0.55;
            let r = 0.29;
            let x = [0.501 + r * theta.cos(), 0.502 + r * theta.sin()];
            let g = star.grad(x);
            let fd0 = (star.phi([x[0] + h, x[1]]) - star.phi([x[0] - h, x[1]])) / (2.0 * h);
            let fd1 = (star.phi([x[0], x[1] + h]) - star.phi([x[0], x[1] - h])) / (2.0 * h);
            assert!((g[0] - fd0).abs() < 1e-6);
            assert!((g[1] - fd1).abs() < 1e-6);
        }
    }

    #[test]
    fn star_curvature_sampled_magnitude() {
        // Against a dense finite-difference curvature of the level set.
        let star = star_geometry(None, 0.28, 0.025);
        let samples = star.boundary_samples(10_000);
        let max_kappa = samples
            .iter()
            .map(|x| star.curvature(*x).abs())
            .fold(0.0, f64::max);
        // Lobe tips dominate; the analytic polar formula gives ~10 there.
        assert!(max_kappa > 9.0 && max_kappa < 11.0, "max curvature {max_kappa}");
    }
}
