//! High-order immersed boundary treatment: half-elliptical interpolation
//! point sets, least-squares polynomial stencils, ghost-value evaluation,
//! Neumann wall-value inversion, and interface wall values.
//!
//! Every control point owns a polynomial interpolant of total degree < k,
//! fit in scaled coordinates (x - x_c)/dx over a half-elliptical point set
//! on the requested side of the surface. One pivoted QR factorization per
//! point set yields all ghost and derivative stencils via one triangular
//! solve and one product with Q each.

use crate::error::{Error, Result};
use crate::geometry::{ControlPoint, LevelSetGeometry};
use crate::grid::Grid2D;
use crate::linalg::{qr_pivoted, DenseMatrix};

/// Which side of the surface a point set or stencil serves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Number of 2D monomials of total degree < k.
pub fn monomial_count(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Graded exponent list: (0,0); (1,0), (0,1); (2,0), (1,1), (0,2); ...
fn monomial_exponents(k: usize) -> Vec<(u32, u32)> {
    let mut exps = Vec::with_capacity(monomial_count(k));
    for deg in 0..k as u32 {
        for a in (0..=deg).rev() {
            exps.push((a, deg - a));
        }
    }
    exps
}

fn monomial_row(exps: &[(u32, u32)], xi: [f64; 2]) -> Vec<f64> {
    exps.iter()
        .map(|(a, b)| xi[0].powi(*a as i32) * xi[1].powi(*b as i32))
        .collect()
}

/// Interpolation point set for one control point and side. The control
/// point itself participates as the leading data slot; `nodes` lists the
/// grid members, which exclude the single grid node nearest to x_c.
#[derive(Clone, Debug)]
pub struct InterpolationSet {
    pub side: Side,
    pub order: usize,
    /// Wrapped linear node indices.
    pub nodes: Vec<usize>,
    /// Unwrapped node position minus the control point position.
    pub offsets: Vec<[f64; 2]>,
    /// Final (tangential, normal) semi-axes in physical units.
    pub semi_axes: [f64; 2],
}

const TANGENT_AXIS_FACTOR: f64 = 1.5;
const GROWTH_FACTOR: f64 = 1.3;
const MAX_GROWTH: usize = 3;

/// Normal semi-axis in units of dx. The region must span at least k + 1
/// node levels along the normal: a degree-(k-1) fit needs k well-separated
/// levels, and the level hosting the crossing can sit arbitrarily close to
/// the control point, so one redundant level keeps the system stable as the
/// fractional spacing tends to zero.
fn normal_semi_axis(k: usize) -> f64 {
    k as f64 + 1.0
}

/// Gather the in-domain grid nodes inside the half-elliptical region around
/// `cp` that opens into the requested side. The initial semi-axes are
/// (1.5 k dx, (k+1) dx) (tangential, normal), grown by 1.3x up to three
/// times if fewer than 2m points are found.
pub fn collect_interpolation_points(
    cp: &ControlPoint,
    grid: &Grid2D,
    geometry: &dyn LevelSetGeometry,
    k: usize,
    side: Side,
) -> Result<InterpolationSet> {
    collect_interpolation_points_grown(cp, grid, geometry, k, side, 0)
}

/// Point collection starting from a pre-grown ellipse. Fitting retries
/// with `min_growth` raised when the least-squares system turns out
/// numerically rank deficient, which a bare point count cannot detect
/// (a shallow region may hold many points on too few normal levels).
pub fn collect_interpolation_points_grown(
    cp: &ControlPoint,
    grid: &Grid2D,
    geometry: &dyn LevelSetGeometry,
    k: usize,
    side: Side,
    min_growth: usize,
) -> Result<InterpolationSet> {
    assert!(k >= 2, "polynomial order must be at least 2");
    let m = monomial_count(k);
    let needed = 2 * m;
    let dx = grid.dx;
    let n = cp.normal;
    let tangent = [-n[1], n[0]];

    // The single grid node nearest to the control point is excluded.
    let nearest = if cp.psi_minus <= cp.psi_plus {
        grid.idx(cp.node_lo[0], cp.node_lo[1])
    } else {
        let hi = cp.node_hi(grid);
        grid.idx(hi[0], hi[1])
    };

    let anchor = cp.node_lo;
    let anchor_pos = grid.pos(anchor[0], anchor[1]);

    for attempt in min_growth..=MAX_GROWTH {
        let scale = GROWTH_FACTOR.powi(attempt as i32);
        let a = TANGENT_AXIS_FACTOR * k as f64 * dx * scale;
        let b = normal_semi_axis(k) * dx * scale;
        let reach = (a.max(b) / dx).ceil() as isize + 1;

        let mut nodes = Vec::new();
        let mut offsets = Vec::new();
        for dj in -reach..=reach {
            for di in -reach..=reach {
                let iu = anchor[0] as isize + di;
                let ju = anchor[1] as isize + dj;
                if !grid.periodic[0] && (iu < 0 || iu >= grid.nx as isize) {
                    continue;
                }
                if !grid.periodic[1] && (ju < 0 || ju >= grid.ny as isize) {
                    continue;
                }
                let idx = grid.idx(grid.wrap(iu, 0), grid.wrap(ju, 1));
                if idx == nearest {
                    continue;
                }
                let pos = [
                    anchor_pos[0] + di as f64 * dx,
                    anchor_pos[1] + dj as f64 * dx,
                ];
                let v = [pos[0] - cp.position[0], pos[1] - cp.position[1]];
                let vt = v[0] * tangent[0] + v[1] * tangent[1];
                let vn = v[0] * n[0] + v[1] * n[1];
                if (vt / a) * (vt / a) + (vn / b) * (vn / b) > 1.0 {
                    continue;
                }
                let phi = geometry.phi(pos);
                let inside = match side {
                    Side::Plus => phi > 0.0,
                    Side::Minus => phi < 0.0,
                };
                if inside {
                    nodes.push(idx);
                    offsets.push(v);
                }
            }
        }

        if nodes.len() >= needed {
            return Ok(InterpolationSet {
                side,
                order: k,
                nodes,
                offsets,
                semi_axes: [a, b],
            });
        }
        if attempt == MAX_GROWTH {
            return Err(Error::InsufficientPoints {
                x: cp.position[0],
                y: cp.position[1],
                found: nodes.len(),
                needed,
                order: k,
            });
        }
    }
    unreachable!()
}

/// Stencil evaluating the interpolant at one ghost node:
/// p_c(x_g) = coeff_cp * u(x_c) + sum_i coeffs[i] * u(x_i).
#[derive(Clone, Debug)]
pub struct GhostStencil {
    pub node: usize,
    pub coeff_cp: f64,
    pub coeffs: Vec<f64>,
}

/// Stencil approximating a scaled normal derivative at the control point:
/// beta * d_n p_c(x_c) = coeff_cp * u(x_c) + sum_i coeffs[i] * u(x_i).
/// For interface stencils the scale is one and the material coefficients
/// are applied when the jump system is solved.
#[derive(Clone, Debug)]
pub struct NormalStencil {
    pub coeff_cp: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct StencilSet {
    pub ghosts: Vec<GhostStencil>,
    pub normal: Option<NormalStencil>,
}

/// Fit the least-squares interpolant for `iset` and extract ghost stencils
/// at the given (node index, unwrapped position) pairs, plus the normal
/// derivative stencil scaled by `beta` when requested. One QR factorization
/// serves all extractions.
pub fn build_stencils(
    iset: &InterpolationSet,
    cp: &ControlPoint,
    dx: f64,
    ghost_nodes: &[(usize, [f64; 2])],
    want_normal: bool,
    beta: f64,
) -> Result<StencilSet> {
    let k = iset.order;
    let exps = monomial_exponents(k);
    let m = exps.len();
    let rows = 1 + iset.nodes.len();
    assert!(rows > m, "interpolation set too small for order {k}");

    let mut a = DenseMatrix::zeros(rows, m);
    // Row 0 is the control point sample at scaled coordinates (0, 0).
    a.set(0, 0, 1.0);
    for (r, off) in iset.offsets.iter().enumerate() {
        let xi = [off[0] / dx, off[1] / dx];
        let row = monomial_row(&exps, xi);
        for (c, v) in row.iter().enumerate() {
            a.set(r + 1, c, *v);
        }
    }

    // Column equilibration keeps the rank threshold meaningful at high
    // order; the scaling cancels exactly in the extracted stencils.
    let mut col_scale = vec![0.0; m];
    for c in 0..m {
        let mut s = 0.0;
        for r in 0..rows {
            s += a.at(r, c) * a.at(r, c);
        }
        col_scale[c] = s.sqrt().max(f64::MIN_POSITIVE);
        for r in 0..rows {
            a.set(r, c, a.at(r, c) / col_scale[c]);
        }
    }

    let qr = qr_pivoted(&a);
    if qr.rank() < m {
        return Err(Error::RankDeficient {
            rank: qr.rank(),
            cols: m,
        });
    }

    let extract = |v: &[f64]| -> Result<(f64, Vec<f64>)> {
        let scaled: Vec<f64> = v
            .iter()
            .zip(&col_scale)
            .map(|(x, s)| x / s)
            .collect();
        let s = qr.dual_row(&scaled)?;
        Ok((s[0], s[1..].to_vec()))
    };

    let mut ghosts = Vec::with_capacity(ghost_nodes.len());
    for (node, pos) in ghost_nodes {
        let xi = [
            (pos[0] - cp.position[0]) / dx,
            (pos[1] - cp.position[1]) / dx,
        ];
        let row = monomial_row(&exps, xi);
        let (coeff_cp, coeffs) = extract(&row)?;
        ghosts.push(GhostStencil {
            node: *node,
            coeff_cp,
            coeffs,
        });
    }

    let normal = if want_normal {
        // Gradient of the scaled monomials at the origin: only the two
        // linear terms contribute.
        let mut v = vec![0.0; m];
        v[1] = beta * cp.normal[0] / dx; // exponent (1, 0)
        v[2] = beta * cp.normal[1] / dx; // exponent (0, 1)
        let (coeff_cp, coeffs) = extract(&v)?;
        Some(NormalStencil { coeff_cp, coeffs })
    } else {
        None
    };

    Ok(StencilSet { ghosts, normal })
}

/// Collect points and build stencils in one step, growing the region when
/// the fit comes back rank deficient. Returns the point set actually used.
#[allow(clippy::too_many_arguments)]
pub fn fit_stencils(
    cp: &ControlPoint,
    grid: &Grid2D,
    geometry: &dyn LevelSetGeometry,
    k: usize,
    side: Side,
    ghost_nodes: &[(usize, [f64; 2])],
    want_normal: bool,
    beta: f64,
) -> Result<(InterpolationSet, StencilSet)> {
    let mut growth = 0;
    loop {
        let iset = collect_interpolation_points_grown(cp, grid, geometry, k, side, growth)?;
        match build_stencils(&iset, cp, grid.dx, ghost_nodes, want_normal, beta) {
            Ok(ss) => return Ok((iset, ss)),
            Err(Error::RankDeficient { .. }) if growth < MAX_GROWTH => growth += 1,
            Err(e) => return Err(e),
        }
    }
}

/// Invert the flux relation at a control point with a prescribed normal
/// flux: u(x_c) = (q_bar - sum_i s_i u_i) / s_c.
pub fn neumann_wall_value(ns: &NormalStencil, q_bar: f64, u_samples: &[f64]) -> Result<f64> {
    let max_si = ns.coeffs.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if ns.coeff_cp.abs() < 1e-14 * max_si {
        return Err(Error::SingularWallStencil { sc: ns.coeff_cp });
    }
    let s: f64 = ns
        .coeffs
        .iter()
        .zip(u_samples)
        .map(|(c, u)| c * u)
        .sum();
    Ok((q_bar - s) / ns.coeff_cp)
}

/// Solve the discretized jump conditions
///   u+(x_c) - u-(x_c) = j0
///   beta+ (s_c+ u+ + sum s_i+ u_i+) - beta- (s_c- u- + sum s_i- u_i-) = j1
/// for the one-sided wall values (u+(x_c), u-(x_c)). The stencils here are
/// unscaled normal-derivative stencils (built with beta = 1).
#[allow(clippy::too_many_arguments)]
pub fn interface_wall_values(
    ns_plus: &NormalStencil,
    ns_minus: &NormalStencil,
    beta_plus: f64,
    beta_minus: f64,
    j0: f64,
    j1: f64,
    u_plus: &[f64],
    u_minus: &[f64],
) -> Result<(f64, f64)> {
    let denom = beta_plus * ns_plus.coeff_cp - beta_minus * ns_minus.coeff_cp;
    let scale = beta_plus.abs()
        * ns_plus.coeffs.iter().map(|v| v.abs()).fold(0.0, f64::max)
        + beta_minus.abs()
            * ns_minus.coeffs.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if denom.abs() < 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::SingularInterfaceSystem { denom });
    }
    let sum_plus: f64 = ns_plus
        .coeffs
        .iter()
        .zip(u_plus)
        .map(|(c, u)| c * u)
        .sum();
    let sum_minus: f64 = ns_minus
        .coeffs
        .iter()
        .zip(u_minus)
        .map(|(c, u)| c * u)
        .sum();
    let ubar = -(beta_plus * sum_plus - beta_minus * sum_minus) / denom;
    let u_wall_plus = ubar + (j1 - beta_minus * ns_minus.coeff_cp * j0) / denom;
    let u_wall_minus = ubar + (j1 - beta_plus * ns_plus.coeff_cp * j0) / denom;
    Ok((u_wall_plus, u_wall_minus))
}
