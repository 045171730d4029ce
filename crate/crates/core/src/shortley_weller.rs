//! Low-order, geometry-robust Shortley-Weller discretization: irregular
//! stencils whose arms shrink to meet the boundary, with Dirichlet, Neumann,
//! and interface-jump variants plus the intersection-shifting rule used for
//! preconditioning.
//!
//! Sign conventions for interfaces follow the 1D wall-value system
//!   [u]_w = u_w^- - u_w^+      (value jump, minus minus plus)
//!   [b u']_w = b+ (u_hi - u_w^+)/dx+ - b- (u_w^- - u_lo)/dx-
//! where the minus material hosts the lower-index node. These differ from
//! the high-order module's jump convention; callers translate.

use crate::error::{Error, Result};
use crate::geometry::{
    find_control_points, ConditionKind, ControlPoint, LevelSetGeometry, ShiftedIntersection,
};
use crate::grid::{classify_points, Grid2D, Mask, PointClass, ScalarField};
use crate::operator::BetaPair;
use std::sync::Arc;

/// Shift close intersections away from their neighboring grid nodes.
///
/// Boundary crossings whose in-domain-side fractional spacing is below 1/2
/// move along the grid line until that spacing is exactly 1/2; interface
/// crossings move to the cell-edge midpoint. Crossings already satisfying
/// the bound keep their position. The unshifted location stays in place;
/// the result is recorded in `shifted`.
pub fn shift_intersections(points: &[ControlPoint]) -> Vec<ControlPoint> {
    points
        .iter()
        .map(|cp| {
            let mut out = cp.clone();
            let (psi_minus, psi_plus) = match cp.kind {
                ConditionKind::Jump => (0.5, 0.5),
                _ => {
                    // The in-domain flank is the one in the positive region.
                    if cp.lo_in_plus {
                        let pm = cp.psi_minus.max(0.5);
                        (pm, 1.0 - pm)
                    } else {
                        let pp = cp.psi_plus.max(0.5);
                        (1.0 - pp, pp)
                    }
                }
            };
            let mut position = cp.position;
            // Reconstruct the position from the lower flank along the axis.
            let lo_coord = cp.position[cp.axis] - cp.psi_minus * spacing_of(cp);
            position[cp.axis] = lo_coord + psi_minus * spacing_of(cp);
            out.shifted = Some(ShiftedIntersection {
                position,
                psi_minus,
                psi_plus,
            });
            out
        })
        .collect()
}

/// The grid spacing implied by a control point's flank distance; callers
/// construct control points on square-cell grids, so psi- + psi+ = 1.
fn spacing_of(cp: &ControlPoint) -> f64 {
    // psi values are stored in units of dx; the absolute cell width cancels
    // in the psi arithmetic, so derive it from the stored geometry.
    debug_assert!((cp.psi_minus + cp.psi_plus - 1.0).abs() < 1e-12);
    1.0
}

/// Irregular second-derivative coefficients for a cell with wall values on
/// one or both sides: returns (c_w^-, c_i, c_w^+), each to be scaled by
/// 1/dx^2. Regular sides are recovered with psi = 1 and the wall value
/// replaced by the neighbor value.
pub fn sw_dirichlet_coeffs(psi_minus: f64, psi_plus: f64) -> (f64, f64, f64) {
    let s = psi_minus + psi_plus;
    (
        2.0 / (psi_minus * s),
        -2.0 / (psi_minus * psi_plus),
        2.0 / (psi_plus * s),
    )
}

/// Which flanks of an irregular node hold walls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwCase {
    WallLo,
    WallHi,
    WallBoth,
}

/// Coefficients of the one-sided Neumann stencils. Flux terms multiply
/// dx * g where g is the along-axis derivative at the wall; all entries are
/// scaled by 1/dx^2 on application.
#[derive(Clone, Copy, Debug, Default)]
pub struct SwNeumannCoeffs {
    pub flux_lo: f64,
    pub flux_hi: f64,
    pub center: f64,
    pub neighbor: f64,
}

/// First-order-exact Neumann stencils for the three wall arrangements.
pub fn sw_neumann_coeffs(case: SwCase, psi_minus: f64, psi_plus: f64) -> SwNeumannCoeffs {
    match case {
        SwCase::WallLo => {
            let d = 2.0 * psi_minus + psi_plus;
            SwNeumannCoeffs {
                flux_lo: -2.0 / d,
                flux_hi: 0.0,
                center: -2.0 / (psi_plus * d),
                neighbor: 2.0 / (psi_plus * d),
            }
        }
        SwCase::WallHi => {
            let d = psi_minus + 2.0 * psi_plus;
            SwNeumannCoeffs {
                flux_lo: 0.0,
                flux_hi: 2.0 / d,
                center: -2.0 / (psi_minus * d),
                neighbor: 2.0 / (psi_minus * d),
            }
        }
        SwCase::WallBoth => {
            let d = psi_minus + psi_plus;
            SwNeumannCoeffs {
                flux_lo: -1.0 / d,
                flux_hi: 1.0 / d,
                center: 0.0,
                neighbor: 0.0,
            }
        }
    }
}

/// Wall values on both sides of an interface crossing, from the discretized
/// jump conditions. `j0 = u_w^- - u_w^+`, `j1` the flux jump along the axis,
/// `u_lo`/`u_hi` the flanking node values with the minus material at the
/// lower node. Returns (u_w^+, u_w^-).
#[allow(clippy::too_many_arguments)]
pub fn sw_interface_wall_values(
    psi_minus: f64,
    psi_plus: f64,
    beta_minus: f64,
    beta_plus: f64,
    j0: f64,
    j1_dx: f64,
    u_lo: f64,
    u_hi: f64,
) -> (f64, f64) {
    let alpha_plus = psi_plus / beta_plus;
    let alpha_minus = psi_minus / beta_minus;
    let s = alpha_plus + alpha_minus;
    let ubar = (alpha_plus * u_lo + alpha_minus * u_hi) / s
        - alpha_plus * alpha_minus * j1_dx / s;
    let u_wall_plus = ubar - alpha_plus * j0 / s;
    let u_wall_minus = ubar + alpha_minus * j0 / s;
    (u_wall_plus, u_wall_minus)
}

/// Affine wall-value coefficients used when assembling interface rows:
/// u_w^side = c_minus u(minus node) + c_plus u(plus node)
///          + c_j0 j0 + c_j1 (dx j1),
/// in material labels (psi measured from the crossing to each material's
/// node). j1 needs no axis-sign factor: in the frame running from the minus
/// material to the plus material the projected flux jump equals the normal
/// flux jump under the sign-split approximation.
struct InterfaceWall {
    c_minus: f64,
    c_plus: f64,
    c_j0: f64,
    c_j1: f64,
}

fn interface_wall_coeffs(
    psi_minus: f64,
    psi_plus: f64,
    beta_minus: f64,
    beta_plus: f64,
    want_plus_side: bool,
) -> InterfaceWall {
    let alpha_plus = psi_plus / beta_plus;
    let alpha_minus = psi_minus / beta_minus;
    let s = alpha_plus + alpha_minus;
    let jump = if want_plus_side {
        -alpha_plus / s
    } else {
        alpha_minus / s
    };
    InterfaceWall {
        c_minus: alpha_plus / s,
        c_plus: alpha_minus / s,
        c_j0: jump,
        c_j1: -alpha_plus * alpha_minus / s,
    }
}

/// Data terms attached to one row: coefficients on the prescribed values of
/// a control point (Dirichlet value / Neumann flux, or the two jumps).
#[derive(Clone, Copy, Debug)]
pub struct SwDataTerm {
    pub cp: u32,
    pub c0: f64,
    pub c1: f64,
}

/// One assembled row: diagonal, axis-neighbor couplings, and data terms.
#[derive(Clone, Debug, Default)]
pub struct SwRow {
    pub diag: f64,
    pub off: Vec<(u32, f64)>,
    pub data: Vec<SwDataTerm>,
}

/// Low-order operator on the same grid/geometry as the high-order one.
/// Rows represent the plain Laplacian (no diffusion coefficient): for
/// interface problems the equivalent constant-coefficient system
/// lap(u) = f / beta is discretized, with the material coefficients
/// entering only through the interface wall values.
pub struct SWOperator {
    pub grid: Grid2D,
    pub geometry: Option<Arc<dyn LevelSetGeometry>>,
    pub cond: ConditionKind,
    pub beta: BetaPair,
    pub shifted: bool,
    pub mask: Arc<Mask>,
    pub control_points: Vec<ControlPoint>,
    pub rows: Vec<SwRow>,
    side: Vec<i8>,
}

impl SWOperator {
    pub fn build(
        grid: Grid2D,
        geometry: Option<Arc<dyn LevelSetGeometry>>,
        cond: ConditionKind,
        beta: BetaPair,
        shifted: bool,
    ) -> Result<Self> {
        let n = grid.node_count();
        let interface = cond == ConditionKind::Jump;
        let mask = Arc::new(classify_points(&grid, geometry.as_deref(), 1, interface));

        let mut side = vec![1i8; n];
        if let Some(g) = &geometry {
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    side[grid.idx(i, j)] = if g.phi(grid.pos(i, j)) > 0.0 { 1 } else { -1 };
                }
            }
        }

        let control_points = match &geometry {
            Some(g) => {
                let pts = find_control_points(&grid, g.as_ref(), cond)?;
                if shifted {
                    shift_intersections(&pts)
                } else {
                    pts
                }
            }
            None => Vec::new(),
        };

        let mut crossings = [vec![-1i32; n], vec![-1i32; n]];
        for (c, cp) in control_points.iter().enumerate() {
            crossings[cp.axis][grid.idx(cp.node_lo[0], cp.node_lo[1])] = c as i32;
        }

        let inv_dx2 = 1.0 / (grid.dx * grid.dx);
        let mut rows = vec![SwRow::default(); n];

        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let idx = grid.idx(i, j);
                if mask.is_exterior(idx) {
                    continue;
                }
                let mut row = SwRow::default();
                let mut wall_case = [None::<SwCase>; 2];

                for axis in 0..2 {
                    // Crossing indices on the lo and hi flanks.
                    let (lo_cell, hi_cell) = if axis == 0 {
                        (grid.offset(i, j, -1, 0), idx)
                    } else {
                        (grid.offset(i, j, 0, -1), idx)
                    };
                    let cp_lo = crossings[axis][lo_cell];
                    let cp_hi = crossings[axis][hi_cell];
                    let lo_node = if axis == 0 {
                        grid.offset(i, j, -1, 0)
                    } else {
                        grid.offset(i, j, 0, -1)
                    };
                    let hi_node = if axis == 0 {
                        grid.offset(i, j, 1, 0)
                    } else {
                        grid.offset(i, j, 0, 1)
                    };

                    // Fractional spacings toward each flank (1 when regular).
                    let psi_of = |cpi: i32, toward_hi: bool| -> f64 {
                        if cpi < 0 {
                            return 1.0;
                        }
                        let cp = &control_points[cpi as usize];
                        let (pm, pp) = match &cp.shifted {
                            Some(s) => (s.psi_minus, s.psi_plus),
                            None => (cp.psi_minus, cp.psi_plus),
                        };
                        // Distance from this node to the crossing: the node
                        // is the lower flank when looking toward hi.
                        if toward_hi {
                            pm
                        } else {
                            pp
                        }
                    };

                    let has_lo = cp_lo >= 0;
                    let has_hi = cp_hi >= 0;
                    let psi_minus = psi_of(cp_lo, false);
                    let psi_plus = psi_of(cp_hi, true);

                    match (has_lo, has_hi) {
                        (false, false) => {
                            row.diag += -2.0 * inv_dx2;
                            push_off(&mut row, idx as u32, lo_node as u32, inv_dx2);
                            push_off(&mut row, idx as u32, hi_node as u32, inv_dx2);
                        }
                        _ => {
                            wall_case[axis] = Some(match (has_lo, has_hi) {
                                (true, false) => SwCase::WallLo,
                                (false, true) => SwCase::WallHi,
                                (true, true) => SwCase::WallBoth,
                                _ => unreachable!(),
                            });
                            assemble_irregular_axis(
                                &mut row,
                                cond,
                                beta,
                                &control_points,
                                cp_lo,
                                cp_hi,
                                psi_minus,
                                psi_plus,
                                idx as u32,
                                lo_node as u32,
                                hi_node as u32,
                                side[idx],
                                inv_dx2,
                                grid.dx,
                                axis,
                            );
                        }
                    }
                }

                // Isolated node under flux-type conditions: the sign-split
                // case (c) row carries no solution entries at all along
                // either axis, so pin the node instead (homogeneous
                // Dirichlet-style case (c) row) to keep the system solvable.
                if cond != ConditionKind::Dirichlet
                    && wall_case == [Some(SwCase::WallBoth), Some(SwCase::WallBoth)]
                {
                    row = SwRow::default();
                    let (_, ci, _) = sw_dirichlet_coeffs(0.5, 0.5);
                    row.diag = 2.0 * ci * inv_dx2;
                }

                rows[idx] = row;
            }
        }

        Ok(Self {
            grid,
            geometry,
            cond,
            beta,
            shifted,
            mask,
            control_points,
            rows,
            side,
        })
    }

    pub fn side(&self, idx: usize) -> i8 {
        self.side[idx]
    }

    pub fn new_field(&self) -> ScalarField {
        ScalarField::zeros(self.mask.clone())
    }

    /// Apply the operator with prescribed data. For interface problems the
    /// data follows this module's sign conventions (see module docs).
    pub fn apply(&self, u: &ScalarField, data: &SwBoundaryData) -> ScalarField {
        let mut out = self.new_field();
        for idx in 0..self.grid.node_count() {
            if self.mask.is_exterior(idx) {
                continue;
            }
            let row = &self.rows[idx];
            let mut s = row.diag * u.values[idx];
            for (nb, c) in &row.off {
                s += c * u.values[*nb as usize];
            }
            for term in &row.data {
                s += term.c0 * data.value0(term.cp as usize)
                    + term.c1 * data.value1(term.cp as usize);
            }
            out.values[idx] = s;
        }
        out
    }

    /// Rows-only application (homogeneous data).
    pub fn apply_linear(&self, u: &ScalarField) -> ScalarField {
        let mut out = self.new_field();
        self.apply_linear_into(u, &mut out);
        out
    }

    pub fn apply_linear_into(&self, u: &ScalarField, out: &mut ScalarField) {
        for idx in 0..self.grid.node_count() {
            if self.mask.is_exterior(idx) {
                out.values[idx] = 0.0;
                continue;
            }
            let row = &self.rows[idx];
            let mut s = row.diag * u.values[idx];
            for (nb, c) in &row.off {
                s += c * u.values[*nb as usize];
            }
            out.values[idx] = s;
        }
    }
}

/// Accumulate a coupling, routing self-couplings into the diagonal.
fn push_off(row: &mut SwRow, this_idx: u32, node: u32, coeff: f64) {
    if node == this_idx {
        row.diag += coeff;
        return;
    }
    for (n, c) in row.off.iter_mut() {
        if *n == node {
            *c += coeff;
            return;
        }
    }
    row.off.push((node, coeff));
}

/// Assemble the irregular one-dimensional contribution at one node.
#[allow(clippy::too_many_arguments)]
fn assemble_irregular_axis(
    row: &mut SwRow,
    cond: ConditionKind,
    beta: BetaPair,
    cps: &[ControlPoint],
    cp_lo: i32,
    cp_hi: i32,
    psi_minus: f64,
    psi_plus: f64,
    this_idx: u32,
    lo_node: u32,
    hi_node: u32,
    node_side: i8,
    inv_dx2: f64,
    dx: f64,
    axis: usize,
) {
    match cond {
        ConditionKind::Dirichlet => {
            let (c_lo, c_i, c_hi) = sw_dirichlet_coeffs(psi_minus, psi_plus);
            row.diag += c_i * inv_dx2;
            if cp_lo >= 0 {
                row.data.push(SwDataTerm {
                    cp: cp_lo as u32,
                    c0: c_lo * inv_dx2,
                    c1: 0.0,
                });
            } else {
                push_off(row, this_idx, lo_node, c_lo * inv_dx2);
            }
            if cp_hi >= 0 {
                row.data.push(SwDataTerm {
                    cp: cp_hi as u32,
                    c0: c_hi * inv_dx2,
                    c1: 0.0,
                });
            } else {
                push_off(row, this_idx, hi_node, c_hi * inv_dx2);
            }
        }
        ConditionKind::Neumann => {
            let case = match (cp_lo >= 0, cp_hi >= 0) {
                (true, false) => SwCase::WallLo,
                (false, true) => SwCase::WallHi,
                (true, true) => SwCase::WallBoth,
                _ => unreachable!(),
            };
            let c = sw_neumann_coeffs(case, psi_minus, psi_plus);
            row.diag += c.center * inv_dx2;
            match case {
                SwCase::WallLo => push_off(row, this_idx, hi_node, c.neighbor * inv_dx2),
                SwCase::WallHi => push_off(row, this_idx, lo_node, c.neighbor * inv_dx2),
                SwCase::WallBoth => {}
            }
            // The along-axis wall slope comes from the prescribed normal
            // flux: du/dx_i ~ sign(n_i) q / beta.
            let mut add_flux = |cpi: i32, coeff: f64| {
                if cpi < 0 || coeff == 0.0 {
                    return;
                }
                let cp = &cps[cpi as usize];
                let sign = if cp.normal[axis] >= 0.0 { 1.0 } else { -1.0 };
                row.data.push(SwDataTerm {
                    cp: cpi as u32,
                    c0: coeff * inv_dx2 * dx * sign / beta.plus,
                    c1: 0.0,
                });
            };
            add_flux(cp_lo, c.flux_lo);
            add_flux(cp_hi, c.flux_hi);
        }
        ConditionKind::Jump => {
            // Dirichlet-style row using this side's wall value at each
            // crossing; the wall value couples across the interface.
            let (c_lo, c_i, c_hi) = sw_dirichlet_coeffs(psi_minus, psi_plus);
            row.diag += c_i * inv_dx2;
            let want_plus = node_side > 0;
            let mut add_wall = |cpi: i32, wall_coeff: f64, flank_lo: u32, flank_hi: u32| {
                let cp = &cps[cpi as usize];
                let (pm, pp) = match &cp.shifted {
                    Some(s) => (s.psi_minus, s.psi_plus),
                    None => (cp.psi_minus, cp.psi_plus),
                };
                // Material labels: psi measured from crossing to each
                // material's node.
                let (minus_node, plus_node, psi_m, psi_p) = if cp.lo_in_plus {
                    (flank_hi, flank_lo, pp, pm)
                } else {
                    (flank_lo, flank_hi, pm, pp)
                };
                let wc =
                    interface_wall_coeffs(psi_m, psi_p, beta.minus, beta.plus, want_plus);
                push_off(row, this_idx, minus_node, wall_coeff * wc.c_minus * inv_dx2);
                push_off(row, this_idx, plus_node, wall_coeff * wc.c_plus * inv_dx2);
                row.data.push(SwDataTerm {
                    cp: cpi as u32,
                    c0: wall_coeff * wc.c_j0 * inv_dx2,
                    c1: wall_coeff * wc.c_j1 * inv_dx2 * dx,
                });
            };
            if cp_lo >= 0 {
                add_wall(cp_lo, c_lo, lo_node, this_idx);
            } else {
                push_off(row, this_idx, lo_node, c_lo * inv_dx2);
            }
            if cp_hi >= 0 {
                add_wall(cp_hi, c_hi, this_idx, hi_node);
            } else {
                push_off(row, this_idx, hi_node, c_hi * inv_dx2);
            }
        }
    }
}

/// Prescribed data for the low-order operator, indexed per control point.
/// For interfaces, value0 is the value jump in this module's convention
/// (u_w^- - u_w^+) and value1 the normal flux jump.
#[derive(Clone, Debug)]
pub enum SwBoundaryData {
    Dirichlet(Vec<f64>),
    Neumann(Vec<f64>),
    Jump { j0: Vec<f64>, j1: Vec<f64> },
}

impl SwBoundaryData {
    pub fn zero(kind: ConditionKind, n: usize) -> Self {
        match kind {
            ConditionKind::Dirichlet => SwBoundaryData::Dirichlet(vec![0.0; n]),
            ConditionKind::Neumann => SwBoundaryData::Neumann(vec![0.0; n]),
            ConditionKind::Jump => SwBoundaryData::Jump {
                j0: vec![0.0; n],
                j1: vec![0.0; n],
            },
        }
    }

    fn value0(&self, cp: usize) -> f64 {
        match self {
            SwBoundaryData::Dirichlet(v) | SwBoundaryData::Neumann(v) => v[cp],
            SwBoundaryData::Jump { j0, .. } => j0[cp],
        }
    }

    fn value1(&self, cp: usize) -> f64 {
        match self {
            SwBoundaryData::Jump { j1, .. } => j1[cp],
            _ => 0.0,
        }
    }
}
