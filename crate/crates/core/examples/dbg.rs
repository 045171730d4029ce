// truncation slopes after the normal-depth fix
use iim_poisson::geometry::*;
use iim_poisson::grid::*;
use iim_poisson::operator::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn main() {
    let star = Arc::new(star_geometry(None, 0.28, 0.025));
    let u = |x: [f64; 2]| (4.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).sin();
    let lap = |x: [f64; 2]| -20.0 * PI * PI * u(x);
    let gradx = |x: [f64; 2]| 4.0 * PI * (4.0 * PI * x[0]).cos() * (2.0 * PI * x[1]).sin();
    let grady = |x: [f64; 2]| 2.0 * PI * (4.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).cos();

    for (n, k) in [(4usize, 4usize), (4, 5), (4, 6), (6, 6), (6, 7), (6, 8)] {
        for cond in [ConditionKind::Dirichlet, ConditionKind::Neumann] {
            let mut errs = vec![];
            for nx in [64usize, 128, 256, 512] {
                let grid = Grid2D::unit_periodic(nx);
                let op = ImmersedOperator::build(
                    grid, Some(star.clone()), n, k, cond, BetaPair::constant(1.0),
                ).unwrap();
                let uf = op.field_from_fn(u);
                let data = match cond {
                    ConditionKind::Dirichlet => BoundaryData::dirichlet_from(&op.control_points, |cp| u(cp.position)),
                    ConditionKind::Neumann => BoundaryData::neumann_from(&op.control_points, |cp| {
                        cp.normal[0] * gradx(cp.position) + cp.normal[1] * grady(cp.position)
                    }),
                    _ => unreachable!(),
                };
                let lu = op.apply(&uf, &data);
                let mut aff: f64 = 0.0;
                for j in 0..op.grid.ny {
                    for i in 0..op.grid.nx {
                        let idx = op.grid.idx(i, j);
                        if op.mask.class(idx) == PointClass::Affected {
                            aff = aff.max((lu.values[idx] - lap(op.grid.pos(i, j))).abs());
                        }
                    }
                }
                errs.push(aff);
            }
            // least-squares slope of log2 err vs log2 nx over 4 points
            let xs: Vec<f64> = [64.0f64, 128.0, 256.0, 512.0].iter().map(|v: &f64| v.log2()).collect();
            let ys: Vec<f64> = errs.iter().map(|e| e.log2()).collect();
            let xm = xs.iter().sum::<f64>() / 4.0;
            let ym = ys.iter().sum::<f64>() / 4.0;
            let slope = -xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum::<f64>()
                / xs.iter().map(|x| (x - xm) * (x - xm)).sum::<f64>();
            println!("({n},{k}) {:?}: affected slope {:.2} (want {}); errs {:.2e} {:.2e} {:.2e} {:.2e}",
                cond, slope, k - 2, errs[0], errs[1], errs[2], errs[3]);
        }
    }
}
