//! Dense ADMM on a box-constrained quadratic program.

use navsim::navcore::Mat;
use navsim::tracking::{qp_solve_admm, AdmmParams, Qp};

fn main() -> navsim::Result<()> {
    // minimize (x0 - 2)^2 + (x1 + 1)^2 subject to 0 <= x <= 1 and x0 + x1 <= 1.5
    let qp = Qp::new(
        Mat::from_diag(&[2.0, 2.0]),
        vec![-4.0, 2.0],
        Mat::from_rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
        vec![0.0, 0.0, f64::NEG_INFINITY],
        vec![1.0, 1.0, 1.5],
    )?;
    let sol = qp_solve_admm(&qp, &AdmmParams::default())?.ok()?;
    println!(
        "x = ({:.6}, {:.6}) after {} iterations, residuals {:.1e} / {:.1e}",
        sol.x[0], sol.x[1], sol.iterations, sol.primal_residual, sol.dual_residual
    );
    Ok(())
}
