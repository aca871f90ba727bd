//! Discrete algebraic Riccati equation and the resulting LQR gain.

use navsim::navcore::{dare_residual, solve_dare, spectral_radius, Mat};

fn main() -> navsim::Result<()> {
    let one = Mat::identity(1);
    let (p, _) = solve_dare(&one, &one, &one, &one)?;
    println!(
        "scalar: P = {:.12} (golden ratio {:.12})",
        p[(0, 0)],
        (1.0 + 5f64.sqrt()) / 2.0
    );

    let dt = 0.1;
    let a = Mat::from_rows(&[[1.0, dt], [0.0, 1.0]]);
    let b = Mat::from_rows(&[[0.5 * dt * dt], [dt]]);
    let q = Mat::identity(2);
    let r = Mat::identity(1);
    let (p, k) = solve_dare(&a, &b, &q, &r)?;
    let closed = &a - &(&b * &k);
    println!("double integrator: K = {:?}", k.as_slice());
    println!(
        "residual {:.2e}, closed-loop spectral radius {:.4}",
        dare_residual(&p, &a, &b, &q, &r)?,
        spectral_radius(&closed)
    );
    Ok(())
}
