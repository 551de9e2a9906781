//! GSPA on a two-dimensional instance small enough to follow by hand.
//!
//! With `A = I`, `b = (1, 2)` and `s = 1` the initial support is `{1}`, the
//! adaptive step is `‖g‖²/‖Ag‖² = 1`, the first step lands on `(0, 2)`, and
//! the second step does not move.
//!
//! ```bash
//! cargo run --example identity_walkthrough
//! ```

use ndarray::{array, Array2};
use sparsekit::optimality::{stationarity_report, DEFAULT_TOL};
use sparsekit::solvers::{gspa_solve, SolverConfig};
use sparsekit::{lipschitz_constant, ProblemInstance};

fn main() -> sparsekit::Result<()> {
    let inst = ProblemInstance::builder(Array2::eye(2), array![1.0, 2.0], 1)
        .nonneg(true)
        .allow_any_shape()
        .build()?;
    let spectrum = lipschitz_constant(inst.a());
    println!("l_r = {} after {} power iterations", spectrum.l_r, spectrum.iterations_used);

    let res = gspa_solve(&inst, &SolverConfig::for_instance(&inst))?;
    println!("\n k   objective   alpha   backtracks  |dx|");
    for r in &res.trace.records {
        println!("{:2}   {:9.4}   {:5.3}   {:10}  {:.3}", r.k, r.objective, r.alpha, r.backtracks, r.delta_norm);
    }
    println!("\nx_final = {}  ({})", res.x_final, res.status.as_str());
    println!("gradient at x_final = {}", inst.gradient(res.x_final.view())?);

    let report = stationarity_report(&inst, res.x_final.view(), 1.0, DEFAULT_TOL)?;
    println!("\n{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
