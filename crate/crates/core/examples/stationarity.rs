//! Stationarity certificates: α-stationarity, the Bouligand and Clarke
//! notions, and what the checks say about a solver's output versus nearby
//! points.
//!
//! ```bash
//! cargo run --example stationarity
//! ```

use ndarray::{array, Array2};
use sparsekit::bench::{gen_instance, ExperimentSpec, MRule, SRule};
use sparsekit::optimality::{
    check_alpha_stationary, check_sparsity_stationarity, stationarity_report, tangent_cone_contains, ConeKind,
    Stationarity,
};
use sparsekit::solvers::{gspa_solve, SolverConfig};
use sparsekit::ProblemInstance;

fn main() -> sparsekit::Result<()> {
    // Table-style verdicts on the identity instance.
    for s in [1, 2] {
        let inst = ProblemInstance::builder(Array2::eye(2), array![1.0, 2.0], s).allow_any_shape().build()?;
        let x = array![0.0, 2.0];
        print!("s = {s}, x = {x}:");
        for kind in [Stationarity::NB, Stationarity::TB, Stationarity::NC, Stationarity::TC] {
            print!("  {kind:?} {}", check_sparsity_stationarity(&inst, x.view(), kind, 0.0)?);
        }
        println!("  alpha(1) {}", check_alpha_stationary(&inst, x.view(), 1.0, 0.0)?.stationary);
    }

    let x = array![1.0, 0.0, 0.0];
    let d = array![0.0, 1.0, 0.0];
    println!(
        "\ndirection {d} at {x}, s = 2: Bouligand {}, Clarke {}",
        tangent_cone_contains(x.view(), d.view(), 2, ConeKind::Bouligand),
        tangent_cone_contains(x.view(), d.view(), 2, ConeKind::Clarke)
    );

    // A solver output is certified; moving one coordinate breaks it.
    let spec = ExperimentSpec {
        n: 200,
        m_rule: MRule::Explicit(60),
        s_rule: SRule::Explicit(6),
        nonneg: true,
        ..ExperimentSpec::new(200)
    };
    let inst = gen_instance(&spec, 0)?;
    let res = gspa_solve(&inst, &SolverConfig::for_instance(&inst))?;
    let alpha = res.final_alpha().unwrap_or(1.0);
    let report = stationarity_report(&inst, res.x_final.view(), alpha, 1e-6)?;
    println!("\nGSPA output, alpha = {alpha:.4}: alpha-stationary {}, worst violation {:.2e}",
        report.alpha_stationary, report.worst_violation);

    let mut moved = res.x_final.clone();
    let i = moved.iter().position(|v| *v != 0.0).unwrap();
    moved[i] += 0.05;
    let report = stationarity_report(&inst, moved.view(), alpha, 1e-6)?;
    println!("after x[{i}] += 0.05:   alpha-stationary {}, worst violation {:.2e}",
        report.alpha_stationary, report.worst_violation);

    // Infeasible points are rejected with the violated constraint named.
    moved[i] = -1.0;
    if let Err(e) = stationarity_report(&inst, moved.view(), alpha, 1e-6) {
        println!("after x[{i}] = -1:      {e}");
    }
    Ok(())
}
