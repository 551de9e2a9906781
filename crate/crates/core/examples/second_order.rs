//! s-regularity and the second-order test. When every `s` columns of `A`
//! are independent, the Gram matrix on any feasible support is positive
//! definite and a GSPA limit is a strict local minimizer.
//!
//! ```bash
//! cargo run --example second_order
//! ```

use ndarray::{array, Array2};
use sparsekit::bench::{gen_instance, ExperimentSpec, MRule, SRule};
use sparsekit::optimality::{check_s_regular, check_second_order};
use sparsekit::solvers::{gspa_solve, SolverConfig};
use sparsekit::ProblemInstance;

fn main() -> sparsekit::Result<()> {
    let spec = ExperimentSpec {
        n: 6,
        m_rule: MRule::Explicit(4),
        s_rule: SRule::Explicit(3),
        ..ExperimentSpec::new(6)
    };
    for trial in 0..5 {
        let inst = gen_instance(&spec, trial)?;
        let regular = check_s_regular(inst.a(), 3, 1e-10)?;
        let res = gspa_solve(&inst, &SolverConfig::default())?;
        let so = check_second_order(&inst, res.x_final.view(), true, 1e-10)?;
        println!(
            "trial {trial}: 3-regular {regular}, lambda_min {:.4}, strict local min {}",
            so.lambda_min, so.passed
        );
    }

    // Two equal columns: no 2-regularity, and a support holding both is flat.
    let a: Array2<f64> = array![[1.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let inst = ProblemInstance::builder(a.clone(), array![1.0, 0.0], 2).allow_any_shape().build()?;
    let so = check_second_order(&inst, array![0.5, 0.5, 0.0].view(), true, 1e-10)?;
    println!("\nrepeated column: 2-regular {}, lambda_min {:.1e}, strict {}",
        check_s_regular(&a, 2, 1e-10)?, so.lambda_min, so.passed);
    Ok(())
}
