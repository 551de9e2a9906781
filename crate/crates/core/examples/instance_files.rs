//! Instance and result files: generate a seeded instance, save it as JSON,
//! load it back, solve, and write the per-iteration trace as CSV. The same
//! files work with the `sparsekit` command-line tool.
//!
//! ```bash
//! cargo run --example instance_files
//! ```

use sparsekit::bench::{gen_instance, ExperimentSpec, MRule, SRule};
use sparsekit::solvers::{SolverConfig, SolverKind};
use sparsekit::ProblemInstance;

fn main() -> sparsekit::Result<()> {
    let dir = std::env::temp_dir().join("sparsekit-example");
    std::fs::create_dir_all(&dir)?;

    let spec = ExperimentSpec {
        n: 100,
        m_rule: MRule::Explicit(40),
        s_rule: SRule::Explicit(5),
        nonneg: true,
        base_seed: 42,
        ..ExperimentSpec::new(100)
    };
    let inst = gen_instance(&spec, 0)?;
    let path = dir.join("instance.json");
    inst.save(&path)?;
    let loaded = ProblemInstance::load(&path)?;
    assert_eq!(loaded.to_json()?, inst.to_json()?);
    println!("saved and reloaded {} ({} x {}, s = {})", path.display(), loaded.m(), loaded.n(), loaded.s());

    let res = SolverKind::Gspa.solve(&loaded, &SolverConfig::for_instance(&loaded))?;
    let trace = dir.join("trace.csv");
    res.trace.write_csv(std::fs::File::create(&trace)?)?;
    std::fs::write(dir.join("result.json"), serde_json::to_string_pretty(&res)?)?;
    println!("{} after {} iterations; trace in {}", res.status.as_str(), res.iterations, trace.display());
    print!("{}", res.trace.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");

    println!("\nsame thing from the shell:");
    println!("  sparsekit solve --in {} --trace trace.csv --out result.json", path.display());
    println!("  sparsekit check --in {} --x result.json --tol 1e-6", path.display());
    Ok(())
}
