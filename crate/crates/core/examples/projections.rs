//! Projections onto the sparse set and the sparse nonnegative set.
//!
//! ```bash
//! cargo run --example projections
//! ```

use ndarray::array;
use sparsekit::projection::{
    brute_force_projection, project_nonneg, project_sparse, project_sparse_nonneg, support,
};

fn main() -> sparsekit::Result<()> {
    let x = array![3.0, -5.0, 2.0, 0.5];
    println!("x                       = {x}");
    println!("P_S(x), s = 2            = {}", project_sparse(x.view(), 2)?);
    println!("P_R+(x)                  = {}", project_nonneg(x.view()));
    println!("P_(S∩R+)(x), s = 2       = {}", project_sparse_nonneg(x.view(), 2)?);

    // Order matters: clamp first, then threshold.
    let y = array![-2.0, 1.0];
    let right = project_sparse_nonneg(y.view(), 1)?;
    let wrong = project_nonneg(project_sparse(y.view(), 1)?.view());
    println!("\ny = {y}, s = 1");
    println!("  threshold after clamping: {right}");
    println!("  clamping after threshold: {wrong}   <- not the projection");

    // Ties go to the smaller index.
    let tied = array![1.0, -1.0, 1.0];
    println!("\nties: P_S({tied}, 1) = {}", project_sparse(tied.view(), 1)?);

    // The exhaustive oracle agrees.
    let oracle = brute_force_projection(x.view(), 2, true)?;
    println!("\nbrute force P_(S∩R+)(x)  = {oracle}");
    println!("support                  = {:?}", support(oracle.view(), 0.0).indices());
    Ok(())
}
