//! Exact optimal transport between two discrete distributions, compared
//! with the northwest-corner starting plan.
//!
//! cargo run --example transport_solver

use ndarray::array;

use blockwmd::transport::{northwest_corner, plan_cost, solve_transport};

fn main() -> blockwmd::Result<()> {
    let src = [0.5, 0.3, 0.2];
    let dst = [0.25, 0.25, 0.5];
    let cost = array![[4.0, 1.0, 3.0], [2.0, 5.0, 1.0], [1.0, 2.0, 6.0]];

    let plan = solve_transport(&src, &dst, &cost)?;
    let nw = northwest_corner(&src, &dst);
    println!("optimal flow:\n{:.4}", plan.flow);
    println!("optimal cost:          {:.6}", plan.objective);
    println!("northwest-corner cost: {:.6}", plan_cost(&nw, &cost));
    println!("row sums {:?}", plan.row_sums());
    println!("col sums {:?}", plan.col_sums());
    Ok(())
}
