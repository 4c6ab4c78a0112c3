//! Density jump condition across a shock in wave 1 while wave 2 varies:
//! the mismatch changes with f2, so no single shock speed satisfies it.
//!
//! cargo run --example jump_mismatch

use euler_planewave::burgers::riemann_shock;
use euler_planewave::verify::{jump_mismatch_demo, mismatch_spread, ShockData};
use euler_planewave::{build_directions, GasParams};

fn main() -> euler_planewave::Result<()> {
    let g = GasParams::new(1.4, 1.0)?;
    let ds = build_directions(&g, 3, 3)?;
    let shock = ShockData {
        f1_left: 2.0,
        f1_right: 1.0,
        sigma: riemann_shock(g.a(), 2.0, 1.0)?,
    };
    let f2: Vec<f64> = (0..9).map(|i| 0.5 + 0.125 * i as f64).collect();
    let rows = jump_mismatch_demo(&g, &ds, shock, 1.0, &f2)?;
    println!("{:>6} {:>14} {:>14} {:>14}", "f2", "[rho]sigma", "[rho u].v1", "mismatch");
    for r in &rows {
        println!("{:>6.3} {:>14.6e} {:>14.6e} {:>14.6e}", r.f2, r.lhs, r.rhs, r.mismatch);
    }
    println!("spread = {:.6e}", mismatch_spread(&rows));
    Ok(())
}
