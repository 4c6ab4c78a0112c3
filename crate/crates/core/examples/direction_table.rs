//! Maximal number of wave directions per gas and dimension, plus the
//! canonical vectors for a few cases.
//!
//! cargo run --example direction_table

use euler_planewave::{build_directions, max_wave_count, GasParams};

fn main() -> euler_planewave::Result<()> {
    let gammas = [1.4, 5.0 / 3.0, 1.8, 2.0, 2.5];
    println!("{:>8} {:>6} {:>6}", "gamma", "d=2", "d=3");
    for &gamma in &gammas {
        let g = GasParams::new(gamma, 1.0)?;
        println!("{:>8.4} {:>6} {:>6}", gamma, max_wave_count(&g, 2)?, max_wave_count(&g, 3)?);
    }

    for (gamma, d) in [(2.0, 2), (5.0 / 3.0, 3), (2.5, 3)] {
        let g = GasParams::new(gamma, 1.0)?;
        let ds = build_directions(&g, d, max_wave_count(&g, d)?)?;
        println!("\ngamma = {gamma:.4}, d = {d}, v_i.v_j = {:.4}", -g.a());
        for (k, v) in ds.vectors().iter().enumerate() {
            println!("  v{} = {:?}", k + 1, v);
        }
        println!("  gram residual = {:.2e}", ds.gram_residual());
        match ds.transverse_direction() {
            Some(t) => println!("  transverse = {t:?}"),
            None => println!("  transverse: none"),
        }
    }
    Ok(())
}
