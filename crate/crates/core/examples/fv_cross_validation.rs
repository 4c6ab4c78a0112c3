//! Rusanov finite-volume runs from exact initial data, compared with the
//! exact field at half the breaking time.
//!
//! cargo run --release --example fv_cross_validation

use euler_planewave::cli::fv_convergence;
use euler_planewave::Scenario;

fn main() -> euler_planewave::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/fv_two_wave.json");
    let sc = Scenario::load(path.as_ref())?;
    let t_end = 0.5 * sc.field()?.t_max();
    let report = fv_convergence(&sc, &[64, 128, 256], t_end, |_| Ok(()))?;
    println!("t_end = {t_end:.6}");
    for row in &report.rows {
        let l1 = row.l1.expect("before breaking");
        let order = row.order.map_or("n/a".into(), |o| format!("{o:.3}"));
        println!("n = {:>4}: L1(rho) = {:.4e}, order = {order}", row.n, l1[0]);
    }
    Ok(())
}
