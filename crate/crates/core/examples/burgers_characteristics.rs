//! Characteristic solutions of f_t + (1+a) f f_s = 0 up to breaking.
//!
//! cargo run --example burgers_characteristics

use euler_planewave::burgers::riemann_shock;
use euler_planewave::{BurgersProfile, BurgersWave, GasParams};

fn main() -> euler_planewave::Result<()> {
    let g = GasParams::new(1.4, 1.0)?;
    let profiles = [
        BurgersProfile::Sine { amplitude: 0.5, wavenumber: 2.0, offset: 1.0 },
        BurgersProfile::GaussianBump { amplitude: 0.8, center: 0.0, width: 0.5, offset: 1.0 },
        BurgersProfile::Linear { slope: 1.0, offset: 0.0 },
    ];
    for p in profiles {
        let w = BurgersWave::new(p, g.speed_factor())?;
        let tb = w.breaking_time();
        println!("{p:?}\n  t_break = {tb:.6}");
        let t = if tb.is_finite() { 0.8 * tb } else { 1.0 };
        for s in [-1.0, -0.25, 0.0, 0.25, 1.0] {
            let v = w.eval(s, t)?;
            println!(
                "  s = {s:>5.2}, t = {t:.4}: foot = {:>9.6}, f = {:>9.6}, f_s = {:>10.4}",
                w.foot(s, t)?,
                v.f,
                v.f_s
            );
        }
        let (r1, r2) = (w.pde_residual(0.3, 0.5 * t, 1e-3)?, w.pde_residual(0.3, 0.5 * t, 5e-4)?);
        println!("  residual h=1e-3: {r1:.3e}, h=5e-4: {r2:.3e}, order {:.2}", (r1 / r2).log2());
    }
    println!("\nshock 2 -> 1 at gamma 1.4 moves at {}", riemann_shock(g.a(), 2.0, 1.0)?);
    Ok(())
}
