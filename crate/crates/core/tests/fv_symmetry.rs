//! Three identical waves at 120° in a gamma = 2 gas: the finite-volume
//! density should respect the rotational symmetry up to its own error level.

use euler_planewave::{assemble, build_directions, BurgersProfile, BurgersWave, FvState, GasParams, GridSpec};

#[test]
fn rotated_probes_agree_within_error_level() {
    let g = GasParams::new(2.0, 0.5).unwrap();
    let ds = build_directions(&g, 2, 3).unwrap();
    let p = BurgersProfile::GaussianBump { amplitude: 0.4, center: 0.0, width: 0.8, offset: 1.0 };
    let ef = assemble(g, ds, vec![BurgersWave::new(p, g.speed_factor()).unwrap(); 3], None).unwrap();
    let (lo, hi) = (-3.0, 3.0);
    let mut st = FvState::init_from_exact(&ef, GridSpec::cube(2, lo, hi, 96).unwrap()).unwrap();
    st.run_until(0.4 * ef.t_max()).unwrap();
    let level = st.l1_error(&ef).unwrap()[0] / ((hi - lo) * (hi - lo));

    let (c, s) = ((2.0 * std::f64::consts::PI / 3.0).cos(), (2.0 * std::f64::consts::PI / 3.0).sin());
    let mut worst: f64 = 0.0;
    for k in 0..60 {
        let r = 0.2 + 1.2 * (k % 6) as f64 / 5.0;
        let phi = 0.37 * k as f64;
        let (x, y) = (r * phi.cos(), r * phi.sin());
        let (xr, yr) = (c * x - s * y, s * x + c * y);
        worst = worst.max((st.density_at(x, y) - st.density_at(xr, yr)).abs());
    }
    assert!(worst <= 2.0 * level, "asymmetry {worst:.3e} vs error level {level:.3e}");
}
