//! Finite-difference residuals of the Euler equations for exact fields in
//! each admissible regime, and for a set whose dot products are off by 0.01.
//! Rank-saturated sets (N = d + 1) admit no such perturbation in R^d.
//!
//! cargo run --release --example theorem_residuals

use euler_planewave::verify::{observed_order, primitive_residual, sample_points};
use euler_planewave::{assemble, build_directions, BurgersProfile, BurgersWave, GasParams, TransverseMode};

fn main() -> euler_planewave::Result<()> {
    let sine = BurgersProfile::Sine { amplitude: 0.4, wavenumber: 1.2, offset: 2.0 };
    let cases = [(1.4, 3, 3, false), (5.0 / 3.0, 3, 4, false), (2.0, 2, 3, false), (2.5, 3, 2, true)];
    let hs = [1e-2, 5e-3, 2.5e-3];
    let t = 0.3;

    for (gamma, d, n, transverse) in cases {
        let g = GasParams::new(gamma, 1.0)?;
        let ds = build_directions(&g, d, n)?;
        let waves = vec![BurgersWave::new(sine, g.speed_factor())?; n];
        let mode = transverse.then(|| TransverseMode {
            carrier: 1,
            profile: BurgersProfile::Sine { amplitude: 0.5, wavenumber: 1.0, offset: 0.0 },
            direction: None,
        });
        let mut sets = vec![("exact", ds.clone())];
        // with a transverse mode the carrier is re-projected, so a shift of
        // v1.v2 has no effect
        if !transverse {
            match ds.perturbed(0, 1, 0.01) {
                Ok(p) => sets.push(("perturbed", p)),
                Err(e) => println!("gamma {gamma:.3} d={d} N={n}: no perturbed set ({e})"),
            }
        }
        for (label, set) in sets {
            let gram = set.gram_residual();
            let ef = assemble(g, set, waves.clone(), mode.clone())?;
            let pts = sample_points(&ef, &vec![-2.0; d], &vec![2.0; d], 50, 17, t, hs[0]);
            let r: Vec<f64> = hs
                .iter()
                .map(|&h| primitive_residual(&ef, &pts, t, h).map(|r| r.max_momentum_residual.max(r.max_continuity_residual)))
                .collect::<Result<_, _>>()?;
            println!(
                "gamma {gamma:.3} d={d} N={n}{} [{label}, gram {gram:.1e}]: {:.3e} {:.3e} {:.3e}  orders {:.2} {:.2}",
                if transverse { " +transverse" } else { "" },
                r[0],
                r[1],
                r[2],
                observed_order(r[0], r[1], 2.0),
                observed_order(r[1], r[2], 2.0)
            );
        }
    }
    Ok(())
}
