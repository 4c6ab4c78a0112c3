//! Three crossing waves in a gamma = 2 gas (the shallow-water analogue),
//! sampled on a grid and written as CSV and legacy VTK.
//!
//! cargo run --example exact_field_snapshot [output-dir]

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use euler_planewave::export::{write_snapshot_csv, write_snapshot_vtk};
use euler_planewave::{assemble, build_directions, BurgersProfile, BurgersWave, GasParams, GridSpec};

fn main() -> euler_planewave::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("planewave_snapshot"));
    std::fs::create_dir_all(&dir)?;

    let g = GasParams::new(2.0, 0.5)?;
    let ds = build_directions(&g, 2, 3)?;
    let bump = |c| BurgersProfile::GaussianBump { amplitude: 0.5, center: c, width: 0.6, offset: 1.0 };
    let waves = [-1.0, 0.0, 1.0]
        .map(|c| BurgersWave::new(bump(c), g.speed_factor()))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let ef = assemble(g, ds, waves, None)?;
    println!("t_max = {:.6} (wave {})", ef.t_max(), ef.breaking_wave());

    let grid = GridSpec::cube(2, -3.0, 3.0, 61)?;
    for (i, t) in [0.0, 0.5 * ef.t_max(), 0.9 * ef.t_max()].into_iter().enumerate() {
        let snap = ef.sample_grid(&grid, t)?;
        let rho_max = snap.samples.iter().filter_map(|s| s.rho).fold(0.0, f64::max);
        let csv = dir.join(format!("field_t{i:03}.csv"));
        let vtk = dir.join(format!("field_t{i:03}.vtk"));
        write_snapshot_csv(&mut BufWriter::new(File::create(&csv)?), &snap)?;
        write_snapshot_vtk(&mut BufWriter::new(File::create(&vtk)?), &snap)?;
        println!("t = {t:.4}: max rho = {rho_max:.4}, invalid = {}, wrote {}", snap.invalid, csv.display());
    }
    Ok(())
}
