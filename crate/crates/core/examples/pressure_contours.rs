//! Crossing waves run past breaking with the finite-volume solver; pressure
//! contours of the result are written as CSV polylines.
//!
//! cargo run --release --example pressure_contours [output-dir]

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use euler_planewave::export::write_contours_csv;
use euler_planewave::{assemble, build_directions, BurgersProfile, BurgersWave, FvState, GasParams, GridSpec};

fn main() -> euler_planewave::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("planewave_contours"));
    std::fs::create_dir_all(&dir)?;

    let g = GasParams::new(2.0, 0.5)?;
    let ds = build_directions(&g, 2, 3)?;
    let p = BurgersProfile::GaussianBump { amplitude: 0.6, center: 0.0, width: 0.5, offset: 1.0 };
    let ef = assemble(g, ds, vec![BurgersWave::new(p, g.speed_factor())?; 3], None)?;

    let mut st = FvState::init_from_exact(&ef, GridSpec::cube(2, -3.0, 3.0, 200)?)?;
    let t_end = 2.0 * ef.t_max();
    let steps = st.run_until(t_end)?;
    let pressure = st.pressure();
    let (lo, hi) = pressure.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let levels: Vec<f64> = (1..8).map(|i| lo + (hi - lo) * i as f64 / 8.0).collect();
    let contours = st.pressure_contours(&levels);

    let path = dir.join("contours.csv");
    write_contours_csv(&mut BufWriter::new(File::create(&path)?), &contours)?;
    let lines: usize = contours.iter().map(|c| c.polylines.len()).sum();
    println!("t = {t_end:.4} (2 t_max) after {steps} steps, p in [{lo:.4}, {hi:.4}]");
    println!("{lines} polylines over {} levels written to {}", levels.len(), path.display());
    Ok(())
}
