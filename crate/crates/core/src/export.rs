//! Snapshot and contour writers.
//!
//! Reals are written with `{:.16e}` (17 significant digits), which parses
//! back to the identical `f64`.

use std::io::{self, Write};

use crate::contour::ContourLevel;
use crate::field::FieldSnapshot;

const AXES: [&str; 3] = ["x", "y", "z"];

fn real(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn snapshot_header(dim: usize) -> String {
    let mut cols: Vec<String> = AXES[..dim].iter().map(|s| s.to_string()).collect();
    cols.extend((1..=dim).map(|i| format!("u{i}")));
    cols.extend(["rho", "p", "w", "S", "valid"].map(String::from));
    cols.join(",")
}

/// One row per grid node, x fastest. Invalid nodes carry `NaN` density and
/// pressure and `valid = 0`.
pub fn write_snapshot_csv<W: Write>(out: &mut W, snap: &FieldSnapshot) -> io::Result<()> {
    writeln!(out, "{}", snapshot_header(snap.grid.dim()))?;
    for (x, s) in snap.points.iter().zip(&snap.samples) {
        let mut row: Vec<String> = x.iter().chain(&s.u).map(|&v| real(v)).collect();
        row.push(real(s.rho.unwrap_or(f64::NAN)));
        row.push(real(s.p.unwrap_or(f64::NAN)));
        row.push(real(s.w));
        row.push(real(s.wave_sum));
        row.push(if s.valid() { "1" } else { "0" }.to_string());
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Legacy ASCII VTK structured points. 2-D grids become a single z-layer and
/// velocities are padded with a zero z-component.
pub fn write_snapshot_vtk<W: Write>(out: &mut W, snap: &FieldSnapshot) -> io::Result<()> {
    let g = &snap.grid;
    let d = g.dim();
    let pad = |f: &dyn Fn(usize) -> String, fill: &str| -> String {
        (0..3).map(|k| if k < d { f(k) } else { fill.to_string() }).collect::<Vec<_>>().join(" ")
    };
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "exact plane-wave field t={}", real(snap.t))?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET STRUCTURED_POINTS")?;
    writeln!(out, "DIMENSIONS {}", pad(&|k| g.resolution[k].to_string(), "1"))?;
    writeln!(out, "ORIGIN {}", pad(&|k| real(g.lower[k]), "0"))?;
    writeln!(
        out,
        "SPACING {}",
        pad(&|k| real(if g.resolution[k] > 1 { g.node_spacing(k) } else { 1.0 }), "1")
    )?;
    writeln!(out, "POINT_DATA {}", g.len())?;
    writeln!(out, "VECTORS velocity double")?;
    for s in &snap.samples {
        writeln!(out, "{}", pad(&|k| real(s.u[k]), "0"))?;
    }
    let scalars: [(&str, &dyn Fn(usize) -> f64); 3] = [
        ("rho", &|i| snap.samples[i].rho.unwrap_or(f64::NAN)),
        ("p", &|i| snap.samples[i].p.unwrap_or(f64::NAN)),
        ("w", &|i| snap.samples[i].w),
    ];
    for (name, value) in scalars {
        writeln!(out, "SCALARS {name} double 1")?;
        writeln!(out, "LOOKUP_TABLE default")?;
        for i in 0..snap.samples.len() {
            writeln!(out, "{}", real(value(i)))?;
        }
    }
    Ok(())
}

/// One block per polyline: a `# level=` comment, an `x,y` header and the
/// points; blocks are separated by blank lines.
pub fn write_contours_csv<W: Write>(out: &mut W, contours: &[ContourLevel]) -> io::Result<()> {
    let mut first = true;
    for c in contours {
        for line in &c.polylines {
            if !first {
                writeln!(out)?;
            }
            first = false;
            writeln!(out, "# level={}", real(c.level))?;
            writeln!(out, "x,y")?;
            for p in line {
                writeln!(out, "{},{}", real(p[0]), real(p[1]))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burgers::{BurgersProfile, BurgersWave};
    use crate::directions::build_directions;
    use crate::field::assemble;
    use crate::gas::GasParams;
    use crate::grid::GridSpec;

    fn snapshot(d: usize, offset: f64) -> FieldSnapshot {
        let g = GasParams::new(2.0, 1.0).unwrap();
        let n = if d == 2 { 3 } else { 2 };
        let ds = build_directions(&g, d, n).unwrap();
        let p = BurgersProfile::Sine { amplitude: 0.5, wavenumber: 1.0, offset };
        let ef = assemble(g, ds, vec![BurgersWave::new(p, 1.5).unwrap(); n], None).unwrap();
        ef.sample_grid(&GridSpec::cube(d, -1.0, 1.0, 3).unwrap(), 0.1).unwrap()
    }

    #[test]
    fn headers() {
        assert_eq!(snapshot_header(2), "x,y,u1,u2,rho,p,w,S,valid");
        assert_eq!(snapshot_header(3), "x,y,z,u1,u2,u3,rho,p,w,S,valid");
    }

    #[test]
    fn csv_values_parse_back_exactly() {
        let snap = snapshot(3, 1.0);
        let mut buf = Vec::new();
        write_snapshot_csv(&mut buf, &snap).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(rows.len(), 27);
        for (row, s) in rows.iter().zip(&snap.samples) {
            let v: Vec<&str> = row.split(',').collect();
            assert_eq!(v.len(), 11);
            assert_eq!(v[3].parse::<f64>().unwrap(), s.u[0]);
            assert_eq!(v[6].parse::<f64>().unwrap(), s.rho.unwrap());
            assert_eq!(v[9].parse::<f64>().unwrap(), s.wave_sum);
            assert_eq!(v[10], "1");
        }
    }

    #[test]
    fn invalid_rows_marked() {
        let snap = snapshot(2, 0.0);
        assert!(snap.invalid > 0);
        let mut buf = Vec::new();
        write_snapshot_csv(&mut buf, &snap).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let marked = text.lines().skip(1).filter(|l| l.ends_with(",0")).count();
        assert_eq!(marked, snap.invalid);
        assert!(text.lines().skip(1).filter(|l| l.ends_with(",0")).all(|l| l.contains("NaN")));
    }

    #[test]
    fn vtk_layout_2d() {
        let snap = snapshot(2, 1.0);
        let mut buf = Vec::new();
        write_snapshot_vtk(&mut buf, &snap).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[3], "DATASET STRUCTURED_POINTS");
        assert_eq!(lines[4], "DIMENSIONS 3 3 1");
        assert_eq!(lines[7], "POINT_DATA 9");
        assert_eq!(lines[8], "VECTORS velocity double");
        assert!(lines[9].ends_with(" 0"));
        for name in ["rho", "p", "w"] {
            assert!(text.contains(&format!("SCALARS {name} double 1\nLOOKUP_TABLE default\n")));
        }
        assert_eq!(lines.len(), 9 + 9 + 3 * (2 + 9));
    }

    #[test]
    fn contour_blocks() {
        let c = vec![ContourLevel {
            level: 1.5,
            polylines: vec![vec![[0.0, 0.0], [1.0, 0.5]], vec![[2.0, 2.0], [3.0, 3.0]]],
        }];
        let mut buf = Vec::new();
        write_contours_csv(&mut buf, &c).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let blocks: Vec<&str> = text.split("\n\n").collect();
        assert_eq!(blocks.len(), 2);
        assert!(blocks[0].starts_with("# level=1.5000000000000000e0\nx,y\n"));
    }
}
