//! First-order finite-volume solver for the 2-D isentropic Euler equations
//! in conservation form, `U = (ρ, ρu₁, ρu₂)`.
//!
//! Unsplit Rusanov (local Lax-Friedrichs) fluxes, forward Euler in time,
//! zero-gradient boundaries. Used as an independent cross-check of the
//! exact fields.

use rayon::prelude::*;

use crate::contour::{isolines, ContourLevel};
use crate::error::{Error, Result};
use crate::field::ExactField;
use crate::gas::GasParams;
use crate::grid::GridSpec;

pub const DEFAULT_CFL: f64 = 0.45;

pub type Conserved = [f64; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct FvState {
    grid: GridSpec,
    gas: GasParams,
    conserved: Vec<Conserved>,
    time: f64,
    cfl: f64,
}

/// Per-cell primitive quantities reused by both flux directions.
#[derive(Clone, Copy)]
struct Prim {
    u: [f64; 2],
    p: f64,
    c: f64,
}

fn physical_flux(q: &Conserved, w: &Prim, axis: usize) -> Conserved {
    let un = w.u[axis];
    let mut f = [q[0] * un, q[1] * un, q[2] * un];
    f[1 + axis] += w.p;
    f
}

fn rusanov(ql: &Conserved, wl: &Prim, qr: &Conserved, wr: &Prim, axis: usize) -> Conserved {
    let s = (wl.u[axis].abs() + wl.c).max(wr.u[axis].abs() + wr.c);
    let fl = physical_flux(ql, wl, axis);
    let fr = physical_flux(qr, wr, axis);
    std::array::from_fn(|k| 0.5 * (fl[k] + fr[k]) - 0.5 * s * (qr[k] - ql[k]))
}

fn vacuum_error(grid: &GridSpec, bad: Vec<usize>) -> Error {
    let nx = grid.resolution[0];
    Error::Vacuum {
        count: bad.len(),
        first: bad.iter().take(5).map(|&k| (k % nx, k / nx)).collect(),
    }
}

impl FvState {
    /// Initial state from primitive values `(ρ, u₁, u₂)` at cell centers.
    pub fn from_fn(
        gas: GasParams,
        grid: GridSpec,
        init: impl Fn(f64, f64) -> (f64, f64, f64) + Sync,
    ) -> Result<Self> {
        grid.validate()?;
        if grid.dim() != 2 {
            return Err(Error::Precondition("the finite-volume solver is two-dimensional".into()));
        }
        let (nx, ny) = (grid.resolution[0], grid.resolution[1]);
        let conserved: Vec<Conserved> = (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let (rho, u1, u2) = init(grid.cell_center(0, k % nx), grid.cell_center(1, k / nx));
                [rho, rho * u1, rho * u2]
            })
            .collect();
        let st = Self {
            grid,
            gas,
            conserved,
            time: 0.0,
            cfl: DEFAULT_CFL,
        };
        st.check_density()?;
        Ok(st)
    }

    /// Samples the exact field at cell centers at `t = 0`.
    pub fn init_from_exact(ef: &ExactField, grid: GridSpec) -> Result<Self> {
        if ef.dim() != 2 {
            return Err(Error::Precondition("the finite-volume solver is two-dimensional".into()));
        }
        grid.validate()?;
        let (nx, ny) = (grid.resolution[0], grid.resolution[1]);
        let samples = (0..nx * ny)
            .into_par_iter()
            .map(|k| ef.sample(&[grid.cell_center(0, k % nx), grid.cell_center(1, k / nx)], 0.0))
            .collect::<Result<Vec<_>>>()?;
        let bad: Vec<usize> = (0..samples.len()).filter(|&k| !samples[k].valid()).collect();
        if !bad.is_empty() {
            return Err(vacuum_error(&grid, bad));
        }
        let conserved = samples
            .iter()
            .map(|s| {
                let rho = s.rho.unwrap_or_default();
                [rho, rho * s.u[0], rho * s.u[1]]
            })
            .collect();
        Ok(Self {
            grid,
            gas: *ef.gas(),
            conserved,
            time: 0.0,
            cfl: DEFAULT_CFL,
        })
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn gas(&self) -> &GasParams {
        &self.gas
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn cfl(&self) -> f64 {
        self.cfl
    }

    pub fn nx(&self) -> usize {
        self.grid.resolution[0]
    }

    pub fn ny(&self) -> usize {
        self.grid.resolution[1]
    }

    /// Conserved variables, row-major with x fastest.
    pub fn conserved(&self) -> &[Conserved] {
        &self.conserved
    }

    pub fn cell_area(&self) -> f64 {
        self.grid.cell_size(0) * self.grid.cell_size(1)
    }

    pub fn density(&self) -> Vec<f64> {
        self.conserved.iter().map(|q| q[0]).collect()
    }

    pub fn pressure(&self) -> Vec<f64> {
        self.conserved.iter().map(|q| self.gas.pressure(q[0])).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.conserved.iter().map(|q| q[0]).sum::<f64>() * self.cell_area()
    }

    pub fn total_momentum(&self) -> [f64; 2] {
        let area = self.cell_area();
        [
            self.conserved.iter().map(|q| q[1]).sum::<f64>() * area,
            self.conserved.iter().map(|q| q[2]).sum::<f64>() * area,
        ]
    }

    fn check_density(&self) -> Result<()> {
        let bad: Vec<usize> = (0..self.conserved.len())
            .filter(|&k| !(self.conserved[k][0] > 0.0 && self.conserved[k][0].is_finite()))
            .collect();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(vacuum_error(&self.grid, bad))
        }
    }

    fn primitives(&self) -> Vec<Prim> {
        self.conserved
            .par_iter()
            .map(|q| {
                let rho = q[0];
                let p = self.gas.pressure(rho);
                Prim {
                    u: [q[1] / rho, q[2] / rho],
                    p,
                    c: (self.gas.gamma() * p / rho).sqrt(),
                }
            })
            .collect()
    }

    fn max_speed(prim: &[Prim]) -> f64 {
        // max is exact and order independent, so the row-parallel reduction
        // is deterministic
        prim.par_iter()
            .map(|w| w.u[0].abs().max(w.u[1].abs()) + w.c)
            .reduce(|| 0.0, f64::max)
    }

    /// Largest stable step for the current state.
    pub fn stable_dt(&self) -> f64 {
        let prim = self.primitives();
        self.cfl * self.grid.cell_size(0).min(self.grid.cell_size(1)) / Self::max_speed(&prim)
    }

    /// One forward-Euler step of size `dt`. The state is left untouched on error.
    pub fn step_by(&mut self, dt: f64) -> Result<()> {
        let (nx, ny) = (self.nx(), self.ny());
        let (dx, dy) = (self.grid.cell_size(0), self.grid.cell_size(1));
        let prim = self.primitives();
        let q = &self.conserved;

        // x-faces: row j has nx + 1 faces; boundary faces see a copy of the
        // adjacent cell (zero gradient)
        let xflux: Vec<Conserved> = (0..ny)
            .into_par_iter()
            .flat_map_iter(|j| {
                let prim = &prim;
                (0..=nx).map(move |i| {
                    let l = j * nx + i.saturating_sub(1);
                    let r = j * nx + i.min(nx - 1);
                    rusanov(&q[l], &prim[l], &q[r], &prim[r], 0)
                })
            })
            .collect();
        let yflux: Vec<Conserved> = (0..=ny)
            .into_par_iter()
            .flat_map_iter(|j| {
                let prim = &prim;
                (0..nx).map(move |i| {
                    let b = j.saturating_sub(1) * nx + i;
                    let t = j.min(ny - 1) * nx + i;
                    rusanov(&q[b], &prim[b], &q[t], &prim[t], 1)
                })
            })
            .collect();

        let (cx, cy) = (dt / dx, dt / dy);
        let next: Vec<Conserved> = (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % nx, k / nx);
                let (fw, fe) = (&xflux[j * (nx + 1) + i], &xflux[j * (nx + 1) + i + 1]);
                let (fs, fn_) = (&yflux[j * nx + i], &yflux[(j + 1) * nx + i]);
                std::array::from_fn(|m| q[k][m] - cx * (fe[m] - fw[m]) - cy * (fn_[m] - fs[m]))
            })
            .collect();

        let bad: Vec<usize> = (0..next.len())
            .filter(|&k| !(next[k][0] > 0.0 && next[k].iter().all(|v| v.is_finite())))
            .collect();
        if !bad.is_empty() {
            return Err(vacuum_error(&self.grid, bad));
        }
        self.conserved = next;
        self.time += dt;
        Ok(())
    }

    /// One step at the stable time step; returns the step taken.
    pub fn step(&mut self) -> Result<f64> {
        let dt = self.stable_dt();
        self.step_by(dt)?;
        Ok(dt)
    }

    /// Steps until `t_end`, clipping the last step to land on it exactly.
    /// Returns the number of steps taken.
    pub fn run_until(&mut self, t_end: f64) -> Result<usize> {
        if t_end < self.time {
            return Err(Error::Precondition(format!(
                "t_end = {t_end} is before the current time {}",
                self.time
            )));
        }
        let mut steps = 0;
        while self.time < t_end {
            let dt = self.stable_dt();
            if self.time + dt >= t_end {
                self.step_by(t_end - self.time)?;
                self.time = t_end;
            } else {
                self.step_by(dt)?;
            }
            steps += 1;
        }
        Ok(steps)
    }

    /// Cell-area weighted L1 differences of `(ρ, ρu₁, ρu₂)` against the exact
    /// field at cell centers at the current time.
    pub fn l1_error(&self, ef: &ExactField) -> Result<[f64; 3]> {
        self.l1_error_within(ef, 0.0)
    }

    /// As [`FvState::l1_error`], restricted to cells whose centers lie at
    /// least `margin` inside the domain.
    pub fn l1_error_within(&self, ef: &ExactField, margin: f64) -> Result<[f64; 3]> {
        let nx = self.nx();
        let center = |k: usize| [self.grid.cell_center(0, k % nx), self.grid.cell_center(1, k / nx)];
        let inside = |x: &[f64; 2]| {
            (0..2).all(|i| x[i] >= self.grid.lower[i] + margin && x[i] <= self.grid.upper[i] - margin)
        };
        let cells: Vec<usize> = (0..self.conserved.len()).filter(|&k| inside(&center(k))).collect();
        let samples = cells
            .par_iter()
            .map(|&k| ef.sample(&center(k), self.time))
            .collect::<Result<Vec<_>>>()?;
        let bad: Vec<Vec<f64>> = cells
            .iter()
            .zip(&samples)
            .filter(|(_, s)| !s.valid())
            .map(|(&k, _)| center(k).to_vec())
            .collect();
        if !bad.is_empty() {
            return Err(Error::Positivity {
                count: bad.len(),
                first: bad.into_iter().take(5).collect(),
            });
        }
        let mut err = [0.0; 3];
        for (&k, s) in cells.iter().zip(&samples) {
            let q = &self.conserved[k];
            let rho = s.rho.unwrap_or_default();
            let exact = [rho, rho * s.u[0], rho * s.u[1]];
            for m in 0..3 {
                err[m] += (q[m] - exact[m]).abs();
            }
        }
        let area = self.cell_area();
        Ok(err.map(|e| e * area))
    }

    /// Largest `|u₁|, |u₂|` plus sound speed over all cells.
    pub fn max_signal_speed(&self) -> f64 {
        Self::max_speed(&self.primitives())
    }

    /// Bilinear interpolation of the density at `(x, y)`, clamped to the
    /// cell-center lattice.
    pub fn density_at(&self, x: f64, y: f64) -> f64 {
        let (nx, ny) = (self.nx(), self.ny());
        let locate = |v: f64, axis: usize, n: usize| {
            let s = ((v - self.grid.lower[axis]) / self.grid.cell_size(axis) - 0.5).clamp(0.0, (n - 1) as f64);
            let i = (s.floor() as usize).min(n.saturating_sub(2));
            (i, s - i as f64)
        };
        let (i, fx) = locate(x, 0, nx);
        let (j, fy) = locate(y, 1, ny);
        let at = |i: usize, j: usize| self.conserved[j.min(ny - 1) * nx + i.min(nx - 1)][0];
        (1.0 - fy) * ((1.0 - fx) * at(i, j) + fx * at(i + 1, j)) + fy * ((1.0 - fx) * at(i, j + 1) + fx * at(i + 1, j + 1))
    }

    /// Marching-squares contours of `p = kρ^γ` on the cell-center lattice.
    pub fn pressure_contours(&self, levels: &[f64]) -> Vec<ContourLevel> {
        let xs: Vec<f64> = (0..self.nx()).map(|i| self.grid.cell_center(0, i)).collect();
        let ys: Vec<f64> = (0..self.ny()).map(|j| self.grid.cell_center(1, j)).collect();
        let p = self.pressure();
        levels
            .iter()
            .map(|&level| ContourLevel {
                level,
                polylines: isolines(&p, &xs, &ys, level),
            })
            .collect()
    }
}
