//! Assembly of the exact plane-wave solution
//!
//! ```text
//! u(x,t) = Σ_j f_j(x·v_j, t) v_j,    w = S = Σ_j f_j,    ρ = (a S / √(kγ))^(1/a)
//! ```
//!
//! together with its analytic space-time derivatives. One wave term may be
//! replaced by a steady transverse shear `g(x·c) v⊥`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::burgers::{BurgersProfile, BurgersWave};
use crate::directions::DirectionSet;
use crate::error::{Error, Result};
use crate::gas::GasParams;
use crate::grid::GridSpec;

/// Samples with `S` below this are flagged invalid: `∇ρ ∝ ∇S/S` is
/// ill-conditioned there.
pub const MIN_WAVE_SUM: f64 = 1e-8;

const ORTHO_TOL: f64 = 1e-12;

/// Request to replace wave `carrier` by a steady transverse term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransverseMode {
    pub carrier: usize,
    pub profile: BurgersProfile,
    /// Polarization `v⊥`; defaults to [`DirectionSet::transverse_direction`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
}

/// Transverse term `g(x·carrier) · polarization` after validation.
#[derive(Debug, Clone, PartialEq)]
pub struct Transverse {
    pub(crate) index: usize,
    pub(crate) profile: BurgersProfile,
    pub(crate) carrier: Vec<f64>,
    pub(crate) polarization: Vec<f64>,
}

impl Transverse {
    pub fn index(&self) -> usize {
        self.index
    }

    /// Unit vector along which `g` varies.
    pub fn carrier(&self) -> &[f64] {
        &self.carrier
    }

    pub fn polarization(&self) -> &[f64] {
        &self.polarization
    }

    pub fn profile(&self) -> &BurgersProfile {
        &self.profile
    }
}

#[derive(Debug, Clone)]
pub struct ExactField {
    pub(crate) gas: GasParams,
    pub(crate) directions: DirectionSet,
    pub(crate) waves: Vec<BurgersWave>,
    pub(crate) transverse: Option<Transverse>,
    pub(crate) t_max: f64,
    pub(crate) breaking_wave: usize,
}

/// Field values and derivatives at one space-time point.
///
/// `rho`, `p`, `grad_rho` and `rho_t` are `None` outside the positivity
/// region.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    pub u: Vec<f64>,
    pub rho: Option<f64>,
    pub p: Option<f64>,
    /// Sound-speed variable; identical to `wave_sum`.
    pub w: f64,
    /// `S = Σ f_j` over the active waves.
    pub wave_sum: f64,
    /// `grad_u[i][j] = ∂u_i/∂x_j`
    pub grad_u: Vec<Vec<f64>>,
    pub grad_sum: Vec<f64>,
    pub grad_rho: Option<Vec<f64>>,
    pub u_t: Vec<f64>,
    pub sum_t: f64,
    pub rho_t: Option<f64>,
}

impl FieldSample {
    pub fn valid(&self) -> bool {
        self.rho.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct FieldSnapshot {
    pub t: f64,
    pub grid: GridSpec,
    pub points: Vec<Vec<f64>>,
    pub samples: Vec<FieldSample>,
    pub invalid: usize,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(p, q)| p * q).sum()
}

/// Component of `v` orthogonal to the span of `others` (modified Gram-Schmidt).
fn orthogonal_component(v: &[f64], others: &[&[f64]]) -> Vec<f64> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for o in others {
        let mut b = o.to_vec();
        for e in &basis {
            let c = dot(&b, e);
            b.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
        }
        let len = dot(&b, &b).sqrt();
        if len > 1e-9 {
            b.iter_mut().for_each(|x| *x /= len);
            basis.push(b);
        }
    }
    let mut r = v.to_vec();
    for e in &basis {
        let c = dot(&r, e);
        r.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
    }
    r
}

/// Builds the exact field; the waves must share the gas speed factor `1 + a`.
pub fn assemble(
    gas: GasParams,
    directions: DirectionSet,
    waves: Vec<BurgersWave>,
    transverse: Option<TransverseMode>,
) -> Result<ExactField> {
    if waves.len() != directions.n() {
        return Err(Error::Precondition(format!(
            "{} waves supplied for {} directions",
            waves.len(),
            directions.n()
        )));
    }
    let expected = gas.speed_factor();
    for (j, w) in waves.iter().enumerate() {
        if (w.speed_factor() - expected).abs() > 1e-12 {
            return Err(Error::Mismatch {
                wave: j,
                expected,
                found: w.speed_factor(),
            });
        }
    }
    let transverse = transverse
        .map(|mode| resolve_transverse(&directions, mode))
        .transpose()?;

    let mut t_max = f64::INFINITY;
    let mut breaking_wave = 0;
    for (j, w) in waves.iter().enumerate() {
        if transverse.as_ref().is_some_and(|tr| tr.index == j) {
            continue;
        }
        if w.breaking_time() < t_max {
            t_max = w.breaking_time();
            breaking_wave = j;
        }
    }
    Ok(ExactField {
        gas,
        directions,
        waves,
        transverse,
        t_max,
        breaking_wave,
    })
}

fn resolve_transverse(ds: &DirectionSet, mode: TransverseMode) -> Result<Transverse> {
    mode.profile.validate()?;
    let n = ds.n();
    if mode.carrier >= n {
        return Err(Error::Precondition(format!(
            "transverse carrier index {} out of range for {n} directions",
            mode.carrier
        )));
    }
    if n < 2 {
        return Err(Error::Precondition(
            "a transverse replacement needs at least one remaining wave".into(),
        ));
    }
    let polarization = match mode.direction {
        Some(v) => v,
        None => ds.transverse_direction().ok_or_else(|| {
            Error::Orthogonality("direction set spans R^d; no transverse direction exists".into())
        })?,
    };
    if polarization.len() != ds.dim() || (dot(&polarization, &polarization).sqrt() - 1.0).abs() > 1e-12 {
        return Err(Error::Orthogonality(format!(
            "transverse direction {polarization:?} is not a unit vector in R^{}",
            ds.dim()
        )));
    }
    for (k, v) in ds.vectors().iter().enumerate() {
        let c = dot(v, &polarization);
        if c.abs() > ORTHO_TOL {
            return Err(Error::Orthogonality(format!(
                "transverse direction has dot product {c:e} with direction {k}"
            )));
        }
    }
    // The steady term decouples only if its carrier is orthogonal to the
    // remaining waves, so use the part of v_k orthogonal to them.
    let others: Vec<&[f64]> = (0..n)
        .filter(|&j| j != mode.carrier)
        .map(|j| ds.vector(j))
        .collect();
    let mut carrier = orthogonal_component(ds.vector(mode.carrier), &others);
    let len = dot(&carrier, &carrier).sqrt();
    if len < 1e-9 {
        return Err(Error::Orthogonality(format!(
            "direction {} lies in the span of the remaining directions; no admissible carrier",
            mode.carrier
        )));
    }
    carrier.iter_mut().for_each(|c| *c /= len);
    Ok(Transverse {
        index: mode.carrier,
        profile: mode.profile,
        carrier,
        polarization,
    })
}

impl ExactField {
    pub fn gas(&self) -> &GasParams {
        &self.gas
    }

    pub fn directions(&self) -> &DirectionSet {
        &self.directions
    }

    pub fn waves(&self) -> &[BurgersWave] {
        &self.waves
    }

    pub fn transverse(&self) -> Option<&Transverse> {
        self.transverse.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.directions.dim()
    }

    /// Minimum breaking time over the active waves.
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Index of the wave that breaks first.
    pub fn breaking_wave(&self) -> usize {
        self.breaking_wave
    }

    fn is_active(&self, j: usize) -> bool {
        self.transverse.as_ref().is_none_or(|tr| tr.index != j)
    }

    pub fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0) {
            return Err(Error::Precondition(format!("time must be nonnegative, got {t}")));
        }
        if t >= self.t_max {
            return Err(Error::TimeDomain {
                t,
                t_break: self.t_max,
                wave: self.breaking_wave,
            });
        }
        Ok(())
    }

    pub fn sample(&self, x: &[f64], t: f64) -> Result<FieldSample> {
        let d = self.dim();
        if x.len() != d {
            return Err(Error::Precondition(format!(
                "point {x:?} does not lie in R^{d}"
            )));
        }
        self.check_time(t)?;

        let mut u = vec![0.0; d];
        let mut grad_u = vec![vec![0.0; d]; d];
        let mut grad_sum = vec![0.0; d];
        let mut u_t = vec![0.0; d];
        let mut sum = 0.0;
        let mut sum_t = 0.0;

        for (j, (wave, v)) in self.waves.iter().zip(self.directions.vectors()).enumerate() {
            if !self.is_active(j) {
                continue;
            }
            let val = wave.eval(dot(x, v), t)?;
            sum += val.f;
            sum_t += val.f_t;
            for i in 0..d {
                u[i] += val.f * v[i];
                u_t[i] += val.f_t * v[i];
                grad_sum[i] += val.f_s * v[i];
                for m in 0..d {
                    grad_u[i][m] += val.f_s * v[i] * v[m];
                }
            }
        }
        if let Some(tr) = &self.transverse {
            let s = dot(x, &tr.carrier);
            let g = tr.profile.value(s);
            let dg = tr.profile.derivative(s);
            for i in 0..d {
                u[i] += g * tr.polarization[i];
                for m in 0..d {
                    grad_u[i][m] += dg * tr.polarization[i] * tr.carrier[m];
                }
            }
        }

        let (rho, p, grad_rho, rho_t) = if sum >= MIN_WAVE_SUM {
            let rho = self.gas.rho_from_w_unchecked(sum);
            let scale = self.gas.inv_a() * rho / sum;
            (
                Some(rho),
                Some(self.gas.pressure(rho)),
                Some(grad_sum.iter().map(|g| scale * g).collect()),
                Some(scale * sum_t),
            )
        } else {
            (None, None, None, None)
        };

        Ok(FieldSample {
            u,
            rho,
            p,
            w: sum,
            wave_sum: sum,
            grad_u,
            grad_sum,
            grad_rho,
            u_t,
            sum_t,
            rho_t,
        })
    }

    /// Samples every grid node (row-major, x fastest).
    pub fn sample_grid(&self, grid: &GridSpec, t: f64) -> Result<FieldSnapshot> {
        grid.validate()?;
        if grid.dim() != self.dim() {
            return Err(Error::Precondition(format!(
                "grid dimension {} does not match field dimension {}",
                grid.dim(),
                self.dim()
            )));
        }
        self.check_time(t)?;
        let points: Vec<Vec<f64>> = (0..grid.len()).map(|i| grid.node(i)).collect();
        let samples = points
            .par_iter()
            .map(|x| self.sample(x, t))
            .collect::<Result<Vec<_>>>()?;
        let invalid = samples.iter().filter(|s| !s.valid()).count();
        Ok(FieldSnapshot {
            t,
            grid: grid.clone(),
            points,
            samples,
            invalid,
        })
    }
}
