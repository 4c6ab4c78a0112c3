//! Independent checks of an [`ExactField`].
//!
//! Residuals are computed from central finite differences of
//! [`ExactField::sample`] values only; the analytic derivatives the field
//! exposes are never used here, so a chain-rule error in `field` cannot
//! certify itself.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::directions::DirectionSet;
use crate::error::{Error, Result};
use crate::field::{ExactField, FieldSample, MIN_WAVE_SUM};
use crate::gas::GasParams;

/// Default number of sample points.
pub const DEFAULT_POINTS: usize = 100;
/// Default offset into the Halton sequence.
pub const DEFAULT_SEED: u64 = 17;

/// The symmetric hyperbolic form `q_t + Σ_j A_j(q) q_{x_j} = 0` with
/// `q = (u, w)` and `A_j = u_j I + a w L_j`.
#[derive(Debug, Clone)]
pub struct SymmetricForm {
    gas: GasParams,
    l: Vec<DMatrix<f64>>,
}

impl SymmetricForm {
    pub fn new(gas: GasParams, dim: usize) -> Self {
        let size = dim + 1;
        let l = (0..dim)
            .map(|j| {
                let mut m = DMatrix::zeros(size, size);
                m[(j, dim)] = 1.0;
                m[(dim, j)] = 1.0;
                m
            })
            .collect();
        Self { gas, l }
    }

    pub fn dim(&self) -> usize {
        self.l.len()
    }

    pub fn l(&self, j: usize) -> &DMatrix<f64> {
        &self.l[j]
    }

    /// `A_j(q)` for the state `q = (u_1..u_d, w)`.
    pub fn coefficient(&self, j: usize, q: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        let w = q[d];
        DMatrix::identity(d + 1, d + 1) * q[j] + &self.l[j] * (self.gas.a() * w)
    }

    /// `Σ_j v_j L_j`
    pub fn direction_operator(&self, v: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        self.l
            .iter()
            .zip(v)
            .fold(DMatrix::zeros(d + 1, d + 1), |acc, (l, c)| acc + l * *c)
    }

    /// Max over the set of `|(Σ_j v_kj L_j) z_k − z_k|` with `z_k = (v_k, 1)`.
    pub fn eigen_residual(&self, ds: &DirectionSet) -> f64 {
        ds.vectors()
            .iter()
            .map(|v| {
                let z = DVector::from_iterator(v.len() + 1, v.iter().copied().chain([1.0]));
                (self.direction_operator(v) * &z - &z).amax()
            })
            .fold(0.0, f64::max)
    }
}

/// Max-norm residuals over a point set at one step size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_momentum_residual: f64,
    pub max_continuity_residual: f64,
    pub max_symmetric_residual: f64,
    pub h: f64,
    pub points: usize,
}

/// Samples at a point and its central-difference neighbours.
struct Stencil {
    center: FieldSample,
    plus: Vec<FieldSample>,
    minus: Vec<FieldSample>,
    later: FieldSample,
    earlier: FieldSample,
}

fn offset(x: &[f64], axis: usize, delta: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    y[axis] += delta;
    y
}

impl Stencil {
    fn gather(ef: &ExactField, x: &[f64], t: f64, h: f64) -> Result<Self> {
        let d = x.len();
        Ok(Self {
            center: ef.sample(x, t)?,
            plus: (0..d).map(|i| ef.sample(&offset(x, i, h), t)).collect::<Result<_>>()?,
            minus: (0..d).map(|i| ef.sample(&offset(x, i, -h), t)).collect::<Result<_>>()?,
            later: ef.sample(x, t + h)?,
            earlier: ef.sample(x, t - h)?,
        })
    }

    fn all_valid(&self) -> bool {
        self.center.valid()
            && self.later.valid()
            && self.earlier.valid()
            && self.plus.iter().chain(&self.minus).all(FieldSample::valid)
    }
}

fn rho(s: &FieldSample) -> f64 {
    s.rho.unwrap_or(f64::NAN)
}

fn pressure(s: &FieldSample) -> f64 {
    s.p.unwrap_or(f64::NAN)
}

fn state(s: &FieldSample) -> Vec<f64> {
    s.u.iter().copied().chain([s.w]).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

fn momentum_residual(st: &Stencil, h: f64) -> f64 {
    let d = st.center.u.len();
    let r: Vec<f64> = (0..d)
        .map(|i| {
            let u_t = (st.later.u[i] - st.earlier.u[i]) / (2.0 * h);
            let advect: f64 = (0..d)
                .map(|j| st.center.u[j] * (st.plus[j].u[i] - st.minus[j].u[i]) / (2.0 * h))
                .sum();
            let dp = (pressure(&st.plus[i]) - pressure(&st.minus[i])) / (2.0 * h);
            u_t + advect + dp / rho(&st.center)
        })
        .collect();
    norm(&r)
}

fn continuity_residual(st: &Stencil, h: f64) -> f64 {
    let d = st.center.u.len();
    let rho_t = (rho(&st.later) - rho(&st.earlier)) / (2.0 * h);
    let div: f64 = (0..d)
        .map(|j| (rho(&st.plus[j]) * st.plus[j].u[j] - rho(&st.minus[j]) * st.minus[j].u[j]) / (2.0 * h))
        .sum();
    (rho_t + div).abs()
}

fn symmetric_point_residual(form: &SymmetricForm, st: &Stencil, h: f64) -> Result<f64> {
    let d = form.dim();
    let q = state(&st.center);
    let diff = |a: &FieldSample, b: &FieldSample| {
        DVector::from_iterator(d + 1, state(a).iter().zip(state(b)).map(|(x, y)| (x - y) / (2.0 * h)))
    };
    let mut r = diff(&st.later, &st.earlier);
    for j in 0..d {
        let a = form.coefficient(j, &q);
        let asym = (&a - a.transpose()).amax();
        if asym != 0.0 {
            return Err(Error::Precondition(format!(
                "coefficient matrix A_{j} is not symmetric (defect {asym:e})"
            )));
        }
        r += a * diff(&st.plus[j], &st.minus[j]);
    }
    Ok(r.norm())
}

fn gather_all(ef: &ExactField, points: &[Vec<f64>], t: f64, h: f64) -> Result<Vec<Stencil>> {
    if !(h > 0.0) {
        return Err(Error::Precondition(format!("step h must be positive, got {h}")));
    }
    if t - h < 0.0 {
        return Err(Error::Precondition(format!(
            "time t = {t} must be at least h = {h} for the time difference"
        )));
    }
    ef.check_time(t + h)?;
    let stencils = points
        .par_iter()
        .map(|x| Stencil::gather(ef, x, t, h))
        .collect::<Result<Vec<_>>>()?;
    let bad: Vec<Vec<f64>> = points
        .iter()
        .zip(&stencils)
        .filter(|(_, st)| !st.all_valid())
        .map(|(x, _)| x.clone())
        .collect();
    if !bad.is_empty() {
        return Err(Error::Positivity {
            count: bad.len(),
            first: bad.into_iter().take(5).collect(),
        });
    }
    Ok(stencils)
}

/// Residuals of `u_t + (u·∇)u + ρ⁻¹∇p = 0` and `ρ_t + div(ρu) = 0`.
///
/// The report also carries the symmetric-form residual, which uses the
/// same stencils.
pub fn primitive_residual(ef: &ExactField, points: &[Vec<f64>], t: f64, h: f64) -> Result<ResidualReport> {
    let stencils = gather_all(ef, points, t, h)?;
    let form = SymmetricForm::new(*ef.gas(), ef.dim());
    let mut report = ResidualReport {
        max_momentum_residual: 0.0,
        max_continuity_residual: 0.0,
        max_symmetric_residual: 0.0,
        h,
        points: points.len(),
    };
    for st in &stencils {
        report.max_momentum_residual = report.max_momentum_residual.max(momentum_residual(st, h));
        report.max_continuity_residual = report.max_continuity_residual.max(continuity_residual(st, h));
        report.max_symmetric_residual = report
            .max_symmetric_residual
            .max(symmetric_point_residual(&form, st, h)?);
    }
    Ok(report)
}

/// Max norm of `q_t + Σ_j A_j(q) q_{x_j}` over the points.
pub fn symmetric_residual(ef: &ExactField, points: &[Vec<f64>], t: f64, h: f64) -> Result<f64> {
    let stencils = gather_all(ef, points, t, h)?;
    let form = SymmetricForm::new(*ef.gas(), ef.dim());
    stencils
        .iter()
        .try_fold(0.0f64, |acc, st| Ok(acc.max(symmetric_point_residual(&form, st, h)?)))
}

/// Max over `k ≠ m` of `|z_m·(v_k, a)|` with `z_m = (v_m, 1)`, together
/// with the deviation of the self coefficient `z_k·(v_k, a)` from `1 + a`.
pub fn decoupling_check(ds: &DirectionSet, gas: &GasParams) -> f64 {
    let a = gas.a();
    let g = ds.gram();
    let mut worst: f64 = 0.0;
    for (k, row) in g.iter().enumerate() {
        for (m, &dot) in row.iter().enumerate() {
            let coupling = dot + a;
            worst = if k == m {
                worst.max((coupling - (1.0 + a)).abs())
            } else {
                worst.max(coupling.abs())
            };
        }
    }
    worst
}

/// Observed convergence order from residuals at `h` and `h / ratio`.
pub fn observed_order(coarse: f64, fine: f64, ratio: f64) -> f64 {
    (coarse / fine).ln() / ratio.ln()
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    r
}

/// Quasi-random (Halton) points in the box `[lower + 2h, upper − 2h]`,
/// skipping those whose stencil leaves the positivity region.
///
/// `seed` is the starting index into the sequence. Returns fewer than
/// `count` points if the region is mostly invalid.
pub fn sample_points(
    ef: &ExactField,
    lower: &[f64],
    upper: &[f64],
    count: usize,
    seed: u64,
    t: f64,
    h: f64,
) -> Vec<Vec<f64>> {
    const BASES: [u64; 3] = [2, 3, 5];
    let d = ef.dim();
    let mut out = Vec::with_capacity(count);
    let mut index = seed + 1;
    let limit = index + 100 * count as u64;
    while out.len() < count && index < limit {
        let x: Vec<f64> = (0..d)
            .map(|i| {
                let lo = lower[i] + 2.0 * h;
                let hi = upper[i] - 2.0 * h;
                lo + (hi - lo) * radical_inverse(index, BASES[i])
            })
            .collect();
        index += 1;
        let ok = Stencil::gather(ef, &x, t, h).is_ok_and(|st| {
            st.all_valid()
                && [&st.center, &st.later, &st.earlier]
                    .into_iter()
                    .chain(&st.plus)
                    .chain(&st.minus)
                    .all(|s| s.wave_sum >= 2.0 * MIN_WAVE_SUM)
        });
        if ok {
            out.push(x);
        }
    }
    out
}

/// Shock in wave 1 for the jump demonstration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShockData {
    pub f1_left: f64,
    pub f1_right: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpMismatch {
    pub f2: f64,
    /// `[ρ]σ`
    pub lhs: f64,
    /// `[ρu]·v₁`
    pub rhs: f64,
    pub mismatch: f64,
}

/// Evaluates both sides of the density jump condition `[ρ]σ = [ρu]·v₁`
/// across a shock in wave 1, for each value of the (continuous) wave 2.
///
/// Wave 3 is held at `f3`; jumps are taken left minus right.
pub fn jump_mismatch_demo(
    gas: &GasParams,
    ds: &DirectionSet,
    shock: ShockData,
    f3: f64,
    f2_values: &[f64],
) -> Result<Vec<JumpMismatch>> {
    if ds.n() != 3 {
        return Err(Error::Precondition(format!(
            "the jump demonstration uses three waves, got {}",
            ds.n()
        )));
    }
    if shock.f1_left < shock.f1_right {
        return Err(Error::Precondition(format!(
            "shock needs f1_left >= f1_right, got {} < {}",
            shock.f1_left, shock.f1_right
        )));
    }
    let v1 = ds.vector(0);
    let proj: Vec<f64> = ds
        .vectors()
        .iter()
        .map(|v| v.iter().zip(v1).map(|(p, q)| p * q).sum())
        .collect();
    let mut bad = Vec::new();
    let mut out = Vec::with_capacity(f2_values.len());
    for &f2 in f2_values {
        let side = |f1: f64| -> Option<(f64, f64)> {
            let f = [f1, f2, f3];
            let sum: f64 = f.iter().sum();
            let rho = gas.rho_from_w(sum).ok()?;
            // u·v₁ = Σ f_j (v_j·v₁) = f₁ − a f₂ − a f₃ for an admissible set
            let un: f64 = f.iter().zip(&proj).map(|(fj, pj)| fj * pj).sum();
            Some((rho, un))
        };
        match (side(shock.f1_left), side(shock.f1_right)) {
            (Some((rho_l, un_l)), Some((rho_r, un_r))) => {
                let lhs = (rho_l - rho_r) * shock.sigma;
                let rhs = rho_l * un_l - rho_r * un_r;
                out.push(JumpMismatch {
                    f2,
                    lhs,
                    rhs,
                    mismatch: lhs - rhs,
                });
            }
            _ => bad.push(vec![f2]),
        }
    }
    if !bad.is_empty() {
        return Err(Error::Positivity {
            count: bad.len(),
            first: bad,
        });
    }
    Ok(out)
}

/// `max − min` of the mismatch values.
pub fn mismatch_spread(rows: &[JumpMismatch]) -> f64 {
    let max = rows.iter().map(|r| r.mismatch).fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r.mismatch).fold(f64::INFINITY, f64::min);
    if rows.is_empty() {
        0.0
    } else {
        max - min
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burgers::{riemann_shock, BurgersProfile, BurgersWave};
    use crate::directions::build_directions;
    use crate::field::{assemble, Transverse};

    fn gas(gamma: f64) -> GasParams {
        GasParams::new(gamma, 1.0).unwrap()
    }

    fn bump(center: f64) -> BurgersProfile {
        BurgersProfile::GaussianBump {
            amplitude: 0.5,
            center,
            width: 1.0,
            offset: 2.0,
        }
    }

    fn field_with(g: GasParams, ds: DirectionSet, profiles: &[BurgersProfile]) -> ExactField {
        let waves = (0..ds.n())
            .map(|j| BurgersWave::new(profiles[j % profiles.len()], g.speed_factor()).unwrap())
            .collect();
        assemble(g, ds, waves, None).unwrap()
    }

    fn points(ef: &ExactField, t: f64, h: f64) -> Vec<Vec<f64>> {
        let d = ef.dim();
        sample_points(ef, &vec![-2.0; d], &vec![2.0; d], 40, DEFAULT_SEED, t, h)
    }

    #[test]
    fn l_matrices() {
        let form = SymmetricForm::new(gas(1.4), 3);
        for j in 0..3 {
            let l = form.l(j);
            assert_eq!(l, &l.transpose());
            assert_eq!(l.sum(), 2.0);
            assert_eq!(l[(j, 3)], 1.0);
        }
        let q = [0.3, -1.0, 2.0, 4.0];
        for j in 0..3 {
            let a = form.coefficient(j, &q);
            assert_eq!(a, a.transpose());
            assert_eq!(a[(j, 3)], gas(1.4).a() * 4.0);
            assert_eq!(a[(1, 1)], q[j]);
        }
    }

    #[test]
    fn eigenvectors_of_direction_operator() {
        for (gamma, d, n) in [(1.4, 3, 3), (5.0 / 3.0, 3, 4), (2.0, 2, 3), (2.5, 3, 2)] {
            let ds = build_directions(&gas(gamma), d, n).unwrap();
            let form = SymmetricForm::new(gas(gamma), d);
            assert!(form.eigen_residual(&ds) < 1e-12);
        }
    }

    #[test]
    fn static_gas_is_exact() {
        let g = gas(2.0);
        let ef = field_with(g, build_directions(&g, 2, 3).unwrap(), &[BurgersProfile::Constant { value: 1.3 }]);
        let pts = points(&ef, 1.0, 1e-2);
        assert_eq!(pts.len(), 40);
        for h in [1e-2, 1e-4] {
            let r = primitive_residual(&ef, &pts, 1.0, h).unwrap();
            assert!(r.max_momentum_residual < 1e-12);
            assert!(r.max_continuity_residual < 1e-12);
            assert!(symmetric_residual(&ef, &pts, 1.0, h).unwrap() < 1e-12);
        }
    }

    #[test]
    fn smooth_field_second_order() {
        let g = gas(1.4);
        let ef = field_with(g, build_directions(&g, 3, 3).unwrap(), &[bump(0.0), bump(0.4), bump(-0.6)]);
        let pts = points(&ef, 0.3, 1e-3);
        let r1 = primitive_residual(&ef, &pts, 0.3, 1e-3).unwrap();
        let r2 = primitive_residual(&ef, &pts, 0.3, 5e-4).unwrap();
        for (a, b) in [
            (r1.max_momentum_residual, r2.max_momentum_residual),
            (r1.max_continuity_residual, r2.max_continuity_residual),
            (r1.max_symmetric_residual, r2.max_symmetric_residual),
        ] {
            let ratio = a / b;
            assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
        }
        let s = symmetric_residual(&ef, &pts, 0.3, 1e-3).unwrap();
        assert_eq!(s, r1.max_symmetric_residual);
    }

    #[test]
    fn violated_constraint_does_not_converge() {
        let g = gas(1.4);
        let ds = build_directions(&g, 3, 3).unwrap().perturbed(0, 1, 0.05).unwrap();
        let ef = field_with(g, ds, &[bump(0.0), bump(0.4), bump(-0.6)]);
        let pts = points(&ef, 0.3, 1e-2);
        let mut prev = f64::INFINITY;
        for h in [1e-2, 1e-3, 1e-4] {
            let r = primitive_residual(&ef, &pts, 0.3, h).unwrap();
            assert!(r.max_momentum_residual >= 1e-3, "h {h}: {r:?}");
            assert!(r.max_momentum_residual > 0.5 * prev.min(1.0) || prev.is_infinite());
            prev = r.max_momentum_residual;
        }
    }

    #[test]
    fn literal_transverse_carrier_is_not_a_solution() {
        // g(x·v₂) v⊥ with v₂ from the equiangular set couples to wave 1
        // through u·v₂ = −a f₁, so the residual stays O(1).
        let g = gas(2.5);
        let ds = build_directions(&g, 3, 2).unwrap();
        let mut ef = field_with(g, ds.clone(), &[bump(0.0)]);
        ef.transverse = Some(Transverse {
            index: 1,
            profile: BurgersProfile::Sine { amplitude: 0.5, wavenumber: 1.0, offset: 0.0 },
            carrier: ds.vector(1).to_vec(),
            polarization: vec![0.0, 0.0, 1.0],
        });
        ef.t_max = ef.waves[0].breaking_time();
        let pts = points(&ef, 0.2, 1e-2);
        for h in [1e-2, 1e-3] {
            let r = primitive_residual(&ef, &pts, 0.2, h).unwrap();
            assert!(r.max_momentum_residual > 0.1);
        }
    }

    #[test]
    fn invalid_points_rejected() {
        let g = gas(1.4);
        let ef = field_with(g, build_directions(&g, 2, 1).unwrap(), &[BurgersProfile::Linear { slope: 1.0, offset: 0.0 }]);
        let err = primitive_residual(&ef, &[vec![-1.0, 0.0], vec![1.0, 0.0]], 0.5, 1e-3).unwrap_err();
        match err {
            Error::Positivity { count, first } => {
                assert_eq!(count, 1);
                assert_eq!(first, vec![vec![-1.0, 0.0]]);
            }
            e => panic!("unexpected {e:?}"),
        }
        assert!(primitive_residual(&ef, &[vec![1.0, 0.0]], 1e-4, 1e-3).is_err());
    }

    #[test]
    fn decoupling() {
        let g = gas(1.4);
        let ds = build_directions(&g, 3, 3).unwrap();
        assert!(decoupling_check(&ds, &g) < 1e-12);
        let bad = ds.perturbed(1, 2, 0.03).unwrap();
        assert!((decoupling_check(&bad, &g) - 0.03).abs() < 1e-12);
        let one = build_directions(&g, 3, 1).unwrap();
        assert_eq!(decoupling_check(&one, &g), 0.0);
    }

    #[test]
    fn jump_demo() {
        let g = gas(1.4);
        let ds = build_directions(&g, 3, 3).unwrap();
        let sigma = riemann_shock(g.a(), 2.0, 1.0).unwrap();
        assert!((sigma - 1.8).abs() < 1e-15);
        let shock = ShockData { f1_left: 2.0, f1_right: 1.0, sigma };
        let rows = jump_mismatch_demo(&g, &ds, shock, 1.0, &[0.5, 1.0, 1.5]).unwrap();
        assert!(mismatch_spread(&rows) > 1e-3);

        // independent evaluation of the polynomial form with u·v₁ = f₁ − a f₂ − a f₃
        let c = 0.2 / 1.4f64.sqrt();
        for r in &rows {
            let rho = |f1: f64| (c * (f1 + r.f2 + 1.0)).powi(5);
            let un = |f1: f64| f1 - 0.2 * r.f2 - 0.2;
            let lhs = (rho(2.0) - rho(1.0)) * 1.8;
            let rhs = rho(2.0) * un(2.0) - rho(1.0) * un(1.0);
            assert!((r.mismatch - (lhs - rhs)).abs() < 1e-12 * lhs.abs().max(1.0));
        }

        let flat = ShockData { f1_left: 1.5, f1_right: 1.5, sigma: 1.2 * 1.5 };
        let rows = jump_mismatch_demo(&g, &ds, flat, 1.0, &[0.5, 1.0, 1.5]).unwrap();
        assert!(rows.iter().all(|r| r.mismatch == 0.0));

        let doubled = ShockData { f1_left: 4.0, f1_right: 2.0, sigma: riemann_shock(g.a(), 4.0, 2.0).unwrap() };
        let rows = jump_mismatch_demo(&g, &ds, doubled, 2.0, &[1.0, 2.0, 3.0]).unwrap();
        assert!(rows.iter().any(|r| r.mismatch.abs() > 1e-6));

        let err = jump_mismatch_demo(&g, &ds, shock, -5.0, &[0.5, 1.0]).unwrap_err();
        assert!(matches!(err, Error::Positivity { .. }));
    }
}
