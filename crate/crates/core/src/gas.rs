//! Polytropic gas parameters and the conversions between density, pressure
//! and the sound-speed variable `w = a⁻¹·√(γp/ρ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Isentropic gas with pressure law `p = k ρ^γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGas", into = "RawGas")]
pub struct GasParams {
    gamma: f64,
    k: f64,
    a: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGas {
    gamma: f64,
    #[serde(default = "default_k")]
    k: f64,
}

fn default_k() -> f64 {
    1.0
}

impl TryFrom<RawGas> for GasParams {
    type Error = Error;

    fn try_from(raw: RawGas) -> Result<Self> {
        GasParams::new(raw.gamma, raw.k)
    }
}

impl From<GasParams> for RawGas {
    fn from(g: GasParams) -> Self {
        RawGas {
            gamma: g.gamma,
            k: g.k,
        }
    }
}

impl GasParams {
    pub fn new(gamma: f64, k: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma < 3.0) {
            return Err(Error::Domain(format!(
                "gamma must satisfy 1 < gamma < 3, got {gamma}"
            )));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!("k must be positive, got {k}")));
        }
        Ok(Self {
            gamma,
            k,
            a: (gamma - 1.0) / 2.0,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `a = (γ − 1)/2`: the required dot product between wave directions is `−a`.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Burgers speed factor `1 + a`.
    pub fn speed_factor(&self) -> f64 {
        1.0 + self.a
    }

    /// Exponent `1/a`, computed from γ directly.
    pub fn inv_a(&self) -> f64 {
        2.0 / (self.gamma - 1.0)
    }

    fn sqrt_k_gamma(&self) -> f64 {
        (self.k * self.gamma).sqrt()
    }

    /// Density from the unchecked power law; callers guarantee `w > 0`.
    pub(crate) fn rho_from_w_unchecked(&self, w: f64) -> f64 {
        (self.a * w / self.sqrt_k_gamma()).powf(self.inv_a())
    }

    pub fn rho_from_w(&self, w: f64) -> Result<f64> {
        if !(w > 0.0) {
            return Err(Error::Domain(format!(
                "w must be positive to define a density, got {w}"
            )));
        }
        Ok(self.rho_from_w_unchecked(w))
    }

    pub fn w_from_rho(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0) {
            return Err(Error::Domain(format!("rho must be positive, got {rho}")));
        }
        Ok((self.gamma * self.k * rho.powf(self.gamma - 1.0)).sqrt() / self.a)
    }

    pub fn pressure(&self, rho: f64) -> f64 {
        self.k * rho.powf(self.gamma)
    }

    pub fn sound_speed(&self, rho: f64) -> f64 {
        (self.gamma * self.k * rho.powf(self.gamma - 1.0)).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn derived_constant() {
        assert!((GasParams::new(5.0 / 3.0, 1.0).unwrap().a() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(GasParams::new(2.0, 1.0).unwrap().a(), 0.5);
        assert!((GasParams::new(1.4, 1.0).unwrap().a() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        for (gamma, k) in [(1.0, 1.0), (3.0, 1.0), (3.5, 1.0), (0.5, 1.0), (1.4, 0.0), (1.4, -1.0)] {
            assert!(matches!(GasParams::new(gamma, k), Err(Error::Domain(_))));
        }
        assert!(GasParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn unit_density_identities() {
        let g = GasParams::new(2.0, 1.0).unwrap();
        assert!((g.rho_from_w(2.0 * 2f64.sqrt()).unwrap() - 1.0).abs() < 1e-14);
        assert!((g.w_from_rho(1.0).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-14);

        let g = GasParams::new(5.0 / 3.0, 1.0).unwrap();
        let w = 3.0 * (5.0f64 / 3.0).sqrt();
        assert!((g.rho_from_w(w).unwrap() - 1.0).abs() < 1e-14);
        assert!((g.w_from_rho(1.0).unwrap() - w).abs() < 1e-13);
    }

    #[test]
    fn gamma_1_4_direct_evaluation() {
        let g = GasParams::new(1.4, 1.0).unwrap();
        let expected = (0.2 / 1.4f64.sqrt()).powi(5);
        let rho = g.rho_from_w(1.0).unwrap();
        assert!((rho - expected).abs() <= 1e-14 * expected);
        for w in [0.1, 1.0, 10.0] {
            let back = g.w_from_rho(g.rho_from_w(w).unwrap()).unwrap();
            assert!((back - w).abs() <= 1e-13 * w);
        }
    }

    #[test]
    fn pressure_values() {
        let g = GasParams::new(1.4, 1.0).unwrap();
        assert_eq!(g.pressure(0.0), 0.0);
        assert_eq!(g.pressure(1.0), 1.0);
        assert!((g.pressure(2.0) - 2f64.powf(1.4)).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_arguments() {
        let g = GasParams::new(1.4, 1.0).unwrap();
        assert!(g.rho_from_w(0.0).is_err());
        assert!(g.rho_from_w(-1.0).is_err());
        assert!(g.w_from_rho(0.0).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(gamma in 1.1f64..2.99, k in 0.1f64..10.0, w in 1e-2f64..1e2) {
            let g = GasParams::new(gamma, k).unwrap();
            let rho = g.rho_from_w(w).unwrap();
            let back = g.w_from_rho(rho).unwrap();
            prop_assert!((back - w).abs() <= 1e-12 * w);
            // a·w is the sound speed
            let c = (gamma * g.pressure(rho) / rho).sqrt();
            prop_assert!((g.a() * w - c).abs() <= 1e-12 * c);
        }

        #[test]
        fn density_monotone(gamma in 1.1f64..2.99, w0 in 0.1f64..10.0) {
            let g = GasParams::new(gamma, 1.0).unwrap();
            let mut prev = g.rho_from_w(w0).unwrap();
            for i in 1..50 {
                let rho = g.rho_from_w(w0 * (1.0 + 0.05 * i as f64)).unwrap();
                prop_assert!(rho > prev);
                prev = rho;
            }
        }
    }
}
