//! JSON scenario documents shared by the command-line subcommands.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::burgers::{BurgersProfile, BurgersWave};
use crate::directions::{build_directions, max_wave_count, DirectionSet};
use crate::error::{Error, Result};
use crate::field::{assemble, ExactField, TransverseMode};
use crate::gas::GasParams;
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WaveCount {
    Count(usize),
    Max(MaxKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxKeyword {
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Vtk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
}

fn default_formats() -> Vec<Format> {
    vec![Format::Csv]
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            formats: default_formats(),
            directory: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub gas: GasParams,
    pub dimension: usize,
    pub n_waves: WaveCount,
    /// One profile per wave, or a single profile used for every wave.
    pub waves: Vec<BurgersProfile>,
    /// Explicit direction vectors replacing the canonical set. They are used
    /// as given, without checking the dot-product constraint.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transverse: Option<TransverseMode>,
    pub grid: GridSpec,
    pub times: Vec<f64>,
    #[serde(default)]
    pub outputs: Outputs,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let sc: Scenario = serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.dimension) {
            return Err(Error::Scenario(format!("dimension must be 2 or 3, got {}", self.dimension)));
        }
        if self.grid.dim() != self.dimension {
            return Err(Error::Scenario(format!(
                "grid has dimension {} but the scenario has dimension {}",
                self.grid.dim(),
                self.dimension
            )));
        }
        self.grid.validate()?;
        if self.waves.is_empty() {
            return Err(Error::Scenario("at least one wave profile is required".into()));
        }
        if self.times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(Error::Scenario("times must be finite and non-negative".into()));
        }
        Ok(())
    }

    /// Number of waves after resolving `"max"` and any explicit directions.
    pub fn wave_count(&self) -> Result<usize> {
        let requested = match self.n_waves {
            WaveCount::Count(n) => Some(n),
            WaveCount::Max(_) => None,
        };
        match (&self.directions, requested) {
            (Some(v), Some(n)) if v.len() != n => Err(Error::Scenario(format!(
                "n_waves = {n} but {} direction vectors were given",
                v.len()
            ))),
            (Some(v), _) => Ok(v.len()),
            (None, Some(n)) => Ok(n),
            (None, None) => max_wave_count(&self.gas, self.dimension),
        }
    }

    pub fn direction_set(&self) -> Result<DirectionSet> {
        let n = self.wave_count()?;
        match &self.directions {
            Some(v) => DirectionSet::custom(self.dimension, self.gas.a(), v.clone()),
            None => build_directions(&self.gas, self.dimension, n),
        }
    }

    pub fn profiles(&self) -> Result<Vec<BurgersProfile>> {
        let n = self.wave_count()?;
        match self.waves.len() {
            1 => Ok(vec![self.waves[0]; n]),
            m if m == n => Ok(self.waves.clone()),
            m => Err(Error::Scenario(format!("{m} wave profiles given for {n} waves"))),
        }
    }

    pub fn field(&self) -> Result<ExactField> {
        let ds = self.direction_set()?;
        let waves = self
            .profiles()?
            .into_iter()
            .map(|p| BurgersWave::new(p, self.gas.speed_factor()))
            .collect::<Result<Vec<_>>>()?;
        assemble(self.gas, ds, waves, self.transverse.clone())
    }
}
