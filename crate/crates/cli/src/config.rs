//! Experiment configuration: a TOML document plus command-line overrides.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Every key the config file understands, for `--help`.
pub const CONFIG_KEYS: &str = "\
CONFIG KEYS (TOML)
  model            kicked-ising | kicked-ising-nonlocal | self-dual | dimer
  sites            number of spins N for chain models (default 10)
  spin             spin j of the dimer, N = 2j bosons (default 100)
  sector           full | positive-parity (chains; default positive-parity, dimer: full)
  initial_state    \"h0-eigenstate\" | \"uniform\" | { random = { count = 5, seed = 1 } }
  steps            kicks recorded in time-series output (default 200)
  burn_in          kicks skipped before time averages (default 2 D_K)
  window           kicks in time averages (default 10 D_K)
  slope_window     points in the initial-slope fit (default min(20, D_K/4))
  histogram_bins   emit a spacing histogram table with this many bins (spectral)
  outputs          subset of [complexity, entropy, coefficients, saturation, slope,
                   dispersion, eta, magnetization, histogram]; empty means all
  workers          parallel parameter points (default 1)
  [couplings]      J, b, phi, gamma, T, k, mu; each a number, a list [..],
                   or a range { start = .., stop = .., count = .. } (inclusive)
  [calibration]    poisson_samples (1e5), goe_matrices (50), goe_dim (1000), seed (0)

Any key can also be set with --set key=value, e.g. --set couplings.phi=0.5.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    KickedIsing,
    KickedIsingNonlocal,
    SelfDual,
    Dimer,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::KickedIsing => "kicked-ising",
            Model::KickedIsingNonlocal => "kicked-ising-nonlocal",
            Model::SelfDual => "self-dual",
            Model::Dimer => "dimer",
        }
    }

    pub fn is_chain(self) -> bool {
        !matches!(self, Model::Dimer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sector {
    Full,
    PositiveParity,
}

impl Sector {
    pub fn name(self) -> &'static str {
        match self {
            Sector::Full => "full",
            Sector::PositiveParity => "positive-parity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    H0Eigenstate,
    Uniform,
    Random {
        count: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::H0Eigenstate
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    Complexity,
    Entropy,
    Coefficients,
    Saturation,
    Slope,
    Dispersion,
    Eta,
    Magnetization,
    Histogram,
}

/// A single value, an explicit list, or an inclusive linear range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Value(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::Value(v) => vec![*v],
            Grid::List(v) => v.clone(),
            Grid::Range { start, stop, count } => match *count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..n)
                    .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }

    fn validate(&self, key: &str) -> CliResult<()> {
        let values = self.values();
        if values.is_empty() {
            return Err(CliError::Config(format!("couplings.{key}: grid is empty")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Config(format!("couplings.{key}: grid values must be finite")));
        }
        Ok(())
    }
}

fn grid(v: f64) -> Grid {
    Grid::Value(v)
}

fn default_j() -> Grid {
    grid(1.0)
}
fn default_b() -> Grid {
    grid(1.0)
}
fn default_phi() -> Grid {
    grid(std::f64::consts::FRAC_PI_3)
}
fn default_gamma() -> Grid {
    grid(0.0)
}
fn default_t() -> Grid {
    grid(1.0)
}
fn default_k() -> Grid {
    grid(1.0)
}
fn default_mu() -> Grid {
    grid(3.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Couplings {
    #[serde(rename = "J", default = "default_j")]
    pub j: Grid,
    #[serde(default = "default_b")]
    pub b: Grid,
    #[serde(default = "default_phi")]
    pub phi: Grid,
    #[serde(default = "default_gamma")]
    pub gamma: Grid,
    #[serde(rename = "T", default = "default_t")]
    pub t: Grid,
    #[serde(default = "default_k")]
    pub k: Grid,
    #[serde(default = "default_mu")]
    pub mu: Grid,
}

impl Default for Couplings {
    fn default() -> Self {
        Self {
            j: default_j(),
            b: default_b(),
            phi: default_phi(),
            gamma: default_gamma(),
            t: default_t(),
            k: default_k(),
            mu: default_mu(),
        }
    }
}

impl Couplings {
    fn named(&self) -> [(&'static str, &Grid); 7] {
        [
            ("J", &self.j),
            ("b", &self.b),
            ("phi", &self.phi),
            ("gamma", &self.gamma),
            ("T", &self.t),
            ("k", &self.k),
            ("mu", &self.mu),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationConfig {
    #[serde(default = "default_poisson_samples")]
    pub poisson_samples: usize,
    #[serde(default = "default_goe_matrices")]
    pub goe_matrices: usize,
    #[serde(default = "default_goe_dim")]
    pub goe_dim: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_poisson_samples() -> usize {
    100_000
}
fn default_goe_matrices() -> usize {
    50
}
fn default_goe_dim() -> usize {
    1000
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            poisson_samples: default_poisson_samples(),
            goe_matrices: default_goe_matrices(),
            goe_dim: default_goe_dim(),
            seed: 0,
        }
    }
}

fn default_steps() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sites: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector: Option<Sector>,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope_window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram_bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<Observable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default)]
    pub couplings: Couplings,
    #[serde(default)]
    pub calibration: CalibrationConfig,
}

/// One point of the coupling grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub j: f64,
    pub b: f64,
    pub phi: f64,
    pub gamma: f64,
    pub t: f64,
    pub k: f64,
    pub mu: f64,
}

impl Point {
    pub fn as_array(&self) -> [f64; 7] {
        [self.j, self.b, self.phi, self.gamma, self.t, self.k, self.mu]
    }

    fn from_array(a: [f64; 7]) -> Self {
        Self {
            j: a[0],
            b: a[1],
            phi: a[2],
            gamma: a[3],
            t: a[4],
            k: a[5],
            mu: a[6],
        }
    }
}

pub const PARAMETER_NAMES: [&str; 7] = ["J", "b", "phi", "gamma", "T", "k", "mu"];

impl ExperimentConfig {
    pub fn new(model: Model) -> Self {
        Self {
            model,
            sites: None,
            spin: None,
            sector: None,
            initial_state: InitialState::default(),
            steps: default_steps(),
            burn_in: None,
            window: None,
            slope_window: None,
            histogram_bins: None,
            outputs: Vec::new(),
            workers: None,
            couplings: Couplings::default(),
            calibration: CalibrationConfig::default(),
        }
    }

    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        Self::load_with(path, &[])
    }

    /// Reads `path` and applies `key=value` overrides before validation.
    pub fn load_with(path: &Path, overrides: &[String]) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_with(&text, overrides)
    }

    pub fn from_toml_with(text: &str, overrides: &[String]) -> CliResult<Self> {
        let mut doc: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let config: Self = toml::Value::Table(doc)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        Ok(config)
    }

    /// Applies `key=value` overrides to an existing config.
    pub fn with_overrides(&self, overrides: &[String]) -> CliResult<Self> {
        if overrides.is_empty() {
            return Ok(self.clone());
        }
        Self::from_toml_with(&self.to_toml()?, overrides)
    }

    pub fn sites(&self) -> usize {
        self.sites.unwrap_or(10)
    }

    pub fn spin(&self) -> f64 {
        self.spin.unwrap_or(100.0)
    }

    pub fn sector(&self) -> Sector {
        self.sector.unwrap_or(if self.model.is_chain() {
            Sector::PositiveParity
        } else {
            Sector::Full
        })
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or(1).max(1)
    }

    pub fn wants(&self, obs: Observable) -> bool {
        self.outputs.is_empty() || self.outputs.contains(&obs)
    }

    /// Overrides every seed in the config.
    pub fn set_seed(&mut self, seed: u64) {
        if let InitialState::Random { seed: s, .. } = &mut self.initial_state {
            *s = Some(seed);
        }
        self.calibration.seed = seed;
    }

    /// Number of coupling grids with more than one value.
    pub fn swept_parameters(&self) -> Vec<&'static str> {
        self.couplings
            .named()
            .into_iter()
            .filter(|(_, g)| {
                let mut v = g.values();
                v.sort_by(f64::total_cmp);
                v.dedup();
                v.len() > 1
            })
            .map(|(name, _)| name)
            .collect()
    }

    pub fn validate(&self) -> CliResult<()> {
        for (name, g) in self.couplings.named() {
            g.validate(name)?;
        }
        let swept = self.swept_parameters();
        let irrelevant: &[&str] = match self.model {
            Model::KickedIsing => &["gamma", "k", "mu"],
            Model::KickedIsingNonlocal => &["k", "mu"],
            Model::SelfDual => &["J", "b", "phi", "gamma", "T", "k", "mu"],
            Model::Dimer => &["J", "b", "phi", "gamma"],
        };
        if let Some(p) = swept.iter().find(|p| irrelevant.contains(p)) {
            return Err(CliError::Config(format!(
                "couplings.{p} is swept but has no effect on model {}",
                self.model.name()
            )));
        }
        if self.model == Model::KickedIsing && self.couplings.gamma.values().iter().any(|&g| g != 0.0) {
            return Err(CliError::Config(
                "couplings.gamma must be 0 for kicked-ising; use model = \"kicked-ising-nonlocal\"".into(),
            ));
        }
        if self.model.is_chain() {
            let n = self.sites();
            let min = if self.model == Model::SelfDual { 2 } else { 1 };
            if !(min..=14).contains(&n) {
                return Err(CliError::Config(format!("sites must lie in {min}..=14, got {n}")));
            }
            if self.spin.is_some() {
                return Err(CliError::Config("spin only applies to model = \"dimer\"".into()));
            }
            for phi in self.couplings.phi.values() {
                if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&phi) {
                    return Err(CliError::Config(format!("couplings.phi must lie in [0, π/2], got {phi}")));
                }
            }
        } else {
            let j = self.spin();
            if !(j >= 0.5 && (2.0 * j).fract() == 0.0) {
                return Err(CliError::Config(format!("spin must be a positive multiple of 1/2, got {j}")));
            }
            if self.sites.is_some() {
                return Err(CliError::Config("sites does not apply to model = \"dimer\"".into()));
            }
            if self.sector == Some(Sector::PositiveParity) {
                return Err(CliError::Config("the dimer has no parity sector; use sector = \"full\"".into()));
            }
        }
        if self.couplings.t.values().iter().any(|&t| t <= 0.0) {
            return Err(CliError::Config("couplings.T must be positive".into()));
        }
        match self.initial_state {
            InitialState::Random { count: 0, .. } => {
                return Err(CliError::Config("initial_state.random.count must be positive".into()))
            }
            InitialState::Random { seed: None, .. } => {
                return Err(CliError::Config(
                    "initial_state.random needs a seed (set it in the config or pass --seed)".into(),
                ))
            }
            _ => {}
        }
        if matches!(self.window, Some(0)) {
            return Err(CliError::Config("window must be positive".into()));
        }
        if matches!(self.slope_window, Some(w) if w < 2) {
            return Err(CliError::Config("slope_window must be at least 2".into()));
        }
        if matches!(self.histogram_bins, Some(b) if b < 2) {
            return Err(CliError::Config("histogram_bins must be at least 2".into()));
        }
        Ok(())
    }

    /// Cartesian product of the coupling grids, sorted and without duplicates.
    pub fn points(&self) -> Vec<Point> {
        let grids: Vec<Vec<f64>> = self.couplings.named().iter().map(|(_, g)| g.values()).collect();
        let mut out: Vec<[f64; 7]> = vec![[0.0; 7]];
        for (axis, values) in grids.iter().enumerate() {
            out = out
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p;
                        q[axis] = v;
                        q
                    })
                })
                .collect();
        }
        let cmp = |a: &[f64; 7], b: &[f64; 7]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        };
        out.sort_by(cmp);
        out.dedup_by(|a, b| cmp(a, b).is_eq());
        out.into_iter().map(Point::from_array).collect()
    }
}

/// `a.b.c=value`, where `value` is parsed as a TOML value and falls back to a bare string.
fn apply_override(doc: &mut toml::Table, assignment: &str) -> CliResult<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{assignment}` is not of the form key=value")))?;
    let value = parse_value(raw.trim());
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("bad override key `{key}`")));
    }
    let mut table = doc;
    for part in &path[..path.len() - 1] {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override key `{key}`: `{part}` is not a table")))?;
    }
    table.insert(path[path.len() - 1].to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    const SAMPLE: &str = r#"
model = "kicked-ising"
sites = 8
initial_state = "h0-eigenstate"
steps = 50
outputs = ["complexity", "entropy"]

[couplings]
J = 1
phi = { start = 0.1, stop = 0.5, count = 5 }
T = [1.0, 0.5]
"#;

    #[test]
    fn parses_grids_and_defaults() {
        let c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        c.validate().unwrap();
        assert_eq!(c.sites(), 8);
        assert_eq!(c.sector(), Sector::PositiveParity);
        assert_eq!(c.couplings.phi.values().len(), 5);
        assert!((c.couplings.phi.values()[4] - 0.5).abs() < 1e-15);
        assert_eq!(c.couplings.b, Grid::Value(1.0));
        assert_eq!(c.swept_parameters(), vec!["phi", "T"]);
        let pts = c.points();
        assert_eq!(pts.len(), 10);
        assert!(pts.windows(2).all(|w| w[0].phi < w[1].phi || (w[0].phi == w[1].phi && w[0].t < w[1].t)));
        assert!(c.wants(Observable::Entropy));
        assert!(!c.wants(Observable::Eta));
    }

    #[test]
    fn round_trip() {
        let mut c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        c.initial_state = InitialState::Random { count: 5, seed: Some(9) };
        c.couplings.mu = Grid::List(vec![3.0, 6.0]);
        c.burn_in = Some(7);
        let text = c.to_toml().unwrap();
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), c);

        let mut d = ExperimentConfig::new(Model::Dimer);
        d.spin = Some(100.0);
        d.couplings.phi = Grid::Value(FRAC_PI_3 / 7.0);
        assert_eq!(ExperimentConfig::from_toml(&d.to_toml().unwrap()).unwrap(), d);
    }

    #[test]
    fn overrides_take_precedence() {
        let c = ExperimentConfig::from_toml_with(
            SAMPLE,
            &["sites=6".into(), "couplings.phi=[0.2, 0.3]".into(), "sector=full".into()],
        )
        .unwrap();
        assert_eq!(c.sites(), 6);
        assert_eq!(c.sector(), Sector::Full);
        assert_eq!(c.couplings.phi, Grid::List(vec![0.2, 0.3]));
        assert!(ExperimentConfig::from_toml_with(SAMPLE, &["nonsense".into()]).is_err());
        assert!(ExperimentConfig::from_toml_with(SAMPLE, &["model.x=1".into()]).is_err());
    }

    #[test]
    fn validation_messages() {
        let bad = |extra: &str| {
            let c = ExperimentConfig::from_toml(&format!("model = \"kicked-ising\"\n{extra}")).unwrap();
            c.validate().unwrap_err().to_string()
        };
        assert!(bad("sites = 20").contains("sites"));
        assert!(bad("initial_state = { random = { count = 5 } }").contains("seed"));
        assert!(bad("[couplings]\ngamma = 0.1").contains("kicked-ising-nonlocal"));
        assert!(bad("[couplings]\nk = [1, 2]").contains("no effect"));
        assert!(bad("[couplings]\nphi = 2.0").contains("phi"));
        assert!(bad("[couplings]\nphi = []").contains("empty"));
        assert!(ExperimentConfig::from_toml("model = \"ising\"").is_err());
        assert!(ExperimentConfig::from_toml("model = \"dimer\"\nunknown = 1").is_err());

        let mut c = ExperimentConfig::new(Model::Dimer);
        c.validate().unwrap();
        c.sector = Some(Sector::PositiveParity);
        assert!(c.validate().is_err());
    }

    #[test]
    fn seed_flag_fills_random_state() {
        let mut c = ExperimentConfig::new(Model::KickedIsing);
        c.initial_state = InitialState::Random { count: 3, seed: None };
        assert!(c.validate().is_err());
        c.set_seed(4);
        c.validate().unwrap();
        assert_eq!(c.calibration.seed, 4);
    }

    #[test]
    fn range_grid_endpoints() {
        let g = Grid::Range { start: 0.0, stop: 1.0, count: 3 };
        assert_eq!(g.values(), vec![0.0, 0.5, 1.0]);
        assert_eq!(Grid::Range { start: 2.0, stop: 5.0, count: 1 }.values(), vec![2.0]);
    }
}
