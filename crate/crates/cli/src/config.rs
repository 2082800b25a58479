//! Per-subcommand configs, the `table1` / `table2` presets and flag overrides.

use std::path::Path;

use ratecorr::analysis::{FreeParam, SyncExperiment};
use ratecorr::{NetworkParams, NoiseSpec, Order, SimConfig, TopologySpec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

/// Flags that override config values, keyed by their config field name.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub dt: Option<f64>,
    pub t_max: Option<f64>,
    pub branch: Option<usize>,
    pub allow_irregular: bool,
}

impl Overrides {
    fn entries(&self) -> Vec<(&'static str, Value)> {
        let mut out = Vec::new();
        if let Some(v) = self.seed {
            out.push(("seed", v.into()));
        }
        if let Some(v) = self.trials {
            out.push(("trials", v.into()));
        }
        if let Some(v) = self.dt {
            out.push(("dt", v.into()));
        }
        if let Some(v) = self.t_max {
            out.push(("t_max", v.into()));
        }
        if let Some(v) = self.branch {
            out.push(("branch", v.into()));
        }
        if self.allow_irregular {
            out.push(("allow_irregular", true.into()));
        }
        out
    }
}

/// Config of a subcommand: its presets and, when it has one, its seed.
pub trait Experiment: Serialize + DeserializeOwned {
    const DEFAULT_PRESET: &'static str = "table1";
    fn preset(name: &str) -> Option<Self>;
    fn seed(&self) -> Option<u64> {
        None
    }
}

/// Resolves `--config` (a preset name or a JSON file) and applies the flags.
/// A flag naming a field the config does not have is rejected.
pub fn load<T: Experiment>(config: Option<&str>, overrides: &Overrides) -> Result<T, CliError> {
    let mut value = match config {
        None => to_value(&T::preset(T::DEFAULT_PRESET).expect("default preset exists")),
        Some(name) if !Path::new(name).exists() && T::preset(name).is_some() => to_value(&T::preset(name).unwrap()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("reading {path}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("parsing {path}: {e}")))?
        }
    };
    let Value::Object(map) = &mut value else {
        return Err(CliError::Config("config must be a JSON object".into()));
    };
    apply(map, overrides);
    serde_json::from_value(value).map_err(|e| CliError::Config(format!("config: {e}")))
}

fn apply(map: &mut Map<String, Value>, overrides: &Overrides) {
    for (key, v) in overrides.entries() {
        map.insert(key.to_string(), v);
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("configs serialize")
}

/// One-line JSON of a resolved config, as stored in CSV headers.
pub fn to_line<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("configs serialize")
}

fn cl10() -> TopologySpec {
    TopologySpec::circular_ladder(5).expect("valid")
}

fn network(name: &str) -> Option<NetworkParams> {
    match name {
        "table1" => Some(NetworkParams::table1()),
        "table2" => Some(NetworkParams::table2()),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub topology: TopologySpec,
    /// Row sum Λ of the weighted adjacency.
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

impl Experiment for SpectrumConfig {
    fn preset(name: &str) -> Option<Self> {
        Some(SpectrumConfig { topology: cl10(), weight: network(name)?.weight })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticCovConfig {
    pub topology: TopologySpec,
    pub network: NetworkParams,
    pub noise: NoiseSpec,
    pub t_max: f64,
    pub dt: f64,
    #[serde(default = "first_pair")]
    pub pairs: Vec<(usize, usize)>,
    #[serde(default)]
    pub branch: Option<usize>,
}

fn first_pair() -> Vec<(usize, usize)> {
    vec![(0, 1)]
}

impl Experiment for AnalyticCovConfig {
    fn preset(name: &str) -> Option<Self> {
        Some(AnalyticCovConfig {
            topology: cl10(),
            network: network(name)?,
            noise: NoiseSpec::table1([0.01, 0.1, 0.1, 0.0, 0.0]),
            t_max: 10.0,
            dt: 0.1,
            pairs: first_pair(),
            branch: None,
        })
    }
}

fn sim_preset(name: &str, order: Order) -> Option<SimConfig> {
    let noise = NoiseSpec::table1([0.01, 0.1, 0.1, 0.0, 0.0]);
    Some(SimConfig::new(cl10(), network(name)?, noise, 10.0, 10_000, 1, order))
}

impl Experiment for SimConfig {
    fn preset(name: &str) -> Option<Self> {
        sim_preset(name, Order::Order1)
    }
    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

/// Overlay of exact, first- and second-order ensembles and the analytic curves
/// for node 0 and pair (0, 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub topology: TopologySpec,
    #[serde(default)]
    pub allow_irregular: bool,
    pub network: NetworkParams,
    pub noise: NoiseSpec,
    pub t_max: f64,
    pub dt: f64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub z: ratecorr::simulator::ZDrive,
    #[serde(default)]
    pub h: ratecorr::simulator::HDrive,
    #[serde(default)]
    pub branch: Option<usize>,
}

impl CompareConfig {
    pub fn sim(&self, order: Order) -> SimConfig {
        let mut cfg = SimConfig::new(self.topology.clone(), self.network, self.noise, self.t_max, self.trials, self.seed, order);
        cfg.allow_irregular = self.allow_irregular;
        cfg.dt = self.dt;
        cfg.z = self.z;
        cfg.h = self.h;
        cfg.branch = self.branch;
        cfg.keep_trajectory = true;
        cfg
    }
}

impl Experiment for CompareConfig {
    fn preset(name: &str) -> Option<Self> {
        let s = sim_preset(name, Order::Order1)?;
        Some(CompareConfig {
            topology: s.topology,
            allow_irregular: false,
            network: s.network,
            noise: s.noise,
            t_max: s.t_max,
            dt: s.dt,
            trials: s.trials,
            seed: s.seed,
            z: s.z,
            h: s.h,
            branch: None,
        })
    }
    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

/// Correlation against the band half-width ν on circulant graphs of `n` nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChaosScanConfig {
    pub n: usize,
    /// Half-widths to scan; every ν in 1..=n/2 when absent.
    #[serde(default)]
    pub nus: Option<Vec<usize>>,
    pub t: f64,
    pub network: NetworkParams,
    pub sigma: [f64; 3],
    /// Half-widths that also get a first-order Monte Carlo estimate.
    #[serde(default)]
    pub mc_nus: Vec<usize>,
    pub trials: usize,
    pub dt: f64,
    pub seed: u64,
}

impl Experiment for ChaosScanConfig {
    fn preset(name: &str) -> Option<Self> {
        Some(ChaosScanConfig {
            n: 100,
            nus: None,
            t: 1.0,
            network: network(name)?,
            sigma: [0.1, 0.1, 0.1],
            mc_nus: Vec::new(),
            trials: 10_000,
            dt: 0.01,
            seed: 1,
        })
    }
    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

/// max_t |corr(0, 1)| against the baseline input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputScanConfig {
    pub topology: TopologySpec,
    pub network: NetworkParams,
    pub noise: NoiseSpec,
    pub inputs: Vec<f64>,
    pub t_max: f64,
    pub dt: f64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "exact")]
    pub order: Order,
    #[serde(default)]
    pub branch: Option<usize>,
}

fn exact() -> Order {
    Order::Exact
}

impl InputScanConfig {
    pub fn sim(&self) -> SimConfig {
        let mut cfg = SimConfig::new(self.topology.clone(), self.network, self.noise, self.t_max, self.trials, self.seed, self.order);
        cfg.dt = self.dt;
        cfg.branch = self.branch;
        cfg
    }
}

impl Experiment for InputScanConfig {
    fn preset(name: &str) -> Option<Self> {
        Some(InputScanConfig {
            topology: TopologySpec::cycle(5).expect("valid"),
            network: network(name)?,
            noise: NoiseSpec::uncorrelated([0.1, 0.1, 0.1, 0.0, 0.0]),
            inputs: vec![-5.0, -2.5, 0.0, 2.5, 5.0],
            t_max: 10.0,
            dt: 0.1,
            trials: 50_000,
            seed: 1,
            order: Order::Exact,
            branch: None,
        })
    }
    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

/// Parameter sets with a zero dominant rate on fully connected networks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyncSolveConfig {
    pub network: NetworkParams,
    /// Parameter solved for; the other two come from `network`.
    #[serde(default)]
    pub free: Option<FreeParam>,
    /// Inputs at which to evaluate the closed family Λ = -2Ī, τ = -2/Ī.
    #[serde(default)]
    pub family: Vec<f64>,
}

impl Experiment for SyncSolveConfig {
    const DEFAULT_PRESET: &'static str = "table2";
    fn preset(name: &str) -> Option<Self> {
        Some(SyncSolveConfig { network: network(name)?, free: Some(FreeParam::Input), family: vec![-2.0, -20.0] })
    }
}

impl Experiment for SyncExperiment {
    const DEFAULT_PRESET: &'static str = "table2";
    fn preset(name: &str) -> Option<Self> {
        Some(SyncExperiment {
            sizes: vec![5, 10, 20],
            network: network(name)?,
            noise: NoiseSpec::uncorrelated([0.1, 0.1, 0.1, 0.0, 0.0]),
            t_max: 20.0,
            dt: 0.01,
            trials: 1000,
            seed: 1,
            threshold: 0.9,
        })
    }
    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

/// Sigmoid and arctangent radii of convergence on a grid of expansion points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusConfig {
    pub slopes: Vec<f64>,
    pub x0: Vec<f64>,
    pub n_max: usize,
}

impl Experiment for RadiusConfig {
    fn preset(name: &str) -> Option<Self> {
        network(name)?;
        Some(RadiusConfig {
            slopes: vec![0.5, 1.0, 2.0],
            x0: (0..11).map(|k| k as f64 - 5.0).collect(),
            n_max: 512,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip<T: Experiment + PartialEq + std::fmt::Debug>() {
        for name in ["table1", "table2"] {
            let c = T::preset(name).unwrap();
            let back: T = serde_json::from_str(&to_line(&c)).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn presets_round_trip() {
        round_trip::<SpectrumConfig>();
        round_trip::<AnalyticCovConfig>();
        round_trip::<SimConfig>();
        round_trip::<CompareConfig>();
        round_trip::<ChaosScanConfig>();
        round_trip::<InputScanConfig>();
        round_trip::<SyncSolveConfig>();
        round_trip::<SyncExperiment>();
        round_trip::<RadiusConfig>();
    }

    #[test]
    fn overrides_and_unknown_keys() {
        let o = Overrides { seed: Some(9), trials: Some(5), ..Default::default() };
        let c: SimConfig = load(None, &o).unwrap();
        assert_eq!((c.seed, c.trials), (9, 5));
        assert!(matches!(load::<SpectrumConfig>(None, &o), Err(CliError::Config(_))));
        assert!(matches!(load::<SimConfig>(Some("table3"), &Overrides::default()), Err(CliError::Config(_))));
    }
}
