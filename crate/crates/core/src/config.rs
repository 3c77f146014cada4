//! Flat `key = value` experiment configuration.
//!
//! A file holds one assignment per line; `#` starts a comment. Command-line
//! overrides go through the same setter, so every key accepts the same
//! syntax in both places and later assignments win.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::channel::{dbm_to_watts, watts_to_dbm, SystemParams};
use crate::montecarlo::{CompositeSampler, McConfig, SystemKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Validate,
    Fig2a,
    Fig2b,
    Fig3,
    Sweep,
    Single,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::Validate,
        Experiment::Fig2a,
        Experiment::Fig2b,
        Experiment::Fig3,
        Experiment::Sweep,
        Experiment::Single,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Validate => "validate",
            Experiment::Fig2a => "fig2a",
            Experiment::Fig2b => "fig2b",
            Experiment::Fig3 => "fig3",
            Experiment::Sweep => "sweep",
            Experiment::Single => "single",
        }
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where an assignment came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Default,
    Line { path: PathBuf, line: usize },
    Flag,
    /// A check spanning several assignments.
    Merged,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Default => f.write_str("default"),
            Origin::Line { path, line } => write!(f, "{}:{line}", path.display()),
            Origin::Flag => f.write_str("command line"),
            Origin::Merged => f.write_str("merged configuration"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("{origin}: key `{key}`: {message}")]
    Key {
        origin: Origin,
        key: String,
        message: String,
    },
    #[error("{origin}: expected `key = value`, got `{text}`")]
    Syntax { origin: Origin, text: String },
    #[error("cannot read {path}: {message}")]
    Read { path: PathBuf, message: String },
}

/// Every recognised key, in documentation order.
pub const KEYS: &[&str] = &[
    "cell_radius",
    "bs_height",
    "irs_height",
    "relay_height",
    "tx_power_dbm",
    "noise_power_dbm",
    "carrier_freq",
    "alpha",
    "kappa",
    "eta",
    "n_elements",
    "m_irs",
    "k_ues",
    "r_in",
    "r_out",
    "m_relays",
    "relay_r_in",
    "relay_r_out",
    "relay_power_split",
    "topologies",
    "fading",
    "seed",
    "sampler",
    "experiment",
    "grid_step",
    "search_topologies",
    "search_fading",
    "m_values",
    "fig3_m_values",
    "q_total",
    "ring_radius",
    "alphas",
    "sweep_key",
    "sweep_values",
    "link_l",
    "link_d",
    "link_r",
];

/// Keys accepted by `sweep_key`: scalar model parameters.
pub const SWEEPABLE: &[&str] = &[
    "cell_radius",
    "bs_height",
    "irs_height",
    "relay_height",
    "tx_power_dbm",
    "noise_power_dbm",
    "carrier_freq",
    "alpha",
    "kappa",
    "eta",
    "n_elements",
    "m_irs",
    "k_ues",
    "r_in",
    "r_out",
    "m_relays",
    "relay_r_in",
    "relay_r_out",
    "relay_power_split",
];

fn canonical(key: &str) -> &str {
    match key {
        "N" => "n_elements",
        "M" => "m_irs",
        "K" => "k_ues",
        "M_R" => "m_relays",
        other => other,
    }
}

/// Link for the `single` experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkQuery {
    /// BS–UE horizontal distance `l`, m.
    pub l: f64,
    /// IRS–UE horizontal distance `d`, m.
    pub d: f64,
    /// BS–IRS horizontal distance `r`, m; `l` when absent.
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: SystemParams,
    /// Final Monte Carlo budget.
    pub mc: McConfig,
    pub experiment: Experiment,
    /// Deployment grid step, m.
    pub grid_step: f64,
    /// Monte Carlo budget per grid point during range search.
    pub search_topologies: usize,
    pub search_fading: usize,
    /// IRS (and relay) counts for `validate`, `fig2a` and `fig2b`.
    pub m_values: Vec<u32>,
    pub fig3_m_values: Vec<u32>,
    /// Total element budget `Q` of `fig3`.
    pub q_total: u32,
    pub ring_radius: f64,
    pub alphas: Vec<f64>,
    pub sweep_key: String,
    pub sweep_values: Vec<String>,
    pub link: LinkQuery,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            params: SystemParams::default(),
            mc: McConfig::default(),
            experiment: Experiment::Validate,
            grid_step: 5.0,
            search_topologies: 100,
            search_fading: 20,
            m_values: vec![25, 50, 100],
            fig3_m_values: vec![1, 2, 5, 10, 25, 50],
            q_total: 5000,
            ring_radius: 50.0,
            alphas: vec![2.2, 2.5],
            sweep_key: "n_elements".into(),
            sweep_values: ["500", "1000", "2000"].map(String::from).to_vec(),
            link: LinkQuery {
                l: 100.0,
                d: 10.0,
                r: None,
            },
        }
    }
}

fn parse_f64(v: &str) -> Result<f64, String> {
    let x: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    if !x.is_finite() {
        return Err(format!("`{v}` is not finite"));
    }
    Ok(x)
}

fn parse_int<T: FromStr>(v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("`{v}` is not a nonnegative integer"))
}

fn at_least<T: PartialOrd + fmt::Display + Copy>(x: T, lo: T, what: &str) -> Result<T, String> {
    if x < lo {
        return Err(format!("{what} must be at least {lo}, got {x}"));
    }
    Ok(x)
}

fn positive(x: f64) -> Result<f64, String> {
    if x <= 0.0 {
        return Err(format!("must be positive, got {x}"));
    }
    Ok(x)
}

fn list<T>(v: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    let items: Vec<&str> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err("list is empty".into());
    }
    items.into_iter().map(item).collect()
}

impl ExperimentConfig {
    /// Applies one assignment. Domain checks that involve a single key happen
    /// here; cross-key checks happen in [`ExperimentConfig::check`].
    pub fn set(&mut self, key: &str, value: &str, origin: &Origin) -> Result<(), ConfigError> {
        let err = |message: String| ConfigError::Key {
            origin: origin.clone(),
            key: key.to_string(),
            message,
        };
        let v = value.trim();
        let p = &mut self.params;
        match canonical(key) {
            "cell_radius" => p.cell_radius = parse_f64(v).and_then(positive).map_err(err)?,
            "bs_height" => p.bs_height = parse_f64(v).and_then(|x| at_least(x, 1.0, "height")).map_err(err)?,
            "irs_height" => p.irs_height = parse_f64(v).and_then(|x| at_least(x, 1.0, "height")).map_err(err)?,
            "relay_height" => {
                p.relay_height = parse_f64(v).and_then(|x| at_least(x, 1.0, "height")).map_err(err)?
            }
            "tx_power_dbm" => p.tx_power = dbm_to_watts(parse_f64(v).map_err(err)?),
            "noise_power_dbm" => p.noise_power = dbm_to_watts(parse_f64(v).map_err(err)?),
            "carrier_freq" => p.carrier_freq = parse_f64(v).and_then(positive).map_err(err)?,
            "alpha" => p.pathloss_exp = parse_f64(v).and_then(|x| at_least(x, 2.0, "alpha")).map_err(err)?,
            "kappa" => p.kappa_threshold = parse_f64(v).and_then(positive).map_err(err)?,
            "eta" => {
                let x = parse_f64(v).and_then(positive).map_err(err)?;
                if x > 1.0 {
                    return Err(err(format!("must not exceed 1, got {x}")));
                }
                p.boundary_factor = x;
            }
            "n_elements" => p.elements_per_irs = parse_int(v).and_then(|x| at_least(x, 1, "N")).map_err(err)?,
            "m_irs" => p.irs_count = parse_int(v).map_err(err)?,
            "k_ues" => p.ue_count = parse_int(v).and_then(|x| at_least(x, 1, "K")).map_err(err)?,
            "r_in" => p.irs_r_in = parse_f64(v).and_then(|x| at_least(x, 0.0, "r_in")).map_err(err)?,
            "r_out" => p.irs_r_out = parse_f64(v).and_then(|x| at_least(x, 0.0, "r_out")).map_err(err)?,
            "m_relays" => p.relay_count = parse_int(v).map_err(err)?,
            "relay_r_in" => {
                p.relay_r_in = parse_f64(v).and_then(|x| at_least(x, 0.0, "relay_r_in")).map_err(err)?
            }
            "relay_r_out" => {
                p.relay_r_out = parse_f64(v).and_then(|x| at_least(x, 0.0, "relay_r_out")).map_err(err)?
            }
            "relay_power_split" => {
                let x = parse_f64(v).map_err(err)?;
                if !(x > 0.0 && x < 1.0) {
                    return Err(err(format!("must lie in (0, 1), got {x}")));
                }
                p.relay_power_split = x;
            }
            "topologies" => self.mc.n_topologies = parse_int(v).and_then(|x| at_least(x, 1, "topologies")).map_err(err)?,
            "fading" => self.mc.n_fading = parse_int(v).and_then(|x| at_least(x, 1, "fading")).map_err(err)?,
            "seed" => self.mc.master_seed = parse_int(v).map_err(err)?,
            "sampler" => {
                self.mc.sampler = match v {
                    "exact" => CompositeSampler::Exact,
                    "gaussian" => CompositeSampler::GaussianSurrogate,
                    _ => return Err(err(format!("expected `exact` or `gaussian`, got `{v}`"))),
                }
            }
            "experiment" => self.experiment = v.parse().map_err(err)?,
            "grid_step" => self.grid_step = parse_f64(v).and_then(positive).map_err(err)?,
            "search_topologies" => {
                self.search_topologies = parse_int(v).and_then(|x| at_least(x, 1, "search_topologies")).map_err(err)?
            }
            "search_fading" => {
                self.search_fading = parse_int(v).and_then(|x| at_least(x, 1, "search_fading")).map_err(err)?
            }
            "m_values" => self.m_values = list(v, parse_int).map_err(err)?,
            "fig3_m_values" => {
                self.fig3_m_values = list(v, |s| parse_int(s).and_then(|x| at_least(x, 1, "M"))).map_err(err)?
            }
            "q_total" => self.q_total = parse_int(v).and_then(|x| at_least(x, 1, "q_total")).map_err(err)?,
            "ring_radius" => {
                self.ring_radius = parse_f64(v).and_then(|x| at_least(x, 0.0, "ring_radius")).map_err(err)?
            }
            "alphas" => {
                self.alphas = list(v, |s| parse_f64(s).and_then(|x| at_least(x, 2.0, "alpha"))).map_err(err)?
            }
            "sweep_key" => {
                let k = canonical(v);
                if !SWEEPABLE.contains(&k) {
                    return Err(err(format!("`{v}` is not a sweepable parameter")));
                }
                self.sweep_key = k.to_string();
            }
            "sweep_values" => self.sweep_values = list(v, |s| Ok(s.to_string())).map_err(err)?,
            "link_l" => self.link.l = parse_f64(v).and_then(|x| at_least(x, 0.0, "l")).map_err(err)?,
            "link_d" => self.link.d = parse_f64(v).and_then(|x| at_least(x, 0.0, "d")).map_err(err)?,
            "link_r" => self.link.r = Some(parse_f64(v).and_then(|x| at_least(x, 0.0, "r")).map_err(err)?),
            _ => return Err(err("unknown key".into())),
        }
        Ok(())
    }

    /// Applies a `key = value` text, reporting `path` and 1-based lines.
    pub fn apply_text(&mut self, text: &str, path: &Path) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let origin = Origin::Line {
                path: path.to_path_buf(),
                line: i + 1,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    origin,
                    text: line.to_string(),
                });
            };
            self.set(key.trim(), value, &origin)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text(&text, path)?;
        Ok(cfg)
    }

    /// Cross-key invariants of the merged configuration.
    pub fn check(&self) -> Result<(), ConfigError> {
        let err = |key: &str, message: String| ConfigError::Key {
            origin: Origin::Merged,
            key: key.to_string(),
            message,
        };
        let p = &self.params;
        for (a, b, lo, hi) in [
            ("r_in", "r_out", p.irs_r_in, p.irs_r_out),
            ("relay_r_in", "relay_r_out", p.relay_r_in, p.relay_r_out),
        ] {
            if lo > hi {
                return Err(err(a, format!("{a} = {lo} exceeds {b} = {hi}")));
            }
            if hi >= p.cell_radius {
                return Err(err(b, format!("{b} = {hi} must be below cell_radius = {}", p.cell_radius)));
            }
        }
        if self.grid_step > p.cell_radius {
            return Err(err("grid_step", format!("exceeds cell_radius = {}", p.cell_radius)));
        }
        if let Some(&m) = self.fig3_m_values.iter().find(|&&m| self.q_total % m != 0) {
            return Err(err("fig3_m_values", format!("{m} does not divide q_total = {}", self.q_total)));
        }
        let mut trial = self.clone();
        for v in &self.sweep_values {
            trial.set(&self.sweep_key, v, &Origin::Default).map_err(|e| match e {
                ConfigError::Key { message, .. } => err("sweep_values", message),
                other => other,
            })?;
        }
        p.validate().map_err(|e| err("params", e.to_string()))?;
        self.mc.validate().map_err(|e| err("topologies", e.to_string()))
    }

    /// Monte Carlo budget used per grid point during range search.
    pub fn search_mc(&self) -> McConfig {
        McConfig {
            n_topologies: self.search_topologies,
            n_fading: self.search_fading,
            ..self.mc
        }
    }

    pub fn mc_for(&self, system: SystemKind) -> McConfig {
        self.mc.with_system(system)
    }

    /// The configuration as `key = value` lines that parse back to `self`.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let join = |v: &[String]| v.join(",");
        let mut lines = vec![
            ("cell_radius", p.cell_radius.to_string()),
            ("bs_height", p.bs_height.to_string()),
            ("irs_height", p.irs_height.to_string()),
            ("relay_height", p.relay_height.to_string()),
            ("tx_power_dbm", watts_to_dbm(p.tx_power).to_string()),
            ("noise_power_dbm", watts_to_dbm(p.noise_power).to_string()),
            ("carrier_freq", p.carrier_freq.to_string()),
            ("alpha", p.pathloss_exp.to_string()),
            ("kappa", p.kappa_threshold.to_string()),
            ("eta", p.boundary_factor.to_string()),
            ("n_elements", p.elements_per_irs.to_string()),
            ("m_irs", p.irs_count.to_string()),
            ("k_ues", p.ue_count.to_string()),
            ("r_in", p.irs_r_in.to_string()),
            ("r_out", p.irs_r_out.to_string()),
            ("m_relays", p.relay_count.to_string()),
            ("relay_r_in", p.relay_r_in.to_string()),
            ("relay_r_out", p.relay_r_out.to_string()),
            ("relay_power_split", p.relay_power_split.to_string()),
            ("topologies", self.mc.n_topologies.to_string()),
            ("fading", self.mc.n_fading.to_string()),
            ("seed", self.mc.master_seed.to_string()),
            (
                "sampler",
                match self.mc.sampler {
                    CompositeSampler::Exact => "exact".into(),
                    CompositeSampler::GaussianSurrogate => "gaussian".into(),
                },
            ),
            ("experiment", self.experiment.to_string()),
            ("grid_step", self.grid_step.to_string()),
            ("search_topologies", self.search_topologies.to_string()),
            ("search_fading", self.search_fading.to_string()),
            ("m_values", join(&self.m_values.iter().map(u32::to_string).collect::<Vec<_>>())),
            ("fig3_m_values", join(&self.fig3_m_values.iter().map(u32::to_string).collect::<Vec<_>>())),
            ("q_total", self.q_total.to_string()),
            ("ring_radius", self.ring_radius.to_string()),
            ("alphas", join(&self.alphas.iter().map(f64::to_string).collect::<Vec<_>>())),
            ("sweep_key", self.sweep_key.clone()),
            ("sweep_values", join(&self.sweep_values)),
            ("link_l", self.link.l.to_string()),
            ("link_d", self.link.d.to_string()),
        ];
        if let Some(r) = self.link.r {
            lines.push(("link_r", r.to_string()));
        }
        lines.into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}
