//! Experiment configuration: a TOML document whose fields can each be
//! overridden from the command line.
//!
//! ```toml
//! algorithms = ["r-dash", "med+rg"]
//! objective = "maxcover"
//! k = [10, 20, 40]
//! eps = 0.1
//! ell = 8
//! psi = "auto"            # or an element count
//! capacity_slack = 1.5
//! seeds = [0, 1, 2]
//! parallelism = 4
//! timeout_s = 300
//! out = "results.csv"
//!
//! [dataset]
//! kind = "ba"             # "file", "ba", "er" or "features"
//! n = 10000
//! m = 5
//! seed = 1
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use smcc_core::centralized;
use smcc_core::data::{DEFAULT_INFLUENCE_P, DEFAULT_REVENUE_ALPHA};
use smcc_core::distributed::MrAlgorithm;

use crate::error::{Error, Result};

pub const DEFAULT_EPS: f64 = 0.1;
pub const DEFAULT_TIMEOUT_S: f64 = 300.0;
pub const DEFAULT_ELL: usize = 8;
/// Uniform partitions overshoot `n/ℓ` by a few standard deviations.
pub const DEFAULT_CAPACITY_SLACK: f64 = 1.5;

/// Anything the runner can execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Greedy,
    Lag,
    Ltc,
    Mr(MrAlgorithm),
}

impl Algorithm {
    pub fn name(&self) -> String {
        match self {
            Algorithm::Greedy => "greedy".into(),
            Algorithm::Lag => "lag".into(),
            Algorithm::Ltc => "ltc".into(),
            Algorithm::Mr(m) => m.name(),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "greedy" => Ok(Algorithm::Greedy),
            "lag" => Ok(Algorithm::Lag),
            "ltc" => Ok(Algorithm::Ltc),
            other => MrAlgorithm::parse(other)
                .map(Algorithm::Mr)
                .ok_or_else(|| Error::Config(format!("unknown algorithm `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveName {
    MaxCover,
    MaxCoverExclusive,
    InfluenceMax,
    RevenueMax,
    ImageSumm,
}

impl ObjectiveName {
    pub fn name(self) -> &'static str {
        match self {
            ObjectiveName::MaxCover => "maxcover",
            ObjectiveName::MaxCoverExclusive => "maxcover-exclusive",
            ObjectiveName::InfluenceMax => "influencemax",
            ObjectiveName::RevenueMax => "revenuemax",
            ObjectiveName::ImageSumm => "imagesumm",
        }
    }

    pub fn needs_similarity(self) -> bool {
        self == ObjectiveName::ImageSumm
    }
}

impl FromStr for ObjectiveName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            ObjectiveName::MaxCover,
            ObjectiveName::MaxCoverExclusive,
            ObjectiveName::InfluenceMax,
            ObjectiveName::RevenueMax,
            ObjectiveName::ImageSumm,
        ];
        let lower = s.trim().to_ascii_lowercase();
        all.into_iter()
            .find(|o| o.name() == lower)
            .ok_or_else(|| Error::Config(format!("unknown objective `{s}`")))
    }
}

/// Where the instance comes from.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DatasetSpec {
    /// Edge list, or similarity CSV for `imagesumm`.
    File { path: PathBuf },
    Ba { n: usize, m: usize, #[serde(default)] seed: u64 },
    Er { n: usize, p: f64, #[serde(default)] seed: u64 },
    Features {
        n: usize,
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default = "default_density")]
        density: f64,
        #[serde(default)]
        seed: u64,
    },
}

fn default_dim() -> usize {
    16
}

fn default_density() -> f64 {
    0.3
}

impl FromStr for DatasetSpec {
    type Err = Error;

    /// A path, or `ba:n=..,m=..[,seed=..]`, `er:n=..,p=..[,seed=..]`,
    /// `features:n=..[,dim=..,density=..,seed=..]`.
    fn from_str(s: &str) -> Result<Self> {
        let Some((kind, rest)) = s.split_once(':') else {
            return Ok(DatasetSpec::File { path: PathBuf::from(s) });
        };
        if !matches!(kind, "ba" | "er" | "features") {
            return Ok(DatasetSpec::File { path: PathBuf::from(s) });
        }
        let mut table = toml::Table::new();
        table.insert("kind".into(), toml::Value::String(kind.into()));
        for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value in `{pair}`")))?;
            let value = value.trim();
            let parsed = value
                .parse::<i64>()
                .map(toml::Value::Integer)
                .or_else(|_| value.parse::<f64>().map(toml::Value::Float))
                .map_err(|_| Error::Config(format!("`{value}` is not a number")))?;
            table.insert(key.trim().into(), parsed);
        }
        table
            .try_into()
            .map_err(|e| Error::Config(format!("dataset `{s}`: {e}")))
    }
}

/// Per-machine capacity: a fixed count or `⌈n/ℓ⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Psi {
    Auto,
    Fixed(usize),
}

impl Psi {
    pub fn resolve(self, n: usize, ell: usize) -> usize {
        match self {
            Psi::Auto => n.div_ceil(ell.max(1)).max(1),
            Psi::Fixed(p) => p,
        }
    }
}

impl FromStr for Psi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("auto") {
            return Ok(Psi::Auto);
        }
        s.trim()
            .parse()
            .map(Psi::Fixed)
            .map_err(|_| Error::Config(format!("psi must be `auto` or a count, got `{s}`")))
    }
}

impl<'de> Deserialize<'de> for Psi {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(c) => Ok(Psi::Fixed(c)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Every field optional; the file and the command line each produce one and
/// the command line wins.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub algorithms: Option<Vec<String>>,
    pub objective: Option<String>,
    pub dataset: Option<DatasetSpec>,
    pub k: Option<Vec<usize>>,
    pub eps: Option<f64>,
    pub ell: Option<usize>,
    pub psi: Option<Psi>,
    pub capacity_slack: Option<f64>,
    pub seeds: Option<Vec<u64>>,
    pub parallelism: Option<usize>,
    pub out: Option<PathBuf>,
    pub timeout_s: Option<f64>,
    pub best_of_all_machines: Option<bool>,
    pub opt: Option<f64>,
    pub influence_p: Option<f64>,
    pub revenue_alpha: Option<f64>,
}

impl PartialConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` win over `lower`.
    pub fn over(self, lower: PartialConfig) -> PartialConfig {
        PartialConfig {
            algorithms: self.algorithms.or(lower.algorithms),
            objective: self.objective.or(lower.objective),
            dataset: self.dataset.or(lower.dataset),
            k: self.k.or(lower.k),
            eps: self.eps.or(lower.eps),
            ell: self.ell.or(lower.ell),
            psi: self.psi.or(lower.psi),
            capacity_slack: self.capacity_slack.or(lower.capacity_slack),
            seeds: self.seeds.or(lower.seeds),
            parallelism: self.parallelism.or(lower.parallelism),
            out: self.out.or(lower.out),
            timeout_s: self.timeout_s.or(lower.timeout_s),
            best_of_all_machines: self.best_of_all_machines.or(lower.best_of_all_machines),
            opt: self.opt.or(lower.opt),
            influence_p: self.influence_p.or(lower.influence_p),
            revenue_alpha: self.revenue_alpha.or(lower.revenue_alpha),
        }
    }

    /// Fills defaults and validates.
    pub fn finish(self) -> Result<ExperimentConfig> {
        let algorithms = self
            .algorithms
            .filter(|a| !a.is_empty())
            .ok_or_else(|| Error::Config("no algorithms given".into()))?
            .iter()
            .map(|a| a.parse())
            .collect::<Result<Vec<Algorithm>>>()?;
        let objective: ObjectiveName = self
            .objective
            .ok_or_else(|| Error::Config("no objective given".into()))?
            .parse()?;
        let dataset = self
            .dataset
            .ok_or_else(|| Error::Config("no dataset given".into()))?;
        let k = self.k.unwrap_or_default();
        if k.is_empty() || k.contains(&0) {
            return Err(Error::Config("k list must be non-empty and positive".into()));
        }
        let cfg = ExperimentConfig {
            algorithms,
            objective,
            dataset,
            k,
            eps: self.eps.unwrap_or(DEFAULT_EPS),
            ell: self.ell.unwrap_or(DEFAULT_ELL),
            psi: self.psi.unwrap_or(Psi::Auto),
            capacity_slack: self.capacity_slack.unwrap_or(DEFAULT_CAPACITY_SLACK),
            seeds: self.seeds.unwrap_or_else(|| vec![0]),
            parallelism: self.parallelism.unwrap_or_else(default_parallelism),
            out: self.out,
            timeout_s: self.timeout_s.unwrap_or(DEFAULT_TIMEOUT_S),
            best_of_all_machines: self.best_of_all_machines.unwrap_or(false),
            opt: self.opt,
            influence_p: self.influence_p.unwrap_or(DEFAULT_INFLUENCE_P),
            revenue_alpha: self.revenue_alpha.unwrap_or(DEFAULT_REVENUE_ALPHA),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    pub objective: ObjectiveName,
    pub dataset: DatasetSpec,
    pub k: Vec<usize>,
    pub eps: f64,
    pub ell: usize,
    pub psi: Psi,
    pub capacity_slack: f64,
    pub seeds: Vec<u64>,
    pub parallelism: usize,
    pub out: Option<PathBuf>,
    pub timeout_s: f64,
    pub best_of_all_machines: bool,
    /// Known optimum for `t-dash-opt`; brute-forced when absent and small.
    pub opt: Option<f64>,
    pub influence_p: f64,
    pub revenue_alpha: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if let Err(e) = centralized::check_eps(self.eps) {
            return fail(e.to_string());
        }
        if self.ell == 0 {
            return fail("ell must be positive".into());
        }
        if self.psi == Psi::Fixed(0) {
            return fail("psi must be positive".into());
        }
        if !(self.capacity_slack.is_finite() && self.capacity_slack >= 1.0) {
            return fail(format!("capacity slack {} must be at least 1", self.capacity_slack));
        }
        if !(self.timeout_s.is_finite() && self.timeout_s > 0.0) {
            return fail(format!("timeout {} must be positive", self.timeout_s));
        }
        if self.parallelism == 0 {
            return fail("parallelism must be positive".into());
        }
        if let DatasetSpec::File { path } = &self.dataset {
            if !path.is_file() {
                return fail(format!("dataset {} does not exist", path.display()));
            }
        }
        let similarity_source = matches!(self.dataset, DatasetSpec::Features { .. } | DatasetSpec::File { .. });
        let graph_source = !matches!(self.dataset, DatasetSpec::Features { .. });
        if self.objective.needs_similarity() && !similarity_source {
            return fail("imagesumm needs a similarity file or a features generator".into());
        }
        if !self.objective.needs_similarity() && !graph_source {
            return fail(format!("{} needs a graph dataset", self.objective.name()));
        }
        Ok(())
    }
}
