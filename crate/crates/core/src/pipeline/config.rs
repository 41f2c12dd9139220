use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precreal::{PrecisionPolicy, DEFAULT_PRECISION, PRECISION_CEILING};

/// Environment variable overriding [`PipelineConfig::cache_dir`].
pub const ENV_CACHE_DIR: &str = "KLUCAS_CACHE_DIR";
/// Environment variable overriding [`PipelineConfig::jobs`].
pub const ENV_JOBS: &str = "KLUCAS_JOBS";

/// Inclusive integer range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub lo: u32,
    pub hi: u32,
}

impl Span {
    pub const fn new(lo: u32, hi: u32) -> Self {
        Self { lo, hi }
    }

    pub fn iter(self) -> std::ops::RangeInclusive<u32> {
        self.lo..=self.hi
    }

    pub fn is_empty(self) -> bool {
        self.lo > self.hi
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmallKConfig {
    pub k: Span,
    pub l: Span,
    /// Brute-force comparisons run up to `max(reduced bound, m_cap)`.
    pub m_cap: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LargeKConfig {
    pub pass1_l_max: u32,
    pub pass2_l_max: u32,
    pub case2_l_max: u32,
    pub pass1_m: String,
    pub pass2_m: String,
    pub case2_m: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FinalConfig {
    pub l: Span,
    pub m_max: u64,
    pub n: Span,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorollaryConfig {
    /// Orders for the intersection check, `l < k` within the span.
    pub orders: Span,
    /// Decimal value limit.
    pub value_limit: String,
    pub power_k_max: u32,
    pub power_n_max: u64,
    pub power_a_max: u64,
}

/// Ranges, caps, precision and output settings for a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub full_scale: bool,
    pub precision_start: u32,
    pub precision_ceiling: u32,
    /// Worker threads; 0 picks the number of CPUs.
    pub jobs: usize,
    /// Per-pair reduction results are cached here; a rerun skips every pair
    /// already present, which makes long sweeps resumable.
    pub cache_dir: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub small_k: SmallKConfig,
    pub large_k: LargeKConfig,
    pub final_search: FinalConfig,
    pub corollaries: CorollaryConfig,
}

impl Default for SmallKConfig {
    fn default() -> Self {
        Self { k: Span::new(3, 30), l: Span::new(2, 29), m_cap: 1600 }
    }
}

impl Default for LargeKConfig {
    fn default() -> Self {
        Self {
            pass1_l_max: 50,
            pass2_l_max: 50,
            case2_l_max: 30,
            pass1_m: "7.75e271".into(),
            pass2_m: "5.7e47".into(),
            case2_m: "9.1e24".into(),
        }
    }
}

impl Default for FinalConfig {
    fn default() -> Self {
        Self { l: Span::new(2, 17), m_max: 290, n: Span::new(6, 190) }
    }
}

impl Default for CorollaryConfig {
    fn default() -> Self {
        Self {
            orders: Span::new(2, 15),
            value_limit: "1e30".into(),
            power_k_max: 12,
            power_n_max: 60,
            power_a_max: 60,
        }
    }
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            full_scale: false,
            precision_start: DEFAULT_PRECISION,
            precision_ceiling: PRECISION_CEILING,
            jobs: 0,
            cache_dir: None,
            json: None,
            csv: None,
            small_k: SmallKConfig::default(),
            large_k: LargeKConfig::default(),
            final_search: FinalConfig::default(),
            corollaries: CorollaryConfig::default(),
        }
    }
}

impl PipelineConfig {
    /// Reads a TOML file; missing keys keep their defaults.
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies `KLUCAS_CACHE_DIR` and `KLUCAS_JOBS`.
    pub fn with_env_overrides(mut self) -> Result<Self> {
        self.apply_env(|k| std::env::var(k).ok())?;
        Ok(self)
    }

    fn apply_env(&mut self, get: impl Fn(&str) -> Option<String>) -> Result<()> {
        if let Some(dir) = get(ENV_CACHE_DIR).filter(|s| !s.is_empty()) {
            self.cache_dir = Some(PathBuf::from(dir));
        }
        if let Some(jobs) = get(ENV_JOBS).filter(|s| !s.is_empty()) {
            self.jobs = jobs
                .parse()
                .map_err(|_| Error::Config(format!("{ENV_JOBS} must be a count, got {jobs:?}")))?;
        }
        Ok(())
    }

    /// Widens every range to the one the full proof needs.
    pub fn full_scale(mut self) -> Self {
        self.full_scale = true;
        self.small_k.k = Span::new(3, 800);
        self.small_k.l = Span::new(2, 799);
        self.large_k.pass1_l_max = 2970;
        self.large_k.pass2_l_max = 360;
        self.large_k.case2_l_max = 180;
        self
    }

    pub fn policy(&self) -> Result<PrecisionPolicy> {
        PrecisionPolicy::new(self.precision_start, self.precision_ceiling)
    }

    pub fn validate(&self) -> Result<()> {
        self.policy()?;
        let sk = &self.small_k;
        if sk.k.is_empty() || sk.l.is_empty() {
            return Err(Error::Config("small_k ranges must be nonempty".into()));
        }
        if sk.l.lo < 2 || sk.k.hi > 800 {
            return Err(Error::Config("small_k ranges must lie in [2, 800]".into()));
        }
        if sk.l.lo >= sk.k.hi {
            return Err(Error::Config("small_k needs some pair with l < k".into()));
        }
        let lk = &self.large_k;
        if lk.pass1_l_max < 2 || lk.pass2_l_max < 2 || lk.case2_l_max < 2 {
            return Err(Error::Config("large_k l ranges must include 2".into()));
        }
        for s in [&lk.pass1_m, &lk.pass2_m, &lk.case2_m, &self.corollaries.value_limit] {
            crate::precreal::PrecReal::parse_decimal(s, 64)
                .map_err(|_| Error::Config(format!("not a decimal number: {s:?}")))?;
        }
        let f = &self.final_search;
        if f.l.is_empty() || f.n.is_empty() || f.l.lo < 2 {
            return Err(Error::Config("final_search ranges must be nonempty with l >= 2".into()));
        }
        if self.corollaries.orders.lo < 2 {
            return Err(Error::Config("corollary orders start at 2".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_toml_keeps_defaults() {
        let cfg = PipelineConfig::from_toml_str("jobs = 3\n[small_k]\nk = { lo = 3, hi = 10 }\n").unwrap();
        assert_eq!(cfg.jobs, 3);
        assert_eq!(cfg.small_k.k, Span::new(3, 10));
        assert_eq!(cfg.small_k.m_cap, 1600);
        assert_eq!(cfg.final_search, FinalConfig::default());
    }

    #[test]
    fn rejects_bad_config() {
        assert!(PipelineConfig::from_toml_str("bogus = 1").is_err());
        assert!(PipelineConfig::from_toml_str("[small_k]\nk = { lo = 9, hi = 3 }").is_err());
        assert!(PipelineConfig::from_toml_str("[small_k]\nk = { lo = 3, hi = 900 }").is_err());
        assert!(PipelineConfig::from_toml_str("precision_start = 500\nprecision_ceiling = 400").is_err());
        assert!(PipelineConfig::from_toml_str("[large_k]\npass1_m = \"lots\"").is_err());
    }

    #[test]
    fn env_overrides() {
        let mut cfg = PipelineConfig::default();
        cfg.apply_env(|k| match k {
            ENV_CACHE_DIR => Some("/tmp/x".into()),
            ENV_JOBS => Some("4".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!(cfg.cache_dir, Some(PathBuf::from("/tmp/x")));
        assert_eq!(cfg.jobs, 4);
        assert!(cfg.apply_env(|k| (k == ENV_JOBS).then(|| "many".into())).is_err());
    }

    #[test]
    fn full_scale_ranges() {
        let cfg = PipelineConfig::default().full_scale();
        assert_eq!(cfg.small_k.k, Span::new(3, 800));
        assert_eq!(cfg.large_k.pass1_l_max, 2970);
        cfg.validate().unwrap();
    }
}
