//! Versioned TOML pipeline configuration.
//!
//! ```toml
//! config_version = 1
//! output_dir = "out"
//! seed = 42
//! delta_hours = 48
//!
//! [time_range]
//! start = "2018-08-16T00:00:00Z"   # inclusive
//! end = "2019-01-01T00:00:00Z"     # exclusive
//!
//! [[languages]]
//! code = "en"
//! pageviews = "en/pageviews/*.gz"
//! edges = "en/edges.tsv"
//! summaries = "en/summaries.jsonl"
//! stopwords = "en/stopwords.txt"
//! rules = "en/rules.toml"
//! ```
//!
//! Optional tables `[filters]`, `[burst]`, `[graph]`, `[keywords]`, `[lda]`
//! and `[classifier]` override defaults. Relative paths resolve against the
//! config file's directory.

use std::path::{Path, PathBuf};

use chrono::DateTime;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wikitrends::text::{KeywordConfig, LdaConfig};
use wikitrends::{BurstConfig, GraphConfig};

use crate::CliError;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageConfig {
    pub code: String,
    /// Glob over hourly dump files.
    pub pageviews: String,
    pub edges: PathBuf,
    pub summaries: PathBuf,
    pub stopwords: PathBuf,
    pub rules: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeRange {
    pub start: String,
    pub end: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Filters {
    pub min_total_views: u64,
    pub min_degree: usize,
}

impl Default for Filters {
    fn default() -> Self {
        Filters {
            min_total_views: 0,
            min_degree: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaSettings {
    pub enabled: bool,
    pub topics: usize,
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub top_words: usize,
}

impl Default for LdaSettings {
    fn default() -> Self {
        let d = LdaConfig::default();
        LdaSettings {
            enabled: false,
            topics: d.topics,
            alpha: d.alpha,
            beta: d.beta,
            iterations: d.iterations,
            top_words: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierSettings {
    pub smoothing: f64,
    pub train_fraction: f64,
}

impl Default for ClassifierSettings {
    fn default() -> Self {
        ClassifierSettings {
            smoothing: 1.0,
            train_fraction: 0.8,
        }
    }
}

fn default_delta() -> u64 {
    wikitrends::report::DEFAULT_DELTA_HOURS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub config_version: u32,
    pub languages: Vec<LanguageConfig>,
    pub time_range: TimeRange,
    pub output_dir: PathBuf,
    pub seed: u64,
    #[serde(default = "default_delta")]
    pub delta_hours: u64,
    #[serde(default)]
    pub filters: Filters,
    #[serde(default)]
    pub burst: BurstConfig,
    #[serde(default)]
    pub graph: GraphConfig,
    #[serde(default)]
    pub keywords: KeywordConfig,
    #[serde(default)]
    pub lda: LdaSettings,
    #[serde(default)]
    pub classifier: ClassifierSettings,
}

fn parse_hour(s: &str) -> Result<i64, String> {
    let t = DateTime::parse_from_rfc3339(s).map_err(|e| format!("bad timestamp {s:?}: {e}"))?;
    let secs = t.timestamp();
    if secs % 3600 != 0 {
        return Err(format!("timestamp {s:?} is not on an hour boundary"));
    }
    Ok(secs.div_euclid(3600))
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl PipelineConfig {
    /// Parses, resolves relative paths against `path`'s directory and
    /// validates.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut cfg: PipelineConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.config_version != CONFIG_VERSION {
            return Err(CliError::Config(format!(
                "unsupported config_version {} (expected {CONFIG_VERSION})",
                cfg.config_version
            )));
        }
        cfg.output_dir = resolve(base, &cfg.output_dir);
        for l in &mut cfg.languages {
            l.pageviews = resolve(base, Path::new(&l.pageviews)).to_string_lossy().into_owned();
            for p in [&mut l.edges, &mut l.summaries, &mut l.stopwords, &mut l.rules] {
                *p = resolve(base, p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let err = |m: String| Err(CliError::Config(m));
        if self.languages.is_empty() {
            return err("no languages configured".into());
        }
        let mut codes: Vec<&str> = self.languages.iter().map(|l| l.code.as_str()).collect();
        codes.sort_unstable();
        if codes.windows(2).any(|w| w[0] == w[1]) {
            return err("duplicate language code".into());
        }
        let (start, end) = self.hours()?;
        if end <= start {
            return err("time_range.end must be after start".into());
        }
        self.burst.validate().map_err(|e| CliError::Config(e.to_string()))?;
        self.graph.validate().map_err(CliError::Config)?;
        if self.keywords.k == 0 {
            return err("keywords.k must be positive".into());
        }
        if self.lda.enabled && self.lda.topics == 0 {
            return err("lda.topics must be positive".into());
        }
        let f = self.classifier.train_fraction;
        if !(f > 0.0 && f < 1.0) {
            return err("classifier.train_fraction must lie in (0, 1)".into());
        }
        if self.classifier.smoothing.is_nan() || self.classifier.smoothing <= 0.0 {
            return err("classifier.smoothing must be positive".into());
        }
        for l in &self.languages {
            if l.code.is_empty() || l.code.contains(['/', '\\', '.']) {
                return err(format!("invalid language code {:?}", l.code));
            }
            for (what, p) in [
                ("edges", &l.edges),
                ("summaries", &l.summaries),
                ("stopwords", &l.stopwords),
                ("rules", &l.rules),
            ] {
                if !p.is_file() {
                    return err(format!("{}: {what} file {} does not exist", l.code, p.display()));
                }
            }
            if self.pageview_files(l)?.is_empty() {
                return err(format!("{}: pageview glob {:?} matches no files", l.code, l.pageviews));
            }
        }
        Ok(())
    }

    /// `[start, end)` as hours since the epoch.
    pub fn hours(&self) -> Result<(i64, i64), CliError> {
        let start = parse_hour(&self.time_range.start).map_err(CliError::Config)?;
        let end = parse_hour(&self.time_range.end).map_err(CliError::Config)?;
        Ok((start, end))
    }

    /// Sorted dump files matched by a language's glob.
    pub fn pageview_files(&self, lang: &LanguageConfig) -> Result<Vec<PathBuf>, CliError> {
        let paths = glob::glob(&lang.pageviews).map_err(|e| CliError::Config(format!("{}: {e}", lang.code)))?;
        let mut files: Vec<PathBuf> = paths.filter_map(Result::ok).filter(|p| p.is_file()).collect();
        files.sort();
        Ok(files)
    }

    pub fn language(&self, code: &str) -> Option<&LanguageConfig> {
        self.languages.iter().find(|l| l.code == code)
    }

    pub fn language_dir(&self, code: &str) -> PathBuf {
        self.output_dir.join(code)
    }

    pub fn lda_config(&self, code: &str) -> LdaConfig {
        LdaConfig {
            topics: self.lda.topics,
            alpha: self.lda.alpha,
            beta: self.lda.beta,
            iterations: self.lda.iterations,
            seed: derive_seed(self.seed, "lda", code),
        }
    }
}

/// Seed of one stage for one language: the first eight bytes (big-endian)
/// of SHA-256 over `"{seed}:{stage}:{language}"`.
pub fn derive_seed(seed: u64, stage: &str, language: &str) -> u64 {
    let digest = Sha256::digest(format!("{seed}:{stage}:{language}").as_bytes());
    u64::from_be_bytes(digest[..8].try_into().unwrap())
}
