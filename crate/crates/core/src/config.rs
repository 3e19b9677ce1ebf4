//! Run configuration shared by the CLI, the pipeline and the service.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::CorpusConfig;
use crate::report::AnalysisOptions;
use crate::stats::{Correction, FrameSetSpec, TargetFilter};
use crate::{assets, io, Error, Result};

pub const CONFIG_ENV: &str = "FRAMESHIFT_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ServiceConfig {
    pub host: String,
    pub port: u16,
    /// Static UI bundle; a placeholder page is served without one.
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            host: "127.0.0.1".into(),
            port: 8765,
            static_dir: None,
        }
    }
}

/// Relative paths are resolved against the config file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: CorpusConfig,
    /// Danger frame set file; the shipped one when absent.
    pub danger_frameset: Option<PathBuf>,
    /// Anthropomorphism frame set file; the shipped one when absent.
    pub anthropomorphism_frameset: Option<PathBuf>,
    /// Directory of schema overrides (`<name>.json`).
    pub schemas_dir: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    /// Interchange file to import instead of running the lexicon.
    pub annotations: Option<PathBuf>,
    /// Reject frames missing from the shipped inventory on import.
    pub strict_frames: bool,
    pub alpha: f64,
    pub correction: Correction,
    pub target: TargetFilter,
    pub top_k_frames: usize,
    pub top_k_pairs: usize,
    pub seed: u64,
    pub sample_size: usize,
    pub service: ServiceConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let a = AnalysisOptions::default();
        Self {
            corpus: CorpusConfig::default(),
            danger_frameset: None,
            anthropomorphism_frameset: None,
            schemas_dir: None,
            lexicon: None,
            annotations: None,
            strict_frames: false,
            alpha: a.alpha,
            correction: a.correction,
            target: a.target,
            top_k_frames: a.top_k_frames,
            top_k_pairs: a.top_k_pairs,
            seed: 42,
            sample_size: crate::coding::DEFAULT_SAMPLE_SIZE,
            service: ServiceConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str, base: &Path) -> Result<Self> {
        let mut cfg: Self = serde_json::from_str(text).map_err(|e| Error::json("run config", e))?;
        cfg.resolve_paths(base);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json(&text, base)
    }

    /// An explicit path, else `FRAMESHIFT_CONFIG`, else defaults.
    pub fn discover(explicit: Option<&Path>) -> Result<Self> {
        if let Some(p) = explicit {
            return Self::load(p);
        }
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut Option<PathBuf>| {
            if let Some(path) = p {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        };
        fix(&mut self.danger_frameset);
        fix(&mut self.anthropomorphism_frameset);
        fix(&mut self.schemas_dir);
        fix(&mut self.lexicon);
        fix(&mut self.annotations);
        fix(&mut self.service.static_dir);
    }

    pub fn validate(&self) -> Result<()> {
        self.corpus.validate()?;
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.sample_size == 0 {
            return Err(Error::Config("sample_size must be positive".into()));
        }
        if self.top_k_frames == 0 || self.top_k_pairs == 0 {
            return Err(Error::Config("top_k_frames and top_k_pairs must be positive".into()));
        }
        self.target.matcher()?;
        for (name, p) in [
            ("danger_frameset", &self.danger_frameset),
            ("anthropomorphism_frameset", &self.anthropomorphism_frameset),
            ("schemas_dir", &self.schemas_dir),
            ("lexicon", &self.lexicon),
            ("annotations", &self.annotations),
            ("service.static_dir", &self.service.static_dir),
        ] {
            if let Some(path) = p {
                if !path.exists() {
                    return Err(Error::Config(format!("{name}: {} does not exist", path.display())));
                }
            }
        }
        Ok(())
    }

    pub fn analysis_options(&self) -> AnalysisOptions {
        AnalysisOptions {
            alpha: self.alpha,
            correction: self.correction,
            top_k_frames: self.top_k_frames,
            top_k_pairs: self.top_k_pairs,
            target: self.target.clone(),
        }
    }

    fn frameset(&self, path: &Option<PathBuf>, name: &str) -> Result<FrameSetSpec> {
        match path {
            Some(p) => FrameSetSpec::load(p),
            None => Ok(assets::frameset(name).expect("shipped frame set")),
        }
    }

    pub fn danger(&self) -> Result<FrameSetSpec> {
        self.frameset(&self.danger_frameset, "danger")
    }

    pub fn anthropomorphism(&self) -> Result<FrameSetSpec> {
        self.frameset(&self.anthropomorphism_frameset, "anthropomorphism")
    }

    /// A frame set by shipped name or by file path.
    pub fn frameset_by_name(&self, name: &str) -> Result<FrameSetSpec> {
        match name {
            "danger" => self.danger(),
            "anthropomorphism" => self.anthropomorphism(),
            other => {
                let p = Path::new(other);
                if p.exists() {
                    FrameSetSpec::load(p)
                } else {
                    Err(Error::unknown("frame set", other))
                }
            }
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let bytes = io::to_json_pretty(self).expect("config serializes");
        hex(&Sha256::digest(&bytes))
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
