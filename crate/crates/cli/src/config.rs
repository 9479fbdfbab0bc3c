use std::path::Path;

use anyhow::Context;
use serde::Deserialize;

/// Run configuration read from a TOML file.
///
/// ```toml
/// threads = 4
/// allow_ambiguous = false
/// conjugate_sigma_trace = false
///
/// [tolerances]
/// evenness = 1e-10
///
/// [spectrum]
/// max_word_len = 8
/// cutoff = 5.0
/// ```
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub threads: Option<usize>,
    #[serde(default)]
    pub allow_ambiguous: bool,
    #[serde(default)]
    pub conjugate_sigma_trace: bool,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub spectrum: SpectrumConfig,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative bound on odd orbital-polynomial coefficients.
    pub evenness: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub max_word_len: Option<usize>,
    pub cutoff: Option<f64>,
    pub conjugator_radius: Option<usize>,
    pub word_limit: Option<usize>,
    pub element_cap: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let config: Self =
            toml::from_str(&text).map_err(|e| selberg::Error::Parse(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> selberg::Result<()> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x > 0.0) => Err(selberg::Error::Invalid(format!("{name} must be positive, got {x}"))),
            _ => Ok(()),
        };
        positive("tolerances.evenness", self.tolerances.evenness)?;
        positive("spectrum.cutoff", self.spectrum.cutoff)?;
        if self.threads == Some(0) {
            return Err(selberg::Error::Invalid("threads must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<RunConfig>("thread = 2").is_err());
        assert!(toml::from_str::<RunConfig>("[spectrum]\ncutof = 2.0").is_err());
        let ok: RunConfig = toml::from_str("threads = 2\n[spectrum]\ncutoff = 2.0").unwrap();
        assert_eq!(ok.spectrum.cutoff, Some(2.0));
    }

    #[test]
    fn tolerances_must_be_positive() {
        let c: RunConfig = toml::from_str("[tolerances]\nevenness = -1e-3").unwrap();
        assert!(c.validate().is_err());
    }
}
