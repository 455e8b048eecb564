//! Run configuration shared by every subcommand.
//!
//! Precedence, lowest to highest: built-in defaults, the optional TOML
//! file passed via `--config`, the `PRIMEDIFF_OUT_DIR` environment
//! variable (output directory only), then explicit flags.

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const OUT_DIR_ENV: &str = "PRIMEDIFF_OUT_DIR";

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Largest threshold swept when a subcommand gives no explicit bound.
    pub x_max: u64,
    /// Relative tolerance for the pair-count integrals.
    pub quad_rel_tol: f64,
    /// Prime cutoff for the truncated twin prime constant.
    pub c2_prime_bound: u64,
    /// Multiplier on the x/log^2 x and x/log x envelope curves.
    pub envelope_slack: f64,
    /// Constant C in the upper bound G <= C S(d) x/log^2 x.
    pub sieve_c: f64,
    /// Tolerated fraction above C before the upper bound counts as failed.
    pub sieve_slack: f64,
    /// Tolerated shortfall fraction in the averaged lower bound.
    pub lemma5_slack: f64,
    /// Directory receiving default-named artifacts.
    pub out_dir: PathBuf,
    /// Champion sweep snapshot path; absent means no checkpointing.
    pub checkpoint: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            x_max: 100_000,
            quad_rel_tol: 1e-6,
            c2_prime_bound: 1_000_000,
            envelope_slack: 2.0,
            sieve_c: 4.0,
            sieve_slack: 0.2,
            lemma5_slack: 0.1,
            out_dir: PathBuf::from("."),
            checkpoint: None,
        }
    }
}

impl RunConfig {
    pub fn load(file: Option<&Path>) -> Result<Self> {
        let mut cfg: Self = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("cannot read config {}", path.display()))?;
                toml::from_str(&text)
                    .with_context(|| format!("malformed config {}", path.display()))?
            }
            None => Self::default(),
        };
        if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
            if !dir.is_empty() {
                cfg.out_dir = PathBuf::from(dir);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.x_max < 3 {
            bail!("x_max must be at least 3, got {}", self.x_max);
        }
        if self.c2_prime_bound < 1_000 {
            bail!(
                "c2_prime_bound must be at least 1000, got {}",
                self.c2_prime_bound
            );
        }
        for (name, v) in [
            ("quad_rel_tol", self.quad_rel_tol),
            ("envelope_slack", self.envelope_slack),
            ("sieve_c", self.sieve_c),
            ("sieve_slack", self.sieve_slack),
            ("lemma5_slack", self.lemma5_slack),
        ] {
            if v.is_nan() || v <= 0.0 {
                bail!("{name} must be positive, got {v}");
            }
        }
        Ok(())
    }

    /// Default artifact location for a file the user did not name.
    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        assert!(RunConfig::default().validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let cfg = RunConfig {
            x_max: 2,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig {
            quad_rel_tol: 0.0,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = RunConfig {
            sieve_slack: f64::NAN,
            ..RunConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn toml_round_trip() {
        let text = "x_max = 5000\nquad_rel_tol = 1e-8\nout_dir = \"artifacts\"\n";
        let cfg: RunConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.x_max, 5_000);
        assert_eq!(cfg.quad_rel_tol, 1e-8);
        assert_eq!(cfg.out_dir, PathBuf::from("artifacts"));
        assert_eq!(cfg.c2_prime_bound, 1_000_000);
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = toml::from_str::<RunConfig>("xmax = 5\n").unwrap_err();
        assert!(err.to_string().contains("xmax"));
    }
}
