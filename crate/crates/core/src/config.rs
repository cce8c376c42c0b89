//! Model specification in TOML: `family`, `side`, and the numeric keys of
//! the chosen family. Unknown keys are rejected.
//!
//! ```toml
//! family = "bm"      # "bm" | "gamma" | "cpexp"
//! side = "pos"       # "pos" | "neg" (bm only; the others are fixed)
//! d = -1.0
//! sigma2 = 1.0
//! # gamma family: gamma, beta, rho
//! # cpexp family: lambda, mu, c
//! ```

use crate::error::{Error, Result};
use crate::model::{Family, LevyModel, Side};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

impl ModelConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("model config: {e}")))
    }

    /// Reference parameter sets keyed by bare family name: BM(-1, 1),
    /// gamma (1, 1, 2), compound Poisson (1, 1, 0.5).
    pub fn shorthand(name: &str) -> Result<Self> {
        let mut cfg = ModelConfig {
            family: name.to_string(),
            ..ModelConfig::default()
        };
        match name {
            "bm" => {
                cfg.d = Some(-1.0);
                cfg.sigma2 = Some(1.0);
            }
            "gamma" => {
                cfg.gamma = Some(1.0);
                cfg.beta = Some(1.0);
                cfg.rho = Some(2.0);
            }
            "cpexp" => {
                cfg.lambda = Some(1.0);
                cfg.mu = Some(1.0);
                cfg.c = Some(0.5);
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown model shorthand '{other}' (expected bm, gamma or cpexp)"
                )))
            }
        }
        Ok(cfg)
    }

    /// Applies a `key=value` override.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        match key {
            "d" => self.d = Some(value),
            "sigma2" => self.sigma2 = Some(value),
            "gamma" => self.gamma = Some(value),
            "beta" => self.beta = Some(value),
            "rho" => self.rho = Some(value),
            "lambda" => self.lambda = Some(value),
            "mu" => self.mu = Some(value),
            "c" => self.c = Some(value),
            other => {
                return Err(Error::Config(format!("unknown parameter key '{other}'")))
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<LevyModel> {
        let side = match self.side.as_deref() {
            Some("pos") => Some(Side::SpectrallyPositive),
            Some("neg") => Some(Side::SpectrallyNegative),
            None => None,
            Some(other) => {
                return Err(Error::Config(format!(
                    "side must be 'pos' or 'neg', got '{other}'"
                )))
            }
        };
        let need = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::Config(format!("missing '{key}' for family '{}'", self.family)))
        };
        match self.family.as_str() {
            "bm" => LevyModel::new(
                Family::BrownianMotion {
                    drift: need(self.d, "d")?,
                    sigma2: need(self.sigma2, "sigma2")?,
                },
                side.unwrap_or(Side::SpectrallyPositive),
            ),
            "gamma" => LevyModel::new(
                Family::GammaMinusDrift {
                    gamma: need(self.gamma, "gamma")?,
                    beta: need(self.beta, "beta")?,
                    rho: need(self.rho, "rho")?,
                },
                side.unwrap_or(Side::SpectrallyPositive),
            ),
            "cpexp" => LevyModel::new(
                Family::CompoundPoissonExpNeg {
                    lambda: need(self.lambda, "lambda")?,
                    mu: need(self.mu, "mu")?,
                    c: need(self.c, "c")?,
                },
                side.unwrap_or(Side::SpectrallyNegative),
            ),
            other => Err(Error::Config(format!(
                "unknown family '{other}' (expected bm, gamma or cpexp)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bm_config() {
        let cfg = ModelConfig::from_toml(
            r#"
            family = "bm"
            side = "neg"
            d = -1.0
            sigma2 = 1.0
            "#,
        )
        .unwrap();
        let m = cfg.build().unwrap();
        assert_eq!(m.side(), Side::SpectrallyNegative);
        assert_eq!(m.mean_drift(), -1.0);
    }

    #[test]
    fn rejects_unknown_keys() {
        let err = ModelConfig::from_toml("family = \"bm\"\nfoo = 1.0\n").unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn rejects_wrong_side_for_family() {
        let cfg = ModelConfig::from_toml("family = \"gamma\"\nside = \"neg\"\ngamma = 1.0\nbeta = 1.0\nrho = 2.0\n").unwrap();
        assert!(cfg.build().is_err());
    }

    #[test]
    fn shorthand_round_trip() {
        for name in ["bm", "gamma", "cpexp"] {
            let m = ModelConfig::shorthand(name).unwrap().build().unwrap();
            assert!(m.mean_drift() < 0.0);
        }
        assert!(ModelConfig::shorthand("weird").is_err());
    }

    #[test]
    fn overrides_apply() {
        let mut cfg = ModelConfig::shorthand("bm").unwrap();
        cfg.set("sigma2", 2.0).unwrap();
        assert_eq!(cfg.sigma2, Some(2.0));
        assert!(cfg.set("nope", 1.0).is_err());
    }
}
