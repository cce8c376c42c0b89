//! Serializable run specification: every invocation resolves to one of
//! these, can be dumped with `--emit-spec`, and re-ingested byte-for-byte
//! with the `from-spec` command.

use levque::{Error, ModelConfig, Result, SchemeKind};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EpochSpec {
    /// explicit phase rates
    Rates { rates: Vec<f64> },
    /// deterministic-time approximation scheme
    Scheme {
        t: f64,
        n: u32,
        scheme: SchemeKind,
        epsilon: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum McKind {
    Lst,
    Density,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunSpec {
    Lst {
        model: ModelConfig,
        x: f64,
        alphas: Vec<f64>,
        epochs: EpochSpec,
        format: OutputFormat,
    },
    Density {
        model: ModelConfig,
        x: f64,
        epochs: EpochSpec,
        y_max: Option<f64>,
        points: usize,
        format: OutputFormat,
        dump_terms: bool,
    },
    Triple {
        model: ModelConfig,
        alpha: f64,
        beta: f64,
        epochs: EpochSpec,
        format: OutputFormat,
    },
    MeanCurve {
        model: ModelConfig,
        xs: Vec<f64>,
        t_start: f64,
        t_stop: f64,
        t_points: usize,
        n: u32,
        probe: f64,
    },
    Reproduce {
        table: String,
    },
    Scale {
        model: ModelConfig,
        q: f64,
        x_max: f64,
        points: usize,
    },
    Mc {
        model: ModelConfig,
        kind: McKind,
        x: f64,
        alpha: f64,
        epochs: Option<EpochSpec>,
        fixed_t: Option<f64>,
        y_max: f64,
        bins: usize,
        paths: usize,
        step: f64,
        seed: u64,
        euler: bool,
        format: OutputFormat,
    },
}

impl RunSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("run spec: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_reproduces_spec() {
        let spec = RunSpec::Lst {
            model: ModelConfig::shorthand("bm").unwrap(),
            x: 0.0,
            alphas: vec![0.5, 1.0],
            epochs: EpochSpec::Scheme {
                t: 1.0,
                n: 4,
                scheme: SchemeKind::PaperLiteral,
                epsilon: 0.01,
            },
            format: OutputFormat::Csv,
        };
        let back = RunSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, back);
    }
}
