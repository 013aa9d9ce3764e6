use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::privacy::ParamSource;
use crate::sbm::{SbmParams, Variant};
use crate::sdp::SolverOptions;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Nonprivate,
    Stbl,
    Fast,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Nonprivate => "nonprivate",
            Mode::Stbl => "stbl",
            Mode::Fast => "fast",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonprivate" => Ok(Mode::Nonprivate),
            "stbl" => Ok(Mode::Stbl),
            "fast" => Ok(Mode::Fast),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// Axes of the parameter grid. Axes a variant does not use are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub n: Vec<usize>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub rho: Vec<f64>,
    pub xi: Vec<f64>,
    pub rhos: Vec<Vec<f64>>,
    pub eps: Vec<f64>,
    /// `delta = n^(-delta_exp)`.
    pub delta_exp: Vec<f64>,
    pub c_delta: Vec<f64>,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            n: vec![],
            a: vec![],
            b: vec![],
            rho: vec![0.5],
            xi: vec![],
            rhos: vec![],
            eps: vec![1.0],
            delta_exp: vec![2.0],
            c_delta: vec![2.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub variant: Variant,
    pub grid: Grid,
    pub trials: usize,
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default)]
    pub mode: Mode,
    /// CSV, or JSON when the extension is `.json`; stdout when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub solver: SolverOptions,
    /// Parameter source of the fast mechanism.
    #[serde(default = "known")]
    pub source: ParamSource,
    /// Time limit on each distance search, in milliseconds.
    #[serde(default)]
    pub budget_ms: Option<u64>,
}

fn known() -> ParamSource {
    ParamSource::Known
}

/// One point of the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub params: SbmParams,
    pub eps: f64,
    pub delta_exp: f64,
    pub c_delta: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.cells()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Cartesian product of the axes the variant uses, in a fixed order
    /// (model axes outermost, then `eps`, `delta_exp`, `c_delta`). Every
    /// cell is validated.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let g = &self.grid;
        let need = |name: &str, len: usize| {
            if len == 0 {
                Err(Error::Config(format!("grid axis `{name}` is empty")))
            } else {
                Ok(())
            }
        };
        need("n", g.n.len())?;
        need("a", g.a.len())?;
        need("eps", g.eps.len())?;
        need("delta_exp", g.delta_exp.len())?;
        need("c_delta", g.c_delta.len())?;
        let mut models = Vec::new();
        match self.variant {
            Variant::Basbm => {
                need("b", g.b.len())?;
                need("rho", g.rho.len())?;
                for &n in &g.n {
                    for &a in &g.a {
                        for &b in &g.b {
                            for &rho in &g.rho {
                                models.push(SbmParams::Basbm { n, a, b, rho });
                            }
                        }
                    }
                }
            }
            Variant::Cbsbm => {
                need("rho", g.rho.len())?;
                need("xi", g.xi.len())?;
                for &n in &g.n {
                    for &a in &g.a {
                        for &rho in &g.rho {
                            for &xi in &g.xi {
                                models.push(SbmParams::Cbsbm { n, a, rho, xi });
                            }
                        }
                    }
                }
            }
            Variant::Gssbm => {
                need("b", g.b.len())?;
                need("rhos", g.rhos.len())?;
                for &n in &g.n {
                    for &a in &g.a {
                        for &b in &g.b {
                            for rhos in &g.rhos {
                                models.push(SbmParams::Gssbm { n, a, b, rhos: rhos.clone() });
                            }
                        }
                    }
                }
            }
        }
        let mut cells = Vec::new();
        for params in models {
            params.validate().map_err(|e| Error::Config(e.to_string()))?;
            for &eps in &g.eps {
                for &delta_exp in &g.delta_exp {
                    for &c_delta in &g.c_delta {
                        if !(eps > 0.0 && delta_exp > 0.0 && c_delta > 0.0) {
                            return Err(Error::Config(format!(
                                "eps = {eps}, delta_exp = {delta_exp}, c_delta = {c_delta} must be positive"
                            )));
                        }
                        cells.push(Cell {
                            params: params.clone(),
                            eps,
                            delta_exp,
                            c_delta,
                        });
                    }
                }
            }
        }
        Ok(cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_expands_in_order() {
        let c = ExperimentConfig::from_json(
            r#"{"variant": "basbm", "trials": 5,
                "grid": {"n": [40], "a": [6, 8], "b": [1], "rho": [0.5, 0.4]}}"#,
        )
        .unwrap();
        let cells = c.cells().unwrap();
        assert_eq!(cells.len(), 4);
        assert_eq!(cells[1].params, SbmParams::Basbm { n: 40, a: 6.0, b: 1.0, rho: 0.4 });
        assert_eq!(c.mode, Mode::Nonprivate);
        assert_eq!(c.source, ParamSource::Known);
    }

    #[test]
    fn config_errors() {
        let bad = [
            r#"{"variant": "basbm", "trials": 0, "grid": {"n": [40], "a": [6], "b": [1]}}"#,
            r#"{"variant": "basbm", "trials": 1, "grid": {"n": [], "a": [6], "b": [1]}}"#,
            r#"{"variant": "cbsbm", "trials": 1, "grid": {"n": [40], "a": [6]}}"#,
            r#"{"variant": "basbm", "trials": 1, "grid": {"n": [40], "a": [6], "b": [9]}}"#,
            r#"{"variant": "basbm", "trials": 1, "grid": {"n": [40], "a": [6], "b": [1], "zeta": [1]}}"#,
            r#"{"variant": "basbm", "trials": 1, "grid": {"n": [40], "a": [6], "b": [1], "eps": [0]}}"#,
            "not json",
        ];
        for text in bad {
            assert!(matches!(ExperimentConfig::from_json(text), Err(Error::Config(_))), "{text}");
        }
    }
}
