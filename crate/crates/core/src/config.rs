//! Run configuration: built-in defaults, then an optional `key = value`
//! file, then `METAMONO_*` environment overrides.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bessel::{DEFAULT_ZERO_M_MAX, DEFAULT_ZERO_N_MAX};
use crate::diskquad::{QuadratureRule, DEFAULT_NR, DEFAULT_NTHETA};
use crate::error::{Error, Result};
use crate::expansion::BlockSolver;

pub const ENV_PREFIX: &str = "METAMONO_";

/// Smallest admissible tolerance.
pub const MIN_TOLERANCE: f64 = 1e-14;

/// Pass thresholds of the verification checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub recurrence: f64,
    pub zero: f64,
    pub kernel_abs: f64,
    /// Allowed relative deviation of the h-halving ratio from 4.
    pub kernel_ratio: f64,
    pub orthogonality: f64,
    pub norm_rel: f64,
    pub norm_forms: f64,
    pub cross: f64,
    /// Final residual relative to `‖f‖`.
    pub completeness: f64,
    pub gram_schmidt: f64,
    pub timemt: f64,
    pub time_derivative: f64,
    pub wick: f64,
    /// Lower bound the negative controls must exceed.
    pub negative_control: f64,
    pub symmetry: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            recurrence: 1e-11,
            zero: 1e-12,
            kernel_abs: 1e-5,
            kernel_ratio: 0.2,
            orthogonality: 1e-8,
            norm_rel: 1e-8,
            norm_forms: 1e-10,
            cross: 1e-8,
            completeness: 1e-3,
            gram_schmidt: 1e-8,
            timemt: 1e-5,
            time_derivative: 1e-8,
            wick: 5e-5,
            negative_control: 1e-2,
            symmetry: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub quad_nr: usize,
    pub quad_ntheta: usize,
    /// Largest Bessel order subcommands may request.
    pub bessel_n_max: usize,
    /// Largest radial index subcommands may request.
    pub bessel_m_max: usize,
    /// Small finite-difference step (absolute residual checks).
    pub fd_h1: f64,
    /// Large finite-difference step (convergence-ratio checks).
    pub fd_h2: f64,
    pub block_solver: BlockSolver,
    pub tolerances: Tolerances,
    pub report_path: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            quad_nr: DEFAULT_NR,
            quad_ntheta: DEFAULT_NTHETA,
            bessel_n_max: DEFAULT_ZERO_N_MAX,
            bessel_m_max: DEFAULT_ZERO_M_MAX,
            fd_h1: crate::basis::DEFAULT_H1,
            fd_h2: crate::basis::DEFAULT_H2,
            block_solver: BlockSolver::Truncated,
            tolerances: Tolerances::default(),
            report_path: None,
            output_dir: None,
        }
    }
}

/// Every recognised key.
pub const KEYS: &[&str] = &[
    "quad.nr",
    "quad.ntheta",
    "bessel.n_max",
    "bessel.m_max",
    "fd.h1",
    "fd.h2",
    "expand.block_solver",
    "tol.recurrence",
    "tol.zero",
    "tol.kernel_abs",
    "tol.kernel_ratio",
    "tol.orthogonality",
    "tol.norm_rel",
    "tol.norm_forms",
    "tol.cross",
    "tol.completeness",
    "tol.gram_schmidt",
    "tol.timemt",
    "tol.time_derivative",
    "tol.wick",
    "tol.negative_control",
    "tol.symmetry",
    "output.report",
    "output.dir",
];

/// Environment variable overriding `key`, e.g. `METAMONO_QUAD_NR`.
pub fn env_name(key: &str) -> String {
    format!("{ENV_PREFIX}{}", key.replace('.', "_").to_uppercase())
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{value}` for {key}")))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let t = &mut self.tolerances;
        match key {
            "quad.nr" => self.quad_nr = parse(key, value)?,
            "quad.ntheta" => self.quad_ntheta = parse(key, value)?,
            "bessel.n_max" => self.bessel_n_max = parse(key, value)?,
            "bessel.m_max" => self.bessel_m_max = parse(key, value)?,
            "fd.h1" => self.fd_h1 = parse(key, value)?,
            "fd.h2" => self.fd_h2 = parse(key, value)?,
            "expand.block_solver" => {
                self.block_solver = match value {
                    "truncated" => BlockSolver::Truncated,
                    "strict" => BlockSolver::Strict,
                    _ => {
                        return Err(Error::Config(format!(
                            "{key} must be `truncated` or `strict`, got `{value}`"
                        )))
                    }
                }
            }
            "tol.recurrence" => t.recurrence = parse(key, value)?,
            "tol.zero" => t.zero = parse(key, value)?,
            "tol.kernel_abs" => t.kernel_abs = parse(key, value)?,
            "tol.kernel_ratio" => t.kernel_ratio = parse(key, value)?,
            "tol.orthogonality" => t.orthogonality = parse(key, value)?,
            "tol.norm_rel" => t.norm_rel = parse(key, value)?,
            "tol.norm_forms" => t.norm_forms = parse(key, value)?,
            "tol.cross" => t.cross = parse(key, value)?,
            "tol.completeness" => t.completeness = parse(key, value)?,
            "tol.gram_schmidt" => t.gram_schmidt = parse(key, value)?,
            "tol.timemt" => t.timemt = parse(key, value)?,
            "tol.time_derivative" => t.time_derivative = parse(key, value)?,
            "tol.wick" => t.wick = parse(key, value)?,
            "tol.negative_control" => t.negative_control = parse(key, value)?,
            "tol.symmetry" => t.symmetry = parse(key, value)?,
            "output.report" => self.report_path = Some(PathBuf::from(value)),
            "output.dir" => self.output_dir = Some(PathBuf::from(value)),
            _ => return Err(Error::Config(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<()> {
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("{origin}:{}: expected `key = value`", no + 1))
            })?;
            self.set(key.trim(), value)
                .map_err(|e| Error::Config(format!("{origin}:{}: {e}", no + 1)))?;
        }
        Ok(())
    }

    /// Applies overrides from `lookup(env_name(key))` for every key.
    pub fn apply_env(&mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<()> {
        for key in KEYS {
            let name = env_name(key);
            if let Some(v) = lookup(&name) {
                self.set(key, &v)
                    .map_err(|e| Error::Config(format!("{name}: {e}")))?;
            }
        }
        Ok(())
    }

    /// Defaults, then `file`, then the process environment; validated.
    pub fn load(file: Option<&Path>) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)?;
            cfg.apply_text(&text, &path.display().to_string())?;
        }
        cfg.apply_env(|name| std::env::var(name).ok())?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.quad_nr < 2 || self.quad_ntheta < 4 {
            return fail(format!(
                "quad.nr must be >= 2 and quad.ntheta >= 4 (got {}, {})",
                self.quad_nr, self.quad_ntheta
            ));
        }
        if self.bessel_n_max > DEFAULT_ZERO_N_MAX
            || self.bessel_m_max > DEFAULT_ZERO_M_MAX
            || self.bessel_m_max == 0
        {
            return fail(format!(
                "bessel.n_max must be <= {DEFAULT_ZERO_N_MAX} and 1 <= bessel.m_max <= {DEFAULT_ZERO_M_MAX}"
            ));
        }
        for (key, h) in [("fd.h1", self.fd_h1), ("fd.h2", self.fd_h2)] {
            if !(h > 0.0 && h < 0.5) {
                return fail(format!("{key} must lie in (0, 0.5), got {h}"));
            }
        }
        let t = &self.tolerances;
        let all = [
            ("tol.recurrence", t.recurrence),
            ("tol.zero", t.zero),
            ("tol.kernel_abs", t.kernel_abs),
            ("tol.kernel_ratio", t.kernel_ratio),
            ("tol.orthogonality", t.orthogonality),
            ("tol.norm_rel", t.norm_rel),
            ("tol.norm_forms", t.norm_forms),
            ("tol.cross", t.cross),
            ("tol.completeness", t.completeness),
            ("tol.gram_schmidt", t.gram_schmidt),
            ("tol.timemt", t.timemt),
            ("tol.time_derivative", t.time_derivative),
            ("tol.wick", t.wick),
            ("tol.negative_control", t.negative_control),
            ("tol.symmetry", t.symmetry),
        ];
        for (key, v) in all {
            if !(v >= MIN_TOLERANCE) || !v.is_finite() {
                return fail(format!(
                    "{key} must be a finite value >= {MIN_TOLERANCE:e}, got {v}"
                ));
            }
        }
        Ok(())
    }

    pub fn rule(&self) -> Result<QuadratureRule> {
        QuadratureRule::new(self.quad_nr, self.quad_ntheta)
    }

    /// Rejects basis requests beyond the configured Bessel bounds.
    pub fn check_basis_bounds(&self, n_max: usize, m_max: usize) -> Result<()> {
        if n_max > self.bessel_n_max || m_max > self.bessel_m_max || m_max == 0 {
            return Err(Error::Config(format!(
                "requested n <= {n_max}, m <= {m_max} outside configured bounds n <= {}, 1 <= m <= {}",
                self.bessel_n_max, self.bessel_m_max
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn defaults_are_valid() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!((c.quad_nr, c.quad_ntheta), (200, 256));
        assert_eq!(c.tolerances.wick, 5e-5);
    }

    #[test]
    fn file_then_env() {
        let mut c = RunConfig::default();
        c.apply_text(
            "# comment\nquad.nr = 3\n\n tol.cross=2e-8 # trailing\nexpand.block_solver = strict\n",
            "t",
        )
        .unwrap();
        assert_eq!(c.quad_nr, 3);
        assert_eq!(c.tolerances.cross, 2e-8);
        assert_eq!(c.block_solver, BlockSolver::Strict);
        let env: HashMap<String, String> = [
            ("METAMONO_QUAD_NR".to_string(), "40".to_string()),
            ("METAMONO_BESSEL_M_MAX".into(), "9".into()),
        ]
        .into_iter()
        .collect();
        c.apply_env(|k| env.get(k).cloned()).unwrap();
        assert_eq!((c.quad_nr, c.bessel_m_max), (40, 9));
        assert_eq!(env_name("bessel.n_max"), "METAMONO_BESSEL_N_MAX");
    }

    #[test]
    fn rejects_bad_entries() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("quad.nr 3", "t").is_err());
        assert!(c.apply_text("nope = 1", "t").is_err());
        assert!(c.apply_text("fd.h1 = abc", "t").is_err());
        assert!(c.apply_text("expand.block_solver = lu", "t").is_err());

        let mut c = RunConfig::default();
        c.tolerances.symmetry = 1e-15;
        assert!(c.validate().is_err());
        assert!(RunConfig {
            fd_h1: -1.0,
            ..RunConfig::default()
        }
        .validate()
        .is_err());
        assert!(RunConfig {
            bessel_n_max: 99,
            ..RunConfig::default()
        }
        .validate()
        .is_err());
        assert!(RunConfig::default().check_basis_bounds(5, 0).is_err());
        assert!(RunConfig::default().check_basis_bounds(33, 1).is_err());
        RunConfig::default().check_basis_bounds(32, 64).unwrap();
    }
}
