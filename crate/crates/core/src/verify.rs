//! The verification suite behind `metamono verify`: every check family
//! measures a deviation, compares it with its configured tolerance and
//! reports the outcome in a machine-readable form.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{
    dirac_residual, BasisFunction, BasisIndex, DiskPoint, FieldFunction, StandardFunction,
};
use crate::bessel::{bessel_zero, jn_prime_unchecked, jn_unchecked};
use crate::config::RunConfig;
use crate::diskquad::QuadratureRule;
use crate::error::{Error, Result};
use crate::evolution::{
    high_mode_emergence, initial_time_derivative, square_grid, timemt_residual, wick_wave_residual,
    FnTimeField, TimeField, WaveState,
};
use crate::expansion::Projector;
use crate::gram::{
    gram_matrix, index_grid, norm2_analytic, norm2_analytic_upper, orthonormalize_block, GramReport,
};
use crate::quatnum::Quaternion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Bessel,
    Kernel,
    Orthogonality,
    Norms,
    Cross,
    Completeness,
    GramSchmidt,
    Evolution,
    Symmetry,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Bessel,
        Family::Kernel,
        Family::Orthogonality,
        Family::Norms,
        Family::Cross,
        Family::Completeness,
        Family::GramSchmidt,
        Family::Evolution,
        Family::Symmetry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bessel => "bessel",
            Family::Kernel => "kernel",
            Family::Orthogonality => "orthogonality",
            Family::Norms => "norms",
            Family::Cross => "cross",
            Family::Completeness => "completeness",
            Family::GramSchmidt => "gram_schmidt",
            Family::Evolution => "evolution",
            Family::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a family by its snake_case name.
pub fn parse_family(s: &str) -> Result<Family> {
    Family::ALL
        .into_iter()
        .find(|f| f.name() == s)
        .ok_or_else(|| {
            let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
            Error::Config(format!(
                "unknown check family `{s}` (expected one of {})",
                names.join(", ")
            ))
        })
}

/// Outcome of one check. `measured` is `None` when the check errored.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub family: Family,
    pub name: String,
    /// `below`: pass iff measured < threshold; `above`: pass iff measured > threshold;
    /// `band`: pass iff |measured − 4| ≤ threshold · 4.
    pub kind: &'static str,
    pub measured: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
    pub error: Option<String>,
}

impl CheckResult {
    fn below(family: Family, name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            family,
            name: name.into(),
            kind: "below",
            measured: Some(measured),
            threshold,
            passed: measured < threshold,
            error: None,
        }
    }

    fn above(family: Family, name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            kind: "above",
            passed: measured > threshold,
            ..Self::below(family, name, measured, threshold)
        }
    }

    fn ratio_band(family: Family, name: impl Into<String>, ratio: f64, rel: f64) -> Self {
        Self {
            kind: "band",
            passed: (ratio - 4.0).abs() <= rel * 4.0,
            ..Self::below(family, name, ratio, rel)
        }
    }

    fn failed(family: Family, name: impl Into<String>, err: Error) -> Self {
        Self {
            family,
            name: name.into(),
            kind: "error",
            measured: None,
            threshold: f64::NAN,
            passed: false,
            error: Some(err.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyTiming {
    pub family: Family,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub config: RunConfig,
    pub checks: Vec<CheckResult>,
    /// Wall-clock time per family; excluded from the JSON so reports stay reproducible.
    #[serde(skip)]
    pub timings: Vec<FamilyTiming>,
}

impl VerificationReport {
    pub fn family(&self, f: Family) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(move |c| c.family == f)
    }

    pub fn family_passed(&self, f: Family) -> bool {
        self.family(f).all(|c| c.passed) && self.family(f).next().is_some()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Symmetric `n × n` grid over `[-a, a]²`.
pub fn interior_grid(n: usize, a: f64) -> Vec<DiskPoint> {
    let c = |i: usize| -a + 2.0 * a * i as f64 / (n - 1) as f64;
    (0..n)
        .flat_map(|r| (0..n).map(move |col| DiskPoint::cartesian(c(col), c(r))))
        .collect()
}

/// Runs the selected families (all when `only` is empty).
pub fn run_verify(config: &RunConfig, only: &[Family]) -> VerificationReport {
    let selected: Vec<Family> = Family::ALL
        .into_iter()
        .filter(|f| only.is_empty() || only.contains(f))
        .collect();
    let mut checks = Vec::new();
    let mut timings = Vec::new();
    let rule = config.rule();
    let mut gram: Option<std::result::Result<GramReport, String>> = None;
    for family in selected {
        let start = Instant::now();
        let found = match (&rule, family) {
            (Err(e), _) => vec![CheckResult::failed(
                family,
                "quadrature rule",
                Error::Config(e.to_string()),
            )],
            (_, Family::Bessel) => bessel_checks(config),
            (_, Family::Kernel) => kernel_checks(config),
            (Ok(rule), Family::Orthogonality | Family::Norms | Family::Cross) => {
                let g = gram.get_or_insert_with(|| {
                    gram_matrix(&index_grid(6, 4), rule).map_err(|e| e.to_string())
                });
                match g {
                    Ok(g) => gram_checks(config, family, g),
                    Err(e) => vec![CheckResult::failed(
                        family,
                        "gram matrix",
                        Error::Config(e.clone()),
                    )],
                }
            }
            (Ok(rule), Family::Completeness) => completeness_checks(config, rule),
            (Ok(rule), Family::GramSchmidt) => gram_schmidt_checks(config, rule),
            (_, Family::Evolution) => evolution_checks(config),
            (_, Family::Symmetry) => symmetry_checks(config),
        };
        checks.extend(found);
        timings.push(FamilyTiming {
            family,
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    VerificationReport {
        passed,
        config: config.clone(),
        checks,
        timings,
    }
}

fn guard(family: Family, name: &str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult::failed(family, name, e))
}

fn bessel_checks(cfg: &RunConfig) -> Vec<CheckResult> {
    let tol = &cfg.tolerances;
    let xs: Vec<f64> = (0..500).map(|i| 0.1 + 49.9 * i as f64 / 499.0).collect();
    let (three_term, derivative) = xs
        .par_iter()
        .map(|&x| {
            let j: Vec<f64> = (0..=21).map(|n| jn_unchecked(n, x)).collect();
            let mut a = 0.0f64;
            let mut b = 0.0f64;
            for n in 1..=20 {
                a = a.max((2.0 * n as f64 / x * j[n] - j[n - 1] - j[n + 1]).abs());
            }
            // fourth-order central difference as an independent derivative
            let h = 1e-3;
            for n in 0..=20 {
                let fd = (8.0 * (jn_unchecked(n, x + h) - jn_unchecked(n, x - h))
                    - (jn_unchecked(n, x + 2.0 * h) - jn_unchecked(n, x - 2.0 * h)))
                    / (12.0 * h);
                b = b.max((jn_prime_unchecked(n, x) - fd).abs());
            }
            (a, b)
        })
        .reduce(|| (0.0, 0.0), |p, q| (p.0.max(q.0), p.1.max(q.1)));
    let zeros = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for n in 0..=10 {
            for m in 1..=10 {
                worst = worst.max(jn_unchecked(n, bessel_zero(n, m)?).abs());
            }
        }
        Ok(worst)
    })();
    vec![
        CheckResult::below(
            Family::Bessel,
            "three-term recurrence, n <= 20, 500 x in [0.1, 50]",
            three_term,
            tol.recurrence,
        ),
        CheckResult::below(
            Family::Bessel,
            "derivative recurrence vs difference quotient",
            derivative,
            tol.recurrence,
        ),
        guard(
            Family::Bessel,
            "|J_n(j_nm)|, n <= 10, m <= 10",
            zeros.map(|z| {
                CheckResult::below(Family::Bessel, "|J_n(j_nm)|, n <= 10, m <= 10", z, tol.zero)
            }),
        ),
    ]
}

fn max_dirac_residual(f: &BasisFunction, grid: &[DiskPoint], h: f64) -> Result<f64> {
    grid.iter()
        .map(|p| dirac_residual(f, f.zero(), p, h).map(|q| q.abs()))
        .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))
}

fn kernel_checks(cfg: &RunConfig) -> Vec<CheckResult> {
    let tol = &cfg.tolerances;
    let grid = interior_grid(21, 0.7);
    let indices: Vec<BasisIndex> = (0..=5)
        .flat_map(|n| (1..=3).map(move |m| BasisIndex::new(n, m)))
        .collect();
    let rows: Vec<Result<(BasisIndex, f64, f64, f64)>> = indices
        .par_iter()
        .map(|&idx| {
            let f = BasisFunction::new(idx)?;
            let coarse = max_dirac_residual(&f, &grid, cfg.fd_h2)?;
            let fine = max_dirac_residual(&f, &grid, cfg.fd_h2 / 2.0)?;
            let small = max_dirac_residual(&f, &grid, cfg.fd_h1)?;
            Ok((idx, coarse, fine, small))
        })
        .collect();
    let mut out = Vec::new();
    for (idx, row) in indices.iter().zip(rows) {
        match row {
            Ok((_, coarse, fine, small)) => {
                out.push(CheckResult::ratio_band(
                    Family::Kernel,
                    format!(
                        "F{idx} residual ratio h={:e} / h={:e}",
                        cfg.fd_h2,
                        cfg.fd_h2 / 2.0
                    ),
                    coarse / fine,
                    tol.kernel_ratio,
                ));
                out.push(CheckResult::below(
                    Family::Kernel,
                    format!("F{idx} max |(D + j)F| at h={:e}", cfg.fd_h1),
                    small,
                    tol.kernel_abs,
                ));
            }
            Err(e) => out.push(CheckResult::failed(Family::Kernel, format!("F{idx}"), e)),
        }
    }
    out
}

fn gram_checks(cfg: &RunConfig, family: Family, g: &GramReport) -> Vec<CheckResult> {
    let tol = &cfg.tolerances;
    match family {
        Family::Orthogonality => vec![CheckResult::below(
            family,
            "max |<F,F'>| / (|F||F'|), n <= 6, m <= 4, outside {0,1}",
            g.max_offdiag_rel,
            tol.orthogonality,
        )],
        Family::Norms => {
            let forms = g
                .indices
                .iter()
                .map(|&i| {
                    Ok((norm2_analytic(i)? - norm2_analytic_upper(i)?).abs() / norm2_analytic(i)?)
                })
                .try_fold(0.0f64, |m, r: Result<f64>| r.map(|r| m.max(r)));
            vec![
                CheckResult::below(
                    family,
                    "quadrature |F_nm|^2 vs 2 pi J_{n-1}^2, relative",
                    g.max_norm_rel_dev,
                    tol.norm_rel,
                ),
                guard(
                    family,
                    "J_{n-1} vs J_{n+1} closed forms",
                    forms.map(|d| {
                        CheckResult::below(
                            family,
                            "J_{n-1} vs J_{n+1} closed forms",
                            d,
                            tol.norm_forms,
                        )
                    }),
                ),
            ]
        }
        Family::Cross => vec![CheckResult::below(
            family,
            "{0,1} cross products vs closed form, componentwise, m1, m2 <= 4",
            g.max_cross_dev,
            tol.cross,
        )],
        _ => unreachable!("not a gram family"),
    }
}

fn completeness_checks(cfg: &RunConfig, rule: &QuadratureRule) -> Vec<CheckResult> {
    let tol = &cfg.tolerances;
    let ms = [5, 10, 20, 40];
    let mut out = Vec::new();
    for (n, lambda) in [(0usize, 1.7), (1, 2.3)] {
        let name = format!("F{n}[{lambda}]");
        let run = (|| -> Result<(Vec<f64>, f64)> {
            let f = StandardFunction::new(n, lambda)?;
            let samples = rule.sample(&f)?;
            let mut proj = Projector::new(rule).with_solver(cfg.block_solver);
            let mut res = Vec::new();
            let mut norm = 0.0;
            for &m in &ms {
                let st = proj.project_samples(&samples, lambda, 1, m)?;
                norm = st.field_norm;
                res.push(st.residual_l2);
            }
            Ok((res, norm))
        })();
        match run {
            Ok((res, norm)) => {
                let rise = res
                    .windows(2)
                    .map(|w| (w[1] - w[0]) / norm)
                    .fold(f64::NEG_INFINITY, f64::max);
                out.push(CheckResult {
                    kind: "below_or_equal",
                    passed: rise <= 0.0,
                    ..CheckResult::below(
                        Family::Completeness,
                        format!(
                            "{name} largest residual increase over M = 5, 10, 20, 40, relative"
                        ),
                        rise,
                        0.0,
                    )
                });
                out.push(CheckResult::below(
                    Family::Completeness,
                    format!("{name} residual at M = 40, relative to |f|"),
                    res[res.len() - 1] / norm,
                    tol.completeness,
                ));
            }
            Err(e) => out.push(CheckResult::failed(Family::Completeness, name, e)),
        }
    }
    out
}

fn gram_schmidt_checks(cfg: &RunConfig, rule: &QuadratureRule) -> Vec<CheckResult> {
    let tol = cfg.tolerances.gram_schmidt;
    let fam = Family::GramSchmidt;
    let run = (|| -> Result<(f64, f64)> {
        let basis = orthonormalize_block(4)?;
        let samples = basis
            .iter()
            .map(|b| rule.sample(b))
            .collect::<Result<Vec<_>>>()?;
        let mut identity_dev = 0.0f64;
        for (r, a) in samples.iter().enumerate() {
            for (c, b) in samples.iter().enumerate() {
                let want = if r == c {
                    Quaternion::ONE
                } else {
                    Quaternion::ZERO
                };
                identity_dev = identity_dev.max((rule.inner(a, b) - want).max_abs());
            }
        }
        let upper: Vec<BasisIndex> = (2..=6)
            .flat_map(|n| (1..=4).map(move |m| BasisIndex::new(n, m)))
            .collect();
        let others = upper
            .par_iter()
            .map(|&i| rule.sample(&BasisFunction::new(i)?))
            .collect::<Result<Vec<_>>>()?;
        let mut cross = 0.0f64;
        for a in &samples {
            for b in &others {
                cross = cross.max(rule.inner(a, b).abs() / rule.norm2_samples(b).sqrt());
            }
        }
        Ok((identity_dev, cross))
    })();
    match run {
        Ok((id, cross)) => vec![
            CheckResult::below(
                fam,
                "orthonormalized {0,1} block (M = 4): Gram vs identity",
                id,
                tol,
            ),
            CheckResult::below(
                fam,
                "orthonormalized block vs F_nm (2 <= n <= 6, m <= 4), normalized",
                cross,
                tol,
            ),
        ],
        Err(e) => vec![CheckResult::failed(fam, "orthonormalize_block(4)", e)],
    }
}

fn three_mode() -> BTreeMap<BasisIndex, Quaternion> {
    [
        (BasisIndex::new(0, 1), Quaternion::new(0.7, -0.2, 0.1, 0.4)),
        (BasisIndex::new(1, 1), Quaternion::new(-0.3, 0.5, 0.25, 0.0)),
        (BasisIndex::new(2, 1), Quaternion::new(0.1, 0.0, -0.6, 0.35)),
    ]
    .into_iter()
    .collect()
}

/// Fixed interior probe points with room for every stencil used below.
pub const PROBE_POINTS: [(f64, f64); 4] = [(0.4, 0.1), (-0.3, 0.5), (0.1, -0.6), (-0.55, -0.35)];

fn evolution_checks(cfg: &RunConfig) -> Vec<CheckResult> {
    let tol = &cfg.tolerances;
    let fam = Family::Evolution;
    let h = cfg.fd_h1;
    let probes: Vec<DiskPoint> = PROBE_POINTS
        .iter()
        .map(|&(x, y)| DiskPoint::cartesian(x, y))
        .collect();
    let mut out = Vec::new();

    let single: BTreeMap<_, _> = [(BasisIndex::new(1, 1), Quaternion::ONE)]
        .into_iter()
        .collect();
    for (label, coeffs) in [
        ("single mode (1,1)", single),
        ("3-mode state", three_mode()),
    ] {
        for t in [0.0, 0.2] {
            let name = format!("{label} timemt residual at t = {t}, h = {h:e}");
            let r = WaveState::new(&coeffs, 1.0).and_then(|s| {
                probes
                    .iter()
                    .map(|p| timemt_residual(&s, p, t, h, h).map(|q| q.abs()))
                    .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))
            });
            out.push(guard(
                fam,
                &name,
                r.map(|v| CheckResult::below(fam, name.clone(), v, tol.timemt)),
            ));
        }
    }

    let name = "initial time derivative vs centred difference, h = 1e-5";
    let r = WaveState::new(&three_mode(), 1.0).map(|s| {
        let ht = 1e-5;
        probes
            .iter()
            .chain(std::iter::once(&DiskPoint::ORIGIN))
            .map(|p| {
                let fd = (s.eval_at(p, ht) - s.eval_at(p, -ht)) / (2.0 * ht);
                (initial_time_derivative(&s, p) - fd).abs()
            })
            .fold(0.0f64, f64::max)
    });
    out.push(guard(
        fam,
        name,
        r.map(|v| CheckResult::below(fam, name, v, tol.time_derivative)),
    ));

    let hw = cfg.fd_h2;
    let name = format!("wick residual, mode (2,1), t = 0.1, h = {hw:e}, max over 21x21 grid");
    let single21: BTreeMap<_, _> = [(BasisIndex::new(2, 1), Quaternion::ONE)]
        .into_iter()
        .collect();
    let grid = interior_grid(21, 0.7);
    let r = WaveState::new(&single21, 1.0).and_then(|s| {
        grid.par_iter()
            .map(|p| {
                wick_wave_residual(&s, p, 0.1, hw)
                    .map(|c| c.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            })
            .collect::<Result<Vec<f64>>>()
            .map(|v| v.into_iter().fold(0.0, f64::max))
    });
    out.push(guard(
        fam,
        &name,
        r.map(|v| CheckResult::below(fam, name.clone(), v, tol.wick)),
    ));

    // negative controls
    let p = DiskPoint::cartesian(0.4, 0.1);
    let name = "negative control: F(2,1) with lambda = 4 instead of j_21, |(D + lambda)F|";
    let r = BasisFunction::new(BasisIndex::new(2, 1))
        .and_then(|f| dirac_residual(&f, 4.0, &p, h))
        .map(|q| q.abs());
    out.push(guard(
        fam,
        name,
        r.map(|v| CheckResult::above(fam, name, v, tol.negative_control)),
    ));

    let wrong = BasisFunction::new(BasisIndex::new(2, 1)).map(|f| FnTimeField {
        f: move |q: &DiskPoint, t: f64| f.eval(q) * (2.0 * t).exp(),
        k: 1.0,
    });
    let name = "negative control: F(2,1) e^{2t}, max wick component";
    let r = wrong
        .as_ref()
        .map_err(|e| Error::Config(e.to_string()))
        .and_then(|v| {
            wick_wave_residual(v, &p, 0.1, hw).map(|c| c.iter().fold(0.0f64, |m, x| m.max(x.abs())))
        });
    out.push(guard(
        fam,
        name,
        r.map(|v| CheckResult::above(fam, name, v, tol.negative_control)),
    ));
    let name = "negative control: F(2,1) e^{2t}, |(D + d/dt)v|";
    let r = wrong
        .as_ref()
        .map_err(|e| Error::Config(e.to_string()))
        .and_then(|v| timemt_residual(v, &p, 0.1, h, h))
        .map(|q| q.abs());
    out.push(guard(
        fam,
        name,
        r.map(|v| CheckResult::above(fam, name, v, tol.negative_control)),
    ));
    out
}

fn symmetry_checks(cfg: &RunConfig) -> Vec<CheckResult> {
    let fam = Family::Symmetry;
    let side = 41;
    let grid = square_grid(side, side);
    let dev = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for n in 0..=5 {
            for m in 1..=3 {
                let f = BasisFunction::new(BasisIndex::new(n, m))?;
                let vals: Vec<Quaternion> = grid.iter().map(|p| f.eval(p)).collect();
                for r in 0..side {
                    for c in 0..side {
                        if !grid[r * side + c].in_closed_disk() {
                            continue;
                        }
                        let a = vals[r * side + c];
                        let b = vals[(side - 1 - r) * side + c];
                        // θ ↦ −θ: scalar and 𝐢 parts even, 𝐣 and 𝐤 parts odd
                        let d = [a.s - b.s, a.i - b.i, a.j + b.j, a.k + b.k];
                        worst = d.iter().fold(worst, |w, x| w.max(x.abs()));
                    }
                }
            }
        }
        Ok(worst)
    })();
    let name = "F_nm(x, -y) parity (s, i even; j, k odd), n <= 5, m <= 3, 41x41 grid";
    let mut out = vec![guard(
        fam,
        name,
        dev.map(|d| CheckResult::below(fam, name, d, cfg.tolerances.symmetry)),
    )];

    let name = "high mode (6,3) at 1e-3 next to (0,1): emergence time t* of a 10% share";
    let disk: Vec<DiskPoint> = square_grid(41, 41)
        .into_iter()
        .filter(|p| p.in_closed_disk())
        .collect();
    let times: Vec<f64> = (0..=300).map(|i| i as f64 * 0.01).collect();
    let r = high_mode_emergence(
        (BasisIndex::new(0, 1), Quaternion::ONE),
        (BasisIndex::new(6, 3), Quaternion::scalar(1e-3)),
        1.0,
        &disk,
        &times,
        0.1,
    )
    .map(|rep| CheckResult::above(fam, name, rep.t_star.unwrap_or(f64::NAN), 0.0));
    out.push(guard(fam, name, r));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
            assert_eq!(
                serde_json::to_string(&f).unwrap(),
                format!("\"{}\"", f.name())
            );
        }
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn only_filters_families() {
        let rep = run_verify(&RunConfig::default(), &[Family::Norms]);
        assert!(rep.checks.iter().all(|c| c.family == Family::Norms));
        assert!(rep.family_passed(Family::Norms), "{}", rep.to_json());
        assert!(rep.passed);
    }

    #[test]
    fn under_resolved_rule_fails_orthogonality() {
        let cfg = RunConfig {
            quad_nr: 3,
            ..RunConfig::default()
        };
        let rep = run_verify(&cfg, &[Family::Orthogonality]);
        assert!(!rep.passed);
        let c = rep.family(Family::Orthogonality).next().unwrap();
        assert!(c.measured.unwrap() > 1e-8);
    }

    #[test]
    fn errors_become_failed_checks() {
        let cfg = RunConfig {
            quad_nr: 1,
            ..RunConfig::default()
        };
        let rep = run_verify(&cfg, &[Family::Cross]);
        assert!(!rep.passed);
        assert!(rep.checks[0].error.is_some());
        let json = rep.to_json();
        assert!(json.contains("\"measured\": null"));
    }

    #[test]
    fn symmetry_and_bessel_pass() {
        let rep = run_verify(&RunConfig::default(), &[Family::Bessel, Family::Symmetry]);
        assert!(rep.passed, "{}", rep.to_json());
    }
}
