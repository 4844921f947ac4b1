//! Expansion of a metamonogenic field in the basic functions,
//! `f ≈ Σ_{n≤N} Σ_{m≤M} F_{n,m} c_{n,m}` with right coefficients.
//!
//! Orders `n ≥ 2` are mutually orthogonal and orthogonal to the rest, so
//! their coefficients are plain projections. The `{0,1}` block is coupled
//! through its cross products and is solved as a quaternionic Gram system,
//! rewritten as a real system of four times the size.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{BasisFunction, BasisIndex, BasisSeries, DiskPoint, FieldFunction};
use crate::diskquad::{QuadratureRule, Samples};
use crate::error::{Error, Result};
use crate::gram::{block_indices, inner_analytic, norm2_analytic};
use crate::quatnum::Quaternion;

/// Block systems with a larger 2-norm condition estimate are rejected.
pub const MAX_BLOCK_CONDITION: f64 = 1e12;

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionState {
    pub lambda: f64,
    pub n_max: usize,
    pub m_max: usize,
    /// Ordered `n` outer, `m` inner.
    pub coeffs: BTreeMap<BasisIndex, Quaternion>,
    pub residual_l2: f64,
    /// `‖f‖₂` of the expanded field, for relative residuals.
    pub field_norm: f64,
    /// Condition estimate of the `{0,1}` block system.
    pub block_condition: f64,
}

impl ExpansionState {
    pub fn coeff(&self, idx: BasisIndex) -> Quaternion {
        self.coeffs.get(&idx).copied().unwrap_or(Quaternion::ZERO)
    }

    pub fn series(&self) -> Result<BasisSeries> {
        BasisSeries::from_terms(self.coeffs.iter().map(|(i, c)| (*i, *c)))
    }

    pub fn relative_residual(&self) -> f64 {
        if self.field_norm == 0.0 {
            self.residual_l2
        } else {
            self.residual_l2 / self.field_norm
        }
    }
}

/// Evaluates the truncated sum `Σ F_{n,m}(p) c_{n,m}`.
pub fn reconstruct(state: &ExpansionState, p: &DiskPoint) -> Result<Quaternion> {
    Ok(state.series()?.eval(p))
}

/// Caches basis samples on one rule so repeated projections reuse them.
pub struct Projector<'r> {
    rule: &'r QuadratureRule,
    cache: HashMap<BasisIndex, Samples>,
    solver: BlockSolver,
}

impl<'r> Projector<'r> {
    pub fn new(rule: &'r QuadratureRule) -> Self {
        Self {
            rule,
            cache: HashMap::new(),
            solver: BlockSolver::Truncated,
        }
    }

    pub fn with_solver(mut self, solver: BlockSolver) -> Self {
        self.solver = solver;
        self
    }

    pub fn rule(&self) -> &QuadratureRule {
        self.rule
    }

    fn ensure(&mut self, indices: &[BasisIndex]) -> Result<()> {
        let missing: Vec<BasisIndex> = indices
            .iter()
            .copied()
            .filter(|i| !self.cache.contains_key(i))
            .collect();
        let funcs = missing
            .iter()
            .map(|&i| BasisFunction::new(i))
            .collect::<Result<Vec<_>>>()?;
        let sampled = funcs
            .par_iter()
            .map(|f| self.rule.sample(f))
            .collect::<Result<Vec<_>>>()?;
        self.cache.extend(missing.into_iter().zip(sampled));
        Ok(())
    }

    /// Samples of the truncated sum on the rule nodes.
    pub fn synthesize(&mut self, coeffs: &BTreeMap<BasisIndex, Quaternion>) -> Result<Samples> {
        let idx: Vec<BasisIndex> = coeffs.keys().copied().collect();
        self.ensure(&idx)?;
        let mut out = Samples::zeros(self.rule.len());
        for (i, c) in coeffs {
            out.add_right_scaled(&self.cache[i], *c);
        }
        Ok(out)
    }

    /// Projects pre-sampled field values onto the span with `n ≤ n_max`, `m ≤ m_max`.
    pub fn project_samples(
        &mut self,
        f: &Samples,
        lambda: f64,
        n_max: usize,
        m_max: usize,
    ) -> Result<ExpansionState> {
        if n_max < 1 || m_max < 1 {
            return Err(Error::Config(format!(
                "expansion needs N >= 1 and M >= 1 (got {n_max}, {m_max})"
            )));
        }
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::Domain(format!(
                "lambda must be a nonzero real, got {lambda}"
            )));
        }
        if f.len() != self.rule.len() {
            return Err(Error::Config(format!(
                "field has {} samples but the rule has {} nodes",
                f.len(),
                self.rule.len()
            )));
        }
        let block = block_indices(m_max);
        let upper: Vec<BasisIndex> = (2..=n_max)
            .flat_map(|n| (1..=m_max).map(move |m| BasisIndex::new(n, m)))
            .collect();
        self.ensure(&block)?;
        self.ensure(&upper)?;

        let mut coeffs = BTreeMap::new();
        let rule = self.rule;
        let cache = &self.cache;
        let orth: Vec<(BasisIndex, Quaternion)> = upper
            .par_iter()
            .map(|&i| Ok((i, rule.inner(&cache[&i], f) / norm2_analytic(i)?)))
            .collect::<Result<_>>()?;
        coeffs.extend(orth);

        let rhs: Vec<Quaternion> = block.par_iter().map(|i| rule.inner(&cache[i], f)).collect();
        let (solution, cond) = solve_block(self.solver, &block, cache, rule, &rhs, m_max)?;
        coeffs.extend(block.iter().copied().zip(solution));

        let recon = self.synthesize(&coeffs)?;
        let residual = self.rule.norm2_samples(&f.sub(&recon)).max(0.0).sqrt();
        Ok(ExpansionState {
            lambda,
            n_max,
            m_max,
            coeffs,
            residual_l2: residual,
            field_norm: self.rule.norm2_samples(f).max(0.0).sqrt(),
            block_condition: cond,
        })
    }

    pub fn project<F: FieldFunction + ?Sized>(
        &mut self,
        f: &F,
        lambda: f64,
        n_max: usize,
        m_max: usize,
    ) -> Result<ExpansionState> {
        let samples = self.rule.sample(f)?;
        self.project_samples(&samples, lambda, n_max, m_max)
    }
}

/// How the coupled `{0,1}` block system is solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockSolver {
    /// LU on the closed-form Gram matrix; rejects condition estimates above
    /// [`MAX_BLOCK_CONDITION`].
    Strict,
    /// Least squares through a truncated eigendecomposition of the
    /// quadrature Gram matrix, discarding directions below
    /// [`TRUNCATION_RCOND`] of the largest eigenvalue.
    Truncated,
}

/// Relative eigenvalue cutoff of [`BlockSolver::Truncated`].
pub const TRUNCATION_RCOND: f64 = 1e-14;

fn real_system(
    gram: impl Fn(usize, usize) -> Result<Quaternion>,
    size: usize,
) -> Result<DMatrix<f64>> {
    let mut a = DMatrix::<f64>::zeros(4 * size, 4 * size);
    for r in 0..size {
        for c in 0..size {
            let g = gram(r, c)?;
            if g == Quaternion::ZERO {
                continue;
            }
            for (u, row) in g.left_matrix().iter().enumerate() {
                for (v, &x) in row.iter().enumerate() {
                    a[(4 * r + u, 4 * c + v)] = x;
                }
            }
        }
    }
    Ok(a)
}

fn unpack(x: &DVector<f64>) -> Vec<Quaternion> {
    (0..x.len() / 4)
        .map(|k| Quaternion::new(x[4 * k], x[4 * k + 1], x[4 * k + 2], x[4 * k + 3]))
        .collect()
}

/// Solves `Σ_b G_ab c_b = r_a` over the interleaved block; returns the
/// coefficients and a condition estimate of `G`.
fn solve_block(
    solver: BlockSolver,
    block: &[BasisIndex],
    samples: &HashMap<BasisIndex, Samples>,
    rule: &QuadratureRule,
    rhs: &[Quaternion],
    m_max: usize,
) -> Result<(Vec<Quaternion>, f64)> {
    let size = block.len();
    let b = DVector::from_iterator(4 * size, rhs.iter().flat_map(|q| q.to_array()));
    match solver {
        BlockSolver::Strict => {
            let a = real_system(|r, c| inner_analytic(block[r], block[c]), size)?;
            let sv = a.clone().singular_values();
            let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| {
                (hi.max(s), lo.min(s))
            });
            let cond = if smin > 0.0 {
                smax / smin
            } else {
                f64::INFINITY
            };
            if !(cond <= MAX_BLOCK_CONDITION) {
                return Err(Error::IllConditioned { m: m_max, cond });
            }
            let x = a
                .lu()
                .solve(&b)
                .ok_or(Error::IllConditioned { m: m_max, cond })?;
            Ok((unpack(&x), cond))
        }
        BlockSolver::Truncated => {
            let a = real_system(
                |r, c| Ok(rule.inner(&samples[&block[r]], &samples[&block[c]])),
                size,
            )?;
            let eig = a.symmetric_eigen();
            let top = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v));
            let cutoff = TRUNCATION_RCOND * top;
            let mut low = f64::INFINITY;
            let mut x = DVector::<f64>::zeros(4 * size);
            for (k, &ev) in eig.eigenvalues.iter().enumerate() {
                low = low.min(ev.abs());
                if ev > cutoff {
                    let v = eig.eigenvectors.column(k);
                    x += v * (v.dot(&b) / ev);
                }
            }
            let cond = if low > 0.0 { top / low } else { f64::INFINITY };
            Ok((unpack(&x), cond))
        }
    }
}

/// One-shot projection of `f` onto the truncated span.
pub fn project<F: FieldFunction + ?Sized>(
    f: &F,
    lambda: f64,
    n_max: usize,
    m_max: usize,
    rule: &QuadratureRule,
) -> Result<ExpansionState> {
    Projector::new(rule).project(f, lambda, n_max, m_max)
}

/// Residuals `‖f − Σ F c‖₂` for each truncation `M` in `m_list`.
pub fn convergence_profile<F: FieldFunction + ?Sized>(
    f: &F,
    lambda: f64,
    n_max: usize,
    m_list: &[usize],
    rule: &QuadratureRule,
) -> Result<Vec<(usize, f64)>> {
    if m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!(
            "M list must be strictly increasing: {m_list:?}"
        )));
    }
    let samples = rule.sample(f)?;
    let mut projector = Projector::new(rule);
    m_list
        .iter()
        .map(|&m| {
            Ok((
                m,
                projector
                    .project_samples(&samples, lambda, n_max, m)?
                    .residual_l2,
            ))
        })
        .collect()
}
