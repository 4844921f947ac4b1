//! Orthogonality audit of the basic functions: closed-form inner products,
//! quadrature Gram matrices, and Gram–Schmidt for the coupled `n ∈ {0, 1}`
//! block.
//!
//! Pairs with `{n₁, n₂} ≠ {0, 1}` are orthogonal. Inside the block,
//!
//! ```text
//! ⟨F_{0,a}, F_{1,b}⟩ = −2π J₁(j_{0,a}) J₀(j_{1,b}) / (j_{0,a} − j_{1,b}) 𝐢
//! ‖F_{n,m}‖²        = 2π J²_{n−1}(j_{n,m}) = 2π J²_{n+1}(j_{n,m})
//! ```

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{BasisFunction, BasisIndex, BasisSeries};
use crate::bessel::{bessel_zero, jn_unchecked};
use crate::diskquad::{QuadratureRule, Samples};
use crate::error::{Error, Result};
use crate::quatnum::Quaternion;

/// Which way round a `{0,1}` cross product is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `⟨F_{0,m₁}, F_{1,m₂}⟩`
    ZeroOne,
    /// `⟨F_{1,m₁}, F_{0,m₂}⟩`
    OneZero,
}

/// Closed-form `{0,1}` cross product; always a pure `𝐢` multiple.
pub fn cross_inner_analytic(orientation: Orientation, m1: usize, m2: usize) -> Result<Quaternion> {
    let value = match orientation {
        Orientation::ZeroOne => {
            let a = bessel_zero(0, m1)?;
            let b = bessel_zero(1, m2)?;
            -2.0 * PI * jn_unchecked(1, a) * jn_unchecked(0, b) / (a - b)
        }
        Orientation::OneZero => {
            let a = bessel_zero(1, m1)?;
            let b = bessel_zero(0, m2)?;
            -2.0 * PI * jn_unchecked(0, a) * jn_unchecked(1, b) / (a - b)
        }
    };
    Ok(Quaternion::new(0.0, value, 0.0, 0.0))
}

/// `2π J²_{n−1}(j_{n,m})`, with `J_{-1} = −J_1`.
pub fn norm2_analytic(idx: BasisIndex) -> Result<f64> {
    let z = idx.zero()?;
    let lower = if idx.n == 0 {
        -jn_unchecked(1, z)
    } else {
        jn_unchecked(idx.n - 1, z)
    };
    Ok(2.0 * PI * lower * lower)
}

/// `2π J²_{n+1}(j_{n,m})`, the second closed form of the norm.
pub fn norm2_analytic_upper(idx: BasisIndex) -> Result<f64> {
    let z = idx.zero()?;
    Ok(2.0 * PI * jn_unchecked(idx.n + 1, z).powi(2))
}

/// Closed-form `⟨F_a, F_b⟩_ℍ` for any pair of basis indices.
pub fn inner_analytic(a: BasisIndex, b: BasisIndex) -> Result<Quaternion> {
    if a == b {
        return Ok(Quaternion::scalar(norm2_analytic(a)?));
    }
    match (a.n, b.n) {
        (0, 1) => cross_inner_analytic(Orientation::ZeroOne, a.m, b.m),
        (1, 0) => cross_inner_analytic(Orientation::OneZero, a.m, b.m),
        _ => Ok(Quaternion::ZERO),
    }
}

pub(crate) fn is_cross_block(a: BasisIndex, b: BasisIndex) -> bool {
    (a.n == 0 && b.n == 1) || (a.n == 1 && b.n == 0)
}

/// One Gram entry with its closed-form counterpart.
#[derive(Clone, Debug, Serialize)]
pub struct GramEntry {
    pub row: BasisIndex,
    pub col: BasisIndex,
    pub quadrature: Quaternion,
    pub analytic: Quaternion,
    pub abs_dev: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GramReport {
    pub indices: Vec<BasisIndex>,
    /// Row-major `indices.len()²` quadrature inner products.
    pub matrix: Vec<Quaternion>,
    pub analytic: Vec<Quaternion>,
    /// Largest `|⟨F_a, F_b⟩| / (‖F_a‖‖F_b‖)` over off-diagonal pairs outside the `{0,1}` block.
    pub max_offdiag_rel: f64,
    /// Largest `|⟨F_a, F_b⟩|` over the same pairs.
    pub max_offdiag_abs: f64,
    /// Largest componentwise deviation between quadrature and closed form in the `{0,1}` block.
    pub max_cross_dev: f64,
    /// Largest relative deviation of a diagonal entry from its closed-form norm.
    pub max_norm_rel_dev: f64,
}

impl GramReport {
    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> Quaternion {
        self.matrix[r * self.size() + c]
    }

    pub fn entries(&self) -> impl Iterator<Item = GramEntry> + '_ {
        let n = self.size();
        (0..n).flat_map(move |r| {
            (0..n).map(move |c| {
                let q = self.matrix[r * n + c];
                let a = self.analytic[r * n + c];
                GramEntry {
                    row: self.indices[r],
                    col: self.indices[c],
                    quadrature: q,
                    analytic: a,
                    abs_dev: (q - a).max_abs(),
                }
            })
        })
    }
}

/// Samples each listed basis function on the rule, in parallel.
pub fn sample_basis(indices: &[BasisIndex], rule: &QuadratureRule) -> Result<Vec<Samples>> {
    let funcs = indices
        .iter()
        .map(|&i| BasisFunction::new(i))
        .collect::<Result<Vec<_>>>()?;
    funcs.par_iter().map(|f| rule.sample(f)).collect()
}

/// Quadrature Gram matrix of `indices`, audited against the closed forms.
pub fn gram_matrix(indices: &[BasisIndex], rule: &QuadratureRule) -> Result<GramReport> {
    for (a, ia) in indices.iter().enumerate() {
        if indices[..a].contains(ia) {
            return Err(Error::Config(format!(
                "duplicate basis index {ia} in Gram request"
            )));
        }
    }
    let samples = sample_basis(indices, rule)?;
    let n = indices.len();
    let upper: Vec<(usize, usize, Quaternion)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|r| {
            let samples = &samples;
            (r..n).map(move |c| (r, c, rule.inner(&samples[r], &samples[c])))
        })
        .collect();
    let mut matrix = vec![Quaternion::ZERO; n * n];
    for (r, c, q) in upper {
        matrix[r * n + c] = q;
        matrix[c * n + r] = q.conj();
    }

    let mut analytic = vec![Quaternion::ZERO; n * n];
    for r in 0..n {
        for c in 0..n {
            analytic[r * n + c] = inner_analytic(indices[r], indices[c])?;
        }
    }

    let norms: Vec<f64> = (0..n)
        .map(|r| matrix[r * n + r].s.max(0.0).sqrt())
        .collect();
    let (mut max_rel, mut max_abs, mut max_cross, mut max_norm) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for r in 0..n {
        for c in 0..n {
            let (a, b) = (indices[r], indices[c]);
            let q = matrix[r * n + c];
            let want = analytic[r * n + c];
            if r == c {
                max_norm = max_norm.max((q.s - want.s).abs() / want.s);
            } else if is_cross_block(a, b) {
                max_cross = max_cross.max((q - want).max_abs());
            } else {
                max_abs = max_abs.max(q.abs());
                max_rel = max_rel.max(q.abs() / (norms[r] * norms[c]));
            }
        }
    }
    Ok(GramReport {
        indices: indices.to_vec(),
        matrix,
        analytic,
        max_offdiag_rel: max_rel,
        max_offdiag_abs: max_abs,
        max_cross_dev: max_cross,
        max_norm_rel_dev: max_norm,
    })
}

/// All `(n, m)` with `n ≤ n_max`, `1 ≤ m ≤ m_max`, `n` outer.
pub fn index_grid(n_max: usize, m_max: usize) -> Vec<BasisIndex> {
    (0..=n_max)
        .flat_map(|n| (1..=m_max).map(move |m| BasisIndex::new(n, m)))
        .collect()
}

/// The `{0,1}` block `F_{0,1}, F_{1,1}, …, F_{0,M}, F_{1,M}` in interleaved order.
pub fn block_indices(m_max: usize) -> Vec<BasisIndex> {
    (1..=m_max)
        .flat_map(|m| [BasisIndex::new(0, m), BasisIndex::new(1, m)])
        .collect()
}

/// Right-coefficient Gram–Schmidt on the `{0,1}` block using closed-form
/// inner products. Output `k` is `Σ_a F_a C[a][k]`.
pub fn orthonormalize_block(m_max: usize) -> Result<Vec<BasisSeries>> {
    if m_max == 0 {
        return Err(Error::Config("orthonormalize_block needs M >= 1".into()));
    }
    let idx = block_indices(m_max);
    let size = idx.len();
    let mut gram = vec![Quaternion::ZERO; size * size];
    for r in 0..size {
        for c in 0..size {
            gram[r * size + c] = inner_analytic(idx[r], idx[c])?;
        }
    }
    // ⟨Σ F_a c_a, Σ F_b d_b⟩ = Σ conj(c_a) G_ab d_b
    let inner = |c: &[Quaternion], d: &[Quaternion]| -> Quaternion {
        let mut acc = Quaternion::ZERO;
        for a in 0..size {
            if c[a] == Quaternion::ZERO {
                continue;
            }
            let mut row = Quaternion::ZERO;
            for b in 0..size {
                row += gram[a * size + b] * d[b];
            }
            acc += c[a].conj() * row;
        }
        acc
    };

    let mut basis: Vec<Vec<Quaternion>> = Vec::with_capacity(size);
    for k in 0..size {
        let mut v = vec![Quaternion::ZERO; size];
        v[k] = Quaternion::ONE;
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for e in &basis {
                let proj = inner(e, &v);
                for (vi, ei) in v.iter_mut().zip(e) {
                    *vi -= *ei * proj;
                }
            }
        }
        let norm2 = inner(&v, &v).s;
        if !(norm2 > 1e-12) {
            return Err(Error::Degenerate { index: k, norm2 });
        }
        let scale = 1.0 / norm2.sqrt();
        basis.push(v.into_iter().map(|q| q * scale).collect());
    }

    basis
        .into_iter()
        .map(|coeffs| {
            BasisSeries::from_terms(
                idx.iter()
                    .zip(coeffs)
                    .filter(|(_, c)| *c != Quaternion::ZERO)
                    .map(|(i, c)| (*i, c)),
            )
        })
        .collect()
}
