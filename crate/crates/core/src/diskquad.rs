//! Tensor quadrature on the unit disk and the ℍ-valued inner product
//! `⟨f, g⟩ = ∫∫ conj(f) g dx dy`.
//!
//! Radial nodes are Gauss–Legendre on (0, 1); the angle uses the uniform
//! periodic rule, which is exact for trigonometric polynomials of degree
//! below `Nθ`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::basis::{DiskPoint, FieldFunction};
use crate::error::{Error, Result};
use crate::quatnum::{QuatAccumulator, Quaternion};

pub const DEFAULT_NR: usize = 200;
pub const DEFAULT_NTHETA: usize = 256;

/// Gauss–Legendre nodes and weights on (-1, 1), nodes ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct Node {
    pub point: DiskPoint,
    pub weight: f64,
}

/// Radial Gauss nodes times uniform angular nodes, weights carrying the
/// Jacobian `ρ`.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    radial: Vec<(f64, f64)>,
    ntheta: usize,
    nodes: Vec<Node>,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::new(DEFAULT_NR, DEFAULT_NTHETA).expect("default rule is valid")
    }
}

impl QuadratureRule {
    pub fn new(nr: usize, ntheta: usize) -> Result<Self> {
        if nr < 2 || ntheta < 4 {
            return Err(Error::Config(format!(
                "quadrature needs nr >= 2 and ntheta >= 4 (got {nr}, {ntheta})"
            )));
        }
        let radial: Vec<(f64, f64)> = gauss_legendre(nr)
            .into_iter()
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        let dtheta = 2.0 * PI / ntheta as f64;
        let mut nodes = Vec::with_capacity(nr * ntheta);
        for &(rho, w) in &radial {
            for l in 0..ntheta {
                nodes.push(Node {
                    point: DiskPoint::polar(rho, dtheta * l as f64),
                    weight: w * rho * dtheta,
                });
            }
        }
        Ok(Self {
            radial,
            ntheta,
            nodes,
        })
    }

    /// `(ρ_k, w_k)` for `∫₀¹ g(ρ) dρ`; no Jacobian included.
    pub fn radial_nodes(&self) -> &[(f64, f64)] {
        &self.radial
    }

    pub fn nr(&self) -> usize {
        self.radial.len()
    }

    pub fn ntheta(&self) -> usize {
        self.ntheta
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        let mut acc = QuatAccumulator::new();
        for n in &self.nodes {
            acc.add(Quaternion::scalar(n.weight));
        }
        acc.total().s
    }

    /// Evaluates `f` at every node.
    pub fn sample<F: FieldFunction + ?Sized>(&self, f: &F) -> Result<Samples> {
        let values: Vec<Quaternion> = self.nodes.par_iter().map(|n| f.eval(&n.point)).collect();
        if let Some(bad) = values.iter().position(|q| !q.is_finite()) {
            let p = self.nodes[bad].point;
            return Err(Error::NonFinite { x: p.x, y: p.y });
        }
        Ok(Samples { values })
    }

    /// Integrates a real function of the node.
    pub fn integrate_scalar(&self, f: impl Fn(&DiskPoint) -> f64) -> f64 {
        let mut acc = QuatAccumulator::new();
        for n in &self.nodes {
            acc.add(Quaternion::scalar(n.weight * f(&n.point)));
        }
        acc.total().s
    }

    /// Discrete `⟨f, g⟩_ℍ` on pre-sampled values.
    pub fn inner(&self, f: &Samples, g: &Samples) -> Quaternion {
        debug_assert_eq!(f.len(), self.len());
        debug_assert_eq!(g.len(), self.len());
        let mut acc = QuatAccumulator::new();
        for ((n, a), b) in self.nodes.iter().zip(&f.values).zip(&g.values) {
            acc.add(a.conj_mul(*b) * n.weight);
        }
        acc.total()
    }

    pub fn norm2_samples(&self, f: &Samples) -> f64 {
        self.inner(f, f).s
    }
}

/// Field values on the nodes of one [`QuadratureRule`], in node order.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    pub values: Vec<Quaternion>,
}

impl Samples {
    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![Quaternion::ZERO; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `self += other * q` (right coefficient).
    pub fn add_right_scaled(&mut self, other: &Samples, q: Quaternion) {
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += *b * q;
        }
    }

    pub fn right_mul(&self, q: Quaternion) -> Samples {
        Samples {
            values: self.values.iter().map(|v| *v * q).collect(),
        }
    }

    pub fn sub(&self, other: &Samples) -> Samples {
        Samples {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

/// `⟨f, g⟩_ℍ` by the given rule.
pub fn inner_product_h<F, G>(f: &F, g: &G, rule: &QuadratureRule) -> Result<Quaternion>
where
    F: FieldFunction + ?Sized,
    G: FieldFunction + ?Sized,
{
    Ok(rule.inner(&rule.sample(f)?, &rule.sample(g)?))
}

/// `‖f‖² = Sc ⟨f, f⟩_ℍ`.
pub fn norm2<F: FieldFunction + ?Sized>(f: &F, rule: &QuadratureRule) -> Result<f64> {
    let s = rule.sample(f)?;
    Ok(rule.norm2_samples(&s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisFunction, BasisIndex};
    use crate::bessel::{bessel_zero, jn_unchecked};
    use proptest::prelude::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = gauss_legendre(7);
        let s: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((s - 2.0).abs() < 1e-14);
        let x12: f64 = rule.iter().map(|&(x, w)| w * x.powi(12)).sum();
        assert!((x12 - 2.0 / 13.0).abs() < 1e-14);
        assert!(rule.windows(2).all(|p| p[0].0 < p[1].0));
    }

    #[test]
    fn area_and_moments() {
        let rule = QuadratureRule::new(50, 64).unwrap();
        assert!((rule.total_weight() - PI).abs() < 1e-12);
        let m = rule.integrate_scalar(|p| p.x * p.x);
        assert!((m - PI / 4.0).abs() < 1e-10);
        let c = rule.integrate_scalar(|p| p.theta.cos());
        assert!(c.abs() < 1e-13);
        let r = rule.radial_nodes();
        assert!(r.first().unwrap().0 > 0.0 && r.last().unwrap().0 < 1.0);
        assert!(r.windows(2).all(|p| p[0].0 < p[1].0));
    }

    #[test]
    fn rejects_tiny_rules() {
        assert!(QuadratureRule::new(1, 8).is_err());
        assert!(QuadratureRule::new(4, 3).is_err());
    }

    #[test]
    fn basis_norms_and_orthogonality() {
        let rule = QuadratureRule::default();
        let f21 = BasisFunction::new(BasisIndex::new(2, 1)).unwrap();
        let ip = inner_product_h(&f21, &f21, &rule).unwrap();
        let want = 2.0 * PI * jn_unchecked(1, bessel_zero(2, 1).unwrap()).powi(2);
        assert!((ip.s - want).abs() < 1e-8);
        assert!(ip.vec_part().max_abs() < 1e-15);

        let f01 = BasisFunction::new(BasisIndex::new(0, 1)).unwrap();
        let f31 = BasisFunction::new(BasisIndex::new(3, 1)).unwrap();
        assert!(inner_product_h(&f01, &f31, &rule).unwrap().abs() < 1e-10);

        let n01 = norm2(&f01, &rule).unwrap();
        assert!((n01 - 1.69340718362923044373164116694).abs() < 1e-6 * 1.6934);
        assert_eq!(
            norm2(&|_: &DiskPoint| Quaternion::ZERO, &rule).unwrap(),
            0.0
        );
    }

    #[test]
    fn non_finite_values_are_reported() {
        let rule = QuadratureRule::new(4, 8).unwrap();
        let bad = |p: &DiskPoint| Quaternion::scalar(if p.rho > 0.5 { f64::NAN } else { 1.0 });
        assert!(matches!(rule.sample(&bad), Err(Error::NonFinite { .. })));
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-3.0f64..3.0).prop_map(Quaternion::from_array)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn conjugate_symmetric_and_right_linear(a in quat(), b in quat(), q in quat()) {
            let rule = QuadratureRule::new(12, 16).unwrap();
            let f = move |p: &DiskPoint| Quaternion::new(p.x, 1.0, p.y * p.x, 0.3) * a;
            let g = move |p: &DiskPoint| Quaternion::new(p.y, p.x * p.x, 0.5, p.rho) * b;
            let fs = rule.sample(&f).unwrap();
            let gs = rule.sample(&g).unwrap();
            prop_assert_eq!(rule.inner(&gs, &fs), rule.inner(&fs, &gs).conj());
            let ff = rule.inner(&fs, &fs);
            prop_assert_eq!(ff.vec_part(), Quaternion::ZERO);
            prop_assert!(ff.s >= 0.0);
            let lhs = rule.inner(&fs, &gs.right_mul(q));
            let rhs = rule.inner(&fs, &gs) * q;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }
}
