//! The standard λ-metamonogenic functions `F_n[λ]`, the basic functions
//! `F_{n,m} = F_n[j_{n,m}]`, and finite-difference residuals of the
//! operators `D + λ` and `Δ + λ²`.
//!
//! `D = ∂ₓ𝐢 + ∂ᵧ𝐣` acts from the left. With `J_n' + (n/z)J_n = J_{n-1}`
//! the functions read
//!
//! ```text
//! F_n[λ] = J_{n-1}(λρ)cos(n-1)θ + J_n(λρ)cos nθ 𝐢 + J_n(λρ)sin nθ 𝐣 − J_{n-1}(λρ)sin(n-1)θ 𝐤
//! ```
//!
//! with `J_{-1} = −J_1`, which is continuous through the origin.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bessel::{self, bessel_j_upto};
use crate::error::{Error, Result};
use crate::quatnum::Quaternion;

/// Slack allowed when deciding whether a point lies in the closed disk.
pub const DISK_SLACK: f64 = 1e-12;
/// Default step for first-order central differences.
pub const DEFAULT_H1: f64 = 1e-4;
/// Default step for second-order stencils.
pub const DEFAULT_H2: f64 = 1e-3;

/// A point of the plane in both Cartesian and polar form, `θ ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    pub x: f64,
    pub y: f64,
    pub rho: f64,
    pub theta: f64,
}

impl DiskPoint {
    pub const ORIGIN: Self = Self {
        x: 0.0,
        y: 0.0,
        rho: 0.0,
        theta: 0.0,
    };

    pub fn cartesian(x: f64, y: f64) -> Self {
        let rho = x.hypot(y);
        let mut theta = y.atan2(x);
        if theta < 0.0 {
            theta += 2.0 * PI;
        }
        if theta >= 2.0 * PI {
            theta = 0.0;
        }
        Self { x, y, rho, theta }
    }

    pub fn polar(rho: f64, theta: f64) -> Self {
        let mut t = theta.rem_euclid(2.0 * PI);
        if t >= 2.0 * PI {
            t = 0.0;
        }
        Self {
            x: rho * t.cos(),
            y: rho * t.sin(),
            rho,
            theta: t,
        }
    }

    pub fn in_closed_disk(&self) -> bool {
        self.rho <= 1.0 + DISK_SLACK
    }

    fn shifted(&self, dx: f64, dy: f64) -> Self {
        Self::cartesian(self.x + dx, self.y + dy)
    }
}

/// `(n, m)` with `n ≥ 0` the angular order and `m ≥ 1` the radial zero index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex {
    pub n: usize,
    pub m: usize,
}

impl BasisIndex {
    pub const fn new(n: usize, m: usize) -> Self {
        Self { n, m }
    }

    /// The zero `j_{n,m}` that serves as this function's `λ`.
    pub fn zero(&self) -> Result<f64> {
        bessel::bessel_zero(self.n, self.m)
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

/// A deterministic ℍ-valued function on (a neighborhood of) the disk.
pub trait FieldFunction: Sync {
    fn eval(&self, p: &DiskPoint) -> Quaternion;

    /// The λ for which the function is λ-metamonogenic, when known.
    fn lambda(&self) -> Option<f64> {
        None
    }
}

impl<F: Fn(&DiskPoint) -> Quaternion + Sync> FieldFunction for F {
    fn eval(&self, p: &DiskPoint) -> Quaternion {
        self(p)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "lambda must be a nonzero real, got {lambda}"
        )));
    }
    Ok(())
}

fn check_order(n: usize) -> Result<()> {
    if n + 1 > bessel::DEFAULT_ORDER_CAP {
        return Err(Error::Config(format!(
            "angular order {n} exceeds the Bessel order cap {}",
            bessel::DEFAULT_ORDER_CAP
        )));
    }
    Ok(())
}

/// `(J_{n-1}(z), J_n(z))` with `J_{-1} = -J_1`.
fn radial_pair(n: usize, z: f64) -> (f64, f64) {
    let seq = bessel_j_upto(n.max(1), z);
    let lower = if n == 0 { -seq[1] } else { seq[n - 1] };
    (lower, seq[n])
}

pub(crate) fn eval_f_unchecked(n: usize, lambda: f64, p: &DiskPoint) -> Quaternion {
    let (lower, jn) = radial_pair(n, lambda * p.rho);
    let a = (n as f64 - 1.0) * p.theta;
    let b = n as f64 * p.theta;
    Quaternion::new(
        lower * a.cos(),
        jn * b.cos(),
        jn * b.sin(),
        -lower * a.sin(),
    )
}

/// `F_n[λ](p)`; at the origin this gives `𝐢`, `1`, or `0` for `n = 0`, `1`, `≥ 2`.
pub fn eval_f(n: usize, lambda: f64, p: &DiskPoint) -> Result<Quaternion> {
    check_lambda(lambda)?;
    check_order(n)?;
    Ok(eval_f_unchecked(n, lambda, p))
}

/// `F_{n,m}(p) = F_n[j_{n,m}](p)`.
pub fn eval_fnm(idx: BasisIndex, p: &DiskPoint) -> Result<Quaternion> {
    let z = idx.zero()?;
    eval_f(idx.n, z, p)
}

pub fn phi_plus(n: usize, theta: f64) -> f64 {
    (n as f64 * theta).cos()
}

pub fn phi_minus(n: usize, theta: f64) -> f64 {
    (n as f64 * theta).sin()
}

/// The reduced-quaternionic pair `(F_n⁺, F_n⁻)` with `F_n = F_n⁺𝐢 + F_n⁻𝐣`.
///
/// Undefined at the origin, where the `n/(λρ)` factor is singular.
pub fn eval_f_split(n: usize, lambda: f64, p: &DiskPoint) -> Result<(Quaternion, Quaternion)> {
    check_lambda(lambda)?;
    check_order(n)?;
    if p.rho == 0.0 {
        return Err(Error::Domain(
            "the split F_n = F+ i + F- j is singular at the origin; use eval_f there".into(),
        ));
    }
    let z = lambda * p.rho;
    let seq = bessel_j_upto(n + 1, z);
    let jn = seq[n];
    let lower = if n == 0 { -seq[1] } else { seq[n - 1] };
    let jp = 0.5 * (lower - seq[n + 1]);
    let ratio = n as f64 / z * jn;
    let (c, s) = (p.theta.cos(), p.theta.sin());
    let (pp, pm) = (phi_plus(n, p.theta), phi_minus(n, p.theta));
    // F± = J Φ± − (cosθ𝐢 + sinθ𝐣) J' Φ± ∓ (n/λρ)(sinθ𝐢 − cosθ𝐣) J Φ∓
    let plus = Quaternion::new(
        jn * pp,
        -c * jp * pp - s * ratio * pm,
        -s * jp * pp + c * ratio * pm,
        0.0,
    );
    let minus = Quaternion::new(
        jn * pm,
        -c * jp * pm + s * ratio * pp,
        -s * jp * pm - c * ratio * pp,
        0.0,
    );
    Ok((plus, minus))
}

/// `F_n[λ]` as a [`FieldFunction`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardFunction {
    n: usize,
    lambda: f64,
}

impl StandardFunction {
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        check_order(n)?;
        Ok(Self { n, lambda })
    }

    pub fn order(&self) -> usize {
        self.n
    }
}

impl FieldFunction for StandardFunction {
    fn eval(&self, p: &DiskPoint) -> Quaternion {
        eval_f_unchecked(self.n, self.lambda, p)
    }

    fn lambda(&self) -> Option<f64> {
        Some(self.lambda)
    }
}

/// `F_{n,m}` as a [`FieldFunction`], with its zero resolved up front.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisFunction {
    index: BasisIndex,
    zero: f64,
}

impl BasisFunction {
    pub fn new(index: BasisIndex) -> Result<Self> {
        let zero = index.zero()?;
        check_order(index.n)?;
        Ok(Self { index, zero })
    }

    pub fn index(&self) -> BasisIndex {
        self.index
    }

    pub fn zero(&self) -> f64 {
        self.zero
    }
}

impl FieldFunction for BasisFunction {
    fn eval(&self, p: &DiskPoint) -> Quaternion {
        eval_f_unchecked(self.index.n, self.zero, p)
    }

    fn lambda(&self) -> Option<f64> {
        Some(self.zero)
    }
}

/// Finite sum `Σ F_{n,m}(z) c_{n,m}` with right coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BasisSeries {
    terms: Vec<(BasisFunction, Quaternion)>,
}

impl BasisSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BasisIndex, Quaternion)>) -> Result<Self> {
        let mut s = Self::new();
        for (idx, c) in terms {
            s.push(idx, c)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, index: BasisIndex, coeff: Quaternion) -> Result<()> {
        self.terms.push((BasisFunction::new(index)?, coeff));
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (BasisIndex, Quaternion)> + '_ {
        self.terms.iter().map(|(f, c)| (f.index, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ F_{n,m}(p) c_{n,m} w(j_{n,m})` for a real per-mode weight.
    pub fn eval_weighted(&self, p: &DiskPoint, weight: impl Fn(f64) -> f64) -> Quaternion {
        self.terms
            .iter()
            .map(|(f, c)| f.eval(p) * *c * weight(f.zero))
            .sum()
    }

    pub(crate) fn functions(&self) -> impl Iterator<Item = &(BasisFunction, Quaternion)> {
        self.terms.iter()
    }
}

impl FieldFunction for BasisSeries {
    fn eval(&self, p: &DiskPoint) -> Quaternion {
        self.terms.iter().map(|(f, c)| f.eval(p) * *c).sum()
    }
}

fn check_stencil(p: &DiskPoint, h: f64, reach: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::Domain(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    if p.rho + h > reach + DISK_SLACK {
        return Err(Error::Domain(format!(
            "stencil of half-width {h} at ({}, {}) leaves the region of radius {reach}",
            p.x, p.y
        )));
    }
    Ok(())
}

/// Central differences `(∂ₓg, ∂ᵧg)` of a scalar field at `p`.
fn gradient(g: &impl Fn(f64, f64) -> f64, p: &DiskPoint, h: f64) -> (f64, f64) {
    let gx = (g(p.x + h, p.y) - g(p.x - h, p.y)) / (2.0 * h);
    let gy = (g(p.x, p.y + h) - g(p.x, p.y - h)) / (2.0 * h);
    (gx, gy)
}

/// Completes metaharmonic `(f₁, f₂)` to the metamonogenic
/// `f₀ + f₁𝐢 + f₂𝐣 + f₃𝐤` with
/// `f₀ = (∂ₓf₁ + ∂ᵧf₂)/λ` and `f₃ = (∂ᵧf₁ − ∂ₓf₂)/λ`.
///
/// The fields are taken to be evaluable on the closed unit disk.
pub fn complete_metamonogenic(
    f1: impl Fn(f64, f64) -> f64,
    f2: impl Fn(f64, f64) -> f64,
    lambda: f64,
    p: &DiskPoint,
    h: f64,
) -> Result<Quaternion> {
    complete_metamonogenic_within(f1, f2, lambda, p, h, 1.0)
}

/// As [`complete_metamonogenic`], for fields evaluable on the disk of radius `reach`.
pub fn complete_metamonogenic_within(
    f1: impl Fn(f64, f64) -> f64,
    f2: impl Fn(f64, f64) -> f64,
    lambda: f64,
    p: &DiskPoint,
    h: f64,
    reach: f64,
) -> Result<Quaternion> {
    check_lambda(lambda)?;
    check_stencil(p, h, reach)?;
    let (f1x, f1y) = gradient(&f1, p, h);
    let (f2x, f2y) = gradient(&f2, p, h);
    Ok(Quaternion::new(
        (f1x + f2y) / lambda,
        f1(p.x, p.y),
        f2(p.x, p.y),
        (f1y - f2x) / lambda,
    ))
}

/// A metamonogenic field given by its `𝐢`, `𝐣` components and `λ`; the
/// remaining components come from [`complete_metamonogenic_within`].
pub struct CompletedField<F1, F2> {
    f1: F1,
    f2: F2,
    lambda: f64,
    h: f64,
}

impl<F1, F2> CompletedField<F1, F2>
where
    F1: Fn(f64, f64) -> f64 + Sync,
    F2: Fn(f64, f64) -> f64 + Sync,
{
    /// `f1`, `f2` must be evaluable on the whole plane.
    pub fn new(f1: F1, f2: F2, lambda: f64, h: f64) -> Result<Self> {
        check_lambda(lambda)?;
        if !(h > 0.0) {
            return Err(Error::Domain(format!(
                "finite-difference step must be positive, got {h}"
            )));
        }
        Ok(Self { f1, f2, lambda, h })
    }
}

impl<F1, F2> FieldFunction for CompletedField<F1, F2>
where
    F1: Fn(f64, f64) -> f64 + Sync,
    F2: Fn(f64, f64) -> f64 + Sync,
{
    fn eval(&self, p: &DiskPoint) -> Quaternion {
        complete_metamonogenic_within(&self.f1, &self.f2, self.lambda, p, self.h, f64::INFINITY)
            .expect("validated at construction")
    }

    fn lambda(&self) -> Option<f64> {
        Some(self.lambda)
    }
}

/// `D f = 𝐢∂ₓf + 𝐣∂ᵧf` by central differences; needs `ρ + h ≤ 1`.
pub fn apply_dirac<F: FieldFunction + ?Sized>(f: &F, p: &DiskPoint, h: f64) -> Result<Quaternion> {
    check_stencil(p, h, 1.0)?;
    Ok(apply_dirac_unchecked(f, p, h))
}

pub(crate) fn apply_dirac_unchecked<F: FieldFunction + ?Sized>(
    f: &F,
    p: &DiskPoint,
    h: f64,
) -> Quaternion {
    let fx = (f.eval(&p.shifted(h, 0.0)) - f.eval(&p.shifted(-h, 0.0))) / (2.0 * h);
    let fy = (f.eval(&p.shifted(0.0, h)) - f.eval(&p.shifted(0.0, -h))) / (2.0 * h);
    Quaternion::I * fx + Quaternion::J * fy
}

/// `(D + λ) f` at `p`; `O(h²)` when `f` is λ-metamonogenic.
pub fn dirac_residual<F: FieldFunction + ?Sized>(
    f: &F,
    lambda: f64,
    p: &DiskPoint,
    h: f64,
) -> Result<Quaternion> {
    Ok(apply_dirac(f, p, h)? + f.eval(p) * lambda)
}

pub(crate) fn laplacian(g: &impl Fn(f64, f64) -> f64, x: f64, y: f64, h: f64) -> f64 {
    (g(x + h, y) + g(x - h, y) + g(x, y + h) + g(x, y - h) - 4.0 * g(x, y)) / (h * h)
}

/// Five-point `(Δ + λ²) g` at `p`.
pub fn helmholtz_residual(
    g: impl Fn(f64, f64) -> f64,
    lambda: f64,
    p: &DiskPoint,
    h: f64,
) -> Result<f64> {
    check_stencil(p, h, 1.0)?;
    Ok(laplacian(&g, p.x, p.y, h) + lambda * lambda * g(p.x, p.y))
}

/// One scalar component (0 = s, 1 = 𝐢, 2 = 𝐣, 3 = 𝐤) of a field as a function of `(x, y)`.
pub fn component<F: FieldFunction + ?Sized>(f: &F, c: usize) -> impl Fn(f64, f64) -> f64 + '_ {
    move |x, y| f.eval(&DiskPoint::cartesian(x, y)).to_array()[c]
}
