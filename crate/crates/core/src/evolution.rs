//! Imaginary-time solutions `v(z, t) = Σ F_{n,m}(z) c_{n,m} e^{j_{n,m} t / K}`
//! of `(D + K ∂ₜ) v = 0`, which also solve `(Δ + K² ∂ₜ²) v = 0`
//! componentwise.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::basis::{self, BasisIndex, BasisSeries, DiskPoint, FieldFunction};
use crate::error::{Error, Result};
use crate::quatnum::Quaternion;

/// Largest admitted exponent `j_{n,m} t / K`.
pub const GROWTH_LIMIT: f64 = 700.0;

/// A field of space and time.
pub trait TimeField: Sync {
    fn eval_at(&self, p: &DiskPoint, t: f64) -> Quaternion;

    /// The constant `K` of the operator `D + K ∂ₜ`.
    fn k(&self) -> f64;

    /// Rejects times at which evaluation would overflow.
    fn check_time(&self, _t: f64) -> Result<()> {
        Ok(())
    }
}

/// Adapter turning a closure `(p, t) ↦ v` into a [`TimeField`].
pub struct FnTimeField<F> {
    pub f: F,
    pub k: f64,
}

impl<F: Fn(&DiskPoint, f64) -> Quaternion + Sync> TimeField for FnTimeField<F> {
    fn eval_at(&self, p: &DiskPoint, t: f64) -> Quaternion {
        (self.f)(p, t)
    }

    fn k(&self) -> f64 {
        self.k
    }
}

#[derive(Clone, Debug)]
pub struct WaveState {
    series: BasisSeries,
    k: f64,
    pub t: f64,
}

impl WaveState {
    pub fn new(coeffs: &BTreeMap<BasisIndex, Quaternion>, k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::Domain(format!("K must be positive, got {k}")));
        }
        let series = BasisSeries::from_terms(coeffs.iter().map(|(i, c)| (*i, *c)))?;
        Ok(Self { series, k, t: 0.0 })
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn series(&self) -> &BasisSeries {
        &self.series
    }

    fn offending_modes(&self, t: f64) -> Vec<BasisIndex> {
        self.series
            .functions()
            .filter(|(f, _)| f.zero() * t / self.k > GROWTH_LIMIT)
            .map(|(f, _)| f.index())
            .collect()
    }
}

impl TimeField for WaveState {
    fn eval_at(&self, p: &DiskPoint, t: f64) -> Quaternion {
        let k = self.k;
        self.series.eval_weighted(p, |j| (j * t / k).exp())
    }

    fn k(&self) -> f64 {
        self.k
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let modes = self.offending_modes(t);
        if modes.is_empty() {
            Ok(())
        } else {
            Err(Error::GrowthGuard {
                limit: GROWTH_LIMIT,
                modes,
            })
        }
    }
}

/// `v(p, t)` at the state's own time.
pub fn evolve_eval(state: &WaveState, p: &DiskPoint) -> Result<Quaternion> {
    state.check_time(state.t)?;
    Ok(state.eval_at(p, state.t))
}

/// `(D + K∂ₜ) v` at `(p, t)` by central differences in space and time.
pub fn timemt_residual<T: TimeField + ?Sized>(
    v: &T,
    p: &DiskPoint,
    t: f64,
    h_space: f64,
    h_time: f64,
) -> Result<Quaternion> {
    if !(h_time > 0.0) {
        return Err(Error::Domain(format!(
            "time step must be positive, got {h_time}"
        )));
    }
    v.check_time(t + h_time)?;
    let at_t = |q: &DiskPoint| v.eval_at(q, t);
    let dv = basis::apply_dirac(&at_t, p, h_space)?;
    let dt = (v.eval_at(p, t + h_time) - v.eval_at(p, t - h_time)) / (2.0 * h_time);
    Ok(dv + dt * v.k())
}

/// `∂ₜv` at `t = 0`, from the series: `Σ (j_{n,m}/K) F_{n,m}(p) c_{n,m}`.
pub fn initial_time_derivative(state: &WaveState, p: &DiskPoint) -> Quaternion {
    let k = state.k;
    state.series.eval_weighted(p, |j| j / k)
}

/// Componentwise `(Δ + K²∂ₜ²) v` with second-order stencils of step `h`.
pub fn wick_wave_residual<T: TimeField + ?Sized>(
    v: &T,
    p: &DiskPoint,
    t: f64,
    h: f64,
) -> Result<[f64; 4]> {
    if !(h > 0.0) || p.rho + h > 1.0 + basis::DISK_SLACK {
        return Err(Error::Domain(format!(
            "stencil of half-width {h} at ({}, {}) leaves the unit disk",
            p.x, p.y
        )));
    }
    v.check_time(t + h)?;
    let at = |x: f64, y: f64, s: f64| v.eval_at(&DiskPoint::cartesian(x, y), s);
    let centre = at(p.x, p.y, t);
    let lap =
        (at(p.x + h, p.y, t) + at(p.x - h, p.y, t) + at(p.x, p.y + h, t) + at(p.x, p.y - h, t)
            - centre * 4.0)
            / (h * h);
    let tt = (at(p.x, p.y, t + h) + at(p.x, p.y, t - h) - centre * 2.0) / (h * h);
    Ok((lap + tt * (v.k() * v.k())).to_array())
}

#[derive(Clone, Debug, Serialize)]
pub struct EmergenceReport {
    /// First sampled time at which the high mode reaches the threshold share.
    pub t_star: Option<f64>,
    /// Share of the high mode at `t = 0`.
    pub initial_share: f64,
    pub threshold: f64,
}

/// Tracks when a weak high-order mode becomes visible next to a dominant
/// low-order one: the first `t` on `times` with
/// `max|F_high c_high e^{j t/K}| ≥ threshold · max|v(·, t)|` over `grid`.
pub fn high_mode_emergence(
    low: (BasisIndex, Quaternion),
    high: (BasisIndex, Quaternion),
    k: f64,
    grid: &[DiskPoint],
    times: &[f64],
    threshold: f64,
) -> Result<EmergenceReport> {
    let full = WaveState::new(&[low, high].into_iter().collect(), k)?;
    let high_only = WaveState::new(&[high].into_iter().collect(), k)?;
    let share = |t: f64| -> Result<f64> {
        full.check_time(t)?;
        let (mut hi, mut tot) = (0.0f64, 0.0f64);
        for p in grid {
            hi = hi.max(high_only.eval_at(p, t).abs());
            tot = tot.max(full.eval_at(p, t).abs());
        }
        Ok(if tot > 0.0 { hi / tot } else { 0.0 })
    };
    let initial_share = share(0.0)?;
    let mut t_star = None;
    for &t in times {
        if share(t)? >= threshold {
            t_star = Some(t);
            break;
        }
    }
    Ok(EmergenceReport {
        t_star,
        initial_share,
        threshold,
    })
}

/// Square `w × h` grid over `[-1, 1]²`, rows from top (`y = 1`) down.
pub fn square_grid(w: usize, h: usize) -> Vec<DiskPoint> {
    let coord = |i: usize, n: usize| {
        if n <= 1 {
            0.0
        } else {
            -1.0 + 2.0 * i as f64 / (n - 1) as f64
        }
    };
    (0..h)
        .flat_map(|r| (0..w).map(move |c| DiskPoint::cartesian(coord(c, w), -coord(r, h))))
        .collect()
}

/// `v(·, t)` as a spatial field.
pub struct Snapshot<'a> {
    pub state: &'a WaveState,
    pub t: f64,
}

impl FieldFunction for Snapshot<'_> {
    fn eval(&self, p: &DiskPoint) -> Quaternion {
        self.state.eval_at(p, self.t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{eval_fnm, BasisFunction};
    use crate::bessel::bessel_zero;
    use crate::expansion::reconstruct;

    fn single(n: usize, m: usize, c: Quaternion, k: f64) -> WaveState {
        WaveState::new(&[(BasisIndex::new(n, m), c)].into_iter().collect(), k).unwrap()
    }

    fn three_mode() -> WaveState {
        let coeffs = [
            (BasisIndex::new(0, 1), Quaternion::new(1.0, 0.2, 0.0, -0.3)),
            (BasisIndex::new(2, 2), Quaternion::new(0.0, 0.5, 0.1, 0.0)),
            (BasisIndex::new(4, 1), Quaternion::new(-0.4, 0.0, 0.0, 0.8)),
        ];
        WaveState::new(&coeffs.into_iter().collect(), 1.0).unwrap()
    }

    #[test]
    fn time_zero_is_the_expansion() {
        let st = three_mode();
        let exp = crate::expansion::ExpansionState {
            lambda: 1.0,
            n_max: 4,
            m_max: 2,
            coeffs: st.series().terms().collect(),
            residual_l2: 0.0,
            field_norm: 0.0,
            block_condition: 1.0,
        };
        let p = DiskPoint::polar(0.4, 2.0);
        assert!((evolve_eval(&st, &p).unwrap() - reconstruct(&exp, &p).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn single_mode_growth_at_origin() {
        let st = single(0, 1, Quaternion::ONE, 1.0).with_time(0.1);
        let v = evolve_eval(&st, &DiskPoint::ORIGIN).unwrap();
        assert!((v - Quaternion::I * 1.27186274696885686051590836201).abs() < 1e-12);
        let zero = WaveState::new(&BTreeMap::new(), 1.0)
            .unwrap()
            .with_time(3.0);
        assert_eq!(
            evolve_eval(&zero, &DiskPoint::polar(0.5, 1.0)).unwrap(),
            Quaternion::ZERO
        );
    }

    #[test]
    fn growth_guard() {
        let st = single(6, 3, Quaternion::ONE, 1.0).with_time(100.0);
        match evolve_eval(&st, &DiskPoint::ORIGIN) {
            Err(Error::GrowthGuard { modes, .. }) => assert_eq!(modes, vec![BasisIndex::new(6, 3)]),
            other => panic!("{other:?}"),
        }
        assert!(WaveState::new(&BTreeMap::new(), 0.0).is_err());
    }

    #[test]
    fn companion_equation_residuals() {
        let p = DiskPoint::cartesian(0.4, 0.1);
        let st = single(1, 1, Quaternion::ONE, 1.0);
        assert!(timemt_residual(&st, &p, 0.2, 1e-4, 1e-4).unwrap().abs() < 1e-5);
        for k in [0.5, 2.0] {
            let st = single(1, 1, Quaternion::ONE, k);
            assert!(timemt_residual(&st, &p, 0.2, 1e-4, 1e-4).unwrap().abs() < 1e-5);
        }
        let st = three_mode();
        assert!(timemt_residual(&st, &p, 0.2, 1e-4, 1e-4).unwrap().abs() < 1e-5);

        // a frozen F_{0,1} only feels D: residual = D F = −j_{0,1} F
        let f01 = BasisFunction::new(BasisIndex::new(0, 1)).unwrap();
        let frozen = FnTimeField {
            f: |q: &DiskPoint, _t: f64| f01.eval(q),
            k: 1.0,
        };
        let r = timemt_residual(&frozen, &p, 0.0, 1e-4, 1e-4).unwrap();
        assert!((r + f01.eval(&p) * f01.zero()).abs() < 1e-6);
    }

    #[test]
    fn residual_is_linear() {
        let p = DiskPoint::cartesian(-0.3, 0.35);
        let a = single(2, 1, Quaternion::new(0.3, 1.0, 0.0, 0.0), 1.0);
        let b = single(3, 2, Quaternion::new(0.0, 0.0, -2.0, 0.5), 1.0);
        let both = WaveState::new(
            &[
                (BasisIndex::new(2, 1), Quaternion::new(0.3, 1.0, 0.0, 0.0)),
                (BasisIndex::new(3, 2), Quaternion::new(0.0, 0.0, -2.0, 0.5)),
            ]
            .into_iter()
            .collect(),
            1.0,
        )
        .unwrap();
        let sum = timemt_residual(&a, &p, 0.1, 1e-3, 1e-3).unwrap()
            + timemt_residual(&b, &p, 0.1, 1e-3, 1e-3).unwrap();
        let joint = timemt_residual(&both, &p, 0.1, 1e-3, 1e-3).unwrap();
        assert!((sum - joint).abs() < 1e-9);
    }

    #[test]
    fn initial_derivative() {
        let st = single(0, 1, Quaternion::ONE, 1.0);
        let d = initial_time_derivative(&st, &DiskPoint::ORIGIN);
        assert!((d - Quaternion::I * bessel_zero(0, 1).unwrap()).abs() < 1e-15);
        let zero = WaveState::new(&BTreeMap::new(), 1.0).unwrap();
        assert_eq!(
            initial_time_derivative(&zero, &DiskPoint::ORIGIN),
            Quaternion::ZERO
        );

        let st = three_mode();
        let h = 1e-5;
        for &(r, t) in &[(0.2, 0.3), (0.7, 4.0), (0.5, 2.2)] {
            let p = DiskPoint::polar(r, t);
            let fd = (st.eval_at(&p, h) - st.eval_at(&p, -h)) / (2.0 * h);
            assert!((fd - initial_time_derivative(&st, &p)).abs() < 1e-8);
        }
    }

    #[test]
    fn wave_equation_residuals() {
        let p = DiskPoint::cartesian(0.2, -0.3);
        let st = single(2, 1, Quaternion::ONE, 1.0);
        let h = 1e-3;
        let r = wick_wave_residual(&st, &p, 0.1, h).unwrap();
        let r2 = wick_wave_residual(&st, &p, 0.1, h / 2.0).unwrap();
        // truncation h²/12 (∂x⁴ + ∂y⁴ + ∂t⁴) v is bounded by h²/6 j⁴ |v|
        let j = bessel_zero(2, 1).unwrap();
        let bound = h * h / 6.0 * j.powi(4) * st.eval_at(&p, 0.1).max_abs() * 1.05;
        for c in 0..4 {
            assert!(r[c].abs() <= bound, "{r:?} vs {bound}");
            if r[c].abs() > 1e-8 {
                let ratio = r[c] / r2[c];
                assert!((ratio - 4.0).abs() < 0.1, "{ratio}");
            }
        }
        let zero = WaveState::new(&BTreeMap::new(), 1.0).unwrap();
        assert_eq!(wick_wave_residual(&zero, &p, 0.1, 1e-3).unwrap(), [0.0; 4]);

        let idx = BasisIndex::new(2, 1);
        let planted = FnTimeField {
            f: move |q: &DiskPoint, t: f64| eval_fnm(idx, q).unwrap() * (2.0 * t).exp(),
            k: 1.0,
        };
        let r = wick_wave_residual(&planted, &p, 0.1, 1e-3).unwrap();
        assert!(r.iter().map(|c| c.abs()).fold(0.0, f64::max) > 1e-2);
    }

    #[test]
    fn high_mode_emerges_later() {
        let grid: Vec<DiskPoint> = square_grid(41, 41)
            .into_iter()
            .filter(|p| p.rho <= 1.0)
            .collect();
        let times: Vec<f64> = (0..=100).map(|i| 0.01 * i as f64).collect();
        let rep = high_mode_emergence(
            (BasisIndex::new(0, 1), Quaternion::ONE),
            (BasisIndex::new(6, 3), Quaternion::scalar(1e-3)),
            1.0,
            &grid,
            &times,
            0.1,
        )
        .unwrap();
        let t = rep.t_star.unwrap();
        assert!(t > 0.0 && rep.initial_share < 0.1);
    }

    #[test]
    fn grid_layout() {
        let g = square_grid(3, 2);
        assert_eq!(g.len(), 6);
        assert_eq!((g[0].x, g[0].y), (-1.0, 1.0));
        assert_eq!((g[5].x, g[5].y), (1.0, -1.0));
    }
}
