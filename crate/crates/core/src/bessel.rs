//! Bessel functions of the first kind `J_n` for integer order, their first
//! derivatives, and a memoized table of positive zeros `j_{n,m}`.
//!
//! Small arguments use the ascending power series. Everything else goes
//! through Miller's backward recurrence normalized by the Neumann sum
//! `1 = J_0 + 2 Σ J_{2k}`, which yields the whole sequence `J_0..J_N` in
//! one sweep.

use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

/// Highest order accepted by [`bessel_j`] and [`bessel_j_prime`].
pub const DEFAULT_ORDER_CAP: usize = 64;
/// Default zero-table bounds.
pub const DEFAULT_ZERO_N_MAX: usize = 32;
pub const DEFAULT_ZERO_M_MAX: usize = 64;

const SERIES_LIMIT: f64 = 2.0;
const RESCALE_AT: f64 = 1e250;
const NEWTON_CAP: usize = 100;
const SCAN_STEP: f64 = 0.5;

fn series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(n_max: usize, x: f64) -> Vec<f64> {
    let top = (n_max as f64).max(x);
    let mut start = (top + 30.0 + 12.0 * top.cbrt()) as usize;
    start += start % 2;

    let mut out = vec![0.0; n_max + 1];
    let mut next = 0.0;
    let mut cur = 1e-300_f64.sqrt();
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // cur now holds f_{k-1}
        let idx = k - 1;
        if idx <= n_max {
            out[idx] = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            next /= RESCALE_AT;
            norm /= RESCALE_AT;
            for v in out.iter_mut() {
                *v /= RESCALE_AT;
            }
        }
    }
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// `J_0(x), …, J_{n_max}(x)` without an order cap.
pub fn bessel_j_upto(n_max: usize, x: f64) -> Vec<f64> {
    let ax = x.abs();
    let mut out = if ax == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        v
    } else if ax <= SERIES_LIMIT {
        (0..=n_max).map(|n| series(n, ax)).collect()
    } else {
        miller(n_max, ax)
    };
    if x < 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    out
}

/// `J_n(x)` for any signed integer order, using `J_{-n} = (-1)^n J_n`.
pub fn bessel_j_signed(n: i64, x: f64) -> f64 {
    let a = n.unsigned_abs() as usize;
    let v = jn_unchecked(a, x);
    if n < 0 && a % 2 == 1 {
        -v
    } else {
        v
    }
}

pub(crate) fn jn_unchecked(n: usize, x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax == 0.0 {
        if n == 0 {
            1.0
        } else {
            0.0
        }
    } else if ax <= SERIES_LIMIT {
        series(n, ax)
    } else {
        miller(n, ax)[n]
    };
    if x < 0.0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `J_n'(x) = (J_{n-1}(x) - J_{n+1}(x)) / 2`, with `J_{-1} = -J_1`.
pub(crate) fn jn_prime_unchecked(n: usize, x: f64) -> f64 {
    let seq = bessel_j_upto(n + 1, x);
    let lower = if n == 0 { -seq[1] } else { seq[n - 1] };
    0.5 * (lower - seq[n + 1])
}

fn check_order(n: usize) -> Result<()> {
    if n > DEFAULT_ORDER_CAP {
        return Err(Error::Config(format!(
            "Bessel order {n} exceeds the configured cap {DEFAULT_ORDER_CAP}"
        )));
    }
    Ok(())
}

fn check_arg(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("Bessel argument {x} is not finite")));
    }
    Ok(())
}

/// Bessel function of the first kind, `J_n(x)`.
pub fn bessel_j(n: usize, x: f64) -> Result<f64> {
    check_order(n)?;
    check_arg(x)?;
    Ok(jn_unchecked(n, x))
}

/// `J_n'(x)` from the three-term derivative recurrence.
pub fn bessel_j_prime(n: usize, x: f64) -> Result<f64> {
    check_order(n)?;
    check_arg(x)?;
    Ok(jn_prime_unchecked(n, x))
}

/// Lazily filled, write-once table of positive zeros `j_{n,m}`.
///
/// Zeros of each order are found in increasing `m`, so row `n` always
/// holds a prefix `j_{n,1}, …, j_{n,len}`.
#[derive(Debug)]
pub struct BesselZeroTable {
    n_max: usize,
    m_max: usize,
    rows: RwLock<Vec<Vec<f64>>>,
}

impl BesselZeroTable {
    pub fn new(n_max: usize, m_max: usize) -> Self {
        Self {
            n_max,
            m_max,
            rows: RwLock::new(vec![Vec::new(); n_max + 1]),
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// The zero `j_{n,m}`, computing and caching it (and every smaller `m`)
    /// on first use.
    pub fn zero(&self, n: usize, m: usize) -> Result<f64> {
        if m == 0 || n > self.n_max || m > self.m_max {
            return Err(Error::Config(format!(
                "zero index ({n},{m}) outside table bounds n <= {}, 1 <= m <= {}",
                self.n_max, self.m_max
            )));
        }
        if let Some(&z) = self.rows.read().expect("zero table poisoned")[n].get(m - 1) {
            return Ok(z);
        }
        let mut rows = self.rows.write().expect("zero table poisoned");
        let row = &mut rows[n];
        while row.len() < m {
            let next = find_zero(n, row.len() + 1, row.last().copied())?;
            row.push(next);
        }
        Ok(row[m - 1])
    }

    /// Snapshot of every cached zero as `(n, m, j_{n,m})`.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        let rows = self.rows.read().expect("zero table poisoned");
        rows.iter()
            .enumerate()
            .flat_map(|(n, row)| row.iter().enumerate().map(move |(i, &z)| (n, i + 1, z)))
            .collect()
    }
}

/// Process-wide table with the default bounds.
pub fn zero_table() -> &'static BesselZeroTable {
    static TABLE: OnceLock<BesselZeroTable> = OnceLock::new();
    TABLE.get_or_init(|| BesselZeroTable::new(DEFAULT_ZERO_N_MAX, DEFAULT_ZERO_M_MAX))
}

/// The `m`-th positive zero of `J_n`, from the shared table.
pub fn bessel_zero(n: usize, m: usize) -> Result<f64> {
    zero_table().zero(n, m)
}

/// Locates `j_{n,m}` given `j_{n,m-1}` (or `None` for `m = 1`).
///
/// Scans forward for a sign change, bisects the bracket down, then
/// polishes with safeguarded Newton steps.
fn find_zero(n: usize, m: usize, previous: Option<f64>) -> Result<f64> {
    let f = |x: f64| jn_unchecked(n, x);
    // j_{n,1} > n, and consecutive zeros are more than SCAN_STEP apart.
    let mut a = match previous {
        Some(z) => z + SCAN_STEP,
        None => (n as f64).max(SCAN_STEP),
    };
    let mut fa = f(a);
    let mut b = a + SCAN_STEP;
    let mut fb = f(b);
    let mut steps = 0;
    while fa.signum() == fb.signum() {
        a = b;
        fa = fb;
        b += SCAN_STEP;
        fb = f(b);
        steps += 1;
        if steps > 10_000 {
            return Err(Error::ZeroNonconvergence { n, m, last: b });
        }
    }
    if fb == 0.0 {
        return Ok(b);
    }
    for _ in 0..20 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..NEWTON_CAP {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
        } else {
            b = x;
        }
        let step = fx / jn_prime_unchecked(n, x);
        let mut candidate = x - step;
        if !(candidate > a && candidate < b) {
            candidate = 0.5 * (a + b);
        }
        let delta = (candidate - x).abs();
        x = candidate;
        if delta < 1e-14 * x.max(1.0) {
            return Ok(x);
        }
    }
    Err(Error::ZeroNonconvergence { n, m, last: x })
}

/// `∫₀¹ J_n(j_{n,m1} ρ) J_n(j_{n,m2} ρ) ρ dρ` by the rule's radial nodes.
pub fn radial_orthogonality_check(
    n: usize,
    m1: usize,
    m2: usize,
    rule: &crate::diskquad::QuadratureRule,
) -> Result<f64> {
    let z1 = bessel_zero(n, m1)?;
    let z2 = bessel_zero(n, m2)?;
    Ok(rule
        .radial_nodes()
        .iter()
        .map(|&(rho, w)| w * rho * jn_unchecked(n, z1 * rho) * jn_unchecked(n, z2 * rho))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from a 30-digit arbitrary precision evaluation.
    const REFERENCE: &[(usize, f64, f64)] = &[
        (0, 5.0, -0.17759677131433830435),
        (1, 7.5, 0.13524842757970550518),
        (5, 12.0, -0.073470963101658581266),
        (10, 3.0, 0.000012928351645715883778),
        (20, 45.0, 0.0047633437900312990997),
        (3, 99.0, 0.061275663053705945473),
        (40, 30.0, 0.00036120236088965853089),
        (64, 10.0, 2.9049360287291092641e-45),
        (2, 0.5, 0.030604023458682641307),
        (0, 60.0, -0.091471804089061869531),
        (0, 1.0, 0.765197686557966551449717526103),
        (1, 1.0, 0.440050585744933515959682203719),
    ];

    #[test]
    fn matches_reference_values() {
        for &(n, x, want) in REFERENCE {
            let got = bessel_j(n, x).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs(),
                "J_{n}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn origin_limits() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(1, 0.0).unwrap(), 0.5);
        assert_eq!(bessel_j_prime(4, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j_prime(0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn derivative_of_j0_is_minus_j1() {
        let x = 1.3;
        let s = bessel_j_prime(0, x).unwrap() + bessel_j(1, x).unwrap();
        assert!(s.abs() < 1e-15);
    }

    #[test]
    fn odd_symmetry_for_negative_arguments() {
        for n in 0..6 {
            let p = bessel_j(n, 4.2).unwrap();
            let m = bessel_j(n, -4.2).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(m, sign * p);
        }
        assert_eq!(bessel_j_signed(-1, 2.5), -bessel_j(1, 2.5).unwrap());
    }

    /// Plain bisection on the power series, independent of the table path.
    fn bisect_series(n: usize, mut a: f64, mut b: f64) -> f64 {
        let f = |x: f64| {
            let mut term = (0.5 * x).powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
            let mut sum = term;
            for k in 1..80 {
                term *= -(0.25 * x * x) / (k as f64 * (k + n) as f64);
                sum += term;
            }
            sum
        };
        let fa = f(a);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if f(mid).signum() == fa.signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn first_zeros_match_bisection_oracle() {
        let j01 = bisect_series(0, 2.0, 3.0);
        let j11 = bisect_series(1, 3.0, 4.0);
        assert!((j01 - 2.404825557695773).abs() < 1e-12);
        assert!((j11 - 3.831705970207512).abs() < 1e-12);
        assert!((bessel_zero(0, 1).unwrap() - j01).abs() < 1e-12);
        assert!((bessel_zero(1, 1).unwrap() - j11).abs() < 1e-12);
        assert!((bessel_j(0, 2.404825557695773).unwrap()).abs() < 1e-12);
        assert!(bessel_zero(0, 2).unwrap() > bessel_zero(0, 1).unwrap());
    }

    #[test]
    fn far_zeros_match_reference() {
        assert!((bessel_zero(10, 10).unwrap() - 45.2315741035350448535727604794).abs() < 1e-11);
        assert!((bessel_zero(30, 1).unwrap() - 36.0983369567477247999268147978).abs() < 1e-11);
        assert!((bessel_zero(32, 64).unwrap() - 248.479138369377969497649098002).abs() < 1e-10);
    }

    #[test]
    fn table_bounds_and_order_cap() {
        assert!(matches!(bessel_zero(33, 1), Err(Error::Config(_))));
        assert!(matches!(bessel_zero(0, 0), Err(Error::Config(_))));
        assert!(matches!(bessel_zero(0, 65), Err(Error::Config(_))));
        assert!(matches!(bessel_j(65, 1.0), Err(Error::Config(_))));
        assert!(matches!(bessel_j(1, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn table_invariants() {
        let table = BesselZeroTable::new(12, 12);
        for n in 0..=12 {
            for m in 1..=12 {
                let z = table.zero(n, m).unwrap();
                assert!(jn_unchecked(n, z).abs() < 1e-12, "J_{n}(j_{n},{m})");
                let d = 1e-9 * z;
                assert!(jn_unchecked(n, z - d).signum() != jn_unchecked(n, z + d).signum());
                if m > 1 {
                    assert!(z > table.zero(n, m - 1).unwrap());
                }
                if n < 12 && m < 12 {
                    assert!(z < table.zero(n + 1, m).unwrap());
                    assert!(table.zero(n + 1, m).unwrap() < table.zero(n, m + 1).unwrap());
                }
            }
        }
        assert_eq!(table.entries().len(), 13 * 12);
    }

    #[test]
    fn concurrent_fills_agree() {
        let table = BesselZeroTable::new(8, 20);
        let results: Vec<Vec<f64>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|_| s.spawn(|| (1..=20).map(|m| table.zero(5, m).unwrap()).collect()))
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for r in &results[1..] {
            assert_eq!(r, &results[0]);
        }
    }

    #[test]
    fn recurrences_hold() {
        for i in 0..200 {
            let x = 0.1 + (50.0 - 0.1) * i as f64 / 199.0;
            let seq = bessel_j_upto(21, x);
            for n in 1..=20 {
                let r = 2.0 * n as f64 / x * seq[n] - seq[n - 1] - seq[n + 1];
                assert!(r.abs() < 1e-11, "n={n} x={x} r={r}");
                let h = 1e-5;
                let fd = (jn_unchecked(n, x + h) - jn_unchecked(n, x - h)) / (2.0 * h);
                assert!((fd - jn_prime_unchecked(n, x)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn radial_orthogonality() {
        let rule = crate::diskquad::QuadratureRule::default();
        assert!(radial_orthogonality_check(0, 1, 2, &rule).unwrap().abs() < 1e-10);
        assert!(radial_orthogonality_check(2, 1, 3, &rule).unwrap().abs() < 1e-10);
        let diag = radial_orthogonality_check(1, 1, 1, &rule).unwrap();
        assert!((diag - 0.0811075654133428227436280618245).abs() < 1e-8);
        let j = bessel_zero(1, 1).unwrap();
        assert!((diag - 0.5 * jn_unchecked(2, j).powi(2)).abs() < 1e-12);
    }
}
