//! Real quaternions `s + i·𝐢 + j·𝐣 + k·𝐤` in double precision.
//!
//! Components are always stored and serialized in `(s, i, j, k)` order.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// A quaternion with scalar part `s` and vector part `(i, j, k)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub s: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(s: f64, i: f64, j: f64, k: f64) -> Self {
        Self { s, i, j, k }
    }

    pub const fn scalar(s: f64) -> Self {
        Self::new(s, 0.0, 0.0, 0.0)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.s, self.i, self.j, self.k]
    }

    pub fn conj(self) -> Self {
        Self::new(self.s, -self.i, -self.j, -self.k)
    }

    pub fn scalar_part(self) -> f64 {
        self.s
    }

    pub fn vec_part(self) -> Self {
        Self::new(0.0, self.i, self.j, self.k)
    }

    pub fn norm_sqr(self) -> f64 {
        self.s * self.s + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn abs(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.s
            .abs()
            .max(self.i.abs())
            .max(self.j.abs())
            .max(self.k.abs())
    }

    pub fn is_finite(self) -> bool {
        self.s.is_finite() && self.i.is_finite() && self.j.is_finite() && self.k.is_finite()
    }

    /// `conj(self) * rhs`, arranged so that `a.conj_mul(b) == b.conj_mul(a).conj()`
    /// holds bit for bit.
    pub fn conj_mul(self, rhs: Self) -> Self {
        let (a, b) = (self, rhs);
        Self::new(
            a.s * b.s + a.i * b.i + a.j * b.j + a.k * b.k,
            (a.s * b.i - a.i * b.s) + (a.k * b.j - a.j * b.k),
            (a.s * b.j - a.j * b.s) + (a.i * b.k - a.k * b.i),
            (a.s * b.k - a.k * b.s) + (a.j * b.i - a.i * b.j),
        )
    }

    /// Real 4x4 matrix of `x ↦ self * x` acting on `(s, i, j, k)` columns.
    pub fn left_matrix(self) -> [[f64; 4]; 4] {
        let Self { s, i, j, k } = self;
        [[s, -i, -j, -k], [i, s, -k, j], [j, k, s, -i], [k, -j, i, s]]
    }

    /// Real 4x4 matrix of `x ↦ x * self`.
    pub fn right_matrix(self) -> [[f64; 4]; 4] {
        let Self { s, i, j, k } = self;
        [[s, -i, -j, -k], [i, s, k, -j], [j, -k, s, i], [k, j, -i, s]]
    }
}

/// Hamilton product.
pub fn qmul(a: Quaternion, b: Quaternion) -> Quaternion {
    Quaternion::new(
        a.s * b.s - a.i * b.i - a.j * b.j - a.k * b.k,
        a.s * b.i + a.i * b.s + a.j * b.k - a.k * b.j,
        a.s * b.j - a.i * b.k + a.j * b.s + a.k * b.i,
        a.s * b.k + a.i * b.j - a.j * b.i + a.k * b.s,
    )
}

pub fn qconj(a: Quaternion) -> Quaternion {
    a.conj()
}

pub fn scalar_part(a: Quaternion) -> f64 {
    a.s
}

pub fn vec_part(a: Quaternion) -> Quaternion {
    a.vec_part()
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.s + o.s, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.s - o.s, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.s, -self.i, -self.j, -self.k)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        qmul(self, o)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, r: f64) -> Self {
        Self::new(self.s * r, self.i * r, self.j * r, self.k * r)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    fn div(self, r: f64) -> Self {
        Self::new(self.s / r, self.i / r, self.j / r, self.k / r)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign<f64> for Quaternion {
    fn mul_assign(&mut self, r: f64) {
        *self = *self * r;
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.s, self.i, self.j, self.k)
    }
}

/// Compensated (Neumaier) accumulator for quaternion sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct QuatAccumulator {
    sum: [f64; 4],
    comp: [f64; 4],
}

impl QuatAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, q: Quaternion) {
        for (c, v) in q.to_array().into_iter().enumerate() {
            let s = self.sum[c];
            let t = s + v;
            if s.abs() >= v.abs() {
                self.comp[c] += (s - t) + v;
            } else {
                self.comp[c] += (v - t) + s;
            }
            self.sum[c] = t;
        }
    }

    pub fn total(&self) -> Quaternion {
        Quaternion::new(
            self.sum[0] + self.comp[0],
            self.sum[1] + self.comp[1],
            self.sum[2] + self.comp[2],
            self.sum[3] + self.comp[3],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Quaternion = Quaternion::new(1.0, 2.0, 3.0, 4.0);

    #[test]
    fn unit_table() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        let m1 = -Quaternion::ONE;
        assert_eq!(i * i, m1);
        assert_eq!(j * j, m1);
        assert_eq!(k * k, m1);
        assert_eq!(i * j * k, m1);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(k * j, -i);
        assert_eq!(i * k, -j);
    }

    #[test]
    fn product_examples() {
        assert_eq!(Q * Quaternion::ONE, Q);
        let a = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let b = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(a * b, Quaternion::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(
            Quaternion::new(1.0, 1.0, 0.0, 0.0).conj(),
            Quaternion::new(1.0, -1.0, 0.0, 0.0)
        );
        assert_eq!(Quaternion::K.conj(), -Quaternion::K);
        let q = Quaternion::new(2.0, 0.0, 3.0, 0.0);
        assert_eq!(q.conj() * q, Quaternion::scalar(13.0));
    }

    #[test]
    fn parts() {
        let q = Quaternion::new(3.0, 1.0, 0.0, 0.0);
        assert_eq!(scalar_part(q), 3.0);
        assert_eq!(vec_part(q), Quaternion::I);
        let u = Quaternion::new(1.0, 1.0, 1.0, 1.0);
        assert_eq!(scalar_part(qconj(u) * u), 4.0);
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(Quaternion::from_array)
    }

    fn mat_apply(m: [[f64; 4]; 4], x: Quaternion) -> Quaternion {
        let v = x.to_array();
        let mut out = [0.0; 4];
        for r in 0..4 {
            out[r] = (0..4).map(|c| m[r][c] * v[c]).sum();
        }
        Quaternion::from_array(out)
    }

    proptest! {
        #[test]
        fn conj_times_self_is_norm(a in quat()) {
            let p = qconj(a) * a;
            prop_assert!(p.vec_part().max_abs() <= 1e-12 * a.norm_sqr().max(1.0));
            prop_assert!((p.s - a.norm_sqr()).abs() <= 1e-12 * a.norm_sqr().max(1.0));
        }

        #[test]
        fn associative(a in quat(), b in quat(), c in quat()) {
            let l = (a * b) * c;
            let r = a * (b * c);
            let scale = a.abs() * b.abs() * c.abs();
            prop_assert!((l - r).abs() <= 1e-12 * scale.max(1.0));
        }

        #[test]
        fn multiplicative_norm(a in quat(), b in quat()) {
            let lhs = (a * b).abs();
            let rhs = a.abs() * b.abs();
            prop_assert!((lhs - rhs).abs() <= 8.0 * f64::EPSILON * rhs.max(1e-300));
        }

        #[test]
        fn conj_reverses_products(a in quat(), b in quat()) {
            let d = qconj(a * b) - qconj(b) * qconj(a);
            prop_assert!(d.abs() <= 1e-12 * (a.abs() * b.abs()).max(1.0));
        }

        #[test]
        fn conj_mul_is_exactly_conjugate_symmetric(a in quat(), b in quat()) {
            prop_assert_eq!(a.conj_mul(b), b.conj_mul(a).conj());
            let d = a.conj_mul(b) - qconj(a) * b;
            prop_assert!(d.abs() <= 1e-12 * (a.abs() * b.abs()).max(1.0));
        }

        #[test]
        fn real_matrices_match_products(a in quat(), x in quat()) {
            prop_assert!((mat_apply(a.left_matrix(), x) - a * x).abs() <= 1e-12 * (a.abs() * x.abs()).max(1.0));
            prop_assert!((mat_apply(a.right_matrix(), x) - x * a).abs() <= 1e-12 * (a.abs() * x.abs()).max(1.0));
        }
    }
}
