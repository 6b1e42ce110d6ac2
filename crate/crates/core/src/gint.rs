//! Fraction-free determinants: clear one common denominator, then run
//! Bareiss elimination over ℤ or ℤ[i].

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{GaussRat, Rat};

/// Gaussian integer re + i·im.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct GInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GInt {
    fn zero() -> Self {
        GInt {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GInt) -> GInt {
        GInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(self, o: GInt) -> GInt {
        GInt {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }

    /// Division known to be exact.
    fn div_exact(&self, o: &GInt) -> GInt {
        let norm = &o.re * &o.re + &o.im * &o.im;
        GInt {
            re: (&self.re * &o.re + &self.im * &o.im) / &norm,
            im: (&self.im * &o.re - &self.re * &o.im) / &norm,
        }
    }
}

/// Exact integer arithmetic shared by the determinant and hull kernels.
/// Implemented for `BigInt` and for `i128` (callers bound their inputs).
pub(crate) trait ExactInt: Clone + Ord + Hash + Debug {
    fn int_zero() -> Self;
    fn int_one() -> Self;
    fn from_usize(n: usize) -> Self;
    fn add_r(&self, o: &Self) -> Self;
    fn sub_r(&self, o: &Self) -> Self;
    fn mul_r(&self, o: &Self) -> Self;
    /// Division known to be exact.
    fn div_r(&self, o: &Self) -> Self;
    fn neg_r(&self) -> Self;
    fn to_big(&self) -> BigInt;

    fn eq_zero(&self) -> bool {
        *self == Self::int_zero()
    }

    fn gt_zero(&self) -> bool {
        *self > Self::int_zero()
    }

    fn abs_r(&self) -> Self {
        if *self < Self::int_zero() {
            self.neg_r()
        } else {
            self.clone()
        }
    }
}

impl ExactInt for BigInt {
    fn int_zero() -> Self {
        Zero::zero()
    }
    fn int_one() -> Self {
        One::one()
    }
    fn from_usize(n: usize) -> Self {
        BigInt::from(n)
    }
    fn add_r(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_r(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_r(&self, o: &Self) -> Self {
        self * o
    }
    fn div_r(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_r(&self) -> Self {
        -self
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

impl ExactInt for i128 {
    fn int_zero() -> Self {
        0
    }
    fn int_one() -> Self {
        1
    }
    fn from_usize(n: usize) -> Self {
        n as i128
    }
    fn add_r(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_r(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_r(&self, o: &Self) -> Self {
        self * o
    }
    fn div_r(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_r(&self) -> Self {
        -self
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

/// Fraction-free (Bareiss) determinant.
pub(crate) fn det_int<T: ExactInt>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::int_one();
    }
    let mut negate = false;
    let mut prev = T::int_one();
    for k in 0..n - 1 {
        if m[k][k].eq_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].eq_zero()) else {
                return T::int_zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = m[i][j].mul_r(&m[k][k]).sub_r(&m[i][k].mul_r(&m[k][j])).div_r(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg_r()
    } else {
        d
    }
}

pub(crate) fn det_gint(mut m: Vec<Vec<GInt>>) -> GInt {
    let n = m.len();
    if n == 0 {
        return GInt {
            re: BigInt::one(),
            im: BigInt::zero(),
        };
    }
    if m.iter().flatten().all(|z| z.im.is_zero()) {
        let d: BigInt = det_int(m.into_iter().map(|r| r.into_iter().map(|z| z.re).collect()).collect());
        return GInt { re: d, im: BigInt::zero() };
    }
    let mut negate = false;
    let mut prev = GInt {
        re: BigInt::one(),
        im: BigInt::zero(),
    };
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return GInt::zero();
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].mul(&m[k][k]).sub(m[i][k].mul(&m[k][j]));
                m[i][j] = v.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        GInt { re: -d.re, im: -d.im }
    } else {
        d
    }
}

/// Least common multiple of all real and imaginary denominators.
pub(crate) fn common_denominator<'a>(entries: impl IntoIterator<Item = &'a GaussRat>) -> BigInt {
    entries.into_iter().fold(BigInt::one(), |acc, z| {
        acc.lcm(z.re.denom()).lcm(z.im.denom())
    })
}

pub(crate) fn scale_to_gint(z: &GaussRat, l: &BigInt) -> GInt {
    let part = |x: &Rat| x.numer() * (l / x.denom());
    GInt {
        re: part(&z.re),
        im: part(&z.im),
    }
}

/// det of a Gaussian-rational matrix given as rows.
pub(crate) fn det_gauss_rat(rows: &[Vec<GaussRat>]) -> GaussRat {
    let n = rows.len();
    let l = common_denominator(rows.iter().flatten());
    let m = rows.iter().map(|r| r.iter().map(|z| scale_to_gint(z, &l)).collect()).collect();
    from_scaled(det_gint(m), &num_traits::pow(l, n))
}

/// z / scale as a Gaussian rational.
pub(crate) fn from_scaled(z: GInt, scale: &BigInt) -> GaussRat {
    GaussRat::new(Rat::new(z.re, scale.clone()), Rat::new(z.im, scale.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn gaussian_det_matches_hand_value() {
        // [[1+i, 2], [3, 4-i]] → (1+i)(4-i) - 6 = 5 + 3i - 6 = -1 + 3i
        let z = |a, b| GaussRat::from_ints(a, b);
        let d = det_gauss_rat(&[vec![z(1, 1), z(2, 0)], vec![z(3, 0), z(4, -1)]]);
        assert_eq!(d, z(-1, 3));
    }

    #[test]
    fn rational_det_with_pivoting() {
        let r = |a, b| GaussRat::real(rat(a, b));
        let rows = vec![
            vec![r(0, 1), r(1, 2), r(1, 3)],
            vec![r(1, 1), r(0, 1), r(2, 1)],
            vec![r(1, 4), r(1, 1), r(0, 1)],
        ];
        // 0·(0−2) − 1/2·(0 − 1/2) + 1/3·(1 − 0) = 1/4 + 1/3
        assert_eq!(det_gauss_rat(&rows), r(7, 12));
    }

    #[test]
    fn complex_pivot_chain() {
        let z = |a, b| GaussRat::from_ints(a, b);
        let rows = vec![
            vec![z(0, 0), z(1, 1), z(2, -1)],
            vec![z(0, 2), z(1, 0), z(0, 1)],
            vec![z(3, 0), z(1, -1), z(1, 1)],
        ];
        let direct = {
            let m = &rows;
            let t = |i: usize, j: usize| &m[i][j];
            t(0, 0) * &(t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1)) - t(0, 1) * &(t(1, 0) * t(2, 2) - t(1, 2) * t(2, 0))
                + t(0, 2) * &(t(1, 0) * t(2, 1) - t(1, 1) * t(2, 0))
        };
        assert_eq!(det_gauss_rat(&rows), direct);
    }
}
