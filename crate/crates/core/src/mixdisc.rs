//! Mixed discriminants D(A_1, …, A_n).
//!
//! Two independent evaluations are provided and checked against each other:
//! the permutation sum over S_n (column j of the assembled matrix taken from
//! A_σ(j)) and the inclusion–exclusion over subsets of {1, …, n}.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gint::{self, GInt};
use crate::matrix::{GenMat, HermMat};
use crate::scalar::{factorial, pow, GaussRat, Rat};

/// Largest n accepted by the permutation route (n! determinants).
pub const PERMUTATION_LIMIT: usize = 6;
/// Largest n accepted by the subset route (2^n determinants).
pub const POLARIZATION_LIMIT: usize = 20;

/// An n-tuple of n×n matrices, as read from and written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatTuple {
    pub n: usize,
    pub mats: Vec<GenMat>,
}

impl MatTuple {
    pub fn new(mats: Vec<GenMat>) -> Result<Self> {
        let n = check_tuple(&mats)?;
        Ok(MatTuple { n, mats })
    }

    pub fn validate(&self) -> Result<()> {
        let n = check_tuple(&self.mats)?;
        if n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: n,
            });
        }
        Ok(())
    }
}

fn check_tuple<M: AsRef<GenMat>>(mats: &[M]) -> Result<usize> {
    let n = mats.len();
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    for m in mats {
        if m.as_ref().n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.as_ref().n(),
            });
        }
    }
    Ok(n)
}

fn all_hermitian<M: AsRef<GenMat>>(mats: &[M]) -> bool {
    mats.iter().all(|m| m.as_ref().is_hermitian())
}

fn divide_by_factorial(sum: GaussRat, n: usize) -> GaussRat {
    let f = Rat::from_integer(factorial(n));
    GaussRat::new(sum.re / &f, sum.im / &f)
}

/// D(A_1, …, A_n) = (1/n!) Σ_σ det[col_1(A_σ(1)) | … | col_n(A_σ(n))].
pub fn mixed_discriminant<M: AsRef<GenMat>>(mats: &[M]) -> Result<GaussRat> {
    let n = check_tuple(mats)?;
    if n > PERMUTATION_LIMIT {
        return Err(Error::OrderTooLarge {
            n,
            limit: PERMUTATION_LIMIT,
        });
    }
    // one common denominator for the whole tuple, so every assembled
    // matrix is a Gaussian-integer matrix
    let l = gint::common_denominator(mats.iter().flat_map(|m| m.as_ref().entries()));
    let scaled: Vec<Vec<GInt>> = mats
        .iter()
        .map(|m| m.as_ref().entries().map(|z| gint::scale_to_gint(z, &l)).collect())
        .collect();
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    for sigma in (0..n).permutations(n) {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| scaled[sigma[j]][i * n + j].clone()).collect())
            .collect();
        let d = gint::det_gint(rows);
        re += d.re;
        im += d.im;
    }
    let sum = gint::from_scaled(GInt { re, im }, &num_traits::pow(l, n));
    let d = divide_by_factorial(sum, n);
    if all_hermitian(mats) {
        assert!(d.is_real(), "mixed discriminant of Hermitian matrices must be real");
    }
    Ok(d)
}

/// D(A_1, …, A_n) = (1/n!) Σ_{ε ∈ {0,1}^n} (−1)^{n+Σε} det(Σ ε_i A_i), det(0) = 0.
pub fn mixed_discriminant_polarized<M: AsRef<GenMat>>(mats: &[M]) -> Result<GaussRat> {
    let n = check_tuple(mats)?;
    if n > POLARIZATION_LIMIT {
        return Err(Error::OrderTooLarge {
            n,
            limit: POLARIZATION_LIMIT,
        });
    }
    let mut sum = GaussRat::zero();
    for mask in 1u32..(1 << n) {
        let mut acc = GenMat::zeros(n);
        for (i, m) in mats.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc = acc.add(m.as_ref())?;
            }
        }
        let det = acc.det();
        if (n as u32 + mask.count_ones()).is_multiple_of(2) {
            sum += &det;
        } else {
            sum -= &det;
        }
    }
    let d = divide_by_factorial(sum, n);
    if all_hermitian(mats) {
        assert!(d.is_real(), "mixed discriminant of Hermitian matrices must be real");
    }
    Ok(d)
}

/// Real value of D over Hermitian arguments.
pub fn hermitian_mixed_discriminant<M: AsRef<HermMat>>(mats: &[M]) -> Result<Rat> {
    let gens: Vec<&GenMat> = mats.iter().map(|m| m.as_ref().as_gen()).collect();
    Ok(mixed_discriminant(&gens)?.re)
}

/// All (r_1, …, r_m) with r_i ≥ 0 and Σ r_i = total, in lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        go(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// n! / (r_1! ⋯ r_m!).
pub fn multinomial(parts: &[usize]) -> BigInt {
    let n: usize = parts.iter().sum();
    parts.iter().fold(factorial(n), |acc, &r| acc / factorial(r))
}

/// Expands `items` by repeating item i `counts[i]` times.
pub fn repeat_by<T: Clone>(items: &[T], counts: &[usize]) -> Vec<T> {
    items
        .iter()
        .zip(counts)
        .flat_map(|(x, &c)| std::iter::repeat_n(x.clone(), c))
        .collect()
}

/// Both sides of det(Σ λ_r A_r) = Σ_{|r| = n} n!/(r_1!⋯r_m!) D(A_1[r_1], …, A_m[r_m]) λ^r.
pub fn det_expansion_sides(mats: &[GenMat], lambdas: &[Rat]) -> Result<(GaussRat, GaussRat)> {
    if mats.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    if mats.len() != lambdas.len() {
        return Err(Error::DimensionMismatch {
            expected: mats.len(),
            found: lambdas.len(),
        });
    }
    let n = mats[0].n();
    for m in mats {
        if m.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.n() });
        }
    }
    let mut combo = GenMat::zeros(n);
    for (m, l) in mats.iter().zip(lambdas) {
        combo = combo.add(&m.scale(l))?;
    }
    let lhs = combo.det();

    let mut rhs = GaussRat::zero();
    for r in compositions(n, mats.len()) {
        let coeff = r
            .iter()
            .zip(lambdas)
            .fold(Rat::from_integer(multinomial(&r)), |acc, (&e, l)| acc * pow(l, e));
        if coeff.is_zero() {
            continue;
        }
        let tuple = repeat_by(mats, &r);
        rhs += &mixed_discriminant(&tuple)?.scale(&coeff);
    }
    Ok((lhs, rhs))
}

pub fn det_expansion_check(mats: &[GenMat], lambdas: &[Rat]) -> Result<bool> {
    let (lhs, rhs) = det_expansion_sides(mats, lambdas)?;
    Ok(lhs == rhs)
}

/// W with W[j][k] = D(E^(jk), A_1, …, A_{n−1}), so D(B, A_1, …) = Σ B[j][k]·W[j][k].
pub fn mixed_adjugate_gen<M: AsRef<GenMat>>(partial: &[M]) -> Result<GenMat> {
    let n = partial.len() + 1;
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    for m in partial {
        if m.as_ref().n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.as_ref().n(),
            });
        }
    }
    let mut w = GenMat::zeros(n);
    for j in 0..n {
        for k in 0..n {
            let e = GenMat::unit(n, j, k);
            let mut tuple: Vec<&GenMat> = Vec::with_capacity(n);
            tuple.push(&e);
            tuple.extend(partial.iter().map(|m| m.as_ref()));
            w.set(j, k, mixed_discriminant(&tuple)?);
        }
    }
    Ok(w)
}

pub fn mixed_adjugate<M: AsRef<HermMat>>(partial: &[M]) -> Result<HermMat> {
    let gens: Vec<&GenMat> = partial.iter().map(|m| m.as_ref().as_gen()).collect();
    let w = mixed_adjugate_gen(&gens)?;
    Ok(HermMat::new(w).expect("mixed adjugate of Hermitian matrices is Hermitian"))
}

/// Σ_{j,k} B[j][k]·W[j][k] (bilinear, no conjugation).
pub fn adjugate_pairing(b: &GenMat, w: &GenMat) -> Result<GaussRat> {
    if b.n() != w.n() {
        return Err(Error::DimensionMismatch {
            expected: w.n(),
            found: b.n(),
        });
    }
    Ok(b.entries().zip(w.entries()).map(|(x, y)| x * y).sum())
}
