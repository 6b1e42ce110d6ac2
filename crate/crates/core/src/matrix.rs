//! Square Gaussian-rational matrices and the Hermitian subtype.
//!
//! Positivity is decided exactly: semi-definiteness from the signs of the
//! principal-minor sums (the characteristic polynomial coefficients),
//! definiteness from the leading principal minors.

use std::ops::Deref;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{GaussRat, Rat};

/// Dense n×n matrix, row-major, no symmetry constraint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenMat {
    n: usize,
    data: Vec<GaussRat>,
}

impl GenMat {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be positive");
        GenMat {
            n,
            data: vec![GaussRat::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GenMat::zeros(n);
        for i in 0..n {
            m.set(i, i, GaussRat::one());
        }
        m
    }

    /// Single-entry basis matrix E^(jk).
    pub fn unit(n: usize, j: usize, k: usize) -> Self {
        let mut m = GenMat::zeros(n);
        m.set(j, k, GaussRat::one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussRat>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(GenMat { n, data })
    }

    pub fn from_real_rows(rows: &[Vec<Rat>]) -> Result<Self> {
        GenMat::from_rows(
            rows.iter()
                .map(|r| r.iter().cloned().map(GaussRat::real).collect())
                .collect(),
        )
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        GenMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| GaussRat::from_ints(x, 0)).collect())
                .collect(),
        )
    }

    pub fn diag(values: &[Rat]) -> Self {
        let mut m = GenMat::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, GaussRat::real(v.clone()));
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRat {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRat) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<GaussRat>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<GaussRat> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &GaussRat> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussRat::is_zero)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect().is_none()
    }

    fn hermitian_defect(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in i..self.n {
                if *self.get(j, i) != self.get(i, j).conj() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn conj_transpose(&self) -> GenMat {
        let mut out = GenMat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn scale(&self, k: &Rat) -> GenMat {
        GenMat {
            n: self.n,
            data: self.data.iter().map(|x| x.scale(k)).collect(),
        }
    }

    pub fn add(&self, other: &GenMat) -> Result<GenMat> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GenMat) -> Result<GenMat> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &GenMat, f: impl Fn(&GaussRat, &GaussRat) -> GaussRat) -> Result<GenMat> {
        check_same_n(self.n, other.n)?;
        Ok(GenMat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn mul(&self, other: &GenMat) -> Result<GenMat> {
        check_same_n(self.n, other.n)?;
        let n = self.n;
        let mut out = GenMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let s: GaussRat = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    /// Exact determinant by Gaussian elimination over the Gaussian rationals.
    pub fn det(&self) -> GaussRat {
        det_rows(self.rows())
    }

    pub fn principal_minor(&self, idx: &[usize]) -> GaussRat {
        if idx.is_empty() {
            return GaussRat::one();
        }
        det_rows(
            idx.iter()
                .map(|&i| idx.iter().map(|&j| self.get(i, j).clone()).collect())
                .collect(),
        )
    }

    /// c_k = sum of all k×k principal minors, for k = 1..=n.
    ///
    /// det(tI − A) = Σ_k (−1)^k c_k t^{n−k}, so for Hermitian A every c_k is
    /// real and A ⪰ 0 exactly when all c_k ≥ 0.
    pub fn principal_minor_sums(&self) -> Vec<GaussRat> {
        (1..=self.n)
            .map(|k| (0..self.n).combinations(k).map(|idx| self.principal_minor(&idx)).sum())
            .collect()
    }

    pub fn trace(&self) -> GaussRat {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }
}

fn check_same_n(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

pub(crate) fn det_rows(m: Vec<Vec<GaussRat>>) -> GaussRat {
    crate::gint::det_gauss_rat(&m)
}

/// Exact determinant of a rational matrix given as rows.
pub fn det_rat(rows: &[Vec<Rat>]) -> Rat {
    det_rows(
        rows.iter()
            .map(|r| r.iter().cloned().map(GaussRat::real).collect())
            .collect(),
    )
    .re
}

/// Hermitian matrix: `entries[j][i] == conj(entries[i][j])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermMat(GenMat);

impl HermMat {
    pub fn new(m: GenMat) -> Result<Self> {
        match m.hermitian_defect() {
            None => Ok(HermMat(m)),
            Some((row, col)) => Err(Error::NotHermitian { row, col }),
        }
    }

    pub fn identity(n: usize) -> Self {
        HermMat(GenMat::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        HermMat(GenMat::zeros(n))
    }

    pub fn diag(values: &[Rat]) -> Self {
        HermMat(GenMat::diag(values))
    }

    pub fn from_real_rows(rows: &[Vec<Rat>]) -> Result<Self> {
        HermMat::new(GenMat::from_real_rows(rows)?)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        HermMat::new(GenMat::from_int_rows(rows)?)
    }

    /// G·G* is always Hermitian positive semi-definite.
    pub fn gram(g: &GenMat) -> Self {
        let m = g.mul(&g.conj_transpose()).expect("same dimension");
        HermMat(m)
    }

    pub fn as_gen(&self) -> &GenMat {
        &self.0
    }

    pub fn into_gen(self) -> GenMat {
        self.0
    }

    /// Real scalar multiple; stays Hermitian.
    pub fn scale(&self, k: &Rat) -> HermMat {
        HermMat(self.0.scale(k))
    }

    pub fn add(&self, other: &HermMat) -> Result<HermMat> {
        Ok(HermMat(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &HermMat) -> Result<HermMat> {
        Ok(HermMat(self.0.sub(&other.0)?))
    }

    /// (1 − t)·A + t·B.
    pub fn lerp(&self, other: &HermMat, t: &Rat) -> Result<HermMat> {
        let one_minus = Rat::from_integer(1.into()) - t;
        self.scale(&one_minus).add(&other.scale(t))
    }

    /// The determinant of a Hermitian matrix is real.
    pub fn det_re(&self) -> Rat {
        let d = self.0.det();
        debug_assert!(d.is_real());
        d.re
    }

    pub fn is_psd(&self) -> bool {
        is_psd(self)
    }

    pub fn is_pd(&self) -> bool {
        is_pd(self)
    }
}

impl Deref for HermMat {
    type Target = GenMat;
    fn deref(&self) -> &GenMat {
        &self.0
    }
}

impl AsRef<GenMat> for GenMat {
    fn as_ref(&self) -> &GenMat {
        self
    }
}

impl AsRef<GenMat> for HermMat {
    fn as_ref(&self) -> &GenMat {
        &self.0
    }
}

impl AsRef<HermMat> for HermMat {
    fn as_ref(&self) -> &HermMat {
        self
    }
}

impl TryFrom<GenMat> for HermMat {
    type Error = Error;
    fn try_from(m: GenMat) -> Result<Self> {
        HermMat::new(m)
    }
}

/// First negative principal-minor sum, as (k, c_k) with k 1-based.
pub fn psd_witness(a: &GenMat) -> Option<(usize, Rat)> {
    a.principal_minor_sums()
        .into_iter()
        .enumerate()
        .find(|(_, c)| c.re.is_negative())
        .map(|(k, c)| (k + 1, c.re))
}

pub fn is_psd(a: &HermMat) -> bool {
    psd_witness(a.as_gen()).is_none()
}

/// Sylvester: all leading principal minors strictly positive.
pub fn is_pd(a: &HermMat) -> bool {
    (1..=a.n()).all(|k| {
        let idx: Vec<usize> = (0..k).collect();
        a.principal_minor(&idx).re.is_positive()
    })
}

/// Real λ with B = λ·A entrywise, if one exists.
///
/// `proportional(0, 0)` is `Some(0)`; `proportional(0, B ≠ 0)` is `None`.
pub fn proportional(a: &GenMat, b: &GenMat) -> Result<Option<Rat>> {
    check_same_n(a.n(), b.n())?;
    let Some(pos) = a.data.iter().position(|x| !x.is_zero()) else {
        return Ok(b.is_zero().then(Rat::zero));
    };
    let ratio = &b.data[pos] / &a.data[pos];
    if !ratio.is_real() {
        return Ok(None);
    }
    let lambda = ratio.re;
    let matches = a
        .data
        .iter()
        .zip(&b.data)
        .all(|(x, y)| x.scale(&lambda) == *y);
    Ok(matches.then_some(lambda))
}

#[derive(Serialize, Deserialize)]
struct MatRepr {
    n: usize,
    entries: Vec<Vec<GaussRat>>,
}

impl Serialize for GenMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatRepr {
            n: self.n,
            entries: self.rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GenMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatRepr::deserialize(d)?;
        let m = GenMat::from_rows(repr.entries).map_err(serde::de::Error::custom)?;
        if m.n != repr.n {
            return Err(serde::de::Error::custom(format!(
                "declared n = {} but {} rows given",
                repr.n, m.n
            )));
        }
        Ok(m)
    }
}

impl Serialize for HermMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        HermMat::new(GenMat::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
