//! Determinantal generalization of the AF inequality for Gram tables
//! d_ij = f(u_i, u_j) of a symmetric bilinear AF system.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ineq::GapReport;
use crate::matrix::{det_rat, is_psd, psd_witness, GenMat, HermMat};
use crate::mixdisc::hermitian_mixed_discriminant;
use crate::scalar::{pow, serde_rat, Rat};
use crate::torus;

/// Symmetric (r+1)×(r+1) table of pairings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramTable {
    pub r: usize,
    #[serde(with = "serde_rat::table")]
    pub d: Vec<Vec<Rat>>,
}

impl GramTable {
    pub fn new(d: Vec<Vec<Rat>>) -> Result<Self> {
        let size = d.len();
        if size < 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: size });
        }
        let t = GramTable { r: size - 1, d };
        t.validate()?;
        Ok(t)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        GramTable::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let size = self.r + 1;
        if self.r == 0 || self.d.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: self.d.len(),
            });
        }
        for row in &self.d {
            if row.len() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    found: row.len(),
                });
            }
        }
        for i in 0..size {
            for j in i + 1..size {
                if self.d[i][j] != self.d[j][i] {
                    return Err(Error::AsymmetricTable { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.d[i][j]
    }

    pub fn scale(&self, k: &Rat) -> GramTable {
        GramTable {
            r: self.r,
            d: self.d.iter().map(|row| row.iter().map(|x| x * k).collect()).collect(),
        }
    }

    /// Appends u_{r+1} with all pairings zero.
    pub fn pad_zero(&self) -> GramTable {
        let mut d: Vec<Vec<Rat>> = self
            .d
            .iter()
            .map(|row| {
                let mut row = row.clone();
                row.push(Rat::zero());
                row
            })
            .collect();
        d.push(vec![Rat::zero(); self.r + 2]);
        GramTable { r: self.r + 1, d }
    }
}

/// (d_0i·d_0j − d_00·d_ij)_{i,j = 1..r}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShephardMatrix(#[serde(with = "serde_rat::table")] pub Vec<Vec<Rat>>);

impl ShephardMatrix {
    pub fn det(&self) -> Rat {
        det_rat(&self.0)
    }
}

pub fn shephard_matrix(g: &GramTable) -> Result<ShephardMatrix> {
    g.validate()?;
    let d = &g.d;
    Ok(ShephardMatrix(
        (1..=g.r)
            .map(|i| (1..=g.r).map(|j| &d[0][i] * &d[0][j] - &d[0][0] * &d[i][j]).collect())
            .collect(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub psd: bool,
    /// 1-based k of the first negative principal-minor sum c_k, with its value.
    pub witness: Option<PsdWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsdWitness {
    pub k: usize,
    #[serde(with = "serde_rat")]
    pub value: Rat,
}

pub fn check_psd_shephard(g: &GramTable) -> Result<PsdVerdict> {
    let s = shephard_matrix(g)?;
    let m = GenMat::from_real_rows(&s.0)?;
    let witness = psd_witness(&m).map(|(k, value)| PsdWitness { k, value });
    Ok(PsdVerdict {
        psd: witness.is_none(),
        witness,
    })
}

/// Both sides of det(S) = (−1)^r · d00^{r−1} · det(d_ij)_{i,j=0..r}.
pub fn det_identity_sides(g: &GramTable) -> Result<(Rat, Rat)> {
    let lhs = shephard_matrix(g)?.det();
    let sign = if g.r.is_multiple_of(2) { Rat::one() } else { -Rat::one() };
    let rhs = sign * pow(&g.d[0][0], g.r - 1) * det_rat(&g.d);
    Ok((lhs, rhs))
}

pub fn det_identity_check(g: &GramTable) -> Result<bool> {
    let (lhs, rhs) = det_identity_sides(g)?;
    Ok(lhs == rhs)
}

/// (d01² − d00d11)(d02² − d00d22) ≥ (d01d02 − d00d12)².
pub fn r2_inequality(g: &GramTable) -> Result<GapReport> {
    g.validate()?;
    if g.r != 2 {
        return Err(Error::OutOfRange {
            name: "r",
            value: g.r,
            min: 2,
            max: 2,
        });
    }
    let d = &g.d;
    let a = &d[0][1] * &d[0][1] - &d[0][0] * &d[1][1];
    let b = &d[0][2] * &d[0][2] - &d[0][0] * &d[2][2];
    let c = &d[0][1] * &d[0][2] - &d[0][0] * &d[1][2];
    let report = GapReport::new(a * b, &c * &c);
    if report.gap.is_negative() {
        return Err(Error::Violated {
            inequality: "r = 2 determinantal inequality",
            detail: format!("gap = {}", report.gap),
        });
    }
    Ok(report)
}

/// If d01² = d00·d11 then d01·d02 = d00·d12 (vacuously true otherwise).
pub fn equality_propagates(g: &GramTable) -> bool {
    let d = &g.d;
    let premise = &d[0][1] * &d[0][1] == &d[0][0] * &d[1][1];
    !premise || &d[0][1] * &d[0][2] == &d[0][0] * &d[1][2]
}

fn build_table(classes: &[HermMat], rest: &[HermMat], pairing: impl Fn(&[&HermMat]) -> Result<Rat>) -> Result<GramTable> {
    if classes.len() < 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: classes.len(),
        });
    }
    let n = classes[0].n();
    if rest.len() + 2 != n {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(2),
            found: rest.len(),
        });
    }
    let all_psd = classes.iter().chain(rest).all(is_psd);
    if !all_psd {
        log::warn!("gram table built from matrices that are not all positive semi-definite");
    }
    let size = classes.len();
    let mut d = vec![vec![Rat::zero(); size]; size];
    for i in 0..size {
        for j in i..size {
            let mut t: Vec<&HermMat> = vec![&classes[i], &classes[j]];
            t.extend(rest);
            let v = pairing(&t)?;
            if all_psd && v.is_negative() {
                return Err(Error::NegativePairing { i, j, value: v });
            }
            d[j][i] = v.clone();
            d[i][j] = v;
        }
    }
    GramTable::new(d)
}

/// d_ij = D(A_i, A_j, B_3, …, B_n).
pub fn gram_from_discriminants(classes: &[HermMat], rest: &[HermMat]) -> Result<GramTable> {
    build_table(classes, rest, |t| hermitian_mixed_discriminant(t))
}

/// d_ij = β_i·β_j·γ_3⋯γ_n on the flat torus, = n!·2ⁿ·D(…).
pub fn gram_from_torus(classes: &[HermMat], rest: &[HermMat]) -> Result<GramTable> {
    build_table(classes, rest, |t| torus::intersection_number_of(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn r1_is_the_classical_gap() {
        let g = GramTable::from_ints(&[&[2, 5], &[5, 3]]).unwrap();
        let s = shephard_matrix(&g).unwrap();
        assert_eq!(s.0, vec![vec![int(25 - 6)]]);
        assert!(check_psd_shephard(&g).unwrap().psd);
        assert!(det_identity_check(&g).unwrap());
    }

    #[test]
    fn constant_table_gives_zero_matrix() {
        let g = GramTable::from_ints(&[&[4, 4, 4], &[4, 4, 4], &[4, 4, 4]]).unwrap();
        let s = shephard_matrix(&g).unwrap();
        assert!(s.0.iter().flatten().all(Zero::is_zero));
        let r = r2_inequality(&g).unwrap();
        assert!(r.equality);
    }

    #[test]
    fn inflated_d00_fails_with_witness() {
        // d01² − d00·d11 < 0
        let g = GramTable::from_ints(&[&[10, 1, 1], &[1, 1, 0], &[1, 0, 1]]).unwrap();
        let v = check_psd_shephard(&g).unwrap();
        assert!(!v.psd);
        let w = v.witness.unwrap();
        assert_eq!(w.k, 1);
        assert_eq!(w.value, int(-18));
    }

    #[test]
    fn asymmetric_table_rejected() {
        let g = GramTable {
            r: 1,
            d: vec![vec![int(1), int(2)], vec![int(3), int(1)]],
        };
        assert_eq!(shephard_matrix(&g), Err(Error::AsymmetricTable { i: 0, j: 1 }));
    }

    #[test]
    fn identity_with_vanishing_d00() {
        let g = GramTable::from_ints(&[&[0, 1, 2], &[1, 3, -1], &[2, -1, 5]]).unwrap();
        let (l, r) = det_identity_sides(&g).unwrap();
        assert_eq!(l, r);
        assert!(r.is_zero());
    }

    #[test]
    fn r2_requires_r2() {
        let g = GramTable::from_ints(&[&[1, 1], &[1, 1]]).unwrap();
        assert!(matches!(r2_inequality(&g), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn identity_classes_table() {
        let i = HermMat::identity(2);
        let g = gram_from_torus(&[i.clone(), i.clone()], &[]).unwrap();
        assert_eq!(g.d, vec![vec![int(8), int(8)], vec![int(8), int(8)]]);
        let g = gram_from_discriminants(&[i.clone(), i], &[]).unwrap();
        assert_eq!(g.d, vec![vec![int(1), int(1)], vec![int(1), int(1)]]);
    }

    #[test]
    fn gram_json() {
        let g = GramTable::from_ints(&[&[1, 2], &[2, 5]]).unwrap();
        let js = serde_json::to_string(&g).unwrap();
        assert_eq!(js, r#"{"r":1,"d":[["1","2"],["2","5"]]}"#);
    }
}
