//! Alexandrov–Fenchel type inequality verdicts over both engines.
//!
//! Every gap is an exact rational. Floating point only enters the
//! Brunn–Minkowski reports, through the m-th roots.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::convexvol::{self, homothety, minkowski_combination, mixed_volume, Polytope};
use crate::error::{Error, Result};
use crate::matrix::{is_pd, is_psd, proportional, HermMat};
use crate::mixdisc::{hermitian_mixed_discriminant, repeat_by};
use crate::scalar::{pow, rat_string, serde_rat, to_f64, Rat};

/// Verdict for one inequality instance `lhs ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    #[serde(with = "serde_rat")]
    pub lhs: Rat,
    #[serde(with = "serde_rat")]
    pub rhs: Rat,
    #[serde(with = "serde_rat")]
    pub gap: Rat,
    pub equality: bool,
    /// Proportionality constant, when one was found.
    #[serde(rename = "lambda", with = "serde_rat::option")]
    pub certificate: Option<Rat>,
    /// Whether the equality case is characterized for these inputs
    /// (strict positivity of the fixed arguments). Not part of the wire format.
    #[serde(skip)]
    pub characterized: bool,
}

impl GapReport {
    pub fn new(lhs: Rat, rhs: Rat) -> Self {
        let gap = &lhs - &rhs;
        GapReport {
            equality: gap.is_zero(),
            lhs,
            rhs,
            gap,
            certificate: None,
            characterized: false,
        }
    }

    fn ensure_nonnegative(self, inequality: &'static str) -> Result<Self> {
        if self.gap.is_negative() {
            return Err(Error::Violated {
                inequality,
                detail: format!("gap = {} < 0", rat_string(&self.gap)),
            });
        }
        Ok(self)
    }
}

fn shape_check(n: usize, mats: &[&HermMat], expected_len: usize) -> Result<()> {
    if mats.len() != expected_len {
        return Err(Error::DimensionMismatch {
            expected: expected_len,
            found: mats.len(),
        });
    }
    for m in mats {
        if m.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.n() });
        }
    }
    Ok(())
}

fn require_psd(mats: &[&HermMat], what: &str) -> Result<()> {
    for (i, m) in mats.iter().enumerate() {
        if !is_psd(m) {
            return Err(Error::NotPsd {
                what: format!("{what} #{i}"),
            });
        }
    }
    Ok(())
}

/// D(A, B, rest)² ≥ D(A, A, rest)·D(B, B, rest), equality iff B = λA when A and rest are definite.
pub fn af_gap_discriminant(a: &HermMat, b: &HermMat, rest: &[HermMat]) -> Result<GapReport> {
    let n = a.n();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    let mut all: Vec<&HermMat> = vec![a, b];
    all.extend(rest);
    shape_check(n, &all, n)?;
    require_psd(&[a], "A")?;
    require_psd(&rest.iter().collect::<Vec<_>>(), "fixed matrix")?;

    let disc = |x: &HermMat, y: &HermMat| {
        let mut t: Vec<&HermMat> = vec![x, y];
        t.extend(rest);
        hermitian_mixed_discriminant(&t)
    };
    let dab = disc(a, b)?;
    let daa = disc(a, a)?;
    let dbb = disc(b, b)?;
    let mut report = GapReport::new(&dab * &dab, daa * dbb).ensure_nonnegative("mixed discriminant AF")?;

    report.certificate = proportional(a, b)?;
    report.characterized = is_pd(a) && rest.iter().all(is_pd);
    if report.characterized && report.equality != report.certificate.is_some() {
        return Err(Error::Violated {
            inequality: "mixed discriminant AF equality case",
            detail: format!(
                "equality = {}, proportional = {}",
                report.equality,
                report.certificate.is_some()
            ),
        });
    }
    Ok(report)
}

/// V(K, L, rest)² ≥ V(K, K, rest)·V(L, L, rest). The certificate is a
/// homothety ratio when L = λK + t; no equality characterization is claimed.
pub fn af_gap_volume(k: &Polytope, l: &Polytope, rest: &[Polytope]) -> Result<GapReport> {
    let d = k.dim();
    if rest.len() + 2 != d {
        return Err(Error::DimensionMismatch {
            expected: d.saturating_sub(2),
            found: rest.len(),
        });
    }
    let vol = |x: &Polytope, y: &Polytope| {
        let mut t = vec![x.clone(), y.clone()];
        t.extend_from_slice(rest);
        mixed_volume(&t)
    };
    let vkl = vol(k, l)?;
    let vkk = vol(k, k)?;
    let vll = vol(l, l)?;
    let mut report = GapReport::new(&vkl * &vkl, vkk * vll).ensure_nonnegative("mixed volume AF")?;
    report.certificate = homothety(k, l);
    if report.certificate.is_some() && !report.equality {
        return Err(Error::Violated {
            inequality: "mixed volume AF equality case",
            detail: "homothetic bodies with a strict gap".into(),
        });
    }
    Ok(report)
}

fn check_m(m: usize, n: usize) -> Result<()> {
    if m < 2 || m > n {
        return Err(Error::OutOfRange {
            name: "m",
            value: m,
            min: 2,
            max: n,
        });
    }
    Ok(())
}

/// D(A_1, …, A_n)^m ≥ Π_{i ≤ m} D(A_i[m], A_{m+1}, …, A_n).
pub fn af_m_fold_discriminant(tuple: &[HermMat], m: usize) -> Result<GapReport> {
    let n = tuple.len();
    check_m(m, n)?;
    let refs: Vec<&HermMat> = tuple.iter().collect();
    shape_check(n, &refs, n)?;
    require_psd(&refs, "matrix")?;

    let lhs = pow(&hermitian_mixed_discriminant(&refs)?, m);
    let mut rhs = Rat::from_integer(1.into());
    for i in 0..m {
        let mut t = vec![refs[i]; m];
        t.extend_from_slice(&refs[m..]);
        rhs *= hermitian_mixed_discriminant(&t)?;
    }
    let mut report = GapReport::new(lhs, rhs).ensure_nonnegative("m-fold mixed discriminant AF")?;

    if m == 2 {
        report.certificate = proportional(&tuple[0], &tuple[1])?;
    }
    report.characterized = tuple.iter().all(is_pd);
    if report.characterized {
        let all_prop = all_proportional(&tuple[..m])?;
        if report.equality != all_prop {
            return Err(Error::Violated {
                inequality: "m-fold mixed discriminant AF equality case",
                detail: format!("equality = {}, proportional = {}", report.equality, all_prop),
            });
        }
    }
    Ok(report)
}

/// Every matrix is a real multiple of the first.
pub fn all_proportional(mats: &[HermMat]) -> Result<bool> {
    for m in &mats[1..] {
        if proportional(&mats[0], m)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// V(K_1, …, K_d)^m ≥ Π_{i ≤ m} V(K_i[m], K_{m+1}, …, K_d).
pub fn af_m_fold_volume(bodies: &[Polytope], m: usize) -> Result<GapReport> {
    let d = bodies.len();
    check_m(m, d)?;
    let lhs = pow(&mixed_volume(bodies)?, m);
    let mut rhs = Rat::from_integer(1.into());
    for i in 0..m {
        let mut t = vec![bodies[i].clone(); m];
        t.extend_from_slice(&bodies[m..]);
        rhs *= mixed_volume(&t)?;
    }
    let report = GapReport::new(lhs, rhs).ensure_nonnegative("m-fold mixed volume AF")?;
    let homothetic = bodies[1..m].iter().all(|b| homothety(&bodies[0], b).is_some());
    if homothetic && !report.equality {
        return Err(Error::Violated {
            inequality: "m-fold mixed volume AF equality case",
            detail: "homothetic bodies with a strict gap".into(),
        });
    }
    Ok(report)
}

/// Sampled m-th-root function λ ↦ F((1−λ)X_0 + λX_1 [m], rest)^{1/m} on a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcavityReport {
    #[serde(with = "serde_rat::vec")]
    pub grid: Vec<Rat>,
    /// Exact inner values before the root is taken.
    #[serde(with = "serde_rat::vec")]
    pub exact: Vec<Rat>,
    pub values: Vec<f64>,
    /// value − chord at each grid point; ≥ 0 under concavity.
    pub chord_gaps: Vec<f64>,
    pub midpoint_violation: f64,
    pub chord_violation: f64,
    pub max_violation: f64,
}

impl ConcavityReport {
    fn from_exact(grid: Vec<Rat>, exact: Vec<Rat>, m: usize) -> Self {
        let values: Vec<f64> = exact.iter().map(|x| to_f64(x).powf(1.0 / m as f64)).collect();
        let last = values.len() - 1;
        let chord_gaps: Vec<f64> = grid
            .iter()
            .zip(&values)
            .map(|(t, v)| {
                let t = to_f64(t);
                v - ((1.0 - t) * values[0] + t * values[last])
            })
            .collect();
        let midpoint_violation = (1..last)
            .map(|i| ((values[i - 1] + values[i + 1]) / 2.0 - values[i]).max(0.0))
            .fold(0.0, f64::max);
        let chord_violation = chord_gaps.iter().map(|g| (-g).max(0.0)).fold(0.0, f64::max);
        ConcavityReport {
            grid,
            exact,
            values,
            chord_gaps,
            midpoint_violation,
            chord_violation,
            max_violation: midpoint_violation.max(chord_violation),
        }
    }
}

/// 0, 1/(g−1), …, 1.
pub fn uniform_grid(size: usize) -> Result<Vec<Rat>> {
    if size < 3 {
        return Err(Error::OutOfRange {
            name: "grid",
            value: size,
            min: 3,
            max: usize::MAX,
        });
    }
    Ok((0..size)
        .map(|k| Rat::new((k as i64).into(), ((size - 1) as i64).into()))
        .collect())
}

pub fn bm_concavity_discriminant(
    a0: &HermMat,
    a1: &HermMat,
    rest: &[HermMat],
    m: usize,
    grid_size: usize,
) -> Result<ConcavityReport> {
    let n = a0.n();
    check_m(m, n)?;
    let mut all: Vec<&HermMat> = vec![a0, a1];
    all.extend(rest);
    shape_check(n, &all, n - m + 2)?;
    require_psd(&all, "matrix")?;
    let grid = uniform_grid(grid_size)?;
    let exact = grid
        .iter()
        .map(|t| {
            let x = a0.lerp(a1, t)?;
            let mut tuple = vec![&x; m];
            tuple.extend(rest);
            let d = hermitian_mixed_discriminant(&tuple)?;
            if d.is_negative() {
                return Err(Error::Violated {
                    inequality: "mixed discriminant nonnegativity",
                    detail: format!("D = {}", rat_string(&d)),
                });
            }
            Ok(d)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcavityReport::from_exact(grid, exact, m))
}

pub fn bm_concavity_volume(
    k0: &Polytope,
    k1: &Polytope,
    rest: &[Polytope],
    m: usize,
    grid_size: usize,
) -> Result<ConcavityReport> {
    let d = k0.dim();
    check_m(m, d)?;
    if rest.len() + m != d {
        return Err(Error::DimensionMismatch {
            expected: d - m,
            found: rest.len(),
        });
    }
    let grid = uniform_grid(grid_size)?;
    let one = Rat::from_integer(1.into());
    let exact = grid
        .iter()
        .map(|t| {
            let x = minkowski_combination(&[k0.clone(), k1.clone()], &[&one - t, t.clone()])?;
            let mut tuple = repeat_by(&[x], &[m]);
            tuple.extend_from_slice(rest);
            convexvol::mixed_volume(&tuple)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConcavityReport::from_exact(grid, exact, m))
}

/// Candidate proportionality constant d01 / d00.
pub fn equality_lambda(d00: &Rat, d01: &Rat) -> Result<Rat> {
    if d00.is_zero() {
        return Err(Error::DegeneratePairing);
    }
    Ok(d01 / d00)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn diag(v: &[i64]) -> HermMat {
        HermMat::diag(&v.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn proportional_pair_has_zero_gap() {
        let a = HermMat::from_int_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 2]]).unwrap();
        let b = a.scale(&int(2));
        let r = af_gap_discriminant(&a, &b, &[HermMat::identity(3)]).unwrap();
        assert!(r.equality);
        assert_eq!(r.certificate, Some(int(2)));
        assert!(r.characterized);
    }

    #[test]
    fn two_by_two_hand_value() {
        let r = af_gap_discriminant(&diag(&[1, 2]), &diag(&[2, 1]), &[]).unwrap();
        assert_eq!(r.lhs, rat(25, 4));
        assert_eq!(r.rhs, int(4));
        assert_eq!(r.gap, rat(9, 4));
        assert!(!r.equality);
        assert_eq!(r.certificate, None);
    }

    #[test]
    fn indefinite_b_is_allowed() {
        let r = af_gap_discriminant(&diag(&[1, 1]), &diag(&[1, -1]), &[]).unwrap();
        // D(I, B) = 0, D(B, B) = −1, D(I, I) = 1
        assert_eq!(r.lhs, int(0));
        assert_eq!(r.rhs, int(-1));
        assert_eq!(r.gap, int(1));
    }

    #[test]
    fn non_psd_a_is_rejected() {
        let err = af_gap_discriminant(&diag(&[1, -1]), &diag(&[1, 1]), &[]).unwrap_err();
        assert!(matches!(err, Error::NotPsd { .. }));
    }

    #[test]
    fn semidefinite_inputs_are_not_characterized() {
        let a = diag(&[1, 0, 0]);
        let b = diag(&[0, 1, 0]);
        let c = diag(&[0, 0, 1]);
        let r = af_gap_discriminant(&a, &b, &[c]).unwrap();
        assert!(!r.characterized);
    }

    #[test]
    fn m_fold_reduces_to_pairwise() {
        let a = HermMat::from_int_rows(&[&[3, 1, 0], &[1, 2, 0], &[0, 0, 1]]).unwrap();
        let b = diag(&[1, 2, 5]);
        let c = diag(&[2, 1, 1]);
        let pair = af_gap_discriminant(&a, &b, std::slice::from_ref(&c)).unwrap();
        let fold = af_m_fold_discriminant(&[a, b, c], 2).unwrap();
        assert_eq!(pair, fold);
    }

    #[test]
    fn m_fold_three_diagonals() {
        let r = af_m_fold_discriminant(&[diag(&[1, 1, 1]), diag(&[1, 2, 3]), diag(&[2, 1, 1])], 3).unwrap();
        assert!(r.gap.is_positive());
        assert!(af_m_fold_discriminant(&[diag(&[1, 1, 1]), diag(&[1, 2, 3])], 3).is_err());
    }

    #[test]
    fn volume_gap_homothety() {
        let k = Polytope::from_int_points(2, &[&[0, 0], &[3, 0], &[1, 2]]).unwrap();
        let l = convexvol::dilate(&k, &int(2)).unwrap().translate(&[int(1), int(1)]).unwrap();
        let r = af_gap_volume(&k, &l, &[]).unwrap();
        assert!(r.equality);
        assert_eq!(r.certificate, Some(int(2)));
    }

    #[test]
    fn volume_gap_square_and_segment() {
        let k = Polytope::cuboid(&[int(1), int(1)]).unwrap();
        let l = Polytope::segment(vec![int(1), int(0)]).unwrap();
        let r = af_gap_volume(&k, &l, &[]).unwrap();
        // V(K,L) = 1/2, V(K,K) = 1, V(L,L) = 0
        assert_eq!(r.lhs, rat(1, 4));
        assert_eq!(r.rhs, int(0));
    }

    #[test]
    fn concavity_constant_when_equal() {
        let a = diag(&[1, 2]);
        let r = bm_concavity_discriminant(&a, &a, &[], 2, 11).unwrap();
        assert!(r.max_violation <= 1e-15);
        assert!(r.values.iter().all(|v| (v - 2f64.sqrt()).abs() < 1e-15));
    }

    #[test]
    fn concavity_commuting_diagonals() {
        let r = bm_concavity_discriminant(&diag(&[1, 4]), &diag(&[3, 1]), &[], 2, 11).unwrap();
        assert!(r.max_violation <= 1e-9);
        for (t, v) in r.grid.iter().zip(&r.values) {
            let t = to_f64(t);
            let closed = (((1.0 - t) + 3.0 * t) * ((1.0 - t) * 4.0 + t)).sqrt();
            assert!((v - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_bounds() {
        assert!(uniform_grid(2).is_err());
        let g = uniform_grid(3).unwrap();
        assert_eq!(g, vec![int(0), rat(1, 2), int(1)]);
    }

    #[test]
    fn lambda_ratio() {
        assert_eq!(equality_lambda(&int(2), &int(6)).unwrap(), int(3));
        assert_eq!(equality_lambda(&int(5), &int(5)).unwrap(), int(1));
        assert_eq!(equality_lambda(&int(0), &int(1)), Err(Error::DegeneratePairing));
    }

    #[test]
    fn report_json_has_five_keys() {
        let mut r = GapReport::new(rat(25, 4), int(4));
        r.certificate = Some(int(2));
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(js, r#"{"lhs":"25/4","rhs":"4","gap":"9/4","equality":false,"lambda":"2"}"#);
    }
}
