//! Constant (1,1)-classes on the flat torus T = ℂⁿ/(ℤ + iℤ)ⁿ, Vol(T) = 1.
//!
//! A Hermitian matrix A stands for the class of i·Σ a_jk dz^j ∧ dz̄^k, and
//! the intersection number of n such classes is n!·2ⁿ·D(A_1, …, A_n).
//! Nef ⟺ PSD, Kähler ⟺ PD, and nef-and-big ⟺ PSD with det > 0 ⟺ PD.
//!
//! The (n−1, n−1) class γ_1 ∧ ⋯ ∧ γ_{n−1} is represented by its mixed
//! adjugate W, the matrix of the pairing β ↦ β·γ_1⋯γ_{n−1} (up to the
//! constant n!·2ⁿ), so proportionality of such classes is proportionality
//! of their adjugates.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ineq::{equality_lambda, GapReport};
use crate::matrix::{is_pd, is_psd, proportional, HermMat};
use crate::mixdisc::{hermitian_mixed_discriminant, mixed_adjugate};
use crate::scalar::{factorial, pow, serde_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusClass {
    mat: HermMat,
    nef: bool,
    big: bool,
    kahler: bool,
}

impl TorusClass {
    pub fn new(mat: HermMat) -> Self {
        let nef = is_psd(&mat);
        let big = nef && mat.det_re().is_positive();
        let kahler = is_pd(&mat);
        assert_eq!(big, kahler, "nef and big must coincide with Kähler on the torus");
        TorusClass { mat, nef, big, kahler }
    }

    pub fn mat(&self) -> &HermMat {
        &self.mat
    }

    pub fn is_nef(&self) -> bool {
        self.nef
    }

    /// Big, given nef: γⁿ > 0.
    pub fn is_big(&self) -> bool {
        self.big
    }

    pub fn is_kahler(&self) -> bool {
        self.kahler
    }
}

impl From<HermMat> for TorusClass {
    fn from(mat: HermMat) -> Self {
        TorusClass::new(mat)
    }
}

impl AsRef<HermMat> for TorusClass {
    fn as_ref(&self) -> &HermMat {
        &self.mat
    }
}

#[derive(Serialize)]
struct TorusClassOut<'a> {
    #[serde(flatten)]
    mat: &'a HermMat,
    nef: bool,
    big: bool,
    kahler: bool,
}

impl Serialize for TorusClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TorusClassOut {
            mat: &self.mat,
            nef: self.nef,
            big: self.big,
            kahler: self.kahler,
        }
        .serialize(s)
    }
}

/// Flags in the input, if any, are ignored and recomputed.
impl<'de> Deserialize<'de> for TorusClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(TorusClass::new(HermMat::deserialize(d)?))
    }
}

/// n!·2ⁿ.
pub fn torus_constant(n: usize) -> Rat {
    Rat::from_integer(factorial(n) * num_traits::pow(BigInt::from(2), n))
}

pub fn intersection_number_of<M: AsRef<HermMat>>(mats: &[M]) -> Result<Rat> {
    let n = mats.len();
    Ok(torus_constant(n) * hermitian_mixed_discriminant(mats)?)
}

/// γ_1·γ_2⋯γ_n.
pub fn intersection_number(classes: &[TorusClass]) -> Result<Rat> {
    intersection_number_of(classes)
}

fn require_kahler(classes: &[&TorusClass], what: &str) -> Result<()> {
    for (i, c) in classes.iter().enumerate() {
        if !c.kahler {
            return Err(Error::NotPd {
                what: format!("{what} #{i}"),
            });
        }
    }
    Ok(())
}

fn require_nef_and_big(classes: &[&TorusClass]) -> Result<()> {
    for (i, c) in classes.iter().enumerate() {
        if !c.nef {
            return Err(Error::NotPsd {
                what: format!("class #{i}"),
            });
        }
        if !c.big {
            return Err(Error::NotBig { index: i });
        }
    }
    Ok(())
}

fn check_n(n: usize, classes: &[&TorusClass]) -> Result<()> {
    if classes.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: classes.len(),
        });
    }
    for c in classes {
        if c.mat.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.mat.n(),
            });
        }
    }
    Ok(())
}

/// (α·c·c_3⋯c_n)² ≥ (α²·c_3⋯c_n)(c²·c_3⋯c_n) with c, c_i Kähler and α arbitrary;
/// equality iff α = λc.
pub fn af_gap_torus(alpha: &TorusClass, c: &TorusClass, rest: &[TorusClass]) -> Result<GapReport> {
    let n = c.mat.n();
    let mut all = vec![alpha, c];
    all.extend(rest);
    check_n(n, &all)?;
    require_kahler(&[c], "c")?;
    require_kahler(&rest.iter().collect::<Vec<_>>(), "fixed class")?;

    let num = |x: &TorusClass, y: &TorusClass| {
        let mut t: Vec<&HermMat> = vec![&x.mat, &y.mat];
        t.extend(rest.iter().map(|r| &r.mat));
        intersection_number_of(&t)
    };
    let ac = num(alpha, c)?;
    let mut report = GapReport::new(&ac * &ac, num(alpha, alpha)? * num(c, c)?);
    if report.gap.is_negative() {
        return Err(Error::Violated {
            inequality: "Kähler class AF",
            detail: format!("gap = {}", report.gap),
        });
    }
    report.certificate = proportional(&c.mat, &alpha.mat)?;
    report.characterized = true;
    if report.equality != report.certificate.is_some() {
        return Err(Error::Violated {
            inequality: "Kähler class AF equality case",
            detail: format!("equality = {}", report.equality),
        });
    }
    Ok(report)
}

/// s_m = γ_1^m·γ_2^{n−m} for m = 0..=n, checked log-concave.
pub fn kt_sequence(g1: &TorusClass, g2: &TorusClass) -> Result<Vec<Rat>> {
    let n = g1.mat.n();
    if g2.mat.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g2.mat.n(),
        });
    }
    for (i, g) in [g1, g2].iter().enumerate() {
        if !g.nef {
            return Err(Error::NotPsd {
                what: format!("class #{i}"),
            });
        }
    }
    let seq = (0..=n)
        .map(|m| {
            let mut t = vec![&g1.mat; m];
            t.extend(std::iter::repeat_n(&g2.mat, n - m));
            intersection_number_of(&t)
        })
        .collect::<Result<Vec<_>>>()?;
    for m in 1..n {
        if &seq[m] * &seq[m] < &seq[m + 1] * &seq[m - 1] {
            return Err(Error::Violated {
                inequality: "Khovanskii–Teissier",
                detail: format!("s_{m}² < s_{}·s_{}", m + 1, m - 1),
            });
        }
    }
    Ok(seq)
}

/// Outcome of checking the two-class equality characterization on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub report: GapReport,
    /// (γ_1·γ_2·γ_3⋯γ_n) / (γ_1²·γ_3⋯γ_n).
    #[serde(with = "serde_rat")]
    pub lambda: Rat,
    pub adjugates_proportional: bool,
    #[serde(with = "serde_rat::option")]
    pub adjugate_ratio: Option<Rat>,
    pub matrices_proportional: bool,
    /// d01·d02 = d00·d12 with β_2 = ω the standard Kähler class.
    pub propagation: bool,
}

impl PairVerdict {
    /// equality ⟺ adjugates proportional ⟺ matrices proportional, and on
    /// equality the adjugate ratio is λ and the propagation identity holds.
    pub fn holds(&self) -> bool {
        let eq = self.report.equality;
        let ratio_ok = !eq || self.adjugate_ratio.as_ref() == Some(&self.lambda);
        eq == self.adjugates_proportional && eq == self.matrices_proportional && ratio_ok && (!eq || self.propagation)
    }
}

pub fn equality_theorem_pair(g1: &TorusClass, g2: &TorusClass, rest: &[TorusClass]) -> Result<PairVerdict> {
    let n = g1.mat.n();
    let mut all = vec![g1, g2];
    all.extend(rest);
    check_n(n, &all)?;
    require_nef_and_big(&all)?;

    let rest_mats: Vec<&HermMat> = rest.iter().map(|r| &r.mat).collect();
    let num = |x: &HermMat, y: &HermMat| {
        let mut t: Vec<&HermMat> = vec![x, y];
        t.extend(&rest_mats);
        intersection_number_of(&t)
    };
    let d00 = num(&g1.mat, &g1.mat)?;
    let d01 = num(&g1.mat, &g2.mat)?;
    let d11 = num(&g2.mat, &g2.mat)?;
    let report = GapReport::new(&d01 * &d01, &d00 * &d11);
    if report.gap.is_negative() {
        return Err(Error::Violated {
            inequality: "nef and big AF",
            detail: format!("gap = {}", report.gap),
        });
    }
    let lambda = equality_lambda(&d00, &d01)?;

    let omega = HermMat::identity(n);
    let d02 = num(&g1.mat, &omega)?;
    let d12 = num(&g2.mat, &omega)?;
    let propagation = &d01 * &d02 == &d00 * &d12;

    let adj = |g: &HermMat| {
        let mut t: Vec<&HermMat> = vec![g];
        t.extend(&rest_mats);
        mixed_adjugate(&t)
    };
    let w1 = adj(&g1.mat)?;
    let w2 = adj(&g2.mat)?;
    let adjugate_ratio = proportional(&w1, &w2)?;
    Ok(PairVerdict {
        report,
        lambda,
        adjugates_proportional: adjugate_ratio.is_some(),
        adjugate_ratio,
        matrices_proportional: proportional(&g1.mat, &g2.mat)?.is_some(),
        propagation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiVerdict {
    pub report: GapReport,
    /// Number of multi-indices (i_1 ≤ ⋯ ≤ i_{m−1}) whose adjugates were compared.
    pub adjugates_compared: usize,
    pub adjugates_proportional: bool,
    pub matrices_proportional: bool,
}

impl MultiVerdict {
    pub fn holds(&self) -> bool {
        self.report.equality == self.adjugates_proportional && self.report.equality == self.matrices_proportional
    }
}

/// (γ_1⋯γ_n)^m = Π_{i ≤ m}(γ_i^m·γ_{m+1}⋯γ_n) ⟺ all γ_{i_1}∧⋯∧γ_{i_{m−1}}∧γ_{m+1}∧⋯∧γ_n proportional.
pub fn equality_theorem_m(classes: &[TorusClass], m: usize) -> Result<MultiVerdict> {
    let n = classes.len();
    if m < 2 || m > n {
        return Err(Error::OutOfRange {
            name: "m",
            value: m,
            min: 2,
            max: n,
        });
    }
    let refs: Vec<&TorusClass> = classes.iter().collect();
    check_n(n, &refs)?;
    require_nef_and_big(&refs)?;
    let mats: Vec<&HermMat> = classes.iter().map(|c| &c.mat).collect();

    let lhs = pow(&intersection_number_of(&mats)?, m);
    let mut rhs = Rat::from_integer(1.into());
    for i in 0..m {
        let mut t = vec![mats[i]; m];
        t.extend_from_slice(&mats[m..]);
        rhs *= intersection_number_of(&t)?;
    }
    let report = GapReport::new(lhs, rhs);
    if report.gap.is_negative() {
        return Err(Error::Violated {
            inequality: "m-fold nef and big AF",
            detail: format!("gap = {}", report.gap),
        });
    }

    let mut adjugates = Vec::new();
    for idx in (0..m).combinations_with_replacement(m - 1) {
        let mut t: Vec<&HermMat> = idx.iter().map(|&i| mats[i]).collect();
        t.extend_from_slice(&mats[m..]);
        adjugates.push(mixed_adjugate(&t)?);
    }
    let mut adjugates_proportional = true;
    for w in &adjugates[1..] {
        if proportional(&adjugates[0], w)?.is_none() {
            adjugates_proportional = false;
            break;
        }
    }
    let mut matrices_proportional = true;
    for c in &classes[1..m] {
        if proportional(&classes[0].mat, &c.mat)?.is_none() {
            matrices_proportional = false;
            break;
        }
    }
    Ok(MultiVerdict {
        report,
        adjugates_compared: adjugates.len(),
        adjugates_proportional,
        matrices_proportional,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullVerdict {
    pub report: GapReport,
    pub all_proportional: bool,
}

impl FullVerdict {
    pub fn holds(&self) -> bool {
        self.report.equality == self.all_proportional
    }
}

/// (γ_1⋯γ_n)ⁿ = Π γ_iⁿ ⟺ all γ_i proportional.
pub fn equality_corollary_full(classes: &[TorusClass]) -> Result<FullVerdict> {
    let n = classes.len();
    let refs: Vec<&TorusClass> = classes.iter().collect();
    check_n(n, &refs)?;
    require_nef_and_big(&refs)?;
    let lhs = pow(&intersection_number(classes)?, n);
    let mut rhs = Rat::from_integer(1.into());
    for c in classes {
        rhs *= intersection_number_of(&vec![&c.mat; n])?;
    }
    let report = GapReport::new(lhs, rhs);
    if report.gap.is_negative() {
        return Err(Error::Violated {
            inequality: "full nef and big AF",
            detail: format!("gap = {}", report.gap),
        });
    }
    let mut all_proportional = true;
    for c in &classes[1..] {
        if proportional(&classes[0].mat, &c.mat)?.is_none() {
            all_proportional = false;
            break;
        }
    }
    Ok(FullVerdict { report, all_proportional })
}

/// Convenience for callers holding plain matrices.
pub fn classes(mats: &[HermMat]) -> Vec<TorusClass> {
    mats.iter().cloned().map(TorusClass::new).collect()
}
