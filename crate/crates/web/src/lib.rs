//! Browser front end. Each operation is a plain function returning a
//! serializable result; the `#[wasm_bindgen]` wrappers only move JSON.

use afkit::convexvol::{self, Polytope};
use afkit::ineq::{af_gap_discriminant, af_gap_volume, bm_concavity_discriminant, bm_concavity_volume};
use afkit::matrix::{GenMat, HermMat};
use afkit::mixdisc::hermitian_mixed_discriminant;
use afkit::scalar::{parse_rat, rat_string, to_f64};
use afkit::shephard::{check_psd_shephard, det_identity_sides, shephard_matrix, GramTable};
use afkit::{GaussRat, Rat, Result};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct Curve {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    pub max_violation: f64,
}

#[derive(Debug, Serialize)]
pub struct MixedArea {
    /// Vertices in counter-clockwise order, as floats for drawing.
    pub k: Vec<[f64; 2]>,
    pub l: Vec<[f64; 2]>,
    pub sum: Vec<[f64; 2]>,
    pub area_k: String,
    pub area_l: String,
    pub area_sum: String,
    pub mixed: String,
    pub gap: String,
    pub equality: bool,
    pub homothety: Option<String>,
    pub curve: Curve,
}

#[derive(Debug, Serialize)]
pub struct MatrixPair {
    pub d00: String,
    pub d01: String,
    pub d11: String,
    pub gap: String,
    pub equality: bool,
    pub lambda: Option<String>,
    pub pd: [bool; 2],
    pub curve: Curve,
}

#[derive(Debug, Serialize)]
pub struct ShephardReport {
    pub matrix: Vec<Vec<String>>,
    pub psd: bool,
    pub witness: Option<(usize, String)>,
    pub det_lhs: String,
    pub det_rhs: String,
    pub r2_gap: Option<String>,
}

fn ordered(p: &Polytope) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = p.vertices().iter().map(|v| [to_f64(&v[0]), to_f64(&v[1])]).collect();
    let n = pts.len() as f64;
    let cx = pts.iter().map(|q| q[0]).sum::<f64>() / n;
    let cy = pts.iter().map(|q| q[1]).sum::<f64>() / n;
    pts.sort_by(|a, b| {
        let ta = (a[1] - cy).atan2(a[0] - cx);
        let tb = (b[1] - cy).atan2(b[0] - cx);
        ta.total_cmp(&tb)
    });
    pts
}

fn polygon(coords: &[i64]) -> Result<Polytope> {
    let pts = coords
        .chunks_exact(2)
        .map(|c| vec![Rat::from_integer(c[0].into()), Rat::from_integer(c[1].into())])
        .collect();
    Polytope::hull(2, pts)
}

fn curve(report: &afkit::ineq::ConcavityReport) -> Curve {
    Curve {
        t: report.grid.iter().map(to_f64).collect(),
        values: report.values.clone(),
        max_violation: report.max_violation,
    }
}

/// Mixed area of two lattice polygons given as flat `x0 y0 x1 y1 …` lists.
pub fn mixed_area(k: &[i64], l: &[i64], grid: usize) -> Result<MixedArea> {
    let (pk, pl) = (polygon(k)?, polygon(l)?);
    let sum = convexvol::minkowski_sum(&pk, &pl)?;
    let mixed = convexvol::mixed_volume(&[pk.clone(), pl.clone()])?;
    let report = af_gap_volume(&pk, &pl, &[])?;
    let bm = bm_concavity_volume(&pk, &pl, &[], 2, grid)?;
    Ok(MixedArea {
        k: ordered(&pk),
        l: ordered(&pl),
        sum: ordered(&sum),
        area_k: rat_string(pk.volume()),
        area_l: rat_string(pl.volume()),
        area_sum: rat_string(sum.volume()),
        mixed: rat_string(&mixed),
        gap: rat_string(&report.gap),
        equality: report.equality,
        homothety: report.certificate.as_ref().map(rat_string),
        curve: curve(&bm),
    })
}

/// `[a, b_re, b_im, c]` → [[a, b], [b̄, c]].
fn herm2(v: &[String]) -> Result<HermMat> {
    if v.len() != 4 {
        return Err(afkit::Error::DimensionMismatch { expected: 4, found: v.len() });
    }
    let r: Vec<Rat> = v.iter().map(|s| parse_rat(s)).collect::<Result<_>>()?;
    let b = GaussRat::new(r[1].clone(), r[2].clone());
    let m = GenMat::from_rows(vec![
        vec![GaussRat::real(r[0].clone()), b.clone()],
        vec![b.conj(), GaussRat::real(r[3].clone())],
    ])?;
    HermMat::new(m)
}

/// D(A, B)² ≥ D(A, A)·D(B, B) for 2×2 Hermitian A, B, plus the curve
/// t ↦ det((1−t)A + tB)^{1/2}.
pub fn matrix_pair(a: &[String], b: &[String], grid: usize) -> Result<MatrixPair> {
    let (a, b) = (herm2(a)?, herm2(b)?);
    let report = af_gap_discriminant(&a, &b, &[])?;
    let bm = bm_concavity_discriminant(&a, &b, &[], 2, grid)?;
    let d = |x: &HermMat, y: &HermMat| hermitian_mixed_discriminant(&[x, y]).map(|v| rat_string(&v));
    Ok(MatrixPair {
        d00: d(&a, &a)?,
        d01: d(&a, &b)?,
        d11: d(&b, &b)?,
        gap: rat_string(&report.gap),
        equality: report.equality,
        lambda: report.certificate.as_ref().map(rat_string),
        pd: [a.is_pd(), b.is_pd()],
        curve: curve(&bm),
    })
}

/// Gram table given as whitespace-separated rows, one row per line.
pub fn shephard(table: &str) -> Result<ShephardReport> {
    let rows: Vec<Vec<Rat>> = table
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(parse_rat).collect())
        .collect::<Result<_>>()?;
    let g = GramTable::new(rows)?;
    let s = shephard_matrix(&g)?;
    let v = check_psd_shephard(&g)?;
    let (lhs, rhs) = det_identity_sides(&g)?;
    let r2_gap = if g.r == 2 {
        // Computed directly so that a violated inequality shows as a negative gap.
        let d = &g.d;
        let x = &d[0][1] * &d[0][1] - &d[0][0] * &d[1][1];
        let y = &d[0][2] * &d[0][2] - &d[0][0] * &d[2][2];
        let z = &d[0][1] * &d[0][2] - &d[0][0] * &d[1][2];
        Some(rat_string(&(x * y - &z * &z)))
    } else {
        None
    };
    Ok(ShephardReport {
        matrix: s.0.iter().map(|r| r.iter().map(rat_string).collect()).collect(),
        psd: v.psd,
        witness: v.witness.map(|w| (w.k, rat_string(&w.value))),
        det_lhs: rat_string(&lhs),
        det_rhs: rat_string(&rhs),
        r2_gap,
    })
}

fn to_js<T: Serialize>(r: Result<T>) -> std::result::Result<String, JsValue> {
    let v = r.map_err(|e| JsValue::from_str(&e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = mixedArea)]
pub fn mixed_area_js(k: Vec<i32>, l: Vec<i32>, grid: usize) -> std::result::Result<String, JsValue> {
    let wide = |v: Vec<i32>| v.into_iter().map(i64::from).collect::<Vec<_>>();
    to_js(mixed_area(&wide(k), &wide(l), grid))
}

#[wasm_bindgen(js_name = matrixPair)]
pub fn matrix_pair_js(a: Vec<String>, b: Vec<String>, grid: usize) -> std::result::Result<String, JsValue> {
    to_js(matrix_pair(&a, &b, grid))
}

#[wasm_bindgen(js_name = shephard)]
pub fn shephard_js(table: &str) -> std::result::Result<String, JsValue> {
    to_js(shephard(table))
}
