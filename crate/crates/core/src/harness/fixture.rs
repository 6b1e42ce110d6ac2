//! Single-instance verification of a JSON fixture. The schema is detected
//! from its keys: `{"r","d"}` Gram table, `{"n","mats"}` tuple,
//! `{"n","entries"}` matrix, `{"dim","vertices"}` polytope, or an array of
//! polytopes.

use num_traits::Signed;
use serde_json::{json, Value};

use super::{Check, InstanceRecord, Mode, RunConfig, RunRecord};
use crate::convexvol::{mixed_volume, Polytope};
use crate::error::{Error, Result};
use crate::ineq::{af_gap_discriminant, af_gap_volume, af_m_fold_discriminant};
use crate::matrix::{is_psd, HermMat};
use crate::mixdisc::{mixed_discriminant, mixed_discriminant_polarized, MatTuple};
use crate::scalar::rat_string;
use crate::shephard::{check_psd_shephard, det_identity_sides, r2_inequality, GramTable};
use crate::torus::TorusClass;

fn has(v: &Value, keys: &[&str]) -> bool {
    keys.iter().all(|k| v.get(k).is_some())
}

fn table_checks(g: &GramTable) -> Vec<Check> {
    let mut out = vec![
        Check::run("shephard_psd", || {
            let v = check_psd_shephard(g)?;
            Ok(Check::new("shephard_psd", v.psd, serde_json::to_value(&v)?))
        }),
        Check::run("det_identity", || {
            let (lhs, rhs) = det_identity_sides(g)?;
            Ok(Check::new("det_identity", lhs == rhs, json!({ "det": rat_string(&lhs) })))
        }),
    ];
    if g.r == 2 {
        out.push(Check::run("r2_inequality", || {
            let r = r2_inequality(g)?;
            Ok(Check::new("r2_inequality", true, Value::Null).with_report(r))
        }));
    }
    out
}

fn tuple_checks(t: &MatTuple) -> Vec<Check> {
    let mut out = vec![Check::run("route_equivalence", || {
        let d1 = mixed_discriminant(&t.mats)?;
        let d2 = mixed_discriminant_polarized(&t.mats)?;
        Ok(Check::new("route_equivalence", d1 == d2, serde_json::to_value(&d1)?))
    })];
    let herm: Option<Vec<HermMat>> = t.mats.iter().map(|m| HermMat::new(m.clone()).ok()).collect();
    if let Some(h) = herm {
        if t.n >= 2 && is_psd(&h[0]) && h[2..].iter().all(is_psd) {
            out.push(Check::run("af_gap", || {
                let r = af_gap_discriminant(&h[0], &h[1], &h[2..])?;
                Ok(Check::new("af_gap", !r.gap.is_negative(), Value::Null).with_report(r))
            }));
        }
        if t.n >= 2 && h.iter().all(is_psd) {
            out.push(Check::run("m_fold", || {
                let r = af_m_fold_discriminant(&h, t.n)?;
                Ok(Check::new("m_fold", !r.gap.is_negative(), Value::Null).with_report(r))
            }));
        }
    }
    out
}

fn matrix_checks(c: &TorusClass) -> Vec<Check> {
    let consistent = (!c.is_kahler() || c.is_nef()) && (c.is_nef() && c.is_big()) == c.is_kahler();
    vec![Check::new("class_flags", consistent, serde_json::to_value(c).unwrap_or(Value::Null))]
}

fn polytope_checks(p: &Polytope) -> Vec<Check> {
    vec![Check::run("hull_idempotent", || {
        let again = Polytope::hull(p.dim(), p.vertices().to_vec())?;
        let ok = &again == p && !p.volume().is_negative();
        Ok(Check::new("hull_idempotent", ok, json!({ "volume": rat_string(p.volume()) })))
    })]
}

fn bodies_checks(bodies: &[Polytope]) -> Vec<Check> {
    let mut out = vec![Check::run("mixed_volume", || {
        let v = mixed_volume(bodies)?;
        Ok(Check::new("mixed_volume", !v.is_negative(), json!({ "v": rat_string(&v) })))
    })];
    if bodies.len() >= 2 {
        out.push(Check::run("af_gap_volume", || {
            let r = af_gap_volume(&bodies[0], &bodies[1], &bodies[2..])?;
            Ok(Check::new("af_gap_volume", !r.gap.is_negative(), Value::Null).with_report(r))
        }));
    }
    out
}

/// Verifies one fixture; the record carries `cfg` as its config echo.
pub fn run_fixture(json: &str, cfg: &RunConfig) -> Result<RunRecord> {
    let v: Value = serde_json::from_str(json)?;
    let (mode, checks) = if has(&v, &["r", "d"]) {
        (Mode::Shephard, table_checks(&serde_json::from_value(v)?))
    } else if has(&v, &["n", "mats"]) {
        let t: MatTuple = serde_json::from_value(v)?;
        t.validate()?;
        (Mode::Discriminant, tuple_checks(&t))
    } else if has(&v, &["n", "entries"]) {
        (Mode::Torus, matrix_checks(&serde_json::from_value(v)?))
    } else if has(&v, &["dim", "vertices"]) {
        (Mode::Volume, polytope_checks(&serde_json::from_value(v)?))
    } else if v.is_array() {
        (Mode::Volume, bodies_checks(&serde_json::from_value::<Vec<Polytope>>(v)?))
    } else {
        return Err(Error::Config("unrecognized fixture schema".into()));
    };
    Ok(RunRecord::from_instances(cfg.clone(), vec![InstanceRecord::new(0, mode, checks)]))
}
