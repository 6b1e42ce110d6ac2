use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::gen::*;
use super::{Check, Mode, RunConfig};
use crate::convexvol::{mixed_volume, minkowski_expansion_check, Polytope};
use crate::error::{Error, Result};
use crate::ineq::*;
use crate::matrix::{det_rat, proportional, GenMat, HermMat};
use crate::mixdisc::{
    adjugate_pairing, det_expansion_check, mixed_adjugate, mixed_discriminant, mixed_discriminant_polarized,
};
use crate::scalar::{factorial, rat_string, Rat};
use crate::shephard::*;
use crate::torus::*;

type R = ChaCha8Rng;

pub(super) fn run_instance(mode: Mode, cfg: &RunConfig, rng: &mut R) -> Vec<Check> {
    match mode {
        Mode::Discriminant => discriminant(cfg, rng),
        Mode::Volume => volume(cfg, rng),
        Mode::Shephard => shephard(cfg, rng),
        Mode::Torus => torus(cfg, rng),
        Mode::Bm => bm(cfg, rng),
        Mode::All => unreachable!("expanded by the runner"),
    }
}

fn pd_list(rng: &mut R, count: usize, n: usize, b: u32) -> Vec<HermMat> {
    (0..count).map(|_| pd_hermitian(rng, n, b)).collect()
}

/// PD with Gaussian-rational entries: (G·G* + I)·c for a random c > 0.
fn pd_rational(rng: &mut R, n: usize, b: u32) -> HermMat {
    let c = positive_rat(rng, b);
    pd_hermitian(rng, n, b).scale(&c)
}

fn s(x: &Rat) -> Value {
    Value::String(rat_string(x))
}

fn gap_check(name: &'static str, report: GapReport, pass: bool) -> Check {
    Check::new(name, pass, Value::Null).with_report(report)
}

fn discriminant(cfg: &RunConfig, rng: &mut R) -> Vec<Check> {
    let (n, b, m) = (cfg.n, cfg.entry_bound, cfg.m());
    let mut out = Vec::new();

    let tuple: Vec<HermMat> = (0..n).map(|_| hermitian(rng, n, b)).collect();
    out.push(Check::run("route_equivalence", || {
        let d1 = mixed_discriminant(&tuple)?;
        let d2 = mixed_discriminant_polarized(&tuple)?;
        Ok(Check::new("route_equivalence", d1 == d2 && d1.is_real(), json!({ "d": s(&d1.re) })))
    }));

    let a = pd_rational(rng, n, b);
    let bm = pd_rational(rng, n, b);
    let rest: Vec<HermMat> = (2..n).map(|_| pd_rational(rng, n, b)).collect();
    out.push(Check::run("af_gap", || {
        let r = af_gap_discriminant(&a, &bm, &rest)?;
        let ok = !r.gap.is_negative() && r.equality == r.certificate.is_some();
        Ok(gap_check("af_gap", r, ok))
    }));

    let indefinite = hermitian(rng, n, b);
    out.push(Check::run("af_strict", || {
        let r = af_gap_discriminant(&a, &indefinite, &rest)?;
        let proportional_pair = proportional(&a, &indefinite)?.is_some();
        let ok = if proportional_pair { r.equality } else { r.gap.is_positive() };
        Ok(gap_check("af_strict", r, ok))
    }));

    let lambda = nonzero_rat(rng, b);
    out.push(Check::run("af_proportional", || {
        let r = af_gap_discriminant(&a, &a.scale(&lambda), &rest)?;
        let ok = r.equality && r.certificate.as_ref() == Some(&lambda);
        Ok(gap_check("af_proportional", r, ok))
    }));

    let c = positive_rat(rng, b);
    out.push(Check::run("af_scaling", || {
        let base = af_gap_discriminant(&a, &bm, &rest)?;
        let scaled = af_gap_discriminant(&a.scale(&c), &bm, &rest)?;
        let ok = scaled.gap == &base.gap * &c * &c && scaled.equality == base.equality;
        Ok(Check::new("af_scaling", ok, json!({ "c": s(&c) })))
    }));

    let tuple = pd_list(rng, n, n, b);
    out.push(Check::run("m_fold", || {
        let r = af_m_fold_discriminant(&tuple, m)?;
        let mut ok = !r.gap.is_negative();
        if m == 2 {
            let pair = af_gap_discriminant(&tuple[0], &tuple[1], &tuple[2..])?;
            ok &= pair.gap == r.gap;
        }
        Ok(gap_check("m_fold", r, ok))
    }));

    let gamma = pd_hermitian(rng, n, b);
    let mut family: Vec<HermMat> = (0..m).map(|_| gamma.scale(&positive_rat(rng, b))).collect();
    family.extend(pd_list(rng, n - m, n, b));
    out.push(Check::run("m_fold_proportional", || {
        let r = af_m_fold_discriminant(&family, m)?;
        Ok(gap_check("m_fold_proportional", r.clone(), r.equality))
    }));

    let k = rng.gen_range(2..=3usize);
    let mats: Vec<GenMat> = (0..k).map(|_| gauss_int_matrix(rng, n, b)).collect();
    let lambdas: Vec<Rat> = (0..k).map(|_| nonzero_rat(rng, b)).collect();
    out.push(Check::run("det_expansion", || {
        Ok(Check::new("det_expansion", det_expansion_check(&mats, &lambdas)?, json!({ "m": k })))
    }));

    let partial = pd_list(rng, n - 1, n, b);
    let probe = gauss_int_matrix(rng, n, b);
    out.push(Check::run("adjugate_pairing", || {
        let w = mixed_adjugate(&partial)?;
        let mut full: Vec<GenMat> = vec![probe.clone()];
        full.extend(partial.iter().map(|p| p.as_gen().clone()));
        let direct = mixed_discriminant(&full)?;
        let paired = adjugate_pairing(&probe, &w)?;
        Ok(Check::new("adjugate_pairing", direct == paired, Value::Null))
    }));
    out
}

fn permanent(m: &[Vec<Rat>]) -> Rat {
    let d = m.len();
    (0..d)
        .permutations(d)
        .map(|p| p.iter().enumerate().fold(Rat::one(), |acc, (i, &j)| acc * &m[i][j]))
        .sum()
}

fn volume(cfg: &RunConfig, rng: &mut R) -> Vec<Check> {
    let (d, b, m) = (cfg.n, cfg.entry_bound, cfg.m());
    let fact = Rat::from_integer(factorial(d));
    let mut out = Vec::new();

    let edges: Vec<Vec<Rat>> = (0..d).map(|_| positive_edges(rng, d, b)).collect();
    out.push(Check::run("box_permanent", || {
        let boxes = edges.iter().map(|e| Polytope::cuboid(e)).collect::<Result<Vec<_>>>()?;
        let v = mixed_volume(&boxes)?;
        let oracle = permanent(&edges) / &fact;
        Ok(Check::new("box_permanent", v == oracle, json!({ "v": s(&v) })))
    }));

    let gens: Vec<Vec<Rat>> = (0..d).map(|_| int_point(rng, d, b)).collect();
    out.push(Check::run("segment_det", || {
        let segs = gens.iter().map(|g| Polytope::segment(g.clone())).collect::<Result<Vec<_>>>()?;
        let v = mixed_volume(&segs)?;
        let oracle = det_rat(&gens).abs() / &fact;
        Ok(Check::new("segment_det", v == oracle, json!({ "v": s(&v) })))
    }));

    let pts = if d >= 4 { d + 1 } else { 6 - d / 2 };
    let k = full_polytope(rng, d, pts, b);
    let l = full_polytope(rng, d, pts, b);
    let rest: Vec<Polytope> = (2..d).map(|_| full_polytope(rng, d, d + 1, b)).collect();
    out.push(Check::run("af_gap_volume", || {
        let r = af_gap_volume(&k, &l, &rest)?;
        let ok = !r.gap.is_negative();
        Ok(gap_check("af_gap_volume", r, ok))
    }));

    let t = rat_point(rng, d, b);
    out.push(Check::run("af_homothety", || {
        let l2 = crate::convexvol::dilate(&k, &Rat::from_integer(2.into()))?.translate(&t)?;
        let r = af_gap_volume(&k, &l2, &rest)?;
        let ok = r.equality && r.certificate == Some(Rat::from_integer(2.into()));
        Ok(gap_check("af_homothety", r, ok))
    }));

    if d <= 3 {
        let terms = rng.gen_range(2..=3usize);
        let bodies: Vec<Polytope> = (0..terms).map(|_| polytope(rng, d, 4, b)).collect();
        let lambdas: Vec<Rat> = (0..terms).map(|_| positive_rat(rng, b)).collect();
        out.push(Check::run("minkowski_expansion", || {
            let ok = minkowski_expansion_check(&bodies, &lambdas)?;
            Ok(Check::new("minkowski_expansion", ok, json!({ "m": terms })))
        }));
    }

    let bodies: Vec<Polytope> = (0..d).map(|_| full_polytope(rng, d, d + 1, b)).collect();
    out.push(Check::run("m_fold_volume", || {
        let r = af_m_fold_volume(&bodies, m)?;
        let ok = !r.gap.is_negative();
        Ok(gap_check("m_fold_volume", r, ok))
    }));
    out
}

fn signed_table(rng: &mut R, size: usize, b: u32) -> GramTable {
    let mut d = vec![vec![Rat::zero(); size]; size];
    for i in 0..size {
        for j in i..size {
            let v = if rng.gen_bool(0.1) { Rat::zero() } else { nonzero_rat(rng, b) };
            d[i][j] = v.clone();
            d[j][i] = v;
        }
    }
    GramTable::new(d).expect("symmetric by construction")
}

fn shephard(cfg: &RunConfig, rng: &mut R) -> Vec<Check> {
    let (n, b, r) = (cfg.n, cfg.entry_bound, cfg.r);
    let mut out = Vec::new();

    let classes = pd_list(rng, r + 1, n, b);
    let rest = pd_list(rng, n - 2, n, b);
    let table = gram_from_discriminants(&classes, &rest);
    match &table {
        Err(e) => out.push(Check::new("gram_table", false, json!({ "error": e.to_string() }))),
        Ok(g) => {
            out.push(Check::run("shephard_psd", || {
                let v = check_psd_shephard(g)?;
                Ok(Check::new("shephard_psd", v.psd, serde_json::to_value(&v)?))
            }));
            out.push(Check::run("det_identity", || {
                let (lhs, rhs) = det_identity_sides(g)?;
                Ok(Check::new("det_identity", lhs == rhs, json!({ "det": s(&lhs) })))
            }));
            out.push(Check::run("torus_table", || {
                let t = gram_from_torus(&classes, &rest)?;
                let ok = t == g.scale(&torus_constant(n)) && check_psd_shephard(&t)?.psd;
                Ok(Check::new("torus_table", ok, Value::Null))
            }));
            if r >= 2 {
                let sub = GramTable::new((0..3).map(|i| g.d[i][..3].to_vec()).collect());
                out.push(Check::run("r2_inequality", || {
                    let sub = sub?;
                    let rep = r2_inequality(&sub)?;
                    let ok = !rep.gap.is_negative() && equality_propagates(&sub);
                    Ok(gap_check("r2_inequality", rep, ok))
                }));
            }
            out.push(Check::run("zero_padding", || {
                let p = g.pad_zero();
                let (lhs, rhs) = det_identity_sides(&p)?;
                let ok = check_psd_shephard(&p)?.psd && lhs.is_zero() && rhs.is_zero();
                Ok(Check::new("zero_padding", ok, Value::Null))
            }));
        }
    }

    let c = positive_rat(rng, b);
    let trio = [classes[0].clone(), classes[0].scale(&c), pd_hermitian(rng, n, b)];
    out.push(Check::run("equality_propagation", || {
        let g = gram_from_discriminants(&trio, &rest)?;
        let d = &g.d;
        let premise = &d[0][1] * &d[0][1] == &d[0][0] * &d[1][1];
        let conclusion = &d[0][1] * &d[0][2] == &d[0][0] * &d[1][2];
        let rep = r2_inequality(&g)?;
        let ok = premise && conclusion && equality_propagates(&g) && rep.equality;
        Ok(gap_check("equality_propagation", rep, ok))
    }));

    // d00 = 0 from a rank-one A_0 and singular PSD inputs. Recorded, not asserted.
    let mut degenerate = vec![rank_one(rng, n, b)];
    degenerate.extend((0..r).map(|_| psd_singular(rng, n, b)));
    let degenerate_rest: Vec<HermMat> = (0..n - 2).map(|_| psd_singular(rng, n, b)).collect();
    out.push(Check::run("boundary_record", || {
        let g = gram_from_discriminants(&degenerate, &degenerate_rest)?;
        let v = check_psd_shephard(&g)?;
        Ok(Check::new(
            "boundary_record",
            true,
            json!({ "d00": s(&g.d[0][0]), "psd": v.psd, "witness": v.witness }),
        ))
    }));

    let signed = signed_table(rng, r + 1, b);
    out.push(Check::run("signed_identity", || {
        Ok(Check::new("signed_identity", det_identity_check(&signed)?, Value::Null))
    }));
    out
}

fn torus(cfg: &RunConfig, rng: &mut R) -> Vec<Check> {
    let (n, b, m) = (cfg.n, cfg.entry_bound, cfg.m());
    let mut out = Vec::new();

    let mats = pd_list(rng, n, n, b);
    out.push(Check::run("bridge", || {
        let v = intersection_number(&classes(&mats))?;
        let d = mixed_discriminant_polarized(&mats)?;
        let ident = intersection_number_of(&vec![HermMat::identity(n); n])?;
        let ok = d.is_real() && v == torus_constant(n) * &d.re && ident == torus_constant(n);
        Ok(Check::new("bridge", ok, json!({ "value": s(&v) })))
    }));

    let g1 = TorusClass::new(pd_hermitian(rng, n, b));
    let g2 = TorusClass::new(psd_singular(rng, n, b));
    let g3 = TorusClass::new(pd_hermitian(rng, n, b));
    out.push(Check::run("kt_log_concave", || {
        let a = kt_sequence(&g1, &g2)?;
        let c = kt_sequence(&g1, &g3)?;
        let ok = a[0].is_zero() && c.iter().all(|x| x.is_positive());
        Ok(Check::new(
            "kt_log_concave",
            ok,
            json!({ "singular": a.iter().map(s).collect::<Vec<_>>() }),
        ))
    }));

    let alpha = TorusClass::new(hermitian(rng, n, b));
    let rest: Vec<TorusClass> = classes(&pd_list(rng, n - 2, n, b));
    out.push(Check::run("af_torus", || {
        let r = af_gap_torus(&alpha, &g1, &rest)?;
        let ok = !r.gap.is_negative();
        Ok(gap_check("af_torus", r, ok))
    }));

    let c = positive_rat(rng, b);
    let scaled = TorusClass::new(g1.mat().scale(&c));
    out.push(Check::run("pair_constructed", || {
        let v = equality_theorem_pair(&g1, &scaled, &rest)?;
        let ok = v.holds() && v.report.equality && v.adjugates_proportional && v.matrices_proportional;
        Ok(Check::new("pair_constructed", ok, serde_json::to_value(&v)?))
    }));
    out.push(Check::run("pair_generic", || {
        let v = equality_theorem_pair(&g1, &g3, &rest)?;
        let ok = v.holds() && v.report.gap.is_positive() && !v.adjugates_proportional;
        Ok(Check::new("pair_generic", ok, serde_json::to_value(&v)?))
    }));

    let gamma = pd_hermitian(rng, n, b);
    let mut family: Vec<HermMat> = (0..m).map(|_| gamma.scale(&positive_rat(rng, b))).collect();
    family.extend(pd_list(rng, n - m, n, b));
    let family = classes(&family);
    let generic = classes(&pd_list(rng, n, n, b));
    out.push(Check::run("m_constructed", || {
        let v = equality_theorem_m(&family, m)?;
        let ok = v.holds() && v.report.equality;
        Ok(Check::new("m_constructed", ok, serde_json::to_value(&v)?))
    }));
    out.push(Check::run("m_generic", || {
        let v = equality_theorem_m(&generic, m)?;
        let ok = v.holds() && v.report.gap.is_positive() && !v.adjugates_proportional;
        Ok(Check::new("m_generic", ok, serde_json::to_value(&v)?))
    }));

    let full: Vec<TorusClass> = (0..n).map(|_| TorusClass::new(gamma.scale(&positive_rat(rng, b)))).collect();
    out.push(Check::run("full_constructed", || {
        let v = equality_corollary_full(&full)?;
        Ok(Check::new("full_constructed", v.holds() && v.report.equality, serde_json::to_value(&v)?))
    }));
    out.push(Check::run("full_generic", || {
        let v = equality_corollary_full(&generic)?;
        let ok = v.holds() && v.report.gap.is_positive();
        Ok(Check::new("full_generic", ok, serde_json::to_value(&v)?))
    }));

    out.push(Check::run("non_big_rejected", || {
        let got = equality_theorem_pair(&g1, &g2, &rest);
        let ok = matches!(got, Err(Error::NotBig { index: 1 }));
        Ok(Check::new("non_big_rejected", ok, Value::Null))
    }));
    out
}

fn concavity_detail(r: &ConcavityReport) -> Value {
    json!({
        "midpoint_violation": r.midpoint_violation,
        "chord_violation": r.chord_violation,
        "values": r.values,
    })
}

fn bm(cfg: &RunConfig, rng: &mut R) -> Vec<Check> {
    let (n, b, m, tol) = (cfg.n, cfg.entry_bound, cfg.m(), cfg.tol);
    let mut out = Vec::new();

    let a0 = pd_rational(rng, n, b);
    let a1 = pd_rational(rng, n, b);
    let rest = pd_list(rng, n - m, n, b);
    out.push(Check::run("bm_discriminant", || {
        let r = bm_concavity_discriminant(&a0, &a1, &rest, m, cfg.grid)?;
        Ok(Check::new("bm_discriminant", r.max_violation <= tol, concavity_detail(&r)))
    }));

    let c = positive_rat(rng, b);
    out.push(Check::run("bm_discriminant_proportional", || {
        let r = bm_concavity_discriminant(&a0, &a0.scale(&c), &rest, m, cfg.grid)?;
        let ok = r.chord_gaps.iter().all(|g| g.abs() <= tol);
        Ok(Check::new("bm_discriminant_proportional", ok, concavity_detail(&r)))
    }));

    let d = n.min(3);
    let mv = m.min(d);
    let k0 = full_polytope(rng, d, d + 1, b);
    let k1 = full_polytope(rng, d, d + 1, b);
    let vrest: Vec<Polytope> = (0..d - mv).map(|_| full_polytope(rng, d, d + 1, b)).collect();
    out.push(Check::run("bm_volume", || {
        let r = bm_concavity_volume(&k0, &k1, &vrest, mv, cfg.grid)?;
        Ok(Check::new("bm_volume", r.max_violation <= tol, concavity_detail(&r)))
    }));

    let t = rat_point(rng, d, b);
    out.push(Check::run("bm_volume_homothetic", || {
        let k2 = crate::convexvol::dilate(&k0, &c)?.translate(&t)?;
        let r = bm_concavity_volume(&k0, &k2, &vrest, mv, cfg.grid)?;
        let ok = r.chord_gaps.iter().all(|g| g.abs() <= tol);
        Ok(Check::new("bm_volume_homothetic", ok, concavity_detail(&r)))
    }));
    out
}
