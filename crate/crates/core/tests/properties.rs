use afkit::convexvol::{dilate, minkowski_combination, minkowski_sum, mixed_volume, Polytope};
use afkit::harness::gen::*;
use afkit::ineq::{af_gap_discriminant, af_m_fold_discriminant};
use afkit::matrix::{is_pd, is_psd, proportional, GenMat, HermMat};
use afkit::mixdisc::{adjugate_pairing, mixed_adjugate, mixed_discriminant, mixed_discriminant_polarized};
use afkit::scalar::{GaussRat, Rat};
use afkit::shephard::{check_psd_shephard, det_identity_check, det_identity_sides, gram_from_discriminants, GramTable};
use afkit::torus::{kt_sequence, TorusClass};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| Rat::new(p.into(), q.into()))
}

fn pos_rat() -> impl Strategy<Value = Rat> {
    (1i64..=20, 1i64..=6).prop_map(|(p, q)| Rat::new(p.into(), q.into()))
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn gram_is_psd_and_shift_is_not(seed: u64, n in 1usize..=5) {
        let mut rng = rng_for(seed, 0);
        let g = gauss_int_matrix(&mut rng, n, 3);
        let a = HermMat::gram(&g);
        prop_assert!(is_psd(&a));
        // trace bounds the largest eigenvalue
        let t = a.trace().re + Rat::one();
        let shifted = a.sub(&HermMat::identity(n).scale(&t)).unwrap();
        prop_assert!(!is_psd(&shifted));
    }

    #[test]
    fn pd_implies_psd(seed: u64, n in 1usize..=4) {
        let mut rng = rng_for(seed, 0);
        let a = hermitian(&mut rng, n, 2);
        if is_pd(&a) {
            prop_assert!(is_psd(&a));
        }
    }

    #[test]
    fn proportional_inverts(seed: u64, n in 1usize..=4, lam in small_rat()) {
        let a = gen_pd_hermitian(seed, n, 3);
        let b = a.scale(&lam);
        prop_assert_eq!(proportional(&a, &b).unwrap(), Some(lam.clone()));
        if !lam.is_zero() {
            prop_assert_eq!(proportional(&b, &a).unwrap(), Some(lam.recip()));
        }
    }

    #[test]
    fn hermitian_closed_under_ops(seed: u64, n in 1usize..=4, t in small_rat()) {
        let mut rng = rng_for(seed, 0);
        let a = hermitian(&mut rng, n, 3);
        let b = hermitian(&mut rng, n, 3);
        prop_assert!(a.add(&b).unwrap().is_hermitian());
        prop_assert!(a.sub(&b).unwrap().is_hermitian());
        prop_assert!(a.lerp(&b, &t).unwrap().is_hermitian());
        prop_assert!(a.scale(&t).is_hermitian());
    }

    #[test]
    fn discriminant_routes_agree_on_general_matrices(seed: u64, n in 1usize..=4) {
        let mut rng = rng_for(seed, 0);
        let mats: Vec<GenMat> = (0..n).map(|_| gauss_int_matrix(&mut rng, n, 3)).collect();
        prop_assert_eq!(mixed_discriminant(&mats).unwrap(), mixed_discriminant_polarized(&mats).unwrap());
    }

    #[test]
    fn discriminant_symmetric(seed: u64, n in 2usize..=4) {
        let mut rng = rng_for(seed, 0);
        let mats: Vec<GenMat> = (0..n).map(|_| gauss_int_matrix(&mut rng, n, 3)).collect();
        let base = mixed_discriminant(&mats).unwrap();
        let perms: Vec<Vec<usize>> = if n == 3 {
            (0..n).permutations(n).collect()
        } else {
            (0..4).map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p
            }).collect()
        };
        for p in perms {
            let permuted: Vec<GenMat> = p.iter().map(|&i| mats[i].clone()).collect();
            prop_assert_eq!(mixed_discriminant(&permuted).unwrap(), base.clone());
        }
    }

    #[test]
    fn discriminant_multilinear(seed: u64, n in 1usize..=4, a in small_rat(), b in small_rat()) {
        let mut rng = rng_for(seed, 0);
        let x = gauss_int_matrix(&mut rng, n, 3);
        let y = gauss_int_matrix(&mut rng, n, 3);
        let rest: Vec<GenMat> = (1..n).map(|_| gauss_int_matrix(&mut rng, n, 3)).collect();
        let with = |first: GenMat| {
            let mut t = vec![first];
            t.extend(rest.iter().cloned());
            mixed_discriminant(&t).unwrap()
        };
        let lhs = with(x.scale(&a).add(&y.scale(&b)).unwrap());
        let rhs = with(x.clone()).scale(&a) + with(y.clone()).scale(&b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn psd_tuples_nonnegative_and_real(seed: u64, n in 1usize..=4) {
        let mut rng = rng_for(seed, 0);
        let mats: Vec<HermMat> = (0..n)
            .map(|i| if i % 2 == 0 { psd_singular(&mut rng, n.max(2), 2) } else { pd_hermitian(&mut rng, n.max(2), 2) })
            .map(|m| if n == 1 { HermMat::identity(1).scale(&m.trace().re) } else { m })
            .collect();
        let d = mixed_discriminant(&mats).unwrap();
        prop_assert!(d.is_real());
        prop_assert!(!d.re.is_negative());
    }

    #[test]
    fn adjugate_pairing_identity(seed: u64, n in 2usize..=4) {
        let mut rng = rng_for(seed, 0);
        let partial: Vec<HermMat> = (1..n).map(|_| hermitian(&mut rng, n, 3)).collect();
        let w = mixed_adjugate(&partial).unwrap();
        prop_assert!(w.is_hermitian());
        let probe = gauss_int_matrix(&mut rng, n, 3);
        let mut full = vec![probe.clone()];
        full.extend(partial.iter().map(|p| p.as_gen().clone()));
        prop_assert_eq!(mixed_discriminant(&full).unwrap(), adjugate_pairing(&probe, &w).unwrap());
    }

    #[test]
    fn adjugate_linear(seed: u64, n in 2usize..=4, a in small_rat(), b in small_rat()) {
        let mut rng = rng_for(seed, 0);
        let x = hermitian(&mut rng, n, 3);
        let y = hermitian(&mut rng, n, 3);
        let rest: Vec<HermMat> = (2..n).map(|_| pd_hermitian(&mut rng, n, 3)).collect();
        let adj = |first: HermMat| {
            let mut t = vec![first];
            t.extend(rest.iter().cloned());
            mixed_adjugate(&t).unwrap()
        };
        let lhs = adj(x.scale(&a).add(&y.scale(&b)).unwrap());
        let rhs = adj(x.clone()).scale(&a).add(&adj(y.clone()).scale(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn af_gap_scaling_covariance(seed: u64, n in 2usize..=4, c in pos_rat()) {
        let mut rng = rng_for(seed, 0);
        let a = pd_hermitian(&mut rng, n, 3);
        let b = hermitian(&mut rng, n, 3);
        let rest: Vec<HermMat> = (2..n).map(|_| pd_hermitian(&mut rng, n, 3)).collect();
        let base = af_gap_discriminant(&a, &b, &rest).unwrap();
        let sa = af_gap_discriminant(&a.scale(&c), &b, &rest).unwrap();
        let sb = af_gap_discriminant(&a, &b.scale(&c), &rest).unwrap();
        prop_assert_eq!(&sa.gap, &(&base.gap * &c * &c));
        prop_assert_eq!(&sb.gap, &(&base.gap * &c * &c));
        prop_assert_eq!(sa.equality, base.equality);
        prop_assert!(!base.gap.is_negative());
    }

    #[test]
    fn m_fold_two_is_pairwise(seed: u64, n in 2usize..=4) {
        let mut rng = rng_for(seed, 0);
        let t: Vec<HermMat> = (0..n).map(|_| pd_hermitian(&mut rng, n, 3)).collect();
        let pair = af_gap_discriminant(&t[0], &t[1], &t[2..]).unwrap();
        let fold = af_m_fold_discriminant(&t, 2).unwrap();
        prop_assert_eq!(pair.lhs, fold.lhs);
        prop_assert_eq!(pair.rhs, fold.rhs);
    }

    #[test]
    fn det_identity_unconditional(size in 2usize..=5, seed: u64) {
        let mut rng = rng_for(seed, 0);
        let mut d = vec![vec![Rat::zero(); size]; size];
        for i in 0..size {
            for j in i..size {
                let v = nonzero_rat(&mut rng, 5) * Rat::from_integer(rng.gen_range(0..=1).into());
                d[i][j] = v.clone();
                d[j][i] = v;
            }
        }
        let g = GramTable::new(d).unwrap();
        prop_assert!(det_identity_check(&g).unwrap());
    }

    #[test]
    fn shephard_verdicts_scale_invariant(seed: u64, n in 2usize..=3, r in 1usize..=3, c in pos_rat()) {
        let mut rng = rng_for(seed, 0);
        let classes: Vec<HermMat> = (0..=r).map(|_| pd_hermitian(&mut rng, n, 3)).collect();
        let rest: Vec<HermMat> = (2..n).map(|_| pd_hermitian(&mut rng, n, 3)).collect();
        let g = gram_from_discriminants(&classes, &rest).unwrap();
        let scaled = g.scale(&c);
        prop_assert!(check_psd_shephard(&g).unwrap().psd);
        prop_assert!(check_psd_shephard(&scaled).unwrap().psd);
        prop_assert!(det_identity_check(&scaled).unwrap());
        let padded = g.pad_zero();
        prop_assert!(check_psd_shephard(&padded).unwrap().psd);
        let (l, rr) = det_identity_sides(&padded).unwrap();
        prop_assert!(l.is_zero() && rr.is_zero());
    }

    #[test]
    fn kt_log_concave(seed: u64, n in 1usize..=4) {
        let mut rng = rng_for(seed, 0);
        let g1 = TorusClass::new(pd_hermitian(&mut rng, n, 2));
        let g2 = if n >= 2 { psd_singular(&mut rng, n, 2) } else { HermMat::zeros(1) };
        let s = kt_sequence(&g1, &TorusClass::new(g2)).unwrap();
        for m in 1..n {
            prop_assert!(&s[m] * &s[m] >= &s[m + 1] * &s[m - 1]);
        }
    }
}

proptest! {
    #![proptest_config(cfg(16))]

    #[test]
    fn mixed_volume_symmetric_d3(seed: u64) {
        let mut rng = rng_for(seed, 0);
        let bodies: Vec<Polytope> = (0..3).map(|_| polytope(&mut rng, 3, 4, 3)).collect();
        let base = mixed_volume(&bodies).unwrap();
        prop_assert!(!base.is_negative());
        for p in (0..3).permutations(3) {
            let t: Vec<Polytope> = p.iter().map(|&i| bodies[i].clone()).collect();
            prop_assert_eq!(mixed_volume(&t).unwrap(), base.clone());
        }
    }

    #[test]
    fn mixed_volume_translation_invariant(seed: u64, d in 2usize..=3) {
        let mut rng = rng_for(seed, 0);
        let bodies: Vec<Polytope> = (0..d).map(|_| polytope(&mut rng, d, 5, 3)).collect();
        let t = rat_point(&mut rng, d, 3);
        let mut moved = bodies.clone();
        moved[0] = moved[0].translate(&t).unwrap();
        prop_assert_eq!(mixed_volume(&bodies).unwrap(), mixed_volume(&moved).unwrap());
    }

    #[test]
    fn mixed_volume_multilinear(seed: u64, a in pos_rat(), b in pos_rat()) {
        let mut rng = rng_for(seed, 0);
        let k = polytope(&mut rng, 2, 4, 3);
        let k2 = polytope(&mut rng, 2, 4, 3);
        let l = polytope(&mut rng, 2, 4, 3);
        let comb = minkowski_combination(&[k.clone(), k2.clone()], &[a.clone(), b.clone()]).unwrap();
        let lhs = mixed_volume(&[comb, l.clone()]).unwrap();
        let rhs = &a * mixed_volume(&[k, l.clone()]).unwrap() + &b * mixed_volume(&[k2, l]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn volume_homogeneous_and_hull_idempotent(seed: u64, d in 1usize..=4, lam in pos_rat()) {
        let mut rng = rng_for(seed, 0);
        let p = polytope(&mut rng, d, 7, 4);
        let again = Polytope::hull(d, p.vertices().to_vec()).unwrap();
        prop_assert_eq!(&again, &p);
        let scaled = dilate(&p, &lam).unwrap();
        let mut f = Rat::one();
        for _ in 0..d {
            f *= &lam;
        }
        prop_assert_eq!(scaled.volume(), &(p.volume() * f));
    }

    #[test]
    fn minkowski_sum_with_point_translates(seed: u64, d in 1usize..=4) {
        let mut rng = rng_for(seed, 0);
        let p = polytope(&mut rng, d, 6, 3);
        let t = rat_point(&mut rng, d, 3);
        let q = Polytope::point(t.clone()).unwrap();
        prop_assert_eq!(minkowski_sum(&p, &q).unwrap(), p.translate(&t).unwrap());
    }
}

#[test]
fn gauss_rat_conj_involution() {
    let z = GaussRat::from_ints(3, -7);
    assert_eq!(z.conj().conj(), z);
    assert!(!z.norm_sqr().is_negative());
}
