//! Seeded instance generators.
//!
//! PRNG contract: ChaCha8 (rand_chacha 0.3) seeded with `seed_from_u64(seed)`;
//! instance `i` of a suite draws from stream `(mode_id << 32) | i`. Integer
//! draws use `gen_range` over inclusive ranges.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::convexvol::{Point, Polytope};
use crate::matrix::{GenMat, HermMat};
use crate::scalar::{GaussRat, Rat};

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn bound(b: u32) -> i64 {
    i64::from(b.max(1))
}

pub fn gauss_int<R: Rng>(rng: &mut R, b: u32) -> GaussRat {
    let b = bound(b);
    GaussRat::from_ints(rng.gen_range(-b..=b), rng.gen_range(-b..=b))
}

/// Nonzero rational p/q with |p| ≤ b·q, q ≤ 4.
pub fn nonzero_rat<R: Rng>(rng: &mut R, b: u32) -> Rat {
    let q: i64 = rng.gen_range(1..=4);
    let lim = bound(b) * q;
    loop {
        let p = rng.gen_range(-lim..=lim);
        if p != 0 {
            return Rat::new(p.into(), q.into());
        }
    }
}

pub fn positive_rat<R: Rng>(rng: &mut R, b: u32) -> Rat {
    let q: i64 = rng.gen_range(1..=4);
    Rat::new(rng.gen_range(1..=bound(b) * q).into(), q.into())
}

pub fn gauss_int_matrix<R: Rng>(rng: &mut R, n: usize, b: u32) -> GenMat {
    GenMat::from_rows((0..n).map(|_| (0..n).map(|_| gauss_int(rng, b)).collect()).collect())
        .expect("square by construction")
}

/// Hermitian with Gaussian-integer entries, no sign condition.
pub fn hermitian<R: Rng>(rng: &mut R, n: usize, b: u32) -> HermMat {
    let mut m = GenMat::zeros(n);
    for i in 0..n {
        m.set(i, i, GaussRat::from_ints(rng.gen_range(-bound(b)..=bound(b)), 0));
        for j in i + 1..n {
            let z = gauss_int(rng, b);
            m.set(j, i, z.conj());
            m.set(i, j, z);
        }
    }
    HermMat::new(m).expect("hermitian by construction")
}

/// G·G* + I.
pub fn pd_hermitian<R: Rng>(rng: &mut R, n: usize, b: u32) -> HermMat {
    let g = gauss_int_matrix(rng, n, b);
    HermMat::gram(&g).add(&HermMat::identity(n)).expect("same shape")
}

/// G·G* with one column of G zeroed.
pub fn psd_singular<R: Rng>(rng: &mut R, n: usize, b: u32) -> HermMat {
    let mut g = gauss_int_matrix(rng, n, b);
    let col = rng.gen_range(0..n);
    for i in 0..n {
        g.set(i, col, GaussRat::zero());
    }
    HermMat::gram(&g)
}

/// v·v* for a nonzero Gaussian-integer vector v.
pub fn rank_one<R: Rng>(rng: &mut R, n: usize, b: u32) -> HermMat {
    loop {
        let mut g = gauss_int_matrix(rng, n, b);
        for i in 0..n {
            for j in 1..n {
                g.set(i, j, GaussRat::zero());
            }
        }
        if !g.is_zero() {
            return HermMat::gram(&g);
        }
    }
}

pub fn gen_pd_hermitian(seed: u64, n: usize, entry_bound: u32) -> HermMat {
    pd_hermitian(&mut rng_for(seed, 0), n, entry_bound)
}

pub fn gen_psd_singular(seed: u64, n: usize, entry_bound: u32) -> HermMat {
    psd_singular(&mut rng_for(seed, 0), n, entry_bound)
}

pub fn rat_point<R: Rng>(rng: &mut R, d: usize, b: u32) -> Point {
    (0..d)
        .map(|_| {
            let q: i64 = rng.gen_range(1..=3);
            let lim = bound(b) * q;
            Rat::new(rng.gen_range(-lim..=lim).into(), q.into())
        })
        .collect()
}

pub fn int_point<R: Rng>(rng: &mut R, d: usize, b: u32) -> Point {
    (0..d)
        .map(|_| Rat::from_integer(rng.gen_range(-bound(b)..=bound(b)).into()))
        .collect()
}

/// Hull of `points` random rational points.
pub fn polytope<R: Rng>(rng: &mut R, d: usize, points: usize, b: u32) -> Polytope {
    let pts = (0..points.max(1)).map(|_| rat_point(rng, d, b)).collect();
    Polytope::hull(d, pts).expect("valid dimension")
}

/// Like [`polytope`] but redrawn until full-dimensional.
pub fn full_polytope<R: Rng>(rng: &mut R, d: usize, points: usize, b: u32) -> Polytope {
    loop {
        let p = polytope(rng, d, points.max(d + 1), b);
        if p.affine_dim() == d {
            return p;
        }
    }
}

pub fn gen_polytope(seed: u64, d: usize, points: usize, coord_bound: u32) -> Polytope {
    polytope(&mut rng_for(seed, 0), d, points, coord_bound)
}

pub fn positive_edges<R: Rng>(rng: &mut R, d: usize, b: u32) -> Vec<Rat> {
    (0..d).map(|_| positive_rat(rng, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{is_pd, is_psd};
    use num_traits::Zero;

    #[test]
    fn seed_stability() {
        assert_eq!(gen_pd_hermitian(7, 3, 4), gen_pd_hermitian(7, 3, 4));
        assert_ne!(gen_pd_hermitian(7, 3, 4), gen_pd_hermitian(8, 3, 4));
        assert_eq!(gen_polytope(1, 3, 8, 5), gen_polytope(1, 3, 8, 5));
    }

    #[test]
    fn pd_draws() {
        let mut rng = rng_for(3, 0);
        for n in 1..=5 {
            for _ in 0..200 {
                let a = pd_hermitian(&mut rng, n, 3);
                assert!(a.is_hermitian());
                assert!(is_pd(&a));
            }
        }
    }

    #[test]
    fn singular_draws() {
        let mut rng = rng_for(4, 0);
        for n in 2..=5 {
            for _ in 0..50 {
                let a = psd_singular(&mut rng, n, 3);
                assert!(a.det_re().is_zero());
                assert!(is_psd(&a));
                assert!(!is_pd(&a));
            }
        }
    }

    #[test]
    fn full_polytopes_have_volume() {
        let mut rng = rng_for(5, 0);
        for d in 1..=3 {
            let p = full_polytope(&mut rng, d, 6, 3);
            assert!(p.volume() > &Rat::zero());
        }
    }
}
