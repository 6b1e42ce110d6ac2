//! Exact convex hulls of integer point sets in dimension ≤ 4.
//!
//! Lower-dimensional inputs are projected onto a coordinate subspace on
//! which the affine hull maps bijectively, so extremality is preserved.
//! Full-dimensional hulls are built incrementally with simplicial facets;
//! a point is inserted only when strictly beyond some facet, which keeps
//! coplanar configurations (boxes, zonotopes) exact.
//!
//! The kernel runs in i128 when every coordinate is at most 2^16 in
//! magnitude: in dimension ≤ 4 the largest intermediate (a Bareiss step of
//! a 4×4 fan determinant) stays below 2^13·C^6 < 2^127. Rank tests always
//! use `BigInt`, since undivided elimination grows quickly.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::gint::{det_int, ExactInt};

pub(crate) type IPoint = Vec<BigInt>;

const SMALL_COORD: i64 = 1 << 16;

pub(crate) struct HullResult {
    /// Dimension of the affine hull.
    pub affine_dim: usize,
    /// Indices (into the input) of the extreme points, one per distinct location.
    pub extreme: Vec<usize>,
    /// k!·volume of the hull in the chosen k coordinates (k = `affine_dim`);
    /// equals d!·volume when the input is full-dimensional.
    pub scaled_volume: BigInt,
}

fn sub<T: ExactInt>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.sub_r(y)).collect()
}

fn dot<T: ExactInt>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::int_zero(), |acc, (x, y)| acc.add_r(&x.mul_r(y)))
}

fn big<T: ExactInt>(v: &[T]) -> IPoint {
    v.iter().map(ExactInt::to_big).collect()
}

/// Incremental row echelon form used to measure rank.
struct Echelon {
    rows: Vec<(usize, IPoint)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; keeps it if independent.
    fn insert(&mut self, mut v: IPoint) -> bool {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let a = row[*pivot].clone();
            let b = v[*pivot].clone();
            v = v.iter().zip(row).map(|(x, r)| x * &a - r * &b).collect();
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

struct Facet<T> {
    verts: Vec<usize>,
    normal: Vec<T>,
    offset: T,
}

/// Hyperplane through k points of Z^k: normal_j = (−1)^j · det(differences without column j).
fn hyperplane<T: ExactInt>(points: &[Vec<T>], verts: &[usize]) -> (Vec<T>, T) {
    let k = points[verts[0]].len();
    let base = &points[verts[0]];
    let diffs: Vec<Vec<T>> = verts[1..].iter().map(|&v| sub(&points[v], base)).collect();
    let normal: Vec<T> = (0..k)
        .map(|j| {
            let minor: Vec<Vec<T>> = diffs
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = det_int(minor);
            if j % 2 == 0 {
                d
            } else {
                d.neg_r()
            }
        })
        .collect();
    let offset = dot(&normal, base);
    (normal, offset)
}

/// Facet oriented so the scaled interior point satisfies normal·c < scale·offset.
fn oriented_facet<T: ExactInt>(points: &[Vec<T>], mut verts: Vec<usize>, interior: &[T], scale: &T) -> Facet<T> {
    verts.sort_unstable();
    let (mut normal, mut offset) = hyperplane(points, &verts);
    let side = dot(&normal, interior).sub_r(&scale.mul_r(&offset));
    debug_assert!(!side.eq_zero(), "interior point on facet hyperplane");
    if side.gt_zero() {
        normal = normal.iter().map(ExactInt::neg_r).collect();
        offset = offset.neg_r();
    }
    Facet { verts, normal, offset }
}

/// Boundary facets of the full-dimensional hull of `points` in Z^k (k ≥ 2),
/// seeded by the affinely independent `simplex`.
fn full_hull<T: ExactInt>(points: &[Vec<T>], simplex: &[usize]) -> Vec<Facet<T>> {
    let k = points[0].len();
    let scale = T::from_usize(k + 1);
    let interior: Vec<T> = (0..k)
        .map(|c| simplex.iter().fold(T::int_zero(), |acc, &v| acc.add_r(&points[v][c])))
        .collect();

    let mut facets: Vec<Facet<T>> = (0..=k)
        .map(|skip| {
            let verts = simplex
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, &v)| v)
                .collect();
            oriented_facet(points, verts, &interior, &scale)
        })
        .collect();

    for p in 0..points.len() {
        if simplex.contains(&p) {
            continue;
        }
        let beyond: Vec<bool> = facets.iter().map(|f| dot(&f.normal, &points[p]) > f.offset).collect();
        if !beyond.contains(&true) {
            continue;
        }
        let mut visible = Vec::new();
        let mut hidden = Vec::with_capacity(facets.len());
        for (f, b) in facets.into_iter().zip(beyond) {
            if b {
                visible.push(f);
            } else {
                hidden.push(f);
            }
        }
        facets = hidden;
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for f in &visible {
            for skip in 0..f.verts.len() {
                let ridge: Vec<usize> = f
                    .verts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut horizon: Vec<Vec<usize>> = ridges
            .into_iter()
            .filter(|(_, c)| *c == 1)
            .map(|(r, _)| r)
            .collect();
        horizon.sort_unstable();
        for mut ridge in horizon {
            ridge.push(p);
            facets.push(oriented_facet(points, ridge, &interior, &scale));
        }
    }
    facets
}

/// Extreme points among the facet vertices: those whose incident facet
/// normals span the whole space. An extreme point that was inserted is a
/// vertex of every simplex of the boundary triangulation covering it, so
/// vertex incidence sees all facets through it.
fn extreme_vertices<T: ExactInt>(k: usize, facets: &[Facet<T>]) -> Vec<usize> {
    let normals: Vec<IPoint> = facets.iter().map(|f| big(&f.normal)).collect();
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, f) in facets.iter().enumerate() {
        for &v in &f.verts {
            incident.entry(v).or_default().push(i);
        }
    }
    incident
        .into_iter()
        .filter(|(_, fs)| {
            let mut ech = Echelon::new();
            for &i in fs {
                ech.insert(normals[i].clone());
                if ech.rank() == k {
                    return true;
                }
            }
            false
        })
        .map(|(v, _)| v)
        .collect()
}

/// k!·volume as a fan of facet simplices over `apex`.
fn fan_volume<T: ExactInt>(points: &[Vec<T>], facets: &[Facet<T>], apex: &[T]) -> T {
    facets.iter().fold(T::int_zero(), |acc, f| {
        let rows: Vec<Vec<T>> = f.verts.iter().map(|&v| sub(&points[v], apex)).collect();
        acc.add_r(&det_int(rows).abs_r())
    })
}

pub(crate) fn convex_hull(points: &[IPoint]) -> HullResult {
    assert!(!points.is_empty());
    let limit = BigInt::from(SMALL_COORD);
    if points.iter().flatten().all(|x| x.abs() <= limit) {
        let small: Vec<Vec<i128>> = points
            .iter()
            .map(|p| p.iter().map(|x| i128::try_from(x).expect("bounded coordinate")).collect())
            .collect();
        hull_kernel(&small)
    } else {
        hull_kernel(points)
    }
}

fn hull_kernel<T: ExactInt>(points: &[Vec<T>]) -> HullResult {
    let d = points[0].len();
    let base = &points[0];
    let mut ech = Echelon::new();
    let mut simplex = vec![0];
    let mut basis_rows: Vec<Vec<T>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        let diff = sub(p, base);
        if ech.insert(big(&diff)) {
            simplex.push(i);
            basis_rows.push(diff);
            if ech.rank() == d {
                break;
            }
        }
    }
    let k = ech.rank();

    if k == 0 {
        return HullResult {
            affine_dim: 0,
            extreme: vec![0],
            scaled_volume: BigInt::zero(),
        };
    }

    // coordinates on which the affine hull projects bijectively
    let cols: Vec<usize> = (0..d)
        .combinations(k)
        .find(|cols| {
            let minor = basis_rows
                .iter()
                .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
                .collect();
            !det_int(minor).eq_zero()
        })
        .expect("independent rows have a nonzero maximal minor");
    let proj: Vec<Vec<T>> = points
        .iter()
        .map(|p| cols.iter().map(|&c| p[c].clone()).collect())
        .collect();

    if k == 1 {
        let (lo, hi) = proj
            .iter()
            .enumerate()
            .minmax_by(|a, b| a.1[0].cmp(&b.1[0]))
            .into_option()
            .expect("nonempty");
        return HullResult {
            affine_dim: 1,
            extreme: vec![lo.0, hi.0],
            scaled_volume: hi.1[0].sub_r(&lo.1[0]).to_big(),
        };
    }

    let facets = full_hull(&proj, &simplex);
    let extreme = extreme_vertices(k, &facets);
    let apex = proj[extreme[0]].clone();
    let scaled_volume = fan_volume(&proj, &facets, &apex).to_big();
    HullResult {
        affine_dim: k,
        extreme,
        scaled_volume,
    }
}

/// k!·volume computed twice, fanned from the first extreme point and from
/// the (scaled) centroid of the initial simplex; used to cross-check the
/// triangulation. Only for full-dimensional inputs.
#[cfg(test)]
pub(crate) fn fan_volumes_two_ways(points: &[IPoint]) -> (BigInt, BigInt) {
    let d = points[0].len();
    let mut ech = Echelon::new();
    let mut simplex = vec![0];
    for (i, p) in points.iter().enumerate().skip(1) {
        if ech.insert(sub(p, &points[0])) {
            simplex.push(i);
        }
    }
    assert_eq!(ech.rank(), d, "full-dimensional input expected");
    let facets = full_hull(points, &simplex);
    let ext = extreme_vertices(d, &facets);
    let from_vertex = fan_volume(points, &facets, &points[ext[0]]);
    // scale everything by d+1 so the centroid is integral
    let s = BigInt::from(d + 1);
    let scaled: Vec<IPoint> = points.iter().map(|p| p.iter().map(|x| x * &s).collect()).collect();
    let centroid: IPoint = (0..d).map(|c| simplex.iter().map(|&v| &points[v][c]).sum()).collect();
    let from_centroid = fan_volume(&scaled, &facets, &centroid) / num_traits::pow(s, d);
    (from_vertex, from_centroid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[&[i64]]) -> Vec<IPoint> {
        raw.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn bareiss_matches_hand_values() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(2)],
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(2)],
        ];
        // 2(6-2) - 0 + 1(1-3) = 6
        assert_eq!(det_int(m), BigInt::from(6));
        let m = vec![vec![BigInt::from(0), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(0)]];
        assert_eq!(det_int(m), BigInt::from(-1));
    }

    #[test]
    fn square_with_center_and_edge_midpoint() {
        let p = pts(&[&[1, 1], &[0, 0], &[2, 0], &[1, 0], &[2, 2], &[0, 2]]);
        let h = convex_hull(&p);
        assert_eq!(h.affine_dim, 2);
        let mut e = h.extreme.clone();
        e.sort();
        assert_eq!(e, vec![1, 2, 4, 5]);
        assert_eq!(h.scaled_volume, BigInt::from(8)); // 2!·4
    }

    #[test]
    fn cube_in_three_and_four_dims() {
        let cube3: Vec<IPoint> = (0..8)
            .map(|m: i64| (0..3).map(|b| BigInt::from((m >> b) & 1)).collect())
            .collect();
        let h = convex_hull(&cube3);
        assert_eq!(h.extreme.len(), 8);
        assert_eq!(h.scaled_volume, BigInt::from(6));

        let mut cube4: Vec<IPoint> = (0..16)
            .map(|m: i64| (0..4).map(|b| BigInt::from((m >> b) & 1)).collect())
            .collect();
        cube4.push(pts(&[&[1, 1, 1, 0]])[0].clone()); // duplicate vertex
        let h = convex_hull(&cube4);
        assert_eq!(h.extreme.len(), 16);
        assert_eq!(h.scaled_volume, BigInt::from(24));
    }

    #[test]
    fn flat_inputs_project() {
        let seg = pts(&[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]]);
        let h = convex_hull(&seg);
        assert_eq!(h.affine_dim, 1);
        let mut e = h.extreme.clone();
        e.sort();
        assert_eq!(e, vec![0, 2]);

        // a square tilted inside 3-space, plus its centre
        let sq = pts(&[&[0, 0, 0], &[2, 0, 2], &[0, 2, 2], &[2, 2, 4], &[1, 1, 2]]);
        let h = convex_hull(&sq);
        assert_eq!(h.affine_dim, 2);
        // (1,1,2) is the midpoint of (2,0,2) and (0,2,2)
        assert_eq!(h.extreme.len(), 4);
        assert!(!h.extreme.contains(&4));
    }

    #[test]
    fn wide_and_narrow_kernels_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for d in 2..=4 {
            for _ in 0..20 {
                let raw: Vec<Vec<i64>> = (0..12).map(|_| (0..d).map(|_| rng.gen_range(-9..=9)).collect()).collect();
                let p: Vec<IPoint> = raw.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
                let narrow: Vec<Vec<i128>> = raw.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
                let a = hull_kernel(&p);
                let b = hull_kernel(&narrow);
                assert_eq!(a.extreme, b.extreme);
                assert_eq!(a.scaled_volume, b.scaled_volume);
            }
        }
    }

    #[test]
    fn large_coordinates_take_the_wide_path() {
        let big = BigInt::from(1u64 << 40);
        let p: Vec<IPoint> = (0..4)
            .map(|m: i64| (0..2).map(|b| &big * BigInt::from((m >> b) & 1)).collect())
            .collect();
        let h = convex_hull(&p);
        assert_eq!(h.extreme.len(), 4);
        assert_eq!(h.scaled_volume, &big * &big * 2);
    }

    #[test]
    fn fan_apex_does_not_matter() {
        let p = pts(&[
            &[0, 0, 0],
            &[5, 1, 0],
            &[1, 4, 1],
            &[0, 1, 6],
            &[3, 3, 3],
            &[2, -1, 2],
            &[1, 1, 1],
        ]);
        let (a, b) = fan_volumes_two_ways(&p);
        assert_eq!(a, b);
    }
}
