//! Convex polytopes in ℚ^d (d ≤ 4) in vertex representation, their exact
//! volumes, Minkowski sums, dilations, and mixed volumes.

mod hull;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mixdisc::{compositions, multinomial, repeat_by};
use crate::scalar::{factorial, parse_rat, pow, rat_string, Rat};

pub const MAX_DIM: usize = 4;
pub const DEFAULT_BUDGET: usize = 50_000;

pub type Point = Vec<Rat>;

/// Nonempty convex polytope stored as its extreme points in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    affine_dim: usize,
    volume: Rat,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(())
}

impl Polytope {
    /// Convex hull of a finite point set.
    pub fn hull(dim: usize, points: Vec<Point>) -> Result<Self> {
        check_dim(dim)?;
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let mut points = points;
        points.sort();
        points.dedup();

        // common denominator so the hull runs on integers
        let lcm = points
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ipoints: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.iter().map(|x| x.numer() * (&lcm / x.denom())).collect())
            .collect();
        let h = hull::convex_hull(&ipoints);

        let mut vertices: Vec<Point> = h.extreme.iter().map(|&i| points[i].clone()).collect();
        vertices.sort();
        let volume = if h.affine_dim == dim {
            Rat::new(h.scaled_volume, factorial(dim) * num_traits::pow(lcm, dim))
        } else {
            Rat::zero()
        };
        Ok(Polytope {
            dim,
            vertices,
            affine_dim: h.affine_dim,
            volume,
        })
    }

    pub fn from_int_points(dim: usize, points: &[&[i64]]) -> Result<Self> {
        Polytope::hull(
            dim,
            points
                .iter()
                .map(|p| p.iter().map(|&x| Rat::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn point(p: Point) -> Result<Self> {
        let dim = p.len();
        Polytope::hull(dim, vec![p])
    }

    /// Axis-parallel box [0, a_1] × ⋯ × [0, a_d].
    pub fn cuboid(edges: &[Rat]) -> Result<Self> {
        let d = edges.len();
        check_dim(d)?;
        let pts = (0..1usize << d)
            .map(|mask| {
                (0..d)
                    .map(|i| if mask & (1 << i) != 0 { edges[i].clone() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        Polytope::hull(d, pts)
    }

    /// conv{0, e_1, …, e_d}.
    pub fn standard_simplex(d: usize) -> Result<Self> {
        check_dim(d)?;
        let mut pts = vec![vec![Rat::zero(); d]];
        for i in 0..d {
            let mut e = vec![Rat::zero(); d];
            e[i] = Rat::one();
            pts.push(e);
        }
        Polytope::hull(d, pts)
    }

    /// Segment [0, v].
    pub fn segment(v: Point) -> Result<Self> {
        let d = v.len();
        Polytope::hull(d, vec![vec![Rat::zero(); d], v])
    }

    /// Zonotope Σ [0, v_i].
    pub fn zonotope(dim: usize, generators: &[Point]) -> Result<Self> {
        let mut z = Polytope::point(vec![Rat::zero(); dim])?;
        for g in generators {
            z = minkowski_sum(&z, &Polytope::segment(g.clone())?)?;
        }
        Ok(z)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn volume(&self) -> &Rat {
        &self.volume
    }

    pub fn translate(&self, t: &[Rat]) -> Result<Self> {
        if t.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: t.len(),
            });
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(t).map(|(a, b)| a + b).collect())
            .collect();
        Ok(Polytope {
            vertices,
            ..self.clone()
        })
    }
}

pub fn convex_hull(dim: usize, points: Vec<Point>) -> Result<Polytope> {
    Polytope::hull(dim, points)
}

pub fn volume(p: &Polytope) -> Rat {
    p.volume.clone()
}

pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    minkowski_sum_budgeted(p, q, usize::MAX)
}

fn minkowski_sum_budgeted(p: &Polytope, q: &Polytope, budget: usize) -> Result<Polytope> {
    if p.dim != q.dim {
        return Err(Error::DimensionMismatch {
            expected: p.dim,
            found: q.dim,
        });
    }
    let points = p.vertices.len() * q.vertices.len();
    if points > budget {
        return Err(Error::BudgetExceeded { points, budget });
    }
    let sums = p
        .vertices
        .iter()
        .flat_map(|a| q.vertices.iter().map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect()))
        .collect();
    Polytope::hull(p.dim, sums)
}

/// λ·P for λ ≥ 0; λ = 0 collapses to the origin.
pub fn dilate(p: &Polytope, lambda: &Rat) -> Result<Polytope> {
    if lambda.is_negative() {
        return Err(Error::NegativeScale(lambda.clone()));
    }
    if lambda.is_zero() {
        return Polytope::point(vec![Rat::zero(); p.dim]);
    }
    Ok(Polytope {
        dim: p.dim,
        vertices: p
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * lambda).collect())
            .collect(),
        affine_dim: p.affine_dim,
        volume: &p.volume * pow(lambda, p.dim),
    })
}

/// Σ λ_i K_i.
pub fn minkowski_combination(bodies: &[Polytope], lambdas: &[Rat]) -> Result<Polytope> {
    if bodies.is_empty() || bodies.len() != lambdas.len() {
        return Err(Error::DimensionMismatch {
            expected: bodies.len().max(1),
            found: lambdas.len(),
        });
    }
    let mut acc = dilate(&bodies[0], &lambdas[0])?;
    for (b, l) in bodies[1..].iter().zip(&lambdas[1..]) {
        acc = minkowski_sum(&acc, &dilate(b, l)?)?;
    }
    Ok(acc)
}

/// V(K_1, …, K_d) = (1/d!) Σ_ε (−1)^{d+Σε} vol(Σ ε_i K_i), with the empty sum contributing 0.
pub fn mixed_volume(bodies: &[Polytope]) -> Result<Rat> {
    mixed_volume_with_budget(bodies, DEFAULT_BUDGET)
}

pub fn mixed_volume_with_budget(bodies: &[Polytope], budget: usize) -> Result<Rat> {
    let d = check_body_tuple(bodies)?;
    // sums[mask] = Σ_{i ∈ mask} K_i, built from mask with its lowest bit removed
    let mut sums: Vec<Option<Polytope>> = vec![None; 1 << d];
    let mut total = Rat::zero();
    for mask in 1usize..(1 << d) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let body = if rest == 0 {
            bodies[low].clone()
        } else {
            let prev = sums[rest].as_ref().expect("smaller masks come first");
            minkowski_sum_budgeted(prev, &bodies[low], budget)?
        };
        if (d + mask.count_ones() as usize).is_multiple_of(2) {
            total += body.volume();
        } else {
            total -= body.volume();
        }
        sums[mask] = Some(body);
    }
    Ok(total / Rat::from_integer(factorial(d)))
}

fn check_body_tuple(bodies: &[Polytope]) -> Result<usize> {
    let d = bodies.len();
    check_dim(d)?;
    for b in bodies {
        if b.dim != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: b.dim,
            });
        }
    }
    Ok(d)
}

/// Both sides of vol(Σ λ_i K_i) = Σ_{|r| = d} d!/(r_1!⋯r_m!) V(K_1[r_1], …, K_m[r_m]) λ^r.
pub fn minkowski_expansion_sides(bodies: &[Polytope], lambdas: &[Rat]) -> Result<(Rat, Rat)> {
    if bodies.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if lambdas.iter().any(Signed::is_negative) {
        let neg = lambdas.iter().find(|l| l.is_negative()).unwrap();
        return Err(Error::NegativeScale(neg.clone()));
    }
    let d = bodies[0].dim;
    let lhs = minkowski_combination(bodies, lambdas)?.volume;
    let mut rhs = Rat::zero();
    for r in compositions(d, bodies.len()) {
        let coeff = r
            .iter()
            .zip(lambdas)
            .fold(Rat::from_integer(multinomial(&r)), |acc, (&e, l)| acc * pow(l, e));
        if coeff.is_zero() {
            continue;
        }
        rhs += coeff * mixed_volume(&repeat_by(bodies, &r))?;
    }
    Ok((lhs, rhs))
}

pub fn minkowski_expansion_check(bodies: &[Polytope], lambdas: &[Rat]) -> Result<bool> {
    let (lhs, rhs) = minkowski_expansion_sides(bodies, lambdas)?;
    Ok(lhs == rhs)
}

/// λ > 0 with L = λ·K + t, when the two polytopes are homothetic.
///
/// Sufficient for equality in the mixed-volume inequality; never claimed necessary.
pub fn homothety(k: &Polytope, l: &Polytope) -> Option<Rat> {
    if k.dim != l.dim || k.vertices.len() != l.vertices.len() {
        return None;
    }
    if k.vertices.len() == 1 {
        return None;
    }
    // positive homotheties preserve lexicographic order
    let k0 = &k.vertices[0];
    let l0 = &l.vertices[0];
    let diff = |v: &Point, o: &Point| -> Point { v.iter().zip(o).map(|(a, b)| a - b).collect() };
    let dk = diff(&k.vertices[1], k0);
    let dl = diff(&l.vertices[1], l0);
    let c = dk.iter().position(|x| !x.is_zero())?;
    let lambda = &dl[c] / &dk[c];
    if !lambda.is_positive() {
        return None;
    }
    let ok = k.vertices.iter().zip(&l.vertices).all(|(kv, lv)| {
        diff(kv, k0)
            .iter()
            .zip(diff(lv, l0))
            .all(|(a, b)| a * &lambda == b)
    });
    ok.then_some(lambda)
}

#[derive(Serialize, Deserialize)]
struct PolytopeRepr {
    dim: usize,
    vertices: Vec<Vec<String>>,
}

impl Serialize for Polytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeRepr {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(rat_string).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PolytopeRepr::deserialize(d)?;
        let points = repr
            .vertices
            .iter()
            .map(|v| v.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Polytope::hull(repr.dim, points).map_err(serde::de::Error::custom)
    }
}
