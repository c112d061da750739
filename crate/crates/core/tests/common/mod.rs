#![allow(dead_code)]

use std::sync::Arc;

use num_rational::BigRational;
use orbicycle::poly::{Budget, Ideal, MultiPoly};
use orbicycle::quotient::{catalog, Model};
use orbicycle::{BaseField, DownstairsCycle, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn model(name: &str) -> Model {
    let field = if name.contains("A2") { BaseField::cyclotomic(3) } else { BaseField::Rationals };
    Arc::new(catalog(name, &field, Budget::default()).unwrap())
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn small<R: Rng>(rng: &mut R, r: i64) -> Scalar {
    Scalar::from_int(rng.gen_range(-r..=r))
}

/// Random polynomial of degree at most 2 in the given variables, often
/// vanishing at the origin so that fixed loci get hit.
fn random_poly<R: Rng>(m: &Model, vars: &[usize], rng: &mut R) -> MultiPoly {
    let up = m.up();
    let mut h = if rng.gen_bool(0.5) { MultiPoly::zero(up) } else { MultiPoly::constant(up, small(rng, 3)) };
    for &v in vars {
        h = &h + &MultiPoly::var(up, v).scale(&small(rng, 2));
    }
    if !vars.is_empty() && rng.gen_bool(0.25) {
        let v = *vars.choose(rng).unwrap();
        h = &h + &MultiPoly::var(up, v).pow(2).scale(&small(rng, 1));
    }
    h
}

/// A prime ideal of the given dimension in the upstairs ring: the graph of
/// a polynomial map, or a point with a quadratic residue field.
pub fn random_prime<R: Rng>(m: &Model, dim: usize, rng: &mut R) -> Ideal {
    let up = m.up();
    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let (dep, free) = order.split_at(n - dim);
    if dim == 0 && rng.gen_bool(0.2) {
        let a = *[2, 3, 5, -1].choose(rng).unwrap();
        let x = MultiPoly::var(up, dep[0]);
        let mut gens = vec![&x.pow(2) - &MultiPoly::from_int(up, a)];
        for &v in &dep[1..] {
            let rhs = &x.scale(&small(rng, 2)) + &MultiPoly::constant(up, small(rng, 2));
            gens.push(&MultiPoly::var(up, v) - &rhs);
        }
        return Ideal::new(up, gens);
    }
    let gens = dep.iter().map(|&v| &MultiPoly::var(up, v) - &random_poly(m, free, rng)).collect();
    Ideal::new(up, gens)
}

/// One or two orbit classes of the given dimension with positive integer
/// coefficients.
pub fn random_cycle<R: Rng>(m: &Model, dim: usize, rng: &mut R) -> DownstairsCycle {
    random_cycle_with(m, dim, 1, rng)
}

/// As [`random_cycle`], with coefficients in `(1/den)·Z`.
pub fn random_cycle_with<R: Rng>(m: &Model, dim: usize, den: i64, rng: &mut R) -> DownstairsCycle {
    let mut x = DownstairsCycle::zero(m);
    for _ in 0..rng.gen_range(1..=2) {
        let p = random_prime(m, dim, rng);
        let coeff = rat(rng.gen_range(1..=3), rng.gen_range(1..=den));
        let c = DownstairsCycle::from_prime(m, &p, coeff).unwrap();
        x = x.add(&c).unwrap();
    }
    x
}

/// Positive coefficients, and integral after multiplying by the degree.
pub fn condition_d(m: &Model, x: &DownstairsCycle) -> bool {
    let k = BigRational::from_integer((m.degree() as i64).into());
    x.coefficients().all(|c| c > &rat(0, 1) && (c * &k).is_integer())
}
