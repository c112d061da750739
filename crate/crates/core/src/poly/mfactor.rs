//! Factorization of multivariate polynomials over the base field by
//! specialization, univariate factorization and Hensel lifting.

use rand::Rng;

use super::ideal::Ideal;
use super::monomial::Monomial;
use super::multipoly::MultiPoly;
use crate::arith::{factor_over, Scalar, UniPoly};
use crate::error::{Error, Result};

const SPECIALIZATION_ATTEMPTS: usize = 8;

/// Monic greatest common divisor, read off from `(a) ∩ (b) = (lcm)`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly> {
    let ring = a.ring();
    if a.is_zero() {
        return Ok(b.monic());
    }
    if b.is_zero() {
        return Ok(a.monic());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(MultiPoly::one(ring));
    }
    let n = ring.nvars();
    let names: Vec<String> = ring.names().iter().cloned().chain(["_gcd".to_string()]).collect();
    let big = ring.derive(names);
    let embed: Vec<usize> = (0..n).collect();
    let t = MultiPoly::var(&big, n);
    let one_minus_t = &MultiPoly::one(&big) - &t;
    let j = Ideal::new(&big, vec![&t * &a.map_vars(&big, &embed), &one_minus_t * &b.map_vars(&big, &embed)]);
    let lcm = j.eliminate(&embed)?.map_by_name(ring);
    let gens = lcm.groebner()?.polys();
    let [l] = gens.as_slice() else {
        return Err(Error::UnsupportedShape("intersection of principal ideals is not principal".into()));
    };
    Ok((a * b).div_exact(l).expect("lcm divides the product").monic())
}

/// Irreducible factors with multiplicities, each made monic; constants dropped.
pub fn factor<R: Rng + ?Sized>(h: &MultiPoly, rng: &mut R) -> Result<Vec<(MultiPoly, u32)>> {
    let ring = h.ring();
    if h.is_constant() {
        return Ok(vec![]);
    }
    let content = h.monomial_content();
    let mut out: Vec<(MultiPoly, u32)> = content
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| (MultiPoly::var(ring, i), e as u32))
        .collect();
    let h = h.div_monomial(&content);
    if h.is_constant() {
        return Ok(out);
    }
    let used: Vec<usize> = h.uses().iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i).collect();
    if let [v] = used.as_slice() {
        let uni = h.to_univariate(*v).expect("univariate");
        for (f, e) in factor_over(ring.field(), &uni, ring.budget().degree_bound)? {
            out.push((MultiPoly::from_univariate(ring, *v, &f).monic(), e));
        }
        return Ok(out);
    }
    let mut g = h.clone();
    for &w in &used {
        g = gcd(&g, &h.derivative(w))?;
    }
    let squarefree = h.div_exact(&g).expect("gcd divides");
    for f in factor_squarefree(&squarefree, &used, rng)? {
        let mut e = 0;
        let mut rest = h.clone();
        while let Some(q) = rest.div_exact(&f) {
            rest = q;
            e += 1;
        }
        out.push((f, e));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn y_degree(m: &Monomial, v: usize) -> u32 {
    m.degree() - m.exp(v) as u32
}

fn factor_squarefree<R: Rng + ?Sized>(s: &MultiPoly, used: &[usize], rng: &mut R) -> Result<Vec<MultiPoly>> {
    let ring = s.ring();
    let n = ring.nvars();
    let d = s.total_degree().unwrap_or(0);
    let v = used[0];
    for attempt in 0..SPECIALIZATION_ATTEMPTS {
        let r = 2 + 3 * attempt as i64;
        let xv = MultiPoly::var(ring, v);
        // shear so that s becomes monic in x_v, then move the point to the origin
        let shear: Vec<Scalar> = (0..n).map(|w| if w != v && used.contains(&w) { Scalar::from_int(rng.gen_range(-r..=r)) } else { Scalar::zero() }).collect();
        let point: Vec<Scalar> = (0..n).map(|w| if w != v && used.contains(&w) { Scalar::from_int(rng.gen_range(-r..=r)) } else { Scalar::zero() }).collect();
        let forward: Vec<MultiPoly> = (0..n)
            .map(|w| {
                let x = MultiPoly::var(ring, w);
                if w == v {
                    x
                } else {
                    &(&x + &xv.scale(&shear[w])) + &MultiPoly::constant(ring, point[w].clone())
                }
            })
            .collect();
        let t = s.substitute(ring, &forward);
        if t.degree_in(v) as u32 != d {
            continue;
        }
        let lc = t.coeff(&Monomial::var(n, v, d as u16));
        let t = t.scale(&lc.inv());
        let at_zero: Vec<MultiPoly> = (0..n).map(|w| if w == v { xv.clone() } else { MultiPoly::zero(ring) }).collect();
        let u0 = t.substitute(ring, &at_zero).to_univariate(v).expect("univariate");
        if u0.gcd(&u0.derivative()).degree() != Some(0) {
            continue;
        }
        let phis: Vec<UniPoly> =
            factor_over(ring.field(), &u0, ring.budget().degree_bound)?.into_iter().map(|(f, _)| f.monic()).collect();
        let found = if phis.len() == 1 { vec![t.clone()] } else { recombine(&t, &hensel(&t, &phis, v, d), v, d) };
        let back: Vec<MultiPoly> = (0..n)
            .map(|w| {
                let x = MultiPoly::var(ring, w);
                if w == v {
                    x
                } else {
                    &(&x - &xv.scale(&shear[w])) - &MultiPoly::constant(ring, point[w].clone())
                }
            })
            .collect();
        return Ok(found.iter().map(|f| f.substitute(ring, &back).monic()).collect());
    }
    Err(Error::UnsupportedShape(format!("no usable specialization to factor {}", s)))
}

/// `(g, s, t)` with `s·a + t·b = g`, `g` monic.
fn xgcd(a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
    let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s2 = s0.sub(&q.mul(&s1));
        let t2 = t0.sub(&q.mul(&t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = r0.leading().expect("nonzero gcd").inv();
    (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
}

/// Lifts `t ≡ Π φ_j` modulo the other variables up to degree `d` in them.
fn hensel(t: &MultiPoly, phis: &[UniPoly], v: usize, d: u32) -> Vec<MultiPoly> {
    let ring = t.ring();
    let inverses: Vec<UniPoly> = (0..phis.len())
        .map(|j| {
            let others = phis.iter().enumerate().filter(|(i, _)| *i != j).fold(UniPoly::one(), |acc, (_, p)| acc.mul(p));
            xgcd(&others, &phis[j]).1
        })
        .collect();
    let mut lifted: Vec<MultiPoly> = phis.iter().map(|p| MultiPoly::from_univariate(ring, v, p)).collect();
    for deg in 1..=d {
        let product = lifted.iter().fold(MultiPoly::one(ring), |acc, f| &acc * f);
        let err = t - &product;
        let mut by_mono: std::collections::BTreeMap<Monomial, Vec<(usize, Scalar)>> = Default::default();
        for (m, c) in err.terms() {
            if y_degree(m, v) == deg {
                let mut key = m.exponents().to_vec();
                let e = key[v] as usize;
                key[v] = 0;
                by_mono.entry(Monomial::from_exponents(&key)).or_default().push((e, c.clone()));
            }
        }
        for (mu, coeffs) in by_mono {
            let top = coeffs.iter().map(|(e, _)| *e).max().unwrap_or(0);
            let mut dense = vec![Scalar::zero(); top + 1];
            for (e, c) in coeffs {
                dense[e] = c;
            }
            let e_mu = UniPoly::new(dense);
            for (j, phi) in phis.iter().enumerate() {
                let sigma = e_mu.mul(&inverses[j]).rem(phi);
                if sigma.is_zero() {
                    continue;
                }
                let delta = MultiPoly::from_univariate(ring, v, &sigma).mul_monomial(&mu, &Scalar::one());
                lifted[j] = &lifted[j] + &delta;
            }
        }
    }
    lifted
}

fn truncate(f: &MultiPoly, v: usize, d: u32) -> MultiPoly {
    MultiPoly::from_terms(f.ring(), f.terms().iter().filter(|(m, _)| y_degree(m, v) <= d).cloned().collect())
}

/// Groups lifted factors into true factors by trial division.
fn recombine(t: &MultiPoly, lifted: &[MultiPoly], v: usize, d: u32) -> Vec<MultiPoly> {
    let mut rest = t.clone();
    let mut left: Vec<MultiPoly> = lifted.to_vec();
    let mut out = Vec::new();
    let mut k = 1;
    while 2 * k <= left.len() {
        let mut hit = None;
        for subset in combinations(left.len(), k) {
            let g = truncate(&subset.iter().fold(MultiPoly::one(t.ring()), |acc, &i| &acc * &left[i]), v, d);
            if let Some(q) = rest.div_exact(&g) {
                hit = Some((subset, g, q));
                break;
            }
        }
        match hit {
            Some((subset, g, q)) => {
                out.push(g);
                rest = q;
                left = left.into_iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, f)| f).collect();
            }
            None => k += 1,
        }
    }
    if !rest.is_constant() {
        out.push(rest);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}
