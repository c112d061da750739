//! Univariate factorization.
//!
//! Over Q: squarefree decomposition, then Zassenhaus (Cantor–Zassenhaus modulo
//! a small prime, linear Hensel lifting, subset recombination). Over a
//! cyclotomic field: Trager's norm method on top of the rational factorizer.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::Matrix;
use super::scalar::{BaseField, Scalar};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Default bound on the degree accepted by the factorizers.
pub const DEFAULT_DEGREE_BOUND: usize = 64;

/// Factor a nonzero polynomial with rational coefficients into monic
/// irreducibles over Q, with multiplicities. Constant input gives `[]`.
pub fn factor_univariate(p: &UniPoly) -> Result<Vec<(UniPoly, u32)>> {
    factor_univariate_bounded(p, DEFAULT_DEGREE_BOUND)
}

pub fn factor_univariate_bounded(p: &UniPoly, bound: usize) -> Result<Vec<(UniPoly, u32)>> {
    assert!(!p.is_zero(), "cannot factor the zero polynomial");
    assert!(p.is_rational(), "factor_univariate expects rational coefficients");
    let degree = p.degree().unwrap();
    if degree > bound {
        return Err(Error::DegreeTooLarge { degree, bound });
    }
    let mut out = Vec::new();
    for (part, mult) in p.squarefree_decomposition() {
        for f in factor_squarefree_rational(&part) {
            out.push((f, mult));
        }
    }
    out.sort();
    Ok(out)
}

/// Factor over the given base field. Over Q this is [`factor_univariate`];
/// over `Q(ζ_n)` the factors are irreducible over the extension.
pub fn factor_over(field: &BaseField, p: &UniPoly, bound: usize) -> Result<Vec<(UniPoly, u32)>> {
    match field {
        BaseField::Rationals => factor_univariate_bounded(p, bound),
        BaseField::Cyclotomic(_) => {
            assert!(!p.is_zero(), "cannot factor the zero polynomial");
            let degree = p.degree().unwrap();
            if degree > bound {
                return Err(Error::DegreeTooLarge { degree, bound });
            }
            let mut out = Vec::new();
            for (part, mult) in p.squarefree_decomposition() {
                for f in trager(field, &part)? {
                    out.push((f, mult));
                }
            }
            out.sort();
            Ok(out)
        }
    }
}

fn factor_squarefree_rational(p: &UniPoly) -> Vec<UniPoly> {
    let f = primitive_integer(p);
    let mut out: Vec<UniPoly> = Vec::new();
    // pull out factors of x first: they break the small-prime search for f(0) = 0
    let zeros = f.iter().take_while(|c| c.is_zero()).count();
    let f: Vec<BigInt> = f[zeros..].to_vec();
    if zeros > 0 {
        out.push(UniPoly::x());
    }
    if f.len() > 1 {
        for g in zassenhaus(&f) {
            out.push(monic_from_integer(&g));
        }
    }
    out
}

fn primitive_integer(p: &UniPoly) -> Vec<BigInt> {
    let rats: Vec<BigRational> = p.coeffs().iter().map(|c| c.as_rational().unwrap().clone()).collect();
    let mut den = BigInt::one();
    for r in &rats {
        den = den.lcm(r.denom());
    }
    let mut ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(den.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = content.gcd(c);
    }
    if ints.last().unwrap().is_negative() {
        content = -content;
    }
    for c in ints.iter_mut() {
        *c = &*c / &content;
    }
    ints
}

fn monic_from_integer(f: &[BigInt]) -> UniPoly {
    let lc = BigRational::from_integer(f.last().unwrap().clone());
    UniPoly::from_rationals(f.iter().map(|c| BigRational::from_integer(c.clone()) / &lc).collect())
}

// ---------------------------------------------------------------------------
// arithmetic in F_p[x], p a small odd prime; coefficients low degree first

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_from_int(f: &[BigInt], p: u64) -> Fp {
    let pb = BigInt::from(p);
    fp_trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn fp_inv(a: u64, p: u64) -> u64 {
    fp_pow_scalar(a, p - 2, p)
}

fn fp_pow_scalar(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    fp_trim(out)
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

fn fp_divrem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let b = fp_trim(b.clone());
    assert!(!b.is_empty());
    let mut r = fp_trim(a.clone());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let inv = fp_inv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * inv % p;
        q[shift] = c;
        for (j, &y) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * y % p) % p;
        }
        r = fp_trim(r);
        if r.is_empty() {
            break;
        }
    }
    (fp_trim(q), r)
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => vec![],
        Some(&l) => {
            let inv = fp_inv(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut a = fp_trim(a.clone());
    let mut b = fp_trim(b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// `(s, t)` with `s·a + t·b = 1` in F_p[x]; requires coprime inputs.
fn fp_bezout(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], vec![]);
    let (mut t0, mut t1): (Fp, Fp) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    assert_eq!(r0.len(), 1, "fp_bezout on non-coprime polynomials");
    let inv = fp_inv(r0[0], p);
    let scale = |v: Fp| fp_trim(v.into_iter().map(|c| c * inv % p).collect());
    (scale(s0), scale(t0))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    fp_trim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

fn fp_powmod(base: &Fp, exp: &BigUint, modulus: &Fp, p: u64) -> Fp {
    let mut acc: Fp = vec![1];
    let base = fp_divrem(base, modulus, p).1;
    for bit in (0..exp.bits()).rev() {
        acc = fp_divrem(&fp_mul(&acc, &acc, p), modulus, p).1;
        if exp.bit(bit) {
            acc = fp_divrem(&fp_mul(&acc, &base, p), modulus, p).1;
        }
    }
    acc
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn fp_ddf(f: &Fp, p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            let deg = rest.len() - 1;
            out.push((rest.clone(), deg));
            break;
        }
        h = fp_powmod(&h, &BigUint::from(p), &rest, p);
        let g = fp_gcd(&rest, &fp_sub(&h, &x, p), p);
        if g.len() > 1 {
            out.push((g.clone(), d));
            rest = fp_divrem(&rest, &g, p).0;
            h = fp_divrem(&h, &rest, p).1;
        }
    }
    out
}

/// Equal-degree splitting (Cantor–Zassenhaus, odd p).
fn fp_edf(f: &Fp, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: Fp = fp_trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &exp, f, p), &vec![1], p);
        let g = fp_gcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let other = fp_monic(&fp_divrem(f, &g, p).0, p);
            let mut out = fp_edf(&g, d, p, rng);
            out.extend(fp_edf(&other, d, p, rng));
            return out;
        }
    }
}

fn fp_factor(f: &Fp, p: u64) -> Vec<Fp> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_fac7);
    let mut out = Vec::new();
    for (g, d) in fp_ddf(f, p) {
        out.extend(fp_edf(&g, d, p, &mut rng));
    }
    out
}

// ---------------------------------------------------------------------------
// Hensel lifting over Z / p^k

fn zmod(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    f.iter().map(|c| c.mod_floor(m)).collect()
}

fn zpoly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zpoly_trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn fp_to_int(a: &Fp) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift `f ≡ g·h (mod p)` with `g` monic to `f ≡ g*·h* (mod p^k)`.
fn hensel_lift_pair(f: &[BigInt], g: &Fp, h: &Fp, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (s, t) = fp_bezout(g, h, p);
    let pb = BigInt::from(p);
    let mut g_int = fp_to_int(g);
    let mut h_int = fp_to_int(h);
    let mut pk = pb.clone();
    for _ in 1..k {
        let gh = zpoly_mul(&g_int, &h_int);
        let n = f.len().max(gh.len());
        let diff: Vec<BigInt> = (0..n)
            .map(|i| f.get(i).cloned().unwrap_or_default() - gh.get(i).cloned().unwrap_or_default())
            .collect();
        let e: Vec<BigInt> = diff
            .iter()
            .map(|c| {
                debug_assert!((c % &pk).is_zero());
                c / &pk
            })
            .collect();
        let e = fp_from_int(&e, p);
        let (q, tau) = fp_divrem(&fp_mul(&t, &e, p), g, p);
        let sigma = {
            let a = fp_mul(&s, &e, p);
            let b = fp_mul(&q, h, p);
            let n = a.len().max(b.len());
            fp_trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % p).collect())
        };
        let next = &pk * &pb;
        let bump = |base: &mut Vec<BigInt>, delta: &Fp| {
            if base.len() < delta.len() {
                base.resize(delta.len(), BigInt::zero());
            }
            for (i, &d) in delta.iter().enumerate() {
                base[i] += &pk * BigInt::from(d);
            }
            *base = zmod(base, &next);
        };
        bump(&mut g_int, &tau);
        bump(&mut h_int, &sigma);
        pk = next;
    }
    (zpoly_trim(g_int), zpoly_trim(h_int))
}

fn symmetric_mod(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    zpoly_trim(
        f.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn primitive_part(f: &[BigInt]) -> Vec<BigInt> {
    let mut content = BigInt::zero();
    for c in f {
        content = content.gcd(c);
    }
    if f.last().unwrap().is_negative() {
        content = -content;
    }
    f.iter().map(|c| c / &content).collect()
}

/// Exact division in Z[x]; `None` unless `b | a`.
fn zpoly_exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() < b.len() {
        return None;
    }
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
    }
    if r.iter().all(Zero::is_zero) {
        Some(q)
    } else {
        None
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..5000).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Irreducible factors of a primitive squarefree integer polynomial with
/// positive leading coefficient and nonzero constant term.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().unwrap().clone();

    // choose the prime with the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fp_from_int(f, p);
        if fp_gcd(&fp, &fp_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let count: usize = fp_ddf(&fp_monic(&fp, p), p).iter().map(|(g, d)| (g.len() - 1) / d).sum();
        if count == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, fs)| count < fs.len()) {
            best = Some((p, fp_factor(&fp_monic(&fp, p), p)));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, modular) = best.expect("no suitable prime found");

    // lifting bound: |lc| · 2^n · (n+1) · max|c|, doubled for the symmetric range
    let max_coeff = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = BigInt::from(2u32) * lc.abs() * (BigInt::one() << n) * BigInt::from(n as u64 + 1) * max_coeff;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }

    // lift the factorization one factor at a time
    let lc_mod = fp_from_int(std::slice::from_ref(&lc), p);
    let mut lifted: Vec<Vec<BigInt>> = Vec::new();
    let mut target: Vec<BigInt> = f.to_vec();
    for i in 0..modular.len() - 1 {
        let g = &modular[i];
        let mut h = lc_mod.clone();
        for other in &modular[i + 1..] {
            h = fp_mul(&h, other, p);
        }
        let (g_star, h_star) = hensel_lift_pair(&target, g, &h, p, k);
        lifted.push(g_star);
        target = h_star;
    }
    let lc_inv = {
        let e = lc.extended_gcd(&pk);
        e.x.mod_floor(&pk)
    };
    lifted.push(zmod(&target.iter().map(|c| c * &lc_inv).collect::<Vec<_>>(), &pk));

    // recombination
    let mut remaining = lifted;
    let mut current = f.to_vec();
    let mut found = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= remaining.len() {
        for subset in combinations(remaining.len(), size) {
            let lc_cur = current.last().unwrap().clone();
            let mut cand = vec![lc_cur];
            for &i in &subset {
                cand = zmod(&zpoly_mul(&cand, &remaining[i]), &pk);
            }
            let cand = symmetric_mod(&cand, &pk);
            if cand.len() < 2 {
                continue;
            }
            let cand = primitive_part(&cand);
            if let Some(q) = zpoly_exact_div(&current, &cand) {
                found.push(cand);
                current = q;
                let mut idx = 0;
                remaining.retain(|_| {
                    let keep = !subset.contains(&idx);
                    idx += 1;
                    keep
                });
                continue 'outer;
            }
        }
        size += 1;
    }
    if current.len() > 1 {
        found.push(primitive_part(&current));
    }
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Trager's algorithm over Q(ζ)

/// Field norm `N_{K/Q}(a)` as the determinant of multiplication by `a`.
pub fn field_norm(field: &BaseField, a: &Scalar) -> BigRational {
    let d = field.degree();
    match a {
        Scalar::Rat(r) => num_traits::pow(r.clone(), d),
        Scalar::Cyc(_) => {
            let zeta = field.generator().expect("cyclotomic element over Q");
            let mut basis = Scalar::one();
            let mut cols = Vec::with_capacity(d);
            for _ in 0..d {
                cols.push(field.coords(&(a * &basis)));
                basis = &basis * &zeta;
            }
            let m = Matrix::from_fn(d, d, |i, j| Scalar::Rat(cols[j][i].clone()));
            m.det().as_rational().unwrap().clone()
        }
    }
}

/// Norm of a polynomial over K down to Q, by evaluation and interpolation.
fn poly_norm(field: &BaseField, g: &UniPoly) -> UniPoly {
    let deg = g.degree().unwrap() * field.degree();
    let xs: Vec<BigRational> = (0..=deg as i64).map(|i| BigRational::from_integer(i.into())).collect();
    let ys: Vec<BigRational> = xs.iter().map(|x| field_norm(field, &g.eval(&Scalar::Rat(x.clone())))).collect();
    interpolate(&xs, &ys)
}

fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> UniPoly {
    // Newton divided differences
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut acc = UniPoly::zero();
    for i in (0..n).rev() {
        acc = acc
            .mul(&UniPoly::linear_root(Scalar::Rat(xs[i].clone())))
            .add(&UniPoly::constant(Scalar::Rat(coef[i].clone())));
    }
    acc
}

fn trager(field: &BaseField, g: &UniPoly) -> Result<Vec<UniPoly>> {
    let g = g.monic();
    if g.degree() == Some(1) {
        return Ok(vec![g]);
    }
    let zeta = field.generator().unwrap();
    for s in (0i64..).flat_map(|i| if i == 0 { vec![0] } else { vec![i, -i] }).take(64) {
        let shift = &zeta * &Scalar::from_int(s);
        let gs = g.shift(&(-&shift));
        let norm = poly_norm(field, &gs);
        if norm.gcd(&norm.derivative()).degree() != Some(0) {
            continue;
        }
        let mut out = Vec::new();
        for (n_i, _) in factor_univariate_bounded(&norm, usize::MAX)? {
            let h = n_i.gcd(&gs);
            if h.degree().unwrap_or(0) > 0 {
                out.push(h.shift(&shift).monic());
            }
        }
        out.sort();
        return Ok(out);
    }
    unreachable!("no squarefree norm found among 64 shifts")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::scalar::CyclotomicField;

    fn rational_roots_oracle(p: &UniPoly) -> Vec<BigRational> {
        // candidates ±a/b, a | constant term, b | leading coefficient
        let f = primitive_integer(p);
        let divisors = |n: &BigInt| -> Vec<BigInt> {
            let n = n.abs();
            let m = n.to_u64().unwrap();
            (1..=m).filter(|d| m % d == 0).map(BigInt::from).collect()
        };
        let mut roots = Vec::new();
        if f[0].is_zero() {
            roots.push(BigRational::zero());
            return roots;
        }
        for a in divisors(&f[0]) {
            for b in divisors(f.last().unwrap()) {
                for sign in [1, -1] {
                    let r = BigRational::new(a.clone() * sign, b.clone());
                    if p.eval(&Scalar::Rat(r.clone())).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots
    }

    fn product(factors: &[(UniPoly, u32)]) -> UniPoly {
        factors.iter().fold(UniPoly::one(), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    #[test]
    fn difference_of_squares() {
        let f = factor_univariate(&UniPoly::from_ints(&[-1, 0, 1])).unwrap();
        assert_eq!(f, vec![(UniPoly::from_ints(&[-1, 1]), 1), (UniPoly::from_ints(&[1, 1]), 1)]);
    }

    #[test]
    fn x_squared_plus_one_is_irreducible() {
        let p = UniPoly::from_ints(&[1, 0, 1]);
        assert_eq!(factor_univariate(&p).unwrap(), vec![(p, 1)]);
    }

    #[test]
    fn x_cubed_minus_two_is_irreducible() {
        let p = UniPoly::from_ints(&[-2, 0, 0, 1]);
        assert!(rational_roots_oracle(&p).is_empty());
        assert_eq!(factor_univariate(&p).unwrap(), vec![(p, 1)]);
    }

    #[test]
    fn swinnerton_dyer_style_recombination() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits modulo every prime
        let p = UniPoly::from_ints(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_univariate(&p).unwrap(), vec![(p, 1)]);
    }

    #[test]
    fn mixed_multiplicities_and_rational_coefficients() {
        let a = UniPoly::from_ints(&[-1, 2]); // 2x - 1
        let b = UniPoly::from_ints(&[1, 1, 1]);
        let c = UniPoly::from_ints(&[0, 1]);
        let p = a.pow(2).mul(&b).mul(&c.pow(3)).scale(&Scalar::from_ratio(3, 7));
        let f = factor_univariate(&p).unwrap();
        assert_eq!(product(&f).monic(), p.monic());
        assert_eq!(f.len(), 3);
        assert!(f.contains(&(a.monic(), 2)));
        assert!(f.contains(&(b, 1)));
        assert!(f.contains(&(c, 3)));
    }

    #[test]
    fn degree_bound() {
        let p = UniPoly::x().pow(70).add(&UniPoly::one());
        assert!(matches!(factor_univariate(&p), Err(Error::DegreeTooLarge { degree: 70, bound: 64 })));
    }

    #[test]
    fn cyclotomic_splitting() {
        // x^2 + x + 1 splits over Q(ζ3) as (x - ζ)(x - ζ²)
        let field = BaseField::Cyclotomic(CyclotomicField::new(3));
        let p = UniPoly::from_ints(&[1, 1, 1]);
        let f = factor_over(&field, &p, 64).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(g, e)| g.degree() == Some(1) && *e == 1));
        assert_eq!(product(&f), p);
        // x^3 - 2 stays irreducible over Q(ζ3) (degree 3 vs 2)
        let q = UniPoly::from_ints(&[-2, 0, 0, 1]);
        let f = factor_over(&field, &q, 64).unwrap();
        assert_eq!(f, vec![(q, 1)]);
        // x^3 - 1 = (x-1)(x-ζ)(x-ζ²)
        let r = UniPoly::from_ints(&[-1, 0, 0, 1]);
        let f = factor_over(&field, &r, 64).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(product(&f), r);
    }

    #[test]
    fn norm_of_zeta() {
        let field = BaseField::Cyclotomic(CyclotomicField::new(5));
        let z = field.generator().unwrap();
        assert_eq!(field_norm(&field, &z), BigRational::one());
        let two = Scalar::from_int(2);
        assert_eq!(field_norm(&field, &two), BigRational::from_integer(16.into()));
    }
}
