use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::expr::{parse_expr, Expr};
use super::monomial::{Monomial, TermOrder};
use super::ring::{same_ring, Ring};
use crate::arith::{Scalar, UniPoly};
use crate::error::{Error, Result};

pub(crate) type Term = (Monomial, Scalar);

/// Sort by `ord` (descending), merge equal monomials, drop zeros.
pub(crate) fn normalize_terms(mut terms: Vec<Term>, ord: TermOrder) -> Vec<Term> {
    terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        match out.last_mut() {
            Some(last) if last.0 == m => last.1 = &last.1 + &c,
            _ => out.push((m, c)),
        }
        if out.last().is_some_and(|t| t.1.is_zero()) {
            out.pop();
        }
    }
    out
}

/// `a - c * m * b` for term lists sorted descending by `ord`.
pub(crate) fn sub_mul_terms(
    a: &[Term],
    c: &Scalar,
    m: &Monomial,
    b: &[Term],
    ord: TermOrder,
) -> Vec<Term> {
    if c.is_zero() {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut bm = b.first().map(|t| t.0.mul(m));
    while let Some(cur) = bm.take() {
        if i < a.len() && ord.cmp(&a[i].0, &cur) == Ordering::Greater {
            out.push(a[i].clone());
            i += 1;
            bm = Some(cur);
            continue;
        }
        let prod = c * &b[j].1;
        if i < a.len() && a[i].0 == cur {
            let s = &a[i].1 - &prod;
            if !s.is_zero() {
                out.push((cur, s));
            }
            i += 1;
        } else {
            out.push((cur, -prod));
        }
        j += 1;
        bm = b.get(j).map(|t| t.0.mul(m));
    }
    out.extend_from_slice(&a[i..]);
    out
}

pub(crate) fn add_terms(a: &[Term], b: &[Term], ord: TermOrder) -> Vec<Term> {
    if b.is_empty() {
        return a.to_vec();
    }
    let one = Monomial::one(b[0].0.nvars());
    sub_mul_terms(a, &-Scalar::one(), &one, b, ord)
}

pub(crate) fn mul_terms(a: &[Term], b: &[Term], ord: TermOrder) -> Vec<Term> {
    let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let e = acc.entry(ma.mul(mb)).or_default();
            *e = &*e + &(ca * cb);
        }
    }
    normalize_terms(acc.into_iter().collect(), ord)
}

/// Sparse multivariate polynomial. Terms are kept in descending grevlex order.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    ring: Ring,
    terms: Vec<Term>,
}

const ORD: TermOrder = TermOrder::Grevlex;

impl MultiPoly {
    pub fn from_terms(ring: &Ring, terms: Vec<(Monomial, Scalar)>) -> Self {
        for (m, _) in &terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity does not match ring");
        }
        MultiPoly { ring: ring.clone(), terms: normalize_terms(terms, ORD) }
    }

    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<Term>, ord: TermOrder) -> Self {
        if ord == ORD {
            MultiPoly { ring: ring.clone(), terms }
        } else {
            MultiPoly::from_terms(ring, terms)
        }
    }

    pub fn zero(ring: &Ring) -> Self {
        MultiPoly { ring: ring.clone(), terms: vec![] }
    }

    pub fn one(ring: &Ring) -> Self {
        MultiPoly::constant(ring, Scalar::one())
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Self {
        MultiPoly::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn from_int(ring: &Ring, c: i64) -> Self {
        MultiPoly::constant(ring, Scalar::from_int(c))
    }

    pub fn var(ring: &Ring, i: usize) -> Self {
        MultiPoly::monomial(ring, Monomial::var(ring.nvars(), i, 1), Scalar::one())
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: Scalar) -> Self {
        MultiPoly::from_terms(ring, vec![(m, c)])
    }

    /// Parse an expression such as `x*y - z^2` or `u^3 - zeta*v`.
    pub fn parse(ring: &Ring, src: &str) -> Result<Self> {
        MultiPoly::from_expr(ring, &parse_expr(src)?)
    }

    pub fn from_expr(ring: &Ring, e: &Expr) -> Result<Self> {
        Ok(match e {
            Expr::Int(n) => MultiPoly::constant(ring, Scalar::from_bigint(n.clone())),
            Expr::Ident(name) => match ring.index_of(name) {
                Some(i) => MultiPoly::var(ring, i),
                None => match (name.as_str(), ring.field().generator()) {
                    ("zeta", Some(z)) => MultiPoly::constant(ring, z),
                    _ => return Err(Error::UnknownVariable(name.clone())),
                },
            },
            Expr::Call(name, _) => {
                return Err(Error::Parse {
                    message: format!("function '{}' is not allowed in a polynomial", name),
                    column: 0,
                })
            }
            Expr::Neg(a) => -&MultiPoly::from_expr(ring, a)?,
            Expr::Add(a, b) => &MultiPoly::from_expr(ring, a)? + &MultiPoly::from_expr(ring, b)?,
            Expr::Sub(a, b) => &MultiPoly::from_expr(ring, a)? - &MultiPoly::from_expr(ring, b)?,
            Expr::Mul(a, b) => &MultiPoly::from_expr(ring, a)? * &MultiPoly::from_expr(ring, b)?,
            Expr::Div(a, b) => {
                let num = MultiPoly::from_expr(ring, a)?;
                let den = MultiPoly::from_expr(ring, b)?;
                match den.constant_value() {
                    Some(c) if !c.is_zero() => num.scale(&c.inv()),
                    _ => {
                        return Err(Error::Parse {
                            message: "division by a non-constant in a polynomial".into(),
                            column: 0,
                        })
                    }
                }
            }
            Expr::Pow(a, e) => MultiPoly::from_expr(ring, a)?.pow(*e),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The value if the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.iter().find(|(t, _)| t == m).map(|(_, c)| c.clone()).unwrap_or_default()
    }

    /// Leading term under grevlex.
    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn leading_in(&self, ord: TermOrder) -> Option<(Monomial, Scalar)> {
        self.terms.iter().max_by(|a, b| ord.cmp(&a.0, &b.0)).cloned()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m.exp(var)).max().unwrap_or(0)
    }

    /// Per-variable occurrence flags.
    pub fn uses(&self) -> Vec<bool> {
        let mut used = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for i in m.support() {
                used[i] = true;
            }
        }
        used
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(var) > 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_rational())
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    /// Divide by the grevlex leading coefficient.
    pub fn monic(&self) -> MultiPoly {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv()),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = MultiPoly::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Ring homomorphism sending variable `i` to `images[i]` (all in `target`).
    pub fn substitute(&self, target: &Ring, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.ring.nvars(), "substitution arity");
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(target), p.clone()]).collect();
        let mut acc: Vec<Term> = Vec::new();
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e];
                if t.is_zero() {
                    break;
                }
            }
            acc.extend(t.terms);
        }
        MultiPoly::from_terms(target, acc)
    }

    /// Replace one variable by a polynomial of the same ring.
    pub fn substitute_var(&self, var: usize, image: &MultiPoly) -> MultiPoly {
        let images: Vec<MultiPoly> = (0..self.ring.nvars())
            .map(|i| if i == var { image.clone() } else { MultiPoly::var(&self.ring, i) })
            .collect();
        self.substitute(&self.ring.clone(), &images)
    }

    /// Rename variables: variable `i` becomes variable `mapping[i]` of `target`.
    pub fn map_vars(&self, target: &Ring, mapping: &[usize]) -> MultiPoly {
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = Monomial::one(n);
                for (i, &e) in m.exponents().iter().enumerate() {
                    if e > 0 {
                        out.exps_mut()[mapping[i]] += e;
                    }
                }
                (out, c.clone())
            })
            .collect();
        MultiPoly::from_terms(target, terms)
    }

    /// Move into `target` by matching variable names. Panics on a missing name.
    pub fn map_by_name(&self, target: &Ring) -> MultiPoly {
        let mapping: Vec<usize> = self
            .ring
            .names()
            .iter()
            .map(|n| target.index_of(n).unwrap_or_else(|| panic!("variable {} missing in target ring", n)))
            .collect();
        self.map_vars(target, &mapping)
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| {
                let e = m.exp(var);
                let mut m2 = m.clone();
                m2.exps_mut()[var] -= 1;
                (m2, c * &Scalar::from_int(e as i64))
            })
            .collect();
        MultiPoly::from_terms(&self.ring, terms)
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e as u32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// View as a univariate polynomial in `var` if no other variable occurs.
    pub fn to_univariate(&self, var: usize) -> Option<UniPoly> {
        let deg = self.degree_in(var) as usize;
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        for (m, c) in &self.terms {
            if m.support().any(|i| i != var) {
                return None;
            }
            coeffs[m.exp(var) as usize] = c.clone();
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn from_univariate(ring: &Ring, var: usize, p: &UniPoly) -> MultiPoly {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(e, c)| (Monomial::var(ring.nvars(), var, e as u16), c.clone()))
            .collect();
        MultiPoly::from_terms(ring, terms)
    }

    /// `p(at)` for a univariate `p`.
    pub fn compose_univariate(p: &UniPoly, at: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero(at.ring());
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * at) + &MultiPoly::constant(at.ring(), c.clone());
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        check_ring(self, d);
        let (lm, lc) = d.terms.first()?;
        let inv = lc.inv();
        let mut rem = self.terms.clone();
        let mut quot: Vec<Term> = Vec::new();
        while let Some((m, c)) = rem.first() {
            if !lm.divides(m) {
                return None;
            }
            let qm = m.div(lm);
            let qc = c * &inv;
            rem = sub_mul_terms(&rem[1..], &qc, &qm, &d.terms[1..], ORD);
            quot.push((qm, qc));
        }
        Some(MultiPoly { ring: self.ring.clone(), terms: quot })
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let n = self.ring.nvars();
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else { return Monomial::one(n) };
        let mut g = first.clone();
        for (m, _) in it {
            for v in 0..n {
                let e = g.exp(v).min(m.exp(v));
                g.exps_mut()[v] = e;
            }
        }
        g
    }

    /// Divide every term by a monomial that divides all of them.
    pub fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.div(m), c.clone())).collect(),
        }
    }

    /// Integer content-free form with positive leading coefficient, when rational.
    pub fn primitive(&self) -> MultiPoly {
        if !self.is_rational() || self.is_zero() {
            return self.monic();
        }
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        let mut lcm_den = BigInt::one();
        let mut gcd_num = BigInt::zero();
        for (_, c) in &self.terms {
            let r = c.as_rational().unwrap();
            lcm_den = lcm_den.lcm(r.denom());
            gcd_num = gcd_num.gcd(r.numer());
        }
        let mut f = num_rational::BigRational::new(lcm_den, gcd_num);
        if self.terms[0].1.as_rational().unwrap().is_negative() {
            f = -f;
        }
        self.scale(&Scalar::from_rational(f))
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl Hash for MultiPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let c = ORD.cmp(&a.0, &b.0).then_with(|| a.1.cmp(&b.1));
            if c != Ordering::Equal {
                return c;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn check_ring(a: &MultiPoly, b: &MultiPoly) {
    assert!(same_ring(&a.ring, &b.ring), "polynomials from different rings: {} vs {}", a.ring, b.ring);
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        check_ring(self, rhs);
        MultiPoly { ring: self.ring.clone(), terms: add_terms(&self.terms, &rhs.terms, ORD) }
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        check_ring(self, rhs);
        if rhs.is_zero() {
            return self.clone();
        }
        let one = Monomial::one(self.ring.nvars());
        MultiPoly { ring: self.ring.clone(), terms: sub_mul_terms(&self.terms, &Scalar::one(), &one, &rhs.terms, ORD) }
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        check_ring(self, rhs);
        MultiPoly { ring: self.ring.clone(), terms: mul_terms(&self.terms, &rhs.terms, ORD) }
    }
}

impl<'a> Neg for &'a MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Scalar::one())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &'a MultiPoly) -> MultiPoly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

pub(crate) fn fmt_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, names: &[String]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", names[i])?;
        if e > 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative_rational();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", mag)?;
                }
                fmt_monomial(f, m, self.ring.names())?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BaseField;
    use crate::poly::PolyRing;

    fn ring() -> Ring {
        PolyRing::new(BaseField::Rationals, ["x", "y", "z"])
    }

    #[test]
    fn parse_and_display_roundtrip() {
        let r = ring();
        let p = MultiPoly::parse(&r, "z^2 - x*y + 3 - 1/2*x").unwrap();
        assert_eq!(p.to_string(), "-x*y + z^2 - 1/2*x + 3");
        assert_eq!(MultiPoly::parse(&r, &p.to_string()).unwrap(), p);
        assert!(matches!(MultiPoly::parse(&r, "w + 1"), Err(Error::UnknownVariable(_))));
        assert!(MultiPoly::parse(&r, "1/x").is_err());
    }

    #[test]
    fn arithmetic_identities() {
        let r = ring();
        let a = MultiPoly::parse(&r, "x + y").unwrap();
        let b = MultiPoly::parse(&r, "x - y").unwrap();
        assert_eq!(&a * &b, MultiPoly::parse(&r, "x^2 - y^2").unwrap());
        assert!((&a - &a).is_zero());
        assert_eq!(a.pow(3), &(&a * &a) * &a);
    }

    #[test]
    fn substitution_is_a_ring_map() {
        let r = ring();
        let up = PolyRing::new(BaseField::Rationals, ["u", "v"]);
        let imgs = ["u^2", "v^2", "u*v"].map(|s| MultiPoly::parse(&up, s).unwrap());
        let rel = MultiPoly::parse(&r, "x*y - z^2").unwrap();
        assert!(rel.substitute(&up, &imgs).is_zero());
        let f = MultiPoly::parse(&r, "x + z").unwrap();
        assert_eq!(f.substitute(&up, &imgs).to_string(), "u^2 + u*v");
    }

    #[test]
    fn derivative_and_eval() {
        let r = ring();
        let p = MultiPoly::parse(&r, "x^3*y + 2*z").unwrap();
        assert_eq!(p.derivative(0), MultiPoly::parse(&r, "3*x^2*y").unwrap());
        let v = p.eval(&[Scalar::from_int(2), Scalar::from_int(3), Scalar::from_int(-1)]);
        assert_eq!(v, Scalar::from_int(22));
    }

    #[test]
    fn univariate_views() {
        let r = ring();
        let p = MultiPoly::parse(&r, "y^2 - 1").unwrap();
        let u = p.to_univariate(1).unwrap();
        assert_eq!(u, UniPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(MultiPoly::from_univariate(&r, 1, &u), p);
        assert!(MultiPoly::parse(&r, "x*y").unwrap().to_univariate(1).is_none());
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let a = MultiPoly::parse(&r, "x^2 - y^2").unwrap();
        let b = MultiPoly::parse(&r, "x + y").unwrap();
        assert_eq!(a.div_exact(&b).unwrap(), MultiPoly::parse(&r, "x - y").unwrap());
        assert!(b.div_exact(&a).is_none());
        assert!(a.div_exact(&MultiPoly::parse(&r, "x + z").unwrap()).is_none());
        let c = MultiPoly::parse(&r, "x^2*y + x^3*z").unwrap();
        assert_eq!(c.monomial_content(), Monomial::from_exponents(&[2, 0, 0]));
    }

    #[test]
    fn cyclotomic_coefficients() {
        let r = PolyRing::new(BaseField::cyclotomic(3), ["u"]);
        let p = MultiPoly::parse(&r, "zeta^3*u - u").unwrap();
        assert!(p.is_zero());
        let q = MultiPoly::parse(&r, "(zeta^2 + zeta + 1)*u").unwrap();
        assert!(q.is_zero());
    }
}
