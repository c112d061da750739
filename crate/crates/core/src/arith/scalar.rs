//! Exact scalars: rationals and elements of a cyclotomic field `Q(ζ_n)`.
//!
//! An element of `Q(ζ_n)` is stored as its coordinate vector over the power
//! basis `1, ζ, …, ζ^(φ(n)-1)`. Elements that happen to be rational are always
//! demoted to [`Scalar::Rat`], so structural equality is field equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The cyclotomic field `Q[t]/Φ_n(t)`.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u32,
    /// Monic `Φ_n`, low degree first, length `φ(n) + 1`.
    modulus: Vec<BigRational>,
}

impl CyclotomicField {
    pub fn new(conductor: u32) -> Arc<Self> {
        assert!(conductor >= 1, "conductor must be positive");
        let modulus = cyclotomic_polynomial(conductor)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        Arc::new(CyclotomicField { conductor, modulus })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Degree `φ(n)` of the extension.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigRational] {
        &self.modulus
    }

    /// The primitive root of unity `ζ_n`.
    pub fn zeta(self: &Arc<Self>) -> Scalar {
        let mut coords = vec![BigRational::zero(); self.degree()];
        if self.degree() == 1 {
            // Q(ζ_1) = Q(ζ_2) = Q; ζ is ±1
            return Scalar::Rat(-self.modulus[0].clone());
        }
        coords[1] = BigRational::one();
        Scalar::from_coords(self, coords)
    }

    fn reduce(&self, mut poly: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        while poly.len() > d {
            let top = poly.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = poly.len() - d;
            for (j, m) in self.modulus[..d].iter().enumerate() {
                poly[shift + j] -= &top * m;
            }
        }
        poly.resize(d, BigRational::zero());
        poly
    }

    fn inverse(&self, a: &[BigRational]) -> Vec<BigRational> {
        // extended Euclid on (a, Φ) over Q
        let mut r0 = trim(self.modulus.clone());
        let mut r1 = trim(a.to_vec());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !(r1.len() == 1) {
            assert!(!r1.is_empty(), "inverse of zero in cyclotomic field");
            let (q, r) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        let c = r1[0].clone();
        let out: Vec<BigRational> = s1.into_iter().map(|x| x / &c).collect();
        self.reduce(out)
    }
}

/// Which field the coefficients of a computation live in.
#[derive(Clone, Debug)]
pub enum BaseField {
    Rationals,
    Cyclotomic(Arc<CyclotomicField>),
}

impl BaseField {
    pub fn cyclotomic(conductor: u32) -> Self {
        if conductor <= 2 {
            BaseField::Rationals
        } else {
            BaseField::Cyclotomic(CyclotomicField::new(conductor))
        }
    }

    pub fn conductor(&self) -> u32 {
        match self {
            BaseField::Rationals => 1,
            BaseField::Cyclotomic(f) => f.conductor(),
        }
    }

    /// Degree of the field over Q.
    pub fn degree(&self) -> usize {
        match self {
            BaseField::Rationals => 1,
            BaseField::Cyclotomic(f) => f.degree(),
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (_, Scalar::Rat(_)) => true,
            (BaseField::Rationals, Scalar::Cyc(_)) => false,
            (BaseField::Cyclotomic(f), Scalar::Cyc(c)) => f.conductor == c.field.conductor,
        }
    }

    /// Generator of the field over Q (`ζ_n`), or `None` for Q.
    pub fn generator(&self) -> Option<Scalar> {
        match self {
            BaseField::Rationals => None,
            BaseField::Cyclotomic(f) => Some(f.zeta()),
        }
    }

    /// Power-basis coordinates of `s` (length = degree).
    pub fn coords(&self, s: &Scalar) -> Vec<BigRational> {
        let d = self.degree();
        match s {
            Scalar::Rat(r) => {
                let mut v = vec![BigRational::zero(); d];
                v[0] = r.clone();
                v
            }
            Scalar::Cyc(c) => c.coords.clone(),
        }
    }

    pub fn from_coords(&self, coords: Vec<BigRational>) -> Scalar {
        match self {
            BaseField::Rationals => Scalar::Rat(coords.into_iter().next().unwrap_or_else(BigRational::zero)),
            BaseField::Cyclotomic(f) => Scalar::from_coords(f, coords),
        }
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.conductor() == other.conductor()
    }
}
impl Eq for BaseField {}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "rationals"),
            BaseField::Cyclotomic(c) => write!(f, "cyclotomic({})", c.conductor),
        }
    }
}

/// Element of `Q(ζ_n)` with at least one irrational coordinate.
#[derive(Clone, Debug)]
pub struct Cyclo {
    field: Arc<CyclotomicField>,
    coords: Vec<BigRational>,
}

impl Cyclo {
    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.coords == other.coords
    }
}
impl Eq for Cyclo {}

impl Hash for Cyclo {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.coords.hash(state);
    }
}

/// Exact scalar over the rationals or a cyclotomic extension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Cyc(Cyclo),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::Rat(BigRational::from_integer(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rat(r)
    }

    fn from_coords(field: &Arc<CyclotomicField>, coords: Vec<BigRational>) -> Self {
        debug_assert_eq!(coords.len(), field.degree());
        if coords[1..].iter().all(Zero::is_zero) {
            Scalar::Rat(coords.into_iter().next().unwrap())
        } else {
            Scalar::Cyc(Cyclo { field: field.clone(), coords })
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Cyc(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_integer())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn checked_inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) if r.is_zero() => None,
            Scalar::Rat(r) => Some(Scalar::Rat(r.recip())),
            Scalar::Cyc(c) => {
                let inv = c.field.inverse(&c.coords);
                Some(Scalar::from_coords(&c.field, inv))
            }
        }
    }

    pub fn inv(&self) -> Scalar {
        self.checked_inv().expect("division by zero scalar")
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Sign-like normalization helper: true if the scalar is a negative rational.
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_negative())
    }

    fn field_of<'a>(a: &'a Cyclo, b: &Cyclo) -> &'a Arc<CyclotomicField> {
        assert_eq!(
            a.field.conductor, b.field.conductor,
            "mixing scalars from different cyclotomic fields"
        );
        &a.field
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rat(r)
    }
}

impl Ord for Scalar {
    /// Structural total order used for canonical sorting; not a field order.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Rat(_), Scalar::Cyc(_)) => Ordering::Less,
            (Scalar::Cyc(_), Scalar::Rat(_)) => Ordering::Greater,
            (Scalar::Cyc(a), Scalar::Cyc(b)) => a
                .field
                .conductor
                .cmp(&b.field.conductor)
                .then_with(|| a.coords.cmp(&b.coords)),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Rat(a), Scalar::Cyc(c)) | (Scalar::Cyc(c), Scalar::Rat(a)) => {
                let mut coords = c.coords.clone();
                coords[0] += a;
                Scalar::Cyc(Cyclo { field: c.field.clone(), coords })
            }
            (Scalar::Cyc(a), Scalar::Cyc(b)) => {
                let field = Scalar::field_of(a, b);
                let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
                Scalar::from_coords(field, coords)
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Cyc(c) => Scalar::Cyc(Cyclo {
                field: c.field.clone(),
                coords: c.coords.iter().map(|x| -x).collect(),
            }),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), Scalar::Cyc(c)) | (Scalar::Cyc(c), Scalar::Rat(a)) => {
                if a.is_zero() {
                    return Scalar::zero();
                }
                Scalar::Cyc(Cyclo {
                    field: c.field.clone(),
                    coords: c.coords.iter().map(|x| x * a).collect(),
                })
            }
            (Scalar::Cyc(a), Scalar::Cyc(b)) => {
                let field = Scalar::field_of(a, b);
                let prod = qpoly_mul(&a.coords, &b.coords);
                let coords = field.reduce(prod);
                Scalar::from_coords(field, coords)
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (_, Scalar::Rat(b)) => {
                assert!(!b.is_zero(), "division by zero scalar");
                match self {
                    Scalar::Rat(a) => Scalar::Rat(a / b),
                    Scalar::Cyc(c) => Scalar::Cyc(Cyclo {
                        field: c.field.clone(),
                        coords: c.coords.iter().map(|x| x / b).collect(),
                    }),
                }
            }
            _ => self * &rhs.inv(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", r),
            Scalar::Cyc(c) => {
                write!(f, "(")?;
                let mut first = true;
                for (i, x) in c.coords.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let neg = x.is_negative();
                    let mag = x.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if neg { "-" } else { "+" })?;
                    }
                    first = false;
                    match i {
                        0 => write!(f, "{}", mag)?,
                        _ => {
                            if !mag.is_one() {
                                write!(f, "{}*", mag)?;
                            }
                            if i == 1 {
                                write!(f, "zeta")?;
                            } else {
                                write!(f, "zeta^{}", i)?;
                            }
                        }
                    }
                }
                write!(f, ")")
            }
        }
    }
}

// Small dense polynomial helpers over Q (low degree first), used for field
// arithmetic only.

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn qpoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead = b.last().unwrap().clone();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (j, y) in b.iter().enumerate() {
            r[shift + j] -= &c * y;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

/// Integer coefficients of the n-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    // Φ_n = (x^n - 1) / Π_{d | n, d < n} Φ_d
    let mut num: Vec<BigRational> = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d: Vec<BigRational> = cyclotomic_polynomial(d)
                .into_iter()
                .map(BigRational::from_integer)
                .collect();
            let (q, r) = qpoly_divrem(&num, &phi_d);
            debug_assert!(r.is_empty());
            num = q;
        }
    }
    num.into_iter().map(|c| c.to_integer()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn zeta_cubed_is_one() {
        let k = CyclotomicField::new(3);
        let z = k.zeta();
        assert!(!z.is_rational());
        assert_eq!(z.pow(3), Scalar::one());
        // ζ·ζ² demotes to the rational 1
        let prod = &z * &z.pow(2);
        assert!(matches!(prod, Scalar::Rat(_)));
        assert!(prod.is_one());
        // 1 + ζ + ζ² = 0
        assert!((&(&Scalar::one() + &z) + &z.pow(2)).is_zero());
    }

    #[test]
    fn inverse_in_extension() {
        let k = CyclotomicField::new(5);
        let z = k.zeta();
        let a = &(&z + &Scalar::from_int(2)) * &z.pow(3);
        let b = a.inv();
        assert!((&a * &b).is_one());
        assert!((&a / &a).is_one());
    }

    #[test]
    fn display() {
        let k = CyclotomicField::new(3);
        let z = k.zeta();
        assert_eq!(z.to_string(), "(zeta)");
        assert_eq!((-&z - Scalar::one()).to_string(), "(-1 - zeta)");
        assert_eq!(Scalar::from_ratio(-3, 6).to_string(), "-1/2");
    }
}
