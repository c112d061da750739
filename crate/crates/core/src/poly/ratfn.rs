use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::multipoly::MultiPoly;
use super::ring::Ring;
use crate::arith::Scalar;
use crate::error::{Error, Result};

/// Quotient of polynomials. Kept with a monic denominator, with common
/// monomial factors and exact polynomial divisibility cancelled; equality is
/// decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFn {
    /// Panics if `den` is zero.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let ring = num.ring().clone();
        if num.is_zero() {
            return RationalFn { num, den: MultiPoly::one(&ring) };
        }
        let (mut num, mut den) = (num, den);
        let a = num.monomial_content();
        let b = den.monomial_content();
        let mut g = a.clone();
        for v in 0..ring.nvars() {
            g.exps_mut()[v] = a.exp(v).min(b.exp(v));
        }
        if !g.is_one() {
            num = num.div_monomial(&g);
            den = den.div_monomial(&g);
        }
        if !den.is_constant() {
            if let Some(q) = num.div_exact(&den) {
                num = q;
                den = MultiPoly::one(&ring);
            } else if let Some(q) = den.div_exact(&num) {
                let c = num.leading().unwrap().1.clone();
                num = MultiPoly::constant(&ring, c.clone());
                den = q.scale(&c);
            }
        }
        let lc = den.leading().unwrap().1.clone();
        if !lc.is_one() {
            let inv = lc.inv();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFn { num, den }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let one = MultiPoly::one(p.ring());
        RationalFn { num: p, den: one }
    }

    pub fn zero(ring: &Ring) -> Self {
        RationalFn::from_poly(MultiPoly::zero(ring))
    }

    pub fn one(ring: &Ring) -> Self {
        RationalFn::from_poly(MultiPoly::one(ring))
    }

    pub fn constant(ring: &Ring, c: Scalar) -> Self {
        RationalFn::from_poly(MultiPoly::constant(ring, c))
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_polynomial(&self) -> Option<MultiPoly> {
        let c = self.den.constant_value()?;
        Some(self.num.scale(&c.inv()))
    }

    pub fn scale(&self, c: &Scalar) -> RationalFn {
        if c.is_zero() {
            return RationalFn::zero(self.ring());
        }
        RationalFn { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<RationalFn> {
        if self.is_zero() {
            return Err(Error::DenominatorVanishes("inverse of zero".into()));
        }
        Ok(RationalFn::new(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> RationalFn {
        RationalFn::new(self.num.pow(e), self.den.pow(e))
    }

    /// Apply a ring map to numerator and denominator.
    pub fn substitute(&self, target: &Ring, images: &[MultiPoly]) -> Result<RationalFn> {
        let den = self.den.substitute(target, images);
        if den.is_zero() {
            return Err(Error::DenominatorVanishes(self.den.to_string()));
        }
        Ok(RationalFn::new(self.num.substitute(target, images), den))
    }

    pub fn derivative(&self, var: usize) -> RationalFn {
        let n = &(&self.num.derivative(var) * &self.den) - &(&self.num * &self.den.derivative(var));
        RationalFn::new(n, &self.den * &self.den)
    }

    pub fn eval(&self, point: &[Scalar]) -> Option<Scalar> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(&self.num.eval(point) / &d)
        }
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFn {}

impl<'a> Add<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &'a RationalFn) -> RationalFn {
        if self.den == rhs.den {
            return RationalFn::new(&self.num + &rhs.num, self.den.clone());
        }
        RationalFn::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &'a RationalFn) -> RationalFn {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &'a RationalFn) -> RationalFn {
        RationalFn::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero; use [`RationalFn::inv`] to get an error.
impl<'a> Div<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn div(self, rhs: &'a RationalFn) -> RationalFn {
        RationalFn::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl<'a> Neg for &'a RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_polynomial() {
            return write!(f, "{}", p);
        }
        let simple_num = self.num.len() == 1 && self.num.terms()[0].1.is_integer();
        let simple_den = self.den.len() == 1;
        match (simple_num, simple_den) {
            (true, true) => write!(f, "{}/{}", self.num, self.den),
            (true, false) => write!(f, "{}/({})", self.num, self.den),
            (false, true) => write!(f, "({})/{}", self.num, self.den),
            (false, false) => write!(f, "({})/({})", self.num, self.den),
        }
    }
}
