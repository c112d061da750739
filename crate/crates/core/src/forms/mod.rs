//! Differential forms with rational-function coefficients on a chart.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::group::FiniteMatrixGroup;
use crate::poly::{parse_expr, Expr, MultiPoly, RationalFn, Ring};
use crate::quotient::LocalModel;

mod trace;

pub use trace::{default_denominators, trace_form, verify_direct_factor, DescentOptions, DirectFactorCheck};

/// `Σ_I f_I dy_I` over strictly increasing index tuples `I` of length `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    ring: Ring,
    degree: usize,
    terms: BTreeMap<Vec<usize>, RationalFn>,
}

/// Sorts `idx` in place, returning the permutation sign, or `None` on a repeat.
fn sort_index(idx: &mut [usize]) -> Option<bool> {
    let mut neg = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(neg)
    }
}

fn check_chart(a: &Ring, b: &Ring) -> Result<()> {
    if a != b {
        return Err(Error::ChartMismatch(format!("[{}] vs [{}]", a.names().join(", "), b.names().join(", "))));
    }
    Ok(())
}

impl DiffForm {
    pub fn zero(ring: &Ring, degree: usize) -> DiffForm {
        DiffForm { ring: ring.clone(), degree, terms: BTreeMap::new() }
    }

    /// The 0-form `f`.
    pub fn function(f: RationalFn) -> DiffForm {
        let ring = f.ring().clone();
        DiffForm::from_terms(&ring, 0, vec![(vec![], f)]).expect("0-form")
    }

    pub fn from_poly(f: MultiPoly) -> DiffForm {
        DiffForm::function(RationalFn::from_poly(f))
    }

    /// `dy_i`.
    pub fn differential(ring: &Ring, i: usize) -> DiffForm {
        DiffForm::from_terms(ring, 1, vec![(vec![i], RationalFn::one(ring))]).expect("valid index")
    }

    /// Builds a form from arbitrary index tuples, applying antisymmetry.
    pub fn from_terms(ring: &Ring, degree: usize, terms: Vec<(Vec<usize>, RationalFn)>) -> Result<DiffForm> {
        if degree > ring.nvars() {
            return Err(Error::DimensionMismatch(format!("{}-form on a {}-dimensional chart", degree, ring.nvars())));
        }
        let mut out = DiffForm::zero(ring, degree);
        for (mut idx, c) in terms {
            check_chart(ring, c.ring())?;
            if idx.len() != degree || idx.iter().any(|&i| i >= ring.nvars()) {
                return Err(Error::DimensionMismatch(format!("index {:?} in a {}-form", idx, degree)));
            }
            match sort_index(&mut idx) {
                None => {}
                Some(neg) => out.add_term(idx, if neg { -&c } else { c }),
            }
        }
        Ok(out)
    }

    fn add_term(&mut self, idx: Vec<usize>, c: RationalFn) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.remove(&idx);
        let sum = match entry {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(idx, sum);
        }
    }

    /// Parses an expression in which `dy` is the differential of chart
    /// variable `y`, `*` is the wedge product and `d(...)` the exterior derivative.
    pub fn parse(ring: &Ring, src: &str) -> Result<DiffForm> {
        DiffForm::from_expr(ring, &parse_expr(src)?)
    }

    pub fn from_expr(ring: &Ring, e: &Expr) -> Result<DiffForm> {
        let mixed = || Error::Parse { message: "terms of different degrees".into(), column: 0 };
        Ok(match e {
            Expr::Int(_) => DiffForm::from_poly(MultiPoly::from_expr(ring, e)?),
            Expr::Ident(name) => {
                if ring.index_of(name).is_some() || name == "zeta" {
                    DiffForm::from_poly(MultiPoly::from_expr(ring, e)?)
                } else if let Some(i) = name.strip_prefix('d').and_then(|v| ring.index_of(v)) {
                    DiffForm::differential(ring, i)
                } else {
                    return Err(Error::UnknownVariable(name.clone()));
                }
            }
            Expr::Call(name, args) if name == "d" && args.len() == 1 => DiffForm::from_expr(ring, &args[0])?.exterior_d(),
            Expr::Call(name, _) => {
                return Err(Error::Parse { message: format!("unknown function '{}' in a form", name), column: 0 })
            }
            Expr::Neg(a) => DiffForm::from_expr(ring, a)?.neg(),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let x = DiffForm::from_expr(ring, a)?;
                let mut y = DiffForm::from_expr(ring, b)?;
                if matches!(e, Expr::Sub(..)) {
                    y = y.neg();
                }
                match (x.is_zero(), y.is_zero()) {
                    (true, _) => y,
                    (_, true) => x,
                    _ => x.add(&y).map_err(|_| mixed())?,
                }
            }
            Expr::Mul(a, b) => DiffForm::from_expr(ring, a)?.wedge(&DiffForm::from_expr(ring, b)?)?,
            Expr::Div(a, b) => {
                let den = DiffForm::from_expr(ring, b)?;
                let f = den.as_function().filter(|f| !f.is_zero()).ok_or_else(|| Error::Parse {
                    message: "forms can only be divided by a nonzero function".into(),
                    column: 0,
                })?;
                DiffForm::from_expr(ring, a)?.mul_function(&f.inv()?)?
            }
            Expr::Pow(a, k) => {
                let f = DiffForm::from_expr(ring, a)?.as_function().ok_or_else(|| Error::Parse {
                    message: "only functions can be raised to a power".into(),
                    column: 0,
                })?;
                DiffForm::function(f.pow(*k))
            }
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, RationalFn> {
        &self.terms
    }

    pub fn coefficient(&self, idx: &[usize]) -> RationalFn {
        self.terms.get(idx).cloned().unwrap_or_else(|| RationalFn::zero(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of a 0-form.
    pub fn as_function(&self) -> Option<RationalFn> {
        (self.degree == 0).then(|| self.coefficient(&[]))
    }

    pub fn neg(&self) -> DiffForm {
        DiffForm { ring: self.ring.clone(), degree: self.degree, terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> DiffForm {
        let mut out = DiffForm::zero(&self.ring, self.degree);
        for (k, f) in &self.terms {
            out.add_term(k.clone(), f.scale(c));
        }
        out
    }

    pub fn mul_function(&self, f: &RationalFn) -> Result<DiffForm> {
        check_chart(&self.ring, f.ring())?;
        let mut out = DiffForm::zero(&self.ring, self.degree);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * f);
        }
        Ok(out)
    }

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm> {
        check_chart(&self.ring, &other.ring)?;
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!("adding a {}-form to a {}-form", self.degree, other.degree)));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm> {
        self.add(&other.neg())
    }

    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        check_chart(&self.ring, &other.ring)?;
        let degree = self.degree + other.degree;
        if degree > self.ring.nvars() {
            return Ok(DiffForm::zero(&self.ring, degree));
        }
        let mut terms = Vec::new();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let idx: Vec<usize> = i.iter().chain(j.iter()).copied().collect();
                terms.push((idx, a * b));
            }
        }
        DiffForm::from_terms(&self.ring, degree, terms)
    }

    pub fn exterior_d(&self) -> DiffForm {
        let n = self.ring.nvars();
        if self.degree == n {
            return DiffForm::zero(&self.ring, n);
        }
        let mut terms = Vec::new();
        for (idx, c) in &self.terms {
            for k in 0..n {
                let dc = c.derivative(k);
                if !dc.is_zero() {
                    let full: Vec<usize> = std::iter::once(k).chain(idx.iter().copied()).collect();
                    terms.push((full, dc));
                }
            }
        }
        DiffForm::from_terms(&self.ring, self.degree + 1, terms).expect("degree checked")
    }

    /// Pull-back along `y_j ↦ images[j]`, where the images live in `target`.
    pub fn pullback(&self, target: &Ring, images: &[MultiPoly]) -> Result<DiffForm> {
        if images.len() != self.ring.nvars() {
            return Err(Error::ChartMismatch(format!(
                "map has {} components, chart has {} coordinates",
                images.len(),
                self.ring.nvars()
            )));
        }
        let dtheta: Vec<DiffForm> = images.iter().map(|t| DiffForm::from_poly(t.clone()).exterior_d()).collect();
        let mut out = DiffForm::zero(target, self.degree);
        for (idx, c) in &self.terms {
            let mut piece = DiffForm::function(c.substitute(target, images)?);
            for &j in idx {
                piece = piece.wedge(&dtheta[j])?;
            }
            out = out.add(&piece)?;
        }
        Ok(out)
    }

    /// `ω ↦ ω(g·u)`, for a form on the upstairs chart.
    pub fn act(&self, group: &FiniteMatrixGroup, g: usize) -> Result<DiffForm> {
        let images = group.coordinate_images(&self.ring, g);
        self.pullback(&self.ring.clone(), &images)
    }
}

/// `q̂*`: pull a downstairs form back along the invariant map.
pub fn pullback_form(model: &LocalModel, a: &DiffForm) -> Result<DiffForm> {
    check_chart(model.down(), a.ring())?;
    a.pullback(model.up(), model.invariants())
}

/// Downstairs forms are equal when their difference pulls back to zero.
pub fn forms_equal(model: &LocalModel, a: &DiffForm, b: &DiffForm) -> Result<bool> {
    Ok(pullback_form(model, &a.sub(b)?)?.is_zero())
}

/// `Σ_g g·ω`.
pub fn symmetrize(group: &FiniteMatrixGroup, omega: &DiffForm) -> Result<DiffForm> {
    let mut acc = DiffForm::zero(omega.ring(), omega.degree());
    for g in 0..group.order() {
        acc = acc.add(&omega.act(group, g)?)?;
    }
    Ok(acc)
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            let mut coef = c.to_string();
            let neg = coef.starts_with('-') && !coef[1..].contains([' ', '/']);
            if neg {
                coef.remove(0);
            }
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let simple = !coef.contains(' ') && !coef.contains('/');
            let diffs: Vec<String> = idx.iter().map(|&i| format!("d{}", self.ring.name(i))).collect();
            match (idx.is_empty(), coef == "1", simple) {
                (true, _, _) => write!(f, "{}", coef)?,
                (false, true, _) => write!(f, "{}", diffs.join("*"))?,
                (false, false, true) => write!(f, "{}*{}", coef, diffs.join("*"))?,
                (false, false, false) => write!(f, "({})*{}", coef, diffs.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BaseField;
    use crate::poly::{Budget, PolyRing};
    use crate::quotient::a1;

    fn uv() -> Ring {
        PolyRing::new(BaseField::Rationals, ["u", "v"])
    }

    #[test]
    fn wedge_antisymmetry_and_leibniz() {
        let r = uv();
        let du = DiffForm::parse(&r, "du").unwrap();
        let dv = DiffForm::parse(&r, "dv").unwrap();
        assert_eq!(du.wedge(&dv).unwrap(), dv.wedge(&du).unwrap().neg());
        assert!(du.wedge(&du).unwrap().is_zero());
        assert_eq!(DiffForm::parse(&r, "d(u*v)").unwrap(), DiffForm::parse(&r, "v*du + u*dv").unwrap());
        assert!(du.exterior_d().is_zero());
        let w = DiffForm::parse(&r, "u^2*v/(u + v)*du").unwrap();
        assert!(w.exterior_d().exterior_d().is_zero());
    }

    #[test]
    fn pullbacks_on_a1() {
        let m = a1(&BaseField::Rationals, Budget::default()).unwrap();
        let pb = |s: &str| pullback_form(&m, &DiffForm::parse(m.down(), s).unwrap()).unwrap().to_string();
        assert_eq!(pb("dx"), "2*u*du");
        assert_eq!(pb("dx/x"), "(2/u)*du");
        assert_eq!(pb("dz"), "v*du + u*dv");
        assert_eq!(pb("dx*dy/z"), "4*du*dv");
        let up = DiffForm::parse(m.up(), "du").unwrap();
        assert_eq!(pullback_form(&m, &up).unwrap_err().kind(), "ChartMismatch");
    }

    #[test]
    fn parse_errors() {
        let r = uv();
        assert_eq!(DiffForm::parse(&r, "dw").unwrap_err().kind(), "ChartError");
        assert_eq!(DiffForm::parse(&r, "du + 1").unwrap_err().kind(), "ParseError");
        assert_eq!(DiffForm::parse(&r, "u/du").unwrap_err().kind(), "ParseError");
    }

    #[test]
    fn display_round_trip() {
        let r = uv();
        for s in ["-u*du + (u + 1)*dv", "((1/2)/v)*du*dv", "3", "-dv"] {
            let f = DiffForm::parse(&r, s).unwrap();
            assert_eq!(DiffForm::parse(&r, &f.to_string()).unwrap(), f, "{}", s);
        }
    }

    #[test]
    fn group_action_negates_du_on_a1() {
        let m = a1(&BaseField::Rationals, Budget::default()).unwrap();
        let w = DiffForm::parse(m.up(), "u*dv").unwrap();
        let g = (0..2).find(|&g| g != 0).unwrap();
        assert_eq!(w.act(m.group(), g).unwrap(), w);
        let s = symmetrize(m.group(), &DiffForm::parse(m.up(), "du").unwrap()).unwrap();
        assert!(s.is_zero());
    }
}
