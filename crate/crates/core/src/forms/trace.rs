use std::collections::BTreeMap;

use super::{check_chart, pullback_form, symmetrize, DiffForm};
use crate::arith::{LinearSolution, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MultiPoly, RationalFn};
use crate::quotient::LocalModel;

/// Bounds for the descent ansatz used by [`trace_form`].
#[derive(Clone, Debug)]
pub struct DescentOptions {
    /// Maximal total degree of ansatz numerators.
    pub degree_bound: usize,
    /// Downstairs denominators tried in addition to the defaults.
    pub extra_denominators: Vec<MultiPoly>,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions { degree_bound: 4, extra_denominators: Vec::new() }
    }
}

/// `1` together with the products of the (monic) norms of the upstairs
/// coordinates, expressed downstairs.
pub fn default_denominators(model: &LocalModel) -> Result<Vec<MultiPoly>> {
    let mut norms: Vec<MultiPoly> = Vec::new();
    for i in 0..model.dim() {
        let n = model.norm_polynomial(&MultiPoly::var(model.up(), i))?.monic();
        if !n.is_constant() && !norms.contains(&n) {
            norms.push(n);
        }
    }
    let mut out = vec![MultiPoly::one(model.down())];
    if norms.len() <= 6 {
        for mask in 1u32..(1 << norms.len()) {
            let mut p = MultiPoly::one(model.down());
            for (i, n) in norms.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    p = &p * n;
                }
            }
            out.push(p);
        }
    } else {
        out.extend(norms);
    }
    Ok(out)
}

/// `Trace_q(ω)`: the sum over the group, descended to a downstairs form.
/// No `1/k` factor is applied.
pub fn trace_form(model: &LocalModel, omega: &DiffForm, opts: &DescentOptions) -> Result<DiffForm> {
    check_chart(model.up(), omega.ring())?;
    let sym = symmetrize(model.group(), omega)?;
    if sym.is_zero() {
        return Ok(DiffForm::zero(model.down(), sym.degree()));
    }
    if let Some(p) = sym.as_function().and_then(|f| f.as_polynomial()) {
        return Ok(DiffForm::from_poly(model.express_in_invariants(&p)?));
    }
    let alpha = descend(model, &sym, opts)?;
    if pullback_form(model, &alpha)? != sym {
        return Err(Error::AnsatzExhausted(format!("descended form {} fails the pull-back check", alpha)));
    }
    Ok(alpha)
}

fn monomials_of_degree(n: usize, d: usize) -> Vec<Monomial> {
    fn rec(n: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if cur.len() == n - 1 {
            cur.push(left as u16);
            out.push(Monomial::from_exponents(cur));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u16);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

fn increasing_tuples(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, p: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, p, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, p, 0, &mut Vec::new(), &mut out);
    out
}

struct Column {
    index: Vec<usize>,
    den: usize,
    mono: Monomial,
    /// Cleared upstairs coefficients of the pulled-back basis form.
    parts: Vec<(Vec<usize>, MultiPoly)>,
}

/// Solves `q̂*(α) = ω` for `α` by linear algebra over a bounded ansatz.
fn descend(model: &LocalModel, omega: &DiffForm, opts: &DescentOptions) -> Result<DiffForm> {
    let down = model.down();
    let up = model.up();
    let p = omega.degree();
    let mut dens = default_denominators(model)?;
    for e in &opts.extra_denominators {
        check_chart(down, e.ring())?;
        if !e.is_zero() && !dens.contains(e) {
            dens.push(e.clone());
        }
    }
    let pulled_dens: Vec<MultiPoly> = dens.iter().map(|d| model.pullback_poly(d)).collect();
    if let Some(i) = pulled_dens.iter().position(MultiPoly::is_zero) {
        return Err(Error::DenominatorVanishes(dens[i].to_string()));
    }

    // common denominator of everything in sight
    let mut clear = pulled_dens
        .iter()
        .find(|c| pulled_dens.iter().all(|d| c.div_exact(d).is_some()))
        .cloned()
        .unwrap_or_else(|| pulled_dens.iter().fold(MultiPoly::one(up), |a, b| &a * b));
    for c in omega.terms().values() {
        if clear.div_exact(c.denominator()).is_none() {
            clear = &clear * c.denominator();
        }
    }
    let rhs: BTreeMap<Vec<usize>, MultiPoly> = omega
        .terms()
        .iter()
        .map(|(j, c)| (j.clone(), c.numerator() * &clear.div_exact(c.denominator()).expect("cleared")))
        .collect();
    let cofactors: Vec<MultiPoly> = pulled_dens.iter().map(|d| clear.div_exact(d).expect("cleared")).collect();

    let indices = increasing_tuples(down.nvars(), p);
    let basis: Vec<DiffForm> = indices
        .iter()
        .map(|i| pullback_form(model, &DiffForm::from_terms(down, p, vec![(i.clone(), RationalFn::one(down))]).expect("valid")))
        .collect::<Result<_>>()?;

    let mut columns: Vec<Column> = Vec::new();
    for d in 0..=opts.degree_bound {
        for mono in monomials_of_degree(down.nvars(), d) {
            let pm = model.pullback_poly(&MultiPoly::monomial(down, mono.clone(), Scalar::one()));
            for (ii, idx) in indices.iter().enumerate() {
                for (di, cof) in cofactors.iter().enumerate() {
                    let scale = &pm * cof;
                    let parts = basis[ii]
                        .terms()
                        .iter()
                        .map(|(j, c)| (j.clone(), &c.as_polynomial().expect("polynomial pull-back") * &scale))
                        .collect();
                    columns.push(Column { index: idx.clone(), den: di, mono: mono.clone(), parts });
                }
            }
        }
        if let Some(alpha) = solve_ansatz(model, p, &dens, &columns, &rhs)? {
            return Ok(alpha);
        }
    }
    Err(Error::AnsatzExhausted(format!(
        "no {}-form with numerators of degree <= {} over denominators [{}] pulls back to {}",
        p,
        opts.degree_bound,
        dens.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "),
        omega
    )))
}

fn solve_ansatz(
    model: &LocalModel,
    p: usize,
    dens: &[MultiPoly],
    columns: &[Column],
    rhs: &BTreeMap<Vec<usize>, MultiPoly>,
) -> Result<Option<DiffForm>> {
    let mut rows: BTreeMap<(Vec<usize>, Monomial), usize> = BTreeMap::new();
    let key = |j: &Vec<usize>, m: &Monomial, rows: &mut BTreeMap<_, _>| {
        let n = rows.len();
        *rows.entry((j.clone(), m.clone())).or_insert(n)
    };
    let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
    for (k, col) in columns.iter().enumerate() {
        for (j, poly) in &col.parts {
            for (m, c) in poly.terms() {
                entries.push((key(j, m, &mut rows), k, c.clone()));
            }
        }
    }
    let mut b_entries = Vec::new();
    for (j, poly) in rhs {
        for (m, c) in poly.terms() {
            b_entries.push((key(j, m, &mut rows), c.clone()));
        }
    }
    let mut a = Matrix::zeros(rows.len(), columns.len());
    for (r, k, c) in entries {
        let v = a.get(r, k) + &c;
        a.set(r, k, v);
    }
    let mut b = vec![Scalar::zero(); rows.len()];
    for (r, c) in b_entries {
        b[r] = &b[r] + &c;
    }
    match a.solve(&b)? {
        LinearSolution::Inconsistent { .. } => Ok(None),
        LinearSolution::Consistent { particular, .. } => {
            let down = model.down();
            let mut terms = Vec::new();
            for (col, c) in columns.iter().zip(particular) {
                if c.is_zero() {
                    continue;
                }
                let num = MultiPoly::monomial(down, col.mono.clone(), c);
                terms.push((col.index.clone(), RationalFn::new(num, dens[col.den].clone())));
            }
            Ok(Some(DiffForm::from_terms(down, p, terms)?))
        }
    }
}

/// Outcome of checking `Trace(q̂*(α)) = k·α` for one sample.
#[derive(Clone, Debug)]
pub struct DirectFactorCheck {
    pub alpha: DiffForm,
    pub trace: DiffForm,
    pub passed: bool,
}

pub fn verify_direct_factor(model: &LocalModel, samples: &[DiffForm], opts: &DescentOptions) -> Result<Vec<DirectFactorCheck>> {
    let k = Scalar::from_int(model.degree() as i64);
    samples
        .iter()
        .map(|alpha| {
            let trace = trace_form(model, &pullback_form(model, alpha)?, opts)?;
            let passed = super::forms_equal(model, &trace, &alpha.scale(&k))?;
            Ok(DirectFactorCheck { alpha: alpha.clone(), trace, passed })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BaseField;
    use crate::forms::forms_equal;
    use crate::poly::Budget;
    use crate::quotient::{a1, a2};

    fn down(m: &LocalModel, s: &str) -> DiffForm {
        DiffForm::parse(m.down(), s).unwrap()
    }

    #[test]
    fn traces_on_a1() {
        let m = a1(&BaseField::Rationals, Budget::default()).unwrap();
        let opts = DescentOptions::default();
        let tr = |s: &str| trace_form(&m, &DiffForm::parse(m.up(), s).unwrap(), &opts).unwrap();
        assert!(forms_equal(&m, &tr("2*u*du"), &down(&m, "2*dx")).unwrap());
        assert!(forms_equal(&m, &tr("du*dv"), &down(&m, "dx*dy/(2*z)")).unwrap());
        assert!(forms_equal(&m, &tr("u*dv + v*du"), &down(&m, "2*dz")).unwrap());
        assert!(tr("du").is_zero());
        assert_eq!(tr("u^2 + u*v").to_string(), "2*x + 2*z");
    }

    #[test]
    fn direct_factor_samples() {
        let m = a1(&BaseField::Rationals, Budget::default()).unwrap();
        let samples: Vec<DiffForm> = ["dx", "dx/x", "dy/y", "dx*dy/z", "z*dx/x + dy"].iter().map(|s| down(&m, s)).collect();
        for c in verify_direct_factor(&m, &samples, &DescentOptions::default()).unwrap() {
            assert!(c.passed, "{}", c.alpha);
        }
    }

    #[test]
    fn direct_factor_on_a2() {
        let f = BaseField::cyclotomic(3);
        let m = a2(&f, Budget::default()).unwrap();
        let samples: Vec<DiffForm> = ["dx", "dz/z", "dx*dy/(x*y)"].iter().map(|s| down(&m, s)).collect();
        for c in verify_direct_factor(&m, &samples, &DescentOptions::default()).unwrap() {
            assert!(c.passed, "{}", c.alpha);
        }
    }

    #[test]
    fn ansatz_bound_is_loud() {
        let m = a1(&BaseField::Rationals, Budget::default()).unwrap();
        let opts = DescentOptions { degree_bound: 0, extra_denominators: vec![] };
        let w = DiffForm::parse(m.up(), "u^4*du*dv").unwrap();
        assert_eq!(trace_form(&m, &w, &opts).unwrap_err().kind(), "AnsatzExhausted");
        assert!(trace_form(&m, &w, &DescentOptions::default()).is_ok());
    }
}
