use super::monomial::{Monomial, TermOrder};
use super::multipoly::{normalize_terms, sub_mul_terms, MultiPoly, Term};
use super::ring::{Budget, Ring};
use crate::arith::Scalar;
use crate::error::{Error, Result};

/// Reduced Gröbner basis under a fixed order, sorted by ascending leading
/// monomial. Elements are monic.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    order: TermOrder,
    polys: Vec<Vec<Term>>,
}

fn make_monic(mut p: Vec<Term>) -> Vec<Term> {
    let lc = p[0].1.clone();
    if !lc.is_one() {
        let inv = lc.inv();
        for t in p.iter_mut() {
            t.1 = &t.1 * &inv;
        }
    }
    p
}

fn too_big(n: usize, budget: &Budget) -> Result<()> {
    if n > budget.max_terms {
        Err(Error::EffortExceeded(format!("polynomial with {} terms exceeds the term budget {}", n, budget.max_terms)))
    } else {
        Ok(())
    }
}

/// Full reduction of `p` by the basis elements listed in `idx`.
fn reduce_terms(
    mut p: Vec<Term>,
    basis: &[Vec<Term>],
    idx: &[usize],
    ord: TermOrder,
    budget: &Budget,
) -> Result<Vec<Term>> {
    let mut rem = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let lm = &p[start].0;
        match idx.iter().find(|&&g| basis[g][0].0.divides(lm)) {
            Some(&g) => {
                let q = lm.div(&basis[g][0].0);
                let c = p[start].1.clone();
                p = sub_mul_terms(&p[start + 1..], &c, &q, &basis[g][1..], ord);
                start = 0;
                too_big(p.len() + rem.len(), budget)?;
            }
            None => {
                rem.push(p[start].clone());
                start += 1;
            }
        }
    }
    Ok(rem)
}

fn spoly(f: &[Term], g: &[Term], ord: TermOrder) -> Vec<Term> {
    let lcm = f[0].0.lcm(&g[0].0);
    let mf = lcm.div(&f[0].0);
    let mg = lcm.div(&g[0].0);
    let ftail: Vec<Term> = f[1..].iter().map(|(m, c)| (m.mul(&mf), c.clone())).collect();
    sub_mul_terms(&ftail, &Scalar::one(), &mg, &g[1..], ord)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct Builder {
    ord: TermOrder,
    budget: Budget,
    basis: Vec<Vec<Term>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl Builder {
    /// Gebauer–Möller installation of a new monic, fully reduced element.
    fn update(&mut self, h_terms: Vec<Term>) -> Result<()> {
        let h = self.basis.len();
        let lh = h_terms[0].0.clone();
        self.basis.push(h_terms);
        let cands: Vec<(usize, Monomial)> =
            self.active.iter().map(|&g| (g, lh.lcm(&self.basis[g][0].0))).collect();
        let mut kept = vec![false; cands.len()];
        for (k, (g, l)) in cands.iter().enumerate() {
            if lh.coprime(&self.basis[*g][0].0) {
                kept[k] = true;
                continue;
            }
            let dominated = cands
                .iter()
                .enumerate()
                .any(|(k2, (_, l2))| k2 != k && (k2 > k || kept[k2]) && l2.divides(l));
            kept[k] = !dominated;
        }
        let basis = &self.basis;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm)
                && lh.lcm(&basis[p.i][0].0) != p.lcm
                && lh.lcm(&basis[p.j][0].0) != p.lcm)
        });
        for (k, (g, l)) in cands.into_iter().enumerate() {
            if kept[k] && !lh.coprime(&self.basis[g][0].0) {
                self.pairs.push(Pair { i: g, j: h, lcm: l });
            }
        }
        if self.pairs.len() > self.budget.max_pairs {
            return Err(Error::EffortExceeded(format!(
                "pair queue length {} exceeds the pair budget {}",
                self.pairs.len(),
                self.budget.max_pairs
            )));
        }
        let basis = &self.basis;
        self.active.retain(|&g| !lh.divides(&basis[g][0].0));
        self.active.push(h);
        Ok(())
    }

    /// Returns `true` when a constant appeared (unit ideal).
    fn insert(&mut self, p: Vec<Term>) -> Result<bool> {
        let r = reduce_terms(p, &self.basis, &self.active, self.ord, &self.budget)?;
        if r.is_empty() {
            return Ok(false);
        }
        if r[0].0.is_one() {
            return Ok(true);
        }
        self.update(make_monic(r))?;
        Ok(false)
    }
}

fn buchberger(mut gens: Vec<Vec<Term>>, ord: TermOrder, budget: Budget) -> Result<Vec<Vec<Term>>> {
    gens.retain(|g| !g.is_empty());
    if gens.is_empty() {
        return Ok(vec![]);
    }
    let nvars = gens[0][0].0.nvars();
    let unit = || vec![vec![(Monomial::one(nvars), Scalar::one())]];
    gens.sort_by(|a, b| ord.cmp(&a[0].0, &b[0].0).then_with(|| a.len().cmp(&b.len())));
    let mut b = Builder { ord, budget, basis: vec![], active: vec![], pairs: vec![] };
    for g in gens {
        if b.insert(g)? {
            return Ok(unit());
        }
    }
    let mut processed = 0usize;
    while !b.pairs.is_empty() {
        let k = (0..b.pairs.len())
            .min_by(|&x, &y| {
                let (p, q) = (&b.pairs[x], &b.pairs[y]);
                ord.cmp(&p.lcm, &q.lcm).then_with(|| (p.j, p.i).cmp(&(q.j, q.i)))
            })
            .unwrap();
        let pair = b.pairs.swap_remove(k);
        processed += 1;
        if processed > budget.max_pairs {
            return Err(Error::EffortExceeded(format!("more than {} critical pairs processed", budget.max_pairs)));
        }
        let s = spoly(&b.basis[pair.i], &b.basis[pair.j], ord);
        if b.insert(s)? {
            return Ok(unit());
        }
    }
    let mut result: Vec<Vec<Term>> = b.active.iter().map(|&i| b.basis[i].clone()).collect();
    result.sort_by(|x, y| ord.cmp(&x[0].0, &y[0].0));
    for k in 0..result.len() {
        let others: Vec<usize> = (0..result.len()).filter(|&i| i != k).collect();
        let p = std::mem::take(&mut result[k]);
        let lead = p[0].clone();
        let tail = reduce_terms(p[1..].to_vec(), &result, &others, ord, &budget)?;
        let mut full = vec![lead];
        full.extend(tail);
        result[k] = full;
    }
    Ok(result)
}

impl GroebnerBasis {
    pub fn compute(ring: &Ring, gens: &[MultiPoly], order: TermOrder) -> Result<Self> {
        let input: Vec<Vec<Term>> =
            gens.iter().map(|g| normalize_terms(g.terms().to_vec(), order)).collect();
        let polys = buchberger(input, order, ring.budget())?;
        Ok(GroebnerBasis { ring: ring.clone(), order, polys })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// True when the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0][0].0.is_one()
    }

    pub fn polys(&self) -> Vec<MultiPoly> {
        self.polys.iter().map(|p| MultiPoly::from_sorted(&self.ring, p.clone(), self.order)).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p[0].0.clone()).collect()
    }

    /// Remainder of `f` on division by the basis.
    pub fn reduce(&self, f: &MultiPoly) -> Result<MultiPoly> {
        let terms = normalize_terms(f.terms().to_vec(), self.order);
        let idx: Vec<usize> = (0..self.polys.len()).collect();
        let r = reduce_terms(terms, &self.polys, &idx, self.order, &self.ring.budget())?;
        Ok(MultiPoly::from_sorted(&self.ring, r, self.order))
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }
}

impl PartialEq for GroebnerBasis {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.polys == other.polys
    }
}
