use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use super::groebner::GroebnerBasis;
use super::monomial::{Monomial, TermOrder};
use super::multipoly::MultiPoly;
use super::ring::{same_ring, Ring};
use crate::arith::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Ideal given by generators, with a lazily computed grevlex Gröbner basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<MultiPoly>,
    gb: OnceLock<Arc<GroebnerBasis>>,
}

impl Ideal {
    pub fn new(ring: &Ring, gens: Vec<MultiPoly>) -> Self {
        let gens: Vec<MultiPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        for g in &gens {
            assert!(same_ring(ring, g.ring()), "generator from a different ring");
        }
        Ideal { ring: ring.clone(), gens, gb: OnceLock::new() }
    }

    pub fn zero(ring: &Ring) -> Self {
        Ideal::new(ring, vec![])
    }

    pub fn unit(ring: &Ring) -> Self {
        Ideal::new(ring, vec![MultiPoly::one(ring)])
    }

    /// Parse each generator string.
    pub fn parse(ring: &Ring, gens: &[&str]) -> Result<Self> {
        let g = gens.iter().map(|s| MultiPoly::parse(ring, s)).collect::<Result<Vec<_>>>()?;
        Ok(Ideal::new(ring, g))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.gens
    }

    /// Cached reduced grevlex basis.
    pub fn groebner(&self) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb.clone());
        }
        let gb = Arc::new(GroebnerBasis::compute(&self.ring, &self.gens, TermOrder::Grevlex)?);
        Ok(self.gb.get_or_init(|| gb).clone())
    }

    pub fn groebner_in(&self, ord: TermOrder) -> Result<Arc<GroebnerBasis>> {
        if ord == TermOrder::Grevlex {
            return self.groebner();
        }
        Ok(Arc::new(GroebnerBasis::compute(&self.ring, &self.gens, ord)?))
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.groebner()?.is_unit())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        self.groebner()?.contains(f)
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn normal_form(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.groebner()?.reduce(f)
    }

    pub fn normal_form_in(&self, f: &MultiPoly, ord: TermOrder) -> Result<MultiPoly> {
        self.groebner_in(ord)?.reduce(f)
    }

    /// Krull dimension of the zero set, via maximal independent sets of the
    /// leading-term ideal.
    pub fn dimension(&self) -> Result<usize> {
        let gb = self.groebner()?;
        if gb.is_unit() {
            return Err(Error::UnitIdeal);
        }
        let n = self.ring.nvars();
        let supports: Vec<u64> = gb
            .leading_monomials()
            .iter()
            .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
            .collect();
        Ok(max_independent(n, &supports))
    }

    /// Dimension, with the empty set reported as `None`.
    pub fn dimension_or_empty(&self) -> Result<Option<usize>> {
        match self.dimension() {
            Ok(d) => Ok(Some(d)),
            Err(Error::UnitIdeal) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Standard monomials modulo the grevlex leading ideal, ascending.
    pub fn quotient_basis(&self) -> Result<Vec<Monomial>> {
        let gb = self.groebner()?;
        quotient_basis_of(&gb, self.ring.nvars())
    }

    pub fn quotient_dimension(&self) -> Result<usize> {
        Ok(self.quotient_basis()?.len())
    }

    /// Matrix of multiplication by `f` on the quotient algebra; column `j` is
    /// the image of the `j`-th standard monomial.
    pub fn multiplication_matrix(&self, f: &MultiPoly) -> Result<Matrix> {
        let gb = self.groebner()?;
        let basis = quotient_basis_of(&gb, self.ring.nvars())?;
        let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let n = basis.len();
        let mut mat = Matrix::zeros(n, n);
        let f = gb.reduce(f)?;
        for (j, b) in basis.iter().enumerate() {
            let img = gb.reduce(&f.mul_monomial(b, &Scalar::one()))?;
            for (m, c) in img.terms() {
                mat.set(index[m], j, c.clone());
            }
        }
        Ok(mat)
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    pub fn with(&self, extra: &[MultiPoly]) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(extra.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    /// Product ideal.
    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a * b);
            }
        }
        Ideal::new(&self.ring, g)
    }

    /// Image under a ring homomorphism given by variable images.
    pub fn substitute(&self, target: &Ring, images: &[MultiPoly]) -> Ideal {
        Ideal::new(target, self.gens.iter().map(|g| g.substitute(target, images)).collect())
    }

    pub fn map_vars(&self, target: &Ring, mapping: &[usize]) -> Ideal {
        Ideal::new(target, self.gens.iter().map(|g| g.map_vars(target, mapping)).collect())
    }

    pub fn map_by_name(&self, target: &Ring) -> Ideal {
        Ideal::new(target, self.gens.iter().map(|g| g.map_by_name(target)).collect())
    }

    /// `I ∩ F[keep]`, returned in the ring of the kept variables (original
    /// relative order).
    pub fn eliminate(&self, keep: &[usize]) -> Result<Ideal> {
        let n = self.ring.nvars();
        let keep_set: BTreeSet<usize> = keep.iter().copied().collect();
        let elim: Vec<usize> = (0..n).filter(|i| !keep_set.contains(i)).collect();
        let kept: Vec<usize> = keep_set.iter().copied().collect();
        let sub = self.ring.derive(kept.iter().map(|&i| self.ring.name(i).to_string()));
        if elim.is_empty() {
            return Ok(self.map_vars(&sub, &(0..n).collect::<Vec<_>>()));
        }
        // Eliminated variables go first, then a block order.
        let order: Vec<usize> = elim.iter().chain(kept.iter()).copied().collect();
        let perm_ring = self.ring.derive(order.iter().map(|&i| format!("_{}", i)));
        let mut to_perm = vec![0; n];
        for (pos, &v) in order.iter().enumerate() {
            to_perm[v] = pos;
        }
        let permuted = self.map_vars(&perm_ring, &to_perm);
        let gb = permuted.groebner_in(TermOrder::Block(elim.len()))?;
        let ne = elim.len();
        let back: Vec<usize> = (0..n).map(|p| p.saturating_sub(ne)).collect();
        let gens = gb
            .polys()
            .into_iter()
            .filter(|p| (0..ne).all(|v| !p.uses_var(v)))
            .map(|p| p.map_vars(&sub, &back))
            .collect();
        Ok(Ideal::new(&sub, gens))
    }

    /// Eliminate by variable names.
    pub fn eliminate_names(&self, keep: &[&str]) -> Result<Ideal> {
        let idx = keep
            .iter()
            .map(|n| self.ring.index_of(n).ok_or_else(|| Error::UnknownVariable(n.to_string())))
            .collect::<Result<Vec<_>>>()?;
        self.eliminate(&idx)
    }

    /// `I : f^∞` through an extra variable `t` and the relation `t f - 1`.
    pub fn saturate(&self, f: &MultiPoly) -> Result<Ideal> {
        assert!(!f.is_zero(), "saturation by zero");
        let n = self.ring.nvars();
        let mut names: Vec<String> = self.ring.names().to_vec();
        names.push("_sat".into());
        let ext = self.ring.derive(names);
        let embed: Vec<usize> = (0..n).collect();
        let t = MultiPoly::var(&ext, n);
        let mut gens: Vec<MultiPoly> = self.gens.iter().map(|g| g.map_vars(&ext, &embed)).collect();
        gens.push(&(&t * &f.map_vars(&ext, &embed)) - &MultiPoly::one(&ext));
        let big = Ideal::new(&ext, gens);
        let el = big.eliminate(&embed)?;
        Ok(Ideal::new(&self.ring, el.gens.iter().map(|g| g.map_vars(&self.ring, &embed)).collect()))
    }

    /// Canonical handle: the reduced grevlex basis.
    pub fn canonical(&self) -> Result<CanonIdeal> {
        let gb = self.groebner()?;
        Ok(CanonIdeal::from_basis(&self.ring, gb.polys()))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g)?;
        }
        write!(f, ")")
    }
}

fn max_independent(n: usize, supports: &[u64]) -> usize {
    // Depth-first search over subsets, largest first.
    fn ok(set: u64, supports: &[u64]) -> bool {
        supports.iter().all(|&s| s & !set != 0)
    }
    fn search(i: usize, n: usize, set: u64, size: usize, best: &mut usize, supports: &[u64]) {
        if size + (n - i) <= *best {
            return;
        }
        if i == n {
            *best = size;
            return;
        }
        let with = set | (1 << i);
        if ok(with, supports) {
            search(i + 1, n, with, size + 1, best, supports);
        }
        search(i + 1, n, set, size, best, supports);
    }
    let mut best = 0;
    if ok(0, supports) {
        search(0, n, 0, 0, &mut best, supports);
    }
    best
}

fn quotient_basis_of(gb: &GroebnerBasis, n: usize) -> Result<Vec<Monomial>> {
    if gb.is_unit() {
        return Ok(vec![]);
    }
    let lms = gb.leading_monomials();
    for v in 0..n {
        let pure = lms.iter().any(|m| m.support().all(|i| i == v) && m.exp(v) > 0);
        if !pure {
            return Err(Error::NotZeroDimensional);
        }
    }
    let standard = |m: &Monomial| !lms.iter().any(|l| l.divides(m));
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut stack = vec![Monomial::one(n)];
    seen.insert(Monomial::one(n));
    while let Some(m) = stack.pop() {
        for v in 0..n {
            let mut next = m.clone();
            next.exps_mut()[v] += 1;
            if standard(&next) && seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    let mut out: Vec<Monomial> = seen.into_iter().collect();
    out.sort_by(|a, b| TermOrder::Grevlex.cmp(a, b));
    Ok(out)
}

/// Ideal identified by its reduced grevlex basis; equality, ordering and
/// hashing are by that basis.
#[derive(Clone, Debug)]
pub struct CanonIdeal {
    ring: Ring,
    basis: Vec<MultiPoly>,
}

impl CanonIdeal {
    pub(crate) fn from_basis(ring: &Ring, basis: Vec<MultiPoly>) -> Self {
        CanonIdeal { ring: ring.clone(), basis }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn basis(&self) -> &[MultiPoly] {
        &self.basis
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    /// The ideal generated by the basis, with its Gröbner basis pre-seeded.
    pub fn to_ideal(&self) -> Ideal {
        let ideal = Ideal::new(&self.ring, self.basis.clone());
        let gb = GroebnerBasis::compute(&self.ring, &self.basis, TermOrder::Grevlex);
        if let Ok(gb) = gb {
            let _ = ideal.gb.set(Arc::new(gb));
        }
        ideal
    }
}

impl PartialEq for CanonIdeal {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.basis == other.basis
    }
}

impl Eq for CanonIdeal {}

impl Hash for CanonIdeal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl Ord for CanonIdeal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.basis.len().cmp(&other.basis.len()).then_with(|| self.basis.cmp(&other.basis))
    }
}

impl PartialOrd for CanonIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", g)?;
        }
        write!(f, ")")
    }
}
