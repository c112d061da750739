//! Finite linear groups acting on polynomial rings.

use std::collections::HashMap;

use crate::arith::{BaseField, Matrix, Scalar, UniPoly};
use crate::error::{Error, Result};
use crate::poly::{Ideal, MultiPoly, Ring};

pub const DEFAULT_GROUP_BOUND: usize = 10_000;

/// A finite subgroup of `GL_n(F)` with its full element list. Element 0 is
/// the identity.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    field: BaseField,
    dim: usize,
    generators: Vec<Matrix>,
    elements: Vec<Matrix>,
}

/// A subgroup, as indices into the parent's element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.elements.binary_search(&idx).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    /// Closure under products and inverses inside `g`.
    pub fn is_closed_in(&self, g: &FiniteMatrixGroup) -> bool {
        self.contains(0)
            && self.elements.iter().all(|&a| {
                self.contains(g.inverse_index(a)) && self.elements.iter().all(|&b| self.contains(g.product_index(a, b)))
            })
    }
}

impl FiniteMatrixGroup {
    pub fn enumerate(field: &BaseField, generators: Vec<Matrix>) -> Result<Self> {
        FiniteMatrixGroup::enumerate_bounded(field, generators, DEFAULT_GROUP_BOUND)
    }

    pub fn enumerate_bounded(field: &BaseField, generators: Vec<Matrix>, bound: usize) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::DimensionMismatch("a group needs at least one generator".into()));
        };
        let n = first.rows();
        for g in &generators {
            if !g.is_square() || g.rows() != n {
                return Err(Error::NotInvertible);
            }
            if let Some(bad) = g.entries().iter().find(|s| !field.contains(s)) {
                return Err(Error::FieldMismatch(format!("matrix entry {} is not in {}", bad, field)));
            }
            if g.det().is_zero() {
                return Err(Error::NotInvertible);
            }
        }
        let mut elements = vec![Matrix::identity(n)];
        let mut seen: HashMap<Matrix, usize> = HashMap::new();
        seen.insert(Matrix::identity(n), 0);
        let mut next = 0;
        while next < elements.len() {
            let a = elements[next].clone();
            next += 1;
            for g in &generators {
                let p = a.mul(g)?;
                if !seen.contains_key(&p) {
                    if elements.len() >= bound {
                        return Err(Error::NotFinite(bound));
                    }
                    seen.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
        }
        let group = FiniteMatrixGroup { field: field.clone(), dim: n, generators, elements };
        group.check_faithful()?;
        Ok(group)
    }

    pub fn trivial(field: &BaseField, n: usize) -> Self {
        FiniteMatrixGroup {
            field: field.clone(),
            dim: n,
            generators: vec![Matrix::identity(n)],
            elements: vec![Matrix::identity(n)],
        }
    }

    /// Block-diagonal product `G₁ × G₂`.
    pub fn product(a: &FiniteMatrixGroup, b: &FiniteMatrixGroup) -> Result<Self> {
        if a.field != b.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", a.field, b.field)));
        }
        let n = a.dim + b.dim;
        let embed = |m: &Matrix, off: usize| {
            let mut out = Matrix::identity(n);
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out.set(off + i, off + j, m.get(i, j).clone());
                }
            }
            out
        };
        let mut gens: Vec<Matrix> = a.generators.iter().map(|g| embed(g, 0)).collect();
        gens.extend(b.generators.iter().map(|g| embed(g, a.dim)));
        FiniteMatrixGroup::enumerate_bounded(&a.field, gens, DEFAULT_GROUP_BOUND.max(a.order() * b.order()))
    }

    fn check_faithful(&self) -> Result<()> {
        // Each element acts through its matrix; a non-identity element fixing
        // every coordinate function would make the action non-faithful.
        let id = Matrix::identity(self.dim);
        for g in &self.elements[1..] {
            if *g == id {
                return Err(Error::NotFaithful);
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    pub fn product_index(&self, a: usize, b: usize) -> usize {
        let p = self.elements[a].mul(&self.elements[b]).expect("square matrices");
        self.index_of(&p).expect("group closed under products")
    }

    pub fn inverse_index(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.product_index(a, b) == 0).expect("inverse present")
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.order()).collect() }
    }

    /// Images `u_i ↦ Σ_j g_ij u_j` of the coordinates under element `g`.
    pub fn coordinate_images(&self, ring: &Ring, g: usize) -> Vec<MultiPoly> {
        linear_images(&self.elements[g], ring)
    }

    /// `f(g·u)`.
    pub fn act(&self, g: usize, f: &MultiPoly) -> MultiPoly {
        let images = self.coordinate_images(f.ring(), g);
        f.substitute(&f.ring().clone(), &images)
    }

    pub fn act_ideal(&self, g: usize, ideal: &Ideal) -> Ideal {
        let images = self.coordinate_images(ideal.ring(), g);
        ideal.substitute(&ideal.ring().clone(), &images)
    }

    /// Sum over the group, without the `1/k` factor.
    pub fn symmetrize(&self, f: &MultiPoly) -> MultiPoly {
        let mut acc = MultiPoly::zero(f.ring());
        for g in 0..self.order() {
            acc = &acc + &self.act(g, f);
        }
        acc
    }

    pub fn reynolds(&self, f: &MultiPoly) -> MultiPoly {
        self.symmetrize(f).scale(&Scalar::from_ratio(1, self.order() as i64))
    }

    pub fn is_invariant(&self, f: &MultiPoly) -> bool {
        self.generators.iter().all(|g| {
            let images = linear_images(g, f.ring());
            f.substitute(&f.ring().clone(), &images) == *f
        })
    }

    /// Dimensions of the invariant spaces in degrees `0..=bound`, from
    /// `(1/k) Σ_g 1/det(I - t g)`.
    pub fn molien(&self, bound: usize) -> Vec<u64> {
        let mut total = vec![Scalar::zero(); bound + 1];
        for g in &self.elements {
            // det(I - t g) is the reversed characteristic polynomial
            let cp = g.charpoly();
            let n = self.dim;
            let rev: Vec<Scalar> = (0..=n).map(|i| cp.coeff(n - i)).collect();
            let series = invert_series(&UniPoly::new(rev), bound);
            for (d, c) in series.into_iter().enumerate() {
                total[d] = &total[d] + &c;
            }
        }
        let k = Scalar::from_int(self.order() as i64);
        total
            .into_iter()
            .map(|c| {
                let v = &c / &k;
                let r = v.as_rational().expect("Molien coefficients are rational");
                assert!(r.is_integer(), "Molien coefficient {} is not integral", r);
                u64::try_from(r.to_integer()).expect("non-negative Molien coefficient")
            })
            .collect()
    }

    /// Elements mapping `V(P)` to itself.
    pub fn setwise_stabilizer(&self, p: &Ideal) -> Result<Subgroup> {
        let mut out = Vec::new();
        for g in 0..self.order() {
            // g·P ⊆ P forces equality for a finite-order g
            if p.contains_ideal(&self.act_ideal(g, p))? {
                out.push(g);
            }
        }
        Ok(Subgroup { elements: out })
    }

    /// Elements fixing `V(P)` pointwise.
    pub fn inertia_group(&self, p: &Ideal) -> Result<Subgroup> {
        let ring = p.ring();
        let mut out = Vec::new();
        for g in 0..self.order() {
            let images = self.coordinate_images(ring, g);
            let mut fixes = true;
            for (i, img) in images.iter().enumerate() {
                if !p.contains(&(img - &MultiPoly::var(ring, i)))? {
                    fixes = false;
                    break;
                }
            }
            if fixes {
                out.push(g);
            }
        }
        Ok(Subgroup { elements: out })
    }
}

pub(crate) fn linear_images(m: &Matrix, ring: &Ring) -> Vec<MultiPoly> {
    (0..m.rows())
        .map(|i| {
            let mut acc = MultiPoly::zero(ring);
            for j in 0..m.cols() {
                let c = m.get(i, j);
                if !c.is_zero() {
                    acc = &acc + &MultiPoly::var(ring, j).scale(c);
                }
            }
            acc
        })
        .collect()
}

/// First `bound + 1` coefficients of `1/p` for `p(0) ≠ 0`.
fn invert_series(p: &UniPoly, bound: usize) -> Vec<Scalar> {
    let c0 = p.coeff(0).inv();
    let mut out: Vec<Scalar> = Vec::with_capacity(bound + 1);
    for d in 0..=bound {
        let mut s = if d == 0 { Scalar::one() } else { Scalar::zero() };
        for i in 1..=d {
            s = &s - &(&p.coeff(i) * &out[d - i]);
        }
        out.push(&s * &c0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;

    fn minus_one() -> FiniteMatrixGroup {
        FiniteMatrixGroup::enumerate(&BaseField::Rationals, vec![Matrix::from_ints(&[&[-1, 0], &[0, -1]])]).unwrap()
    }

    fn mu3() -> FiniteMatrixGroup {
        let f = BaseField::cyclotomic(3);
        let z = f.generator().unwrap();
        let g = Matrix::from_rows(vec![vec![z.clone(), Scalar::zero()], vec![Scalar::zero(), z.pow(2)]]).unwrap();
        FiniteMatrixGroup::enumerate(&f, vec![g]).unwrap()
    }

    #[test]
    fn enumeration_orders() {
        assert_eq!(minus_one().order(), 2);
        let triv = FiniteMatrixGroup::enumerate(&BaseField::Rationals, vec![Matrix::identity(2)]).unwrap();
        assert_eq!(triv.order(), 1);
        assert_eq!(mu3().order(), 3);
        let g = FiniteMatrixGroup::enumerate(&BaseField::Rationals, vec![Matrix::from_ints(&[&[1, 1], &[0, 1]])]);
        assert_eq!(g.unwrap_err(), Error::NotFinite(DEFAULT_GROUP_BOUND));
        let g = FiniteMatrixGroup::enumerate(&BaseField::Rationals, vec![Matrix::from_ints(&[&[1, 1], &[1, 1]])]);
        assert_eq!(g.unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn action_examples() {
        let g = minus_one();
        let r = PolyRing::new(BaseField::Rationals, ["u", "v"]);
        let p = |s: &str| MultiPoly::parse(&r, s).unwrap();
        assert_eq!(g.act(1, &p("u^2")), p("u^2"));
        assert_eq!(g.act(1, &p("u")), p("-u"));
        let h = mu3();
        let r3 = PolyRing::new(BaseField::cyclotomic(3), ["u", "v"]);
        let uv = MultiPoly::parse(&r3, "u*v").unwrap();
        for e in 0..3 {
            assert_eq!(h.act(e, &uv), uv);
        }
    }

    #[test]
    fn reynolds_examples() {
        let g = minus_one();
        let r = PolyRing::new(BaseField::Rationals, ["u", "v"]);
        let p = |s: &str| MultiPoly::parse(&r, s).unwrap();
        assert_eq!(g.reynolds(&p("u^2")), p("u^2"));
        assert!(g.reynolds(&p("u")).is_zero());
        assert_eq!(g.reynolds(&p("u^3 + u*v")), p("u*v"));
    }

    #[test]
    fn molien_examples() {
        assert_eq!(minus_one().molien(4), vec![1, 0, 3, 0, 5]);
        let triv = FiniteMatrixGroup::trivial(&BaseField::Rationals, 1);
        assert_eq!(triv.molien(2), vec![1, 1, 1]);
        assert_eq!(mu3().molien(3), vec![1, 0, 1, 2]);
    }

    #[test]
    fn stabilizers() {
        let g = minus_one();
        let r = PolyRing::new(BaseField::Rationals, ["u", "v"]);
        let id = |gens: &[&str]| Ideal::parse(&r, gens).unwrap();
        let line = id(&["u"]);
        assert_eq!(g.setwise_stabilizer(&line).unwrap().order(), 2);
        assert_eq!(g.inertia_group(&line).unwrap().order(), 1);
        let origin = id(&["u", "v"]);
        assert_eq!(g.setwise_stabilizer(&origin).unwrap().order(), 2);
        assert_eq!(g.inertia_group(&origin).unwrap().order(), 2);
        let shifted = id(&["v - 1"]);
        assert_eq!(g.setwise_stabilizer(&shifted).unwrap().order(), 1);
        assert_eq!(g.inertia_group(&shifted).unwrap().order(), 1);
    }

    #[test]
    fn product_group() {
        let p = FiniteMatrixGroup::product(&minus_one(), &FiniteMatrixGroup::trivial(&BaseField::Rationals, 1)).unwrap();
        assert_eq!((p.order(), p.dim()), (2, 3));
        assert!(p.whole().is_closed_in(&p));
    }
}
