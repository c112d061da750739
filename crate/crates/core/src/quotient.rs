//! Local models `q : Cⁿ → Cⁿ/G` given by invariant embeddings.

use std::sync::Arc;

use crate::arith::{BaseField, Matrix, Scalar};
use crate::error::{Error, Result};
use crate::group::FiniteMatrixGroup;
use crate::poly::{Budget, GroebnerBasis, Ideal, Monomial, MultiPoly, PolyRing, Ring, TermOrder};

/// Default top degree for the Molien generation audit.
pub const DEFAULT_AUDIT_BOUND: usize = 4;

#[derive(Debug)]
pub struct LocalModel {
    name: String,
    group: FiniteMatrixGroup,
    up: Ring,
    down: Ring,
    invariants: Vec<MultiPoly>,
    relations: Ideal,
    graph_ring: Ring,
    graph_gb: GroebnerBasis,
    deficits: Vec<usize>,
}

pub type Model = Arc<LocalModel>;

impl LocalModel {
    /// Build from a group, upstairs variable names, invariants (as strings
    /// over the upstairs variables) and downstairs variable names.
    pub fn build(
        name: &str,
        group: FiniteMatrixGroup,
        up_names: &[String],
        invariants: &[String],
        down_names: &[String],
        budget: Budget,
        audit_bound: usize,
    ) -> Result<LocalModel> {
        let field = group.field().clone();
        let up = PolyRing::with_budget(field, up_names.iter().cloned(), budget);
        let theta = invariants.iter().map(|s| MultiPoly::parse(&up, s)).collect::<Result<Vec<_>>>()?;
        LocalModel::from_polys(name, group, up, theta, down_names, audit_bound)
    }

    pub fn from_polys(
        name: &str,
        group: FiniteMatrixGroup,
        up: Ring,
        theta: Vec<MultiPoly>,
        down_names: &[String],
        audit_bound: usize,
    ) -> Result<LocalModel> {
        let n = up.nvars();
        if group.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "group acts on dimension {} but there are {} upstairs variables",
                group.dim(),
                n
            )));
        }
        if theta.len() != down_names.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} invariants for {} downstairs variables",
                theta.len(),
                down_names.len()
            )));
        }
        let mut all: Vec<&String> = up.names().iter().chain(down_names.iter()).collect();
        all.sort();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DimensionMismatch("variable names must be distinct".into()));
        }
        for t in &theta {
            if !group.is_invariant(t) {
                return Err(Error::NotInvariant(t.to_string()));
            }
        }
        let down = up.derive(down_names.iter().cloned());
        let m = down.nvars();
        let graph_ring = up.derive(up.names().iter().chain(down_names.iter()).cloned());
        let up_embed: Vec<usize> = (0..n).collect();
        let graph_gens: Vec<MultiPoly> = theta
            .iter()
            .enumerate()
            .map(|(j, t)| &MultiPoly::var(&graph_ring, n + j) - &t.map_vars(&graph_ring, &up_embed))
            .collect();
        let graph_gb = GroebnerBasis::compute(&graph_ring, &graph_gens, TermOrder::Block(n))?;
        let back: Vec<usize> = (0..n + m).map(|i| i.saturating_sub(n)).collect();
        let rel_gens: Vec<MultiPoly> = graph_gb
            .polys()
            .into_iter()
            .filter(|p| (0..n).all(|v| !p.uses_var(v)))
            .map(|p| p.map_vars(&down, &back))
            .collect();
        let relations = Ideal::new(&down, rel_gens);
        let dim = relations.dimension()?;
        if dim != n {
            return Err(Error::DimensionMismatch(format!(
                "the invariants cut out a {}-dimensional image, expected {}",
                dim, n
            )));
        }
        let mut model = LocalModel {
            name: name.to_string(),
            group,
            up,
            down,
            invariants: theta,
            relations,
            graph_ring,
            graph_gb,
            deficits: vec![],
        };
        model.deficits = model.generation_audit(audit_bound);
        Ok(model)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    /// Degree of the quotient map, `|G|`.
    pub fn degree(&self) -> usize {
        self.group.order()
    }

    pub fn field(&self) -> &BaseField {
        self.up.field()
    }

    pub fn up(&self) -> &Ring {
        &self.up
    }

    pub fn down(&self) -> &Ring {
        &self.down
    }

    pub fn dim(&self) -> usize {
        self.up.nvars()
    }

    pub fn invariants(&self) -> &[MultiPoly] {
        &self.invariants
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }

    pub fn graph_ring(&self) -> &Ring {
        &self.graph_ring
    }

    /// Degrees where the invariants provably fail to generate the invariant
    /// ring (a GenerationDeficit warning when non-empty).
    pub fn generation_deficits(&self) -> &[usize] {
        &self.deficits
    }

    pub fn warnings(&self) -> Vec<String> {
        if self.deficits.is_empty() {
            vec![]
        } else {
            let d: Vec<String> = self.deficits.iter().map(|d| d.to_string()).collect();
            vec![format!("GenerationDeficit: model {} invariants miss degrees {}", self.name, d.join(", "))]
        }
    }

    /// Pull a downstairs polynomial back along `q`: `y_j ↦ θ_j`.
    pub fn pullback_poly(&self, f: &MultiPoly) -> MultiPoly {
        f.substitute(&self.up, &self.invariants)
    }

    /// The unique representative `p` with `p(θ) = f`, as the normal form of
    /// `f` modulo the graph ideal under the u-eliminating block order.
    pub fn express_in_invariants(&self, f: &MultiPoly) -> Result<MultiPoly> {
        let n = self.dim();
        let embed: Vec<usize> = (0..n).collect();
        let nf = self.graph_gb.reduce(&f.map_vars(&self.graph_ring, &embed))?;
        if (0..n).any(|v| nf.uses_var(v)) {
            return Err(Error::NotInSubalgebra(f.to_string()));
        }
        let back: Vec<usize> = (0..n + self.down.nvars()).map(|i| i.saturating_sub(n)).collect();
        Ok(nf.map_vars(&self.down, &back))
    }

    /// Normal form of a downstairs polynomial modulo the relations, using the
    /// same convention as [`LocalModel::express_in_invariants`].
    pub fn reduce_down(&self, f: &MultiPoly) -> Result<MultiPoly> {
        self.express_in_invariants(&self.pullback_poly(f))
    }

    /// `N(g) = Π_h h·g`, expressed downstairs.
    pub fn norm_polynomial(&self, g: &MultiPoly) -> Result<MultiPoly> {
        let mut prod = MultiPoly::one(&self.up);
        for h in 0..self.group.order() {
            prod = &prod * &self.group.act(h, g);
        }
        self.express_in_invariants(&prod)
    }

    fn generation_audit(&self, bound: usize) -> Vec<usize> {
        if !self.invariants.iter().all(MultiPoly::is_homogeneous) || self.invariants.iter().any(MultiPoly::is_zero) {
            return vec![];
        }
        let molien = self.group.molien(bound);
        let degs: Vec<u32> = self.invariants.iter().map(|t| t.total_degree().unwrap_or(0)).collect();
        let mut out = Vec::new();
        for (d, &expected) in molien.iter().enumerate() {
            let mut products = Vec::new();
            weighted_products(&self.invariants, &degs, 0, d as u32, MultiPoly::one(&self.up), &mut products);
            let rank = span_rank(&products);
            if (rank as u64) < expected {
                out.push(d);
            }
        }
        out
    }
}

fn weighted_products(theta: &[MultiPoly], degs: &[u32], start: usize, left: u32, acc: MultiPoly, out: &mut Vec<MultiPoly>) {
    if left == 0 {
        out.push(acc);
        return;
    }
    for j in start..theta.len() {
        if degs[j] > 0 && degs[j] <= left {
            weighted_products(theta, degs, j, left - degs[j], &acc * &theta[j], out);
        }
    }
}

fn span_rank(polys: &[MultiPoly]) -> usize {
    let mut monos: Vec<Monomial> = polys.iter().flat_map(|p| p.terms().iter().map(|t| t.0.clone())).collect();
    monos.sort();
    monos.dedup();
    if monos.is_empty() {
        return 0;
    }
    let mat = Matrix::from_fn(polys.len(), monos.len(), |i, j| polys[i].coeff(&monos[j]));
    mat.rank()
}

fn var_names(prefix: &str, n: usize) -> Vec<String> {
    if n == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=n).map(|i| format!("{}{}", prefix, i)).collect()
    }
}

/// The cone `C²/{±1}` with invariants `(u², v², uv)`.
pub fn a1(field: &BaseField, budget: Budget) -> Result<LocalModel> {
    let g = FiniteMatrixGroup::enumerate(field, vec![Matrix::from_ints(&[&[-1, 0], &[0, -1]])])?;
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    LocalModel::build("A1", g, &s(&["u", "v"]), &s(&["u^2", "v^2", "u*v"]), &s(&["x", "y", "z"]), budget, DEFAULT_AUDIT_BOUND)
}

/// `C²/μ₃` with `ζ` acting by `diag(ζ, ζ²)`; needs a field containing `ζ₃`.
pub fn a2(field: &BaseField, budget: Budget) -> Result<LocalModel> {
    let n = field.conductor();
    if n % 3 != 0 {
        return Err(Error::FieldMismatch(format!("model A2 needs cube roots of unity, field is {}", field)));
    }
    let zeta = field.generator().expect("cyclotomic field").pow(n / 3);
    let g = Matrix::from_rows(vec![vec![zeta.clone(), Scalar::zero()], vec![Scalar::zero(), zeta.pow(2)]])?;
    let g = FiniteMatrixGroup::enumerate(field, vec![g])?;
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    LocalModel::build("A2", g, &s(&["u", "v"]), &s(&["u^3", "v^3", "u*v"]), &s(&["x", "y", "z"]), budget, DEFAULT_AUDIT_BOUND)
}

/// Identity model on `Cⁿ`: upstairs `t1..tn`, downstairs `w1..wn`.
pub fn trivial(field: &BaseField, n: usize, budget: Budget) -> Result<LocalModel> {
    let g = FiniteMatrixGroup::trivial(field, n);
    let up = var_names("t", n);
    let down = var_names("w", n);
    LocalModel::build(&format!("trivial-{}", n), g, &up, &up, &down, budget, DEFAULT_AUDIT_BOUND)
}

fn rename_collisions(first: &[String], second: &[String], taken: &[String]) -> Vec<String> {
    second
        .iter()
        .map(|n| {
            let mut name = n.clone();
            while first.contains(&name) || taken.contains(&name) {
                name.push_str("_2");
            }
            name
        })
        .collect()
}

/// Block-diagonal product model. Colliding variable names of the second
/// factor get the suffix `_2`.
pub fn product(a: &LocalModel, b: &LocalModel) -> Result<LocalModel> {
    let g = FiniteMatrixGroup::product(a.group(), b.group())?;
    let up_a = a.up.names().to_vec();
    let down_a = a.down.names().to_vec();
    let all_a: Vec<String> = up_a.iter().chain(down_a.iter()).cloned().collect();
    let up_b = rename_collisions(&all_a, b.up.names(), &[]);
    let down_b = rename_collisions(&all_a, b.down.names(), &up_b);
    let up_names: Vec<String> = up_a.iter().chain(up_b.iter()).cloned().collect();
    let down_names: Vec<String> = down_a.iter().chain(down_b.iter()).cloned().collect();
    let up = a.up.derive(up_names);
    let na = a.dim();
    let ea: Vec<usize> = (0..na).collect();
    let eb: Vec<usize> = (0..b.dim()).map(|i| na + i).collect();
    let mut theta: Vec<MultiPoly> = a.invariants.iter().map(|t| t.map_vars(&up, &ea)).collect();
    theta.extend(b.invariants.iter().map(|t| t.map_vars(&up, &eb)));
    let name = format!("product({}, {})", a.name(), b.name());
    LocalModel::from_polys(&name, g, up, theta, &down_names, DEFAULT_AUDIT_BOUND)
}

/// Resolve a catalog name: `A1`, `A2`, `trivial-n`, `product(m1, m2)`.
pub fn catalog(name: &str, field: &BaseField, budget: Budget) -> Result<LocalModel> {
    let name = name.trim();
    if let Some(inner) = name.strip_prefix("product(").and_then(|s| s.strip_suffix(')')) {
        let mut depth = 0;
        let mut split = None;
        for (i, c) in inner.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let Some(i) = split else {
            return Err(Error::Parse { message: format!("product needs two factors: {}", name), column: 0 });
        };
        let a = catalog(&inner[..i], field, budget)?;
        let b = catalog(&inner[i + 1..], field, budget)?;
        return product(&a, &b);
    }
    match name {
        "A1" => a1(field, budget),
        "A2" => a2(field, budget),
        _ => match name.strip_prefix("trivial-").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) if (1..=12).contains(&n) => trivial(field, n, budget),
            _ => Err(Error::Parse { message: format!("unknown catalog model '{}'", name), column: 0 }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> BaseField {
        BaseField::Rationals
    }

    fn rel(m: &LocalModel) -> Vec<String> {
        m.relations().groebner().unwrap().polys().iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn relation_ideals() {
        let m = a1(&q(), Budget::default()).unwrap();
        assert_eq!(rel(&m), vec!["x*y - z^2"]);
        assert_eq!(m.degree(), 2);
        let t = trivial(&q(), 2, Budget::default()).unwrap();
        assert!(t.relations().is_zero());
        let m2 = a2(&BaseField::cyclotomic(3), Budget::default()).unwrap();
        assert_eq!(rel(&m2), vec!["z^3 - x*y"]);
        assert!(m.generation_deficits().is_empty());
        assert!(m2.generation_deficits().is_empty());
    }

    #[test]
    fn express_examples() {
        let m = a1(&q(), Budget::default()).unwrap();
        let p = |s: &str| MultiPoly::parse(m.up(), s).unwrap();
        assert_eq!(m.express_in_invariants(&p("u^2")).unwrap().to_string(), "x");
        assert_eq!(m.express_in_invariants(&p("u^2*v^2")).unwrap().to_string(), "z^2");
        assert_eq!(m.express_in_invariants(&p("u^4 + v^4")).unwrap().to_string(), "x^2 + y^2");
        assert_eq!(m.express_in_invariants(&p("u")).unwrap_err().kind(), "NotInSubalgebra");
    }

    #[test]
    fn norm_examples() {
        let m = a1(&q(), Budget::default()).unwrap();
        let p = |s: &str| MultiPoly::parse(m.up(), s).unwrap();
        assert_eq!(m.norm_polynomial(&p("u")).unwrap().to_string(), "-x");
        assert_eq!(m.norm_polynomial(&p("u*v")).unwrap().to_string(), "z^2");
        assert_eq!(m.norm_polynomial(&p("v - 1")).unwrap().to_string(), "-y + 1");
    }

    #[test]
    fn invariance_is_checked() {
        let g = FiniteMatrixGroup::enumerate(&q(), vec![Matrix::from_ints(&[&[-1, 0], &[0, -1]])]).unwrap();
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let e = LocalModel::build("bad", g, &s(&["u", "v"]), &s(&["u", "v^2"]), &s(&["x", "y"]), Budget::default(), 2);
        assert_eq!(e.unwrap_err(), Error::NotInvariant("u".into()));
    }

    #[test]
    fn deficit_is_reported() {
        let g = FiniteMatrixGroup::enumerate(&q(), vec![Matrix::from_ints(&[&[-1, 0], &[0, -1]])]).unwrap();
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let m = LocalModel::build("thin", g, &s(&["u", "v"]), &s(&["u^2", "v^2"]), &s(&["x", "y"]), Budget::default(), 4).unwrap();
        assert_eq!(m.generation_deficits(), &[2, 4]);
        assert!(m.warnings()[0].starts_with("GenerationDeficit"));
    }

    #[test]
    fn catalog_names() {
        let p = catalog("product(A1, trivial-1)", &q(), Budget::default()).unwrap();
        assert_eq!(p.up().names(), &["u", "v", "t"]);
        assert_eq!(p.down().names(), &["x", "y", "z", "w"]);
        assert_eq!(p.degree(), 2);
        let pp = catalog("product(A1, A1)", &q(), Budget::default()).unwrap();
        assert_eq!(pp.up().names(), &["u", "v", "u_2", "v_2"]);
        assert_eq!(pp.degree(), 4);
        assert!(catalog("A2", &q(), Budget::default()).is_err());
        assert!(catalog("B7", &q(), Budget::default()).is_err());
        let t3 = catalog("trivial-3", &q(), Budget::default()).unwrap();
        assert_eq!(t3.up().names(), &["t1", "t2", "t3"]);
    }
}
