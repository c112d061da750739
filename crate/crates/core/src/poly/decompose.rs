use rand::Rng;

use super::ideal::{CanonIdeal, Ideal};
use super::mfactor::factor;
use super::monomial::{Monomial, TermOrder};
use super::multipoly::MultiPoly;
use super::zerodim::point_clusters;
use crate::error::{Error, Result};

/// An irreducible component (over the base field) of `V(J)` with the length
/// of `J` at its generic point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub prime: CanonIdeal,
    pub dimension: usize,
    pub multiplicity: u64,
    /// Number of geometric components in the Galois orbit.
    pub residue_degree: usize,
}

/// Find `c*x + g` in `polys` with `g` free of `x`; returns `(x, -g/c)`.
fn find_graph_element(polys: &[MultiPoly], live: &[bool]) -> Option<(usize, MultiPoly)> {
    for p in polys {
        for (v, &alive) in live.iter().enumerate() {
            if !alive || !p.uses_var(v) {
                continue;
            }
            let n = p.ring().nvars();
            let lin = Monomial::var(n, v, 1);
            let only_linear = p.terms().iter().all(|(m, _)| m.exp(v) == 0 || *m == lin);
            if only_linear {
                let c = p.coeff(&lin);
                let rest = &p.clone() - &MultiPoly::monomial(p.ring(), lin, c.clone());
                return Some((v, rest.scale(&-c.inv())));
            }
        }
    }
    None
}

/// Decompose `V(J)` into components with multiplicities, for the shapes the
/// engine can certify: after eliminating variables that `J` expresses as
/// polynomials in the others, the remaining equations must cut a
/// zero-dimensional set in the variables they involve. Anything else is
/// `UnsupportedShape`.
pub fn decompose<R: Rng + ?Sized>(j: &Ideal, known: &[CanonIdeal], rng: &mut R) -> Result<Vec<Component>> {
    let ring = j.ring().clone();
    let n = ring.nvars();
    let gb = j.groebner()?;
    if gb.is_unit() {
        return Ok(vec![]);
    }
    let canon = j.canonical()?;
    let dim = j.dimension()?;
    if known.contains(&canon) {
        return Ok(vec![Component { prime: canon, dimension: dim, multiplicity: 1, residue_degree: 1 }]);
    }
    if dim == 0 {
        return Ok(point_clusters(j, rng)?
            .into_iter()
            .map(|c| Component { prime: c.ideal, dimension: 0, multiplicity: c.multiplicity, residue_degree: c.residue_degree })
            .collect());
    }

    let mut live = vec![true; n];
    let mut graph: Vec<MultiPoly> = Vec::new();
    let mut current: Vec<MultiPoly> = gb.polys();
    loop {
        let cur_ideal = Ideal::new(&ring, current.clone());
        let cur_gb = cur_ideal.groebner()?;
        if cur_gb.is_unit() {
            return Ok(vec![]);
        }
        current = cur_gb.polys();
        let mut found = find_graph_element(&current, &live);
        if found.is_none() {
            for v in (0..n).filter(|&v| live[v] && current.iter().any(|p| p.uses_var(v))) {
                let others: Vec<usize> = (0..n).filter(|&w| w != v).collect();
                let lex_first = block_basis_with_first(&cur_ideal, v, &others)?;
                if let Some(hit) = find_graph_element(&lex_first, &live).filter(|(w, _)| *w == v) {
                    found = Some(hit);
                    break;
                }
            }
        }
        let Some((v, image)) = found else { break };
        live[v] = false;
        graph.push(&MultiPoly::var(&ring, v) - &image);
        current = current.iter().map(|p| p.substitute_var(v, &image)).filter(|p| !p.is_zero()).collect();
    }

    let mut used = vec![false; n];
    for p in &current {
        for (i, u) in p.uses().into_iter().enumerate() {
            used[i] |= u;
        }
    }
    let z: Vec<usize> = (0..n).filter(|&i| used[i]).collect();
    let free = live.iter().filter(|&&l| l).count() - z.len();
    if current.is_empty() {
        let prime = Ideal::new(&ring, graph).canonical()?;
        return Ok(vec![Component { prime, dimension: free, multiplicity: 1, residue_degree: 1 }]);
    }
    let sub = ring.derive(z.iter().map(|&i| ring.name(i).to_string()));
    let mut to_sub = vec![0; n];
    for (k, &i) in z.iter().enumerate() {
        to_sub[i] = k;
    }
    let residual = Ideal::new(&sub, current.iter().map(|p| p.map_vars(&sub, &to_sub)).collect());
    if residual.dimension()? != 0 {
        let unsupported = || {
            Error::UnsupportedShape(format!("components of {} are not graphs over a finite set", Ideal::new(&ring, gb.polys())))
        };
        let basis = residual.groebner()?.polys();
        let [g] = basis.as_slice() else { return Err(unsupported()) };
        let mut out = Vec::new();
        for (h, e) in factor(g, rng).map_err(|_| unsupported())? {
            let mut gens = graph.clone();
            gens.push(h.map_vars(&ring, &z));
            out.push(Component {
                prime: Ideal::new(&ring, gens).canonical()?,
                dimension: free + z.len() - 1,
                multiplicity: e as u64,
                residue_degree: 1,
            });
        }
        out.sort();
        return Ok(out);
    }
    let clusters = point_clusters(&residual, rng)?;
    let mut out = Vec::with_capacity(clusters.len());
    for c in clusters {
        let mut gens = graph.clone();
        gens.extend(c.ideal.basis().iter().map(|p| p.map_vars(&ring, &z)));
        out.push(Component {
            prime: Ideal::new(&ring, gens).canonical()?,
            dimension: free,
            multiplicity: c.multiplicity,
            residue_degree: c.residue_degree,
        });
    }
    out.sort();
    Ok(out)
}

/// Gröbner basis under an order eliminating `v` first, mapped back to the
/// original ring.
fn block_basis_with_first(ideal: &Ideal, v: usize, others: &[usize]) -> Result<Vec<MultiPoly>> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let order: Vec<usize> = std::iter::once(v).chain(others.iter().copied()).collect();
    let perm_ring = ring.derive(order.iter().map(|&i| ring.name(i).to_string()));
    let mut to_perm = vec![0; n];
    for (pos, &w) in order.iter().enumerate() {
        to_perm[w] = pos;
    }
    let permuted = ideal.map_vars(&perm_ring, &to_perm);
    let gb = permuted.groebner_in(TermOrder::Block(1))?;
    Ok(gb.polys().into_iter().map(|p| p.map_vars(ring, &order)).collect())
}

/// Total length weighted by residue degree, for zero-dimensional results.
pub fn total_degree(components: &[Component]) -> u64 {
    components.iter().map(|c| c.multiplicity * c.residue_degree as u64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BaseField;
    use crate::poly::PolyRing;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn dec(names: &[&str], gens: &[&str]) -> Result<Vec<(String, usize, u64)>> {
        let r = PolyRing::new(BaseField::Rationals, names.iter().copied());
        let j = Ideal::parse(&r, gens).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        Ok(decompose(&j, &[], &mut rng)?
            .into_iter()
            .map(|c| (c.prime.to_string(), c.dimension, c.multiplicity))
            .collect())
    }

    #[test]
    fn double_line() {
        // t = 0 and u^2 = 0 in 3-space: the v-axis with multiplicity 2
        assert_eq!(dec(&["u", "v", "t"], &["u^2", "t"]).unwrap(), vec![("(t, u)".into(), 1, 2)]);
    }

    #[test]
    fn two_lines_through_graph() {
        let d = dec(&["x", "y", "z"], &["z - x*y", "x^2 - 1"]).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|c| c.1 == 1 && c.2 == 1));
    }

    #[test]
    fn free_plane() {
        assert_eq!(dec(&["x", "y", "z"], &["z - x^2 - y^2"]).unwrap(), vec![("(x^2 + y^2 - z)".into(), 2, 1)]);
    }

    #[test]
    fn hypersurfaces() {
        let d = dec(&["x", "y", "z"], &["x^2*y"]).unwrap();
        assert_eq!(d, vec![("(y)".into(), 2, 1), ("(x)".into(), 2, 2)]);
        let d = dec(&["x", "y", "z"], &["x*y - 2", "z - x"]).unwrap();
        assert_eq!(d, vec![("(x - z, y*z - 2)".into(), 1, 1)]);
    }

    #[test]
    fn unsupported_shape() {
        let e = dec(&["x", "y", "z"], &["x^2 - y^2 - z^2*x"]).map(|_| ()).err();
        assert!(e.is_none());
        let d = dec(&["x", "y", "z"], &["(x + y + z)*(x - y + z^2)"]).unwrap();
        assert_eq!(d.len(), 2);
        let e = dec(&["x", "y", "z"], &["x*y", "x*z"]).unwrap_err();
        assert_eq!(e.kind(), "UnsupportedShape");
    }
}
