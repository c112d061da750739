use rand::Rng;

use super::OrbitClass;
use crate::error::{Error, Result};
use crate::poly::{decompose, Ideal, MultiPoly};
use crate::quotient::LocalModel;

/// Ideal of the image `q(V(P))` in the downstairs coordinates.
pub fn downstairs_ideal(model: &LocalModel, o: &OrbitClass) -> Result<Ideal> {
    image_of_prime(model, &o.representative().to_ideal())
}

fn image_of_prime(model: &LocalModel, p: &Ideal) -> Result<Ideal> {
    let n = model.dim();
    let m = model.down().nvars();
    let gr = model.graph_ring();
    let embed: Vec<usize> = (0..n).collect();
    let mut gens: Vec<MultiPoly> = p.generators().iter().map(|g| g.map_vars(gr, &embed)).collect();
    for (j, t) in model.invariants().iter().enumerate() {
        gens.push(&MultiPoly::var(gr, n + j) - &t.map_vars(gr, &embed));
    }
    let keep: Vec<usize> = (n..n + m).collect();
    Ok(Ideal::new(gr, gens).eliminate(&keep)?.map_by_name(model.down()))
}

/// Find the orbit class whose image is `V(J)` for a prime `J` of the
/// downstairs coordinate ring. Components of `q⁻¹(V(J))` are searched in the
/// pulled-back ideal and its saturations by the coordinates.
pub fn lift_downstairs<R: Rng + ?Sized>(model: &LocalModel, j: &Ideal, rng: &mut R) -> Result<OrbitClass> {
    let target = j.sum(model.relations());
    let Some(dim) = target.dimension_or_empty()? else {
        return Err(Error::InvalidCycle(format!("{} does not meet the model", j)));
    };
    let up = model.up();
    let pulled = Ideal::new(up, target.generators().iter().map(|g| model.pullback_poly(g)).collect());
    let mut candidates = vec![pulled.clone()];
    let mut all = MultiPoly::one(up);
    for v in 0..up.nvars() {
        let x = MultiPoly::var(up, v);
        candidates.push(pulled.saturate(&x)?);
        all = &all * &x;
    }
    candidates.push(pulled.saturate(&all)?);
    for cand in candidates {
        if cand.dimension_or_empty()? != Some(dim) {
            continue;
        }
        let comps = match decompose(&cand, &[], rng) {
            Ok(c) => c,
            Err(Error::UnsupportedShape(_)) => continue,
            Err(e) => return Err(e),
        };
        for comp in comps.into_iter().filter(|c| c.dimension == dim) {
            let p = comp.prime.to_ideal();
            if image_of_prime(model, &p)?.same_as(&target)? {
                return OrbitClass::of(model, &p);
            }
        }
    }
    Err(Error::UnsupportedShape(format!("could not lift {} to an upstairs prime", j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BaseField;
    use crate::poly::Budget;
    use crate::quotient::a1;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lifts_and_views() {
        let m = a1(&BaseField::Rationals, Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = Ideal::parse(m.down(), &["x", "z"]).unwrap();
        let o = lift_downstairs(&m, &x, &mut rng).unwrap();
        assert_eq!(o.representative().to_string(), "(u)");
        let view = downstairs_ideal(&m, &o).unwrap();
        assert_eq!(view.canonical().unwrap().to_string(), "(z, x)");
        let origin = Ideal::parse(m.down(), &["x", "y", "z"]).unwrap();
        let o = lift_downstairs(&m, &origin, &mut rng).unwrap();
        assert_eq!((o.representative().to_string().as_str(), o.inertia_order()), ("(v, u)", 2));
        // the line x = y = z lifts to u = v
        let diag = Ideal::parse(m.down(), &["x - y", "x - z"]).unwrap();
        let o = lift_downstairs(&m, &diag, &mut rng).unwrap();
        assert_eq!(o.orbit_size(), 1);
        assert_eq!(downstairs_ideal(&m, &o).unwrap().canonical().unwrap(), diag.sum(m.relations()).canonical().unwrap());
    }
}
