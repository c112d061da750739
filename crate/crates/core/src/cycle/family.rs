use num_rational::BigRational;
use rand::Rng;

use super::{check_model, f_product, intersect_model, pullback, pushforward, DownstairsCycle, ModelMap, UpstairsCycle};
use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::group::linear_images;
use crate::poly::{decompose, CanonIdeal, Ideal, MultiPoly, Ring};
use crate::quotient::Model;

/// One prime of a family, given by generators in `F[u, s]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyComponent {
    pub gens: Vec<MultiPoly>,
    pub coeff: BigRational,
}

/// A one-parameter family of upstairs cycles, descended to the quotient
/// at each rational value of the parameter.
#[derive(Clone, Debug)]
pub struct CycleFamily {
    model: Model,
    param: String,
    ring: Ring,
    components: Vec<FamilyComponent>,
    generic_dim: Option<usize>,
}

impl CycleFamily {
    /// Ring of the family: the upstairs coordinates followed by the parameter.
    pub fn family_ring(model: &Model, param: &str) -> Result<Ring> {
        if model.up().index_of(param).is_some() {
            return Err(Error::InvalidCycle(format!("parameter {} clashes with a coordinate", param)));
        }
        let names: Vec<String> = model.up().names().iter().cloned().chain([param.to_string()]).collect();
        Ok(model.up().derive(names))
    }

    pub fn new(model: &Model, param: &str, components: Vec<FamilyComponent>) -> Result<CycleFamily> {
        let ring = CycleFamily::family_ring(model, param)?;
        let mut generic_dim = None;
        for c in &components {
            if c.gens.iter().any(|g| g.ring().names() != ring.names()) {
                return Err(Error::InvalidCycle("family generators live in the wrong ring".into()));
            }
            let d = Ideal::new(&ring, c.gens.clone()).dimension()?;
            let d = d.checked_sub(1).ok_or_else(|| Error::InvalidCycle("component does not dominate the parameter line".into()))?;
            match generic_dim {
                None => generic_dim = Some(d),
                Some(e) if e != d => {
                    return Err(Error::DimensionMismatch(format!("family components of dimensions {} and {}", e, d)))
                }
                _ => {}
            }
        }
        Ok(CycleFamily { model: model.clone(), param: param.to_string(), ring, components, generic_dim })
    }

    /// Family whose fibre is the sum over the group orbit of `V(gens)`.
    pub fn orbit_of(model: &Model, param: &str, gens: &[&str], coeff: BigRational) -> Result<CycleFamily> {
        let ring = CycleFamily::family_ring(model, param)?;
        let base = Ideal::parse(&ring, gens)?;
        let mut seen: Vec<CanonIdeal> = Vec::new();
        let mut components = Vec::new();
        for g in 0..model.group().order() {
            let moved = base.substitute(&ring, &family_images(model, &ring, g));
            let canon = moved.canonical()?;
            if !seen.contains(&canon) {
                components.push(FamilyComponent { gens: canon.basis().to_vec(), coeff: coeff.clone() });
                seen.push(canon);
            }
        }
        CycleFamily::new(model, param, components)
    }

    /// Constant family.
    pub fn constant(x: &DownstairsCycle) -> Result<CycleFamily> {
        let model = x.model().clone();
        let ring = CycleFamily::family_ring(&model, "s")?;
        let z = pullback(&model, x)?;
        let ident: Vec<usize> = (0..model.dim()).collect();
        let components = z
            .terms()
            .iter()
            .map(|(p, c)| FamilyComponent {
                gens: p.basis().iter().map(|g| g.map_vars(&ring, &ident)).collect(),
                coeff: c.clone(),
            })
            .collect();
        CycleFamily::new(&model, "s", components)
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn param(&self) -> &str {
        &self.param
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn components(&self) -> &[FamilyComponent] {
        &self.components
    }

    pub fn generic_dimension(&self) -> Option<usize> {
        self.generic_dim
    }

    /// Upstairs fibre at `s = s0`.
    pub fn specialize_upstairs<R: Rng + ?Sized>(&self, s0: &BigRational, rng: &mut R) -> Result<UpstairsCycle> {
        let up = self.model.up();
        let mut images: Vec<MultiPoly> = (0..up.nvars()).map(|i| MultiPoly::var(up, i)).collect();
        images.push(MultiPoly::constant(up, Scalar::from_rational(s0.clone())));
        let mut z = UpstairsCycle::zero(up);
        for comp in &self.components {
            let j = Ideal::new(up, comp.gens.iter().map(|g| g.substitute(up, &images)).collect());
            let degenerate = || Error::SpecializationDegenerate(format!("{} = {}", self.param, s0));
            if j.is_unit()? {
                return Err(degenerate());
            }
            for c in decompose(&j, &[], rng)? {
                if Some(c.dimension) != self.generic_dim {
                    return Err(degenerate());
                }
                let m = BigRational::from_integer(c.multiplicity.into());
                z.add_canon(c.prime, c.dimension, &comp.coeff * m)?;
            }
        }
        Ok(z)
    }

    /// Downstairs fibre `(1/k)·q_*(Z_{s0})`; the fibre must be invariant.
    pub fn specialize<R: Rng + ?Sized>(&self, s0: &BigRational, rng: &mut R) -> Result<DownstairsCycle> {
        let z = self.specialize_upstairs(s0, rng)?;
        let k = BigRational::from_integer((self.model.degree() as i64).into());
        let y = pushforward(&self.model, &z)?.scale(&(super::one() / k))?;
        if pullback(&self.model, &y)? != z {
            return Err(Error::InvalidCycle(format!("fibre at {} = {} is not group-invariant", self.param, s0)));
        }
        Ok(y)
    }
}

fn family_images(model: &Model, ring: &Ring, g: usize) -> Vec<MultiPoly> {
    let mut images = linear_images(model.group().element(g), ring);
    images.push(MultiPoly::var(ring, ring.nvars() - 1));
    images
}

/// Total intersection numbers of two families along a list of samples.
#[derive(Clone, Debug)]
pub struct ConservationReport {
    pub samples: Vec<(BigRational, Result<BigRational>)>,
}

impl ConservationReport {
    /// All samples succeeded and agree.
    pub fn conserved(&self) -> bool {
        let mut vals = self.samples.iter().map(|(_, r)| r.as_ref().ok());
        match vals.next() {
            None => true,
            Some(None) => false,
            Some(Some(first)) => vals.all(|v| v == Some(first)),
        }
    }

    pub fn totals(&self) -> Vec<Option<BigRational>> {
        self.samples.iter().map(|(_, r)| r.as_ref().ok().cloned()).collect()
    }
}

/// Intersects `X_s` with `Y_s` (through `map` when given) at each sample and
/// records the degree of the result; failures stay local to their sample.
pub fn conservation_check<R: Rng + ?Sized>(
    fam_x: &CycleFamily,
    fam_y: &CycleFamily,
    map: Option<&ModelMap>,
    samples: &[BigRational],
    rng: &mut R,
) -> Result<ConservationReport> {
    match map {
        Some(f) => {
            check_model(f.source(), fam_x.model())?;
            check_model(f.target(), fam_y.model())?;
        }
        None => check_model(fam_x.model(), fam_y.model())?,
    }
    let mut out = Vec::with_capacity(samples.len());
    for s in samples {
        let total = (|| {
            let x = fam_x.specialize(s, rng)?;
            let y = fam_y.specialize(s, rng)?;
            let r = match map {
                Some(f) => f_product(f, &x, &y, rng)?,
                None => intersect_model(fam_x.model(), &x, &y, rng)?,
            };
            r.cycle.degree()
        })();
        out.push((s.clone(), total));
    }
    Ok(ConservationReport { samples: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BaseField;
    use crate::poly::Budget;
    use crate::quotient::a1;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn model() -> Model {
        Arc::new(a1(&BaseField::Rationals, Budget::default()).unwrap())
    }

    #[test]
    fn orbit_family_through_the_singular_fibre() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let fx = CycleFamily::orbit_of(&m, "s", &["u"], rat(1)).unwrap();
        let fy = CycleFamily::orbit_of(&m, "s", &["v - s"], rat(1)).unwrap();
        assert_eq!(fy.components().len(), 2);
        let y0 = fy.specialize(&rat(0), &mut rng).unwrap();
        let v = DownstairsCycle::from_prime(&m, &Ideal::parse(m.up(), &["v"]).unwrap(), rat(2)).unwrap();
        assert_eq!(y0, v);
        let samples: Vec<_> = (0..4).map(rat).collect();
        let rep = conservation_check(&fx, &fy, None, &samples, &mut rng).unwrap();
        assert_eq!(rep.totals(), vec![Some(rat(1)); 4]);
        assert!(rep.conserved());
    }

    #[test]
    fn disjoint_constant_families() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let fx = CycleFamily::orbit_of(&m, "s", &["u - 1", "v - 1"], rat(1)).unwrap();
        let fy = CycleFamily::orbit_of(&m, "s", &["u - 2", "v - 1"], rat(1)).unwrap();
        let samples: Vec<_> = (0..3).map(rat).collect();
        let rep = conservation_check(&fx, &fy, None, &samples, &mut rng).unwrap();
        assert_eq!(rep.totals(), vec![Some(rat(0)); 3]);
    }

    #[test]
    fn degenerate_and_non_invariant_fibres() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ring = CycleFamily::family_ring(&m, "s").unwrap();
        let g = MultiPoly::parse(&ring, "s*u - 1").unwrap();
        let fam = CycleFamily::new(&m, "s", vec![FamilyComponent { gens: vec![g], coeff: rat(1) }]).unwrap();
        assert_eq!(fam.specialize(&rat(0), &mut rng).unwrap_err().kind(), "SpecializationDegenerate");
        let h = MultiPoly::parse(&ring, "v - s").unwrap();
        let half = CycleFamily::new(&m, "s", vec![FamilyComponent { gens: vec![h], coeff: rat(1) }]).unwrap();
        assert_eq!(half.specialize(&rat(1), &mut rng).unwrap_err().kind(), "InvalidCycle");
        assert!(half.specialize(&rat(0), &mut rng).is_ok());
    }

    #[test]
    fn constant_family_round_trip() {
        let m = model();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = DownstairsCycle::from_prime(&m, &Ideal::parse(m.up(), &["u - v"]).unwrap(), rat(3)).unwrap();
        let fam = CycleFamily::constant(&x).unwrap();
        assert_eq!(fam.specialize(&rat(5), &mut rng).unwrap(), x);
    }
}
