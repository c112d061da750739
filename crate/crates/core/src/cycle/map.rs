use num_rational::BigRational;
use rand::Rng;

use super::{check_model, intersect_model, pullback, pushforward, DownstairsCycle, Intersection, UpstairsCycle};
use crate::arith::Scalar;
use crate::error::{Error, Result};
use crate::group::linear_images;
use crate::poly::{decompose, point_count, CanonIdeal, Ideal, MultiPoly};
use crate::quotient::Model;

/// Attempts at finding generic hyperplane sections for mapping degrees.
const SAMPLE_ATTEMPTS: usize = 8;

/// Equivariant polynomial map between local models, given upstairs by
/// `F = (F_1, ..., F_m)` in the source coordinates.
#[derive(Clone, Debug)]
pub struct ModelMap {
    source: Model,
    target: Model,
    images: Vec<MultiPoly>,
    phi: Vec<usize>,
}

impl ModelMap {
    pub fn new(source: &Model, target: &Model, images: Vec<MultiPoly>) -> Result<ModelMap> {
        if images.len() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map into {} needs {} components, got {}",
                target.name(),
                target.dim(),
                images.len()
            )));
        }
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(format!("{} vs {}", source.field(), target.field())));
        }
        let gm = source.group();
        let gn = target.group();
        let mut phi = Vec::with_capacity(gm.order());
        for g in 0..gm.order() {
            let moved: Vec<MultiPoly> = images.iter().map(|f| gm.act(g, f)).collect();
            let h = (0..gn.order()).find(|&h| {
                let lin = linear_images(gn.element(h), target.up());
                // h·F(u) has components Σ_k h_jk F_k(u)
                lin.iter().zip(moved.iter()).all(|(l, mv)| l.substitute(source.up(), &images) == *mv)
            });
            match h {
                Some(h) => phi.push(h),
                None => {
                    return Err(Error::NotEquivariant(format!(
                        "no element of {} matches element {} of {}",
                        target.name(),
                        g,
                        source.name()
                    )))
                }
            }
        }
        Ok(ModelMap { source: source.clone(), target: target.clone(), images, phi })
    }

    pub fn parse(source: &Model, target: &Model, images: &[&str]) -> Result<ModelMap> {
        let polys = images.iter().map(|s| MultiPoly::parse(source.up(), s)).collect::<Result<Vec<_>>>()?;
        ModelMap::new(source, target, polys)
    }

    pub fn identity(model: &Model) -> ModelMap {
        let images = (0..model.dim()).map(|i| MultiPoly::var(model.up(), i)).collect();
        ModelMap::new(model, model, images).expect("identity is equivariant")
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ModelMap) -> Result<ModelMap> {
        check_model(&self.target, &next.source)?;
        let images = next.images.iter().map(|f| f.substitute(self.source.up(), &self.images)).collect();
        ModelMap::new(&self.source, &next.target, images)
    }

    pub fn source(&self) -> &Model {
        &self.source
    }

    pub fn target(&self) -> &Model {
        &self.target
    }

    pub fn images(&self) -> &[MultiPoly] {
        &self.images
    }

    /// The homomorphism `G_M → G_N` as element indices.
    pub fn group_hom(&self) -> &[usize] {
        &self.phi
    }

    /// `F*` on upstairs polynomials of the target.
    pub fn pull_poly(&self, f: &MultiPoly) -> MultiPoly {
        f.substitute(self.source.up(), &self.images)
    }

    fn pull_ideal(&self, q: &CanonIdeal) -> Ideal {
        Ideal::new(self.source.up(), q.basis().iter().map(|g| self.pull_poly(g)).collect())
    }

    /// Closure of `F(V(P))` as an upstairs ideal of the target.
    fn image_ideal(&self, p: &Ideal) -> Result<Ideal> {
        let n = self.source.dim();
        let m = self.target.dim();
        let names: Vec<String> = (0..n).map(|i| format!("_a{}", i)).chain((0..m).map(|j| format!("_b{}", j))).collect();
        let ring = self.source.up().derive(names);
        let embed: Vec<usize> = (0..n).collect();
        let mut gens: Vec<MultiPoly> = p.generators().iter().map(|g| g.map_vars(&ring, &embed)).collect();
        for (j, f) in self.images.iter().enumerate() {
            gens.push(&MultiPoly::var(&ring, n + j) - &f.map_vars(&ring, &embed));
        }
        let keep: Vec<usize> = (n..n + m).collect();
        let el = Ideal::new(&ring, gens).eliminate(&keep)?;
        let ident: Vec<usize> = (0..m).collect();
        Ok(el.map_vars(self.target.up(), &ident))
    }

    /// Degree of `F` restricted to `V(P)` onto `V(Q)`.
    fn mapping_degree<R: Rng + ?Sized>(&self, p: &Ideal, q: &Ideal, dim: usize, rng: &mut R) -> Result<u64> {
        if dim == 0 {
            let a = p.quotient_dimension()?;
            let b = q.quotient_dimension()?;
            if b == 0 || a % b != 0 {
                return Err(Error::NotFiniteOnSupport(format!("residue degrees {} over {}", a, b)));
            }
            return Ok((a / b) as u64);
        }
        let first = self.sample_degree(p, q, dim, rng)?;
        let second = self.sample_degree(p, q, dim, rng)?;
        if first != second {
            return Err(Error::SampleDisagreement { first: first.to_string(), second: second.to_string() });
        }
        Ok(first)
    }

    fn sample_degree<R: Rng + ?Sized>(&self, p: &Ideal, q: &Ideal, dim: usize, rng: &mut R) -> Result<u64> {
        let tr = self.target.up();
        for _ in 0..SAMPLE_ATTEMPTS {
            let hs: Vec<MultiPoly> = (0..dim)
                .map(|_| {
                    let mut h = MultiPoly::constant(tr, Scalar::from_int(rng.gen_range(-50..=50)));
                    for v in 0..tr.nvars() {
                        h = &h + &MultiPoly::var(tr, v).scale(&Scalar::from_int(rng.gen_range(-20..=20)));
                    }
                    h
                })
                .collect();
            let down = q.with(&hs);
            if down.dimension_or_empty()? != Some(0) {
                continue;
            }
            let up = p.with(&hs.iter().map(|h| self.pull_poly(h)).collect::<Vec<_>>());
            if up.dimension_or_empty()? != Some(0) {
                continue;
            }
            let (nu, nd) = (point_count(&up)?, point_count(&down)?);
            // a slice through the branch locus shows up as a non-reduced fibre
            if nd == 0 || nu % nd != 0 || nu != up.quotient_dimension()? || nd != down.quotient_dimension()? {
                continue;
            }
            return Ok((nu / nd) as u64);
        }
        Err(Error::NotFiniteOnSupport(format!("no generic slice found for {}", p)))
    }
}

/// `M ·_f Y`: pull `q_N* Y` back through `F`, decompose, and push down
/// with the `1/k_M` normalization.
pub fn pullback_along_map<R: Rng + ?Sized>(f: &ModelMap, y: &DownstairsCycle, rng: &mut R) -> Result<DownstairsCycle> {
    check_model(&f.target, y.model())?;
    let src = &f.source;
    let zy = pullback(&f.target, y)?;
    let mut w = UpstairsCycle::zero(src.up());
    if let Some(codim) = y.codimension() {
        let expected = src.dim().checked_sub(codim);
        for (q, c) in zy.terms() {
            let j = f.pull_ideal(q);
            if j.is_unit()? {
                continue;
            }
            let comps = decompose(&j, &[], rng).map_err(|e| match e {
                Error::UnsupportedShape(s) => Error::UnsupportedPreimageShape(s),
                e => e,
            })?;
            for comp in comps {
                if Some(comp.dimension) != expected {
                    return Err(Error::NotEquidimensional(format!(
                        "preimage component {} has dimension {}, expected {}",
                        comp.prime,
                        comp.dimension,
                        expected.map_or("none".to_string(), |e| e.to_string())
                    )));
                }
                let m = BigRational::from_integer(comp.multiplicity.into());
                w.add_canon(comp.prime, comp.dimension, c * m)?;
            }
        }
    }
    let k = BigRational::from_integer((src.degree() as i64).into());
    pushforward(src, &w)?.scale(&(super::one() / k))
}

/// `X ·_f Y = X ∩_M (M ·_f Y)`.
pub fn f_product<R: Rng + ?Sized>(
    f: &ModelMap,
    x: &DownstairsCycle,
    y: &DownstairsCycle,
    rng: &mut R,
) -> Result<Intersection> {
    let mfy = pullback_along_map(f, y, rng)?;
    intersect_model(&f.source, x, &mfy, rng)
}

/// `f_* X`, defined when `f` is finite on the support of `X`.
pub fn pushforward_along_map<R: Rng + ?Sized>(f: &ModelMap, x: &DownstairsCycle, rng: &mut R) -> Result<DownstairsCycle> {
    check_model(&f.source, x.model())?;
    let zx = pullback(&f.source, x)?;
    let mut v = UpstairsCycle::zero(f.target.up());
    for (p, c) in zx.terms() {
        let pi = p.to_ideal();
        let dp = pi.dimension()?;
        let q = f.image_ideal(&pi)?;
        let dq = q.dimension()?;
        if dq != dp {
            return Err(Error::NotFiniteOnSupport(format!("{} has {}-dimensional image of a {}-dimensional component", p, dq, dp)));
        }
        let deg = f.mapping_degree(&pi, &q, dp, rng)?;
        v.add_canon(q.canonical()?, dq, c * BigRational::from_integer(deg.into()))?;
    }
    let k = BigRational::from_integer((f.source.degree() as i64).into());
    pushforward(&f.target, &v)?.scale(&(super::one() / k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::BaseField;
    use crate::poly::Budget;
    use crate::quotient::{a1, catalog, trivial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn cyc(m: &Model, gens: &[&str], c: BigRational) -> DownstairsCycle {
        DownstairsCycle::from_prime(m, &Ideal::parse(m.up(), gens).unwrap(), c).unwrap()
    }

    fn t(n: usize) -> Model {
        Arc::new(trivial(&BaseField::Rationals, n, Budget::default()).unwrap())
    }

    #[test]
    fn identity_map() {
        let m: Model = Arc::new(a1(&BaseField::Rationals, Budget::default()).unwrap());
        let id = ModelMap::identity(&m);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = cyc(&m, &["u"], rat(1));
        assert_eq!(pullback_along_map(&id, &x, &mut rng).unwrap(), x);
        assert_eq!(pushforward_along_map(&id, &x, &mut rng).unwrap(), x);
        let y = cyc(&m, &["v"], rat(1));
        let fp = f_product(&id, &x, &y, &mut rng).unwrap();
        assert_eq!(fp.cycle, intersect_model(&m, &x, &y, &mut rng).unwrap().cycle);
    }

    #[test]
    fn projection_and_square_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (t1, t2) = (t(1), t(2));
        let proj = ModelMap::parse(&t2, &t1, &["t1"]).unwrap();
        let origin = cyc(&t1, &["t"], rat(1));
        assert_eq!(pullback_along_map(&proj, &origin, &mut rng).unwrap(), cyc(&t2, &["t1"], rat(1)));
        let sq = ModelMap::parse(&t1, &t1, &["t^2"]).unwrap();
        assert_eq!(pullback_along_map(&sq, &origin, &mut rng).unwrap(), cyc(&t1, &["t"], rat(2)));
        let one = cyc(&t1, &["t - 1"], rat(1));
        assert_eq!(pushforward_along_map(&sq, &one, &mut rng).unwrap(), one);
        let parabola = cyc(&t2, &["t2 - t1^2"], rat(1));
        assert_eq!(pushforward_along_map(&proj, &parabola, &mut rng).unwrap(), cyc(&t1, &[], rat(1)));
        let plane = DownstairsCycle::from_prime(&t2, &Ideal::zero(t2.up()), rat(1)).unwrap();
        assert_eq!(pushforward_along_map(&proj, &plane, &mut rng).unwrap_err().kind(), "NotFiniteOnSupport");
    }

    #[test]
    fn square_map_f_product_is_not_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t1 = t(1);
        let sq = ModelMap::parse(&t1, &t1, &["t^2"]).unwrap();
        let one = cyc(&t1, &["t - 1"], rat(1));
        let e = f_product(&sq, &one, &one, &mut rng).unwrap_err();
        assert_eq!(e.kind(), "NotProper");
    }

    #[test]
    fn product_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p: Model = Arc::new(catalog("product(A1, trivial-1)", &BaseField::Rationals, Budget::default()).unwrap());
        let m: Model = Arc::new(a1(&BaseField::Rationals, Budget::default()).unwrap());
        let f = ModelMap::parse(&p, &m, &["u", "v"]).unwrap();
        let x = cyc(&p, &["u", "t"], rat(1));
        let y = cyc(&m, &["v"], rat(1));
        let r = f_product(&f, &x, &y, &mut rng).unwrap();
        assert_eq!(r.cycle, cyc(&p, &["u", "v", "t"], BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn equivariance_is_checked() {
        let m: Model = Arc::new(a1(&BaseField::Rationals, Budget::default()).unwrap());
        let t1 = t(1);
        assert_eq!(ModelMap::parse(&m, &t1, &["u"]).unwrap_err().kind(), "NotEquivariant");
        assert!(ModelMap::parse(&m, &t1, &["u*v"]).is_ok());
        let f = ModelMap::parse(&t1, &m, &["t", "t"]).unwrap();
        assert_eq!(f.group_hom(), &[0]);
    }
}
