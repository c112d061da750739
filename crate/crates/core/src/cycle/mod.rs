//! Rational cycles on local models and their intersection theory.

mod family;
mod intersect;
mod lift;
mod map;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{decompose, CanonIdeal, Ideal, MultiPoly, Ring};
use crate::quotient::{LocalModel, Model};

pub use family::{conservation_check, ConservationReport, CycleFamily, FamilyComponent};
pub use intersect::{intersect_model, intersect_upstairs, is_proper, Intersection, Properness};
pub use lift::{downstairs_ideal, lift_downstairs};
pub use map::{f_product, pullback_along_map, pushforward_along_map, ModelMap};

/// Formal combination of prime ideals of one dimension with positive
/// rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpstairsCycle {
    ring: Ring,
    dimension: Option<usize>,
    terms: BTreeMap<CanonIdeal, BigRational>,
}

fn check_coeff(c: &BigRational) -> Result<()> {
    if c.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidCycle(format!("coefficient {} is not positive", c)))
    }
}

fn merge_dim(slot: &mut Option<usize>, d: usize) -> Result<()> {
    match *slot {
        None => {
            *slot = Some(d);
            Ok(())
        }
        Some(e) if e == d => Ok(()),
        Some(e) => Err(Error::InvalidCycle(format!("components of dimensions {} and {} in one cycle", e, d))),
    }
}

impl UpstairsCycle {
    pub fn zero(ring: &Ring) -> Self {
        UpstairsCycle { ring: ring.clone(), dimension: None, terms: BTreeMap::new() }
    }

    /// Add `c·[P]`. `P` is taken to be prime; its dimension is computed.
    pub fn add_prime(&mut self, p: &Ideal, c: BigRational) -> Result<()> {
        let dim = p.dimension()?;
        self.add_canon(p.canonical()?, dim, c)
    }

    pub(crate) fn add_canon(&mut self, p: CanonIdeal, dim: usize, c: BigRational) -> Result<()> {
        check_coeff(&c)?;
        merge_dim(&mut self.dimension, dim)?;
        *self.terms.entry(p).or_insert_with(BigRational::zero) += c;
        Ok(())
    }

    pub fn from_primes(ring: &Ring, parts: Vec<(Ideal, BigRational)>) -> Result<Self> {
        let mut z = UpstairsCycle::zero(ring);
        for (p, c) in parts {
            z.add_prime(&p, c)?;
        }
        Ok(z)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dimension(&self) -> Option<usize> {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<CanonIdeal, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, p: &CanonIdeal) -> BigRational {
        self.terms.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Result<UpstairsCycle> {
        if c.is_zero() {
            return Ok(UpstairsCycle::zero(&self.ring));
        }
        check_coeff(c)?;
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        Ok(out)
    }

    pub fn add(&self, other: &UpstairsCycle) -> Result<UpstairsCycle> {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_canon(p.clone(), other.dimension.unwrap(), c.clone())?;
        }
        Ok(out)
    }
}

impl fmt::Display for UpstairsCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{} · {}", c, p)?;
        }
        Ok(())
    }
}

impl fmt::Display for DownstairsCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (o, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{} · {}", c, o)?;
        }
        Ok(())
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis = self.rep.basis();
        let n = self.rep.ring().nvars();
        if basis.len() == n && basis.iter().all(|g| g.len() == 1 && g.total_degree() == Some(1)) {
            return write!(f, "[origin]");
        }
        let gens: Vec<String> = basis.iter().map(|g| g.to_string()).collect();
        write!(f, "[{}]", gens.join(", "))
    }
}

/// A `G`-orbit of upstairs primes, i.e. an irreducible subvariety downstairs.
#[derive(Clone, Debug)]
pub struct OrbitClass {
    rep: CanonIdeal,
    members: Vec<CanonIdeal>,
    stabilizer: usize,
    inertia: usize,
    dimension: usize,
}

impl OrbitClass {
    /// Orbit data of the prime `p` under the model's group.
    pub fn of(model: &LocalModel, p: &Ideal) -> Result<OrbitClass> {
        let g = model.group();
        let mut members: Vec<CanonIdeal> = Vec::new();
        for e in 0..g.order() {
            let c = g.act_ideal(e, p).canonical()?;
            if !members.contains(&c) {
                members.push(c);
            }
        }
        members.sort();
        let rep = members[0].clone();
        let rep_ideal = rep.to_ideal();
        let inertia = g.inertia_group(&rep_ideal)?.order();
        let dimension = rep_ideal.dimension()?;
        Ok(OrbitClass { stabilizer: g.order() / members.len(), rep, members, inertia, dimension })
    }

    /// Canonical representative: the least member of the orbit.
    pub fn representative(&self) -> &CanonIdeal {
        &self.rep
    }

    pub fn members(&self) -> &[CanonIdeal] {
        &self.members
    }

    pub fn orbit_size(&self) -> usize {
        self.members.len()
    }

    pub fn stabilizer_order(&self) -> usize {
        self.stabilizer
    }

    pub fn inertia_order(&self) -> usize {
        self.inertia
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Degree of `q` restricted to a member, onto its image: `s / i`.
    pub fn image_degree(&self) -> BigRational {
        BigRational::new((self.stabilizer as i64).into(), (self.inertia as i64).into())
    }
}

impl PartialEq for OrbitClass {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep
    }
}

impl Eq for OrbitClass {}

impl PartialOrd for OrbitClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrbitClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rep.cmp(&other.rep)
    }
}

/// Rational cycle on the quotient, stored as orbit classes.
#[derive(Clone, Debug)]
pub struct DownstairsCycle {
    model: Model,
    dimension: Option<usize>,
    terms: BTreeMap<OrbitClass, BigRational>,
}

pub(crate) fn same_model(a: &Model, b: &Model) -> bool {
    Arc::ptr_eq(a, b) || (a.name() == b.name() && **a.up() == **b.up() && **a.down() == **b.down())
}

pub(crate) fn check_model(a: &Model, b: &Model) -> Result<()> {
    if same_model(a, b) {
        Ok(())
    } else {
        Err(Error::InvalidCycle(format!("cycles live on different models {} and {}", a.name(), b.name())))
    }
}

impl PartialEq for DownstairsCycle {
    fn eq(&self, other: &Self) -> bool {
        same_model(&self.model, &other.model) && self.terms == other.terms
    }
}

impl Eq for DownstairsCycle {}

impl DownstairsCycle {
    pub fn zero(model: &Model) -> Self {
        DownstairsCycle { model: model.clone(), dimension: None, terms: BTreeMap::new() }
    }

    /// `c · q(V(P))` for an upstairs prime `P`.
    pub fn from_prime(model: &Model, p: &Ideal, c: BigRational) -> Result<Self> {
        let mut out = DownstairsCycle::zero(model);
        out.add_orbit(OrbitClass::of(model, p)?, c)?;
        Ok(out)
    }

    pub fn add_orbit(&mut self, o: OrbitClass, c: BigRational) -> Result<()> {
        check_coeff(&c)?;
        merge_dim(&mut self.dimension, o.dimension)?;
        *self.terms.entry(o).or_insert_with(BigRational::zero) += c;
        Ok(())
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn dimension(&self) -> Option<usize> {
        self.dimension
    }

    pub fn codimension(&self) -> Option<usize> {
        self.dimension.map(|d| self.model.dim() - d)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<OrbitClass, BigRational> {
        &self.terms
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &BigRational> {
        self.terms.values()
    }

    pub fn scale(&self, c: &BigRational) -> Result<DownstairsCycle> {
        if c.is_zero() {
            return Ok(DownstairsCycle::zero(&self.model));
        }
        check_coeff(c)?;
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        Ok(out)
    }

    pub fn add(&self, other: &DownstairsCycle) -> Result<DownstairsCycle> {
        check_model(&self.model, &other.model)?;
        let mut out = self.clone();
        for (o, c) in &other.terms {
            out.add_orbit(o.clone(), c.clone())?;
        }
        Ok(out)
    }

    /// Number of geometric points, for 0-cycles: each orbit of a point with
    /// residue degree `r` contributes `c · r · i / s`.
    pub fn degree(&self) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (o, c) in &self.terms {
            if o.dimension != 0 {
                return Err(Error::DimensionMismatch("degree of a cycle that is not zero-dimensional".into()));
            }
            let r = o.rep.to_ideal().quotient_dimension()?;
            total += c * BigRational::new(((r * o.inertia) as i64).into(), (o.stabilizer as i64).into());
        }
        Ok(total)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

/// `q*X`: each orbit with coefficient `r` becomes `r · i · Σ members`.
pub fn pullback(model: &Model, x: &DownstairsCycle) -> Result<UpstairsCycle> {
    check_model(model, &x.model)?;
    let mut out = UpstairsCycle::zero(model.up());
    for (o, c) in &x.terms {
        let m = c * BigRational::from_integer((o.inertia as i64).into());
        for p in &o.members {
            out.add_canon(p.clone(), o.dimension, m.clone())?;
        }
    }
    Ok(out)
}

/// `q_*Z`: each prime with coefficient `c` contributes `c · s / i` to its orbit.
pub fn pushforward(model: &Model, z: &UpstairsCycle) -> Result<DownstairsCycle> {
    let mut out = DownstairsCycle::zero(model);
    let mut cache: BTreeMap<CanonIdeal, OrbitClass> = BTreeMap::new();
    for (p, c) in &z.terms {
        let o = match cache.get(p) {
            Some(o) => o.clone(),
            None => {
                let o = OrbitClass::of(model, &p.to_ideal())?;
                for m in &o.members {
                    cache.insert(m.clone(), o.clone());
                }
                o
            }
        };
        let coeff = c * o.image_degree();
        out.add_orbit(o, coeff)?;
    }
    Ok(out)
}

/// Divisor of a downstairs function: `(1/k)·q_*(div(q*h))`.
pub fn divisor<R: rand::Rng + ?Sized>(model: &Model, h: &MultiPoly, rng: &mut R) -> Result<DownstairsCycle> {
    if h.ring() != model.down() {
        return Err(Error::ChartMismatch(format!("{} is not a function on {}", h, model.name())));
    }
    let f = model.pullback_poly(h);
    if f.is_zero() || f.is_constant() {
        return Err(Error::InvalidCycle(format!("{} has no divisor", h)));
    }
    let up = model.up();
    let mut z = UpstairsCycle::zero(up);
    let content = f.monomial_content();
    for (i, &e) in content.exponents().iter().enumerate() {
        if e > 0 {
            let line = Ideal::new(up, vec![MultiPoly::var(up, i)]);
            z.add_prime(&line, BigRational::from_integer(e.into()))?;
        }
    }
    let rest = f.div_monomial(&content);
    if !rest.is_constant() {
        for c in decompose(&Ideal::new(up, vec![rest]), &[], rng)? {
            z.add_canon(c.prime, c.dimension, BigRational::from_integer(c.multiplicity.into()))?;
        }
    }
    let k = BigRational::from_integer((model.degree() as i64).into());
    pushforward(model, &z)?.scale(&(one() / k))
}

pub(crate) fn one() -> BigRational {
    BigRational::one()
}
