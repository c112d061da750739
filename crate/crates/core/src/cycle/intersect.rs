use num_rational::BigRational;
use rand::Rng;

use super::{check_model, pullback, pushforward, DownstairsCycle, UpstairsCycle};
use crate::error::{Error, Result};
use crate::poly::{decompose, CanonIdeal, Ideal};
use crate::quotient::Model;

/// Outcome of the properness test, with the data behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Properness {
    pub proper: bool,
    pub codim_x: usize,
    pub codim_y: usize,
    /// Largest dimension of an upstairs component intersection, `None` when
    /// the supports are disjoint.
    pub intersection_dim: Option<usize>,
}

/// Result of an intersection product.
#[derive(Clone, Debug)]
pub struct Intersection {
    pub cycle: DownstairsCycle,
    pub upstairs: UpstairsCycle,
    pub warnings: Vec<String>,
}

fn is_complete_intersection(p: &CanonIdeal, dim: usize) -> bool {
    p.basis().len() == p.ring().nvars() - dim
}

fn sum_ideal(p: &CanonIdeal, q: &CanonIdeal) -> Ideal {
    let mut gens = p.basis().to_vec();
    gens.extend(q.basis().iter().cloned());
    Ideal::new(p.ring(), gens)
}

fn expected_dim(n: usize, a: usize, b: usize) -> Option<usize> {
    (a + b).checked_sub(n)
}

/// `A ∩ B` on the smooth upstairs space. Every pair of components must meet
/// properly; the multiplicity of each component is the length of the
/// intersection algebra at its generic point.
pub fn intersect_upstairs<R: Rng + ?Sized>(
    a: &UpstairsCycle,
    b: &UpstairsCycle,
    rng: &mut R,
) -> Result<(UpstairsCycle, Vec<String>)> {
    let ring = a.ring().clone();
    let mut out = UpstairsCycle::zero(&ring);
    let mut warnings = Vec::new();
    let (Some(da), Some(db)) = (a.dimension(), b.dimension()) else {
        return Ok((out, warnings));
    };
    let n = ring.nvars();
    let expected = expected_dim(n, da, db);
    for (p, c) in a.terms() {
        for (q, d) in b.terms() {
            let j = sum_ideal(p, q);
            let Some(dim) = j.dimension_or_empty()? else { continue };
            if Some(dim) != expected {
                return Err(Error::NotProper(format!(
                    "{} and {} meet in dimension {}, expected {}",
                    p,
                    q,
                    dim,
                    expected.map_or("empty".to_string(), |e| e.to_string())
                )));
            }
            if !is_complete_intersection(p, da) && !is_complete_intersection(q, db) {
                let w = format!("NonCMWarning: neither {} nor {} is a complete intersection", p, q);
                if !warnings.contains(&w) {
                    warnings.push(w);
                }
            }
            for comp in decompose(&j, &[p.clone(), q.clone()], rng)? {
                if comp.dimension != dim {
                    return Err(Error::NotProper(format!("component {} of {} + {} has dimension {}", comp.prime, p, q, comp.dimension)));
                }
                let m = BigRational::from_integer(comp.multiplicity.into());
                out.add_canon(comp.prime, dim, c * d * m)?;
            }
        }
    }
    Ok((out, warnings))
}

/// Properness of `X` and `Y`, tested upstairs on every pair of components.
pub fn is_proper(model: &Model, x: &DownstairsCycle, y: &DownstairsCycle) -> Result<Properness> {
    check_model(model, x.model())?;
    check_model(model, y.model())?;
    let n = model.dim();
    let (cx, cy) = (x.codimension().unwrap_or(0), y.codimension().unwrap_or(0));
    let mut props = Properness { proper: true, codim_x: cx, codim_y: cy, intersection_dim: None };
    if x.is_zero() || y.is_zero() {
        return Ok(props);
    }
    let expected = expected_dim(n, n - cx, n - cy);
    let zx = pullback(model, x)?;
    let zy = pullback(model, y)?;
    for p in zx.terms().keys() {
        for q in zy.terms().keys() {
            if let Some(d) = sum_ideal(p, q).dimension_or_empty()? {
                props.intersection_dim = Some(props.intersection_dim.map_or(d, |e| e.max(d)));
                if Some(d) != expected {
                    props.proper = false;
                }
            }
        }
    }
    Ok(props)
}

/// `X ∩_M Y = (1/k) q_*(q*X ∩ q*Y)`.
pub fn intersect_model<R: Rng + ?Sized>(
    model: &Model,
    x: &DownstairsCycle,
    y: &DownstairsCycle,
    rng: &mut R,
) -> Result<Intersection> {
    check_model(model, x.model())?;
    check_model(model, y.model())?;
    let zx = pullback(model, x)?;
    let zy = pullback(model, y)?;
    let (up, warnings) = intersect_upstairs(&zx, &zy, rng)?;
    let k = BigRational::from_integer((model.degree() as i64).into());
    let cycle = pushforward(model, &up)?.scale(&(super::one() / k))?;
    Ok(Intersection { cycle, upstairs: up, warnings })
}
