use rand::Rng;

use super::ideal::{CanonIdeal, Ideal};
use super::multipoly::MultiPoly;
use crate::arith::{factor_over, Scalar};
use crate::error::{Error, Result};

/// Retries for finding a separating linear form.
pub const SEPARATION_ATTEMPTS: usize = 8;

/// A Galois orbit of points of a zero-dimensional scheme: its maximal ideal,
/// residue degree (number of conjugate points) and the length at each point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointCluster {
    pub ideal: CanonIdeal,
    pub residue_degree: usize,
    pub multiplicity: u64,
}

impl PointCluster {
    /// Vector-space dimension of the local algebra at the cluster.
    pub fn local_dimension(&self) -> u64 {
        self.multiplicity * self.residue_degree as u64
    }
}

/// Radical of a zero-dimensional ideal: add the squarefree part of the
/// characteristic polynomial of each coordinate.
pub fn radical_zero_dim(j: &Ideal) -> Result<Ideal> {
    let ring = j.ring().clone();
    let mut extra = Vec::new();
    for v in 0..ring.nvars() {
        let x = MultiPoly::var(&ring, v);
        let cp = j.multiplication_matrix(&x)?.charpoly();
        let sq = cp.squarefree_part();
        if sq.degree() < cp.degree() {
            extra.push(MultiPoly::from_univariate(&ring, v, &sq));
        }
    }
    if extra.is_empty() {
        Ok(j.clone())
    } else {
        Ok(j.with(&extra))
    }
}

/// Number of geometric points of a zero-dimensional ideal.
pub fn point_count(j: &Ideal) -> Result<usize> {
    if j.is_unit()? {
        return Ok(0);
    }
    radical_zero_dim(j)?.quotient_dimension()
}

/// Split `F[u]/J` into clusters with the eigenvalue method.
pub fn point_clusters<R: Rng + ?Sized>(j: &Ideal, rng: &mut R) -> Result<Vec<PointCluster>> {
    if j.is_unit()? {
        return Ok(vec![]);
    }
    let ring = j.ring().clone();
    let total = j.quotient_dimension()?;
    let rad = radical_zero_dim(j)?;
    let gb = rad.groebner()?;
    let npoints = rad.quotient_dimension()?;
    let n = ring.nvars();
    for attempt in 0..SEPARATION_ATTEMPTS {
        let span = 3 + 4 * attempt as i64;
        let mut ell = MultiPoly::zero(&ring);
        for v in 0..n {
            let c = rng.gen_range(-span..=span);
            ell = &ell + &MultiPoly::var(&ring, v).scale(&Scalar::from_int(c));
        }
        let chi = j.multiplication_matrix(&ell)?.charpoly();
        if chi.squarefree_part().degree() != Some(npoints) {
            continue;
        }
        let factors = factor_over(ring.field(), &chi, ring.budget().degree_bound)?;
        let mut out = Vec::with_capacity(factors.len());
        for (p, a) in factors {
            // p(ell) reduced modulo the radical, by Horner
            let mut acc = MultiPoly::zero(&ring);
            for c in p.coeffs().iter().rev() {
                acc = gb.reduce(&(&(&acc * &ell) + &MultiPoly::constant(&ring, c.clone())))?;
            }
            let m = rad.with(&[acc]).canonical()?;
            out.push(PointCluster { ideal: m, residue_degree: p.degree().unwrap_or(0), multiplicity: a as u64 });
        }
        out.sort();
        debug_assert_eq!(out.iter().map(PointCluster::local_dimension).sum::<u64>(), total as u64);
        return Ok(out);
    }
    Err(Error::SeparationFailure(SEPARATION_ATTEMPTS))
}
