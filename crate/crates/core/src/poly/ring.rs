use std::fmt;
use std::sync::Arc;

use crate::arith::BaseField;

/// Effort limits. Gröbner computations abort with `EffortExceeded` past
/// `max_pairs` or `max_terms`; univariate factorization refuses degrees above
/// `degree_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_terms: usize,
    pub degree_bound: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: 50_000, max_terms: 100_000, degree_bound: crate::arith::DEFAULT_DEGREE_BOUND }
    }
}

/// Polynomial ring `F[x_1, ..., x_n]` with named variables.
#[derive(Debug)]
pub struct PolyRing {
    field: BaseField,
    names: Vec<String>,
    budget: Budget,
}

pub type Ring = Arc<PolyRing>;

impl PolyRing {
    pub fn new<S: Into<String>>(field: BaseField, names: impl IntoIterator<Item = S>) -> Ring {
        PolyRing::with_budget(field, names, Budget::default())
    }

    pub fn with_budget<S: Into<String>>(
        field: BaseField,
        names: impl IntoIterator<Item = S>,
        budget: Budget,
    ) -> Ring {
        Arc::new(PolyRing { field, names: names.into_iter().map(Into::into).collect(), budget })
    }

    /// A ring over the same field and budget with other variables.
    pub fn derive<S: Into<String>>(&self, names: impl IntoIterator<Item = S>) -> Ring {
        PolyRing::with_budget(self.field.clone(), names, self.budget)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.names == other.names
    }
}

impl Eq for PolyRing {}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.names.join(", "))
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
