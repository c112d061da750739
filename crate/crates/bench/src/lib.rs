//! Fixtures shared by the criterion benches in `benches/`.

use std::sync::Arc;

use num_rational::BigRational;
use orbicycle::poly::Ideal;
use orbicycle::quotient::catalog;
use orbicycle::{BaseField, Budget, DownstairsCycle, Model};

pub fn model(name: &str) -> Model {
    let field = if name.contains("A2") { BaseField::cyclotomic(3) } else { BaseField::Rationals };
    Arc::new(catalog(name, &field, Budget::default()).expect("catalog model"))
}

/// Image of `V(gens)` with coefficient one.
pub fn cycle(m: &Model, gens: &[&str]) -> DownstairsCycle {
    let p = Ideal::parse(m.up(), gens).expect("generators parse");
    DownstairsCycle::from_prime(m, &p, BigRational::new(1.into(), 1.into())).expect("prime cycle")
}
