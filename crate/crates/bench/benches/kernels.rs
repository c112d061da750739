use criterion::{criterion_group, criterion_main, Criterion};
use orbicycle::cycle::intersect_model;
use orbicycle::forms::{trace_form, DescentOptions};
use orbicycle::poly::{factor_multivariate, GroebnerBasis, MultiPoly, TermOrder};
use orbicycle::{BaseField, DiffForm, PolyRing, UniPoly};
use orbicycle_bench::{cycle, model};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn groebner(c: &mut Criterion) {
    let ring = PolyRing::new(BaseField::Rationals, ["x", "y", "z"]);
    let gens: Vec<MultiPoly> = ["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"]
        .iter()
        .map(|s| MultiPoly::parse(&ring, s).unwrap())
        .collect();
    c.bench_function("groebner/cyclic3_grevlex", |b| {
        b.iter(|| GroebnerBasis::compute(&ring, &gens, TermOrder::Grevlex).unwrap())
    });
    c.bench_function("groebner/cyclic3_lex", |b| b.iter(|| GroebnerBasis::compute(&ring, &gens, TermOrder::Lex).unwrap()));
}

fn intersection(c: &mut Criterion) {
    let a1 = model("A1");
    let (x, y) = (cycle(&a1, &["u"]), cycle(&a1, &["v"]));
    c.bench_function("intersect/a1_lines", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        b.iter(|| intersect_model(&a1, &x, &y, &mut rng).unwrap())
    });
    let a2 = model("A2");
    let (x, y) = (cycle(&a2, &["u - v^2"]), cycle(&a2, &["v"]));
    c.bench_function("intersect/a2_curves", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        b.iter(|| intersect_model(&a2, &x, &y, &mut rng).unwrap())
    });
}

fn trace(c: &mut Criterion) {
    let a1 = model("A1");
    let opts = DescentOptions::default();
    let area = DiffForm::parse(a1.up(), "du*dv").unwrap();
    let log = DiffForm::parse(a1.up(), "v^2*du/u").unwrap();
    c.bench_function("trace/a1_area", |b| b.iter(|| trace_form(&a1, &area, &opts).unwrap()));
    c.bench_function("trace/a1_log", |b| b.iter(|| trace_form(&a1, &log, &opts).unwrap()));
}

fn factorization(c: &mut Criterion) {
    let p = UniPoly::from_ints(&[-1, 0, 0, 0, 0, 0, 1]);
    c.bench_function("factor/x6_minus_1", |b| {
        b.iter(|| orbicycle::arith::factor_over(&BaseField::Rationals, &p, 64).unwrap())
    });
    let ring = PolyRing::new(BaseField::Rationals, ["x", "y", "z"]);
    let h = MultiPoly::parse(&ring, "(x + y*z)^2*(x - y + 1)*(z^2 - x)").unwrap();
    c.bench_function("factor/trivariate", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        b.iter(|| factor_multivariate(&h, &mut rng).unwrap())
    });
}

criterion_group!(benches, groebner, intersection, trace, factorization);
criterion_main!(benches);
