//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use common::{condition_d, model, random_cycle, random_cycle_with, rat};
use num_rational::BigRational;
use orbicycle::cycle::{
    conservation_check, divisor, f_product, intersect_model, intersect_upstairs, is_proper, lift_downstairs, pullback,
    pullback_along_map, pushforward, pushforward_along_map, CycleFamily, DownstairsCycle, ModelMap, UpstairsCycle,
};
use orbicycle::forms::{forms_equal, pullback_form, trace_form, DescentOptions};
use orbicycle::poly::{Ideal, MultiPoly};
use orbicycle::quotient::Model;
use orbicycle::{DiffForm, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wall-clock limits. All equalities are exact (zero tolerance).
const LINES_LIMIT: Duration = Duration::from_secs(1);
const TRACE_LIMIT: Duration = Duration::from_secs(1);
const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(60);

const ROUND_TRIP_CYCLES: usize = 200;
const UPSTAIRS_PAIRS: usize = 50;
const COMMUTATIVE_PAIRS: usize = 50;
const ASSOCIATIVE_TRIPLES: usize = 10;
const PROJECTION_INSTANCES: usize = 10;
const RESTRICTION_INSTANCES: usize = 5;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn cyc(m: &Model, gens: &[&str], c: BigRational) -> DownstairsCycle {
    DownstairsCycle::from_prime(m, &Ideal::parse(m.up(), gens).unwrap(), c).unwrap()
}

fn integral(x: &DownstairsCycle) -> bool {
    x.coefficients().all(|c| c.is_integer())
}

/// Intersection outputs on integral inputs, audited for condition (D).
#[derive(Default)]
struct Audit {
    outputs: Vec<(Model, DownstairsCycle)>,
}

impl Audit {
    fn intersect(&mut self, m: &Model, x: &DownstairsCycle, y: &DownstairsCycle, rng: &mut ChaCha8Rng) -> Result<DownstairsCycle> {
        let r = intersect_model(m, x, y, rng)?.cycle;
        if integral(x) && integral(y) {
            self.outputs.push((m.clone(), r.clone()));
        }
        Ok(r)
    }
}

fn lifted(m: &Model, gens: &[&str], rng: &mut ChaCha8Rng) -> DownstairsCycle {
    let j = Ideal::parse(m.down(), gens).unwrap();
    let mut x = DownstairsCycle::zero(m);
    x.add_orbit(lift_downstairs(m, &j, rng).unwrap(), rat(1, 1)).unwrap();
    x
}

fn criterion_1(rng: &mut ChaCha8Rng, audit: &mut Audit) -> Outcome {
    let m = model("A1");
    let start = Instant::now();
    let x = lifted(&m, &["x", "z"], rng);
    let y = lifted(&m, &["y", "z"], rng);
    let r = audit.intersect(&m, &x, &y, rng).unwrap();
    let took = start.elapsed();
    let expect = cyc(&m, &["u", "v"], rat(1, 2));
    let detail = format!("{} in {:.3} s", r, took.as_secs_f64());
    if r == expect && took < LINES_LIMIT {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Outcome {
    let m = model("A1");
    let up = |gens: &[&str], c| UpstairsCycle::from_primes(m.up(), vec![(Ideal::parse(m.up(), gens).unwrap(), c)]).unwrap();
    let x = lifted(&m, &["x", "z"], rng);
    let origin = lifted(&m, &["x", "y", "z"], rng);
    let checks = [
        ("q*X = 1·(u)", pullback(&m, &x).unwrap() == up(&["u"], rat(1, 1))),
        ("q*{0} = 2·(u, v)", pullback(&m, &origin).unwrap() == up(&["u", "v"], rat(2, 1))),
        ("q_*(1·(u, v)) = {0}", pushforward(&m, &up(&["u", "v"], rat(1, 1))).unwrap() == origin),
    ];
    let bad: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    if bad.is_empty() {
        pass(checks.iter().map(|c| c.0).collect::<Vec<_>>().join("; "))
    } else {
        fail(format!("failed: {}", bad.join("; ")))
    }
}

fn criterion_3() -> Outcome {
    let m = model("A1");
    let opts = DescentOptions::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for s in ["dx", "dx/x", "dy/y", "dx*dy/z"] {
        let start = Instant::now();
        let alpha = DiffForm::parse(m.down(), s).unwrap();
        let tr = pullback_form(&m, &alpha).and_then(|w| trace_form(&m, &w, &opts));
        let took = start.elapsed();
        let good = match &tr {
            Ok(t) => forms_equal(&m, t, &alpha.scale(&orbicycle::Scalar::from_int(2))).unwrap() && took < TRACE_LIMIT,
            Err(_) => false,
        };
        ok &= good;
        notes.push(format!("{} {:.3} s", s, took.as_secs_f64()));
    }
    let du_u = DiffForm::parse(m.up(), "du/u").unwrap();
    let dx_x = DiffForm::parse(m.down(), "dx/x").unwrap();
    let t = trace_form(&m, &du_u, &opts).unwrap();
    ok &= forms_equal(&m, &t, &dx_x).unwrap();
    notes.push(format!("Trace(du/u) = {}", t));
    Outcome { ok, detail: notes.join(", ") }
}

fn criterion_4(rng: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let names = ["A1", "A2", "product(A1, trivial-1)", "product(A1, A1)"];
    for name in names {
        let m = model(name);
        let k = rat(m.degree() as i64, 1);
        for _ in 0..ROUND_TRIP_CYCLES {
            let dim = rng.gen_range(0..m.dim());
            let x = random_cycle_with(&m, dim, 3, rng);
            let back = pullback(&m, &x).and_then(|z| pushforward(&m, &z));
            if back.ok() != Some(x.scale(&k).unwrap()) {
                bad.push(format!("{}: {}", name, x));
            }
        }
    }
    let took = start.elapsed();
    let detail = format!("{} cycles on each of {} models in {:.2} s", ROUND_TRIP_CYCLES, names.len(), took.as_secs_f64());
    if bad.is_empty() && took < ROUND_TRIP_LIMIT {
        pass(detail)
    } else {
        fail(format!("{}; mismatches: {}", detail, bad.join(" | ")))
    }
}

/// Random cycles of complementary or smaller codimension that meet properly.
fn proper_pair(m: &Model, rng: &mut ChaCha8Rng) -> Option<(DownstairsCycle, DownstairsCycle)> {
    let n = m.dim();
    let cx = rng.gen_range(1..n);
    let cy = rng.gen_range(1..=n - cx);
    let x = random_cycle(m, n - cx, rng);
    let y = random_cycle(m, n - cy, rng);
    match is_proper(m, &x, &y) {
        Ok(p) if p.proper => Some((x, y)),
        _ => None,
    }
}

fn criterion_5(rng: &mut ChaCha8Rng, audit: &mut Audit) -> Outcome {
    let names = ["A1", "A2", "product(A1, trivial-1)", "product(A2, trivial-1)"];
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut attempts = 0;
    while checked < UPSTAIRS_PAIRS && attempts < 20 * UPSTAIRS_PAIRS {
        attempts += 1;
        let m = model(names[attempts % names.len()]);
        let Some((x, y)) = proper_pair(&m, rng) else { continue };
        checked += 1;
        let lhs = audit.intersect(&m, &x, &y, rng).and_then(|r| pullback(&m, &r));
        let rhs = pullback(&m, &x)
            .and_then(|zx| Ok((zx, pullback(&m, &y)?)))
            .and_then(|(zx, zy)| intersect_upstairs(&zx, &zy, rng))
            .map(|r| r.0);
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => bad.push(format!("{} ∩ {} on {}: {:?} vs {:?}", x, y, m.name(), a.map(|c| c.to_string()), b.map(|c| c.to_string()))),
        }
    }
    let detail = format!("{} proper pairs", checked);
    if bad.is_empty() && checked >= UPSTAIRS_PAIRS {
        pass(detail)
    } else {
        fail(format!("{}; {}", detail, bad.join(" | ")))
    }
}

fn criterion_6(rng: &mut ChaCha8Rng, audit: &mut Audit) -> Outcome {
    let names = ["trivial-3", "product(A1, trivial-1)"];
    let mut pairs = 0;
    let mut triples = 0;
    let mut bad = Vec::new();
    let mut attempts = 0;
    while pairs < COMMUTATIVE_PAIRS && attempts < 20 * COMMUTATIVE_PAIRS {
        attempts += 1;
        let m = model(names[attempts % 2]);
        let Some((x, y)) = proper_pair(&m, rng) else { continue };
        pairs += 1;
        let a = audit.intersect(&m, &x, &y, rng);
        let b = audit.intersect(&m, &y, &x, rng);
        if !matches!((&a, &b), (Ok(a), Ok(b)) if a == b) {
            bad.push(format!("{} vs {} on {}", x, y, m.name()));
        }
    }
    attempts = 0;
    while triples < ASSOCIATIVE_TRIPLES && attempts < 40 * ASSOCIATIVE_TRIPLES {
        attempts += 1;
        let m = model(names[attempts % 2]);
        let [x, y, w] = [0, 1, 2].map(|_| random_cycle(&m, 2, rng));
        let proper = |a: &DownstairsCycle, b: &DownstairsCycle| is_proper(&m, a, b).map(|p| p.proper).unwrap_or(false);
        if !proper(&x, &y) || !proper(&y, &w) {
            continue;
        }
        let (Ok(xy), Ok(yw)) = (audit.intersect(&m, &x, &y, rng), audit.intersect(&m, &y, &w, rng)) else {
            bad.push(format!("pair failed in ({}, {}, {})", x, y, w));
            continue;
        };
        if !proper(&xy, &w) || !proper(&x, &yw) {
            continue;
        }
        triples += 1;
        let l = audit.intersect(&m, &xy, &w, rng);
        let r = audit.intersect(&m, &x, &yw, rng);
        if !matches!((&l, &r), (Ok(l), Ok(r)) if l == r) {
            bad.push(format!("({} · {}) · {} on {}", x, y, w, m.name()));
        }
    }
    let detail = format!("{} commuting pairs, {} associative triples", pairs, triples);
    if bad.is_empty() && pairs >= COMMUTATIVE_PAIRS && triples >= ASSOCIATIVE_TRIPLES {
        pass(detail)
    } else {
        fail(format!("{}; {}", detail, bad.join(" | ")))
    }
}

fn projection_holds(f: &ModelMap, x: &DownstairsCycle, y: &DownstairsCycle, rng: &mut ChaCha8Rng, audit: &mut Audit) -> Result<bool> {
    let xfy = f_product(f, x, y, rng)?.cycle;
    if integral(x) && integral(y) {
        audit.outputs.push((f.source().clone(), xfy.clone()));
    }
    let lhs = pushforward_along_map(f, &xfy, rng)?;
    let fx = pushforward_along_map(f, x, rng)?;
    let rhs = audit.intersect(f.target(), &fx, y, rng)?;
    Ok(lhs == rhs)
}

fn criterion_7(rng: &mut ChaCha8Rng, audit: &mut Audit) -> Outcome {
    let mut instances: Vec<(ModelMap, DownstairsCycle, DownstairsCycle)> = Vec::new();
    let t1 = model("trivial-1");
    let square = ModelMap::parse(&t1, &t1, &["t^2"]).unwrap();
    let line = DownstairsCycle::from_prime(&t1, &Ideal::zero(t1.up()), rat(1, 1)).unwrap();
    for b in ["t", "t - 1", "t - 4", "t + 1", "t - 2"] {
        instances.push((square.clone(), line.clone(), cyc(&t1, &[b], rat(1, 1))));
    }
    for a in ["t", "t - 1", "t - 3"] {
        instances.push((square.clone(), cyc(&t1, &[a], rat(1, 1)), line.clone()));
    }
    let p = model("product(A1, trivial-1)");
    let a1 = model("A1");
    let proj = ModelMap::parse(&p, &a1, &["u", "v"]).unwrap();
    let mut found = 0;
    while found < 4 {
        // curves that are graphs over a line in the (u, v)-plane
        let x = random_cycle(&p, 1, rng);
        if x.terms().keys().any(|o| o.representative().basis().iter().all(|g| !g.uses_var(2) && g.total_degree() == Some(1))) {
            continue;
        }
        let y = random_cycle(&a1, 1, rng);
        let proper = pullback_along_map(&proj, &y, rng).and_then(|fy| is_proper(&p, &x, &fy)).map(|q| q.proper);
        if proper.ok() != Some(true) {
            continue;
        }
        instances.push((proj.clone(), x, y));
        found += 1;
    }
    let norm = ModelMap::parse(&a1, &t1, &["u*v"]).unwrap();
    for (x, b) in [(["u - v - 1"], "t - 2"), (["u + 2*v"], "t + 2")] {
        instances.push((norm.clone(), cyc(&a1, &x, rat(1, 1)), cyc(&t1, &[b], rat(1, 1))));
    }
    let mut ok_count = 0;
    let mut bad = Vec::new();
    for (f, x, y) in &instances {
        match projection_holds(f, x, y, rng, audit) {
            Ok(true) => ok_count += 1,
            Ok(false) => bad.push(format!("{} → {}: X = {}, Y = {} differ", f.source().name(), f.target().name(), x, y)),
            Err(e) => bad.push(format!("{} → {}: X = {}, Y = {}: {}", f.source().name(), f.target().name(), x, y, e)),
        }
    }
    let detail = format!("{}/{} instances", ok_count, instances.len());
    if bad.is_empty() && ok_count >= PROJECTION_INSTANCES {
        pass(detail)
    } else {
        fail(format!("{}; {}", detail, bad.join(" | ")))
    }
}

fn criterion_8(rng: &mut ChaCha8Rng, audit: &mut Audit) -> Outcome {
    let m = model("product(A1, trivial-1)");
    let a1 = model("A1");
    let inc = ModelMap::parse(&a1, &m, &["u", "v", "0"]).unwrap();
    let p = cyc(&m, &["t"], rat(1, 1));
    let mut done = 0;
    let mut bad = Vec::new();
    let mut attempts = 0;
    while done < RESTRICTION_INSTANCES && attempts < 50 {
        attempts += 1;
        let x = random_cycle(&a1, 1, rng);
        let y = random_cycle(&m, 2, rng);
        let Ok(xm) = pushforward_along_map(&inc, &x, rng) else { continue };
        if !is_proper(&m, &xm, &y).map(|q| q.proper).unwrap_or(false) || !is_proper(&m, &p, &y).map(|q| q.proper).unwrap_or(false) {
            continue;
        }
        let run = |audit: &mut Audit, rng: &mut ChaCha8Rng| -> Result<bool> {
            let lhs = audit.intersect(&m, &xm, &y, rng)?;
            let py = pullback_along_map(&inc, &y, rng)?;
            let same_slice = audit.intersect(&m, &p, &y, rng)? == pushforward_along_map(&inc, &py, rng)?;
            let inner = audit.intersect(&a1, &x, &py, rng)?;
            Ok(same_slice && lhs == pushforward_along_map(&inc, &inner, rng)?)
        };
        done += 1;
        match run(audit, rng) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("X = {}, Y = {} differ", x, y)),
            Err(e) => bad.push(format!("X = {}, Y = {}: {}", x, y, e)),
        }
    }
    let detail = format!("{} instances", done);
    if bad.is_empty() && done >= RESTRICTION_INSTANCES {
        pass(detail)
    } else {
        fail(format!("{}; {}", detail, bad.join(" | ")))
    }
}

fn criterion_9(rng: &mut ChaCha8Rng, audit: &mut Audit) -> Outcome {
    let m = model("A1");
    let fx = CycleFamily::orbit_of(&m, "s", &["u"], rat(1, 1)).unwrap();
    let fy = CycleFamily::orbit_of(&m, "s", &["v - s"], rat(1, 1)).unwrap();
    let samples: Vec<BigRational> = (0..4).map(|s| rat(s, 1)).collect();
    let report = conservation_check(&fx, &fy, None, &samples, rng).unwrap();
    for s in &samples {
        if let (Ok(x), Ok(y)) = (fx.specialize(s, rng), fy.specialize(s, rng)) {
            let _ = audit.intersect(&m, &x, &y, rng);
        }
    }
    let totals: Vec<String> = report.totals().iter().map(|t| t.as_ref().map_or("error".into(), |v| v.to_string())).collect();
    let detail = format!("totals at s = 0..3: {}", totals.join(", "));
    if report.conserved() && report.totals().iter().all(|t| t.as_ref() == Some(&rat(1, 1))) {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn criterion_10(audit: &Audit) -> Outcome {
    let bad: Vec<String> = audit
        .outputs
        .iter()
        .filter(|(m, c)| !condition_d(m, c))
        .map(|(m, c)| format!("{} on {}", c, m.name()))
        .collect();
    let detail = format!("{} intersection outputs audited", audit.outputs.len());
    if bad.is_empty() && !audit.outputs.is_empty() {
        pass(detail)
    } else {
        fail(format!("{}; {}", detail, bad.join(" | ")))
    }
}

fn criterion_11(rng: &mut ChaCha8Rng) -> Outcome {
    let m = model("A1");
    let n = m.norm_polynomial(&MultiPoly::var(m.up(), 0)).unwrap();
    let x = lifted(&m, &["x", "z"], rng);
    match divisor(&m, &n, rng) {
        Ok(d) if d == x.scale(&rat(2, 1)).unwrap() => pass(format!("div({}) = {}", n, d)),
        Ok(d) => fail(format!("div({}) = {}", n, d)),
        Err(e) => fail(e.to_string()),
    }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20261015);
    let mut audit = Audit::default();
    let results = [
        ("coordinate lines on A1", criterion_1(&mut rng, &mut audit)),
        ("pull-back and push-forward steps", criterion_2(&mut rng)),
        ("trace identities", criterion_3()),
        ("q_* q^* = k", criterion_4(&mut rng)),
        ("upstairs compatibility", criterion_5(&mut rng, &mut audit)),
        ("commutativity and associativity", criterion_6(&mut rng, &mut audit)),
        ("projection formula", criterion_7(&mut rng, &mut audit)),
        ("restriction to A1 x {0}", criterion_8(&mut rng, &mut audit)),
        ("conservation of number", criterion_9(&mut rng, &mut audit)),
    ];
    let mut all = Vec::from(results);
    all.push(("positivity and condition (D)", criterion_10(&audit)));
    all.push(("norm divisor", criterion_11(&mut rng)));
    let mut failed = 0;
    for (i, (name, o)) in all.iter().enumerate() {
        println!("criterion {:>2} [{}] {}: {}", i + 1, if o.ok { "PASS" } else { "FAIL" }, name, o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {} failed", all.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
