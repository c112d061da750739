//! Executes the commands of a scene in order.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::{CommandReport, Report, Status};
use crate::scene::{Check, CycleTerm, FamilyBody, FamilyTerm, Op, Scene};
use orbicycle::cycle::{
    conservation_check, divisor, f_product, intersect_model, intersect_upstairs, is_proper, lift_downstairs, pullback,
    pullback_along_map, pushforward, pushforward_along_map, FamilyComponent,
};
use orbicycle::forms::{forms_equal, pullback_form, trace_form, verify_direct_factor, DescentOptions};
use orbicycle::poly::decompose;
use orbicycle::{CycleFamily, DownstairsCycle, Error, Model, MultiPoly, Result, Scalar};

type Fields = BTreeMap<String, Value>;

struct Runner<'s> {
    scene: &'s Scene,
    rng: ChaCha8Rng,
    cycles: BTreeMap<String, DownstairsCycle>,
    families: BTreeMap<String, CycleFamily>,
    descent_bound: usize,
    denominators: BTreeMap<String, Vec<MultiPoly>>,
    warnings: BTreeSet<String>,
}

/// Run every command of the scene with a generator seeded by `seed`.
pub fn run(scene: &Scene, seed: u64) -> Report {
    let mut r = Runner {
        scene,
        rng: ChaCha8Rng::seed_from_u64(seed),
        cycles: BTreeMap::new(),
        families: BTreeMap::new(),
        descent_bound: DescentOptions::default().degree_bound,
        denominators: BTreeMap::new(),
        warnings: BTreeSet::new(),
    };
    for m in scene.models.values() {
        r.warnings.extend(m.warnings());
    }
    let mut commands = Vec::new();
    for (i, c) in scene.commands.iter().enumerate() {
        let (status, fields) = match r.execute(&c.op) {
            Ok((status, mut fields, cycle)) => {
                if let (Some(name), Some(z)) = (&c.bind, cycle) {
                    fields.insert("bound".into(), Value::String(name.clone()));
                    r.cycles.insert(name.clone(), z);
                }
                (status, fields)
            }
            Err(e) => (Status::Error, error_fields(&e)),
        };
        commands.push(CommandReport { index: i + 1, line: c.line, command: c.text.clone(), status, fields });
    }
    Report {
        seed,
        budget: scene.budget,
        field: Some(scene.field.to_string()),
        warnings: r.warnings.into_iter().collect(),
        commands,
        scene_error: None,
    }
}

fn error_value(e: &Error) -> Value {
    json!({"kind": e.kind(), "message": e.to_string()})
}

fn error_fields(e: &Error) -> Fields {
    let mut f = Fields::new();
    f.insert("error".into(), error_value(e));
    f
}

fn cycle_value(z: &DownstairsCycle) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("cycle".into(), Value::String(z.to_string()));
    m.insert("dimension".into(), z.dimension().map_or(Value::Null, |d| json!(d)));
    if z.dimension() == Some(0) {
        if let Ok(d) = z.degree() {
            m.insert("degree".into(), Value::String(d.to_string()));
        }
    }
    Value::Object(m)
}

fn cycle_fields(z: &DownstairsCycle) -> Fields {
    match cycle_value(z) {
        Value::Object(m) => m.into_iter().collect(),
        _ => unreachable!(),
    }
}

fn verdict(passed: bool, mut fields: Fields, counterexample: impl FnOnce() -> Value) -> (Status, Fields) {
    if passed {
        (Status::Pass, fields)
    } else {
        fields.insert("counterexample".into(), counterexample());
        (Status::Fail, fields)
    }
}

fn rat(n: usize) -> BigRational {
    BigRational::from_integer((n as i64).into())
}

type Outcome = Result<(Status, Fields, Option<DownstairsCycle>)>;

impl<'s> Runner<'s> {
    fn model(&self, name: &str) -> Model {
        self.scene.models[name].clone()
    }

    fn descent(&self, model: &str) -> DescentOptions {
        DescentOptions {
            degree_bound: self.descent_bound,
            extra_denominators: self.denominators.get(model).cloned().unwrap_or_default(),
        }
    }

    fn cycle(&mut self, name: &str) -> Result<DownstairsCycle> {
        if let Some(z) = self.cycles.get(name) {
            return Ok(z.clone());
        }
        let decl = self.scene.cycles.iter().find(|d| d.name == name).expect("names are checked when parsing");
        let model = self.model(&decl.model);
        let mut z = DownstairsCycle::zero(&model);
        for t in &decl.terms {
            match t {
                CycleTerm::Up { coeff, ideal } => match decompose(ideal, &[], &mut self.rng) {
                    Ok(parts) => {
                        if parts.is_empty() {
                            return Err(Error::InvalidCycle(format!("{} has no zeros", ideal)));
                        }
                        for c in parts {
                            let o = orbicycle::cycle::OrbitClass::of(&model, &c.prime.to_ideal())?;
                            z.add_orbit(o, coeff * rat(c.multiplicity as usize))?;
                        }
                    }
                    Err(Error::UnsupportedShape(_)) => {
                        self.warnings.insert(format!("cycle {} (line {}): {} is taken to be prime without a certificate", name, decl.line, ideal));
                        z.add_orbit(orbicycle::cycle::OrbitClass::of(&model, ideal)?, coeff.clone())?;
                    }
                    Err(e) => return Err(e),
                },
                CycleTerm::Down { coeff, ideal } => {
                    let o = lift_downstairs(&model, ideal, &mut self.rng)?;
                    z.add_orbit(o, coeff.clone())?;
                }
            }
        }
        self.cycles.insert(name.to_string(), z.clone());
        Ok(z)
    }

    fn family(&mut self, name: &str) -> Result<CycleFamily> {
        if let Some(f) = self.families.get(name) {
            return Ok(f.clone());
        }
        let decl = self.scene.families.iter().find(|d| d.name == name).expect("names are checked when parsing");
        let model = self.model(&decl.model);
        let fam = match &decl.body {
            FamilyBody::Constant(x) => CycleFamily::constant(&self.cycle(x)?)?,
            FamilyBody::Terms(terms) => {
                let mut comps = Vec::new();
                for t in terms {
                    match t {
                        FamilyTerm::Orbit { coeff, gens } => {
                            let g: Vec<&str> = gens.iter().map(String::as_str).collect();
                            comps.extend(CycleFamily::orbit_of(&model, &decl.param, &g, coeff.clone())?.components().to_vec());
                        }
                        FamilyTerm::Prime { coeff, gens } => comps.push(FamilyComponent { gens: gens.clone(), coeff: coeff.clone() }),
                    }
                }
                CycleFamily::new(&model, &decl.param, comps)?
            }
        };
        self.families.insert(name.to_string(), fam.clone());
        Ok(fam)
    }

    fn intersect(&mut self, model: &Model, x: &DownstairsCycle, y: &DownstairsCycle) -> Result<(DownstairsCycle, Vec<String>)> {
        let r = intersect_model(model, x, y, &mut self.rng)?;
        self.warnings.extend(r.warnings.iter().cloned());
        Ok((r.cycle, r.warnings))
    }

    fn execute(&mut self, op: &Op) -> Outcome {
        let scene = self.scene;
        Ok(match op {
            Op::Show(x) => {
                let z = self.cycle(x)?;
                (Status::Ok, cycle_fields(&z), Some(z))
            }
            Op::Pullback(x) => {
                let z = self.cycle(x)?;
                let up = pullback(z.model(), &z)?;
                let mut f = Fields::new();
                f.insert("upstairs".into(), Value::String(up.to_string()));
                (Status::Ok, f, None)
            }
            Op::Roundtrip(x) => {
                let z = self.cycle(x)?;
                let back = pushforward(z.model(), &pullback(z.model(), &z)?)?;
                (Status::Ok, cycle_fields(&back), Some(back))
            }
            Op::Intersect(x, y) => {
                let (a, b) = (self.cycle(x)?, self.cycle(y)?);
                let (z, warnings) = self.intersect(&a.model().clone(), &a, &b)?;
                let mut f = cycle_fields(&z);
                f.insert("warnings".into(), json!(warnings));
                (Status::Ok, f, Some(z))
            }
            Op::Proper(x, y) => {
                let (a, b) = (self.cycle(x)?, self.cycle(y)?);
                let p = is_proper(a.model(), &a, &b)?;
                let mut f = Fields::new();
                f.insert("proper".into(), json!(p.proper));
                f.insert("codim_x".into(), json!(p.codim_x));
                f.insert("codim_y".into(), json!(p.codim_y));
                f.insert("intersection_dimension".into(), p.intersection_dim.map_or(Value::Null, |d| json!(d)));
                (Status::Ok, f, None)
            }
            Op::FProduct(m, x, y) => {
                let (a, b) = (self.cycle(x)?, self.cycle(y)?);
                let r = f_product(&scene.maps[m], &a, &b, &mut self.rng)?;
                self.warnings.extend(r.warnings.iter().cloned());
                (Status::Ok, cycle_fields(&r.cycle), Some(r.cycle))
            }
            Op::Push(m, x) => {
                let a = self.cycle(x)?;
                let z = pushforward_along_map(&scene.maps[m], &a, &mut self.rng)?;
                (Status::Ok, cycle_fields(&z), Some(z))
            }
            Op::Pull(m, y) => {
                let b = self.cycle(y)?;
                let z = pullback_along_map(&scene.maps[m], &b, &mut self.rng)?;
                (Status::Ok, cycle_fields(&z), Some(z))
            }
            Op::Divisor(m, h) => {
                let z = divisor(&self.model(m), h, &mut self.rng)?;
                (Status::Ok, cycle_fields(&z), Some(z))
            }
            Op::Specialize(fam, s) => {
                let z = self.family(fam)?.specialize(s, &mut self.rng)?;
                (Status::Ok, cycle_fields(&z), Some(z))
            }
            Op::Conservation { x, y, samples, via } => {
                let (status, f) = self.conservation(x, y, samples, via.as_deref(), false)?;
                (status, f, None)
            }
            Op::Trace(m, omega) => {
                let model = self.model(m);
                let t = trace_form(&model, omega, &self.descent(m))?;
                let mut f = Fields::new();
                f.insert("trace".into(), Value::String(t.to_string()));
                (Status::Ok, f, None)
            }
            Op::PullForm(m, alpha) => {
                let p = pullback_form(&self.model(m), alpha)?;
                let mut f = Fields::new();
                f.insert("pullback".into(), Value::String(p.to_string()));
                (Status::Ok, f, None)
            }
            Op::SetDescentBound(n) => {
                self.descent_bound = *n;
                let mut f = Fields::new();
                f.insert("descent_bound".into(), json!(n));
                (Status::Ok, f, None)
            }
            Op::SetDenominators(m, dens) => {
                self.denominators.insert(m.clone(), dens.clone());
                let mut f = Fields::new();
                f.insert("denominators".into(), json!(dens.iter().map(|d| d.to_string()).collect::<Vec<_>>()));
                (Status::Ok, f, None)
            }
            Op::Verify(check) => {
                let (status, f) = match self.verify(check) {
                    Err(e @ Error::NotProper(_)) => {
                        let mut f = Fields::new();
                        f.insert("counterexample".into(), error_value(&e));
                        (Status::Fail, f)
                    }
                    other => other?,
                };
                (status, f, None)
            }
        })
    }

    fn conservation(&mut self, x: &str, y: &str, samples: &[BigRational], via: Option<&str>, strict: bool) -> Result<(Status, Fields)> {
        let fx = self.family(x)?;
        let fy = self.family(y)?;
        let map = via.map(|m| &self.scene.maps[m]);
        let report = conservation_check(&fx, &fy, map, samples, &mut self.rng)?;
        let rows: Vec<Value> = report
            .samples
            .iter()
            .map(|(s, r)| match r {
                Ok(t) => json!({"parameter": s.to_string(), "total": t.to_string()}),
                Err(e) => json!({"error": error_value(e), "parameter": s.to_string()}),
            })
            .collect();
        let mut f = Fields::new();
        f.insert("samples".into(), Value::Array(rows));
        f.insert("conserved".into(), json!(report.conserved()));
        if !strict {
            return Ok((Status::Ok, f));
        }
        let conserved = report.conserved();
        Ok(verdict(conserved, f, || json!("the totals differ between samples")))
    }

    fn verify(&mut self, check: &Check) -> Result<(Status, Fields)> {
        Ok(match check {
            Check::Roundtrip(x) => {
                let z = self.cycle(x)?;
                let m = z.model().clone();
                let back = pushforward(&m, &pullback(&m, &z)?)?;
                let expected = z.scale(&rat(m.degree()))?;
                let mut f = Fields::new();
                f.insert("result".into(), Value::String(back.to_string()));
                let ok = back == expected;
                verdict(ok, f, || json!({"expected": expected.to_string()}))
            }
            Check::Upstairs(x, y) => {
                let (a, b) = (self.cycle(x)?, self.cycle(y)?);
                let m = a.model().clone();
                let (z, _) = self.intersect(&m, &a, &b)?;
                let lhs = pullback(&m, &z)?;
                let (rhs, _) = intersect_upstairs(&pullback(&m, &a)?, &pullback(&m, &b)?, &mut self.rng)?;
                let mut f = Fields::new();
                f.insert("pullback".into(), Value::String(lhs.to_string()));
                let ok = lhs == rhs;
                verdict(ok, f, || json!({"upstairs": rhs.to_string()}))
            }
            Check::Commutative(x, y) => {
                let (a, b) = (self.cycle(x)?, self.cycle(y)?);
                let m = a.model().clone();
                let (xy, _) = self.intersect(&m, &a, &b)?;
                let (yx, _) = self.intersect(&m, &b, &a)?;
                let mut f = Fields::new();
                f.insert("result".into(), Value::String(xy.to_string()));
                let ok = xy == yx;
                verdict(ok, f, || json!({"reversed": yx.to_string()}))
            }
            Check::Associative(x, y, w) => {
                let (a, b, c) = (self.cycle(x)?, self.cycle(y)?, self.cycle(w)?);
                let m = a.model().clone();
                let (ab, _) = self.intersect(&m, &a, &b)?;
                let (left, _) = self.intersect(&m, &ab, &c)?;
                let (bc, _) = self.intersect(&m, &b, &c)?;
                let (right, _) = self.intersect(&m, &a, &bc)?;
                let mut f = Fields::new();
                f.insert("result".into(), Value::String(left.to_string()));
                let ok = left == right;
                verdict(ok, f, || json!({"regrouped": right.to_string()}))
            }
            Check::Positivity(x, y) => {
                let (a, b) = (self.cycle(x)?, self.cycle(y)?);
                let m = a.model().clone();
                let (z, _) = self.intersect(&m, &a, &b)?;
                let integral_inputs = a.is_integral() && b.is_integral();
                let k = rat(m.degree());
                let positive = z.coefficients().all(|c| c.is_positive());
                let bounded = !integral_inputs || z.coefficients().all(|c| (c * &k).is_integer());
                let mut f = cycle_fields(&z);
                f.insert("integral_inputs".into(), json!(integral_inputs));
                verdict(positive && bounded, f, || {
                    json!(if positive { "k times a coefficient is not an integer" } else { "a coefficient is not positive" })
                })
            }
            Check::Projection(fm, x, y) => {
                let map = &self.scene.maps[fm];
                let (a, b) = (self.cycle(x)?, self.cycle(y)?);
                let prod = f_product(map, &a, &b, &mut self.rng)?;
                let lhs = pushforward_along_map(map, &prod.cycle, &mut self.rng)?;
                let fx = pushforward_along_map(map, &a, &mut self.rng)?;
                let (rhs, _) = self.intersect(&map.target().clone(), &fx, &b)?;
                let mut f = Fields::new();
                f.insert("result".into(), Value::String(lhs.to_string()));
                let ok = lhs == rhs;
                verdict(ok, f, || json!({"pushforward_then_intersect": rhs.to_string()}))
            }
            Check::Conservation { x, y, samples, via } => self.conservation(x, y, samples, via.as_deref(), true)?,
            Check::Trace(m, alpha) => {
                let model = self.model(m);
                let t = trace_form(&model, &pullback_form(&model, alpha)?, &self.descent(m))?;
                let expected = alpha.scale(&Scalar::from_int(model.degree() as i64));
                let mut f = Fields::new();
                f.insert("trace".into(), Value::String(t.to_string()));
                let ok = forms_equal(&model, &t, &expected)?;
                verdict(ok, f, || json!({"expected": expected.to_string()}))
            }
            Check::DirectFactor(m, forms) => {
                let model = self.model(m);
                let checks = verify_direct_factor(&model, forms, &self.descent(m))?;
                let rows: Vec<Value> = checks
                    .iter()
                    .map(|c| json!({"form": c.alpha.to_string(), "passed": c.passed, "trace": c.trace.to_string()}))
                    .collect();
                let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.alpha.to_string()).collect();
                let mut f = Fields::new();
                f.insert("samples".into(), Value::Array(rows));
                verdict(failed.is_empty(), f, || json!(failed))
            }
        })
    }
}
