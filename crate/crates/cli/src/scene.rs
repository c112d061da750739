//! Scene files: a line-oriented description of models, cycles, maps,
//! families and the commands to run on them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use orbicycle::cycle::CycleFamily;
use orbicycle::poly::{parse_expr, Expr};
use orbicycle::quotient::{self, DEFAULT_AUDIT_BOUND};
use orbicycle::{BaseField, Budget, DiffForm, Error, FiniteMatrixGroup, Ideal, LocalModel, Matrix, Model, ModelMap, MultiPoly, PolyRing, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SceneErrorKind {
    Parse,
    Name,
    Chart,
}

impl SceneErrorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SceneErrorKind::Parse => "ParseError",
            SceneErrorKind::Name => "NameError",
            SceneErrorKind::Chart => "ChartError",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct SceneError {
    pub kind: SceneErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SceneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at line {}, column {}: {}", self.kind.as_str(), self.line, self.column, self.message)
    }
}

type SResult<T> = std::result::Result<T, SceneError>;

/// One summand of a declared cycle.
#[derive(Clone, Debug)]
pub enum CycleTerm {
    /// `c · q(V(I))` for an upstairs ideal, split into its components.
    Up { coeff: BigRational, ideal: Ideal },
    /// `c · V(J)` for a downstairs prime, lifted to an orbit.
    Down { coeff: BigRational, ideal: Ideal },
}

#[derive(Clone, Debug)]
pub struct CycleDecl {
    pub name: String,
    pub model: String,
    pub line: usize,
    pub terms: Vec<CycleTerm>,
}

#[derive(Clone, Debug)]
pub enum FamilyTerm {
    /// Sum over the group orbit of `V(gens)`.
    Orbit { coeff: BigRational, gens: Vec<String> },
    /// A single prime of the family ring.
    Prime { coeff: BigRational, gens: Vec<MultiPoly> },
}

#[derive(Clone, Debug)]
pub enum FamilyBody {
    Constant(String),
    Terms(Vec<FamilyTerm>),
}

#[derive(Clone, Debug)]
pub struct FamilyDecl {
    pub name: String,
    pub model: String,
    pub param: String,
    pub line: usize,
    pub body: FamilyBody,
}

#[derive(Clone, Debug)]
pub enum Check {
    Roundtrip(String),
    Upstairs(String, String),
    Commutative(String, String),
    Associative(String, String, String),
    Positivity(String, String),
    Projection(String, String, String),
    Conservation { x: String, y: String, samples: Vec<BigRational>, via: Option<String> },
    Trace(String, DiffForm),
    DirectFactor(String, Vec<DiffForm>),
}

#[derive(Clone, Debug)]
pub enum Op {
    Show(String),
    Pullback(String),
    Roundtrip(String),
    Intersect(String, String),
    Proper(String, String),
    FProduct(String, String, String),
    Push(String, String),
    Pull(String, String),
    Divisor(String, MultiPoly),
    Specialize(String, BigRational),
    Conservation { x: String, y: String, samples: Vec<BigRational>, via: Option<String> },
    Trace(String, DiffForm),
    PullForm(String, DiffForm),
    SetDescentBound(usize),
    SetDenominators(String, Vec<MultiPoly>),
    Verify(Check),
}

impl Op {
    /// Whether the command produces a cycle that can be bound to a name.
    pub fn yields_cycle(&self) -> bool {
        matches!(
            self,
            Op::Show(_)
                | Op::Roundtrip(_)
                | Op::Intersect(..)
                | Op::FProduct(..)
                | Op::Push(..)
                | Op::Pull(..)
                | Op::Divisor(..)
                | Op::Specialize(..)
        )
    }
}

#[derive(Clone, Debug)]
pub struct Command {
    pub line: usize,
    pub text: String,
    pub bind: Option<String>,
    pub op: Op,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Model,
    Cycle,
    Map,
    Family,
}

impl Kind {
    fn noun(self) -> &'static str {
        match self {
            Kind::Model => "model",
            Kind::Cycle => "cycle",
            Kind::Map => "map",
            Kind::Family => "family",
        }
    }
}

/// A parsed and checked scene. Models and maps are built eagerly; cycles and
/// families are materialized when a command first needs them.
#[derive(Clone, Debug)]
pub struct Scene {
    pub field: BaseField,
    pub budget: Budget,
    pub models: BTreeMap<String, Model>,
    pub maps: BTreeMap<String, ModelMap>,
    pub cycles: Vec<CycleDecl>,
    pub families: Vec<FamilyDecl>,
    pub commands: Vec<Command>,
    /// Model of every cycle name, including names bound by commands.
    pub cycle_models: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    None,
    Field,
    Model,
    Cycle,
    Map,
    Family,
    Run,
}

/// A piece of a line with the 1-based character column where it starts.
#[derive(Clone, Copy, Debug)]
struct Span<'a> {
    text: &'a str,
    col: usize,
}

impl<'a> Span<'a> {
    fn trim(self) -> Span<'a> {
        let lead = self.text.len() - self.text.trim_start().len();
        let col = self.col + self.text[..lead].chars().count();
        Span { text: self.text.trim(), col }
    }

    fn slice(self, from: usize, to: usize) -> Span<'a> {
        Span { text: &self.text[from..to], col: self.col + self.text[..from].chars().count() }
    }

    fn split_once(self, pat: &str) -> Option<(Span<'a>, Span<'a>)> {
        let i = find_top(self.text, pat)?;
        Some((self.slice(0, i).trim(), self.slice(i + pat.len(), self.text.len()).trim()))
    }

    /// Split at top-level occurrences of `delim` (outside brackets).
    fn split_top(self, delim: char) -> Vec<Span<'a>> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, c) in self.text.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ if c == delim && depth == 0 => {
                    out.push(self.slice(start, i).trim());
                    start = i + c.len_utf8();
                }
                _ => {}
            }
        }
        out.push(self.slice(start, self.text.len()).trim());
        out
    }

    /// `name(inner)` covering the whole span.
    fn call(self, name: &str) -> Option<Span<'a>> {
        let rest = self.text.strip_prefix(name)?.trim_start();
        if !rest.starts_with('(') || !self.text.ends_with(')') {
            return None;
        }
        let open = self.text.len() - rest.len();
        if matching_close(self.text, open)? != self.text.len() - 1 {
            return None;
        }
        Some(self.slice(open + 1, self.text.len() - 1).trim())
    }

    fn first_word(self) -> (Span<'a>, Span<'a>) {
        let end = self.text.find(char::is_whitespace).unwrap_or(self.text.len());
        (self.slice(0, end), self.slice(end, self.text.len()).trim())
    }
}

fn find_top(s: &str, pat: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && s[i..].starts_with(pat) {
            return Some(i);
        }
    }
    None
}

fn matching_close(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s[open..].char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i);
                }
            }
            _ => {}
        }
    }
    None
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '\'')
}

fn word_column(span: Span, word: &str) -> usize {
    let bytes = span.text.as_bytes();
    let ident = |b: u8| b.is_ascii_alphanumeric() || b == b'_';
    let mut from = 0;
    while let Some(i) = span.text[from..].find(word).map(|i| i + from) {
        let end = i + word.len();
        let before = i == 0 || !ident(bytes[i - 1]);
        let after = end >= bytes.len() || !ident(bytes[end]);
        if before && after {
            return span.col + span.text[..i].chars().count();
        }
        from = end;
    }
    span.col
}

struct Parser {
    field: BaseField,
    field_line: Option<usize>,
    budget: Budget,
    names: BTreeMap<String, Kind>,
    models: BTreeMap<String, Model>,
    maps: BTreeMap<String, ModelMap>,
    cycles: Vec<CycleDecl>,
    families: Vec<FamilyDecl>,
    family_models: BTreeMap<String, (String, String)>,
    commands: Vec<Command>,
    cycle_models: BTreeMap<String, String>,
    line: usize,
}

/// Parse with the default effort budget.
pub fn parse_scene(text: &str) -> SResult<Scene> {
    parse_scene_with(text, Budget::default())
}

/// Parse a scene, building its models with the given effort budget.
pub fn parse_scene_with(text: &str, budget: Budget) -> SResult<Scene> {
    let mut p = Parser {
        field: BaseField::Rationals,
        field_line: None,
        budget,
        names: BTreeMap::new(),
        models: BTreeMap::new(),
        maps: BTreeMap::new(),
        cycles: Vec::new(),
        families: Vec::new(),
        family_models: BTreeMap::new(),
        commands: Vec::new(),
        cycle_models: BTreeMap::new(),
        line: 0,
    };
    let mut section = Section::None;
    for (i, raw) in text.lines().enumerate() {
        p.line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let span = Span { text: content, col: 1 }.trim();
        if span.text.is_empty() {
            continue;
        }
        if let Some(inner) = span.text.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = match inner.trim() {
                "field" => Section::Field,
                "model" => Section::Model,
                "cycle" => Section::Cycle,
                "map" => Section::Map,
                "family" => Section::Family,
                "run" => Section::Run,
                other => return Err(p.err(SceneErrorKind::Parse, span.col, format!("unknown section [{}]", other))),
            };
            continue;
        }
        match section {
            Section::None => return Err(p.err(SceneErrorKind::Parse, span.col, "entry outside of any section")),
            Section::Field => p.field_entry(span)?,
            Section::Model => p.model_entry(span)?,
            Section::Cycle => p.cycle_entry(span)?,
            Section::Map => p.map_entry(span)?,
            Section::Family => p.family_entry(span)?,
            Section::Run => p.command(span)?,
        }
    }
    Ok(Scene {
        field: p.field,
        budget: p.budget,
        models: p.models,
        maps: p.maps,
        cycles: p.cycles,
        families: p.families,
        commands: p.commands,
        cycle_models: p.cycle_models,
    })
}

impl Parser {
    fn err(&self, kind: SceneErrorKind, column: usize, message: impl Into<String>) -> SceneError {
        SceneError { kind, line: self.line, column, message: message.into() }
    }

    fn parse_err(&self, span: Span, message: impl Into<String>) -> SceneError {
        self.err(SceneErrorKind::Parse, span.col, message)
    }

    fn engine_err(&self, span: Span, e: Error) -> SceneError {
        match e {
            Error::Parse { message, column } => self.err(SceneErrorKind::Parse, span.col + column.saturating_sub(1), message),
            Error::UnknownVariable(v) => {
                self.err(SceneErrorKind::Chart, word_column(span, &v), format!("'{}' is not a coordinate of this chart", v))
            }
            other => self.err(SceneErrorKind::Chart, span.col, format!("{}: {}", other.kind(), other)),
        }
    }

    fn declare(&mut self, span: Span, kind: Kind) -> SResult<String> {
        if !is_name(span.text) {
            return Err(self.parse_err(span, format!("'{}' is not a valid name", span.text)));
        }
        if let Some(k) = self.names.get(span.text) {
            return Err(self.err(
                SceneErrorKind::Name,
                span.col,
                format!("duplicate name '{}' (already declared as a {})", span.text, k.noun()),
            ));
        }
        self.names.insert(span.text.to_string(), kind);
        Ok(span.text.to_string())
    }

    fn lookup(&self, span: Span, kind: Kind) -> SResult<String> {
        match self.names.get(span.text) {
            Some(k) if *k == kind => Ok(span.text.to_string()),
            Some(k) => Err(self.err(
                SceneErrorKind::Name,
                span.col,
                format!("'{}' is a {}, expected a {}", span.text, k.noun(), kind.noun()),
            )),
            None => Err(self.err(SceneErrorKind::Name, span.col, format!("undefined {} '{}'", kind.noun(), span.text))),
        }
    }

    fn model(&self, span: Span) -> SResult<Model> {
        let name = self.lookup(span, Kind::Model)?;
        Ok(self.models[&name].clone())
    }

    fn rational(&self, span: Span) -> SResult<BigRational> {
        let bad = || self.parse_err(span, format!("'{}' is not an exact rational number", span.text));
        let (num, den) = match span.text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (span.text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den == BigInt::from(0) {
            return Err(bad());
        }
        Ok(BigRational::new(num, den))
    }

    fn rational_list(&self, span: Span) -> SResult<Vec<BigRational>> {
        span.split_top(',').into_iter().map(|s| self.rational(s)).collect()
    }

    fn poly(&self, ring: &Ring, span: Span) -> SResult<MultiPoly> {
        if span.text.is_empty() {
            return Err(self.parse_err(span, "expected a polynomial"));
        }
        let e = parse_expr(span.text).map_err(|e| self.engine_err(span, e))?;
        MultiPoly::from_expr(ring, &e).map_err(|e| self.engine_err(span, e))
    }

    fn polys(&self, ring: &Ring, span: Span) -> SResult<Vec<MultiPoly>> {
        span.split_top(',').into_iter().map(|s| self.poly(ring, s)).collect()
    }

    fn form(&self, ring: &Ring, span: Span) -> SResult<DiffForm> {
        if span.text.is_empty() {
            return Err(self.parse_err(span, "expected a differential form"));
        }
        let e: Expr = parse_expr(span.text).map_err(|e| self.engine_err(span, e))?;
        DiffForm::from_expr(ring, &e).map_err(|e| self.engine_err(span, e))
    }

    /// Optional `c *` prefix of a term; returns the coefficient and the rest.
    fn coefficient<'a>(&self, span: Span<'a>) -> SResult<(BigRational, Span<'a>)> {
        if span.text.starts_with(|c: char| c.is_ascii_digit()) {
            let Some((c, rest)) = span.split_once("*") else {
                return Err(self.parse_err(span, "expected 'coefficient * term'"));
            };
            Ok((self.rational(c)?, rest))
        } else {
            Ok((BigRational::from_integer(1.into()), span))
        }
    }

    fn field_entry(&mut self, span: Span) -> SResult<()> {
        if let Some(l) = self.field_line {
            return Err(self.parse_err(span, format!("field already declared on line {}", l)));
        }
        if !self.models.is_empty() {
            return Err(self.parse_err(span, "the field must be declared before any model"));
        }
        self.field = if span.text == "rationals" {
            BaseField::Rationals
        } else if let Some(n) = span.call("cyclotomic") {
            match n.text.parse::<u32>() {
                Ok(c) if (1..=60).contains(&c) => BaseField::cyclotomic(c),
                _ => return Err(self.parse_err(n, "conductor must be an integer between 1 and 60")),
            }
        } else {
            return Err(self.parse_err(span, "expected 'rationals' or 'cyclotomic(n)'"));
        };
        self.field_line = Some(self.line);
        Ok(())
    }

    fn model_entry(&mut self, span: Span) -> SResult<()> {
        let Some((name, spec)) = span.split_once("=") else {
            return Err(self.parse_err(span, "expected 'NAME = model'"));
        };
        let name = self.declare(name, Kind::Model)?;
        let model = if spec.text.starts_with("custom") && !spec.text.starts_with("custom(") {
            self.custom_model(&name, spec.slice(6, spec.text.len()).trim())?
        } else {
            quotient::catalog(spec.text, &self.field, self.budget).map_err(|e| match e {
                Error::Parse { message, .. } => self.err(SceneErrorKind::Name, spec.col, message),
                other => self.engine_err(spec, other),
            })?
        };
        self.models.insert(name, Arc::new(model));
        Ok(())
    }

    fn custom_model(&self, name: &str, spec: Span) -> SResult<LocalModel> {
        let mut parts: BTreeMap<&str, Span> = BTreeMap::new();
        let mut rest = spec;
        while !rest.text.is_empty() {
            let key_end = rest.text.find('(').ok_or_else(|| self.parse_err(rest, "expected 'key(...)'"))?;
            let key = rest.text[..key_end].trim();
            let close = matching_close(rest.text, key_end).ok_or_else(|| self.parse_err(rest, "unbalanced parenthesis"))?;
            if !["up", "down", "generators", "invariants"].contains(&key) {
                return Err(self.parse_err(rest, format!("unknown model key '{}'", key)));
            }
            if parts.insert(key, rest.slice(key_end + 1, close).trim()).is_some() {
                return Err(self.parse_err(rest, format!("model key '{}' given twice", key)));
            }
            rest = rest.slice(close + 1, rest.text.len()).trim();
        }
        for key in ["up", "down", "generators", "invariants"] {
            if !parts.contains_key(key) {
                return Err(self.parse_err(spec, format!("custom model needs '{}(...)'", key)));
            }
        }
        let names = |s: Span| -> SResult<Vec<String>> {
            s.split_top(',')
                .into_iter()
                .map(|v| {
                    if is_name(v.text) && !v.text.contains('-') {
                        Ok(v.text.to_string())
                    } else {
                        Err(self.parse_err(v, format!("'{}' is not a variable name", v.text)))
                    }
                })
                .collect()
        };
        let up = names(parts["up"])?;
        let down = names(parts["down"])?;
        let constants = PolyRing::new(self.field.clone(), Vec::<String>::new());
        let mut gens = Vec::new();
        for m in parts["generators"].split_top(',') {
            let inner = m
                .text
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .map(|_| m.slice(1, m.text.len() - 1))
                .ok_or_else(|| self.parse_err(m, "matrices are written [a, b; c, d]"))?;
            let mut rows = Vec::new();
            for r in inner.split_top(';') {
                let mut row = Vec::new();
                for e in r.split_top(',') {
                    let p = self.poly(&constants, e)?;
                    row.push(p.constant_value().unwrap_or_default());
                }
                rows.push(row);
            }
            gens.push(Matrix::from_rows(rows).map_err(|e| self.engine_err(m, e))?);
        }
        let group = FiniteMatrixGroup::enumerate(&self.field, gens).map_err(|e| self.engine_err(parts["generators"], e))?;
        let up_ring = PolyRing::with_budget(self.field.clone(), up.clone(), self.budget);
        let theta = self.polys(&up_ring, parts["invariants"])?;
        LocalModel::from_polys(name, group, up_ring, theta, &down, DEFAULT_AUDIT_BOUND).map_err(|e| self.engine_err(spec, e))
    }

    /// `NAME on MODEL = rest`
    fn header<'a>(&mut self, span: Span<'a>, kind: Kind) -> SResult<(String, String, Span<'a>, Span<'a>)> {
        let Some((lhs, rhs)) = span.split_once("=") else {
            return Err(self.parse_err(span, "expected 'NAME on MODEL = ...'"));
        };
        let (name, tail) = lhs.first_word();
        let (on, tail) = tail.first_word();
        if on.text != "on" {
            return Err(self.parse_err(on, "expected 'on MODEL'"));
        }
        let (model, extra) = tail.first_word();
        let model = self.lookup(model, Kind::Model)?;
        let name = self.declare(name, kind)?;
        Ok((name, model, extra, rhs))
    }

    fn cycle_entry(&mut self, span: Span) -> SResult<()> {
        let (name, model_name, extra, rhs) = self.header(span, Kind::Cycle)?;
        if !extra.text.is_empty() {
            return Err(self.parse_err(extra, "unexpected text before '='"));
        }
        let model = self.models[&model_name].clone();
        let mut terms = Vec::new();
        for t in rhs.split_top('+') {
            let (coeff, body) = self.coefficient(t)?;
            if let Some(inner) = body.call("up") {
                terms.push(CycleTerm::Up { coeff, ideal: Ideal::new(model.up(), self.polys(model.up(), inner)?) });
            } else if let Some(inner) = body.call("down") {
                terms.push(CycleTerm::Down { coeff, ideal: Ideal::new(model.down(), self.polys(model.down(), inner)?) });
            } else {
                return Err(self.parse_err(body, "expected 'up(...)' or 'down(...)'"));
            }
        }
        self.cycle_models.insert(name.clone(), model_name.clone());
        self.cycles.push(CycleDecl { name, model: model_name, line: self.line, terms });
        Ok(())
    }

    fn map_entry(&mut self, span: Span) -> SResult<()> {
        let Some((lhs, rhs)) = span.split_once("=") else {
            return Err(self.parse_err(span, "expected 'NAME : SOURCE -> TARGET = (images)'"));
        };
        let Some((name, types)) = lhs.split_once(":") else {
            return Err(self.parse_err(lhs, "expected 'NAME : SOURCE -> TARGET'"));
        };
        let Some((src, tgt)) = types.split_once("->") else {
            return Err(self.parse_err(types, "expected 'SOURCE -> TARGET'"));
        };
        let source = self.model(src)?;
        let target = self.model(tgt)?;
        let name = self.declare(name, Kind::Map)?;
        let inner = rhs
            .text
            .strip_prefix('(')
            .filter(|_| rhs.text.ends_with(')'))
            .map(|_| rhs.slice(1, rhs.text.len() - 1))
            .ok_or_else(|| self.parse_err(rhs, "images are written (f1, ..., fn)"))?;
        let images = self.polys(source.up(), inner)?;
        let map = ModelMap::new(&source, &target, images).map_err(|e| self.engine_err(rhs, e))?;
        self.maps.insert(name, map);
        Ok(())
    }

    fn family_entry(&mut self, span: Span) -> SResult<()> {
        let (name, model_name, extra, rhs) = self.header(span, Kind::Family)?;
        let (kw, rest) = extra.first_word();
        let (param, rest) = rest.first_word();
        if kw.text != "param" || !rest.text.is_empty() || !is_name(param.text) {
            return Err(self.parse_err(extra, "expected 'param NAME' before '='"));
        }
        let model = self.models[&model_name].clone();
        let ring = CycleFamily::family_ring(&model, param.text).map_err(|e| self.engine_err(param, e))?;
        let body = if let Some(inner) = rhs.call("constant") {
            let x = self.lookup(inner, Kind::Cycle)?;
            if self.cycle_models[&x] != model_name {
                return Err(self.err(SceneErrorKind::Chart, inner.col, format!("cycle {} is not on model {}", x, model_name)));
            }
            FamilyBody::Constant(x)
        } else {
            let mut terms = Vec::new();
            for t in rhs.split_top('+') {
                let (coeff, body) = self.coefficient(t)?;
                if let Some(inner) = body.call("orbit") {
                    self.polys(&ring, inner)?;
                    let gens = inner.split_top(',').into_iter().map(|s| s.text.to_string()).collect();
                    terms.push(FamilyTerm::Orbit { coeff, gens });
                } else if let Some(inner) = body.call("up") {
                    terms.push(FamilyTerm::Prime { coeff, gens: self.polys(&ring, inner)? });
                } else {
                    return Err(self.parse_err(body, "expected 'orbit(...)', 'up(...)' or 'constant(CYCLE)'"));
                }
            }
            FamilyBody::Terms(terms)
        };
        self.family_models.insert(name.clone(), (model_name.clone(), param.text.to_string()));
        self.families.push(FamilyDecl { name, model: model_name, param: param.text.to_string(), line: self.line, body });
        Ok(())
    }

    fn cycle_ref(&self, span: Span) -> SResult<(String, String)> {
        let name = self.lookup(span, Kind::Cycle)?;
        let model = self.cycle_models[&name].clone();
        Ok((name, model))
    }

    fn same_chart(&self, span: Span, a: &str, b: &str) -> SResult<()> {
        if a == b {
            Ok(())
        } else {
            Err(self.err(SceneErrorKind::Chart, span.col, format!("expected a cycle on {} but found one on {}", a, b)))
        }
    }

    fn words<'a>(&self, span: Span<'a>, n: usize) -> SResult<Vec<Span<'a>>> {
        let mut out = Vec::new();
        let mut rest = span;
        while !rest.text.is_empty() {
            let (w, r) = rest.first_word();
            out.push(w);
            rest = r;
        }
        if out.len() != n {
            return Err(self.parse_err(span, format!("expected {} argument{}", n, if n == 1 { "" } else { "s" })));
        }
        Ok(out)
    }

    fn command(&mut self, span: Span) -> SResult<()> {
        let (bind, body) = match span.split_once("=") {
            Some((lhs, rhs)) if is_name(lhs.text) => (Some(lhs), rhs),
            _ => (None, span),
        };
        let (verb, args) = body.first_word();
        let (op, model) = self.op(verb, args)?;
        let bind = match bind {
            None => None,
            Some(b) => {
                if !op.yields_cycle() {
                    return Err(self.parse_err(b, format!("'{}' does not produce a cycle", verb.text)));
                }
                let name = self.declare(b, Kind::Cycle)?;
                self.cycle_models.insert(name.clone(), model.expect("cycle commands know their model"));
                Some(name)
            }
        };
        self.commands.push(Command { line: self.line, text: span.text.to_string(), bind, op });
        Ok(())
    }

    /// Parse one command; also returns the model of the produced cycle.
    fn op(&self, verb: Span, args: Span) -> SResult<(Op, Option<String>)> {
        Ok(match verb.text {
            "show" | "pullback" | "roundtrip" => {
                let a = self.words(args, 1)?;
                let (x, m) = self.cycle_ref(a[0])?;
                let op = match verb.text {
                    "show" => Op::Show(x),
                    "pullback" => Op::Pullback(x),
                    _ => Op::Roundtrip(x),
                };
                (op, Some(m))
            }
            "intersect" | "proper" => {
                let a = self.words(args, 2)?;
                let (x, m) = self.cycle_ref(a[0])?;
                let (y, my) = self.cycle_ref(a[1])?;
                self.same_chart(a[1], &m, &my)?;
                let op = if verb.text == "intersect" { Op::Intersect(x, y) } else { Op::Proper(x, y) };
                (op, Some(m))
            }
            "fproduct" => {
                let a = self.words(args, 3)?;
                let (f, src, tgt) = self.map_ref(a[0])?;
                let (x, mx) = self.cycle_ref(a[1])?;
                let (y, my) = self.cycle_ref(a[2])?;
                self.same_chart(a[1], &src, &mx)?;
                self.same_chart(a[2], &tgt, &my)?;
                (Op::FProduct(f, x, y), Some(src))
            }
            "push" => {
                let a = self.words(args, 2)?;
                let (f, src, tgt) = self.map_ref(a[0])?;
                let (x, mx) = self.cycle_ref(a[1])?;
                self.same_chart(a[1], &src, &mx)?;
                (Op::Push(f, x), Some(tgt))
            }
            "pull" => {
                let a = self.words(args, 2)?;
                let (f, src, tgt) = self.map_ref(a[0])?;
                let (y, my) = self.cycle_ref(a[1])?;
                self.same_chart(a[1], &tgt, &my)?;
                (Op::Pull(f, y), Some(src))
            }
            "divisor" => {
                let (m, expr) = args.first_word();
                let model = self.model(m)?;
                (Op::Divisor(m.text.to_string(), self.poly(model.down(), expr)?), Some(m.text.to_string()))
            }
            "specialize" => {
                let (fam, value) = args.first_word();
                let name = self.lookup(fam, Kind::Family)?;
                let model = self.family_models[&name].0.clone();
                (Op::Specialize(name, self.rational(value)?), Some(model))
            }
            "conservation" => {
                let (x, y, samples, via) = self.conservation_args(args)?;
                (Op::Conservation { x, y, samples, via }, None)
            }
            "trace" => {
                let (m, expr) = args.first_word();
                let model = self.model(m)?;
                (Op::Trace(m.text.to_string(), self.form(model.up(), expr)?), None)
            }
            "pullform" => {
                let (m, expr) = args.first_word();
                let model = self.model(m)?;
                (Op::PullForm(m.text.to_string(), self.form(model.down(), expr)?), None)
            }
            "set" => {
                let (key, value) = args.first_word();
                match key.text {
                    "descent-bound" => {
                        let n = value.text.parse::<usize>().map_err(|_| self.parse_err(value, "expected a non-negative integer"))?;
                        (Op::SetDescentBound(n), None)
                    }
                    "denominators" => {
                        let (m, list) = value.first_word();
                        let model = self.model(m)?;
                        (Op::SetDenominators(m.text.to_string(), self.polys(model.down(), list)?), None)
                    }
                    _ => return Err(self.parse_err(key, format!("unknown setting '{}'", key.text))),
                }
            }
            "verify" => (Op::Verify(self.check(args)?), None),
            other => return Err(self.parse_err(verb, format!("unknown command '{}'", other))),
        })
    }

    fn map_ref(&self, span: Span) -> SResult<(String, String, String)> {
        let name = self.lookup(span, Kind::Map)?;
        let f = &self.maps[&name];
        let find = |m: &Model| {
            self.models.iter().find(|(_, v)| Arc::ptr_eq(v, m)).map(|(k, _)| k.clone()).expect("map models are declared")
        };
        Ok((name.clone(), find(f.source()), find(f.target())))
    }

    /// `X Y at s1, s2, ... [via f]`
    fn conservation_args(&self, args: Span) -> SResult<(String, String, Vec<BigRational>, Option<String>)> {
        let Some((names, rest)) = args.split_once(" at ") else {
            return Err(self.parse_err(args, "expected 'FAMILY FAMILY at s1, s2, ... [via MAP]'"));
        };
        let a = self.words(names, 2)?;
        let x = self.lookup(a[0], Kind::Family)?;
        let y = self.lookup(a[1], Kind::Family)?;
        let (samples, via) = match rest.split_once(" via ") {
            Some((s, f)) => (s, Some(f)),
            None => (rest, None),
        };
        let mx = &self.family_models[&x].0;
        let my = &self.family_models[&y].0;
        let via = match via {
            Some(f) => {
                let (f, src, tgt) = self.map_ref(f)?;
                self.same_chart(a[0], &src, mx)?;
                self.same_chart(a[1], &tgt, my)?;
                Some(f)
            }
            None => {
                self.same_chart(a[1], mx, my)?;
                None
            }
        };
        Ok((x, y, self.rational_list(samples)?, via))
    }

    fn check(&self, args: Span) -> SResult<Check> {
        let (what, rest) = args.first_word();
        let pair = |n: usize| -> SResult<Vec<String>> {
            let a = self.words(rest, n)?;
            let mut out = Vec::new();
            let mut model: Option<String> = None;
            for s in &a {
                let (x, m) = self.cycle_ref(*s)?;
                if let Some(m0) = &model {
                    self.same_chart(*s, m0, &m)?;
                }
                model = Some(m);
                out.push(x);
            }
            Ok(out)
        };
        Ok(match what.text {
            "roundtrip" => Check::Roundtrip(pair(1)?.remove(0)),
            "upstairs" => {
                let v = pair(2)?;
                Check::Upstairs(v[0].clone(), v[1].clone())
            }
            "commutative" => {
                let v = pair(2)?;
                Check::Commutative(v[0].clone(), v[1].clone())
            }
            "positivity" => {
                let v = pair(2)?;
                Check::Positivity(v[0].clone(), v[1].clone())
            }
            "associative" => {
                let v = pair(3)?;
                Check::Associative(v[0].clone(), v[1].clone(), v[2].clone())
            }
            "projection" => {
                let a = self.words(rest, 3)?;
                let (f, src, tgt) = self.map_ref(a[0])?;
                let (x, mx) = self.cycle_ref(a[1])?;
                let (y, my) = self.cycle_ref(a[2])?;
                self.same_chart(a[1], &src, &mx)?;
                self.same_chart(a[2], &tgt, &my)?;
                Check::Projection(f, x, y)
            }
            "conservation" => {
                let (x, y, samples, via) = self.conservation_args(rest)?;
                Check::Conservation { x, y, samples, via }
            }
            "trace" => {
                let (m, expr) = rest.first_word();
                let model = self.model(m)?;
                Check::Trace(m.text.to_string(), self.form(model.down(), expr)?)
            }
            "direct-factor" => {
                let (m, list) = rest.first_word();
                let model = self.model(m)?;
                let forms = list.split_top(';').into_iter().map(|s| self.form(model.down(), s)).collect::<SResult<_>>()?;
                Check::DirectFactor(m.text.to_string(), forms)
            }
            other => return Err(self.parse_err(what, format!("unknown verification '{}'", other))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(s: &str) -> Span<'_> {
        Span { text: s, col: 1 }
    }

    #[test]
    fn top_level_splitting() {
        let parts: Vec<(&str, usize)> = span("up(u, v), 2*x , [a, b]").split_top(',').iter().map(|s| (s.text, s.col)).collect();
        assert_eq!(parts, vec![("up(u, v)", 1), ("2*x", 11), ("[a, b]", 17)]);
        let (a, b) = span("X = intersect X Y").split_once("=").unwrap();
        assert_eq!((a.text, b.text, b.col), ("X", "intersect X Y", 5));
    }

    #[test]
    fn calls_must_cover_the_span() {
        assert_eq!(span("up(u, v)").call("up").unwrap().text, "u, v");
        assert!(span("up(u) + up(v)").call("up").is_none());
        assert!(span("upper(u)").call("up").is_none());
    }

    #[test]
    fn word_columns() {
        assert_eq!(word_column(Span { text: "uw + w", col: 10 }, "w"), 15);
        assert!(is_name("trivial-1") && is_name("X'") && !is_name("1X"));
    }

    #[test]
    fn custom_models() {
        let s = parse_scene(
            "[model]\nM = custom up(a, b) down(p, q, r) generators([-1, 0; 0, -1]) invariants(a^2, b^2, a*b)\n",
        )
        .unwrap();
        assert_eq!(s.models["M"].degree(), 2);
        let e = parse_scene("[model]\nM = custom up(a, b) down(p) generators([-1, 0; 0, -1]) invariants(a)\n").unwrap_err();
        assert_eq!(e.kind, SceneErrorKind::Chart);
        assert!(e.message.starts_with("NotInvariant"), "{}", e.message);
    }

    #[test]
    fn field_rules() {
        assert!(parse_scene("[field]\ncyclotomic(3)\n[model]\nM = A2\n").is_ok());
        let e = parse_scene("[model]\nM = A2\n").unwrap_err();
        assert!(e.message.starts_with("FieldMismatch"), "{}", e.message);
        let e = parse_scene("[model]\nM = A1\n[field]\nrationals\n").unwrap_err();
        assert_eq!(e.kind, SceneErrorKind::Parse);
    }

    #[test]
    fn bindings_join_the_namespace() {
        let s = parse_scene("[model]\nM = A1\n[cycle]\nX on M = up(u)\n[run]\nZ = roundtrip X\nshow Z\n").unwrap();
        assert_eq!(s.commands[0].bind.as_deref(), Some("Z"));
        let e = parse_scene("[model]\nM = A1\n[cycle]\nX on M = up(u)\n[run]\nX = roundtrip X\n").unwrap_err();
        assert_eq!(e.kind, SceneErrorKind::Name);
        let e = parse_scene("[model]\nM = A1\n[cycle]\nX on M = up(u)\n[run]\nZ = proper X X\n").unwrap_err();
        assert_eq!(e.kind, SceneErrorKind::Parse);
    }
}
