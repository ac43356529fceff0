//! Problem-file schema: parsing with field-level diagnostics and emission.
//!
//! One file holds one object. Every numeric literal is an exact rational:
//! a string `"p/q"` (or `"p"`), an integer, or a two-integer array `[p, q]`.
//! Floating-point literals are accepted only in float mode, where they are
//! converted to their exact binary value. Unknown fields are rejected
//! everywhere with the offending JSON path named.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use convexkit::affine::AffineFunctional;
use convexkit::calculus::{MatrixOperator, OperatorFamily};
use convexkit::cone::PolyCone;
use convexkit::func::{LexPiece, LexPolyFunc, PolyFunc, SampledFunc};
use convexkit::generation::GeneratorSet;
use convexkit::polytope::Polytope;
use convexkit::scalar::{format_rational, parse_rational, ExtScalar, LexScalar, Rational};

use crate::fail::CliError;

pub const SCHEMA_VERSION: &str = "1";

/// Parsing context: float mode relaxes the numeric-literal policy.
#[derive(Debug, Clone, Copy)]
pub struct NumberPolicy {
    pub allow_float: bool,
}

#[derive(Debug, Clone)]
pub enum FunctionPayload {
    Sampled(SampledFunc),
    Poly(PolyFunc),
    Lex(LexPolyFunc),
}

impl FunctionPayload {
    pub fn dim(&self) -> usize {
        match self {
            FunctionPayload::Sampled(f) => f.dim(),
            FunctionPayload::Poly(f) => f.dim(),
            FunctionPayload::Lex(f) => f.dim(),
        }
    }

    /// The function as a plain polyhedral one; lex pieces must have zero
    /// infinitesimal offsets to qualify.
    pub fn as_poly(&self, what: &str) -> Result<PolyFunc, CliError> {
        match self {
            FunctionPayload::Poly(f) => Ok(f.clone()),
            FunctionPayload::Lex(f) => {
                let zero = Rational::from_integer(0.into());
                if f.pieces().iter().any(|p| p.offset.inf != zero) {
                    return Err(CliError::input(format!(
                        "{what}: expected a plain polyhedral function, \
                         got one with infinitesimal offsets (use a command that accepts \
                         lex-polyhedral input)"
                    )));
                }
                Ok(f.std_part())
            }
            FunctionPayload::Sampled(_) => Err(CliError::input(format!(
                "{what}: expected a polyhedral function (representation \"polyhedral\"), \
                 got a sampled one"
            ))),
        }
    }

    /// The function as a lex-polyhedral one; plain pieces lift with zero
    /// infinitesimal offsets.
    pub fn as_lex(&self, what: &str) -> Result<LexPolyFunc, CliError> {
        match self {
            FunctionPayload::Lex(f) => Ok(f.clone()),
            FunctionPayload::Poly(f) => {
                let pieces = f
                    .pieces()
                    .iter()
                    .map(|p| LexPiece {
                        slope: p.slope.clone(),
                        offset: LexScalar::from_std(p.offset.clone()),
                    })
                    .collect();
                LexPolyFunc::new(f.dim(), pieces).map_err(CliError::from)
            }
            FunctionPayload::Sampled(_) => Err(CliError::input(format!(
                "{what}: expected a polyhedral or lex-polyhedral function, got a sampled one"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub enum ConvolutionRepr {
    Grid { mid_dim: usize, y_grid: Vec<Vec<Rational>>, points: Vec<(Vec<Rational>, Vec<Rational>)> },
    Polyhedral { probes: Vec<(Rational, Rational, Rational)> },
}

#[derive(Debug, Clone)]
pub struct ConvolutionPayload {
    pub repr: ConvolutionRepr,
    pub f1: FunctionPayload,
    pub f2: FunctionPayload,
}

#[derive(Debug, Clone)]
pub enum Payload {
    Function(FunctionPayload),
    GeneratorSet(GeneratorSet),
    Cone(PolyCone),
    Polytope(Polytope),
    OperatorFamily(OperatorFamily),
    Convolution(ConvolutionPayload),
    Sandwich { p: FunctionPayload, q: FunctionPayload },
    Composition { outer: PolyFunc, inners: Vec<PolyFunc> },
}

impl Payload {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Payload::Function(_) => "function",
            Payload::GeneratorSet(_) => "generator_set",
            Payload::Cone(_) => "cone",
            Payload::Polytope(_) => "polytope",
            Payload::OperatorFamily(_) => "operator_family",
            Payload::Convolution(_) => "convolution",
            Payload::Sandwich { .. } => "sandwich",
            Payload::Composition { .. } => "composition",
        }
    }

    /// Largest ambient dimension mentioned by the object (for `--max-dim`).
    pub fn max_dim(&self) -> usize {
        match self {
            Payload::Function(f) => f.dim(),
            Payload::GeneratorSet(h) => h.dim(),
            Payload::Cone(k) => k.dim(),
            Payload::Polytope(p) => p.dim(),
            Payload::OperatorFamily(fam) => fam.m().max(fam.n()),
            Payload::Convolution(c) => c.f1.dim().max(c.f2.dim()),
            Payload::Sandwich { p, q } => p.dim().max(q.dim()),
            Payload::Composition { outer, inners } => inners
                .iter()
                .map(|f| f.dim())
                .chain(std::iter::once(outer.dim()))
                .max()
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub payload: Payload,
    pub metadata: BTreeMap<String, Value>,
}

// ---------------------------------------------------------------------------
// Low-level helpers: objects, fields, numbers.
// ---------------------------------------------------------------------------

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, CliError> {
    v.as_object()
        .ok_or_else(|| CliError::input(format!("{path}: expected a JSON object")))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array()
        .ok_or_else(|| CliError::input(format!("{path}: expected a JSON array")))
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, CliError> {
    m.get(key)
        .ok_or_else(|| CliError::input(format!("{path}: missing required field \"{key}\"")))
}

fn reject_unknown(m: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<(), CliError> {
    for key in m.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(CliError::input(format!(
                "{path}: unknown field \"{key}\" (allowed: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn parse_usize(v: &Value, path: &str) -> Result<usize, CliError> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| CliError::input(format!("{path}: expected a nonnegative integer")))
}

/// One numeric literal → exact rational, under the mode's policy.
pub fn parse_number(v: &Value, path: &str, policy: NumberPolicy) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => parse_rational(s)
            .map_err(|e| CliError::input(format!("{path}: {e}"))),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                return Ok(Rational::from_integer(i.into()));
            }
            if let Some(f) = n.as_f64() {
                if n.is_f64() && !policy.allow_float {
                    return Err(CliError::input(format!(
                        "{path}: floating literal {n} not allowed in exact mode \
                         (write it as \"p/q\"; or run with --mode float)"
                    )));
                }
                return Rational::from_float(f).ok_or_else(|| {
                    CliError::input(format!("{path}: {n} is not a finite number"))
                });
            }
            Err(CliError::input(format!("{path}: integer literal out of range, use a \"p/q\" string")))
        }
        Value::Array(parts) => {
            if parts.len() != 2 {
                return Err(CliError::input(format!(
                    "{path}: a rational pair must have exactly two integers [p, q]"
                )));
            }
            let p = parts[0]
                .as_i64()
                .ok_or_else(|| CliError::input(format!("{path}[0]: expected an integer")))?;
            let q = parts[1]
                .as_i64()
                .ok_or_else(|| CliError::input(format!("{path}[1]: expected an integer")))?;
            if q == 0 {
                return Err(CliError::input(format!("{path}: zero denominator")));
            }
            Ok(Rational::new(p.into(), q.into()))
        }
        other => Err(CliError::input(format!(
            "{path}: expected a rational literal (\"p/q\" string, integer, or [p, q] pair), \
             got {other}"
        ))),
    }
}

fn parse_vector(
    v: &Value,
    path: &str,
    expect: Option<usize>,
    policy: NumberPolicy,
) -> Result<Vec<Rational>, CliError> {
    let arr = as_array(v, path)?;
    // A two-integer array is ambiguous with the [p, q] rational-pair form, so
    // coordinate vectors must spell every entry; this only bites when a
    // 2-vector of bare integers appears where a scalar is also legal, which
    // never happens: vectors and scalars occupy distinct fields.
    if let Some(n) = expect {
        if arr.len() != n {
            return Err(CliError::input(format!(
                "{path}: expected {n} coordinates, got {}",
                arr.len()
            )));
        }
    }
    arr.iter()
        .enumerate()
        .map(|(i, x)| parse_number(x, &format!("{path}[{i}]"), policy))
        .collect()
}

fn parse_extended(v: &Value, path: &str, policy: NumberPolicy) -> Result<ExtScalar, CliError> {
    if let Value::String(s) = v {
        match s.trim() {
            "top" => return Ok(ExtScalar::Top),
            "bottom" => return Ok(ExtScalar::Bottom),
            _ => {}
        }
    }
    Ok(ExtScalar::Finite(parse_number(v, path, policy)?))
}

fn parse_lex(v: &Value, path: &str, policy: NumberPolicy) -> Result<LexScalar, CliError> {
    if let Value::Object(m) = v {
        reject_unknown(m, &["std", "inf"], path)?;
        let std = parse_number(field(m, "std", path)?, &format!("{path}.std"), policy)?;
        let inf = match m.get("inf") {
            Some(x) => parse_number(x, &format!("{path}.inf"), policy)?,
            None => Rational::from_integer(0.into()),
        };
        return Ok(LexScalar::new(std, inf));
    }
    Ok(LexScalar::from_std(parse_number(v, path, policy)?))
}

fn parse_affine(
    v: &Value,
    path: &str,
    dim: usize,
    policy: NumberPolicy,
) -> Result<AffineFunctional, CliError> {
    let m = as_object(v, path)?;
    reject_unknown(m, &["slope", "offset"], path)?;
    let slope = parse_vector(field(m, "slope", path)?, &format!("{path}.slope"), Some(dim), policy)?;
    let offset = match m.get("offset") {
        Some(x) => parse_number(x, &format!("{path}.offset"), policy)?,
        None => Rational::from_integer(0.into()),
    };
    Ok(AffineFunctional::new(slope, offset))
}

fn parse_point_list(
    v: &Value,
    path: &str,
    dim: usize,
    policy: NumberPolicy,
) -> Result<Vec<Vec<Rational>>, CliError> {
    let arr = as_array(v, path)?;
    arr.iter()
        .enumerate()
        .map(|(i, p)| parse_vector(p, &format!("{path}[{i}]"), Some(dim), policy))
        .collect()
}

// ---------------------------------------------------------------------------
// Kind-specific payload parsers.
// ---------------------------------------------------------------------------

fn parse_function_payload(
    v: &Value,
    path: &str,
    policy: NumberPolicy,
) -> Result<FunctionPayload, CliError> {
    let m = as_object(v, path)?;
    let repr = field(m, "representation", path)?
        .as_str()
        .ok_or_else(|| CliError::input(format!("{path}.representation: expected a string")))?;
    let dim = parse_usize(field(m, "dim", path)?, &format!("{path}.dim"))?;
    match repr {
        "sampled" => {
            reject_unknown(m, &["representation", "dim", "samples"], path)?;
            let arr = as_array(field(m, "samples", path)?, &format!("{path}.samples"))?;
            let mut samples = Vec::with_capacity(arr.len());
            for (i, s) in arr.iter().enumerate() {
                let spath = format!("{path}.samples[{i}]");
                let sm = as_object(s, &spath)?;
                reject_unknown(sm, &["point", "value"], &spath)?;
                let point =
                    parse_vector(field(sm, "point", &spath)?, &format!("{spath}.point"), Some(dim), policy)?;
                let value =
                    parse_extended(field(sm, "value", &spath)?, &format!("{spath}.value"), policy)?;
                samples.push((point, value));
            }
            let f = SampledFunc::new(dim, samples)
                .map_err(|e| CliError::input(format!("{path}: {e}")))?;
            Ok(FunctionPayload::Sampled(f))
        }
        "polyhedral" => {
            reject_unknown(m, &["representation", "dim", "pieces"], path)?;
            let arr = as_array(field(m, "pieces", path)?, &format!("{path}.pieces"))?;
            let pieces = arr
                .iter()
                .enumerate()
                .map(|(i, p)| parse_affine(p, &format!("{path}.pieces[{i}]"), dim, policy))
                .collect::<Result<Vec<_>, _>>()?;
            let f = PolyFunc::new(dim, pieces).map_err(|e| CliError::input(format!("{path}: {e}")))?;
            Ok(FunctionPayload::Poly(f))
        }
        "lex-polyhedral" => {
            reject_unknown(m, &["representation", "dim", "pieces"], path)?;
            let arr = as_array(field(m, "pieces", path)?, &format!("{path}.pieces"))?;
            let mut pieces = Vec::with_capacity(arr.len());
            for (i, p) in arr.iter().enumerate() {
                let ppath = format!("{path}.pieces[{i}]");
                let pm = as_object(p, &ppath)?;
                reject_unknown(pm, &["slope", "offset"], &ppath)?;
                let slope = parse_vector(
                    field(pm, "slope", &ppath)?,
                    &format!("{ppath}.slope"),
                    Some(dim),
                    policy,
                )?;
                let offset = match pm.get("offset") {
                    Some(x) => parse_lex(x, &format!("{ppath}.offset"), policy)?,
                    None => LexScalar::zero(),
                };
                pieces.push(LexPiece { slope, offset });
            }
            let f = LexPolyFunc::new(dim, pieces)
                .map_err(|e| CliError::input(format!("{path}: {e}")))?;
            Ok(FunctionPayload::Lex(f))
        }
        other => Err(CliError::input(format!(
            "{path}.representation: unknown representation {other:?} \
             (expected \"sampled\", \"polyhedral\", or \"lex-polyhedral\")"
        ))),
    }
}

fn parse_poly_function(v: &Value, path: &str, policy: NumberPolicy) -> Result<PolyFunc, CliError> {
    match parse_function_payload(v, path, policy)? {
        FunctionPayload::Poly(f) => Ok(f),
        _ => Err(CliError::input(format!(
            "{path}: expected representation \"polyhedral\" here"
        ))),
    }
}

fn parse_payload(
    kind: &str,
    v: &Value,
    path: &str,
    policy: NumberPolicy,
) -> Result<Payload, CliError> {
    match kind {
        "function" => Ok(Payload::Function(parse_function_payload(v, path, policy)?)),
        "generator_set" => {
            let m = as_object(v, path)?;
            reject_unknown(m, &["dim", "members"], path)?;
            let dim = parse_usize(field(m, "dim", path)?, &format!("{path}.dim"))?;
            let arr = as_array(field(m, "members", path)?, &format!("{path}.members"))?;
            let members = arr
                .iter()
                .enumerate()
                .map(|(i, h)| parse_affine(h, &format!("{path}.members[{i}]"), dim, policy))
                .collect::<Result<Vec<_>, _>>()?;
            let h = GeneratorSet::new(dim, members)
                .map_err(|e| CliError::input(format!("{path}: {e}")))?;
            Ok(Payload::GeneratorSet(h))
        }
        "cone" => {
            let m = as_object(v, path)?;
            reject_unknown(m, &["dim", "rays"], path)?;
            let dim = parse_usize(field(m, "dim", path)?, &format!("{path}.dim"))?;
            let rays = parse_point_list(field(m, "rays", path)?, &format!("{path}.rays"), dim, policy)?;
            let k = PolyCone::new(dim, rays).map_err(|e| CliError::input(format!("{path}: {e}")))?;
            Ok(Payload::Cone(k))
        }
        "polytope" => {
            let m = as_object(v, path)?;
            reject_unknown(m, &["dim", "vertices"], path)?;
            let dim = parse_usize(field(m, "dim", path)?, &format!("{path}.dim"))?;
            let vertices =
                parse_point_list(field(m, "vertices", path)?, &format!("{path}.vertices"), dim, policy)?;
            let p =
                Polytope::new(dim, vertices).map_err(|e| CliError::input(format!("{path}: {e}")))?;
            Ok(Payload::Polytope(p))
        }
        "operator_family" => {
            let m = as_object(v, path)?;
            reject_unknown(m, &["rows", "cols", "members"], path)?;
            let rows = parse_usize(field(m, "rows", path)?, &format!("{path}.rows"))?;
            let cols = parse_usize(field(m, "cols", path)?, &format!("{path}.cols"))?;
            let arr = as_array(field(m, "members", path)?, &format!("{path}.members"))?;
            let mut ops = Vec::with_capacity(arr.len());
            for (i, member) in arr.iter().enumerate() {
                let mpath = format!("{path}.members[{i}]");
                let row_vals = as_array(member, &mpath)?;
                if row_vals.len() != rows {
                    return Err(CliError::input(format!(
                        "{mpath}: expected {rows} rows, got {}",
                        row_vals.len()
                    )));
                }
                let matrix = row_vals
                    .iter()
                    .enumerate()
                    .map(|(r, row)| parse_vector(row, &format!("{mpath}[{r}]"), Some(cols), policy))
                    .collect::<Result<Vec<_>, _>>()?;
                ops.push(
                    MatrixOperator::new(matrix)
                        .map_err(|e| CliError::input(format!("{mpath}: {e}")))?,
                );
            }
            let fam =
                OperatorFamily::new(ops).map_err(|e| CliError::input(format!("{path}: {e}")))?;
            Ok(Payload::OperatorFamily(fam))
        }
        "convolution" => {
            let m = as_object(v, path)?;
            let repr = field(m, "representation", path)?
                .as_str()
                .ok_or_else(|| CliError::input(format!("{path}.representation: expected a string")))?;
            let f1 = parse_function_payload(field(m, "f1", path)?, &format!("{path}.f1"), policy)?;
            let f2 = parse_function_payload(field(m, "f2", path)?, &format!("{path}.f2"), policy)?;
            let repr = match repr {
                "grid" => {
                    reject_unknown(
                        m,
                        &["representation", "f1", "f2", "mid_dim", "y_grid", "points"],
                        path,
                    )?;
                    let mid_dim =
                        parse_usize(field(m, "mid_dim", path)?, &format!("{path}.mid_dim"))?;
                    let y_grid = parse_point_list(
                        field(m, "y_grid", path)?,
                        &format!("{path}.y_grid"),
                        mid_dim,
                        policy,
                    )?;
                    let mut points = Vec::new();
                    if let Some(pts) = m.get("points") {
                        let arr = as_array(pts, &format!("{path}.points"))?;
                        for (i, pt) in arr.iter().enumerate() {
                            let ppath = format!("{path}.points[{i}]");
                            let pm = as_object(pt, &ppath)?;
                            reject_unknown(pm, &["x", "z"], &ppath)?;
                            let x = parse_vector(
                                field(pm, "x", &ppath)?,
                                &format!("{ppath}.x"),
                                Some(f1.dim().saturating_sub(mid_dim)),
                                policy,
                            )?;
                            let z = parse_vector(
                                field(pm, "z", &ppath)?,
                                &format!("{ppath}.z"),
                                Some(f2.dim().saturating_sub(mid_dim)),
                                policy,
                            )?;
                            points.push((x, z));
                        }
                    }
                    ConvolutionRepr::Grid { mid_dim, y_grid, points }
                }
                "polyhedral" => {
                    reject_unknown(m, &["representation", "f1", "f2", "probes"], path)?;
                    let mut probes = Vec::new();
                    if let Some(ps) = m.get("probes") {
                        let arr = as_array(ps, &format!("{path}.probes"))?;
                        for (i, pt) in arr.iter().enumerate() {
                            let ppath = format!("{path}.probes[{i}]");
                            let pm = as_object(pt, &ppath)?;
                            reject_unknown(pm, &["x", "y", "z"], &ppath)?;
                            let x =
                                parse_number(field(pm, "x", &ppath)?, &format!("{ppath}.x"), policy)?;
                            let y =
                                parse_number(field(pm, "y", &ppath)?, &format!("{ppath}.y"), policy)?;
                            let z =
                                parse_number(field(pm, "z", &ppath)?, &format!("{ppath}.z"), policy)?;
                            probes.push((x, y, z));
                        }
                    }
                    ConvolutionRepr::Polyhedral { probes }
                }
                other => {
                    return Err(CliError::input(format!(
                        "{path}.representation: unknown representation {other:?} \
                         (expected \"grid\" or \"polyhedral\")"
                    )))
                }
            };
            Ok(Payload::Convolution(ConvolutionPayload { repr, f1, f2 }))
        }
        "sandwich" => {
            let m = as_object(v, path)?;
            reject_unknown(m, &["p", "q"], path)?;
            let p = parse_function_payload(field(m, "p", path)?, &format!("{path}.p"), policy)?;
            let q = parse_function_payload(field(m, "q", path)?, &format!("{path}.q"), policy)?;
            Ok(Payload::Sandwich { p, q })
        }
        "composition" => {
            let m = as_object(v, path)?;
            reject_unknown(m, &["outer", "inners"], path)?;
            let outer = parse_poly_function(field(m, "outer", path)?, &format!("{path}.outer"), policy)?;
            let arr = as_array(field(m, "inners", path)?, &format!("{path}.inners"))?;
            let inners = arr
                .iter()
                .enumerate()
                .map(|(i, f)| parse_poly_function(f, &format!("{path}.inners[{i}]"), policy))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Payload::Composition { outer, inners })
        }
        other => Err(CliError::input(format!(
            "kind: unknown kind {other:?} (expected one of: function, generator_set, cone, \
             polytope, operator_family, convolution, sandwich, composition)"
        ))),
    }
}

/// Parse a whole problem file from raw bytes, diagnosing malformed JSON with
/// line/column and schema errors with the JSON path of the offending field.
pub fn parse_problem(bytes: &[u8], policy: NumberPolicy) -> Result<ProblemFile, CliError> {
    let value: Value = serde_json::from_slice(bytes)
        .map_err(|e| CliError::input(format!("line {} column {}: {e}", e.line(), e.column())))?;
    let m = as_object(&value, "$")?;
    reject_unknown(m, &["schema_version", "kind", "payload", "metadata"], "$")?;
    let version = field(m, "schema_version", "$")?
        .as_str()
        .ok_or_else(|| CliError::input("schema_version: expected a string".to_string()))?;
    if version != SCHEMA_VERSION {
        return Err(CliError::input(format!(
            "schema_version: unsupported version {version:?} (this tool reads {SCHEMA_VERSION:?})"
        )));
    }
    let kind = field(m, "kind", "$")?
        .as_str()
        .ok_or_else(|| CliError::input("kind: expected a string".to_string()))?;
    let payload = parse_payload(kind, field(m, "payload", "$")?, "payload", policy)?;
    let metadata = match m.get("metadata") {
        Some(Value::Object(meta)) => meta.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        Some(_) => {
            return Err(CliError::input("metadata: expected a JSON object".to_string()));
        }
        None => BTreeMap::new(),
    };
    Ok(ProblemFile { payload, metadata })
}

// ---------------------------------------------------------------------------
// Emission: library objects → problem-file JSON (round-trips through the
// parser above).
// ---------------------------------------------------------------------------

pub fn rational_value(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

pub fn vector_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

pub fn extended_value(v: &ExtScalar) -> Value {
    match v {
        ExtScalar::Top => Value::String("top".to_string()),
        ExtScalar::Bottom => Value::String("bottom".to_string()),
        ExtScalar::Finite(r) => rational_value(r),
    }
}

pub fn lex_value(v: &LexScalar) -> Value {
    serde_json::json!({ "std": rational_value(&v.std), "inf": rational_value(&v.inf) })
}

fn problem_envelope(kind: &str, payload: Value) -> Value {
    serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "payload": payload,
    })
}

pub fn emit_poly_function(f: &PolyFunc) -> Value {
    let pieces: Vec<Value> = f
        .pieces()
        .iter()
        .map(|p| {
            serde_json::json!({
                "slope": vector_value(&p.slope),
                "offset": rational_value(&p.offset),
            })
        })
        .collect();
    problem_envelope(
        "function",
        serde_json::json!({
            "representation": "polyhedral",
            "dim": f.dim(),
            "pieces": pieces,
        }),
    )
}

pub fn emit_sampled_function(f: &SampledFunc) -> Value {
    let samples: Vec<Value> = f
        .samples()
        .map(|(x, v)| {
            serde_json::json!({ "point": vector_value(x), "value": extended_value(v) })
        })
        .collect();
    problem_envelope(
        "function",
        serde_json::json!({
            "representation": "sampled",
            "dim": f.dim(),
            "samples": samples,
        }),
    )
}

pub fn emit_cone(k: &PolyCone) -> Value {
    let rays: Vec<Value> = k.rays().iter().map(|r| vector_value(r)).collect();
    problem_envelope("cone", serde_json::json!({ "dim": k.dim(), "rays": rays }))
}

pub fn emit_polytope(p: &Polytope) -> Value {
    let vertices: Vec<Value> = p.vertices().iter().map(|v| vector_value(v)).collect();
    problem_envelope(
        "polytope",
        serde_json::json!({ "dim": p.dim(), "vertices": vertices }),
    )
}
