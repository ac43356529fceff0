//! One handler per subcommand. Handlers take parsed inputs and return an
//! [`Outcome`]; a populated certificate marks a hypothesis violation and
//! drives the exit-2 path in `main`.

use serde_json::Value;

use convexkit::approximation::{
    chain_rule_check, convolution_exactness_1d, eps_subdifferential, infimal_convolution_grid,
    infimal_convolution_poly1d, infinitesimal_subdifferential, is_infinitesimal_minimum, Exactness,
};
use convexkit::calculus::{composition_subdifferential, support_hull, support_set, MatrixOperator};
use convexkit::cone::{diagonal_cone, polar, PolyCone};
use convexkit::error::Error;
use convexkit::func::{Function, PolyFunc, SampledFunc};
use convexkit::generation::{
    fenchel_conjugate, fenchel_conjugate_poly, h_convex_envelope, h_support_set, is_h_convex,
    support_function, Envelope,
};
use convexkit::polytope::Polytope;
use convexkit::scalar::{format_rational, ExtScalar, LexScalar, Rational};
use convexkit::separation::{
    general_position_check, nonoblate_check, nonoblate_diagonal_equivalence, sandwich, ConePair,
    SandwichWitness,
};
use convexkit::suite::{run_all, run_suite, SuiteConfig, SUITE_NAMES};

use crate::fail::CliError;
use crate::problem::{
    emit_cone, emit_poly_function, emit_polytope, emit_sampled_function, lex_value,
    rational_value, vector_value, ConvolutionPayload, ConvolutionRepr, FunctionPayload, Payload,
};
use crate::report::{Cell, Outcome, PlotData};

/// One loaded input file.
pub struct Loaded {
    pub path: String,
    pub problem: crate::problem::ProblemFile,
}

// ---------------------------------------------------------------------------
// Kind extraction with named-file diagnostics.
// ---------------------------------------------------------------------------

fn wrong_kind(l: &Loaded, wanted: &str) -> CliError {
    CliError::input(format!(
        "{}: expected kind \"{wanted}\", got \"{}\"",
        l.path,
        l.problem.payload.kind_name()
    ))
}

fn expect_function<'a>(l: &'a Loaded) -> Result<&'a FunctionPayload, CliError> {
    match &l.problem.payload {
        Payload::Function(f) => Ok(f),
        _ => Err(wrong_kind(l, "function")),
    }
}

fn expect_generator_set<'a>(l: &'a Loaded) -> Result<&'a convexkit::generation::GeneratorSet, CliError> {
    match &l.problem.payload {
        Payload::GeneratorSet(h) => Ok(h),
        _ => Err(wrong_kind(l, "generator_set")),
    }
}

fn expect_cone<'a>(l: &'a Loaded) -> Result<&'a PolyCone, CliError> {
    match &l.problem.payload {
        Payload::Cone(k) => Ok(k),
        _ => Err(wrong_kind(l, "cone")),
    }
}

fn expect_polytope<'a>(l: &'a Loaded) -> Result<&'a Polytope, CliError> {
    match &l.problem.payload {
        Payload::Polytope(p) => Ok(p),
        _ => Err(wrong_kind(l, "polytope")),
    }
}

fn expect_family<'a>(l: &'a Loaded) -> Result<&'a convexkit::calculus::OperatorFamily, CliError> {
    match &l.problem.payload {
        Payload::OperatorFamily(f) => Ok(f),
        _ => Err(wrong_kind(l, "operator_family")),
    }
}

fn arity(files: &[Loaded], n: usize, usage: &str) -> Result<(), CliError> {
    if files.len() != n {
        return Err(CliError::input(format!(
            "expected {n} input file(s) ({usage}), got {}",
            files.len()
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Small shared formatting / evaluation helpers.
// ---------------------------------------------------------------------------

fn exactness_str(e: Exactness) -> &'static str {
    match e {
        Exactness::Exact => "exact",
        Exactness::InfinitesimallyExact => "infinitesimally-exact",
        Exactness::Inexact => "inexact",
    }
}

fn sampled_cell(f: &SampledFunc, x: &[Rational]) -> Cell {
    match f.value_at(x) {
        Some(ExtScalar::Finite(r)) => Cell::Rat(r.clone()),
        Some(ExtScalar::Top) => Cell::Infinite,
        Some(ExtScalar::Bottom) | None => Cell::Blank,
    }
}

fn extended_cell(v: &ExtScalar) -> Cell {
    match v {
        ExtScalar::Finite(r) => Cell::Rat(r.clone()),
        ExtScalar::Top => Cell::Infinite,
        ExtScalar::Bottom => Cell::Blank,
    }
}

fn vec_neg(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|c| -c.clone()).collect()
}

fn lex_sum(a: &LexScalar, b: &LexScalar) -> LexScalar {
    LexScalar::new(&a.std + &b.std, &a.inf + &b.inf)
}

/// 1D polytopes render as intervals in tables.
fn polytope_summary(p: &Polytope) -> String {
    if p.dim() == 1 {
        let mut coords: Vec<Rational> = p.vertices().iter().map(|v| v[0].clone()).collect();
        coords.sort();
        if let (Some(lo), Some(hi)) = (coords.first(), coords.last()) {
            if lo == hi {
                return format!("{{{}}}", format_rational(lo));
            }
            return format!("[{}, {}]", format_rational(lo), format_rational(hi));
        }
    }
    crate::report::fmt_points(p.vertices())
}

/// A direction witnessing a failed openness-at-zero check: some ±ray of the
/// pair lies in the joint span but not in `K₁ − K₂`. When the check fails,
/// such a ray always exists: were every ±ray inside, the difference cone
/// would contain the whole span and the check would have passed.
fn openness_witness(k1: &PolyCone, k2: &PolyCone) -> Result<Option<Vec<Rational>>, CliError> {
    let mut diff_rays = k1.rays().to_vec();
    diff_rays.extend(k2.rays().iter().map(|r| vec_neg(r)));
    let diff = PolyCone::new(k1.dim(), diff_rays)?;
    for ray in k1.rays().iter().chain(k2.rays().iter()) {
        for dir in [ray.clone(), vec_neg(ray)] {
            if !diff.contains(&dir)? {
                return Ok(Some(dir));
            }
        }
    }
    Ok(None)
}

/// The decisive pair examined by the general-position check: the cones
/// themselves for two of them, the product against the diagonal otherwise.
fn decisive_pair(cones: &[PolyCone]) -> (PolyCone, PolyCone) {
    if cones.len() == 2 {
        (cones[0].clone(), cones[1].clone())
    } else {
        let product = cones[1..]
            .iter()
            .fold(cones[0].clone(), |acc, k| acc.product(k));
        (product, diagonal_cone(cones[0].dim(), cones.len()))
    }
}

// ---------------------------------------------------------------------------
// conjugate
// ---------------------------------------------------------------------------

pub fn cmd_conjugate(files: &[Loaded], grid: &[Vec<Rational>]) -> Result<Outcome, CliError> {
    arity(files, 1, "a function")?;
    match expect_function(&files[0])? {
        FunctionPayload::Sampled(f) => {
            let duals: Vec<Vec<Rational>> = if grid.is_empty() {
                f.samples().map(|(x, _)| x.clone()).collect()
            } else {
                grid.to_vec()
            };
            let conj = fenchel_conjugate(f, &duals)?;
            let mut out = Outcome::new(serde_json::json!({
                "conjugate": emit_sampled_function(&conj),
                "dual_points": duals.len(),
            }));
            out.kv("function", format!("sampled on {} point(s)", f.len()));
            out.kv("dual grid", format!("{} point(s)", duals.len()));
            for (y, v) in conj.samples() {
                out.line(format!(
                    "  f*({}) = {}",
                    crate::report::fmt_vec(y),
                    match v {
                        ExtScalar::Finite(r) => format_rational(r),
                        ExtScalar::Top => "top".to_string(),
                        ExtScalar::Bottom => "bottom".to_string(),
                    }
                ));
            }
            let rows = duals
                .iter()
                .map(|y| {
                    let cells = vec![
                        sampled_cell(f, y),
                        conj.value_at(y).map(extended_cell).unwrap_or(Cell::Blank),
                    ];
                    (y.clone(), cells)
                })
                .collect();
            out.plot = Some(PlotData {
                coord_names: PlotData::coord_names(f.dim()),
                value_names: vec!["f".to_string(), "conjugate".to_string()],
                rows,
            });
            Ok(out)
        }
        FunctionPayload::Poly(f) => {
            let conj = fenchel_conjugate_poly(f);
            let domain = conj.domain();
            let values: Result<Vec<Value>, CliError> = grid
                .iter()
                .map(|y| {
                    let v = conj.eval(y)?;
                    Ok(serde_json::json!({
                        "y": vector_value(y),
                        "value": crate::problem::extended_value(&v),
                    }))
                })
                .collect();
            let values = values?;
            let mut out = Outcome::new(serde_json::json!({
                "domain": emit_polytope(&domain),
                "values": values,
            }));
            out.kv("function", format!("polyhedral with {} piece(s)", f.pieces().len()));
            out.kv("conjugate domain", polytope_summary(&domain));
            let rows: Result<Vec<_>, CliError> = grid
                .iter()
                .map(|y| Ok((y.clone(), vec![extended_cell(&conj.eval(y)?)])))
                .collect();
            out.plot = Some(PlotData {
                coord_names: PlotData::coord_names(f.dim()),
                value_names: vec!["conjugate".to_string()],
                rows: rows?,
            });
            Ok(out)
        }
        FunctionPayload::Lex(_) => Err(CliError::input(
            "conjugate expects a sampled or polyhedral function, got a lex-polyhedral one"
                .to_string(),
        )),
    }
}

// ---------------------------------------------------------------------------
// envelope / hsupport
// ---------------------------------------------------------------------------

fn as_dispatch_function(f: &FunctionPayload, what: &str) -> Result<Function, CliError> {
    match f {
        FunctionPayload::Sampled(s) => Ok(Function::Sampled(s.clone())),
        FunctionPayload::Poly(p) => Ok(Function::Poly(p.clone())),
        FunctionPayload::Lex(_) => Err(CliError::input(format!(
            "{what}: lex-polyhedral functions are not accepted here"
        ))),
    }
}

pub fn cmd_envelope(files: &[Loaded], grid: &[Vec<Rational>]) -> Result<Outcome, CliError> {
    arity(files, 2, "a function and a generator set")?;
    let fp = expect_function(&files[0])?;
    let p = as_dispatch_function(fp, &files[0].path)?;
    let h = expect_generator_set(&files[1])?;
    let env = h_convex_envelope(&p, h)?;
    let hconv = is_h_convex(&p, h)?;
    let support = h_support_set(&p, h)?;
    let (env_json, env_desc) = match &env {
        Envelope::Poly(f) => (emit_poly_function(f), format!("polyhedral, {} piece(s)", f.pieces().len())),
        Envelope::Sampled(f) => (emit_sampled_function(f), format!("sampled on {} point(s)", f.len())),
        Envelope::Degenerate => (Value::String("degenerate".to_string()), "degenerate (no minorants)".to_string()),
    };
    let mut out = Outcome::new(serde_json::json!({
        "envelope": env_json,
        "is_h_convex": hconv,
        "support_indices": support,
    }));
    out.kv("envelope", env_desc);
    out.kv("h-convex", hconv);
    out.kv("minorants", format!("{} of {} generator(s)", support.len(), h.members().len()));

    // Plot grid: the function's own grid for sampled input, `--grid` otherwise.
    let plot_grid: Vec<Vec<Rational>> = match fp {
        FunctionPayload::Sampled(s) => s.samples().map(|(x, _)| x.clone()).collect(),
        _ => grid.to_vec(),
    };
    let rows: Result<Vec<_>, CliError> = plot_grid
        .iter()
        .map(|x| {
            let f_cell = match fp {
                FunctionPayload::Sampled(s) => sampled_cell(s, x),
                FunctionPayload::Poly(f) => Cell::Rat(f.eval(x)?),
                FunctionPayload::Lex(_) => Cell::Blank,
            };
            let env_cell = match &env {
                Envelope::Poly(f) => Cell::Rat(f.eval(x)?),
                Envelope::Sampled(f) => sampled_cell(f, x),
                Envelope::Degenerate => Cell::Blank,
            };
            Ok((x.clone(), vec![f_cell, env_cell]))
        })
        .collect();
    out.plot = Some(PlotData {
        coord_names: PlotData::coord_names(p.dim()),
        value_names: vec!["f".to_string(), "envelope".to_string()],
        rows: rows?,
    });
    Ok(out)
}

pub fn cmd_hsupport(files: &[Loaded]) -> Result<Outcome, CliError> {
    arity(files, 2, "a function and a generator set")?;
    let p = as_dispatch_function(expect_function(&files[0])?, &files[0].path)?;
    let h = expect_generator_set(&files[1])?;
    let support = h_support_set(&p, h)?;
    let members: Vec<Value> = support
        .iter()
        .map(|&i| {
            let m = &h.members()[i];
            serde_json::json!({
                "index": i,
                "slope": vector_value(&m.slope),
                "offset": rational_value(&m.offset),
            })
        })
        .collect();
    let mut out = Outcome::new(serde_json::json!({
        "count": support.len(),
        "members": members,
    }));
    out.kv("minorants", format!("{} of {} generator(s)", support.len(), h.members().len()));
    for &i in &support {
        out.line(format!("  [{i}] {}", h.members()[i].describe()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// support-fn / polar
// ---------------------------------------------------------------------------

pub fn cmd_support_fn(files: &[Loaded], grid: &[Vec<Rational>]) -> Result<Outcome, CliError> {
    arity(files, 1, "a polytope")?;
    let u = expect_polytope(&files[0])?;
    let f = support_function(u);
    let mut out = Outcome::new(serde_json::json!({
        "support_function": emit_poly_function(&f),
    }));
    out.kv("polytope", format!("{} vertex/vertices", u.vertices().len()));
    out.kv("pieces", f.pieces().len());
    for p in f.pieces() {
        out.line(format!("  {}", p.describe()));
    }
    let rows: Result<Vec<_>, CliError> = grid
        .iter()
        .map(|x| Ok((x.clone(), vec![Cell::Rat(f.eval(x)?)])))
        .collect();
    out.plot = Some(PlotData {
        coord_names: PlotData::coord_names(u.dim()),
        value_names: vec!["support".to_string()],
        rows: rows?,
    });
    Ok(out)
}

pub fn cmd_polar(files: &[Loaded]) -> Result<Outcome, CliError> {
    arity(files, 1, "a cone")?;
    let k = expect_cone(&files[0])?;
    let p = polar(k)?;
    let mut out = Outcome::new(serde_json::json!({ "polar": emit_cone(&p) }));
    out.kv("input rays", crate::report::fmt_points(k.rays()));
    out.kv("polar rays", crate::report::fmt_points(p.rays()));
    Ok(out)
}

// ---------------------------------------------------------------------------
// nonoblate / genpos / decompose
// ---------------------------------------------------------------------------

pub fn cmd_nonoblate(files: &[Loaded]) -> Result<Outcome, CliError> {
    arity(files, 2, "two cones")?;
    let k1 = expect_cone(&files[0])?;
    let k2 = expect_cone(&files[1])?;
    let pair = ConePair::new(k1.clone(), k2.clone())?;
    let rep = nonoblate_check(&pair)?;
    let diagonal = match nonoblate_diagonal_equivalence(&pair) {
        Ok(d) => serde_json::json!({
            "direct": d.direct,
            "diagonal": d.diagonal,
            "equal": d.equal,
        }),
        Err(e @ Error::CapExceeded { .. }) => Value::String(format!("skipped: {e}")),
        Err(e) => return Err(e.into()),
    };
    let mut out = Outcome::new(serde_json::json!({
        "nonoblate": rep.nonoblate,
        "span_dim": rep.span_dim,
        "radius": rep.radius.as_ref().map(rational_value),
        "diagonal_reformulation": diagonal,
    }));
    out.kv("nonoblate", rep.nonoblate);
    out.kv("span dim", rep.span_dim);
    if let Some(r) = &rep.radius {
        out.kv("radius", format_rational(r));
    }
    if !rep.nonoblate {
        let witness = openness_witness(k1, k2)?;
        if let Some(dir) = &witness {
            out.kv("witness", crate::report::fmt_vec(dir));
        }
        out.certificate = Some(serde_json::json!({
            "reason": "the pair is oblate: a span direction does not decompose as k1 - k2",
            "direction": witness.as_ref().map(|d| vector_value(d)),
        }));
    }
    Ok(out)
}

pub fn cmd_genpos(files: &[Loaded]) -> Result<Outcome, CliError> {
    if files.len() < 2 {
        return Err(CliError::input("genpos expects at least two cone files".to_string()));
    }
    let cones: Vec<PolyCone> = files
        .iter()
        .map(|l| expect_cone(l).map(Clone::clone))
        .collect::<Result<_, _>>()?;
    let rep = general_position_check(&cones)?;
    let mut out = Outcome::new(serde_json::json!({
        "in_general_position": rep.in_general_position,
        "difference_is_span": rep.difference_is_span,
        "complemented": rep.complemented,
        "nonoblate": rep.nonoblate.nonoblate,
        "checked_dim": rep.checked_dim,
    }));
    out.kv("general position", rep.in_general_position);
    out.kv("difference=span", rep.difference_is_span);
    out.kv("nonoblate", rep.nonoblate.nonoblate);
    out.kv("checked dim", rep.checked_dim);
    if !rep.in_general_position {
        let (a, b) = decisive_pair(&cones);
        let witness = openness_witness(&a, &b)?;
        if let Some(dir) = &witness {
            out.kv("witness", crate::report::fmt_vec(dir));
        }
        out.certificate = Some(serde_json::json!({
            "reason": "general position fails for the decisive pair",
            "direction": witness.as_ref().map(|d| vector_value(d)),
            "checked_dim": rep.checked_dim,
        }));
    }
    Ok(out)
}

pub fn cmd_decompose(files: &[Loaded]) -> Result<Outcome, CliError> {
    if files.len() < 2 {
        return Err(CliError::input("decompose expects at least two cone files".to_string()));
    }
    let cones: Vec<PolyCone> = files
        .iter()
        .map(|l| expect_cone(l).map(Clone::clone))
        .collect::<Result<_, _>>()?;
    let rep = convexkit::separation::polar_decomposition_check(&cones)?;
    let decompositions: Vec<Value> = rep
        .decompositions
        .iter()
        .map(|(generator, parts)| {
            serde_json::json!({
                "generator": vector_value(generator),
                "parts": parts.as_ref().map(|ps| {
                    ps.iter().map(|p| vector_value(p)).collect::<Vec<Value>>()
                }),
            })
        })
        .collect();
    let mut out = Outcome::new(serde_json::json!({
        "equal": rep.equal,
        "hypothesis_general_position": rep.hypothesis_general_position,
        "polar_of_intersection": emit_cone(&rep.lhs),
        "sum_of_polars": emit_cone(&rep.rhs),
        "decompositions": decompositions,
    }));
    out.kv("general position", rep.hypothesis_general_position);
    out.kv("polar(∩) = Σ polar", rep.equal);
    out.kv("generators", rep.lhs.rays().len());
    if !rep.hypothesis_general_position {
        let (a, b) = decisive_pair(&cones);
        let witness = openness_witness(&a, &b)?;
        out.certificate = Some(serde_json::json!({
            "reason": "general-position hypothesis fails; the polar decomposition is not guaranteed",
            "direction": witness.as_ref().map(|d| vector_value(d)),
            "equal_anyway": rep.equal,
        }));
    } else if !rep.equal {
        out.certificate = Some(serde_json::json!({
            "reason": "sides differ under general position",
        }));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// sandwich
// ---------------------------------------------------------------------------

/// Collects exactly two polyhedral functions from the inputs: two `function`
/// files, or one `sandwich` file bundling both.
fn two_functions(files: &[Loaded], usage: &str) -> Result<(PolyFunc, PolyFunc), CliError> {
    let mut funcs: Vec<PolyFunc> = Vec::new();
    for l in files {
        match &l.problem.payload {
            Payload::Function(f) => funcs.push(f.as_poly(&l.path)?),
            Payload::Sandwich { p, q } => {
                funcs.push(p.as_poly(&format!("{}: payload.p", l.path))?);
                funcs.push(q.as_poly(&format!("{}: payload.q", l.path))?);
            }
            _ => return Err(wrong_kind(l, "function")),
        }
    }
    if funcs.len() != 2 {
        return Err(CliError::input(format!(
            "{usage}: expected exactly two functions, got {}",
            funcs.len()
        )));
    }
    let q = funcs.pop().expect("len checked");
    let p = funcs.pop().expect("len checked");
    Ok((p, q))
}

pub fn cmd_sandwich(files: &[Loaded]) -> Result<Outcome, CliError> {
    let (p, q) = two_functions(files, "sandwich")?;
    match sandwich(&p, &q)? {
        SandwichWitness::Functional(t) => {
            let mut out = Outcome::new(serde_json::json!({
                "witness": vector_value(&t),
            }));
            out.kv("witness", format!("t = {}", crate::report::fmt_vec(&t)));
            out.line("  -q(x) \u{2264} \u{27e8}t, x\u{27e9} \u{2264} p(x) for all x".to_string());
            Ok(out)
        }
        SandwichWitness::Violation(x) => {
            // Violations scale: normalize so the largest coordinate is ±1.
            let scale = x
                .iter()
                .map(|c| if c < &Rational::from_integer(0.into()) { -c.clone() } else { c.clone() })
                .max()
                .filter(|m| m > &Rational::from_integer(0.into()))
                .unwrap_or_else(|| Rational::from_integer(1.into()));
            let x: Vec<Rational> = x.iter().map(|c| c / &scale).collect();
            let gap = p.eval(&x)? + q.eval(&x)?;
            debug_assert!(gap < Rational::from_integer(0.into()));
            let mut out = Outcome::new(serde_json::json!({ "witness": Value::Null }));
            out.kv("violation", format!("x = {}", crate::report::fmt_vec(&x)));
            out.kv("p(x) + q(x)", format_rational(&gap));
            out.certificate = Some(serde_json::json!({
                "reason": "p + q is strictly negative somewhere; no functional fits between -q and p",
                "point": vector_value(&x),
                "p_plus_q": rational_value(&gap),
            }));
            Ok(out)
        }
    }
}

// ---------------------------------------------------------------------------
// subdiff / cop / compose
// ---------------------------------------------------------------------------

pub fn cmd_subdiff(files: &[Loaded]) -> Result<Outcome, CliError> {
    arity(files, 1, "a sublinear polyhedral function")?;
    let f = expect_function(&files[0])?.as_poly(&files[0].path)?;
    let s = support_set(&f)?;
    let mut out = Outcome::new(serde_json::json!({
        "subdifferential": emit_polytope(&s),
    }));
    out.kv("subdifferential", polytope_summary(&s));
    out.kv("vertices", s.vertices().len());
    Ok(out)
}

pub fn cmd_cop(files: &[Loaded]) -> Result<Outcome, CliError> {
    if files.is_empty() {
        return Err(CliError::input(
            "cop expects an operator_family file, optionally followed by single-member \
             candidate files"
                .to_string(),
        ));
    }
    let family = expect_family(&files[0])?;
    let hull = support_hull(family)?;
    let row_hulls: Vec<Value> = hull.row_hulls().iter().map(emit_polytope).collect();

    let mut candidates = Vec::new();
    let mut contained_flags: Vec<bool> = Vec::new();
    let mut violations: Vec<Value> = Vec::new();
    for (ci, l) in files[1..].iter().enumerate() {
        let fam = expect_family(l)?;
        if fam.members().len() != 1 {
            return Err(CliError::input(format!(
                "{}: candidate files must hold exactly one member, got {}",
                l.path,
                fam.members().len()
            )));
        }
        let t: &MatrixOperator = &fam.members()[0];
        if t.m() != family.m() || t.n() != family.n() {
            return Err(CliError::input(format!(
                "{}: candidate shape {}x{} does not match the family's {}x{}",
                l.path,
                t.m(),
                t.n(),
                family.m(),
                family.n()
            )));
        }
        let contained = hull.contains(t)?;
        let mut rows_outside = Vec::new();
        if !contained {
            for (r, row_hull) in hull.row_hulls().iter().enumerate() {
                if !row_hull.contains(&t.rows()[r])? {
                    rows_outside.push(r);
                }
            }
            violations.push(serde_json::json!({
                "candidate": ci,
                "path": l.path,
                "rows_outside": rows_outside.clone(),
            }));
        }
        let matrix: Vec<Value> = t.rows().iter().map(|row| vector_value(row)).collect();
        contained_flags.push(contained);
        candidates.push(serde_json::json!({
            "path": l.path,
            "member": matrix,
            "contained": contained,
            "rows_outside": rows_outside,
        }));
    }

    let mut out = Outcome::new(serde_json::json!({
        "rows": family.m(),
        "cols": family.n(),
        "members": family.members().len(),
        "row_hulls": row_hulls,
        "candidates": candidates,
    }));
    out.kv("family", format!("{} member(s), shape {}x{}", family.members().len(), family.m(), family.n()));
    for (r, row_hull) in hull.row_hulls().iter().enumerate() {
        out.line(format!("  row {r} hull: {}", polytope_summary(row_hull)));
    }
    for (l, contained) in files[1..].iter().zip(contained_flags) {
        out.line(format!(
            "  candidate {}: {}",
            l.path,
            if contained { "inside the support hull" } else { "OUTSIDE the support hull" }
        ));
    }
    if !violations.is_empty() {
        out.certificate = Some(serde_json::json!({
            "reason": "candidate operator(s) lie outside the support hull",
            "violations": violations,
        }));
    }
    Ok(out)
}

pub fn cmd_compose(files: &[Loaded]) -> Result<Outcome, CliError> {
    arity(files, 1, "a composition bundle")?;
    let (outer, inners) = match &files[0].problem.payload {
        Payload::Composition { outer, inners } => (outer.clone(), inners.clone()),
        _ => return Err(wrong_kind(&files[0], "composition")),
    };
    let rep = composition_subdifferential(&inners, &outer)?;
    let mut out = Outcome::new(serde_json::json!({
        "agree": rep.agree,
        "direct": emit_polytope(&rep.direct),
        "formula": emit_polytope(&rep.formula),
    }));
    out.kv("direct", polytope_summary(&rep.direct));
    out.kv("formula", polytope_summary(&rep.formula));
    out.kv("agree", rep.agree);
    if !rep.agree {
        out.certificate = Some(serde_json::json!({
            "reason": "direct and formula subdifferentials differ",
        }));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// epsdiff / dsubdiff
// ---------------------------------------------------------------------------

pub fn cmd_epsdiff(
    files: &[Loaded],
    at: &[Rational],
    eps: &Rational,
    tests: &[Vec<Rational>],
) -> Result<Outcome, CliError> {
    arity(files, 1, "a polyhedral function")?;
    let f = expect_function(&files[0])?.as_poly(&files[0].path)?;
    let ed = eps_subdifferential(&f, at, eps)?;
    let value = f.eval(at)?;
    let mut probes = Vec::new();
    let mut out_lines = Vec::new();
    for y in tests {
        let a = ed.contains(y)?;
        let b = ed.contains_by_inequality(y)?;
        debug_assert_eq!(a, b, "conjugate and inequality routes must agree");
        probes.push(serde_json::json!({
            "y": vector_value(y),
            "member": a,
            "routes_agree": a == b,
        }));
        out_lines.push(format!(
            "  {} {} the \u{3b5}-subdifferential",
            crate::report::fmt_vec(y),
            if a { "is in" } else { "is NOT in" }
        ));
    }
    let mut out = Outcome::new(serde_json::json!({
        "base": vector_value(at),
        "eps": rational_value(eps),
        "value_at_base": rational_value(&value),
        "description": ed.description().map(emit_polytope),
        "probes": probes,
    }));
    out.kv("base", crate::report::fmt_vec(at));
    out.kv("eps", format_rational(eps));
    match ed.description() {
        Some(d) => out.kv("set", polytope_summary(d)),
        None => out.kv("set", "not enumerated above 2 dimensions (membership probes still work)"),
    }
    for l in out_lines {
        out.line(l);
    }
    Ok(out)
}

pub fn cmd_dsubdiff(files: &[Loaded], at: &[Rational]) -> Result<Outcome, CliError> {
    arity(files, 1, "a lex-polyhedral function")?;
    let f = expect_function(&files[0])?.as_lex(&files[0].path)?;
    let d = infinitesimal_subdifferential(&f, at)?;
    let minimum = is_infinitesimal_minimum(&f, at)?;
    let mut out = Outcome::new(serde_json::json!({
        "base": vector_value(at),
        "subdifferential": emit_polytope(&d),
        "infinitesimal_minimum": minimum,
    }));
    out.kv("base", crate::report::fmt_vec(at));
    out.kv("set", polytope_summary(&d));
    out.kv("infinitesimal min", minimum);
    Ok(out)
}

// ---------------------------------------------------------------------------
// convolve / chainrule
// ---------------------------------------------------------------------------

pub fn cmd_convolve(files: &[Loaded], grid: &[Vec<Rational>]) -> Result<Outcome, CliError> {
    arity(files, 1, "a convolution bundle")?;
    let conv: &ConvolutionPayload = match &files[0].problem.payload {
        Payload::Convolution(c) => c,
        _ => return Err(wrong_kind(&files[0], "convolution")),
    };
    match &conv.repr {
        ConvolutionRepr::Grid { mid_dim, y_grid, points } => {
            let f1 = conv.f1.as_lex(&format!("{}: payload.f1", files[0].path))?;
            let f2 = conv.f2.as_lex(&format!("{}: payload.f2", files[0].path))?;
            let mut evals = Vec::new();
            let mut rows = Vec::new();
            let mut out_lines = Vec::new();
            for (x, z) in points {
                let pt = infimal_convolution_grid(&f1, &f2, *mid_dim, y_grid, x, z)?;
                evals.push(serde_json::json!({
                    "x": vector_value(x),
                    "z": vector_value(z),
                    "value": lex_value(&pt.value),
                    "witness": vector_value(&pt.witness),
                    "exactness": exactness_str(pt.exactness),
                }));
                out_lines.push(format!(
                    "  ({}, {}) \u{2192} {} at y = {}  [{}]",
                    crate::report::fmt_vec(x),
                    crate::report::fmt_vec(z),
                    format_rational(&pt.value.std),
                    crate::report::fmt_vec(&pt.witness),
                    exactness_str(pt.exactness),
                ));
                let mut coords = x.clone();
                coords.extend(z.iter().cloned());
                rows.push((coords, vec![Cell::Rat(pt.value.std.clone()), Cell::Rat(pt.value.inf.clone())]));
            }
            let mut out = Outcome::new(serde_json::json!({
                "representation": "grid",
                "y_grid_points": y_grid.len(),
                "evaluations": evals,
            }));
            out.kv("middle grid", format!("{} point(s)", y_grid.len()));
            out.kv("evaluations", points.len());
            for l in out_lines {
                out.line(l);
            }
            let coord_dim = rows.first().map_or(2, |(c, _)| c.len());
            out.plot = Some(PlotData {
                coord_names: PlotData::coord_names(coord_dim),
                value_names: vec!["convolution".to_string(), "convolution_inf".to_string()],
                rows,
            });
            Ok(out)
        }
        ConvolutionRepr::Polyhedral { probes } => {
            let f1 = conv.f1.as_lex(&format!("{}: payload.f1", files[0].path))?;
            let f2 = conv.f2.as_lex(&format!("{}: payload.f2", files[0].path))?;
            let h = infimal_convolution_poly1d(&f1.std_part(), &f2.std_part())?;
            let mut probe_json = Vec::new();
            let mut out_lines = Vec::new();
            for (x, y, z) in probes {
                let e = convolution_exactness_1d(&f1, &f2, x, y, z)?;
                probe_json.push(serde_json::json!({
                    "x": rational_value(x),
                    "y": rational_value(y),
                    "z": rational_value(z),
                    "exactness": exactness_str(e),
                }));
                out_lines.push(format!(
                    "  probe (x, y, z) = ({}, {}, {}): {}",
                    format_rational(x),
                    format_rational(y),
                    format_rational(z),
                    exactness_str(e),
                ));
            }
            let mut out = Outcome::new(serde_json::json!({
                "representation": "polyhedral",
                "convolution": emit_poly_function(&h),
                "probes": probe_json,
            }));
            out.kv("convolution", format!("{} piece(s) on (x, z)", h.pieces().len()));
            for p in h.pieces() {
                out.line(format!("  {}", p.describe()));
            }
            for l in out_lines {
                out.line(l);
            }
            let rows: Result<Vec<_>, CliError> = grid
                .iter()
                .map(|xz| Ok((xz.clone(), vec![Cell::Rat(h.eval(xz)?)])))
                .collect();
            out.plot = Some(PlotData {
                coord_names: vec!["x".to_string(), "z".to_string()],
                value_names: vec!["convolution".to_string()],
                rows: rows?,
            });
            Ok(out)
        }
    }
}

pub fn cmd_chainrule(files: &[Loaded], at: &[Rational]) -> Result<Outcome, CliError> {
    // Two function files, or one convolution bundle carrying both factors.
    let (f1, f2) = if files.len() == 1 {
        match &files[0].problem.payload {
            Payload::Convolution(c) => (
                c.f1.as_lex(&format!("{}: payload.f1", files[0].path))?,
                c.f2.as_lex(&format!("{}: payload.f2", files[0].path))?,
            ),
            _ => return Err(wrong_kind(&files[0], "convolution")),
        }
    } else {
        arity(files, 2, "two functions, or one convolution bundle")?;
        (
            expect_function(&files[0])?.as_lex(&files[0].path)?,
            expect_function(&files[1])?.as_lex(&files[1].path)?,
        )
    };
    if at.len() != 3 {
        return Err(CliError::input(format!(
            "--at must name the evaluation point as x,y,z (three rationals), got {} value(s)",
            at.len()
        )));
    }
    let (x, y, z) = (&at[0], &at[1], &at[2]);
    match chain_rule_check(&f1, &f2, x, y, z) {
        Ok(rep) => {
            let mut out = Outcome::new(serde_json::json!({
                "equal": rep.equal,
                "general_position": rep.general_position,
                "exactness": exactness_str(rep.exactness),
                "lhs": emit_polytope(&rep.lhs),
                "rhs": rep.rhs.as_ref().map(emit_polytope),
            }));
            out.kv("exactness", exactness_str(rep.exactness));
            out.kv("general position", rep.general_position);
            out.kv("lhs", polytope_summary(&rep.lhs));
            match &rep.rhs {
                Some(r) => out.kv("rhs", polytope_summary(r)),
                None => out.kv("rhs", "empty composition"),
            }
            out.kv("equal", rep.equal);
            if !rep.general_position {
                out.certificate = Some(serde_json::json!({
                    "reason": "general-position hypothesis fails; equality is not guaranteed",
                    "equal_anyway": rep.equal,
                }));
            } else if !rep.equal {
                out.certificate = Some(serde_json::json!({
                    "reason": "chain-rule equality fails under its hypotheses",
                }));
            }
            Ok(out)
        }
        Err(Error::NotInfinitesimallyExact) => {
            let attained = lex_sum(&f1.eval(&[x.clone(), y.clone()])?, &f2.eval(&[y.clone(), z.clone()])?);
            let mut out = Outcome::new(serde_json::json!({
                "equal": Value::Null,
                "exactness": "inexact",
            }));
            out.kv("exactness", "inexact (hypothesis fails)");
            out.kv("attained at y", format_rational(&attained.std));
            out.certificate = Some(serde_json::json!({
                "reason": "the convolution is not infinitesimally exact at the supplied point",
                "point": { "x": rational_value(x), "y": rational_value(y), "z": rational_value(z) },
                "attained": lex_value(&attained),
            }));
            Ok(out)
        }
        Err(e) => Err(e.into()),
    }
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

pub fn cmd_check(suite: &str, seed: u64, cap: Option<usize>) -> Result<Outcome, CliError> {
    let mut config = SuiteConfig::new(seed);
    config.instance_cap = cap;
    let reports = if suite == "all" {
        run_all(&config)
    } else {
        match run_suite(suite, &config) {
            Some(r) => vec![r],
            None => {
                return Err(CliError::input(format!(
                    "unknown suite {suite:?} (expected \"all\" or one of: {})",
                    SUITE_NAMES.join(", ")
                )))
            }
        }
    };
    let mut out = Outcome::new(serde_json::json!({
        "suites": reports
            .iter()
            .map(|r| serde_json::to_value(r).expect("suite reports serialize"))
            .collect::<Vec<Value>>(),
    }));
    out.line(format!("{:<16} {:>9}  result", "suite", "instances"));
    let mut failures = serde_json::Map::new();
    for r in &reports {
        out.line(format!(
            "{:<16} {:>9}  {}",
            r.suite,
            r.instances,
            if r.passed { "PASS" } else { "FAIL" }
        ));
        if !r.passed {
            failures.insert(
                r.suite.to_string(),
                Value::Array(r.failures.iter().map(|f| Value::String(f.clone())).collect()),
            );
        }
    }
    if !failures.is_empty() {
        out.certificate = Some(serde_json::json!({
            "reason": "invariant suite failures",
            "failures": failures,
        }));
    }
    Ok(out)
}
