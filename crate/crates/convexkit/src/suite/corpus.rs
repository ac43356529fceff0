//! Shared corpus generators and in-suite oracles. Every random object is
//! drawn from a per-instance RNG stream derived from the suite seed, so
//! corpora are reproducible and independent of scheduling; the oracles here
//! recompute target quantities by routes independent of the operations under
//! test (sort-based hulls, definitional suprema, breakpoint scans, direct
//! simplex programs).

use num_traits::{One, Signed, Zero};
use rand::{Rng as _, SeedableRng};

use crate::affine::AffineFunctional;
use crate::cone::PolyCone;
use crate::func::{LexPiece, LexPolyFunc, PolyFunc, SampledFunc};
use crate::linalg::{dot, is_zero_vec, vec_neg, zeros};
use crate::lp::{lp_solve_raw, Outcome, Program, Sense};
use crate::polytope::Polytope;
use crate::scalar::{rat, ratio, ExtScalar, LexScalar, Rational};

pub(crate) type Rng = rand_chacha::ChaCha8Rng;

/// Deterministic per-instance stream: same seed + ids ⇒ same draws, in any
/// execution order.
pub(crate) fn instance_rng(seed: u64, suite_id: u64, stream: u64) -> Rng {
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream((suite_id << 40) ^ stream);
    rng
}

pub(crate) fn rand_rational(rng: &mut Rng) -> Rational {
    ratio(rng.gen_range(-12..=12), rng.gen_range(1..=4))
}

pub(crate) fn rand_small(rng: &mut Rng) -> Rational {
    ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

pub(crate) fn rand_vec(rng: &mut Rng, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| rand_small(rng)).collect()
}

pub(crate) fn rand_int_vec(rng: &mut Rng, dim: usize, bound: i64) -> Vec<Rational> {
    (0..dim).map(|_| rat(rng.gen_range(-bound..=bound))).collect()
}

/// A sampled function on `len` distinct 1D half-integer grid points; about
/// one point in six is `Top`, and at least two are kept finite.
pub(crate) fn rand_sampled_1d(rng: &mut Rng, len: usize) -> SampledFunc {
    let mut xs: Vec<i64> = (-40..=40).collect();
    for i in (1..xs.len()).rev() {
        xs.swap(i, rng.gen_range(0..=i));
    }
    xs.truncate(len);
    let samples = xs
        .into_iter()
        .enumerate()
        .map(|(i, x)| {
            let v = if i >= 2 && rng.gen_ratio(1, 6) {
                ExtScalar::Top
            } else {
                ExtScalar::Finite(rand_rational(rng))
            };
            (vec![ratio(x, 2)], v)
        })
        .collect();
    SampledFunc::new(1, samples).unwrap()
}

/// A sampled function on `len` distinct 2D lattice points.
pub(crate) fn rand_sampled_2d(rng: &mut Rng, len: usize) -> SampledFunc {
    let mut grid: Vec<(i64, i64)> = Vec::new();
    for a in -6..=6 {
        for b in -6..=6 {
            grid.push((a, b));
        }
    }
    for i in (1..grid.len()).rev() {
        grid.swap(i, rng.gen_range(0..=i));
    }
    grid.truncate(len);
    let samples = grid
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let v = if i >= 3 && rng.gen_ratio(1, 6) {
                ExtScalar::Top
            } else {
                ExtScalar::Finite(rand_rational(rng))
            };
            (vec![rat(a), rat(b)], v)
        })
        .collect();
    SampledFunc::new(2, samples).unwrap()
}

/// Sort-based 1D lower convex hull (monotone chain), independent of the
/// library's facet-fitting construction.
pub(crate) fn lower_hull_1d(points: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut pts = points.to_vec();
    pts.sort();
    let mut hull: Vec<(Rational, Rational)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            let lhs = (&b.1 - &a.1) * (&p.0 - &b.0);
            let rhs = (&p.1 - &b.1) * (&b.0 - &a.0);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

pub(crate) fn hull_value_1d(hull: &[(Rational, Rational)], x: &Rational) -> Option<Rational> {
    if hull.len() == 1 {
        return (&hull[0].0 == x).then(|| hull[0].1.clone());
    }
    for w in hull.windows(2) {
        let (x0, v0) = &w[0];
        let (x1, v1) = &w[1];
        if x0 <= x && x <= x1 {
            let t = (x - x0) / (x1 - x0);
            return Some(v0 + &t * (v1 - v0));
        }
    }
    None
}

/// Lower convex envelope value of finite sample data at `x`, by one direct
/// simplex program over convex weights; `None` outside the domain hull.
pub(crate) fn lower_envelope_value(
    domain: &[(Vec<Rational>, Rational)],
    x: &[Rational],
) -> crate::error::Result<Option<Rational>> {
    let k = domain.len();
    let mut prog = Program::nonnegative(k);
    for c in 0..x.len() {
        let row: Vec<Rational> = domain.iter().map(|(p, _)| p[c].clone()).collect();
        prog.eq(row, x[c].clone());
    }
    prog.eq(vec![Rational::one(); k], Rational::one());
    let obj: Vec<Rational> = domain.iter().map(|(_, v)| v.clone()).collect();
    match lp_solve_raw(Sense::Min, &obj, &prog)? {
        Outcome::Optimal { value, .. } => Ok(Some(value)),
        Outcome::Infeasible { .. } => Ok(None),
        Outcome::Unbounded { .. } => unreachable!("weights range over a simplex"),
    }
}

pub(crate) fn rand_cone(rng: &mut Rng, dim: usize) -> PolyCone {
    let count = rng.gen_range(1..=4);
    let rays: Vec<Vec<Rational>> = (0..count)
        .map(|_| rand_int_vec(rng, dim, 5))
        .filter(|r| !is_zero_vec(r))
        .collect();
    PolyCone::new(dim, rays).unwrap()
}

pub(crate) fn rand_sublinear(rng: &mut Rng, dim: usize, max_pieces: usize) -> PolyFunc {
    let count = rng.gen_range(1..=max_pieces);
    let pieces = (0..count)
        .map(|_| AffineFunctional::linear(rand_int_vec(rng, dim, 5)))
        .collect();
    PolyFunc::new(dim, pieces).unwrap()
}

pub(crate) fn rand_poly(rng: &mut Rng, dim: usize, max_pieces: usize) -> PolyFunc {
    let count = rng.gen_range(1..=max_pieces);
    let pieces = (0..count)
        .map(|_| AffineFunctional::new(rand_vec(rng, dim), rand_small(rng)))
        .collect();
    PolyFunc::new(dim, pieces).unwrap()
}

pub(crate) fn rand_lex_poly(rng: &mut Rng, dim: usize) -> LexPolyFunc {
    let count = rng.gen_range(1..=4);
    let pieces = (0..count)
        .map(|_| LexPiece {
            slope: rand_vec(rng, dim),
            offset: LexScalar::new(rand_small(rng), rand_small(rng)),
        })
        .collect();
    LexPolyFunc::new(dim, pieces).unwrap()
}

/// A sandwich instance feasible by construction: `t` is planted as a convex
/// combination of the slopes of `P`, and `Q` receives `−t` as a slope.
pub(crate) fn feasible_sandwich(rng: &mut Rng, dim: usize) -> (PolyFunc, PolyFunc, Vec<Rational>) {
    let p = rand_sublinear(rng, dim, 4);
    let weights: Vec<Rational> =
        (0..p.pieces().len()).map(|_| rat(rng.gen_range(0..=4))).collect();
    let total: Rational = weights.iter().fold(rat(1), |acc, w| acc + w);
    let mut t = zeros(dim);
    for (piece, w) in p.pieces().iter().zip(&weights) {
        for c in 0..dim {
            t[c] += w * &piece.slope[c] / &total;
        }
    }
    for c in 0..dim {
        t[c] += &p.pieces()[0].slope[c] / &total;
    }
    let mut q_pieces = vec![AffineFunctional::linear(vec_neg(&t))];
    for _ in 0..rng.gen_range(0..=2) {
        q_pieces.push(AffineFunctional::linear(rand_int_vec(rng, dim, 5)));
    }
    (p, PolyFunc::new(dim, q_pieces).unwrap(), t)
}

/// A sandwich instance infeasible by construction: the support sets are
/// separated along the first coordinate.
pub(crate) fn infeasible_sandwich(rng: &mut Rng, dim: usize) -> (PolyFunc, PolyFunc) {
    let mut make = |lo: i64, hi: i64| -> PolyFunc {
        let count = rng.gen_range(1..=3);
        let pieces = (0..count)
            .map(|_| {
                let mut s = rand_int_vec(rng, dim, 5);
                s[0] = rat(rng.gen_range(lo..=hi));
                AffineFunctional::linear(s)
            })
            .collect();
        PolyFunc::new(dim, pieces).unwrap()
    };
    (make(2, 5), make(-1, 1))
}

/// LP certificate that a row escapes the hull of the given rows: the
/// positive optimum of `max ⟨t,x⟩ − z` over the unit box with every row
/// constrained below `z`. Zero when `t` is dominated.
pub(crate) fn max_row_violation(
    t: &[Rational],
    rows: &[Vec<Rational>],
) -> crate::error::Result<Rational> {
    let n = t.len();
    let total = n + 1;
    let mut prog = Program::new(total);
    for row in rows {
        let mut coeffs = row.clone();
        coeffs.push(-Rational::one());
        prog.le(coeffs, Rational::zero());
    }
    for c in 0..n {
        let mut hi = zeros(total);
        hi[c] = Rational::one();
        prog.le(hi, Rational::one());
        let mut lo = zeros(total);
        lo[c] = -Rational::one();
        prog.le(lo, Rational::one());
    }
    let mut obj: Vec<Rational> = t.to_vec();
    obj.push(-Rational::one());
    match lp_solve_raw(Sense::Max, &obj, &prog)? {
        Outcome::Optimal { value, .. } => Ok(value),
        _ => unreachable!("box-constrained program with a feasible origin"),
    }
}

/// The exact subdifferential built directly from active pieces: the hull of
/// the slopes attaining the maximum at the base point.
pub(crate) fn active_slope_hull(
    f: &PolyFunc,
    base: &[Rational],
) -> crate::error::Result<Polytope> {
    let value = f.eval(base)?;
    let mut gens = Vec::new();
    for piece in f.pieces() {
        if piece.eval(base)? == value {
            gens.push(piece.slope.clone());
        }
    }
    Polytope::new(f.dim(), gens)?.reduced()
}

/// A probe strictly outside the polytope: push past the largest first
/// coordinate of any vertex.
pub(crate) fn outside_probe(p: &Polytope) -> Vec<Rational> {
    let mut probe = p.vertices()[0].clone();
    let max0 = p.vertices().iter().map(|v| v[0].clone()).max().unwrap();
    probe[0] = max0 + Rational::one();
    probe
}

/// A random convolution factor on ℝ² whose middle-variable slopes cover
/// both signs with magnitude at least one, so every section is coercive.
pub(crate) fn rand_factor(rng: &mut Rng, middle_coord: usize) -> PolyFunc {
    let mut pieces = Vec::new();
    let mut down = rand_vec(rng, 2);
    down[middle_coord] = rat(-rng.gen_range(1..=3));
    pieces.push(AffineFunctional::new(down, rand_small(rng)));
    let mut up = rand_vec(rng, 2);
    up[middle_coord] = rat(rng.gen_range(1..=3));
    pieces.push(AffineFunctional::new(up, rand_small(rng)));
    for _ in 0..rng.gen_range(0..=2) {
        pieces.push(AffineFunctional::new(rand_vec(rng, 2), rand_small(rng)));
    }
    PolyFunc::new(2, pieces).unwrap()
}

/// Middle-variable envelope pieces of `f₁(x,·) + f₂(·,z)`.
pub(crate) fn section_pieces(
    f1: &PolyFunc,
    f2: &PolyFunc,
    x: &Rational,
    z: &Rational,
) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    for p1 in f1.pieces() {
        for p2 in f2.pieces() {
            out.push((
                &p1.slope[1] + &p2.slope[0],
                &p1.slope[0] * x + &p2.slope[1] * z + &p1.offset + &p2.offset,
            ));
        }
    }
    out
}

/// Breakpoint-scan oracle for the minimum of a coercive upper envelope of
/// affine pieces; returns (value, smallest minimizing breakpoint).
pub(crate) fn section_min(pieces: &[(Rational, Rational)]) -> (Rational, Rational) {
    let mut cands = vec![Rational::zero()];
    for (i, (si, oi)) in pieces.iter().enumerate() {
        for (sj, oj) in &pieces[i + 1..] {
            if si != sj {
                cands.push((oj - oi) / (si - sj));
            }
        }
    }
    cands.sort();
    cands.dedup();
    let eval =
        |y: &Rational| -> Rational { pieces.iter().map(|(s, o)| s * y + o).max().unwrap() };
    cands.iter().map(|y| (eval(y), y.clone())).min().unwrap()
}

/// Definitional conjugate of sampled data at one dual point: the maximum of
/// `⟨y,x⟩ − f(x)` over finite samples.
pub(crate) fn definitional_conjugate(
    domain: &[(Vec<Rational>, Rational)],
    y: &[Rational],
) -> Rational {
    domain
        .iter()
        .map(|(x, v)| dot(y, x) - v)
        .max()
        .expect("domain nonempty")
}

/// Dominated extra piece for pinning tests: the average of two pieces with
/// the offset lowered, which stays strictly below their maximum everywhere.
pub(crate) fn dominated_average(a: &AffineFunctional, b: &AffineFunctional) -> AffineFunctional {
    let slope: Vec<Rational> = a
        .slope
        .iter()
        .zip(&b.slope)
        .map(|(p, q)| (p + q) / rat(2))
        .collect();
    let offset = (&a.offset + &b.offset) / rat(2) - Rational::one();
    AffineFunctional::new(slope, offset)
}

/// Is the rational strictly negative? Convenience for witness checks.
pub(crate) fn strictly_negative(r: &Rational) -> bool {
    r.is_negative() && !r.is_zero()
}
