//! Generation of convex functions from families of affine minorants:
//! support sets, envelopes, convexity tests, conjugation (sampled and
//! polyhedral), biconjugates, and support functions of polytopes.

use num_traits::Zero;

use crate::affine::AffineFunctional;
use crate::error::{Error, Result};
use crate::func::{Function, PolyFunc, SampledFunc};
use crate::linalg::{dot, solve_linear_system, vec_sub};
use crate::lp::{lp_solve_raw, Outcome, Program, Sense};
use crate::polytope::Polytope;
use crate::scalar::{ExtScalar, Rational};

/// A finite family of affine functionals used as elementary minorants.
/// Members are deduplicated by exact (slope, offset) comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    dim: usize,
    members: Vec<AffineFunctional>,
}

impl GeneratorSet {
    pub fn new(dim: usize, members: Vec<AffineFunctional>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Empty("generator set needs at least one member"));
        }
        let mut kept: Vec<AffineFunctional> = Vec::with_capacity(members.len());
        for m in members {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.dim() });
            }
            if !kept.contains(&m) {
                kept.push(m);
            }
        }
        Ok(GeneratorSet { dim, members: kept })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[AffineFunctional] {
        &self.members
    }
}

/// Indices of the generators lying below `p` everywhere (for a sampled `p`,
/// "everywhere" means every grid point: values above `Top` points are
/// unconstrained there).
pub fn h_support_set(p: &Function, h: &GeneratorSet) -> Result<Vec<usize>> {
    if p.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: p.dim() });
    }
    let mut selected = Vec::new();
    for (i, m) in h.members().iter().enumerate() {
        let below = match p {
            Function::Poly(f) => f.dominates_affine(&m.slope, &m.offset)?,
            Function::Sampled(f) => f.samples().all(|(x, v)| match v {
                ExtScalar::Top => true,
                ExtScalar::Finite(r) => m.eval(x).expect("dims checked") <= *r,
                ExtScalar::Bottom => unreachable!("rejected at construction"),
            }),
        };
        if below {
            selected.push(i);
        }
    }
    Ok(selected)
}

/// The pointwise supremum of the selected generators, in the same
/// representation as the input. An empty support set has no supremum among
/// realized functions and is reported as `Degenerate`.
#[derive(Debug, Clone)]
pub enum Envelope {
    Poly(PolyFunc),
    Sampled(SampledFunc),
    /// sup of the empty family: below every realizable function
    Degenerate,
}

pub fn h_convex_envelope(p: &Function, h: &GeneratorSet) -> Result<Envelope> {
    let support = h_support_set(p, h)?;
    if support.is_empty() {
        return Ok(Envelope::Degenerate);
    }
    let pieces: Vec<AffineFunctional> =
        support.iter().map(|&i| h.members()[i].clone()).collect();
    let sup = PolyFunc::new(h.dim(), pieces)?;
    match p {
        Function::Poly(_) => Ok(Envelope::Poly(sup)),
        Function::Sampled(f) => {
            let samples = f
                .samples()
                .map(|(x, _)| (x.clone(), ExtScalar::Finite(sup.eval(x).expect("dims agree"))))
                .collect();
            Ok(Envelope::Sampled(SampledFunc::new(f.dim(), samples)?))
        }
    }
}

/// Is `p` the supremum of its own support set within `h`?
pub fn is_h_convex(p: &Function, h: &GeneratorSet) -> Result<bool> {
    match (p, h_convex_envelope(p, h)?) {
        (_, Envelope::Degenerate) => Ok(false),
        (Function::Poly(f), Envelope::Poly(env)) => env.func_eq(f),
        (Function::Sampled(f), Envelope::Sampled(env)) => {
            Ok(f.samples().zip(env.samples()).all(|((_, v), (_, e))| v == e))
        }
        _ => unreachable!("envelope representation matches input"),
    }
}

/// Conjugate of a sampled function on an explicit dual grid:
/// `f*(y) = max over grid x of ⟨y, x⟩ − f(x)`, skipping `Top` points.
pub fn fenchel_conjugate(f: &SampledFunc, dual_grid: &[Vec<Rational>]) -> Result<SampledFunc> {
    let dom = f.domain();
    if dom.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut samples = Vec::with_capacity(dual_grid.len());
    for y in dual_grid {
        if y.len() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), got: y.len() });
        }
        let value = dom
            .iter()
            .map(|(x, v)| dot(y, x) - *v)
            .max()
            .expect("domain nonempty");
        samples.push((y.clone(), ExtScalar::Finite(value)));
    }
    SampledFunc::new(f.dim(), samples)
}

/// Exact conjugate of a max of affine pieces. The epigraph of the conjugate
/// is spanned by the points `(slopeᵢ, −offsetᵢ)` plus the vertical ray, so
/// values are computed by a small feasibility/optimization program over
/// convex weights.
#[derive(Debug, Clone)]
pub struct PolyConjugate {
    dim: usize,
    /// (slope, −offset) pairs, one per piece of the source function
    generators: Vec<(Vec<Rational>, Rational)>,
}

pub fn fenchel_conjugate_poly(f: &PolyFunc) -> PolyConjugate {
    PolyConjugate {
        dim: f.dim(),
        generators: f
            .pieces()
            .iter()
            .map(|p| (p.slope.clone(), -p.offset.clone()))
            .collect(),
    }
}

impl PolyConjugate {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[(Vec<Rational>, Rational)] {
        &self.generators
    }

    /// The effective domain: the convex hull of the source slopes.
    pub fn domain(&self) -> Polytope {
        Polytope::new(
            self.dim,
            self.generators.iter().map(|(a, _)| a.clone()).collect(),
        )
        .expect("at least one piece")
    }

    /// `f*(y)`: minimal convex interpolation of the generator heights at
    /// slope `y`; `Top` outside the hull of the slopes.
    pub fn eval(&self, y: &[Rational]) -> Result<ExtScalar> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: y.len() });
        }
        let k = self.generators.len();
        let mut prog = Program::nonnegative(k);
        for coord in 0..self.dim {
            let row: Vec<Rational> =
                self.generators.iter().map(|(a, _)| a[coord].clone()).collect();
            prog.eq(row, y[coord].clone());
        }
        prog.eq(vec![Rational::from_integer(1.into()); k], Rational::from_integer(1.into()));
        let obj: Vec<Rational> = self.generators.iter().map(|(_, g)| g.clone()).collect();
        match lp_solve_raw(Sense::Min, &obj, &prog)? {
            Outcome::Optimal { value, .. } => Ok(ExtScalar::Finite(value)),
            Outcome::Infeasible { .. } => Ok(ExtScalar::Top),
            Outcome::Unbounded { .. } => unreachable!("weights range over a simplex"),
        }
    }
}

/// Dual grid for the biconjugate: slopes of the facets of the lower convex
/// hull of the sampled points, found by fitting affine functions through
/// affinely independent subsets and keeping global minorants. Degenerate
/// affine spans are handled by working in hull coordinates and lifting the
/// resulting slopes back.
pub fn biconjugate_dual_grid(f: &SampledFunc) -> Result<Vec<Vec<Rational>>> {
    let dom = f.domain();
    if dom.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let n = f.dim();
    let base = dom[0].0.clone();
    let mut span = crate::linalg::span(n, &[]);
    for (x, _) in &dom {
        span.insert(&vec_sub(x, &base));
    }
    let d = span.rank();
    if d == 0 {
        return Ok(vec![vec![Rational::zero(); n]]);
    }
    // coordinates of each domain point in the span basis
    let coords: Vec<Vec<Rational>> = dom
        .iter()
        .map(|(x, _)| span.coords(&vec_sub(x, &base)).expect("in span"))
        .collect();
    let values: Vec<Rational> = dom.iter().map(|(_, v)| (*v).clone()).collect();
    let m = coords.len();

    // fit v = a·t + c through every (d+1)-subset; keep global minorants
    let mut slopes: Vec<Vec<Rational>> = Vec::new();
    let mut subset: Vec<usize> = Vec::new();
    enumerate_subsets(m, d + 1, &mut subset, &mut |idx: &[usize]| {
        let mut rows = Vec::with_capacity(d + 1);
        let mut rhs = Vec::with_capacity(d + 1);
        for &i in idx {
            let mut row = coords[i].clone();
            row.push(Rational::from_integer(1.into()));
            rows.push(row);
            rhs.push(values[i].clone());
        }
        if let Some(sol) = solve_linear_system(&rows, &rhs) {
            let (a, c) = sol.split_at(d);
            let minorant = (0..m).all(|i| dot(a, &coords[i]) + &c[0] <= values[i]);
            if minorant {
                let a = a.to_vec();
                if !slopes.contains(&a) {
                    slopes.push(a);
                }
            }
        }
    });
    if slopes.is_empty() {
        // all subsets were affinely dependent in value space with no minorant
        // fit; fall back to the zero functional on the span
        slopes.push(vec![Rational::zero(); d]);
    }

    // lift span-coordinate slopes back to ambient functionals: find y with
    // ⟨y, basis_j⟩ = a_j for the span basis
    let mut duals = Vec::with_capacity(slopes.len());
    for a in slopes {
        let y = solve_linear_system(&span.basis, &a).expect("basis rows are independent");
        if !duals.contains(&y) {
            duals.push(y);
        }
    }
    Ok(duals)
}

fn enumerate_subsets(m: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    let start = cur.last().map_or(0, |&l| l + 1);
    let remaining = k - cur.len();
    for i in start..m {
        if m - i < remaining {
            break;
        }
        cur.push(i);
        enumerate_subsets(m, k, cur, f);
        cur.pop();
    }
}

/// Biconjugate on the original grid: conjugate on the hull-facet dual grid,
/// then conjugate back. Values are finite everywhere and lie below `f`, with
/// equality exactly at grid points on the lower convex hull.
pub fn biconjugate(f: &SampledFunc) -> Result<SampledFunc> {
    let duals = biconjugate_dual_grid(f)?;
    let fstar = fenchel_conjugate(f, &duals)?;
    let grid: Vec<Vec<Rational>> = f.samples().map(|(x, _)| x.clone()).collect();
    fenchel_conjugate(&fstar, &grid)
}

/// The support function `x ↦ max over vertices v of ⟨v, x⟩` of a polytope.
pub fn support_function(u: &Polytope) -> PolyFunc {
    PolyFunc::sublinear(u.dim(), u.vertices().to_vec()).expect("polytopes are nonempty")
}
