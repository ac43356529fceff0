//! Approximate subdifferentials and infinitesimal limits: ε-subdifferentials
//! decided through the conjugate, infinitesimal subdifferentials over the
//! two-level scalar model, infimal convolution in grid and 1D polyhedral
//! modes with an exactness trichotomy, and the convolution chain rule as a
//! relation-composition check with a recorded general-position hypothesis.

use num_traits::{One, Signed, Zero};

use crate::cone::cone_rays_from_inequalities;
use crate::error::{Error, Result};
use crate::func::{LexPolyFunc, PolyFunc};
use crate::generation::{fenchel_conjugate_poly, PolyConjugate};
use crate::linalg::{dot, zeros};
use crate::lp::{lp_solve_raw, Outcome, Program, Sense};
use crate::polytope::Polytope;
use crate::project::{eliminate_to, project_to_polytope, HPolyhedron};
use crate::scalar::{ExtScalar, LexScalar, Rational};
use crate::separation::general_position_check;

/// Largest dimension in which ε-subdifferentials are enumerated as explicit
/// polytopes; the membership predicates work in any dimension.
pub const EPS_ENUM_CAP: usize = 2;

/// The ε-subdifferential of a piecewise-affine convex function at a base
/// point: all functionals `y` with `f*(y) ≤ ⟨y, x̄⟩ − f(x̄) + ε`. Carries an
/// explicit polytope description in low dimension and two independent
/// membership routes (conjugate-based and via the defining inequality).
#[derive(Debug, Clone)]
pub struct EpsSubdiff {
    base: Vec<Rational>,
    eps: Rational,
    value_at_base: Rational,
    conjugate: PolyConjugate,
    f: PolyFunc,
    description: Option<Polytope>,
}

pub fn eps_subdifferential(f: &PolyFunc, base: &[Rational], eps: &Rational) -> Result<EpsSubdiff> {
    if eps.is_negative() {
        return Err(Error::NegativeEpsilon);
    }
    let d = f.dim();
    if base.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: base.len() });
    }
    let value_at_base = f.eval(base)?;
    let conjugate = fenchel_conjugate_poly(f);
    let description = if d <= EPS_ENUM_CAP {
        // the set is the projection onto y of a polyhedron in (y, λ):
        // y = Σλᵢaᵢ, λ a simplex weight vector, −Σλᵢbᵢ ≤ ⟨y,x̄⟩ − f(x̄) + ε
        let k = f.pieces().len();
        let total = d + k;
        let mut sys = HPolyhedron::new(total);
        for c in 0..d {
            let mut row = zeros(total);
            row[c] = Rational::one();
            for (i, piece) in f.pieces().iter().enumerate() {
                row[d + i] = -piece.slope[c].clone();
            }
            sys.eq(row, Rational::zero());
        }
        let mut row = zeros(total);
        for i in 0..k {
            row[d + i] = Rational::one();
            sys.nonneg(d + i);
        }
        sys.eq(row, Rational::one());
        let mut row = zeros(total);
        for c in 0..d {
            row[c] = -base[c].clone();
        }
        for (i, piece) in f.pieces().iter().enumerate() {
            row[d + i] = -piece.offset.clone();
        }
        sys.le(row, eps - &value_at_base);
        let polytope = project_to_polytope(&sys, d)?
            .expect("an everywhere-finite convex function has subgradients");
        Some(polytope)
    } else {
        None
    };
    Ok(EpsSubdiff {
        base: base.to_vec(),
        eps: eps.clone(),
        value_at_base,
        conjugate,
        f: f.clone(),
        description,
    })
}

impl EpsSubdiff {
    pub fn base(&self) -> &[Rational] {
        &self.base
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    /// Explicit polytope description; present when the dimension is at most
    /// [`EPS_ENUM_CAP`].
    pub fn description(&self) -> Option<&Polytope> {
        self.description.as_ref()
    }

    /// Membership through the conjugate: `f*(y) ≤ ⟨y,x̄⟩ − f(x̄) + ε`.
    pub fn contains(&self, y: &[Rational]) -> Result<bool> {
        match self.conjugate.eval(y)? {
            ExtScalar::Top => Ok(false),
            ExtScalar::Finite(v) => {
                Ok(v <= dot(y, &self.base) - &self.value_at_base + &self.eps)
            }
            ExtScalar::Bottom => unreachable!("conjugates of proper functions are not bottom"),
        }
    }

    /// Membership through the defining universal inequality,
    /// `∀x: ⟨y,x⟩ − f(x) ≤ ⟨y,x̄⟩ − f(x̄) + ε`, decided by one epigraph LP.
    /// Must agree with [`EpsSubdiff::contains`] on every input.
    pub fn contains_by_inequality(&self, y: &[Rational]) -> Result<bool> {
        let d = self.f.dim();
        if y.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: y.len() });
        }
        // maximize ⟨y,x⟩ − t subject to every piece lying below t
        let total = d + 1;
        let mut prog = Program::new(total);
        for piece in self.f.pieces() {
            let mut row = piece.slope.clone();
            row.push(-Rational::one());
            prog.le(row, -piece.offset.clone());
        }
        let mut obj = y.to_vec();
        obj.push(-Rational::one());
        match lp_solve_raw(Sense::Max, &obj, &prog)? {
            Outcome::Optimal { value, .. } => {
                Ok(value <= dot(y, &self.base) - &self.value_at_base + &self.eps)
            }
            Outcome::Unbounded { .. } => Ok(false),
            Outcome::Infeasible { .. } => unreachable!("epigraphs are nonempty"),
        }
    }
}

/// The infinitesimal subdifferential of a two-level-offset function: `y`
/// belongs exactly when the standard part of
/// `sup_x (⟨y,x⟩ − f(x)) − (⟨y,x̄⟩ − f(x̄))` is nonpositive.
///
/// Since slopes are standard, the infinitesimal offset level never affects
/// the standard part of that supremum, so the set provably equals the exact
/// subdifferential of the standard-part function; the membership route
/// below still evaluates the defining condition directly, giving two
/// independent computations.
pub fn infinitesimal_subdifferential(f: &LexPolyFunc, base: &[Rational]) -> Result<Polytope> {
    if f.dim() > EPS_ENUM_CAP {
        return Err(Error::CapExceeded {
            cap_name: "infinitesimal subdifferential enumeration dimension",
            cap: EPS_ENUM_CAP,
            got: f.dim(),
        });
    }
    let sub = eps_subdifferential(&f.std_part(), base, &Rational::zero())?;
    Ok(sub.description().expect("dimension is within the enumeration cap").clone())
}

/// Direct membership in the infinitesimal subdifferential: evaluates
/// `std(sup_x (⟨y,x⟩ − f(x)))` by one LP over the standard level and
/// compares against the value at the base point.
pub fn infinitesimal_contains(
    f: &LexPolyFunc,
    base: &[Rational],
    y: &[Rational],
) -> Result<bool> {
    let d = f.dim();
    if base.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: base.len() });
    }
    if y.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: y.len() });
    }
    // sup_x min over pieces of ⟨y − a, x⟩ − β.std, as an LP in (x, s);
    // the infinitesimal offsets drop out of the standard level entirely
    let total = d + 1;
    let mut prog = Program::new(total);
    for piece in f.pieces() {
        let mut row = zeros(total);
        for c in 0..d {
            row[c] = &piece.slope[c] - &y[c];
        }
        row[d] = Rational::one();
        prog.le(row, -piece.offset.std.clone());
    }
    let mut obj = zeros(total);
    obj[d] = Rational::one();
    let sup_std = match lp_solve_raw(Sense::Max, &obj, &prog)? {
        Outcome::Optimal { value, .. } => value,
        Outcome::Unbounded { .. } => return Ok(false),
        Outcome::Infeasible { .. } => unreachable!("hypographs are nonempty"),
    };
    let at_base = f.eval(base)?;
    Ok(sup_std <= dot(y, base) - at_base.std)
}

/// A base point is an infinitesimal minimum exactly when the zero
/// functional belongs to the infinitesimal subdifferential there.
pub fn is_infinitesimal_minimum(f: &LexPolyFunc, base: &[Rational]) -> Result<bool> {
    infinitesimal_contains(f, base, &zeros(f.dim()))
}

/// How close an infimal convolution comes to its lower bound at a point:
/// exact equality, equality of standard parts only, or neither.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    InfinitesimallyExact,
    Inexact,
}

fn classify(value: &LexScalar, attained: &LexScalar) -> Exactness {
    if value == attained {
        Exactness::Exact
    } else if value.approx_eq(attained) {
        Exactness::InfinitesimallyExact
    } else {
        Exactness::Inexact
    }
}

/// One evaluation of an infimal convolution: the value, the minimizing
/// middle point (ties broken by the lexicographically smallest one), and the
/// exactness classification at that witness.
#[derive(Debug, Clone)]
pub struct ConvolutionPoint {
    pub value: LexScalar,
    pub witness: Vec<Rational>,
    pub exactness: Exactness,
}

/// Grid-mode infimal convolution: minimize `f₁(x,y) + f₂(y,z)` over a finite
/// grid of middle points `y`. `mid_dim` is the dimension of `y`; the first
/// `f₁.dim() − mid_dim` coordinates of `f₁` belong to `x` and the last
/// `f₂.dim() − mid_dim` coordinates of `f₂` to `z`.
pub fn infimal_convolution_grid(
    f1: &LexPolyFunc,
    f2: &LexPolyFunc,
    mid_dim: usize,
    y_grid: &[Vec<Rational>],
    x: &[Rational],
    z: &[Rational],
) -> Result<ConvolutionPoint> {
    if mid_dim > f1.dim() {
        return Err(Error::DimensionMismatch { expected: f1.dim(), got: mid_dim });
    }
    if mid_dim > f2.dim() {
        return Err(Error::DimensionMismatch { expected: f2.dim(), got: mid_dim });
    }
    let dx = f1.dim() - mid_dim;
    let dz = f2.dim() - mid_dim;
    if x.len() != dx {
        return Err(Error::DimensionMismatch { expected: dx, got: x.len() });
    }
    if z.len() != dz {
        return Err(Error::DimensionMismatch { expected: dz, got: z.len() });
    }
    if y_grid.is_empty() {
        return Err(Error::Empty("middle grid"));
    }
    let mut best: Option<(LexScalar, Vec<Rational>)> = None;
    for y in y_grid {
        if y.len() != mid_dim {
            return Err(Error::DimensionMismatch { expected: mid_dim, got: y.len() });
        }
        let mut xy = x.to_vec();
        xy.extend(y.iter().cloned());
        let mut yz = y.clone();
        yz.extend(z.iter().cloned());
        let val = f1.eval(&xy)? + f2.eval(&yz)?;
        best = Some(match best {
            None => (val, y.clone()),
            Some((bv, bw)) => {
                if val < bv || (val == bv && *y < bw) {
                    (val, y.clone())
                } else {
                    (bv, bw)
                }
            }
        });
    }
    let (value, witness) = best.expect("grid checked nonempty");
    let mut xy = x.to_vec();
    xy.extend(witness.iter().cloned());
    let mut yz = witness.clone();
    yz.extend(z.iter().cloned());
    let attained = f1.eval(&xy)? + f2.eval(&yz)?;
    let exactness = classify(&value, &attained);
    Ok(ConvolutionPoint { value, witness, exactness })
}

/// Polyhedral 1D infimal convolution: for `f₁(x,y)` and `f₂(y,z)` on ℝ²,
/// produce `h(x,z) = inf_y f₁(x,y) + f₂(y,z)` as an explicit
/// piecewise-affine function by eliminating `y` (and the epigraph split)
/// with exact Fourier–Motzkin projection.
pub fn infimal_convolution_poly1d(f1: &PolyFunc, f2: &PolyFunc) -> Result<PolyFunc> {
    if f1.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f1.dim() });
    }
    if f2.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f2.dim() });
    }
    // variables: (x, z, t, y, t₁, t₂); keep the first three
    let total = 6;
    let mut sys = HPolyhedron::new(total);
    for piece in f1.pieces() {
        // p·x + q·y − t₁ ≤ −offset
        let mut row = zeros(total);
        row[0] = piece.slope[0].clone();
        row[3] = piece.slope[1].clone();
        row[4] = -Rational::one();
        sys.le(row, -piece.offset.clone());
    }
    for piece in f2.pieces() {
        // r·y + o·z − t₂ ≤ −offset
        let mut row = zeros(total);
        row[3] = piece.slope[0].clone();
        row[1] = piece.slope[1].clone();
        row[5] = -Rational::one();
        sys.le(row, -piece.offset.clone());
    }
    let mut row = zeros(total);
    row[2] = Rational::one();
    row[4] = -Rational::one();
    row[5] = -Rational::one();
    sys.eq(row, Rational::zero());

    let shadow = eliminate_to(&sys, 3)?;
    let mut pieces = Vec::new();
    for (a, rhs) in &shadow.ineqs {
        let gamma = &a[2];
        if gamma.is_zero() {
            // necessary conditions on (x, z) alone cannot arise: the inf is
            // finite for every (x, z) because both functions are
            // everywhere-finite
            debug_assert!(!rhs.is_negative(), "epigraph shadow must stay feasible");
            continue;
        }
        if gamma.is_positive() {
            // an upper bound on the epigraph coordinate cannot arise either
            debug_assert!(false, "epigraph shadow gained an upper bound");
            continue;
        }
        let scale = -gamma;
        pieces.push(crate::affine::AffineFunctional::new(
            vec![&a[0] / &scale, &a[1] / &scale],
            -rhs / &scale,
        ));
    }
    if pieces.is_empty() {
        return Err(Error::Unsupported(
            "infimal convolution is unbounded below".to_string(),
        ));
    }
    PolyFunc::new(2, pieces)
}

/// Lexicographic minimum of the upper envelope of 1D affine pieces with
/// two-level offsets; `None` when unbounded below. Returns the value and the
/// smallest minimizing candidate point.
fn lex_min_convex_1d(pieces: &[(Rational, LexScalar)]) -> Option<(LexScalar, Rational)> {
    let min_slope = pieces.iter().map(|(s, _)| s).min().expect("pieces nonempty");
    let max_slope = pieces.iter().map(|(s, _)| s).max().expect("pieces nonempty");
    if min_slope.is_positive() || max_slope.is_negative() {
        return None;
    }
    // candidate points: all pairwise standard crossings, a default origin,
    // midpoints of consecutive candidates (open cells have constant active
    // sets), and probes beyond both ends (unbounded tails)
    let mut cands: Vec<Rational> = vec![Rational::zero()];
    for (i, (si, oi)) in pieces.iter().enumerate() {
        for (sj, oj) in &pieces[i + 1..] {
            if si != sj {
                cands.push((&oj.std - &oi.std) / (si - sj));
            }
        }
    }
    cands.sort();
    cands.dedup();
    let mut probes = cands.clone();
    for w in cands.windows(2) {
        probes.push((&w[0] + &w[1]) / Rational::from_integer(2.into()));
    }
    probes.push(cands.first().unwrap() - Rational::one());
    probes.push(cands.last().unwrap() + Rational::one());
    probes.sort();
    probes.dedup();

    let eval = |y: &Rational| -> LexScalar {
        pieces
            .iter()
            .map(|(s, o)| LexScalar::new(s * y + &o.std, o.inf.clone()))
            .max()
            .expect("pieces nonempty")
    };
    let mut best: Option<(LexScalar, Rational)> = None;
    for y in &probes {
        let v = eval(y);
        best = Some(match best {
            None => (v, y.clone()),
            Some((bv, bw)) => {
                if v < bv {
                    (v, y.clone())
                } else {
                    (bv, bw)
                }
            }
        });
    }
    best
}

/// Exactness of the 1D polyhedral convolution at a supplied triple: compare
/// the true lexicographic infimum over the middle variable against the value
/// attained at the supplied middle point.
pub fn convolution_exactness_1d(
    f1: &LexPolyFunc,
    f2: &LexPolyFunc,
    x: &Rational,
    y: &Rational,
    z: &Rational,
) -> Result<Exactness> {
    if f1.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f1.dim() });
    }
    if f2.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: f2.dim() });
    }
    // the sum of two maxima is the maximum of pairwise sums, so the section
    // g(y) = f₁(x,y) + f₂(y,z) is an upper envelope of combined pieces
    let mut pieces = Vec::new();
    for p1 in f1.pieces() {
        for p2 in f2.pieces() {
            let slope = &p1.slope[1] + &p2.slope[0];
            let offset = LexScalar::new(
                &p1.offset.std + &p2.offset.std + &p1.slope[0] * x + &p2.slope[1] * z,
                &p1.offset.inf + &p2.offset.inf,
            );
            pieces.push((slope, offset));
        }
    }
    let Some((value, _)) = lex_min_convex_1d(&pieces) else {
        return Err(Error::Unsupported(
            "infimal convolution is unbounded below".to_string(),
        ));
    };
    let attained = f1.eval(&[x.clone(), y.clone()])? + f2.eval(&[y.clone(), z.clone()])?;
    Ok(classify(&value, &attained))
}

/// Subdifferential relation of a function of a split variable pair `(u, v)`
/// at a point: the pairs `(t, s)` such that `(t, −s)` is a classical
/// subgradient there. The sign flip on the second block makes the chain
/// rule literal relation composition.
pub fn subdiff_relation(f: &PolyFunc, first_dim: usize, point: &[Rational]) -> Result<Polytope> {
    let d = f.dim();
    if first_dim > d {
        return Err(Error::DimensionMismatch { expected: d, got: first_dim });
    }
    if point.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: point.len() });
    }
    let value = f.eval(point)?;
    let mut gens = Vec::new();
    for piece in f.pieces() {
        if piece.eval(point)? == value {
            let mut g = piece.slope.clone();
            for c in first_dim..d {
                g[c] = -g[c].clone();
            }
            gens.push(g);
        }
    }
    Polytope::new(d, gens)?.reduced()
}

/// Composition of two subdifferential relations through the shared middle
/// block: `{(t, r) : ∃s, (t,s) ∈ r1 ∧ (s,r) ∈ r2}`, computed by exact
/// projection; `None` when no shared middle functional exists.
pub fn compose_relations(
    r1: &Polytope,
    r2: &Polytope,
    first: usize,
    middle: usize,
    last: usize,
) -> Result<Option<Polytope>> {
    if r1.dim() != first + middle {
        return Err(Error::DimensionMismatch { expected: first + middle, got: r1.dim() });
    }
    if r2.dim() != middle + last {
        return Err(Error::DimensionMismatch { expected: middle + last, got: r2.dim() });
    }
    let k1 = r1.vertices().len();
    let k2 = r2.vertices().len();
    // variables: (t, r, s, λ, μ); keep (t, r)
    let total = first + last + middle + k1 + k2;
    let lam = first + last + middle;
    let mu = lam + k1;
    let mut sys = HPolyhedron::new(total);
    for c in 0..first {
        let mut row = zeros(total);
        row[c] = Rational::one();
        for (i, v) in r1.vertices().iter().enumerate() {
            row[lam + i] = -v[c].clone();
        }
        sys.eq(row, Rational::zero());
    }
    for c in 0..middle {
        let mut row = zeros(total);
        row[first + last + c] = Rational::one();
        for (i, v) in r1.vertices().iter().enumerate() {
            row[lam + i] = -v[first + c].clone();
        }
        sys.eq(row, Rational::zero());
        let mut row = zeros(total);
        row[first + last + c] = Rational::one();
        for (j, v) in r2.vertices().iter().enumerate() {
            row[mu + j] = -v[c].clone();
        }
        sys.eq(row, Rational::zero());
    }
    for c in 0..last {
        let mut row = zeros(total);
        row[first + c] = Rational::one();
        for (j, v) in r2.vertices().iter().enumerate() {
            row[mu + j] = -v[middle + c].clone();
        }
        sys.eq(row, Rational::zero());
    }
    for (start, count) in [(lam, k1), (mu, k2)] {
        let mut row = zeros(total);
        for i in 0..count {
            row[start + i] = Rational::one();
            sys.nonneg(start + i);
        }
        sys.eq(row, Rational::one());
    }
    project_to_polytope(&sys, first + last)
}

/// Both sides of the convolution chain rule at a triple, with the
/// general-position hypothesis checked on the tangent cones of the two
/// lifted epigraphs and recorded.
#[derive(Debug, Clone)]
pub struct ChainRuleReport {
    pub lhs: Polytope,
    pub rhs: Option<Polytope>,
    pub equal: bool,
    pub general_position: bool,
    pub exactness: Exactness,
}

pub fn chain_rule_check(
    f1: &LexPolyFunc,
    f2: &LexPolyFunc,
    x: &Rational,
    y: &Rational,
    z: &Rational,
) -> Result<ChainRuleReport> {
    let exactness = convolution_exactness_1d(f1, f2, x, y, z)?;
    if exactness == Exactness::Inexact {
        return Err(Error::NotInfinitesimallyExact);
    }
    let s1 = f1.std_part();
    let s2 = f2.std_part();

    let h = infimal_convolution_poly1d(&s1, &s2)?;
    let lhs = subdiff_relation(&h, 1, &[x.clone(), z.clone()])?;

    let r1 = subdiff_relation(&s1, 1, &[x.clone(), y.clone()])?;
    let r2 = subdiff_relation(&s2, 1, &[y.clone(), z.clone()])?;
    let rhs = compose_relations(&r1, &r2, 1, 1, 1)?;
    let equal = match &rhs {
        Some(p) => lhs.set_eq(p)?,
        None => false,
    };

    // general position of the lifted epigraphs {(x,y,z,t) : t ≥ f₁(x,y)}
    // and {(x,y,z,t) : t ≥ f₂(y,z)}, via their tangent cones at the triple
    let tangent = |f: &PolyFunc, point: &[Rational], embed: [usize; 2]| -> Result<_> {
        let value = f.eval(point)?;
        let mut rows = Vec::new();
        for piece in f.pieces() {
            if piece.eval(point)? == value {
                let mut row = zeros(4);
                row[embed[0]] = piece.slope[0].clone();
                row[embed[1]] = piece.slope[1].clone();
                row[3] = -Rational::one();
                rows.push(row);
            }
        }
        cone_rays_from_inequalities(4, &rows)
    };
    let k1 = tangent(&s1, &[x.clone(), y.clone()], [0, 1])?;
    let k2 = tangent(&s2, &[y.clone(), z.clone()], [1, 2])?;
    let general_position = general_position_check(&[k1, k2])?.in_general_position;

    Ok(ChainRuleReport { lhs, rhs, equal, general_position, exactness })
}
