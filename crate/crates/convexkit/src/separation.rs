//! Separation machinery for pairs and families of polyhedral cones: conic
//! correspondences, nonoblateness with explicit neighborhood-radius
//! certificates, general-position checks (directly and through diagonal
//! embeddings), polar decomposition of intersections, and sandwich
//! witnesses for pairs of sublinear functions.

use num_traits::{One, Signed, Zero};

use crate::cone::{
    cone_rays_from_inequalities, diagonal_cone, intersection, polar, polar_contains, sum,
    PolyCone,
};
use crate::error::{Error, Result};
use crate::func::PolyFunc;
use crate::linalg::{span, vec_neg, zeros};
use crate::lp::{lp_solve, lp_solve_raw, Outcome, Program, Sense};
use crate::scalar::Rational;

/// An ordered pair of cones in a common ambient space.
#[derive(Debug, Clone)]
pub struct ConePair {
    pub k1: PolyCone,
    pub k2: PolyCone,
}

impl ConePair {
    pub fn new(k1: PolyCone, k2: PolyCone) -> Result<Self> {
        if k1.dim() != k2.dim() {
            return Err(Error::DimensionMismatch { expected: k1.dim(), got: k2.dim() });
        }
        Ok(ConePair { k1, k2 })
    }

    pub fn dim(&self) -> usize {
        self.k1.dim()
    }
}

/// Decompose `x = k₁ − k₂` with `kᵢ ∈ Kᵢ`, if possible. Among all valid
/// decompositions the lexicographically smallest `(k₁, k₂)` is returned.
pub fn conic_correspondence(
    pair: &ConePair,
    x: &[Rational],
) -> Result<Option<(Vec<Rational>, Vec<Rational>)>> {
    let n = pair.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    let r1 = pair.k1.rays();
    let r2 = pair.k2.rays();
    // variables: k1 (n, free), k2 (n, free), λ (per ray of K₁), μ (per ray of K₂)
    let total = 2 * n + r1.len() + r2.len();
    let mut prog = Program::new(total);
    for j in (2 * n)..total {
        prog.nonneg[j] = true;
    }
    let row_with = |entries: &[(usize, Rational)]| {
        let mut row = zeros(total);
        for (j, c) in entries {
            row[*j] = c.clone();
        }
        row
    };
    for c in 0..n {
        // k1_c − k2_c = x_c
        prog.eq(
            row_with(&[(c, Rational::one()), (n + c, -Rational::one())]),
            x[c].clone(),
        );
        // k1_c − Σ λ_i r1_i[c] = 0
        let mut entries = vec![(c, Rational::one())];
        for (i, r) in r1.iter().enumerate() {
            entries.push((2 * n + i, -r[c].clone()));
        }
        prog.eq(row_with(&entries), Rational::zero());
        // k2_c − Σ μ_j r2_j[c] = 0
        let mut entries = vec![(n + c, Rational::one())];
        for (j, r) in r2.iter().enumerate() {
            entries.push((2 * n + r1.len() + j, -r[c].clone()));
        }
        prog.eq(row_with(&entries), Rational::zero());
    }
    match lp_solve(Sense::Min, &zeros(total), &prog)? {
        Outcome::Optimal { point, .. } => {
            let k1 = point[..n].to_vec();
            let k2 = point[n..2 * n].to_vec();
            Ok(Some((k1, k2)))
        }
        Outcome::Infeasible { .. } => Ok(None),
        Outcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    }
}

/// Outcome of the nonoblateness test, with an explicit neighborhood radius
/// when the answer is positive: every `y` in the span of the two cones with
/// `‖y‖∞ ≤ radius` decomposes as `k₁ − k₂` and as `k₂ − k₁` with both parts
/// in the unit box.
#[derive(Debug, Clone)]
pub struct NonoblateReport {
    pub nonoblate: bool,
    pub span_dim: usize,
    pub radius: Option<Rational>,
}

/// Minimal box norm `max(‖k₁‖∞, ‖k₂‖∞)` over decompositions `b = k₁ − k₂`;
/// `None` when `b` is not representable.
pub fn min_box_norm_decomposition(pair: &ConePair, b: &[Rational]) -> Result<Option<Rational>> {
    let n = pair.dim();
    let r1 = pair.k1.rays();
    let r2 = pair.k2.rays();
    // variables: λ, μ, s — all nonnegative
    let total = r1.len() + r2.len() + 1;
    let s_col = total - 1;
    let mut prog = Program::nonnegative(total);
    for c in 0..n {
        let mut row = zeros(total);
        for (i, r) in r1.iter().enumerate() {
            row[i] = r[c].clone();
        }
        for (j, r) in r2.iter().enumerate() {
            row[r1.len() + j] = -r[c].clone();
        }
        prog.eq(row, b[c].clone());
    }
    // |(Σλ r1)_c| ≤ s and |(Σμ r2)_c| ≤ s
    for c in 0..n {
        for sign in [Rational::one(), -Rational::one()] {
            let mut row = zeros(total);
            for (i, r) in r1.iter().enumerate() {
                row[i] = &sign * &r[c];
            }
            row[s_col] = -Rational::one();
            prog.le(row, Rational::zero());
            let mut row = zeros(total);
            for (j, r) in r2.iter().enumerate() {
                row[r1.len() + j] = &sign * &r[c];
            }
            row[s_col] = -Rational::one();
            prog.le(row, Rational::zero());
        }
    }
    let mut obj = zeros(total);
    obj[s_col] = Rational::one();
    match lp_solve_raw(Sense::Min, &obj, &prog)? {
        Outcome::Optimal { value, .. } => Ok(Some(value)),
        Outcome::Infeasible { .. } => Ok(None),
        Outcome::Unbounded { .. } => unreachable!("norm is bounded below by zero"),
    }
}

/// Nonoblateness of a cone pair: the difference cone `K₁ − K₂` (and hence
/// `K₂ − K₁ = −(K₁ − K₂)`) must fill the whole linear span of `K₁ ∪ K₂`.
/// Decided by membership of `±basis` directions in the difference cone; a
/// positive answer comes with a box-neighborhood radius built from minimal
/// decomposition norms of the basis directions.
pub fn nonoblate_check(pair: &ConePair) -> Result<NonoblateReport> {
    let n = pair.dim();
    let mut all_rays: Vec<Vec<Rational>> = pair.k1.rays().to_vec();
    all_rays.extend(pair.k2.rays().iter().cloned());
    let sp = span(n, &all_rays);
    let span_dim = sp.rank();
    if span_dim == 0 {
        // both cones are {0}: the span is trivial and the condition is vacuous
        return Ok(NonoblateReport { nonoblate: true, span_dim, radius: Some(Rational::one()) });
    }
    let mut diff_rays = pair.k1.rays().to_vec();
    diff_rays.extend(pair.k2.rays().iter().map(|r| vec_neg(r)));
    let diff = PolyCone::new(n, diff_rays)?;
    let mut norms: Vec<Rational> = Vec::with_capacity(span_dim);
    for b in &sp.basis {
        let mut worst: Option<Rational> = None;
        for dir in [b.clone(), vec_neg(b)] {
            if !diff.contains(&dir)? {
                return Ok(NonoblateReport { nonoblate: false, span_dim, radius: None });
            }
            let t = min_box_norm_decomposition(pair, &dir)?
                .expect("membership implies representability");
            worst = Some(match worst {
                Some(w) if w >= t => w,
                _ => t,
            });
        }
        norms.push(worst.expect("two directions checked"));
    }
    let total: Rational = norms.iter().fold(Rational::zero(), |acc, t| acc + t);
    // ‖b‖∞ ≥ 1 for reduced-echelon basis rows forces every norm positive
    debug_assert!(total.is_positive());
    Ok(NonoblateReport { nonoblate: true, span_dim, radius: Some(total.recip()) })
}

/// Both sides of the diagonal reformulation: the pair is nonoblate exactly
/// when `(K₁ × K₂, Δ₂(X))` is nonoblate one dimension up.
#[derive(Debug, Clone)]
pub struct DiagonalEquivalence {
    pub direct: bool,
    pub diagonal: bool,
    pub equal: bool,
}

pub const DIAGONAL_DIM_CAP: usize = 4;

pub fn nonoblate_diagonal_equivalence(pair: &ConePair) -> Result<DiagonalEquivalence> {
    let n = pair.dim();
    if n > DIAGONAL_DIM_CAP {
        return Err(Error::CapExceeded {
            cap_name: "diagonal embedding dimension",
            cap: DIAGONAL_DIM_CAP,
            got: n,
        });
    }
    let direct = nonoblate_check(pair)?.nonoblate;
    let product = pair.k1.product(&pair.k2);
    let diag = diagonal_cone(n, 2);
    let lifted = ConePair::new(product, diag)?;
    let diagonal = nonoblate_check(&lifted)?.nonoblate;
    Ok(DiagonalEquivalence { direct, diagonal, equal: direct == diagonal })
}

/// General-position report for a family of cones. For two cones the three
/// textbook conditions collapse (in finite dimensions) to nonoblateness of
/// the pair inside the joint span; families of three or more are reduced to
/// the pair `(K₁ × … × Kₙ, Δₙ(X))`.
#[derive(Debug, Clone)]
pub struct GeneralPositionReport {
    pub in_general_position: bool,
    /// condition: the difference of the cones is the whole joint span
    pub difference_is_span: bool,
    /// complementation of the span — needs no check in finite dimensions
    pub complemented: &'static str,
    pub nonoblate: NonoblateReport,
    /// dimension the decisive pair lives in (ambient, or stacked for n > 2)
    pub checked_dim: usize,
}

pub const STACKED_DIM_CAP: usize = 8;

pub fn general_position_check(cones: &[PolyCone]) -> Result<GeneralPositionReport> {
    if cones.len() < 2 {
        return Err(Error::Empty("general position needs at least two cones"));
    }
    let n = cones[0].dim();
    for k in cones {
        if k.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: k.dim() });
        }
    }
    let pair = if cones.len() == 2 {
        ConePair::new(cones[0].clone(), cones[1].clone())?
    } else {
        let stacked = cones.len() * n;
        if stacked > STACKED_DIM_CAP {
            return Err(Error::CapExceeded {
                cap_name: "stacked general-position dimension",
                cap: STACKED_DIM_CAP,
                got: stacked,
            });
        }
        let mut product = cones[0].clone();
        for k in &cones[1..] {
            product = product.product(k);
        }
        ConePair::new(product, diagonal_cone(n, cones.len()))?
    };
    let checked_dim = pair.dim();
    let report = nonoblate_check(&pair)?;
    Ok(GeneralPositionReport {
        in_general_position: report.nonoblate,
        difference_is_span: report.nonoblate,
        complemented: "automatic (finite dimension)",
        nonoblate: report,
        checked_dim,
    })
}

/// Epigraph cone `{(x, t) : p(x) ≤ t, x ∈ domain}` of a sublinear function,
/// with an optional polyhedral domain restriction.
fn epigraph_cone(p: &PolyFunc, domain: Option<&PolyCone>) -> Result<PolyCone> {
    if !p.is_sublinear()? {
        return Err(Error::NotSublinear("epigraph cone input"));
    }
    let n = p.dim();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for piece in p.pieces() {
        let mut row = piece.slope.clone();
        row.push(-Rational::one());
        rows.push(row);
    }
    if let Some(d) = domain {
        if d.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: d.dim() });
        }
        for g in polar(d)?.rays() {
            let mut row = g.clone();
            row.push(Rational::zero());
            rows.push(row);
        }
    }
    cone_rays_from_inequalities(n + 1, &rows)
}

/// General position of sublinear functions, decided on the cone pair
/// `(Δₙ(X) × ℝⁿ, rearranged product of the epigraph cones)`.
pub fn sublinear_general_position(ops: &[PolyFunc]) -> Result<GeneralPositionReport> {
    let with_domains: Vec<(PolyFunc, Option<PolyCone>)> =
        ops.iter().map(|p| (p.clone(), None)).collect();
    sublinear_general_position_with_domains(&with_domains)
}

pub fn sublinear_general_position_with_domains(
    ops: &[(PolyFunc, Option<PolyCone>)],
) -> Result<GeneralPositionReport> {
    if ops.len() < 2 {
        return Err(Error::Empty("general position needs at least two functions"));
    }
    let n = ops[0].0.dim();
    let count = ops.len();
    let stacked = count * (n + 1);
    if stacked > STACKED_DIM_CAP {
        return Err(Error::CapExceeded {
            cap_name: "stacked epigraph dimension",
            cap: STACKED_DIM_CAP,
            got: stacked,
        });
    }
    for (p, _) in ops {
        if p.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: p.dim() });
        }
    }
    // coordinates: (x₁, …, xₙ₍ᵦₗₒcₖₛ₎, t₁, …, t_count)
    let mut epi_rays: Vec<Vec<Rational>> = Vec::new();
    for (i, (p, domain)) in ops.iter().enumerate() {
        let epi = epigraph_cone(p, domain.as_ref())?;
        for ray in epi.rays() {
            let mut v = zeros(stacked);
            for c in 0..n {
                v[i * n + c] = ray[c].clone();
            }
            v[count * n + i] = ray[n].clone();
            epi_rays.push(v);
        }
    }
    let product_epi = PolyCone::new(stacked, epi_rays)?;
    let diag_with_values = diagonal_cone(n, count).product(&PolyCone::full_space(count));
    let pair = ConePair::new(diag_with_values, product_epi)?;
    let report = nonoblate_check(&pair)?;
    Ok(GeneralPositionReport {
        in_general_position: report.nonoblate,
        difference_is_span: report.nonoblate,
        complemented: "automatic (finite dimension)",
        nonoblate: report,
        checked_dim: stacked,
    })
}

/// Two-sided comparison of the polar of an intersection against the sum of
/// the polars, with explicit ray decompositions where available.
#[derive(Debug, Clone)]
pub struct PolarDecompositionReport {
    pub lhs: PolyCone,
    pub rhs: PolyCone,
    pub equal: bool,
    pub hypothesis_general_position: bool,
    /// for each generator of `lhs`: its split into summands from the
    /// individual polars (present when the generator admits one)
    pub decompositions: Vec<(Vec<Rational>, Option<Vec<Vec<Rational>>>)>,
}

pub fn polar_decomposition_check(cones: &[PolyCone]) -> Result<PolarDecompositionReport> {
    if cones.len() < 2 {
        return Err(Error::Empty("polar decomposition needs at least two cones"));
    }
    let n = cones[0].dim();
    let hypothesis = general_position_check(cones)?.in_general_position;
    let inter = intersection(cones)?;
    let lhs = polar(&inter)?;
    let polars: Vec<PolyCone> = cones.iter().map(polar).collect::<Result<_>>()?;
    let rhs = sum(&polars)?;

    // rhs ⊆ lhs: every summed generator annihilates the intersection
    let mut rhs_inside = true;
    for g in rhs.rays() {
        if !polar_contains(&inter, g)? {
            rhs_inside = false;
            break;
        }
    }

    // lhs ⊆ rhs: decompose each lhs generator as Σᵢ tᵢ with tᵢ ∈ π(Kᵢ)
    let mut decompositions = Vec::new();
    let mut lhs_inside = true;
    for t in lhs.rays() {
        let split = split_over_polars(t, &polars, n)?;
        if split.is_none() {
            lhs_inside = false;
        }
        decompositions.push((t.clone(), split));
    }

    Ok(PolarDecompositionReport {
        equal: rhs_inside && lhs_inside,
        lhs,
        rhs,
        hypothesis_general_position: hypothesis,
        decompositions,
    })
}

/// Find `t = Σᵢ tᵢ`, `tᵢ ∈ polars[i]`, via weights on the polar rays with
/// lexicographically minimal weight vector; `None` if not representable.
fn split_over_polars(
    t: &[Rational],
    polars: &[PolyCone],
    n: usize,
) -> Result<Option<Vec<Vec<Rational>>>> {
    let counts: Vec<usize> = polars.iter().map(|p| p.rays().len()).collect();
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Ok(if t.iter().all(Zero::is_zero) {
            Some(polars.iter().map(|_| zeros(n)).collect())
        } else {
            None
        });
    }
    let mut prog = Program::nonnegative(total);
    for c in 0..n {
        let mut row = zeros(total);
        let mut col = 0;
        for p in polars {
            for ray in p.rays() {
                row[col] = ray[c].clone();
                col += 1;
            }
        }
        prog.eq(row, t[c].clone());
    }
    match lp_solve(Sense::Min, &zeros(total), &prog)? {
        Outcome::Optimal { point, .. } => {
            let mut parts = Vec::with_capacity(polars.len());
            let mut col = 0;
            for p in polars {
                let mut part = zeros(n);
                for ray in p.rays() {
                    for c in 0..n {
                        let w = &point[col] * &ray[c];
                        part[c] += w;
                    }
                    col += 1;
                }
                parts.push(part);
            }
            Ok(Some(parts))
        }
        Outcome::Infeasible { .. } => Ok(None),
        Outcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    }
}

/// Result of the sandwich search between sublinear `p` and `q`: either a
/// linear functional `t` with `−q(x) ≤ ⟨t, x⟩ ≤ p(x)` everywhere, or a point
/// where `p + q` is strictly negative (so no such functional exists).
#[derive(Debug, Clone)]
pub enum SandwichWitness {
    Functional(Vec<Rational>),
    Violation(Vec<Rational>),
}

pub fn sandwich(p: &PolyFunc, q: &PolyFunc) -> Result<SandwichWitness> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    if !p.is_sublinear()? || !q.is_sublinear()? {
        return Err(Error::NotSublinear("sandwich input"));
    }
    let n = p.dim();
    let a: Vec<&Vec<Rational>> = p.pieces().iter().map(|f| &f.slope).collect();
    let b: Vec<&Vec<Rational>> = q.pieces().iter().map(|f| &f.slope).collect();
    // variables: t (free), λ (per piece of p), μ (per piece of q)
    let total = n + a.len() + b.len();
    let mut prog = Program::new(total);
    for j in n..total {
        prog.nonneg[j] = true;
    }
    for c in 0..n {
        // t_c − Σ λᵢ aᵢ[c] = 0
        let mut row = zeros(total);
        row[c] = Rational::one();
        for (i, s) in a.iter().enumerate() {
            row[n + i] = -s[c].clone();
        }
        prog.eq(row, Rational::zero());
        // t_c + Σ μⱼ bⱼ[c] = 0
        let mut row = zeros(total);
        row[c] = Rational::one();
        for (j, s) in b.iter().enumerate() {
            row[n + a.len() + j] = s[c].clone();
        }
        prog.eq(row, Rational::zero());
    }
    let mut row = zeros(total);
    for i in 0..a.len() {
        row[n + i] = Rational::one();
    }
    prog.eq(row, Rational::one());
    let mut row = zeros(total);
    for j in 0..b.len() {
        row[n + a.len() + j] = Rational::one();
    }
    prog.eq(row, Rational::one());

    match lp_solve(Sense::Min, &zeros(total), &prog)? {
        Outcome::Optimal { point, .. } => Ok(SandwichWitness::Functional(point[..n].to_vec())),
        Outcome::Infeasible { certificate } => {
            // rows interleave (t − λ·a, t + μ·b) per coordinate; the
            // multipliers u on the first kind give p(−u) + q(−u) < 0
            let mut u = zeros(n);
            for c in 0..n {
                u[c] = certificate[2 * c].clone();
            }
            let x = vec_neg(&u);
            let total_at = |v: &[Rational]| p.eval(v).unwrap() + q.eval(v).unwrap();
            let x = if total_at(&x).is_negative() { x } else { u };
            debug_assert!(total_at(&x).is_negative(), "certificate must locate a violation");
            Ok(SandwichWitness::Violation(x))
        }
        Outcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineFunctional;
    use crate::linalg::{dot, inf_norm};
    use crate::scalar::rat;

    fn v(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&n| rat(n)).collect()
    }

    fn cone(dim: usize, rays: &[&[i64]]) -> PolyCone {
        PolyCone::new(dim, rays.iter().map(|r| v(r)).collect()).unwrap()
    }

    fn orthant2() -> PolyCone {
        cone(2, &[&[1, 0], &[0, 1]])
    }

    #[test]
    fn correspondence_decomposes_with_lexmin() {
        let pair = ConePair::new(orthant2(), orthant2()).unwrap();
        let d = conic_correspondence(&pair, &v(&[1, -1])).unwrap().unwrap();
        assert_eq!(d, (v(&[1, 0]), v(&[0, 1])));
        let z = conic_correspondence(&pair, &v(&[0, 0])).unwrap().unwrap();
        assert_eq!(z, (v(&[0, 0]), v(&[0, 0])));

        let ray = cone(2, &[&[1, 0]]);
        let pair = ConePair::new(ray.clone(), ray).unwrap();
        assert!(conic_correspondence(&pair, &v(&[0, 1])).unwrap().is_none());
    }

    #[test]
    fn correspondence_is_conic() {
        // valid triples scale by positive rationals
        let pair = ConePair::new(orthant2(), cone(2, &[&[1, 1]])).unwrap();
        let x = v(&[2, 1]);
        let (k1, k2) = conic_correspondence(&pair, &x).unwrap().unwrap();
        for (i, xi) in x.iter().enumerate() {
            assert_eq!(&k1[i] - &k2[i], *xi);
        }
        let scale = crate::scalar::ratio(3, 2);
        let sx: Vec<Rational> = x.iter().map(|c| &scale * c).collect();
        let sk1: Vec<Rational> = k1.iter().map(|c| &scale * c).collect();
        let sk2: Vec<Rational> = k2.iter().map(|c| &scale * c).collect();
        assert!(pair.k1.contains(&sk1).unwrap() && pair.k2.contains(&sk2).unwrap());
        for (i, xi) in sx.iter().enumerate() {
            assert_eq!(&sk1[i] - &sk2[i], *xi);
        }
    }

    #[test]
    fn nonoblate_same_halfline_true() {
        // K₁ = K₂ = ℝ₊: K₁ − K₂ = ℝ = the span
        let half = cone(1, &[&[1]]);
        let pair = ConePair::new(half.clone(), half).unwrap();
        let rep = nonoblate_check(&pair).unwrap();
        assert!(rep.nonoblate);
        assert_eq!(rep.span_dim, 1);
        let r = rep.radius.unwrap();
        assert!(r.is_positive());
        // certificate: ±r decompose within the unit box
        for b in [vec![r.clone()], vec![-r]] {
            let t = min_box_norm_decomposition(&pair, &b).unwrap().unwrap();
            assert!(t <= rat(1));
        }
    }

    #[test]
    fn nonoblate_opposed_halflines_false() {
        // K₁ = ℝ₊, K₂ = −ℝ₊: K₁ − K₂ = ℝ₊ only, a strict part of the span
        let pair = ConePair::new(cone(1, &[&[1]]), cone(1, &[&[-1]])).unwrap();
        assert!(!nonoblate_check(&pair).unwrap().nonoblate);

        // same phenomenon two dimensions up
        let pair2 = ConePair::new(orthant2(), orthant2().negated()).unwrap();
        let rep = nonoblate_check(&pair2).unwrap();
        assert!(!rep.nonoblate);
        assert_eq!(rep.span_dim, 2);
        assert!(rep.radius.is_none());
    }

    #[test]
    fn nonoblate_shared_ray_true_within_span() {
        let ray = cone(2, &[&[1, 0]]);
        let pair = ConePair::new(ray.clone(), ray).unwrap();
        let rep = nonoblate_check(&pair).unwrap();
        assert!(rep.nonoblate);
        assert_eq!(rep.span_dim, 1);
        assert!(rep.radius.unwrap().is_positive());
    }

    #[test]
    fn nonoblate_orthogonal_rays_false() {
        let pair = ConePair::new(cone(2, &[&[1, 0]]), cone(2, &[&[0, 1]])).unwrap();
        let rep = nonoblate_check(&pair).unwrap();
        assert!(!rep.nonoblate);
        assert_eq!(rep.span_dim, 2);
    }

    #[test]
    fn nonoblate_radius_certificate_spans_box() {
        // mixed pair where the difference fills the plane: negating the
        // upward cone supplies every direction the orthant misses
        let pair = ConePair::new(orthant2(), cone(2, &[&[-1, 1], &[1, 1]])).unwrap();
        let rep = nonoblate_check(&pair).unwrap();
        assert!(rep.nonoblate);
        let r = rep.radius.unwrap();
        // every span point of norm ≤ r must decompose inside the unit box,
        // in both orientations of the pair
        let probes = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[-2, 3]), v(&[3, -1])];
        let flipped = ConePair::new(pair.k2.clone(), pair.k1.clone()).unwrap();
        for probe in &probes {
            let scale = &r / inf_norm(probe);
            let y: Vec<Rational> = probe.iter().map(|c| &scale * c).collect();
            for orientation in [&pair, &flipped] {
                let t = min_box_norm_decomposition(orientation, &y).unwrap().unwrap();
                assert!(t <= rat(1), "decomposition of {y:?} escapes the unit box");
            }
        }
    }

    #[test]
    fn diagonal_equivalence_matches_direct() {
        let cases = [
            (cone(1, &[&[1]]), cone(1, &[&[-1]]), false),
            (cone(1, &[&[1]]), cone(1, &[&[1]]), true),
            (cone(2, &[&[1, 0]]), cone(2, &[&[0, 1]]), false),
            (orthant2(), orthant2(), true),
        ];
        for (k1, k2, expected) in cases {
            let pair = ConePair::new(k1, k2).unwrap();
            let eq = nonoblate_diagonal_equivalence(&pair).unwrap();
            assert!(eq.equal, "diagonal reformulation must agree");
            assert_eq!(eq.direct, expected);
            assert_eq!(eq.diagonal, expected);
        }
        let big = PolyCone::full_space(5);
        let pair = ConePair::new(big.clone(), big).unwrap();
        assert!(matches!(
            nonoblate_diagonal_equivalence(&pair),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn general_position_two_cones() {
        // orthant versus lower half-plane: differences give only a
        // half-plane, not the whole span, so the pair is not in general
        // position
        let lower = cone(2, &[&[1, 0], &[-1, 0], &[0, -1]]);
        let rep = general_position_check(&[orthant2(), lower]).unwrap();
        assert!(!rep.in_general_position);
        assert_eq!(rep.complemented, "automatic (finite dimension)");

        // trivial cones are in general position
        let zero = PolyCone::zero(2);
        assert!(general_position_check(&[zero.clone(), zero]).unwrap().in_general_position);

        // orthogonal rays fail
        let rep =
            general_position_check(&[cone(2, &[&[1, 0]]), cone(2, &[&[0, 1]])]).unwrap();
        assert!(!rep.in_general_position);

        // a pair whose difference fills the plane passes
        let rep =
            general_position_check(&[orthant2(), cone(2, &[&[-1, 1], &[1, 1]])]).unwrap();
        assert!(rep.in_general_position);
    }

    #[test]
    fn general_position_three_cones_via_diagonal() {
        let rep = general_position_check(&[orthant2(), orthant2(), orthant2()]).unwrap();
        assert!(rep.in_general_position);
        assert_eq!(rep.checked_dim, 6);

        let e1 = cone(2, &[&[1, 0]]);
        let e2 = cone(2, &[&[0, 1]]);
        let rep = general_position_check(&[e1.clone(), e2, e1.clone()]).unwrap();
        assert!(!rep.in_general_position);

        // cap: five stacked copies of ℝ² would need dimension 10
        let five = vec![orthant2(); 5];
        assert!(matches!(
            general_position_check(&five),
            Err(Error::CapExceeded { .. })
        ));
    }

    fn abs_func() -> PolyFunc {
        PolyFunc::new(
            1,
            vec![
                AffineFunctional::linear(v(&[1])),
                AffineFunctional::linear(v(&[-1])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn sublinear_general_position_cases() {
        let rep = sublinear_general_position(&[abs_func(), abs_func()]).unwrap();
        assert!(rep.in_general_position);
        assert_eq!(rep.checked_dim, 4);

        let lin = |s: i64| {
            PolyFunc::new(1, vec![AffineFunctional::linear(v(&[s]))]).unwrap()
        };
        let rep = sublinear_general_position(&[lin(1), lin(-1)]).unwrap();
        assert!(rep.in_general_position);

        // restricted domains meeting only at the origin break general position
        let zero2 = PolyFunc::new(2, vec![AffineFunctional::linear(v(&[0, 0]))]).unwrap();
        let d1 = cone(2, &[&[1, 0]]);
        let d2 = cone(2, &[&[0, 1]]);
        let rep = sublinear_general_position_with_domains(&[
            (zero2.clone(), Some(d1)),
            (zero2, Some(d2)),
        ])
        .unwrap();
        assert!(!rep.in_general_position);

        // non-sublinear input is rejected
        let hinge = PolyFunc::new(
            1,
            vec![AffineFunctional::new(v(&[0]), rat(1)), AffineFunctional::linear(v(&[1]))],
        )
        .unwrap();
        assert!(matches!(
            sublinear_general_position(&[hinge, abs_func()]),
            Err(Error::NotSublinear(_))
        ));
    }

    #[test]
    fn polar_decomposition_adjacent_sectors() {
        let k1 = cone(2, &[&[1, 0], &[1, 1]]);
        let k2 = cone(2, &[&[1, 1], &[0, 1]]);
        let rep = polar_decomposition_check(&[k1, k2]).unwrap();
        assert!(rep.equal);
        // every lhs generator must carry a certified split
        for (ray, split) in &rep.decompositions {
            let parts = split.as_ref().expect("equality implies decomposability");
            let mut sum = zeros(2);
            for p in parts {
                for c in 0..2 {
                    sum[c] += &p[c];
                }
            }
            assert_eq!(&sum, ray);
        }
    }

    #[test]
    fn polar_decomposition_idempotent_and_quadrant() {
        let k = cone(2, &[&[1, 2], &[2, 1]]);
        let rep = polar_decomposition_check(&[k.clone(), k.clone()]).unwrap();
        assert!(rep.equal);
        assert!(rep.lhs.set_eq(&polar(&k).unwrap()).unwrap());

        // orthogonal rays: the hypothesis fails, yet equality happens to hold
        let e1 = cone(2, &[&[1, 0]]);
        let e2 = cone(2, &[&[0, 1]]);
        let rep = polar_decomposition_check(&[e1, e2]).unwrap();
        assert!(!rep.hypothesis_general_position);
        assert!(rep.equal);
        assert!(rep.lhs.set_eq(&PolyCone::full_space(2)).unwrap());
    }

    #[test]
    fn sandwich_witnesses() {
        let lin = |s: i64| {
            PolyFunc::new(1, vec![AffineFunctional::linear(v(&[s]))]).unwrap()
        };
        // p(x) = x, q(x) = −x: the only sandwiched functional is t = 1
        match sandwich(&lin(1), &lin(-1)).unwrap() {
            SandwichWitness::Functional(t) => assert_eq!(t, v(&[1])),
            other => panic!("expected a functional, got {other:?}"),
        }
        // p = q = |·|: any t ∈ [−1, 1] works; the lexicographically least is −1
        match sandwich(&abs_func(), &abs_func()).unwrap() {
            SandwichWitness::Functional(t) => assert_eq!(t, v(&[-1])),
            other => panic!("expected a functional, got {other:?}"),
        }
        // p = 0, q = −x: p + q is negative on the right half-line
        match sandwich(&lin(0), &lin(-1)).unwrap() {
            SandwichWitness::Violation(x) => {
                let total = lin(0).eval(&x).unwrap() + lin(-1).eval(&x).unwrap();
                assert!(total.is_negative());
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn sandwich_functional_is_sound() {
        // witness must satisfy −q ≤ ⟨t,·⟩ ≤ p at the defining directions
        let p = PolyFunc::new(
            2,
            vec![
                AffineFunctional::linear(v(&[2, 1])),
                AffineFunctional::linear(v(&[-1, 1])),
                AffineFunctional::linear(v(&[0, -1])),
            ],
        )
        .unwrap();
        let q = PolyFunc::new(
            2,
            vec![
                AffineFunctional::linear(v(&[1, 0])),
                AffineFunctional::linear(v(&[-1, -1])),
                AffineFunctional::linear(v(&[0, 1])),
            ],
        )
        .unwrap();
        match sandwich(&p, &q).unwrap() {
            SandwichWitness::Functional(t) => {
                let probes = [
                    v(&[1, 0]), v(&[0, 1]), v(&[-1, 0]), v(&[0, -1]),
                    v(&[1, 1]), v(&[-1, 1]), v(&[2, -3]), v(&[-5, -7]),
                ];
                for x in &probes {
                    let tx = dot(&t, x);
                    assert!(tx <= p.eval(x).unwrap(), "upper bound fails at {x:?}");
                    assert!(-q.eval(x).unwrap() <= tx, "lower bound fails at {x:?}");
                }
            }
            SandwichWitness::Violation(x) => {
                let total = p.eval(&x).unwrap() + q.eval(&x).unwrap();
                assert!(total.is_negative(), "violation must be strict");
            }
        }
    }
}
