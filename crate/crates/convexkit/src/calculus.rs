//! Calculus of finitely generated sublinear operators with values in ℝ^m
//! under the componentwise order: the canonical sublinear operator (a
//! componentwise supremum over a finite index set), pointwise embeddings of
//! operator families, the sublinear operator generated by a family, support
//! sets, row-factorized support hulls, and the subdifferential of a
//! composition computed two independent ways.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::func::PolyFunc;
use crate::linalg::{mat_vec, zeros};
use crate::lp::{lp_solve_raw, Outcome, Program, Sense};
use crate::polytope::Polytope;
use crate::scalar::Rational;

/// An m×n rational matrix acting as a linear operator ℝⁿ → ℝ^m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixOperator {
    rows: Vec<Vec<Rational>>,
}

impl MatrixOperator {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("matrix row list"));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::Empty("matrix row"));
        }
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: r.len() });
            }
        }
        Ok(MatrixOperator { rows })
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// number of rows (output dimension)
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// number of columns (input dimension)
    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: x.len() });
        }
        Ok(mat_vec(&self.rows, x))
    }

    /// Positivity with respect to componentwise orders on both sides: the
    /// operator maps the nonnegative orthant into the nonnegative orthant
    /// exactly when every entry is nonnegative.
    pub fn is_positive(&self) -> bool {
        self.rows.iter().flatten().all(|e| *e >= Rational::zero())
    }
}

/// A finite family of equal-shape linear operators.
#[derive(Debug, Clone)]
pub struct OperatorFamily {
    members: Vec<MatrixOperator>,
}

impl OperatorFamily {
    pub fn new(members: Vec<MatrixOperator>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Empty("operator family"));
        }
        let (m, n) = (members[0].m(), members[0].n());
        for op in &members {
            if op.m() != m {
                return Err(Error::DimensionMismatch { expected: m, got: op.m() });
            }
            if op.n() != n {
                return Err(Error::DimensionMismatch { expected: n, got: op.n() });
            }
        }
        Ok(OperatorFamily { members })
    }

    pub fn members(&self) -> &[MatrixOperator] {
        &self.members
    }

    pub fn m(&self) -> usize {
        self.members[0].m()
    }

    pub fn n(&self) -> usize {
        self.members[0].n()
    }
}

/// A finite indexed collection of vectors in ℝ^m — an order-bounded map
/// from an opaque label set. Finiteness makes order boundedness automatic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedMap {
    m: usize,
    entries: Vec<(String, Vec<Rational>)>,
}

impl BoundedMap {
    pub fn new(m: usize, entries: Vec<(String, Vec<Rational>)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty("bounded map"));
        }
        for (_, v) in &entries {
            if v.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: v.len() });
            }
        }
        Ok(BoundedMap { m, entries })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[(String, Vec<Rational>)] {
        &self.entries
    }

    pub fn value(&self, label: &str) -> Option<&[Rational]> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.as_slice())
    }
}

/// The canonical sublinear operator: the componentwise supremum of the
/// values of an order-bounded map. Increasing and sublinear in its argument.
pub fn canonical_sublinear(f: &BoundedMap) -> Vec<Rational> {
    let mut sup = f.entries[0].1.clone();
    for (_, v) in &f.entries[1..] {
        for (s, c) in sup.iter_mut().zip(v) {
            if c > s {
                *s = c.clone();
            }
        }
    }
    sup
}

/// Embed a point through a family: the map sending each operator label to
/// the operator's value at `x`. Linear in `x`.
pub fn family_embed(family: &OperatorFamily, x: &[Rational]) -> Result<BoundedMap> {
    let entries = family
        .members
        .iter()
        .enumerate()
        .map(|(i, op)| Ok((format!("op{i}"), op.apply(x)?)))
        .collect::<Result<Vec<_>>>()?;
    BoundedMap::new(family.m(), entries)
}

/// The sublinear operator generated by a family: the componentwise supremum
/// of `{αx : α ∈ family}`. Factors exactly through the embedding followed by
/// the canonical sublinear operator; the factorization is asserted on every
/// call in debug builds.
pub fn p_family(family: &OperatorFamily, x: &[Rational]) -> Result<Vec<Rational>> {
    let mut sup = family.members[0].apply(x)?;
    for op in &family.members[1..] {
        for (s, c) in sup.iter_mut().zip(op.apply(x)?) {
            if c > *s {
                *s = c;
            }
        }
    }
    debug_assert_eq!(sup, canonical_sublinear(&family_embed(family, x)?));
    Ok(sup)
}

/// Support set of a scalar sublinear function: the polytope of linear
/// functionals dominated by it everywhere, namely the convex hull of the
/// piece slopes with redundant points removed.
pub fn support_set(p: &PolyFunc) -> Result<Polytope> {
    if !p.is_sublinear()? {
        return Err(Error::NotSublinear("support set input"));
    }
    let slopes: Vec<Vec<Rational>> = p.pieces().iter().map(|f| f.slope.clone()).collect();
    Polytope::new(p.dim(), slopes)?.reduced()
}

/// Row-factorized support hull of an operator family: an operator T is
/// dominated by the family's sublinear operator exactly when each of its
/// rows lies in the convex hull of the corresponding rows of the members.
#[derive(Debug, Clone)]
pub struct SupportHull {
    row_hulls: Vec<Polytope>,
}

impl SupportHull {
    pub fn row_hulls(&self) -> &[Polytope] {
        &self.row_hulls
    }

    pub fn contains(&self, t: &MatrixOperator) -> Result<bool> {
        if t.m() != self.row_hulls.len() {
            return Err(Error::DimensionMismatch {
                expected: self.row_hulls.len(),
                got: t.m(),
            });
        }
        for (row, hull) in t.rows().iter().zip(&self.row_hulls) {
            if !hull.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn support_hull(family: &OperatorFamily) -> Result<SupportHull> {
    let n = family.n();
    let row_hulls = (0..family.m())
        .map(|j| {
            let rows: Vec<Vec<Rational>> =
                family.members.iter().map(|op| op.rows()[j].clone()).collect();
            Polytope::new(n, rows)?.reduced()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SupportHull { row_hulls })
}

/// Largest input dimension for which composition subdifferentials are
/// enumerated as explicit polytopes; membership queries have no cap.
pub const COMPOSITION_ENUM_CAP: usize = 3;

/// The subdifferential of `outer ∘ inner` computed two independent ways:
/// directly as the support set of the expanded piecewise-linear composite,
/// and through the composition formula as the set of mixtures
/// `Σⱼ μⱼ sⱼ` with `μ` in the outer support set and `sⱼ` in the inner ones.
#[derive(Debug, Clone)]
pub struct CompositionReport {
    pub direct: Polytope,
    pub formula: Polytope,
    pub agree: bool,
}

fn check_composition_inputs(inner: &[PolyFunc], outer: &PolyFunc) -> Result<usize> {
    if inner.is_empty() {
        return Err(Error::Empty("inner function list"));
    }
    let n = inner[0].dim();
    for f in inner {
        if f.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: f.dim() });
        }
        if !f.is_sublinear()? {
            return Err(Error::NotSublinear("inner function"));
        }
    }
    if outer.dim() != inner.len() {
        return Err(Error::DimensionMismatch { expected: inner.len(), got: outer.dim() });
    }
    if !outer.is_sublinear()? {
        return Err(Error::NotSublinear("outer function"));
    }
    let increasing = outer
        .pieces()
        .iter()
        .all(|f| f.slope.iter().all(|c| *c >= Rational::zero()));
    if !increasing {
        return Err(Error::NotIncreasing);
    }
    Ok(n)
}

/// All slopes of the expanded composite `x ↦ outer(inner(x))`: one per outer
/// piece and per choice of an inner piece in each coordinate. Nonnegative
/// outer slopes make the expansion exact.
fn expanded_composite_slopes(inner: &[PolyFunc], outer: &PolyFunc, n: usize) -> Vec<Vec<Rational>> {
    let mut slopes = Vec::new();
    let counts: Vec<usize> = inner.iter().map(|f| f.pieces().len()).collect();
    for mu in outer.pieces() {
        let mut choice = vec![0usize; inner.len()];
        loop {
            let mut s = zeros(n);
            for (j, f) in inner.iter().enumerate() {
                let a = &f.pieces()[choice[j]].slope;
                for c in 0..n {
                    s[c] += &mu.slope[j] * &a[c];
                }
            }
            slopes.push(s);
            // advance the mixed-radix choice vector
            let mut j = 0;
            loop {
                if j == inner.len() {
                    break;
                }
                choice[j] += 1;
                if choice[j] < counts[j] {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
            if j == inner.len() {
                break;
            }
        }
    }
    slopes
}

pub fn composition_subdifferential(
    inner: &[PolyFunc],
    outer: &PolyFunc,
) -> Result<CompositionReport> {
    let n = check_composition_inputs(inner, outer)?;
    if n > COMPOSITION_ENUM_CAP {
        return Err(Error::CapExceeded {
            cap_name: "composition enumeration dimension",
            cap: COMPOSITION_ENUM_CAP,
            got: n,
        });
    }
    let direct = Polytope::new(n, expanded_composite_slopes(inner, outer, n))?.reduced()?;

    // formula side: candidates are Σⱼ μⱼ sⱼ over vertices μ of the outer
    // support set and vertex choices sⱼ from each inner support set
    let outer_vertices = support_set(outer)?.vertices().to_vec();
    let inner_sets: Vec<Vec<Vec<Rational>>> = inner
        .iter()
        .map(|f| Ok(support_set(f)?.vertices().to_vec()))
        .collect::<Result<_>>()?;
    let counts: Vec<usize> = inner_sets.iter().map(Vec::len).collect();
    let mut candidates = Vec::new();
    for mu in &outer_vertices {
        let mut choice = vec![0usize; inner.len()];
        loop {
            let mut s = zeros(n);
            for (j, set) in inner_sets.iter().enumerate() {
                for c in 0..n {
                    s[c] += &mu[j] * &set[choice[j]][c];
                }
            }
            candidates.push(s);
            let mut j = 0;
            loop {
                if j == inner.len() {
                    break;
                }
                choice[j] += 1;
                if choice[j] < counts[j] {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
            if j == inner.len() {
                break;
            }
        }
    }
    let formula = Polytope::new(n, candidates)?.reduced()?;
    let agree = direct.set_eq(&formula)?;
    Ok(CompositionReport { direct, formula, agree })
}

/// Membership in the composition subdifferential without enumeration, via
/// one feasibility program realizing the composition formula: weights θ over
/// the outer support set's vertices and per-coordinate mixed weights β with
/// `Σₗ βⱼₗ = μⱼ = Σₖ θₖ μᵏⱼ` and `Σⱼₗ βⱼₗ sⱼₗ = t`.
pub fn composition_membership(
    inner: &[PolyFunc],
    outer: &PolyFunc,
    t: &[Rational],
) -> Result<bool> {
    let n = check_composition_inputs(inner, outer)?;
    if t.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.len() });
    }
    let outer_vertices = support_set(outer)?.vertices().to_vec();
    let inner_sets: Vec<Vec<Vec<Rational>>> = inner
        .iter()
        .map(|f| Ok(support_set(f)?.vertices().to_vec()))
        .collect::<Result<_>>()?;
    let k = outer_vertices.len();
    let beta_counts: Vec<usize> = inner_sets.iter().map(Vec::len).collect();
    let beta_total: usize = beta_counts.iter().sum();
    // variables: θ (k, nonneg), β (per inner vertex, nonneg)
    let total = k + beta_total;
    let mut prog = Program::nonnegative(total);
    // Σ θ = 1
    let mut row = zeros(total);
    for i in 0..k {
        row[i] = Rational::from_integer(1.into());
    }
    prog.eq(row, Rational::from_integer(1.into()));
    // per inner coordinate j: Σₗ βⱼₗ − Σₖ θₖ μᵏ[j] = 0
    let mut offset = k;
    for (j, count) in beta_counts.iter().enumerate() {
        let mut row = zeros(total);
        for l in 0..*count {
            row[offset + l] = Rational::from_integer(1.into());
        }
        for (i, mu) in outer_vertices.iter().enumerate() {
            row[i] = -mu[j].clone();
        }
        prog.eq(row, Rational::zero());
        offset += count;
    }
    // per output coordinate c: Σⱼₗ βⱼₗ sⱼₗ[c] = t[c]
    for c in 0..n {
        let mut row = zeros(total);
        let mut offset = k;
        for set in &inner_sets {
            for s in set {
                row[offset] = s[c].clone();
                offset += 1;
            }
        }
        prog.eq(row, t[c].clone());
    }
    match lp_solve_raw(Sense::Min, &zeros(total), &prog)? {
        Outcome::Optimal { .. } => Ok(true),
        Outcome::Infeasible { .. } => Ok(false),
        Outcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineFunctional;
    use crate::scalar::{rat, ratio};

    fn v(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&n| rat(n)).collect()
    }

    fn mat(rows: &[&[i64]]) -> MatrixOperator {
        MatrixOperator::new(rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    fn sublinear(dim: usize, slopes: &[&[i64]]) -> PolyFunc {
        PolyFunc::new(
            dim,
            slopes.iter().map(|s| AffineFunctional::linear(v(s))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn canonical_sublinear_is_componentwise_max() {
        let f = BoundedMap::new(
            2,
            vec![("a".into(), v(&[1, 0])), ("b".into(), v(&[0, 1]))],
        )
        .unwrap();
        assert_eq!(canonical_sublinear(&f), v(&[1, 1]));

        let single = BoundedMap::new(2, vec![("only".into(), v(&[-3, 7]))]).unwrap();
        assert_eq!(canonical_sublinear(&single), v(&[-3, 7]));
    }

    #[test]
    fn canonical_sublinear_is_subadditive_and_homogeneous() {
        let labels = ["a", "b", "c"];
        let fs: Vec<Vec<Rational>> = vec![v(&[1, -2]), v(&[3, 0]), v(&[-1, 4])];
        let gs: Vec<Vec<Rational>> = vec![v(&[0, 5]), v(&[-2, -1]), v(&[2, 2])];
        let make = |vals: &[Vec<Rational>]| {
            BoundedMap::new(
                2,
                labels.iter().zip(vals).map(|(l, v)| (l.to_string(), v.clone())).collect(),
            )
            .unwrap()
        };
        let f = make(&fs);
        let g = make(&gs);
        let fg: Vec<Vec<Rational>> = fs
            .iter()
            .zip(&gs)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        let sum = canonical_sublinear(&make(&fg));
        let bound: Vec<Rational> = canonical_sublinear(&f)
            .iter()
            .zip(canonical_sublinear(&g))
            .map(|(a, b)| a + b)
            .collect();
        for (s, b) in sum.iter().zip(&bound) {
            assert!(s <= b, "subadditivity must hold componentwise");
        }
        // positive homogeneity
        let lambda = ratio(7, 3);
        let scaled: Vec<Vec<Rational>> = fs
            .iter()
            .map(|a| a.iter().map(|x| &lambda * x).collect())
            .collect();
        let lhs = canonical_sublinear(&make(&scaled));
        let rhs: Vec<Rational> = canonical_sublinear(&f).iter().map(|x| &lambda * x).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn embedding_is_linear_and_factorization_holds() {
        let family = OperatorFamily::new(vec![mat(&[&[1]]), mat(&[&[-1]])]).unwrap();
        let f = family_embed(&family, &v(&[3])).unwrap();
        assert_eq!(f.value("op0").unwrap(), v(&[3]).as_slice());
        assert_eq!(f.value("op1").unwrap(), v(&[-3]).as_slice());

        let zero = family_embed(&family, &v(&[0])).unwrap();
        for (_, val) in zero.entries() {
            assert_eq!(val, &v(&[0]));
        }

        // 2×2 family at e₁ picks out first columns
        let fam2 = OperatorFamily::new(vec![mat(&[&[1, 2], &[3, 4]]), mat(&[&[5, 6], &[7, 8]])])
            .unwrap();
        let e1 = family_embed(&fam2, &v(&[1, 0])).unwrap();
        assert_eq!(e1.value("op0").unwrap(), v(&[1, 3]).as_slice());
        assert_eq!(e1.value("op1").unwrap(), v(&[5, 7]).as_slice());

        // factorization on a few points
        for x in [v(&[1, 0]), v(&[-2, 3]), v(&[0, 0])] {
            assert_eq!(
                p_family(&fam2, &x).unwrap(),
                canonical_sublinear(&family_embed(&fam2, &x).unwrap())
            );
        }
    }

    #[test]
    fn p_family_values() {
        let coords = OperatorFamily::new(vec![mat(&[&[1, 0]]), mat(&[&[0, 1]])]).unwrap();
        assert_eq!(p_family(&coords, &v(&[2, 5])).unwrap(), v(&[5]));
        assert_eq!(p_family(&coords, &v(&[0, 0])).unwrap(), v(&[0]));

        // {A, −A} gives the componentwise absolute value of Ax
        let a = mat(&[&[1, 2], &[-3, 1]]);
        let neg = MatrixOperator::new(
            a.rows().iter().map(|r| r.iter().map(|c| -c).collect()).collect(),
        )
        .unwrap();
        let fam = OperatorFamily::new(vec![a.clone(), neg]).unwrap();
        for x in [v(&[1, 1]), v(&[-2, 5]), v(&[3, 0])] {
            let expect: Vec<Rational> =
                a.apply(&x).unwrap().iter().map(num_traits::Signed::abs).collect();
            assert_eq!(p_family(&fam, &x).unwrap(), expect);
        }
    }

    #[test]
    fn positivity_predicate() {
        assert!(mat(&[&[1, 0], &[2, 3]]).is_positive());
        assert!(!mat(&[&[1, -1]]).is_positive());
    }

    #[test]
    fn support_set_examples() {
        let abs = sublinear(1, &[&[1], &[-1]]);
        let s = support_set(&abs).unwrap();
        let mut xs: Vec<Rational> = s.vertices().iter().map(|p| p[0].clone()).collect();
        xs.sort();
        assert_eq!(xs, v(&[-1, 1]));

        // a middle slope inside the hull is dropped
        let three = sublinear(1, &[&[2], &[1]]);
        let with_mid = PolyFunc::new(
            1,
            vec![
                AffineFunctional::linear(v(&[1])),
                AffineFunctional::linear(v(&[2])),
                AffineFunctional::linear(vec![ratio(3, 2)]),
            ],
        )
        .unwrap();
        let s = support_set(&with_mid).unwrap();
        assert!(s.set_eq(&support_set(&three).unwrap()).unwrap());
        assert_eq!(s.vertices().len(), 2);

        // all three generators of max(x₁, x₂, 0) are vertices
        let m = support_set(&sublinear(2, &[&[1, 0], &[0, 1], &[0, 0]])).unwrap();
        assert_eq!(m.vertices().len(), 3);
        for t in [v(&[1, 0]), v(&[0, 1]), v(&[0, 0])] {
            assert!(m.contains(&t).unwrap());
        }

        // support-set correctness: membership matches pointwise dominance
        let p = sublinear(2, &[&[2, 1], &[-1, 1], &[0, -1]]);
        let s = support_set(&p).unwrap();
        let inside = v(&[0, 0]);
        assert!(s.contains(&inside).unwrap());
        let outside = v(&[3, 0]);
        assert!(!s.contains(&outside).unwrap());
        // ⟨outside, e₁⟩ = 3 > p(e₁) = 2 confirms the exclusion pointwise
        assert!(dotv(&outside, &v(&[1, 0])) > p.eval(&v(&[1, 0])).unwrap());
    }

    fn dotv(a: &[Rational], b: &[Rational]) -> Rational {
        crate::linalg::dot(a, b)
    }

    #[test]
    fn support_hull_is_row_factorized_and_strict() {
        // two diagonal members; mixing rows crosses members
        let fam =
            OperatorFamily::new(vec![mat(&[&[1, 0], &[0, 1]]), mat(&[&[0, 0], &[0, 0]])])
                .unwrap();
        let hull = support_hull(&fam).unwrap();
        let half = MatrixOperator::new(vec![
            vec![ratio(1, 2), rat(0)],
            vec![rat(0), ratio(1, 2)],
        ])
        .unwrap();
        assert!(hull.contains(&half).unwrap());

        // the strictness witness: each row comes from a different member, so
        // the matrix is in the support hull but not in the convex hull of
        // the members flattened as vectors
        let mixed = mat(&[&[1, 0], &[0, 0]]);
        assert!(hull.contains(&mixed).unwrap());
        let flatten = |op: &MatrixOperator| -> Vec<Rational> {
            op.rows().iter().flatten().cloned().collect()
        };
        let members_flat =
            Polytope::new(4, fam.members().iter().map(flatten).collect()).unwrap();
        assert!(!members_flat.contains(&flatten(&mixed)).unwrap());

        // outside even row-wise
        let outside = mat(&[&[2, 0], &[0, 0]]);
        assert!(!hull.contains(&outside).unwrap());
    }

    #[test]
    fn support_hull_degenerate_cases() {
        // singleton family: the hull is that single operator
        let a = mat(&[&[1, 2], &[3, 4]]);
        let hull = support_hull(&OperatorFamily::new(vec![a.clone()]).unwrap()).unwrap();
        assert!(hull.contains(&a).unwrap());
        let shifted = mat(&[&[2, 2], &[3, 4]]);
        assert!(!hull.contains(&shifted).unwrap());

        // one output row: the support hull is the ordinary convex hull
        let fam = OperatorFamily::new(vec![mat(&[&[1, 0]]), mat(&[&[0, 1]]), mat(&[&[2, 2]])])
            .unwrap();
        let hull = support_hull(&fam).unwrap();
        let conv = Polytope::new(
            2,
            fam.members().iter().map(|op| op.rows()[0].clone()).collect(),
        )
        .unwrap();
        assert!(hull.row_hulls()[0].set_eq(&conv).unwrap());
    }

    #[test]
    fn composition_interval_example() {
        // inner = (|x|, 2|x|), outer = max(e₁, e₂): composite is 2|x|
        let inner = vec![sublinear(1, &[&[1], &[-1]]), sublinear(1, &[&[2], &[-2]])];
        let outer = sublinear(2, &[&[1, 0], &[0, 1]]);
        let rep = composition_subdifferential(&inner, &outer).unwrap();
        assert!(rep.agree);
        let expected = Polytope::new(1, vec![v(&[-2]), v(&[2])]).unwrap();
        assert!(rep.direct.set_eq(&expected).unwrap());
        assert!(rep.formula.set_eq(&expected).unwrap());
        // membership predicate agrees on probes straddling the boundary
        for (t, inside) in [(rat(0), true), (rat(2), true), (ratio(5, 2), false)] {
            assert_eq!(composition_membership(&inner, &outer, &[t]).unwrap(), inside);
        }
    }

    #[test]
    fn composition_with_projection_recovers_inner() {
        let inner = vec![sublinear(1, &[&[1], &[-1]]), sublinear(1, &[&[2], &[-2]])];
        let proj = sublinear(2, &[&[1, 0]]);
        let rep = composition_subdifferential(&inner, &proj).unwrap();
        assert!(rep.agree);
        assert!(rep.direct.set_eq(&support_set(&inner[0]).unwrap()).unwrap());
    }

    #[test]
    fn composition_with_linear_inner_is_a_pullback() {
        // inner = Ax with A = [[1,2],[3,4]]: each coordinate a single piece
        let inner = vec![sublinear(2, &[&[1, 2]]), sublinear(2, &[&[3, 4]])];
        let outer = sublinear(2, &[&[1, 0], &[0, 1]]);
        let rep = composition_subdifferential(&inner, &outer).unwrap();
        assert!(rep.agree);
        let expected = Polytope::new(2, vec![v(&[1, 2]), v(&[3, 4])]).unwrap();
        assert!(rep.direct.set_eq(&expected).unwrap());
    }

    #[test]
    fn composition_rejects_non_increasing_outer() {
        let inner = vec![sublinear(1, &[&[1], &[-1]])];
        let outer = sublinear(1, &[&[-1]]);
        assert!(matches!(
            composition_subdifferential(&inner, &outer),
            Err(Error::NotIncreasing)
        ));
    }

    #[test]
    fn composition_enumeration_cap() {
        let inner: Vec<PolyFunc> =
            (0..2).map(|_| sublinear(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]])).collect();
        let outer = sublinear(2, &[&[1, 0], &[0, 1]]);
        assert!(matches!(
            composition_subdifferential(&inner, &outer),
            Err(Error::CapExceeded { .. })
        ));
        // membership stays available above the cap
        let t = v(&[1, 0, 0, 0]);
        assert!(composition_membership(&inner, &outer, &t).unwrap());
    }
}
