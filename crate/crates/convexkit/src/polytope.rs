//! Polytopes as finite vertex lists with LP-decided hull membership.
//!
//! A `Polytope` is never empty — emptiness is represented by `Option` at the
//! operations that can produce it. Vertex lists are deduplicated and sorted;
//! [`Polytope::reduced`] additionally removes non-extreme points, after which
//! the sorted vertex list is a canonical representative of the set.

use num_traits::One;

use crate::cone::cone_rays_from_inequalities;
use crate::error::{Error, Result};
use crate::linalg::{dot, zeros};
use crate::lp::{lp_solve_raw, Outcome, Program, Sense};
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<Rational>>,
}

impl Polytope {
    /// Convex hull of a nonempty point list.
    pub fn new(dim: usize, points: Vec<Vec<Rational>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("polytope vertex list"));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
        }
        let mut vertices = points;
        vertices.sort();
        vertices.dedup();
        Ok(Polytope { dim, vertices })
    }

    /// Single point.
    pub fn point(p: Vec<Rational>) -> Self {
        Polytope { dim: p.len(), vertices: vec![p] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    /// Convex-combination weights over the stored vertices expressing `y`,
    /// or `None` when `y` is outside the hull.
    pub fn hull_membership(&self, y: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: y.len() });
        }
        let k = self.vertices.len();
        let mut prog = Program::nonnegative(k);
        for i in 0..self.dim {
            let coeffs: Vec<Rational> = self.vertices.iter().map(|v| v[i].clone()).collect();
            prog.eq(coeffs, y[i].clone());
        }
        prog.eq(vec![Rational::one(); k], Rational::one());
        match lp_solve_raw(Sense::Min, &zeros(k), &prog)? {
            Outcome::Optimal { point, .. } => Ok(Some(point)),
            Outcome::Infeasible { .. } => Ok(None),
            Outcome::Unbounded { .. } => unreachable!("zero objective"),
        }
    }

    pub fn contains(&self, y: &[Rational]) -> Result<bool> {
        Ok(self.hull_membership(y)?.is_some())
    }

    pub fn contains_polytope(&self, other: &Polytope) -> Result<bool> {
        for v in &other.vertices {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Set equality via mutual vertex membership.
    pub fn set_eq(&self, other: &Polytope) -> Result<bool> {
        Ok(self.dim == other.dim
            && self.contains_polytope(other)?
            && other.contains_polytope(self)?)
    }

    /// Remove every point lying in the hull of the others. The result lists
    /// exactly the extreme points, so equal sets produce identical values.
    pub fn reduced(&self) -> Result<Polytope> {
        let mut vs = self.vertices.clone();
        let mut i = 0;
        while vs.len() > 1 && i < vs.len() {
            let candidate = vs.remove(i);
            let rest = Polytope { dim: self.dim, vertices: vs.clone() };
            if rest.contains(&candidate)? {
                // interior or face-interior point: drop
            } else {
                vs.insert(i, candidate);
                i += 1;
            }
        }
        Ok(Polytope { dim: self.dim, vertices: vs })
    }

    /// Exact support value `max ⟨d, v⟩` over the polytope.
    pub fn support_value(&self, d: &[Rational]) -> Result<Rational> {
        if d.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: d.len() });
        }
        Ok(self
            .vertices
            .iter()
            .map(|v| dot(d, v))
            .max()
            .expect("polytope is nonempty"))
    }

    /// Minkowski sum.
    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(crate::linalg::vec_add(a, b));
            }
        }
        Polytope::new(self.dim, pts)?.reduced()
    }

    /// Scale every point by `c`.
    pub fn scale(&self, c: &Rational) -> Polytope {
        let vertices = self
            .vertices
            .iter()
            .map(|v| crate::linalg::vec_scale(c, v))
            .collect();
        Polytope::new(self.dim, vertices).expect("nonempty").reduced().expect("lp")
    }

    pub fn negated(&self) -> Polytope {
        let vertices = self.vertices.iter().map(|v| crate::linalg::vec_neg(v)).collect();
        Polytope::new(self.dim, vertices).expect("nonempty")
    }
}

/// Free-function form of convex-hull membership.
pub fn hull_membership(y: &[Rational], p: &Polytope) -> Result<Option<Vec<Rational>>> {
    p.hull_membership(y)
}

/// Vertex enumeration of `{x : aᵢ·x ≤ bᵢ, cⱼ·x = dⱼ}` for `dim ≤ 3` via the
/// homogenization cone in one extra dimension.
///
/// Returns `Ok(None)` when the system is infeasible and
/// [`Error::UnboundedPolyhedron`] when the feasible set is unbounded.
pub fn vertices_from_inequalities(
    dim: usize,
    ineqs: &[(Vec<Rational>, Rational)],
    eqs: &[(Vec<Rational>, Rational)],
) -> Result<Option<Polytope>> {
    if dim + 1 > crate::cone::DD_DIM_CAP {
        return Err(Error::CapExceeded {
            cap_name: "vertex enumeration dim",
            cap: crate::cone::DD_DIM_CAP - 1,
            got: dim,
        });
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (a, b) in ineqs {
        // a·x ≤ b·s
        let mut row = a.clone();
        row.push(-b);
        rows.push(row);
    }
    for (c, d) in eqs {
        let mut row = c.clone();
        row.push(-d);
        rows.push(row.clone());
        rows.push(crate::linalg::vec_neg(&row));
    }
    // s ≥ 0
    let mut srow = zeros(dim + 1);
    srow[dim] = -Rational::one();
    rows.push(srow);
    let cone = cone_rays_from_inequalities(dim + 1, &rows)?;
    let mut verts = Vec::new();
    let mut recession = false;
    for r in cone.rays() {
        let s = &r[dim];
        if num_traits::Signed::is_positive(s) {
            let x: Vec<Rational> = r[..dim].iter().map(|v| v / s).collect();
            verts.push(x);
        } else if !crate::linalg::is_zero_vec(&r[..dim]) {
            recession = true;
        }
    }
    if verts.is_empty() {
        return Ok(None);
    }
    if recession {
        return Err(Error::UnboundedPolyhedron);
    }
    Ok(Some(Polytope::new(dim, verts)?.reduced()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn v(x: &[i64]) -> Vec<Rational> {
        x.iter().map(|&n| rat(n)).collect()
    }

    fn poly(dim: usize, pts: &[&[i64]]) -> Polytope {
        Polytope::new(dim, pts.iter().map(|p| v(p)).collect()).unwrap()
    }

    #[test]
    fn membership_weights_are_convex_combination() {
        let p = poly(2, &[&[0, 0], &[2, 0], &[0, 2]]);
        let w = p.hull_membership(&v(&[1, 1])).unwrap().unwrap();
        // weights reproduce the point and sum to one
        let mut rec = zeros(2);
        let mut total = rat(0);
        for (wi, vert) in w.iter().zip(p.vertices()) {
            assert!(wi >= &rat(0));
            total += wi;
            for j in 0..2 {
                rec[j] += wi * &vert[j];
            }
        }
        assert_eq!(total, rat(1));
        assert_eq!(rec, v(&[1, 1]));
        assert!(!p.contains(&v(&[2, 2])).unwrap());
    }

    #[test]
    fn reduced_removes_non_extreme_points() {
        let p = poly(1, &[&[0], &[1], &[2]]);
        let r = p.reduced().unwrap();
        assert_eq!(r.vertices(), &[v(&[0]), v(&[2])]);
        // canonical form: equal sets yield identical reduced vertex lists
        let q = poly(1, &[&[2], &[0], &[1], &[1]]).reduced().unwrap();
        assert_eq!(r, q);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(Polytope::new(2, vec![]), Err(Error::Empty(_))));
    }

    #[test]
    fn vertex_enumeration_of_square() {
        let ineqs = vec![
            (v(&[1, 0]), rat(1)),
            (v(&[-1, 0]), rat(0)),
            (v(&[0, 1]), rat(1)),
            (v(&[0, -1]), rat(0)),
        ];
        let p = vertices_from_inequalities(2, &ineqs, &[]).unwrap().unwrap();
        let expected = poly(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        assert!(p.set_eq(&expected).unwrap());
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn vertex_enumeration_detects_empty_and_unbounded() {
        // x ≤ -1, x ≥ 0 : empty
        let empty = vertices_from_inequalities(
            1,
            &[(v(&[1]), rat(-1)), (v(&[-1]), rat(0))],
            &[],
        )
        .unwrap();
        assert!(empty.is_none());
        // x ≥ 0 alone : unbounded
        let unb = vertices_from_inequalities(1, &[(v(&[-1]), rat(0))], &[]);
        assert!(matches!(unb, Err(Error::UnboundedPolyhedron)));
    }

    #[test]
    fn vertex_enumeration_respects_equalities() {
        // segment {x + y = 1, 0 ≤ x ≤ 1} in the plane
        let p = vertices_from_inequalities(
            2,
            &[(v(&[1, 0]), rat(1)), (v(&[-1, 0]), rat(0))],
            &[(v(&[1, 1]), rat(1))],
        )
        .unwrap()
        .unwrap();
        let expected = poly(2, &[&[0, 1], &[1, 0]]);
        assert!(p.set_eq(&expected).unwrap());
    }

    #[test]
    fn support_values_and_minkowski_sum() {
        let a = poly(2, &[&[0, 0], &[1, 0]]);
        let b = poly(2, &[&[0, 0], &[0, 1]]);
        let s = a.minkowski_sum(&b).unwrap();
        assert!(s.set_eq(&poly(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap());
        assert_eq!(s.support_value(&[rat(1), rat(1)]).unwrap(), rat(2));
        assert_eq!(s.support_value(&[ratio(-1, 2), rat(0)]).unwrap(), rat(0));
    }
}
