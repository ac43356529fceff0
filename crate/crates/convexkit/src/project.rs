//! Exact projection of polyhedra described by linear constraints: Gaussian
//! elimination of equalities, Fourier–Motzkin elimination of inequalities
//! with LP-based redundancy pruning, and vertex recovery of the projected
//! polytope in low dimension.

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::linalg::{dot, is_zero_vec, normalize_primitive};
use crate::lp::{lp_solve_raw, Outcome, Program, Sense};
use crate::polytope::{vertices_from_inequalities, Polytope};
use crate::scalar::Rational;

/// A polyhedron `{z : ineqs: a·z ≤ b, eqs: c·z = d}` over `num_vars`
/// coordinates, the first `keep` of which survive projection.
#[derive(Debug, Clone, Default)]
pub struct HPolyhedron {
    pub num_vars: usize,
    pub ineqs: Vec<(Vec<Rational>, Rational)>,
    pub eqs: Vec<(Vec<Rational>, Rational)>,
}

impl HPolyhedron {
    pub fn new(num_vars: usize) -> Self {
        HPolyhedron { num_vars, ineqs: Vec::new(), eqs: Vec::new() }
    }

    pub fn le(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.ineqs.push((coeffs, rhs));
    }

    pub fn ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        let neg: Vec<Rational> = coeffs.iter().map(|c| -c).collect();
        assert_eq!(neg.len(), self.num_vars);
        self.ineqs.push((neg, -rhs));
    }

    pub fn eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.eqs.push((coeffs, rhs));
    }

    /// Mark variable `j` nonnegative.
    pub fn nonneg(&mut self, j: usize) {
        let mut row = vec![Rational::zero(); self.num_vars];
        row[j] = Rational::from_integer((-1).into());
        self.ineqs.push((row, Rational::zero()));
    }

    /// Does `z` satisfy every inequality and equality of the system?
    pub fn satisfied(&self, z: &[Rational]) -> bool {
        self.ineqs.iter().all(|(a, b)| dot(a, z) <= *b)
            && self.eqs.iter().all(|(c, d)| dot(c, z) == *d)
    }
}

/// Project onto the first `keep` coordinates. Equalities are eliminated by
/// substitution first; remaining tail variables fall to Fourier–Motzkin with
/// redundancy pruning after every elimination.
pub fn eliminate_to(sys: &HPolyhedron, keep: usize) -> Result<HPolyhedron> {
    assert!(keep <= sys.num_vars);
    let mut eqs = sys.eqs.clone();
    let mut ineqs = sys.ineqs.clone();
    let n = sys.num_vars;

    // substitute away eliminated variables that appear in equalities
    while let Some(pos) = eqs.iter().position(|(c, _)| c[keep..].iter().any(|x| !x.is_zero())) {
        let (c, d) = eqs.remove(pos);
        let var = (keep..n).find(|&j| !c[j].is_zero()).unwrap();
        let pivot = c[var].clone();
        let sub = |row: &mut Vec<Rational>, rhs: &mut Rational| {
            if row[var].is_zero() {
                return;
            }
            let f = &row[var] / &pivot;
            for j in 0..n {
                let t = &f * &c[j];
                row[j] -= t;
            }
            let t = &f * &d;
            *rhs -= t;
        };
        for (row, rhs) in eqs.iter_mut() {
            sub(row, rhs);
        }
        for (row, rhs) in ineqs.iter_mut() {
            sub(row, rhs);
        }
    }
    let kept_eqs = eqs;

    // Fourier–Motzkin on the remaining tail variables
    for var in (keep..n).rev() {
        let (mut pos, mut neg, mut zero): (Vec<_>, Vec<_>, Vec<_>) = (vec![], vec![], vec![]);
        for (a, b) in ineqs.into_iter() {
            if a[var].is_positive() {
                pos.push((a, b));
            } else if a[var].is_negative() {
                neg.push((a, b));
            } else {
                zero.push((a, b));
            }
        }
        let mut next = zero;
        for (pa, pb) in &pos {
            for (na, nb) in &neg {
                // (-n_v)·p + p_v·n cancels the coefficient on `var`
                let cp = -na[var].clone();
                let cn = pa[var].clone();
                let mut row: Vec<Rational> = pa
                    .iter()
                    .zip(na)
                    .map(|(x, y)| &cp * x + &cn * y)
                    .collect();
                let rhs = &cp * pb + &cn * nb;
                debug_assert!(row[var].is_zero());
                // normalize for deduplication
                let key = normalize_row(&mut row, rhs);
                next.push(key);
            }
        }
        next.sort();
        next.dedup();
        // contradictory constant rows (0 ≤ negative) are kept: they encode
        // emptiness and are handled by the consumers
        ineqs = prune_redundant(n, next, &kept_eqs)?;
    }

    let trim = |v: &[Rational]| v[..keep].to_vec();
    Ok(HPolyhedron {
        num_vars: keep,
        ineqs: ineqs.iter().map(|(a, b)| (trim(a), b.clone())).collect(),
        eqs: kept_eqs.iter().map(|(c, d)| (trim(c), d.clone())).collect(),
    })
}

fn normalize_row(row: &mut Vec<Rational>, rhs: Rational) -> (Vec<Rational>, Rational) {
    if is_zero_vec(row) {
        return (row.clone(), rhs);
    }
    let mut full = row.clone();
    full.push(rhs);
    let norm = normalize_primitive(&full);
    // normalize_primitive preserves direction, so the inequality sense holds
    let rhs = norm.last().unwrap().clone();
    (norm[..norm.len() - 1].to_vec(), rhs)
}

/// Drop inequality rows implied by the remaining system.
fn prune_redundant(
    num_vars: usize,
    rows: Vec<(Vec<Rational>, Rational)>,
    eqs: &[(Vec<Rational>, Rational)],
) -> Result<Vec<(Vec<Rational>, Rational)>> {
    let mut kept = rows;
    let mut i = 0;
    while i < kept.len() {
        let (a, b) = kept[i].clone();
        if is_zero_vec(&a) {
            // constant row: drop when trivially true, keep when contradictory
            if !b.is_negative() {
                kept.remove(i);
            } else {
                i += 1;
            }
            continue;
        }
        let mut prog = Program::new(num_vars);
        for (j, (ra, rb)) in kept.iter().enumerate() {
            if j != i {
                prog.le(ra.clone(), rb.clone());
            }
        }
        for (ra, rb) in eqs {
            prog.eq(ra.clone(), rb.clone());
        }
        let redundant = match lp_solve_raw(Sense::Max, &a, &prog)? {
            Outcome::Optimal { value, .. } => value <= b,
            Outcome::Unbounded { .. } => false,
            Outcome::Infeasible { .. } => true, // empty set: any row is implied
        };
        if redundant {
            kept.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(kept)
}

/// Project a polyhedron onto its first `keep ≤ 3` coordinates and enumerate
/// the vertices of the (bounded) image. `Ok(None)` when the image is empty.
pub fn project_to_polytope(sys: &HPolyhedron, keep: usize) -> Result<Option<Polytope>> {
    let reduced = eliminate_to(sys, keep)?;
    if reduced
        .ineqs
        .iter()
        .any(|(a, b)| is_zero_vec(a) && b.is_negative())
    {
        return Ok(None);
    }
    vertices_from_inequalities(keep, &reduced.ineqs, &reduced.eqs)
}
