//! Small exact linear algebra helpers: dot products, Gaussian elimination,
//! reduced row echelon spans, and primitive integer normalization of rays.

use num_integer::Integer;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| -x).collect()
}

pub fn vec_scale(c: &Rational, a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn zeros(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

pub fn unit(dim: usize, i: usize) -> Vec<Rational> {
    let mut v = zeros(dim);
    v[i] = Rational::one();
    v
}

pub fn mat_vec(m: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot(row, x)).collect()
}

pub fn inf_norm(a: &[Rational]) -> Rational {
    a.iter()
        .map(|x| x.abs())
        .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc })
}

/// Scale a rational vector to a primitive integer vector with the same
/// direction (gcd of entries 1). The zero vector maps to itself. Used as the
/// canonical representative of a ray.
pub fn normalize_primitive(v: &[Rational]) -> Vec<Rational> {
    if is_zero_vec(v) {
        return zeros(v.len());
    }
    let mut denom_lcm = BigInt::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for n in &ints {
        g = g.gcd(n);
    }
    ints.into_iter()
        .map(|n| Rational::from_integer(n / &g))
        .collect()
}

/// Reduced row echelon span of a set of vectors: a canonical basis of their
/// linear hull together with the pivot column of each basis row.
///
/// Rows are in RREF, so for any `v` in the span the coordinates of `v` in
/// this basis are exactly its entries at the pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub dim: usize,
    pub basis: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.residual(v).is_none()
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside
    /// the span.
    pub fn coords(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if self.residual(v).is_some() {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// First nonzero coordinate of `v` after eliminating the span, i.e.
    /// `Some(_)` iff `v` is outside the span.
    fn residual(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let mut w = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let c = w[p].clone();
                for j in 0..self.dim {
                    let t = &c * &row[j];
                    w[j] -= t;
                }
            }
        }
        if is_zero_vec(&w) {
            None
        } else {
            Some(w)
        }
    }

    /// Insert `v`, extending the basis if it enlarges the span. Returns true
    /// if the rank grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let Some(mut w) = self.residual(v) else {
            return false;
        };
        let p = w.iter().position(|x| !x.is_zero()).unwrap();
        let lead = w[p].clone();
        for x in &mut w {
            *x /= &lead;
        }
        // re-reduce existing rows against the new pivot
        for row in &mut self.basis {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for j in 0..self.dim {
                    let t = &c * &w[j];
                    row[j] -= t;
                }
            }
        }
        let at = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.basis.insert(at, w);
        self.pivots.insert(at, p);
        true
    }
}

/// Canonical span of `rows` inside ℚ^dim.
pub fn span(dim: usize, rows: &[Vec<Rational>]) -> Echelon {
    let mut e = Echelon { dim, basis: Vec::new(), pivots: Vec::new() };
    for r in rows {
        e.insert(r);
    }
    e
}

/// Solve `A x = b` exactly. Returns one solution (free variables pinned to
/// zero, deterministic pivot order) or `None` when inconsistent.
pub fn solve_linear_system(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len());
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let lead = m[r][c].clone();
        for x in &mut m[r] {
            *x /= &lead;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // inconsistent iff a zero row has nonzero rhs
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = zeros(cols);
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}
