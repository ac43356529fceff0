//! Polyhedral cones given by finite ray lists, double description from
//! inequality systems, polars, and intersections.
//!
//! Rays are kept in canonical form: primitive integer vectors (direction
//! preserved), deduplicated, sorted. The cone with no rays is `{0}`.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero_vec, normalize_primitive, span, unit, zeros, Echelon};
use crate::lp::{lp_solve_raw, Outcome, Program, Sense};
use crate::scalar::Rational;

/// Enumeration cap for double description: ambient dimension at most 4.
pub const DD_DIM_CAP: usize = 4;

/// A polyhedral cone `cone(rays) = {Σ λᵢ rᵢ : λ ≥ 0}` in ℚ^dim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCone {
    dim: usize,
    rays: Vec<Vec<Rational>>,
}

impl PolyCone {
    /// Build a cone from generating rays. Rays are normalized to primitive
    /// integer vectors, deduplicated and sorted; zero vectors are dropped.
    pub fn new(dim: usize, rays: Vec<Vec<Rational>>) -> Result<Self> {
        for r in &rays {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
        }
        Ok(PolyCone { dim, rays: canonical_rays(rays) })
    }

    /// The trivial cone `{0}`.
    pub fn zero(dim: usize) -> Self {
        PolyCone { dim, rays: Vec::new() }
    }

    /// The whole space as a cone (generated by `±eᵢ`).
    pub fn full_space(dim: usize) -> Self {
        let mut rays = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let e = unit(dim, i);
            rays.push(e.clone());
            rays.push(crate::linalg::vec_neg(&e));
        }
        PolyCone { dim, rays: canonical_rays(rays) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<Rational>] {
        &self.rays
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty()
    }

    /// `-K`.
    pub fn negated(&self) -> PolyCone {
        let rays = self.rays.iter().map(|r| crate::linalg::vec_neg(r)).collect();
        PolyCone { dim: self.dim, rays: canonical_rays(rays) }
    }

    /// Product cone `K₁ × K₂` via block embedding.
    pub fn product(&self, other: &PolyCone) -> PolyCone {
        let dim = self.dim + other.dim;
        let mut rays = Vec::new();
        for r in &self.rays {
            let mut v = r.clone();
            v.extend(zeros(other.dim));
            rays.push(v);
        }
        for r in &other.rays {
            let mut v = zeros(self.dim);
            v.extend(r.clone());
            rays.push(v);
        }
        PolyCone { dim, rays: canonical_rays(rays) }
    }

    /// Linear span of the cone as a canonical echelon basis.
    pub fn linear_span(&self) -> Echelon {
        span(self.dim, &self.rays)
    }

    /// Does `x` lie in the cone? Decided by an exact feasibility LP over the
    /// generator weights.
    pub fn contains(&self, x: &[Rational]) -> Result<bool> {
        Ok(self.member_weights(x)?.is_some())
    }

    /// Nonnegative generator weights reproducing `x`, if any.
    pub fn member_weights(&self, x: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if self.rays.is_empty() {
            return Ok(if is_zero_vec(x) { Some(Vec::new()) } else { None });
        }
        let k = self.rays.len();
        let mut prog = Program::nonnegative(k);
        for i in 0..self.dim {
            let coeffs: Vec<Rational> = self.rays.iter().map(|r| r[i].clone()).collect();
            prog.eq(coeffs, x[i].clone());
        }
        match lp_solve_raw(Sense::Min, &zeros(k), &prog)? {
            Outcome::Optimal { point, .. } => Ok(Some(point)),
            Outcome::Infeasible { .. } => Ok(None),
            Outcome::Unbounded { .. } => unreachable!("zero objective"),
        }
    }

    pub fn contains_cone(&self, other: &PolyCone) -> Result<bool> {
        for r in &other.rays {
            if !self.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Set equality via mutual ray membership.
    pub fn set_eq(&self, other: &PolyCone) -> Result<bool> {
        Ok(self.dim == other.dim
            && self.contains_cone(other)?
            && other.contains_cone(self)?)
    }

    /// Remove rays generated by the remaining ones; the result generates the
    /// same cone with an inclusion-minimal ray list for this greedy order.
    pub fn reduce(&self) -> Result<PolyCone> {
        let mut rays = self.rays.clone();
        let mut i = 0;
        while i < rays.len() {
            let candidate = rays.remove(i);
            let rest = PolyCone { dim: self.dim, rays: rays.clone() };
            if rest.contains(&candidate)? {
                // drop it; indices shift left so do not advance
            } else {
                rays.insert(i, candidate);
                i += 1;
            }
        }
        Ok(PolyCone { dim: self.dim, rays: canonical_rays(rays) })
    }
}

fn canonical_rays(rays: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = rays
        .into_iter()
        .filter(|r| !is_zero_vec(r))
        .map(|r| normalize_primitive(&r))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Rays of `{x : aᵢ·x ≤ 0 for every row aᵢ}` by double description, pruning
/// redundant generators after every halfspace. Capped at `dim ≤ 4`.
pub fn cone_rays_from_inequalities(dim: usize, rows: &[Vec<Rational>]) -> Result<PolyCone> {
    if dim > DD_DIM_CAP {
        return Err(Error::CapExceeded { cap_name: "double description dim", cap: DD_DIM_CAP, got: dim });
    }
    for r in rows {
        if r.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
        }
    }
    let mut current = PolyCone::full_space(dim);
    for a in rows {
        if is_zero_vec(a) {
            continue;
        }
        let mut keep: Vec<Vec<Rational>> = Vec::new();
        let mut pos: Vec<(Vec<Rational>, Rational)> = Vec::new();
        let mut neg: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for r in current.rays() {
            let s = dot(a, r);
            if s.is_positive() {
                pos.push((r.clone(), s));
            } else {
                if s.is_negative() {
                    neg.push((r.clone(), s.clone()));
                }
                keep.push(r.clone());
            }
        }
        // combine each strictly-positive ray with each strictly-negative one;
        // the combination lands exactly on the hyperplane a·x = 0
        for (p, sp) in &pos {
            for (n, sn) in &neg {
                let combo: Vec<Rational> = p
                    .iter()
                    .zip(n)
                    .map(|(pi, ni)| sp * ni - sn * pi)
                    .collect();
                keep.push(combo);
            }
        }
        current = PolyCone::new(dim, keep)?.reduce()?;
    }
    current.reduce()
}

/// The polar cone `π(K) = {t : ⟨t, k⟩ ≤ 0 for all k ∈ K}`, enumerated by
/// double description (so subject to the same `dim ≤ 4` cap).
pub fn polar(k: &PolyCone) -> Result<PolyCone> {
    cone_rays_from_inequalities(k.dim(), k.rays())
}

/// Membership in the polar cone, valid in any dimension.
pub fn polar_contains(k: &PolyCone, t: &[Rational]) -> Result<bool> {
    if t.len() != k.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: t.len() });
    }
    Ok(k.rays().iter().all(|r| !dot(t, r).is_positive()))
}

/// Intersection of cones via their polar inequality descriptions.
pub fn intersection(cones: &[PolyCone]) -> Result<PolyCone> {
    let Some(first) = cones.first() else {
        return Err(Error::Empty("cone list"));
    };
    let dim = first.dim();
    let mut rows = Vec::new();
    for k in cones {
        if k.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: k.dim() });
        }
        rows.extend(polar(k)?.rays().to_vec());
    }
    cone_rays_from_inequalities(dim, &rows)
}

/// The diagonal `Δ_n(X) = {(x, …, x)}` of `n` copies of ℚ^dim, as a cone
/// (it is a subspace, generated by `±(eᵢ, …, eᵢ)`).
pub fn diagonal_cone(dim: usize, copies: usize) -> PolyCone {
    let mut rays = Vec::new();
    for i in 0..dim {
        let mut v = Vec::with_capacity(dim * copies);
        for _ in 0..copies {
            v.extend(unit(dim, i));
        }
        rays.push(crate::linalg::vec_neg(&v));
        rays.push(v);
    }
    PolyCone { dim: dim * copies, rays: canonical_rays(rays) }
}

/// Sum of cones = cone generated by the union of the generators.
pub fn sum(cones: &[PolyCone]) -> Result<PolyCone> {
    let Some(first) = cones.first() else {
        return Err(Error::Empty("cone list"));
    };
    let dim = first.dim();
    let mut rays = Vec::new();
    for k in cones {
        if k.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: k.dim() });
        }
        rays.extend(k.rays().to_vec());
    }
    PolyCone::new(dim, rays)
}
