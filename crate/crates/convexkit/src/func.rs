//! Function representations: finitely-generated piecewise-affine convex
//! functions (pointwise maxima of affine pieces), functions sampled on a
//! finite grid, and piecewise-affine functions with two-level scalar offsets.

use num_traits::Zero;

use crate::affine::AffineFunctional;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::lp::{lp_solve_raw, Outcome, Program, Sense};
use crate::scalar::{ExtScalar, LexScalar, Rational};

/// A convex function given as the pointwise maximum of finitely many affine
/// pieces. Always finite-valued and defined on the whole space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFunc {
    dim: usize,
    pieces: Vec<AffineFunctional>,
}

impl PolyFunc {
    pub fn new(dim: usize, pieces: Vec<AffineFunctional>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Empty("piecewise-affine function needs at least one piece"));
        }
        for p in &pieces {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.dim() });
            }
        }
        Ok(PolyFunc { dim, pieces })
    }

    /// The function `x ↦ max_i ⟨slopes[i], x⟩` (all offsets zero).
    pub fn sublinear(dim: usize, slopes: Vec<Vec<Rational>>) -> Result<Self> {
        let pieces = slopes.into_iter().map(AffineFunctional::linear).collect();
        PolyFunc::new(dim, pieces)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[AffineFunctional] {
        &self.pieces
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(self
            .pieces
            .iter()
            .map(|p| p.eval(x).expect("piece dims checked at construction"))
            .max()
            .expect("pieces nonempty"))
    }

    /// Indices of pieces attaining the maximum at `x`.
    pub fn active_pieces(&self, x: &[Rational]) -> Result<Vec<usize>> {
        let v = self.eval(x)?;
        Ok(self
            .pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.eval(x).unwrap() == v)
            .map(|(i, _)| i)
            .collect())
    }

    /// Infimum of `self(x) − (a·x + b)` over all `x`, as an extended scalar
    /// (`Bottom` when the gap is unbounded below).
    pub fn affine_gap_inf(&self, a: &[Rational], b: &Rational) -> Result<ExtScalar> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: a.len() });
        }
        // variables (x, t): minimize t − a·x subject to t ≥ piece_i(x)
        let n = self.dim;
        let mut prog = Program::new(n + 1);
        for p in &self.pieces {
            // slope·x + offset − t ≤ 0
            let mut row: Vec<Rational> = p.slope.clone();
            row.push(-Rational::from_integer(1.into()));
            prog.le(row, -p.offset.clone());
        }
        let mut obj: Vec<Rational> = a.iter().map(|c| -c).collect();
        obj.push(Rational::from_integer(1.into()));
        match lp_solve_raw(Sense::Min, &obj, &prog)? {
            Outcome::Optimal { value, .. } => Ok(ExtScalar::Finite(value - b)),
            Outcome::Unbounded { .. } => Ok(ExtScalar::Bottom),
            Outcome::Infeasible { .. } => unreachable!("epigraph of a finite max is nonempty"),
        }
    }

    /// Does `a·x + b ≤ self(x)` hold everywhere?
    pub fn dominates_affine(&self, a: &[Rational], b: &Rational) -> Result<bool> {
        Ok(self.affine_gap_inf(a, b)? >= ExtScalar::Finite(Rational::zero()))
    }

    /// Exact pointwise equality with another max-of-affine function.
    pub fn func_eq(&self, other: &PolyFunc) -> Result<bool> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        for p in &other.pieces {
            if !self.dominates_affine(&p.slope, &p.offset)? {
                return Ok(false);
            }
        }
        for p in &self.pieces {
            if !other.dominates_affine(&p.slope, &p.offset)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sublinearity test: the function must coincide with the maximum of the
    /// linear parts of its pieces (equivalently, its epigraph is a cone).
    pub fn is_sublinear(&self) -> Result<bool> {
        let linear = PolyFunc::new(
            self.dim,
            self.pieces
                .iter()
                .map(|p| AffineFunctional::linear(p.slope.clone()))
                .collect(),
        )?;
        self.func_eq(&linear)
    }

    /// Pointwise sum (pieces combine pairwise).
    pub fn add(&self, other: &PolyFunc) -> Result<PolyFunc> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut pieces = Vec::new();
        for p in &self.pieces {
            for q in &other.pieces {
                let slope: Vec<Rational> =
                    p.slope.iter().zip(&q.slope).map(|(a, b)| a + b).collect();
                pieces.push(AffineFunctional::new(slope, &p.offset + &q.offset));
            }
        }
        PolyFunc::new(self.dim, pieces)
    }

    /// Drop pieces that never attain the maximum (strictly dominated by the
    /// rest), keeping the representation canonical: pieces sorted and unique.
    pub fn reduced(&self) -> Result<PolyFunc> {
        let mut pieces = self.pieces.clone();
        pieces.sort_by(|p, q| (&p.slope, &p.offset).cmp(&(&q.slope, &q.offset)));
        pieces.dedup();
        let mut i = 0;
        while i < pieces.len() && pieces.len() > 1 {
            let rest = PolyFunc::new(
                self.dim,
                pieces
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, p)| p.clone())
                    .collect(),
            )?;
            if rest.dominates_affine(&pieces[i].slope, &pieces[i].offset)? {
                pieces.remove(i);
            } else {
                i += 1;
            }
        }
        PolyFunc::new(self.dim, pieces)
    }
}

/// A function known only through its values on finitely many grid points.
/// Values are extended scalars; `Top` marks points outside the effective
/// domain, and `Bottom` values are rejected at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampledFunc {
    dim: usize,
    grid: Vec<Vec<Rational>>,
    values: Vec<ExtScalar>,
}

impl SampledFunc {
    pub fn new(dim: usize, samples: Vec<(Vec<Rational>, ExtScalar)>) -> Result<Self> {
        let mut grid = Vec::with_capacity(samples.len());
        let mut values = Vec::with_capacity(samples.len());
        for (x, v) in samples {
            if x.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: x.len() });
            }
            if v == ExtScalar::Bottom {
                return Err(Error::BottomValue("sampled values must not be the bottom element"));
            }
            if let Some(i) = grid.iter().position(|g| *g == x) {
                return Err(Error::DuplicateGridPoint(i));
            }
            grid.push(x);
            values.push(v);
        }
        Ok(SampledFunc { dim, grid, values })
    }

    pub fn from_finite(dim: usize, samples: Vec<(Vec<Rational>, Rational)>) -> Result<Self> {
        SampledFunc::new(
            dim,
            samples
                .into_iter()
                .map(|(x, v)| (x, ExtScalar::Finite(v)))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Grid points in insertion order, paired with their values.
    pub fn samples(&self) -> impl Iterator<Item = (&Vec<Rational>, &ExtScalar)> {
        self.grid.iter().zip(self.values.iter())
    }

    /// Grid points where the value is finite, with those values.
    pub fn domain(&self) -> Vec<(&Vec<Rational>, &Rational)> {
        self.samples()
            .filter_map(|(x, v)| match v {
                ExtScalar::Finite(r) => Some((x, r)),
                _ => None,
            })
            .collect()
    }

    /// Value at a grid point; `None` when `x` is not on the grid.
    pub fn value_at(&self, x: &[Rational]) -> Option<&ExtScalar> {
        self.grid
            .iter()
            .position(|g| g.as_slice() == x)
            .map(|i| &self.values[i])
    }
}

/// Dispatch type for operations accepting either representation.
#[derive(Debug, Clone)]
pub enum Function {
    Poly(PolyFunc),
    Sampled(SampledFunc),
}

impl Function {
    pub fn dim(&self) -> usize {
        match self {
            Function::Poly(p) => p.dim(),
            Function::Sampled(s) => s.dim(),
        }
    }
}

/// One affine piece with a rational slope and a two-level scalar offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexPiece {
    pub slope: Vec<Rational>,
    pub offset: LexScalar,
}

/// A pointwise maximum of affine pieces whose offsets carry a standard and
/// an infinitesimal level. Slopes stay rational, so the standard part is an
/// ordinary piecewise-affine function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexPolyFunc {
    dim: usize,
    pieces: Vec<LexPiece>,
}

impl LexPolyFunc {
    pub fn new(dim: usize, pieces: Vec<LexPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Empty("piecewise-affine function needs at least one piece"));
        }
        for p in &pieces {
            if p.slope.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.slope.len() });
            }
        }
        Ok(LexPolyFunc { dim, pieces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[LexPiece] {
        &self.pieces
    }

    pub fn eval(&self, x: &[Rational]) -> Result<LexScalar> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        Ok(self
            .pieces
            .iter()
            .map(|p| {
                let mut v = p.offset.clone();
                v.std += dot(&p.slope, x);
                v
            })
            .max()
            .expect("pieces nonempty"))
    }

    /// The ordinary piecewise-affine function obtained by discarding the
    /// infinitesimal offset level.
    pub fn std_part(&self) -> PolyFunc {
        PolyFunc::new(
            self.dim,
            self.pieces
                .iter()
                .map(|p| AffineFunctional::new(p.slope.clone(), p.offset.std.clone()))
                .collect(),
        )
        .expect("same piece count")
    }
}
