//! Exact linear programming over arbitrary-precision rationals.
//!
//! A dense two-phase simplex with Bland's smallest-index pivot rule and
//! smallest-index tie-breaking on the leaving variable. Every outcome is
//! certified:
//!
//! * `Optimal` carries the lexicographically smallest optimal point (refined
//!   coordinate by coordinate over the optimal face) and the exact value.
//! * `Infeasible` carries row multipliers `z` with `z_i ≤ 0` on `≤` rows,
//!   `z_i ≥ 0` on `≥` rows, free on `=` rows, such that `Σ z_i a_i` vanishes
//!   on free variables, is `≤ 0` on nonnegative variables, and
//!   `Σ z_i rhs_i > 0` — an explicit contradiction.
//! * `Unbounded` carries a recession direction that strictly improves the
//!   objective, plus the feasible point where it was detected.
//!
//! The pivot rule is fixed, so identical inputs always produce identical
//! outputs, certificates included.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, is_zero_vec, solve_linear_system, zeros};
use crate::scalar::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rel: Relation,
    pub rhs: Rational,
}

/// A linear program over `num_vars` variables. Variables are free unless
/// flagged nonnegative; constraints are arbitrary `≤ / ≥ / =` rows.
#[derive(Debug, Clone)]
pub struct Program {
    pub num_vars: usize,
    pub nonneg: Vec<bool>,
    pub constraints: Vec<Constraint>,
}

impl Program {
    /// All variables free.
    pub fn new(num_vars: usize) -> Self {
        Program { num_vars, nonneg: vec![false; num_vars], constraints: Vec::new() }
    }

    /// All variables constrained to be nonnegative.
    pub fn nonnegative(num_vars: usize) -> Self {
        Program { num_vars, nonneg: vec![true; num_vars], constraints: Vec::new() }
    }

    fn push(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "constraint arity");
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn le(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs, Relation::Le, rhs);
    }

    pub fn ge(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs, Relation::Ge, rhs);
    }

    pub fn eq(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        self.push(coeffs, Relation::Eq, rhs);
    }

    pub fn satisfied(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        if self.nonneg.iter().zip(x).any(|(&nn, v)| nn && v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, x);
            match c.rel {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Optimal { point: Vec<Rational>, value: Rational },
    Infeasible { certificate: Vec<Rational> },
    Unbounded { direction: Vec<Rational>, witness: Vec<Rational> },
}

impl Outcome {
    pub fn optimal(&self) -> Option<(&[Rational], &Rational)> {
        match self {
            Outcome::Optimal { point, value } => Some((point, value)),
            _ => None,
        }
    }
}

/// Check the documented infeasibility-certificate contract.
pub fn verify_infeasibility_certificate(prog: &Program, z: &[Rational]) -> bool {
    if z.len() != prog.constraints.len() {
        return false;
    }
    for (zi, c) in z.iter().zip(&prog.constraints) {
        let ok = match c.rel {
            Relation::Le => !zi.is_positive(),
            Relation::Ge => !zi.is_negative(),
            Relation::Eq => true,
        };
        if !ok {
            return false;
        }
    }
    let mut combo = zeros(prog.num_vars);
    let mut bound = Rational::zero();
    for (zi, c) in z.iter().zip(&prog.constraints) {
        for (g, a) in combo.iter_mut().zip(&c.coeffs) {
            *g += zi * a;
        }
        bound += zi * &c.rhs;
    }
    if !bound.is_positive() {
        return false;
    }
    combo
        .iter()
        .zip(&prog.nonneg)
        .all(|(g, &nn)| if nn { !g.is_positive() } else { g.is_zero() })
}

/// Check that `dir` is a feasible recession direction that strictly improves
/// `objective` in the given sense.
pub fn verify_unbounded_direction(
    prog: &Program,
    sense: Sense,
    objective: &[Rational],
    dir: &[Rational],
) -> bool {
    if dir.len() != prog.num_vars || is_zero_vec(dir) {
        return false;
    }
    if prog.nonneg.iter().zip(dir).any(|(&nn, d)| nn && d.is_negative()) {
        return false;
    }
    let recession = prog.constraints.iter().all(|c| {
        let v = dot(&c.coeffs, dir);
        match c.rel {
            Relation::Le => !v.is_positive(),
            Relation::Ge => !v.is_negative(),
            Relation::Eq => v.is_zero(),
        }
    });
    if !recession {
        return false;
    }
    let along = dot(objective, dir);
    match sense {
        Sense::Min => along.is_negative(),
        Sense::Max => along.is_positive(),
    }
}

// ---------------------------------------------------------------------------
// standardized simplex machinery
// ---------------------------------------------------------------------------

struct Standardized {
    /// column index of x_j⁺ (or the single column when nonnegative)
    pos: Vec<usize>,
    /// column index of x_j⁻ (usize::MAX when variable is nonnegative)
    neg: Vec<usize>,
    /// per original row: +1 or -1 applied during standardization
    row_sign: Vec<Rational>,
    /// per row: slack column usable as the initial basic variable (its
    /// coefficient came out +1 after standardization)
    basic_slack: Vec<Option<usize>>,
    /// equality system A x̃ = b, x̃ ≥ 0, b ≥ 0 (structural+slack columns)
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    num_cols: usize,
}

fn standardize(prog: &Program) -> Standardized {
    let mut pos = Vec::with_capacity(prog.num_vars);
    let mut neg = Vec::with_capacity(prog.num_vars);
    let mut num_cols = 0usize;
    for &nn in &prog.nonneg {
        pos.push(num_cols);
        num_cols += 1;
        if nn {
            neg.push(usize::MAX);
        } else {
            neg.push(num_cols);
            num_cols += 1;
        }
    }
    let m = prog.constraints.len();
    // one slack column per inequality row
    let slack_cols: Vec<Option<usize>> = prog
        .constraints
        .iter()
        .map(|c| {
            if c.rel == Relation::Eq {
                None
            } else {
                num_cols += 1;
                Some(num_cols - 1)
            }
        })
        .collect();
    let mut a = vec![zeros(num_cols); m];
    let mut b = zeros(m);
    let mut row_sign = Vec::with_capacity(m);
    let mut basic_slack = Vec::with_capacity(m);
    for (i, c) in prog.constraints.iter().enumerate() {
        let flip = c.rhs.is_negative();
        let sign = if flip { -Rational::one() } else { Rational::one() };
        for (j, coef) in c.coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let v = &sign * coef;
            a[i][pos[j]] = v.clone();
            if neg[j] != usize::MAX {
                a[i][neg[j]] = -v;
            }
        }
        b[i] = &sign * &c.rhs;
        let mut basic = None;
        if let Some(sc) = slack_cols[i] {
            // Le turns into +slack, Ge into -slack, modulated by the flip
            let s = match c.rel {
                Relation::Le => Rational::one(),
                Relation::Ge => -Rational::one(),
                Relation::Eq => unreachable!(),
            };
            let v = &sign * &s;
            if v.is_one() {
                basic = Some(sc);
            }
            a[i][sc] = v;
        }
        basic_slack.push(basic);
        row_sign.push(sign);
    }
    Standardized { pos, neg, row_sign, basic_slack, a, b, num_cols }
}

struct Tableau {
    /// current tableau rows: B⁻¹ [A | artificials], one Vec per row
    rows: Vec<Vec<Rational>>,
    /// current right-hand side B⁻¹ b (always ≥ 0)
    rhs: Vec<Rational>,
    /// basis\[i\] = column index basic in row i
    basis: Vec<usize>,
    /// total columns including artificials
    cols: usize,
    /// first artificial column index
    art_start: usize,
}

enum Step {
    Optimal,
    Unbounded { entering: usize },
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v /= &p;
        }
        self.rhs[row] /= &p;
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for j in 0..self.cols {
                if !self.rows[row][j].is_zero() {
                    let t = &f * &self.rows[row][j];
                    self.rows[i][j] -= t;
                }
            }
            let t = &f * &self.rhs[row];
            self.rhs[i] -= t;
        }
        self.basis[row] = col;
    }

    /// Run simplex with Bland's rule for costs `cost` over allowed columns.
    /// `allow` masks columns permitted to enter the basis.
    fn run(&mut self, cost: &[Rational], allow: &dyn Fn(usize) -> bool) -> Step {
        loop {
            // reduced cost of column j: c_j - c_B · T_j (computed on demand)
            let cb: Vec<Rational> = self.basis.iter().map(|&j| cost[j].clone()).collect();
            let mut entering = None;
            for j in 0..self.cols {
                if !allow(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (i, c) in cb.iter().enumerate() {
                    if !c.is_zero() && !self.rows[i][j].is_zero() {
                        rc -= c * &self.rows[i][j];
                    }
                }
                if rc.is_negative() {
                    entering = Some(j);
                    break; // Bland: first (smallest) eligible index
                }
            }
            let Some(col) = entering else {
                return Step::Optimal;
            };
            // ratio test; ties broken by smallest basic variable index
            let mut best: Option<(Rational, usize, usize)> = None; // (ratio, basis var, row)
            for i in 0..self.rows.len() {
                if self.rows[i][col].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][col];
                    let key = (ratio, self.basis[i], i);
                    best = match best {
                        None => Some(key),
                        Some(cur) => {
                            if (key.0.clone(), key.1) < (cur.0.clone(), cur.1) {
                                Some(key)
                            } else {
                                Some(cur)
                            }
                        }
                    };
                }
            }
            match best {
                Some((_, _, row)) => self.pivot(row, col),
                None => return Step::Unbounded { entering: col },
            }
        }
    }

    fn point(&self, std: &Standardized, num_vars: usize) -> Vec<Rational> {
        let mut xt = zeros(self.art_start);
        for (i, &j) in self.basis.iter().enumerate() {
            if j < self.art_start {
                xt[j] = self.rhs[i].clone();
            }
        }
        (0..num_vars)
            .map(|v| {
                let p = xt[std.pos[v]].clone();
                if std.neg[v] == usize::MAX {
                    p
                } else {
                    p - &xt[std.neg[v]]
                }
            })
            .collect()
    }
}

/// Solve without lexicographic refinement (fixed pivot rule only). The
/// optimal point is the basic solution at termination.
pub fn lp_solve_raw(sense: Sense, objective: &[Rational], prog: &Program) -> Result<Outcome> {
    if objective.len() != prog.num_vars {
        return Err(Error::DimensionMismatch { expected: prog.num_vars, got: objective.len() });
    }
    let std = standardize(prog);
    let m = std.a.len();
    let cols = std.num_cols + m; // one artificial per row (unused ones never enter)
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        rhs: std.b.clone(),
        basis: Vec::with_capacity(m),
        cols,
        art_start: std.num_cols,
    };
    // initial basis: slack column when it carries +1, otherwise artificial
    let mut phase1_cost = zeros(cols);
    for i in 0..m {
        let mut row = std.a[i].clone();
        row.extend(zeros(m));
        match std.basic_slack[i] {
            Some(j) => t.basis.push(j),
            None => {
                row[std.num_cols + i] = Rational::one();
                phase1_cost[std.num_cols + i] = Rational::one();
                t.basis.push(std.num_cols + i);
            }
        }
        t.rows.push(row);
    }
    match t.run(&phase1_cost, &|_| true) {
        Step::Unbounded { .. } => unreachable!("phase 1 objective is bounded below by zero"),
        Step::Optimal => {}
    }
    let w: Rational = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&j, _)| j >= std.num_cols)
        .map(|(_, v)| v.clone())
        .sum();
    if w.is_positive() {
        // Farkas certificate from the phase-1 dual: solve Bᵀ y = c_B over the
        // original standardized rows.
        let bt: Vec<Vec<Rational>> = (0..m)
            .map(|i| {
                t.basis
                    .iter()
                    .map(|&j| {
                        if j < std.num_cols {
                            std.a[i][j].clone()
                        } else if j - std.num_cols == i {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        // transpose: solve Bᵀ y = c_B  =>  rows indexed by basis position
        let bt_t: Vec<Vec<Rational>> = (0..m)
            .map(|k| (0..m).map(|i| bt[i][k].clone()).collect())
            .collect();
        let cb: Vec<Rational> = t.basis.iter().map(|&j| phase1_cost[j].clone()).collect();
        let y = solve_linear_system(&bt_t, &cb).expect("phase-1 basis is nonsingular");
        let z: Vec<Rational> = y.iter().zip(&std.row_sign).map(|(yi, s)| yi * s).collect();
        debug_assert!(verify_infeasibility_certificate(prog, &z));
        return Ok(Outcome::Infeasible { certificate: z });
    }
    // drive artificials out of the basis; drop dependent rows
    let mut drop_rows = Vec::new();
    for i in 0..t.rows.len() {
        if t.basis[i] >= std.num_cols {
            debug_assert!(t.rhs[i].is_zero());
            match (0..std.num_cols).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => drop_rows.push(i),
            }
        }
    }
    for &i in drop_rows.iter().rev() {
        t.rows.remove(i);
        t.rhs.remove(i);
        t.basis.remove(i);
    }

    let mut cost = zeros(cols);
    for (j, c) in objective.iter().enumerate() {
        let c = match sense {
            Sense::Min => c.clone(),
            Sense::Max => -c,
        };
        cost[std.pos[j]] = c.clone();
        if std.neg[j] != usize::MAX {
            cost[std.neg[j]] = -c;
        }
    }
    let art_start = std.num_cols;
    match t.run(&cost, &|j| j < art_start) {
        Step::Optimal => {
            let point = t.point(&std, prog.num_vars);
            let value = dot(objective, &point);
            Ok(Outcome::Optimal { point, value })
        }
        Step::Unbounded { entering } => {
            let witness = t.point(&std, prog.num_vars);
            let mut dt = zeros(std.num_cols);
            dt[entering] = Rational::one();
            for (i, &j) in t.basis.iter().enumerate() {
                if j < std.num_cols {
                    dt[j] = -t.rows[i][entering].clone();
                }
            }
            let direction: Vec<Rational> = (0..prog.num_vars)
                .map(|v| {
                    let p = dt[std.pos[v]].clone();
                    if std.neg[v] == usize::MAX {
                        p
                    } else {
                        p - &dt[std.neg[v]]
                    }
                })
                .collect();
            debug_assert!(verify_unbounded_direction(prog, sense, objective, &direction));
            Ok(Outcome::Unbounded { direction, witness })
        }
    }
}

/// Solve and refine the optimal point to the lexicographically smallest
/// point of the optimal face, coordinate by coordinate.
///
/// When some coordinate is unbounded below on the face (no lexicographic
/// minimum exists), that coordinate is pinned at the deterministic simplex
/// witness, keeping the output reproducible.
pub fn lp_solve(sense: Sense, objective: &[Rational], prog: &Program) -> Result<Outcome> {
    let base = lp_solve_raw(sense, objective, prog)?;
    let Outcome::Optimal { value, .. } = &base else {
        return Ok(base);
    };
    let value = value.clone();
    let mut narrowed = prog.clone();
    narrowed.eq(objective.to_vec(), value.clone());
    let mut point = zeros(prog.num_vars);
    for j in 0..prog.num_vars {
        let mut e = zeros(prog.num_vars);
        e[j] = Rational::one();
        let vj = match lp_solve_raw(Sense::Min, &e, &narrowed)? {
            Outcome::Optimal { value, .. } => value,
            Outcome::Unbounded { witness, .. } => witness[j].clone(),
            Outcome::Infeasible { .. } => {
                unreachable!("optimal face is nonempty by construction")
            }
        };
        narrowed.eq(e, vj.clone());
        point[j] = vj;
    }
    debug_assert!(prog.satisfied(&point));
    debug_assert_eq!(dot(objective, &point), value);
    Ok(Outcome::Optimal { point, value })
}

/// Feasibility check: a deterministic feasible point, or `None` together
/// with nothing when infeasible. Use [`lp_solve_raw`] with a zero objective
/// when the Farkas certificate is needed.
pub fn lp_feasible_point(prog: &Program) -> Result<Option<Vec<Rational>>> {
    let obj = zeros(prog.num_vars);
    Ok(match lp_solve_raw(Sense::Min, &obj, prog)? {
        Outcome::Optimal { point, .. } => Some(point),
        Outcome::Infeasible { .. } => None,
        Outcome::Unbounded { .. } => unreachable!("zero objective cannot be unbounded"),
    })
}
