//! Cross-check the simplex kernel against a brute-force vertex-enumeration
//! oracle on random small programs, and property-test the certificate
//! contracts on unconstrained random programs.

use convexkit::linalg::{dot, span};
use convexkit::lp::{
    lp_solve, verify_infeasibility_certificate, verify_unbounded_direction, Outcome, Program,
    Relation, Sense,
};
use convexkit::scalar::{rat, Rational};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_rat(rng: &mut ChaCha8Rng) -> Rational {
    let p = rng.gen_range(-5i64..=5);
    let q = *[1i64, 2, 3].get(rng.gen_range(0..3)).unwrap();
    Rational::new(p.into(), q.into())
}

/// All basic solutions of `prog`: solve every square subsystem of rank
/// `num_vars`, keep the feasible ones. With a bounding box appended this
/// enumerates every vertex of the feasible region.
fn enumerate_vertices(prog: &Program) -> Vec<Vec<Rational>> {
    let n = prog.num_vars;
    let rows: Vec<(Vec<Rational>, Rational)> = prog
        .constraints
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone()))
        .collect();
    let mut verts = Vec::new();
    let m = rows.len();
    // iterate over all n-subsets of row indices
    fn subsets(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            subsets(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    subsets(m, n, 0, &mut Vec::new(), &mut all);
    for subset in all {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| rows[i].1.clone()).collect();
        if span(n, &a).rank() != n {
            continue;
        }
        if let Some(x) = convexkit::linalg::solve_linear_system(&a, &b) {
            if prog.satisfied(&x) && !verts.contains(&x) {
                verts.push(x);
            }
        }
    }
    verts
}

#[test]
fn simplex_matches_vertex_enumeration_oracle_on_200_random_lps() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut optimal = 0usize;
    let mut infeasible = 0usize;
    for case in 0..200 {
        let nv = rng.gen_range(1..=3usize);
        let nc = rng.gen_range(1..=8usize);
        let mut prog = Program::new(nv);
        for _ in 0..nc {
            let coeffs: Vec<Rational> = (0..nv).map(|_| small_rat(&mut rng)).collect();
            let rhs = small_rat(&mut rng);
            match rng.gen_range(0..3) {
                0 => prog.le(coeffs, rhs),
                1 => prog.ge(coeffs, rhs),
                _ => prog.eq(coeffs, rhs),
            }
        }
        // bounding box keeps the oracle complete (a nonempty bounded region
        // always has a vertex; optima are attained at vertices)
        for j in 0..nv {
            let mut e = vec![Rational::zero(); nv];
            e[j] = rat(1);
            prog.le(e.clone(), rat(10));
            prog.ge(e, rat(-10));
        }
        let objective: Vec<Rational> = (0..nv).map(|_| small_rat(&mut rng)).collect();
        let sense = if rng.gen_bool(0.5) { Sense::Min } else { Sense::Max };

        let verts = enumerate_vertices(&prog);
        let outcome = lp_solve(sense, &objective, &prog).unwrap();
        match outcome {
            Outcome::Optimal { point, value } => {
                optimal += 1;
                assert!(!verts.is_empty(), "case {case}: oracle found no vertex");
                assert!(prog.satisfied(&point), "case {case}: point infeasible");
                assert_eq!(dot(&objective, &point), value, "case {case}: value mismatch");
                let oracle_best = verts
                    .iter()
                    .map(|v| dot(&objective, v))
                    .reduce(|a, b| match sense {
                        Sense::Min => a.min(b),
                        Sense::Max => a.max(b),
                    })
                    .unwrap();
                assert_eq!(value, oracle_best, "case {case}: objective differs from oracle");
                // the returned point must be the lexicographically smallest
                // optimal vertex
                let lexmin = verts
                    .iter()
                    .filter(|v| dot(&objective, v) == oracle_best)
                    .min()
                    .unwrap();
                assert_eq!(&point, lexmin, "case {case}: not the lexmin optimal vertex");
            }
            Outcome::Infeasible { certificate } => {
                infeasible += 1;
                assert!(verts.is_empty(), "case {case}: oracle found a vertex");
                assert!(
                    verify_infeasibility_certificate(&prog, &certificate),
                    "case {case}: invalid certificate"
                );
            }
            Outcome::Unbounded { .. } => panic!("case {case}: boxed program cannot be unbounded"),
        }
    }
    // the corpus must exercise both classes
    assert!(optimal >= 40, "only {optimal} optimal instances");
    assert!(infeasible >= 40, "only {infeasible} infeasible instances");
}

#[test]
fn relation_sides_respected_by_certificates() {
    // a tiny deterministic sweep over relation combinations
    for rel_a in [Relation::Le, Relation::Ge, Relation::Eq] {
        for rel_b in [Relation::Le, Relation::Ge, Relation::Eq] {
            let mut p = Program::new(1);
            p.constraints.push(convexkit::lp::Constraint {
                coeffs: vec![rat(1)],
                rel: rel_a,
                rhs: rat(2),
            });
            p.constraints.push(convexkit::lp::Constraint {
                coeffs: vec![rat(1)],
                rel: rel_b,
                rhs: rat(-3),
            });
            if let Outcome::Infeasible { certificate } =
                lp_solve(Sense::Min, &[rat(0)], &p).unwrap()
            {
                assert!(verify_infeasibility_certificate(&p, &certificate));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Whatever the outcome, its certificate must verify, and resolving
    /// twice must produce identical answers (fixed pivot rule).
    #[test]
    fn outcomes_are_certified_and_deterministic(
        nv in 1usize..=3,
        rows in proptest::collection::vec(
            (proptest::collection::vec(-4i64..=4, 3), 0usize..3, -4i64..=4), 1..6),
        obj in proptest::collection::vec(-4i64..=4, 3),
        maximize in any::<bool>(),
    ) {
        let mut prog = Program::new(nv);
        for (coeffs, rel, rhs) in &rows {
            let c: Vec<Rational> = coeffs[..nv].iter().map(|&v| rat(v)).collect();
            match rel {
                0 => prog.le(c, rat(*rhs)),
                1 => prog.ge(c, rat(*rhs)),
                _ => prog.eq(c, rat(*rhs)),
            }
        }
        let objective: Vec<Rational> = obj[..nv].iter().map(|&v| rat(v)).collect();
        let sense = if maximize { Sense::Max } else { Sense::Min };
        let a = lp_solve(sense, &objective, &prog).unwrap();
        let b = lp_solve(sense, &objective, &prog).unwrap();
        match (&a, &b) {
            (Outcome::Optimal { point: pa, value: va }, Outcome::Optimal { point: pb, value: vb }) => {
                prop_assert_eq!(pa, pb);
                prop_assert_eq!(va, vb);
                prop_assert!(prog.satisfied(pa));
                prop_assert_eq!(&dot(&objective, pa), va);
            }
            (Outcome::Infeasible { certificate: ca }, Outcome::Infeasible { certificate: cb }) => {
                prop_assert_eq!(ca, cb);
                prop_assert!(verify_infeasibility_certificate(&prog, ca));
            }
            (Outcome::Unbounded { direction: da, .. }, Outcome::Unbounded { direction: db, .. }) => {
                prop_assert_eq!(da, db);
                prop_assert!(verify_unbounded_direction(&prog, sense, &objective, da));
            }
            _ => prop_assert!(false, "outcomes differ between runs"),
        }
    }
}
