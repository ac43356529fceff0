//! Sandwich suite: instances constructed feasible must yield a functional
//! verified against both bounds (exactly, via support-set membership, and
//! pointwise at one hundred random points); instances constructed infeasible
//! must yield a point where the sum of the two functions is strictly
//! negative. The witness type itself rules out "both or neither".

use crate::error::Result;
use crate::linalg::{dot, vec_neg};
use crate::polytope::Polytope;
use crate::scalar::Rational;
use crate::separation::{sandwich, SandwichWitness};

use super::corpus::{self, strictly_negative};
use super::{finish, run_part, InstanceOutcome, SuiteConfig, SuiteReport};

const SUITE_ID: u64 = 4;

pub(super) fn run(config: &SuiteConfig) -> SuiteReport {
    let feasible = run_part(config, SUITE_ID, 0, config.cap(100), feasible_instance);
    let infeasible = run_part(config, SUITE_ID, 1, config.cap(50), infeasible_instance);
    finish("sandwich", vec![feasible, infeasible])
}

fn feasible_instance(rng: &mut corpus::Rng, i: usize, out: &mut InstanceOutcome) -> Result<()> {
    let dim = 1 + i % 2;
    let (p, q, _planted) = corpus::feasible_sandwich(rng, dim);
    let witness = sandwich(&p, &q)?;
    let t = match witness {
        SandwichWitness::Functional(t) => t,
        SandwichWitness::Violation(x) => {
            out.failures.push(format!(
                "instance {i}: constructed-feasible instance reported a violation at {x:?}"
            ));
            return Ok(());
        }
    };
    // exact verification at all extreme directions: ⟨t,·⟩ ≤ p everywhere
    // iff t lies in the support set of p, and −q ≤ ⟨t,·⟩ iff −t lies in the
    // support set of q
    let p_hull = Polytope::new(dim, p.pieces().iter().map(|f| f.slope.clone()).collect())?;
    let q_hull = Polytope::new(dim, q.pieces().iter().map(|f| f.slope.clone()).collect())?;
    out.check(p_hull.contains(&t)?, || {
        format!("instance {i}: functional {t:?} escapes the upper bound")
    });
    out.check(q_hull.contains(&vec_neg(&t))?, || {
        format!("instance {i}: functional {t:?} violates the lower bound")
    });
    // pointwise verification at one hundred random points
    for _ in 0..100 {
        let x = corpus::rand_vec(rng, dim);
        let tx = dot(&t, &x);
        out.check(tx <= p.eval(&x)?, || {
            format!("instance {i}: ⟨t,x⟩ > P(x) at {x:?}")
        });
        out.check(-q.eval(&x)? <= tx, || {
            format!("instance {i}: ⟨t,x⟩ < −Q(x) at {x:?}")
        });
    }
    out.note("feasible_witnesses", 1);
    Ok(())
}

fn infeasible_instance(rng: &mut corpus::Rng, i: usize, out: &mut InstanceOutcome) -> Result<()> {
    let dim = 1 + i % 2;
    let (p, q) = corpus::infeasible_sandwich(rng, dim);
    match sandwich(&p, &q)? {
        SandwichWitness::Functional(t) => out.failures.push(format!(
            "instance {i}: constructed-infeasible instance reported functional {t:?}"
        )),
        SandwichWitness::Violation(x) => {
            let total: Rational = p.eval(&x)? + q.eval(&x)?;
            out.check(strictly_negative(&total), || {
                format!("instance {i}: claimed violation at {x:?} has P+Q = {total}")
            });
            out.note("verified_violations", 1);
        }
    }
    Ok(())
}
