//! Duality roundtrip suite: support sets of support functions must return
//! the original polytope by mutual membership, and envelopes taken within a
//! generator family must themselves be recognized as family-convex, with the
//! envelope idempotent on its own output.

use rand::Rng as _;

use crate::affine::AffineFunctional;
use crate::calculus::support_set;
use crate::error::Result;
use crate::func::Function;
use crate::generation::{h_convex_envelope, is_h_convex, support_function, Envelope, GeneratorSet};
use crate::polytope::Polytope;
use crate::scalar::rat;

use super::corpus;
use super::{finish, run_part, InstanceOutcome, SuiteConfig, SuiteReport};

const SUITE_ID: u64 = 2;

pub(super) fn run(config: &SuiteConfig) -> SuiteReport {
    let roundtrip = run_part(config, SUITE_ID, 0, config.cap(100), roundtrip_instance);
    let envelope = run_part(config, SUITE_ID, 1, config.cap(100), envelope_instance);
    finish("minkowski", vec![roundtrip, envelope])
}

/// One planar polytope with at most six generating points: the support set
/// of its support function must reproduce it exactly.
fn roundtrip_instance(rng: &mut corpus::Rng, i: usize, out: &mut InstanceOutcome) -> Result<()> {
    let count = rng.gen_range(1..=6);
    let vertices: Vec<_> = (0..count).map(|_| corpus::rand_vec(rng, 2)).collect();
    let u = Polytope::new(2, vertices)?.reduced()?;
    let sf = support_function(&u);
    out.check(sf.is_sublinear()?, || {
        format!("instance {i}: support function not sublinear")
    });
    let back = support_set(&sf)?;
    out.check(back.set_eq(&u)?, || {
        format!(
            "instance {i}: roundtrip lost the polytope; got {:?}, want {:?}",
            back.vertices(),
            u.vertices()
        )
    });
    out.note("roundtrip_vertices", u.vertices().len() as u64);
    Ok(())
}

/// One random function and generator family (with a planted minorant so the
/// envelope is realized): the envelope must be family-convex and idempotent.
fn envelope_instance(rng: &mut corpus::Rng, i: usize, out: &mut InstanceOutcome) -> Result<()> {
    let dim = 1 + i % 2;
    let p = corpus::rand_poly(rng, dim, 4);
    let mut members: Vec<AffineFunctional> = (0..rng.gen_range(1..=5))
        .map(|_| AffineFunctional::new(corpus::rand_vec(rng, dim), corpus::rand_small(rng)))
        .collect();
    // plant one guaranteed minorant: any piece of p, dropped by a constant
    let planted = &p.pieces()[rng.gen_range(0..p.pieces().len())];
    members.push(AffineFunctional::new(
        planted.slope.clone(),
        &planted.offset - rat(rng.gen_range(1..=3)),
    ));
    let h = GeneratorSet::new(dim, members)?;

    let env = match h_convex_envelope(&Function::Poly(p), &h)? {
        Envelope::Poly(env) => env,
        other => {
            out.failures.push(format!(
                "instance {i}: envelope degenerate despite planted minorant: {other:?}"
            ));
            return Ok(());
        }
    };
    out.check(is_h_convex(&Function::Poly(env.clone()), &h)?, || {
        format!("instance {i}: envelope not recognized as family-convex")
    });
    match h_convex_envelope(&Function::Poly(env.clone()), &h)? {
        Envelope::Poly(env2) => {
            out.check(env2.func_eq(&env)?, || {
                format!("instance {i}: envelope is not idempotent")
            });
        }
        other => out.failures.push(format!(
            "instance {i}: envelope of an envelope degenerated: {other:?}"
        )),
    }
    out.note("envelope_pieces", env.pieces().len() as u64);
    Ok(())
}
