//! Approximation suite: the ε-subdifferential chain over halving ε must be
//! constant and equal to the exact subdifferential on instances pinned
//! through a common point (and must nest monotonically after unpinning);
//! the infinitesimal subdifferential must equal the standard-part
//! subdifferential as an exact polytope with agreeing membership routes; and
//! the convolution chain rule must hold with the general-position hypothesis
//! recorded true on exactness-constructed 1D instances.

use rand::Rng as _;

use crate::affine::AffineFunctional;
use crate::approximation::{
    chain_rule_check, convolution_exactness_1d, eps_subdifferential,
    infinitesimal_contains, infinitesimal_subdifferential, Exactness,
};
use crate::error::Result;
use crate::func::{LexPiece, LexPolyFunc, PolyFunc};
use crate::linalg::dot;
use crate::scalar::{rat, ratio, LexScalar, Rational};

use super::corpus::{self, active_slope_hull, outside_probe, section_min, section_pieces};
use super::{finish, run_part, InstanceOutcome, SuiteConfig, SuiteReport};

const SUITE_ID: u64 = 6;

pub(super) fn run(config: &SuiteConfig) -> SuiteReport {
    let chain = run_part(config, SUITE_ID, 0, config.cap(100), eps_chain_instance);
    let infinitesimal =
        run_part(config, SUITE_ID, 1, config.cap(50), infinitesimal_instance);
    let chain_rule = run_part(config, SUITE_ID, 2, config.cap(30), chain_rule_instance);
    finish("approximation", vec![chain, infinitesimal, chain_rule])
}

fn eps_chain_instance(rng: &mut corpus::Rng, i: usize, out: &mut InstanceOutcome) -> Result<()> {
    let dim = 1 + i % 2;
    let base = corpus::rand_vec(rng, dim);
    let value = corpus::rand_small(rng);

    // pin every piece through (base, value): the ε-chain is then constant
    // and equals the exact subdifferential at the base
    let count = rng.gen_range(2..=4);
    let mut pieces: Vec<AffineFunctional> = (0..count)
        .map(|_| {
            let slope = corpus::rand_vec(rng, dim);
            let offset = &value - dot(&slope, &base);
            AffineFunctional::new(slope, offset)
        })
        .collect();
    if rng.gen_bool(0.5) {
        pieces.push(corpus::dominated_average(&pieces[0], &pieces[1]));
    }
    let f = PolyFunc::new(dim, pieces)?;

    let exact = eps_subdifferential(&f, &base, &Rational::from_integer(0.into()))?;
    let exact_desc = exact.description().expect("within the enumeration cap");
    out.check(exact_desc.set_eq(&active_slope_hull(&f, &base)?)?, || {
        format!("instance {i}: exact subdifferential differs from the active-slope hull")
    });
    let mut eps = rat(1);
    for k in 0..=10 {
        let step = eps_subdifferential(&f, &base, &eps)?;
        out.check(step.description().unwrap().set_eq(exact_desc)?, || {
            format!("instance {i}: pinned chain drifted at ε = 2^-{k}")
        });
        eps = eps / rat(2);
    }
    out.note("stabilized_chains", 1);

    // unpin by lifting offsets: the sets must still nest monotonically and
    // every membership route must agree
    let lifted = PolyFunc::new(
        dim,
        f.pieces()
            .iter()
            .map(|p| {
                AffineFunctional::new(
                    p.slope.clone(),
                    &p.offset - rat(rng.gen_range(0..=3)),
                )
            })
            .collect(),
    )?;
    let eps1 = ratio(rng.gen_range(0..=4), 4);
    let eps2 = &eps1 + ratio(rng.gen_range(1..=6), 3);
    let zero = eps_subdifferential(&lifted, &base, &Rational::from_integer(0.into()))?;
    let small = eps_subdifferential(&lifted, &base, &eps1)?;
    let large = eps_subdifferential(&lifted, &base, &eps2)?;
    let d0 = zero.description().unwrap();
    let d1 = small.description().unwrap();
    let d2 = large.description().unwrap();
    out.check(d1.contains_polytope(d0)?, || {
        format!("instance {i}: exact subdifferential escapes ∂^ε after unpinning")
    });
    out.check(d2.contains_polytope(d1)?, || {
        format!("instance {i}: ε-subdifferentials fail to nest after unpinning")
    });
    let mut probes: Vec<Vec<Rational>> = d2.vertices().to_vec();
    probes.push(corpus::rand_vec(rng, dim));
    probes.push(outside_probe(d2));
    for y in &probes {
        for sub in [&zero, &small, &large] {
            let conjugate_route = sub.contains(y)?;
            out.check(conjugate_route == sub.contains_by_inequality(y)?, || {
                format!("instance {i}: membership routes disagree at {y:?}")
            });
            out.check(conjugate_route == sub.description().unwrap().contains(y)?, || {
                format!("instance {i}: description disagrees with membership at {y:?}")
            });
        }
    }
    Ok(())
}

fn infinitesimal_instance(
    rng: &mut corpus::Rng,
    i: usize,
    out: &mut InstanceOutcome,
) -> Result<()> {
    let dim = 1 + i % 2;
    let f = corpus::rand_lex_poly(rng, dim);
    let base = corpus::rand_vec(rng, dim);

    let sub = infinitesimal_subdifferential(&f, &base)?;
    let oracle = active_slope_hull(&f.std_part(), &base)?;
    out.check(sub.set_eq(&oracle)?, || {
        format!(
            "instance {i}: infinitesimal subdifferential {:?} differs from the \
             standard-part subdifferential {:?}",
            sub.vertices(),
            oracle.vertices()
        )
    });

    let mut probes: Vec<Vec<Rational>> = sub.vertices().to_vec();
    probes.push(corpus::rand_vec(rng, dim));
    probes.push(outside_probe(&sub));
    for y in &probes {
        out.check(infinitesimal_contains(&f, &base, y)? == sub.contains(y)?, || {
            format!("instance {i}: direct membership route disagrees at {y:?}")
        });
    }
    out.note("infinitesimal_instances", 1);
    Ok(())
}

fn chain_rule_instance(rng: &mut corpus::Rng, i: usize, out: &mut InstanceOutcome) -> Result<()> {
    // coercive factors; odd instances carry infinitesimally lifted offsets
    let lifted = i % 2 == 1;
    let lex_factor = |rng: &mut corpus::Rng, middle: usize| -> LexPolyFunc {
        let std = corpus::rand_factor(rng, middle);
        let pieces = std
            .pieces()
            .iter()
            .map(|p| LexPiece {
                slope: p.slope.clone(),
                offset: LexScalar::new(
                    p.offset.clone(),
                    if lifted { corpus::rand_small(rng) } else { rat(0) },
                ),
            })
            .collect();
        LexPolyFunc::new(2, pieces).unwrap()
    };
    let f1 = lex_factor(rng, 1);
    let f2 = lex_factor(rng, 0);
    let x = corpus::rand_small(rng);
    let z = corpus::rand_small(rng);

    // the witness is a true minimizer of the standard-part section, so the
    // exactness hypothesis holds by construction
    let (_, y) = section_min(&section_pieces(&f1.std_part(), &f2.std_part(), &x, &z));
    let exactness = convolution_exactness_1d(&f1, &f2, &x, &y, &z)?;
    out.check(exactness != Exactness::Inexact, || {
        format!("instance {i}: constructed witness failed the exactness hypothesis")
    });
    match exactness {
        Exactness::Exact => out.note("exact_witnesses", 1),
        Exactness::InfinitesimallyExact => out.note("infinitesimal_witnesses", 1),
        Exactness::Inexact => {}
    }

    let report = chain_rule_check(&f1, &f2, &x, &y, &z)?;
    out.check(report.general_position, || {
        format!("instance {i}: general-position hypothesis not recorded true")
    });
    match &report.rhs {
        None => out.failures.push(format!(
            "instance {i}: relation composition empty at a genuine witness"
        )),
        Some(rhs) => {
            out.check(report.equal && report.lhs.set_eq(rhs)?, || {
                format!(
                    "instance {i}: chain rule failed; lhs {:?} vs rhs {:?}",
                    report.lhs.vertices(),
                    rhs.vertices()
                )
            });
        }
    }
    Ok(())
}
