//! Separation suite: the direct nonoblateness check must agree with its
//! diagonal reformulation on a structured-plus-random pair corpus, the polar
//! must be involutive on random cones, and the polar of an intersection must
//! decompose as the sum of polars on general-position pairs, with each
//! certified split verified part by part.

use num_traits::Zero;

use crate::cone::{polar, polar_contains, PolyCone};
use crate::error::Result;
use crate::scalar::{rat, Rational};
use crate::separation::{
    general_position_check, nonoblate_check, nonoblate_diagonal_equivalence, ConePair,
    polar_decomposition_check,
};

use super::corpus;
use super::{finish, run_part, InstanceOutcome, SuiteConfig, SuiteReport};

const SUITE_ID: u64 = 3;

pub(super) fn run(config: &SuiteConfig) -> SuiteReport {
    let diagonal = run_part(config, SUITE_ID, 0, config.cap(50), diagonal_instance);
    let involution = run_part(config, SUITE_ID, 1, config.cap(100), involution_instance);
    let decomposition =
        run_part(config, SUITE_ID, 2, config.cap(150), decomposition_instance);
    finish("separation", vec![diagonal, involution, decomposition])
}

fn ray_cone(dim: usize, rays: &[&[i64]]) -> PolyCone {
    PolyCone::new(
        dim,
        rays.iter()
            .map(|r| r.iter().map(|&c| rat(c)).collect())
            .collect(),
    )
    .unwrap()
}

/// Structured low-dimensional pairs exercising every known outcome shape:
/// identical cones, opposite cones, shared rays, orthogonal rays, trivial
/// cones, and the full space.
fn structured_pair(index: usize) -> ConePair {
    let pair = match index {
        0 => (ray_cone(1, &[&[1]]), ray_cone(1, &[&[1]])),
        1 => (ray_cone(1, &[&[1]]), ray_cone(1, &[&[-1]])),
        2 => (PolyCone::zero(1), ray_cone(1, &[&[1]])),
        3 => (ray_cone(1, &[&[1], &[-1]]), ray_cone(1, &[&[1]])),
        4 => (ray_cone(2, &[&[1, 0], &[0, 1]]), ray_cone(2, &[&[1, 0], &[0, 1]])),
        5 => (ray_cone(2, &[&[1, 0], &[0, 1]]), ray_cone(2, &[&[-1, 0], &[0, -1]])),
        6 => (ray_cone(2, &[&[1, 0], &[0, 1]]), ray_cone(2, &[&[-1, 1], &[1, 1]])),
        7 => (ray_cone(2, &[&[1, 1]]), ray_cone(2, &[&[2, 2]])),
        8 => (ray_cone(2, &[&[1, 0]]), ray_cone(2, &[&[0, 1]])),
        _ => (PolyCone::zero(2), PolyCone::zero(2)),
    };
    ConePair::new(pair.0, pair.1).unwrap()
}

fn diagonal_instance(rng: &mut corpus::Rng, i: usize, out: &mut InstanceOutcome) -> Result<()> {
    let pair = if i < 10 {
        structured_pair(i)
    } else {
        let dim = 1 + i % 2;
        ConePair::new(corpus::rand_cone(rng, dim), corpus::rand_cone(rng, dim))?
    };
    let eq = nonoblate_diagonal_equivalence(&pair)?;
    out.check(eq.equal, || {
        format!(
            "instance {i}: direct answer {} disagrees with diagonal answer {}",
            eq.direct, eq.diagonal
        )
    });
    // the equivalence report must also match a fresh direct check
    let direct = nonoblate_check(&pair)?;
    out.check(direct.nonoblate == eq.direct, || {
        format!("instance {i}: equivalence report does not match nonoblate_check")
    });
    if direct.nonoblate {
        out.note("nonoblate_pairs", 1);
        // a reported radius must be positive
        if let Some(r) = &direct.radius {
            out.check(r > &Rational::zero(), || {
                format!("instance {i}: nonpositive openness radius {r}")
            });
        }
    } else {
        out.note("oblate_pairs", 1);
    }
    Ok(())
}

fn involution_instance(rng: &mut corpus::Rng, i: usize, out: &mut InstanceOutcome) -> Result<()> {
    let dim = 1 + i % 3;
    let k = corpus::rand_cone(rng, dim);
    let back = polar(&polar(&k)?)?;
    out.check(back.set_eq(&k)?, || {
        format!("instance {i}: double polar changed the cone {:?}", k.rays())
    });
    out.note("involution_rays", k.rays().len() as u64);
    Ok(())
}

fn decomposition_instance(
    rng: &mut corpus::Rng,
    i: usize,
    out: &mut InstanceOutcome,
) -> Result<()> {
    let dim = if i < 100 { 2 } else { 3 };
    // rejection-sample a general-position pair from this instance's stream
    let mut attempts = 0u64;
    let (k1, k2) = loop {
        attempts += 1;
        if attempts > 500 {
            out.failures.push(format!(
                "instance {i}: no general-position pair found in 500 draws"
            ));
            return Ok(());
        }
        let k1 = corpus::rand_cone(rng, dim);
        let k2 = corpus::rand_cone(rng, dim);
        if general_position_check(&[k1.clone(), k2.clone()])?.in_general_position {
            break (k1, k2);
        }
    };
    out.note("gp_rejection_draws", attempts - 1);

    let report = polar_decomposition_check(&[k1.clone(), k2.clone()])?;
    out.check(report.hypothesis_general_position, || {
        format!("instance {i}: hypothesis flag lost between checks")
    });
    out.check(report.equal, || {
        format!("instance {i}: polar of intersection differs from sum of polars")
    });
    // verify every certified split: parts in the respective polars, summing
    // to the generator
    for (generator, split) in &report.decompositions {
        let Some(parts) = split else {
            out.failures
                .push(format!("instance {i}: generator {generator:?} left unsplit"));
            continue;
        };
        let mut total = vec![Rational::zero(); dim];
        for (part, cone) in parts.iter().zip([&k1, &k2]) {
            out.check(polar_contains(cone, part)?, || {
                format!("instance {i}: split part {part:?} escapes its polar")
            });
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
        out.check(&total == generator, || {
            format!("instance {i}: split parts sum to {total:?}, not {generator:?}")
        });
    }
    Ok(())
}
