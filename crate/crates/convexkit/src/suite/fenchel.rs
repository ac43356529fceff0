//! Conjugation suite: on random 1D/2D sampled functions, the conjugate must
//! match the definitional supremum oracle exactly, Fenchel–Young must hold
//! at every grid×dual pair, and the biconjugate must lie below the data with
//! equality exactly on lower-hull points — the hull decided by a sort-based
//! sweep in 1D and by an independent convex-weight program in 2D.

use rand::Rng as _;

use crate::error::Result;
use crate::func::SampledFunc;
use crate::generation::{biconjugate, fenchel_conjugate};
use crate::linalg::dot;
use crate::scalar::{rat, ExtScalar, Rational};

use super::corpus::{
    self, definitional_conjugate, hull_value_1d, lower_envelope_value, lower_hull_1d,
};
use super::{finish, run_part, InstanceOutcome, SuiteConfig, SuiteReport};

const SUITE_ID: u64 = 1;

pub(super) fn run(config: &SuiteConfig) -> SuiteReport {
    let outcomes = run_part(config, SUITE_ID, 0, config.cap(200), instance);
    finish("fenchel", vec![outcomes])
}

fn instance(rng: &mut corpus::Rng, i: usize, out: &mut InstanceOutcome) -> Result<()> {
    let dim = 1 + i % 2;
    let f = if dim == 1 {
        // a few instances exercise the full grid bound
        let len = if i % 50 == 0 { 64 } else { rng.gen_range(4..=24) };
        corpus::rand_sampled_1d(rng, len)
    } else {
        let len = rng.gen_range(6..=12);
        corpus::rand_sampled_2d(rng, len)
    };
    let domain: Vec<(Vec<Rational>, Rational)> = f
        .domain()
        .iter()
        .map(|(x, v)| ((*x).clone(), (*v).clone()))
        .collect();

    // dual grid: random points plus, in 1D, the slopes between consecutive
    // domain points (where the conjugate has breakpoints)
    let mut duals: Vec<Vec<Rational>> =
        (0..6).map(|_| corpus::rand_vec(rng, dim)).collect();
    if dim == 1 {
        let mut xs: Vec<(Rational, Rational)> =
            domain.iter().map(|(x, v)| (x[0].clone(), v.clone())).collect();
        xs.sort();
        for w in xs.windows(2) {
            duals.push(vec![(&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)]);
        }
    }
    duals.sort();
    duals.dedup();

    // the conjugate against the definitional supremum, point by point
    let fs = fenchel_conjugate(&f, &duals)?;
    for y in &duals {
        let got = match fs.value_at(y) {
            Some(ExtScalar::Finite(v)) => v.clone(),
            other => {
                out.failures.push(format!(
                    "instance {i}: conjugate at {y:?} not finite: {other:?}"
                ));
                continue;
            }
        };
        let want = definitional_conjugate(&domain, y);
        out.check(got == want, || {
            format!("instance {i}: conjugate at {y:?} is {got}, oracle says {want}")
        });

        // Fenchel–Young at every grid×dual pair
        for (x, v) in &domain {
            out.check(v + &got >= dot(y, x), || {
                format!("instance {i}: Fenchel–Young fails at x = {x:?}, y = {y:?}")
            });
        }
    }

    // biconjugate: domination, equality exactly on the lower hull
    let ff = biconjugate(&f)?;
    let hull = (dim == 1).then(|| {
        lower_hull_1d(
            &domain
                .iter()
                .map(|(x, v)| (x[0].clone(), v.clone()))
                .collect::<Vec<_>>(),
        )
    });
    let mut drops = 0u64;
    for (x, v) in f.samples() {
        let got = match ff.value_at(x) {
            Some(ExtScalar::Finite(r)) => r.clone(),
            other => {
                out.failures.push(format!(
                    "instance {i}: biconjugate at {x:?} not finite: {other:?}"
                ));
                continue;
            }
        };
        if let ExtScalar::Finite(r) = v {
            out.check(&got <= r, || {
                format!("instance {i}: biconjugate exceeds data at {x:?}")
            });
            if &got < r {
                drops += 1;
            }
        }
        let envelope = match &hull {
            Some(h) => hull_value_1d(h, &x[0]),
            None => lower_envelope_value(&domain, x)?,
        };
        if let Some(env) = envelope {
            out.check(got == env, || {
                format!(
                    "instance {i}: biconjugate at {x:?} is {got}, hull oracle says {env}"
                )
            });
            // equality with the data exactly on lower-hull points
            if let ExtScalar::Finite(r) = v {
                let on_hull = &env == r;
                out.check((got == *r) == on_hull, || {
                    format!("instance {i}: equality set wrong at {x:?}")
                });
            }
        } else {
            // a Top point outside the domain hull: strictly below Top is all
            // that can be required
            out.check(matches!(v, ExtScalar::Top), || {
                format!("instance {i}: finite point {x:?} escaped its own hull")
            });
        }
    }
    out.note("strict_drops", drops);
    out.note("grid_points", domain.len() as u64);

    // idempotence: conjugating twice more changes nothing
    let fff = biconjugate(&ff)?;
    out.check(fff == ff, || format!("instance {i}: biconjugate is not idempotent"));

    // spot-check order reversal: bumping the data pointwise can only lower
    // the conjugate
    let bumped = SampledFunc::new(
        dim,
        f.samples()
            .map(|(x, v)| {
                let w = match v {
                    ExtScalar::Finite(r) => ExtScalar::Finite(r + rat(1)),
                    other => other.clone(),
                };
                (x.clone(), w)
            })
            .collect(),
    )?;
    let y = corpus::rand_vec(rng, dim);
    let fy = fenchel_conjugate(&f, std::slice::from_ref(&y))?;
    let gy = fenchel_conjugate(&bumped, std::slice::from_ref(&y))?;
    out.check(fy.value_at(&y) >= gy.value_at(&y), || {
        format!("instance {i}: conjugation failed to reverse order at {y:?}")
    });
    Ok(())
}
