//! Operator-calculus suite: the family operator must factor exactly through
//! the embedding and the canonical sublinear operator; the row-factorized
//! support hull must match dominance in both directions (insiders built as
//! row mixtures, outsiders certified by a positive violation program,
//! including the classic diagonal-family member of the support hull that is
//! not a mixture of the members); and the two composition-subdifferential
//! computations must agree.

use num_traits::Zero;
use rand::Rng as _;

use crate::calculus::{
    canonical_sublinear, composition_membership, composition_subdifferential, family_embed,
    p_family, support_hull, MatrixOperator, OperatorFamily,
};
use crate::error::Result;
use crate::func::PolyFunc;
use crate::affine::AffineFunctional;
use crate::polytope::{hull_membership, Polytope};
use crate::scalar::{rat, ratio, Rational};

use super::corpus::{self, max_row_violation};
use super::{finish, run_part, InstanceOutcome, SuiteConfig, SuiteReport};

const SUITE_ID: u64 = 5;

pub(super) fn run(config: &SuiteConfig) -> SuiteReport {
    let factorization =
        run_part(config, SUITE_ID, 0, config.cap(200), factorization_instance);
    let hull = run_part(config, SUITE_ID, 1, config.cap(100), support_hull_instance);
    let composition =
        run_part(config, SUITE_ID, 2, config.cap(50), composition_instance);
    finish("calculus", vec![factorization, hull, composition])
}

fn rand_family(rng: &mut corpus::Rng, m: usize, n: usize) -> OperatorFamily {
    let count = rng.gen_range(1..=4);
    let members = (0..count)
        .map(|_| {
            MatrixOperator::new((0..m).map(|_| corpus::rand_vec(rng, n)).collect()).unwrap()
        })
        .collect();
    OperatorFamily::new(members).unwrap()
}

fn factorization_instance(
    rng: &mut corpus::Rng,
    i: usize,
    out: &mut InstanceOutcome,
) -> Result<()> {
    let m = 1 + i % 3;
    let n = 1 + (i / 3) % 3;
    let family = rand_family(rng, m, n);
    let x = corpus::rand_vec(rng, n);
    let direct = p_family(&family, &x)?;
    let factored = canonical_sublinear(&family_embed(&family, &x)?);
    out.check(direct == factored, || {
        format!("instance {i}: factorization through the embedding is not exact")
    });
    for op in family.members() {
        for (c, d) in op.apply(&x)?.iter().zip(&direct) {
            out.check(c <= d, || {
                format!("instance {i}: family operator fails to dominate a member")
            });
        }
    }
    out.note("family_members", family.members().len() as u64);
    Ok(())
}

/// The classic two-member diagonal family whose support hull strictly
/// exceeds the convex hull of the members: checked once per run.
fn diagonal_gap_instance(out: &mut InstanceOutcome) -> Result<()> {
    let a = MatrixOperator::new(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]])?;
    let b = MatrixOperator::new(vec![vec![rat(0), rat(0)], vec![rat(0), rat(0)]])?;
    let family = OperatorFamily::new(vec![a, b])?;
    let hull = support_hull(&family)?;
    let mixed = MatrixOperator::new(vec![vec![rat(1), rat(0)], vec![rat(0), rat(0)]])?;
    out.check(hull.contains(&mixed)?, || {
        "diagonal gap: mixed operator rejected from the support hull".to_string()
    });
    // ... yet it is not a convex combination of the members as whole
    // matrices: flatten to ℝ⁴ and test hull membership there
    let flat = |op: &MatrixOperator| -> Vec<Rational> {
        op.rows().iter().flat_map(|r| r.iter().cloned()).collect()
    };
    let members = Polytope::new(4, family.members().iter().map(flat).collect())?;
    out.check(hull_membership(&flat(&mixed), &members)?.is_none(), || {
        "diagonal gap: mixed operator unexpectedly a mixture of whole members".to_string()
    });
    out.note("certified_gap_members", 1);
    Ok(())
}

fn support_hull_instance(
    rng: &mut corpus::Rng,
    i: usize,
    out: &mut InstanceOutcome,
) -> Result<()> {
    if i == 0 {
        return diagonal_gap_instance(out);
    }
    let m = 1 + i % 3;
    let n = 1 + (i / 3) % 3;
    let family = rand_family(rng, m, n);
    let hull = support_hull(&family)?;

    // insider: each row an independent convex mixture of the member rows
    let k = family.members().len();
    let mut insider_rows = Vec::with_capacity(m);
    for r in 0..m {
        let weights: Vec<Rational> = (0..k).map(|_| rat(rng.gen_range(0..=3))).collect();
        let total: Rational = weights.iter().fold(rat(1), |acc, w| acc + w);
        let mut row = vec![Rational::zero(); n];
        for (member, w) in family.members().iter().zip(&weights) {
            for c in 0..n {
                row[c] += w * &member.rows()[r][c] / &total;
            }
        }
        for c in 0..n {
            row[c] += &family.members()[0].rows()[r][c] / &total;
        }
        insider_rows.push(row);
    }
    let insider = MatrixOperator::new(insider_rows)?;
    out.check(hull.contains(&insider)?, || {
        format!("instance {i}: planted row mixture rejected from the support hull")
    });

    // outsider: push one row past the family maximum on its first
    // coordinate, then certify the rejection with a positive violation
    let bump = i % m;
    let mut outsider_rows: Vec<Vec<Rational>> = family.members()[0].rows().to_vec();
    let max0 = family
        .members()
        .iter()
        .map(|op| op.rows()[bump][0].clone())
        .max()
        .unwrap();
    outsider_rows[bump][0] = &max0 + ratio(1, 1);
    let outsider = MatrixOperator::new(outsider_rows.clone())?;
    out.check(!hull.contains(&outsider)?, || {
        format!("instance {i}: escaped row accepted by the support hull")
    });
    let member_rows: Vec<Vec<Rational>> = family
        .members()
        .iter()
        .map(|op| op.rows()[bump].clone())
        .collect();
    let violation = max_row_violation(&outsider_rows[bump], &member_rows)?;
    out.check(violation > Rational::zero(), || {
        format!("instance {i}: no positive certificate for the escaped row")
    });
    out.note("certified_outsiders", 1);
    Ok(())
}

fn composition_instance(
    rng: &mut corpus::Rng,
    i: usize,
    out: &mut InstanceOutcome,
) -> Result<()> {
    let n = 1 + i % 2;
    let m = 1 + (i / 2) % 2;
    let inner: Vec<PolyFunc> =
        (0..m).map(|_| corpus::rand_sublinear(rng, n, 3)).collect();
    let outer_pieces: Vec<AffineFunctional> = (0..rng.gen_range(1..=3))
        .map(|_| {
            AffineFunctional::linear(
                (0..m).map(|_| ratio(rng.gen_range(0..=4), rng.gen_range(1..=2))).collect(),
            )
        })
        .collect();
    let outer = PolyFunc::new(m, outer_pieces)?;

    let report = composition_subdifferential(&inner, &outer)?;
    out.check(report.agree, || {
        format!(
            "instance {i}: direct slopes {:?} disagree with the formula {:?}",
            report.direct.vertices(),
            report.formula.vertices()
        )
    });
    // the membership program must accept the vertices of both descriptions
    // and reject a point pushed outside
    for v in report.direct.vertices().iter().chain(report.formula.vertices()) {
        out.check(composition_membership(&inner, &outer, v)?, || {
            format!("instance {i}: vertex {v:?} rejected by the membership program")
        });
    }
    let escape = corpus::outside_probe(&report.direct);
    out.check(
        composition_membership(&inner, &outer, &escape)? == report.direct.contains(&escape)?,
        || format!("instance {i}: membership program disagrees at the probe {escape:?}"),
    );
    out.note("composition_vertices", report.direct.vertices().len() as u64);
    Ok(())
}
