//! Property tests for approximate subdifferentials: ε-nesting with
//! three-way route agreement, stabilization of the ε-chain on pinned
//! instances, the infinitesimal subdifferential against an active-slope
//! oracle, grid-convolution lower bounds, pointwise validation of the
//! polyhedral convolution against section scans, and the chain rule on
//! exactness-constructed corpora.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use convexkit::affine::AffineFunctional;
use convexkit::approximation::{
    chain_rule_check, convolution_exactness_1d, eps_subdifferential, infimal_convolution_grid,
    infimal_convolution_poly1d, infinitesimal_contains, infinitesimal_subdifferential, Exactness,
};
use convexkit::func::{LexPiece, LexPolyFunc, PolyFunc};
use convexkit::polytope::Polytope;
use convexkit::scalar::{rat, ratio, LexScalar, Rational};

fn rand_rat(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

fn rand_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| rand_rat(rng)).collect()
}

fn rand_poly(rng: &mut ChaCha8Rng, dim: usize) -> PolyFunc {
    let count = rng.gen_range(1..=4);
    let pieces = (0..count)
        .map(|_| AffineFunctional::new(rand_vec(rng, dim), rand_rat(rng)))
        .collect();
    PolyFunc::new(dim, pieces).unwrap()
}

fn rand_lex_poly(rng: &mut ChaCha8Rng, dim: usize) -> LexPolyFunc {
    let count = rng.gen_range(1..=4);
    let pieces = (0..count)
        .map(|_| LexPiece {
            slope: rand_vec(rng, dim),
            offset: LexScalar::new(rand_rat(rng), rand_rat(rng)),
        })
        .collect();
    LexPolyFunc::new(dim, pieces).unwrap()
}

/// The exact subdifferential built directly from active pieces: the convex
/// hull of the slopes attaining the maximum at the base point.
fn active_slope_hull(f: &PolyFunc, base: &[Rational]) -> Polytope {
    let value = f.eval(base).unwrap();
    let gens: Vec<Vec<Rational>> = f
        .pieces()
        .iter()
        .filter(|p| p.eval(base).unwrap() == value)
        .map(|p| p.slope.clone())
        .collect();
    Polytope::new(f.dim(), gens).unwrap().reduced().unwrap()
}

/// A probe guaranteed to lie outside the polytope: push past the largest
/// first coordinate of any vertex.
fn outside_probe(p: &Polytope) -> Vec<Rational> {
    let mut probe = p.vertices()[0].clone();
    let max0 = p.vertices().iter().map(|v| v[0].clone()).max().unwrap();
    probe[0] = max0 + rat(1);
    probe
}

#[test]
fn eps_subdifferentials_nest_and_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(701);
    for i in 0..60 {
        let dim = 1 + i % 2;
        let f = rand_poly(&mut rng, dim);
        let base = rand_vec(&mut rng, dim);
        let eps_small = ratio(rng.gen_range(0..=4), 4);
        let eps_large = &eps_small + ratio(rng.gen_range(0..=6), 3);

        let zero = eps_subdifferential(&f, &base, &rat(0)).unwrap();
        let small = eps_subdifferential(&f, &base, &eps_small).unwrap();
        let large = eps_subdifferential(&f, &base, &eps_large).unwrap();

        // ε = 0 reproduces the exact subdifferential, independently built
        // as the hull of slopes active at the base point
        let oracle = active_slope_hull(&f, &base);
        assert!(
            zero.description().unwrap().set_eq(&oracle).unwrap(),
            "ε = 0 must give the active-slope hull"
        );

        // nesting: ∂ ⊆ ∂^ε₁ ⊆ ∂^ε₂
        let d0 = zero.description().unwrap();
        let d1 = small.description().unwrap();
        let d2 = large.description().unwrap();
        assert!(d1.contains_polytope(d0).unwrap(), "∂ must sit inside every ∂^ε");
        assert!(d2.contains_polytope(d1).unwrap(), "ε-subdifferentials must nest");

        // both membership routes and the enumerated description agree on
        // vertices, on a random probe, and on a certified outsider
        let mut probes: Vec<Vec<Rational>> = d2.vertices().to_vec();
        probes.extend(d1.vertices().to_vec());
        probes.push(rand_vec(&mut rng, dim));
        probes.push(outside_probe(d2));
        for y in &probes {
            for sub in [&zero, &small, &large] {
                let by_conjugate = sub.contains(y).unwrap();
                let by_inequality = sub.contains_by_inequality(y).unwrap();
                let by_description = sub.description().unwrap().contains(y).unwrap();
                assert_eq!(by_conjugate, by_inequality, "the two routes disagree at {y:?}");
                assert_eq!(by_conjugate, by_description, "description disagrees at {y:?}");
            }
        }
        let escape = outside_probe(d2);
        assert!(!large.contains(&escape).unwrap(), "outside probe must be rejected");
    }
}

#[test]
fn eps_chain_stabilizes_on_pinned_instances() {
    // For a piecewise-affine function the descending chain ε ↦ ∂^ε f(x̄) is
    // constant exactly when every maximal piece is active at x̄ (otherwise
    // the slack function takes values arbitrarily close to zero and the
    // chain shrinks strictly at every ε). Pinning all pieces through a
    // common point constructs the stabilizing case; the chain over
    // ε ∈ {1, 1/2, …, 2⁻¹⁰} must then be constant and equal to the exact
    // subdifferential.
    let mut rng = ChaCha8Rng::seed_from_u64(702);
    for i in 0..100 {
        let dim = 1 + i % 2;
        let base = rand_vec(&mut rng, dim);
        let value = rand_rat(&mut rng);
        let count = rng.gen_range(2..=4);
        let mut pieces: Vec<AffineFunctional> = (0..count)
            .map(|_| {
                let slope = rand_vec(&mut rng, dim);
                let dot: Rational =
                    slope.iter().zip(&base).map(|(a, b)| a * b).sum();
                AffineFunctional::new(slope, &value - dot)
            })
            .collect();
        if rng.gen_bool(0.5) {
            // a strictly dominated extra piece must not disturb the chain:
            // averaging two pinned pieces and lowering the offset keeps it
            // below the envelope everywhere
            let a = pieces[0].clone();
            let b = pieces[1].clone();
            let slope: Vec<Rational> = a
                .slope
                .iter()
                .zip(&b.slope)
                .map(|(p, q)| (p + q) / rat(2))
                .collect();
            let offset = (&a.offset + &b.offset) / rat(2) - rat(1);
            pieces.push(AffineFunctional::new(slope, offset));
        }
        let f = PolyFunc::new(dim, pieces).unwrap();

        let exact = eps_subdifferential(&f, &base, &rat(0)).unwrap();
        let exact_desc = exact.description().unwrap();
        let mut eps = rat(1);
        for _ in 0..=10 {
            let step = eps_subdifferential(&f, &base, &eps).unwrap();
            assert!(
                step.description().unwrap().set_eq(exact_desc).unwrap(),
                "pinned instance {i}: chain member at ε = {eps} drifted"
            );
            eps = eps / rat(2);
        }
        assert!(
            exact_desc.set_eq(&active_slope_hull(&f, &base)).unwrap(),
            "stable value must be the exact subdifferential"
        );
    }

    // contrast: at a smooth point of a genuinely kinked function the chain
    // keeps shrinking, so no finite intersection reaches the subdifferential
    let abs = PolyFunc::new(
        1,
        vec![
            AffineFunctional::new(vec![rat(1)], rat(0)),
            AffineFunctional::new(vec![rat(-1)], rat(0)),
        ],
    )
    .unwrap();
    let base = vec![rat(1)];
    let mut eps = rat(1);
    let mut previous: Option<Polytope> = None;
    for _ in 0..=10 {
        let step = eps_subdifferential(&abs, &base, &eps).unwrap();
        let desc = step.description().unwrap().clone();
        if let Some(prev) = previous {
            assert!(prev.contains_polytope(&desc).unwrap());
            assert!(!prev.set_eq(&desc).unwrap(), "smooth-point chain must shrink strictly");
        }
        previous = Some(desc);
        eps = eps / rat(2);
    }
}

#[test]
fn infinitesimal_subdifferential_matches_the_standard_part_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(703);
    for i in 0..50 {
        let dim = 1 + i % 2;
        let f = rand_lex_poly(&mut rng, dim);
        let base = rand_vec(&mut rng, dim);

        let sub = infinitesimal_subdifferential(&f, &base).unwrap();
        let oracle = active_slope_hull(&f.std_part(), &base);
        assert!(
            sub.set_eq(&oracle).unwrap(),
            "instance {i}: infinitesimal subdifferential must equal the \
             standard-part subdifferential"
        );

        // the direct membership route (standard level of the defining
        // supremum) agrees with the enumerated polytope
        let mut probes: Vec<Vec<Rational>> = sub.vertices().to_vec();
        probes.push(rand_vec(&mut rng, dim));
        probes.push(outside_probe(&sub));
        for y in &probes {
            assert_eq!(
                infinitesimal_contains(&f, &base, y).unwrap(),
                sub.contains(y).unwrap(),
                "instance {i}: membership routes disagree at {y:?}"
            );
        }
    }
}

#[test]
fn grid_convolution_is_a_lower_bound_with_deterministic_witness() {
    let mut rng = ChaCha8Rng::seed_from_u64(704);
    for _ in 0..40 {
        let f1 = rand_lex_poly(&mut rng, 2);
        let f2 = rand_lex_poly(&mut rng, 2);
        let mut grid: Vec<Vec<Rational>> = (0..rng.gen_range(4..=8))
            .map(|_| vec![rand_rat(&mut rng)])
            .collect();
        grid.sort();
        grid.dedup();
        let x = vec![rand_rat(&mut rng)];
        let z = vec![rand_rat(&mut rng)];

        let point = infimal_convolution_grid(&f1, &f2, 1, &grid, &x, &z).unwrap();

        // the value really is the lexicographic minimum over the grid, the
        // witness is the smallest minimizer, and the evaluation at the
        // witness is exact
        let mut best: Option<(LexScalar, Vec<Rational>)> = None;
        for y in &grid {
            let sum = f1.eval(&[x[0].clone(), y[0].clone()]).unwrap()
                + f2.eval(&[y[0].clone(), z[0].clone()]).unwrap();
            assert!(
                point.value <= sum,
                "convolution must lower-bound every middle point"
            );
            best = Some(match best {
                None => (sum, y.clone()),
                Some((bv, bw)) => {
                    if sum < bv || (sum == bv && *y < bw) {
                        (sum, y.clone())
                    } else {
                        (bv, bw)
                    }
                }
            });
        }
        let (min_value, min_witness) = best.unwrap();
        assert_eq!(point.value, min_value);
        assert_eq!(point.witness, min_witness);
        assert_eq!(point.exactness, Exactness::Exact, "grid minima are attained");
    }
}

/// Sections of a 1D convolution instance: the middle-variable envelope
/// pieces of f₁(x,·) + f₂(·,z) with standard offsets.
fn section_pieces(
    f1: &PolyFunc,
    f2: &PolyFunc,
    x: &Rational,
    z: &Rational,
) -> Vec<(Rational, Rational)> {
    let mut out = Vec::new();
    for p1 in f1.pieces() {
        for p2 in f2.pieces() {
            out.push((
                &p1.slope[1] + &p2.slope[0],
                &p1.slope[0] * x + &p2.slope[1] * z + &p1.offset + &p2.offset,
            ));
        }
    }
    out
}

/// Breakpoint-scan oracle for the minimum of a coercive upper envelope of
/// affine pieces: the minimum is attained at a pairwise crossing.
fn section_min(pieces: &[(Rational, Rational)]) -> (Rational, Rational) {
    let mut cands = vec![Rational::from_integer(0.into())];
    for (i, (si, oi)) in pieces.iter().enumerate() {
        for (sj, oj) in &pieces[i + 1..] {
            if si != sj {
                cands.push((oj - oi) / (si - sj));
            }
        }
    }
    cands.sort();
    cands.dedup();
    let eval = |y: &Rational| -> Rational {
        pieces.iter().map(|(s, o)| s * y + o).max().unwrap()
    };
    cands
        .iter()
        .map(|y| (eval(y), y.clone()))
        .min()
        .unwrap()
}

/// A random convolution factor whose middle-variable slopes cover both
/// signs with magnitude at least one, so every section is coercive.
fn rand_factor(rng: &mut ChaCha8Rng, middle_coord: usize) -> PolyFunc {
    let mut pieces = Vec::new();
    let mut down = rand_vec(rng, 2);
    down[middle_coord] = ratio(-rng.gen_range(1..=3), 1);
    pieces.push(AffineFunctional::new(down, rand_rat(rng)));
    let mut up = rand_vec(rng, 2);
    up[middle_coord] = ratio(rng.gen_range(1..=3), 1);
    pieces.push(AffineFunctional::new(up, rand_rat(rng)));
    for _ in 0..rng.gen_range(0..=2) {
        pieces.push(AffineFunctional::new(rand_vec(rng, 2), rand_rat(rng)));
    }
    PolyFunc::new(2, pieces).unwrap()
}

#[test]
fn poly1d_convolution_agrees_with_section_scans() {
    let mut rng = ChaCha8Rng::seed_from_u64(705);
    for i in 0..30 {
        let f1 = rand_factor(&mut rng, 1);
        let f2 = rand_factor(&mut rng, 0);
        let h = infimal_convolution_poly1d(&f1, &f2).unwrap();
        for _ in 0..6 {
            let x = rand_rat(&mut rng);
            let z = rand_rat(&mut rng);
            let (oracle, _) = section_min(&section_pieces(&f1, &f2, &x, &z));
            let fm = h.eval(&[x.clone(), z.clone()]).unwrap();
            assert_eq!(fm, oracle, "instance {i}: projection disagrees with scan at ({x}, {z})");
        }
    }
}

#[test]
fn chain_rule_holds_on_exactness_constructed_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(706);
    let mut exact = 0usize;
    let mut infinitesimal = 0usize;
    for i in 0..30 {
        // coercive factors, optionally with infinitesimally lifted offsets
        let lifted = i % 2 == 1;
        let mut lex_factor = |middle: usize| -> LexPolyFunc {
            let std = rand_factor(&mut rng, middle);
            let pieces = std
                .pieces()
                .iter()
                .map(|p| LexPiece {
                    slope: p.slope.clone(),
                    offset: LexScalar::new(
                        p.offset.clone(),
                        if lifted { rand_rat(&mut rng) } else { rat(0) },
                    ),
                })
                .collect();
            LexPolyFunc::new(2, pieces).unwrap()
        };
        let f1 = lex_factor(1);
        let f2 = lex_factor(0);
        let x = rand_rat(&mut rng);
        let z = rand_rat(&mut rng);

        // construct the witness as a true minimizer of the standard-part
        // section, so the exactness hypothesis holds by construction
        let (_, y) = section_min(&section_pieces(&f1.std_part(), &f2.std_part(), &x, &z));

        let exactness = convolution_exactness_1d(&f1, &f2, &x, &y, &z).unwrap();
        assert_ne!(
            exactness,
            Exactness::Inexact,
            "instance {i}: constructed witness must satisfy the hypothesis"
        );
        match exactness {
            Exactness::Exact => exact += 1,
            Exactness::InfinitesimallyExact => infinitesimal += 1,
            Exactness::Inexact => unreachable!(),
        }

        let report = chain_rule_check(&f1, &f2, &x, &y, &z).unwrap();
        assert!(
            report.general_position,
            "instance {i}: lifted epigraph tangent cones must be in general position"
        );
        let rhs = report.rhs.as_ref().expect("composition must be nonempty at a witness");
        assert!(
            report.equal,
            "instance {i}: chain rule failed; lhs {:?} vs rhs {:?}",
            report.lhs.vertices(),
            rhs.vertices()
        );
    }
    assert!(exact >= 5, "corpus must exercise exact instances, got {exact}");
    assert!(
        exact + infinitesimal == 30,
        "all instances must pass the hypothesis gate"
    );
}
