//! Property tests for the separation machinery on seeded random corpora:
//! diagonal reformulation of nonoblateness, polar involution and
//! decomposition under general position, scaling of conic correspondences,
//! radius certificates, and sandwich soundness/completeness on instances
//! constructed to be feasible or infeasible by design.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use convexkit::affine::AffineFunctional;
use convexkit::cone::{polar, PolyCone};
use convexkit::func::PolyFunc;
use convexkit::linalg::{dot, inf_norm, is_zero_vec, vec_neg};
use convexkit::polytope::Polytope;
use convexkit::scalar::{rat, ratio, Rational};
use convexkit::separation::{
    conic_correspondence, general_position_check, min_box_norm_decomposition,
    nonoblate_check, nonoblate_diagonal_equivalence, polar_decomposition_check, sandwich,
    ConePair, SandwichWitness,
};

fn rand_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Rational> {
    (0..dim).map(|_| rat(rng.gen_range(-5..=5))).collect()
}

fn rand_cone(rng: &mut ChaCha8Rng, dim: usize) -> PolyCone {
    let count = rng.gen_range(1..=4);
    let rays: Vec<Vec<Rational>> = (0..count)
        .map(|_| rand_vec(rng, dim))
        .filter(|r| !is_zero_vec(r))
        .collect();
    PolyCone::new(dim, rays).unwrap()
}

fn rand_sublinear(rng: &mut ChaCha8Rng, dim: usize, max_pieces: usize) -> PolyFunc {
    let count = rng.gen_range(1..=max_pieces);
    let pieces = (0..count)
        .map(|_| AffineFunctional::linear(rand_vec(rng, dim)))
        .collect();
    PolyFunc::new(dim, pieces).unwrap()
}

#[test]
fn diagonal_reformulation_agrees_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    let mut positives = 0usize;
    let mut negatives = 0usize;
    for i in 0..60 {
        let dim = 1 + i % 2;
        let pair = ConePair::new(rand_cone(&mut rng, dim), rand_cone(&mut rng, dim)).unwrap();
        let eq = nonoblate_diagonal_equivalence(&pair).unwrap();
        assert!(eq.equal, "direct and diagonal answers must coincide");
        if eq.direct {
            positives += 1;
        } else {
            negatives += 1;
        }
    }
    // the corpus must exercise both outcomes to mean anything
    assert!(positives >= 5, "corpus produced too few nonoblate pairs");
    assert!(negatives >= 5, "corpus produced too few oblate pairs");
}

#[test]
fn polar_involution_on_random_cones() {
    let mut rng = ChaCha8Rng::seed_from_u64(502);
    for i in 0..45 {
        let dim = 1 + i % 3;
        let k = rand_cone(&mut rng, dim);
        let back = polar(&polar(&k).unwrap()).unwrap();
        assert!(back.set_eq(&k).unwrap(), "polar must be involutive on closed cones");
    }
}

#[test]
fn polar_decomposition_equal_on_general_position_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(503);
    let mut found = [0usize; 2];
    while found[0] < 25 || found[1] < 12 {
        let slot = if found[0] < 25 { 0 } else { 1 };
        let dim = 2 + slot;
        let k1 = rand_cone(&mut rng, dim);
        let k2 = rand_cone(&mut rng, dim);
        if !general_position_check(&[k1.clone(), k2.clone()]).unwrap().in_general_position {
            continue;
        }
        found[slot] += 1;
        let rep = polar_decomposition_check(&[k1.clone(), k2.clone()]).unwrap();
        assert!(rep.hypothesis_general_position);
        assert!(rep.equal, "decomposition must hold under general position");
        // certify each split: parts sum to the generator and live in the
        // respective polars
        let polars = [polar(&k1).unwrap(), polar(&k2).unwrap()];
        for (ray, split) in &rep.decompositions {
            let parts = split.as_ref().expect("equal = true implies splits exist");
            assert_eq!(parts.len(), 2);
            let mut total = vec![Rational::from_integer(0.into()); dim];
            for (part, pol) in parts.iter().zip(&polars) {
                assert!(pol.contains(part).unwrap(), "split part escapes its polar");
                for c in 0..dim {
                    total[c] += &part[c];
                }
            }
            assert_eq!(&total, ray, "split parts must sum to the generator");
        }
    }
}

#[test]
fn correspondence_triples_scale_like_a_cone() {
    let mut rng = ChaCha8Rng::seed_from_u64(504);
    let mut decomposable = 0usize;
    for i in 0..60 {
        let dim = 1 + i % 3;
        let pair = ConePair::new(rand_cone(&mut rng, dim), rand_cone(&mut rng, dim)).unwrap();
        let x = rand_vec(&mut rng, dim);
        let Some((k1, k2)) = conic_correspondence(&pair, &x).unwrap() else {
            continue;
        };
        decomposable += 1;
        for c in 0..dim {
            assert_eq!(&k1[c] - &k2[c], x[c], "decomposition must reproduce the input");
        }
        assert!(pair.k1.contains(&k1).unwrap());
        assert!(pair.k2.contains(&k2).unwrap());
        // positive scaling preserves membership of the whole triple
        let alpha = ratio(rng.gen_range(1..=9), rng.gen_range(1..=9));
        let scale = |v: &[Rational]| -> Vec<Rational> { v.iter().map(|c| &alpha * c).collect() };
        let (sx, sk1, sk2) = (scale(&x), scale(&k1), scale(&k2));
        assert!(pair.k1.contains(&sk1).unwrap());
        assert!(pair.k2.contains(&sk2).unwrap());
        for c in 0..dim {
            assert_eq!(&sk1[c] - &sk2[c], sx[c]);
        }
    }
    assert!(decomposable >= 10, "corpus produced too few decomposable points");
}

#[test]
fn radius_certificates_keep_decompositions_in_the_unit_box() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut certified = 0usize;
    for i in 0..60 {
        let dim = 1 + i % 2;
        let pair = ConePair::new(rand_cone(&mut rng, dim), rand_cone(&mut rng, dim)).unwrap();
        let rep = nonoblate_check(&pair).unwrap();
        if !rep.nonoblate || rep.span_dim == 0 {
            continue;
        }
        certified += 1;
        let r = rep.radius.unwrap();
        assert!(r.is_positive());
        // random span directions scaled to box norm exactly r must admit
        // decompositions within the unit box, in both pair orientations
        let mut all_rays = pair.k1.rays().to_vec();
        all_rays.extend(pair.k2.rays().iter().cloned());
        let basis = convexkit::linalg::span(dim, &all_rays).basis;
        let flipped = ConePair::new(pair.k2.clone(), pair.k1.clone()).unwrap();
        for _ in 0..3 {
            let mut y = vec![Rational::from_integer(0.into()); dim];
            for b in &basis {
                let w = rat(rng.gen_range(-4..=4));
                for c in 0..dim {
                    y[c] += &w * &b[c];
                }
            }
            if is_zero_vec(&y) {
                continue;
            }
            let norm = inf_norm(&y);
            let y: Vec<Rational> = y.iter().map(|c| c * &r / &norm).collect();
            for orientation in [&pair, &flipped] {
                let t = min_box_norm_decomposition(orientation, &y).unwrap().unwrap();
                assert!(t <= rat(1), "certified radius must keep parts in the unit box");
            }
        }
    }
    assert!(certified >= 10, "corpus produced too few nonoblate pairs");
}

/// A feasible sandwich instance: pick the functional first, then build both
/// functions around it so that `−q ≤ ⟨t,·⟩ ≤ p` holds by construction.
fn feasible_sandwich(rng: &mut ChaCha8Rng, dim: usize) -> (PolyFunc, PolyFunc, Vec<Rational>) {
    let p = rand_sublinear(rng, dim, 4);
    // t = random convex combination of the slopes of p
    let weights: Vec<Rational> = (0..p.pieces().len())
        .map(|_| rat(rng.gen_range(0..=4)))
        .collect();
    let total: Rational = weights.iter().fold(rat(1), |acc, w| acc + w);
    let mut t = vec![Rational::from_integer(0.into()); dim];
    for (piece, w) in p.pieces().iter().zip(&weights) {
        for c in 0..dim {
            t[c] += w * &piece.slope[c] / &total;
        }
    }
    // the leftover weight 1/total goes to the first slope
    for c in 0..dim {
        t[c] += &p.pieces()[0].slope[c] / &total;
    }
    // q gets −t as an explicit slope, so −t ∈ conv(slopes of q)
    let mut q_pieces = vec![AffineFunctional::linear(vec_neg(&t))];
    for _ in 0..rng.gen_range(0..=2) {
        q_pieces.push(AffineFunctional::linear(rand_vec(rng, dim)));
    }
    (p, PolyFunc::new(dim, q_pieces).unwrap(), t)
}

/// An infeasible instance: the subdifferentials at zero are separated along
/// the first coordinate, so every functional fails one of the two bounds.
fn infeasible_sandwich(rng: &mut ChaCha8Rng, dim: usize) -> (PolyFunc, PolyFunc) {
    let make = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| -> PolyFunc {
        let count = rng.gen_range(1..=3);
        let pieces = (0..count)
            .map(|_| {
                let mut s = rand_vec(rng, dim);
                s[0] = rat(rng.gen_range(lo..=hi));
                AffineFunctional::linear(s)
            })
            .collect();
        PolyFunc::new(dim, pieces).unwrap()
    };
    // slopes of p have first coordinate ≥ 2, while −slopes of q stay ≤ 1
    (make(rng, 2, 5), make(rng, -1, 1))
}

#[test]
fn sandwich_feasible_instances_yield_sound_functionals() {
    let mut rng = ChaCha8Rng::seed_from_u64(506);
    for i in 0..50 {
        let dim = 1 + i % 2;
        let (p, q, _) = feasible_sandwich(&mut rng, dim);
        let witness = sandwich(&p, &q).unwrap();
        let SandwichWitness::Functional(t) = witness else {
            panic!("constructed-feasible instance reported a violation");
        };
        // exact soundness: ⟨t,·⟩ ≤ p ⟺ t ∈ conv(slopes of p), and
        // −q ≤ ⟨t,·⟩ ⟺ −t ∈ conv(slopes of q)
        let p_hull =
            Polytope::new(dim, p.pieces().iter().map(|f| f.slope.clone()).collect()).unwrap();
        let q_hull =
            Polytope::new(dim, q.pieces().iter().map(|f| f.slope.clone()).collect()).unwrap();
        assert!(p_hull.contains(&t).unwrap(), "upper bound fails");
        assert!(q_hull.contains(&vec_neg(&t)).unwrap(), "lower bound fails");
        // a direct pointwise spot check on random probes
        for _ in 0..4 {
            let x = rand_vec(&mut rng, dim);
            let tx = dot(&t, &x);
            assert!(tx <= p.eval(&x).unwrap());
            assert!(-q.eval(&x).unwrap() <= tx);
        }
    }
}

#[test]
fn sandwich_infeasible_instances_yield_strict_violations() {
    let mut rng = ChaCha8Rng::seed_from_u64(507);
    for i in 0..40 {
        let dim = 1 + i % 2;
        let (p, q) = infeasible_sandwich(&mut rng, dim);
        let witness = sandwich(&p, &q).unwrap();
        let SandwichWitness::Violation(x) = witness else {
            panic!("constructed-infeasible instance reported a functional");
        };
        let total = p.eval(&x).unwrap() + q.eval(&x).unwrap();
        assert!(total.is_negative(), "violation must make p + q strictly negative");
    }
}
