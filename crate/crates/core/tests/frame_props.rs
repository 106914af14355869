mod common;

use framelab_core::gallery::{paper_example, random_frame};
use framelab_core::linalg::projector_onto_span;
use framelab_core::{extract, Frame, Strategy as Extraction, SubsetId, TolerancePolicy};
use proptest::prelude::*;
use rand::Rng;

fn pol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn frame_strategy() -> impl Strategy<Value = Frame> {
    (1usize..=8, 1usize..=16, any::<u64>())
        .prop_map(|(d, n, seed)| random_frame(d, n, seed, None).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn gram_and_operator_share_nonzero_spectrum(f in frame_strategy()) {
        let a = common::nonzero_eigenvalues(&f.gram(), 1e-12);
        let b = common::nonzero_eigenvalues(&f.frame_operator(), 1e-12);
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
        let ours = f.spectrum(&pol()).unwrap();
        for (x, y) in ours.nonzero_values(&pol()).iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn rayleigh_quotients_sit_between_bounds(f in frame_strategy(), seed in any::<u64>()) {
        let b = f.frame_bounds(&pol()).unwrap();
        let mut rng = common::rng(seed);
        for _ in 0..50 {
            let v = common::random_in_span(&mut rng, &f);
            if v.norm() == 0.0 { continue; }
            let u = v.scaled(1.0 / v.norm());
            let energy: f64 = f.analyze(&u).unwrap().iter().map(|c| c * c).sum();
            prop_assert!(energy >= b.lower - 1e-9 && energy <= b.upper + 1e-9);
        }
        let eig = f.spectrum(&pol()).unwrap();
        let range = eig.nonzero_range(&pol());
        for (k, bound) in [(range.start, b.lower), (range.end - 1, b.upper)] {
            let u = eig.vector(k);
            let energy: f64 = f.analyze(&u).unwrap().iter().map(|c| c * c).sum();
            prop_assert!((energy - bound).abs() <= 1e-6);
        }
    }

    #[test]
    fn dual_of_dual_is_the_frame(f in frame_strategy()) {
        let dual = f.canonical_dual(&pol()).unwrap().into_frame(f.ambient_dim()).unwrap();
        let back = dual.canonical_dual(&pol()).unwrap();
        let p = projector_onto_span(f.vectors(), f.ambient_dim(), &pol()).unwrap();
        for (g, fi) in back.vectors.iter().zip(f.vectors()) {
            let target = p.mul_vec(fi).unwrap();
            prop_assert!(g.sub(&target).norm() <= 1e-8 * (1.0 + fi.norm()));
        }
        for g in &dual.vectors().to_vec() {
            prop_assert!(p.mul_vec(g).unwrap().sub(g).norm() <= 1e-10 * (1.0 + g.norm()));
        }
    }

    #[test]
    fn reconstruction_is_span_projection(f in frame_strategy(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let p = projector_onto_span(f.vectors(), f.ambient_dim(), &pol()).unwrap();
        for _ in 0..10 {
            let x = common::gaussian_vector(&mut rng, f.ambient_dim());
            let r = f.reconstruct(&x, &pol()).unwrap();
            let target = p.mul_vec(&x).unwrap();
            prop_assert!(r.sub(&target).norm() <= 1e-10 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn riesz_basis_lower_bound_is_gram_minimum(d in 1usize..=8, extra in 0usize..=3, seed in any::<u64>()) {
        let n = d.saturating_sub(extra).max(1);
        let f = random_frame(d, n, seed, None).unwrap();
        let check = f.riesz_check(&pol()).unwrap();
        prop_assert!(check.is_riesz_basis);
        let b = f.frame_bounds(&pol()).unwrap();
        prop_assert!((b.lower - check.gram_lower).abs() <= 1e-9);
        prop_assert!((b.upper - check.gram_upper).abs() <= 1e-9);
    }

    #[test]
    fn deleting_a_redundant_vector_keeps_the_span(d in 1usize..=6, n in 2usize..=12, seed in any::<u64>()) {
        let f = random_frame(d, n.max(d + 1), seed, None).unwrap();
        let rank = f.rank(&pol()).unwrap();
        prop_assume!(f.excess(&pol()).unwrap() >= 1);
        let basis = extract(&f, Extraction::Greedy, &pol()).unwrap().selected;
        let outside = basis.complement(f.len());
        let drop = SubsetId::new(vec![outside.indices()[0]]).unwrap();
        let g = f.without(&drop).unwrap();
        prop_assert_eq!(g.rank(&pol()).unwrap(), rank);
        let p_full = projector_onto_span(f.vectors(), d, &pol()).unwrap();
        let p_cut = projector_onto_span(g.vectors(), d, &pol()).unwrap();
        prop_assert!(p_full.sub(&p_cut).unwrap().frobenius() <= 1e-9);
        prop_assert!(g.frame_bounds(&pol()).unwrap().lower > 0.0);
    }
}

#[test]
fn bounds_of_example_family_are_spectral() {
    let f = paper_example(6).unwrap();
    let b = f.frame_bounds(&pol()).unwrap();
    let nz = common::nonzero_eigenvalues(&f.frame_operator(), 1e-12);
    assert_eq!(b.span_rank, 6);
    assert!((b.lower - nz[0]).abs() <= 1e-12);
    assert!((b.upper - nz[5]).abs() <= 1e-12);
    assert!(b.lower <= nz.iter().sum::<f64>() / 6.0 && nz.iter().sum::<f64>() / 6.0 <= b.upper);
}

#[test]
fn analysis_and_synthesis_are_adjoint() {
    let mut rng = common::rng(4);
    let f = random_frame(5, 9, 1, None).unwrap();
    for _ in 0..20 {
        let x = common::gaussian_vector(&mut rng, 5);
        let c: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
        let lhs: f64 = f
            .analyze(&x)
            .unwrap()
            .iter()
            .zip(&c)
            .map(|(a, b)| a * b)
            .sum();
        let rhs = x.dot(&f.synthesize(&c).unwrap());
        assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }
}
