use proptest::prelude::*;
use rand::Rng;

use simproj::lattice::{check_de_morgan, check_orthomodular, intersect, ortho_complement, sum};
use simproj::prob::{mix, pure_state};
use simproj::rv::{check_expect_theorem, expectation, make_rv};
use simproj::sample::{
    random_orthonormal, random_point, random_subspace, span_vectors, stream_rng,
};
use simproj::sigma::generate_sigma_star;
use simproj::similarity::{sampled_similarity, SamplerConfig};
use simproj::{SpStructure, Subspace};

fn subspaces(d: usize, seed: u64, k: usize) -> (SpStructure, Vec<Subspace>) {
    let st = SpStructure::ray(d).unwrap();
    let mut rng = stream_rng(seed, 0);
    let out = (0..k)
        .map(|_| {
            let dim = rng.random_range(0..=d);
            random_subspace(&st, &mut rng, dim)
        })
        .collect();
    (st, out)
}

fn mask_points(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_is_an_involution(d in 2usize..=5, seed in any::<u64>()) {
        let (_, v) = subspaces(d, seed, 1);
        let a = &v[0];
        let c = ortho_complement(a);
        prop_assert_eq!(a.dim() + c.dim(), d);
        prop_assert!(ortho_complement(&c).equals(a));
        prop_assert!(sum(a, &c).unwrap().is_whole());
        prop_assert!(intersect(a, &c).unwrap().is_empty());
    }

    #[test]
    fn sum_and_meet_bound_their_arguments(d in 2usize..=5, seed in any::<u64>()) {
        let (_, v) = subspaces(d, seed, 2);
        let (a, b) = (&v[0], &v[1]);
        let s = sum(a, b).unwrap();
        let m = intersect(a, b).unwrap();
        prop_assert!(s.equals(&sum(b, a).unwrap()));
        prop_assert!(m.equals(&intersect(b, a).unwrap()));
        prop_assert!(a.is_subset_of(&s) && b.is_subset_of(&s));
        prop_assert!(m.is_subset_of(a) && m.is_subset_of(b));
        prop_assert_eq!(s.dim() + m.dim(), a.dim() + b.dim());
    }

    #[test]
    fn de_morgan_and_orthomodular_laws(d in 2usize..=5, seed in any::<u64>()) {
        let (_, v) = subspaces(d, seed, 3);
        prop_assert!(check_de_morgan(&v[0], &v[1]).unwrap().holds);
        let c = sum(&v[0], &v[2]).unwrap();
        prop_assert!(check_orthomodular(&v[0], &c).unwrap().holds);
    }

    #[test]
    fn classical_sum_is_union(a in 0u32..32, b in 0u32..32) {
        let st = SpStructure::classical(5).unwrap();
        let sa = Subspace::from_points(st.clone(), &mask_points(a, 5)).unwrap();
        let sb = Subspace::from_points(st.clone(), &mask_points(b, 5)).unwrap();
        prop_assert_eq!(sum(&sa, &sb).unwrap().point_indices().unwrap(), mask_points(a | b, 5));
        prop_assert_eq!(intersect(&sa, &sb).unwrap().point_indices().unwrap(), mask_points(a & b, 5));
        prop_assert_eq!(ortho_complement(&sa).point_indices().unwrap(), mask_points(!a & 31, 5));
    }

    #[test]
    fn sampler_is_symmetric_and_monotone(d in 2usize..=4, seed in any::<u64>(), blocks in 1usize..6) {
        let (_, v) = subspaces(d, seed, 2);
        let cfg = SamplerConfig { samples: 400 * blocks + 123, refine_top: 50, seed };
        let ab = sampled_similarity(&v[0], &v[1], &cfg);
        let ba = sampled_similarity(&v[1], &v[0], &cfg);
        prop_assert_eq!(ab.value.to_bits(), ba.value.to_bits());
        let more = sampled_similarity(&v[0], &v[1], &SamplerConfig { samples: cfg.samples * 2, ..cfg });
        prop_assert!(more.value <= ab.value);
        prop_assert!((0.0..=1.0).contains(&ab.value));
    }

    #[test]
    fn sampled_lines_stay_above_squared_cosine(deg in 0.0f64..90.0, seed in any::<u64>()) {
        let st = SpStructure::ray(2).unwrap();
        let t = deg.to_radians();
        let a = st.subspace_from_vectors(&[vec![1.0, 0.0]]).unwrap();
        let b = st.subspace_from_vectors(&[vec![t.cos(), t.sin()]]).unwrap();
        let est = sampled_similarity(&a, &b, &SamplerConfig { samples: 4000, refine_top: 50, seed });
        let oracle = t.cos().powi(2);
        prop_assert!(est.value >= oracle - 1e-9, "{} below {}", est.value, oracle);
        prop_assert!(est.value - oracle <= 1e-3);
    }

    #[test]
    fn expectation_matches_basis_sum(d in 2usize..=4, seed in any::<u64>()) {
        let st = SpStructure::ray(d).unwrap();
        let mut rng = stream_rng(seed, 1);
        let basis = random_orthonormal(&mut rng, d, d);
        let pairs = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (i as f64 - 1.5, span_vectors(&st, std::slice::from_ref(b))))
            .collect();
        let x = make_rv(&st, pairs).unwrap();
        let at = random_point(&st, &mut rng);
        prop_assert!(check_expect_theorem(&x, &at).unwrap().residual.abs() <= 1e-9);
        let e = expectation(&x, &pure_state(&st, &at).unwrap()).unwrap().value;
        let direct: f64 = x
            .domain_basis()
            .iter()
            .map(|(r, b)| r * st.similarity(&at, b).unwrap())
            .sum();
        prop_assert!((e - direct).abs() <= 1e-9);
    }

    #[test]
    fn mixing_is_affine(d in 2usize..=4, seed in any::<u64>(), w in 0.0f64..=1.0) {
        let (st, v) = subspaces(d, seed, 1);
        let mut rng = stream_rng(seed, 2);
        let p = pure_state(&st, &random_point(&st, &mut rng)).unwrap();
        let q = pure_state(&st, &random_point(&st, &mut rng)).unwrap();
        let m = mix(vec![(w, p.clone()), (1.0 - w, q.clone())]).unwrap();
        let lhs = m.evaluate(&v[0]).unwrap();
        let rhs = w * p.evaluate(&v[0]).unwrap() + (1.0 - w) * q.evaluate(&v[0]).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn generation_is_idempotent(seed in any::<u64>(), lines in 1usize..=3) {
        let st = SpStructure::ray(2).unwrap();
        let mut rng = stream_rng(seed, 3);
        let gens: Vec<Subspace> = (0..lines).map(|_| random_subspace(&st, &mut rng, 1)).collect();
        let f = generate_sigma_star(&st, &gens, 4096).unwrap();
        let g = generate_sigma_star(&st, f.events(), 4096).unwrap();
        prop_assert_eq!(f.len(), g.len());
        for e in g.events() {
            prop_assert!(f.contains(e));
        }
    }
}
