use num_traits::Zero;
use proptest::prelude::*;

use webdimer::basisgen::{sl3_basis, sl3_growth};
use webdimer::dimers::{boundary_measurement, enumerate_dimer_covers, face_weight, Network};
use webdimer::enumeration::{quaternary_pairs, tree_bijection, tree_bijection_inverse};
use webdimer::pairing::{pair_combinations, pair_webs};
use webdimer::plabic::make_rectangle_graph;
use webdimer::plucker::{twist_matrix, PluckerPoly};
use webdimer::rng::Rng;
use webdimer::subsets::{k_subsets, KSet};
use webdimer::tableaux::{syt_enumerate, Tableau};
use webdimer::webs::{Web, WebCombination};
use webdimer::Q;

const SHAPES: [(usize, usize); 8] = [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (4, 3), (3, 4), (2, 6)];

fn tableau(shape: usize, pick: usize) -> Tableau {
    let (r, k) = SHAPES[shape];
    let all = syt_enumerate(r, k).unwrap();
    all[pick % all.len()].clone()
}

fn random_poly(rng: &mut Rng, k: usize, n: usize) -> PluckerPoly {
    let sets = k_subsets(n, k);
    let mut p = PluckerPoly::zero(k, n);
    for _ in 0..3 {
        let a = PluckerPoly::var(k, n, sets[rng.below(sets.len())]);
        let b = PluckerPoly::var(k, n, sets[rng.below(sets.len())]);
        p = p.add(&a.mul(&b).scale(&rng.rational(5)));
    }
    p
}

fn rotate_word(w: &[u8]) -> Vec<u8> {
    let mut v = w[1..].to_vec();
    v.push(w[0]);
    v
}

fn shuffled_word(rng: &mut Rng, copies: usize) -> Vec<u8> {
    let mut w: Vec<u8> = (1..=3u8).flat_map(|l| std::iter::repeat_n(l, copies)).collect();
    for i in (1..w.len()).rev() {
        w.swap(i, rng.below(i + 1));
    }
    w
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn promotion_and_evacuation_orders(shape in 0..SHAPES.len(), pick in 0usize..1000) {
        let t = tableau(shape, pick);
        let mut p = t.clone();
        for _ in 0..t.size() {
            p = p.promotion().unwrap();
        }
        prop_assert_eq!(&p, &t);
        prop_assert_eq!(&t.evacuation().unwrap().evacuation().unwrap(), &t);
        prop_assert_eq!(t.promotion().unwrap().transpose(), t.transpose().promotion().unwrap());
    }

    #[test]
    fn rectangle_graph_shape(n in 2usize..=12, k0 in 1usize..12) {
        let k = 1 + (k0 - 1) % (n - 1);
        let g = make_rectangle_graph(k, n).unwrap();
        prop_assert_eq!(g.disk_faces().len(), k * (n - k) + 1);
        let pi = g.trip_permutation();
        for i in 1..=n {
            prop_assert_eq!(pi[i - 1], (i - 1 + k) % n + 1);
        }
        let labels = g.face_labels().unwrap();
        for f in g.disk_faces() {
            prop_assert_eq!(labels[f].len(), k);
        }
    }

    #[test]
    fn evaluation_is_multiplicative(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let p = random_poly(&mut rng, 3, 6);
        let q = random_poly(&mut rng, 3, 6);
        let m = rng.generic_point(3, 6, 7);
        prop_assert_eq!(p.mul(&q).evaluate(&m).unwrap(), p.evaluate(&m).unwrap() * q.evaluate(&m).unwrap());
    }

    #[test]
    fn twist_depends_on_sl_orbit_only(seed in any::<u64>(), big in any::<bool>()) {
        let (k, n) = if big { (3, 6) } else { (2, 4) };
        let mut rng = Rng::new(seed);
        let m = rng.generic_point(k, n, 7);
        let g = rng.sl_matrix(k, 3);
        let gm = m.left_multiply(&g).unwrap();
        let (a, b) = (twist_matrix(&m).unwrap(), twist_matrix(&gm).unwrap());
        for s in k_subsets(n, k) {
            prop_assert_eq!(a.minor(s), b.minor(s));
        }
    }

    #[test]
    fn random_networks_satisfy_plucker_relations(seed in any::<u64>(), which in 0usize..3) {
        let (k, n) = [(2, 4), (2, 5), (3, 6)][which];
        let net = Network::random(make_rectangle_graph(k, n).unwrap(), &mut Rng::new(seed), 12);
        let pv = boundary_measurement(&net).unwrap();
        prop_assert!(pv.check_three_term_relations().is_ok());
        for i in 0..n {
            let interval: Vec<usize> = (0..k).map(|j| (i + j) % n + 1).collect();
            prop_assert!(!pv.get(KSet::from_elems(&interval)).is_zero());
        }
    }

    #[test]
    fn growth_round_trip_and_rotation(pick in 0usize..1000, wide in any::<bool>()) {
        let t = tableau(if wide { 6 } else { 4 }, pick);
        let w = sl3_growth(&t).unwrap();
        prop_assert_eq!(&w.tableau_of_web().unwrap(), &t);
        let rotated = sl3_growth(&t.promotion().unwrap()).unwrap();
        prop_assert_eq!(w.rotate().canonical_key(), rotated.canonical_key());
    }

    #[test]
    fn fp_evaluation_respects_rotation(pick in 0usize..42, seed in any::<u64>()) {
        let basis = sl3_basis(&[1; 9]).unwrap();
        let w = &basis[pick];
        let s = shuffled_word(&mut Rng::new(seed), 3);
        prop_assert_eq!(w.evaluate_fp_word(&s).unwrap(), w.rotate().evaluate_fp_word(&rotate_word(&s)).unwrap());
    }

    #[test]
    fn content_condition_forces_zero(pick in 0usize..42, seed in any::<u64>()) {
        let basis = sl3_basis(&[1; 9]).unwrap();
        let mut rng = Rng::new(seed);
        let mut s = shuffled_word(&mut rng, 3);
        let i = rng.below(9);
        s[i] = if s[i] == 3 { 1 } else { s[i] + 1 };
        prop_assert_eq!(basis[pick].evaluate_word(&s).unwrap(), 0);
    }

    #[test]
    fn pairing_is_bilinear(i in 0usize..5, j in 0usize..5, x in 0usize..5, a in -4i64..5, b in -4i64..5) {
        let webs = sl3_basis(&[1; 6]).unwrap();
        let duals = webdimer::basisgen::sl2_basis(6).unwrap();
        let (qa, qb) = (Q::from_integer(a.into()), Q::from_integer(b.into()));
        let mut comb = WebCombination::new();
        comb.add(qa.clone(), duals[i].clone());
        comb.add(qb.clone(), duals[j].clone());
        let lhs = pair_combinations(&comb, &WebCombination::single(webs[x].clone())).unwrap();
        let rhs = qa * pair_webs(&duals[i], &webs[x]).unwrap() + qb * pair_webs(&duals[j], &webs[x]).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tree_bijection_round_trips(r in 1usize..=5, pick in 0usize..10_000) {
        let pairs = quaternary_pairs(r - 1);
        let q = &pairs[pick % pairs.len()];
        let w: Web = tree_bijection_inverse(q).unwrap();
        prop_assert_eq!(&tree_bijection(&w).unwrap().1, q);
        prop_assert!(w.count_labelings(&w.word_and_sign().unwrap().1).unwrap() >= 1);
    }

    #[test]
    fn face_weight_is_multiplicative_under_join(a in 0usize..1000, b in 0usize..1000) {
        let g = make_rectangle_graph(3, 6).unwrap();
        let lam = |s: &[usize]| -> Vec<usize> { (1..=6).map(|i| usize::from(s.contains(&i))).collect() };
        let c1 = enumerate_dimer_covers(&g, 1, &lam(&[1, 3, 5])).unwrap();
        let c2 = enumerate_dimer_covers(&g, 1, &lam(&[2, 4, 6])).unwrap();
        let (d1, d2) = (&c1[a % c1.len()], &c2[b % c2.len()]);
        let joined = d1.join(d2);
        prop_assert!(joined.validate(&g).is_ok());
        let f = face_weight(&g, &joined).unwrap();
        prop_assert_eq!(f, face_weight(&g, d1).unwrap().mul(&face_weight(&g, d2).unwrap()));
    }
}
