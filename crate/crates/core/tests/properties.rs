use num_bigint::BigUint;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdcode::catalog::{CatalogLine, CatalogRecord, CatalogStore};
use sdcode::classify;
use sdcode::code::known;
use sdcode::construct::{self, NeighborKind};
use sdcode::equiv;
use sdcode::quad::{self, QuotientSpace};
use sdcode::{LinearCode, PermGroup, Permutation};

fn type2(i: usize) -> LinearCode {
    match i % 5 {
        0 => known::e8(),
        1 => known::e8_power(2),
        2 => known::d16_plus(),
        3 => known::golay(),
        _ => known::e8().direct_sum(&known::d16_plus()).unwrap(),
    }
}

fn shuffle(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Permutation::from_images(v).unwrap()
}

fn random_codeword(c: &LinearCode, rng: &mut ChaCha8Rng) -> u64 {
    c.rows().iter().filter(|_| rng.gen()).fold(0, |a, r| a ^ r)
}

/// A random self-dual code of length `2m`: a random neighbor of a permuted i2^m.
fn random_self_dual(m: usize, rng: &mut ChaCha8Rng) -> LinearCode {
    let base = known::i2_power(m).permute(&shuffle(2 * m, rng));
    loop {
        let v = rng.gen::<u64>() & ((1u64 << (2 * m)) - 1);
        if v.count_ones() % 2 == 0 && !base.contains(v) {
            let ns = construct::neighbors_at(&base, v, NeighborKind::SelfDual).unwrap();
            return ns[rng.gen_range(0..ns.len())].clone();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dual_is_an_involution(n in 1usize..20, words in prop::collection::vec(any::<u64>(), 0..10)) {
        let mask = (1u64 << n) - 1;
        let c = LinearCode::span(n, words.into_iter().map(|w| w & mask).collect()).unwrap();
        let dd = c.dual().dual();
        prop_assert_eq!(dd.rows(), c.rows());
        prop_assert_eq!(c.dim() + c.dual().dim(), n);
        let total: u64 = c.weight_distribution().unwrap().counts().iter().sum();
        prop_assert_eq!(total, 1u64 << c.dim());
    }

    #[test]
    fn self_dual_weights_and_shadow(m in 2usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_self_dual(m, &mut rng);
        let n = 2 * m;
        prop_assert!(c.is_self_dual());
        let wd = c.weight_distribution().unwrap();
        let total: u64 = wd.counts().iter().sum();
        prop_assert_eq!(total, 1u64 << m);
        if c.contains_all_ones() {
            for w in 0..=n {
                prop_assert_eq!(wd.a(w), wd.a(n - w));
            }
        }
        if !c.is_doubly_even() {
            let s = c.shadow().unwrap();
            for (w, _) in s.shadow_weights.nonzero_terms() {
                prop_assert_eq!(w % 4, (n / 2) % 4);
            }
        }
    }

    #[test]
    fn lift_of_length_6_mod_8_is_type2(k in 0usize..2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_self_dual(3 + 4 * k, &mut rng);
        let l = construct::bp_lift(&c).unwrap();
        prop_assert!(l.is_self_dual() && l.is_doubly_even());
        prop_assert_eq!(l.n(), c.n() + 2);
    }

    #[test]
    fn permutation_inverse_and_group_order(n in 1usize..24, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = shuffle(n, &mut rng);
        prop_assert!(p.then(&p.inverse()).is_identity());
        let parsed = Permutation::parse_cycles(n, &p.to_cycle_string()).unwrap();
        prop_assert_eq!(&parsed, &p);
        let gens = vec![p.clone(), shuffle(n, &mut rng)];
        let g = PermGroup::new(n, gens.clone()).unwrap();
        prop_assert_eq!(classify::factorial(n) % g.order(), BigUint::from(0u32));
        let extra = gens[0].then(&gens[1]).then(&gens[0]);
        prop_assert!(g.is_member(&extra));
        let g2 = PermGroup::new(n, vec![gens[0].clone(), gens[1].clone(), extra]).unwrap();
        prop_assert_eq!(g2.order(), g.order());
        for orbit in g.orbits() {
            prop_assert_eq!(g.stabilizer_order(orbit[0]) * orbit.len(), g.order());
        }
    }

    #[test]
    fn fingerprints_and_canonical_forms_are_invariant(i in 0usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = type2(i);
        let p = shuffle(c.n(), &mut rng);
        let q = c.permute(&p);
        prop_assert_eq!(equiv::fingerprint(&c).unwrap(), equiv::fingerprint(&q).unwrap());
        let w = equiv::is_equivalent(&c, &q).unwrap().unwrap();
        prop_assert!(equiv::verify_witness(&c, &q, &w));
        let a = equiv::canonical_form(&c).unwrap();
        let b = equiv::canonical_form(&q).unwrap();
        prop_assert_eq!(a.code.rows(), b.code.rows());
    }

    #[test]
    fn catalog_lines_round_trip(i in 0usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = type2(i).permute(&shuffle(type2(i).n(), &mut rng));
        let rec = CatalogRecord::from_code(&c, "prop test").unwrap();
        let line = CatalogLine::parse(&rec.to_line(), 1).unwrap();
        prop_assert_eq!(line.to_string(), rec.to_line());
        let back = CatalogRecord::from_line(&line).unwrap();
        prop_assert_eq!(back.canonical_hash, rec.canonical_hash);
        prop_assert_eq!(back.code.rows(), rec.code.rows());
    }

    #[test]
    fn quotient_form_is_well_defined(i in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = type2(i);
        let octads: Vec<u64> = c
            .codewords_of_weight(8)
            .unwrap()
            .into_iter()
            .filter(|x| x.count_ones() as usize != c.n())
            .collect();
        let x = octads[rng.gen_range(0..octads.len())];
        let spec = construct::decompose_at(&c, x).unwrap().spec;
        let q1 = QuotientSpace::of_code(&spec.c1).unwrap();
        let q2 = QuotientSpace::of_code(&spec.c2).unwrap();
        prop_assert!(q1.is_isometry(&q2, &spec.f).unwrap());
        for (sub, q) in [(&spec.c1, &q1), (&spec.c2, &q2)] {
            prop_assert!(q.is_nondegenerate());
            for _ in 0..100 {
                let v = rng.gen_range(0..1u32 << q.dim());
                let y = q.lift(v) ^ random_codeword(sub, &mut rng);
                prop_assert_eq!(q.coords(y), Some(v));
                prop_assert_eq!(((y.count_ones() / 2) % 2) as u8, q.q(v));
            }
            let f = quad::find_isometry(q, q).unwrap().unwrap();
            prop_assert!(q.is_isometry(q, &f).unwrap());
        }
    }

    #[test]
    fn glue_of_decomposition_is_type2(i in 0usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = type2(i);
        let octads = c.codewords_of_weight(8).unwrap();
        let octads: Vec<u64> = octads.into_iter().filter(|x| x.count_ones() as usize != c.n()).collect();
        prop_assume!(!octads.is_empty());
        let x = octads[rng.gen_range(0..octads.len())];
        let d = construct::decompose_at(&c, x).unwrap();
        let g = construct::glue(&d.spec).unwrap();
        prop_assert!(g.is_self_dual() && g.is_doubly_even());
        prop_assert_eq!(g.dim(), c.n() / 2);
        prop_assert!(equiv::verify_witness(&c, &g, &d.layout));
    }

    #[test]
    fn shortened_profile_is_permutation_invariant(i in 0usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = type2(i);
        let q = c.permute(&shuffle(c.n(), &mut rng));
        prop_assert_eq!(
            construct::shortened_dim_profile(&c, 8).unwrap(),
            construct::shortened_dim_profile(&q, 8).unwrap()
        );
    }

    #[test]
    fn neighbors_are_symmetric(i in 0usize..3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = type2(i);
        let mask = (1u64 << c.n()) - 1;
        let v = loop {
            let v = rng.gen::<u64>() & mask;
            if v.count_ones() % 4 == 0 && !c.contains(v) {
                break v;
            }
        };
        for nb in construct::neighbors_at(&c, v, NeighborKind::DoublyEven).unwrap() {
            prop_assert!(nb.is_self_dual() && nb.is_doubly_even());
            let back = construct::neighbor_step(&nb).unwrap();
            prop_assert!(back.iter().any(|b| b.rows() == c.rows()));
        }
    }

    #[test]
    fn store_keeps_one_record_per_class(i in 0usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = type2(i);
        let a = CatalogRecord::from_code(&c.permute(&shuffle(c.n(), &mut rng)), "a").unwrap();
        let b = CatalogRecord::from_code(&c.permute(&shuffle(c.n(), &mut rng)), "b").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let mut store = CatalogStore::open(dir.path()).unwrap();
        prop_assert_eq!(store.insert_many(&[a, b]).unwrap(), 1);
        let reloaded = CatalogStore::open(dir.path()).unwrap();
        prop_assert_eq!(reloaded.index(), store.index());
    }

    #[test]
    fn census_ignores_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut recs: Vec<CatalogRecord> = (0..3).map(|i| CatalogRecord::from_code(&type2(i), "c").unwrap()).collect();
        let t = classify::census(&recs).unwrap();
        recs.shuffle(&mut rng);
        prop_assert_eq!(classify::census(&recs).unwrap(), t);
    }
}
