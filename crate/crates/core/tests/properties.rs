//! Randomized structural properties, complementing the exhaustive
//! desk-scale sweeps in the unit tests.

use proptest::prelude::*;

use dirichlet_core::{bundle, equivalence, finset, functor, series, Bundle, FinFunction, FinSet};

fn arb_fibers() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..5, 0..5)
}

fn arb_function() -> impl Strategy<Value = FinFunction> {
    (1usize..7, 0usize..7).prop_flat_map(|(cod, dom)| {
        prop::collection::vec(0usize..cod, dom)
            .prop_map(move |table| FinFunction::new(FinSet(dom), FinSet(cod), table).unwrap())
    })
}

proptest! {
    #[test]
    fn dirichlet_codes_round_trip(fibers in arb_fibers(), x in 0usize..4, seed in any::<u64>()) {
        let pi = Bundle::new(fibers);
        let card = functor::dir_eval(&pi, FinSet(x)).unwrap().size();
        prop_assume!(card > 0);
        let code = (seed as usize) % card;
        let elem = functor::dir_decode(&pi, x, code);
        prop_assert_eq!(functor::dir_encode(&pi, x, &elem), code);
    }

    #[test]
    fn poly_codes_round_trip(fibers in arb_fibers(), x in 0usize..4, seed in any::<u64>()) {
        let pi = Bundle::new(fibers);
        let card = functor::poly_eval(&pi, FinSet(x)).unwrap().size();
        prop_assume!(card > 0);
        let code = (seed as usize) % card;
        let elem = functor::poly_decode(&pi, x, code);
        prop_assert_eq!(functor::poly_encode(&pi, x, &elem), code);
    }

    #[test]
    fn bundle_codes_round_trip(fibers in arb_fibers(), seed in any::<u64>()) {
        let pi = Bundle::new(fibers);
        prop_assume!(pi.total().size() > 0);
        let e = (seed as usize) % pi.total().size();
        let (b, i) = pi.decode(e);
        prop_assert_eq!(pi.encode(b, i), e);
    }

    #[test]
    fn composition_is_associative(h in arb_function(), g_seed in any::<u64>(), f_seed in any::<u64>()) {
        // Build g and f with matching boundaries from the seeds.
        let g_dom = (g_seed as usize) % 5;
        let g = FinFunction::new(
            FinSet(g_dom),
            h.dom(),
            (0..g_dom).map(|i| ((g_seed as usize).wrapping_mul(i + 1)) % h.dom().size().max(1)).collect(),
        );
        prop_assume!(g.is_ok());
        let g = g.unwrap();
        let f_dom = (f_seed as usize) % 5;
        let f = FinFunction::new(
            FinSet(f_dom),
            g.dom(),
            (0..f_dom).map(|i| ((f_seed as usize).wrapping_mul(i + 1)) % g.dom().size().max(1)).collect(),
        );
        prop_assume!(f.is_ok());
        let f = f.unwrap();
        let left = finset::compose(&finset::compose(&h, &g).unwrap(), &f).unwrap();
        let right = finset::compose(&h, &finset::compose(&g, &f).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn series_is_isomorphism_invariant(fibers in arb_fibers(), seed in any::<u64>()) {
        // Relabel base points with a seeded permutation: the series must not move.
        let mut shuffled = fibers.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed as usize).wrapping_mul(i) % (i + 1));
        }
        let a = series::series_of(&Bundle::new(fibers), series::SeriesKind::Dirichlet);
        let b = series::series_of(&Bundle::new(shuffled), series::SeriesKind::Dirichlet);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn series_matches_evaluators(fibers in arb_fibers(), x in 0usize..7) {
        let pi = Bundle::new(fibers);
        let d = series::series_of(&pi, series::SeriesKind::Dirichlet);
        let p = series::series_of(&pi, series::SeriesKind::Polynomial);
        prop_assert_eq!(d.eval(x), functor::dir_card(&pi, x));
        prop_assert_eq!(p.eval(x), functor::poly_card(&pi, x));
    }

    #[test]
    fn mixed_radix_round_trips(radices in prop::collection::vec(1usize..6, 0..6), seed in any::<u64>()) {
        let total: usize = radices.iter().product();
        let code = (seed as usize) % total.max(1);
        let digits = finset::decode_mixed(code, &radices);
        prop_assert_eq!(finset::encode_mixed(&digits, &radices), code);
    }

    #[test]
    fn extension_of_any_enumerated_map_is_natural(
        src_fibers in prop::collection::vec(0usize..3, 1..3),
        dst_fibers in prop::collection::vec(0usize..3, 1..3),
        seed in any::<u64>(),
    ) {
        let src = Bundle::new(src_fibers);
        let dst = Bundle::new(dst_fibers);
        let maps = equivalence::enumerate_covariant_maps(&src, &dst, 1_000_000).unwrap();
        prop_assume!(!maps.is_empty());
        let m = &maps[(seed as usize) % maps.len()];
        let family = equivalence::extend_from_bang0(m, 3).unwrap();
        prop_assert!(family.is_natural().unwrap());
        prop_assert_eq!(&equivalence::restrict_at_bang0(&family).unwrap(), m);
    }

    #[test]
    fn factorization_recomposes(
        src_fibers in prop::collection::vec(0usize..3, 1..3),
        dst_fibers in prop::collection::vec(0usize..3, 1..3),
        seed in any::<u64>(),
    ) {
        let src = Bundle::new(src_fibers);
        let dst = Bundle::new(dst_fibers);
        let maps = equivalence::enumerate_covariant_maps(&src, &dst, 1_000_000).unwrap();
        prop_assume!(!maps.is_empty());
        let m = &maps[(seed as usize) % maps.len()];
        let f = bundle::factor_vertical_cartesian(m);
        prop_assert_eq!(&bundle::compose_maps(&f.cartesian, &f.vertical).unwrap(), m);
        prop_assert!(bundle::is_cartesian(&f.cartesian));
        prop_assert!(f.vertical.base_map().is_identity());
    }

    #[test]
    fn bundle_map_json_round_trips(
        src_fibers in prop::collection::vec(0usize..3, 1..3),
        dst_fibers in prop::collection::vec(0usize..3, 1..3),
        seed in any::<u64>(),
    ) {
        let src = Bundle::new(src_fibers);
        let dst = Bundle::new(dst_fibers);
        let maps = equivalence::enumerate_covariant_maps(&src, &dst, 1_000_000).unwrap();
        prop_assume!(!maps.is_empty());
        let m = &maps[(seed as usize) % maps.len()];
        let json = serde_json::to_string(m).unwrap();
        let back: dirichlet_core::BundleMap = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, m);
    }
}
