use malle_core::group::AbelianGroup;
use malle_core::index::{delta, delta_closed_form, index_compare, tail_series};
use malle_core::perm::{pair_index, product_embed, CycleType, Permutation};
use malle_core::splitting::{parse_pattern, remark_formula, SplittingPattern};
use malle_core::Rational;
use proptest::prelude::*;

fn permutation(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max)
        .prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|images| Permutation::from_one_line(&images).unwrap())
}

fn cycle_type(max: usize) -> impl Strategy<Value = CycleType> {
    permutation(max).prop_map(|p| p.cycle_type())
}

fn group() -> impl Strategy<Value = AbelianGroup> {
    (1u64..=12).prop_flat_map(|n| {
        let all = AbelianGroup::all_of_order(n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

fn pattern() -> impl Strategy<Value = SplittingPattern> {
    prop::collection::vec((1u32..=14, 1u32..=12), 1..6).prop_map(|f| SplittingPattern::new(f).unwrap())
}

proptest! {
    #[test]
    fn product_embedding_index(g in permutation(6), h in permutation(7)) {
        let embedded = product_embed(&g, &h);
        prop_assert_eq!(embedded.degree(), g.degree() * h.degree());
        prop_assert_eq!(embedded.cycle_type().ind(), pair_index(&g.cycle_type(), &h.cycle_type()));
    }

    #[test]
    fn pair_index_is_symmetric(g in cycle_type(8), h in cycle_type(8)) {
        prop_assert_eq!(pair_index(&g, &h), pair_index(&h, &g));
    }

    #[test]
    fn pairing_with_identity_scales(g in cycle_type(8), n in 1usize..9) {
        let e = CycleType::identity(n);
        prop_assert_eq!(pair_index(&g, &e), n as u64 * g.ind());
    }

    #[test]
    fn delta_matches_closed_form(g in cycle_type(6), a in group(), pick in any::<prop::sample::Index>()) {
        let elems = a.elements();
        let h = &elems[pick.index(elems.len())];
        let d = g.degree();
        let value = delta(d, &a, &g, h).unwrap();
        let h_type = h.regular_cycle_type();
        prop_assert_eq!(value as i64, delta_closed_form(&g, &h_type, d, a.order() as usize));
        prop_assert!(value <= d as u64 * h.ind());
        if h.is_identity() {
            prop_assert_eq!(value, 0);
        }
    }

    #[test]
    fn strict_inequality_has_unit_deficit(g in cycle_type(6), a in group(), pick in any::<prop::sample::Index>()) {
        let elems = a.elements();
        let h = &elems[pick.index(elems.len())];
        let c = index_compare(&g, h);
        prop_assert!(c.lhs <= c.rhs);
        prop_assert_eq!(c.equality, c.divisibility);
        if !c.equality {
            prop_assert!(c.normalized_deficit(a.order()) <= Rational::new(-1, a.order() as i64));
        }
    }

    #[test]
    fn patterns_round_trip(p in pattern()) {
        let text = p.to_string();
        prop_assert_eq!(parse_pattern(&text).unwrap(), p.clone());
        let spaced = text.replace('^', " ^ ").replace('(', "( ");
        prop_assert_eq!(parse_pattern(&spaced).unwrap(), p);
    }

    #[test]
    fn remark_formula_is_symmetric(p in pattern(), q in pattern()) {
        prop_assert_eq!(remark_formula(&p, &q), remark_formula(&q, &p));
    }

    #[test]
    fn tail_decreases_in_y(m in 1u32..6, num in 1i64..50, y in 2.0f64..1e6) {
        let s = Rational::new(-num, 50);
        let zero = Rational::from_integer(0);
        let a = tail_series(s, zero, m, y, 1e-15).unwrap();
        let b = tail_series(s, zero, m, y * 4.0, 1e-15).unwrap();
        prop_assert!(a.value > 0.0 && b.value > 0.0);
        prop_assert!(b.value <= a.value);
    }
}
