use alevol::exactla::{MatQ, SubspaceQ};
use alevol::ratpoly::{rat, Poly4, RadialFn, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn poly() -> impl Strategy<Value = Poly4> {
    prop::collection::vec(([0u32..3, 0u32..3, 0u32..3, 0u32..3], rational()), 0..5)
        .prop_map(Poly4::from_terms)
}

fn radial() -> impl Strategy<Value = RadialFn> {
    (poly(), 0u32..3).prop_map(|(p, k)| RadialFn::new(p, k))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = MatQ> {
    // small integer entries with many zeros so ranks vary
    prop::collection::vec(
        prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -2i64..=2], cols),
        rows,
    )
    .prop_map(move |m| {
        MatQ::from_rows(
            cols,
            m.into_iter()
                .map(|r| r.into_iter().map(|v| rat(v, 1)).collect())
                .collect(),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mixed_partials_commute(f in radial(), i in 0usize..4, j in 0usize..4) {
        prop_assert_eq!(f.partial(i).partial(j), f.partial(j).partial(i));
    }

    #[test]
    fn canonical_form_is_idempotent(f in radial()) {
        let again = RadialFn::new(f.numerator().clone(), f.rpow());
        prop_assert_eq!(again, f);
    }

    #[test]
    fn leibniz_rule(f in radial(), g in radial(), i in 0usize..4) {
        let lhs = (&f * &g).partial(i);
        let rhs = &(&f.partial(i) * &g) + &(&f * &g.partial(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_nullity(m in matrix(5, 7)) {
        prop_assert_eq!(m.rank() + m.nullspace().dim(), 7);
        for v in m.nullspace().vectors() {
            prop_assert!(m.mul_vec(&v).unwrap().iter().all(|x| *x == rat(0, 1)));
        }
    }

    #[test]
    fn grassmann_formula(a in matrix(3, 6), b in matrix(4, 6)) {
        let (sa, sb) = (SubspaceQ::from_matrix(&a), SubspaceQ::from_matrix(&b));
        let s = sa.sum(&sb).unwrap();
        let i = sa.intersect(&sb).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), sa.dim() + sb.dim());
        prop_assert!(s.contains(&sa).unwrap() && sa.contains(&i).unwrap() && sb.contains(&i).unwrap());
    }

    #[test]
    fn annihilator_is_orthogonal_complement(a in matrix(3, 5)) {
        let s = SubspaceQ::from_matrix(&a);
        let ann = s.annihilator();
        prop_assert_eq!(s.dim() + ann.dim(), 5);
        for u in s.vectors() {
            for w in ann.vectors() {
                let dot = u.iter().zip(&w).fold(rat(0, 1), |acc, (x, y)| acc + x * y);
                prop_assert_eq!(dot, rat(0, 1));
            }
        }
    }
}
