use jacobi_core::dimension::{dim_weak, generator_weights};
use jacobi_core::structure::{decompose, recombine, series_rank, Decomposition};
use jacobi_core::{
    ExponentKey, Gram, IndexMatrix, JacobiSeries, Rational, SeriesIndex, Substitution,
};
use proptest::prelude::*;

const PREC: i64 = 96;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
}

fn terms(max_n24: i64) -> impl Strategy<Value = Vec<(ExponentKey, Rational)>> {
    prop::collection::vec(((0..max_n24), -4i64..=4, -4i64..=4, rational()), 0..10).prop_map(|v| {
        v.into_iter()
            .map(|(n, r, s, c)| (ExponentKey::new(n, r, s), c))
            .collect()
    })
}

fn series_with(index: Gram) -> impl Strategy<Value = JacobiSeries> {
    terms(PREC).prop_map(move |t| JacobiSeries::from_terms(t, PREC, 0, SeriesIndex::RankTwo(index)))
}

fn series() -> impl Strategy<Value = JacobiSeries> {
    series_with(Gram::new(2, 1, 2))
}

fn nonzero_series() -> impl Strategy<Value = JacobiSeries> {
    series().prop_filter("nonzero", |f| !f.is_zero())
}

fn named_substitution() -> impl Strategy<Value = Substitution> {
    prop_oneof![
        Just(Substitution::SumNegW),
        Just(Substitution::WNegSum),
        Just(Substitution::Swap),
        Just(Substitution::SumNegZ),
    ]
}

/// Products of elementary unimodular matrices.
fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((0..4usize, -2i64..=2), 0..4).prop_map(|steps| {
        let mut u = [[1, 0], [0, 1]];
        for (kind, t) in steps {
            let e = match kind {
                0 => [[1, t], [0, 1]],
                1 => [[1, 0], [t, 1]],
                2 => [[0, 1], [1, 0]],
                _ => [[1, 0], [0, -1]],
            };
            u = [
                [
                    u[0][0] * e[0][0] + u[0][1] * e[1][0],
                    u[0][0] * e[0][1] + u[0][1] * e[1][1],
                ],
                [
                    u[1][0] * e[0][0] + u[1][1] * e[1][0],
                    u[1][0] * e[0][1] + u[1][1] * e[1][1],
                ],
            ];
        }
        u
    })
}

fn index_matrix(max: u32) -> impl Strategy<Value = IndexMatrix> {
    (0..=max, 0..=max, 0..=max).prop_map(|(a, b, c)| IndexMatrix::new(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(f in series(), g in series(), h in series()) {
        prop_assert_eq!(f.add(&g).unwrap(), g.add(&f).unwrap());
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap());
        let left = f.mul(&g).unwrap().mul(&h).unwrap();
        let right = f.mul(&g.mul(&h).unwrap()).unwrap();
        let p = left.prec24().min(right.prec24());
        prop_assert!(left.equals_to_precision(&right, p));
        let gh = g.add(&h).unwrap();
        let lhs = f.mul(&gh).unwrap();
        let rhs = f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap();
        let p = lhs.prec24().min(rhs.prec24());
        prop_assert!(lhs.equals_to_precision(&rhs, p));
        prop_assert!(f.sub(&f).unwrap().is_zero());
    }

    #[test]
    fn valuation_is_additive(f in nonzero_series(), g in nonzero_series()) {
        let prod = f.mul(&g).unwrap();
        prop_assert_eq!(prod.valuation24(), Some(f.valuation24().unwrap() + g.valuation24().unwrap()));
        let expected = (f.prec24() + g.valuation24().unwrap()).min(g.prec24() + f.valuation24().unwrap());
        prop_assert_eq!(prod.prec24(), expected);
    }

    #[test]
    fn leibniz_rule(f in series(), g in series()) {
        let lhs = f.mul(&g).unwrap().dz();
        let rhs = f.dz().mul(&g).unwrap().add(&f.mul(&g.dz()).unwrap()).unwrap();
        prop_assert!(lhs.equals_to_precision(&rhs, lhs.prec24().min(rhs.prec24())));
        let lhs = f.mul(&g).unwrap().dw();
        let rhs = f.dw().mul(&g).unwrap().add(&f.mul(&g.dw()).unwrap()).unwrap();
        prop_assert!(lhs.equals_to_precision(&rhs, lhs.prec24().min(rhs.prec24())));
    }

    #[test]
    fn substitution_round_trip(f in series(), s in named_substitution(), u in unimodular()) {
        for s in [s, Substitution::Matrix(u)] {
            let there = f.substitute(s).unwrap();
            prop_assert_eq!(there.substitute(s.inverse().unwrap()).unwrap(), f.clone());
        }
    }

    #[test]
    fn substitution_is_a_ring_map(f in series(), g in series(), u in unimodular()) {
        let s = Substitution::Matrix(u);
        let lhs = f.mul(&g).unwrap().substitute(s).unwrap();
        let rhs = f.substitute(s).unwrap().mul(&g.substitute(s).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pullbacks_are_ring_maps(f in series(), g in series()) {
        let fg = f.mul(&g).unwrap();
        prop_assert_eq!(fg.pullback_p().unwrap(), f.pullback_p().unwrap().mul(&g.pullback_p().unwrap()).unwrap());
        prop_assert_eq!(fg.pullback_q().unwrap(), f.pullback_q().unwrap().mul(&g.pullback_q().unwrap()).unwrap());
    }

    #[test]
    fn division_round_trip(f in series(), g in nonzero_series()) {
        let q = f.mul(&g).unwrap().divide_exact(&g).unwrap();
        prop_assert!(q.prec24() > 0 || f.is_zero());
        prop_assert!(q.equals_to_precision(&f, q.prec24().min(f.prec24())));
    }

    #[test]
    fn truncation(f in series(), g in series(), p in 0i64..PREC) {
        prop_assert_eq!(f.truncate(f.prec24()), f.clone());
        let t = f.truncate(p);
        prop_assert!(t.terms().all(|(k, _)| k.n24 < p));
        prop_assert!(t.equals_to_precision(&f, p));
        // Anything at or above the precision is invisible.
        let shifted = JacobiSeries::from_terms(
            g.terms().map(|(k, c)| (ExponentKey::new(k.n24 + p, k.r2, k.s2), c.clone())),
            PREC + p,
            0,
            g.index(),
        );
        prop_assert!(f.add(&shifted.truncate(PREC)).unwrap().equals_to_precision(&f, p));
    }

    #[test]
    fn decompose_then_recombine(basis in prop::collection::vec(nonzero_series(), 1..5),
                                coeffs in prop::collection::vec(rational(), 5)) {
        let coeffs = &coeffs[..basis.len()];
        let target = recombine(&basis, coeffs).unwrap().unwrap();
        match decompose(&target, &basis, PREC).unwrap() {
            Decomposition::Solved(x) => {
                let back = recombine(&basis, &x).unwrap().unwrap();
                prop_assert!(back.equals_to_precision(&target, PREC));
            }
            Decomposition::Inconsistent { key } => prop_assert!(false, "inconsistent at {:?}", key),
        }
        let rank = series_rank(&basis, PREC);
        prop_assert!(rank <= basis.len());
        prop_assert!(series_rank(&basis, PREC / 2) <= rank);
    }

    #[test]
    fn generator_weights_invariants(m in index_matrix(8)) {
        let w = generator_weights(m);
        for p in m.anharmonic_orbit() {
            prop_assert_eq!(generator_weights(p), w.clone());
        }
        if m.det() > 0 {
            prop_assert_eq!(w.eval_one(), m.det());
        }
        prop_assert!(w.terms().all(|(_, c)| c > 0));
        prop_assert_eq!(w.min_exponent(), Some(m.min_weight()));
        // Dimensions vanish below the minimal weight.
        prop_assert_eq!(dim_weak(m.min_weight() - 1, m), 0);
        prop_assert_eq!(dim_weak(m.min_weight(), m), 1);
    }

    #[test]
    fn index_bookkeeping(m in index_matrix(20)) {
        let (r, p) = m.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(m.permute(p), r);
        prop_assert!(m.anharmonic_orbit().contains(&r));
        let (a, b, c) = m.gram();
        prop_assert_eq!(IndexMatrix::from_gram(a, b, c).unwrap(), m);
        prop_assert_eq!(m.to_string().parse::<IndexMatrix>().unwrap(), m);
        prop_assert_eq!(Gram::from(m).det(), m.det());
    }

    #[test]
    fn rational_text_round_trip(r in rational()) {
        prop_assert_eq!(r.to_string().parse::<Rational>().unwrap(), r.clone());
        prop_assert_eq!(r.to_fraction_string().parse::<Rational>().unwrap(), r);
    }
}
