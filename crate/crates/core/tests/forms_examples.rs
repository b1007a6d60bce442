use jacobi_core::forms::{
    self, embed, heat, serre, theta_derivative, BaseForm, Embedding, FormCache, FormSpec,
};
use jacobi_core::{
    Error, ExponentKey, Gram, IndexMatrix, JacobiSeries, Rational, SeriesIndex, Substitution,
};

const P: i64 = 144;

fn named(name: &str) -> JacobiSeries {
    forms::build_named(name, P).unwrap()
}

fn r(n: i64) -> Rational {
    Rational::from_int(n)
}

/// `(r2, s2, coefficient)` of the lowest slice, sorted.
fn lowest(f: &JacobiSeries) -> Vec<(i64, i64, Rational)> {
    let v = f.valuation24().unwrap();
    f.slice(v).map(|(k, c)| (k.r2, k.s2, c.clone())).collect()
}

fn value_at_zero(f: &JacobiSeries) -> JacobiSeries {
    embed(f, Embedding::W).unwrap().pullback_q().unwrap()
}

#[test]
fn phi_minus_two_is_a_square() {
    let phi = named("phi_-1_1/2");
    assert_eq!(phi.pow(2).unwrap(), named("phi_-2_1"));
}

#[test]
fn valuations() {
    let theta = forms::theta(P);
    assert_eq!(theta.valuation(), Some(Rational::new(1, 8)));
    assert_eq!(
        forms::eta_power(3, P).unwrap().valuation(),
        Some(Rational::new(1, 8))
    );
    assert_eq!(
        JacobiSeries::zero(P, 0, SeriesIndex::rank_one(0)).valuation(),
        None
    );
    assert_eq!(forms::eta_power(0, P).unwrap(), JacobiSeries::one(P, 1));
}

#[test]
fn inverse_of_eta() {
    let eta = forms::eta_power(1, P).unwrap();
    let inv = eta.invert_unit().unwrap();
    assert_eq!(inv.valuation24(), Some(-1));
    let first: Vec<_> = inv
        .terms()
        .take(3)
        .map(|(k, c)| (k.n24, c.clone()))
        .collect();
    assert_eq!(first, [(-1, r(1)), (23, r(1)), (47, r(2))]);
    let one = eta.mul(&inv).unwrap();
    assert!(one.equals_to_precision(&JacobiSeries::one(one.prec24(), 1), one.prec24()));
    assert!(matches!(
        forms::theta(P).invert_unit(),
        Err(Error::NotUnitLed)
    ));
}

#[test]
fn theta_quotient() {
    let theta = forms::theta(P);
    let theta2 = theta.scale_z(2).unwrap();
    assert_eq!(theta2.index(), SeriesIndex::rank_one(4));
    let q = theta2.divide_exact(&theta).unwrap();
    assert_eq!(lowest(&q), [(-1, 0, r(1)), (1, 0, r(1))]);
    assert!(q.equals_to_precision(&named("phi_0_3/2"), q.prec24()));
    assert!(matches!(
        theta.divide_exact(&theta2),
        Err(Error::NotDivisible { .. })
    ));
    assert_eq!(theta.scale_z(1).unwrap(), theta);
    let phi2 = named("phi_-1_1/2").scale_z(2).unwrap();
    assert_eq!(phi2.valuation24(), Some(0));
    assert_eq!(lowest(&phi2), [(-2, 0, r(-1)), (2, 0, r(1))]);
}

#[test]
fn jacobi_identity_from_theta_derivative() {
    let eta3 = forms::eta_power(3, P).unwrap();
    // D theta at z = 0 is eta^3, so the (2D) derivative used in the
    // log-derivative constructions gives 2 eta^3 there.
    let d = value_at_zero(&forms::theta(P).dz());
    assert!(d.equals_to_precision(&eta3, P));
    let d1 = value_at_zero(&theta_derivative(1, P));
    assert!(d1.equals_to_precision(&eta3.scale(&r(2)), P));
    assert_eq!(theta_derivative(0, P), forms::theta(P));
    let d2 = theta_derivative(2, P);
    assert_eq!(d2.valuation24(), Some(3));
    assert_eq!(lowest(&d2), [(-1, 0, r(-1)), (1, 0, r(1))]);
}

#[test]
fn point_values() {
    let phi = named("phi_0_1");
    assert_eq!(phi.coeff(ExponentKey::new(0, 0, 0)), Some(r(10)));
    let along_diagonal = embed(&phi, Embedding::ZW).unwrap();
    assert_eq!(along_diagonal.pullback_q().unwrap(), phi);
    let at_zero = value_at_zero(&phi);
    assert_eq!(at_zero.coeff(ExponentKey::new(0, 0, 0)), Some(r(12)));
    // phi_0_1(tau, 0) = 12 exactly.
    assert_eq!(at_zero.len(), 1);
    // On w = -z, f(z + w) is the constant f(tau, 0).
    let p = along_diagonal.pullback_p().unwrap();
    assert_eq!(p, at_zero);
}

#[test]
fn embeddings_and_swaps() {
    let phi = named("phi_0_3/2");
    let z = embed(&phi, Embedding::Z).unwrap();
    let w = embed(&phi, Embedding::W).unwrap();
    assert_eq!(z.substitute(Substitution::Swap).unwrap(), w);
    assert_eq!(z.index(), SeriesIndex::from(IndexMatrix::new(3, 0, 0)));
    assert_eq!(w.index(), SeriesIndex::from(IndexMatrix::new(0, 0, 3)));
    assert_eq!(
        embed(&phi, Embedding::ZW).unwrap().index(),
        SeriesIndex::from(IndexMatrix::new(0, 3, 0))
    );
    let back = w
        .substitute(Substitution::Swap)
        .unwrap()
        .substitute(Substitution::Swap)
        .unwrap();
    assert_eq!(back, w);
}

#[test]
fn a2_forms_under_substitution() {
    let f = named("Phi_-2_A2");
    let g = f.substitute(Substitution::SumNegW).unwrap();
    assert_eq!(g.index(), f.index());
    assert_eq!(g, f);
    // The weight -3 form is odd under (z, w) -> (z + w, -w).
    let f3 = named("Phi_-3_A2");
    assert_eq!(f3.substitute(Substitution::SumNegW).unwrap(), f3.neg());
}

#[test]
fn substitution_permutes_index() {
    let m = IndexMatrix::new(1, 2, 3);
    let g = Gram::from(m);
    let cases = [
        (Substitution::SumNegW, [1, 0, 2]),
        (Substitution::WNegSum, [1, 2, 0]),
        (Substitution::Swap, [2, 1, 0]),
        (Substitution::SumNegZ, [2, 0, 1]),
    ];
    for (s, p) in cases {
        assert_eq!(
            g.transform(s.matrix()).to_index_matrix().unwrap(),
            m.permute(p),
            "{s:?}"
        );
    }
}

#[test]
fn heat_and_serre_rows() {
    let phi = named("phi_-2_1");
    let h = heat(&phi, SeriesIndex::rank_one(2)).unwrap();
    assert_eq!(
        lowest(&h),
        [(-2, 0, Rational::new(-1, 4)), (2, 0, Rational::new(-1, 4))]
    );
    let s = serre(&phi, &r(-2), SeriesIndex::rank_one(2)).unwrap();
    let e = Rational::new(-1, 24);
    assert_eq!(
        lowest(&s),
        [(-2, 0, e.clone()), (0, 0, &e * &r(10)), (2, 0, e)]
    );
    let degenerate = SeriesIndex::RankTwo(Gram::new(2, 2, 2));
    let a2 = named("Phi_-2_A2");
    assert!(heat(&a2, degenerate).is_err());
    let zero = serre(&a2, &r(-2), a2.index()).unwrap().scale(&r(-12));
    assert_eq!(zero, named("Phi_0_A2"));
}

#[test]
fn theta_blocks() {
    let mut cache = FormCache::new(P);
    assert_eq!(cache.theta_block(1, 1, 1).unwrap(), named("Phi_-3_A2"));
    let b = cache.theta_block(2, 0, 0).unwrap();
    assert_eq!(b, embed(&named("phi_-2_1"), Embedding::Z).unwrap());
    let plus = cache.theta_block_plus(1, 1, 1).unwrap();
    assert_eq!(plus.weight2(), -4);
    assert_eq!(plus, named("Phi_-2_A2"));
    assert!(matches!(
        cache.theta_block_plus(0, 1, 1),
        Err(Error::VanishingThetaBlock)
    ));
}

#[test]
fn phi_0_323_row() {
    let f = named("Phi_0_323");
    let h = Rational::new(1, 2);
    let low = lowest(&f);
    assert!(low.contains(&(-3, -3, -&h)));
    assert!(low.contains(&(-3, -1, h.clone())));
    assert!(low.contains(&(-1, -1, &h * &r(11))));
    // Even weight: symmetric under (z, w) -> (-z, -w).
    for (a, b, c) in &low {
        assert!(low.contains(&(-a, -b, c.clone())));
    }
}

#[test]
fn every_catalog_form_is_weak() {
    let mut cache = FormCache::new(P);
    for b in BaseForm::ALL {
        let f = cache.get(&FormSpec::new(b)).unwrap();
        assert!(f.valuation24().is_some_and(|v| v >= 0), "{}", b.name());
        if b.rank() == 1 && b != BaseForm::Eta && b != BaseForm::Theta {
            // zeta -> 1/zeta acts by (-1)^k.
            let sign = if f.weight2() % 4 == 0 { 1 } else { -1 };
            for (k, c) in f.terms() {
                let m = f.coeff(ExponentKey::new(k.n24, -k.r2, 0)).unwrap();
                assert_eq!(m, c * &r(sign), "{}", b.name());
            }
        }
    }
}

#[test]
fn odd_lattice_variants() {
    for name in ["Phi_0_323", "Phi_0_313"] {
        let f = named(name);
        let m = f.index().gram().unwrap().to_index_matrix().unwrap();
        let one = named(&format!("{name}|sub1"));
        let two = named(&format!("{name}|sub2"));
        assert_eq!(one.index(), SeriesIndex::from(m.permute([1, 0, 2])));
        assert_eq!(two.index(), SeriesIndex::from(m.permute([2, 0, 1])));
        let back = one
            .substitute(Substitution::SumNegW.inverse().unwrap())
            .unwrap();
        assert_eq!(back, f);
    }
}
