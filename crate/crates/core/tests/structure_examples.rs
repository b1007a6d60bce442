use jacobi_core::dimension::dim_weak;
use jacobi_core::forms::{embed, BaseForm, Embedding, FormCache, FormSpec};
use jacobi_core::structure::{
    decompose, enumerate_monomials, recombine, series_rank, span_rank, verify_dimension,
    Decomposition, Expander, GeneratorCatalog,
};
use jacobi_core::{IndexMatrix, JacobiSeries, Rational, SeriesIndex, Substitution};

const P: i64 = 144;

fn solved(d: Decomposition) -> Vec<Rational> {
    match d {
        Decomposition::Solved(x) => x,
        Decomposition::Inconsistent { key } => panic!("inconsistent at {key:?}"),
    }
}

#[test]
fn product_identity_decomposes() {
    let mut cache = FormCache::new(P);
    let mut get = |b, e| cache.get(&FormSpec::embedded(b, e)).unwrap();
    let plus = get(BaseForm::PhiM1Half, Embedding::ZW);
    let minus = get(BaseForm::PhiM1Half, Embedding::Z)
        .substitute(Substitution::Matrix([[1, -1], [0, 1]]))
        .unwrap();
    let target = plus.mul(&minus).unwrap();
    assert_eq!(target.index(), SeriesIndex::from(IndexMatrix::new(2, 0, 2)));
    let basis = [
        get(BaseForm::PhiM2_1, Embedding::Z)
            .mul(&get(BaseForm::Phi0_1, Embedding::W))
            .unwrap(),
        get(BaseForm::Phi0_1, Embedding::Z)
            .mul(&get(BaseForm::PhiM2_1, Embedding::W))
            .unwrap(),
    ];
    let x = solved(decompose(&target, &basis, P).unwrap());
    assert_eq!(x, [Rational::new(1, 12), Rational::new(-1, 12)]);
    let back = recombine(&basis, &x).unwrap().unwrap();
    assert!(back.equals_to_precision(&target, P));
}

#[test]
fn weight_minus_three_a2_form_is_a_product() {
    let catalog = GeneratorCatalog::full();
    let monomials = enumerate_monomials(-3, IndexMatrix::A2, &catalog);
    assert_eq!(monomials.len(), 1);
    assert_eq!(
        monomials[0].display(&catalog).to_string(),
        "phi_-1_1/2@z * phi_-1_1/2@w * phi_-1_1/2@zw"
    );
    let mut ex = Expander::new(&catalog, P);
    let basis = [ex.expand(&monomials[0]).unwrap()];
    let target = FormSpec::new(BaseForm::PhiM3A2).build(P).unwrap();
    assert_eq!(
        solved(decompose(&target, &basis, P).unwrap()),
        [Rational::one()]
    );
}

#[test]
fn pullback_decomposes_over_square() {
    let target = FormSpec::new(BaseForm::Phi0_313)
        .build(P)
        .unwrap()
        .pullback_p()
        .unwrap();
    let phi = FormSpec::new(BaseForm::Phi0_1).build(P).unwrap();
    let basis = [phi.mul(&phi).unwrap()];
    assert_eq!(
        solved(decompose(&target, &basis, P).unwrap()),
        [Rational::one()]
    );
}

#[test]
fn inconsistent_target_reports_a_key() {
    // A basis element with one coefficient perturbed leaves the span.
    let mut cache = FormCache::new(P);
    let f = cache
        .get(&FormSpec::embedded(BaseForm::Phi0_1, Embedding::Z))
        .unwrap();
    let g = cache
        .get(&FormSpec::embedded(BaseForm::Phi0_1, Embedding::W))
        .unwrap();
    let basis = [f.mul(&g).unwrap()];
    let bump = JacobiSeries::monomial(
        Rational::one(),
        jacobi_core::ExponentKey::new(48, 0, 0),
        P,
        0,
        SeriesIndex::from(IndexMatrix::new(2, 0, 2)),
    );
    let target = basis[0].add(&bump).unwrap();
    match decompose(&target, &basis, P).unwrap() {
        Decomposition::Inconsistent { key } => assert!(key.n24 <= 48),
        Decomposition::Solved(x) => panic!("unexpected solution {x:?}"),
    }
    // Mismatched metadata is an error, not an inconsistency.
    assert!(decompose(&f, &basis, P).is_err());
}

#[test]
fn span_rank_examples() {
    let catalog = GeneratorCatalog::full();
    let mut ex = Expander::new(&catalog, P);
    let ms = enumerate_monomials(0, IndexMatrix::A2, &catalog);
    assert_eq!(ms.len(), 1);
    assert_eq!(span_rank(&ms, 96, &mut ex).unwrap(), 1);
    let twice = [ms[0].clone(), ms[0].clone()];
    assert_eq!(span_rank(&twice, 96, &mut ex).unwrap(), 1);
    let ms = enumerate_monomials(-2, IndexMatrix::A2, &catalog);
    assert_eq!(span_rank(&ms, P, &mut ex).unwrap(), 1);
    assert_eq!(dim_weak(-2, IndexMatrix::A2), 1);
    assert!(enumerate_monomials(-5, IndexMatrix::new(0, 0, 1), &catalog).is_empty());
}

#[test]
fn verify_dimension_examples() {
    for (k, expected) in [(0, 1), (-3, 1), (-1, 0), (-2, 1)] {
        let r = verify_dimension(k, IndexMatrix::A2, P).unwrap();
        assert_eq!((r.rank as u64, r.dim), (expected, expected), "k = {k}");
        assert!(r.passed());
        assert_eq!(r.recheck, Some((P + 24, expected as usize)));
    }
}

#[test]
fn even_catalog_spans_even_index() {
    let catalog = GeneratorCatalog::even();
    let mut ex = Expander::new(&catalog, P);
    let m = IndexMatrix::new(2, 0, 2);
    for k in [-4, -2, 0, 2] {
        let ms = enumerate_monomials(k, m, &catalog);
        assert_eq!(
            span_rank(&ms, P, &mut ex).unwrap() as u64,
            dim_weak(k, m),
            "k = {k}"
        );
    }
}

#[test]
fn rank_is_monotone_in_precision() {
    let catalog = GeneratorCatalog::full();
    let mut ex = Expander::new(&catalog, P);
    let m = IndexMatrix::new(1, 2, 1);
    for k in -4..=2 {
        let ms = enumerate_monomials(k, m, &catalog);
        let series: Vec<_> = ms.iter().map(|x| ex.expand(x).unwrap()).collect();
        let ranks: Vec<_> = (1..=6).map(|p| series_rank(&series, 24 * p)).collect();
        assert!(ranks.windows(2).all(|w| w[0] <= w[1]), "k = {k}: {ranks:?}");
    }
}

#[test]
fn embedded_generators_match_catalog_indices() {
    let catalog = GeneratorCatalog::full();
    let mut ex = Expander::new(&catalog, 48);
    for (i, g) in catalog.generators().iter().enumerate() {
        let f = ex.generator(i).unwrap();
        assert_eq!(f.weight2(), 2 * g.weight, "{}", g.spec);
        assert_eq!(f.index(), SeriesIndex::from(g.index), "{}", g.spec);
    }
    let z = embed(
        &FormSpec::new(BaseForm::E4).build(48).unwrap(),
        Embedding::Z,
    )
    .unwrap();
    assert_eq!(z.index(), SeriesIndex::from(IndexMatrix::ZERO));
}
