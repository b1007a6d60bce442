//! Expansions checked against independent product and divisor-sum formulas.

use std::collections::BTreeMap;

use jacobi_core::forms::{self, BaseForm, FormSpec};
use jacobi_core::{ExponentKey, JacobiSeries, Rational};

const N: i64 = 16;

/// Integer polynomial in `q` and `zeta^(1/2)`, truncated below `q^N`.
/// Keys are `(n, r2)`.
#[derive(Clone, Debug, PartialEq)]
struct Poly(BTreeMap<(i64, i64), i64>);

impl Poly {
    fn one() -> Self {
        Poly(BTreeMap::from([((0, 0), 1)]))
    }

    fn from(terms: &[((i64, i64), i64)]) -> Self {
        Poly(
            terms
                .iter()
                .copied()
                .filter(|&((n, _), c)| n < N && c != 0)
                .collect(),
        )
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = BTreeMap::new();
        for (&(n1, r1), &c1) in &self.0 {
            for (&(n2, r2), &c2) in &o.0 {
                if n1 + n2 < N {
                    *out.entry((n1 + n2, r1 + r2)).or_insert(0) += c1 * c2;
                }
            }
        }
        out.retain(|_, c| *c != 0);
        Poly(out)
    }

    /// As a series with `n24 = 24 n + shift24`.
    fn to_series(&self, shift24: i64, weight2: i64, m2: i64) -> JacobiSeries {
        JacobiSeries::from_terms(
            self.0.iter().map(|(&(n, r), &c)| {
                (
                    ExponentKey::new(24 * n + shift24, r, 0),
                    Rational::from_int(c),
                )
            }),
            24 * N + shift24,
            weight2,
            jacobi_core::SeriesIndex::rank_one(m2),
        )
    }
}

/// `prod_{n>=1} (1 - q^n)`.
fn euler() -> Poly {
    (1..N).fold(Poly::one(), |acc, n| {
        acc.mul(&Poly::from(&[((0, 0), 1), ((n, 0), -1)]))
    })
}

/// `zeta^(1/2) prod_{n>=1} (1 - q^n)(1 - q^n zeta)(1 - q^(n-1) zeta^-1)`,
/// without the `q^(1/8)`.
fn triple_product(scale: i64) -> Poly {
    let mut p = Poly::from(&[((0, scale), 1)]);
    for n in 1..=N {
        p = p
            .mul(&Poly::from(&[((0, 0), 1), ((n, 0), -1)]))
            .mul(&Poly::from(&[((0, 0), 1), ((n, 2 * scale), -1)]))
            .mul(&Poly::from(&[((0, 0), 1), ((n - 1, -2 * scale), -1)]));
    }
    p
}

fn sigma(n: i64, k: u32) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d.pow(k)).sum()
}

fn eisenstein_oracle(c: i64, k: u32) -> JacobiSeries {
    let mut terms = vec![((0, 0), 1)];
    terms.extend((1..N).map(|n| ((n, 0), c * sigma(n, k))));
    Poly::from(&terms).to_series(0, 2 * (k as i64 + 1), 0)
}

fn prec() -> i64 {
    24 * N
}

#[test]
fn theta_matches_triple_product() {
    let oracle = triple_product(1).to_series(3, 1, 1);
    let theta = forms::theta(prec() + 3);
    assert_eq!(theta, oracle);
}

#[test]
fn eta_matches_euler_product() {
    let oracle = euler().to_series(1, 1, 0);
    assert_eq!(forms::eta_power(1, prec() + 1).unwrap(), oracle);
}

#[test]
fn eta_cubed_matches_jacobi_identity() {
    // eta^3 = sum_{n>=0} (-1)^n (2n + 1) q^((2n+1)^2 / 8)
    let terms: Vec<_> = (0..N)
        .map(|n| {
            (
                (n * (n + 1) / 2, 0),
                if n % 2 == 0 { 2 * n + 1 } else { -(2 * n + 1) },
            )
        })
        .collect();
    let oracle = Poly::from(&terms).to_series(3, 3, 0);
    assert_eq!(forms::eta_power(3, prec() + 3).unwrap(), oracle);
}

#[test]
fn eisenstein_series_match_divisor_sums() {
    assert_eq!(
        forms::eisenstein(2, prec()).unwrap(),
        eisenstein_oracle(-24, 1)
    );
    assert_eq!(
        forms::eisenstein(4, prec()).unwrap(),
        eisenstein_oracle(240, 3)
    );
    assert_eq!(
        forms::eisenstein(6, prec()).unwrap(),
        eisenstein_oracle(-504, 5)
    );
}

fn named(name: &str) -> JacobiSeries {
    forms::build_named(name, prec()).unwrap()
}

#[test]
fn theta_quotients_against_products() {
    let theta = triple_product(1);
    let eta6 = euler()
        .mul(&euler())
        .mul(&euler())
        .mul(&euler())
        .mul(&euler())
        .mul(&euler());
    // phi_-2_1 eta^6 = theta^2; both sides carry q^(1/4).
    let lhs = named("phi_-2_1").mul(&eta6.to_series(6, 6, 0)).unwrap();
    assert!(lhs.equals_to_precision(&theta.mul(&theta).to_series(6, 2, 2), prec()));
    // phi_0_3/2 theta(z) = theta(2z).
    let lhs = named("phi_0_3/2").mul(&theta.to_series(3, 1, 1)).unwrap();
    assert!(lhs.equals_to_precision(&triple_product(2).to_series(3, 1, 4), prec()));
    // phi_-1_1/2 eta^3 = theta.
    let eta3 = euler().mul(&euler()).mul(&euler());
    let lhs = named("phi_-1_1/2").mul(&eta3.to_series(3, 3, 0)).unwrap();
    assert!(lhs.equals_to_precision(&theta.to_series(3, 1, 1), prec()));
}

/// Coefficients of an index-1 form depend only on `4n - r^2`.
fn by_discriminant(f: &JacobiSeries) -> BTreeMap<i64, Rational> {
    let mut out: BTreeMap<i64, Rational> = BTreeMap::new();
    for (k, c) in f.terms() {
        assert_eq!(k.n24 % 24, 0);
        assert_eq!(k.r2 % 2, 0);
        let d = 4 * (k.n24 / 24) - (k.r2 / 2).pow(2);
        match out.get(&d) {
            Some(prev) => assert_eq!(prev, c, "discriminant {d}"),
            None => {
                out.insert(d, c.clone());
            }
        }
    }
    out
}

#[test]
fn index_one_forms_depend_on_discriminant() {
    let f = FormSpec::new(BaseForm::Phi0_1).build(72).unwrap();
    let d = by_discriminant(&f);
    for (disc, c) in [(-1, 1), (0, 10), (3, -64), (4, 108), (7, -513), (8, 808)] {
        assert_eq!(d[&disc], Rational::from_int(c), "phi_0_1 at {disc}");
    }
    let f = FormSpec::new(BaseForm::PhiM2_1).build(72).unwrap();
    let d = by_discriminant(&f);
    for (disc, c) in [(-1, 1), (0, -2), (3, 8), (4, -12), (7, 39), (8, -56)] {
        assert_eq!(d[&disc], Rational::from_int(c), "phi_-2_1 at {disc}");
    }
}

#[test]
fn discriminant_from_eisenstein_series() {
    // 1728 eta^24 = E4^3 - E6^2, with eta^24 from the Euler product.
    let mut delta = Poly::one();
    for _ in 0..24 {
        delta = delta.mul(&euler());
    }
    let delta = delta.to_series(24, 24, 0).truncate(prec());
    let e4 = eisenstein_oracle(240, 3);
    let e6 = eisenstein_oracle(-504, 5);
    let lhs = e4.pow(3).unwrap().sub(&e6.pow(2).unwrap()).unwrap();
    assert!(lhs.equals_to_precision(&delta.scale(&Rational::from_int(1728)), prec()));
}
