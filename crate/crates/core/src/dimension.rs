//! Dimensions of spaces of weak Jacobi forms of rank-two index.
//!
//! For an index `(a, b, c)` the weak forms of all weights are a free module
//! over `C[E4, E6]`, and the weights of a basis are recorded by a Laurent
//! polynomial `t^k1 + ... + t^kn`. This module evaluates that polynomial in
//! two independent ways: by the closed formula in the `P_a`, `Q_a`
//! polynomials ([`generator_weights`]) and as a coefficient of the
//! four-variable generating function `F(q, r, s, t)` ([`f_coefficient`]).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::{Error, IndexMatrix, Result};

/// Laurent polynomial in `t` with integer coefficients; no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolyT {
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPolyT {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(e: i64, c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// `t^lo + t^(lo+1) + ... + t^hi`, zero when `lo > hi`.
    pub fn range(lo: i64, hi: i64) -> Self {
        Self::from_terms((lo..=hi).map(|e| (e, 1)))
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: i64) {
        if c == 0 {
            return;
        }
        let v = self.coeffs.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Value at `t = 1`.
    pub fn eval_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (e, c) in o.terms() {
            p.add_term(e, c);
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }

    /// `t^k * self`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e + k, c)))
    }

    /// Exact quotient, or `None` if `d` does not divide `self` or is zero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dlo, dhi) = (d.min_exponent()?, d.max_exponent()?);
        let lead = d.coeff(dhi);
        let floor = self.min_exponent().unwrap_or(0);
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(top) = rem.max_exponent() {
            let c = rem.coeff(top);
            let e = top - dhi;
            if c % lead != 0 || e + dlo < floor {
                return None;
            }
            let q = c / lead;
            quot.add_term(e, q);
            rem = rem.sub(&d.shift(e).scale(q));
        }
        Some(quot)
    }

    /// One `"exponent: coefficient"` line per term, ascending.
    pub fn lines(&self) -> String {
        let mut s = String::new();
        for (e, c) in self.terms() {
            let _ = writeln!(s, "t^{e}: {c}");
        }
        s
    }
}

impl fmt::Display for LaurentPolyT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let (neg, mag) = (c < 0, c.abs());
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (mag, e) {
                (m, 0) => write!(f, "{m}")?,
                (1, 1) => f.write_str("t")?,
                (1, e) => write!(f, "t^{e}")?,
                (m, 1) => write!(f, "{m} t")?,
                (m, e) => write!(f, "{m} t^{e}")?,
            }
        }
        Ok(())
    }
}

/// `P_0 = 1`, `P_1 = t^-1`, `P_a = t^-a + t^(2-a) + ... + 1` for `a >= 2`.
pub fn p_poly(a: i64) -> Result<LaurentPolyT> {
    match a {
        a if a < 0 => Err(Error::Parse(alloc::format!("P_a needs a >= 0, got {a}"))),
        0 => Ok(LaurentPolyT::one()),
        1 => Ok(LaurentPolyT::monomial(-1, 1)),
        a => Ok(LaurentPolyT::monomial(-a, 1).add(&LaurentPolyT::range(2 - a, 0))),
    }
}

/// `Q_-1 = Q_0 = 0`, `Q_a = t^(1-a) + ... + 1` for `a >= 1`.
pub fn q_poly(a: i64) -> Result<LaurentPolyT> {
    match a {
        a if a < -1 => Err(Error::Parse(alloc::format!("Q_a needs a >= -1, got {a}"))),
        a => Ok(LaurentPolyT::range(1 - a, 0)),
    }
}

/// Weights of a free `C[E4, E6]`-basis of weak forms of index `(a, b, c)`,
/// as `t^k1 + ... + t^kn`.
pub fn generator_weights(m: IndexMatrix) -> LaurentPolyT {
    let (a, b, c) = m.triple();
    let p = |x| p_poly(x).expect("nonnegative");
    let q = |x| q_poly(x).expect("at least -1");
    let t_inv = LaurentPolyT::monomial(-1, 1);
    let two_t_inv_minus_one = LaurentPolyT::from_terms([(-1, 2), (0, -1)]);

    let mut out = p(a).mul(&p(b)).mul(&p(c));
    out = out.add(&q(a).mul(&q(b)).mul(&q(c)));
    out = out.add(
        &two_t_inv_minus_one
            .mul(&q(a - 1))
            .mul(&q(b - 1))
            .mul(&q(c - 1)),
    );
    let mixed = q(a)
        .mul(&q(b - 1))
        .mul(&q(c - 1))
        .add(&q(a - 1).mul(&q(b)).mul(&q(c - 1)))
        .add(&q(a - 1).mul(&q(b - 1)).mul(&q(c)));
    out = out.sub(&t_inv.mul(&mixed));
    if a * b * c != 0 {
        out.add_term(1 - a - b - c, 1);
    }
    out
}

/// Truncated power series in `q, r, s` with [`LaurentPolyT`] coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriSeries {
    bound: (usize, usize, usize),
    coeffs: Vec<LaurentPolyT>,
}

impl TriSeries {
    /// The zero series keeping exponents up to `bound` in each variable.
    pub fn zero(bound: (usize, usize, usize)) -> Self {
        let n = (bound.0 + 1) * (bound.1 + 1) * (bound.2 + 1);
        TriSeries {
            bound,
            coeffs: alloc::vec![LaurentPolyT::zero(); n],
        }
    }

    fn slot(&self, i: usize, j: usize, k: usize) -> usize {
        (i * (self.bound.1 + 1) + j) * (self.bound.2 + 1) + k
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &LaurentPolyT {
        &self.coeffs[self.slot(i, j, k)]
    }

    /// Adds `p q^i r^j s^k`; ignored beyond the bound.
    pub fn add_term(&mut self, i: usize, j: usize, k: usize, p: &LaurentPolyT) {
        if i <= self.bound.0 && j <= self.bound.1 && k <= self.bound.2 {
            let s = self.slot(i, j, k);
            self.coeffs[s] = self.coeffs[s].add(p);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (x, y) in out.coeffs.iter_mut().zip(&o.coeffs) {
            *x = x.add(y);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (bi, bj, bk) = self.bound;
        let mut out = Self::zero(self.bound);
        for i1 in 0..=bi {
            for j1 in 0..=bj {
                for k1 in 0..=bk {
                    let x = self.coeff(i1, j1, k1);
                    if x.is_zero() {
                        continue;
                    }
                    for i2 in 0..=bi - i1 {
                        for j2 in 0..=bj - j1 {
                            for k2 in 0..=bk - k1 {
                                let y = o.coeff(i2, j2, k2);
                                if !y.is_zero() {
                                    out.add_term(i1 + i2, j1 + j2, k1 + k2, &x.mul(y));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `sum_n (x t^shift)^n` in the variable with position `var`
    /// (0 for q, 1 for r, 2 for s).
    pub fn geometric(bound: (usize, usize, usize), var: usize, shift: i64) -> Self {
        let mut out = Self::zero(bound);
        let top = [bound.0, bound.1, bound.2][var];
        for n in 0..=top {
            let mut e = [0usize; 3];
            e[var] = n;
            out.add_term(
                e[0],
                e[1],
                e[2],
                &LaurentPolyT::monomial(shift * n as i64, 1),
            );
        }
        out
    }
}

/// Expansion of `F(q, r, s, t)` to order `bound` in `q, r, s`, where
/// `F / ((1 - t^4)(1 - t^6))` is the Hilbert series of weak forms of all
/// rank-two indices.
pub fn f_series(bound: (usize, usize, usize)) -> TriSeries {
    let geo = |var, shift| TriSeries::geometric(bound, var, shift);
    let mono = |i, j, k, e, c| {
        let mut s = TriSeries::zero(bound);
        s.add_term(i, j, k, &LaurentPolyT::monomial(e, c));
        s
    };

    // q r s t^-2 / prod (1 - x t^-1)
    let first = mono(1, 1, 1, -2, 1)
        .mul(&geo(0, -1))
        .mul(&geo(1, -1))
        .mul(&geo(2, -1));

    let quad = |var: usize| {
        let mut s = TriSeries::zero(bound);
        for (n, c) in [(0usize, 1i64), (1, -1), (2, 1)] {
            let mut e = [0usize; 3];
            e[var] = n;
            s.add_term(e[0], e[1], e[2], &LaurentPolyT::monomial(0, c));
        }
        s
    };
    let mut numer = quad(0).mul(&quad(1)).mul(&quad(2));
    // - q r s t^-1 (q r + q s + r s - 2 q r s) + q r s (1 - q r s)
    for (i, j, k, e, c) in [
        (2, 2, 1, -1, -1),
        (2, 1, 2, -1, -1),
        (1, 2, 2, -1, -1),
        (2, 2, 2, -1, 2),
        (1, 1, 1, 0, 1),
        (2, 2, 2, 0, -1),
    ] {
        numer.add_term(i, j, k, &LaurentPolyT::monomial(e, c));
    }
    let mut second = numer;
    for var in 0..3 {
        second = second.mul(&geo(var, 0)).mul(&geo(var, -1));
    }
    first.add(&second)
}

/// Coefficient of `q^a r^b s^c` in `F`.
pub fn f_coefficient(m: IndexMatrix) -> LaurentPolyT {
    let bound = (m.a as usize, m.b as usize, m.c as usize);
    f_series(bound).coeff(bound.0, bound.1, bound.2).clone()
}

/// `F`-coefficients for every index with entries up to the given bounds.
pub fn hilbert_table(bound: IndexMatrix) -> BTreeMap<IndexMatrix, LaurentPolyT> {
    let b = (bound.a as usize, bound.b as usize, bound.c as usize);
    let f = f_series(b);
    let mut out = BTreeMap::new();
    for i in 0..=b.0 {
        for j in 0..=b.1 {
            for k in 0..=b.2 {
                out.insert(
                    IndexMatrix::new(i as u32, j as u32, k as u32),
                    f.coeff(i, j, k).clone(),
                );
            }
        }
    }
    out
}

/// Number of `(i, j) >= 0` with `4i + 6j = n`.
fn eisenstein_monomials(n: i64) -> i64 {
    if n < 0 {
        return 0;
    }
    (0..=n / 6).filter(|j| (n - 6 * j) % 4 == 0).count() as i64
}

/// `dim J^w_{k, M}`: coefficient of `t^k` in the generator weights times
/// `1/((1 - t^4)(1 - t^6))`.
pub fn dim_weak(k: i64, m: IndexMatrix) -> u64 {
    dim_from_numerator(k, &generator_weights(m))
}

/// Coefficient of `t^k` in `numerator / ((1 - t^4)(1 - t^6))`.
pub fn dim_from_numerator(k: i64, numerator: &LaurentPolyT) -> u64 {
    let d: i64 = numerator
        .terms()
        .map(|(e, c)| c * eisenstein_monomials(k - e))
        .sum();
    u64::try_from(d).expect("dimension is nonnegative")
}

/// Numerator of the rank-one Hilbert series at index `a/2`, computed as
/// `(t^-a - t^(1-a) + t^(2-a) - t) / (1 - t)` for `a >= 1` and `1` for
/// `a = 0`.
pub fn rank_one_numerator(a: u32) -> LaurentPolyT {
    if a == 0 {
        return LaurentPolyT::one();
    }
    let a = a as i64;
    let top = LaurentPolyT::from_terms([(-a, 1), (1 - a, -1), (2 - a, 1), (1, -1)]);
    top.div_exact(&LaurentPolyT::from_terms([(0, 1), (1, -1)]))
        .expect("1 - t divides the numerator")
}

/// `(dim J_{k_min}, dim J_{k_min + 1}, dim J_{k_min + 2})` for
/// `k_min = -(a+b+c)`: `(1, [abc != 0], [a>=2] + [b>=2] + [c>=2])`.
pub fn min_weight_dims(m: IndexMatrix) -> (u64, u64, u64) {
    let d1 = (m.a * m.b * m.c != 0) as u64;
    let d2 = [m.a, m.b, m.c].iter().filter(|&&x| x >= 2).count() as u64;
    (1, d1, d2)
}
