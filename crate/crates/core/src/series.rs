//! Truncated Fourier-Jacobi expansions with exact rational coefficients.
//!
//! A [`JacobiSeries`] stores the coefficients `c(n, r, s)` of
//! `q^n zeta^r omega^s` for every `n` below a guaranteed precision. The
//! exponent grid is fixed: `n` in `(1/24)Z` and `r, s` in `(1/2)Z`, stored
//! as the scaled integers `n24 = 24 n`, `r2 = 2 r`, `s2 = 2 s`. Eta powers
//! need the `1/24`, theta needs `q^(1/8)` and `zeta^(1/2)`.
//!
//! Every operation computes the best precision it can prove and never
//! returns coefficients past it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::poly::{self, Slice};
use crate::{Error, IndexMatrix, Rational, Result};

/// Scaled exponent triple of a single term `q^(n24/24) zeta^(r2/2) omega^(s2/2)`.
///
/// Ordering is lexicographic in `(n24, r2, s2)`, which is also the order
/// of terms in the JSON format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentKey {
    pub n24: i64,
    pub r2: i64,
    pub s2: i64,
}

impl ExponentKey {
    pub const fn new(n24: i64, r2: i64, s2: i64) -> Self {
        ExponentKey { n24, r2, s2 }
    }
}

/// Symmetric Gram matrix `[[xx, xy], [xy, yy]]`.
///
/// Series carry their index as a raw Gram matrix so that intermediate
/// products such as `f(z - w)` (off-diagonal entry `-1`) can be formed;
/// [`IndexMatrix`] is the `(a, b, c)` view of the ones that are index
/// matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gram {
    pub xx: i64,
    pub xy: i64,
    pub yy: i64,
}

impl Gram {
    pub const ZERO: Gram = Gram {
        xx: 0,
        xy: 0,
        yy: 0,
    };

    pub const fn new(xx: i64, xy: i64, yy: i64) -> Self {
        Gram { xx, xy, yy }
    }

    pub fn det(&self) -> i64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn is_positive_definite(&self) -> bool {
        self.xx > 0 && self.det() > 0
    }

    /// Index of `f(U x)` when `f` has this index: `U^T M U`.
    pub fn transform(&self, u: [[i64; 2]; 2]) -> Gram {
        let m = [[self.xx, self.xy], [self.xy, self.yy]];
        let mut mu = [[0i64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                mu[i][j] = m[i][0] * u[0][j] + m[i][1] * u[1][j];
            }
        }
        let entry = |i: usize, j: usize| u[0][i] * mu[0][j] + u[1][i] * mu[1][j];
        Gram::new(entry(0, 0), entry(0, 1), entry(1, 1))
    }

    pub fn to_index_matrix(&self) -> Result<IndexMatrix> {
        IndexMatrix::from_gram(self.xx, self.xy, self.yy)
    }
}

impl core::ops::Add for Gram {
    type Output = Gram;
    fn add(self, o: Gram) -> Gram {
        Gram::new(self.xx + o.xx, self.xy + o.xy, self.yy + o.yy)
    }
}

impl core::ops::Neg for Gram {
    type Output = Gram;
    fn neg(self) -> Gram {
        Gram::new(-self.xx, -self.xy, -self.yy)
    }
}

impl From<IndexMatrix> for Gram {
    fn from(m: IndexMatrix) -> Gram {
        let (xx, xy, yy) = m.gram();
        Gram::new(xx, xy, yy)
    }
}

/// Index metadata of a series. The variant also fixes the rank (number of
/// elliptic variables).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesIndex {
    /// Eichler-Zagier index `m`, stored as `m2 = 2m`.
    RankOne {
        m2: i64,
    },
    RankTwo(Gram),
}

impl SeriesIndex {
    pub const fn rank_one(m2: i64) -> Self {
        SeriesIndex::RankOne { m2 }
    }

    pub fn rank(&self) -> u8 {
        match self {
            SeriesIndex::RankOne { .. } => 1,
            SeriesIndex::RankTwo(_) => 2,
        }
    }

    pub fn zero_of_rank(rank: u8) -> Self {
        if rank == 1 {
            SeriesIndex::RankOne { m2: 0 }
        } else {
            SeriesIndex::RankTwo(Gram::ZERO)
        }
    }

    fn add(self, other: SeriesIndex) -> Result<SeriesIndex> {
        match (self, other) {
            (SeriesIndex::RankOne { m2: a }, SeriesIndex::RankOne { m2: b }) => {
                Ok(SeriesIndex::RankOne { m2: a + b })
            }
            (SeriesIndex::RankTwo(a), SeriesIndex::RankTwo(b)) => Ok(SeriesIndex::RankTwo(a + b)),
            (a, b) => Err(Error::RankMismatch {
                expected: a.rank(),
                found: b.rank(),
            }),
        }
    }

    fn neg(self) -> SeriesIndex {
        match self {
            SeriesIndex::RankOne { m2 } => SeriesIndex::RankOne { m2: -m2 },
            SeriesIndex::RankTwo(g) => SeriesIndex::RankTwo(-g),
        }
    }

    pub fn gram(&self) -> Option<Gram> {
        match self {
            SeriesIndex::RankTwo(g) => Some(*g),
            SeriesIndex::RankOne { .. } => None,
        }
    }
}

impl From<IndexMatrix> for SeriesIndex {
    fn from(m: IndexMatrix) -> Self {
        SeriesIndex::RankTwo(m.into())
    }
}

/// A change of elliptic variables `(z, w) -> U (z, w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Substitution {
    /// `(z, w) -> (z + w, -w)`; permutes `(a, b, c)` to `(b, a, c)`.
    SumNegW,
    /// `(z, w) -> (w, -z - w)`; permutes `(a, b, c)` to `(b, c, a)`.
    WNegSum,
    /// `(z, w) -> (w, z)`; permutes `(a, b, c)` to `(c, b, a)`.
    Swap,
    /// `(z, w) -> (z + w, -z)`; permutes `(a, b, c)` to `(c, a, b)`.
    SumNegZ,
    /// Arbitrary integer matrix; must be unimodular.
    Matrix([[i64; 2]; 2]),
}

impl Substitution {
    pub fn matrix(&self) -> [[i64; 2]; 2] {
        match *self {
            Substitution::SumNegW => [[1, 1], [0, -1]],
            Substitution::WNegSum => [[0, 1], [-1, -1]],
            Substitution::Swap => [[0, 1], [1, 0]],
            Substitution::SumNegZ => [[1, 1], [-1, 0]],
            Substitution::Matrix(u) => u,
        }
    }

    pub fn det(&self) -> i64 {
        let u = self.matrix();
        u[0][0] * u[1][1] - u[0][1] * u[1][0]
    }

    /// The substitution undoing this one.
    pub fn inverse(&self) -> Result<Substitution> {
        let d = self.det();
        if d != 1 && d != -1 {
            return Err(Error::NotUnimodular);
        }
        let u = self.matrix();
        Ok(Substitution::Matrix([
            [d * u[1][1], -d * u[0][1]],
            [-d * u[1][0], d * u[0][0]],
        ]))
    }
}

/// Truncated Fourier-Jacobi expansion with weight and index metadata.
///
/// All terms have `n24 < prec24`, and every coefficient with `n24 < prec24`
/// is exact (absent means zero). Weight is stored doubled since theta and
/// eta have weight `1/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiSeries {
    terms: BTreeMap<ExponentKey, Rational>,
    prec24: i64,
    weight2: i64,
    index: SeriesIndex,
}

impl JacobiSeries {
    pub fn zero(prec24: i64, weight2: i64, index: SeriesIndex) -> Self {
        JacobiSeries {
            terms: BTreeMap::new(),
            prec24,
            weight2,
            index,
        }
    }

    /// The constant `1` of weight 0 and index 0.
    pub fn one(prec24: i64, rank: u8) -> Self {
        Self::monomial(
            Rational::one(),
            ExponentKey::new(0, 0, 0),
            prec24,
            0,
            SeriesIndex::zero_of_rank(rank),
        )
    }

    pub fn monomial(
        c: Rational,
        key: ExponentKey,
        prec24: i64,
        weight2: i64,
        index: SeriesIndex,
    ) -> Self {
        Self::from_terms([(key, c)], prec24, weight2, index)
    }

    /// Builds a series, summing repeated keys and discarding zero
    /// coefficients and keys at or beyond `prec24`.
    ///
    /// Panics if a rank-one series is given a nonzero `s2`.
    pub fn from_terms<I>(terms: I, prec24: i64, weight2: i64, index: SeriesIndex) -> Self
    where
        I: IntoIterator<Item = (ExponentKey, Rational)>,
    {
        let rank = index.rank();
        let mut map: BTreeMap<ExponentKey, Rational> = BTreeMap::new();
        for (k, c) in terms {
            assert!(
                rank == 2 || k.s2 == 0,
                "rank-one series with omega exponent"
            );
            if k.n24 >= prec24 || c.is_zero() {
                continue;
            }
            *map.entry(k).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        JacobiSeries {
            terms: map,
            prec24,
            weight2,
            index,
        }
    }

    pub fn prec24(&self) -> i64 {
        self.prec24
    }

    pub fn weight2(&self) -> i64 {
        self.weight2
    }

    /// Weight as a rational (theta has weight 1/2).
    pub fn weight(&self) -> Rational {
        Rational::new(self.weight2, 2)
    }

    pub fn index(&self) -> SeriesIndex {
        self.index
    }

    pub fn rank(&self) -> u8 {
        self.index.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentKey, &Rational)> + '_ {
        self.terms.iter()
    }

    /// Same coefficients with replaced metadata.
    pub fn with_metadata(mut self, weight2: i64, index: SeriesIndex) -> Self {
        assert_eq!(
            self.index.rank(),
            index.rank(),
            "with_metadata cannot change rank"
        );
        self.weight2 = weight2;
        self.index = index;
        self
    }

    /// Coefficient of `key`, or `None` when `key` lies beyond the
    /// guaranteed precision.
    pub fn coeff(&self, key: ExponentKey) -> Option<Rational> {
        (key.n24 < self.prec24).then(|| self.terms.get(&key).cloned().unwrap_or_default())
    }

    /// Terms of the `q^(n24/24)` slice.
    pub fn slice(&self, n24: i64) -> impl Iterator<Item = (&ExponentKey, &Rational)> + '_ {
        self.terms.range(
            ExponentKey::new(n24, i64::MIN, i64::MIN)..=ExponentKey::new(n24, i64::MAX, i64::MAX),
        )
    }

    pub(crate) fn slices(&self) -> BTreeMap<i64, Slice> {
        let mut out: BTreeMap<i64, Slice> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry(k.n24)
                .or_default()
                .insert((k.r2, k.s2), c.clone());
        }
        out
    }

    pub(crate) fn from_slices(
        slices: BTreeMap<i64, Slice>,
        prec24: i64,
        weight2: i64,
        index: SeriesIndex,
    ) -> Self {
        let terms = slices
            .into_iter()
            .filter(|(n, _)| *n < prec24)
            .flat_map(|(n, s)| {
                s.into_iter()
                    .map(move |((r, t), c)| (ExponentKey::new(n, r, t), c))
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        JacobiSeries {
            terms,
            prec24,
            weight2,
            index,
        }
    }

    /// Minimal `n24` with a nonzero coefficient.
    pub fn valuation24(&self) -> Option<i64> {
        self.terms.keys().next().map(|k| k.n24)
    }

    /// Minimal q-exponent with a nonzero coefficient, `None` for zero.
    pub fn valuation(&self) -> Option<Rational> {
        self.valuation24().map(|v| Rational::new(v, 24))
    }

    /// Lower bound for the true valuation: the valuation if nonzero,
    /// otherwise the precision.
    fn valuation_bound(&self) -> i64 {
        self.valuation24().unwrap_or(self.prec24)
    }

    fn check_same_metadata(&self, other: &Self) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::MetadataMismatch { field: "rank" });
        }
        if self.weight2 != other.weight2 {
            return Err(Error::MetadataMismatch { field: "weight" });
        }
        if self.index != other.index {
            return Err(Error::MetadataMismatch { field: "index" });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add_scaled(other, &Rational::from_int(-1))
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Result<Self> {
        self.check_same_metadata(other)?;
        let prec24 = self.prec24.min(other.prec24);
        let mut terms: BTreeMap<ExponentKey, Rational> = self
            .terms
            .range(..ExponentKey::new(prec24, i64::MIN, i64::MIN))
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        for (k, v) in other
            .terms
            .range(..ExponentKey::new(prec24, i64::MIN, i64::MIN))
        {
            let e = terms.entry(*k).or_default();
            *e += v * c;
            if e.is_zero() {
                terms.remove(k);
            }
        }
        Ok(JacobiSeries {
            terms,
            prec24,
            weight2: self.weight2,
            index: self.index,
        })
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from_int(-1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let terms = if c.is_zero() {
            BTreeMap::new()
        } else {
            self.terms.iter().map(|(k, v)| (*k, v * c)).collect()
        };
        JacobiSeries {
            terms,
            ..self.clone_meta()
        }
    }

    fn clone_meta(&self) -> Self {
        JacobiSeries {
            terms: BTreeMap::new(),
            prec24: self.prec24,
            weight2: self.weight2,
            index: self.index,
        }
    }

    /// Product. Weights and indices add; the result is exact below
    /// `min(f.prec24 + val(g), g.prec24 + val(f))`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: other.rank(),
            });
        }
        let index = self.index.add(other.index)?;
        let weight2 = self.weight2 + other.weight2;
        let prec24 =
            (self.prec24 + other.valuation_bound()).min(other.prec24 + self.valuation_bound());

        let a = dense_slices(self);
        let b = dense_slices(other);
        let mut out: BTreeMap<i64, Slice> = BTreeMap::new();
        let mut targets: Vec<i64> = Vec::new();
        for sa in &a {
            for sb in &b {
                let n = sa.n24 + sb.n24;
                if n >= prec24 {
                    break;
                }
                targets.push(n);
            }
        }
        targets.sort_unstable();
        targets.dedup();
        for n in targets {
            let pairs: Vec<(&DenseSlice, &DenseSlice)> = a
                .iter()
                .filter_map(|sa| {
                    b.binary_search_by_key(&(n - sa.n24), |s| s.n24)
                        .ok()
                        .map(|j| (sa, &b[j]))
                })
                .collect();
            let r0 = pairs.iter().map(|(x, y)| x.r0 + y.r0).min().unwrap();
            let r1 = pairs.iter().map(|(x, y)| x.r1 + y.r1).max().unwrap();
            let s0 = pairs.iter().map(|(x, y)| x.s0 + y.s0).min().unwrap();
            let s1 = pairs.iter().map(|(x, y)| x.s1 + y.s1).max().unwrap();
            let width = (s1 - s0 + 1) as usize;
            let mut acc = alloc::vec![Rational::zero(); (r1 - r0 + 1) as usize * width];
            for (x, y) in pairs {
                for (xr, xs, xc) in &x.terms {
                    for (yr, ys, yc) in &y.terms {
                        let i = (xr + yr - r0) as usize * width + (xs + ys - s0) as usize;
                        acc[i] += xc * yc;
                    }
                }
            }
            let slice: Slice = acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| ((r0 + (i / width) as i64, s0 + (i % width) as i64), c))
                .collect();
            if !slice.is_empty() {
                out.insert(n, slice);
            }
        }
        Ok(Self::from_slices(out, prec24, weight2, index))
    }

    /// `self^e` by repeated squaring; `self^0` is `1` with zero weight and
    /// index, at this series' precision.
    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut result = JacobiSeries::one(self.prec24, self.rank());
        if e == 0 {
            return Ok(result);
        }
        let mut base = self.clone();
        let mut e = e;
        let mut first = true;
        loop {
            if e & 1 == 1 {
                result = if first {
                    base.clone()
                } else {
                    result.mul(&base)?
                };
                first = false;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(result)
    }

    /// Multiplicative inverse of a series whose lowest q-slice is a single
    /// monomial `c q^n zeta^r omega^s`.
    pub fn invert_unit(&self) -> Result<Self> {
        let mut slices = self.slices();
        let (n0, lead) = slices.pop_first().ok_or(Error::NotUnitLed)?;
        if lead.len() != 1 {
            return Err(Error::NotUnitLed);
        }
        let (&(r0, s0), c0) = lead.iter().next().unwrap();
        let c0_inv = c0.recip();
        // u = self / (c0 x^m0) = 1 + sum_{i>0} u_i, exact below prec - n0.
        let u_prec = self.prec24 - n0;
        let units: Vec<(i64, Slice)> = slices
            .into_iter()
            .map(|(n, s)| {
                let shifted: Slice = s
                    .into_iter()
                    .map(|((r, t), c)| ((r - r0, t - s0), c * &c0_inv))
                    .collect();
                (n - n0, shifted)
            })
            .collect();
        let mut inv: BTreeMap<i64, Slice> = BTreeMap::new();
        let mut one = Slice::new();
        one.insert((0, 0), Rational::one());
        inv.insert(0, one);
        for n in 1..u_prec {
            let mut acc = Slice::new();
            for (i, ui) in &units {
                if *i > n {
                    break;
                }
                if let Some(v) = inv.get(&(n - i)) {
                    poly::add_scaled(&mut acc, &poly::mul(ui, v), &Rational::from_int(-1), (0, 0));
                }
            }
            if !acc.is_empty() {
                inv.insert(n, acc);
            }
        }
        // self^{-1} = u^{-1} / (c0 x^m0)
        let out: BTreeMap<i64, Slice> = inv
            .into_iter()
            .map(|(n, s)| {
                (
                    n - n0,
                    s.into_iter()
                        .map(|((r, t), c)| ((r - r0, t - s0), c * &c0_inv))
                        .collect(),
                )
            })
            .collect();
        Ok(Self::from_slices(
            out,
            u_prec - n0,
            -self.weight2,
            self.index.neg(),
        ))
    }

    /// Exact quotient `self / g`, computed slice by slice in increasing
    /// q-order with exact Laurent-polynomial division by the lowest slice
    /// of `g`.
    pub fn divide_exact(&self, g: &Self) -> Result<Self> {
        if self.rank() != g.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: g.rank(),
            });
        }
        let index = self.index.add(g.index.neg())?;
        let weight2 = self.weight2 - g.weight2;
        let g_slices = g.slices();
        let Some((&vg, g_lead)) = g_slices.iter().next() else {
            return Err(Error::DivisionByZero);
        };
        let Some(vf) = self.valuation24() else {
            return Ok(JacobiSeries::zero(self.prec24 - vg, weight2, index));
        };
        let vh = vf - vg;
        let prec24 = (self.prec24 - vg).min(g.prec24 - vg + vh);
        let f_slices = self.slices();
        let g_rest: Vec<(i64, &Slice)> =
            g_slices.iter().skip(1).map(|(n, s)| (n - vg, s)).collect();

        let mut h: BTreeMap<i64, Slice> = BTreeMap::new();
        for n in vh..prec24 {
            let mut rem = f_slices.get(&(n + vg)).cloned().unwrap_or_default();
            for (i, gi) in &g_rest {
                if let Some(hv) = h.get(&(n - i)) {
                    poly::add_scaled(
                        &mut rem,
                        &poly::mul(gi, hv),
                        &Rational::from_int(-1),
                        (0, 0),
                    );
                }
            }
            if rem.is_empty() {
                continue;
            }
            let q = poly::div_exact(&rem, g_lead).ok_or(Error::NotDivisible { n24: n + vg })?;
            h.insert(n, q);
        }
        Ok(Self::from_slices(h, prec24, weight2, index))
    }

    /// `(2 pi i)^{-1} d/dz`: multiplies each coefficient by its
    /// zeta-exponent. Weight goes up by one.
    pub fn dz(&self) -> Self {
        self.map_coeffs(|k, c| c * &Rational::new(k.r2, 2), self.weight2 + 2)
    }

    /// `(2 pi i)^{-1} d/dw`.
    pub fn dw(&self) -> Self {
        self.map_coeffs(|k, c| c * &Rational::new(k.s2, 2), self.weight2 + 2)
    }

    pub(crate) fn map_coeffs<F>(&self, f: F, weight2: i64) -> Self
    where
        F: Fn(&ExponentKey, &Rational) -> Rational,
    {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (*k, f(k, c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        JacobiSeries {
            terms,
            prec24: self.prec24,
            weight2,
            index: self.index,
        }
    }

    /// Relabels exponents; keys that collide are summed.
    pub(crate) fn map_keys<F>(&self, f: F, weight2: i64, index: SeriesIndex) -> Self
    where
        F: Fn(ExponentKey) -> ExponentKey,
    {
        Self::from_terms(
            self.terms.iter().map(|(k, c)| (f(*k), c.clone())),
            self.prec24,
            weight2,
            index,
        )
    }

    fn require_rank(&self, rank: u8) -> Result<()> {
        if self.rank() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                found: self.rank(),
            });
        }
        Ok(())
    }

    /// `f(tau, U(z, w))`. Exponents transform by `U^T`, the Gram matrix by
    /// `U^T M U`.
    pub fn substitute(&self, sub: Substitution) -> Result<Self> {
        self.require_rank(2)?;
        let d = sub.det();
        if d != 1 && d != -1 {
            return Err(Error::NotUnimodular);
        }
        let u = sub.matrix();
        let gram = self.index.gram().unwrap().transform(u);
        Ok(self.map_keys(
            |k| {
                ExponentKey::new(
                    k.n24,
                    u[0][0] * k.r2 + u[1][0] * k.s2,
                    u[0][1] * k.r2 + u[1][1] * k.s2,
                )
            },
            self.weight2,
            SeriesIndex::RankTwo(gram),
        ))
    }

    /// `f(tau, n z)` for a rank-one series; index `m` becomes `n^2 m`.
    pub fn scale_z(&self, n: i64) -> Result<Self> {
        self.require_rank(1)?;
        let SeriesIndex::RankOne { m2 } = self.index else {
            unreachable!()
        };
        Ok(self.map_keys(
            |k| ExponentKey::new(k.n24, n * k.r2, 0),
            self.weight2,
            SeriesIndex::RankOne { m2: n * n * m2 },
        ))
    }

    /// Restriction to `w = -z`; a rank-one series of index `(A + C - 2B)/2`.
    pub fn pullback_p(&self) -> Result<Self> {
        self.require_rank(2)?;
        let g = self.index.gram().unwrap();
        Ok(self.map_keys(
            |k| ExponentKey::new(k.n24, k.r2 - k.s2, 0),
            self.weight2,
            SeriesIndex::RankOne {
                m2: g.xx + g.yy - 2 * g.xy,
            },
        ))
    }

    /// Restriction to `w = 0`; a rank-one series of index `A/2`.
    pub fn pullback_q(&self) -> Result<Self> {
        self.require_rank(2)?;
        let g = self.index.gram().unwrap();
        Ok(self.map_keys(
            |k| ExponentKey::new(k.n24, k.r2, 0),
            self.weight2,
            SeriesIndex::RankOne { m2: g.xx },
        ))
    }

    /// Drops every term with `n24 >= prec24`. Cannot raise the precision.
    pub fn truncate(&self, prec24: i64) -> Self {
        let prec24 = prec24.min(self.prec24);
        JacobiSeries {
            terms: self
                .terms
                .range(..ExponentKey::new(prec24, i64::MIN, i64::MIN))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            prec24,
            weight2: self.weight2,
            index: self.index,
        }
    }

    /// Coefficient-wise equality of all terms with `n24 < prec24`. Returns
    /// `false` when either series is not known that far.
    pub fn equals_to_precision(&self, other: &Self, prec24: i64) -> bool {
        if prec24 > self.prec24 || prec24 > other.prec24 {
            return false;
        }
        let bound = ExponentKey::new(prec24, i64::MIN, i64::MIN);
        self.terms.range(..bound).eq(other.terms.range(..bound))
    }
}

struct DenseSlice {
    n24: i64,
    r0: i64,
    r1: i64,
    s0: i64,
    s1: i64,
    terms: Vec<(i64, i64, Rational)>,
}

fn dense_slices(f: &JacobiSeries) -> Vec<DenseSlice> {
    let mut out: Vec<DenseSlice> = Vec::new();
    for (k, c) in &f.terms {
        match out.last_mut() {
            Some(s) if s.n24 == k.n24 => {
                s.r0 = s.r0.min(k.r2);
                s.r1 = s.r1.max(k.r2);
                s.s0 = s.s0.min(k.s2);
                s.s1 = s.s1.max(k.s2);
                s.terms.push((k.r2, k.s2, c.clone()));
            }
            _ => out.push(DenseSlice {
                n24: k.n24,
                r0: k.r2,
                r1: k.r2,
                s0: k.s2,
                s1: k.s2,
                terms: alloc::vec![(k.r2, k.s2, c.clone())],
            }),
        }
    }
    out
}
