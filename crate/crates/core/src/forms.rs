//! Named forms and operators: eta powers, Eisenstein series, the Jacobi
//! theta function, rank-one and rank-two generators, theta blocks, and
//! the heat and Serre operators.
//!
//! Theta derivatives are normalized as `theta' = 2 D theta` with
//! `D = (2 pi i)^{-1} d/dz`, so that `theta'(tau, 0) = eta^3`.
//!
//! Every constructor takes a target precision `prec24` and returns a series
//! exact below it. Intermediate results are computed with a safety margin
//! and truncated at the end; [`FormCache`] shares the ingredients between
//! several forms.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::{
    Error, ExponentKey, Gram, IndexMatrix, JacobiSeries, Rational, Result, SeriesIndex,
    Substitution,
};

/// Extra `n24` computed beyond the requested precision. The largest loss
/// in any construction here is 18 (inverting `eta^9`).
const MARGIN: i64 = 48;

/// Elliptic direction of a rank-one form inside two variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Embedding {
    /// `f(tau, z)`, index `(2m, 0, 0)`.
    Z,
    /// `f(tau, w)`, index `(0, 0, 2m)`.
    W,
    /// `f(tau, z + w)`, index `(0, 2m, 0)`.
    ZW,
}

impl Embedding {
    pub const ALL: [Embedding; 3] = [Embedding::Z, Embedding::W, Embedding::ZW];

    fn suffix(&self) -> &'static str {
        match self {
            Embedding::Z => "@z",
            Embedding::W => "@w",
            Embedding::ZW => "@zw",
        }
    }
}

/// Rank-one form viewed as a function of `(z, w)`.
pub fn embed(f: &JacobiSeries, direction: Embedding) -> Result<JacobiSeries> {
    let SeriesIndex::RankOne { m2 } = f.index() else {
        return Err(Error::RankMismatch {
            expected: 1,
            found: 2,
        });
    };
    let gram = match direction {
        Embedding::Z => Gram::new(m2, 0, 0),
        Embedding::W => Gram::new(0, 0, m2),
        Embedding::ZW => Gram::new(m2, m2, m2),
    };
    Ok(f.map_keys(
        |k| match direction {
            Embedding::Z => ExponentKey::new(k.n24, k.r2, 0),
            Embedding::W => ExponentKey::new(k.n24, 0, k.r2),
            Embedding::ZW => ExponentKey::new(k.n24, k.r2, k.r2),
        },
        f.weight2(),
        SeriesIndex::RankTwo(gram),
    ))
}

fn lift_to_rank(f: JacobiSeries, rank: u8) -> Result<JacobiSeries> {
    if rank == 2 {
        embed(&f, Embedding::Z)
    } else {
        Ok(f)
    }
}

/// `eta(tau) = q^(1/24) prod (1 - q^n)`, summed with the pentagonal number
/// theorem: the exponents are `(6k - 1)^2 / 24` with sign `(-1)^k`.
fn eta(prec24: i64) -> JacobiSeries {
    let mut terms = alloc::vec::Vec::new();
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for j in if k == 0 { [0, 0] } else { [k, -k] }
            .into_iter()
            .take(if k == 0 { 1 } else { 2 })
        {
            let n24 = (6 * j - 1) * (6 * j - 1);
            if n24 < prec24 {
                any = true;
                let sign = if j % 2 == 0 { 1 } else { -1 };
                terms.push((ExponentKey::new(n24, 0, 0), Rational::from_int(sign)));
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    JacobiSeries::from_terms(terms, prec24, 1, SeriesIndex::rank_one(0))
}

fn eta_power_raw(e: i64, w: i64) -> Result<JacobiSeries> {
    let base = eta(w);
    let p = base.pow(e.unsigned_abs() as u32)?;
    if e < 0 {
        p.invert_unit()
    } else {
        Ok(p)
    }
}

/// `eta^e` for any integer `e`; valuation `e/24`.
pub fn eta_power(e: i64, prec24: i64) -> Result<JacobiSeries> {
    finish(eta_power_raw(e, prec24 + MARGIN + 2 * e.abs()), prec24)
}

fn divisor_sum(n: i64, p: u32) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d.pow(p)).sum()
}

/// Normalized Eisenstein series `E_2, E_4, E_6` with rational coefficients.
pub fn eisenstein(weight: i64, prec24: i64) -> Result<JacobiSeries> {
    let (c, p) = match weight {
        2 => (-24, 1),
        4 => (240, 3),
        6 => (-504, 5),
        k => return Err(Error::UnsupportedWeight(k)),
    };
    let n_max = (prec24 + 23).div_euclid(24);
    let terms = core::iter::once((ExponentKey::new(0, 0, 0), Rational::one())).chain(
        (1..n_max.max(1)).map(|n| {
            (
                ExponentKey::new(24 * n, 0, 0),
                Rational::from_int(c * divisor_sum(n, p)),
            )
        }),
    );
    Ok(JacobiSeries::from_terms(
        terms,
        prec24,
        2 * weight,
        SeriesIndex::rank_one(0),
    ))
}

/// `theta(tau, z) = sum_n (-1)^n q^(1/8 + n(n+1)/2) zeta^(n + 1/2)`.
/// Weight `1/2`, index `1/2`.
pub fn theta(prec24: i64) -> JacobiSeries {
    let mut terms = alloc::vec::Vec::new();
    let mut n: i64 = 0;
    loop {
        let mut any = false;
        for j in [n, -n - 1] {
            let n24 = 3 + 12 * j * (j + 1);
            if n24 < prec24 {
                any = true;
                let sign = if j.rem_euclid(2) == 0 { 1 } else { -1 };
                terms.push((
                    ExponentKey::new(n24, 2 * j + 1, 0),
                    Rational::from_int(sign),
                ));
            }
        }
        if !any {
            break;
        }
        n += 1;
    }
    JacobiSeries::from_terms(terms, prec24, 1, SeriesIndex::rank_one(1))
}

/// `(2D)^k theta`.
pub fn theta_derivative(k: u32, prec24: i64) -> JacobiSeries {
    let mut f = theta(prec24);
    for _ in 0..k {
        f = f.dz().scale(&Rational::from_int(2));
    }
    f
}

/// Heat operator: multiplies `c(n, r)` by `n - r^T M^{-1} r / 2`. The
/// index is passed explicitly; weight goes up by 2.
pub fn heat(f: &JacobiSeries, index: SeriesIndex) -> Result<JacobiSeries> {
    if index.rank() != f.rank() {
        return Err(Error::RankMismatch {
            expected: f.rank(),
            found: index.rank(),
        });
    }
    match index {
        SeriesIndex::RankOne { m2 } => {
            if m2 <= 0 {
                return Err(Error::DegenerateIndex);
            }
            Ok(f.map_coeffs(
                |k, c| c * &(Rational::new(k.n24, 24) - Rational::new(k.r2 * k.r2, 8 * m2)),
                f.weight2() + 4,
            ))
        }
        SeriesIndex::RankTwo(g) => {
            if !g.is_positive_definite() {
                return Err(Error::DegenerateIndex);
            }
            let det8 = 8 * g.det();
            Ok(f.map_coeffs(
                |k, c| {
                    let quad = g.yy * k.r2 * k.r2 - 2 * g.xy * k.r2 * k.s2 + g.xx * k.s2 * k.s2;
                    c * &(Rational::new(k.n24, 24) - Rational::new(quad, det8))
                },
                f.weight2() + 4,
            ))
        }
    }
}

/// Serre derivative `H f - (k/12 - rank/24) E_2 f` for weight `k` and the
/// given index.
pub fn serre(f: &JacobiSeries, k: &Rational, index: SeriesIndex) -> Result<JacobiSeries> {
    let h = heat(f, index)?;
    let rank = index.rank() as i64;
    let factor = k * &Rational::new(1, 12) - Rational::new(rank, 24);
    if factor.is_zero() || f.is_zero() {
        return Ok(h);
    }
    let v = f.valuation24().unwrap_or(0);
    let e2 = lift_to_rank(eisenstein(2, f.prec24() + (-v).max(0))?, f.rank())?;
    let corr = e2.mul(f)?;
    h.add_scaled(&corr, &-factor)
}

fn finish(f: Result<JacobiSeries>, prec24: i64) -> Result<JacobiSeries> {
    let f = f?;
    assert!(
        f.prec24() >= prec24,
        "precision margin too small: {} < {}",
        f.prec24(),
        prec24
    );
    Ok(f.truncate(prec24))
}

/// Rank-one and rank-two base forms, before embedding or substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseForm {
    Eta,
    E2,
    E4,
    E6,
    Theta,
    PhiM1Half,
    PhiM2_1,
    Phi0_1,
    Phi0_3Half,
    PhiM1_2,
    PhiM3A2,
    PhiM2A2,
    Phi0A2,
    Phi0_323,
    Phi0_313,
}

impl BaseForm {
    pub const ALL: [BaseForm; 15] = [
        BaseForm::Eta,
        BaseForm::E2,
        BaseForm::E4,
        BaseForm::E6,
        BaseForm::Theta,
        BaseForm::PhiM1Half,
        BaseForm::PhiM2_1,
        BaseForm::Phi0_1,
        BaseForm::Phi0_3Half,
        BaseForm::PhiM1_2,
        BaseForm::PhiM3A2,
        BaseForm::PhiM2A2,
        BaseForm::Phi0A2,
        BaseForm::Phi0_323,
        BaseForm::Phi0_313,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BaseForm::Eta => "eta",
            BaseForm::E2 => "E2",
            BaseForm::E4 => "E4",
            BaseForm::E6 => "E6",
            BaseForm::Theta => "theta",
            BaseForm::PhiM1Half => "phi_-1_1/2",
            BaseForm::PhiM2_1 => "phi_-2_1",
            BaseForm::Phi0_1 => "phi_0_1",
            BaseForm::Phi0_3Half => "phi_0_3/2",
            BaseForm::PhiM1_2 => "phi_-1_2",
            BaseForm::PhiM3A2 => "Phi_-3_A2",
            BaseForm::PhiM2A2 => "Phi_-2_A2",
            BaseForm::Phi0A2 => "Phi_0_A2",
            BaseForm::Phi0_323 => "Phi_0_323",
            BaseForm::Phi0_313 => "Phi_0_313",
        }
    }

    pub fn rank(&self) -> u8 {
        match self {
            BaseForm::PhiM3A2
            | BaseForm::PhiM2A2
            | BaseForm::Phi0A2
            | BaseForm::Phi0_323
            | BaseForm::Phi0_313 => 2,
            _ => 1,
        }
    }
}

/// Name of a form: a base form, optionally embedded (rank one) or
/// composed with a change of variables (rank two).
///
/// Written as e.g. `phi_0_1@zw` or `Phi_0_313|sub2`, where `sub1` is
/// `(z, w) -> (z + w, -w)` and `sub2` is `(z, w) -> (z + w, -z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormSpec {
    pub base: BaseForm,
    pub embed: Option<Embedding>,
    pub sub: Option<Substitution>,
}

impl FormSpec {
    pub const fn new(base: BaseForm) -> Self {
        FormSpec {
            base,
            embed: None,
            sub: None,
        }
    }

    pub const fn embedded(base: BaseForm, e: Embedding) -> Self {
        FormSpec {
            base,
            embed: Some(e),
            sub: None,
        }
    }

    pub const fn substituted(base: BaseForm, s: Substitution) -> Self {
        FormSpec {
            base,
            embed: None,
            sub: Some(s),
        }
    }

    pub fn rank(&self) -> u8 {
        if self.embed.is_some() {
            2
        } else {
            self.base.rank()
        }
    }

    /// Expansion exact below `prec24`.
    pub fn build(&self, prec24: i64) -> Result<JacobiSeries> {
        FormCache::new(prec24).get(self)
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.base.name())?;
        if let Some(e) = self.embed {
            f.write_str(e.suffix())?;
        }
        match self.sub {
            Some(Substitution::SumNegW) => f.write_str("|sub1"),
            Some(Substitution::SumNegZ) => f.write_str("|sub2"),
            Some(_) => unreachable!("only named substitutions are parsed"),
            None => Ok(()),
        }
    }
}

impl FromStr for FormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::Parse(alloc::format!("unknown form name {s:?}"));
        let (rest, sub) = match s.rsplit_once('|') {
            Some((rest, "sub1")) => (rest, Some(Substitution::SumNegW)),
            Some((rest, "sub2")) => (rest, Some(Substitution::SumNegZ)),
            Some(_) => return Err(unknown()),
            None => (s, None),
        };
        let (name, embed) = match rest.rsplit_once('@') {
            Some((name, "z")) => (name, Some(Embedding::Z)),
            Some((name, "w")) => (name, Some(Embedding::W)),
            Some((name, "zw")) => (name, Some(Embedding::ZW)),
            Some(_) => return Err(unknown()),
            None => (rest, None),
        };
        let base = BaseForm::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(unknown)?;
        if embed.is_some() && base.rank() != 1 {
            return Err(Error::Parse(alloc::format!(
                "{name} is not a rank-one form and cannot be embedded"
            )));
        }
        let spec = FormSpec { base, embed, sub };
        if sub.is_some() && spec.rank() != 2 {
            return Err(Error::Parse(alloc::format!(
                "{rest} is not a rank-two form"
            )));
        }
        Ok(spec)
    }
}

/// Memoizing builder for forms at a single precision.
///
/// All work happens at a raised working precision; [`FormCache::get`]
/// truncates to the precision the cache was created with.
pub struct FormCache {
    prec24: i64,
    work: i64,
    base: BTreeMap<BaseForm, JacobiSeries>,
    eta_pow: BTreeMap<i64, JacobiSeries>,
    cooked: BTreeMap<FormSpec, JacobiSeries>,
}

impl FormCache {
    pub fn new(prec24: i64) -> Self {
        FormCache {
            prec24,
            work: prec24 + MARGIN,
            base: BTreeMap::new(),
            eta_pow: BTreeMap::new(),
            cooked: BTreeMap::new(),
        }
    }

    pub fn prec24(&self) -> i64 {
        self.prec24
    }

    pub fn get(&mut self, spec: &FormSpec) -> Result<JacobiSeries> {
        if let Some(f) = self.cooked.get(spec) {
            return Ok(f.clone());
        }
        let mut f = self.base(spec.base)?;
        if let Some(e) = spec.embed {
            f = embed(&f, e)?;
        }
        if let Some(s) = spec.sub {
            f = f.substitute(s)?;
        }
        let f = finish(Ok(f), self.prec24)?;
        self.cooked.insert(*spec, f.clone());
        Ok(f)
    }

    /// `eta^e` at the working precision, rank one.
    fn eta_pow(&mut self, e: i64) -> Result<JacobiSeries> {
        if let Some(f) = self.eta_pow.get(&e) {
            return Ok(f.clone());
        }
        let f = eta_power_raw(e, self.work + 2 * e.abs())?;
        self.eta_pow.insert(e, f.clone());
        Ok(f)
    }

    fn eta_pow2(&mut self, e: i64) -> Result<JacobiSeries> {
        embed(&self.eta_pow(e)?, Embedding::Z)
    }

    fn theta_at(&self, e: Embedding, derivative: bool) -> Result<JacobiSeries> {
        let t = if derivative {
            theta_derivative(1, self.work)
        } else {
            theta(self.work)
        };
        embed(&t, e)
    }

    fn base(&mut self, b: BaseForm) -> Result<JacobiSeries> {
        if let Some(f) = self.base.get(&b) {
            return Ok(f.clone());
        }
        let w = self.work;
        let f = match b {
            BaseForm::Eta => self.eta_pow(1)?,
            BaseForm::E2 => eisenstein(2, w)?,
            BaseForm::E4 => eisenstein(4, w)?,
            BaseForm::E6 => eisenstein(6, w)?,
            BaseForm::Theta => theta(w),
            BaseForm::PhiM1Half => theta(w).mul(&self.eta_pow(-3)?)?,
            BaseForm::PhiM2_1 => self.base(BaseForm::PhiM1Half)?.pow(2)?,
            BaseForm::Phi0_1 => {
                let f = self.base(BaseForm::PhiM2_1)?;
                serre(&f, &Rational::from_int(-2), SeriesIndex::rank_one(2))?
                    .scale(&Rational::from_int(-24))
            }
            BaseForm::Phi0_3Half => {
                let t = theta(w);
                t.scale_z(2)?.divide_exact(&t)?
            }
            BaseForm::PhiM1_2 => self
                .base(BaseForm::PhiM1Half)?
                .mul(&self.base(BaseForm::Phi0_3Half)?)?,
            BaseForm::PhiM3A2 => self.theta_block_raw(1, 1, 1)?,
            BaseForm::PhiM2A2 => self.theta_block_plus_raw(1, 1, 1)?,
            BaseForm::Phi0A2 => {
                let f = self.base(BaseForm::PhiM2A2)?;
                serre(&f, &Rational::from_int(-2), IndexMatrix::A2.into())?
                    .scale(&Rational::from_int(-12))
            }
            BaseForm::Phi0_323 => {
                let inner = self
                    .theta_at(Embedding::Z, false)?
                    .mul(&self.theta_at(Embedding::W, false)?)?
                    .mul(&embed(&self.base(BaseForm::Phi0_1)?, Embedding::ZW)?)?
                    .mul(&self.eta_pow2(-6)?)?;
                serre(
                    &inner,
                    &Rational::from_int(-2),
                    IndexMatrix::new(1, 2, 1).into(),
                )?
                .scale(&Rational::new(5, 2))
            }
            BaseForm::Phi0_313 => {
                let phi = self.base(BaseForm::PhiM1Half)?;
                let pp = embed(&phi, Embedding::Z)?.mul(&embed(&phi, Embedding::W)?)?;
                let e4 = embed(&self.base(BaseForm::E4)?, Embedding::Z)?;
                let first = e4.mul(&pp)?.mul(&self.base(BaseForm::PhiM2A2)?)?;
                let inner = pp.mul(&self.base(BaseForm::Phi0A2)?)?;
                let second = serre(
                    &inner,
                    &Rational::from_int(-2),
                    IndexMatrix::new(2, 1, 2).into(),
                )?;
                first
                    .scale(&Rational::new(29, 2))
                    .add_scaled(&second, &Rational::from_int(48))?
            }
        };
        self.base.insert(b, f.clone());
        Ok(f)
    }

    fn theta_product(&self, a: u32, b: u32, c: u32, d: Option<Embedding>) -> Result<JacobiSeries> {
        let mut out = JacobiSeries::one(self.work, 2);
        for (e, n) in [(Embedding::Z, a), (Embedding::ZW, b), (Embedding::W, c)] {
            let mut n = n;
            if d == Some(e) {
                out = out.mul(&self.theta_at(e, true)?)?;
                n -= 1;
            }
            if n > 0 {
                out = out.mul(&self.theta_at(e, false)?.pow(n)?)?;
            }
        }
        Ok(out)
    }

    fn theta_block_raw(&mut self, a: u32, b: u32, c: u32) -> Result<JacobiSeries> {
        let eps = (a + b + c) as i64;
        self.theta_product(a, b, c, None)?
            .mul(&self.eta_pow2(-3 * eps)?)
    }

    fn theta_block_plus_raw(&mut self, a: u32, b: u32, c: u32) -> Result<JacobiSeries> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::VanishingThetaBlock);
        }
        let eps = (a + b + c) as i64;
        let num = self
            .theta_product(a, b, c, Some(Embedding::Z))?
            .add(&self.theta_product(a, b, c, Some(Embedding::W))?)?
            .sub(&self.theta_product(a, b, c, Some(Embedding::ZW))?)?;
        num.mul(&self.eta_pow2(-3 * eps)?)
    }

    /// `theta(z)^a theta(z+w)^b theta(w)^c / eta^(3(a+b+c))`.
    pub fn theta_block(&mut self, a: u32, b: u32, c: u32) -> Result<JacobiSeries> {
        let f = self.theta_block_raw(a, b, c);
        finish(f, self.prec24)
    }

    /// The theta block multiplied by the logarithmic derivative combination
    /// `theta'(z)/theta(z) + theta'(w)/theta(w) - theta'(z+w)/theta(z+w)`,
    /// with the denominators cleared. Requires `a, b, c >= 1`.
    pub fn theta_block_plus(&mut self, a: u32, b: u32, c: u32) -> Result<JacobiSeries> {
        let f = self.theta_block_plus_raw(a, b, c);
        finish(f, self.prec24)
    }
}

/// `theta(z)^a theta(z+w)^b theta(w)^c / eta^(3(a+b+c))`: weight
/// `-(a+b+c)`, index `(a, b, c)`.
pub fn theta_block(a: u32, b: u32, c: u32, prec24: i64) -> Result<JacobiSeries> {
    FormCache::new(prec24).theta_block(a, b, c)
}

/// See [`FormCache::theta_block_plus`]. Weight `1 - (a+b+c)`.
pub fn theta_block_plus(a: u32, b: u32, c: u32, prec24: i64) -> Result<JacobiSeries> {
    FormCache::new(prec24).theta_block_plus(a, b, c)
}

/// Builds a form from its name, e.g. `"Phi_0_313|sub1"`.
pub fn build_named(name: &str, prec24: i64) -> Result<JacobiSeries> {
    name.parse::<FormSpec>()?.build(prec24)
}

/// Names of every base form, in catalog order.
pub fn base_names() -> impl Iterator<Item = String> {
    BaseForm::ALL.into_iter().map(|b| b.name().to_string())
}
