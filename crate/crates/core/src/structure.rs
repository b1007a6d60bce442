//! Generation theorems checked on truncated expansions.
//!
//! A [`GeneratorCatalog`] lists generators with their weights and indices.
//! [`enumerate_monomials`] lists every product of generators with a given
//! weight and index, an [`Expander`] turns monomials into series, and
//! [`span_rank`] / [`decompose`] do exact linear algebra on the resulting
//! coefficient vectors. [`verify_dimension`] and [`verify_grid`] compare
//! span ranks with [`crate::dimension::dim_weak`].

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::dimension::dim_weak;
use crate::forms::{BaseForm, Embedding, FormCache, FormSpec};
use crate::linalg::{self, SparseRow};
use crate::{Error, ExponentKey, IndexMatrix, JacobiSeries, Rational, Result, Substitution};

/// One catalog entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub spec: FormSpec,
    pub weight: i64,
    pub index: IndexMatrix,
}

/// Ordered list of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCatalog {
    generators: Vec<Generator>,
}

fn rank_one_family(base: BaseForm, weight: i64, m2: u32) -> impl Iterator<Item = Generator> {
    Embedding::ALL.into_iter().map(move |e| Generator {
        spec: FormSpec::embedded(base, e),
        weight,
        index: match e {
            Embedding::Z => IndexMatrix::new(m2, 0, 0),
            Embedding::W => IndexMatrix::new(0, 0, m2),
            Embedding::ZW => IndexMatrix::new(0, m2, 0),
        },
    })
}

fn eisenstein_pair() -> [Generator; 2] {
    [
        Generator {
            spec: FormSpec::new(BaseForm::E4),
            weight: 4,
            index: IndexMatrix::ZERO,
        },
        Generator {
            spec: FormSpec::new(BaseForm::E6),
            weight: 6,
            index: IndexMatrix::ZERO,
        },
    ]
}

impl GeneratorCatalog {
    /// The 19 generators of the full ring: `E4`, `E6`, the rank-one forms
    /// `phi_-1_1/2`, `phi_0_1`, `phi_0_3/2` in the directions `z`, `w`,
    /// `z + w`, the two `A2` forms of weights -2 and 0, and the forms of
    /// index `[[3,2],[2,3]]` and `[[3,1],[1,3]]` with two substituted
    /// copies each.
    pub fn full() -> Self {
        let mut g: Vec<Generator> = Vec::new();
        g.extend(rank_one_family(BaseForm::PhiM1Half, -1, 1));
        g.extend(rank_one_family(BaseForm::Phi0_1, 0, 2));
        g.extend(rank_one_family(BaseForm::Phi0_3Half, 0, 3));
        g.push(Generator {
            spec: FormSpec::new(BaseForm::PhiM2A2),
            weight: -2,
            index: IndexMatrix::A2,
        });
        g.push(Generator {
            spec: FormSpec::new(BaseForm::Phi0A2),
            weight: 0,
            index: IndexMatrix::A2,
        });
        for (base, m) in [
            (BaseForm::Phi0_323, IndexMatrix::new(1, 2, 1)),
            (BaseForm::Phi0_313, IndexMatrix::new(2, 1, 2)),
        ] {
            g.push(Generator {
                spec: FormSpec::new(base),
                weight: 0,
                index: m,
            });
            g.push(Generator {
                spec: FormSpec::substituted(base, Substitution::SumNegW),
                weight: 0,
                index: m.permute([1, 0, 2]),
            });
            g.push(Generator {
                spec: FormSpec::substituted(base, Substitution::SumNegZ),
                weight: 0,
                index: m.permute([2, 0, 1]),
            });
        }
        g.extend(eisenstein_pair());
        GeneratorCatalog { generators: g }
    }

    /// The 11 generators of forms of even weight and even index: `E4`,
    /// `E6`, and `phi_-2_1`, `phi_0_1`, `phi_-1_2` in each direction.
    pub fn even() -> Self {
        let mut g: Vec<Generator> = Vec::new();
        g.extend(rank_one_family(BaseForm::PhiM2_1, -2, 2));
        g.extend(rank_one_family(BaseForm::Phi0_1, 0, 2));
        g.extend(rank_one_family(BaseForm::PhiM1_2, -1, 4));
        g.extend(eisenstein_pair());
        GeneratorCatalog { generators: g }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Number of generators with nonzero index, split into rank-one forms
    /// (embedded) and genuinely rank-two forms.
    pub fn index_carrying_counts(&self) -> (usize, usize) {
        let carrying = self
            .generators
            .iter()
            .filter(|g| g.index != IndexMatrix::ZERO);
        carrying.fold((0, 0), |(one, two), g| {
            if g.spec.embed.is_some() {
                (one + 1, two)
            } else {
                (one, two + 1)
            }
        })
    }
}

/// Exponent vector over a catalog.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn weight(&self, catalog: &GeneratorCatalog) -> i64 {
        self.exponents
            .iter()
            .zip(catalog.generators())
            .map(|(e, g)| *e as i64 * g.weight)
            .sum()
    }

    pub fn index(&self, catalog: &GeneratorCatalog) -> IndexMatrix {
        self.exponents
            .iter()
            .zip(catalog.generators())
            .fold(IndexMatrix::ZERO, |acc, (e, g)| {
                acc + IndexMatrix::new(e * g.index.a, e * g.index.b, e * g.index.c)
            })
    }

    /// Renders as e.g. `phi_0_1@z^2 * E4`; the empty product is `1`.
    pub fn display<'a>(&'a self, catalog: &'a GeneratorCatalog) -> impl fmt::Display + 'a {
        MonomialDisplay { m: self, catalog }
    }
}

struct MonomialDisplay<'a> {
    m: &'a Monomial,
    catalog: &'a GeneratorCatalog,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, g) in self.m.exponents.iter().zip(self.catalog.generators()) {
            if *e == 0 {
                continue;
            }
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            write!(f, "{}", g.spec)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Every monomial of weight `k` and index exactly `m`.
///
/// Generators with nonzero index are placed first by a bounded search on
/// the `(a, b, c)` budget; the remaining weight is then filled with the
/// index-zero generators (which must have positive weight).
pub fn enumerate_monomials(k: i64, m: IndexMatrix, catalog: &GeneratorCatalog) -> Vec<Monomial> {
    let gens = catalog.generators();
    let carrying: Vec<usize> = (0..gens.len())
        .filter(|&i| gens[i].index != IndexMatrix::ZERO)
        .collect();
    let fillers: Vec<usize> = (0..gens.len())
        .filter(|&i| gens[i].index == IndexMatrix::ZERO)
        .collect();
    assert!(
        fillers.iter().all(|&i| gens[i].weight > 0),
        "index-zero generators need positive weight"
    );

    let mut out = Vec::new();
    let mut exps = alloc::vec![0u32; gens.len()];
    place_carrying(gens, &carrying, &fillers, 0, m, k, &mut exps, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn place_carrying(
    gens: &[Generator],
    carrying: &[usize],
    fillers: &[usize],
    pos: usize,
    remaining: IndexMatrix,
    weight_gap: i64,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if pos == carrying.len() {
        if remaining == IndexMatrix::ZERO {
            fill_weight(gens, fillers, 0, weight_gap, exps, out);
        }
        return;
    }
    let g = carrying[pos];
    let mut rem = remaining;
    let mut gap = weight_gap;
    let mut e = 0;
    loop {
        exps[g] = e;
        place_carrying(gens, carrying, fillers, pos + 1, rem, gap, exps, out);
        match rem.checked_sub(&gens[g].index) {
            Some(r) => {
                rem = r;
                gap -= gens[g].weight;
                e += 1;
            }
            None => break,
        }
    }
    exps[g] = 0;
}

fn fill_weight(
    gens: &[Generator],
    fillers: &[usize],
    pos: usize,
    gap: i64,
    exps: &mut Vec<u32>,
    out: &mut Vec<Monomial>,
) {
    if pos == fillers.len() {
        if gap == 0 {
            out.push(Monomial {
                exponents: exps.clone(),
            });
        }
        return;
    }
    let g = fillers[pos];
    let w = gens[g].weight;
    let mut e = 0;
    while e as i64 * w <= gap {
        exps[g] = e;
        fill_weight(gens, fillers, pos + 1, gap - e as i64 * w, exps, out);
        e += 1;
    }
    exps[g] = 0;
}

/// Expands monomials over one catalog at a fixed precision, memoizing
/// generator series and partial products.
pub struct Expander<'a> {
    catalog: &'a GeneratorCatalog,
    forms: FormCache,
    products: BTreeMap<Vec<u32>, JacobiSeries>,
}

impl<'a> Expander<'a> {
    pub fn new(catalog: &'a GeneratorCatalog, prec24: i64) -> Self {
        Expander {
            catalog,
            forms: FormCache::new(prec24),
            products: BTreeMap::new(),
        }
    }

    pub fn prec24(&self) -> i64 {
        self.forms.prec24()
    }

    pub fn catalog(&self) -> &GeneratorCatalog {
        self.catalog
    }

    pub fn generator(&mut self, i: usize) -> Result<JacobiSeries> {
        let g = self.catalog.generators()[i];
        let f = self.forms.get(&g.spec)?;
        if f.rank() == 2 {
            Ok(f)
        } else {
            crate::forms::embed(&f, Embedding::Z)
        }
    }

    /// The product of generators described by `m`, as a rank-two series.
    pub fn expand(&mut self, m: &Monomial) -> Result<JacobiSeries> {
        if let Some(f) = self.products.get(&m.exponents) {
            return Ok(f.clone());
        }
        let f = match m.exponents.iter().position(|&e| e > 0) {
            None => JacobiSeries::one(self.prec24(), 2),
            Some(i) => {
                let mut rest = m.clone();
                rest.exponents[i] -= 1;
                let head = self.generator(i)?;
                self.expand(&rest)?.mul(&head)?
            }
        };
        self.products.insert(m.exponents.clone(), f.clone());
        Ok(f)
    }

    /// Drops memoized products (generator series are kept).
    pub fn clear_products(&mut self) {
        self.products.clear();
    }
}

fn row(f: &JacobiSeries, prec24: i64) -> SparseRow<ExponentKey> {
    f.terms()
        .take_while(|(k, _)| k.n24 < prec24)
        .map(|(k, c)| (*k, c.clone()))
        .collect()
}

/// Rank over `Q` of the coefficient vectors below `prec24`.
pub fn series_rank(series: &[JacobiSeries], prec24: i64) -> usize {
    let rows: Vec<_> = series.iter().map(|f| row(f, prec24)).collect();
    linalg::rank(&rows)
}

/// Span rank of the monomials' expansions truncated at `prec24`.
pub fn span_rank(
    monomials: &[Monomial],
    prec24: i64,
    expander: &mut Expander<'_>,
) -> Result<usize> {
    assert!(prec24 <= expander.prec24(), "expander precision too low");
    let series = monomials
        .iter()
        .map(|m| expander.expand(m))
        .collect::<Result<Vec<_>>>()?;
    Ok(series_rank(&series, prec24))
}

/// Result of [`decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// Coefficients reproducing the target exactly below the precision.
    Solved(Vec<Rational>),
    /// No combination matches; the first coefficient that cannot be met.
    Inconsistent { key: ExponentKey },
}

/// Writes `target` as a rational combination of `basis`, matching every
/// coefficient below `prec24`.
pub fn decompose(
    target: &JacobiSeries,
    basis: &[JacobiSeries],
    prec24: i64,
) -> Result<Decomposition> {
    for b in basis {
        if b.rank() != target.rank() {
            return Err(Error::MetadataMismatch { field: "rank" });
        }
        if b.weight2() != target.weight2() {
            return Err(Error::MetadataMismatch { field: "weight" });
        }
        if b.index() != target.index() {
            return Err(Error::MetadataMismatch { field: "index" });
        }
        if b.prec24() < prec24 {
            return Err(Error::MetadataMismatch { field: "prec24" });
        }
    }
    if target.prec24() < prec24 {
        return Err(Error::MetadataMismatch { field: "prec24" });
    }
    let rows: Vec<_> = basis.iter().map(|f| row(f, prec24)).collect();
    Ok(match linalg::solve(&rows, &row(target, prec24)) {
        linalg::Solution::Found(x) => Decomposition::Solved(x),
        linalg::Solution::Inconsistent(key) => Decomposition::Inconsistent { key },
    })
}

/// `sum c_i basis_i`.
pub fn recombine(basis: &[JacobiSeries], coeffs: &[Rational]) -> Result<Option<JacobiSeries>> {
    let mut acc: Option<JacobiSeries> = None;
    for (b, c) in basis.iter().zip(coeffs) {
        let term = b.scale(c);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc)
}

/// Span rank against dimension for one weight and index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    pub weight: i64,
    pub index: IndexMatrix,
    pub monomials: usize,
    pub dim: u64,
    pub prec24: i64,
    pub rank: usize,
    /// Precision and rank of the re-check, if one was run.
    pub recheck: Option<(i64, usize)>,
}

impl DimensionReport {
    pub fn stable(&self) -> bool {
        self.recheck.is_none_or(|(_, r)| r == self.rank)
    }

    pub fn passed(&self) -> bool {
        self.rank as u64 == self.dim && self.stable()
    }
}

impl fmt::Display for DimensionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={} index=({}) monomials={} rank={} dim={} prec24={}",
            self.weight, self.index, self.monomials, self.rank, self.dim, self.prec24
        )?;
        if let Some((p, r)) = self.recheck {
            write!(f, " recheck(prec24={p})={r}")?;
            if r != self.rank {
                f.write_str(" UNSTABLE")?;
            }
        }
        if self.rank as u64 != self.dim {
            f.write_str(" MISMATCH")?;
        }
        Ok(())
    }
}

/// Computes the span rank of all monomials of weight `k` and index `m` at
/// `prec24`, and again one q-order higher when the expander allows it.
///
/// A rank above the dimension is an error: the monomials lie in the space,
/// so that can only come from a wrong expansion.
pub fn verify_dimension_with(
    k: i64,
    m: IndexMatrix,
    prec24: i64,
    expander: &mut Expander<'_>,
) -> Result<DimensionReport> {
    let monomials = enumerate_monomials(k, m, expander.catalog());
    let dim = dim_weak(k, m);
    let rank = span_rank(&monomials, prec24, expander)?;
    let recheck = if expander.prec24() >= prec24 + 24 {
        Some((prec24 + 24, span_rank(&monomials, prec24 + 24, expander)?))
    } else {
        None
    };
    let worst = recheck.map_or(rank, |(_, r)| r.max(rank));
    if worst as u64 > dim {
        return Err(Error::RankExceedsDimension { rank: worst, dim });
    }
    Ok(DimensionReport {
        weight: k,
        index: m,
        monomials: monomials.len(),
        dim,
        prec24,
        rank,
        recheck,
    })
}

/// [`verify_dimension_with`] over the full catalog, re-checked one q-order
/// above `prec24`.
pub fn verify_dimension(k: i64, m: IndexMatrix, prec24: i64) -> Result<DimensionReport> {
    let catalog = GeneratorCatalog::full();
    let mut ex = Expander::new(&catalog, prec24 + 24);
    verify_dimension_with(k, m, prec24, &mut ex)
}

/// Indices `(a, b, c)` with `a + b + c <= max_sum`, in lexicographic order.
pub fn indices_up_to(max_sum: u32) -> Vec<IndexMatrix> {
    let mut out = Vec::new();
    for a in 0..=max_sum {
        for b in 0..=max_sum - a {
            for c in 0..=max_sum - a - b {
                out.push(IndexMatrix::new(a, b, c));
            }
        }
    }
    out
}

/// Options for [`verify_grid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridOptions {
    /// Largest `a + b + c`.
    pub max_sum: u32,
    /// Weights `k_min ..= k_min + window` are checked.
    pub window: i64,
    /// Restrict to even weights, Gram matrices with all entries even, and
    /// the even catalog.
    pub even: bool,
    pub prec24: i64,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            max_sum: 4,
            window: 8,
            even: false,
            prec24: 144,
        }
    }
}

/// Runs [`verify_dimension_with`] over a grid of indices and weights,
/// calling `progress` after each case.
pub fn verify_grid(
    opts: GridOptions,
    mut progress: impl FnMut(&DimensionReport),
) -> Result<Vec<DimensionReport>> {
    let catalog = if opts.even {
        GeneratorCatalog::even()
    } else {
        GeneratorCatalog::full()
    };
    let mut ex = Expander::new(&catalog, opts.prec24 + 24);
    let mut out = Vec::new();
    for m in indices_up_to(opts.max_sum) {
        if opts.even && !m.is_even() {
            continue;
        }
        let k_min = m.min_weight();
        for k in k_min..=k_min + opts.window {
            if opts.even && k % 2 != 0 {
                continue;
            }
            let report = verify_dimension_with(k, m, opts.prec24, &mut ex)?;
            progress(&report);
            out.push(report);
        }
    }
    Ok(out)
}

/// Short description of the catalog, e.g. for logs.
pub fn describe(catalog: &GeneratorCatalog) -> String {
    let (one, two) = catalog.index_carrying_counts();
    alloc::format!(
        "{} generators: {} rank-one, {} rank-two, {} of index zero",
        catalog.len(),
        one,
        two,
        catalog.len() - one - two
    )
}
