//! The acceptance suite: ten numbered checks, each reported as one
//! `PASS`/`FAIL` line. Shared by `jacobi verify` and the `acceptance` test.

use std::fmt;
use std::time::{Duration, Instant};

use jacobi_core::dimension::{dim_weak, generator_weights, hilbert_table, rank_one_numerator};
use jacobi_core::forms::{heat, serre, BaseForm, Embedding, FormCache, FormSpec};
use jacobi_core::structure::{
    describe, verify_grid, DimensionReport, GeneratorCatalog, GridOptions,
};
use jacobi_core::{IndexMatrix, JacobiSeries, Rational, SeriesIndex, Substitution};

type CheckResult = Result<String, String>;
type CheckFn = fn(&Config, &mut dyn FnMut(&DimensionReport)) -> CheckResult;

/// Outcome of one check.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:>2} {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    /// Largest `a + b + c` in the structure grids (checks 8 and 9).
    pub grid: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config { grid: 4 }
    }
}

struct Check {
    id: u8,
    title: &'static str,
    budget: Duration,
    run: CheckFn,
}

const CHECKS: [Check; 10] = [
    Check {
        id: 1,
        title: "golden Fourier rows",
        budget: secs(10),
        run: golden_rows,
    },
    Check {
        id: 2,
        title: "pullback identities",
        budget: secs(30),
        run: pullbacks,
    },
    Check {
        id: 3,
        title: "product identity",
        budget: secs(30),
        run: product_identity,
    },
    Check {
        id: 4,
        title: "operator kernels",
        budget: secs(30),
        run: kernels,
    },
    Check {
        id: 5,
        title: "Hilbert cross-check",
        budget: secs(60),
        run: hilbert,
    },
    Check {
        id: 6,
        title: "determinant specialization",
        budget: secs(30),
        run: determinant,
    },
    Check {
        id: 7,
        title: "minimal weights",
        budget: secs(60),
        run: minimal_weights,
    },
    Check {
        id: 8,
        title: "structure grid",
        budget: secs(15 * 60),
        run: full_grid,
    },
    Check {
        id: 9,
        title: "even-subring grid",
        budget: secs(15 * 60),
        run: even_grid,
    },
    Check {
        id: 10,
        title: "odd/even dimension shift",
        budget: secs(10),
        run: dimension_shift,
    },
];

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// Runs every check, calling `report` with each finished outcome and
/// `case` with every structure-grid case.
pub fn run_all(
    config: &Config,
    mut report: impl FnMut(&Outcome),
    mut case: impl FnMut(&DimensionReport),
) -> Vec<Outcome> {
    CHECKS
        .iter()
        .map(|c| {
            let start = Instant::now();
            let result = (c.run)(config, &mut case);
            let elapsed = start.elapsed();
            let (mut passed, mut detail) = match result {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            if passed && elapsed > c.budget {
                passed = false;
                detail = format!("{detail}; over the {}s budget", c.budget.as_secs());
            }
            let out = Outcome {
                id: c.id,
                title: c.title,
                passed,
                detail,
                elapsed,
            };
            report(&out);
            out
        })
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: jacobi_core::Error) -> String {
    e.to_string()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Coefficients `(r2, s2, value)` of one q-power.
type Row = Vec<(i64, i64, Rational)>;

fn row_of(f: &JacobiSeries, n24: i64) -> Row {
    f.slice(n24).map(|(k, c)| (k.r2, k.s2, c.clone())).collect()
}

fn row(entries: &[(i64, i64, i64, i64)]) -> Row {
    let mut v: Row = entries
        .iter()
        .map(|&(r, s, n, d)| (r, s, q(n, d)))
        .collect();
    v.sort_by_key(|(r, s, _)| (*r, *s));
    v
}

fn rank_one_row(entries: &[(i64, i64)]) -> Row {
    row(&entries
        .iter()
        .map(|&(r, c)| (r, 0, c, 1))
        .collect::<Vec<_>>())
}

fn golden() -> Vec<(&'static str, i64, Row)> {
    vec![
        ("phi_-1_1/2", 0, rank_one_row(&[(-1, -1), (1, 1)])),
        (
            "phi_-1_1/2",
            24,
            rank_one_row(&[(-3, 1), (-1, -3), (1, 3), (3, -1)]),
        ),
        ("phi_0_1", 0, rank_one_row(&[(-2, 1), (0, 10), (2, 1)])),
        (
            "phi_0_1",
            24,
            rank_one_row(&[(-4, 10), (-2, -64), (0, 108), (2, -64), (4, 10)]),
        ),
        ("phi_0_3/2", 0, rank_one_row(&[(-1, 1), (1, 1)])),
        (
            "phi_0_3/2",
            24,
            rank_one_row(&[(-5, -1), (-1, 1), (1, 1), (5, -1)]),
        ),
        (
            "Phi_-3_A2",
            0,
            row(&[
                (-2, -2, -1, 1),
                (-2, 0, 1, 1),
                (0, -2, 1, 1),
                (2, 0, -1, 1),
                (0, 2, -1, 1),
                (2, 2, 1, 1),
            ]),
        ),
        (
            "Phi_-2_A2",
            0,
            row(&[
                (-2, -2, 1, 1),
                (-2, 0, 1, 1),
                (0, -2, 1, 1),
                (0, 0, -6, 1),
                (2, 0, 1, 1),
                (0, 2, 1, 1),
                (2, 2, 1, 1),
            ]),
        ),
        (
            "Phi_0_A2",
            0,
            row(&[
                (-2, -2, 1, 1),
                (-2, 0, 1, 1),
                (0, -2, 1, 1),
                (0, 0, 18, 1),
                (2, 0, 1, 1),
                (0, 2, 1, 1),
                (2, 2, 1, 1),
            ]),
        ),
        (
            "Phi_0_323",
            0,
            row(&[
                (-3, -3, -1, 2),
                (-3, -1, 1, 2),
                (-1, -3, 1, 2),
                (-1, -1, 11, 2),
                (1, 1, 11, 2),
                (1, 3, 1, 2),
                (3, 1, 1, 2),
                (3, 3, -1, 2),
            ]),
        ),
        (
            "Phi_0_313",
            0,
            row(&[
                (-3, -3, -1, 2),
                (-3, 1, 1, 2),
                (-1, -1, 103, 2),
                (-1, 1, 20, 1),
                (-1, 3, 1, 2),
                (1, -3, 1, 2),
                (1, -1, 20, 1),
                (1, 1, 103, 2),
                (3, -1, 1, 2),
                (3, 3, -1, 2),
            ]),
        ),
    ]
}

fn golden_rows(_: &Config, _: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    let prec24 = 96;
    let mut cache = FormCache::new(prec24);
    let rows = golden();
    for (name, n24, expected) in &rows {
        let spec: FormSpec = name.parse().map_err(err)?;
        let f = cache.get(&spec).map_err(err)?;
        let mut got = row_of(&f, *n24);
        got.sort_by_key(|(r, s, _)| (*r, *s));
        ensure(&got == expected, || {
            format!("{name} q^{}: got {}", n24 / 24, f.render_slice(*n24))
        })?;
        // Nothing strictly below the printed row.
        ensure(f.valuation24().is_some_and(|v| v >= 0), || {
            format!("{name} has negative q-powers")
        })?;
        let gap = f.terms().any(|(k, _)| k.n24 > 0 && k.n24 < 24);
        ensure(!gap, || format!("{name} has fractional q-powers below q^1"))?;
    }
    Ok(format!("{} rows exact at q^4", rows.len()))
}

fn same_form(f: &JacobiSeries, g: &JacobiSeries, prec24: i64, what: &str) -> Result<(), String> {
    ensure(f.weight2() == g.weight2(), || {
        format!("{what}: weights differ")
    })?;
    ensure(f.index() == g.index(), || {
        format!(
            "{what}: indices differ ({:?} vs {:?})",
            f.index(),
            g.index()
        )
    })?;
    ensure(f.equals_to_precision(g, prec24), || {
        let diff = f.sub(g).map(|d| d.valuation24()).ok().flatten();
        format!("{what}: first difference at n24 = {diff:?}")
    })
}

fn pullbacks(_: &Config, _: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    let prec24 = 240;
    let mut cache = FormCache::new(prec24);
    let mut get = |b| cache.get(&FormSpec::new(b)).map_err(err);
    let p323 = get(BaseForm::Phi0_323)?;
    let p313 = get(BaseForm::Phi0_313)?;
    let phi01 = get(BaseForm::Phi0_1)?;
    let phi032 = get(BaseForm::Phi0_3Half)?;
    let phi01_sq = phi01.mul(&phi01).map_err(err)?;
    let cases = [
        (p323.pullback_p(), phi01.clone(), "P(Phi_0_323) = phi_0_1"),
        (
            p323.pullback_q(),
            phi032.scale(&q(6, 1)),
            "Q(Phi_0_323) = 6 phi_0_3/2",
        ),
        (p313.pullback_p(), phi01_sq, "P(Phi_0_313) = phi_0_1^2"),
        (
            p313.pullback_q(),
            phi032.scale(&q(72, 1)),
            "Q(Phi_0_313) = 72 phi_0_3/2",
        ),
    ];
    for (lhs, rhs, what) in &cases {
        let lhs = lhs.as_ref().map_err(|e| e.to_string())?;
        same_form(lhs, rhs, prec24, what)?;
    }
    // The restriction to z = 0 must agree with the one to w = 0.
    for (f, name) in [(&p323, "Phi_0_323"), (&p313, "Phi_0_313")] {
        let swapped = f
            .substitute(Substitution::Swap)
            .map_err(err)?
            .pullback_q()
            .map_err(err)?;
        same_form(&swapped, &f.pullback_q().map_err(err)?, prec24, name)?;
    }
    Ok(format!("{} identities through q^10", cases.len()))
}

fn product_identity(_: &Config, _: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    let prec24 = 192;
    let mut cache = FormCache::new(prec24);
    let phi = cache
        .get(&FormSpec::embedded(BaseForm::PhiM1Half, Embedding::Z))
        .map_err(err)?;
    let plus = phi
        .substitute(Substitution::Matrix([[1, 1], [0, 1]]))
        .map_err(err)?;
    let minus = phi
        .substitute(Substitution::Matrix([[1, -1], [0, 1]]))
        .map_err(err)?;
    let lhs = plus.mul(&minus).map_err(err)?;
    let a = cache
        .get(&FormSpec::embedded(BaseForm::PhiM2_1, Embedding::Z))
        .map_err(err)?;
    let b = cache
        .get(&FormSpec::embedded(BaseForm::Phi0_1, Embedding::W))
        .map_err(err)?;
    let c = cache
        .get(&FormSpec::embedded(BaseForm::Phi0_1, Embedding::Z))
        .map_err(err)?;
    let d = cache
        .get(&FormSpec::embedded(BaseForm::PhiM2_1, Embedding::W))
        .map_err(err)?;
    let rhs = a
        .mul(&b)
        .and_then(|ab| c.mul(&d).and_then(|cd| ab.sub(&cd)))
        .map_err(err)?
        .scale(&q(1, 12));
    ensure(!lhs.is_zero(), || "left side vanished".into())?;
    same_form(&lhs, &rhs, prec24, "phi(z+w) phi(z-w)")?;
    Ok(format!("{} coefficients agree through q^8", lhs.len()))
}

fn kernels(_: &Config, _: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    let prec24 = 480;
    let theta = jacobi_core::forms::theta(prec24);
    let idx = SeriesIndex::rank_one(1);
    let h = heat(&theta, idx).map_err(err)?;
    ensure(h.is_zero() && h.prec24() >= prec24, || {
        format!("heat(theta) = {h}")
    })?;
    let s = serre(&theta, &q(1, 2), idx).map_err(err)?;
    ensure(s.is_zero() && s.prec24() >= prec24, || {
        format!("serre(theta) = {s}")
    })?;

    let prec24 = 240;
    let e4 = jacobi_core::forms::eisenstein(4, prec24).map_err(err)?;
    let e6 = jacobi_core::forms::eisenstein(6, prec24).map_err(err)?;
    let lhs = e4
        .pow(3)
        .and_then(|a| e6.pow(2).and_then(|b| a.sub(&b)))
        .map_err(err)?;
    let rhs = jacobi_core::forms::eta_power(24, prec24)
        .map_err(err)?
        .scale(&q(1728, 1));
    same_form(&lhs, &rhs, prec24, "E4^3 - E6^2 = 1728 eta^24")?;
    Ok("heat and Serre kill theta through q^20; discriminant through q^10".into())
}

fn grid_triples(bound: u32) -> impl Iterator<Item = IndexMatrix> {
    (0..=bound).flat_map(move |a| {
        (0..=bound).flat_map(move |b| (0..=bound).map(move |c| IndexMatrix::new(a, b, c)))
    })
}

fn hilbert(_: &Config, _: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    let bound = 6;
    let table = hilbert_table(IndexMatrix::new(bound, bound, bound));
    let mut n = 0;
    for m in grid_triples(bound) {
        let w = generator_weights(m);
        let f = table
            .get(&m)
            .ok_or_else(|| format!("no Hilbert coefficient for ({m})"))?;
        ensure(&w == f, || {
            format!("({m}): generator weights {w} but Hilbert coefficient {f}")
        })?;
        for p in m.anharmonic_orbit() {
            ensure(generator_weights(p) == w, || {
                format!("({m}) and ({p}) differ")
            })?;
        }
        if m.b == 0 {
            let prod = rank_one_numerator(m.a).mul(&rank_one_numerator(m.c));
            ensure(w == prod, || {
                format!("({m}): {w} does not factor as {prod}")
            })?;
        }
        n += 1;
    }
    Ok(format!("{n} triples agree, symmetric, diagonal factorizes"))
}

fn determinant(_: &Config, _: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    let mut n = 0;
    for m in grid_triples(6) {
        let det = (m.a * m.b + m.a * m.c + m.b * m.c) as i64;
        if det > 0 {
            let v = generator_weights(m).eval_one();
            ensure(v == det, || {
                format!("({m}): value {v} at t = 1, determinant {det}")
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} positive-definite triples"))
}

fn minimal_weights(_: &Config, _: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    for m in grid_triples(6) {
        let w = generator_weights(m);
        let lo = -((m.a + m.b + m.c) as i64);
        ensure(w.min_exponent() == Some(lo), || {
            format!("({m}): lowest weight {:?}", w.min_exponent())
        })?;
        let expected = [
            1,
            (m.a * m.b * m.c != 0) as i64,
            [m.a, m.b, m.c].iter().filter(|&&x| x >= 2).count() as i64,
        ];
        let got = [w.coeff(lo), w.coeff(lo + 1), w.coeff(lo + 2)];
        ensure(got == expected, || {
            format!("({m}): lowest coefficients {got:?}, expected {expected:?}")
        })?;
    }
    let prec24 = 240;
    let mut cache = FormCache::new(prec24);
    let mut blocks = 0;
    for m in grid_triples(6).filter(|m| m.a + m.b + m.c <= 6) {
        let f = cache.theta_block(m.a, m.b, m.c).map_err(err)?;
        ensure(f.weight2() == 2 * m.min_weight(), || {
            format!("theta block ({m}) has weight {}", f.weight())
        })?;
        ensure(f.index() == SeriesIndex::from(m), || {
            format!("theta block ({m}) has index {:?}", f.index())
        })?;
        ensure(f.prec24() >= prec24, || {
            format!("theta block ({m}) known only to {}", f.prec24())
        })?;
        ensure(f.valuation24().is_some_and(|v| v >= 0), || {
            format!("theta block ({m}) is not weak")
        })?;
        blocks += 1;
    }
    let mut small = FormCache::new(24);
    for m in grid_triples(6).filter(|m| m.a + m.b + m.c <= 6) {
        let r = small.theta_block_plus(m.a, m.b, m.c);
        let vanishing = m.a * m.b * m.c == 0;
        ensure(r.is_err() == vanishing, || {
            format!("theta_block_plus({m}) returned {r:?}")
        })?;
    }
    Ok(format!(
        "343 numerators; {blocks} theta blocks weak through q^10"
    ))
}

fn grid(config: &Config, even: bool, case: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    let opts = GridOptions {
        max_sum: config.grid,
        even,
        ..GridOptions::default()
    };
    let reports = verify_grid(opts, |r| case(r)).map_err(err)?;
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.to_string())
        .collect();
    ensure(failed.is_empty(), || failed.join("; "))?;
    ensure(reports.iter().all(|r| r.recheck.is_some()), || {
        "a case was not re-checked".into()
    })?;
    let catalog = if even {
        GeneratorCatalog::even()
    } else {
        GeneratorCatalog::full()
    };
    let dims: u64 = reports.iter().map(|r| r.dim).sum();
    Ok(format!(
        "{} cases, total dimension {dims}, stable from q^{} to q^{}; {}",
        reports.len(),
        opts.prec24 / 24,
        opts.prec24 / 24 + 1,
        describe(&catalog)
    ))
}

fn full_grid(config: &Config, case: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    grid(config, false, case)
}

fn even_grid(config: &Config, case: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    grid(config, true, case)
}

fn dimension_shift(_: &Config, _: &mut dyn FnMut(&DimensionReport)) -> CheckResult {
    let mut n = 0;
    for a in 1..=3u32 {
        let odd = IndexMatrix::new(1, 2 * a, 1);
        let even = IndexMatrix::new(1, 2 * a - 1, 1);
        let lo = odd.min_weight();
        for w in (lo..=lo + 8).filter(|w| w.rem_euclid(2) == 1) {
            let (d_odd, d_even) = (dim_weak(w, odd), dim_weak(w + 1, even));
            ensure(d_odd == d_even, || {
                format!(
                    "dim J_({w}, {odd}) = {d_odd} but dim J_({}, {even}) = {d_even}",
                    w + 1
                )
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} weight pairs"))
}
