//! Exact sparse linear algebra over the rationals.
//!
//! Rows are sparse vectors sorted by column. Rank uses fraction-free
//! elimination over the integers (each row is cleared of denominators
//! first and kept primitive); solving uses rational elimination with a
//! record of how every basis row was formed.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

pub(crate) type SparseRow<K> = Vec<(K, Rational)>;

type IntRow<K> = Vec<(K, BigInt)>;

fn to_primitive_int<K: Clone>(row: &SparseRow<K>) -> IntRow<K> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let ints: IntRow<K> = row
        .iter()
        .map(|(k, c)| (k.clone(), c.numer() * (&lcm / c.denom())))
        .collect();
    make_primitive(ints)
}

fn make_primitive<K>(mut row: IntRow<K>) -> IntRow<K> {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for (_, c) in row.iter_mut() {
            *c /= &g;
        }
    }
    if row.first().is_some_and(|(_, c)| c.is_negative()) {
        for (_, c) in row.iter_mut() {
            *c = -&*c;
        }
    }
    row
}

/// `x * a - y * b`, merged by column.
fn combine<K: Ord + Clone>(a: &IntRow<K>, x: &BigInt, b: &IntRow<K>, y: &BigInt) -> IntRow<K> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some((ka, _)), Some((kb, _))) => ka.cmp(kb),
            (Some(_), None) => core::cmp::Ordering::Less,
            _ => core::cmp::Ordering::Greater,
        };
        match ord {
            core::cmp::Ordering::Less => {
                out.push((a[i].0.clone(), &a[i].1 * x));
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push((b[j].0.clone(), -(&b[j].1 * y)));
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let v = &a[i].1 * x - &b[j].1 * y;
                if !v.is_zero() {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Incremental row echelon basis over the integers.
pub(crate) struct IntegerEchelon<K> {
    pivots: BTreeMap<K, IntRow<K>>,
}

impl<K: Ord + Clone> IntegerEchelon<K> {
    pub(crate) fn new() -> Self {
        IntegerEchelon {
            pivots: BTreeMap::new(),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; returns whether it was independent of the rows so far.
    pub(crate) fn insert(&mut self, row: &SparseRow<K>) -> bool {
        let mut row = to_primitive_int(row);
        while let Some((lead, lc)) = row.first().cloned() {
            let Some(p) = self.pivots.get(&lead) else {
                self.pivots.insert(lead, row);
                return true;
            };
            let pc = &p[0].1;
            let g = pc.gcd(&lc);
            row = make_primitive(combine(&row, &(pc / &g), p, &(&lc / &g)));
        }
        false
    }
}

/// Rank of a set of sparse rows.
pub(crate) fn rank<K: Ord + Clone>(rows: &[SparseRow<K>]) -> usize {
    let mut order: Vec<&SparseRow<K>> = rows.iter().collect();
    order.sort_by_key(|r| core::cmp::Reverse(r.len()));
    let mut e = IntegerEchelon::new();
    for r in order {
        e.insert(r);
    }
    e.rank()
}

fn sub_scaled<K: Ord + Clone>(a: &SparseRow<K>, b: &SparseRow<K>, y: &Rational) -> SparseRow<K> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some((ka, _)), Some((kb, _))) => ka.cmp(kb),
            (Some(_), None) => core::cmp::Ordering::Less,
            _ => core::cmp::Ordering::Greater,
        };
        match ord {
            core::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push((b[j].0.clone(), -(&b[j].1 * y)));
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                let v = &a[i].1 - &(&b[j].1 * y);
                if !v.is_zero() {
                    out.push((a[i].0.clone(), v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Outcome of [`solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Solution<K> {
    /// Coefficients `x` with `sum x_i rows_i = target` exactly.
    Found(Vec<Rational>),
    /// The smallest column at which the target leaves the row span.
    Inconsistent(K),
}

/// Solves `sum_i x_i rows[i] = target`. Dependent rows get coefficient 0.
pub(crate) fn solve<K: Ord + Clone>(rows: &[SparseRow<K>], target: &SparseRow<K>) -> Solution<K> {
    let n = rows.len();
    // Each basis row is monic and remembers its expression in the input rows.
    let mut pivots: BTreeMap<K, (SparseRow<K>, Vec<Rational>)> = BTreeMap::new();
    let reduce = |pivots: &BTreeMap<K, (SparseRow<K>, Vec<Rational>)>,
                  mut row: SparseRow<K>,
                  mut combo: Vec<Rational>|
     -> (SparseRow<K>, Vec<Rational>) {
        while let Some((lead, lc)) = row.first().cloned() {
            let Some((p, pcombo)) = pivots.get(&lead) else {
                break;
            };
            row = sub_scaled(&row, p, &lc);
            for (c, pc) in combo.iter_mut().zip(pcombo) {
                if !pc.is_zero() {
                    *c -= &(pc * &lc);
                }
            }
        }
        (row, combo)
    };
    for (i, r) in rows.iter().enumerate() {
        let mut combo = alloc::vec![Rational::zero(); n];
        combo[i] = Rational::one();
        let (row, combo) = reduce(&pivots, r.clone(), combo);
        if let Some((lead, lc)) = row.first().cloned() {
            let inv = lc.recip();
            let row: SparseRow<K> = row.into_iter().map(|(k, c)| (k, c * &inv)).collect();
            let combo: Vec<Rational> = combo.into_iter().map(|c| c * &inv).collect();
            pivots.insert(lead, (row, combo));
        }
    }
    let (residual, combo) = reduce(&pivots, target.clone(), alloc::vec![Rational::zero(); n]);
    match residual.first() {
        Some((k, _)) => Solution::Inconsistent(k.clone()),
        None => Solution::Found(combo.into_iter().map(|c| -c).collect()),
    }
}
