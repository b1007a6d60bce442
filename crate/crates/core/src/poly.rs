//! Laurent polynomials in the elliptic variables, i.e. single q-slices of a
//! series. Exponents are stored doubled, as in [`crate::ExponentKey`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::Rational;

/// Map `(r2, s2) -> coefficient`, no zero entries.
pub(crate) type Slice = BTreeMap<(i64, i64), Rational>;

pub(crate) fn add_scaled(acc: &mut Slice, other: &Slice, scale: &Rational, shift: (i64, i64)) {
    for (&(r, s), c) in other {
        let key = (r + shift.0, s + shift.1);
        let term = c * scale;
        match acc.get_mut(&key) {
            Some(v) => {
                *v += term;
                if v.is_zero() {
                    acc.remove(&key);
                }
            }
            None => {
                acc.insert(key, term);
            }
        }
    }
}

pub(crate) fn mul(a: &Slice, b: &Slice) -> Slice {
    let mut out = Slice::new();
    for (&(r, s), c) in a {
        add_scaled(&mut out, b, c, (r, s));
    }
    out
}

/// Per-coordinate bounds `(min_r, max_r, min_s, max_s)`.
fn bounds(p: &Slice) -> Option<(i64, i64, i64, i64)> {
    let mut it = p.keys();
    let &(r0, s0) = it.next()?;
    Some(it.fold((r0, r0, s0, s0), |(a, b, c, d), &(r, s)| {
        (a.min(r), b.max(r), c.min(s), d.max(s))
    }))
}

/// Exact quotient `f / g` in the Laurent polynomial ring, or `None` if `g`
/// does not divide `f`.
///
/// Long division with respect to the translation-invariant order
/// "total degree, then r". Quotient terms are confined to the box allowed
/// by the per-coordinate degree bounds, which makes the loop finite.
pub(crate) fn div_exact(f: &Slice, g: &Slice) -> Option<Slice> {
    let (gr0, gr1, gs0, gs1) = bounds(g)?;
    let Some((fr0, fr1, fs0, fs1)) = bounds(f) else {
        return Some(Slice::new());
    };
    let (qr0, qr1, qs0, qs1) = (fr0 - gr0, fr1 - gr1, fs0 - gs0, fs1 - gs1);
    if qr0 > qr1 || qs0 > qs1 {
        return None;
    }

    // Keyed by (degree, r) so the BTreeMap maximum is the leading term.
    let graded = |p: &Slice| -> BTreeMap<(i64, i64), Rational> {
        p.iter()
            .map(|(&(r, s), c)| ((r + s, r), c.clone()))
            .collect()
    };
    let divisor: Vec<((i64, i64), Rational)> = g.iter().map(|(&k, c)| (k, c.clone())).collect();
    let graded_g = graded(g);
    let (&(lead_deg, lead_r), lead_c) = graded_g.iter().next_back()?;
    let lead_s = lead_deg - lead_r;
    let lead_inv = lead_c.recip();

    let mut rem = graded(f);
    let mut quot = Slice::new();
    while let Some(((deg, r), c)) = rem.iter().next_back().map(|(k, c)| (*k, c.clone())) {
        let s = deg - r;
        let (tr, ts) = (r - lead_r, s - lead_s);
        if tr < qr0 || tr > qr1 || ts < qs0 || ts > qs1 {
            return None;
        }
        let coef = c * &lead_inv;
        for ((gr, gs), gc) in &divisor {
            let key = (tr + ts + gr + gs, tr + gr);
            let term = &coef * gc;
            match rem.get_mut(&key) {
                Some(v) => {
                    *v -= &term;
                    if v.is_zero() {
                        rem.remove(&key);
                    }
                }
                None => {
                    rem.insert(key, -term);
                }
            }
        }
        quot.insert((tr, ts), coef);
    }
    Some(quot)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slice(terms: &[((i64, i64), i64)]) -> Slice {
        terms
            .iter()
            .map(|&(k, c)| (k, Rational::from_int(c)))
            .collect()
    }

    #[test]
    fn binomial_product_divides_back() {
        // (z^1/2 - z^-1/2)(w^1/2 - w^-1/2) divided by (z^1/2 - z^-1/2)
        let a = slice(&[((1, 0), 1), ((-1, 0), -1)]);
        let b = slice(&[((0, 1), 1), ((0, -1), -1)]);
        let ab = mul(&a, &b);
        assert_eq!(div_exact(&ab, &a).unwrap(), b);
        assert_eq!(div_exact(&ab, &b).unwrap(), a);
    }

    #[test]
    fn remainder_detected() {
        // (z - z^-1) is not divisible by (z^2 - z^-2)
        let f = slice(&[((2, 0), 1), ((-2, 0), -1)]);
        let g = slice(&[((4, 0), 1), ((-4, 0), -1)]);
        assert!(div_exact(&f, &g).is_none());
        // but the converse is (z + z^-1)
        assert_eq!(
            div_exact(&g, &f).unwrap(),
            slice(&[((2, 0), 1), ((-2, 0), 1)])
        );
    }

    #[test]
    fn zero_dividend() {
        let g = slice(&[((1, 1), 3)]);
        assert!(div_exact(&Slice::new(), &g).unwrap().is_empty());
        assert!(div_exact(&g, &Slice::new()).is_none());
    }
}
