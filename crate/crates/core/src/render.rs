//! Human-readable text form of a series, one q-slice per line:
//!
//! ```text
//! (z^-1 w^-1 + z^-1 + w^-1 - 6 + z + w + z w) q^0
//! + (...) q^1
//! + O(q^2)
//! ```

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::{JacobiSeries, Rational};

fn exponent(num: i64, den: i64) -> String {
    let r = Rational::new(num, den);
    format!("{r}")
}

fn variable(out: &mut String, name: &str, e2: i64) {
    if e2 == 0 {
        return;
    }
    if !out.is_empty() {
        out.push(' ');
    }
    out.push_str(name);
    if e2 != 2 {
        out.push('^');
        out.push_str(&exponent(e2, 2));
    }
}

fn monomial(r2: i64, s2: i64) -> String {
    let mut m = String::new();
    variable(&mut m, "z", r2);
    variable(&mut m, "w", s2);
    m
}

/// Renders one Laurent polynomial in `z, w` (the contents of a slice).
pub(crate) fn slice_text(terms: &[((i64, i64), &Rational)]) -> String {
    let mut sorted: Vec<_> = terms.to_vec();
    sorted.sort_by_key(|((r, s), _)| (r + s, -r.abs(), *r));
    let mut out = String::new();
    for (i, ((r, s), c)) in sorted.into_iter().enumerate() {
        let mono = monomial(r, s);
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let unit = mag == Rational::one();
        if !unit || mono.is_empty() {
            let _ = write!(out, "{mag}");
            if !mono.is_empty() {
                out.push(' ');
            }
        }
        out.push_str(&mono);
    }
    out
}

pub(crate) fn series_text(f: &JacobiSeries, out: &mut impl Write) -> fmt::Result {
    let mut first = true;
    let mut current: Option<i64> = None;
    let mut buf: Vec<((i64, i64), &Rational)> = Vec::new();
    let mut flush =
        |n24: i64, buf: &mut Vec<((i64, i64), &Rational)>, out: &mut dyn Write| -> fmt::Result {
            if !first {
                out.write_str("+ ")?;
            }
            first = false;
            writeln!(out, "({}) q^{}", slice_text(buf), exponent(n24, 24))?;
            buf.clear();
            Ok(())
        };
    for (k, c) in f.terms() {
        if current != Some(k.n24) {
            if let Some(n) = current {
                flush(n, &mut buf, out)?;
            }
            current = Some(k.n24);
        }
        buf.push(((k.r2, k.s2), c));
    }
    if let Some(n) = current {
        flush(n, &mut buf, out)?;
        out.write_str("+ ")?;
    }
    write!(out, "O(q^{})", exponent(f.prec24(), 24))
}

impl JacobiSeries {
    /// Text of the `q^(n24/24)` slice without the q-power, e.g.
    /// `"z^-1 + 10 + z"`; `"0"` for an empty slice.
    pub fn render_slice(&self, n24: i64) -> String {
        let terms: Vec<_> = self.slice(n24).map(|(k, c)| ((k.r2, k.s2), c)).collect();
        if terms.is_empty() {
            return String::from("0");
        }
        slice_text(&terms)
    }
}

impl fmt::Display for JacobiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        series_text(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ExponentKey, SeriesIndex};
    use alloc::string::ToString;

    #[test]
    fn a2_style_row() {
        let keys = [
            (-2, -2, 1),
            (-2, 0, 1),
            (0, -2, 1),
            (0, 0, -6),
            (2, 0, 1),
            (0, 2, 1),
            (2, 2, 1),
        ];
        let f = JacobiSeries::from_terms(
            keys.iter()
                .map(|&(r, s, c)| (ExponentKey::new(0, r, s), Rational::from_int(c))),
            24,
            -4,
            SeriesIndex::RankTwo(crate::Gram::new(2, 1, 2)),
        );
        assert_eq!(
            f.to_string(),
            "(z^-1 w^-1 + z^-1 + w^-1 - 6 + z + w + z w) q^0\n+ O(q^1)"
        );
    }

    #[test]
    fn half_exponents_and_fractions() {
        let f = JacobiSeries::from_terms(
            [
                (ExponentKey::new(3, -1, 0), Rational::new(-1, 2)),
                (ExponentKey::new(3, 1, 0), Rational::from_int(3)),
            ],
            27,
            1,
            SeriesIndex::rank_one(1),
        );
        assert_eq!(f.to_string(), "(-1/2 z^-1/2 + 3 z^1/2) q^1/8\n+ O(q^9/8)");
        let zero = JacobiSeries::zero(48, 0, SeriesIndex::rank_one(0));
        assert_eq!(zero.to_string(), "O(q^2)");
    }
}
