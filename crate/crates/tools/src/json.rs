//! JSON series format.
//!
//! ```json
//! { "weight": -2, "index": {"a": 1, "b": 1, "c": 1}, "rank": 2, "prec24": 48,
//!   "terms": [ {"n24": 0, "r2": -2, "s2": -2, "coeff": "1/1"}, ... ] }
//! ```
//!
//! Terms are sorted by `(n24, r2, s2)` and coefficients are always written
//! as `"p/q"`. Rank-one series carry `{"m2": 2m}` as their index. A weight
//! of the form `k + 1/2` is written as the string `"(2k+1)/2"`.

use jacobi_core::{ExponentKey, Gram, IndexMatrix, JacobiSeries, Rational, SeriesIndex};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WeightJson {
    Int(i64),
    Fraction(String),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum IndexJson {
    Matrix { a: u32, b: u32, c: u32 },
    RankOne { m2: i64 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    n24: i64,
    r2: i64,
    s2: i64,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesJson {
    weight: WeightJson,
    index: IndexJson,
    rank: u8,
    prec24: i64,
    terms: Vec<TermJson>,
}

fn to_doc(f: &JacobiSeries) -> Result<SeriesJson, JsonError> {
    let weight = if f.weight2() % 2 == 0 {
        WeightJson::Int(f.weight2() / 2)
    } else {
        WeightJson::Fraction(format!("{}/2", f.weight2()))
    };
    let index = match f.index() {
        SeriesIndex::RankOne { m2 } => IndexJson::RankOne { m2 },
        SeriesIndex::RankTwo(g) => {
            let m = g.to_index_matrix().map_err(|e| {
                JsonError::Format(format!("index cannot be written as (a, b, c): {e}"))
            })?;
            IndexJson::Matrix {
                a: m.a,
                b: m.b,
                c: m.c,
            }
        }
    };
    let terms = f
        .terms()
        .map(|(k, c)| TermJson {
            n24: k.n24,
            r2: k.r2,
            s2: k.s2,
            coeff: c.to_fraction_string(),
        })
        .collect();
    Ok(SeriesJson {
        weight,
        index,
        rank: f.rank(),
        prec24: f.prec24(),
        terms,
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_series(f: &JacobiSeries) -> Result<String, JsonError> {
    let mut s = serde_json::to_string_pretty(&to_doc(f)?)?;
    s.push('\n');
    Ok(s)
}

pub fn read_series(text: &str) -> Result<JacobiSeries, JsonError> {
    let doc: SeriesJson = serde_json::from_str(text)?;
    let bad = |m: String| JsonError::Format(m);
    let weight2 = match doc.weight {
        WeightJson::Int(k) => 2 * k,
        WeightJson::Fraction(s) => {
            let w: Rational = s.parse().map_err(|e| bad(format!("weight: {e}")))?;
            let twice = &w * &Rational::from_int(2);
            if !twice.is_integer() {
                return Err(bad(format!("weight {s} is not a multiple of 1/2")));
            }
            twice
                .numer()
                .try_into()
                .map_err(|_| bad(format!("weight {s} out of range")))?
        }
    };
    let index = match (doc.rank, doc.index) {
        (1, IndexJson::RankOne { m2 }) => SeriesIndex::RankOne { m2 },
        (2, IndexJson::Matrix { a, b, c }) => {
            SeriesIndex::RankTwo(Gram::from(IndexMatrix::new(a, b, c)))
        }
        (r, _) => return Err(bad(format!("index does not match rank {r}"))),
    };
    let mut terms = Vec::with_capacity(doc.terms.len());
    let mut last: Option<ExponentKey> = None;
    for t in doc.terms {
        let key = ExponentKey::new(t.n24, t.r2, t.s2);
        if last.is_some_and(|l| l >= key) {
            return Err(bad(format!("terms not strictly sorted at {key:?}")));
        }
        last = Some(key);
        if key.n24 >= doc.prec24 {
            return Err(bad(format!(
                "term at n24 = {} is beyond prec24 = {}",
                key.n24, doc.prec24
            )));
        }
        if doc.rank == 1 && key.s2 != 0 {
            return Err(bad("rank-one series with nonzero s2".into()));
        }
        let c: Rational = t
            .coeff
            .parse()
            .map_err(|e| bad(format!("coefficient {:?}: {e}", t.coeff)))?;
        terms.push((key, c));
    }
    Ok(JacobiSeries::from_terms(terms, doc.prec24, weight2, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_round_trip() {
        let f = jacobi_core::forms::theta(48);
        let text = write_series(&f).unwrap();
        assert!(text.contains("\"weight\": \"1/2\""));
        assert!(text.contains("\"m2\": 1"));
        assert_eq!(read_series(&text).unwrap(), f);
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let doc = r#"{"weight": 0, "index": {"m2": 2}, "rank": 2, "prec24": 24, "terms": []}"#;
        assert!(read_series(doc).is_err());
        let doc = r#"{"weight": 0, "index": {"m2": 2}, "rank": 1, "prec24": 24,
            "terms": [{"n24": 30, "r2": 0, "s2": 0, "coeff": "1/1"}]}"#;
        assert!(read_series(doc).is_err());
    }
}
