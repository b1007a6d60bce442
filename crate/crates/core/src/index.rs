//! Rank-two index matrices in the `(a, b, c)` encoding
//! `[[a + b, b], [b, c + b]]`.

use core::fmt;
use core::str::FromStr;

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexMatrix {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

/// A permutation of the three slots `(a, b, c)`: entry `i` names the input
/// slot that lands in output slot `i`.
pub type Permutation = [usize; 3];

const PERMUTATIONS: [Permutation; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl IndexMatrix {
    pub const ZERO: IndexMatrix = IndexMatrix { a: 0, b: 0, c: 0 };
    /// The A2 root lattice `[[2, 1], [1, 2]]`.
    pub const A2: IndexMatrix = IndexMatrix { a: 1, b: 1, c: 1 };

    pub const fn new(a: u32, b: u32, c: u32) -> Self {
        IndexMatrix { a, b, c }
    }

    /// `(A, B, C)` to `(a, b, c) = (A - B, B, C - B)`. Fails when any entry
    /// would be negative; such matrices must be brought into this shape by
    /// a change of variables first.
    pub fn from_gram(xx: i64, xy: i64, yy: i64) -> Result<Self> {
        let (a, b, c) = (xx - xy, xy, yy - xy);
        let conv = |v: i64| u32::try_from(v).ok();
        match (conv(a), conv(b), conv(c)) {
            (Some(a), Some(b), Some(c)) => Ok(IndexMatrix { a, b, c }),
            _ => Err(Error::NotIndexMatrix { xx, xy, yy }),
        }
    }

    /// Gram entries `(A, B, C)` of `[[A, B], [B, C]]`.
    pub fn gram(&self) -> (i64, i64, i64) {
        let (a, b, c) = self.triple();
        (a + b, b, c + b)
    }

    pub fn triple(&self) -> (i64, i64, i64) {
        (self.a as i64, self.b as i64, self.c as i64)
    }

    fn as_array(&self) -> [u32; 3] {
        [self.a, self.b, self.c]
    }

    pub fn permute(&self, p: Permutation) -> Self {
        let v = self.as_array();
        IndexMatrix::new(v[p[0]], v[p[1]], v[p[2]])
    }

    /// `ab + ac + bc`.
    pub fn det(&self) -> i64 {
        let (a, b, c) = self.triple();
        a * b + a * c + b * c
    }

    pub fn is_positive_definite(&self) -> bool {
        self.det() > 0
    }

    /// `-(a + b + c)`, the lowest weight carrying a nonzero weak form.
    pub fn min_weight(&self) -> i64 {
        let (a, b, c) = self.triple();
        -(a + b + c)
    }

    /// The distinct images under the anharmonic group, which permutes
    /// `(a, b, c)`. Sorted.
    pub fn anharmonic_orbit(&self) -> Vec<IndexMatrix> {
        let mut out: Vec<IndexMatrix> = PERMUTATIONS.iter().map(|p| self.permute(*p)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// The orbit member with `b <= a <= c`, together with the permutation
    /// producing it. Among equal results the lexicographically smallest
    /// permutation is returned.
    pub fn reduce(&self) -> (IndexMatrix, Permutation) {
        PERMUTATIONS
            .iter()
            .map(|p| (self.permute(*p), *p))
            .filter(|(m, _)| m.b <= m.a && m.a <= m.c)
            .min_by_key(|(m, p)| ((m.b, m.a, m.c), *p))
            .expect("sorted arrangement always exists")
    }

    pub fn is_reduced(&self) -> bool {
        self.b <= self.a && self.a <= self.c
    }

    pub fn checked_sub(&self, o: &IndexMatrix) -> Option<IndexMatrix> {
        Some(IndexMatrix::new(
            self.a.checked_sub(o.a)?,
            self.b.checked_sub(o.b)?,
            self.c.checked_sub(o.c)?,
        ))
    }

    pub fn contains(&self, o: &IndexMatrix) -> bool {
        o.a <= self.a && o.b <= self.b && o.c <= self.c
    }

    /// All Gram entries even, i.e. `a`, `b`, `c` all even.
    pub fn is_even(&self) -> bool {
        self.a.is_multiple_of(2) && self.b.is_multiple_of(2) && self.c.is_multiple_of(2)
    }
}

impl core::ops::Add for IndexMatrix {
    type Output = IndexMatrix;
    fn add(self, o: IndexMatrix) -> IndexMatrix {
        IndexMatrix::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl fmt::Display for IndexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

/// Parses `"a,b,c"` or `"gram:A,B,C"`.
impl FromStr for IndexMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (gram, body) = match s.trim().strip_prefix("gram:") {
            Some(rest) => (true, rest),
            None => (false, s.trim()),
        };
        let parts: Vec<i64> = body
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<core::result::Result<_, _>>()
            .map_err(|e| Error::Parse(e.to_string()))?;
        let [x, y, z] = parts[..] else {
            return Err(Error::Parse(
                "expected three comma-separated integers".to_string(),
            ));
        };
        if gram {
            IndexMatrix::from_gram(x, y, z)
        } else {
            let conv = |v: i64| {
                u32::try_from(v)
                    .map_err(|_| Error::Parse("index entries must be nonnegative".to_string()))
            };
            Ok(IndexMatrix::new(conv(x)?, conv(y)?, conv(z)?))
        }
    }
}
