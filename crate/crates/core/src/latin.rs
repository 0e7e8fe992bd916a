//! Latin squares over the symbol set `0..N`.
//!
//! A square of order `N` stores its cells row-major together with two inverse
//! tables, so that each row and each column can be used as a bijection on
//! `0..N` in both directions with a single lookup. These bijections are the
//! S-boxes and P-boxes of the cipher.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 256;

/// A permutation of `0..N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationSeq(Vec<usize>);

impl PermutationSeq {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, order: n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidArgument(format!(
                    "value {v} repeated in permutation"
                )));
            }
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl std::ops::Index<usize> for PermutationSeq {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

/// Index mapping from `q` to its ascending sorted version (argsort).
///
/// The result `p` satisfies `q[p[i]] <= q[p[i + 1]]`. Equal values keep
/// their original relative order.
pub fn sort_map<T: PartialOrd>(q: &[T]) -> Result<PermutationSeq> {
    if q.is_empty() {
        return Err(Error::EmptySequence);
    }
    // NaN-like values are not comparable with themselves.
    if q.iter().any(|v| v.partial_cmp(v).is_none()) {
        return Err(Error::Unordered);
    }
    let mut idx: Vec<usize> = (0..q.len()).collect();
    idx.sort_by(|&a, &b| q[a].partial_cmp(&q[b]).unwrap_or(Ordering::Equal));
    Ok(PermutationSeq(idx))
}

/// Left circular shift: `out[i] = q[(i + v) mod N]`.
pub fn row_shift(q: &PermutationSeq, v: usize) -> PermutationSeq {
    let mut out = q.0.clone();
    if !out.is_empty() {
        out.rotate_left(v % q.len());
    }
    PermutationSeq(out)
}

/// Latin square generator: row `r` is `Q_seed` left-shifted by `Q_shift[r]`.
pub fn lsg<T: PartialOrd>(q1: &[T], q2: &[T]) -> Result<LatinSquare> {
    if q1.len() != q2.len() {
        return Err(Error::LengthMismatch {
            expected: q1.len(),
            actual: q2.len(),
        });
    }
    let n = q1.len();
    if !(MIN_ORDER..=MAX_ORDER).contains(&n) {
        return Err(Error::InvalidOrder(n));
    }
    let seed = sort_map(q1)?;
    let shift = sort_map(q2)?;
    let mut cells = Vec::with_capacity(n * n);
    for r in 0..n {
        let row = row_shift(&seed, shift[r]);
        cells.extend(row.0.iter().map(|&s| s as u8));
    }
    Ok(LatinSquare::from_cells_unchecked(n, cells))
}

/// An order-`N` Latin square with precomputed row and column inverses.
#[derive(Clone, PartialEq, Eq)]
pub struct LatinSquare {
    order: usize,
    cells: Vec<u8>,
    // row_inv[r * N + y] = x such that cells[r][x] = y
    row_inv: Vec<u8>,
    // col_inv[c * N + y] = x such that cells[x][c] = y
    col_inv: Vec<u8>,
}

impl LatinSquare {
    /// Builds a square from row-major cells, rejecting anything that is not
    /// a Latin square.
    pub fn from_cells(order: usize, cells: Vec<u8>) -> Result<Self> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
            return Err(Error::InvalidOrder(order));
        }
        if cells.len() != order * order {
            return Err(Error::LengthMismatch {
                expected: order * order,
                actual: cells.len(),
            });
        }
        if let Some(&s) = cells.iter().find(|&&s| s as usize >= order) {
            return Err(Error::SymbolOutOfRange { symbol: s, order });
        }
        let sq = Self::from_cells_unchecked(order, cells);
        if sq.validate() {
            Ok(sq)
        } else {
            Err(Error::NotLatin)
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            cells.extend_from_slice(row);
        }
        Self::from_cells(n, cells)
    }

    /// Builds the inverse tables without checking the Latin property.
    /// The result may fail [`LatinSquare::validate`].
    ///
    /// # Panics
    /// Panics if `cells.len() != order * order` or a symbol is `>= order`.
    pub fn from_cells_unchecked(order: usize, cells: Vec<u8>) -> Self {
        assert_eq!(cells.len(), order * order);
        let mut row_inv = vec![0u8; order * order];
        let mut col_inv = vec![0u8; order * order];
        for r in 0..order {
            for c in 0..order {
                let y = cells[r * order + c] as usize;
                assert!(y < order, "symbol {y} out of range for order {order}");
                row_inv[r * order + y] = c as u8;
                col_inv[c * order + y] = r as u8;
            }
        }
        Self {
            order,
            cells,
            row_inv,
            col_inv,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.cells[r * self.order + c]
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u8] {
        &self.cells[r * self.order..(r + 1) * self.order]
    }

    /// Inverse of row `r`: `row_inverse(r)[y]` is the column holding `y`.
    #[inline]
    pub fn row_inverse(&self, r: usize) -> &[u8] {
        &self.row_inv[r * self.order..(r + 1) * self.order]
    }

    /// Inverse of column `c`: `column_inverse(c)[y]` is the row holding `y`.
    #[inline]
    pub fn column_inverse(&self, c: usize) -> &[u8] {
        &self.col_inv[c * self.order..(c + 1) * self.order]
    }

    fn check(&self, index: usize) -> Result<()> {
        if index < self.order {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                order: self.order,
            })
        }
    }

    /// Forward row mapping: `L(r, x)`.
    pub fn frm(&self, r: usize, x: usize) -> Result<u8> {
        self.check(r)?;
        self.check(x)?;
        Ok(self.get(r, x))
    }

    /// Inverse row mapping: the column `x` with `L(r, x) = y`.
    pub fn irm(&self, r: usize, y: usize) -> Result<u8> {
        self.check(r)?;
        self.check(y)?;
        Ok(self.row_inv[r * self.order + y])
    }

    /// Forward column mapping: `L(x, c)`.
    pub fn fcm(&self, x: usize, c: usize) -> Result<u8> {
        self.check(x)?;
        self.check(c)?;
        Ok(self.get(x, c))
    }

    /// Inverse column mapping: the row `x` with `L(x, c) = y`.
    pub fn icm(&self, y: usize, c: usize) -> Result<u8> {
        self.check(y)?;
        self.check(c)?;
        Ok(self.col_inv[c * self.order + y])
    }

    /// True iff every row and column is a permutation of `0..N` and both
    /// inverse tables agree with the cells.
    pub fn validate(&self) -> bool {
        let n = self.order;
        if !(MIN_ORDER..=MAX_ORDER).contains(&n)
            || self.cells.len() != n * n
            || self.row_inv.len() != n * n
            || self.col_inv.len() != n * n
        {
            return false;
        }
        let mut seen = vec![false; n];
        for r in 0..n {
            seen.fill(false);
            for &y in self.row(r) {
                let y = y as usize;
                if y >= n || std::mem::replace(&mut seen[y], true) {
                    return false;
                }
            }
        }
        for c in 0..n {
            seen.fill(false);
            for r in 0..n {
                let y = self.get(r, c) as usize;
                if std::mem::replace(&mut seen[y], true) {
                    return false;
                }
            }
        }
        for r in 0..n {
            let row = self.row(r);
            let inv = self.row_inverse(r);
            for (y, &x) in inv.iter().enumerate() {
                if x as usize >= n || row[x as usize] as usize != y {
                    return false;
                }
            }
        }
        for c in 0..n {
            let inv = self.column_inverse(c);
            for (y, &x) in inv.iter().enumerate() {
                if x as usize >= n || self.get(x as usize, c) as usize != y {
                    return false;
                }
            }
        }
        true
    }

    /// Debug text form: `N` lines of `N` space-separated decimal symbols.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.order {
            let mut first = true;
            for &s in self.row(r) {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                write!(f, "{s}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatinSquare")
            .field("order", &self.order)
            .field("row0", &self.row(0))
            .finish_non_exhaustive()
    }
}

impl FromStr for LatinSquare {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in s.lines().filter(|l| !l.trim().is_empty()).enumerate() {
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u8>()
                        .map_err(|e| Error::InvalidArgument(format!("line {}: {t:?}: {e}", i + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }
}
