//! Latin square whitening, S-boxes and P-boxes, each with its exact inverse.
//!
//! All primitives work on an `N x N` [`SymbolBlock`] and an order-`N`
//! [`LatinSquare`]. At cipher scale `N = 256` and symbols are pixel bytes;
//! smaller orders exist so the algebra can be checked exhaustively.

use crate::error::{Error, Result};
use crate::latin::{LatinSquare, MAX_ORDER, MIN_ORDER};

/// `N x N` row-major array of symbols in `0..N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymbolBlock {
    order: usize,
    data: Vec<u8>,
}

impl SymbolBlock {
    pub fn new(order: usize, data: Vec<u8>) -> Result<Self> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
            return Err(Error::InvalidOrder(order));
        }
        if data.len() != order * order {
            return Err(Error::LengthMismatch {
                expected: order * order,
                actual: data.len(),
            });
        }
        if let Some(&s) = data.iter().find(|&&s| s as usize >= order) {
            return Err(Error::SymbolOutOfRange { symbol: s, order });
        }
        Ok(Self { order, data })
    }

    pub fn filled(order: usize, value: u8) -> Result<Self> {
        Self::new(order, vec![value; order * order])
    }

    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> u8) -> Result<Self> {
        let mut data = Vec::with_capacity(order * order);
        for r in 0..order {
            for c in 0..order {
                data.push(f(r, c));
            }
        }
        Self::new(order, data)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.order + c]
    }

    /// Sets a symbol, reduced modulo the order.
    pub fn set(&mut self, r: usize, c: usize, value: u8) {
        let v = (value as usize % self.order) as u8;
        self.data[r * self.order + c] = v;
    }

    fn same_shape(&self) -> Self {
        Self {
            order: self.order,
            data: vec![0; self.data.len()],
        }
    }
}

impl std::fmt::Debug for SymbolBlock {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.order <= 8 {
            let rows: Vec<&[u8]> = self.data.chunks(self.order).collect();
            f.debug_struct("SymbolBlock")
                .field("order", &self.order)
                .field("rows", &rows)
                .finish()
        } else {
            f.debug_struct("SymbolBlock")
                .field("order", &self.order)
                .finish_non_exhaustive()
        }
    }
}

fn check_orders(l: &LatinSquare, b: &SymbolBlock) -> Result<usize> {
    if l.order() != b.order() {
        return Err(Error::OrderMismatch {
            square: l.order(),
            block: b.order(),
        });
    }
    Ok(b.order())
}

/// Spatial flip: 0 = identity, 1 = up-down, 2 = left-right. Each is an involution.
pub fn spatial_rotate(x: &SymbolBlock, d: u8) -> Result<SymbolBlock> {
    let n = x.order;
    match d {
        0 => Ok(x.clone()),
        1 => {
            let mut out = x.same_shape();
            for (dst, src) in out
                .data
                .chunks_exact_mut(n)
                .zip(x.data.chunks_exact(n).rev())
            {
                dst.copy_from_slice(src);
            }
            Ok(out)
        }
        2 => {
            let mut out = x.clone();
            for row in out.data.chunks_exact_mut(n) {
                row.reverse();
            }
            Ok(out)
        }
        _ => Err(Error::InvalidDirection(d)),
    }
}

fn check_whitening(l: &LatinSquare, b: &SymbolBlock) -> Result<()> {
    let n = check_orders(l, b)?;
    if !n.is_power_of_two() {
        return Err(Error::NonPowerOfTwoOrder(n));
    }
    Ok(())
}

fn xor_square(block: &mut SymbolBlock, l: &LatinSquare) {
    for (x, k) in block.data.iter_mut().zip(l.cells()) {
        *x ^= k;
    }
}

/// `C = SR(P, D mod 3) xor L`.
pub fn whiten_encrypt(l: &LatinSquare, p: &SymbolBlock, d: u8) -> Result<SymbolBlock> {
    check_whitening(l, p)?;
    let mut c = spatial_rotate(p, d % 3)?;
    xor_square(&mut c, l);
    Ok(c)
}

/// `P = SR(C xor L, D mod 3)`.
pub fn whiten_decrypt(l: &LatinSquare, c: &SymbolBlock, d: u8) -> Result<SymbolBlock> {
    check_whitening(l, c)?;
    let mut x = c.clone();
    xor_square(&mut x, l);
    spatial_rotate(&x, d % 3)
}

/// Row S-box: each column is chained top to bottom,
/// `C(r, c) = L(C(r-1, c), P(r, c))` with row 0 keyed by `L(0, .)`.
pub fn lsrs_encrypt(l: &LatinSquare, p: &SymbolBlock) -> Result<SymbolBlock> {
    let n = check_orders(l, p)?;
    let mut c = p.same_shape();
    // previous ciphertext row starts as all zeros, which selects L's row 0
    let mut prev = vec![0u8; n];
    for r in 0..n {
        let src = &p.data[r * n..(r + 1) * n];
        let dst = &mut c.data[r * n..(r + 1) * n];
        for col in 0..n {
            let y = l.get(prev[col] as usize, src[col] as usize);
            dst[col] = y;
            prev[col] = y;
        }
    }
    Ok(c)
}

pub fn lsrs_decrypt(l: &LatinSquare, c: &SymbolBlock) -> Result<SymbolBlock> {
    let n = check_orders(l, c)?;
    let mut p = c.same_shape();
    for r in 0..n {
        for col in 0..n {
            let key_row = if r == 0 {
                0
            } else {
                c.get(r - 1, col) as usize
            };
            p.data[r * n + col] = l.row_inverse(key_row)[c.get(r, col) as usize];
        }
    }
    Ok(p)
}

/// Column S-box: each row is chained left to right,
/// `C(r, c) = L(P(r, c), C(r, c-1))` with column 0 keyed by `L(., 0)`.
pub fn lscs_encrypt(l: &LatinSquare, p: &SymbolBlock) -> Result<SymbolBlock> {
    let n = check_orders(l, p)?;
    let mut c = p.same_shape();
    for (src, dst) in p.data.chunks_exact(n).zip(c.data.chunks_exact_mut(n)) {
        let mut prev = 0usize;
        for (x, y) in src.iter().zip(dst.iter_mut()) {
            *y = l.get(*x as usize, prev);
            prev = *y as usize;
        }
    }
    Ok(c)
}

pub fn lscs_decrypt(l: &LatinSquare, c: &SymbolBlock) -> Result<SymbolBlock> {
    let n = check_orders(l, c)?;
    let mut p = c.same_shape();
    for (src, dst) in c.data.chunks_exact(n).zip(p.data.chunks_exact_mut(n)) {
        let mut prev = 0usize;
        for (y, x) in src.iter().zip(dst.iter_mut()) {
            *x = l.column_inverse(prev)[*y as usize];
            prev = *y as usize;
        }
    }
    Ok(p)
}

/// Row P-box: `C(r, c) = P(r, L(r, c))`.
pub fn lsrp_forward(l: &LatinSquare, p: &SymbolBlock) -> Result<SymbolBlock> {
    let n = check_orders(l, p)?;
    let mut c = p.same_shape();
    for r in 0..n {
        let src = &p.data[r * n..(r + 1) * n];
        for (dst, &k) in c.data[r * n..(r + 1) * n].iter_mut().zip(l.row(r)) {
            *dst = src[k as usize];
        }
    }
    Ok(c)
}

/// `P(r, c) = C(r, IRM(L, r, c))`.
pub fn lsrp_inverse(l: &LatinSquare, c: &SymbolBlock) -> Result<SymbolBlock> {
    let n = check_orders(l, c)?;
    let mut p = c.same_shape();
    for r in 0..n {
        let src = &c.data[r * n..(r + 1) * n];
        for (dst, &k) in p.data[r * n..(r + 1) * n].iter_mut().zip(l.row_inverse(r)) {
            *dst = src[k as usize];
        }
    }
    Ok(p)
}

/// Column P-box: `C(r, c) = P(L(r, c), c)`.
pub fn lscp_forward(l: &LatinSquare, p: &SymbolBlock) -> Result<SymbolBlock> {
    let n = check_orders(l, p)?;
    let mut c = p.same_shape();
    for r in 0..n {
        for col in 0..n {
            c.data[r * n + col] = p.data[l.get(r, col) as usize * n + col];
        }
    }
    Ok(c)
}

/// `P(r, c) = C(ICM(L, r, c), c)`.
pub fn lscp_inverse(l: &LatinSquare, c: &SymbolBlock) -> Result<SymbolBlock> {
    let n = check_orders(l, c)?;
    let mut p = c.same_shape();
    for col in 0..n {
        let inv = l.column_inverse(col);
        for (r, &x) in inv.iter().enumerate() {
            p.data[r * n + col] = c.data[x as usize * n + col];
        }
    }
    Ok(p)
}

/// Row P-box followed by column P-box.
pub fn lsp_encrypt(l: &LatinSquare, p: &SymbolBlock) -> Result<SymbolBlock> {
    lscp_forward(l, &lsrp_forward(l, p)?)
}

pub fn lsp_decrypt(l: &LatinSquare, c: &SymbolBlock) -> Result<SymbolBlock> {
    lsrp_inverse(l, &lscp_inverse(l, c)?)
}
