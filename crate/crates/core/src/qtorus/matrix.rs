//! Sparse `n × n` matrices over a quantum torus.

use std::collections::BTreeMap;

use super::torus::{TorusElement, TorusPresentation};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusMatrix<T> {
    n: usize,
    nu: usize,
    entries: BTreeMap<(usize, usize), TorusElement<T>>,
}

impl<T: Field> TorusMatrix<T> {
    pub fn zero(n: usize, nu: usize) -> Self {
        TorusMatrix { n, nu, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize, nu: usize) -> Self {
        let mut m = Self::zero(n, nu);
        for i in 0..n {
            m.set(i, i, TorusElement::one(nu));
        }
        m
    }

    /// `c x^δ e_pq`.
    pub fn unit(n: usize, p: usize, q: usize, d: Vec<i64>, c: T) -> Self {
        let nu = d.len();
        let mut m = Self::zero(n, nu);
        m.set(p, q, TorusElement::monomial(d, c));
        m
    }

    /// Block matrix from a grid of blocks; `None` marks a zero block.
    pub fn from_blocks(sizes: &[usize], nu: usize, blocks: &[Vec<Option<TorusMatrix<T>>>]) -> Self {
        let n = sizes.iter().sum();
        let offsets: Vec<usize> = sizes.iter().scan(0, |acc, s| {
            let o = *acc;
            *acc += s;
            Some(o)
        }).collect();
        let mut m = Self::zero(n, nu);
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                let Some(b) = block else { continue };
                assert_eq!((b.n, b.n), (sizes[bi], sizes[bj]), "square blocks only");
                for (&(i, j), v) in &b.entries {
                    m.set(offsets[bi] + i, offsets[bj] + j, v.clone());
                }
            }
        }
        m
    }

    /// Rectangular sub-block as a map, rows `r0..r0+h`, cols `c0..c0+w`.
    pub fn block(&self, r0: usize, h: usize, c0: usize, w: usize) -> Block<T> {
        let mut entries = BTreeMap::new();
        for (&(i, j), v) in &self.entries {
            if (r0..r0 + h).contains(&i) && (c0..c0 + w).contains(&j) {
                entries.insert((i - r0, j - c0), v.clone());
            }
        }
        Block { rows: h, cols: w, nu: self.nu, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), TorusElement<T>> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> TorusElement<T> {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(|| TorusElement::zero(self.nu))
    }

    pub fn set(&mut self, i: usize, j: usize, v: TorusElement<T>) {
        assert!(i < self.n && j < self.n, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            let s = out.get(i, j).add(v);
            out.set(i, j, s);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(self.n, self.nu);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, v.scale(s));
        }
        out
    }

    pub fn mul(&self, t: &TorusPresentation, other: &Self) -> Self {
        let mut out = Self::zero(self.n, self.nu);
        for (&(i, k), a) in &self.entries {
            for (&(k2, j), b) in other.entries.range((k, 0)..(k + 1, 0)) {
                debug_assert_eq!(k, k2);
                let s = out.get(i, j).add(&t.mul_unchecked(a, b));
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn bracket(&self, t: &TorusPresentation, other: &Self) -> Self {
        self.mul(t, other).sub(&other.mul(t, self))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.n, self.nu);
        for (&(i, j), v) in &self.entries {
            out.set(j, i, v.clone());
        }
        out
    }

    /// Entrywise involution.
    pub fn bar(&self, t: &TorusPresentation) -> Self {
        let mut out = Self::zero(self.n, self.nu);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, t.bar(v));
        }
        out
    }

    pub fn trace(&self) -> TorusElement<T> {
        (0..self.n).fold(TorusElement::zero(self.nu), |acc, i| acc.add(&self.get(i, i)))
    }

    /// `ε(tr(AB))`: the coefficient of `x^0` in the trace of the product.
    pub fn form(&self, t: &TorusPresentation, other: &Self) -> T {
        self.mul(t, other).trace().coefficient(&vec![0; self.nu])
    }

    /// Inverse of a matrix with exactly one monomial in every row and column.
    pub fn inverse_monomial(&self, t: &TorusPresentation) -> Option<Self> {
        if self.entries.len() != self.n {
            return None;
        }
        let mut out = Self::zero(self.n, self.nu);
        for (&(i, j), v) in &self.entries {
            if !out.get(j, i).is_zero() {
                return None;
            }
            out.set(j, i, t.inverse_monomial(v)?);
        }
        Some(out)
    }
}

/// Rectangular block used for shape predicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block<T> {
    pub rows: usize,
    pub cols: usize,
    nu: usize,
    entries: BTreeMap<(usize, usize), TorusElement<T>>,
}

impl<T: Field> Block<T> {
    pub fn zero(rows: usize, cols: usize, nu: usize) -> Self {
        Block { rows, cols, nu, entries: BTreeMap::new() }
    }

    pub fn diagonal(entries: Vec<TorusElement<T>>, nu: usize) -> Self {
        let n = entries.len();
        let mut b = Self::zero(n, n, nu);
        for (i, e) in entries.into_iter().enumerate() {
            b.set(i, i, e);
        }
        b
    }

    pub fn identity(n: usize, nu: usize) -> Self {
        Self::diagonal(vec![TorusElement::one(nu); n], nu)
    }

    pub fn get(&self, i: usize, j: usize) -> TorusElement<T> {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(|| TorusElement::zero(self.nu))
    }

    pub fn set(&mut self, i: usize, j: usize, v: TorusElement<T>) {
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.rows, self.cols, self.nu);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, v.neg());
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows, self.nu);
        for (&(i, j), v) in &self.entries {
            out.set(j, i, v.clone());
        }
        out
    }

    pub fn bar(&self, t: &TorusPresentation) -> Self {
        let mut out = Self::zero(self.rows, self.cols, self.nu);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, t.bar(v));
        }
        out
    }

    /// `Ȳᵗ`.
    pub fn bar_t(&self, t: &TorusPresentation) -> Self {
        self.bar(t).transpose()
    }

    pub fn mul(&self, t: &TorusPresentation, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols, self.nu);
        for (&(i, k), a) in &self.entries {
            for (&(k2, j), b) in &other.entries {
                if k == k2 {
                    let s = out.get(i, j).add(&t.mul_unchecked(a, b));
                    out.set(i, j, s);
                }
            }
        }
        out
    }
}
