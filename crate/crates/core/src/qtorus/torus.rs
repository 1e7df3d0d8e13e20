//! Quantum tori with `±1` commutation signs and the involution `x̄_i = e_i x_i`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{box_points, mask_of, Semilattice};
use crate::scalar::Field;

/// `e ∈ {±1}^ν` and a symmetric `±1` matrix `q` with unit diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TorusRepr")]
pub struct TorusPresentation {
    e: Vec<i64>,
    q: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct TorusRepr {
    e: Vec<i64>,
    q: Vec<Vec<i64>>,
}

impl TryFrom<TorusRepr> for TorusPresentation {
    type Error = Error;
    fn try_from(r: TorusRepr) -> Result<Self> {
        TorusPresentation::new(r.e, r.q)
    }
}

impl TorusPresentation {
    pub fn new(e: Vec<i64>, q: Vec<Vec<i64>>) -> Result<Self> {
        let nu = e.len();
        if nu == 0 {
            return Err(Error::Invalid("a quantum torus needs at least one variable".into()));
        }
        if e.iter().any(|&x| x != 1 && x != -1) {
            return Err(Error::Invalid("entries of e must be 1 or -1".into()));
        }
        if q.len() != nu || q.iter().any(|r| r.len() != nu) {
            return Err(Error::RankMismatch { expected: nu, got: q.len() });
        }
        for i in 0..nu {
            if q[i][i] != 1 {
                return Err(Error::Invalid(format!("q[{i}][{i}] must be 1")));
            }
            for j in 0..nu {
                if q[i][j] != 1 && q[i][j] != -1 {
                    return Err(Error::Invalid("entries of q must be 1 or -1".into()));
                }
                if q[i][j] != q[j][i] {
                    return Err(Error::Invalid(format!("q is not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(TorusPresentation { e, q })
    }

    /// Laurent polynomials with the identity involution.
    pub fn commutative(nu: usize) -> Self {
        TorusPresentation { e: vec![1; nu], q: vec![vec![1; nu]; nu] }
    }

    pub fn nu(&self) -> usize {
        self.e.len()
    }

    pub fn e(&self) -> &[i64] {
        &self.e
    }

    pub fn q(&self) -> &[Vec<i64>] {
        &self.q
    }

    pub fn is_commutative(&self) -> bool {
        self.q.iter().flatten().all(|&x| x == 1)
    }

    pub fn has_trivial_involution(&self) -> bool {
        self.e.iter().all(|&x| x == 1) && self.is_commutative()
    }

    /// `c(δ, τ) = Π_{i>j} q_ij^{δ_i τ_j}` with `x^δ x^τ = c(δ, τ) x^{δ+τ}`.
    pub fn cocycle(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut odd = 0;
        for i in 0..self.nu() {
            for j in 0..i {
                if self.q[i][j] == -1 {
                    odd ^= (a[i] * b[j]).rem_euclid(2);
                }
            }
        }
        1 - 2 * odd
    }

    /// `m(δ) = Σ_{i∈I_e} n_i + Σ_{(i,j)∈J_q} n_i n_j` modulo 2, so that `x̄^δ = (-1)^{m(δ)} x^δ`.
    pub fn bar_parity(&self, d: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.nu() {
            if self.e[i] == -1 {
                s += d[i];
            }
            for j in i + 1..self.nu() {
                if self.q[i][j] == -1 {
                    s += d[i] * d[j];
                }
            }
        }
        s.rem_euclid(2)
    }

    pub fn bar_sign(&self, d: &[i64]) -> i64 {
        1 - 2 * self.bar_parity(d)
    }

    /// `x^δ` commutes with every generator.
    pub fn is_central(&self, d: &[i64]) -> bool {
        (0..self.nu()).all(|i| (0..self.nu()).filter(|&j| self.q[i][j] == -1).map(|j| d[j]).sum::<i64>().rem_euclid(2) == 0)
    }

    /// `x^δ ∈ [A, A]`. For `±1` signs this happens exactly when `x^δ` is not central:
    /// if `x_i x^δ = -x^δ x_i` then `[x_i, x_i^{-1} x^δ]` is a nonzero multiple of `x^δ`.
    pub fn in_commutator(&self, d: &[i64]) -> bool {
        !self.is_central(d)
    }

    /// Searches for a split `δ = a + b` with `a` in a box and `c(a,b) ≠ c(b,a)`.
    pub fn commutator_by_search(&self, d: &[i64], radius: i64) -> bool {
        box_points(radius, self.nu()).any(|a| {
            let b: Vec<i64> = d.iter().zip(&a).map(|(x, y)| x - y).collect();
            self.cocycle(&a, &b) != self.cocycle(&b, &a)
        })
    }

    /// `Z_{e,q} = {δ : m(δ) ≡ 0 mod 2}` as a union of cosets of `2Z^ν`.
    pub fn z_eq(&self) -> Semilattice {
        let nu = self.nu();
        let masks = (0..1u64 << nu).filter(|&c| {
            let d: Vec<i64> = (0..nu).map(|i| ((c >> i) & 1) as i64).collect();
            self.bar_parity(&d) == 0
        });
        Semilattice::new(nu, masks.collect::<Vec<_>>()).expect("contains the zero coset")
    }

    /// Complement `Z^c_{e,q}`, as parity masks.
    pub fn z_eq_complement(&self) -> Vec<u64> {
        let z = self.z_eq();
        (0..1u64 << self.nu()).filter(|c| !z.contains_mask(*c)).collect()
    }

    pub fn in_z_eq(&self, d: &[i64]) -> bool {
        self.z_eq().contains_mask(mask_of(d))
    }

    pub fn mul<T: Field>(&self, a: &TorusElement<T>, b: &TorusElement<T>) -> Result<TorusElement<T>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked<T: Field>(&self, a: &TorusElement<T>, b: &TorusElement<T>) -> TorusElement<T> {
        let mut out = TorusElement::zero(a.nu);
        for (da, ca) in &a.terms {
            for (db, cb) in &b.terms {
                let d: Vec<i64> = da.iter().zip(db).map(|(x, y)| x + y).collect();
                let c = ca.clone() * cb.clone() * T::from_i64(self.cocycle(da, db));
                out.add_term(d, c);
            }
        }
        out
    }

    /// The anti-automorphism extending `x̄_i = e_i x_i`, conjugating coefficients.
    pub fn bar<T: Field>(&self, a: &TorusElement<T>) -> TorusElement<T> {
        let mut out = TorusElement::zero(a.nu);
        for (d, c) in &a.terms {
            out.add_term(d.clone(), c.conj() * T::from_i64(self.bar_sign(d)));
        }
        out
    }

    /// Inverse of `c x^δ`.
    pub fn inverse_monomial<T: Field>(&self, a: &TorusElement<T>) -> Option<TorusElement<T>> {
        if a.terms.len() != 1 {
            return None;
        }
        let (d, c) = a.terms.iter().next()?;
        let neg: Vec<i64> = d.iter().map(|x| -x).collect();
        let sign = self.cocycle(d, &neg);
        let coeff = c.inv()? * T::from_i64(sign);
        Some(TorusElement::monomial(neg, coeff))
    }

    fn check<T: Field>(&self, a: &TorusElement<T>) -> Result<()> {
        if a.nu != self.nu() {
            return Err(Error::RankMismatch { expected: self.nu(), got: a.nu });
        }
        Ok(())
    }
}

/// A finite sum `Σ c_δ x^δ` with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElement<T> {
    nu: usize,
    terms: BTreeMap<Vec<i64>, T>,
}

impl<T: Field> TorusElement<T> {
    pub fn zero(nu: usize) -> Self {
        TorusElement { nu, terms: BTreeMap::new() }
    }

    pub fn one(nu: usize) -> Self {
        Self::monomial(vec![0; nu], T::one())
    }

    pub fn monomial(d: Vec<i64>, c: T) -> Self {
        let mut out = Self::zero(d.len());
        out.add_term(d, c);
        out
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, T> {
        &self.terms
    }

    pub fn coefficient(&self, d: &[i64]) -> T {
        self.terms.get(d).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, d: Vec<i64>, c: T) {
        debug_assert_eq!(d.len(), self.nu);
        let entry = self.terms.entry(d.clone()).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
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
        let mut out = Self::zero(self.nu);
        for (d, c) in &self.terms {
            out.add_term(d.clone(), c.clone() * s.clone());
        }
        out
    }
}

impl<T: Field + fmt::Display> fmt::Display for TorusElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(d, c)| {
                let exps: Vec<String> = d.iter().map(|x| x.to_string()).collect();
                format!("{c}*x^({})", exps.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use crate::Rational;

    fn mono(d: &[i64]) -> TorusElement<Rational> {
        TorusElement::monomial(d.to_vec(), q(1))
    }

    fn quantum_plane() -> TorusPresentation {
        TorusPresentation::new(vec![1, 1], vec![vec![1, -1], vec![-1, 1]]).unwrap()
    }

    #[test]
    fn normal_form_reordering() {
        let t = quantum_plane();
        let p = t.mul(&mono(&[0, 1]), &mono(&[1, 0])).unwrap();
        assert_eq!(p, TorusElement::monomial(vec![1, 1], q(-1)));
        let c = TorusPresentation::commutative(2);
        assert_eq!(c.mul(&mono(&[0, 1]), &mono(&[1, 0])).unwrap(), mono(&[1, 1]));
        assert!(t.mul(&mono(&[1]), &mono(&[1, 0])).is_err());
    }

    #[test]
    fn involution_signs() {
        let t = TorusPresentation::new(vec![-1, 1], vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(t.bar(&mono(&[1, 0])), TorusElement::monomial(vec![1, 0], q(-1)));
        let t = quantum_plane();
        assert_eq!(t.bar(&mono(&[1, 1])), TorusElement::monomial(vec![1, 1], q(-1)));
        // bar(x1 x2) = bar(x2) bar(x1) = x2 x1
        let x1x2 = t.mul(&mono(&[1, 0]), &mono(&[0, 1])).unwrap();
        let rhs = t.mul(&t.bar(&mono(&[0, 1])), &t.bar(&mono(&[1, 0]))).unwrap();
        assert_eq!(t.bar(&x1x2), rhs);
    }

    #[test]
    fn z_eq_cosets() {
        assert_eq!(TorusPresentation::commutative(2).z_eq(), Semilattice::full(2));
        let t = TorusPresentation::new(vec![-1], vec![vec![1]]).unwrap();
        assert_eq!(t.z_eq().to_strings(), vec!["0"]);
        let z = quantum_plane().z_eq();
        let mut s = z.to_strings();
        s.sort();
        assert_eq!(s, vec!["00", "01", "10"]);
        assert!(!z.is_lattice());
    }

    #[test]
    fn z_eq_is_bar_fixed() {
        let t = TorusPresentation::new(vec![-1, 1, 1], vec![vec![1, -1, 1], vec![-1, 1, -1], vec![1, -1, 1]]).unwrap();
        for d in box_points(2, 3) {
            let fixed = t.bar(&mono(&d)) == mono(&d);
            assert_eq!(fixed, t.in_z_eq(&d), "{d:?}");
        }
    }

    #[test]
    fn commutator_test_matches_search() {
        let t = TorusPresentation::new(vec![1, 1, 1], vec![vec![1, -1, 1], vec![-1, 1, 1], vec![1, 1, 1]]).unwrap();
        for d in box_points(2, 3) {
            assert_eq!(t.in_commutator(&d), t.commutator_by_search(&d, 4), "{d:?}");
        }
    }

    #[test]
    fn monomial_inverse() {
        let t = quantum_plane();
        let a = TorusElement::monomial(vec![1, 1], q(3));
        let inv = t.inverse_monomial(&a).unwrap();
        assert_eq!(t.mul(&a, &inv).unwrap(), TorusElement::one(2));
        assert_eq!(t.mul(&inv, &a).unwrap(), TorusElement::one(2));
    }
}
