//! Integer vectors, rational forms, semilattices as mod-2 coset sets, and
//! integer lattices.
//!
//! A semilattice of full rank in `Z^ν` containing 0 is a union of cosets of
//! `2Z^ν`, so it is stored as a set of `F₂^ν` bit masks. Bit `i` of a mask is
//! the parity of coordinate `i + 1`; in the string form the first character
//! is coordinate 1.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::Field;

/// Largest nullity the bit-mask representation supports.
pub const MAX_NULLITY: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn zeros(n: usize) -> Self {
        IntVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        IntVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    /// Parity pattern as a bit mask.
    pub fn mod2(&self) -> u64 {
        mask_of(&self.0)
    }

    /// Coordinatewise residues in `[0, m)`.
    pub fn residues(&self, m: i64) -> Self {
        IntVector(self.0.iter().map(|x| x.rem_euclid(m)).collect())
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.len(), rhs.len());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        assert_eq!(self.len(), rhs.len());
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub fn mask_of(v: &[i64]) -> u64 {
    v.iter().enumerate().fold(0, |acc, (i, x)| acc | (((x.rem_euclid(2)) as u64) << i))
}

/// Formats a coset mask with coordinate 1 first.
pub fn mask_string(mask: u64, nu: usize) -> String {
    (0..nu).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect()
}

fn parse_mask(s: &str, nu: usize) -> Result<u64> {
    if s.len() != nu {
        return Err(Error::RankMismatch { expected: nu, got: s.len() });
    }
    s.chars().enumerate().try_fold(0u64, |acc, (i, ch)| match ch {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << i),
        _ => Err(Error::Invalid(format!("bad coset character {ch:?} in {s:?}"))),
    })
}

/// A symmetric bilinear form, positive semidefinite on the first `finite`
/// coordinates and identically zero on the remaining (radical) ones.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<T> {
    gram: Matrix<T>,
    finite: usize,
}

impl<T: Field> Form<T> {
    /// Validates and wraps a Gram matrix. Positivity is tested exactly on
    /// every principal minor of the finite block, so `T` values there must be
    /// rational.
    pub fn new(gram: Matrix<T>, finite: usize) -> Result<Self> {
        let n = gram.rows();
        if !gram.is_square() || finite > n {
            return Err(Error::Invalid("gram matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[(i, j)] != gram[(j, i)] {
                    return Err(Error::Invalid(format!("gram not symmetric at ({i},{j})")));
                }
                if (i >= finite || j >= finite) && !gram[(i, j)].is_zero() {
                    return Err(Error::Invalid(format!("radical block nonzero at ({i},{j})")));
                }
            }
        }
        if finite > MAX_NULLITY {
            return Err(Error::Invalid("finite block too large for minor test".into()));
        }
        for subset in 1u32..(1u32 << finite) {
            let idx: Vec<usize> = (0..finite).filter(|i| subset >> i & 1 == 1).collect();
            let minor = Matrix::from_fn(idx.len(), idx.len(), |a, b| gram[(idx[a], idx[b])].clone());
            let det = minor
                .determinant()
                .to_rational()
                .ok_or_else(|| Error::Invalid("form values must be rational".into()))?;
            if det < BigRational::from_integer(0.into()) {
                return Err(Error::Invalid(format!("principal minor on {idx:?} is negative")));
            }
        }
        Ok(Form { gram, finite })
    }

    /// Block form `finite_gram ⊕ 0_nullity`.
    pub fn with_radical(finite_gram: &Matrix<T>, nullity: usize) -> Result<Self> {
        let f = finite_gram.rows();
        let gram = Matrix::from_fn(f + nullity, f + nullity, |i, j| {
            if i < f && j < f {
                finite_gram[(i, j)].clone()
            } else {
                T::zero()
            }
        });
        Self::new(gram, f)
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn finite_dim(&self) -> usize {
        self.finite
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn pair(&self, a: &[T], b: &[T]) -> T {
        dot(a, &self.gram.mul_vec(b))
    }

    pub fn scaled(&self, s: &T) -> Self {
        Form { gram: self.gram.scale(s), finite: self.finite }
    }
}

/// A union of cosets of `2Z^ν` in `Z^ν`.
///
/// Untranslated semilattices always contain the zero coset. The translated
/// variant drops that requirement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Semilattice {
    nullity: usize,
    cosets: BTreeSet<u64>,
    translated: bool,
}

impl Semilattice {
    pub fn new(nullity: usize, cosets: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::build(nullity, cosets, false)
    }

    pub fn translated(nullity: usize, cosets: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::build(nullity, cosets, true)
    }

    fn build(nullity: usize, cosets: impl IntoIterator<Item = u64>, translated: bool) -> Result<Self> {
        if nullity > MAX_NULLITY {
            return Err(Error::Invalid(format!("nullity {nullity} exceeds {MAX_NULLITY}")));
        }
        let cosets: BTreeSet<u64> = cosets.into_iter().collect();
        if cosets.iter().any(|&c| c >> nullity != 0) {
            return Err(Error::Invalid("coset outside F2^nullity".into()));
        }
        if !translated && !cosets.contains(&0) {
            return Err(Error::Invalid("semilattice must contain the zero coset".into()));
        }
        if cosets.is_empty() {
            return Err(Error::Invalid("empty coset set".into()));
        }
        Ok(Semilattice { nullity, cosets, translated })
    }

    pub fn from_strings<S: AsRef<str>>(nullity: usize, strings: &[S], translated: bool) -> Result<Self> {
        let masks = strings.iter().map(|s| parse_mask(s.as_ref(), nullity)).collect::<Result<Vec<_>>>()?;
        Self::build(nullity, masks, translated)
    }

    /// Infers the nullity from the first string.
    pub fn parse<S: AsRef<str>>(strings: &[S], translated: bool) -> Result<Self> {
        let nullity = strings.first().map_or(0, |s| s.as_ref().len());
        Self::from_strings(nullity, strings, translated)
    }

    /// All of `Z^ν`.
    pub fn full(nullity: usize) -> Self {
        Semilattice { nullity, cosets: (0..1u64 << nullity).collect(), translated: false }
    }

    /// `2Z^ν`.
    pub fn even(nullity: usize) -> Self {
        Semilattice { nullity, cosets: [0].into(), translated: false }
    }

    pub fn nullity(&self) -> usize {
        self.nullity
    }

    pub fn is_translated(&self) -> bool {
        self.translated
    }

    pub fn cosets(&self) -> &BTreeSet<u64> {
        &self.cosets
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.cosets.iter().map(|&c| mask_string(c, self.nullity)).collect()
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.cosets.contains(&mask)
    }

    pub fn contains(&self, delta: &[i64]) -> Result<bool> {
        if delta.len() != self.nullity {
            return Err(Error::RankMismatch { expected: self.nullity, got: delta.len() });
        }
        Ok(self.contains_mask(mask_of(delta)))
    }

    /// True iff the cosets form a subgroup of `F₂^ν`.
    pub fn is_lattice(&self) -> bool {
        self.cosets.contains(&0) && self.cosets.iter().all(|a| self.cosets.iter().all(|b| self.cosets.contains(&(a ^ b))))
    }

    pub fn sum(&self, other: &Semilattice) -> Result<Semilattice> {
        if self.nullity != other.nullity {
            return Err(Error::RankMismatch { expected: self.nullity, got: other.nullity });
        }
        let cosets: BTreeSet<u64> = self.cosets.iter().flat_map(|a| other.cosets.iter().map(move |b| a ^ b)).collect();
        let translated = !cosets.contains(&0);
        Ok(Semilattice { nullity: self.nullity, cosets, translated })
    }

    /// Smallest subgroup of `F₂^ν` containing every coset.
    pub fn lattice_span(&self) -> Semilattice {
        let mut span: BTreeSet<u64> = [0].into();
        for &c in &self.cosets {
            if span.contains(&c) {
                continue;
            }
            let shifted: Vec<u64> = span.iter().map(|s| s ^ c).collect();
            span.extend(shifted);
        }
        Semilattice { nullity: self.nullity, cosets: span, translated: false }
    }

    /// Translates a translated semilattice so that it contains the zero coset.
    pub fn recentered(&self) -> Semilattice {
        let shift = *self.cosets.iter().next().expect("nonempty");
        Semilattice { nullity: self.nullity, cosets: self.cosets.iter().map(|c| c ^ shift).collect(), translated: false }
    }
}

impl Serialize for Semilattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Semilattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        Semilattice::parse(&strings, false).map_err(serde::de::Error::custom)
    }
}

/// Iterates over `[0, M)^ν` in lexicographic order, last coordinate fastest.
#[derive(Clone, Debug)]
pub struct CosetEnumerator {
    modulus: i64,
    current: Option<Vec<i64>>,
}

impl CosetEnumerator {
    pub fn new(modulus: i64, rank: usize) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        CosetEnumerator { modulus, current: Some(vec![0; rank]) }
    }

    pub fn count(modulus: i64, rank: usize) -> usize {
        (modulus as usize).pow(rank as u32)
    }
}

impl Iterator for CosetEnumerator {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let out = self.current.take()?;
        let mut nxt = out.clone();
        let mut i = nxt.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            nxt[i] += 1;
            if nxt[i] < self.modulus {
                self.current = Some(nxt);
                break;
            }
            nxt[i] = 0;
        }
        Some(out)
    }
}

/// Iterates over the box `[-r, r]^ν`.
pub fn box_points(r: i64, rank: usize) -> impl Iterator<Item = Vec<i64>> {
    CosetEnumerator::new(2 * r + 1, rank).map(move |v| v.into_iter().map(|x| x - r).collect())
}

/// A subgroup of `Z^n` kept in row echelon (Hermite-style) form.
#[derive(Clone, Debug, Default)]
pub struct IntLattice {
    dim: usize,
    rows: Vec<Vec<i128>>,
}

impl IntLattice {
    pub fn new(dim: usize) -> Self {
        IntLattice { dim, rows: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn pivot(row: &[i128]) -> usize {
        row.iter().position(|&x| x != 0).expect("nonzero row")
    }

    pub fn insert(&mut self, v: &[i64]) {
        assert_eq!(v.len(), self.dim);
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for c in 0..self.dim {
            if v[c] == 0 {
                continue;
            }
            match self.rows.iter().position(|r| Self::pivot(r) == c) {
                Some(k) => {
                    let a = self.rows[k][c];
                    let b = v[c];
                    if b % a == 0 {
                        let f = b / a;
                        for (x, y) in v.iter_mut().zip(&self.rows[k]) {
                            *x -= f * y;
                        }
                    } else {
                        let eg = a.extended_gcd(&b);
                        let (g, s, t) = (eg.gcd, eg.x, eg.y);
                        let (ag, bg) = (a / g, b / g);
                        let row = self.rows[k].clone();
                        let new_row: Vec<i128> = row.iter().zip(&v).map(|(r, w)| s * r + t * w).collect();
                        let new_v: Vec<i128> = row.iter().zip(&v).map(|(r, w)| ag * w - bg * r).collect();
                        self.rows[k] = new_row;
                        v = new_v;
                    }
                }
                None => {
                    if v[c] < 0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                    self.rows.push(v);
                    self.rows.sort_by_key(|r| Self::pivot(r));
                    self.reduce_above();
                    return;
                }
            }
        }
        self.reduce_above();
    }

    /// Keeps entries above pivots in `[0, pivot)` so coefficients stay small.
    fn reduce_above(&mut self) {
        for k in 0..self.rows.len() {
            if self.rows[k][Self::pivot(&self.rows[k])] < 0 {
                self.rows[k].iter_mut().for_each(|x| *x = -*x);
            }
        }
        for k in 0..self.rows.len() {
            let p = Self::pivot(&self.rows[k]);
            let a = self.rows[k][p];
            for i in 0..k {
                let f = Integer::div_floor(&self.rows[i][p], &a);
                if f != 0 {
                    let src = self.rows[k].clone();
                    for (x, y) in self.rows[i].iter_mut().zip(&src) {
                        *x -= f * y;
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for r in &self.rows {
            let p = Self::pivot(r);
            if v[..p].iter().any(|&x| x != 0) {
                return false;
            }
            if v[p] % r[p] != 0 {
                return false;
            }
            let f = v[p] / r[p];
            for (x, y) in v.iter_mut().zip(r) {
                *x -= f * y;
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Echelon basis rows.
    pub fn basis(&self) -> Vec<Vec<i64>> {
        self.rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(strings: &[&str]) -> Semilattice {
        Semilattice::parse(strings, false).unwrap()
    }

    #[test]
    fn nonlattice_semilattice_membership() {
        let s = sl(&["000", "100", "010", "001"]);
        assert!(s.contains(&[1, 0, 0]).unwrap());
        assert!(!s.contains(&[1, 1, 1]).unwrap());
        assert!(s.contains(&[0, 0, 0]).unwrap());
        assert!(s.contains(&[-3, 2, 4]).unwrap());
        assert_eq!(s.contains(&[1, 0]), Err(Error::RankMismatch { expected: 3, got: 2 }));
        assert!(!s.is_lattice());
    }

    #[test]
    fn sums_and_spans() {
        let s = sl(&["000", "100", "010", "001"]);
        let ss = s.sum(&s).unwrap();
        assert_eq!(ss.to_strings().len(), 7);
        assert!(!ss.contains(&[1, 1, 1]).unwrap());
        assert_eq!(s.sum(&Semilattice::even(3)).unwrap(), s);
        assert_eq!(s.lattice_span(), Semilattice::full(3));
        let a = sl(&["00", "10"]);
        let b = sl(&["00", "01"]);
        assert_eq!(a.sum(&b).unwrap(), Semilattice::full(2));
        let c = sl(&["00", "11"]);
        assert_eq!(c.lattice_span(), c);
        assert!(sl(&["000", "100", "010", "110"]).is_lattice());
    }

    #[test]
    fn string_order_puts_coordinate_one_first() {
        let s = sl(&["000", "100"]);
        assert!(s.contains(&[1, 0, 0]).unwrap());
        assert!(!s.contains(&[0, 0, 1]).unwrap());
        assert_eq!(s.to_strings(), vec!["000", "100"]);
    }

    #[test]
    fn zero_coset_required_unless_translated() {
        assert!(Semilattice::parse(&["1"], false).is_err());
        let e = Semilattice::parse(&["1"], true).unwrap();
        assert!(e.is_translated());
        assert_eq!(e.recentered(), Semilattice::even(1));
    }

    #[test]
    fn enumerator_counts() {
        let all: Vec<_> = CosetEnumerator::new(3, 2).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[8], vec![2, 2]);
        let uniq: BTreeSet<_> = all.into_iter().collect();
        assert_eq!(uniq.len(), 9);
        assert_eq!(CosetEnumerator::new(5, 0).count(), 1);
        assert_eq!(box_points(1, 2).count(), 9);
    }

    #[test]
    fn integer_lattice_membership() {
        let mut l = IntLattice::new(3);
        l.insert(&[2, 0, 0]);
        l.insert(&[0, 2, 0]);
        l.insert(&[1, 1, 0]);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&[1, -1, 0]));
        assert!(!l.contains(&[1, 0, 0]));
        assert!(!l.contains(&[0, 0, 1]));
        l.insert(&[3, 0, 0]);
        assert!(l.contains(&[1, 0, 0]));
        assert!(l.contains(&[0, 1, 0]));
    }

    #[test]
    fn form_validation() {
        use crate::scalar::q;
        let g = Matrix::from_rows(vec![vec![q(2), q(-1)], vec![q(-1), q(2)]]);
        let f = Form::with_radical(&g, 1).unwrap();
        assert_eq!(f.dim(), 3);
        assert_eq!(f.pair(&[q(1), q(0), q(5)], &[q(0), q(1), q(7)]), q(-1));
        let bad = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(1)]]);
        assert!(Form::new(bad, 2).is_err());
    }
}
