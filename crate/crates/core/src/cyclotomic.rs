//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! An element is a rational polynomial in `ζ = e^{2πi/m}` reduced modulo the
//! m-th cyclotomic polynomial `Φ_m`. Elements of different orders are combined
//! by embedding both into `Q(ζ_L)` with `L = lcm`. Rational values are always
//! stored at order 1 so that they compare and print canonically.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::scalar::{q, Field};

type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

/// Remainder and quotient of `a` divided by the nonzero polynomial `b`.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    let mut rem: Poly = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = rem.last().unwrap() / &lead;
        for (j, c) in b.iter().enumerate() {
            rem[shift + j] -= &factor * c;
        }
        quot[shift] = factor;
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<Poly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Poly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The m-th cyclotomic polynomial, lowest degree coefficient first.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Poly> {
    assert!(m > 0, "cyclotomic order must be positive");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by every Φ_d with d a proper divisor of m.
    let mut p = vec![BigRational::zero(); m as usize + 1];
    p[0] = q(-1);
    p[m as usize] = q(1);
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            let (quot, rem) = poly_divrem(&p, &phi_d);
            debug_assert!(rem.is_empty());
            p = quot;
        }
    }
    let p = Arc::new(p);
    cyclotomic_cache().lock().unwrap().insert(m, p.clone());
    p
}

/// Euler's totient, the degree of `Φ_m`.
pub fn totient(m: u32) -> usize {
    cyclotomic_polynomial(m).len() - 1
}

#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Poly,
}

impl Cyclotomic {
    fn reduced(order: u32, mut coeffs: Poly) -> Self {
        trim(&mut coeffs);
        let phi = cyclotomic_polynomial(order);
        if coeffs.len() >= phi.len() {
            coeffs = poly_divrem(&coeffs, &phi).1;
        }
        let mut c = Cyclotomic { order, coeffs };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        if self.coeffs.len() <= 1 {
            self.order = 1;
        }
    }

    pub fn rational(r: BigRational) -> Self {
        Self::reduced(1, vec![r])
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn zeta_pow(m: u32, k: i64) -> Self {
        assert!(m > 0);
        let e = k.rem_euclid(m as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = q(1);
        Self::reduced(m, coeffs)
    }

    /// The primitive root `ζ_m = e^{2πi/m}`.
    pub fn zeta(m: u32) -> Self {
        Self::zeta_pow(m, 1)
    }

    /// Order of the field the element is currently stored in.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Embeds into `Q(ζ_target)`; `target` must be a multiple of the order.
    fn lift(&self, target: u32) -> Poly {
        if target == self.order {
            return self.coeffs.clone();
        }
        assert!(target % self.order == 0);
        let step = (target / self.order) as usize;
        let mut out = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * step] = c.clone();
        }
        let phi = cyclotomic_polynomial(target);
        trim(&mut out);
        if out.len() >= phi.len() {
            out = poly_divrem(&out, &phi).1;
        }
        out
    }

    fn common(&self, other: &Self) -> (u32, Poly, Poly) {
        let l = self.order.lcm(&other.order);
        (l, self.lift(l), other.lift(l))
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z{}", self.order)?,
                _ => write!(f, "{c}*z{}^{i}", self.order)?,
            }
        }
        Ok(())
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Self) -> Self {
        let (l, mut a, b) = self.common(&rhs);
        if a.len() < b.len() {
            a.resize(b.len(), BigRational::zero());
        }
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        Self::reduced(l, a)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Self {
        for c in &mut self.coeffs {
            *c = -c.clone();
        }
        self
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Self) -> Self {
        let (l, a, b) = self.common(&rhs);
        Self::reduced(l, poly_mul(&a, &b))
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic { order: 1, coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic { order: 1, coeffs: vec![q(1)] }
    }
}

impl Field for Cyclotomic {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Extended Euclid in Q[x]: find s with s*f ≡ 1 mod Φ_order.
        let phi = cyclotomic_polynomial(self.order);
        let (mut r0, mut r1): (Poly, Poly) = ((*phi).clone(), self.coeffs.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![q(1)]);
        while !r1.is_empty() {
            let (quot, rem) = poly_divrem(&r0, &r1);
            let mut s2 = s0.clone();
            let qs = poly_mul(&quot, &s1);
            if s2.len() < qs.len() {
                s2.resize(qs.len(), BigRational::zero());
            }
            for (x, y) in s2.iter_mut().zip(qs) {
                *x -= y;
            }
            trim(&mut s2);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant since Φ is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let scale = r0[0].recip();
        let s: Poly = s0.into_iter().map(|c| c * &scale).collect();
        Some(Self::reduced(self.order, s))
    }

    fn from_i64(n: i64) -> Self {
        Self::rational(q(n))
    }

    fn from_rational(r: &BigRational) -> Self {
        Self::rational(r.clone())
    }

    fn conj(&self) -> Self {
        if self.order <= 2 {
            return self.clone();
        }
        let m = self.order as usize;
        let mut out = vec![BigRational::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(m - i) % m] += c;
        }
        Self::reduced(self.order, out)
    }

    fn to_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }
}
