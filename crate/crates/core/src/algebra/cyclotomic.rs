//! Elements of the cyclotomic fields `Q(zeta_e)`.
//!
//! An element is a rational polynomial in `zeta_e` reduced modulo the `e`-th
//! cyclotomic polynomial, stored in the power basis `1, zeta, ..., zeta^(phi(e)-1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::format_rational;

/// Coefficients (low degree first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial of index 0");
    // x^n - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = div_exact_int(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Exact division of integer polynomials by a monic divisor.
fn div_exact_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    debug_assert!(b[db].is_one());
    if rem.len() <= db {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = rem[k + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNumber {
    conductor: u32,
    coeffs: Vec<BigRational>,
}

type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    trim(&mut r);
    let mut b = b.clone();
    trim(&mut b);
    assert!(!b.is_empty(), "polynomial division by zero");
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        if r.len() <= k + db {
            continue;
        }
        let c = &r[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = &r[k + j] - &c * bj;
        }
        q[k] = c;
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

impl CycloNumber {
    fn modulus(e: u32) -> Poly {
        cyclotomic_polynomial(e).into_iter().map(BigRational::from_integer).collect()
    }

    fn from_poly(e: u32, p: Poly) -> Self {
        let (_, mut r) = poly_divrem(&p, &Self::modulus(e));
        r.resize(euler_phi(e), BigRational::zero());
        CycloNumber { conductor: e, coeffs: r }
    }

    pub fn zero(e: u32) -> Self {
        CycloNumber { conductor: e, coeffs: vec![BigRational::zero(); euler_phi(e)] }
    }

    pub fn from_rational(e: u32, q: BigRational) -> Self {
        Self::from_poly(e, vec![q])
    }

    pub fn one(e: u32) -> Self {
        Self::from_rational(e, BigRational::one())
    }

    /// `zeta_e^k`, any integer `k`.
    pub fn zeta_pow(e: u32, k: i64) -> Self {
        let k = k.rem_euclid(e as i64) as usize;
        let mut p = vec![BigRational::zero(); k + 1];
        p[k] = BigRational::one();
        Self::from_poly(e, p)
    }

    /// `exp(2 pi i * t)` for a rational `t` whose denominator divides `e`.
    pub fn root_of_unity(e: u32, t: &BigRational) -> Option<Self> {
        let scaled = t * BigRational::from_integer(BigInt::from(e));
        if !scaled.is_integer() {
            return None;
        }
        let k = scaled.to_integer().mod_floor(&BigInt::from(e));
        let k: i64 = k.try_into().ok()?;
        Some(Self::zeta_pow(e, k))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Re-expresses the element in `Q(zeta_f)` for a multiple `f` of the conductor.
    pub fn embed(&self, f: u32) -> Self {
        assert!(f.is_multiple_of(self.conductor), "conductor {} does not divide {}", self.conductor, f);
        if f == self.conductor {
            return self.clone();
        }
        let step = (f / self.conductor) as usize;
        let mut p = vec![BigRational::zero(); step * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * step] = c.clone();
        }
        Self::from_poly(f, p)
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.conductor == b.conductor {
            return (a.clone(), b.clone());
        }
        let l = a.conductor.lcm(&b.conductor);
        (a.embed(l), b.embed(l))
    }

    /// Coefficient of `zeta^0` in the power basis.
    pub fn rational_part(&self) -> BigRational {
        self.coeffs.first().cloned().unwrap_or_else(BigRational::zero)
    }

    /// The element as a rational, when it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs.iter().skip(1).all(Zero::is_zero).then(|| self.rational_part())
    }

    /// Complex conjugation, `zeta -> zeta^-1`.
    pub fn conj(&self) -> Self {
        let e = self.conductor as usize;
        let mut p = vec![BigRational::zero(); e];
        for (k, c) in self.coeffs.iter().enumerate() {
            let j = (e - k % e) % e;
            p[j] = &p[j] + c;
        }
        Self::from_poly(self.conductor, p)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // extended Euclid: s * a + t * m = g with g a nonzero constant
        let m = Self::modulus(self.conductor);
        let mut a = self.coeffs.clone();
        trim(&mut a);
        let (mut r0, mut r1) = (m, a);
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant since the modulus is irreducible
        let c = r1.first()?.recip();
        let inv: Poly = s1.iter().map(|x| x * &c).collect();
        Some(Self::from_poly(self.conductor, inv))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycloNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }
}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        let (a, b) = CycloNumber::common(self, rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        CycloNumber { conductor: a.conductor, coeffs }
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self + &(-rhs)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        let (a, b) = CycloNumber::common(self, rhs);
        CycloNumber::from_poly(a.conductor, poly_mul(&a.coeffs, &b.coeffs))
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format_rational(c),
                1 => format!("{}*z{}", format_rational(c), self.conductor),
                _ => format!("{}*z{}^{}", format_rational(c), self.conductor, k),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNumber({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn basic_identities() {
        let z2 = CycloNumber::zeta_pow(2, 1);
        assert_eq!(&z2 * &z2, CycloNumber::one(2));
        let i = CycloNumber::zeta_pow(4, 1);
        assert_eq!(&i * &i, CycloNumber::from_rational(4, BigRational::from_integer((-1).into())));
        let s = (0..3).fold(CycloNumber::zero(3), |acc, k| &acc + &CycloNumber::zeta_pow(3, k));
        assert!(s.is_zero());
    }

    #[test]
    fn conjugation_and_inverse() {
        let z = CycloNumber::zeta_pow(5, 2);
        assert_eq!(z.conj(), CycloNumber::zeta_pow(5, 3));
        let x = &CycloNumber::zeta_pow(12, 1) + &CycloNumber::from_rational(12, BigRational::new(3.into(), 2.into()));
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, CycloNumber::one(12));
        assert!(CycloNumber::zero(7).inverse().is_none());
    }

    #[test]
    fn mixed_conductors_embed() {
        let i = CycloNumber::zeta_pow(4, 1);
        let w = CycloNumber::zeta_pow(3, 1);
        let p = &i * &w;
        assert_eq!(p.conductor(), 12);
        // i * omega = zeta_12^3 * zeta_12^4
        assert_eq!(p, CycloNumber::zeta_pow(12, 7));
    }
}
