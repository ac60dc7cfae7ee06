//! Exact scalar arithmetic: arbitrary-precision rationals and cyclotomic
//! field elements in the power basis.
//!
//! Provides:
//! - [`Rational`]: arbitrary-precision rationals (alias for
//!   `num_rational::BigRational`) with the construction helpers [`rat`] and
//!   [`rati`]
//! - [`CycNumber`]: an element of Q(zeta_N) in the power basis
//!   1, zeta, ..., zeta^{phi(N)-1} modulo the N-th cyclotomic polynomial
//! - numeric embedding at zeta_N = exp(2 pi i / N) to a requested precision
//!
//! Mixed-order arithmetic coerces both operands into Q(zeta_lcm) along the
//! divisibility maps zeta_N -> zeta_M^{M/N}; general subfield detection is
//! out of scope.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// `n/d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n` as a [`Rational`].
pub fn rati(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse a rational from `"p"` or `"p/q"` notation.
pub fn parse_rational(s: &str) -> Option<Rational> {
    s.trim().parse::<Rational>().ok()
}

/// Floor of a rational as a BigInt.
pub fn rational_floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Ceiling of a rational as a BigInt.
pub fn rational_ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactNumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no coercion of Q(zeta_{from}) into Q(zeta_{to})")]
    IncompatibleEmbedding { from: u64, to: u64 },
}

/// Euler's totient function.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

// --- integer polynomial helpers for the cyclotomic polynomial -------------

/// Exact division of integer polynomials (low-to-high coefficients).
/// Panics if the division is not exact; only used with cyclotomic factors.
fn int_poly_divexact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den.last().unwrap().clone();
    assert!(!lead.is_zero());
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        let (q, r) = c.div_rem(&lead);
        assert!(r.is_zero(), "inexact cyclotomic division");
        quot[i - dd] = q.clone();
        for k in 0..=dd {
            rem[i - dd + k] -= &q * &den[k];
        }
    }
    assert!(rem.iter().all(BigInt::is_zero), "nonzero remainder");
    while quot.len() > 1 && quot.last().unwrap().is_zero() {
        quot.pop();
    }
    quot
}

/// The N-th cyclotomic polynomial, monic, coefficients low-to-high,
/// length phi(N)+1. Cached.
pub(crate) fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by the product of Phi_d over proper divisors d of n.
    let mut xn1 = vec![BigInt::zero(); (n + 1) as usize];
    xn1[0] = -BigInt::one();
    xn1[n as usize] = BigInt::one();
    let mut result = xn1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            result = int_poly_divexact(&result, &phi_d);
        }
    }
    debug_assert_eq!(result.len() as u64, euler_phi(n) + 1);
    let arc = Arc::new(result);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

// --- rational polynomial helpers (dense, low-to-high) ---------------------

fn rpoly_trim(v: &mut Vec<Rational>) {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
}

fn rpoly_is_zero(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

fn rpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if rpoly_is_zero(a) || rpoly_is_zero(b) {
        return vec![Rational::zero()];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    rpoly_trim(&mut out);
    out
}

/// Remainder of a modulo b (b monic-normalizable), both low-to-high.
fn rpoly_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut rem = a.to_vec();
    rpoly_trim(&mut rem);
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while rem.len() > db && !rpoly_is_zero(&rem) {
        let dr = rem.len() - 1;
        if dr < db {
            break;
        }
        let factor = rem.last().unwrap() / lead;
        for k in 0..=db {
            let idx = dr - db + k;
            let sub = &factor * &b[k];
            rem[idx] -= sub;
        }
        rpoly_trim(&mut rem);
        if rem.len() - 1 < db {
            break;
        }
    }
    rem
}

/// Extended Euclid: returns (g, s) with s*a = g mod b, g the monic gcd.
fn rpoly_half_ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    // Iterative extended gcd keeping only the Bezout coefficient of a.
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    rpoly_trim(&mut r0);
    rpoly_trim(&mut r1);
    let mut s0 = vec![Rational::one()];
    let mut s1 = vec![Rational::zero()];
    while !rpoly_is_zero(&r1) {
        // quotient of r0 by r1
        let mut rem = r0.clone();
        let db = r1.len() - 1;
        let lead = r1.last().unwrap().clone();
        let mut quot = vec![Rational::zero(); rem.len().saturating_sub(db).max(1)];
        while !rpoly_is_zero(&rem) && rem.len() > db {
            let dr = rem.len() - 1;
            let factor = rem.last().unwrap() / &lead;
            quot[dr - db] = factor.clone();
            for k in 0..=db {
                let sub = &factor * &r1[k];
                rem[dr - db + k] -= sub;
            }
            rpoly_trim(&mut rem);
            if rem.len() - 1 < db {
                break;
            }
        }
        rpoly_trim(&mut quot);
        let new_s = {
            let qs1 = rpoly_mul(&quot, &s1);
            let mut out = vec![Rational::zero(); s0.len().max(qs1.len())];
            for (i, c) in s0.iter().enumerate() {
                out[i] += c;
            }
            for (i, c) in qs1.iter().enumerate() {
                out[i] -= c;
            }
            rpoly_trim(&mut out);
            out
        };
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = new_s;
    }
    // normalize gcd monic
    let lead = r0.last().unwrap().clone();
    if !lead.is_one() && !lead.is_zero() {
        for c in r0.iter_mut() {
            *c /= &lead;
        }
        for c in s0.iter_mut() {
            *c /= &lead;
        }
    }
    (r0, s0)
}

// --- CycNumber -------------------------------------------------------------

/// An exact element of the cyclotomic field Q(zeta_N) in the power basis
/// 1, zeta, ..., zeta^{phi(N)-1} modulo the N-th cyclotomic polynomial.
///
/// Elements that happen to be rational are kept at order 1. Arithmetic
/// between different orders coerces to the lcm of the orders.
#[derive(Clone, Debug)]
pub struct CycNumber {
    order: u64,
    coeffs: Vec<Rational>,
}

impl CycNumber {
    /// The zero element (order 1).
    pub fn zero() -> Self {
        CycNumber { order: 1, coeffs: vec![Rational::zero()] }
    }

    /// The unit element (order 1).
    pub fn one() -> Self {
        CycNumber { order: 1, coeffs: vec![Rational::one()] }
    }

    /// A rational embedded at order 1.
    pub fn from_rational(r: Rational) -> Self {
        CycNumber { order: 1, coeffs: vec![r] }
    }

    /// A primitive `n`-th root of unity.
    pub fn zeta(n: u64) -> Self {
        assert!(n >= 1);
        Self::zeta_pow(n, 1)
    }

    /// `zeta_n^k` (k may be negative).
    pub fn zeta_pow(n: u64, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as u64;
        let phi = euler_phi(n) as usize;
        let mut raw = vec![Rational::zero(); (k + 1) as usize];
        raw[k as usize] = Rational::one();
        let mut x = CycNumber { order: n, coeffs: raw };
        x.reduce_mod_cyclotomic();
        x.coeffs.resize(phi, Rational::zero());
        x.reduce_order();
        x
    }

    /// Construct from power-basis coefficients at the given order.
    /// The vector must have length phi(order).
    pub fn from_coeffs(order: u64, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len() as u64, euler_phi(order), "coefficient length must be phi(order)");
        let mut x = CycNumber { order, coeffs };
        x.reduce_order();
        x
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1 || self.coeffs[1..].iter().all(Rational::is_zero)
    }

    /// The element as a rational if it lies in Q.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn reduce_mod_cyclotomic(&mut self) {
        let phi = euler_phi(self.order) as usize;
        if self.coeffs.len() <= phi {
            self.coeffs.resize(phi, Rational::zero());
            return;
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let mut rem = rpoly_rem(&self.coeffs, &modulus);
        rem.resize(phi, Rational::zero());
        self.coeffs = rem;
    }

    /// Drop to order 1 when the element is rational.
    fn reduce_order(&mut self) {
        if self.order > 1 && self.coeffs[1..].iter().all(Rational::is_zero) {
            self.coeffs.truncate(1);
            self.order = 1;
        }
    }

    /// Coerce into Q(zeta_m) along zeta_n -> zeta_m^{m/n}. Requires n | m.
    pub fn embed(&self, m: u64) -> Result<CycNumber, ExactNumError> {
        if m == self.order {
            return Ok(self.clone());
        }
        if !m.is_multiple_of(self.order) {
            return Err(ExactNumError::IncompatibleEmbedding { from: self.order, to: m });
        }
        let step = (m / self.order) as usize;
        let mut raw = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        let mut x = CycNumber { order: m, coeffs: raw };
        x.reduce_mod_cyclotomic();
        Ok(x)
    }

    /// Express the element in Q(zeta_m) for m | order, if representable.
    /// Round-trip inverse of [`CycNumber::embed`] on representable elements.
    pub fn project(&self, m: u64) -> Result<CycNumber, ExactNumError> {
        if m == self.order {
            return Ok(self.clone());
        }
        if !self.order.is_multiple_of(m) {
            return Err(ExactNumError::IncompatibleEmbedding { from: self.order, to: m });
        }
        if self.is_rational() && m >= 1 {
            // rationals live in every cyclotomic field
            let mut out = vec![Rational::zero(); euler_phi(m) as usize];
            out[0] = self.coeffs[0].clone();
            return Ok(CycNumber::from_coeffs(m, out));
        }
        let phi_m = euler_phi(m) as usize;
        let phi_big = euler_phi(self.order) as usize;
        // columns: embeddings of the power basis of Q(zeta_m)
        let mut cols = Vec::with_capacity(phi_m);
        for i in 0..phi_m {
            let mut c = vec![Rational::zero(); phi_m];
            c[i] = Rational::one();
            let e = CycNumber { order: m, coeffs: c }.embed(self.order)?;
            cols.push(e.coeffs);
        }
        let sol = solve_linear(&cols, &self.coeffs, phi_big)
            .ok_or(ExactNumError::IncompatibleEmbedding { from: self.order, to: m })?;
        Ok(CycNumber::from_coeffs(m, sol))
    }

    fn coerced_pair(&self, other: &CycNumber) -> (CycNumber, CycNumber, u64) {
        let m = self.order.lcm(&other.order);
        let a = self.embed(m).expect("lcm embedding");
        let b = other.embed(m).expect("lcm embedding");
        (a, b, m)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<CycNumber, ExactNumError> {
        if self.is_zero() {
            return Err(ExactNumError::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(CycNumber::from_rational(r.recip()));
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        let (g, s) = rpoly_half_ext_gcd(&self.coeffs, &modulus);
        // Phi_N is irreducible over Q, so the gcd of a nonzero element with
        // it is 1.
        assert!(g.len() == 1 && g[0].is_one(), "cyclotomic polynomial must be coprime to a nonzero element");
        let mut x = CycNumber { order: self.order, coeffs: s };
        x.reduce_mod_cyclotomic();
        x.reduce_order();
        Ok(x)
    }

    /// Checked division.
    pub fn try_div(&self, other: &CycNumber) -> Result<CycNumber, ExactNumError> {
        Ok(self * &other.inv()?)
    }

    /// Scale by a rational.
    pub fn mul_rat(&self, r: &Rational) -> CycNumber {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= r;
        }
        out.reduce_order();
        out
    }

    /// Numeric value at zeta_N = exp(2 pi i / N).
    ///
    /// Internal arithmetic runs on exact rationals rounded to
    /// `precision_bits + 16` fractional bits, so each step carries rounding
    /// error far below 2^-(precision_bits-4); the result is rounded to f64.
    pub fn embed_numeric(&self, precision_bits: u32) -> Complex64 {
        assert!(precision_bits >= 53, "precision_bits must be at least 53");
        let bits = precision_bits + 16;
        let zeta = zeta_approx(self.order, bits);
        let mut acc = CRat::zero();
        // Horner over the power basis
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&zeta).round(bits);
            acc.re += c;
        }
        Complex64::new(acc.re.to_f64().unwrap_or(f64::NAN), acc.im.to_f64().unwrap_or(f64::NAN))
    }
}

/// Solve `cols * x = rhs` over the rationals by Gaussian elimination, where
/// `cols[j]` is the j-th column. Returns None when inconsistent.
fn solve_linear(cols: &[Vec<Rational>], rhs: &[Rational], rows: usize) -> Option<Vec<Rational>> {
    let ncols = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].clone().recip();
        for c in col..=ncols {
            m[rank][c] *= &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=ncols {
                    let sub = &f * &m[rank][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }
    // inconsistent if a zero row has nonzero rhs
    for r in rank..rows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rational::zero(); ncols];
    for col in 0..ncols {
        if pivot_of_col[col] != usize::MAX {
            x[col] = m[pivot_of_col[col]][ncols].clone();
        }
    }
    // verify (free columns would otherwise silently zero out)
    for r in 0..rows {
        let mut acc = Rational::zero();
        for (j, c) in cols.iter().enumerate() {
            acc += &c[r] * &x[j];
        }
        if acc != rhs[r] {
            return None;
        }
    }
    Some(x)
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = self.coerced_pair(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNumber {}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                (&self).$method(rhs)
            }
        }
        impl $trait<CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&CycNumber> for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        let (mut a, b, _) = self.coerced_pair(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a.reduce_order();
        a
    }
}
forward_binop!(Add, add);

impl Sub<&CycNumber> for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        let (mut a, b, _) = self.coerced_pair(rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a.reduce_order();
        a
    }
}
forward_binop!(Sub, sub);

impl Mul<&CycNumber> for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        // fast path: rational scaling
        if let Some(r) = self.to_rational() {
            return rhs.mul_rat(&r);
        }
        if let Some(r) = rhs.to_rational() {
            return self.mul_rat(&r);
        }
        let (a, b, m) = self.coerced_pair(rhs);
        let prod = rpoly_mul(&a.coeffs, &b.coeffs);
        let mut x = CycNumber { order: m, coeffs: prod };
        x.reduce_mod_cyclotomic();
        x.reduce_order();
        x
    }
}
forward_binop!(Mul, mul);

impl Div<&CycNumber> for &CycNumber {
    type Output = CycNumber;
    /// Panics on division by zero; use [`CycNumber::try_div`] to check.
    fn div(self, rhs: &CycNumber) -> CycNumber {
        self.try_div(rhs).expect("division by zero")
    }
}
forward_binop!(Div, div);

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -c.clone();
        }
        out
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", r);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = c.is_negative();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let unit_coeff = mag.is_one() && i > 0;
            if !unit_coeff {
                write!(f, "{}", mag)?;
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            if i == 1 {
                write!(f, "z{}", self.order)?;
            } else if i > 1 {
                write!(f, "z{}^{}", self.order, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// --- numeric embedding ------------------------------------------------------

#[derive(Clone)]
struct CRat {
    re: Rational,
    im: Rational,
}

impl CRat {
    fn zero() -> Self {
        CRat { re: Rational::zero(), im: Rational::zero() }
    }

    fn mul(&self, other: &CRat) -> CRat {
        CRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    fn inv(&self) -> CRat {
        let n = &self.re * &self.re + &self.im * &self.im;
        CRat { re: &self.re / &n, im: -&self.im / &n }
    }

    fn round(&self, bits: u32) -> CRat {
        CRat { re: round_to_bits(&self.re, bits), im: round_to_bits(&self.im, bits) }
    }
}

fn round_to_bits(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = x * Rational::from_integer(scale.clone());
    Rational::new(scaled.round().to_integer(), scale)
}

fn cpow(z: &CRat, mut e: u64, bits: u32) -> CRat {
    let mut base = z.clone();
    let mut acc = CRat { re: Rational::one(), im: Rational::zero() };
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base).round(bits);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base).round(bits);
        }
    }
    acc
}

/// exp(2 pi i / n) to roughly `bits` fractional bits, by Newton iteration
/// on z^n = 1 seeded from f64.
fn zeta_approx(n: u64, bits: u32) -> CRat {
    if n == 1 {
        return CRat { re: Rational::one(), im: Rational::zero() };
    }
    let theta = 2.0 * std::f64::consts::PI / (n as f64);
    let mut z = CRat {
        re: Rational::from_float(theta.cos()).unwrap(),
        im: Rational::from_float(theta.sin()).unwrap(),
    };
    let work = 2 * bits + 32;
    // f64 seed is good to ~50 bits; each Newton step doubles that.
    let mut steps = 1u32;
    let mut acc_bits = 50u64;
    while acc_bits < (bits as u64) + 8 {
        acc_bits *= 2;
        steps += 1;
    }
    let ninv = Rational::new(BigInt::one(), BigInt::from(n));
    for _ in 0..steps {
        // z <- ((n-1) z + z^{1-n}) / n
        let zp = cpow(&z, n - 1, work);
        let zinv = zp.inv().round(work);
        let re = (&z.re * rati((n - 1) as i64) + &zinv.re) * &ninv;
        let im = (&z.im * rati((n - 1) as i64) + &zinv.im) * &ninv;
        z = CRat { re, im }.round(work);
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z3() -> CycNumber {
        CycNumber::zeta(3)
    }

    #[test]
    fn cyclotomic_polynomials() {
        // Phi_1 = x - 1, Phi_4 = x^2 + 1, Phi_6 = x^2 - x + 1, Phi_12 = x^4 - x^2 + 1
        assert_eq!(*cyclotomic_polynomial(1), vec![BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(*cyclotomic_polynomial(4), vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]);
        assert_eq!(*cyclotomic_polynomial(6), vec![BigInt::from(1), BigInt::from(-1), BigInt::from(1)]);
        assert_eq!(
            *cyclotomic_polynomial(12),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(-1), BigInt::from(0), BigInt::from(1)]
        );
    }

    #[test]
    fn add_mixed_powers() {
        // (1 + z3) + z3 = 1 + 2 z3
        let x = CycNumber::one() + z3();
        let y = &x + &z3();
        assert_eq!(y, CycNumber::from_coeffs(3, vec![rati(1), rati(2)]));
    }

    #[test]
    fn root_of_unity_relation() {
        // z3 * z3^2 = 1
        let p = z3() * CycNumber::zeta_pow(3, 2);
        assert!(p.is_one());
        // z2 = -1 reduces to order 1
        let m = CycNumber::zeta(2);
        assert_eq!(m.to_rational(), Some(rati(-1)));
    }

    #[test]
    fn invert_two_minus_zeta_minus_zeta_sq() {
        // 1 + z3 + z3^2 = 0, so 2 - z3 - z3^2 = 3 and the inverse is 1/3.
        let d = CycNumber::from_rational(rati(2)) - z3() - CycNumber::zeta_pow(3, 2);
        let inv = d.inv().unwrap();
        assert_eq!(inv.to_rational(), Some(rat(1, 3)));
        // brute-force check: multiply back
        assert!((&d * &inv).is_one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let err = CycNumber::one().try_div(&CycNumber::zero());
        assert_eq!(err, Err(ExactNumError::DivisionByZero));
    }

    #[test]
    fn incompatible_embedding_is_an_error() {
        let x = z3();
        assert!(matches!(x.embed(4), Err(ExactNumError::IncompatibleEmbedding { .. })));
    }

    #[test]
    fn embed_project_roundtrip() {
        let x = CycNumber::one() + z3().mul_rat(&rat(5, 7));
        let up = x.embed(12).unwrap();
        assert_eq!(up.order(), 12);
        let down = up.project(3).unwrap();
        assert_eq!(down, x);
        // something not in Q(zeta_3) fails to project
        let y = CycNumber::zeta(12);
        assert!(y.project(3).is_err());
    }

    #[test]
    fn numeric_embedding_basics() {
        let one = CycNumber::one().embed_numeric(53);
        assert!((one.re - 1.0).abs() < 1e-12 && one.im.abs() < 1e-12);
        let i = CycNumber::zeta(4).embed_numeric(53);
        assert!(i.re.abs() < 1e-12 && (i.im - 1.0).abs() < 1e-12);
        // 2 - z5 - z5^{-1} = 4 sin^2(pi/5)
        let x = CycNumber::from_rational(rati(2)) - CycNumber::zeta(5) - CycNumber::zeta_pow(5, -1);
        let v = x.embed_numeric(80);
        let expected = 4.0 * (std::f64::consts::PI / 5.0).sin().powi(2);
        assert!((v.re - expected).abs() < 1e-12, "got {} want {}", v.re, expected);
        assert!(v.im.abs() < 1e-12);
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-12i64..=12, 1i64..=9).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_cyc() -> impl Strategy<Value = CycNumber> {
        let order = prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 12]);
        order.prop_flat_map(|n| {
            let phi = euler_phi(n) as usize;
            prop::collection::vec(arb_rat(), phi).prop_map(move |coeffs| CycNumber::from_coeffs(n, coeffs))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn field_axioms(a in arb_cyc(), b in arb_cyc(), c in arb_cyc()) {
            // associativity
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            // commutativity and distributivity
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
        }

        #[test]
        fn inverses(a in arb_cyc()) {
            if !a.is_zero() {
                let inv = a.inv().unwrap();
                prop_assert!((&a * &inv).is_one());
            }
        }

        #[test]
        fn coercion_roundtrip(a in arb_cyc(), k in prop::sample::select(vec![2u64, 3, 4])) {
            let m = a.order() * k;
            let up = a.embed(m).unwrap();
            let down = up.project(a.order()).unwrap();
            prop_assert_eq!(down, a);
        }
    }
}
