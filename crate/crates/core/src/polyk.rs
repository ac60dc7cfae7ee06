//! Dense polynomials over Q in the hauptmodul K, and rational functions in K
//! whose denominators are supported on {K, 1-K}.
//!
//! The restricted denominator shape is not an optimization: the
//! reparameterization theory only ever produces poles at K = 0, 1, infinity,
//! and keeping the representation closed under the ring operations checks
//! that claim on every intermediate value.

use crate::exactnum::{rati, Rational};
use crate::qseries::PuiseuxSeries;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense univariate polynomial over Q (coefficients low-to-high, trimmed;
/// the zero polynomial has an empty coefficient vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = QPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The variable K.
    pub fn var() -> Self {
        QPoly { coeffs: vec![Rational::zero(), Rational::one()] }
    }

    /// 1 - K.
    pub fn one_minus_k() -> Self {
        QPoly { coeffs: vec![Rational::one(), -Rational::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scaled(&self, r: &Rational) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| c * r).collect())
    }

    /// K d/dK.
    pub fn theta(&self) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().enumerate().map(|(i, c)| c * rati(i as i64)).collect())
    }

    /// Exact division by K; panics if the constant term is nonzero.
    pub fn divexact_k(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        assert!(self.coeffs[0].is_zero(), "not divisible by K");
        QPoly::from_coeffs(self.coeffs[1..].to_vec())
    }

    /// Exact division by (1 - K); panics if 1 is not a root.
    pub fn divexact_one_minus_k(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        assert!(self.eval(&Rational::one()).is_zero(), "not divisible by 1-K");
        // self = (1-K) t  <=>  -self = (K-1) t; synthetic division at root 1.
        let n = self.coeffs.len();
        let mut t = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for i in (0..n - 1).rev() {
            // coefficient of K^{i+1} in self equals t[i+1] (carry) - t[i]
            let target = self.coeffs[i + 1].clone();
            let ti = &carry - &target;
            t[i] = ti.clone();
            carry = ti;
        }
        debug_assert_eq!(carry, self.coeffs[0], "synthetic division consistency");
        QPoly::from_coeffs(t)
    }

    /// Coefficients in the basis (1-K)^t: returns c with
    /// self = sum over t of `c[t] (1-K)^t`.
    pub fn one_minus_k_basis(&self) -> Vec<Rational> {
        // substitute K = 1 - u and read coefficients of u
        let mut acc: Vec<Rational> = vec![];
        for c in self.coeffs.iter().rev() {
            // acc = acc * (1 - u) + c
            let mut next = vec![Rational::zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i] += a;
                next[i + 1] -= a;
            }
            if next.is_empty() {
                next.push(Rational::zero());
            }
            next[0] += c;
            acc = next;
        }
        while matches!(acc.last(), Some(c) if c.is_zero()) {
            acc.pop();
        }
        acc
    }

    pub fn pow(&self, mut e: u32) -> QPoly {
        let mut acc = QPoly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The series of the polynomial in the variable of `precision`.
    pub fn to_series(&self, precision: Rational) -> PuiseuxSeries {
        let coeffs: Vec<Rational> = self.coeffs.clone();
        PuiseuxSeries::from_rational_coeffs(0, &coeffs, precision)
    }
}

impl Add<&QPoly> for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = vec![Rational::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        QPoly::from_coeffs(out)
    }
}

impl Sub<&QPoly> for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Mul<&QPoly> for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                write!(f, "{}", mag)?;
            }
            if i >= 1 {
                if show_coeff {
                    write!(f, "*")?;
                }
                write!(f, "K")?;
                if i > 1 {
                    write!(f, "^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

/// A rational function in K of the shape num / (K^a (1-K)^b), kept reduced
/// (no factor of K or 1-K shared between numerator and denominator).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatK {
    num: QPoly,
    k_pow: u32,
    omk_pow: u32,
}

impl RatK {
    pub fn zero() -> Self {
        RatK { num: QPoly::zero(), k_pow: 0, omk_pow: 0 }
    }

    pub fn one() -> Self {
        RatK { num: QPoly::one(), k_pow: 0, omk_pow: 0 }
    }

    pub fn constant(c: Rational) -> Self {
        RatK { num: QPoly::constant(c), k_pow: 0, omk_pow: 0 }
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatK { num: p, k_pow: 0, omk_pow: 0 }
    }

    pub fn new(num: QPoly, k_pow: u32, omk_pow: u32) -> Self {
        let mut r = RatK { num, k_pow, omk_pow };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.k_pow = 0;
            self.omk_pow = 0;
            return;
        }
        while self.k_pow > 0 && self.num.coeff(0).is_zero() {
            self.num = self.num.divexact_k();
            self.k_pow -= 1;
        }
        while self.omk_pow > 0 && self.num.eval(&Rational::one()).is_zero() {
            self.num = self.num.divexact_one_minus_k();
            self.omk_pow -= 1;
        }
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn k_pow(&self) -> u32 {
        self.k_pow
    }

    pub fn omk_pow(&self) -> u32 {
        self.omk_pow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.k_pow == 0 && self.omk_pow == 0 && self.num == QPoly::one()
    }

    pub fn scaled(&self, r: &Rational) -> RatK {
        RatK::new(self.num.scaled(r), self.k_pow, self.omk_pow)
    }

    /// Value at K = 0, or None when there is a pole there.
    pub fn eval0(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.k_pow > 0 {
            return None;
        }
        Some(self.num.coeff(0))
    }

    /// theta_K = K d/dK applied to the function; poles stay in {K, 1-K}.
    pub fn theta_deriv(&self) -> RatK {
        // theta(num K^{-a} (1-K)^{-b})
        //   = [K num' (1-K) - a num (1-K) + b K num] / (K^a (1-K)^{b+1})
        let a = rati(self.k_pow as i64);
        let b = rati(self.omk_pow as i64);
        let omk = QPoly::one_minus_k();
        let kvar = QPoly::var();
        let t1 = &self.num.theta() * &omk;
        let t2 = &(&self.num * &omk).scaled(&a);
        let t3 = &(&kvar * &self.num).scaled(&b);
        let num = &(&t1 - t2) + t3;
        RatK::new(num, self.k_pow, self.omk_pow + 1)
    }

    /// Reciprocal, defined only when the numerator is c K^s (1-K)^t.
    pub fn try_recip(&self) -> Option<RatK> {
        if self.is_zero() {
            return None;
        }
        let mut p = self.num.clone();
        let mut s = 0u32;
        let mut t = 0u32;
        while !p.is_zero() && p.coeff(0).is_zero() {
            p = p.divexact_k();
            s += 1;
        }
        while p.degree().unwrap_or(0) > 0 && p.eval(&Rational::one()).is_zero() {
            p = p.divexact_one_minus_k();
            t += 1;
        }
        if p.degree() != Some(0) {
            return None;
        }
        let c = p.coeff(0);
        let mut num = QPoly::constant(c.recip());
        num = &num * &QPoly::var().pow(self.k_pow);
        num = &num * &QPoly::one_minus_k().pow(self.omk_pow);
        Some(RatK::new(num, s, t))
    }

    /// Power series expansion at K = 0 (negative exponents when k_pow > 0).
    pub fn to_series(&self, precision: &Rational) -> PuiseuxSeries {
        let inner_prec = precision + rati(self.k_pow as i64);
        let num = self.num.to_series(inner_prec.clone());
        let omk = PuiseuxSeries::from_rational_coeffs(0, &[Rational::one(), -Rational::one()], inner_prec.clone());
        let denom_inv = omk.pow_i64(-(self.omk_pow as i64)).expect("1-K is a unit");
        (&num * &denom_inv).truncated(&inner_prec).shifted(&rati(-(self.k_pow as i64)))
    }
}

impl Add<&RatK> for &RatK {
    type Output = RatK;
    fn add(self, rhs: &RatK) -> RatK {
        let a = self.k_pow.max(rhs.k_pow);
        let b = self.omk_pow.max(rhs.omk_pow);
        let lift = |x: &RatK| -> QPoly {
            let mut p = x.num.clone();
            p = &p * &QPoly::var().pow(a - x.k_pow);
            p = &p * &QPoly::one_minus_k().pow(b - x.omk_pow);
            p
        };
        RatK::new(&lift(self) + &lift(rhs), a, b)
    }
}

impl Sub<&RatK> for &RatK {
    type Output = RatK;
    fn sub(self, rhs: &RatK) -> RatK {
        self + &(-rhs)
    }
}

impl Mul<&RatK> for &RatK {
    type Output = RatK;
    fn mul(self, rhs: &RatK) -> RatK {
        RatK::new(&self.num * &rhs.num, self.k_pow + rhs.k_pow, self.omk_pow + rhs.omk_pow)
    }
}

impl Neg for &RatK {
    type Output = RatK;
    fn neg(self) -> RatK {
        RatK { num: -&self.num, k_pow: self.k_pow, omk_pow: self.omk_pow }
    }
}

impl fmt::Display for RatK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k_pow == 0 && self.omk_pow == 0 {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        let mut sep = "";
        if self.k_pow > 0 {
            write!(f, "K")?;
            if self.k_pow > 1 {
                write!(f, "^{}", self.k_pow)?;
            }
            sep = "*";
        }
        if self.omk_pow > 0 {
            write!(f, "{}(1-K)", sep)?;
            if self.omk_pow > 1 {
                write!(f, "^{}", self.omk_pow)?;
            }
        }
        write!(f, ")")
    }
}

/// Helper shared by tests and callers; c * (1+2K) / (6 (1-K)), the
/// correction term of the d-to-theta recurrence.
pub fn gamma_correction() -> RatK {
    RatK::new(
        QPoly::from_coeffs(vec![crate::exactnum::rat(1, 6), crate::exactnum::rat(2, 6)]),
        0,
        1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn divexact_one_minus_k_works() {
        // (1-K)(2+3K) = 2 + K - 3K^2
        let p = QPoly::from_coeffs(vec![rati(2), rati(1), rati(-3)]);
        let q = p.divexact_one_minus_k();
        assert_eq!(q, QPoly::from_coeffs(vec![rati(2), rati(3)]));
    }

    #[test]
    fn reduce_cancels_common_factors() {
        // K(1-K) / (K^2 (1-K)^2) = 1/(K(1-K))
        let num = &QPoly::var() * &QPoly::one_minus_k();
        let r = RatK::new(num, 2, 2);
        assert_eq!(r.k_pow(), 1);
        assert_eq!(r.omk_pow(), 1);
        assert_eq!(r.numerator(), &QPoly::one());
    }

    #[test]
    fn theta_of_gamma_correction() {
        // theta_K((1+2K)/(6(1-K))) = K/(2(1-K)^2)
        let g = gamma_correction();
        let d = g.theta_deriv();
        assert_eq!(d.k_pow(), 0);
        assert_eq!(d.omk_pow(), 2);
        assert_eq!(d.numerator(), &QPoly::from_coeffs(vec![Rational::zero(), rat(1, 2)]));
    }

    #[test]
    fn one_minus_k_basis_roundtrip() {
        // 4K^2 - 5K + 1 = (1-K)(1-4K) = ... in (1-K)-basis
        let p = QPoly::from_coeffs(vec![rati(1), rati(-5), rati(4)]);
        let basis = p.one_minus_k_basis();
        // reconstruct
        let mut back = QPoly::zero();
        for (t, c) in basis.iter().enumerate() {
            back = &back + &QPoly::one_minus_k().pow(t as u32).scaled(c);
        }
        assert_eq!(back, p);
    }

    #[test]
    fn series_expansion_of_rational_function() {
        // 1/(1-K) = 1 + K + K^2 + ...
        let r = RatK::new(QPoly::one(), 0, 1);
        let s = r.to_series(&rati(5));
        for n in 0..5 {
            assert!(s.coeff(&rati(n)).is_one());
        }
        // (1+K)/K has a simple pole
        let r2 = RatK::new(QPoly::from_coeffs(vec![rati(1), rati(1)]), 1, 0);
        let s2 = r2.to_series(&rati(3));
        assert_eq!(s2.valuation(), Some(&rati(-1)));
        assert!(s2.coeff(&rati(0)).is_one());
    }

    #[test]
    fn recip_only_for_monomial_shapes() {
        let ok = RatK::new(QPoly::one_minus_k().scaled(&rati(6)), 0, 0);
        let r = ok.try_recip().unwrap();
        assert_eq!(r.omk_pow(), 1);
        assert_eq!(r.numerator(), &QPoly::constant(rat(1, 6)));
        let bad = RatK::from_poly(QPoly::from_coeffs(vec![rati(1), rati(1)]));
        assert!(bad.try_recip().is_none());
    }
}
