//! Truncated Puiseux q-series arithmetic and the classical modular series.
//!
//! Provides:
//! - [`PuiseuxSeries`]: truncated series in q^{1/M} with [`CycNumber`]
//!   coefficients and a tracked precision window
//! - [`SeriesContext`]: default precision and ambient cyclotomic order
//! - [`eisenstein_level1`]: the level-1 Eisenstein series E_k (including the
//!   quasimodular E_2)
//! - [`eta_power`]: integer powers of the Dedekind eta function
//!   eta = q^{1/24} prod (1 - q^n)
//! - [`hauptmodul_suite`]: Delta, j, K = 1728/j and A = E6/E4
//! - [`bernoulli`]: exact Bernoulli numbers, the source of the Eisenstein
//!   normalization 2/zeta(1-k)
//!
//! Every operation computes the tightest provable precision window; unknown
//! coefficients are never silently padded with zeros.

use crate::exactnum::{rat, rati, rational_ceil, CycNumber, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    #[error("series has zero leading coefficient to its precision")]
    ZeroLeadingCoefficient,
    #[error("rational powers require leading coefficient 1, found {found}")]
    NonMonicLeadingCoefficient { found: String },
    #[error("Eisenstein weight must be even and >= 2, got {0}")]
    InvalidWeight(i64),
    #[error("malformed series serialization: {0}")]
    Serialization(String),
}

/// Shared defaults for series constructors.
#[derive(Clone, Debug)]
pub struct SeriesContext {
    /// Exponents >= this bound are unknown in constructed series.
    pub default_precision: Rational,
    /// Ambient cyclotomic order for coefficients (1 for rational series).
    pub coefficient_order: u64,
}

impl SeriesContext {
    /// Context with rational coefficients and `terms` known q-terms.
    pub fn new(terms: i64) -> Self {
        assert!(terms > 0);
        SeriesContext { default_precision: rati(terms), coefficient_order: 1 }
    }

    pub fn with_order(terms: i64, order: u64) -> Self {
        assert!(terms > 0 && order >= 1);
        SeriesContext { default_precision: rati(terms), coefficient_order: order }
    }
}

/// A truncated Puiseux series: finitely many known coefficients at exponents
/// that are multiples of 1/M, all lying below the precision bound.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxSeries {
    ramification: u64,
    precision: Rational,
    terms: BTreeMap<Rational, CycNumber>,
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

fn exp_denominator(e: &Rational) -> u64 {
    e.denom().to_u64().expect("exponent denominator fits in u64")
}

impl PuiseuxSeries {
    // --- constructors ------------------------------------------------------

    /// The zero series, known to the given precision.
    pub fn zero(precision: Rational) -> Self {
        PuiseuxSeries { ramification: 1, precision, terms: BTreeMap::new() }
    }

    /// A constant series.
    pub fn constant(c: CycNumber, precision: Rational) -> Self {
        Self::monomial(c, Rational::zero(), precision)
    }

    /// `c * q^e`.
    pub fn monomial(c: CycNumber, e: Rational, precision: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() && e < precision {
            terms.insert(e, c);
        }
        let mut s = PuiseuxSeries { ramification: 1, precision, terms };
        s.normalize();
        s
    }

    /// Series with integer exponents `start, start+1, ...` and rational
    /// coefficients.
    pub fn from_rational_coeffs(start: i64, coeffs: &[Rational], precision: Rational) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (rati(start + i as i64), CycNumber::from_rational(c.clone())))
            .collect();
        let mut s = PuiseuxSeries { ramification: 1, precision, terms };
        s.normalize();
        s
    }

    /// Series from explicit (exponent, coefficient) pairs.
    pub fn from_terms(pairs: Vec<(Rational, CycNumber)>, precision: Rational) -> Self {
        let mut s = PuiseuxSeries { ramification: 1, precision, terms: pairs.into_iter().collect() };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let prec = self.precision.clone();
        self.terms.retain(|e, c| !c.is_zero() && *e < prec);
        let mut ram = 1u64;
        for e in self.terms.keys() {
            ram = lcm_u64(ram, exp_denominator(e));
        }
        self.ramification = ram;
    }

    // --- accessors ----------------------------------------------------------

    pub fn ramification(&self) -> u64 {
        self.ramification
    }

    pub fn precision(&self) -> &Rational {
        &self.precision
    }

    /// Lowest exponent with a nonzero coefficient; None when the series is
    /// zero to its precision.
    pub fn valuation(&self) -> Option<&Rational> {
        self.terms.keys().next()
    }

    /// Valuation, or the precision bound for a series that is zero as far as
    /// is known. This is the exponent below which the series is known.
    pub fn valuation_or_precision(&self) -> Rational {
        self.valuation().cloned().unwrap_or_else(|| self.precision.clone())
    }

    pub fn leading_coeff(&self) -> Option<&CycNumber> {
        self.terms.values().next()
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&Rational, &CycNumber)> {
        self.terms.iter()
    }

    /// Coefficient at exponent `e`, or None when `e` is at or beyond the
    /// precision bound (unknown).
    pub fn known_coeff(&self, e: &Rational) -> Option<CycNumber> {
        if *e >= self.precision {
            return None;
        }
        Some(self.terms.get(e).cloned().unwrap_or_else(CycNumber::zero))
    }

    /// Coefficient at exponent `e`. Panics when the coefficient is beyond
    /// the known precision window.
    pub fn coeff(&self, e: &Rational) -> CycNumber {
        self.known_coeff(e)
            .unwrap_or_else(|| panic!("coefficient at q^{} requested beyond precision {}", e, self.precision))
    }

    /// Rational coefficient at exponent `e`; panics if cyclotomic or unknown.
    pub fn coeff_rational(&self, e: &Rational) -> Rational {
        self.coeff(e).to_rational().expect("coefficient is not rational")
    }

    // --- basic operations ---------------------------------------------------

    /// Restrict the precision window.
    pub fn truncated(&self, precision: &Rational) -> PuiseuxSeries {
        let mut out = self.clone();
        if *precision < out.precision {
            out.precision = precision.clone();
            out.normalize();
        }
        out
    }

    /// Multiply all exponents' base: q^e * self.
    pub fn shifted(&self, e: &Rational) -> PuiseuxSeries {
        let terms = self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect();
        let mut s = PuiseuxSeries {
            ramification: self.ramification,
            precision: &self.precision + e,
            terms,
        };
        s.normalize();
        s
    }

    /// Scale by a coefficient.
    pub fn scaled(&self, c: &CycNumber) -> PuiseuxSeries {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        let mut s = PuiseuxSeries { ramification: self.ramification, precision: self.precision.clone(), terms };
        s.normalize();
        s
    }

    /// Scale by a rational.
    pub fn scaled_rat(&self, r: &Rational) -> PuiseuxSeries {
        self.scaled(&CycNumber::from_rational(r.clone()))
    }

    /// theta = q d/dq: multiplies the coefficient at q^e by e.
    pub fn theta(&self) -> PuiseuxSeries {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.mul_rat(e)))
            .collect();
        let mut s = PuiseuxSeries { ramification: self.ramification, precision: self.precision.clone(), terms };
        s.normalize();
        s
    }

    /// Multiplicative inverse. The result is known to precision p - 2v.
    pub fn invert(&self) -> Result<PuiseuxSeries, QSeriesError> {
        let v = self.valuation().cloned().ok_or(QSeriesError::ZeroLeadingCoefficient)?;
        let lead = self.leading_coeff().unwrap().clone();
        let lead_inv = lead.inv().expect("nonzero leading coefficient");
        let m = self.ramification.max(1);
        let window = &self.precision - &v;
        let len = grid_len(&window, m);
        let u = self.to_dense(&v, m, len);
        let mut b = vec![CycNumber::zero(); len];
        b[0] = lead_inv.clone();
        for n in 1..len {
            let mut acc = CycNumber::zero();
            for k in 1..=n {
                if u[k].is_zero() || b[n - k].is_zero() {
                    continue;
                }
                acc = acc + &u[k] * &b[n - k];
            }
            b[n] = -(&lead_inv * &acc);
        }
        let base = -&v;
        let prec = &self.precision - &v - &v;
        Ok(Self::from_dense(&base, m, &b, prec))
    }

    /// Integer power; negative exponents go through [`PuiseuxSeries::invert`].
    pub fn pow_i64(&self, n: i64) -> Result<PuiseuxSeries, QSeriesError> {
        if n == 0 {
            let window = &self.precision - self.valuation_or_precision();
            return Ok(PuiseuxSeries::constant(CycNumber::one(), window));
        }
        let base = if n < 0 { self.invert()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc: Option<PuiseuxSeries> = None;
        let mut pw = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => pw.clone(),
                    Some(a) => &a * &pw,
                });
            }
            e >>= 1;
            if e > 0 {
                pw = &pw * &pw;
            }
        }
        Ok(acc.unwrap())
    }

    /// Rational power of a series with leading coefficient exactly 1.
    ///
    /// Writes self = q^v u with u(0) = 1 and returns q^{ev} u^e by the formal
    /// binomial expansion; the ramification picks up the denominator of e*v.
    pub fn pow_rational(&self, e: &Rational) -> Result<PuiseuxSeries, QSeriesError> {
        let v = self
            .valuation()
            .cloned()
            .ok_or_else(|| QSeriesError::NonMonicLeadingCoefficient { found: "0".into() })?;
        let lead = self.leading_coeff().unwrap();
        if !lead.is_one() {
            return Err(QSeriesError::NonMonicLeadingCoefficient { found: lead.to_string() });
        }
        let m = self.ramification.max(1);
        let window = &self.precision - &v;
        let len = grid_len(&window, m);
        let u = self.to_dense(&v, m, len);
        // theta(u^e) u = e u^e theta(u), solved coefficient by coefficient
        let mut g = vec![CycNumber::zero(); len];
        g[0] = CycNumber::one();
        for n in 1..len {
            let mut acc = CycNumber::zero();
            for k in 1..=n {
                if u[k].is_zero() || g[n - k].is_zero() {
                    continue;
                }
                let factor = e * rati(k as i64) - rati((n - k) as i64);
                acc = acc + (&u[k] * &g[n - k]).mul_rat(&factor);
            }
            g[n] = acc.mul_rat(&rat(1, n as i64));
        }
        let base = e * &v;
        let prec = &base + &window;
        Ok(Self::from_dense(&base, m, &g, prec))
    }

    /// Substitute `inner` (valuation > 0) into `self`, a power series with
    /// integer exponents.
    pub fn compose(&self, inner: &PuiseuxSeries) -> PuiseuxSeries {
        assert!(self.ramification <= 1, "outer series of a composition must have integer exponents");
        let vg = inner.valuation_or_precision();
        assert!(vg.is_positive(), "inner series of a composition must have positive valuation");
        if let Some(v) = self.valuation() {
            assert!(!v.is_negative(), "outer series of a composition must be a power series");
        }
        let t_terms = rational_ceil(&self.precision).to_i64().unwrap().max(0);
        let target = inner.precision.clone().min(rati(t_terms) * &vg);
        if t_terms == 0 {
            return PuiseuxSeries::zero(target);
        }
        if let Some(out) = self.compose_rational_fast(inner, t_terms, &target) {
            return out;
        }
        let mut acc = PuiseuxSeries::constant(self.coeff(&rati(t_terms - 1)), target.clone());
        for r in (0..t_terms - 1).rev() {
            acc = (&acc * inner).truncated(&target);
            acc = &acc + &PuiseuxSeries::constant(self.coeff(&rati(r)), target.clone());
        }
        acc.truncated(&target)
    }

    /// Horner composition over a dense integer grid with a single tracked
    /// denominator, avoiding per-operation gcd reduction. Applies when both
    /// series have rational coefficients and the inner one has integer
    /// coefficients after clearing one denominator.
    fn compose_rational_fast(
        &self,
        inner: &PuiseuxSeries,
        t_terms: i64,
        target: &Rational,
    ) -> Option<PuiseuxSeries> {
        let m = inner.ramification.max(1);
        let base = inner.valuation()?.clone();
        if base.is_negative() {
            return None;
        }
        // outer coefficients as n_r / d_r
        let mut outer_num: Vec<BigInt> = Vec::with_capacity(t_terms as usize);
        let mut outer_den: Vec<BigInt> = Vec::with_capacity(t_terms as usize);
        for r in 0..t_terms {
            let c = self.known_coeff(&rati(r))?.to_rational()?;
            outer_num.push(c.numer().clone());
            outer_den.push(c.denom().clone());
        }
        // inner series over the dense grid starting at exponent 0, cleared
        // to integers by a common denominator
        let len = grid_len(&(target.clone()), m).max(1);
        let mut inner_den = BigInt::one();
        let mut inner_vec = vec![BigInt::zero(); len];
        {
            let step = rat(1, m as i64);
            for (e, c) in &inner.terms {
                let idx = (e / &step).to_integer().to_i64()?;
                if idx < 0 {
                    return None;
                }
                if (idx as usize) < len {
                    let r = c.to_rational()?;
                    inner_den = inner_den.lcm(r.denom());
                }
            }
            let step = rat(1, m as i64);
            for (e, c) in &inner.terms {
                let idx = (e / &step).to_integer().to_i64()?;
                if idx >= 0 && (idx as usize) < len {
                    let r = c.to_rational().unwrap();
                    inner_vec[idx as usize] = r.numer() * (&inner_den / r.denom());
                }
            }
        }
        let mut acc = vec![BigInt::zero(); len];
        // acc starts as the top outer coefficient
        acc[0] = outer_num[t_terms as usize - 1].clone();
        let mut acc_den = outer_den[t_terms as usize - 1].clone();
        for r in (0..t_terms - 1).rev() {
            // acc <- acc * inner + c_r, sharing one denominator throughout
            let mut next = vec![BigInt::zero(); len];
            for (i, a) in acc.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, g) in inner_vec.iter().enumerate() {
                    if g.is_zero() || i + j >= len {
                        continue;
                    }
                    next[i + j] += a * g;
                }
            }
            let d_r = &outer_den[r as usize];
            let total_den = (&acc_den * &inner_den).lcm(d_r);
            let scale_next = &total_den / (&acc_den * &inner_den);
            let scale_c = &total_den / d_r;
            for v in next.iter_mut() {
                *v *= &scale_next;
            }
            next[0] += &outer_num[r as usize] * &scale_c;
            acc = next;
            acc_den = total_den;
        }
        let step = rat(1, m as i64);
        let den_rat = Rational::from_integer(acc_den);
        let terms: Vec<(Rational, CycNumber)> = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                (
                    &step * rati(i as i64),
                    CycNumber::from_rational(Rational::from_integer(c) / &den_rat),
                )
            })
            .collect();
        Some(PuiseuxSeries::from_terms(terms, target.clone()))
    }

    // --- dense-grid helpers --------------------------------------------------

    fn to_dense(&self, base: &Rational, m: u64, len: usize) -> Vec<CycNumber> {
        let mut out = vec![CycNumber::zero(); len];
        let step = rat(1, m as i64);
        for (e, c) in &self.terms {
            let idx = (e - base) / &step;
            debug_assert!(idx.is_integer());
            let i = idx.to_integer().to_i64().unwrap();
            if i >= 0 && (i as usize) < len {
                out[i as usize] = c.clone();
            }
        }
        out
    }

    fn from_dense(base: &Rational, m: u64, coeffs: &[CycNumber], precision: Rational) -> PuiseuxSeries {
        let step = rat(1, m as i64);
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (base + &step * rati(i as i64), c.clone()))
            .collect();
        let mut s = PuiseuxSeries { ramification: m, precision, terms };
        s.normalize();
        s
    }

    // --- comparison -----------------------------------------------------------

    /// First exponent below the common precision window (and `upto`, when
    /// given) where the two series disagree.
    pub fn first_mismatch(
        &self,
        other: &PuiseuxSeries,
        upto: Option<&Rational>,
    ) -> Option<(Rational, CycNumber, CycNumber)> {
        let mut bound = self.precision.clone().min(other.precision.clone());
        if let Some(u) = upto {
            bound = bound.min(u.clone());
        }
        let mut exps: Vec<&Rational> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|e| **e < bound)
            .collect();
        exps.sort();
        exps.dedup();
        for e in exps {
            let a = self.terms.get(e).cloned().unwrap_or_else(CycNumber::zero);
            let b = other.terms.get(e).cloned().unwrap_or_else(CycNumber::zero);
            if a != b {
                return Some((e.clone(), a, b));
            }
        }
        None
    }

    /// Known-coefficient agreement over the common precision window.
    pub fn agrees_with(&self, other: &PuiseuxSeries, upto: Option<&Rational>) -> bool {
        self.first_mismatch(other, upto).is_none()
    }

    // --- serialization ----------------------------------------------------------

    /// Exact JSON form: all numbers as strings, no floats.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                serde_json::json!({
                    "exp": e.to_string(),
                    "coeff": {
                        "order": c.order(),
                        "coeffs": c.coeffs().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    }
                })
            })
            .collect();
        serde_json::json!({
            "ramification": self.ramification,
            "precision": self.precision.to_string(),
            "terms": terms,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<PuiseuxSeries, QSeriesError> {
        let bad = |m: &str| QSeriesError::Serialization(m.to_string());
        let precision = v
            .get("precision")
            .and_then(|p| p.as_str())
            .and_then(crate::exactnum::parse_rational)
            .ok_or_else(|| bad("missing precision"))?;
        let mut terms = BTreeMap::new();
        for t in v.get("terms").and_then(|t| t.as_array()).ok_or_else(|| bad("missing terms"))? {
            let e = t
                .get("exp")
                .and_then(|p| p.as_str())
                .and_then(crate::exactnum::parse_rational)
                .ok_or_else(|| bad("missing exp"))?;
            let c = t.get("coeff").ok_or_else(|| bad("missing coeff"))?;
            let order = c.get("order").and_then(|o| o.as_u64()).ok_or_else(|| bad("missing order"))?;
            let coeffs: Vec<Rational> = c
                .get("coeffs")
                .and_then(|a| a.as_array())
                .ok_or_else(|| bad("missing coeffs"))?
                .iter()
                .map(|x| x.as_str().and_then(crate::exactnum::parse_rational).ok_or_else(|| bad("bad rational")))
                .collect::<Result<_, _>>()?;
            if coeffs.len() as u64 != crate::exactnum::euler_phi(order) {
                return Err(bad("coefficient vector length must be phi(order)"));
            }
            terms.insert(e, CycNumber::from_coeffs(order, coeffs));
        }
        let mut s = PuiseuxSeries { ramification: 1, precision, terms };
        s.normalize();
        Ok(s)
    }
}

fn grid_len(window: &Rational, m: u64) -> usize {
    // number of grid points i/m with i/m < window
    let scaled = window * rati(m as i64);
    let c = rational_ceil(&scaled);
    c.to_i64().unwrap_or(0).max(0) as usize
}

impl Add<&PuiseuxSeries> for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        let prec = self.precision.clone().min(rhs.precision.clone());
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            match terms.get_mut(e) {
                Some(x) => {
                    *x = &*x + c;
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        let mut s = PuiseuxSeries { ramification: 1, precision: prec, terms };
        s.normalize();
        s
    }
}

impl Sub<&PuiseuxSeries> for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self + &(-rhs)
    }
}

impl Mul<&PuiseuxSeries> for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        let prec = (&self.precision + rhs.valuation_or_precision())
            .min(&rhs.precision + self.valuation_or_precision());
        if let Some(fast) = mul_rational_fast(self, rhs, &prec) {
            return fast;
        }
        let mut terms: BTreeMap<Rational, CycNumber> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1 + e2;
                if e >= prec {
                    continue;
                }
                let p = c1 * c2;
                match terms.get_mut(&e) {
                    Some(x) => {
                        *x = &*x + &p;
                    }
                    None => {
                        terms.insert(e, p);
                    }
                }
            }
        }
        let mut s = PuiseuxSeries { ramification: 1, precision: prec, terms };
        s.normalize();
        s
    }
}

/// Dense integer convolution over the common grid, with one tracked
/// denominator per factor; used when both series have rational coefficients
/// on a reasonably small grid. Avoids per-term gcd reduction.
fn mul_rational_fast(
    lhs: &PuiseuxSeries,
    rhs: &PuiseuxSeries,
    prec: &Rational,
) -> Option<PuiseuxSeries> {
    let v1 = lhs.valuation()?.clone();
    let v2 = rhs.valuation()?.clone();
    let m = lcm_u64(lhs.ramification.max(1), rhs.ramification.max(1));
    let base = &v1 + &v2;
    let window = prec - &base;
    if !window.is_positive() {
        return Some(PuiseuxSeries::zero(prec.clone()));
    }
    let len = grid_len(&window, m);
    if len == 0 || len > 1 << 16 {
        return None;
    }
    let to_int_vec = |s: &PuiseuxSeries, v: &Rational| -> Option<(Vec<BigInt>, BigInt)> {
        let step = rat(1, m as i64);
        let mut den = BigInt::one();
        let mut entries: Vec<(usize, Rational)> = Vec::with_capacity(s.terms.len());
        for (e, c) in &s.terms {
            let idx = ((e - v) / &step).to_integer().to_i64()?;
            debug_assert!(idx >= 0);
            if (idx as usize) < len {
                let r = c.to_rational()?;
                den = den.lcm(r.denom());
                entries.push((idx as usize, r));
            }
        }
        let mut out = vec![BigInt::zero(); len];
        for (idx, r) in entries {
            out[idx] = r.numer() * (&den / r.denom());
        }
        Some((out, den))
    };
    let (a, da) = to_int_vec(lhs, &v1)?;
    let (b, db) = to_int_vec(rhs, &v2)?;
    let mut conv = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() || i + j >= len {
                continue;
            }
            conv[i + j] += x * y;
        }
    }
    let den = Rational::from_integer(&da * &db);
    let step = rat(1, m as i64);
    let terms: BTreeMap<Rational, CycNumber> = conv
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            (
                &base + &step * rati(i as i64),
                CycNumber::from_rational(Rational::from_integer(c) / &den),
            )
        })
        .collect();
    let mut s = PuiseuxSeries { ramification: m, precision: prec.clone(), terms };
    s.normalize();
    Some(s)
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        PuiseuxSeries { ramification: self.ramification, precision: self.precision.clone(), terms }
    }
}

macro_rules! forward_series_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for PuiseuxSeries {
            type Output = PuiseuxSeries;
            fn $method(self, rhs: PuiseuxSeries) -> PuiseuxSeries {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&PuiseuxSeries> for PuiseuxSeries {
            type Output = PuiseuxSeries;
            fn $method(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
                (&self).$method(rhs)
            }
        }
        impl $trait<PuiseuxSeries> for &PuiseuxSeries {
            type Output = PuiseuxSeries;
            fn $method(self, rhs: PuiseuxSeries) -> PuiseuxSeries {
                self.$method(&rhs)
            }
        }
    };
}

forward_series_binop!(Add, add);
forward_series_binop!(Sub, sub);
forward_series_binop!(Mul, mul);

impl Neg for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        -&self
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            let (sign, body) = format_term(e, c);
            if first {
                if sign {
                    write!(f, "-")?;
                }
                write!(f, "{}", body)?;
                first = false;
            } else {
                write!(f, " {} {}", if sign { "-" } else { "+" }, body)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", format_exp_plain(&self.precision))
    }
}

fn format_exp_plain(e: &Rational) -> String {
    if e.is_integer() && !e.is_negative() {
        e.to_integer().to_string()
    } else {
        format!("({})", e)
    }
}

/// Renders one term; returns (leading minus sign, body without sign).
fn format_term(e: &Rational, c: &CycNumber) -> (bool, String) {
    let (sign, mag) = match c.to_rational() {
        Some(r) => (r.is_negative(), CycNumber::from_rational(r.abs())),
        None => (false, c.clone()),
    };
    let coeff_str = if mag.is_rational() {
        let r = mag.to_rational().unwrap();
        if r.is_one() && !e.is_zero() {
            String::new()
        } else {
            format!("{}", r)
        }
    } else {
        format!("({})", mag)
    };
    let q_str = if e.is_zero() {
        String::new()
    } else if e.is_one() {
        "q".to_string()
    } else {
        format!("q^{}", format_exp_plain(e))
    };
    let body = match (coeff_str.is_empty(), q_str.is_empty()) {
        (true, true) => "1".to_string(),
        (true, false) => q_str,
        (false, true) => coeff_str,
        (false, false) => format!("{}*{}", coeff_str, q_str),
    };
    (sign, body)
}

// --- Bernoulli numbers and Eisenstein series ---------------------------------

/// Exact Bernoulli number B_k (B_1 = -1/2 convention).
pub fn bernoulli(k: u64) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(k as usize + 1);
    for m in 0..=k {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
        let mut acc = Rational::zero();
        let mut binom = BigInt::one(); // C(m+1, 0)
        for j in 0..m {
            acc += Rational::from_integer(binom.clone()) * &b[j as usize];
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / rati(m as i64 + 1));
    }
    b[k as usize].clone()
}

/// zeta(1-k) = -B_k / k for even k >= 2.
pub fn zeta_one_minus(k: u64) -> Rational {
    -bernoulli(k) / rati(k as i64)
}

fn integer_term_count(prec: &Rational) -> i64 {
    rational_ceil(prec).to_i64().expect("precision fits in i64")
}

/// The level-1 Eisenstein series E_k = 1 + (2/zeta(1-k)) sum sigma_{k-1}(n) q^n.
/// k = 2 gives the quasimodular E_2.
pub fn eisenstein_level1(k: i64, ctx: &SeriesContext) -> Result<PuiseuxSeries, QSeriesError> {
    if k < 2 || k % 2 != 0 {
        return Err(QSeriesError::InvalidWeight(k));
    }
    let n_max = integer_term_count(&ctx.default_precision);
    let factor = rati(2) / zeta_one_minus(k as u64);
    let mut sigma = vec![BigInt::zero(); n_max.max(1) as usize];
    for d in 1..n_max {
        let dk = BigInt::from(d).pow(k as u32 - 1);
        let mut m = d;
        while m < n_max {
            sigma[m as usize] += &dk;
            m += d;
        }
    }
    let mut coeffs = vec![Rational::one()];
    for n in 1..n_max {
        coeffs.push(&factor * Rational::from_integer(sigma[n as usize].clone()));
    }
    Ok(PuiseuxSeries::from_rational_coeffs(0, &coeffs, ctx.default_precision.clone()))
}

/// The unit part prod_{n>=1} (1 - q^n) of eta, via Euler's pentagonal
/// number theorem.
pub fn eta_unit(ctx: &SeriesContext) -> PuiseuxSeries {
    let prec = ctx.default_precision.clone();
    let mut terms = vec![(Rational::zero(), CycNumber::one())];
    let mut k: i64 = 1;
    loop {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if rati(g1) >= prec && rati(g2) >= prec {
            break;
        }
        let sign = if k % 2 == 0 { rati(1) } else { rati(-1) };
        for g in [g1, g2] {
            if rati(g) < prec {
                terms.push((rati(g), CycNumber::from_rational(sign.clone())));
            }
        }
        k += 1;
    }
    PuiseuxSeries::from_terms(terms, prec)
}

/// eta^t where eta = q^{1/24} prod (1 - q^n); valuation t/24.
pub fn eta_power(t: i64, ctx: &SeriesContext) -> PuiseuxSeries {
    if t == 0 {
        return PuiseuxSeries::constant(CycNumber::one(), ctx.default_precision.clone());
    }
    let unit = eta_unit(ctx).pow_i64(t).expect("eta unit is invertible");
    unit.shifted(&rat(t, 24))
}

/// The classical weight-0 suite built from E4 and E6.
pub struct ModularSuite {
    pub e4: PuiseuxSeries,
    pub e6: PuiseuxSeries,
    /// Delta = (E4^3 - E6^2)/1728
    pub delta: PuiseuxSeries,
    /// j = E4^3 / Delta
    pub j: PuiseuxSeries,
    /// K = 1728/j, valuation +1, leading coefficient 1728
    pub k: PuiseuxSeries,
    /// A = E6/E4, constant term 1
    pub a: PuiseuxSeries,
}

/// Delta, j, K and A to the context precision.
pub fn hauptmodul_suite(ctx: &SeriesContext) -> ModularSuite {
    let e4 = eisenstein_level1(4, ctx).unwrap();
    let e6 = eisenstein_level1(6, ctx).unwrap();
    let e4cubed = e4.pow_i64(3).unwrap();
    let delta = (&e4cubed - &e6.pow_i64(2).unwrap()).scaled_rat(&rat(1, 1728));
    let j = &e4cubed * &delta.invert().expect("Delta has valuation 1");
    let k = j.invert().expect("j has valuation -1").scaled_rat(&rati(1728));
    let a = &e6 * &e4.invert().expect("E4 is a unit");
    ModularSuite { e4, e6, delta, j, k, a }
}
