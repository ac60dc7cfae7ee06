//! Modular linear differential equations and their Fuchsian
//! reparameterization in the hauptmodul K = 1728/j.
//!
//! Provides:
//! - [`FormPoly`]: polynomials in E4, E6 (the coefficient ring of MLDEs)
//! - [`Mlde`]: the operator sum_j P_{k+2(n-j)}(E4,E6) D_l^{(j)}
//! - [`modular_derivative`], [`iterated_derivative`]: D_k = theta - (k/12) E2
//!   and its weight-shifting iterates
//! - [`modular_wronskian`]: det(F, DF, ..., D^{n-1}F)
//! - [`ThetaPoly`], [`d_to_theta`]: the expansion D_0^{(j)} = A^j P_j(K, theta_K)
//! - [`FuchsOperator`]: operators in theta_K with rational-function
//!   coefficients, poles confined to {0, 1, infinity}
//! - [`monic_mlde_to_fuchsian`] and [`fuchsian_to_mlde`]: the two directions
//!   of the reparameterization
//! - [`Mlde::frobenius_solve`]: direct power-series solving in q at a chosen
//!   indicial root

use crate::exactnum::{rat, rati, rational_ceil, CycNumber, Rational};
use crate::polyk::{QPoly, RatK};
use crate::qseries::{eisenstein_level1, PuiseuxSeries, SeriesContext};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MldeError {
    #[error("operator is not monic")]
    NotMonic,
    #[error("operator must have weight pair (0, 0), found ({0}, {1})")]
    NonzeroWeight(i64, i64),
    #[error("not a Fuchsian operator on {{0, 1, infinity}}: {0}")]
    NotFuchsianOnThreePoints(String),
    #[error("exponent {root} is resonant: {root} + {offset} is also an indicial root")]
    ResonantExponent { root: Rational, offset: i64 },
    #[error("{root} is not a root of the indicial polynomial")]
    NotAnIndicialRoot { root: Rational },
    #[error("coefficient of D^{0} is not homogeneous of weight {1}")]
    InhomogeneousCoefficient(usize, i64),
}

// --- polynomials in E4 and E6 -------------------------------------------------

/// A polynomial in E4 and E6 with rational coefficients, stored by monomial
/// exponent pair (a, b) for E4^a E6^b. MLDE coefficients are homogeneous of
/// fixed weight 4a + 6b; general sums appear transiently in the operator
/// algebra of the text parser.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl FormPoly {
    pub fn zero() -> Self {
        FormPoly::default()
    }

    pub fn one() -> Self {
        FormPoly::monomial(0, 0, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        FormPoly::monomial(0, 0, c)
    }

    pub fn e4() -> Self {
        FormPoly::monomial(1, 0, Rational::one())
    }

    pub fn e6() -> Self {
        FormPoly::monomial(0, 1, Rational::one())
    }

    /// Delta = (E4^3 - E6^2)/1728.
    pub fn delta() -> Self {
        &FormPoly::monomial(3, 0, rat(1, 1728)) + &FormPoly::monomial(0, 2, rat(-1, 1728))
    }

    pub fn monomial(a: u32, b: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        FormPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rational {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Weight 4a+6b common to all monomials; None for the zero polynomial,
    /// Err when the polynomial is not homogeneous.
    pub fn weight(&self) -> Result<Option<i64>, ()> {
        let mut w = None;
        for (a, b) in self.terms.keys() {
            let this = 4 * (*a as i64) + 6 * (*b as i64);
            match w {
                None => w = Some(this),
                Some(prev) if prev != this => return Err(()),
                _ => {}
            }
        }
        Ok(w)
    }

    pub fn scaled(&self, r: &Rational) -> FormPoly {
        if r.is_zero() {
            return FormPoly::zero();
        }
        FormPoly { terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect() }
    }

    pub fn pow(&self, mut e: u32) -> FormPoly {
        let mut acc = FormPoly::one();
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

    /// Value at E4 = E6 = 1 (the constant term of the q-expansion).
    pub fn eval_at_one(&self) -> Rational {
        self.terms.values().sum()
    }

    /// The q-expansion, given expansions of E4 and E6.
    pub fn eval_series(&self, e4: &PuiseuxSeries, e6: &PuiseuxSeries, precision: &Rational) -> PuiseuxSeries {
        let max_a = self.terms.keys().map(|(a, _)| *a).max().unwrap_or(0);
        let max_b = self.terms.keys().map(|(_, b)| *b).max().unwrap_or(0);
        let mut e4_pows = vec![PuiseuxSeries::constant(CycNumber::one(), precision.clone())];
        for _ in 0..max_a {
            e4_pows.push(e4_pows.last().unwrap() * e4);
        }
        let mut e6_pows = vec![PuiseuxSeries::constant(CycNumber::one(), precision.clone())];
        for _ in 0..max_b {
            e6_pows.push(e6_pows.last().unwrap() * e6);
        }
        let mut acc = PuiseuxSeries::zero(precision.clone());
        for ((a, b), c) in &self.terms {
            let term = (&e4_pows[*a as usize] * &e6_pows[*b as usize]).scaled_rat(c);
            acc = &acc + &term;
        }
        acc.truncated(precision)
    }

    /// The graded modular derivative: D(E4) = -E6/3, D(E6) = -E4^2/2,
    /// extended as a derivation. Raises the weight by 2.
    pub fn derivative(&self) -> FormPoly {
        let mut acc = FormPoly::zero();
        for ((a, b), c) in &self.terms {
            if *a > 0 {
                let coeff = c * rat(-(*a as i64), 3);
                acc = &acc + &FormPoly::monomial(a - 1, b + 1, coeff);
            }
            if *b > 0 {
                let coeff = c * rat(-(*b as i64), 2);
                acc = &acc + &FormPoly::monomial(a + 2, b - 1, coeff);
            }
        }
        acc
    }

    /// Rewrite a homogeneous polynomial through E4 = A^2/(1-K),
    /// E6 = A^3/(1-K): returns (power of A, rational function in K).
    pub fn as_a_power_times_ratk(&self) -> Option<(u32, RatK)> {
        let w = self.weight().ok()??;
        debug_assert!(w % 2 == 0);
        let a_pow = (w / 2) as u32;
        let max_den = self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0);
        let mut num = QPoly::zero();
        for ((a, b), c) in &self.terms {
            let pad = QPoly::one_minus_k().pow(max_den - (a + b)).scaled(c);
            num = &num + &pad;
        }
        Some((a_pow, RatK::new(num, 0, max_den)))
    }
}

impl Add<&FormPoly> for &FormPoly {
    type Output = FormPoly;
    fn add(self, rhs: &FormPoly) -> FormPoly {
        let mut terms = self.terms.clone();
        for (k, c) in &rhs.terms {
            let entry = terms.entry(*k).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(k);
            }
        }
        FormPoly { terms }
    }
}

impl Sub<&FormPoly> for &FormPoly {
    type Output = FormPoly;
    fn sub(self, rhs: &FormPoly) -> FormPoly {
        self + &(-rhs)
    }
}

impl Mul<&FormPoly> for &FormPoly {
    type Output = FormPoly;
    fn mul(self, rhs: &FormPoly) -> FormPoly {
        let mut acc = FormPoly::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &rhs.terms {
                acc = &acc + &FormPoly::monomial(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        acc
    }
}

impl Neg for &FormPoly {
    type Output = FormPoly;
    fn neg(self) -> FormPoly {
        FormPoly { terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }
}

impl fmt::Display for FormPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in self.terms.iter().rev() {
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
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (*a == 0 && *b == 0) {
                parts.push(mag.to_string());
            }
            if *a == 1 {
                parts.push("E4".into());
            } else if *a > 1 {
                parts.push(format!("E4^{}", a));
            }
            if *b == 1 {
                parts.push("E6".into());
            } else if *b > 1 {
                parts.push(format!("E6^{}", b));
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

// --- the modular derivative ----------------------------------------------------

fn e2_for(precision: &Rational) -> PuiseuxSeries {
    let terms = rational_ceil(&(precision + rati(1))).to_i64().unwrap().max(1);
    let ctx = SeriesContext::new(terms);
    eisenstein_level1(2, &ctx).unwrap()
}

fn modular_derivative_with(f: &PuiseuxSeries, k: i64, e2: &PuiseuxSeries) -> PuiseuxSeries {
    let correction = (e2 * f).scaled_rat(&rat(k, 12));
    &f.theta() - &correction
}

/// D_k f = theta(f) - (k/12) E2 f.
pub fn modular_derivative(f: &PuiseuxSeries, k: i64) -> PuiseuxSeries {
    modular_derivative_with(f, k, &e2_for(f.precision()))
}

/// D_k^{(n)} = D_{k+2(n-1)} o ... o D_k; n = 0 is the identity.
pub fn iterated_derivative(f: &PuiseuxSeries, k: i64, n: u32) -> PuiseuxSeries {
    let e2 = e2_for(f.precision());
    let mut out = f.clone();
    for j in 0..n {
        out = modular_derivative_with(&out, k + 2 * j as i64, &e2);
    }
    out
}

/// W(F) = det(F, DF, ..., D^{n-1}F) for components of weight k.
pub fn modular_wronskian(components: &[PuiseuxSeries], k: i64) -> PuiseuxSeries {
    assert!(!components.is_empty(), "Wronskian of an empty component list");
    let n = components.len();
    let e2 = e2_for(components[0].precision());
    // column j holds D^{(j)} applied to every component
    let mut cols: Vec<Vec<PuiseuxSeries>> = vec![components.to_vec()];
    for j in 1..n {
        let prev = &cols[j - 1];
        let next = prev
            .iter()
            .map(|s| modular_derivative_with(s, k + 2 * (j as i64 - 1), &e2))
            .collect();
        cols.push(next);
    }
    let rows: Vec<Vec<PuiseuxSeries>> = (0..n)
        .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
        .collect();
    series_determinant(&rows)
}

fn series_determinant(rows: &[Vec<PuiseuxSeries>]) -> PuiseuxSeries {
    let n = rows.len();
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc: Option<PuiseuxSeries> = None;
    for (i, row) in rows.iter().enumerate() {
        let minor: Vec<Vec<PuiseuxSeries>> = rows
            .iter()
            .enumerate()
            .filter(|(r, _)| *r != i)
            .map(|(_, rr)| rr[1..].to_vec())
            .collect();
        let mut term = &row[0] * &series_determinant(&minor);
        if i % 2 == 1 {
            term = -term;
        }
        acc = Some(match acc {
            None => term,
            Some(a) => &a + &term,
        });
    }
    acc.unwrap()
}

// --- MLDE ------------------------------------------------------------------------

/// A modular linear differential operator
/// `L = sum_{j=0}^n P_{k+2(n-j)}(E4, E6) D_l^{(j)}` of weight pair (k, l).
#[derive(Clone, Debug, PartialEq)]
pub struct Mlde {
    weight_pair: (i64, i64),
    /// coeffs[j] multiplies D_l^{(j)}; length degree+1.
    coeffs: Vec<FormPoly>,
}

impl Mlde {
    pub fn new(weight_pair: (i64, i64), coeffs: Vec<FormPoly>) -> Result<Mlde, MldeError> {
        assert!(!coeffs.is_empty());
        let n = coeffs.len() - 1;
        let k = weight_pair.0;
        for (j, p) in coeffs.iter().enumerate() {
            let expected = k + 2 * (n as i64 - j as i64);
            match p.weight() {
                Ok(None) => {}
                Ok(Some(w)) if w == expected => {}
                _ => return Err(MldeError::InhomogeneousCoefficient(j, expected)),
            }
        }
        Ok(Mlde { weight_pair, coeffs })
    }

    /// The monic degree-2 family D_k^(2) + a E4 of weight (0, k).
    pub fn monic_dim2(k: i64, a: Rational) -> Mlde {
        Mlde::new(
            (0, k),
            vec![FormPoly::monomial(1, 0, a), FormPoly::zero(), FormPoly::one()],
        )
        .unwrap()
    }

    /// The monic degree-3 family D_k^(3) + a E4 D_k + b E6 of weight (0, k).
    pub fn monic_dim3(k: i64, a: Rational, b: Rational) -> Mlde {
        Mlde::new(
            (0, k),
            vec![
                FormPoly::monomial(0, 1, b),
                FormPoly::monomial(1, 0, a),
                FormPoly::zero(),
                FormPoly::one(),
            ],
        )
        .unwrap()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn weight_pair(&self) -> (i64, i64) {
        self.weight_pair
    }

    pub fn coeff(&self, j: usize) -> &FormPoly {
        &self.coeffs[j]
    }

    pub fn is_monic(&self) -> bool {
        self.weight_pair.0 == 0 && self.coeffs.last().unwrap() == &FormPoly::one()
    }

    /// Apply the operator to a series.
    pub fn apply(&self, f: &PuiseuxSeries) -> PuiseuxSeries {
        let n = self.degree();
        let l = self.weight_pair.1;
        let prec = f.precision() + rati(1);
        let terms = rational_ceil(&prec).to_i64().unwrap().max(1);
        let ctx = SeriesContext::new(terms);
        let e2 = eisenstein_level1(2, &ctx).unwrap();
        let e4 = eisenstein_level1(4, &ctx).unwrap();
        let e6 = eisenstein_level1(6, &ctx).unwrap();
        let mut acc = PuiseuxSeries::zero(f.precision().clone());
        let mut deriv = f.clone();
        for j in 0..=n {
            if j > 0 {
                deriv = modular_derivative_with(&deriv, l + 2 * (j as i64 - 1), &e2);
            }
            if self.coeffs[j].is_zero() {
                continue;
            }
            let pv = self.coeffs[j].eval_series(&e4, &e6, &prec);
            acc = &acc + &(&pv * &deriv);
        }
        acc
    }

    /// The indicial polynomial at q = 0:
    /// `sum_j P_j(1,1) prod_{i<j} (r - (l+2i)/12)`.
    pub fn indicial_polynomial(&self) -> QPoly {
        let l = self.weight_pair.1;
        let mut acc = QPoly::zero();
        let mut factor = QPoly::one();
        for (j, p) in self.coeffs.iter().enumerate() {
            if j > 0 {
                let root = rat(l + 2 * (j as i64 - 1), 12);
                factor = &factor * &QPoly::from_coeffs(vec![-root, Rational::one()]);
            }
            let c = p.eval_at_one();
            if !c.is_zero() {
                acc = &acc + &factor.scaled(&c);
            }
        }
        acc
    }

    /// Internal theta-form: L = sum_i S_i(q) theta^i with S_i power series.
    /// Returns dense rational coefficient arrays S_i[t], t < terms.
    fn theta_form_series(&self, terms: i64) -> Vec<Vec<Rational>> {
        let n = self.degree();
        let l = self.weight_pair.1;
        let ctx = SeriesContext::new(terms.max(1));
        let e2 = eisenstein_level1(2, &ctx).unwrap();
        let e4 = eisenstein_level1(4, &ctx).unwrap();
        let e6 = eisenstein_level1(6, &ctx).unwrap();
        let prec = rati(terms);
        // r_coeffs[i] while iterating j: D_l^{(j)} = sum_i r_coeffs[i] theta^i
        let mut r_coeffs: Vec<PuiseuxSeries> = vec![PuiseuxSeries::constant(CycNumber::one(), prec.clone())];
        let mut s_series: Vec<PuiseuxSeries> = vec![PuiseuxSeries::zero(prec.clone()); n + 1];
        for (j, p) in self.coeffs.iter().enumerate() {
            if j > 0 {
                let c = rat(l + 2 * (j as i64 - 1), 12);
                let mut next: Vec<PuiseuxSeries> = Vec::with_capacity(j + 1);
                for i in 0..=j {
                    let mut term = PuiseuxSeries::zero(prec.clone());
                    if i < j {
                        let scaled = (&e2 * &r_coeffs[i]).scaled_rat(&c);
                        term = &r_coeffs[i].theta() - &scaled;
                    }
                    if i > 0 {
                        term = &term + &r_coeffs[i - 1];
                    }
                    next.push(term);
                }
                r_coeffs = next;
            }
            if p.is_zero() {
                continue;
            }
            let pv = p.eval_series(&e4, &e6, &prec);
            for (i, r) in r_coeffs.iter().enumerate() {
                s_series[i] = &s_series[i] + &(&pv * r);
            }
        }
        s_series
            .iter()
            .map(|s| {
                (0..terms)
                    .map(|t| {
                        s.known_coeff(&rati(t))
                            .expect("theta form known to requested precision")
                            .to_rational()
                            .expect("rational theta-form coefficient")
                    })
                    .collect()
            })
            .collect()
    }

    /// Frobenius solution q^r (1 + O(q)) at an indicial root r, known below
    /// the `precision` exponent bound.
    ///
    /// Errors when r is not an indicial root, or when r + m is also a root
    /// for some integer m >= 1 within the window (resonance).
    pub fn frobenius_solve(&self, r: &Rational, precision: &Rational) -> Result<PuiseuxSeries, MldeError> {
        let t_terms = rational_ceil(&(precision - r)).to_i64().unwrap();
        if t_terms <= 0 {
            return Ok(PuiseuxSeries::zero(precision.clone()));
        }
        let s = self.theta_form_series(t_terms);
        let n = self.degree();
        let eval_u = |t: usize, x: &Rational| -> Rational {
            let mut acc = Rational::zero();
            let mut xp = Rational::one();
            for i in 0..=n {
                acc += &s[i][t] * &xp;
                xp *= x;
            }
            acc
        };
        if !eval_u(0, r).is_zero() {
            return Err(MldeError::NotAnIndicialRoot { root: r.clone() });
        }
        let mut coeffs: Vec<Rational> = vec![Rational::one()];
        for m in 1..t_terms {
            let mut acc = Rational::zero();
            for t in 1..=m.min(t_terms - 1) {
                let u = eval_u(t as usize, &(r + rati(m - t)));
                if !u.is_zero() {
                    acc += u * &coeffs[(m - t) as usize];
                }
            }
            let lead = eval_u(0, &(r + rati(m)));
            if lead.is_zero() {
                return Err(MldeError::ResonantExponent { root: r.clone(), offset: m });
            }
            coeffs.push(-acc / lead);
        }
        let terms = coeffs
            .into_iter()
            .enumerate()
            .map(|(m, c)| (r + rati(m as i64), CycNumber::from_rational(c)))
            .collect();
        Ok(PuiseuxSeries::from_terms(terms, r + rati(t_terms)))
    }
}

impl fmt::Display for Mlde {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for j in (0..=n).rev() {
            let p = &self.coeffs[j];
            if p.is_zero() {
                continue;
            }
            let d_str = match j {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{}", j),
            };
            let single_term = p.iter_terms().count() == 1;
            let is_one = p == &FormPoly::one();
            let body = if is_one && !d_str.is_empty() {
                d_str
            } else if single_term {
                let ((a, b), c) = p.iter_terms().next().unwrap();
                let mono = FormPoly::monomial(*a, *b, c.abs());
                let mut s = format!("{}", mono);
                if !d_str.is_empty() {
                    s = format!("{}*{}", s, d_str);
                }
                s
            } else if d_str.is_empty() {
                format!("({})", p)
            } else {
                format!("({})*{}", p, d_str)
            };
            let neg = single_term && p.iter_terms().next().unwrap().1.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                write!(f, "{}", body)?;
                first = false;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// --- the d-to-theta expansion (Lemma-style recurrence) -----------------------

/// The operator P_j(K, theta_K) with D_0^{(j)} = A^j P_j(K, theta_K):
/// coefficients p_{jr}(K)/(1-K)^{rho(j,r)} of theta_K^r for r = 1..=j,
/// with p_{jj} = 1 and rho(j,r) = min(j-r, floor(j/2)).
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaPoly {
    degree: u32,
    /// coeffs[r-1] is the coefficient of theta_K^r.
    coeffs: Vec<RatK>,
}

impl ThetaPoly {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficient of theta_K^r (1 <= r <= degree).
    pub fn coeff(&self, r: u32) -> &RatK {
        &self.coeffs[(r - 1) as usize]
    }

    fn first() -> ThetaPoly {
        ThetaPoly { degree: 1, coeffs: vec![RatK::one()] }
    }

    /// P_{j+1} = theta_K o P_j - j (1+2K)/(6(1-K)) P_j.
    fn step(&self) -> ThetaPoly {
        let j = self.degree;
        let gamma = crate::polyk::gamma_correction().scaled(&rati(j as i64));
        let mut next: Vec<RatK> = Vec::with_capacity(j as usize + 1);
        for r in 1..=j + 1 {
            let p_r = if r <= j { self.coeff(r).clone() } else { RatK::zero() };
            let p_rm1 = if r >= 2 && r - 1 <= j { self.coeff(r - 1).clone() } else { RatK::zero() };
            let val = &(&p_r.theta_deriv() - &(&gamma * &p_r)) + &p_rm1;
            next.push(val);
        }
        ThetaPoly { degree: j + 1, coeffs: next }
    }

    /// Degree/denominator bounds: deg p_{jr} <= rho(j,r), the (1-K)-exponent
    /// of the denominator <= rho(j,r), and no K in any denominator.
    pub fn validate_bounds(&self) -> bool {
        let j = self.degree;
        for r in 1..=j {
            let rho = (j - r).min(j / 2) as usize;
            let c = self.coeff(r);
            if c.k_pow() != 0 {
                return false;
            }
            if (c.omk_pow() as usize) > rho {
                return false;
            }
            if c.numerator().degree().unwrap_or(0) > rho {
                return false;
            }
        }
        self.coeff(j).is_one()
    }
}

/// The cached P_j of the D-to-theta expansion; j >= 1.
pub fn d_to_theta(j: u32) -> Arc<ThetaPoly> {
    assert!(j >= 1);
    static CACHE: OnceLock<Mutex<Vec<Arc<ThetaPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap();
    while guard.len() < j as usize {
        let next = match guard.last() {
            None => ThetaPoly::first(),
            Some(prev) => prev.step(),
        };
        assert!(next.validate_bounds(), "d_to_theta degree/denominator bounds violated at j = {}", next.degree);
        guard.push(Arc::new(next));
    }
    guard[(j - 1) as usize].clone()
}

// --- Fuchsian operators ----------------------------------------------------------

/// An operator sum_i c_i(K) theta_K^i with c_i rational functions whose
/// denominators are supported on {K, 1-K}.
#[derive(Clone, Debug, PartialEq)]
pub struct FuchsOperator {
    /// coeffs[i] is the coefficient of theta_K^i.
    coeffs: Vec<RatK>,
}

impl FuchsOperator {
    pub fn new(mut coeffs: Vec<RatK>) -> FuchsOperator {
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(RatK::zero());
        }
        FuchsOperator { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &RatK {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[RatK] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().unwrap().is_one()
    }

    /// Divide through by the leading coefficient. The leading coefficient
    /// must be a unit of the allowed denominator class, i.e. c K^s (1-K)^t.
    pub fn monic_normalized(&self) -> Result<FuchsOperator, MldeError> {
        let lead = self.coeffs.last().unwrap();
        if lead.is_one() {
            return Ok(self.clone());
        }
        let recip = lead.try_recip().ok_or_else(|| {
            MldeError::NotFuchsianOnThreePoints(format!(
                "leading coefficient {} is not invertible within denominators on {{K, 1-K}}",
                lead
            ))
        })?;
        Ok(FuchsOperator::new(self.coeffs.iter().map(|c| c * &recip).collect()))
    }

    /// Apply to a series in K.
    pub fn apply(&self, f: &PuiseuxSeries) -> PuiseuxSeries {
        let prec = f.precision() + rati(1);
        let mut acc = PuiseuxSeries::zero(f.precision().clone());
        let mut th = f.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                th = th.theta();
            }
            if c.is_zero() {
                continue;
            }
            let cs = c.to_series(&prec);
            acc = &acc + &(&cs * &th);
        }
        acc
    }

    /// The indicial polynomial at K = 0: sum_i c_i(0) r^i. Errors when some
    /// coefficient has a pole at 0 (the operator is not regular-singular
    /// there in theta-form).
    pub fn indicial_polynomial(&self) -> Result<QPoly, MldeError> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let v = c.eval0().ok_or_else(|| {
                MldeError::NotFuchsianOnThreePoints("coefficient has a pole at K = 0 in theta-form".to_string())
            })?;
            coeffs.push(v);
        }
        Ok(QPoly::from_coeffs(coeffs))
    }

    /// Left-multiply by theta_K: theta o (c theta^r) = theta(c) theta^r + c theta^{r+1}.
    pub fn theta_compose(&self) -> FuchsOperator {
        let mut out = vec![RatK::zero(); self.coeffs.len() + 1];
        for (r, c) in self.coeffs.iter().enumerate() {
            out[r] = &out[r] + &c.theta_deriv();
            out[r + 1] = &out[r + 1] + c;
        }
        FuchsOperator::new(out)
    }

    /// Operator product self o rhs.
    pub fn compose(&self, rhs: &FuchsOperator) -> FuchsOperator {
        // theta^i o rhs by iterated theta_compose, then scale by c_i.
        let n = self.coeffs.len();
        let mut power = rhs.clone();
        let mut acc = vec![RatK::zero(); 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.theta_compose();
            }
            if c.is_zero() {
                continue;
            }
            for (r, pc) in power.coeffs.iter().enumerate() {
                if acc.len() <= r {
                    acc.resize(r + 1, RatK::zero());
                }
                acc[r] = &acc[r] + &(c * pc);
            }
        }
        let _ = n;
        FuchsOperator::new(acc)
    }

    pub fn scaled(&self, c: &RatK) -> FuchsOperator {
        FuchsOperator::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, rhs: &FuchsOperator) -> FuchsOperator {
        let mut out = vec![RatK::zero(); self.coeffs.len().max(rhs.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        FuchsOperator::new(out)
    }
}

impl fmt::Display for FuchsOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let t_str = match i {
                0 => String::new(),
                1 => "TK".to_string(),
                _ => format!("TK^{}", i),
            };
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_one() && !t_str.is_empty() {
                write!(f, "{}", t_str)?;
            } else if t_str.is_empty() {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})*{}", c, t_str)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// --- monic MLDE -> Fuchsian -----------------------------------------------------

/// Reparameterize a monic weight-(0,0) MLDE as a Fuchsian operator in
/// theta_K on the three-punctured sphere, dividing by A^n.
pub fn monic_mlde_to_fuchsian(m: &Mlde) -> Result<FuchsOperator, MldeError> {
    if m.weight_pair() != (0, 0) {
        return Err(MldeError::NonzeroWeight(m.weight_pair().0, m.weight_pair().1));
    }
    if !m.is_monic() {
        return Err(MldeError::NotMonic);
    }
    let n = m.degree();
    let mut acc = vec![RatK::zero(); n + 1];
    for j in 0..=n {
        let p = m.coeff(j);
        if p.is_zero() {
            continue;
        }
        let (a_pow, ratk) = p
            .as_a_power_times_ratk()
            .ok_or(MldeError::InhomogeneousCoefficient(j, 2 * (n as i64 - j as i64)))?;
        debug_assert_eq!(a_pow as usize, n - j, "homogeneity fixes the A power");
        if j == 0 {
            acc[0] = &acc[0] + &ratk;
        } else {
            let pj = d_to_theta(j as u32);
            for r in 1..=j {
                acc[r] = &acc[r] + &(&ratk * pj.coeff(r as u32));
            }
        }
    }
    let out = FuchsOperator::new(acc);
    // Shape bound: the theta^{n-r} coefficient is f(K)/(1-K)^{min(r, n/2)}
    // with deg f <= min(r, floor(n/2)).
    for r in 1..=n {
        let c = out.coeff(n - r);
        let bound = r.min(n / 2);
        assert!(c.k_pow() == 0, "no K poles arise from a monic MLDE");
        assert!(
            (c.omk_pow() as usize) <= bound && c.numerator().degree().unwrap_or(0) <= bound,
            "reparameterized operator violates the shape bound at theta^{}",
            n - r
        );
    }
    Ok(out)
}

// --- Fuchsian -> MLDE -------------------------------------------------------------

/// theta_K^m = sum_{s=0}^{m-1} h[m][s] A^{-(m-s)} D^{(m-s)}, computed by
/// inverting the triangular d-to-theta relation. The denominator of h[m][s]
/// is asserted to divide (1-K)^s with numerator degree <= s.
fn theta_in_d_tables(n: usize) -> Vec<Vec<RatK>> {
    let mut h: Vec<Vec<RatK>> = vec![Vec::new(); n + 1];
    for m in 1..=n {
        let mut row = vec![RatK::zero(); m];
        row[0] = RatK::one(); // coefficient of A^{-m} D^{(m)}
        let pm = d_to_theta(m as u32);
        for r in 1..m {
            // theta^m -= p_{m,r} theta^r
            let p = pm.coeff(r as u32).clone();
            if p.is_zero() {
                continue;
            }
            for s in 0..r {
                // theta^r contributes h[r][s] A^{-(r-s)}D^{(r-s)}
                let contribution = &p * &h[r][s];
                let u = r - s; // D power
                row[m - u] = &row[m - u] - &contribution;
            }
        }
        for (s, c) in row.iter().enumerate() {
            assert!(c.k_pow() == 0, "theta-in-D table has no K poles");
            assert!(
                (c.omk_pow() as usize) <= s && c.numerator().degree().unwrap_or(0) <= s,
                "h[{}][{}] denominator exceeds (1-K)^{}",
                m,
                s,
                s
            );
        }
        h[m] = row;
    }
    h
}

/// Rewrite H_s(K) E4^{3s} as a holomorphic polynomial in E4 and E6 of weight
/// 12s, through K = 1728 Delta / E4^3.
fn poly_in_k_to_forms(h: &QPoly, s: usize) -> FormPoly {
    let delta = FormPoly::delta();
    let mut acc = FormPoly::zero();
    for (t, c) in h.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        debug_assert!(t <= s);
        let factor = Rational::from_integer(num_bigint::BigInt::from(1728).pow(t as u32)) * c;
        let term = &delta.pow(t as u32) * &FormPoly::monomial(3 * (s - t) as u32, 0, factor);
        acc = &acc + &term;
    }
    acc
}

/// Pull a Fuchsian operator on {0, 1, infinity} back to an MLDE of the shape
/// `(E4 E6)^n D^n + F_1 (E4 E6)^{n-1} D^{n-1} + ... + F_n` with F_k
/// holomorphic of weight 12k (an operator of weight pair (10n, 0)).
pub fn fuchsian_to_mlde(op: &FuchsOperator) -> Result<Mlde, MldeError> {
    let op = op.monic_normalized()?;
    let n = op.degree();
    let h = theta_in_d_tables(n);
    let e4e6 = &FormPoly::e4() * &FormPoly::e6();
    let mut out = vec![FormPoly::zero(); n + 1];

    // decompose coefficient of theta^{n-i} as sum_j a_{ij}/(1-K)^j, 0<=j<=i
    for i in 0..=n {
        let c = op.coeff(n - i);
        if c.is_zero() {
            continue;
        }
        if c.k_pow() != 0 {
            return Err(MldeError::NotFuchsianOnThreePoints(
                "coefficient has a pole at K = 0 in theta-form".to_string(),
            ));
        }
        if (c.omk_pow() as usize) > i {
            return Err(MldeError::NotFuchsianOnThreePoints(format!(
                "pole order {} at K = 1 exceeds {} for theta^{}",
                c.omk_pow(),
                i,
                n - i
            )));
        }
        let basis = c.numerator().one_minus_k_basis();
        if basis.len() > c.omk_pow() as usize + 1 {
            return Err(MldeError::NotFuchsianOnThreePoints(format!(
                "numerator degree {} exceeds pole order {}; the operator is irregular at infinity",
                c.numerator().degree().unwrap_or(0),
                c.omk_pow()
            )));
        }
        for (t, coeff) in basis.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let j = c.omk_pow() as usize - t; // a_{ij} / (1-K)^j
            if i == n {
                // constant theta^0 term: E6^{2n}/(1-K)^j = E6^{2(n-j)} E4^{3j}
                let term = FormPoly::monomial(3 * j as u32, 2 * (n - j) as u32, coeff.clone());
                out[0] = &out[0] + &term;
                continue;
            }
            let m = n - i;
            for (s, hval) in h[m].iter().enumerate() {
                if hval.is_zero() {
                    continue;
                }
                let u = m - s; // D power
                // pad h to denominator exactly (1-K)^s
                let pad = QPoly::one_minus_k().pow((s - hval.omk_pow() as usize) as u32);
                let h_num = &pad * hval.numerator();
                let w = poly_in_k_to_forms(&h_num, s);
                let prefactor = FormPoly::monomial(3 * j as u32, 2 * (i - j) as u32, coeff.clone());
                let term = &(&prefactor * &w) * &e4e6.pow(u as u32);
                out[u] = &out[u] + &term;
            }
        }
    }
    Mlde::new((10 * n as i64, 0), out)
}

/// The closed-form displays for the reparameterized monic MLDEs of degree
/// 2 through 5, as printed; used by the verification registry and as test
/// fixtures. The degree-5 display takes a `corrected` flag: the printed
/// theta_K coefficient has a 3b term where the recurrence forces 9b.
pub mod displays {
    use super::*;

    pub fn degree2(a: &Rational) -> FuchsOperator {
        FuchsOperator::new(vec![
            RatK::new(QPoly::constant(a.clone()), 0, 1),
            RatK::new(QPoly::from_coeffs(vec![rat(-1, 6), rat(-2, 6)]), 0, 1),
            RatK::one(),
        ])
    }

    pub fn degree3(a: &Rational, b: &Rational) -> FuchsOperator {
        FuchsOperator::new(vec![
            RatK::new(QPoly::constant(b.clone()), 0, 1),
            RatK::new(
                QPoly::from_coeffs(vec![(rati(18) * a + rati(1)) / rati(18), rat(-4, 18)]),
                0,
                1,
            ),
            RatK::new(QPoly::from_coeffs(vec![rat(-1, 2), rati(-1)]), 0, 1),
            RatK::one(),
        ])
    }

    pub fn degree4(a: &Rational, b: &Rational, c: &Rational) -> FuchsOperator {
        FuchsOperator::new(vec![
            RatK::new(QPoly::constant(c.clone()), 0, 2),
            RatK::new(
                QPoly::from_coeffs(vec![
                    (rati(-6) * a + rati(36) * b - rati(1)) / rati(36),
                    rati(-4) * (rati(3) * a + rati(9) * b + rati(1)) / rati(36),
                    rat(8, 36),
                ]),
                0,
                2,
            ),
            RatK::new(
                QPoly::from_coeffs(vec![
                    (rati(36) * a + rati(11)) / rati(36),
                    rati(-4) * (rati(9) * a + rati(7)) / rati(36),
                    rat(44, 36),
                ]),
                0,
                2,
            ),
            RatK::new(QPoly::from_coeffs(vec![rati(-1), rati(-2)]), 0, 1),
            RatK::one(),
        ])
    }

    pub fn degree5(a: &Rational, b: &Rational, c: &Rational, d: &Rational, corrected: bool) -> FuchsOperator {
        let b_term = if corrected { rati(9) } else { rati(3) };
        FuchsOperator::new(vec![
            RatK::new(QPoly::constant(d.clone()), 0, 2),
            RatK::new(
                QPoly::from_coeffs(vec![
                    (rati(3) * a - rati(9) * b + rati(54) * c + rati(1)) / rati(54),
                    rati(-2) * (rati(6) * a + &b_term * b + rati(1)) / rati(54),
                    rat(16, 54),
                ]),
                0,
                2,
            ),
            RatK::new(
                QPoly::from_coeffs(vec![
                    (rati(-54) * a + rati(108) * b - rati(25)) / rati(108),
                    rati(-4) * (rati(27) * a + rati(27) * b + rati(10)) / rati(108),
                    rat(200, 108),
                ]),
                0,
                2,
            ),
            RatK::new(
                QPoly::from_coeffs(vec![
                    (rati(36) * a + rati(35)) / rati(36),
                    rati(-4) * (rati(9) * a + rati(10)) / rati(36),
                    rat(140, 36),
                ]),
                0,
                2,
            ),
            RatK::new(QPoly::from_coeffs(vec![rat(-5, 3), rat(-10, 3)]), 0, 1),
            RatK::one(),
        ])
    }

    /// D^4 + a E4 D^2 + b E6 D + c E4^2, the general monic degree-4 MLDE.
    pub fn monic_dim4(k: i64, a: &Rational, b: &Rational, c: &Rational) -> Mlde {
        Mlde::new(
            (0, k),
            vec![
                FormPoly::monomial(2, 0, c.clone()),
                FormPoly::monomial(0, 1, b.clone()),
                FormPoly::monomial(1, 0, a.clone()),
                FormPoly::zero(),
                FormPoly::one(),
            ],
        )
        .unwrap()
    }

    /// D^5 + a E4 D^3 + b E6 D^2 + c E4^2 D + d E4 E6.
    pub fn monic_dim5(k: i64, a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Mlde {
        Mlde::new(
            (0, k),
            vec![
                &FormPoly::monomial(1, 0, d.clone()) * &FormPoly::e6(),
                FormPoly::monomial(2, 0, c.clone()),
                FormPoly::monomial(0, 1, b.clone()),
                FormPoly::monomial(1, 0, a.clone()),
                FormPoly::zero(),
                FormPoly::one(),
            ],
        )
        .unwrap()
    }
}
