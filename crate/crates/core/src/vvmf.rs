//! Minimal-weight vector-valued modular forms in dimensions 2 and 3, the
//! Hilbert-Poincare dimension formula, the Kaneko-Zagier equation, and
//! supersingular polynomials.
//!
//! Provides:
//! - [`ExponentSet`]: the T-exponents r_i in [0,1), the sole
//!   representation-theoretic input
//! - [`dim_formula`]: coefficients of (t^{k_1}+...+t^{k_n})/((1-t^4)(1-t^6))
//! - [`dim2_minimal`], [`dim3_minimal`]: minimal-weight components built
//!   from 2F1 / 3F2 series in K, normalized to leading coefficient 1
//! - [`eta_twist`]: multiplication of every component by eta^t
//! - [`kaneko_zagier_scalar`]: the scalar solution F_k of
//!   (D_k^2 - k(k+2) E4/144) f = 0
//! - [`supersingular_polynomial`]: the mod-p supersingular locus via F_{p-1}

use crate::exactnum::{rat, rati, CycNumber, Rational};
use crate::hypergeom::{hyp_series, HypParams};
use crate::mlde::{modular_wronskian, Mlde, MldeError};
use crate::modp::{fp_inv, fp_mul, is_prime, FpPoly};
use crate::qseries::{eta_power, eta_unit, hauptmodul_suite, PuiseuxSeries, SeriesContext};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VvmfError {
    #[error("exponent {0} lies outside [0, 1)")]
    ExponentOutOfRange(Rational),
    #[error("exponents must be pairwise distinct; {0} repeats")]
    EqualExponents(Rational),
    #[error("dimension {dim} takes {dim} exponents, got {got}")]
    WrongDimension { dim: usize, got: usize },
    #[error("the minimal weight {0} is not an integer")]
    NonIntegralWeight(Rational),
    #[error("weight {0} is -1 mod 6: the indicial roots of the Kaneko-Zagier equation are resonant")]
    ResonantWeight(i64),
    #[error("weight {0} has a double indicial root; logarithmic solutions are out of scope")]
    LogarithmicCase(i64),
    #[error("{0} is not a prime greater than 5")]
    CompositeInput(u64),
    #[error("precision too low: need at least {needed} q-terms, got {got}")]
    PrecisionTooLow { needed: i64, got: i64 },
    #[error(transparent)]
    Mlde(#[from] MldeError),
}

/// The indicial exponents r_1 < ... < r_n of rho(T), each in [0, 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentSet {
    exponents: Vec<Rational>,
}

impl ExponentSet {
    /// Sorts the exponents; errors when one lies outside [0,1) or repeats.
    pub fn new(mut exponents: Vec<Rational>) -> Result<ExponentSet, VvmfError> {
        for r in &exponents {
            if r.is_negative() || *r >= rati(1) {
                return Err(VvmfError::ExponentOutOfRange(r.clone()));
            }
        }
        exponents.sort();
        for w in exponents.windows(2) {
            if w[0] == w[1] {
                return Err(VvmfError::EqualExponents(w[0].clone()));
            }
        }
        Ok(ExponentSet { exponents })
    }

    pub fn exponents(&self) -> &[Rational] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// The weights k_1 <= ... <= k_n of a free basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightList {
    weights: Vec<i64>,
}

impl WeightList {
    pub fn new(mut weights: Vec<i64>) -> WeightList {
        assert!(!weights.is_empty(), "a free basis has at least one weight");
        weights.sort_unstable();
        WeightList { weights }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }
}

/// dim H_k: the coefficient of t^k in
/// (t^{k_1} + ... + t^{k_n}) / ((1 - t^4)(1 - t^6)).
pub fn dim_formula(w: &WeightList, k: i64) -> u64 {
    let mut total = 0u64;
    for &ki in w.weights() {
        let d = k - ki;
        if d < 0 {
            continue;
        }
        // coefficient of t^d in 1/((1-t^4)(1-t^6)), by expanding the product
        // of the two geometric series
        let mut count = 0u64;
        let mut a4 = 0i64;
        while a4 <= d {
            if (d - a4) % 6 == 0 {
                count += 1;
            }
            a4 += 4;
        }
        total += count;
    }
    total
}

/// A minimal-weight vector-valued modular form: components ordered by
/// increasing valuation, each with leading coefficient 1, solving `mlde`.
#[derive(Clone, Debug)]
pub struct VvmfComponents {
    pub weight: i64,
    pub exponents: Vec<Rational>,
    pub components: Vec<PuiseuxSeries>,
    pub mlde: Mlde,
}

impl VvmfComponents {
    /// Valuation and unit-leading-coefficient contract plus the MLDE
    /// residual, all to working precision.
    pub fn validate(&self) -> bool {
        for (r, c) in self.exponents.iter().zip(self.components.iter()) {
            if c.valuation() != Some(r) {
                return false;
            }
            if !c.leading_coeff().map(CycNumber::is_one).unwrap_or(false) {
                return false;
            }
            if !self.mlde.apply(c).is_zero_to_precision() {
                return false;
            }
        }
        true
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut params = serde_json::Map::new();
        let n = self.mlde.degree();
        if n >= 2 {
            let a = self.mlde.coeff(n - 2).coeff(1, 0);
            params.insert("a".to_string(), serde_json::Value::String(a.to_string()));
        }
        if n >= 3 {
            let b = self.mlde.coeff(n - 3).coeff(0, 1);
            params.insert("b".to_string(), serde_json::Value::String(b.to_string()));
        }
        serde_json::json!({
            "weight": self.weight,
            "exponents": self.exponents.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            "mlde": format!("{}", self.mlde),
            "parameters": params,
            "components": self.components.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Shared per-call scaffolding for the hypergeometric components.
struct HypScaffold {
    suite: crate::qseries::ModularSuite,
    k_unit: PuiseuxSeries,
    eta_sq: PuiseuxSeries,
}

impl HypScaffold {
    fn new(k: i64, terms: i64) -> HypScaffold {
        let ctx = SeriesContext::new(terms + 3);
        let suite = hauptmodul_suite(&ctx);
        let k_unit = suite.k.shifted(&rati(-1)).scaled_rat(&rat(1, 1728));
        let eta_sq = eta_unit(&ctx).pow_i64(2 * k).expect("eta unit is invertible");
        HypScaffold { suite, k_unit, eta_sq }
    }

    /// eta^{2k} K^e F(K(q)) normalized to leading coefficient one, assembled
    /// as q^{k/12+e} * etaunit^{2k} * (K/(1728q))^e * F(K(q)) so that no
    /// irrational 1728-powers ever appear.
    fn component(&self, k: i64, e: &Rational, params: &HypParams, terms: i64) -> PuiseuxSeries {
        let f_of_k = hyp_series(params, terms + 3).compose(&self.suite.k);
        let unit = &(&self.eta_sq * &self.k_unit.pow_rational(e).expect("unit series")) * &f_of_k;
        let out = unit.shifted(&(rat(k, 12) + e));
        debug_assert!(out.leading_coeff().map(CycNumber::is_one).unwrap_or(false));
        out
    }
}

/// Minimal-weight form in dimension 2: weight k = 6(r_1+r_2) - 1, MLDE
/// D_k^2 f + a E4 f = 0 with a = (r_1 - k/12)(r_2 - k/12), components
/// eta^{2k} K^{(6x+1)/12} 2F1((6x+1)/12, (6x+5)/12; x+1; K) for x = r_i - r_j.
pub fn dim2_minimal(e: &ExponentSet, terms: i64) -> Result<VvmfComponents, VvmfError> {
    if e.len() != 2 {
        return Err(VvmfError::WrongDimension { dim: 2, got: e.len() });
    }
    let r = e.exponents();
    let k_rat = rati(6) * (&r[0] + &r[1]) - rati(1);
    if !k_rat.is_integer() {
        return Err(VvmfError::NonIntegralWeight(k_rat));
    }
    let k = k_rat.to_integer().to_i64().unwrap();
    let a = (&r[0] - rat(k, 12)) * (&r[1] - rat(k, 12));
    let mlde = Mlde::monic_dim2(k, a);
    let scaffold = HypScaffold::new(k, terms);
    let mut components = Vec::with_capacity(2);
    for (i, j) in [(0usize, 1usize), (1, 0)] {
        let x = &r[i] - &r[j];
        let e_k = (rati(6) * &x + rati(1)) / rati(12);
        let params = HypParams::new(
            vec![e_k.clone(), (rati(6) * &x + rati(5)) / rati(12)],
            vec![&x + rati(1)],
        )
        .expect("distinct exponents in [0,1) give valid lower parameters");
        components.push(scaffold.component(k, &e_k, &params, terms));
    }
    Ok(VvmfComponents { weight: k, exponents: r.to_vec(), components, mlde })
}

/// Minimal-weight form in dimension 3: weight k = 4(r_1+r_2+r_3) - 2, MLDE
/// D_k^3 + a E4 D_k + b E6 with (a, b) from the indicial factorization
/// prod (theta - (r_i - k/12)), components
/// eta^{2k} K^{(a_i+1)/6} 3F2(...; r_i-r_j+1, r_i-r_k+1; K).
pub fn dim3_minimal(e: &ExponentSet, terms: i64) -> Result<VvmfComponents, VvmfError> {
    if e.len() != 3 {
        return Err(VvmfError::WrongDimension { dim: 3, got: e.len() });
    }
    let r = e.exponents();
    let k_rat = rati(4) * (&r[0] + &r[1] + &r[2]) - rati(2);
    if !k_rat.is_integer() {
        return Err(VvmfError::NonIntegralWeight(k_rat));
    }
    let k = k_rat.to_integer().to_i64().unwrap();
    let s: Vec<Rational> = r.iter().map(|ri| ri - rat(k, 12)).collect();
    debug_assert_eq!(&s[0] + &s[1] + &s[2], rat(1, 2), "the elementary symmetric sum is forced");
    let e2sym = &s[0] * &s[1] + &s[0] * &s[2] + &s[1] * &s[2];
    let a = e2sym - rat(1, 18);
    let b = -(&s[0] * &s[1] * &s[2]);
    let mlde = Mlde::monic_dim3(k, a, b);
    let scaffold = HypScaffold::new(k, terms);
    let mut components = Vec::with_capacity(3);
    for i in 0..3 {
        let (j, l) = ((i + 1) % 3, (i + 2) % 3);
        let ai = rati(4) * &r[i] - rati(2) * &r[j] - rati(2) * &r[l];
        let e_k = (&ai + rati(1)) / rati(6);
        let params = HypParams::new(
            vec![e_k.clone(), (&ai + rati(3)) / rati(6), (&ai + rati(5)) / rati(6)],
            vec![&r[i] - &r[j] + rati(1), &r[i] - &r[l] + rati(1)],
        )
        .expect("distinct exponents in [0,1) give valid lower parameters");
        components.push(scaffold.component(k, &e_k, &params, terms));
    }
    Ok(VvmfComponents { weight: k, exponents: r.to_vec(), components, mlde })
}

/// Multiply every component by eta^t (t even): the weight shifts by t/2 and
/// every exponent by t/24, while the MLDE coefficients are unchanged.
///
/// Panics when t is odd.
pub fn eta_twist(v: &VvmfComponents, t: i64) -> VvmfComponents {
    assert!(t % 2 == 0, "eta twists act through eta^2");
    if t == 0 {
        return v.clone();
    }
    let max_prec = v
        .components
        .iter()
        .map(|c| c.precision().clone())
        .max()
        .unwrap_or_else(|| rati(1));
    let terms = crate::exactnum::rational_ceil(&(max_prec + rati(2))).to_i64().unwrap().max(1);
    let ctx = SeriesContext::new(terms);
    let eta_t = eta_power(t, &ctx);
    let components: Vec<PuiseuxSeries> = v.components.iter().map(|c| c * &eta_t).collect();
    let exponents: Vec<Rational> = v.exponents.iter().map(|r| r + rat(t, 24)).collect();
    let n = v.mlde.degree();
    let coeffs: Vec<_> = (0..=n).map(|j| v.mlde.coeff(j).clone()).collect();
    let mlde = Mlde::new((0, v.weight + t / 2), coeffs).expect("twist preserves homogeneity");
    VvmfComponents { weight: v.weight + t / 2, exponents, components, mlde }
}

/// The scalar solution F_k of the Kaneko-Zagier equation
/// (D_k^2 - k(k+2) E4 / 144) f = 0: the valuation-0 Frobenius branch,
/// normalized to leading coefficient 1.
pub fn kaneko_zagier_scalar(k: i64, terms: i64) -> Result<PuiseuxSeries, VvmfError> {
    if k.rem_euclid(6) == 5 {
        return Err(if k == -1 { VvmfError::LogarithmicCase(k) } else { VvmfError::ResonantWeight(k) });
    }
    let a = rat(-k * (k + 2), 144);
    let mlde = Mlde::monic_dim2(k, a);
    Ok(mlde.frobenius_solve(&rati(0), &rati(terms))?)
}

/// The monic squarefree polynomial over F_p whose roots are the
/// supersingular j-invariants away from the special values, computed from
/// F_{p-1} via the weight-0 function F_{p-1} Delta^{-m} E4^{-delta} E6^{-eps}.
pub fn supersingular_polynomial(p: u64, terms: i64) -> Result<FpPoly, VvmfError> {
    if !is_prime(p) || p <= 5 {
        return Err(VvmfError::CompositeInput(p));
    }
    let k = (p - 1) as i64;
    let (delta_pow, eps_pow) = match k % 12 {
        0 => (0i64, 0i64),
        2 => (2, 1),
        4 => (1, 0),
        6 => (0, 1),
        8 => (2, 0),
        10 => (1, 1),
        _ => unreachable!("k = p - 1 is even"),
    };
    let m = (k - 4 * delta_pow - 6 * eps_pow) / 12;
    let needed = m + 3;
    if terms < needed {
        return Err(VvmfError::PrecisionTooLow { needed, got: terms });
    }
    let f_k = kaneko_zagier_scalar(k, terms)?;
    let ctx = SeriesContext::new(terms);
    let suite = hauptmodul_suite(&ctx);
    let mut g = &f_k * &suite.delta.pow_i64(-m).expect("Delta is invertible");
    if delta_pow > 0 {
        g = &g * &suite.e4.pow_i64(-delta_pow).expect("E4 is invertible");
    }
    if eps_pow > 0 {
        g = &g * &suite.e6.pow_i64(-eps_pow).expect("E6 is invertible");
    }
    // peel the polynomial in j from the top: g = sum_t f_t j^t
    let mut j_pows = vec![PuiseuxSeries::constant(CycNumber::one(), suite.j.precision().clone())];
    for t in 1..=m {
        j_pows.push((&j_pows[t as usize - 1] * &suite.j).clone());
    }
    let mut f_coeffs = vec![Rational::zero(); m as usize + 1];
    let mut residual = g;
    for t in (0..=m).rev() {
        let c = residual
            .known_coeff(&rati(-t))
            .expect("enough precision for the peel")
            .to_rational()
            .expect("rational Kaneko-Zagier coefficients");
        if !c.is_zero() {
            residual = &residual - &j_pows[t as usize].scaled_rat(&c);
        }
        f_coeffs[t as usize] = c;
    }
    assert!(
        residual.is_zero_to_precision(),
        "the weight-0 function is not a polynomial in j: residual {}",
        residual
    );
    // reduce mod p; the coefficients of f are p-integral
    let coeffs: Vec<u64> = f_coeffs
        .iter()
        .map(|c| {
            let num = c.numer().mod_floor(&BigInt::from(p)).to_u64().unwrap();
            let den = c.denom().mod_floor(&BigInt::from(p)).to_u64().unwrap();
            assert!(den != 0, "denominator divisible by p in the supersingular reduction");
            fp_mul(p, num, fp_inv(p, den))
        })
        .collect();
    let poly = FpPoly::new(p, coeffs);
    assert_eq!(poly.degree(), Some(m as usize), "the peeled polynomial is monic of degree m");
    Ok(poly.squarefree_part())
}

/// Comparison contract between [`supersingular_polynomial`] and the
/// brute-force curve oracle: the root sets in F_{p^2} agree after removing
/// j = 0 and j = 1728 from both sides, and the oracle's membership of those
/// two special invariants follows p mod 12 (j = 0 supersingular iff
/// p = 2 mod 3, j = 1728 iff p = 3 mod 4).
pub fn supersingular_contract_check(p: u64, terms: i64) -> Result<(), String> {
    let poly = supersingular_polynomial(p, terms).map_err(|e| e.to_string())?;
    let f = crate::modp::Fp2::new(p);
    let oracle = crate::modp::supersingular_j_invariants(p);
    let zero = f.embed(0);
    let c1728 = f.embed(1728 % p);
    let mut poly_away = poly.roots_fp2(&f);
    poly_away.remove(&zero);
    poly_away.remove(&c1728);
    let mut oracle_away = oracle.clone();
    oracle_away.remove(&zero);
    oracle_away.remove(&c1728);
    if poly_away != oracle_away {
        return Err(format!(
            "p = {}: root sets differ away from the special invariants: polynomial {:?}, oracle {:?}",
            p, poly_away, oracle_away
        ));
    }
    let want_zero = p % 3 == 2;
    if oracle.contains(&zero) != want_zero {
        return Err(format!("p = {}: oracle membership of j = 0 contradicts p mod 3", p));
    }
    let want_1728 = p % 4 == 3;
    if oracle.contains(&c1728) != want_1728 {
        return Err(format!("p = {}: oracle membership of j = 1728 contradicts p mod 4", p));
    }
    Ok(())
}

/// The Wronskian law W(F) = c eta^{24 lambda}, lambda the exponent sum:
/// returns the constant c when the law holds to the checked window.
pub fn wronskian_eta_constant(v: &VvmfComponents, window: i64) -> Option<Rational> {
    let w = modular_wronskian(&v.components, v.weight);
    let lambda: Rational = v.exponents.iter().sum();
    let t24 = rati(24) * &lambda;
    if !t24.is_integer() {
        return None;
    }
    let t = t24.to_integer().to_i64().unwrap();
    let prec = crate::exactnum::rational_ceil(&(w.precision() + rati(2))).to_i64().unwrap().max(2);
    let eta = eta_power(t, &SeriesContext::new(prec));
    let c = w.leading_coeff()?.to_rational()?;
    if w.valuation() != eta.valuation() {
        return None;
    }
    let upto = w.valuation_or_precision() + rat(window, 1);
    if w.agrees_with(&eta.scaled_rat(&c), Some(&upto)) {
        Some(c)
    } else {
        None
    }
}
