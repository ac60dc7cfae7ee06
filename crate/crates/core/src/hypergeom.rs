//! Generalized hypergeometric series and the Frobenius indicial machinery.
//!
//! Provides:
//! - [`HypParams`], [`hyp_series`]: nF_{n-1} series by the term-ratio
//!   recurrence
//! - [`rising_factorial`]: the Pochhammer product
//! - [`bh_operator`]: the general hypergeometric operator
//!   (theta+b_1-1)...(theta+b_n-1) - K (theta+a_1)...(theta+a_n)
//! - [`bh_solution_basis`]: the n solutions K^{1-b_i} nF_{n-1}(...)
//! - [`ThetaOde`], [`indicial_polynomial`]: the regular-singular theta-form
//!   of an ODE and its indicial polynomial

use crate::exactnum::{rati, Rational};
use crate::mlde::{FuchsOperator, MldeError};
use crate::polyk::{QPoly, RatK};
use crate::qseries::PuiseuxSeries;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypError {
    #[error("lower parameter {0} is zero or a negative integer")]
    InvalidLowerParameter(Rational),
    #[error("exponents {0} and {1} differ by an integer; logarithmic solutions are out of scope")]
    ResonantExponents(Rational, Rational),
}

/// Parameters of a generalized hypergeometric series nF_{n-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypParams {
    uppers: Vec<Rational>,
    lowers: Vec<Rational>,
}

impl HypParams {
    /// Requires one more upper than lower parameter, and no lower parameter
    /// that is zero or a negative integer.
    pub fn new(uppers: Vec<Rational>, lowers: Vec<Rational>) -> Result<HypParams, HypError> {
        assert_eq!(uppers.len(), lowers.len() + 1, "nF_{{n-1}} takes n uppers and n-1 lowers");
        for b in &lowers {
            if b.is_integer() && !b.is_positive() {
                return Err(HypError::InvalidLowerParameter(b.clone()));
            }
        }
        Ok(HypParams { uppers, lowers })
    }

    pub fn uppers(&self) -> &[Rational] {
        &self.uppers
    }

    pub fn lowers(&self) -> &[Rational] {
        &self.lowers
    }
}

/// The rising factorial (alpha)_r = alpha (alpha+1) ... (alpha+r-1); 1 for r = 0.
pub fn rising_factorial(alpha: &Rational, r: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..r {
        acc *= alpha + rati(i as i64);
    }
    acc
}

/// nF_{n-1}(a_0..a_{n-1}; b_1..b_{n-1}; z) to `terms` coefficients, computed
/// by the term-ratio recurrence c_{r+1}/c_r = prod(a_i+r)/(prod(b_j+r)(r+1)).
pub fn hyp_series(params: &HypParams, terms: i64) -> PuiseuxSeries {
    let prec = rati(terms);
    let mut coeffs: Vec<Rational> = Vec::with_capacity(terms.max(0) as usize);
    let mut c = Rational::one();
    for r in 0..terms {
        coeffs.push(c.clone());
        if r + 1 < terms {
            let rr = rati(r);
            let mut num = Rational::one();
            for a in &params.uppers {
                num *= a + &rr;
            }
            let mut den = &rr + rati(1);
            for b in &params.lowers {
                den *= b + &rr;
            }
            c = c * num / den;
        }
    }
    PuiseuxSeries::from_rational_coeffs(0, &coeffs, prec)
}

/// The Beukers-Heckman operator
/// (theta+b_1-1)...(theta+b_n-1) - K (theta+a_1)...(theta+a_n),
/// with coefficients of degree <= 1 in K.
pub fn bh_operator(alphas: &[Rational], betas: &[Rational]) -> FuchsOperator {
    assert_eq!(alphas.len(), betas.len(), "equal-length parameter lists");
    let expand = |shifts: Vec<Rational>| -> Vec<Rational> {
        // prod (theta + s): coefficients of theta^i
        let mut acc = vec![Rational::one()];
        for s in shifts {
            let mut next = vec![Rational::zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i] += c * &s;
                next[i + 1] += c;
            }
            acc = next;
        }
        acc
    };
    let upper = expand(betas.iter().map(|b| b - rati(1)).collect());
    let lower = expand(alphas.to_vec());
    let coeffs = upper
        .iter()
        .zip(lower.iter())
        .map(|(u, l)| RatK::from_poly(QPoly::from_coeffs(vec![u.clone(), -l.clone()])))
        .collect();
    FuchsOperator::new(coeffs)
}

/// The n independent solutions K^{1-b_i} nF_{n-1}(1+a_1-b_i, ...;
/// 1+b_1-b_i, v, ...; K), the v marking omission of the index-i entry.
/// Errors when two betas differ by an integer.
pub fn bh_solution_basis(
    alphas: &[Rational],
    betas: &[Rational],
    terms: i64,
) -> Result<Vec<PuiseuxSeries>, HypError> {
    assert_eq!(alphas.len(), betas.len());
    for (i, bi) in betas.iter().enumerate() {
        for bj in betas.iter().skip(i + 1) {
            if (bi - bj).is_integer() {
                return Err(HypError::ResonantExponents(bi.clone(), bj.clone()));
            }
        }
    }
    let mut out = Vec::with_capacity(betas.len());
    for (i, bi) in betas.iter().enumerate() {
        let uppers: Vec<Rational> = alphas.iter().map(|a| rati(1) + a - bi).collect();
        let lowers: Vec<Rational> = betas
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, b)| rati(1) + b - bi)
            .collect();
        let params = HypParams::new(uppers, lowers)?;
        let series = hyp_series(&params, terms).shifted(&(rati(1) - bi));
        out.push(series);
    }
    Ok(out)
}

/// A regular-singular ODE in theta-form:
/// theta^n f + g_1 theta^{n-1} f + ... + g_n f = 0 with the g_i power
/// series in the local variable (valuation >= 0).
#[derive(Clone, Debug)]
pub struct ThetaOde {
    /// coeffs[i] = g_{i+1}, the coefficient of theta^{n-1-i}.
    coeffs: Vec<PuiseuxSeries>,
}

impl ThetaOde {
    pub fn new(coeffs: Vec<PuiseuxSeries>) -> ThetaOde {
        for g in &coeffs {
            if let Some(v) = g.valuation() {
                assert!(!v.is_negative(), "theta-form coefficients must be regular at 0");
            }
        }
        ThetaOde { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[PuiseuxSeries] {
        &self.coeffs
    }

    /// Build from a Fuchsian operator by normalizing to monic theta^n and
    /// expanding the coefficients at K = 0.
    pub fn from_fuchsian(op: &FuchsOperator, precision: &Rational) -> Result<ThetaOde, MldeError> {
        let monic = op.monic_normalized()?;
        let n = monic.degree();
        let mut coeffs = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let c = monic.coeff(i);
            if c.k_pow() != 0 {
                return Err(MldeError::NotFuchsianOnThreePoints(
                    "coefficient has a pole at K = 0 in theta-form".to_string(),
                ));
            }
            coeffs.push(c.to_series(precision));
        }
        Ok(ThetaOde { coeffs })
    }
}

/// The indicial polynomial r^n + g_1(0) r^{n-1} + ... + g_n(0).
pub fn indicial_polynomial(ode: &ThetaOde) -> QPoly {
    let n = ode.degree();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    for (i, g) in ode.coeffs.iter().enumerate() {
        // g_{i+1} multiplies theta^{n-1-i}
        let c0 = g
            .known_coeff(&Rational::zero())
            .map(|c| c.to_rational().expect("rational constant term"))
            .unwrap_or_else(Rational::zero);
        coeffs[n - 1 - i] = c0;
    }
    QPoly::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn rising_factorial_values() {
        assert_eq!(rising_factorial(&rat(1, 2), 3), rat(15, 8));
        assert_eq!(rising_factorial(&rat(22, 7), 0), rati(1));
        assert_eq!(rising_factorial(&rat(-1, 6), 2), rat(-5, 36));
    }

    #[test]
    fn gauss_series_first_terms() {
        let p = HypParams::new(vec![rat(-1, 6), rat(1, 6)], vec![rat(1, 2)]).unwrap();
        let f = hyp_series(&p, 5);
        assert!(f.coeff(&rati(0)).is_one());
        assert_eq!(f.coeff_rational(&rati(1)), rat(-1, 18));
    }

    #[test]
    fn zero_upper_parameter_truncates() {
        let p = HypParams::new(vec![rat(-1, 3), rati(0)], vec![rat(1, 6)]).unwrap();
        let f = hyp_series(&p, 8);
        assert_eq!(f.iter_terms().count(), 1);
        assert!(f.coeff(&rati(0)).is_one());
    }

    #[test]
    fn invalid_lower_parameters_rejected() {
        assert!(matches!(
            HypParams::new(vec![rati(1), rati(1)], vec![rati(0)]),
            Err(HypError::InvalidLowerParameter(_))
        ));
        assert!(matches!(
            HypParams::new(vec![rati(1), rati(1)], vec![rati(-3)]),
            Err(HypError::InvalidLowerParameter(_))
        ));
    }

    #[test]
    fn coefficients_match_rising_factorial_products() {
        // independent route: coefficient of z^r is
        // prod (a_i)_r / (prod (b_j)_r r!)
        let uppers = vec![rat(1, 3), rat(-2, 5), rat(7, 4)];
        let lowers = vec![rat(5, 6), rat(3, 2)];
        let p = HypParams::new(uppers.clone(), lowers.clone()).unwrap();
        let f = hyp_series(&p, 9);
        let mut factorial = Rational::one();
        for r in 0..9u32 {
            if r > 0 {
                factorial *= rati(r as i64);
            }
            let mut expect = Rational::one();
            for a in &uppers {
                expect *= rising_factorial(a, r);
            }
            for b in &lowers {
                expect /= rising_factorial(b, r);
            }
            expect /= &factorial;
            assert_eq!(f.coeff_rational(&rati(r as i64)), expect, "coefficient of z^{}", r);
        }
    }

    #[test]
    fn bh_operator_degree_one() {
        // (theta + 1 - 1) - K (theta + 0) = (1-K) theta
        let op = bh_operator(&[rati(0)], &[rati(1)]);
        assert_eq!(op.degree(), 1);
        assert!(op.coeff(0).is_zero());
        assert_eq!(op.coeff(1), &RatK::from_poly(QPoly::one_minus_k()));
    }

    #[test]
    fn bh_operator_matches_degree2_display() {
        // (r1, r2) = (0, 1/2): beta = 11/12 -+ (r1-r2)/2, alphas (0, 1/3);
        // after dividing by 1-K this is the degree-2 display with a = -1/18
        let d = rat(-1, 4);
        let betas = vec![rat(11, 12) - &d, rat(11, 12) + &d];
        let op = bh_operator(&[rati(0), rat(1, 3)], &betas);
        let monic = op.monic_normalized().unwrap();
        let display = crate::mlde::displays::degree2(&rat(-1, 18));
        assert_eq!(monic, display);
    }

    #[test]
    fn bh_operator_equals_literal_composition() {
        // (theta+b1-1) o (theta+b2-1) - K (theta+a1) o (theta+a2), built by
        // operator composition, agrees with the direct expansion
        use crate::mlde::FuchsOperator;
        let alphas = [rati(0), rat(1, 3)];
        let betas = [rat(7, 6), rat(2, 3)];
        let linear = |c: Rational| {
            FuchsOperator::new(vec![RatK::constant(c), RatK::one()])
        };
        let upper = linear(&betas[0] - rati(1)).compose(&linear(&betas[1] - rati(1)));
        let lower = linear(alphas[0].clone()).compose(&linear(alphas[1].clone()));
        let k_scaled = lower.scaled(&RatK::from_poly(QPoly::var()).scaled(&rati(-1)));
        let composed = upper.add(&k_scaled);
        assert_eq!(composed, bh_operator(&alphas, &betas));
    }

    #[test]
    fn bh_indicial_roots_are_one_minus_beta() {
        let alphas = vec![rati(0), rat(1, 3), rat(2, 3)];
        let betas = vec![rat(7, 6), rat(5, 6), rat(1, 2)];
        let op = bh_operator(&alphas, &betas);
        let ind = op.indicial_polynomial().unwrap();
        for b in &betas {
            assert!(ind.eval(&(rati(1) - b)).is_zero(), "1 - {} should be an indicial root", b);
        }
        assert_eq!(ind.degree(), Some(3));
    }

    #[test]
    fn solution_basis_is_annihilated() {
        let alphas = vec![rati(0), rat(1, 3)];
        let d = rat(-1, 4);
        let betas = vec![rat(11, 12) - &d, rat(11, 12) + &d];
        let op = bh_operator(&alphas, &betas);
        let sols = bh_solution_basis(&alphas, &betas, 12).unwrap();
        assert_eq!(sols.len(), 2);
        assert_eq!(sols[0].valuation(), Some(&rat(-1, 6)));
        assert_eq!(sols[1].valuation(), Some(&rat(1, 3)));
        for s in &sols {
            let residual = op.apply(s);
            assert!(residual.is_zero_to_precision(), "operator does not annihilate {}", s);
        }
    }

    #[test]
    fn degree3_solution_valuations() {
        // (0, 1/3, 2/3): valuations (a_i+1)/6 for a_i = 4 r_i - 2 r_j - 2 r_k
        let r = [rati(0), rat(1, 3), rat(2, 3)];
        let betas: Vec<Rational> = (0..3)
            .map(|i| {
                let ai = rati(4) * &r[i] - rati(2) * &r[(i + 1) % 3] - rati(2) * &r[(i + 2) % 3];
                rati(1) - (ai + rati(1)) / rati(6)
            })
            .collect();
        let alphas = vec![rati(0), rat(1, 3), rat(2, 3)];
        let sols = bh_solution_basis(&alphas, &betas, 10).unwrap();
        assert_eq!(sols[0].valuation(), Some(&rat(-1, 6)));
        assert_eq!(sols[1].valuation(), Some(&rat(1, 6)));
        assert_eq!(sols[2].valuation(), Some(&rat(1, 2)));
        let op = bh_operator(&alphas, &betas);
        for s in &sols {
            assert!(op.apply(s).is_zero_to_precision());
        }
    }

    #[test]
    fn bh_operator_matches_degree3_display() {
        // the N = 3 parameters: betas from the solution exponents
        // (a_i+1)/6 for (r_1, r_2, r_3) = (0, 1/3, 2/3), alphas (0, 1/3, 2/3)
        let r = [rati(0), rat(1, 3), rat(2, 3)];
        let betas: Vec<Rational> = (0..3)
            .map(|i| {
                let ai = rati(4) * &r[i] - rati(2) * &r[(i + 1) % 3] - rati(2) * &r[(i + 2) % 3];
                rati(1) - (ai + rati(1)) / rati(6)
            })
            .collect();
        let op = bh_operator(&[rati(0), rat(1, 3), rat(2, 3)], &betas);
        let monic = op.monic_normalized().unwrap();
        let display = crate::mlde::displays::degree3(&rat(-1, 12), &rat(1, 72));
        assert_eq!(monic, display);
    }

    #[test]
    fn resonant_betas_rejected() {
        let err = bh_solution_basis(&[rati(0), rati(0)], &[rat(1, 2), rat(3, 2)], 5);
        assert!(matches!(err, Err(HypError::ResonantExponents(..))));
    }

    #[test]
    fn indicial_polynomial_examples() {
        // theta^2 - (1/6) theta + a at z = 0 -> r^2 - r/6 + a
        let a = rat(-1, 18);
        let prec = rati(4);
        let ode = ThetaOde::new(vec![
            PuiseuxSeries::from_rational_coeffs(0, &[rat(-1, 6)], prec.clone()),
            PuiseuxSeries::from_rational_coeffs(0, std::slice::from_ref(&a), prec.clone()),
        ]);
        let ind = indicial_polynomial(&ode);
        assert_eq!(ind, QPoly::from_coeffs(vec![a, rat(-1, 6), rati(1)]));
        // theta^3 with all g_i = 0 -> r^3
        let z = PuiseuxSeries::zero(prec.clone());
        let ode3 = ThetaOde::new(vec![z.clone(), z.clone(), z.clone()]);
        assert_eq!(indicial_polynomial(&ode3), QPoly::from_coeffs(vec![rati(0), rati(0), rati(0), rati(1)]));
        // the degree-3 modular case: r^3 - r^2/2 + (a + 1/18) r + b
        let (a3, b3) = (rat(-1, 12), rat(1, 72));
        let display = crate::mlde::displays::degree3(&a3, &b3);
        let ode_m = ThetaOde::from_fuchsian(&display, &rati(5)).unwrap();
        let ind3 = indicial_polynomial(&ode_m);
        let expected = QPoly::from_coeffs(vec![b3, a3 + rat(1, 18), rat(-1, 2), rati(1)]);
        assert_eq!(ind3, expected);
    }
}
