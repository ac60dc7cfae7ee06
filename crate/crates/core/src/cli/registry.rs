//! The identity-verification registry: every printed identity the engine
//! reproduces, run on demand by `qmf verify`.
//!
//! Each item performs an exact coefficient-wise comparison (or, for the one
//! transcendental identity, a numeric comparison at 1e-6). Items that
//! compare against a suspected misprint separate internal consistency from
//! the printed-source comparison: internal failures report `Failed`, while
//! a confirmed misprint reports `DiscrepancyWithPaperPrint` with the
//! oracle-vs-print witness. Only `Failed` gates the exit code.

use crate::eisenstein::{eis2_alpha, eis2_combination, eis2_difference, fixture_basis, CuspLabel, EisLabel};
use crate::exactnum::{rat, rati, CycNumber, Rational};
use crate::hypergeom::{hyp_series, HypParams};
use crate::mlde::{displays, monic_mlde_to_fuchsian, Mlde};
use crate::qseries::{eisenstein_level1, hauptmodul_suite, PuiseuxSeries, SeriesContext};
use crate::vvmf::{dim2_minimal, dim3_minimal, supersingular_contract_check, wronskian_eta_constant, ExponentSet, VvmfComponents};
use num_traits::Zero;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyStatus {
    Verified,
    Failed,
    DiscrepancyWithPaperPrint,
}

impl fmt::Display for VerifyStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyStatus::Verified => write!(f, "verified"),
            VerifyStatus::Failed => write!(f, "failed"),
            VerifyStatus::DiscrepancyWithPaperPrint => write!(f, "discrepancy-with-paper-print"),
        }
    }
}

/// First failing location with the two disagreeing values.
#[derive(Clone, Debug)]
pub struct Witness {
    pub location: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub identity_name: String,
    pub status: VerifyStatus,
    /// q-term count for series items, instantiation count for the symbolic
    /// reparameterization items, and the inverse tolerance for the numeric
    /// partial-zeta item.
    pub precision_used: Rational,
    pub witness: Option<Witness>,
}

impl VerificationReport {
    fn verified(name: &str, precision: Rational) -> Self {
        VerificationReport {
            identity_name: name.to_string(),
            status: VerifyStatus::Verified,
            precision_used: precision,
            witness: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "identity": self.identity_name,
            "status": self.status.to_string(),
            "precision": self.precision_used.to_string(),
            "witness": self.witness.as_ref().map(|w| serde_json::json!({
                "location": w.location,
                "expected": w.expected,
                "actual": w.actual,
            })),
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} (precision {})", self.identity_name, self.status, self.precision_used)?;
        if let Some(w) = &self.witness {
            write!(f, "\n  at {}: expected {}, got {}", w.location, w.expected, w.actual)?;
        }
        Ok(())
    }
}

/// All registered identity names, in registry order.
pub const IDENTITIES: &[&str] = &[
    "ramanujan",
    "aids",
    "exdeg2",
    "exdeg3",
    "exdeg4",
    "exdeg5",
    "s4-weight4-triple",
    "klein-quartic",
    "n7-weight6-triple",
    "eis-match-n3",
    "eis-match-n4",
    "eis-match-n5",
    "wronskian-eta",
    "partial-zeta-n5",
    "supersingular-11",
    "supersingular-13",
    "supersingular-23",
    "supersingular-29",
    "supersingular-31",
];

struct Checker {
    witness: Option<Witness>,
}

impl Checker {
    fn new() -> Self {
        Checker { witness: None }
    }

    fn series(&mut self, label: &str, lhs: &PuiseuxSeries, rhs: &PuiseuxSeries, upto: Option<&Rational>) {
        if self.witness.is_some() {
            return;
        }
        if let Some((e, a, b)) = lhs.first_mismatch(rhs, upto) {
            self.witness = Some(Witness {
                location: format!("{} at q^{}", label, e),
                expected: b.to_string(),
                actual: a.to_string(),
            });
        }
    }

    fn claim(&mut self, label: &str, ok: bool, expected: &str, actual: &str) {
        if self.witness.is_some() || ok {
            return;
        }
        self.witness = Some(Witness {
            location: label.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }

    fn report(self, name: &str, precision: Rational) -> VerificationReport {
        match self.witness {
            None => VerificationReport::verified(name, precision),
            Some(w) => VerificationReport {
                identity_name: name.to_string(),
                status: VerifyStatus::Failed,
                precision_used: precision,
                witness: Some(w),
            },
        }
    }
}

/// Run one registry item; `prec` overrides the item's default precision.
pub fn verify(name: &str, prec: Option<i64>) -> Result<VerificationReport, String> {
    match name {
        "ramanujan" => Ok(ramanujan(prec.unwrap_or(30))),
        "aids" => Ok(aids(prec.unwrap_or(30))),
        "exdeg2" => Ok(exdeg(2)),
        "exdeg3" => Ok(exdeg(3)),
        "exdeg4" => Ok(exdeg(4)),
        "exdeg5" => Ok(exdeg(5)),
        "s4-weight4-triple" => Ok(s4_weight4_triple(prec.unwrap_or(40))),
        "klein-quartic" => Ok(klein_quartic(prec.unwrap_or(40))),
        "n7-weight6-triple" => Ok(n7_weight6_triple(prec.unwrap_or(40))),
        "eis-match-n3" => Ok(eis_match_n3(prec.unwrap_or(15))),
        "eis-match-n4" => Ok(eis_match_n4(prec.unwrap_or(15))),
        "eis-match-n5" => Ok(eis_match_n5(prec.unwrap_or(15))),
        "wronskian-eta" => Ok(wronskian_eta(prec.unwrap_or(12))),
        "partial-zeta-n5" => Ok(partial_zeta_n5()),
        _ => {
            if let Some(p) = name.strip_prefix("supersingular-") {
                let p: u64 = p.parse().map_err(|_| format!("unknown identity {}", name))?;
                return Ok(supersingular(p, prec));
            }
            Err(format!("unknown identity {}", name))
        }
    }
}

pub fn verify_all(prec: Option<i64>) -> Vec<VerificationReport> {
    IDENTITIES.iter().map(|n| verify(n, prec).expect("registered identity")).collect()
}

// --- individual items ---------------------------------------------------------

fn ramanujan(terms: i64) -> VerificationReport {
    let ctx = SeriesContext::new(terms + 1);
    let e2 = eisenstein_level1(2, &ctx).unwrap();
    let e4 = eisenstein_level1(4, &ctx).unwrap();
    let e6 = eisenstein_level1(6, &ctx).unwrap();
    let upto = rati(terms);
    let mut c = Checker::new();
    // the quasimodular identity theta E2 - E2^2/12 = -E4/12
    let lhs2 = &e2.theta() - &e2.pow_i64(2).unwrap().scaled_rat(&rat(1, 12));
    c.series("D(E2) + E4/12", &lhs2, &e4.scaled_rat(&rat(-1, 12)), Some(&upto));
    let lhs4 = crate::mlde::modular_derivative(&e4, 4);
    c.series("D_4(E4) + E6/3", &lhs4, &e6.scaled_rat(&rat(-1, 3)), Some(&upto));
    let lhs6 = crate::mlde::modular_derivative(&e6, 6);
    c.series("D_6(E6) + E4^2/2", &lhs6, &e4.pow_i64(2).unwrap().scaled_rat(&rat(-1, 2)), Some(&upto));
    c.report("ramanujan", rati(terms))
}

fn aids(terms: i64) -> VerificationReport {
    let ctx = SeriesContext::new(terms + 4);
    let suite = hauptmodul_suite(&ctx);
    let e2 = eisenstein_level1(2, &ctx).unwrap();
    let upto = rati(terms);
    let one = PuiseuxSeries::constant(CycNumber::one(), suite.k.precision().clone());
    let omk_inv = (&one - &suite.k).invert().unwrap();
    let mut c = Checker::new();
    c.series("E4 - A^2/(1-K)", &(&suite.a.pow_i64(2).unwrap() * &omk_inv), &suite.e4, Some(&upto));
    c.series("E6 - A^3/(1-K)", &(&suite.a.pow_i64(3).unwrap() * &omk_inv), &suite.e6, Some(&upto));
    // theta(A) = (E2 E4 E6 - 3 E4^3 + 2 E6^2) / (6 E4^2)
    let num = &(&(&e2 * &suite.e4) * &suite.e6)
        - &(&suite.e4.pow_i64(3).unwrap().scaled_rat(&rati(3)) - &suite.e6.pow_i64(2).unwrap().scaled_rat(&rati(2)));
    let rhs = &num * &suite.e4.pow_i64(-2).unwrap().scaled_rat(&rat(1, 6));
    c.series("theta(A)", &suite.a.theta(), &rhs, Some(&upto));
    c.report("aids", rati(terms))
}

fn parameter_pool() -> Vec<Rational> {
    vec![rat(3, 7), rat(-5, 11), rati(2), rat(1, 2), rat(-2, 3), rat(7, 4), rati(-1), rat(5, 9)]
}

fn exdeg(degree: usize) -> VerificationReport {
    let pool = parameter_pool();
    let name = format!("exdeg{}", degree);
    let mut c = Checker::new();
    let mut print_witness: Option<Witness> = None;
    for start in 0..5usize {
        let w: Vec<Rational> = (0..degree - 1).map(|i| pool[(start + i) % pool.len()].clone()).collect();
        let (m, printed) = match degree {
            2 => (Mlde::monic_dim2(0, w[0].clone()), displays::degree2(&w[0])),
            3 => (Mlde::monic_dim3(0, w[0].clone(), w[1].clone()), displays::degree3(&w[0], &w[1])),
            4 => (displays::monic_dim4(0, &w[0], &w[1], &w[2]), displays::degree4(&w[0], &w[1], &w[2])),
            5 => (
                displays::monic_dim5(0, &w[0], &w[1], &w[2], &w[3]),
                displays::degree5(&w[0], &w[1], &w[2], &w[3], false),
            ),
            _ => unreachable!(),
        };
        let ours = match monic_mlde_to_fuchsian(&m) {
            Ok(op) => op,
            Err(e) => {
                c.claim("reparameterization", false, "a Fuchsian operator", &e.to_string());
                break;
            }
        };
        if degree == 5 {
            // internal consistency gate: the corrected display must match
            let corrected = displays::degree5(&w[0], &w[1], &w[2], &w[3], true);
            c.claim(
                &format!("degree-5 corrected display at parameters {:?}", w.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                ours == corrected,
                "the 9b form of the theta_K coefficient",
                &format!("{}", ours.coeff(1)),
            );
            if ours != printed && print_witness.is_none() {
                print_witness = Some(Witness {
                    location: "degree-5 display, theta_K coefficient (printed 3b, derived 9b)".to_string(),
                    expected: format!("{}", printed.coeff(1)),
                    actual: format!("{}", ours.coeff(1)),
                });
            }
        } else {
            c.claim(
                &format!("degree-{} display at parameters {:?}", degree, w.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                ours == printed,
                "the printed closed form",
                &format!("{}", ours),
            );
        }
    }
    let mut report = c.report(&name, rati(5));
    if report.status == VerifyStatus::Verified {
        if let Some(w) = print_witness {
            report.status = VerifyStatus::DiscrepancyWithPaperPrint;
            report.witness = Some(w);
        }
    }
    report
}

fn f32_series(u: [(i64, i64); 3], l: [(i64, i64); 2], terms: i64) -> PuiseuxSeries {
    let params = HypParams::new(
        u.iter().map(|&(n, d)| rat(n, d)).collect(),
        l.iter().map(|&(n, d)| rat(n, d)).collect(),
    )
    .expect("valid 3F2 parameters");
    hyp_series(&params, terms)
}

fn k_monomial(scale: Rational, terms: i64) -> PuiseuxSeries {
    PuiseuxSeries::monomial(CycNumber::from_rational(scale), rati(1), rati(terms))
}

fn dim3(rs: [(i64, i64); 3], terms: i64) -> VvmfComponents {
    let e = ExponentSet::new(rs.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap();
    dim3_minimal(&e, terms).unwrap()
}

fn s4_weight4_triple(prec: i64) -> VerificationReport {
    let kt = prec.max(40);
    let q_terms = 30;
    let mut c = Checker::new();
    // formal identities in K, 40 terms by default
    let q = f32_series([(1, 12), (5, 12), (3, 4)], [(5, 4), (1, 2)], kt);
    let r = f32_series([(7, 12), (11, 12), (5, 4)], [(7, 4), (3, 2)], kt);
    let s = f32_series([(-1, 6), (1, 6), (1, 2)], [(3, 4), (1, 4)], kt);
    let p = f32_series([(1, 6), (1, 2), (5, 6)], [(5, 4), (3, 4)], kt);
    let t = f32_series([(-1, 12), (1, 4), (7, 12)], [(3, 4), (1, 2)], kt);
    let u = f32_series([(5, 12), (3, 4), (13, 12)], [(5, 4), (3, 2)], kt);
    let rhs1 = &(&q * &q) - &(&k_monomial(rat(1, 108), kt) * &(&r * &r));
    c.series("3F2(1/6,1/2,5/6;5/4,3/4)", &p, &rhs1, None);
    c.series("3F2(-1/12,1/4,7/12;3/4,1/2)", &t, &(&s * &q), None);
    c.series("3F2(5/12,3/4,13/12;5/4,3/2)", &u, &(&s * &r), None);
    // the same identities as q-expansions: f4 = f2^2 - 16 f3^2, f5 = f1 f2,
    // f6 = f1 f3, with the weight-4 components ordered by valuation
    let v1 = dim3([(0, 1), (1, 4), (3, 4)], q_terms);
    let v2 = dim3([(1, 2), (1, 4), (3, 4)], q_terms);
    let (f1, f2, f3) = (&v1.components[0], &v1.components[1], &v1.components[2]);
    let (f5, f4, f6) = (&v2.components[0], &v2.components[1], &v2.components[2]);
    c.series("f4 - (f2^2 - 16 f3^2)", f4, &(&(f2 * f2) - &(f3 * f3).scaled_rat(&rati(16))), None);
    c.series("f5 - f1 f2", f5, &(f1 * f2), None);
    c.series("f6 - f1 f3", f6, &(f1 * f3), None);
    c.report("s4-weight4-triple", rati(kt))
}

fn klein_quartic(prec: i64) -> VerificationReport {
    let kt = prec.max(40);
    let q_terms = 30;
    let mut c = Checker::new();
    let f1 = f32_series([(-1, 42), (13, 42), (9, 14)], [(6, 7), (4, 7)], kt);
    let f2 = f32_series([(5, 42), (19, 42), (11, 14)], [(8, 7), (5, 7)], kt);
    let f3 = f32_series([(17, 42), (31, 42), (15, 14)], [(10, 7), (9, 7)], kt);
    let lhs = &(&(&f2 * &f2) * &f2) * &f1;
    let rhs = &(&(&(&f1 * &f1) * &f1) * &f3)
        + &(&k_monomial(rat(1, 1728), kt) * &(&(&(&f3 * &f3) * &f3) * &f2));
    c.series("Klein quartic in K", &lhs, &rhs, None);
    // q-route: f2^3 f1 = f1^3 f3 + f3^3 f2 on the weight-2 components
    let v = dim3([(1, 7), (2, 7), (4, 7)], q_terms);
    let (g1, g2, g3) = (&v.components[0], &v.components[1], &v.components[2]);
    let lhs_q = &(&(g2 * g2) * g2) * g1;
    let rhs_q = &(&(&(g1 * g1) * g1) * g3) + &(&(&(g3 * g3) * g3) * g2);
    c.series("Klein quartic in q", &lhs_q, &rhs_q, None);
    c.report("klein-quartic", rati(kt))
}

fn n7_weight6_triple(prec: i64) -> VerificationReport {
    let kt = prec.max(40);
    let q_terms = 30;
    let mut c = Checker::new();
    let f1 = f32_series([(-1, 42), (13, 42), (9, 14)], [(6, 7), (4, 7)], kt);
    let f2 = f32_series([(5, 42), (19, 42), (11, 14)], [(8, 7), (5, 7)], kt);
    let f3 = f32_series([(17, 42), (31, 42), (15, 14)], [(10, 7), (9, 7)], kt);
    let f4 = f32_series([(-1, 14), (11, 42), (25, 42)], [(5, 7), (4, 7)], kt);
    let f5 = f32_series([(3, 14), (23, 42), (37, 42)], [(9, 7), (6, 7)], kt);
    let f6 = f32_series([(5, 14), (29, 42), (43, 42)], [(10, 7), (8, 7)], kt);
    // scalings induced by the eta/K prefactors: K/576 = 3K/1728, K/5184 = (1/3)(K/1728)
    let rhs4 = &(&(&f1 * &f1) * &f1) + &(&k_monomial(rat(1, 576), kt) * &(&f2 * &(&f3 * &f3)));
    c.series("3F2(-1/14,...)", &f4, &rhs4, None);
    let rhs5 = &(&f1 * &(&f2 * &f2)) - &(&k_monomial(rat(1, 5184), kt) * &(&(&f3 * &f3) * &f3));
    c.series("3F2(3/14,...)", &f5, &rhs5, None);
    let rhs6 = &(&(&f1 * &f1) * &f3).scaled_rat(&rat(3, 2)) - &(&(&f2 * &f2) * &f2).scaled_rat(&rat(1, 2));
    c.series("3F2(5/14,...)", &f6, &rhs6, None);
    // q-route on the weight-2 and weight-6 components
    let v1 = dim3([(1, 7), (2, 7), (4, 7)], q_terms);
    let v2 = dim3([(3, 7), (5, 7), (6, 7)], q_terms);
    let (g1, g2, g3) = (&v1.components[0], &v1.components[1], &v1.components[2]);
    let (h4, h5, h6) = (&v2.components[0], &v2.components[1], &v2.components[2]);
    let rhs_q4 = &(&(g1 * g1) * g1) + &(g2 * &(g3 * g3)).scaled_rat(&rati(3));
    c.series("f4 - (f1^3 + 3 f2 f3^2)", h4, &rhs_q4, None);
    let rhs_q5 = &(&(g2 * g2) * g1) - &(&(g3 * g3) * g3).scaled_rat(&rat(1, 3));
    c.series("f5 - (f2^2 f1 - f3^3/3)", h5, &rhs_q5, None);
    let rhs_q6 = &(&(g1 * g1) * g3).scaled_rat(&rat(3, 2)) - &(&(g2 * g2) * g2).scaled_rat(&rat(1, 2));
    c.series("f6 - (3/2 f1^2 f3 - 1/2 f2^3)", h6, &rhs_q6, None);
    c.report("n7-weight6-triple", rati(kt))
}

fn eis_match_n3(qn_terms: i64) -> VerificationReport {
    let mut c = Checker::new();
    let z = CycNumber::zeta(3);
    let zero = CuspLabel::fraction(3, 0, 1);
    let one = CuspLabel::fraction(3, 1, 1);
    let two = CuspLabel::fraction(3, 2, 1);
    let inf = CuspLabel::infinity(3);
    let g1 = eis2_difference(&zero, &inf, qn_terms + 1).unwrap();
    let g2 = eis2_difference(&one, &inf, qn_terms + 1).unwrap();
    let g3 = eis2_difference(&two, &inf, qn_terms + 1).unwrap();
    let f = dim3([(0, 1), (1, 3), (2, 3)], qn_terms / 3 + 3);
    let upto = rat(qn_terms, 3);
    c.series("f1 - (3g1 - g2 - g3)", &f.components[0], &(&(&g1.scaled_rat(&rati(3)) - &g2) - &g3), Some(&upto));
    let zp1 = &z + &CycNumber::one();
    let rhs2 = (&g2.scaled(&zp1) - &g3.scaled(&z)).scaled_rat(&rat(1, 3));
    c.series("f2 - (1/3)((z+1)g2 - z g3)", &f.components[1], &rhs2, Some(&upto));
    let rhs3 = (&g3.scaled(&zp1) - &g2.scaled(&z)).scaled_rat(&rat(1, 9));
    c.series("f3 - (1/9)(-z g2 + (z+1)g3)", &f.components[2], &rhs3, Some(&upto));
    c.report("eis-match-n3", rati(qn_terms))
}

fn eis_match_n4(qn_terms: i64) -> VerificationReport {
    let mut c = Checker::new();
    let upto = rat(qn_terms, 4);
    // the 2-dimensional S4 case
    let basis = fixture_basis("S4-2dim").unwrap();
    let g1 = eis2_combination(&basis[0], qn_terms + 1).unwrap();
    let g2 = eis2_combination(&basis[1], qn_terms + 1).unwrap();
    let e = ExponentSet::new(vec![rati(0), rat(1, 2)]).unwrap();
    let f = dim2_minimal(&e, qn_terms / 4 + 3).unwrap();
    c.series("f1 - (2g1 - 3g2)", &f.components[0], &(&g1.scaled_rat(&rati(2)) - &g2.scaled_rat(&rati(3))), Some(&upto));
    c.series("f2 + (1/8)g2", &f.components[1], &g2.scaled_rat(&rat(-1, 8)), Some(&upto));
    c.report("eis-match-n4", rati(qn_terms))
}

fn eis_match_n5(qn_terms: i64) -> VerificationReport {
    let mut c = Checker::new();
    let upto = rat(qn_terms, 5);
    let z = |k: i64| CycNumber::zeta_pow(5, k);
    let alpha = z(3) + z(2);
    // -(2 z^3 + 2 z^2 + 1)
    let lead = -(alpha.mul_rat(&rati(2)) + CycNumber::one());
    let basis1 = fixture_basis("A5-3dim-1").unwrap();
    let basis2 = fixture_basis("A5-3dim-2").unwrap();
    let g: Vec<PuiseuxSeries> = basis1.iter().chain(basis2.iter()).map(|b| eis2_combination(b, qn_terms + 1).unwrap()).collect();
    let f123 = dim3([(0, 1), (1, 5), (4, 5)], qn_terms / 5 + 3);
    let f456 = dim3([(0, 1), (2, 5), (3, 5)], qn_terms / 5 + 3);
    let rhs1 = &(&g[0].scaled(&lead) - &g[1]) + &g[2];
    c.series("f1", &f123.components[0], &rhs1, Some(&upto));
    let rhs2 = (&g[1] - &g[2].scaled(&z(3))).scaled_rat(&rat(1, 5));
    c.series("f2", &f123.components[1], &rhs2, Some(&upto));
    let rhs3 = (&g[1] - &g[2].scaled(&z(2))).scaled_rat(&rat(1, 15));
    c.series("f3", &f123.components[2], &rhs3, Some(&upto));
    let rhs4 = &(&g[3].scaled(&lead) + &g[4]) - &g[5];
    c.series("f4", &f456.components[0], &rhs4, Some(&upto));
    let rhs5 = (&g[4] - &g[5].scaled(&z(1))).scaled_rat(&rat(1, 5));
    c.series("f5", &f456.components[1], &rhs5, Some(&upto));
    let rhs6 = (&g[4] - &g[5].scaled(&z(4))).scaled_rat(&rat(1, 10));
    c.series("f6", &f456.components[2], &rhs6, Some(&upto));
    c.report("eis-match-n5", rati(qn_terms))
}

fn wronskian_eta(window: i64) -> VerificationReport {
    let mut c = Checker::new();
    let terms = window + 5;
    let e2 = ExponentSet::new(vec![rati(0), rat(1, 2)]).unwrap();
    let v2 = dim2_minimal(&e2, terms).unwrap();
    match wronskian_eta_constant(&v2, window) {
        Some(cst) => c.claim("dim-2 S4 Wronskian constant", !cst.is_zero(), "nonzero", "0"),
        None => c.claim("dim-2 S4 Wronskian", false, "c eta^{24 lambda}", "mismatch"),
    }
    for rs in [[(0i64, 1i64), (1, 3), (2, 3)], [(1, 7), (2, 7), (4, 7)]] {
        let v = dim3(rs, terms);
        let label = format!("dim-3 {:?} Wronskian", rs);
        match wronskian_eta_constant(&v, window) {
            Some(cst) => c.claim(&label, !cst.is_zero(), "nonzero", "0"),
            None => c.claim(&label, false, "c eta^{24 lambda}", "mismatch"),
        }
    }
    c.report("wronskian-eta", rati(window))
}

fn partial_zeta_n5() -> VerificationReport {
    let mut c = Checker::new();
    let pi = std::f64::consts::PI;
    let rhs = (2.0 * pi).powi(2) / (25.0 * 5.0f64.sqrt());
    // route 1: the cyclotomic closed form of the alpha_0 lattice sums
    let a1 = eis2_alpha(&EisLabel::new(5, 0, 1).unwrap(), 0);
    let a2 = eis2_alpha(&EisLabel::new(5, 0, 2).unwrap(), 0);
    let diff = (a1 - a2).embed_numeric(80);
    let route1 = (2.0 * pi / 5.0).powi(2) * diff.re;
    c.claim(
        "alpha_0 closed form",
        (route1 - rhs).abs() < 1e-6 && diff.im.abs() < 1e-12,
        &format!("{:.9}", rhs),
        &format!("{:.9}", route1),
    );
    // route 2: direct summation over all integers m with 10^6 terms per sign;
    // the residue classes pair up so the truncation tail is O(1/M^2)
    let mut sum = 0f64;
    for m in 1..=1_000_000i64 {
        let r = m % 5;
        let sign = match r {
            1 | 4 => 1.0,
            2 | 3 => -1.0,
            _ => 0.0,
        };
        if sign != 0.0 {
            sum += sign / ((m as f64) * (m as f64));
        }
    }
    c.claim(
        "direct summation",
        (sum - rhs).abs() < 1e-6,
        &format!("{:.9}", rhs),
        &format!("{:.9}", sum),
    );
    c.report("partial-zeta-n5", rati(1_000_000))
}

fn supersingular(p: u64, prec: Option<i64>) -> VerificationReport {
    let terms = prec.unwrap_or(16);
    let mut c = Checker::new();
    match supersingular_contract_check(p, terms) {
        Ok(()) => {}
        Err(e) => c.claim(&format!("supersingular contract p = {}", p), false, "matching root sets", &e),
    }
    c.report(&format!("supersingular-{}", p), rati(terms))
}
