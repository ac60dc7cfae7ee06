//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! Every tolerance and window is pinned here; the verification registry is
//! reused where it implements a criterion directly, and independent oracles
//! (brute-force curve enumeration, direct summation, printed coefficient
//! tables) arbitrate everywhere else.

use qmf::cli::registry::{verify, VerifyStatus};
use qmf::exactnum::{rat, rati, CycNumber, Rational};
use qmf::mlde::{displays, fuchsian_to_mlde, modular_derivative, monic_mlde_to_fuchsian, FormPoly, Mlde};
use qmf::qseries::{eisenstein_level1, eta_power, hauptmodul_suite, PuiseuxSeries, SeriesContext};
use qmf::vvmf::{dim2_minimal, dim3_minimal, supersingular_contract_check, wronskian_eta_constant, ExponentSet};
use num_traits::Zero;
use std::time::Instant;

fn pass(criterion: u32, what: &str, t: Instant) {
    println!("criterion {:2} PASS: {} [{:?}]", criterion, what, t.elapsed());
}

fn exps(v: &[(i64, i64)]) -> ExponentSet {
    ExponentSet::new(v.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
}

/// Deterministic pseudo-random small rationals (xorshift over a fixed seed).
struct RatGen(u64);

impl RatGen {
    fn next_rat(&mut self) -> Rational {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        let num = (x % 19) as i64 - 9;
        let den = (x >> 32) % 7 + 1;
        let num = if num == 0 { 1 } else { num };
        rat(num, den as i64)
    }
}

#[test]
fn criterion_01_ramanujan_identities() {
    let t = Instant::now();
    let report = verify("ramanujan", Some(30)).unwrap();
    assert_eq!(report.status, VerifyStatus::Verified, "{}", report);
    assert!(t.elapsed().as_secs_f64() < 1.0, "criterion 1 exceeded 1s: {:?}", t.elapsed());
    pass(1, "D(E2) = -E4/12 (quasimodular form), D_4 E4 = -E6/3, D_6 E6 = -E4^2/2 to 30 coefficients", t);
}

#[test]
fn criterion_02_reparameterization_closed_forms() {
    let t = Instant::now();
    let mut gen = RatGen(0x9e3779b97f4a7c15);
    for _ in 0..5 {
        let (a, b, c, d) = (gen.next_rat(), gen.next_rat(), gen.next_rat(), gen.next_rat());
        assert_eq!(
            monic_mlde_to_fuchsian(&Mlde::monic_dim2(0, a.clone())).unwrap(),
            displays::degree2(&a)
        );
        assert_eq!(
            monic_mlde_to_fuchsian(&Mlde::monic_dim3(0, a.clone(), b.clone())).unwrap(),
            displays::degree3(&a, &b)
        );
        assert_eq!(
            monic_mlde_to_fuchsian(&displays::monic_dim4(0, &a, &b, &c)).unwrap(),
            displays::degree4(&a, &b, &c)
        );
        // degree 5: exact match to the corrected display; the printed 3b
        // differs (see the exdeg5 registry item and the dual-route
        // arbitration in the mlde unit tests)
        let ours = monic_mlde_to_fuchsian(&displays::monic_dim5(0, &a, &b, &c, &d)).unwrap();
        assert_eq!(ours, displays::degree5(&a, &b, &c, &d, true));
        assert_ne!(ours, displays::degree5(&a, &b, &c, &d, false));
    }
    let exdeg5 = verify("exdeg5", None).unwrap();
    assert_eq!(exdeg5.status, VerifyStatus::DiscrepancyWithPaperPrint);
    assert!(exdeg5.witness.unwrap().location.contains("3b"));
    for name in ["exdeg2", "exdeg3", "exdeg4"] {
        assert_eq!(verify(name, None).unwrap().status, VerifyStatus::Verified);
    }
    assert!(t.elapsed().as_secs_f64() < 5.0, "criterion 2 exceeded 5s: {:?}", t.elapsed());
    pass(2, "degree 2..5 closed forms exact at 5 random instantiations (degree-5 print misses 9b)", t);
}

#[test]
fn criterion_03_fuchsian_roundtrip() {
    let t = Instant::now();
    let mut gen = RatGen(0x2545f4914f6cdd1d);
    let check = |m: &Mlde| {
        let n = m.degree();
        // h-table (1-K)^s denominator bounds are asserted inside
        let back = fuchsian_to_mlde(&monic_mlde_to_fuchsian(m).unwrap()).unwrap();
        let scale = (&FormPoly::e4() * &FormPoly::e6()).pow(n as u32);
        for j in 0..=n {
            assert_eq!(back.coeff(j), &(&scale * m.coeff(j)), "degree {} coefficient of D^{}", n, j);
        }
    };
    for _ in 0..5 {
        let (a, b, c, d) = (gen.next_rat(), gen.next_rat(), gen.next_rat(), gen.next_rat());
        check(&Mlde::monic_dim2(0, a.clone()));
        check(&Mlde::monic_dim3(0, a.clone(), b.clone()));
        check(&displays::monic_dim4(0, &a, &b, &c));
        check(&displays::monic_dim5(0, &a, &b, &c, &d));
    }
    pass(3, "fuchsian_to_mlde o monic_mlde_to_fuchsian = (E4 E6)^n id for n = 2..5", t);
}

#[test]
fn criterion_04_golden_expansions() {
    let t = Instant::now();
    let terms = 30;

    // Example 4.2: the S4 two-dimensional case
    let v42 = dim2_minimal(&exps(&[(0, 1), (1, 2)]), terms).unwrap();
    for (n, want) in [1i64, 24, 24, 96, 24].iter().enumerate() {
        assert_eq!(v42.components[0].coeff_rational(&rati(n as i64)), rati(*want), "4.2 f1 q^{}", n);
    }
    for (n, want) in [1i64, 4, 6, 8, 13].iter().enumerate() {
        assert_eq!(
            v42.components[1].coeff_rational(&(rat(1, 2) + rati(n as i64))),
            rati(*want),
            "4.2 f2 q^(1/2)+{}",
            n
        );
    }
    let basis = qmf::eisenstein::fixture_basis("S4-2dim").unwrap();
    let g1 = qmf::eisenstein::eis2_combination(&basis[0], 15).unwrap();
    let g2 = qmf::eisenstein::eis2_combination(&basis[1], 27).unwrap();
    let printed_g1 = [
        (0i64, rat(1, 2)),
        (2, rati(-12)),
        (4, rati(12)),
        (6, rati(-48)),
        (8, rati(12)),
        (10, rati(-72)),
        (12, rati(48)),
        (14, rati(-96)),
    ];
    for n in 0..=14i64 {
        let want = printed_g1
            .iter()
            .find(|(m, _)| *m == n)
            .map(|(_, w)| w.clone())
            .unwrap_or_else(Rational::zero);
        assert_eq!(g1.coeff_rational(&rat(n, 4)), want, "4.2 g1 q_4^{}", n);
    }
    let printed_g2 = [
        (2i64, -8i64),
        (6, -32),
        (10, -48),
        (14, -64),
        (18, -104),
        (22, -96),
        (26, -112),
    ];
    for n in 0..=26i64 {
        let want = printed_g2.iter().find(|(m, _)| *m == n).map(|(_, w)| rati(*w)).unwrap_or_else(Rational::zero);
        assert_eq!(g2.coeff_rational(&rat(n, 4)), want, "4.2 g2 q_4^{}", n);
    }

    // Example 4.5: N = 3
    let v45 = dim3_minimal(&exps(&[(0, 1), (1, 3), (2, 3)]), terms).unwrap();
    for (n, want) in [1i64, 12, 36, 12, 84, 72, 36].iter().enumerate() {
        assert_eq!(v45.components[0].coeff_rational(&rati(n as i64)), rati(*want), "4.5 f1 q^{}", n);
    }
    for (n, want) in [1i64, 7, 8, 18, 14, 31, 20].iter().enumerate() {
        assert_eq!(
            v45.components[1].coeff_rational(&(rat(1, 3) + rati(n as i64))),
            rati(*want),
            "4.5 f2"
        );
    }
    // f3: printed positions only; the display omits the nonzero q^6 and q^7
    // terms, and the dual-route oracle (checked in criterion 5) pins the
    // true values 14 and 8 there while confirming the printed q^8 = 14
    for (n, want) in [(0i64, 1i64), (1, 2), (2, 5), (3, 4), (4, 8), (5, 6), (8, 14)] {
        assert_eq!(
            v45.components[2].coeff_rational(&(rat(2, 3) + rati(n))),
            rati(want),
            "4.5 f3 printed q^{}",
            n
        );
    }
    assert_eq!(v45.components[2].coeff_rational(&(rat(2, 3) + rati(6))), rati(14));
    assert_eq!(v45.components[2].coeff_rational(&(rat(2, 3) + rati(7))), rati(8));
    let z = CycNumber::zeta(3);
    let omz = CycNumber::one() - &z;
    let tpz = CycNumber::from_rational(rati(2)) + &z;
    let zero3 = qmf::eisenstein::CuspLabel::fraction(3, 0, 1);
    let one3 = qmf::eisenstein::CuspLabel::fraction(3, 1, 1);
    let two3 = qmf::eisenstein::CuspLabel::fraction(3, 2, 1);
    let inf3 = qmf::eisenstein::CuspLabel::infinity(3);
    let g1 = qmf::eisenstein::eis2_difference(&zero3, &inf3, 9).unwrap();
    for (n, want) in [rat(1, 3), rati(1), rati(3), rati(4), rati(7), rati(6), rati(12), rati(8), rati(15)]
        .iter()
        .enumerate()
    {
        assert_eq!(g1.coeff_rational(&rat(n as i64, 3)), want.clone(), "4.5 g1 q_3^{}", n);
    }
    let g2 = qmf::eisenstein::eis2_difference(&one3, &inf3, 6).unwrap();
    let g3 = qmf::eisenstein::eis2_difference(&two3, &inf3, 6).unwrap();
    let q3 = |n: i64| rat(n, 3);
    assert_eq!(g2.coeff(&q3(1)), omz);
    assert_eq!(g2.coeff(&q3(2)), tpz.mul_rat(&rati(3)));
    assert!(g2.coeff(&q3(3)).is_zero());
    assert_eq!(g2.coeff(&q3(4)), omz.mul_rat(&rati(7)));
    assert_eq!(g2.coeff(&q3(5)), tpz.mul_rat(&rati(6)));
    assert_eq!(g3.coeff(&q3(1)), tpz);
    assert_eq!(g3.coeff(&q3(2)), omz.mul_rat(&rati(3)));
    assert_eq!(g3.coeff(&q3(4)), tpz.mul_rat(&rati(7)));
    assert_eq!(g3.coeff(&q3(5)), omz.mul_rat(&rati(6)));

    // Example 4.8: N = 7, through q^7
    let v48 = dim3_minimal(&exps(&[(1, 7), (2, 7), (4, 7)]), terms).unwrap();
    let golden = [
        (0usize, rat(1, 7), vec![1i64, -3, 0, 4, 2, 3, -12, -5]),
        (1, rat(2, 7), vec![1, -3, -1, 8, 0, -6, -4, 0]),
        (2, rat(4, 7), vec![1, -4, 3, 5, -5, 0, -8, 10]),
    ];
    for (idx, val, coeffs) in golden {
        for (n, want) in coeffs.iter().enumerate() {
            assert_eq!(
                v48.components[idx].coeff_rational(&(&val + rati(n as i64))),
                rati(*want),
                "4.8 f{} q^{}",
                idx + 1,
                n
            );
        }
    }
    assert!(t.elapsed().as_secs_f64() < 30.0, "criterion 4 exceeded 30s: {:?}", t.elapsed());
    pass(4, "printed expansions of Examples 4.2, 4.5 and 4.8 match exactly", t);
}

#[test]
fn criterion_05_dual_route_equivalence() {
    let t = Instant::now();
    let table: &[&[(i64, i64)]] = &[
        &[(0, 1), (1, 3), (2, 3)],
        &[(0, 1), (1, 4), (3, 4)],
        &[(1, 2), (1, 4), (3, 4)],
        &[(0, 1), (1, 5), (4, 5)],
        &[(0, 1), (2, 5), (3, 5)],
        &[(1, 7), (2, 7), (4, 7)],
        &[(3, 7), (5, 7), (6, 7)],
    ];
    let window = 15i64;
    for rs in table {
        let v = dim3_minimal(&exps(rs), window + 3).unwrap();
        for (r, c) in v.exponents.iter().zip(v.components.iter()) {
            let frob = v.mlde.frobenius_solve(r, &(r + rati(window + 1))).unwrap();
            let upto = r + rati(window);
            assert!(*c.precision() >= upto && *frob.precision() >= upto, "window too small");
            assert!(
                c.agrees_with(&frob, Some(&upto)),
                "dual route mismatch for exponents {:?} at r = {}",
                rs,
                r
            );
        }
    }
    let v2 = dim2_minimal(&exps(&[(0, 1), (1, 2)]), window + 3).unwrap();
    for (r, c) in v2.exponents.iter().zip(v2.components.iter()) {
        let frob = v2.mlde.frobenius_solve(r, &(r + rati(window + 1))).unwrap();
        assert!(c.agrees_with(&frob, Some(&(r + rati(window)))));
    }
    pass(5, "hypergeometric-in-K equals Frobenius-in-q on >= 15 coefficients for all 8 cases", t);
}

#[test]
fn criterion_06_hypergeometric_identity_suite() {
    let t = Instant::now();
    for name in ["s4-weight4-triple", "klein-quartic", "n7-weight6-triple"] {
        let report = verify(name, Some(40)).unwrap();
        assert_eq!(report.status, VerifyStatus::Verified, "{}", report);
    }
    pass(6, "3F2 identity suites (Examples 4.6, 4.8) exact to 40 K-terms and as q-series", t);
}

#[test]
fn criterion_07_eisenstein_linkage() {
    let t = Instant::now();
    for name in ["eis-match-n3", "eis-match-n4", "eis-match-n5"] {
        let report = verify(name, Some(15)).unwrap();
        assert_eq!(report.status, VerifyStatus::Verified, "{}", report);
    }
    pass(7, "Eisenstein f <-> g linear relations (Examples 4.2, 4.5, 4.7) to 15 q_N coefficients", t);
}

#[test]
fn criterion_08_wronskian_law() {
    let t = Instant::now();
    let window = 12i64;
    let v2 = dim2_minimal(&exps(&[(0, 1), (1, 2)]), window + 5).unwrap();
    let c2 = wronskian_eta_constant(&v2, window).expect("dim-2 S4 Wronskian law");
    assert!(!c2.is_zero());
    for rs in [[(0i64, 1i64), (1, 3), (2, 3)], [(1, 7), (2, 7), (4, 7)]] {
        let v = dim3_minimal(&exps(&rs), window + 5).unwrap();
        let c = wronskian_eta_constant(&v, window).expect("dim-3 Wronskian law");
        assert!(!c.is_zero(), "vanishing Wronskian constant for {:?}", rs);
    }
    pass(8, "W(F) = c eta^{24 lambda} with c != 0 recovered, 12 coefficients", t);
}

#[test]
fn criterion_09_supersingular_polynomials() {
    let t = Instant::now();
    for p in [11u64, 13, 23, 29, 31] {
        supersingular_contract_check(p, 16).unwrap();
    }
    // spot values: mod 13 the lone non-special invariant is 5; mod 11 the
    // supersingular set is exactly the special pair {0, 1728 = 1}
    let p13 = qmf::vvmf::supersingular_polynomial(13, 16).unwrap();
    assert_eq!(p13.degree(), Some(1));
    assert_eq!(p13.eval(5), 0);
    let p11 = qmf::vvmf::supersingular_polynomial(11, 16).unwrap();
    assert_eq!(p11.degree(), Some(0));
    assert!(t.elapsed().as_secs_f64() < 60.0, "criterion 9 exceeded 60s: {:?}", t.elapsed());
    pass(9, "supersingular root sets match curve enumeration for p in {11, 13, 23, 29, 31}", t);
}

#[test]
fn criterion_10_partial_zeta() {
    let t = Instant::now();
    let report = verify("partial-zeta-n5", None).unwrap();
    assert_eq!(report.status, VerifyStatus::Verified, "{}", report);
    assert!(t.elapsed().as_secs_f64() < 5.0, "criterion 10 exceeded 5s: {:?}", t.elapsed());
    pass(10, "partial zeta identity of Example 4.7 to 1e-6 via closed form and direct summation", t);
}

#[test]
fn criterion_11_property_suites() {
    use proptest::prelude::*;
    use proptest::test_runner::{Config, TestRunner};
    let t = Instant::now();
    let config = || Config { cases: 200, failure_persistence: None, ..Config::default() };

    fn arb_series() -> impl Strategy<Value = PuiseuxSeries> {
        (
            prop::sample::select(vec![1u64, 2, 3]),
            prop::collection::vec(((-6i64..=10), (-9i64..=9, 1i64..=4)), 0..6),
        )
            .prop_map(|(ram, entries)| {
                let prec = rati(4);
                let terms = entries
                    .into_iter()
                    .map(|(n, (cn, cd))| (rat(n, ram as i64), CycNumber::from_rational(rat(cn, cd))))
                    .filter(|(e, _)| *e < prec)
                    .collect();
                PuiseuxSeries::from_terms(terms, prec)
            })
    }

    // series ring axioms
    let mut runner = TestRunner::new(config());
    runner
        .run(&(arb_series(), arb_series(), arb_series()), |(f, g, h)| {
            prop_assert!((&(&f + &g) + &h).agrees_with(&(&f + &(&g + &h)), None));
            prop_assert!((&(&f * &g) * &h).agrees_with(&(&f * &(&g * &h)), None));
            prop_assert!((&f * &(&g + &h)).agrees_with(&(&(&f * &g) + &(&f * &h)), None));
            Ok(())
        })
        .unwrap();
    // Leibniz rule for theta
    let mut runner = TestRunner::new(config());
    runner
        .run(&(arb_series(), arb_series()), |(f, g)| {
            let lhs = (&f * &g).theta();
            let rhs = &(&f.theta() * &g) + &(&f * &g.theta());
            prop_assert!(lhs.agrees_with(&rhs, None));
            Ok(())
        })
        .unwrap();
    // commutation rules [D, E4] = -E6/3 and [D, E6] = -E4^2/2 on random series
    let ctx = SeriesContext::new(8);
    let e4 = eisenstein_level1(4, &ctx).unwrap();
    let e6 = eisenstein_level1(6, &ctx).unwrap();
    let mut runner = TestRunner::new(config());
    runner
        .run(&(arb_series(), -6i64..=6), |(f, k)| {
            let lhs4 = &modular_derivative(&(&e4 * &f), k + 4) - &(&e4 * &modular_derivative(&f, k));
            prop_assert!(lhs4.agrees_with(&(&e6 * &f).scaled_rat(&rat(-1, 3)), None));
            let lhs6 = &modular_derivative(&(&e6 * &f), k + 6) - &(&e6 * &modular_derivative(&f, k));
            prop_assert!(lhs6.agrees_with(&(&e4.pow_i64(2).unwrap() * &f).scaled_rat(&rat(-1, 2)), None));
            Ok(())
        })
        .unwrap();
    // Lemma degree/denominator bounds for j <= 12
    for j in 1..=12u32 {
        assert!(qmf::mlde::d_to_theta(j).validate_bounds(), "bounds fail at j = {}", j);
    }
    // eta^24 = Delta and 1728 Delta = E4^3 - E6^2 to 20 coefficients
    let ctx = SeriesContext::new(21);
    let suite = hauptmodul_suite(&ctx);
    assert!(eta_power(24, &ctx).agrees_with(&suite.delta, Some(&rati(20))));
    let lhs = suite.delta.scaled_rat(&rati(1728));
    let rhs = &suite.e4.pow_i64(3).unwrap() - &suite.e6.pow_i64(2).unwrap();
    assert!(lhs.agrees_with(&rhs, Some(&rati(20))));
    pass(
        11,
        "ring axioms, Leibniz and commutation (200 random cases each), d-to-theta bounds j <= 12, eta^24 = Delta, 1728 Delta = E4^3 - E6^2",
        t,
    );
}
