//! Small prime fields, F_{p^2}, dense polynomials mod p, and the
//! brute-force supersingular locus.
//!
//! The curve-enumeration routines here are deliberately independent of the
//! Kaneko-Zagier route in [`crate::vvmf`]: they count points on explicit
//! Weierstrass curves and serve as the oracle the supersingular polynomial
//! is checked against.

use std::collections::BTreeSet;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn fp_add(p: u64, a: u64, b: u64) -> u64 {
    (a + b) % p
}

pub fn fp_sub(p: u64, a: u64, b: u64) -> u64 {
    (a + p - b % p) % p
}

pub fn fp_mul(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn fp_pow(p: u64, mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(p, acc, base);
        }
        base = fp_mul(p, base, base);
        e >>= 1;
    }
    acc
}

pub fn fp_inv(p: u64, a: u64) -> u64 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod {}", p);
    fp_pow(p, a, p - 2)
}

/// Dense polynomial over F_p, low-to-high coefficients, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> FpPoly {
        let mut f = FpPoly { p, coeffs: coeffs.into_iter().map(|c| c % p).collect() };
        f.trim();
        f
    }

    pub fn zero(p: u64) -> FpPoly {
        FpPoly { p, coeffs: Vec::new() }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(0)) {
            self.coeffs.pop();
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = fp_inv(self.p, *self.coeffs.last().unwrap());
        FpPoly::new(self.p, self.coeffs.iter().map(|&c| fp_mul(self.p, c, inv)).collect())
    }

    pub fn derivative(&self) -> FpPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| fp_mul(self.p, c, (i as u64) % self.p))
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn rem(&self, rhs: &FpPoly) -> FpPoly {
        assert!(!rhs.is_zero());
        let p = self.p;
        let mut rem = self.coeffs.clone();
        let db = rhs.coeffs.len() - 1;
        let lead_inv = fp_inv(p, *rhs.coeffs.last().unwrap());
        while rem.len() > db {
            let dr = rem.len() - 1;
            let factor = fp_mul(p, *rem.last().unwrap(), lead_inv);
            for k in 0..=db {
                let sub = fp_mul(p, factor, rhs.coeffs[k]);
                rem[dr - db + k] = fp_sub(p, rem[dr - db + k], sub);
            }
            while matches!(rem.last(), Some(0)) {
                rem.pop();
            }
            if rem.len() <= db {
                break;
            }
        }
        FpPoly::new(p, rem)
    }

    pub fn gcd(&self, rhs: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact division; panics on nonzero remainder.
    pub fn divexact(&self, rhs: &FpPoly) -> FpPoly {
        assert!(!rhs.is_zero());
        let p = self.p;
        let mut rem = self.coeffs.clone();
        let db = rhs.coeffs.len() - 1;
        let lead_inv = fp_inv(p, *rhs.coeffs.last().unwrap());
        let mut quot = vec![0u64; rem.len().saturating_sub(db)];
        while rem.len() > db {
            let dr = rem.len() - 1;
            let factor = fp_mul(p, *rem.last().unwrap(), lead_inv);
            quot[dr - db] = factor;
            for k in 0..=db {
                let sub = fp_mul(p, factor, rhs.coeffs[k]);
                rem[dr - db + k] = fp_sub(p, rem[dr - db + k], sub);
            }
            while matches!(rem.last(), Some(0)) {
                rem.pop();
            }
        }
        assert!(rem.is_empty(), "inexact polynomial division mod {}", p);
        FpPoly::new(p, quot)
    }

    /// The monic squarefree part self / gcd(self, self').
    pub fn squarefree_part(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.monic();
        }
        self.divexact(&g).monic()
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = fp_add(self.p, fp_mul(self.p, acc, x), c);
        }
        acc
    }

    pub fn eval_fp2(&self, f: &Fp2, x: Fp2El) -> Fp2El {
        let mut acc = Fp2El { a: 0, b: 0 };
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), f.embed(c));
        }
        acc
    }

    /// All roots in F_{p^2}, by direct evaluation.
    pub fn roots_fp2(&self, f: &Fp2) -> BTreeSet<Fp2El> {
        let mut out = BTreeSet::new();
        for x in f.all_elements() {
            if self.eval_fp2(f, x).is_zero() {
                out.insert(x);
            }
        }
        out
    }
}

/// An element a + b w of F_{p^2} with w^2 a fixed non-residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fp2El {
    pub a: u64,
    pub b: u64,
}

impl Fp2El {
    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

/// The field F_{p^2} = F_p(w), w^2 = d for the smallest non-residue d.
#[derive(Clone, Debug)]
pub struct Fp2 {
    pub p: u64,
    d: u64,
}

impl Fp2 {
    pub fn new(p: u64) -> Fp2 {
        assert!(is_prime(p) && p > 2);
        let d = (2..p)
            .find(|&d| fp_pow(p, d, (p - 1) / 2) != 1)
            .expect("a quadratic non-residue exists for p > 2");
        Fp2 { p, d }
    }

    pub fn embed(&self, a: u64) -> Fp2El {
        Fp2El { a: a % self.p, b: 0 }
    }

    pub fn add(&self, x: Fp2El, y: Fp2El) -> Fp2El {
        Fp2El { a: fp_add(self.p, x.a, y.a), b: fp_add(self.p, x.b, y.b) }
    }

    pub fn sub(&self, x: Fp2El, y: Fp2El) -> Fp2El {
        Fp2El { a: fp_sub(self.p, x.a, y.a), b: fp_sub(self.p, x.b, y.b) }
    }

    pub fn mul(&self, x: Fp2El, y: Fp2El) -> Fp2El {
        let p = self.p;
        // (a1 + b1 w)(a2 + b2 w) = a1 a2 + d b1 b2 + (a1 b2 + a2 b1) w
        let a = fp_add(p, fp_mul(p, x.a, y.a), fp_mul(p, self.d, fp_mul(p, x.b, y.b)));
        let b = fp_add(p, fp_mul(p, x.a, y.b), fp_mul(p, x.b, y.a));
        Fp2El { a, b }
    }

    pub fn inv(&self, x: Fp2El) -> Fp2El {
        assert!(!x.is_zero());
        let p = self.p;
        // norm = a^2 - d b^2
        let norm = fp_sub(p, fp_mul(p, x.a, x.a), fp_mul(p, self.d, fp_mul(p, x.b, x.b)));
        let ninv = fp_inv(p, norm);
        Fp2El { a: fp_mul(p, x.a, ninv), b: fp_mul(p, fp_sub(p, 0, x.b), ninv) }
    }

    pub fn all_elements(&self) -> impl Iterator<Item = Fp2El> + '_ {
        (0..self.p).flat_map(move |a| (0..self.p).map(move |b| Fp2El { a, b }))
    }

    /// Quadratic character table: chi(x) for all x, with chi(0) = 0.
    fn square_table(&self) -> Vec<i8> {
        let p = self.p;
        let idx = |x: Fp2El| (x.a * p + x.b) as usize;
        let mut table = vec![-1i8; (p * p) as usize];
        table[0] = 0;
        for x in self.all_elements() {
            if x.is_zero() {
                continue;
            }
            let sq = self.mul(x, x);
            table[idx(sq)] = 1;
        }
        table
    }
}

/// All supersingular j-invariants in F_{p^2}: for each candidate j, count
/// points of a Weierstrass curve with that invariant over F_{p^2}; the curve
/// is supersingular exactly when the trace vanishes mod p.
pub fn supersingular_j_invariants(p: u64) -> BTreeSet<Fp2El> {
    assert!(is_prime(p) && p > 3);
    let f = Fp2::new(p);
    let chi = f.square_table();
    let idx = |x: Fp2El| (x.a * p + x.b) as usize;
    let c1728 = f.embed(1728 % p);
    let mut out = BTreeSet::new();
    let q = (p * p) as i128;
    for j in f.all_elements() {
        let (a, b) = if j.is_zero() {
            (f.embed(0), f.embed(1))
        } else if j == c1728 {
            (f.embed(1), f.embed(0))
        } else {
            // A = 3 j / (1728 - j), B = 2 j / (1728 - j)
            let c = f.mul(j, f.inv(f.sub(c1728, j)));
            (f.mul(f.embed(3), c), f.mul(f.embed(2), c))
        };
        let mut sum: i128 = 0;
        for x in f.all_elements() {
            let x3 = f.mul(f.mul(x, x), x);
            let val = f.add(f.add(x3, f.mul(a, x)), b);
            sum += chi[idx(val)] as i128;
        }
        let count = q + 1 + sum;
        let trace = q + 1 - count;
        if trace.rem_euclid(p as i128) == 0 {
            out.insert(j);
        }
    }
    out
}

/// F_p-rational supersingular j-invariants by enumerating curves
/// y^2 = x^3 + Ax + B over F_p and marking those with p + 1 points.
pub fn supersingular_j_fp_by_curves(p: u64) -> BTreeSet<u64> {
    assert!(is_prime(p) && p > 3);
    // chi over F_p
    let mut chi = vec![-1i8; p as usize];
    chi[0] = 0;
    for x in 1..p {
        chi[fp_mul(p, x, x) as usize] = 1;
    }
    let mut out = BTreeSet::new();
    for a in 0..p {
        for b in 0..p {
            // discriminant -16(4A^3 + 27B^2) must be nonzero
            let d4a3 = fp_mul(p, 4, fp_pow(p, a, 3));
            let d27b2 = fp_mul(p, 27, fp_mul(p, b, b));
            let disc = fp_add(p, d4a3, d27b2);
            if disc == 0 {
                continue;
            }
            let mut sum: i64 = 0;
            for x in 0..p {
                let val = fp_add(p, fp_add(p, fp_pow(p, x, 3), fp_mul(p, a, x)), b);
                sum += chi[val as usize] as i64;
            }
            let count = p as i64 + 1 + sum;
            if count == p as i64 + 1 {
                let j = fp_mul(p, 1728 % p, fp_mul(p, d4a3, fp_inv(p, disc)));
                out.insert(j);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(31) && is_prime(23));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(91));
    }

    #[test]
    fn fp2_field_basics() {
        let f = Fp2::new(13);
        for x in f.all_elements() {
            if !x.is_zero() {
                let prod = f.mul(x, f.inv(x));
                assert_eq!(prod, f.embed(1));
            }
        }
    }

    #[test]
    fn poly_squarefree_part() {
        // (x-1)^2 (x-3) mod 7 = x^3 - 5x^2 + 7x - 3
        let p = 7;
        let f = FpPoly::new(p, vec![p - 3, 7 % p, p - 5, 1]);
        let sf = f.squarefree_part();
        assert_eq!(sf.degree(), Some(2));
        assert_eq!(sf.eval(1), 0);
        assert_eq!(sf.eval(3), 0);
        assert_eq!(sf.eval(2), fp_mul(p, fp_sub(p, 2, 1), fp_sub(p, 2, 3)));
    }

    #[test]
    fn supersingular_small_primes() {
        // p = 11: the supersingular locus is {0, 1728 mod 11} = {0, 1}
        let ss11 = supersingular_j_invariants(11);
        let f = Fp2::new(11);
        let expected: BTreeSet<Fp2El> = [f.embed(0), f.embed(1)].into_iter().collect();
        assert_eq!(ss11, expected);
        // p = 13: the single supersingular j-invariant is 5
        let ss13 = supersingular_j_invariants(13);
        let f = Fp2::new(13);
        assert_eq!(ss13, [f.embed(5)].into_iter().collect());
    }

    #[test]
    fn oracles_agree_on_rational_points() {
        for p in [11u64, 13, 17, 19, 23] {
            let by_curves = supersingular_j_fp_by_curves(p);
            let by_j: BTreeSet<u64> = supersingular_j_invariants(p)
                .into_iter()
                .filter(|x| x.b == 0)
                .map(|x| x.a)
                .collect();
            assert_eq!(by_curves, by_j, "p = {}", p);
        }
    }
}
