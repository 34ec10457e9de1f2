//! Parameter validation and the small amount of number theory the rest of
//! the crate depends on: Euler's phi, multiplicative order of 2, the
//! cyclotomic modulus over GF(2) and Gaussian binomials.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported extension degree. Keeps a pair of field elements
/// packed into one machine word.
pub const MAX_DEGREE: u32 = 24;

/// Validated code parameters `(l, m)`.
///
/// Construction fails unless `l` is an odd prime, `m >= 1`, 2 is a primitive
/// root modulo `l^m` and `s = phi(l^m) <= MAX_DEGREE`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    l: u64,
    m: u32,
    lm: u64,
    s: u32,
}

impl Params {
    pub fn new(l: u64, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroExponent);
        }
        if !is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if l == 2 {
            return Err(Error::EvenPrime(l));
        }
        let lm = checked_pow(l, m).ok_or(Error::Overflow("l^m"))?;
        let phi = euler_phi(l, m)?;
        if phi > MAX_DEGREE as u64 {
            return Err(Error::DegreeTooLarge {
                s: phi.min(u32::MAX as u64) as u32,
                max: MAX_DEGREE,
            });
        }
        if !is_two_primitive_root(l, m)? {
            return Err(Error::NotPrimitiveRoot(lm));
        }
        let s = phi as u32;
        debug_assert!(s % 2 == 0);
        let p = Params { l, m, lm, s };
        // 2^(s/2) = -1 mod l^m because 2 has order s.
        debug_assert_eq!((p.sqrt_q() + 1) % lm, 0);
        Ok(p)
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `l^m`.
    pub fn lm(&self) -> u64 {
        self.lm
    }

    /// `l^(m-1)`, the number of subvectors.
    pub fn lm1(&self) -> u64 {
        self.lm / self.l
    }

    /// Extension degree `s = phi(l^m)`.
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u64 {
        1u64 << self.s
    }

    pub fn sqrt_q(&self) -> u64 {
        1u64 << (self.s / 2)
    }

    /// `(q - 1) / l^m`, the exponent of the power map onto the `l^m`-th roots of unity.
    pub fn power_exponent(&self) -> u64 {
        (self.q() - 1) / self.lm
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(l={}, m={})", self.l, self.m)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    (0..exp).try_fold(1u64, |acc, _| acc.checked_mul(base))
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `phi(l^m) = l^(m-1) (l-1)` for prime `l`.
pub fn euler_phi(l: u64, m: u32) -> Result<u64> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l));
    }
    if m == 0 {
        return Err(Error::ZeroExponent);
    }
    let lm1 = checked_pow(l, m - 1).ok_or(Error::Overflow("l^(m-1)"))?;
    lm1.checked_mul(l - 1).ok_or(Error::Overflow("phi(l^m)"))
}

/// Multiplicative order of `a` modulo `n` (requires gcd(a, n) = 1).
pub fn multiplicative_order(a: u64, n: u64) -> Option<u64> {
    if n <= 1 || num_integer::gcd(a, n) != 1 {
        return None;
    }
    let a = a % n;
    let mut x = a;
    let mut k = 1u64;
    while x != 1 {
        x = ((x as u128 * a as u128) % n as u128) as u64;
        k += 1;
    }
    Some(k)
}

/// Whether 2 generates the unit group modulo `l^m`.
pub fn is_two_primitive_root(l: u64, m: u32) -> Result<bool> {
    let phi = euler_phi(l, m)?;
    if l == 2 {
        return Ok(false);
    }
    let lm = checked_pow(l, m).ok_or(Error::Overflow("l^m"))?;
    Ok(multiplicative_order(2, lm) == Some(phi))
}

/// Polynomial over GF(2), bit `j` holding the coefficient of `x^j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly(pub u64);

impl Gf2Poly {
    pub const ZERO: Gf2Poly = Gf2Poly(0);
    pub const ONE: Gf2Poly = Gf2Poly(1);
    pub const X: Gf2Poly = Gf2Poly(2);

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn degree(self) -> Option<u32> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros())
    }

    pub fn coeff(self, j: u32) -> bool {
        j < 64 && (self.0 >> j) & 1 == 1
    }

    /// Carry-less product. Panics if the result degree exceeds 63.
    pub fn mul(self, rhs: Gf2Poly) -> Gf2Poly {
        if let (Some(da), Some(db)) = (self.degree(), rhs.degree()) {
            assert!(da + db < 64, "GF(2) product degree {} overflows", da + db);
        }
        let mut acc = 0u64;
        let mut b = rhs.0;
        let mut shift = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= self.0 << shift;
            }
            b >>= 1;
            shift += 1;
        }
        Gf2Poly(acc)
    }

    pub fn rem(self, modulus: Gf2Poly) -> Gf2Poly {
        let dm = modulus.degree().expect("division by the zero polynomial");
        let mut r = self.0;
        while r != 0 {
            let dr = 63 - r.leading_zeros();
            if dr < dm {
                break;
            }
            r ^= modulus.0 << (dr - dm);
        }
        Gf2Poly(r)
    }

    pub fn mulmod(self, rhs: Gf2Poly, modulus: Gf2Poly) -> Gf2Poly {
        self.rem(modulus).mul(rhs.rem(modulus)).rem(modulus)
    }

    pub fn gcd(self, other: Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let r = a.rem(b);
            a = b;
            b = r;
        }
        a
    }

    /// `x^(2^k) mod modulus` by repeated squaring.
    pub fn x_pow_two_pow(k: u32, modulus: Gf2Poly) -> Gf2Poly {
        let mut t = Gf2Poly::X.rem(modulus);
        for _ in 0..k {
            t = t.mulmod(t, modulus);
        }
        t
    }
}

impl std::ops::Add for Gf2Poly {
    type Output = Gf2Poly;
    fn add(self, rhs: Gf2Poly) -> Gf2Poly {
        Gf2Poly(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for j in (0..=d).rev() {
            if !self.coeff(j) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{j}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

/// `Phi_{l^m}(x) = Phi_l(x^(l^(m-1)))` reduced mod 2.
///
/// The result is checked to have no roots in any proper subfield of
/// GF(2^s), i.e. `gcd(Phi, x^(2^d) - x) = 1` for every proper divisor `d`
/// of `s`, together with `x^(2^s) = x mod Phi`.
pub fn cyclotomic_poly_gf2(l: u64, m: u32) -> Result<Gf2Poly> {
    let params = Params::new(l, m)?;
    let step = params.lm1();
    let mut bits = 0u64;
    for k in 0..l {
        bits |= 1u64 << (k * step);
    }
    let phi = Gf2Poly(bits);
    debug_assert_eq!(phi.degree(), Some(params.s()));
    check_irreducible(phi)?;
    Ok(phi)
}

/// Irreducibility self-test for a modulus of degree `s`.
pub fn check_irreducible(f: Gf2Poly) -> Result<()> {
    let s = f
        .degree()
        .ok_or_else(|| Error::Reducible("zero polynomial".into()))?;
    if s == 0 {
        return Err(Error::Reducible("constant polynomial".into()));
    }
    if Gf2Poly::x_pow_two_pow(s, f) != Gf2Poly::X.rem(f) {
        return Err(Error::Reducible(format!("x^(2^{s}) != x mod {f}")));
    }
    for d in (1..s).filter(|d| s % d == 0) {
        let g = (Gf2Poly::x_pow_two_pow(d, f) + Gf2Poly::X).gcd(f);
        if g.degree() != Some(0) {
            return Err(Error::Reducible(format!(
                "{f} shares factor {g} with x^(2^{d}) - x"
            )));
        }
    }
    Ok(())
}

/// Number of `k`-dimensional subspaces of GF(2)^n, by the product formula
/// `prod_{i<k} (2^(n-i) - 1) / (2^(i+1) - 1)`.
///
/// Every partial product is itself a Gaussian binomial, so the division at
/// each step is exact.
pub fn gaussian_binomial(n: u32, k: u32) -> Result<u128> {
    if k > n {
        return Err(Error::Dimension(format!("k = {k} > n = {n}")));
    }
    if n > 127 {
        return Err(Error::Overflow("gaussian binomial"));
    }
    let mut g: u128 = 1;
    for i in 0..k {
        let num = (1u128 << (n - i)) - 1;
        let den = (1u128 << (i + 1)) - 1;
        g = g
            .checked_mul(num)
            .ok_or(Error::Overflow("gaussian binomial"))?
            / den;
    }
    Ok(g)
}

/// Saturating variant for cost estimates.
pub fn gaussian_binomial_saturating(n: u32, k: u32) -> u128 {
    gaussian_binomial(n, k).unwrap_or(u128::MAX)
}
