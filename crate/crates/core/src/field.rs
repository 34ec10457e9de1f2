//! Arithmetic in `F_q = GF(2)[x] / Phi_{l^m}(x)`.
//!
//! Elements are stored in the polynomial basis: bit `j` of the encoding is
//! the coefficient of `x^j`. Because the modulus is the cyclotomic
//! polynomial itself, the class of `x` is a primitive `l^m`-th root of unity
//! and plays the role of `alpha` throughout.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, TrackedBasis};
use crate::numtheory::{cyclotomic_poly_gf2, prime_factors, Gf2Poly, Params};

/// An element of `F_q` in its polynomial-basis encoding.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Lower-case hex of the encoding, without prefix.
    pub fn hex(self) -> String {
        format!("{:x}", self.0)
    }
}

impl std::ops::Add for FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FieldElem {
    fn add_assign(&mut self, rhs: FieldElem) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.hex())
    }
}

/// Parse a hexadecimal element encoding, with or without a `0x` prefix.
pub fn parse_hex(s: &str) -> Option<u64> {
    let t = s.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    u64::from_str_radix(t, 16).ok()
}

/// Immutable field context.
pub struct FieldCtx {
    params: Params,
    modulus: Gf2Poly,
    gamma: FieldElem,
    alpha: FieldElem,
    /// `trace_masks[k]` has bit `j` set iff `Tr(x^(k+j)) = 1`.
    trace_masks: Vec<u32>,
    /// `alpha_images[k]` = alpha-basis coordinates of `x^k`.
    alpha_images: Vec<u32>,
    /// Inverse of `alpha_images`: polynomial encoding of `alpha^(j+1)`.
    alpha_basis: Vec<u32>,
    alpha_pows: Vec<FieldElem>,
    /// `power_table[u] = u^((q-1)/l^m)`.
    power_table: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("params", &self.params)
            .field("modulus", &self.modulus)
            .field("gamma", &self.gamma)
            .field("alpha", &self.alpha)
            .finish_non_exhaustive()
    }
}

impl FieldCtx {
    pub fn new(params: Params) -> Result<Self> {
        let modulus = cyclotomic_poly_gf2(params.l(), params.m())?;
        let s = params.s();
        let mut ctx = FieldCtx {
            params,
            modulus,
            gamma: FieldElem::ZERO,
            alpha: FieldElem(2),
            trace_masks: Vec::new(),
            alpha_images: Vec::new(),
            alpha_basis: Vec::new(),
            alpha_pows: Vec::new(),
            power_table: Vec::new(),
        };
        // Tr(x^i) for i < 2s, from the definition.
        let traces: Vec<u32> = (0..2 * s)
            .map(|i| {
                let xi = ctx.pow(FieldElem(2), i as u64);
                ctx.trace_by_definition(xi) as u32
            })
            .collect();
        ctx.trace_masks = (0..s as usize)
            .map(|k| (0..s as usize).fold(0u32, |m, j| m | (traces[k + j] << j)))
            .collect();

        let lm = params.lm();
        ctx.alpha_pows = (0..lm).map(|i| ctx.pow(ctx.alpha, i)).collect();
        if ctx.pow(ctx.alpha, lm) != FieldElem::ONE
            || ctx.pow(ctx.alpha, lm / params.l()) == FieldElem::ONE
        {
            return Err(Error::Reducible("alpha does not have order l^m".into()));
        }

        // Basis change to {alpha, alpha^2, ..., alpha^s}.
        ctx.alpha_basis = (1..=s as u64).map(|j| ctx.pow(ctx.alpha, j).0).collect();
        let mut tb = TrackedBasis::new(s);
        for (j, &v) in ctx.alpha_basis.iter().enumerate() {
            if !tb.insert(v as u64, 1u64 << j) {
                return Err(Error::Reducible("alpha powers are dependent".into()));
            }
        }
        ctx.alpha_images = (0..s)
            .map(|k| tb.express(1u64 << k).expect("full rank") as u32)
            .collect();

        ctx.gamma = ctx.find_gamma()?;

        // u^e via the discrete log with respect to gamma: (gamma^k)^e = alpha^(k mod l^m).
        let q = params.q() as usize;
        let mut table = vec![0u32; q];
        let mut t = FieldElem::ONE;
        for k in 0..q - 1 {
            table[t.0 as usize] = ctx.alpha_pows[k % lm as usize].0;
            t = ctx.mul(t, ctx.gamma);
        }
        debug_assert_eq!(t, FieldElem::ONE);
        ctx.power_table = table;
        Ok(ctx)
    }

    /// Smallest primitive element (by encoding) whose `(q-1)/l^m`-th power is alpha.
    fn find_gamma(&self) -> Result<FieldElem> {
        let q = self.params.q();
        let e = self.params.power_exponent();
        let factors = prime_factors(q - 1);
        (1..q)
            .map(|g| FieldElem(g as u32))
            .find(|&g| {
                self.pow(g, e) == self.alpha
                    && factors.iter().all(|p| self.pow(g, (q - 1) / p) != FieldElem::ONE)
            })
            .ok_or_else(|| Error::Unavailable("no primitive element maps onto alpha".into()))
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn modulus(&self) -> Gf2Poly {
        self.modulus
    }

    pub fn gamma(&self) -> FieldElem {
        self.gamma
    }

    pub fn alpha(&self) -> FieldElem {
        self.alpha
    }

    pub fn degree(&self) -> u32 {
        self.params.s()
    }

    pub fn order(&self) -> u64 {
        self.params.q()
    }

    /// Range-checked element from its encoding.
    pub fn elem(&self, v: u64) -> Result<FieldElem> {
        if v >= self.params.q() {
            return Err(Error::ElementOutOfRange {
                value: v,
                bits: self.params.s(),
            });
        }
        Ok(FieldElem(v as u32))
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.params.q() as u32).map(FieldElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.params.q() as u32).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        a + b
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let s = self.params.s();
        let mut acc = 0u64;
        let mut x = a.0 as u64;
        let mut y = b.0;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        let m = self.modulus.bits();
        for bit in (s..2 * s).rev() {
            if (acc >> bit) & 1 == 1 {
                acc ^= m << (bit - s);
            }
        }
        FieldElem(acc as u32)
    }

    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.params.q() - 2))
    }

    /// `u^((q-1)/l^m)` from the precomputed table.
    pub fn pow_e(&self, u: FieldElem) -> FieldElem {
        FieldElem(self.power_table[u.0 as usize])
    }

    /// `u^(-(q-1)/l^m)` for nonzero `u`.
    pub fn pow_neg_e(&self, u: FieldElem) -> Result<FieldElem> {
        self.inv(self.pow_e(u))
    }

    /// `alpha^i`, index taken mod `l^m`.
    pub fn alpha_pow(&self, i: u64) -> FieldElem {
        self.alpha_pows[(i % self.params.lm()) as usize]
    }

    /// `Tr(u) = sum_{j<s} u^(2^j)` evaluated literally.
    pub fn trace_by_definition(&self, u: FieldElem) -> bool {
        let mut acc = FieldElem::ZERO;
        let mut t = u;
        for _ in 0..self.params.s() {
            acc += t;
            t = self.square(t);
        }
        debug_assert!(acc.0 <= 1, "trace left the prime field");
        acc == FieldElem::ONE
    }

    pub fn trace(&self, u: FieldElem) -> bool {
        linalg::dot(self.trace_masks[0] as u64, u.0 as u64)
    }

    /// Mask `t` with `Tr(u * x) = parity(t & x)` for all `x`.
    pub fn trace_mask(&self, u: FieldElem) -> u32 {
        let mut m = 0u32;
        let mut bits = u.0;
        while bits != 0 {
            let k = bits.trailing_zeros();
            m ^= self.trace_masks[k as usize];
            bits &= bits - 1;
        }
        m
    }

    /// `(-1)^Tr(u)`.
    pub fn chi(&self, u: FieldElem) -> i64 {
        if self.trace(u) {
            -1
        } else {
            1
        }
    }

    /// Coordinates `(a_1, ..., a_s)` of `u` in the basis `{alpha, ..., alpha^s}`;
    /// bit `j-1` of the result holds `a_j`.
    pub fn alpha_coords(&self, u: FieldElem) -> u32 {
        let mut c = 0u32;
        let mut bits = u.0;
        while bits != 0 {
            let k = bits.trailing_zeros();
            c ^= self.alpha_images[k as usize];
            bits &= bits - 1;
        }
        c
    }

    /// Inverse of [`alpha_coords`](Self::alpha_coords).
    pub fn from_alpha_coords(&self, coords: u32) -> FieldElem {
        let mut u = 0u32;
        let mut bits = coords;
        while bits != 0 {
            let j = bits.trailing_zeros();
            u ^= self.alpha_basis[j as usize];
            bits &= bits - 1;
        }
        FieldElem(u)
    }

    /// The length-`(l-1)` slice `u^(i) = (a_{l^(m-1) - i}, a_{2 l^(m-1) - i}, ..., a_{(l-1) l^(m-1) - i})`;
    /// bit `k-1` of the result holds `a_{k l^(m-1) - i}`.
    pub fn subvector(&self, u: FieldElem, i: u64) -> Result<u32> {
        let step = self.params.lm1();
        if i >= step {
            return Err(Error::SubvectorIndex { index: i, bound: step });
        }
        let coords = self.alpha_coords(u);
        let mut out = 0u32;
        for k in 1..self.params.l() {
            let j = k * step - i; // 1-based index into a_1..a_s
            out |= ((coords >> (j - 1)) & 1) << (k - 1);
        }
        Ok(out)
    }

    /// Hamming weight of `u^(i)`.
    pub fn subvector_weight(&self, u: FieldElem, i: u64) -> Result<u32> {
        Ok(self.subvector(u, i)?.count_ones())
    }

    /// GF(2)-basis of the subfield `F_sqrt(q)`, in RREF.
    pub fn half_subfield_basis(&self) -> Vec<FieldElem> {
        let s = self.params.s();
        let sq = self.params.sqrt_q();
        // kernel of u -> u^sqrt(q) + u
        let images: Vec<u64> = (0..s)
            .map(|k| {
                let xk = FieldElem(1 << k);
                (self.pow(xk, sq) + xk).0 as u64
            })
            .collect();
        let rows = linalg::transpose(&images, s);
        linalg::nullspace(&rows, s)
            .into_iter()
            .map(|v| FieldElem(v as u32))
            .collect()
    }

    /// GF(2)-basis of `T_b = {y : Tr(b y) = 0}`.
    pub fn trace_kernel_basis(&self, b: FieldElem) -> Vec<FieldElem> {
        let m = self.trace_mask(b) as u64;
        let rows: Vec<u64> = if m == 0 { vec![] } else { vec![m] };
        linalg::nullspace(&rows, self.params.s())
            .into_iter()
            .map(|v| FieldElem(v as u32))
            .collect()
    }
}
