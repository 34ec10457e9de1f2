//! The character sums `S(a) = sum_{i < l^m} chi(a alpha^i)` and
//! `S(a, b) = sum_{x != 0} chi(a x^((q-1)/l^m) + b x)`, each by direct
//! summation and by its closed form in terms of subvector weights.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SumMethod {
    Brute,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumReport {
    pub a: FieldElem,
    pub b: FieldElem,
    pub value: i64,
    pub method: SumMethod,
}

/// `S(a)`.
pub fn s_value(ctx: &FieldCtx, a: FieldElem, method: SumMethod) -> i64 {
    let p = ctx.params();
    match method {
        SumMethod::Brute => (0..p.lm())
            .map(|i| ctx.chi(ctx.mul(a, ctx.alpha_pow(i))))
            .sum(),
        SumMethod::Closed => {
            let l = p.l() as i64;
            (0..p.lm1())
                .map(|i| {
                    let w = ctx.subvector_weight(a, i).expect("index in range") as i64;
                    let sign = if w % 2 == 0 { 1 } else { -1 };
                    sign * (l - 2 * w)
                })
                .sum()
        }
    }
}

/// Sign `(-1)^wt((a u^(-(q-1)/l^m))^(0))` for nonzero `u`; `+1` marks `E_a`.
pub fn parity_sign(ctx: &FieldCtx, a: FieldElem, u: FieldElem) -> Result<i64> {
    let c = ctx.mul(a, ctx.pow_neg_e(u)?);
    let w = ctx.subvector_weight(c, 0)?;
    Ok(if w % 2 == 0 { 1 } else { -1 })
}

/// `S(a, b)` for `a != 0`.
pub fn s_ab(ctx: &FieldCtx, a: FieldElem, b: FieldElem, method: SumMethod) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::ZeroA);
    }
    let p = ctx.params();
    Ok(match method {
        SumMethod::Brute => ctx
            .nonzero()
            .map(|x| ctx.chi(ctx.mul(a, ctx.pow_e(x)) + ctx.mul(b, x)))
            .sum(),
        SumMethod::Closed => {
            let sa = s_value(ctx, a, SumMethod::Closed);
            if b.is_zero() {
                p.power_exponent() as i64 * sa
            } else {
                let sq = p.sqrt_q() as i64;
                let k = (p.sqrt_q() + 1) / p.lm();
                parity_sign(ctx, a, b)? * sq - k as i64 * sa
            }
        }
    })
}

pub fn s_report(ctx: &FieldCtx, a: FieldElem, b: Option<FieldElem>, method: SumMethod) -> Result<SumReport> {
    let value = match b {
        None => s_value(ctx, a, method),
        Some(b) => s_ab(ctx, a, b, method)?,
    };
    Ok(SumReport {
        a,
        b: b.unwrap_or(FieldElem::ZERO),
        value,
        method,
    })
}

/// The values `l^m - 4j`, `j = 1 ..= l^(m-1)(l-1)/2`, in decreasing order.
pub fn claimed_value_set(ctx: &FieldCtx) -> Vec<i64> {
    let p = ctx.params();
    let lm = p.lm() as i64;
    (1..=(p.s() as i64 / 2)).map(|j| lm - 4 * j).collect()
}

/// Attained values of `S(a)` over `a != 0`, compared against the claimed set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueSetReport {
    /// value -> number of `a` attaining it
    pub counts: BTreeMap<i64, u64>,
    pub claimed: Vec<i64>,
    /// claimed but never attained
    pub unattained: Vec<i64>,
    /// attained but outside the claimed set
    pub unexpected: Vec<i64>,
}

impl ValueSetReport {
    pub fn matches_claim(&self) -> bool {
        self.unattained.is_empty() && self.unexpected.is_empty()
    }
}

pub fn s_value_set(ctx: &FieldCtx) -> ValueSetReport {
    let mut counts = BTreeMap::new();
    for a in ctx.nonzero() {
        *counts.entry(s_value(ctx, a, SumMethod::Brute)).or_insert(0u64) += 1;
    }
    let claimed = claimed_value_set(ctx);
    let unattained = claimed
        .iter()
        .copied()
        .filter(|v| !counts.contains_key(v))
        .collect();
    let unexpected = counts
        .keys()
        .copied()
        .filter(|v| !claimed.contains(v))
        .collect();
    ValueSetReport {
        counts,
        claimed,
        unattained,
        unexpected,
    }
}

/// Partition of `F_q^*` into `E_a` (even parity) and `O_a` (odd parity).
pub fn ea_oa(ctx: &FieldCtx, a: FieldElem) -> Result<(Vec<FieldElem>, Vec<FieldElem>)> {
    if a.is_zero() {
        return Err(Error::ZeroA);
    }
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for u in ctx.nonzero() {
        if parity_sign(ctx, a, u)? > 0 {
            even.push(u);
        } else {
            odd.push(u);
        }
    }
    Ok((even, odd))
}

/// Closed-form `(|E_a|, |O_a|) = (q-1)/2 * (1 +- S(a)/l^m)`.
pub fn ea_oa_closed(ctx: &FieldCtx, a: FieldElem) -> (Rational, Rational) {
    let p = ctx.params();
    let half = Rational::new(p.q() as i128 - 1, 2);
    let ratio = Rational::new(s_value(ctx, a, SumMethod::Closed) as i128, p.lm() as i128);
    let one = Rational::from_integer(1);
    (half * (one + ratio), half * (one - ratio))
}

/// Smallest nonzero element of `E_a`.
pub fn first_even(ctx: &FieldCtx, a: FieldElem) -> Result<Option<FieldElem>> {
    for u in ctx.nonzero() {
        if parity_sign(ctx, a, u)? > 0 {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::Params;

    fn ctx(l: u64, m: u32) -> FieldCtx {
        FieldCtx::new(Params::new(l, m).unwrap()).unwrap()
    }

    #[test]
    fn s_value_examples() {
        let f9 = ctx(3, 2);
        for method in [SumMethod::Brute, SumMethod::Closed] {
            assert_eq!(s_value(&f9, FieldElem::ZERO, method), 9);
            assert_eq!(s_value(&f9, FieldElem::ONE, method), 5);
        }
        let f5 = ctx(5, 1);
        for method in [SumMethod::Brute, SumMethod::Closed] {
            assert_eq!(s_value(&f5, FieldElem::ONE, method), -3);
        }
    }

    #[test]
    fn s_ab_examples() {
        let f5 = ctx(5, 1);
        let one = FieldElem::ONE;
        for method in [SumMethod::Brute, SumMethod::Closed] {
            assert_eq!(s_ab(&f5, one, FieldElem::ZERO, method).unwrap(), -9);
            assert_eq!(s_ab(&f5, one, one, method).unwrap(), 7);
        }
        let f9 = ctx(3, 2);
        for method in [SumMethod::Brute, SumMethod::Closed] {
            assert_eq!(s_ab(&f9, one, one, method).unwrap(), 3);
        }
        assert_eq!(s_ab(&f9, FieldElem::ZERO, one, SumMethod::Brute), Err(Error::ZeroA));
    }

    #[test]
    fn value_set_examples() {
        let r5 = s_value_set(&ctx(5, 1));
        assert_eq!(r5.counts.keys().copied().collect::<Vec<_>>(), vec![-3, 1]);
        assert!(r5.matches_claim());
        let r3 = s_value_set(&ctx(3, 1));
        assert_eq!(r3.counts.keys().copied().collect::<Vec<_>>(), vec![-1]);
        assert_eq!(r3.counts[&-1], 3);
        let r9 = s_value_set(&ctx(3, 2));
        assert_eq!(r9.claimed, vec![5, 1, -3]);
        assert!(r9.unexpected.is_empty());
    }

    #[test]
    fn ea_oa_examples() {
        let f5 = ctx(5, 1);
        let (e, o) = ea_oa(&f5, FieldElem::ONE).unwrap();
        assert_eq!(e.len() + o.len(), 15);
        assert_eq!(e.len(), 3);
        // the cube roots of unity
        for u in &e {
            assert_eq!(f5.pow(*u, 3), FieldElem::ONE);
        }
        let f9 = ctx(3, 2);
        let (e, _) = ea_oa(&f9, FieldElem::ONE).unwrap();
        assert_eq!(e.len(), 49);
        assert_eq!(ea_oa_closed(&f9, FieldElem::ONE).0, Rational::from_integer(49));
        assert!(ea_oa(&f9, FieldElem::ZERO).is_err());
    }

    #[test]
    fn s_value_congruence_and_bounds() {
        for (l, m) in [(3, 1), (5, 1), (3, 2)] {
            let f = ctx(l, m);
            let lm = f.params().lm() as i64;
            for a in f.nonzero() {
                let v = s_value(&f, a, SumMethod::Brute);
                assert!(v.abs() <= lm);
                assert_eq!((v - lm).rem_euclid(4), 0);
            }
        }
    }
}
