//! The codes `C_D` for `D = D_(a,b) = {(x, y) != 0 : Tr(a x^((q-1)/l^m) + b y) = 0}`.
//!
//! A point `(x, y)` of `F_q^2` is packed into one word as `x | y << s`, and
//! the codeword of `(u, v)` is `(Tr(u x + v y))` over the points of `D` in
//! increasing packed order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::expsum::{s_ab, s_value, SumMethod};
use crate::field::{FieldCtx, FieldElem};
use crate::linalg;
use crate::numtheory::Params;
use crate::subspace::Pairing;
use crate::walsh::fwht;
use crate::{rational_to_int, Rational};

/// Largest ambient dimension `2s` for which codes are materialized.
pub const MAX_CODE_AMBIENT: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    params: Params,
    a: FieldElem,
    b: FieldElem,
}

impl CodeSpec {
    pub fn new(params: Params, a: FieldElem, b: FieldElem) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroA);
        }
        for v in [a, b] {
            if v.0 as u64 >= params.q() {
                return Err(Error::ElementOutOfRange {
                    value: v.0 as u64,
                    bits: params.s(),
                });
            }
        }
        Ok(CodeSpec { params, a, b })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn a(&self) -> FieldElem {
        self.a
    }

    pub fn b(&self) -> FieldElem {
        self.b
    }

    pub fn formal_dimension(&self) -> u32 {
        2 * self.params.s()
    }
}

impl Serialize for CodeSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CodeSpec", 4)?;
        st.serialize_field("l", &self.params.l())?;
        st.serialize_field("m", &self.params.m())?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.end()
    }
}

impl std::fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "(l={}, m={}, a={}, b={})",
            self.params.l(),
            self.params.m(),
            self.a,
            self.b
        )
    }
}

/// A set of nonzero points of `GF(2)^ambient_dim` with constant-time membership.
#[derive(Debug, Clone)]
pub struct DefiningSet {
    ambient_dim: u32,
    points: Vec<u64>,
    membership: Vec<u64>,
}

impl DefiningSet {
    pub fn new(ambient_dim: u32, mut points: Vec<u64>) -> Result<Self> {
        if ambient_dim > MAX_CODE_AMBIENT {
            return Err(Error::CodeTooLarge {
                got: ambient_dim,
                max: MAX_CODE_AMBIENT,
            });
        }
        points.sort_unstable();
        points.dedup();
        let size = 1u64 << ambient_dim;
        if points.first() == Some(&0) || points.last().is_some_and(|&p| p >= size) {
            return Err(Error::Dimension("points must be nonzero vectors of the ambient space".into()));
        }
        let mut membership = vec![0u64; (size as usize).div_ceil(64)];
        for &p in &points {
            membership[(p >> 6) as usize] |= 1u64 << (p & 63);
        }
        Ok(DefiningSet {
            ambient_dim,
            points,
            membership,
        })
    }

    pub fn ambient_dim(&self) -> u32 {
        self.ambient_dim
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn contains(&self, p: u64) -> bool {
        (self.membership[(p >> 6) as usize] >> (p & 63)) & 1 == 1
    }
}

/// A codeword as a bit vector over the points of `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordView {
    pub bits: Vec<u64>,
    pub len: usize,
    pub weight: u64,
}

impl CodewordView {
    pub fn bit(&self, i: usize) -> bool {
        (self.bits[i / 64] >> (i % 64)) & 1 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistMethod {
    Brute,
    Closed,
    Transform,
}

impl std::str::FromStr for DistMethod {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "brute" => Ok(DistMethod::Brute),
            "closed" => Ok(DistMethod::Closed),
            "transform" => Ok(DistMethod::Transform),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

/// Weight distribution over the `q^2` formal codewords `c_(u,v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub method: DistMethod,
    /// weight -> multiplicity; weight 0 counts the kernel
    pub counts: BTreeMap<u64, u64>,
    pub formal_dimension: u32,
    pub empirical_dimension: u32,
    pub kernel_size: u64,
    pub degenerate: bool,
}

#[derive(Serialize)]
struct WeightEntry {
    weight: u64,
    multiplicity: u64,
}

impl WeightDistribution {
    fn from_counts(method: DistMethod, formal_dimension: u32, counts: BTreeMap<u64, u64>) -> Self {
        let kernel_size = counts.get(&0).copied().unwrap_or(0);
        let kernel_dim = 63 - kernel_size.max(1).leading_zeros();
        WeightDistribution {
            method,
            formal_dimension,
            empirical_dimension: formal_dimension - kernel_dim,
            kernel_size,
            degenerate: kernel_size > 1,
            counts,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Nonzero weights with multiplicities, increasing.
    pub fn nonzero(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().filter(|(w, _)| **w > 0).map(|(w, m)| (*w, *m))
    }

    pub fn min_nonzero(&self) -> Option<u64> {
        self.nonzero().next().map(|(w, _)| w)
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.nonzero().last().map(|(w, _)| w)
    }

    /// `sum_w w A_w`.
    pub fn first_moment(&self) -> u128 {
        self.counts.iter().map(|(w, m)| *w as u128 * *m as u128).sum()
    }

    /// Enumerator as `1 + 49x^1536 + ...`.
    pub fn enumerator(&self) -> String {
        let mut out = String::new();
        for (i, (w, m)) in self.counts.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            match (*w, *m) {
                (0, m) => write!(out, "{m}").unwrap(),
                (w, 1) => write!(out, "x^{w}").unwrap(),
                (w, m) => write!(out, "{m}x^{w}").unwrap(),
            }
        }
        out
    }

    pub fn is_same_table(&self, other: &WeightDistribution) -> bool {
        self.counts == other.counts
    }
}

impl Serialize for WeightDistribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<WeightEntry> = self
            .counts
            .iter()
            .map(|(w, m)| WeightEntry {
                weight: *w,
                multiplicity: *m,
            })
            .collect();
        let mut st = s.serialize_struct("WeightDistribution", 6)?;
        st.serialize_field("method", &self.method)?;
        st.serialize_field("formal_dimension", &self.formal_dimension)?;
        st.serialize_field("empirical_dimension", &self.empirical_dimension)?;
        st.serialize_field("kernel_size", &self.kernel_size)?;
        st.serialize_field("degenerate", &self.degenerate)?;
        st.serialize_field("distribution", &entries)?;
        st.end()
    }
}

/// One row of a closed-form weight table before merging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightClass {
    pub weight: Rational,
    pub multiplicity: Rational,
}

/// Which multiplicity assignment to use for the two `sqrt(q)`-weights of the `b = 0` table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table1Variant {
    /// multiplicities solved from the moment identities
    Solved,
    /// the two `sqrt(q)`-weight multiplicities exchanged
    Printed,
}

/// Rank and kernel of the formal map `(u, v) -> c_(u,v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub dimension: u32,
    /// RREF basis of the kernel, as packed `(u, v)` words
    pub kernel: Vec<u64>,
}

/// Ratio of minimum to maximum nonzero weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinMaxRatio {
    pub min: u64,
    pub max: u64,
    pub ratio: Rational,
    pub exceeds_half: bool,
}

impl Serialize for MinMaxRatio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MinMaxRatio", 5)?;
        st.serialize_field("min", &self.min)?;
        st.serialize_field("max", &self.max)?;
        st.serialize_field("numerator", &(*self.ratio.numer() as i64))?;
        st.serialize_field("denominator", &(*self.ratio.denom() as i64))?;
        st.serialize_field("exceeds_half", &self.exceeds_half)?;
        st.end()
    }
}

/// A materialized code `C_{D_(a,b)}`.
pub struct Code<'c> {
    ctx: &'c FieldCtx,
    spec: CodeSpec,
    pairing: Pairing,
    set: DefiningSet,
}

impl<'c> Code<'c> {
    /// Builds `D_(a,b)` by scanning all of `F_q^2`.
    pub fn build(ctx: &'c FieldCtx, spec: CodeSpec) -> Result<Self> {
        let s = ctx.degree();
        if 2 * s > MAX_CODE_AMBIENT {
            return Err(Error::CodeTooLarge {
                got: 2 * s,
                max: MAX_CODE_AMBIENT,
            });
        }
        if spec.params() != ctx.params() {
            return Err(Error::Dimension("spec and field parameters differ".into()));
        }
        let q = ctx.order();
        // Tr(a x^e) per x and the linear functional y -> Tr(b y)
        let tx: Vec<bool> = ctx
            .elements()
            .map(|x| ctx.trace(ctx.mul(spec.a, ctx.pow_e(x))))
            .collect();
        let bmask = ctx.trace_mask(spec.b) as u64;
        let mut points = Vec::new();
        for y in 0..q {
            let ty = linalg::dot(bmask, y);
            for x in 0..q {
                let p = x | (y << s);
                if p != 0 && tx[x as usize] == ty {
                    points.push(p);
                }
            }
        }
        let set = DefiningSet::new(2 * s, points)?;
        Ok(Code {
            ctx,
            spec,
            pairing: Pairing::trace_form(ctx),
            set,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.ctx
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn defining_set(&self) -> &DefiningSet {
        &self.set
    }

    pub fn pairing(&self) -> &Pairing {
        &self.pairing
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn ambient_dim(&self) -> u32 {
        2 * self.ctx.degree()
    }

    pub fn pack(&self, x: FieldElem, y: FieldElem) -> u64 {
        x.0 as u64 | ((y.0 as u64) << self.ctx.degree())
    }

    pub fn unpack(&self, p: u64) -> (FieldElem, FieldElem) {
        let s = self.ctx.degree();
        let low = (1u64 << s) - 1;
        (FieldElem((p & low) as u32), FieldElem((p >> s) as u32))
    }

    /// `Tr(a x^((q-1)/l^m) + b y)` at a packed point.
    pub fn condition(&self, p: u64) -> bool {
        let (x, y) = self.unpack(p);
        let ctx = self.ctx;
        ctx.trace(ctx.mul(self.spec.a, ctx.pow_e(x)) + ctx.mul(self.spec.b, y))
    }

    /// `c_(u,v)`, evaluated with field multiplication and the trace.
    pub fn codeword(&self, u: FieldElem, v: FieldElem) -> CodewordView {
        let ctx = self.ctx;
        let n = self.len();
        let mut bits = vec![0u64; n.div_ceil(64)];
        let mut weight = 0;
        for (i, &p) in self.set.points().iter().enumerate() {
            let (x, y) = self.unpack(p);
            if ctx.trace(ctx.mul(u, x) + ctx.mul(v, y)) {
                bits[i / 64] |= 1u64 << (i % 64);
                weight += 1;
            }
        }
        CodewordView { bits, len: n, weight }
    }

    /// Codeword for a packed message word via the pairing masks.
    pub fn codeword_bits(&self, w: u64) -> Vec<u64> {
        let mask = self.pairing.mask(w);
        let n = self.len();
        let mut bits = vec![0u64; n.div_ceil(64)];
        for (i, &p) in self.set.points().iter().enumerate() {
            if linalg::dot(mask, p) {
                bits[i / 64] |= 1u64 << (i % 64);
            }
        }
        bits
    }

    /// The `2s` generator rows: unit vectors `(x^j, 0)` then `(0, x^j)`.
    pub fn generator_rows(&self) -> Vec<Vec<u64>> {
        (0..self.ambient_dim())
            .map(|i| self.codeword_bits(1u64 << i))
            .collect()
    }

    /// `|N(u,v)| = #{(x,y) in F_q^2 : Tr(a x^e + b y) = 0, Tr(u x + v y) = 0}`, counted directly.
    pub fn n_uv(&self, u: FieldElem, v: FieldElem) -> u64 {
        let ctx = self.ctx;
        let mut count = 0;
        for y in ctx.elements() {
            for x in ctx.elements() {
                let p = self.pack(x, y);
                if !self.condition(p) && !ctx.trace(ctx.mul(u, x) + ctx.mul(v, y)) {
                    count += 1;
                }
            }
        }
        count
    }

    /// `|D|` from the closed form.
    pub fn length_closed(&self) -> Result<i64> {
        length_closed(self.ctx, &self.spec)
    }

    pub fn weight_closed(&self, u: FieldElem, v: FieldElem) -> Result<i64> {
        weight_closed(self.ctx, &self.spec, u, v)
    }

    pub fn weight_distribution(&self, method: DistMethod) -> Result<WeightDistribution> {
        match method {
            DistMethod::Brute => Ok(self.brute_distribution()),
            DistMethod::Transform => Ok(self.transform_distribution()),
            DistMethod::Closed => closed_distribution(self.ctx, &self.spec, Table1Variant::Solved),
        }
    }

    fn brute_distribution(&self) -> WeightDistribution {
        let size = 1u64 << self.ambient_dim();
        let points = self.set.points();
        let weights: Vec<u64> = (0..size)
            .into_par_iter()
            .map(|w| {
                let mask = self.pairing.mask(w);
                points.iter().filter(|&&p| linalg::dot(mask, p)).count() as u64
            })
            .collect();
        let mut counts = BTreeMap::new();
        for w in weights {
            *counts.entry(w).or_insert(0) += 1;
        }
        WeightDistribution::from_counts(DistMethod::Brute, self.ambient_dim(), counts)
    }

    /// All weights at once from the Walsh transform of the indicator of `D`:
    /// `sum_{p in D} (-1)^<w,p> = n - 2 wt(c_w)`.
    fn transform_distribution(&self) -> WeightDistribution {
        let size = 1usize << self.ambient_dim();
        let mut g = vec![0i64; size];
        for &p in self.set.points() {
            g[p as usize] = 1;
        }
        fwht(&mut g);
        let n = self.len() as i64;
        let masks = self.pairing.all_masks();
        let mut counts = BTreeMap::new();
        for m in masks {
            let wt = (n - g[m as usize]) / 2;
            *counts.entry(wt as u64).or_insert(0) += 1;
        }
        WeightDistribution::from_counts(DistMethod::Transform, self.ambient_dim(), counts)
    }

    /// GF(2) rank of the generator rows and the kernel of the formal map.
    pub fn empirical_dimension(&self) -> DimensionReport {
        let rows = self.generator_rows();
        let (rank, kernel) = rank_and_kernel(&rows);
        DimensionReport {
            dimension: rank as u32,
            kernel,
        }
    }

    /// No coordinate vanishes on the whole code.
    pub fn dual_distance_at_least_2(&self) -> bool {
        let rows = self.generator_rows();
        let n = self.len();
        let mut acc = vec![0u64; n.div_ceil(64)];
        for r in &rows {
            for (a, w) in acc.iter_mut().zip(r) {
                *a |= w;
            }
        }
        let ones: usize = acc.iter().map(|w| w.count_ones() as usize).sum();
        ones == n
    }

    /// `2s` lines of `n` characters `0`/`1`, one generator row per line.
    pub fn generator_matrix_text(&self) -> String {
        let n = self.len();
        let mut out = String::with_capacity(self.ambient_dim() as usize * (n + 1));
        for row in self.generator_rows() {
            for i in 0..n {
                out.push(if (row[i / 64] >> (i % 64)) & 1 == 1 { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

/// Rank of bit-vector rows plus an RREF basis of the left kernel
/// (as combinations of the row indices).
pub fn rank_and_kernel(rows: &[Vec<u64>]) -> (usize, Vec<u64>) {
    let mut basis: Vec<(Vec<u64>, u64, usize)> = Vec::new();
    let mut kernel = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        let mut tag = 1u64 << i;
        for (b, btag, piv) in &basis {
            if (v[piv / 64] >> (piv % 64)) & 1 == 1 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x ^= y;
                }
                tag ^= btag;
            }
        }
        match first_set_bit(&v) {
            Some(piv) => basis.push((v, tag, piv)),
            None => kernel.push(tag),
        }
    }
    linalg::rref(&mut kernel);
    (basis.len(), kernel)
}

fn first_set_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn q_terms(p: &Params) -> (Rational, Rational, Rational) {
    (
        Rational::from_integer(p.q() as i128),
        Rational::from_integer(p.sqrt_q() as i128),
        Rational::from_integer(p.lm() as i128),
    )
}

/// `|D_(a,b)|`: `q(q + 1 + S(a,0))/2 - 1` if `b = 0`, else `q^2/2 - 1`.
pub fn length_closed(ctx: &FieldCtx, spec: &CodeSpec) -> Result<i64> {
    let (q, _, _) = q_terms(ctx.params());
    let one = Rational::from_integer(1);
    let half = Rational::new(1, 2);
    let n = if spec.b.is_zero() {
        let sa0 = Rational::from_integer(s_ab(ctx, spec.a, FieldElem::ZERO, SumMethod::Closed)? as i128);
        half * q * (q + one + sa0) - one
    } else {
        half * q * q - one
    };
    rational_to_int(n).ok_or_else(|| Error::Unavailable(format!("non-integral length {n}")))
}

/// Weight of `c_(u,v)` from the case analysis in terms of `S(a, .)`.
pub fn weight_closed(ctx: &FieldCtx, spec: &CodeSpec, u: FieldElem, v: FieldElem) -> Result<i64> {
    if u.is_zero() && v.is_zero() {
        return Ok(0);
    }
    let (q, _, _) = q_terms(ctx.params());
    let one = Rational::from_integer(1);
    let quarter_q = q / Rational::from_integer(4);
    let sab = |x: FieldElem| -> Result<Rational> {
        Ok(Rational::from_integer(s_ab(ctx, spec.a, x, SumMethod::Closed)? as i128))
    };
    let w = if spec.b.is_zero() {
        if !v.is_zero() {
            quarter_q * (q + one + sab(FieldElem::ZERO)?)
        } else {
            quarter_q * (q + sab(FieldElem::ZERO)? - sab(u)?)
        }
    } else if v == spec.b {
        quarter_q * (q - one - sab(u)?)
    } else {
        quarter_q * q
    };
    rational_to_int(w).ok_or_else(|| Error::Unavailable(format!("non-integral weight {w}")))
}

/// The closed-form weight classes (unmerged, zero weight excluded).
pub fn closed_weight_classes(ctx: &FieldCtx, spec: &CodeSpec, variant: Table1Variant) -> Vec<WeightClass> {
    let p = ctx.params();
    let (q, sq, lm) = q_terms(p);
    let one = Rational::from_integer(1);
    let quarter_q = q / Rational::from_integer(4);
    let half_q1 = (q - one) / Rational::from_integer(2);
    let sa = Rational::from_integer(s_value(ctx, spec.a, SumMethod::Closed) as i128);
    let r = sa / lm;
    let class = |weight, multiplicity| WeightClass { weight, multiplicity };
    if spec.b.is_zero() {
        let (m_plus, m_minus) = match variant {
            Table1Variant::Solved => (half_q1 * (one - r), half_q1 * (one + r)),
            Table1Variant::Printed => (half_q1 * (one + r), half_q1 * (one - r)),
        };
        vec![
            class(quarter_q * (q + one + (q - one) * r), q * (q - one)),
            class(quarter_q * (q + sq + (q + sq) * r), m_plus),
            class(quarter_q * (q - sq + (q + sq) * r), m_minus),
        ]
    } else {
        vec![
            class(quarter_q * (q - one - (q - one) * r), one),
            class(quarter_q * (q - one - sq + (one + sq) * r), half_q1 * (one + r)),
            class(quarter_q * (q - one + sq + (one + sq) * r), half_q1 * (one - r)),
            class(quarter_q * q, q * q - q - one),
        ]
    }
}

/// Whether the closed forms predict a zero-weight nonzero codeword.
pub fn closed_form_degenerate(ctx: &FieldCtx, spec: &CodeSpec) -> bool {
    closed_weight_classes(ctx, spec, Table1Variant::Solved)
        .iter()
        .any(|c| c.multiplicity > Rational::from_integer(0) && c.weight <= Rational::from_integer(0))
}

/// Closed-form distribution with coincident weights merged.
pub fn closed_distribution(ctx: &FieldCtx, spec: &CodeSpec, variant: Table1Variant) -> Result<WeightDistribution> {
    let classes = closed_weight_classes(ctx, spec, variant);
    if closed_form_degenerate(ctx, spec) {
        let bad: Vec<String> = classes
            .iter()
            .filter(|c| c.weight <= Rational::from_integer(0))
            .map(|c| format!("weight {} with multiplicity {}", c.weight, c.multiplicity))
            .collect();
        return Err(Error::Degenerate(format!(
            "{spec}: closed form gives {}; the formal map is not injective",
            bad.join(", ")
        )));
    }
    let mut counts = BTreeMap::new();
    counts.insert(0u64, 1u64);
    for c in classes {
        let w = rational_to_int(c.weight)
            .ok_or_else(|| Error::Unavailable(format!("non-integral weight {}", c.weight)))?;
        let m = rational_to_int(c.multiplicity)
            .ok_or_else(|| Error::Unavailable(format!("non-integral multiplicity {}", c.multiplicity)))?;
        if m < 0 {
            return Err(Error::Unavailable(format!("negative multiplicity {m} at weight {w}")));
        }
        if m > 0 {
            *counts.entry(w as u64).or_insert(0) += m as u64;
        }
    }
    Ok(WeightDistribution::from_counts(DistMethod::Closed, spec.formal_dimension(), counts))
}

/// `w_min / w_max` of a non-degenerate distribution.
pub fn minmax_ratio(dist: &WeightDistribution) -> Result<MinMaxRatio> {
    if dist.degenerate {
        return Err(Error::Degenerate(format!(
            "kernel of size {} makes the weight ratio meaningless",
            dist.kernel_size
        )));
    }
    let (min, max) = dist
        .min_nonzero()
        .zip(dist.max_weight())
        .ok_or_else(|| Error::Unavailable("no nonzero weights".into()))?;
    let ratio = Rational::new(min as i128, max as i128);
    Ok(MinMaxRatio {
        min,
        max,
        ratio,
        exceeds_half: ratio > Rational::new(1, 2),
    })
}
