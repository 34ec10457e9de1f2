//! Generalized Hamming weights `d_r` of the codes `C_D`.
//!
//! Two exhaustive engines compute the same number:
//!
//! * point side: `d_r = n - max |D ∩ H|` over `H` of dimension `2s - r`,
//!   counted by walking the span of `H`;
//! * message side: `d_r = min |supp(<c_w : w in K>)|` over `K` of dimension
//!   `r`, with the support kept as an OR of per-row codeword bitsets. Since
//!   `n - |supp| = |D ∩ K^⊥|` this is the AND/popcount count on the complement.
//!
//! The cheaper side is chosen from a word-operation estimate, and anything
//! above the budget is skipped rather than approximated.

use serde::Serialize;

use crate::codegen::{closed_form_degenerate, rank_and_kernel, Code};
use crate::error::{Error, Result};
use crate::expsum::{first_even, s_value, SumMethod};
use crate::field::FieldElem;
use crate::numtheory::gaussian_binomial_saturating;
use crate::subspace::{dual_subspace, for_each_scored, par_max, SubspaceBasis, SubspaceScorer};
use crate::walsh::fwht;
use crate::{rational_to_int, Rational};

pub const DEFAULT_BUDGET: u128 = 10_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// enumerate `H` of dimension `2s - r` among the points
    Points,
    /// enumerate `K` of dimension `r` among the messages
    Messages,
}

/// Estimated word operations for computing `d_r` on one side.
pub fn side_cost(side: Side, ambient: u32, r: u32, n: usize) -> u128 {
    let words = n.div_ceil(64) as u128;
    match side {
        Side::Points => {
            let k = ambient - r;
            gaussian_binomial_saturating(ambient, k).saturating_mul(1u128 << k)
        }
        Side::Messages => gaussian_binomial_saturating(ambient, r).saturating_mul((r as u128 + 1) * words),
    }
}

/// `|D ∩ H|`.
pub fn intersect_count(code: &Code, h: &SubspaceBasis) -> u64 {
    let set = code.defining_set();
    h.span().filter(|&p| p != 0 && set.contains(p)).count() as u64
}

struct PointScorer<'a> {
    code: &'a Code<'a>,
}

impl SubspaceScorer for PointScorer<'_> {
    type State = ();

    fn init(&self, _: &[u64]) {}

    fn flip(&self, _: &mut (), _: &[u64], _: usize, _: u32) {}

    fn score(&self, _: &(), rows: &[u64]) -> u64 {
        let set = self.code.defining_set();
        let mut cur = 0u64;
        let mut count = 0;
        for c in 1u64..1 << rows.len() {
            cur ^= rows[c.trailing_zeros() as usize];
            count += set.contains(cur) as u64;
        }
        count
    }
}

/// Scores `K` by `n - |supp|`, given one codeword bitset per coordinate of `K`'s ambient space.
struct SupportScorer {
    gens: Vec<Vec<u64>>,
    n: u64,
}

impl SupportScorer {
    fn row_word(&self, row: u64) -> Vec<u64> {
        let mut acc = vec![0u64; self.gens[0].len()];
        let mut bits = row;
        while bits != 0 {
            let g = &self.gens[bits.trailing_zeros() as usize];
            for (a, w) in acc.iter_mut().zip(g) {
                *a ^= w;
            }
            bits &= bits - 1;
        }
        acc
    }
}

impl SubspaceScorer for SupportScorer {
    type State = Vec<Vec<u64>>;

    fn init(&self, rows: &[u64]) -> Vec<Vec<u64>> {
        rows.iter().map(|&r| self.row_word(r)).collect()
    }

    fn flip(&self, state: &mut Vec<Vec<u64>>, _: &[u64], row: usize, col: u32) {
        for (a, w) in state[row].iter_mut().zip(&self.gens[col as usize]) {
            *a ^= w;
        }
    }

    fn score(&self, state: &Vec<Vec<u64>>, _: &[u64]) -> u64 {
        let words = self.gens[0].len();
        let mut support = 0u64;
        for i in 0..words {
            let mut acc = 0u64;
            for row in state {
                acc |= row[i];
            }
            support += acc.count_ones() as u64;
        }
        self.n - support
    }
}

/// An exhaustively computed `d_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BruteGhw {
    pub r: u32,
    pub d_r: u64,
    pub side: Side,
    /// `r`-dimensional message subspace whose codewords have support `d_r`
    pub witness: SubspaceBasis,
    pub visited: u128,
    pub cost: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteOutcome {
    Computed(BruteGhw),
    SkippedBudget { cost: u128, budget: u128 },
}

fn check_r(code: &Code, r: u32) -> Result<()> {
    let k = code.ambient_dim();
    if r == 0 || r > k {
        return Err(Error::Dimension(format!("r = {r} outside 1..={k}")));
    }
    Ok(())
}

/// Exhaustive `d_r` for a non-degenerate code, on the cheaper side unless
/// `side` forces one.
pub fn ghw_bruteforce(code: &Code, r: u32, budget: u128, side: Option<Side>) -> Result<BruteOutcome> {
    check_r(code, r)?;
    if closed_form_degenerate(code.ctx(), code.spec()) {
        return Err(Error::Degenerate(format!(
            "{}: d_r over the formal message space is inapplicable",
            code.spec()
        )));
    }
    let ambient = code.ambient_dim();
    let n = code.len();
    let side = side.unwrap_or_else(|| {
        if side_cost(Side::Points, ambient, r, n) <= side_cost(Side::Messages, ambient, r, n) {
            Side::Points
        } else {
            Side::Messages
        }
    });
    let cost = side_cost(side, ambient, r, n);
    if cost > budget {
        return Ok(BruteOutcome::SkippedBudget { cost, budget });
    }
    log::debug!("{} r={r}: {side:?} side, estimated cost {cost}", code.spec());
    let res = match side {
        Side::Points => {
            let best = par_max(ambient, ambient - r, &PointScorer { code })?;
            let h = SubspaceBasis::from_generators(ambient, &best.rows)?;
            BruteGhw {
                r,
                d_r: n as u64 - best.score,
                side,
                witness: dual_subspace(&h, code.pairing())?,
                visited: best.visited,
                cost,
            }
        }
        Side::Messages => {
            let scorer = SupportScorer {
                gens: code.generator_rows(),
                n: n as u64,
            };
            let best = par_max(ambient, r, &scorer)?;
            BruteGhw {
                r,
                d_r: n as u64 - best.score,
                side,
                witness: SubspaceBasis::from_generators(ambient, &best.rows)?,
                visited: best.visited,
                cost,
            }
        }
    };
    Ok(BruteOutcome::Computed(res))
}

/// Independent generator indices of a code and its rank.
fn independent_generators(code: &Code) -> (Vec<usize>, Vec<Vec<u64>>) {
    let rows = code.generator_rows();
    let mut picked: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let trial: Vec<Vec<u64>> = picked.iter().chain(std::iter::once(&i)).map(|&j| rows[j].clone()).collect();
        if rank_and_kernel(&trial).0 == trial.len() {
            picked.push(i);
        }
    }
    let gens = picked.iter().map(|&j| rows[j].clone()).collect();
    (picked, gens)
}

/// Exhaustive `d_r` of the code actually generated, `1 <= r <= rank`; works for
/// degenerate specs too. The witness is mapped back to message words.
pub fn ghw_actual_code(code: &Code, r: u32, budget: u128) -> Result<BruteOutcome> {
    let (picked, gens) = independent_generators(code);
    let k = gens.len() as u32;
    if r == 0 || r > k {
        return Err(Error::Dimension(format!("r = {r} outside 1..={k} for a rank-{k} code")));
    }
    let n = code.len();
    let cost = side_cost(Side::Messages, k, r, n);
    if cost > budget {
        return Ok(BruteOutcome::SkippedBudget { cost, budget });
    }
    let scorer = SupportScorer { gens, n: n as u64 };
    let best = par_max(k, r, &scorer)?;
    let lifted: Vec<u64> = best
        .rows
        .iter()
        .map(|&row| {
            picked
                .iter()
                .enumerate()
                .filter(|(i, _)| (row >> i) & 1 == 1)
                .fold(0u64, |acc, (_, &j)| acc ^ (1u64 << j))
        })
        .collect();
    Ok(BruteOutcome::Computed(BruteGhw {
        r,
        d_r: n as u64 - best.score,
        side: Side::Messages,
        witness: SubspaceBasis::from_generators(code.ambient_dim(), &lifted)?,
        visited: best.visited,
        cost,
    }))
}

/// Closed-form `d_r`; `None` for degenerate specs.
pub fn ghw_closed(code: &Code, r: u32) -> Result<Option<i64>> {
    check_r(code, r)?;
    let ctx = code.ctx();
    let spec = code.spec();
    if closed_form_degenerate(ctx, spec) {
        return Ok(None);
    }
    let p = ctx.params();
    let q = Rational::from_integer(p.q() as i128);
    let sq = Rational::from_integer(p.sqrt_q() as i128);
    let lm = Rational::from_integer(p.lm() as i128);
    let sa_int = s_value(ctx, spec.a(), SumMethod::Closed);
    assert!(sa_int != 0, "S(a) = 0 is impossible for odd l");
    let sa = Rational::from_integer(sa_int as i128);
    let one = Rational::from_integer(1);
    let half = Rational::new(1, 2);
    let two_r = Rational::from_integer(1i128 << r);
    let small = 2 * r <= p.s();
    let d = if spec.b().is_zero() {
        if small {
            half * q * (one - one / two_r) * (q - sq + (q + sq) * sa / lm)
        } else {
            half * q * (q + one + (q - one) * sa / lm) - q * q / two_r
        }
    } else if small {
        let base = half * q * q * (one - one / two_r) - q * (sq + one) / Rational::from_integer(4) * (one - sa / lm);
        if sa_int < 0 {
            base
        } else {
            base + q * sq / (two_r * Rational::from_integer(2)) * (one - (sq + one) * sa / lm)
        }
    } else {
        half * q * q * (one - Rational::from_integer(2) / two_r)
    };
    rational_to_int(d)
        .map(Some)
        .ok_or_else(|| Error::Unavailable(format!("non-integral closed-form d_{r} = {d}")))
}

/// An explicit maximizing `r`-dimensional message subspace.
pub fn witness_subspace(code: &Code, r: u32) -> Result<SubspaceBasis> {
    check_r(code, r)?;
    let ctx = code.ctx();
    let spec = code.spec();
    if closed_form_degenerate(ctx, spec) {
        return Err(Error::Degenerate(format!("{spec}: no witness construction in the degenerate regime")));
    }
    let s = ctx.degree();
    let ambient = code.ambient_dim();
    let half_basis = ctx.half_subfield_basis();
    let (a, b) = (spec.a(), spec.b());
    if 2 * r <= s {
        let beta = first_even(ctx, a)?.ok_or_else(|| Error::Unavailable("E_a is empty".into()))?;
        let line: Vec<u64> = half_basis
            .iter()
            .map(|&h| code.pack(ctx.mul(beta, h), FieldElem::ZERO))
            .collect();
        let rows: Vec<u64> = if b.is_zero() {
            line[..r as usize].to_vec()
        } else {
            let mut rows = line[..r as usize - 1].to_vec();
            if s_value(ctx, a, SumMethod::Closed) < 0 {
                // {(u,0)} ∪ {(xi+u, b)} with xi outside L_(r-1)
                rows.push(line[r as usize - 1] ^ code.pack(FieldElem::ZERO, b));
            } else {
                rows.push(code.pack(FieldElem::ZERO, b));
            }
            rows
        };
        return SubspaceBasis::from_generators(ambient, &rows);
    }
    // large r: the dual of a (2s - r)-space inside x F_sqrt(q) x F_q (or x T_b)
    let x = ctx
        .nonzero()
        .find(|&x| !ctx.trace(ctx.mul(a, ctx.pow_e(x))))
        .ok_or_else(|| Error::Unavailable("no x with Tr(a x^e) = 0".into()))?;
    let mut big: Vec<u64> = half_basis
        .iter()
        .map(|&h| code.pack(ctx.mul(x, h), FieldElem::ZERO))
        .collect();
    let second: Vec<FieldElem> = if b.is_zero() {
        (0..s).map(|k| FieldElem(1 << k)).collect()
    } else {
        ctx.trace_kernel_basis(b)
    };
    big.extend(second.iter().map(|&y| code.pack(FieldElem::ZERO, y)));
    let k = (ambient - r) as usize;
    if k > big.len() {
        return Err(Error::Unavailable(format!("construction has dimension {} < {k}", big.len())));
    }
    let h = SubspaceBasis::from_generators(ambient, &big[..k])?;
    dual_subspace(&h, code.pairing())
}

/// Walsh spectrum of `(x, y) -> (-1)^Tr(a x^e + b y)`, for evaluating `B_H`.
pub struct Spectrum {
    values: Vec<i64>,
}

impl Spectrum {
    pub fn new(code: &Code) -> Self {
        let size = 1usize << code.ambient_dim();
        let mut values: Vec<i64> = (0..size as u64)
            .map(|p| if code.condition(p) { -1 } else { 1 })
            .collect();
        fwht(&mut values);
        Spectrum { values }
    }

    /// `sum_(x,y) (-1)^(Tr(beta . (x,y)) + f(x,y))` for one `beta`, given its mask.
    pub fn at_mask(&self, mask: u64) -> i64 {
        self.values[mask as usize]
    }
}

/// `B_H = sum_{beta in H} sum_{(x,y)} (-1)^Tr(beta . (x,y) + a x^e + b y)`.
pub fn b_h_sum(code: &Code, spectrum: &Spectrum, h: &SubspaceBasis) -> i64 {
    h.span().map(|beta| spectrum.at_mask(code.pairing().mask(beta))).sum()
}

/// `B_H` by direct summation over `F_q^2`; slow, for cross-checking.
pub fn b_h_sum_direct(code: &Code, h: &SubspaceBasis) -> i64 {
    let size = 1u64 << code.ambient_dim();
    let mut total = 0;
    for beta in h.span() {
        for p in 0..size {
            let e = code.pairing().pair(beta, p) ^ code.condition(p);
            total += if e { -1 } else { 1 };
        }
    }
    total
}

/// Visit every `r`-dimensional message subspace with `|D ∩ K^⊥|` from the
/// bitset engine; the caller can check it against `B_K`.
pub fn for_each_message_subspace<F: FnMut(&[u64], u64)>(code: &Code, r: u32, visit: F) -> Result<()> {
    check_r(code, r)?;
    let scorer = SupportScorer {
        gens: code.generator_rows(),
        n: code.len() as u64,
    };
    for_each_scored(code.ambient_dim(), r, &scorer, visit)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GhwMethod {
    Brute,
    Closed,
    Both,
    SkippedBudget,
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GhwMode {
    Brute,
    Closed,
    Both,
}

impl std::str::FromStr for GhwMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "brute" => Ok(GhwMode::Brute),
            "closed" => Ok(GhwMode::Closed),
            "both" => Ok(GhwMode::Both),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GhwEntry {
    pub r: u32,
    pub d_r: Option<u64>,
    pub method: GhwMethod,
    pub brute: Option<u64>,
    pub closed: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    /// estimated word operations of the brute-force side considered
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SubspaceBasis>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GhwDiscrepancy {
    pub r: u32,
    pub brute: u64,
    pub closed: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GhwTable {
    pub n: u64,
    pub dimension: u32,
    pub degenerate: bool,
    pub table: Vec<GhwEntry>,
    pub discrepancies: Vec<GhwDiscrepancy>,
    /// `d_r < d_(r+1)` across all present values
    pub monotone: bool,
    /// `d_k = n` at full rank, when computed
    pub full_rank_is_length: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct GhwOptions {
    pub budget: u128,
    pub mode: GhwMode,
    pub rs: Option<Vec<u32>>,
}

impl Default for GhwOptions {
    fn default() -> Self {
        GhwOptions {
            budget: DEFAULT_BUDGET,
            mode: GhwMode::Both,
            rs: None,
        }
    }
}

pub fn ghw_table(code: &Code, opts: &GhwOptions) -> Result<GhwTable> {
    let ambient = code.ambient_dim();
    let degenerate = closed_form_degenerate(code.ctx(), code.spec());
    let dimension = code.empirical_dimension().dimension;
    let rs: Vec<u32> = opts.rs.clone().unwrap_or_else(|| (1..=ambient).collect());
    let want_brute = opts.mode != GhwMode::Closed;
    let want_closed = opts.mode != GhwMode::Brute;
    let mut table = Vec::with_capacity(rs.len());
    let mut discrepancies = Vec::new();
    for r in rs {
        check_r(code, r)?;
        let closed = if want_closed { ghw_closed(code, r)? } else { None };
        let mut entry = GhwEntry {
            r,
            d_r: None,
            method: GhwMethod::Inapplicable,
            brute: None,
            closed,
            side: None,
            cost: None,
            witness: None,
        };
        let mut skipped = false;
        if want_brute && r <= dimension {
            let outcome = if degenerate {
                ghw_actual_code(code, r, opts.budget)?
            } else {
                ghw_bruteforce(code, r, opts.budget, None)?
            };
            match outcome {
                BruteOutcome::Computed(b) => {
                    entry.brute = Some(b.d_r);
                    entry.side = Some(b.side);
                    entry.cost = Some(b.cost.to_string());
                    entry.witness = Some(b.witness);
                }
                BruteOutcome::SkippedBudget { cost, .. } => {
                    skipped = true;
                    entry.cost = Some(cost.to_string());
                }
            }
        }
        entry.method = match (entry.brute, entry.closed) {
            (Some(b), Some(c)) => {
                if b as i64 != c {
                    discrepancies.push(GhwDiscrepancy { r, brute: b, closed: c });
                    GhwMethod::Brute
                } else {
                    GhwMethod::Both
                }
            }
            (Some(_), None) => GhwMethod::Brute,
            (None, Some(_)) => GhwMethod::Closed,
            (None, None) if skipped => GhwMethod::SkippedBudget,
            (None, None) => GhwMethod::Inapplicable,
        };
        // brute force is authoritative when both exist
        entry.d_r = entry.brute.or(entry.closed.map(|c| c.max(0) as u64));
        table.push(entry);
    }
    let present: Vec<(u32, u64)> = table.iter().filter_map(|e| e.d_r.map(|d| (e.r, d))).collect();
    let monotone = present
        .windows(2)
        .all(|w| w[0].1 < w[1].1 || w[1].0 == w[0].0);
    let full_rank_is_length = table
        .iter()
        .find(|e| e.r == dimension)
        .and_then(|e| e.d_r)
        .map(|d| d == code.len() as u64);
    Ok(GhwTable {
        n: code.len() as u64,
        dimension,
        degenerate,
        table,
        discrepancies,
        monotone,
        full_rank_is_length,
    })
}

/// Rank of a subspace's image in the code, for sanity checks on witnesses.
pub fn image_rank(code: &Code, k: &SubspaceBasis) -> usize {
    let rows: Vec<Vec<u64>> = k.rows().iter().map(|&w| code.codeword_bits(w)).collect();
    rank_and_kernel(&rows).0
}

/// `|D ∩ K^⊥|` for a message subspace `K`, through the dual.
pub fn dual_intersect_count(code: &Code, k: &SubspaceBasis) -> Result<u64> {
    Ok(intersect_count(code, &dual_subspace(k, code.pairing())?))
}

/// Support size of the subcode generated by a message subspace.
pub fn support_size(code: &Code, k: &SubspaceBasis) -> u64 {
    let n = code.len();
    let mut acc = vec![0u64; n.div_ceil(64)];
    for &w in k.rows() {
        for (a, x) in acc.iter_mut().zip(code.codeword_bits(w)) {
            *a |= x;
        }
    }
    acc.iter().map(|w| w.count_ones() as u64).sum()
}
