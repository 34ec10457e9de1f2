//! GF(2)-subspaces of `GF(2)^n` (`n <= 48`) in canonical RREF, their
//! exhaustive enumeration, and annihilators under a non-degenerate pairing.
//!
//! A subspace of dimension `k` is stored as `k` row words in the form
//! produced by [`linalg::rref`]: the pivot of each row is its lowest set bit,
//! pivots strictly increase, and pivot columns are clear in every other row.
//! Enumeration walks pivot sets in lexicographic order and, within a pivot
//! set, the free entries in reflected Gray-code order, so consecutive
//! subspaces differ in one bit of one row.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::linalg;
use crate::numtheory::gaussian_binomial;

pub const MAX_AMBIENT: u32 = 48;

/// Symmetric non-degenerate bilinear form on `GF(2)^n`, stored as the image
/// of each unit vector: `<w, p> = parity(mask(w) & p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    dim: u32,
    unit_masks: Vec<u64>,
}

impl Pairing {
    pub fn standard(dim: u32) -> Self {
        Pairing {
            dim,
            unit_masks: (0..dim).map(|i| 1u64 << i).collect(),
        }
    }

    /// `<(u1, u2), (x, y)> = Tr(u1 x + u2 y)` on `F_q^2`, with points packed
    /// as `x | y << s`.
    pub fn trace_form(ctx: &FieldCtx) -> Self {
        let s = ctx.degree();
        let mut unit_masks = Vec::with_capacity(2 * s as usize);
        for half in 0..2 {
            for k in 0..s {
                let m = ctx.trace_mask(crate::FieldElem(1 << k)) as u64;
                unit_masks.push(m << (half * s));
            }
        }
        Pairing {
            dim: 2 * s,
            unit_masks,
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn unit_masks(&self) -> &[u64] {
        &self.unit_masks
    }

    pub fn mask(&self, w: u64) -> u64 {
        let mut m = 0u64;
        let mut bits = w;
        while bits != 0 {
            m ^= self.unit_masks[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        m
    }

    pub fn pair(&self, w: u64, p: u64) -> bool {
        linalg::dot(self.mask(w), p)
    }

    /// `mask(w)` for every `w < 2^dim`.
    pub fn all_masks(&self) -> Vec<u64> {
        let size = 1usize << self.dim;
        let mut out = vec![0u64; size];
        for w in 1..size {
            let low = w.trailing_zeros() as usize;
            out[w] = out[w & (w - 1)] ^ self.unit_masks[low];
        }
        out
    }
}

/// A subspace of `GF(2)^ambient_dim` in canonical RREF.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    ambient_dim: u32,
    rows: Vec<u64>,
}

impl fmt::Debug for SubspaceBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubspaceBasis(dim {} in {}: [", self.dim(), self.ambient_dim)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r:#x}")?;
        }
        write!(f, "])")
    }
}

impl Serialize for SubspaceBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.rows.iter().map(|r| format!("{r:x}")))
    }
}

impl SubspaceBasis {
    /// Span of arbitrary generators.
    pub fn from_generators(ambient_dim: u32, gens: &[u64]) -> Result<Self> {
        check_ambient(ambient_dim)?;
        let limit = mask_bits(ambient_dim);
        if let Some(g) = gens.iter().find(|g| **g & !limit != 0) {
            return Err(Error::Dimension(format!(
                "generator {g:#x} outside GF(2)^{ambient_dim}"
            )));
        }
        let mut rows = gens.to_vec();
        linalg::rref(&mut rows);
        Ok(SubspaceBasis { ambient_dim, rows })
    }

    /// Wrap rows already known to be in canonical form.
    pub(crate) fn from_rref_unchecked(ambient_dim: u32, rows: Vec<u64>) -> Self {
        debug_assert!({
            let mut c = rows.clone();
            linalg::rref(&mut c);
            c == rows
        });
        SubspaceBasis { ambient_dim, rows }
    }

    pub fn zero(ambient_dim: u32) -> Self {
        SubspaceBasis {
            ambient_dim,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient_dim: u32) -> Self {
        SubspaceBasis {
            ambient_dim,
            rows: (0..ambient_dim).map(|i| 1u64 << i).collect(),
        }
    }

    pub fn ambient_dim(&self) -> u32 {
        self.ambient_dim
    }

    pub fn dim(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn contains(&self, v: u64) -> bool {
        let mut x = v;
        for r in &self.rows {
            if (x >> r.trailing_zeros()) & 1 == 1 {
                x ^= r;
            }
        }
        x == 0
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> bool {
        self.rows.iter().all(|&r| other.contains(r))
    }

    /// All `2^dim` vectors of the subspace, starting from zero, in Gray order.
    pub fn span(&self) -> impl Iterator<Item = u64> + '_ {
        let total = 1u64 << self.rows.len();
        let mut cur = 0u64;
        (0..total).map(move |c| {
            if c > 0 {
                cur ^= self.rows[c.trailing_zeros() as usize];
            }
            cur
        })
    }
}

fn check_ambient(n: u32) -> Result<()> {
    if n > MAX_AMBIENT {
        return Err(Error::Dimension(format!(
            "ambient dimension {n} exceeds {MAX_AMBIENT}"
        )));
    }
    Ok(())
}

/// Enumeration counters are `u64`; anything near that size is out of reach anyway.
fn check_enumerable(n: u32, k: u32) -> Result<u128> {
    check_ambient(n)?;
    if k > n {
        return Err(Error::Dimension(format!("k = {k} > n = {n}")));
    }
    let count = gaussian_binomial(n, k)?;
    if count > 1u128 << 62 {
        return Err(Error::Overflow("subspace enumeration"));
    }
    Ok(count)
}

fn mask_bits(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Annihilator of `h` under `pairing`.
pub fn dual_subspace(h: &SubspaceBasis, pairing: &Pairing) -> Result<SubspaceBasis> {
    if h.ambient_dim() != pairing.dim() {
        return Err(Error::Dimension(format!(
            "subspace lives in dimension {}, pairing in {}",
            h.ambient_dim(),
            pairing.dim()
        )));
    }
    let masks: Vec<u64> = h.rows().iter().map(|&r| pairing.mask(r)).collect();
    let rows = linalg::nullspace(&masks, pairing.dim());
    Ok(SubspaceBasis::from_rref_unchecked(h.ambient_dim(), rows))
}

/// A pivot set with the free columns of each row.
#[derive(Debug, Clone)]
pub struct PivotPattern {
    pub pivots: Vec<u32>,
    /// flattened free slots `(row, column)`, low-order Gray bit first
    pub slots: Vec<(usize, u32)>,
}

impl PivotPattern {
    fn new(n: u32, pivots: Vec<u32>) -> Self {
        let pivot_mask = pivots.iter().fold(0u64, |m, &p| m | (1u64 << p));
        let mut slots = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for c in p + 1..n {
                if (pivot_mask >> c) & 1 == 0 {
                    slots.push((i, c));
                }
            }
        }
        PivotPattern { pivots, slots }
    }

    pub fn count(&self) -> u128 {
        1u128 << self.slots.len()
    }

    /// Rows for the free-bit assignment `g` (bit `t` of `g` fills slot `t`).
    pub fn rows_for(&self, g: u64) -> Vec<u64> {
        let mut rows: Vec<u64> = self.pivots.iter().map(|&p| 1u64 << p).collect();
        for (t, &(i, c)) in self.slots.iter().enumerate() {
            if (g >> t) & 1 == 1 {
                rows[i] |= 1u64 << c;
            }
        }
        rows
    }
}

/// All pivot sets of size `k` in `0..n`, lexicographic.
pub fn pivot_patterns(n: u32, k: u32) -> Vec<PivotPattern> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let k = k as usize;
    let mut cur: Vec<u32> = (0..k as u32).collect();
    loop {
        out.push(PivotPattern::new(n, cur.clone()));
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - (k - i) as u32) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Streaming enumeration of every `k`-dimensional subspace of `GF(2)^n`,
/// each exactly once, in canonical order.
pub struct Subspaces {
    n: u32,
    patterns: Vec<PivotPattern>,
    pattern: usize,
    counter: u64,
    rows: Vec<u64>,
}

impl Iterator for Subspaces {
    type Item = SubspaceBasis;

    fn next(&mut self) -> Option<SubspaceBasis> {
        loop {
            let pat = self.patterns.get(self.pattern)?;
            let total = 1u64 << pat.slots.len();
            if self.counter == 0 {
                self.rows = pat.rows_for(0);
            } else if self.counter < total {
                let (i, c) = pat.slots[self.counter.trailing_zeros() as usize];
                self.rows[i] ^= 1u64 << c;
            } else {
                self.pattern += 1;
                self.counter = 0;
                continue;
            }
            self.counter += 1;
            return Some(SubspaceBasis::from_rref_unchecked(self.n, self.rows.clone()));
        }
    }
}

/// Enumerate the `k`-dimensional subspaces of `GF(2)^n`; refuses when the
/// count exceeds `max_count`.
pub fn enumerate_subspaces(n: u32, k: u32, max_count: Option<u128>) -> Result<Subspaces> {
    let count = check_enumerable(n, k)?;
    if let Some(limit) = max_count {
        if count > limit {
            return Err(Error::BudgetExceeded {
                count,
                cost: count,
                budget: limit,
            });
        }
    }
    Ok(Subspaces {
        n,
        patterns: pivot_patterns(n, k),
        pattern: 0,
        counter: 0,
        rows: Vec::new(),
    })
}

/// Incremental evaluation of a score over subspaces visited in Gray order.
pub trait SubspaceScorer: Sync {
    type State: Send;
    /// Fresh state for `rows`.
    fn init(&self, rows: &[u64]) -> Self::State;
    /// `rows[row]` just had bit `col` toggled.
    fn flip(&self, state: &mut Self::State, rows: &[u64], row: usize, col: u32);
    fn score(&self, state: &Self::State, rows: &[u64]) -> u64;
}

/// Result of an exhaustive maximization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBest {
    pub score: u64,
    pub rows: Vec<u64>,
    pub visited: u128,
}

const CHUNK_BITS: u32 = 14;

struct Task {
    pattern: usize,
    start: u64,
    end: u64,
}

fn tasks(patterns: &[PivotPattern]) -> Vec<Task> {
    let mut out = Vec::new();
    for (pi, p) in patterns.iter().enumerate() {
        let total = 1u64 << p.slots.len();
        let chunk = 1u64 << CHUNK_BITS;
        let mut start = 0;
        while start < total {
            let end = (start + chunk).min(total);
            out.push(Task {
                pattern: pi,
                start,
                end,
            });
            start = end;
        }
    }
    out
}

fn run_task<S: SubspaceScorer, F: FnMut(&[u64], u64)>(
    pat: &PivotPattern,
    task: &Task,
    scorer: &S,
    mut visit: F,
) {
    let g0 = task.start ^ (task.start >> 1);
    let mut rows = pat.rows_for(g0);
    let mut state = scorer.init(&rows);
    visit(&rows, scorer.score(&state, &rows));
    for c in task.start + 1..task.end {
        let (i, col) = pat.slots[c.trailing_zeros() as usize];
        rows[i] ^= 1u64 << col;
        scorer.flip(&mut state, &rows, i, col);
        visit(&rows, scorer.score(&state, &rows));
    }
}

/// Maximum score over all `k`-dimensional subspaces of `GF(2)^n`.
///
/// Ties resolve to the first subspace in enumeration order, so the result
/// does not depend on the number of worker threads.
pub fn par_max<S: SubspaceScorer>(n: u32, k: u32, scorer: &S) -> Result<SearchBest> {
    check_enumerable(n, k)?;
    let patterns = pivot_patterns(n, k);
    let tasks = tasks(&patterns);
    let best = tasks
        .par_iter()
        .enumerate()
        .map(|(ti, task)| {
            let mut best: Option<(u64, Vec<u64>)> = None;
            let mut visited = 0u128;
            run_task(&patterns[task.pattern], task, scorer, |rows, score| {
                visited += 1;
                if best.as_ref().is_none_or(|(b, _)| score > *b) {
                    best = Some((score, rows.to_vec()));
                }
            });
            (ti, best, visited)
        })
        .reduce(
            || (usize::MAX, None, 0),
            |a, b| {
                let visited = a.2 + b.2;
                let pick_b = match (&a.1, &b.1) {
                    (None, _) => true,
                    (_, None) => false,
                    (Some((sa, _)), Some((sb, _))) => sb > sa || (sb == sa && b.0 < a.0),
                };
                if pick_b {
                    (b.0, b.1, visited)
                } else {
                    (a.0, a.1, visited)
                }
            },
        );
    let (_, found, visited) = best;
    let (score, rows) = found.expect("at least one subspace");
    Ok(SearchBest {
        score,
        rows,
        visited,
    })
}

/// Visit every `k`-dimensional subspace sequentially with its score.
pub fn for_each_scored<S: SubspaceScorer, F: FnMut(&[u64], u64)>(
    n: u32,
    k: u32,
    scorer: &S,
    mut visit: F,
) -> Result<()> {
    check_enumerable(n, k)?;
    let patterns = pivot_patterns(n, k);
    for task in tasks(&patterns) {
        run_task(&patterns[task.pattern], &task, scorer, &mut visit);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_subspaces(2, 1, None).unwrap().count(), 3);
        assert_eq!(enumerate_subspaces(4, 2, None).unwrap().count(), 35);
        assert_eq!(enumerate_subspaces(8, 4, None).unwrap().count(), 200787);
        assert_eq!(enumerate_subspaces(5, 0, None).unwrap().count(), 1);
        assert_eq!(enumerate_subspaces(5, 5, None).unwrap().count(), 1);
    }

    #[test]
    fn enumeration_refuses_over_budget() {
        match enumerate_subspaces(8, 4, Some(1000)) {
            Err(Error::BudgetExceeded { count, .. }) => assert_eq!(count, 200787),
            other => panic!("expected refusal, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn enumeration_is_canonical_and_distinct() {
        for n in 1..=6 {
            for k in 0..=n {
                let mut seen = HashSet::new();
                for s in enumerate_subspaces(n, k, None).unwrap() {
                    assert_eq!(s.dim(), k);
                    let mut c = s.rows().to_vec();
                    linalg::rref(&mut c);
                    assert_eq!(c, s.rows());
                    // identify the subspace by its element set
                    let mut elems: Vec<u64> = s.span().collect();
                    elems.sort_unstable();
                    assert!(seen.insert(elems));
                }
                assert_eq!(seen.len() as u128, gaussian_binomial(n, k).unwrap());
            }
        }
    }

    #[test]
    fn dual_examples() {
        let p = Pairing::standard(6);
        let full = SubspaceBasis::full(6);
        assert_eq!(dual_subspace(&full, &p).unwrap().dim(), 0);
        let zero = SubspaceBasis::zero(6);
        assert_eq!(dual_subspace(&zero, &p).unwrap(), full);
    }

    #[test]
    fn dual_under_trace_form() {
        use crate::numtheory::Params;
        let ctx = FieldCtx::new(Params::new(5, 1).unwrap()).unwrap();
        let p = Pairing::trace_form(&ctx);
        // F_q x {0}
        let h = SubspaceBasis::from_generators(8, &[1, 2, 4, 8]).unwrap();
        let d = dual_subspace(&h, &p).unwrap();
        assert_eq!(d.dim(), 4);
        assert_eq!(d, SubspaceBasis::from_generators(8, &[16, 32, 64, 128]).unwrap());
        assert_eq!(dual_subspace(&d, &p).unwrap(), h);
        for sub in enumerate_subspaces(8, 3, None).unwrap().step_by(97) {
            let d = dual_subspace(&sub, &p).unwrap();
            assert_eq!(sub.dim() + d.dim(), 8);
            assert_eq!(dual_subspace(&d, &p).unwrap(), sub);
            for x in sub.span() {
                for y in d.span() {
                    assert!(!p.pair(x, y));
                }
            }
        }
    }

    struct Popcount;
    impl SubspaceScorer for Popcount {
        type State = ();
        fn init(&self, _: &[u64]) {}
        fn flip(&self, _: &mut (), _: &[u64], _: usize, _: u32) {}
        fn score(&self, _: &(), rows: &[u64]) -> u64 {
            rows.iter().map(|r| r.count_ones() as u64).sum()
        }
    }

    #[test]
    fn par_max_matches_sequential_and_is_deterministic() {
        let mut best = 0u64;
        let mut first = None;
        let mut count = 0u128;
        for_each_scored(7, 3, &Popcount, |rows, s| {
            count += 1;
            if s > best || first.is_none() {
                best = s;
                first = Some(rows.to_vec());
            }
        })
        .unwrap();
        assert_eq!(count, gaussian_binomial(7, 3).unwrap());
        let r = par_max(7, 3, &Popcount).unwrap();
        assert_eq!(r.score, best);
        assert_eq!(Some(r.rows.clone()), first);
        assert_eq!(r.visited, count);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let r1 = pool.install(|| par_max(7, 3, &Popcount).unwrap());
        assert_eq!(r, r1);
    }

    #[test]
    fn pivot_patterns_lex() {
        let p: Vec<Vec<u32>> = pivot_patterns(4, 2).into_iter().map(|p| p.pivots).collect();
        assert_eq!(
            p,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(pivot_patterns(3, 0).len(), 1);
    }
}
