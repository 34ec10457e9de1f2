//! Dense GF(2) linear algebra on word-packed vectors (at most 64 columns),
//! bit `j` of a word being column `j`.

/// Parity of the bitwise inner product.
#[inline]
pub fn dot(a: u64, b: u64) -> bool {
    (a & b).count_ones() & 1 == 1
}

/// Reduce `rows` to canonical row-reduced echelon form in place.
///
/// The pivot of a row is its lowest set bit. On return the rows are
/// linearly independent, sorted by strictly increasing pivot, and every pivot
/// column is clear in all other rows. Zero rows are dropped. Returns the
/// rank.
pub fn rref(rows: &mut Vec<u64>) -> usize {
    let mut out: Vec<u64> = Vec::with_capacity(rows.len());
    for &r in rows.iter() {
        let mut v = r;
        for &b in &out {
            let p = b.trailing_zeros();
            if (v >> p) & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let p = v.trailing_zeros();
        for b in out.iter_mut() {
            if (*b >> p) & 1 == 1 {
                *b ^= v;
            }
        }
        out.push(v);
    }
    out.sort_unstable_by_key(|r| r.trailing_zeros());
    *rows = out;
    rows.len()
}

pub fn rank(rows: &[u64]) -> usize {
    let mut v = rows.to_vec();
    rref(&mut v)
}

/// Basis (in RREF) of `{v in GF(2)^ncols : dot(row, v) = 0 for every row}`.
pub fn nullspace(rows: &[u64], ncols: u32) -> Vec<u64> {
    let mut r = rows.to_vec();
    rref(&mut r);
    let pivot_mask = r.iter().fold(0u64, |m, row| m | (1u64 << row.trailing_zeros()));
    let mut out = Vec::with_capacity(ncols as usize - r.len());
    for f in 0..ncols {
        if (pivot_mask >> f) & 1 == 1 {
            continue;
        }
        let mut v = 1u64 << f;
        for row in &r {
            if (row >> f) & 1 == 1 {
                v |= 1u64 << row.trailing_zeros();
            }
        }
        out.push(v);
    }
    rref(&mut out);
    out
}

/// Transpose `cols` (each a vector of `nrows` bits) into row words.
pub fn transpose(cols: &[u64], nrows: u32) -> Vec<u64> {
    (0..nrows)
        .map(|j| {
            cols.iter()
                .enumerate()
                .fold(0u64, |acc, (k, c)| acc | (((c >> j) & 1) << k))
        })
        .collect()
}

/// XOR basis that remembers which inserted vectors combine into each
/// stored vector, so targets can be expressed in terms of the inserted ones.
#[derive(Debug, Clone, Default)]
pub struct TrackedBasis {
    // (vector, combination of inserted tags), keyed by highest set bit
    slots: Vec<Option<(u64, u64)>>,
}

impl TrackedBasis {
    pub fn new(bits: u32) -> Self {
        TrackedBasis {
            slots: vec![None; bits as usize],
        }
    }

    fn reduce(&self, mut v: u64, mut combo: u64) -> (u64, u64) {
        while v != 0 {
            let h = 63 - v.leading_zeros() as usize;
            match self.slots.get(h).copied().flatten() {
                Some((b, c)) => {
                    v ^= b;
                    combo ^= c;
                }
                None => break,
            }
        }
        (v, combo)
    }

    /// Insert `v` tagged with `tag`; false if it was dependent.
    pub fn insert(&mut self, v: u64, tag: u64) -> bool {
        let (r, c) = self.reduce(v, tag);
        if r == 0 {
            return false;
        }
        let h = 63 - r.leading_zeros() as usize;
        if h >= self.slots.len() {
            self.slots.resize(h + 1, None);
        }
        self.slots[h] = Some((r, c));
        true
    }

    /// Combination of tags summing to `v`, if `v` is in the span.
    pub fn express(&self, v: u64) -> Option<u64> {
        let (r, c) = self.reduce(v, 0);
        (r == 0).then_some(c)
    }

    pub fn len(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
