use std::sync::Arc;

use crate::error::{Error, Result};

use super::{FiniteQuantale, Quantale};

/// Largest monoid whose powerset we can represent as a `u64` bitset.
pub const MAX_MONOID: usize = 64;
/// Largest monoid whose powerset we are willing to enumerate.
pub const MAX_ENUMERABLE_MONOID: usize = 16;

/// A finite monoid given by its multiplication table. Element 0 is the unit.
///
/// Construction only checks shape and index ranges; [`MonoidTable::defects`]
/// reports associativity or unit failures, so a deliberately broken table
/// can still be fed to the law checkers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonoidTable {
    n: usize,
    table: Vec<usize>,
}

impl MonoidTable {
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_MONOID {
            return Err(Error::InvalidMonoid(format!("size {n} outside 1..={MAX_MONOID}")));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMonoid(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for v in row {
                if v >= n {
                    return Err(Error::InvalidMonoid(format!("entry {v} in row {i} out of range")));
                }
                table.push(v);
            }
        }
        Ok(Self { n, table })
    }

    /// Parses `n` on the first line followed by `n` rows of `n` indices.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty monoid file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("monoid size: {e}")))?;
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("row {i}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing data after monoid table".into()));
        }
        Self::from_rows(rows)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.mul(i, j).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// The cyclic group `Z_n` under addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::from_rows((0..n).map(|i| (0..n).map(|j| (i + j) % n.max(1)).collect()).collect())
    }

    /// A unit adjoined to `k` left-zero elements (`a · b = a`). Not commutative for `k ≥ 2`.
    pub fn left_zero_band(k: usize) -> Result<Self> {
        let n = k + 1;
        Self::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| if i == 0 { j } else { i }).collect())
                .collect(),
        )
    }

    /// The symmetric group on `k` points, permutations composed as functions.
    pub fn symmetric_group(k: usize) -> Result<Self> {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for pos in 0..k {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let mut ps = perms(k);
        ps.sort();
        // identity sorts first
        let index = |p: &Vec<usize>| ps.iter().position(|q| q == p).unwrap();
        let rows = ps
            .iter()
            .map(|a| {
                ps.iter()
                    .map(|b| {
                        let c: Vec<usize> = (0..k).map(|i| a[b[i]]).collect();
                        index(&c)
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(rows)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    /// Overwrites one product entry.
    pub fn set(&mut self, a: usize, b: usize, v: usize) -> Result<()> {
        if a >= self.n || b >= self.n || v >= self.n {
            return Err(Error::InvalidMonoid(format!("index out of range in set({a},{b},{v})")));
        }
        self.table[a * self.n + b] = v;
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Unit and associativity failures, as human-readable witnesses.
    pub fn defects(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in 0..self.n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                out.push(format!("0 is not a unit at {a}"));
            }
        }
        for a in 0..self.n {
            for b in 0..self.n {
                for c in 0..self.n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        out.push(format!("({a}·{b})·{c} != {a}·({b}·{c})"));
                    }
                }
            }
        }
        out
    }
}

/// Subsets of a finite monoid under union and complex multiplication
/// `X · Y = {x · y}`. Elements are bitsets; the unit is `{0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowersetQuantale {
    monoid: Arc<MonoidTable>,
    full: u64,
}

impl PowersetQuantale {
    pub fn new(monoid: MonoidTable) -> Self {
        let n = monoid.len();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self { monoid: Arc::new(monoid), full }
    }

    pub fn monoid(&self) -> &MonoidTable {
        &self.monoid
    }

    pub fn singleton(&self, a: usize) -> u64 {
        1u64 << a
    }

    pub fn set_of(&self, items: &[usize]) -> u64 {
        items.iter().fold(0, |acc, &a| acc | (1u64 << a))
    }

    fn members(&self, x: u64) -> impl Iterator<Item = usize> + '_ {
        (0..self.monoid.len()).filter(move |i| x >> i & 1 == 1)
    }
}

impl Quantale for PowersetQuantale {
    type Elem = u64;

    fn bottom(&self) -> u64 {
        0
    }

    fn top(&self) -> u64 {
        self.full
    }

    fn unit(&self) -> u64 {
        1
    }

    fn contains(&self, x: &u64) -> bool {
        x & !self.full == 0
    }

    fn leq(&self, x: &u64, y: &u64) -> bool {
        x & !y == 0
    }

    fn join(&self, x: &u64, y: &u64) -> u64 {
        x | y
    }

    fn meet(&self, x: &u64, y: &u64) -> u64 {
        x & y
    }

    fn mul(&self, x: &u64, y: &u64) -> u64 {
        let mut out = 0;
        for a in self.members(*x) {
            for b in self.members(*y) {
                out |= 1u64 << self.monoid.mul(a, b);
            }
        }
        out
    }

    /// `Z / Y = {a : a · b ∈ Z for every b ∈ Y}`.
    fn rres(&self, z: &u64, y: &u64) -> u64 {
        (0..self.monoid.len())
            .filter(|&a| self.members(*y).all(|b| z >> self.monoid.mul(a, b) & 1 == 1))
            .fold(0, |acc, a| acc | (1u64 << a))
    }

    /// `X \ Z = {b : a · b ∈ Z for every a ∈ X}`.
    fn lres(&self, x: &u64, z: &u64) -> u64 {
        (0..self.monoid.len())
            .filter(|&b| self.members(*x).all(|a| z >> self.monoid.mul(a, b) & 1 == 1))
            .fold(0, |acc, b| acc | (1u64 << b))
    }

    fn is_commutative(&self) -> bool {
        self.monoid.is_commutative()
    }

    fn describe(&self) -> String {
        format!("powerset of a {}-element monoid", self.monoid.len())
    }
}

impl FiniteQuantale for PowersetQuantale {
    /// Panics if the monoid has more than [`MAX_ENUMERABLE_MONOID`] elements.
    fn elements(&self) -> Vec<u64> {
        assert!(
            self.monoid.len() <= MAX_ENUMERABLE_MONOID,
            "powerset of a {}-element monoid is too large to enumerate",
            self.monoid.len()
        );
        (0..=self.full).collect()
    }
}
