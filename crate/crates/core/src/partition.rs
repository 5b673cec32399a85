//! Young diagrams and their node combinatorics.
//!
//! Conventions: the content of the node (i, j) is i - j (row minus column),
//! so residues are contents mod l. This is the opposite of the more common
//! j - i and it flips every residue; all node bookkeeping in this crate
//! depends on it.
//!
//! Rows and columns are 1-based. A partition is stored canonically, weakly
//! decreasing with trailing zeros trimmed, so derived ordering is the
//! lexicographic order used by the triangular reduction.

use std::fmt;
use std::str::FromStr;

/// l-residue value, in 0..l.
pub type Residue = u32;

/// A node (cell) of a Young diagram; row and col are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub row: usize,
    pub col: u32,
}

impl Node {
    pub fn new(row: usize, col: u32) -> Self {
        assert!(row >= 1 && col >= 1, "nodes are 1-based");
        Node { row, col }
    }

    /// Content i - j of the node.
    pub fn content(&self) -> i64 {
        self.row as i64 - self.col as i64
    }

    /// l-residue [[i - j]] of the node.
    pub fn residue(&self, l: u32) -> Residue {
        debug_assert!(l >= 2);
        self.content().rem_euclid(l as i64) as Residue
    }
}

/// A partition, identified with its Young diagram.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Canonicalize a weakly decreasing sequence (trailing zeros trimmed).
    ///
    /// Panics if the sequence increases anywhere; use [`FromStr`] for
    /// untrusted input.
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        let mut parts = parts.into();
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be weakly decreasing: {parts:?}"
        );
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The nonzero parts, largest first.
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// Number of nodes.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// Part in the given 1-based row, zero past the last row.
    pub fn part(&self, row: usize) -> u32 {
        if row >= 1 && row <= self.parts.len() {
            self.parts[row - 1]
        } else {
            0
        }
    }

    /// Containment of diagrams (valid skew shape `other ⊆ self`).
    pub fn contains(&self, other: &Partition) -> bool {
        other
            .parts
            .iter()
            .enumerate()
            .all(|(i, &p)| self.part(i + 1) >= p)
    }

    /// Removable nodes (i, λ_i), top to bottom.
    pub fn removable_nodes(&self) -> Vec<Node> {
        let n = self.parts.len();
        (1..=n)
            .filter(|&i| i == n || self.parts[i] < self.parts[i - 1])
            .map(|i| Node::new(i, self.parts[i - 1]))
            .collect()
    }

    /// Indent nodes (i, λ_i + 1), top to bottom; row length+1 counts.
    pub fn indent_nodes(&self) -> Vec<Node> {
        let n = self.parts.len();
        (1..=n + 1)
            .filter(|&i| i == 1 || self.part(i - 1) > self.part(i))
            .map(|i| Node::new(i, self.part(i) + 1))
            .collect()
    }

    /// Removable and indent nodes, optionally filtered by residue.
    pub fn boundary_nodes(&self, l: u32, r: Option<Residue>) -> (Vec<Node>, Vec<Node>) {
        let keep = |n: &Node| r.is_none_or(|r| n.residue(l) == r);
        (
            self.removable_nodes().into_iter().filter(keep).collect(),
            self.indent_nodes().into_iter().filter(keep).collect(),
        )
    }

    /// Add a node at the end of the given row, if that yields a diagram.
    pub fn add_node(&self, row: usize) -> Option<Partition> {
        if row == 0 || row > self.parts.len() + 1 {
            return None;
        }
        if row > 1 && self.part(row - 1) <= self.part(row) {
            return None;
        }
        let mut parts = self.parts.clone();
        if row == parts.len() + 1 {
            parts.push(1);
        } else {
            parts[row - 1] += 1;
        }
        Some(Partition { parts })
    }

    /// Remove the last node of the given row, if that yields a diagram.
    pub fn remove_node(&self, row: usize) -> Option<Partition> {
        if row == 0 || row > self.parts.len() {
            return None;
        }
        if row < self.parts.len() && self.parts[row] >= self.parts[row - 1] {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[row - 1] -= 1;
        Some(Partition::new(parts))
    }

    /// Per-row difference `self \ other` as nodes, assuming `other ⊆ self`
    /// and at most one new node per row.
    pub fn added_nodes(&self, other: &Partition) -> Option<Vec<Node>> {
        let mut nodes = Vec::new();
        for i in 1..=self.parts.len().max(other.parts.len()) {
            let (a, b) = (self.part(i), other.part(i));
            match a.checked_sub(b) {
                Some(0) => {}
                Some(1) => nodes.push(Node::new(i, a)),
                _ => return None,
            }
        }
        Some(nodes)
    }

    /// Dominance order λ ⊴ μ; false between different sizes.
    pub fn dominated_by(&self, mu: &Partition) -> bool {
        if self.size() != mu.size() {
            return false;
        }
        let mut sl: u64 = 0;
        let mut sm: u64 = 0;
        for i in 1..=self.parts.len().max(mu.parts.len()) {
            sl += self.part(i) as u64;
            sm += mu.part(i) as u64;
            if sl > sm {
                return false;
            }
        }
        true
    }

    /// No part value repeated l or more times.
    pub fn is_l_regular(&self, l: u32) -> bool {
        let mut run = 1u32;
        for w in self.parts.windows(2) {
            if w[0] == w[1] {
                run += 1;
                if run >= l {
                    return false;
                }
            } else {
                run = 1;
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl FromStr for Partition {
    type Err = crate::Error;

    /// Comma-separated non-increasing integers; trailing zeros allowed.
    fn from_str(s: &str) -> crate::Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for field in s.split(',') {
            let p: u32 = field
                .trim()
                .parse()
                .map_err(|_| crate::Error::BadPartition(format!("bad part {field:?}")))?;
            parts.push(p);
        }
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(crate::Error::BadPartition(format!(
                "parts must be weakly decreasing: {s:?}"
            )));
        }
        Ok(Partition::new(parts))
    }
}

/// Truncation rank k and root-of-unity level l shared by all computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    k: usize,
    l: u32,
}

impl Context {
    pub fn new(k: usize, l: u32) -> crate::Result<Self> {
        if k < 1 {
            return Err(crate::Error::BadContext("k must be >= 1".into()));
        }
        if l < 2 {
            return Err(crate::Error::BadContext("l must be >= 2".into()));
        }
        Ok(Context { k, l })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Check the row bound.
    pub fn admits(&self, mu: &Partition) -> crate::Result<()> {
        if mu.length() > self.k {
            return Err(crate::Error::TooManyRows {
                mu: mu.clone(),
                k: self.k,
            });
        }
        Ok(())
    }

    /// The staircase ρ = (k-1, ..., 1, 0).
    pub fn rho(&self) -> Partition {
        Partition::new(
            (0..self.k)
                .map(|i| (self.k - 1 - i) as u32)
                .collect::<Vec<_>>(),
        )
    }

    /// Fundamental weight Λ_i as a diagram: a column of i nodes (1 <= i <= k).
    pub fn fundamental(&self, i: usize) -> Partition {
        assert!(i >= 1 && i <= self.k, "fundamental index out of range");
        Partition::new(vec![1u32; i])
    }

    /// λ + count * Λ_i.
    pub fn add_fundamental(&self, la: &Partition, i: usize, count: u32) -> Partition {
        assert!(i >= 1 && i <= self.k);
        let mut parts: Vec<u32> = (1..=self.k).map(|r| la.part(r)).collect();
        for part in parts.iter_mut().take(i) {
            *part += count;
        }
        Partition::new(parts)
    }

    /// λ + ρ as a length-k integer vector.
    pub fn rho_shifted(&self, la: &Partition) -> Vec<i64> {
        (1..=self.k)
            .map(|i| la.part(i) as i64 + (self.k - i) as i64)
            .collect()
    }

    /// Gaps c_i = λ_i - λ_{i+1} + 1 for i = 1..k-1.
    pub fn gaps(&self, la: &Partition) -> Vec<u32> {
        (1..self.k)
            .map(|i| la.part(i) - la.part(i + 1) + 1)
            .collect()
    }

    /// Every gap divisible by l.
    pub fn is_k_critical(&self, la: &Partition) -> bool {
        self.gaps(la).iter().all(|&c| c % self.l == 0)
    }

    /// λ - (l-1)ρ is dominant, i.e. every gap is >= l.
    pub fn is_interior(&self, la: &Partition) -> bool {
        self.gaps(la).iter().all(|&c| c >= self.l)
    }

    /// Box coordinates d_i = c_i mod l of an interior diagram.
    pub fn box_coords(&self, la: &Partition) -> crate::Result<Vec<u32>> {
        if !self.is_interior(la) {
            return Err(crate::Error::NotInterior(la.clone()));
        }
        Ok(self.gaps(la).iter().map(|&c| c % self.l).collect())
    }

    /// The unique k-critical diagram μ_c with λ = μ_c + Σ d_i Λ_i,
    /// built from the bottom row up.
    pub fn critical_anchor(&self, la: &Partition) -> crate::Result<Partition> {
        let d = self.box_coords(la)?;
        let mut parts = vec![0u32; self.k];
        parts[self.k - 1] = la.part(self.k);
        for i in (1..self.k).rev() {
            parts[i - 1] = parts[i] + (la.part(i) - la.part(i + 1)) - d[i - 1];
        }
        let anchor = Partition::new(parts);
        debug_assert!(self.is_k_critical(&anchor));
        Ok(anchor)
    }

    /// Same affine-Weyl orbit: equal size and equal residue multisets of
    /// λ + ρ mod l. Root-lattice translations preserve the coordinate sum,
    /// so this characterizes the level-l orbit.
    pub fn same_orbit(&self, la: &Partition, mu: &Partition) -> bool {
        if la.size() != mu.size() || la.length() > self.k || mu.length() > self.k {
            return false;
        }
        let residues = |p: &Partition| {
            let mut r: Vec<i64> = self
                .rho_shifted(p)
                .iter()
                .map(|&x| x.rem_euclid(self.l as i64))
                .collect();
            r.sort_unstable();
            r
        };
        residues(la) == residues(mu)
    }

    /// All partitions of |μ| with at most k rows in the orbit of μ,
    /// lexicographically descending (μ itself included).
    pub fn orbit_members(&self, mu: &Partition) -> Vec<Partition> {
        let mut out: Vec<Partition> = partitions_of(mu.size(), self.k)
            .into_iter()
            .filter(|la| self.same_orbit(la, mu))
            .collect();
        out.sort();
        out.reverse();
        out
    }
}

/// All partitions of n with at most `max_parts` parts.
pub fn partitions_of(n: u64, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    fn rec(n: u64, max_parts: usize, cap: u64, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition::new(current.clone()));
            return;
        }
        if max_parts == 0 {
            return;
        }
        let hi = cap.min(n);
        // Smallest admissible first part: spreading n over max_parts rows.
        let lo = n.div_ceil(max_parts as u64);
        for p in (lo..=hi).rev() {
            current.push(p as u32);
            rec(n - p, max_parts - 1, p, current, out);
            current.pop();
        }
    }
    rec(n, max_parts, n.max(1), &mut current, &mut out);
    out
}
