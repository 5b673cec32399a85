//! The truncated Fock space and the lowering operators f_r.
//!
//! A [`FockVectorOf`] is a finite formal sum of diagrams with Laurent
//! polynomial coefficients, living in the quotient where diagrams with more
//! than k rows vanish. The operator f_r adds one node of residue r to each
//! diagram with the exponent rule
//!
//! ```text
//! f_r λ = Σ_ν v^{N(λ,ν)} ν,
//! N(λ,ν) = #(indent r-nodes above the added row) - #(removable r-nodes above).
//! ```
//!
//! Divided powers f_r^{(m)} are applied directly by enumerating m-subsets of
//! the indent r-nodes and summing N over the top-to-bottom filling plus
//! binom(m, 2); no v-integer division is ever performed.

use std::collections::BTreeMap;

use crate::laurent::{Coeff, LaurentPolyOf};
use crate::partition::{Context, Partition, Residue};
use crate::{Error, Result};

/// Finite formal sum diagram -> Laurent polynomial, inside the k-row quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockVectorOf<C: Coeff> {
    entries: BTreeMap<Partition, LaurentPolyOf<C>>,
    ctx: Context,
}

impl<C: Coeff> FockVectorOf<C> {
    pub fn zero(ctx: Context) -> Self {
        FockVectorOf {
            entries: BTreeMap::new(),
            ctx,
        }
    }

    /// The single diagram λ with coefficient 1.
    pub fn unit(la: Partition, ctx: Context) -> Result<Self> {
        ctx.admits(&la)?;
        let mut v = Self::zero(ctx);
        v.entries.insert(la, LaurentPolyOf::one());
        Ok(v)
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in lexicographically increasing diagram order.
    pub fn entries(&self) -> impl DoubleEndedIterator<Item = (&Partition, &LaurentPolyOf<C>)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl DoubleEndedIterator<Item = &Partition> {
        self.entries.keys()
    }

    /// Coefficient of λ (zero if absent).
    pub fn coeff(&self, la: &Partition) -> LaurentPolyOf<C> {
        self.entries
            .get(la)
            .cloned()
            .unwrap_or_else(LaurentPolyOf::zero)
    }

    /// Entries with diagram strictly lex-below `upper`, largest first.
    pub fn range_below<'a>(
        &'a self,
        upper: &Partition,
    ) -> impl Iterator<Item = (&'a Partition, &'a LaurentPolyOf<C>)> {
        use std::ops::Bound;
        self.entries
            .range::<Partition, _>((Bound::Unbounded, Bound::Excluded(upper)))
            .rev()
    }

    pub fn coeff_ref(&self, la: &Partition) -> Option<&LaurentPolyOf<C>> {
        self.entries.get(la)
    }

    /// Add p to the coefficient of λ, dropping the entry if it cancels.
    /// Diagrams beyond the k-row bound are discarded (the quotient).
    pub fn add_to(&mut self, la: Partition, p: &LaurentPolyOf<C>) {
        if p.is_zero() || la.length() > self.ctx.k() {
            return;
        }
        match self.entries.entry(la) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(p);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// self += scale * other.
    pub fn add_scaled_assign(&mut self, other: &Self, scale: &LaurentPolyOf<C>) {
        for (la, p) in other.entries() {
            self.add_to(la.clone(), &p.mul(scale));
        }
    }

    /// self -= scale * other.
    pub fn sub_scaled_assign(&mut self, other: &Self, scale: &LaurentPolyOf<C>) {
        self.add_scaled_assign(other, &scale.neg());
    }

    /// Shift every diagram by count copies of Λ_i, coefficients untouched.
    pub fn shift_fundamental(&self, i: usize, count: u32) -> Self {
        let mut out = Self::zero(self.ctx);
        for (la, p) in self.entries() {
            out.add_to(self.ctx.add_fundamental(la, i, count), p);
        }
        out
    }

    /// Reinterpret in a context with a different row bound, discarding
    /// diagrams that no longer fit.
    pub fn truncated_to(&self, ctx: Context) -> Self {
        let mut out = Self::zero(ctx);
        for (la, p) in self.entries() {
            out.add_to(la.clone(), p);
        }
        out
    }
}

/// Exponent N(λ, ν) for adding a node of residue r in `target_row`:
/// indent r-nodes strictly above, minus removable r-nodes strictly above.
pub fn n_exponent(la: &Partition, target_row: usize, r: Residue, ctx: Context) -> Result<i64> {
    let valid = la
        .indent_nodes()
        .iter()
        .any(|n| n.row == target_row && n.residue(ctx.l()) == r);
    if !valid {
        return Err(Error::InvalidNodeAddition {
            mu: la.clone(),
            row: target_row,
            residue: r,
        });
    }
    let (rem, ind) = la.boundary_nodes(ctx.l(), Some(r));
    let above =
        |ns: &[crate::partition::Node]| ns.iter().filter(|n| n.row < target_row).count() as i64;
    Ok(above(&ind) - above(&rem))
}

/// Apply f_r to a vector (linear extension of the one-node rule).
pub fn f_action<C: Coeff>(r: Residue, x: &FockVectorOf<C>) -> FockVectorOf<C> {
    let ctx = x.ctx();
    let mut out = FockVectorOf::zero(ctx);
    for (la, p) in x.entries() {
        let (rem, ind) = la.boundary_nodes(ctx.l(), Some(r));
        let mut rem_iter = rem.iter().peekable();
        let mut removables_above = 0i64;
        for (indents_above, node) in ind.iter().enumerate() {
            while let Some(n) = rem_iter.peek() {
                if n.row < node.row {
                    removables_above += 1;
                    rem_iter.next();
                } else {
                    break;
                }
            }
            let nu = la.add_node(node.row).expect("indent node addition");
            out.add_to(nu, &p.shifted(indents_above as i64 - removables_above));
        }
    }
    out
}

/// Apply the divided power f_r^{(m)}: sum over m-subsets of indent r-nodes,
/// with exponent N(T_0) + binom(m, 2) over the top-to-bottom filling.
pub fn divided_power<C: Coeff>(r: Residue, m: usize, x: &FockVectorOf<C>) -> FockVectorOf<C> {
    if m == 0 {
        return x.clone();
    }
    if m == 1 {
        return f_action(r, x);
    }
    let ctx = x.ctx();
    let binom_m2 = (m * (m - 1) / 2) as i64;
    let mut out = FockVectorOf::zero(ctx);
    for (la, p) in x.entries() {
        let (_, ind) = la.boundary_nodes(ctx.l(), Some(r));
        if ind.len() < m {
            continue;
        }
        for subset in subsets(ind.len(), m) {
            // Indent nodes are listed top to bottom, so adding in subset
            // order is exactly the standard filling T_0.
            let mut shape = la.clone();
            let mut n_t0 = 0i64;
            for &idx in &subset {
                let row = ind[idx].row;
                n_t0 += n_exponent(&shape, row, r, ctx).expect("subset addition stays valid");
                shape = shape.add_node(row).expect("indent addition");
            }
            out.add_to(shape, &p.shifted(n_t0 + binom_m2));
        }
    }
    out
}

/// Apply a residue word: (r_1, m_1) acts first, then (r_2, m_2), and so on.
pub fn apply_word<C: Coeff>(word: &[(Residue, usize)], x: &FockVectorOf<C>) -> FockVectorOf<C> {
    let mut cur = x.clone();
    for &(r, m) in word {
        cur = divided_power(r, m, &cur);
    }
    cur
}

/// All m-element index subsets of 0..n in lexicographic order.
fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        let need = m - cur.len();
        for i in start..=n.saturating_sub(need) {
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    rec(0, n, m, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{FockVector, LaurentPoly};

    fn ctx(k: usize, l: u32) -> Context {
        Context::new(k, l).unwrap()
    }

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    fn unit(parts: &[u32], c: Context) -> FockVector {
        FockVector::unit(p(parts), c).unwrap()
    }

    #[test]
    fn n_exponent_examples() {
        let c = ctx(3, 2);
        assert_eq!(n_exponent(&p(&[1]), 2, 1, c).unwrap(), 1);
        assert_eq!(n_exponent(&Partition::empty(), 1, 0, c).unwrap(), 0);
        assert_eq!(n_exponent(&p(&[2]), 2, 1, c).unwrap(), -1);
        assert!(n_exponent(&p(&[1]), 1, 0, c).is_err());
    }

    #[test]
    fn f_action_examples() {
        let c = ctx(2, 2);
        let empty = FockVector::unit(Partition::empty(), c).unwrap();
        assert_eq!(f_action(0, &empty), unit(&[1], c));

        let mut expected = FockVector::zero(c);
        expected.add_to(p(&[2]), &LaurentPoly::one());
        expected.add_to(p(&[1, 1]), &LaurentPoly::v());
        assert_eq!(f_action(1, &unit(&[1], c)), expected);

        assert!(f_action(0, &unit(&[1], c)).is_zero());
    }

    #[test]
    fn quotient_discards_long_diagrams() {
        // (1,1) has indent 0-nodes only in row 3, which overflows k = 2.
        assert!(f_action(0, &unit(&[1, 1], ctx(2, 2))).is_zero());
        assert_eq!(
            f_action(0, &unit(&[1, 1], ctx(3, 2))),
            unit(&[1, 1, 1], ctx(3, 2))
        );
    }

    #[test]
    fn divided_power_examples() {
        let c = ctx(3, 2);
        assert_eq!(divided_power(1, 2, &unit(&[1], c)), unit(&[2, 1], c));
        assert!(divided_power(1, 3, &unit(&[1], c)).is_zero());
    }

    #[test]
    fn apply_word_examples() {
        let c = ctx(2, 2);
        let empty = FockVector::unit(Partition::empty(), c).unwrap();
        let mut expected = FockVector::zero(c);
        expected.add_to(p(&[2]), &LaurentPoly::one());
        expected.add_to(p(&[1, 1]), &LaurentPoly::v());
        assert_eq!(apply_word(&[(0, 1), (1, 1)], &empty), expected);
        assert_eq!(apply_word(&[], &empty), empty);
        assert_eq!(apply_word(&[(0, 1), (1, 2)], &empty), unit(&[2, 1], c));
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert!(subsets(2, 3).is_empty());
    }
}
