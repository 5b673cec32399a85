//! The antispherical module and the wall-crossing recursion for affine
//! Kazhdan-Lusztig polynomials.
//!
//! Basis elements N_A are indexed by alcoves in the positive chamber. The
//! self-dual elements are computed recursively: descend through a wall with
//! an admissible generator, apply the C_s action
//!
//! ```text
//! N_A C_s = N_{As} + v N_A    (As in the chamber, above the wall)
//!         = N_{As} + v^{-1} N_A  (As in the chamber, below the wall)
//!         = 0                 (As outside the chamber)
//! ```
//!
//! and correct constant terms by subtracting γ-multiples of already-known
//! self-dual elements. The polynomials n_{λ,μ} for dominant weights then
//! come from the alcoves a+(λ+ρ), a+(μ+ρ).

use std::collections::HashMap;
use std::sync::Arc;

use crate::alcove::{a_plus_of_point, right_multiply, Alcove, Relation};
use crate::canonical::SessionOf;
use crate::laurent::{Coeff, LaurentPolyOf};
use crate::partition::{Context, Partition};
use crate::{Error, Result};

/// Finite formal sum alcove -> Laurent polynomial, supported in the
/// positive chamber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KLVectorOf<C: Coeff> {
    entries: std::collections::BTreeMap<Alcove, LaurentPolyOf<C>>,
    ctx: Context,
}

impl<C: Coeff> KLVectorOf<C> {
    pub fn zero(ctx: Context) -> Self {
        KLVectorOf {
            entries: std::collections::BTreeMap::new(),
            ctx,
        }
    }

    pub fn unit(a: Alcove, ctx: Context) -> Self {
        let mut v = Self::zero(ctx);
        v.entries.insert(a, LaurentPolyOf::one());
        v
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

    pub fn entries(&self) -> impl Iterator<Item = (&Alcove, &LaurentPolyOf<C>)> {
        self.entries.iter()
    }

    pub fn coeff(&self, a: &Alcove) -> LaurentPolyOf<C> {
        self.entries
            .get(a)
            .cloned()
            .unwrap_or_else(LaurentPolyOf::zero)
    }

    pub fn add_to(&mut self, a: Alcove, p: &LaurentPolyOf<C>) {
        if p.is_zero() {
            return;
        }
        debug_assert!(a.in_positive_chamber());
        match self.entries.entry(a) {
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

    pub fn sub_scaled_assign(&mut self, other: &Self, scale: &LaurentPolyOf<C>) {
        for (a, p) in other.entries() {
            self.add_to(a.clone(), &p.mul(scale).neg());
        }
    }
}

/// Right action of C_s, extended linearly.
pub fn cs_action<C: Coeff>(x: &KLVectorOf<C>, s: usize, ctx: Context) -> KLVectorOf<C> {
    let mut out = KLVectorOf::zero(ctx);
    for (a, c) in x.entries() {
        let (next, rel, in_chamber) = right_multiply(a, s, ctx);
        if !in_chamber {
            continue;
        }
        let weight = match rel {
            Relation::Succ => c.shifted(1),
            Relation::Prec => c.shifted(-1),
        };
        out.add_to(next, c);
        out.add_to(a.clone(), &weight);
    }
    out
}

/// Memoized self-dual basis of the antispherical module.
pub struct KLSessionOf<C: Coeff> {
    ctx: Context,
    memo: HashMap<Alcove, Arc<KLVectorOf<C>>>,
    computed_count: u64,
}

impl<C: Coeff> KLSessionOf<C> {
    pub fn new(ctx: Context) -> Self {
        KLSessionOf {
            ctx,
            memo: HashMap::new(),
            computed_count: 0,
        }
    }

    pub fn ctx(&self) -> Context {
        self.ctx
    }

    /// Number of self-dual elements computed so far.
    pub fn computed_count(&self) -> u64 {
        self.computed_count
    }

    /// First generator (in the fixed order s_0, s_1, ...) taking A strictly
    /// down while staying in the chamber.
    fn descent(&self, a: &Alcove) -> Result<(usize, Alcove)> {
        for s in 0..self.ctx.k() {
            let (next, rel, in_chamber) = right_multiply(a, s, self.ctx);
            if in_chamber && rel == Relation::Prec {
                return Ok((s, next));
            }
        }
        Err(Error::Internal(format!(
            "no admissible descent generator for alcove {:?}",
            a.dmat()
        )))
    }

    /// The self-dual element for an alcove in the positive chamber.
    pub fn nbar(&mut self, a: &Alcove) -> Result<Arc<KLVectorOf<C>>> {
        if !a.in_positive_chamber() {
            return Err(Error::Internal(
                "self-dual elements are indexed by chamber alcoves".into(),
            ));
        }
        if let Some(v) = self.memo.get(a) {
            return Ok(v.clone());
        }
        self.run_worklist(a)?;
        Ok(self
            .memo
            .get(a)
            .expect("worklist populated the target")
            .clone())
    }

    fn insert(&mut self, a: Alcove, v: KLVectorOf<C>) -> Result<()> {
        validate_nbar(&a, &v)?;
        self.memo.insert(a, Arc::new(v));
        self.computed_count += 1;
        Ok(())
    }

    fn run_worklist(&mut self, target: &Alcove) -> Result<()> {
        enum State<C: Coeff> {
            Plan,
            Correct { acc: KLVectorOf<C>, steps: u64 },
        }
        let mut stack: Vec<(Alcove, State<C>)> = vec![(target.clone(), State::Plan)];

        while let Some((a, state)) = stack.pop() {
            if self.memo.contains_key(&a) {
                continue;
            }
            match state {
                State::Plan => {
                    if a.is_fundamental() {
                        let unit = KLVectorOf::unit(a.clone(), self.ctx);
                        self.insert(a, unit)?;
                        continue;
                    }
                    let (s, below) = self.descent(&a)?;
                    let Some(base) = self.memo.get(&below) else {
                        stack.push((a, State::Plan));
                        stack.push((below, State::Plan));
                        continue;
                    };
                    let acc = cs_action(base, s, self.ctx);
                    // The first approximation must already sit in N[v]:
                    // the recursion never produces negative exponents.
                    for (b, p) in acc.entries() {
                        if p.min_exp().is_some_and(|e| e < 0) {
                            return Err(Error::Internal(format!(
                                "first approximation at {:?} has negative exponents in {p}",
                                b.dmat()
                            )));
                        }
                    }
                    if !acc.coeff(&a).is_one() {
                        return Err(Error::Internal(format!(
                            "first approximation at {:?} lacks unit leading term",
                            a.dmat()
                        )));
                    }
                    stack.push((a, State::Correct { acc, steps: 0 }));
                }
                State::Correct { mut acc, mut steps } => {
                    // Correct the largest offending alcove first: order by
                    // separation length, ties by floor matrix.
                    let bad = acc
                        .entries()
                        .filter(|(b, p)| *b != &a && !p.in_v_z_v())
                        .max_by_key(|(b, _)| (b.separation_length(), b.dmat().to_vec()))
                        .map(|(b, _)| b.clone());
                    match bad {
                        None => {
                            self.insert(a, acc)?;
                        }
                        Some(b) => {
                            let Some(known) = self.memo.get(&b) else {
                                stack.push((a, State::Correct { acc, steps }));
                                stack.push((b, State::Plan));
                                continue;
                            };
                            steps += 1;
                            // Corrected alcoves descend strictly, so the
                            // count can never pass the current support.
                            let bound = 4 * acc.len() as u64 + 64;
                            if steps > bound {
                                return Err(Error::Internal(format!(
                                    "correction at {:?} exceeded {bound} steps",
                                    a.dmat()
                                )));
                            }
                            let gamma = acc.coeff(&b).gamma_correction();
                            let known = known.clone();
                            acc.sub_scaled_assign(&known, &gamma);
                            stack.push((a, State::Correct { acc, steps }));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The polynomial n_{λ,μ} for dominant weights, through the a+ alcoves
    /// of λ+ρ and μ+ρ. Zero off the orbit; n_{A,A} = 1.
    pub fn n_poly(&mut self, la: &Partition, mu: &Partition) -> Result<LaurentPolyOf<C>> {
        self.ctx.admits(la)?;
        self.ctx.admits(mu)?;
        if !self.ctx.same_orbit(la, mu) {
            return Ok(LaurentPolyOf::zero());
        }
        let a = a_plus_of_point(&self.ctx.rho_shifted(la), self.ctx);
        let b = a_plus_of_point(&self.ctx.rho_shifted(mu), self.ctx);
        Ok(self.nbar(&b)?.coeff(&a))
    }
}

/// Normalization of a self-dual element: unit coefficient at the top
/// alcove, coefficients in vN[v] strictly below.
fn validate_nbar<C: Coeff>(a: &Alcove, v: &KLVectorOf<C>) -> Result<()> {
    if !v.coeff(a).is_one() {
        return Err(Error::Internal(format!(
            "self-dual element at {:?} lacks unit coefficient",
            a.dmat()
        )));
    }
    for (b, p) in v.entries() {
        if b == a {
            continue;
        }
        let c = p.classify();
        if !c.in_v_z_v || !c.nonneg_coeffs {
            return Err(Error::Internal(format!(
                "self-dual element at {:?} has coefficient {p} at {:?}",
                a.dmat(),
                b.dmat()
            )));
        }
    }
    Ok(())
}

/// One disagreement between the Fock-side and alcove-side polynomials.
#[derive(Clone, Debug)]
pub struct Mismatch<C: Coeff> {
    pub lambda: Partition,
    pub d: LaurentPolyOf<C>,
    pub n: LaurentPolyOf<C>,
}

/// Compare d_{λ,μ}(v) with n_{λ+ρ,μ+ρ}(v) over the orbit-and-dominance
/// support of μ. The returned list is expected to be empty.
pub fn compare_with_gcb<C: Coeff>(
    mu: &Partition,
    gcb_session: &mut SessionOf<C>,
    kl_session: &mut KLSessionOf<C>,
) -> Result<Vec<Mismatch<C>>> {
    let ctx = gcb_session.ctx();
    let mut mismatches = Vec::new();
    for la in ctx.orbit_members(mu) {
        if !la.dominated_by(mu) {
            continue;
        }
        let d = gcb_session.d_poly(&la, mu)?;
        let n = kl_session.n_poly(&la, mu)?;
        if d != n {
            mismatches.push(Mismatch { lambda: la, d, n });
        }
    }
    Ok(mismatches)
}
