//! Sparse Laurent polynomials in `v` with exact integer coefficients.
//!
//! Every coefficient produced by the basis algorithms (the d_{λ,μ}(v), the
//! Kazhdan-Lusztig n_{y,x}, the correction terms of the triangular
//! reduction) lives in this ring. Polynomials are kept canonical: no stored
//! coefficient is zero, so structural equality is mathematical equality and
//! values are usable as map keys.
//!
//! Arithmetic is overflow-checked. A fixed-width instantiation that
//! overflows panics with a clear message instead of wrapping, since a
//! wrapped coefficient would silently corrupt the cross-algorithm checks.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// Coefficient scalar: an exact signed integer type.
///
/// Satisfied by the primitive signed integers and by `num_bigint::BigInt`.
/// The checked bounds let fixed-width types report overflow; arbitrary
/// precision types never fail them.
pub trait Coeff:
    Clone
    + Eq
    + Ord
    + std::hash::Hash
    + fmt::Debug
    + fmt::Display
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
{
}

impl<T> Coeff for T where
    T: Clone
        + Eq
        + Ord
        + std::hash::Hash
        + fmt::Debug
        + fmt::Display
        + Signed
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
{
}

#[inline]
fn ck<C>(r: Option<C>) -> C {
    r.unwrap_or_else(|| panic!("laurent: coefficient overflow (use a wider coefficient type)"))
}

/// Sparse Laurent polynomial: a finite map exponent -> nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPolyOf<C: Coeff> {
    terms: BTreeMap<i64, C>,
}

/// Canonical-form facts about a polynomial, plus its value at v = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification<C: Coeff> {
    /// Every exponent is >= 1.
    pub in_v_z_v: bool,
    /// Every coefficient is >= 0.
    pub nonneg_coeffs: bool,
    /// Invariant under v -> v^{-1}.
    pub bar_invariant: bool,
    /// Sum of the coefficients.
    pub eval_at_one: C,
}

impl<C: Coeff> LaurentPolyOf<C> {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::monomial(0, C::one())
    }

    /// The variable v.
    pub fn v() -> Self {
        Self::monomial(1, C::one())
    }

    /// c * v^exp (canonicalized: zero c gives the zero polynomial).
    pub fn monomial(exp: i64, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Self { terms }
    }

    /// Constant polynomial.
    pub fn constant(c: C) -> Self {
        Self::monomial(0, c)
    }

    /// Build from (exponent, coefficient) pairs, summing duplicates.
    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff_at(0).is_one()
    }

    /// Number of nonzero terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Coefficient of v^exp (zero if absent).
    pub fn coeff_at(&self, exp: i64) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Add c * v^exp in place, keeping canonical form.
    pub fn add_term(&mut self, exp: i64, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = ck(e.get().checked_add(c));
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// self + other.
    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in other.terms() {
            r.add_term(e, c);
        }
        r
    }

    /// self - other.
    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in other.terms() {
            r.add_term(e, &c.clone().neg());
        }
        r
    }

    /// self * other (exact ring product).
    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                let e = e1.checked_add(e2).expect("laurent: exponent overflow");
                r.add_term(e, &ck(c1.checked_mul(c2)));
            }
        }
        r
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.clone().neg()))
                .collect(),
        }
    }

    /// Multiply by v^n (shift all exponents).
    pub fn shifted(&self, n: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    (
                        e.checked_add(&n).expect("laurent: exponent overflow"),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// The bar involution v -> v^{-1}: every term (n, c) becomes (-n, c).
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// The symmetric correction term of the triangular reduction:
    /// gamma = sum_{n<0} p_n (v^n + v^{-n}) + p_0.
    ///
    /// Always bar-invariant, and p - gamma(p) has all exponents >= 1.
    pub fn gamma_correction(&self) -> Self {
        let mut g = Self::zero();
        for (e, c) in self.terms() {
            if e < 0 {
                g.add_term(e, c);
                g.add_term(-e, c);
            } else if e == 0 {
                g.add_term(0, c);
            }
        }
        g
    }

    /// All exponents >= 1 (vacuously true for zero).
    pub fn in_v_z_v(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 1)
    }

    /// Sum of coefficients.
    pub fn eval_at_one(&self) -> C {
        let mut s = C::zero();
        for (_, c) in self.terms() {
            s = ck(s.checked_add(c));
        }
        s
    }

    /// Canonical-form flags and the value at v = 1.
    pub fn classify(&self) -> Classification<C> {
        Classification {
            in_v_z_v: self.in_v_z_v(),
            nonneg_coeffs: self.terms.values().all(|c| !c.is_negative()),
            bar_invariant: *self == self.bar(),
            eval_at_one: self.eval_at_one(),
        }
    }

    /// JSON encoding: an object mapping decimal exponent strings to
    /// coefficients, e.g. `{"-1": 1, "0": 3}` for v^{-1} + 3. Coefficients
    /// outside the i64 range are written as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (e, c) in self.terms() {
            let value = match c.to_i64() {
                Some(n) => serde_json::Value::from(n),
                None => serde_json::Value::from(c.to_string()),
            };
            map.insert(e.to_string(), value);
        }
        serde_json::Value::Object(map)
    }

    /// Inverse of [`Self::to_json`]: accepts coefficients as JSON numbers or
    /// decimal strings.
    pub fn from_json(value: &serde_json::Value) -> crate::Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| crate::Error::Cache("polynomial must be a JSON object".into()))?;
        let mut p = Self::zero();
        for (k, v) in obj {
            let exp: i64 = k
                .parse()
                .map_err(|_| crate::Error::Cache(format!("bad exponent key {k:?}")))?;
            let c = match v {
                serde_json::Value::Number(n) => {
                    let n = n
                        .as_i64()
                        .ok_or_else(|| crate::Error::Cache(format!("bad coefficient {v}")))?;
                    C::from_i64(n).ok_or_else(|| {
                        crate::Error::Cache(format!("coefficient {n} out of range"))
                    })?
                }
                serde_json::Value::String(s) => parse_coeff::<C>(s)
                    .ok_or_else(|| crate::Error::Cache(format!("bad coefficient {s:?}")))?,
                _ => return Err(crate::Error::Cache(format!("bad coefficient {v}"))),
            };
            p.add_term(exp, &c);
        }
        Ok(p)
    }
}

fn parse_coeff<C: Coeff>(s: &str) -> Option<C> {
    <C as num_traits::Num>::from_str_radix(s, 10).ok()
}

impl<C: Coeff> fmt::Display for LaurentPolyOf<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = abs.is_one();
            match (e, unit_coeff) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "v")?,
                (1, false) => write!(f, "{abs}v")?,
                (_, true) => write!(f, "v^{e}")?,
                (_, false) => write!(f, "{abs}v^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = crate::LaurentPoly;

    fn v() -> P {
        P::v()
    }

    fn vinv() -> P {
        P::monomial(-1, 1)
    }

    #[test]
    fn arith_examples() {
        assert_eq!(v().add(&vinv()), P::from_terms([(1, 1), (-1, 1)]));
        assert_eq!(v().mul(&vinv()), P::one());
        let p = P::from_terms([(2, 3), (-1, 5)]);
        assert_eq!(p.sub(&p), P::zero());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(v().bar(), vinv());
        let p = P::from_terms([(-2, 2), (0, 1)]);
        assert_eq!(p.bar(), P::from_terms([(2, 2), (0, 1)]));
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(P::constant(3).gamma_correction(), P::constant(3));
        let p = P::from_terms([(-1, 1), (1, 2)]);
        assert_eq!(p.gamma_correction(), P::from_terms([(-1, 1), (1, 1)]));
        let q = P::from_terms([(1, 1), (2, 1)]);
        assert_eq!(q.gamma_correction(), P::zero());
    }

    #[test]
    fn classify_examples() {
        let p = P::from_terms([(1, 1), (3, 1)]);
        let c = p.classify();
        assert!(c.in_v_z_v && c.nonneg_coeffs && !c.bar_invariant);
        assert_eq!(c.eval_at_one, 2);

        let q = P::from_terms([(-1, 1), (1, 1)]);
        let c = q.classify();
        assert!(c.bar_invariant && !c.in_v_z_v);

        let z = P::zero().classify();
        assert!(z.in_v_z_v && z.nonneg_coeffs && z.bar_invariant);
        assert_eq!(z.eval_at_one, 0);
    }

    #[test]
    fn display_forms() {
        assert_eq!(P::zero().to_string(), "0");
        assert_eq!(P::one().to_string(), "1");
        assert_eq!(v().to_string(), "v");
        assert_eq!(P::from_terms([(-2, 2), (1, -1)]).to_string(), "2v^-2 - v");
        assert_eq!(P::from_terms([(0, 1), (3, 4)]).to_string(), "1 + 4v^3");
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_is_loud() {
        let big = P::constant(i64::MAX);
        let _ = big.add(&P::one());
    }

    #[test]
    fn bigint_instantiation() {
        use num_bigint::BigInt;
        type PB = LaurentPolyOf<BigInt>;
        let huge = BigInt::from(i64::MAX);
        let p = PB::constant(huge.clone());
        let q = p.add(&PB::one()).mul(&p);
        assert_eq!(q.coeff_at(0), (huge.clone() + BigInt::from(1)) * huge);
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        proptest::collection::vec((-6i64..=6, -9i64..=9), 0..8).prop_map(P::from_terms)
    }

    proptest! {
        #[test]
        fn bar_is_ring_involution(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(p.bar().bar(), p.clone());
            prop_assert_eq!(p.mul(&q).bar(), p.bar().mul(&q.bar()));
            prop_assert_eq!(p.add(&q).bar(), p.bar().add(&q.bar()));
        }

        #[test]
        fn gamma_is_bar_invariant(p in arb_poly()) {
            let g = p.gamma_correction();
            prop_assert_eq!(g.bar(), g);
        }

        #[test]
        fn gamma_reduction_strictly_positive(p in arb_poly()) {
            // p - gamma(p) keeps only exponents >= 1, and equals the
            // positive part of p minus the bar of its negative part.
            let r = p.sub(&p.gamma_correction());
            prop_assert!(r.in_v_z_v());
            let pos = P::from_terms(p.terms().filter(|(e, _)| *e > 0).map(|(e, c)| (e, *c)));
            let negbar = P::from_terms(p.terms().filter(|(e, _)| *e < 0).map(|(e, c)| (-e, *c)));
            prop_assert_eq!(r, pos.sub(&negbar));
        }

        #[test]
        fn bar_invariant_reduces_to_zero(p in arb_poly()) {
            let sym = p.add(&p.bar());
            prop_assert_eq!(sym.sub(&sym.gamma_correction()), P::zero());
        }

        #[test]
        fn json_round_trip(p in arb_poly()) {
            prop_assert_eq!(P::from_json(&p.to_json()).unwrap(), p);
        }
    }
}
