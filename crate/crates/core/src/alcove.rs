//! Level-l alcove geometry for the affine Weyl group of type A_{k-1}.
//!
//! The group W ⋉ lZR acts on Z^k by permutations and translations by l
//! times root-lattice vectors; the reflection hyperplanes are
//! x_i - x_j = m l. An alcove is identified by its floor matrix
//! d_{ij} = floor((x_i - x_j)/l), constant on the alcove interior, and by
//! the unique group element mapping the fundamental alcove A+ onto it.
//!
//! All geometry is exact integer arithmetic. Points on hyperplanes are
//! resolved symbolically by an infinitesimal perturbation along
//! δ = (k-1, ..., 1, 0), which rounds every on-wall comparison to the
//! positive side; no rational or floating-point coordinates appear.

use std::cmp::Ordering;

use crate::partition::Context;
use crate::{Error, Result};

/// An element (σ, t) of the affine Weyl group at level l, acting by
/// (w·x)_i = x_{σ^{-1}(i)} + l t_i. Translations satisfy Σ t_i = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineWeylElement {
    /// σ as images: perm[i] = σ(i), 0-based.
    perm: Vec<usize>,
    /// Root-lattice translation coefficients.
    trans: Vec<i64>,
}

impl AffineWeylElement {
    pub fn identity(k: usize) -> Self {
        AffineWeylElement {
            perm: (0..k).collect(),
            trans: vec![0; k],
        }
    }

    pub fn new(perm: Vec<usize>, trans: Vec<i64>) -> Self {
        debug_assert_eq!(perm.len(), trans.len());
        debug_assert_eq!(
            trans.iter().sum::<i64>(),
            0,
            "translation must lie in the root lattice"
        );
        AffineWeylElement { perm, trans }
    }

    pub fn k(&self) -> usize {
        self.perm.len()
    }

    fn perm_inv(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    }

    /// Apply to an integer point.
    pub fn apply(&self, x: &[i64], l: u32) -> Vec<i64> {
        let inv = self.perm_inv();
        (0..self.k())
            .map(|i| x[inv[i]] + l as i64 * self.trans[i])
            .collect()
    }

    fn apply_generic(&self, p: &GenericPoint, l: u32) -> GenericPoint {
        let inv = self.perm_inv();
        GenericPoint {
            base: (0..self.k())
                .map(|i| p.base[inv[i]] + l as i64 * self.trans[i])
                .collect(),
            eps: (0..self.k()).map(|i| p.eps[inv[i]]).collect(),
        }
    }

    /// Group composition: (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &Self) -> Self {
        let inv = self.perm_inv();
        let k = self.k();
        AffineWeylElement {
            perm: (0..k).map(|i| self.perm[other.perm[i]]).collect(),
            trans: (0..k)
                .map(|i| other.trans[inv[i]] + self.trans[i])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let k = self.k();
        AffineWeylElement {
            perm: self.perm_inv(),
            trans: (0..k).map(|i| -self.trans[self.perm[i]]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.trans.iter().all(|&t| t == 0)
    }
}

/// The reflections in the walls of A+: index 0 is the affine reflection in
/// x_1 - x_k = l, index i (1 <= i <= k-1) the reflection in x_i - x_{i+1} = 0.
/// Empty for k = 1.
pub fn generators(ctx: Context) -> Vec<AffineWeylElement> {
    let k = ctx.k();
    if k < 2 {
        return Vec::new();
    }
    let mut gens = Vec::with_capacity(k);
    let mut perm: Vec<usize> = (0..k).collect();
    perm.swap(0, k - 1);
    let mut trans = vec![0i64; k];
    trans[0] = 1;
    trans[k - 1] = -1;
    gens.push(AffineWeylElement::new(perm, trans));
    for i in 1..k {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.swap(i - 1, i);
        gens.push(AffineWeylElement::new(perm, vec![0; k]));
    }
    gens
}

/// A point base + t·eps for an infinitesimal t > 0, used to compare
/// possibly-singular points against walls without leaving the integers.
#[derive(Clone, Debug)]
struct GenericPoint {
    base: Vec<i64>,
    eps: Vec<i64>,
}

impl GenericPoint {
    fn perturbed(x: &[i64]) -> Self {
        let k = x.len();
        GenericPoint {
            base: x.to_vec(),
            eps: (0..k).map(|i| (k - 1 - i) as i64).collect(),
        }
    }

    /// Sign of (x_i - x_j) - value.
    fn cmp_wall(&self, i: usize, j: usize, value: i64) -> Ordering {
        match (self.base[i] - self.base[j]).cmp(&value) {
            Ordering::Equal => (self.eps[i] - self.eps[j]).cmp(&0),
            ord => ord,
        }
    }
}

fn pair_index(i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * k - i * (i + 1) / 2 + (j - i - 1)
}

fn dmat_of(p: &GenericPoint, l: u32) -> Vec<i64> {
    let k = p.base.len();
    let l = l as i64;
    let mut d = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let diff = p.base[i] - p.base[j];
            let q = diff.div_euclid(l);
            let on_wall = diff.rem_euclid(l) == 0;
            if on_wall && p.eps[i] - p.eps[j] < 0 {
                d.push(q - 1);
            } else {
                d.push(q);
            }
        }
    }
    d
}

/// An alcove, identified by its floor matrix; the group element with
/// A = w·A+ rides along for the right action.
#[derive(Clone, Debug)]
pub struct Alcove {
    elem: AffineWeylElement,
    dmat: Vec<i64>,
    k: usize,
}

impl PartialEq for Alcove {
    fn eq(&self, other: &Self) -> bool {
        self.dmat == other.dmat
    }
}

impl Eq for Alcove {}

impl PartialOrd for Alcove {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Alcove {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dmat.cmp(&other.dmat)
    }
}

impl std::hash::Hash for Alcove {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dmat.hash(state);
    }
}

impl Alcove {
    /// The fundamental alcove A+ (all floors zero).
    pub fn fundamental(ctx: Context) -> Self {
        let k = ctx.k();
        Alcove {
            elem: AffineWeylElement::identity(k),
            dmat: vec![0; k * (k - 1) / 2],
            k,
        }
    }

    pub fn elem(&self) -> &AffineWeylElement {
        &self.elem
    }

    pub fn dmat(&self) -> &[i64] {
        &self.dmat
    }

    /// Floor d_{ij} for 0-based i < j.
    pub fn d(&self, i: usize, j: usize) -> i64 {
        self.dmat[pair_index(i, j, self.k)]
    }

    pub fn is_fundamental(&self) -> bool {
        self.dmat.iter().all(|&d| d == 0)
    }

    /// Contained in the open positive chamber (interior points strictly
    /// decreasing).
    pub fn in_positive_chamber(&self) -> bool {
        self.dmat.iter().all(|&d| d >= 0)
    }

    /// Number of hyperplanes separating the alcove from A+.
    pub fn separation_length(&self) -> i64 {
        self.dmat.iter().map(|d| d.abs()).sum()
    }
}

fn fundamental_base(k: usize) -> GenericPoint {
    GenericPoint::perturbed(&vec![0i64; k])
}

/// Recover the unique w with point ∈ w·A+ by greedy reflection in violated
/// walls of A+.
fn reduce_to_fundamental(point: &GenericPoint, ctx: Context) -> Result<AffineWeylElement> {
    let k = ctx.k();
    let l = ctx.l();
    let gens = generators(ctx);
    let mut y = point.clone();
    let mut w = AffineWeylElement::identity(k);
    let bound: i64 = dmat_of(point, l).iter().map(|d| d.abs()).sum::<i64>() + (k * k) as i64 + 8;
    for _ in 0..=bound {
        let mut violated = None;
        for i in 1..k {
            match y.cmp_wall(i - 1, i, 0) {
                Ordering::Less => {
                    violated = Some(i);
                    break;
                }
                Ordering::Equal => {
                    return Err(Error::Internal("generic point on a wall".into()));
                }
                Ordering::Greater => {}
            }
        }
        if violated.is_none() && k >= 2 {
            match y.cmp_wall(0, k - 1, l as i64) {
                Ordering::Greater => violated = Some(0),
                Ordering::Equal => {
                    return Err(Error::Internal("generic point on a wall".into()));
                }
                Ordering::Less => {}
            }
        }
        match violated {
            Some(s) => {
                y = gens[s].apply_generic(&y, l);
                w = w.compose(&gens[s]);
            }
            None => return Ok(w),
        }
    }
    Err(Error::Internal("alcove reduction did not terminate".into()))
}

fn alcove_of_generic(point: &GenericPoint, ctx: Context) -> Result<Alcove> {
    Ok(Alcove {
        elem: reduce_to_fundamental(point, ctx)?,
        dmat: dmat_of(point, ctx.l()),
        k: ctx.k(),
    })
}

/// The alcove containing a nonsingular integer point.
pub fn alcove_of_point(x: &[i64], ctx: Context) -> Result<Alcove> {
    assert_eq!(x.len(), ctx.k());
    let l = ctx.l() as i64;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if (x[i] - x[j]).rem_euclid(l) == 0 {
                return Err(Error::SingularPoint(x.to_vec()));
            }
        }
    }
    alcove_of_generic(&GenericPoint::perturbed(x), ctx)
}

/// The unique alcove containing x in its closure and lying on the positive
/// side of every hyperplane through x (δ-perturbation rule).
pub fn a_plus_of_point(x: &[i64], ctx: Context) -> Alcove {
    assert_eq!(x.len(), ctx.k());
    alcove_of_generic(&GenericPoint::perturbed(x), ctx).expect("perturbed point is never singular")
}

/// The alcove w·A+.
pub fn alcove_of_element(elem: &AffineWeylElement, ctx: Context) -> Alcove {
    let point = elem.apply_generic(&fundamental_base(ctx.k()), ctx.l());
    Alcove {
        elem: elem.clone(),
        dmat: dmat_of(&point, ctx.l()),
        k: ctx.k(),
    }
}

/// Which side of the shared wall A·s landed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// A·s is on the positive side of the separating hyperplane.
    Succ,
    /// A·s is on the negative side.
    Prec,
}

/// Right multiplication by the generator with the given index. Returns the
/// neighbour alcove, the side it lies on, and whether it stays in the
/// positive chamber.
pub fn right_multiply(a: &Alcove, s: usize, ctx: Context) -> (Alcove, Relation, bool) {
    let gens = generators(ctx);
    let elem = a.elem.compose(&gens[s]);
    let next = alcove_of_element(&elem, ctx);
    let mut changed = None;
    for (&da, &db) in a.dmat.iter().zip(next.dmat.iter()) {
        if da != db {
            assert!(
                changed.is_none(),
                "adjacent alcoves differ in one floor entry"
            );
            assert!((da - db).abs() == 1, "adjacent floors differ by one");
            changed = Some(db > da);
        }
    }
    let went_up = changed.expect("right multiplication moves to a distinct alcove");
    let rel = if went_up {
        Relation::Succ
    } else {
        Relation::Prec
    };
    let in_chamber = next.in_positive_chamber();
    (next, rel, in_chamber)
}

/// The face data of a point: the walls through it, and the floors of the
/// off-wall pairs. Invariant under simultaneous rescaling of the point and
/// the level, which is what the level-independence tests rely on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// (i, j, m) with x_i - x_j = m l, 0-based i < j.
    pub walls: Vec<(usize, usize, i64)>,
    /// (i, j, floor((x_i - x_j)/l)) for the remaining pairs.
    pub floors: Vec<(usize, usize, i64)>,
}

/// Compute the face signature of an integer point.
pub fn face_signature(x: &[i64], ctx: Context) -> Face {
    assert_eq!(x.len(), ctx.k());
    let l = ctx.l() as i64;
    let mut walls = Vec::new();
    let mut floors = Vec::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let diff = x[i] - x[j];
            if diff.rem_euclid(l) == 0 {
                walls.push((i, j, diff / l));
            } else {
                floors.push((i, j, diff.div_euclid(l)));
            }
        }
    }
    Face { walls, floors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn ctx(k: usize, l: u32) -> Context {
        Context::new(k, l).unwrap()
    }

    #[test]
    fn group_operations() {
        let c = ctx(2, 2);
        let gens = generators(c);
        let id = AffineWeylElement::identity(2);
        assert_eq!(id.apply(&[5, 3], 2), vec![5, 3]);
        assert_eq!(gens[0].apply(&[3, 0], 2), vec![2, 1]);
        for g in &gens {
            assert!(g.compose(&g.inverse()).is_identity());
            assert!(g.compose(g).is_identity());
        }
    }

    #[test]
    fn compose_matches_application_order() {
        let c = ctx(3, 2);
        let gens = generators(c);
        let x = vec![7, 3, 0];
        for a in &gens {
            for b in &gens {
                let ab = a.compose(b);
                assert_eq!(ab.apply(&x, 2), a.apply(&b.apply(&x, 2), 2));
            }
        }
    }

    #[test]
    fn alcove_of_point_examples() {
        let c = ctx(2, 2);
        assert!(alcove_of_point(&[2, 1], c).unwrap().is_fundamental());
        assert_eq!(alcove_of_point(&[3, 0], c).unwrap().dmat(), &[1]);
        assert!(alcove_of_point(&[2, 0], c).is_err());

        // For k = 3, l = 2 every integral point is singular on some pair,
        // so the diffs (3, 5, 2) resolve through positive-side rounding.
        let c3 = ctx(3, 2);
        assert!(alcove_of_point(&[5, 2, 0], c3).is_err());
        assert_eq!(a_plus_of_point(&[5, 2, 0], c3).dmat(), &[1, 2, 1]);
    }

    #[test]
    fn a_plus_examples() {
        let c = ctx(2, 2);
        assert_eq!(a_plus_of_point(&[2, 0], c).dmat(), &[1]);
        assert_eq!(
            a_plus_of_point(&[3, 0], c),
            alcove_of_point(&[3, 0], c).unwrap()
        );
        assert!(a_plus_of_point(&[1, 1], c).is_fundamental());
    }

    #[test]
    fn right_multiply_examples() {
        let c = ctx(2, 2);
        let aplus = Alcove::fundamental(c);
        let (_, _, in_chamber) = right_multiply(&aplus, 1, c);
        assert!(!in_chamber);

        let (up, rel, in_chamber) = right_multiply(&aplus, 0, c);
        assert_eq!(up.dmat(), &[1]);
        assert_eq!(rel, Relation::Succ);
        assert!(in_chamber);

        let (back, rel, _) = right_multiply(&up, 0, c);
        assert_eq!(back, aplus);
        assert_eq!(rel, Relation::Prec);
    }

    #[test]
    fn separation_length_examples() {
        let c = ctx(3, 2);
        assert_eq!(Alcove::fundamental(c).separation_length(), 0);
        assert_eq!(a_plus_of_point(&[5, 2, 0], c).separation_length(), 4);
        let c2 = ctx(2, 2);
        assert_eq!(alcove_of_point(&[3, 0], c2).unwrap().separation_length(), 1);
    }

    #[test]
    fn face_signature_examples() {
        let c = ctx(2, 2);
        let f = face_signature(&[2, 1], c);
        assert!(f.walls.is_empty());
        assert_eq!(f.floors, vec![(0, 1, 0)]);

        let f = face_signature(&[2, 0], c);
        assert_eq!(f.walls, vec![(0, 1, 1)]);

        let f4 = face_signature(&[4, 0], ctx(2, 4));
        assert_eq!(f, f4);
    }

    #[test]
    fn simply_transitive_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &(k, l) in &[(2usize, 2u32), (2, 3), (3, 3), (3, 5), (4, 5)] {
            let c = ctx(k, l);
            let gens = generators(c);
            let base: Vec<i64> = (0..k).map(|i| (k - 1 - i) as i64).collect();
            for _ in 0..50 {
                let mut w = AffineWeylElement::identity(k);
                for _ in 0..rng.gen_range(0..10) {
                    w = w.compose(&gens[rng.gen_range(0..gens.len())]);
                }
                let x = w.apply(&base, l);
                let rec = alcove_of_point(&x, c).unwrap();
                assert_eq!(rec.elem(), &w, "failed to recover {w:?}");
                assert_eq!(rec, alcove_of_element(&w, c));
            }
        }
    }

    #[test]
    fn a_plus_closure_contains_point() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let k = rng.gen_range(2..=4usize);
            let l = rng.gen_range(2..=5u32);
            let c = ctx(k, l);
            let mut x: Vec<i64> = (0..k).map(|_| rng.gen_range(0..3 * l as i64)).collect();
            x.sort_unstable_by(|a, b| b.cmp(a));
            let a = a_plus_of_point(&x, c);
            // Every wall of the alcove either avoids x or touches it with
            // the alcove on the positive side: floor(d) constraints hold
            // with equality allowed only from above.
            for i in 0..k {
                for j in i + 1..k {
                    let d = a.d(i, j);
                    let diff = x[i] - x[j];
                    let l = l as i64;
                    assert!(diff >= d * l && diff <= (d + 1) * l, "x outside closure");
                }
            }
        }
    }

    #[test]
    fn bruhat_step_changes_length_by_one() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for &(k, l) in &[(2usize, 2u32), (3, 2), (3, 3), (4, 3)] {
            let c = ctx(k, l);
            let mut a = Alcove::fundamental(c);
            for _ in 0..60 {
                let s = rng.gen_range(0..k);
                let (next, rel, in_chamber) = right_multiply(&a, s, c);
                if in_chamber {
                    let delta = next.separation_length() - a.separation_length();
                    match rel {
                        Relation::Succ => assert_eq!(delta, 1),
                        Relation::Prec => assert_eq!(delta, -1),
                    }
                    a = next;
                }
            }
        }
    }
}
