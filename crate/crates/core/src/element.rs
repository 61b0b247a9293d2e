//! Points of the domain lattice `E` and of the codomain `F = R^m`.
//!
//! Two concrete models are supported: finite vectors `R^n` and eventually
//! constant sequences, stored as an explicit prefix followed by a constant
//! tail. The sequence form is kept canonical (the last prefix entry never
//! equals the tail) so that structural equality is sequence equality.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Hard cap on enumerated fragment slots (2^cap fragments).
pub const MAX_FRAGMENT_SLOTS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Finite(usize),
    EcSeq,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Finite(n) => write!(f, "finite:{n}"),
            Model::EcSeq => f.write_str("ecseq"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Finite(Vec<Rational>),
    EcSeq { prefix: Vec<Rational>, tail: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeElement(Repr);

impl LatticeElement {
    pub fn finite(coords: Vec<Rational>) -> Self {
        LatticeElement(Repr::Finite(coords))
    }

    /// Builds an eventually constant sequence, canonicalizing the prefix.
    pub fn ec_seq(mut prefix: Vec<Rational>, tail: Rational) -> Self {
        while prefix.last().is_some_and(|last| *last == tail) {
            prefix.pop();
        }
        LatticeElement(Repr::EcSeq { prefix, tail })
    }

    pub fn zero(model: Model) -> Self {
        match model {
            Model::Finite(n) => Self::finite(vec![Rational::zero(); n]),
            Model::EcSeq => Self::ec_seq(Vec::new(), Rational::zero()),
        }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::finite(coords.iter().map(|&c| rational::int(c)).collect())
    }

    pub fn model(&self) -> Model {
        match &self.0 {
            Repr::Finite(v) => Model::Finite(v.len()),
            Repr::EcSeq { .. } => Model::EcSeq,
        }
    }

    pub fn as_finite(&self) -> Option<&[Rational]> {
        match &self.0 {
            Repr::Finite(v) => Some(v),
            Repr::EcSeq { .. } => None,
        }
    }

    /// Coordinates of a finite vector. Panics on sequences.
    pub fn coords(&self) -> &[Rational] {
        self.as_finite().expect("finite vector expected")
    }

    pub fn prefix(&self) -> Option<&[Rational]> {
        match &self.0 {
            Repr::EcSeq { prefix, .. } => Some(prefix),
            Repr::Finite(_) => None,
        }
    }

    pub fn tail(&self) -> Option<&Rational> {
        match &self.0 {
            Repr::EcSeq { tail, .. } => Some(tail),
            Repr::Finite(_) => None,
        }
    }

    /// Number of explicitly stored coordinates.
    pub fn explicit_len(&self) -> usize {
        match &self.0 {
            Repr::Finite(v) => v.len(),
            Repr::EcSeq { prefix, .. } => prefix.len(),
        }
    }

    /// Coordinate `i` (0-based). Sequences answer the tail past the prefix.
    pub fn coord(&self, i: usize) -> &Rational {
        match &self.0 {
            Repr::Finite(v) => &v[i],
            Repr::EcSeq { prefix, tail } => prefix.get(i).unwrap_or(tail),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Finite(v) => v.iter().all(Zero::is_zero),
            Repr::EcSeq { prefix, tail } => prefix.is_empty() && tail.is_zero(),
        }
    }

    pub fn same_model(&self, other: &Self) -> Result<()> {
        if self.model() == other.model() {
            Ok(())
        } else {
            Err(Error::ModelMismatch {
                left: self.model().to_string(),
                right: other.model().to_string(),
            })
        }
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        match &self.0 {
            Repr::Finite(v) => Self::finite(v.iter().map(f).collect()),
            Repr::EcSeq { prefix, tail } => Self::ec_seq(prefix.iter().map(&f).collect(), f(tail)),
        }
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self> {
        self.same_model(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Finite(a), Repr::Finite(b)) => {
                Self::finite(a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            }
            _ => {
                let len = self.explicit_len().max(other.explicit_len());
                let prefix = (0..len).map(|i| f(self.coord(i), other.coord(i))).collect();
                Self::ec_seq(prefix, f(self.tail().unwrap(), other.tail().unwrap()))
            }
        })
    }

    fn all_pairs(&self, other: &Self, pred: impl Fn(&Rational, &Rational) -> bool) -> Result<bool> {
        self.same_model(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Finite(a), Repr::Finite(b)) => a.iter().zip(b).all(|(x, y)| pred(x, y)),
            _ => {
                let len = self.explicit_len().max(other.explicit_len());
                (0..len).all(|i| pred(self.coord(i), other.coord(i)))
                    && pred(self.tail().unwrap(), other.tail().unwrap())
            }
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn abs(&self) -> Self {
        self.map(|a| a.abs())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|a| a * c)
    }

    /// Coordinatewise maximum.
    pub fn sup(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.max(b).clone())
    }

    /// Coordinatewise minimum.
    pub fn inf(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.min(b).clone())
    }

    /// `self <= other` in the coordinatewise order.
    pub fn le(&self, other: &Self) -> Result<bool> {
        self.all_pairs(other, |a, b| a <= b)
    }

    pub fn is_nonnegative(&self) -> bool {
        let zero = Self::zero(self.model());
        zero.le(self).unwrap_or(false)
    }

    /// Keeps coordinates where `keep(i)` holds for `i < resolution`, and the
    /// tail when `keep_tail`. Finite vectors ignore `keep_tail`.
    fn restrict(&self, keep: impl Fn(usize) -> bool, resolution: usize, keep_tail: bool) -> Self {
        match &self.0 {
            Repr::Finite(v) => Self::finite(
                v.iter()
                    .enumerate()
                    .map(|(i, c)| if keep(i) { c.clone() } else { Rational::zero() })
                    .collect(),
            ),
            Repr::EcSeq { tail, .. } => {
                let prefix = (0..resolution)
                    .map(|i| if keep(i) { self.coord(i).clone() } else { Rational::zero() })
                    .collect();
                let t = if keep_tail { tail.clone() } else { Rational::zero() };
                Self::ec_seq(prefix, t)
            }
        }
    }

    /// The element itself with every coordinate past `k` and the tail zeroed.
    pub fn truncate(&self, k: usize) -> Self {
        match &self.0 {
            Repr::Finite(_) => self.restrict(|i| i < k, 0, false),
            Repr::EcSeq { .. } => self.restrict(|_| true, k, false),
        }
    }
}

impl fmt::Display for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Finite(v) => write!(f, "({})", rational::format_vec(v)),
            Repr::EcSeq { prefix, tail } => {
                write!(f, "({} | {})", rational::format_vec(prefix), rational::format(tail))
            }
        }
    }
}

impl Add for &LatticeElement {
    type Output = LatticeElement;

    fn add(self, rhs: &LatticeElement) -> LatticeElement {
        self.try_add(rhs).expect("lattice model mismatch in addition")
    }
}

impl Sub for &LatticeElement {
    type Output = LatticeElement;

    fn sub(self, rhs: &LatticeElement) -> LatticeElement {
        self.try_sub(rhs).expect("lattice model mismatch in subtraction")
    }
}

impl Neg for &LatticeElement {
    type Output = LatticeElement;

    fn neg(self) -> LatticeElement {
        self.map(|a| -a)
    }
}

/// `|x| ∧ |y| = 0`.
pub fn disjoint(x: &LatticeElement, y: &LatticeElement) -> Result<bool> {
    x.all_pairs(y, |a, b| a.is_zero() || b.is_zero())
}

/// `z ⊑ x`, i.e. `z ⊥ (x - z)`.
pub fn is_fragment(z: &LatticeElement, x: &LatticeElement) -> Result<bool> {
    disjoint(z, &x.try_sub(z)?)
}

fn check_resolution(x: &LatticeElement, resolution: usize) -> Result<()> {
    if x.model() == Model::EcSeq && resolution < x.explicit_len() {
        return Err(Error::ResolutionTooSmall { resolution, prefix_len: x.explicit_len() });
    }
    Ok(())
}

/// All fragments of `x`. Sequences are enumerated at `resolution`: each of
/// the first `resolution` coordinates and the tail is either kept or zeroed.
///
/// Only nonzero coordinates are branched on, so the result has no duplicates.
/// Order: bitmask over nonzero slots ascending, so `0` comes first and `x` last.
pub fn fragments(x: &LatticeElement, resolution: usize) -> Result<Vec<LatticeElement>> {
    check_resolution(x, resolution)?;
    let span = match x.model() {
        Model::Finite(n) => n,
        Model::EcSeq => resolution,
    };
    let slots: Vec<usize> = (0..span).filter(|&i| !x.coord(i).is_zero()).collect();
    let tail_slot = x.tail().is_some_and(|t| !t.is_zero());
    let total = slots.len() + usize::from(tail_slot);
    if total > MAX_FRAGMENT_SLOTS {
        return Err(Error::TooManyFragments { slots: total });
    }
    let mut out = Vec::with_capacity(1 << total);
    for bits in 0u64..(1u64 << total) {
        let keep = |i: usize| {
            slots
                .iter()
                .position(|&s| s == i)
                .is_some_and(|k| bits >> k & 1 == 1)
        };
        let keep_tail = tail_slot && bits >> slots.len() & 1 == 1;
        out.push(x.restrict(keep, span, keep_tail));
    }
    Ok(out)
}

/// Every decomposition `f = g + h` with `g ⊥ h`.
pub fn disjoint_partitions(
    f: &LatticeElement,
    resolution: usize,
) -> Result<Vec<(LatticeElement, LatticeElement)>> {
    Ok(fragments(f, resolution)?
        .into_iter()
        .map(|g| {
            let h = f - &g;
            (g, h)
        })
        .collect())
}

/// Splits a fragment `z` of `x + y` (with `x ⊥ y`) into fragments of `x` and
/// of `y` by support.
pub fn fragment_split(
    z: &LatticeElement,
    x: &LatticeElement,
    y: &LatticeElement,
) -> Result<(LatticeElement, LatticeElement)> {
    if !disjoint(x, y)? {
        return Err(Error::NotDisjoint);
    }
    if !is_fragment(z, &x.try_add(y)?)? {
        return Err(Error::NotFragment);
    }
    let z1 = z.zip_with(x, |zc, xc| if xc.is_zero() { Rational::zero() } else { zc.clone() })?;
    let z2 = z - &z1;
    Ok((z1, z2))
}

/// An increasing chain of fragments `e_1 ⊑ e_2 ⊑ ... ⊑ target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FragmentChain {
    steps: Vec<LatticeElement>,
    target: LatticeElement,
}

impl FragmentChain {
    pub fn new(steps: Vec<LatticeElement>, target: LatticeElement) -> Result<Self> {
        for (k, step) in steps.iter().enumerate() {
            if !is_fragment(step, &target)? {
                return Err(Error::NotFragment);
            }
            if let Some(next) = steps.get(k + 1) {
                if !is_fragment(step, next)? {
                    return Err(Error::NotFragment);
                }
            }
        }
        Ok(FragmentChain { steps, target })
    }

    /// Truncations `e^(0) ⊑ e^(1) ⊑ ... ⊑ e^(N)`: first `k` coordinates of
    /// `target`, everything else zero. For finite vectors `N = n`, so the
    /// chain ends at the target itself.
    pub fn prefix_chain(target: &LatticeElement, resolution: usize) -> Result<Self> {
        check_resolution(target, resolution)?;
        let len = match target.model() {
            Model::Finite(n) => n,
            Model::EcSeq => resolution,
        };
        let steps = (0..=len).map(|k| target.truncate(k)).collect();
        Self::new(steps, target.clone())
    }

    /// The constant chain sitting at the target.
    pub fn constant(target: &LatticeElement) -> Self {
        FragmentChain { steps: vec![target.clone()], target: target.clone() }
    }

    pub fn steps(&self) -> &[LatticeElement] {
        &self.steps
    }

    pub fn target(&self) -> &LatticeElement {
        &self.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn v(c: &[i64]) -> LatticeElement {
        LatticeElement::from_ints(c)
    }

    fn seq(prefix: &[i64], tail: i64) -> LatticeElement {
        LatticeElement::ec_seq(prefix.iter().map(|&c| int(c)).collect(), int(tail))
    }

    #[test]
    fn disjoint_examples() {
        assert!(disjoint(&v(&[1, 0]), &v(&[0, 2])).unwrap());
        assert!(!disjoint(&v(&[1, 1]), &v(&[0, 2])).unwrap());
        assert!(!disjoint(&seq(&[], 1), &seq(&[5], 0)).unwrap());
        assert!(disjoint(&seq(&[0, 0], 1), &seq(&[5], 0)).unwrap());
        assert!(disjoint(&v(&[1]), &v(&[0, 0])).is_err());
        assert!(disjoint(&v(&[1]), &seq(&[], 0)).is_err());
    }

    #[test]
    fn fragment_examples() {
        assert!(is_fragment(&v(&[1, 0]), &v(&[1, 2])).unwrap());
        assert!(!is_fragment(&v(&[1, 1]), &v(&[1, 2])).unwrap());
        let x = v(&[3, -1]);
        assert!(is_fragment(&x, &x).unwrap());
        assert!(is_fragment(&v(&[0, 0]), &x).unwrap());
    }

    #[test]
    fn fragments_enumeration() {
        let f = fragments(&v(&[1, 2]), 0).unwrap();
        assert_eq!(f, vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 2]), v(&[1, 2])]);
        assert_eq!(fragments(&v(&[1, 0]), 0).unwrap(), vec![v(&[0, 0]), v(&[1, 0])]);
    }

    #[test]
    fn sequence_fragments_at_resolution() {
        let x = seq(&[3], 2);
        let f = fragments(&x, 2).unwrap();
        assert_eq!(f.len(), 8);
        for z in &f {
            assert!(is_fragment(z, &x).unwrap());
            assert!([int(0), int(3)].contains(z.coord(0)));
            assert!([int(0), int(2)].contains(z.coord(1)));
            assert!([int(0), int(2)].contains(z.tail().unwrap()));
        }
        let distinct: std::collections::HashSet<_> = f.iter().collect();
        assert_eq!(distinct.len(), 8);
        assert!(matches!(
            fragments(&seq(&[1, 2, 3], 0), 2),
            Err(Error::ResolutionTooSmall { .. })
        ));
    }

    #[test]
    fn partitions_of_element() {
        let p = disjoint_partitions(&v(&[1, 2]), 0).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.contains(&(v(&[1, 0]), v(&[0, 2]))));
        assert_eq!(disjoint_partitions(&v(&[0, 0]), 0).unwrap(), vec![(v(&[0, 0]), v(&[0, 0]))]);
        let single = disjoint_partitions(&v(&[5]), 0).unwrap();
        assert_eq!(single, vec![(v(&[0]), v(&[5])), (v(&[5]), v(&[0]))]);
    }

    #[test]
    fn split_examples() {
        let (a, b) = fragment_split(&v(&[1, 0, 3]), &v(&[1, 0, 0]), &v(&[0, 0, 3])).unwrap();
        assert_eq!((a, b), (v(&[1, 0, 0]), v(&[0, 0, 3])));
        let (a, b) = fragment_split(&v(&[0, 0, 0]), &v(&[1, 0, 0]), &v(&[0, 0, 3])).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let (a, b) = fragment_split(&v(&[1, 0, 0]), &v(&[1, 2, 0]), &v(&[0, 0, 7])).unwrap();
        assert_eq!((a, b), (v(&[1, 0, 0]), v(&[0, 0, 0])));
        assert_eq!(
            fragment_split(&v(&[1, 0]), &v(&[1, 1]), &v(&[0, 1])),
            Err(Error::NotDisjoint)
        );
        assert_eq!(
            fragment_split(&v(&[2, 0]), &v(&[1, 0]), &v(&[0, 1])),
            Err(Error::NotFragment)
        );
    }

    #[test]
    fn sequence_canonical_form() {
        assert_eq!(seq(&[1, 2, 2, 2], 2), seq(&[1], 2));
        assert_eq!(seq(&[0, 0], 0), LatticeElement::zero(Model::EcSeq));
        assert_eq!(seq(&[1, 2, 2], 2).prefix().unwrap().len(), 1);
        let sum = &seq(&[1], 1) + &seq(&[-1], 0);
        assert_eq!(sum, seq(&[0], 1));
        assert_eq!(&seq(&[2], 1) + &seq(&[-1], 0), seq(&[], 1));
    }

    #[test]
    fn order_and_lattice_ops() {
        let a = LatticeElement::finite(vec![ratio(1, 2), int(-1)]);
        let b = v(&[0, 3]);
        assert_eq!(a.sup(&b).unwrap(), LatticeElement::finite(vec![ratio(1, 2), int(3)]));
        assert_eq!(a.inf(&b).unwrap(), v(&[0, -1]));
        assert!(!a.le(&b).unwrap());
        assert!(a.inf(&b).unwrap().le(&a).unwrap());
    }

    #[test]
    fn chains() {
        let e = seq(&[5, 0, 2], 3);
        let chain = FragmentChain::prefix_chain(&e, 4).unwrap();
        assert_eq!(chain.steps().len(), 5);
        assert_eq!(chain.steps()[4], seq(&[5, 0, 2, 3], 0));
        assert!(FragmentChain::new(vec![v(&[1, 1])], v(&[1, 0])).is_err());
        let fin = FragmentChain::prefix_chain(&v(&[1, 2]), 0).unwrap();
        assert_eq!(fin.steps().last().unwrap(), &v(&[1, 2]));
    }
}
