//! Words in free generators with integer or p-adic exponents.
//!
//! Commutators are `[a, b] = a b a^-1 b^-1` and conjugation is `^a b = a b a^-1`.

use std::fmt;

use crate::padic::TruncatedPAdic;

pub trait Exponent: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn is_one(&self) -> bool;
}

impl Exponent for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn plus(&self, other: &Self) -> Self {
        self.checked_add(*other).expect("word exponent overflow")
    }
    fn negated(&self) -> Self {
        -self
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
}

impl Exponent for TruncatedPAdic {
    fn is_zero(&self) -> bool {
        TruncatedPAdic::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        *self + *other
    }
    fn negated(&self) -> Self {
        -*self
    }
    fn is_one(&self) -> bool {
        self.value() == 1
    }
}

/// A freely reduced word: no zero exponents, no two adjacent syllables in the same generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupWord<E> {
    syllables: Vec<(usize, E)>,
}

impl<E: Exponent> Default for GroupWord<E> {
    fn default() -> Self {
        GroupWord { syllables: Vec::new() }
    }
}

impl<E: Exponent> GroupWord<E> {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn letter(generator: usize, exponent: E) -> Self {
        Self::from_syllables([(generator, exponent)])
    }

    pub fn from_syllables(syllables: impl IntoIterator<Item = (usize, E)>) -> Self {
        let mut w = Self::identity();
        for (g, e) in syllables {
            w.push(g, e);
        }
        w
    }

    /// Appends one syllable, merging and cancelling against the end of the word.
    pub fn push(&mut self, generator: usize, exponent: E) {
        if exponent.is_zero() {
            return;
        }
        if let Some((last, e)) = self.syllables.last_mut() {
            if *last == generator {
                let sum = e.plus(&exponent);
                if sum.is_zero() {
                    self.syllables.pop();
                } else {
                    *e = sum;
                }
                return;
            }
        }
        self.syllables.push((generator, exponent));
    }

    pub fn syllables(&self) -> &[(usize, E)] {
        &self.syllables
    }

    pub fn into_syllables(self) -> Vec<(usize, E)> {
        self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut w = self.clone();
        for (g, e) in &other.syllables {
            w.push(*g, e.clone());
        }
        w
    }

    pub fn inverse(&self) -> Self {
        Self::from_syllables(self.syllables.iter().rev().map(|(g, e)| (*g, e.negated())))
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Self::identity(), |acc, _| acc.mul(&base))
    }

    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// `a w a^-1`.
    pub fn conjugate_by(&self, a: &Self) -> Self {
        a.mul(self).mul(&a.inverse())
    }

    /// Sum of exponents per generator, mapped through `f`.
    pub fn exponent_sums<T: Clone>(&self, generators: usize, zero: T, add: impl Fn(&T, &E) -> T) -> Vec<T> {
        let mut out = vec![zero; generators];
        for (g, e) in &self.syllables {
            out[*g] = add(&out[*g], e);
        }
        out
    }

    /// Space-separated rendering such as `x y^-1 z^4`; `1` for the identity.
    pub fn render(&self, names: &[impl AsRef<str>]) -> String {
        if self.is_identity() {
            return "1".into();
        }
        self.syllables
            .iter()
            .map(|(g, e)| {
                let n = names[*g].as_ref();
                if e.is_one() {
                    n.to_string()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduction_merges_and_cancels() {
        let w = GroupWord::from_syllables([(0, 2i64), (0, -2), (1, 1), (1, 3), (2, 0)]);
        assert_eq!(w.syllables(), &[(1, 4)]);
        let names = ["x", "y", "z"];
        let c = GroupWord::commutator(&GroupWord::letter(0, 1i64), &GroupWord::letter(1, 1));
        assert_eq!(c.render(&names), "x y x^-1 y^-1");
        assert_eq!(GroupWord::<i64>::identity().render(&names), "1");
    }

    proptest! {
        #[test]
        fn word_times_inverse_is_empty(raw in prop::collection::vec((0usize..4, -5i64..=5), 0..30)) {
            let w = GroupWord::from_syllables(raw);
            prop_assert!(w.mul(&w.inverse()).is_identity());
            prop_assert!(w.inverse().mul(&w).is_identity());
            prop_assert!(w.syllables().windows(2).all(|p| p[0].0 != p[1].0));
        }

        #[test]
        fn multiplication_is_associative(
            a in prop::collection::vec((0usize..3, -3i64..=3), 0..10),
            b in prop::collection::vec((0usize..3, -3i64..=3), 0..10),
            c in prop::collection::vec((0usize..3, -3i64..=3), 0..10),
        ) {
            let (a, b, c) = (GroupWord::from_syllables(a), GroupWord::from_syllables(b), GroupWord::from_syllables(c));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}
