//! Exponent-compressed words for free groups and free products of cyclic groups.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

/// A maximal run `g^e` of one generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub generator: u32,
    pub exponent: i64,
}

impl Syllable {
    pub fn new(generator: u32, exponent: i64) -> Self {
        Syllable { generator, exponent }
    }
}

/// A reduced word. Adjacent syllables always use distinct generators and no
/// exponent is zero (or, for a finite-order generator, zero modulo its order).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(Vec<Syllable>);

/// Canonical exponent representative for a generator of order `m`: the value
/// in `(-m/2, m/2]` congruent to `e`, or 0.
pub(crate) fn normalize_exponent(e: i64, order: Option<u32>) -> i64 {
    match order {
        None => e,
        Some(m) => {
            let m = m as i64;
            let r = e.rem_euclid(m);
            if 2 * r > m {
                r - m
            } else {
                r
            }
        }
    }
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Letter length: the sum of absolute exponents.
    pub fn len(&self) -> usize {
        self.0.iter().map(|s| s.exponent.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Expanded letters as `(generator, inverted)`.
    pub fn letters(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.0.iter().flat_map(|s| {
            std::iter::repeat((s.generator, s.exponent < 0)).take(s.exponent.unsigned_abs() as usize)
        })
    }

    /// Builds the normal form of an arbitrary syllable sequence.
    pub(crate) fn reduced<I, F>(raw: I, order: F) -> Word
    where
        I: IntoIterator<Item = Syllable>,
        F: Fn(u32) -> Option<u32>,
    {
        let mut w = Word::identity();
        for s in raw {
            w.push(s, &order);
        }
        w
    }

    pub(crate) fn push<F>(&mut self, s: Syllable, order: &F)
    where
        F: Fn(u32) -> Option<u32>,
    {
        let ord = order(s.generator);
        let mut e = normalize_exponent(s.exponent, ord);
        if e == 0 {
            return;
        }
        if let Some(top) = self.0.last() {
            if top.generator == s.generator {
                e = normalize_exponent(top.exponent + e, ord);
                self.0.pop();
                if e == 0 {
                    return;
                }
            }
        }
        self.0.push(Syllable::new(s.generator, e));
    }

    pub(crate) fn concat<F>(&self, other: &Word, order: F) -> Word
    where
        F: Fn(u32) -> Option<u32>,
    {
        let mut w = self.clone();
        for s in &other.0 {
            w.push(*s, &order);
        }
        w
    }

    pub(crate) fn inverse<F>(&self, order: F) -> Word
    where
        F: Fn(u32) -> Option<u32>,
    {
        Word(
            self.0
                .iter()
                .rev()
                .map(|s| Syllable::new(s.generator, normalize_exponent(-s.exponent, order(s.generator))))
                .collect(),
        )
    }

    pub(crate) fn from_reduced(syllables: Vec<Syllable>) -> Word {
        Word(syllables)
    }
}

fn letter_key((g, inv): (u32, bool)) -> (u32, bool) {
    (g, inv)
}

/// Shortlex: shorter words first, then lexicographic on letters ordered
/// `a < a^-1 < b < b^-1 < ...`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            self.letters()
                .map(letter_key)
                .cmp(other.letters().map(letter_key))
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(_: u32) -> Option<u32> {
        None
    }

    #[test]
    fn exponent_normalization() {
        assert_eq!(normalize_exponent(3, Some(2)), 1);
        assert_eq!(normalize_exponent(-1, Some(2)), 1);
        assert_eq!(normalize_exponent(2, Some(3)), -1);
        assert_eq!(normalize_exponent(-2, Some(4)), 2);
        assert_eq!(normalize_exponent(6, Some(3)), 0);
        assert_eq!(normalize_exponent(-7, None), -7);
    }

    #[test]
    fn cancellation_cascades() {
        let raw = [
            Syllable::new(0, 1),
            Syllable::new(1, 1),
            Syllable::new(1, -1),
            Syllable::new(0, 1),
        ];
        let w = Word::reduced(raw, free);
        assert_eq!(w.syllables(), &[Syllable::new(0, 2)]);
        let w = Word::reduced([Syllable::new(0, 1), Syllable::new(0, -1)], free);
        assert!(w.is_identity());
    }

    #[test]
    fn shortlex_order() {
        let a = Word::from_reduced(vec![Syllable::new(0, 1)]);
        let ai = Word::from_reduced(vec![Syllable::new(0, -1)]);
        let b = Word::from_reduced(vec![Syllable::new(1, 1)]);
        let aa = Word::from_reduced(vec![Syllable::new(0, 2)]);
        let mut v = vec![aa.clone(), b.clone(), ai.clone(), Word::identity(), a.clone()];
        v.sort();
        assert_eq!(v, vec![Word::identity(), a, ai, b, aa]);
    }
}
