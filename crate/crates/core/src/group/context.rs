use num::BigInt;
use serde::{Deserialize, Serialize};

use super::automorphism::GroupAutomorphism;
use super::element::GroupElement;
use super::matrix::IntMatrix;
use super::word::{Syllable, Word};
use crate::error::{input, Error, Result};

/// The ambient group Γ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupContext {
    /// Free group on `rank` generators.
    Free { rank: u32 },
    /// Free product of cyclic groups; `None` is an infinite cyclic factor.
    FreeProduct { orders: Vec<Option<u32>> },
    /// Direct product of the factors.
    Direct { factors: Vec<GroupContext> },
    /// `base ⋊ ℤ/k` where the generator of `ℤ/k` acts by `automorphism` of order `k`.
    Semidirect { automorphism: Box<GroupAutomorphism> },
    /// `SL(dim, ℤ)`.
    SpecialLinear { dim: usize },
}

impl GroupContext {
    pub fn free(rank: u32) -> Result<Self> {
        if rank == 0 {
            return input("free group rank must be at least 1");
        }
        Ok(GroupContext::Free { rank })
    }

    pub fn free_product(orders: Vec<Option<u32>>) -> Result<Self> {
        if orders.is_empty() {
            return input("free product needs at least one factor");
        }
        if orders.iter().any(|o| matches!(o, Some(m) if *m < 2)) {
            return input("finite factor orders must be at least 2");
        }
        Ok(GroupContext::FreeProduct { orders })
    }

    pub fn direct(factors: Vec<GroupContext>) -> Result<Self> {
        if factors.len() < 2 {
            return input("direct product needs at least two factors");
        }
        Ok(GroupContext::Direct { factors })
    }

    /// `Λ^k`.
    pub fn power(factor: GroupContext, k: usize) -> Result<Self> {
        Self::direct(vec![factor; k])
    }

    pub fn semidirect(automorphism: GroupAutomorphism) -> Result<Self> {
        if matches!(automorphism.context(), GroupContext::Semidirect { .. }) {
            return Err(Error::Unsupported("iterated semidirect products".into()));
        }
        Ok(GroupContext::Semidirect { automorphism: Box::new(automorphism) })
    }

    pub fn special_linear(dim: usize) -> Result<Self> {
        if dim < 2 {
            return input("matrix dimension must be at least 2");
        }
        Ok(GroupContext::SpecialLinear { dim })
    }

    /// `ℤ * ℤ/2`, generators `a` (infinite order) and `b` (order 2).
    pub fn z_star_z2() -> Self {
        GroupContext::FreeProduct { orders: vec![None, Some(2)] }
    }

    /// Number of word generators for free and free-product contexts.
    pub fn word_rank(&self) -> Option<u32> {
        match self {
            GroupContext::Free { rank } => Some(*rank),
            GroupContext::FreeProduct { orders } => Some(orders.len() as u32),
            _ => None,
        }
    }

    pub(crate) fn generator_order(&self, g: u32) -> Option<u32> {
        match self {
            GroupContext::FreeProduct { orders } => orders.get(g as usize).copied().flatten(),
            _ => None,
        }
    }

    pub(crate) fn order_fn(&self) -> impl Fn(u32) -> Option<u32> + '_ {
        move |g| self.generator_order(g)
    }

    pub fn semidirect_parts(&self) -> Option<(&GroupContext, &GroupAutomorphism)> {
        match self {
            GroupContext::Semidirect { automorphism } => Some((automorphism.context(), automorphism)),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupContext::Free { .. } | GroupContext::FreeProduct { .. } => GroupElement::Word(Word::identity()),
            GroupContext::Direct { factors } => GroupElement::Tuple(factors.iter().map(|f| f.identity()).collect()),
            GroupContext::Semidirect { automorphism } => GroupElement::Twisted {
                base: Box::new(automorphism.context().identity()),
                twist: 0,
            },
            GroupContext::SpecialLinear { dim } => GroupElement::Matrix(IntMatrix::identity(*dim)),
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    /// The `i`-th standard generator `a_{i+1}` of a word context.
    pub fn generator(&self, i: u32) -> Result<GroupElement> {
        self.reduce(&[Syllable::new(i, 1)])
    }

    /// Normal form of a raw syllable sequence in a word context.
    pub fn reduce(&self, raw: &[Syllable]) -> Result<GroupElement> {
        let rank = self
            .word_rank()
            .ok_or_else(|| Error::Unsupported("word reduction needs a free or free-product context".into()))?;
        if let Some(s) = raw.iter().find(|s| s.generator >= rank) {
            return input(format!("unknown generator index {} (rank {rank})", s.generator));
        }
        Ok(GroupElement::Word(Word::reduced(raw.iter().copied(), self.order_fn())))
    }

    /// Checks that `g` is a well-formed normal-form element of this context.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        let bad = |what: &str| Err(Error::ContextMismatch(format!("{what} is not an element of {}", self.describe())));
        match (self, g) {
            (GroupContext::Free { .. } | GroupContext::FreeProduct { .. }, GroupElement::Word(w)) => {
                let rank = self.word_rank().unwrap_or(0);
                let s = w.syllables();
                let ok = s.iter().all(|x| {
                    x.generator < rank
                        && x.exponent != 0
                        && super::word::normalize_exponent(x.exponent, self.generator_order(x.generator)) == x.exponent
                }) && s.windows(2).all(|p| p[0].generator != p[1].generator);
                if ok {
                    Ok(())
                } else {
                    bad("word")
                }
            }
            (GroupContext::Direct { factors }, GroupElement::Tuple(v)) if v.len() == factors.len() => {
                factors.iter().zip(v).try_for_each(|(f, x)| f.check(x))
            }
            (GroupContext::Semidirect { automorphism }, GroupElement::Twisted { base, twist })
                if *twist < automorphism.order() =>
            {
                automorphism.context().check(base)
            }
            (GroupContext::SpecialLinear { dim }, GroupElement::Matrix(m)) if m.dim() == *dim => {
                if m.determinant() == BigInt::from(1) {
                    Ok(())
                } else {
                    bad("matrix with determinant != 1")
                }
            }
            _ => bad("element"),
        }
    }

    /// Product `xy`; both operands are checked first.
    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        self.op(x, y)
    }

    pub fn inv(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.inverse(x)
    }

    /// `s g s⁻¹`.
    pub fn conj(&self, s: &GroupElement, g: &GroupElement) -> Result<GroupElement> {
        self.check(s)?;
        self.check(g)?;
        let sg = self.op(s, g)?;
        self.op(&sg, &self.inverse(s)?)
    }

    /// `s⁻¹ g s`, the convention of the conjugation action on states.
    pub fn conj_inv(&self, s: &GroupElement, g: &GroupElement) -> Result<GroupElement> {
        let si = self.inverse(s)?;
        let t = self.op(&si, g)?;
        self.op(&t, s)
    }

    pub fn pow(&self, x: &GroupElement, e: i64) -> Result<GroupElement> {
        let base = if e < 0 { self.inverse(x)? } else { x.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.op(&acc, &sq)?;
            }
            n >>= 1;
            if n > 0 {
                sq = self.op(&sq, &sq)?;
            }
        }
        Ok(acc)
    }

    /// Product without membership checks; callers guarantee well-formed inputs.
    pub(crate) fn op(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        match (self, x, y) {
            (GroupContext::Free { .. } | GroupContext::FreeProduct { .. }, GroupElement::Word(a), GroupElement::Word(b)) => {
                Ok(GroupElement::Word(a.concat(b, self.order_fn())))
            }
            (GroupContext::Direct { factors }, GroupElement::Tuple(a), GroupElement::Tuple(b)) => Ok(GroupElement::Tuple(
                factors
                    .iter()
                    .zip(a.iter().zip(b))
                    .map(|(f, (p, q))| f.op(p, q))
                    .collect::<Result<_>>()?,
            )),
            (
                GroupContext::Semidirect { automorphism },
                GroupElement::Twisted { base: w1, twist: e1 },
                GroupElement::Twisted { base: w2, twist: e2 },
            ) => {
                let k = automorphism.order();
                let twisted = automorphism.apply_power(w2, *e1)?;
                Ok(GroupElement::Twisted {
                    base: Box::new(automorphism.context().op(w1, &twisted)?),
                    twist: (e1 + e2) % k,
                })
            }
            (GroupContext::SpecialLinear { .. }, GroupElement::Matrix(a), GroupElement::Matrix(b)) => {
                Ok(GroupElement::Matrix(a.mul(b)?))
            }
            _ => Err(Error::ContextMismatch(format!("operands do not belong to {}", self.describe()))),
        }
    }

    pub(crate) fn inverse(&self, x: &GroupElement) -> Result<GroupElement> {
        match (self, x) {
            (GroupContext::Free { .. } | GroupContext::FreeProduct { .. }, GroupElement::Word(w)) => {
                Ok(GroupElement::Word(w.inverse(self.order_fn())))
            }
            (GroupContext::Direct { factors }, GroupElement::Tuple(v)) => Ok(GroupElement::Tuple(
                factors.iter().zip(v).map(|(f, p)| f.inverse(p)).collect::<Result<_>>()?,
            )),
            (GroupContext::Semidirect { automorphism }, GroupElement::Twisted { base, twist }) => {
                // (w, e)^-1 = (σ^{-e}(w^-1), -e)
                let k = automorphism.order();
                let back = (k - twist % k) % k;
                let wi = automorphism.context().inverse(base)?;
                Ok(GroupElement::Twisted {
                    base: Box::new(automorphism.apply_power(&wi, back)?),
                    twist: back,
                })
            }
            (GroupContext::SpecialLinear { .. }, GroupElement::Matrix(m)) => Ok(GroupElement::Matrix(m.inverse_unimodular()?)),
            _ => Err(Error::ContextMismatch(format!("operand does not belong to {}", self.describe()))),
        }
    }

    /// Standard generating set (without inverses).
    pub fn generators(&self) -> Vec<GroupElement> {
        match self {
            GroupContext::Free { rank } => (0..*rank)
                .map(|i| GroupElement::Word(Word::from_reduced(vec![Syllable::new(i, 1)])))
                .collect(),
            GroupContext::FreeProduct { orders } => (0..orders.len() as u32)
                .map(|i| GroupElement::Word(Word::from_reduced(vec![Syllable::new(i, 1)])))
                .collect(),
            GroupContext::Direct { factors } => {
                let ids: Vec<GroupElement> = factors.iter().map(|f| f.identity()).collect();
                factors
                    .iter()
                    .enumerate()
                    .flat_map(|(i, f)| {
                        let ids = ids.clone();
                        f.generators().into_iter().map(move |g| {
                            let mut v = ids.clone();
                            v[i] = g;
                            GroupElement::Tuple(v)
                        })
                    })
                    .collect()
            }
            GroupContext::Semidirect { automorphism } => {
                let base = automorphism.context();
                let mut gens: Vec<GroupElement> = base
                    .generators()
                    .into_iter()
                    .map(|g| GroupElement::Twisted { base: Box::new(g), twist: 0 })
                    .collect();
                gens.push(GroupElement::Twisted { base: Box::new(base.identity()), twist: 1 });
                gens
            }
            GroupContext::SpecialLinear { dim } => {
                let d = *dim;
                (0..d)
                    .flat_map(|i| (0..d).filter(move |&j| j != i).map(move |j| (i, j)))
                    .map(|(i, j)| GroupElement::Matrix(IntMatrix::elementary(d, i, j, 1)))
                    .collect()
            }
        }
    }

    /// Generators together with their inverses, duplicates removed, in order.
    pub fn symmetric_generators(&self) -> Vec<GroupElement> {
        let mut out = Vec::new();
        for g in self.generators() {
            let gi = self.inverse(&g).expect("generators are well-formed");
            if !out.contains(&g) {
                out.push(g.clone());
            }
            if !out.contains(&gi) {
                out.push(gi);
            }
        }
        out
    }

    /// Word length with respect to the symmetric standard generating set.
    ///
    /// Free and free-product contexts use the normal-form letter count;
    /// direct products add component lengths; semidirect products are
    /// supported when the twisting automorphism permutes generators.
    pub fn word_length(&self, g: &GroupElement) -> Result<usize> {
        match (self, g) {
            (GroupContext::Free { .. } | GroupContext::FreeProduct { .. }, GroupElement::Word(w)) => Ok(w.len()),
            (GroupContext::Direct { factors }, GroupElement::Tuple(v)) => {
                factors.iter().zip(v).map(|(f, x)| f.word_length(x)).sum()
            }
            (GroupContext::Semidirect { automorphism }, GroupElement::Twisted { base, twist }) => {
                if !automorphism.is_letter_permutation() {
                    return Err(Error::Unsupported(
                        "word length in a semidirect product needs a generator-permuting automorphism".into(),
                    ));
                }
                let k = automorphism.order();
                let t = (*twist).min(k - twist) as usize;
                Ok(automorphism.context().word_length(base)? + t)
            }
            (GroupContext::SpecialLinear { .. }, _) => Err(Error::Unsupported(
                "word length in SL(n, Z) is only available through ball enumeration".into(),
            )),
            _ => Err(Error::ContextMismatch(format!("element does not belong to {}", self.describe()))),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GroupContext::Free { rank } => format!("F{rank}"),
            GroupContext::FreeProduct { orders } => orders
                .iter()
                .map(|o| match o {
                    None => "Z".to_string(),
                    Some(m) => format!("Z/{m}"),
                })
                .collect::<Vec<_>>()
                .join("*"),
            GroupContext::Direct { factors } => {
                factors.iter().map(|f| f.describe()).collect::<Vec<_>>().join(" x ")
            }
            GroupContext::Semidirect { automorphism } => format!(
                "{} x| Z/{} ({})",
                automorphism.context().describe(),
                automorphism.order(),
                automorphism.name()
            ),
            GroupContext::SpecialLinear { dim } => format!("SL({dim},Z)"),
        }
    }
}
