use serde::{Deserialize, Serialize};

use super::context::GroupContext;
use super::element::GroupElement;
use crate::error::{input, Error, Result};

/// How an automorphism acts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AutomorphismRule {
    /// Images of the standard generators of a word context.
    Substitution(Vec<GroupElement>),
    /// `(x_1, ..., x_k) ↦ (x_k, x_1, ..., x_{k-1})` on `Λ^k`.
    CoordinateCycle,
    /// `A ↦ (Aᵀ)⁻¹` on `SL(d, ℤ)`.
    InverseTranspose,
    /// `g ↦ s·φ(s⁻¹gs)·s⁻¹`, the automorphism whose fixed points are `λ_s N_φ λ_s*`.
    Conjugated { inner: Box<GroupAutomorphism>, by: GroupElement },
}

/// A finite-order automorphism of a group context.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupAutomorphism {
    context: GroupContext,
    rule: AutomorphismRule,
    order: u32,
    name: String,
}

impl GroupAutomorphism {
    /// Validates the rule against the context and checks that `φ^order` fixes
    /// every generator.
    pub fn new(context: GroupContext, rule: AutomorphismRule, order: u32, name: impl Into<String>) -> Result<Self> {
        if order < 2 {
            return input("automorphism order must be at least 2");
        }
        match (&rule, &context) {
            (AutomorphismRule::Substitution(images), GroupContext::Free { .. } | GroupContext::FreeProduct { .. }) => {
                let rank = context.word_rank().unwrap_or(0) as usize;
                if images.len() != rank {
                    return input(format!("substitution needs {rank} images, got {}", images.len()));
                }
                for (i, img) in images.iter().enumerate() {
                    context.check(img)?;
                    if let Some(m) = context.generator_order(i as u32) {
                        if !context.is_identity(&context.pow(img, m as i64)?) {
                            return input(format!("image of generator {i} does not have order dividing {m}"));
                        }
                    }
                }
            }
            (AutomorphismRule::CoordinateCycle, GroupContext::Direct { factors }) => {
                if factors.windows(2).any(|p| p[0] != p[1]) {
                    return input("coordinate cycling needs identical factors");
                }
            }
            (AutomorphismRule::InverseTranspose, GroupContext::SpecialLinear { .. }) => {}
            (AutomorphismRule::Conjugated { inner, by }, _) => {
                if inner.context != context {
                    return Err(Error::ContextMismatch("conjugated automorphism context".into()));
                }
                context.check(by)?;
            }
            _ => return Err(Error::Unsupported(format!("automorphism rule not available on {}", context.describe()))),
        }
        let aut = GroupAutomorphism { context, rule, order, name: name.into() };
        for g in aut.context.generators() {
            if aut.apply_power(&g, order)? != g {
                return input(format!(
                    "declared order {order} does not return generator {} to itself",
                    aut.context.format(&g)
                ));
            }
        }
        Ok(aut)
    }

    /// The generator swap `a ↔ b` on `F₂`.
    pub fn generator_swap() -> Self {
        let f2 = GroupContext::Free { rank: 2 };
        let images = vec![f2.generator(1).expect("rank 2"), f2.generator(0).expect("rank 2")];
        Self::new(f2, AutomorphismRule::Substitution(images), 2, "swap").expect("swap is an involution")
    }

    /// `a_i ↦ a_{i+1}` (indices mod n) on `F_n`, of order `n`.
    pub fn cyclic_shift(rank: u32) -> Result<Self> {
        if rank < 2 {
            return input("cyclic shift needs rank at least 2");
        }
        let ctx = GroupContext::free(rank)?;
        let images = (0..rank).map(|i| ctx.generator((i + 1) % rank)).collect::<Result<_>>()?;
        Self::new(ctx, AutomorphismRule::Substitution(images), rank, format!("shift{rank}"))
    }

    /// Cyclic permutation of the coordinates of `Λ^k`, of order `k`.
    pub fn coordinate_cycle(context: GroupContext) -> Result<Self> {
        let k = match &context {
            GroupContext::Direct { factors } => factors.len() as u32,
            _ => return Err(Error::Unsupported("coordinate cycling needs a direct product".into())),
        };
        let name = if k == 2 { "flip".to_string() } else { format!("cycle{k}") };
        Self::new(context, AutomorphismRule::CoordinateCycle, k, name)
    }

    pub fn inverse_transpose(dim: usize) -> Result<Self> {
        Self::new(GroupContext::special_linear(dim)?, AutomorphismRule::InverseTranspose, 2, "inverse-transpose")
    }

    /// `c_s ∘ φ ∘ c_s⁻¹`, whose fixed-point algebra is the conjugate by `λ_s`.
    pub fn conjugated(&self, s: &GroupElement) -> Result<Self> {
        let name = format!("{}^[{}]", self.name, self.context.format(s));
        Self::new(
            self.context.clone(),
            AutomorphismRule::Conjugated { inner: Box::new(self.clone()), by: s.clone() },
            self.order,
            name,
        )
    }

    pub fn context(&self) -> &GroupContext {
        &self.context
    }

    pub fn rule(&self) -> &AutomorphismRule {
        &self.rule
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True when every generator maps to a single letter.
    pub fn is_letter_permutation(&self) -> bool {
        match &self.rule {
            AutomorphismRule::Substitution(images) => images.iter().all(|g| {
                g.as_word()
                    .map(|w| w.syllables().len() == 1 && w.syllables()[0].exponent.abs() == 1)
                    .unwrap_or(false)
            }),
            _ => false,
        }
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        let ctx = &self.context;
        match (&self.rule, g) {
            (AutomorphismRule::Substitution(images), GroupElement::Word(w)) => {
                let mut acc = ctx.identity();
                for s in w.syllables() {
                    let img = images
                        .get(s.generator as usize)
                        .ok_or_else(|| Error::Input(format!("unknown generator {}", s.generator)))?;
                    acc = ctx.op(&acc, &ctx.pow(img, s.exponent)?)?;
                }
                Ok(acc)
            }
            (AutomorphismRule::CoordinateCycle, GroupElement::Tuple(v)) if !v.is_empty() => {
                let mut out = Vec::with_capacity(v.len());
                out.push(v[v.len() - 1].clone());
                out.extend(v[..v.len() - 1].iter().cloned());
                Ok(GroupElement::Tuple(out))
            }
            (AutomorphismRule::InverseTranspose, GroupElement::Matrix(m)) => {
                Ok(GroupElement::Matrix(m.transpose().inverse_unimodular()?))
            }
            (AutomorphismRule::Conjugated { inner, by }, _) => {
                let t = ctx.conj_inv(by, g)?;
                let t = inner.apply(&t)?;
                ctx.op(&ctx.op(by, &t)?, &ctx.inverse(by)?)
            }
            _ => Err(Error::ContextMismatch(format!("automorphism {} cannot act on this element", self.name))),
        }
    }

    pub fn apply_power(&self, g: &GroupElement, times: u32) -> Result<GroupElement> {
        let mut x = g.clone();
        for _ in 0..times {
            x = self.apply(&x)?;
        }
        Ok(x)
    }
}

/// The distinct elements `φ^i(g)`, `0 ≤ i < k`, in order of first appearance.
pub fn orbit_of(aut: &GroupAutomorphism, g: &GroupElement) -> Result<Vec<GroupElement>> {
    aut.context().check(g)?;
    let mut orbit = vec![g.clone()];
    let mut x = aut.apply(g)?;
    while x != *g {
        if orbit.len() as u32 >= aut.order() {
            return Err(Error::Input(format!("orbit under {} exceeds the declared order", aut.name())));
        }
        orbit.push(x.clone());
        x = aut.apply(&x)?;
    }
    Ok(orbit)
}
