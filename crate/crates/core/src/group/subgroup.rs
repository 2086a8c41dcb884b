//! Subgroups given by membership oracles.

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use super::context::GroupContext;
use super::element::GroupElement;
use super::word::{Syllable, Word};
use crate::error::{input, Error, Result};

/// A finite description of a subgroup `H ≤ Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupSpec {
    Trivial,
    Whole,
    /// `⟨w⟩`.
    Cyclic { generator: GroupElement },
    /// Kernel of the exponent-sum map to `⊕ ℤ/m_i`; a modulus of 0 stands for `ℤ`.
    AbelianKernel { moduli: Vec<u64> },
    /// The `term`-th lower central subgroup `γ_term` of a free group (`γ_1 = Γ`).
    LowerCentral { term: u32 },
    /// Componentwise subgroup of a direct product.
    Product { factors: Vec<SubgroupSpec> },
    /// `s H s⁻¹`.
    Conjugate { inner: Box<SubgroupSpec>, by: GroupElement },
}

/// A subgroup of a concrete context with a decidable membership test.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subgroup {
    context: GroupContext,
    spec: SubgroupSpec,
}

impl Subgroup {
    pub fn new(context: GroupContext, spec: SubgroupSpec) -> Result<Self> {
        validate(&context, &spec)?;
        Ok(Subgroup { context, spec })
    }

    pub fn trivial(context: GroupContext) -> Self {
        Subgroup { context, spec: SubgroupSpec::Trivial }
    }

    pub fn cyclic(context: GroupContext, generator: GroupElement) -> Result<Self> {
        Self::new(context, SubgroupSpec::Cyclic { generator })
    }

    pub fn context(&self) -> &GroupContext {
        &self.context
    }

    pub fn spec(&self) -> &SubgroupSpec {
        &self.spec
    }

    pub fn contains(&self, g: &GroupElement) -> Result<bool> {
        self.context.check(g)?;
        contains(&self.context, &self.spec, g)
    }

    pub fn is_normal(&self) -> bool {
        is_normal(&self.spec)
    }

    /// `s H s⁻¹`, rewritten into a native form where one exists.
    pub fn conjugate(&self, s: &GroupElement) -> Result<Subgroup> {
        self.context.check(s)?;
        Ok(Subgroup { context: self.context.clone(), spec: conjugate_spec(&self.context, &self.spec, s)? })
    }

    pub fn name(&self) -> String {
        name(&self.context, &self.spec)
    }
}

fn validate(ctx: &GroupContext, spec: &SubgroupSpec) -> Result<()> {
    match spec {
        SubgroupSpec::Trivial | SubgroupSpec::Whole => Ok(()),
        SubgroupSpec::Cyclic { generator } => {
            ctx.check(generator)?;
            if ctx.word_rank().is_none() {
                return Err(Error::Unsupported(format!("cyclic subgroup membership in {}", ctx.describe())));
            }
            Ok(())
        }
        SubgroupSpec::AbelianKernel { moduli } => {
            let rank = ctx
                .word_rank()
                .ok_or_else(|| Error::Unsupported(format!("abelian kernels in {}", ctx.describe())))?;
            if moduli.len() != rank as usize {
                return input(format!("abelian kernel needs {rank} moduli, got {}", moduli.len()));
            }
            for (i, &m) in moduli.iter().enumerate() {
                if let Some(o) = ctx.generator_order(i as u32) {
                    if m == 0 || o as u64 % m != 0 {
                        return input(format!("modulus {m} is not compatible with a generator of order {o}"));
                    }
                }
            }
            Ok(())
        }
        SubgroupSpec::LowerCentral { term } => {
            if !matches!(ctx, GroupContext::Free { .. }) {
                return Err(Error::Unsupported("lower central series membership needs a free group".into()));
            }
            if *term == 0 {
                return input("lower central terms are numbered from 1");
            }
            Ok(())
        }
        SubgroupSpec::Product { factors } => match ctx {
            GroupContext::Direct { factors: cs } if cs.len() == factors.len() => {
                cs.iter().zip(factors).try_for_each(|(c, f)| validate(c, f))
            }
            _ => input(format!("product subgroup does not match {}", ctx.describe())),
        },
        SubgroupSpec::Conjugate { inner, by } => {
            ctx.check(by)?;
            validate(ctx, inner)
        }
    }
}

fn contains(ctx: &GroupContext, spec: &SubgroupSpec, g: &GroupElement) -> Result<bool> {
    match spec {
        SubgroupSpec::Trivial => Ok(ctx.is_identity(g)),
        SubgroupSpec::Whole => Ok(true),
        SubgroupSpec::Cyclic { generator } => cyclic_contains(ctx, generator, g),
        SubgroupSpec::AbelianKernel { moduli } => {
            let w = word_of(g)?;
            Ok(exponent_sums(w, moduli.len()).iter().zip(moduli).all(|(&s, &m)| {
                if m == 0 {
                    s == 0
                } else {
                    s.rem_euclid(m as i64) == 0
                }
            }))
        }
        SubgroupSpec::LowerCentral { term } => {
            let w = word_of(g)?;
            // γ_k ⊆ γ_2 for k ≥ 2, and γ_2 is the kernel of the exponent-sum map.
            let rank = w.syllables().iter().map(|s| s.generator as usize + 1).max().unwrap_or(0);
            if *term >= 2 && exponent_sums(w, rank).iter().any(|&s| s != 0) {
                return Ok(false);
            }
            Ok(magnus_lowest_degree(w, *term as usize) >= *term as usize)
        }
        SubgroupSpec::Product { factors } => match (ctx, g) {
            (GroupContext::Direct { factors: cs }, GroupElement::Tuple(v)) => {
                for ((c, f), x) in cs.iter().zip(factors).zip(v) {
                    if !contains(c, f, x)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Err(Error::ContextMismatch("product subgroup needs a tuple".into())),
        },
        SubgroupSpec::Conjugate { inner, by } => contains(ctx, inner, &ctx.conj_inv(by, g)?),
    }
}

fn is_normal(spec: &SubgroupSpec) -> bool {
    match spec {
        SubgroupSpec::Trivial
        | SubgroupSpec::Whole
        | SubgroupSpec::AbelianKernel { .. }
        | SubgroupSpec::LowerCentral { .. } => true,
        SubgroupSpec::Product { factors } => factors.iter().all(is_normal),
        SubgroupSpec::Cyclic { .. } | SubgroupSpec::Conjugate { .. } => false,
    }
}

fn conjugate_spec(ctx: &GroupContext, spec: &SubgroupSpec, s: &GroupElement) -> Result<SubgroupSpec> {
    if is_normal(spec) {
        return Ok(spec.clone());
    }
    Ok(match (spec, ctx, s) {
        (SubgroupSpec::Cyclic { generator }, _, _) => SubgroupSpec::Cyclic { generator: ctx.conj(s, generator)? },
        (SubgroupSpec::Product { factors }, GroupContext::Direct { factors: cs }, GroupElement::Tuple(v)) => {
            SubgroupSpec::Product {
                factors: cs
                    .iter()
                    .zip(factors)
                    .zip(v)
                    .map(|((c, f), x)| conjugate_spec(c, f, x))
                    .collect::<Result<_>>()?,
            }
        }
        (SubgroupSpec::Conjugate { inner, by }, _, _) => {
            SubgroupSpec::Conjugate { inner: inner.clone(), by: ctx.op(s, by)? }
        }
        _ => SubgroupSpec::Conjugate { inner: Box::new(spec.clone()), by: s.clone() },
    })
}

fn name(ctx: &GroupContext, spec: &SubgroupSpec) -> String {
    match spec {
        SubgroupSpec::Trivial => "{e}".into(),
        SubgroupSpec::Whole => ctx.describe(),
        SubgroupSpec::Cyclic { generator } => format!("<{}>", ctx.format(generator)),
        SubgroupSpec::AbelianKernel { moduli } => {
            let parts: Vec<String> =
                moduli.iter().map(|&m| if m == 0 { "Z".to_string() } else { format!("Z/{m}") }).collect();
            format!("ker({} -> {})", ctx.describe(), parts.join(" x "))
        }
        SubgroupSpec::LowerCentral { term } => format!("gamma_{term}({})", ctx.describe()),
        SubgroupSpec::Product { factors } => match ctx {
            GroupContext::Direct { factors: cs } => {
                cs.iter().zip(factors).map(|(c, f)| name(c, f)).collect::<Vec<_>>().join(" x ")
            }
            _ => "product".into(),
        },
        SubgroupSpec::Conjugate { inner, by } => format!("{}^[{}]", name(ctx, inner), ctx.format(by)),
    }
}

fn word_of(g: &GroupElement) -> Result<&Word> {
    g.as_word().ok_or_else(|| Error::ContextMismatch("expected a word element".into()))
}

fn exponent_sums(w: &Word, rank: usize) -> Vec<i64> {
    let mut sums = vec![0i64; rank];
    for s in w.syllables() {
        sums[s.generator as usize] += s.exponent;
    }
    sums
}

/// Primitive-root data for a free-group element `w = u p^k u⁻¹` with `p`
/// cyclically reduced and not a proper power.
struct CyclicRoot {
    root: GroupElement,
    conjugator_len: usize,
    period_len: usize,
    power: i64,
}

fn free_root(ctx: &GroupContext, w: &Word) -> Result<CyclicRoot> {
    let letters: Vec<(u32, bool)> = w.letters().collect();
    let n = letters.len();
    let mut u = 0;
    while 2 * (u + 1) <= n && {
        let (g1, i1) = letters[u];
        let (g2, i2) = letters[n - 1 - u];
        g1 == g2 && i1 != i2
    } {
        u += 1;
    }
    let core = &letters[u..n - u];
    let c = core.len();
    let period = (1..=c).find(|&d| c % d == 0 && (d..c).all(|i| core[i] == core[i - d])).unwrap_or(c);
    let to_raw = |ls: &[(u32, bool)]| -> Vec<Syllable> {
        ls.iter().map(|&(g, inv)| Syllable::new(g, if inv { -1 } else { 1 })).collect()
    };
    let mut raw = to_raw(&letters[..u]);
    raw.extend(to_raw(&core[..period]));
    raw.extend(to_raw(&letters[n - u..]));
    Ok(CyclicRoot {
        root: ctx.reduce(&raw)?,
        conjugator_len: u,
        period_len: period,
        power: (c / period) as i64,
    })
}

fn cyclic_contains(ctx: &GroupContext, generator: &GroupElement, g: &GroupElement) -> Result<bool> {
    if ctx.is_identity(g) {
        return Ok(true);
    }
    if ctx.is_identity(generator) {
        return Ok(false);
    }
    let len = word_of(g)?.len();
    if let GroupContext::Free { .. } = ctx {
        let r = free_root(ctx, word_of(generator)?)?;
        if len <= 2 * r.conjugator_len || (len - 2 * r.conjugator_len) % r.period_len != 0 {
            return Ok(false);
        }
        let j = ((len - 2 * r.conjugator_len) / r.period_len) as i64;
        if j % r.power != 0 {
            return Ok(false);
        }
        return Ok(ctx.pow(&r.root, j)? == *g || ctx.pow(&r.root, -j)? == *g);
    }
    // Free products: powers of an infinite-order element have length at
    // least the exponent, and finite-order elements cycle back to e.
    let slack = match ctx {
        GroupContext::FreeProduct { orders } => orders.iter().flatten().max().copied().unwrap_or(1) as usize,
        _ => 1,
    };
    let gi = ctx.inverse(generator)?;
    let (mut pos, mut neg) = (generator.clone(), gi.clone());
    for _ in 0..len + slack {
        if pos == *g || neg == *g {
            return Ok(true);
        }
        if ctx.is_identity(&pos) {
            return Ok(false);
        }
        pos = ctx.op(&pos, generator)?;
        neg = ctx.op(&neg, &gi)?;
    }
    Ok(false)
}

/// Lowest degree `d ≥ 1` at which the Magnus expansion `a_i ↦ 1 + X_i` of
/// `w` differs from 1, or `cap` if there is none below `cap`.
pub(crate) fn magnus_lowest_degree(w: &Word, cap: usize) -> usize {
    if cap <= 1 || w.is_identity() {
        return cap;
    }
    let max_deg = cap - 1;
    let mut series: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    series.insert(Vec::new(), BigInt::one());
    for (g, inv) in w.letters() {
        // a ↦ 1 + X, a⁻¹ ↦ 1 - X + X² - ...
        let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (mono, c) in &series {
            let room = max_deg - mono.len();
            let top = if inv { room } else { room.min(1) };
            let mut m = mono.clone();
            for j in 0..=top {
                if j > 0 {
                    m.push(g);
                }
                let term = if inv && j % 2 == 1 { -c.clone() } else { c.clone() };
                *next.entry(m.clone()).or_insert_with(BigInt::zero) += term;
            }
        }
        next.retain(|_, c| !c.is_zero());
        series = next;
    }
    series.keys().filter(|m| !m.is_empty()).map(Vec::len).min().unwrap_or(cap)
}
