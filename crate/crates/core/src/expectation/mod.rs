//! Conditional expectations onto concrete subalgebras and the states `φ_M(g) = ‖E_M(λ_g)‖₂²`.

mod finite;
mod radial;

use std::collections::BTreeMap;
use std::sync::Arc;

use num::Zero;
use serde::Serialize;

pub use finite::{matrix_unit_obstruction, order_two_projections, two_projection_blocks, FiniteBlocks};
pub use radial::{radial_of_basis, radial_spherical, sphere_size, SphericalVector};

use crate::algebra::AlgebraElement;
use crate::error::{input, Error, Result};
use crate::group::{orbit_of, GroupAutomorphism, GroupContext, GroupElement, Subgroup};
use crate::rational::{self, Rational};

/// Which subalgebra `M ≤ L(Γ)` a descriptor stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescriptorKind {
    /// `ℂ1`.
    Trivial,
    /// `L(H)`.
    Subgroup(Subgroup),
    /// The radial subalgebra of `L(F_n)`, generated by `Σ a_i + a_i⁻¹`.
    Radial { rank: u32 },
    /// Fixed points `L(Γ)^φ` of a finite-order automorphism.
    FixedPoint(GroupAutomorphism),
    FiniteDimensional(FiniteBlocks),
    /// `A ⊗ L(ℤ/k)` inside `L(F_n ⋊ ℤ/k)`, `A` radial.
    RadialTensorFinite { rank: u32 },
    /// `λ_s M λ_s*`, for kinds without a native conjugate.
    Conjugated { inner: Box<SubalgebraDescriptor>, by: GroupElement },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraDescriptor {
    context: Arc<GroupContext>,
    kind: DescriptorKind,
}

/// The image `E_M(x)`, kept lazy where the explicit element would be huge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Projection {
    Element(AlgebraElement),
    Spherical(SphericalVector),
    /// `Σ_ε E_A(x_ε) u^ε`, one spherical vector per twist.
    Twisted(BTreeMap<u32, SphericalVector>),
    /// `λ_s P λ_s*`.
    Conjugated { inner: Box<Projection>, by: GroupElement },
}

impl Projection {
    pub fn norm_sq(&self) -> Rational {
        match self {
            Projection::Element(x) => x.norm_sq(),
            Projection::Spherical(v) => v.norm_sq(),
            Projection::Twisted(m) => m.values().fold(Rational::zero(), |acc, v| acc + v.norm_sq()),
            Projection::Conjugated { inner, .. } => inner.norm_sq(),
        }
    }

    pub fn trace(&self) -> Rational {
        match self {
            Projection::Element(x) => x.trace(),
            Projection::Spherical(v) => v.trace(),
            Projection::Twisted(m) => m.get(&0).map(SphericalVector::trace).unwrap_or_else(Rational::zero),
            Projection::Conjugated { inner, .. } => inner.trace(),
        }
    }

    /// The explicit element; exponential in the top sphere level for radial kinds.
    pub fn materialize(&self, context: &Arc<GroupContext>) -> Result<AlgebraElement> {
        match self {
            Projection::Element(x) => Ok(x.clone()),
            Projection::Spherical(v) => v.materialize(context),
            Projection::Twisted(m) => {
                let (base, _) = context
                    .semidirect_parts()
                    .ok_or_else(|| Error::ContextMismatch("twisted projection needs a semidirect context".into()))?;
                let base = Arc::new(base.clone());
                let mut out = AlgebraElement::zero(context);
                for (eps, v) in m {
                    for (w, c) in v.materialize(&base)?.terms() {
                        out.add_term(GroupElement::Twisted { base: Box::new(w.clone()), twist: *eps }, c.clone());
                    }
                }
                Ok(out)
            }
            Projection::Conjugated { inner, by } => inner.materialize(context)?.conjugate_by(by),
        }
    }
}

/// Serializable summary of a descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescriptorRecord {
    pub kind: String,
    pub context: String,
    pub name: String,
}

impl SubalgebraDescriptor {
    pub fn trivial(context: &Arc<GroupContext>) -> Self {
        SubalgebraDescriptor { context: context.clone(), kind: DescriptorKind::Trivial }
    }

    pub fn subgroup(subgroup: Subgroup) -> Self {
        SubalgebraDescriptor { context: Arc::new(subgroup.context().clone()), kind: DescriptorKind::Subgroup(subgroup) }
    }

    pub fn radial(rank: u32) -> Result<Self> {
        if rank < 2 {
            return input("the radial subalgebra needs rank at least 2");
        }
        Ok(SubalgebraDescriptor { context: Arc::new(GroupContext::free(rank)?), kind: DescriptorKind::Radial { rank } })
    }

    pub fn fixed_point(automorphism: GroupAutomorphism) -> Self {
        SubalgebraDescriptor {
            context: Arc::new(automorphism.context().clone()),
            kind: DescriptorKind::FixedPoint(automorphism),
        }
    }

    pub fn finite_dimensional(blocks: FiniteBlocks) -> Self {
        SubalgebraDescriptor { context: blocks.context().clone(), kind: DescriptorKind::FiniteDimensional(blocks) }
    }

    /// `A ⊗ L(ℤ/k)` in `F_n ⋊ ℤ/k`; the automorphism must permute generators so that `A` is invariant.
    pub fn radial_tensor_finite(context: &Arc<GroupContext>) -> Result<Self> {
        let (base, aut) = context
            .semidirect_parts()
            .ok_or_else(|| Error::Unsupported("radial tensor finite needs a semidirect context".into()))?;
        let rank = match base {
            GroupContext::Free { rank } if *rank >= 2 => *rank,
            _ => return Err(Error::Unsupported("radial tensor finite needs a free base of rank at least 2".into())),
        };
        if !aut.is_letter_permutation() {
            return Err(Error::Unsupported("the twisting automorphism must permute generators".into()));
        }
        Ok(SubalgebraDescriptor { context: context.clone(), kind: DescriptorKind::RadialTensorFinite { rank } })
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.context
    }

    pub fn kind(&self) -> &DescriptorKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            DescriptorKind::Trivial => "C".into(),
            DescriptorKind::Subgroup(h) => format!("L({})", h.name()),
            DescriptorKind::Radial { rank } => format!("radial(F{rank})"),
            DescriptorKind::FixedPoint(a) => format!("fixed({})", a.name()),
            DescriptorKind::FiniteDimensional(b) => {
                let sizes: Vec<String> = b.blocks().iter().map(|r| r.len().to_string()).collect();
                format!("finite({})", sizes.join("+"))
            }
            DescriptorKind::RadialTensorFinite { rank } => format!("radial(F{rank}) (x) L(Z/k)"),
            DescriptorKind::Conjugated { inner, by } => format!("{}^[{}]", inner.name(), self.context.format(by)),
        }
    }

    pub fn record(&self) -> DescriptorRecord {
        let kind = match &self.kind {
            DescriptorKind::Trivial => "trivial",
            DescriptorKind::Subgroup(_) => "subgroup",
            DescriptorKind::Radial { .. } => "radial",
            DescriptorKind::FixedPoint(_) => "fixed_point",
            DescriptorKind::FiniteDimensional(_) => "finite_dimensional",
            DescriptorKind::RadialTensorFinite { .. } => "radial_tensor_finite",
            DescriptorKind::Conjugated { .. } => "conjugated",
        };
        DescriptorRecord { kind: kind.into(), context: self.context.describe(), name: self.name() }
    }

    fn check_element(&self, x: &AlgebraElement) -> Result<()> {
        if x.context().as_ref() != self.context.as_ref() {
            return Err(Error::ContextMismatch(format!(
                "descriptor on {} applied to an element of {}",
                self.context.describe(),
                x.context().describe()
            )));
        }
        Ok(())
    }

    /// `E_M(x)` as an explicit element. Radial kinds only have a lazy form; use [`Self::project`].
    pub fn expect(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_element(x)?;
        match &self.kind {
            DescriptorKind::Trivial => Ok(AlgebraElement::one(&self.context).scale(&x.trace())),
            DescriptorKind::Subgroup(h) => x.restrict(|g| h.contains(g)),
            DescriptorKind::FixedPoint(aut) => {
                let mut acc = AlgebraElement::zero(&self.context);
                let mut y = x.clone();
                for _ in 0..aut.order() {
                    acc = acc.add(&y)?;
                    y = y.apply_automorphism(aut)?;
                }
                Ok(acc.scale(&(rational::one() / rational::int(aut.order() as i64))))
            }
            DescriptorKind::FiniteDimensional(blocks) => blocks.expect(x),
            DescriptorKind::Radial { .. } | DescriptorKind::RadialTensorFinite { .. } => Err(Error::Unsupported(
                "radial expectations have exponentially large support; use the spherical projection".into(),
            )),
            DescriptorKind::Conjugated { inner, by } => {
                let si = self.context.inverse(by)?;
                inner.expect(&x.conjugate_by(&si)?)?.conjugate_by(by)
            }
        }
    }

    /// `E_M(x)` in whichever representation suits the kind.
    pub fn project(&self, x: &AlgebraElement) -> Result<Projection> {
        self.check_element(x)?;
        match &self.kind {
            DescriptorKind::Radial { rank } => Ok(Projection::Spherical(radial_spherical(*rank, x)?)),
            DescriptorKind::RadialTensorFinite { rank } => {
                let base = Arc::new(self.context.semidirect_parts().map(|(b, _)| b.clone()).unwrap_or_else(|| {
                    GroupContext::Free { rank: *rank }
                }));
                let mut parts: BTreeMap<u32, AlgebraElement> = BTreeMap::new();
                for (g, c) in x.terms() {
                    match g {
                        GroupElement::Twisted { base: w, twist } => parts
                            .entry(*twist)
                            .or_insert_with(|| AlgebraElement::zero(&base))
                            .add_term((**w).clone(), c.clone()),
                        _ => return Err(Error::ContextMismatch("expected a semidirect element".into())),
                    }
                }
                let mut out = BTreeMap::new();
                for (eps, xe) in parts {
                    let v = radial_spherical(*rank, &xe)?;
                    if !v.is_zero() {
                        out.insert(eps, v);
                    }
                }
                Ok(Projection::Twisted(out))
            }
            DescriptorKind::Conjugated { inner, by } => {
                let si = self.context.inverse(by)?;
                Ok(Projection::Conjugated { inner: Box::new(inner.project(&x.conjugate_by(&si)?)?), by: by.clone() })
            }
            _ => Ok(Projection::Element(self.expect(x)?)),
        }
    }

    /// `φ_M(g) = ‖E_M(λ_g)‖₂²`.
    pub fn phi_value(&self, g: &GroupElement) -> Result<Rational> {
        self.context.check(g)?;
        match &self.kind {
            DescriptorKind::Trivial => Ok(indicator(self.context.is_identity(g))),
            DescriptorKind::Subgroup(h) => Ok(indicator(h.contains(g)?)),
            DescriptorKind::Radial { rank } => {
                Ok(rational::one() / Rational::from_integer(sphere_size(*rank, self.context.word_length(g)?)))
            }
            DescriptorKind::FixedPoint(aut) => {
                Ok(rational::one() / rational::int(orbit_of(aut, g)?.len() as i64))
            }
            DescriptorKind::FiniteDimensional(blocks) => {
                Ok(blocks.expect(&AlgebraElement::basis(&self.context, g.clone()))?.norm_sq())
            }
            DescriptorKind::RadialTensorFinite { rank } => match (g, self.context.semidirect_parts()) {
                (GroupElement::Twisted { base, .. }, Some((b, _))) => {
                    Ok(rational::one() / Rational::from_integer(sphere_size(*rank, b.word_length(base)?)))
                }
                _ => Err(Error::ContextMismatch("expected a semidirect element".into())),
            },
            DescriptorKind::Conjugated { .. } => {
                Ok(self.project(&AlgebraElement::basis(&self.context, g.clone()))?.norm_sq())
            }
        }
    }

    /// The descriptor of `λ_s M λ_s*`, rewritten natively where possible.
    pub fn conjugate(&self, s: &GroupElement) -> Result<SubalgebraDescriptor> {
        self.context.check(s)?;
        let kind = match &self.kind {
            DescriptorKind::Trivial => DescriptorKind::Trivial,
            DescriptorKind::Subgroup(h) => DescriptorKind::Subgroup(h.conjugate(s)?),
            DescriptorKind::FixedPoint(aut) => DescriptorKind::FixedPoint(aut.conjugated(s)?),
            DescriptorKind::FiniteDimensional(b) => DescriptorKind::FiniteDimensional(b.conjugate(s)?),
            DescriptorKind::Conjugated { inner, by } => {
                DescriptorKind::Conjugated { inner: inner.clone(), by: self.context.op(s, by)? }
            }
            DescriptorKind::Radial { .. } | DescriptorKind::RadialTensorFinite { .. } => {
                DescriptorKind::Conjugated { inner: Box::new(self.clone()), by: s.clone() }
            }
        };
        Ok(SubalgebraDescriptor { context: self.context.clone(), kind })
    }

    /// `E_{M^s}(x) = λ_s E_M(λ_s* x λ_s) λ_s*`.
    pub fn conjugated_expect(&self, s: &GroupElement, x: &AlgebraElement) -> Result<Projection> {
        self.context.check(s)?;
        let si = self.context.inverse(s)?;
        let inner = self.project(&x.conjugate_by(&si)?)?;
        Ok(match inner {
            Projection::Element(y) => Projection::Element(y.conjugate_by(s)?),
            other => Projection::Conjugated { inner: Box::new(other), by: s.clone() },
        })
    }

    /// A few explicit elements of `M`, used as bimodularity witnesses.
    pub fn witnesses(&self) -> Result<Vec<AlgebraElement>> {
        let ctx = &self.context;
        let one = AlgebraElement::one(ctx);
        let mut out = vec![one.clone(), one.scale(&rational::rat(-3, 2))];
        match &self.kind {
            DescriptorKind::Trivial => {}
            DescriptorKind::Subgroup(h) => {
                for g in ctx.enumerate_ball(2)? {
                    if !ctx.is_identity(&g) && h.contains(&g)? {
                        out.push(AlgebraElement::basis(ctx, g));
                    }
                }
            }
            DescriptorKind::FixedPoint(aut) => {
                for g in ctx.enumerate_ball(1)?.into_iter().skip(1) {
                    let orbit = orbit_of(aut, &g)?;
                    out.push(AlgebraElement::from_terms(ctx, orbit.into_iter().map(|x| (x, rational::one())))?);
                }
            }
            DescriptorKind::FiniteDimensional(b) => {
                out.extend(b.blocks().iter().flatten().flatten().cloned());
            }
            DescriptorKind::Radial { .. } => {
                for level in 1..=2usize {
                    let sphere = ctx.spheres(level, crate::group::DEFAULT_BALL_BUDGET)?.pop().unwrap_or_default();
                    out.push(AlgebraElement::from_terms(ctx, sphere.into_iter().map(|g| (g, rational::one())))?);
                }
            }
            DescriptorKind::RadialTensorFinite { .. } => {
                let (base, aut) = ctx.semidirect_parts().expect("checked at construction");
                let sphere = base.spheres(1, crate::group::DEFAULT_BALL_BUDGET)?.pop().unwrap_or_default();
                for eps in 0..aut.order() {
                    let terms = sphere
                        .iter()
                        .map(|w| (GroupElement::Twisted { base: Box::new(w.clone()), twist: eps }, rational::one()));
                    out.push(AlgebraElement::from_terms(ctx, terms)?);
                }
                out.push(AlgebraElement::basis(
                    ctx,
                    GroupElement::Twisted { base: Box::new(base.identity()), twist: 1 % aut.order() },
                ));
            }
            DescriptorKind::Conjugated { inner, by } => {
                for w in inner.witnesses()? {
                    out.push(w.conjugate_by(by)?);
                }
            }
        }
        Ok(out)
    }
}

fn indicator(b: bool) -> Rational {
    if b {
        rational::one()
    } else {
        Rational::zero()
    }
}
