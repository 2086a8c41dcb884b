//! The rational group algebra `ℚ[Γ]` with its canonical trace.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{GroupAutomorphism, GroupContext, GroupElement};
use crate::rational::{self, Rational};

/// A finitely supported `Σ c_g λ_g` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    context: Arc<GroupContext>,
    coeffs: BTreeMap<GroupElement, Rational>,
}

impl AlgebraElement {
    pub fn zero(context: &Arc<GroupContext>) -> Self {
        AlgebraElement { context: context.clone(), coeffs: BTreeMap::new() }
    }

    pub fn one(context: &Arc<GroupContext>) -> Self {
        Self::basis(context, context.identity())
    }

    /// `λ_g`. The element is assumed to be in normal form for `context`.
    pub fn basis(context: &Arc<GroupContext>, g: GroupElement) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(g, rational::one());
        AlgebraElement { context: context.clone(), coeffs }
    }

    /// Sums the given terms, checking every group element against the context.
    pub fn from_terms<I>(context: &Arc<GroupContext>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (GroupElement, Rational)>,
    {
        let mut x = Self::zero(context);
        for (g, c) in terms {
            context.check(&g)?;
            x.add_term(g, c);
        }
        Ok(x)
    }

    pub(crate) fn add_term(&mut self, g: GroupElement, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(g);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.context
    }

    pub fn coefficient(&self, g: &GroupElement) -> Rational {
        self.coeffs.get(g).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical element order.
    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Rational)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_context(&self, other: &AlgebraElement) -> Result<()> {
        if Arc::ptr_eq(&self.context, &other.context) || self.context == other.context {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "{} vs {}",
                self.context.describe(),
                other.context.describe()
            )))
        }
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_context(other)?;
        let mut out = self.clone();
        for (g, c) in &other.coeffs {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&other.scale(&-rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> AlgebraElement {
        if r.is_zero() {
            return Self::zero(&self.context);
        }
        AlgebraElement {
            context: self.context.clone(),
            coeffs: self.coeffs.iter().map(|(g, c)| (g.clone(), c * r)).collect(),
        }
    }

    pub fn convolve(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.same_context(other)?;
        let mut out = Self::zero(&self.context);
        for (g, c) in &self.coeffs {
            for (h, d) in &other.coeffs {
                out.add_term(self.context.op(g, h)?, c * d);
            }
        }
        Ok(out)
    }

    /// `Σ c_g λ_{g⁻¹}`; coefficients are real, so no conjugation is needed.
    pub fn adjoint(&self) -> Result<AlgebraElement> {
        let mut coeffs = BTreeMap::new();
        for (g, c) in &self.coeffs {
            coeffs.insert(self.context.inverse(g)?, c.clone());
        }
        Ok(AlgebraElement { context: self.context.clone(), coeffs })
    }

    /// `τ(x)`, the coefficient of the identity.
    pub fn trace(&self) -> Rational {
        self.coefficient(&self.context.identity())
    }

    /// `⟨x, y⟩ = τ(y* x) = Σ c_g d_g`.
    pub fn inner_product(&self, other: &AlgebraElement) -> Result<Rational> {
        self.same_context(other)?;
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() { (self, other) } else { (other, self) };
        Ok(small
            .coeffs
            .iter()
            .filter_map(|(g, c)| large.coeffs.get(g).map(|d| c * d))
            .fold(Rational::zero(), |acc, x| acc + x))
    }

    pub fn norm_sq(&self) -> Rational {
        self.coeffs.values().fold(Rational::zero(), |acc, c| acc + c * c)
    }

    /// `λ_s x λ_s*`.
    pub fn conjugate_by(&self, s: &GroupElement) -> Result<AlgebraElement> {
        self.context.check(s)?;
        let si = self.context.inverse(s)?;
        let mut coeffs = BTreeMap::new();
        for (g, c) in &self.coeffs {
            let t = self.context.op(&self.context.op(s, g)?, &si)?;
            coeffs.insert(t, c.clone());
        }
        Ok(AlgebraElement { context: self.context.clone(), coeffs })
    }

    /// Linear extension of an automorphism of Γ.
    pub fn apply_automorphism(&self, aut: &GroupAutomorphism) -> Result<AlgebraElement> {
        if aut.context() != self.context.as_ref() {
            return Err(Error::ContextMismatch(format!("automorphism {} on {}", aut.name(), self.context.describe())));
        }
        let mut coeffs = BTreeMap::new();
        for (g, c) in &self.coeffs {
            coeffs.insert(aut.apply(g)?, c.clone());
        }
        Ok(AlgebraElement { context: self.context.clone(), coeffs })
    }

    /// Keeps only the terms whose group element satisfies `keep`.
    pub fn restrict<F>(&self, mut keep: F) -> Result<AlgebraElement>
    where
        F: FnMut(&GroupElement) -> Result<bool>,
    {
        let mut coeffs = BTreeMap::new();
        for (g, c) in &self.coeffs {
            if keep(g)? {
                coeffs.insert(g.clone(), c.clone());
            }
        }
        Ok(AlgebraElement { context: self.context.clone(), coeffs })
    }

    /// Sorted `(word, "num/den")` pairs.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.coeffs.iter().map(|(g, c)| (self.context.format(g), rational::to_exact(c))).collect()
    }

    pub fn from_pairs(context: &Arc<GroupContext>, pairs: &[(String, String)]) -> Result<AlgebraElement> {
        let terms = pairs
            .iter()
            .map(|(w, c)| Ok((context.parse(w)?, rational::parse_exact(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(context, terms)
    }

    /// Largest absolute coefficient (0 for the zero element).
    pub fn max_abs_coefficient(&self) -> Rational {
        self.coeffs.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn zz2() -> Arc<GroupContext> {
        Arc::new(GroupContext::z_star_z2())
    }

    fn elem(ctx: &Arc<GroupContext>, terms: &[(&str, i64, i64)]) -> AlgebraElement {
        AlgebraElement::from_terms(ctx, terms.iter().map(|&(w, n, d)| (ctx.parse(w).unwrap(), rat(n, d)))).unwrap()
    }

    #[test]
    fn matrix_units_of_the_order_two_generator() {
        let ctx = zz2();
        let e11 = elem(&ctx, &[("e", 1, 2), ("b", 1, 2)]);
        let e22 = elem(&ctx, &[("e", 1, 2), ("b", -1, 2)]);
        assert_eq!(e11.convolve(&e11).unwrap(), e11);
        assert!(e11.convolve(&e22).unwrap().is_zero());
        assert_eq!(e11.add(&e22).unwrap(), AlgebraElement::one(&ctx));
    }

    #[test]
    fn trace_and_inner_product() {
        let f2 = Arc::new(GroupContext::free(2).unwrap());
        assert_eq!(AlgebraElement::one(&f2).trace(), int(1));
        let a = AlgebraElement::basis(&f2, f2.parse("a").unwrap());
        assert_eq!(a.trace(), int(0));
        let b = elem(&f2, &[("a", 1, 1), ("A", 1, 1), ("b", 1, 1), ("B", 1, 1)]);
        assert_eq!(a.inner_product(&b).unwrap(), int(1));
        assert_eq!(b.norm_sq(), int(4));
    }

    #[test]
    fn serialization_round_trip() {
        let f2 = Arc::new(GroupContext::free(2).unwrap());
        let x = elem(&f2, &[("b", 3, 4), ("a", -1, 2), ("e", 2, 1)]);
        let pairs = x.to_pairs();
        assert_eq!(pairs[0], ("e".to_string(), "2/1".to_string()));
        assert_eq!(pairs[1], ("a".to_string(), "-1/2".to_string()));
        assert_eq!(AlgebraElement::from_pairs(&f2, &pairs).unwrap(), x);
    }

    #[test]
    fn context_mismatch() {
        let f2 = Arc::new(GroupContext::free(2).unwrap());
        let f3 = Arc::new(GroupContext::free(3).unwrap());
        assert!(AlgebraElement::one(&f2).add(&AlgebraElement::one(&f3)).is_err());
    }

    fn arb_element(ctx: Arc<GroupContext>, ball: Vec<GroupElement>) -> impl Strategy<Value = AlgebraElement> {
        prop::collection::vec((0..ball.len(), -4i64..=4, 1i64..=3), 0..6).prop_map(move |terms| {
            AlgebraElement::from_terms(&ctx, terms.into_iter().map(|(i, n, d)| (ball[i].clone(), rat(n, d)))).unwrap()
        })
    }

    fn arb_pair() -> impl Strategy<Value = (AlgebraElement, AlgebraElement)> {
        let ctx = zz2();
        let ball = ctx.enumerate_ball(3).unwrap();
        (arb_element(ctx.clone(), ball.clone()), arb_element(ctx, ball))
    }

    proptest! {
        #[test]
        fn trace_is_tracial((x, y) in arb_pair()) {
            prop_assert_eq!(x.convolve(&y).unwrap().trace(), y.convolve(&x).unwrap().trace());
        }

        #[test]
        fn adjoint_is_involutive_anti_automorphism((x, y) in arb_pair()) {
            prop_assert_eq!(x.adjoint().unwrap().adjoint().unwrap(), x.clone());
            prop_assert_eq!(
                x.convolve(&y).unwrap().adjoint().unwrap(),
                y.adjoint().unwrap().convolve(&x.adjoint().unwrap()).unwrap()
            );
            prop_assert_eq!(x.adjoint().unwrap().norm_sq(), x.norm_sq());
        }

        #[test]
        fn inner_product_is_trace_of_product((x, y) in arb_pair()) {
            let via_trace = y.adjoint().unwrap().convolve(&x).unwrap().trace();
            prop_assert_eq!(x.inner_product(&y).unwrap(), via_trace.clone());
            prop_assert_eq!(y.inner_product(&x).unwrap(), via_trace);
        }

        #[test]
        fn cauchy_schwarz((x, y) in arb_pair()) {
            let ip = x.inner_product(&y).unwrap();
            prop_assert!(&ip * &ip <= x.norm_sq() * y.norm_sq());
            prop_assert_eq!(x.norm_sq().is_zero(), x.is_zero());
        }
    }
}
