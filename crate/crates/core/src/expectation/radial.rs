//! Lazy spherical representation of expectations onto the radial subalgebra.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigInt, One, Zero};

use crate::algebra::AlgebraElement;
use crate::error::{input, Error, Result};
use crate::group::{GroupContext, GroupElement};
use crate::rational::{self, Rational};

/// Number of reduced words of length `level` in `F_n`: `2n(2n−1)^{ℓ−1}`, and 1 at `ℓ = 0`.
pub fn sphere_size(rank: u32, level: usize) -> BigInt {
    if level == 0 {
        return BigInt::one();
    }
    let n = BigInt::from(rank);
    let two_n = &n * 2;
    let base = &two_n - 1;
    two_n * num::pow(base, level - 1)
}

/// `E(x) = Σ_ℓ r_ℓ w_ℓ`, where `w_ℓ` is the sum of all reduced words of length `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalVector {
    rank: u32,
    levels: BTreeMap<usize, Rational>,
}

impl SphericalVector {
    pub fn zero(rank: u32) -> Self {
        SphericalVector { rank, levels: BTreeMap::new() }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Coefficient `r_ℓ` of `w_ℓ`.
    pub fn level(&self, l: usize) -> Rational {
        self.levels.get(&l).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn levels(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.levels.iter().map(|(l, r)| (*l, r))
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    fn add_level(&mut self, l: usize, r: Rational) {
        let v = self.levels.entry(l).or_insert_with(Rational::zero);
        *v += r;
        if v.is_zero() {
            self.levels.remove(&l);
        }
    }

    /// `‖Σ r_ℓ w_ℓ‖₂² = Σ r_ℓ² |S_ℓ|`.
    pub fn norm_sq(&self) -> Rational {
        self.levels.iter().fold(Rational::zero(), |acc, (l, r)| {
            acc + r * r * Rational::from_integer(sphere_size(self.rank, *l))
        })
    }

    pub fn trace(&self) -> Rational {
        self.level(0)
    }

    /// `⟨x, Σ r_ℓ w_ℓ⟩ = Σ_g c_g r_{ℓ(g)}`.
    pub fn inner_product_with(&self, x: &AlgebraElement) -> Result<Rational> {
        let ctx = x.context();
        check_free(ctx, self.rank)?;
        let mut acc = Rational::zero();
        for (g, c) in x.terms() {
            if let Some(r) = self.levels.get(&ctx.word_length(g)?) {
                acc += c * r;
            }
        }
        Ok(acc)
    }

    /// Expands into an explicit group-algebra element. Exponential in the top level.
    pub fn materialize(&self, context: &Arc<GroupContext>) -> Result<AlgebraElement> {
        check_free(context, self.rank)?;
        let top = self.levels.keys().next_back().copied().unwrap_or(0);
        let mut out = AlgebraElement::zero(context);
        for (l, sphere) in context.spheres(top, crate::group::DEFAULT_BALL_BUDGET)?.into_iter().enumerate() {
            if let Some(r) = self.levels.get(&l) {
                for g in sphere {
                    out.add_term(g, r.clone());
                }
            }
        }
        Ok(out)
    }
}

fn check_free(ctx: &GroupContext, rank: u32) -> Result<()> {
    match ctx {
        GroupContext::Free { rank: n } if *n == rank => Ok(()),
        _ => Err(Error::ContextMismatch(format!("radial data for F{rank} used on {}", ctx.describe()))),
    }
}

/// Spherical coefficients of the expectation of `x` onto the radial subalgebra of `F_n`.
pub fn radial_spherical(rank: u32, x: &AlgebraElement) -> Result<SphericalVector> {
    if rank < 2 {
        return input("the radial subalgebra needs rank at least 2");
    }
    check_free(x.context(), rank)?;
    let mut sums: BTreeMap<usize, Rational> = BTreeMap::new();
    for (g, c) in x.terms() {
        *sums.entry(x.context().word_length(g)?).or_insert_with(Rational::zero) += c;
    }
    let mut v = SphericalVector::zero(rank);
    for (l, s) in sums {
        let r = s / Rational::from_integer(sphere_size(rank, l));
        v.add_level(l, r);
    }
    Ok(v)
}

/// Spherical vector of a single basis element: `r_{ℓ(g)} = 1/|S_{ℓ(g)}|`.
pub fn radial_of_basis(rank: u32, context: &GroupContext, g: &GroupElement) -> Result<SphericalVector> {
    check_free(context, rank)?;
    let l = context.word_length(g)?;
    let mut v = SphericalVector::zero(rank);
    v.add_level(l, rational::one() / Rational::from_integer(sphere_size(rank, l)));
    Ok(v)
}
