use std::collections::BTreeMap;
use std::sync::Arc;

use num::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expectation::SubalgebraDescriptor;
use crate::group::{GroupContext, GroupElement};
use crate::rational::Rational;

/// A positive definite function restricted to the ball of radius `radius`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PDWindow {
    context: Arc<GroupContext>,
    radius: usize,
    values: BTreeMap<GroupElement, Rational>,
}

impl PDWindow {
    /// A window from arbitrary values; used for hand-made controls.
    pub fn from_fn<F>(context: &Arc<GroupContext>, radius: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&GroupElement) -> Result<Rational>,
    {
        let mut values = BTreeMap::new();
        for g in context.enumerate_ball(radius)? {
            let v = f(&g)?;
            values.insert(g, v);
        }
        Ok(PDWindow { context: context.clone(), radius, values })
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.context
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn value(&self, g: &GroupElement) -> Option<&Rational> {
        self.values.get(g)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GroupElement, &Rational)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `φ(e) = 1`, `0 ≤ φ ≤ 1`, `φ(g⁻¹) = φ(g)`; returns the first violation.
    pub fn axiom_violation(&self) -> Option<String> {
        let e = self.context.identity();
        if self.values.get(&e).map(|v| !v.is_one()).unwrap_or(true) {
            return Some("value at e is not 1".into());
        }
        for (g, v) in &self.values {
            if v.is_negative() || *v > Rational::one() {
                return Some(format!("value at {} outside [0,1]", self.context.format(g)));
            }
            let gi = self.context.inverse(g).ok()?;
            if self.values.get(&gi) != Some(v) {
                return Some(format!("value at {} differs from its inverse", self.context.format(g)));
            }
        }
        None
    }

    /// True when the window is `δ_e`.
    pub fn is_delta(&self) -> bool {
        self.values.iter().all(|(g, v)| if self.context.is_identity(g) { v.is_one() } else { v.is_zero() })
    }

    /// Largest off-identity value with its shortlex-least argument.
    pub fn max_off_identity(&self) -> Option<(&GroupElement, &Rational)> {
        let mut best: Option<(&GroupElement, &Rational)> = None;
        for (g, v) in &self.values {
            if self.context.is_identity(g) {
                continue;
            }
            if best.map(|(_, b)| v > b).unwrap_or(true) {
                best = Some((g, v));
            }
        }
        best
    }
}

/// `φ_M` on the ball of radius `radius`.
pub fn phi_window(m: &SubalgebraDescriptor, radius: usize) -> Result<PDWindow> {
    act(&m.context().identity(), m, radius)
}

/// `(s·φ_M)(g) = φ_M(s⁻¹gs)` on the ball of radius `radius`.
pub fn act(s: &GroupElement, m: &SubalgebraDescriptor, radius: usize) -> Result<PDWindow> {
    let ctx = m.context();
    ctx.check(s)?;
    let ball = ctx.enumerate_ball(radius)?;
    let values = ball
        .into_par_iter()
        .map(|g| {
            let v = m.phi_value(&ctx.conj_inv(s, &g)?)?;
            Ok((g, v))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(PDWindow { context: ctx.clone(), radius, values })
}

/// Outcome of the exact Gram-matrix test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsdVerdict {
    pub psd: bool,
    pub rank: usize,
    /// Indices of a principal minor with negative determinant when not PSD.
    pub witness: Option<Vec<usize>>,
}

/// Decides whether `[φ(g_i⁻¹ g_j)]` is positive semidefinite by exact
/// symmetric elimination.
pub fn gram_psd_check(window: &PDWindow, elements: &[GroupElement]) -> Result<PsdVerdict> {
    let ctx = window.context();
    let n = elements.len();
    let mut a = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        let gi = ctx.inv(&elements[i])?;
        for j in 0..n {
            let h = ctx.op(&gi, &elements[j])?;
            a[i][j] = window
                .value(&h)
                .cloned()
                .ok_or_else(|| Error::Input(format!("{} lies outside the window", ctx.format(&h))))?;
        }
    }
    let mut pivots: Vec<usize> = Vec::new();
    let mut done = vec![false; n];
    for k in 0..n {
        let d = a[k][k].clone();
        if d.is_negative() {
            let mut w = pivots.clone();
            w.push(k);
            return Ok(PsdVerdict { psd: false, rank: pivots.len(), witness: Some(w) });
        }
        if d.is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !done[j] && !a[k][j].is_zero()) {
                let mut w = pivots.clone();
                w.push(k);
                w.push(j);
                return Ok(PsdVerdict { psd: false, rank: pivots.len(), witness: Some(w) });
            }
            done[k] = true;
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &d;
            for j in k + 1..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
        pivots.push(k);
        done[k] = true;
    }
    Ok(PsdVerdict { psd: true, rank: pivots.len(), witness: None })
}
