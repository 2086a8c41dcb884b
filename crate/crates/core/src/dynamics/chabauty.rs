use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input, Result};
use crate::expectation::SubalgebraDescriptor;
use crate::group::{GroupElement, Subgroup};
use crate::rational::{self, Rational};

/// Window comparison of `1_{H_n}` against `1_H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChabautyVerdict {
    pub converges: bool,
    /// 1-based index from which every later term agrees with the target.
    pub first_agreement: Option<usize>,
    pub agreement: Vec<bool>,
    /// A window element separating the last term from the target.
    pub last_disagreement: Option<String>,
}

/// Decides agreement of indicator windows on the ball of radius `radius`.
pub fn chabauty_converges(sequence: &[Subgroup], target: &Subgroup, radius: usize) -> Result<ChabautyVerdict> {
    let ctx = target.context();
    for h in sequence {
        if h.context() != ctx {
            return input(format!("subgroup {} lives on {}, target on {}", h.name(), h.context().describe(), ctx.describe()));
        }
    }
    let ball = ctx.enumerate_ball(radius)?;
    let target_ind = ball.iter().map(|g| target.contains(g)).collect::<Result<Vec<_>>>()?;
    let disagreements = sequence
        .par_iter()
        .map(|h| {
            for (g, t) in ball.iter().zip(&target_ind) {
                if h.contains(g)? != *t {
                    return Ok(Some(g.clone()));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<Option<GroupElement>>>>()?;
    let agreement: Vec<bool> = disagreements.iter().map(Option::is_none).collect();
    let tail = agreement.iter().rev().take_while(|a| **a).count();
    let first_agreement = (tail > 0).then(|| agreement.len() - tail + 1);
    Ok(ChabautyVerdict {
        converges: first_agreement.is_some(),
        first_agreement,
        agreement,
        last_disagreement: disagreements.last().cloned().flatten().map(|g| ctx.format(&g)),
    })
}

/// Whether `s ↦ φ_M(s⁻¹ g₀ s)` is constant on the ball of radius `radius`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitConstancy {
    pub constant: bool,
    #[serde(skip)]
    pub value: Rational,
    pub value_exact: String,
    /// Shortlex-least conjugator with a different value, and that value.
    pub counterexample: Option<(String, String)>,
    pub conjugators_checked: usize,
}

pub fn orbit_constancy_check(m: &SubalgebraDescriptor, g0: &GroupElement, radius: usize) -> Result<OrbitConstancy> {
    let ctx = m.context();
    ctx.check(g0)?;
    let value = m.phi_value(g0)?;
    let ball = ctx.enumerate_ball(radius)?;
    let values = ball
        .par_iter()
        .map(|s| m.phi_value(&ctx.conj_inv(s, g0)?))
        .collect::<Result<Vec<_>>>()?;
    let counterexample = ball
        .iter()
        .zip(&values)
        .find(|(_, v)| **v != value)
        .map(|(s, v)| (ctx.format(s), rational::to_exact(v)));
    Ok(OrbitConstancy {
        constant: counterexample.is_none(),
        value_exact: rational::to_exact(&value),
        value,
        counterexample,
        conjugators_checked: ball.len(),
    })
}
