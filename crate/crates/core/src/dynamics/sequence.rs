use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::group::{GroupContext, GroupElement, Subgroup, DEFAULT_BALL_BUDGET};

/// Where conjugates must not land.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationTarget {
    Elements(Vec<GroupElement>),
    /// Every element of length at most the radius.
    Ball(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparationMode {
    /// `s F s⁻¹ ∩ F'⟨a_1⟩F' = ∅` with `s = a_2^ℓ a_1^k`; the search bound caps `k + ℓ`.
    Generator { bound: u32 },
    /// `s⁻¹ F s ∩ F' = ∅`, `s` the shortlex-least such element of length at most `bound`.
    /// Also available on free products.
    Icc { bound: usize },
}

/// A conjugator together with the exhaustive check that certifies it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationCertificate {
    pub conjugator: String,
    /// `(k, ℓ)` for the generator construction.
    pub exponents: Option<(u32, u32)>,
    pub membership_checks: usize,
    /// Least word length among the certified conjugates.
    pub min_conjugate_length: Option<usize>,
}

fn in_target(ctx: &GroupContext, target: &SeparationTarget, x: &GroupElement) -> Result<bool> {
    Ok(match target {
        SeparationTarget::Elements(v) => v.contains(x),
        SeparationTarget::Ball(r) => ctx.word_length(x)? <= *r,
    })
}

/// Finds a conjugator separating `f_set` from `target` and certifies it by exhaustive checks.
pub fn separation_search(
    ctx: &GroupContext,
    mode: &SeparationMode,
    f_set: &[GroupElement],
    target: &SeparationTarget,
) -> Result<(GroupElement, SeparationCertificate)> {
    let rank = match (ctx, mode) {
        (GroupContext::Free { rank }, _) => *rank,
        (GroupContext::FreeProduct { orders }, SeparationMode::Icc { .. }) => orders.len() as u32,
        _ => {
            return Err(Error::Unsupported(format!(
                "this separation mode needs a free group, got {}",
                ctx.describe()
            )))
        }
    };
    for f in f_set {
        ctx.check(f)?;
        if ctx.is_identity(f) {
            return input("the separated set must not contain e");
        }
    }
    if let SeparationTarget::Elements(v) = target {
        for x in v {
            ctx.check(x)?;
        }
    }
    if f_set.is_empty() {
        let e = ctx.identity();
        let cert = SeparationCertificate {
            conjugator: ctx.format(&e),
            exponents: None,
            membership_checks: 0,
            min_conjugate_length: None,
        };
        return Ok((e, cert));
    }
    match mode {
        SeparationMode::Generator { bound } => {
            if rank < 2 {
                return input("the generator construction needs rank at least 2");
            }
            let a1 = ctx.generator(0)?;
            let a2 = ctx.generator(1)?;
            let h = Subgroup::cyclic(ctx.clone(), a1.clone())?;
            let outer: Vec<GroupElement> = match target {
                SeparationTarget::Elements(v) => v.clone(),
                SeparationTarget::Ball(r) => ctx.enumerate_ball(*r)?,
            };
            let outer_inv = outer.iter().map(|x| ctx.inverse(x)).collect::<Result<Vec<_>>>()?;
            let mut checks = 0usize;
            for total in 2..=*bound {
                for k in 1..total {
                    let l = total - k;
                    let s = ctx.op(&ctx.pow(&a2, l as i64)?, &ctx.pow(&a1, k as i64)?)?;
                    let mut ok = true;
                    'outer: for f in f_set {
                        let w = ctx.conj(&s, f)?;
                        for f1i in &outer_inv {
                            let left = ctx.op(f1i, &w)?;
                            for f2i in &outer_inv {
                                checks += 1;
                                if h.contains(&ctx.op(&left, f2i)?)? {
                                    ok = false;
                                    break 'outer;
                                }
                            }
                        }
                    }
                    if ok {
                        let min_len = f_set
                            .iter()
                            .map(|f| ctx.word_length(&ctx.conj(&s, f)?))
                            .collect::<Result<Vec<_>>>()?
                            .into_iter()
                            .min();
                        let cert = SeparationCertificate {
                            conjugator: ctx.format(&s),
                            exponents: Some((k, l)),
                            membership_checks: checks,
                            min_conjugate_length: min_len,
                        };
                        return Ok((s, cert));
                    }
                }
            }
            Err(Error::Resource { what: "generator separation search over k + l".into(), bound: *bound as usize })
        }
        SeparationMode::Icc { bound } => {
            let max_f = f_set.iter().map(|f| ctx.word_length(f)).collect::<Result<Vec<_>>>()?;
            let max_f = max_f.into_iter().max().unwrap_or(0);
            // ℓ(s⁻¹fs) ≤ 2ℓ(s) + ℓ(f), so shorter conjugators cannot clear a ball.
            let start = match target {
                SeparationTarget::Ball(r) => (r + 1).saturating_sub(max_f).div_ceil(2),
                SeparationTarget::Elements(_) => 0,
            };
            let mut checks = 0usize;
            for radius in start..=*bound {
                let sphere = ctx.spheres(radius, DEFAULT_BALL_BUDGET)?.pop().unwrap_or_default();
                for s in &sphere {
                    let mut ok = true;
                    let mut min_len = usize::MAX;
                    for f in f_set {
                        checks += 1;
                        let c = ctx.conj_inv(s, f)?;
                        if in_target(ctx, target, &c)? {
                            ok = false;
                            break;
                        }
                        min_len = min_len.min(ctx.word_length(&c)?);
                    }
                    if ok {
                        let cert = SeparationCertificate {
                            conjugator: ctx.format(s),
                            exponents: None,
                            membership_checks: checks,
                            min_conjugate_length: Some(min_len),
                        };
                        return Ok((s.clone(), cert));
                    }
                }
            }
            Err(Error::Resource { what: "icc separation search over conjugator length".into(), bound: *bound })
        }
    }
}

/// A deterministic sequence of conjugators `s_1, s_2, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugatorSequence {
    /// `s_n = wⁿ`.
    PowersOf(GroupElement),
    /// `s_n = xⁿ yⁿ`.
    ProductPowers(GroupElement, GroupElement),
    /// Step `m` separates `F = B(R) \ {e}` from `B(L_m)`, where `L_1 = R` and
    /// `L_{m+1}` is the shortest conjugate length reached at step `m`.
    IccSeparation { radius: usize, bound: usize },
    /// Step `m` conjugates by `s⁻¹` for the generator construction
    /// `s = a_2^ℓ a_1^k` separating `B(R) \ {e}` from `B(r_m)⟨a_1⟩B(r_m)`,
    /// `r_m = min(m − 1, outer_cap)`.
    GeneratorSeparation { radius: usize, outer_cap: usize, bound: u32 },
    Explicit(Vec<GroupElement>),
}

/// Conjugators produced for a probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedSequence {
    pub conjugators: Vec<GroupElement>,
    pub certificates: Vec<Option<SeparationCertificate>>,
    /// Fewer conjugators than requested were available.
    pub exhausted: bool,
}

impl ConjugatorSequence {
    pub fn name(&self, ctx: &GroupContext) -> String {
        match self {
            ConjugatorSequence::PowersOf(w) => format!("powers of {}", ctx.format(w)),
            ConjugatorSequence::ProductPowers(x, y) => format!("{}^n {}^n", ctx.format(x), ctx.format(y)),
            ConjugatorSequence::IccSeparation { radius, .. } => format!("icc separation (R={radius})"),
            ConjugatorSequence::GeneratorSeparation { radius, .. } => format!("generator separation (R={radius})"),
            ConjugatorSequence::Explicit(v) => format!("explicit ({} elements)", v.len()),
        }
    }

    pub fn generate(&self, ctx: &GroupContext, steps: usize) -> Result<GeneratedSequence> {
        let mut conjugators = Vec::with_capacity(steps);
        let mut certificates = Vec::with_capacity(steps);
        let mut exhausted = false;
        match self {
            ConjugatorSequence::PowersOf(w) => {
                ctx.check(w)?;
                for n in 1..=steps {
                    conjugators.push(ctx.pow(w, n as i64)?);
                    certificates.push(None);
                }
            }
            ConjugatorSequence::ProductPowers(x, y) => {
                ctx.check(x)?;
                ctx.check(y)?;
                for n in 1..=steps {
                    conjugators.push(ctx.op(&ctx.pow(x, n as i64)?, &ctx.pow(y, n as i64)?)?);
                    certificates.push(None);
                }
            }
            ConjugatorSequence::IccSeparation { radius, bound } => {
                let f_set: Vec<GroupElement> = ctx.enumerate_ball(*radius)?.into_iter().skip(1).collect();
                let mut level = *radius;
                for _ in 0..steps {
                    let (s, cert) = separation_search(
                        ctx,
                        &SeparationMode::Icc { bound: *bound },
                        &f_set,
                        &SeparationTarget::Ball(level),
                    )?;
                    level = cert.min_conjugate_length.unwrap_or(level);
                    conjugators.push(s);
                    certificates.push(Some(cert));
                }
            }
            ConjugatorSequence::GeneratorSeparation { radius, outer_cap, bound } => {
                let f_set: Vec<GroupElement> = ctx.enumerate_ball(*radius)?.into_iter().skip(1).collect();
                for m in 1..=steps {
                    let r = (m - 1).min(*outer_cap);
                    let (s, cert) = separation_search(
                        ctx,
                        &SeparationMode::Generator { bound: *bound + m as u32 },
                        &f_set,
                        &SeparationTarget::Ball(r),
                    )?;
                    conjugators.push(ctx.inverse(&s)?);
                    certificates.push(Some(cert));
                }
            }
            ConjugatorSequence::Explicit(v) => {
                for s in v.iter().take(steps) {
                    ctx.check(s)?;
                    conjugators.push(s.clone());
                    certificates.push(None);
                }
                exhausted = v.len() < steps;
            }
        }
        Ok(GeneratedSequence { conjugators, certificates, exhausted })
    }
}
