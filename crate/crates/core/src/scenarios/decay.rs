use std::sync::Arc;

use num::{One, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Basis, Checks, ResolvedParams};
use crate::algebra::AlgebraElement;
use crate::dynamics::{confinement_probe, default_epsilon, phi_window, ConjugatorSequence};
use crate::error::{input, Result};
use crate::expectation::{sphere_size, two_projection_blocks, SubalgebraDescriptor};
use crate::group::{GroupAutomorphism, GroupContext, GroupElement, Subgroup};
use crate::rational::{self, Rational};

const UNITARY_NOTE: &str =
    "conjugation is by group elements only (u = identity); general unitary perturbations are not computed";

fn inverse_sphere(rank: u32, level: usize) -> Rational {
    Rational::one() / Rational::from_integer(sphere_size(rank, level))
}

fn free(rank: u32) -> Result<Arc<GroupContext>> {
    if rank < 2 {
        return input("this scenario needs rank at least 2");
    }
    Ok(Arc::new(GroupContext::free(rank)?))
}

/// A word lies in `⟨a_1⟩` iff its reduced form uses only the first generator.
fn only_first_generator(g: &GroupElement) -> bool {
    g.as_word().map(|w| w.syllables().iter().all(|s| s.generator == 0)).unwrap_or(false)
}

pub(super) fn radial_nonconvergence(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let n = p.rank;
    let ctx = free(n)?;
    let m = SubalgebraDescriptor::radial(n)?;
    let a = ctx.generator(0)?;
    let h = Subgroup::cyclic((*ctx).clone(), a.clone())?;

    let generators_sum = AlgebraElement::from_terms(&ctx, ctx.symmetric_generators().into_iter().map(|g| (g, rational::one())))?;
    let a_elem = AlgebraElement::basis(&ctx, a.clone());
    c.eq_rat("pairing", "<a_1, sum_i a_i + a_i^-1>", &rational::one(), &a_elem.inner_product(&generators_sum)?, Basis::Reference);
    let sphere_one = ctx.sphere_sizes(1)?[1];
    c.eq_rat(
        "first_level_norm",
        "||E_B(a_1)||^2 = 1/|S_1|",
        &rational::rat(1, sphere_one as i64),
        &m.phi_value(&a)?,
        Basis::Oracle,
    );

    let mut pool = Vec::new();
    for g in ctx.enumerate_ball(p.radius)? {
        if !h.contains(&g)? {
            pool.push(g);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut picks = sample(&mut rng, pool.len(), pool.len().min(6)).into_vec();
    picks.sort_unstable();
    for i in picks {
        let g = &pool[i];
        let lg = ctx.word_length(g)?;
        let label = ctx.format(g);
        let mut mismatches = Vec::new();
        let mut last = Rational::one();
        for j in 1..=p.steps {
            let conj = ctx.conj_inv(&ctx.pow(&a, j as i64)?, g)?;
            let l = ctx.word_length(&conj)?;
            let v = m.phi_value(&conj)?;
            if v != inverse_sphere(n, l) {
                mismatches.push(format!("j={j}"));
            }
            if l + lg < 2 * j {
                mismatches.push(format!("length bound at j={j}"));
            }
            last = v;
        }
        c.holds(
            &format!("spherical_values[{label}]"),
            "||E_B(a^-j g a^j)||^2 = 1/|S_l|, l = |a^-j g a^j| >= 2j - |g|",
            mismatches.is_empty(),
            mismatches.join(", "),
            Basis::Oracle,
        );
        if 2 * p.steps > lg {
            let bound = inverse_sphere(n, 2 * p.steps - lg);
            c.holds(
                &format!("decay[{label}]"),
                "final value <= 1/|S_(2J - |g|)|",
                last <= bound,
                rational::to_exact(&last),
                Basis::Oracle,
            );
        }
    }
    Ok(())
}

pub(super) fn generator_masa_unconfined(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let ctx = free(p.rank)?;
    let a = ctx.generator(0)?;
    let m = SubalgebraDescriptor::subgroup(Subgroup::cyclic((*ctx).clone(), a)?);
    let seq = ConjugatorSequence::GeneratorSeparation {
        radius: p.radius,
        outer_cap: p.conj_radius,
        bound: (4 * (p.radius + p.conj_radius) + 8) as u32,
    };
    let report = confinement_probe(&m, &seq, p.radius, p.steps, &default_epsilon())?.with_scenario("generator_masa_unconfined");
    c.note(UNITARY_NOTE);
    let window: Vec<GroupElement> = ctx.enumerate_ball(p.radius)?.into_iter().skip(1).collect();
    for step in &report.steps {
        c.eq_rat(
            &format!("step_{}_value", step.step),
            "max_g ||E_A(s^-1 g s)||^2",
            &Rational::zero(),
            &step.value,
            Basis::Reference,
        );
        let s = ctx.parse(&step.conjugator)?;
        let mut escapes = true;
        for g in &window {
            if only_first_generator(&ctx.conj_inv(&s, g)?) {
                escapes = false;
            }
        }
        c.holds(
            &format!("step_{}_certificate", step.step),
            "s^-1 g s is not a power of a_1 for every window element",
            escapes && step.certificate.as_ref().and_then(|x| x.exponents).is_some(),
            step.conjugator.clone(),
            Basis::Oracle,
        );
    }
    c.eq("step_count", "records", p.steps, report.steps.len(), Basis::Definition);
    c.probe(report);
    Ok(())
}

pub(super) fn radial_masa_unconfined(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let n = p.rank;
    let ctx = free(n)?;
    let m = SubalgebraDescriptor::radial(n)?;
    let seq = ConjugatorSequence::IccSeparation { radius: p.radius, bound: p.radius + p.steps + 4 };
    let eps = default_epsilon();
    let report = confinement_probe(&m, &seq, p.radius, p.steps, &eps)?.with_scenario("radial_masa_unconfined");
    c.note(UNITARY_NOTE);
    let window: Vec<GroupElement> = ctx.enumerate_ball(p.radius)?.into_iter().skip(1).collect();
    for step in &report.steps {
        let s = ctx.parse(&step.conjugator)?;
        let mut shortest = usize::MAX;
        for g in &window {
            shortest = shortest.min(ctx.word_length(&ctx.conj_inv(&s, g)?)?);
        }
        c.eq_rat(
            &format!("step_{}_value", step.step),
            "max_g ||E_B(s^-1 g s)||^2 = 1/|S_l|, l the shortest conjugate length",
            &inverse_sphere(n, shortest),
            &step.value,
            Basis::Oracle,
        );
    }
    c.holds("strictly_decreasing", "step values strictly decrease", report.verdicts.strictly_decreasing, "", Basis::Reference);
    c.holds(
        "below_epsilon",
        "final value < 1/1000",
        report.verdicts.unconfinement_witnessed,
        report.steps.last().map(|s| s.value_exact.clone()).unwrap_or_default(),
        Basis::Reference,
    );
    c.probe(report);
    Ok(())
}

pub(super) fn semidirect_radial(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let base = GroupContext::free(2)?;
    let ctx = Arc::new(GroupContext::semidirect(GroupAutomorphism::generator_swap())?);
    let m = SubalgebraDescriptor::radial_tensor_finite(&ctx)?;
    let x = ctx.parse("(a; 0)")?;
    let y = ctx.parse("(b; 0)")?;
    let seq = ConjugatorSequence::ProductPowers(x, y);
    let report = confinement_probe(&m, &seq, p.radius, p.steps, &default_epsilon())?.with_scenario("semidirect_radial");
    let (a, b) = (base.parse("a")?, base.parse("b")?);
    let window: Vec<GroupElement> = ctx.enumerate_ball(p.radius)?.into_iter().skip(1).collect();
    for step in &report.steps {
        let n = step.step as i64;
        let (an, bn) = (base.pow(&a, n)?, base.pow(&b, n)?);
        let h = ctx.parse(&step.conjugator)?;
        let left = base.inv(&base.mul(&an, &bn)?)?;
        let mut mismatches = 0usize;
        let mut best = Rational::zero();
        for g in &window {
            let (xw, twist) = match g {
                GroupElement::Twisted { base: w, twist } => (w.as_ref(), *twist),
                _ => return input("semidirect window element without a twist"),
            };
            // Case 1: b^-n a^-n x a^n b^n.  Case 2: b^-n a^-n x b^n a^n, times s.
            let right = if twist == 0 { base.mul(&an, &bn)? } else { base.mul(&bn, &an)? };
            let conj = base.mul(&base.mul(&left, xw)?, &right)?;
            let expected = inverse_sphere(2, base.word_length(&conj)?);
            let actual = m.phi_value(&ctx.conj_inv(&h, g)?)?;
            if actual != expected {
                mismatches += 1;
            }
            if expected > best {
                best = expected;
            }
        }
        c.eq(
            &format!("step_{}_case_formulas", step.step),
            "window values equal 1/|S_l| with l from the case 1 / case 2 words",
            0,
            mismatches,
            Basis::Oracle,
        );
        c.eq_rat(&format!("step_{}_value", step.step), "max over the window", &best, &step.value, Basis::Oracle);
        for k in 1..=2i64 {
            let w = base.mul(&base.mul(&base.inv(&bn)?, &base.pow(&a, k)?)?, &bn)?;
            c.eq(
                &format!("step_{}_power_length_{k}", step.step),
                "|b^-n a^k b^n| = 2n + |k|",
                (2 * n + k) as usize,
                base.word_length(&w)?,
                Basis::Reference,
            );
        }
    }
    c.holds("strictly_decreasing", "step values strictly decrease", report.verdicts.strictly_decreasing, "", Basis::Reference);
    c.holds(
        "below_epsilon",
        "final value < 1/1000",
        report.verdicts.unconfinement_witnessed,
        report.steps.last().map(|s| s.value_exact.clone()).unwrap_or_default(),
        Basis::Reference,
    );
    c.probe(report);
    Ok(())
}

pub(super) fn finite_dim_unconfined(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let ctx = Arc::new(GroupContext::z_star_z2());
    let m = SubalgebraDescriptor::finite_dimensional(two_projection_blocks(&ctx)?);
    let t = ctx.parse("b")?;
    let start = phi_window(&m, p.radius)?;
    let top = start.max_off_identity().map(|(_, v)| v.clone()).unwrap_or_else(Rational::zero);
    c.eq_rat("unconjugated_value", "max_g ||E_M(g)||^2 before conjugation", &rational::one(), &top, Basis::Oracle);
    c.eq_rat("value_at_t", "||E_M(t)||^2", &rational::one(), &m.phi_value(&t)?, Basis::Oracle);

    let seq = ConjugatorSequence::IccSeparation { radius: p.radius, bound: p.radius + p.steps + 4 };
    let report = confinement_probe(&m, &seq, p.radius, p.steps, &default_epsilon())?.with_scenario("finite_dim_unconfined");
    let window: Vec<GroupElement> = ctx.enumerate_ball(p.radius)?.into_iter().skip(1).collect();
    for step in &report.steps {
        c.eq_rat(&format!("step_{}_value", step.step), "max_g ||E_M(s^-1 g s)||^2", &Rational::zero(), &step.value, Basis::Reference);
        let s = ctx.parse(&step.conjugator)?;
        let mut hits = 0usize;
        for g in &window {
            if ctx.conj_inv(&s, g)? == t {
                hits += 1;
            }
        }
        c.eq(&format!("step_{}_misses_t", step.step), "#{g : s^-1 g s = t}", 0, hits, Basis::Oracle);
    }
    c.probe(report);
    Ok(())
}
