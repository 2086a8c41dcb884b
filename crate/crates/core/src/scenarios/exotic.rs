use std::collections::BTreeSet;

use super::{Basis, Checks, ResolvedParams};
use crate::dynamics::{confinement_probe, default_epsilon, orbit_constancy_check, phi_window, ConjugatorSequence};
use crate::error::{input, Result};
use crate::expectation::SubalgebraDescriptor;
use crate::group::{GroupAutomorphism, GroupContext, GroupElement};
use crate::rational::{self, Rational};

/// Shared checks: constancy of `s ↦ φ_M(s⁻¹ g₀ s)` and the window range `{1/d : d | k}`.
fn fixed_point_checks(
    p: &ResolvedParams,
    c: &mut Checks,
    m: &SubalgebraDescriptor,
    g0: &GroupElement,
    order: u32,
    basis: Basis,
) -> Result<()> {
    let expected = rational::rat(1, order as i64);
    let v = orbit_constancy_check(m, g0, p.conj_radius)?;
    c.holds(
        "orbit_constant",
        &format!("phi_M(s^-1 g0 s) identical for |s| <= {}", p.conj_radius),
        v.constant,
        v.counterexample.as_ref().map(|(s, x)| format!("s = {s} gives {x}")).unwrap_or_default(),
        Basis::Oracle,
    );
    c.eq_rat("orbit_value", "phi_M(g0)", &expected, &v.value, basis);

    let allowed: BTreeSet<Rational> =
        (1..=order).filter(|d| order % d == 0).map(|d| rational::rat(1, d as i64)).collect();
    let window = phi_window(m, p.radius)?;
    let seen: BTreeSet<Rational> = window.entries().map(|(_, v)| v.clone()).collect();
    let outside: Vec<String> = seen.difference(&allowed).map(rational::to_exact).collect();
    c.holds(
        "window_range",
        &format!("phi_M takes values in {{1/d : d | {order}}} on the radius-{} ball", p.radius),
        outside.is_empty(),
        outside.join(", "),
        Basis::Reference,
    );
    c.eq("window_axioms", "phi_M(e) = 1, values in [0,1], phi(g^-1) = phi(g)", String::from("none"), window.axiom_violation().unwrap_or_else(|| "none".into()), Basis::Definition);
    Ok(())
}

pub(super) fn exotic_flip(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    if p.rank < 2 {
        return input("the flip scenario needs rank at least 2");
    }
    let ctx = GroupContext::power(GroupContext::free(p.rank)?, 2)?;
    let m = SubalgebraDescriptor::fixed_point(GroupAutomorphism::coordinate_cycle(ctx)?);
    let g0 = m.context().parse("(a, e)")?;
    fixed_point_checks(p, c, &m, &g0, 2, Basis::Reference)?;

    let seq = ConjugatorSequence::ProductPowers(m.context().parse("(a, e)")?, m.context().parse("(e, b)")?);
    let report = confinement_probe(&m, &seq, p.radius, p.steps, &default_epsilon())?.with_scenario("exotic_flip");
    c.holds(
        "probe_constancy",
        "some window element keeps one nonzero value along (a,e)^n (e,b)^n",
        report.verdicts.constant_at.is_some(),
        report.verdicts.summary(),
        Basis::Oracle,
    );
    c.probe(report);
    Ok(())
}

pub(super) fn exotic_free_swap(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let m = SubalgebraDescriptor::fixed_point(GroupAutomorphism::generator_swap());
    let g0 = m.context().parse("a")?;
    fixed_point_checks(p, c, &m, &g0, 2, Basis::Reference)
}

pub(super) fn exotic_cyclic(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let m = SubalgebraDescriptor::fixed_point(GroupAutomorphism::cyclic_shift(p.rank)?);
    let g0 = m.context().generator(0)?;
    fixed_point_checks(p, c, &m, &g0, p.rank, Basis::Reference)
}

pub(super) fn exotic_product_permutation(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let k = p.rank;
    if k < 2 {
        return input("the product permutation needs at least two factors");
    }
    let ctx = GroupContext::power(GroupContext::free(2)?, k as usize)?;
    let mut coords = vec!["e"; k as usize];
    coords[0] = "a";
    let g0 = ctx.parse(&format!("({})", coords.join(", ")))?;
    let m = SubalgebraDescriptor::fixed_point(GroupAutomorphism::coordinate_cycle(ctx)?);
    fixed_point_checks(p, c, &m, &g0, k, Basis::Reference)
}
