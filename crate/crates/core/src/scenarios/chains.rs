use num::Zero;

use super::{Basis, Checks, ResolvedParams};
use crate::dynamics::{chabauty_converges, default_epsilon, sequence_probe};
use crate::error::{input, Result};
use crate::expectation::SubalgebraDescriptor;
use crate::group::{GroupContext, GroupElement, Subgroup, SubgroupSpec};

/// Radius used for the free-group chains.
const FREE_RADIUS: usize = 6;

/// Signed area `Σ x dy` swept by the lattice path of a word in `F_2`: the image in `γ_2/γ_3` of an
/// element with zero exponent sums.
fn signed_area(g: &GroupElement) -> (i64, i64, i64) {
    let (mut x, mut y, mut area) = (0i64, 0i64, 0i64);
    if let Some(w) = g.as_word() {
        for s in w.syllables() {
            if s.generator == 0 {
                x += s.exponent;
            } else {
                area += x * s.exponent;
                y += s.exponent;
            }
        }
    }
    (x, y, area)
}

fn zero_step_index(values: &[bool]) -> Option<usize> {
    let tail = values.iter().rev().take_while(|z| **z).count();
    (tail > 0).then(|| values.len() - tail + 1)
}

pub(super) fn chabauty_normal_chain(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    if p.steps == 0 {
        return input("chabauty_normal_chain needs at least one step");
    }
    if p.steps > 62 {
        return input("at most 62 steps for the 2^k chain");
    }
    // 2^k Z in Z.
    let z = GroupContext::free(1)?;
    let a = z.generator(0)?;
    let chain = (1..=p.steps)
        .map(|k| Subgroup::cyclic(z.clone(), z.pow(&a, 1i64 << k)?))
        .collect::<Result<Vec<_>>>()?;
    let verdict = chabauty_converges(&chain, &Subgroup::trivial(z.clone()), p.radius)?;
    let first_past = (1..=p.steps).find(|&k| (1usize << k) > p.radius);
    c.eq(
        "integers_first_agreement",
        &format!("first k with 1_(2^k Z) = 1_{{0}} on [-{r}, {r}]", r = p.radius),
        format!("{first_past:?}"),
        format!("{:?}", verdict.first_agreement),
        Basis::Oracle,
    );
    let descriptors: Vec<SubalgebraDescriptor> = chain.iter().cloned().map(SubalgebraDescriptor::subgroup).collect();
    let probe = sequence_probe(&descriptors, p.radius, &default_epsilon())?.with_scenario("chabauty_normal_chain");
    let zeros: Vec<bool> = probe.steps.iter().map(|s| s.value.is_zero()).collect();
    c.eq(
        "integers_probe_zero_from",
        "first k from which max_g phi_(L(2^k Z))(g) = 0 on the window",
        format!("{first_past:?}"),
        format!("{:?}", zero_step_index(&zeros)),
        Basis::Oracle,
    );
    c.probe(probe);

    // Kernels of F_2 -> (Z/2^k)^2 all contain the commutator subgroup.
    let f2 = GroupContext::free(2)?;
    let kernels = (1..=p.steps)
        .map(|k| Subgroup::new(f2.clone(), SubgroupSpec::AbelianKernel { moduli: vec![1 << k, 1 << k] }))
        .collect::<Result<Vec<_>>>()?;
    let to_trivial = chabauty_converges(&kernels, &Subgroup::trivial(f2.clone()), FREE_RADIUS)?;
    let commutator = f2.parse("a b A B")?;
    let mut in_all = true;
    for h in &kernels {
        in_all &= h.contains(&commutator)?;
    }
    c.holds("kernels_contain_commutator", "[a,b] lies in every kernel", in_all, "", Basis::Oracle);
    c.holds(
        "kernels_miss_trivial",
        "kernel windows never reach delta_e",
        !to_trivial.converges,
        format!("{:?}", to_trivial.first_agreement),
        Basis::Oracle,
    );
    let derived = Subgroup::new(f2.clone(), SubgroupSpec::AbelianKernel { moduli: vec![0, 0] })?;
    let to_derived = chabauty_converges(&kernels, &derived, FREE_RADIUS)?;
    let first_kernel = (1..=p.steps).find(|&k| (1usize << k) > FREE_RADIUS);
    c.eq(
        "kernels_first_agreement_with_commutator_subgroup",
        "first k with 2^k above every exponent sum on the ball",
        format!("{first_kernel:?}"),
        format!("{:?}", to_derived.first_agreement),
        Basis::Oracle,
    );
    c.note(format!(
        "kernels of F2 -> (Z/2^k)^2 converge on the radius-{FREE_RADIUS} window to [F2,F2], not to {{e}}; the lower central series is the chain reaching delta_e"
    ));

    // Lower central series gamma_2, gamma_3, ...
    let lower = (2..=p.steps as u32 + 1)
        .map(|k| Subgroup::new(f2.clone(), SubgroupSpec::LowerCentral { term: k }))
        .collect::<Result<Vec<_>>>()?;
    let lc = chabauty_converges(&lower, &Subgroup::trivial(f2.clone()), FREE_RADIUS)?;
    // Nontrivial elements of gamma_3 have zero exponent sums and zero signed area.
    let mut area_kernel = 0usize;
    for g in f2.enumerate_ball(FREE_RADIUS)?.into_iter().skip(1) {
        if signed_area(&g) == (0, 0, 0) {
            area_kernel += 1;
        }
    }
    let expected_index = if area_kernel == 0 && p.steps >= 2 { Some(2) } else { None };
    c.eq(
        "lower_central_first_agreement",
        "gamma_2 contains [a,b]; gamma_3 misses the ball when no nontrivial word has zero sums and zero area",
        format!("{expected_index:?}"),
        format!("{:?}", lc.first_agreement),
        Basis::Oracle,
    );
    let lc_descriptors: Vec<SubalgebraDescriptor> = lower.iter().cloned().map(SubalgebraDescriptor::subgroup).collect();
    let lc_probe = sequence_probe(&lc_descriptors, FREE_RADIUS, &default_epsilon())?.with_scenario("chabauty_normal_chain");
    let lc_zeros: Vec<bool> = lc_probe.steps.iter().map(|s| s.value.is_zero()).collect();
    c.eq(
        "lower_central_probe_zero_from",
        "subgroup-algebra probe is exactly 0 from the agreement index",
        format!("{:?}", lc.first_agreement),
        format!("{:?}", zero_step_index(&lc_zeros)),
        Basis::Oracle,
    );
    c.probe(lc_probe);
    Ok(())
}
