//! Conjugation dynamics of subalgebra states on finite windows.

mod chabauty;
mod probe;
mod sequence;
mod window;

pub use chabauty::{chabauty_converges, orbit_constancy_check, ChabautyVerdict, OrbitConstancy};
pub use probe::{confinement_probe, default_epsilon, sequence_probe, DecayReport, StepRecord, Verdicts};
pub use sequence::{
    separation_search, ConjugatorSequence, GeneratedSequence, SeparationCertificate, SeparationMode,
    SeparationTarget,
};
pub use window::{act, gram_psd_check, phi_window, PDWindow, PsdVerdict};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num::{One, Zero};

    use super::*;
    use crate::expectation::{sphere_size, SubalgebraDescriptor};
    use crate::group::{GroupAutomorphism, GroupContext, GroupElement, Subgroup, SubgroupSpec};
    use crate::rational::{int, rat, Rational};

    fn f2() -> GroupContext {
        GroupContext::free(2).unwrap()
    }

    fn cyclic_a() -> SubalgebraDescriptor {
        let ctx = f2();
        let a = ctx.parse("a").unwrap();
        SubalgebraDescriptor::subgroup(Subgroup::cyclic(ctx, a).unwrap())
    }

    fn flip() -> SubalgebraDescriptor {
        let ctx = GroupContext::power(f2(), 2).unwrap();
        SubalgebraDescriptor::fixed_point(GroupAutomorphism::coordinate_cycle(ctx).unwrap())
    }

    #[test]
    fn trivial_window_is_delta() {
        let ctx = Arc::new(f2());
        let w = phi_window(&SubalgebraDescriptor::trivial(&ctx), 3).unwrap();
        assert!(w.is_delta());
        assert_eq!(w.axiom_violation(), None);
    }

    #[test]
    fn flip_window_takes_half_and_one() {
        let w = phi_window(&flip(), 2).unwrap();
        assert_eq!(w.axiom_violation(), None);
        assert!(w.entries().all(|(_, v)| *v == rat(1, 2) || v.is_one()));
        assert!(w.entries().any(|(_, v)| *v == rat(1, 2)));
    }

    #[test]
    fn subgroup_window_is_indicator() {
        let m = cyclic_a();
        let ctx = m.context().clone();
        let w = phi_window(&m, 3).unwrap();
        for (g, v) in w.entries() {
            let is_power = g.as_word().unwrap().syllables().iter().all(|s| s.generator == 0);
            assert_eq!(v.is_one(), is_power);
            assert!(v.is_one() || v.is_zero());
        }
        let b = ctx.parse("b").unwrap();
        let acted = act(&b, &m, 3).unwrap();
        for (g, v) in acted.entries() {
            let inside = ctx.conj_inv(&b, g).unwrap().as_word().unwrap().syllables().iter().all(|s| s.generator == 0);
            assert_eq!(v.is_one(), inside);
        }
        assert_eq!(act(&ctx.identity(), &m, 3).unwrap(), w);
    }

    #[test]
    fn gram_checks() {
        let ctx = Arc::new(f2());
        let half: Vec<GroupElement> = ["e", "a", "b", "A", "ab", "Ba"].iter().map(|w| ctx.parse(w).unwrap()).collect();
        for m in [cyclic_a(), SubalgebraDescriptor::trivial(&ctx), SubalgebraDescriptor::radial(2).unwrap()] {
            let w = phi_window(&m, 4).unwrap();
            let v = gram_psd_check(&w, &half).unwrap();
            assert!(v.psd, "{}", m.name());
        }
        let fl = flip();
        let pctx = fl.context().clone();
        let elems: Vec<GroupElement> = pctx.enumerate_ball(1).unwrap().into_iter().take(6).collect();
        assert!(gram_psd_check(&phi_window(&fl, 2).unwrap(), &elems).unwrap().psd);

        // 1 on e and a^{±1}, 0 elsewhere: the minor on {e, a, a²} has determinant −1.
        let a = ctx.parse("a").unwrap();
        let ai = ctx.parse("A").unwrap();
        let control = PDWindow::from_fn(&ctx, 2, |g| {
            Ok(if ctx.is_identity(g) || *g == a || *g == ai { int(1) } else { int(0) })
        })
        .unwrap();
        assert_eq!(control.axiom_violation(), None);
        let list = vec![ctx.identity(), a.clone(), ctx.parse("aa").unwrap()];
        let v = gram_psd_check(&control, &list).unwrap();
        assert!(!v.psd);
        assert_eq!(v.witness, Some(vec![0, 1, 2]));

        let far = vec![ctx.identity(), ctx.parse("aaa").unwrap()];
        assert!(gram_psd_check(&control, &far).is_err());
    }

    #[test]
    fn separation_modes() {
        let ctx = f2();
        let a = ctx.parse("a").unwrap();
        let b = ctx.parse("b").unwrap();
        let (s, cert) = separation_search(
            &ctx,
            &SeparationMode::Generator { bound: 10 },
            &[b.clone()],
            &SeparationTarget::Elements(vec![ctx.identity()]),
        )
        .unwrap();
        let (k, l) = cert.exponents.unwrap();
        assert_eq!(s, ctx.op(&ctx.pow(&b, l as i64).unwrap(), &ctx.pow(&a, k as i64).unwrap()).unwrap());
        let h = Subgroup::cyclic(ctx.clone(), a.clone()).unwrap();
        assert!(!h.contains(&ctx.conj(&s, &b).unwrap()).unwrap());

        let (e, _) = separation_search(&ctx, &SeparationMode::Icc { bound: 3 }, &[], &SeparationTarget::Ball(2)).unwrap();
        assert!(ctx.is_identity(&e));

        let target = vec![a.clone(), b.clone()];
        let (s, _) = separation_search(
            &ctx,
            &SeparationMode::Icc { bound: 4 },
            &[a.clone()],
            &SeparationTarget::Elements(target.clone()),
        )
        .unwrap();
        assert!(!target.contains(&ctx.conj_inv(&s, &a).unwrap()));

        assert!(matches!(
            separation_search(&ctx, &SeparationMode::Icc { bound: 1 }, &[a.clone()], &SeparationTarget::Ball(9)),
            Err(crate::Error::Resource { bound: 1, .. })
        ));
        assert!(separation_search(&ctx, &SeparationMode::Icc { bound: 1 }, &[ctx.identity()], &SeparationTarget::Ball(1)).is_err());
    }

    #[test]
    fn radial_probe_decays_along_icc_sequence() {
        let m = SubalgebraDescriptor::radial(2).unwrap();
        let ctx = m.context().clone();
        let seq = ConjugatorSequence::IccSeparation { radius: 2, bound: 12 };
        let report = confinement_probe(&m, &seq, 2, 5, &default_epsilon()).unwrap();
        assert_eq!(report.steps.len(), 5);
        assert!(report.verdicts.strictly_decreasing);
        let window: Vec<GroupElement> = ctx.enumerate_ball(2).unwrap().into_iter().skip(1).collect();
        for step in &report.steps {
            let s = ctx.parse(&step.conjugator).unwrap();
            let shortest = window.iter().map(|g| ctx.word_length(&ctx.conj_inv(&s, g).unwrap()).unwrap()).min().unwrap();
            assert_eq!(step.value, Rational::one() / Rational::from_integer(sphere_size(2, shortest)));
        }
        assert!(report.verdicts.unconfinement_witnessed);
        let csv = report.to_csv().unwrap();
        assert!(csv.starts_with("step,conjugator,value_exact,value_decimal\n1,"));
    }

    #[test]
    fn generator_probe_hits_zero() {
        let m = cyclic_a();
        let seq = ConjugatorSequence::GeneratorSeparation { radius: 2, outer_cap: 1, bound: 8 };
        let report = confinement_probe(&m, &seq, 2, 3, &default_epsilon()).unwrap();
        assert!(report.steps.iter().all(|s| s.value.is_zero()));
    }

    #[test]
    fn explicit_sequences_can_run_short() {
        let m = cyclic_a();
        let ctx = m.context().clone();
        let seq = ConjugatorSequence::Explicit(vec![ctx.parse("b").unwrap()]);
        let report = confinement_probe(&m, &seq, 2, 3, &default_epsilon()).unwrap();
        assert_eq!(report.steps.len(), 1);
        assert!(report.verdicts.partial);
    }

    #[test]
    fn flip_probe_reports_constancy() {
        let m = flip();
        let ctx = m.context().clone();
        let x = ctx.parse("(a, e)").unwrap();
        let y = ctx.parse("(e, b)").unwrap();
        let seq = ConjugatorSequence::ProductPowers(x, y);
        let report = confinement_probe(&m, &seq, 2, 3, &default_epsilon()).unwrap();
        assert!(report.verdicts.constant_at.is_some());
        assert!(report.verdicts.summary().starts_with("confinement-consistent"));
    }

    #[test]
    fn power_chain_in_integers() {
        let z = GroupContext::free(1).unwrap();
        let a = z.parse("a").unwrap();
        let chain: Vec<Subgroup> =
            (1..=6).map(|k| Subgroup::cyclic(z.clone(), z.pow(&a, 1 << k).unwrap()).unwrap()).collect();
        let v = chabauty_converges(&chain, &Subgroup::trivial(z.clone()), 10).unwrap();
        assert_eq!(v.first_agreement, Some(4));
        let h = Subgroup::cyclic(z.clone(), z.pow(&a, 3).unwrap()).unwrap();
        let constant = chabauty_converges(&[h.clone(), h.clone()], &h, 10).unwrap();
        assert_eq!(constant.first_agreement, Some(1));
    }

    #[test]
    fn kernel_chain_in_f2_stops_at_commutators() {
        let ctx = f2();
        let chain: Vec<Subgroup> = (1..=4)
            .map(|k| Subgroup::new(ctx.clone(), SubgroupSpec::AbelianKernel { moduli: vec![1 << k, 1 << k] }).unwrap())
            .collect();
        let to_trivial = chabauty_converges(&chain, &Subgroup::trivial(ctx.clone()), 6).unwrap();
        assert!(!to_trivial.converges);
        assert_eq!(to_trivial.last_disagreement.as_deref(), Some("aba^-1b^-1"));
        let commutator = Subgroup::new(ctx.clone(), SubgroupSpec::AbelianKernel { moduli: vec![0, 0] }).unwrap();
        assert_eq!(chabauty_converges(&chain, &commutator, 6).unwrap().first_agreement, Some(3));
        let lower: Vec<Subgroup> =
            (2..=8).map(|k| Subgroup::new(ctx.clone(), SubgroupSpec::LowerCentral { term: k }).unwrap()).collect();
        // Nontrivial elements of gamma_3 have length at least 8, e.g. [[a,b],b].
        assert_eq!(chabauty_converges(&lower, &Subgroup::trivial(ctx.clone()), 6).unwrap().first_agreement, Some(2));
        let wider = chabauty_converges(&lower, &Subgroup::trivial(ctx.clone()), 8).unwrap();
        assert!(!wider.agreement[1]);
        assert!(lower[1].contains(&ctx.parse("aba^-1bab^-1a^-1b^-1").unwrap()).unwrap());
    }

    #[test]
    fn orbit_constancy() {
        let swap = SubalgebraDescriptor::fixed_point(GroupAutomorphism::generator_swap());
        let a = swap.context().parse("a").unwrap();
        let v = orbit_constancy_check(&swap, &a, 4).unwrap();
        assert!(v.constant);
        assert_eq!(v.value, rat(1, 2));

        let shift = SubalgebraDescriptor::fixed_point(GroupAutomorphism::cyclic_shift(3).unwrap());
        let a1 = shift.context().parse("a").unwrap();
        assert_eq!(orbit_constancy_check(&shift, &a1, 3).unwrap().value, rat(1, 3));

        let m = cyclic_a();
        let v = orbit_constancy_check(&m, &m.context().parse("a").unwrap(), 1).unwrap();
        assert!(!v.constant);
        assert_eq!(v.counterexample, Some(("b".to_string(), "0/1".to_string())));
    }
}
