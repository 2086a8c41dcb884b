//! Acceptance gate: one line per criterion, exact comparisons, wall-clock budgets.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num::{BigInt, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use confine_core::algebra::AlgebraElement;
use confine_core::dynamics::{
    chabauty_converges, confinement_probe, default_epsilon, gram_psd_check, orbit_constancy_check, phi_window,
    sequence_probe, ConjugatorSequence, PDWindow,
};
use confine_core::expectation::{matrix_unit_obstruction, radial_of_basis, two_projection_blocks, SubalgebraDescriptor};
use confine_core::group::{GroupAutomorphism, GroupContext, GroupElement, IntMatrix, Subgroup, DEFAULT_BALL_BUDGET};
use confine_core::measure::noncompact_chain;
use confine_core::rational::{int, rat, to_exact};
use confine_core::Rational;

type Outcome = Result<(), String>;

macro_rules! t {
    ($e:expr) => {
        $e.map_err(|err| err.to_string())?
    };
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn free(rank: u32) -> Result<Arc<GroupContext>, String> {
    Ok(Arc::new(t!(GroupContext::free(rank))))
}

/// One descriptor of every kind, several contexts.
fn descriptors() -> Result<Vec<SubalgebraDescriptor>, String> {
    let f2 = free(2)?;
    let a = t!(f2.parse("a"));
    let radial = t!(SubalgebraDescriptor::radial(2));
    let semidirect = Arc::new(t!(GroupContext::semidirect(GroupAutomorphism::generator_swap())));
    let tensor = t!(SubalgebraDescriptor::radial_tensor_finite(&semidirect));
    let product = t!(GroupContext::power((*f2).clone(), 2));
    let zz2 = Arc::new(GroupContext::z_star_z2());
    Ok(vec![
        SubalgebraDescriptor::trivial(&f2),
        SubalgebraDescriptor::subgroup(t!(Subgroup::cyclic((*f2).clone(), a.clone()))),
        SubalgebraDescriptor::subgroup(t!(Subgroup::cyclic((*f2).clone(), t!(f2.parse("a b A"))))),
        radial.clone(),
        t!(radial.conjugate(&t!(f2.parse("b")))),
        SubalgebraDescriptor::fixed_point(GroupAutomorphism::generator_swap()),
        SubalgebraDescriptor::fixed_point(t!(GroupAutomorphism::cyclic_shift(3))),
        SubalgebraDescriptor::fixed_point(t!(GroupAutomorphism::coordinate_cycle(product))),
        SubalgebraDescriptor::fixed_point(t!(GroupAutomorphism::inverse_transpose(3))),
        SubalgebraDescriptor::finite_dimensional(t!(two_projection_blocks(&zz2))),
        tensor.clone(),
        t!(tensor.conjugate(&t!(semidirect.parse("(b; 1)")))),
    ])
}

/// Smallest radius whose ball has at least `n` elements.
fn radius_with(ctx: &GroupContext, n: usize) -> Result<usize, String> {
    for r in 0..8 {
        if t!(ctx.enumerate_ball(r)).len() >= n {
            return Ok(r);
        }
    }
    Err(format!("no small ball of {} has {n} elements", ctx.describe()))
}

fn random_element(rng: &mut ChaCha8Rng, ctx: &Arc<GroupContext>, ball: &[GroupElement]) -> Result<AlgebraElement, String> {
    let terms = rng.gen_range(1..=4);
    let mut pairs = Vec::with_capacity(terms);
    for _ in 0..terms {
        let g = ball[rng.gen_range(0..ball.len())].clone();
        let mut num = rng.gen_range(-5i64..=4);
        if num >= 0 {
            num += 1;
        }
        pairs.push((g, rat(num, rng.gen_range(1..=4))));
    }
    Ok(t!(AlgebraElement::from_terms(ctx, pairs)))
}

fn expect_full(m: &SubalgebraDescriptor, x: &AlgebraElement) -> Result<AlgebraElement, String> {
    Ok(t!(t!(m.project(x)).materialize(m.context())))
}

fn sphere_size_f2(level: usize) -> BigInt {
    if level == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(4) * num::pow(BigInt::from(3), level - 1)
    }
}

fn exact_values() -> Outcome {
    let chain = t!(noncompact_chain());
    for (name, expected, actual) in [
        ("tau(ba)", rat(1, 8), &chain.tau_ab),
        ("tau(b^2)", rat(5, 8), &chain.tau_b2),
        ("E_Q coefficient", rat(-1, 3), &chain.coefficient_from_b),
    ] {
        ensure(&expected == actual, || format!("{name} = {}, expected {}", to_exact(actual), to_exact(&expected)))?;
    }

    let f2 = free(2)?;
    let s1 = AlgebraElement::basis(&f2, t!(f2.parse("a")));
    let b = t!(AlgebraElement::from_terms(&f2, f2.symmetric_generators().into_iter().map(|g| (g, int(1)))));
    let pairing = t!(s1.inner_product(&b));
    ensure(pairing == int(1), || format!("<s1, b> = {}", to_exact(&pairing)))?;

    let g0 = t!(IntMatrix::from_rows(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]));
    let image = t!(t!(GroupAutomorphism::inverse_transpose(3)).apply(&GroupElement::Matrix(g0.clone())));
    let image = image.as_matrix().cloned().ok_or("inverse transpose left the matrix group")?;
    let coeffs = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    // Constant term first: x^3 - x - 1 and x^3 + x^2 - 1.
    ensure(g0.characteristic_polynomial() == coeffs(&[-1, -1, 0, 1]), || "char poly of g0 is not x^3 - x - 1".into())?;
    ensure(image.characteristic_polynomial() == coeffs(&[-1, 0, 1, 1]), || {
        "char poly of the image is not x^3 + x^2 - 1".into()
    })?;

    let product = t!(GroupContext::power((*f2).clone(), 2));
    let flip = SubalgebraDescriptor::fixed_point(t!(GroupAutomorphism::coordinate_cycle(product)));
    let swap = SubalgebraDescriptor::fixed_point(GroupAutomorphism::generator_swap());
    let cyclic = SubalgebraDescriptor::fixed_point(t!(GroupAutomorphism::cyclic_shift(3)));
    for (name, m, g0, expected) in [
        ("flip", &flip, "(a, e)", rat(1, 2)),
        ("swap", &swap, "a", rat(1, 2)),
        ("cyclic", &cyclic, "a", rat(1, 3)),
    ] {
        let g = t!(m.context().parse(g0));
        let v = t!(orbit_constancy_check(m, &g, 4));
        ensure(v.constant && v.value == expected, || {
            format!("{name}: value {} constant {} over {} conjugators", to_exact(&v.value), v.constant, v.conjugators_checked)
        })?;
    }
    Ok(())
}

fn radial_oracle() -> Outcome {
    let f2 = free(2)?;
    let m = t!(SubalgebraDescriptor::radial(2));
    let spheres = t!(f2.spheres(4, DEFAULT_BALL_BUDGET));
    let w: Vec<AlgebraElement> = spheres
        .iter()
        .map(|s| AlgebraElement::from_terms(&f2, s.iter().map(|g| (g.clone(), int(1)))))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let ball = t!(f2.enumerate_ball(4));
    ensure(ball.len() == 161, || format!("ball of radius 4 has {} elements", ball.len()))?;
    for g in &ball {
        let x = AlgebraElement::basis(&f2, g.clone());
        let mut brute = AlgebraElement::zero(&f2);
        for wk in &w {
            let c = t!(x.inner_product(wk)) / wk.norm_sq();
            brute = t!(brute.add(&wk.scale(&c)));
        }
        let lazy = t!(radial_of_basis(2, &f2, g));
        let label = f2.format(g);
        ensure(t!(lazy.materialize(&f2)) == brute, || format!("projection of {label} differs"))?;
        ensure(lazy.norm_sq() == brute.norm_sq(), || format!("norm of {label} differs"))?;
        ensure(t!(m.phi_value(g)) == brute.norm_sq(), || format!("phi of {label} differs"))?;
    }
    Ok(())
}

fn radial_decay() -> Outcome {
    let f2 = free(2)?;
    let m = t!(SubalgebraDescriptor::radial(2));
    let (radius, steps) = (2usize, 8usize);
    let seq = ConjugatorSequence::IccSeparation { radius, bound: radius + steps + 4 };
    let report = t!(confinement_probe(&m, &seq, radius, steps, &default_epsilon()));
    let window: Vec<GroupElement> = t!(f2.enumerate_ball(radius)).into_iter().skip(1).collect();
    let mut previous: Option<Rational> = None;
    let mut below = None;
    for step in &report.steps {
        let s = t!(f2.parse(&step.conjugator));
        let mut shortest = usize::MAX;
        for g in &window {
            shortest = shortest.min(t!(f2.word_length(&t!(f2.conj_inv(&s, g)))));
        }
        let expected = Rational::new(BigInt::from(1), sphere_size_f2(shortest));
        ensure(step.value == expected, || {
            format!("step {}: {} vs 1/|S_{shortest}|", step.step, step.value_exact)
        })?;
        if let Some(p) = &previous {
            ensure(step.value < *p, || format!("step {} does not decrease", step.step))?;
        }
        if below.is_none() && step.value < rat(1, 1000) {
            below = Some(step.step);
        }
        previous = Some(step.value.clone());
    }
    ensure(below.is_some(), || "never below 1/1000 within 8 steps".into())
}

fn axiom_suite() -> Outcome {
    const SAMPLES: usize = 200;
    for (i, m) in descriptors()?.iter().enumerate() {
        let ctx = m.context().clone();
        let name = m.name();
        let one = AlgebraElement::one(&ctx);
        ensure(expect_full(m, &one)? == one, || format!("{name}: E(1) != 1"))?;
        let ball = t!(ctx.enumerate_ball(radius_with(&ctx, 13)?));
        let witnesses = t!(m.witnesses());
        let mut rng = ChaCha8Rng::seed_from_u64(7 + i as u64);
        for _ in 0..SAMPLES {
            let x = random_element(&mut rng, &ctx, &ball)?;
            let ex = expect_full(m, &x)?;
            ensure(expect_full(m, &ex)? == ex, || format!("{name}: not idempotent"))?;
            ensure(ex.trace() == x.trace(), || format!("{name}: trace not preserved"))?;
            ensure(ex.norm_sq() <= x.norm_sq(), || format!("{name}: not contractive"))?;
            let (a, b) = (&witnesses[rng.gen_range(0..witnesses.len())], &witnesses[rng.gen_range(0..witnesses.len())]);
            let left = expect_full(m, &t!(t!(a.convolve(&x)).convolve(b)))?;
            let right = t!(t!(a.convolve(&ex)).convolve(b));
            ensure(left == right, || format!("{name}: E(axb) != aE(x)b"))?;
        }
        // Every witness pair on one fixed element.
        let x = random_element(&mut rng, &ctx, &ball)?;
        let ex = expect_full(m, &x)?;
        for a in &witnesses {
            for b in &witnesses {
                let left = expect_full(m, &t!(t!(a.convolve(&x)).convolve(b)))?;
                ensure(left == t!(t!(a.convolve(&ex)).convolve(b)), || format!("{name}: bimodularity on a witness pair"))?;
            }
        }
    }

    let f2 = free(2)?;
    let a = t!(f2.parse("a"));
    let big = SubalgebraDescriptor::subgroup(t!(Subgroup::cyclic((*f2).clone(), a.clone())));
    let small = SubalgebraDescriptor::subgroup(t!(Subgroup::cyclic((*f2).clone(), t!(f2.pow(&a, 2)))));
    let ball = t!(f2.enumerate_ball(3));
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..SAMPLES {
        let x = random_element(&mut rng, &f2, &ball)?;
        let direct = t!(small.expect(&x));
        ensure(t!(small.expect(&t!(big.expect(&x)))) == direct, || "E_<a^2> E_<a> != E_<a^2>".into())?;
        ensure(t!(big.expect(&direct)) == direct, || "E_<a> E_<a^2> != E_<a^2>".into())?;
    }
    Ok(())
}

fn equivariance() -> Outcome {
    for m in descriptors()? {
        let ctx = m.context().clone();
        let conjugators = t!(ctx.enumerate_ball(3));
        let window = t!(ctx.enumerate_ball(2));
        for s in &conjugators {
            let ms = t!(m.conjugate(s));
            for g in &window {
                let lhs = t!(ms.phi_value(g));
                let rhs = t!(m.phi_value(&t!(ctx.conj_inv(s, g))));
                ensure(lhs == rhs, || {
                    format!("{}: s = {}, g = {}: {} vs {}", m.name(), ctx.format(s), ctx.format(g), to_exact(&lhs), to_exact(&rhs))
                })?;
            }
        }
    }
    Ok(())
}

fn psd_suite() -> Outcome {
    let mut checked = 0usize;
    for (i, m) in descriptors()?.iter().enumerate() {
        let ctx = m.context().clone();
        let r = radius_with(&ctx, 6)?;
        let ball = t!(ctx.enumerate_ball(r));
        let window = t!(phi_window(m, 2 * r));
        let mut rng = ChaCha8Rng::seed_from_u64(11 + i as u64);
        for _ in 0..3 {
            let list: Vec<GroupElement> = sample(&mut rng, ball.len(), 6).into_iter().map(|j| ball[j].clone()).collect();
            let verdict = t!(gram_psd_check(&window, &list));
            ensure(verdict.psd, || format!("{}: Gram matrix not PSD, witness {:?}", m.name(), verdict.witness))?;
            checked += 1;
        }
    }
    ensure(checked >= 18, || format!("only {checked} lists checked"))?;

    let f2 = free(2)?;
    let control = t!(PDWindow::from_fn(&f2, 4, |g| Ok(if f2.word_length(g)? <= 1 && f2.format(g) != "b" && f2.format(g) != "b^-1" {
        int(1)
    } else {
        int(0)
    })));
    let list: Vec<GroupElement> = ["e", "a", "a^2", "b", "b^2", "a b"].iter().map(|w| f2.parse(w)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let verdict = t!(gram_psd_check(&control, &list));
    ensure(!verdict.psd && verdict.witness.is_some(), || "planted control accepted".into())
}

fn obstruction_pingpong() -> Outcome {
    let mut failures = Vec::new();
    let x = t!(matrix_unit_obstruction(1));
    if x.norm_sq() != rat(9, 64) {
        failures.push(format!("norm^2 at k = 1 is {}, expected 9/64", to_exact(&x.norm_sq())));
    }
    for k in 1..=8 {
        if t!(matrix_unit_obstruction(k)).is_zero() {
            failures.push(format!("zero at k = {k}"));
        }
    }

    let s = t!(IntMatrix::from_rows(&[&[-1, 0, 0], &[0, 0, 1], &[0, 1, 0]]));
    let tm = t!(IntMatrix::from_rows(&[&[1, 0, 0], &[0, 1, 2], &[0, 0, 1]]));
    let ti = t!(IntMatrix::from_rows(&[&[1, 0, 0], &[0, 1, -2], &[0, 0, 1]]));
    ensure(t!(tm.mul(&ti)).is_identity(), || "t t^-1 != I".into())?;
    if !t!(s.mul(&s)).is_identity() {
        failures.push("s^2 != I".into());
    }
    // Letters 0 = s, 1 = t, 2 = t^-1; reduced means no ss and no t t^-1.
    let letters = [&s, &tm, &ti];
    let mut stack: Vec<(Vec<usize>, IntMatrix)> = (0..3).map(|l| (vec![l], letters[l].clone())).collect();
    let mut words = 0usize;
    while let Some((word, m)) = stack.pop() {
        words += 1;
        if m.is_identity() {
            failures.push(format!("word {word:?} is the identity"));
        }
        if word.len() == 10 {
            continue;
        }
        let last = *word.last().expect("nonempty");
        for next in 0..3 {
            let cancels = (last == 0 && next == 0) || (last == 1 && next == 2) || (last == 2 && next == 1);
            if !cancels {
                let mut w = word.clone();
                w.push(next);
                stack.push((w, t!(m.mul(letters[next]))));
            }
        }
    }
    ensure(words > 1000, || format!("only {words} words enumerated"))?;
    ensure(failures.is_empty(), || failures.join("; "))
}

fn chabauty_window() -> Outcome {
    let z = t!(GroupContext::free(1));
    let a = t!(z.generator(0));
    let chain: Vec<Subgroup> = (1..=8)
        .map(|k| Subgroup::cyclic(z.clone(), z.pow(&a, 1i64 << k)?))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let verdict = t!(chabauty_converges(&chain, &Subgroup::trivial(z.clone()), 10));
    ensure(verdict.converges && verdict.first_agreement == Some(4), || {
        format!("first agreement {:?}", verdict.first_agreement)
    })?;
    let descriptors: Vec<SubalgebraDescriptor> = chain.into_iter().map(SubalgebraDescriptor::subgroup).collect();
    let report = t!(sequence_probe(&descriptors, 10, &default_epsilon()));
    for step in &report.steps {
        let zero = step.value.is_zero();
        ensure(zero == (step.step >= 4), || format!("probe value {} at k = {}", step.value_exact, step.step))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 8] = [
        (1, "exact reference values", 10, exact_values),
        (2, "radial projection vs brute force on the radius-4 ball", 30, radial_oracle),
        (3, "radial decay along the separation sequence", 60, radial_decay),
        (4, "expectation axioms", 60, axiom_suite),
        (5, "conjugation equivariance", 60, equivariance),
        (6, "Gram positivity", 30, psd_suite),
        (7, "obstruction and ping-pong", 30, obstruction_pingpong),
        (8, "Chabauty window for 2^k Z", 10, chabauty_window),
    ];
    let mut failed = 0;
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= Duration::from_secs(budget), || format!("exceeded the {budget} s budget"))
        });
        match &outcome {
            Ok(()) => println!("criterion {id} PASS  {title} ({:.2} s of {budget} s)", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("criterion {id} FAIL  {title} ({:.2} s of {budget} s): {detail}", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
