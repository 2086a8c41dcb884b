use std::sync::Arc;

use num::{BigInt, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Basis, Checks, ResolvedParams};
use crate::algebra::AlgebraElement;
use crate::error::{input, Result};
use crate::expectation::{matrix_unit_obstruction, SubalgebraDescriptor};
use crate::group::{orbit_of, GroupAutomorphism, GroupContext, GroupElement, IntMatrix};
use crate::measure::{noncompact_chain, two_projection_expect, wot_pairing_limit, CylinderFunction, corner_projection};
use crate::rational::{self, rat, Rational};

/// Renders coefficients (constant term first) as `x^3 - x - 1`.
pub(crate) fn format_polynomial(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (deg, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let one = mag == BigInt::from(1);
        match deg {
            0 => out.push_str(&mag.to_string()),
            1 if one => out.push('x'),
            1 => out.push_str(&format!("{mag}x")),
            _ if one => out.push_str(&format!("x^{deg}")),
            _ => out.push_str(&format!("{mag}x^{deg}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(super) fn noncompact_cylinder(_p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let chain = noncompact_chain()?;
    c.eq_rat("tau_a", "tau(a), a = p_1/2", &rat(1, 4), &chain.tau_a, Basis::Reference);
    c.eq_rat("tau_b", "tau(b), b = 1 - a", &rat(3, 4), &chain.tau_b, Basis::Reference);
    c.eq_rat("tau_ba", "tau(ba)", &rat(1, 8), &chain.tau_ab, Basis::Reference);
    c.eq_rat("tau_b2", "tau(b^2)", &rat(5, 8), &chain.tau_b2, Basis::Reference);
    c.eq_rat("coefficient_a", "E_Q(b - tau(b^2)/tau(b)) = c a", &rat(-1, 3), &chain.coefficient_from_b, Basis::Reference);
    c.eq_rat("coefficient_b", "E_Q(a - tau(a^2)/tau(a)) = c b", &rat(-1, 3), &chain.coefficient_from_a, Basis::Reference);
    c.eq_rat("alpha", "E_Q(a) = alpha a + beta b", &rat(1, 2), &chain.alpha, Basis::Reference);
    c.eq_rat("beta", "E_Q(a) = alpha a + beta b", &rat(1, 6), &chain.beta, Basis::Reference);
    c.eq_rat("forced_p1", "a = E_Q(a) forces p_1 to the constant", &rat(1, 2), &chain.forced_p1, Basis::Reference);
    c.holds(
        "contradiction",
        "the forced p_1 is not a projection",
        !chain.forced_p1_is_projection,
        "forced value is 0/1",
        Basis::Reference,
    );

    // p_n → p_1/2 weakly: pairings against a depth-3 product stabilize once n passes the depth.
    let f = CylinderFunction::coordinate(2)?;
    let g = CylinderFunction::coordinate(3)?;
    let pairing = wot_pairing_limit(&f, &g)?;
    c.eq_rat("weak_limit", "tau(p_1 f g / 2) for f = chi_F2, g = chi_F3", &rat(1, 16), &pairing.limit, Basis::Oracle);
    c.eq("weak_stabilization", "first n with tau(p_n f g) = limit onwards (n past the depth 3)", "Some(4)".to_string(), format!("{:?}", pairing.stabilization_index), Basis::Oracle);

    let x = CylinderFunction::coordinate(1)?.add(&CylinderFunction::coordinate(2)?.scale(&rat(3, 1)));
    for n in 1..=4 {
        let e = two_projection_expect(&x, &corner_projection(n)?);
        match e {
            Ok(y) => c.eq_rat(
                &format!("expectation_trace_{n}"),
                "tau(E_{A_n}(f)) = tau(f)",
                &x.trace(),
                &y.trace(),
                Basis::Definition,
            ),
            Err(err) => c.holds(&format!("expectation_trace_{n}"), "E_{A_n} defined", false, err.to_string(), Basis::Definition),
        }
    }
    Ok(())
}

pub(super) fn index_four_obstruction(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    if p.steps == 0 {
        return input("index_four_obstruction needs at least one power");
    }
    for k in 1..=p.steps as i64 {
        let x = matrix_unit_obstruction(k)?;
        c.holds(
            &format!("nonzero_k{k}"),
            &format!("e11 s^-{k} e22 s^{k} e11 != 0"),
            !x.is_zero(),
            "zero",
            Basis::Reference,
        );
    }
    // Expand (1/8)(1 + t)(1 − s⁻¹ts)(1 + t) term by term with t² = 1.
    let ctx = Arc::new(GroupContext::z_star_z2());
    let word = |w: &str| ctx.parse(w);
    let terms = [("e", 2), ("b", 2), ("A b a", -1), ("A b a b", -1), ("b A b a", -1), ("b A b a b", -1)];
    let expansion = AlgebraElement::from_terms(
        &ctx,
        terms.iter().map(|&(w, k)| Ok((word(w)?, rat(k, 8)))).collect::<Result<Vec<_>>>()?,
    )?;
    let x = matrix_unit_obstruction(1)?;
    c.eq("support_k1", "six distinct normal forms", 6, x.support_len(), Basis::Oracle);
    c.holds("expansion_k1", "convolution equals the term-by-term expansion", x == expansion, format!("{:?}", x.to_pairs()), Basis::Oracle);
    c.eq_rat("trace_k1", "tau(obstruction at k = 1)", &expansion.trace(), &x.trace(), Basis::Oracle);
    c.eq_rat("norm_sq_k1", "||obstruction at k = 1||^2", &expansion.norm_sq(), &x.norm_sq(), Basis::Oracle);
    c.note("(1 + t)^2 = 2 + 2t since t^2 = 1, so the identity coefficient of the k = 1 element is 2/8");
    Ok(())
}

fn matrix(rows: &[&[i64]]) -> Result<IntMatrix> {
    IntMatrix::from_rows(rows)
}

pub(super) fn sl3_inverse_transpose(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let ctx = Arc::new(GroupContext::special_linear(3)?);
    let g0m = matrix(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]])?;
    let g0 = GroupElement::Matrix(g0m.clone());
    c.eq("det_g0", "det g0", BigInt::from(1), g0m.determinant(), Basis::Reference);
    let poly = g0m.characteristic_polynomial();
    c.eq("charpoly_g0", "det(xI - g0)", "x^3 - x - 1".to_string(), format_polynomial(&poly), Basis::Reference);

    let aut = GroupAutomorphism::inverse_transpose(3)?;
    let image = aut.apply(&g0)?;
    let image_m = image.as_matrix().cloned().ok_or_else(|| crate::Error::Input("expected a matrix".into()))?;
    let image_poly = image_m.characteristic_polynomial();
    c.eq("charpoly_image", "det(xI - (g0^T)^-1)", "x^3 + x^2 - 1".to_string(), format_polynomial(&image_poly), Basis::Reference);
    c.holds("distinct_classes", "the two characteristic polynomials differ", poly != image_poly, "", Basis::Reference);
    c.eq("orbit_size", "|{phi^j(g0)}|", 2, orbit_of(&aut, &g0)?.len(), Basis::Oracle);

    let m = SubalgebraDescriptor::fixed_point(aut);
    c.eq_rat("phi_g0", "phi_M(g0) = 1/|orbit|", &rat(1, 2), &m.phi_value(&g0)?, Basis::Oracle);

    let ball = ctx.enumerate_ball(p.conj_radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut picks = rand::seq::index::sample(&mut rng, ball.len(), p.steps.min(ball.len())).into_vec();
    picks.sort_unstable();
    let mut poly_breaks = Vec::new();
    let mut value_breaks = Vec::new();
    for i in picks {
        let s = &ball[i];
        let conj = ctx.conj_inv(s, &g0)?;
        let cm = conj.as_matrix().cloned().ok_or_else(|| crate::Error::Input("expected a matrix".into()))?;
        if cm.characteristic_polynomial() != poly {
            poly_breaks.push(ctx.format(s));
        }
        if m.phi_value(&conj)? != rat(1, 2) {
            value_breaks.push(ctx.format(s));
        }
    }
    c.holds(
        "charpoly_conjugation_invariant",
        &format!("charpoly(s^-1 g0 s) = charpoly(g0) for {} sampled |s| <= {}", p.steps, p.conj_radius),
        poly_breaks.is_empty(),
        poly_breaks.join("; "),
        Basis::Oracle,
    );
    c.holds(
        "orbit_value_constant",
        "phi_M(s^-1 g0 s) = 1/2 on the sample",
        value_breaks.is_empty(),
        value_breaks.join("; "),
        Basis::Oracle,
    );
    Ok(())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-60..=60);
    let den: i64 = rng.gen_range(1..=12);
    rat(num, den)
}

pub(super) fn pingpong_certificate(p: &ResolvedParams, c: &mut Checks) -> Result<()> {
    let s = matrix(&[&[-1, 0, 0], &[0, 0, 1], &[0, 1, 0]])?;
    let t = matrix(&[&[1, 0, 0], &[0, 1, 2], &[0, 0, 1]])?;
    c.holds("s_squared", "s^2 = I", s.mul(&s)?.is_identity(), "", Basis::Reference);
    c.eq("det_s", "det s", BigInt::from(1), s.determinant(), Basis::Definition);
    c.eq("det_t", "det t", BigInt::from(1), t.determinant(), Basis::Definition);
    let mut tn = t.clone();
    let mut t_torsion = Vec::new();
    for n in 1..=10 {
        if tn.is_identity() {
            t_torsion.push(n);
        }
        tn = tn.mul(&t)?;
    }
    c.holds("t_infinite_order", "t^n != I for n = 1..10", t_torsion.is_empty(), format!("{t_torsion:?}"), Basis::Reference);

    // s' = [[0,1],[1,0]], t' = [[1,2],[0,1]] on X = {|x| < |y|}, Y = {|x| > |y|}.
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut x_to_y = 0usize;
    let mut y_to_x = 0usize;
    let mut failures = Vec::new();
    let mut tried = 0usize;
    while tried < p.steps {
        let (x, y) = (random_rational(&mut rng), random_rational(&mut rng));
        if x.abs() == y.abs() {
            continue;
        }
        tried += 1;
        let (small, large) = if x.abs() < y.abs() { (x, y) } else { (y, x) };
        // (small, large) ∈ X; (large, small) ∈ Y.
        for n in (-4i64..=4).filter(|n| *n != 0) {
            let image_x = &small + Rational::from_integer((2 * n).into()) * &large;
            if image_x.abs() > large.abs() {
                x_to_y += 1;
            } else {
                failures.push(format!("t'^{n}({}, {})", rational::to_exact(&small), rational::to_exact(&large)));
            }
        }
        // s'(large, small) = (small, large).
        if small.abs() < large.abs() {
            y_to_x += 1;
        } else {
            failures.push("s' on Y".into());
        }
    }
    c.holds(
        "pingpong_sets",
        &format!("t'^n X in Y (0 < |n| <= 4) and s' Y in X on {} random rational points", p.steps),
        failures.is_empty(),
        failures.join("; "),
        Basis::Reference,
    );
    c.eq("pingpong_point_checks", "number of exact comparisons", p.steps * 9, x_to_y + y_to_x, Basis::Definition);

    let free_product = GroupContext::z_star_z2();
    let t_inv = t.inverse_unimodular()?;
    let mut nontrivial = 0usize;
    let mut trivial_images = Vec::new();
    for g in free_product.enumerate_ball(p.radius)?.into_iter().skip(1) {
        let mut acc = IntMatrix::identity(3);
        for (gen, inverted) in g.as_word().expect("word context").letters() {
            let letter = match (gen, inverted) {
                (0, false) => &t,
                (0, true) => &t_inv,
                _ => &s,
            };
            acc = acc.mul(letter)?;
        }
        if acc.is_identity() {
            trivial_images.push(free_product.format(&g));
        } else {
            nontrivial += 1;
        }
    }
    c.holds(
        "words_nontrivial",
        &format!("every reduced word in t, s of length 1..{} maps to a non-identity matrix ({nontrivial} words)", p.radius),
        trivial_images.is_empty(),
        trivial_images.join("; "),
        Basis::Reference,
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_rendering() {
        let p = |v: &[i64]| format_polynomial(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        assert_eq!(p(&[-1, -1, 0, 1]), "x^3 - x - 1");
        assert_eq!(p(&[-1, 0, 1, 1]), "x^3 + x^2 - 1");
        assert_eq!(p(&[0, 2, -3]), "-3x^2 + 2x");
        assert_eq!(p(&[0]), "0");
    }
}
