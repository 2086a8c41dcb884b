//! Cylinder functions on `{0,1}^ℕ` with the fair-coin product measure.

use num::{One, Zero};
use serde::Serialize;

use crate::error::{input, Error, Result};
use crate::rational::{self, Rational};

/// A function of the first `depth` coordinates, stored as `2^depth` values.
///
/// The value for the prefix `(x_1, ..., x_m)` sits at index `Σ x_j 2^{m−j}`,
/// so `x_1` is the most significant bit. Tables are kept at minimal depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderFunction {
    depth: usize,
    values: Vec<Rational>,
}

impl CylinderFunction {
    pub fn new(depth: usize, values: Vec<Rational>) -> Result<Self> {
        if depth > 24 || values.len() != 1usize << depth {
            return input(format!("depth {depth} needs {} values, got {}", 1usize << depth.min(24), values.len()));
        }
        Ok(CylinderFunction { depth, values }.compressed())
    }

    pub fn constant(c: Rational) -> Self {
        CylinderFunction { depth: 0, values: vec![c] }
    }

    /// `χ_{F_n}` with `F_n = {x : x_n = 1}`, `n ≥ 1`.
    pub fn coordinate(n: usize) -> Result<Self> {
        if n == 0 {
            return input("coordinates are numbered from 1");
        }
        let values = (0..1usize << n).map(|i| if i & 1 == 1 { rational::one() } else { Rational::zero() }).collect();
        Self::new(n, values)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    fn compressed(mut self) -> Self {
        while self.depth > 0 && self.values.chunks(2).all(|p| p[0] == p[1]) {
            self.values = self.values.chunks(2).map(|p| p[0].clone()).collect();
            self.depth -= 1;
        }
        self
    }

    fn extended(&self, depth: usize) -> Vec<Rational> {
        let shift = depth - self.depth;
        (0..1usize << depth).map(|i| self.values[i >> shift].clone()).collect()
    }

    fn zip_with<F>(&self, other: &Self, f: F) -> Self
    where
        F: Fn(&Rational, &Rational) -> Rational,
    {
        let d = self.depth.max(other.depth);
        let (x, y) = (self.extended(d), other.extended(d));
        CylinderFunction { depth: d, values: x.iter().zip(&y).map(|(a, b)| f(a, b)).collect() }.compressed()
    }

    pub fn product(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CylinderFunction { depth: self.depth, values: self.values.iter().map(|v| v * c).collect() }.compressed()
    }

    /// `∫ f dμ`, the average of the table.
    pub fn trace(&self) -> Rational {
        let sum = self.values.iter().fold(Rational::zero(), |acc, v| acc + v);
        sum / rational::int(1i64 << self.depth)
    }

    pub fn is_projection(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// `(depth, ["num/den", ...])`.
    pub fn to_record(&self) -> CylinderRecord {
        CylinderRecord { depth: self.depth, values: self.values.iter().map(rational::to_exact).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CylinderRecord {
    pub depth: usize,
    pub values: Vec<String>,
}

/// `τ(fa)/τ(a)·a + τ(fb)/τ(b)·b`, returned with the two coefficients.
pub fn two_element_expect(
    f: &CylinderFunction,
    a: &CylinderFunction,
    b: &CylinderFunction,
) -> Result<(CylinderFunction, Rational, Rational)> {
    let (ta, tb) = (a.trace(), b.trace());
    if ta.is_zero() || tb.is_zero() {
        return Err(Error::DegenerateProjection("an element of the pair has zero trace".into()));
    }
    let ca = f.product(a).trace() / ta;
    let cb = f.product(b).trace() / tb;
    Ok((a.scale(&ca).add(&b.scale(&cb)), ca, cb))
}

/// Expectation onto `ℂp + ℂ(1−p)` for a proper projection `p`.
pub fn two_projection_expect(f: &CylinderFunction, p: &CylinderFunction) -> Result<CylinderFunction> {
    if !p.is_projection() {
        return input("expected a 0/1-valued function");
    }
    let t = p.trace();
    if t.is_zero() || t.is_one() {
        return Err(Error::DegenerateProjection(format!("projection has trace {}", rational::to_exact(&t))));
    }
    let q = CylinderFunction::constant(rational::one()).sub(p);
    Ok(two_element_expect(f, p, &q)?.0)
}

/// `p_n = χ_{F_1} χ_{F_n}`.
pub fn corner_projection(n: usize) -> Result<CylinderFunction> {
    Ok(CylinderFunction::coordinate(1)?.product(&CylinderFunction::coordinate(n)?))
}

/// `τ(p_n f g)` for `n = 1, 2, ...` against the weak limit `τ(½p_1 f g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WotPairing {
    /// `(n, τ(p_n f g))` for `n = 1..=horizon`.
    pub values: Vec<(usize, Rational)>,
    pub limit: Rational,
    /// First `n` from which every computed value equals the limit.
    pub stabilization_index: Option<usize>,
}

/// Pairings of the sequence `p_n` with `fg`, computed up to one past the depth of `fg`.
pub fn wot_pairing_limit(f: &CylinderFunction, g: &CylinderFunction) -> Result<WotPairing> {
    let fg = f.product(g);
    let horizon = fg.depth() + 2;
    let values = (1..=horizon)
        .map(|n| Ok((n, corner_projection(n)?.product(&fg).trace())))
        .collect::<Result<Vec<_>>>()?;
    let limit = CylinderFunction::coordinate(1)?.scale(&rational::rat(1, 2)).product(&fg).trace();
    let stabilization_index = values
        .iter()
        .rposition(|(_, v)| *v != limit)
        .map(|i| i + 2)
        .or(Some(1))
        .filter(|&n| n <= horizon);
    Ok(WotPairing { values, limit, stabilization_index })
}

/// Every quantity in the chain showing that the weak limits of `ℂp_n + ℂq_n`
/// cannot form a subalgebra with the limiting expectation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoncompactChain {
    pub tau_a: Rational,
    pub tau_b: Rational,
    pub tau_a2: Rational,
    pub tau_ab: Rational,
    pub tau_b2: Rational,
    /// Coefficient of `a` in `E_Q(b − τ(b²)/τ(b))`.
    pub coefficient_from_b: Rational,
    /// Coefficient of `b` in `E_Q(a − τ(a²)/τ(a))`.
    pub coefficient_from_a: Rational,
    /// `E_Q(a) = αa + βb`.
    pub alpha: Rational,
    pub beta: Rational,
    /// The constant value `a = E_Q(a)` forces on `p_1 = 2a`.
    pub forced_p1: Rational,
    /// Whether a constant equal to `forced_p1` is 0/1-valued (it must not be).
    pub forced_p1_is_projection: bool,
}

pub fn noncompact_chain() -> Result<NoncompactChain> {
    let p1 = CylinderFunction::coordinate(1)?;
    let one = CylinderFunction::constant(rational::one());
    let a = p1.scale(&rational::rat(1, 2));
    let b = one.sub(&a);
    let (tau_a, tau_b) = (a.trace(), b.trace());
    let tau_a2 = a.product(&a).trace();
    let tau_ab = a.product(&b).trace();
    let tau_b2 = b.product(&b).trace();

    let fb = b.sub(&one.scale(&(&tau_b2 / &tau_b)));
    let (_, coefficient_from_b, zero_b) = two_element_expect(&fb, &a, &b)?;
    let fa = a.sub(&one.scale(&(&tau_a2 / &tau_a)));
    let (_, zero_a, coefficient_from_a) = two_element_expect(&fa, &a, &b)?;
    if !zero_a.is_zero() || !zero_b.is_zero() {
        return Err(Error::Input("centred elements should be orthogonal to their own direction".into()));
    }
    let (_, alpha, beta) = two_element_expect(&a, &a, &b)?;
    // a = αa + β(1 − a)  ⇒  a = β/(1 − α + β), a constant.
    let a_forced = &beta / (rational::one() - &alpha + &beta);
    let forced_p1 = a_forced * rational::int(2);
    let forced_p1_is_projection = CylinderFunction::constant(forced_p1.clone()).is_projection();
    Ok(NoncompactChain {
        tau_a,
        tau_b,
        tau_a2,
        tau_ab,
        tau_b2,
        coefficient_from_b,
        coefficient_from_a,
        alpha,
        beta,
        forced_p1,
        forced_p1_is_projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn depth_alignment_and_compression() {
        let f = CylinderFunction::coordinate(2).unwrap();
        assert_eq!(f.depth(), 2);
        assert_eq!(f.values(), &[int(0), int(1), int(0), int(1)]);
        let g = CylinderFunction::coordinate(1).unwrap();
        assert_eq!(g.values(), &[int(0), int(1)]);
        let s = f.add(&CylinderFunction::constant(int(1)).sub(&f));
        assert_eq!(s, CylinderFunction::constant(int(1)));
        assert_eq!(f.product(&g).trace(), rat(1, 4));
    }

    #[test]
    fn chain_values() {
        let c = noncompact_chain().unwrap();
        assert_eq!(c.tau_a, rat(1, 4));
        assert_eq!(c.tau_b, rat(3, 4));
        assert_eq!(c.tau_ab, rat(1, 8));
        assert_eq!(c.tau_b2, rat(5, 8));
        assert_eq!(c.coefficient_from_b, rat(-1, 3));
        assert_eq!(c.coefficient_from_a, rat(-1, 3));
        assert_eq!(c.alpha, rat(1, 2));
        assert_eq!(c.beta, rat(1, 6));
        assert_eq!(c.forced_p1, rat(1, 2));
        assert!(!c.forced_p1_is_projection);
    }

    #[test]
    fn pairings_stabilize() {
        let one = CylinderFunction::constant(int(1));
        let w = wot_pairing_limit(&one, &one).unwrap();
        assert_eq!(w.values[0], (1, rat(1, 2)));
        assert_eq!(w.values[1], (2, rat(1, 4)));
        assert_eq!(w.limit, rat(1, 4));
        assert_eq!(w.stabilization_index, Some(2));
        let chi1 = CylinderFunction::coordinate(1).unwrap();
        let w = wot_pairing_limit(&chi1, &one).unwrap();
        assert_eq!(w.limit, rat(1, 4));
        assert_eq!(w.stabilization_index, Some(2));
        let chi3 = CylinderFunction::coordinate(3).unwrap();
        let w = wot_pairing_limit(&chi3, &one).unwrap();
        assert_eq!(w.limit, rat(1, 8));
        assert_eq!(w.values[2], (3, rat(1, 4)));
        assert_eq!(w.stabilization_index, Some(4));
    }

    #[test]
    fn degenerate_projection() {
        let one = CylinderFunction::constant(int(1));
        assert!(matches!(two_projection_expect(&one, &one), Err(Error::DegenerateProjection(_))));
        let p = CylinderFunction::coordinate(2).unwrap();
        assert_eq!(two_projection_expect(&one, &p).unwrap(), one);
        assert_eq!(two_projection_expect(&p, &p).unwrap(), p);
    }

    fn arb_function() -> impl Strategy<Value = CylinderFunction> {
        (0usize..=4).prop_flat_map(|d| {
            prop::collection::vec((-5i64..=5, 1i64..=4), 1 << d)
                .prop_map(move |v| CylinderFunction::new(d, v.into_iter().map(|(n, m)| rat(n, m)).collect()).unwrap())
        })
    }

    fn arb_projection() -> impl Strategy<Value = CylinderFunction> {
        (1usize..=4)
            .prop_flat_map(|d| prop::collection::vec(any::<bool>(), 1 << d).prop_map(move |v| (d, v)))
            .prop_filter("proper projection", |(_, v)| v.iter().any(|&b| b) && v.iter().any(|&b| !b))
            .prop_map(|(d, v)| CylinderFunction::new(d, v.into_iter().map(|b| int(b as i64)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn expectation_axioms(f in arb_function(), p in arb_projection()) {
            let e = two_projection_expect(&f, &p).unwrap();
            prop_assert_eq!(two_projection_expect(&e, &p).unwrap(), e.clone());
            prop_assert_eq!(e.trace(), f.trace());
        }

        #[test]
        fn trace_is_positive_and_multiplicative_order_free(f in arb_function(), g in arb_function()) {
            prop_assert!(f.product(&f).trace() >= Rational::zero());
            prop_assert_eq!(f.product(&g), g.product(&f));
        }
    }
}
