//! Finite-dimensional subalgebras given by complete families of matrix units.

use std::sync::Arc;

use num::Zero;

use crate::algebra::AlgebraElement;
use crate::error::{input, Error, Result};
use crate::group::{GroupContext, GroupElement};
use crate::rational::{rat, Rational};

/// `M = ⊕_i M_{n_i}`, block `i` spanned by matrix units `e^{(i)}_{st}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteBlocks {
    context: Arc<GroupContext>,
    blocks: Vec<Vec<Vec<AlgebraElement>>>,
    unit_traces: Vec<Rational>,
}

impl FiniteBlocks {
    /// Checks the matrix-unit relations, orthogonality across blocks and
    /// `Σ e_ss = 1`, all exactly.
    pub fn new(context: &Arc<GroupContext>, blocks: Vec<Vec<Vec<AlgebraElement>>>) -> Result<Self> {
        if blocks.is_empty() {
            return input("a finite-dimensional subalgebra needs at least one block");
        }
        let units: Vec<(usize, usize, usize, &AlgebraElement)> = blocks
            .iter()
            .enumerate()
            .flat_map(|(b, rows)| {
                rows.iter().enumerate().flat_map(move |(s, row)| row.iter().enumerate().map(move |(t, e)| (b, s, t, e)))
            })
            .collect();
        for (b, rows) in blocks.iter().enumerate() {
            if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
                return input(format!("block {b} is not a square family of matrix units"));
            }
        }
        for &(b, s, t, e) in &units {
            if e.context().as_ref() != context.as_ref() {
                return Err(Error::ContextMismatch(format!("matrix unit ({b},{s},{t})")));
            }
            if e.adjoint()? != blocks[b][t][s] {
                return input(format!("unit ({b},{s},{t}) is not the adjoint of ({b},{t},{s})"));
            }
        }
        for &(b1, s, t, x) in &units {
            for &(b2, u, v, y) in &units {
                let p = x.convolve(y)?;
                let ok = if b1 == b2 && t == u { p == blocks[b1][s][v] } else { p.is_zero() };
                if !ok {
                    return input(format!("matrix unit relation fails for ({b1},{s},{t})·({b2},{u},{v})"));
                }
            }
        }
        let mut total = AlgebraElement::zero(context);
        for rows in &blocks {
            for (s, row) in rows.iter().enumerate() {
                total = total.add(&row[s])?;
            }
        }
        if total != AlgebraElement::one(context) {
            return input("diagonal matrix units do not sum to 1");
        }
        let unit_traces: Vec<Rational> = blocks.iter().map(|rows| rows[0][0].trace()).collect();
        if unit_traces.iter().any(|t| t.is_zero()) {
            return input("a block has a zero matrix unit");
        }
        Ok(FiniteBlocks { context: context.clone(), blocks, unit_traces })
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.context
    }

    pub fn blocks(&self) -> &[Vec<Vec<AlgebraElement>>] {
        &self.blocks
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|b| b.len() * b.len()).sum()
    }

    /// `E(y) = Σ_i Σ_{s,t} τ(e_{ts} y)/τ(e_{tt}) e_{st}`.
    pub fn expect(&self, y: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero(&self.context);
        for (rows, c) in self.blocks.iter().zip(&self.unit_traces) {
            for (s, row) in rows.iter().enumerate() {
                for (t, e_st) in row.iter().enumerate() {
                    let coeff = rows[t][s].convolve(y)?.trace() / c;
                    if !coeff.is_zero() {
                        out = out.add(&e_st.scale(&coeff))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Every unit replaced by `λ_s e λ_s*`.
    pub fn conjugate(&self, s: &GroupElement) -> Result<FiniteBlocks> {
        let blocks = self
            .blocks
            .iter()
            .map(|rows| {
                rows.iter()
                    .map(|row| row.iter().map(|e| e.conjugate_by(s)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteBlocks { context: self.context.clone(), blocks, unit_traces: self.unit_traces.clone() })
    }
}

/// `e₁₁ = (1+t)/2` and `e₂₂ = (1−t)/2` in `ℚ[ℤ * ℤ/2]`, `t` the order-two generator.
pub fn order_two_projections(context: &Arc<GroupContext>) -> Result<(AlgebraElement, AlgebraElement)> {
    let t = context.parse("b")?;
    if context.as_ref() != &GroupContext::z_star_z2() {
        return Err(Error::Unsupported(format!("order-two projections need Z*Z/2, got {}", context.describe())));
    }
    let e = context.identity();
    let e11 = AlgebraElement::from_terms(context, [(e.clone(), rat(1, 2)), (t.clone(), rat(1, 2))])?;
    let e22 = AlgebraElement::from_terms(context, [(e, rat(1, 2)), (t, rat(-1, 2))])?;
    Ok((e11, e22))
}

/// The two-projection algebra `ℂe₁₁ ⊕ ℂe₂₂` in `ℚ[ℤ * ℤ/2]`.
pub fn two_projection_blocks(context: &Arc<GroupContext>) -> Result<FiniteBlocks> {
    let (e11, e22) = order_two_projections(context)?;
    FiniteBlocks::new(context, vec![vec![vec![e11]], vec![vec![e22]]])
}

/// `e₁₁ λ_{s⁻ᵏ} e₂₂ λ_{sᵏ} e₁₁` in `ℚ[ℤ * ℤ/2]`; nonzero exactly when `sᵏ` moves `e₁₁` off itself.
pub fn matrix_unit_obstruction(k: i64) -> Result<AlgebraElement> {
    if k <= 0 {
        return input("the obstruction is defined for k ≥ 1");
    }
    let ctx = Arc::new(GroupContext::z_star_z2());
    let (e11, e22) = order_two_projections(&ctx)?;
    let sk = ctx.pow(&ctx.parse("a")?, k)?;
    let s_minus = AlgebraElement::basis(&ctx, ctx.inverse(&sk)?);
    let s_plus = AlgebraElement::basis(&ctx, sk);
    e11.convolve(&s_minus)?.convolve(&e22)?.convolve(&s_plus)?.convolve(&e11)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn obstruction_matches_hand_expansion() {
        // (1+t)(1−T)(1+t)/8 with T = s⁻¹ts and (1+t)² = 2 + 2t.
        let ctx = Arc::new(GroupContext::z_star_z2());
        let x = matrix_unit_obstruction(1).unwrap();
        let terms = [
            ("e", 2),
            ("b", 2),
            ("A b a", -1),
            ("A b a b", -1),
            ("b A b a", -1),
            ("b A b a b", -1),
        ];
        let expected =
            AlgebraElement::from_terms(&ctx, terms.iter().map(|&(w, c)| (ctx.parse(w).unwrap(), rat(c, 8)))).unwrap();
        assert_eq!(x, expected);
        assert_eq!(x.support_len(), 6);
        assert_eq!(x.trace(), rat(1, 4));
        assert_eq!(x.norm_sq(), rat(3, 16));
        for k in 1..=8 {
            assert!(!matrix_unit_obstruction(k).unwrap().is_zero());
        }
        assert!(matrix_unit_obstruction(0).is_err());
    }

    #[test]
    fn two_projection_expectation() {
        let ctx = Arc::new(GroupContext::z_star_z2());
        let m = two_projection_blocks(&ctx).unwrap();
        assert_eq!(m.dimension(), 2);
        let one = AlgebraElement::one(&ctx);
        assert_eq!(m.expect(&one).unwrap(), one);
        let t = AlgebraElement::basis(&ctx, ctx.parse("b").unwrap());
        assert_eq!(m.expect(&t).unwrap(), t);
        let s = AlgebraElement::basis(&ctx, ctx.parse("a").unwrap());
        assert!(m.expect(&s).unwrap().is_zero());
        assert_eq!(m.expect(&one.scale(&int(3))).unwrap().trace(), int(3));
    }

    #[test]
    fn invalid_units_rejected() {
        let ctx = Arc::new(GroupContext::z_star_z2());
        let (e11, _) = order_two_projections(&ctx).unwrap();
        assert!(FiniteBlocks::new(&ctx, vec![vec![vec![e11.clone()]]]).is_err());
        let t = AlgebraElement::basis(&ctx, ctx.parse("b").unwrap());
        assert!(FiniteBlocks::new(&ctx, vec![vec![vec![e11]], vec![vec![t]]]).is_err());
    }
}
