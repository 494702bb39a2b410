use super::cc::compatibility_conditions;
use crate::involution::{symbol_involutive, system_involutive, CompletionConfig, InvolutiveSystem};
use crate::involution::{alphas, betas, Board};
use crate::jets::JetSystem;
use crate::ore::OperatorMatrix;
use crate::{Error, Result};

/// The canonical linear Janet sequence 0 → Θ → E → F₀ → F₁ → … → Fₙ → 0
/// read off an involutive system: dims are the bundle dimensions and each
/// stage matrix is the (involutive) CC operator of the one before it.
#[derive(Clone, Debug)]
pub struct JanetSequence {
    /// [dim E, dim F₀, dim F₁, …]
    pub dims: Vec<usize>,
    /// stage operators: 𝒟 (p₀×m), 𝒟₁ (p₁×p₀), …
    pub stages: Vec<OperatorMatrix>,
    /// involutive systems presenting each stage
    pub systems: Vec<InvolutiveSystem>,
}

impl JanetSequence {
    /// Euler characteristic dim E − dim F₀ + dim F₁ − …; equals the
    /// differential rank of the module.
    pub fn euler(&self) -> i64 {
        let mut acc = self.dims[0] as i64;
        let mut sign = -1i64;
        for d in &self.dims[1..] {
            acc += sign * *d as i64;
            sign = -sign;
        }
        acc
    }
}

/// Accept a system that is already involutive without running the frame
/// search (the CC of an involutive operator is involutive in the same frame).
fn assume_involutive(sys: JetSystem) -> Result<InvolutiveSystem> {
    if !symbol_involutive(&sys) || !system_involutive(&sys) {
        return Err(Error::NotInvolutive);
    }
    let board = Board::of(&sys);
    let beta = betas(&sys);
    let alpha = alphas(sys.m, sys.n(), sys.q, &beta);
    Ok(InvolutiveSystem { sys, board, beta, alpha })
}

pub fn janet_sequence(inv: &InvolutiveSystem, _cfg: &CompletionConfig) -> Result<JanetSequence> {
    let mut dims = vec![inv.m(), inv.sys.eqs.len()];
    let mut stages = vec![inv.operator_matrix()];
    let mut systems = vec![inv.clone()];
    loop {
        let last = systems.last().unwrap();
        if last.board.total_dots() == 0 {
            break;
        }
        let cc = compatibility_conditions(last)?;
        // exactness bookkeeping: CC ∘ previous stage ≡ 0 as operators
        let compose = cc.mul(stages.last().unwrap());
        if !compose.is_zero() {
            return Err(Error::NotInvolutive);
        }
        let next = assume_involutive(JetSystem::from_operator_matrix(&cc, 1))?;
        dims.push(cc.rows);
        stages.push(cc);
        systems.push(next);
    }
    Ok(JanetSequence { dims, stages, systems })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, FieldCtx, RatFun};
    use crate::involution::{complete_to_involution, CompletionConfig};
    use crate::jets::{JetCoord, JetOrder, LinForm};
    use crate::ore::{MultiIndex, OreContext};
    use std::sync::Arc;

    fn jet(k: usize, mu: Vec<u32>) -> JetCoord {
        JetCoord::new(k, MultiIndex(mu))
    }

    fn cform(ctx: &Arc<OreContext>, terms: Vec<(JetCoord, i64)>) -> LinForm {
        LinForm::from_terms(
            &JetOrder::Standard,
            terms
                .into_iter()
                .map(|(j, c)| (j, RatFun::constant(ctx.field.nvars, rat_int(c))))
                .collect(),
        )
    }

    #[test]
    fn janet_sequence_of_macaulay_has_dims_1_4_4_1() {
        let ctx = OreContext::new(3, FieldCtx::constants());
        let sys = crate::jets::JetSystem::new(
            &ctx,
            1,
            2,
            vec![
                cform(&ctx, vec![(jet(0, vec![2, 0, 0]), 1)]),
                cform(&ctx, vec![(jet(0, vec![1, 0, 1]), 1), (jet(0, vec![0, 1, 0]), -1)]),
            ],
        );
        let cfg = CompletionConfig::default();
        let inv = complete_to_involution(&sys, &cfg).unwrap();
        let seq = janet_sequence(&inv, &cfg).unwrap();
        assert_eq!(seq.dims, vec![1, 4, 4, 1]);
        assert_eq!(seq.euler(), 0);
    }

    #[test]
    fn janet_sequence_of_example_2_9_has_dims_1_3_3_1() {
        let ctx = OreContext::new(4, FieldCtx::rational(4));
        let nv = ctx.field.nvars;
        let x3 = RatFun::var(nv, 2);
        let x4 = RatFun::var(nv, 3);
        let e1 = LinForm::from_terms(
            &JetOrder::Standard,
            vec![
                (jet(0, vec![0, 0, 0, 1]), RatFun::one(nv)),
                (jet(0, vec![0, 1, 0, 0]), x3.neg()),
                (jet(0, vec![0, 0, 0, 0]), RatFun::one(nv).neg()),
            ],
        );
        let e2 = LinForm::from_terms(
            &JetOrder::Standard,
            vec![
                (jet(0, vec![0, 0, 1, 0]), RatFun::one(nv)),
                (jet(0, vec![1, 0, 0, 0]), x4.neg()),
            ],
        );
        let cfg = CompletionConfig::default();
        let sys = crate::jets::JetSystem::new(&ctx, 1, 1, vec![e1, e2]);
        let inv = complete_to_involution(&sys, &cfg).unwrap();
        let seq = janet_sequence(&inv, &cfg).unwrap();
        assert_eq!(seq.dims, vec![1, 3, 3, 1]);
        assert_eq!(seq.euler(), 0);
    }

    #[test]
    fn janet_sequence_of_example_2_16_has_dims_3_3_1() {
        let field = FieldCtx::constants().with_slot("a");
        let ctx = OreContext::new(2, field);
        let nv = ctx.field.nvars;
        let a = RatFun::var(nv, 0);
        let one = RatFun::one(nv);
        let f = |terms: Vec<(JetCoord, RatFun)>| LinForm::from_terms(&JetOrder::Standard, terms);
        let e1 = f(vec![
            (jet(1, vec![0, 1]), one.clone()),
            (jet(1, vec![1, 0]), one.neg()),
            (jet(2, vec![0, 1]), one.clone()),
            (jet(2, vec![1, 0]), one.neg()),
            (jet(2, vec![0, 0]), a.neg()),
        ]);
        let e2 = f(vec![
            (jet(0, vec![0, 1]), one.clone()),
            (jet(1, vec![1, 0]), one.neg()),
            (jet(2, vec![0, 1]), one.neg()),
            (jet(2, vec![1, 0]), one.neg()),
            (jet(2, vec![0, 0]), a.neg()),
        ]);
        let e3 = f(vec![
            (jet(0, vec![1, 0]), one.clone()),
            (jet(1, vec![1, 0]), one.neg()),
            (jet(2, vec![1, 0]), one.scale(&rat_int(-2))),
        ]);
        let cfg = CompletionConfig::default();
        let sys = crate::jets::JetSystem::new(&ctx, 3, 1, vec![e1, e2, e3]);
        let inv = complete_to_involution(&sys, &cfg).unwrap();
        let seq = janet_sequence(&inv, &cfg).unwrap();
        assert_eq!(seq.dims, vec![3, 3, 1]);
        assert_eq!(seq.euler(), 1);
    }
}
