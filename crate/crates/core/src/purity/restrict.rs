use crate::involution::{
    alphas, betas, symbol_involutive, system_involutive, Board, InvolutiveSystem,
};
use crate::jets::{JetCoord, JetOrder, JetSystem, LinForm};
use crate::ore::{MultiIndex, OreContext, OreOperator};
use crate::{Error, Result};
use std::sync::Arc;

/// Class restriction of a first-order involutive system: the equations of
/// class ≤ i, viewed over the subring K[d₁..d_i]. Involutive again by the
/// shape of the board.
#[derive(Clone, Debug)]
pub struct RestrictedSystem {
    /// Retained derivation count i.
    pub i: usize,
    /// Ambient unknown count (unchanged).
    pub m: usize,
    pub inv: InvolutiveSystem,
}

/// Build the restricted context: derivations 1..i with the parent action
/// rows, so variable coefficients keep differentiating correctly.
pub fn restricted_context(parent: &Arc<OreContext>, i: usize) -> Arc<OreContext> {
    let frame: Vec<Vec<crate::arith::Rational>> = parent.frame[..i].to_vec();
    Arc::new(OreContext { n: i, field: parent.field.clone(), frame })
}

pub fn restrict_to_classes(f: &InvolutiveSystem, i: usize) -> Result<RestrictedSystem> {
    let sys = &f.sys;
    let n = sys.n();
    if sys.q != 1 {
        return Err(Error::NotFirstOrder);
    }
    if sys.eqs.iter().any(|e| e.order() == 0) {
        return Err(Error::HasZeroOrderEquations);
    }
    assert!((1..=n).contains(&i));
    let ctx = restricted_context(&sys.ctx, i);
    let order = JetOrder::Standard;
    let mut eqs = Vec::new();
    for e in &sys.eqs {
        let (lead, _) = e.lead().unwrap();
        let class = lead.mu.class().unwrap();
        if class > i {
            continue;
        }
        // every jet in the row has class ≤ class(lead) ≤ i, so truncation of
        // the multi-index to the first i slots is faithful
        let terms: Vec<(JetCoord, crate::arith::RatFun)> = e
            .terms
            .iter()
            .map(|(j, c)| {
                debug_assert!(j.mu.0[i..].iter().all(|&e| e == 0));
                (JetCoord::new(j.k, MultiIndex(j.mu.0[..i].to_vec())), c.clone())
            })
            .collect();
        eqs.push(LinForm::from_terms(&order, terms));
    }
    let rsys = JetSystem::new(&ctx, sys.m, 1, eqs);
    if !symbol_involutive(&rsys) || !system_involutive(&rsys) {
        return Err(Error::NotInvolutive);
    }
    let board = Board::of(&rsys);
    let beta = betas(&rsys);
    let alpha = alphas(rsys.m, i, 1, &beta);
    Ok(RestrictedSystem {
        i,
        m: sys.m,
        inv: InvolutiveSystem { sys: rsys, board, beta, alpha },
    })
}

impl RestrictedSystem {
    /// Presentation matrix of M_{n−i} over the subring.
    pub fn matrix(&self) -> crate::ore::OperatorMatrix {
        self.inv.operator_matrix()
    }

    /// Lift a row of operators over the subring back to the full ring.
    pub fn lift_row(&self, row: &[OreOperator], full: &Arc<OreContext>) -> Vec<OreOperator> {
        row.iter()
            .map(|op| {
                let terms: Vec<(MultiIndex, crate::arith::RatFun)> = op
                    .terms
                    .iter()
                    .map(|(mu, c)| {
                        let mut v = mu.0.clone();
                        v.resize(full.n, 0);
                        (MultiIndex(v), c.clone())
                    })
                    .collect();
                OreOperator::from_terms(full, terms)
            })
            .collect()
    }
}
