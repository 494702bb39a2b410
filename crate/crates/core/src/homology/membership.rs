use crate::involution::{complete_to_involution, CompletionConfig, InvolutiveSystem};
use crate::jets::{echelon_rows, reduce_row, JetCoord, JetOrder, JetSystem, LinForm, RowPayload};
use crate::ore::{invert_matrix, MultiIndex, OperatorMatrix, OreContext, OreOperator};
use crate::arith::RatFun;
use crate::Result;
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

impl RowPayload for Vec<RatFun> {
    fn scale(&self, c: &RatFun) -> Self {
        self.iter().map(|a| a.mul(c)).collect()
    }

    fn add_scaled(&self, other: &Self, c: &RatFun) -> Self {
        self.iter().zip(other).map(|(a, b)| a.add(&b.mul(c))).collect()
    }
}

/// Transport an operator between two contexts that may differ by a constant
/// frame: new = change · old with change = F_to · F_from⁻¹.
pub fn transport_op(
    op: &OreOperator,
    from: &Arc<OreContext>,
    to: &Arc<OreContext>,
) -> OreOperator {
    if from.frame == to.frame {
        return OreOperator { ctx: to.clone(), terms: op.terms.clone() };
    }
    let change = crate::ore::frame_change_between(&from.frame, &to.frame)
        .expect("frames are related by a constant change");
    let sub = invert_matrix(&change).expect("frame changes are invertible");
    op.change_frame(to, &sub)
}

/// Membership oracle for the left D-module generated by the rows of a
/// matrix: the generators are completed to involution once, and a candidate
/// row belongs to the module iff it reduces to zero against the prolonged
/// involutive span at its own order (strictness of completed systems makes
/// this an exact test).
pub struct ModuleTable {
    pub gens: OperatorMatrix,
    pub inv: InvolutiveSystem,
    cfg: CompletionConfig,
    cache: RefCell<HashMap<u32, Vec<(LinForm, ())>>>,
}

impl ModuleTable {
    pub fn new(gens: &OperatorMatrix, cfg: &CompletionConfig) -> Result<ModuleTable> {
        let sys = JetSystem::from_operator_matrix(gens, 1);
        let inv = complete_to_involution(&sys, cfg)?;
        Ok(ModuleTable { gens: gens.clone(), inv, cfg: cfg.clone(), cache: RefCell::new(HashMap::new()) })
    }

    /// Number of module generators (columns of the row space).
    pub fn cols(&self) -> usize {
        self.gens.cols
    }

    fn span_at(&self, o: u32) -> Vec<(LinForm, ())> {
        if let Some(e) = self.cache.borrow().get(&o) {
            return e.clone();
        }
        let sys = if o >= self.inv.q() {
            self.inv.sys.prolong(o - self.inv.q())
        } else {
            self.inv.sys.project(o)
        };
        let rows: Vec<(LinForm, ())> = sys.eqs.into_iter().map(|e| (e, ())).collect();
        self.cache.borrow_mut().insert(o, rows.clone());
        rows
    }

    /// Reduce a row (given in any compatible frame) against the module span.
    pub fn reduce(&self, row: &[OreOperator]) -> LinForm {
        let order = JetOrder::Standard;
        let ctx = &self.inv.sys.ctx;
        let moved: Vec<OreOperator> =
            row.iter().map(|op| transport_op(op, &op.ctx, ctx)).collect();
        let form = LinForm::from_operator_row(&order, &moved);
        if form.is_zero() {
            return form;
        }
        let o = form.order();
        let ech = self.span_at(o);
        let (rem, _) = reduce_row(&order, form, (), &ech);
        rem
    }

    pub fn contains(&self, row: &[OreOperator]) -> bool {
        self.reduce(row).is_zero()
    }

    /// Reduce with certificate: the returned operator row c satisfies
    /// row = remainder + c · generators exactly (everything expressed in the
    /// table's frame).
    pub fn reduce_certified(&self, row: &[OreOperator]) -> (LinForm, Vec<OreOperator>) {
        let order = JetOrder::Standard;
        let ctx = &self.inv.sys.ctx;
        let moved: Vec<OreOperator> =
            row.iter().map(|op| transport_op(op, &op.ctx, ctx)).collect();
        let form = LinForm::from_operator_row(&order, &moved);
        let p = self.gens.rows;
        if form.is_zero() {
            return (form, vec![OreOperator::zero(ctx); p]);
        }
        let o = form.order();
        // tracked span: prolongations of the original generators up to o,
        // tagged by the operator applied
        let base = self.inv.q().min(o);
        let _ = base;
        let mut rows: Vec<(LinForm, crate::jets::OpRow)> = Vec::new();
        let gctx = &self.gens.ctx;
        for r in 0..p {
            let moved_row: Vec<OreOperator> =
                self.gens.row(r).iter().map(|op| transport_op(op, gctx, ctx)).collect();
            let f = LinForm::from_operator_row(&order, &moved_row);
            let base_pay = crate::jets::OpRow::unit(ctx, p, r);
            let ord_f = f.order();
            if ord_f <= o {
                rows.push((f.clone(), base_pay.clone()));
            }
            if ord_f < o {
                // all prolongations up to order o
                let mut frontier = vec![(f, base_pay)];
                for _ in 0..(o - ord_f) {
                    let mut next = Vec::new();
                    for (g, pay) in &frontier {
                        for i in 1..=ctx.n {
                            next.push((g.formal_derivative(ctx, &order, i), pay.d_left(i)));
                        }
                    }
                    rows.extend(next.iter().cloned());
                    frontier = next;
                }
            }
        }
        let ech = echelon_rows(&order, rows);
        let zero_pay = crate::jets::OpRow(vec![OreOperator::zero(ctx); p]);
        let (rem, pay) = reduce_row(&order, form, zero_pay, &ech);
        // row = rem + (−pay)·gens
        (rem, pay.0.iter().map(|c| c.neg()).collect())
    }

    pub fn cfg(&self) -> &CompletionConfig {
        &self.cfg
    }
}

/// Search for a nonzero P ∈ D of minimal order with P·z ∈ ⟨rows of pres⟩,
/// by exact linear algebra on reduced residues order by order.
pub fn annihilator_of(
    pres: &OperatorMatrix,
    z: &[OreOperator],
    cfg: &CompletionConfig,
    max_order: u32,
) -> Result<Option<OreOperator>> {
    let m = pres.cols;
    assert_eq!(z.len(), m);
    let big = extended_matrix(pres, z);
    let sys = JetSystem::from_operator_matrix(&big, 1);
    let inv = complete_to_involution(&sys, cfg)?;
    let ctx = &inv.sys.ctx;
    let order = JetOrder::Standard;
    let nv = ctx.field.nvars;
    for o in 1..=max_order {
        let at = if o >= inv.q() { inv.sys.prolong(o - inv.q()) } else { inv.sys.project(o) };
        let ech: Vec<(LinForm, ())> = at.eqs.iter().map(|e| (e.clone(), ())).collect();
        let monomials = MultiIndex::all_up_to(ctx.n, o);
        let mut basis: Vec<(LinForm, Vec<RatFun>)> = Vec::new();
        for (slot, nu) in monomials.iter().enumerate() {
            let cand = LinForm::from_terms(
                &order,
                vec![(JetCoord::new(m, nu.clone()), RatFun::one(nv))],
            );
            let (res, _) = reduce_row(&order, cand, (), &ech);
            let mut unit = vec![RatFun::zero(nv); monomials.len()];
            unit[slot] = RatFun::one(nv);
            let (rem, pay) = reduce_row(&order, res, unit, &basis);
            if rem.is_zero() {
                // dependence found: P = Σ pay_ν d_ν with sign so that P·z ≡ 0
                let terms: Vec<(MultiIndex, RatFun)> = monomials
                    .iter()
                    .zip(&pay)
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(nu, c)| (nu.clone(), c.clone()))
                    .collect();
                let p = OreOperator::from_terms(ctx, terms);
                if !p.is_zero() {
                    // transport back to the presentation frame
                    let back = transport_op(&p, ctx, &pres.ctx);
                    return Ok(Some(back));
                }
            } else {
                // normalize and insert into the residue echelon
                let lc = rem.lead().unwrap().1.clone();
                let inv_lc = lc.inv().expect("nonzero lead");
                basis.push((rem.scale(&inv_lc), pay.scale(&inv_lc)));
                basis.sort_by(|a, b| order.cmp(&b.0.lead().unwrap().0, &a.0.lead().unwrap().0));
            }
        }
    }
    Ok(None)
}

/// Stack the presentation with a defining row for the new unknown w = z(y):
/// rows [𝒟 | 0] and [−z | 1] over the unknowns (y¹..y^m, w).
pub fn extended_matrix(pres: &OperatorMatrix, z: &[OreOperator]) -> OperatorMatrix {
    let ctx = &pres.ctx;
    let m = pres.cols;
    let mut rows = Vec::with_capacity(pres.rows + 1);
    for r in 0..pres.rows {
        let mut row = pres.row(r);
        row.push(OreOperator::zero(ctx));
        rows.push(row);
    }
    let mut def: Vec<OreOperator> = z.iter().map(|o| o.neg()).collect();
    def.push(OreOperator::one(ctx));
    rows.push(def);
    OperatorMatrix::from_rows(ctx, rows, m + 1)
}

/// The involutive system satisfied by the cyclic submodule D·z ⊂ M: the
/// extended system is completed, the span at increasing orders is
/// re-echelonized under an elimination order that ranks the original unknowns
/// above w, and the w-only rows are completed as a one-unknown system. The
/// extraction order advances until the next order brings nothing new.
pub fn element_system(
    pres: &OperatorMatrix,
    z: &[OreOperator],
    cfg: &CompletionConfig,
    max_order: u32,
) -> Result<InvolutiveSystem> {
    let m = pres.cols;
    let big = extended_matrix(pres, z);
    let sys = JetSystem::from_operator_matrix(&big, 1);
    let inv = complete_to_involution(&sys, cfg)?;
    let order = JetOrder::Standard;
    let block = JetOrder::Block { high: (0..=m).map(|k| k < m).collect() };
    let ctx = &inv.sys.ctx;
    let extract = |o: u32| -> Vec<LinForm> {
        let at = if o >= inv.q() { inv.sys.prolong(o - inv.q()) } else { inv.sys.project(o) };
        let rows: Vec<(LinForm, ())> = at
            .eqs
            .iter()
            .map(|e| (LinForm::from_terms(&block, e.terms.clone()), ()))
            .collect();
        let ech = echelon_rows(&block, rows);
        ech.into_iter()
            .filter(|(f, _)| f.terms.iter().all(|(j, _)| j.k == m))
            .map(|(f, _)| {
                LinForm::from_terms(
                    &order,
                    f.terms.iter().map(|(j, c)| (JetCoord::new(0, j.mu.clone()), c.clone())).collect(),
                )
            })
            .collect()
    };
    let mut o = inv.q();
    loop {
        let rows = extract(o);
        let wsys = JetSystem::new(ctx, 1, 1, rows);
        let winv = complete_to_involution(&wsys, cfg)?;
        // stability: the next order must bring nothing outside the span
        let next = extract(o + 1);
        let at = winv.sys.prolong((o + 1).saturating_sub(winv.q()).max(1));
        let ech: Vec<(LinForm, ())> = at.eqs.iter().map(|e| (e.clone(), ())).collect();
        let stable = next.iter().all(|f| {
            let moved = f.clone();
            let (rem, _) = reduce_row(&order, moved, (), &ech);
            rem.is_zero()
        });
        if stable {
            return Ok(winv);
        }
        o += 1;
        if o > max_order {
            return Err(crate::Error::ReductionOrderExceeded(max_order as usize));
        }
    }
}
