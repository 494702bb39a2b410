use super::{complete_to_involution, CompletionConfig, InvolutiveSystem};
use crate::arith::RatFun;
use crate::jets::{JetCoord, JetOrder, JetSystem, LinForm};
use crate::ore::{MultiIndex, OperatorMatrix, OreOperator};
use crate::{Error, Result};
use std::collections::HashMap;

/// Dictionary of a first-order reduction: z^a corresponds to the original
/// jet coordinate `jets[a]`.
#[derive(Clone, Debug)]
pub struct ReductionDictionary {
    pub jets: Vec<JetCoord>,
    /// Number of original unknowns.
    pub m: usize,
}

impl ReductionDictionary {
    /// Index of the z-unknown standing for an original order-0 unknown y^k.
    pub fn z_of_unknown(&self, k: usize) -> usize {
        self.jets
            .iter()
            .position(|j| j.k == k && j.mu.is_empty())
            .expect("order-0 jets are always parametric in a reduction")
    }

    /// Transport a row of operators over the z-unknowns back to a row over
    /// the original unknowns: z^a ↦ d_{μ_a} y^{k_a}.
    pub fn row_to_original(&self, row: &[OreOperator]) -> Vec<OreOperator> {
        assert_eq!(row.len(), self.jets.len());
        let ctx = &row[0].ctx;
        let mut out = vec![OreOperator::zero(ctx); self.m];
        for (a, op) in row.iter().enumerate() {
            let j = &self.jets[a];
            let shift = OreOperator::d_mu(ctx, j.mu.clone());
            out[j.k] = out[j.k].add(&op.mul(&shift));
        }
        out
    }
}

/// Rewrite a completed system of order q as an equivalent first-order system
/// with no zero-order equations, using the parametric jets of order < q as
/// new unknowns (the Spencer-form trick).
pub fn first_order_reduction(inv: &InvolutiveSystem) -> (JetSystem, ReductionDictionary) {
    let sys = &inv.sys;
    let q = sys.q;
    let order = JetOrder::Standard;
    if q <= 1 && sys.eqs.iter().all(|e| e.order() == 1) {
        // already first order with no zero-order equations
        let jets: Vec<JetCoord> =
            (0..sys.m).map(|k| JetCoord::new(k, MultiIndex::zero(sys.n()))).collect();
        let dict = ReductionDictionary { jets, m: sys.m };
        return (sys.clone(), dict);
    }

    let mut parametric = sys.parametric_jets();
    parametric.reverse(); // ascending: y, y_1, …
    let zjets: Vec<JetCoord> = parametric.iter().filter(|j| j.order() < q).cloned().collect();
    let zindex: HashMap<JetCoord, usize> =
        zjets.iter().enumerate().map(|(a, j)| (j.clone(), a)).collect();
    let param_set: std::collections::HashSet<JetCoord> = parametric.iter().cloned().collect();
    let by_lead: HashMap<JetCoord, &LinForm> =
        sys.eqs.iter().map(|e| (e.lead().unwrap().0.clone(), e)).collect();
    let mz = zjets.len();
    let nvars = sys.ctx.field.nvars;

    // express an original jet (order ≤ q) as a K-linear form over z-jets of
    // order ≤ 1
    fn expr(
        w: &JetCoord,
        q: u32,
        zindex: &HashMap<JetCoord, usize>,
        param_set: &std::collections::HashSet<JetCoord>,
        by_lead: &HashMap<JetCoord, &LinForm>,
        order: &JetOrder,
        nvars: usize,
        n: usize,
    ) -> LinForm {
        if param_set.contains(w) {
            if w.order() < q {
                let a = zindex[w];
                return LinForm::from_terms(
                    order,
                    vec![(JetCoord::new(a, MultiIndex::zero(n)), RatFun::one(nvars))],
                );
            }
            // order-q parametric jet: w = u + 1_c with c = class(w)
            let c = w.mu.class().expect("order-q jets have a class");
            let u = JetCoord::new(w.k, w.mu.lower(c).unwrap());
            let a = zindex[&u];
            return LinForm::from_terms(
                order,
                vec![(JetCoord::new(a, MultiIndex::unit(n, c)), RatFun::one(nvars))],
            );
        }
        // principal: solve by its equation w + Σ c_t param_t = 0
        let eq = by_lead.get(w).expect("principal jets lead an equation");
        let mut acc = LinForm::zero();
        for (j, cf) in eq.terms.iter().skip(1) {
            let part = expr(j, q, zindex, param_set, by_lead, order, nvars, n).scale(&cf.neg());
            acc = acc.add(order, &part);
        }
        acc
    }

    let mut eqs = Vec::new();
    for (a, v) in zjets.iter().enumerate() {
        for i in 1..=sys.n() {
            let lhs = LinForm::from_terms(
                &order,
                vec![(JetCoord::new(a, MultiIndex::unit(sys.n(), i)), RatFun::one(nvars))],
            );
            let w = JetCoord::new(v.k, v.mu.bump(i));
            let rhs = expr(&w, q, &zindex, &param_set, &by_lead, &order, nvars, sys.n());
            let eq = lhs.add_scaled(&order, &rhs, &RatFun::constant(nvars, crate::arith::rat_int(-1)));
            if !eq.is_zero() {
                eqs.push(eq);
            }
        }
    }
    let zsys = JetSystem::new(&sys.ctx, mz, 1, eqs);
    (zsys, ReductionDictionary { jets: zjets, m: sys.m })
}

/// Substitution record of a reduced Spencer form: ȳ = subst · y with a
/// unipotent constant-coefficient-in-K matrix.
#[derive(Clone, Debug)]
pub struct SpencerSubstitution {
    pub matrix: OperatorMatrix,
    pub inverse: OperatorMatrix,
    pub identity: bool,
}

/// Theorem-style reduction of a first-order involutive system with no
/// zero-order equations: absorb the d_n-jets of the non-pivot unknowns into
/// new unknowns ȳ so that classes < n no longer involve the non-pivot
/// unknowns at all.
pub fn reduced_spencer_form(
    inv: &InvolutiveSystem,
    cfg: &CompletionConfig,
) -> Result<(InvolutiveSystem, SpencerSubstitution)> {
    let sys = &inv.sys;
    let n = sys.n();
    let m = sys.m;
    if sys.q != 1 {
        return Err(Error::NotFirstOrder);
    }
    if sys.eqs.iter().any(|e| e.order() == 0) {
        return Err(Error::HasZeroOrderEquations);
    }
    let ctx = &sys.ctx;
    // pivot unknowns of class n
    let mut pivot: Vec<bool> = vec![false; m];
    for e in &sys.eqs {
        let (lead, _) = e.lead().unwrap();
        if lead.mu.class() == Some(n) {
            pivot[lead.k] = true;
        }
    }
    // substitution ȳ^p = y^p + Σ_{j not pivot} c_j y^j where c_j is the
    // coefficient of y^j_n in the class-n equation solved for y^p_n
    let mut subst = vec![vec![OreOperator::zero(ctx); m]; m];
    for (k, row) in subst.iter_mut().enumerate() {
        row[k] = OreOperator::one(ctx);
    }
    let mut identity = true;
    for e in &sys.eqs {
        let (lead, _) = e.lead().unwrap();
        if lead.mu.class() != Some(n) {
            continue;
        }
        let p = lead.k;
        for (j, c) in &e.terms {
            if j.mu.class() == Some(n) && !pivot[j.k] {
                subst[p][j.k] = OreOperator::coeff(ctx, c.clone());
                identity = false;
            }
        }
    }
    let u = OperatorMatrix::from_rows(ctx, subst, m);
    // invert the unipotent-in-block matrix: ȳ = U y ⇒ y = U⁻¹ ȳ; since the
    // correction only maps pivot ← non-pivot and non-pivot rows are identity,
    // U⁻¹ = 2I − U.
    let mut inv_rows = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = Vec::with_capacity(m);
        for c in 0..m {
            if r == c {
                row.push(OreOperator::one(ctx));
            } else {
                row.push(u.at(r, c).neg());
            }
        }
        inv_rows.push(row);
    }
    let u_inv = OperatorMatrix::from_rows(ctx, inv_rows, m);
    debug_assert!({
        let prod = u.mul(&u_inv);
        (0..m).all(|r| {
            (0..m).all(|c| {
                if r == c {
                    *prod.at(r, c) == OreOperator::one(ctx)
                } else {
                    prod.at(r, c).is_zero()
                }
            })
        })
    });

    // rewrite each equation in the new unknowns: rows ∘ U⁻¹
    let rewritten = sys.to_operator_matrix().mul(&u_inv);
    let new_sys = JetSystem::from_operator_matrix(&rewritten, 1);
    let out = complete_to_involution(&new_sys, cfg)?;

    // Theorem 2.10 shape: classes < n are free of non-pivot unknowns; class-n
    // rows contain them only through jets of class < n or order 0.
    for e in &out.sys.eqs {
        let (lead, _) = e.lead().unwrap();
        let class = lead.mu.class();
        for (j, _) in &e.terms {
            if !pivot[j.k] {
                if class != Some(n) {
                    return Err(Error::ParametrizationNotCertified(
                        "reduced Spencer form violates the class shape".into(),
                    ));
                }
                if j.mu.class() == Some(n) {
                    return Err(Error::ParametrizationNotCertified(
                        "non-pivot d_n jet survived the absorption".into(),
                    ));
                }
            }
        }
    }
    Ok((out, SpencerSubstitution { matrix: u, inverse: u_inv, identity }))
}
