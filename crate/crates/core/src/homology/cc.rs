use super::membership::ModuleTable;
use crate::involution::{complete_tracked, CompletionConfig, InvolutiveSystem};
use crate::jets::{echelon_rows, reduce_row, JetOrder, LinForm, OpRow};
use crate::ore::{OperatorMatrix, OreOperator};
use crate::{Error, Result};

/// First-order compatibility conditions of an involutive system: one CC row
/// per dot of the board. The dot (τ, j) yields the row expressing
/// d_j Φ^τ − Σ c·(multiplicative prolongations) − Σ c·Φ = 0, read as a
/// first-order operator row on the duals u^1..u^p of the equations.
pub fn compatibility_conditions(inv: &InvolutiveSystem) -> Result<OperatorMatrix> {
    let sys = &inv.sys;
    let ctx = &sys.ctx;
    let order = JetOrder::Standard;
    let n = sys.n();
    let p = sys.eqs.len();
    // tracked reducers: the equations and their multiplicative prolongations
    let mut reducers: Vec<(LinForm, OpRow)> = Vec::new();
    for (e, eq) in sys.eqs.iter().enumerate() {
        let pay = OpRow::unit(ctx, p, e);
        reducers.push((eq.clone(), pay.clone()));
        let (lead, _) = eq.lead().unwrap();
        if lead.order() == sys.q {
            let class = lead.mu.class().unwrap();
            for l in 1..=class {
                reducers.push((eq.formal_derivative(ctx, &order, l), pay.d_left(l)));
            }
        }
    }
    let ech = echelon_rows(&order, reducers);
    let mut rows: Vec<(usize, usize, Vec<OreOperator>)> = Vec::new();
    for (e, eq) in sys.eqs.iter().enumerate() {
        let (lead, _) = eq.lead().unwrap();
        let nonmult: Vec<usize> = if lead.order() == sys.q {
            (lead.mu.class().unwrap() + 1..=n).collect()
        } else {
            (1..=n).collect()
        };
        for j in nonmult {
            let cand = eq.formal_derivative(ctx, &order, j);
            let pay = OpRow::unit(ctx, p, e).d_left(j);
            let (rem, pay) = reduce_row(&order, cand, pay, &ech);
            if !rem.is_zero() {
                return Err(Error::NotInvolutive);
            }
            rows.push((j, e, pay.0));
        }
    }
    // row order: class descending, then source equation order, matching the
    // board reading used for the Janet bundles
    rows.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let rows: Vec<Vec<OreOperator>> = rows.into_iter().map(|(_, _, r)| r).collect();
    Ok(OperatorMatrix::from_rows(ctx, rows, p))
}

/// Compatibility conditions of a raw (not necessarily involutive) operator
/// matrix: complete with tracking, take the canonical CC of the involutive
/// form, compose with the tracking to land back on the original rows, and
/// minimalize the generating set.
pub fn cc_of_raw(matrix: &OperatorMatrix, cfg: &CompletionConfig) -> Result<OperatorMatrix> {
    if matrix.rows == 0 {
        return Ok(OperatorMatrix::zero(&matrix.ctx, 0, 0));
    }
    let (inv, tracking, gens_final) = complete_tracked(matrix, 1, cfg)?;
    let cc = compatibility_conditions(&inv)?;
    let ctx = &inv.sys.ctx;
    let order = JetOrder::Standard;
    let p_orig = matrix.rows;
    let p_inv = inv.sys.eqs.len();
    let mut rows: Vec<Vec<OreOperator>> = Vec::new();
    for r in 0..cc.rows {
        let mut out = vec![OreOperator::zero(ctx); p_orig];
        for e in 0..cc.cols {
            let a = cc.at(r, e);
            if a.is_zero() {
                continue;
            }
            for (g, t) in tracking[e].0.iter().enumerate() {
                out[g] = out[g].add(&a.mul(t));
            }
        }
        if out.iter().any(|o| !o.is_zero()) {
            rows.push(out);
        }
    }
    // Redundant input rows contribute their own syzygies: if row_r reduces
    // through the involutive equations as Σ_e S_e Φ^e and Φ^e = T_e · rows,
    // then unit_r − S·T kills the generators.
    let ech: Vec<(LinForm, OpRow)> = inv
        .sys
        .eqs
        .iter()
        .enumerate()
        .map(|(e, f)| (f.clone(), OpRow::unit(ctx, p_inv, e)))
        .collect();
    for r in 0..p_orig {
        let row = gens_final.row(r);
        let form = LinForm::from_operator_row(&order, &row);
        if form.is_zero() {
            // a zero input row is killed by the unit itself
            let mut out = vec![OreOperator::zero(ctx); p_orig];
            out[r] = OreOperator::one(ctx);
            rows.push(out);
            continue;
        }
        let zero_pay = OpRow(vec![OreOperator::zero(ctx); p_inv]);
        let (rem, pay) = reduce_row(&order, form, zero_pay, &ech);
        if !rem.is_zero() {
            return Err(Error::NotInvolutive);
        }
        // syzygy candidate = unit_r + Σ_e pay_e · T_e (pay already carries −S)
        let mut out = vec![OreOperator::zero(ctx); p_orig];
        out[r] = OreOperator::one(ctx);
        for (e, c) in pay.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (g, t) in tracking[e].0.iter().enumerate() {
                out[g] = out[g].add(&c.mul(t));
            }
        }
        if out.iter().any(|o| !o.is_zero()) {
            rows.push(out);
        }
    }
    // transport back to the caller's frame so every stage of a pipeline
    // lives in one coordinate system
    let rows: Vec<Vec<OreOperator>> = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|o| super::membership::transport_op(&o, ctx, &matrix.ctx))
                .collect()
        })
        .collect();
    let composed = OperatorMatrix::from_rows(&matrix.ctx, rows, p_orig);
    minimalize_rows(&composed, cfg)
}

/// Drop rows that the remaining rows already generate over D, largest rows
/// first so small generators survive.
pub fn minimalize_rows(matrix: &OperatorMatrix, cfg: &CompletionConfig) -> Result<OperatorMatrix> {
    let ctx = &matrix.ctx;
    if matrix.rows == 0 {
        return Ok(matrix.clone());
    }
    let mut keep: Vec<Vec<OreOperator>> = (0..matrix.rows).map(|r| matrix.row(r)).collect();
    // drop exact duplicates first
    let mut i = 0;
    while i < keep.len() {
        let mut j = i + 1;
        while j < keep.len() {
            if keep[i] == keep[j] {
                keep.remove(j);
            } else {
                j += 1;
            }
        }
        i += 1;
    }
    // candidates in descending size order
    let mut order_of: Vec<(u32, usize)> = keep
        .iter()
        .enumerate()
        .map(|(idx, row)| (row.iter().map(|o| o.order()).max().unwrap_or(0), idx))
        .collect();
    order_of.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
    let try_order: Vec<usize> = order_of.into_iter().map(|(_, i)| i).collect();
    let mut alive = vec![true; keep.len()];
    for &cand in &try_order {
        if keep.iter().zip(&alive).filter(|(_, &a)| a).count() <= 1 {
            break;
        }
        let others: Vec<Vec<OreOperator>> = keep
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != cand && alive[*i])
            .map(|(_, r)| r.clone())
            .collect();
        if others.is_empty() {
            break;
        }
        let table = ModuleTable::new(
            &OperatorMatrix::from_rows(ctx, others, matrix.cols),
            cfg,
        )?;
        if table.contains(&keep[cand]) {
            alive[cand] = false;
        }
    }
    let rows: Vec<Vec<OreOperator>> = keep
        .into_iter()
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(r, _)| r)
        .collect();
    Ok(OperatorMatrix::from_rows(ctx, rows, matrix.cols))
}
