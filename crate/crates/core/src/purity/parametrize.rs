use super::filtration::purity_test;
use super::localize::{content_normalize, delocalize_form, localized_context, relative_localization};
use super::restrict::restrict_to_classes;
use crate::arith::RatFun;
use crate::homology::{cc_of_raw, free_resolution, minimalize_rows, ModuleTable, Presentation};
use crate::involution::InvolutiveSystem;
use crate::jets::{JetCoord, JetOrder, LinForm};
use crate::ore::{MultiIndex, OperatorMatrix, OreContext, OreOperator};
use crate::{Error, Result};
use std::sync::Arc;

/// Relative parametrization of an r-pure module: potentials z₁..z_α, a
/// constraint system C presenting the module L, a map P with
/// 𝒟 ∘ P ≡ 0 modulo C (certified row by row), and the localized relations
/// used to derive it.
pub struct Parametrization {
    /// Number of potentials α.
    pub potentials: usize,
    /// Constraint matrix presenting L (rows over the potentials).
    pub constraints: OperatorMatrix,
    /// m×α operator matrix mapping potentials to the original unknowns.
    pub map: OperatorMatrix,
    /// Localized relations: unknown index ↦ k(χ)-linear form over the
    /// potentials (order-0 jets), for the report.
    pub localized_relations: Vec<(usize, LinForm)>,
    /// Certificates: for each row Φ of the original presentation, the
    /// combination c with Φ∘P = c·C exactly.
    pub certificates: Vec<Vec<OreOperator>>,
    /// Codimension r = number of resolution stages of L.
    pub r: usize,
}

impl std::fmt::Debug for Parametrization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Parametrization with {} potentials, r = {}", self.potentials, self.r)?;
        writeln!(f, "constraints: {:?}", self.constraints)?;
        write!(f, "map: {:?}", self.map)
    }
}

/// Solve the order-0 localized relations for the largest-index unknowns over
/// k(χ): returns (free unknown indices ascending, expressions: for every
/// unknown, its k(χ)-combination of the free ones).
fn solve_relations(
    relations: &[LinForm],
    m: usize,
    nv: usize,
) -> (Vec<usize>, Vec<Vec<RatFun>>) {
    // dense elimination with pivots from the largest unknown index down
    let mut rows: Vec<Vec<RatFun>> = relations
        .iter()
        .map(|f| {
            let mut row = vec![RatFun::zero(nv); m];
            for (j, c) in &f.terms {
                row[j.k] = c.clone();
            }
            row
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut used = vec![false; rows.len()];
    for col in (0..m).rev() {
        let Some(r) = (0..rows.len()).find(|&r| !used[r] && !rows[r][col].is_zero()) else {
            continue;
        };
        used[r] = true;
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for c in 0..m {
            rows[r][c] = rows[r][c].mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (rr, row) in rows.iter_mut().enumerate() {
            if rr != r && !row[col].is_zero() {
                let f = row[col].clone();
                for c in 0..m {
                    let t = pivot_row[c].mul(&f);
                    row[c] = row[c].sub(&t);
                }
            }
        }
        pivots.push((r, col));
    }
    let pivot_cols: std::collections::HashSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..m).filter(|c| !pivot_cols.contains(c)).collect();
    // expressions: free unknowns are themselves; pivot p = −Σ_f row[f]·y^f
    let mut exprs = vec![vec![RatFun::zero(nv); free.len()]; m];
    for (fi, &f) in free.iter().enumerate() {
        exprs[f][fi] = RatFun::one(nv);
    }
    for &(r, p) in &pivots {
        for (fi, &f) in free.iter().enumerate() {
            exprs[p][fi] = rows[r][f].neg();
        }
    }
    (free, exprs)
}

/// lcm of denominators of the column coefficients: the potential scaling that
/// makes every relation polynomial in χ.
fn column_scaling(exprs: &[Vec<RatFun>], fi: usize, nv: usize) -> crate::arith::Poly {
    let mut den = crate::arith::Poly::one(nv);
    for row in exprs {
        let c = &row[fi];
        if c.is_zero() {
            continue;
        }
        let g = den.gcd(&c.den);
        den = den.mul(&c.den.exact_div(&g).expect("gcd divides"));
    }
    den
}

struct MapCandidate {
    /// m'×α operator matrix over the full context (F-unknowns ← potentials).
    map: OperatorMatrix,
    /// localized display relations
    relations: Vec<(usize, LinForm)>,
}

/// Route A: solve the localized relations, scale the potentials to clear
/// denominators, delocalize.
fn map_from_localization(
    finv: &InvolutiveSystem,
    r: usize,
) -> Result<MapCandidate> {
    let loc = relative_localization(finv, r)?;
    let ctx_loc = loc.sys.ctx.clone();
    let nv = ctx_loc.field.nvars;
    let m = loc.m;
    let (free, exprs) = solve_relations(&loc.relations, m, nv);
    let alpha = free.len();
    // scale each potential so the displayed relations are χ-polynomial
    let scaled: Vec<Vec<RatFun>> = (0..m)
        .map(|k| {
            (0..alpha)
                .map(|fi| {
                    let den = column_scaling(&exprs, fi, nv);
                    exprs[k][fi].mul(&RatFun::from_poly(den))
                })
                .collect()
        })
        .collect();
    let order = JetOrder::Standard;
    let mut relations = Vec::new();
    for k in 0..m {
        let terms: Vec<(JetCoord, RatFun)> = (0..alpha)
            .filter(|&fi| !scaled[k][fi].is_zero())
            .map(|fi| (JetCoord::new(fi, MultiIndex::zero(ctx_loc.n)), scaled[k][fi].clone()))
            .collect();
        relations.push((k, LinForm::from_terms(&order, terms)));
    }
    // delocalize the relation forms into operator rows over the potentials
    let full_ctx = &finv.sys.ctx;
    let mut rows = Vec::with_capacity(m);
    for (_, form) in &relations {
        rows.push(delocalize_form(form, full_ctx, r, alpha));
    }
    Ok(MapCandidate { map: OperatorMatrix::from_rows(full_ctx, rows, alpha), relations })
}

/// Route B: the double-duality parametrization of the restricted module over
/// the subring, P = ad(CC(ad(M_r))).
fn map_from_double_duality(
    finv: &InvolutiveSystem,
    r: usize,
    cfg: &crate::involution::CompletionConfig,
) -> Result<MapCandidate> {
    let n = finv.sys.n();
    let restricted = restrict_to_classes(finv, n - r)?;
    let sub = restricted.matrix();
    let adm = sub.adjoint();
    let cc = cc_of_raw(&adm, cfg)?;
    if cc.rows == 0 {
        return Err(Error::ParametrizationNotCertified(
            "the restricted module admits no potentials".into(),
        ));
    }
    let p_sub = cc.adjoint(); // m'×α over the subring context
    let full_ctx = &finv.sys.ctx;
    let rows: Vec<Vec<OreOperator>> =
        (0..p_sub.rows).map(|k| restricted.lift_row(&p_sub.row(k), full_ctx)).collect();
    let map = OperatorMatrix::from_rows(full_ctx, rows, p_sub.cols);
    // localized display: substitute d_j → χ_j in the subring operators
    let ctx_loc = localized_context(full_ctx, r);
    let nv = ctx_loc.field.nvars;
    let order = JetOrder::Standard;
    let chi_base = full_ctx.field.nvars;
    let mut relations = Vec::new();
    for k in 0..map.rows {
        let mut terms: Vec<(JetCoord, RatFun)> = Vec::new();
        for t in 0..map.cols {
            let op = map.at(k, t);
            let mut acc = RatFun::zero(nv);
            for (mu, c) in &op.terms {
                debug_assert!(mu.0[n - r..].iter().all(|&e| e == 0));
                let mut chi = c.extend_vars(nv);
                for (slot, &e) in mu.0[..n - r].iter().enumerate() {
                    for _ in 0..e {
                        chi = chi.mul(&RatFun::var(nv, chi_base + slot));
                    }
                }
                acc = acc.add(&chi);
            }
            if !acc.is_zero() {
                terms.push((JetCoord::new(t, MultiIndex::zero(ctx_loc.n)), acc));
            }
        }
        relations.push((k, LinForm::from_terms(&order, terms)));
    }
    Ok(MapCandidate { map, relations })
}

/// Substitute the candidate map into every equation of class ≤ n−r of the
/// first-order system; the composites must vanish identically.
fn subring_exactness(finv: &InvolutiveSystem, map: &OperatorMatrix, r: usize) -> bool {
    let n = finv.sys.n();
    let ctx = &finv.sys.ctx;
    for e in &finv.sys.eqs {
        let class = e.lead().unwrap().0.mu.class().unwrap();
        if class > n - r {
            continue;
        }
        let row = e.to_operator_row(ctx, finv.sys.m);
        let rowm = OperatorMatrix::from_rows(ctx, vec![row], finv.sys.m);
        if !rowm.mul(map).is_zero() {
            return false;
        }
    }
    true
}

/// Constraints through the localized picture: substitute the localized
/// relations into the localized higher-class rows, remove the χ-content,
/// delocalize, minimalize.
fn constraints_from_localization(
    finv: &InvolutiveSystem,
    relations: &[(usize, LinForm)],
    r: usize,
    alpha: usize,
    cfg: &crate::involution::CompletionConfig,
) -> Result<OperatorMatrix> {
    let loc = relative_localization(finv, r)?;
    let ctx_loc = loc.sys.ctx.clone();
    let order = JetOrder::Standard;
    // expression matrix as order-0 operators over the localized algebra
    let expr_rows: Vec<Vec<OreOperator>> = relations
        .iter()
        .map(|(_, form)| {
            let mut row = vec![OreOperator::zero(&ctx_loc); alpha];
            for (j, c) in &form.terms {
                row[j.k] = OreOperator::coeff(&ctx_loc, c.clone());
            }
            row
        })
        .collect();
    let expr = OperatorMatrix::from_rows(&ctx_loc, expr_rows, alpha);
    let n = finv.sys.n();
    let mut rows: Vec<Vec<OreOperator>> = Vec::new();
    for e in &finv.sys.eqs {
        let class = e.lead().unwrap().0.mu.class().unwrap();
        if class <= n - r {
            continue;
        }
        // localize the row as operators over the localized algebra
        let nv = ctx_loc.field.nvars;
        let loc_form = {
            // reuse the form-level localization through the system machinery
            let mut terms = Vec::new();
            for (j, c) in &e.terms {
                let c = c.extend_vars(nv);
                match j.mu.class() {
                    None => terms.push((JetCoord::new(j.k, MultiIndex::zero(r)), c)),
                    Some(cls) if cls <= n - r => {
                        let chi = RatFun::var(nv, finv.sys.ctx.field.nvars + cls - 1);
                        terms.push((JetCoord::new(j.k, MultiIndex::zero(r)), c.mul(&chi)));
                    }
                    Some(cls) => {
                        terms.push((JetCoord::new(j.k, MultiIndex::unit(r, cls - (n - r))), c));
                    }
                }
            }
            LinForm::from_terms(&order, terms)
        };
        let row = loc_form.to_operator_row(&ctx_loc, loc.m);
        let composite = OperatorMatrix::from_rows(&ctx_loc, vec![row], loc.m).mul(&expr);
        let form = LinForm::from_operator_row(&order, &composite.row(0));
        if form.is_zero() {
            continue;
        }
        let normalized = content_normalize(&form);
        rows.push(delocalize_form(&normalized, &finv.sys.ctx, r, alpha));
    }
    let matrix = OperatorMatrix::from_rows(&finv.sys.ctx, rows, alpha);
    minimalize_rows(&matrix, cfg)
}

/// Route B constraints: substitute the map in D, then saturate the constraint
/// module by the t_r-part of its own purity filtration so that L comes out
/// r-pure with an r-stage resolution.
fn constraints_from_saturation(
    finv: &InvolutiveSystem,
    map: &OperatorMatrix,
    r: usize,
    cfg: &crate::involution::CompletionConfig,
) -> Result<OperatorMatrix> {
    let n = finv.sys.n();
    let ctx = &finv.sys.ctx;
    let mut rows: Vec<Vec<OreOperator>> = Vec::new();
    for e in &finv.sys.eqs {
        let class = e.lead().unwrap().0.mu.class().unwrap();
        if class <= n - r {
            continue;
        }
        let row = e.to_operator_row(ctx, finv.sys.m);
        let comp = OperatorMatrix::from_rows(ctx, vec![row], finv.sys.m).mul(map);
        if !comp.is_zero() {
            rows.push(comp.row(0));
        }
    }
    let mut current = minimalize_rows(&OperatorMatrix::from_rows(ctx, rows, map.cols), cfg)?;
    for _ in 0..3 {
        let pres = Presentation::new(current.clone(), cfg)?;
        let report = purity_test(&pres)?;
        let level = &report.levels[r.min(report.levels.len() - 1)];
        if level.generators.is_empty() {
            return Ok(current);
        }
        let mut rows: Vec<Vec<OreOperator>> = (0..current.rows).map(|k| current.row(k)).collect();
        rows.extend(level.generators.iter().cloned());
        current = minimalize_rows(
            &OperatorMatrix::from_rows(ctx, rows, current.cols),
            cfg,
        )?;
    }
    Err(Error::ParametrizationNotCertified(
        "constraint saturation did not stabilize".into(),
    ))
}

/// Verify a candidate (map, constraints): the composite of every original
/// equation with the map must reduce to zero modulo the constraint module,
/// and the Janet resolution of L must have exactly r stages.
fn verify_candidate(
    pres_rows: &OperatorMatrix,
    map_y: &OperatorMatrix,
    constraints: &OperatorMatrix,
    r: usize,
    cfg: &crate::involution::CompletionConfig,
) -> Result<Option<Vec<Vec<OreOperator>>>> {
    if constraints.rows == 0 {
        return Ok(None);
    }
    let table = ModuleTable::new(constraints, cfg)?;
    let mut certs = Vec::new();
    for i in 0..pres_rows.rows {
        let comp = OperatorMatrix::from_rows(
            &pres_rows.ctx,
            vec![pres_rows.row(i)],
            pres_rows.cols,
        )
        .mul(map_y);
        let (rem, cert) = table.reduce_certified(&comp.row(0));
        if !rem.is_zero() {
            return Ok(None);
        }
        certs.push(cert);
    }
    let lp = Presentation::new(constraints.clone(), cfg)?;
    let res = free_resolution(&lp)?;
    if res.maps.len() != r {
        return Ok(None);
    }
    Ok(Some(certs))
}

/// Full Step-5 pipeline: purity test, localization, map + constraint
/// candidates (localized route first, double-duality and saturation
/// fallbacks), exact certificate.
pub fn relative_parametrization(pres: &Presentation) -> Result<Parametrization> {
    let cfg = pres.cfg.clone();
    let n = pres.matrix.ctx.n;
    let report = purity_test(pres)?;
    let r = report.cd;
    if r == 0 {
        return Err(Error::NotTorsionCase);
    }
    if r >= n {
        return Err(Error::UnsupportedCodimension(r));
    }
    if !report.pure {
        return Err(Error::NotPure(r));
    }
    let finv = &report.first_order;
    let dict = &report.dictionary;

    let mut candidates: Vec<MapCandidate> = Vec::new();
    if let Ok(c) = map_from_localization(finv, r) {
        candidates.push(c);
    }
    if let Ok(c) = map_from_double_duality(finv, r, &cfg) {
        candidates.push(c);
    }

    for cand in candidates {
        if !subring_exactness(finv, &cand.map, r) {
            continue;
        }
        let alpha = cand.map.cols;
        // the original-unknown rows of the map
        let map_y_rows: Vec<Vec<OreOperator>> =
            (0..pres.m()).map(|k| cand.map.row(dict.z_of_unknown(k))).collect();
        let map_y = OperatorMatrix::from_rows(&finv.sys.ctx, map_y_rows, alpha);
        // constraint candidates in order
        let mut constraint_sets = Vec::new();
        if let Ok(c) = constraints_from_localization(finv, &cand.relations, r, alpha, &cfg) {
            constraint_sets.push(c);
        }
        if let Ok(c) = constraints_from_saturation(finv, &cand.map, r, &cfg) {
            constraint_sets.push(c);
        }
        for constraints in constraint_sets {
            if let Some(certs) = verify_candidate(&pres.matrix, &map_y, &constraints, r, &cfg)? {
                return Ok(Parametrization {
                    potentials: alpha,
                    constraints,
                    map: map_y,
                    localized_relations: cand.relations,
                    certificates: certs,
                    r,
                });
            }
        }
    }
    Err(Error::ParametrizationNotCertified(
        "no candidate passed the exact certificate".into(),
    ))
}
