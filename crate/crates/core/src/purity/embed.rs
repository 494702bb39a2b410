use crate::arith::{RatFun, Rational};
use crate::homology::{
    element_system, ext_modules, free_resolution, transport_op, ExtEntry, ModuleTable,
    Presentation, ResolutionRoute,
};
use crate::jets::{reduce_row, JetCoord, JetOrder, LinForm};
use crate::ore::{MultiIndex, OperatorMatrix, OreOperator};
use crate::{Error, Result};
use num_traits::Zero;

/// Theorem-4.1 embedding: an r-pure module M embeds into L = coker of the
/// dualized r-th map of a free resolution of N = ext^r(M), with pd(L) ≤ r.
pub struct Embedding {
    pub l: Presentation,
    /// m×(generators of L) inclusion candidate, certified to map the
    /// relations of M into the relations of L.
    pub inclusion: OperatorMatrix,
}

impl std::fmt::Debug for Embedding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Embedding into L with {} generators", self.l.m())?;
        write!(f, "inclusion: {:?}", self.inclusion)
    }
}

pub fn embed_pure_module(pres: &Presentation, route: ResolutionRoute) -> Result<Embedding> {
    let cfg = pres.cfg.clone();
    let r = pres.codimension();
    if r == 0 {
        return Err(Error::NotTorsionCase);
    }
    let ext = ext_modules(pres, route)?;
    let ExtEntry::Nonzero { relations, .. } = &ext.entries[r] else {
        return Err(Error::EmbeddingNotCertified(format!("ext^{r}(M) vanished")));
    };
    // resolve N = ext^r(M) through its Janet sequence and dualize the r-th map
    let n_pres = Presentation::new(relations.clone(), &cfg)?;
    let res = free_resolution(&n_pres)?;
    if res.maps.len() < r {
        return Err(Error::EmbeddingNotCertified(format!(
            "the resolution of ext^{r}(M) has fewer than {r} stages"
        )));
    }
    let l_matrix = res.maps[r - 1].adjoint();
    let l = Presentation::new(l_matrix.clone(), &cfg)?;
    let inclusion = search_inclusion(pres, &l, 2)?;
    Ok(Embedding { l, inclusion })
}

/// Solve for an m×p operator matrix J of bounded order with
/// 𝒟 ∘ J ≡ 0 mod (relations of L), then pick the candidate whose cyclic
/// image has the Hilbert data of M (codimension, degree, leading
/// coefficient).
fn search_inclusion(pres: &Presentation, l: &Presentation, max_order: u32) -> Result<OperatorMatrix> {
    let cfg = &pres.cfg;
    let m = pres.m();
    let p = l.m();
    let l_ctx = &l.matrix.ctx;
    let table = ModuleTable::new(&l.matrix, cfg)?;
    let order = JetOrder::Standard;
    let nv = l_ctx.field.nvars;
    // presentation rows transported into L's frame
    let rows_in_l: Vec<Vec<OreOperator>> = (0..pres.matrix.rows)
        .map(|i| {
            pres.matrix
                .row(i)
                .iter()
                .map(|o| transport_op(o, &pres.matrix.ctx, l_ctx))
                .collect()
        })
        .collect();
    for bound in 0..=max_order {
        let monomials = MultiIndex::all_up_to(l_ctx.n, bound);
        // basis of unknown coefficients: (k, t, ν)
        let mut basis_defs = Vec::new();
        for k in 0..m {
            for t in 0..p {
                for nu in &monomials {
                    basis_defs.push((k, t, nu.clone()));
                }
            }
        }
        // residue of each basis element: the stacked reductions of every
        // presentation row composed with E_{k,t} d_ν
        let mut ech: Vec<(LinForm, Vec<RatFun>)> = Vec::new();
        let mut kernel: Vec<Vec<RatFun>> = Vec::new();
        for (slot, (k, t, nu)) in basis_defs.iter().enumerate() {
            // composite forms for all relation rows, tagged by row index as
            // separate unknown blocks so the conditions stack independently
            let mut terms: Vec<(JetCoord, RatFun)> = Vec::new();
            for (i, row) in rows_in_l.iter().enumerate() {
                let composite = row[*k].mul(&OreOperator::d_mu(l_ctx, nu.clone()));
                let form = LinForm::from_terms(
                    &order,
                    composite.terms.iter().map(|(mu, c)| (JetCoord::new(*t, mu.clone()), c.clone())).collect(),
                );
                let reduced = table.reduce(
                    &form.to_operator_row(l_ctx, p),
                );
                // block-shift the unknown index by i·p to stack row conditions
                for (j, c) in reduced.terms {
                    terms.push((JetCoord::new(j.k + i * p, j.mu), c));
                }
            }
            let stacked = LinForm::from_terms(&order, terms);
            let mut unit = vec![RatFun::zero(nv); basis_defs.len()];
            unit[slot] = RatFun::one(nv);
            let (rem, pay) = reduce_row(&order, stacked, unit, &ech);
            if rem.is_zero() {
                if pay.iter().any(|c| !c.is_zero()) {
                    kernel.push(pay);
                }
            } else {
                let lc = rem.lead().unwrap().1.clone();
                let inv = lc.inv().expect("nonzero lead");
                ech.push((rem.scale(&inv), pay.iter().map(|c| c.mul(&inv)).collect()));
                ech.sort_by(|a, b| order.cmp(&b.0.lead().unwrap().0, &a.0.lead().unwrap().0));
            }
        }
        // build candidate matrices and score them
        let m_ch = pres.characters();
        let m_poly = pres.inv.hilbert_polynomial();
        for pay in kernel {
            let mut rows = vec![vec![OreOperator::zero(l_ctx); p]; m];
            for (slot, c) in pay.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (k, t, nu) = &basis_defs[slot];
                rows[*k] =
                    std::mem::take(&mut rows[*k]);
                rows[*k][*t] =
                    rows[*k][*t].add(&OreOperator::monomial(l_ctx, nu.clone(), c.clone()));
            }
            if rows.iter().any(|r| r.iter().all(|o| o.is_zero())) {
                continue;
            }
            let j = OperatorMatrix::from_rows(l_ctx, rows, p);
            // certificate: exact reduction of every relation row composite
            let ok = (0..pres.matrix.rows).all(|i| {
                let comp = OperatorMatrix::from_rows(l_ctx, vec![rows_in_l[i].clone()], m)
                    .mul(&j);
                table.contains(&comp.row(0))
            });
            if !ok {
                continue;
            }
            // cyclic-image Hilbert match against M (sum of the rows as the
            // tested element when m = 1; otherwise require each row cyclic
            // codimension to match)
            if m == 1 {
                let es = element_system(&l.matrix, &j.row(0), cfg, 8)?;
                let ch = es.characters();
                if ch.cd != m_ch.cd {
                    continue;
                }
                let poly = es.hilbert_polynomial();
                if leading(&poly) != leading(&m_poly) {
                    continue;
                }
            }
            return Ok(j);
        }
    }
    Err(Error::EmbeddingNotCertified("no inclusion candidate matched".into()))
}

fn leading(poly: &[Rational]) -> (usize, Rational) {
    let mut deg = 0;
    for (i, c) in poly.iter().enumerate() {
        if !c.is_zero() {
            deg = i;
        }
    }
    (deg, poly.get(deg).cloned().unwrap_or_else(Rational::zero))
}
