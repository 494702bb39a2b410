use super::cc::cc_of_raw;
use super::membership::{annihilator_of, ModuleTable};
use super::resolution::Presentation;
use crate::ore::{OperatorMatrix, OreOperator};
use crate::{Error, Result};

/// A certified torsion element: a representative row in D^m together with a
/// nonzero operator annihilating it modulo the presentation.
#[derive(Clone)]
pub struct TorsionGenerator {
    pub row: Vec<OreOperator>,
    pub annihilator: OreOperator,
}

impl std::fmt::Debug for TorsionGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let row: Vec<String> = self.row.iter().map(|o| o.to_string()).collect();
        write!(f, "[{}] killed by {}", row.join(", "), self.annihilator)
    }
}

/// Torsion submodule t(M) via the double-duality formula t(M) = ext¹(N) with
/// N = coker(ad(𝒟)).
#[derive(Debug)]
pub struct TorsionReport {
    pub generators: Vec<TorsionGenerator>,
    pub torsion_free: bool,
}

/// Maximal bound for the annihilator search; generous for desk examples.
const ANNIHILATOR_ORDER_BOUND: u32 = 6;

pub fn torsion_submodule(pres: &Presentation) -> Result<TorsionReport> {
    let cfg = &pres.cfg;
    let ctx = &pres.matrix.ctx;
    let m = pres.m();
    if pres.matrix.rows == 0 {
        // free module
        return Ok(TorsionReport { generators: vec![], torsion_free: true });
    }
    // N = coker(ad(𝒟)); resolve one step: map₂ = CC(ad 𝒟)
    let b = pres.matrix.adjoint(); // m×p
    let z = cc_of_raw(&b, cfg)?; // c×m, the syzygies of the rows of ad(𝒟)
    // ext¹(N) = ker(·ad(map₂)) / rowspan(ad(map₁) = 𝒟)
    let kernel: OperatorMatrix = if z.rows == 0 {
        // the dual complex ends at D^m: the kernel is everything
        let rows: Vec<Vec<OreOperator>> = (0..m)
            .map(|k| {
                let mut v = vec![OreOperator::zero(ctx); m];
                v[k] = OreOperator::one(ctx);
                v
            })
            .collect();
        OperatorMatrix::from_rows(ctx, rows, m)
    } else {
        cc_of_raw(&z.adjoint(), cfg)?
    };
    // prune the kernel generators modulo the presentation rows and each other
    let mut kept: Vec<Vec<OreOperator>> = (0..kernel.rows).map(|r| kernel.row(r)).collect();
    let mut alive = vec![true; kept.len()];
    let mut by_size: Vec<(u32, usize)> = kept
        .iter()
        .enumerate()
        .map(|(idx, row)| (row.iter().map(|o| o.order()).max().unwrap_or(0), idx))
        .collect();
    by_size.sort_by(|a, b| b.cmp(a));
    for (_, cand) in by_size {
        let mut rows: Vec<Vec<OreOperator>> = kept
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != cand && alive[*k])
            .map(|(_, r)| r.clone())
            .collect();
        rows.extend((0..pres.matrix.rows).map(|r| pres.matrix.row(r)));
        let table = ModuleTable::new(&OperatorMatrix::from_rows(ctx, rows, m), cfg)?;
        if table.contains(&kept[cand]) {
            alive[cand] = false;
        }
    }
    let mut generators = Vec::new();
    for (row, a) in kept.into_iter().zip(alive) {
        if !a {
            continue;
        }
        let ann = annihilator_of(&pres.matrix, &row, cfg, ANNIHILATOR_ORDER_BOUND)?
            .ok_or_else(|| {
                Error::ReductionOrderExceeded(ANNIHILATOR_ORDER_BOUND as usize)
            })?;
        // re-verify the certificate by exact reduction
        let table = ModuleTable::new(&pres.matrix, cfg)?;
        let scaled: Vec<OreOperator> = row.iter().map(|o| ann.mul(o)).collect();
        if !table.contains(&scaled) {
            return Err(Error::ParametrizationNotCertified(
                "torsion annihilator failed its reduction check".into(),
            ));
        }
        generators.push(TorsionGenerator { row, annihilator: ann });
    }
    let torsion_free = generators.is_empty();
    Ok(TorsionReport { generators, torsion_free })
}

/// Membership of an element in the torsion submodule: it is torsion iff it
/// admits a nonzero annihilator.
pub fn is_torsion_element(pres: &Presentation, row: &[OreOperator]) -> Result<Option<OreOperator>> {
    annihilator_of(&pres.matrix, row, &pres.cfg, ANNIHILATOR_ORDER_BOUND)
}
