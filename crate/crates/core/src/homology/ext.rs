use super::cc::{cc_of_raw, minimalize_rows};
use super::membership::ModuleTable;
use super::resolution::{free_resolution, short_resolution, FreeResolution, Presentation};
use crate::involution::CompletionConfig;
use crate::ore::{OperatorMatrix, OreOperator};
use crate::Result;

/// Which free resolution feeds the dualized complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResolutionRoute {
    /// Strict resolution through the Janet sequence.
    Janet,
    /// Iterated CC of the raw presentation (shorter, non-strict).
    Short,
}

/// One extension module ext^i(M).
#[derive(Clone)]
pub enum ExtEntry {
    Zero,
    Nonzero {
        /// Generators as rows of D^{r_i} (cocycles of the dual complex).
        generators: OperatorMatrix,
        /// Relations among the generator residues (rows of D^c).
        relations: OperatorMatrix,
        /// Completed presentation of the ext module itself.
        presentation: Presentation,
    },
}

impl ExtEntry {
    pub fn is_zero(&self) -> bool {
        matches!(self, ExtEntry::Zero)
    }
}

impl std::fmt::Debug for ExtEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtEntry::Zero => write!(f, "0"),
            ExtEntry::Nonzero { generators, relations, .. } => {
                write!(f, "ext({} generators, {} relations)", generators.rows, relations.rows)
            }
        }
    }
}

/// ext^i(M) for i = 0..n via the dualized deleted complex: the dual of
/// map_t is ad(map_t), ext^i = CC(ad(map_{i+1})) modulo the rows of
/// ad(map_i), and membership is decided by exact reduction after completion.
#[derive(Debug)]
pub struct ExtReport {
    pub entries: Vec<ExtEntry>,
    pub cd: usize,
}

pub fn ext_modules(pres: &Presentation, route: ResolutionRoute) -> Result<ExtReport> {
    let cfg = &pres.cfg;
    let res: FreeResolution = match route {
        ResolutionRoute::Janet => free_resolution(pres)?,
        ResolutionRoute::Short => short_resolution(&pres.matrix, cfg)?,
    };
    let n = pres.matrix.ctx.n;
    let ell = res.maps.len();
    let duals: Vec<OperatorMatrix> = res.maps.iter().map(|m| m.adjoint()).collect();
    let mut entries = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if i > ell {
            entries.push(ExtEntry::Zero);
            continue;
        }
        entries.push(ext_at_spot(&res, &duals, i, cfg)?);
    }
    Ok(ExtReport { entries, cd: pres.codimension() })
}

fn ext_at_spot(
    res: &FreeResolution,
    duals: &[OperatorMatrix],
    i: usize,
    cfg: &CompletionConfig,
) -> Result<ExtEntry> {
    let ell = res.maps.len();
    let ctx = &res.maps[0].ctx;
    let r_i = res.ranks[i];
    // kernel generators at spot i
    let kernel: OperatorMatrix = if i < ell {
        cc_of_raw(&duals[i], cfg)?
    } else {
        // the dual complex ends here: the kernel is everything
        let rows: Vec<Vec<OreOperator>> = (0..r_i).map(|k| unit_row(ctx, r_i, k)).collect();
        OperatorMatrix::from_rows(ctx, rows, r_i)
    };
    if kernel.rows == 0 {
        return Ok(ExtEntry::Zero);
    }
    // image rows at spot i
    let image: Option<&OperatorMatrix> = if i >= 1 { Some(&duals[i - 1]) } else { None };
    // prune kernel generators modulo (other kept kernel rows + image rows)
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
        if let Some(b) = image {
            rows.extend((0..b.rows).map(|r| b.row(r)));
        }
        if rows.is_empty() {
            continue;
        }
        let table = ModuleTable::new(&OperatorMatrix::from_rows(ctx, rows, r_i), cfg)?;
        if table.contains(&kept[cand]) {
            alive[cand] = false;
        }
    }
    let gens: Vec<Vec<OreOperator>> = kept
        .drain(..)
        .zip(alive)
        .filter(|(_, a)| *a)
        .map(|(r, _)| r)
        .collect();
    if gens.is_empty() {
        return Ok(ExtEntry::Zero);
    }
    let c = gens.len();
    let gens = OperatorMatrix::from_rows(ctx, gens, r_i);
    // relations: syzygies of [gens; image] projected onto the generator part
    let mut stacked: Vec<Vec<OreOperator>> = (0..c).map(|r| gens.row(r)).collect();
    let extra = image.map(|b| b.rows).unwrap_or(0);
    if let Some(b) = image {
        stacked.extend((0..b.rows).map(|r| b.row(r)));
    }
    let stacked = OperatorMatrix::from_rows(ctx, stacked, r_i);
    let syz = cc_of_raw(&stacked, cfg)?;
    let mut rel_rows: Vec<Vec<OreOperator>> = Vec::new();
    for r in 0..syz.rows {
        let head: Vec<OreOperator> = (0..c).map(|k| syz.at(r, k).clone()).collect();
        if head.iter().any(|o| !o.is_zero()) {
            rel_rows.push(head);
        }
    }
    let _ = extra;
    let relations = minimalize_rows(&OperatorMatrix::from_rows(ctx, rel_rows, c), cfg)?;
    let presentation = Presentation::new(relations.clone(), cfg)?;
    Ok(ExtEntry::Nonzero { generators: gens, relations, presentation })
}

fn unit_row(ctx: &std::sync::Arc<crate::ore::OreContext>, len: usize, k: usize) -> Vec<OreOperator> {
    let mut v = vec![OreOperator::zero(ctx); len];
    v[k] = OreOperator::one(ctx);
    v
}
