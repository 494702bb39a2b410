use janetwb_core::arith::FieldCtx;
use janetwb_core::homology::*;
use janetwb_core::involution::CompletionConfig;
use janetwb_core::ore::{MultiIndex, OperatorMatrix, OreContext, OreOperator};
fn main() {
    let ctx = OreContext::new(3, FieldCtx::constants());
    let d = |mu: Vec<u32>| OreOperator::d_mu(&ctx, MultiIndex(mu));
    let raw = OperatorMatrix::from_rows(
        &ctx,
        vec![vec![d(vec![2, 0, 0])], vec![d(vec![1, 0, 1]).sub(&d(vec![0, 1, 0]))]],
        1,
    );
    let cfg = CompletionConfig::default();
    let pres = Presentation::new(raw, &cfg).unwrap();
    for route in [ResolutionRoute::Janet, ResolutionRoute::Short] {
        let rep = ext_modules(&pres, route).unwrap();
        println!("route {:?}", route);
        for (i, e) in rep.entries.iter().enumerate() {
            match e {
                ExtEntry::Zero => println!("  ext^{i} = 0"),
                ExtEntry::Nonzero { generators, relations, presentation } => {
                    println!("  ext^{i}: {} gens, {} rels, ch {:?}, hilb {:?}",
                        generators.rows, relations.rows, presentation.characters(), presentation.hilbert_values(4));
                    println!("  gens: {:?}", generators);
                    println!("  rels: {:?}", relations);
                }
            }
        }
    }
}
