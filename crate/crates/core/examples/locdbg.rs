use janetwb_core::arith::{rat_int, FieldCtx, RatFun};
use janetwb_core::involution::{complete_to_involution, first_order_reduction, CompletionConfig};
use janetwb_core::jets::{JetCoord, JetOrder, JetSystem, LinForm};
use janetwb_core::ore::{MultiIndex, OreContext};
use janetwb_core::purity::*;
fn main() {
    let ctx = OreContext::new(2, FieldCtx::constants());
    let jet = |k: usize, mu: Vec<u32>| JetCoord::new(k, MultiIndex(mu));
    let cform = |terms: Vec<(JetCoord, i64)>| {
        LinForm::from_terms(
            &JetOrder::Standard,
            terms.into_iter().map(|(j, c)| (j, RatFun::constant(0, rat_int(c)))).collect(),
        )
    };
    let sys = JetSystem::new(
        &ctx,
        1,
        2,
        vec![cform(vec![(jet(0, vec![0, 2]), 1)]), cform(vec![(jet(0, vec![1, 1]), 1)])],
    );
    let cfg = CompletionConfig::default();
    let inv = complete_to_involution(&sys, &cfg).unwrap();
    let (f, dict) = first_order_reduction(&inv);
    println!("dict: {:?}", dict.jets);
    let finv = complete_to_involution(&f, &cfg).unwrap();
    println!("first-order form:\n{:?}", finv.sys);
    let loc = relative_localization(&finv, 1).unwrap();
    println!("localized:\n{:?}", loc.sys);
    println!("relations:");
    for r in &loc.relations {
        println!("  {} = 0", r.display_named(&loc.sys.ctx.field.names));
    }
}
