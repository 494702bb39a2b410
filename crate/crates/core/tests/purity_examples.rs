//! Purity pipeline on the worked examples: filtrations, localizations and
//! the relative parametrizations.

use janetwb_core::arith::{rat_int, FieldCtx, RatFun};
use janetwb_core::homology::Presentation;
use janetwb_core::involution::{complete_to_involution, first_order_reduction, CompletionConfig};
use janetwb_core::jets::{JetCoord, JetOrder, JetSystem, LinForm};
use janetwb_core::ore::{MultiIndex, OperatorMatrix, OreContext, OreOperator};
use janetwb_core::purity::*;
use std::sync::Arc;

fn jet(k: usize, mu: Vec<u32>) -> JetCoord {
    JetCoord::new(k, MultiIndex(mu))
}

fn cform(ctx: &Arc<OreContext>, terms: Vec<(JetCoord, i64)>) -> LinForm {
    LinForm::from_terms(
        &JetOrder::Standard,
        terms
            .into_iter()
            .map(|(j, c)| (j, RatFun::constant(ctx.field.nvars, rat_int(c))))
            .collect(),
    )
}

fn d(ctx: &Arc<OreContext>, mu: Vec<u32>) -> OreOperator {
    OreOperator::d_mu(ctx, MultiIndex(mu))
}

#[test]
fn example_5_6_restrictions_of_example_2_9() {
    let ctx = OreContext::new(4, FieldCtx::rational(4));
    let nv = ctx.field.nvars;
    let x3 = RatFun::var(nv, 2);
    let x4 = RatFun::var(nv, 3);
    let e1 = LinForm::from_terms(
        &JetOrder::Standard,
        vec![
            (jet(0, vec![0, 0, 0, 1]), RatFun::one(nv)),
            (jet(0, vec![0, 1, 0, 0]), x3.neg()),
            (jet(0, vec![0, 0, 0, 0]), RatFun::one(nv).neg()),
        ],
    );
    let e2 = LinForm::from_terms(
        &JetOrder::Standard,
        vec![
            (jet(0, vec![0, 0, 1, 0]), RatFun::one(nv)),
            (jet(0, vec![1, 0, 0, 0]), x4.neg()),
        ],
    );
    let cfg = CompletionConfig::default();
    let sys = JetSystem::new(&ctx, 1, 1, vec![e1, e2]);
    let inv = complete_to_involution(&sys, &cfg).unwrap();
    // classes ≤ 2 keeps only y2 − y1; classes ≤ 3 adds y3 − x4 y1
    let r2 = restrict_to_classes(&inv, 2).unwrap();
    assert_eq!(r2.inv.sys.eqs.len(), 1);
    assert_eq!(r2.inv.sys.eqs[0].terms.len(), 2);
    let r3 = restrict_to_classes(&inv, 3).unwrap();
    assert_eq!(r3.inv.sys.eqs.len(), 2);
    let r4 = restrict_to_classes(&inv, 4).unwrap();
    assert_eq!(r4.inv.sys.eqs.len(), 3);
}

#[test]
fn theorem_5_9_localization_of_example_5_3() {
    let ctx = OreContext::new(2, FieldCtx::constants());
    let sys = JetSystem::new(
        &ctx,
        1,
        2,
        vec![
            cform(&ctx, vec![(jet(0, vec![0, 2]), 1)]),
            cform(&ctx, vec![(jet(0, vec![1, 1]), 1)]),
        ],
    );
    let cfg = CompletionConfig::default();
    let inv = complete_to_involution(&sys, &cfg).unwrap();
    let (f, _) = first_order_reduction(&inv);
    let finv = complete_to_involution(&f, &cfg).unwrap();
    let loc = relative_localization(&finv, 1).unwrap();
    assert_eq!(loc.relations.len(), 2);
    // z3 = 0 after division by χ1 (z3 is the third unknown)
    assert!(loc
        .sys
        .eqs
        .iter()
        .any(|e| e.order() == 0 && e.terms.len() == 1 && e.terms[0].0 == jet(2, vec![0])));
    // χ1 z1 − z2 = 0 keeps its χ coefficient in the normalized relations
    let chi_slot = ctx.field.nvars;
    let rel = loc
        .relations
        .iter()
        .find(|e| e.terms.len() == 2)
        .expect("chi relation present");
    assert!(rel.terms.iter().any(|(_, c)| c.num.degree_in(chi_slot) == 1));
    // three first-order rows survive on the kept derivation
    assert_eq!(loc.sys.eqs.iter().filter(|e| e.order() == 1).count(), 3);
}

#[test]
fn example_1_1_purity_filtration() {
    let ctx = OreContext::new(2, FieldCtx::constants());
    let m = OperatorMatrix::from_rows(
        &ctx,
        vec![vec![d(&ctx, vec![0, 2])], vec![d(&ctx, vec![1, 1])]],
        1,
    );
    let cfg = CompletionConfig::default();
    let pres = Presentation::new(m, &cfg).unwrap();
    let report = purity_test(&pres).unwrap();
    assert_eq!(report.cd, 1);
    assert!(!report.pure);
    assert!(!report.levels[0].generators.is_empty());
    assert!(!report.levels[1].generators.is_empty());
    assert!(!report.levels[1].gap);
    let zp = vec![d(&ctx, vec![0, 1])];
    let zpp = vec![d(&ctx, vec![1, 0])];
    assert!(report.element_in_level(&pres, &zp, 1).unwrap());
    assert!(report.element_in_level(&pres, &zpp, 0).unwrap());
    assert!(!report.element_in_level(&pres, &zpp, 1).unwrap());
    assert_eq!(report.localization_injective, Some(false));
    assert!(report.verify(&pres).unwrap());
}

#[test]
fn example_3_16_filtration_has_one_gap() {
    let ctx = OreContext::new(3, FieldCtx::constants());
    let m = OperatorMatrix::from_rows(
        &ctx,
        vec![
            vec![d(&ctx, vec![0, 0, 2])],
            vec![d(&ctx, vec![0, 1, 1])],
            vec![d(&ctx, vec![1, 0, 1])],
        ],
        1,
    );
    let cfg = CompletionConfig::default();
    let pres = Presentation::new(m, &cfg).unwrap();
    let report = purity_test(&pres).unwrap();
    assert_eq!(report.cd, 1);
    assert!(!report.pure);
    assert!(!report.levels[1].gap, "t1 below t0 strictly");
    assert!(report.levels[2].gap, "t2 = t1");
    assert!(!report.levels[2].generators.is_empty());
    assert!(report.verify(&pres).unwrap());
}

#[test]
fn example_1_2_is_one_pure_and_parametrized() {
    let ctx = OreContext::new(3, FieldCtx::constants());
    let zero = OreOperator::zero(&ctx);
    let m = OperatorMatrix::from_rows(
        &ctx,
        vec![
            vec![d(&ctx, vec![0, 0, 1]), zero.clone()],
            vec![zero.clone(), d(&ctx, vec![0, 0, 1])],
            vec![d(&ctx, vec![0, 1, 0]), d(&ctx, vec![1, 0, 0]).neg()],
        ],
        2,
    );
    let cfg = CompletionConfig::default();
    let pres = Presentation::new(m, &cfg).unwrap();
    let report = purity_test(&pres).unwrap();
    assert_eq!(report.cd, 1);
    assert!(report.pure);
    assert_eq!(report.localization_injective, Some(true));
    let par = relative_parametrization(&pres).unwrap();
    assert_eq!(par.potentials, 1);
    assert_eq!(par.r, 1);
    assert_eq!(par.constraints.rows, 1);
    assert_eq!(*par.constraints.at(0, 0), d(&ctx, vec![0, 0, 1]));
    assert_eq!(*par.map.at(0, 0), d(&ctx, vec![1, 0, 0]));
    assert_eq!(*par.map.at(1, 0), d(&ctx, vec![0, 1, 0]));
}

#[test]
fn finite_type_module_is_n_pure() {
    let ctx = OreContext::new(3, FieldCtx::constants());
    let mut rows = Vec::new();
    for mu in MultiIndex::all_of_length(3, 2) {
        rows.push(vec![OreOperator::d_mu(&ctx, mu)]);
    }
    let cfg = CompletionConfig::default();
    let pres = Presentation::new(OperatorMatrix::from_rows(&ctx, rows, 1), &cfg).unwrap();
    let report = purity_test(&pres).unwrap();
    assert_eq!(report.cd, 3);
    assert!(report.pure);
}
