use super::{JetCoord, JetOrder, LinForm};
use crate::arith::{RatFun, Rational};
use crate::ore::{invert_matrix, MultiIndex, OperatorMatrix, OreContext, OreOperator};
use std::sync::Arc;

/// Payload mirrored through row operations of an echelonization; used to
/// track how each reduced equation combines the original generators.
pub trait RowPayload: Clone {
    fn scale(&self, c: &RatFun) -> Self;
    fn add_scaled(&self, other: &Self, c: &RatFun) -> Self;
}

impl RowPayload for () {
    fn scale(&self, _c: &RatFun) -> Self {}
    fn add_scaled(&self, _other: &Self, _c: &RatFun) -> Self {}
}

/// Row of operators c_j expressing an equation as Σ_j c_j · (generator_j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpRow(pub Vec<OreOperator>);

impl OpRow {
    pub fn unit(ctx: &Arc<OreContext>, len: usize, j: usize) -> Self {
        let mut v = vec![OreOperator::zero(ctx); len];
        v[j] = OreOperator::one(ctx);
        OpRow(v)
    }

    pub fn d_left(&self, i: usize) -> Self {
        OpRow(self.0.iter().map(|o| o.d_left(i)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|o| o.is_zero())
    }
}

impl RowPayload for OpRow {
    fn scale(&self, c: &RatFun) -> Self {
        OpRow(self.0.iter().map(|o| o.scale(c)).collect())
    }

    fn add_scaled(&self, other: &Self, c: &RatFun) -> Self {
        OpRow(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.add(&b.scale(c)))
                .collect(),
        )
    }
}

/// Full reduced row echelon form over K under the given jet order; pivots are
/// the largest jets, leading coefficients are 1, zero rows are dropped, and
/// rows come out sorted by descending pivot.
pub fn echelon_rows<P: RowPayload>(
    order: &JetOrder,
    rows: Vec<(LinForm, P)>,
) -> Vec<(LinForm, P)> {
    let mut work = rows;
    let mut done: Vec<(LinForm, P)> = Vec::new();
    loop {
        work.retain(|(f, _)| !f.is_zero());
        if work.is_empty() {
            break;
        }
        // pick the row with the largest lead
        let mut best = 0;
        for i in 1..work.len() {
            let li = &work[i].0.lead().unwrap().0;
            let lb = &work[best].0.lead().unwrap().0;
            if order.cmp(li, lb) == std::cmp::Ordering::Greater {
                best = i;
            }
        }
        let (mut f, mut p) = work.swap_remove(best);
        let lc = f.lead().unwrap().1.clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero pivot");
            f = f.scale(&inv);
            p = p.scale(&inv);
        }
        let pivot = f.lead().unwrap().0.clone();
        let eliminate = |g: &mut LinForm, q: &mut P| {
            if let Some(c) = g.coeff_of(&pivot) {
                let c = c.neg();
                *g = g.add_scaled(order, &f, &c);
                *q = q.add_scaled(&p, &c);
            }
        };
        for (g, qp) in work.iter_mut() {
            eliminate(g, qp);
        }
        for (g, qp) in done.iter_mut() {
            eliminate(g, qp);
        }
        done.push((f, p));
    }
    done.sort_by(|a, b| order.cmp(&b.0.lead().unwrap().0, &a.0.lead().unwrap().0));
    done
}

/// Reduce a row against an echelonized set; returns the remainder and mirrors
/// the operations on the payload.
pub fn reduce_row<P: RowPayload>(
    order: &JetOrder,
    mut f: LinForm,
    mut p: P,
    echelon: &[(LinForm, P)],
) -> (LinForm, P) {
    for (g, q) in echelon {
        let pivot = &g.lead().unwrap().0;
        if let Some(c) = f.coeff_of(pivot) {
            let c = c.neg();
            f = f.add_scaled(order, g, &c);
            p = p.add_scaled(q, &c);
        }
    }
    (f, p)
}

/// Symbol g_q: the top-order parts of the equations whose lead has exact
/// order q, as forms on jets of exact order q only.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    pub q: u32,
    pub forms: Vec<LinForm>,
    pub n: usize,
    pub m: usize,
}

impl SymbolTable {
    /// dim g_q = (#jets of exact order q) − (#equations with top-order lead).
    pub fn dim(&self) -> usize {
        let total = self.m * MultiIndex::all_of_length(self.n, self.q).len();
        total - self.forms.len()
    }
}

/// Finite K-linear system on jet coordinates up to order q; kept in reduced
/// row echelon form at all times, so each equation has a distinct leading jet
/// with coefficient 1.
#[derive(Clone, PartialEq, Eq)]
pub struct JetSystem {
    pub ctx: Arc<OreContext>,
    pub m: usize,
    pub q: u32,
    pub eqs: Vec<LinForm>,
}

impl JetSystem {
    pub fn new(ctx: &Arc<OreContext>, m: usize, q: u32, eqs: Vec<LinForm>) -> Self {
        let q = eqs.iter().map(|e| e.order()).max().unwrap_or(0).max(q);
        let eqs = echelon_rows(&JetOrder::Standard, eqs.into_iter().map(|e| (e, ())).collect())
            .into_iter()
            .map(|(e, _)| e)
            .collect();
        JetSystem { ctx: ctx.clone(), m, q, eqs }
    }

    pub fn n(&self) -> usize {
        self.ctx.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Total number of jet coordinates of order ≤ q.
    pub fn total_jets(&self, q: u32) -> usize {
        self.m * MultiIndex::all_up_to(self.n(), q).len()
    }

    /// dim R_q = #jets − rank.
    pub fn solution_dim(&self) -> usize {
        self.total_jets(self.q) - self.eqs.len()
    }

    /// Formal prolongation by r: all d_ν Φ with |ν| ≤ r, echelonized at q+r.
    pub fn prolong(&self, r: u32) -> JetSystem {
        if r == 0 {
            return self.clone();
        }
        let order = JetOrder::Standard;
        let mut all: Vec<LinForm> = self.eqs.clone();
        let mut frontier = self.eqs.clone();
        for _ in 0..r {
            let mut next = Vec::new();
            for f in &frontier {
                for i in 1..=self.n() {
                    next.push(f.formal_derivative(&self.ctx, &order, i));
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        JetSystem::new(&self.ctx, self.m, self.q + r, all)
    }

    /// Gaussian elimination of all jets of order > q_target; returns the
    /// induced system on jets of order ≤ q_target.
    pub fn project(&self, q_target: u32) -> JetSystem {
        assert!(q_target <= self.q, "projection target above system order");
        let eqs: Vec<LinForm> = self
            .eqs
            .iter()
            .filter(|e| e.lead().map(|(j, _)| j.order() <= q_target).unwrap_or(false))
            .cloned()
            .collect();
        JetSystem { ctx: self.ctx.clone(), m: self.m, q: q_target, eqs }
    }

    /// Symbol of the system at its own order.
    pub fn symbol(&self) -> SymbolTable {
        let forms: Vec<LinForm> = self
            .eqs
            .iter()
            .filter(|e| e.lead().map(|(j, _)| j.order() == self.q).unwrap_or(false))
            .map(|e| e.top_part(self.q))
            .collect();
        SymbolTable { q: self.q, forms, n: self.n(), m: self.m }
    }

    /// Symbol g_d of the d-th prolongation (d ≥ q).
    pub fn symbol_at(&self, d: u32) -> SymbolTable {
        assert!(d >= self.q);
        self.prolong(d - self.q).symbol()
    }

    /// Leading jets (principal jets) of the echelonized equations.
    pub fn pivots(&self) -> Vec<JetCoord> {
        self.eqs.iter().filter_map(|e| e.lead().map(|(j, _)| j.clone())).collect()
    }

    /// Non-principal jets of order ≤ q, largest first.
    pub fn parametric_jets(&self) -> Vec<JetCoord> {
        let pivots: std::collections::HashSet<_> = self.pivots().into_iter().collect();
        JetCoord::all_up_to(self.n(), self.m, self.q)
            .into_iter()
            .filter(|j| !pivots.contains(j))
            .collect()
    }

    /// Read an operator matrix as a jet system: row τ becomes the form
    /// Σ a^{τμ}_k y^k_μ.
    pub fn from_operator_matrix(a: &OperatorMatrix, q_min: u32) -> JetSystem {
        let eqs: Vec<LinForm> = (0..a.rows)
            .map(|r| LinForm::from_operator_row(&JetOrder::Standard, &a.row(r)))
            .collect();
        JetSystem::new(&a.ctx, a.cols, q_min, eqs)
    }

    /// Write the echelonized equations back as a (#eqs × m) operator matrix.
    pub fn to_operator_matrix(&self) -> OperatorMatrix {
        let rows: Vec<Vec<OreOperator>> =
            self.eqs.iter().map(|e| e.to_operator_row(&self.ctx, self.m)).collect();
        OperatorMatrix::from_rows(&self.ctx, rows, self.m)
    }

    /// Apply a constant linear change of the independent variables:
    /// new derivations d̄ = change · d_current. Coefficients keep their
    /// x-symbols; only the derivation action is recombined.
    pub fn change_frame(&self, change: &[Vec<Rational>]) -> JetSystem {
        let n = self.n();
        let w = self.ctx.frame.first().map(|r| r.len()).unwrap_or(n);
        let mut comp = vec![vec![Rational::from_integer(0.into()); w]; n];
        for i in 0..n {
            for j in 0..w {
                let mut acc = Rational::from_integer(0.into());
                for k in 0..n {
                    acc += &change[i][k] * &self.ctx.frame[k][j];
                }
                comp[i][j] = acc;
            }
        }
        let new_ctx = self.ctx.with_frame(comp);
        let sub = invert_matrix(change).expect("frame change must be invertible");
        let order = JetOrder::Standard;
        let eqs: Vec<LinForm> = self
            .eqs
            .iter()
            .map(|e| {
                let row = e.to_operator_row(&self.ctx, self.m);
                let row: Vec<OreOperator> =
                    row.iter().map(|op| op.change_frame(&new_ctx, &sub)).collect();
                LinForm::from_operator_row(&order, &row)
            })
            .collect();
        JetSystem::new(&new_ctx, self.m, self.q, eqs)
    }

    pub fn display_named(&self, names: &[String]) -> String {
        self.eqs
            .iter()
            .map(|e| format!("{} = 0", e.display_named(names)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl std::fmt::Debug for JetSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "JetSystem n={} m={} q={} [", self.n(), self.m, self.q)?;
        for e in &self.eqs {
            writeln!(f, "  {e} = 0")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldCtx;

    pub fn jet(k: usize, mu: Vec<u32>) -> JetCoord {
        JetCoord::new(k, MultiIndex(mu))
    }

    pub fn form(ctx: &Arc<OreContext>, terms: Vec<(JetCoord, i64)>) -> LinForm {
        LinForm::from_terms(
            &JetOrder::Standard,
            terms
                .into_iter()
                .map(|(j, c)| (j, RatFun::constant(ctx.field.nvars, crate::arith::rat_int(c))))
                .collect(),
        )
    }

    /// Macaulay's system y11 = 0, y13 − y2 = 0 (n = 3, m = 1).
    fn macaulay(ctx: &Arc<OreContext>) -> JetSystem {
        let e1 = form(ctx, vec![(jet(0, vec![2, 0, 0]), 1)]);
        let e2 = form(ctx, vec![(jet(0, vec![1, 0, 1]), 1), (jet(0, vec![0, 1, 0]), -1)]);
        JetSystem::new(ctx, 1, 2, vec![e1, e2])
    }

    #[test]
    fn prolongation_contains_formal_derivatives() {
        let ctx = OreContext::new(3, FieldCtx::constants());
        let s = JetSystem::new(
            &ctx,
            1,
            2,
            vec![form(&ctx, vec![(jet(0, vec![1, 0, 1]), 1), (jet(0, vec![0, 1, 0]), -1)])],
        );
        let p = s.prolong(1);
        // d2(y13 − y2) = y123 − y22 must reduce to zero against the prolongation
        let cand = form(&ctx, vec![(jet(0, vec![1, 1, 1]), 1), (jet(0, vec![0, 2, 0]), -1)]);
        let ech: Vec<(LinForm, ())> = p.eqs.iter().map(|e| (e.clone(), ())).collect();
        let (rem, _) = reduce_row(&JetOrder::Standard, cand, (), &ech);
        assert!(rem.is_zero());
        // prolong(S, 0) = echelonized S
        assert_eq!(s.prolong(0), s);
    }

    #[test]
    fn macaulay_projections_gain_lower_order_equations() {
        let ctx = OreContext::new(3, FieldCtx::constants());
        let s = macaulay(&ctx);
        // one prolongation, projected back to order 2, gains y12 = 0
        let p1 = s.prolong(1).project(2);
        let y12 = jet(0, vec![1, 1, 0]);
        assert!(p1.pivots().contains(&y12));
        // two prolongations gain y22 = 0 as well
        let p2 = s.prolong(2).project(2);
        let y22 = jet(0, vec![0, 2, 0]);
        assert!(p2.pivots().contains(&y22));
        assert_eq!(p2.eqs.len(), 4);
        // dim R_2 after completion: 10 jets − 4 = 6
        assert_eq!(p2.solution_dim(), 6);
    }

    #[test]
    fn projection_of_stable_system_loses_nothing() {
        let ctx = OreContext::new(3, FieldCtx::constants());
        // involutive: y33, y23, y22, y13 − y2 (the completed Macaulay system
        // in permuted coordinates)
        let sys = JetSystem::new(
            &ctx,
            1,
            2,
            vec![
                form(&ctx, vec![(jet(0, vec![0, 0, 2]), 1)]),
                form(&ctx, vec![(jet(0, vec![0, 1, 1]), 1)]),
                form(&ctx, vec![(jet(0, vec![0, 2, 0]), 1)]),
                form(&ctx, vec![(jet(0, vec![1, 0, 1]), 1), (jet(0, vec![0, 1, 0]), -1)]),
            ],
        );
        let back = sys.prolong(1).project(2);
        assert_eq!(back, sys);
        // symbol dimension: 6 order-2 jets − 4 top-order equations = 2
        assert_eq!(sys.symbol().dim(), 2);
        // finite-type comparison: all six order-2 jets principal
        let ft = JetSystem::new(
            &ctx,
            1,
            2,
            vec![
                form(&ctx, vec![(jet(0, vec![2, 0, 0]), 1)]),
                form(&ctx, vec![(jet(0, vec![1, 1, 0]), 1)]),
                form(&ctx, vec![(jet(0, vec![1, 0, 1]), 1)]),
                form(&ctx, vec![(jet(0, vec![0, 2, 0]), 1)]),
                form(&ctx, vec![(jet(0, vec![0, 1, 1]), 1)]),
                form(&ctx, vec![(jet(0, vec![0, 0, 2]), 1)]),
            ],
        );
        assert_eq!(ft.symbol().dim(), 0);
    }

    #[test]
    fn frame_permutation_maps_jets() {
        let ctx = OreContext::new(3, FieldCtx::constants());
        let s = macaulay(&ctx);
        let perm: Vec<Vec<Rational>> = vec![
            vec![crate::arith::rat_int(0), crate::arith::rat_int(0), crate::arith::rat_int(1)],
            vec![crate::arith::rat_int(0), crate::arith::rat_int(1), crate::arith::rat_int(0)],
            vec![crate::arith::rat_int(1), crate::arith::rat_int(0), crate::arith::rat_int(0)],
        ];
        let t = s.change_frame(&perm);
        // y11 → y33, y13 stays, y2 stays
        let y33 = jet(0, vec![0, 0, 2]);
        assert!(t.pivots().contains(&y33));
        assert_eq!(t.solution_dim(), s.solution_dim());
    }

    #[test]
    fn operator_matrix_roundtrip() {
        let ctx = OreContext::new(3, FieldCtx::rational(3));
        // row (d2, −d1 + x2) over (y1, y2): the Example 1.3 class-2 row
        let d2 = OreOperator::d(&ctx, 2);
        let d1 = OreOperator::d(&ctx, 1);
        let x2 = OreOperator::coeff(&ctx, RatFun::var(3, 1));
        let m = OperatorMatrix::from_rows(&ctx, vec![vec![d2, d1.neg().add(&x2)]], 2);
        let s = JetSystem::from_operator_matrix(&m, 1);
        assert_eq!(s.eqs.len(), 1);
        let f = &s.eqs[0];
        assert_eq!(f.lead().unwrap().0, jet(0, vec![0, 1, 0]));
        assert_eq!(f.terms.len(), 3);
        let back = s.to_operator_matrix();
        assert_eq!(JetSystem::from_operator_matrix(&back, 1), s);
    }

    #[test]
    fn zero_matrix_gives_empty_forms() {
        let ctx = OreContext::new(3, FieldCtx::constants());
        let m = OperatorMatrix::zero(&ctx, 2, 1);
        let s = JetSystem::from_operator_matrix(&m, 0);
        assert!(s.eqs.is_empty());
    }
}
