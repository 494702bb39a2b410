use super::{JetCoord, JetOrder, JetSystem, SymbolTable};
use crate::arith::RatFun;
use itertools::Itertools;
use std::collections::HashMap;

/// Rank of a dense matrix over K by Gaussian elimination.
pub fn rank_dense(mut rows: Vec<Vec<RatFun>>) -> usize {
    let mut rank = 0;
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut row = 0;
    for col in 0..ncols {
        let pivot = (row..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(p) = pivot else { continue };
        rows.swap(row, p);
        let inv = rows[row][col].inv().expect("nonzero pivot");
        for c in col..ncols {
            rows[row][c] = rows[row][c].mul(&inv);
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..ncols {
                    let t = rows[row][c].mul(&f);
                    rows[r][c] = rows[r][c].sub(&t);
                }
            }
        }
        rank += 1;
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    rank
}

/// K-basis of the solution space of a symbol g_d, as vectors over the exact
/// degree-d jets (columns indexed by `jets`).
pub fn symbol_basis(sym: &SymbolTable) -> (Vec<JetCoord>, Vec<HashMap<JetCoord, RatFun>>) {
    let jets = JetCoord::all_of_order(sym.n, sym.m, sym.q);
    let order = JetOrder::Standard;
    let ech: Vec<(super::LinForm, ())> =
        super::system::echelon_rows(&order, sym.forms.iter().map(|f| (f.clone(), ())).collect());
    let pivots: std::collections::HashSet<JetCoord> =
        ech.iter().map(|(f, _)| f.lead().unwrap().0.clone()).collect();
    let nvars = sym
        .forms
        .first()
        .and_then(|f| f.terms.first())
        .map(|(_, c)| c.nvars())
        .unwrap_or(0);
    let mut basis = Vec::new();
    for p in jets.iter().filter(|j| !pivots.contains(j)) {
        let mut vec: HashMap<JetCoord, RatFun> = HashMap::new();
        vec.insert(p.clone(), RatFun::one(nvars));
        for (f, _) in &ech {
            if let Some(c) = f.coeff_of(p) {
                vec.insert(f.lead().unwrap().0.clone(), c.neg());
            }
        }
        basis.push(vec);
    }
    (jets, basis)
}

/// Apply δ to e_I ⊗ w for w a degree-d symbol vector: the resulting
/// (s+1)-form component at (J = I ∪ {i}, y^k_μ with |μ| = d−1) is
/// (−1)^{pos(i in J)} · w(k, μ+1_i).
fn delta_column(
    n: usize,
    i_set: &[usize],
    w: &HashMap<JetCoord, RatFun>,
    codomain_index: &HashMap<(Vec<usize>, JetCoord), usize>,
    dim: usize,
    nvars: usize,
) -> Vec<RatFun> {
    let mut col = vec![RatFun::zero(nvars); dim];
    for i in 1..=n {
        if i_set.contains(&i) {
            continue;
        }
        let mut j_set = i_set.to_vec();
        j_set.push(i);
        j_set.sort_unstable();
        let pos = j_set.iter().position(|&x| x == i).unwrap();
        let sign = if pos % 2 == 0 { 1i64 } else { -1 };
        for (jet, val) in w {
            if let Some(mu) = jet.mu.lower(i) {
                let key = (j_set.clone(), JetCoord::new(jet.k, mu));
                if let Some(&row) = codomain_index.get(&key) {
                    let add = if sign == 1 { val.clone() } else { val.neg() };
                    col[row] = col[row].add(&add);
                }
            }
        }
    }
    col
}

fn subsets(n: usize, s: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return vec![vec![]];
    }
    (1..=n).combinations(s).collect()
}

/// Matrix of δ: ∧^s T* ⊗ g_d → ∧^{s+1} T* ⊗ S_{d−1} ⊗ E over a given symbol
/// basis; rows are (J, degree-(d−1) jet) coordinates, columns (I, basis w).
fn delta_matrix(
    n: usize,
    m: usize,
    s: usize,
    d: u32,
    basis: &[HashMap<JetCoord, RatFun>],
    nvars: usize,
) -> (Vec<Vec<RatFun>>, usize) {
    let codomain_jets = JetCoord::all_of_order(n, m, d - 1);
    let j_sets = subsets(n, s + 1);
    let mut codomain_index = HashMap::new();
    let mut idx = 0;
    for js in &j_sets {
        for jet in &codomain_jets {
            codomain_index.insert((js.clone(), jet.clone()), idx);
            idx += 1;
        }
    }
    let dim = idx;
    let mut cols: Vec<Vec<RatFun>> = Vec::new();
    for i_set in subsets(n, s) {
        for w in basis {
            cols.push(delta_column(n, &i_set, w, &codomain_index, dim, nvars));
        }
    }
    // transpose to rows for rank computation
    let nrows = dim;
    let ncols = cols.len();
    let mut rows = vec![vec![RatFun::zero(nvars); ncols]; nrows];
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            rows[r][c] = v.clone();
        }
    }
    (rows, ncols)
}

/// Dimension of the δ-cohomology H^s_{q+r}(g_q): kernel of
/// δ: ∧^s ⊗ g_{q+r} → ∧^{s+1} ⊗ S_{q+r−1} modulo the image of
/// δ: ∧^{s−1} ⊗ g_{q+r+1} → ∧^s ⊗ g_{q+r}. Also verifies δ∘δ = 0 exactly.
pub fn delta_cohomology(sys: &JetSystem, s: usize, r: u32) -> usize {
    let n = sys.n();
    assert!(s <= n, "cochain degree out of range");
    let d_mid = sys.q + r;
    let nvars = sys.ctx.field.nvars;
    let (_, basis_mid) = symbol_basis(&sys.symbol_at(d_mid));
    let dim_mid = basis_mid.len() * subsets(n, s).len();

    // outgoing map at ∧^s ⊗ g_mid
    let (ker_rank, out_cols) = if d_mid == 0 {
        (0, 0)
    } else {
        let (rows, ncols) = delta_matrix(n, sys.m, s, d_mid, &basis_mid, nvars);
        (rank_dense(rows), ncols)
    };
    debug_assert_eq!(out_cols, dim_mid);
    let ker_dim = dim_mid - ker_rank;

    if s == 0 {
        return ker_dim;
    }

    // incoming map from ∧^{s−1} ⊗ g_{q+r+1}; its image lies in ∧^s ⊗ g_mid,
    // so its rank in ambient coordinates is the image dimension.
    let (_, basis_top) = symbol_basis(&sys.symbol_at(d_mid + 1));
    let (rows_in, _) = delta_matrix(n, sys.m, s - 1, d_mid + 1, &basis_top, nvars);
    let im_rank = rank_dense(rows_in.clone());

    // δ∘δ = 0: push each image column through δ again and demand zero.
    if !basis_top.is_empty() && d_mid >= 1 {
        let codomain_jets = JetCoord::all_of_order(n, sys.m, d_mid);
        let j_sets = subsets(n, s);
        // rebuild image columns as elements of ∧^s ⊗ S_mid and apply δ
        let mut idx_map = HashMap::new();
        let mut idx = 0;
        for js in &j_sets {
            for jet in &codomain_jets {
                idx_map.insert(idx, (js.clone(), jet.clone()));
                idx += 1;
            }
        }
        let ncols_in = subsets(n, s - 1).len() * basis_top.len();
        for c in 0..ncols_in {
            // element ω = Σ_row rows_in[row][c] · (J_row ⊗ jet_row)
            let mut by_set: HashMap<Vec<usize>, HashMap<JetCoord, RatFun>> = HashMap::new();
            for (row, entry) in idx_map.iter() {
                let v = &rows_in[*row][c];
                if !v.is_zero() {
                    by_set
                        .entry(entry.0.clone())
                        .or_default()
                        .insert(entry.1.clone(), v.clone());
                }
            }
            // apply δ to each (I, w) piece and sum; must vanish identically
            let codomain2 = JetCoord::all_of_order(n, sys.m, d_mid - 1);
            let j2 = subsets(n, s + 1);
            let mut codomain_index2 = HashMap::new();
            let mut idx2 = 0;
            for js in &j2 {
                for jet in &codomain2 {
                    codomain_index2.insert((js.clone(), jet.clone()), idx2);
                    idx2 += 1;
                }
            }
            let mut acc = vec![RatFun::zero(nvars); idx2];
            for (i_set, w) in &by_set {
                let col = delta_column(n, i_set, w, &codomain_index2, idx2, nvars);
                for (a, b) in acc.iter_mut().zip(col) {
                    *a = a.add(&b);
                }
            }
            assert!(acc.iter().all(|v| v.is_zero()), "delta composed with delta must vanish");
        }
    }

    ker_dim - im_rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldCtx;
    use crate::jets::LinForm;
    use crate::ore::{MultiIndex, OreContext};

    fn jet(k: usize, mu: Vec<u32>) -> JetCoord {
        JetCoord::new(k, MultiIndex(mu))
    }

    fn cform(nv: usize, terms: Vec<(JetCoord, i64)>) -> LinForm {
        LinForm::from_terms(
            &JetOrder::Standard,
            terms
                .into_iter()
                .map(|(j, c)| (j, RatFun::constant(nv, crate::arith::rat_int(c))))
                .collect(),
        )
    }

    #[test]
    fn h0_vanishes_on_positive_order_symbols() {
        let ctx = OreContext::new(3, FieldCtx::constants());
        let sys = JetSystem::new(
            &ctx,
            1,
            2,
            vec![
                cform(0, vec![(jet(0, vec![0, 0, 2]), 1)]),
                cform(0, vec![(jet(0, vec![0, 1, 1]), 1), (jet(0, vec![2, 0, 0]), -1)]),
                cform(0, vec![(jet(0, vec![0, 2, 0]), 1)]),
            ],
        );
        assert_eq!(delta_cohomology(&sys, 0, 0), 0);
    }

    #[test]
    fn example_5_1_symbol_is_two_acyclic_with_dim_one() {
        // y33 = 0, y23 − y11 = 0, y22 = 0: g3 is 2-acyclic of dimension 1
        let ctx = OreContext::new(3, FieldCtx::constants());
        let sys = JetSystem::new(
            &ctx,
            1,
            2,
            vec![
                cform(0, vec![(jet(0, vec![0, 0, 2]), 1)]),
                cform(0, vec![(jet(0, vec![0, 1, 1]), 1), (jet(0, vec![2, 0, 0]), -1)]),
                cform(0, vec![(jet(0, vec![0, 2, 0]), 1)]),
            ],
        );
        assert_eq!(sys.symbol_at(3).dim(), 1);
        assert_eq!(delta_cohomology(&sys, 1, 1), 0);
        assert_eq!(delta_cohomology(&sys, 2, 1), 0);
        // the symbol is finite type: g4 = 0
        assert_eq!(sys.symbol_at(4).dim(), 0);
    }

    #[test]
    fn involutive_symbol_has_vanishing_higher_cohomology() {
        // completed Macaulay system: involutive at q = 2, so H^s = 0 for all
        // s ≥ 1 and r ≤ 2
        let ctx = OreContext::new(3, FieldCtx::constants());
        let sys = JetSystem::new(
            &ctx,
            1,
            2,
            vec![
                cform(0, vec![(jet(0, vec![0, 0, 2]), 1)]),
                cform(0, vec![(jet(0, vec![0, 1, 1]), 1)]),
                cform(0, vec![(jet(0, vec![0, 2, 0]), 1)]),
                cform(0, vec![(jet(0, vec![1, 0, 1]), 1), (jet(0, vec![0, 1, 0]), -1)]),
            ],
        );
        for s in 1..=3usize {
            for r in 0..=2u32 {
                assert_eq!(delta_cohomology(&sys, s, r), 0, "H^{s} at r={r}");
            }
        }
    }
}
