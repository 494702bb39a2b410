use crate::jets::{JetOrder, JetSystem, LinForm};
use serde::Serialize;

/// One row of the multiplicative board.
#[derive(Clone, Debug, Serialize)]
pub struct BoardRow {
    /// Leading jet of the equation (display form).
    pub lead: String,
    /// Class of the lead for top-order equations; None for lower-order rows.
    pub class: Option<usize>,
    pub mult: Vec<usize>,
    pub nonmult: Vec<usize>,
}

/// Multiplicative board of an echelonized system at order q: top-order
/// equations of class i get multiplicative variables 1..i, the rest dots;
/// lower-order equations get all dots.
#[derive(Clone, Debug, Serialize)]
pub struct Board {
    pub rows: Vec<BoardRow>,
}

impl Board {
    pub fn of(sys: &JetSystem) -> Board {
        let n = sys.n();
        let rows = sys
            .eqs
            .iter()
            .map(|e| {
                let (lead, _) = e.lead().expect("echelonized rows are nonzero");
                if lead.order() == sys.q {
                    let c = lead.mu.class().expect("top-order lead has a class");
                    BoardRow {
                        lead: lead.to_string(),
                        class: Some(c),
                        mult: (1..=c).collect(),
                        nonmult: (c + 1..=n).collect(),
                    }
                } else {
                    BoardRow {
                        lead: lead.to_string(),
                        class: None,
                        mult: vec![],
                        nonmult: (1..=n).collect(),
                    }
                }
            })
            .collect();
        Board { rows }
    }

    /// Number of dots in column i (1-based): the count of CC of class i.
    pub fn dots_in_column(&self, i: usize) -> usize {
        self.rows.iter().filter(|r| r.nonmult.contains(&i)).count()
    }

    pub fn total_dots(&self) -> usize {
        self.rows.iter().map(|r| r.nonmult.len()).sum()
    }
}

/// β^i_q: number of top-order equations of class i, for i = 1..n.
pub fn betas(sys: &JetSystem) -> Vec<usize> {
    let n = sys.n();
    let mut beta = vec![0usize; n];
    for e in &sys.eqs {
        let (lead, _) = e.lead().unwrap();
        if lead.order() == sys.q {
            beta[lead.mu.class().unwrap() - 1] += 1;
        }
    }
    beta
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for t in 0..k.min(n - k) {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc as usize
}

/// α^i_q = m·(q+n−i−1)!/((q−1)!(n−i)!) − β^i_q, the number of parametric
/// top-order jets of class i.
pub fn alphas(m: usize, n: usize, q: u32, beta: &[usize]) -> Vec<usize> {
    assert!(q >= 1, "characters need order at least 1");
    (1..=n)
        .map(|i| {
            let cells = m * binom(q as usize - 1 + n - i, n - i);
            cells
                .checked_sub(beta[i - 1])
                .expect("beta cannot exceed the class cell count")
        })
        .collect()
}

/// Score Σ i·β^i used to rank frames in the δ-regularity search.
pub fn frame_score(sys: &JetSystem) -> usize {
    betas(sys).iter().enumerate().map(|(i, b)| (i + 1) * b).sum()
}

/// Pommaret involutive-division test on the symbol: every non-multiplicative
/// prolongation of every top-order symbol row must reduce to zero against the
/// multiplicative prolongations.
pub fn symbol_involutive(sys: &JetSystem) -> bool {
    let order = JetOrder::Standard;
    let n = sys.n();
    let symbol = sys.symbol();
    if symbol.forms.is_empty() {
        return true;
    }
    let mut reducers: Vec<(LinForm, ())> = Vec::new();
    for f in &symbol.forms {
        let class = f.lead().unwrap().0.mu.class().unwrap();
        for l in 1..=class {
            reducers.push((f.shift(&order, l), ()));
        }
    }
    let ech = crate::jets::echelon_rows(&order, reducers);
    for f in &symbol.forms {
        let class = f.lead().unwrap().0.mu.class().unwrap();
        for j in class + 1..=n {
            let cand = f.shift(&order, j);
            let (rem, _) = crate::jets::reduce_row(&order, cand, (), &ech);
            if !rem.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Full Definition-style criterion on the equations: d_j Φ for every
/// non-multiplicative j reduces to zero modulo the equations and the
/// multiplicative prolongations.
pub fn system_involutive(sys: &JetSystem) -> bool {
    let order = JetOrder::Standard;
    let n = sys.n();
    let mut reducers: Vec<(LinForm, ())> = sys.eqs.iter().map(|e| (e.clone(), ())).collect();
    for e in &sys.eqs {
        let (lead, _) = e.lead().unwrap();
        if lead.order() == sys.q {
            let class = lead.mu.class().unwrap();
            for l in 1..=class {
                reducers.push((e.formal_derivative(&sys.ctx, &order, l), ()));
            }
        }
    }
    let ech = crate::jets::echelon_rows(&order, reducers);
    for e in &sys.eqs {
        let (lead, _) = e.lead().unwrap();
        let nonmult: Vec<usize> = if lead.order() == sys.q {
            (lead.mu.class().unwrap() + 1..=n).collect()
        } else {
            (1..=n).collect()
        };
        for j in nonmult {
            let cand = e.formal_derivative(&sys.ctx, &order, j);
            let (rem, _) = crate::jets::reduce_row(&order, cand, (), &ech);
            if !rem.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Render the board as the LaTeX fbox table used in the literature.
pub fn board_latex(board: &Board, n: usize) -> String {
    let mut out = String::from("\\fbox{$\\begin{array}{");
    out.push_str(&"l".repeat(n));
    out.push_str("}\n");
    for row in &board.rows {
        let cells: Vec<String> = (1..=n)
            .map(|i| if row.mult.contains(&i) { i.to_string() } else { "\\bullet".into() })
            .collect();
        out.push_str(&cells.join(" & "));
        out.push_str(" \\\\\n");
    }
    out.push_str("\\end{array}$}");
    out
}
