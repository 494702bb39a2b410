use super::board::{alphas, betas, frame_score, symbol_involutive, system_involutive, Board};
use crate::arith::{rat_int, Rational};
use crate::jets::{echelon_rows, JetOrder, JetSystem, LinForm, OpRow, RowPayload};
use crate::ore::{identity_matrix, invert_matrix, OperatorMatrix};
use crate::{Error, Result};
use itertools::Itertools;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tunables for the completion loop.
#[derive(Clone, Debug)]
pub struct CompletionConfig {
    /// Bound on prolongation rounds before giving up.
    pub max_rounds: usize,
    /// Number of random frames tried per round after the permutations.
    pub max_frame_retries: usize,
    /// Seed for the random frame search.
    pub seed: u64,
    /// Random frame entries are drawn from [−bound, bound].
    pub frame_entry_bound: i64,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig { max_rounds: 20, max_frame_retries: 25, seed: 1, frame_entry_bound: 3 }
    }
}

/// Echelonized involutive system with its multiplicative board, characters
/// and the coordinate frame in which involution was reached.
#[derive(Clone, Debug)]
pub struct InvolutiveSystem {
    pub sys: JetSystem,
    pub board: Board,
    pub beta: Vec<usize>,
    pub alpha: Vec<usize>,
}

/// Characters and the invariants read off them.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Characters {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    /// Codimension: number of trailing zero characters.
    pub cd: usize,
    /// Differential rank α^n_q (0 for torsion modules).
    pub rank: usize,
}

impl InvolutiveSystem {
    pub fn q(&self) -> u32 {
        self.sys.q
    }

    pub fn n(&self) -> usize {
        self.sys.n()
    }

    pub fn m(&self) -> usize {
        self.sys.m
    }

    fn from_involutive_jetsystem(sys: JetSystem) -> Self {
        let board = Board::of(&sys);
        let beta = betas(&sys);
        let alpha = alphas(sys.m, sys.n(), sys.q, &beta);
        InvolutiveSystem { sys, board, beta, alpha }
    }

    pub fn characters(&self) -> Characters {
        let n = self.n();
        let mut cd = 0;
        for i in (0..n).rev() {
            if self.alpha[i] == 0 {
                cd += 1;
            } else {
                break;
            }
        }
        Characters {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            cd,
            rank: self.alpha[n - 1],
        }
    }

    /// Re-assert the involutive-division criterion on the stored system.
    pub fn verify(&self) -> bool {
        system_involutive(&self.sys) && symbol_involutive(&self.sys)
    }

    /// The presentation matrix read off the involutive equations.
    pub fn operator_matrix(&self) -> OperatorMatrix {
        self.sys.to_operator_matrix()
    }
}

fn permutation_frames(n: usize) -> Vec<Vec<Vec<Rational>>> {
    (0..n)
        .permutations(n)
        .map(|perm| {
            let mut m = vec![vec![Rational::zero(); n]; n];
            for (i, &j) in perm.iter().enumerate() {
                m[i][j] = rat_int(1);
            }
            m
        })
        .collect()
}

fn random_frame(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Option<Vec<Vec<Rational>>> {
    let m: Vec<Vec<Rational>> = (0..n)
        .map(|_| (0..n).map(|_| rat_int(rng.gen_range(-bound..=bound))).collect())
        .collect();
    invert_matrix(&m).map(|_| m)
}

/// One saturation pass: keep projecting the first prolongation back until no
/// new equation of order ≤ q appears.
fn saturate(sys: &JetSystem) -> JetSystem {
    let mut cur = sys.clone();
    loop {
        let nxt = cur.prolong(1).project(cur.q);
        if nxt.eqs.len() == cur.eqs.len() {
            return nxt;
        }
        cur = nxt;
    }
}

/// Ranking key for the frame search: the score Σ i·β^i first, then the list
/// of pivots compared in the jet order. The second component breaks ties
/// between frames with identical characters deterministically (and matches
/// the coordinate choice used in the worked examples).
fn frame_key(sys: &JetSystem) -> (usize, Vec<crate::jets::JetCoord>) {
    (frame_score(sys), sys.pivots())
}

fn key_beats(a: &(usize, Vec<crate::jets::JetCoord>), b: &(usize, Vec<crate::jets::JetCoord>)) -> bool {
    if a.0 != b.0 {
        return a.0 > b.0;
    }
    let order = JetOrder::Standard;
    for (x, y) in a.1.iter().zip(b.1.iter()) {
        match order.cmp(x, y) {
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Pick the frame maximizing the ranking key: identity first, then the
/// coordinate permutations, then seeded random integer frames. The first
/// candidate attaining the maximum wins, so the search is deterministic.
fn best_frame(sys: &JetSystem, cfg: &CompletionConfig, try_random: bool) -> JetSystem {
    let n = sys.n();
    let mut best = sys.clone();
    let mut best_key = frame_key(sys);
    for f in permutation_frames(n) {
        if f == identity_matrix(n) {
            continue;
        }
        let cand = sys.change_frame(&f);
        let key = frame_key(&cand);
        if key_beats(&key, &best_key) {
            best_key = key;
            best = cand;
        }
    }
    if try_random {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut tried = 0;
        while tried < cfg.max_frame_retries {
            if let Some(f) = random_frame(&mut rng, n, cfg.frame_entry_bound) {
                tried += 1;
                let cand = sys.change_frame(&f);
                let key = frame_key(&cand);
                if key_beats(&key, &best_key) {
                    best_key = key;
                    best = cand;
                }
            } else {
                tried += 1;
            }
        }
    }
    best
}

/// Complete a system to involution: saturate the current order with all
/// lower-order consequences, search for a δ-regular frame, test the symbol by
/// the board criterion, and prolong when the symbol genuinely fails.
pub fn complete_to_involution(sys: &JetSystem, cfg: &CompletionConfig) -> Result<InvolutiveSystem> {
    complete_with_partial(sys, cfg).map_err(|(e, _)| e)
}

/// Like `complete_to_involution` but hands back the partial state on failure.
pub fn complete_with_partial(
    sys: &JetSystem,
    cfg: &CompletionConfig,
) -> std::result::Result<InvolutiveSystem, (Error, JetSystem)> {
    let mut cur = sys.clone();
    if cur.q == 0 {
        // systems of order 0 are handled at order 1 with all-dots rows
        cur = cur.prolong(1);
    }
    for _round in 0..cfg.max_rounds {
        cur = saturate(&cur);
        // frame search without randoms first; the randoms only matter when
        // the permutation optimum still fails the criterion
        let mut framed = best_frame(&cur, cfg, false);
        if !symbol_involutive(&framed) {
            let with_random = best_frame(&cur, cfg, true);
            if frame_key(&with_random) != frame_key(&framed)
                && key_beats(&frame_key(&with_random), &frame_key(&framed))
            {
                framed = with_random;
            }
        }
        // a frame change can reshuffle which consequences are visible
        let framed = saturate(&framed);
        if symbol_involutive(&framed) {
            // surjectivity already holds by saturation, so the system is
            // involutive; keep the hard assertion cheap but real
            let inv = InvolutiveSystem::from_involutive_jetsystem(framed);
            debug_assert!(inv.verify(), "completion returned a non-involutive system");
            return Ok(inv);
        }
        cur = framed.prolong(1);
    }
    Err((Error::OrderBoundExceeded(cfg.max_rounds), cur))
}

/// Tracked completion: the input rows are remembered and every equation of
/// the involutive output is certified as an explicit operator combination of
/// them (in the final frame). Returns the involutive system, the per-equation
/// combinations, and the input matrix transported to the final frame.
pub fn complete_tracked(
    gens: &OperatorMatrix,
    q_min: u32,
    cfg: &CompletionConfig,
) -> Result<(InvolutiveSystem, Vec<OpRow>, OperatorMatrix)> {
    let order = JetOrder::Standard;
    let p = gens.rows;
    let base = JetSystem::from_operator_matrix(gens, q_min);
    let mut ctx = base.ctx.clone();
    let mut gens_cur = gens.clone();
    let mut q = base.q.max(1);
    let mut rows: Vec<(LinForm, OpRow)> = (0..p)
        .map(|r| {
            (
                LinForm::from_operator_row(&order, &gens.row(r)),
                OpRow::unit(&ctx, p, r),
            )
        })
        .collect();
    rows = echelon_rows(&order, rows);

    let project_len =
        |rows: &[(LinForm, OpRow)], q: u32| rows.iter().filter(|(f, _)| f.order() <= q).count();
    let _ = project_len;

    for _round in 0..cfg.max_rounds {
        // saturate at order q with tracking
        loop {
            let mut all = rows.clone();
            for (f, pay) in &rows {
                for i in 1..=ctx.n {
                    all.push((f.formal_derivative(&ctx, &order, i), pay.d_left(i)));
                }
            }
            let ech = echelon_rows(&order, all);
            let projected: Vec<(LinForm, OpRow)> = ech
                .into_iter()
                .filter(|(f, _)| f.lead().map(|(j, _)| j.order() <= q).unwrap_or(false))
                .collect();
            if projected.len() == rows.len() {
                rows = projected;
                break;
            }
            rows = projected;
        }
        // frame search: reuse the untracked driver to decide the frame, then
        // transport rows and payloads
        let plain = JetSystem {
            ctx: ctx.clone(),
            m: gens_cur.cols,
            q,
            eqs: rows.iter().map(|(f, _)| f.clone()).collect(),
        };
        let mut framed = best_frame(&plain, cfg, false);
        if !symbol_involutive(&framed) {
            let alt = best_frame(&plain, cfg, true);
            if key_beats(&frame_key(&alt), &frame_key(&framed)) {
                framed = alt;
            }
        }
        if framed.ctx.frame != ctx.frame {
            let change = crate::ore::frame_change_between(&ctx.frame, &framed.ctx.frame)
                .expect("frames are related by a constant change");
            let sub = invert_matrix(&change).expect("frame changes are invertible");
            let new_ctx = framed.ctx.clone();
            rows = rows
                .into_iter()
                .map(|(f, pay)| {
                    let row = f.to_operator_row(&ctx, gens_cur.cols);
                    let row: Vec<_> = row.iter().map(|o| o.change_frame(&new_ctx, &sub)).collect();
                    let pay = OpRow(pay.0.iter().map(|o| o.change_frame(&new_ctx, &sub)).collect());
                    (LinForm::from_operator_row(&order, &row), pay)
                })
                .collect();
            let gnew: Vec<Vec<_>> = (0..gens_cur.rows)
                .map(|r| {
                    gens_cur
                        .row(r)
                        .iter()
                        .map(|o| o.change_frame(&new_ctx, &sub))
                        .collect()
                })
                .collect();
            gens_cur = OperatorMatrix::from_rows(&new_ctx, gnew, gens_cur.cols);
            ctx = new_ctx;
            rows = echelon_rows(&order, rows);
            continue; // saturate again in the new frame
        }
        if symbol_involutive(&framed) {
            let inv = InvolutiveSystem::from_involutive_jetsystem(framed);
            let payloads: Vec<OpRow> = inv
                .sys
                .eqs
                .iter()
                .map(|e| {
                    rows.iter()
                        .find(|(f, _)| f == e)
                        .map(|(_, p)| p.clone())
                        .expect("echelon rows agree between tracked and plain runs")
                })
                .collect();
            return Ok((inv, payloads, gens_cur));
        }
        // prolong with tracking
        let mut all = rows.clone();
        for (f, pay) in &rows {
            for i in 1..=ctx.n {
                all.push((f.formal_derivative(&ctx, &order, i), pay.d_left(i)));
            }
        }
        rows = echelon_rows(&order, all);
        q += 1;
    }
    Err(Error::OrderBoundExceeded(cfg.max_rounds))
}
