use super::MultiIndex;
use crate::arith::{FieldCtx, Poly, RatFun, Rational};
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Shared context for operators: number of derivations, coefficient field
/// layout, and the constant frame expressing the current derivations in terms
/// of the original ones (D_i = Σ_j frame[i][j] ∂_j on coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OreContext {
    pub n: usize,
    pub field: FieldCtx,
    pub frame: Vec<Vec<Rational>>,
}

impl OreContext {
    pub fn new(n: usize, field: FieldCtx) -> Arc<Self> {
        let frame = identity_matrix(n);
        Arc::new(OreContext { n, field, frame })
    }

    pub fn with_frame(&self, frame: Vec<Vec<Rational>>) -> Arc<Self> {
        Arc::new(OreContext { n: self.n, field: self.field.clone(), frame })
    }

    /// Derivation D_i (1-based) of a coefficient in the current frame.
    pub fn partial(&self, a: &RatFun, i: usize) -> RatFun {
        assert!((1..=self.n).contains(&i), "derivation index out of range");
        let mut acc = RatFun::zero(self.field.nvars);
        for (j, c) in self.frame[i - 1].iter().enumerate() {
            if c.is_zero() || j >= self.field.nx {
                continue;
            }
            acc = acc.add(&a.derive_slot(j).scale(c));
        }
        acc
    }

    pub fn zero_coeff(&self) -> RatFun {
        RatFun::zero(self.field.nvars)
    }

    pub fn one_coeff(&self) -> RatFun {
        RatFun::one(self.field.nvars)
    }

    pub fn const_coeff(&self, c: Rational) -> RatFun {
        RatFun::constant(self.field.nvars, c)
    }
}

pub fn identity_matrix(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

/// Solve C · from = to for a square C, given frames of full row rank
/// (rows of `to` must lie in the row span of `from`).
pub fn frame_change_between(
    from: &[Vec<Rational>],
    to: &[Vec<Rational>],
) -> Option<Vec<Vec<Rational>>> {
    let k = from.len();
    if to.len() != k {
        return None;
    }
    let w = from.first().map(|r| r.len()).unwrap_or(0);
    // Gaussian elimination on fromᵀ augmented with each target row.
    // Build [from | I] echelon to express targets through the rows of from.
    let mut aug: Vec<(Vec<Rational>, Vec<Rational>)> = from
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut tag = vec![Rational::zero(); k];
            tag[i] = Rational::one();
            (r.clone(), tag)
        })
        .collect();
    // echelonize rows of `from`
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..w {
        let Some(p) = (row..k).find(|&r| !aug[r].0[col].is_zero()) else { continue };
        aug.swap(row, p);
        let inv = Rational::one() / aug[row].0[col].clone();
        for c in 0..w {
            aug[row].0[c] *= &inv;
        }
        for c in 0..k {
            aug[row].1[c] *= &inv;
        }
        for r in 0..k {
            if r != row && !aug[r].0[col].is_zero() {
                let f = aug[r].0[col].clone();
                for c in 0..w {
                    let t = &aug[row].0[c] * &f;
                    aug[r].0[c] -= t;
                }
                for c in 0..k {
                    let t = &aug[row].1[c] * &f;
                    aug[r].1[c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == k {
            break;
        }
    }
    if row < k {
        return None; // not full row rank
    }
    let mut out = Vec::with_capacity(k);
    for t in to {
        let mut rem = t.clone();
        let mut combo = vec![Rational::zero(); k];
        for (r, &col) in pivots.iter().enumerate() {
            if !rem[col].is_zero() {
                let f = rem[col].clone();
                for c in 0..w {
                    let s = &aug[r].0[c] * &f;
                    rem[c] -= s;
                }
                for c in 0..k {
                    let s = &aug[r].1[c] * &f;
                    combo[c] += s;
                }
            }
        }
        if rem.iter().any(|v| !v.is_zero()) {
            return None; // target outside the row span
        }
        out.push(combo);
    }
    Some(out)
}

/// Invert a rational matrix by Gauss-Jordan elimination.
pub fn invert_matrix(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv = identity_matrix(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &a[col][j] * &f;
                    a[r][j] -= t;
                    let t = &inv[col][j] * &f;
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Linear differential operator P = Σ a^μ d_μ in canonical form: coefficients
/// on the left, terms sorted by the class-respecting multi-index order with
/// no zero coefficients and no duplicate indices.
#[derive(Clone, PartialEq, Eq)]
pub struct OreOperator {
    pub ctx: Arc<OreContext>,
    /// (μ, a^μ) sorted with the largest μ first.
    pub terms: Vec<(MultiIndex, RatFun)>,
}

impl OreOperator {
    pub fn zero(ctx: &Arc<OreContext>) -> Self {
        OreOperator { ctx: ctx.clone(), terms: vec![] }
    }

    pub fn one(ctx: &Arc<OreContext>) -> Self {
        OreOperator::coeff(ctx, ctx.one_coeff())
    }

    pub fn coeff(ctx: &Arc<OreContext>, a: RatFun) -> Self {
        OreOperator::monomial(ctx, MultiIndex::zero(ctx.n), a)
    }

    /// The operator d_i (1-based).
    pub fn d(ctx: &Arc<OreContext>, i: usize) -> Self {
        OreOperator::monomial(ctx, MultiIndex::unit(ctx.n, i), ctx.one_coeff())
    }

    /// The operator d_μ.
    pub fn d_mu(ctx: &Arc<OreContext>, mu: MultiIndex) -> Self {
        OreOperator::monomial(ctx, mu, ctx.one_coeff())
    }

    pub fn monomial(ctx: &Arc<OreContext>, mu: MultiIndex, a: RatFun) -> Self {
        let mut op = OreOperator { ctx: ctx.clone(), terms: vec![(mu, a)] };
        op.normalize();
        op
    }

    pub fn from_terms(ctx: &Arc<OreContext>, terms: Vec<(MultiIndex, RatFun)>) -> Self {
        let mut op = OreOperator { ctx: ctx.clone(), terms };
        op.normalize();
        op
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| b.0.cmp_class_order(&a.0));
        let mut out: Vec<(MultiIndex, RatFun)> = Vec::with_capacity(self.terms.len());
        for (mu, a) in self.terms.drain(..) {
            if let Some(last) = out.last_mut() {
                if last.0 == mu {
                    last.1 = last.1.add(&a);
                    continue;
                }
            }
            out.push((mu, a));
        }
        out.retain(|(_, a)| !a.is_zero());
        self.terms = out;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Order of the operator: max |μ| over its terms (0 for the zero operator).
    pub fn order(&self) -> u32 {
        self.terms.iter().map(|(mu, _)| mu.len()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        OreOperator {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.neg())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.compatible(other), "operator context mismatch");
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        OreOperator::from_terms(&self.ctx, terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Left multiplication by a coefficient.
    pub fn scale(&self, a: &RatFun) -> Self {
        OreOperator {
            ctx: self.ctx.clone(),
            terms: if a.is_zero() {
                vec![]
            } else {
                self.terms.iter().map(|(m, b)| (m.clone(), a.mul(b))).collect()
            },
        }
    }

    pub fn compatible(&self, other: &Self) -> bool {
        self.ctx == other.ctx || Arc::ptr_eq(&self.ctx, &other.ctx)
    }

    /// d_i ∘ self, one Leibniz step: d_i (b d_ν) = b d_{ν+1_i} + (∂_i b) d_ν.
    pub fn d_left(&self, i: usize) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for (nu, b) in &self.terms {
            terms.push((nu.bump(i), b.clone()));
            let db = self.ctx.partial(b, i);
            if !db.is_zero() {
                terms.push((nu.clone(), db));
            }
        }
        OreOperator::from_terms(&self.ctx, terms)
    }

    /// Composition P ∘ Q, renormalized to canonical left-coefficient form.
    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.compatible(other), "operator context mismatch");
        let mut acc = OreOperator::zero(&self.ctx);
        for (mu, a) in &self.terms {
            let mut t = other.clone();
            for (i, &e) in mu.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.d_left(i + 1);
                }
            }
            acc = acc.add(&t.scale(a));
        }
        acc
    }

    /// Formal adjoint ad(P) = Σ (−1)^{|μ|} d_μ ∘ a^μ.
    pub fn adjoint(&self) -> Self {
        let mut acc = OreOperator::zero(&self.ctx);
        for (mu, a) in &self.terms {
            let mut t = OreOperator::coeff(&self.ctx, a.clone());
            for (i, &e) in mu.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.d_left(i + 1);
                }
            }
            if mu.len() % 2 == 1 {
                t = t.neg();
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Rewrite in a new frame where the old derivations expand as
    /// d_old_j = Σ_i sub[j][i] d̄_i (constant coefficients).
    pub fn change_frame(&self, new_ctx: &Arc<OreContext>, sub: &[Vec<Rational>]) -> Self {
        let n = self.ctx.n;
        let lin: Vec<OreOperator> = (0..n)
            .map(|j| {
                let mut t = OreOperator::zero(new_ctx);
                for (i, c) in sub[j].iter().enumerate() {
                    if !c.is_zero() {
                        t = t.add(
                            &OreOperator::d(new_ctx, i + 1).scale(&new_ctx.const_coeff(c.clone())),
                        );
                    }
                }
                t
            })
            .collect();
        let mut acc = OreOperator::zero(new_ctx);
        for (mu, a) in &self.terms {
            let mut t = OreOperator::one(new_ctx);
            for (j, &e) in mu.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&lin[j]);
                }
            }
            acc = acc.add(&t.scale(a));
        }
        acc
    }

    /// Extend the coefficient field layout (new inert slots appended).
    pub fn extend_field(&self, new_ctx: &Arc<OreContext>) -> Self {
        let nv = new_ctx.field.nvars;
        OreOperator {
            ctx: new_ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.extend_vars(nv))).collect(),
        }
    }

    /// The coefficient of d_μ (zero if absent).
    pub fn coeff_of(&self, mu: &MultiIndex) -> RatFun {
        self.terms
            .iter()
            .find(|(m, _)| m == mu)
            .map(|(_, a)| a.clone())
            .unwrap_or_else(|| self.ctx.zero_coeff())
    }
}

impl fmt::Display for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (mu, a)) in self.terms.iter().enumerate() {
            let coeff = a.to_string_named(&self.ctx.field.names);
            let dstr = if mu.is_empty() { String::new() } else { format!("d{mu}") };
            let (sign, body) = if let Some(rest) = coeff.strip_prefix('-') {
                ("-", rest.to_string())
            } else {
                ("+", coeff)
            };
            if idx == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let needs_coeff = body != "1" || dstr.is_empty();
            let simple = !body.contains(['+', '-', ' ']);
            if needs_coeff && !dstr.is_empty() {
                if simple {
                    write!(f, "{body}*{dstr}")?;
                } else {
                    write!(f, "({body})*{dstr}")?;
                }
            } else if !dstr.is_empty() {
                write!(f, "{dstr}")?;
            } else {
                write!(f, "{body}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Rectangular matrix of operators; row τ of a p×m matrix encodes the
/// equation Φ^τ ≡ Σ_k P_{τk} y^k, presenting M = D^m / (D^p 𝒟).
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub ctx: Arc<OreContext>,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<OreOperator>,
}

impl OperatorMatrix {
    pub fn new(ctx: &Arc<OreContext>, rows: usize, cols: usize, entries: Vec<OreOperator>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must match shape");
        OperatorMatrix { ctx: ctx.clone(), rows, cols, entries }
    }

    pub fn zero(ctx: &Arc<OreContext>, rows: usize, cols: usize) -> Self {
        OperatorMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries: vec![OreOperator::zero(ctx); rows * cols],
        }
    }

    pub fn from_rows(ctx: &Arc<OreContext>, rows: Vec<Vec<OreOperator>>, cols: usize) -> Self {
        let r = rows.len();
        let mut entries = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols);
            entries.extend(row);
        }
        OperatorMatrix { ctx: ctx.clone(), rows: r, cols, entries }
    }

    pub fn at(&self, r: usize, c: usize) -> &OreOperator {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<OreOperator> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Transposed matrix of entry-wise formal adjoints, realizing
    /// hom_D(•, D) in the operator picture.
    pub fn adjoint(&self) -> OperatorMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.at(r, c).adjoint());
            }
        }
        OperatorMatrix { ctx: self.ctx.clone(), rows: self.cols, cols: self.rows, entries }
    }

    /// Matrix product (self: p×q) ∘ (other: q×m) → p×m.
    pub fn mul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = OreOperator::zero(&self.ctx);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(r, k).mul(other.at(k, c)));
                }
                entries.push(acc);
            }
        }
        OperatorMatrix { ctx: self.ctx.clone(), rows: self.rows, cols: other.cols, entries }
    }

    pub fn max_order(&self) -> u32 {
        self.entries.iter().map(|e| e.order()).max().unwrap_or(0)
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OperatorMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx3() -> Arc<OreContext> {
        OreContext::new(3, FieldCtx::rational(3))
    }

    fn xvar(ctx: &Arc<OreContext>, i: usize) -> RatFun {
        RatFun::var(ctx.field.nvars, i - 1)
    }

    #[test]
    fn commutation_relation() {
        // d1 ∘ x1 = x1 d1 + 1
        let ctx = ctx3();
        let p = OreOperator::d(&ctx, 1).mul(&OreOperator::coeff(&ctx, xvar(&ctx, 1)));
        let expect = OreOperator::from_terms(
            &ctx,
            vec![
                (MultiIndex::unit(3, 1), xvar(&ctx, 1)),
                (MultiIndex::zero(3), ctx.one_coeff()),
            ],
        );
        assert_eq!(p, expect);
    }

    #[test]
    fn derivations_commute() {
        let ctx = ctx3();
        let p = OreOperator::d(&ctx, 3).mul(&OreOperator::d(&ctx, 2));
        let expect = OreOperator::d_mu(&ctx, MultiIndex(vec![0, 1, 1]));
        assert_eq!(p, expect);
        let q = OreOperator::d(&ctx, 2).mul(&OreOperator::d(&ctx, 3));
        assert_eq!(p, q);
    }

    #[test]
    fn variable_coefficient_product() {
        // (d2 − x2 d1) ∘ d1 = d1d2 − x2 d11   (∂1 x2 = 0)
        let ctx = ctx3();
        let p = OreOperator::d(&ctx, 2)
            .sub(&OreOperator::d(&ctx, 1).scale(&xvar(&ctx, 2)))
            .mul(&OreOperator::d(&ctx, 1));
        let expect = OreOperator::from_terms(
            &ctx,
            vec![
                (MultiIndex(vec![1, 1, 0]), ctx.one_coeff()),
                (MultiIndex(vec![2, 0, 0]), xvar(&ctx, 2).neg()),
            ],
        );
        assert_eq!(p, expect);
    }

    #[test]
    fn adjoint_examples() {
        let ctx = ctx3();
        // ad(d_i) = -d_i
        let a = OreOperator::d(&ctx, 2).adjoint();
        assert_eq!(a, OreOperator::d(&ctx, 2).neg());
        // ad(x2 d2) = -x2 d2 - 1
        let p = OreOperator::d(&ctx, 2).scale(&xvar(&ctx, 2));
        let expect = OreOperator::from_terms(
            &ctx,
            vec![
                (MultiIndex::unit(3, 2), xvar(&ctx, 2).neg()),
                (MultiIndex::zero(3), ctx.one_coeff().neg()),
            ],
        );
        assert_eq!(p.adjoint(), expect);
    }

    #[test]
    fn adjoint_of_cc_row_matrix() {
        // Ψ ≡ d33 v − d13 u + d2 u, as a 1×2 matrix over (u, v), dualizes to
        // the column {−(d13 + d2) θ, d33 θ}.
        let ctx = ctx3();
        let d33 = OreOperator::d_mu(&ctx, MultiIndex(vec![0, 0, 2]));
        let d13 = OreOperator::d_mu(&ctx, MultiIndex(vec![1, 0, 1]));
        let d2 = OreOperator::d(&ctx, 2);
        let m = OperatorMatrix::from_rows(&ctx, vec![vec![d13.neg().add(&d2), d33.clone()]], 2);
        let adj = m.adjoint();
        assert_eq!(adj.rows, 2);
        assert_eq!(adj.cols, 1);
        assert_eq!(*adj.at(0, 0), d13.neg().sub(&d2));
        assert_eq!(*adj.at(1, 0), d33);
        // ad(ad(A)) = A
        assert_eq!(adj.adjoint(), m);
    }

    fn random_op(rng: &mut ChaCha8Rng, ctx: &Arc<OreContext>) -> OreOperator {
        let nterms = rng.gen_range(1..=3);
        let mut terms = Vec::new();
        for _ in 0..nterms {
            let mu = MultiIndex(
                (0..ctx.n)
                    .map(|_| rng.gen_range(0..=1u32))
                    .collect(),
            );
            let mut num = Poly::constant(ctx.field.nvars, rat_int(rng.gen_range(-3i64..=3)));
            if ctx.field.nvars >= 2 && rng.gen_bool(0.4) {
                num = num.mul(&Poly::var(ctx.field.nvars, rng.gen_range(0..2)));
            }
            terms.push((mu, RatFun::from_poly(num)));
        }
        OreOperator::from_terms(ctx, terms)
    }

    #[test]
    fn adjoint_involution_and_antihomomorphism() {
        let ctx = OreContext::new(2, FieldCtx::rational(2));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let p = random_op(&mut rng, &ctx);
            let q = random_op(&mut rng, &ctx);
            assert_eq!(p.adjoint().adjoint(), p);
            assert_eq!(p.mul(&q).adjoint(), q.adjoint().mul(&p.adjoint()));
            // distributivity
            let r = random_op(&mut rng, &ctx);
            assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        }
    }

    #[test]
    fn order_is_additive_for_nonzero_products() {
        let ctx = ctx3();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = random_op(&mut rng, &ctx);
            let q = random_op(&mut rng, &ctx);
            if !p.is_zero() && !q.is_zero() {
                assert_eq!(p.mul(&q).order(), p.order() + q.order());
            }
        }
    }

    #[test]
    fn constant_coefficients_multiply_commutatively() {
        let ctx = OreContext::new(2, FieldCtx::constants());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = random_op(&mut rng, &ctx);
            let q = random_op(&mut rng, &ctx);
            assert_eq!(p.mul(&q), q.mul(&p));
        }
    }

    #[test]
    fn frame_change_roundtrip() {
        // permutation (1,2,3) -> (3,2,1)
        let ctx = ctx3();
        let perm: Vec<Vec<Rational>> = vec![
            vec![rat_int(0), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(1), rat_int(0), rat_int(0)],
        ];
        let new_ctx = ctx.with_frame(perm.clone());
        let sub = invert_matrix(&perm).unwrap();
        let p = OreOperator::d_mu(&ctx, MultiIndex(vec![2, 0, 0])); // d11
        let q = p.change_frame(&new_ctx, &sub);
        assert_eq!(q, OreOperator::d_mu(&new_ctx, MultiIndex(vec![0, 0, 2])));
        let back = q.change_frame(&ctx, &perm);
        assert_eq!(back, p);
    }
}
