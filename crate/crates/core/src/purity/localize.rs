use crate::arith::{Poly, RatFun};
use crate::involution::{complete_to_involution, CompletionConfig, InvolutiveSystem};
use crate::jets::{JetCoord, JetOrder, JetSystem, LinForm};
use crate::ore::{MultiIndex, OreContext, OreOperator};
use crate::{Error, Result};
use std::sync::Arc;

/// Relative localization of a first-order involutive system: d_j → χ_j for
/// j ≤ n−r, keeping d_{n−r+1}..d_n as derivations over the extended field
/// K(χ₁..χ_{n−r}).
#[derive(Clone, Debug)]
pub struct LocalizedSystem {
    /// Codimension r (number of kept derivations).
    pub r: usize,
    /// Number of adjoined parameters χ.
    pub chi: usize,
    /// Ambient unknown count.
    pub m: usize,
    /// Localized equations over k(χ)[d_{n−r+1}..d_n], echelonized; kept
    /// derivation j of the parent appears as slot j−(n−r).
    pub sys: JetSystem,
    /// The order-0 relations among the unknowns (strict class n−r rows after
    /// localization and content removal).
    pub relations: Vec<LinForm>,
}

/// χ-slot (0-based in the extended layout) of the localized direction j.
fn chi_slot(parent: &Arc<OreContext>, j: usize) -> usize {
    parent.field.nvars + (j - 1)
}

/// Divide a row by the gcd of its coefficient numerators and clear the
/// denominators: the "χ-content removal" that turns χ·E = 0 into E = 0 over
/// the localized field.
pub fn content_normalize(form: &LinForm) -> LinForm {
    if form.is_zero() {
        return form.clone();
    }
    let nv = form.terms[0].1.nvars();
    // clear denominators
    let mut den = Poly::one(nv);
    for (_, c) in &form.terms {
        let g = den.gcd(&c.den);
        den = den.mul(&c.den.exact_div(&g).expect("gcd divides"));
    }
    let cleared: Vec<(JetCoord, Poly)> = form
        .terms
        .iter()
        .map(|(j, c)| {
            let scale = den.exact_div(&c.den).expect("lcm construction");
            (j.clone(), c.num.mul(&scale))
        })
        .collect();
    let mut content = Poly::zero(nv);
    for (_, p) in &cleared {
        content = content.gcd(p);
    }
    let terms: Vec<(JetCoord, RatFun)> = cleared
        .into_iter()
        .map(|(j, p)| {
            (j, RatFun::from_poly(p.exact_div(&content).expect("content divides")))
        })
        .collect();
    LinForm::from_terms(&JetOrder::Standard, terms)
}

/// Localized context: r derivations (the parent's last r action rows) over
/// the field extended by χ₁..χ_{n−r}.
pub fn localized_context(parent: &Arc<OreContext>, r: usize) -> Arc<OreContext> {
    let n = parent.n;
    let field = parent.field.with_chi(n - r);
    let frame: Vec<Vec<crate::arith::Rational>> = parent.frame[n - r..].to_vec();
    Arc::new(OreContext { n: r, field, frame })
}

/// Localize one first-order linear form.
fn localize_form(
    form: &LinForm,
    parent: &Arc<OreContext>,
    r: usize,
    nv_new: usize,
) -> LinForm {
    let n = parent.n;
    let order = JetOrder::Standard;
    let mut terms = Vec::new();
    for (j, c) in &form.terms {
        let c = c.extend_vars(nv_new);
        match j.mu.class() {
            None => terms.push((JetCoord::new(j.k, MultiIndex::zero(r)), c)),
            Some(cls) if cls <= n - r => {
                let chi = RatFun::var(nv_new, chi_slot(parent, cls));
                terms.push((JetCoord::new(j.k, MultiIndex::zero(r)), c.mul(&chi)));
            }
            Some(cls) => {
                terms.push((JetCoord::new(j.k, MultiIndex::unit(r, cls - (n - r))), c));
            }
        }
    }
    LinForm::from_terms(&order, terms)
}

/// Relative localization with the Prop 5.7 certificate: the classes below
/// n−r must become exact k(χ)-combinations of the strict-class-(n−r) rows.
pub fn relative_localization(f: &InvolutiveSystem, r: usize) -> Result<LocalizedSystem> {
    let sys = &f.sys;
    let n = sys.n();
    if sys.q != 1 {
        return Err(Error::NotFirstOrder);
    }
    let cd = f.characters().cd;
    if cd != r {
        return Err(Error::WrongCodimension { expected: r, found: cd });
    }
    if r == 0 || r >= n {
        return Err(Error::UnsupportedCodimension(r));
    }
    let ctx = localized_context(&sys.ctx, r);
    let nv = ctx.field.nvars;
    let order = JetOrder::Standard;
    let mut strict: Vec<LinForm> = Vec::new();
    let mut lower: Vec<LinForm> = Vec::new();
    let mut higher: Vec<LinForm> = Vec::new();
    for e in &sys.eqs {
        let class = e.lead().unwrap().0.mu.class().unwrap();
        let loc = localize_form(e, &sys.ctx, r, nv);
        if class == n - r {
            strict.push(content_normalize(&loc));
        } else if class < n - r {
            lower.push(loc);
        } else {
            higher.push(content_normalize(&loc));
        }
    }
    // Prop 5.7 certificate: each lower-class localization reduces to zero
    // against the strict-class relations
    let ech = crate::jets::echelon_rows(
        &order,
        strict.iter().map(|f| (f.clone(), ())).collect(),
    );
    for l in &lower {
        let (rem, _) = crate::jets::reduce_row(&order, l.clone(), (), &ech);
        if !rem.is_zero() {
            return Err(Error::ParametrizationNotCertified(
                "a class below the strict one survived localization".into(),
            ));
        }
    }
    let mut eqs = strict.clone();
    eqs.extend(higher);
    let loc_sys = JetSystem::new(&ctx, sys.m, 1, eqs);
    // the order-0 relations in integral (content-normalized) form
    let relations: Vec<LinForm> = loc_sys
        .eqs
        .iter()
        .filter(|e| e.order() == 0)
        .map(content_normalize)
        .collect();
    Ok(LocalizedSystem { r, chi: n - r, m: sys.m, sys: loc_sys, relations })
}

/// Jet-level localization of a constant-coefficient involutive system of any
/// order: y_μ ↦ χ^{μ₁..μ_{n−r}} · y_{μ_{n−r+1..n}}, completed over the r kept
/// derivations. Used for the Macaulay-style inverse-system fixtures.
pub fn localize_jet_system(
    inv: &InvolutiveSystem,
    r: usize,
    cfg: &CompletionConfig,
) -> Result<InvolutiveSystem> {
    let sys = &inv.sys;
    let n = sys.n();
    assert!(r >= 1 && r <= n);
    let ctx = localized_context(&sys.ctx, r);
    let nv = ctx.field.nvars;
    let order = JetOrder::Standard;
    let mut eqs = Vec::new();
    for e in &sys.eqs {
        let mut terms = Vec::new();
        for (j, c) in &e.terms {
            let mut coeff = c.extend_vars(nv);
            for slot in 0..(n - r) {
                for _ in 0..j.mu.0[slot] {
                    coeff = coeff.mul(&RatFun::var(nv, chi_slot(&sys.ctx, slot + 1)));
                }
            }
            let kept = MultiIndex(j.mu.0[n - r..].to_vec());
            terms.push((JetCoord::new(j.k, kept), coeff));
        }
        let form = content_normalize(&LinForm::from_terms(&order, terms));
        if !form.is_zero() {
            eqs.push(form);
        }
    }
    let loc = JetSystem::new(&ctx, sys.m, 1, eqs);
    complete_to_involution(&loc, cfg)
}

/// Delocalize χ_j → d_j: a localized form over the potentials becomes an
/// operator row, with the χ-monomials turning into derivation monomials on
/// the right of their K-coefficients.
pub fn delocalize_form(
    form: &LinForm,
    parent: &Arc<OreContext>,
    r: usize,
    cols: usize,
) -> Vec<OreOperator> {
    let n = parent.n;
    let chi_base = parent.field.nvars;
    let mut out = vec![OreOperator::zero(parent); cols];
    for (j, c) in &form.terms {
        // split the coefficient into χ-monomial pieces: c = Σ c_γ(x) χ^γ
        assert!(
            c.den.terms.iter().all(|(e, _)| e[chi_base..].iter().all(|&k| k == 0)),
            "delocalization needs χ-free denominators"
        );
        let den = Poly::from_terms(
            chi_base,
            c.den.terms.iter().map(|(e, q)| (e[..chi_base].to_vec(), q.clone())).collect(),
        );
        for (e, q) in &c.num.terms {
            let x_part: Vec<u32> = e[..chi_base].to_vec();
            let coeff = RatFun::new(Poly::monomial(chi_base, x_part, q.clone()), den.clone());
            let mut mu = vec![0u32; n];
            mu[..(n - r)].copy_from_slice(&e[chi_base..]);
            for (slot, &k) in j.mu.0.iter().enumerate() {
                mu[n - r + slot] += k;
            }
            out[j.k] = out[j.k].add(&OreOperator::monomial(parent, MultiIndex(mu), coeff));
        }
    }
    out
}
