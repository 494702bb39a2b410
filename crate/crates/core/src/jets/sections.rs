use super::{JetCoord, JetOrder, JetSystem};
use crate::arith::RatFun;
use crate::ore::OreContext;
use crate::{Error, Result};
use std::collections::HashMap;
use std::sync::Arc;

/// Truncated section of the system R = hom_K(M, K): a K-valued assignment to
/// every jet of order ≤ q satisfying the equations. The values live in K —
/// this is not a formal power series solution.
#[derive(Clone, PartialEq, Eq)]
pub struct Section {
    pub ctx: Arc<OreContext>,
    pub m: usize,
    pub q: u32,
    pub values: HashMap<JetCoord, RatFun>,
}

impl Section {
    pub fn get(&self, j: &JetCoord) -> RatFun {
        self.values.get(j).cloned().unwrap_or_else(|| self.ctx.zero_coeff())
    }

    /// Component-wise list (f^k_μ) in the standard jet order, largest last
    /// (i.e. (f, f_x, f_xx, …) for n = m = 1).
    pub fn components(&self) -> Vec<(JetCoord, RatFun)> {
        let mut jets = JetCoord::all_up_to(self.ctx.n, self.m, self.q);
        jets.reverse();
        jets.into_iter().map(|j| (j.clone(), self.get(&j))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    pub fn neg(&self) -> Section {
        Section {
            ctx: self.ctx.clone(),
            m: self.m,
            q: self.q,
            values: self.values.iter().map(|(j, v)| (j.clone(), v.neg())).collect(),
        }
    }

    pub fn add(&self, other: &Section) -> Section {
        assert_eq!(self.q, other.q);
        let mut values = self.values.clone();
        for (j, v) in &other.values {
            let newv = values.get(j).map(|a| a.add(v)).unwrap_or_else(|| v.clone());
            values.insert(j.clone(), newv);
        }
        values.retain(|_, v| !v.is_zero());
        Section { ctx: self.ctx.clone(), m: self.m, q: self.q, values }
    }

    /// Truncate to a lower order.
    pub fn truncate(&self, q: u32) -> Section {
        Section {
            ctx: self.ctx.clone(),
            m: self.m,
            q,
            values: self
                .values
                .iter()
                .filter(|(j, _)| j.order() <= q)
                .map(|(j, v)| (j.clone(), v.clone()))
                .collect(),
        }
    }

    /// Check every equation a^{τμ}_k f^k_μ = 0 of the system at this order.
    pub fn satisfies(&self, sys: &JetSystem) -> bool {
        let at = if sys.q <= self.q { sys.prolong(self.q - sys.q) } else { return false };
        at.eqs.iter().all(|e| {
            let mut acc = self.ctx.zero_coeff();
            for (j, c) in &e.terms {
                acc = acc.add(&c.mul(&self.get(j)));
            }
            acc.is_zero()
        })
    }
}

impl std::fmt::Debug for Section {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let comps: Vec<String> = self
            .components()
            .iter()
            .map(|(j, v)| format!("{j}={}", v.to_string_named(&self.ctx.field.names)))
            .collect();
        write!(f, "Section[{}]", comps.join(", "))
    }
}

/// K-basis of the solution space of the system truncated at order q: one
/// basis section per parametric jet (that jet set to 1, the others to 0).
pub fn sections_at_order(sys: &JetSystem, q: u32) -> Vec<Section> {
    let at = if q >= sys.q { sys.prolong(q - sys.q) } else { sys.project(q) };
    let pivots: std::collections::HashSet<JetCoord> = at.pivots().into_iter().collect();
    let jets = JetCoord::all_up_to(at.n(), at.m, q);
    let mut basis = Vec::new();
    for p in jets.iter().filter(|j| !pivots.contains(j)) {
        let mut values = HashMap::new();
        values.insert(p.clone(), at.ctx.one_coeff());
        for e in &at.eqs {
            if let Some(c) = e.coeff_of(p) {
                values.insert(e.lead().unwrap().0.clone(), c.neg());
            }
        }
        basis.push(Section { ctx: at.ctx.clone(), m: at.m, q, values });
    }
    basis.reverse(); // smallest parametric jet first: (f, f', f'',…) reading
    basis
}

/// Spencer operator component: (d_i f)^k_μ = ∂_i f^k_μ − f^k_{μ+1_i} for
/// |μ| ≤ q, dropping the top order.
pub fn spencer_apply(f: &Section, i: usize) -> Result<Section> {
    if f.q == 0 {
        return Err(Error::OrderTooLow);
    }
    let q = f.q - 1;
    let mut values = HashMap::new();
    for j in JetCoord::all_up_to(f.ctx.n, f.m, q) {
        let v = f.ctx.partial(&f.get(&j), i).sub(&f.get(&JetCoord::new(j.k, j.mu.bump(i))));
        if !v.is_zero() {
            values.insert(j, v);
        }
    }
    Ok(Section { ctx: f.ctx.clone(), m: f.m, q, values })
}
