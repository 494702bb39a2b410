use super::{JetCoord, JetOrder};
use crate::arith::RatFun;
use crate::ore::{OreContext, OreOperator};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// K-linear form Σ a^{μ}_k y^k_μ on jet coordinates, terms sorted with the
/// largest jet first under a fixed jet order; no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct LinForm {
    pub terms: Vec<(JetCoord, RatFun)>,
}

impl LinForm {
    pub fn zero() -> Self {
        LinForm { terms: vec![] }
    }

    pub fn from_terms(order: &JetOrder, terms: Vec<(JetCoord, RatFun)>) -> Self {
        let mut terms = terms;
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut out: Vec<(JetCoord, RatFun)> = Vec::with_capacity(terms.len());
        for (j, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == j {
                    last.1 = last.1.add(&c);
                    continue;
                }
            }
            out.push((j, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        LinForm { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Leading (largest) jet and its coefficient.
    pub fn lead(&self) -> Option<&(JetCoord, RatFun)> {
        self.terms.first()
    }

    pub fn order(&self) -> u32 {
        self.terms.iter().map(|(j, _)| j.order()).max().unwrap_or(0)
    }

    pub fn coeff_of(&self, j: &JetCoord) -> Option<&RatFun> {
        self.terms.iter().find(|(jj, _)| jj == j).map(|(_, c)| c)
    }

    pub fn scale(&self, c: &RatFun) -> LinForm {
        if c.is_zero() {
            return LinForm::zero();
        }
        LinForm {
            terms: self.terms.iter().map(|(j, a)| (j.clone(), a.mul(c))).collect(),
        }
    }

    pub fn neg(&self) -> LinForm {
        LinForm { terms: self.terms.iter().map(|(j, a)| (j.clone(), a.neg())).collect() }
    }

    /// self + c·other, preserving sortedness under `order`.
    pub fn add_scaled(&self, order: &JetOrder, other: &LinForm, c: &RatFun) -> LinForm {
        if c.is_zero() {
            return self.clone();
        }
        let mut out: Vec<(JetCoord, RatFun)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match order.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((other.terms[j].0.clone(), other.terms[j].1.mul(c)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = self.terms[i].1.add(&other.terms[j].1.mul(c));
                    if !v.is_zero() {
                        out.push((self.terms[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for (jj, a) in &other.terms[j..] {
            out.push((jj.clone(), a.mul(c)));
        }
        LinForm { terms: out }
    }

    pub fn add(&self, order: &JetOrder, other: &LinForm) -> LinForm {
        let one = other
            .terms
            .first()
            .map(|(_, c)| RatFun::one(c.nvars()))
            .unwrap_or_else(|| RatFun::one(0));
        self.add_scaled(order, other, &one)
    }

    /// Formal derivative d_i: a y^k_μ ↦ a y^k_{μ+1_i} + (∂_i a) y^k_μ.
    pub fn formal_derivative(&self, ctx: &Arc<OreContext>, order: &JetOrder, i: usize) -> LinForm {
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for (j, a) in &self.terms {
            terms.push((JetCoord::new(j.k, j.mu.bump(i)), a.clone()));
            let da = ctx.partial(a, i);
            if !da.is_zero() {
                terms.push((j.clone(), da));
            }
        }
        LinForm::from_terms(order, terms)
    }

    /// Pure index shift μ ↦ μ+1_i (symbol-level prolongation, no coefficient
    /// derivatives).
    pub fn shift(&self, order: &JetOrder, i: usize) -> LinForm {
        LinForm::from_terms(
            order,
            self.terms
                .iter()
                .map(|(j, a)| (JetCoord::new(j.k, j.mu.bump(i)), a.clone()))
                .collect(),
        )
    }

    /// Restrict to terms of exact order q.
    pub fn top_part(&self, q: u32) -> LinForm {
        LinForm {
            terms: self.terms.iter().filter(|(j, _)| j.order() == q).cloned().collect(),
        }
    }

    /// Read the form as a row of operators over m unknowns:
    /// y^k_μ-term with coefficient a contributes a·d_μ in column k.
    pub fn to_operator_row(&self, ctx: &Arc<OreContext>, m: usize) -> Vec<OreOperator> {
        let mut row = vec![OreOperator::zero(ctx); m];
        for (j, a) in &self.terms {
            row[j.k] = row[j.k].add(&OreOperator::monomial(ctx, j.mu.clone(), a.clone()));
        }
        row
    }

    /// Inverse of `to_operator_row`.
    pub fn from_operator_row(order: &JetOrder, row: &[OreOperator]) -> LinForm {
        let mut terms = Vec::new();
        for (k, op) in row.iter().enumerate() {
            for (mu, a) in &op.terms {
                terms.push((JetCoord::new(k, mu.clone()), a.clone()));
            }
        }
        LinForm::from_terms(order, terms)
    }

    pub fn display_named(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (j, a)) in self.terms.iter().enumerate() {
            let coeff = a.to_string_named(names);
            let (sign, body) = if let Some(rest) = coeff.strip_prefix('-') {
                ("-", rest.to_string())
            } else {
                ("+", coeff)
            };
            if idx == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let simple = !body.contains(['+', '-', ' ']);
            if body == "1" {
                out.push_str(&j.to_string());
            } else if simple {
                out.push_str(&format!("{body}*{j}"));
            } else {
                out.push_str(&format!("({body})*{j}"));
            }
        }
        out
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_named(&[]))
    }
}

impl fmt::Debug for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
