use super::Rational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Sparse multivariate polynomial over ℚ.
///
/// Terms are kept in graded-lexicographic descending order with no zero
/// coefficients and no duplicate exponent vectors, so representation is
/// unique and equality is structural.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    /// (exponent vector, coefficient), graded-lex descending.
    pub terms: Vec<(Vec<u32>, Rational)>,
}

/// Graded-lexicographic comparison of exponent vectors.
fn cmp_exp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: vec![] }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        if c.is_zero() {
            Poly::zero(nvars)
        } else {
            Poly { nvars, terms: vec![(vec![0; nvars], c)] }
        }
    }

    /// The monomial x_slot (0-based slot).
    pub fn var(nvars: usize, slot: usize) -> Self {
        assert!(slot < nvars, "variable slot out of range");
        let mut e = vec![0; nvars];
        e[slot] = 1;
        Poly { nvars, terms: vec![(e, Rational::one())] }
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        if c.is_zero() {
            Poly::zero(nvars)
        } else {
            Poly { nvars, terms: vec![(exps, c)] }
        }
    }

    /// Normalizing constructor: merges duplicates, drops zeros, sorts.
    pub fn from_terms(nvars: usize, terms: Vec<(Vec<u32>, Rational)>) -> Self {
        let mut terms = terms;
        terms.sort_by(|a, b| cmp_exp(&b.0, &a.0));
        let mut out: Vec<(Vec<u32>, Rational)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == e {
                    last.1 += c;
                    continue;
                }
            }
            out.push((e, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { nvars, terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|(e, _)| e.iter().sum()).unwrap_or(0)
    }

    pub fn degree_in(&self, slot: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[slot]).max().unwrap_or(0)
    }

    /// Leading coefficient in the graded-lex order.
    pub fn leading_coeff(&self) -> Rational {
        self.terms.first().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Pad exponent vectors to a wider slot layout (new slots appended).
    pub fn extend_vars(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars);
        Poly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.resize(nvars, 0);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "polynomial slot count mismatch");
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match cmp_exp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { nvars: self.nvars, terms: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "polynomial slot count mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut acc: Vec<(Vec<u32>, Rational)> = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                acc.push((e, ca * cb));
            }
        }
        Poly::from_terms(self.nvars, acc)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to slot (0-based).
    pub fn derive(&self, slot: usize) -> Poly {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            if e[slot] > 0 {
                let mut e2 = e.clone();
                e2[slot] -= 1;
                terms.push((e2, c * Rational::from_integer(e[slot].into())));
            }
        }
        Poly::from_terms(self.nvars, terms)
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn exact_div(&self, other: &Poly) -> Option<Poly> {
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero(self.nvars));
        }
        if let Some(c) = other.as_constant() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        let mut rem = self.clone();
        let mut quo: Vec<(Vec<u32>, Rational)> = Vec::new();
        let (dlead, dc) = (&other.terms[0].0, &other.terms[0].1);
        while !rem.is_zero() {
            let (rlead, rc) = (&rem.terms[0].0, &rem.terms[0].1);
            if rlead.iter().zip(dlead).any(|(r, d)| r < d) {
                return None;
            }
            let e: Vec<u32> = rlead.iter().zip(dlead).map(|(r, d)| r - d).collect();
            let c = rc / dc;
            let mono = Poly::monomial(self.nvars, e.clone(), c.clone());
            rem = rem.sub(&mono.mul(other));
            quo.push((e, c));
        }
        Some(Poly::from_terms(self.nvars, quo))
    }

    /// Substitute polynomials for the variables (used by frame changes on χ).
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let nv = images.first().map(|p| p.nvars).unwrap_or(self.nvars);
        let mut acc = Poly::zero(nv);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(nv, c.clone());
            for (slot, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    t = t.mul(&images[slot].pow(exp));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Greatest common divisor, normalized with leading coefficient 1.
    pub fn gcd(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let g = gcd_inner(self, other);
        g.make_monic()
    }

    pub fn make_monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coeff();
        self.scale(&(Rational::one() / lc))
    }

    /// Squarefree part: p / gcd(p, ∂₁p, …, ∂ₙp).
    pub fn squarefree_part(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.clone();
        for slot in 0..self.nvars {
            g = g.gcd(&self.derive(slot));
        }
        self.exact_div(&g).expect("gcd divides").make_monic()
    }
}

/// View as univariate in `slot`: coefficients (slot-free polys) by exponent.
fn to_univariate(p: &Poly, slot: usize) -> Vec<Poly> {
    let deg = p.degree_in(slot) as usize;
    let mut coeffs = vec![Poly::zero(p.nvars); deg + 1];
    for (e, c) in &p.terms {
        let k = e[slot] as usize;
        let mut e2 = e.clone();
        e2[slot] = 0;
        coeffs[k] = coeffs[k].add(&Poly::monomial(p.nvars, e2, c.clone()));
    }
    coeffs
}

fn from_univariate(coeffs: &[Poly], slot: usize) -> Poly {
    let nvars = coeffs.first().map(|p| p.nvars).unwrap_or(0);
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        for (e, q) in &c.terms {
            let mut e2 = e.clone();
            e2[slot] += k as u32;
            terms.push((e2, q.clone()));
        }
    }
    Poly::from_terms(nvars, terms)
}

fn univ_degree(coeffs: &[Poly]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

/// Pseudo-remainder of f by g, both univariate in `slot` with slot-free
/// polynomial coefficients.
fn pseudo_rem(f: &[Poly], g: &[Poly]) -> Vec<Poly> {
    let df = match univ_degree(f) {
        Some(d) => d,
        None => return vec![],
    };
    let dg = univ_degree(g).expect("pseudo_rem by zero");
    if df < dg {
        return f.to_vec();
    }
    let lg = g[dg].clone();
    let mut r = f.to_vec();
    loop {
        let dr = match univ_degree(&r) {
            Some(d) => d,
            None => return vec![],
        };
        if dr < dg {
            return r;
        }
        let lr = r[dr].clone();
        // r := lg*r - lr*x^(dr-dg)*g
        let mut next = vec![Poly::zero(lr.nvars); dr.max(dg)];
        next.resize(dr + 1, Poly::zero(lr.nvars));
        for (k, c) in r.iter().enumerate().take(dr + 1) {
            next[k] = c.mul(&lg);
        }
        for (k, c) in g.iter().enumerate() {
            if k + dr - dg <= dr {
                let t = c.mul(&lr);
                next[k + dr - dg] = next[k + dr - dg].sub(&t);
            }
        }
        r = next;
    }
}

fn content_of_univariate(coeffs: &[Poly]) -> Poly {
    let nvars = coeffs.first().map(|p| p.nvars).unwrap_or(0);
    let mut g = Poly::zero(nvars);
    for c in coeffs {
        if !c.is_zero() {
            g = gcd_inner(&g, c);
        }
    }
    g
}

fn gcd_inner(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.make_monic();
    }
    if b.is_zero() {
        return a.make_monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.nvars);
    }
    // Main variable: highest slot appearing in either operand.
    let slot = (0..a.nvars)
        .rev()
        .find(|&s| a.degree_in(s) > 0 || b.degree_in(s) > 0)
        .expect("nonconstant polynomial has a variable");
    if a.degree_in(slot) == 0 || b.degree_in(slot) == 0 {
        // One operand is free of the main variable: gcd divides its content.
        let (free, mixed) = if a.degree_in(slot) == 0 { (a, b) } else { (b, a) };
        let cont = content_of_univariate(&to_univariate(mixed, slot));
        return gcd_inner(free, &cont);
    }
    let ua = to_univariate(a, slot);
    let ub = to_univariate(b, slot);
    let ca = content_of_univariate(&ua);
    let cb = content_of_univariate(&ub);
    let cg = gcd_inner(&ca, &cb);
    let pa: Vec<Poly> = ua.iter().map(|c| c.exact_div(&ca).expect("content divides")).collect();
    let pb: Vec<Poly> = ub.iter().map(|c| c.exact_div(&cb).expect("content divides")).collect();
    // Primitive polynomial remainder sequence, rationally renormalized at
    // every step to keep the ℚ-coefficients from exploding.
    let (mut f, mut g) = if univ_degree(&pa) >= univ_degree(&pb) { (pa, pb) } else { (pb, pa) };
    f = univ_monic(f);
    g = univ_monic(g);
    loop {
        let r = pseudo_rem(&f, &g);
        if univ_degree(&r).is_none() {
            let gp = from_univariate(&g, slot);
            let cont = content_of_univariate(&to_univariate(&gp, slot));
            let prim = gp.exact_div(&cont).expect("content divides");
            return cg.mul(&prim);
        }
        let rc = content_of_univariate(&r);
        let rp: Vec<Poly> = r.iter().map(|c| c.exact_div(&rc).expect("content divides")).collect();
        f = g;
        g = univ_monic(rp);
    }
}

/// Scale a univariate-coefficient list so the leading coefficient polynomial
/// has rational leading coefficient 1.
fn univ_monic(cs: Vec<Poly>) -> Vec<Poly> {
    if let Some(d) = univ_degree(&cs) {
        let lc = cs[d].leading_coeff();
        if !lc.is_one() {
            let inv = Rational::one() / lc;
            return cs.iter().map(|c| c.scale(&inv)).collect();
        }
    }
    cs
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(s, &k)| {
                    let v = format!("v{}", s + 1);
                    if k == 1 { v } else { format!("{v}^{k}") }
                })
                .collect();
            let cs = c.abs().to_string();
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{cs}")?;
            } else if cs == "1" {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{cs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn arithmetic_basics() {
        let p = x(0).add(&x(1)); // x1 + x2
        let q = p.mul(&p);
        let r = q.exact_div(&p).unwrap();
        assert_eq!(r, p);
        assert!(q.exact_div(&x(0)).is_none());
    }

    #[test]
    fn gcd_multivariate() {
        let p = x(0).add(&x(1)); // x1+x2
        let a = p.mul(&p).mul(&x(0)); // x1(x1+x2)^2
        let b = p.mul(&x(1)); // x2(x1+x2)
        let g = a.gcd(&b);
        assert_eq!(g, p.make_monic());
    }

    #[test]
    fn gcd_constant_poly() {
        let a = Poly::constant(2, rat(3, 2));
        let b = x(0);
        assert!(a.gcd(&b).is_one());
        assert_eq!(Poly::zero(2).gcd(&b), b);
    }

    #[test]
    fn derive_power() {
        let p = x(0).pow(3); // x1^3
        let d = p.derive(0);
        assert_eq!(d, x(0).pow(2).scale(&rat_int(3)));
        assert!(p.derive(1).is_zero());
    }

    #[test]
    fn squarefree() {
        let p = x(0).pow(2).mul(&x(1)); // x1^2 x2
        assert_eq!(p.squarefree_part(), x(0).mul(&x(1)));
    }
}
