use super::{Poly, Rational};
use crate::{Error, Result};
use num_traits::One;
use std::fmt;

/// Element of the rational-function field in canonical reduced form:
/// gcd(num, den) = 1 and den monic in the graded-lex order, so equality is
/// structural.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun {
    pub num: Poly,
    pub den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> RatFun {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let mut r = RatFun { num, den };
        r.reduce();
        r
    }

    pub fn from_poly(p: Poly) -> RatFun {
        let n = p.nvars;
        RatFun { num: p, den: Poly::one(n) }
    }

    pub fn zero(nvars: usize) -> RatFun {
        RatFun::from_poly(Poly::zero(nvars))
    }

    pub fn one(nvars: usize) -> RatFun {
        RatFun::from_poly(Poly::one(nvars))
    }

    pub fn constant(nvars: usize, c: Rational) -> RatFun {
        RatFun::from_poly(Poly::constant(nvars, c))
    }

    pub fn var(nvars: usize, slot: usize) -> RatFun {
        RatFun::from_poly(Poly::var(nvars, slot))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one(self.num.nvars);
            return;
        }
        if !self.den.is_constant() {
            let g = self.num.gcd(&self.den);
            if !g.is_constant() {
                self.num = self.num.exact_div(&g).expect("gcd divides");
                self.den = self.den.exact_div(&g).expect("gcd divides");
            }
        }
        let lc = self.den.leading_coeff();
        if !lc.is_one() {
            let inv = Rational::one() / lc;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn extend_vars(&self, nvars: usize) -> RatFun {
        RatFun { num: self.num.extend_vars(nvars), den: self.den.extend_vars(nvars) }
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, c: &Rational) -> RatFun {
        RatFun::new(self.num.scale(c), self.den.clone())
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun::new(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun::new(self.den.clone(), self.num.clone()))
    }

    /// Raw partial derivative with respect to a variable slot (0-based);
    /// slots beyond the layout differentiate to zero.
    pub fn derive_slot(&self, slot: usize) -> RatFun {
        if slot >= self.nvars() {
            return RatFun::zero(self.nvars());
        }
        let dn = self.num.derive(slot);
        let dd = self.den.derive(slot);
        if dd.is_zero() {
            return RatFun::new(dn, self.den.clone());
        }
        // quotient rule: (n'd - nd') / d^2
        RatFun::new(dn.mul(&self.den).sub(&self.num.mul(&dd)), self.den.mul(&self.den))
    }

    pub fn to_string_named(&self, names: &[String]) -> String {
        let name = |s: String| {
            let mut out = s;
            for (i, n) in names.iter().enumerate() {
                out = out.replace(&format!("v{}", i + 1), n);
            }
            out
        };
        if self.den.is_one() {
            name(self.num.to_string())
        } else {
            let n = if self.num.terms.len() > 1 {
                format!("({})", self.num)
            } else {
                self.num.to_string()
            };
            let d = if self.den.terms.len() > 1 {
                format!("({})", self.den)
            } else {
                self.den.to_string()
            };
            name(format!("{n}/{d}"))
        }
    }
}

/// Field operation selector mirroring the external text interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Dispatch a field operation; `Div` by zero reports `DivisionByZero`.
pub fn field_arith(a: &RatFun, b: &RatFun, op: FieldOp) -> Result<RatFun> {
    Ok(match op {
        FieldOp::Add => a.add(b),
        FieldOp::Sub => a.sub(b),
        FieldOp::Mul => a.mul(b),
        FieldOp::Div => a.div(b)?,
    })
}

/// Derivation ∂_i (1-based) of the field with `nx` differentiable slots.
pub fn derive(a: &RatFun, i: usize, n: usize, nx: usize) -> Result<RatFun> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange(i, n));
    }
    if i <= nx {
        Ok(a.derive_slot(i - 1))
    } else {
        Ok(RatFun::zero(a.nvars()))
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_named(&[]))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_int, FieldCtx};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn x(i: usize) -> RatFun {
        RatFun::var(2, i)
    }

    #[test]
    fn sub_self_is_zero() {
        let a = x(0).div(&x(1)).unwrap();
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn inverse_multiplies_to_one() {
        let a = x(0).inv().unwrap();
        assert!(a.mul(&x(0)).is_one());
    }

    #[test]
    fn division_verified_by_remultiplying() {
        let s = x(0).add(&x(1));
        let sq = s.mul(&s);
        let q = sq.div(&s).unwrap();
        assert_eq!(q, s);
        assert_eq!(q.mul(&s), sq);
    }

    #[test]
    fn division_by_zero_reported() {
        let z = RatFun::zero(2);
        assert!(matches!(x(0).div(&z), Err(crate::Error::DivisionByZero)));
        assert!(matches!(
            field_arith(&x(0), &z, FieldOp::Div),
            Err(crate::Error::DivisionByZero)
        ));
    }

    #[test]
    fn derive_examples() {
        // ∂_2 x^2 = 1
        assert!(derive(&x(1), 2, 2, 2).unwrap().is_one());
        // derivation kills constants
        let c = RatFun::constant(2, rat_int(7));
        assert!(derive(&c, 1, 2, 2).unwrap().is_zero());
        // quotient rule: ∂_1 (1/x^1) = -1/(x^1)^2
        let inv = x(0).inv().unwrap();
        let d = derive(&inv, 1, 2, 2).unwrap();
        let expected = RatFun::new(
            Poly::constant(2, rat_int(-1)),
            Poly::var(2, 0).mul(&Poly::var(2, 0)),
        );
        assert_eq!(d, expected);
        // Leibniz on x^1 * (1/x^1) = 1
        let lhs = derive(&x(0).mul(&inv), 1, 2, 2).unwrap();
        let rhs = derive(&x(0), 1, 2, 2)
            .unwrap()
            .mul(&inv)
            .add(&x(0).mul(&derive(&inv, 1, 2, 2).unwrap()));
        assert_eq!(lhs, rhs);
        assert!(lhs.is_zero());
    }

    #[test]
    fn constant_field_derivations_vanish() {
        let ctx = FieldCtx::constants();
        let c = RatFun::constant(ctx.nvars, rat_int(3));
        for i in 1..=3 {
            assert!(derive(&c, i, 3, ctx.nx).unwrap().is_zero());
        }
        assert!(matches!(derive(&c, 4, 3, ctx.nx), Err(crate::Error::IndexOutOfRange(4, 3))));
    }

    pub(crate) fn random_ratfun(rng: &mut ChaCha8Rng, nvars: usize) -> RatFun {
        let mut rand_poly = |max_terms: usize, nonzero: bool| loop {
            let t = rng.gen_range(if nonzero { 1 } else { 0 }..=max_terms);
            let terms: Vec<(Vec<u32>, Rational)> = (0..t)
                .map(|_| {
                    let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=2)).collect();
                    let c = rat_int(rng.gen_range(-4i64..=4));
                    (e, c)
                })
                .collect();
            let p = Poly::from_terms(nvars, terms);
            if !nonzero || !p.is_zero() {
                return p;
            }
        };
        let num = rand_poly(3, false);
        let den = rand_poly(2, true);
        RatFun::new(num, den)
    }

    #[test]
    fn field_axioms_on_seeded_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let a = random_ratfun(&mut rng, 2);
            let b = random_ratfun(&mut rng, 2);
            let c = random_ratfun(&mut rng, 2);
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            // canonical-form equality is an equivalence relation
            assert_eq!(a, a);
            if a == b {
                assert_eq!(b, a);
            }
        }
    }

    #[test]
    fn derivations_commute_and_obey_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = random_ratfun(&mut rng, 2);
            let b = random_ratfun(&mut rng, 2);
            let d12 = a.derive_slot(0).derive_slot(1);
            let d21 = a.derive_slot(1).derive_slot(0);
            assert_eq!(d12, d21);
            let lhs = a.mul(&b).derive_slot(0);
            let rhs = a.derive_slot(0).mul(&b).add(&a.mul(&b.derive_slot(0)));
            assert_eq!(lhs, rhs);
        }
    }
}
