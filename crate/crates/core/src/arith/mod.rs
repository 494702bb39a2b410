//! Canonical exact arithmetic: ℚ, multivariate polynomials over ℚ, and the
//! rational-function field K = ℚ(x¹..xⁿ) with its commuting derivations ∂_i.
//!
//! Variable slots of a polynomial are laid out as
//! `[x^1 .. x^nx | named constants | localization parameters χ]`.
//! Only the first `nx` slots are touched by the derivations, so constants and
//! χ-parameters are inert without any special casing.

mod poly;
mod ratfun;

pub use poly::Poly;
pub use ratfun::{derive, field_arith, FieldOp, RatFun};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar (numerator/denominator in lowest terms, denominator
/// positive — `BigRational` maintains exactly these invariants).
pub type Rational = BigRational;

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Describes the coefficient field: how many variable slots exist in total
/// and how many of them are differentiable x-variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    /// Number of differentiable variables x^1..x^nx (0 for K = ℚ).
    pub nx: usize,
    /// Total slot count: nx + named constants + χ parameters.
    pub nvars: usize,
    /// Display names, one per slot.
    pub names: Vec<String>,
}

impl FieldCtx {
    /// Constant field ℚ.
    pub fn constants() -> Self {
        FieldCtx { nx: 0, nvars: 0, names: vec![] }
    }

    /// ℚ(x¹..xⁿ) with n differentiable variables.
    pub fn rational(n: usize) -> Self {
        FieldCtx {
            nx: n,
            nvars: n,
            names: (1..=n).map(|i| format!("x{i}")).collect(),
        }
    }

    /// Append an inert slot (named constant or χ parameter).
    pub fn with_slot(&self, name: &str) -> Self {
        let mut names = self.names.clone();
        names.push(name.to_string());
        FieldCtx { nx: self.nx, nvars: self.nvars + 1, names }
    }

    /// Append χ-parameters χ_1..χ_k used by relative localization.
    pub fn with_chi(&self, k: usize) -> Self {
        let mut ctx = self.clone();
        for i in 1..=k {
            ctx = ctx.with_slot(&format!("chi{i}"));
        }
        ctx
    }

    pub fn name(&self, slot: usize) -> String {
        self.names
            .get(slot)
            .cloned()
            .unwrap_or_else(|| format!("v{}", slot + 1))
    }
}
