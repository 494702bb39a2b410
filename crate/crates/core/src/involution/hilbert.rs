use super::board::binom;
use super::InvolutiveSystem;
use crate::arith::{rat_int, Rational};
use num_traits::Zero;

impl InvolutiveSystem {
    /// dim R_q of the involutive system itself.
    pub fn dim_rq(&self) -> usize {
        self.sys.solution_dim()
    }

    /// dim g_{q+s} for s ≥ 1 from the characters: a parametric top jet of
    /// class i spawns the degree-s monomials in its i multiplicative
    /// variables, C(s+i−1, i−1) of them.
    pub fn symbol_dim_at(&self, s: u32) -> usize {
        if s == 0 {
            return self.alpha.iter().sum();
        }
        self.alpha
            .iter()
            .enumerate()
            .map(|(idx, &a)| {
                let i = idx + 1;
                a * binom(s as usize + i - 1, i - 1)
            })
            .sum()
    }

    /// Hilbert function dim R_{q+r}.
    pub fn hilbert_value(&self, r: u32) -> usize {
        let mut acc = self.dim_rq();
        for s in 1..=r {
            acc += self.symbol_dim_at(s);
        }
        acc
    }

    /// Closed-form Hilbert polynomial in r: coefficients c_0..c_d with
    /// dim R_{q+r} = Σ c_t r^t, valid for every r ≥ 0.
    pub fn hilbert_polynomial(&self) -> Vec<Rational> {
        // p(r) = dim R_q + Σ_i α^i (C(r+i, i) − 1)
        let n = self.n();
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[0] = rat_int(self.dim_rq() as i64);
        for (idx, &a) in self.alpha.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let i = idx + 1;
            // C(r+i, i) = Π_{t=1..i} (r+t) / i!
            let mut poly = vec![rat_int(1)]; // coefficients of Π (r+t)
            for t in 1..=i {
                let mut next = vec![Rational::zero(); poly.len() + 1];
                for (d, c) in poly.iter().enumerate() {
                    next[d + 1] += c; // r · c r^d
                    next[d] += c * rat_int(t as i64);
                }
                poly = next;
            }
            let fact: i64 = (1..=i as i64).product();
            let scale = rat_int(a as i64) / rat_int(fact);
            for (d, c) in poly.iter().enumerate() {
                coeffs[d] += c * &scale;
            }
            coeffs[0] -= rat_int(a as i64);
        }
        while coeffs.len() > 1 && coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        coeffs
    }

    /// Evaluate the closed form at r (for cross-checking against
    /// `hilbert_value`).
    pub fn hilbert_poly_eval(&self, r: u32) -> Rational {
        let coeffs = self.hilbert_polynomial();
        let mut acc = Rational::zero();
        let mut pw = rat_int(1);
        let rr = rat_int(r as i64);
        for c in coeffs {
            acc += c * &pw;
            pw *= &rr;
        }
        acc
    }
}
