use crate::ore::MultiIndex;
use std::cmp::Ordering;
use std::fmt;

/// Jet coordinate y^k_μ (k is 0-based internally, displayed 1-based).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct JetCoord {
    pub k: usize,
    pub mu: MultiIndex,
}

impl JetCoord {
    pub fn new(k: usize, mu: MultiIndex) -> Self {
        JetCoord { k, mu }
    }

    pub fn order(&self) -> u32 {
        self.mu.len()
    }

    /// All jets of order ≤ q for m unknowns, largest first in the standard order.
    pub fn all_up_to(n: usize, m: usize, q: u32) -> Vec<JetCoord> {
        let mut out = Vec::new();
        for mu in MultiIndex::all_up_to(n, q) {
            for k in 0..m {
                out.push(JetCoord::new(k, mu.clone()));
            }
        }
        out.sort_by(|a, b| JetOrder::Standard.cmp(b, a));
        out
    }

    /// All jets of exact order q, largest first.
    pub fn all_of_order(n: usize, m: usize, q: u32) -> Vec<JetCoord> {
        let mut out = Vec::new();
        for mu in MultiIndex::all_of_length(n, q) {
            for k in 0..m {
                out.push(JetCoord::new(k, mu.clone()));
            }
        }
        out.sort_by(|a, b| JetOrder::Standard.cmp(b, a));
        out
    }
}

impl fmt::Display for JetCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mu.is_empty() {
            write!(f, "y{}", self.k + 1)
        } else {
            write!(f, "y{}_{}", self.k + 1, self.mu)
        }
    }
}

impl fmt::Debug for JetCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Total order on jet coordinates used when choosing pivots.
///
/// The standard order is the global contract: order |μ| ascending, then the
/// class-respecting order on μ (class descending, reverse-lex ties), then
/// unknown index with smaller k ranked larger. `Block` promotes a chosen set
/// of unknowns above all others, which turns echelonization into elimination.
#[derive(Clone, Debug)]
pub enum JetOrder {
    Standard,
    Block { high: Vec<bool> },
}

impl JetOrder {
    /// Greater means "a is the larger jet" (preferred as pivot).
    pub fn cmp(&self, a: &JetCoord, b: &JetCoord) -> Ordering {
        if let JetOrder::Block { high } = self {
            match high[a.k].cmp(&high[b.k]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        match a.mu.cmp_class_order(&b.mu) {
            Ordering::Equal => b.k.cmp(&a.k),
            o => o,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jc(k: usize, mu: Vec<u32>) -> JetCoord {
        JetCoord::new(k, MultiIndex(mu))
    }

    #[test]
    fn standard_order_matches_global_contract() {
        let o = JetOrder::Standard;
        // degree dominates
        assert_eq!(o.cmp(&jc(0, vec![1, 1, 1]), &jc(0, vec![0, 2, 0])), Ordering::Greater);
        // same degree: class descending (y33 > y23 > y22 > y13)
        assert_eq!(o.cmp(&jc(0, vec![0, 0, 2]), &jc(0, vec![0, 1, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&jc(0, vec![0, 1, 1]), &jc(0, vec![0, 2, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&jc(0, vec![0, 2, 0]), &jc(0, vec![1, 0, 1])), Ordering::Greater);
        // same μ: smaller unknown index ranks larger
        assert_eq!(o.cmp(&jc(0, vec![0, 0, 1]), &jc(1, vec![0, 0, 1])), Ordering::Greater);
    }

    #[test]
    fn block_order_promotes_high_unknowns() {
        let o = JetOrder::Block { high: vec![false, true] };
        // y2 (high) beats even a second-order jet of y1
        assert_eq!(o.cmp(&jc(1, vec![0, 0, 0]), &jc(0, vec![0, 0, 2])), Ordering::Greater);
    }
}
