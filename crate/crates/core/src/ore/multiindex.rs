use std::cmp::Ordering;
use std::fmt;

/// Multi-index μ = (μ₁..μₙ) of derivation exponents.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit index 1_i for a 1-based direction i.
    pub fn unit(n: usize, i: usize) -> Self {
        assert!((1..=n).contains(&i));
        let mut v = vec![0; n];
        v[i - 1] = 1;
        MultiIndex(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Length |μ| = μ₁+…+μₙ.
    pub fn len(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Class of μ: the smallest 1-based i with μ_i ≠ 0 (None for |μ| = 0).
    pub fn class(&self) -> Option<usize> {
        self.0.iter().position(|&e| e != 0).map(|p| p + 1)
    }

    /// μ + 1_i for a 1-based direction i.
    pub fn bump(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[i - 1] += 1;
        MultiIndex(v)
    }

    /// μ − 1_i when μ_i > 0.
    pub fn lower(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i - 1] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i - 1] -= 1;
        Some(MultiIndex(v))
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All multi-indices of the given exact length, in descending
    /// class-respecting order (largest first).
    pub fn all_of_length(n: usize, len: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(n: usize, slot: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if slot == n - 1 {
                cur[slot] = rem;
                out.push(MultiIndex(cur.clone()));
                cur[slot] = 0;
                return;
            }
            for e in 0..=rem {
                cur[slot] = e;
                rec(n, slot + 1, rem - e, cur, out);
                cur[slot] = 0;
            }
        }
        if n == 0 {
            if len == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(n, 0, len, &mut cur, &mut out);
        out.sort_by(|a, b| b.cmp_class_order(a));
        out
    }

    /// All multi-indices of length ≤ len.
    pub fn all_up_to(n: usize, len: u32) -> Vec<MultiIndex> {
        (0..=len).flat_map(|l| MultiIndex::all_of_length(n, l)).collect()
    }

    /// Class-respecting comparison used everywhere for jets and operators:
    /// longer is larger; at equal length, μ > ν when the first nonzero entry
    /// of μ − ν is negative (groups same-length indices by descending class).
    pub fn cmp_class_order(&self, other: &MultiIndex) -> Ordering {
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "");
        }
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                write!(f, "{}", i + 1)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_and_length() {
        let mu = MultiIndex(vec![0, 1, 1]);
        assert_eq!(mu.len(), 2);
        assert_eq!(mu.class(), Some(2));
        assert_eq!(MultiIndex::zero(3).class(), None);
        assert_eq!(mu.bump(1).0, vec![1, 1, 1]);
    }

    #[test]
    fn class_order_groups_by_descending_class() {
        // order-2 indices in n=3, largest first:
        // 33 > 23 > 22 > 13 > 12 > 11
        let sorted = MultiIndex::all_of_length(3, 2);
        let expect = vec![
            vec![0, 0, 2],
            vec![0, 1, 1],
            vec![0, 2, 0],
            vec![1, 0, 1],
            vec![1, 1, 0],
            vec![2, 0, 0],
        ];
        assert_eq!(sorted.iter().map(|m| m.0.clone()).collect::<Vec<_>>(), expect);
    }
}
