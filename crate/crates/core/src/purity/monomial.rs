use crate::{Error, Result};
use std::fmt;

/// Monomial ideal in k[χ₁..χₙ], kept as a minimal generating set of exponent
/// vectors (no generator divides another).
#[derive(Clone, PartialEq, Eq)]
pub struct MonomialIdeal {
    pub nvars: usize,
    pub gens: Vec<Vec<u32>>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MonomialIdeal {
    pub fn new(nvars: usize, gens: Vec<Vec<u32>>) -> Result<MonomialIdeal> {
        if gens.iter().any(|g| g.len() != nvars) {
            return Err(Error::NotMonomial);
        }
        let mut ideal = MonomialIdeal { nvars, gens };
        ideal.minimalize();
        Ok(ideal)
    }

    fn minimalize(&mut self) {
        let mut gens = self.gens.clone();
        gens.sort();
        gens.dedup();
        let mut keep: Vec<Vec<u32>> = Vec::new();
        for g in &gens {
            if !gens.iter().any(|h| h != g && divides(h, g)) {
                keep.push(g.clone());
            }
        }
        keep.sort();
        self.gens = keep;
    }

    /// Intersection via pairwise lcm followed by minimalization.
    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        assert_eq!(self.nvars, other.nvars);
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.iter().zip(b).map(|(x, y)| *x.max(y)).collect());
            }
        }
        MonomialIdeal::new(self.nvars, gens).expect("lcm keeps the shape")
    }

    /// Radical via the squarefree supports of the generators.
    pub fn radical(&self) -> MonomialIdeal {
        let gens = self
            .gens
            .iter()
            .map(|g| g.iter().map(|&e| if e > 0 { 1 } else { 0 }).collect())
            .collect();
        MonomialIdeal::new(self.nvars, gens).expect("support keeps the shape")
    }

    /// Ideal equality via mutual divisibility of the minimal generators.
    pub fn equal(&self, other: &MonomialIdeal) -> bool {
        let contains = |a: &MonomialIdeal, b: &MonomialIdeal| {
            b.gens.iter().all(|g| a.gens.iter().any(|h| divides(h, g)))
        };
        contains(self, other) && contains(other, self)
    }
}

impl fmt::Debug for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .gens
            .iter()
            .map(|g| {
                let parts: Vec<String> = g
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        if e == 1 {
                            format!("chi{}", i + 1)
                        } else {
                            format!("chi{}^{}", i + 1, e)
                        }
                    })
                    .collect();
                if parts.is_empty() { "1".into() } else { parts.join("*") }
            })
            .collect();
        write!(f, "({})", gens.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(nvars: usize, gens: &[&[u32]]) -> MonomialIdeal {
        MonomialIdeal::new(nvars, gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    #[test]
    fn intersection_identity_of_the_introduction() {
        // (χ1) ∩ (χ1, χ2)² = (χ1², χ1χ2)
        let a = ideal(2, &[&[1, 0]]);
        let b = ideal(2, &[&[2, 0], &[1, 1], &[0, 2]]);
        let i = a.intersect(&b);
        assert_eq!(i, ideal(2, &[&[2, 0], &[1, 1]]));
        // the version carried by the system y22 = y12 = 0:
        // (χ2², χ1χ2) = (χ2) ∩ (χ1, χ2)²
        let c = ideal(2, &[&[0, 1]]);
        let j = c.intersect(&b);
        assert!(j.equal(&ideal(2, &[&[0, 2], &[1, 1]])));
    }

    #[test]
    fn radical_of_the_characteristic_ideal() {
        // rad(χ3², χ2χ3, χ2², χ1χ3) = (χ2, χ3)
        let a = ideal(3, &[&[0, 0, 2], &[0, 1, 1], &[0, 2, 0], &[1, 0, 1]]);
        assert!(a.radical().equal(&ideal(3, &[&[0, 1, 0], &[0, 0, 1]])));
    }

    #[test]
    fn unmixed_intersection_of_example_5_1() {
        // (χ3, χ1) ∩ (χ3, χ2) = (χ3, χ1χ2)
        let a = ideal(3, &[&[0, 0, 1], &[1, 0, 0]]);
        let b = ideal(3, &[&[0, 0, 1], &[0, 1, 0]]);
        assert!(a.intersect(&b).equal(&ideal(3, &[&[0, 0, 1], &[1, 1, 0]])));
    }

    #[test]
    fn non_monomial_input_is_rejected() {
        assert!(matches!(
            MonomialIdeal::new(2, vec![vec![1, 0, 0]]),
            Err(Error::NotMonomial)
        ));
    }
}
