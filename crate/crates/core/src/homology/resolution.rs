use super::cc::cc_of_raw;
use super::janet::{janet_sequence, JanetSequence};
use crate::involution::{complete_to_involution, Characters, CompletionConfig, InvolutiveSystem};
use crate::jets::JetSystem;
use crate::ore::OperatorMatrix;
use crate::Result;

/// Finitely presented left D-module M = coker(D^p → D^m) together with the
/// cached involutive completion of its jet system.
#[derive(Clone)]
pub struct Presentation {
    pub matrix: OperatorMatrix,
    pub inv: InvolutiveSystem,
    pub cfg: CompletionConfig,
}

impl Presentation {
    pub fn new(matrix: OperatorMatrix, cfg: &CompletionConfig) -> Result<Presentation> {
        let sys = JetSystem::from_operator_matrix(&matrix, 1);
        let inv = complete_to_involution(&sys, cfg)?;
        Ok(Presentation { matrix, inv, cfg: cfg.clone() })
    }

    pub fn m(&self) -> usize {
        self.matrix.cols
    }

    pub fn characters(&self) -> Characters {
        self.inv.characters()
    }

    pub fn codimension(&self) -> usize {
        self.characters().cd
    }

    pub fn differential_rank(&self) -> usize {
        self.characters().rank
    }

    pub fn hilbert_values(&self, up_to: u32) -> Vec<usize> {
        (0..=up_to).map(|r| self.inv.hilbert_value(r)).collect()
    }

    /// Equivalence proxy: same characters and the same Hilbert values for
    /// r ≤ 4.
    pub fn equivalent(&self, other: &Presentation) -> bool {
        self.characters() == other.characters() && self.hilbert_values(4) == other.hilbert_values(4)
    }

    pub fn janet(&self) -> Result<JanetSequence> {
        janet_sequence(&self.inv, &self.cfg)
    }
}

impl std::fmt::Debug for Presentation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Presentation({}x{}, cd={})", self.matrix.rows, self.matrix.cols, self.codimension())
    }
}

/// Free resolution 0 → D^{r_ℓ} → … → D^{r_1} → D^{r_0} → M → 0 with
/// composition-zero certified maps.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    /// [m = r₀, r₁, …, r_ℓ]
    pub ranks: Vec<usize>,
    /// maps[t]: D^{r_{t+1}} → D^{r_t} as an r_{t+1}×r_t matrix
    pub maps: Vec<OperatorMatrix>,
}

impl FreeResolution {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    fn certify(&self) -> bool {
        for w in self.maps.windows(2) {
            if !w[1].mul(&w[0]).is_zero() {
                return false;
            }
        }
        true
    }
}

/// Strict free resolution through the Janet sequence: the module version of
/// 0 → Θ → E → F₀ → … read backwards.
pub fn free_resolution(pres: &Presentation) -> Result<FreeResolution> {
    let seq = pres.janet()?;
    let mut ranks = vec![pres.m()];
    ranks.extend(seq.dims[1..].iter().cloned());
    let res = FreeResolution { ranks, maps: seq.stages.clone() };
    debug_assert!(res.certify());
    Ok(res)
}

/// Resolution built from the raw presentation by iterated compatibility
/// conditions of the uncompleted matrices (the short route).
pub fn short_resolution(matrix: &OperatorMatrix, cfg: &CompletionConfig) -> Result<FreeResolution> {
    let mut ranks = vec![matrix.cols, matrix.rows];
    let mut maps = vec![matrix.clone()];
    let mut cur = matrix.clone();
    loop {
        let cc = cc_of_raw(&cur, cfg)?;
        if cc.rows == 0 {
            break;
        }
        if !cc.mul(&cur).is_zero() {
            return Err(crate::Error::NotInvolutive);
        }
        ranks.push(cc.rows);
        maps.push(cc.clone());
        cur = cc;
    }
    let res = FreeResolution { ranks, maps };
    debug_assert!(res.certify());
    Ok(res)
}
