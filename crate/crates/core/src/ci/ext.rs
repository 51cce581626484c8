use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::OperatorFamily;
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::polyring::PrimeField;

pub const DEFAULT_ATTEMPTS: usize = 32;

/// Matrices over `k` of `T_j : Ext^n_A(M, k) -> Ext^{n+2}_A(M, k)` for
/// `n` in `[0, length - 2]`; `T_j` in degree `n` is the transpose of
/// `t_j^(n+2)` modulo the maximal ideal.
#[derive(Clone, Debug)]
pub struct ExtAction {
    fp: PrimeField,
    betti: Vec<usize>,
    maps: Vec<Vec<FpMatrix>>,
}

impl ExtAction {
    pub fn new(ops: &OperatorFamily) -> Self {
        let maps = (0..ops.codim())
            .map(|j| (2..=ops.length()).map(|i| ops.operator(j, i).constant_part().transpose()).collect())
            .collect();
        ExtAction { fp: ops.ci().ring().field(), betti: ops.betti(), maps }
    }

    pub fn codim(&self) -> usize {
        self.maps.len()
    }

    /// Degrees `n` for which `T_j` is available, as an inclusive range.
    pub fn window(&self) -> (usize, usize) {
        (0, self.betti.len().saturating_sub(3))
    }

    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    /// `T_j` on `Ext^n`, a `beta_{n+2} x beta_n` matrix.
    pub fn map(&self, j: usize, n: usize) -> &FpMatrix {
        &self.maps[j][n]
    }

    /// `sum_j a_j T_j` on `Ext^n`.
    pub fn combination(&self, a: &[u32], n: usize) -> FpMatrix {
        let mut acc = FpMatrix::zeros(self.betti[n + 2], self.betti[n]);
        for (j, &c) in a.iter().enumerate() {
            if c != 0 {
                acc = acc.add(&self.maps[j][n].scale(c, self.fp), self.fp);
            }
        }
        acc
    }

    /// `T_a T_b - T_b T_a` on `Ext^n`, for `n + 4 <= length`.
    pub fn commutator(&self, a: usize, b: usize, n: usize) -> FpMatrix {
        let ab = self.maps[a][n + 2].mul(&self.maps[b][n], self.fp);
        let ba = self.maps[b][n + 2].mul(&self.maps[a][n], self.fp);
        ab.add(&ba.scale(self.fp.neg(1), self.fp), self.fp)
    }

    /// First `(a, b, n)` with a nonzero commutator.
    pub fn commutator_witness(&self) -> Option<(usize, usize, usize)> {
        let top = self.betti.len().checked_sub(5)?;
        for n in 0..=top {
            for a in 0..self.codim() {
                for b in a + 1..self.codim() {
                    if !self.commutator(a, b, n).is_zero() {
                        return Some((a, b, n));
                    }
                }
            }
        }
        None
    }

    pub fn commutators_vanish(&self) -> bool {
        self.commutator_witness().is_none()
    }

    /// Whether `sum_j a_j T_j` is injective on `Ext^n`; a zero source counts
    /// as injective.
    pub fn is_injective(&self, a: &[u32], n: usize) -> bool {
        self.combination(a, n).rank(self.fp) == self.betti[n]
    }
}

/// Random `xi = sum_j a_j t_j`, `a` uniform in `k^c \ {0}`, until `xi` is
/// injective on `Ext^n` for every `n` in the inclusive `window`.
pub fn filter_regular_search(ext: &ExtAction, window: (usize, usize), attempts: usize, seed: u64) -> Result<Vec<u32>> {
    let (lo, hi) = window;
    let (_, top) = ext.window();
    if lo > hi || hi > top || ext.betti.len() < 3 {
        return Err(Error::OutOfRange(format!("window [{lo}, {hi}] outside the computed range [0, {top}]")));
    }
    if ext.codim() == 0 {
        return Err(Error::Precondition("no operators when c = 0".into()));
    }
    let p = ext.fp.characteristic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Vec::new();
    for _ in 0..attempts {
        let a: Vec<u32> = loop {
            let a: Vec<u32> = (0..ext.codim()).map(|_| rng.random_range(0..p)).collect();
            if a.iter().any(|&x| x != 0) {
                break a;
            }
        };
        let ranks: Vec<(usize, usize, usize)> = (lo..=hi)
            .map(|n| (n, ext.combination(&a, n).rank(ext.fp), ext.betti[n]))
            .collect();
        if ranks.iter().all(|&(_, r, b)| r == b) {
            return Ok(a);
        }
        last = ranks.into_iter().filter(|&(_, r, b)| r != b).collect();
    }
    let detail: Vec<String> = last.iter().map(|(n, r, b)| format!("n={n}: rank {r} < {b}")).collect();
    Err(Error::SearchExhausted(format!("{attempts} attempts; last failure {}", detail.join(", "))))
}
