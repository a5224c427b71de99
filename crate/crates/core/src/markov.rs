//! Seeded Markov chain over expression tags.

use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::sentiment::ExpressionTag;

const ROW_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpressionChain {
    pub states: Vec<ExpressionTag>,
    pub matrix: Vec<Vec<f64>>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChainError {
    NoStates,
    DuplicateState(ExpressionTag),
    Shape { rows: usize, states: usize },
    RowLength { row: usize, len: usize },
    NegativeEntry { row: usize, col: usize },
    RowSum { row: usize, sum: f64 },
    UnknownState(ExpressionTag),
}

impl fmt::Display for ChainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoStates => f.write_str("chain has no states"),
            Self::DuplicateState(t) => write!(f, "state {t} listed twice"),
            Self::Shape { rows, states } => write!(f, "matrix has {rows} rows for {states} states"),
            Self::RowLength { row, len } => write!(f, "row {row} has {len} entries"),
            Self::NegativeEntry { row, col } => write!(f, "entry ({row}, {col}) is negative or not finite"),
            Self::RowSum { row, sum } => write!(f, "row {row} sums to {sum}, expected 1"),
            Self::UnknownState(t) => write!(f, "state {t} is not in the chain"),
        }
    }
}

impl ExpressionChain {
    pub fn new(states: Vec<ExpressionTag>, matrix: Vec<Vec<f64>>, seed: u64) -> Result<Self, ChainError> {
        let chain = Self { states, matrix, seed };
        chain.validate()?;
        Ok(chain)
    }

    /// Every state equally likely from every state, over all five tags.
    pub fn uniform(seed: u64) -> Self {
        let n = ExpressionTag::ALL.len();
        let p = 1.0 / n as f64;
        Self {
            states: ExpressionTag::ALL.to_vec(),
            matrix: (0..n).map(|_| alloc::vec![p; n]).collect(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        let n = self.states.len();
        if n == 0 {
            return Err(ChainError::NoStates);
        }
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(ChainError::DuplicateState(*s));
            }
        }
        if self.matrix.len() != n {
            return Err(ChainError::Shape { rows: self.matrix.len(), states: n });
        }
        for (row, r) in self.matrix.iter().enumerate() {
            if r.len() != n {
                return Err(ChainError::RowLength { row, len: r.len() });
            }
            if let Some(col) = r.iter().position(|p| !p.is_finite() || *p < 0.0) {
                return Err(ChainError::NegativeEntry { row, col });
            }
            let sum: f64 = r.iter().sum();
            if (sum - 1.0).abs() > ROW_TOLERANCE {
                return Err(ChainError::RowSum { row, sum });
            }
        }
        Ok(())
    }

    pub fn index_of(&self, tag: ExpressionTag) -> Option<usize> {
        self.states.iter().position(|s| *s == tag)
    }
}

/// Uniform draw in `[0, 1)` for `(seed, step)`.
pub fn step_uniform(seed: u64, step: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(step);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Next state after `current`. A pure function of `(seed, step, current)`.
pub fn markov_next(chain: &ExpressionChain, current: ExpressionTag, step: u64) -> Result<ExpressionTag, ChainError> {
    let row = chain.index_of(current).ok_or(ChainError::UnknownState(current))?;
    let probs = chain.matrix.get(row).ok_or(ChainError::Shape { rows: chain.matrix.len(), states: chain.states.len() })?;
    let r = step_uniform(chain.seed, step);
    let mut acc = 0.0;
    let mut last = row;
    for (j, p) in probs.iter().enumerate() {
        if *p <= 0.0 {
            continue;
        }
        acc += p;
        last = j;
        if r < acc {
            return Ok(chain.states[j]);
        }
    }
    Ok(chain.states[last])
}

/// `len` states starting at `start`; element `k` is produced at step `k`.
pub fn markov_sequence(
    chain: &ExpressionChain,
    start: ExpressionTag,
    len: usize,
) -> Result<Vec<ExpressionTag>, ChainError> {
    chain.validate()?;
    let mut out = Vec::with_capacity(len);
    let mut cur = start;
    chain.index_of(cur).ok_or(ChainError::UnknownState(cur))?;
    for step in 0..len {
        cur = markov_next(chain, cur, step as u64)?;
        out.push(cur);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use ExpressionTag::*;

    #[test]
    fn identity_chain_stays_put() {
        let chain = ExpressionChain::new(
            vec![Neutral, Happy],
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            7,
        )
        .unwrap();
        for step in 0..100 {
            assert_eq!(markov_next(&chain, Happy, step).unwrap(), Happy);
            assert_eq!(markov_next(&chain, Neutral, step).unwrap(), Neutral);
        }
    }

    #[test]
    fn deterministic_row_always_jumps() {
        let chain = ExpressionChain::new(vec![Sad, Angry], vec![vec![0.0, 1.0], vec![1.0, 0.0]], 0).unwrap();
        let seq = markov_sequence(&chain, Sad, 6).unwrap();
        assert_eq!(seq, [Angry, Sad, Angry, Sad, Angry, Sad]);
    }

    #[test]
    fn pure_in_seed_and_step() {
        let chain = ExpressionChain::uniform(42);
        for step in 0..50 {
            assert_eq!(markov_next(&chain, Neutral, step), markov_next(&chain, Neutral, step));
        }
        let a = markov_sequence(&ExpressionChain::uniform(1), Neutral, 32).unwrap();
        let b = markov_sequence(&ExpressionChain::uniform(2), Neutral, 32).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn uniform_draws_in_unit_interval() {
        for step in 0..1000 {
            let r = step_uniform(9, step);
            assert!((0.0..1.0).contains(&r));
        }
    }

    #[test]
    fn frequencies_match_row() {
        let chain = ExpressionChain::new(
            vec![Neutral, Happy, Surprised],
            vec![vec![0.2, 0.5, 0.3], vec![0.2, 0.5, 0.3], vec![0.2, 0.5, 0.3]],
            123,
        )
        .unwrap();
        let n = 100_000u64;
        let mut counts = [0u32; 3];
        for step in 0..n {
            let t = markov_next(&chain, Neutral, step).unwrap();
            counts[chain.index_of(t).unwrap()] += 1;
        }
        for (c, p) in counts.iter().zip([0.2, 0.5, 0.3]) {
            let f = *c as f64 / n as f64;
            assert!((f - p).abs() < 0.01, "{f} vs {p}");
        }
    }

    #[test]
    fn validation() {
        assert_eq!(ExpressionChain::new(vec![], vec![], 0), Err(ChainError::NoStates));
        assert_eq!(
            ExpressionChain::new(vec![Sad, Sad], vec![vec![1.0, 0.0], vec![0.0, 1.0]], 0),
            Err(ChainError::DuplicateState(Sad))
        );
        assert!(matches!(
            ExpressionChain::new(vec![Sad, Happy], vec![vec![0.5, 0.4], vec![0.0, 1.0]], 0),
            Err(ChainError::RowSum { row: 0, .. })
        ));
        assert!(matches!(
            ExpressionChain::new(vec![Sad, Happy], vec![vec![1.5, -0.5], vec![0.0, 1.0]], 0),
            Err(ChainError::NegativeEntry { row: 0, col: 1 })
        ));
        assert!(matches!(
            ExpressionChain::new(vec![Sad], vec![vec![1.0], vec![1.0]], 0),
            Err(ChainError::Shape { .. })
        ));
        let chain = ExpressionChain::uniform(0);
        let small = ExpressionChain::new(vec![Sad], vec![vec![1.0]], 0).unwrap();
        assert_eq!(markov_next(&small, Happy, 0), Err(ChainError::UnknownState(Happy)));
        assert!(markov_next(&chain, Happy, 0).is_ok());
    }

    #[test]
    fn frozen_sequence_seed_42() {
        let seq = markov_sequence(&ExpressionChain::uniform(42), Neutral, 16).unwrap();
        assert_eq!(
            seq,
            [
                Angry, Angry, Neutral, Happy, Surprised, Happy, Happy, Neutral, Surprised, Angry, Sad, Surprised,
                Surprised, Neutral, Neutral, Neutral
            ]
        );
    }
}
