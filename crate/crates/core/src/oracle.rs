//! Generate-and-test reference solver.
//!
//! Walks all of `S_n` with the lexicographic successor and keeps the
//! permutations on which every constraint holds. Nothing is shared with the
//! backtracking solver beyond the leaf definitions of the constraints, which
//! makes it the ground truth the solver is tested against.

use thiserror::Error;

use crate::model::Model;
use crate::perm::Permutation;
use crate::solver::{Solution, SolveOutcome};
use crate::statistics::statistic;

/// Largest length the oracle accepts (`9! = 362880` leaves).
pub const MAX_ORACLE_LENGTH: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("length {0} exceeds the brute-force cap of {MAX_ORACLE_LENGTH}")]
    LengthCapExceeded(usize),
}

pub fn brute_force_solve(m: &Model) -> Result<SolveOutcome, OracleError> {
    if m.length() > MAX_ORACLE_LENGTH {
        return Err(OracleError::LengthCapExceeded(m.length()));
    }
    let solutions: Vec<Solution> = Permutation::all(m.length())
        .filter(|p| m.constraints().iter().all(|c| c.holds(p)))
        .map(|perm| {
            let stats = m.emit().iter().map(|&k| statistic(&perm, k)).collect();
            Solution { perm, stats }
        })
        .collect();
    Ok(SolveOutcome {
        count: solutions.len() as u64,
        solutions,
        exhausted: true,
    })
}
