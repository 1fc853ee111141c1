//! The committee selection rules: PAV and variants, Monroe and its greedy
//! variant, the method of equal shares, and sequential Phragmén.
//!
//! Wherever the literature says "break ties arbitrarily" these rules break
//! ties lexicographically: by candidate index inside a round, and by the
//! sorted member list between whole committees. Scores, budgets, loads and
//! purchase thresholds are exact rationals, so identical inputs give
//! identical committees, byte for byte.

mod mes;
mod monroe;
mod pav;
mod phragmen;

pub use mes::{equal_shares, equal_shares_detailed, BudgetState};
pub use monroe::{greedy_monroe, monroe_exact, monroe_exact_with_limit,
    monroe_optimal_assignment, MonroeAssignment};
pub use pav::{ls_pav, ls_pav_with_threshold, pav_exact, pav_exact_with_limit, pav_score,
    seq_pav};
pub use phragmen::{seq_phragmen, seq_phragmen_detailed, LoadState};

use crate::combinatorics::binomial;
use crate::election::{Committee, Election};
use crate::error::{Error, Result};
use crate::kernels::Rat;
use num::BigInt;

/// Exact rules refuse to enumerate more committees than this by default.
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 10_000_000;

pub(crate) fn rat_int(x: usize) -> Rat {
    Rat::from_integer(BigInt::from(x))
}

pub(crate) fn rat_frac(num: usize, den: usize) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn check_enumeration(e: &Election, limit: u64) -> Result<()> {
    let committees = binomial(e.num_candidates(), e.committee_size());
    if committees > limit as u128 {
        return Err(Error::EnumerationBudget {
            candidates: e.num_candidates(),
            committee_size: e.committee_size(),
            committees,
            limit,
        });
    }
    Ok(())
}

/// Every rule in the crate, for dispatch from the CLI and the lab harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Pav,
    SeqPav,
    LsPav,
    Monroe,
    GreedyMonroe,
    EqualShares,
    SeqPhragmen,
}

impl RuleKind {
    pub const ALL: [RuleKind; 7] = [
        RuleKind::Pav,
        RuleKind::SeqPav,
        RuleKind::LsPav,
        RuleKind::Monroe,
        RuleKind::GreedyMonroe,
        RuleKind::EqualShares,
        RuleKind::SeqPhragmen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Pav => "pav",
            RuleKind::SeqPav => "seq-pav",
            RuleKind::LsPav => "ls-pav",
            RuleKind::Monroe => "monroe",
            RuleKind::GreedyMonroe => "greedy-monroe",
            RuleKind::EqualShares => "equal-shares",
            RuleKind::SeqPhragmen => "seq-phragmen",
        }
    }

    pub fn parse(name: &str) -> Option<RuleKind> {
        RuleKind::ALL.into_iter().find(|r| r.name() == name)
    }

    /// Runs the rule. Exact rules may refuse with an enumeration-budget
    /// error; sequential rules always succeed.
    pub fn run(self, e: &Election) -> Result<Committee> {
        match self {
            RuleKind::Pav => pav_exact(e),
            RuleKind::SeqPav => Ok(seq_pav(e)),
            RuleKind::LsPav => Ok(ls_pav(e)),
            RuleKind::Monroe => monroe_exact(e).map(|(w, _)| w),
            RuleKind::GreedyMonroe => Ok(greedy_monroe(e).0),
            RuleKind::EqualShares => Ok(equal_shares(e)),
            RuleKind::SeqPhragmen => Ok(seq_phragmen(e)),
        }
    }
}

impl std::fmt::Display for RuleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
