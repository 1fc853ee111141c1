//! Method of equal shares: every voter starts with budget 1, candidates
//! cost n/k, and each round elects the candidate its supporters can buy
//! with the smallest per-voter contribution cap.

use super::{rat_frac, rat_int};
use crate::bitset::BitSet;
use crate::election::{Committee, Election};
use crate::kernels::Rat;
use num::Zero;

/// Per-voter remaining budgets and the fixed candidate price n/k.
#[derive(Clone, Debug, PartialEq)]
pub struct BudgetState {
    pub remaining: Vec<Rat>,
    pub price: Rat,
}

impl BudgetState {
    /// Total spent so far; equals |W| * price after every round.
    pub fn spent(&self, num_voters: usize) -> Rat {
        rat_int(num_voters) - self.remaining.iter().sum::<Rat>()
    }
}

pub fn equal_shares(e: &Election) -> Committee {
    equal_shares_detailed(e).0
}

/// Runs the rule and also returns the final budget state. The committee
/// may have fewer than k members: the rule stops as soon as no remaining
/// candidate can be afforded, with no completion phase.
pub fn equal_shares_detailed(e: &Election) -> (Committee, BudgetState) {
    let n = e.num_voters();
    let price = rat_frac(n, e.committee_size());
    let mut remaining: Vec<Rat> = vec![Rat::from_integer(1.into()); n];
    let mut members = BitSet::new(e.num_candidates());

    while members.len() < e.committee_size() {
        let mut pick: Option<(usize, Rat)> = None;
        for c in 0..e.num_candidates() {
            if members.contains(c) {
                continue;
            }
            let Some(q) = min_contribution_cap(e, c, &remaining, &price) else {
                continue;
            };
            if pick.as_ref().is_none_or(|(_, best)| q < *best) {
                pick = Some((c, q));
            }
        }
        let Some((c, q)) = pick else {
            break; // nobody can afford anything anymore
        };
        for v in e.supporters(c).expect("in range").iter() {
            let payment = remaining[v].clone().min(q.clone());
            remaining[v] -= payment;
            debug_assert!(!remaining[v].is_negative());
        }
        members.insert(c);
    }

    let state = BudgetState { remaining, price };
    debug_assert_eq!(state.spent(n), rat_int(members.len()) * &state.price);
    let committee =
        Committee::new(e, members.iter(), "equal-shares").expect("members valid by construction");
    (committee, state)
}

/// The smallest cap q such that the supporters of `c` cover the price when
/// each pays min(budget, q), or None when even their full budgets fall
/// short. Exact rational arithmetic.
fn min_contribution_cap(e: &Election, c: usize, remaining: &[Rat], price: &Rat) -> Option<Rat> {
    let supporters = e.supporters(c).expect("in range");
    if supporters.is_empty() {
        return None;
    }
    let mut budgets: Vec<Rat> = supporters.iter().map(|v| remaining[v].clone()).collect();
    budgets.sort_unstable();
    let total: Rat = budgets.iter().sum();
    if total < *price {
        return None;
    }
    let r = budgets.len();
    // With budgets sorted ascending, suppose the i smallest pay in full and
    // the rest pay q: the cap solves prefix_i + (r - i) * q = price and must
    // land between budgets[i-1] and budgets[i].
    let mut prefix = Rat::zero();
    for i in 0..r {
        let q = (price - &prefix) / rat_int(r - i);
        let lower_ok = i == 0 || budgets[i - 1] <= q;
        if lower_ok && q <= budgets[i] {
            return Some(q);
        }
        prefix += &budgets[i];
    }
    // everyone pays their full budget and exactly covers the price
    debug_assert_eq!(prefix, *price);
    Some(budgets[r - 1].clone())
}

use num::Signed;
