//! Priceability (via an exact rational LP) and perfect representation
//! (via max-flow), with constructive certificates.

use crate::bitset::BitSet;
use crate::election::{Committee, Election};
use crate::error::{Error, Result};
use crate::kernels::{
    max_flow, simplex_max, FlowNetwork, LinearProgram, LpOutcome, Rat, Relation,
};
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;

/// A price `p > 0` and per-voter payment functions supporting a committee:
/// voters pay only approved winners, nobody overspends their unit budget,
/// every winner collects exactly `p`, and no unelected candidate's
/// supporters hold more than `p` in leftover budget.
#[derive(Clone, Debug, PartialEq)]
pub struct PriceSystem {
    pub price: Rat,
    /// Positive payments only, keyed by (voter, candidate).
    pub payments: BTreeMap<(usize, usize), Rat>,
}

impl PriceSystem {
    /// Voter `v`'s leftover budget `1 - sum of payments`.
    pub fn remaining_budget(&self, voter: usize) -> Rat {
        let spent: Rat = self
            .payments
            .range((voter, 0)..(voter + 1, 0))
            .map(|(_, amount)| amount.clone())
            .sum();
        Rat::one() - spent
    }
}

/// Checks all price-system invariants exactly; returns the first failure
/// as a message.
pub fn validate_price_system(
    e: &Election,
    committee: &Committee,
    ps: &PriceSystem,
) -> std::result::Result<(), String> {
    if !ps.price.is_positive() {
        return Err("price must be positive".into());
    }
    let w = committee.members();
    for (&(v, c), amount) in &ps.payments {
        if v >= e.num_voters() || c >= e.num_candidates() {
            return Err(format!("payment ({}, {}) out of range", v, c));
        }
        if amount.is_negative() {
            return Err(format!("negative payment by voter {}", v));
        }
        if amount.is_positive() && (!w.contains(c) || !e.ballot(v).contains(c)) {
            return Err(format!(
                "voter {} pays candidate {} they do not approve or who lost",
                v, c
            ));
        }
    }
    for v in 0..e.num_voters() {
        if ps.remaining_budget(v).is_negative() {
            return Err(format!("voter {} spends more than their budget", v));
        }
    }
    for c in w.iter() {
        let collected: Rat = (0..e.num_voters())
            .filter_map(|v| ps.payments.get(&(v, c)))
            .cloned()
            .sum();
        if collected != ps.price {
            return Err(format!(
                "winner {} collects {} instead of the price {}",
                c, collected, ps.price
            ));
        }
    }
    for c in 0..e.num_candidates() {
        if w.contains(c) {
            continue;
        }
        let leftover: Rat = e
            .supporters(c)
            .expect("in range")
            .iter()
            .map(|v| ps.remaining_budget(v))
            .sum();
        if leftover > ps.price {
            return Err(format!(
                "supporters of unelected candidate {} hold {} > price {}",
                c, leftover, ps.price
            ));
        }
    }
    Ok(())
}

/// Decides priceability by maximizing the price `p` over all candidate
/// payment schemes; the committee is priceable iff the optimum is
/// strictly positive. Returns the witness at the optimal price.
///
/// Priceability itself puts no constraint on the election's `k`; callers
/// judging axioms of an undersized committee pass `k = |W|` elections to
/// the verifiers, not here.
pub fn check_priceable(e: &Election, committee: &Committee) -> Result<(bool, Option<PriceSystem>)> {
    if committee.is_empty() {
        return Err(Error::precondition("priceability needs a nonempty committee"));
    }
    let w = committee.members();
    // a winner nobody approves can never collect a positive price
    for c in w.iter() {
        if e.supporter_count(c) == 0 {
            return Ok((false, None));
        }
    }

    // variables: 0 = price, then one payment variable per (voter, approved
    // winner) pair
    let mut var_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for v in 0..e.num_voters() {
        for c in e.ballot(v).intersection(w).iter() {
            let idx = 1 + var_of.len();
            var_of.insert((v, c), idx);
        }
    }
    let mut lp = LinearProgram::new(1 + var_of.len());
    lp.set_objective(0, Rat::one());

    // each voter spends at most one unit
    for v in 0..e.num_voters() {
        let row: Vec<(usize, Rat)> = var_of
            .range((v, 0)..(v + 1, 0))
            .map(|(_, &idx)| (idx, Rat::one()))
            .collect();
        if !row.is_empty() {
            lp.add_constraint(&row, Relation::Le, Rat::one());
        }
    }
    // each winner collects exactly the price
    for c in w.iter() {
        let mut row: Vec<(usize, Rat)> = var_of
            .iter()
            .filter(|(&(_, cand), _)| cand == c)
            .map(|(_, &idx)| (idx, Rat::one()))
            .collect();
        row.push((0, -Rat::one()));
        lp.add_constraint(&row, Relation::Eq, Rat::zero());
    }
    // stability: for every unelected candidate, its supporters' leftover
    // budgets total at most the price:
    //   sum_{v in N_c} (1 - sum_{c'} p_v(c')) <= p
    for c in 0..e.num_candidates() {
        if w.contains(c) {
            continue;
        }
        let supporters = e.supporters(c)?;
        if supporters.is_empty() {
            continue;
        }
        let mut row: Vec<(usize, Rat)> = vec![(0, Rat::one())];
        for v in supporters.iter() {
            for (_, &idx) in var_of.range((v, 0)..(v + 1, 0)) {
                row.push((idx, Rat::one()));
            }
        }
        lp.add_constraint(
            &row,
            Relation::Ge,
            Rat::from_integer(BigInt::from(supporters.len())),
        );
    }

    match simplex_max(&lp)? {
        LpOutcome::Optimal { value, point } if value.is_positive() => {
            let mut payments = BTreeMap::new();
            for (&(v, c), &idx) in &var_of {
                if point[idx].is_positive() {
                    payments.insert((v, c), point[idx].clone());
                }
            }
            let ps = PriceSystem {
                price: value,
                payments,
            };
            debug_assert!(validate_price_system(e, committee, &ps).is_ok());
            Ok((true, Some(ps)))
        }
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => Ok((false, None)),
        LpOutcome::Unbounded => Err(Error::invalid(
            "priceability LP cannot be unbounded: winner payments cap the price",
        )),
    }
}

/// An equal-size partition of the voters, one part per committee member,
/// each part unanimously approving its assigned member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerPartition {
    pub parts: Vec<BitSet>,
    pub assigned: Vec<usize>,
}

/// Validates the partition invariants against the election.
pub fn validate_partition(
    e: &Election,
    committee: &Committee,
    pp: &PerPartition,
) -> std::result::Result<(), String> {
    let n = e.num_voters();
    let k = e.committee_size();
    if k == 0 || n % k != 0 {
        return Err("perfect representation needs k to divide n".into());
    }
    if pp.parts.len() != k || pp.assigned.len() != k {
        return Err(format!("expected exactly k = {} parts", k));
    }
    let mut seen_voters = BitSet::new(n);
    let mut seen_candidates = BitSet::new(e.num_candidates());
    for (part, &c) in pp.parts.iter().zip(&pp.assigned) {
        if part.len() != n / k {
            return Err(format!("part size {} != n/k = {}", part.len(), n / k));
        }
        if !committee.contains(c) {
            return Err(format!("assigned candidate {} is not a winner", c));
        }
        if seen_candidates.contains(c) {
            return Err(format!("candidate {} assigned twice", c));
        }
        seen_candidates.insert(c);
        for v in part.iter() {
            if seen_voters.contains(v) {
                return Err(format!("voter {} in two parts", v));
            }
            seen_voters.insert(v);
            if !e.ballot(v).contains(c) {
                return Err(format!("voter {} does not approve {}", v, c));
            }
        }
    }
    if seen_voters.len() != n {
        return Err("parts do not cover all voters".into());
    }
    Ok(())
}

/// Decides perfect representation: `k` must divide `n`, and a max-flow
/// from winners (capacity n/k each) to voters (capacity 1) must saturate
/// every voter. Returns the decoded partition on success.
pub fn check_per(e: &Election, committee: &Committee) -> Result<(bool, Option<PerPartition>)> {
    let n = e.num_voters();
    let k = e.committee_size();
    if committee.len() != k {
        return Err(Error::precondition(format!(
            "perfect representation needs a full committee: |W| = {} but k = {}",
            committee.len(),
            k
        )));
    }
    if n % k != 0 {
        return Ok((false, None));
    }
    let members = committee.to_vec();
    // nodes: 0 source, 1 sink, winners, voters
    let member_node = |i: usize| 2 + i;
    let voter_node = |v: usize| 2 + k + v;
    let mut net = FlowNetwork::new(2 + k + n, 0, 1);
    for i in 0..k {
        net.add_arc(0, member_node(i), 0, (n / k) as i64, 0);
    }
    let mut arc_owner = Vec::new();
    for (i, &c) in members.iter().enumerate() {
        for v in e.supporters(c)?.iter() {
            net.add_arc(member_node(i), voter_node(v), 0, 1, 0);
            arc_owner.push((i, v));
        }
    }
    for v in 0..n {
        net.add_arc(voter_node(v), 1, 0, 1, 0);
    }
    let (value, flows) = max_flow(&net)?;
    if value != n as i64 {
        return Ok((false, None));
    }
    let mut parts = vec![BitSet::new(n); k];
    for (arc_idx, &(i, v)) in arc_owner.iter().enumerate() {
        if flows[k + arc_idx] == 1 {
            parts[i].insert(v);
        }
    }
    let pp = PerPartition {
        parts,
        assigned: members,
    };
    debug_assert!(validate_partition(e, committee, &pp).is_ok());
    Ok((true, Some(pp)))
}

/// The explicit price system behind a perfect representation: every voter
/// pays their whole unit budget to their part's candidate, at price n/k.
pub fn price_system_from_partition(
    e: &Election,
    committee: &Committee,
    pp: &PerPartition,
) -> Result<PriceSystem> {
    validate_partition(e, committee, pp).map_err(Error::Precondition)?;
    let mut payments = BTreeMap::new();
    for (part, &c) in pp.parts.iter().zip(&pp.assigned) {
        for v in part.iter() {
            payments.insert((v, c), Rat::one());
        }
    }
    let ps = PriceSystem {
        price: Rat::new(
            BigInt::from(e.num_voters()),
            BigInt::from(e.committee_size()),
        ),
        payments,
    };
    debug_assert!(validate_price_system(e, committee, &ps).is_ok());
    Ok(ps)
}
