//! Monroe's rule: optimal voter assignment via min-cost flow, exhaustive
//! committee search, and the polynomial greedy variant.

use super::{check_enumeration, DEFAULT_ENUMERATION_LIMIT};
use crate::bitset::BitSet;
use crate::combinatorics::for_each_combination;
use crate::election::{Committee, Election};
use crate::error::{Error, Result};
use crate::kernels::{min_cost_flow_with_bounds, FlowNetwork};

/// An assignment of every voter to one committee member, with the number
/// of voters who approve their assigned member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonroeAssignment {
    assignment: Vec<usize>,
    score: usize,
}

impl MonroeAssignment {
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn assigned(&self, voter: usize) -> usize {
        self.assignment[voter]
    }

    /// Total satisfaction over all voters.
    pub fn score(&self) -> usize {
        self.score
    }

    /// Satisfaction restricted to a coalition: how many of its members
    /// approve their assigned candidate.
    pub fn coalition_score(&self, e: &Election, coalition: &BitSet) -> usize {
        coalition
            .iter()
            .filter(|&v| e.ballot(v).contains(self.assignment[v]))
            .count()
    }

    /// Checks the balanced-occupancy invariant: every committee member is
    /// assigned between floor(n/k) and ceil(n/k) voters.
    pub fn occupancy_balanced(&self, e: &Election, committee: &Committee) -> bool {
        let n = e.num_voters();
        let k = e.committee_size();
        let mut occupancy = vec![0usize; e.num_candidates()];
        for &c in &self.assignment {
            occupancy[c] += 1;
        }
        committee
            .members()
            .iter()
            .all(|c| occupancy[c] >= n / k && occupancy[c] <= n.div_ceil(k))
    }
}

/// The satisfaction-maximizing assignment of voters to the given size-k
/// committee, subject to every member receiving between floor(n/k) and
/// ceil(n/k) voters. Solved as a min-cost flow where assigning a voter to
/// a disapproved member costs one unit.
pub fn monroe_optimal_assignment(e: &Election, committee: &Committee) -> Result<MonroeAssignment> {
    let k = e.committee_size();
    if committee.len() != k {
        return Err(Error::precondition(format!(
            "assignment needs a full committee: |W| = {} but k = {}",
            committee.len(),
            k
        )));
    }
    let n = e.num_voters();
    let members = committee.to_vec();

    // nodes: 0 source, 1 sink, then committee members, then voters
    let member_node = |i: usize| 2 + i;
    let voter_node = |v: usize| 2 + k + v;
    let mut net = FlowNetwork::new(2 + k + n, 0, 1);
    for i in 0..k {
        net.add_arc(0, member_node(i), (n / k) as i64, n.div_ceil(k) as i64, 0);
    }
    let mut arc_owner = Vec::new(); // (member index, voter) per member->voter arc
    for (i, &c) in members.iter().enumerate() {
        for v in 0..n {
            let cost = i64::from(!e.ballot(v).contains(c));
            net.add_arc(member_node(i), voter_node(v), 0, 1, cost);
            arc_owner.push((i, v));
        }
    }
    for v in 0..n {
        net.add_arc(voter_node(v), 1, 0, 1, 0);
    }

    let (cost, flows) = min_cost_flow_with_bounds(&net, n as i64)?
        .expect("k*floor(n/k) <= n <= k*ceil(n/k) makes the quotas feasible");

    let mut assignment = vec![usize::MAX; n];
    for (arc_idx, &(i, v)) in arc_owner.iter().enumerate() {
        if flows[k + arc_idx] == 1 {
            assignment[v] = members[i];
        }
    }
    debug_assert!(assignment.iter().all(|&c| c != usize::MAX));
    let asg = MonroeAssignment {
        assignment,
        score: n - cost as usize,
    };
    debug_assert!(asg.occupancy_balanced(e, committee));
    debug_assert_eq!(asg.coalition_score(e, &BitSet::full(n)), asg.score);
    Ok(asg)
}

/// Exhaustive Monroe: the committee whose optimal assignment has maximum
/// score, lexicographically smallest among maximizers.
pub fn monroe_exact(e: &Election) -> Result<(Committee, MonroeAssignment)> {
    monroe_exact_with_limit(e, DEFAULT_ENUMERATION_LIMIT)
}

pub fn monroe_exact_with_limit(e: &Election, limit: u64) -> Result<(Committee, MonroeAssignment)> {
    check_enumeration(e, limit)?;
    let pool: Vec<usize> = (0..e.num_candidates()).collect();
    let mut best: Option<(Committee, MonroeAssignment)> = None;
    let mut inner_err = None;
    for_each_combination(&pool, e.committee_size(), |members| {
        let committee = match Committee::new(e, members.iter().copied(), "monroe") {
            Ok(c) => c,
            Err(err) => {
                inner_err = Some(err);
                return false;
            }
        };
        match monroe_optimal_assignment(e, &committee) {
            Ok(asg) => {
                if best.as_ref().is_none_or(|(_, b)| asg.score() > b.score()) {
                    best = Some((committee, asg));
                }
                true
            }
            Err(err) => {
                inner_err = Some(err);
                false
            }
        }
    });
    if let Some(err) = inner_err {
        return Err(err);
    }
    Ok(best.expect("k <= m guarantees at least one committee"))
}

/// Greedy Monroe: k rounds, each electing the candidate approved by the
/// most still-unassigned voters (smallest index on ties) and assigning it
/// a quota of voters, approving voters first, then the lowest-index
/// unassigned ones.
pub fn greedy_monroe(e: &Election) -> (Committee, MonroeAssignment) {
    let n = e.num_voters();
    let k = e.committee_size();
    let mut unassigned = BitSet::full(n);
    let mut members = BitSet::new(e.num_candidates());
    let mut assignment = vec![usize::MAX; n];

    for round in 0..k {
        let remaining = unassigned.len();
        let slots = k - round;
        // ceil(n/k) per round until the remaining voters divide evenly
        // among the remaining slots, floor(n/k) afterwards
        let quota = if remaining % slots == 0 {
            remaining / slots
        } else {
            n.div_ceil(k)
        };

        let mut pick: Option<(usize, usize)> = None; // (candidate, support)
        for c in 0..e.num_candidates() {
            if members.contains(c) {
                continue;
            }
            let support = e.supporters(c).expect("in range").intersection_count(&unassigned);
            if pick.is_none_or(|(_, s)| support > s) {
                pick = Some((c, support));
            }
        }
        let (c, _) = pick.expect("k <= m leaves a candidate to elect");
        members.insert(c);

        let mut taken = 0;
        for v in e.supporters(c).expect("in range").intersection(&unassigned).iter() {
            if taken == quota {
                break;
            }
            assignment[v] = c;
            unassigned.remove(v);
            taken += 1;
        }
        // pad with the lowest-index unassigned voters
        while taken < quota {
            let v = unassigned.first().expect("quotas never exceed voters left");
            assignment[v] = c;
            unassigned.remove(v);
            taken += 1;
        }
    }
    debug_assert!(unassigned.is_empty());

    let committee = Committee::new(e, members.iter(), "greedy-monroe")
        .expect("members valid by construction");
    let score = (0..n)
        .filter(|&v| e.ballot(v).contains(assignment[v]))
        .count();
    let asg = MonroeAssignment { assignment, score };
    debug_assert!(asg.occupancy_balanced(e, &committee));
    (committee, asg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn example_monroe() -> Election {
        Election::new(
            6,
            3,
            vec![
                vec![0],
                vec![1],
                vec![2, 3, 4, 5],
                vec![2, 3, 4, 5],
                vec![2, 3, 4, 5],
                vec![2, 3, 4, 5],
            ],
        )
        .unwrap()
    }

    #[test]
    fn assignment_scores_on_example() {
        let e = example_monroe();
        let w = Committee::new(&e, [0, 2, 3], "external").unwrap();
        assert_eq!(monroe_optimal_assignment(&e, &w).unwrap().score(), 5);
        let w = Committee::new(&e, [2, 3, 4], "external").unwrap();
        assert_eq!(monroe_optimal_assignment(&e, &w).unwrap().score(), 4);
    }

    #[test]
    fn assignment_everyone_happy() {
        let e = Election::new(2, 2, vec![vec![0, 1]; 4]).unwrap();
        let w = Committee::new(&e, [0, 1], "external").unwrap();
        let asg = monroe_optimal_assignment(&e, &w).unwrap();
        assert_eq!(asg.score(), 4);
        assert!(asg.occupancy_balanced(&e, &w));
    }

    #[test]
    fn assignment_requires_full_committee() {
        let e = example_monroe();
        let w = Committee::new(&e, [0, 2], "external").unwrap();
        assert!(matches!(
            monroe_optimal_assignment(&e, &w),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn exact_on_example() {
        let e = example_monroe();
        let (w, asg) = monroe_exact(&e).unwrap();
        assert_eq!(asg.score(), 5);
        let members = w.to_vec();
        let specials = members.iter().filter(|&&c| c <= 1).count();
        let bulk = members.iter().filter(|&&c| c >= 2).count();
        assert_eq!(specials, 1);
        assert_eq!(bulk, 2);
        // lexicographically smallest maximizer
        assert_eq!(members, vec![0, 2, 3]);
    }

    #[test]
    fn perfect_representation_gives_score_n() {
        // two disjoint parties of two voters each, k = 2 | n = 4
        let e = Election::new(
            4,
            2,
            vec![vec![0, 1], vec![0, 1], vec![2, 3], vec![2, 3]],
        )
        .unwrap();
        let (_, asg) = monroe_exact(&e).unwrap();
        assert_eq!(asg.score(), 4);
    }

    // Exhaustive oracle over committees and capacity-respecting assignments.
    fn brute_force_monroe(e: &Election) -> usize {
        let n = e.num_voters();
        let k = e.committee_size();
        let pool: Vec<usize> = (0..e.num_candidates()).collect();
        let mut best = 0;
        for_each_combination(&pool, k, |members| {
            // all assignments of voters to members, base-k counter
            let mut idx = vec![0usize; n];
            loop {
                let mut occupancy = vec![0usize; k];
                let mut score = 0;
                for v in 0..n {
                    occupancy[idx[v]] += 1;
                    if e.ballot(v).contains(members[idx[v]]) {
                        score += 1;
                    }
                }
                if occupancy.iter().all(|&o| o >= n / k && o <= n.div_ceil(k)) {
                    best = best.max(score);
                }
                let mut i = 0;
                loop {
                    if i == n {
                        break;
                    }
                    idx[i] += 1;
                    if idx[i] < k {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
            true
        });
        best
    }

    #[test]
    fn exact_matches_double_brute_force() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..25 {
            let n = rng.random_range(1usize..=6);
            let m = rng.random_range(1usize..=5);
            let k = rng.random_range(1usize..=m.min(3));
            let ballots = (0..n)
                .map(|_| (0..m).filter(|_| rng.random_bool(0.5)).collect())
                .collect();
            let e = Election::new(m, k, ballots).unwrap();
            let (_, asg) = monroe_exact(&e).unwrap();
            assert_eq!(asg.score(), brute_force_monroe(&e), "{:?}", e);
        }
    }

    #[test]
    fn greedy_on_example() {
        let e = example_monroe();
        let (w, asg) = greedy_monroe(&e);
        // first pick is the lexicographically smallest of the four
        // candidates supported by four voters
        assert!(w.contains(2));
        assert_eq!(w.to_vec(), vec![0, 2, 3]);
        assert_eq!(asg.score(), 5);
        assert!(asg.occupancy_balanced(&e, &w));
    }

    #[test]
    fn greedy_k1_assigns_everyone_to_the_approval_winner() {
        let e = Election::new(3, 1, vec![vec![0], vec![1], vec![1], vec![2]]).unwrap();
        let (w, asg) = greedy_monroe(&e);
        assert_eq!(w.to_vec(), vec![1]);
        assert!(asg.assignment().iter().all(|&c| c == 1));
        assert_eq!(asg.score(), 2);
    }

    #[test]
    fn greedy_exact_quotas_when_k_divides_n() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        for _ in 0..40 {
            let k = rng.random_range(1usize..=4);
            let n = k * rng.random_range(1usize..=3);
            let m = rng.random_range(k..=k + 3);
            let ballots = (0..n)
                .map(|_| (0..m).filter(|_| rng.random_bool(0.5)).collect())
                .collect();
            let e = Election::new(m, k, ballots).unwrap();
            let (w, asg) = greedy_monroe(&e);
            let mut occupancy = vec![0usize; m];
            for &c in asg.assignment() {
                occupancy[c] += 1;
            }
            for c in w.members().iter() {
                assert_eq!(occupancy[c], n / k);
            }
        }
    }

    #[test]
    fn greedy_handles_fewer_voters_than_seats() {
        let e = Election::new(5, 4, vec![vec![1], vec![1]]).unwrap();
        let (w, asg) = greedy_monroe(&e);
        assert_eq!(w.len(), 4);
        assert!(asg.occupancy_balanced(&e, &w));
        // the ceil(n/k) = 1 quota lets only one of the two supporters join
        // candidate 1; the other is padding for the next pick
        assert_eq!(asg.score(), 1);
    }
}
