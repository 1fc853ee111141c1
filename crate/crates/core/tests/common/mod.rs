//! Shared fixtures and the naive enumerate-everything oracle.
//!
//! The oracle spells out each axiom definition as literal nested loops
//! over coalitions, witness sets, and levels. It shares nothing with the
//! production verifiers except the election type, which is what makes the
//! equivalence tests meaningful.

#![allow(dead_code)]

use proprep_core::{Axiom, BitSet, Committee, Election};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

/// Six voters, fifteen candidates, k = 12: the PAV committee here leaves a
/// weakly 4-cohesive trio with only three approved winners.
pub fn fixture_pav() -> (Election, Committee) {
    let e = Election::new(
        15,
        12,
        vec![
            vec![0, 1, 2, 3],
            vec![0, 1, 2, 4],
            vec![0, 1, 2, 5],
            vec![6, 7, 8],
            vec![9, 10, 11],
            vec![12, 13, 14],
        ],
    )
    .unwrap();
    let w = Committee::new(&e, [0, 1, 2, 6, 7, 8, 9, 10, 11, 12, 13, 14], "external").unwrap();
    (e, w)
}

/// Six voters, six candidates, k = 3: two singleton voters and four
/// clones; the Monroe optimum scores 5 but is never priceable when it
/// includes a singleton's candidate.
pub fn fixture_monroe() -> Election {
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

/// Twelve voters, seven candidates, k = 6: the committee dodging
/// candidate 0 satisfies FPJR but leaves a 3-deprived coalition with
/// collective utility 2.
pub fn fixture_deprived() -> (Election, Committee) {
    let mut ballots = vec![vec![0, 1]; 3];
    ballots.extend(vec![vec![0, 2]; 3]);
    ballots.extend(vec![vec![3, 4, 5, 6]; 6]);
    let e = Election::new(7, 6, ballots).unwrap();
    let w = Committee::new(&e, [1, 2, 3, 4, 5, 6], "external").unwrap();
    (e, w)
}

pub fn mask_to_set(width: usize, mask: u32) -> BitSet {
    let mut s = BitSet::new(width);
    for i in 0..width {
        if mask & (1 << i) != 0 {
            s.insert(i);
        }
    }
    s
}

fn common_approvals(e: &Election, coalition: &BitSet) -> BitSet {
    let mut common = BitSet::full(e.num_candidates());
    for v in coalition.iter() {
        common.intersect_with(e.ballot(v));
    }
    common
}

fn union_approvals(e: &Election, coalition: &BitSet) -> BitSet {
    let mut union = BitSet::new(e.num_candidates());
    for v in coalition.iter() {
        union.union_with(e.ballot(v));
    }
    union
}

/// Literal definition check; exponential in both voters and candidates.
pub fn oracle_satisfied(e: &Election, committee: &Committee, axiom: Axiom) -> bool {
    let n = e.num_voters();
    let m = e.num_candidates();
    let k = e.committee_size();
    let w = committee.members();
    assert!(n <= 20 && m <= 20, "oracle is for desk-size instances only");

    for smask in 1u32..(1 << n) {
        let coalition = mask_to_set(n, smask);
        let size = coalition.len();
        let common = common_approvals(e, &coalition);
        let union = union_approvals(e, &coalition);
        let covered = union.intersection_count(w);
        let max_utility = coalition
            .iter()
            .map(|v| e.ballot(v).intersection_count(w))
            .max()
            .unwrap();

        match axiom {
            Axiom::Jr => {
                if size * k >= n && !common.is_empty() && max_utility == 0 {
                    return false;
                }
            }
            Axiom::Pjr | Axiom::Ejr => {
                for level in 1..=m {
                    let cohesive = size * k >= level * n && common.len() >= level;
                    if !cohesive {
                        continue;
                    }
                    let represented = match axiom {
                        Axiom::Pjr => covered >= level,
                        _ => max_utility >= level,
                    };
                    if !represented {
                        return false;
                    }
                }
            }
            Axiom::EjrPlus | Axiom::PjrPlus => {
                for c in 0..m {
                    if w.contains(c) || !common.contains(c) {
                        continue;
                    }
                    for level in 1..=m {
                        if size * k < level * n {
                            continue;
                        }
                        let represented = match axiom {
                            Axiom::PjrPlus => covered >= level,
                            _ => max_utility >= level,
                        };
                        if !represented {
                            return false;
                        }
                    }
                }
            }
            Axiom::Fjr | Axiom::Fpjr => {
                for tmask in 1u32..(1 << m) {
                    let witness = mask_to_set(m, tmask);
                    if size * k < witness.len() * n {
                        continue;
                    }
                    let min_in_witness = coalition
                        .iter()
                        .map(|v| e.ballot(v).intersection_count(&witness))
                        .min()
                        .unwrap();
                    for level in 1..=min_in_witness {
                        let represented = match axiom {
                            Axiom::Fpjr => covered >= level,
                            _ => max_utility >= level,
                        };
                        if !represented {
                            return false;
                        }
                    }
                }
            }
            Axiom::Core => {
                for tmask in 1u32..(1 << m) {
                    let alternative = mask_to_set(m, tmask);
                    if size * k < alternative.len() * n {
                        continue;
                    }
                    let everyone_prefers = coalition.iter().all(|v| {
                        e.ballot(v).intersection_count(&alternative)
                            > e.ballot(v).intersection_count(w)
                    });
                    if everyone_prefers {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn random_election(
    rng: &mut ChaCha12Rng,
    max_voters: usize,
    max_candidates: usize,
    max_committee: usize,
) -> Election {
    let n = rng.random_range(1..=max_voters);
    let m = rng.random_range(1..=max_candidates);
    let k = rng.random_range(1..=max_committee.min(m));
    let ballots = (0..n)
        .map(|_| (0..m).filter(|_| rng.random_bool(0.5)).collect())
        .collect();
    Election::new(m, k, ballots).unwrap()
}

/// A uniformly random committee of size at most k (usually exactly k).
pub fn random_committee(rng: &mut ChaCha12Rng, e: &Election) -> Committee {
    let size = if rng.random_bool(0.8) {
        e.committee_size()
    } else {
        rng.random_range(0..=e.committee_size())
    };
    let mut pool: Vec<usize> = (0..e.num_candidates()).collect();
    for i in (1..pool.len()).rev() {
        let j = rng.random_range(0..=i);
        pool.swap(i, j);
    }
    Committee::new(e, pool.into_iter().take(size), "external").unwrap()
}
