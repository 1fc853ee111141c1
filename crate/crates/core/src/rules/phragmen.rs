//! Sequential Phragmén with continuous loads: each round elects the
//! candidate whose supporters can absorb one more unit of load with the
//! smallest resulting maximum, and equalizes those supporters' loads.

use super::{rat_int};
use crate::bitset::BitSet;
use crate::election::{Committee, Election};
use crate::kernels::Rat;
use num::Zero;

/// Per-voter accumulated loads. Their sum equals the number of elected
/// candidates.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadState {
    pub loads: Vec<Rat>,
}

pub fn seq_phragmen(e: &Election) -> Committee {
    seq_phragmen_detailed(e).0
}

/// Runs the rule and returns the final loads. Rounds where no unelected
/// candidate has any supporter stop the rule early.
pub fn seq_phragmen_detailed(e: &Election) -> (Committee, LoadState) {
    let n = e.num_voters();
    let mut loads: Vec<Rat> = vec![Rat::zero(); n];
    let mut members = BitSet::new(e.num_candidates());

    while members.len() < e.committee_size() {
        let mut pick: Option<(usize, Rat)> = None;
        for c in 0..e.num_candidates() {
            if members.contains(c) {
                continue;
            }
            let supporters = e.supporters(c).expect("in range");
            if supporters.is_empty() {
                continue;
            }
            let carried: Rat = supporters.iter().map(|v| loads[v].clone()).sum();
            let t = (Rat::from_integer(1.into()) + carried) / rat_int(supporters.len());
            if pick.as_ref().is_none_or(|(_, best)| t < *best) {
                pick = Some((c, t));
            }
        }
        let Some((c, t)) = pick else {
            break; // every unelected candidate is unsupported
        };
        for v in e.supporters(c).expect("in range").iter() {
            loads[v] = t.clone();
        }
        members.insert(c);
    }

    let state = LoadState { loads };
    debug_assert_eq!(
        state.loads.iter().sum::<Rat>(),
        rat_int(members.len()),
        "loads always sum to the number of elected candidates"
    );
    let committee =
        Committee::new(e, members.iter(), "seq-phragmen").expect("members valid by construction");
    (committee, state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::rat_frac;

    #[test]
    fn party_lists_get_proportional_seats() {
        // two parties: 4 voters for {0,1}, 2 voters for {2,3}, k = 3
        let ballots = vec![
            vec![0, 1],
            vec![0, 1],
            vec![0, 1],
            vec![0, 1],
            vec![2, 3],
            vec![2, 3],
        ];
        let e = Election::new(4, 3, ballots).unwrap();
        let (w, state) = seq_phragmen_detailed(&e);
        // big party seats: rounds at t = 1/4 and t = 1/2; small party at 1/2
        assert_eq!(w.to_vec(), vec![0, 1, 2]);
        assert_eq!(state.loads[0], rat_frac(1, 2));
        assert_eq!(state.loads[4], rat_frac(1, 2));
    }

    #[test]
    fn k1_is_the_approval_winner() {
        let e = Election::new(3, 1, vec![vec![0], vec![1], vec![1], vec![2]]).unwrap();
        assert_eq!(seq_phragmen(&e).to_vec(), vec![1]);
    }

    #[test]
    fn stops_early_without_support() {
        let e = Election::new(3, 3, vec![vec![0], vec![0]]).unwrap();
        let (w, state) = seq_phragmen_detailed(&e);
        assert_eq!(w.to_vec(), vec![0]);
        assert_eq!(state.loads.iter().sum::<Rat>(), rat_int(1));
    }

    #[test]
    fn equal_parties_split_evenly() {
        let ballots = vec![vec![0, 1], vec![0, 1], vec![0, 1], vec![2, 3], vec![2, 3], vec![2, 3]];
        let e = Election::new(4, 2, ballots).unwrap();
        let w = seq_phragmen(&e);
        assert_eq!(w.to_vec(), vec![0, 2]);
    }
}
