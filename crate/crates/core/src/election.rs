//! Canonical data model: elections, committees, coalitions, certificates,
//! and the elementary set arithmetic every rule and verifier builds on.
//!
//! All proportionality thresholds are compared as cross-multiplied integers
//! (`|S|·k >= |T|·n`), never as floats. Voters and candidates are 0-based
//! dense indices; display names, if any, live in the I/O layer.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use std::fmt;

/// An approval election: `n` voters, `m` candidates, one approval ballot per
/// voter, and a target committee size `k`. Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Election {
    num_voters: usize,
    num_candidates: usize,
    committee_size: usize,
    ballots: Vec<BitSet>,
    supporters: Vec<BitSet>,
}

impl Election {
    /// Builds an election from per-voter approval index lists.
    ///
    /// Requires `1 <= k <= m`, at least one voter, and every approved index
    /// in `[0, m)`. Empty ballots are allowed.
    pub fn new(
        num_candidates: usize,
        committee_size: usize,
        approvals: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if num_candidates == 0 {
            return Err(Error::invalid("election needs at least one candidate"));
        }
        if committee_size == 0 || committee_size > num_candidates {
            return Err(Error::invalid(format!(
                "committee size {} must satisfy 1 <= k <= {}",
                committee_size, num_candidates
            )));
        }
        if approvals.is_empty() {
            return Err(Error::invalid("election needs at least one voter"));
        }
        let num_voters = approvals.len();
        let mut ballots = Vec::with_capacity(num_voters);
        for (v, approved) in approvals.iter().enumerate() {
            let mut ballot = BitSet::new(num_candidates);
            for &c in approved {
                if c >= num_candidates {
                    return Err(Error::IndexOutOfRange {
                        kind: "candidate",
                        index: c,
                        bound: num_candidates,
                    });
                }
                ballot.insert(c);
            }
            debug_assert!(v < num_voters);
            ballots.push(ballot);
        }
        let mut supporters = vec![BitSet::new(num_voters); num_candidates];
        for (v, ballot) in ballots.iter().enumerate() {
            for c in ballot.iter() {
                supporters[c].insert(v);
            }
        }
        Ok(Election {
            num_voters,
            num_candidates,
            committee_size,
            ballots,
            supporters,
        })
    }

    pub fn num_voters(&self) -> usize {
        self.num_voters
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    pub fn committee_size(&self) -> usize {
        self.committee_size
    }

    /// The ballot `A_v` as a candidate set.
    pub fn ballot(&self, voter: usize) -> &BitSet {
        &self.ballots[voter]
    }

    pub fn ballots(&self) -> &[BitSet] {
        &self.ballots
    }

    /// Voters approving candidate `c` (the set `N_c`).
    pub fn supporters(&self, candidate: usize) -> Result<&BitSet> {
        self.check_candidate(candidate)?;
        Ok(&self.supporters[candidate])
    }

    pub fn supporter_count(&self, candidate: usize) -> usize {
        self.supporters[candidate].len()
    }

    /// `|A_v ∩ s|`.
    pub fn utility(&self, voter: usize, candidates: &BitSet) -> Result<usize> {
        self.check_voter(voter)?;
        Ok(self.ballots[voter].intersection_count(candidates))
    }

    /// `|s ∩ ⋃_{v∈S} A_v|`: how many of `candidates` are approved by at
    /// least one voter in the coalition.
    pub fn collective_utility(&self, coalition: &BitSet, candidates: &BitSet) -> Result<usize> {
        if coalition.width() != self.num_voters {
            return Err(Error::invalid("coalition width does not match voter count"));
        }
        let mut approved = BitSet::new(self.num_candidates);
        for v in coalition.iter() {
            approved.union_with(&self.ballots[v]);
        }
        approved.intersect_with(candidates);
        Ok(approved.len())
    }

    /// Same election with a different target committee size. Used when an
    /// axiom must be judged relative to the size of an undersized committee.
    pub fn with_committee_size(&self, committee_size: usize) -> Result<Election> {
        if committee_size == 0 || committee_size > self.num_candidates {
            return Err(Error::invalid(format!(
                "committee size {} must satisfy 1 <= k <= {}",
                committee_size, self.num_candidates
            )));
        }
        let mut e = self.clone();
        e.committee_size = committee_size;
        Ok(e)
    }

    pub(crate) fn check_voter(&self, voter: usize) -> Result<()> {
        if voter >= self.num_voters {
            return Err(Error::IndexOutOfRange {
                kind: "voter",
                index: voter,
                bound: self.num_voters,
            });
        }
        Ok(())
    }

    pub(crate) fn check_candidate(&self, candidate: usize) -> Result<()> {
        if candidate >= self.num_candidates {
            return Err(Error::IndexOutOfRange {
                kind: "candidate",
                index: candidate,
                bound: self.num_candidates,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Election {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Election")
            .field("n", &self.num_voters)
            .field("m", &self.num_candidates)
            .field("k", &self.committee_size)
            .field("ballots", &self.ballots)
            .finish()
    }
}

/// A candidate subset proposed as winners, with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Committee {
    members: BitSet,
    source: String,
}

impl Committee {
    /// Validates `members ⊆ [0, m)` and `|members| <= k` against `e`.
    pub fn new<I>(e: &Election, members: I, source: impl Into<String>) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = BitSet::new(e.num_candidates());
        for c in members {
            e.check_candidate(c)?;
            set.insert(c);
        }
        if set.len() > e.committee_size() {
            return Err(Error::invalid(format!(
                "committee has {} members but k = {}",
                set.len(),
                e.committee_size()
            )));
        }
        Ok(Committee {
            members: set,
            source: source.into(),
        })
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, candidate: usize) -> bool {
        self.members.contains(candidate)
    }

    /// Provenance tag: the rule that produced it, or `"external"`.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.to_vec()
    }
}

/// A coalition `S`, witness set `T`, and level `ℓ` claiming weak cohesion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohesionCertificate {
    pub coalition: BitSet,
    pub witness: BitSet,
    pub level: usize,
}

impl CohesionCertificate {
    pub fn new(coalition: BitSet, witness: BitSet, level: usize) -> Result<Self> {
        if coalition.is_empty() || witness.is_empty() {
            return Err(Error::invalid("coalition and witness set must be nonempty"));
        }
        if level == 0 || level > witness.len() {
            return Err(Error::invalid(format!(
                "level {} must satisfy 1 <= level <= |T| = {}",
                level,
                witness.len()
            )));
        }
        Ok(CohesionCertificate {
            coalition,
            witness,
            level,
        })
    }
}

/// A coalition and an alternative candidate set every member strictly
/// prefers to the committee under test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreDeviation {
    pub coalition: BitSet,
    pub alternative: BitSet,
}

/// True iff `S` is weakly `ℓ`-cohesive with witness `T`:
/// `|S|·k >= |T|·n` and every coalition member approves at least `ℓ`
/// candidates of `T`. Exact integer arithmetic throughout.
pub fn check_weak_cohesion(e: &Election, cert: &CohesionCertificate) -> Result<bool> {
    if cert.coalition.width() != e.num_voters() || cert.witness.width() != e.num_candidates() {
        return Err(Error::invalid("certificate widths do not match election"));
    }
    let size_ok =
        cert.coalition.len() * e.committee_size() >= cert.witness.len() * e.num_voters();
    if !size_ok {
        return Ok(false);
    }
    Ok(cert
        .coalition
        .iter()
        .all(|v| e.ballot(v).intersection_count(&cert.witness) >= cert.level))
}

/// For a valid weak-cohesion certificate, returns a witness candidate
/// `c ∈ T` whose support inside the coalition is itself proportionally
/// large: `|N_c ∩ S|·k >= ℓ·n`. Such a candidate always exists; the
/// smallest-index one is returned.
pub fn witness_candidate(e: &Election, cert: &CohesionCertificate) -> Result<usize> {
    if !check_weak_cohesion(e, cert)? {
        return Err(Error::precondition(
            "certificate is not weakly cohesive for this election",
        ));
    }
    let n = e.num_voters();
    let k = e.committee_size();
    for c in cert.witness.iter() {
        let support_in_coalition = e.supporters(c)?.intersection_count(&cert.coalition);
        if support_in_coalition * k >= cert.level * n {
            return Ok(c);
        }
    }
    unreachable!("average support over the witness set is at least level*n/k");
}

/// Verdict for one axiom on one (election, committee) pair. A violated
/// report always carries an independently re-checkable certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub satisfied: bool,
    pub certificate: Option<Certificate>,
}

impl AxiomReport {
    pub fn satisfied(axiom: Axiom) -> Self {
        AxiomReport {
            axiom,
            satisfied: true,
            certificate: None,
        }
    }

    pub fn violated(axiom: Axiom, certificate: Certificate) -> Self {
        AxiomReport {
            axiom,
            satisfied: false,
            certificate: Some(certificate),
        }
    }
}

/// The representation axioms with exact verifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Jr,
    Pjr,
    Ejr,
    Fjr,
    Fpjr,
    EjrPlus,
    PjrPlus,
    Core,
}

impl Axiom {
    pub const ALL: [Axiom; 8] = [
        Axiom::Jr,
        Axiom::Pjr,
        Axiom::Ejr,
        Axiom::Fjr,
        Axiom::Fpjr,
        Axiom::EjrPlus,
        Axiom::PjrPlus,
        Axiom::Core,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Jr => "jr",
            Axiom::Pjr => "pjr",
            Axiom::Ejr => "ejr",
            Axiom::Fjr => "fjr",
            Axiom::Fpjr => "fpjr",
            Axiom::EjrPlus => "ejr-plus",
            Axiom::PjrPlus => "pjr-plus",
            Axiom::Core => "core",
        }
    }

    pub fn parse(name: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The certificate attached to a violated [`AxiomReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// A weakly cohesive (or, when `|T| = level`, unanimously cohesive)
    /// coalition that is under-represented.
    Cohesion(CohesionCertificate),
    /// A coalition strictly preferring an alternative set.
    Deviation(CoreDeviation),
    /// A deprived coalition: unanimous on `candidate` (a non-winner),
    /// entitled to `level` seats, yet under-represented.
    Deprivation {
        coalition: BitSet,
        candidate: usize,
        level: usize,
    },
    /// Free-form reason (used by the pricing checks, never by the exact
    /// axiom verifiers).
    Reason(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_pav(// 6 voters over 15 candidates, k = 12
    ) -> Election {
        Election::new(
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
        .unwrap()
    }

    fn example_monroe(// 6 voters over 6 candidates, k = 3
    ) -> Election {
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

    fn example_deprived(// 12 voters over 7 candidates, k = 6
    ) -> Election {
        let mut ballots = vec![vec![0, 1]; 3];
        ballots.extend(vec![vec![0, 2]; 3]);
        ballots.extend(vec![vec![3, 4, 5, 6]; 6]);
        Election::new(7, 6, ballots).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(Election::new(3, 0, vec![vec![]]).is_err());
        assert!(Election::new(3, 4, vec![vec![]]).is_err());
        assert!(Election::new(3, 1, vec![]).is_err());
        assert!(Election::new(3, 1, vec![vec![3]]).is_err());
        // empty ballots are fine
        let e = Election::new(3, 1, vec![vec![], vec![0, 2]]).unwrap();
        assert_eq!(e.num_voters(), 2);
        assert!(e.ballot(0).is_empty());
    }

    #[test]
    fn supporters_match_examples() {
        let e2 = example_monroe();
        assert_eq!(e2.supporters(2).unwrap().to_vec(), vec![2, 3, 4, 5]);
        let e1 = example_pav();
        assert_eq!(e1.supporters(0).unwrap().to_vec(), vec![0, 1, 2]);
        // nobody approves this candidate in E2
        let lonely = Election::new(2, 1, vec![vec![0], vec![0]]).unwrap();
        assert!(lonely.supporters(1).unwrap().is_empty());
        assert!(matches!(
            e2.supporters(6),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn utility_matches_examples() {
        let e1 = example_pav();
        let w1 = BitSet::from_indices(15, &[0, 1, 2, 6, 7, 8, 9, 10, 11, 12, 13, 14]);
        assert_eq!(e1.utility(0, &w1).unwrap(), 3);
        assert_eq!(e1.utility(0, &BitSet::new(15)).unwrap(), 0);
        let e3 = example_deprived();
        let w = BitSet::from_indices(7, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(e3.utility(6, &w).unwrap(), 4);
        assert!(e1.utility(6, &w1).is_err());
    }

    #[test]
    fn collective_utility_matches_examples() {
        let e1 = example_pav();
        let w1 = BitSet::from_indices(15, &[0, 1, 2, 6, 7, 8, 9, 10, 11, 12, 13, 14]);
        let s = BitSet::from_indices(6, &[0, 1, 2]);
        assert_eq!(e1.collective_utility(&s, &w1).unwrap(), 3);
        assert_eq!(e1.collective_utility(&BitSet::new(6), &w1).unwrap(), 0);
        let e3 = example_deprived();
        let w = BitSet::from_indices(7, &[1, 2, 3, 4, 5, 6]);
        let s6 = BitSet::from_indices(12, &[0, 1, 2, 3, 4, 5]);
        assert_eq!(e3.collective_utility(&s6, &w).unwrap(), 2);
    }

    #[test]
    fn weak_cohesion_matches_examples() {
        let e1 = example_pav();
        let cert = CohesionCertificate::new(
            BitSet::from_indices(6, &[0, 1, 2]),
            BitSet::from_indices(15, &[0, 1, 2, 3, 4, 5]),
            4,
        )
        .unwrap();
        assert!(check_weak_cohesion(&e1, &cert).unwrap());

        // unanimous singleton
        let uni = Election::new(2, 1, vec![vec![0], vec![0], vec![0]]).unwrap();
        let cert = CohesionCertificate::new(
            BitSet::from_indices(3, &[0, 1, 2]),
            BitSet::from_indices(2, &[0]),
            1,
        )
        .unwrap();
        assert!(check_weak_cohesion(&uni, &cert).unwrap());
        assert_eq!(witness_candidate(&uni, &cert).unwrap(), 0);

        // |S|·k = 18 < |T|·n = 24
        let e3 = example_deprived();
        let cert = CohesionCertificate::new(
            BitSet::from_indices(12, &[0, 1, 2]),
            BitSet::from_indices(7, &[0, 1]),
            2,
        )
        .unwrap();
        assert!(!check_weak_cohesion(&e3, &cert).unwrap());
        assert!(matches!(
            witness_candidate(&e3, &cert),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn witness_candidate_on_example_certificate() {
        let e1 = example_pav();
        let cert = CohesionCertificate::new(
            BitSet::from_indices(6, &[0, 1, 2]),
            BitSet::from_indices(15, &[0, 1, 2, 3, 4, 5]),
            4,
        )
        .unwrap();
        let c = witness_candidate(&e1, &cert).unwrap();
        assert!(c <= 2, "candidates 0..2 each have support 3 >= 4*6/12");
        let support = e1.supporters(c).unwrap().intersection_count(&cert.coalition);
        assert!(support * e1.committee_size() >= cert.level * e1.num_voters());
    }

    #[test]
    fn committee_validation() {
        let e2 = example_monroe();
        assert!(Committee::new(&e2, [0, 2, 3], "external").is_ok());
        assert!(Committee::new(&e2, [0, 1, 2, 3], "external").is_err());
        assert!(Committee::new(&e2, [9], "external").is_err());
    }

    proptest! {
        // collective utility is dominated by the per-voter sum and by |s|
        #[test]
        fn collective_utility_bounds(ballots in prop::collection::vec(prop::collection::btree_set(0usize..8, 0..8), 1..8),
                                     subset in prop::collection::btree_set(0usize..8, 0..8),
                                     coalition_bits in 0u32..256) {
            let e = Election::new(8, 1, ballots.iter().map(|b| b.iter().copied().collect()).collect()).unwrap();
            let s = BitSet::from_indices(8, &subset.iter().copied().collect::<Vec<_>>());
            let mut coalition = BitSet::new(e.num_voters());
            for v in 0..e.num_voters() {
                if coalition_bits & (1 << v) != 0 {
                    coalition.insert(v);
                }
            }
            let cu = e.collective_utility(&coalition, &s).unwrap();
            let per_voter: usize = coalition.iter().map(|v| e.utility(v, &s).unwrap()).sum();
            prop_assert!(cu <= per_voter);
            prop_assert!(cu <= s.len());
        }

        // removing a voter never breaks the per-voter half of weak cohesion
        #[test]
        fn per_voter_condition_survives_removal(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let n = rng.random_range(2usize..7);
            let m = rng.random_range(2usize..7);
            let k = rng.random_range(1usize..=m);
            let ballots: Vec<Vec<usize>> = (0..n)
                .map(|_| (0..m).filter(|_| rng.random_bool(0.6)).collect())
                .collect();
            let e = Election::new(m, k, ballots).unwrap();
            let t: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.5)).collect();
            if t.is_empty() { return Ok(()); }
            let witness = BitSet::from_indices(m, &t);
            let level = rng.random_range(1..=witness.len());
            let members: Vec<usize> = (0..n)
                .filter(|&v| e.ballot(v).intersection_count(&witness) >= level)
                .collect();
            if members.len() < 2 { return Ok(()); }
            // drop one member: the per-voter condition still holds for the rest
            for drop in &members {
                for v in members.iter().filter(|v| *v != drop) {
                    prop_assert!(e.ballot(*v).intersection_count(&witness) >= level);
                }
            }
        }
    }
}
