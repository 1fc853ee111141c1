//! Random election generation, batch rule-by-axiom evaluation, empirical
//! implication matrices, and counterexample minimization.
//!
//! Trials derive their RNG from (master seed, trial index), so runs are
//! reproducible and trials independent. Committees that come out smaller
//! than `k` (equal shares can stall) are judged at `k = |W|`, matching how
//! the priceability-implies-FPJR relationship is stated; empty committees
//! are recorded as inconclusive rather than guessed at.

use crate::election::{Axiom, Committee, Election};
use crate::error::{Error, Result};
use crate::pricing::{check_per, check_priceable};
use crate::rules::RuleKind;
use crate::verify::{verify, VerifierBudget};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeMap;

/// How ballots are drawn.
#[derive(Clone, Debug, PartialEq)]
pub enum CultureModel {
    /// Every (voter, candidate) approval is an independent coin flip.
    ImpartialCulture { approval_probability: f64 },
    /// Candidates split into near-equal party blocks; voters are dealt
    /// round-robin to parties and approve exactly their party's block.
    PartyList { parties: usize },
    /// Each voter either copies a uniformly random earlier ballot (with
    /// the mixing probability) or draws a fresh impartial-culture ballot.
    Urn { mixing: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallotCulture {
    pub model: CultureModel,
    pub seed: u64,
}

impl CultureModel {
    fn validate(&self) -> Result<()> {
        match self {
            CultureModel::ImpartialCulture {
                approval_probability,
            } => {
                if !(*approval_probability > 0.0 && *approval_probability < 1.0) {
                    return Err(Error::invalid(
                        "approval probability must lie strictly between 0 and 1",
                    ));
                }
            }
            CultureModel::PartyList { parties } => {
                if *parties == 0 {
                    return Err(Error::invalid("party count must be positive"));
                }
            }
            CultureModel::Urn { mixing } => {
                if !(0.0..=1.0).contains(mixing) {
                    return Err(Error::invalid("mixing must lie in [0, 1]"));
                }
            }
        }
        Ok(())
    }

    fn draw(
        &self,
        rng: &mut ChaCha12Rng,
        num_voters: usize,
        num_candidates: usize,
    ) -> Vec<Vec<usize>> {
        match self {
            CultureModel::ImpartialCulture {
                approval_probability,
            } => (0..num_voters)
                .map(|_| {
                    (0..num_candidates)
                        .filter(|_| rng.random_bool(*approval_probability))
                        .collect()
                })
                .collect(),
            CultureModel::PartyList { parties } => {
                let parties = (*parties).min(num_candidates);
                // near-equal contiguous candidate blocks
                let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(parties);
                let base = num_candidates / parties;
                let extra = num_candidates % parties;
                let mut next = 0;
                for i in 0..parties {
                    let size = base + usize::from(i < extra);
                    blocks.push((next..next + size).collect());
                    next += size;
                }
                // deal shuffled voters round-robin so party sizes differ by
                // at most one
                let mut order: Vec<usize> = (0..num_voters).collect();
                for i in (1..order.len()).rev() {
                    let j = rng.random_range(0..=i);
                    order.swap(i, j);
                }
                let mut ballots = vec![Vec::new(); num_voters];
                for (pos, &v) in order.iter().enumerate() {
                    ballots[v] = blocks[pos % parties].clone();
                }
                ballots
            }
            CultureModel::Urn { mixing } => {
                let mut ballots: Vec<Vec<usize>> = Vec::with_capacity(num_voters);
                for v in 0..num_voters {
                    let copy = v > 0 && rng.random_bool(*mixing);
                    if copy {
                        let source = rng.random_range(0..v);
                        ballots.push(ballots[source].clone());
                    } else {
                        ballots.push((0..num_candidates).filter(|_| rng.random_bool(0.5)).collect());
                    }
                }
                ballots
            }
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Deterministic pseudo-random election: identical (model, seed, n, m, k)
/// yield identical elections.
pub fn generate(
    culture: &BallotCulture,
    num_voters: usize,
    num_candidates: usize,
    committee_size: usize,
) -> Result<Election> {
    culture.model.validate()?;
    let mut rng = rng_for(culture.seed, 0);
    let ballots = culture.model.draw(&mut rng, num_voters, num_candidates);
    Election::new(num_candidates, committee_size, ballots)
}

/// Committee properties the matrix tracks: the eight axioms plus the two
/// certificate-producing checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Jr,
    Pjr,
    Ejr,
    Fjr,
    Fpjr,
    EjrPlus,
    PjrPlus,
    Core,
    Priceable,
    Per,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::Jr,
        Property::Pjr,
        Property::Ejr,
        Property::Fjr,
        Property::Fpjr,
        Property::EjrPlus,
        Property::PjrPlus,
        Property::Core,
        Property::Priceable,
        Property::Per,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Priceable => "priceable",
            Property::Per => "per",
            other => other.axiom().expect("axiom property").name(),
        }
    }

    pub fn parse(name: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn axiom(self) -> Option<Axiom> {
        match self {
            Property::Jr => Some(Axiom::Jr),
            Property::Pjr => Some(Axiom::Pjr),
            Property::Ejr => Some(Axiom::Ejr),
            Property::Fjr => Some(Axiom::Fjr),
            Property::Fpjr => Some(Axiom::Fpjr),
            Property::EjrPlus => Some(Axiom::EjrPlus),
            Property::PjrPlus => Some(Axiom::PjrPlus),
            Property::Core => Some(Axiom::Core),
            Property::Priceable | Property::Per => None,
        }
    }
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The implications with proofs behind them; a counterexample to any of
/// these is a bug, not a discovery.
pub const PROVEN_IMPLICATIONS: [(Property, Property); 10] = [
    (Property::Core, Property::Fjr),
    (Property::Fjr, Property::Ejr),
    (Property::Fjr, Property::Fpjr),
    (Property::Ejr, Property::Pjr),
    (Property::Fpjr, Property::Pjr),
    (Property::EjrPlus, Property::Ejr),
    (Property::EjrPlus, Property::PjrPlus),
    (Property::PjrPlus, Property::Pjr),
    (Property::Per, Property::Priceable),
    (Property::Priceable, Property::Fpjr),
];

/// Evaluates one property of a (election, committee) pair; `None` means
/// the verifier hit its budget.
pub fn evaluate_property(
    e: &Election,
    committee: &Committee,
    property: Property,
    budget: &VerifierBudget,
) -> Result<Option<bool>> {
    match property {
        Property::Priceable => check_priceable(e, committee).map(|(ok, _)| Some(ok)),
        Property::Per => check_per(e, committee).map(|(ok, _)| Some(ok)),
        other => {
            let axiom = other.axiom().expect("axiom property");
            match verify(e, committee, axiom, budget) {
                Ok(report) => Ok(Some(report.satisfied)),
                Err(err) if err.is_budget() => Ok(None),
                Err(err) => Err(err),
            }
        }
    }
}

/// Judges all requested properties of a committee, at `k = |W|` when the
/// committee is undersized. Returns `None` for empty committees.
pub fn evaluate_committee(
    e: &Election,
    committee: &Committee,
    properties: &[Property],
    budget: &VerifierBudget,
) -> Result<Option<(Election, Committee, Vec<Option<bool>>)>> {
    if committee.is_empty() {
        return Ok(None);
    }
    let (e_eff, w_eff) = if committee.len() == e.committee_size() {
        (e.clone(), committee.clone())
    } else {
        let e2 = e.with_committee_size(committee.len())?;
        let w2 = Committee::new(&e2, committee.to_vec(), committee.source())?;
        (e2, w2)
    };
    let mut verdicts = Vec::with_capacity(properties.len());
    for &p in properties {
        verdicts.push(evaluate_property(&e_eff, &w_eff, p, budget)?);
    }
    Ok(Some((e_eff, w_eff, verdicts)))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PairCounts {
    pub both_satisfied: u64,
    pub premise_satisfied_conclusion_violated: u64,
    pub premise_violated: u64,
    pub inconclusive: u64,
}

#[derive(Clone, Debug)]
pub struct StoredCounterexample {
    pub premise: Property,
    pub conclusion: Property,
    pub election: Election,
    pub committee: Committee,
    pub origin: String,
}

/// Counts, per ordered property pair, how verdicts co-occurred, with a
/// bounded stash of (premise satisfied, conclusion violated) witnesses.
#[derive(Clone, Debug)]
pub struct ImplicationMatrix {
    pub properties: Vec<Property>,
    pub counts: BTreeMap<(Property, Property), PairCounts>,
    pub counterexamples: Vec<StoredCounterexample>,
    pub trials_run: u64,
    pub evaluations: u64,
    pub inconclusive_evaluations: u64,
    counterexample_cap: usize,
}

impl ImplicationMatrix {
    pub fn new(properties: Vec<Property>) -> Self {
        let mut counts = BTreeMap::new();
        for &a in &properties {
            for &b in &properties {
                if a != b {
                    counts.insert((a, b), PairCounts::default());
                }
            }
        }
        ImplicationMatrix {
            properties,
            counts,
            counterexamples: Vec::new(),
            trials_run: 0,
            evaluations: 0,
            inconclusive_evaluations: 0,
            counterexample_cap: 3,
        }
    }

    /// Folds one evaluated committee into the counts. `verdicts` aligns
    /// with `self.properties`; `None` entries mark budget-exceeded
    /// verifiers and poison their pairs as inconclusive rather than being
    /// miscounted.
    pub fn record(
        &mut self,
        election: &Election,
        committee: &Committee,
        verdicts: &[Option<bool>],
        origin: &str,
    ) {
        assert_eq!(verdicts.len(), self.properties.len());
        self.evaluations += 1;
        if verdicts.iter().any(|v| v.is_none()) {
            self.inconclusive_evaluations += 1;
        }
        for (i, &a) in self.properties.iter().enumerate() {
            for (j, &b) in self.properties.iter().enumerate() {
                if i == j {
                    continue;
                }
                let counts = self.counts.get_mut(&(a, b)).expect("pair preallocated");
                match (verdicts[i], verdicts[j]) {
                    (Some(true), Some(true)) => counts.both_satisfied += 1,
                    (Some(true), Some(false)) => {
                        counts.premise_satisfied_conclusion_violated += 1;
                        let stored = self
                            .counterexamples
                            .iter()
                            .filter(|c| c.premise == a && c.conclusion == b)
                            .count();
                        if stored < self.counterexample_cap {
                            self.counterexamples.push(StoredCounterexample {
                                premise: a,
                                conclusion: b,
                                election: election.clone(),
                                committee: committee.clone(),
                                origin: origin.to_string(),
                            });
                        }
                    }
                    (Some(false), _) => counts.premise_violated += 1,
                    _ => counts.inconclusive += 1,
                }
            }
        }
    }

    pub fn pair(&self, a: Property, b: Property) -> Option<&PairCounts> {
        self.counts.get(&(a, b))
    }

    /// Counterexamples recorded against implications that are theorems.
    /// Any entry here is a build-failing bug.
    pub fn proven_arrow_counterexamples(&self) -> Vec<&StoredCounterexample> {
        self.counterexamples
            .iter()
            .filter(|c| PROVEN_IMPLICATIONS.contains(&(c.premise, c.conclusion)))
            .collect()
    }

    /// Re-runs the verifiers behind every stored counterexample.
    pub fn revalidate(&self, budget: &VerifierBudget) -> Result<bool> {
        for c in &self.counterexamples {
            let premise = evaluate_property(&c.election, &c.committee, c.premise, budget)?;
            let conclusion = evaluate_property(&c.election, &c.committee, c.conclusion, budget)?;
            if premise != Some(true) || conclusion != Some(false) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug)]
pub struct LabConfig {
    pub trials: u64,
    pub culture: BallotCulture,
    pub num_voters: usize,
    pub num_candidates: usize,
    pub committee_size: usize,
    /// Sample sizes uniformly up to the configured maxima instead of using
    /// them exactly.
    pub vary_sizes: bool,
    /// Only produce elections where the committee size divides the voter
    /// count.
    pub divisible_only: bool,
    pub rules: Vec<RuleKind>,
    pub properties: Vec<Property>,
    pub budget: VerifierBudget,
}

impl LabConfig {
    pub fn new(trials: u64, culture: BallotCulture, n: usize, m: usize, k: usize) -> Self {
        LabConfig {
            trials,
            culture,
            num_voters: n,
            num_candidates: m,
            committee_size: k,
            vary_sizes: false,
            divisible_only: false,
            rules: RuleKind::ALL.to_vec(),
            properties: Property::ALL.to_vec(),
            budget: VerifierBudget::default(),
        }
    }

    fn trial_sizes(&self, rng: &mut ChaCha12Rng) -> (usize, usize, usize) {
        if !self.vary_sizes {
            return (self.num_voters, self.num_candidates, self.committee_size);
        }
        let m = rng.random_range(1..=self.num_candidates);
        let k = rng.random_range(1..=self.committee_size.min(m));
        let n = if self.divisible_only {
            let max_mult = (self.num_voters / k).max(1);
            k * rng.random_range(1..=max_mult)
        } else {
            rng.random_range(1..=self.num_voters)
        };
        (n, m, k)
    }
}

/// Generates `trials` elections, runs every configured rule on each, and
/// folds all property verdicts into an [`ImplicationMatrix`].
pub fn run_matrix(config: &LabConfig) -> Result<ImplicationMatrix> {
    config.culture.model.validate()?;
    if !config.vary_sizes {
        if config.committee_size > config.num_candidates {
            return Err(Error::invalid("committee size exceeds candidate count"));
        }
        if config.divisible_only && config.num_voters % config.committee_size != 0 {
            return Err(Error::invalid(
                "divisible-only runs need k to divide n exactly",
            ));
        }
    }
    let mut matrix = ImplicationMatrix::new(config.properties.clone());
    for trial in 0..config.trials {
        let mut rng = rng_for(config.culture.seed, trial.wrapping_add(1));
        let (n, m, k) = config.trial_sizes(&mut rng);
        let ballots = config.culture.model.draw(&mut rng, n, m);
        let e = Election::new(m, k.min(m), ballots)?;
        for &rule in &config.rules {
            let committee = match rule.run(&e) {
                Ok(w) => w,
                Err(err) if err.is_budget() => {
                    matrix.evaluations += 1;
                    matrix.inconclusive_evaluations += 1;
                    continue;
                }
                Err(err) => return Err(err),
            };
            let origin = format!("trial {} rule {}", trial, rule);
            match evaluate_committee(&e, &committee, &config.properties, &config.budget)? {
                Some((e_eff, w_eff, verdicts)) => {
                    matrix.record(&e_eff, &w_eff, &verdicts, &origin)
                }
                None => {
                    matrix.evaluations += 1;
                    matrix.inconclusive_evaluations += 1;
                }
            }
        }
        matrix.trials_run += 1;
    }
    Ok(matrix)
}

/// Greedily deletes voters and candidates while the named axiom stays
/// violated. The result is a violating instance no larger than the input
/// in either dimension.
pub fn minimize_counterexample(
    e: &Election,
    committee: &Committee,
    axiom: Axiom,
    budget: &VerifierBudget,
) -> Result<(Election, Committee)> {
    let report = verify(e, committee, axiom, budget)?;
    if report.satisfied {
        return Err(Error::precondition(format!(
            "{} is not violated on this instance; nothing to minimize",
            axiom
        )));
    }
    let mut e = e.clone();
    let mut w = committee.clone();
    loop {
        let mut changed = false;

        let mut v = 0;
        while v < e.num_voters() && e.num_voters() > 1 {
            let candidate_instance = remove_voter(&e, v)?;
            let w2 = Committee::new(&candidate_instance, w.to_vec(), w.source())?;
            if still_violated(&candidate_instance, &w2, axiom, budget)? {
                e = candidate_instance;
                w = w2;
                changed = true;
            } else {
                v += 1;
            }
        }

        let mut c = 0;
        while c < e.num_candidates() && e.num_candidates() > e.committee_size() {
            let (candidate_instance, w2) = remove_candidate(&e, &w, c)?;
            if still_violated(&candidate_instance, &w2, axiom, budget)? {
                e = candidate_instance;
                w = w2;
                changed = true;
            } else {
                c += 1;
            }
        }

        if !changed {
            break;
        }
    }
    debug_assert!(!verify(&e, &w, axiom, budget)?.satisfied);
    Ok((e, w))
}

fn still_violated(
    e: &Election,
    committee: &Committee,
    axiom: Axiom,
    budget: &VerifierBudget,
) -> Result<bool> {
    match verify(e, committee, axiom, budget) {
        Ok(report) => Ok(!report.satisfied),
        // a deletion that makes the check infeasible is simply not taken
        Err(err) if err.is_budget() => Ok(false),
        Err(err) => Err(err),
    }
}

fn remove_voter(e: &Election, voter: usize) -> Result<Election> {
    let ballots: Vec<Vec<usize>> = (0..e.num_voters())
        .filter(|&v| v != voter)
        .map(|v| e.ballot(v).to_vec())
        .collect();
    Election::new(e.num_candidates(), e.committee_size(), ballots)
}

fn remove_candidate(
    e: &Election,
    committee: &Committee,
    candidate: usize,
) -> Result<(Election, Committee)> {
    let reindex = |c: usize| if c > candidate { c - 1 } else { c };
    let ballots: Vec<Vec<usize>> = e
        .ballots()
        .iter()
        .map(|b| b.iter().filter(|&c| c != candidate).map(reindex).collect())
        .collect();
    let e2 = Election::new(e.num_candidates() - 1, e.committee_size(), ballots)?;
    let members: Vec<usize> = committee
        .members()
        .iter()
        .filter(|&c| c != candidate)
        .map(reindex)
        .collect();
    let w2 = Committee::new(&e2, members, committee.source())?;
    Ok((e2, w2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ic(seed: u64) -> BallotCulture {
        BallotCulture {
            model: CultureModel::ImpartialCulture {
                approval_probability: 0.5,
            },
            seed,
        }
    }

    #[test]
    fn same_seed_same_election() {
        let a = generate(&ic(99), 6, 6, 3).unwrap();
        let b = generate(&ic(99), 6, 6, 3).unwrap();
        assert_eq!(a, b);
        let c = generate(&ic(100), 6, 6, 3).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn impartial_culture_mean_approvals() {
        let mut total = 0usize;
        for seed in 0..1000 {
            let e = generate(&ic(seed), 6, 6, 3).unwrap();
            total += (0..6).map(|v| e.ballot(v).len()).sum::<usize>();
        }
        let mean_per_voter = total as f64 / (1000.0 * 6.0);
        assert!(
            (mean_per_voter - 3.0).abs() < 0.1,
            "mean approvals per voter {} should be near m*p = 3",
            mean_per_voter
        );
    }

    #[test]
    fn party_list_elections_can_reach_per() {
        let culture = BallotCulture {
            model: CultureModel::PartyList { parties: 3 },
            seed: 4,
        };
        let e = generate(&culture, 6, 6, 3).unwrap();
        // one candidate per party perfectly represents
        let (w, _) = crate::rules::monroe_exact(&e).unwrap();
        let (ok, _) = check_per(&e, &w).unwrap();
        assert!(ok, "balanced party lists admit perfect representation");
    }

    #[test]
    fn invalid_culture_parameters_are_rejected() {
        let bad = BallotCulture {
            model: CultureModel::ImpartialCulture {
                approval_probability: 1.0,
            },
            seed: 0,
        };
        assert!(generate(&bad, 3, 3, 1).is_err());
        let bad = BallotCulture {
            model: CultureModel::Urn { mixing: 1.5 },
            seed: 0,
        };
        assert!(generate(&bad, 3, 3, 1).is_err());
    }

    #[test]
    fn urn_culture_generates_and_is_deterministic() {
        let culture = BallotCulture {
            model: CultureModel::Urn { mixing: 0.7 },
            seed: 11,
        };
        assert_eq!(
            generate(&culture, 8, 5, 2).unwrap(),
            generate(&culture, 8, 5, 2).unwrap()
        );
    }

    #[test]
    fn zero_trials_empty_matrix() {
        let config = LabConfig::new(0, ic(1), 4, 4, 2);
        let matrix = run_matrix(&config).unwrap();
        assert_eq!(matrix.trials_run, 0);
        assert_eq!(matrix.evaluations, 0);
        assert!(matrix.counterexamples.is_empty());
    }

    #[test]
    fn small_matrix_run_has_no_proven_arrow_counterexamples() {
        let mut config = LabConfig::new(25, ic(7), 6, 6, 3);
        config.vary_sizes = true;
        let matrix = run_matrix(&config).unwrap();
        assert_eq!(matrix.trials_run, 25);
        assert!(matrix.proven_arrow_counterexamples().is_empty());
        assert!(matrix.revalidate(&VerifierBudget::default()).unwrap());
        // reproducibility
        let again = run_matrix(&config).unwrap();
        assert_eq!(matrix.counts, again.counts);
    }

    #[test]
    fn minimize_removes_silent_voters() {
        // A JR violation with slack: eight voters want candidate 0, the
        // two-seat committee ignores them, and three extra voters approve
        // nothing at all.
        let mut ballots = vec![vec![0]; 8];
        ballots.extend(vec![vec![]; 3]);
        let e = Election::new(3, 2, ballots).unwrap();
        let w = Committee::new(&e, [1, 2], "external").unwrap();
        let budget = VerifierBudget::default();
        assert!(!verify(&e, &w, Axiom::Jr, &budget).unwrap().satisfied);
        let (small, w2) = minimize_counterexample(&e, &w, Axiom::Jr, &budget).unwrap();
        assert!(small.num_voters() < e.num_voters());
        assert!((0..small.num_voters()).all(|v| !small.ballot(v).is_empty()),
            "silent padding voters must be gone");
        assert!(!verify(&small, &w2, Axiom::Jr, &budget).unwrap().satisfied);
    }

    #[test]
    fn minimize_leaves_minimal_instances_alone() {
        // single voter, single candidate, empty committee: JR-violated and
        // unshrinkable
        let e = Election::new(1, 1, vec![vec![0]]).unwrap();
        let w = Committee::new(&e, [], "external").unwrap();
        let budget = VerifierBudget::default();
        assert!(!verify(&e, &w, Axiom::Jr, &budget).unwrap().satisfied);
        let (small, w2) = minimize_counterexample(&e, &w, Axiom::Jr, &budget).unwrap();
        assert_eq!(small.num_voters(), 1);
        assert_eq!(small.num_candidates(), 1);
        assert!(w2.is_empty());
    }

    #[test]
    fn minimize_requires_a_violation() {
        let e = Election::new(1, 1, vec![vec![0]]).unwrap();
        let w = Committee::new(&e, [0], "external").unwrap();
        assert!(matches!(
            minimize_counterexample(&e, &w, Axiom::Jr, &VerifierBudget::default()),
            Err(Error::Precondition(_))
        ));
    }
}
