//! Exact decision procedures, with violation certificates, for JR, PJR,
//! EJR, FJR, FPJR, EJR+, PJR+, and core stability.
//!
//! JR and EJR+ are polynomial scans. The rest search witness candidate
//! sets `T` exponentially, which is exact and complete at desk scale; a
//! [`VerifierBudget`] aborts runaway searches with an error rather than
//! ever returning a wrong verdict.
//!
//! For the axioms whose violating coalition is defined through its
//! *collective* utility (PJR, FPJR, PJR+), coalitions are not enumerated
//! directly. Instead the search enumerates the allowed representation set
//! `R ⊆ W` that the coalition's committee footprint must fit inside; the
//! maximal coalition for a given `(T, ℓ, R)` is then a single scan over
//! voters. Only footprint unions that some voter subset actually attains
//! can matter, so `R` ranges over the closure of per-voter footprints
//! `A_v ∩ W` under union.
//!
//! Two prunes keep the searches fast without losing completeness:
//! a weakly `ℓ`-cohesive coalition always contains a candidate of `T`
//! approved by at least `ℓ·n/k` of its members, so `(T, ℓ)` pairs where no
//! member of `T` has that much support overall are skipped; and for the
//! unanimous axioms (PJR, EJR) the coalition lies inside every member's
//! supporter set, so `T`s whose least-supported member is too weak are
//! skipped.

use crate::bitset::BitSet;
use crate::combinatorics::for_each_combination;
use crate::election::{
    check_weak_cohesion, Axiom, AxiomReport, Certificate, CohesionCertificate, Committee,
    CoreDeviation, Election,
};
use crate::error::{Error, Result};
use std::collections::HashSet;

/// Guards for the exponential searches. Exceeding a guard aborts with
/// [`Error::SearchBudget`], never a wrong verdict: in particular, capping
/// `max_witness_size` below the sound bound `min(k, m)` turns a
/// "satisfied" outcome into an error, because the search was incomplete.
#[derive(Clone, Debug)]
pub struct VerifierBudget {
    /// Largest witness set size to explore; `None` means the full sound
    /// bound `min(k, m)`.
    pub max_witness_size: Option<usize>,
    /// Abort after examining this many witness sets.
    pub max_subsets: u64,
}

impl Default for VerifierBudget {
    fn default() -> Self {
        VerifierBudget {
            max_witness_size: None,
            max_subsets: 50_000_000,
        }
    }
}

struct Meter {
    used: u64,
    limit: u64,
}

impl Meter {
    fn new(limit: u64) -> Self {
        Meter { used: 0, limit }
    }

    fn tick(&mut self, amount: u64) -> Result<()> {
        self.used = self.used.saturating_add(amount);
        if self.used > self.limit {
            Err(Error::SearchBudget {
                examined: self.used,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// Shared per-call precomputation.
struct Ctx<'a> {
    e: &'a Election,
    w: &'a BitSet,
    n: usize,
    m: usize,
    k: usize,
    /// `|A_v ∩ W|` per voter.
    utilities: Vec<usize>,
    /// `A_v ∩ W` per voter.
    footprints: Vec<BitSet>,
    /// `|N_c|` per candidate.
    support: Vec<usize>,
}

impl<'a> Ctx<'a> {
    fn new(e: &'a Election, committee: &'a Committee) -> Self {
        let w = committee.members();
        let footprints: Vec<BitSet> = e.ballots().iter().map(|b| b.intersection(w)).collect();
        let utilities = footprints.iter().map(|f| f.len()).collect();
        let support = (0..e.num_candidates())
            .map(|c| e.supporter_count(c))
            .collect();
        Ctx {
            e,
            w,
            n: e.num_voters(),
            m: e.num_candidates(),
            k: e.committee_size(),
            utilities,
            footprints,
            support,
        }
    }

    /// Witness sets never need to exceed min(k, m): the coalition size
    /// bound `|S|·k >= |T|·n` with `|S| <= n` forces `|T| <= k`.
    fn sound_witness_bound(&self) -> usize {
        self.k.min(self.m)
    }

    /// All candidate-set values attainable as unions of voter footprints,
    /// including the empty union, sorted by (size, members). These are the
    /// only representation sets `R` a violation search needs.
    fn footprint_unions(&self, meter: &mut Meter) -> Result<Vec<BitSet>> {
        let mut distinct: Vec<&BitSet> = Vec::new();
        for f in &self.footprints {
            if !distinct.iter().any(|d| *d == f) {
                distinct.push(f);
            }
        }
        let mut unions: HashSet<BitSet> = HashSet::new();
        unions.insert(BitSet::new(self.m));
        for f in distinct {
            let additions: Vec<BitSet> = unions.iter().map(|u| u.union(f)).collect();
            for u in additions {
                meter.tick(1)?;
                unions.insert(u);
            }
        }
        let mut out: Vec<BitSet> = unions.into_iter().collect();
        out.sort_unstable_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    fn cohesion_cert(&self, coalition: BitSet, witness: &[usize], level: usize) -> Certificate {
        Certificate::Cohesion(
            CohesionCertificate::new(
                coalition,
                BitSet::from_indices(self.m, witness),
                level,
            )
            .expect("verifier emits well-formed certificates"),
        )
    }
}

/// JR: no coalition owning a full seat's worth of voters may unanimously
/// approve a candidate while every member has zero utility. Polynomial.
pub fn verify_jr(e: &Election, committee: &Committee) -> AxiomReport {
    let ctx = Ctx::new(e, committee);
    for c in 0..ctx.m {
        let mut starved = BitSet::new(ctx.n);
        for v in e.supporters(c).expect("in range").iter() {
            if ctx.utilities[v] == 0 {
                starved.insert(v);
            }
        }
        if starved.len() * ctx.k >= ctx.n {
            return AxiomReport::violated(
                Axiom::Jr,
                Certificate::Deprivation {
                    coalition: starved,
                    candidate: c,
                    level: 1,
                },
            );
        }
    }
    AxiomReport::satisfied(Axiom::Jr)
}

/// PJR: every `ℓ`-cohesive coalition collectively approves at least `ℓ`
/// committee members.
pub fn verify_pjr(e: &Election, committee: &Committee, budget: &VerifierBudget) -> Result<AxiomReport> {
    let ctx = Ctx::new(e, committee);
    let mut meter = Meter::new(budget.max_subsets);
    let unions = ctx.footprint_unions(&mut meter)?;
    let pool: Vec<usize> = (0..ctx.m).collect();
    let bound = ctx.sound_witness_bound();
    let cap = budget.max_witness_size.unwrap_or(bound).min(bound);

    for level in 1..=cap {
        let mut found: Option<Certificate> = None;
        let mut aborted: Option<Error> = None;
        for_each_combination(&pool, level, |tset| {
            if let Err(err) = meter.tick(1) {
                aborted = Some(err);
                return false;
            }
            // every coalition member approves all of T
            let min_sup = tset.iter().map(|&c| ctx.support[c]).min().unwrap();
            if min_sup * ctx.k < level * ctx.n {
                return true;
            }
            let tb = BitSet::from_indices(ctx.m, tset);
            let mut unanimous = BitSet::new(ctx.n);
            for v in 0..ctx.n {
                if ctx.e.ballot(v).intersection_count(&tb) == level {
                    unanimous.insert(v);
                }
            }
            if unanimous.len() * ctx.k < level * ctx.n {
                return true;
            }
            for r in &unions {
                if r.len() + 1 > level {
                    break;
                }
                let mut coalition = BitSet::new(ctx.n);
                for v in unanimous.iter() {
                    if ctx.footprints[v].is_subset(r) {
                        coalition.insert(v);
                    }
                }
                if coalition.len() * ctx.k >= level * ctx.n {
                    found = Some(ctx.cohesion_cert(coalition, tset, level));
                    return false;
                }
            }
            true
        });
        if let Some(err) = aborted {
            return Err(err);
        }
        if let Some(cert) = found {
            return Ok(AxiomReport::violated(Axiom::Pjr, cert));
        }
    }
    finish_search(Axiom::Pjr, cap, bound, &meter)
}

/// EJR: every `ℓ`-cohesive coalition contains a voter with utility `ℓ`.
pub fn verify_ejr(e: &Election, committee: &Committee, budget: &VerifierBudget) -> Result<AxiomReport> {
    let ctx = Ctx::new(e, committee);
    let mut meter = Meter::new(budget.max_subsets);
    let pool: Vec<usize> = (0..ctx.m).collect();
    let bound = ctx.sound_witness_bound();
    let cap = budget.max_witness_size.unwrap_or(bound).min(bound);

    for level in 1..=cap {
        let mut found: Option<Certificate> = None;
        let mut aborted: Option<Error> = None;
        for_each_combination(&pool, level, |tset| {
            if let Err(err) = meter.tick(1) {
                aborted = Some(err);
                return false;
            }
            let min_sup = tset.iter().map(|&c| ctx.support[c]).min().unwrap();
            if min_sup * ctx.k < level * ctx.n {
                return true;
            }
            let tb = BitSet::from_indices(ctx.m, tset);
            let mut coalition = BitSet::new(ctx.n);
            for v in 0..ctx.n {
                if ctx.utilities[v] < level && ctx.e.ballot(v).intersection_count(&tb) == level {
                    coalition.insert(v);
                }
            }
            if coalition.len() * ctx.k >= level * ctx.n {
                found = Some(ctx.cohesion_cert(coalition, tset, level));
                return false;
            }
            true
        });
        if let Some(err) = aborted {
            return Err(err);
        }
        if let Some(cert) = found {
            return Ok(AxiomReport::violated(Axiom::Ejr, cert));
        }
    }
    finish_search(Axiom::Ejr, cap, bound, &meter)
}

/// FJR: every weakly `ℓ`-cohesive coalition contains a voter with utility
/// `ℓ`.
pub fn verify_fjr(e: &Election, committee: &Committee, budget: &VerifierBudget) -> Result<AxiomReport> {
    let ctx = Ctx::new(e, committee);
    let mut meter = Meter::new(budget.max_subsets);
    let pool: Vec<usize> = (0..ctx.m).collect();
    let bound = ctx.sound_witness_bound();
    let cap = budget.max_witness_size.unwrap_or(bound).min(bound);

    for size in 1..=cap {
        let mut found: Option<Certificate> = None;
        let mut aborted: Option<Error> = None;
        for_each_combination(&pool, size, |tset| {
            if let Err(err) = meter.tick(1) {
                aborted = Some(err);
                return false;
            }
            let max_sup = tset.iter().map(|&c| ctx.support[c]).max().unwrap();
            let tb = BitSet::from_indices(ctx.m, tset);
            // member[level] = |{v : |A_v∩T| >= level and u_v < level}|,
            // accumulated as interval increments per voter
            let mut diff = vec![0isize; size + 2];
            for v in 0..ctx.n {
                let cnt = ctx.e.ballot(v).intersection_count(&tb);
                let lo = ctx.utilities[v] + 1;
                let hi = cnt.min(size);
                if lo <= hi {
                    diff[lo] += 1;
                    diff[hi + 1] -= 1;
                }
            }
            let mut members = 0isize;
            for level in 1..=size {
                members += diff[level];
                // a violating coalition needs a witness candidate with
                // support level*n/k inside it
                if max_sup * ctx.k < level * ctx.n {
                    break;
                }
                if (members as usize) * ctx.k >= size * ctx.n {
                    let mut coalition = BitSet::new(ctx.n);
                    for v in 0..ctx.n {
                        if ctx.utilities[v] < level
                            && ctx.e.ballot(v).intersection_count(&tb) >= level
                        {
                            coalition.insert(v);
                        }
                    }
                    found = Some(ctx.cohesion_cert(coalition, tset, level));
                    return false;
                }
            }
            true
        });
        if let Some(err) = aborted {
            return Err(err);
        }
        if let Some(cert) = found {
            return Ok(AxiomReport::violated(Axiom::Fjr, cert));
        }
    }
    finish_search(Axiom::Fjr, cap, bound, &meter)
}

/// FPJR: every weakly `ℓ`-cohesive coalition collectively approves at
/// least `ℓ` committee members.
pub fn verify_fpjr(e: &Election, committee: &Committee, budget: &VerifierBudget) -> Result<AxiomReport> {
    let ctx = Ctx::new(e, committee);
    let mut meter = Meter::new(budget.max_subsets);
    let unions = ctx.footprint_unions(&mut meter)?;
    let pool: Vec<usize> = (0..ctx.m).collect();
    let bound = ctx.sound_witness_bound();
    let cap = budget.max_witness_size.unwrap_or(bound).min(bound);

    for size in 1..=cap {
        let mut found: Option<Certificate> = None;
        let mut aborted: Option<Error> = None;
        for_each_combination(&pool, size, |tset| {
            if let Err(err) = meter.tick(1) {
                aborted = Some(err);
                return false;
            }
            let max_sup = tset.iter().map(|&c| ctx.support[c]).max().unwrap();
            let tb = BitSet::from_indices(ctx.m, tset);
            // eligible[level] = |{v : |A_v∩T| >= level}| via suffix sums
            let mut occurrences = vec![0usize; size + 1];
            for v in 0..ctx.n {
                let cnt = ctx.e.ballot(v).intersection_count(&tb).min(size);
                occurrences[cnt] += 1;
            }
            let mut eligible = vec![0usize; size + 2];
            for level in (1..=size).rev() {
                eligible[level] = eligible[level + 1] + occurrences[level];
            }
            for level in 1..=size {
                if max_sup * ctx.k < level * ctx.n {
                    break; // witness-candidate prune, monotone in level
                }
                if eligible[level] * ctx.k < size * ctx.n {
                    break; // eligible voters shrink as level grows
                }
                let mut pool_voters = BitSet::new(ctx.n);
                for v in 0..ctx.n {
                    if ctx.e.ballot(v).intersection_count(&tb) >= level {
                        pool_voters.insert(v);
                    }
                }
                for r in &unions {
                    if r.len() + 1 > level {
                        break;
                    }
                    if let Err(err) = meter.tick(1) {
                        aborted = Some(err);
                        return false;
                    }
                    let mut coalition = BitSet::new(ctx.n);
                    for v in pool_voters.iter() {
                        if ctx.footprints[v].is_subset(r) {
                            coalition.insert(v);
                        }
                    }
                    if coalition.len() * ctx.k >= size * ctx.n {
                        found = Some(ctx.cohesion_cert(coalition, tset, level));
                        return false;
                    }
                }
            }
            true
        });
        if let Some(err) = aborted {
            return Err(err);
        }
        if let Some(cert) = found {
            return Ok(AxiomReport::violated(Axiom::Fpjr, cert));
        }
    }
    finish_search(Axiom::Fpjr, cap, bound, &meter)
}

/// Core stability: no coalition has a proportionally sized alternative set
/// that every member strictly prefers.
pub fn verify_core(e: &Election, committee: &Committee, budget: &VerifierBudget) -> Result<AxiomReport> {
    let ctx = Ctx::new(e, committee);
    let mut meter = Meter::new(budget.max_subsets);
    // a minimal deviation only contains candidates someone in the
    // coalition approves, so unsupported candidates never participate
    let pool: Vec<usize> = (0..ctx.m).filter(|&c| ctx.support[c] > 0).collect();
    let bound = ctx.sound_witness_bound();
    let cap = budget.max_witness_size.unwrap_or(bound).min(bound);

    for size in 1..=cap.min(pool.len()) {
        let mut found: Option<Certificate> = None;
        let mut aborted: Option<Error> = None;
        for_each_combination(&pool, size, |tset| {
            if let Err(err) = meter.tick(1) {
                aborted = Some(err);
                return false;
            }
            let tb = BitSet::from_indices(ctx.m, tset);
            let mut coalition = BitSet::new(ctx.n);
            for v in 0..ctx.n {
                if ctx.e.ballot(v).intersection_count(&tb) > ctx.utilities[v] {
                    coalition.insert(v);
                }
            }
            if !coalition.is_empty() && coalition.len() * ctx.k >= size * ctx.n {
                // first hit is size-minimal, so every member of T is
                // approved inside the coalition
                debug_assert!(tset.iter().all(|&c| {
                    ctx.e
                        .supporters(c)
                        .expect("in range")
                        .intersection_count(&coalition)
                        > 0
                }));
                found = Some(Certificate::Deviation(CoreDeviation {
                    coalition,
                    alternative: tb.clone(),
                }));
                return false;
            }
            true
        });
        if let Some(err) = aborted {
            return Err(err);
        }
        if let Some(cert) = found {
            return Ok(AxiomReport::violated(Axiom::Core, cert));
        }
    }
    finish_search(Axiom::Core, cap.min(pool.len()), bound.min(pool.len()), &meter)
}

/// EJR+: every `ℓ`-deprived coalition (unanimous on a non-winner, owning
/// `ℓ` seats' worth of voters) contains a voter with utility `ℓ`.
/// Polynomial.
pub fn verify_ejr_plus(e: &Election, committee: &Committee) -> AxiomReport {
    let ctx = Ctx::new(e, committee);
    for level in 1..=ctx.k {
        for c in 0..ctx.m {
            if ctx.w.contains(c) {
                continue;
            }
            let mut coalition = BitSet::new(ctx.n);
            for v in e.supporters(c).expect("in range").iter() {
                if ctx.utilities[v] < level {
                    coalition.insert(v);
                }
            }
            if coalition.len() * ctx.k >= level * ctx.n {
                return AxiomReport::violated(
                    Axiom::EjrPlus,
                    Certificate::Deprivation {
                        coalition,
                        candidate: c,
                        level,
                    },
                );
            }
        }
    }
    AxiomReport::satisfied(Axiom::EjrPlus)
}

/// PJR+: every `ℓ`-deprived coalition collectively approves at least `ℓ`
/// committee members.
pub fn verify_pjr_plus(e: &Election, committee: &Committee, budget: &VerifierBudget) -> Result<AxiomReport> {
    let ctx = Ctx::new(e, committee);
    let mut meter = Meter::new(budget.max_subsets);
    let unions = ctx.footprint_unions(&mut meter)?;
    for level in 1..=ctx.k {
        for c in 0..ctx.m {
            if ctx.w.contains(c) {
                continue;
            }
            let supporters = e.supporters(c).expect("in range");
            if supporters.len() * ctx.k < level * ctx.n {
                continue;
            }
            for r in &unions {
                if r.len() + 1 > level {
                    break;
                }
                meter.tick(1)?;
                let mut coalition = BitSet::new(ctx.n);
                for v in supporters.iter() {
                    if ctx.footprints[v].is_subset(r) {
                        coalition.insert(v);
                    }
                }
                if coalition.len() * ctx.k >= level * ctx.n {
                    return Ok(AxiomReport::violated(
                        Axiom::PjrPlus,
                        Certificate::Deprivation {
                            coalition,
                            candidate: c,
                            level,
                        },
                    ));
                }
            }
        }
    }
    Ok(AxiomReport::satisfied(Axiom::PjrPlus))
}

fn finish_search(axiom: Axiom, cap: usize, bound: usize, meter: &Meter) -> Result<AxiomReport> {
    if cap < bound {
        // the search was truncated, so "no violation found" is not a verdict
        return Err(Error::SearchBudget {
            examined: meter.used,
            limit: meter.limit,
        });
    }
    Ok(AxiomReport::satisfied(axiom))
}

/// Runs the verifier for `axiom`.
pub fn verify(
    e: &Election,
    committee: &Committee,
    axiom: Axiom,
    budget: &VerifierBudget,
) -> Result<AxiomReport> {
    match axiom {
        Axiom::Jr => Ok(verify_jr(e, committee)),
        Axiom::Pjr => verify_pjr(e, committee, budget),
        Axiom::Ejr => verify_ejr(e, committee, budget),
        Axiom::Fjr => verify_fjr(e, committee, budget),
        Axiom::Fpjr => verify_fpjr(e, committee, budget),
        Axiom::EjrPlus => Ok(verify_ejr_plus(e, committee)),
        Axiom::PjrPlus => verify_pjr_plus(e, committee, budget),
        Axiom::Core => verify_core(e, committee, budget),
    }
}

/// Re-validates a violation certificate against the raw axiom definitions,
/// with no search involved. Used by reports, tests, and anyone receiving a
/// "violated" verdict secondhand.
pub fn certificate_violates(
    e: &Election,
    committee: &Committee,
    axiom: Axiom,
    certificate: &Certificate,
) -> Result<bool> {
    let w = committee.members();
    let n = e.num_voters();
    let k = e.committee_size();
    match (axiom, certificate) {
        (Axiom::Jr, Certificate::Deprivation { coalition, candidate, level }) => {
            e.check_candidate(*candidate)?;
            Ok(*level == 1
                && !coalition.is_empty()
                && coalition.len() * k >= n
                && coalition.iter().all(|v| {
                    e.ballot(v).contains(*candidate) && e.ballot(v).intersection_count(w) == 0
                }))
        }
        (Axiom::Pjr, Certificate::Cohesion(cert)) => {
            // an ℓ-cohesive coalition: unanimous on an ℓ-sized witness
            let unanimous = cert
                .coalition
                .iter()
                .all(|v| cert.witness.is_subset(e.ballot(v)));
            Ok(unanimous
                && cert.witness.len() >= cert.level
                && cert.coalition.len() * k >= cert.level * n
                && e.collective_utility(&cert.coalition, w)? < cert.level)
        }
        (Axiom::Ejr, Certificate::Cohesion(cert)) => {
            let unanimous = cert
                .coalition
                .iter()
                .all(|v| cert.witness.is_subset(e.ballot(v)));
            Ok(unanimous
                && cert.witness.len() >= cert.level
                && cert.coalition.len() * k >= cert.level * n
                && cert
                    .coalition
                    .iter()
                    .all(|v| e.ballot(v).intersection_count(w) < cert.level))
        }
        (Axiom::Fjr, Certificate::Cohesion(cert)) => Ok(check_weak_cohesion(e, cert)?
            && cert
                .coalition
                .iter()
                .all(|v| e.ballot(v).intersection_count(w) < cert.level)),
        (Axiom::Fpjr, Certificate::Cohesion(cert)) => Ok(check_weak_cohesion(e, cert)?
            && e.collective_utility(&cert.coalition, w)? < cert.level),
        (Axiom::Core, Certificate::Deviation(dev)) => {
            Ok(!dev.coalition.is_empty()
                && !dev.alternative.is_empty()
                && dev.coalition.len() * k >= dev.alternative.len() * n
                && dev.coalition.iter().all(|v| {
                    e.ballot(v).intersection_count(&dev.alternative)
                        > e.ballot(v).intersection_count(w)
                }))
        }
        (Axiom::EjrPlus, Certificate::Deprivation { coalition, candidate, level }) => {
            e.check_candidate(*candidate)?;
            Ok(!w.contains(*candidate)
                && !coalition.is_empty()
                && coalition.len() * k >= level * n
                && coalition.iter().all(|v| {
                    e.ballot(v).contains(*candidate)
                        && e.ballot(v).intersection_count(w) < *level
                }))
        }
        (Axiom::PjrPlus, Certificate::Deprivation { coalition, candidate, level }) => {
            e.check_candidate(*candidate)?;
            Ok(!w.contains(*candidate)
                && !coalition.is_empty()
                && coalition.len() * k >= level * n
                && coalition.iter().all(|v| e.ballot(v).contains(*candidate))
                && e.collective_utility(coalition, w)? < *level)
        }
        _ => Err(Error::invalid(format!(
            "certificate kind does not match axiom {}",
            axiom
        ))),
    }
}
