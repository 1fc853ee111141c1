//! The JSON report schema. Every verdict the CLI prints in `--json` mode
//! is reproducible from the document plus the election file alone: the
//! certificate, price system, or partition it carries re-checks against
//! the raw definitions without re-running any search. Rationals are
//! serialized as `"num/den"` strings in lowest terms.

use crate::format::serialize_election;
use proprep_core::kernels::Rat;
use proprep_core::lab::ImplicationMatrix;
use proprep_core::pricing::{PerPartition, PriceSystem};
use proprep_core::{Certificate, Committee, Election};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn rational_string(r: &Rat) -> String {
    // Ratio keeps itself reduced; denominator 1 still prints explicitly
    format!("{}/{}", r.numer(), r.denom())
}

/// `sha256:` digest of the canonical election serialization.
pub fn election_digest(e: &Election) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serialize_election(e).as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}

#[derive(Serialize, Debug)]
pub struct ReportDocument {
    pub election_digest: String,
    pub committee: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axiom: Option<String>,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub price_system: Option<PriceSystemDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub score: Option<String>,
}

impl ReportDocument {
    pub fn new(e: &Election, committee: &Committee) -> Self {
        ReportDocument {
            election_digest: election_digest(e),
            committee: committee.to_vec(),
            rule: None,
            axiom: None,
            verdict: "computed".to_string(),
            certificate: None,
            price_system: None,
            partition: None,
            score: None,
        }
    }
}

#[derive(Serialize, Debug)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateDoc {
    Cohesion {
        coalition: Vec<usize>,
        witness: Vec<usize>,
        level: usize,
    },
    Deviation {
        coalition: Vec<usize>,
        alternative: Vec<usize>,
    },
    Deprivation {
        coalition: Vec<usize>,
        candidate: usize,
        level: usize,
    },
    Reason {
        reason: String,
    },
}

impl From<&Certificate> for CertificateDoc {
    fn from(cert: &Certificate) -> Self {
        match cert {
            Certificate::Cohesion(c) => CertificateDoc::Cohesion {
                coalition: c.coalition.to_vec(),
                witness: c.witness.to_vec(),
                level: c.level,
            },
            Certificate::Deviation(d) => CertificateDoc::Deviation {
                coalition: d.coalition.to_vec(),
                alternative: d.alternative.to_vec(),
            },
            Certificate::Deprivation {
                coalition,
                candidate,
                level,
            } => CertificateDoc::Deprivation {
                coalition: coalition.to_vec(),
                candidate: *candidate,
                level: *level,
            },
            Certificate::Reason(reason) => CertificateDoc::Reason {
                reason: reason.clone(),
            },
        }
    }
}

#[derive(Serialize, Debug)]
pub struct PaymentDoc {
    pub voter: usize,
    pub candidate: usize,
    pub amount: String,
}

#[derive(Serialize, Debug)]
pub struct PriceSystemDoc {
    pub price: String,
    pub payments: Vec<PaymentDoc>,
}

impl From<&PriceSystem> for PriceSystemDoc {
    fn from(ps: &PriceSystem) -> Self {
        PriceSystemDoc {
            price: rational_string(&ps.price),
            payments: ps
                .payments
                .iter()
                .map(|(&(voter, candidate), amount)| PaymentDoc {
                    voter,
                    candidate,
                    amount: rational_string(amount),
                })
                .collect(),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct PartitionDoc {
    pub parts: Vec<Vec<usize>>,
    pub assigned: Vec<usize>,
}

impl From<&PerPartition> for PartitionDoc {
    fn from(pp: &PerPartition) -> Self {
        PartitionDoc {
            parts: pp.parts.iter().map(|p| p.to_vec()).collect(),
            assigned: pp.assigned.clone(),
        }
    }
}

#[derive(Serialize, Debug)]
pub struct ReductionDoc {
    pub algorithm: String,
    pub ell: usize,
    pub election_appr: String,
    pub election_digest: String,
    pub winner: Vec<usize>,
    pub voter_groups: Vec<u8>,
    pub candidate_groups: Vec<u8>,
    pub phi: Vec<(usize, usize)>,
}

#[derive(Serialize, Debug)]
pub struct BicliqueDoc {
    pub ell: usize,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<usize>>,
}

#[derive(Serialize, Debug)]
pub struct MatrixPairDoc {
    pub premise: String,
    pub conclusion: String,
    pub proven: bool,
    pub both_satisfied: u64,
    pub premise_satisfied_conclusion_violated: u64,
    pub premise_violated: u64,
    pub inconclusive: u64,
}

#[derive(Serialize, Debug)]
pub struct CounterexampleDoc {
    pub premise: String,
    pub conclusion: String,
    pub origin: String,
    pub election_appr: String,
    pub committee: Vec<usize>,
}

#[derive(Serialize, Debug)]
pub struct MatrixDoc {
    pub trials: u64,
    pub evaluations: u64,
    pub inconclusive_evaluations: u64,
    pub pairs: Vec<MatrixPairDoc>,
    pub counterexamples: Vec<CounterexampleDoc>,
}

impl From<&ImplicationMatrix> for MatrixDoc {
    fn from(matrix: &ImplicationMatrix) -> Self {
        use proprep_core::lab::PROVEN_IMPLICATIONS;
        MatrixDoc {
            trials: matrix.trials_run,
            evaluations: matrix.evaluations,
            inconclusive_evaluations: matrix.inconclusive_evaluations,
            pairs: matrix
                .counts
                .iter()
                .map(|(&(a, b), counts)| MatrixPairDoc {
                    premise: a.name().to_string(),
                    conclusion: b.name().to_string(),
                    proven: PROVEN_IMPLICATIONS.contains(&(a, b)),
                    both_satisfied: counts.both_satisfied,
                    premise_satisfied_conclusion_violated: counts
                        .premise_satisfied_conclusion_violated,
                    premise_violated: counts.premise_violated,
                    inconclusive: counts.inconclusive,
                })
                .collect(),
            counterexamples: matrix
                .counterexamples
                .iter()
                .map(|c| CounterexampleDoc {
                    premise: c.premise.name().to_string(),
                    conclusion: c.conclusion.name().to_string(),
                    origin: c.origin.clone(),
                    election_appr: serialize_election(&c.election),
                    committee: c.committee.to_vec(),
                })
                .collect(),
        }
    }
}
