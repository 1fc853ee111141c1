//! `proprep`: compute proportional committees and verify representation
//! axioms from the command line.
//!
//! Exit codes: 0 = computed (and satisfied, for verification commands);
//! 1 = violated / not found, with the certificate printed; 2 = usage or
//! parse error; 3 = an enumeration or search budget was exceeded.

mod format;
mod report;

use clap::{Parser, Subcommand};
use format::{parse_committee_arg, parse_election, serialize_election};
use proprep_core::lab::{run_matrix, BallotCulture, CultureModel, LabConfig, Property};
use proprep_core::pricing::{check_per, check_priceable};
use proprep_core::reduce::{biclique_exists, reduce, BipartiteGraph, ReductionKind};
use proprep_core::rules::RuleKind;
use proprep_core::verify::{verify, VerifierBudget};
use proprep_core::{Axiom, Committee, Election, Error};
use report::{
    election_digest, BicliqueDoc, CertificateDoc, MatrixDoc, PartitionDoc, PriceSystemDoc,
    ReductionDoc, ReportDocument,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "proprep",
    version,
    about = "Proportional committee rules and justified-representation verifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a voting rule on an election file.
    Elect {
        /// pav | seq-pav | ls-pav | monroe | greedy-monroe | equal-shares | seq-phragmen
        #[arg(long)]
        rule: String,
        /// Election in .appr format.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Verify an axiom (or priceability/perfect representation) of a committee.
    Verify {
        /// jr | pjr | ejr | fjr | fpjr | ejr-plus | pjr-plus | core | priceable | per
        #[arg(long)]
        axiom: String,
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated 0-based member indices, e.g. `0,2,5`.
        #[arg(long)]
        committee: String,
        #[arg(long)]
        json: bool,
        /// Witness-set search guard (default 50000000).
        #[arg(long)]
        max_subsets: Option<u64>,
        /// Cap on witness-set size (soundness: capping below min(k, m)
        /// turns "satisfied" into a budget error).
        #[arg(long)]
        max_witness: Option<usize>,
    },
    /// Decide priceability and print a price system.
    Price {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        committee: String,
        #[arg(long)]
        json: bool,
    },
    /// Decide perfect representation and print the voter partition.
    Per {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        committee: String,
        #[arg(long)]
        json: bool,
    },
    /// Compile a balanced-biclique instance into a hardness election.
    Reduce {
        /// pjr | ejr
        #[arg(long)]
        alg: String,
        #[arg(long)]
        ell: usize,
        /// Bipartite graph file: `|L| |R|` header, then `u v` edges.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for an ell x ell biclique by brute force.
    Biclique {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        json: bool,
    },
    /// Random elections: run rules, verify axioms, tabulate implications.
    Lab {
        #[arg(long)]
        trials: u64,
        /// ic | party | urn
        #[arg(long, default_value = "ic")]
        model: String,
        /// Approval probability for the ic model.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Party count for the party model.
        #[arg(long, default_value_t = 3)]
        parties: usize,
        /// Copy probability for the urn model.
        #[arg(long, default_value_t = 0.5)]
        mixing: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Sample sizes uniformly up to --n/--m/--k instead of exactly.
        #[arg(long)]
        vary_sizes: bool,
        /// Keep k dividing n.
        #[arg(long)]
        divisible: bool,
        /// Comma-separated rule names (default: all).
        #[arg(long)]
        rules: Option<String>,
        /// Comma-separated property names (default: all).
        #[arg(long)]
        properties: Option<String>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        max_subsets: Option<u64>,
    },
    /// Shrink a violating (election, committee) pair while preserving the
    /// violation.
    Minimize {
        #[arg(long)]
        axiom: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        committee: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        max_subsets: Option<u64>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure {
            code: if err.is_budget() { 3 } else { 2 },
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {}", path.display(), e)))
}

fn load_election(path: &Path) -> Result<Election, Failure> {
    let text = read_file(path)?;
    parse_election(&text)
        .map_err(|e| Failure::usage(format!("{}: {}", path.display(), e)))
}

fn load_committee(e: &Election, arg: &str) -> Result<Committee, Failure> {
    let members = parse_committee_arg(arg).map_err(Failure::usage)?;
    Committee::new(e, members, "external").map_err(Failure::from)
}

fn load_graph(path: &Path) -> Result<BipartiteGraph, Failure> {
    let text = read_file(path)?;
    BipartiteGraph::parse(&text)
        .map_err(|e| Failure::usage(format!("{}: {}", path.display(), e)))
}

fn budget_from(max_subsets: Option<u64>, max_witness: Option<usize>) -> VerifierBudget {
    let mut budget = VerifierBudget::default();
    if let Some(ms) = max_subsets {
        budget.max_subsets = ms;
    }
    budget.max_witness_size = max_witness;
    budget
}

fn print_doc(doc: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(doc).expect("reports serialize")
    );
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Elect { rule, input, json } => {
            let rule = RuleKind::parse(&rule).ok_or_else(|| {
                Failure::usage(format!(
                    "unknown rule {:?}; expected one of {}",
                    rule,
                    RuleKind::ALL.map(|r| r.name()).join(", ")
                ))
            })?;
            let e = load_election(&input)?;
            let committee = rule.run(&e)?;
            if json {
                let mut doc = ReportDocument::new(&e, &committee);
                doc.rule = Some(rule.name().to_string());
                print_doc(&doc);
            } else {
                println!("rule: {}", rule);
                println!(
                    "committee: {}",
                    committee
                        .to_vec()
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
            }
            Ok(0)
        }

        Command::Verify {
            axiom,
            input,
            committee,
            json,
            max_subsets,
            max_witness,
        } => {
            let e = load_election(&input)?;
            let w = load_committee(&e, &committee)?;
            match axiom.as_str() {
                "priceable" => return price_command(&e, &w, json),
                "per" => return per_command(&e, &w, json),
                _ => {}
            }
            let axiom = Axiom::parse(&axiom).ok_or_else(|| {
                Failure::usage(format!(
                    "unknown axiom {:?}; expected one of {}, priceable, per",
                    axiom,
                    Axiom::ALL.map(|a| a.name()).join(", ")
                ))
            })?;
            let budget = budget_from(max_subsets, max_witness);
            let report = verify(&e, &w, axiom, &budget)?;
            if json {
                let mut doc = ReportDocument::new(&e, &w);
                doc.axiom = Some(axiom.name().to_string());
                doc.verdict = if report.satisfied {
                    "satisfied".into()
                } else {
                    "violated".into()
                };
                doc.certificate = report.certificate.as_ref().map(CertificateDoc::from);
                print_doc(&doc);
            } else if report.satisfied {
                println!("axiom {}: satisfied", axiom);
            } else {
                println!("axiom {}: VIOLATED", axiom);
                match report.certificate.as_ref().expect("violations carry certificates") {
                    proprep_core::Certificate::Cohesion(c) => {
                        println!("  coalition: {}", join(&c.coalition.to_vec()));
                        println!("  witness:   {}", join(&c.witness.to_vec()));
                        println!("  level:     {}", c.level);
                    }
                    proprep_core::Certificate::Deviation(d) => {
                        println!("  coalition:   {}", join(&d.coalition.to_vec()));
                        println!("  alternative: {}", join(&d.alternative.to_vec()));
                    }
                    proprep_core::Certificate::Deprivation {
                        coalition,
                        candidate,
                        level,
                    } => {
                        println!("  coalition: {}", join(&coalition.to_vec()));
                        println!("  candidate: {}", candidate);
                        println!("  level:     {}", level);
                    }
                    proprep_core::Certificate::Reason(reason) => {
                        println!("  reason: {}", reason);
                    }
                }
            }
            Ok(u8::from(!report.satisfied))
        }

        Command::Price {
            input,
            committee,
            json,
        } => {
            let e = load_election(&input)?;
            let w = load_committee(&e, &committee)?;
            price_command(&e, &w, json)
        }

        Command::Per {
            input,
            committee,
            json,
        } => {
            let e = load_election(&input)?;
            let w = load_committee(&e, &committee)?;
            per_command(&e, &w, json)
        }

        Command::Reduce {
            alg,
            ell,
            graph,
            json,
        } => {
            let kind = match alg.as_str() {
                "pjr" => ReductionKind::Pjr,
                "ejr" => ReductionKind::Ejr,
                other => {
                    return Err(Failure::usage(format!(
                        "unknown reduction {:?}; expected pjr or ejr",
                        other
                    )))
                }
            };
            let g = load_graph(&graph)?;
            let out = reduce(&g, ell, kind)?;
            if json {
                let doc = ReductionDoc {
                    algorithm: alg,
                    ell,
                    election_appr: serialize_election(&out.election),
                    election_digest: election_digest(&out.election),
                    winner: out.winner.to_vec(),
                    voter_groups: out.voter_group,
                    candidate_groups: out.candidate_group,
                    phi: out.phi,
                };
                print_doc(&doc);
            } else {
                // comments keep the output loadable as an .appr file
                println!("# reduction: {} with ell = {}", alg, ell);
                println!(
                    "# winner: {}",
                    out.winner
                        .to_vec()
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
                print!("{}", serialize_election(&out.election));
            }
            Ok(0)
        }

        Command::Biclique { graph, ell, json } => {
            let g = load_graph(&graph)?;
            let found = biclique_exists(&g, ell)?;
            let code = u8::from(found.is_none());
            if json {
                let doc = BicliqueDoc {
                    ell,
                    found: found.is_some(),
                    left: found.as_ref().map(|(l, _)| l.to_vec()),
                    right: found.as_ref().map(|(_, r)| r.to_vec()),
                };
                print_doc(&doc);
            } else if let Some((l, r)) = found {
                println!("biclique: found");
                println!("  left:  {}", join(&l.to_vec()));
                println!("  right: {}", join(&r.to_vec()));
            } else {
                println!("biclique: none");
            }
            Ok(code)
        }

        Command::Lab {
            trials,
            model,
            p,
            parties,
            mixing,
            seed,
            n,
            m,
            k,
            vary_sizes,
            divisible,
            rules,
            properties,
            json,
            max_subsets,
        } => {
            let model = match model.as_str() {
                "ic" => CultureModel::ImpartialCulture {
                    approval_probability: p,
                },
                "party" => CultureModel::PartyList { parties },
                "urn" => CultureModel::Urn { mixing },
                other => {
                    return Err(Failure::usage(format!(
                        "unknown culture model {:?}; expected ic, party, or urn",
                        other
                    )))
                }
            };
            let culture = BallotCulture { model, seed };
            let mut config = LabConfig::new(trials, culture, n, m, k);
            config.vary_sizes = vary_sizes;
            config.divisible_only = divisible;
            if let Some(spec) = rules {
                config.rules = parse_list(&spec, RuleKind::parse, "rule")?;
            }
            if let Some(spec) = properties {
                config.properties = parse_list(&spec, Property::parse, "property")?;
            }
            if let Some(ms) = max_subsets {
                config.budget.max_subsets = ms;
            }
            let matrix = run_matrix(&config)?;
            let doc = MatrixDoc::from(&matrix);
            if json {
                print_doc(&doc);
            } else {
                println!(
                    "trials: {}  evaluations: {}  inconclusive: {}",
                    doc.trials, doc.evaluations, doc.inconclusive_evaluations
                );
                let broken: Vec<&report::MatrixPairDoc> = doc
                    .pairs
                    .iter()
                    .filter(|pair| pair.proven && pair.premise_satisfied_conclusion_violated > 0)
                    .collect();
                if broken.is_empty() {
                    println!("proven implications: intact");
                } else {
                    for pair in broken {
                        println!(
                            "proven implication BROKEN: {} => {} ({} counterexamples)",
                            pair.premise, pair.conclusion,
                            pair.premise_satisfied_conclusion_violated
                        );
                    }
                }
                for pair in &doc.pairs {
                    if !pair.proven && pair.premise_satisfied_conclusion_violated > 0 {
                        println!(
                            "observed non-implication: {} =/=> {} ({} witnesses)",
                            pair.premise, pair.conclusion,
                            pair.premise_satisfied_conclusion_violated
                        );
                    }
                }
            }
            Ok(0)
        }

        Command::Minimize {
            axiom,
            input,
            committee,
            json,
            max_subsets,
        } => {
            let axiom = Axiom::parse(&axiom).ok_or_else(|| {
                Failure::usage(format!(
                    "unknown axiom {:?}; expected one of {}",
                    axiom,
                    Axiom::ALL.map(|a| a.name()).join(", ")
                ))
            })?;
            let e = load_election(&input)?;
            let w = load_committee(&e, &committee)?;
            let budget = budget_from(max_subsets, None);
            let (small_e, small_w) =
                proprep_core::lab::minimize_counterexample(&e, &w, axiom, &budget)?;
            if json {
                #[derive(serde::Serialize)]
                struct MinimizeDoc {
                    axiom: String,
                    election_appr: String,
                    election_digest: String,
                    committee: Vec<usize>,
                }
                print_doc(&MinimizeDoc {
                    axiom: axiom.name().to_string(),
                    election_appr: serialize_election(&small_e),
                    election_digest: election_digest(&small_e),
                    committee: small_w.to_vec(),
                });
            } else {
                println!("# minimized {} violation", axiom);
                println!(
                    "# committee: {}",
                    small_w
                        .to_vec()
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
                print!("{}", serialize_election(&small_e));
            }
            Ok(0)
        }
    }
}

fn price_command(e: &Election, w: &Committee, json: bool) -> Result<u8, Failure> {
    let (priceable, ps) = check_priceable(e, w)?;
    if json {
        let mut doc = ReportDocument::new(e, w);
        doc.axiom = Some("priceable".into());
        doc.verdict = if priceable {
            "satisfied".into()
        } else {
            "violated".into()
        };
        doc.price_system = ps.as_ref().map(PriceSystemDoc::from);
        print_doc(&doc);
    } else if let Some(ps) = &ps {
        println!("priceable: yes");
        println!("price: {}", report::rational_string(&ps.price));
        for (&(v, c), amount) in &ps.payments {
            println!("  voter {} -> candidate {}: {}", v, c, report::rational_string(amount));
        }
    } else {
        println!("priceable: no");
    }
    Ok(u8::from(!priceable))
}

fn per_command(e: &Election, w: &Committee, json: bool) -> Result<u8, Failure> {
    let (ok, pp) = check_per(e, w)?;
    if json {
        let mut doc = ReportDocument::new(e, w);
        doc.axiom = Some("per".into());
        doc.verdict = if ok { "satisfied".into() } else { "violated".into() };
        doc.partition = pp.as_ref().map(PartitionDoc::from);
        print_doc(&doc);
    } else if let Some(pp) = &pp {
        println!("perfect representation: yes");
        for (part, c) in pp.parts.iter().zip(&pp.assigned) {
            println!("  candidate {} <- voters {}", c, join(&part.to_vec()));
        }
    } else {
        println!("perfect representation: no");
    }
    Ok(u8::from(!ok))
}

fn parse_list<T>(
    spec: &str,
    parse: impl Fn(&str) -> Option<T>,
    what: &str,
) -> Result<Vec<T>, Failure> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            parse(name).ok_or_else(|| Failure::usage(format!("unknown {} {:?}", what, name)))
        })
        .collect()
}

fn join(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
