//! Balanced-biclique instance compilers.
//!
//! Deciding any of FPJR, FJR, or core stability for a given committee is
//! as hard as finding balanced bicliques. These constructions compile a
//! bipartite graph and a target `ℓ` into an election plus designated
//! committee whose axiom verdict answers the biclique question: one
//! construction pairs with FPJR (and PJR), the other with FJR and core
//! stability. The brute-force biclique search alongside them lets tests
//! validate the equivalences end to end.

use crate::bitset::BitSet;
use crate::combinatorics::for_each_combination;
use crate::election::{Committee, Election};
use crate::error::{Error, Result};

/// A bipartite graph on left/right vertex sets `{0..left}` and
/// `{0..right}` with no duplicate edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    /// Per-left-vertex neighborhoods over the right side.
    neighbors: Vec<BitSet>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Result<Self> {
        if left == 0 || right == 0 {
            return Err(Error::invalid("both sides need at least one vertex"));
        }
        Ok(BipartiteGraph {
            left,
            right,
            neighbors: vec![BitSet::new(right); left],
        })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.left {
            return Err(Error::IndexOutOfRange {
                kind: "left vertex",
                index: u,
                bound: self.left,
            });
        }
        if v >= self.right {
            return Err(Error::IndexOutOfRange {
                kind: "right vertex",
                index: v,
                bound: self.right,
            });
        }
        self.neighbors[u].insert(v);
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> &BitSet {
        &self.neighbors[u]
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.iter().map(|n| n.len()).sum()
    }

    /// Parses the plain-text edge list format: first non-comment line
    /// `|L| |R|`, then one `u v` pair per line, 0-based. `#` starts a
    /// comment. Duplicate edges are rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut graph: Option<BipartiteGraph> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::invalid(format!(
                    "line {}: expected two integers, found {:?}",
                    lineno + 1,
                    line
                )));
            }
            let a: usize = fields[0].parse().map_err(|_| {
                Error::invalid(format!("line {}: bad integer {:?}", lineno + 1, fields[0]))
            })?;
            let b: usize = fields[1].parse().map_err(|_| {
                Error::invalid(format!("line {}: bad integer {:?}", lineno + 1, fields[1]))
            })?;
            match graph.as_mut() {
                None => graph = Some(BipartiteGraph::new(a, b)?),
                Some(g) => {
                    if a >= g.left || b >= g.right {
                        return Err(Error::invalid(format!(
                            "line {}: edge {} {} out of range for a {}x{} graph",
                            lineno + 1,
                            a,
                            b,
                            g.left,
                            g.right
                        )));
                    }
                    if g.has_edge(a, b) {
                        return Err(Error::invalid(format!(
                            "line {}: duplicate edge {} {}",
                            lineno + 1,
                            a,
                            b
                        )));
                    }
                    g.add_edge(a, b)?;
                }
            }
        }
        graph.ok_or_else(|| Error::invalid("empty graph file"))
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("{} {}\n", self.left, self.right);
        for (u, nbrs) in self.neighbors.iter().enumerate() {
            for v in nbrs.iter() {
                out.push_str(&format!("{} {}\n", u, v));
            }
        }
        out
    }
}

/// Brute-force balanced-biclique search: enumerates left subsets of size
/// `ell` in lexicographic order and intersects neighborhoods. Returns the
/// first `ell x ell` biclique found.
pub fn biclique_exists(g: &BipartiteGraph, ell: usize) -> Result<Option<(BitSet, BitSet)>> {
    if ell == 0 {
        return Err(Error::invalid("biclique size must be at least 1"));
    }
    if ell > g.left || ell > g.right {
        return Ok(None);
    }
    let pool: Vec<usize> = (0..g.left).collect();
    let mut found = None;
    for_each_combination(&pool, ell, |lset| {
        let mut common = BitSet::full(g.right);
        for &u in lset {
            common.intersect_with(g.neighbors(u));
        }
        if common.len() >= ell {
            let rset: Vec<usize> = common.iter().take(ell).collect();
            found = Some((
                BitSet::from_indices(g.left, lset),
                BitSet::from_indices(g.right, &rset),
            ));
            false
        } else {
            true
        }
    });
    Ok(found)
}

/// Which hardness construction an election came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionKind {
    /// The PJR-verification construction; its committee violates FPJR (and
    /// PJR) exactly when the graph has an `ell x ell` biclique.
    Pjr,
    /// The EJR-verification construction; its committee violates FJR and
    /// core stability exactly when the graph has an `ell x ell` biclique.
    Ejr,
}

/// A compiled hardness instance, with the group structure laid bare for
/// tests and reports: voters and candidates carry 1-based group tags in
/// construction order.
#[derive(Clone, Debug)]
pub struct ReductionOutput {
    pub election: Election,
    pub winner: Committee,
    pub voter_group: Vec<u8>,
    pub candidate_group: Vec<u8>,
    /// The bijection from singleton voters to their private candidates.
    pub phi: Vec<(usize, usize)>,
}

fn check_preconditions(g: &BipartiteGraph, ell: usize) -> Result<usize> {
    if ell < 3 {
        return Err(Error::precondition("the constructions need ell >= 3"));
    }
    if g.right < ell {
        return Err(Error::precondition(format!(
            "the constructions need |R| >= ell: |R| = {}, ell = {}",
            g.right, ell
        )));
    }
    Ok(g.right)
}

/// The PJR-hardness construction.
///
/// Candidates: `C1 = L`, `|C2| = ell-1`, `|C3| = ell*s + 2*ell - 3*s - 2`;
/// voters: `V1 = R`, `|V2| = ell*s`, `|V3| = |C3|`; right-voters approve
/// their graph neighbors, `V2` approves `C1 ∪ C2`, each `V3` voter
/// approves one private `C3` candidate. `k = 2(ell-1)` and the designated
/// committee is `C2` plus the lexicographically first `ell-1` candidates
/// of `C3`. The construction guarantees `n/k = s+1`.
pub fn reduce_pjr(g: &BipartiteGraph, ell: usize) -> Result<ReductionOutput> {
    let s = check_preconditions(g, ell)?;
    let c3_size = (ell * s + 2 * ell)
        .checked_sub(3 * s + 2)
        .ok_or_else(|| Error::precondition("derived group size is negative"))?;

    let c1 = g.left;
    let c2_start = c1;
    let c3_start = c2_start + (ell - 1);
    let m = c3_start + c3_size;

    let v1 = s;
    let v2_start = v1;
    let v3_start = v2_start + ell * s;
    let n = v3_start + c3_size;

    let k = 2 * (ell - 1);
    debug_assert_eq!(n, k * (s + 1), "the construction fixes n/k = s + 1");

    let mut approvals: Vec<Vec<usize>> = Vec::with_capacity(n);
    for r in 0..v1 {
        approvals.push((0..g.left).filter(|&u| g.has_edge(u, r)).collect());
    }
    let v2_ballot: Vec<usize> = (0..c3_start).collect(); // C1 ∪ C2
    for _ in 0..ell * s {
        approvals.push(v2_ballot.clone());
    }
    let mut phi = Vec::with_capacity(c3_size);
    for i in 0..c3_size {
        approvals.push(vec![c3_start + i]);
        phi.push((v3_start + i, c3_start + i));
    }

    let election = Election::new(m, k, approvals)?;
    // X = the lexicographically first ell-1 members of C3
    let winner: Vec<usize> = (c2_start..c3_start)
        .chain(c3_start..c3_start + (ell - 1))
        .collect();
    let winner = Committee::new(&election, winner, "reduction-pjr")?;

    let mut voter_group = vec![1u8; v1];
    voter_group.extend(vec![2u8; ell * s]);
    voter_group.extend(vec![3u8; c3_size]);
    let mut candidate_group = vec![1u8; c1];
    candidate_group.extend(vec![2u8; ell - 1]);
    candidate_group.extend(vec![3u8; c3_size]);

    Ok(ReductionOutput {
        election,
        winner,
        voter_group,
        candidate_group,
        phi,
    })
}

/// The EJR-hardness construction.
///
/// Candidates: `C1 = L`, `|C2| = |C3| = ell-1`, `|C4| = s*ell - 3*s + ell`;
/// voters: `V1 = R` approving graph neighbors plus all of `C2`, `V2` of
/// size `ell*(s-1)` approving `C1 ∪ C3`, and `V3` singletons over `C4`.
/// `k = 2(ell-1)`, the designated committee is `C2 ∪ C3`, and `n/k = s`.
pub fn reduce_ejr(g: &BipartiteGraph, ell: usize) -> Result<ReductionOutput> {
    let s = check_preconditions(g, ell)?;
    let c4_size = (s * ell + ell)
        .checked_sub(3 * s)
        .ok_or_else(|| Error::precondition("derived group size is negative"))?;

    let c1 = g.left;
    let c2_start = c1;
    let c3_start = c2_start + (ell - 1);
    let c4_start = c3_start + (ell - 1);
    let m = c4_start + c4_size;

    let v1 = s;
    let v2_start = v1;
    let v3_start = v2_start + ell * (s - 1);
    let n = v3_start + c4_size;

    let k = 2 * (ell - 1);
    debug_assert_eq!(n, 2 * s * (ell - 1), "the construction fixes n/k = s");

    let mut approvals: Vec<Vec<usize>> = Vec::with_capacity(n);
    for r in 0..v1 {
        let mut ballot: Vec<usize> = (0..g.left).filter(|&u| g.has_edge(u, r)).collect();
        ballot.extend(c2_start..c3_start);
        approvals.push(ballot);
    }
    let v2_ballot: Vec<usize> = (0..c2_start).chain(c3_start..c4_start).collect(); // C1 ∪ C3
    for _ in 0..ell * (s - 1) {
        approvals.push(v2_ballot.clone());
    }
    let mut phi = Vec::with_capacity(c4_size);
    for i in 0..c4_size {
        approvals.push(vec![c4_start + i]);
        phi.push((v3_start + i, c4_start + i));
    }

    let election = Election::new(m, k, approvals)?;
    let winner = Committee::new(&election, c2_start..c4_start, "reduction-ejr")?;

    let mut voter_group = vec![1u8; v1];
    voter_group.extend(vec![2u8; ell * (s - 1)]);
    voter_group.extend(vec![3u8; c4_size]);
    let mut candidate_group = vec![1u8; c1];
    candidate_group.extend(vec![2u8; ell - 1]);
    candidate_group.extend(vec![3u8; ell - 1]);
    candidate_group.extend(vec![4u8; c4_size]);

    Ok(ReductionOutput {
        election,
        winner,
        voter_group,
        candidate_group,
        phi,
    })
}

pub fn reduce(g: &BipartiteGraph, ell: usize, kind: ReductionKind) -> Result<ReductionOutput> {
    match kind {
        ReductionKind::Pjr => reduce_pjr(g, ell),
        ReductionKind::Ejr => reduce_ejr(g, ell),
    }
}
