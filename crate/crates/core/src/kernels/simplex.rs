//! Exact rational simplex (dense two-phase tableau, Bland's rule).
//!
//! The LPs solved here are tiny (priceability systems with a few dozen
//! variables), so a dense `BigRational` tableau is simple and fast enough,
//! and it returns certificates that are exact by construction: no epsilon
//! appears anywhere.

use crate::error::{Error, Result};
use num::{BigRational, One, Signed, Zero};

pub type Rat = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// `maximize c·x subject to A x {<=,=,>=} b, x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rat>,
    constraints: Vec<(Vec<Rat>, Relation, Rat)>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rat::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rat) {
        self.objective[var] = coeff;
    }

    /// Adds `coeffs · x (relation) rhs`; `coeffs` is a sparse list.
    pub fn add_constraint(&mut self, coeffs: &[(usize, Rat)], relation: Relation, rhs: Rat) {
        let mut row = vec![Rat::zero(); self.num_vars];
        for (var, coeff) in coeffs {
            assert!(*var < self.num_vars, "variable index out of range");
            row[*var] += coeff.clone();
        }
        self.constraints.push((row, relation, rhs));
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    num_cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize, obj: &mut Vec<Rat>, value: &mut Rat) {
        let pivot = self.rows[row][col].clone();
        debug_assert!(!pivot.is_zero());
        for x in self.rows[row].iter_mut() {
            *x /= &pivot;
        }
        self.rhs[row] /= &pivot;
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..self.num_cols {
                let delta = &factor * &self.rows[row][c];
                self.rows[r][c] -= delta;
            }
            let delta = &factor * &self.rhs[row];
            self.rhs[r] -= delta;
        }
        let factor = obj[col].clone();
        if !factor.is_zero() {
            for c in 0..self.num_cols {
                let delta = &factor * &self.rows[row][c];
                obj[c] -= delta;
            }
            let delta = &factor * &self.rhs[row];
            *value += delta;
        }
        self.basis[row] = col;
    }

    /// Runs simplex to optimality over the allowed columns. Bland's rule:
    /// smallest eligible entering column, smallest basic variable among
    /// tied leaving rows. Returns false when unbounded.
    fn optimize(&mut self, obj: &mut Vec<Rat>, value: &mut Rat, allowed_cols: usize) -> bool {
        loop {
            let Some(entering) = (0..allowed_cols).find(|&j| obj[j].is_positive()) else {
                return true;
            };
            let mut leaving: Option<usize> = None;
            let mut best_ratio: Option<Rat> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][entering].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][entering];
                let better = match &best_ratio {
                    None => true,
                    Some(b) => {
                        ratio < *b
                            || (ratio == *b
                                && self.basis[i] < self.basis[leaving.unwrap()])
                    }
                };
                if better {
                    best_ratio = Some(ratio);
                    leaving = Some(i);
                }
            }
            let Some(row) = leaving else {
                return false;
            };
            self.pivot(row, entering, obj, value);
        }
    }
}

/// Maximizes the program exactly. Infeasibility and unboundedness are
/// signaled distinctly.
pub fn simplex_max(lp: &LinearProgram) -> Result<LpOutcome> {
    for (row, _, _) in &lp.constraints {
        if row.len() != lp.num_vars {
            return Err(Error::invalid("constraint dimension mismatch"));
        }
    }
    let num_rows = lp.constraints.len();
    let mut num_slack = 0;
    for (_, rel, rhs) in &lp.constraints {
        // after rhs normalization Ge becomes Le and vice versa
        let effective = if rhs.is_negative() {
            match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            }
        } else {
            *rel
        };
        match effective {
            Relation::Le => num_slack += 1,
            Relation::Ge => num_slack += 1,
            Relation::Eq => {}
        }
    }
    let slack_start = lp.num_vars;
    let artificial_start = slack_start + num_slack;

    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(num_rows);
    let mut rhs: Vec<Rat> = Vec::with_capacity(num_rows);
    let mut basis: Vec<usize> = Vec::with_capacity(num_rows);
    let mut num_artificial = 0;
    let mut next_slack = slack_start;

    for (coeffs, rel, b) in &lp.constraints {
        let negate = b.is_negative();
        let mut row: Vec<Rat> = coeffs
            .iter()
            .map(|c| if negate { -c.clone() } else { c.clone() })
            .collect();
        row.resize(artificial_start, Rat::zero());
        let b = if negate { -b.clone() } else { b.clone() };
        let rel = if negate {
            match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            }
        } else {
            *rel
        };
        match rel {
            Relation::Le => {
                row[next_slack] = Rat::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -Rat::one();
                next_slack += 1;
                basis.push(artificial_start + num_artificial);
                num_artificial += 1;
            }
            Relation::Eq => {
                basis.push(artificial_start + num_artificial);
                num_artificial += 1;
            }
        }
        rows.push(row);
        rhs.push(b);
    }
    let num_cols = artificial_start + num_artificial;
    let mut artificial_seen = 0;
    for (i, row) in rows.iter_mut().enumerate() {
        row.resize(num_cols, Rat::zero());
        if basis[i] >= artificial_start {
            row[artificial_start + artificial_seen] = Rat::one();
            debug_assert_eq!(basis[i], artificial_start + artificial_seen);
            artificial_seen += 1;
        }
    }

    let mut tab = Tableau {
        rows,
        rhs,
        basis,
        num_cols,
    };

    // Phase 1: maximize -(sum of artificials); feasible iff optimum is 0.
    if num_artificial > 0 {
        // reduced costs for the all-artificial basis: cost -1 per
        // artificial column plus the basic rows summed back in
        let mut obj = vec![Rat::zero(); num_cols];
        let mut value = Rat::zero();
        for i in 0..tab.rows.len() {
            if tab.basis[i] >= artificial_start {
                for c in 0..num_cols {
                    let delta = tab.rows[i][c].clone();
                    obj[c] += delta;
                }
                value -= tab.rhs[i].clone();
            }
        }
        for a in artificial_start..num_cols {
            obj[a] -= Rat::one();
        }
        let bounded = tab.optimize(&mut obj, &mut value, num_cols);
        debug_assert!(bounded, "phase 1 objective is bounded above by 0");
        if value.is_negative() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive leftover artificials out of the basis (their value is 0);
        // rows with no structural pivot are redundant and dropped.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= artificial_start {
                debug_assert!(tab.rhs[i].is_zero());
                let pivot_col = (0..artificial_start).find(|&j| !tab.rows[i][j].is_zero());
                match pivot_col {
                    Some(j) => {
                        let mut dummy_obj = vec![Rat::zero(); num_cols];
                        let mut dummy_val = Rat::zero();
                        tab.pivot(i, j, &mut dummy_obj, &mut dummy_val);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    // Phase 2: maximize the real objective; artificial columns are frozen.
    let mut obj = vec![Rat::zero(); num_cols];
    obj[..lp.num_vars].clone_from_slice(&lp.objective);
    let mut value = Rat::zero();
    for i in 0..tab.rows.len() {
        let bv = tab.basis[i];
        debug_assert!(bv < artificial_start);
        let cost = if bv < lp.num_vars {
            lp.objective[bv].clone()
        } else {
            Rat::zero()
        };
        if cost.is_zero() {
            continue;
        }
        for c in 0..num_cols {
            let delta = &cost * &tab.rows[i][c];
            obj[c] -= delta;
        }
        let delta = &cost * &tab.rhs[i];
        value += delta;
    }
    if !tab.optimize(&mut obj, &mut value, artificial_start) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut point = vec![Rat::zero(); lp.num_vars];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < lp.num_vars {
            point[bv] = tab.rhs[i].clone();
        }
    }
    debug_assert!(solution_satisfies(lp, &point));
    Ok(LpOutcome::Optimal { value, point })
}

/// Exact residual check: every constraint holds with zero slack error.
pub fn solution_satisfies(lp: &LinearProgram, point: &[Rat]) -> bool {
    if point.len() != lp.num_vars || point.iter().any(|x| x.is_negative()) {
        return false;
    }
    lp.constraints.iter().all(|(row, rel, b)| {
        let lhs: Rat = row.iter().zip(point).map(|(c, x)| c * x).sum();
        match rel {
            Relation::Le => lhs <= *b,
            Relation::Eq => lhs == *b,
            Relation::Ge => lhs >= *b,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{BigInt, FromPrimitive};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from_i64(n).unwrap(), BigInt::from_i64(d).unwrap())
    }

    #[test]
    fn bounded_single_variable() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(0, rat(1, 1));
        lp.add_constraint(&[(0, rat(1, 1))], Relation::Le, rat(3, 1));
        match simplex_max(&lp).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(3, 1));
                assert_eq!(point, vec![rat(3, 1)]);
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn infeasible_pair() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(0, rat(1, 1));
        lp.add_constraint(&[(0, rat(1, 1))], Relation::Le, rat(0, 1));
        lp.add_constraint(&[(0, rat(1, 1))], Relation::Ge, rat(1, 1));
        assert_eq!(simplex_max(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, rat(1, 1));
        lp.add_constraint(&[(1, rat(1, 1))], Relation::Le, rat(5, 1));
        assert_eq!(simplex_max(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_and_negative_rhs() {
        // maximize x + y  s.t.  x - y = -2,  x + y <= 6
        let mut lp = LinearProgram::new(2);
        lp.set_objective(0, rat(1, 1));
        lp.set_objective(1, rat(1, 1));
        lp.add_constraint(&[(0, rat(1, 1)), (1, rat(-1, 1))], Relation::Eq, rat(-2, 1));
        lp.add_constraint(&[(0, rat(1, 1)), (1, rat(1, 1))], Relation::Le, rat(6, 1));
        match simplex_max(&lp).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(6, 1));
                assert_eq!(&point[1] - &point[0], rat(2, 1));
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    // Vertex-enumeration oracle for 2-variable LPs: the optimum of a
    // bounded, feasible LP with x,y >= 0 is attained at an intersection of
    // two tight constraints (including the axes).
    fn vertex_oracle(lp: &LinearProgram) -> Option<Rat> {
        let mut lines: Vec<(Rat, Rat, Rat)> = lp
            .constraints
            .iter()
            .map(|(row, _, b)| (row[0].clone(), row[1].clone(), b.clone()))
            .collect();
        lines.push((Rat::one(), Rat::zero(), Rat::zero())); // x = 0
        lines.push((Rat::zero(), Rat::one(), Rat::zero())); // y = 0
        let mut best: Option<Rat> = None;
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (a1, b1, c1) = &lines[i];
                let (a2, b2, c2) = &lines[j];
                let det = a1 * b2 - a2 * b1;
                if det.is_zero() {
                    continue;
                }
                let x = (c1 * b2 - c2 * b1) / &det;
                let y = (a1 * c2 - a2 * c1) / &det;
                let point = vec![x, y];
                if !solution_satisfies(lp, &point) {
                    continue;
                }
                let val: Rat = lp
                    .objective
                    .iter()
                    .zip(&point)
                    .map(|(c, v)| c * v)
                    .sum();
                best = Some(match best {
                    None => val,
                    Some(b) => b.max(val),
                });
            }
        }
        best
    }

    #[test]
    fn random_lps_match_vertex_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..200 {
            let mut lp = LinearProgram::new(2);
            lp.set_objective(0, rat(rng.random_range(-3..=3), 1));
            lp.set_objective(1, rat(rng.random_range(-3..=3), 1));
            let rows = rng.random_range(1usize..5);
            for _ in 0..rows {
                let a = rat(rng.random_range(-3..=3), 1);
                let b = rat(rng.random_range(-3..=3), 1);
                let c = rat(rng.random_range(-4..=6), 1);
                let rel = match rng.random_range(0..3) {
                    0 => Relation::Le,
                    1 => Relation::Ge,
                    _ => Relation::Eq,
                };
                lp.add_constraint(&[(0, a), (1, b)], rel, c);
            }
            // bounding box keeps every instance bounded
            lp.add_constraint(&[(0, rat(1, 1))], Relation::Le, rat(7, 1));
            lp.add_constraint(&[(1, rat(1, 1))], Relation::Le, rat(7, 1));

            let got = simplex_max(&lp).unwrap();
            let oracle = vertex_oracle(&lp);
            match (got, oracle) {
                (LpOutcome::Optimal { value, point }, Some(best)) => {
                    assert_eq!(value, best);
                    assert!(solution_satisfies(&lp, &point));
                }
                (LpOutcome::Infeasible, None) => {}
                (got, oracle) => panic!("mismatch: {:?} vs oracle {:?}", got, oracle),
            }
        }
    }
}
