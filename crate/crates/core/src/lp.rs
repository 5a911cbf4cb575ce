//! Dense two-phase simplex over exact rationals, Bland's anti-cycling rule.

use crate::rational::Q;
use num::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Relation,
    pub rhs: Q,
}

/// Maximize `objective · x` subject to the constraints. Variables are free
/// unless flagged in `nonneg`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub n_vars: usize,
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
    pub nonneg: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            n_vars,
            objective: vec![Q::zero(); n_vars],
            constraints: Vec::new(),
            nonneg: vec![false; n_vars],
        }
    }

    pub fn maximize(mut self, objective: Vec<Q>) -> Self {
        self.objective = objective;
        self
    }

    pub fn push(&mut self, coeffs: Vec<Q>, rel: Relation, rhs: Q) {
        debug_assert_eq!(coeffs.len(), self.n_vars);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    n_cols: usize,
    n_art_start: usize,
    // structural column -> (variable, sign)
    col_var: Vec<(usize, bool)>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut col_var = Vec::new();
        for j in 0..lp.n_vars {
            col_var.push((j, true));
            if !lp.nonneg[j] {
                col_var.push((j, false));
            }
        }
        let n_struct = col_var.len();
        let n_slack = lp.constraints.iter().filter(|c| c.rel != Relation::Eq).count();
        let m = lp.constraints.len();
        // Every row gets an artificial column; rows with a usable slack never enter it.
        let n_art_start = n_struct + n_slack;
        let n_cols = n_art_start + m;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack_idx = n_struct;
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![Q::zero(); n_cols + 1];
            for (k, &(v, pos)) in col_var.iter().enumerate() {
                row[k] = if pos { c.coeffs[v].clone() } else { -c.coeffs[v].clone() };
            }
            let mut slack_col = None;
            match c.rel {
                Relation::Le => {
                    row[slack_idx] = Q::one();
                    slack_col = Some(slack_idx);
                    slack_idx += 1;
                }
                Relation::Ge => {
                    row[slack_idx] = -Q::one();
                    slack_col = Some(slack_idx);
                    slack_idx += 1;
                }
                Relation::Eq => {}
            }
            row[n_cols] = c.rhs.clone();
            if row[n_cols].is_negative() {
                for v in row.iter_mut() {
                    *v = -v.clone();
                }
            }
            match slack_col {
                Some(s) if row[s].is_positive() => basis.push(s),
                _ => {
                    row[n_art_start + i] = Q::one();
                    basis.push(n_art_start + i);
                }
            }
            rows.push(row);
        }
        Tableau { rows, basis, n_cols, n_art_start, col_var }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Q::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    row[j] -= pv * &f;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` over columns `< limit`; returns false when unbounded.
    fn optimize(&mut self, cost: &[Q], limit: usize) -> bool {
        loop {
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() && !row[j].is_zero() {
                        rc -= cb * &row[j];
                    }
                }
                if rc.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.n_cols] / &row[c];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let mut cost1 = vec![Q::zero(); self.n_cols];
        for c in cost1.iter_mut().skip(self.n_art_start) {
            *c = -Q::one();
        }
        self.optimize(&cost1, self.n_cols);
        let infeasible =
            self.basis.iter().enumerate().any(|(i, &b)| b >= self.n_art_start && !self.rows[i][self.n_cols].is_zero());
        if infeasible {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.n_art_start {
                if let Some(c) = (0..self.n_art_start).find(|&c| !self.rows[i][c].is_zero()) {
                    self.pivot(i, c);
                    i += 1;
                } else {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
        let mut cost2 = vec![Q::zero(); self.n_cols];
        for (k, &(v, pos)) in self.col_var.iter().enumerate() {
            cost2[k] = if pos { lp.objective[v].clone() } else { -lp.objective[v].clone() };
        }
        if !self.optimize(&cost2, self.n_art_start) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Q::zero(); lp.n_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.col_var.len() {
                let (v, pos) = self.col_var[b];
                let val = self.rows[i][self.n_cols].clone();
                if pos {
                    x[v] += val;
                } else {
                    x[v] -= val;
                }
            }
        }
        let value = crate::rational::dot(&lp.objective, &x);
        LpOutcome::Optimal { x, value }
    }
}

/// Lexicographically smallest point of the optimal face: maximize the
/// objective, then minimize coordinates `lex_vars` in order.
pub fn solve_lexmin(lp: &LinearProgram, lex_vars: &[usize]) -> LpOutcome {
    let first = lp.solve();
    let LpOutcome::Optimal { value, .. } = &first else {
        return first;
    };
    let mut cur = lp.clone();
    cur.push(lp.objective.clone(), Relation::Eq, value.clone());
    let mut last = first.clone();
    for &v in lex_vars {
        let mut obj = vec![Q::zero(); lp.n_vars];
        obj[v] = -Q::one();
        let step = cur.clone().maximize(obj).solve();
        let LpOutcome::Optimal { x, .. } = &step else {
            return last;
        };
        let mut row = vec![Q::zero(); lp.n_vars];
        row[v] = Q::one();
        cur.push(row, Relation::Eq, x[v].clone());
        last = LpOutcome::Optimal { x: x.clone(), value: value.clone() };
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qi, qr};

    #[test]
    fn textbook_maximum() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x,y >= 0
        let mut lp = LinearProgram::new(2).maximize(vec![qi(3), qi(2)]);
        lp.nonneg = vec![true, true];
        lp.push(vec![qi(1), qi(1)], Relation::Le, qi(4));
        lp.push(vec![qi(1), qi(3)], Relation::Le, qi(6));
        assert_eq!(lp.solve(), LpOutcome::Optimal { x: vec![qi(4), qi(0)], value: qi(12) });
    }

    #[test]
    fn free_variables_and_equalities() {
        // max -x, x >= -5/2 (free), y = x + 1
        let mut lp = LinearProgram::new(2).maximize(vec![qi(-1), qi(0)]);
        lp.push(vec![qi(1), qi(0)], Relation::Ge, qr(-5, 2));
        lp.push(vec![qi(-1), qi(1)], Relation::Eq, qi(1));
        assert_eq!(lp.solve(), LpOutcome::Optimal { x: vec![qr(-5, 2), qr(-3, 2)], value: qr(5, 2) });
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1).maximize(vec![qi(1)]);
        lp.push(vec![qi(1)], Relation::Le, qi(0));
        lp.push(vec![qi(1)], Relation::Ge, qi(1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new(1).maximize(vec![qi(1)]);
        lp.push(vec![qi(1)], Relation::Ge, qi(0));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example; Bland's rule must terminate.
        let mut lp = LinearProgram::new(4).maximize(vec![qr(3, 4), qi(-20), qr(1, 2), qi(-6)]);
        lp.nonneg = vec![true; 4];
        lp.push(vec![qr(1, 4), qi(-8), qi(-1), qi(9)], Relation::Le, qi(0));
        lp.push(vec![qr(1, 2), qi(-12), qr(-1, 2), qi(3)], Relation::Le, qi(0));
        lp.push(vec![qi(0), qi(0), qi(1), qi(0)], Relation::Le, qi(1));
        assert_eq!(lp.solve().value(), Some(&qr(5, 4)));
    }

    #[test]
    fn lexmin_picks_smallest_optimum() {
        // max y over the unit square: optimal face y = 1, lexmin x = 0.
        let mut lp = LinearProgram::new(2).maximize(vec![qi(0), qi(1)]);
        lp.push(vec![qi(1), qi(0)], Relation::Ge, qi(0));
        lp.push(vec![qi(1), qi(0)], Relation::Le, qi(1));
        lp.push(vec![qi(0), qi(1)], Relation::Ge, qi(0));
        lp.push(vec![qi(0), qi(1)], Relation::Le, qi(1));
        match solve_lexmin(&lp, &[0]) {
            LpOutcome::Optimal { x, .. } => assert_eq!(x, vec![qi(0), qi(1)]),
            o => panic!("{o:?}"),
        }
    }
}
