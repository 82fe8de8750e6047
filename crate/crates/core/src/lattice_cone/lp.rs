//! Dense two-phase simplex over arbitrary-precision rationals.
//!
//! Pivoting follows Bland's rule (lowest eligible index enters, ties in the
//! ratio test leave by lowest basic index), so the method terminates without
//! any anti-cycling perturbation. Problem sizes in this crate are a handful of
//! rows and columns; a dense tableau is the right tool.
//!
//! Infeasible problems come back with a Farkas certificate read off the
//! phase-one duals, expressed against the caller's original rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Free,
    NonNegative,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `minimize c·x` subject to a list of linear constraints.
#[derive(Clone, Debug)]
pub struct RationalLp {
    kinds: Vec<VarKind>,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<Rational>,
        objective: Rational,
    },
    /// `farkas` has one entry per constraint and satisfies
    /// [`RationalLp::verify_farkas`].
    Infeasible { farkas: Vec<Rational> },
    Unbounded,
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

impl RationalLp {
    pub fn new(kinds: Vec<VarKind>) -> Self {
        let n = kinds.len();
        Self {
            kinds,
            objective: vec![Rational::zero(); n],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.kinds.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn minimize(&mut self, objective: Vec<Rational>) -> &mut Self {
        assert_eq!(objective.len(), self.kinds.len(), "objective length");
        self.objective = objective;
        self
    }

    pub fn constrain(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.kinds.len(), "constraint length");
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    /// Exact check that `x` satisfies every constraint and sign restriction.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        if x.len() != self.kinds.len() {
            return false;
        }
        let signs_ok = self
            .kinds
            .iter()
            .zip(x)
            .all(|(k, xi)| *k == VarKind::Free || !xi.is_negative());
        signs_ok
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    /// Exact check of an infeasibility certificate `y` (one multiplier per
    /// constraint): `y·b > 0`, `yᵀA ≤ 0` on nonnegative variables, `yᵀA = 0`
    /// on free variables, `y ≤ 0` on `≤` rows and `y ≥ 0` on `≥` rows.
    pub fn verify_farkas(&self, y: &[Rational]) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        for (c, yi) in self.constraints.iter().zip(y) {
            let ok = match c.relation {
                Relation::Le => !yi.is_positive(),
                Relation::Ge => !yi.is_negative(),
                Relation::Eq => true,
            };
            if !ok {
                return false;
            }
        }
        let yb: Rational = self
            .constraints
            .iter()
            .zip(y)
            .map(|(c, yi)| &c.rhs * yi)
            .sum();
        if !yb.is_positive() {
            return false;
        }
        (0..self.kinds.len()).all(|j| {
            let col: Rational = self
                .constraints
                .iter()
                .zip(y)
                .map(|(c, yi)| &c.coeffs[j] * yi)
                .sum();
            match self.kinds[j] {
                VarKind::NonNegative => !col.is_positive(),
                VarKind::Free => col.is_zero(),
            }
        })
    }

    pub fn solve(&self) -> LpOutcome {
        let m = self.constraints.len();

        // Column layout: expanded variables, then one slack per inequality.
        let mut var_cols: Vec<(usize, bool)> = Vec::new();
        for (j, kind) in self.kinds.iter().enumerate() {
            var_cols.push((j, true));
            if *kind == VarKind::Free {
                var_cols.push((j, false));
            }
        }
        let n_var_cols = var_cols.len();
        let n_slack = self
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let ncols = n_var_cols + n_slack;
        let width = ncols + m + 1;
        let rhs_col = width - 1;

        let mut sigma = vec![1i8; m];
        let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut slack = n_var_cols;
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = vec![Rational::zero(); width];
            for (col, &(j, positive)) in var_cols.iter().enumerate() {
                row[col] = if positive {
                    c.coeffs[j].clone()
                } else {
                    -c.coeffs[j].clone()
                };
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = Rational::one();
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -Rational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[rhs_col] = c.rhs.clone();
            if row[rhs_col].is_negative() {
                sigma[i] = -1;
                for e in row.iter_mut() {
                    *e = -e.clone();
                }
            }
            row[ncols + i] = Rational::one();
            t.push(row);
        }

        let mut tab = Tableau {
            rows: t,
            basis: (0..m).map(|i| ncols + i).collect(),
            z: vec![Rational::zero(); width],
        };

        // Phase one: minimise the sum of artificials.
        let mut phase1_cost = vec![Rational::zero(); ncols + m];
        for c in phase1_cost.iter_mut().skip(ncols) {
            *c = Rational::one();
        }
        tab.price(&phase1_cost);
        if tab.run(ncols + m) == Step::Unbounded {
            unreachable!("phase one objective is bounded below by zero");
        }
        let infeasibility = -tab.z[rhs_col].clone();
        if infeasibility.is_positive() {
            let farkas = (0..m)
                .map(|i| {
                    let y = Rational::one() - &tab.z[ncols + i];
                    if sigma[i] < 0 {
                        -y
                    } else {
                        y
                    }
                })
                .collect();
            return LpOutcome::Infeasible { farkas };
        }

        // Drive zero-valued artificials out of the basis when possible; rows
        // where that fails are redundant and never pivot again.
        for r in 0..m {
            if tab.basis[r] >= ncols {
                if let Some(col) = (0..ncols).find(|&j| !tab.rows[r][j].is_zero()) {
                    tab.pivot(r, col);
                }
            }
        }

        // Phase two.
        let mut cost = vec![Rational::zero(); ncols + m];
        for (col, &(j, positive)) in var_cols.iter().enumerate() {
            cost[col] = if positive {
                self.objective[j].clone()
            } else {
                -self.objective[j].clone()
            };
        }
        tab.price(&cost);
        if tab.run(ncols) == Step::Unbounded {
            return LpOutcome::Unbounded;
        }

        let mut std_x = vec![Rational::zero(); ncols + m];
        for (r, &b) in tab.basis.iter().enumerate() {
            std_x[b] = tab.rows[r][rhs_col].clone();
        }
        let mut x = vec![Rational::zero(); self.kinds.len()];
        for (col, &(j, positive)) in var_cols.iter().enumerate() {
            if positive {
                x[j] += &std_x[col];
            } else {
                x[j] -= &std_x[col];
            }
        }
        let objective = dot(&self.objective, &x);
        LpOutcome::Optimal { x, objective }
    }
}

#[derive(PartialEq, Eq)]
enum Step {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry holds minus the objective value.
    z: Vec<Rational>,
}

impl Tableau {
    fn price(&mut self, cost: &[Rational]) {
        let width = self.z.len();
        let mut z = vec![Rational::zero(); width];
        z[..cost.len()].clone_from_slice(cost);
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (zj, tj) in z.iter_mut().zip(&self.rows[r]) {
                *zj -= cb * tj;
            }
        }
        self.z = z;
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for e in self.rows[r].iter_mut() {
            *e /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (e, pe) in row.iter_mut().zip(&pivot_row) {
                if !pe.is_zero() {
                    *e -= &f * pe;
                }
            }
        }
        if !self.z[col].is_zero() {
            let f = self.z[col].clone();
            for (e, pe) in self.z.iter_mut().zip(&pivot_row) {
                if !pe.is_zero() {
                    *e -= &f * pe;
                }
            }
        }
        self.basis[r] = col;
    }

    fn run(&mut self, limit: usize) -> Step {
        let rhs = self.z.len() - 1;
        loop {
            let Some(col) = (0..limit).find(|&j| self.z[j].is_negative()) else {
                return Step::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                if !row[col].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[col];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return Step::Unbounded,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
