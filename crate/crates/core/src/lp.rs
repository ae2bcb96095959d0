//! Exact linear programming.
//!
//! A dense two-phase primal simplex over an exact [`Field`] using Bland's
//! rule, so it terminates without perturbation. Every outcome carries a
//! certificate that can be re-checked with exact arithmetic through
//! [`LpResult::verify`].
//!
//! Variables are free. Internally each variable is split into a positive
//! and a negative part, inequality rows receive slacks, and rows whose
//! initial slack is not feasible receive an artificial variable.

use crate::error::{check_dim, Result};
use crate::linalg::{dot, is_zero_vec, zeros, Matrix};
use crate::scalar::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// `optimize objective·x` subject to `ineq x ≤ ineq_rhs`, `eq x = eq_rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem<F> {
    pub objective: Vec<F>,
    pub sense: Sense,
    pub ineq: Matrix<F>,
    pub ineq_rhs: Vec<F>,
    pub eq: Matrix<F>,
    pub eq_rhs: Vec<F>,
}

/// Outcome of [`lp_solve`].
///
/// Certificates:
/// * `Optimal.dual` has one entry per inequality followed by one entry per
///   equality. Inequality entries are nonnegative and
///   `ineqᵀ y_I + eqᵀ y_E = s·objective`, `ineq_rhsᵀ y_I + eq_rhsᵀ y_E =
///   s·value`, where `s = 1` when maximizing and `s = -1` when minimizing.
/// * `Infeasible.farkas` uses the same layout: inequality entries are
///   nonnegative, `ineqᵀ y_I + eqᵀ y_E = 0` and the combined right-hand side
///   is negative. Folding each equality into a pair of inequalities turns
///   this into the usual nonnegative Farkas vector.
/// * `Unbounded.ray` satisfies `ineq r ≤ 0`, `eq r = 0` and strictly improves
///   the objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult<F> {
    Optimal { x: Vec<F>, value: F, dual: Vec<F> },
    Infeasible { farkas: Vec<F> },
    Unbounded { ray: Vec<F> },
}

impl<F: Field> LpProblem<F> {
    /// Feasibility problem over `n` variables with no constraints.
    pub fn new(n: usize) -> Self {
        Self {
            objective: zeros(n),
            sense: Sense::Maximize,
            ineq: Matrix::empty(n),
            ineq_rhs: Vec::new(),
            eq: Matrix::empty(n),
            eq_rhs: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn maximize(mut self, c: Vec<F>) -> Self {
        self.objective = c;
        self.sense = Sense::Maximize;
        self
    }

    pub fn minimize(mut self, c: Vec<F>) -> Self {
        self.objective = c;
        self.sense = Sense::Minimize;
        self
    }

    pub fn leq(&mut self, row: Vec<F>, rhs: F) {
        self.ineq.push_row(row);
        self.ineq_rhs.push(rhs);
    }

    pub fn equal(&mut self, row: Vec<F>, rhs: F) {
        self.eq.push_row(row);
        self.eq_rhs.push(rhs);
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        check_dim(n, self.ineq.cols())?;
        check_dim(n, self.eq.cols())?;
        check_dim(self.ineq.rows(), self.ineq_rhs.len())?;
        check_dim(self.eq.rows(), self.eq_rhs.len())?;
        Ok(())
    }

    pub fn is_feasible_point(&self, x: &[F]) -> bool {
        x.len() == self.num_vars()
            && self
                .ineq
                .row_iter()
                .zip(&self.ineq_rhs)
                .all(|(a, b)| dot(a, x) <= *b)
            && self
                .eq
                .row_iter()
                .zip(&self.eq_rhs)
                .all(|(a, b)| dot(a, x) == *b)
    }
}

impl<F: Field> LpResult<F> {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpResult::Optimal { .. })
    }

    pub fn optimum(&self) -> Option<(&[F], &F)> {
        match self {
            LpResult::Optimal { x, value, .. } => Some((x, value)),
            _ => None,
        }
    }

    /// Re-checks the certificate against `p` with exact arithmetic.
    pub fn verify(&self, p: &LpProblem<F>) -> bool {
        let m1 = p.ineq.rows();
        let combine = |y: &[F]| -> (Vec<F>, F) {
            let n = p.num_vars();
            let mut lhs = zeros::<F>(n);
            let mut rhs = F::zero();
            for (i, yi) in y.iter().enumerate() {
                if yi.is_zero() {
                    continue;
                }
                let (row, b) = if i < m1 {
                    (p.ineq.row(i), &p.ineq_rhs[i])
                } else {
                    (p.eq.row(i - m1), &p.eq_rhs[i - m1])
                };
                for (l, a) in lhs.iter_mut().zip(row) {
                    *l = l.clone() + yi.clone() * a.clone();
                }
                rhs = rhs + yi.clone() * b.clone();
            }
            (lhs, rhs)
        };
        let multipliers_ok = |y: &[F]| {
            y.len() == m1 + p.eq.rows() && y[..m1].iter().all(|v| !v.is_negative())
        };
        match self {
            LpResult::Optimal { x, value, dual } => {
                if !p.is_feasible_point(x) || dot(&p.objective, x) != *value {
                    return false;
                }
                if !multipliers_ok(dual) {
                    return false;
                }
                let s = match p.sense {
                    Sense::Maximize => F::one(),
                    Sense::Minimize => -F::one(),
                };
                let (lhs, rhs) = combine(dual);
                let target: Vec<F> = p.objective.iter().map(|c| s.clone() * c.clone()).collect();
                lhs == target && rhs == s * value.clone()
            }
            LpResult::Infeasible { farkas } => {
                if !multipliers_ok(farkas) {
                    return false;
                }
                let (lhs, rhs) = combine(farkas);
                is_zero_vec(&lhs) && rhs.is_negative()
            }
            LpResult::Unbounded { ray } => {
                if ray.len() != p.num_vars() {
                    return false;
                }
                let recedes = p.ineq.row_iter().all(|a| !dot(a, ray).is_positive())
                    && p.eq.row_iter().all(|a| dot(a, ray).is_zero());
                let gain = dot(&p.objective, ray);
                recedes
                    && match p.sense {
                        Sense::Maximize => gain.is_positive(),
                        Sense::Minimize => gain.is_negative(),
                    }
            }
        }
    }
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    basis: Vec<usize>,
    width: usize,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl<F: Field> Tableau<F> {
    fn rhs(&self, k: usize) -> &F {
        &self.rows[k][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize, reduced: &mut [F]) {
        let inv = F::one() / self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let prow = self.rows[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j] = row[j].clone() - f.clone() * prow[j].clone();
            }
        }
        if !reduced[c].is_zero() {
            let f = reduced[c].clone();
            for &j in &nz {
                if j < reduced.len() {
                    reduced[j] = reduced[j].clone() - f.clone() * prow[j].clone();
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, costs: &[F]) -> Vec<F> {
        let mut rc = costs.to_vec();
        for (k, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[k]];
            if cb.is_zero() {
                continue;
            }
            for (j, v) in row[..self.width].iter().enumerate() {
                if !v.is_zero() {
                    rc[j] = rc[j].clone() - cb.clone() * v.clone();
                }
            }
        }
        rc
    }

    /// Minimizes `costs` over the current basis, never entering columns with
    /// `allowed[j] == false`.
    fn run(&mut self, costs: &[F], allowed: &[bool]) -> Phase {
        let mut rc = self.reduced_costs(costs);
        loop {
            let Some(enter) = (0..self.width).find(|&j| allowed[j] && rc[j].is_negative()) else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, F)> = None;
            for k in 0..self.rows.len() {
                let a = &self.rows[k][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(k).clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && self.basis[k] < self.basis[*l])
                    }
                };
                if better {
                    leave = Some((k, ratio));
                }
            }
            match leave {
                None => return Phase::Unbounded(enter),
                Some((k, _)) => self.pivot(k, enter, &mut rc),
            }
        }
    }

    /// Row vector `c_Bᵀ B⁻¹`, reading `B⁻¹` off the initial identity columns.
    fn multipliers(&self, costs: &[F], init_col: &[usize]) -> Vec<F> {
        init_col
            .iter()
            .map(|&col| {
                let mut s = F::zero();
                for (k, row) in self.rows.iter().enumerate() {
                    let cb = &costs[self.basis[k]];
                    if !cb.is_zero() && !row[col].is_zero() {
                        s = s + cb.clone() * row[col].clone();
                    }
                }
                s
            })
            .collect()
    }
}

/// Solves `p` exactly.
pub fn lp_solve<F: Field>(p: &LpProblem<F>) -> Result<LpResult<F>> {
    p.validate()?;
    let n = p.num_vars();
    let m1 = p.ineq.rows();
    let m2 = p.eq.rows();
    let m = m1 + m2;
    let slack0 = 2 * n;
    let art0 = slack0 + m1;

    let mut sigma = Vec::with_capacity(m);
    let mut needs_art = Vec::with_capacity(m);
    for i in 0..m {
        let (b, is_ineq) = if i < m1 {
            (&p.ineq_rhs[i], true)
        } else {
            (&p.eq_rhs[i - m1], false)
        };
        let neg = b.is_negative();
        sigma.push(!neg);
        needs_art.push(neg || !is_ineq);
    }
    let n_art = needs_art.iter().filter(|&&a| a).count();
    let width = art0 + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut init_col = Vec::with_capacity(m);
    let mut next_art = art0;
    for i in 0..m {
        let (a, b) = if i < m1 {
            (p.ineq.row(i), &p.ineq_rhs[i])
        } else {
            (p.eq.row(i - m1), &p.eq_rhs[i - m1])
        };
        let flip = |v: F| if sigma[i] { v } else { -v };
        let mut row = zeros(width + 1);
        for j in 0..n {
            row[j] = flip(a[j].clone());
            row[n + j] = -row[j].clone();
        }
        if i < m1 {
            row[slack0 + i] = flip(F::one());
        }
        row[width] = flip(b.clone());
        if needs_art[i] {
            row[next_art] = F::one();
            basis.push(next_art);
            init_col.push(next_art);
            next_art += 1;
        } else {
            basis.push(slack0 + i);
            init_col.push(slack0 + i);
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, width };

    let unflip = |u: Vec<F>| -> Vec<F> {
        u.into_iter()
            .zip(&sigma)
            .map(|(v, &s)| if s { -v } else { v })
            .collect()
    };

    if n_art > 0 {
        let mut costs = zeros(width);
        for c in costs[art0..].iter_mut() {
            *c = F::one();
        }
        let allowed = vec![true; width];
        match tab.run(&costs, &allowed) {
            Phase::Optimal => {}
            Phase::Unbounded(_) => unreachable!("phase one objective is bounded below"),
        }
        let infeasibility = (0..m)
            .filter(|&k| tab.basis[k] >= art0)
            .fold(F::zero(), |s, k| s + tab.rhs(k).clone());
        if infeasibility.is_positive() {
            let u = tab.multipliers(&costs, &init_col);
            return Ok(LpResult::Infeasible { farkas: unflip(u) });
        }
        let mut scratch = zeros(width);
        for k in 0..m {
            if tab.basis[k] < art0 {
                continue;
            }
            if let Some(j) = (0..art0).find(|&j| !tab.rows[k][j].is_zero()) {
                tab.pivot(k, j, &mut scratch);
            }
        }
    }

    let s = match p.sense {
        Sense::Maximize => -F::one(),
        Sense::Minimize => F::one(),
    };
    let mut costs = zeros(width);
    for j in 0..n {
        costs[j] = s.clone() * p.objective[j].clone();
        costs[n + j] = -costs[j].clone();
    }
    let allowed: Vec<bool> = (0..width).map(|j| j < art0).collect();
    match tab.run(&costs, &allowed) {
        Phase::Unbounded(enter) => {
            let mut dir = zeros(width);
            dir[enter] = F::one();
            for k in 0..m {
                dir[tab.basis[k]] = -tab.rows[k][enter].clone();
            }
            let ray = (0..n).map(|j| dir[j].clone() - dir[n + j].clone()).collect();
            Ok(LpResult::Unbounded { ray })
        }
        Phase::Optimal => {
            let mut z = zeros(width);
            for k in 0..m {
                z[tab.basis[k]] = tab.rhs(k).clone();
            }
            let x: Vec<F> = (0..n).map(|j| z[j].clone() - z[n + j].clone()).collect();
            let value = dot(&p.objective, &x);
            let u = tab.multipliers(&costs, &init_col);
            Ok(LpResult::Optimal {
                x,
                value,
                dual: unflip(u),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn q(v: i64) -> Rat {
        Rat::from_integer(v.into())
    }

    fn qs(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn unit_square() -> LpProblem<Rat> {
        let mut p = LpProblem::new(2);
        p.leq(qs(&[1, 0]), q(1));
        p.leq(qs(&[-1, 0]), q(0));
        p.leq(qs(&[0, 1]), q(1));
        p.leq(qs(&[0, -1]), q(0));
        p
    }

    #[test]
    fn box_corner() {
        let p = unit_square().maximize(qs(&[1, 1]));
        let r = lp_solve(&p).unwrap();
        assert!(r.verify(&p), "{r:?}");
        let (x, v) = r.optimum().unwrap();
        assert_eq!(x, &qs(&[1, 1])[..]);
        assert_eq!(*v, q(2));
    }

    #[test]
    fn minimize_certificate() {
        let p = unit_square().minimize(qs(&[1, -2]));
        let r = lp_solve(&p).unwrap();
        assert!(r.verify(&p), "{r:?}");
        assert_eq!(*r.optimum().unwrap().1, q(-2));
    }

    #[test]
    fn contradictory_bounds() {
        let mut p = LpProblem::<Rat>::new(1);
        p.leq(qs(&[1]), q(0));
        p.leq(qs(&[-1]), q(-1));
        let r = lp_solve(&p).unwrap();
        assert_eq!(r, LpResult::Infeasible { farkas: qs(&[1, 1]) });
        assert!(r.verify(&p));
    }

    #[test]
    fn half_line() {
        let mut p = LpProblem::<Rat>::new(1).maximize(qs(&[1]));
        p.leq(qs(&[-1]), q(0));
        let r = lp_solve(&p).unwrap();
        assert_eq!(r, LpResult::Unbounded { ray: qs(&[1]) });
        assert!(r.verify(&p));
    }

    #[test]
    fn equalities_native() {
        // max x - y s.t. x + y = 1, x ≤ 3/4 ... with y free.
        let mut p = LpProblem::<Rat>::new(2).maximize(qs(&[1, -1]));
        p.equal(qs(&[1, 1]), q(1));
        p.leq(qs(&[1, 0]), Rat::new(3.into(), 4.into()));
        let r = lp_solve(&p).unwrap();
        assert!(r.verify(&p), "{r:?}");
        assert_eq!(*r.optimum().unwrap().1, Rat::new(1.into(), 2.into()));
    }

    #[test]
    fn inconsistent_equalities() {
        let mut p = LpProblem::<Rat>::new(2);
        p.equal(qs(&[1, 1]), q(1));
        p.equal(qs(&[2, 2]), q(3));
        let r = lp_solve(&p).unwrap();
        assert!(matches!(r, LpResult::Infeasible { .. }));
        assert!(r.verify(&p));
    }

    #[test]
    fn redundant_equalities() {
        let mut p = LpProblem::<Rat>::new(2).minimize(qs(&[1, 0]));
        p.equal(qs(&[1, 1]), q(1));
        p.equal(qs(&[2, 2]), q(2));
        p.leq(qs(&[-1, 0]), q(0));
        let r = lp_solve(&p).unwrap();
        assert!(r.verify(&p), "{r:?}");
    }

    #[test]
    fn malformed() {
        let mut p = LpProblem::<Rat>::new(2);
        p.ineq_rhs.push(q(1));
        assert!(matches!(
            lp_solve(&p),
            Err(crate::Error::DimensionMismatch { .. })
        ));
    }
}
