//! Fourier–Motzkin projection with exact LP redundancy removal.

use crate::linalg::dot;
use crate::lp::{lp_solve, LpProblem, LpResult};
use crate::scalar::Field;

use super::HRep;

/// A constraint row `a·x (≤|=) b` over the live variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Row<F> {
    a: Vec<F>,
    b: F,
}

impl<F: Field> Row<F> {
    fn normalized(self) -> Self {
        match self.a.iter().find(|x| !x.is_zero()) {
            Some(p) => {
                let s = p.abs();
                Row {
                    a: self.a.iter().map(|x| x.clone() / s.clone()).collect(),
                    b: self.b / s,
                }
            }
            None => self,
        }
    }

    fn drop_col(&mut self, j: usize) {
        self.a.remove(j);
    }
}

/// Projects `{x : h}` onto the coordinates `keep`, in that order.
///
/// Returns `None` when the set is empty.
pub(crate) fn project<F: Field>(h: &HRep<F>, keep: &[usize]) -> Option<HRep<F>> {
    let n = h.ambient();
    let mut ineq: Vec<Row<F>> = h
        .ineq
        .row_iter()
        .zip(&h.ineq_rhs)
        .map(|(a, b)| Row {
            a: a.to_vec(),
            b: b.clone(),
        })
        .collect();
    let mut eq: Vec<Row<F>> = h
        .eq
        .row_iter()
        .zip(&h.eq_rhs)
        .map(|(a, b)| Row {
            a: a.to_vec(),
            b: b.clone(),
        })
        .collect();
    if !feasible(&ineq, &eq) {
        return None;
    }
    // Live variables in their current column order.
    let mut live: Vec<usize> = (0..n).collect();
    let mut doomed: Vec<usize> = (0..n).filter(|j| !keep.contains(j)).collect();
    doomed.reverse();
    while let Some(var) = doomed.pop() {
        let j = live.iter().position(|&v| v == var).expect("live variable");
        if let Some(pos) = eq.iter().position(|r| !r.a[j].is_zero()) {
            let e = eq.remove(pos);
            let substitute = |r: &mut Row<F>| {
                if r.a[j].is_zero() {
                    return;
                }
                let f = r.a[j].clone() / e.a[j].clone();
                for (x, y) in r.a.iter_mut().zip(&e.a) {
                    *x = x.clone() - f.clone() * y.clone();
                }
                r.b = r.b.clone() - f * e.b.clone();
            };
            eq.iter_mut().for_each(substitute);
            ineq.iter_mut().for_each(substitute);
        } else {
            let (mut pos, mut neg, mut zero) = (Vec::new(), Vec::new(), Vec::new());
            for r in ineq {
                if r.a[j].is_positive() {
                    pos.push(r);
                } else if r.a[j].is_negative() {
                    neg.push(r);
                } else {
                    zero.push(r);
                }
            }
            for p in &pos {
                for m in &neg {
                    let cp = -m.a[j].clone();
                    let cm = p.a[j].clone();
                    let a = p
                        .a
                        .iter()
                        .zip(&m.a)
                        .map(|(x, y)| cp.clone() * x.clone() + cm.clone() * y.clone())
                        .collect();
                    let b = cp.clone() * p.b.clone() + cm.clone() * m.b.clone();
                    zero.push(Row { a, b });
                }
            }
            ineq = zero;
        }
        for r in ineq.iter_mut().chain(eq.iter_mut()) {
            r.drop_col(j);
        }
        live.remove(j);
        ineq = simplify(ineq)?;
        eq = simplify_eq(eq)?;
        ineq = remove_redundant(ineq, &eq);
    }
    // Reorder columns to match `keep`.
    let order: Vec<usize> = keep
        .iter()
        .map(|k| live.iter().position(|v| v == k).expect("kept variable"))
        .collect();
    let permute = |r: &Row<F>| order.iter().map(|&c| r.a[c].clone()).collect::<Vec<F>>();
    let mut out = HRep::new(keep.len());
    for r in &ineq {
        out.ineq.push_row(permute(r));
        out.ineq_rhs.push(r.b.clone());
    }
    for r in &eq {
        out.eq.push_row(permute(r));
        out.eq_rhs.push(r.b.clone());
    }
    Some(out)
}

fn simplify<F: Field>(rows: Vec<Row<F>>) -> Option<Vec<Row<F>>> {
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        if r.a.iter().all(|x| x.is_zero()) {
            if r.b.is_negative() {
                return None;
            }
            continue;
        }
        out.push(r.normalized());
    }
    out.sort();
    // Same direction: keep the tightest bound.
    out.dedup_by(|later, earlier| later.a == earlier.a);
    Some(out)
}

fn simplify_eq<F: Field>(rows: Vec<Row<F>>) -> Option<Vec<Row<F>>> {
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        if r.a.iter().all(|x| x.is_zero()) {
            if !r.b.is_zero() {
                return None;
            }
            continue;
        }
        out.push(r.normalized());
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn feasible<F: Field>(ineq: &[Row<F>], eq: &[Row<F>]) -> bool {
    let Some(first) = ineq.first().or(eq.first()) else {
        return true;
    };
    let mut lp = LpProblem::new(first.a.len());
    for r in ineq {
        lp.leq(r.a.clone(), r.b.clone());
    }
    for r in eq {
        lp.equal(r.a.clone(), r.b.clone());
    }
    !matches!(
        lp_solve(&lp).expect("well-formed"),
        LpResult::Infeasible { .. }
    )
}

fn remove_redundant<F: Field>(mut rows: Vec<Row<F>>, eq: &[Row<F>]) -> Vec<Row<F>> {
    let mut i = 0;
    while i < rows.len() {
        let target = rows[i].clone();
        let mut lp = LpProblem::new(target.a.len()).maximize(target.a.clone());
        for (k, r) in rows.iter().enumerate() {
            if k != i {
                lp.leq(r.a.clone(), r.b.clone());
            }
        }
        for r in eq {
            lp.equal(r.a.clone(), r.b.clone());
        }
        let redundant = match lp_solve(&lp).expect("well-formed") {
            LpResult::Optimal { value, .. } => value <= target.b,
            LpResult::Unbounded { .. } => false,
            // The remaining rows are infeasible only if the whole set is.
            LpResult::Infeasible { .. } => false,
        };
        if redundant {
            rows.remove(i);
        } else {
            i += 1;
        }
    }
    debug_assert!(rows.iter().all(|r| dot(&r.a, &r.a).is_positive()));
    rows
}
