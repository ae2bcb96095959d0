//! Brute-force checks written directly against the LP kernel and the
//! generator lists, without going through the core's relative interior or
//! normal cone code.

use ncvx_core::linalg::{dot, sub};
use ncvx_core::{lp_solve, Error, LpProblem, LpResult, NcFunction, Polyhedron, PuncturedPolyhedron, RMat, RVec, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A linear system in auxiliary variables `u`, fed by polyhedra whose
/// points are affine images `M u + q` of them.
pub struct LinSys {
    lp: LpProblem<Rat>,
    n: usize,
}

impl LinSys {
    pub fn new(n: usize) -> Self {
        Self {
            lp: LpProblem::new(n),
            n,
        }
    }

    pub fn leq(&mut self, a: RVec, b: Rat) {
        self.lp.leq(a, b);
    }

    pub fn equal(&mut self, a: RVec, b: Rat) {
        self.lp.equal(a, b);
    }

    /// Requires `M u + q ∈ P`, or `M u + q ∈ rec P` when `homogeneous`.
    pub fn require(&mut self, p: &Polyhedron, m: &RMat, q: &[Rat], homogeneous: bool) {
        let h = p.hrep();
        let mt = m.transpose();
        let push = |lp: &mut LpProblem<Rat>, a: &[Rat], b: &Rat, eq: bool| {
            let row = mt.mul_vec(a);
            let base = if homogeneous { Rat::zero() } else { b.clone() };
            let rhs = base - dot(a, q);
            if eq {
                lp.equal(row, rhs);
            } else {
                lp.leq(row, rhs);
            }
        };
        for (a, b) in h.ineq.row_iter().zip(&h.ineq_rhs) {
            push(&mut self.lp, a, b, false);
        }
        for (a, b) in h.eq.row_iter().zip(&h.eq_rhs) {
            push(&mut self.lp, a, b, true);
        }
    }

    /// Requires coordinates `offset..offset + v.len()` of `u` to equal `v`.
    pub fn fix(&mut self, offset: usize, v: &[Rat]) {
        for (i, x) in v.iter().enumerate() {
            let mut row = vec![Rat::zero(); self.n];
            row[offset + i] = Rat::one();
            self.lp.equal(row, x.clone());
        }
    }

    pub fn feasible(&self) -> bool {
        !matches!(
            lp_solve(&self.lp).expect("well-formed system"),
            LpResult::Infeasible { .. }
        )
    }
}

/// The selector matrix mapping `u` to `u[offset..offset + len]`.
pub fn block(total: usize, offset: usize, len: usize) -> RMat {
    let mut m = RMat::zeros(len, total);
    for i in 0..len {
        m[(i, offset + i)] = Rat::one();
    }
    m
}

/// Inequality rows of `P` that hold with equality on all of `P`, found by
/// one LP per row.
pub fn implicit_rows(p: &Polyhedron) -> Vec<usize> {
    let h = p.hrep();
    let n = p.ambient_dim();
    let mut out = Vec::new();
    for (i, (a, b)) in h.ineq.row_iter().zip(&h.ineq_rhs).enumerate() {
        let mut lp = LpProblem::new(n).minimize(a.to_vec());
        for (r, s) in h.ineq.row_iter().zip(&h.ineq_rhs) {
            lp.leq(r.to_vec(), s.clone());
        }
        for (r, s) in h.eq.row_iter().zip(&h.eq_rhs) {
            lp.equal(r.to_vec(), s.clone());
        }
        match lp_solve(&lp).expect("well-formed") {
            LpResult::Optimal { value, .. } if &value == b => out.push(i),
            LpResult::Infeasible { .. } => return (0..h.ineq.rows()).collect(),
            _ => {}
        }
    }
    out
}

/// `x ∈ ri P`, from [`implicit_rows`].
pub fn ri_contains(p: &Polyhedron, x: &[Rat]) -> bool {
    if !p.contains(x) {
        return false;
    }
    let h = p.hrep();
    let imp = implicit_rows(p);
    h.ineq
        .row_iter()
        .zip(&h.ineq_rhs)
        .enumerate()
        .all(|(i, (a, b))| imp.contains(&i) || dot(a, x) < *b)
}

/// Whether some `u` has `M_i u + q_i ∈ ri P_i` for all `i` and satisfies
/// the equations `E u = d`.
pub fn ri_exists(nvars: usize, parts: &[(&Polyhedron, RMat, RVec)], eqs: &[(RVec, Rat)]) -> bool {
    let mut lp = LpProblem::new(nvars + 1);
    let mut obj = vec![Rat::zero(); nvars + 1];
    obj[nvars] = Rat::one();
    lp = lp.maximize(obj);
    let mut cap = vec![Rat::zero(); nvars + 1];
    cap[nvars] = Rat::one();
    lp.leq(cap, Rat::one());
    for (p, m, q) in parts {
        let h = p.hrep();
        let imp = implicit_rows(p);
        let mt = m.transpose();
        for (i, (a, b)) in h.ineq.row_iter().zip(&h.ineq_rhs).enumerate() {
            let mut row = mt.mul_vec(a);
            let rhs = b.clone() - dot(a, q);
            if imp.contains(&i) {
                row.push(Rat::zero());
                lp.equal(row, rhs);
            } else {
                row.push(Rat::one());
                lp.leq(row, rhs);
            }
        }
        for (a, b) in h.eq.row_iter().zip(&h.eq_rhs) {
            let mut row = mt.mul_vec(a);
            row.push(Rat::zero());
            lp.equal(row, b.clone() - dot(a, q));
        }
    }
    for (a, b) in eqs {
        let mut row = a.clone();
        row.push(Rat::zero());
        lp.equal(row, b.clone());
    }
    match lp_solve(&lp).expect("well-formed") {
        LpResult::Optimal { value, .. } => value.is_positive(),
        LpResult::Unbounded { .. } => true,
        LpResult::Infeasible { .. } => false,
    }
}

/// `⟨v, g − x̄⟩ ≤ 0` for every point generator `g` of `P`, `⟨v, r⟩ ≤ 0`
/// for every ray and `⟨v, l⟩ = 0` for every line.
pub fn in_normal_cone(p: &Polyhedron, x: &[Rat], v: &[Rat]) -> bool {
    let g = p.genrep();
    g.points.iter().all(|pt| !dot(v, &sub(pt, x)).is_positive())
        && g.rays.iter().all(|r| !dot(v, r).is_positive())
        && g.lines.iter().all(|l| dot(v, l).is_zero())
}

/// `v ∈ ∂f(x̄)` iff `min { λ − ⟨v, x⟩ : (x, λ) ∈ epi carrier }` equals
/// `f(x̄) − ⟨v, x̄⟩`. The epigraph system is assembled here from the
/// domain rows and the pieces.
pub fn is_subgradient(f: &NcFunction, x: &[Rat], v: &[Rat]) -> Result<bool, Error> {
    let fx = f.evaluate(x)?.ok_or(Error::PointNotInDomain)?;
    let n = f.dim();
    let mut obj: RVec = v.iter().map(|c| -c.clone()).collect();
    obj.push(Rat::one());
    let mut lp = LpProblem::new(n + 1).minimize(obj);
    let dh = f.dom().carrier().hrep();
    let lift = |a: &[Rat]| {
        let mut r = a.to_vec();
        r.push(Rat::zero());
        r
    };
    for (a, b) in dh.ineq.row_iter().zip(&dh.ineq_rhs) {
        lp.leq(lift(a), b.clone());
    }
    for (a, b) in dh.eq.row_iter().zip(&dh.eq_rhs) {
        lp.equal(lift(a), b.clone());
    }
    for piece in f.pieces() {
        let mut r = piece.c.clone();
        r.push(-Rat::one());
        lp.leq(r, -piece.beta.clone());
    }
    let target = fx - dot(v, x);
    Ok(match lp_solve(&lp)? {
        LpResult::Optimal { value, .. } => value == target,
        _ => false,
    })
}

/// Result of [`oracle_membership_grid`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridReport {
    pub resolution: usize,
    pub points: usize,
    pub members: Vec<Vec<String>>,
    /// Grid points where `membership` disagrees with the raw predicates.
    pub mismatches: Vec<Vec<String>>,
}

/// Compares `membership` with the carrier and piece inequalities on a
/// rational grid over the carrier's bounding box, clipped to `[-8, 8]`.
pub fn oracle_membership_grid(omega: &PuncturedPolyhedron, resolution: usize) -> Result<GridReport, Error> {
    if omega.fidelity() != ncvx_core::Fidelity::Exact {
        return Err(Error::Fidelity);
    }
    let n = omega.ambient_dim();
    let mut report = GridReport {
        resolution,
        points: 0,
        members: Vec::new(),
        mismatches: Vec::new(),
    };
    let c = omega.carrier();
    if c.is_empty() {
        return Ok(report);
    }
    let clip = Rat::from_integer(8.into());
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for i in 0..n {
        let e = ncvx_core::linalg::unit::<Rat>(n, i);
        let up = c.support(&e).map(|(v, _)| v.min(clip.clone())).unwrap_or(clip.clone());
        let neg: RVec = e.iter().map(|x| -x.clone()).collect();
        let down = c.support(&neg).map(|(v, _)| (-v).max(-clip.clone())).unwrap_or(-clip.clone());
        lo.push(down);
        hi.push(up);
    }
    let res = resolution.max(1);
    let steps: Vec<Rat> = (0..n)
        .map(|i| (hi[i].clone() - lo[i].clone()) / Rat::from_integer((res as i64).into()))
        .collect();
    let mut idx = vec![0usize; n];
    loop {
        let x: RVec = (0..n)
            .map(|i| lo[i].clone() + steps[i].clone() * Rat::from_integer((idx[i] as i64).into()))
            .collect();
        report.points += 1;
        let raw = c.hrep().contains(&x) && !omega.removed().iter().any(|d| d.hrep().contains(&x));
        let m = omega.membership(&x)?;
        let text: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        if m != raw {
            report.mismatches.push(text.clone());
        }
        if m {
            report.members.push(text);
        }
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] <= res {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncvx_core::{rvec, Polyhedron};

    fn boxed(lo: &str, hi: &str) -> Polyhedron {
        Polyhedron::boxed(&rvec(lo), &rvec(hi)).unwrap()
    }

    #[test]
    fn grid_over_unit_interval() {
        let s = PuncturedPolyhedron::convex(boxed("0", "1"));
        let r = oracle_membership_grid(&s, 4).unwrap();
        let want: Vec<Vec<String>> = ["0", "1/4", "1/2", "3/4", "1"].iter().map(|v| vec![v.to_string()]).collect();
        assert_eq!(r.members, want);
        assert!(r.mismatches.is_empty());
    }

    #[test]
    fn grid_excludes_puncture() {
        let s = PuncturedPolyhedron::exact(boxed("0", "2"), vec![Polyhedron::point(rvec("1"))]).unwrap();
        let r = oracle_membership_grid(&s, 2).unwrap();
        assert_eq!(r.members, vec![vec!["0".to_string()], vec!["2".to_string()]]);
    }

    #[test]
    fn grid_on_empty_and_near_sets() {
        let e = PuncturedPolyhedron::empty(2);
        assert_eq!(oracle_membership_grid(&e, 3).unwrap().points, 0);
        let near = PuncturedPolyhedron::near(boxed("0", "1"));
        assert!(matches!(oracle_membership_grid(&near, 3), Err(Error::Fidelity)));
    }

    #[test]
    fn implicit_rows_and_ri() {
        let mut h = ncvx_core::HRep::new(2);
        h.leq(rvec("1 0"), ncvx_core::rat("0"));
        h.leq(rvec("-1 0"), ncvx_core::rat("0"));
        h.leq(rvec("0 1"), ncvx_core::rat("1"));
        h.leq(rvec("0 -1"), ncvx_core::rat("0"));
        let p = Polyhedron::from_h(h).unwrap();
        assert_eq!(implicit_rows(&p), vec![0, 1]);
        assert!(ri_contains(&p, &rvec("0 1/2")));
        assert!(!ri_contains(&p, &rvec("0 1")));
    }

    #[test]
    fn normal_and_subgradient_oracles() {
        let sq = boxed("0 0", "1 1");
        assert!(in_normal_cone(&sq, &rvec("1 1"), &rvec("1 2")));
        assert!(!in_normal_cone(&sq, &rvec("1 1"), &rvec("1 -1")));
        let abs = NcFunction::new(
            1,
            vec![ncvx_core::Piece::new(rvec("1"), ncvx_core::rat("0")), ncvx_core::Piece::new(rvec("-1"), ncvx_core::rat("0"))],
            PuncturedPolyhedron::convex(Polyhedron::full_space(1)),
        )
        .unwrap();
        assert!(is_subgradient(&abs, &rvec("0"), &rvec("1/2")).unwrap());
        assert!(is_subgradient(&abs, &rvec("0"), &rvec("-1")).unwrap());
        assert!(!is_subgradient(&abs, &rvec("0"), &rvec("3/2")).unwrap());
        assert!(!is_subgradient(&abs, &rvec("1"), &rvec("0")).unwrap());
    }
}
