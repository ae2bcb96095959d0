//! Suites over many random instances: kernel soundness, oracle
//! equivalence of normal cones and subdifferentials, and qualified runs of
//! the calculus rules.

use ncvx_core::gendiff::{normal_cone, subdifferential};
use ncvx_core::linalg::{dot, fmt_vec};
use ncvx_core::{lp_solve, GenRep, HRep, LpProblem, LpResult, Polyhedron, PuncturedPolyhedron, RVec, Rat};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::gen::{Gen, InstanceSpec};
use crate::oracle::{in_normal_cone, is_subgradient};
use crate::{theorem_check, HarnessError, TheoremReport};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub cases: usize,
    /// Individual assertions evaluated.
    pub checks: usize,
    /// For the subgradient suite, exterior vectors tested.
    pub exterior: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }
}

/// A random polyhedron of dimension at most 4 with coefficients in
/// `[-4, 4]`; may be empty, unbounded or lower-dimensional.
pub fn random_polyhedron(g: &mut Gen) -> Polyhedron {
    let n = g.int(1, 4) as usize;
    if g.chance(0.5) {
        let mut h = HRep::new(n);
        for _ in 0..g.int(1, 8) {
            let a = g.nonzero_ivec(n, 4);
            let b = Rat::from_integer(g.int(-4, 4).into());
            h.leq(a, b);
        }
        if g.chance(0.2) {
            let a = g.nonzero_ivec(n, 4);
            let b = Rat::from_integer(g.int(-4, 4).into());
            h.equal(a, b);
        }
        Polyhedron::from_h(h).expect("consistent shape")
    } else {
        let points = (0..g.int(1, 5)).map(|_| g.ivec(n, -4, 4)).collect();
        let rays = (0..g.int(0, 2)).map(|_| g.nonzero_ivec(n, 4)).collect();
        let lines = (0..g.int(0, 1)).map(|_| g.nonzero_ivec(n, 4)).collect();
        Polyhedron::from_v(GenRep {
            ambient: n,
            points,
            rays,
            lines,
        })
        .expect("consistent shape")
    }
}

fn lp_of(p: &Polyhedron, c: RVec) -> LpProblem<Rat> {
    let h = p.hrep();
    let mut lp = LpProblem::new(p.ambient_dim()).maximize(c);
    for (a, b) in h.ineq.row_iter().zip(&h.ineq_rhs) {
        lp.leq(a.to_vec(), b.clone());
    }
    for (a, b) in h.eq.row_iter().zip(&h.eq_rhs) {
        lp.equal(a.to_vec(), b.clone());
    }
    lp
}

/// Double description round trips, LP certificates and the
/// projection/product law on `count` random polyhedra.
pub fn kernel_check(seed: u64, count: usize) -> SuiteReport {
    let mut g = Gen::new(InstanceSpec::with_seed(seed));
    let mut r = SuiteReport::default();
    for i in 0..count {
        r.cases += 1;
        let p = random_polyhedron(&mut g);
        let back = p.dd_convert().dd_convert();
        r.check(p.set_equal(&back).unwrap_or(false), || format!("case {i}: dd round trip"));
        let from_h = Polyhedron::from_h(p.hrep().clone()).expect("valid");
        let from_v = Polyhedron::from_v(p.genrep().clone()).expect("valid");
        r.check(from_h.hrep().contains_generators(from_v.genrep()), || {
            format!("case {i}: generators violate the inequalities")
        });
        r.check(from_v.set_equal(&from_h).unwrap_or(false), || format!("case {i}: H and V differ"));

        let n = p.ambient_dim();
        let c = g.ivec(n, -4, 4);
        let lp = lp_of(&p, c.clone());
        let gens = p.genrep();
        match lp_solve(&lp) {
            Err(e) => r.check(false, || format!("case {i}: lp error {e}")),
            Ok(res) => {
                r.check(res.verify(&lp), || format!("case {i}: LP certificate does not verify"));
                match &res {
                    LpResult::Optimal { value, .. } => {
                        let best = gens.points.iter().map(|x| dot(&c, x)).max();
                        let bounded = gens.rays.iter().all(|d| !dot(&c, d).is_positive())
                            && gens.lines.iter().all(|l| dot(&c, l).is_zero());
                        r.check(best.as_ref() == Some(value) && bounded, || {
                            format!("case {i}: optimum disagrees with the generators")
                        });
                    }
                    LpResult::Unbounded { .. } => {
                        let escapes = gens.rays.iter().any(|d| dot(&c, d).is_positive())
                            || gens.lines.iter().any(|l| !dot(&c, l).is_zero());
                        r.check(!gens.points.is_empty() && escapes, || {
                            format!("case {i}: unbounded without an improving direction")
                        });
                    }
                    LpResult::Infeasible { .. } => {
                        r.check(gens.points.is_empty(), || format!("case {i}: infeasible but nonempty"));
                    }
                }
            }
        }

        let m = g.int(1, 2) as usize;
        let qpts = (0..g.int(1, 3)).map(|_| g.ivec(m, -4, 4)).collect();
        let q = Polyhedron::from_points(m, qpts).expect("valid");
        let prod = p.product(&q);
        let first: Vec<usize> = (0..n).collect();
        let second: Vec<usize> = (n..n + m).collect();
        let back = prod.project(&first).expect("valid");
        r.check(back.set_equal(&p).unwrap_or(false), || format!("case {i}: project(P × Q) ≠ P"));
        if !p.is_empty() {
            let back = prod.project(&second).expect("valid");
            r.check(back.set_equal(&q).unwrap_or(false), || format!("case {i}: project(P × Q) ≠ Q"));
        } else {
            r.check(prod.is_empty(), || format!("case {i}: ∅ × Q nonempty"));
        }
    }
    r
}

fn point_of(g: &mut Gen, omega: &PuncturedPolyhedron) -> Option<RVec> {
    let mut cands: Vec<RVec> = omega
        .carrier()
        .vertices()
        .into_iter()
        .filter(|v| omega.membership(v).unwrap_or(false))
        .collect();
    cands.extend(g.members(omega, 2));
    g.pick(&cands).cloned()
}

/// Soundness and maximality of `normal_cone` against the generator
/// inequalities, on `count` random (set, point) pairs.
pub fn normal_cone_oracle_check(seed: u64, count: usize) -> SuiteReport {
    let mut g = Gen::new(InstanceSpec::with_seed(seed));
    let mut r = SuiteReport::default();
    while r.cases < count {
        let n = g.int(1, 3) as usize;
        let a = g.anchor(n);
        let force = g.chance(0.7);
        let omega = g.set_at(&a, force);
        let Some(x) = point_of(&mut g, &omega) else {
            continue;
        };
        r.cases += 1;
        let case = r.cases;
        let cone = match normal_cone(&omega, &x) {
            Ok(c) => c,
            Err(e) => {
                r.check(false, || format!("case {case}: normal_cone error {e}"));
                continue;
            }
        };
        let carrier = omega.carrier();
        let cg = cone.genrep().clone();
        for v in cg.rays.iter().chain(&cg.lines) {
            r.check(in_normal_cone(carrier, &x, v), || {
                format!("case {case}: generator {} of N violates the oracle", fmt_vec(v))
            });
        }
        for l in &cg.lines {
            let m: RVec = l.iter().map(|t| -t.clone()).collect();
            r.check(in_normal_cone(carrier, &x, &m), || format!("case {case}: -line violates the oracle"));
        }
        let mut probes: Vec<RVec> = (0..6).map(|_| g.ivec(n, -4, 4)).collect();
        for _ in 0..4 {
            let mut v = vec![Rat::zero(); n];
            for d in cg.rays.iter().chain(&cg.lines) {
                let w = Rat::from_integer(g.int(0, 2).into());
                v = ncvx_core::linalg::add(&v, &ncvx_core::linalg::scale(&w, d));
            }
            probes.push(v.clone());
            let e = g.ivec(n, -1, 1);
            probes.push(ncvx_core::linalg::add(&v, &e));
        }
        for w in probes {
            let want = in_normal_cone(carrier, &x, &w);
            r.check(cone.contains(&w) == want, || {
                format!("case {case}: membership of {} disagrees with the oracle", fmt_vec(&w))
            });
        }
        let closed = PuncturedPolyhedron::convex(carrier.clone());
        let same = normal_cone(&closed, &x).and_then(|c| c.set_equal(&cone)).unwrap_or(false);
        r.check(same, || format!("case {case}: closure changes the normal cone"));
    }
    r
}

/// Every generator of the computed subdifferential passes the LP
/// subgradient test, and random vectors outside it fail, on `count` random
/// (function, point) pairs.
pub fn subgradient_oracle_check(seed: u64, count: usize) -> SuiteReport {
    let mut g = Gen::new(InstanceSpec::with_seed(seed));
    let mut r = SuiteReport::default();
    while r.cases < count {
        let n = g.int(1, 3) as usize;
        let a = g.anchor(n);
        let f = g.fn_at(&a, true, false);
        let Some(x) = point_of(&mut g, f.dom()) else {
            continue;
        };
        r.cases += 1;
        let case = r.cases;
        let s = match subdifferential(&f, &x) {
            Ok(s) => s,
            Err(e) => {
                r.check(false, || format!("case {case}: subdifferential error {e}"));
                continue;
            }
        };
        let sg = s.genrep().clone();
        r.check(!sg.points.is_empty(), || format!("case {case}: empty subdifferential"));
        let mut inside: Vec<RVec> = sg.points.clone();
        if let Some(p0) = sg.points.first() {
            for d in sg.rays.iter().chain(&sg.lines) {
                inside.push(ncvx_core::linalg::add(p0, d));
            }
            for l in &sg.lines {
                inside.push(ncvx_core::linalg::sub(p0, l));
            }
        }
        for v in inside {
            let ok = is_subgradient(&f, &x, &v).unwrap_or(false);
            r.check(ok, || format!("case {case}: {} in ∂f fails the LP oracle", fmt_vec(&v)));
        }
        let mut tested = 0;
        for _ in 0..20 {
            if tested == 2 {
                break;
            }
            let w = g.ivec(n, -5, 5);
            if s.contains(&w) {
                continue;
            }
            tested += 1;
            r.exterior += 1;
            let ok = !is_subgradient(&f, &x, &w).unwrap_or(true);
            r.check(ok, || format!("case {case}: exterior {} passes the LP oracle", fmt_vec(&w)));
        }
    }
    r
}

/// Runs `id` in batches until `qualified` trials have passed or failed,
/// giving up after `20 × qualified` trials.
pub fn qualified_run(id: &str, spec: &InstanceSpec, qualified: usize) -> Result<TheoremReport, HarnessError> {
    let mut trials = qualified;
    loop {
        let r = theorem_check(id, spec, trials)?;
        if r.passes + r.failures.len() >= qualified || trials >= 20 * qualified {
            return Ok(r);
        }
        trials *= 2;
    }
}
