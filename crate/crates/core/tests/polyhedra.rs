use ncvx_core::linalg::dot;
use ncvx_core::lp::LpResult;
use ncvx_core::text::{render_set, Workspace};
use ncvx_core::{lp_solve, GenRep, HRep, LpProblem, Matrix, Polyhedron, PuncturedPolyhedron, RVec, Rat};
use num_rational::BigRational;
use proptest::prelude::*;

fn r(x: i64) -> Rat {
    Rat::from(x)
}

/// Up to six random rows in dimension `n`, optionally boxed by `|x_i| ≤ 5`.
fn hrep() -> impl Strategy<Value = HRep> {
    (1usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec((proptest::collection::vec(-4i64..=4, n), -4i64..=4), 1..=6),
            any::<bool>(),
            proptest::option::of((proptest::collection::vec(-3i64..=3, n), -2i64..=2)),
        )
            .prop_map(|(n, rows, boxed, eq)| {
                let mut h = HRep::new(n);
                for (a, b) in rows {
                    h.leq(a.into_iter().map(r).collect(), r(b));
                }
                if boxed {
                    for i in 0..n {
                        let mut e = vec![r(0); n];
                        e[i] = r(1);
                        h.leq(e.clone(), r(5));
                        e[i] = r(-1);
                        h.leq(e, r(5));
                    }
                }
                if let Some((a, b)) = eq {
                    h.equal(a.into_iter().map(r).collect(), r(b));
                }
                h
            })
    })
}

fn poly() -> impl Strategy<Value = Polyhedron> {
    hrep().prop_map(|h| Polyhedron::from_h(h).expect("consistent rows"))
}

fn satisfies(h: &HRep, x: &[Rat]) -> bool {
    h.ineq.row_iter().zip(&h.ineq_rhs).all(|(a, b)| dot(a, x) <= *b)
        && h.eq.row_iter().zip(&h.eq_rhs).all(|(a, b)| dot(a, x) == *b)
}

fn recedes(h: &HRep, d: &[Rat]) -> bool {
    h.ineq.row_iter().all(|a| dot(a, d) <= r(0)) && h.eq.row_iter().all(|a| dot(a, d) == r(0))
}

fn lp_of(h: &HRep, c: RVec) -> LpProblem<Rat> {
    let mut lp = LpProblem::new(h.ambient()).maximize(c);
    for (a, b) in h.ineq.row_iter().zip(&h.ineq_rhs) {
        lp.leq(a.to_vec(), b.clone());
    }
    for (a, b) in h.eq.row_iter().zip(&h.eq_rhs) {
        lp.equal(a.to_vec(), b.clone());
    }
    lp
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 96,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn generators_satisfy_and_recover_the_inequalities(p in poly()) {
        let h = p.hrep().clone();
        let v = p.genrep().clone();
        for x in &v.points {
            prop_assert!(satisfies(&h, x));
        }
        for d in v.rays.iter().chain(&v.lines) {
            prop_assert!(recedes(&h, d));
        }
        for l in &v.lines {
            let m: RVec = l.iter().map(|t| -t.clone()).collect();
            prop_assert!(recedes(&h, &m));
        }
        let back = Polyhedron::from_v(v).unwrap();
        prop_assert!(back.set_equal(&p).unwrap());
        prop_assert_eq!(back.dim(), p.dim());
    }

    #[test]
    fn ri_point_is_relatively_interior(p in poly()) {
        prop_assume!(!p.is_empty());
        let x = p.ri_point().unwrap();
        prop_assert!(p.ri_contains(&x));
        // Every row tight at x is tight on the whole set.
        let h = p.hrep();
        let v = p.genrep();
        for (a, b) in h.ineq.row_iter().zip(&h.ineq_rhs) {
            if dot(a, &x) == *b {
                prop_assert!(v.points.iter().all(|g| dot(a, g) == *b));
                prop_assert!(v.rays.iter().chain(&v.lines).all(|d| dot(a, d) == r(0)));
            }
        }
    }

    #[test]
    fn lp_certificates_verify(p in poly(), c in proptest::collection::vec(-4i64..=4, 3)) {
        let h = p.hrep().clone();
        let c: RVec = c[..h.ambient()].iter().copied().map(r).collect();
        let lp = lp_of(&h, c.clone());
        let res = lp_solve(&lp).unwrap();
        prop_assert!(res.verify(&lp));
        let v = p.genrep();
        match res {
            LpResult::Optimal { x, value, .. } => {
                prop_assert!(satisfies(&h, &x));
                prop_assert_eq!(dot(&c, &x), value.clone());
                let best = v.points.iter().map(|g| dot(&c, g)).max().unwrap();
                prop_assert_eq!(best, value);
            }
            LpResult::Infeasible { .. } => prop_assert!(v.points.is_empty()),
            LpResult::Unbounded { .. } => {
                let improving = v.rays.iter().any(|d| dot(&c, d) > r(0))
                    || v.lines.iter().any(|d| dot(&c, d) != r(0));
                prop_assert!(improving);
            }
        }
    }

    #[test]
    fn projection_undoes_product(p in poly(), q in poly()) {
        prop_assume!(!q.is_empty());
        let n = p.ambient_dim();
        let prod = p.product(&q);
        let back = prod.project(&(0..n).collect::<Vec<_>>()).unwrap();
        prop_assert!(back.set_equal(&p).unwrap());
    }

    #[test]
    fn linear_image_matches_mapped_generators(p in poly(), entries in proptest::collection::vec(-3i64..=3, 9)) {
        let n = p.ambient_dim();
        let m = 2;
        let rows: Vec<RVec> = (0..m).map(|i| (0..n).map(|j| r(entries[i * 3 + j])).collect()).collect();
        let a = Matrix::from_rows(n, rows).unwrap();
        let img = p.linear_image(&a).unwrap();
        let v = p.genrep();
        let map = |xs: &[RVec]| xs.iter().map(|x| a.mul_vec(x)).collect::<Vec<_>>();
        let mut lines = map(&v.lines);
        lines.retain(|l| l.iter().any(|t| *t != r(0)));
        let mut rays = map(&v.rays);
        rays.retain(|l| l.iter().any(|t| *t != r(0)));
        let expected = Polyhedron::from_v(GenRep { ambient: m, points: map(&v.points), rays, lines }).unwrap();
        prop_assert!(img.set_equal(&expected).unwrap());
    }

    #[test]
    fn minkowski_sum_contains_pairwise_sums(p in poly(), q in poly()) {
        prop_assume!(p.ambient_dim() == q.ambient_dim());
        let s = p.minkowski_sum(&q).unwrap();
        let (vp, vq) = (p.genrep(), q.genrep());
        for x in &vp.points {
            for y in &vq.points {
                let z: RVec = x.iter().zip(y).map(|(a, b)| a.clone() + b.clone()).collect();
                prop_assert!(s.contains(&z));
            }
        }
        prop_assert_eq!(s.is_empty(), p.is_empty() || q.is_empty());
    }

    #[test]
    fn sets_round_trip_through_text(p in poly(), d in poly()) {
        prop_assume!(p.ambient_dim() == d.ambient_dim());
        let s = PuncturedPolyhedron::exact(p, vec![d]).unwrap();
        let text = render_set("S", &s);
        let ws = Workspace::<Rat>::parse(&text).unwrap();
        let back = ws.set("S").unwrap();
        prop_assert!(back.carrier().set_equal(s.carrier()).unwrap());
        prop_assert_eq!(back.removed().len(), s.removed().len());
        for (a, b) in back.removed().iter().zip(s.removed()) {
            prop_assert!(a.set_equal(b).unwrap());
        }
        prop_assert_eq!(render_set("S", back), text);
    }

    #[test]
    fn scalar_choice_does_not_change_geometry(h in hrep()) {
        let big = {
            let conv = |x: &Rat| BigRational::new(x.numer(), x.denom());
            let mut out = ncvx_core::polyhedron::HRep::<BigRational>::new(h.ambient());
            for (a, b) in h.ineq.row_iter().zip(&h.ineq_rhs) {
                out.leq(a.iter().map(conv).collect(), conv(b));
            }
            for (a, b) in h.eq.row_iter().zip(&h.eq_rhs) {
                out.equal(a.iter().map(conv).collect(), conv(b));
            }
            ncvx_core::polyhedron::Polyhedron::from_h(out).unwrap()
        };
        let small = Polyhedron::from_h(h).unwrap();
        prop_assert_eq!(big.dim(), small.dim());
        prop_assert_eq!(big.is_empty(), small.is_empty());
        let bc = big.canonical();
        let sc = small.canonical();
        prop_assert_eq!(bc.genrep().points.len(), sc.genrep().points.len());
    }
}
