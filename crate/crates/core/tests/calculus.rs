use ncvx_core::gendiff::{normal_cone, subdiff_sum_rule, subdifferential};
use ncvx_core::ncset::Verdict;
use ncvx_core::{rvec, NcFunction, Piece, Polyhedron, PuncturedPolyhedron, RVec, Rat};
use proptest::prelude::*;

fn r(x: i64) -> Rat {
    Rat::from(x)
}

fn cube(n: usize) -> Polyhedron {
    Polyhedron::boxed(&vec![r(-2); n], &vec![r(2); n]).unwrap()
}

fn vector(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = RVec> {
    proptest::collection::vec(lo..=hi, n).prop_map(|v| v.into_iter().map(r).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn interior_point_puncture_is_the_witness((n, x) in (1usize..=3).prop_flat_map(|n| (Just(n), vector(n, -1, 1)))) {
        let s = PuncturedPolyhedron::exact(cube(n), vec![Polyhedron::point(x.clone())]).unwrap();
        match s.verdict() {
            Verdict::No { witness, piece } => {
                prop_assert_eq!(witness, &x);
                prop_assert_eq!(*piece, 0);
            }
            v => prop_assert!(false, "verdict {}", v.label()),
        }
        prop_assert_eq!(s.membership(&x).unwrap(), false);
    }

    #[test]
    fn boundary_punctures_keep_near_convexity(
        (n, mut x, k, hi) in (1usize..=3).prop_flat_map(|n| (Just(n), vector(n, -2, 2), 0..n, any::<bool>()))
    ) {
        x[k] = if hi { r(2) } else { r(-2) };
        let s = PuncturedPolyhedron::exact(cube(n), vec![Polyhedron::point(x.clone())]).unwrap();
        prop_assert!(s.verdict().is_yes());
        prop_assert!(s.closure().unwrap().set_equal(&cube(n)).unwrap());
        let y = s.ri_point().unwrap();
        prop_assert!(s.ri_member(&y).unwrap());
        prop_assert!(s.near_equal(&PuncturedPolyhedron::convex(cube(n))).unwrap());
    }

    /// For a finite maximum of affine pieces on the whole space,
    /// `∂f(x)` is the convex hull of the active gradients.
    #[test]
    fn max_affine_subdifferential_is_hull_of_active_gradients(
        (n, pieces, x) in (1usize..=2).prop_flat_map(|n| (
            Just(n),
            proptest::collection::vec((vector(n, -3, 3), -2i64..=2), 1..=4),
            vector(n, -1, 1),
        ))
    ) {
        let pieces: Vec<Piece> = pieces.into_iter().map(|(c, b)| Piece::new(c, r(b))).collect();
        let f = NcFunction::new(n, pieces.clone(), PuncturedPolyhedron::convex(Polyhedron::full_space(n))).unwrap();
        let top = pieces.iter().map(|p| p.eval(&x)).max().unwrap();
        let grads: Vec<RVec> = pieces.iter().filter(|p| p.eval(&x) == top).map(|p| p.c.clone()).collect();
        let want = Polyhedron::from_points(n, grads).unwrap();
        let got = subdifferential(&f, &x).unwrap();
        prop_assert!(got.set_equal(&want).unwrap());
    }

    #[test]
    fn normal_cone_of_cube_is_spanned_by_active_facets(
        (n, x) in (1usize..=3).prop_flat_map(|n| (Just(n), proptest::collection::vec(prop_oneof![Just(-2i64), Just(0), Just(2)], n)))
    ) {
        let x: RVec = x.into_iter().map(r).collect();
        let s = PuncturedPolyhedron::convex(cube(n));
        let cone = normal_cone(&s, &x).unwrap();
        let rays: Vec<RVec> = (0..n)
            .filter(|&i| x[i] != r(0))
            .map(|i| {
                let mut e = vec![r(0); n];
                e[i] = if x[i] > r(0) { r(1) } else { r(-1) };
                e
            })
            .collect();
        let want = Polyhedron::from_v(ncvx_core::GenRep { ambient: n, points: vec![vec![r(0); n]], rays, lines: vec![] }).unwrap();
        prop_assert!(cone.set_equal(&want).unwrap());
    }
}

#[test]
fn abs_plus_abs_at_zero() {
    let abs = NcFunction::new(
        1,
        vec![Piece::new(rvec("1"), r(0)), Piece::new(rvec("-1"), r(0))],
        PuncturedPolyhedron::convex(Polyhedron::full_space(1)),
    )
    .unwrap();
    let rep = subdiff_sum_rule(&[abs.clone(), abs], &rvec("0")).unwrap();
    assert!(rep.equal);
    assert!(rep.lhs.set_equal(&Polyhedron::boxed(&rvec("-2"), &rvec("2")).unwrap()).unwrap());
}

#[test]
fn subdifferential_outside_domain_is_an_error() {
    let dom = PuncturedPolyhedron::convex(Polyhedron::boxed(&rvec("0"), &rvec("1")).unwrap());
    let f = NcFunction::new(1, vec![Piece::new(rvec("1"), r(0))], dom).unwrap();
    assert_eq!(subdifferential(&f, &rvec("2")).unwrap_err().code(), "PointNotInDomain");
    // At the left endpoint the domain's normal cone joins the slope.
    let at0 = subdifferential(&f, &rvec("0")).unwrap();
    assert!(at0.contains(&rvec("-5")) && at0.contains(&rvec("1")) && !at0.contains(&rvec("2")));
}
