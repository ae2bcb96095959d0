use super::*;
use num_traits::Signed;
use crate::{rat, rvec, Rat};

fn square() -> Polyhedron<Rat> {
    Polyhedron::boxed(&rvec("0 0"), &rvec("1 1")).unwrap()
}

fn h(n: usize, ineq: &[(&str, &str)], eq: &[(&str, &str)]) -> Polyhedron<Rat> {
    let mut out = HRep::new(n);
    for (a, b) in ineq {
        out.leq(rvec(a), rat(b));
    }
    for (a, b) in eq {
        out.equal(rvec(a), rat(b));
    }
    Polyhedron::from_h(out).unwrap()
}

fn pts(n: usize, ps: &[&str]) -> Polyhedron<Rat> {
    Polyhedron::from_points(n, ps.iter().map(|p| rvec(p)).collect()).unwrap()
}

#[test]
fn square_vertices() {
    let v = square().canonical().genrep().clone();
    let mut got = v.points.clone();
    got.sort();
    let mut want: Vec<_> = ["0 0", "0 1", "1 0", "1 1"].iter().map(|p| rvec(p)).collect();
    want.sort();
    assert_eq!(got, want);
    assert!(v.rays.is_empty() && v.lines.is_empty());
}

#[test]
fn half_line_to_h() {
    let p = Polyhedron::from_v(GenRep {
        ambient: 1,
        points: vec![rvec("0")],
        rays: vec![rvec("1")],
        lines: vec![],
    })
    .unwrap();
    let hr = p.hrep();
    assert_eq!(hr.ineq.rows(), 1);
    assert_eq!(hr.ineq.row(0), &rvec("-1")[..]);
    assert_eq!(hr.ineq_rhs[0], rat("0"));
    assert!(p.set_equal(&h(1, &[("-1", "0")], &[])).unwrap());
}

#[test]
fn cone_round_trip() {
    let c = Polyhedron::cone(2, vec![rvec("1 0"), rvec("1 1")]).unwrap();
    let expected = h(2, &[("0 -1", "0"), ("-1 1", "0")], &[]);
    assert!(c.set_equal(&expected).unwrap());
    assert!(expected.set_equal(&c.dd_convert().dd_convert()).unwrap());
    assert_eq!(c.hrep().ineq.rows(), 2);
}

#[test]
fn implicit_equalities_examples() {
    let seg = h(
        2,
        &[("1 1", "1"), ("-1 -1", "-1"), ("-1 0", "0"), ("0 -1", "0")],
        &[],
    );
    assert_eq!(seg.implicit_equalities().unwrap(), &[0, 1]);
    assert!(square().implicit_equalities().unwrap().is_empty());
    let single = h(1, &[("1", "0"), ("-1", "0")], &[]);
    assert_eq!(single.implicit_equalities().unwrap(), &[0, 1]);
    let empty = h(1, &[("1", "0"), ("-1", "-1")], &[]);
    assert_eq!(empty.implicit_equalities(), Err(Error::EmptySet));
}

#[test]
fn affine_hulls() {
    let (e, d) = pts(2, &["0 0", "1 1"]).affine_hull().unwrap();
    assert_eq!(e.rows(), 1);
    assert_eq!(e.row(0), &rvec("1 -1")[..]);
    assert_eq!(d, rvec("0"));
    let (e, _) = square().affine_hull().unwrap();
    assert_eq!(e.rows(), 0);
    let (e, d) = pts(2, &["2 3"]).affine_hull().unwrap();
    assert_eq!(e.rows(), 2);
    let sol = linalg::solve_linear(&e, &d).unwrap();
    assert_eq!(sol.solution.unwrap(), rvec("2 3"));
    assert!(Polyhedron::<Rat>::empty(2).affine_hull().is_err());
}

#[test]
fn dims_and_membership() {
    assert_eq!(square().dim(), 2);
    assert!(square().contains(&rvec("1/2 1")));
    assert!(!square().contains(&rvec("3/2 1")));
    assert_eq!(pts(3, &["0 0 0", "1 2 3"]).dim(), 1);
    assert_eq!(Polyhedron::<Rat>::empty(3).dim(), -1);
    assert_eq!(Polyhedron::<Rat>::full_space(2).dim(), 2);
}

#[test]
fn relative_interior() {
    assert!(square().ri_contains(&rvec("1/2 1/2")));
    assert!(!square().ri_contains(&rvec("0 1/2")));
    assert!(pts(2, &["0 0", "1 1"]).ri_contains(&rvec("1/2 1/2")));
    assert!(!pts(2, &["0 0", "1 1"]).ri_contains(&rvec("0 0")));
    assert!(!Polyhedron::<Rat>::empty(1).ri_contains(&rvec("0")));

    let unit = Polyhedron::boxed(&rvec("0"), &rvec("1")).unwrap();
    let x = unit.ri_point().unwrap();
    assert!(x[0] > rat("0") && x[0] < rat("1"));
    assert_eq!(pts(1, &["2"]).ri_point().unwrap(), rvec("2"));
    let simplex = h(2, &[("-1 0", "0"), ("0 -1", "0")], &[("1 1", "1")]);
    let x = simplex.ri_point().unwrap();
    assert!(simplex.ri_contains(&x));
    assert!(x[0].is_positive() && x[1].is_positive());
    assert_eq!(Polyhedron::<Rat>::empty(1).ri_point(), Err(Error::EmptySet));
}

#[test]
fn images_and_projections() {
    let rect = Polyhedron::boxed(&rvec("0 0"), &rvec("1 2")).unwrap();
    let p = rect.project(&[0]).unwrap();
    assert!(p.set_equal(&Polyhedron::boxed(&rvec("0"), &rvec("1")).unwrap()).unwrap());
    let sum = square()
        .linear_image(&Matrix::from_i64(&[&[1, 1]]))
        .unwrap();
    assert!(sum.set_equal(&Polyhedron::boxed(&rvec("0"), &rvec("2")).unwrap()).unwrap());
    let rec = h(2, &[("-1 0", "0"), ("1 -1", "0")], &[]).recession_cone();
    let want = Polyhedron::cone(2, vec![rvec("0 1"), rvec("1 1")]).unwrap();
    assert!(rec.set_equal(&want).unwrap());
    assert!(matches!(
        square().linear_image(&Matrix::from_i64(&[&[1, 1, 1]])),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn product_projects_back() {
    let a = pts(2, &["0 0", "1 0", "0 1"]);
    let b = Polyhedron::boxed(&rvec("-1"), &rvec("3")).unwrap();
    let prod = a.product(&b);
    assert_eq!(prod.dim(), 3);
    assert!(prod.project(&[0, 1]).unwrap().set_equal(&a).unwrap());
    assert!(prod.project(&[2]).unwrap().set_equal(&b).unwrap());
}

#[test]
fn set_equality() {
    assert!(square().set_equal(&pts(2, &["0 0", "1 0", "0 1", "1 1"])).unwrap());
    let u1 = Polyhedron::boxed(&rvec("0"), &rvec("1")).unwrap();
    let u2 = Polyhedron::boxed(&rvec("0"), &rvec("2")).unwrap();
    assert!(!u1.set_equal(&u2).unwrap());
    assert!(u1.subset_of(&u2).unwrap());
    assert!(Polyhedron::<Rat>::empty(1).subset_of(&u1).unwrap());
}

#[test]
fn minkowski_and_slices() {
    let s = square().minkowski_sum(&square()).unwrap();
    assert!(s.set_equal(&Polyhedron::boxed(&rvec("0 0"), &rvec("2 2")).unwrap()).unwrap());
    let rect = Polyhedron::boxed(&rvec("0 0"), &rvec("1 2")).unwrap();
    let fiber = rect.slice_leading(&rvec("1/2")).unwrap();
    assert!(fiber.set_equal(&Polyhedron::boxed(&rvec("0"), &rvec("2")).unwrap()).unwrap());
    assert!(rect.slice_leading(&rvec("3")).unwrap().is_empty());
}

#[test]
fn permuted_coordinates() {
    let rect = Polyhedron::boxed(&rvec("0 0"), &rvec("1 2")).unwrap();
    let swapped = rect.select_coords(&[1, 0]).unwrap();
    assert!(swapped.contains(&rvec("2 1")));
    assert!(!swapped.contains(&rvec("1 2")));
    let v = rect.dd_convert().select_coords(&[1, 0]).unwrap();
    assert!(v.set_equal(&swapped).unwrap());
}

#[test]
fn joint_relative_interiors() {
    let left = Polyhedron::boxed(&rvec("-1 -1"), &rvec("0 1")).unwrap();
    let right = Polyhedron::boxed(&rvec("0 -1"), &rvec("1 1")).unwrap();
    match ri_meet(&[&left, &right]).unwrap() {
        RiMeet::Disjoint { separator } => assert_eq!(separator.unwrap(), rvec("1 0")),
        other => panic!("{other:?}"),
    }
    match ri_meet(&[&square(), &square()]).unwrap() {
        RiMeet::Common(x) => assert!(square().ri_contains(&x)),
        other => panic!("{other:?}"),
    }
    // Disjoint affine hulls give a Farkas-based separator.
    let a = pts(1, &["0"]);
    let b = pts(1, &["1"]);
    match ri_meet(&[&a, &b]).unwrap() {
        RiMeet::Disjoint { separator } => assert_eq!(separator.unwrap(), rvec("1")),
        other => panic!("{other:?}"),
    }
}
