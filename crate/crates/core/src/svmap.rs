//! Set-valued mappings `F: ℝ^n ⇉ ℝ^p` stored through their graphs.

use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::ncset::{Fidelity, PuncturedPolyhedron, Qualification};
use crate::polyhedron::{HRep, Polyhedron};
use crate::scalar::Field;
use crate::Rat;

#[derive(Clone, Debug)]
pub struct SvMap<F: Field = Rat> {
    n: usize,
    p: usize,
    graph: PuncturedPolyhedron<F>,
}

/// A constructed mapping together with its qualification condition.
#[derive(Clone, Debug)]
pub struct Qualified<T, F> {
    pub value: T,
    pub qualification: Qualification<F>,
}

fn range_vec(a: usize, b: usize) -> Vec<usize> {
    (a..b).collect()
}

impl<F: Field> SvMap<F> {
    pub fn new(n: usize, p: usize, graph: PuncturedPolyhedron<F>) -> Result<Self> {
        check_dim(n + p, graph.ambient_dim())?;
        Ok(Self { n, p, graph })
    }

    /// `x ↦ Θ` for every `x ∈ ℝ^n`.
    pub fn constant(n: usize, theta: &PuncturedPolyhedron<F>) -> Self {
        Self {
            n,
            p: theta.ambient_dim(),
            graph: theta.extend_front(n),
        }
    }

    /// `x ↦ Θ` for `x = 0 ∈ ℝ^1`, empty elsewhere.
    pub fn constant_at_origin(theta: &PuncturedPolyhedron<F>) -> Self {
        let origin = PuncturedPolyhedron::convex(Polyhedron::point(vec![F::zero()]));
        Self {
            n: 1,
            p: theta.ambient_dim(),
            graph: origin.product(theta),
        }
    }

    /// `x ↦ {A x}`.
    pub fn linear(a: &Matrix<F>) -> Self {
        let (p, n) = (a.rows(), a.cols());
        let mut h = HRep::new(n + p);
        for i in 0..p {
            let mut row: Vec<F> = a.row(i).to_vec();
            row.extend((0..p).map(|k| if k == i { -F::one() } else { F::zero() }));
            h.equal(row, F::zero());
        }
        let graph = PuncturedPolyhedron::convex(Polyhedron::from_h(h).expect("block shape"));
        Self { n, p, graph }
    }

    pub fn source_dim(&self) -> usize {
        self.n
    }

    pub fn target_dim(&self) -> usize {
        self.p
    }

    pub fn graph(&self) -> &PuncturedPolyhedron<F> {
        &self.graph
    }

    pub fn is_nearly_convex(&self) -> bool {
        self.graph.is_nearly_convex()
    }

    fn source_projection(&self) -> Matrix<F> {
        selector(self.n + self.p, &range_vec(0, self.n))
    }

    fn target_projection(&self) -> Matrix<F> {
        selector(self.n + self.p, &range_vec(self.n, self.n + self.p))
    }

    pub fn domain(&self) -> Result<PuncturedPolyhedron<F>> {
        self.graph.linear_image(&self.source_projection())
    }

    pub fn range(&self) -> Result<PuncturedPolyhedron<F>> {
        self.graph.linear_image(&self.target_projection())
    }

    /// Carrier of the domain, which is the closure of `dom F` for nearly
    /// convex `F`.
    pub fn domain_carrier(&self) -> Result<Polyhedron<F>> {
        self.graph.carrier().project(&range_vec(0, self.n))
    }

    pub fn range_carrier(&self) -> Result<Polyhedron<F>> {
        self.graph.carrier().project(&range_vec(self.n, self.n + self.p))
    }

    /// `F(x)`; empty outside the domain.
    pub fn value(&self, x: &[F]) -> Result<PuncturedPolyhedron<F>> {
        if self.graph.fidelity() != Fidelity::Exact {
            return Err(Error::Fidelity);
        }
        check_dim(self.n, x.len())?;
        self.graph.slice_leading(x)
    }

    pub fn inverse(&self) -> Self {
        let mut source = range_vec(self.n, self.n + self.p);
        source.extend(0..self.n);
        Self {
            n: self.p,
            p: self.n,
            graph: self.graph.select_coords(&source).expect("permutation"),
        }
    }

    /// `(x, y) ∈ ri(gph F)` tested as `x ∈ ri(dom F)` and `y ∈ ri F(x)`.
    pub fn ri_graph_member(&self, x: &[F], y: &[F]) -> Result<bool> {
        check_dim(self.n, x.len())?;
        check_dim(self.p, y.len())?;
        if !self.is_nearly_convex() {
            return Err(Error::NotNearlyConvex("graph".into()));
        }
        if !self.domain_carrier()?.ri_contains(x) {
            return Ok(false);
        }
        Ok(self.graph.carrier().slice_leading(x)?.ri_contains(y))
    }

    /// `F1 + F2` built as `A(Ω1 ∩ Ω2)` with `Ω1 = gph F1 × ℝ^p`,
    /// `Ω2 = {(x, y1, y2) : (x, y2) ∈ gph F2}` and `A(x, y1, y2) = (x, y1 + y2)`.
    pub fn sum(&self, other: &SvMap<F>) -> Result<Qualified<SvMap<F>, F>> {
        check_dim(self.n, other.n)?;
        check_dim(self.p, other.p)?;
        let (n, p) = (self.n, self.p);
        let omega1 = self.graph.extend(p);
        let mut source = range_vec(0, n);
        source.extend(n + p..n + 2 * p);
        source.extend(n..n + p);
        let omega2 = other.graph.extend(p).select_coords(&source)?;
        let (meet, _) = omega1.intersect(&omega2)?;
        let mut a = Matrix::zeros(n + p, n + 2 * p);
        for i in 0..n {
            a[(i, i)] = F::one();
        }
        for i in 0..p {
            a[(n + i, n + i)] = F::one();
            a[(n + i, n + p + i)] = F::one();
        }
        let graph = meet.image_unchecked(&a)?;
        let qualification = Qualification::of(&[&self.domain_carrier()?, &other.domain_carrier()?])?;
        Ok(Qualified {
            value: SvMap { n, p, graph },
            qualification,
        })
    }

    /// `G ∘ F` for `self = G`, built as the projection onto `(x, z)` of
    /// `(gph F × ℝ^q) ∩ (ℝ^n × gph G)`.
    pub fn compose(&self, f: &SvMap<F>) -> Result<Qualified<SvMap<F>, F>> {
        check_dim(f.p, self.n)?;
        let (n, p, q) = (f.n, f.p, self.p);
        let omega1 = f.graph.extend(q);
        let omega2 = self.graph.extend_front(n);
        let (meet, _) = omega1.intersect(&omega2)?;
        let mut keep = range_vec(0, n);
        keep.extend(n + p..n + p + q);
        let graph = meet.image_unchecked(&selector(n + p + q, &keep))?;
        let qualification = Qualification::of(&[&f.range_carrier()?, &self.domain_carrier()?])?;
        Ok(Qualified {
            value: SvMap { n, p: q, graph },
            qualification,
        })
    }

    /// `x ↦ F_1(x) ∩ … ∩ F_m(x)`.
    pub fn intersection_mapping(maps: &[SvMap<F>]) -> Result<Qualified<SvMap<F>, F>> {
        let (first, rest) = maps.split_first().ok_or(Error::EmptyInput)?;
        let mut graph = first.graph.clone();
        for m in rest {
            check_dim(first.n, m.n)?;
            check_dim(first.p, m.p)?;
            graph = graph.intersect(&m.graph)?.0;
        }
        let carriers: Vec<&Polyhedron<F>> = maps.iter().map(|m| m.graph.carrier()).collect();
        Ok(Qualified {
            value: SvMap {
                n: first.n,
                p: first.p,
                graph,
            },
            qualification: Qualification::of(&carriers)?,
        })
    }

    /// `G(Ω)`, through the composition of `G` with the mapping whose graph
    /// is `{0} × Ω`.
    pub fn image(&self, omega: &PuncturedPolyhedron<F>) -> Result<Qualified<PuncturedPolyhedron<F>, F>> {
        check_dim(self.n, omega.ambient_dim())?;
        if !self.is_nearly_convex() {
            return Err(Error::NotNearlyConvex("mapping graph".into()));
        }
        if !omega.is_nearly_convex() {
            return Err(Error::NotNearlyConvex("argument set".into()));
        }
        let c = SvMap::constant_at_origin(omega);
        let composed = self.compose(&c)?;
        let graph = &composed.value.graph;
        let set = match graph.fidelity() {
            Fidelity::Exact => graph.slice_leading(&[F::zero()])?,
            Fidelity::NearEqual => {
                PuncturedPolyhedron::near(graph.carrier().slice_leading(&[F::zero()])?)
            }
        };
        Ok(Qualified {
            value: set,
            qualification: composed.qualification,
        })
    }

    /// `G⁻¹(Θ) = {x : G(x) ∩ Θ ≠ ∅}`.
    pub fn preimage(&self, theta: &PuncturedPolyhedron<F>) -> Result<Qualified<PuncturedPolyhedron<F>, F>> {
        check_dim(self.p, theta.ambient_dim())?;
        self.inverse().image(theta)
    }
}

/// `x ↦ (x_{keep[0]}, x_{keep[1]}, …)`.
pub(crate) fn selector<F: Field>(n: usize, keep: &[usize]) -> Matrix<F> {
    let mut a = Matrix::zeros(keep.len(), n);
    for (i, &k) in keep.iter().enumerate() {
        a[(i, k)] = F::one();
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rvec, Rat};

    fn boxed(lo: &str, hi: &str) -> Polyhedron<Rat> {
        Polyhedron::boxed(&rvec(lo), &rvec(hi)).unwrap()
    }

    fn punctured(carrier: Polyhedron<Rat>, pts: &[&str]) -> PuncturedPolyhedron<Rat> {
        PuncturedPolyhedron::exact(
            carrier,
            pts.iter().map(|p| Polyhedron::point(rvec(p))).collect(),
        )
        .unwrap()
    }

    fn paper_map() -> SvMap<Rat> {
        SvMap::new(1, 1, punctured(boxed("0 0", "1 2"), &["1 1"])).unwrap()
    }

    #[test]
    fn domain_and_range() {
        let f = paper_map();
        let d = f.domain().unwrap();
        assert_eq!(d.fidelity(), Fidelity::Exact);
        assert!(d.removed().is_empty());
        assert!(d.carrier().set_equal(&boxed("0", "1")).unwrap());
        assert!(f.range().unwrap().carrier().set_equal(&boxed("0", "2")).unwrap());
        let unit = PuncturedPolyhedron::convex(boxed("0", "1"));
        let c = SvMap::constant(1, &unit);
        assert!(c.domain().unwrap().carrier().set_equal(&Polyhedron::full_space(1)).unwrap());
    }

    #[test]
    fn values() {
        let f = paper_map();
        let at1 = f.value(&rvec("1")).unwrap();
        assert!(!at1.membership(&rvec("1")).unwrap());
        assert!(at1.verdict().is_no());
        let at_half = f.value(&rvec("1/2")).unwrap();
        assert!(at_half.removed().is_empty());
        assert!(at_half.carrier().set_equal(&boxed("0", "2")).unwrap());
        assert!(f.value(&rvec("5")).unwrap().carrier_is_empty());

        let theta = punctured(boxed("0 0", "1 1"), &["1/2 1"]);
        let c = SvMap::constant(1, &theta);
        let v = c.value(&rvec("-3")).unwrap();
        assert!(v.verdict().is_yes());
        assert!(v.nonconvexity_witness().unwrap().is_some());
    }

    #[test]
    fn inverses() {
        let f = paper_map();
        let back = f.inverse().inverse();
        assert!(back.graph().carrier().set_equal(f.graph().carrier()).unwrap());
        let twice = SvMap::linear(&Matrix::from_i64(&[&[2]]));
        let v = twice.inverse().value(&rvec("3")).unwrap();
        assert!(v.carrier().set_equal(&Polyhedron::point(rvec("3/2"))).unwrap());
        let inv = f.inverse().value(&rvec("1")).unwrap();
        assert!(inv.carrier().set_equal(&boxed("0", "1")).unwrap());
        assert!(!inv.membership(&rvec("1")).unwrap());
        assert!(inv.membership(&rvec("1/2")).unwrap());
    }

    #[test]
    fn graph_relative_interior() {
        let f = paper_map();
        assert!(f.ri_graph_member(&rvec("1/2"), &rvec("1")).unwrap());
        assert!(!f.ri_graph_member(&rvec("1"), &rvec("1")).unwrap());
        let sq = SvMap::new(1, 1, PuncturedPolyhedron::convex(boxed("0 0", "1 1"))).unwrap();
        assert!(sq.ri_graph_member(&rvec("1/2"), &rvec("1/2")).unwrap());
    }

    #[test]
    fn sums() {
        let zero_on_unit =
            SvMap::new(1, 1, PuncturedPolyhedron::convex(boxed("0 0", "1 0"))).unwrap();
        let s = zero_on_unit.sum(&zero_on_unit).unwrap();
        assert!(s.qualification.holds);
        assert!(s.value.graph().carrier().set_equal(&boxed("0 0", "1 0")).unwrap());

        let id = SvMap::linear(&Matrix::from_i64(&[&[1]]));
        let mut h = HRep::new(2);
        h.equal(rvec("1 1"), Rat::from_i64(1));
        h.leq(rvec("1 0"), Rat::from_i64(1));
        h.leq(rvec("-1 0"), Rat::from_i64(0));
        let flip = SvMap::new(1, 1, PuncturedPolyhedron::convex(Polyhedron::from_h(h).unwrap())).unwrap();
        let s = id.sum(&flip).unwrap();
        assert!(s.value.graph().carrier().set_equal(&boxed("0 1", "1 1")).unwrap());
    }

    #[test]
    fn compositions() {
        let id_unit = SvMap::new(
            1,
            1,
            PuncturedPolyhedron::convex(
                Polyhedron::from_points(2, vec![rvec("0 0"), rvec("1 1")]).unwrap(),
            ),
        )
        .unwrap();
        let c = id_unit.compose(&id_unit).unwrap();
        assert!(c.qualification.holds);
        assert!(c.value.graph().carrier().set_equal(id_unit.graph().carrier()).unwrap());

        // G(y) = [y, ∞).
        let mut h = HRep::new(2);
        h.leq(rvec("1 -1"), Rat::from_i64(0));
        let g = SvMap::new(1, 1, PuncturedPolyhedron::convex(Polyhedron::from_h(h).unwrap())).unwrap();
        let e = g.compose(&id_unit).unwrap().value;
        let mut want = HRep::new(2);
        want.leq(rvec("1 -1"), Rat::from_i64(0));
        want.leq(rvec("1 0"), Rat::from_i64(1));
        want.leq(rvec("-1 0"), Rat::from_i64(0));
        assert!(e.graph().carrier().set_equal(&Polyhedron::from_h(want).unwrap()).unwrap());

        let theta = PuncturedPolyhedron::convex(boxed("0", "1"));
        let c = g.compose(&SvMap::constant_at_origin(&theta)).unwrap().value;
        let want = Polyhedron::point(rvec("0")).product(&g.image(&theta).unwrap().value.carrier().clone());
        assert!(c.graph().carrier().set_equal(&want).unwrap());
    }

    #[test]
    fn intersections_of_mappings() {
        let f = paper_map();
        let one = SvMap::intersection_mapping(std::slice::from_ref(&f)).unwrap();
        assert!(one.value.graph().carrier().set_equal(f.graph().carrier()).unwrap());

        let epi = |c: i64| {
            let mut h = HRep::new(2);
            h.leq(vec![Rat::from_i64(c), Rat::from_i64(-1)], Rat::from_i64(0));
            SvMap::new(1, 1, PuncturedPolyhedron::convex(Polyhedron::from_h(h).unwrap())).unwrap()
        };
        let abs = SvMap::intersection_mapping(&[epi(1), epi(-1)]).unwrap();
        assert!(abs.qualification.holds);
        let mut want = HRep::new(2);
        want.leq(rvec("1 -1"), Rat::from_i64(0));
        want.leq(rvec("-1 -1"), Rat::from_i64(0));
        assert!(abs.value.graph().carrier().set_equal(&Polyhedron::from_h(want).unwrap()).unwrap());

        let a = SvMap::new(1, 1, PuncturedPolyhedron::convex(boxed("0 0", "1 1"))).unwrap();
        let b = SvMap::new(1, 1, PuncturedPolyhedron::convex(boxed("1 1", "2 2"))).unwrap();
        assert!(!SvMap::intersection_mapping(&[a, b]).unwrap().qualification.holds);
    }

    #[test]
    fn images_and_preimages() {
        let id = SvMap::linear(&Matrix::<Rat>::identity(2));
        let sq = PuncturedPolyhedron::convex(boxed("0 0", "1 1"));
        let img = id.image(&sq).unwrap();
        assert!(img.qualification.holds);
        assert!(img.value.carrier().set_equal(&boxed("0 0", "1 1")).unwrap());

        let f = paper_map();
        let theta = PuncturedPolyhedron::convex(Polyhedron::point(rvec("1")));
        let pre = f.preimage(&theta).unwrap();
        assert!(pre.value.carrier().set_equal(&boxed("0", "1")).unwrap());
        assert_eq!(pre.value.fidelity(), Fidelity::Exact);
        assert!(!pre.value.membership(&rvec("1")).unwrap());

        let proj = SvMap::linear(&Matrix::from_i64(&[&[1, 0]]));
        let omega = punctured(boxed("0 0", "1 2"), &["1 1"]);
        let a = proj.image(&omega).unwrap().value;
        let b = omega.linear_image(&Matrix::from_i64(&[&[1, 0]])).unwrap();
        assert!(a.carrier().set_equal(b.carrier()).unwrap());
        assert!(a.near_equal(&b).unwrap());
    }
}
