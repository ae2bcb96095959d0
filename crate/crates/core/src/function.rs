//! Nearly convex functions: a max-affine base function on a punctured
//! polyhedral domain, `+∞` elsewhere.

use std::sync::OnceLock;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, dot, row_space_basis, zeros, Matrix};
use crate::lp::{lp_solve, LpProblem, LpResult};
use crate::ncset::{PuncturedPolyhedron, Qualification};
use crate::polyhedron::{GenRep, HRep, Polyhedron};
use crate::scalar::Field;
use crate::svmap::{Qualified, SvMap};
use crate::Rat;

/// The affine function `x ↦ ⟨c, x⟩ + beta`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Piece<F> {
    pub c: Vec<F>,
    pub beta: F,
}

impl<F: Field> Piece<F> {
    pub fn new(c: Vec<F>, beta: F) -> Self {
        Self { c, beta }
    }

    pub fn eval(&self, x: &[F]) -> F {
        dot(&self.c, x) + self.beta.clone()
    }
}

#[derive(Clone, Debug)]
pub struct NcFunction<F: Field = Rat> {
    n: usize,
    pieces: Vec<Piece<F>>,
    dom: PuncturedPolyhedron<F>,
    epi: OnceLock<PuncturedPolyhedron<F>>,
}

/// Result of [`NcFunction::max_fn`].
#[derive(Clone, Debug)]
pub struct MaxReport<F: Field> {
    pub result: Qualified<NcFunction<F>, F>,
    /// The epigraph computed as an intersection of epigraphical mappings
    /// agrees with the one built from the merged pieces.
    pub paths_agree: bool,
}

impl<F: Field> NcFunction<F> {
    /// Pieces are deduplicated, pruned when dominated on the domain
    /// carrier, and sorted.
    pub fn new(n: usize, pieces: Vec<Piece<F>>, dom: PuncturedPolyhedron<F>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_dim(n, dom.ambient_dim())?;
        for p in &pieces {
            check_dim(n, p.c.len())?;
        }
        if dom.carrier_is_empty() {
            return Err(Error::EmptyInput);
        }
        let pieces = prune(pieces, dom.carrier());
        Ok(Self {
            n,
            pieces,
            dom,
            epi: OnceLock::new(),
        })
    }

    /// `δ(·; Ω)`.
    pub fn indicator(omega: &PuncturedPolyhedron<F>) -> Result<Self> {
        let n = omega.ambient_dim();
        Self::new(n, vec![Piece::new(zeros(n), F::zero())], omega.clone())
    }

    /// `x ↦ ⟨c, x⟩ + beta` on `ℝ^n`.
    pub fn affine(c: Vec<F>, beta: F) -> Self {
        let n = c.len();
        Self::new(
            n,
            vec![Piece::new(c, beta)],
            PuncturedPolyhedron::convex(Polyhedron::full_space(n)),
        )
        .expect("nonempty domain")
    }

    /// Reads a function back from an epigraph in `ℝ^{n+1}`.
    ///
    /// The carrier must recede along `+λ` and be bounded below in `λ`, and
    /// every removed piece must be a vertical cylinder over its shadow.
    pub fn from_epigraph(epi: &PuncturedPolyhedron<F>) -> Result<Self> {
        let m = epi.ambient_dim();
        if m == 0 {
            return Err(Error::MalformedEpigraph("no epigraph coordinate".into()));
        }
        let n = m - 1;
        let h = epi.carrier().hrep();
        let mut dom_h = HRep::new(n);
        let mut pieces = Vec::new();
        for (a, b) in h.ineq.row_iter().zip(&h.ineq_rhs) {
            let t = &a[n];
            if t.is_positive() {
                return Err(Error::MalformedEpigraph(
                    "carrier does not recede along the epigraph direction".into(),
                ));
            }
            if t.is_zero() {
                dom_h.leq(a[..n].to_vec(), b.clone());
            } else {
                let s = -t.clone();
                pieces.push(Piece::new(
                    a[..n].iter().map(|v| v.clone() / s.clone()).collect(),
                    -b.clone() / s.clone(),
                ));
            }
        }
        for (a, b) in h.eq.row_iter().zip(&h.eq_rhs) {
            if !a[n].is_zero() {
                return Err(Error::MalformedEpigraph(
                    "equality involves the epigraph coordinate".into(),
                ));
            }
            dom_h.equal(a[..n].to_vec(), b.clone());
        }
        if pieces.is_empty() {
            return Err(Error::MalformedEpigraph("unbounded below".into()));
        }
        let carrier = Polyhedron::from_h(dom_h)?;
        let shadow: Vec<usize> = (0..n).collect();
        let mut removed = Vec::new();
        for d in epi.removed() {
            let base = d.project(&shadow)?;
            let cylinder = base.product(&Polyhedron::full_space(1)).intersect(epi.carrier())?;
            if !cylinder.subset_of(d)? {
                return Err(Error::MalformedEpigraph("removed piece is not vertical".into()));
            }
            removed.push(base);
        }
        let dom = PuncturedPolyhedron::new(carrier, removed, epi.fidelity())?;
        Self::new(n, pieces, dom)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[Piece<F>] {
        &self.pieces
    }

    pub fn dom(&self) -> &PuncturedPolyhedron<F> {
        &self.dom
    }

    pub fn base(&self, x: &[F]) -> F {
        self.pieces
            .iter()
            .map(|p| p.eval(x))
            .max()
            .expect("at least one piece")
    }

    /// `f(x)`, with `None` standing for `+∞`.
    pub fn evaluate(&self, x: &[F]) -> Result<Option<F>> {
        Ok(self.dom.membership(x)?.then(|| self.base(x)))
    }

    /// Indices of pieces attaining the maximum at `x`.
    pub fn active_pieces(&self, x: &[F]) -> Vec<usize> {
        let v = self.base(x);
        (0..self.pieces.len())
            .filter(|&i| self.pieces[i].eval(x) == v)
            .collect()
    }

    /// Epigraph carrier: `x` in the domain carrier, `λ ≥ ⟨c_i, x⟩ + β_i`.
    pub fn epigraph_carrier(&self) -> Polyhedron<F> {
        let n = self.n;
        let mut h = HRep::new(n + 1);
        let dh = self.dom.carrier().hrep();
        for (a, b) in dh.ineq.row_iter().zip(&dh.ineq_rhs) {
            let mut row = a.to_vec();
            row.push(F::zero());
            h.leq(row, b.clone());
        }
        for (a, b) in dh.eq.row_iter().zip(&dh.eq_rhs) {
            let mut row = a.to_vec();
            row.push(F::zero());
            h.equal(row, b.clone());
        }
        for p in &self.pieces {
            let mut row = p.c.clone();
            row.push(-F::one());
            h.leq(row, -p.beta.clone());
        }
        Polyhedron::from_h(h).expect("consistent shape")
    }

    /// `epi f` with the domain punctures lifted to vertical cylinders.
    pub fn epigraph_set(&self) -> &PuncturedPolyhedron<F> {
        self.epi.get_or_init(|| {
            let line = Polyhedron::full_space(1);
            let removed = self.dom.removed().iter().map(|d| d.product(&line)).collect();
            PuncturedPolyhedron::new(self.epigraph_carrier(), removed, self.dom.fidelity())
                .expect("consistent shape")
        })
    }

    /// `E_f(x) = [f(x), ∞)`.
    pub fn epigraph_mapping(&self) -> SvMap<F> {
        SvMap::new(self.n, 1, self.epigraph_set().clone()).expect("consistent shape")
    }

    pub fn is_nearly_convex(&self) -> bool {
        self.epigraph_set().is_nearly_convex()
    }

    fn require_nearly_convex(&self) -> Result<()> {
        if self.is_nearly_convex() {
            Ok(())
        } else {
            Err(Error::NotNearlyConvex("epigraph".into()))
        }
    }

    /// `aff(epi f)`, checked against `aff(dom f) × ℝ`.
    pub fn aff_epi(&self) -> Result<(Matrix<F>, Vec<F>)> {
        let (e, d) = self.epigraph_carrier().affine_hull()?;
        let (de, dd) = self.dom.carrier().affine_hull()?;
        let mut lifted = Matrix::empty(self.n + 1);
        for row in de.row_iter() {
            let mut r = row.to_vec();
            r.push(F::zero());
            lifted.push_row(r);
        }
        if !same_affine(&e, &d, &lifted, &dd) {
            return Err(Error::Invariant(
                "affine hull of the epigraph differs from aff(dom) × ℝ".into(),
            ));
        }
        Ok((e, d))
    }

    /// `(x, λ) ∈ ri(epi f)` tested as `x ∈ ri(dom f)` and `λ > f(x)`.
    pub fn ri_epi_member(&self, x: &[F], lambda: &F) -> Result<bool> {
        check_dim(self.n, x.len())?;
        self.require_nearly_convex()?;
        Ok(self.dom.carrier().ri_contains(x) && *lambda > self.base(x))
    }

    /// The near-equality representative of `co f`.
    pub fn co_f(&self) -> Result<Self> {
        self.require_nearly_convex()?;
        let out = Self::new(
            self.n,
            self.pieces.clone(),
            PuncturedPolyhedron::near(self.dom.carrier().clone()),
        )?;
        if !self.epigraph_set().near_equal(out.epigraph_set())? {
            return Err(Error::Invariant("co f is not nearly equal to f".into()));
        }
        Ok(out)
    }

    /// `φ(x, α) = f(x) + α`.
    pub fn lift_alpha(&self) -> Result<Self> {
        self.require_nearly_convex()?;
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let mut c = p.c.clone();
                c.push(F::one());
                Piece::new(c, p.beta.clone())
            })
            .collect();
        Self::new(self.n + 1, pieces, self.dom.extend(1))
    }

    pub fn add(&self, other: &NcFunction<F>) -> Result<Qualified<NcFunction<F>, F>> {
        check_dim(self.n, other.n)?;
        let mut pieces = Vec::with_capacity(self.pieces.len() * other.pieces.len());
        for p in &self.pieces {
            for q in &other.pieces {
                pieces.push(Piece::new(
                    linalg::add(&p.c, &q.c),
                    p.beta.clone() + q.beta.clone(),
                ));
            }
        }
        let (dom, report) = self.dom.intersect(&other.dom)?;
        if dom.carrier_is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Qualified {
            value: Self::new(self.n, pieces, dom)?,
            qualification: report.qualification,
        })
    }

    /// `x ↦ f(A x + b)`.
    pub fn precompose_affine(&self, a: &Matrix<F>, b: &[F]) -> Result<Qualified<NcFunction<F>, F>> {
        check_dim(self.n, a.rows())?;
        check_dim(self.n, b.len())?;
        let at = a.transpose();
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece::new(at.mul_vec(&p.c), dot(&p.c, b) + p.beta.clone()))
            .collect();
        let range = Polyhedron::from_v(GenRep {
            ambient: self.n,
            points: vec![b.to_vec()],
            rays: Vec::new(),
            lines: row_space_basis(&at.to_rows(), self.n),
        })?;
        let qualification = Qualification::of(&[&range, self.dom.carrier()])?;
        let dom = self.dom.linear_preimage(a, b)?;
        if dom.carrier_is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Qualified {
            value: Self::new(a.cols(), pieces, dom)?,
            qualification,
        })
    }

    /// `x ↦ max_i f_i(x)`.
    pub fn max_fn(fs: &[NcFunction<F>]) -> Result<MaxReport<F>> {
        let (first, rest) = fs.split_first().ok_or(Error::EmptyInput)?;
        let mut pieces = first.pieces.clone();
        let mut dom = first.dom.clone();
        for f in rest {
            check_dim(first.n, f.n)?;
            pieces.extend(f.pieces.iter().cloned());
            dom = dom.intersect(&f.dom)?.0;
        }
        if dom.carrier_is_empty() {
            return Err(Error::EmptySet);
        }
        let carriers: Vec<&Polyhedron<F>> = fs.iter().map(|f| f.dom.carrier()).collect();
        let qualification = Qualification::of(&carriers)?;
        let value = Self::new(first.n, pieces, dom)?;
        let maps: Vec<SvMap<F>> = fs.iter().map(|f| f.epigraph_mapping()).collect();
        let other = SvMap::intersection_mapping(&maps)?.value;
        let paths_agree = other
            .graph()
            .carrier()
            .set_equal(value.epigraph_set().carrier())?;
        Ok(MaxReport {
            result: Qualified {
                value,
                qualification,
            },
            paths_agree,
        })
    }
}

/// Two consistent affine systems with the same solution set.
fn same_affine<F: Field>(e1: &Matrix<F>, d1: &[F], e2: &Matrix<F>, d2: &[F]) -> bool {
    let aug = |e: &Matrix<F>, d: &[F]| -> Vec<Vec<F>> {
        e.row_iter()
            .zip(d)
            .map(|(r, v)| {
                let mut row = r.to_vec();
                row.push(v.clone());
                row
            })
            .collect()
    };
    let (a1, a2) = (aug(e1, d1), aug(e2, d2));
    let cols = e1.cols() + 1;
    let r1 = row_space_basis(&a1, cols).len();
    let r2 = row_space_basis(&a2, cols).len();
    let mut both = a1.clone();
    both.extend(a2);
    r1 == r2 && row_space_basis(&both, cols).len() == r1
}

/// Sorted, deduplicated pieces with those dominated on `carrier` removed.
fn prune<F: Field>(mut pieces: Vec<Piece<F>>, carrier: &Polyhedron<F>) -> Vec<Piece<F>> {
    pieces.sort();
    pieces.dedup();
    let mut i = 0;
    while i < pieces.len() && pieces.len() > 1 {
        // maximize ⟨c_i, x⟩ + β_i - s subject to s ≥ the other pieces.
        let mut lp: LpProblem<F> = carrier.hrep().lp(1);
        for (j, q) in pieces.iter().enumerate() {
            if j != i {
                let mut row = q.c.clone();
                row.push(-F::one());
                lp.leq(row, -q.beta.clone());
            }
        }
        let mut obj = pieces[i].c.clone();
        obj.push(-F::one());
        let dominated = match lp_solve(&lp.maximize(obj)).expect("well-formed") {
            LpResult::Optimal { value, .. } => value + pieces[i].beta.clone() <= F::zero(),
            _ => false,
        };
        if dominated {
            pieces.remove(i);
        } else {
            i += 1;
        }
    }
    pieces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncset::Fidelity;
    use crate::{rat, rvec, Rat};

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

    fn abs() -> NcFunction<Rat> {
        NcFunction::new(
            1,
            vec![Piece::new(rvec("1"), rat("0")), Piece::new(rvec("-1"), rat("0"))],
            PuncturedPolyhedron::convex(Polyhedron::full_space(1)),
        )
        .unwrap()
    }

    #[test]
    fn evaluation() {
        let f = NcFunction::indicator(&punctured(boxed("0 0", "1 1"), &["1 0"])).unwrap();
        assert_eq!(f.evaluate(&rvec("1 0")).unwrap(), None);
        assert_eq!(f.evaluate(&rvec("1/2 0")).unwrap(), Some(rat("0")));
        assert_eq!(abs().evaluate(&rvec("3")).unwrap(), Some(rat("3")));
        let g = NcFunction::new(
            1,
            vec![Piece::new(rvec("1"), rat("1"))],
            PuncturedPolyhedron::convex(boxed("0", "1")),
        )
        .unwrap();
        assert_eq!(g.evaluate(&rvec("1/2")).unwrap(), Some(rat("3/2")));
        assert_eq!(g.evaluate(&rvec("2")).unwrap(), None);
    }

    #[test]
    fn epigraphs() {
        let f = NcFunction::indicator(&PuncturedPolyhedron::convex(boxed("0", "1"))).unwrap();
        let want = Polyhedron::from_v(GenRep {
            ambient: 2,
            points: vec![rvec("0 0"), rvec("1 0")],
            rays: vec![rvec("0 1")],
            lines: vec![],
        })
        .unwrap();
        assert!(f.epigraph_set().carrier().set_equal(&want).unwrap());
        let mut h = HRep::new(2);
        h.leq(rvec("1 -1"), rat("0"));
        h.leq(rvec("-1 -1"), rat("0"));
        assert!(abs().epigraph_set().carrier().set_equal(&Polyhedron::from_h(h).unwrap()).unwrap());
        let g = NcFunction::indicator(&punctured(boxed("0 0", "1 1"), &["1/2 1"])).unwrap();
        let e = g.epigraph_set();
        assert_eq!(e.removed().len(), 1);
        let ray = Polyhedron::from_v(GenRep {
            ambient: 3,
            points: vec![rvec("1/2 1 0")],
            rays: vec![rvec("0 0 1")],
            lines: vec![],
        })
        .unwrap();
        assert!(e.removed()[0].set_equal(&ray).unwrap());
        assert!(e.verdict().is_yes());
    }

    #[test]
    fn epigraph_round_trip() {
        let g = NcFunction::indicator(&punctured(boxed("0 0", "1 1"), &["1/2 1"])).unwrap();
        let back = NcFunction::from_epigraph(g.epigraph_set()).unwrap();
        assert_eq!(back.pieces(), g.pieces());
        assert!(!back.dom().membership(&rvec("1/2 1")).unwrap());
        let bad = PuncturedPolyhedron::exact(
            g.epigraph_set().carrier().clone(),
            vec![Polyhedron::point(rvec("1/2 1 0"))],
        )
        .unwrap();
        assert!(matches!(
            NcFunction::from_epigraph(&bad),
            Err(Error::MalformedEpigraph(_))
        ));
        let down = PuncturedPolyhedron::convex(Polyhedron::<Rat>::full_space(2));
        assert!(matches!(
            NcFunction::from_epigraph(&down),
            Err(Error::MalformedEpigraph(_))
        ));
    }

    #[test]
    fn epigraph_affine_hulls() {
        let mut h = HRep::new(2);
        h.equal(rvec("1 1"), rat("1"));
        h.leq(rvec("-1 0"), rat("0"));
        h.leq(rvec("0 -1"), rat("0"));
        let seg = PuncturedPolyhedron::convex(Polyhedron::from_h(h).unwrap());
        let (e, d) = NcFunction::indicator(&seg).unwrap().aff_epi().unwrap();
        assert_eq!(e.rows(), 1);
        assert_eq!(e.row(0), &rvec("1 1 0")[..]);
        assert_eq!(d, rvec("1"));
        let (e, _) = abs().aff_epi().unwrap();
        assert_eq!(e.rows(), 0);
        let single = PuncturedPolyhedron::convex(Polyhedron::point(rvec("2")));
        let (e, d) = NcFunction::indicator(&single).unwrap().aff_epi().unwrap();
        assert_eq!(e.row(0), &rvec("1 0")[..]);
        assert_eq!(d, rvec("2"));
    }

    #[test]
    fn epigraph_relative_interior() {
        let f = NcFunction::indicator(&PuncturedPolyhedron::convex(boxed("0", "1"))).unwrap();
        assert!(f.ri_epi_member(&rvec("1/2"), &rat("1")).unwrap());
        assert!(!f.ri_epi_member(&rvec("0"), &rat("1")).unwrap());
        assert!(!f.ri_epi_member(&rvec("1/2"), &rat("0")).unwrap());
        assert!(abs().ri_epi_member(&rvec("0"), &rat("1/10")).unwrap());
        let g = NcFunction::indicator(&punctured(boxed("0 0", "1 1"), &["1/2 1"])).unwrap();
        assert!(g.ri_epi_member(&rvec("1/2 1/2"), &rat("1")).unwrap());
    }

    #[test]
    fn convex_hull_function() {
        let g = NcFunction::indicator(&punctured(boxed("0 0", "1 1"), &["1/2 1"])).unwrap();
        let co = g.co_f().unwrap();
        assert!(co.dom().removed().is_empty());
        assert_eq!(co.dom().fidelity(), Fidelity::NearEqual);
        assert!(co.dom().carrier().set_equal(&boxed("0 0", "1 1")).unwrap());
        let a = abs().co_f().unwrap();
        assert_eq!(a.pieces(), abs().pieces());
    }

    #[test]
    fn lifting() {
        let f = NcFunction::indicator(&PuncturedPolyhedron::convex(boxed("0", "1"))).unwrap();
        let phi = f.lift_alpha().unwrap();
        assert_eq!(phi.pieces(), &[Piece::new(rvec("0 1"), rat("0"))]);
        assert!(phi.dom().carrier().contains(&rvec("1/2 -100")));
        assert!(!phi.dom().carrier().contains(&rvec("2 0")));
        assert_eq!(phi.evaluate(&rvec("1/2 7")).unwrap(), Some(rat("7")));
        let a = abs().lift_alpha().unwrap();
        assert_eq!(a.pieces().len(), 2);
        assert_eq!(a.evaluate(&rvec("-2 1")).unwrap(), Some(rat("3")));
        let g = NcFunction::indicator(&punctured(boxed("0 0", "1 1"), &["1/2 1"])).unwrap();
        let lifted = g.lift_alpha().unwrap();
        assert!(lifted.is_nearly_convex());
        assert_eq!(lifted.evaluate(&rvec("1/2 1 3")).unwrap(), None);
    }

    #[test]
    fn sums() {
        let f1 = NcFunction::indicator(&punctured(boxed("-1 -1", "0 1"), &["0 0"])).unwrap();
        let f2 = NcFunction::indicator(&punctured(boxed("0 -1", "1 1"), &["0 0"])).unwrap();
        let s = f1.add(&f2).unwrap();
        assert!(!s.qualification.holds);
        assert!(s.value.dom().carrier().set_equal(&boxed("0 -1", "0 1")).unwrap());
        assert!(!s.value.is_nearly_convex());

        let unit = PuncturedPolyhedron::convex(boxed("0", "1"));
        let x = NcFunction::new(1, vec![Piece::new(rvec("1"), rat("0"))], unit.clone()).unwrap();
        let mx = NcFunction::new(1, vec![Piece::new(rvec("-1"), rat("0"))], unit).unwrap();
        let z = x.add(&mx).unwrap().value;
        assert_eq!(z.pieces(), &[Piece::new(rvec("0"), rat("0"))]);

        let two = abs().add(&abs()).unwrap().value;
        assert_eq!(two.pieces().len(), 2);
        for s in ["-3", "0", "1/2", "5"] {
            let v = rvec(s);
            assert_eq!(
                two.evaluate(&v).unwrap().unwrap(),
                abs().base(&v) * rat("2")
            );
        }
    }

    #[test]
    fn precomposition() {
        let f = abs();
        let id = f.precompose_affine(&Matrix::identity(1), &rvec("0")).unwrap();
        assert!(id.qualification.holds);
        assert_eq!(id.value.pieces(), f.pieces());
        let g = f.precompose_affine(&Matrix::from_i64(&[&[2]]), &rvec("1")).unwrap().value;
        for s in ["-1", "-1/2", "0", "3"] {
            let x = rvec(s);
            let y = x[0].clone() * rat("2") + rat("1");
            assert_eq!(g.evaluate(&x).unwrap().unwrap(), num_traits::Signed::abs(&y));
        }
        // The line y2 = 1 touches the punctured square only on its boundary.
        let h = NcFunction::indicator(&punctured(boxed("0 0", "1 1"), &["1/2 1"])).unwrap();
        let q = h
            .precompose_affine(&Matrix::from_i64(&[&[1], &[0]]), &rvec("0 1"))
            .unwrap();
        assert!(!q.qualification.holds);
        assert_eq!(q.value.evaluate(&rvec("1/2")).unwrap(), None);
        assert_eq!(q.value.evaluate(&rvec("1/4")).unwrap(), Some(rat("0")));
    }

    #[test]
    fn maxima() {
        let full = PuncturedPolyhedron::convex(Polyhedron::full_space(1));
        let x = NcFunction::new(1, vec![Piece::new(rvec("1"), rat("0"))], full.clone()).unwrap();
        let mx = NcFunction::new(1, vec![Piece::new(rvec("-1"), rat("0"))], full).unwrap();
        let m = NcFunction::max_fn(&[x.clone(), mx]).unwrap();
        assert!(m.paths_agree && m.result.qualification.holds);
        assert_eq!(m.result.value.pieces(), abs().pieces());
        let one = NcFunction::max_fn(std::slice::from_ref(&x)).unwrap();
        assert_eq!(one.result.value.pieces(), x.pieces());

        let a = NcFunction::indicator(&PuncturedPolyhedron::convex(boxed("0 0", "2 2"))).unwrap();
        let b = NcFunction::indicator(&PuncturedPolyhedron::convex(boxed("1 1", "3 3"))).unwrap();
        let m = NcFunction::max_fn(&[a, b]).unwrap();
        assert!(m.paths_agree);
        let want = NcFunction::indicator(&PuncturedPolyhedron::convex(boxed("1 1", "2 2"))).unwrap();
        assert!(m.result.value.epigraph_set().carrier().set_equal(want.epigraph_set().carrier()).unwrap());
    }

    #[test]
    fn indicators() {
        let f = NcFunction::indicator(&PuncturedPolyhedron::convex(boxed("0", "1"))).unwrap();
        assert_eq!(f.evaluate(&rvec("1")).unwrap(), Some(rat("0")));
        assert_eq!(f.evaluate(&rvec("-1")).unwrap(), None);
        let bad = punctured(boxed("0", "2"), &["1"]);
        assert!(!NcFunction::indicator(&bad).unwrap().is_nearly_convex());
        assert!(matches!(
            NcFunction::indicator(&PuncturedPolyhedron::<Rat>::empty(1)),
            Err(Error::EmptyInput)
        ));
        let o1 = punctured(boxed("-1 -1", "0 1"), &["0 0"]);
        let o2 = punctured(boxed("0 -1", "1 1"), &["0 0"]);
        let sum = NcFunction::indicator(&o1).unwrap().add(&NcFunction::indicator(&o2).unwrap()).unwrap().value;
        let meet = NcFunction::indicator(&o1.intersect(&o2).unwrap().0).unwrap();
        for s in ["0 0", "0 1/2", "0 -1", "1/2 0"] {
            let v = rvec(s);
            assert_eq!(sum.evaluate(&v).unwrap(), meet.evaluate(&v).unwrap());
        }
    }
}
