//! Nearly convex sets modeled as punctured polyhedra `P \ (D_1 ∪ … ∪ D_k)`.

use std::sync::OnceLock;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, dot, zeros, Matrix};
use crate::lp::{lp_solve, LpResult};
use crate::polyhedron::{ri_meet, Polyhedron, RiMeet, RiSystem};
use crate::scalar::Field;
use crate::Rat;

/// Whether pointwise membership of a punctured polyhedron is meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fidelity {
    /// The object is exactly `carrier \ ⋃ removed`.
    Exact,
    /// Only the near-equality class is known: relative interior and closure
    /// are trustworthy, individual points are not.
    NearEqual,
}

impl Fidelity {
    pub fn and(self, other: Fidelity) -> Fidelity {
        if self == Fidelity::Exact && other == Fidelity::Exact {
            Fidelity::Exact
        } else {
            Fidelity::NearEqual
        }
    }
}

/// Result of the near-convexity decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<F> {
    /// `ri P ⊂ Ω ⊂ P`; `core` describes `ri P`.
    Yes { core: RiSystem<F> },
    /// `witness` lies in `ri P` and in removed piece `piece`.
    No { witness: Vec<F>, piece: usize },
    Unsupported { reason: String },
}

impl<F> Verdict<F> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes { .. } => "Yes",
            Verdict::No { .. } => "No",
            Verdict::Unsupported { .. } => "Unsupported",
        }
    }
}

/// Outcome of a relative-interior qualification condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qualification<F> {
    pub holds: bool,
    /// A common relative-interior point when the condition holds.
    pub witness: Option<Vec<F>>,
    /// For two sets that fail, a direction properly separating them.
    pub separator: Option<Vec<F>>,
}

impl<F: Field> Qualification<F> {
    pub fn from_meet(meet: RiMeet<F>) -> Self {
        match meet {
            RiMeet::Common(x) => Self {
                holds: true,
                witness: Some(x),
                separator: None,
            },
            RiMeet::Disjoint { separator } => Self {
                holds: false,
                witness: None,
                separator,
            },
        }
    }

    /// Relative interiors of all `polys` meet.
    pub fn of(polys: &[&Polyhedron<F>]) -> Result<Self> {
        Ok(Self::from_meet(ri_meet(polys)?))
    }
}

/// Outcome of [`PuncturedPolyhedron::properly_separate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Separation<F> {
    Separable {
        v: Vec<F>,
        sup1: F,
        inf2: F,
        strict_pair: (Vec<F>, Vec<F>),
    },
    NotSeparable { common_ri_point: Vec<F> },
}

/// A carrier polyhedron minus finitely many closed polyhedral pieces.
#[derive(Clone, Debug)]
pub struct PuncturedPolyhedron<F: Field = Rat> {
    carrier: Polyhedron<F>,
    removed: Vec<Polyhedron<F>>,
    fidelity: Fidelity,
    verdict: OnceLock<Verdict<F>>,
}

impl<F: Field> PuncturedPolyhedron<F> {
    /// Pieces are clipped to the carrier; empty pieces are dropped.
    pub fn new(
        carrier: Polyhedron<F>,
        removed: Vec<Polyhedron<F>>,
        fidelity: Fidelity,
    ) -> Result<Self> {
        let n = carrier.ambient_dim();
        let mut pieces = Vec::with_capacity(removed.len());
        for d in removed {
            check_dim(n, d.ambient_dim())?;
            if d.is_empty() || carrier.is_empty() {
                continue;
            }
            let clipped = if d.subset_of(&carrier)? {
                d
            } else {
                d.intersect(&carrier)?
            };
            if !clipped.is_empty() {
                pieces.push(clipped);
            }
        }
        Ok(Self {
            carrier,
            removed: pieces,
            fidelity,
            verdict: OnceLock::new(),
        })
    }

    pub fn exact(carrier: Polyhedron<F>, removed: Vec<Polyhedron<F>>) -> Result<Self> {
        Self::new(carrier, removed, Fidelity::Exact)
    }

    pub fn convex(carrier: Polyhedron<F>) -> Self {
        Self::from_parts(carrier, Vec::new(), Fidelity::Exact)
    }

    /// Near-equality representative with no punctures.
    pub fn near(carrier: Polyhedron<F>) -> Self {
        Self::from_parts(carrier, Vec::new(), Fidelity::NearEqual)
    }

    pub fn empty(n: usize) -> Self {
        Self::convex(Polyhedron::empty(n))
    }

    /// Pieces already known to lie in the carrier.
    fn from_parts(carrier: Polyhedron<F>, removed: Vec<Polyhedron<F>>, fidelity: Fidelity) -> Self {
        Self {
            carrier,
            removed,
            fidelity,
            verdict: OnceLock::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.carrier.ambient_dim()
    }

    pub fn carrier(&self) -> &Polyhedron<F> {
        &self.carrier
    }

    pub fn removed(&self) -> &[Polyhedron<F>] {
        &self.removed
    }

    pub fn fidelity(&self) -> Fidelity {
        self.fidelity
    }

    pub fn with_fidelity(&self, fidelity: Fidelity) -> Self {
        Self::from_parts(self.carrier.clone(), self.removed.clone(), fidelity)
    }

    /// The carrier is empty. Removed pieces never cover a whole carrier
    /// of the same dimension in the supported regime, but an exact
    /// emptiness check needs [`Self::find_member`].
    pub fn carrier_is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn membership(&self, x: &[F]) -> Result<bool> {
        if self.fidelity != Fidelity::Exact {
            return Err(Error::Fidelity);
        }
        check_dim(self.ambient_dim(), x.len())?;
        Ok(self.carrier.contains(x) && !self.removed.iter().any(|d| d.contains(x)))
    }

    fn full_dim_piece(&self) -> Option<usize> {
        let d = self.carrier.dim();
        self.removed.iter().position(|p| p.dim() == d)
    }

    pub fn verdict(&self) -> &Verdict<F> {
        self.verdict.get_or_init(|| self.decide())
    }

    pub fn check_nearly_convex(&self) -> Verdict<F> {
        self.verdict().clone()
    }

    pub fn is_nearly_convex(&self) -> bool {
        self.verdict().is_yes()
    }

    fn decide(&self) -> Verdict<F> {
        let n = self.ambient_dim();
        if self.carrier.is_empty() {
            let mut strict = Matrix::empty(n);
            strict.push_row(zeros(n));
            return Verdict::Yes {
                core: RiSystem {
                    eq: Matrix::empty(n),
                    eq_rhs: Vec::new(),
                    strict,
                    strict_rhs: vec![-F::one()],
                },
            };
        }
        if let Some(j) = self.full_dim_piece() {
            return Verdict::Unsupported {
                reason: format!(
                    "removed piece {j} has the dimension of the carrier ({})",
                    self.carrier.dim()
                ),
            };
        }
        let core = self.carrier.ri_system().expect("nonempty carrier");
        for (j, d) in self.removed.iter().enumerate() {
            if let Some(witness) = ri_witness(&core, d) {
                return Verdict::No { witness, piece: j };
            }
        }
        Verdict::Yes { core }
    }

    fn require_yes(&self) -> Result<&RiSystem<F>> {
        match self.verdict() {
            Verdict::Yes { core } => Ok(core),
            Verdict::No { witness, piece } => Err(Error::NotNearlyConvex(format!(
                "removed piece {piece} meets the relative interior of the carrier at {}",
                linalg::fmt_vec(witness)
            ))),
            Verdict::Unsupported { reason } => Err(Error::NotNearlyConvex(reason.clone())),
        }
    }

    pub fn closure(&self) -> Result<Polyhedron<F>> {
        if self.full_dim_piece().is_some() {
            return Err(Error::UnsupportedClosure);
        }
        Ok(self.carrier.clone())
    }

    pub fn ri_member(&self, x: &[F]) -> Result<bool> {
        let core = self.require_yes()?;
        check_dim(self.ambient_dim(), x.len())?;
        Ok(!self.carrier.is_empty() && core.satisfied_by(x))
    }

    pub fn ri_description(&self) -> Result<RiSystem<F>> {
        self.require_yes().cloned()
    }

    /// A point of `ri Ω`.
    pub fn ri_point(&self) -> Result<Vec<F>> {
        self.require_yes()?;
        self.carrier.ri_point()
    }

    pub fn near_equal(&self, other: &PuncturedPolyhedron<F>) -> Result<bool> {
        self.require_yes()?;
        other.require_yes()?;
        self.carrier.set_equal(&other.carrier)
    }

    /// `cl(co Ω)`, which represents `co Ω` up to near equality.
    pub fn hull_near_equal(&self) -> Result<Polyhedron<F>> {
        self.require_yes()?;
        Ok(self.carrier.clone())
    }

    pub fn properly_separate(&self, other: &PuncturedPolyhedron<F>) -> Result<Separation<F>> {
        if self.carrier.is_empty() || other.carrier.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_dim(self.ambient_dim(), other.ambient_dim())?;
        self.require_yes()?;
        other.require_yes()?;
        let (p1, p2) = (&self.carrier, &other.carrier);
        match ri_meet(&[p1, p2])? {
            RiMeet::Common(x) => Ok(Separation::NotSeparable { common_ri_point: x }),
            RiMeet::Disjoint { separator } => {
                let v = separator.ok_or_else(|| Error::Invariant("missing separator".into()))?;
                let sup1 = p1
                    .support(&v)
                    .ok_or_else(|| Error::Invariant("separator unbounded above".into()))?
                    .0;
                let inf2 = -p2
                    .support(&linalg::neg(&v))
                    .ok_or_else(|| Error::Invariant("separator unbounded below".into()))?
                    .0;
                let strict_pair = (p1.ri_point()?, p2.ri_point()?);
                if sup1 > inf2 || dot(&v, &strict_pair.0) >= dot(&v, &strict_pair.1) {
                    return Err(Error::Invariant("separation certificate failed".into()));
                }
                Ok(Separation::Separable {
                    v,
                    sup1,
                    inf2,
                    strict_pair,
                })
            }
        }
    }

    pub fn product(&self, other: &PuncturedPolyhedron<F>) -> Self {
        let mut removed = Vec::new();
        for d in &self.removed {
            removed.push(d.product(&other.carrier));
        }
        for d in &other.removed {
            removed.push(self.carrier.product(d));
        }
        let carrier = self.carrier.product(&other.carrier);
        let removed = removed.into_iter().filter(|d| !d.is_empty()).collect();
        Self::from_parts(carrier, removed, self.fidelity.and(other.fidelity))
    }

    /// The intersection together with the qualification `ri Ω1 ∩ ri Ω2 ≠ ∅`
    /// on the carriers.
    pub fn intersect(
        &self,
        other: &PuncturedPolyhedron<F>,
    ) -> Result<(Self, IntersectionReport<F>)> {
        check_dim(self.ambient_dim(), other.ambient_dim())?;
        let carrier = self.carrier.intersect(&other.carrier)?;
        let removed = self
            .removed
            .iter()
            .chain(&other.removed)
            .cloned()
            .collect();
        let out = Self::new(carrier, removed, self.fidelity.and(other.fidelity))?;
        let qualification = Qualification::of(&[&self.carrier, &other.carrier])?;
        let ri_certified = qualification.holds && self.ri_law_holds(other, &out)?;
        Ok((
            out,
            IntersectionReport {
                qualification,
                ri_certified,
            },
        ))
    }

    /// The implicit equalities of `P1 ∩ P2` are exactly those of `P1` and
    /// of `P2`, so the relative-interior systems coincide.
    fn ri_law_holds(&self, other: &PuncturedPolyhedron<F>, out: &Self) -> Result<bool> {
        let m1 = self.carrier.hrep().ineq.rows();
        let mut expected: Vec<usize> = self.carrier.implicit_equalities()?.to_vec();
        expected.extend(other.carrier.implicit_equalities()?.iter().map(|i| i + m1));
        Ok(out.carrier.implicit_equalities()? == expected.as_slice())
    }

    /// `A(Ω)` for nearly convex `Ω`.
    pub fn linear_image(&self, a: &Matrix<F>) -> Result<Self> {
        self.require_yes()?;
        self.image_unchecked(a)
    }

    /// `A(Ω)` without the near-convexity precondition.
    ///
    /// A piece `D` is saturated when `A⁻¹(A D) ∩ P ⊂ D`; then `A(D)` is
    /// exactly missing from the image. Unsaturated point pieces are covered
    /// by other points of their fiber and vanish. Any other piece makes the
    /// pointwise image unknown and the result is a near-equality
    /// representative.
    pub fn image_unchecked(&self, a: &Matrix<F>) -> Result<Self> {
        check_dim(self.ambient_dim(), a.cols())?;
        let carrier = self.carrier.linear_image(a)?;
        if self.fidelity != Fidelity::Exact {
            return Ok(Self::near(carrier));
        }
        let zero = zeros(a.rows());
        let mut removed = Vec::new();
        for d in &self.removed {
            let image = d.linear_image(a)?;
            let saturated = image
                .linear_preimage(a, &zero)?
                .intersect(&self.carrier)?
                .subset_of(d)?;
            if saturated {
                removed.push(image);
            } else if d.dim() != 0 {
                return Ok(Self::near(carrier));
            }
        }
        Ok(Self::from_parts(carrier, removed, Fidelity::Exact))
    }

    /// `{x : A x + c ∈ Ω}`; exact whenever `Ω` is.
    pub fn linear_preimage(&self, a: &Matrix<F>, c: &[F]) -> Result<Self> {
        let carrier = self.carrier.linear_preimage(a, c)?;
        let removed = self
            .removed
            .iter()
            .map(|d| d.linear_preimage(a, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(carrier, removed, self.fidelity)
    }

    /// `{y : (x, y) ∈ Ω}` for a leading block `x`.
    pub fn slice_leading(&self, x: &[F]) -> Result<Self> {
        let carrier = self.carrier.slice_leading(x)?;
        let removed = self
            .removed
            .iter()
            .map(|d| d.slice_leading(x))
            .collect::<Result<Vec<_>>>()?;
        Self::new(carrier, removed, self.fidelity)
    }

    /// Image under `y_i = x_{source[i]}`, applied to carrier and pieces.
    pub fn select_coords(&self, source: &[usize]) -> Result<Self> {
        if source.len() == self.ambient_dim() {
            let carrier = self.carrier.select_coords(source)?;
            let removed = self
                .removed
                .iter()
                .map(|d| d.select_coords(source))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::from_parts(carrier, removed, self.fidelity));
        }
        let mut a = Matrix::zeros(source.len(), self.ambient_dim());
        for (i, &s) in source.iter().enumerate() {
            a[(i, s)] = F::one();
        }
        self.image_unchecked(&a)
    }

    /// `Ω × ℝ^k`.
    pub fn extend(&self, k: usize) -> Self {
        self.product(&Self::convex(Polyhedron::full_space(k)))
    }

    /// `ℝ^k × Ω`.
    pub fn extend_front(&self, k: usize) -> Self {
        Self::convex(Polyhedron::full_space(k)).product(self)
    }

    /// Carrier and pieces in canonical form.
    pub fn canonical(&self) -> Self {
        let mut removed: Vec<Polyhedron<F>> = self.removed.iter().map(|d| d.canonical()).collect();
        removed.sort_by(|a, b| a.genrep().points.cmp(&b.genrep().points));
        Self::from_parts(self.carrier.canonical(), removed, self.fidelity)
    }

    /// Some point of `Ω`, searched among the carrier's relative-interior
    /// point, its vertices and points between them. Exact fidelity only.
    pub fn find_member(&self) -> Result<Option<Vec<F>>> {
        if self.fidelity != Fidelity::Exact {
            return Err(Error::Fidelity);
        }
        if self.carrier.is_empty() {
            return Ok(None);
        }
        let center = self.carrier.ri_point()?;
        let mut candidates = vec![center.clone()];
        let verts = self.carrier.vertices();
        let half = F::half();
        for v in &verts {
            candidates.push(v.clone());
            let mut t = half.clone();
            for _ in 0..4 {
                candidates.push(linalg::lerp(&center, v, &t));
                t = t * half.clone();
            }
        }
        for (i, v) in verts.iter().enumerate() {
            for w in &verts[i + 1..] {
                candidates.push(linalg::lerp(v, w, &half));
            }
        }
        for r in &self.carrier.genrep().rays {
            candidates.push(linalg::add(&center, r));
        }
        for c in candidates {
            if self.membership(&c)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    /// Two members whose midpoint is removed, showing `Ω` is not convex.
    ///
    /// Each piece is probed at its relative-interior point `z`. When the
    /// smallest face of the carrier through `z` has larger dimension than
    /// the piece, a short segment through `z` inside that face has member
    /// endpoints.
    pub fn nonconvexity_witness(&self) -> Result<Option<(Vec<F>, Vec<F>)>> {
        if self.fidelity != Fidelity::Exact {
            return Err(Error::Fidelity);
        }
        let h = self.carrier.hrep();
        for d in &self.removed {
            let z = d.ri_point()?;
            let mut face = h.clone();
            for (a, b) in h.ineq.row_iter().zip(&h.ineq_rhs) {
                if dot(a, &z) == *b {
                    face.equal(a.to_vec(), b.clone());
                }
            }
            let face_dirs = linalg::nullspace(&face.eq.to_rows(), self.ambient_dim());
            let (e, _) = d.affine_hull()?;
            let Some(dir) = face_dirs
                .into_iter()
                .find(|u| e.row_iter().any(|row| !dot(row, u).is_zero()))
            else {
                continue;
            };
            let mut t = F::one();
            for _ in 0..64 {
                let a = linalg::add(&z, &linalg::scale(&t, &dir));
                let b = linalg::sub(&z, &linalg::scale(&t, &dir));
                if self.membership(&a)? && self.membership(&b)? {
                    return Ok(Some((a, b)));
                }
                t = t * F::half();
            }
        }
        Ok(None)
    }
}

/// Report of [`PuncturedPolyhedron::intersect`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionReport<F> {
    pub qualification: Qualification<F>,
    /// `ri(Ω1 ∩ Ω2) = ri Ω1 ∩ ri Ω2` was certified by comparing implicit
    /// equality sets.
    pub ri_certified: bool,
}

/// A point of `ri P ∩ D`, chosen lexicographically smallest on the face of
/// maximal slack.
fn ri_witness<F: Field>(core: &RiSystem<F>, d: &Polyhedron<F>) -> Option<Vec<F>> {
    let n = d.ambient_dim();
    let mut lp = d.hrep().lp(1);
    let mut slack = zeros(n + 1);
    slack[n] = F::one();
    for (a, b) in core.strict.row_iter().zip(&core.strict_rhs) {
        let mut row = a.to_vec();
        row.push(F::one());
        lp.leq(row, b.clone());
    }
    lp.leq(slack.clone(), F::one());
    for (a, b) in core.eq.row_iter().zip(&core.eq_rhs) {
        let mut row = a.to_vec();
        row.push(F::zero());
        lp.equal(row, b.clone());
    }
    let (mut x, t) = match lp_solve(&lp.clone().maximize(slack.clone())).ok()? {
        LpResult::Optimal { x, value, .. } if value.is_positive() => (x, value),
        _ => return None,
    };
    lp.equal(slack, t);
    for i in 0..n {
        let mut obj = zeros(n + 1);
        obj[i] = F::one();
        match lp_solve(&lp.clone().minimize(obj.clone())).ok()? {
            LpResult::Optimal { x: y, value, .. } => {
                lp.equal(obj, value);
                x = y;
            }
            _ => break,
        }
    }
    x.truncate(n);
    Some(x)
}
