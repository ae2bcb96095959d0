//! Closed convex polyhedra with exact dual representations.
//!
//! A [`Polyhedron`] holds an inequality description ([`HRep`]), a generator
//! description ([`GenRep`]), or both. The missing one is computed on demand
//! by double description and cached, as are emptiness and the implicit
//! equality set.

mod dd;
mod fm;

use std::fmt;
use std::sync::OnceLock;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, dot, is_zero_vec, row_space_basis, zeros, Matrix};
use crate::lp::{lp_solve, LpProblem, LpResult};
use crate::scalar::Field;
use crate::Rat;


/// `{x : ineq x ≤ ineq_rhs, eq x = eq_rhs}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HRep<F> {
    pub ineq: Matrix<F>,
    pub ineq_rhs: Vec<F>,
    pub eq: Matrix<F>,
    pub eq_rhs: Vec<F>,
}

impl<F: Field> HRep<F> {
    pub fn new(ambient: usize) -> Self {
        Self {
            ineq: Matrix::empty(ambient),
            ineq_rhs: Vec::new(),
            eq: Matrix::empty(ambient),
            eq_rhs: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ineq.cols()
    }

    /// The single infeasible row `0 ≤ -1`.
    pub fn empty_set(ambient: usize) -> Self {
        let mut h = Self::new(ambient);
        h.leq(zeros(ambient), -F::one());
        h
    }

    pub fn leq(&mut self, a: Vec<F>, b: F) {
        self.ineq.push_row(a);
        self.ineq_rhs.push(b);
    }

    pub fn equal(&mut self, a: Vec<F>, b: F) {
        self.eq.push_row(a);
        self.eq_rhs.push(b);
    }

    fn validate(&self) -> Result<()> {
        check_dim(self.ineq.cols(), self.eq.cols())?;
        check_dim(self.ineq.rows(), self.ineq_rhs.len())?;
        check_dim(self.eq.rows(), self.eq_rhs.len())
    }

    pub fn contains(&self, x: &[F]) -> bool {
        self.ineq
            .row_iter()
            .zip(&self.ineq_rhs)
            .all(|(a, b)| dot(a, x) <= *b)
            && self
                .eq
                .row_iter()
                .zip(&self.eq_rhs)
                .all(|(a, b)| dot(a, x) == *b)
    }

    fn recedes(&self, r: &[F]) -> bool {
        self.ineq.row_iter().all(|a| !dot(a, r).is_positive())
            && self.eq.row_iter().all(|a| dot(a, r).is_zero())
    }

    fn lineal(&self, l: &[F]) -> bool {
        self.ineq
            .row_iter()
            .chain(self.eq.row_iter())
            .all(|a| dot(a, l).is_zero())
    }

    /// Every generator of `v` satisfies this system.
    pub fn contains_generators(&self, v: &GenRep<F>) -> bool {
        v.points.iter().all(|p| self.contains(p))
            && v.rays.iter().all(|r| self.recedes(r))
            && v.lines.iter().all(|l| self.lineal(l))
    }

    /// LP skeleton over these constraints and `extra` trailing variables.
    pub(crate) fn lp(&self, extra: usize) -> LpProblem<F> {
        let n = self.ambient();
        let mut lp = LpProblem::new(n + extra);
        let pad = |a: &[F]| {
            let mut v = a.to_vec();
            v.extend(zeros(extra));
            v
        };
        for (a, b) in self.ineq.row_iter().zip(&self.ineq_rhs) {
            lp.leq(pad(a), b.clone());
        }
        for (a, b) in self.eq.row_iter().zip(&self.eq_rhs) {
            lp.equal(pad(a), b.clone());
        }
        lp
    }

    /// Adds the rows of `other`.
    pub fn append(&mut self, other: &HRep<F>) {
        for (a, b) in other.ineq.row_iter().zip(&other.ineq_rhs) {
            self.leq(a.to_vec(), b.clone());
        }
        for (a, b) in other.eq.row_iter().zip(&other.eq_rhs) {
            self.equal(a.to_vec(), b.clone());
        }
    }

    /// `{x : A x + c ∈ self}` for `a` with `self.ambient()` rows.
    fn pullback(&self, a: &Matrix<F>, c: &[F]) -> HRep<F> {
        let mut out = HRep::new(a.cols());
        for (row, b) in self.ineq.row_iter().zip(&self.ineq_rhs) {
            let (r, s) = pull_row(row, b, a, c);
            out.leq(r, s);
        }
        for (row, b) in self.eq.row_iter().zip(&self.eq_rhs) {
            let (r, s) = pull_row(row, b, a, c);
            out.equal(r, s);
        }
        out
    }
}

fn pull_row<F: Field>(row: &[F], b: &F, a: &Matrix<F>, c: &[F]) -> (Vec<F>, F) {
    let mut r = zeros::<F>(a.cols());
    for (k, rk) in row.iter().enumerate() {
        if rk.is_zero() {
            continue;
        }
        for (j, v) in r.iter_mut().enumerate() {
            let t = &a[(k, j)];
            if !t.is_zero() {
                *v = v.clone() + rk.clone() * t.clone();
            }
        }
    }
    (r, b.clone() - dot(row, c))
}

/// `conv(points) + cone(rays) + span(lines)`; empty iff `points` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenRep<F> {
    pub ambient: usize,
    pub points: Vec<Vec<F>>,
    pub rays: Vec<Vec<F>>,
    pub lines: Vec<Vec<F>>,
}

impl<F: Field> GenRep<F> {
    pub fn empty(ambient: usize) -> Self {
        Self {
            ambient,
            points: Vec::new(),
            rays: Vec::new(),
            lines: Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        for v in self.points.iter().chain(&self.rays).chain(&self.lines) {
            check_dim(self.ambient, v.len())?;
        }
        Ok(())
    }
}

/// The relative interior as an affine system plus strict inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiSystem<F> {
    pub eq: Matrix<F>,
    pub eq_rhs: Vec<F>,
    pub strict: Matrix<F>,
    pub strict_rhs: Vec<F>,
}

impl<F: Field> RiSystem<F> {
    pub fn satisfied_by(&self, x: &[F]) -> bool {
        self.eq
            .row_iter()
            .zip(&self.eq_rhs)
            .all(|(a, b)| dot(a, x) == *b)
            && self
                .strict
                .row_iter()
                .zip(&self.strict_rhs)
                .all(|(a, b)| dot(a, x) < *b)
    }
}

/// Outcome of comparing relative interiors of several polyhedra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RiMeet<F> {
    /// A point in the relative interior of every input.
    Common(Vec<F>),
    /// The relative interiors have no common point. For two inputs `v`
    /// satisfies `⟨v, x⟩ ≤ ⟨v, y⟩` for all `x` in the first and `y` in the
    /// second set, with strict inequality between their relative interior
    /// points.
    Disjoint { separator: Option<Vec<F>> },
}

impl<F> RiMeet<F> {
    pub fn holds(&self) -> bool {
        matches!(self, RiMeet::Common(_))
    }
}

/// A closed convex polyhedron.
#[derive(Clone)]
pub struct Polyhedron<F: Field = Rat> {
    ambient: usize,
    h: OnceLock<HRep<F>>,
    v: OnceLock<GenRep<F>>,
    empty: OnceLock<bool>,
    implicit: OnceLock<Option<Vec<usize>>>,
}

impl<F: Field> fmt::Debug for Polyhedron<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polyhedron")
            .field("ambient", &self.ambient)
            .field("h", &self.h.get())
            .field("v", &self.v.get())
            .finish()
    }
}

fn with<T>(value: T) -> OnceLock<T> {
    let cell = OnceLock::new();
    let _ = cell.set(value);
    cell
}

impl<F: Field> Polyhedron<F> {
    pub fn from_h(h: HRep<F>) -> Result<Self> {
        h.validate()?;
        Ok(Self {
            ambient: h.ambient(),
            h: with(h),
            v: OnceLock::new(),
            empty: OnceLock::new(),
            implicit: OnceLock::new(),
        })
    }

    pub fn from_v(v: GenRep<F>) -> Result<Self> {
        v.validate()?;
        let empty = v.points.is_empty();
        Ok(Self {
            ambient: v.ambient,
            h: OnceLock::new(),
            v: with(v),
            empty: with(empty),
            implicit: OnceLock::new(),
        })
    }

    /// Both representations supplied by the caller, who guarantees they
    /// agree.
    pub(crate) fn from_both(h: HRep<F>, v: GenRep<F>) -> Self {
        let empty = v.points.is_empty();
        Self {
            ambient: h.ambient(),
            h: with(h),
            v: with(v),
            empty: with(empty),
            implicit: OnceLock::new(),
        }
    }

    pub fn full_space(n: usize) -> Self {
        Self::from_both(
            HRep::new(n),
            GenRep {
                ambient: n,
                points: vec![zeros(n)],
                rays: Vec::new(),
                lines: row_space_basis(&Matrix::<F>::identity(n).to_rows(), n),
            },
        )
    }

    pub fn empty(n: usize) -> Self {
        Self::from_both(HRep::empty_set(n), GenRep::empty(n))
    }

    pub fn point(x: Vec<F>) -> Self {
        let n = x.len();
        Self::from_v(GenRep {
            ambient: n,
            points: vec![x],
            rays: Vec::new(),
            lines: Vec::new(),
        })
        .expect("consistent point")
    }

    pub fn from_points(n: usize, points: Vec<Vec<F>>) -> Result<Self> {
        Self::from_v(GenRep {
            ambient: n,
            points,
            rays: Vec::new(),
            lines: Vec::new(),
        })
    }

    /// The cone generated by `rays`.
    pub fn cone(n: usize, rays: Vec<Vec<F>>) -> Result<Self> {
        Self::from_v(GenRep {
            ambient: n,
            points: vec![zeros(n)],
            rays,
            lines: Vec::new(),
        })
    }

    /// The box `∏ [lo_i, hi_i]`.
    pub fn boxed(lo: &[F], hi: &[F]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let n = lo.len();
        let mut h = HRep::new(n);
        for i in 0..n {
            h.leq(linalg::unit(n, i), hi[i].clone());
            h.leq(linalg::neg(&linalg::unit(n, i)), -lo[i].clone());
        }
        Self::from_h(h)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn has_hrep(&self) -> bool {
        self.h.get().is_some()
    }

    pub fn has_genrep(&self) -> bool {
        self.v.get().is_some()
    }

    pub fn hrep(&self) -> &HRep<F> {
        self.h.get_or_init(|| {
            dd::v_to_h(self.v.get().expect("at least one representation"))
        })
    }

    pub fn genrep(&self) -> &GenRep<F> {
        self.v.get_or_init(|| {
            dd::h_to_v(self.h.get().expect("at least one representation"))
        })
    }

    /// Representations as supplied or computed so far.
    pub fn stored(&self) -> (Option<&HRep<F>>, Option<&GenRep<F>>) {
        (self.h.get(), self.v.get())
    }

    /// This polyhedron with both representations present.
    pub fn dd_convert(&self) -> Self {
        let p = self.clone();
        p.hrep();
        p.genrep();
        p
    }

    /// Irredundant generators and inequalities, deterministically ordered.
    pub fn canonical(&self) -> Self {
        let v = if self.has_hrep() {
            dd::h_to_v(self.hrep())
        } else {
            dd::h_to_v(&dd::v_to_h(self.genrep()))
        };
        let h = dd::v_to_h(&v);
        Self::from_both(h, v)
    }

    pub fn is_empty(&self) -> bool {
        *self.empty.get_or_init(|| {
            if let Some(v) = self.v.get() {
                return v.points.is_empty();
            }
            let lp = self.hrep().lp(0);
            matches!(
                lp_solve(&lp).expect("well-formed"),
                LpResult::Infeasible { .. }
            )
        })
    }

    pub fn contains(&self, x: &[F]) -> bool {
        x.len() == self.ambient && self.hrep().contains(x)
    }

    /// Whether every generator of `self` lies in `other`.
    pub fn subset_of(&self, other: &Polyhedron<F>) -> Result<bool> {
        check_dim(self.ambient, other.ambient)?;
        if self.is_empty() {
            return Ok(true);
        }
        if other.is_empty() {
            return Ok(false);
        }
        Ok(other.hrep().contains_generators(self.genrep()))
    }

    /// Mutual containment of generators in the other's inequalities.
    pub fn set_equal(&self, other: &Polyhedron<F>) -> Result<bool> {
        Ok(self.subset_of(other)? && other.subset_of(self)?)
    }

    /// Indices of inequalities that hold with equality on the whole set.
    pub fn implicit_equalities(&self) -> Result<&[usize]> {
        self.implicit
            .get_or_init(|| self.compute_implicit())
            .as_deref()
            .ok_or(Error::EmptySet)
    }

    fn compute_implicit(&self) -> Option<Vec<usize>> {
        if let Some(v) = self.v.get() {
            return self.implicit_from_generators(v);
        }
        let h = self.hrep();
        let n = self.ambient;
        let x0 = match lp_solve(&h.lp(0)).expect("well-formed") {
            LpResult::Optimal { x, .. } => x,
            _ => return None,
        };
        let mut open: Vec<usize> = (0..h.ineq.rows())
            .filter(|&i| dot(h.ineq.row(i), &x0) == h.ineq_rhs[i])
            .collect();
        // Maximize bounded slacks on the rows still tight everywhere seen;
        // each round either certifies them all or frees at least one.
        while !open.is_empty() {
            let k = open.len();
            let mut obj = zeros::<F>(n + k);
            obj[n..].iter_mut().for_each(|c| *c = F::one());
            let mut lp = LpProblem::new(n + k).maximize(obj);
            for i in 0..h.ineq.rows() {
                let mut row = h.ineq.row(i).to_vec();
                row.extend(zeros::<F>(k));
                if let Some(pos) = open.iter().position(|&o| o == i) {
                    row[n + pos] = F::one();
                }
                lp.leq(row, h.ineq_rhs[i].clone());
            }
            for (a, b) in h.eq.row_iter().zip(&h.eq_rhs) {
                let mut row = a.to_vec();
                row.extend(zeros::<F>(k));
                lp.equal(row, b.clone());
            }
            for j in 0..k {
                let mut e = zeros::<F>(n + k);
                e[n + j] = F::one();
                lp.leq(e.clone(), F::one());
                e[n + j] = -F::one();
                lp.leq(e, F::zero());
            }
            let x = match lp_solve(&lp).expect("well-formed") {
                LpResult::Optimal { x, .. } => x,
                _ => unreachable!("bounded feasible system"),
            };
            let before = open.len();
            open = open
                .iter()
                .enumerate()
                .filter(|(j, _)| x[n + j].is_zero())
                .map(|(_, &i)| i)
                .collect();
            if open.len() == before {
                break;
            }
        }
        Some(open)
    }

    fn implicit_from_generators(&self, v: &GenRep<F>) -> Option<Vec<usize>> {
        if v.points.is_empty() {
            return None;
        }
        let h = self.hrep();
        let out = (0..h.ineq.rows())
            .filter(|&i| {
                let a = h.ineq.row(i);
                v.points.iter().all(|p| dot(a, p) == h.ineq_rhs[i])
                    && v.rays.iter().chain(&v.lines).all(|r| dot(a, r).is_zero())
            })
            .collect();
        Some(out)
    }

    /// Equalities plus implicit equalities (as equations) and the remaining
    /// inequalities.
    pub fn ri_system(&self) -> Result<RiSystem<F>> {
        let implicit = self.implicit_equalities()?.to_vec();
        let h = self.hrep();
        let mut sys = RiSystem {
            eq: h.eq.clone(),
            eq_rhs: h.eq_rhs.clone(),
            strict: Matrix::empty(self.ambient),
            strict_rhs: Vec::new(),
        };
        for i in 0..h.ineq.rows() {
            if implicit.contains(&i) {
                sys.eq.push_row(h.ineq.row(i).to_vec());
                sys.eq_rhs.push(h.ineq_rhs[i].clone());
            } else {
                sys.strict.push_row(h.ineq.row(i).to_vec());
                sys.strict_rhs.push(h.ineq_rhs[i].clone());
            }
        }
        Ok(sys)
    }

    /// An irredundant equality system whose solution set is `aff P`.
    pub fn affine_hull(&self) -> Result<(Matrix<F>, Vec<F>)> {
        let sys = self.ri_system()?;
        let n = self.ambient;
        let aug: Vec<Vec<F>> = sys
            .eq
            .row_iter()
            .zip(&sys.eq_rhs)
            .map(|(a, b)| {
                let mut v = a.to_vec();
                v.push(b.clone());
                v
            })
            .collect();
        let basis = row_space_basis(&aug, n + 1);
        let mut e = Matrix::empty(n);
        let mut d = Vec::new();
        for row in basis {
            d.push(row[n].clone());
            e.push_row(row[..n].to_vec());
        }
        Ok((e, d))
    }

    /// Affine dimension; `-1` for the empty set.
    pub fn dim(&self) -> isize {
        match self.affine_hull() {
            Ok((e, _)) => self.ambient as isize - e.rows() as isize,
            Err(_) => -1,
        }
    }

    pub fn ri_contains(&self, x: &[F]) -> bool {
        if x.len() != self.ambient || self.is_empty() {
            return false;
        }
        self.ri_system().is_ok_and(|s| s.satisfied_by(x))
    }

    /// A rational point of the relative interior.
    pub fn ri_point(&self) -> Result<Vec<F>> {
        match ri_meet(&[self])? {
            RiMeet::Common(x) => Ok(x),
            RiMeet::Disjoint { .. } => Err(Error::EmptySet),
        }
    }

    pub fn intersect(&self, other: &Polyhedron<F>) -> Result<Self> {
        check_dim(self.ambient, other.ambient)?;
        let mut h = self.hrep().clone();
        h.append(other.hrep());
        Self::from_h(h)
    }

    pub fn product(&self, other: &Polyhedron<F>) -> Self {
        let (n, m) = (self.ambient, other.ambient);
        let mut h = HRep::new(n + m);
        let left = |a: &[F]| {
            let mut v = a.to_vec();
            v.extend(zeros(m));
            v
        };
        let right = |a: &[F]| {
            let mut v = zeros(n);
            v.extend(a.iter().cloned());
            v
        };
        let (h1, h2) = (self.hrep(), other.hrep());
        for (a, b) in h1.ineq.row_iter().zip(&h1.ineq_rhs) {
            h.leq(left(a), b.clone());
        }
        for (a, b) in h2.ineq.row_iter().zip(&h2.ineq_rhs) {
            h.leq(right(a), b.clone());
        }
        for (a, b) in h1.eq.row_iter().zip(&h1.eq_rhs) {
            h.equal(left(a), b.clone());
        }
        for (a, b) in h2.eq.row_iter().zip(&h2.eq_rhs) {
            h.equal(right(a), b.clone());
        }
        Self::from_h(h).expect("block structure")
    }

    /// `{A x : x ∈ P}`, by mapping generators.
    pub fn linear_image(&self, a: &Matrix<F>) -> Result<Self> {
        check_dim(self.ambient, a.cols())?;
        let v = self.genrep();
        let map = |xs: &[Vec<F>], drop_zero: bool| -> Vec<Vec<F>> {
            xs.iter()
                .map(|x| a.mul_vec(x))
                .filter(|y| !drop_zero || !is_zero_vec(y))
                .collect()
        };
        Self::from_v(GenRep {
            ambient: a.rows(),
            points: map(&v.points, false),
            rays: map(&v.rays, true),
            lines: map(&v.lines, true),
        })
    }

    /// `{x : A x + c ∈ P}`.
    pub fn linear_preimage(&self, a: &Matrix<F>, c: &[F]) -> Result<Self> {
        check_dim(self.ambient, a.rows())?;
        check_dim(self.ambient, c.len())?;
        Self::from_h(self.hrep().pullback(a, c))
    }

    /// Projection onto `coords` (in that order) by Fourier–Motzkin
    /// elimination.
    pub fn project(&self, coords: &[usize]) -> Result<Self> {
        for &c in coords {
            if c >= self.ambient {
                return Err(Error::DimensionMismatch {
                    expected: self.ambient,
                    found: c + 1,
                });
            }
        }
        // Fourier–Motzkin only for a single elimination from inequalities;
        // otherwise generators project coordinatewise.
        if self.v.get().is_some() || self.ambient > coords.len() + 1 {
            let g = self.genrep();
            let pick = |x: &Vec<F>| coords.iter().map(|&c| x[c].clone()).collect::<Vec<F>>();
            let mut points: Vec<_> = g.points.iter().map(pick).collect();
            points.sort();
            points.dedup();
            let directions = |xs: &[Vec<F>]| {
                let mut out: Vec<Vec<F>> = xs.iter().map(pick).filter(|d| d.iter().any(|t| !t.is_zero())).collect();
                out.sort();
                out.dedup();
                out
            };
            return Self::from_v(GenRep {
                ambient: coords.len(),
                points,
                rays: directions(&g.rays),
                lines: directions(&g.lines),
            });
        }
        match fm::project(self.hrep(), coords) {
            Some(h) => Self::from_h(h),
            None => Ok(Self::empty(coords.len())),
        }
    }

    /// `{r : A r ≤ 0, E r = 0}`.
    pub fn recession_cone(&self) -> Self {
        let h = self.hrep();
        Self::from_h(HRep {
            ineq: h.ineq.clone(),
            ineq_rhs: zeros(h.ineq.rows()),
            eq: h.eq.clone(),
            eq_rhs: zeros(h.eq.rows()),
        })
        .expect("same shape")
    }

    pub fn minkowski_sum(&self, other: &Polyhedron<F>) -> Result<Self> {
        check_dim(self.ambient, other.ambient)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty(self.ambient));
        }
        let (v, w) = (self.genrep(), other.genrep());
        let mut points = Vec::with_capacity(v.points.len() * w.points.len());
        for p in &v.points {
            for q in &w.points {
                points.push(linalg::add(p, q));
            }
        }
        points.sort();
        points.dedup();
        Self::from_v(GenRep {
            ambient: self.ambient,
            points,
            rays: v.rays.iter().chain(&w.rays).cloned().collect(),
            lines: v.lines.iter().chain(&w.lines).cloned().collect(),
        })
    }

    /// Image under `y_i = x_{source[i]}`.
    pub fn select_coords(&self, source: &[usize]) -> Result<Self> {
        let mut a = Matrix::zeros(source.len(), self.ambient);
        for (i, &s) in source.iter().enumerate() {
            if s >= self.ambient {
                return Err(Error::DimensionMismatch {
                    expected: self.ambient,
                    found: s + 1,
                });
            }
            a[(i, s)] = F::one();
        }
        if source.len() == self.ambient && is_permutation(source) {
            // Permutations map both representations exactly.
            let inv = invert(source);
            let h = self.h.get().map(|h| permute_h(h, &inv));
            let v = self.v.get().map(|v| permute_v(v, source));
            return Ok(match (h, v) {
                (Some(h), Some(v)) => Self::from_both(h, v),
                (Some(h), None) => Self::from_h(h)?,
                (None, Some(v)) => Self::from_v(v)?,
                (None, None) => unreachable!("at least one representation"),
            });
        }
        self.linear_image(&a)
    }

    /// `{y : (x, y) ∈ P}` for a fixed leading block `x`.
    pub fn slice_leading(&self, x: &[F]) -> Result<Self> {
        if x.len() > self.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: x.len(),
            });
        }
        let k = x.len();
        let p = self.ambient - k;
        let mut a = Matrix::zeros(self.ambient, p);
        for i in 0..p {
            a[(k + i, i)] = F::one();
        }
        let mut c = x.to_vec();
        c.extend(zeros(p));
        self.linear_preimage(&a, &c)
    }

    /// Canonical-form vertices (points of the minimal generator set).
    pub fn vertices(&self) -> Vec<Vec<F>> {
        self.canonical().genrep().points.clone()
    }

    /// Maximizes `c` over the polyhedron; `None` when unbounded or empty.
    pub fn support(&self, c: &[F]) -> Option<(F, Vec<F>)> {
        let lp = self.hrep().lp(0).maximize(c.to_vec());
        match lp_solve(&lp).expect("well-formed") {
            LpResult::Optimal { x, value, .. } => Some((value, x)),
            _ => None,
        }
    }
}

fn is_permutation(s: &[usize]) -> bool {
    let mut seen = vec![false; s.len()];
    s.iter().all(|&i| i < s.len() && !std::mem::replace(&mut seen[i], true))
}

fn invert(s: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; s.len()];
    for (i, &j) in s.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Row `a` over old coordinates becomes `a'` with `a'_i = a_{source[i]}`.
fn permute_vec<F: Field>(a: &[F], source: &[usize]) -> Vec<F> {
    source.iter().map(|&s| a[s].clone()).collect()
}

fn permute_h<F: Field>(h: &HRep<F>, inv: &[usize]) -> HRep<F> {
    // y = P x with y_i = x_{source[i]}; a·x = a·(Pᵀ y) so a'_i = a_{source[i]}.
    let source = invert(inv);
    let mut out = HRep::new(h.ambient());
    for (a, b) in h.ineq.row_iter().zip(&h.ineq_rhs) {
        out.leq(permute_vec(a, &source), b.clone());
    }
    for (a, b) in h.eq.row_iter().zip(&h.eq_rhs) {
        out.equal(permute_vec(a, &source), b.clone());
    }
    out
}

fn permute_v<F: Field>(v: &GenRep<F>, source: &[usize]) -> GenRep<F> {
    let map = |xs: &[Vec<F>]| xs.iter().map(|x| permute_vec(x, source)).collect();
    GenRep {
        ambient: v.ambient,
        points: map(&v.points),
        rays: map(&v.rays),
        lines: map(&v.lines),
    }
}

/// Decides whether the relative interiors of `polys` share a point, by
/// maximizing a common slack `t ≤ 1` over all of their relative-interior
/// systems.
pub fn ri_meet<F: Field>(polys: &[&Polyhedron<F>]) -> Result<RiMeet<F>> {
    let Some(first) = polys.first() else {
        return Err(Error::EmptyInput);
    };
    let n = first.ambient;
    for p in polys {
        check_dim(n, p.ambient)?;
    }
    if polys.iter().any(|p| p.is_empty()) {
        return Ok(RiMeet::Disjoint { separator: None });
    }
    let systems: Vec<RiSystem<F>> = polys
        .iter()
        .map(|p| p.ri_system())
        .collect::<Result<_>>()?;
    let mut objective = zeros(n + 1);
    objective[n] = F::one();
    let mut lp = LpProblem::new(n + 1).maximize(objective);
    // (polyhedron, is_strict) per LP row, in insertion order.
    let mut strict_owner = Vec::new();
    for (k, s) in systems.iter().enumerate() {
        for (a, b) in s.strict.row_iter().zip(&s.strict_rhs) {
            let mut row = a.to_vec();
            row.push(F::one());
            lp.leq(row, b.clone());
            strict_owner.push(k);
        }
    }
    let mut cap = zeros(n + 1);
    cap[n] = F::one();
    lp.leq(cap, F::one());
    let mut eq_owner = Vec::new();
    for (k, s) in systems.iter().enumerate() {
        for (a, b) in s.eq.row_iter().zip(&s.eq_rhs) {
            let mut row = a.to_vec();
            row.push(F::zero());
            lp.equal(row, b.clone());
            eq_owner.push(k);
        }
    }
    let m1 = lp.ineq.rows();
    let multipliers = match lp_solve(&lp)? {
        LpResult::Optimal { x, value, dual } => {
            if value.is_positive() {
                return Ok(RiMeet::Common(x[..n].to_vec()));
            }
            dual
        }
        LpResult::Infeasible { farkas } => farkas,
        LpResult::Unbounded { .. } => unreachable!("slack is capped"),
    };
    let separator = (polys.len() == 2).then(|| {
        let mut v = zeros(n);
        for (i, &owner) in strict_owner.iter().enumerate() {
            if owner == 0 && !multipliers[i].is_zero() {
                v = linalg::add(&v, &linalg::scale(&multipliers[i], &lp.ineq.row(i)[..n]));
            }
        }
        for (j, &owner) in eq_owner.iter().enumerate() {
            let y = &multipliers[m1 + j];
            if owner == 0 && !y.is_zero() {
                v = linalg::add(&v, &linalg::scale(y, &lp.eq.row(j)[..n]));
            }
        }
        linalg::normalize_direction(&v)
    });
    Ok(RiMeet::Disjoint { separator })
}

#[cfg(test)]
mod tests;
