//! Seeded random instances.
//!
//! Carriers are built around an anchor point that lies in their relative
//! interior, so instances that share an anchor satisfy the relative
//! interior qualification conditions by construction. Punctures are either
//! placed on facets (the set stays nearly convex) or inside the relative
//! interior (it does not).

use ncvx_core::linalg::{add, dot, lerp, sub, unit};
use ncvx_core::{GenRep, HRep, NcFunction, Piece, Polyhedron, PuncturedPolyhedron, RMat, RVec, Rat, SvMap};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Parameters of a random instance. Generation is a pure function of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub seed: u64,
    /// Source dimension, at most 4.
    pub n: usize,
    /// Target dimension for mappings, at most 4.
    pub p: usize,
    /// Inequalities per random H-carrier, at most 8.
    pub max_ineq: usize,
    /// Removed pieces per set, at most 3.
    pub punctures: usize,
    /// Integer coefficients are drawn from `[-coef, coef]`, at most 4.
    pub coef: i64,
    /// Place every puncture on the relative boundary.
    pub force_yes: bool,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            n: 2,
            p: 1,
            max_ineq: 6,
            punctures: 2,
            coef: 4,
            force_yes: true,
        }
    }
}

impl InstanceSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn dims(mut self, n: usize, p: usize) -> Self {
        self.n = n;
        self.p = p;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        let ok = (1..=4).contains(&self.n)
            && (1..=4).contains(&self.p)
            && (1..=8).contains(&self.max_ineq)
            && self.punctures <= 3
            && (1..=4).contains(&self.coef);
        if ok {
            Ok(())
        } else {
            Err(format!("instance spec out of range: {self:?}"))
        }
    }
}

pub fn gen_set(spec: &InstanceSpec) -> PuncturedPolyhedron {
    let mut g = Gen::new(spec.clone());
    let a = g.anchor(spec.n);
    g.set_at(&a, spec.force_yes)
}

pub fn gen_map(spec: &InstanceSpec) -> SvMap {
    let mut g = Gen::new(spec.clone());
    let a = g.anchor(spec.n);
    let b = g.anchor(spec.p);
    g.map_at(&a, &b, spec.force_yes)
}

pub fn gen_fn(spec: &InstanceSpec) -> NcFunction {
    let mut g = Gen::new(spec.clone());
    let a = g.anchor(spec.n);
    g.fn_at(&a, spec.force_yes, false)
}

/// Seeded source of random objects.
pub struct Gen {
    rng: ChaCha8Rng,
    pub spec: InstanceSpec,
}

fn q(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

fn frac(p: i64, d: i64) -> Rat {
    Rat::new(p.into(), d.into())
}

impl Gen {
    pub fn new(spec: InstanceSpec) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            spec,
        }
    }

    /// Independent stream for trial `trial` of theorem `id`.
    pub fn for_trial(spec: &InstanceSpec, id: &str, trial: usize) -> Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in id.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        let seed = spec
            .seed
            .wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(h)
            .wrapping_add((trial as u64).wrapping_mul(0xd1b5_4a32_d192_ed03));
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spec: spec.clone(),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> Option<&'a T> {
        items.choose(&mut self.rng)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.rng);
    }

    /// A rational in `[0, 1)` with a small denominator.
    pub fn unit_fraction(&mut self) -> Rat {
        let d = self.int(2, 8);
        frac(self.int(0, d - 1), d)
    }

    pub fn ivec(&mut self, n: usize, lo: i64, hi: i64) -> RVec {
        (0..n).map(|_| q(self.int(lo, hi))).collect()
    }

    pub fn nonzero_ivec(&mut self, n: usize, bound: i64) -> RVec {
        loop {
            let v = self.ivec(n, -bound, bound);
            if v.iter().any(|x| !x.is_zero()) {
                return v;
            }
        }
    }

    pub fn anchor(&mut self, n: usize) -> RVec {
        self.ivec(n, -2, 2)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> RMat {
        let data = (0..rows).map(|_| self.ivec(cols, -2, 2)).collect();
        RMat::from_rows(cols, data).expect("rectangular")
    }

    /// Either `a` itself or, with probability `1 - keep`, a fresh anchor.
    pub fn maybe_shift(&mut self, a: &[Rat], keep: f64) -> RVec {
        if self.chance(keep) {
            a.to_vec()
        } else {
            self.anchor(a.len())
        }
    }

    /// A closed polyhedron with `a` in its relative interior.
    pub fn carrier(&mut self, a: &[Rat], full_dim: bool) -> Polyhedron {
        let n = a.len();
        let c = self.spec.coef;
        let style = self.int(0, 9);
        match style {
            0..=3 => self.h_carrier(a, false),
            4..=6 => {
                // A cross-polytope around the anchor; above three dimensions
                // a simplex, whose facet count stays linear.
                let mut points = Vec::new();
                for i in 0..n {
                    let e = unit::<Rat>(n, i);
                    let s = q(self.int(1, 2));
                    points.push(add(a, &ncvx_core::linalg::scale(&s, &e)));
                    if n <= 3 {
                        let s = q(self.int(1, 2));
                        points.push(sub(a, &ncvx_core::linalg::scale(&s, &e)));
                    }
                }
                if n > 3 {
                    let t = q(self.int(1, 2));
                    points.push(a.iter().map(|v| v.clone() - t.clone()).collect());
                }
                for _ in 0..self.int(0, 2) {
                    let d = self.ivec(n, -2, 2);
                    points.push(add(a, &d));
                }
                Polyhedron::from_v(GenRep {
                    ambient: n,
                    points,
                    rays: Vec::new(),
                    lines: Vec::new(),
                })
                .expect("consistent shape")
            }
            7 if n >= 2 && !full_dim => self.h_carrier(a, true),
            _ => {
                let mut h = HRep::new(n);
                for (i, ai) in a.iter().enumerate() {
                    let e = unit::<Rat>(n, i);
                    h.leq(e.clone(), ai.clone() + q(self.int(1, 3)));
                    h.leq(ncvx_core::linalg::neg(&e), -ai.clone() + q(self.int(1, 3)));
                }
                if self.chance(0.5) {
                    let r = self.nonzero_ivec(n, c);
                    let s = q(self.int(1, c));
                    h.leq(r.clone(), dot(&r, a) + s);
                }
                Polyhedron::from_h(h).expect("consistent shape")
            }
        }
    }

    fn h_carrier(&mut self, a: &[Rat], with_equality: bool) -> Polyhedron {
        let n = a.len();
        let c = self.spec.coef;
        let k = self.int(n as i64 + 1, (self.spec.max_ineq as i64).max(n as i64 + 1));
        let mut h = HRep::new(n);
        for _ in 0..k {
            let r = self.nonzero_ivec(n, c);
            let s = q(self.int(1, c));
            h.leq(r.clone(), dot(&r, a) + s);
        }
        if with_equality {
            let e = self.nonzero_ivec(n, 2);
            h.equal(e.clone(), dot(&e, a));
        }
        Polyhedron::from_h(h).expect("consistent shape")
    }

    /// Pieces to remove from `carrier`; boundary pieces only when
    /// `force_yes`.
    pub fn punctures(&mut self, carrier: &Polyhedron, a: &[Rat], force_yes: bool) -> Vec<Polyhedron> {
        let m = self.int(0, self.spec.punctures as i64);
        let mut out = Vec::new();
        for _ in 0..m {
            let boundary = force_yes || self.chance(0.6);
            let piece = if boundary {
                self.boundary_piece(carrier)
            } else {
                self.interior_piece(carrier, a)
            };
            out.extend(piece);
        }
        out
    }

    fn boundary_piece(&mut self, carrier: &Polyhedron) -> Option<Polyhedron> {
        let h = carrier.hrep().clone();
        let implicit = carrier.implicit_equalities().ok()?.to_vec();
        let mut rows: Vec<usize> = (0..h.ineq.rows()).filter(|i| !implicit.contains(i)).collect();
        self.shuffle(&mut rows);
        for i in rows {
            let mut fh = h.clone();
            fh.equal(h.ineq.row(i).to_vec(), h.ineq_rhs[i].clone());
            let face = Polyhedron::from_h(fh).ok()?;
            if face.is_empty() {
                continue;
            }
            let verts = face.vertices();
            let centre = face.ri_point().ok()?;
            let style = self.int(0, 3);
            return Some(match (style, verts.is_empty()) {
                (0, _) | (1, true) | (3, true) => Polyhedron::point(centre),
                (1, false) => Polyhedron::point(self.pick(&verts).cloned()?),
                (2, _) => face,
                _ => {
                    let v = self.pick(&verts).cloned()?;
                    Polyhedron::from_points(carrier.ambient_dim(), vec![centre, v]).ok()?
                }
            });
        }
        None
    }

    fn interior_piece(&mut self, carrier: &Polyhedron, a: &[Rat]) -> Option<Polyhedron> {
        let verts = carrier.vertices();
        let Some(v) = self.pick(&verts).cloned() else {
            return Some(Polyhedron::point(a.to_vec()));
        };
        if v[..] == a[..] {
            return Some(Polyhedron::point(a.to_vec()));
        }
        let t = frac(self.int(1, 3), 4);
        let m = lerp(a, &v, &t);
        if self.chance(0.7) {
            Some(Polyhedron::point(m))
        } else {
            let m2 = lerp(a, &v, &(t + frac(1, 8)));
            Polyhedron::from_points(a.len(), vec![m, m2]).ok()
        }
    }

    pub fn set_at(&mut self, a: &[Rat], force_yes: bool) -> PuncturedPolyhedron {
        self.set_full(a, force_yes, false)
    }

    pub fn set_full(&mut self, a: &[Rat], force_yes: bool, full_dim: bool) -> PuncturedPolyhedron {
        let carrier = self.carrier(a, full_dim);
        let removed = self.punctures(&carrier, a, force_yes);
        PuncturedPolyhedron::exact(carrier, removed).expect("consistent shape")
    }

    /// A mapping whose graph has `(x, y)` in the relative interior of its
    /// carrier.
    pub fn map_at(&mut self, x: &[Rat], y: &[Rat], force_yes: bool) -> SvMap {
        let mut a = x.to_vec();
        a.extend_from_slice(y);
        let graph = self.set_at(&a, force_yes);
        SvMap::new(x.len(), y.len(), graph).expect("consistent shape")
    }

    pub fn pieces(&mut self, n: usize) -> Vec<Piece> {
        (0..self.int(1, 3))
            .map(|_| Piece::new(self.ivec(n, -2, 2), q(self.int(-3, 3))))
            .collect()
    }

    pub fn fn_at(&mut self, a: &[Rat], force_yes: bool, full_dim: bool) -> NcFunction {
        let n = a.len();
        let pieces = self.pieces(n);
        let dom = self.set_full(a, force_yes, full_dim);
        NcFunction::new(n, pieces, dom).expect("nonempty domain")
    }

    /// Pieces arranged so that several are active at `x`.
    pub fn tied_pieces(&mut self, x: &[Rat]) -> Vec<Piece> {
        let level = q(self.int(-2, 2));
        (0..self.int(2, 3))
            .map(|_| {
                let c = self.ivec(x.len(), -2, 2);
                let beta = level.clone() - dot(&c, x);
                Piece::new(c, beta)
            })
            .collect()
    }

    /// Rational points of the relative interior of a nonempty `p`.
    pub fn ri_samples(&mut self, p: &Polyhedron, k: usize) -> Vec<RVec> {
        let Ok(c) = p.ri_point() else {
            return Vec::new();
        };
        let gens = p.genrep().clone();
        let mut out = vec![c.clone()];
        for _ in 0..k {
            let t = self.unit_fraction();
            if let Some(v) = self.pick(&gens.points) {
                out.push(lerp(&c, v, &t));
            }
            if let Some(r) = self.pick(&gens.rays) {
                out.push(add(&c, &ncvx_core::linalg::scale(&q(self.int(0, 3)), r)));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Relative interior points, generators, boundary points and points
    /// outside `p`.
    pub fn any_samples(&mut self, p: &Polyhedron, k: usize) -> Vec<RVec> {
        let n = p.ambient_dim();
        let mut out = self.ri_samples(p, k);
        if let Some(c) = out.first().cloned() {
            let gens = p.genrep().clone();
            for v in gens.points.iter().take(6) {
                out.push(v.clone());
                out.push(add(v, &sub(v, &c)));
            }
            for _ in 0..k {
                if let (Some(u), Some(v)) = (self.pick(&gens.points), self.pick(&gens.points)) {
                    out.push(lerp(u, v, &Rat::new(1.into(), 2.into())));
                }
            }
        }
        for _ in 0..k {
            out.push(self.ivec(n, -3, 3));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Sampled members of `omega`.
    pub fn members(&mut self, omega: &PuncturedPolyhedron, k: usize) -> Vec<RVec> {
        let cands = self.any_samples(omega.carrier(), k);
        cands
            .into_iter()
            .filter(|x| omega.membership(x).unwrap_or(false))
            .collect()
    }

    pub fn positive(&mut self) -> Rat {
        frac(self.int(1, 8), self.int(1, 4))
    }

    pub fn one() -> Rat {
        Rat::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncvx_core::text::render_set;

    #[test]
    fn deterministic() {
        let spec = InstanceSpec::with_seed(1).dims(2, 1);
        assert_eq!(render_set("S", &gen_set(&spec)), render_set("S", &gen_set(&spec)));
        let m = render_set("G", gen_map(&spec).graph());
        assert_eq!(m, render_set("G", gen_map(&spec).graph()));
    }

    #[test]
    fn forced_instances_are_nearly_convex() {
        for seed in 0..40 {
            let spec = InstanceSpec::with_seed(seed).dims(1 + (seed as usize % 3), 1);
            let s = gen_set(&spec);
            assert!(s.verdict().is_yes(), "seed {seed}");
            assert!(gen_fn(&spec).is_nearly_convex());
        }
    }

    #[test]
    fn interior_punctures_give_no() {
        let mut g = Gen::new(InstanceSpec::with_seed(3));
        let a = g.anchor(2);
        let c = g.carrier(&a, true);
        let piece = g.interior_piece(&c, &a).unwrap();
        let s = PuncturedPolyhedron::exact(c, vec![piece]).unwrap();
        assert!(s.verdict().is_no());
    }

    #[test]
    fn anchors_are_relative_interior() {
        let mut g = Gen::new(InstanceSpec::with_seed(9).dims(3, 2));
        for _ in 0..30 {
            let a = g.anchor(3);
            let c = g.carrier(&a, false);
            assert!(c.ri_contains(&a));
        }
    }
}
