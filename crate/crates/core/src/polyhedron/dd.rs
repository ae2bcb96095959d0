//! Double description conversion between inequality and generator form.
//!
//! Both directions reduce to one routine, [`cone_generators`], which
//! computes the lineality space and the extreme rays of a homogeneous cone
//! `{x : M x ≤ 0, N x = 0}`. Inequalities are converted by homogenizing the
//! polyhedron; generators are converted through the polar cone.

use crate::linalg::{dot, normalize_direction, nullspace, row_space_basis, zeros};
use crate::scalar::Field;

use super::{GenRep, HRep};
use crate::linalg::Matrix;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct ConeGenerators<F> {
    pub lines: Vec<Vec<F>>,
    pub rays: Vec<Vec<F>>,
}

#[derive(Clone, Debug)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64).max(1)])
    }

    fn insert(&mut self, i: usize) {
        if i / 64 >= self.0.len() {
            self.0.resize(i / 64 + 1, 0);
        }
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains_all(&self, other: &BitSet) -> bool {
        other
            .0
            .iter()
            .enumerate()
            .all(|(i, w)| w & !self.0.get(i).copied().unwrap_or(0) == 0)
    }
}

/// Lineality basis and extreme rays of `{x ∈ F^k : ineq x ≤ 0, eq x = 0}`.
pub(crate) fn cone_generators<F: Field>(
    k: usize,
    ineq: &[Vec<F>],
    eq: &[Vec<F>],
) -> ConeGenerators<F> {
    let mut all: Vec<Vec<F>> = ineq.to_vec();
    all.extend(eq.iter().cloned());
    let lines = row_space_basis(&nullspace(&all, k), k);

    let mut ortho: Vec<Vec<F>> = eq.to_vec();
    ortho.extend(lines.iter().cloned());
    let basis = nullspace(&ortho, k);
    let q = basis.len();

    let reduced: Vec<Vec<F>> = ineq
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b)).collect::<Vec<F>>())
        .filter(|g| g.iter().any(|v| !v.is_zero()))
        .collect();

    let mut rays: Vec<Vec<F>> = pointed_rays(q, &reduced)
        .into_iter()
        .map(|z| {
            let mut x = zeros::<F>(k);
            for (zj, bj) in z.iter().zip(&basis) {
                if zj.is_zero() {
                    continue;
                }
                for (xi, bi) in x.iter_mut().zip(bj) {
                    *xi = xi.clone() + zj.clone() * bi.clone();
                }
            }
            normalize_direction(&x)
        })
        .collect();
    rays.sort();
    rays.dedup();
    ConeGenerators { lines, rays }
}

/// Extreme rays of the pointed cone `{z ∈ F^q : g z ≤ 0}` (`rank g = q`).
fn pointed_rays<F: Field>(q: usize, g: &[Vec<F>]) -> Vec<Vec<F>> {
    if q == 0 {
        return Vec::new();
    }
    // Greedy choice of q independent rows.
    let mut chosen: Vec<usize> = Vec::new();
    let mut chosen_rows: Vec<Vec<F>> = Vec::new();
    for (i, row) in g.iter().enumerate() {
        let mut trial = chosen_rows.clone();
        trial.push(row.clone());
        if row_space_basis(&trial, q).len() > chosen_rows.len() {
            chosen.push(i);
            chosen_rows.push(row.clone());
            if chosen.len() == q {
                break;
            }
        }
    }
    assert_eq!(chosen.len(), q, "cone is not pointed");

    // Columns of -B⁻¹ are the rays of the initial simplicial cone.
    let aug: Vec<Vec<F>> = chosen_rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..q).map(|j| if i == j { F::one() } else { F::zero() }));
            v
        })
        .collect();
    let red = crate::linalg::rref_partial(aug, q);
    let mut rays: Vec<Vec<F>> = Vec::with_capacity(q);
    let mut zero_sets: Vec<BitSet> = Vec::with_capacity(q);
    for j in 0..q {
        let col: Vec<F> = (0..q).map(|i| -red.rows[i][q + j].clone()).collect();
        rays.push(normalize_direction(&col));
        let mut z = BitSet::new(g.len());
        for (pos, &row) in chosen.iter().enumerate() {
            if pos != j {
                z.insert(row);
            }
        }
        zero_sets.push(z);
    }

    let is_chosen = {
        let mut v = vec![false; g.len()];
        for &c in &chosen {
            v[c] = true;
        }
        v
    };
    for (i, row) in g.iter().enumerate() {
        if is_chosen[i] {
            continue;
        }
        let vals: Vec<F> = rays.iter().map(|r| dot(row, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].is_positive()).collect();
        if pos.is_empty() {
            for r in 0..rays.len() {
                if vals[r].is_zero() {
                    zero_sets[r].insert(i);
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&r| vals[r].is_negative()).collect();
        let mut new_rays = Vec::new();
        let mut new_sets = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = zero_sets[p].and(&zero_sets[n]);
                if q >= 2 && common.count() < q - 2 {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|r| r == p || r == n || !zero_sets[r].contains_all(&common));
                if !adjacent {
                    continue;
                }
                let comb: Vec<F> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(rn, rp)| vals[p].clone() * rn.clone() - vals[n].clone() * rp.clone())
                    .collect();
                let mut z = common;
                z.insert(i);
                new_rays.push(normalize_direction(&comb));
                new_sets.push(z);
            }
        }
        let mut kept_rays = Vec::new();
        let mut kept_sets = Vec::new();
        for (r, (ray, mut z)) in rays.into_iter().zip(zero_sets).enumerate() {
            if vals[r].is_positive() {
                continue;
            }
            if vals[r].is_zero() {
                z.insert(i);
            }
            kept_rays.push(ray);
            kept_sets.push(z);
        }
        kept_rays.extend(new_rays);
        kept_sets.extend(new_sets);
        rays = kept_rays;
        zero_sets = kept_sets;
    }
    rays
}

/// Generators of `{x : A x ≤ b, E x = d}`.
pub(crate) fn h_to_v<F: Field>(h: &HRep<F>) -> GenRep<F> {
    let n = h.ambient();
    let k = n + 1;
    let mut ineq: Vec<Vec<F>> = h
        .ineq
        .row_iter()
        .zip(&h.ineq_rhs)
        .map(|(a, b)| {
            let mut v = a.to_vec();
            v.push(-b.clone());
            v
        })
        .collect();
    let mut t_nonneg = zeros(k);
    t_nonneg[n] = -F::one();
    ineq.push(t_nonneg);
    let eq: Vec<Vec<F>> = h
        .eq
        .row_iter()
        .zip(&h.eq_rhs)
        .map(|(a, b)| {
            let mut v = a.to_vec();
            v.push(-b.clone());
            v
        })
        .collect();
    let gens = cone_generators(k, &ineq, &eq);
    let mut points = Vec::new();
    let mut rays = Vec::new();
    for r in gens.rays {
        let t = r[n].clone();
        if t.is_positive() {
            points.push(r[..n].iter().map(|v| v.clone() / t.clone()).collect::<Vec<F>>());
        } else {
            rays.push(normalize_direction(&r[..n]));
        }
    }
    if points.is_empty() {
        return GenRep::empty(n);
    }
    let lines: Vec<Vec<F>> = gens.lines.iter().map(|l| l[..n].to_vec()).collect();
    let lines = row_space_basis(&lines, n);
    points.sort();
    points.dedup();
    rays.sort();
    rays.dedup();
    GenRep {
        ambient: n,
        points,
        rays,
        lines,
    }
}

/// Irredundant inequality description of a generator set.
pub(crate) fn v_to_h<F: Field>(v: &GenRep<F>) -> HRep<F> {
    let n = v.ambient;
    if v.points.is_empty() {
        return HRep::empty_set(n);
    }
    let k = n + 1;
    let lift = |x: &[F], t: F| {
        let mut y = x.to_vec();
        y.push(t);
        y
    };
    let ineq: Vec<Vec<F>> = v
        .points
        .iter()
        .map(|p| lift(p, F::one()))
        .chain(v.rays.iter().map(|r| lift(r, F::zero())))
        .collect();
    let eq: Vec<Vec<F>> = v.lines.iter().map(|l| lift(l, F::zero())).collect();
    let polar = cone_generators(k, &ineq, &eq);

    let mut rows: Vec<(Vec<F>, F)> = polar
        .rays
        .iter()
        .filter(|h| {
            v.points
                .iter()
                .any(|p| (dot(&h[..n], p) + h[n].clone()).is_zero())
        })
        .map(|h| (h[..n].to_vec(), -h[n].clone()))
        .filter(|(a, _)| a.iter().any(|x| !x.is_zero()))
        .collect();
    rows.sort();
    rows.dedup();
    let mut ineqm = Matrix::empty(n);
    let mut ineq_rhs = Vec::new();
    for (a, b) in rows {
        ineqm.push_row(a);
        ineq_rhs.push(b);
    }
    let mut eqm = Matrix::empty(n);
    let mut eq_rhs = Vec::new();
    for h in &polar.lines {
        eqm.push_row(h[..n].to_vec());
        eq_rhs.push(-h[n].clone());
    }
    HRep {
        ineq: ineqm,
        ineq_rhs,
        eq: eqm,
        eq_rhs,
    }
}
