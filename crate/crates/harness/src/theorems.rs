//! One randomized trial per theorem id.

use ncvx_core::gendiff::{
    coderivative, coderivative_chain_rule, coderivative_intersection_rule, coderivative_sum_rule,
    epi_normal_properties, normal_cone_intersection, normal_cone_inverse_image, subdiff_chain_affine,
    subdiff_max_rule, subdiff_sum_rule, subdifferential,
};
use ncvx_core::linalg::{add, dot, fmt_vec, is_zero_vec, lerp, neg, sub, zeros};
use ncvx_core::ncset::{Separation, Verdict};
use ncvx_core::text::Workspace;
use ncvx_core::{Fidelity, 
    Error, GenRep, HRep, NcFunction, Piece, Polyhedron, PuncturedPolyhedron, RMat, RVec, Rat, SvMap,
};
use num_traits::{One, Signed, Zero};

use crate::examples;
use crate::gen::{Gen, InstanceSpec};
use crate::oracle::{block, in_normal_cone, is_subgradient, ri_contains, ri_exists, LinSys};

pub const THEOREM_IDS: [&str; 29] = [
    "RI_LINEAR_IMAGE",
    "RI_INTERSECTION",
    "SEGMENT",
    "RI_CHARACTERIZATION",
    "SEPARATION_IFF",
    "GRAPH_RI",
    "EPI_RI",
    "VALUE_NEARLY_CONVEX",
    "DIM1_CONVEX",
    "CO_SANDWICH",
    "F_NEAR_CO",
    "LIFT",
    "SUM_MAP",
    "SUM_FN",
    "CHAIN_MAP",
    "AFFINE_PRE",
    "IMAGES",
    "INTERSECT_MAP",
    "MAX_FN",
    "NCONE_INTERSECT",
    "CODERIV_SUM",
    "SUBDIFF_VIA_CODERIV",
    "EPI_NORMAL_PROPS",
    "SUBDIFF_SUM",
    "CODERIV_CHAIN",
    "AFFINE_SUBDIFF",
    "INV_IMAGE_NCONE",
    "CODERIV_INTERSECT",
    "SUBDIFF_MAX",
];

/// Ids whose trials require the qualification condition to fail.
pub const NEGATIVE_IDS: [&str; 4] = [
    "SUM_FN_NEGATIVE",
    "SUM_MAP_NEGATIVE",
    "VALUE_NEGATIVE",
    "NCONE_INTERSECT_NEGATIVE",
];

pub(crate) enum Outcome {
    Pass,
    Skip(String),
    Fail(String),
}

pub(crate) type TrialResult = Result<Outcome, Error>;
pub(crate) type TrialFn = fn(&mut Ctx) -> TrialResult;

/// State of one trial: the random stream, the drawn dimensions and the
/// objects recorded for replay.
pub(crate) struct Ctx {
    pub g: Gen,
    pub n: usize,
    pub p: usize,
    pub trial: usize,
    pub ws: Workspace,
    pub notes: Vec<String>,
}

impl Ctx {
    pub fn new(spec: &InstanceSpec, id: &str, trial: usize) -> Self {
        let mut g = Gen::for_trial(spec, id, trial);
        let n = g.int(1, spec.n as i64) as usize;
        let p = g.int(1, spec.p as i64) as usize;
        Self {
            g,
            n,
            p,
            trial,
            ws: Workspace::new(),
            notes: Vec::new(),
        }
    }

    fn set(&mut self, name: &str, s: &PuncturedPolyhedron) {
        self.ws.sets.insert(name.to_string(), s.clone());
    }

    fn map(&mut self, name: &str, m: &SvMap) {
        self.ws.maps.insert(name.to_string(), m.clone());
    }

    fn func(&mut self, name: &str, f: &NcFunction) {
        self.ws.functions.insert(name.to_string(), f.clone());
    }

    fn note(&mut self, name: &str, v: &[Rat]) {
        self.notes.push(format!("{name} = {}", fmt_vec(v)));
    }

    fn note_matrix(&mut self, name: &str, m: &RMat) {
        let rows: Vec<String> = m.row_iter().map(fmt_vec).collect();
        self.notes.push(format!("{name} = [{}]", rows.join(", ")));
    }

    /// Replayable workbench text for the recorded objects.
    pub fn instance(&self, header: &str) -> String {
        let mut out = format!("# {header}\n");
        for n in &self.notes {
            out.push_str("# ");
            out.push_str(n);
            out.push('\n');
        }
        out.push('\n');
        out.push_str(&self.ws.render());
        out
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Ok(Outcome::Fail(format!($($msg)+)));
        }
    };
}

macro_rules! skip_on {
    ($e:expr, $pat:pat) => {
        match $e {
            Err($pat) => return Ok(Outcome::Skip(stringify!($pat).to_string())),
            other => other?,
        }
    };
}

pub(crate) fn lookup(id: &str) -> Option<TrialFn> {
    let f: TrialFn = match id {
        "RI_LINEAR_IMAGE" => ri_linear_image,
        "RI_INTERSECTION" => ri_intersection,
        "SEGMENT" => segment,
        "RI_CHARACTERIZATION" => ri_characterization,
        "SEPARATION_IFF" => separation_iff,
        "GRAPH_RI" => graph_ri,
        "EPI_RI" => epi_ri,
        "VALUE_NEARLY_CONVEX" => value_nearly_convex,
        "DIM1_CONVEX" => dim1_convex,
        "CO_SANDWICH" => co_sandwich,
        "F_NEAR_CO" => f_near_co,
        "LIFT" => lift,
        "SUM_MAP" => sum_map,
        "SUM_FN" => sum_fn,
        "CHAIN_MAP" => chain_map,
        "AFFINE_PRE" => affine_pre,
        "IMAGES" => images,
        "INTERSECT_MAP" => intersect_map,
        "MAX_FN" => max_fn,
        "NCONE_INTERSECT" => ncone_intersect,
        "CODERIV_SUM" => coderiv_sum,
        "SUBDIFF_VIA_CODERIV" => subdiff_via_coderiv,
        "EPI_NORMAL_PROPS" => epi_normal_props,
        "SUBDIFF_SUM" => subdiff_sum,
        "CODERIV_CHAIN" => coderiv_chain,
        "AFFINE_SUBDIFF" => affine_subdiff,
        "INV_IMAGE_NCONE" => inv_image_ncone,
        "CODERIV_INTERSECT" => coderiv_intersect,
        "SUBDIFF_MAX" => subdiff_max,
        "SUM_FN_NEGATIVE" => sum_fn_negative,
        "SUM_MAP_NEGATIVE" => sum_map_negative,
        "VALUE_NEGATIVE" => value_negative,
        "NCONE_INTERSECT_NEGATIVE" => ncone_intersect_negative,
        _ => return None,
    };
    Some(f)
}

fn q(v: i64) -> Rat {
    Rat::from_integer(v.into())
}

fn frac(p: i64, d: i64) -> Rat {
    Rat::new(p.into(), d.into())
}

fn cat(a: &[Rat], b: &[Rat]) -> RVec {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn identity(n: usize) -> RMat {
    RMat::identity(n)
}

fn one_ray(n: usize, r: &[Rat]) -> GenRep {
    GenRep {
        ambient: n,
        points: Vec::new(),
        rays: vec![r.to_vec()],
        lines: Vec::new(),
    }
}

/// Rays of `p` with each line listed in both directions.
fn directions(p: &Polyhedron) -> Vec<RVec> {
    let g = p.genrep();
    let mut out = g.rays.clone();
    for l in &g.lines {
        out.push(l.clone());
        out.push(neg(l));
    }
    out
}

fn rows_eq(m: &RMat, y: &[Rat]) -> Vec<(RVec, Rat)> {
    m.row_iter().zip(y).map(|(a, b)| (a.to_vec(), b.clone())).collect()
}

fn opt_add(a: Option<Rat>, b: Option<Rat>) -> Option<Rat> {
    Some(a? + b?)
}

fn ri_samples_both(c: &mut Ctx, a: &Polyhedron, b: &Polyhedron) -> Vec<RVec> {
    let mut s = c.g.any_samples(a, 2);
    s.extend(c.g.any_samples(b, 2));
    s.sort();
    s.dedup();
    s
}

fn ri_linear_image(c: &mut Ctx) -> TrialResult {
    let (n, p) = (c.n, c.p);
    let a = c.g.anchor(n);
    let omega = c.g.set_at(&a, true);
    let m = c.g.matrix(p, n);
    c.set("Omega", &omega);
    c.note_matrix("A", &m);
    let img = omega.linear_image(&m)?;
    ensure!(img.verdict().is_yes(), "A(Omega) is not nearly convex");
    let pc = omega.carrier();
    let ic = img.carrier();
    let id = identity(n);
    let z = zeros::<Rat>(n);
    for y in &ic.genrep().points {
        let mut s = LinSys::new(n);
        s.require(pc, &id, &z, false);
        for (row, rhs) in rows_eq(&m, y) {
            s.equal(row, rhs);
        }
        ensure!(s.feasible(), "image generator {} has no preimage", fmt_vec(y));
    }
    for r in directions(ic) {
        let mut s = LinSys::new(n);
        s.require(pc, &id, &z, true);
        for (row, rhs) in rows_eq(&m, &r) {
            s.equal(row, rhs);
        }
        ensure!(s.feasible(), "image direction {} has no preimage", fmt_vec(&r));
    }
    for x in &pc.genrep().points {
        ensure!(ic.contains(&m.mul_vec(x)), "A x missing from the image for x = {}", fmt_vec(x));
    }
    for r in directions(pc) {
        ensure!(
            ic.hrep().contains_generators(&one_ray(p, &m.mul_vec(&r))),
            "A r does not recede in the image"
        );
    }
    for x in c.g.ri_samples(pc, 3) {
        let y = m.mul_vec(&x);
        ensure!(ri_contains(ic, &y), "A x ∉ ri A(Omega) for x = {}", fmt_vec(&x));
    }
    for y in c.g.ri_samples(ic, 3) {
        ensure!(
            ri_exists(n, &[(pc, id.clone(), z.clone())], &rows_eq(&m, &y)),
            "{} ∈ ri A(Omega) has no preimage in ri Omega",
            fmt_vec(&y)
        );
    }
    Ok(Outcome::Pass)
}

fn ri_intersection(c: &mut Ctx) -> TrialResult {
    let n = c.n;
    let a = c.g.anchor(n);
    let o1 = c.g.set_at(&a, true);
    let b = c.g.maybe_shift(&a, 0.8);
    let o2 = c.g.set_at(&b, true);
    c.set("Omega1", &o1);
    c.set("Omega2", &o2);
    let (p1, p2) = (o1.carrier(), o2.carrier());
    let id = identity(n);
    let z = zeros::<Rat>(n);
    let meet = ri_exists(n, &[(p1, id.clone(), z.clone()), (p2, id, z)], &[]);
    let (res, rep) = o1.intersect(&o2)?;
    ensure!(rep.qualification.holds == meet, "qualification disagrees with the oracle");
    if !meet {
        return Ok(Outcome::Skip("ri Omega1 ∩ ri Omega2 = ∅".into()));
    }
    ensure!(rep.ri_certified, "ri of the intersection not certified");
    ensure!(res.verdict().is_yes(), "intersection is not nearly convex");
    let ri = res.ri_description()?;
    let mut samples = ri_samples_both(c, p1, p2);
    samples.extend(c.g.ri_samples(res.carrier(), 3));
    for x in samples {
        let want = ri_contains(p1, &x) && ri_contains(p2, &x);
        ensure!(ri.satisfied_by(&x) == want, "ri law fails at {}", fmt_vec(&x));
    }
    Ok(Outcome::Pass)
}

fn segment(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(c.n);
    let omega = c.g.set_at(&a, true);
    c.set("Omega", &omega);
    let pc = omega.carrier().clone();
    let gens: Vec<RVec> = pc.genrep().points.iter().take(6).cloned().collect();
    for a0 in c.g.ri_samples(&pc, 2) {
        for b in &gens {
            let mut ts = vec![q(0), frac(1, 4), frac(1, 2), frac(3, 4), frac(15, 16)];
            ts.push(c.g.unit_fraction());
            for t in ts {
                let x = lerp(&a0, b, &t);
                ensure!(
                    omega.ri_member(&x)? && omega.membership(&x)?,
                    "segment point {} from a = {} to b = {} left ri",
                    fmt_vec(&x),
                    fmt_vec(&a0),
                    fmt_vec(b)
                );
            }
        }
    }
    Ok(Outcome::Pass)
}

fn ri_characterization(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(c.n);
    let omega = c.g.set_at(&a, true);
    c.set("Omega", &omega);
    let pc = omega.carrier().clone();
    let verts: Vec<RVec> = pc.genrep().points.iter().take(6).cloned().collect();
    for y0 in c.g.ri_samples(&pc, 2) {
        for x in &verts {
            let d = sub(&y0, x);
            if is_zero_vec(&d) {
                continue;
            }
            let mut t = Rat::one();
            let mut found = false;
            for _ in 0..64 {
                let z = add(&y0, &ncvx_core::linalg::scale(&t, &d));
                if ri_contains(&pc, &z) && omega.membership(&z)? {
                    found = true;
                    break;
                }
                t = t / q(2);
            }
            ensure!(found, "no z beyond y0 = {} away from x = {}", fmt_vec(&y0), fmt_vec(x));
        }
    }
    Ok(Outcome::Pass)
}

fn separation_iff(c: &mut Ctx) -> TrialResult {
    let n = c.n;
    let a = c.g.anchor(n);
    let o1 = c.g.set_at(&a, true);
    let b = if c.g.chance(0.4) {
        a.clone()
    } else {
        let d = c.g.ivec(n, -4, 4);
        add(&a, &d)
    };
    let o2 = c.g.set_at(&b, true);
    c.set("Omega1", &o1);
    c.set("Omega2", &o2);
    let (p1, p2) = (o1.carrier(), o2.carrier());
    let id = identity(n);
    let z = zeros::<Rat>(n);
    let meet = ri_exists(n, &[(p1, id.clone(), z.clone()), (p2, id, z)], &[]);
    match o1.properly_separate(&o2)? {
        Separation::Separable {
            v,
            sup1,
            inf2,
            strict_pair: (s1, s2),
        } => {
            ensure!(!meet, "separated sets with a common ri point");
            ensure!(!is_zero_vec(&v), "zero separator");
            ensure!(sup1 <= inf2, "sup {sup1} > inf {inf2}");
            let g1 = p1.genrep();
            let g2 = p2.genrep();
            ensure!(g1.points.iter().all(|g| dot(&v, g) <= sup1), "point of Omega1 above sup");
            ensure!(g2.points.iter().all(|g| dot(&v, g) >= inf2), "point of Omega2 below inf");
            ensure!(g1.rays.iter().all(|r| !dot(&v, r).is_positive()), "ray of Omega1 escapes");
            ensure!(g2.rays.iter().all(|r| !dot(&v, r).is_negative()), "ray of Omega2 escapes");
            ensure!(
                g1.lines.iter().chain(&g2.lines).all(|l| dot(&v, l).is_zero()),
                "line not orthogonal to the separator"
            );
            ensure!(o1.membership(&s1)? && o2.membership(&s2)?, "strict pair not in the sets");
            ensure!(dot(&v, &s1) < dot(&v, &s2), "strict pair not strictly separated");
        }
        Separation::NotSeparable { common_ri_point } => {
            ensure!(meet, "not separable although ri sets are disjoint");
            ensure!(
                ri_contains(p1, &common_ri_point) && ri_contains(p2, &common_ri_point),
                "common point {} not in both ri",
                fmt_vec(&common_ri_point)
            );
        }
    }
    Ok(Outcome::Pass)
}

fn graph_ri(c: &mut Ctx) -> TrialResult {
    let (n, p) = (c.n, c.p);
    let (ax, ay) = (c.g.anchor(n), c.g.anchor(p));
    let f = c.g.map_at(&ax, &ay, true);
    c.map("F", &f);
    let gc = f.graph().carrier().clone();
    let full = gc.dim() == (n + p) as isize;
    let dom = f.domain_carrier()?;
    for z in c.g.any_samples(&gc, 3) {
        let (x, y) = z.split_at(n);
        let lhs = f.ri_graph_member(x, y)?;
        let direct = ri_contains(&gc, &z);
        ensure!(lhs == direct, "ri graph formula fails at {}", fmt_vec(&z));
        if full && dom.contains(x) {
            let slice = gc.slice_leading(x)?;
            let int_rhs = dom.dim() == n as isize
                && ri_contains(&dom, x)
                && slice.dim() == p as isize
                && ri_contains(&slice, y);
            ensure!(direct == int_rhs, "interior formula fails at {}", fmt_vec(&z));
        }
    }
    Ok(Outcome::Pass)
}

fn epi_ri(c: &mut Ctx) -> TrialResult {
    let n = c.n;
    let a = c.g.anchor(n);
    let f = c.g.fn_at(&a, true, false);
    c.func("f", &f);
    let e = f.epigraph_carrier();
    let d = f.dom().carrier().clone();
    for x in c.g.any_samples(&d, 3) {
        if !d.contains(&x) {
            continue;
        }
        let base = f.base(&x);
        for delta in [q(-1), q(0), frac(1, 2), q(3)] {
            let lambda = base.clone() + delta;
            let z = cat(&x, std::slice::from_ref(&lambda));
            ensure!(
                ri_contains(&e, &z) == f.ri_epi_member(&x, &lambda)?,
                "ri epigraph formula fails at {}",
                fmt_vec(&z)
            );
        }
    }
    Ok(Outcome::Pass)
}

fn value_nearly_convex(c: &mut Ctx) -> TrialResult {
    let (ax, ay) = (c.g.anchor(c.n), c.g.anchor(c.p));
    let f = c.g.map_at(&ax, &ay, true);
    c.map("F", &f);
    let d = f.domain_carrier()?;
    for x in c.g.ri_samples(&d, 3) {
        let v = f.value(&x)?;
        ensure!(!v.carrier_is_empty(), "empty value at {}", fmt_vec(&x));
        ensure!(v.verdict().is_yes(), "F({}) is not nearly convex", fmt_vec(&x));
    }
    Ok(Outcome::Pass)
}

fn dim1_convex(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(1);
    let force = c.g.chance(0.5);
    let f = c.g.fn_at(&a, force, false);
    c.func("f", &f);
    let dom = f.dom().clone();
    match dom.verdict().clone() {
        Verdict::Yes { .. } => {
            let co = f.co_f()?;
            ensure!(f.epigraph_set().near_equal(co.epigraph_set())?, "epi f not nearly equal to epi co f");
            let mem = c.g.members(&dom, 4);
            for _ in 0..8 {
                let (Some(x), Some(u)) = (c.g.pick(&mem).cloned(), c.g.pick(&mem).cloned()) else {
                    break;
                };
                let t = c.g.unit_fraction();
                let z = lerp(&x, &u, &t);
                let fx = f.evaluate(&x)?.expect("member");
                let fu = f.evaluate(&u)?.expect("member");
                let Some(fz) = f.evaluate(&z)? else {
                    return Ok(Outcome::Fail(format!("{} outside dom f", fmt_vec(&z))));
                };
                let bound = (Rat::one() - t.clone()) * fx + t * fu;
                ensure!(fz <= bound, "convexity inequality fails at {}", fmt_vec(&z));
            }
            for x in c.g.ri_samples(dom.carrier(), 3) {
                ensure!(f.evaluate(&x)? == Some(f.base(&x)), "f differs from its base on ri dom");
            }
        }
        Verdict::No { witness, .. } => {
            ensure!(!dom.membership(&witness)?, "No witness is a member");
            let w = witness[0].clone();
            let mut steps: Vec<Rat> = (1..=64).map(|k| frac(k, 16)).collect();
            steps.extend((1..=30).map(|k| Rat::one() / Rat::from_integer(num_traits::pow(2i64, k).into())));
            let mut left = false;
            let mut right = false;
            for s in &steps {
                left |= dom.membership(&[w.clone() - s.clone()])?;
                right |= dom.membership(&[w.clone() + s.clone()])?;
            }
            ensure!(left && right, "no members on both sides of the witness {w}");
        }
        Verdict::Unsupported { reason } => return Ok(Outcome::Skip(reason)),
    }
    Ok(Outcome::Pass)
}

fn co_sandwich(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(c.n);
    let f = c.g.fn_at(&a, true, false);
    c.func("f", &f);
    let co = f.co_f()?;
    let e = f.epigraph_carrier();
    let ce = co.epigraph_carrier();
    ensure!(e.set_equal(&ce)?, "closures of epi f and epi co f differ");
    for x in c.g.members(f.dom(), 3) {
        let fx = f.evaluate(&x)?.expect("member");
        for delta in [q(0), frac(1, 3), q(2)] {
            let z = cat(&x, &[fx.clone() + delta]);
            ensure!(ce.contains(&z), "epi f point {} outside epi co f", fmt_vec(&z));
        }
    }
    for z in c.g.ri_samples(&ce, 3) {
        ensure!(f.epigraph_set().membership(&z)?, "ri epi co f point {} not in epi f", fmt_vec(&z));
    }
    Ok(Outcome::Pass)
}

fn f_near_co(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(c.n);
    let force = c.g.chance(0.5);
    let f = c.g.fn_at(&a, force, false);
    c.func("f", &f);
    if f.is_nearly_convex() {
        let co = f.co_f()?;
        ensure!(f.epigraph_set().near_equal(co.epigraph_set())?, "f not nearly equal to co f");
    } else {
        ensure!(matches!(f.co_f(), Err(Error::NotNearlyConvex(_))), "co f built for a non nearly convex f");
        let witness = match f.epigraph_set().verdict().clone() {
            Verdict::No { witness, .. } => witness,
            Verdict::Unsupported { reason } => return Ok(Outcome::Skip(reason)),
            v => return Ok(Outcome::Fail(format!("epigraph verdict {}", v.label()))),
        };
        ensure!(ri_contains(&f.epigraph_carrier(), &witness), "witness not in ri of the closure");
        ensure!(!f.epigraph_set().membership(&witness)?, "witness is in epi f");
    }
    Ok(Outcome::Pass)
}

fn lift(c: &mut Ctx) -> TrialResult {
    let n = c.n;
    let a = c.g.anchor(n);
    let force = c.g.chance(0.6);
    let f = c.g.fn_at(&a, force, false);
    c.func("f", &f);
    let line = Polyhedron::full_space(1);
    let pieces: Vec<Piece> = f
        .pieces()
        .iter()
        .map(|p| Piece::new(cat(&p.c, &[Rat::one()]), p.beta.clone()))
        .collect();
    let dom = PuncturedPolyhedron::exact(
        f.dom().carrier().product(&line),
        f.dom().removed().iter().map(|d| d.product(&line)).collect(),
    )?;
    let phi = NcFunction::new(n + 1, pieces, dom)?;
    ensure!(phi.is_nearly_convex() == f.is_nearly_convex(), "near convexity of phi differs from f");
    if f.is_nearly_convex() {
        let lifted = f.lift_alpha()?;
        ensure!(lifted.is_nearly_convex(), "lifted function not nearly convex");
        for x in c.g.any_samples(f.dom().carrier(), 2) {
            for alpha in [q(-2), q(0), frac(1, 3), q(5)] {
                let z = cat(&x, std::slice::from_ref(&alpha));
                let want = f.evaluate(&x)?.map(|v| v + alpha.clone());
                ensure!(lifted.evaluate(&z)? == want, "phi({}) ≠ f + alpha", fmt_vec(&z));
                ensure!(phi.evaluate(&z)? == want, "reference phi disagrees at {}", fmt_vec(&z));
            }
        }
    } else {
        ensure!(matches!(f.lift_alpha(), Err(Error::NotNearlyConvex(_))), "lift built for a non nearly convex f");
    }
    Ok(Outcome::Pass)
}

/// Generator law for graphs of sums: every generator `(x, y)` of the sum
/// carrier splits as `y = y1 + y2` over the two carriers.
fn check_sum_generators(s: &Polyhedron, c1: &Polyhedron, c2: &Polyhedron, n: usize, p: usize) -> Option<String> {
    let mut m1 = RMat::zeros(n + p, 2 * p);
    let mut m2 = RMat::zeros(n + p, 2 * p);
    for i in 0..p {
        m1[(n + i, i)] = Rat::one();
        m2[(n + i, p + i)] = Rat::one();
    }
    let gens = s.genrep();
    let mut todo: Vec<(RVec, bool)> = gens.points.iter().map(|z| (z.clone(), false)).collect();
    todo.extend(directions(s).into_iter().map(|z| (z, true)));
    for (z, homogeneous) in todo {
        let (x, y) = z.split_at(n);
        let off = cat(x, &zeros::<Rat>(p));
        let mut sys = LinSys::new(2 * p);
        sys.require(c1, &m1, &off, homogeneous);
        sys.require(c2, &m2, &off, homogeneous);
        for i in 0..p {
            let mut row = zeros::<Rat>(2 * p);
            row[i] = Rat::one();
            row[p + i] = Rat::one();
            sys.equal(row, y[i].clone());
        }
        if !sys.feasible() {
            return Some(format!("sum generator {} does not split", fmt_vec(&z)));
        }
    }
    None
}

fn sum_map(c: &mut Ctx) -> TrialResult {
    let (n, p) = (c.n, c.p);
    let ax = c.g.anchor(n);
    let (y1, y2) = (c.g.anchor(p), c.g.anchor(p));
    let ax2 = c.g.maybe_shift(&ax, 0.85);
    let f1 = c.g.map_at(&ax, &y1, true);
    let f2 = c.g.map_at(&ax2, &y2, true);
    c.map("F1", &f1);
    c.map("F2", &f2);
    let qs = skip_on!(f1.sum(&f2), Error::EmptySet);
    if !qs.qualification.holds {
        return Ok(Outcome::Skip("ri(dom F1) ∩ ri(dom F2) = ∅".into()));
    }
    let s = qs.value;
    ensure!(s.graph().verdict().is_yes(), "F1 + F2 is not nearly convex");
    if let Some(msg) = check_sum_generators(s.graph().carrier(), f1.graph().carrier(), f2.graph().carrier(), n, p) {
        return Ok(Outcome::Fail(msg));
    }
    if let Some(w) = &qs.qualification.witness {
        let v1 = f1.value(w)?.ri_point()?;
        let v2 = f2.value(w)?.ri_point()?;
        ensure!(
            s.graph().ri_member(&cat(w, &add(&v1, &v2)))?,
            "y1 + y2 missing from ri (F1 + F2)({})",
            fmt_vec(w)
        );
    }
    Ok(Outcome::Pass)
}

fn sum_fn(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(c.n);
    let f1 = c.g.fn_at(&a, true, false);
    let b = c.g.maybe_shift(&a, 0.85);
    let f2 = c.g.fn_at(&b, true, false);
    c.func("f1", &f1);
    c.func("f2", &f2);
    let qs = skip_on!(f1.add(&f2), Error::EmptySet);
    if !qs.qualification.holds {
        return Ok(Outcome::Skip("ri(dom f1) ∩ ri(dom f2) = ∅".into()));
    }
    let s = qs.value;
    ensure!(s.is_nearly_convex(), "f1 + f2 is not nearly convex");
    for x in ri_samples_both(c, f1.dom().carrier(), f2.dom().carrier()) {
        let want = opt_add(f1.evaluate(&x)?, f2.evaluate(&x)?);
        ensure!(s.evaluate(&x)? == want, "(f1 + f2)({}) wrong", fmt_vec(&x));
    }
    Ok(Outcome::Pass)
}

/// Every generator `(x, z)` of a composite carrier has a middle point `y`
/// with `(x, y) ∈ cl gph F` and `(y, z) ∈ cl gph G`.
fn check_compose_generators(h: &Polyhedron, cf: &Polyhedron, cg: &Polyhedron, n: usize, p: usize) -> Option<String> {
    let r = h.ambient_dim() - n;
    let mf = {
        let mut m = RMat::zeros(n + p, p);
        for i in 0..p {
            m[(n + i, i)] = Rat::one();
        }
        m
    };
    let mg = block(p + r, 0, p).transpose();
    let mut todo: Vec<(RVec, bool)> = h.genrep().points.iter().map(|z| (z.clone(), false)).collect();
    todo.extend(directions(h).into_iter().map(|z| (z, true)));
    for (w, homogeneous) in todo {
        let (x, z) = w.split_at(n);
        let mut sys = LinSys::new(p);
        sys.require(cf, &mf, &cat(x, &zeros::<Rat>(p)), homogeneous);
        sys.require(cg, &mg, &cat(&zeros::<Rat>(p), z), homogeneous);
        if !sys.feasible() {
            return Some(format!("composite generator {} has no middle point", fmt_vec(&w)));
        }
    }
    None
}

fn chain_map(c: &mut Ctx) -> TrialResult {
    let (n, p) = (c.n, c.p);
    let r = c.g.int(1, c.g.spec.p as i64) as usize;
    let (a, b, z) = (c.g.anchor(n), c.g.anchor(p), c.g.anchor(r));
    let b2 = c.g.maybe_shift(&b, 0.85);
    let f = c.g.map_at(&a, &b, true);
    let g = c.g.map_at(&b2, &z, true);
    c.map("F", &f);
    c.map("G", &g);
    let qc = skip_on!(g.compose(&f), Error::EmptySet);
    if !qc.qualification.holds {
        return Ok(Outcome::Skip("ri(rge F) ∩ ri(dom G) = ∅".into()));
    }
    let h = qc.value;
    ensure!(h.graph().verdict().is_yes(), "G ∘ F is not nearly convex");
    if let Some(msg) = check_compose_generators(h.graph().carrier(), f.graph().carrier(), g.graph().carrier(), n, p) {
        return Ok(Outcome::Fail(msg));
    }
    if b2 == b {
        ensure!(h.graph().ri_member(&cat(&a, &z))?, "anchor pair missing from G ∘ F");
    }
    Ok(Outcome::Pass)
}

/// `(A, b, x̄)` with `A x̄ + b` at the anchor of `g` most of the time.
fn affine_setup(c: &mut Ctx, ag: &[Rat]) -> (RMat, RVec, RVec) {
    let (n, m) = (c.n, ag.len());
    let a = c.g.matrix(m, n);
    let x0 = c.g.anchor(n);
    let b = if c.g.chance(0.85) {
        sub(ag, &a.mul_vec(&x0))
    } else {
        c.g.ivec(m, -3, 3)
    };
    c.note_matrix("A", &a);
    c.note("b", &b);
    c.note("x", &x0);
    (a, b, x0)
}

fn affine_pre(c: &mut Ctx) -> TrialResult {
    let ag = c.g.anchor(c.p);
    let g = c.g.fn_at(&ag, true, false);
    c.func("g", &g);
    let (a, b, x0) = affine_setup(c, &ag);
    let qh = skip_on!(g.precompose_affine(&a, &b), Error::EmptySet);
    if !qh.qualification.holds {
        return Ok(Outcome::Skip("B(ℝ^n) ∩ ri(dom g) = ∅".into()));
    }
    let h = qh.value;
    ensure!(h.is_nearly_convex(), "g ∘ B is not nearly convex");
    let mut xs = c.g.any_samples(h.dom().carrier(), 3);
    xs.push(x0);
    for x in xs {
        let bx = add(&a.mul_vec(&x), &b);
        ensure!(h.evaluate(&x)? == g.evaluate(&bx)?, "(g ∘ B)({}) wrong", fmt_vec(&x));
    }
    Ok(Outcome::Pass)
}

fn images(c: &mut Ctx) -> TrialResult {
    let (n, p) = (c.n, c.p);
    let (a, b) = (c.g.anchor(n), c.g.anchor(p));
    let gm = c.g.map_at(&a, &b, true);
    let sa = c.g.maybe_shift(&a, 0.85);
    let omega = c.g.set_at(&sa, true);
    let sb = c.g.maybe_shift(&b, 0.85);
    let theta = c.g.set_at(&sb, true);
    c.map("G", &gm);
    c.set("Omega", &omega);
    c.set("Theta", &theta);
    let cg = gm.graph().carrier();
    let mut checked = 0;
    let mx = {
        let mut m = RMat::zeros(n + p, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    };
    let my = {
        let mut m = RMat::zeros(n + p, p);
        for i in 0..p {
            m[(n + i, i)] = Rat::one();
        }
        m
    };
    match gm.image(&omega) {
        Err(Error::EmptySet) => {}
        r => {
            let r = r?;
            if r.qualification.holds {
                checked += 1;
                let img = r.value;
                ensure!(img.verdict().is_yes(), "G(Omega) is not nearly convex");
                let ic = img.carrier();
                let mut todo: Vec<(RVec, bool)> = ic.genrep().points.iter().map(|y| (y.clone(), false)).collect();
                todo.extend(directions(ic).into_iter().map(|y| (y, true)));
                for (y, hom) in todo {
                    let mut s = LinSys::new(n);
                    s.require(omega.carrier(), &identity(n), &zeros::<Rat>(n), hom);
                    s.require(cg, &mx, &cat(&zeros::<Rat>(n), &y), hom);
                    ensure!(s.feasible(), "image generator {} unexplained", fmt_vec(&y));
                }
                let joint = omega.carrier().product(&Polyhedron::full_space(p)).intersect(cg)?;
                for z in &joint.genrep().points {
                    ensure!(ic.contains(&z[n..]), "G(cl Omega) point {} missing", fmt_vec(&z[n..]));
                }
                if sa == a {
                    let y = gm.value(&a)?.ri_point()?;
                    ensure!(img.ri_member(&y)?, "G(a) point missing from G(Omega)");
                }
            }
        }
    }
    match gm.preimage(&theta) {
        Err(Error::EmptySet) => {}
        r => {
            let r = r?;
            if r.qualification.holds {
                checked += 1;
                let pre = r.value;
                ensure!(pre.verdict().is_yes(), "G⁻¹(Theta) is not nearly convex");
                let pc = pre.carrier();
                let mut todo: Vec<(RVec, bool)> = pc.genrep().points.iter().map(|x| (x.clone(), false)).collect();
                todo.extend(directions(pc).into_iter().map(|x| (x, true)));
                for (x, hom) in todo {
                    let mut s = LinSys::new(p);
                    s.require(theta.carrier(), &identity(p), &zeros::<Rat>(p), hom);
                    s.require(cg, &my, &cat(&x, &zeros::<Rat>(p)), hom);
                    ensure!(s.feasible(), "preimage generator {} unexplained", fmt_vec(&x));
                }
                let joint = Polyhedron::full_space(n).product(theta.carrier()).intersect(cg)?;
                for z in &joint.genrep().points {
                    ensure!(pc.contains(&z[..n]), "G⁻¹(cl Theta) point {} missing", fmt_vec(&z[..n]));
                }
                if sb == b {
                    ensure!(pre.ri_member(&a)?, "anchor missing from G⁻¹(Theta)");
                }
            }
        }
    }
    if checked == 0 {
        return Ok(Outcome::Skip("neither image qualified".into()));
    }
    Ok(Outcome::Pass)
}

fn anchored_maps(c: &mut Ctx, a: &[Rat], b: &[Rat], keep: f64) -> (Vec<SvMap>, bool) {
    let k = c.g.int(2, 3);
    let mut maps = Vec::new();
    let mut shared = true;
    for i in 0..k {
        let ab = cat(a, b);
        let s = if i == 0 { ab.clone() } else { c.g.maybe_shift(&ab, keep) };
        shared &= s == ab;
        let m = c.g.map_at(&s[..a.len()], &s[a.len()..], true);
        c.map(&format!("F{}", i + 1), &m);
        maps.push(m);
    }
    (maps, shared)
}

fn intersect_map(c: &mut Ctx) -> TrialResult {
    let (n, p) = (c.n, c.p);
    let (a, b) = (c.g.anchor(n), c.g.anchor(p));
    let (maps, shared) = anchored_maps(c, &a, &b, 0.9);
    let qi = skip_on!(SvMap::intersection_mapping(&maps), Error::EmptySet);
    if !qi.qualification.holds {
        return Ok(Outcome::Skip("⋂ ri(gph F_i) = ∅".into()));
    }
    let h = qi.value;
    ensure!(h.graph().verdict().is_yes(), "intersection mapping not nearly convex");
    let mut joint = HRep::new(n + p);
    for m in &maps {
        joint.append(m.graph().carrier().hrep());
    }
    ensure!(
        h.graph().carrier().set_equal(&Polyhedron::from_h(joint)?)?,
        "graph carrier is not the intersection of the carriers"
    );
    if shared {
        ensure!(h.graph().ri_member(&cat(&a, &b))?, "common anchor missing");
    }
    Ok(Outcome::Pass)
}

fn anchored_fns(c: &mut Ctx, a: &[Rat], keep: f64, full_dim: bool) -> Vec<NcFunction> {
    let k = c.g.int(2, 3);
    (0..k)
        .map(|i| {
            let s = if i == 0 { a.to_vec() } else { c.g.maybe_shift(a, keep) };
            let f = c.g.fn_at(&s, true, full_dim);
            c.func(&format!("f{}", i + 1), &f);
            f
        })
        .collect()
}

fn max_fn(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(c.n);
    let fs = anchored_fns(c, &a, 0.85, false);
    let rep = skip_on!(NcFunction::max_fn(&fs), Error::EmptySet);
    if !rep.result.qualification.holds {
        return Ok(Outcome::Skip("⋂ ri(dom f_i) = ∅".into()));
    }
    ensure!(rep.paths_agree, "epigraph intersection and merged pieces disagree");
    let m = rep.result.value;
    ensure!(m.is_nearly_convex(), "max function not nearly convex");
    let mut xs = c.g.any_samples(fs[0].dom().carrier(), 3);
    xs.extend(c.g.ri_samples(m.dom().carrier(), 2));
    for x in xs {
        let mut want = Some(None::<Rat>);
        for f in &fs {
            want = match (want, f.evaluate(&x)?) {
                (Some(acc), Some(v)) => Some(Some(acc.map_or(v.clone(), |w: Rat| w.max(v)))),
                _ => None,
            };
        }
        ensure!(m.evaluate(&x)? == want.flatten(), "max({}) wrong", fmt_vec(&x));
    }
    Ok(Outcome::Pass)
}

fn common_members(c: &mut Ctx, sets: &[&PuncturedPolyhedron], extra: &[RVec]) -> Result<Vec<RVec>, Error> {
    let mut joint = HRep::new(sets[0].ambient_dim());
    for s in sets {
        joint.append(s.carrier().hrep());
    }
    let jp = Polyhedron::from_h(joint)?;
    let mut cands = extra.to_vec();
    if !jp.is_empty() {
        cands.extend(jp.vertices());
        cands.extend(c.g.any_samples(&jp, 2));
    }
    let mut out = Vec::new();
    for x in cands {
        let mut ok = true;
        for s in sets {
            ok &= s.membership(&x)?;
        }
        if ok {
            out.push(x);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn ncone_intersect(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(c.n);
    let o1 = c.g.set_at(&a, true);
    let b = c.g.maybe_shift(&a, 0.85);
    let o2 = c.g.set_at(&b, true);
    c.set("Omega1", &o1);
    c.set("Omega2", &o2);
    let cands = common_members(c, &[&o1, &o2], std::slice::from_ref(&a))?;
    let Some(x) = c.g.pick(&cands).cloned() else {
        return Ok(Outcome::Skip("Omega1 ∩ Omega2 = ∅".into()));
    };
    c.note("x", &x);
    let r = skip_on!(normal_cone_intersection(&o1, &o2, &x), Error::QualificationFailed(_));
    ensure!(r.equal, "N(x; Omega1 ∩ Omega2) ≠ N1 + N2");
    let joint = o1.carrier().intersect(o2.carrier())?;
    for v in directions(&r.lhs) {
        ensure!(in_normal_cone(&joint, &x, &v), "normal {} fails the generator oracle", fmt_vec(&v));
    }
    Ok(Outcome::Pass)
}

fn coderiv_sum(c: &mut Ctx) -> TrialResult {
    let (n, p) = (c.n, c.p);
    let ax = c.g.anchor(n);
    let (y1, y2) = (c.g.anchor(p), c.g.anchor(p));
    let f1 = c.g.map_at(&ax, &y1, true);
    let ax2 = c.g.maybe_shift(&ax, 0.85);
    let f2 = c.g.map_at(&ax2, &y2, true);
    c.map("F1", &f1);
    c.map("F2", &f2);
    let mut xs = vec![ax.clone()];
    if c.g.chance(0.5) {
        let d = f1.domain_carrier()?.intersect(&f2.domain_carrier()?)?;
        if !d.is_empty() {
            xs = c.g.any_samples(&d, 2);
            c.g.shuffle(&mut xs);
            xs.push(ax.clone());
        }
    }
    let mut chosen = None;
    for x in xs {
        let v1 = c.g.members(&f1.value(&x)?, 2);
        let v2 = c.g.members(&f2.value(&x)?, 2);
        if let (Some(u1), Some(u2)) = (c.g.pick(&v1).cloned(), c.g.pick(&v2).cloned()) {
            chosen = Some((x, add(&u1, &u2)));
            break;
        }
    }
    let Some((x, y)) = chosen else {
        return Ok(Outcome::Skip("no common point".into()));
    };
    let v = c.g.ivec(p, -2, 2);
    c.note("x", &x);
    c.note("y", &y);
    c.note("v", &v);
    let r = skip_on!(coderivative_sum_rule(&f1, &f2, &x, &y, &v), Error::QualificationFailed(_));
    if !r.qualification.holds {
        return Ok(Outcome::Skip("qualification".into()));
    }
    ensure!(r.equal, "coderivative sum rule: sides differ");
    Ok(Outcome::Pass)
}

fn fn_point(c: &mut Ctx, f: &NcFunction, a: &[Rat]) -> Option<RVec> {
    let mut mem = c.g.members(f.dom(), 2);
    if f.dom().membership(a).unwrap_or(false) {
        mem.push(a.to_vec());
    }
    c.g.pick(&mem).cloned()
}

fn subdiff_via_coderiv(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(c.n);
    let f = c.g.fn_at(&a, true, false);
    c.func("f", &f);
    let Some(x) = fn_point(c, &f, &a) else {
        return Ok(Outcome::Skip("no sampled member".into()));
    };
    c.note("x", &x);
    let fx = f.evaluate(&x)?.expect("member");
    let s = subdifferential(&f, &x)?;
    let d = coderivative(&f.epigraph_mapping(), &x, &[fx], &[Rat::one()])?;
    ensure!(s.set_equal(&d)?, "∂f(x) ≠ D*E_f(x, f(x))(1)");
    let g = s.genrep();
    ensure!(!g.points.is_empty(), "empty subdifferential");
    for v in &g.points {
        ensure!(is_subgradient(&f, &x, v)?, "{} fails the LP subgradient oracle", fmt_vec(v));
    }
    for r in directions(&s) {
        let v = add(&g.points[0], &r);
        ensure!(is_subgradient(&f, &x, &v)?, "{} fails the LP subgradient oracle", fmt_vec(&v));
    }
    Ok(Outcome::Pass)
}

fn epi_normal_props(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(c.n);
    let f = c.g.fn_at(&a, true, false);
    c.func("f", &f);
    let Some(x) = fn_point(c, &f, &a) else {
        return Ok(Outcome::Skip("no sampled member".into()));
    };
    let alpha = c.g.positive();
    c.note("x", &x);
    c.note("alpha", std::slice::from_ref(&alpha));
    let rep = epi_normal_properties(&f, &x, &alpha)?;
    ensure!(rep.all_pass(), "epigraph normal properties: {rep:?}");
    Ok(Outcome::Pass)
}

fn subdiff_sum(c: &mut Ctx) -> TrialResult {
    let a = c.g.anchor(c.n);
    let fs = anchored_fns(c, &a, 0.85, false);
    let doms: Vec<&PuncturedPolyhedron> = fs.iter().map(|f| f.dom()).collect();
    let cands = common_members(c, &doms, std::slice::from_ref(&a))?;
    let Some(x) = c.g.pick(&cands).cloned() else {
        return Ok(Outcome::Skip("no common member".into()));
    };
    c.note("x", &x);
    let r = skip_on!(subdiff_sum_rule(&fs, &x), Error::QualificationFailed(_));
    if !r.qualification.holds {
        return Ok(Outcome::Skip("qualification".into()));
    }
    ensure!(r.equal, "subdifferential sum rule: sides differ");
    Ok(Outcome::Pass)
}

fn coderiv_chain(c: &mut Ctx) -> TrialResult {
    let (n, p) = (c.n, c.p);
    let r = c.g.int(1, c.g.spec.p as i64) as usize;
    let (a, b, z) = (c.g.anchor(n), c.g.anchor(p), c.g.anchor(r));
    let b2 = c.g.maybe_shift(&b, 0.85);
    let f = c.g.map_at(&a, &b, true);
    let g = c.g.map_at(&b2, &z, true);
    c.map("F", &f);
    c.map("G", &g);
    let zbar = if b2 == b {
        z
    } else {
        let h = skip_on!(g.compose(&f), Error::EmptySet).value;
        let vals = if h.graph().fidelity() == Fidelity::Exact {
            c.g.members(&h.value(&a)?, 2)
        } else {
            c.g.ri_samples(&h.graph().carrier().slice_leading(&a)?, 2)
        };
        match c.g.pick(&vals) {
            Some(v) => v.clone(),
            None => return Ok(Outcome::Skip("empty composite value".into())),
        }
    };
    let w = c.g.ivec(r, -2, 2);
    c.note("x", &a);
    c.note("z", &zbar);
    c.note("w", &w);
    let rep = skip_on!(coderivative_chain_rule(&g, &f, &a, &zbar, &w), Error::QualificationFailed(_));
    if !rep.qualification.holds {
        return Ok(Outcome::Skip("qualification".into()));
    }
    ensure!(rep.equal, "coderivative chain rule: sides differ");
    Ok(Outcome::Pass)
}

fn affine_subdiff(c: &mut Ctx) -> TrialResult {
    let ag = c.g.anchor(c.p);
    let g = c.g.fn_at(&ag, true, false);
    c.func("g", &g);
    let (a, b, x0) = affine_setup(c, &ag);
    if g.evaluate(&add(&a.mul_vec(&x0), &b))?.is_none() {
        return Ok(Outcome::Skip("B(x) outside dom g".into()));
    }
    let r = skip_on!(subdiff_chain_affine(&g, &a, &b, &x0), Error::QualificationFailed(_));
    if !r.qualification.holds {
        return Ok(Outcome::Skip("qualification".into()));
    }
    ensure!(r.equal, "affine chain rule: sides differ");
    Ok(Outcome::Pass)
}

fn inv_image_ncone(c: &mut Ctx) -> TrialResult {
    let (n, p) = (c.n, c.p);
    let (a, b) = (c.g.anchor(n), c.g.anchor(p));
    let f = c.g.map_at(&a, &b, true);
    let sb = c.g.maybe_shift(&b, 0.85);
    let theta = c.g.set_at(&sb, true);
    c.map("F", &f);
    c.set("Theta", &theta);
    let ys = c.g.members(&f.value(&a)?, 3);
    let mut cands = vec![b.clone()];
    cands.extend(ys);
    let mut y = None;
    for cand in cands {
        if theta.membership(&cand)? && f.graph().membership(&cat(&a, &cand))? {
            y = Some(cand);
            break;
        }
    }
    let Some(y) = y else {
        return Ok(Outcome::Skip("F(x) ∩ Theta has no sampled point".into()));
    };
    c.note("x", &a);
    c.note("y", &y);
    let r = skip_on!(normal_cone_inverse_image(&f, &theta, &a, &y), Error::QualificationFailed(_));
    if !r.qualification.holds {
        return Ok(Outcome::Skip("qualification".into()));
    }
    ensure!(r.equal, "inverse image normal cone: sides differ");
    Ok(Outcome::Pass)
}

fn coderiv_intersect(c: &mut Ctx) -> TrialResult {
    let (n, p) = (c.n, c.p);
    let (a, b) = (c.g.anchor(n), c.g.anchor(p));
    let (maps, _) = anchored_maps(c, &a, &b, 0.85);
    let ab = cat(&a, &b);
    for m in &maps {
        if !m.graph().membership(&ab)? {
            return Ok(Outcome::Skip("anchor not in every graph".into()));
        }
    }
    let ystar = c.g.ivec(p, -2, 2);
    c.note("x", &a);
    c.note("y", &b);
    c.note("y*", &ystar);
    let r = skip_on!(coderivative_intersection_rule(&maps, &a, &b, &ystar), Error::QualificationFailed(_));
    if !r.qualification.holds {
        return Ok(Outcome::Skip("qualification".into()));
    }
    ensure!(r.equal, "coderivative intersection rule: sides differ");
    Ok(Outcome::Pass)
}

fn subdiff_max(c: &mut Ctx) -> TrialResult {
    let n = c.n;
    let a = c.g.anchor(n);
    let k = c.g.int(2, 3);
    let mut fs = Vec::new();
    for i in 0..k {
        let s = if i == 0 { a.clone() } else { c.g.maybe_shift(&a, 0.9) };
        let pieces = if c.g.chance(0.6) { c.g.tied_pieces(&a) } else { c.g.pieces(n) };
        let dom = c.g.set_full(&s, true, true);
        let f = NcFunction::new(n, pieces, dom)?;
        c.func(&format!("f{}", i + 1), &f);
        fs.push(f);
    }
    c.note("x", &a);
    for f in &fs {
        if f.evaluate(&a)?.is_none() {
            return Ok(Outcome::Skip("x outside a domain".into()));
        }
    }
    let r = skip_on!(subdiff_max_rule(&fs, &a), Error::QualificationFailed(_));
    if !r.qualification.holds {
        return Ok(Outcome::Skip("qualification".into()));
    }
    ensure!(r.equal, "max rule: sides differ");
    Ok(Outcome::Pass)
}

/// Two boxes meeting on `x1 = 0`, each missing the point `q` of the shared
/// face.
fn touching_family(c: &mut Ctx) -> Result<(PuncturedPolyhedron, PuncturedPolyhedron, RVec), Error> {
    if c.trial == 0 {
        let (a, b) = examples::touching_boxes();
        return Ok((a, b, vec![q(0), q(0)]));
    }
    let n = c.n.max(2);
    let mut qpt = vec![q(0)];
    for _ in 1..n {
        qpt.push(frac(c.g.int(-3, 3), 4));
    }
    let lo1 = vec![q(-1); n];
    let mut hi1 = vec![q(1); n];
    hi1[0] = q(0);
    let lo2 = {
        let mut v = lo1.clone();
        v[0] = q(0);
        v
    };
    let hi2 = vec![q(1); n];
    let b1 = Polyhedron::boxed(&lo1, &hi1)?;
    let b2 = Polyhedron::boxed(&lo2, &hi2)?;
    let pt = Polyhedron::point(qpt.clone());
    Ok((
        PuncturedPolyhedron::exact(b1, vec![pt.clone()])?,
        PuncturedPolyhedron::exact(b2, vec![pt])?,
        qpt,
    ))
}

fn sum_fn_negative(c: &mut Ctx) -> TrialResult {
    let (o1, o2, qpt) = touching_family(c)?;
    c.set("Omega1", &o1);
    c.set("Omega2", &o2);
    ensure!(o1.verdict().is_yes() && o2.verdict().is_yes(), "the summands are not nearly convex");
    let f1 = NcFunction::indicator(&o1)?;
    let f2 = NcFunction::indicator(&o2)?;
    let s = f1.add(&f2)?;
    ensure!(!s.qualification.holds, "qualification unexpectedly holds");
    match s.value.dom().verdict() {
        Verdict::No { witness, .. } => {
            ensure!(*witness == qpt, "witness {} instead of {}", fmt_vec(witness), fmt_vec(&qpt));
        }
        v => return Ok(Outcome::Fail(format!("sum verdict {}", v.label()))),
    }
    ensure!(!s.value.is_nearly_convex(), "sum reported nearly convex");
    Ok(Outcome::Pass)
}

fn sum_map_negative(c: &mut Ctx) -> TrialResult {
    let (o1, o2, qpt) = touching_family(c)?;
    let p = if c.trial == 0 { 1 } else { c.p };
    let n = o1.ambient_dim();
    let cube = Polyhedron::boxed(&vec![q(0); p], &vec![q(1); p])?;
    let g1 = PuncturedPolyhedron::exact(
        o1.carrier().product(&cube),
        vec![Polyhedron::point(qpt.clone()).product(&cube)],
    )?;
    let g2 = PuncturedPolyhedron::convex(o2.carrier().product(&cube));
    let f1 = SvMap::new(n, p, g1)?;
    let f2 = SvMap::new(n, p, g2)?;
    c.map("F1", &f1);
    c.map("F2", &f2);
    ensure!(f1.is_nearly_convex() && f2.is_nearly_convex(), "the summands are not nearly convex");
    let s = f1.sum(&f2)?;
    ensure!(!s.qualification.holds, "qualification unexpectedly holds");
    ensure!(s.value.graph().verdict().is_no(), "sum graph verdict {}", s.value.graph().verdict().label());
    Ok(Outcome::Pass)
}

fn value_negative(c: &mut Ctx) -> TrialResult {
    let (f, x, want) = if c.trial == 0 {
        (examples::boundary_value_map(), vec![q(1)], vec![q(1)])
    } else {
        let (n, p) = (c.n, c.p);
        let mut x = vec![q(1)];
        for _ in 1..n {
            x.push(frac(c.g.int(0, 4), 4));
        }
        let y: RVec = (0..p).map(|_| frac(c.g.int(1, 7), 4)).collect();
        let carrier = Polyhedron::boxed(&vec![q(0); n], &vec![q(1); n])?
            .product(&Polyhedron::boxed(&vec![q(0); p], &vec![q(2); p])?);
        let graph = PuncturedPolyhedron::exact(carrier, vec![Polyhedron::point(cat(&x, &y))])?;
        (SvMap::new(n, p, graph)?, x, y)
    };
    c.map("F", &f);
    c.note("x", &x);
    ensure!(f.graph().verdict().is_yes(), "graph is not nearly convex");
    ensure!(!ri_contains(&f.domain_carrier()?, &x), "x lies in ri(dom F)");
    match f.value(&x)?.verdict() {
        Verdict::No { witness, .. } => {
            ensure!(*witness == want, "witness {} instead of {}", fmt_vec(witness), fmt_vec(&want));
        }
        v => return Ok(Outcome::Fail(format!("value verdict {}", v.label()))),
    }
    Ok(Outcome::Pass)
}

fn ncone_intersect_negative(c: &mut Ctx) -> TrialResult {
    let (o1, o2, qpt) = touching_family(c)?;
    c.set("Omega1", &o1);
    c.set("Omega2", &o2);
    let mut x = qpt.clone();
    x[1] = if qpt[1] >= q(0) { qpt[1].clone() - frac(1, 2) } else { qpt[1].clone() + frac(1, 2) };
    c.note("x", &x);
    ensure!(o1.membership(&x)? && o2.membership(&x)?, "x not in both sets");
    match normal_cone_intersection(&o1, &o2, &x) {
        Err(Error::QualificationFailed(_)) => Ok(Outcome::Pass),
        Ok(_) => Ok(Outcome::Fail("rule applied without its qualification".into())),
        Err(e) => Err(e),
    }
}
