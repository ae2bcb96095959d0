//! Normal cones, coderivatives, subdifferentials and their calculus rules.
//!
//! Normal cones depend only on the closure of a nearly convex set, so every
//! computation here runs on carriers. Pointwise checks use exact membership
//! when available and carrier membership at near-equal fidelity.

use crate::error::{check_dim, Error, Result};
use crate::function::NcFunction;
use crate::linalg::{self, Matrix};
use crate::ncset::{Fidelity, PuncturedPolyhedron, Qualification};
use crate::polyhedron::{GenRep, Polyhedron};
use crate::scalar::Field;
use crate::svmap::SvMap;

/// Both sides of a calculus rule.
#[derive(Clone, Debug)]
pub struct RuleReport<F: Field> {
    pub lhs: Polyhedron<F>,
    pub rhs: Polyhedron<F>,
    /// Mutual containment of generators in the other side's inequalities.
    pub equal: bool,
    pub qualification: Qualification<F>,
    /// Auxiliary points chosen by the rule, such as `(ȳ1, ȳ2)` for the
    /// sum rule or `ȳ` for the chain rule.
    pub points: Vec<Vec<F>>,
    /// Active indices for the maximum rule.
    pub active: Vec<usize>,
    /// For the sum rule, whether a second decomposition gave the same
    /// right-hand side.
    pub independent: Option<bool>,
}

impl<F: Field> RuleReport<F> {
    fn new(lhs: Polyhedron<F>, rhs: Polyhedron<F>, qualification: Qualification<F>) -> Result<Self> {
        let equal = lhs.set_equal(&rhs)?;
        Ok(Self {
            lhs,
            rhs,
            equal,
            qualification,
            points: Vec::new(),
            active: Vec::new(),
            independent: None,
        })
    }
}

/// Checks of the epigraph normal cone at `(x̄, f(x̄))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpiNormalReport {
    /// Every normal `(v, -α)` has `α ≥ 0`.
    pub a: bool,
    /// `x̄ ∈ ri(dom f)` gives a nonempty subdifferential; `None` when
    /// `x̄ ∉ ri(dom f)`.
    pub b: Option<bool>,
    /// At an interior point of a full-dimensional domain, the normal cone
    /// at `(x̄, λ̄)` with `λ̄ > f(x̄)` is `{0}`; `None` when not applicable.
    pub c: Option<bool>,
    /// Horizontal normals `(v, 0)` are exactly `N(x̄; dom f)`.
    pub d: bool,
    /// Normals `(v, -α)` with `α > 0` are exactly `α ∂f(x̄)`.
    pub e: bool,
}

impl EpiNormalReport {
    pub fn all_pass(&self) -> bool {
        self.a && self.b != Some(false) && self.c != Some(false) && self.d && self.e
    }
}

fn in_set<F: Field>(omega: &PuncturedPolyhedron<F>, x: &[F]) -> Result<bool> {
    check_dim(omega.ambient_dim(), x.len())?;
    match omega.fidelity() {
        Fidelity::Exact => omega.membership(x),
        Fidelity::NearEqual => Ok(omega.carrier().contains(x)),
    }
}

/// `N(x̄; P)` for the carrier, as the cone of active normals plus the span
/// of the equality rows.
pub fn carrier_normal_cone<F: Field>(p: &Polyhedron<F>, x: &[F]) -> Polyhedron<F> {
    let h = p.hrep();
    let n = p.ambient_dim();
    let rays = h
        .ineq
        .row_iter()
        .zip(&h.ineq_rhs)
        .filter(|(a, b)| linalg::dot(a, x) == **b)
        .map(|(a, _)| a.to_vec())
        .filter(|a| !linalg::is_zero_vec(a))
        .collect();
    let lines = linalg::row_space_basis(&h.eq.to_rows(), n);
    Polyhedron::from_v(GenRep {
        ambient: n,
        points: vec![linalg::zeros(n)],
        rays,
        lines,
    })
    .expect("consistent shape")
    .dd_convert()
}

pub fn normal_cone<F: Field>(omega: &PuncturedPolyhedron<F>, x: &[F]) -> Result<Polyhedron<F>> {
    if !in_set(omega, x)? {
        return Err(Error::PointNotInSet);
    }
    Ok(carrier_normal_cone(omega.carrier(), x))
}

fn require(q: Qualification<impl Field>, what: &str) -> Result<()> {
    if q.holds {
        Ok(())
    } else {
        Err(Error::QualificationFailed(what.into()))
    }
}

pub fn normal_cone_intersection<F: Field>(
    o1: &PuncturedPolyhedron<F>,
    o2: &PuncturedPolyhedron<F>,
    x: &[F],
) -> Result<RuleReport<F>> {
    let qualification = Qualification::of(&[o1.carrier(), o2.carrier()])?;
    require(qualification.clone(), "ri Ω1 ∩ ri Ω2 is empty")?;
    let (meet, _) = o1.intersect(o2)?;
    let lhs = normal_cone(&meet, x)?;
    let rhs = normal_cone(o1, x)?.minkowski_sum(&normal_cone(o2, x)?)?;
    RuleReport::new(lhs, rhs, qualification)
}

/// `{u : (u, -v) ∈ K}` for `K ⊂ ℝ^n × ℝ^p`.
fn slice_normal<F: Field>(k: &Polyhedron<F>, n: usize, v: &[F]) -> Result<Polyhedron<F>> {
    let p = v.len();
    let mut a = Matrix::zeros(n + p, n);
    for i in 0..n {
        a[(i, i)] = F::one();
    }
    let mut c = linalg::zeros(n);
    c.extend(linalg::neg(v));
    k.linear_preimage(&a, &c)
}

/// `D*F(x̄, ȳ)(v) = {u : (u, -v) ∈ N((x̄, ȳ); gph F)}`.
pub fn coderivative<F: Field>(map: &SvMap<F>, x: &[F], y: &[F], v: &[F]) -> Result<Polyhedron<F>> {
    check_dim(map.source_dim(), x.len())?;
    check_dim(map.target_dim(), y.len())?;
    check_dim(map.target_dim(), v.len())?;
    let xy = concat(x, y);
    if !in_set(map.graph(), &xy)? {
        return Err(Error::PointNotInGraph);
    }
    let n = carrier_normal_cone(map.graph().carrier(), &xy);
    slice_normal(&n, x.len(), v)
}

fn concat<F: Clone>(a: &[F], b: &[F]) -> Vec<F> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

/// `∂f(x̄) = D*E_f(x̄, f(x̄))(1)`.
pub fn subdifferential<F: Field>(f: &NcFunction<F>, x: &[F]) -> Result<Polyhedron<F>> {
    check_dim(f.dim(), x.len())?;
    if !in_set(f.dom(), x)? {
        return Err(Error::PointNotInDomain);
    }
    coderivative(&f.epigraph_mapping(), x, &[f.base(x)], &[F::one()])
}

pub fn epi_normal_properties<F: Field>(
    f: &NcFunction<F>,
    x: &[F],
    alpha: &F,
) -> Result<EpiNormalReport> {
    check_dim(f.dim(), x.len())?;
    if !in_set(f.dom(), x)? {
        return Err(Error::PointNotInDomain);
    }
    if !alpha.is_positive() {
        return Err(Error::Invariant("probe α must be positive".into()));
    }
    let n = f.dim();
    let epi = f.epigraph_set().carrier();
    let fx = f.base(x);
    let cone = carrier_normal_cone(epi, &concat(x, std::slice::from_ref(&fx)));
    let g = cone.genrep();
    let a = g.rays.iter().all(|r| !r[n].is_positive()) && g.lines.iter().all(|l| l[n].is_zero());
    let dom = f.dom().carrier();
    let sub = subdifferential(f, x)?;
    let b = dom.ri_contains(x).then(|| !sub.is_empty());
    let c = (dom.dim() == n as isize && dom.ri_contains(x)).then(|| {
        let above = carrier_normal_cone(epi, &concat(x, &[fx + F::one()]));
        above.genrep().rays.is_empty() && above.genrep().lines.is_empty()
    });
    let horizontal = slice_normal(&cone, n, &[F::zero()])?;
    let d = horizontal.set_equal(&carrier_normal_cone(dom, x))?;
    let scaled = slice_normal(&cone, n, std::slice::from_ref(alpha))?;
    let e = scaled.set_equal(&scale_poly(&sub, alpha)?)?;
    Ok(EpiNormalReport { a, b, c, d, e })
}

fn scale_poly<F: Field>(p: &Polyhedron<F>, s: &F) -> Result<Polyhedron<F>> {
    let n = p.ambient_dim();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = s.clone();
    }
    p.linear_image(&m)
}

/// Points of `S ⊂ ℝ^k` to try as auxiliary choices: the relative-interior
/// point first, then vertices.
fn candidates<F: Field>(s: &Polyhedron<F>) -> Vec<Vec<F>> {
    if s.is_empty() {
        return Vec::new();
    }
    let mut out = vec![s.ri_point().expect("nonempty")];
    for v in s.vertices() {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

pub fn coderivative_sum_rule<F: Field>(
    f1: &SvMap<F>,
    f2: &SvMap<F>,
    x: &[F],
    y: &[F],
    v: &[F],
) -> Result<RuleReport<F>> {
    let sum = f1.sum(f2)?;
    require(sum.qualification.clone(), "ri(dom F1) ∩ ri(dom F2) is empty")?;
    let lhs = coderivative(&sum.value, x, y, v)?;
    let p = y.len();
    // S(x̄, ȳ) = {(y1, y2) : y1 ∈ F1(x̄), y2 ∈ F2(x̄), y1 + y2 = ȳ}.
    let s1 = f1.graph().carrier().slice_leading(x)?;
    let s2 = f2.graph().carrier().slice_leading(x)?;
    let mut s = s1.product(&s2);
    let mut h = s.hrep().clone();
    for i in 0..p {
        let mut row = linalg::zeros(2 * p);
        row[i] = F::one();
        row[p + i] = F::one();
        h.equal(row, y[i].clone());
    }
    s = Polyhedron::from_h(h)?;
    let mut chosen = Vec::new();
    for w in candidates(&s) {
        let (y1, y2) = w.split_at(p);
        if in_set(f1.graph(), &concat(x, y1))? && in_set(f2.graph(), &concat(x, y2))? {
            chosen.push(w.clone());
        }
        if chosen.len() == 2 {
            break;
        }
    }
    let Some(first) = chosen.first().cloned() else {
        return Err(Error::PointNotInGraph);
    };
    let side = |w: &[F]| -> Result<Polyhedron<F>> {
        let (y1, y2) = w.split_at(p);
        coderivative(f1, x, y1, v)?.minkowski_sum(&coderivative(f2, x, y2, v)?)
    };
    let rhs = side(&first)?;
    let independent = match chosen.get(1) {
        Some(w) => Some(side(w)?.set_equal(&rhs)?),
        None => None,
    };
    let mut report = RuleReport::new(lhs, rhs, sum.qualification)?;
    report.points = chosen;
    report.independent = independent;
    Ok(report)
}

/// `D*(G ∘ F)(x̄, z̄)(w)` against `D*F(x̄, ȳ)(D*G(ȳ, z̄)(w))` with
/// `ȳ ∈ F(x̄) ∩ G⁻¹(z̄)`.
pub fn coderivative_chain_rule<F: Field>(
    g: &SvMap<F>,
    f: &SvMap<F>,
    x: &[F],
    z: &[F],
    w: &[F],
) -> Result<RuleReport<F>> {
    let comp = g.compose(f)?;
    require(comp.qualification.clone(), "ri(rge F) ∩ ri(dom G) is empty")?;
    let lhs = coderivative(&comp.value, x, z, w)?;
    let (n, p) = (f.source_dim(), f.target_dim());
    let fx = f.graph().carrier().slice_leading(x)?;
    let ginv = g.inverse().graph().carrier().slice_leading(z)?;
    let m = fx.intersect(&ginv)?;
    let ybar = candidates(&m)
        .into_iter()
        .find(|y| {
            in_set(f.graph(), &concat(x, y)).unwrap_or(false)
                && in_set(g.graph(), &concat(y, z)).unwrap_or(false)
        })
        .ok_or(Error::PointNotInGraph)?;
    let nf = carrier_normal_cone(f.graph().carrier(), &concat(x, &ybar));
    let ng = carrier_normal_cone(g.graph().carrier(), &concat(&ybar, z));
    // Over (u, v): (u, -v) ∈ N_F and (v, -w) ∈ N_G.
    let mut a_f = Matrix::zeros(n + p, n + p);
    for i in 0..n {
        a_f[(i, i)] = F::one();
    }
    for j in 0..p {
        a_f[(n + j, n + j)] = -F::one();
    }
    let q = z.len();
    let mut a_g = Matrix::zeros(p + q, n + p);
    for j in 0..p {
        a_g[(j, n + j)] = F::one();
    }
    let mut c_g = linalg::zeros(p);
    c_g.extend(linalg::neg(w));
    let joint = nf
        .linear_preimage(&a_f, &linalg::zeros(n + p))?
        .intersect(&ng.linear_preimage(&a_g, &c_g)?)?;
    let rhs = joint.project(&(0..n).collect::<Vec<_>>())?;
    let mut report = RuleReport::new(lhs, rhs, comp.qualification)?;
    report.points = vec![ybar];
    Ok(report)
}

/// `D*(⋂ F_i)(x̄, ȳ)(y*)` against the union over `y* = y*_1 + … + y*_m` of
/// `D*F_1(x̄, ȳ)(y*_1) + … + D*F_m(x̄, ȳ)(y*_m)`, which is the slice at
/// `-y*` of `N_1 + … + N_m`.
pub fn coderivative_intersection_rule<F: Field>(
    maps: &[SvMap<F>],
    x: &[F],
    y: &[F],
    ystar: &[F],
) -> Result<RuleReport<F>> {
    let inter = SvMap::intersection_mapping(maps)?;
    require(inter.qualification.clone(), "⋂ ri(gph F_i) is empty")?;
    let lhs = coderivative(&inter.value, x, y, ystar)?;
    let xy = concat(x, y);
    let mut total: Option<Polyhedron<F>> = None;
    for m in maps {
        if !in_set(m.graph(), &xy)? {
            return Err(Error::PointNotInGraph);
        }
        let n = carrier_normal_cone(m.graph().carrier(), &xy);
        total = Some(match total {
            None => n,
            Some(t) => t.minkowski_sum(&n)?,
        });
    }
    let total = total.ok_or(Error::EmptyInput)?;
    let rhs = slice_normal(&total, x.len(), ystar)?;
    RuleReport::new(lhs, rhs, inter.qualification)
}

pub fn subdiff_sum_rule<F: Field>(fs: &[NcFunction<F>], x: &[F]) -> Result<RuleReport<F>> {
    let (first, rest) = fs.split_first().ok_or(Error::EmptyInput)?;
    let carriers: Vec<&Polyhedron<F>> = fs.iter().map(|f| f.dom().carrier()).collect();
    let qualification = Qualification::of(&carriers)?;
    require(qualification.clone(), "⋂ ri(dom f_i) is empty")?;
    let mut sum = first.clone();
    let mut rhs = subdifferential(first, x)?;
    for f in rest {
        sum = sum.add(f)?.value;
        rhs = rhs.minkowski_sum(&subdifferential(f, x)?)?;
    }
    let lhs = subdifferential(&sum, x)?;
    RuleReport::new(lhs, rhs, qualification)
}

/// `∂(g ∘ B)(x̄) = Aᵀ ∂g(B x̄)` for `B x = A x + b`.
pub fn subdiff_chain_affine<F: Field>(
    g: &NcFunction<F>,
    a: &Matrix<F>,
    b: &[F],
    x: &[F],
) -> Result<RuleReport<F>> {
    let pre = g.precompose_affine(a, b)?;
    require(pre.qualification.clone(), "B(ℝ^n) ∩ ri(dom g) is empty")?;
    let lhs = subdifferential(&pre.value, x)?;
    let bx = linalg::add(&a.mul_vec(x), b);
    let rhs = subdifferential(g, &bx)?.linear_image(&a.transpose())?;
    RuleReport::new(lhs, rhs, pre.qualification)
}

/// `N(x̄; F⁻¹(Θ)) = D*F(x̄, ȳ)(N(ȳ; Θ))` for `ȳ ∈ F(x̄) ∩ Θ`.
pub fn normal_cone_inverse_image<F: Field>(
    map: &SvMap<F>,
    theta: &PuncturedPolyhedron<F>,
    x: &[F],
    y: &[F],
) -> Result<RuleReport<F>> {
    let pre = map.preimage(theta)?;
    require(pre.qualification.clone(), "ri(rge F) ∩ ri Θ is empty")?;
    if !in_set(theta, y)? {
        return Err(Error::PointNotInSet);
    }
    let xy = concat(x, y);
    if !in_set(map.graph(), &xy)? {
        return Err(Error::PointNotInGraph);
    }
    let lhs = normal_cone(&pre.value, x)?;
    let (n, p) = (x.len(), y.len());
    let ng = carrier_normal_cone(map.graph().carrier(), &xy);
    let nt = carrier_normal_cone(theta.carrier(), y);
    // {(u, w) ∈ N_gph : -w ∈ N(ȳ; Θ)}, projected to u.
    let mut flip = Matrix::zeros(p, n + p);
    for j in 0..p {
        flip[(j, n + j)] = -F::one();
    }
    let joint = ng.intersect(&nt.linear_preimage(&flip, &linalg::zeros(p))?)?;
    let rhs = joint.project(&(0..n).collect::<Vec<_>>())?;
    let mut report = RuleReport::new(lhs, rhs, pre.qualification)?;
    report.points = vec![y.to_vec()];
    Ok(report)
}

/// `∂(max f_i)(x̄) = co ⋃_{i ∈ I(x̄)} ∂f_i(x̄)`, assuming every `f_i` is
/// continuous at `x̄`, taken as `x̄` interior to a full-dimensional domain.
pub fn subdiff_max_rule<F: Field>(fs: &[NcFunction<F>], x: &[F]) -> Result<RuleReport<F>> {
    let max = NcFunction::max_fn(fs)?;
    let n = x.len();
    for f in fs {
        check_dim(f.dim(), n)?;
        let dom = f.dom().carrier();
        if dom.dim() != n as isize || !dom.ri_contains(x) {
            return Err(Error::QualificationFailed(
                "x̄ is not interior to every domain".into(),
            ));
        }
    }
    let value = max.result.value.base(x);
    let active: Vec<usize> = (0..fs.len()).filter(|&i| fs[i].base(x) == value).collect();
    let lhs = subdifferential(&max.result.value, x)?;
    let mut union = GenRep::empty(n);
    for &i in &active {
        let s = subdifferential(&fs[i], x)?;
        let g = s.genrep();
        union.points.extend(g.points.iter().cloned());
        union.rays.extend(g.rays.iter().cloned());
        union.lines.extend(g.lines.iter().cloned());
    }
    let rhs = Polyhedron::from_v(union)?;
    let mut report = RuleReport::new(lhs, rhs, max.result.qualification)?;
    report.active = active;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Piece;
    use crate::polyhedron::HRep;
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

    fn cone(n: usize, rays: &[&str]) -> Polyhedron<Rat> {
        Polyhedron::cone(n, rays.iter().map(|r| rvec(r)).collect()).unwrap()
    }

    fn interval(lo: &str, hi: &str) -> Polyhedron<Rat> {
        boxed(lo, hi)
    }

    fn full(n: usize) -> PuncturedPolyhedron<Rat> {
        PuncturedPolyhedron::convex(Polyhedron::full_space(n))
    }

    fn abs() -> NcFunction<Rat> {
        NcFunction::new(
            1,
            vec![Piece::new(rvec("1"), rat("0")), Piece::new(rvec("-1"), rat("0"))],
            full(1),
        )
        .unwrap()
    }

    fn linear_fn(c: &str, dom: PuncturedPolyhedron<Rat>) -> NcFunction<Rat> {
        NcFunction::new(1, vec![Piece::new(rvec(c), rat("0"))], dom).unwrap()
    }

    #[test]
    fn normal_cones() {
        let sq = PuncturedPolyhedron::convex(boxed("0 0", "1 1"));
        let n = normal_cone(&sq, &rvec("1 1")).unwrap();
        assert!(n.set_equal(&cone(2, &["1 0", "0 1"])).unwrap());
        let n = normal_cone(&sq, &rvec("1/2 1/2")).unwrap();
        assert!(n.set_equal(&Polyhedron::point(rvec("0 0"))).unwrap());
        let o = punctured(boxed("0 0", "1 1"), &["1/2 1"]);
        assert!(matches!(normal_cone(&o, &rvec("1/2 1")), Err(Error::PointNotInSet)));
        let n = normal_cone(&o, &rvec("0 1")).unwrap();
        assert!(n.set_equal(&cone(2, &["-1 0", "0 1"])).unwrap());
    }

    #[test]
    fn intersection_of_normal_cones() {
        let mut h1 = boxed("0 0", "2 2").hrep().clone();
        h1.leq(rvec("0 1"), rat("1"));
        let mut h2 = boxed("0 0", "2 2").hrep().clone();
        h2.leq(rvec("1 0"), rat("1"));
        let o1 = PuncturedPolyhedron::convex(Polyhedron::from_h(h1).unwrap());
        let o2 = PuncturedPolyhedron::convex(Polyhedron::from_h(h2).unwrap());
        let r = normal_cone_intersection(&o1, &o2, &rvec("1 1")).unwrap();
        assert!(r.equal);
        assert!(r.lhs.set_equal(&cone(2, &["1 0", "0 1"])).unwrap());
        let r = normal_cone_intersection(&o1, &o2, &rvec("1/2 1/2")).unwrap();
        assert!(r.equal && r.lhs.set_equal(&Polyhedron::point(rvec("0 0"))).unwrap());

        let a = punctured(boxed("-1 -1", "0 1"), &["0 0"]);
        let b = punctured(boxed("0 -1", "1 1"), &["0 0"]);
        assert!(matches!(
            normal_cone_intersection(&a, &b, &rvec("0 0")),
            Err(Error::QualificationFailed(_))
        ));
    }

    #[test]
    fn coderivatives() {
        let twice = SvMap::linear(&Matrix::from_i64(&[&[2]]));
        let d = coderivative(&twice, &rvec("1"), &rvec("2"), &rvec("3")).unwrap();
        assert!(d.set_equal(&Polyhedron::point(rvec("6"))).unwrap());
        let e = abs().epigraph_mapping();
        let d = coderivative(&e, &rvec("0"), &rvec("0"), &rvec("1")).unwrap();
        assert!(d.set_equal(&interval("-1", "1")).unwrap());
        let f = SvMap::new(1, 1, punctured(boxed("0 0", "1 2"), &["1 1"])).unwrap();
        assert!(matches!(
            coderivative(&f, &rvec("1"), &rvec("1"), &rvec("0")),
            Err(Error::PointNotInGraph)
        ));
        let near = SvMap::new(1, 1, f.graph().with_fidelity(Fidelity::NearEqual)).unwrap();
        let d = coderivative(&near, &rvec("1"), &rvec("1"), &rvec("0")).unwrap();
        assert!(d.set_equal(&cone(1, &["1"])).unwrap());
    }

    #[test]
    fn subdifferentials() {
        assert!(subdifferential(&abs(), &rvec("0")).unwrap().set_equal(&interval("-1", "1")).unwrap());
        let aff = NcFunction::affine(rvec("2 -3"), rat("5"));
        let s = subdifferential(&aff, &rvec("7 1/2")).unwrap();
        assert!(s.set_equal(&Polyhedron::point(rvec("2 -3"))).unwrap());
        let ind = NcFunction::indicator(&punctured(boxed("0 0", "1 1"), &["1/2 1"])).unwrap();
        assert!(matches!(
            subdifferential(&ind, &rvec("1/2 1")),
            Err(Error::PointNotInDomain)
        ));
        let s = subdifferential(&ind, &rvec("0 0")).unwrap();
        assert!(s.set_equal(&cone(2, &["-1 0", "0 -1"])).unwrap());
    }

    #[test]
    fn epigraph_normals() {
        let r = epi_normal_properties(&abs(), &rvec("0"), &rat("1")).unwrap();
        assert!(r.all_pass() && r.b == Some(true) && r.c == Some(true));
        let ind = NcFunction::indicator(&PuncturedPolyhedron::convex(interval("0", "1"))).unwrap();
        let r = epi_normal_properties(&ind, &rvec("1"), &rat("2")).unwrap();
        assert!(r.all_pass() && r.b.is_none());
        let zero = NcFunction::affine(rvec("0"), rat("0"));
        let r = epi_normal_properties(&zero, &rvec("4"), &rat("1/3")).unwrap();
        assert!(r.all_pass());
        assert!(subdifferential(&zero, &rvec("4")).unwrap().set_equal(&Polyhedron::point(rvec("0"))).unwrap());
    }

    #[test]
    fn sum_rule() {
        let zero_unit = NcFunction::indicator(&PuncturedPolyhedron::convex(interval("0", "1"))).unwrap();
        let e = zero_unit.epigraph_mapping();
        let r = coderivative_sum_rule(&e, &e, &rvec("1/2"), &rvec("0"), &rvec("1")).unwrap();
        assert!(r.equal && r.lhs.set_equal(&Polyhedron::point(rvec("0"))).unwrap());
        let r = coderivative_sum_rule(&e, &e, &rvec("1"), &rvec("0"), &rvec("1")).unwrap();
        assert!(r.equal && r.lhs.set_equal(&cone(1, &["1"])).unwrap());

        let lin = linear_fn("3", full(1)).epigraph_mapping();
        let r = coderivative_sum_rule(&abs().epigraph_mapping(), &lin, &rvec("0"), &rvec("0"), &rvec("1")).unwrap();
        assert!(r.equal && r.lhs.set_equal(&interval("2", "4")).unwrap());
        // Vertical fibers allow many decompositions of ȳ.
        let r = coderivative_sum_rule(&abs().epigraph_mapping(), &lin, &rvec("0"), &rvec("5"), &rvec("1")).unwrap();
        assert!(r.equal);
        assert_eq!(r.independent, Some(true));
    }

    #[test]
    fn chain_rule() {
        let a1 = SvMap::linear(&Matrix::from_i64(&[&[1, 2], &[0, 1]]));
        let a2 = SvMap::linear(&Matrix::from_i64(&[&[3, -1]]));
        let r = coderivative_chain_rule(&a2, &a1, &rvec("1 1"), &rvec("8"), &rvec("1")).unwrap();
        assert!(r.equal);
        // (A2 A1)ᵀ w = (3, 5).
        assert!(r.lhs.set_equal(&Polyhedron::point(rvec("3 5"))).unwrap());

        let id = SvMap::linear(&Matrix::<Rat>::identity(1));
        let f = SvMap::new(1, 1, punctured(boxed("0 0", "1 2"), &["1 1"])).unwrap();
        let r = coderivative_chain_rule(&id, &f, &rvec("1"), &rvec("2"), &rvec("1")).unwrap();
        assert!(r.equal);
        assert!(r.lhs.set_equal(&coderivative(&f, &rvec("1"), &rvec("2"), &rvec("1")).unwrap()).unwrap());

        // E_g ∘ B reproduces the affine subdifferential rule.
        let b = SvMap::linear(&Matrix::from_i64(&[&[2]]));
        let r = coderivative_chain_rule(&abs().epigraph_mapping(), &b, &rvec("0"), &rvec("0"), &rvec("1")).unwrap();
        let aff = subdiff_chain_affine(&abs(), &Matrix::from_i64(&[&[2]]), &rvec("0"), &rvec("0")).unwrap();
        assert!(r.equal && aff.equal);
        assert!(r.rhs.set_equal(&aff.rhs).unwrap());
    }

    #[test]
    fn intersection_rule() {
        let f = SvMap::new(1, 1, PuncturedPolyhedron::convex(boxed("0 0", "1 1"))).unwrap();
        let r = coderivative_intersection_rule(std::slice::from_ref(&f), &rvec("1"), &rvec("1"), &rvec("1")).unwrap();
        assert!(r.equal);
        let ex = linear_fn("1", full(1)).epigraph_mapping();
        let emx = linear_fn("-1", full(1)).epigraph_mapping();
        let r = coderivative_intersection_rule(&[ex, emx], &rvec("0"), &rvec("0"), &rvec("1")).unwrap();
        assert!(r.equal && r.lhs.set_equal(&interval("-1", "1")).unwrap());
        let r = coderivative_intersection_rule(&[f.clone(), f], &rvec("1"), &rvec("1/2"), &rvec("0")).unwrap();
        assert!(r.equal);
    }

    #[test]
    fn subdifferential_rules() {
        let r = subdiff_sum_rule(&[abs(), abs()], &rvec("0")).unwrap();
        assert!(r.equal && r.lhs.set_equal(&interval("-2", "2")).unwrap());
        let r = subdiff_chain_affine(&abs(), &Matrix::identity(1), &rvec("0"), &rvec("0")).unwrap();
        assert!(r.equal && r.lhs.set_equal(&interval("-1", "1")).unwrap());
        let r = subdiff_max_rule(&[linear_fn("1", full(1)), linear_fn("-1", full(1))], &rvec("0")).unwrap();
        assert_eq!(r.active, vec![0, 1]);
        assert!(r.equal && r.rhs.set_equal(&interval("-1", "1")).unwrap());
        assert!(r.lhs.set_equal(&subdifferential(&abs(), &rvec("0")).unwrap()).unwrap());
        let bounded = linear_fn("1", PuncturedPolyhedron::convex(interval("0", "1")));
        assert!(matches!(
            subdiff_max_rule(&[bounded], &rvec("0")),
            Err(Error::QualificationFailed(_))
        ));
    }

    #[test]
    fn inverse_image_rule() {
        // F(x) = {x1 + x2}, Θ = (-∞, 1].
        let f = SvMap::linear(&Matrix::from_i64(&[&[1, 1]]));
        let mut h = HRep::new(1);
        h.leq(rvec("1"), rat("1"));
        let theta = PuncturedPolyhedron::convex(Polyhedron::from_h(h).unwrap());
        let r = normal_cone_inverse_image(&f, &theta, &rvec("1/2 1/2"), &rvec("1")).unwrap();
        assert!(r.equal && r.lhs.set_equal(&cone(2, &["1 1"])).unwrap());
    }
}
