//! Fixed instances taken from the worked examples.

use ncvx_core::{rvec, NcFunction, Polyhedron, PuncturedPolyhedron, SvMap};

fn boxed(lo: &str, hi: &str) -> Polyhedron {
    Polyhedron::boxed(&rvec(lo), &rvec(hi)).expect("ordered bounds")
}

/// `F(x) = [0, 2]` on `[0, 1)`, `F(1) = [0, 1) ∪ (1, 2]`.
pub fn boundary_value_map() -> SvMap {
    let graph = PuncturedPolyhedron::exact(boxed("0 0", "1 2"), vec![Polyhedron::point(rvec("1 1"))])
        .expect("consistent shape");
    SvMap::new(1, 1, graph).expect("consistent shape")
}

/// `F(x) = ([0, 1] × [0, 1]) \ {(1/2, 1)}` for every `x ∈ ℝ`.
pub fn constant_punctured_square() -> SvMap {
    SvMap::constant(1, &punctured_square())
}

pub fn punctured_square() -> PuncturedPolyhedron {
    PuncturedPolyhedron::exact(boxed("0 0", "1 1"), vec![Polyhedron::point(rvec("1/2 1"))])
        .expect("consistent shape")
}

/// `Ω1 = ([-1, 0] × [-1, 1]) \ {(0, 0)}` and `Ω2 = ([0, 1] × [-1, 1]) \ {(0, 0)}`.
pub fn touching_boxes() -> (PuncturedPolyhedron, PuncturedPolyhedron) {
    let origin = || vec![Polyhedron::point(rvec("0 0"))];
    (
        PuncturedPolyhedron::exact(boxed("-1 -1", "0 1"), origin()).expect("consistent shape"),
        PuncturedPolyhedron::exact(boxed("0 -1", "1 1"), origin()).expect("consistent shape"),
    )
}

/// The indicator functions of [`touching_boxes`].
pub fn indicator_pair() -> (NcFunction, NcFunction) {
    let (a, b) = touching_boxes();
    (
        NcFunction::indicator(&a).expect("nonempty"),
        NcFunction::indicator(&b).expect("nonempty"),
    )
}

/// `|x|` on `ℝ`.
pub fn abs() -> NcFunction {
    NcFunction::new(
        1,
        vec![
            ncvx_core::Piece::new(rvec("1"), ncvx_core::rat("0")),
            ncvx_core::Piece::new(rvec("-1"), ncvx_core::rat("0")),
        ],
        PuncturedPolyhedron::convex(Polyhedron::full_space(1)),
    )
    .expect("nonempty")
}

/// `x` and `-x` on `ℝ`, whose maximum is `|x|`.
pub fn plus_minus_identity() -> [NcFunction; 2] {
    [
        NcFunction::affine(rvec("1"), ncvx_core::rat("0")),
        NcFunction::affine(rvec("-1"), ncvx_core::rat("0")),
    ]
}
