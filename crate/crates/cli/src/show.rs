//! Text and JSON forms of results.

use ncvx_core::ncset::{Qualification, Separation, Verdict};
use ncvx_core::polyhedron::RiSystem;
use ncvx_core::text::{render_function, render_map, render_polyhedron, render_set, render_vec};
use ncvx_core::{Fidelity, GenRep, NcFunction, Polyhedron, PuncturedPolyhedron, Rat, SvMap};
use serde_json::{json, Value};

/// A command result in both output forms.
pub struct Shown {
    pub text: String,
    pub json: Value,
}

impl Shown {
    pub fn new(text: String, json: Value) -> Self {
        Self { text, json }
    }
}

pub fn point(v: &[Rat]) -> String {
    if v.len() == 1 {
        v[0].to_string()
    } else {
        format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
    }
}

pub fn jvec(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn jrows(rows: &[Vec<Rat>]) -> Value {
    Value::Array(rows.iter().map(|r| jvec(r)).collect())
}

fn jsystem<'a>(rows: impl Iterator<Item = &'a [Rat]>, rhs: &[Rat]) -> Value {
    Value::Array(
        rows.zip(rhs)
            .map(|(a, b)| json!({ "a": jvec(a), "b": b.to_string() }))
            .collect(),
    )
}

pub fn jpoly(p: &Polyhedron) -> Value {
    let h = p.hrep();
    let v = p.genrep();
    json!({
        "ambient": p.ambient_dim(),
        "dim": p.dim(),
        "h": {
            "ineq": jsystem(h.ineq.row_iter(), &h.ineq_rhs),
            "eq": jsystem(h.eq.row_iter(), &h.eq_rhs),
        },
        "v": {
            "points": jrows(&v.points),
            "rays": jrows(&v.rays),
            "lines": jrows(&v.lines),
        },
    })
}

fn fidelity(f: Fidelity) -> &'static str {
    match f {
        Fidelity::Exact => "exact",
        Fidelity::NearEqual => "near",
    }
}

pub fn jset(s: &PuncturedPolyhedron) -> Value {
    json!({
        "ambient": s.ambient_dim(),
        "carrier": jpoly(s.carrier()),
        "removed": s.removed().iter().map(jpoly).collect::<Vec<_>>(),
        "fidelity": fidelity(s.fidelity()),
        "verdict": jverdict(s.verdict()),
    })
}

pub fn jmap(m: &SvMap) -> Value {
    json!({
        "source_dim": m.source_dim(),
        "target_dim": m.target_dim(),
        "graph": jset(m.graph()),
    })
}

pub fn jfunction(f: &NcFunction) -> Value {
    json!({
        "dim": f.dim(),
        "pieces": f.pieces().iter().map(|p| json!({ "c": jvec(&p.c), "beta": p.beta.to_string() })).collect::<Vec<_>>(),
        "dom": jset(f.dom()),
        "nearly_convex": f.is_nearly_convex(),
    })
}

pub fn jri(r: &RiSystem<Rat>) -> Value {
    json!({
        "eq": jsystem(r.eq.row_iter(), &r.eq_rhs),
        "strict": jsystem(r.strict.row_iter(), &r.strict_rhs),
    })
}

pub fn jverdict(v: &Verdict<Rat>) -> Value {
    match v {
        Verdict::Yes { core } => json!({ "label": "Yes", "core": jri(core) }),
        Verdict::No { witness, piece } => json!({ "label": "No", "witness": jvec(witness), "piece": piece }),
        Verdict::Unsupported { reason } => json!({ "label": "Unsupported", "reason": reason }),
    }
}

pub fn verdict_line(v: &Verdict<Rat>) -> String {
    match v {
        Verdict::Yes { .. } => "Yes".into(),
        Verdict::No { witness, .. } => format!("No, witness {}", point(witness)),
        Verdict::Unsupported { reason } => format!("Unsupported, {reason}"),
    }
}

pub fn jqualification(q: &Qualification<Rat>) -> Value {
    json!({
        "holds": q.holds,
        "witness": q.witness.as_deref().map(jvec),
        "separator": q.separator.as_deref().map(jvec),
    })
}

pub fn qualification_line(q: &Qualification<Rat>) -> String {
    match (&q.witness, &q.separator) {
        (Some(w), _) if q.holds => format!("# qualification holds, witness {}\n", point(w)),
        (_, Some(s)) => format!("# qualification fails, separator {}\n", point(s)),
        _ => format!("# qualification {}\n", if q.holds { "holds" } else { "fails" }),
    }
}

/// `[lo, hi]` style summary of a one-dimensional polyhedron.
fn interval(p: &Polyhedron) -> Option<String> {
    if p.ambient_dim() != 1 {
        return None;
    }
    let v = p.genrep();
    if v.points.is_empty() {
        return Some("empty".into());
    }
    if !v.lines.is_empty() {
        return Some("(-inf, inf)".into());
    }
    let lo = v.points.iter().map(|x| &x[0]).min()?;
    let hi = v.points.iter().map(|x| &x[0]).max()?;
    let up = v.rays.iter().any(|r| r[0] > Rat::from(0));
    let down = v.rays.iter().any(|r| r[0] < Rat::from(0));
    let left = if down { "(-inf".to_string() } else { format!("[{lo}") };
    let right = if up { "inf)".to_string() } else { format!("{hi}]") };
    Some(format!("{left}, {right}"))
}

/// A polyhedron in generator form, prefixed by `keyword`.
pub fn generators(keyword: &str, p: &Polyhedron) -> String {
    let c = p.canonical();
    let v: GenRep = c.genrep().clone();
    let mut out = String::new();
    if let Some(i) = interval(&c) {
        out.push_str(&format!("# interval {i}\n"));
    }
    out.push_str(keyword);
    out.push(' ');
    out.push_str(&render_polyhedron(&Polyhedron::from_v(v).expect("canonical generators")));
    out
}

/// A polyhedron in inequality form.
pub fn inequalities(p: &Polyhedron) -> String {
    let c = p.canonical();
    render_polyhedron(&Polyhedron::from_h(c.hrep().clone()).expect("canonical inequalities"))
}

/// Canonical inequalities for the carrier, generators for bounded pieces.
pub fn tidy(s: &PuncturedPolyhedron) -> PuncturedPolyhedron {
    let carrier = s.carrier().canonical();
    let carrier = Polyhedron::from_h(carrier.hrep().clone()).expect("canonical inequalities");
    let mut seen: Vec<GenRep> = Vec::new();
    let mut removed = Vec::new();
    for d in s.removed() {
        let c = d.canonical();
        let v = c.genrep().clone();
        if seen.contains(&v) {
            continue;
        }
        removed.push(if v.rays.is_empty() && v.lines.is_empty() {
            Polyhedron::from_v(v.clone()).expect("canonical generators")
        } else {
            Polyhedron::from_h(c.hrep().clone()).expect("canonical inequalities")
        });
        seen.push(v);
    }
    PuncturedPolyhedron::new(carrier, removed, s.fidelity()).expect("same ambient dimension")
}

pub fn set_block(name: &str, s: &PuncturedPolyhedron) -> String {
    format!("# verdict {}\n{}", verdict_line(s.verdict()), render_set(name, &tidy(s)))
}

pub fn map_block(name: &str, m: &SvMap) -> String {
    let tidy = SvMap::new(m.source_dim(), m.target_dim(), tidy(m.graph())).expect("same dimensions");
    format!("# graph verdict {}\n{}", verdict_line(m.graph().verdict()), render_map(name, &tidy))
}

pub fn function_block(name: &str, f: &NcFunction) -> String {
    format!(
        "# domain verdict {}\n# nearly convex {}\n{}",
        verdict_line(f.dom().verdict()),
        f.is_nearly_convex(),
        render_function(name, &NcFunction::new(f.dim(), f.pieces().to_vec(), tidy(f.dom())).expect("same function"))
    )
}

pub fn separation(s: &Separation<Rat>) -> Shown {
    match s {
        Separation::Separable { v, sup1, inf2, strict_pair } => Shown::new(
            format!(
                "separable\nv {}\nsup1 {sup1}\ninf2 {inf2}\nstrict {} | {}\n",
                render_vec(v),
                render_vec(&strict_pair.0),
                render_vec(&strict_pair.1)
            ),
            json!({
                "separable": true,
                "v": jvec(v),
                "sup1": sup1.to_string(),
                "inf2": inf2.to_string(),
                "strict_pair": [jvec(&strict_pair.0), jvec(&strict_pair.1)],
            }),
        ),
        Separation::NotSeparable { common_ri_point } => Shown::new(
            format!("not separable\ncommon {}\n", render_vec(common_ri_point)),
            json!({ "separable": false, "common_ri_point": jvec(common_ri_point) }),
        ),
    }
}

pub fn ri_text(r: &RiSystem<Rat>, pt: &[Rat]) -> String {
    let mut out = String::from("ri\n");
    for (a, b) in r.eq.row_iter().zip(&r.eq_rhs) {
        out.push_str(&format!("eq {} | {b}\n", render_vec(a)));
    }
    for (a, b) in r.strict.row_iter().zip(&r.strict_rhs) {
        out.push_str(&format!("strict {} | {b}\n", render_vec(a)));
    }
    out.push_str(&format!("point {}\n", render_vec(pt)));
    out
}
