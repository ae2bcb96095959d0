//! Command dispatch over a parsed workspace.

use ncvx_core::function::NcFunction as Function;
use ncvx_core::gendiff::{self, RuleReport};
use ncvx_core::text::{render_vec, ParseError, Workspace};
use ncvx_core::{Error, Field, Matrix, NcFunction, PuncturedPolyhedron, Rat, RVec, SvMap};
use ncvx_harness::{reports_json, verify, HarnessError, InstanceSpec};
use serde_json::json;

use crate::show::{self, jfunction, jmap, jpoly, jqualification, jset, jvec, Shown};

pub const COMMANDS: &[&str] = &[
    "check", "ri", "closure", "hull", "separate", "member", "value", "domain", "range", "sum", "compose",
    "intersect", "image", "preimage", "eval", "epi", "cof", "add", "maxfn", "ncone", "coderiv", "subdiff",
    "rule", "verify",
];

pub const RULES: &[&str] = &[
    "coderiv_sum",
    "coderiv_chain",
    "coderiv_intersect",
    "ncone_intersect",
    "subdiff_sum",
    "subdiff_affine",
    "ncone_inverse",
    "subdiff_max",
];

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit code 1.
    User { code: String, message: String },
    /// A violated internal invariant; exit code 2.
    Internal { code: String, message: String },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::User {
            code: "UsageError".into(),
            message: message.into(),
        }
    }

    pub fn code(&self) -> &str {
        match self {
            CliError::User { code, .. } | CliError::Internal { code, .. } => code,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::User { message, .. } | CliError::Internal { message, .. } => message,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::User { .. } => 1,
            CliError::Internal { .. } => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = e.code().to_string();
        let message = e.to_string();
        match e {
            Error::Invariant(_) => CliError::Internal { code, message },
            _ => CliError::User { code, message },
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::User {
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        CliError::User {
            code: e.code().into(),
            message: e.to_string(),
        }
    }
}

type Res<T> = Result<T, CliError>;

/// Options shared by all commands.
pub struct Options {
    pub seed: u64,
    pub trials: usize,
    pub dims: (usize, usize),
}

/// A command's output and whether it certified success.
pub struct Outcome {
    pub shown: Shown,
    /// False when `verify` saw a failing trial.
    pub ok: bool,
}

fn done(shown: Shown) -> Res<Outcome> {
    Ok(Outcome { shown, ok: true })
}

fn number(s: &str) -> Res<Rat> {
    Rat::parse_rational(s).ok_or_else(|| CliError::User {
        code: "BadNumber".into(),
        message: format!("not a rational number: {s}"),
    })
}

fn numbers(words: &[String]) -> Res<RVec> {
    words.iter().map(|w| number(w)).collect()
}

/// Splits at `|` separators into exactly `k` groups.
fn groups<'a>(words: &'a [String], k: usize, usage: &str) -> Res<Vec<&'a [String]>> {
    let parts: Vec<&[String]> = words.split(|w| w == "|").collect();
    if parts.len() != k {
        return Err(CliError::usage(format!("expected {usage}")));
    }
    Ok(parts)
}

fn arity(args: &[String], k: usize, usage: &str) -> Res<()> {
    if args.len() == k {
        Ok(())
    } else {
        Err(CliError::usage(format!("expected {usage}")))
    }
}

/// Leading names up to the first number or separator.
fn leading_names(args: &[String]) -> (&[String], &[String]) {
    let k = args
        .iter()
        .position(|w| w == "|" || Rat::parse_rational(w).is_some())
        .unwrap_or(args.len());
    args.split_at(k)
}

fn name_arg<'a>(args: &'a [String], usage: &str) -> Res<(&'a str, &'a [String])> {
    match args.split_first() {
        Some((n, rest)) => Ok((n.as_str(), rest)),
        None => Err(CliError::usage(format!("expected {usage}"))),
    }
}

enum Object<'a> {
    Set(&'a PuncturedPolyhedron),
    Map(&'a SvMap),
    Function(&'a NcFunction),
}

fn object<'a>(ws: &'a Workspace, name: &str) -> Res<Object<'a>> {
    if let Some(s) = ws.sets.get(name) {
        Ok(Object::Set(s))
    } else if let Some(m) = ws.maps.get(name) {
        Ok(Object::Map(m))
    } else if let Some(f) = ws.functions.get(name) {
        Ok(Object::Function(f))
    } else {
        Err(CliError::User {
            code: "UnresolvedReference".into(),
            message: format!("no object named {name}"),
        })
    }
}

fn set_result(name: &str, s: &PuncturedPolyhedron) -> Shown {
    Shown::new(show::set_block(name, s), json!({ "set": jset(s) }))
}

fn map_result(name: &str, q: &ncvx_core::ncset::Qualification<Rat>, m: &SvMap) -> Shown {
    Shown::new(
        format!("{}{}", show::qualification_line(q), show::map_block(name, m)),
        json!({ "qualification": jqualification(q), "mapping": jmap(m) }),
    )
}

fn function_result(name: &str, q: Option<&ncvx_core::ncset::Qualification<Rat>>, f: &NcFunction) -> Shown {
    let head = q.map(show::qualification_line).unwrap_or_default();
    Shown::new(
        format!("{head}{}", show::function_block(name, f)),
        json!({ "qualification": q.map(jqualification), "function": jfunction(f) }),
    )
}

fn cone_result(keyword: &str, p: &ncvx_core::Polyhedron) -> Shown {
    Shown::new(show::generators(keyword, p), json!({ keyword: jpoly(p) }))
}

pub fn run(ws: &Workspace, command: &str, args: &[String], opts: &Options) -> Res<Outcome> {
    match command {
        "check" => {
            arity(args, 1, "check NAME")?;
            let (kind, verdict, extra) = match object(ws, &args[0])? {
                Object::Set(s) => ("set", s.verdict(), None),
                Object::Map(m) => ("mapping", m.graph().verdict(), None),
                Object::Function(f) => ("function", f.epigraph_set().verdict(), Some(f.dom().verdict())),
            };
            let mut text = format!("{}\n", show::verdict_line(verdict));
            if let ncvx_core::ncset::Verdict::No { piece, .. } = verdict {
                text.push_str(&format!("# removed piece {piece}\n"));
            }
            if let Some(d) = extra {
                text.push_str(&format!("# domain verdict {}\n", show::verdict_line(d)));
            }
            done(Shown::new(
                text,
                json!({
                    "object": args[0],
                    "kind": kind,
                    "verdict": show::jverdict(verdict),
                    "nearly_convex": verdict.is_yes(),
                }),
            ))
        }
        "ri" => {
            arity(args, 1, "ri SET")?;
            let s = ws.set(&args[0])?;
            let r = s.ri_description()?;
            let pt = s.ri_point()?;
            done(Shown::new(
                show::ri_text(&r, &pt),
                json!({ "ri": show::jri(&r), "point": jvec(&pt) }),
            ))
        }
        "closure" | "hull" => {
            arity(args, 1, &format!("{command} SET"))?;
            let s = ws.set(&args[0])?;
            let p = if command == "closure" { s.closure()? } else { s.hull_near_equal()? };
            done(Shown::new(show::inequalities(&p), json!({ command: jpoly(&p) })))
        }
        "separate" => {
            arity(args, 2, "separate SET SET")?;
            let sep = ws.set(&args[0])?.properly_separate(ws.set(&args[1])?)?;
            done(show::separation(&sep))
        }
        "member" => {
            let (name, rest) = name_arg(args, "member SET x…")?;
            let x = numbers(rest)?;
            let m = ws.set(name)?.membership(&x)?;
            done(Shown::new(format!("{m}\n"), json!({ "member": m })))
        }
        "value" => {
            let (name, rest) = name_arg(args, "value MAP x…")?;
            let x = numbers(rest)?;
            let v = ws.map(name)?.value(&x)?;
            done(set_result("value", &v))
        }
        "domain" | "range" => {
            arity(args, 1, &format!("{command} MAP"))?;
            let m = ws.map(&args[0])?;
            let s = if command == "domain" { m.domain()? } else { m.range()? };
            done(set_result(command, &s))
        }
        "sum" => {
            arity(args, 2, "sum MAP MAP")?;
            let q = ws.map(&args[0])?.sum(ws.map(&args[1])?)?;
            done(map_result("sum", &q.qualification, &q.value))
        }
        "compose" => {
            arity(args, 2, "compose G F")?;
            let q = ws.map(&args[0])?.compose(ws.map(&args[1])?)?;
            done(map_result("composition", &q.qualification, &q.value))
        }
        "intersect" => intersect(ws, args),
        "image" | "preimage" => {
            arity(args, 2, &format!("{command} MAP SET"))?;
            let m = ws.map(&args[0])?;
            let s = ws.set(&args[1])?;
            let q = if command == "image" { m.image(s)? } else { m.preimage(s)? };
            let mut shown = set_result(command, &q.value);
            shown.text = format!("{}{}", show::qualification_line(&q.qualification), shown.text);
            shown.json["qualification"] = jqualification(&q.qualification);
            done(shown)
        }
        "eval" => {
            let (name, rest) = name_arg(args, "eval FUNCTION x…")?;
            let x = numbers(rest)?;
            let v = ws.function(name)?.evaluate(&x)?;
            let text = v.as_ref().map_or_else(|| "inf".to_string(), |v| v.to_string());
            done(Shown::new(format!("{text}\n"), json!({ "value": text })))
        }
        "epi" => {
            arity(args, 1, "epi FUNCTION")?;
            done(set_result("epi", ws.function(&args[0])?.epigraph_set()))
        }
        "cof" => {
            arity(args, 1, "cof FUNCTION")?;
            let f = ws.function(&args[0])?.co_f()?;
            done(function_result("cof", None, &f))
        }
        "add" => {
            arity(args, 2, "add FUNCTION FUNCTION")?;
            let q = ws.function(&args[0])?.add(ws.function(&args[1])?)?;
            done(function_result("sum", Some(&q.qualification), &q.value))
        }
        "maxfn" => {
            if args.is_empty() {
                return Err(CliError::usage("expected maxfn FUNCTION…"));
            }
            let fs = args.iter().map(|n| ws.function(n).cloned()).collect::<Result<Vec<_>, _>>()?;
            let r = Function::max_fn(&fs)?;
            let mut shown = function_result("max", Some(&r.result.qualification), &r.result.value);
            shown.text = format!("# paths agree {}\n{}", r.paths_agree, shown.text);
            shown.json["paths_agree"] = json!(r.paths_agree);
            done(shown)
        }
        "ncone" => {
            let (name, rest) = name_arg(args, "ncone SET x…")?;
            let x = numbers(rest)?;
            done(cone_result("ncone", &gendiff::normal_cone(ws.set(name)?, &x)?))
        }
        "coderiv" => {
            let (name, rest) = name_arg(args, "coderiv MAP x… | y… | v…")?;
            let g = groups(rest, 3, "coderiv MAP x… | y… | v…")?;
            let (x, y, v) = (numbers(g[0])?, numbers(g[1])?, numbers(g[2])?);
            done(cone_result("coderiv", &gendiff::coderivative(ws.map(name)?, &x, &y, &v)?))
        }
        "subdiff" => {
            let (name, rest) = name_arg(args, "subdiff FUNCTION x…")?;
            let x = numbers(rest)?;
            done(cone_result("subdiff", &gendiff::subdifferential(ws.function(name)?, &x)?))
        }
        "rule" => rule(ws, args),
        "verify" => verify_cmd(args, opts),
        other => Err(CliError::usage(format!("unknown command {other}"))),
    }
}

fn intersect(ws: &Workspace, args: &[String]) -> Res<Outcome> {
    if args.len() < 2 {
        return Err(CliError::usage("expected intersect NAME NAME…"));
    }
    if args.iter().all(|n| ws.maps.contains_key(n)) {
        let maps = args.iter().map(|n| ws.map(n).cloned()).collect::<Result<Vec<_>, _>>()?;
        let q = SvMap::intersection_mapping(&maps)?;
        return done(map_result("intersection", &q.qualification, &q.value));
    }
    let mut acc = ws.set(&args[0])?.clone();
    let mut quals = Vec::new();
    let mut certified = true;
    for n in &args[1..] {
        let (next, report) = acc.intersect(ws.set(n)?)?;
        certified &= report.ri_certified;
        quals.push(report.qualification);
        acc = next;
    }
    let mut shown = set_result("intersection", &acc);
    let heads: String = quals.iter().map(show::qualification_line).collect();
    shown.text = format!("{heads}# ri law certified {certified}\n{}", shown.text);
    shown.json["qualification"] = serde_json::Value::Array(quals.iter().map(jqualification).collect());
    shown.json["ri_certified"] = json!(certified);
    done(shown)
}

fn maps(ws: &Workspace, names: &[String]) -> Res<Vec<SvMap>> {
    Ok(names.iter().map(|n| ws.map(n).cloned()).collect::<Result<Vec<_>, _>>()?)
}

fn functions(ws: &Workspace, names: &[String]) -> Res<Vec<NcFunction>> {
    Ok(names.iter().map(|n| ws.function(n).cloned()).collect::<Result<Vec<_>, _>>()?)
}

fn two<T>(mut v: Vec<T>, usage: &str) -> Res<(T, T)> {
    if v.len() != 2 {
        return Err(CliError::usage(format!("expected {usage}")));
    }
    let b = v.pop().expect("two items");
    let a = v.pop().expect("two items");
    Ok((a, b))
}

fn rule(ws: &Workspace, args: &[String]) -> Res<Outcome> {
    let (name, rest) = name_arg(args, "rule NAME …")?;
    let (names, tail) = leading_names(rest);
    let report: RuleReport<Rat> = match name {
        "coderiv_sum" => {
            let usage = "rule coderiv_sum F1 F2 x… | y… | v…";
            let (f1, f2) = two(maps(ws, names)?, usage)?;
            let g = groups(tail, 3, usage)?;
            gendiff::coderivative_sum_rule(&f1, &f2, &numbers(g[0])?, &numbers(g[1])?, &numbers(g[2])?)?
        }
        "coderiv_chain" => {
            let usage = "rule coderiv_chain G F x… | z… | w…";
            let (g, f) = two(maps(ws, names)?, usage)?;
            let p = groups(tail, 3, usage)?;
            gendiff::coderivative_chain_rule(&g, &f, &numbers(p[0])?, &numbers(p[1])?, &numbers(p[2])?)?
        }
        "coderiv_intersect" => {
            let p = groups(tail, 3, "rule coderiv_intersect F… x… | y… | y*…")?;
            gendiff::coderivative_intersection_rule(&maps(ws, names)?, &numbers(p[0])?, &numbers(p[1])?, &numbers(p[2])?)?
        }
        "ncone_intersect" => {
            let usage = "rule ncone_intersect S1 S2 x…";
            if names.len() != 2 {
                return Err(CliError::usage(format!("expected {usage}")));
            }
            gendiff::normal_cone_intersection(ws.set(&names[0])?, ws.set(&names[1])?, &numbers(tail)?)?
        }
        "subdiff_sum" => gendiff::subdiff_sum_rule(&functions(ws, names)?, &numbers(tail)?)?,
        "subdiff_max" => gendiff::subdiff_max_rule(&functions(ws, names)?, &numbers(tail)?)?,
        "subdiff_affine" => {
            let usage = "rule subdiff_affine g a11 … apn | b… | x…";
            if names.len() != 1 {
                return Err(CliError::usage(format!("expected {usage}")));
            }
            let g = ws.function(&names[0])?;
            let p = groups(tail, 3, usage)?;
            let (entries, b, x) = (numbers(p[0])?, numbers(p[1])?, numbers(p[2])?);
            let (rows, cols) = (g.dim(), x.len());
            if entries.len() != rows * cols {
                return Err(CliError::usage(format!("expected {rows}×{cols} matrix entries, found {}", entries.len())));
            }
            let a = Matrix::from_rows(cols, entries.chunks(cols.max(1)).map(|r| r.to_vec()).collect())?;
            gendiff::subdiff_chain_affine(g, &a, &b, &x)?
        }
        "ncone_inverse" => {
            let usage = "rule ncone_inverse F THETA x… | y…";
            if names.len() != 2 {
                return Err(CliError::usage(format!("expected {usage}")));
            }
            let p = groups(tail, 2, usage)?;
            gendiff::normal_cone_inverse_image(ws.map(&names[0])?, ws.set(&names[1])?, &numbers(p[0])?, &numbers(p[1])?)?
        }
        other => {
            return Err(CliError::usage(format!("unknown rule {other}; rules: {}", RULES.join(", "))));
        }
    };
    let mut text = format!("rule {name}\n{}", show::qualification_line(&report.qualification));
    for p in &report.points {
        text.push_str(&format!("# chosen point {}\n", render_vec(p)));
    }
    if !report.active.is_empty() {
        let active: Vec<String> = report.active.iter().map(|i| i.to_string()).collect();
        text.push_str(&format!("# active {}\n", active.join(" ")));
    }
    text.push_str(&show::generators("lhs", &report.lhs));
    text.push_str(&show::generators("rhs", &report.rhs));
    text.push_str(&format!("equal {}\n", report.equal));
    done(Shown::new(
        text,
        json!({
            "rule": name,
            "qualification": jqualification(&report.qualification),
            "lhs": jpoly(&report.lhs),
            "rhs": jpoly(&report.rhs),
            "equal": report.equal,
            "points": report.points.iter().map(|p| jvec(p)).collect::<Vec<_>>(),
            "active": report.active,
            "independent": report.independent,
        }),
    ))
}

fn verify_cmd(args: &[String], opts: &Options) -> Res<Outcome> {
    arity(args, 1, "verify THEOREM_ID|all")?;
    let spec = InstanceSpec::with_seed(opts.seed).dims(opts.dims.0, opts.dims.1);
    let reports = verify(&args[0], &spec, opts.trials)?;
    let mut text = String::new();
    for r in &reports {
        text.push_str(&format!(
            "{:<24} trials {} passes {} skips {} failures {}\n",
            r.id,
            r.trials,
            r.passes,
            r.skips,
            r.failures.len()
        ));
    }
    for r in &reports {
        for f in &r.failures {
            text.push_str(&format!("\n{}", f.instance));
        }
    }
    let ok = reports.iter().all(|r| r.ok());
    Ok(Outcome {
        shown: Shown::new(text, reports_json(&reports, &spec)),
        ok,
    })
}
