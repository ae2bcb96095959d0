//! Exit gate: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use ncvx_core::gendiff::{subdiff_max_rule, subdiff_sum_rule};
use ncvx_core::ncset::Verdict;
use ncvx_core::{rvec, Polyhedron};
use ncvx_harness::checks::{kernel_check, normal_cone_oracle_check, qualified_run, subgradient_oracle_check};
use ncvx_harness::{examples, reports_json, verify, InstanceSpec};

type Criterion = (&'static str, fn() -> Line);

struct Line {
    ok: bool,
    detail: String,
}

fn line(ok: bool, detail: impl Into<String>) -> Line {
    Line {
        ok,
        detail: detail.into(),
    }
}

fn no_witness(v: &Verdict<ncvx_core::Rat>) -> Option<Vec<ncvx_core::Rat>> {
    match v {
        Verdict::No { witness, .. } => Some(witness.clone()),
        _ => None,
    }
}

fn worked_examples() -> Line {
    let start = Instant::now();
    let mut bad = Vec::new();

    let f = examples::boundary_value_map();
    if !f.graph().verdict().is_yes() {
        bad.push("graph of F not Yes");
    }
    match f.value(&rvec("1")) {
        Ok(v) if no_witness(v.verdict()) == Some(rvec("1")) => {}
        _ => bad.push("F(1) not No with witness 1"),
    }

    let g = examples::constant_punctured_square();
    if !g.graph().verdict().is_yes() {
        bad.push("constant mapping graph not Yes");
    }
    for x in ["-3", "-1/2", "0", "1/3", "1", "7/2"] {
        let value = g.value(&rvec(x));
        let witness = value.as_ref().ok().and_then(|v| v.nonconvexity_witness().ok().flatten());
        let confirmed = match (&value, witness) {
            (Ok(v), Some((a, b))) => {
                let mid: Vec<_> = a.iter().zip(&b).map(|(s, t)| (s.clone() + t.clone()) / ncvx_core::rat("2")).collect();
                v.membership(&a) == Ok(true) && v.membership(&b) == Ok(true) && v.membership(&mid) == Ok(false)
            }
            _ => false,
        };
        if !confirmed {
            bad.push("a value of the constant mapping not shown nonconvex");
        }
    }

    let (d1, d2) = examples::indicator_pair();
    match d1.add(&d2) {
        Ok(s) => {
            if s.qualification.holds {
                bad.push("indicator qualification holds");
            }
            if no_witness(s.value.dom().verdict()) != Some(rvec("0 0")) || s.value.is_nearly_convex() {
                bad.push("indicator sum not No with witness (0, 0)");
            }
        }
        Err(_) => bad.push("indicator sum errored"),
    }

    let secs = start.elapsed().as_secs_f64();
    if secs >= 1.0 {
        bad.push("slower than 1 s");
    }
    let detail = if bad.is_empty() {
        format!("all worked examples reproduce exactly ({secs:.3}s)")
    } else {
        bad.join("; ")
    };
    line(bad.is_empty(), detail)
}

fn battery() -> Line {
    let start = Instant::now();
    let spec = InstanceSpec::with_seed(42).dims(3, 3);
    let reports = match verify("all", &spec, 300) {
        Ok(r) => r,
        Err(e) => return line(false, e.to_string()),
    };
    let failures: usize = reports.iter().map(|r| r.failures.len()).sum();
    let worst = reports
        .iter()
        .max_by(|a, b| a.skip_ratio().total_cmp(&b.skip_ratio()))
        .expect("ids exist");
    let vacuous: Vec<&str> = reports.iter().filter(|r| r.skip_ratio() >= 0.5).map(|r| r.id.as_str()).collect();
    for r in &reports {
        for f in r.failures.iter().take(1) {
            eprintln!("{}", f.instance);
        }
    }
    line(
        failures == 0 && vacuous.is_empty(),
        format!(
            "{} ids × 300 trials, {failures} failures, max skip ratio {:.2} ({}), vacuous {:?}, {:.0}s",
            reports.len(),
            worst.skip_ratio(),
            worst.id,
            vacuous,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn oracles() -> Line {
    let nc = normal_cone_oracle_check(42, 200);
    let sg = subgradient_oracle_check(42, 100);
    for f in nc.failures.iter().chain(&sg.failures).take(5) {
        eprintln!("{f}");
    }
    line(
        nc.ok() && sg.ok() && nc.cases == 200 && sg.cases == 100 && sg.exterior >= 100,
        format!(
            "normal cones {} pairs / {} checks, subgradients {} pairs / {} checks / {} exterior, {} failures",
            nc.cases,
            nc.checks,
            sg.cases,
            sg.checks,
            sg.exterior,
            nc.failures.len() + sg.failures.len()
        ),
    )
}

fn interval(lo: &str, hi: &str) -> Polyhedron {
    Polyhedron::boxed(&rvec(lo), &rvec(hi)).expect("ordered")
}

fn rules() -> Line {
    let spec = InstanceSpec::with_seed(42).dims(3, 3);
    let mut parts = Vec::new();
    let mut ok = true;
    for id in ["CODERIV_SUM", "CODERIV_CHAIN", "CODERIV_INTERSECT", "SUBDIFF_SUM", "AFFINE_SUBDIFF", "SUBDIFF_MAX"] {
        match qualified_run(id, &spec, 100) {
            Ok(r) => {
                let qualified = r.passes + r.failures.len();
                ok &= r.failures.is_empty() && qualified >= 100;
                parts.push(format!("{id} {}/{qualified}", r.passes));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{id} {e}"));
            }
        }
    }
    let abs = examples::abs();
    let sum = subdiff_sum_rule(&[abs.clone(), abs], &rvec("0"));
    let sum_ok = sum.is_ok_and(|r| r.equal && r.lhs.set_equal(&interval("-2", "2")).unwrap_or(false));
    let [a, b] = examples::plus_minus_identity();
    let max = subdiff_max_rule(&[a, b], &rvec("0"));
    let max_ok = max.is_ok_and(|r| {
        r.equal && r.active == [0, 1] && r.lhs.set_equal(&interval("-1", "1")).unwrap_or(false)
    });
    ok &= sum_ok && max_ok;
    parts.push(format!("∂(|x|+|x|)(0)=[-2,2] {sum_ok}, ∂max(x,-x)(0)=[-1,1] {max_ok}"));
    line(ok, parts.join(", "))
}

fn kernel_and_determinism() -> Line {
    let k = kernel_check(42, 1000);
    for f in k.failures.iter().take(5) {
        eprintln!("{f}");
    }
    let spec = InstanceSpec::with_seed(42).dims(3, 3);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("pool");
        pool.install(|| {
            let reports = verify("all", &spec, 8).expect("known ids");
            serde_json::to_string(&reports_json(&reports, &spec)).expect("serializable")
        })
    };
    let (a, b) = (run(1), run(3));
    let kernel_json = || serde_json::to_string(&kernel_check(7, 50)).expect("serializable");
    let same = a == b && kernel_json() == kernel_json();
    line(
        k.ok() && k.cases == 1000 && same,
        format!(
            "{} polyhedra / {} checks / {} failures; battery JSON identical across runs and thread counts: {same}",
            k.cases,
            k.checks,
            k.failures.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 5] = [
        ("worked examples", worked_examples),
        ("theorem battery", battery),
        ("oracle equivalence", oracles),
        ("calculus rules", rules),
        ("kernel soundness and determinism", kernel_and_determinism),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let l = f();
        all &= l.ok;
        println!("criterion {} {name}: {} - {}", i + 1, if l.ok { "PASS" } else { "FAIL" }, l.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
