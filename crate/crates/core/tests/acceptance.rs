//! One PASS/FAIL line per acceptance criterion.
//!
//! The process exits nonzero when a criterion fails that is not listed in
//! `KNOWN_LIMITS`, or when a listed one unexpectedly passes.

use std::process::ExitCode;
use std::time::Instant;

use chebfib::resistance::{bench_resistance, resistance_cn12_closed};
use chebfib::verify::{
    corollary_x_samples, verify_bejaia, verify_cheb_nesting_corollary, verify_corollary_sums,
    verify_integer_identities, verify_prop2, verify_resistance, verify_resolvent, verify_roots, verify_theorem1,
    verify_theorem2, verify_wu, CaseResult, Status, SuiteReport,
};

const THEOREM1_N: usize = 200;
const THEOREM1_SECONDS: f64 = 60.0;
const COROLLARY_N: usize = 200;
const THEOREM2_N: usize = 150;
const RESOLVENT_M: usize = 512;
const RESOLVENT_TOL: f64 = 1e-10;
const WU_M: usize = 512;
const WU_TOL: f64 = 1e-10;
const RESISTANCE_EXACT_N: usize = 40;
const RESISTANCE_FLOAT_N: usize = 2000;
const RESISTANCE_TOL: f64 = 1e-9;
const INTEGER_M: usize = 1000;
const SUMS_M: usize = 64;
const SUMS_TOL: f64 = 1e-10;
const PROP2_M: usize = 200;
const PROP2_TOL: f64 = 1e-10;
const BEJAIA_N_MAX: u64 = 101;
const BEJAIA_TOL: f64 = 1e-10;
const ROOTS_N: usize = 100;
const ROOTS_TOL: f64 = 1e-9;
const BENCH_N: u64 = 2000;
const BENCH_TOL: f64 = 1e-9;

/// Criteria whose float tolerance is below what double precision can reach
/// on part of the grid: the exact value is far smaller than the summands, so
/// rounding in the terms alone exceeds the tolerance.
const KNOWN_LIMITS: [(u32, &str); 2] = [
    (5, "cosine sum cancels to e^{-l lambda} while terms are O(1); relative 1e-10 is beyond f64 there"),
    (9, "float cross-checks hit the same cancellation for phi^{-3l}; exact parts are unaffected"),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn first_failure<'a>(mut cases: impl Iterator<Item = &'a CaseResult>) -> String {
    cases
        .find(|c| c.status == Status::Fail)
        .map(|c| format!("; first failure {} lhs={} rhs={} {}", c.params, c.lhs, c.rhs, c.note))
        .unwrap_or_default()
}

fn all_pass<'a>(cases: impl Iterator<Item = &'a CaseResult> + Clone) -> (bool, usize, String) {
    let n = cases.clone().count();
    let failed = cases.clone().filter(|c| c.status == Status::Fail).count();
    (failed == 0 && n > 0, failed, first_failure(cases.clone()))
}

fn by<'a>(r: &'a SuiteReport, key: &'a str, value: &'a str) -> impl Iterator<Item = &'a CaseResult> + Clone + 'a {
    r.cases.iter().filter(move |c| c.params.get_str(key) == Some(value))
}

fn find(r: &SuiteReport, pred: impl Fn(&CaseResult) -> bool) -> Option<&CaseResult> {
    r.cases.iter().find(|c| pred(c))
}

fn has(c: &CaseResult, key: &str, v: u64) -> bool {
    c.params.get_u64(key) == Some(v)
}

fn c1() -> Outcome {
    let start = Instant::now();
    let r = verify_theorem1(THEOREM1_N);
    let secs = start.elapsed().as_secs_f64();
    let ok = r.failed() == 0 && r.checked() == 2 * THEOREM1_N && secs <= THEOREM1_SECONDS;
    outcome(ok, format!("{} residuals, {} nonzero, {secs:.1}s (limit {THEOREM1_SECONDS}s)", r.checked(), r.failed()))
}

fn c2() -> Outcome {
    let r = verify_cheb_nesting_corollary(COROLLARY_N);
    let corrected = by(&r, "form", "corrected");
    let zero = corrected.clone().filter(|c| c.status == Status::Pass).count();
    let printed1 = find(&r, |c| has(c, "n", 1) && c.params.get_str("form") == Some("printed"));
    let printed_ok = printed1.is_some_and(|c| c.status == Status::ExpectedFail && c.lhs == "[0, 3, 0, -3]");
    outcome(
        zero == COROLLARY_N && printed_ok,
        format!(
            "corrected zero for {zero}/{COROLLARY_N}; printed n=1 {} residual {}",
            printed1.map_or("missing".into(), |c| c.status.to_string()),
            printed1.map_or("-", |c| c.lhs.as_str())
        ),
    )
}

fn c3() -> Outcome {
    let r = verify_theorem2(THEOREM2_N);
    let spot = |n: u64, l: u64, v: &str| {
        find(&r, |c| has(c, "N", n) && has(c, "ell", l)).is_some_and(|c| c.lhs == v && c.rhs == v && c.status == Status::Pass)
    };
    let want = THEOREM2_N * (THEOREM2_N + 1) / 2;
    let ok = r.failed() == 0 && r.checked() == want && spot(2, 1, "2") && spot(3, 1, "1");
    outcome(ok, format!("{} cases ({want} expected), {} failures, spot values {}", r.checked(), r.failed(), spot(2, 1, "2") && spot(3, 1, "1")))
}

fn c4() -> Outcome {
    let r = verify_resolvent(RESOLVENT_M, RESOLVENT_TOL);
    let (ok, failed, first) = all_pass(by(&r, "form", "corrected"));
    let n = by(&r, "form", "corrected").count();
    let missed = by(&r, "form", "printed").filter(|c| c.status == Status::ExpectedFail).count();
    outcome(
        ok,
        format!("{n} grid points, {failed} over tolerance; printed outer phase misses {missed}{first}"),
    )
}

fn c5() -> Outcome {
    let r = verify_wu(WU_M, WU_TOL);
    let mut detail = String::new();
    for name in ["0.1", "1", "3logphi", "10"] {
        let (mut failing, mut total) = (0usize, 0usize);
        for c in by(&r, "lambda", name) {
            let m = c.params.get_u64("m").unwrap() as usize;
            total += m;
            failing += c
                .note
                .split("failing=")
                .nth(1)
                .and_then(|s| s.split('/').next())
                .and_then(|s| s.parse::<usize>().ok())
                .unwrap_or(0);
        }
        detail.push_str(&format!("lambda={name}: {failing}/{total} over tolerance; "));
    }
    let worst = r
        .cases
        .iter()
        .filter(|c| c.status == Status::Fail)
        .find(|c| c.params.get_str("lambda") == Some("1") && has(c, "m", 64));
    if let Some(c) = worst {
        detail.push_str(&format!("e.g. m=64 lambda=1: {}", c.note));
    }
    outcome(r.failed() == 0, detail)
}

fn c6() -> Outcome {
    let r = verify_resistance(RESISTANCE_EXACT_N, RESISTANCE_FLOAT_N, RESISTANCE_TOL);
    let (exact_ok, exact_failed, first) = all_pass(by(&r, "check", "exact"));
    let want = (2..=RESISTANCE_EXACT_N).sum::<usize>();
    let exact_n = by(&r, "check", "exact").count();
    let float = r.cases.iter().filter(|c| c.params.get_str("check") != Some("exact"));
    let (float_ok, float_failed, ffirst) = all_pass(float.clone());
    let max_rel = float
        .filter_map(|c| c.note.split("rel_err=").nth(1).and_then(|s| s.split(';').next()).and_then(|s| s.parse::<f64>().ok()))
        .fold(0.0f64, f64::max);
    let mut surd_ok = true;
    for n in [100u64, 500, 1000, 2000] {
        for ell in [0, 1, n / 4, n / 2, n - 1] {
            surd_ok &= resistance_cn12_closed(n, ell).is_ok_and(|v| v.is_rational());
        }
    }
    outcome(
        exact_ok && exact_n == want && float_ok && surd_ok,
        format!(
            "exact {exact_n}/{want} equal ({exact_failed} differ); float N<={RESISTANCE_FLOAT_N} max rel {max_rel:.2e} \
             ({float_failed} over {RESISTANCE_TOL:e}); sqrt5 part zero in all exact cases and at N up to 2000: {surd_ok}{first}{ffirst}"
        ),
    )
}

fn c7() -> Outcome {
    let r = verify_integer_identities(INTEGER_M, SUMS_TOL);
    let exact = r.cases.iter().filter(|c| matches!(c.params.get_str("id"), Some("eq3" | "eq5" | "eq6" | "L4m")));
    let (ok, failed, first) = all_pass(exact.clone());
    let n = exact.count();
    outcome(ok && n == 4 * INTEGER_M, format!("{n} exact checks for m=1..{INTEGER_M}, {failed} failures{first}"))
}

fn c8() -> Outcome {
    let sums = verify_corollary_sums(SUMS_M, &corollary_x_samples(), SUMS_TOL);
    let ints = verify_integer_identities(SUMS_M, SUMS_TOL);
    let number_sums = ints.cases.iter().filter(|c| matches!(c.params.get_str("id"), Some("sum3" | "sum4" | "sum5")));
    let all = sums.cases.iter().chain(number_sums);
    let (ok, failed, first) = all_pass(all.clone());
    let n = all.count();
    outcome(ok && n == 4 * 4 * SUMS_M + 3 * SUMS_M, format!("{n} sums (sumeq2-4, Seiffert, sum3-5), {failed} over tolerance{first}"))
}

fn c9() -> Outcome {
    let r = verify_prop2(PROP2_M, PROP2_TOL);
    let exact_checks = ["corrected-index", "parity-form", "remark-parity-form"];
    let mut exact_ok = true;
    let mut detail = String::new();
    for check in exact_checks {
        let (ok, failed, _) = all_pass(by(&r, "check", check));
        exact_ok &= ok;
        detail.push_str(&format!("{check}: {} cases, {failed} fail; ", by(&r, "check", check).count()));
    }
    // case statements hold except the first line of iv at m = 2 (mod 4)
    for check in ["ratio", "literal", "remark"] {
        let stated = by(&r, "check", check);
        let (ok, failed, _) = all_pass(stated.clone());
        exact_ok &= ok;
        let tagged = stated.clone().filter(|c| c.status == Status::ExpectedFail);
        let only_ambiguous = tagged.clone().all(|c| {
            c.params.get_u64("m").unwrap() % 4 == 2 && c.params.get_u64("ell").unwrap() % 2 == 1
        });
        exact_ok &= only_ambiguous;
        detail.push_str(&format!("{check}: {failed} fail, {} case-iv m=2 mod 4 misses; ", tagged.count()));
    }
    let printed = find(&r, |c| has(c, "m", 4) && has(c, "ell", 1) && c.params.get_str("check") == Some("printed-index"));
    let printed_ok = printed.is_some_and(|c| c.status == Status::ExpectedFail && c.lhs == "1/8" && c.rhs == "1/4");
    detail.push_str(&format!(
        "printed index at (4,1): {} vs {} {}; ",
        printed.map_or("-", |c| c.lhs.as_str()),
        printed.map_or("-", |c| c.rhs.as_str()),
        printed.map_or("missing".into(), |c| c.status.to_string())
    ));
    let mut float_ok = true;
    for check in ["float", "remark-float"] {
        let cases = by(&r, "check", check);
        let failing: Vec<&CaseResult> = cases.clone().filter(|c| c.status == Status::Fail).collect();
        float_ok &= failing.is_empty();
        let first_ell = failing.iter().filter_map(|c| c.params.get_u64("ell")).min();
        detail.push_str(&format!(
            "{check}: {}/{} over {PROP2_TOL:e} (smallest failing ell {})",
            failing.len(),
            cases.count(),
            first_ell.map_or("-".into(), |e| e.to_string())
        ));
        detail.push_str("; ");
    }
    outcome(exact_ok && printed_ok && float_ok, detail.trim_end_matches("; ").to_string())
}

fn c10() -> Outcome {
    let list: Vec<u64> = (5..=BEJAIA_N_MAX).step_by(2).collect();
    let r = match verify_bejaia(&list, BEJAIA_TOL) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let (ok, failed, first) = all_pass(r.cases.iter());
    let count = |k: &str, v: &str| by(&r, k, v).count();
    let ex1 = r.cases.iter().filter(|c| has(c, "example", 1)).filter(|c| c.status == Status::Pass).count();
    let ex2 = r
        .cases
        .iter()
        .filter(|c| has(c, "example", 2) && c.params.get_str("form") == Some("corrected"))
        .filter(|c| c.status == Status::Pass)
        .count();
    let ex2_total = r.cases.iter().filter(|c| has(c, "example", 2) && c.params.get_str("form") == Some("corrected")).count();
    let spot = find(&r, |c| c.params.get_str("spot").is_some()).is_some_and(|c| c.lhs == "2/5" && c.status == Status::Pass);
    outcome(
        ok && ex1 == 5 && ex2 == ex2_total && ex2_total > 0 && spot,
        format!(
            "float {} / exact {} cases, {failed} failures; example 1 {ex1}/5; example 2 {ex2}/{ex2_total} \
             (corrected F_{{4lk}} term); spot (5,1) = 2/5: {spot}{first}",
            count("check", "float"),
            count("check", "exact")
        ),
    )
}

fn c11() -> Outcome {
    let r = verify_roots(ROOTS_N, ROOTS_TOL);
    let (ok, failed, first) = all_pass(r.cases.iter());
    let roots: usize = r
        .cases
        .iter()
        .filter_map(|c| c.note.strip_prefix("roots=").and_then(|s| s.split(',').next()).and_then(|s| s.parse::<usize>().ok()))
        .sum();
    outcome(ok && r.checked() == 4 * ROOTS_N, format!("{} polynomials, {roots} root pairs, {failed} failures{first}", r.checked()))
}

fn c12() -> Outcome {
    match bench_resistance(&[BENCH_N], None) {
        Ok(rows) => {
            let row = &rows[0];
            outcome(
                row.rel_diff() <= BENCH_TOL,
                format!(
                    "N={} ell={}: closed {} vs solve {}, rel diff {:.2e}; t_closed {} ns, t_solve {} ns, ratio {:.0}",
                    row.n,
                    row.ell,
                    row.closed,
                    row.solve,
                    row.rel_diff(),
                    row.t_closed_ns,
                    row.t_solve_ns,
                    row.speedup()
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 12] = [
        (1, "polynomial ratio identities, residuals n<=200", c1),
        (2, "nested-argument corollary, printed vs corrected", c2),
        (3, "C_N Fibonacci quotient identity, N<=150", c3),
        (4, "resolvent spectral vs closed form", c4),
        (5, "Wu cosine sum, relative 1e-10", c5),
        (6, "C_N(1,2) resistance, three routes", c6),
        (7, "Fibonacci/Pell integer identities, m<=1000", c7),
        (8, "trigonometric sum identities, m<=64", c8),
        (9, "golden-ratio specialization of Wu's sum", c9),
        (10, "Bejaia/Pisa identities and examples", c10),
        (11, "roots of Fibonacci and Lucas polynomials", c11),
        (12, "closed form vs dense solve at N=2000", c12),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let known = KNOWN_LIMITS.iter().find(|(k, _)| *k == id).map(|(_, why)| *why);
        let status = if o.pass { "PASS" } else { "FAIL" };
        let mut line = format!("criterion {id:>2} {status} {name} [{:.1}s]: {}", start.elapsed().as_secs_f64(), o.detail);
        match (o.pass, known) {
            (false, Some(why)) => line.push_str(&format!(" [known limit: {why}]")),
            (false, None) => unexpected += 1,
            (true, Some(_)) => {
                line.push_str(" [listed as a known limit but passed]");
                unexpected += 1;
            }
            (true, None) => {}
        }
        println!("{line}");
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected result(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
