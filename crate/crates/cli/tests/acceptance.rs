//! One test per acceptance criterion. Each prints a single
//! `criterion NN ... PASS|FAIL` line; every comparison is exact.

use std::time::{Duration, Instant};

use infdiff::affinoid::MultiIndex;
use infdiff::counterexample::{verify_claim2, CosetScheme, XiFamily};
use infdiff::operator::combinatorial_delta;
use infdiff::scalar::{factorial_valuation, Backend, Uniformizer, Valuation};
use infdiff::text::{parse_rational, parse_scalar};
use infdiff_cli::{execute, Command, Format, Report, RunConfig, RunDocument, Settings};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

/// Exact arithmetic throughout: no criterion tolerates any discrepancy.
const TOLERANCE: i64 = 0;
const ROUNDTRIP_BUDGET: Duration = Duration::from_secs(60);
const IDENTITY_BUDGET: Duration = Duration::from_secs(60);
const CLAIM2_BUDGET: Duration = Duration::from_secs(120);

fn report_line(n: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "criterion {:02} {:<28} {} ({})",
        n,
        name,
        if ok { "PASS" } else { "FAIL" },
        detail
    );
    assert!(ok, "criterion {:02} {} failed: {}", n, name, detail);
}

fn run(
    command: Command,
    backend: Option<Backend>,
    tweak: impl FnOnce(&mut Settings),
) -> RunDocument {
    let mut settings = Settings::default();
    tweak(&mut settings);
    let cfg = RunConfig {
        backend,
        command,
        format: Format::Json,
        settings,
    };
    execute(&cfg).expect("valid configuration")
}

fn rows<'a>(
    doc: &'a RunDocument,
    kind: &'a str,
) -> impl Iterator<Item = (&'a Report, &'a Value)> + 'a {
    doc.reports
        .iter()
        .filter(move |r| r.kind == kind)
        .flat_map(|r| r.rows.iter().map(move |row| (r, row)))
}

fn field<'a>(row: &'a Value, key: &str) -> &'a str {
    row.get(key)
        .and_then(Value::as_str)
        .unwrap_or_else(|| panic!("row without {}: {}", key, row))
}

fn valuation(s: &str) -> Option<BigRational> {
    (s != "+inf").then(|| parse_rational(s).expect("valuations print as rationals"))
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `v_p(n)`, `None` for zero.
fn vp(n: &BigInt, p: u32) -> Option<u64> {
    if *n == BigInt::from(0) {
        return None;
    }
    let mut n = n.clone();
    let mut v = 0;
    while &n % p == BigInt::from(0) {
        n /= p;
        v += 1;
    }
    Some(v)
}

fn factorial(m: u64) -> BigInt {
    (1..=m).map(BigInt::from).product()
}

/// Stern's diatomic sequence; `fusc(k)/fusc(k+1)` enumerates the positive
/// rationals in Calkin–Wilf order.
fn fusc(k: u64) -> u64 {
    let (mut a, mut b, mut n) = (1u64, 0u64, k);
    while n > 0 {
        if n % 2 == 0 {
            a += b;
        } else {
            b += a;
        }
        n /= 2;
    }
    b
}

fn enumerated_rational(i: u64) -> BigRational {
    if i == 0 {
        return q(0);
    }
    let k = i.div_ceil(2);
    let x = BigRational::new(BigInt::from(fusc(k)), BigInt::from(fusc(k + 1)));
    if i % 2 == 1 {
        x
    } else {
        -x
    }
}

#[test]
fn criterion_01_roundtrip() {
    let start = Instant::now();
    let doc = run(Command::Roundtrip, None, |_| {});
    let elapsed = start.elapsed();
    let per_backend: Vec<usize> = doc.reports.iter().map(|r| r.rows.len()).collect();
    let dims: std::collections::BTreeSet<u64> = rows(&doc, "roundtrip")
        .map(|(_, row)| row["dim"].as_u64().unwrap())
        .collect();
    let max_order = rows(&doc, "roundtrip")
        .map(|(_, row)| row["order"].as_u64().unwrap())
        .max();
    let ok = doc.pass
        && per_backend == vec![500, 500]
        && dims.len() == 3
        && max_order == Some(4)
        && elapsed < ROUNDTRIP_BUDGET;
    report_line(
        1,
        "symbol round trip",
        ok,
        &format!(
            "{:?} operators, dims {:?}, {:.1?}",
            per_backend, dims, elapsed
        ),
    );
}

#[test]
fn criterion_02_combinatorial_identity() {
    let start = Instant::now();
    let doc = run(Command::Identity, None, |_| {});
    // brute-force oracle: Σ_{β≤γ} α!binom(β,α) binom(γ,β) (−1)^{|γ−β|}
    let mut pairs = 0u64;
    let mut oracle_ok = true;
    for d in 1..=3 {
        for gamma in MultiIndex::up_to_degree(d, 8) {
            for alpha in gamma.lower_box() {
                let mut sum = BigInt::from(0);
                for beta in gamma.lower_box() {
                    if !alpha.le(&beta) {
                        continue;
                    }
                    let mut term = BigInt::from(1);
                    for i in 0..d {
                        let (a, b, g) = (
                            alpha.entries()[i] as u64,
                            beta.entries()[i] as u64,
                            gamma.entries()[i] as u64,
                        );
                        term *= factorial(b) / factorial(b - a);
                        term *= factorial(g) / (factorial(b) * factorial(g - b));
                        if (g - b) % 2 == 1 {
                            term = -term;
                        }
                    }
                    sum += term;
                }
                let expected = if alpha == gamma {
                    gamma.factorial()
                } else {
                    BigInt::from(0)
                };
                oracle_ok &= sum == expected && combinatorial_delta(&alpha, &gamma).unwrap() == sum;
                pairs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = doc.pass && oracle_ok && elapsed < IDENTITY_BUDGET;
    report_line(
        2,
        "combinatorial identity",
        ok,
        &format!("{} pairs, {:.1?}", pairs, elapsed),
    );
}

#[test]
fn criterion_03_translation() {
    let doc = run(Command::Translation, None, |_| {});
    let counts: Vec<usize> = doc.reports.iter().map(|r| r.rows.len()).collect();
    let ok = doc.pass && counts == vec![200, 200];
    report_line(
        3,
        "translation invariance",
        ok,
        &format!("{:?} cases", counts),
    );
}

#[test]
fn criterion_04_factorials() {
    let doc = run(Command::Factorials, None, |_| {});
    let mut oracle_ok = true;
    for p in [2u32, 3, 5, 7] {
        for m in 0..=200u64 {
            let direct = vp(&factorial(m), p).unwrap();
            oracle_ok &=
                factorial_valuation(Backend::PAdic(p), m) == Valuation::from_integer(direct as i64);
        }
    }
    let checked: Vec<u64> = rows(&doc, "factorials")
        .map(|(_, r)| r["checked"].as_u64().unwrap())
        .collect();
    let ok = doc.pass && oracle_ok && checked.iter().all(|&c| c == 10_001);
    report_line(
        4,
        "factorial bounds",
        ok,
        "m <= 10^4 for p in 2,3,5,7; m! factored for m <= 200",
    );
}

#[test]
fn criterion_05_algebra_action() {
    let doc = run(Command::Compose, None, |_| {});
    let exhaustive: u64 = rows(&doc, "compose")
        .filter_map(|(_, r)| r.get("checks").and_then(Value::as_u64))
        .sum();
    let fuzz = rows(&doc, "compose")
        .filter(|(_, r)| field(r, "case").starts_with("fuzz"))
        .count();
    let ok = doc.pass && fuzz == 400 && exhaustive > 0;
    report_line(
        5,
        "apply/compose coherence",
        ok,
        &format!("{} exhaustive checks, {} fuzz cases", exhaustive, fuzz),
    );
}

#[test]
fn criterion_06_claim2_divergence() {
    let mut ok = true;
    let mut detail = Vec::new();
    for b in [Backend::PAdic(2), Backend::Hahn] {
        let start = Instant::now();
        let fam = XiFamily::new(CosetScheme::for_backend(b));
        let pi = Uniformizer::standard(b);
        let r = verify_claim2(&fam, 30, &pi).unwrap();
        let elapsed = start.elapsed();
        for row in &r.rows {
            let a = row.alpha as u64;
            // oracle: v(ξ_α) = 0, so the valuation is α − v(α!) − 2α
            let fact = match b {
                Backend::PAdic(p) => vp(&factorial(a), p).unwrap() as i64,
                Backend::Hahn => 0,
            };
            let expected = Valuation::Finite(q(-(a as i64) - fact));
            ok &= row.valuation_lhs == expected
                && row.valuation_lhs <= row.valuation_rhs.shift(&q(TOLERANCE))
                && row.extra["gauss_valuation"] == "0"
                && row.extra["degree"] == ((a + 1) * a * a).to_string();
        }
        ok &= r.pass
            && r.rows.len() == 31
            && r.rows[30].extra["degree"] == "27900"
            && elapsed < CLAIM2_BUDGET;
        detail.push(format!("{}: {:.1?}", b, elapsed));
    }
    report_line(6, "claim 2 divergence", ok, &detail.join(", "));
}

/// `v(ξ_α|_Z) = α² Σ_{β≤α} min(v(a − λ_β), r)` by multiplicativity of the
/// Gauss norm.
fn disc_oracle(b: Backend, center: &BigRational, r: &BigRational, alpha: u64) -> BigRational {
    let mut total = q(0);
    for beta in 0..=alpha {
        let lambda = match b {
            Backend::PAdic(p) => q((beta % p as u64) as i64),
            Backend::Hahn => enumerated_rational(beta),
        };
        let diff = center - lambda;
        let v = match b {
            Backend::PAdic(p) => {
                let num = vp(diff.numer(), p).map(|v| q(v as i64));
                num.map(|v| v - q(vp(diff.denom(), p).unwrap() as i64))
            }
            Backend::Hahn => (diff != q(0)).then(|| q(0)),
        };
        total += v.map_or(r.clone(), |v| v.min(r.clone()));
    }
    total * q((alpha * alpha) as i64)
}

#[test]
fn criterion_07_claim1_discs() {
    let mut ok = true;
    let mut detail = Vec::new();
    for b in [Backend::PAdic(2), Backend::Hahn] {
        let doc = run(Command::Claim1, Some(b), |s| s.alpha_max = Some(12));
        let discs: Vec<&Report> = doc
            .reports
            .iter()
            .filter(|r| r.kind == "claim1-disc")
            .collect();
        for r in &discs {
            let center = parse_scalar(&r.params["center"], b)
                .unwrap()
                .as_rational()
                .unwrap();
            let radius = parse_rational(&r.params["radius_valuation"]).unwrap();
            for row in &r.rows {
                let alpha = row["alpha"].as_u64().unwrap();
                let lhs = valuation(field(row, "valuation_lhs")).unwrap();
                let rhs = valuation(field(row, "valuation_rhs")).unwrap();
                ok &= lhs == disc_oracle(b, &center, &radius, alpha) && lhs >= rhs;
            }
            ok &= r.pass && r.rows.len() == 13 && r.params["verdict"] == "decreasing-witnessed";
        }
        ok &= discs.len() >= 5;
        detail.push(format!("{} discs on {}", discs.len(), b));
    }
    report_line(7, "claim 1 disc bound", ok, &detail.join(", "));
}

/// `v_p(binom(n, k))` by Kummer: the number of carries adding `k` and
/// `n − k` in base `p`.
fn kummer(n: u64, k: u64, p: u64) -> u64 {
    let (mut a, mut b, mut carry, mut count) = (k, n - k, 0, 0);
    while a > 0 || b > 0 || carry > 0 {
        let s = a % p + b % p + carry;
        carry = u64::from(s >= p);
        count += carry;
        a /= p;
        b /= p;
    }
    count
}

#[test]
fn criterion_08_claim1_laurent() {
    let mut ok = true;
    let mut detail = Vec::new();
    for b in [Backend::PAdic(2), Backend::Hahn] {
        let doc = run(Command::Claim1, Some(b), |_| {});
        let holes: Vec<&Report> = doc
            .reports
            .iter()
            .filter(|r| r.kind == "claim1-laurent")
            .collect();
        for r in &holes {
            let (mut monomial, mut hole, mut tail) = (0, 0, 0);
            for row in &r.rows {
                let lhs = valuation(field(row, "valuation_lhs"));
                match field(row, "kind") {
                    "monomial" => {
                        monomial += 1;
                        let (a, d) = (
                            row["alpha"].as_u64().unwrap(),
                            row["delta"].as_u64().unwrap(),
                        );
                        // ξ_α ∂^{(α)} x^δ = binom(δ, α) ξ_α x^{δ−α} and v(ξ_α) = 0
                        let expected = (d >= a).then(|| match b {
                            Backend::PAdic(p) => q(kummer(d, a, p as u64) as i64),
                            Backend::Hahn => q(0),
                        });
                        ok &= lhs == expected && lhs.is_none_or(|v| v >= q(0));
                    }
                    "hole" => {
                        hole += 1;
                        let rhs = valuation(field(row, "valuation_rhs")).unwrap();
                        ok &= lhs.is_some_and(|v| v >= rhs);
                    }
                    _ => tail += 1,
                }
            }
            let c = valuation(&r.params["C_valuation"]);
            ok &= r.pass
                && (monomial, hole, tail) == (11 * 21, 11 * 11, 11)
                && r.params.contains_key("stabilization_index")
                && c.is_some();
            detail.push(format!(
                "{} {}: stabilization {}, C {}",
                b,
                r.params["hole_center"],
                r.params["stabilization_index"],
                r.params["C_valuation"]
            ));
        }
        ok &= !holes.is_empty();
    }
    report_line(8, "claim 1 Laurent bounds", ok, &detail.join("; "));
}

#[test]
fn criterion_09_classifier() {
    let mut ok = true;
    for b in [Backend::PAdic(2), Backend::Hahn] {
        let doc = run(Command::Classify, Some(b), |_| {});
        let verdicts: Vec<(String, String)> = rows(&doc, "classify")
            .map(|(_, r)| {
                (
                    field(r, "family").to_string(),
                    field(r, "verdict").to_string(),
                )
            })
            .collect();
        let expected = [
            ("pi^(|a|^2)", "decreasing-witnessed"),
            ("1", "non-decreasing-witnessed"),
            ("pi^(2|a|)", "non-decreasing-witnessed"),
        ];
        for (name, verdict) in expected {
            ok &= verdicts.iter().any(|(f, v)| f == name && v == verdict);
        }
        for (_, r) in rows(&doc, "classify") {
            ok &= r["path_a"] == r["path_c"];
        }
        ok &= doc.pass;
    }
    report_line(
        9,
        "rapid-decrease classifier",
        ok,
        "worked families and (a)<=>(c) on shared bounds",
    );
}

#[test]
fn criterion_10_determinism() {
    let cfg = |seed| RunConfig {
        backend: None,
        command: Command::Suite,
        format: Format::Json,
        settings: Settings {
            seed,
            ..Settings::default()
        },
    };
    let first = execute(&cfg(7)).unwrap();
    let second = execute(&cfg(7)).unwrap();
    let (a, b) = (first.to_json(), second.to_json());
    let ok = a == b && first.to_csv().unwrap() == second.to_csv().unwrap() && first.pass;
    report_line(10, "determinism", ok, &format!("{} bytes of JSON", a.len()));
}
