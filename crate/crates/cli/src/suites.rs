use std::path::Path;

use anyhow::{bail, Context, Result};
use infdiff::affinoid::{sup_norm, Domain, Hole, MultiIndex, Poly, Polydisc};
use infdiff::counterexample::{
    verify_claim1_disc, verify_claim1_laurent, verify_claim2, ClaimReport, CosetScheme, XiFamily,
};
use infdiff::fuzz::{FuzzShape, Fuzzer};
use infdiff::operator::{
    combinatorial_delta, operator_norm_bracket, roundtrip, seminorm, symbol_decay_estimate,
    total_symbol, translation_check, DiffOperator, Normalization, OperatorOracle,
};
use infdiff::rapid::{classify, SymbolFamily, ValuationBound, Verdict};
use infdiff::scalar::{factorial_valuation, legendre, Backend, Scalar, Uniformizer, Valuation};
use infdiff::text::{format_operator, parse_operator, parse_rational};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::domain::parse_domain;
use crate::report::Report;
use crate::Settings;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Independent fuzz streams per suite and backend.
fn fuzzer(backend: Backend, seed: u64, suite: u64) -> Fuzzer {
    let tag = match backend {
        Backend::PAdic(p) => p as u64,
        Backend::Hahn => 0,
    };
    let mixed = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(suite.wrapping_mul(0xBF58_476D_1CE4_E5B9))
        .wrapping_add(tag);
    Fuzzer::new(backend, mixed)
}

fn load_operator(path: &Path, backend: Backend) -> Result<DiffOperator> {
    let src =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_operator(&src, backend).with_context(|| format!("in {}", path.display()))
}

fn operator_id(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn roundtrip_suite(b: Backend, s: &Settings) -> Result<Report> {
    if let Some(path) = &s.operator {
        let op = load_operator(path, b)?;
        let id = operator_id(path);
        let r = roundtrip(&op, &id);
        let mut report = Report::new("roundtrip", b, &id).param("order", op.order());
        for c in &r.checks {
            report.push(c);
        }
        return Ok(report);
    }
    let count = s.count.unwrap_or(500);
    let mut f = fuzzer(b, s.seed, 1);
    let mut report = Report::new("roundtrip", b, "fuzz")
        .param("operators", count)
        .param("max_order", 4)
        .param("max_coefficient_degree", 3);
    for i in 0..count {
        let dim = s.d.unwrap_or(1 + i % 3);
        let op = f.operator(FuzzShape {
            dim,
            order: 4,
            coeff_degree: 3,
            max_terms: 4,
        });
        let id = format!("rt-{}", i);
        let r = roundtrip(&op, &id);
        let failures: Vec<String> = r
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.index.to_string())
            .collect();
        report.push(&json!({
            "operator_id": id,
            "dim": dim,
            "order": op.order(),
            "checks": r.checks.len(),
            "failures": failures.join(" "),
            "pass": r.pass,
        }));
    }
    Ok(report)
}

/// `Σ_{β≤γ} ∂^α(x^β)|_{x=1} binom(γ,β)(−1)^{|γ−β|} = γ! δ_{α,γ}` for all
/// `α ≤ γ`.
pub fn identity_suite(s: &Settings) -> Result<Report> {
    let cap = s.gamma_cap.unwrap_or(8);
    let dims: Vec<usize> = match s.d {
        Some(d) => vec![d],
        None => vec![1, 2, 3],
    };
    let mut report = Report::new("identity", "integer", "combinatorial-delta")
        .param("gamma_cap", cap)
        .param("dims", join(&dims));
    for &d in &dims {
        for gamma in MultiIndex::up_to_degree(d, cap) {
            let mut pairs = 0u64;
            let mut bad = Vec::new();
            for alpha in gamma.lower_box() {
                let got = combinatorial_delta(&alpha, &gamma)?;
                let expected = if alpha == gamma {
                    gamma.factorial()
                } else {
                    BigInt::from(0)
                };
                pairs += 1;
                if got != expected {
                    bad.push(format!("{}:{}", alpha, got));
                }
            }
            report.push(&json!({
                "dim": d,
                "gamma": gamma.to_string(),
                "pairs": pairs,
                "failures": bad.join(" "),
                "pass": bad.is_empty(),
            }));
        }
    }
    Ok(report)
}

pub fn translation_suite(b: Backend, s: &Settings) -> Result<Report> {
    let count = s.count.unwrap_or(200);
    let mut f = fuzzer(b, s.seed, 2);
    let mut report = Report::new("translation", b, "fuzz").param("cases", count);
    for i in 0..count {
        let dim = s.d.unwrap_or(1 + i % 3);
        let op = f.operator(FuzzShape {
            dim,
            order: 3,
            coeff_degree: 2,
            max_terms: 3,
        });
        let c = f.center(dim);
        let alpha = f.multi_index(dim, 3);
        let ok = translation_check(&OperatorOracle::new(op, 3), &c, &alpha)?;
        report.push(&json!({
            "case": i,
            "dim": dim,
            "alpha": alpha.to_string(),
            "center": join(&c),
            "pass": ok,
        }));
    }
    Ok(report)
}

/// `v_p(m!) ≤ m/(p−1)` for every `m ≤ m_max`, with a cross-check of
/// Legendre's formula against a direct count of prime factors for small `m`.
pub fn factorial_suite(s: &Settings) -> Result<Report> {
    let m_max = s.m_max.unwrap_or(10_000);
    const DIRECT: u64 = 200;
    let mut report = Report::new("factorials", "all", "legendre")
        .param("m_max", m_max)
        .param("direct_cross_check", DIRECT);
    for p in [2u64, 3, 5, 7] {
        let mut bound_ok = true;
        let mut direct_ok = true;
        let mut direct = 0u64;
        for m in 0..=m_max {
            let v = legendre(m, p);
            bound_ok &= v * (p - 1) <= m;
            if m > 0 && m <= DIRECT {
                let mut k = m;
                while k % p == 0 {
                    k /= p;
                    direct += 1;
                }
                direct_ok &= v == direct
                    && factorial_valuation(Backend::PAdic(p as u32), m)
                        == Valuation::from_integer(v as i64);
            }
        }
        report.push(&json!({
            "p": p,
            "checked": m_max + 1,
            "bound": bound_ok,
            "cross_check": direct_ok,
            "pass": bound_ok && direct_ok,
        }));
    }
    let hahn_ok = (0..=m_max).all(|m| factorial_valuation(Backend::Hahn, m) == Valuation::zero());
    report.push(&json!({ "p": "hahn", "checked": m_max + 1, "bound": hahn_ok, "pass": hahn_ok }));
    Ok(report)
}

pub fn compose_suite(b: Backend, s: &Settings) -> Result<Report> {
    let count = s.count.unwrap_or(200);
    let mut report = Report::new("compose", b, "apply-compose").param("fuzz_cases", count);
    for d in 1..=2usize {
        // x^β ∂^α with |α|, |β| ≤ 2 against x^δ with |δ| ≤ 4
        let ops: Vec<DiffOperator> = MultiIndex::up_to_degree(d, 2)
            .into_iter()
            .flat_map(|alpha| {
                MultiIndex::up_to_degree(d, 2).into_iter().map(move |beta| {
                    DiffOperator::term(
                        Poly::monomial(Scalar::one(b), beta),
                        alpha.clone(),
                        Normalization::Plain,
                    )
                })
            })
            .collect();
        let polys: Vec<Poly> = MultiIndex::up_to_degree(d, 4)
            .into_iter()
            .map(|delta| Poly::monomial(Scalar::one(b), delta))
            .collect();
        let mut checks = 0u64;
        let mut failures = 0u64;
        for p in &ops {
            for r in &ops {
                let pr = p.compose(r)?;
                for g in &polys {
                    checks += 1;
                    if pr.apply(g)? != p.apply(&r.apply(g)?)? {
                        failures += 1;
                    }
                }
            }
        }
        report.push(&json!({
            "case": format!("exhaustive-d{}", d),
            "operators": ops.len(),
            "polynomials": polys.len(),
            "checks": checks,
            "failures": failures,
            "pass": failures == 0,
        }));
    }
    let mut f = fuzzer(b, s.seed, 3);
    for i in 0..count {
        let dim = s.d.unwrap_or(1 + i % 2);
        let shape = FuzzShape {
            dim,
            order: 3,
            coeff_degree: 2,
            max_terms: 3,
        };
        let (p, r) = (f.operator(shape), f.operator(shape));
        let g = f.poly(dim, 4, 4);
        let ok = p.compose(&r)?.apply(&g)? == p.apply(&r.apply(&g)?)?;
        report.push(&json!({ "case": format!("fuzz-{}", i), "dim": dim, "pass": ok }));
    }
    Ok(report)
}

pub fn classify_suite(b: Backend, s: &Settings) -> Result<Report> {
    let d = s.d.unwrap_or(1);
    let cap = s.alpha_max.unwrap_or(16);
    let r_max = s.r_max.unwrap_or(4);
    let pi = Uniformizer::standard(b);
    let pv = pi.valuation().clone();
    let mut report = Report::new("classify", b, "worked-families")
        .param("dim", d)
        .param("index_cap", cap)
        .param("r_max", r_max);

    let power = move |e: u32| Poly::constant(d, pi.value().pow(e));
    let square = {
        let power = power.clone();
        SymbolFamily::from_polys(d, move |a| power(a.degree() * a.degree()))
            .with_bound(ValuationBound::new(vec![q(0), q(0), pv.clone()]))
    };
    let one = SymbolFamily::from_polys(d, move |_| Poly::one(b, d))
        .with_bound(ValuationBound::new(vec![q(0)]));
    let linear = {
        let power = power.clone();
        SymbolFamily::from_polys(d, move |a| power(2 * a.degree()))
            .with_bound(ValuationBound::new(vec![q(0), &pv * q(2)]))
    };
    let families = [
        ("pi^(|a|^2)", square, Verdict::DecreasingWitnessed),
        ("1", one, Verdict::NonDecreasingWitnessed),
        ("pi^(2|a|)", linear, Verdict::NonDecreasingWitnessed),
    ];
    for (name, fam, expected) in families {
        let r = classify(&fam, &pv, r_max, cap);
        report.push(&json!({
            "family": name,
            "verdict": r.verdict,
            "expected": expected,
            "path_a": r.path_a.is_some(),
            "path_c": r.path_c.is_some(),
            "paths_agree": r.paths_agree,
            "witness_r": r.witness.as_ref().map(|w| w.r),
            "pass": r.verdict == expected && r.paths_agree,
        }));
    }

    // (a) and (c) on the same bound, whether or not it certifies decrease
    let bounds: [(&str, Vec<i64>); 5] = [
        ("n^2", vec![0, 0, 1]),
        ("n^2-5n", vec![0, -5, 1]),
        ("3n^2+7n-40", vec![-40, 7, 3]),
        ("n^3-n", vec![0, -1, 0, 1]),
        ("6n", vec![0, 6]),
    ];
    for (name, coeffs) in bounds {
        let bound = ValuationBound::new(coeffs.iter().map(|&c| q(c) * &pv).collect());
        let tight = bound.clone();
        let fam = SymbolFamily::from_valuations(d, move |a| {
            Valuation::Finite(tight.eval(&q(a.degree() as i64)))
        })
        .with_bound(bound);
        let r = classify(&fam, &pv, r_max, cap.min(12));
        report.push(&json!({
            "family": format!("bound {}", name),
            "verdict": r.verdict,
            "path_a": r.path_a.is_some(),
            "path_c": r.path_c.is_some(),
            "paths_agree": r.paths_agree,
            "pass": r.paths_agree,
        }));
    }
    Ok(report)
}

fn norms_row(
    op: &DiffOperator,
    other: &DiffOperator,
    dom: &Domain,
    cap: u32,
    id: &str,
) -> Result<serde_json::Value> {
    let mut ok = true;
    let mut sups = Vec::new();
    for (alpha, a) in op.to_plain().coeffs() {
        let sup = sup_norm(a, dom)?;
        let gauss = a.gauss_norm();
        ok &= match dom {
            Domain::Polydisc(_) => sup >= gauss,
            Domain::Holed(_) => sup == gauss,
        };
        sups.push(format!("{}:{}/{}", alpha, gauss, sup));
    }
    let (lower, upper) = match operator_norm_bracket(op, dom, cap) {
        Ok(br) => {
            ok &= br.upper <= br.lower;
            (br.lower.to_string(), br.upper.to_string())
        }
        Err(infdiff::Error::UnsupportedDomain(_)) => {
            ("unsupported".to_string(), "unsupported".to_string())
        }
        Err(e) => return Err(e.into()),
    };
    let composed = op.compose(other)?;
    let mut seminorms = Vec::new();
    for r in [0, -1, -2] {
        let r = q(r);
        let (a, b, ab) = (
            seminorm(op, &r),
            seminorm(other, &r),
            seminorm(&composed, &r),
        );
        ok &= ab >= &a + &b;
        seminorms.push(a.to_string());
    }
    Ok(json!({
        "operator_id": id,
        "gauss_and_sup": sups.join(" "),
        "seminorm_r0_r-1_r-2": seminorms.join(" "),
        "bracket_lower": lower,
        "bracket_upper": upper,
        "pass": ok,
    }))
}

fn fuzz_domain(f: &mut Fuzzer, dim: usize) -> Result<Domain> {
    let radii = (0..dim).map(|_| q(f.range(0, 2) as i64)).collect();
    Ok(Domain::Polydisc(Polydisc::new(f.center(dim), radii)?))
}

pub fn norms_suite(b: Backend, s: &Settings) -> Result<Report> {
    let cap = s.degree_cap.unwrap_or(6);
    let given = s
        .domain
        .as_deref()
        .map(|j| parse_domain(j, b))
        .transpose()?;
    let mut report = Report::new("norms", b, "norms").param("degree_cap", cap);
    if let Some(json) = &s.domain {
        report.set_param("domain", json);
    }
    if let Some(path) = &s.operator {
        let op = load_operator(path, b)?;
        let dom = given.unwrap_or_else(|| Domain::Polydisc(Polydisc::unit(b, op.dim())));
        let id = operator_id(path);
        report.id = id.clone();
        let identity =
            DiffOperator::derivation(b, MultiIndex::zeros(op.dim()), Normalization::Plain);
        report.push(&norms_row(&op, &identity, &dom, cap, &id)?);
        return Ok(report);
    }
    let count = s.count.unwrap_or(50);
    report.set_param("operators", count);
    let mut f = fuzzer(b, s.seed, 4);
    for i in 0..count {
        let dim = match &given {
            Some(dom) => dom.dim(),
            None => s.d.unwrap_or(1 + i % 2),
        };
        let shape = FuzzShape {
            dim,
            order: 3,
            coeff_degree: 2,
            max_terms: 3,
        };
        let (op, other) = (f.operator(shape), f.operator(shape));
        let dom = match &given {
            Some(dom) => dom.clone(),
            None => fuzz_domain(&mut f, dim)?,
        };
        report.push(&norms_row(&op, &other, &dom, cap, &format!("norms-{}", i))?);
    }
    Ok(report)
}

pub fn symbol_suite(b: Backend, s: &Settings) -> Result<Report> {
    let ops: Vec<(String, DiffOperator)> = match &s.operator {
        Some(path) => vec![(operator_id(path), load_operator(path, b)?)],
        None => {
            let mut f = fuzzer(b, s.seed, 5);
            (0..s.count.unwrap_or(5))
                .map(|i| {
                    let op = f.operator(FuzzShape {
                        dim: s.d.unwrap_or(1 + i % 2),
                        order: 3,
                        coeff_degree: 2,
                        max_terms: 3,
                    });
                    (format!("symbol-{}", i), op)
                })
                .collect()
        }
    };
    let mut report = Report::new("symbol", b, "total-symbol");
    for (id, op) in ops {
        let cap = s.degree_cap.unwrap_or(op.order());
        if cap < op.order() {
            bail!(
                "degree cap {} is below the order {} of {}",
                cap,
                op.order(),
                id
            );
        }
        let sym = total_symbol(&OperatorOracle::new(op.clone(), cap), cap)?;
        report.push(&json!({
            "operator_id": id,
            "operator": format_operator(&op).trim_end().replace('\n', "; "),
            "cap": cap,
            "total_symbol": sym.to_string(),
            "pass": roundtrip(&op, &id).pass,
        }));
    }
    Ok(report)
}

pub fn decay_suite(b: Backend, s: &Settings) -> Result<Vec<Report>> {
    let pi = Uniformizer::standard(b);
    let cap = s.degree_cap.unwrap_or(8);
    let cases: Vec<(String, DiffOperator, u32)> = match &s.operator {
        Some(path) => vec![(operator_id(path), load_operator(path, b)?, s.n.unwrap_or(1))],
        None => {
            let series = (0..=3u32).map(|a| {
                let c = Poly::constant(1, pi.value().pow(a * a));
                (MultiIndex::new(vec![a]), c)
            });
            vec![
                (
                    "d".to_string(),
                    DiffOperator::derivation(b, MultiIndex::new(vec![1]), Normalization::Plain),
                    s.n.unwrap_or(1),
                ),
                (
                    "zero".to_string(),
                    DiffOperator::zero(b, 1, Normalization::Plain),
                    s.n.unwrap_or(1),
                ),
                (
                    "sum-pi^(a^2)-d^a".to_string(),
                    DiffOperator::new(b, 1, Normalization::Plain, None, series)?,
                    s.n.unwrap_or(2),
                ),
            ]
        }
    };
    let mut out = Vec::new();
    for (id, op, n) in cases {
        let r = symbol_decay_estimate(&op, n, &pi, cap, &id)?;
        let mut report = Report::new("decay", b, &id)
            .param("n", n)
            .param("degree_cap", cap)
            .param("operator_norm_upper", &r.operator_norm_upper);
        for c in &r.checks {
            report.push(c);
        }
        report.require(r.pass);
        out.push(report);
    }
    Ok(out)
}

fn claim_report(c: ClaimReport, b: Backend) -> Report {
    let mut report = Report::new(&c.claim, b, &c.scheme);
    report.params = c.params;
    if let Some(i) = c.stabilization_index {
        report.set_param("stabilization_index", i);
    }
    if let Some(v) = c.verdict {
        report.set_param(
            "verdict",
            serde_json::to_value(v)
                .expect("verdicts serialize")
                .as_str()
                .unwrap_or(""),
        );
    }
    for row in &c.rows {
        report.push(row);
    }
    report.require(c.pass);
    report
}

pub fn claim2_suite(b: Backend, s: &Settings) -> Result<Report> {
    let fam = XiFamily::new(CosetScheme::for_backend(b));
    let c = verify_claim2(&fam, s.alpha_max.unwrap_or(30), &Uniformizer::standard(b))?;
    Ok(claim_report(c, b))
}

fn default_discs(b: Backend) -> Vec<(Scalar, BigRational)> {
    let table: &[(&str, &str)] = match b {
        Backend::PAdic(_) => &[("0", "1"), ("1", "1"), ("3", "2"), ("6", "3"), ("5", "2")],
        Backend::Hahn => &[
            ("0", "1"),
            ("1", "1/2"),
            ("-1", "2"),
            ("1/2", "1"),
            ("2", "3/2"),
        ],
    };
    table
        .iter()
        .map(|(c, r)| {
            let c = Scalar::from_rational(b, parse_rational(c).expect("literal"));
            (c, parse_rational(r).expect("literal"))
        })
        .collect()
}

fn default_holes(b: Backend) -> Vec<Hole> {
    let table: &[(&str, &str)] = match b {
        Backend::PAdic(_) => &[("1", "2"), ("5", "5"), ("0", "1")],
        Backend::Hahn => &[("1", "2"), ("-1/2", "3/2")],
    };
    table
        .iter()
        .map(|(c, r)| Hole {
            center: Scalar::from_rational(b, parse_rational(c).expect("literal")),
            radius: parse_rational(r).expect("literal"),
        })
        .collect()
}

pub fn claim1_suite(b: Backend, s: &Settings) -> Result<Vec<Report>> {
    let fam = XiFamily::new(CosetScheme::for_backend(b));
    let pi = Uniformizer::standard(b);
    let (mut discs, mut holes) = (default_discs(b), default_holes(b));
    if let Some(json) = &s.domain {
        match parse_domain(json, b)? {
            Domain::Polydisc(p) if p.dim() == 1 => {
                discs = vec![(p.center()[0].clone(), p.radii()[0].clone())];
                holes = Vec::new();
            }
            Domain::Polydisc(_) => bail!("claim 1 lives in one variable"),
            Domain::Holed(h) => {
                if h.holes().len() != 1 {
                    bail!("Laurent checks take exactly one hole");
                }
                discs = Vec::new();
                holes = h.holes().to_vec();
            }
        }
    }
    let mut out = Vec::new();
    for (c, r) in &discs {
        let rep = verify_claim1_disc(&fam, c, r, s.alpha_max.unwrap_or(12), &pi)?;
        let mut report = claim_report(rep, b);
        report.id = format!("{} center {} radius {}", report.id, c, r);
        out.push(report);
    }
    for h in &holes {
        let rep = verify_claim1_laurent(
            &fam,
            h,
            s.alpha_max.unwrap_or(10),
            s.beta_max.unwrap_or(10),
            s.delta_max.unwrap_or(20),
            &pi,
        )?;
        let mut report = claim_report(rep, b);
        report.id = format!("{} hole {} radius {}", report.id, h.center, h.radius);
        out.push(report);
    }
    Ok(out)
}
