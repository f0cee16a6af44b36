use std::fmt::Write as _;
use std::fs;

use serde::Serialize;
use serde_json::{json, Value};

use cubeharm::bernoulli::{b_scaled, bernoulli_positive};
use cubeharm::coefficients::{c_recursion_table, check_domain, coefficient, CoefficientRecord, Route};
use cubeharm::exact::scalar::{approx, format_rational};
use cubeharm::generating::{f_nm, g_nm, ghat_nm, identity_suite};
use cubeharm::harmonics::{annihilation_check, derivative_module, harmonic_basis_mvp_suite, mvp_check};
use cubeharm::invariants::{
    delta_poly, elementary_symmetric_sq, expand_in_invariant_basis, g_poly, h_poly, tau_poly,
};
use cubeharm::{QMultiPoly, QPoly, Rational};

use crate::args::{
    BernoulliArgs, CoeffArgs, Format, GenArgs, GenWhat, InvariantArgs, InvariantWhat, TableArgs, Verify,
};
use crate::CliError;

/// Rendered output and whether every check in it passed.
pub struct Outcome {
    pub body: String,
    pub ok: bool,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self { body, ok: true }
    }
}

fn q(v: &Rational) -> String {
    format_rational(v)
}

/// `p/q`, with a marked decimal approximation when it is not an integer.
fn q_text(v: &Rational) -> String {
    if v.is_integer() {
        q(v)
    } else {
        format!("{}  (~ {:.9})", q(v), approx(v))
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_rows(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn poly_coefficients(p: &QPoly) -> Vec<String> {
    p.coeffs().iter().map(q).collect()
}

pub fn coeff(args: &CoeffArgs, format: Format) -> Result<Outcome, CliError> {
    check_domain(args.n, args.m, args.k)?;
    let routes: Vec<Route> = if args.route == "all" {
        Route::ALL.to_vec()
    } else {
        vec![args.route.parse()?]
    };
    let single = routes.len() == 1;
    let mut records: Vec<CoefficientRecord> = Vec::new();
    let mut skipped: Vec<(Route, String)> = Vec::new();
    for route in routes {
        match coefficient(route, args.n, args.m, args.k) {
            Ok(r) => records.push(r),
            // with `all`, routes that do not cover the cell are reported, not fatal
            Err(e) if !single => skipped.push((route, e.to_string())),
            Err(e) => return Err(e.into()),
        }
    }
    let agree = records.windows(2).all(|w| w[0].value == w[1].value);
    let body = match format {
        Format::Json => to_json(&json!({
            "n": args.n, "m": args.m, "k": args.k,
            "records": records,
            "skipped": skipped.iter().map(|(r, why)| json!({"route": r, "reason": why})).collect::<Vec<_>>(),
            "agree": agree,
        })),
        Format::Csv => csv_rows(
            &["n", "m", "k", "route", "value"],
            records
                .iter()
                .map(|r| vec![r.n.to_string(), r.m.to_string(), r.k.to_string(), r.route.to_string(), q(&r.value)])
                .collect(),
        ),
        Format::Text => {
            let mut s = String::new();
            for r in &records {
                let _ = writeln!(s, "{:<11} {}", r.route.name(), q_text(&r.value));
            }
            for (r, why) in &skipped {
                let _ = writeln!(s, "{:<11} n/a ({why})", r.name());
            }
            if !single {
                let verdict = if agree { "all routes agree" } else { "ROUTES DISAGREE" };
                let _ = writeln!(s, "{verdict}");
            }
            s
        }
    };
    Ok(Outcome { body, ok: agree })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TableRecord {
    n: usize,
    m: usize,
    k: usize,
    value: String,
    routes_agreeing: Vec<Route>,
}

/// Routes evaluated for every table cell. The two enumerative routes are
/// limited by cost: the oracle to `n <= 3`, the matrix sum to `n <= 5`
/// (at `n = 6` it visits about 4.6e7 matrices).
const TABLE_ROUTES: [Route; 3] = [Route::Partition, Route::Young, Route::Generating];
const TABLE_ORACLE_MAX: usize = 3;
const TABLE_MATRIX_MAX: usize = 5;

pub fn table(args: &TableArgs, format: Format) -> Result<Outcome, CliError> {
    if args.n == 0 || args.n > args.max_n {
        return Err(CliError::Usage(format!(
            "table needs 1 <= n <= {} (got {}); raise --max-n to go further",
            args.max_n, args.n
        )));
    }
    let recursion = c_recursion_table(args.n, args.n)?;
    let mut records = Vec::new();
    let mut ok = true;
    for n in 1..=args.n {
        for m in 1..=n {
            for k in 0..=n {
                let reference = recursion.get(n, m, k).expect("filled").clone();
                let mut agreeing = Vec::new();
                let mut consider = |route: Route, v: Rational| {
                    if v == reference {
                        agreeing.push(route);
                    } else {
                        ok = false;
                    }
                };
                if n <= TABLE_ORACLE_MAX {
                    consider(Route::Oracle, coefficient(Route::Oracle, n, m, k)?.value);
                }
                if n <= TABLE_MATRIX_MAX {
                    consider(Route::Matrix, coefficient(Route::Matrix, n, m, k)?.value);
                }
                for route in TABLE_ROUTES {
                    consider(route, coefficient(route, n, m, k)?.value);
                }
                consider(Route::Recursion, reference.clone());
                if let Ok(r) = coefficient(Route::Extremal, n, m, k) {
                    consider(Route::Extremal, r.value);
                }
                agreeing.sort();
                records.push(TableRecord {
                    n,
                    m,
                    k,
                    value: q(&reference),
                    routes_agreeing: agreeing,
                });
            }
        }
    }
    let body = match format {
        Format::Json => to_json(&records),
        Format::Csv | Format::Text => csv_rows(
            &["n", "m", "k", "value", "routesAgreeing"],
            records
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.m.to_string(),
                        r.k.to_string(),
                        r.value.clone(),
                        r.routes_agreeing.iter().map(|x| x.name()).collect::<Vec<_>>().join(";"),
                    ]
                })
                .collect(),
        ),
    };
    Ok(Outcome { body, ok })
}

pub fn gen(args: &GenArgs, format: Format) -> Result<Outcome, CliError> {
    let n = args.n.unwrap_or(args.m);
    let (name, p) = match args.what {
        GenWhat::G => ("G", g_nm(n, args.m)?),
        GenWhat::Ghat => ("Ghat", ghat_nm(n, args.m)?),
        GenWhat::F => ("F", f_nm(n, args.m)?),
    };
    let body = match format {
        Format::Json => to_json(&json!({
            "what": name, "n": n, "m": args.m,
            "coefficients": poly_coefficients(&p),
        })),
        Format::Csv => csv_rows(
            &["power", "coefficient"],
            poly_coefficients(&p)
                .into_iter()
                .enumerate()
                .map(|(i, c)| vec![i.to_string(), c])
                .collect(),
        ),
        Format::Text => format!("{name}_{{{n},{}}}(t) = {p}\n", args.m),
    };
    Ok(Outcome::ok(body))
}

pub fn bernoulli(args: &BernoulliArgs, format: Format) -> Result<Outcome, CliError> {
    let rows: Vec<(usize, Rational, Rational)> = (1..=args.count)
        .map(|m| Ok((m, bernoulli_positive(m)?, b_scaled(m)?)))
        .collect::<Result<_, cubeharm::Error>>()?;
    let body = match format {
        Format::Json => to_json(
            &rows
                .iter()
                .map(|(m, bm, sm)| json!({"m": m, "B": q(bm), "b": q(sm)}))
                .collect::<Vec<_>>(),
        ),
        Format::Csv => csv_rows(
            &["m", "B", "b"],
            rows.iter().map(|(m, bm, sm)| vec![m.to_string(), q(bm), q(sm)]).collect(),
        ),
        Format::Text => {
            let mut s = String::new();
            for (m, bm, sm) in &rows {
                let _ = writeln!(s, "m = {m:<3} B = {:<24} b = {}", q(bm), q(sm));
            }
            s
        }
    };
    Ok(Outcome::ok(body))
}

fn render_multipoly(label: &str, p: &QMultiPoly, format: Format) -> String {
    match format {
        Format::Json => {
            let terms: Value = serde_json::from_str(&p.to_json()).expect("canonical JSON");
            to_json(&json!({"what": label, "nvars": p.nvars(), "terms": terms}))
        }
        Format::Csv => csv_rows(
            &["exponents", "coefficient"],
            p.canonical_terms()
                .into_iter()
                .map(|t| {
                    let exps = t.0.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                    vec![exps, t.1]
                })
                .collect(),
        ),
        Format::Text => format!("{label} = {p}\n"),
    }
}

pub fn invariant(args: &InvariantArgs, format: Format) -> Result<Outcome, CliError> {
    let (n, k, m) = (args.n, args.k, args.m);
    let body = match args.what {
        InvariantWhat::H => render_multipoly(&format!("h_{m}^({k})"), &h_poly(n, k, m as u32)?, format),
        InvariantWhat::G => render_multipoly(&format!("g_{m}^({k})"), &g_poly(n, k, m as u32)?, format),
        InvariantWhat::Tau => render_multipoly(&format!("tau_{m}^({k})"), &tau_poly(n, k, m as u32)?, format),
        InvariantWhat::E => render_multipoly(&format!("e_{}", 2 * m), &elementary_symmetric_sq(n, m)?, format),
        InvariantWhat::Delta => render_multipoly("Delta", &delta_poly(n)?, format),
        InvariantWhat::Expansion => {
            let e = expand_in_invariant_basis(n, m, k)?;
            let lower: Vec<(String, String)> = e
                .lower_terms
                .iter()
                .map(|(exps, c)| {
                    let name = exps
                        .iter()
                        .enumerate()
                        .filter(|(_, &a)| a > 0)
                        .map(|(i, &a)| if a == 1 { format!("e{}", 2 * i + 2) } else { format!("e{}^{a}", 2 * i + 2) })
                        .collect::<Vec<_>>()
                        .join("*");
                    (name, q(c))
                })
                .collect();
            match format {
                Format::Json => to_json(&json!({
                    "n": n, "m": m, "k": k,
                    "leading": q(&e.leading),
                    "lower": lower.iter().map(|(t, c)| json!({"term": t, "coefficient": c})).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut rows = vec![vec![format!("e{}", 2 * m), q(&e.leading)]];
                    rows.extend(lower.into_iter().map(|(t, c)| vec![t, c]));
                    csv_rows(&["term", "coefficient"], rows)
                }
                Format::Text => {
                    let mut s = format!("tau_{}^({k}) = ({})*e{}", 2 * m, q(&e.leading), 2 * m);
                    for (t, c) in lower {
                        let _ = write!(s, " + ({c})*{t}");
                    }
                    s.push('\n');
                    s
                }
            }
        }
    };
    Ok(Outcome::ok(body))
}

/// One verdict line per check, then a summary block.
struct Checks {
    command: String,
    lines: Vec<(bool, String)>,
    details: Value,
}

impl Checks {
    fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            lines: Vec::new(),
            details: Value::Null,
        }
    }

    fn push(&mut self, passed: bool, what: String) {
        self.lines.push((passed, what));
    }

    fn render(self, format: Format) -> Outcome {
        let passed = self.lines.iter().filter(|(p, _)| *p).count();
        let failed = self.lines.len() - passed;
        let ok = failed == 0;
        let summary = json!({"command": self.command, "passed": passed, "failed": failed, "ok": ok});
        let body = match format {
            Format::Json => to_json(&json!({
                "summary": summary,
                "checks": self.lines.iter().map(|(p, w)| json!({"passed": p, "check": w})).collect::<Vec<_>>(),
                "details": self.details,
            })),
            Format::Csv => csv_rows(
                &["verdict", "check"],
                self.lines
                    .iter()
                    .map(|(p, w)| vec![if *p { "PASS" } else { "FAIL" }.to_string(), w.clone()])
                    .collect(),
            ),
            Format::Text => {
                let mut s = String::new();
                for (p, w) in &self.lines {
                    let _ = writeln!(s, "{} {w}", if *p { "PASS" } else { "FAIL" });
                }
                let _ = writeln!(s, "--- summary ---");
                let _ = writeln!(s, "{summary}");
                s
            }
        };
        Outcome { body, ok }
    }
}

fn read_polynomial(path: &std::path::Path, n: usize) -> Result<QMultiPoly, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(QMultiPoly::from_json(&text, Some(n))?)
}

pub fn verify(what: &Verify, format: Format) -> Result<Outcome, CliError> {
    match what {
        Verify::Identities { order } => {
            let report = identity_suite(*order)?;
            let mut checks = Checks::new("verify identities");
            for c in &report.checks {
                let detail = match c.first_mismatch {
                    None => format!("{} (mod z^{})", c.name, order + 1),
                    Some(j) => format!("{} first differs at z^{j}", c.name),
                };
                checks.push(c.passed, detail);
            }
            Ok(checks.render(format))
        }
        Verify::Mvp {
            n,
            k,
            f,
            delta,
            basis,
            large,
        } => {
            let n = *n;
            let max_n = large.max_n();
            if n == 0 || n > max_n {
                return Err(CliError::Usage(format!(
                    "verify mvp needs 1 <= n <= {max_n} (pass --allow-n4 for n = 4)"
                )));
            }
            let (label, poly) = match (f, delta) {
                (Some(path), _) => (path.display().to_string(), read_polynomial(path, n)?),
                (None, true) => ("Delta".to_string(), delta_poly(n)?),
                (None, false) if *basis => ("Delta".to_string(), delta_poly(n)?),
                (None, false) => return Err(CliError::Usage("verify mvp needs --f FILE or --delta".into())),
            };
            let ks: Vec<usize> = match k {
                Some(k) if *k > n => {
                    return Err(CliError::Usage(format!("k = {k} exceeds n = {n}")));
                }
                Some(k) => vec![*k],
                None => (0..=n).collect(),
            };
            let mut checks = Checks::new("verify mvp");
            let mut residuals = serde_json::Map::new();
            for k in ks {
                let rep = mvp_check(&poly, n, k)?;
                let line = if rep.holds {
                    format!("mean value property of {label} on the {k}-skeleton (n = {n})")
                } else {
                    format!("mean value property of {label} on the {k}-skeleton (n = {n}); residual {}", rep.residual)
                };
                residuals.insert(k.to_string(), serde_json::from_str(&rep.residual.to_json()).expect("json"));
                checks.push(rep.holds, line);
            }
            if *basis {
                let rep = harmonic_basis_mvp_suite(n, max_n)?;
                checks.push(
                    rep.dimension == rep.expected_dimension,
                    format!("derivative module dimension {} = 2^n n! = {}", rep.dimension, rep.expected_dimension),
                );
                checks.push(
                    rep.failures.is_empty(),
                    format!("every basis element satisfies the mean value property for k = 0..{n}"),
                );
                checks.push(rep.closed, "basis is closed under partial derivatives".to_string());
            }
            checks.details = json!({"residuals": residuals});
            Ok(checks.render(format))
        }
        Verify::Dimension { n, large } => {
            let module = derivative_module(*n, large.max_n())?;
            let expected: usize = (1..=*n).product::<usize>() << *n;
            let mut checks = Checks::new("verify dimension");
            checks.push(
                module.dimension() == expected,
                format!("dim span of derivatives of Delta = {} (expected {expected}) for n = {n}", module.dimension()),
            );
            checks.details = json!({
                "n": n,
                "dimension": module.dimension(),
                "byDegree": module.by_degree.iter().map(|(d, v)| (d.to_string(), v.len())).collect::<std::collections::BTreeMap<_, _>>(),
            });
            Ok(checks.render(format))
        }
        Verify::Annihilation { n } => {
            if *n == 0 {
                return Err(CliError::Usage("n must be at least 1".into()));
            }
            let mut checks = Checks::new("verify annihilation");
            for m in 1..=*n {
                for k in 0..=*n {
                    let ok = annihilation_check(*n, m, k)?;
                    checks.push(ok, format!("tau_{}^({k})(d) Delta = 0 for n = {n}", 2 * m));
                }
            }
            Ok(checks.render(format))
        }
        Verify::Routes { n, oracle_max } => {
            if *n == 0 {
                return Err(CliError::Usage("n must be at least 1".into()));
            }
            let table = c_recursion_table(*n, *n)?;
            let mut checks = Checks::new("verify routes");
            for nn in 1..=*n {
                for m in 1..=nn {
                    for k in 0..=nn {
                        let reference = table.get(nn, m, k).expect("filled");
                        let mut disagreeing = Vec::new();
                        let mut routes = vec![Route::Matrix, Route::Partition, Route::Young, Route::Generating];
                        if nn <= *oracle_max {
                            routes.push(Route::Oracle);
                        }
                        if coefficient(Route::Extremal, nn, m, k).is_ok() {
                            routes.push(Route::Extremal);
                        }
                        for route in routes {
                            if &coefficient(route, nn, m, k)?.value != reference {
                                disagreeing.push(route.name());
                            }
                        }
                        let line = if disagreeing.is_empty() {
                            format!("c({nn},{m},{k}) = {}", q(reference))
                        } else {
                            format!("c({nn},{m},{k}) = {} disputed by {}", q(reference), disagreeing.join(","))
                        };
                        checks.push(disagreeing.is_empty() && reference > &Rational::from_integer(0.into()), line);
                    }
                }
            }
            Ok(checks.render(format))
        }
    }
}
