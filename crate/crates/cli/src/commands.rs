use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use hyperbell::egf::{iterated_exponential, stirling_series, Series};
use hyperbell::enumerator::{census, distinct_serializations, iterate_partitions};
use hyperbell::exact::{Nat, Rat};
use hyperbell::triangles::{
    average_cardinality, bell_ratio, finite_difference_check, global_cache, singleton_share,
    CellResult, Fault, Identity, Triangle, Verifier,
};
use serde_json::{json, Map, Value};

use crate::cache::{self, LoadOutcome, Rejection};
use crate::output::{decimal, exact, Kind, OutputDocument, Section};
use crate::{AsymptoticArgs, CliError, CliResult, EgfArgs, EnumerateArgs, Format, TableArgs, TableKind, VerifyArgs};

/// Largest `n` any table command accepts.
pub const MAX_N: usize = 200;
/// Largest order any table command accepts.
pub const MAX_M: usize = 1000;
pub const MAX_EGF_ORDER: usize = 60;
/// Outside-in sums enumerate compositions; `all` clamps them to this `n`.
const OUTSIDE_IN_N: usize = 16;

pub struct Context {
    pub format: Format,
    pub precision: usize,
    pub cache: Option<PathBuf>,
}

impl Context {
    /// `S^(m)` over `0..=n_max`, through the disk cache when one is set.
    fn triangle(&self, n_max: usize, m: usize) -> CliResult<Arc<Triangle>> {
        let Some(dir) = &self.cache else {
            return Ok(global_cache().get(n_max, m));
        };
        let (t, outcome) = cache::load_or_compute(dir, n_max, m)?;
        if let LoadOutcome::Recomputed(why) = outcome {
            if why != Rejection::Missing {
                eprintln!("hyperbell: cached triangle (n_max={n_max}, m={m}) rejected ({why:?}); recomputed");
            }
        }
        Ok(t)
    }

    fn emit(&self, doc: &OutputDocument, out: &mut dyn Write) -> CliResult<()> {
        out.write_all(doc.render(self.format).as_bytes())?;
        Ok(())
    }

    fn rational(&self, r: &Rat) -> Value {
        json!({ "exact": exact(r), "decimal": decimal(r, self.precision) })
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_n(name: &str, n: usize) -> CliResult<()> {
    if n == 0 || n > MAX_N {
        return Err(usage(format!("--{name} must be in 1..={MAX_N}, got {n}")));
    }
    Ok(())
}

fn check_m(name: &str, m: usize) -> CliResult<()> {
    if m == 0 || m > MAX_M {
        return Err(usage(format!("--{name} must be in 1..={MAX_M}, got {m}")));
    }
    Ok(())
}

pub fn table(ctx: &Context, args: &TableArgs, out: &mut dyn Write) -> CliResult<()> {
    if args.kind == TableKind::Stirling {
        let m = args.m.ok_or_else(|| usage("--kind stirling needs --m"))?;
        let n_max = if args.n.is_some() { None } else { Some(args.n_max) };
        return stirling(ctx, m, args.n, n_max, out);
    }
    check_n("n-max", args.n_max)?;
    check_m("m-max", args.m_max)?;
    let n_max = args.n_max;
    let mut doc = OutputDocument::new(
        Kind::BellTable,
        vec![("n_max", n_max.to_string()), ("m_max", args.m_max.to_string())],
    );
    let mut columns = vec!["m".to_string()];
    columns.extend((1..=n_max).map(|n| n.to_string()));
    let mut section = Section::new(columns);
    let mut payload = Map::new();
    for m in 1..=args.m_max {
        let t = ctx.triangle(n_max, m)?;
        let values: Vec<String> = (1..=n_max).map(|n| t.row_sum(n).to_string()).collect();
        let by_n: Map<String, Value> = values
            .iter()
            .enumerate()
            .map(|(i, v)| ((i + 1).to_string(), Value::String(v.clone())))
            .collect();
        payload.insert(m.to_string(), Value::Object(by_n));
        let mut row = vec![m.to_string()];
        row.extend(values);
        section.push(row);
    }
    doc.sections.push(section);
    doc.payload = Value::Object(payload);
    ctx.emit(&doc, out)
}

pub fn stirling(
    ctx: &Context,
    m: usize,
    n: Option<usize>,
    n_max: Option<usize>,
    out: &mut dyn Write,
) -> CliResult<()> {
    check_m("m", m)?;
    let (size, rows): (usize, Vec<usize>) = match (n, n_max) {
        (Some(n), _) => (n, vec![n]),
        (None, Some(n_max)) => (n_max, (1..=n_max).collect()),
        (None, None) => (8, (1..=8).collect()),
    };
    check_n(if n.is_some() { "n" } else { "n-max" }, size)?;
    let t = ctx.triangle(size, m)?;
    let mut params = vec![("m", m.to_string())];
    match n {
        Some(n) => params.push(("n", n.to_string())),
        None => params.push(("n_max", size.to_string())),
    }
    let mut doc = OutputDocument::new(Kind::StirlingTable, params);
    let mut columns = vec!["n".to_string()];
    columns.extend((1..=size).map(|k| k.to_string()));
    columns.push("bell".into());
    let mut section = Section::new(columns);
    let mut payload_rows = Map::new();
    for &row_n in &rows {
        let mut row = vec![row_n.to_string()];
        let mut entries = Map::new();
        for k in 1..=size {
            if k <= row_n {
                let v = t.get(row_n, k).to_string();
                entries.insert(k.to_string(), Value::String(v.clone()));
                row.push(v);
            } else {
                row.push(String::new());
            }
        }
        let bell = t.row_sum(row_n).to_string();
        row.push(bell.clone());
        section.push(row);
        payload_rows.insert(row_n.to_string(), json!({ "stirling": entries, "bell": bell }));
    }
    doc.sections.push(section);
    doc.payload = json!({ "m": m.to_string(), "rows": payload_rows });
    ctx.emit(&doc, out)
}

pub fn enumerate(ctx: &Context, args: &EnumerateArgs, out: &mut dyn Write) -> CliResult<()> {
    check_n("n", args.n)?;
    check_m("m", args.m)?;
    if args.list {
        for p in iterate_partitions(args.n, args.m, args.budget)? {
            writeln!(out, "{p}")?;
        }
        return Ok(());
    }
    let c = census(args.n, args.m, args.budget)?;
    let mut doc = OutputDocument::new(
        Kind::Census,
        vec![("n", args.n.to_string()), ("m", args.m.to_string())],
    );
    let mut section = Section::new(vec!["k".into(), "count".into()]);
    let mut counts = Map::new();
    for k in 1..=args.n {
        let v = c.count(k).to_string();
        section.push(vec![k.to_string(), v.clone()]);
        counts.insert(k.to_string(), Value::String(v));
    }
    section.push(vec!["total".into(), c.total.to_string()]);
    doc.sections.push(section);
    doc.payload = json!({ "counts": counts, "total": c.total.to_string() });
    ctx.emit(&doc, out)
}

/// Everything `verify` knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Identity(Identity),
    EgfIntegrality,
    EgfComposition,
    EgfStacking,
    EgfStirling,
    EnumCount,
    EnumCensus,
    EnumDistinct,
}

impl Check {
    pub fn all() -> Vec<Check> {
        let mut v: Vec<Check> = Identity::ALL.into_iter().map(Check::Identity).collect();
        v.extend([
            Check::EgfIntegrality,
            Check::EgfComposition,
            Check::EgfStacking,
            Check::EgfStirling,
            Check::EnumCount,
            Check::EnumCensus,
            Check::EnumDistinct,
        ]);
        v
    }

    pub fn name(self) -> &'static str {
        match self {
            Check::Identity(id) => id.name(),
            Check::EgfIntegrality => "egf-integrality",
            Check::EgfComposition => "egf-composition",
            Check::EgfStacking => "egf-stacking",
            Check::EgfStirling => "egf-stirling",
            Check::EnumCount => "enum-count",
            Check::EnumCensus => "enum-census",
            Check::EnumDistinct => "enum-distinct",
        }
    }

    pub fn parse_list(names: &[String]) -> CliResult<Vec<Check>> {
        if names.iter().any(|n| n == "all") {
            return Ok(Check::all());
        }
        let all = Check::all();
        names
            .iter()
            .map(|name| {
                all.iter()
                    .copied()
                    .find(|c| c.name() == name)
                    .ok_or_else(|| usage(format!("unknown check `{name}`")))
            })
            .collect()
    }
}

/// One row of a verification report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub check: &'static str,
    pub n: usize,
    pub m: usize,
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub lhs: String,
    pub rhs: String,
    pub passed: bool,
}

impl ReportRow {
    fn new(check: Check, n: usize, m: usize, k: Option<usize>, lhs: String, rhs: String) -> ReportRow {
        let passed = lhs == rhs;
        ReportRow { check: check.name(), n, m, r: None, k, lhs, rhs, passed }
    }

    pub fn label(&self) -> String {
        let mut s = format!("{} n={} m={}", self.check, self.n, self.m);
        if let Some(r) = self.r {
            s.push_str(&format!(" r={r}"));
        }
        if let Some(k) = self.k {
            s.push_str(&format!(" k={k}"));
        }
        s
    }
}

impl From<&CellResult> for ReportRow {
    fn from(c: &CellResult) -> ReportRow {
        ReportRow {
            check: c.identity.name(),
            n: c.n,
            m: c.m,
            r: c.r,
            k: c.k,
            lhs: c.lhs.to_string(),
            rhs: c.rhs.to_string(),
            passed: c.passed(),
        }
    }
}

/// Runs the selected checks over `1..=n_max`, `1..=m_max`.
pub fn run_checks(
    checks: &[Check],
    n_max: usize,
    m_max: usize,
    r: Option<usize>,
    budget: u64,
    fault: Option<Fault>,
    explicit: bool,
) -> CliResult<Vec<ReportRow>> {
    let mut verifier = Verifier::new(n_max);
    if let Some(f) = fault {
        verifier = verifier.with_fault(f);
    }
    let mut rows = Vec::new();
    for &check in checks {
        match check {
            Check::Identity(id) => {
                let mut n_hi = n_max;
                if matches!(id, Identity::StirlingOutsideIn | Identity::BellOutsideIn)
                    && !explicit
                    && n_max > OUTSIDE_IN_N
                {
                    eprintln!("hyperbell: {id} limited to n <= {OUTSIDE_IN_N}");
                    n_hi = OUTSIDE_IN_N;
                }
                let report = verifier.verify(id, 1..=n_hi, 1..=m_max, r)?;
                rows.extend(report.cells.iter().map(ReportRow::from));
            }
            Check::EgfIntegrality => {
                for m in 1..=m_max {
                    let e = iterated_exponential(m, n_max);
                    let t = verifier.triangle(m);
                    for n in 1..=n_max {
                        let lhs = match e.egf_value(n) {
                            Ok(v) => v.to_string(),
                            Err(err) => err.to_string(),
                        };
                        rows.push(ReportRow::new(check, n, m, None, lhs, t.row_sum(n).to_string()));
                    }
                }
            }
            Check::EgfComposition => {
                let inner = Series::exp_x(n_max).minus_constant();
                for m in 0..m_max {
                    let lhs = iterated_exponential(m, n_max).minus_constant().compose(&inner)?;
                    let rhs = iterated_exponential(m + 1, n_max).minus_constant();
                    for n in 0..=n_max {
                        rows.push(ReportRow::new(
                            check,
                            n,
                            m,
                            None,
                            lhs.coeff(n).to_string(),
                            rhs.coeff(n).to_string(),
                        ));
                    }
                }
            }
            Check::EgfStacking => {
                for m in 1..=m_max {
                    let mut total = Series::zero(n_max);
                    for k in 1..=n_max {
                        total = total.add(&stirling_series(k, m, n_max)?)?;
                    }
                    let rhs = iterated_exponential(m, n_max).minus_constant();
                    for n in 0..=n_max {
                        rows.push(ReportRow::new(
                            check,
                            n,
                            m,
                            None,
                            total.coeff(n).to_string(),
                            rhs.coeff(n).to_string(),
                        ));
                    }
                }
            }
            Check::EgfStirling => {
                for m in 1..=m_max {
                    let t = verifier.triangle(m);
                    for k in 1..=n_max {
                        let s = stirling_series(k, m, n_max)?;
                        for n in k..=n_max {
                            let lhs = match s.egf_value(n) {
                                Ok(v) => v.to_string(),
                                Err(err) => err.to_string(),
                            };
                            rows.push(ReportRow::new(check, n, m, Some(k), lhs, t.get(n, k).to_string()));
                        }
                    }
                }
            }
            Check::EnumCount | Check::EnumCensus | Check::EnumDistinct => {
                for (n, m) in enumeration_cells(n_max, m_max) {
                    match check {
                        Check::EnumCount => {
                            let c = census(n, m, budget)?;
                            let b = verifier.triangle(m).row_sum(n);
                            rows.push(ReportRow::new(check, n, m, None, c.total.to_string(), b.to_string()));
                        }
                        Check::EnumCensus => {
                            let c = census(n, m, budget)?;
                            let t = verifier.triangle(m);
                            for k in 1..=n {
                                rows.push(ReportRow::new(
                                    check,
                                    n,
                                    m,
                                    Some(k),
                                    c.count(k).to_string(),
                                    t.get(n, k).to_string(),
                                ));
                            }
                        }
                        _ => {
                            let (total, distinct) = distinct_serializations(n, m, budget)?;
                            rows.push(ReportRow::new(check, n, m, None, distinct.to_string(), total.to_string()));
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// `n <= 5, m <= 3` plus `(6, 2)`, clipped to the requested range.
fn enumeration_cells(n_max: usize, m_max: usize) -> Vec<(usize, usize)> {
    let mut cells: Vec<(usize, usize)> = (1..=n_max.min(5))
        .flat_map(|n| (1..=m_max.min(3)).map(move |m| (n, m)))
        .collect();
    if n_max >= 6 && m_max >= 2 {
        cells.push((6, 2));
    }
    cells
}

pub fn verify(ctx: &Context, args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    check_n("n-max", args.n_max)?;
    check_m("m-max", args.m_max)?;
    let explicit = !args.identities.iter().any(|n| n == "all");
    let checks = Check::parse_list(&args.identities)?;
    let fault = args
        .inject_fault
        .as_deref()
        .map(str::parse::<Fault>)
        .transpose()?;
    if ctx.cache.is_some() {
        for m in 1..=args.m_max {
            ctx.triangle(args.n_max, m)?;
        }
    }
    let rows = run_checks(&checks, args.n_max, args.m_max, args.r, args.budget, fault, explicit)?;

    let mut params = vec![
        ("checks", checks.iter().map(|c| c.name()).collect::<Vec<_>>().join(",")),
        ("n_max", args.n_max.to_string()),
        ("m_max", args.m_max.to_string()),
    ];
    if let Some(r) = args.r {
        params.push(("r", r.to_string()));
    }
    let mut doc = OutputDocument::new(Kind::VerifyReport, params);
    let mut section = Section::new(
        ["check", "n", "m", "r", "k", "status", "lhs", "rhs"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    let status = |p: bool| if p { "pass" } else { "FAIL" }.to_string();
    let mut cells = Vec::with_capacity(rows.len());
    for row in &rows {
        section.push(vec![
            row.check.to_string(),
            row.n.to_string(),
            row.m.to_string(),
            opt(row.r),
            opt(row.k),
            status(row.passed),
            row.lhs.clone(),
            row.rhs.clone(),
        ]);
        let mut cell = Map::new();
        cell.insert("check".into(), row.check.into());
        cell.insert("n".into(), row.n.to_string().into());
        cell.insert("m".into(), row.m.to_string().into());
        if let Some(r) = row.r {
            cell.insert("r".into(), r.to_string().into());
        }
        if let Some(k) = row.k {
            cell.insert("k".into(), k.to_string().into());
        }
        cell.insert("status".into(), status(row.passed).into());
        cell.insert("lhs".into(), row.lhs.clone().into());
        cell.insert("rhs".into(), row.rhs.clone().into());
        cells.push(Value::Object(cell));
    }
    let failed: Vec<&ReportRow> = rows.iter().filter(|r| !r.passed).collect();
    doc.sections.push(section);
    doc.payload = json!({
        "cells": cells,
        "summary": {
            "checked": rows.len().to_string(),
            "failed": failed.len().to_string(),
        },
    });
    ctx.emit(&doc, out)?;
    for row in &failed {
        eprintln!("FAIL {}: lhs = {}, rhs = {}", row.label(), row.lhs, row.rhs);
    }
    if failed.is_empty() {
        eprintln!("hyperbell: all {} checks passed", rows.len());
        Ok(())
    } else {
        Err(CliError::VerificationFailed {
            failed: failed.len(),
            total: rows.len(),
        })
    }
}

pub fn egf(ctx: &Context, args: &EgfArgs, out: &mut dyn Write) -> CliResult<()> {
    if args.order == 0 || args.order > MAX_EGF_ORDER {
        return Err(usage(format!("--order must be in 1..={MAX_EGF_ORDER}")));
    }
    if args.m > MAX_M {
        return Err(usage(format!("--m must be <= {MAX_M}")));
    }
    let (series, mut params) = match args.k {
        Some(k) => {
            if k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            (stirling_series(k, args.m, args.order)?, vec![("k", k.to_string())])
        }
        None => (iterated_exponential(args.m, args.order), vec![]),
    };
    params.insert(0, ("m", args.m.to_string()));
    params.push(("order", args.order.to_string()));
    let mut doc = OutputDocument::new(Kind::EgfDump, params);
    let mut section = Section::new(vec![
        "n".into(),
        "coefficient".into(),
        "decimal".into(),
        "value".into(),
    ]);
    let mut coeffs = Map::new();
    for n in 0..=args.order {
        let c = series.coeff(n);
        let value = series.egf_value(n)?.to_string();
        section.push(vec![n.to_string(), exact(&c), decimal(&c, ctx.precision), value.clone()]);
        coeffs.insert(
            n.to_string(),
            json!({ "exact": exact(&c), "decimal": decimal(&c, ctx.precision), "value": value }),
        );
    }
    doc.sections.push(section);
    doc.payload = json!({ "coefficients": coeffs });
    ctx.emit(&doc, out)
}

pub fn asymptotic(ctx: &Context, args: &AsymptoticArgs, out: &mut dyn Write) -> CliResult<()> {
    check_n("n", args.n)?;
    for &m in &args.m_list {
        check_m("m", m)?;
    }
    let n = args.n;
    let mut doc = OutputDocument::new(
        Kind::AsymptoticReport,
        vec![
            ("n", n.to_string()),
            ("m", args.m_list.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")),
            ("precision", ctx.precision.to_string()),
        ],
    );
    let mut section = Section::new(
        [
            "m", "bell", "ratio", "ratio_decimal", "average", "average_decimal", "share", "share_decimal",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
    )
    .titled("orders");
    let mut orders = Vec::new();
    for &m in &args.m_list {
        let t = ctx.triangle(n, m)?;
        let bell: Nat = t.row_sum(n);
        let ratio = bell_ratio(n, m);
        let average = average_cardinality(n, m);
        let share = singleton_share(n, m);
        section.push(vec![
            m.to_string(),
            bell.to_string(),
            exact(&ratio),
            decimal(&ratio, ctx.precision),
            exact(&average),
            decimal(&average, ctx.precision),
            exact(&share),
            decimal(&share, ctx.precision),
        ]);
        orders.push(json!({
            "m": m.to_string(),
            "bell": bell.to_string(),
            "ratio": ctx.rational(&ratio),
            "average_cardinality": ctx.rational(&average),
            "singleton_share": ctx.rational(&share),
        }));
    }
    doc.sections.push(section);

    let mut fd_payload = Value::Null;
    if n >= 2 {
        let report = finite_difference_check(n, n + 2)?;
        let join = |v: Vec<String>| v.join(" ");
        let values = join(report.values.iter().map(|v| v.to_string()).collect());
        let diffs = join(report.differences.iter().map(|v| v.to_string()).collect());
        let mut fd = Section::new(
            ["n", "orders", "values", "differences", "constant", "predicted", "passed"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        )
        .titled("finite differences");
        fd.push(vec![
            n.to_string(),
            format!("1..={}", n + 2),
            values,
            diffs,
            report.constant.to_string(),
            report.predicted.to_string(),
            report.passed().to_string(),
        ]);
        doc.sections.push(fd);
        fd_payload = json!({
            "orders": format!("1..={}", n + 2),
            "values": report.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "differences": report.differences.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "constant": report.constant,
            "predicted": report.predicted.to_string(),
            "passed": report.passed(),
        });
    }
    doc.payload = json!({
        "n": n.to_string(),
        "orders": orders,
        "finite_difference": fd_payload,
    });
    ctx.emit(&doc, out)
}
