use std::io::Write;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;

use cdiff::cddt::{cddt_brute, cddt_char, uniformity_brute, CRange, Cddt, FnTable};
use cdiff::gold::{cddt_closed, gold_table, GoldSpec};
use cdiff::tables;
use cdiff::verify::{self, Fault, Scope, Suite};
use cdiff::{Characters, Felt, FieldCtx, LinPoly};

use crate::{DdtArgs, Format, Method, TableFormat, TablesArgs, VerifyArgs, EXIT_MISMATCH};

fn field(spec: &str, modulus: Option<&str>) -> Result<FieldCtx> {
    let (p, n) = FieldCtx::parse_spec(spec)?;
    Ok(match modulus {
        Some(m) => FieldCtx::with_modulus(p, n, &FieldCtx::parse_modulus(m)?)?,
        None => FieldCtx::new(p, n)?,
    })
}

enum Function {
    Gold(GoldSpec),
    Table(FnTable),
}

impl Function {
    fn table(&self, ctx: &FieldCtx) -> FnTable {
        match self {
            Function::Gold(g) => gold_table(ctx, g),
            Function::Table(t) => t.clone(),
        }
    }

    fn describe(&self, ctx: &FieldCtx) -> String {
        match self {
            Function::Gold(g) => format!("x^({}^{}+1) + P, P = {}", ctx.p(), g.k, g.perturb),
            Function::Table(_) => "table".into(),
        }
    }
}

fn function(ctx: &FieldCtx, args: &DdtArgs) -> Result<Function> {
    if let Some(k) = args.gold {
        let perturb = LinPoly::parse(ctx, &args.perturb)?;
        return Ok(Function::Gold(GoldSpec::new(ctx, k, perturb, Felt::ZERO)?));
    }
    let spec = args.function.as_deref().ok_or_else(|| anyhow!("one of --gold or --fn is required"))?;
    let table = match spec.split_once(':') {
        None if spec == "identity" => FnTable::identity(ctx),
        Some(("power", e)) => FnTable::power(ctx, e.parse().with_context(|| format!("bad exponent {e:?}"))?),
        Some(("table", path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            FnTable::parse(ctx, &text)?
        }
        _ => bail!("unknown function {spec:?} (expected identity, power:E or table:PATH)"),
    };
    Ok(Function::Table(table))
}

fn multipliers(ctx: &FieldCtx, spec: &str) -> Result<Vec<Felt>> {
    let cs = match spec {
        "all" => CRange::AllButOne.values(ctx),
        "nonzero" => CRange::NonzeroButOne.values(ctx),
        _ => spec
            .split(',')
            .map(|s| {
                let v: u64 = s.trim().parse().with_context(|| format!("bad multiplier {s:?}"))?;
                Ok(ctx.element(v)?)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    if cs.is_empty() {
        bail!("empty multiplier set");
    }
    Ok(cs)
}

fn table_for(ctx: &FieldCtx, func: &Function, c: Felt, method: Method, tol: f64) -> Result<Cddt> {
    let ch = Characters::new(ctx);
    Ok(match (method, func) {
        (Method::Brute, f) => cddt_brute(ctx, &f.table(ctx), c),
        (Method::Char, f) => cddt_char(&ch, &f.table(ctx), c, tol)?,
        (Method::Closed, Function::Gold(g)) => cddt_closed(&ch, &g.with_c(c), tol)?,
        (Method::Closed, Function::Table(_)) => bail!("--method closed needs --gold"),
        (Method::Verify, _) => unreachable!("handled separately"),
    })
}

pub fn ddt(args: &DdtArgs, out: &mut dyn Write) -> Result<u8> {
    if args.tol <= 0.0 {
        bail!("--tol must be positive");
    }
    let ctx = field(&args.field, args.modulus.as_deref())?;
    let func = function(&ctx, args)?;
    if args.method == Method::Closed && matches!(func, Function::Table(_)) {
        bail!("--method closed needs --gold");
    }
    let cs = multipliers(&ctx, &args.c)?;

    if args.method == Method::Verify {
        return verify_routes(&ctx, &func, &cs, args.tol, out);
    }

    if let [c] = cs[..] {
        let t = table_for(&ctx, &func, c, args.method, args.tol)?;
        if !t.rows_sum_to_q() {
            eprintln!("error: table fails the row-sum check");
            return Ok(EXIT_MISMATCH);
        }
        match args.format {
            Format::Csv => t.write_csv(&mut *out, args.admissible_only)?,
            Format::Json => {
                let mut js = t.to_json();
                js["field"] = ctx.spec().into();
                js["function"] = func.describe(&ctx).into();
                writeln!(out, "{}", serde_json::to_string_pretty(&js)?)?;
            }
            Format::Md => write!(out, "{}", t.to_markdown()?)?,
        }
        return Ok(0);
    }

    let per_c = cs
        .par_iter()
        .map(|&c| -> Result<(Felt, u32)> {
            if args.method == Method::Brute {
                return Ok((c, uniformity_brute(&ctx, &func.table(&ctx), c)));
            }
            let t = table_for(&ctx, &func, c, args.method, args.tol)?;
            if !t.rows_sum_to_q() {
                bail!("table for c = {c} fails the row-sum check");
            }
            Ok((c, t.uniformity()))
        })
        .collect::<Result<Vec<_>>>()?;
    let beta = per_c.iter().map(|&(_, u)| u).max().unwrap_or(0);
    let argmax: Vec<Felt> = per_c.iter().filter(|&&(_, u)| u == beta).map(|&(c, _)| c).collect();
    match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["c", "uniformity"])?;
            for (c, u) in &per_c {
                w.serialize((c.0, u))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<_> = per_c.iter().map(|(c, u)| serde_json::json!({"c": c, "uniformity": u})).collect();
            let js = serde_json::json!({
                "field": ctx.spec(),
                "function": func.describe(&ctx),
                "per_c": rows,
                "beta": beta,
                "argmax": argmax,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&js)?)?;
        }
        Format::Md => {
            writeln!(out, "| c | uniformity |\n|---|---|")?;
            for (c, u) in &per_c {
                writeln!(out, "| {c} | {u} |")?;
            }
            writeln!(out, "\nmax {beta} at c in {argmax:?}")?;
        }
    }
    Ok(0)
}

fn verify_routes(ctx: &FieldCtx, func: &Function, cs: &[Felt], tol: f64, out: &mut dyn Write) -> Result<u8> {
    let ch = Characters::new(ctx);
    let table = func.table(ctx);
    let mut entries = 0usize;
    let mut bad = Vec::new();
    for &c in cs {
        let brute = cddt_brute(ctx, &table, c);
        let mut others = vec![("char", cddt_char(&ch, &table, c, tol)?)];
        if let Function::Gold(g) = func {
            others.push(("closed", cddt_closed(&ch, &g.with_c(c), tol)?));
        }
        entries += brute.counts().len();
        for (name, t) in &others {
            for (i, (x, y)) in brute.counts().iter().zip(t.counts()).enumerate() {
                if x != y {
                    let q = brute.q();
                    bad.push(format!("c={c} a={} b={}: brute {x}, {name} {y}", i / q, i % q));
                }
            }
        }
        if !brute.rows_sum_to_q() {
            bad.push(format!("c={c}: row-sum check fails"));
        }
    }
    let routes = if matches!(func, Function::Gold(_)) { "char=brute=closed" } else { "char=brute" };
    if bad.is_empty() {
        writeln!(out, "{routes} on {entries} entries")?;
        Ok(0)
    } else {
        writeln!(out, "mismatch on {} of {entries} entries", bad.len())?;
        for b in bad.iter().take(20) {
            writeln!(out, "  {b}")?;
        }
        Ok(EXIT_MISMATCH)
    }
}

pub fn tables(args: &TablesArgs, out: &mut dyn Write) -> Result<u8> {
    let range = if args.nonzero_c { CRange::NonzeroButOne } else { CRange::AllButOne };
    let grids = args
        .n
        .iter()
        .map(|&n| {
            if !(2..=10).contains(&n) {
                bail!("n = {n} is outside 2..=10");
            }
            Ok(tables::sweep(n, &range)?)
        })
        .collect::<Result<Vec<_>>>()?;
    match args.format {
        TableFormat::Text => grids.iter().try_for_each(|g| writeln!(out, "{}", g.render_text()))?,
        TableFormat::Md => grids.iter().try_for_each(|g| writeln!(out, "{}", g.render_markdown()))?,
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "i", "j", "k", "beta"])?;
            for g in &grids {
                for r in g.csv_rows() {
                    w.serialize(r)?;
                }
            }
            w.flush()?;
        }
        TableFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&grids)?)?,
    }
    if !args.diff {
        return Ok(0);
    }
    let mut total = 0;
    for g in &grids {
        let Ok(reference) = tables::reference(g.n) else {
            eprintln!("no reference grid for n = {}", g.n);
            continue;
        };
        for m in tables::diff(g, &reference) {
            total += 1;
            eprintln!(
                "n={} (i,j)=({},{}) k={}: computed {}, reference {}",
                m.n, m.row.0, m.row.1, m.k, m.computed, m.expected
            );
        }
    }
    eprintln!("{total} mismatching cells");
    Ok(if total == 0 { 0 } else { EXIT_MISMATCH })
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8> {
    let suite = Suite::parse(&args.suite)?;
    let mut scope = if args.full { Scope::full() } else { Scope::quick() };
    scope.ks = args.k.clone();
    scope.seed = args.seed;
    scope.tol = args.tol;
    if let Some(f) = &args.field {
        let (p, n) = FieldCtx::parse_spec(f)?;
        scope = scope.only_field(p, n);
    }
    if let Some(f) = &args.inject_fault {
        scope.conventions = Fault::parse(f)?.conventions();
    }
    let report = verify::run(suite, &scope)?;
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        for s in &report.suites {
            writeln!(out, "{s}")?;
            for n in &s.notes {
                writeln!(out, "  {n}")?;
            }
            for c in &s.counterexamples {
                writeln!(out, "  counterexample: {c}")?;
            }
        }
    }
    Ok(if report.passed { 0 } else { EXIT_MISMATCH })
}
