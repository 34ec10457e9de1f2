use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use tracecodes::codegen::{minmax_ratio, Code, CodeSpec, DistMethod};
use tracecodes::expsum::{ea_oa, s_ab, s_value, SumMethod};
use tracecodes::field::parse_hex;
use tracecodes::ghw::{ghw_table, GhwMode, GhwOptions, DEFAULT_BUDGET};
use tracecodes::verify::{verify, VerifyOptions, SCHEMA};
use tracecodes::{FieldCtx, FieldElem, Params};

#[derive(Parser)]
#[command(name = "tracecodes", version, about = "Trace codes over GF(2^phi(l^m)): weights, GHWs and cross-checks")]
struct Cli {
    /// worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long)]
    l: u64,
    #[arg(long)]
    m: u32,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field parameters, modulus and distinguished elements
    Params {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// S(a) (and S(a,b) with --b) as CSV
    Expsum {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = hex_arg)]
        a: Option<u64>,
        #[arg(long, value_parser = hex_arg)]
        b: Option<u64>,
        /// every nonzero a
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a code and report its weight distribution
    Code {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = hex_arg)]
        a: u64,
        #[arg(long, value_parser = hex_arg, default_value = "0")]
        b: u64,
        #[arg(long, default_value = "brute")]
        method: DistMethod,
        #[arg(long)]
        out: Option<PathBuf>,
        /// write the generator matrix as 0/1 text
        #[arg(long)]
        gen_matrix: Option<PathBuf>,
    },
    /// Generalized Hamming weights
    Ghw {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_parser = hex_arg)]
        a: u64,
        #[arg(long, value_parser = hex_arg, default_value = "0")]
        b: u64,
        /// e.g. `3`, `1-4` or `1,2,10-12`
        #[arg(long, value_parser = range_arg)]
        r: Option<RSet>,
        #[arg(long, default_value = "both")]
        method: GhwMode,
        /// word-operation limit per r, e.g. 1e10
        #[arg(long, value_parser = budget_arg, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every closed form against exhaustive computation
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = budget_arg, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn hex_arg(s: &str) -> std::result::Result<u64, String> {
    parse_hex(s).ok_or_else(|| format!("{s:?} is not a hexadecimal element"))
}

fn budget_arg(s: &str) -> std::result::Result<u128, String> {
    if let Ok(v) = s.parse::<u128>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v as u128),
        _ => Err(format!("{s:?} is not a budget")),
    }
}

#[derive(Clone)]
struct RSet(Vec<u32>);

fn range_arg(s: &str) -> std::result::Result<RSet, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad r value {t:?}"));
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (parse(lo)?, parse(hi)?);
                if lo > hi {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(parse(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(RSet(out))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn field(args: &FieldArgs) -> Result<FieldCtx> {
    let params = Params::new(args.l, args.m)?;
    Ok(FieldCtx::new(params)?)
}

fn elem(ctx: &FieldCtx, v: u64) -> Result<FieldElem> {
    Ok(ctx.elem(v)?)
}

fn cmd_params(args: &FieldArgs) -> Result<String> {
    let ctx = field(args)?;
    let p = ctx.params();
    to_json(&json!({
        "schema": SCHEMA,
        "l": p.l(),
        "m": p.m(),
        "l_m": p.lm(),
        "s": p.s(),
        "q": p.q(),
        "sqrt_q": p.sqrt_q(),
        "power_exponent": p.power_exponent(),
        "two_is_primitive_root": true,
        "modulus": ctx.modulus().to_string(),
        "modulus_hex": format!("{:x}", ctx.modulus().bits()),
        "gamma": ctx.gamma(),
        "alpha": ctx.alpha(),
    }))
}

fn cmd_expsum(args: &FieldArgs, a: Option<u64>, b: Option<u64>, all: bool) -> Result<String> {
    let ctx = field(args)?;
    let a_values: Vec<FieldElem> = match (a, all) {
        (_, true) => ctx.nonzero().collect(),
        (Some(a), false) => vec![elem(&ctx, a)?],
        (None, false) => bail!("give --a HEX or --all"),
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    match b {
        None => {
            w.write_record(["a", "S_brute", "S_closed", "E_a", "O_a"])?;
            for a in a_values {
                let (e, o) = ea_oa(&ctx, a)?;
                w.write_record([
                    a.hex(),
                    s_value(&ctx, a, SumMethod::Brute).to_string(),
                    s_value(&ctx, a, SumMethod::Closed).to_string(),
                    e.len().to_string(),
                    o.len().to_string(),
                ])?;
            }
        }
        Some(b) => {
            let b = elem(&ctx, b)?;
            w.write_record(["a", "b", "S_ab_brute", "S_ab_closed"])?;
            for a in a_values {
                w.write_record([
                    a.hex(),
                    b.hex(),
                    s_ab(&ctx, a, b, SumMethod::Brute)?.to_string(),
                    s_ab(&ctx, a, b, SumMethod::Closed)?.to_string(),
                ])?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn code_spec(ctx: &FieldCtx, a: u64, b: u64) -> Result<CodeSpec> {
    Ok(CodeSpec::new(*ctx.params(), elem(ctx, a)?, elem(ctx, b)?)?)
}

fn cmd_code(args: &FieldArgs, a: u64, b: u64, method: DistMethod, gen_matrix: Option<&PathBuf>) -> Result<String> {
    let ctx = field(args)?;
    let spec = code_spec(&ctx, a, b)?;
    let code = Code::build(&ctx, spec)?;
    let dim = code.empirical_dimension();
    let brute = code.weight_distribution(DistMethod::Brute)?;
    let mut discrepancies = Vec::new();
    let dist = match method {
        DistMethod::Brute => Some(brute.clone()),
        other => match code.weight_distribution(other) {
            Ok(d) => {
                if !d.is_same_table(&brute) {
                    discrepancies.push(json!({
                        "kind": "mismatch",
                        "details": format!("{other:?} {} vs brute {}", d.enumerator(), brute.enumerator()),
                    }));
                }
                Some(d)
            }
            Err(tracecodes::Error::Degenerate(why)) => {
                discrepancies.push(json!({"kind": "inapplicable", "details": why}));
                None
            }
            Err(e) => return Err(e.into()),
        },
    };
    if let Some(path) = gen_matrix {
        fs::write(path, code.generator_matrix_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    let ratio = minmax_ratio(&brute).ok();
    let (distribution, enumerator) = match &dist {
        Some(d) => (
            serde_json::to_value(d)?["distribution"].clone(),
            serde_json::Value::String(d.enumerator()),
        ),
        None => (serde_json::Value::Null, serde_json::Value::Null),
    };
    to_json(&json!({
        "schema": SCHEMA,
        "spec": spec,
        "n": code.len(),
        "formal_dimension": spec.formal_dimension(),
        "empirical_dimension": dim.dimension,
        "kernel_size": brute.kernel_size,
        "kernel": dim.kernel.iter().map(|k| format!("{k:x}")).collect::<Vec<_>>(),
        "degenerate": brute.degenerate,
        "method": method,
        "distribution": distribution,
        "enumerator": enumerator,
        "ratio": ratio,
        "discrepancies": discrepancies,
    }))
}

fn cmd_ghw(args: &FieldArgs, a: u64, b: u64, rs: Option<Vec<u32>>, mode: GhwMode, budget: u128) -> Result<String> {
    let ctx = field(args)?;
    let spec = code_spec(&ctx, a, b)?;
    let code = Code::build(&ctx, spec)?;
    let table = ghw_table(&code, &GhwOptions { budget, mode, rs })?;
    to_json(&json!({
        "schema": SCHEMA,
        "spec": spec,
        "n": table.n,
        "dimension": table.dimension,
        "degenerate": table.degenerate,
        "budget": budget.to_string(),
        "table": table.table,
        "discrepancies": table.discrepancies,
        "monotone": table.monotone,
        "full_rank_is_length": table.full_rank_is_length,
    }))
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match cli.cmd {
        Cmd::Params { field } => emit(&cmd_params(&field)?, None)?,
        Cmd::Expsum { field, a, b, all, out } => emit(&cmd_expsum(&field, a, b, all)?, out.as_ref())?,
        Cmd::Code {
            field,
            a,
            b,
            method,
            out,
            gen_matrix,
        } => emit(&cmd_code(&field, a, b, method, gen_matrix.as_ref())?, out.as_ref())?,
        Cmd::Ghw {
            field,
            a,
            b,
            r,
            method,
            budget,
            out,
        } => emit(&cmd_ghw(&field, a, b, r.map(|r| r.0), method, budget)?, out.as_ref())?,
        Cmd::Verify {
            field,
            seed,
            budget,
            out,
        } => {
            let params = Params::new(field.l, field.m)?;
            let opts = VerifyOptions {
                seed,
                budget,
                ..VerifyOptions::default()
            };
            let report = verify(params, &opts)?;
            for r in report.unexplained() {
                log::warn!("{}: {}", r.claim, r.details);
            }
            emit(&to_json(&report)?, out.as_ref())?;
            return Ok(ExitCode::from(report.exit_code as u8));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
