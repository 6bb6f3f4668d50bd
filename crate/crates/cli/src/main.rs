//! `tame3`: degrees, reductions, factorizations, certificates and condition
//! checks for automorphisms of `Q[x1, x2, x3]`.
//!
//! Exit codes: 0 success or pass, 1 check failed, 2 stuck or no reduction,
//! 3 input error.

mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tame3_core::endo::{verify_automorphism, Endo3};
use tame3_core::engine::{
    certify_nagata, factor_tame, random_tame, reduce_to_floor, su_number, su_number_experiment, CorpusBounds, Outcome,
    ReduceOptions, ReductionTrace,
};
use tame3_core::search::{Absence, SearchLimits};
use tame3_core::su::{check_not_er, check_quasi_su, check_su_conditions, normalize_to_su, verify_properties};
use tame3_core::types::{detect_type, TypeKind};
use tame3_core::univariate::{su_inequality_report, Verdict};
use tame3_core::WeightSystem;

use input::{parse_weight, read_pair, read_triple, InputError};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_STUCK: u8 = 2;
const EXIT_INPUT: u8 = 3;

/// Environment override for search limits, e.g. `rounds=16,bidegree=40`.
/// Precedence: command-line flag, then this variable, then the defaults.
const LIMITS_ENV: &str = "TAME3_LIMITS";

#[derive(Parser)]
#[command(name = "tame3", version, about = "Weighted-degree reduction of automorphisms of Q[x1,x2,x3]")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// `total`, `nagata-lex`, or weight vectors such as `1,0;0,1;1,1`.
    #[arg(long, global = true, default_value = "total")]
    weight: String,
    /// Cap on `i + j` for candidate products `g1^i g2^j`.
    #[arg(long, global = true)]
    limits_bidegree: Option<u32>,
    /// Number of cancellation rounds per membership search.
    #[arg(long, global = true)]
    limits_rounds: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Component degrees, leading forms, deg F, |w| and rank w.
    Deg(TripleArg),
    /// Reduce to the degree floor and print the trace.
    Reduce(ReduceArgs),
    /// Reduce, then factor into affine and elementary maps.
    Factor(ReduceArgs),
    /// Rigorous obstructions for Nagata's automorphism.
    CertifyNagata,
    /// Check a pair of triples: su, quasi, properties, normalize, not-er, or
    /// type:I..IV on the first triple.
    Check {
        which: String,
        file: PathBuf,
    },
    /// Weighted degree inequality for `Φ(g)` with coefficients in
    /// `k[f_1, ..., f_r]`; the file holds the generators, `i: φ_i` lines and
    /// `g` as three blocks.
    CheckInequality { file: PathBuf },
    /// SU number along both scan orders.
    SuNumber(ReduceArgs),
    /// Generate a seeded corpus of tame automorphisms.
    Gen(GenArgs),
}

#[derive(Args)]
struct TripleArg {
    /// File with one polynomial per line; `-` reads stdin.
    file: Option<PathBuf>,
    /// Inline triple with components separated by `;`.
    #[arg(long, short = 'e', conflicts_with = "file")]
    expr: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    triple: TripleArg,
    /// Inverse triple; required for rigorous stuck verdicts.
    #[arg(long)]
    inverse: Option<PathBuf>,
    /// Try SU reductions before elementary ones.
    #[arg(long)]
    su_first: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 5)]
    factors: usize,
    #[arg(long, default_value_t = 3)]
    coef: i64,
    #[arg(long, default_value_t = 3)]
    degree: u32,
    /// Directory for the triples and `manifest.json`; stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Ctx {
    ws: WeightSystem,
    limits: SearchLimits,
    json: bool,
}

fn limits_from(global: &GlobalArgs, env: Option<&str>) -> Result<SearchLimits, InputError> {
    let mut limits = SearchLimits::default();
    if let Some(spec) = env {
        limits = limits.with_overrides(spec).map_err(|e| InputError::new(format!("{LIMITS_ENV}: {e}")))?;
    }
    if let Some(r) = global.limits_rounds {
        limits = limits.with_overrides(&format!("rounds={r}")).map_err(InputError::from)?;
    }
    if let Some(b) = global.limits_bidegree {
        limits = limits.with_overrides(&format!("bidegree={b}")).map_err(InputError::from)?;
    }
    Ok(limits)
}

fn emit(ctx: &Ctx, value: &Value, text: impl FnOnce() -> String) {
    if ctx.json {
        println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
    } else {
        print!("{}", text());
    }
}

fn triple_of(arg: &TripleArg) -> Result<Endo3, InputError> {
    match (&arg.expr, &arg.file) {
        (Some(e), _) => input::parse_inline(e),
        (None, Some(f)) => read_triple(f),
        (None, None) => read_triple(&PathBuf::from("-")),
    }
}

fn cmd_deg(ctx: &Ctx, arg: &TripleArg) -> Result<u8, InputError> {
    let f = triple_of(arg)?;
    let ws = &ctx.ws;
    let degs = f.degrees(ws);
    let lfs: Vec<String> = f.f.iter().map(|p| p.lf(ws).to_string()).collect();
    let total = f.degree(ws);
    let value = json!({
        "degrees": degs,
        "leading_forms": lfs,
        "total": total,
        "floor": ws.total(),
        "rank": ws.rank(),
    });
    emit(ctx, &value, || {
        let mut s = String::new();
        for i in 0..3 {
            s += &format!("deg f{} = {}  leading form {}\n", i + 1, degs[i], lfs[i]);
        }
        s += &format!("deg F = {total}\n|w| = {}\nrank w = {}\n", ws.total(), ws.rank());
        s
    });
    Ok(EXIT_PASS)
}

/// Whether `F` is a verified automorphism; a wrong inverse is an input error.
fn verified(f: &Endo3, inverse: &Option<PathBuf>) -> Result<bool, InputError> {
    match inverse {
        None => Ok(false),
        Some(path) => {
            let g = read_triple(path)?;
            if verify_automorphism(f, &g) {
                Ok(true)
            } else {
                Err(InputError::new("the given inverse does not invert the map".into()))
            }
        }
    }
}

fn rigorous(reasons: &[Absence]) -> bool {
    reasons.iter().all(Absence::is_rigorous)
}

/// Verdict of a trace; stuck is rigorous only for verified automorphisms.
fn verdict(trace: &ReductionTrace, verified: bool) -> (&'static str, u8) {
    match &trace.outcome {
        Outcome::Floor => ("floor reached", EXIT_PASS),
        Outcome::Stuck(r) if verified && rigorous(r) => ("stuck: no elementary or SU reduction exists", EXIT_STUCK),
        Outcome::Stuck(_) => ("no reduction found", EXIT_STUCK),
        Outcome::Budget => ("step budget exhausted", EXIT_STUCK),
    }
}

/// Step polynomials are written in the components: `xk` stands for `fk`.
fn in_components(phi: &str) -> String {
    phi.replace('x', "f")
}

fn trace_text(trace: &ReductionTrace) -> String {
    let mut s = format!("F = {}\ndeg F = {}\n", trace.origin, trace.degrees[0]);
    for (k, step) in trace.steps.iter().enumerate() {
        let what = match step {
            tame3_core::engine::TraceStep::Elementary(e) => {
                format!("elementary: f{} += {}", e.index + 1, in_components(&e.phi_in_variables().to_string()))
            }
            tame3_core::engine::TraceStep::Su(su) => {
                let w = &su.witness;
                let phi3 = w.phi3_in_variables().to_string().replace('x', "g");
                format!("SU: sigma = {:?}, a = {}, b = {}, c = {}, g3 = f3 + {phi3}", w.sigma.map(|i| i + 1), w.a, w.b, w.c)
            }
        };
        s += &format!("step {}: {what}; deg = {}\n", k + 1, trace.degrees[k + 1]);
    }
    s += &format!("final = {}\n", trace.last);
    if let Outcome::Stuck(r) = &trace.outcome {
        for a in r {
            s += &format!("reason: {a}\n");
        }
    }
    s
}

fn cmd_reduce(ctx: &Ctx, args: &ReduceArgs, factor: bool) -> Result<u8, InputError> {
    let f = triple_of(&args.triple)?;
    let ok = verified(&f, &args.inverse)?;
    let opts = ReduceOptions { limits: ctx.limits, su_first: args.su_first, ..ReduceOptions::default() };
    let trace = if factor { factor_tame(&ctx.ws, &f, &opts) } else { reduce_to_floor(&ctx.ws, &f, &opts) }.map_err(InputError::from)?;
    let (word, code) = verdict(&trace, ok);
    let mut value = serde_json::to_value(&trace).expect("traces serialize");
    value["automorphism"] = json!(if ok { "verified" } else { "unverified" });
    value["verdict"] = json!(word);
    emit(ctx, &value, || {
        let mut s = trace_text(&trace);
        if let Some(fs) = &trace.factors {
            s += "factors (applied right to left):\n";
            for l in fs {
                s += &format!("  {}\n", l.to_endo());
            }
        }
        s += &format!("automorphism: {}\nverdict: {word}\n", value["automorphism"].as_str().unwrap_or_default());
        s
    });
    Ok(code)
}

fn cmd_certify(ctx: &Ctx) -> u8 {
    let cert = certify_nagata();
    let value = serde_json::to_value(&cert).expect("certificates serialize");
    emit(ctx, &value, || {
        let c = &cert.checks;
        let mut s = format!(
            "degrees = ({}, {}, {})\ndeg F = {}\n|w| = {}\n",
            cert.degrees[0], cert.degrees[1], cert.degrees[2], cert.total, cert.floor
        );
        for (name, check) in [
            ("above_floor", &c.above_floor),
            ("pairwise_independent", &c.pairwise_independent),
            ("semigroup_obstruction", &c.semigroup_obstruction),
            ("half_obstruction", &c.half_obstruction),
            ("order_obstruction", &c.order_obstruction),
        ] {
            s += &format!("{name}: {}\n", if check.holds { "pass" } else { "fail" });
            for d in &check.detail {
                s += &format!("  {d}\n");
            }
        }
        s += &format!("inverse_verified: {}\nverdict: {}\n", cert.inverse_verified, cert.verdict);
        s
    });
    if cert.all_pass() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn pass_code(pass: bool) -> u8 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn report_text(pairs: impl IntoIterator<Item = (String, bool, String)>, overall: bool) -> String {
    let mut s = String::new();
    for (label, holds, detail) in pairs {
        s += &format!("{label}: {} {detail}\n", if holds { "pass" } else { "fail" });
    }
    s += &format!("overall: {}\n", if overall { "pass" } else { "fail" });
    s
}

fn cmd_check(ctx: &Ctx, which: &str, file: &PathBuf) -> Result<u8, InputError> {
    let ws = &ctx.ws;
    if let Some(kind) = which.strip_prefix("type:") {
        let kind: TypeKind = kind.parse().map_err(|_| InputError::new(format!("unknown type '{kind}'")))?;
        let (f, _) = read_pair(file, true)?;
        let found = detect_type(ws, &f, kind, &ctx.limits).map_err(InputError::from)?;
        let value = match &found {
            Ok(w) => json!({ "type": kind, "found": true, "witness": w }),
            Err(a) => json!({ "type": kind, "found": false, "absence": a }),
        };
        emit(ctx, &value, || match &found {
            Ok(w) => format!("type {kind}: found, G = {}\n", w.g_triple),
            Err(a) => format!("type {kind}: absent ({a})\n"),
        });
        return Ok(pass_code(found.is_ok()));
    }
    let (f, g) = read_pair(file, false)?;
    let report = match which {
        "su" => check_su_conditions(ws, &f, &g),
        "quasi" => check_quasi_su(ws, &f, &g),
        "not-er" => check_not_er(ws, &f, &g),
        "properties" => {
            let p = verify_properties(ws, &f, &g).map_err(InputError::from)?;
            let overall = p.overall();
            let value = serde_json::to_value(&p).expect("reports serialize");
            emit(ctx, &value, || {
                let mut s = format!("s = {}\ndelta = {}\n", p.s, p.delta);
                s += &report_text(p.properties.conditions.iter().map(|(l, c)| (l.to_string(), c.holds, format!("[{}] {}", c.scope, c.detail))), overall);
                s
            });
            return Ok(pass_code(overall));
        }
        "normalize" => {
            let n = normalize_to_su(ws, &f, &g).map_err(InputError::from)?;
            let overall = n.report.overall() && n.degree_preserved;
            let value = json!({
                "e1": n.e1,
                "e2": n.e2,
                "g_prime": n.g_prime,
                "su": n.report,
                "degree_preserved": n.degree_preserved,
            });
            emit(ctx, &value, || {
                format!(
                    "E1 = {}\nE2 = {}\nG' = {}\ndeg G∘E1 = deg G: {}\n{}",
                    n.e1,
                    n.e2,
                    n.g_prime,
                    n.degree_preserved,
                    report_text(n.report.conditions.iter().map(|(l, c)| (l.to_string(), c.holds, c.detail.clone())), overall)
                )
            });
            return Ok(pass_code(overall));
        }
        other => return Err(InputError::new(format!("unknown check '{other}'"))),
    }
    .map_err(InputError::from)?;
    let overall = report.overall();
    let value = serde_json::to_value(&report).expect("reports serialize");
    emit(ctx, &value, || report_text(report.conditions.iter().map(|(l, c)| (l.to_string(), c.holds, c.detail.clone())), overall));
    Ok(pass_code(overall))
}

fn cmd_su_number(ctx: &Ctx, args: &ReduceArgs) -> Result<u8, InputError> {
    let f = triple_of(&args.triple)?;
    verified(&f, &args.inverse)?;
    let opts = ReduceOptions { limits: ctx.limits, ..ReduceOptions::default() };
    let r = su_number_experiment(&ctx.ws, &f, &opts).map_err(InputError::from)?;
    let result = |t: &ReductionTrace| match t.outcome {
        Outcome::Floor => "floor",
        Outcome::Stuck(_) => "stuck",
        Outcome::Budget => "budget",
    };
    let value = json!({
        "elementary_first": { "su_number": su_number(&r.elementary_first), "result": result(&r.elementary_first) },
        "su_first": { "su_number": su_number(&r.su_first), "result": result(&r.su_first) },
        "upper_bound": r.upper_bound,
    });
    emit(ctx, &value, || {
        format!(
            "elementary first: {} SU steps ({})\nSU first: {} SU steps ({})\nupper bound: {}\n",
            su_number(&r.elementary_first),
            result(&r.elementary_first),
            su_number(&r.su_first),
            result(&r.su_first),
            r.upper_bound.map_or("none".into(), |b| b.to_string())
        )
    });
    Ok(if r.upper_bound.is_some() { EXIT_PASS } else { EXIT_STUCK })
}

fn cmd_gen(ctx: &Ctx, args: &GenArgs) -> Result<u8, InputError> {
    if args.coef < 1 || args.degree < 1 {
        return Err(InputError::new("bounds must be positive".into()));
    }
    let bounds = CorpusBounds { factor_count: args.factors, coefficient_bound: args.coef, degree_bound: args.degree };
    let mut entries = Vec::new();
    for k in 0..args.count {
        let seed = args.seed.wrapping_add(k as u64);
        let sample = random_tame(seed, &bounds);
        let name = format!("sample_{seed}");
        if let Some(dir) = &args.out {
            std::fs::create_dir_all(dir).map_err(|e| InputError::new(format!("{}: {e}", dir.display())))?;
            input::write_triple(&dir.join(format!("{name}.txt")), &sample.f)?;
            input::write_triple(&dir.join(format!("{name}.inv.txt")), &sample.inverse)?;
        }
        entries.push(json!({
            "seed": seed,
            "name": name,
            "map": sample.f,
            "inverse": sample.inverse,
            "factors": sample.factors,
        }));
    }
    let manifest = json!({
        "seed": args.seed,
        "count": args.count,
        "bounds": { "factors": args.factors, "coefficient": args.coef, "degree": args.degree },
        "samples": entries,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("JSON values serialize");
    match &args.out {
        Some(dir) => {
            let path = dir.join("manifest.json");
            std::fs::create_dir_all(dir).map_err(|e| InputError::new(format!("{}: {e}", dir.display())))?;
            std::fs::write(&path, text + "\n").map_err(|e| InputError::new(format!("{}: {e}", path.display())))?;
            if !ctx.json {
                println!("wrote {} samples to {}", args.count, dir.display());
            }
        }
        None => println!("{text}"),
    }
    Ok(EXIT_PASS)
}

fn cmd_check_inequality(ctx: &Ctx, file: &PathBuf) -> Result<u8, InputError> {
    let (fs, phi, g) = input::read_inequality(file)?;
    let r = su_inequality_report(&ctx.ws, &fs, &phi, &g).map_err(InputError::from)?;
    emit(ctx, &json!(r), || {
        let verdict = match r.holds {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::VacuousFalsePrecondition => "vacuous (omega ^ dg = 0 and m >= 1)",
        };
        format!(
            "deg Phi(g) = {}\ndeg^g Phi = {}\nm = {}\ndeg omega = {}\ndeg omega^dg = {}\ndeg g = {}\nrhs = {}\nverdict: {verdict}\n",
            r.lhs, r.aux_degree, r.multiplicity, r.deg_omega, r.deg_omega_dg, r.deg_g, r.rhs
        )
    });
    Ok(pass_code(r.holds != Verdict::Violated))
}

fn run(cli: Cli) -> Result<u8, InputError> {
    let env = std::env::var(LIMITS_ENV).ok();
    let ctx = Ctx { ws: parse_weight(&cli.global.weight)?, limits: limits_from(&cli.global, env.as_deref())?, json: cli.global.json };
    match &cli.command {
        Command::Deg(a) => cmd_deg(&ctx, a),
        Command::Reduce(a) => cmd_reduce(&ctx, a, false),
        Command::Factor(a) => cmd_reduce(&ctx, a, true),
        Command::CertifyNagata => Ok(cmd_certify(&ctx)),
        Command::Check { which, file } => cmd_check(&ctx, which, file),
        Command::CheckInequality { file } => cmd_check_inequality(&ctx, file),
        Command::SuNumber(a) => cmd_su_number(&ctx, a),
        Command::Gen(a) => cmd_gen(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn global(rounds: Option<usize>) -> GlobalArgs {
        GlobalArgs { weight: "total".into(), limits_bidegree: None, limits_rounds: rounds, json: false }
    }

    #[test]
    fn limits_precedence() {
        assert_eq!(limits_from(&global(None), None).unwrap().max_cancellation_rounds, 8);
        assert_eq!(limits_from(&global(None), Some("rounds=3")).unwrap().max_cancellation_rounds, 3);
        assert_eq!(limits_from(&global(Some(5)), Some("rounds=3")).unwrap().max_cancellation_rounds, 5);
        assert!(limits_from(&global(None), Some("speed=3")).is_err());
    }
}
