use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use hyperdet_core::arith::parse::{collect_identifiers, parse_laurent, parse_rational_function};
use hyperdet_core::arith::RationalFunction;
use hyperdet_core::asm::{self, Asm, AsmRecord};
use hyperdet_core::detlib::{det_lambda, SquareMatrix};
use hyperdet_core::dyson::dyson_coefficient;
use hyperdet_core::hyper::{cayley_hyperdet, lambda_hyperdet, HyperMatrix, PhiConvention};
use hyperdet_core::symfun::{Basis, DiskCache, Macdonald, Partition, SymFun};
use hyperdet_core::verify::{any_failure, Identity, Selection, Status, VerificationReport, Verifier};
use hyperdet_core::Limits;
use serde_json::{json, Value};

use crate::{
    AsmAction, BasisArg, CacheAction, Cli, Command, ConventionArg, ConventionChoice, DetArgs, DysonArgs, HyperdetArgs,
    Kind, MacdonaldArgs, Mode, VerifyArgs,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Output {
    Text,
    Json,
}

impl Output {
    fn from_flag(json: bool) -> Self {
        if json {
            Output::Json
        } else {
            Output::Text
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
struct Config {
    limits: Limits,
    cache_dir: Option<PathBuf>,
}

impl Config {
    fn from_cli(cli: &Cli) -> Self {
        Config {
            limits: Limits {
                budget_terms: cli.budget,
                degree_ceiling: cli.degree_ceiling,
            },
            cache_dir: (!cli.no_cache).then(|| cli.cache_dir.clone()),
        }
    }

    fn engine(&self) -> Macdonald {
        let engine = Macdonald::new(self.limits);
        match &self.cache_dir {
            Some(dir) => engine.with_disk_cache(DiskCache::new(dir)),
            None => engine,
        }
    }
}

type CmdResult = Result<ExitCode, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Print a line; a closed pipe downstream is not an error.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

fn print_json(v: &impl serde::Serialize) {
    say!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

pub(crate) fn run(cli: Cli) -> CmdResult {
    let config = Config::from_cli(&cli);
    match cli.command {
        Command::Asm { action } => run_asm(action),
        Command::Det(args) => run_det(args),
        Command::Hyperdet(args) => run_hyperdet(&config, args),
        Command::Macdonald(args) => run_macdonald(&config, args),
        Command::Dyson(args) => run_dyson(&config, args),
        Command::Verify(args) => run_verify(&config, args),
        Command::Cache { action } => run_cache(&config, action),
    }
}

fn record_json(r: &AsmRecord) -> Value {
    json!({
        "n": r.asm.n(),
        "rows": r.asm.rows(),
        "inversions": r.inversions,
        "negatives": r.negatives,
        "genperm": r.genperm,
    })
}

fn run_asm(action: AsmAction) -> CmdResult {
    match action {
        AsmAction::Count { n, enumerate, json } => {
            let count = if enumerate {
                asm::enumerate(n).map_err(err)?.count().into()
            } else {
                asm::count_formula(n)
            };
            match Output::from_flag(json) {
                Output::Json => print_json(&json!({ "n": n, "count": count.to_string() })),
                Output::Text => say!("{count}"),
            }
        }
        AsmAction::List { n, json } => {
            let records = asm::table(n).map_err(err)?;
            match Output::from_flag(json) {
                Output::Json => print_json(&records.iter().map(record_json).collect::<Vec<_>>()),
                Output::Text => {
                    for r in &records {
                        let perm: Vec<String> = r.genperm.iter().map(|x| x.to_string()).collect();
                        say!("{}  i={} n={} X=({})", r.asm, r.inversions, r.negatives, perm.join(","));
                    }
                }
            }
        }
        AsmAction::Stats { n, input, json } => {
            let records: Vec<AsmRecord> = match input {
                Some(path) => {
                    let asms: Vec<Asm> =
                        serde_json::from_str(&read(&path)?).map_err(|e| format!("{}: {e}", path.display()))?;
                    asms.into_iter().map(AsmRecord::from).collect()
                }
                None => asm::table(n.expect("required by clap")).map_err(err)?,
            };
            let mut inversions: BTreeMap<i64, usize> = BTreeMap::new();
            let mut negatives: BTreeMap<usize, usize> = BTreeMap::new();
            let mut joint: BTreeMap<(i64, usize), usize> = BTreeMap::new();
            for r in &records {
                *inversions.entry(r.inversions).or_default() += 1;
                *negatives.entry(r.negatives).or_default() += 1;
                *joint.entry((r.inversions, r.negatives)).or_default() += 1;
            }
            match Output::from_flag(json) {
                Output::Json => print_json(&json!({
                    "count": records.len(),
                    "inversions": inversions.iter().map(|(k, v)| (k.to_string(), v)).collect::<BTreeMap<_, _>>(),
                    "negatives": negatives.iter().map(|(k, v)| (k.to_string(), v)).collect::<BTreeMap<_, _>>(),
                    "joint": joint.iter().map(|(&(i, n), c)| json!({ "inversions": i, "negatives": n, "count": c })).collect::<Vec<_>>(),
                })),
                Output::Text => {
                    say!("count {}", records.len());
                    say!("i(X)  count");
                    for (i, c) in &inversions {
                        say!("{i:>4}  {c}");
                    }
                    say!("n(X)  count");
                    for (k, c) in &negatives {
                        say!("{k:>4}  {c}");
                    }
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// `sym` means the coefficient indeterminate stands for λ.
fn parse_lambda(s: &str) -> Result<(RationalFunction, bool), String> {
    if s == "sym" {
        return Ok((RationalFunction::q(), true));
    }
    let lambda = parse_rational_function(s).map_err(err)?;
    if lambda.is_zero() {
        return Err("λ must be nonzero".into());
    }
    Ok((lambda, false))
}

fn coeff_string(c: &RationalFunction, symbolic: bool) -> String {
    if symbolic {
        c.to_string_with("λ")
    } else {
        c.to_string()
    }
}

fn run_det(args: DetArgs) -> CmdResult {
    #[derive(serde::Deserialize)]
    struct MatrixJson {
        n: usize,
        entries: Vec<Vec<String>>,
    }
    let path = &args.matrix;
    let m: MatrixJson = serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    if m.entries.len() != m.n || m.entries.iter().any(|r| r.len() != m.n) {
        return Err(format!(
            "{}: expected a {n}×{n} array of entries",
            path.display(),
            n = m.n
        ));
    }
    let (lambda, symbolic) = parse_lambda(&args.lambda)?;
    let mut names: Vec<String> = Vec::new();
    for e in m.entries.iter().flatten() {
        for name in collect_identifiers(e).map_err(err)? {
            if !names.contains(&name) {
                names.push(name);
            }
        }
    }
    if symbolic && has_q(&m.entries) {
        return Err("entries may not use q together with --lambda sym".into());
    }
    let rows = m
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| parse_laurent(e, &names).map_err(|x| format!("entry `{e}`: {x}")))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>, String>>()?;
    let a = SquareMatrix::from_rows(rows).map_err(err)?;
    let det = det_lambda(&a, &lambda).map_err(err)?;
    let rendered = det.render_by(&names, |c| coeff_string(c, symbolic));
    match Output::from_flag(args.json) {
        Output::Json => {
            let terms: Vec<Value> = det
                .terms()
                .map(|(e, c)| json!({ "exponents": e, "coeff": coeff_string(c, symbolic) }))
                .collect();
            print_json(
                &json!({ "n": m.n, "lambda": args.lambda, "variables": names, "value": rendered, "terms": terms }),
            );
        }
        Output::Text => say!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn has_q(entries: &[Vec<String>]) -> bool {
    entries.iter().flatten().any(|e| {
        let bytes = e.as_bytes();
        bytes.iter().enumerate().any(|(i, &b)| {
            let word = |j: usize| bytes.get(j).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
            b == b'q' && (i == 0 || !word(i - 1)) && !word(i + 1)
        })
    })
}

fn convention(c: ConventionArg) -> PhiConvention {
    match c {
        ConventionArg::Paper => PhiConvention::PaperLiteral,
        ConventionArg::Proof => PhiConvention::ProofConsistent,
    }
}

fn run_hyperdet(config: &Config, args: HyperdetArgs) -> CmdResult {
    let a = HyperMatrix::from_json(&read(&args.input)?).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let conv = convention(args.convention);
    let (value, symbolic) = match args.mode {
        Mode::Cayley => (cayley_hyperdet(&a, &config.limits).map_err(err)?, false),
        Mode::Lambda => {
            let (lambda, symbolic) = parse_lambda(&args.lambda)?;
            if symbolic {
                for ix in hyperdet_core::hyper::all_indices(a.n(), a.dim()) {
                    if a.entry(&ix).map_err(err)?.as_constant().is_none() {
                        return Err("entries must be rational constants when --lambda is sym".into());
                    }
                }
            }
            (
                lambda_hyperdet(&a, &lambda, conv, &config.limits).map_err(err)?,
                symbolic,
            )
        }
    };
    let text = coeff_string(&value, symbolic);
    match Output::from_flag(args.json) {
        Output::Json => {
            let mode = match args.mode {
                Mode::Cayley => "cayley",
                Mode::Lambda => "lambda",
            };
            let mut out = json!({ "mode": mode, "n": a.n(), "dim": a.dim(), "value": text });
            if args.mode == Mode::Lambda {
                out["convention"] = json!(conv.as_str());
                out["lambda"] = json!(args.lambda);
            }
            print_json(&out);
        }
        Output::Text => say!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_symfun(f: &SymFun, extra: Value, output: Output) {
    match output {
        Output::Json => {
            let mut v = serde_json::to_value(f).expect("serializable");
            if let (Value::Object(o), Value::Object(e)) = (&mut v, extra) {
                for (k, x) in e {
                    o.insert(k, x);
                }
            }
            print_json(&v);
        }
        Output::Text => say!("{}", f.render()),
    }
}

fn run_macdonald(config: &Config, args: MacdonaldArgs) -> CmdResult {
    let basis = match args.basis {
        BasisArg::P => Basis::Power,
        BasisArg::M => Basis::Monomial,
    };
    let output = Output::from_flag(args.json);
    if let Some(path) = &args.input {
        let f: SymFun = serde_json::from_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
        print_symfun(&f.to_basis(basis), json!({}), output);
        return Ok(ExitCode::SUCCESS);
    }
    let lambda: Partition = args
        .partition
        .as_deref()
        .expect("required by clap")
        .parse()
        .map_err(err)?;
    let m = args.m.expect("required by clap");
    let engine = config.engine();
    let f = match args.kind {
        Kind::P => engine.p(&lambda, m),
        Kind::Q => engine.q(&lambda, m),
    }
    .map_err(err)?;
    let kind = match args.kind {
        Kind::P => "P",
        Kind::Q => "Q",
    };
    print_symfun(
        &f.to_basis(basis),
        json!({ "partition": lambda, "m": m, "kind": kind }),
        output,
    );
    Ok(ExitCode::SUCCESS)
}

fn run_dyson(config: &Config, args: DysonArgs) -> CmdResult {
    let f = dyson_coefficient(args.k, args.s, args.m, &config.limits).map_err(err)?;
    print_symfun(
        &f,
        json!({ "k": args.k, "s": args.s, "m": args.m }),
        Output::from_flag(args.json),
    );
    Ok(ExitCode::SUCCESS)
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::DiscrepancyDocumented => "DOCUMENTED",
    }
}

fn report_line(r: &VerificationReport) -> String {
    let params = match &r.parameters {
        Value::Object(o) => o
            .iter()
            .map(|(k, v)| {
                format!(
                    "{k}={}",
                    v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())
                )
            })
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    };
    let conv = r.convention.map(|c| format!(" [{c}]")).unwrap_or_default();
    format!(
        "{:<10} {} {params}{conv} ({} ms)",
        status_label(r.status),
        r.identity,
        r.runtime_ms
    )
}

fn run_verify(config: &Config, args: VerifyArgs) -> CmdResult {
    let which = match args.identity.as_str() {
        "all" => None,
        name => Some(name.parse::<Identity>().map_err(err)?),
    };
    let selection = Selection {
        n: args.n,
        k: args.k,
        s: args.s,
        m: args.m,
        convention: match args.convention {
            ConventionChoice::Both => None,
            ConventionChoice::Paper => Some(PhiConvention::PaperLiteral),
            ConventionChoice::Proof => Some(PhiConvention::ProofConsistent),
        },
    };
    let engine = config.engine();
    let mut verifier = Verifier::new(&engine).with_seed(args.seed);
    if let Some(t) = args.trials {
        verifier = verifier.with_trials(t);
    }
    let reports = verifier.run(which, &selection).map_err(err)?;
    match Output::from_flag(args.json) {
        Output::Json => print_json(&reports),
        Output::Text => {
            for r in &reports {
                say!("{}", report_line(r));
                if r.status != Status::Pass {
                    say!("           witness: {}", r.witness);
                }
            }
        }
    }
    Ok(if any_failure(&reports) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn run_cache(config: &Config, action: CacheAction) -> CmdResult {
    let dir = config.cache_dir.clone().ok_or("the cache is disabled by --no-cache")?;
    let cache = DiskCache::new(dir);
    match action {
        CacheAction::Stat { json } => {
            let stat = cache.stat().map_err(err)?;
            match Output::from_flag(json) {
                Output::Json => print_json(&stat),
                Output::Text => {
                    if stat.is_empty() {
                        say!("cache {} is empty", cache.dir().display());
                    }
                    for s in &stat {
                        let keys: Vec<String> = s.partitions.iter().map(|p| p.to_string()).collect();
                        say!("m={}: {}", s.m, keys.join(" "));
                    }
                }
            }
        }
        CacheAction::Clear => {
            let removed = cache.clear().map_err(err)?;
            say!("removed {removed} cache file(s) from {}", cache.dir().display());
        }
        CacheAction::Export { m } => {
            let files = cache.export(m).map_err(err)?;
            match m {
                Some(_) => print_json(&files[0]),
                None => print_json(&files),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
