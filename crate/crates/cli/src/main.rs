use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use vtflip::balance::{fixed_construct, mbt_construct, mfmb_construct, ofmb_construct, MbtLayout};
use vtflip::bounds::{bound_sweep, sweep_csv, SWEEP_HEADER};
use vtflip::channel::{monte_carlo, ChannelConfig, ForcedEvent};
use vtflip::codebook::{builtin_fixture, single_edit_correctable, EditKind, FIXTURE_NAMES};
use vtflip::reproduce::{reproduce, TARGETS};
use vtflip::{framed_decode, BalancedCode, BitWord, Codebook, DecodeContext, ResidueSystem, VariantPolicy};

const SCHEMA_VERSION: u32 = 1;

/// Moment-balanced insertion/deletion/substitution codes.
#[derive(Parser)]
#[command(name = "vtflip", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Balance a codebook and emit the balanced code as JSON.
    Balance(BalanceArgs),
    /// Decode one received frame against a balanced code.
    Decode(DecodeArgs),
    /// Monte Carlo over the edit/substitution channel.
    Simulate(SimulateArgs),
    /// Exact bound sweep as CSV.
    ///
    /// Columns: d, log2 of the one-flip bound, log2 of the template bound,
    /// winner (ofmb | mbt | tie, decided on exact rationals).
    Bounds(BoundsArgs),
    /// Recheck a balanced code with brute-force oracles.
    Verify(VerifyArgs),
    /// Regenerate a reference table or the bound sweep and diff it against
    /// the embedded data.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SchemeArg {
    Mfmb,
    Ofmb,
    Fixed,
    Mbt,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum PolicyArg {
    Single,
    Multi,
}

#[derive(Args, Serialize)]
struct BalanceArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Codebook file, or a fixture name (hamming_7_16_3, bch_15_32_7).
    #[arg(long)]
    codebook: String,
    /// Modulus; defaults to the balanced length plus one. Ignored by ofmb.
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, default_value_t = 0)]
    a: u64,
    /// Flip budget for mfmb.
    #[arg(long, default_value_t = 1)]
    budget: usize,
    #[arg(long, value_enum, default_value_t = PolicyArg::Single)]
    policy: PolicyArg,
    /// Print a word / σ / support table instead of JSON on stdout.
    #[arg(long)]
    table: bool,
    /// Also write the JSON here.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct DecodeArgs {
    /// Balanced code JSON written by `balance`.
    #[arg(long)]
    context: PathBuf,
    /// Received frame as a 0/1 string.
    #[arg(long)]
    word: String,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    context: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    p_sub: f64,
    #[arg(long, default_value_t = 0.0)]
    p_del: f64,
    #[arg(long, default_value_t = 0.0)]
    p_ins: f64,
    /// one_deletion, one_insertion or k_substitutions=K.
    #[arg(long)]
    forced: Option<String>,
    /// Never substitute at the scheme's erasure positions.
    #[arg(long)]
    protect_erasures: bool,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    workers: usize,
    /// Emit one CSV row (trials,successes,failures,frame_error_rate).
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Serialize)]
struct BoundsArgs {
    #[arg(long, required_unless_present = "fig")]
    n: Option<usize>,
    /// Single distance.
    #[arg(long, conflicts_with = "d_range")]
    d: Option<usize>,
    /// Inclusive range LO:HI.
    #[arg(long)]
    d_range: Option<String>,
    /// The n = 265, d = 2..130 comparison sweep.
    #[arg(long, conflicts_with_all = ["n", "d", "d_range"])]
    fig: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    context: PathBuf,
}

#[derive(Args, Serialize)]
struct ReproduceArgs {
    /// table1, table2, table3 or fig1.
    target: String,
    /// Write the regenerated artifact here (CSV for fig1, JSON otherwise).
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure with an exit code and a machine-readable body.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure { code: 2, kind: "usage", message: message.to_string() }
    }
}

impl From<vtflip::Error> for Failure {
    fn from(e: vtflip::Error) -> Self {
        Failure { code: 2, kind: "invalid_input", message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

#[derive(Serialize)]
struct RunManifest {
    subcommand: &'static str,
    params: Value,
    inputs: Map<String, Value>,
    tool_version: &'static str,
    seed: Option<u64>,
}

impl RunManifest {
    fn new(subcommand: &'static str, params: &impl Serialize) -> Self {
        RunManifest {
            subcommand,
            params: serde_json::to_value(params).expect("args serialize"),
            inputs: Map::new(),
            tool_version: env!("CARGO_PKG_VERSION"),
            seed: None,
        }
    }

    fn digest(&mut self, name: &str, bytes: &[u8]) {
        let hex: String = Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.insert(name.into(), Value::String(format!("sha256:{hex}")));
    }

    fn csv_lines(&self) -> String {
        let text = serde_json::to_string(self).expect("manifest serializes");
        format!("# schema_version: {SCHEMA_VERSION}\n# manifest: {text}\n")
    }
}

fn document(manifest: &RunManifest, body: Value) -> String {
    let mut obj = Map::new();
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    match body {
        Value::Object(fields) => obj.extend(fields),
        other => {
            obj.insert("result".into(), other);
        }
    }
    obj.insert("manifest".into(), serde_json::to_value(manifest).expect("manifest serializes"));
    let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure { code: 2, kind: "io", message: format!("{}: {e}", path.display()) })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure { code: 2, kind: "io", message: format!("{}: {e}", path.display()) })
}

fn load_codebook(spec: &str, manifest: &mut RunManifest) -> Result<Codebook, Failure> {
    if FIXTURE_NAMES.contains(&spec) && !Path::new(spec).exists() {
        let cb = builtin_fixture(spec)?;
        manifest.digest("codebook", cb.to_text().as_bytes());
        return Ok(cb);
    }
    let bytes = read(Path::new(spec))?;
    manifest.digest("codebook", &bytes);
    let text = String::from_utf8(bytes).map_err(Failure::usage)?;
    Ok(Codebook::parse(&text)?)
}

fn load_context(path: &Path, manifest: &mut RunManifest) -> Result<BalancedCode, Failure> {
    let bytes = read(path)?;
    manifest.digest("context", &bytes);
    let text = String::from_utf8(bytes).map_err(Failure::usage)?;
    Ok(BalancedCode::from_json(&text)?)
}

fn run_balance(args: BalanceArgs) -> Outcome {
    let mut manifest = RunManifest::new("balance", &args);
    let cb = load_codebook(&args.codebook, &mut manifest)?;
    let out_len = match args.scheme {
        SchemeArg::Mbt => MbtLayout::for_code_len(cb.n())?.n,
        _ => cb.n(),
    };
    let rs = ResidueSystem::new(args.m.unwrap_or(out_len as u64 + 1), args.a)?;
    let policy = match args.policy {
        PolicyArg::Single => VariantPolicy::Single,
        PolicyArg::Multi => VariantPolicy::Multi,
    };
    let code = match args.scheme {
        SchemeArg::Mfmb => mfmb_construct(&cb, rs, args.budget, policy)?,
        SchemeArg::Ofmb => ofmb_construct(&cb)?,
        SchemeArg::Fixed => fixed_construct(&cb, rs)?,
        SchemeArg::Mbt => mbt_construct(&cb, rs)?,
    };
    let doc = document(&manifest, code.to_json());
    if let Some(path) = &args.output {
        write(path, &doc)?;
    }
    if args.table {
        print!("{}", table(&code));
    } else {
        print!("{doc}");
    }
    Ok(0)
}

fn table(code: &BalancedCode) -> String {
    let rs = code.rs;
    let mut out = format!("# m = {}, a = {}\ncode word\tσ(c)\tS\tbalanced\n", rs.modulus(), rs.target());
    for e in &code.entries {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", e.original, e.original.moment(rs), e.support, e.balanced));
    }
    for w in &code.excluded {
        out.push_str(&format!("{}\t{}\t-\texcluded\n", w, w.moment(rs)));
    }
    out
}

fn run_decode(args: DecodeArgs) -> Outcome {
    let mut manifest = RunManifest::new("decode", &args);
    let code = load_context(&args.context, &mut manifest)?;
    let received: BitWord = args.word.parse()?;
    let ctx = DecodeContext::new(code)?;
    let outcome = framed_decode(&received, &ctx);
    let body = serde_json::to_value(&outcome).expect("outcome serializes");
    print!("{}", document(&manifest, body));
    Ok(if outcome.is_success() { 0 } else { 1 })
}

fn parse_forced(s: &str) -> Result<ForcedEvent, Failure> {
    match s {
        "one_deletion" => Ok(ForcedEvent::OneDeletion),
        "one_insertion" => Ok(ForcedEvent::OneInsertion),
        _ => s
            .strip_prefix("k_substitutions=")
            .and_then(|k| k.parse().ok())
            .map(ForcedEvent::KSubstitutions)
            .ok_or_else(|| Failure::usage(format!("unknown forced event {s:?}"))),
    }
}

fn run_simulate(args: SimulateArgs) -> Outcome {
    let mut manifest = RunManifest::new("simulate", &args);
    manifest.seed = Some(args.seed);
    let code = load_context(&args.context, &mut manifest)?;
    let ctx = DecodeContext::new(code)?;
    let cfg = ChannelConfig {
        p_sub: args.p_sub,
        p_del: args.p_del,
        p_ins: args.p_ins,
        forced: args.forced.as_deref().map(parse_forced).transpose()?,
        protected: if args.protect_erasures { ctx.erasures().support().indices().to_vec() } else { vec![] },
    };
    let stats = monte_carlo(&ctx, &cfg, args.trials, args.seed, args.workers)?;
    if args.csv {
        let fer = if stats.trials == 0 { 0.0 } else { stats.failures as f64 / stats.trials as f64 };
        print!(
            "{}trials,successes,failures,frame_error_rate\n{},{},{},{:.6}\n",
            manifest.csv_lines(),
            stats.trials,
            stats.successes,
            stats.failures,
            fer
        );
    } else {
        print!("{}", document(&manifest, serde_json::to_value(&stats).expect("stats serialize")));
    }
    Ok(0)
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| Failure::usage(format!("expected LO:HI, got {s:?}")))?;
    let lo = lo.trim().parse().map_err(Failure::usage)?;
    let hi = hi.trim().parse().map_err(Failure::usage)?;
    if lo > hi {
        return Err(Failure::usage(format!("empty range {s}")));
    }
    Ok((lo, hi))
}

fn run_bounds(args: BoundsArgs) -> Outcome {
    let manifest = RunManifest::new("bounds", &args);
    let (n, lo, hi) = if args.fig {
        (vtflip::golden::FIG1_N, vtflip::golden::FIG1_SWEEP.0, vtflip::golden::FIG1_SWEEP.1)
    } else {
        let n = args.n.expect("clap enforces n");
        match (args.d, &args.d_range) {
            (Some(d), _) => (n, d, d),
            (None, Some(r)) => {
                let (lo, hi) = parse_range(r)?;
                (n, lo, hi)
            }
            (None, None) => (n, 2, n.saturating_sub(1).max(2)),
        }
    };
    let rows = bound_sweep(n, lo..=hi)?;
    let text = format!("{}{}", manifest.csv_lines(), sweep_csv(&rows));
    debug_assert!(sweep_csv(&rows).starts_with(SWEEP_HEADER));
    match &args.output {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn run_verify(args: VerifyArgs) -> Outcome {
    let mut manifest = RunManifest::new("verify", &args);
    let bytes = read(&args.context)?;
    manifest.digest("context", &bytes);
    let text = String::from_utf8(bytes).map_err(Failure::usage)?;
    let code = match BalancedCode::from_json(&text) {
        Ok(code) => code,
        Err(e @ vtflip::Error::MalformedBalancedCode(_)) => {
            let body = json!({ "passed": false, "verdicts": { "well_formed": false }, "reason": e.to_string() });
            print!("{}", document(&manifest, body));
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let words = code.balanced_words();
    let rs = code.rs;
    let in_class = words.iter().all(|w| w.in_class(rs));
    let measured = Codebook::from_words(words.clone())?.min_distance().ok();
    let deletion = single_edit_correctable(&words, EditKind::Deletion);
    let insertion = single_edit_correctable(&words, EditKind::Insertion);
    let verdicts = json!({
        "well_formed": true,
        "moment_class": in_class,
        "d_min": measured == code.d_min_balanced,
        "deletion_balls_disjoint": deletion.correctable,
        "insertion_balls_disjoint": insertion.correctable,
    });
    let passed = verdicts.as_object().expect("object").values().all(|v| v == &Value::Bool(true));
    let body = json!({
        "passed": passed,
        "verdicts": verdicts,
        "d_min_measured": measured,
        "deletion_witness": deletion.witness,
        "insertion_witness": insertion.witness,
    });
    print!("{}", document(&manifest, body));
    Ok(if passed { 0 } else { 1 })
}

fn run_reproduce(args: ReproduceArgs) -> Outcome {
    let manifest = RunManifest::new("reproduce", &args);
    let report = reproduce(&args.target)
        .ok_or_else(|| Failure::usage(format!("unknown target {:?}; expected one of {TARGETS:?}", args.target)))??;
    if let Some(path) = &args.output {
        let artifact = match report.artifact.get("csv").and_then(Value::as_str) {
            Some(csv) => format!("{}{csv}", manifest.csv_lines()),
            None => document(&manifest, report.artifact.clone()),
        };
        write(path, &artifact)?;
    }
    for c in report.failures() {
        eprintln!("{}", json!({ "mismatch": c.name, "detail": c.detail }));
    }
    let passed = report.passed;
    print!("{}", document(&manifest, serde_json::to_value(&report).expect("report serializes")));
    Ok(if passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": "usage", "message": e.to_string().trim_end() }));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Balance(a) => run_balance(a),
        Command::Decode(a) => run_decode(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Bounds(a) => run_bounds(a),
        Command::Verify(a) => run_verify(a),
        Command::Reproduce(a) => run_reproduce(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind, "message": f.message }));
            ExitCode::from(f.code)
        }
    }
}
