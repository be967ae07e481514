use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hsd::code::{LinearCode, DEFAULT_BUDGET};
use hsd::linalg::MatrixJson;
use hsd::construct::{Construction, ConstructionSpec};
use hsd::mpcode::{mp_code, mp_distance_lower_bound, mp_is_self_dual, MatrixProductJson};
use hsd::search::{
    records_to_csv, records_to_jsonl, reproduce_table, run_search, run_search_resumable,
    AbcdStrategy, ReproduceOptions, SearchPlan,
};
use hsd::unitary::{Convention, Exponents, UnitaryGenSet, WordFamily};
use hsd::{Error, FieldCtx};

#[derive(Parser)]
#[command(name = "hsd", version, about = "Hermitian self-dual codes from unitary matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the field card for GF(q²).
    Field {
        #[arg(long)]
        q2: u64,
    },
    /// Emit word-family matrices L = N^i P^j Q^k R^l as JSON lines.
    Unitary(UnitaryArgs),
    /// Build one code and print it as JSON.
    Construct(ConstructArgs),
    /// Exact minimum distance, or an MDS certificate when enumeration is over budget.
    Mindist {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Self-orthogonality, self-duality and MDS report for a code file.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Run a search plan and write CSV (or JSON lines).
    Search(SearchArgs),
    /// Re-derive a stored table and print the report.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct WordArgs {
    #[arg(long)]
    q2: u64,
    #[arg(long)]
    n: usize,
    /// Power applied to each word; defaults to n.
    #[arg(long)]
    m: Option<u64>,
    /// Transvection solution "a,b,c,d"; defaults to the deterministic pick.
    #[arg(long)]
    abcd: Option<String>,
    #[arg(long, default_value = "printed", value_parser = parse_convention)]
    convention: Convention,
}

#[derive(Args)]
struct UnitaryArgs {
    #[command(flatten)]
    word: WordArgs,
    /// Single tuple "i,j,k,l"; otherwise every tuple in 0..=s.
    #[arg(long, value_parser = parse_ijkl)]
    ijkl: Option<Exponents>,
    #[arg(long, default_value_t = 1)]
    s: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    /// Read a full construction spec from JSON instead of flags.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    q2: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    construction: Option<Construction>,
    #[arg(long, value_parser = parse_ijkl)]
    ijkl: Option<Exponents>,
    #[arg(long)]
    abcd: Option<String>,
    #[arg(long, value_parser = parse_convention)]
    convention: Option<Convention>,
    /// Parameters "k=v,k=v"; bordered families accept case=minus/delta0/case1.
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    lambdas: Option<String>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Read the plan from JSON; flags are ignored.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long)]
    q2: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, default_value_t = 2)]
    s: u32,
    /// Comma-separated construction ids.
    #[arg(long, default_value = "eq5")]
    construction: String,
    /// "deterministic", "all", or "a,b,c,d;a,b,c,d".
    #[arg(long, default_value = "deterministic")]
    abcd: String,
    /// Comma-separated: printed, reversed.
    #[arg(long, default_value = "printed")]
    conventions: String,
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    lambdas: Option<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    best_only: bool,
    #[arg(long)]
    jsonl: bool,
    /// Save progress here and resume from it.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long)]
    table: u32,
    /// Only rows whose label contains this string.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Cap on the fallback search (cells × enumeration cost).
    #[arg(long)]
    search_work: Option<u128>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    match s {
        "printed" => Ok(Convention::Printed),
        "reversed" => Ok(Convention::Reversed),
        _ => Err(format!("unknown convention {s}")),
    }
}

fn parse_ijkl(s: &str) -> Result<Exponents, String> {
    let v: Vec<u32> = s
        .split(',')
        .map(|x| x.trim().parse().map_err(|_| format!("bad exponent {x}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected four exponents i,j,k,l".to_string())
}

fn parse_abcd(s: &str) -> hsd::Result<[String; 4]> {
    let v: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
    v.try_into()
        .map_err(|_| Error::Parse(format!("expected a,b,c,d, got {s}")))
}

fn parse_params(s: &str) -> hsd::Result<BTreeMap<String, String>> {
    s.split(',')
        .filter(|kv| !kv.is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected k=v, got {kv}")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).collect()
}

fn emit(out: Option<&Path>, text: &str) -> hsd::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn pretty(v: &impl serde::Serialize) -> hsd::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn cmd_field(q2: u64) -> hsd::Result<()> {
    let ctx = FieldCtx::from_order(q2)?;
    let card = json!({
        "q2": q2,
        "p": ctx.p(),
        "m": ctx.m(),
        "q": ctx.q(),
        "modulus": ctx.modulus(),
        "omega_order": ctx.group_order(),
        "alpha": ctx.alpha_for_minus_one().to_string(),
    });
    emit(None, &pretty(&card)?)
}

fn gens_for(w: &WordArgs) -> hsd::Result<UnitaryGenSet> {
    let ctx = FieldCtx::from_order(w.q2)?;
    match &w.abcd {
        None => UnitaryGenSet::new(&ctx, w.n),
        Some(s) => {
            let v = parse_abcd(s)?;
            let e: Vec<_> = v.iter().map(|x| ctx.parse_elem(x)).collect::<hsd::Result<_>>()?;
            UnitaryGenSet::with_abcd(&ctx, w.n, [e[0], e[1], e[2], e[3]])
        }
    }
}

fn cmd_unitary(a: &UnitaryArgs) -> hsd::Result<()> {
    let gens = gens_for(&a.word)?;
    let mut fam = WordFamily::new(&gens, a.word.m.unwrap_or(a.word.n as u64), a.word.convention)?;
    let tuples: Vec<Exponents> = match a.ijkl {
        Some(e) => vec![e],
        None => WordFamily::tuples(a.s).collect(),
    };
    fam.warm(tuples.iter().flatten().copied().max().unwrap_or(0));
    let mut text = String::new();
    for e in tuples {
        let l = fam.matrix(e);
        let line = json!({ "ijkl": e, "convention": a.word.convention, "L": l.to_json() });
        text.push_str(&serde_json::to_string(&line)?);
        text.push('\n');
    }
    emit(a.out.as_deref(), &text)
}

fn cmd_construct(a: &ConstructArgs) -> hsd::Result<()> {
    let spec = match &a.spec {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
        None => ConstructionSpec {
            construction: Some(
                a.construction
                    .ok_or_else(|| Error::Parse("--construction is required".into()))?,
            ),
            q2: a.q2.ok_or_else(|| Error::Parse("--q2 is required".into()))?,
            n: a.n.ok_or_else(|| Error::Parse("--n is required".into()))?,
            ijkl: a.ijkl,
            m: a.m,
            convention: a.convention,
            abcd: a.abcd.as_deref().map(parse_abcd).transpose()?,
            params: a.params.as_deref().map(parse_params).transpose()?.unwrap_or_default(),
            lambdas: a.lambdas.as_deref().map(split_list),
            x: a.x.as_deref().map(split_list),
            ..Default::default()
        },
    };
    let code = spec.build()?;
    emit(a.out.as_deref(), &pretty(&code.to_json(None))?)
}

enum Loaded {
    Code(LinearCode),
    Product(MatrixProductJson),
}

/// A code file: a code JSON, a matrix-product JSON (has "A"), or a construction spec.
fn load(path: &Path) -> hsd::Result<Loaded> {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if v.get("A").is_some() {
        return Ok(Loaded::Product(serde_json::from_value(v)?));
    }
    if v.get("data").is_some() {
        // n and k of a code file are informational; the matrix is the code.
        let m: MatrixJson = serde_json::from_value(v)?;
        let ctx = FieldCtx::from_order(m.q2)?;
        return Ok(Loaded::Code(LinearCode::new(m.to_matrix(&ctx)?)));
    }
    let spec: ConstructionSpec = serde_json::from_value(v)?;
    Ok(Loaded::Code(spec.build()?))
}

fn as_code(l: &Loaded) -> hsd::Result<LinearCode> {
    match l {
        Loaded::Code(c) => Ok(c.clone()),
        Loaded::Product(p) => mp_code(&p.to_spec()?),
    }
}

fn cmd_mindist(file: &Path, budget: u128) -> hsd::Result<()> {
    let code = as_code(&load(file)?)?;
    let (n, k) = (code.length(), code.dimension());
    let report = match code.min_distance(budget) {
        Ok(d) => json!({ "n": n, "k": k, "d": d, "method": "exhaustive" }),
        Err(e @ Error::BudgetExceeded { .. }) => match code.is_mds() {
            Ok(true) => json!({ "n": n, "k": k, "d": n - k + 1, "method": "mds" }),
            _ => return Err(e),
        },
        Err(e) => return Err(e),
    };
    emit(None, &pretty(&report)?)
}

fn cmd_verify(file: &Path, budget: u128) -> hsd::Result<()> {
    let loaded = load(file)?;
    let code = as_code(&loaded)?;
    let mds = match code.is_mds() {
        Ok(b) => json!(b),
        Err(_) => Value::Null,
    };
    let mut report = json!({
        "n": code.length(),
        "k": code.dimension(),
        "self_orthogonal": code.is_self_orthogonal_h(),
        "self_dual": code.is_self_dual_h(),
        "mds": mds,
    });
    if let Loaded::Product(p) = &loaded {
        let spec = p.to_spec()?;
        report["verdict"] = serde_json::to_value(mp_is_self_dual(&spec))?;
        report["distance_lower_bound"] = match mp_distance_lower_bound(&spec, budget) {
            Ok(b) => json!(b),
            Err(_) => Value::Null,
        };
    }
    emit(None, &pretty(&report)?)
}

fn cmd_search(a: &SearchArgs) -> hsd::Result<()> {
    let plan: SearchPlan = match &a.plan {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
        None => {
            let constructions = split_list(&a.construction)
                .iter()
                .map(|c| c.parse())
                .collect::<hsd::Result<Vec<Construction>>>()?;
            let mut plan = SearchPlan::new(
                a.q2.ok_or_else(|| Error::Parse("--q2 is required".into()))?,
                a.n.ok_or_else(|| Error::Parse("--n is required".into()))?,
                constructions,
                a.s,
            );
            plan.m = a.m;
            plan.conventions = split_list(&a.conventions)
                .iter()
                .map(|c| parse_convention(c).map_err(Error::Parse))
                .collect::<hsd::Result<_>>()?;
            plan.abcd = match a.abcd.as_str() {
                "deterministic" => AbcdStrategy::Deterministic,
                "all" => AbcdStrategy::All,
                list => AbcdStrategy::Explicit(
                    list.split(';').map(parse_abcd).collect::<hsd::Result<_>>()?,
                ),
            };
            if let Some(p) = &a.params {
                plan.params = p.split(';').map(parse_params).collect::<hsd::Result<_>>()?;
            }
            plan.lambdas = a.lambdas.as_deref().map(split_list);
            plan.budget = a.budget;
            plan.best_only = a.best_only;
            plan
        }
    };
    let mut plan = plan;
    if a.jobs.is_some() {
        plan.jobs = a.jobs;
    }
    let outcome = match &a.checkpoint {
        Some(path) => run_search_resumable(&plan, path, 4096)?,
        None => run_search(&plan)?,
    };
    let text = if a.jsonl {
        records_to_jsonl(&outcome.records)?
    } else {
        records_to_csv(&outcome.records)?
    };
    emit(a.out.as_deref(), &text)
}

fn cmd_reproduce(a: &ReproduceArgs) -> hsd::Result<()> {
    let mut opts = ReproduceOptions {
        budget: a.budget,
        jobs: a.jobs,
        filter: a.filter.clone(),
        ..Default::default()
    };
    if let Some(w) = a.search_work {
        opts.search_work = w;
    }
    let report = reproduce_table(a.table, &opts)?;
    for row in &report.rows {
        eprintln!("{:<44} {:?}", row.label, row.status);
    }
    emit(a.out.as_deref(), &pretty(&report)?)
}

fn run(cli: &Cli) -> hsd::Result<()> {
    match &cli.cmd {
        Cmd::Field { q2 } => cmd_field(*q2),
        Cmd::Unitary(a) => cmd_unitary(a),
        Cmd::Construct(a) => cmd_construct(a),
        Cmd::Mindist { file, budget } => cmd_mindist(file, *budget),
        Cmd::Verify { file, budget } => cmd_verify(file, *budget),
        Cmd::Search(a) => cmd_search(a),
        Cmd::Reproduce(a) => cmd_reproduce(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, kind) = match e {
                Error::BudgetExceeded { .. } | Error::SubsetCountTooLarge { .. } => (2, "budget"),
                _ => (1, "validation"),
            };
            eprintln!("{}", json!({ "error": kind, "message": e.to_string() }));
            ExitCode::from(code)
        }
    }
}
