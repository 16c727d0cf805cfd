use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use orthoreal::algebra::textfmt::{read_matrix_in, write_matrix};
use orthoreal::algebra::{Field, FqMatrix};
use orthoreal::characters;
use orthoreal::constructions;
use orthoreal::decomp;
use orthoreal::forms::{FormType, QuadSpace};
use orthoreal::ogroup::{self, GroupKind};
use orthoreal::reality::{self, GroupSpec, SearchOptions, DEFAULT_CAP};
use orthoreal::verify::{self, Budget};

const SCHEMA: &str = "orthoreal/1";
const DEFAULT_ENUM_CAP: u128 = 2_000_000;

#[derive(Parser, Debug)]
#[command(name = "orthoreal", version, about = "Reality questions in finite orthogonal groups")]
struct Cli {
    /// Worker threads for the inverting-element search.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Node cap for the inverting-element search (default from ORTHOREAL_CAP).
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Facts about a single isometry.
    Element {
        #[command(subcommand)]
        action: ElementCommand,
    },
    /// Orthogonal decomposition of an isometry into indecomposable blocks.
    Decompose(ElementArgs),
    /// Decide reality and strong reality of an isometry in a lattice member.
    Reality {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long, value_enum)]
        group: GroupArg,
        /// Work modulo the center (Omega only).
        #[arg(long)]
        projective: bool,
    },
    /// Conjugacy classes of a whole group with their reality status.
    Census {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Refuse groups larger than this.
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        enum_cap: u128,
    },
    /// Build one of the named elements and check its claims.
    Construct {
        #[arg(long)]
        name: String,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Character table with Frobenius–Schur indicators.
    Chartable {
        #[command(flatten)]
        group: GroupArgs,
        /// Include the indicators.
        #[arg(long)]
        fs: bool,
        /// Matrix file of an element s; adds indicators twisted by conjugation with s.
        #[arg(long)]
        twist_by: Option<PathBuf>,
        #[arg(long, default_value_t = characters::DEFAULT_TABLE_CAP)]
        enum_cap: u128,
    },
    /// Run the acceptance checks and print a pass/fail table.
    VerifyPaper {
        #[arg(long, default_value = "desk")]
        budget: String,
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum ElementCommand {
    Info(ElementArgs),
}

#[derive(Args, Debug)]
struct ElementArgs {
    #[arg(long)]
    space: PathBuf,
    #[arg(long)]
    matrix: PathBuf,
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[arg(long = "type", value_enum)]
    ty: TypeArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum)]
    group: GroupArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TypeArg {
    Plus,
    Minus,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GroupArg {
    O,
    So,
    K,
    T,
    Omega,
    Pomega,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

impl TypeArg {
    fn form_type(self) -> FormType {
        match self {
            TypeArg::Plus => FormType::Split,
            TypeArg::Minus => FormType::NonSplit,
        }
    }
}

impl GroupArg {
    fn kind(self, projective: bool) -> GroupKind {
        match self {
            GroupArg::O => GroupKind::O,
            GroupArg::So => GroupKind::SO,
            GroupArg::K => GroupKind::K,
            GroupArg::T => GroupKind::T,
            GroupArg::Omega if projective => GroupKind::POmega,
            GroupArg::Omega => GroupKind::Omega,
            GroupArg::Pomega => GroupKind::POmega,
        }
    }
}

fn search_options(cli: &Cli) -> Result<SearchOptions> {
    let cap = match cli.cap {
        Some(c) => c,
        None => match std::env::var("ORTHOREAL_CAP") {
            Ok(v) => v.trim().parse().with_context(|| format!("ORTHOREAL_CAP={v} is not a positive integer"))?,
            Err(_) => DEFAULT_CAP,
        },
    };
    if cap == 0 || cli.threads == 0 {
        return Err(orthoreal::Error::InvalidConfig("caps and thread counts must be positive".into()).into());
    }
    Ok(SearchOptions { cap, threads: cli.threads })
}

fn read_space(path: &Path) -> Result<QuadSpace> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(QuadSpace::from_text(&text)?)
}

fn read_element(args: &ElementArgs) -> Result<(QuadSpace, FqMatrix)> {
    let space = read_space(&args.space)?;
    let text = fs::read_to_string(&args.matrix).with_context(|| format!("reading {}", args.matrix.display()))?;
    let g = read_matrix_in(space.field(), &text)?;
    Ok((space, g))
}

fn matrix_json(f: &Field, m: &FqMatrix) -> Value {
    json!((0..m.rows()).map(|i| m.row(i).iter().map(|&a| f.format_elem(a)).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn divisors_json(f: &Field, ds: &[(orthoreal::algebra::FqPoly, usize)]) -> Value {
    json!(ds.iter().map(|(p, e)| json!({"poly": p.display(f), "exponent": e})).collect::<Vec<_>>())
}

fn field_json(f: &Field) -> Value {
    json!({"q": f.q(), "p": f.p(), "k": f.k(), "modulus": f.modulus_string()})
}

fn conventions() -> Value {
    json!({
        "quadratic_form": "odd q: Q(v) = v^T G v with B(v,w) = v^T G w; q even: Q(v) = v^T A v, A upper triangular",
        "discriminant": "square class of det G (odd q)",
        "spinor_norm": "theta(r_v) = square class of Q(v), extended multiplicatively",
        "omega": "odd q: det 1 and trivial spinor norm; q even: rank(g + 1) even",
        "types": "plus = maximal Witt index, minus = Witt index n/2 - 1",
    })
}

fn envelope(command: &str, config: Value, field: Option<&Field>, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "field": field.map(field_json),
        "conventions": conventions(),
        "result": result,
    })
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    Ok(())
}

fn emit_json(cli: &Cli, v: &Value) -> Result<()> {
    emit(cli, &serde_json::to_string_pretty(v)?)
}

fn group_spec(g: &GroupArgs, projective: bool) -> Result<GroupSpec> {
    Ok(GroupSpec::standard(g.q, g.n, g.ty.form_type(), g.group.kind(projective))?)
}

fn group_config(g: &GroupArgs) -> Value {
    json!({"type": format!("{:?}", g.ty).to_lowercase(), "n": g.n, "q": g.q, "group": format!("{:?}", g.group).to_lowercase()})
}

fn run(cli: &Cli) -> Result<()> {
    let opts = search_options(cli)?;
    match &cli.command {
        Command::Element { action: ElementCommand::Info(args) } => {
            let (space, g) = read_element(args)?;
            let f = space.field();
            let flags = ogroup::lattice_flags(&space, &g)?;
            let result = json!({
                "det": flags.det,
                "spinor_norm": flags.spinor_norm.map(|s| s.to_string()),
                "in_SO": flags.in_so,
                "in_K": flags.in_k,
                "in_T": flags.in_t,
                "in_Omega": flags.in_omega,
                "elementary_divisors": divisors_json(f, &g.elementary_divisors(f)),
            });
            let config = json!({"space": args.space, "matrix": args.matrix});
            emit_json(cli, &envelope("element info", config, Some(f), result))
        }
        Command::Decompose(args) => {
            let (space, g) = read_element(args)?;
            let f = space.field();
            let d = decomp::decompose(&space, &g)?;
            let blocks: Vec<Value> = d
                .blocks
                .iter()
                .map(|b| {
                    let membership = if f.is_odd() { decomp::classify_block_membership(b).ok() } else { None };
                    json!({
                        "type": b.kind.label(),
                        "dim": b.dim(),
                        "divisor": divisors_json(f, &b.elementary_divisors()),
                        "basis": b.basis.iter().map(|v| v.iter().map(|&a| f.format_elem(a)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "restricted_gram": matrix_json(f, b.space.gram()),
                        "block_membership": membership,
                    })
                })
                .collect();
            let sr = decomp::strongly_real_sufficient(&d, &space)?;
            let result = json!({"blocks": blocks, "strong_reality_conditions": sr});
            let config = json!({"space": args.space, "matrix": args.matrix});
            emit_json(cli, &envelope("decompose", config, Some(f), result))
        }
        Command::Reality { element, group, projective } => {
            let (space, g) = read_element(element)?;
            let kind = group.kind(*projective);
            let spec = GroupSpec::new(space, kind)?;
            let v = reality::decide_reality(&spec, &g, kind == GroupKind::POmega, &opts)?;
            let f = spec.field().clone();
            let result = json!({
                "group": spec.label(),
                "is_real": v.is_real,
                "is_strongly_real": v.is_strongly_real,
                "is_weakly_real": v.is_weakly_real(),
                "projective": v.projective,
                "certificate": v.certificate.as_ref().map(|m| matrix_json(&f, m)),
                "certificate_sign": v.certificate_sign,
                "involution": v.involution.as_ref().map(|m| matrix_json(&f, m)),
                "involution_sign": v.involution_sign,
                "twisted_dims": v.twisted_dims,
                "search_cost": v.search_cost,
                "certificate_verified": v.verify(&spec, &g)?,
            });
            let config = json!({"space": element.space, "matrix": element.matrix, "cap": opts.cap, "threads": opts.threads});
            emit_json(cli, &envelope("reality", config, Some(&f), result))
        }
        Command::Census { group, format, enum_cap } => {
            let spec = group_spec(group, false)?;
            let r = reality::census(&spec, *enum_cap, &opts)?;
            if *format == Format::Csv {
                let mut out = String::from("class,order,size,real,strongly_real\n");
                for (i, c) in r.classes.iter().enumerate() {
                    out.push_str(&format!("{i},{},{},{},{}\n", c.element_order, c.size, c.real, c.strongly_real));
                }
                return emit(cli, out.trim_end());
            }
            let f = spec.field().clone();
            let classes: Vec<Value> = r
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "representative": matrix_json(&f, &c.representative),
                        "order": c.element_order,
                        "size": c.size,
                        "real": c.real,
                        "strongly_real": c.strongly_real,
                    })
                })
                .collect();
            let result = json!({
                "group": r.group,
                "order": r.order,
                "classes": classes,
                "real_classes": r.real_classes,
                "strongly_real_classes": r.strongly_real_classes,
                "weakly_real_classes": r.weakly_real_classes,
                "checks": r.checks,
            });
            let mut config = group_config(group);
            config["cap"] = json!(opts.cap);
            config["enum_cap"] = json!(enum_cap.to_string());
            emit_json(cli, &envelope("census", config, Some(&f), result))
        }
        Command::Construct { name, q, m } => {
            let c = constructions::build_named(name, *q, *m, &opts)?;
            let f = c.field().clone();
            let config = json!({"name": name, "q": q, "m": m, "cap": opts.cap});
            let report = envelope("construct", config, Some(&f), serde_json::to_value(c.report()?)?);
            let text = serde_json::to_string_pretty(&report)?;
            match &cli.out {
                Some(dir) => {
                    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                    let stem = format!("{}_q{}", c.name, q);
                    fs::write(dir.join(format!("{stem}_space.txt")), c.space.to_text())?;
                    fs::write(dir.join(format!("{stem}.txt")), write_matrix(&f, &c.matrix))?;
                    fs::write(dir.join(format!("{stem}_report.json")), text)?;
                    Ok(())
                }
                None => {
                    let _ = write!(std::io::stdout(), "{}", write_matrix(&f, &c.matrix));
                    Ok(())
                }
            }
        }
        Command::Chartable { group, fs: with_fs, twist_by, enum_cap } => {
            let spec = group_spec(group, false)?;
            let t = characters::char_table(&spec, *enum_cap)?;
            let f = spec.field().clone();
            let twisted = match twist_by {
                Some(p) => {
                    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    let s = read_matrix_in(&f, &text)?;
                    Some(characters::twisted_indicators(&t, &s)?)
                }
                None => None,
            };
            let mut result = serde_json::to_value(t.report(twisted)?)?;
            if !with_fs {
                result.as_object_mut().expect("object").remove("indicators");
            }
            emit_json(cli, &envelope("chartable", group_config(group), Some(&f), result))
        }
        Command::VerifyPaper { budget, only } => {
            let budget = Budget::parse(budget)?;
            let ids: Vec<u8> = if only.is_empty() { verify::CRITERIA.to_vec() } else { only.clone() };
            let results = verify::run_all(&ids, budget, &opts);
            for r in &results {
                eprintln!("{:>2} {:<40} {} {:.1}s", r.id, r.label, if r.passed { "PASS" } else { "FAIL" }, r.seconds);
            }
            let rows: Vec<Value> =
                results.iter().map(|r| json!({"criterion": r.id, "label": r.label, "passed": r.passed, "detail": r.detail})).collect();
            let config = json!({"budget": budget, "criteria": ids, "cap": opts.cap});
            emit_json(cli, &envelope("verify-paper", config, None, json!(rows)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.downcast_ref::<orthoreal::Error>().map(|e| e.code()).unwrap_or("Io");
            let msg = json!({"schema": SCHEMA, "error": {"code": code, "message": format!("{e:#}")}});
            eprintln!("{msg}");
            ExitCode::FAILURE
        }
    }
}
