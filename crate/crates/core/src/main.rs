use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::json;

use clutterlab::harness::{self, Family, GeneratorConfig, VerificationReport};
use clutterlab::obstructions::{self, ObstructionWitness};
use clutterlab::params::{self, ParamReport};
use clutterlab::structure::{self, MinCoverGraph};
use clutterlab::text::{self, Document};
use clutterlab::{Clutter, MemberSet, MinorSpec, SetSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Validate,
    Blocker,
    Tau,
    Minor,
    IsClean,
    IsTangled,
    Graph,
    Core,
    Setcore,
    Mu,
    Lambda,
    MuChain,
    Report,
    VerifyTheorem,
    VerifyLemmas,
    Generate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Clutters, blockers, minors, cleanness, setcores and rainbow covers.
#[derive(Debug, Parser)]
#[command(name = "clutterlab", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Input file; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Ground-set bound for the cleanness minor enumeration.
    #[arg(long = "max-n")]
    max_n: Option<usize>,
    /// `delta:N`, `odd-hole:N`, `f6` or `cuboid:D:p1,p2,...`.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    exhaustive: bool,
    /// Allow exhaustive campaigns at n = 6.
    #[arg(long)]
    deep: bool,
    /// Print the obstruction found by `is-clean`.
    #[arg(long)]
    witness: bool,
    /// Elements to delete for `minor`, e.g. `1,3`.
    #[arg(long, default_value = "")]
    delete: String,
    /// Elements to contract for `minor`.
    #[arg(long, default_value = "")]
    contract: String,
    /// Member sizes for random instances, e.g. `2..3`.
    #[arg(long)]
    sizes: Option<String>,
}

/// Input or usage problems; exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(cli: &Cli) -> Result<String, Failure> {
    match &cli.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn read_clutter(cli: &Cli) -> Result<Clutter, Failure> {
    Ok(text::parse_clutter(&read_input(cli)?)?)
}

fn parse_list(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse::<usize>().map_err(|_| Failure(format!("bad element `{t}`"))))
        .collect()
}

fn list(set: MemberSet) -> String {
    if set.is_empty() {
        "-".to_string()
    } else {
        set.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn json_out(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn witness_line(w: &ObstructionWitness) -> String {
    format!(
        "{} {} {} {}\n",
        w.kind.name(),
        w.dimension,
        list(w.minor_spec.delete),
        list(w.minor_spec.contract)
    )
}

fn graph_text(g: &MinCoverGraph) -> String {
    let mut out = format!("graph {} components {}\n", g.vertex_count, g.d());
    for (a, b) in &g.edges {
        writeln!(out, "edge {a} {b}").unwrap();
    }
    for (i, comp) in g.components.iter().enumerate() {
        writeln!(out, "component {} U {} V {}", i + 1, list(comp.u), list(comp.v)).unwrap();
    }
    out
}

fn report_text(r: &ParamReport) -> String {
    let w = &r.witnesses;
    let opt = |s: Option<String>| s.unwrap_or_else(|| "none".to_string());
    format!(
        "mu {}\nmu1 {}\nmu2 {}\nmu3 {}\nlambda {}\nrainbow_cover {}\ncore_cover {}\nmu2_pattern {}\nmu3_pattern {}\ngsc {}\n",
        r.mu,
        r.mu1,
        r.mu2,
        r.mu3,
        r.lambda,
        opt(w.rainbow_cover.map(list)),
        opt(w.core_cover.map(list)),
        opt(w.mu2_pattern.as_ref().map(|p| p.to_string())),
        opt(w.mu3_pattern.as_ref().map(|p| p.to_string())),
        opt(w.gsc.map(|q| q.to_string())),
    )
}

fn verification_text(r: &VerificationReport) -> String {
    let mut out = format!(
        "instances {}\ntangled {}\nclean_tangled {}\nobstructions_recognized {}\nviolations {}\nruntime_ms {}\n",
        r.instances_total,
        r.tangled_count,
        r.clean_tangled_count,
        r.obstructions_recognized,
        r.violations,
        r.runtime_ms
    );
    for v in &r.violation_details {
        writeln!(
            out,
            "violation #{} {}: expected {} got {}\n{}",
            v.instance, v.check, v.expected, v.actual, v.clutter
        )
        .unwrap();
    }
    out
}

fn campaign_config(cli: &Cli) -> Result<GeneratorConfig, Failure> {
    let mut config = if let Some(f) = &cli.family {
        GeneratorConfig::family(f.parse::<Family>()?)
    } else if cli.exhaustive {
        GeneratorConfig::exhaustive(cli.n.ok_or(Failure("--exhaustive needs --n".into()))?)
    } else {
        let n = cli.n.ok_or(Failure("random instances need --n".into()))?;
        let count = cli.count.ok_or(Failure("random instances need --count".into()))?;
        GeneratorConfig::random(n, count, cli.seed)
    };
    config.seed = cli.seed;
    config.deep = cli.deep;
    if let Some(b) = cli.max_n {
        config.clean_budget = b;
    }
    if let Some(sizes) = &cli.sizes {
        let (lo, hi) = sizes
            .split_once("..")
            .ok_or(Failure(format!("bad --sizes `{sizes}`, expected MIN..MAX")))?;
        config = config.with_sizes(lo.parse()?, hi.parse()?);
    }
    Ok(config)
}

fn clutter_out(c: &Clutter, format: Format) -> String {
    match format {
        Format::Text => text::format_clutter(c),
        Format::Json => json_out(serde_json::to_value(c).unwrap()),
    }
}

fn set_system_out(s: &SetSystem, format: Format) -> String {
    match format {
        Format::Text => text::format_set_system(s),
        Format::Json => json_out(serde_json::to_value(s).unwrap()),
    }
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let fmt = cli.format;
    let out = match cli.command {
        Command::Validate => clutter_out(&read_clutter(cli)?, fmt),
        Command::Blocker => clutter_out(&read_clutter(cli)?.blocker(), fmt),
        Command::Tau => {
            let tau = read_clutter(cli)?.covering_number();
            match fmt {
                Format::Text => format!("{tau}\n"),
                Format::Json => json_out(json!({ "tau": tau })),
            }
        }
        Command::Minor => {
            let c = read_clutter(cli)?;
            let n = c.ground_size();
            let delete = MemberSet::try_from_elements(parse_list(&cli.delete)?, n)?;
            let contract = MemberSet::try_from_elements(parse_list(&cli.contract)?, n)?;
            let minor = c.minor(MinorSpec::new(delete, contract))?;
            match fmt {
                Format::Text => {
                    let origin: Vec<String> = minor.origin.iter().map(|e| e.to_string()).collect();
                    format!("# origin {}\n{}", origin.join(" "), text::format_clutter(&minor.clutter))
                }
                Format::Json => json_out(json!({ "clutter": minor.clutter, "origin": minor.origin })),
            }
        }
        Command::IsClean => {
            let c = read_clutter(cli)?;
            let res = obstructions::is_clean(&c, cli.max_n)?;
            match fmt {
                Format::Text => {
                    let mut s = if res.is_clean() { "clean\n" } else { "not-clean\n" }.to_string();
                    if let (true, Some(w)) = (cli.witness, &res.witness) {
                        s.push_str(&witness_line(w));
                    }
                    s
                }
                Format::Json => json_out(json!({ "clean": res.is_clean(), "witness": res.witness })),
            }
        }
        Command::IsTangled => {
            let t = structure::is_tangled(&read_clutter(cli)?);
            match fmt {
                Format::Text => if t { "tangled\n" } else { "not-tangled\n" }.to_string(),
                Format::Json => json_out(json!({ "tangled": t })),
            }
        }
        Command::Graph => {
            let g = structure::min_cover_graph(&read_clutter(cli)?)?;
            match fmt {
                Format::Text => graph_text(&g),
                Format::Json => json_out(serde_json::to_value(&g).unwrap()),
            }
        }
        Command::Core => {
            let c = read_clutter(cli)?;
            let core = structure::core(&c)?;
            match fmt {
                Format::Text => text::format_members(c.ground_size(), &core),
                Format::Json => json_out(json!({ "ground_size": c.ground_size(), "members": core })),
            }
        }
        Command::Setcore => set_system_out(&structure::setcore(&read_clutter(cli)?)?, fmt),
        Command::Mu => {
            let c = read_clutter(cli)?;
            let g = structure::min_cover_graph(&c)?;
            let (mu, w) = params::rainbow_covering_number(&c, &g);
            match fmt {
                Format::Text => format!("{mu}\n{}", w.map(|b| format!("{}\n", list(b))).unwrap_or_default()),
                Format::Json => json_out(json!({ "mu": mu, "rainbow_cover": w })),
            }
        }
        Command::Lambda => {
            let s = match text::parse_document(&read_input(cli)?)? {
                Document::SetSystem(s) => s,
                Document::Clutter(c) => structure::setcore(&c)?,
            };
            let (lambda, q) = params::connectivity(&s);
            match fmt {
                Format::Text => format!("{lambda}\n{}", q.map(|q| format!("{q}\n")).unwrap_or_default()),
                Format::Json => json_out(json!({ "lambda": lambda, "gsc": q })),
            }
        }
        Command::MuChain => {
            let r = params::param_report(&read_clutter(cli)?)?;
            match fmt {
                Format::Text => format!("mu1 {}\nmu2 {}\nmu3 {}\nmu {}\n", r.mu1, r.mu2, r.mu3, r.mu),
                Format::Json => json_out(json!({ "mu1": r.mu1, "mu2": r.mu2, "mu3": r.mu3, "mu": r.mu })),
            }
        }
        Command::Report => {
            let r = params::param_report(&read_clutter(cli)?)?;
            match fmt {
                Format::Text => report_text(&r),
                Format::Json => json_out(serde_json::to_value(&r).unwrap()),
            }
        }
        Command::VerifyTheorem | Command::VerifyLemmas => {
            let config = campaign_config(cli)?;
            let report = if cli.command == Command::VerifyTheorem {
                harness::verify_theorem(&config)?
            } else {
                harness::verify_lemmas(&config)?
            };
            let out = match fmt {
                Format::Text => verification_text(&report),
                Format::Json => json_out(serde_json::to_value(&report).unwrap()),
            };
            return Ok((out, report.passed()));
        }
        Command::Generate => {
            let clutters: Vec<Clutter> = if let Some(f) = &cli.family {
                vec![harness::make_family(&f.parse::<Family>()?)?]
            } else if cli.exhaustive {
                harness::enumerate_clutters(cli.n.ok_or(Failure("--exhaustive needs --n".into()))?)?.collect()
            } else {
                let config = campaign_config(cli)?;
                harness::random_clutters(&config, config.count)?
            };
            match fmt {
                Format::Text => clutters.iter().map(text::format_clutter).collect(),
                Format::Json => json_out(serde_json::to_value(&clutters).unwrap()),
            }
        }
    };
    Ok((out, true))
}
