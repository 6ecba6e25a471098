//! `structrep`: minimal template programs for token sequences under a grammar.
//!
//! Exit codes: 0 success, 1 no parse / rejected template / count divergence,
//! 2 invalid input.

mod dot;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use structrep::analysis::AnalysisError;
use structrep::oracle::{census, OracleConfig};
use structrep::{
    best_first, check_template, enumerate_minimal, extract_minimal, forward_chain, size_distribution, Chart,
    EngineConfig, EngineError, Verdict,
};

use io::{load_grammar, load_sequence, load_template, GrammarFile, Loaded};
use report::ParseReport;

#[derive(Parser)]
#[command(name = "structrep", version, about = "Find the smallest template programs that explain a sequence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal template size and one (or several) minimal templates.
    Parse {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        select: Select,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Number of templates of each size.
    Histogram {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Append a bar chart (log scale) to the text table.
        #[arg(long)]
        chart: bool,
        /// Recount by brute-force enumeration (short sequences only).
        #[arg(long)]
        verify: bool,
    },
    /// Accept or reject a template file against a sequence.
    Check {
        #[command(flatten)]
        input: Input,
        /// Template JSON, or a report written by `parse --format json`.
        #[arg(short, long)]
        template: PathBuf,
    },
    /// Graphviz drawing of a minimal template and its relation tree.
    Render {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        select: Select,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Also draw the template's syntax tree.
        #[arg(long)]
        with_template: bool,
    },
    /// Print a grammar as JSON (handy for bundled grammars).
    Grammar {
        #[arg(short, long)]
        grammar: String,
    },
    /// Brute-force census of all templates, for cross-checking.
    #[command(hide = true)]
    Oracle {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

#[derive(Args)]
struct Input {
    /// Bundled grammar name (jazz, coffee) or a grammar JSON file.
    #[arg(short, long)]
    grammar: String,
    /// Tokens; defaults to the bundled example for bundled grammars.
    tokens: Vec<String>,
    /// Whitespace-separated tokens, typically one per line.
    #[arg(long)]
    seq_file: Option<PathBuf>,
}

#[derive(Args)]
struct EngineArgs {
    #[arg(long, default_value_t = 3)]
    max_holes: usize,
    /// Largest relation tree built, in relation nodes [default: 2 x sequence length].
    #[arg(long)]
    max_tree_size: Option<usize>,
    #[arg(long, conflicts_with = "exhaustive")]
    best_first: bool,
    #[arg(long)]
    exhaustive: bool,
}

impl EngineArgs {
    fn config(&self) -> EngineConfig {
        EngineConfig { max_holes: self.max_holes, max_tree_size: self.max_tree_size, ..EngineConfig::default() }
    }

    fn best_first_or(&self, default: bool) -> bool {
        if self.best_first {
            true
        } else if self.exhaustive {
            false
        } else {
            default
        }
    }
}

#[derive(Args)]
struct Select {
    /// Emit up to --limit minimal templates instead of one.
    #[arg(long)]
    all_minimal: bool,
    #[arg(long, default_value_t = 10)]
    limit: usize,
}

impl Select {
    fn count(&self) -> usize {
        if self.all_minimal {
            self.limit.max(1)
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

enum Outcome {
    Done,
    /// No parse, rejection or divergence: exit 1.
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Parse { input, engine, select, format } => parse(&input, &engine, &select, format),
        Command::Histogram { input, engine, format, chart, verify } => histogram(&input, &engine, format, chart, verify),
        Command::Check { input, template } => check(&input, &template),
        Command::Render { input, engine, select, format, with_template } => {
            render(&input, &engine, &select, format, with_template)
        }
        Command::Grammar { grammar } => {
            let loaded = load_grammar(&grammar)?;
            let file = GrammarFile::from(loaded.grammar.to_def());
            println!("{}", serde_json::to_string_pretty(&file)?);
            Ok(Outcome::Done)
        }
        Command::Oracle { input, engine } => oracle(&input, &engine),
    }
}

struct Instance {
    loaded: Loaded,
    tokens: Vec<String>,
    ids: Vec<structrep::grammar::TerminalId>,
}

fn instance(input: &Input) -> Result<Instance> {
    let loaded = load_grammar(&input.grammar)?;
    let tokens = load_sequence(&input.tokens, input.seq_file.as_deref(), loaded.example.as_deref())?;
    let ids = loaded.grammar.tokenize(&tokens)?;
    Ok(Instance { loaded, tokens, ids })
}

/// `None` when the sequence has no parse.
fn chart(inst: &Instance, engine: &EngineArgs, best: bool) -> Result<Option<Chart>> {
    let cfg = engine.config();
    let res = if best {
        best_first(&inst.loaded.grammar, &inst.ids, &cfg)
    } else {
        forward_chain(&inst.loaded.grammar, &inst.ids, &cfg)
    };
    match res {
        Ok(c) if c.best_goal().is_some() => Ok(Some(c)),
        Ok(_) | Err(EngineError::NoParse) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn no_parse(inst: &Instance) -> Outcome {
    eprintln!("no parse: `{}` cannot be derived by {}", inst.tokens.join(" "), inst.loaded.name);
    Outcome::Negative
}

fn parse(input: &Input, engine: &EngineArgs, select: &Select, format: Format) -> Result<Outcome> {
    let inst = instance(input)?;
    let best = engine.best_first_or(true);
    let Some(chart) = chart(&inst, engine, best)? else { return Ok(no_parse(&inst)) };
    let sub = extract_minimal(&chart)?;
    let templates = enumerate_minimal(&chart, &sub, select.count());
    let minimal_count = if best { None } else { Some(size_distribution(&chart)?.count(sub.weight.0 as usize).to_string()) };
    let report = ParseReport {
        grammar: &inst.loaded.name,
        sequence: &inst.tokens,
        strategy: if best { "best-first" } else { "exhaustive" },
        minimal_size: sub.weight.0,
        minimal_count,
        templates: &templates,
        stats: chart.stats(),
    };
    match format {
        Format::Text => print!("{}", report.text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report.json())?),
        Format::Dot => print_dots(&templates, false),
    }
    Ok(Outcome::Done)
}

fn print_dots(templates: &[structrep::TemplateExpr], with_template: bool) {
    for (i, t) in templates.iter().enumerate() {
        print!("{}", dot::render(&format!("minimal_{}", i + 1), t, with_template));
    }
}

fn histogram(input: &Input, engine: &EngineArgs, format: Format, chart_bars: bool, verify: bool) -> Result<Outcome> {
    let inst = instance(input)?;
    if engine.best_first_or(false) {
        anyhow::bail!("histograms need the full chart; drop --best-first");
    }
    let dist = match chart(&inst, engine, false)? {
        Some(c) => size_distribution(&c).map_err(|e: AnalysisError| anyhow::anyhow!(e))?,
        None => Default::default(),
    };
    match format {
        Format::Text => print!("{}", report::histogram_text(&dist, chart_bars)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&report::histogram_json(&inst.tokens, &dist))?),
        Format::Dot => anyhow::bail!("histograms have no dot form; use text or json"),
    }
    if verify {
        let cfg = OracleConfig { engine: engine.config(), ..OracleConfig::default() };
        let oracle = census(&inst.loaded.grammar, &inst.ids, &cfg).context("brute-force recount")?;
        if oracle != dist {
            eprintln!("count divergence: chart {dist}, enumeration {oracle}");
            return Ok(Outcome::Negative);
        }
        eprintln!("verified: enumeration agrees");
    }
    if dist.is_empty() {
        return Ok(no_parse(&inst));
    }
    Ok(Outcome::Done)
}

fn check(input: &Input, template: &std::path::Path) -> Result<Outcome> {
    let inst = instance(input)?;
    let e = load_template(template, &inst.loaded.grammar)?;
    match check_template(&inst.loaded.grammar, &e, &inst.ids) {
        Verdict::Accept => {
            println!("accept: size {}", e.size());
            Ok(Outcome::Done)
        }
        Verdict::Reject(r) => {
            println!("reject: {r}");
            Ok(Outcome::Negative)
        }
    }
}

fn render(input: &Input, engine: &EngineArgs, select: &Select, format: Format, with_template: bool) -> Result<Outcome> {
    let inst = instance(input)?;
    let Some(chart) = chart(&inst, engine, engine.best_first_or(true))? else { return Ok(no_parse(&inst)) };
    let sub = extract_minimal(&chart)?;
    let templates = enumerate_minimal(&chart, &sub, select.count());
    match format {
        Format::Dot => print_dots(&templates, with_template),
        Format::Text => {
            for t in &templates {
                println!("{t}");
                print!("{}", dot::render_text(t));
            }
        }
        Format::Json => anyhow::bail!("render draws graphs; use dot or text (parse has json)"),
    }
    Ok(Outcome::Done)
}

fn oracle(input: &Input, engine: &EngineArgs) -> Result<Outcome> {
    let inst = instance(input)?;
    let cfg = OracleConfig { engine: engine.config(), ..OracleConfig::default() };
    let dist = census(&inst.loaded.grammar, &inst.ids, &cfg)?;
    print!("{}", report::histogram_text(&dist, false));
    Ok(if dist.is_empty() { Outcome::Negative } else { Outcome::Done })
}
