use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hgmono::census::{load_fixture, reconcile, FixtureRow, DEFAULT_FIXTURE};
use hgmono::certify::{
    load_certificates, verify_all, Certificate, Summary, DEFAULT_CERTIFICATES, ZARISKI_ASSUMPTION,
};
use hgmono::cyclo::{canonical, enumerate_pairs, raw_pairs, tau_involution, ParamPair};
use hgmono::exactlin::parse_rat;
use hgmono::hgcore::{analyze, Analysis, FormKind};
use hgmono::{fmt_rats, Rat};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(
    name = "hgmono",
    version,
    about = "Degree-five orthogonal hypergeometric groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the census of parameter pairs with their classification.
    Enumerate(EnumerateArgs),
    /// Compute the invariant form and ranks of a single pair.
    Classify(ClassifyArgs),
    /// Check arithmeticity certificates.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Emit all coprime pairs instead of one per τ-orbit.
    #[arg(long)]
    raw: bool,
    /// Group records by fixture table.
    #[arg(long)]
    by_table: bool,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Census fixture (table_id, row, alpha, beta, attribution).
    #[arg(long, env = "HGMONO_FIXTURES")]
    fixtures: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    JsonLines,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Five rationals, separated by spaces or commas.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "case")]
    all: bool,
    /// Case id, e.g. BS16. May be repeated.
    #[arg(long)]
    case: Vec<String>,
    /// Certificate file; defaults to the bundled one.
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Print every step of every report.
    #[arg(long)]
    report: bool,
}

/// Input problems: bad files, bad parameters, unknown cases.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Enumerate(a) => cmd_enumerate(&a),
        Command::Classify(a) => cmd_classify(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match out {
        Ok(code) => code,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

// ---------------------------------------------------------------------------
// enumerate

/// One line of `enumerate` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub tau_fixed: bool,
    pub monomial: bool,
    pub kind: String,
    pub signature: String,
    pub q_rank: u8,
    pub bh_delta: u32,
    pub table: u8,
    pub row: u32,
    pub attribution: String,
}

const TSV_HEADER: &str =
    "alpha\tbeta\ttau_fixed\tmonomial\tkind\tsignature\tq_rank\tbh_delta\ttable\trow\tattribution";

impl Record {
    fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.alpha.join(" "),
            self.beta.join(" "),
            self.tau_fixed,
            self.monomial,
            self.kind,
            self.signature,
            self.q_rank,
            self.bh_delta,
            self.table,
            self.row,
            self.attribution
        )
    }
}

fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(Rat::to_string).collect()
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<ExitCode, InputError> {
    let text = match &args.fixtures {
        Some(p) => read(p)?,
        None => DEFAULT_FIXTURE.to_string(),
    };
    let rows = load_fixture(&text).map_err(|e| anyhow!("fixture: {e}"))?;
    let census = enumerate_pairs();
    let matched = reconcile(&census, &rows).map_err(|m| anyhow!("{}", m.to_string().trim_end()))?;
    if census.len() != 77 {
        return Err(anyhow!("census has {} orbits, expected 77", census.len()).into());
    }

    let mut by_orbit: BTreeMap<ParamPair, (usize, Analysis)> = BTreeMap::new();
    for (i, e) in census.iter().enumerate() {
        let an = analyze(&e.params).with_context(|| format!("{}", e.params))?;
        by_orbit.insert(e.params.clone(), (i, an));
    }
    let record = |p: &ParamPair| -> Record {
        let (i, an) = &by_orbit[&canonical(p)];
        let row: &FixtureRow = &rows[matched[*i]];
        Record {
            alpha: strings(&p.alpha),
            beta: strings(&p.beta),
            tau_fixed: tau_involution(p) == *p,
            monomial: census[*i].monomial,
            kind: an.class.kind.to_string(),
            signature: an.class.signature.to_string(),
            q_rank: an.class.q_rank,
            bh_delta: an.class.bh_delta,
            table: row.table_id,
            row: row.row_no,
            attribution: row.attribution.clone(),
        }
    };
    let mut records: Vec<Record> = if args.raw {
        raw_pairs().iter().map(record).collect()
    } else {
        census.iter().map(|e| record(&e.params)).collect()
    };
    if args.by_table {
        records.sort_by_key(|r| (r.table, r.row));
    }

    let count = |k: FormKind| records.iter().filter(|r| r.kind == k.to_string()).count();
    let footer = format!(
        "finite={} sig41={} sig32={}",
        count(FormKind::Finite),
        count(FormKind::Orthogonal41),
        count(FormKind::Orthogonal32)
    );

    let stdout = io::stdout();
    let mut out = stdout.lock();
    match args.format {
        Format::Tsv => {
            let mut table = None;
            if !args.by_table {
                writeln!(out, "{TSV_HEADER}")?;
            }
            for r in &records {
                if args.by_table && table != Some(r.table) {
                    table = Some(r.table);
                    writeln!(out, "# Table {}", r.table)?;
                    writeln!(out, "{TSV_HEADER}")?;
                }
                writeln!(out, "{}", r.tsv())?;
            }
            writeln!(out, "{footer}")?;
        }
        Format::JsonLines => {
            for r in &records {
                writeln!(out, "{}", serde_json::to_string(r)?)?;
            }
            eprintln!("{footer}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// classify

fn parse_params(s: &str) -> Result<Vec<Rat>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| parse_rat(t).map_err(|e| anyhow!("{t:?}: {e}")))
        .collect()
}

fn cmd_classify(args: &ClassifyArgs) -> Result<ExitCode, InputError> {
    let alpha = parse_params(&args.alpha).context("alpha")?;
    let beta = parse_params(&args.beta).context("beta")?;
    let params = ParamPair::new(alpha, beta).context("invalid parameters")?;
    let an = analyze(&params)?;
    let c = &an.class;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "alpha      {}", fmt_rats(&params.alpha))?;
    writeln!(out, "beta       {}", fmt_rats(&params.beta))?;
    writeln!(out, "f          {}", an.pair.f)?;
    writeln!(out, "g          {}", an.pair.g)?;
    for (name, m) in [
        ("A", &an.pair.a),
        ("B", &an.pair.b),
        ("Q", an.form.q.as_mat()),
    ] {
        writeln!(out, "{name}")?;
        for line in m.to_string().lines() {
            writeln!(out, "  {line}")?;
        }
    }
    writeln!(out, "signature  {}", c.signature)?;
    writeln!(out, "bh_delta   {}", c.bh_delta)?;
    writeln!(out, "real_rank  {}", c.real_rank)?;
    writeln!(out, "q_rank     {}", c.q_rank)?;
    let verdict = if c.interlaces {
        "finite (roots interlace)"
    } else {
        "infinite (roots do not interlace)"
    };
    writeln!(out, "monodromy  {verdict}")?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// verify

fn select(certs: Vec<Certificate>, cases: &[String]) -> Result<Vec<Certificate>> {
    if cases.is_empty() {
        return Ok(certs);
    }
    let mut chosen = Vec::new();
    for id in cases {
        let c = certs
            .iter()
            .find(|c| c.id.eq_ignore_ascii_case(id))
            .ok_or_else(|| anyhow!("unknown case {id}"))?;
        if !chosen.iter().any(|x: &Certificate| x.id == c.id) {
            chosen.push(c.clone());
        }
    }
    Ok(chosen)
}

fn print_summary(out: &mut impl Write, s: &Summary, full: bool) -> io::Result<()> {
    if full {
        for r in &s.reports {
            write!(out, "{r}")?;
        }
        writeln!(out)?;
    }
    writeln!(out, "{:<6} {:<11} {:<6} evidence", "case", "mode", "result")?;
    for r in &s.reports {
        let result = if r.passed() { "pass" } else { "FAIL" };
        writeln!(
            out,
            "{:<6} {:<11} {:<6} {}",
            r.id,
            r.mode.to_string(),
            result,
            r.evidence()
        )?;
        if let Some(f) = r.first_failure() {
            writeln!(out, "       S{}: {}", f.step, f.detail)?;
        }
    }
    writeln!(out, "{}/{} pass", s.pass_count(), s.reports.len())?;
    writeln!(out, "{ZARISKI_ASSUMPTION}")
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, InputError> {
    let text = match &args.cert {
        Some(p) => read(p)?,
        None => DEFAULT_CERTIFICATES.to_string(),
    };
    let certs = load_certificates(&text).map_err(|e| anyhow!("certificates: {e}"))?;
    let certs = select(certs, if args.all { &[] } else { &args.case })?;
    let summary = verify_all(&certs);
    print_summary(&mut io::stdout().lock(), &summary, args.report)?;
    Ok(if summary.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
