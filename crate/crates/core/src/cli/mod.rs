//! Command-line front end.
//!
//! Every command renders either a human summary or a pretty-printed JSON
//! report. Reports deserialize back into the types defined here, so a
//! structured run can be re-parsed and re-emitted byte for byte.

mod recipe;

use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::akm::{excludes, AkmError, AkmQuery, ExclusionReport};
use crate::character::{
    radical_report, CharError, Character, CircleValue, Expected, RadicalReport, RadicalVerdict, Truncation,
};
use crate::group::{
    Cardinality, ComponentKind, ComponentValue, Coordinate, Element, GroupError, GroupSpec, PruferValue,
};
use crate::invariants::{admits_minap, nr_membership_bounded, DecisionError, MinapDecision, NrDecision};
use crate::reduction::{classify_reduction, ReductionCase, ReductionFlags};
use crate::tseq::{m_bound, RecipeError, Sequence, SequenceRecipe};

pub use recipe::RecipeArgs;

#[derive(Debug, Parser)]
#[command(name = "tseq", version, about = "T-sequences, A(k,m) exclusion and von Neumann radicals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// MinAP admissibility of G, or NR membership of H in G.
    Decide(DecideArgs),
    /// Print the terms of a sequence over a window.
    BuildSeq(BuildSeqArgs),
    /// Check g ∉ A(k, m) over a finite window for each target.
    VerifyTseq(VerifyArgs),
    /// Compute the radical of a finite truncation and compare with an expectation.
    Radical(RadicalArgs),
    /// Evaluate a character on an element.
    Pair(PairArgs),
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    /// Group spec for G.
    pub g: String,
    /// Subgroup H; without it the MinAP question is asked.
    #[arg(long = "H")]
    pub h: Option<String>,
    /// Structural facts the grammar cannot express, as JSON.
    #[arg(long)]
    pub flags: Option<String>,
}

#[derive(Debug, Args)]
pub struct BuildSeqArgs {
    #[command(flatten)]
    pub recipe: RecipeArgs,
    /// Index range `lo..hi` (inclusive); `lo > hi` is empty.
    #[arg(long)]
    pub window: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub recipe: RecipeArgs,
    /// Target element; repeat for a batch.
    #[arg(long = "target", allow_hyphen_values = true)]
    pub targets: Vec<String>,
    /// Additional pseudo-random targets drawn with `--seed`.
    #[arg(long, default_value_t = 0)]
    pub random: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub k: u64,
    /// First index; defaults to the recipe's bound for each target.
    #[arg(long)]
    pub m: Option<u64>,
    /// Last index; defaults to `m + window`.
    #[arg(long)]
    pub cap: Option<u64>,
    #[arg(long, default_value_t = 12)]
    pub window: u64,
}

#[derive(Debug, Args)]
pub struct RadicalArgs {
    #[command(flatten)]
    pub recipe: RecipeArgs,
    /// Copies kept per summand, comma separated, or one number for all.
    #[arg(long)]
    pub truncation: String,
    /// First index N of the tail.
    #[arg(long)]
    pub tail: u64,
    /// Stabilization length S; the check is repeated at 2S.
    #[arg(long)]
    pub window: u64,
    /// `whole`, `0`, `targets`, or `;`-separated generators.
    #[arg(long, default_value = "targets")]
    pub expected: String,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Group spec both arguments live in.
    #[arg(long = "G")]
    pub g: String,
    #[arg(long)]
    pub character: String,
    #[arg(long)]
    pub element: String,
    /// Decimal places for approximate angles.
    #[arg(long, default_value_t = 20)]
    pub precision: usize,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Recipe(#[from] RecipeError),
    #[error(transparent)]
    Decision(#[from] DecisionError),
    #[error(transparent)]
    Akm(#[from] AkmError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error("cannot read {path}: {message}")]
    File { path: String, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for malformed input, 3 for refusals.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::File { .. } => 2,
            CliError::Group(GroupError::Parse(_)) | CliError::Char(CharError::Parse { .. }) => 2,
            CliError::Json(e) if !e.is_io() => 2,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideReport {
    pub g: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<GroupSpec>,
    pub answer: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minap: Option<MinapDecision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nr: Option<NrDecision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionCase>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermLine {
    pub n: u64,
    pub term: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceDump {
    pub recipe: SequenceRecipe,
    pub ambient: GroupSpec,
    pub window: (u64, u64),
    pub terms: Vec<TermLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub recipe: SequenceRecipe,
    pub reports: Vec<ExclusionReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub character: String,
    pub element: String,
    pub angle: String,
    pub exact: bool,
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit<T: Serialize>(
    out: &mut dyn Write,
    format: Format,
    report: &T,
    human: impl FnOnce() -> String,
) -> Result<(), CliError> {
    match format {
        Format::Structured => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
        Format::Human => write!(out, "{}", human())?,
    }
    Ok(())
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Decide(a) => {
            let report = decide(a)?;
            emit(out, cli.format, &report, || human_decide(&report))?;
            Ok(0)
        }
        Command::BuildSeq(a) => {
            let dump = build_seq(a)?;
            emit(out, cli.format, &dump, || dump.terms.iter().map(|t| format!("{}\t{}\n", t.n, t.term)).collect())?;
            Ok(0)
        }
        Command::VerifyTseq(a) => {
            let report = verify(a)?;
            emit(out, cli.format, &report, || report.reports.iter().map(|r| format!("{r}\n")).collect())?;
            Ok(if report.reports.iter().all(|r| r.excluded()) { 0 } else { 1 })
        }
        Command::Radical(a) => {
            let report = radical(a)?;
            emit(out, cli.format, &report, || human_radical(&report))?;
            Ok(if report.verdict == RadicalVerdict::Match { 0 } else { 1 })
        }
        Command::Pair(a) => {
            let report = pair(a)?;
            emit(out, cli.format, &report, || format!("{}\n", report.angle))?;
            Ok(0)
        }
    }
}

pub fn decide(a: &DecideArgs) -> Result<DecideReport, CliError> {
    let g = GroupSpec::parse(&a.g)?;
    let flags: ReductionFlags = match &a.flags {
        Some(text) => serde_json::from_str(text)?,
        None => ReductionFlags::default(),
    };
    match &a.h {
        None => {
            let minap = admits_minap(&g)?;
            // the construction is only available for countable G
            let countable = g.components().iter().all(|c| c.multiplicity != Cardinality::SymbolicInfinite);
            let reduction = if minap.admits && countable { Some(classify_reduction(&g, &g, &flags)?) } else { None };
            Ok(DecideReport { answer: minap.admits, g, h: None, minap: Some(minap), nr: None, reduction })
        }
        Some(h) => {
            let h = GroupSpec::parse(h)?;
            let nr = nr_membership_bounded(&g, &h)?;
            let reduction = if nr.member { Some(classify_reduction(&g, &h, &flags)?) } else { None };
            Ok(DecideReport { answer: nr.member, g, h: Some(h), minap: None, nr: Some(nr), reduction })
        }
    }
}

fn human_decide(r: &DecideReport) -> String {
    let mut s = format!("{}\n", if r.answer { "YES" } else { "NO" });
    let cert =
        r.minap.as_ref().and_then(|m| m.certificate.as_ref()).or(r.nr.as_ref().and_then(|n| n.certificate.as_ref()));
    if let Some(c) = cert {
        s += &format!("certificate: {c}\n");
    }
    if let Some(case) = &r.reduction {
        s += &format!("case: {}\n", case.tag);
        for slot in &case.slots {
            let p = slot.prime.map_or(String::new(), |p| format!(" p = {p}"));
            s += &format!("  {}{p}: {:?} on {}\n", slot.tag, slot.recipe_id, slot.ambient);
        }
        if !case.note.is_empty() {
            s += &format!("note: {}\n", case.note);
        }
    }
    s
}

fn parse_range(text: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("expected a range lo..hi, got `{text}`"));
    let (lo, hi) = text.split_once("..").ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

pub fn build_seq(a: &BuildSeqArgs) -> Result<SequenceDump, CliError> {
    let recipe = a.recipe.build()?;
    let seq = Sequence::new(recipe.clone())?;
    let (lo, hi) = parse_range(&a.window)?;
    let terms = if lo > hi {
        Vec::new()
    } else {
        seq.dump(lo..=hi)?.into_iter().map(|(n, d)| TermLine { n, term: d.to_string() }).collect()
    };
    Ok(SequenceDump { ambient: (**seq.ambient()).clone(), recipe, window: (lo, hi), terms })
}

/// A nonzero element supported on the first two copies of each summand,
/// with small values.
fn random_element(spec: &Arc<GroupSpec>, rng: &mut ChaCha8Rng) -> Result<Element, CliError> {
    let coords: Vec<Coordinate> = spec
        .components()
        .iter()
        .enumerate()
        .flat_map(|(i, c)| (0..2).filter(|k| c.multiplicity.admits(*k)).map(move |k| Coordinate::new(i, k)))
        .collect();
    if coords.is_empty() {
        return Err(CliError::Usage("the ambient group is trivial".into()));
    }
    loop {
        let count = rng.gen_range(1..=2.min(coords.len()));
        let mut e = Element::zero(spec.clone());
        for _ in 0..count {
            let c = coords[rng.gen_range(0..coords.len())];
            let v = match spec.kind(c.component)? {
                ComponentKind::IntegerZ => ComponentValue::Integer(rng.gen_range(-2i64..=2).into()),
                ComponentKind::Cyclic { .. } => {
                    ComponentValue::Residue(rng.gen_range(0..spec.kind(c.component)?.modulus().unwrap()))
                }
                ComponentKind::Prufer { p } => {
                    let t = rng.gen_range(1..=3);
                    ComponentValue::Prufer(PruferValue::new(p, rng.gen_range(0i64..1000).into(), t))
                }
            };
            e = e.add(&Element::single(spec.clone(), c, v)?)?;
        }
        if !e.is_zero() {
            return Ok(e);
        }
    }
}

pub fn verify(a: &VerifyArgs) -> Result<VerifyReport, CliError> {
    let recipe = a.recipe.build()?;
    let seq = Sequence::new(recipe.clone())?;
    let ambient = seq.ambient().clone();
    let mut targets = a.targets.iter().map(|t| Element::parse(ambient.clone(), t)).collect::<Result<Vec<_>, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    for _ in 0..a.random {
        targets.push(random_element(&ambient, &mut rng)?);
    }
    if targets.is_empty() {
        return Err(CliError::Usage("give at least one --target or --random".into()));
    }
    let mut reports = Vec::with_capacity(targets.len());
    for g in &targets {
        if g.is_zero() {
            return Err(AkmError::ZeroTarget.into());
        }
        let m = match a.m {
            Some(m) => m,
            None => m_bound(&recipe, g, a.k)?,
        };
        let cap = a.cap.unwrap_or(m + a.window);
        reports.push(excludes(g, &AkmQuery::new(recipe.clone(), a.k, m, cap)?)?);
    }
    Ok(VerifyReport { recipe, reports })
}

fn parse_truncation(text: &str, ambient: &GroupSpec) -> Result<Truncation, CliError> {
    let bad = || CliError::Usage(format!("bad truncation `{text}`"));
    let parts: Vec<u64> = text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [n] => Ok(Truncation::leading(ambient, *n)),
        _ if parts.len() == ambient.components().len() => Ok(Truncation { copies: parts }),
        _ => Err(bad()),
    }
}

pub fn radical(a: &RadicalArgs) -> Result<RadicalReport, CliError> {
    let recipe = a.recipe.build()?;
    let seq = Sequence::new(recipe.clone())?;
    let truncation = parse_truncation(&a.truncation, seq.ambient())?;
    Ok(radical_report(&recipe, &truncation, a.tail, a.window, &Expected::parse(&a.expected))?)
}

fn human_radical(r: &RadicalReport) -> String {
    let mut s = format!(
        "{}: truncation {} (order {}), tail {} with windows {} and {}\n",
        match r.verdict {
            RadicalVerdict::Match => "MATCH",
            RadicalVerdict::Mismatch => "MISMATCH",
        },
        r.truncated_spec,
        r.truncation_order,
        r.tail_start,
        r.stabilization,
        2 * r.stabilization
    );
    s += &format!("kept characters: {} (stable: {})\n", r.kept_characters, r.stable);
    s +=
        &format!("annihilator: order {} generated by [{}]\n", r.annihilator_order, r.annihilator_generators.join(", "));
    s += &format!("expected order: {}\n", r.expected_order);
    if let Some(c) = &r.counterexample {
        s += &format!("counterexample: {c}\n");
    }
    s
}

pub fn pair(a: &PairArgs) -> Result<PairReport, CliError> {
    let spec = Arc::new(GroupSpec::parse(&a.g)?);
    let chi = Character::parse(spec.clone(), &a.character)?;
    let g = Element::parse(spec, &a.element)?;
    let angle = chi.pair(&g)?;
    let mut text = angle.to_string();
    if let CircleValue::Approx { .. } = angle {
        // never show more places than the radius warrants
        if let Some(dot) = text.find('.') {
            text.truncate((dot + 1 + a.precision).min(text.len()));
        }
    }
    Ok(PairReport {
        character: chi.to_string(),
        element: g.to_string(),
        angle: text,
        exact: angle.as_exact().is_some(),
    })
}
