//! `despla`: displacements in finite categories from the command line.
//!
//! Every subcommand reads JSON files (categories, functors, marked
//! classes), runs one engine operation, prints a JSON report to standard
//! output and a one-line summary to standard error. Exit codes: 0 for
//! success or a true verdict, 1 for a false verdict, 2 for engine errors,
//! 64 for usage errors, 65 for unusable input files, 69 when a search
//! budget is exhausted. `DESPLA_BUDGET=2.5` scales every search cap.

mod format;
mod generate;
mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use despla_core::{
    check_crossing, decompose_bridge, descend, descent_crossing, displace, is_street_opfibration,
    join_functor, left_adjoint_via_displacements_on, pseudopullback, recognize_join,
    transfer_condition_check, AdjunctionData, Error as EngineError, FinCategory, FunctorData,
    MarkKind, MarkedClass, ModelMarks, MorId, ObjId, OpfibFailure, PseudoPullback, SearchBudget,
    UnitReading,
};
use serde::Serialize;

use format::LoadError;
use report::{emit, BudgetReport, CertificateReport, CliError};

#[derive(Parser)]
#[command(
    name = "despla",
    version,
    about = "Displace objects along morphisms under functors between finite categories"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a category or functor file against the laws.
    Validate(ValidateArgs),
    /// Displace an object along a morphism out of its image.
    Displace(DisplaceArgs),
    /// Test whether every displacement exists with invertible base unit.
    OpfibCheck(FunctorArg),
    /// Synthesize a left adjoint from displacements along identities.
    Adjoint(AdjointArgs),
    /// Extend a functor over freely adjoined initial objects.
    Join(FunctorArg),
    /// Split a functor into a joined category into its two parts, then
    /// rebuild it and compare.
    Bridge(FunctorArg),
    /// Build the pseudopullback of functors over a shared codomain.
    Pullback(FamilyArgs),
    /// Displace in a pseudopullback by stagewise componentwise descent.
    Descend(DescendArgs),
    /// Compare the interleaved chain colimits of a stabilized descent.
    CrossingCheck(CrossingArgs),
    /// Check that displacement base units preserve marked classes.
    LeftPerfect(LeftPerfectArgs),
    /// Check the transfer condition for an adjunction and a marking.
    TransferCheck(TransferArgs),
    /// Emit a builtin instance as a category or functor file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct ValidateArgs {
    /// Category file to check.
    #[arg(long, conflicts_with = "functor", required_unless_present = "functor")]
    category: Option<PathBuf>,
    /// Functor file to check.
    #[arg(long)]
    functor: Option<PathBuf>,
}

#[derive(Args)]
struct FunctorArg {
    /// Functor file.
    #[arg(long)]
    functor: PathBuf,
}

#[derive(Args)]
struct DisplaceArgs {
    /// Functor file.
    #[arg(long)]
    functor: PathBuf,
    /// Source object, by label, in the functor's domain.
    #[arg(long)]
    object: String,
    /// Morphism out of the object's image, by label, in the codomain.
    #[arg(long)]
    morphism: String,
}

#[derive(Args)]
struct AdjointArgs {
    /// Functor file for the right adjoint candidate.
    #[arg(long)]
    functor: PathBuf,
    /// Codomain objects to cover (defaults to all of them).
    #[arg(long, num_args = 1..)]
    base: Vec<String>,
}

#[derive(Args)]
struct FamilyArgs {
    /// Functor files sharing one codomain.
    #[arg(long, num_args = 1.., required = true)]
    family: Vec<PathBuf>,
}

#[derive(Args)]
struct DescendArgs {
    /// Functor files sharing one codomain.
    #[arg(long, num_args = 1.., required = true)]
    family: Vec<PathBuf>,
    /// Source object, by label, in the pseudopullback's total category.
    #[arg(long)]
    object: String,
    /// Morphism out of the object's base image, by label.
    #[arg(long)]
    morphism: String,
    /// Stage cap (defaults to the budget's descent cap).
    #[arg(long)]
    max_stages: Option<usize>,
}

#[derive(Args)]
struct CrossingArgs {
    /// Functor files sharing one codomain.
    #[arg(long, num_args = 1.., required = true)]
    family: Vec<PathBuf>,
    /// Source object, by label, in the pseudopullback's total category.
    #[arg(long)]
    object: String,
    /// Morphism out of the object's base image, by label.
    #[arg(long)]
    morphism: String,
    /// Check one component only (defaults to all of them).
    #[arg(long)]
    component: Option<usize>,
    /// Stage cap (defaults to the budget's descent cap).
    #[arg(long)]
    max_stages: Option<usize>,
}

#[derive(Args)]
struct LeftPerfectArgs {
    /// Functor file.
    #[arg(long)]
    functor: PathBuf,
    /// Marked classes on the functor's domain.
    #[arg(long)]
    marks_dom: PathBuf,
    /// Marked classes on the functor's codomain.
    #[arg(long)]
    marks_cod: PathBuf,
    /// Restrict the check to one source object, by label.
    #[arg(long)]
    object: Option<String>,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ReadingArg {
    /// Test the image of the displacement unit.
    Unit,
    /// Test the displacement base unit instead.
    BaseUnit,
}

#[derive(Args)]
struct TransferArgs {
    /// Adjunction file: the right functor plus base objects.
    #[arg(long)]
    adjunction: PathBuf,
    /// Marked classes and weak equivalences on the base category.
    #[arg(long)]
    marks: PathBuf,
    /// Which morphism the weak-equivalence test applies to.
    #[arg(long, value_enum, default_value_t = ReadingArg::Unit)]
    reading: ReadingArg,
}

#[derive(Args)]
struct GenerateArgs {
    /// What to generate.
    #[arg(value_enum)]
    kind: generate::Kind,
    /// Size bound (finset, pointed) or monoid order (mset).
    size: Option<usize>,
    /// Carrier size bound for mset.
    #[arg(long)]
    carrier: Option<usize>,
    /// Write to this path instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let budget = budget_from_env()?;
    match &cli.command {
        Command::Validate(a) => cmd_validate(a),
        Command::Displace(a) => cmd_displace(a, &budget),
        Command::OpfibCheck(a) => cmd_opfib(a, &budget),
        Command::Adjoint(a) => cmd_adjoint(a, &budget),
        Command::Join(a) => cmd_join(a),
        Command::Bridge(a) => cmd_bridge(a, &budget),
        Command::Pullback(a) => cmd_pullback(a, &budget),
        Command::Descend(a) => cmd_descend(a, &budget),
        Command::CrossingCheck(a) => cmd_crossing(a, &budget),
        Command::LeftPerfect(a) => cmd_left_perfect(a, &budget),
        Command::TransferCheck(a) => cmd_transfer(a, &budget),
        Command::Generate(a) => cmd_generate(a),
    }
}

/// `DESPLA_BUDGET` scales every default cap by the given factor.
fn budget_from_env() -> Result<SearchBudget, CliError> {
    let Some(raw) = std::env::var_os("DESPLA_BUDGET") else {
        return Ok(SearchBudget::default());
    };
    let bad = || {
        CliError::usage(format!(
            "DESPLA_BUDGET must be a positive number, got {raw:?}"
        ))
    };
    let f: f64 = raw.to_str().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    if !f.is_finite() || f <= 0.0 {
        return Err(bad());
    }
    Ok(SearchBudget::scaled((f * 1000.0).round() as usize, 1000))
}

fn obj_by_label(c: &FinCategory, label: &str, what: &str) -> Result<ObjId, CliError> {
    c.object_by_label(label)
        .ok_or_else(|| CliError::usage(format!("{what}: no object named {label:?}")))
}

fn mor_by_label(c: &FinCategory, label: &str, what: &str) -> Result<MorId, CliError> {
    c.morphism_by_label(label)
        .ok_or_else(|| CliError::usage(format!("{what}: no morphism named {label:?}")))
}

/// Load a marks file and close it over the checks the engine requires;
/// closure violations make the file unusable input.
fn marked_class(
    c: &Arc<FinCategory>,
    path: &Path,
    budget: &SearchBudget,
) -> Result<(MarkedClass, format::MarksFile), CliError> {
    let mf = format::read_marks_file(path)?;
    let cof = format::resolve_morphisms(c, &mf.cofibrations, "cofibrations")?;
    let triv = format::resolve_morphisms(c, &mf.trivial_cofibrations, "trivial_cofibrations")?;
    let marks = MarkedClass::new(c, cof, triv, budget)
        .map_err(|e| LoadError::Data(format!("{}: {e}", path.display())))?;
    Ok((marks, mf))
}

fn load_family(paths: &[PathBuf]) -> Result<Vec<FunctorData>, CliError> {
    paths
        .iter()
        .map(|p| format::load_functor(p).map_err(CliError::Load))
        .collect()
}

#[derive(Serialize)]
struct ValidateReport {
    valid: bool,
    kind: &'static str,
    violations: Vec<String>,
}

fn cmd_validate(a: &ValidateArgs) -> Result<i32, CliError> {
    let (kind, violations): (_, Vec<String>) = if let Some(path) = &a.category {
        let cf = format::read_category_file(path)?;
        let (labels, mors, identities, composition) = format::category_parts(&cf)?;
        let cat = FinCategory::from_parts(labels, mors, identities, composition)
            .map_err(|e| LoadError::Data(e.to_string()))?;
        let report = cat.validate();
        ("category", report.violations.iter().map(|v| v.to_string()).collect())
    } else {
        let path = a.functor.as_ref().expect("clap enforces one input");
        let ff = format::read_functor_file(path)?;
        let base_dir = path.parent().unwrap_or(Path::new("."));
        let (dom, cod, obj_map, mor_map) = format::functor_tables(&ff, base_dir)?;
        let outcome = FunctorData::new(dom, cod, obj_map, mor_map).and_then(|p| p.validate());
        ("functor", outcome.err().iter().map(|e| e.to_string()).collect())
    };
    let report = ValidateReport {
        valid: violations.is_empty(),
        kind,
        violations,
    };
    let human = if report.valid {
        format!("{kind} is valid")
    } else {
        format!("{kind} violates the laws ({} finding(s))", report.violations.len())
    };
    Ok(emit(&report, &human, i32::from(!report.valid)))
}

#[derive(Serialize)]
struct DisplaceReport {
    found: bool,
    source: String,
    along: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    apex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_unit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateReport>,
    budget: BudgetReport,
}

fn cmd_displace(a: &DisplaceArgs, budget: &SearchBudget) -> Result<i32, CliError> {
    let p = format::load_functor(&a.functor)?;
    let e = obj_by_label(p.dom(), &a.object, "--object")?;
    let eps = mor_by_label(p.cod(), &a.morphism, "--morphism")?;
    let (ec, bc) = (p.dom().as_ref(), p.cod().as_ref());
    match displace(&p, e, eps, budget)? {
        Some(r) => {
            let report = DisplaceReport {
                found: true,
                source: ec.object_label(r.source).into(),
                along: bc.morphism_label(r.along).into(),
                unit: Some(ec.morphism_label(r.unit).into()),
                apex: Some(ec.object_label(r.apex).into()),
                base_unit: Some(bc.morphism_label(r.base_unit).into()),
                certificate: Some((&r.certificate).into()),
                budget: budget.into(),
            };
            let human = format!(
                "displaced {} along {}: apex {}, unit {}, base unit {}",
                a.object,
                a.morphism,
                ec.object_label(r.apex),
                ec.morphism_label(r.unit),
                bc.morphism_label(r.base_unit),
            );
            Ok(emit(&report, &human, 0))
        }
        None => {
            let report = DisplaceReport {
                found: false,
                source: a.object.clone(),
                along: a.morphism.clone(),
                unit: None,
                apex: None,
                base_unit: None,
                certificate: None,
                budget: budget.into(),
            };
            let human = format!("no displacement of {} along {} exists", a.object, a.morphism);
            Ok(emit(&report, &human, 1))
        }
    }
}

#[derive(Serialize)]
struct OpfibFailureReport {
    object: String,
    along: String,
    reason: &'static str,
}

#[derive(Serialize)]
struct OpfibReport {
    is_opfibration: bool,
    instances_checked: usize,
    failures: Vec<OpfibFailureReport>,
    budget: BudgetReport,
}

fn cmd_opfib(a: &FunctorArg, budget: &SearchBudget) -> Result<i32, CliError> {
    let p = format::load_functor(&a.functor)?;
    let verdict = is_street_opfibration(&p, budget)?;
    let (ec, bc) = (p.dom().as_ref(), p.cod().as_ref());
    let failures: Vec<OpfibFailureReport> = verdict
        .failures
        .iter()
        .map(|f| OpfibFailureReport {
            object: ec.object_label(f.object).into(),
            along: bc.morphism_label(f.along).into(),
            reason: match f.reason {
                OpfibFailure::Missing => "missing",
                OpfibFailure::BaseUnitNotInvertible => "base unit not invertible",
            },
        })
        .collect();
    let report = OpfibReport {
        is_opfibration: verdict.is_opfibration,
        instances_checked: verdict.instances_checked,
        failures,
        budget: budget.into(),
    };
    let human = if verdict.is_opfibration {
        format!("opfibration: all {} instances lift", verdict.instances_checked)
    } else {
        format!(
            "not an opfibration: {} of {} instances fail",
            report.failures.len(),
            verdict.instances_checked
        )
    };
    Ok(emit(&report, &human, i32::from(!verdict.is_opfibration)))
}

#[derive(Serialize)]
struct AdjointReport {
    found: bool,
    base: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left_on_objects: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    left_on_morphisms: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unit: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counit: Option<BTreeMap<String, String>>,
    budget: BudgetReport,
}

fn resolve_base(p: &FunctorData, labels: &[String]) -> Result<Vec<ObjId>, CliError> {
    if labels.is_empty() {
        return Ok(p.cod().objects().collect());
    }
    labels
        .iter()
        .map(|l| obj_by_label(p.cod(), l, "--base"))
        .collect()
}

fn adjoint_tables(adj: &AdjunctionData, budget: &SearchBudget) -> AdjointReport {
    let p = adj.right();
    let (ec, bc) = (p.dom().as_ref(), p.cod().as_ref());
    let pick = |b: ObjId| bc.object_label(b).to_string();
    let left_on_objects = adj
        .base_objects()
        .iter()
        .map(|&b| (pick(b), ec.object_label(adj.left_on_obj(b).expect("base object")).into()))
        .collect();
    let left_on_morphisms = bc
        .morphisms()
        .filter_map(|g| {
            adj.left_on_mor(g)
                .map(|l| (bc.morphism_label(g).into(), ec.morphism_label(l).into()))
        })
        .collect();
    let unit = adj
        .base_objects()
        .iter()
        .map(|&b| (pick(b), bc.morphism_label(adj.unit_at(b).expect("base object")).into()))
        .collect();
    let counit = ec
        .objects()
        .filter_map(|e| {
            adj.counit_at(e)
                .map(|c| (ec.object_label(e).into(), ec.morphism_label(c).into()))
        })
        .collect();
    AdjointReport {
        found: true,
        base: adj.base_objects().iter().map(|&b| pick(b)).collect(),
        left_on_objects: Some(left_on_objects),
        left_on_morphisms: Some(left_on_morphisms),
        unit: Some(unit),
        counit: Some(counit),
        budget: budget.into(),
    }
}

fn cmd_adjoint(a: &AdjointArgs, budget: &SearchBudget) -> Result<i32, CliError> {
    let p = format::load_functor(&a.functor)?;
    let base = resolve_base(&p, &a.base)?;
    match left_adjoint_via_displacements_on(&p, &base, budget)? {
        Some(adj) => {
            let report = adjoint_tables(&adj, budget);
            let human = format!("left adjoint found on {} base object(s)", report.base.len());
            Ok(emit(&report, &human, 0))
        }
        None => {
            let report = AdjointReport {
                found: false,
                base: base.iter().map(|&b| p.cod().object_label(b).into()).collect(),
                left_on_objects: None,
                left_on_morphisms: None,
                unit: None,
                counit: None,
                budget: budget.into(),
            };
            Ok(emit(&report, "no left adjoint on the requested base", 1))
        }
    }
}

#[derive(Serialize)]
struct JoinReport {
    dom_zero: String,
    cod_zero: String,
    functor: format::FunctorFile,
}

fn cmd_join(a: &FunctorArg) -> Result<i32, CliError> {
    let p = format::load_functor(&a.functor)?;
    let jf = join_functor(&p);
    let human = format!(
        "joined functor: {} objects onto {}",
        jf.functor.dom().object_count(),
        jf.functor.cod().object_count()
    );
    let report = JoinReport {
        dom_zero: jf.dom.joined.object_label(jf.dom.zero).into(),
        cod_zero: jf.cod.joined.object_label(jf.cod.zero).into(),
        functor: format::functor_to_file(&jf.functor),
    };
    Ok(emit(&report, &human, 0))
}

#[derive(Serialize)]
struct BridgeReport {
    is_bridge: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    a_minus: Vec<String>,
    a_plus: Vec<String>,
    round_trip: bool,
    budget: BudgetReport,
}

fn cmd_bridge(a: &FunctorArg, budget: &SearchBudget) -> Result<i32, CliError> {
    let f = format::load_functor(&a.functor)?;
    let negative = |reason: String, budget: &SearchBudget| {
        let report = BridgeReport {
            is_bridge: false,
            reason: Some(reason.clone()),
            a_minus: Vec::new(),
            a_plus: Vec::new(),
            round_trip: false,
            budget: budget.into(),
        };
        emit(&report, &format!("not a bridge: {reason}"), 1)
    };
    let j = match recognize_join(f.cod()) {
        Ok(j) => j,
        Err(EngineError::MalformedJoin(m)) => return Ok(negative(m, budget)),
        Err(e) => return Err(e.into()),
    };
    let d = match decompose_bridge(&f, &j, budget) {
        Ok(d) => d,
        Err(EngineError::MalformedJoin(m)) => return Ok(negative(m, budget)),
        Err(EngineError::InvalidPartition { reason }) => return Ok(negative(reason, budget)),
        Err(e) => return Err(e.into()),
    };
    let rebuilt = despla_core::assemble_bridge(&j, f.dom(), &d.a_minus, &d.f_plus)?;
    let round_trip = rebuilt == f;
    let ac = f.dom().as_ref();
    let report = BridgeReport {
        is_bridge: true,
        reason: None,
        a_minus: d.a_minus.iter().map(|&o| ac.object_label(o).into()).collect(),
        a_plus: d.a_plus.iter().map(|&o| ac.object_label(o).into()).collect(),
        round_trip,
        budget: budget.into(),
    };
    let human = format!(
        "bridge: {} object(s) collapsed, {} kept, reassembly {}",
        report.a_minus.len(),
        report.a_plus.len(),
        if round_trip { "matches" } else { "DIFFERS" },
    );
    Ok(emit(&report, &human, i32::from(!round_trip)))
}

#[derive(Serialize)]
struct PullbackReport {
    components: usize,
    total_objects: usize,
    total_morphisms: usize,
    objects: Vec<String>,
    budget: BudgetReport,
}

fn cmd_pullback(a: &FamilyArgs, budget: &SearchBudget) -> Result<i32, CliError> {
    let family = load_family(&a.family)?;
    let pp = pseudopullback(&family, budget)?;
    let report = PullbackReport {
        components: family.len(),
        total_objects: pp.total.object_count(),
        total_morphisms: pp.total.morphism_count(),
        objects: pp.total.objects().map(|o| pp.total.object_label(o).into()).collect(),
        budget: budget.into(),
    };
    let human = format!(
        "pseudopullback of {} components: {} objects, {} morphisms",
        report.components, report.total_objects, report.total_morphisms
    );
    Ok(emit(&report, &human, 0))
}

#[derive(Serialize)]
struct StageReport {
    index: usize,
    base: String,
    components: Vec<String>,
    legs: Vec<String>,
    units: Vec<String>,
    base_units: Vec<String>,
    next_legs: Vec<String>,
    iota: String,
}

#[derive(Serialize)]
struct DescendReport {
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    stabilized_at: Option<usize>,
    stages: Vec<StageReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unit: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    apex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_unit: Option<String>,
    budget: BudgetReport,
}

struct DescentInput {
    pp: PseudoPullback,
    e: ObjId,
    eps: MorId,
}

fn descent_input(
    family: &[PathBuf],
    object: &str,
    morphism: &str,
    budget: &SearchBudget,
) -> Result<DescentInput, CliError> {
    let family = load_family(family)?;
    let pp = pseudopullback(&family, budget)?;
    let e = obj_by_label(&pp.total, object, "--object")?;
    let eps = mor_by_label(pp.canonical.cod(), morphism, "--morphism")?;
    Ok(DescentInput { pp, e, eps })
}

fn cmd_descend(a: &DescendArgs, budget: &SearchBudget) -> Result<i32, CliError> {
    let input = descent_input(&a.family, &a.object, &a.morphism, budget)?;
    let DescentInput { pp, e, eps } = &input;
    let max_stages = a.max_stages.unwrap_or(budget.descent_max_stages);
    let trace = match descend(pp, *e, *eps, max_stages, budget) {
        Ok(trace) => trace,
        Err(e @ (EngineError::DisplacementMissing { .. } | EngineError::NoColimit { .. })) => {
            let report = DescendReport {
                found: false,
                reason: Some(e.to_string()),
                stabilized_at: None,
                stages: Vec::new(),
                unit: None,
                apex: None,
                base_unit: None,
                budget: budget.into(),
            };
            return Ok(emit(&report, &format!("descent failed: {e}"), 1));
        }
        Err(e) => return Err(e.into()),
    };
    let tc = pp.canonical.dom().as_ref();
    let bc = pp.canonical.cod().as_ref();
    let stages = trace
        .stages
        .iter()
        .map(|st| StageReport {
            index: st.index,
            base: bc.object_label(st.base).into(),
            components: st
                .components
                .iter()
                .zip(&pp.components)
                .map(|(&e_j, p_j)| p_j.dom().object_label(e_j).into())
                .collect(),
            legs: st.legs.iter().map(|&l| bc.morphism_label(l).into()).collect(),
            units: st
                .displacements
                .iter()
                .zip(&pp.components)
                .map(|(d, p_j)| p_j.dom().morphism_label(d.unit).into())
                .collect(),
            base_units: st
                .displacements
                .iter()
                .map(|d| bc.morphism_label(d.base_unit).into())
                .collect(),
            next_legs: st.next_legs.iter().map(|&l| bc.morphism_label(l).into()).collect(),
            iota: bc.morphism_label(st.iota).into(),
        })
        .collect();
    let report = DescendReport {
        found: trace.result.is_some(),
        reason: None,
        stabilized_at: trace.stabilized_at,
        stages,
        unit: trace.result.as_ref().map(|r| tc.morphism_label(r.unit).into()),
        apex: trace.result.as_ref().map(|r| tc.object_label(r.apex).into()),
        base_unit: trace.result.as_ref().map(|r| bc.morphism_label(r.base_unit).into()),
        budget: budget.into(),
    };
    let human = match (&trace.result, trace.stabilized_at) {
        (Some(r), Some(k)) => format!(
            "descent stabilized at stage {k}: apex {}, base unit {}",
            tc.object_label(r.apex),
            bc.morphism_label(r.base_unit)
        ),
        _ => "descent produced no displacement".into(),
    };
    Ok(emit(&report, &human, i32::from(!report.found)))
}

#[derive(Serialize)]
struct ComponentCrossing {
    component: usize,
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    forward: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    backward: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct CrossingCheckReport {
    ok: bool,
    components: Vec<ComponentCrossing>,
    budget: BudgetReport,
}

fn cmd_crossing(a: &CrossingArgs, budget: &SearchBudget) -> Result<i32, CliError> {
    let input = descent_input(&a.family, &a.object, &a.morphism, budget)?;
    let DescentInput { pp, e, eps } = &input;
    let max_stages = a.max_stages.unwrap_or(budget.descent_max_stages);
    let trace = descend(pp, *e, *eps, max_stages, budget)?;
    let bc = pp.canonical.cod().as_ref();
    let js: Vec<usize> = match a.component {
        Some(j) if j >= pp.components.len() => {
            return Err(CliError::usage(format!(
                "--component {j} out of range for {} components",
                pp.components.len()
            )))
        }
        Some(j) => vec![j],
        None => (0..pp.components.len()).collect(),
    };
    let mut components = Vec::with_capacity(js.len());
    for j in js {
        let data = descent_crossing(pp, &trace, j)?;
        match check_crossing(bc, &data, budget) {
            Ok(rep) => components.push(ComponentCrossing {
                component: j,
                ok: true,
                forward: Some(bc.morphism_label(rep.forward).into()),
                backward: Some(bc.morphism_label(rep.backward).into()),
                error: None,
            }),
            Err(e @ EngineError::CertificateMismatch(_)) => components.push(ComponentCrossing {
                component: j,
                ok: false,
                forward: None,
                backward: None,
                error: Some(e.to_string()),
            }),
            Err(e) => return Err(e.into()),
        }
    }
    let ok = components.iter().all(|c| c.ok);
    let report = CrossingCheckReport {
        ok,
        components,
        budget: budget.into(),
    };
    let human = if ok {
        format!("crossing holds for {} component(s)", report.components.len())
    } else {
        "crossing fails: the chain colimits differ".into()
    };
    Ok(emit(&report, &human, i32::from(!ok)))
}

#[derive(Serialize)]
struct PerfectFailureReport {
    kind: &'static str,
    object: String,
    along: String,
    reason: String,
}

#[derive(Serialize)]
struct UnitLabelReport {
    kind: &'static str,
    object: String,
    along: String,
    unit: String,
    marked_in_domain: bool,
    image_marked: bool,
}

#[derive(Serialize)]
struct PerfectReport {
    perfect: bool,
    instances: usize,
    failures: Vec<PerfectFailureReport>,
    unit_labels: Vec<UnitLabelReport>,
    budget: BudgetReport,
}

fn kind_str(kind: MarkKind) -> &'static str {
    match kind {
        MarkKind::Cofibration => "cofibration",
        MarkKind::TrivialCofibration => "trivial_cofibration",
    }
}

fn cmd_left_perfect(a: &LeftPerfectArgs, budget: &SearchBudget) -> Result<i32, CliError> {
    let p = format::load_functor(&a.functor)?;
    let (marks_dom, _) = marked_class(p.dom(), &a.marks_dom, budget)?;
    let (marks_cod, _) = marked_class(p.cod(), &a.marks_cod, budget)?;
    let object = a
        .object
        .as_deref()
        .map(|l| obj_by_label(p.dom(), l, "--object"))
        .transpose()?;
    let rep = despla_core::check_left_perfect(&p, &marks_dom, &marks_cod, object, budget)?;
    let (ec, bc) = (p.dom().as_ref(), p.cod().as_ref());
    let failures = rep
        .failures
        .iter()
        .map(|f| PerfectFailureReport {
            kind: kind_str(f.kind),
            object: ec.object_label(f.object).into(),
            along: bc.morphism_label(f.along).into(),
            reason: match &f.reason {
                despla_core::LeftPerfectFailureReason::Missing => "no displacement exists".into(),
                despla_core::LeftPerfectFailureReason::BaseUnitOutsideClass { base_unit } => {
                    format!("base unit {} left the class", bc.morphism_label(*base_unit))
                }
            },
        })
        .collect();
    let unit_labels = rep
        .unit_labels
        .iter()
        .map(|u| UnitLabelReport {
            kind: kind_str(u.kind),
            object: ec.object_label(u.object).into(),
            along: bc.morphism_label(u.along).into(),
            unit: ec.morphism_label(u.unit).into(),
            marked_in_domain: u.marked_in_domain,
            image_marked: u.image_marked,
        })
        .collect();
    let report = PerfectReport {
        perfect: rep.perfect,
        instances: rep.instances,
        failures,
        unit_labels,
        budget: budget.into(),
    };
    let human = if rep.perfect {
        format!("left perfect: {} instance(s) preserved", rep.instances)
    } else {
        format!(
            "not left perfect: {} of {} instance(s) fail",
            report.failures.len(),
            rep.instances
        )
    };
    Ok(emit(&report, &human, i32::from(!rep.perfect)))
}

#[derive(Serialize)]
struct TransferFailureReport {
    object: String,
    along: String,
    image: String,
}

#[derive(Serialize)]
struct UncheckedReport {
    object: String,
    along: String,
    reason: String,
}

#[derive(Serialize)]
struct TransferCheckReport {
    holds: bool,
    instances: usize,
    reading: &'static str,
    failures: Vec<TransferFailureReport>,
    unchecked: Vec<UncheckedReport>,
    budget: BudgetReport,
}

fn cmd_transfer(a: &TransferArgs, budget: &SearchBudget) -> Result<i32, CliError> {
    let af = format::read_adjunction_file(&a.adjunction)?;
    let base_dir = a.adjunction.parent().unwrap_or(Path::new("."));
    let (right, base) = format::adjunction_parts(&af, base_dir)?;
    let (marks, mf) = marked_class(right.cod(), &a.marks, budget)?;
    let weak_names = mf.weak_equivalences.as_ref().ok_or_else(|| {
        LoadError::Data(format!(
            "{}: transfer-check needs a weak_equivalences list",
            a.marks.display()
        ))
    })?;
    let weak = format::resolve_morphisms(right.cod(), weak_names, "weak_equivalences")?;
    let mm = ModelMarks::new(marks, weak)
        .map_err(|e| LoadError::Data(format!("{}: {e}", a.marks.display())))?;
    let adj = left_adjoint_via_displacements_on(&right, &base, budget)?.ok_or(
        EngineError::DisplacementMissing {
            what: "no left adjoint exists on the requested base".into(),
        },
    )?;
    let reading = match a.reading {
        ReadingArg::Unit => UnitReading::UnitImage,
        ReadingArg::BaseUnit => UnitReading::BaseUnit,
    };
    let rep = transfer_condition_check(&adj, &mm, reading, budget)?;
    let (ec, bc) = (right.dom().as_ref(), right.cod().as_ref());
    let report = TransferCheckReport {
        holds: rep.holds,
        instances: rep.instances,
        reading: match a.reading {
            ReadingArg::Unit => "unit",
            ReadingArg::BaseUnit => "base-unit",
        },
        failures: rep
            .failures
            .iter()
            .map(|f| TransferFailureReport {
                object: ec.object_label(f.object).into(),
                along: bc.morphism_label(f.along).into(),
                image: bc.morphism_label(f.image).into(),
            })
            .collect(),
        unchecked: rep
            .unchecked
            .iter()
            .map(|u| UncheckedReport {
                object: ec.object_label(u.object).into(),
                along: bc.morphism_label(u.along).into(),
                reason: u.reason.clone(),
            })
            .collect(),
        budget: budget.into(),
    };
    let human = if rep.holds {
        format!(
            "transfer condition holds on {} instance(s), {} unchecked",
            rep.instances,
            report.unchecked.len()
        )
    } else {
        format!(
            "transfer condition fails on {} of {} instance(s)",
            report.failures.len(),
            rep.instances
        )
    };
    Ok(emit(&report, &human, i32::from(!rep.holds)))
}

fn cmd_generate(a: &GenerateArgs) -> Result<i32, CliError> {
    let (text, human) = generate::run(a.kind, a.size, a.carrier)?;
    generate::write_out(&text, a.out.as_ref())?;
    eprintln!("{human}");
    Ok(0)
}
