use std::path::{Path, PathBuf};
use std::process::ExitCode;

use algcohom::cochain::DEFAULT_CAP;
use algcohom::extension::{
    CrossedJson, ExtensionContext, ExtensionJson, SectionRule, ThreeCocycle, ThreeCocycleJson, TwoCocycle,
    TwoCocycleJson,
};
use algcohom::homology::{cohomology, hochschild_over_a, hochschild_over_k, total_complex, Comparison};
use algcohom::lie::{lie_alpha, lie_cohomology};
use algcohom::presentation::builtins::{
    algebra_role, base_field, bundle, commutative, lie_module_role, lie_role, module_role, Bundle, CATALOG,
};
use algcohom::presentation::{
    load_presentation_file, validate, AssocTriple, LieTriple, Presentation, PresentationFile,
};
use algcohom::report::{render, Format, Render, Table};
use algcohom::{selftest, Error, FieldSpec, ValidationReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "algcohom", version, about = "Exact cohomology of algebras over a commutative base algebra")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Ground field: Q or Fp:<p>. Defaults to the field of the first input file, else Q.
    #[arg(long, global = true)]
    field: Option<FieldSpec>,
    /// Truncation degree N; reports cover degrees 0..N-1.
    #[arg(long = "n", global = true, default_value_t = 4, value_parser = at_least::<1>)]
    n: usize,
    /// Largest admissible cochain space dimension.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP, value_parser = at_least::<1000>)]
    cap: usize,
    #[arg(long, global = true, default_value = "table", value_parser = parse_format)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

fn at_least<const MIN: usize>(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= MIN => Ok(v),
        Ok(_) => Err(format!("must be at least {MIN}")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Subcommand)]
enum Command {
    /// Validate presentation files, each against the ones before it (A, then R or L, then M).
    Validate { files: Vec<PathBuf> },
    /// Total cohomology H^n(A, R, M), or H^n(A, L, M) with --lie.
    Cohomology {
        #[command(flatten)]
        triple: TripleRefs,
        #[arg(long)]
        lie: bool,
    },
    /// Hochschild cohomology of R with values in M over K, or over A with --over-a.
    Hochschild {
        r: String,
        m: String,
        #[arg(long = "over-a")]
        over_a: Option<String>,
    },
    /// Comparison maps alpha^n from the kernel column to the total cohomology.
    Compare {
        #[command(flatten)]
        triple: TripleRefs,
        #[arg(long)]
        lie: bool,
    },
    /// Degree-two cocycles and abelian extensions.
    #[command(subcommand)]
    Ext2(Ext2),
    /// Degree-three cocycles and crossed extensions.
    #[command(subcommand)]
    Ext3(Ext3),
    /// The builtin example library.
    #[command(subcommand)]
    Builtin(BuiltinCmd),
    /// Run the full invariant suite.
    Selftest,
}

#[derive(Args)]
struct TripleRefs {
    /// `builtin:<name>[:<p1>,<p2>..]` or a presentation JSON file.
    a: String,
    r: String,
    m: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Section {
    First,
    Last,
}

impl From<Section> for SectionRule {
    fn from(s: Section) -> Self {
        match s {
            Section::First => SectionRule::First,
            Section::Last => SectionRule::Last,
        }
    }
}

#[derive(Subcommand)]
enum Ext2 {
    /// Check a cocycle file against the explicit degree-two identities.
    Check {
        #[command(flatten)]
        triple: TripleRefs,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Build the abelian extension of a cocycle; prints extension JSON.
    Build {
        #[command(flatten)]
        triple: TripleRefs,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Extract a cocycle from an extension file; prints cocycle JSON.
    Extract {
        #[command(flatten)]
        triple: TripleRefs,
        #[arg(long)]
        extension: PathBuf,
        #[arg(long, value_enum, default_value = "first")]
        section: Section,
    },
    /// Count extension classes by exhaustive enumeration over F_2.
    Classify {
        #[command(flatten)]
        triple: TripleRefs,
    },
}

#[derive(Subcommand)]
enum Ext3 {
    /// Check a cocycle file against the explicit degree-three identities.
    Check {
        #[command(flatten)]
        triple: TripleRefs,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Cocycle of a crossed extension file; prints cocycle JSON.
    FromCrossed {
        #[command(flatten)]
        triple: TripleRefs,
        #[arg(long)]
        crossed: PathBuf,
        #[arg(long, value_enum, default_value = "first")]
        section: Section,
    },
}

#[derive(Subcommand)]
enum BuiltinCmd {
    /// List every builtin with its roles and parameters.
    List,
    /// Print the presentations of a builtin bundle as JSON.
    Emit { name: String },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Invalid(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        if e.is_internal() {
            return Failure::Internal(msg);
        }
        match e {
            Error::Io(_)
            | Error::Json(_)
            | Error::Parse(_)
            | Error::UnknownBuiltin(_)
            | Error::BadParams(_)
            | Error::FieldMismatch(..) => Failure::Usage(msg),
            _ => Failure::Invalid(msg),
        }
    }
}

type Out = Result<(String, u8), Failure>;

enum Ref {
    Builtin(String, Vec<i64>),
    File(PresentationFile),
}

fn parse_ref(s: &str) -> Result<Ref, Failure> {
    if let Some(rest) = s.strip_prefix("builtin:") {
        let (name, params) = rest.split_once(':').unwrap_or((rest, ""));
        let params = params
            .split(',')
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad builtin parameter {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Ref::Builtin(name.to_string(), params))
    } else {
        Ok(Ref::File(load(Path::new(s))?))
    }
}

fn load(path: &Path) -> Result<PresentationFile, Failure> {
    load_presentation_file(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Refs resolved in a common field.
struct Resolver {
    field: FieldSpec,
}

impl Resolver {
    fn new(config: &Config, refs: &[&Ref]) -> Self {
        let from_files = refs.iter().find_map(|r| match r {
            Ref::File(f) => Some(f.field),
            Ref::Builtin(..) => None,
        });
        Resolver { field: config.field.or(from_files).unwrap_or(FieldSpec::Rationals) }
    }

    fn check(&self, f: &PresentationFile) -> Result<(), Failure> {
        if f.field != self.field {
            return Err(Error::FieldMismatch(self.field, f.field).into());
        }
        Ok(())
    }

    fn a(&self, r: &Ref) -> Result<algcohom::CommutativeAlgebra, Failure> {
        match r {
            Ref::Builtin(name, p) => Ok(commutative(name, self.field, p)?),
            Ref::File(f) => {
                self.check(f)?;
                Ok(f.to_commutative()?)
            }
        }
    }

    fn assoc(&self, refs: [&Ref; 3]) -> Result<AssocTriple, Failure> {
        let a = self.a(refs[0])?;
        let r = match refs[1] {
            Ref::Builtin(name, p) => algebra_role(name, self.field, p, &a)?,
            Ref::File(f) => {
                self.check(f)?;
                f.to_algebra(&a)?
            }
        };
        let m = match refs[2] {
            Ref::Builtin(name, p) => {
                no_params(name, p)?;
                module_role(name, &r)?
            }
            Ref::File(f) => {
                self.check(f)?;
                f.to_bimodule(&r)?
            }
        };
        Ok(AssocTriple { a, r, m }.checked()?)
    }

    fn lie(&self, refs: [&Ref; 3]) -> Result<LieTriple, Failure> {
        let a = self.a(refs[0])?;
        let l = match refs[1] {
            Ref::Builtin(name, p) => lie_role(name, self.field, p, &a)?,
            Ref::File(f) => {
                self.check(f)?;
                f.to_lie(&a)?
            }
        };
        let m = match refs[2] {
            Ref::Builtin(name, p) => {
                no_params(name, p)?;
                lie_module_role(name, &a, &l)?
            }
            Ref::File(f) => {
                self.check(f)?;
                f.to_lie_module(&a, &l)?
            }
        };
        Ok(LieTriple { a, l, m }.checked()?)
    }
}

fn no_params(name: &str, p: &[i64]) -> Result<(), Failure> {
    if p.is_empty() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{name} takes no parameters")))
    }
}

fn refs(t: &TripleRefs) -> Result<[Ref; 3], Failure> {
    Ok([parse_ref(&t.a)?, parse_ref(&t.r)?, parse_ref(&t.m)?])
}

fn assoc_triple(config: &Config, t: &TripleRefs) -> Result<AssocTriple, Failure> {
    let [a, r, m] = refs(t)?;
    Resolver::new(config, &[&a, &r, &m]).assoc([&a, &r, &m])
}

fn lie_triple(config: &Config, t: &TripleRefs) -> Result<LieTriple, Failure> {
    let [a, l, m] = refs(t)?;
    Resolver::new(config, &[&a, &l, &m]).lie([&a, &l, &m])
}

fn show<T: Render + ?Sized>(r: &T, config: &Config) -> Result<String, Failure> {
    Ok(render(r, config.format)?)
}

fn json<T: Serialize>(v: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct FileReport {
    file: String,
    kind: String,
    report: ValidationReport,
}

#[derive(Serialize)]
struct Validation(Vec<FileReport>);

impl Render for Validation {
    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("validation", &["file", "kind", "verdict", "violations"]);
        for f in &self.0 {
            let first = f.report.violations.first().map(|v| format!("{} at {:?}", v.identity, v.indices));
            t.push(vec![
                f.file.clone(),
                f.kind.clone(),
                if f.report.is_valid() { "valid" } else { "invalid" }.into(),
                match first {
                    None => String::new(),
                    Some(s) => format!("{}: first {s}", f.report.violations.len()),
                },
            ]);
        }
        vec![t]
    }
}

fn validate_files(config: &Config, files: &[PathBuf]) -> Out {
    if files.is_empty() {
        return Err(Failure::Usage("validate needs at least one file".into()));
    }
    let mut context: Vec<Presentation> = Vec::new();
    let mut reports = Vec::new();
    for path in files {
        let file = load(path)?;
        if let Some(f) = config.field {
            if f != file.field {
                return Err(Error::FieldMismatch(f, file.field).into());
            }
        }
        let pres = file.to_presentation(&context.iter().collect::<Vec<_>>())?;
        let report = validate(&pres, &context.iter().collect::<Vec<_>>())?;
        reports.push(FileReport { file: path.display().to_string(), kind: pres.kind().into(), report });
        context.push(pres);
    }
    let ok = reports.iter().all(|r| r.report.is_valid());
    Ok((show(&Validation(reports), config)?, if ok { 0 } else { 1 }))
}

#[derive(Serialize)]
struct BuiltinList(Vec<BuiltinRow>);

#[derive(Serialize)]
struct BuiltinRow {
    name: &'static str,
    roles: Vec<&'static str>,
    params: &'static str,
    summary: &'static str,
}

impl Render for BuiltinList {
    fn tables(&self) -> Vec<Table> {
        let mut t = Table::new("builtins", &["name", "roles", "params", "summary"]);
        for b in &self.0 {
            t.push(vec![b.name.into(), b.roles.join(", "), b.params.into(), b.summary.into()]);
        }
        vec![t]
    }
}

#[derive(Serialize)]
struct Emitted {
    kind: &'static str,
    presentations: Vec<PresentationFile>,
}

fn builtin(config: &Config, cmd: &BuiltinCmd) -> Out {
    match cmd {
        BuiltinCmd::List => {
            let rows = CATALOG
                .iter()
                .map(|e| BuiltinRow {
                    name: e.name,
                    roles: e.roles.iter().map(|r| r.as_str()).collect(),
                    params: e.params,
                    summary: e.summary,
                })
                .collect();
            Ok((show(&BuiltinList(rows), config)?, 0))
        }
        BuiltinCmd::Emit { name } => {
            let spec = if name.starts_with("builtin:") { name.clone() } else { format!("builtin:{name}") };
            let Ref::Builtin(name, params) = parse_ref(&spec)? else { unreachable!() };
            let field = config.field.unwrap_or(FieldSpec::Rationals);
            let (kind, pres) = match bundle(&name, field, &params)? {
                Bundle::Assoc(t) => (
                    "assoc",
                    vec![Presentation::Commutative(t.a), Presentation::Algebra(t.r), Presentation::Bimodule(t.m)],
                ),
                Bundle::Lie(t) => {
                    ("lie", vec![Presentation::Commutative(t.a), Presentation::Lie(t.l), Presentation::LieModule(t.m)])
                }
            };
            let presentations = pres.iter().map(PresentationFile::from_presentation).collect();
            Ok((json(&Emitted { kind, presentations })?, 0))
        }
    }
}

fn ext2(config: &Config, cmd: &Ext2) -> Out {
    let cap = config.cap;
    match cmd {
        Ext2::Check { triple, cocycle } => {
            let ctx = ExtensionContext::with_cap(&assoc_triple(config, triple)?, cap)?;
            let z = TwoCocycle::from_json(&read_json::<TwoCocycleJson>(cocycle)?)?;
            let v = ctx.check_z2(&z)?;
            Ok((show(&v, config)?, if v.is_cocycle { 0 } else { 1 }))
        }
        Ext2::Build { triple, cocycle } => {
            let ctx = ExtensionContext::with_cap(&assoc_triple(config, triple)?, cap)?;
            let z = TwoCocycle::from_json(&read_json::<TwoCocycleJson>(cocycle)?)?;
            Ok((json(&ctx.build_extension(&z)?.to_json())?, 0))
        }
        Ext2::Extract { triple, extension, section } => {
            let ctx = ExtensionContext::with_cap(&assoc_triple(config, triple)?, cap)?;
            let ext = ctx.load_extension(&read_json::<ExtensionJson>(extension)?)?;
            Ok((json(&ctx.extract_cocycle2(&ext, (*section).into())?.to_json())?, 0))
        }
        Ext2::Classify { triple } => {
            let ctx = ExtensionContext::with_cap(&assoc_triple(config, triple)?, cap)?;
            let c = ctx.classify_bruteforce()?;
            if !c.consistent() {
                return Err(Failure::Internal(format!("{} classes but dim H^2 = {}", c.classes, c.h2_dim)));
            }
            Ok((show(&c, config)?, 0))
        }
    }
}

fn ext3(config: &Config, cmd: &Ext3) -> Out {
    let cap = config.cap;
    match cmd {
        Ext3::Check { triple, cocycle } => {
            let ctx = ExtensionContext::with_cap(&assoc_triple(config, triple)?, cap)?;
            let z = ThreeCocycle::from_json(&read_json::<ThreeCocycleJson>(cocycle)?)?;
            let v = ctx.check_z3(&z)?;
            Ok((show(&v, config)?, if v.is_cocycle { 0 } else { 1 }))
        }
        Ext3::FromCrossed { triple, crossed, section } => {
            let ctx = ExtensionContext::with_cap(&assoc_triple(config, triple)?, cap)?;
            let ce = ctx.load_crossed(&read_json::<CrossedJson>(crossed)?)?;
            Ok((json(&ctx.crossed_to_cocycle(&ce, (*section).into())?.to_json())?, 0))
        }
    }
}

fn run(cli: &Cli) -> Out {
    let config = &cli.config;
    let (n, cap) = (config.n, config.cap);
    match &cli.command {
        Command::Validate { files } => validate_files(config, files),
        Command::Cohomology { triple, lie: false } => {
            let t = assoc_triple(config, triple)?;
            Ok((show(&cohomology(&total_complex(&t, n, cap)?), config)?, 0))
        }
        Command::Cohomology { triple, lie: true } => {
            let t = lie_triple(config, triple)?;
            Ok((show(&lie_cohomology(&t, n, cap)?, config)?, 0))
        }
        Command::Hochschild { r, m, over_a } => {
            let (r, m) = (parse_ref(r)?, parse_ref(m)?);
            let report = match over_a {
                Some(a) => {
                    let a = parse_ref(a)?;
                    let t = Resolver::new(config, &[&a, &r, &m]).assoc([&a, &r, &m])?;
                    hochschild_over_a(&t, n, cap)?
                }
                None => {
                    let res = Resolver::new(config, &[&r, &m]);
                    let k = Ref::Builtin("base_field".into(), vec![]);
                    let t = res.assoc([&k, &r, &m])?;
                    debug_assert_eq!(t.a, base_field(res.field));
                    hochschild_over_k(&t.r, &t.m, n, cap)?
                }
            };
            Ok((show(&report, config)?, 0))
        }
        Command::Compare { triple, lie: false } => {
            let t = assoc_triple(config, triple)?;
            Ok((show(&Comparison::new(&t, n, cap)?.verdict()?, config)?, 0))
        }
        Command::Compare { triple, lie: true } => {
            let t = lie_triple(config, triple)?;
            Ok((show(&lie_alpha(&t, n, cap)?, config)?, 0))
        }
        Command::Ext2(cmd) => ext2(config, cmd),
        Command::Ext3(cmd) => ext3(config, cmd),
        Command::Builtin(cmd) => builtin(config, cmd),
        Command::Selftest => {
            let report = selftest::run(config.seed);
            let code = if report.internal_failure() {
                2
            } else if report.passed() {
                0
            } else {
                1
            };
            Ok((show(&report, config)?, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(f) => {
            let (code, kind, msg) = match f {
                Failure::Usage(m) => (64, "usage error", m),
                Failure::Invalid(m) => (1, "invalid input", m),
                Failure::Internal(m) => (2, "internal error", m),
            };
            eprintln!("algcohom: {kind}: {msg}");
            ExitCode::from(code)
        }
    }
}
