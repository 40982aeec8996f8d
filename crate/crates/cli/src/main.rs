use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use cubforge_core::analysis::{
    builtin_identity, extract_embedding, identity_check, rule_to_identity, sharpness, verify_exactness, verify_invariants,
    SymmetricIdentity, BUILTIN_IDENTITIES,
};
use cubforge_core::constructor::{
    candidate_a, index6_obstruction, p4_certificate, search_positive, solve_degree4, solve_degree5, ConstructError,
    Degree4Problem, Degree5Problem, Family, RuleSolution, SearchConfig,
};
use cubforge_core::reduction::{
    design_4_11_5_1, reduced_node_count, victoir_simplex, victoir_sphere, Assignment, CombinatorialDesign, DesignSpec,
    OaSpec, OrthogonalArray, SpecAssignment,
};
use cubforge_core::rule::{CubatureRule, Domain, Exactness, Group};
use cubforge_core::scalar::ExactScalar;
use cubforge_core::symmetry::WeightExponent;
use cubforge_cli::report;

/// Like `println!`, but a closed pipe ends the process quietly.
macro_rules! out {
    ($($arg:tt)*) => {
        emit(format_args!("{}\n", format_args!($($arg)*)))
    };
}

macro_rules! out_raw {
    ($($arg:tt)*) => {
        emit(format_args!($($arg)*))
    };
}

fn emit(args: std::fmt::Arguments) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_fmt(args) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("writing to stdout: {e}");
    }
}

#[derive(Debug, Error)]
enum CliError {
    /// Bad flags, unreadable or malformed files, singular systems.
    #[error("{0}")]
    Input(String),
    /// The computation ran but the result is not verified or not positive.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "cubforge", version, about = "Exact symmetric cubature rules on the simplex and the sphere")]
struct Cli {
    /// Worker threads (default: CUBFORGE_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Add decimal approximations, marked "approx", next to exact values.
    #[arg(long, global = true)]
    float: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the orbit weights of a rule and write it out.
    Construct(ConstructArgs),
    /// Check a rule file for exactness.
    Verify(VerifyArgs),
    /// Lift a simplex rule to the sphere.
    ToSphere(ToSphereArgs),
    /// Replace orbits by design blocks and orthogonal-array rows.
    Reduce(ReduceArgs),
    /// List the isometric embedding given by an index-2t sphere rule.
    Embed(EmbedArgs),
    /// Check an integer identity or derive one from a rule.
    Identity(IdentityArgs),
    /// Index-6 obstruction and the degree-4 positivity certificate.
    Obstruct(ObstructArgs),
    /// Search the parameter families for positive rules.
    Search(SearchArgs),
    /// Recompute every published claim and print the verdicts.
    Report(ReportArgs),
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_parser = ["4", "5"])]
    degree: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    gamma: String,
    #[arg(long)]
    d: usize,
    /// Orbit sizes, e.g. `6,1,2,3`.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Number of ones in the u orbit (default d).
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "family")]
    a: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    rule: PathBuf,
    #[arg(long, conflicts_with = "degree")]
    index: Option<u32>,
    #[arg(long)]
    degree: Option<u32>,
    /// Also check that the rule fails one level higher.
    #[arg(long)]
    sharp: bool,
    /// Cross-check with the invariant-polynomial route.
    #[arg(long)]
    invariants: bool,
}

#[derive(Args)]
struct ToSphereArgs {
    rule: PathBuf,
    /// Keep one node per antipodal pair.
    #[arg(long)]
    antipodal: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    rule: PathBuf,
    /// Design file, or `builtin:4-11-5-1`.
    #[arg(long)]
    design: Option<String>,
    /// Orbit the design replaces (default: the first one it fits).
    #[arg(long)]
    orbit: Option<usize>,
    /// Orthogonal-array file.
    #[arg(long)]
    oa: Option<PathBuf>,
    #[arg(long)]
    oa_orbit: Option<usize>,
    /// Count only: `ORBIT=t-(v,k,λ)`, repeatable.
    #[arg(long)]
    count_design: Vec<String>,
    /// Count only: `ORBIT=L,l,s` or `ORBIT=L,l,s,antipodal`, repeatable.
    #[arg(long)]
    count_oa: Vec<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    rule: PathBuf,
    #[arg(long)]
    t: u32,
    /// Print every vector.
    #[arg(long)]
    list: bool,
    /// Expand the embedding identity monomial by monomial.
    #[arg(long)]
    certify: bool,
}

#[derive(Args)]
struct IdentityArgs {
    /// Bundled name or identity file.
    #[arg(long, conflicts_with = "from_rule")]
    check: Option<String>,
    /// Sphere rule to turn into an identity.
    #[arg(long)]
    from_rule: Option<PathBuf>,
    #[arg(long, requires = "from_rule")]
    t: Option<u32>,
    #[arg(long)]
    json: bool,
    /// List the bundled identities.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct ObstructArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    gamma: String,
    /// Also print the degree-4 certificate up to this d.
    #[arg(long)]
    p4: Option<usize>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_parser = ["4", "5"])]
    degree: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    gamma: String,
    #[arg(long, default_value_t = 3)]
    d_min: usize,
    #[arg(long)]
    d_max: usize,
    /// Family ids (default: every family of this degree).
    #[arg(long, value_delimiter = ',')]
    family: Vec<String>,
    #[arg(long)]
    max_m: Option<usize>,
    /// Only the closed-form values of a.
    #[arg(long)]
    closed_forms_only: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Criteria to run (default: all).
    #[arg(long, value_delimiter = ',')]
    criterion: Vec<u8>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(e.code());
    }
    let float = cli.float;
    let result = match cli.command {
        Command::Construct(a) => construct(a, float),
        Command::Verify(a) => verify(a),
        Command::ToSphere(a) => to_sphere(a, float),
        Command::Reduce(a) => reduce(a, float),
        Command::Embed(a) => embed(a, float),
        Command::Identity(a) => identity(a),
        Command::Obstruct(a) => obstruct(a),
        Command::Search(a) => search(a, float),
        Command::Report(a) => run_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("CUBFORGE_THREADS") {
            Ok(s) if !s.trim().is_empty() => {
                Some(s.trim().parse().map_err(|_| CliError::Input(format!("CUBFORGE_THREADS={s} is not a count")))?)
            }
            _ => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::Input("thread count must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(CliError::input)?;
    }
    Ok(())
}

fn scalar(x: &ExactScalar, float: bool) -> String {
    if float {
        format!("{x} (approx {:.12e})", x.to_f64())
    } else {
        x.to_string()
    }
}

fn parse_gamma(s: &str) -> Result<WeightExponent> {
    s.parse().map_err(|e| CliError::Input(format!("--gamma {s}: {e}")))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_rule(path: &Path) -> Result<CubatureRule> {
    CubatureRule::from_json(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn save_or_print(rule: &CubatureRule, out: Option<&Path>) -> Result<()> {
    let json = rule.to_json().map_err(CliError::input)?;
    match out {
        Some(p) => write(p, &json),
        None => {
            out!("{json}");
            Ok(())
        }
    }
}

fn print_rule(rule: &CubatureRule, float: bool) {
    out!("domain: {}  d: {}  gamma: {}  exactness: {}", rule.domain(), rule.dim(), rule.gamma(), rule.exactness());
    for (i, o) in rule.orbits().iter().enumerate() {
        let coords: Vec<String> = o.point.coords().iter().map(|c| c.to_string()).collect();
        let signs = match o.point.group() {
            Group::SignedPoint(s) => format!(" signs {s:?}"),
            _ => String::new(),
        };
        out!(
            "  orbit {i}: {} [{}]{signs} x{}  weight {}",
            o.point.group().name(),
            coords.join(", "),
            o.point.cardinality(),
            scalar(&o.weight, float)
        );
    }
    out!("nodes: {}", rule.node_count());
    for p in rule.provenance() {
        out!("provenance: {p}");
    }
}

fn construct_error(e: ConstructError) -> CliError {
    CliError::Input(e.to_string())
}

fn construct(args: ConstructArgs, float: bool) -> Result<()> {
    let gamma = parse_gamma(&args.gamma)?;
    let d = args.d;
    let p = args.p.unwrap_or(d);
    let family: Option<Family> = args.family.as_deref().map(str::parse).transpose().map_err(construct_error)?;
    let ks = if !args.k.is_empty() {
        args.k.clone()
    } else if let Some(f) = family {
        f.ks(d, args.m.unwrap_or(0))
    } else if args.degree == "5" {
        let m = args.m.ok_or_else(|| CliError::Input("degree 5 needs --k or --m".into()))?;
        vec![d + 1, 1, 2, 3, m]
    } else {
        return Err(CliError::Input("give --k, or --family with --m".into()));
    };
    let sol: RuleSolution = if args.degree == "5" {
        if args.a.is_some() {
            return Err(CliError::Input("a is forced at degree 5; drop --a".into()));
        }
        solve_degree5(&Degree5Problem { d, gamma, ks, p }).map_err(construct_error)?
    } else {
        let a = match (&args.a, family) {
            (Some(s), _) => s.parse::<ExactScalar>().map_err(|e| CliError::Input(format!("--a {s}: {e}")))?,
            (None, Some(f)) => candidate_a(f.id(), d, args.m.unwrap_or(0), p).map_err(construct_error)?,
            (None, None) => return Err(CliError::Input("degree 4 needs --a or --family".into())),
        };
        solve_degree4(&Degree4Problem { d, gamma, ks, p, a }).map_err(construct_error)?
    };
    out!("a = {}", scalar(&sol.a, float));
    for (i, w) in sol.weights.iter().enumerate() {
        out!("lambda_{} = {}", i + 1, scalar(w, float));
    }
    out!("nodes: {}", sol.rule.node_count());
    let positive = sol.is_positive();
    out!("positive: {}", if positive { "yes" } else { "no" });
    let report = verify_exactness(&sol.rule, sol.rule.exactness()).map_err(CliError::input)?;
    out!("verified: {} ({} monomials)", if report.passed { "yes" } else { "no" }, report.monomials_covered);
    if let Some(out) = &args.out {
        save_or_print(&sol.rule, Some(out))?;
        // Round trip through the file format must give the same rule.
        let back = load_rule(out)?;
        if back != sol.rule {
            return Err(CliError::Failed("rule file does not read back identically".into()));
        }
    }
    if !positive {
        return Err(CliError::Failed(format!("weights {:?} are negative", sol.negative().iter().map(|i| i + 1).collect::<Vec<_>>())));
    }
    if !report.passed {
        return Err(CliError::Failed("rule fails exactness".into()));
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<()> {
    let rule = load_rule(&args.rule)?;
    let target = match (args.index, args.degree) {
        (Some(t), _) => Exactness::Index(t),
        (_, Some(n)) => Exactness::Degree(n),
        _ => rule.exactness(),
    };
    let mut ok = true;
    let report = verify_exactness(&rule, target).map_err(CliError::input)?;
    out!("{target}: {} ({} monomials)", if report.passed { "exact" } else { "not exact" }, report.monomials_covered);
    if let Some(w) = &report.first_failure {
        out!("  first failure at {:?}: expected {}, rule gives {}", w.exponents, w.expected, w.computed);
    }
    ok &= report.passed;
    if args.sharp {
        let s = sharpness(&rule).map_err(CliError::input)?;
        out!("sharp: {} (next level {} {})", if s.is_sharp() { "yes" } else { "no" }, s.next.target, if s.next.passed { "exact" } else { "not exact" });
        ok &= s.is_sharp();
    }
    if args.invariants {
        let inv = verify_invariants(&rule, target).map_err(CliError::input)?;
        out!("invariants: {} ({} partitions)", if inv.passed { "exact" } else { "not exact" }, inv.residuals.len());
        ok &= inv.passed == report.passed;
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed("verification failed".into()))
    }
}

fn to_sphere(args: ToSphereArgs, float: bool) -> Result<()> {
    let rule = load_rule(&args.rule)?;
    let mut sphere = rule.simplex_to_sphere().map_err(CliError::input)?;
    if args.antipodal {
        sphere = sphere.antipodal_reduce().map_err(CliError::input)?;
    }
    match &args.out {
        Some(out) => {
            save_or_print(&sphere, Some(out))?;
            print_rule(&sphere, float);
        }
        None => save_or_print(&sphere, None)?,
    }
    Ok(())
}

fn load_design(spec: &str) -> Result<CombinatorialDesign> {
    if spec == "builtin:4-11-5-1" {
        return Ok(design_4_11_5_1());
    }
    let path = Path::new(spec);
    read(path)?.parse().map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_count_design(s: &str) -> Result<SpecAssignment> {
    let (orbit, spec) = s.split_once('=').ok_or_else(|| CliError::Input(format!("--count-design {s}: expected ORBIT=SPEC")))?;
    let orbit = orbit.trim().parse().map_err(|_| CliError::Input(format!("--count-design {s}: bad orbit")))?;
    let spec: DesignSpec = spec.parse().map_err(|e| CliError::Input(format!("--count-design {s}: {e}")))?;
    Ok(SpecAssignment::design(orbit, spec))
}

fn parse_count_oa(s: &str) -> Result<(usize, OaSpec)> {
    let bad = || CliError::Input(format!("--count-oa {s}: expected ORBIT=L,l,s[,antipodal]"));
    let (orbit, spec) = s.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() < 3 || parts.len() > 4 || parts.get(3).is_some_and(|x| *x != "antipodal") {
        return Err(bad());
    }
    let orbit = orbit.trim().parse().map_err(|_| bad())?;
    let rows = parts[0].parse().map_err(|_| bad())?;
    let cols = parts[1].parse().map_err(|_| bad())?;
    let strength = parts[2].parse().map_err(|_| bad())?;
    Ok((orbit, OaSpec::new(rows, cols, strength, parts.len() == 4)))
}

fn reduce(args: ReduceArgs, float: bool) -> Result<()> {
    let rule = load_rule(&args.rule)?;
    if !args.count_design.is_empty() || !args.count_oa.is_empty() {
        let mut specs: Vec<SpecAssignment> = args.count_design.iter().map(|s| parse_count_design(s)).collect::<Result<_>>()?;
        for s in &args.count_oa {
            let (orbit, oa) = parse_count_oa(s)?;
            match specs.iter_mut().find(|a| a.orbit == orbit) {
                Some(a) => a.oa = Some(oa),
                None => specs.push(SpecAssignment { orbit, design: None, oa: Some(oa) }),
            }
        }
        let n = reduced_node_count(&rule, &specs).map_err(CliError::input)?;
        out!("nodes: {} → {n}", rule.node_count());
        return Ok(());
    }
    let design = args.design.as_deref().map(load_design).transpose()?;
    let oa: Option<OrthogonalArray> = match &args.oa {
        Some(p) => Some(read(p)?.parse().map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?),
        None => None,
    };
    if design.is_none() && oa.is_none() {
        return Err(CliError::Input("give --design or --oa (or --count-design/--count-oa)".into()));
    }
    let mut assignments: Vec<Assignment> = Vec::new();
    if let Some(d) = &design {
        let orbit = match args.orbit {
            Some(o) => o,
            None => (0..rule.orbits().len())
                .find(|&i| reduced_node_count(&rule, &[SpecAssignment::design(i, d.spec())]).is_ok())
                .ok_or_else(|| CliError::Input(format!("no orbit of the rule fits {}", d.spec())))?,
        };
        assignments.push(Assignment::design(orbit, d));
    }
    if let Some(a) = &oa {
        let orbit = args.oa_orbit.ok_or_else(|| CliError::Input("--oa needs --oa-orbit".into()))?;
        match assignments.iter_mut().find(|x| x.orbit == orbit) {
            Some(x) => x.oa = Some(a),
            None => assignments.push(Assignment::oa(orbit, a)),
        }
    }
    let reduced = match rule.domain() {
        Domain::Simplex => victoir_simplex(&rule, &assignments),
        Domain::Sphere => victoir_sphere(&rule, &assignments),
    }
    .map_err(|e| match e {
        cubforge_core::reduction::ReductionError::Verification { .. } => CliError::Failed(e.to_string()),
        _ => CliError::input(e),
    })?;
    out!("nodes: {} → {}", rule.node_count(), reduced.node_count());
    match &args.out {
        Some(out) => {
            save_or_print(&reduced, Some(out))?;
            print_rule(&reduced, float);
        }
        None => print_rule(&reduced, float),
    }
    Ok(())
}

fn embed(args: EmbedArgs, float: bool) -> Result<()> {
    let rule = load_rule(&args.rule)?;
    let spec = extract_embedding(&rule, args.t).map_err(|e| match e {
        cubforge_core::analysis::EmbeddingError::NotExact(_) => CliError::Failed(e.to_string()),
        _ => CliError::input(e),
    })?;
    out!("l_2^{} → l_{}^{}", spec.d_ambient, spec.power, spec.len());
    out!("c_t = {}", cubforge_core::scalar::format_rational(&spec.constant));
    if args.list {
        for v in &spec.vectors {
            let coords: Vec<String> = v
                .squared
                .iter()
                .zip(&v.signs)
                .map(|(q, s)| if q.is_zero() { "0".into() } else { format!("{}sqrt({q})", if *s < 0 { "-" } else { "" }) })
                .collect();
            out!("({})^(1/{}) * ({})", scalar(&v.factor, float), spec.power, coords.join(", "));
        }
    }
    if args.certify {
        let check = spec.certify().map_err(CliError::input)?;
        match check.first_failure {
            None => out!("certified: Σ <x, r_i>^{} = |x|^{}", spec.power, spec.power),
            Some(e) => return Err(CliError::Failed(format!("embedding fails at monomial {e:?}"))),
        }
    }
    Ok(())
}

fn load_identity(name: &str) -> Result<SymmetricIdentity> {
    if let Some(id) = builtin_identity(name) {
        return Ok(id);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(CliError::Input(format!("{name}: not a bundled identity ({}) or a file", BUILTIN_IDENTITIES.join(", "))));
    }
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with('{') { SymmetricIdentity::from_json(&text) } else { text.parse() };
    parsed.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn identity(args: IdentityArgs) -> Result<()> {
    if args.list {
        for name in BUILTIN_IDENTITIES {
            out!("{name}");
        }
        return Ok(());
    }
    let id = match (&args.check, &args.from_rule) {
        (Some(name), _) => load_identity(name)?,
        (None, Some(path)) => {
            let rule = load_rule(path)?;
            let t = args.t.ok_or_else(|| CliError::Input("--from-rule needs --t".into()))?;
            rule_to_identity(&rule, t).map_err(CliError::input)?
        }
        (None, None) => return Err(CliError::Input("give --check, --from-rule or --list".into())),
    };
    if args.json {
        out!("{}", id.to_json().map_err(CliError::input)?);
    } else {
        out_raw!("{id}");
    }
    let report = identity_check(&id);
    match &report.first_difference {
        None => {
            out!("check: pass ({} monomials)", report.monomials);
            Ok(())
        }
        Some((e, l, r)) => {
            out!("check: fail at exponent {e:?}: left {l}, right {r}");
            Err(CliError::Failed("identity does not hold".into()))
        }
    }
}

fn obstruct(args: ObstructArgs) -> Result<()> {
    let gamma = parse_gamma(&args.gamma)?;
    out!("{}", index6_obstruction(&gamma));
    if let Some(max_d) = args.p4 {
        let mut ok = true;
        for d in 1..=max_d {
            let c = p4_certificate(d, &gamma);
            ok &= c.holds();
            out!(
                "d = {d}: integral {}, min value {}",
                cubforge_core::scalar::format_rational(&c.integral),
                c.values.iter().min().map(cubforge_core::scalar::format_rational).unwrap_or_default()
            );
        }
        if !ok {
            return Err(CliError::Failed("certificate fails".into()));
        }
        out!("certificate holds for d = 1..{max_d}");
    }
    Ok(())
}

fn search(args: SearchArgs, float: bool) -> Result<()> {
    let gamma = parse_gamma(&args.gamma)?;
    let degree: u32 = args.degree.parse().map_err(CliError::input)?;
    let families: Vec<Family> = if args.family.is_empty() {
        Family::ALL.iter().copied().filter(|f| f.degree() == degree).collect()
    } else {
        args.family.iter().map(|s| s.parse()).collect::<std::result::Result<_, _>>().map_err(construct_error)?
    };
    if args.d_min > args.d_max {
        return Err(CliError::Input("--d-min exceeds --d-max".into()));
    }
    let mut cfg = SearchConfig::new(degree, gamma, args.d_min..=args.d_max, families);
    cfg.max_m = args.max_m;
    cfg.use_zero_weight_roots = !args.closed_forms_only;
    let hits = search_positive(&cfg);
    for h in &hits {
        let weights: Vec<String> = h.solution.weights.iter().map(|w| scalar(w, float)).collect();
        out!(
            "{} d={} m={} p={} a={} nodes={} weights=({})",
            h.family,
            h.d,
            h.m,
            h.p,
            scalar(h.a(), float),
            h.solution.rule.node_count(),
            weights.join(", ")
        );
    }
    out!("{} positive rules", hits.len());
    Ok(())
}

fn run_report(args: ReportArgs) -> Result<()> {
    if let Some(bad) = args.criterion.iter().find(|c| !report::CRITERIA.contains(c)) {
        return Err(CliError::Input(format!("no criterion {bad}")));
    }
    let r = report::run(&args.criterion);
    if args.json {
        out!("{}", serde_json::to_string_pretty(&r).map_err(CliError::input)?);
    } else {
        out!("{r}");
    }
    if r.all_passed() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} claims failed", r.failed())))
    }
}
