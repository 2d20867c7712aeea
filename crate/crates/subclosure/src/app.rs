//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use subclosure_core::blockmodel::{self, certify, proper_subsets, BlockSystem};
use subclosure_core::images::{
    self, cycle_alpha, douglas_factor, ibap_check, m_membership_identity, p_radius, product_bound,
    quadratic_projector_criterion, sum_of_images, OperatorFamily,
};
use subclosure_core::pairs::{friedrichs_angle, halmos_decompose, independent_pair_constants, pair_criteria};
use subclosure_core::paircalc::{calculus_criteria, spectrum_of_b, CalculusProfile, FunctionQuad};
use subclosure_core::reduction::{independence_certificate, reduce_preserving_sum, reduce_system, rps_margin};
use subclosure_core::sample::Sampler;
use subclosure_core::systems::{complement_graph_margin, linear_combination_check, sum_gap, PhaseSearch, WeightedGraph};
use subclosure_core::{CMatrix, Tolerances};

use crate::format::{self, cx_vec, Cx, InputError, SystemJson};
use crate::report::{error_json, num, Report};

#[derive(Debug, Parser)]
#[command(name = "subclosure", version, about = "Closedness diagnostics for sums of subspaces")]
pub struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for sampled estimators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print a human summary to stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[arg(long, global = true)]
    pub rank_tol: Option<f64>,
    #[arg(long, global = true)]
    pub eig_tol: Option<f64>,
    #[arg(long, global = true)]
    pub margin_tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Canonical decomposition and closedness criteria of a pair.
    Pair(PairArgs),
    /// Spectral criteria for b = f₁(a)P₁ + f₂(a)P₂ + … in the pair calculus.
    Calculus(CalculusArgs),
    /// Spectral gap, independence and related bounds for a system.
    System(SystemArgs),
    /// Graph margins on the complements of a system.
    Graph(GraphArgs),
    /// Shrink a system to an independent one with a certified bound.
    Reduce(ReduceArgs),
    /// Operator-range criteria.
    #[command(subcommand)]
    Images(ImagesCommand),
    /// Horizon-relative closedness verdicts for a block family.
    Blocks(BlocksArgs),
    /// Blockwise rewrite of a sum of subspaces as a sum of two.
    SumAsTwo(FamilyArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct PairArgs {
    /// Subspace JSON for H₁.
    #[arg(long)]
    pub a: PathBuf,
    /// Subspace JSON for H₂.
    #[arg(long)]
    pub b: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct CalculusArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Polynomial quadruple JSON; defaults to f₁ = f₂ = 1, f₃ = f₄ = 0.
    #[arg(long)]
    pub quad: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SystemArgs {
    #[arg(long)]
    pub system: PathBuf,
    /// Positive coefficients for the linear-combination bound.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    /// Prefix length m for the RPS(H, m, n) margin.
    #[arg(long)]
    pub rps: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphShape {
    Complete,
    Path,
    Cycle,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphArgs {
    #[arg(long)]
    pub system: PathBuf,
    /// Weighted graph JSON with 1-based vertices.
    #[arg(long, conflicts_with = "shape", required_unless_present = "shape")]
    pub graph: Option<PathBuf>,
    /// Built-in unit-weight graph on the members.
    #[arg(long, value_enum)]
    pub shape: Option<GraphShape>,
    #[arg(long, default_value_t = 64)]
    pub phases: usize,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct ReduceArgs {
    #[arg(long)]
    pub system: PathBuf,
    /// Keep H₁ + M₂ + … + Mₙ equal to the original sum.
    #[arg(long)]
    pub preserve_sum: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImagesCommand {
    /// Factor A = BC when Im A ⊆ Im B.
    Douglas(DouglasArgs),
    /// Σ Im aₖ as the image of √(Σ aₖaₖ*).
    Sum(SumArgs),
    /// Product inequality for E = (I − Tₙ)…(I − T₁) on sampled vectors.
    ProductBound(ProductBoundArgs),
    /// Averaged p-norms of products of I − Tₖ.
    PRadius(PRadiusArgs),
    /// Residual of the square-root membership identity.
    Membership(OpsArgs),
    /// Criteria for Σ αᵢⱼ PᵢPⱼ and its β-matrix.
    Quadratic(QuadraticArgs),
    /// Inverse best approximation property.
    Ibap(IbapArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct DouglasArgs {
    /// Operator JSON holding A.
    #[arg(long)]
    pub a: PathBuf,
    /// Operator JSON holding B.
    #[arg(long)]
    pub b: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct OpsArgs {
    #[arg(long)]
    pub ops: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SumArgs {
    /// Operator JSON.
    #[arg(long, conflicts_with = "system", required_unless_present = "system")]
    pub ops: Option<PathBuf>,
    /// Use the projectors of this system.
    #[arg(long)]
    pub system: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ProductBoundArgs {
    #[arg(long)]
    pub ops: PathBuf,
    /// Number of random test vectors.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PRadiusArgs {
    #[arg(long)]
    pub ops: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Cap on matrix multiplications.
    #[arg(long, default_value_t = images::DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Debug, Args, Serialize)]
pub struct QuadraticArgs {
    #[arg(long)]
    pub system: PathBuf,
    /// Coefficient matrix JSON.
    #[arg(long, conflicts_with = "cycle", required_unless_present = "cycle")]
    pub alpha: Option<PathBuf>,
    /// Use the unit cycle family A = ΣPᵢ − ΣPᵢP_{i+1}.
    #[arg(long)]
    pub cycle: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct IbapArgs {
    #[arg(long)]
    pub system: PathBuf,
    /// Operators A₁..Aₙ with Im Aₖ ⊆ Hₖ; defaults to the projectors.
    #[arg(long)]
    pub ops: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct FamilyArgs {
    /// Built-in family name.
    #[arg(long, required_unless_present = "spec", conflicts_with = "spec")]
    pub family: Option<String>,
    /// Family spec JSON.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub rate: Option<f64>,
    /// Number of members.
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of materialized blocks.
    #[arg(long)]
    pub horizon: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct BlocksArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub family: FamilyArgs,
    /// `all`, `proper`, or a comma-separated list of 1-based members.
    #[arg(long, default_value = "all")]
    pub subset: String,
}

/// Result of one invocation: exit code, the text for stdout or `--out`, and
/// diagnostics for stderr.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub out: Option<PathBuf>,
    pub diagnostics: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
enum Failure {
    Input(InputError),
    Core(subclosure_core::Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Core(c) => Failure::Core(c),
            other => Failure::Input(other),
        }
    }
}

impl From<subclosure_core::Error> for Failure {
    fn from(e: subclosure_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn parts(&self) -> (i32, &'static str, String) {
        match self {
            Failure::Input(e @ InputError::Io { .. }) => (EXIT_IO, "io", e.to_string()),
            Failure::Input(e @ InputError::Parse { .. }) => (EXIT_IO, "parse", e.to_string()),
            Failure::Input(InputError::Core(e)) | Failure::Core(e) => (EXIT_PRECONDITION, e.kind(), e.to_string()),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, output: rendered, out: None, diagnostics: String::new() }
            } else {
                Outcome { code, output: String::new(), out: None, diagnostics: rendered }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => Outcome {
            code: EXIT_OK,
            output: report.to_json(),
            out: cli.out.clone(),
            diagnostics: if cli.verbose { report.summary() } else { String::new() },
        },
        Err(f) => {
            let (code, kind, message) = f.parts();
            Outcome {
                code,
                output: error_json(kind, &message, code),
                out: cli.out.clone(),
                diagnostics: format!("error: {message}\n"),
            }
        }
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances, Failure> {
    let d = Tolerances::default();
    Ok(Tolerances::new(
        cli.rank_tol.unwrap_or(d.rank_tol),
        cli.eig_tol.unwrap_or(d.eig_tol),
        cli.margin_tol.unwrap_or(d.margin_tol),
    )?)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Pair(_) => "pair",
        Command::Calculus(_) => "calculus",
        Command::System(_) => "system",
        Command::Graph(_) => "graph",
        Command::Reduce(_) => "reduce",
        Command::Images(i) => match i {
            ImagesCommand::Douglas(_) => "images douglas",
            ImagesCommand::Sum(_) => "images sum",
            ImagesCommand::ProductBound(_) => "images product-bound",
            ImagesCommand::PRadius(_) => "images p-radius",
            ImagesCommand::Membership(_) => "images membership",
            ImagesCommand::Quadratic(_) => "images quadratic",
            ImagesCommand::Ibap(_) => "images ibap",
        },
        Command::Blocks(_) => "blocks",
        Command::SumAsTwo(_) => "sum-as-two",
    }
}

fn execute(cli: &Cli) -> Result<Report, Failure> {
    let tol = tolerances(cli)?;
    let mut rep = Report::new(command_name(&cli.command), &cli.command, &tol, cli.seed);
    match &cli.command {
        Command::Pair(a) => pair(a, &tol, &mut rep)?,
        Command::Calculus(a) => calculus(a, &tol, &mut rep)?,
        Command::System(a) => system(a, &tol, &mut rep)?,
        Command::Graph(a) => graph(a, cli.seed, &tol, &mut rep)?,
        Command::Reduce(a) => reduce(a, &tol, &mut rep)?,
        Command::Images(i) => match i {
            ImagesCommand::Douglas(a) => douglas(a, &tol, &mut rep)?,
            ImagesCommand::Sum(a) => image_sum(a, &tol, &mut rep)?,
            ImagesCommand::ProductBound(a) => product(a, cli.seed, &tol, &mut rep)?,
            ImagesCommand::PRadius(a) => pradius(a, &tol, &mut rep)?,
            ImagesCommand::Membership(a) => {
                let f = format::load_operators(&a.ops, &tol)?;
                rep.value("residual", m_membership_identity(&f, &tol)?);
            }
            ImagesCommand::Quadratic(a) => quadratic(a, &tol, &mut rep)?,
            ImagesCommand::Ibap(a) => ibap(a, &tol, &mut rep)?,
        },
        Command::Blocks(a) => blocks(a, &tol, &mut rep)?,
        Command::SumAsTwo(a) => sum_as_two(a, &tol, &mut rep)?,
    }
    Ok(rep)
}

fn matrix_json(m: &CMatrix) -> Vec<Vec<Cx>> {
    (0..m.rows()).map(|i| cx_vec(&m.row(i))).collect()
}

fn pair(a: &PairArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let h1 = format::load_subspace(&a.a, tol)?;
    let h2 = format::load_subspace(&a.b, tol)?;
    let dec = halmos_decompose(&h1, &h2, tol)?;
    rep.absorb("", &pair_criteria(&h1, &h2, tol)?);
    rep.absorb("", &independent_pair_constants(&h1, &h2, tol)?);
    let angle = friedrichs_angle(&h1, &h2, tol)?;
    rep.value("friedrichs_angle", angle);
    rep.value("friedrichs_cos_squared", dec.a.last().copied().unwrap_or(0.0));
    rep.note(format!("friedrichs angle {angle:.12}"));
    let [both, first, second, neither, generic] = dec.dims();
    rep.artifact(
        "decomposition",
        json!({
            "both": both,
            "first_only": first,
            "second_only": second,
            "neither": neither,
            "generic": generic,
            "a": dec.a.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        }),
    );
    Ok(())
}

fn calculus(a: &CalculusArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let h1 = format::load_subspace(&a.a, tol)?;
    let h2 = format::load_subspace(&a.b, tol)?;
    let q = match &a.quad {
        Some(p) => format::load_quad(p)?,
        None => FunctionQuad::projector_sum(),
    };
    let dec = halmos_decompose(&h1, &h2, tol)?;
    rep.absorb("", &calculus_criteria(&dec, &q, tol)?);
    let profile = CalculusProfile::new(&q, tol);
    rep.flag("t_constant", profile.c.is_some());
    if let Some(c) = profile.c {
        rep.artifact("t_constant", Cx(c));
    }
    rep.artifact("spectrum", cx_vec(&spectrum_of_b(&dec, &q)));
    Ok(())
}

fn system(a: &SystemArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let s = format::load_system(&a.system, tol)?;
    rep.absorb("", &sum_gap(&s, tol)?);
    let ind = independence_certificate(&s, tol)?;
    rep.value("independence_epsilon", ind.epsilon);
    rep.flag("independent", ind.independent);
    if let Some(alpha) = &a.alpha {
        rep.absorb("linear_combination", &linear_combination_check(&s, alpha, tol)?);
    }
    if let Some(m) = a.rps {
        rep.absorb("rps", &rps_margin(&s, m, tol)?);
    }
    Ok(())
}

fn graph(a: &GraphArgs, seed: u64, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let s = format::load_system(&a.system, tol)?;
    let g = match (&a.graph, a.shape) {
        (Some(p), _) => format::load_graph(p)?,
        (None, Some(GraphShape::Complete)) => WeightedGraph::complete(s.len()),
        (None, Some(GraphShape::Path)) => WeightedGraph::path(s.len()),
        (None, Some(GraphShape::Cycle)) => WeightedGraph::cycle(s.len()),
        (None, None) => unreachable!("clap requires a graph or a shape"),
    };
    let search = PhaseSearch { phases_per_restart: a.phases, restarts: a.restarts, seed };
    rep.absorb("", &complement_graph_margin(&s, &g, tol, &search)?);
    Ok(())
}

fn reduce(a: &ReduceArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let s = format::load_system(&a.system, tol)?;
    let r = if a.preserve_sum { reduce_preserving_sum(&s, tol)? } else { reduce_system(&s, tol)? };
    rep.absorb("", &r.report);
    let c = &r.certificate;
    rep.artifact(
        "certificate",
        json!({
            "epsilon": num(c.epsilon),
            "weights": c.weights.iter().map(|&w| num(w)).collect::<Vec<_>>(),
            "c_n": c.c_n.map(|q| q.to_string()),
            "bound": num(c.bound),
        }),
    );
    rep.artifact("reduced", SystemJson::from_system(&r.reduced));
    Ok(())
}

fn load_single(path: &std::path::Path, tol: &Tolerances) -> Result<CMatrix, Failure> {
    let f = format::load_operators(path, tol)?;
    match f.members() {
        [m] => Ok(m.clone()),
        ms => Err(Failure::Input(InputError::Parse {
            path: path.to_path_buf(),
            message: format!("expected exactly one matrix, found {}", ms.len()),
        })),
    }
}

fn douglas(a: &DouglasArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let ma = load_single(&a.a, tol)?;
    let mb = load_single(&a.b, tol)?;
    let f = douglas_factor(&ma, &mb, tol)?;
    rep.value("lambda", f.lambda);
    rep.value("residual", f.residual);
    rep.value("kernel_distance", f.kernel_distance);
    rep.value("image_residual", f.image_residual);
    rep.value("inclusion_residual", f.inclusion_residual);
    rep.artifact("c", matrix_json(&f.c));
    Ok(())
}

fn image_sum(a: &SumArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let f = match (&a.ops, &a.system) {
        (Some(p), _) => format::load_operators(p, tol)?,
        (None, Some(p)) => OperatorFamily::projectors(&format::load_system(p, tol)?, tol)?,
        (None, None) => unreachable!("clap requires operators or a system"),
    };
    let (image, r) = sum_of_images(&f, tol)?;
    rep.absorb("", &r);
    rep.artifact("image", format::SubspaceJson::from_subspace(&image));
    Ok(())
}

fn product(a: &ProductBoundArgs, seed: u64, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let f = format::load_operators(&a.ops, tol)?;
    let mut rng = Sampler::new(seed);
    let mut worst = f64::INFINITY;
    let mut first = None;
    for _ in 0..a.samples {
        let x = rng.vector(f.ambient_dim());
        let b = product_bound(&f, &x)?;
        first.get_or_insert(b);
        worst = worst.min(b.slack);
    }
    match first {
        Some(b) => {
            rep.value("omega", b.omega);
            rep.value("constant", b.constant);
            rep.push_margin_estimate("product_bound_slack", worst, tol);
        }
        None => return Err(subclosure_core::Error::InvalidArgument("need at least one sample".into()).into()),
    }
    Ok(())
}

fn pradius(a: &PRadiusArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let f = format::load_operators(&a.ops, tol)?;
    let r = p_radius(&f, a.p, a.depth, a.budget, tol)?;
    let best = r.roots.iter().copied().fold(f64::INFINITY, f64::min);
    rep.push_margin("p_radius_certificate", 1.0 - best, tol);
    rep.value("common_kernel_dim", r.common_kernel_dim as f64);
    rep.value("multiplications", r.multiplications as f64);
    rep.note(format!("p-radius verdict {}", r.verdict.as_str()));
    rep.artifact("verdict", r.verdict.as_str());
    rep.artifact("a", r.a.iter().map(|&x| num(x)).collect::<Vec<_>>());
    rep.artifact("roots", r.roots.iter().map(|&x| num(x)).collect::<Vec<_>>());
    Ok(())
}

fn quadratic(a: &QuadraticArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let s = format::load_system(&a.system, tol)?;
    let alpha = match &a.alpha {
        Some(p) => format::load_alpha(p)?,
        None => cycle_alpha(s.len())?,
    };
    let (beta, r) = quadratic_projector_criterion(&s, &alpha, tol)?;
    rep.absorb("", &r);
    rep.note(format!("beta class {}", beta.class.as_str()));
    rep.artifact(
        "beta",
        json!({
            "class": beta.class.as_str(),
            "matrix": beta.beta.chunks(beta.n.max(1)).map(|row| row.iter().map(|&x| num(x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "eigenvalues": beta.eigenvalues.iter().map(|&x| num(x)).collect::<Vec<_>>(),
            "kernel": beta.kernel.as_ref().map(|k| k.iter().map(|&x| num(x)).collect::<Vec<_>>()),
            "connected": beta.connected,
        }),
    );
    Ok(())
}

fn ibap(a: &IbapArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let s = format::load_system(&a.system, tol)?;
    let f = match &a.ops {
        Some(p) => format::load_operators(p, tol)?,
        None => OperatorFamily::projectors(&s, tol)?,
    };
    rep.absorb("", &ibap_check(&s, &f, tol)?);
    Ok(())
}

fn block_system(a: &FamilyArgs, tol: &Tolerances) -> Result<BlockSystem, Failure> {
    let (family, n, horizon) = match &a.spec {
        Some(p) => {
            let spec = format::load_family_spec(p)?;
            let mut fam = spec.family()?;
            if a.rate.is_some() {
                fam = blockmodel::Family::parse(fam.name(), a.rate)?;
            }
            (fam, a.n.unwrap_or(spec.n), a.horizon.unwrap_or(spec.horizon))
        }
        None => {
            let name = a.family.as_deref().unwrap_or_default();
            (blockmodel::Family::parse(name, a.rate)?, a.n.unwrap_or(3), a.horizon.unwrap_or(100))
        }
    };
    if horizon == 0 {
        return Err(subclosure_core::Error::InvalidArgument("horizon must be at least 1".into()).into());
    }
    Ok(blockmodel::block_family(family, n, horizon, tol)?)
}

fn parse_subsets(spec: &str, n: usize) -> Result<Vec<Vec<usize>>, Failure> {
    match spec {
        "all" => Ok(vec![(1..=n).collect()]),
        "proper" => Ok(proper_subsets(n)),
        list => {
            let mut idx = Vec::new();
            for part in list.split(',') {
                let k: usize = part.trim().parse().map_err(|_| {
                    subclosure_core::Error::InvalidArgument(format!("bad subset entry '{part}'"))
                })?;
                if k == 0 || k > n {
                    return Err(subclosure_core::Error::IndexOutOfRange { index: k, len: n }.into());
                }
                idx.push(k);
            }
            idx.sort_unstable();
            idx.dedup();
            Ok(vec![idx])
        }
    }
}

fn subset_label(s: &[usize]) -> String {
    s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn blocks(a: &BlocksArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let bs = block_system(&a.family, tol)?;
    rep.value("horizon", bs.horizon() as f64);
    rep.value("members", bs.n() as f64);
    let mut out = Vec::new();
    for subset in parse_subsets(&a.subset, bs.n())? {
        let v = certify(&bs, &subset, bs.horizon(), tol)?;
        let label = subset_label(&subset);
        rep.push_margin(&format!("inf_gap[{label}]"), v.inf_gap, tol);
        rep.note(format!("[{label}] {} ({})", v.status.as_str(), v.trend.describe()));
        out.push(json!({
            "subset": subset,
            "status": v.status.as_str(),
            "inf_gap": num(v.inf_gap),
            "trend": {
                "slope": num(v.trend.slope),
                "intercept": num(v.trend.intercept),
                "residual": num(v.trend.residual),
                "k_from": v.trend.k_from,
                "k_to": v.trend.k_to,
                "decreasing": v.trend.decreasing,
            },
            "gaps": v.gaps.iter().map(|&g| num(g)).collect::<Vec<_>>(),
        }));
    }
    rep.artifact("family", bs.name());
    rep.artifact("verdicts", out);
    Ok(())
}

fn sum_as_two(a: &FamilyArgs, tol: &Tolerances, rep: &mut Report) -> Result<(), Failure> {
    let bs = block_system(a, tol)?;
    let r = blockmodel::sum_as_two(&bs, bs.horizon(), tol)?;
    rep.absorb("", &r.report);
    let per_block: Vec<_> = r
        .blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            json!({
                "k": i + 1,
                "epsilon": num(b.epsilon),
                "m1_dim": b.m1.dim(),
                "m2_dim": b.m2.dim(),
                "sum_dim": b.sum_dim,
                "intersection_dim": b.intersection_dim,
                "rank_equal": b.rank_equal,
                "contained": b.contained,
            })
        })
        .collect();
    rep.artifact("family", bs.name());
    rep.artifact("blocks", per_block);
    Ok(())
}
