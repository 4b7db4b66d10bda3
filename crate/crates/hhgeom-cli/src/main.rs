//! `hhgeom`: run the inequality checks, equality-case constructors,
//! tightness searches, and symmetrization profiles from the command line.
//!
//! Exit codes: 0 when every verdict is pass or equality, 1 when any check
//! fails, 2 on usage or configuration errors (malformed input, dimension
//! mismatches, violated preconditions; the message names the precondition).
//! Runs with identical flags produce byte-identical report payloads.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DVector;

use hhgeom::functional::{
    check_classical_hh, check_gauge_hh, check_log_concave_mean, check_moment_center_bound,
    check_power_mean_bound,
};
use hhgeom::jsonio;
use hhgeom::polytope::{make_body, regular_polygon, unit_box, BodyFamily};
use hhgeom::symmetrize::{schwarz_profile, schwarz_volume};
use hhgeom::verify::{
    check_center_segment, check_milman_pajor, check_projection_centroid,
    check_santos_bound, check_section_projection_bound, construct_equality_slab,
    tightness_search, CheckKind, SearchFamily,
};
use hhgeom::{ConcaveFn, ConvexGauge, InequalityReport, Polytope, Subspace};

#[derive(Parser)]
#[command(name = "hhgeom", version, about = "Sharp section and concavity inequality toolkit")]
struct Cli {
    /// Worker threads for sampling and searches; falls back to the
    /// HHGEOM_JOBS environment variable, then to all cores.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one inequality check and emit its report.
    Verify(VerifyArgs),
    /// Build an equality body for the section-projection bound and report
    /// its (unit) ratio.
    Construct(ConstructArgs),
    /// Randomized tightness search: supremum of lhs/rhs over a family.
    Search(SearchArgs),
    /// Rotational symmetrization profile of a body about an axis, as CSV.
    Profile(ProfileArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckName {
    SectionProjection,
    SlabSharp,
    CentroidSection,
    ProjectionCentroid,
    CenterSegment,
    GaugeHh,
    PowerMean,
    LogConcaveMean,
    ClassicalHh,
    MomentCenter,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct BodySource {
    /// Body JSON file ({"dim", "vertices"} or {"dim", "halfspaces"}).
    #[arg(long)]
    body: Option<PathBuf>,
    /// Built-in family: cube, cross, scaled-slab, pyramid, mgon-cone,
    /// random.
    #[arg(long)]
    family: Option<String>,
    /// Ambient dimension for --family.
    #[arg(long)]
    n: Option<usize>,
    /// Subspace dimension for scaled-slab (default 1).
    #[arg(long)]
    i: Option<usize>,
    /// Point count for random hulls, or the polygon order for mgon-cone.
    #[arg(long)]
    points: Option<usize>,
    /// Seed for the random family.
    #[arg(long)]
    family_seed: Option<u64>,
}

impl BodySource {
    /// Builds the body plus, for families with a canonical subspace, that
    /// subspace.
    fn load(&self) -> anyhow::Result<(Polytope, Option<Subspace>)> {
        match (&self.body, &self.family) {
            (Some(path), None) => {
                let v = read_json(path)?;
                Ok((jsonio::body_from_json(&v)?, None))
            }
            (None, Some(name)) => self.from_family(name),
            (Some(_), Some(_)) => anyhow::bail!("--body and --family are mutually exclusive"),
            (None, None) => anyhow::bail!("one of --body or --family is required"),
        }
    }

    fn from_family(&self, name: &str) -> anyhow::Result<(Polytope, Option<Subspace>)> {
        let n = || {
            self.n
                .ok_or_else(|| anyhow::anyhow!("--family {name} requires --n"))
        };
        match name {
            "cube" => Ok((make_body(&BodyFamily::Cube { dim: n()? })?, None)),
            "cross" => Ok((make_body(&BodyFamily::CrossPolytope { dim: n()? })?, None)),
            "scaled-slab" => {
                let n = n()?;
                let i = self.i.unwrap_or(1);
                let c0 = if i >= 2 {
                    Some(make_body(&BodyFamily::Cube { dim: i - 1 })?)
                } else {
                    None
                };
                let c1 = unit_box(n - i)?;
                let (k, h) = construct_equality_slab(n, i, c0.as_ref(), &c1)?;
                Ok((k, Some(h)))
            }
            "pyramid" => {
                let n = n()?;
                let base = make_body(&BodyFamily::Cube { dim: n - 1 })?;
                let mut apex = vec![0.0; n];
                apex[n - 1] = 1.0;
                Ok((make_body(&BodyFamily::ConeOverBase { base, apex })?, None))
            }
            "mgon-cone" => {
                let m = self
                    .points
                    .ok_or_else(|| anyhow::anyhow!("--family mgon-cone requires --points"))?;
                let base = regular_polygon(m)?;
                let apex = vec![0.0, 0.0, 1.0];
                Ok((make_body(&BodyFamily::ConeOverBase { base, apex })?, None))
            }
            "random" => {
                let dim = n()?;
                let points = self.points.unwrap_or(4 * dim);
                let seed = self
                    .family_seed
                    .ok_or_else(|| anyhow::anyhow!("--family random requires --family-seed"))?;
                Ok((
                    make_body(&BodyFamily::RandomHull {
                        dim,
                        points,
                        seed,
                        symmetric: true,
                    })?,
                    None,
                ))
            }
            other => anyhow::bail!(
                "unknown family {other}; try cube, cross, scaled-slab, pyramid, mgon-cone, random"
            ),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Which inequality to check.
    #[arg(long, value_enum)]
    check: CheckName,
    #[command(flatten)]
    body: BodySource,
    /// Subspace JSON file ({"ambient", "basis"}).
    #[arg(long)]
    subspace: Option<PathBuf>,
    /// Coordinate subspace by axis indices, e.g. --subspace-dims 0,2.
    #[arg(long, value_delimiter = ',')]
    subspace_dims: Option<Vec<usize>>,
    /// Concave function JSON file ({"pieces": [{"a", "b"}]}).
    #[arg(long)]
    function: Option<PathBuf>,
    /// Gauge spec: power:ALPHA, exp-minus-one, or max-affine:m,c;m,c;...
    #[arg(long)]
    gauge: Option<String>,
    /// Exponent for --check power-mean.
    #[arg(long)]
    alpha: Option<f64>,
    /// Weight exponent for --check moment-center.
    #[arg(long)]
    m: Option<usize>,
    /// Sample budget for Monte Carlo paths.
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    /// RNG seed; required for any check that may sample.
    #[arg(long)]
    seed: Option<u64>,
    /// Segment endpoints (subspace coordinates) for --check center-segment.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x1: Option<Vec<f64>>,
    /// Grid size for --check center-segment.
    #[arg(long, default_value_t = 9)]
    grid: usize,
    /// Report file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ConstructArgs {
    /// Ambient dimension.
    #[arg(long)]
    n: usize,
    /// Dimension of the projection subspace lin{e1..e_i}.
    #[arg(long, default_value_t = 1)]
    i: usize,
    /// 0-symmetric factor of dimension i-1 (defaults to the cube; must be
    /// omitted when i = 1).
    #[arg(long)]
    c0: Option<PathBuf>,
    /// Scaled factor of dimension n-i (defaults to [0,1]^(n-i)).
    #[arg(long)]
    c1: Option<PathBuf>,
    /// Output file for {"body", "subspace", "report"} (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// Which inequality to drive.
    #[arg(long, value_enum)]
    check: SearchCheck,
    /// Instance family: symmetric-hull, slab-normalized-hull,
    /// perturbed-slab, gauge-on-cube.
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    points: Option<usize>,
    /// Subspace dimension for symmetric-hull.
    #[arg(long)]
    subspace_dim: Option<usize>,
    /// Vertex jitter for perturbed-slab.
    #[arg(long)]
    magnitude: Option<f64>,
    /// Piece count for gauge-on-cube functions.
    #[arg(long)]
    pieces: Option<usize>,
    /// Power gauge exponent for gauge-on-cube.
    #[arg(long)]
    alpha: Option<f64>,
    /// Sample budget per gauge-on-cube trial.
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    #[arg(long)]
    trials: usize,
    /// RNG master seed (required: searches are always randomized).
    #[arg(long)]
    seed: Option<u64>,
    /// Output file for the JSON result (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchCheck {
    SectionProjection,
    SlabSharp,
    CentroidSection,
    GaugeHh,
}

impl From<SearchCheck> for CheckKind {
    fn from(c: SearchCheck) -> CheckKind {
        match c {
            SearchCheck::SectionProjection => CheckKind::SectionProjection,
            SearchCheck::SlabSharp => CheckKind::SlabSharp,
            SearchCheck::CentroidSection => CheckKind::CentroidSection,
            SearchCheck::GaugeHh => CheckKind::GaugeMean,
        }
    }
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    body: BodySource,
    /// Symmetrization axis, comma-separated coordinates.
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    axis: Vec<f64>,
    /// Number of profile knots.
    #[arg(long, default_value_t = 2001)]
    knots: usize,
    /// Output CSV file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_json(path: &Path) -> anyhow::Result<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn emit(out: &Option<PathBuf>, payload: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display())),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn parse_gauge(spec: &str) -> anyhow::Result<ConvexGauge> {
    if spec == "exp-minus-one" {
        return Ok(ConvexGauge::exp_minus_one());
    }
    if let Some(alpha) = spec.strip_prefix("power:") {
        let alpha: f64 = alpha
            .parse()
            .map_err(|_| anyhow::anyhow!("bad exponent in gauge spec {spec}"))?;
        return Ok(ConvexGauge::power(alpha)?);
    }
    if let Some(rest) = spec.strip_prefix("max-affine:") {
        let mut pieces = Vec::new();
        for part in rest.split(';') {
            let (m, c) = part
                .split_once(',')
                .ok_or_else(|| anyhow::anyhow!("gauge piece {part} is not m,c"))?;
            pieces.push((
                m.trim().parse::<f64>()?,
                c.trim().parse::<f64>()?,
            ));
        }
        return Ok(ConvexGauge::max_affine(&pieces)?);
    }
    anyhow::bail!("unknown gauge spec {spec}; try power:2, exp-minus-one, or max-affine:m,c;...")
}

fn vector_arg(values: &Option<Vec<f64>>, flag: &str) -> anyhow::Result<DVector<f64>> {
    let v = values
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("--check center-segment requires {flag}"))?;
    Ok(DVector::from_vec(v.clone()))
}

fn run_verify(args: &VerifyArgs) -> anyhow::Result<Vec<InequalityReport>> {
    let (body, canonical_h) = args.body.load()?;
    let subspace = match (&args.subspace, &args.subspace_dims) {
        (Some(_), Some(_)) => {
            anyhow::bail!("--subspace and --subspace-dims are mutually exclusive")
        }
        (Some(path), None) => Some(jsonio::subspace_from_json(&read_json(path)?)?),
        (None, Some(dims)) => Some(Subspace::coordinate(body.dim(), dims)?),
        (None, None) => canonical_h,
    };
    let need_h = |what: &str| {
        subspace
            .clone()
            .ok_or_else(|| anyhow::anyhow!("--check {what} requires --subspace or --subspace-dims"))
    };
    let seed = || {
        args.seed.ok_or_else(|| {
            anyhow::anyhow!("this check samples; --seed is required for reproducibility")
        })
    };
    let function = |allow_negative: bool| -> anyhow::Result<ConcaveFn> {
        let path = args
            .function
            .as_ref()
            .ok_or_else(|| anyhow::anyhow!("this check requires --function"))?;
        Ok(jsonio::concave_from_json(
            &read_json(path)?,
            body.clone(),
            allow_negative,
        )?)
    };
    let report = match args.check {
        CheckName::SectionProjection => {
            check_section_projection_bound(&body, &need_h("section-projection")?)?
        }
        CheckName::SlabSharp => check_santos_bound(&body)?,
        CheckName::CentroidSection => check_milman_pajor(
            &body,
            &need_h("centroid-section")?,
            args.samples,
            args.seed.unwrap_or(0),
        )?,
        CheckName::ProjectionCentroid => {
            check_projection_centroid(&body, &need_h("projection-centroid")?)?
        }
        CheckName::CenterSegment => check_center_segment(
            &body,
            &need_h("center-segment")?,
            &vector_arg(&args.x0, "--x0")?,
            &vector_arg(&args.x1, "--x1")?,
            args.grid,
        )?,
        CheckName::GaugeHh => {
            let spec = args
                .gauge
                .as_ref()
                .ok_or_else(|| anyhow::anyhow!("--check gauge-hh requires --gauge"))?;
            check_gauge_hh(&body, &function(false)?, &parse_gauge(spec)?, args.samples, seed()?)?
        }
        CheckName::PowerMean => {
            let alpha = args
                .alpha
                .ok_or_else(|| anyhow::anyhow!("--check power-mean requires --alpha"))?;
            check_power_mean_bound(&body, &function(false)?, alpha, args.samples, seed()?)?
        }
        CheckName::LogConcaveMean => {
            check_log_concave_mean(&body, &function(true)?, args.samples, seed()?)?
        }
        CheckName::ClassicalHh => {
            check_classical_hh(&body, &function(false)?, args.samples, seed()?)?
        }
        CheckName::MomentCenter => {
            let m = args
                .m
                .ok_or_else(|| anyhow::anyhow!("--check moment-center requires --m"))?;
            check_moment_center_bound(&body, &function(false)?, m, args.samples, seed()?)?
        }
    };
    Ok(vec![report])
}

fn write_reports(
    reports: &[InequalityReport],
    out: &Option<PathBuf>,
    format: Format,
) -> anyhow::Result<()> {
    match format {
        Format::Json => emit(out, &jsonio::reports_to_json(reports)),
        Format::Csv => {
            // With a file destination the full instance provenance goes to
            // a sidecar JSON, referenced from the CSV's last column.
            let paths = match out {
                Some(path) => {
                    let sidecar = path.with_extension("instances.json");
                    let instances: Vec<&serde_json::Value> =
                        reports.iter().map(|r| &r.instance).collect();
                    let mut text = serde_json::to_string_pretty(&instances)?;
                    text.push('\n');
                    std::fs::write(&sidecar, text)?;
                    vec![sidecar.display().to_string(); reports.len()]
                }
                None => vec![String::new(); reports.len()],
            };
            emit(out, &jsonio::reports_to_csv(reports, &paths)?)
        }
    }
}

fn run_construct(args: &ConstructArgs) -> anyhow::Result<Vec<InequalityReport>> {
    let c0 = match (&args.c0, args.i) {
        (Some(path), _) => Some(jsonio::body_from_json(&read_json(path)?)?),
        (None, i) if i >= 2 => Some(make_body(&BodyFamily::Cube { dim: i - 1 })?),
        (None, _) => None,
    };
    let c1 = match &args.c1 {
        Some(path) => jsonio::body_from_json(&read_json(path)?)?,
        None => unit_box(args.n - args.i)?,
    };
    let (body, h) = construct_equality_slab(args.n, args.i, c0.as_ref(), &c1)?;
    let report = check_section_projection_bound(&body, &h)?;
    let payload = serde_json::json!({
        "body": jsonio::body_to_json(&body),
        "subspace": jsonio::subspace_to_json(&h),
        "report": serde_json::to_value(&report)?,
    });
    let mut text = serde_json::to_string_pretty(&payload)?;
    text.push('\n');
    emit(&args.out, &text)?;
    Ok(vec![report])
}

fn run_search(args: &SearchArgs) -> anyhow::Result<usize> {
    let seed = args
        .seed
        .ok_or_else(|| anyhow::anyhow!("searches are randomized; --seed is required"))?;
    let req = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| anyhow::anyhow!("--family {} requires {flag}", args.family))
    };
    let family = match args.family.as_str() {
        "symmetric-hull" => {
            let dim = req(args.n, "--n")?;
            SearchFamily::SymmetricHull {
                dim,
                points: args.points.unwrap_or(4 * dim),
                subspace_dim: req(args.subspace_dim, "--subspace-dim")?,
            }
        }
        "slab-normalized-hull" => {
            let dim = req(args.n, "--n")?;
            SearchFamily::SlabNormalizedHull {
                dim,
                points: args.points.unwrap_or(4 * dim),
            }
        }
        "perturbed-slab" => SearchFamily::PerturbedSlab {
            n: req(args.n, "--n")?,
            i: args.i.unwrap_or(1),
            magnitude: args
                .magnitude
                .ok_or_else(|| anyhow::anyhow!("--family perturbed-slab requires --magnitude"))?,
        },
        "gauge-on-cube" => SearchFamily::GaugeOnCube {
            dim: req(args.n, "--n")?,
            pieces: args.pieces.unwrap_or(3),
            alpha: args.alpha.unwrap_or(2.0),
            samples: args.samples,
        },
        other => anyhow::bail!(
            "unknown family {other}; try symmetric-hull, slab-normalized-hull, perturbed-slab, gauge-on-cube"
        ),
    };
    let result = tightness_search(&family, args.check.into(), args.trials, seed)?;
    let failures = result.failures;
    let mut text = serde_json::to_string_pretty(&result)?;
    text.push('\n');
    emit(&args.out, &text)?;
    Ok(failures)
}

fn run_profile(args: &ProfileArgs) -> anyhow::Result<()> {
    let (body, _) = args.body.load()?;
    let axis = DVector::from_vec(args.axis.clone());
    let profile = schwarz_profile(&body, &axis, args.knots)?;
    let mut csv = jsonio::profile_to_csv(&profile);
    // Trailing comment row with the volume identity, for quick inspection.
    let _ = writeln!(
        csv,
        "# symmetrized volume {}",
        schwarz_volume(&profile)
    );
    emit(&args.out, &csv)
}

fn exit_code_for(reports: &[InequalityReport]) -> u8 {
    if reports.iter().any(|r| r.verdict.is_fail()) {
        1
    } else {
        0
    }
}

fn configure_jobs(jobs: Option<usize>) -> anyhow::Result<()> {
    let n = match jobs {
        Some(n) => Some(n),
        None => match std::env::var("HHGEOM_JOBS") {
            Ok(s) => Some(
                s.parse::<usize>()
                    .map_err(|_| anyhow::anyhow!("HHGEOM_JOBS must be an integer, got {s}"))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            anyhow::bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    configure_jobs(cli.jobs)?;
    match &cli.command {
        Command::Verify(args) => {
            let reports = run_verify(args)?;
            write_reports(&reports, &args.out, args.format)?;
            Ok(exit_code_for(&reports))
        }
        Command::Construct(args) => {
            let reports = run_construct(args)?;
            Ok(exit_code_for(&reports))
        }
        Command::Search(args) => {
            let failures = run_search(args)?;
            Ok(if failures > 0 { 1 } else { 0 })
        }
        Command::Profile(args) => {
            run_profile(args)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
