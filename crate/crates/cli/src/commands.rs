use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use spherepd::calculus::{
    default_turning_bands_panels, fd_weights, iterated_smoothness_order, probe_roughness,
    rough_example, turning_bands_down, turning_bands_series, turning_bands_up_with,
    TURNING_BANDS_ORDER,
};
use spherepd::caps::{cap_gegenbauer, cap_normalizer, iota_schoenberg, CapSpec, KernelFamily};
use spherepd::convolution::{convolution_root, root_exists, GegenbauerCoeffs, SignSequence};
use spherepd::schoenberg::{
    default_negative_tol, gegenbauer_from_schoenberg, pd_check, schoenberg_coefficients,
    tail_decay_check, IsotropicFunction, SchoenbergSequence,
};
use spherepd::sphere::{Dimension, QuadratureRule};

use crate::coeff_file::{Basis, CoeffFile};
use crate::curve::{angle_grid, format_value, CurveTable};
use crate::error::{CliError, CliResult};

/// Environment variable overriding the default number of quadrature nodes.
pub const QUAD_NODES_ENV: &str = "SPHEREPD_QUAD_NODES";
pub const DEFAULT_QUAD_NODES: usize = 1024;

#[derive(Debug, Parser)]
#[command(
    name = "spherepd",
    version,
    about = "Spectral tools for isotropic positive definite functions on spheres"
)]
pub struct Cli {
    /// Quadrature nodes for coefficient integrals (overrides SPHEREPD_QUAD_NODES).
    #[arg(long, global = true)]
    pub quad_nodes: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute Schoenberg coefficients of a kernel.
    Coeffs(CoeffsArgs),
    /// Evaluate a coefficient file on an angle grid.
    Eval(EvalArgs),
    /// Check nonnegativity and tail decay of Schoenberg coefficients.
    PdCheck(PdCheckArgs),
    /// Compute a convolution root with a chosen sign sequence.
    Root(RootArgs),
    /// Cap indicator and three convolution roots of the cap function on S^2.
    Figure1(Figure1Args),
    /// Compare both sides of the turning-bands identities.
    TurningBands(TurningBandsArgs),
    /// Build the odd-dimensional roughness example and probe it around c.
    Rough(RoughArgs),
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    /// constant, powered_exponential, sine_power, truncated_power or iota.
    #[arg(long)]
    pub kernel: String,
    /// Kernel parameters as key=value (c, alpha, tau, r).
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    pub params: Vec<String>,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = spherepd::schoenberg::DEFAULT_N_MAX)]
    pub n_max: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PdCheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Negative-coefficient tolerance; defaults to 1e-10 * max(1, sum |b|).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RootArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// ones, alt, alt2 or custom:FILE (FILE lists +1/-1 entries).
    #[arg(long, default_value = "ones")]
    pub signs: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Figure1Args {
    #[arg(long, default_value_t = 1.2)]
    pub r: f64,
    /// Number of Gegenbauer terms (degrees 0 to n-max - 1).
    #[arg(long, default_value_t = 32)]
    pub n_max: usize,
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Args)]
pub struct TurningBandsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub direction: Direction,
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RoughArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub c: f64,
    #[arg(long, default_value_t = 20000)]
    pub n_max: usize,
    /// Finite-difference step of the probe.
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    /// Coefficient file; the probe CSV goes next to it unless --probe-out is given.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub probe_out: Option<PathBuf>,
}

/// Text for standard output and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

pub fn run(cli: Cli) -> CliResult<Outcome> {
    run_with_env(cli, std::env::var(QUAD_NODES_ENV).ok().as_deref())
}

/// [`run`] with the value of `SPHEREPD_QUAD_NODES` passed in explicitly.
pub fn run_with_env(cli: Cli, quad_nodes_env: Option<&str>) -> CliResult<Outcome> {
    let nodes = resolve_quad_nodes(cli.quad_nodes, quad_nodes_env)?;
    let explicit = (cli.quad_nodes.is_some() || quad_nodes_env.is_some()).then_some(nodes);
    match cli.command {
        Command::Coeffs(a) => cmd_coeffs(&a, nodes),
        Command::Eval(a) => cmd_eval(&a),
        Command::PdCheck(a) => cmd_pd_check(&a),
        Command::Root(a) => cmd_root(&a),
        Command::Figure1(a) => cmd_figure1(&a),
        Command::TurningBands(a) => cmd_turning_bands(&a, explicit),
        Command::Rough(a) => cmd_rough(&a),
    }
}

pub fn resolve_quad_nodes(flag: Option<usize>, env: Option<&str>) -> CliResult<usize> {
    let n = match (flag, env) {
        (Some(n), _) => n,
        (None, Some(v)) => v.trim().parse::<usize>().map_err(|_| {
            CliError::Usage(format!(
                "{QUAD_NODES_ENV} must be a positive integer, got {v:?}"
            ))
        })?,
        (None, None) => DEFAULT_QUAD_NODES,
    };
    if n < 2 {
        return Err(CliError::Usage(format!(
            "quadrature needs at least 2 nodes, got {n}"
        )));
    }
    Ok(n)
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<String> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| CliError::io(p, e))?;
            Ok(format!("wrote {}\n", p.display()))
        }
        None => Ok(text.to_string()),
    }
}

fn check_grid(grid: usize) -> CliResult<()> {
    if grid == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    Ok(())
}

/// A kernel named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelChoice {
    Constant,
    Family(KernelFamily),
    Iota(f64),
}

impl KernelChoice {
    pub fn parse(name: &str, params: &[String]) -> CliResult<Self> {
        let mut pairs = Vec::new();
        for p in params.iter().filter(|p| !p.is_empty()) {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("parameter {p:?} is not key=value")))?;
            let v: f64 = v.parse().map_err(|_| {
                CliError::Usage(format!("parameter {k} has non-numeric value {v:?}"))
            })?;
            pairs.push((k.trim().to_string(), v));
        }
        let allowed: &[&str] = match name {
            "constant" => &[],
            "powered_exponential" => &["c", "alpha"],
            "sine_power" => &["alpha"],
            "truncated_power" => &["c", "tau"],
            "iota" => &["r"],
            other => return Err(CliError::Usage(format!("unknown kernel {other:?}"))),
        };
        if let Some((k, _)) = pairs.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(CliError::Usage(format!(
                "kernel {name} takes no parameter {k:?}"
            )));
        }
        let get = |key: &str| pairs.iter().rev().find(|(k, _)| k == key).map(|(_, v)| *v);
        let need = |key: &str| {
            get(key).ok_or_else(|| CliError::Usage(format!("kernel {name} needs {key}=VALUE")))
        };
        Ok(match name {
            "constant" => Self::Constant,
            "powered_exponential" => Self::Family(KernelFamily::powered_exponential(
                need("c")?,
                get("alpha").unwrap_or(1.0),
            )?),
            "sine_power" => Self::Family(KernelFamily::sine_power(get("alpha").unwrap_or(1.0))?),
            "truncated_power" => Self::Family(KernelFamily::truncated_power(
                need("c")?,
                get("tau").unwrap_or(1.0),
            )?),
            _ => Self::Iota(need("r")?),
        })
    }

    pub fn label(&self) -> String {
        match self {
            Self::Constant => "constant".into(),
            Self::Family(f) => f.to_string(),
            Self::Iota(r) => format!("iota(r={r})"),
        }
    }
}

/// Describes a rule for the `# quadrature:` header line.
pub fn describe_rule(rule: &QuadratureRule) -> String {
    match rule.exact_degree {
        Some(deg) => format!("Gauss rule, {} nodes, exact to degree {deg}", rule.len()),
        None => format!(
            "composite Gauss-Legendre split at breakpoints, {} nodes, exact to degree 31 per panel",
            rule.len()
        ),
    }
}

/// Schoenberg coefficients for a kernel choice, with the quadrature description.
pub fn kernel_coefficients(
    choice: &KernelChoice,
    d: Dimension,
    n_max: usize,
    nodes: usize,
) -> CliResult<(SchoenbergSequence, String)> {
    match choice {
        KernelChoice::Iota(r) => {
            let spec = CapSpec::new(d, *r)?;
            Ok((
                iota_schoenberg(&spec, n_max),
                "not used (closed-form coefficients)".into(),
            ))
        }
        other => {
            let f = match other {
                KernelChoice::Constant => IsotropicFunction::new("constant", |_| 1.0),
                KernelChoice::Family(fam) => fam.to_function(),
                KernelChoice::Iota(_) => unreachable!(),
            };
            let rule = f.quadrature(d, nodes)?;
            let seq = schoenberg_coefficients(&f, d, n_max, &rule)?;
            Ok((seq, describe_rule(&rule)))
        }
    }
}

pub fn cmd_coeffs(a: &CoeffsArgs, nodes: usize) -> CliResult<Outcome> {
    let choice = KernelChoice::parse(&a.kernel, &a.params)?;
    let d = Dimension::new(a.d)?;
    let (seq, quad) = kernel_coefficients(&choice, d, a.n_max, nodes)?;
    let mut file = CoeffFile::from_schoenberg(&seq, choice.label());
    file.quadrature = Some(quad.clone());
    file.write(&a.out)?;
    let mut out = String::new();
    let _ = writeln!(out, "# quadrature: {quad}");
    let _ = writeln!(
        out,
        "wrote {} Schoenberg coefficients of {} on S^{} to {}",
        seq.len(),
        choice.label(),
        d,
        a.out.display()
    );
    let _ = writeln!(out, "sum = {}", format_value(seq.sum()));
    match file.tail_bound {
        Some(t) => {
            let _ = writeln!(out, "tail bound = {}", format_value(t));
        }
        None => {
            let _ = writeln!(out, "tail bound = unavailable");
        }
    }
    let negative = seq.negative_indices(default_negative_tol(&seq.coeffs));
    if !negative.is_empty() {
        let _ = writeln!(
            out,
            "warning: {} negative coefficients (first at n = {}); not positive definite on S^{} at this resolution",
            negative.len(),
            negative[0],
            d
        );
    }
    Ok(Outcome::ok(out))
}

/// Values of the function described by a coefficient file.
pub fn eval_file(file: &CoeffFile, theta: f64) -> CliResult<f64> {
    Ok(match file.basis {
        Basis::Schoenberg => file.to_schoenberg()?.eval(theta),
        Basis::Gegenbauer => file.to_gegenbauer()?.eval(theta),
    })
}

pub fn cmd_eval(a: &EvalArgs) -> CliResult<Outcome> {
    check_grid(a.grid)?;
    let file = CoeffFile::read(&a.input)?;
    let mut table = CurveTable::new(&["theta", "value"]);
    table.meta("spherepd eval");
    table.meta(format!("label: {}", file.label));
    table.meta(format!(
        "d = {}, basis = {}, terms = {}",
        file.d,
        basis_name(file.basis),
        file.coeffs.len()
    ));
    table.meta("quadrature: not used (series evaluation)");
    let eval: Box<dyn Fn(f64) -> f64> = match file.basis {
        Basis::Schoenberg => {
            let s = file.to_schoenberg()?;
            Box::new(move |t| s.eval(t))
        }
        Basis::Gegenbauer => {
            let g = file.to_gegenbauer()?;
            Box::new(move |t| g.eval(t))
        }
    };
    for t in angle_grid(a.grid) {
        table.push(vec![t, eval(t)]);
    }
    Ok(Outcome::ok(write_output(
        a.out.as_deref(),
        &table.render(),
    )?))
}

fn basis_name(b: Basis) -> &'static str {
    match b {
        Basis::Schoenberg => "schoenberg",
        Basis::Gegenbauer => "gegenbauer",
    }
}

pub fn cmd_pd_check(a: &PdCheckArgs) -> CliResult<Outcome> {
    let file = CoeffFile::read(&a.input)?;
    let seq = file.to_schoenberg()?;
    let tol = a.tol.unwrap_or_else(|| default_negative_tol(&seq.coeffs));
    let report = pd_check(&seq, tol);
    let tail = tail_decay_check(&seq);
    let mut out = String::new();
    let _ = writeln!(out, "# quadrature: not used (coefficient check)");
    let _ = writeln!(out, "label: {}", file.label);
    let _ = writeln!(out, "d: {}", seq.d);
    let _ = writeln!(out, "terms: {}", seq.len());
    let _ = writeln!(
        out,
        "min coefficient: {} at n = {}",
        format_value(report.min_coefficient),
        report.min_index
    );
    let _ = writeln!(out, "tolerance: {}", format_value(tol));
    let _ = writeln!(out, "nonnegative: {}", report.nonneg);
    let _ = writeln!(out, "strict positive definiteness: {}", report.strict);
    if tail.hypothesis_holds {
        let _ = writeln!(out, "ratio hypothesis b_n >= (1 - 1/(n+2)) b_(n+1): holds");
    } else {
        let shown: Vec<String> = tail
            .violations
            .iter()
            .take(10)
            .map(|n| n.to_string())
            .collect();
        let more = if tail.violations.len() > 10 {
            ", ..."
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "ratio hypothesis b_n >= (1 - 1/(n+2)) b_(n+1): fails at n = {}{more}",
            shown.join(", ")
        );
    }
    let _ = writeln!(out, "n b_n at truncation: {}", format_value(tail.boundary));
    let _ = writeln!(
        out,
        "n b_n eventually nonincreasing: {}",
        tail.eventually_decreasing
    );
    Ok(Outcome {
        stdout: out,
        code: if report.nonneg { 0 } else { 1 },
    })
}

/// Parses `ones`, `alt`, `alt2` or `custom:FILE` into a sign sequence of length `len`.
pub fn parse_signs(spec: &str, len: usize) -> CliResult<SignSequence> {
    match spec {
        "ones" => Ok(SignSequence::ones(len)),
        "alt" => Ok(SignSequence::alternating(len)),
        "alt2" => Ok(SignSequence::alternating_pairs(len)),
        other => {
            let path = other
                .strip_prefix("custom:")
                .ok_or_else(|| CliError::Usage(format!("unknown sign sequence {other:?}")))?;
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let signs = text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<f64>().map_err(|_| {
                        CliError::Usage(format!("sign entry {t:?} in {path} is not a number"))
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(SignSequence::new(signs)?)
        }
    }
}

pub fn cmd_root(a: &RootArgs) -> CliResult<Outcome> {
    let file = CoeffFile::read(&a.input)?;
    let f = file.to_gegenbauer()?;
    let signs = parse_signs(&a.signs, f.len())?;
    let exists = root_exists(&f, f.len().saturating_sub(1));
    let g = convolution_root(&f, &signs)?;
    let out_file =
        CoeffFile::from_gegenbauer(&g, None, format!("root[{}] of {}", a.signs, file.label));
    out_file.write(&a.out)?;
    let mut out = String::new();
    let _ = writeln!(out, "# quadrature: not used (coefficient transform)");
    let _ = writeln!(
        out,
        "root summability: {} (sum of |a_n| / cbar_n = {}, last-quarter share {:.3})",
        exists.verdict,
        format_value(exists.total()),
        exists.tail_share
    );
    let _ = writeln!(
        out,
        "wrote {} Gegenbauer coefficients to {}",
        g.len(),
        a.out.display()
    );
    Ok(Outcome::ok(out))
}

/// The four curves of the cap-function figure on `S^2`: the truncated normalized cap
/// indicator and the convolution roots of `ι_2` with signs `1`, `(-1)^n`, `(-1)^⌊n/2⌋`.
pub fn figure1_roots(r: f64, terms: usize) -> CliResult<[GegenbauerCoeffs; 4]> {
    if terms == 0 {
        return Err(CliError::Usage("--n-max must be positive".into()));
    }
    let spec = CapSpec::new(Dimension::new(2)?, r)?;
    let n = terms - 1;
    let iota = gegenbauer_from_schoenberg(&iota_schoenberg(&spec, n));
    let cap = cap_gegenbauer(&spec, n).scaled(cap_normalizer(&spec).sqrt().recip());
    Ok([
        cap,
        convolution_root(&iota, &SignSequence::ones(terms))?,
        convolution_root(&iota, &SignSequence::alternating(terms))?,
        convolution_root(&iota, &SignSequence::alternating_pairs(terms))?,
    ])
}

pub fn figure1_table(r: f64, terms: usize, grid: usize) -> CliResult<CurveTable> {
    check_grid(grid)?;
    let roots = figure1_roots(r, terms)?;
    let mut table = CurveTable::new(&["theta", "cap", "ones", "alt", "alt2"]);
    table.meta("spherepd figure1");
    table.meta(format!(
        "r = {r}, terms = {terms} (degrees 0..{}), grid = {grid}",
        terms - 1
    ));
    table.meta("cap: normalized cap indicator nu_2(r)^(-1/2) 1{theta <= r}, truncated series");
    table.meta(
        "ones, alt, alt2: convolution roots of iota_2(r) with signs 1, (-1)^n, (-1)^floor(n/2)",
    );
    table.meta("quadrature: not used (closed-form coefficients)");
    for t in angle_grid(grid) {
        let mut row = vec![t];
        row.extend(roots.iter().map(|g| g.eval(t)));
        table.push(row);
    }
    Ok(table)
}

pub fn cmd_figure1(a: &Figure1Args) -> CliResult<Outcome> {
    let table = figure1_table(a.r, a.n_max, a.grid)?;
    Ok(Outcome::ok(write_output(
        a.out.as_deref(),
        &table.render(),
    )?))
}

pub fn cmd_turning_bands(a: &TurningBandsArgs, quad_nodes: Option<usize>) -> CliResult<Outcome> {
    check_grid(a.grid)?;
    let file = CoeffFile::read(&a.input)?;
    let beta = file.to_schoenberg()?;
    let d = beta.d;
    let panels = quad_nodes
        .map(|n| n.div_ceil(TURNING_BANDS_ORDER))
        .unwrap_or_else(|| default_turning_bands_panels(&beta));
    let mut table = CurveTable::new(&["r", "lhs", "rhs"]);
    table.meta("spherepd turning-bands");
    table.meta(format!("label: {}", file.label));
    match a.direction {
        Direction::Up => {
            table.meta(format!(
                "lhs: psi_{}(beta o tau_-1, r) as a series; rhs: {} sin(r)^-{} int_0^r sin^{} (psi_{}(beta) - beta_0)",
                d.get() + 2,
                d,
                d,
                d.get() - 1,
                d
            ));
            table.meta(format!(
                "quadrature: composite Gauss-Legendre, {panels} panels of order {TURNING_BANDS_ORDER}, exact to degree {} per panel",
                2 * TURNING_BANDS_ORDER - 1
            ));
            let up = turning_bands_series(&beta);
            for r in angle_grid(a.grid) {
                table.push(vec![r, up.eval(r), turning_bands_up_with(&beta, r, panels)]);
            }
        }
        Direction::Down => {
            table.meta(format!(
                "lhs: psi_{d}(beta, r); rhs: beta_0 + cos r psi_{0}(beta o tau_-1, r) + (1/{d}) sin r psi'_{0}(beta o tau_-1, r)",
                d.get() + 2
            ));
            table.meta("quadrature: not used (series evaluation)");
            for r in angle_grid(a.grid) {
                table.push(vec![r, beta.eval(r), turning_bands_down(&beta, r)]);
            }
        }
    }
    Ok(Outcome::ok(write_output(
        a.out.as_deref(),
        &table.render(),
    )?))
}

pub fn cmd_rough(a: &RoughArgs) -> CliResult<Outcome> {
    if !(a.h > 0.0 && a.h < 0.1) {
        return Err(CliError::Usage(format!(
            "--h must lie in (0, 0.1), got {}",
            a.h
        )));
    }
    let d = Dimension::new(a.d)?;
    let seq = rough_example(d, a.c, a.n_max)?;
    let m = iterated_smoothness_order(d);
    let label = format!("rough example d={} c={}", a.d, a.c);
    let mut file = CoeffFile::from_schoenberg(&seq, &label);
    file.quadrature = Some("not used (closed-form coefficients)".into());
    file.write(&a.out)?;

    let report = probe_roughness(&seq, a.c, a.h);
    let probe_path = a
        .probe_out
        .clone()
        .unwrap_or_else(|| a.out.with_extension("probe.csv"));
    let (col_m, col_k) = (format!("d{m}"), format!("d{}", m + 1));
    let mut table = CurveTable::new(&["theta", "value", &col_m, &col_k]);
    table.meta("spherepd rough");
    table.meta(format!("{label}, terms = {}, h = {}", seq.len(), a.h));
    table.meta("quadrature: not used (closed-form coefficients)");
    table.meta(format!(
        "order {m}: left {} right {} relative jump {}",
        format_value(report.continuity.left),
        format_value(report.continuity.right),
        format_value(report.continuity.relative_jump())
    ));
    table.meta(format!(
        "order {}: jump at c {} baseline jump at c/2 {}",
        m + 1,
        format_value(report.kink.jump()),
        format_value(report.baseline.jump())
    ));
    let stencil_m = central_stencil(m, a.h);
    let stencil_k = central_stencil(m + 1, a.h);
    let f = |t: f64| seq.eval(t);
    for k in 0..=100 {
        let t = a.c - 0.05 + 0.001 * k as f64;
        table.push(vec![
            t,
            f(t),
            apply_stencil(&f, t, &stencil_m),
            apply_stencil(&f, t, &stencil_k),
        ]);
    }
    fs::write(&probe_path, table.render()).map_err(|e| CliError::io(&probe_path, e))?;

    let mut out = String::new();
    let _ = writeln!(out, "# quadrature: not used (closed-form coefficients)");
    let _ = writeln!(
        out,
        "wrote {} and {}",
        a.out.display(),
        probe_path.display()
    );
    let _ = writeln!(
        out,
        "derivative of order {m} continuous across c: {} (relative jump {})",
        report.continuous(),
        format_value(report.continuity.relative_jump())
    );
    let _ = writeln!(
        out,
        "derivative of order {} kinked at c: {} (jump {} vs baseline {})",
        m + 1,
        report.kinked(),
        format_value(report.kink.jump()),
        format_value(report.baseline.jump())
    );
    Ok(Outcome {
        stdout: out,
        code: if report.continuous() && report.kinked() {
            0
        } else {
            1
        },
    })
}

/// Offsets and weights of a symmetric stencil for the `order`-th derivative.
fn central_stencil(order: usize, h: f64) -> Vec<(f64, f64)> {
    let half = order.div_ceil(2);
    let offsets: Vec<f64> = (0..=2 * half)
        .map(|j| (j as f64 - half as f64) * h)
        .collect();
    let w = fd_weights(0.0, &offsets, order);
    offsets.into_iter().zip(w).collect()
}

fn apply_stencil<F: Fn(f64) -> f64>(f: &F, t: f64, stencil: &[(f64, f64)]) -> f64 {
    stencil.iter().map(|(o, w)| w * f(t + o)).sum()
}
