use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;

use abflux::action::{
    action_integral_analytic, action_integral_numeric_with, quantize_energy, turning_point,
    QuantizationSetup,
};
use abflux::analysis::{tendency_report, Curvature, Sign, SpectralPoint, MIN_FLUX_SHIFTED_K};
use abflux::closed_form::{energy_well_semiclassical, level_energy, spectrum_table};
use abflux::model::{flux_shifted_k, MaslovConstant, PotentialSpec, UnitPreset};
use abflux::oracles::{shoot as shoot_level, well_exact_spectrum};
use abflux::quadrature::TanhSinh;
use abflux::special::{bessel_j_zeros, BesselOrder};
use abflux::table::SpectrumTable;

use crate::config::Settings;
use crate::format::sig12;
use crate::svg::{render, Panel, Series};
use crate::{CliError, Format, OutputArgs, PotentialArgs, SettingsArgs};

const WELL_UNIT: &str = "hbar^2 pi^2/2ma^2";
const SPECTRUM_HEADER: [&str; 9] = [
    "nu", "lambda", "mu0", "n", "q", "k", "gamma", "energy", "unit",
];
const WELL_HEADER: [&str; 5] = ["gamma", "n", "E_exact", "E_semiclassical", "diff"];

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    /// Flux in units of the flux quantum.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu0: f64,
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
    #[arg(long, default_value_t = 0)]
    pub q_max: u32,
    /// Single magnetic quantum number (default 0).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "k_range")]
    pub k: Option<i32>,
    /// Inclusive range `lo..hi`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_k_range)]
    pub k_range: Option<(i32, i32)>,
    /// reduced | fig1 | fig2a | fig2b | fig2c | fig2d
    #[arg(long, default_value = "reduced")]
    pub units: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CompareWellArgs {
    /// q + |k + mu0|.
    #[arg(long, default_value_t = 2.5)]
    pub gamma: f64,
    #[arg(long, default_value_t = 10)]
    pub n_max: u32,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct TendencyArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mu0: f64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub k: i32,
    #[arg(long, default_value_t = 5)]
    pub n_max: u32,
    #[arg(long, default_value_t = 5)]
    pub q_max: u32,
    /// Unit preset; defaults to the figure preset for the potential.
    #[arg(long)]
    pub units: Option<String>,
    /// Write the tendency report as JSON here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyActionArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    /// Energy in reduced units.
    #[arg(long, allow_hyphen_values = true)]
    pub energy: f64,
    #[command(flatten)]
    pub settings: SettingsArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MaslovArg {
    SmoothSmooth,
    SmoothWall,
    WallWall,
}

impl From<MaslovArg> for MaslovConstant {
    fn from(m: MaslovArg) -> Self {
        match m {
            MaslovArg::SmoothSmooth => MaslovConstant::SmoothSmooth,
            MaslovArg::SmoothWall => MaslovConstant::SmoothWall,
            MaslovArg::WallWall => MaslovConstant::WallWall,
        }
    }
}

#[derive(Args, Debug)]
pub struct QuantizeArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub n: u32,
    /// Replace the default matching constant.
    #[arg(long, value_enum)]
    pub maslov: Option<MaslovArg>,
    #[command(flatten)]
    pub settings: SettingsArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ShootArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub settings: SettingsArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ZerosArgs {
    #[arg(long)]
    pub order: f64,
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_k_range(s: &str) -> Result<(i32, i32), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got '{s}'"))?;
    let lo: i32 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound in '{s}'"))?;
    let hi: i32 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound in '{s}'"))?;
    if lo > hi {
        return Err(format!("empty k range '{s}'"));
    }
    Ok((lo, hi))
}

pub fn potential(args: &PotentialArgs) -> Result<PotentialSpec, CliError> {
    let nu = args.nu.trim();
    if matches!(
        nu.to_ascii_lowercase().as_str(),
        "inf" | "infinity" | "+inf"
    ) {
        if args.lambda.is_some() {
            return Err(CliError::Usage(
                "--lambda does not apply to the infinite well (--nu inf)".into(),
            ));
        }
        return Ok(PotentialSpec::infinite_well(args.a)?);
    }
    let nu: f64 = nu
        .parse()
        .map_err(|_| CliError::Usage(format!("--nu expects a number or 'inf', got '{nu}'")))?;
    let lambda = args.lambda.unwrap_or(if nu < 0.0 { -1.0 } else { 1.0 });
    Ok(PotentialSpec::power_law(lambda, nu)?)
}

fn settings(args: &SettingsArgs) -> Result<Settings, CliError> {
    let mut s = match &args.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    if let Some(v) = args.quad_tol {
        s.quad_tolerance = v;
    }
    if let Some(v) = args.root_tol {
        s.root_tolerance = v;
    }
    if let Some(v) = args.step {
        s.shooting.step = v;
    }
    if let Some(v) = args.energy_tol {
        s.shooting.energy_tolerance = v;
    }
    Ok(s)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

fn nu_field(p: &PotentialSpec) -> String {
    match *p {
        PotentialSpec::PowerLaw { nu, .. } => sig12(nu),
        PotentialSpec::InfiniteWell { .. } => "inf".into(),
    }
}

fn lambda_field(p: &PotentialSpec) -> String {
    match *p {
        PotentialSpec::PowerLaw { lambda, .. } => sig12(lambda),
        PotentialSpec::InfiniteWell { .. } => String::new(),
    }
}

fn csv_text(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(&row).map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn spectrum_csv(table: &SpectrumTable) -> Result<String, CliError> {
    let (nu, lambda, mu0) = (
        nu_field(&table.potential),
        lambda_field(&table.potential),
        sig12(table.mu0),
    );
    csv_text(
        &SPECTRUM_HEADER,
        table.rows.iter().map(|r| {
            vec![
                nu.clone(),
                lambda.clone(),
                mu0.clone(),
                r.n.to_string(),
                r.q.to_string(),
                r.k.to_string(),
                sig12(r.gamma),
                sig12(table.display_energy(r)),
                table.unit.label.clone(),
            ]
        }),
    )
}

fn write_table(table: &SpectrumTable, output: &OutputArgs) -> Result<(), CliError> {
    let text = match output.format {
        Format::Csv => spectrum_csv(table)?,
        Format::Json => to_json(table),
    };
    emit(output.out.as_deref(), &text)
}

/// One series per (q, k), energy against n.
fn spectrum_panel(table: &SpectrumTable, title: String) -> Panel {
    let mut keys: Vec<(u32, i32)> = table.rows.iter().map(|r| (r.q, r.k)).collect();
    keys.sort_unstable();
    keys.dedup();
    let series = keys
        .into_iter()
        .map(|(q, k)| Series {
            label: format!("q={q} k={k}"),
            points: table
                .rows
                .iter()
                .filter(|r| r.q == q && r.k == k)
                .map(|r| (r.n as f64, table.display_energy(r)))
                .collect(),
        })
        .collect();
    Panel {
        title,
        x_label: "n".into(),
        y_label: format!("E [{}]", table.unit.label),
        series,
    }
}

fn write_svg(path: &Path, panels: &[Panel]) -> Result<(), CliError> {
    emit(Some(path), &render(panels))
}

pub fn spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let p = potential(&args.potential)?;
    let unit = UnitPreset::from_name(&args.units)?.scale(&p)?;
    let (lo, hi) = args.k_range.unwrap_or_else(|| {
        let k = args.k.unwrap_or(0);
        (k, k)
    });
    let table = spectrum_table(&p, args.mu0, args.n_max, args.q_max, lo..=hi, unit)?;
    write_table(&table, &args.output)?;
    if let Some(path) = &args.output.svg {
        let title = format!("{p}, mu0 = {}", sig12(args.mu0));
        write_svg(path, &[spectrum_panel(&table, title)])?;
    }
    Ok(())
}

#[derive(Serialize)]
struct WellRow {
    n: u32,
    #[serde(rename = "E_exact")]
    exact: f64,
    #[serde(rename = "E_semiclassical")]
    semiclassical: f64,
    diff: f64,
}

#[derive(Serialize)]
struct WellComparison<'a> {
    gamma: f64,
    a: f64,
    unit: &'static str,
    rows: &'a [WellRow],
}

pub fn compare_well(args: &CompareWellArgs) -> Result<(), CliError> {
    let exact = well_exact_spectrum(args.gamma, args.a, args.n_max as usize + 1)?;
    let rows = exact
        .iter()
        .enumerate()
        .map(|(n, &e)| {
            let semi = energy_well_semiclassical(n as u32, args.gamma, args.a)?;
            Ok(WellRow {
                n: n as u32,
                exact: e,
                semiclassical: semi,
                diff: semi - e,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let text = match args.output.format {
        Format::Csv => csv_text(
            &WELL_HEADER,
            rows.iter().map(|r| {
                vec![
                    sig12(args.gamma),
                    r.n.to_string(),
                    sig12(r.exact),
                    sig12(r.semiclassical),
                    sig12(r.diff),
                ]
            }),
        )?,
        Format::Json => to_json(&WellComparison {
            gamma: args.gamma,
            a: args.a,
            unit: WELL_UNIT,
            rows: &rows,
        }),
    };
    emit(args.output.out.as_deref(), &text)?;
    if let Some(path) = &args.output.svg {
        let points =
            |f: fn(&WellRow) -> f64| rows.iter().map(|r| (r.n as f64, f(r))).collect::<Vec<_>>();
        let values = Panel {
            title: format!("infinite well, q + |k+mu0| = {}", sig12(args.gamma)),
            x_label: "n".into(),
            y_label: format!("E [{WELL_UNIT}]"),
            series: vec![
                Series {
                    label: "exact".into(),
                    points: points(|r| r.exact),
                },
                Series {
                    label: "semiclassical".into(),
                    points: points(|r| r.semiclassical),
                },
            ],
        };
        let diff = Panel {
            title: "semiclassical - exact".into(),
            x_label: "n".into(),
            y_label: format!("diff [{WELL_UNIT}]"),
            series: vec![Series {
                label: "diff".into(),
                points: points(|r| r.diff),
            }],
        };
        write_svg(path, &[values, diff])?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ReportOut {
    nu: String,
    mu0: f64,
    k: i32,
    point: SpectralPoint,
    curvature: Curvature,
    first_derivative_signs: [Sign; 3],
    ratios: (f64, f64, f64),
    flux_slope: Sign,
}

pub fn tendency(args: &TendencyArgs) -> Result<(), CliError> {
    let p = potential(&args.potential)?;
    let preset = match &args.units {
        Some(name) => UnitPreset::from_name(name)?,
        None => UnitPreset::figure_default(&p),
    };
    let unit = preset.scale(&p)?;
    let kmu = flux_shifted_k(args.k, args.mu0).abs();
    if kmu < MIN_FLUX_SHIFTED_K {
        return Err(CliError::Usage(format!(
            "the tendency report differentiates in |k+mu0|, which must be >= {MIN_FLUX_SHIFTED_K}; got {kmu} (set --mu0 or --k)"
        )));
    }
    let table = spectrum_table(&p, args.mu0, args.n_max, args.q_max, args.k..=args.k, unit)?;
    let point = SpectralPoint::new(
        f64::from(args.n_max) / 2.0,
        f64::from(args.q_max) / 2.0,
        f64::from(args.k),
    );
    let report = tendency_report(&p, args.mu0, point)?;
    let out = ReportOut {
        nu: nu_field(&p),
        mu0: args.mu0,
        k: args.k,
        point,
        curvature: report.curvature,
        first_derivative_signs: report.first_derivative_signs,
        ratios: report.ratios,
        flux_slope: report.flux_slope,
    };
    write_table(&table, &args.output)?;
    match &args.report {
        Some(path) => emit(Some(path), &to_json(&out))?,
        None => {
            let [a, b, c] = out.first_derivative_signs;
            eprintln!(
                "tendency: nu={} |k+mu0|={} curvature={} first-derivative signs=({a},{b},{c}) ratios=({},{},{}) flux-slope={}",
                out.nu,
                sig12(kmu),
                out.curvature,
                sig12(out.ratios.0),
                sig12(out.ratios.1),
                sig12(out.ratios.2),
                out.flux_slope
            );
        }
    }
    if let Some(path) = &args.output.svg {
        let mut panel = spectrum_panel(&table, format!("{p}, |k+mu0| = {}", sig12(kmu)));
        for s in &mut panel.series {
            s.label = s.label.split(' ').next().unwrap_or_default().to_string();
        }
        write_svg(path, &[panel])?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ActionCheck {
    potential: PotentialSpec,
    energy: f64,
    turning_point: f64,
    numeric: f64,
    closed: f64,
    rel_err: f64,
}

pub fn verify_action(args: &VerifyActionArgs) -> Result<(), CliError> {
    let p = potential(&args.potential)?;
    let s = settings(&args.settings)?;
    let quad = TanhSinh::new(s.quad_tolerance, 14)?;
    let numeric = action_integral_numeric_with(args.energy, &p, &quad)?;
    let closed = action_integral_analytic(args.energy, &p)?;
    let out = ActionCheck {
        potential: p,
        energy: args.energy,
        turning_point: turning_point(args.energy, &p)?,
        numeric,
        closed,
        rel_err: (numeric - closed).abs() / closed.abs(),
    };
    emit(args.out.as_deref(), &to_json(&out))
}

#[derive(Serialize)]
struct Quantized {
    potential: PotentialSpec,
    gamma: f64,
    n: u32,
    offset: f64,
    energy: f64,
    closed_form: f64,
    rel_diff: f64,
}

pub fn quantize(args: &QuantizeArgs) -> Result<(), CliError> {
    let p = potential(&args.potential)?;
    let s = settings(&args.settings)?;
    let mut setup = QuantizationSetup::new(p, args.gamma)?
        .with_tolerances(s.quad_tolerance, s.root_tolerance)?;
    if let Some(m) = args.maslov {
        setup = setup.with_maslov(m.into());
    }
    let energy = quantize_energy(&setup, args.n)?;
    let closed_form = level_energy(&p, args.n, args.gamma)?;
    let out = Quantized {
        potential: p,
        gamma: args.gamma,
        n: args.n,
        offset: setup.offset(),
        energy,
        closed_form,
        rel_diff: (energy - closed_form).abs() / closed_form.abs(),
    };
    emit(args.out.as_deref(), &to_json(&out))
}

#[derive(Serialize)]
struct Shot {
    potential: PotentialSpec,
    gamma: f64,
    n: u32,
    energy: f64,
    nodes: usize,
    r_max: f64,
    iterations: usize,
    semiclassical: f64,
    rel_err: f64,
}

pub fn shoot(args: &ShootArgs) -> Result<(), CliError> {
    let p = potential(&args.potential)?;
    let s = settings(&args.settings)?;
    let r = shoot_level(&p, args.gamma, args.n, &s.shooting)?;
    let semiclassical = level_energy(&p, args.n, args.gamma)?;
    let out = Shot {
        potential: p,
        gamma: args.gamma,
        n: args.n,
        energy: r.energy,
        nodes: r.nodes,
        r_max: r.r_max,
        iterations: r.iterations,
        semiclassical,
        rel_err: (semiclassical - r.energy).abs() / r.energy.abs(),
    };
    emit(args.out.as_deref(), &to_json(&out))
}

#[derive(Serialize)]
struct Zeros {
    order: f64,
    zeros: Vec<f64>,
}

pub fn zeros(args: &ZerosArgs) -> Result<(), CliError> {
    if args.count == 0 {
        return Err(CliError::Usage("--count must be >= 1".into()));
    }
    let order = BesselOrder::new(args.order)?;
    let zeros = bessel_j_zeros(order, args.count)?;
    emit(
        args.out.as_deref(),
        &to_json(&Zeros {
            order: args.order,
            zeros,
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_range_parsing() {
        assert_eq!(parse_k_range("-3..3"), Ok((-3, 3)));
        assert_eq!(parse_k_range("2..2"), Ok((2, 2)));
        assert!(parse_k_range("3..-3").is_err());
        assert!(parse_k_range("3").is_err());
    }

    #[test]
    fn potential_parsing() {
        let args = |nu: &str, lambda: Option<f64>| PotentialArgs {
            nu: nu.into(),
            lambda,
            a: 2.0,
        };
        assert_eq!(
            potential(&args("inf", None)).unwrap(),
            PotentialSpec::InfiniteWell { a: 2.0 }
        );
        assert_eq!(
            potential(&args("-1", None)).unwrap(),
            PotentialSpec::PowerLaw {
                lambda: -1.0,
                nu: -1.0
            }
        );
        assert!(matches!(
            potential(&args("0", None)),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            potential(&args("x", None)),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            potential(&args("inf", Some(1.0))),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn well_csv_row_has_empty_lambda() {
        let p = PotentialSpec::infinite_well(1.0).unwrap();
        assert_eq!(nu_field(&p), "inf");
        assert_eq!(lambda_field(&p), "");
    }
}
