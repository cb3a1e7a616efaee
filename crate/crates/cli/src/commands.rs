//! Subcommand implementations. Output goes to caller-supplied writers so the
//! commands can be driven in-process.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use gta_core::coverage::{mean_coverage_map_with, outage_map_with};
use gta_core::fit::{fit_report, fit_scenario};
use gta_core::pathloss::{is_extrapolated, FIT_RANGE_M};
use gta_core::{
    lookup_params, mean_path_loss, received_power, scenario_path_loss, BlockerField, Environment,
    FrequencyBand, LinkGeometry, LinkPair, LinkType, ModelParams, RasterLayer, Scenario, Statistic,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cli::{ConfigArgs, FitArgs, Layer, MapArgs, PlArgs, SynthArgs, TablesArgs};
use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::io::{read_measurements, write_measurements, write_ppm, write_raster_csv};

/// Global flags plus the output streams.
pub struct Context<'a> {
    pub seed: Option<u64>,
    pub json: bool,
    pub quiet: bool,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

impl Context<'_> {
    fn warn(&mut self, msg: impl std::fmt::Display) -> Result<()> {
        if !self.quiet {
            writeln!(self.err, "warning: {msg}").map_err(|e| CliError::io("stderr", e))?;
        }
        Ok(())
    }

    fn print(&mut self, text: impl std::fmt::Display) -> Result<()> {
        write!(self.out, "{text}").map_err(|e| CliError::io("stdout", e))
    }

    fn print_json<T: Serialize>(&mut self, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).expect("report serializes");
        writeln!(self.out, "{text}").map_err(|e| CliError::io("stdout", e))
    }
}

fn extrapolation_note(d_3d: f64) -> String {
    format!(
        "d_3d = {d_3d:.2} m lies outside the fitted range {}-{} m; extrapolating",
        FIT_RANGE_M.0, FIT_RANGE_M.1
    )
}

#[derive(Serialize)]
struct LinkLine {
    link: LinkType,
    params: ModelParams,
    mean_path_loss_db: f64,
    received_power_dbm: f64,
}

#[derive(Serialize)]
struct Chain {
    r_2d: f64,
    h_d: f64,
    h_r: f64,
    blockers: BlockerField,
    p_los: f64,
    pl_los_db: f64,
    pl_nlos_db: f64,
    pl_avg_db: f64,
    received_power_dbm: f64,
}

#[derive(Serialize)]
struct PlReport {
    environment: Environment,
    band: FrequencyBand,
    d_3d: f64,
    extrapolated: bool,
    links: Vec<LinkLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chain: Option<Chain>,
}

pub fn cmd_pl(ctx: &mut Context<'_>, args: &PlArgs) -> Result<()> {
    let links: Vec<LinkType> = match args.link {
        Some(l) => vec![l],
        None => LinkType::ALL.to_vec(),
    };
    let rx = |pl: f64| received_power(args.p_t, args.g_t, args.g_r, pl);

    let (d_3d, chain) = match (args.d, args.r2d) {
        (Some(d), _) => (d, None),
        (None, Some(r_2d)) => {
            let geometry = LinkGeometry::new(r_2d, args.h_d, args.h_r)?;
            let blockers = BlockerField::new(args.lambda, args.g_b, args.h_b)?;
            let r = scenario_path_loss(args.env, args.freq, &geometry, &blockers)?;
            let chain = Chain {
                r_2d,
                h_d: args.h_d,
                h_r: args.h_r,
                blockers,
                p_los: r.p_los,
                pl_los_db: r.pl_los_db,
                pl_nlos_db: r.pl_nlos_db,
                pl_avg_db: r.mean_db,
                received_power_dbm: rx(r.mean_db),
            };
            (r.d_3d, Some(chain))
        }
        (None, None) => return Err(CliError::Usage("one of --d or --r2d is required".into())),
    };

    let links = links
        .into_iter()
        .map(|link| {
            let params = lookup_params(Scenario::new(args.env, args.freq, link));
            let pl = mean_path_loss(&params, d_3d)?;
            Ok(LinkLine { link, params, mean_path_loss_db: pl, received_power_dbm: rx(pl) })
        })
        .collect::<Result<Vec<_>>>()?;

    let extrapolated = is_extrapolated(d_3d);
    if extrapolated {
        ctx.warn(extrapolation_note(d_3d))?;
    }
    let report = PlReport { environment: args.env, band: args.freq, d_3d, extrapolated, links, chain };
    if ctx.json {
        return ctx.print_json(&report);
    }

    let mut text = format!("scenario  {} / {}\n", report.environment.title(), report.band);
    text += &format!("d_3d      {:.2} m\n", report.d_3d);
    for l in &report.links {
        text += &format!(
            "{:<5} alpha {:.2}  beta {:.2}  sigma^2 {:.2}  PL {:.2} dB  P_r {:.2} dBm\n",
            l.link.name(),
            l.params.alpha,
            l.params.beta,
            l.params.sigma_sq,
            l.mean_path_loss_db,
            l.received_power_dbm
        );
    }
    if let Some(c) = &report.chain {
        text += &format!(
            "geometry  r_2d {:.2} m, h_d {:.2} m, h_r {:.2} m\n",
            c.r_2d, c.h_d, c.h_r
        );
        text += &format!(
            "blockers  lambda {} /m^2, g_B {} m, h_B {} m\n",
            c.blockers.lambda_density, c.blockers.g_b, c.blockers.h_b
        );
        text += &format!("P_LOS     {:.6}\n", c.p_los);
        text += &format!("PL_LOS    {:.2} dB\n", c.pl_los_db);
        text += &format!("PL_NLOS   {:.2} dB\n", c.pl_nlos_db);
        text += &format!("PL_avg    {:.2} dB\n", c.pl_avg_db);
        text += &format!("P_r       {:.2} dBm\n", c.received_power_dbm);
    }
    ctx.print(text)
}

pub fn cmd_fit(ctx: &mut Context<'_>, args: &FitArgs) -> Result<()> {
    let file = File::open(&args.input).map_err(|e| CliError::io(args.input.display(), e))?;
    let samples = read_measurements(BufReader::new(file))?;
    if samples.is_empty() {
        return Err(CliError::Data(format!(
            "insufficient data: {} contains no measurements",
            args.input.display()
        )));
    }
    let fits = fit_scenario(&samples)?;
    let reference = match (args.env, args.freq) {
        (Some(env), Some(band)) => Some(LinkPair::lookup(env, band)),
        _ => None,
    };
    for fit in [&fits.los, &fits.nlos] {
        let (lo, hi) = fit.distance_range;
        if is_extrapolated(lo) || is_extrapolated(hi) {
            ctx.warn(format!(
                "{} distances span {lo:.1}-{hi:.1} m, beyond the {}-{} m reference fit range",
                fit.link, FIT_RANGE_M.0, FIT_RANGE_M.1
            ))?;
        }
    }
    let report = fit_report(&fits, reference.as_ref());
    if ctx.json {
        ctx.print_json(&report)
    } else {
        ctx.print(report)
    }
}

#[derive(Serialize)]
struct MapSummary<'a> {
    output: &'a Path,
    statistic: Statistic,
    cells: usize,
    columns: usize,
    rows: usize,
    min: f64,
    max: f64,
    extrapolated_cells: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    outage_threshold_db: Option<f64>,
}

pub fn build_layer(config: &ScenarioConfig, layer: Layer, seed: Option<u64>) -> Result<RasterLayer> {
    let grid = config.grid_spec();
    let pair = config.link_pair();
    let raster = match layer {
        Layer::Mean => mean_coverage_map_with(&grid, &pair, &config.blockers)?,
        Layer::Outage => outage_map_with(&grid, &pair, &config.blockers, &config.outage_spec(seed))?,
    };
    Ok(raster)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path.display(), e))
}

pub fn cmd_map(ctx: &mut Context<'_>, args: &MapArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::io(args.config.display(), e))?;
    let config = ScenarioConfig::from_json(&text)?;

    let raster = match args.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Io(format!("thread pool: {e}")))?
            .install(|| build_layer(&config, args.layer, ctx.seed))?,
        None => build_layer(&config, args.layer, ctx.seed)?,
    };

    let mut csv_out = create(&args.output)?;
    write_raster_csv(&mut csv_out, &raster)?;
    csv_out.flush().map_err(|e| CliError::io(args.output.display(), e))?;
    if let Some(ppm) = &args.ppm {
        write_ppm(create(ppm)?, &raster).map_err(|e| CliError::io(ppm.display(), e))?;
    }

    let grid = raster.grid;
    let extrapolated_cells = grid.extrapolated_cells()?;
    if extrapolated_cells > 0 {
        ctx.warn(format!(
            "{extrapolated_cells} of {} cells lie outside the fitted {}-{} m range",
            grid.cell_count(),
            FIT_RANGE_M.0,
            FIT_RANGE_M.1
        ))?;
    }
    let (columns, rows) = grid.dims();
    let (min, max) = raster.value_range();
    let summary = MapSummary {
        output: &args.output,
        statistic: raster.statistic,
        cells: grid.cell_count(),
        columns,
        rows,
        min,
        max,
        extrapolated_cells,
        outage_threshold_db: (args.layer == Layer::Outage).then(|| config.outage_threshold()),
    };
    if ctx.json {
        return ctx.print_json(&summary);
    }
    if ctx.quiet {
        return Ok(());
    }
    let range = match raster.statistic {
        Statistic::MeanPathLoss => format!("[{min:.2}, {max:.2}] dB"),
        Statistic::Outage => format!("[{min:.6}, {max:.6}]"),
    };
    let mut text = format!(
        "wrote {} cells ({columns} x {rows}) to {}\nrange {range}\n",
        summary.cells,
        args.output.display()
    );
    if let Some(t) = summary.outage_threshold_db {
        text += &format!("outage threshold {t:.2} dB\n");
    }
    if let Some(ppm) = &args.ppm {
        text += &format!("image {} (blue = min, red = max)\n", ppm.display());
    }
    ctx.print(text)
}

#[derive(Serialize)]
struct TableEntry {
    environment: Environment,
    band: FrequencyBand,
    link: LinkType,
    #[serde(flatten)]
    params: ModelParams,
}

/// The parameter tables, one block per band with NLOS rows above LOS rows.
pub fn render_tables(
    env: Option<Environment>,
    band: Option<FrequencyBand>,
    link: Option<LinkType>,
) -> String {
    let envs: Vec<_> = Environment::ALL.into_iter().filter(|e| env.is_none_or(|f| f == *e)).collect();
    let mut text = String::new();
    for b in FrequencyBand::ALL.into_iter().filter(|b| band.is_none_or(|f| f == *b)) {
        if !text.is_empty() {
            text.push('\n');
        }
        text += &format!("Frequency {b}\n{:<9} {:<5}", "param", "link");
        for e in &envs {
            text += &format!(" {:>12}", e.title());
        }
        text.push('\n');
        for l in [LinkType::Nlos, LinkType::Los].into_iter().filter(|l| link.is_none_or(|f| f == *l)) {
            let params: Vec<_> = envs.iter().map(|e| lookup_params(Scenario::new(*e, b, l))).collect();
            let rows: [(&str, fn(&ModelParams) -> f64); 3] =
                [("alpha", |p| p.alpha), ("beta", |p| p.beta), ("sigma^2", |p| p.sigma_sq)];
            for (name, get) in rows {
                text += &format!("{name:<9} {:<5}", l.name());
                for p in &params {
                    text += &format!(" {:>12.2}", get(p));
                }
                text.push('\n');
            }
        }
    }
    text
}

pub fn cmd_tables(ctx: &mut Context<'_>, args: &TablesArgs) -> Result<()> {
    if ctx.json {
        let entries: Vec<TableEntry> = Scenario::all()
            .filter(|s| args.env.is_none_or(|e| e == s.environment))
            .filter(|s| args.freq.is_none_or(|b| b == s.band))
            .filter(|s| args.link.is_none_or(|l| l == s.link))
            .map(|s| TableEntry {
                environment: s.environment,
                band: s.band,
                link: s.link,
                params: s.params(),
            })
            .collect();
        return ctx.print_json(&entries);
    }
    let text = render_tables(args.env, args.freq, args.link);
    ctx.print(text)
}

pub fn cmd_synth(ctx: &mut Context<'_>, args: &SynthArgs) -> Result<()> {
    let pair = LinkPair::lookup(args.env, args.freq);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed.unwrap_or(0));
    let range = (args.d_min, args.d_max);
    let mut samples =
        gta_core::fit::synthesize_samples(&pair.los, LinkType::Los, args.n, range, &mut rng)?;
    samples.extend(gta_core::fit::synthesize_samples(
        &pair.nlos,
        LinkType::Nlos,
        args.n,
        range,
        &mut rng,
    )?);
    let mut out = create(&args.output)?;
    write_measurements(&mut out, &samples)?;
    out.flush().map_err(|e| CliError::io(args.output.display(), e))?;
    if !ctx.quiet && !ctx.json {
        ctx.print(format!("wrote {} samples to {}\n", samples.len(), args.output.display()))?;
    }
    Ok(())
}

pub fn cmd_config(ctx: &mut Context<'_>, args: &ConfigArgs) -> Result<()> {
    ctx.print(ScenarioConfig::new(args.env, args.freq).to_json())
}
