use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use tentlab_core::experiments::{chaotic_series, detect_escape, EscapeTolerances, SweepConfig};
use tentlab_core::rabbits::golden;
use tentlab_core::{
    build_coefficients, classify_equilibria, classify_value, companion_spectrum, decompose,
    enumerate_cycles, orbit, predict_escape_index, recurrence, sqrt2_experiment, stabilized_orbit,
    sweep, BackendKind, BackendSpec, BigRational, Coefficients, CycleRecord, Decimal,
    DecimalContext, MapParams, NetSpec, Real,
};

use crate::args::*;
use crate::error::CliError;
use crate::plot::{render_plot, PlotStyle};
use crate::table::TableFile;

pub const THREADS_ENV: &str = "TENTLAB_THREADS";

/// Collects the files a command writes, in order.
pub struct Output<'a> {
    dir: &'a Path,
    pub artifacts: Vec<String>,
}

impl<'a> Output<'a> {
    pub fn new(dir: &'a Path) -> Self {
        Self {
            dir,
            artifacts: Vec::new(),
        }
    }

    pub fn table(
        &mut self,
        name: &str,
        table: &TableFile,
        plot: Option<(usize, usize, PlotStyle)>,
    ) -> Result<(), CliError> {
        table.write_csv(&self.dir.join(name))?;
        self.artifacts.push(name.to_string());
        if let Some((x, y, style)) = plot {
            let svg = render_plot(table, x, y, style)?;
            let svg_name = name.replace(".csv", ".svg");
            std::fs::write(self.dir.join(&svg_name), svg)?;
            self.artifacts.push(svg_name);
        }
        Ok(())
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<String, CliError> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        std::fs::write(self.dir.join(name), &text)?;
        self.artifacts.push(name.to_string());
        Ok(text)
    }
}

macro_rules! with_real {
    ($spec:expr, $func:ident($($arg:expr),*)) => {{
        let spec: BackendSpec = $spec;
        match spec.kind {
            BackendKind::Binary64 => $func::<f64>(&(), $($arg),*),
            BackendKind::Rational => $func::<BigRational>(&(), $($arg),*),
            BackendKind::Decimal => {
                let digits = spec.precision_digits.expect("decimal spec carries a precision");
                $func::<Decimal>(&DecimalContext::new(digits)?, $($arg),*)
            }
        }
    }};
}

fn line(plot: bool) -> Option<(usize, usize, PlotStyle)> {
    plot.then_some((0, 1, PlotStyle::Line))
}

fn parse<R: Real>(text: &str, ctx: &R::Context) -> Result<R, CliError> {
    Ok(R::parse(text, ctx)?)
}

fn map_params<R: Real>(h: &str, ctx: &R::Context) -> Result<MapParams<R>, CliError> {
    Ok(MapParams::new(parse(h, ctx)?)?)
}

fn coefficients<R: Real>(sigma: &str, ctx: &R::Context) -> Result<Coefficients<R>, CliError> {
    Ok(build_coefficients(&parse::<R>(sigma, ctx)?)?)
}

fn text_list<R: Real>(values: &[R]) -> Vec<String> {
    values.iter().map(Real::to_text).collect()
}

fn n_x_table<R: Real>(x_name: &str, values: &[R]) -> TableFile {
    let mut table = TableFile::new(["n", x_name]);
    for (n, x) in values.iter().enumerate() {
        table.push_row(vec![n.to_string(), x.to_text()]);
    }
    table
}

pub fn simulate(args: &SimulateArgs, out: &mut Output) -> Result<(), CliError> {
    with_real!(args.backend.spec()?, simulate_in(args, out))
}

fn simulate_in<R: Real>(
    ctx: &R::Context,
    args: &SimulateArgs,
    out: &mut Output,
) -> Result<(), CliError> {
    let params = map_params::<R>(&args.map.h, ctx)?;
    let run = orbit(&parse::<R>(&args.x0, ctx)?, &params, args.map.k, args.steps)?;
    out.table("orbit.csv", &n_x_table("x", &run.points), line(args.plot))
}

pub fn cycles(args: &CyclesArgs, out: &mut Output) -> Result<String, CliError> {
    with_real!(args.backend.spec()?, cycles_in(args, out))
}

fn cycles_in<R: Real>(
    ctx: &R::Context,
    args: &CyclesArgs,
    out: &mut Output,
) -> Result<String, CliError> {
    let params = map_params::<R>(&args.h, ctx)?;
    let records: Vec<CycleRecord> = enumerate_cycles(&params, args.period)?
        .iter()
        .map(|c| c.to_record())
        .collect();
    out.json("cycles.json", &records)
}

pub fn stabilize(args: &StabilizeArgs, out: &mut Output) -> Result<String, CliError> {
    with_real!(args.stab.backend.spec()?, stabilize_in(args, out))
}

fn stabilize_in<R: Real>(
    ctx: &R::Context,
    args: &StabilizeArgs,
    out: &mut Output,
) -> Result<String, CliError> {
    let params = map_params::<R>(&args.stab.map.h, ctx)?;
    let coeffs = coefficients::<R>(&args.stab.sigma, ctx)?;
    let x0 = parse::<R>(&args.x0, ctx)?;
    let run = stabilized_orbit(&x0, &params, args.stab.map.k, &coeffs, args.steps)?;
    out.table(
        "stabilize.csv",
        &n_x_table("x_star", &run.starred),
        line(args.plot),
    )?;
    let outcome = classify_value(run.final_value(), &params, args.tol);
    let summary = json!({
        "x0": x0.to_text(),
        "sigma": coeffs.sigma.to_text(),
        "coefficients": text_list(&coeffs.a),
        "final_value": run.final_value().to_text(),
        "classified_target": outcome.variant,
        "distance": outcome.distance,
    });
    out.json("stabilize.json", &summary)
}

fn thread_cap() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a non-negative integer, got `{text}`"
            ))
        }),
        Err(_) => Ok(0),
    }
}

pub fn sweep_cmd(args: &SweepArgs, out: &mut Output) -> Result<String, CliError> {
    with_real!(args.stab.backend.spec()?, sweep_in(args, out))
}

fn sweep_in<R: Real>(
    ctx: &R::Context,
    args: &SweepArgs,
    out: &mut Output,
) -> Result<String, CliError> {
    let net: NetSpec = args.net.parse()?;
    let params = map_params::<R>(&args.stab.map.h, ctx)?;
    let coeffs = coefficients::<R>(&args.stab.sigma, ctx)?;
    let config = SweepConfig {
        k: args.stab.map.k,
        steps: args.steps,
        tolerance: args.tol,
        threads: thread_cap()?,
    };
    let result = sweep(&net, &params, &coeffs, &config)?;
    let mut table = TableFile::new(["x0", "outcome", "final", "distance"]);
    for (x0, outcome) in result.points.iter().zip(&result.outcomes) {
        table.push_row(vec![
            x0.to_text(),
            outcome.variant.to_string(),
            outcome.final_value.to_text(),
            outcome.distance.to_string(),
        ]);
    }
    out.table(
        "sweep.csv",
        &table,
        args.plot.then_some((0, 2, PlotStyle::Scatter)),
    )?;
    let summary = json!({
        "net": net.to_string(),
        "steps": result.steps,
        "tolerance": result.tolerance,
        "counts": result.counts,
    });
    out.json("sweep.json", &summary)
}

pub fn escape(args: &EscapeArgs, out: &mut Output) -> Result<String, CliError> {
    with_real!(args.stab.backend.spec()?, escape_in(args, out))
}

fn escape_in<R: Real>(
    ctx: &R::Context,
    args: &EscapeArgs,
    out: &mut Output,
) -> Result<String, CliError> {
    let params = map_params::<R>(&args.stab.map.h, ctx)?;
    let coeffs = coefficients::<R>(&args.stab.sigma, ctx)?;
    let run = stabilized_orbit(
        &parse::<R>(&args.x0, ctx)?,
        &params,
        args.stab.map.k,
        &coeffs,
        args.steps,
    )?;
    out.table(
        "escape.csv",
        &n_x_table("x_star", &run.starred),
        line(args.plot),
    )?;
    let tolerances = EscapeTolerances {
        flat_tol: args.flat_tol,
        jump_tol: args.jump_tol,
        min_flat: args.min_flat,
    };
    let event = detect_escape(&run.starred, &tolerances).map(|e| {
        json!({
            "flat_value": e.flat_value.to_text(),
            "flat_start": e.flat_start,
            "flat_end": e.flat_end,
            "escape_index": e.escape_index,
            "terminal_value": e.terminal_value.to_text(),
        })
    });
    out.json(
        "escape.json",
        &json!({ "x0": run.x0.to_text(), "escape": event }),
    )
}

pub fn series(args: &SeriesArgs, out: &mut Output) -> Result<(), CliError> {
    with_real!(args.backend.spec()?, series_in(args, out))
}

fn series_in<R: Real>(
    ctx: &R::Context,
    args: &SeriesArgs,
    out: &mut Output,
) -> Result<(), CliError> {
    let params = map_params::<R>(&args.h, ctx)?;
    let run = chaotic_series(&params, args.steps)?;
    out.table("series.csv", &n_x_table("x", &run.points), line(args.plot))
}

pub fn sqrt2(args: &Sqrt2Args, out: &mut Output) -> Result<String, CliError> {
    let report = sqrt2_experiment(&args.h, args.precision, args.steps)?;
    let mut table = TableFile::new(["n", "x", "deviation"]);
    for (n, x) in report.orbit.points.iter().enumerate() {
        table.push_row(vec![
            n.to_string(),
            x.to_text(),
            format!("{:e}", report.deviation(n)),
        ]);
    }
    out.table("sqrt2.csv", &table, line(args.plot))?;
    let escape = report.escape.as_ref().map(|e| {
        json!({
            "flat_start": e.flat_start,
            "flat_end": e.flat_end,
            "escape_index": e.escape_index,
        })
    });
    let x3_deviation = (args.steps >= 3).then(|| report.deviation(3));
    let summary = json!({
        "precision": args.precision,
        "reference": report.reference.to_text(),
        "x3_deviation": x3_deviation,
        "escape": escape,
    });
    out.json("sqrt2.json", &summary)
}

pub fn fib(args: &FibArgs, out: &mut Output) -> Result<String, CliError> {
    with_real!(args.backend.spec()?, fib_in(args, out))
}

fn fib_in<R: Real>(ctx: &R::Context, args: &FibArgs, out: &mut Output) -> Result<String, CliError> {
    let x0 = parse::<R>(&args.x0, ctx)?;
    let x1 = parse::<R>(&args.x1, ctx)?;
    let run = recurrence(&x0, &x1, args.steps);
    out.table("fib.csv", &n_x_table("x", &run.seq), line(args.plot))?;
    let data = decompose(&x0, &x1);
    let mut summary = json!({
        "a_u": data.a_u,
        "a_s": data.a_s,
        "predicted_escape": predict_escape_index(&x0, &x1, args.threshold),
        "observed_escape": run.first_exceeding(args.threshold),
    });
    if args.phase {
        let mut phase = TableFile::new(["x_n", "x_n1"]);
        for pair in run.seq.windows(2) {
            phase.push_row(vec![pair[0].to_text(), pair[1].to_text()]);
        }
        out.table(
            "fib_phase.csv",
            &phase,
            args.plot.then_some((0, 1, PlotStyle::Scatter)),
        )?;
        let (phi, _) = golden::<R>(ctx);
        let stable = -(R::one(ctx) / phi.clone());
        summary["manifold_slopes"] = json!({
            "unstable": phi.to_text(),
            "stable": stable.to_text(),
        });
    }
    out.json("fib.json", &summary)
}

pub fn spectrum(args: &SpectrumArgs, out: &mut Output) -> Result<String, CliError> {
    with_real!(args.stab.backend.spec()?, spectrum_in(args, out))
}

fn spectrum_in<R: Real>(
    ctx: &R::Context,
    args: &SpectrumArgs,
    out: &mut Output,
) -> Result<String, CliError> {
    let coeffs = coefficients::<R>(&args.stab.sigma, ctx)?;
    let mut summary = json!({
        "sigma": coeffs.sigma.to_text(),
        "coefficients": text_list(&coeffs.a),
    });
    if let Some(mu) = args.mu {
        summary["mu"] = json!(mu);
        summary["spectrum"] = serde_json::to_value(companion_spectrum(mu, &coeffs)?)?;
    } else {
        let params = map_params::<R>(&args.stab.map.h, ctx)?;
        let reports = classify_equilibria(&params, args.stab.map.k, &coeffs)?;
        let equilibria: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "point": r.point.to_text(),
                    "slope": r.slope.to_text(),
                    "spectral_radius": r.spectral_radius,
                    "stable": r.stable,
                })
            })
            .collect();
        summary["equilibria"] = Value::Array(equilibria);
    }
    out.json("spectrum.json", &summary)
}
