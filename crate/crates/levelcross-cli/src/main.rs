//! Command-line front end: model files in, CSV (and SVG figures) out.

mod figures;
mod model;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use levelcross::coreint::{approx_crossing_prob_with, ApproxVariant, CoreParams};
use levelcross::deriv::{a_dc, a_du, approx_dc, approx_du, QualityFlag};
use levelcross::kendall::{GridConfig, KendallEvaluator};
use levelcross::level::{
    adjustment_coefficient, bounds_subcritical, solve_heuristic_level_with,
    upper_bound_supercritical, LevelMethod, LevelReport,
};
use levelcross::mc::{estimate_crossing_prob, simulate_level, McConfig};

use model::LoadedModel;

#[derive(Parser)]
#[command(
    name = "levelcross",
    version,
    about = "First level-crossing times of compound renewal processes: \
             approximations, exact series, derivatives, fixed-probability levels, \
             bounds, and Monte Carlo"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ModelArg {
    /// model file (key-value text; see `moments --help`)
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args)]
struct OutArg {
    /// directory to also write the CSV into (created if missing)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArg {
    /// sweep specification lo:hi:n replacing the swept parameter
    #[arg(long)]
    sweep: Option<String>,
}

#[derive(Args)]
struct McArgs {
    /// simulated paths
    #[arg(long, default_value_t = 100_000)]
    paths: usize,
    /// random seed; every output row records it
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Conditional,
    Convolution,
    Plain,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SweepVar {
    U,
    C,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Root,
    Mc,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the model's moment summary: ET, EY, DT, DY, M, D^2, c*
    Moments {
        #[command(flatten)]
        model: ModelArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Crossing-probability approximation at (u, c, t)
    Approx {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        t: f64,
        /// weighting of the kernel
        #[arg(long, value_enum, default_value_t = VariantArg::Conditional)]
        variant: VariantArg,
        #[command(flatten)]
        sweep: SweepArg,
        /// which parameter the sweep replaces
        #[arg(long, value_enum, default_value_t = SweepVar::C)]
        sweep_var: SweepVar,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exact crossing probability via the renewal-measure series
    Kendall {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        t: f64,
        /// condition on the first renewal at v (omit for unconditional)
        #[arg(long)]
        v: Option<f64>,
        /// grid resolution target
        #[arg(long, default_value_t = 4000)]
        grid_points: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Derivatives of the approximation in c and u: exact and large-u forms
    Deriv {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        sweep: SweepArg,
        #[arg(long, value_enum, default_value_t = SweepVar::C)]
        sweep_var: SweepVar,
        #[command(flatten)]
        out: OutArg,
    },
    /// Fixed-probability level: root of the approximation or MC bisection
    Level {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        c: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Root)]
        method: MethodArg,
        /// root-solver tolerance on the probability residual
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        sweep: SweepArg,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Elementary level bounds: two-sided below c*, exponential above
    Bounds {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        sweep: SweepArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Monte Carlo estimate of the crossing probability
    Simulate {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Reproduce one of the four built-in figures (CSV + SVG)
    Figure {
        /// which figure preset to run
        #[arg(long, value_enum)]
        preset: figures::Preset,
        /// simulated paths for the MC curves (figures 3 and 4)
        #[arg(long, default_value_t = 20_000)]
        paths: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn parse_sweep(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(format!("sweep `{spec}` is not of the form lo:hi:n"));
    };
    let lo: f64 = lo.parse().map_err(|_| format!("sweep lower bound `{lo}` is not a number"))?;
    let hi: f64 = hi.parse().map_err(|_| format!("sweep upper bound `{hi}` is not a number"))?;
    let n: usize = n.parse().map_err(|_| format!("sweep count `{n}` is not an integer"))?;
    if n < 2 || hi <= lo {
        return Err(format!("sweep `{spec}` needs hi > lo and n >= 2"));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn emit(csv: &str, out: &OutArg, name: &str) -> Result<(), String> {
    print!("{csv}");
    if let Some(dir) = &out.out {
        std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
        let path = dir.join(format!("{name}.csv"));
        std::fs::write(&path, csv).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:.10e}")
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.cmd {
        Cmd::Moments { model, out } => {
            let LoadedModel { model, hash } = model::load_model(&model.model)?;
            let s = model.summary().map_err(|e| e.to_string())?;
            eprintln!(
                "ET {:.6}  EY {:.6}  DT {:.6}  DY {:.6}  M {:.6}  D^2 {:.6}  c* {:.6}",
                s.et, s.ey, s.dt, s.dy, s.m, s.dsq, s.cstar
            );
            let csv = format!(
                "model_hash,et,ey,dt,dy,m,dsq,cstar\n{hash},{},{},{},{},{},{},{}\n",
                fmt(s.et),
                fmt(s.ey),
                fmt(s.dt),
                fmt(s.dy),
                fmt(s.m),
                fmt(s.dsq),
                fmt(s.cstar)
            );
            emit(&csv, &out, "moments")
        }
        Cmd::Approx { model, u, c, t, variant, sweep, sweep_var, out } => {
            let LoadedModel { model, hash } = model::load_model(&model.model)?;
            let s = model.summary().map_err(|e| e.to_string())?;
            let variant_name = match variant {
                VariantArg::Conditional => "conditional",
                VariantArg::Convolution => "convolution",
                VariantArg::Plain => "plain",
            };
            let variant = match variant {
                VariantArg::Conditional => ApproxVariant::ConditionalWeighted,
                VariantArg::Convolution => ApproxVariant::ConvolutionWeighted,
                VariantArg::Plain => ApproxVariant::Plain,
            };
            let mut csv =
                String::from("model_hash,variant,u,c,t,prob,clamped_diag\n");
            for (u, c) in sweep_points(u, c, &sweep, sweep_var)? {
                let r = approx_crossing_prob_with(&model, &s, u, c, t, variant)
                    .map_err(|e| e.to_string())?;
                csv.push_str(&format!(
                    "{hash},{variant_name},{},{},{},{},{}\n",
                    fmt(u),
                    fmt(c),
                    fmt(t),
                    fmt(r.value),
                    r.clamped
                ));
            }
            emit(&csv, &out, "approx")
        }
        Cmd::Kendall { model, u, c, t, v, grid_points, out } => {
            let LoadedModel { model, hash } = model::load_model(&model.model)?;
            let cfg = GridConfig { target_points: grid_points, ..Default::default() };
            let eval = KendallEvaluator::new(&model, u, c, t, &cfg).map_err(|e| e.to_string())?;
            let prob = match v {
                Some(v) => eval.conditional(v).map_err(|e| e.to_string())?,
                None => eval.unconditional().map_err(|e| e.to_string())?,
            };
            let d = eval.diagnostics();
            let csv = format!(
                "model_hash,u,c,t,v,prob,h_diag,orders_diag,neglected_mass_diag\n\
                 {hash},{},{},{},{},{},{},{},{}\n",
                fmt(u),
                fmt(c),
                fmt(t),
                v.map(fmt).unwrap_or_default(),
                fmt(prob),
                fmt(d.h),
                d.orders,
                fmt(d.neglected_mass)
            );
            emit(&csv, &out, "kendall")
        }
        Cmd::Deriv { model, u, c, t, sweep, sweep_var, out } => {
            let LoadedModel { model, hash } = model::load_model(&model.model)?;
            let s = model.summary().map_err(|e| e.to_string())?;
            let mut csv = String::from(
                "model_hash,u,c,t,approx_dc,exact_dc,approx_du,exact_du,quality_diag\n",
            );
            for (u, c) in sweep_points(u, c, &sweep, sweep_var)? {
                let p = CoreParams::new(u, c, t, 0.0, s.m, s.dsq).map_err(|e| e.to_string())?;
                let f = approx_dc(&p).map_err(|e| e.to_string())?;
                let g = approx_du(&p).map_err(|e| e.to_string())?;
                let quality = match f.quality {
                    QualityFlag::LargeUOk => "large_u_ok",
                    QualityFlag::SmallUWarning => "small_u_warning",
                };
                csv.push_str(&format!(
                    "{hash},{},{},{},{},{},{},{},{quality}\n",
                    fmt(u),
                    fmt(c),
                    fmt(t),
                    fmt(f.value),
                    fmt(a_dc(&p).map_err(|e| e.to_string())?),
                    fmt(g.value),
                    fmt(a_du(&p).map_err(|e| e.to_string())?),
                ));
            }
            emit(&csv, &out, "deriv")
        }
        Cmd::Level { model, alpha, t, c, method, tol, sweep, mc, out } => {
            let LoadedModel { model, hash } = model::load_model(&model.model)?;
            let s = model.summary().map_err(|e| e.to_string())?;
            let cs = match &sweep.sweep {
                Some(spec) => parse_sweep(spec)?,
                None => vec![c],
            };
            let cfg = McConfig { npaths: mc.paths, seed: mc.seed, ..Default::default() };
            let mut csv = String::from(
                "model_hash,alpha,t,c,level,method_diag,residual_diag,iterations_diag,\
                 bracket_lo_diag,bracket_hi_diag,paths,seed,tol\n",
            );
            for &c in &cs {
                let rep = match method {
                    MethodArg::Root => {
                        solve_heuristic_level_with(&s, alpha, t, c, tol).map_err(|e| e.to_string())?
                    }
                    MethodArg::Mc => {
                        simulate_level(&model, alpha, t, c, &cfg).map_err(|e| e.to_string())?
                    }
                };
                csv.push_str(&level_row(&hash, &rep, &mc, tol));
            }
            emit(&csv, &out, "level")
        }
        Cmd::Bounds { model, alpha, t, c, sweep, out } => {
            let LoadedModel { model, hash } = model::load_model(&model.model)?;
            let s = model.summary().map_err(|e| e.to_string())?;
            let cs = match &sweep.sweep {
                Some(spec) => parse_sweep(spec)?,
                None => vec![c],
            };
            let mut csv = String::from("model_hash,alpha,t,c,lower,upper,kappa_diag\n");
            for &c in &cs {
                if c <= s.cstar {
                    let (lo, hi) =
                        bounds_subcritical(&model, alpha, t, c).map_err(|e| e.to_string())?;
                    csv.push_str(&format!(
                        "{hash},{},{},{},{},{},\n",
                        fmt(alpha),
                        fmt(t),
                        fmt(c),
                        fmt(lo),
                        fmt(hi)
                    ));
                } else {
                    let kappa = adjustment_coefficient(&model, c).map_err(|e| e.to_string())?;
                    let hi =
                        upper_bound_supercritical(&model, alpha, c).map_err(|e| e.to_string())?;
                    csv.push_str(&format!(
                        "{hash},{},{},{},,{},{}\n",
                        fmt(alpha),
                        fmt(t),
                        fmt(c),
                        fmt(hi),
                        fmt(kappa)
                    ));
                }
            }
            emit(&csv, &out, "bounds")
        }
        Cmd::Simulate { model, u, c, t, mc, out } => {
            let LoadedModel { model, hash } = model::load_model(&model.model)?;
            let cfg = McConfig { npaths: mc.paths, seed: mc.seed, ..Default::default() };
            let e = estimate_crossing_prob(&model, u, c, t, &cfg);
            let csv = format!(
                "model_hash,u,c,t,phat,stderr_diag,paths,seed\n{hash},{},{},{},{},{},{},{}\n",
                fmt(u),
                fmt(c),
                fmt(t),
                fmt(e.phat),
                fmt(e.stderr),
                e.npaths,
                e.seed
            );
            emit(&csv, &out, "simulate")
        }
        Cmd::Figure { preset, paths, seed, out } => figures::run(preset, paths, seed, &out),
    }
}

fn sweep_points(
    u: f64,
    c: f64,
    sweep: &SweepArg,
    var: SweepVar,
) -> Result<Vec<(f64, f64)>, String> {
    Ok(match &sweep.sweep {
        None => vec![(u, c)],
        Some(spec) => {
            let vals = parse_sweep(spec)?;
            match var {
                SweepVar::U => vals.into_iter().map(|x| (x, c)).collect(),
                SweepVar::C => vals.into_iter().map(|x| (u, x)).collect(),
            }
        }
    })
}

fn level_row(hash: &str, rep: &LevelReport, mc: &McArgs, tol: f64) -> String {
    let method = match rep.method {
        LevelMethod::RootOnA => "root_on_a",
        LevelMethod::McBisection => "mc_bisection",
        LevelMethod::AsymSub => "asym_sub",
        LevelMethod::AsymCriticalBand => "asym_critical_band",
        LevelMethod::AsymSuper => "asym_super",
    };
    let (paths, seed, tol_str) = match rep.method {
        LevelMethod::McBisection => (mc.paths.to_string(), mc.seed.to_string(), String::new()),
        _ => (String::new(), String::new(), fmt(tol)),
    };
    format!(
        "{hash},{},{},{},{},{method},{},{},{},{},{paths},{seed},{tol_str}\n",
        fmt(rep.alpha),
        fmt(rep.t),
        fmt(rep.c),
        fmt(rep.level),
        fmt(rep.residual),
        rep.iterations,
        fmt(rep.bracket.0),
        fmt(rep.bracket.1)
    )
}
