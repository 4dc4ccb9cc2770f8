//! The four built-in figure presets: drift-derivative and level-derivative
//! curves on the normalized parameter family, and the two fixed-probability
//! level plots with Monte Carlo reference values.

use std::path::Path;

use clap::ValueEnum;

use levelcross::coreint::CoreParams;
use levelcross::deriv::{a_dc, a_du, approx_dc, approx_du};
use levelcross::level::{
    bounds_subcritical, solve_heuristic_level, upper_bound_supercritical,
};
use levelcross::mc::{simulate_level, McConfig};
use levelcross::RenewalModel;

use crate::model::preset_model;
use crate::svg::{line_plot, Series, PALETTE};

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// c-sweep of the drift-rate derivative: large-u form vs exact, u=40, t=100
    Fig1,
    /// u-sweeps of the level derivative at c=0.8 and c=1.2, t=100
    Fig2,
    /// level curve, exponential/Pareto model: heuristic vs simulated, t=200
    Fig3,
    /// level bounds, Erlang/exponential model, with simulated levels, t=200
    Fig4,
}

pub fn run(preset: Preset, paths: usize, seed: u64, out: &Path) -> Result<(), String> {
    std::fs::create_dir_all(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    let (name, csv, svg) = match preset {
        Preset::Fig1 => fig1()?,
        Preset::Fig2 => fig2()?,
        Preset::Fig3 => fig3(paths, seed)?,
        Preset::Fig4 => fig4(paths, seed)?,
    };
    let csv_path = out.join(format!("{name}.csv"));
    let svg_path = out.join(format!("{name}.svg"));
    std::fs::write(&csv_path, &csv).map_err(|e| e.to_string())?;
    std::fs::write(&svg_path, &svg).map_err(|e| e.to_string())?;
    println!("{}", csv_path.display());
    println!("{}", svg_path.display());
    Ok(())
}

/// Normalized parameter family used by the derivative figures.
const M: f64 = 1.0;
const DSQ: f64 = 6.0;
const FAMILY: &str = "family:m=1,dsq=6";

fn family_hash() -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(FAMILY.as_bytes()).iter().take(6).map(|b| format!("{b:02x}")).collect()
}

fn fig1() -> Result<(String, String, String), String> {
    let (u, t) = (40.0, 100.0);
    let hash = family_hash();
    let mut csv = String::from("model_hash,u,t,c,approx_dc,exact_dc\n");
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    for i in 0..60 {
        let c = 0.05 + 1.95 * i as f64 / 59.0;
        let p = CoreParams::new(u, c, t, 0.0, M, DSQ).map_err(|e| e.to_string())?;
        let f = approx_dc(&p).map_err(|e| e.to_string())?.value;
        let exact = a_dc(&p).map_err(|e| e.to_string())?;
        csv.push_str(&format!("{hash},{u},{t},{c:.6},{f:.10e},{exact:.10e}\n"));
        s1.push((c, f));
        s2.push((c, exact));
    }
    let svg = line_plot(
        "derivative of the crossing probability in c (u=40, t=100, M=1, D\u{b2}=6)",
        "c",
        "d/dc",
        &[
            Series { name: "large-u form F".into(), color: PALETTE[0], points: s1, dashed: false },
            Series { name: "exact dA/dc".into(), color: PALETTE[1], points: s2, dashed: true },
        ],
        &[1.0],
        &[0.0],
    );
    Ok(("fig1".into(), csv, svg))
}

fn fig2() -> Result<(String, String, String), String> {
    let t = 100.0;
    let hash = family_hash();
    let mut csv =
        String::from("model_hash,t,u,approx_du_c0.8,exact_du_c0.8,approx_du_c1.2,exact_du_c1.2\n");
    let mut series = vec![Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for i in 0..50 {
        let u = 5.0 + 245.0 * i as f64 / 49.0;
        let mut row = format!("{hash},{t},{u:.6}");
        for (j, &c) in [0.8, 1.2].iter().enumerate() {
            let p = CoreParams::new(u, c, t, 0.0, M, DSQ).map_err(|e| e.to_string())?;
            let g = approx_du(&p).map_err(|e| e.to_string())?.value;
            let exact = a_du(&p).map_err(|e| e.to_string())?;
            row.push_str(&format!(",{g:.10e},{exact:.10e}"));
            series[2 * j].push((u, g));
            series[2 * j + 1].push((u, exact));
        }
        csv.push_str(&row);
        csv.push('\n');
    }
    let mut it = series.into_iter();
    let svg = line_plot(
        "derivative of the crossing probability in u (t=100, M=1, D\u{b2}=6)",
        "u",
        "d/du",
        &[
            Series { name: "large-u form G, c=0.8".into(), color: PALETTE[0], points: it.next().unwrap(), dashed: false },
            Series { name: "exact dA/du, c=0.8".into(), color: PALETTE[1], points: it.next().unwrap(), dashed: true },
            Series { name: "large-u form G, c=1.2".into(), color: PALETTE[2], points: it.next().unwrap(), dashed: false },
            Series { name: "exact dA/du, c=1.2".into(), color: PALETTE[3], points: it.next().unwrap(), dashed: true },
        ],
        &[],
        &[0.0],
    );
    Ok(("fig2".into(), csv, svg))
}

fn mc_level_points(
    model: &RenewalModel,
    cs: &[f64],
    paths: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>, String> {
    let cfg = McConfig { npaths: paths, seed, ..Default::default() };
    cs.iter()
        .map(|&c| {
            simulate_level(model, 0.05, 200.0, c, &cfg)
                .map(|rep| (c, rep.level))
                .map_err(|e| format!("simulated level at c = {c}: {e}"))
        })
        .collect()
}

fn fig3(paths: usize, seed: u64) -> Result<(String, String, String), String> {
    let loaded = preset_model("fig3")?;
    let (alpha, t) = (0.05, 200.0);
    let cstar = 16.0 / 9.0;
    let mut heuristic = Vec::new();
    let mut csv = String::from("model_hash,alpha,t,paths,seed,c,heuristic_level,mc_level\n");
    let mc_cs: Vec<f64> = (0..9).map(|i| 2.2 * i as f64 / 8.0).collect();
    let mc = mc_level_points(&loaded.model, &mc_cs, paths, seed)?;
    for i in 0..45 {
        let c = 2.2 * i as f64 / 44.0;
        let lvl = solve_heuristic_level(&loaded.model, alpha, t, c, 1e-6)
            .map_err(|e| e.to_string())?
            .level;
        heuristic.push((c, lvl));
        let mc_cell = mc
            .iter()
            .find(|(cc, _)| (cc - c).abs() < 1e-9)
            .map(|&(_, l)| format!("{l:.10e}"))
            .unwrap_or_default();
        csv.push_str(&format!(
            "{},{alpha},{t},{paths},{seed},{c:.6},{lvl:.10e},{mc_cell}\n",
            loaded.hash
        ));
    }
    let svg = line_plot(
        "fixed-probability level, exponential/Pareto model (alpha=0.05, t=200)",
        "c",
        "level",
        &[
            Series { name: "heuristic level".into(), color: PALETTE[0], points: heuristic, dashed: false },
            Series { name: "simulated level".into(), color: PALETTE[1], points: mc, dashed: true },
        ],
        &[cstar],
        &[80.0],
    );
    Ok(("fig3".into(), csv, svg))
}

fn fig4(paths: usize, seed: u64) -> Result<(String, String, String), String> {
    let loaded = preset_model("fig4")?;
    let (alpha, t) = (0.05, 200.0);
    let cstar = 4.0 / 3.0;
    let mut lo_pts = Vec::new();
    let mut hi_pts = Vec::new();
    let mut up_pts = Vec::new();
    let mut csv = String::from(
        "model_hash,alpha,t,paths,seed,c,lower_bound,upper_bound,exp_upper_bound,mc_level\n",
    );
    let mc_cs: Vec<f64> = (0..9).map(|i| 2.4 * i as f64 / 8.0).collect();
    let mc = mc_level_points(&loaded.model, &mc_cs, paths, seed)?;
    for i in 0..49 {
        let c = 2.4 * i as f64 / 48.0;
        let (mut lo_c, mut hi_c, mut up_c) = (String::new(), String::new(), String::new());
        if c <= cstar {
            let (lo, hi) = bounds_subcritical(&loaded.model, alpha, t, c).map_err(|e| e.to_string())?;
            lo_pts.push((c, lo));
            hi_pts.push((c, hi));
            lo_c = format!("{lo:.10e}");
            hi_c = format!("{hi:.10e}");
        } else if c >= 1.1 * cstar {
            // skip the immediate right neighborhood of c*, where the
            // adjustment coefficient vanishes and the bound blows up
            let up = upper_bound_supercritical(&loaded.model, alpha, c).map_err(|e| e.to_string())?;
            up_pts.push((c, up));
            up_c = format!("{up:.10e}");
        }
        let mc_cell = mc
            .iter()
            .find(|(cc, _)| (cc - c).abs() < 1e-9)
            .map(|&(_, l)| format!("{l:.10e}"))
            .unwrap_or_default();
        csv.push_str(&format!(
            "{},{alpha},{t},{paths},{seed},{c:.6},{lo_c},{hi_c},{up_c},{mc_cell}\n",
            loaded.hash
        ));
    }
    let svg = line_plot(
        "level bounds, Erlang/exponential model (alpha=0.05, t=200)",
        "c",
        "level",
        &[
            Series { name: "two-sided lower".into(), color: PALETTE[0], points: lo_pts, dashed: false },
            Series { name: "two-sided upper".into(), color: PALETTE[2], points: hi_pts, dashed: false },
            Series { name: "exponential upper bound".into(), color: PALETTE[4], points: up_pts, dashed: false },
            Series { name: "simulated level".into(), color: PALETTE[1], points: mc, dashed: true },
        ],
        &[cstar],
        &[48.0],
    );
    Ok(("fig4".into(), csv, svg))
}
