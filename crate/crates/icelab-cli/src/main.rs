//! `icelab`: batch experiments on the six-vertex model and its
//! random-matrix limits. Every subcommand writes machine-readable CSV/JSON
//! plus a manifest, prints a JSON summary to stdout, and exits 0 on
//! success, 1 on usage errors, 2 on tolerance failures.

mod output;

use clap::{Args, Parser, Subcommand};
use icelab_core::contour_asymptotics::{self, QsumForm};
use icelab_core::core_model::{BoundaryCondition, BoundaryData, WeightField};
use icelab_core::dwbc_mcmc::{self, McmcChain, McmcParams, WeightSpec};
use icelab_core::ik_determinants::{self, SpectralVectors};
use icelab_core::rng::CounterRng;
use icelab_core::schur_engine;
use icelab_core::stochastic_simulator::{self, StochasticParams};
use icelab_core::{exact_enum, rmt_reference, stats, suite, yang_baxter, Complex64};
use output::{default_seed, fmt_f64, write_atomic, Csv, Manifest};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_TOLERANCE: u8 = 2;

#[derive(Parser)]
#[command(name = "icelab", version, about = "six-vertex model laboratory")]
struct Cli {
    /// Directory for CSV/JSON outputs and manifests
    #[arg(long, default_value = "icelab-out", global = true)]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Numerical verification of exact identities
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
    /// Brute-force enumeration of small systems
    Enum(EnumArgs),
    /// Schur-measure expectations
    Schur {
        #[command(subcommand)]
        which: SchurCmd,
    },
    /// Contour-integral evaluations and scaling sweeps
    Contour {
        #[command(subcommand)]
        which: ContourCmd,
    },
    /// Stochastic sampling
    Sample {
        #[command(subcommand)]
        which: SampleCmd,
    },
    /// Markov-chain sampling of DWBC states
    Mcmc {
        #[command(subcommand)]
        which: McmcCmd,
    },
    /// Random-matrix reference numerics
    Rmt {
        #[command(subcommand)]
        which: RmtCmd,
    },
    /// Run the acceptance criteria
    Suite {
        /// run only the fast criteria
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Yang-Baxter residuals over all 64 boundaries
    Ybe {
        #[arg(long)]
        u: Option<f64>,
        #[arg(long)]
        v: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        /// additionally check this many random draws
        #[arg(long, default_value_t = 0)]
        draws: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// enumeration vs the domain-wall determinant formula
    Ik {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        draws: usize,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// enumeration vs the free-boundary determinant formula
    Ikfree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        draws: usize,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Args)]
struct EnumArgs {
    /// boundary condition: dwbc or free
    #[arg(long)]
    bc: String,
    #[arg(long)]
    n: usize,
    /// column spectral parameters, comma separated (defaults to all 1)
    #[arg(long, value_delimiter = ',')]
    x: Option<Vec<f64>>,
    /// row spectral parameters, comma separated
    #[arg(long, value_delimiter = ',')]
    y: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// also evaluate E[(1-w)(1-wt)...] at this w (free boundary only)
    #[arg(long)]
    w: Option<f64>,
    /// write every configuration (grid format plus weight) to configs.txt
    #[arg(long)]
    list_configs: bool,
}

#[derive(Subcommand)]
enum SchurCmd {
    /// truncated Schur-measure expectation of a named functional
    Expect {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        y: Vec<f64>,
        /// functional: qsum (sum over complement points) or wprod
        /// (prod (1 - w t^{lambda_i + N - i}))
        #[arg(long)]
        f: String,
        #[arg(long, value_delimiter = ',')]
        q: Option<Vec<f64>>,
        #[arg(long)]
        w: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        cutoff: Option<usize>,
    },
}

#[derive(Subcommand)]
enum ContourCmd {
    /// k-fold contour value of the q-power-sum observable
    Qsum {
        #[arg(long, value_delimiter = ',')]
        x: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        y: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        q: Vec<f64>,
        /// particles or complement
        #[arg(long, default_value = "complement")]
        form: String,
    },
    /// scaled one-q observable along an N sweep, with its limit value
    Oneq {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        u: f64,
        #[arg(long, value_delimiter = ',', default_value = "200,500,1000,2000")]
        ns: Vec<usize>,
    },
    /// vertical-line Airy Laplace transform
    Airy {
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<f64>>,
        #[arg(long, default_value_t = 320)]
        nodes: usize,
    },
}

#[derive(Subcommand)]
enum SampleCmd {
    /// stochastic six-vertex heights with Tracy-Widom standardization
    Stochastic {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum McmcCmd {
    /// Metropolis chain on DWBC configurations; corners observables
    Dwbc {
        #[arg(long)]
        n: usize,
        /// uniform or dz:<theta>
        #[arg(long, default_value = "uniform")]
        weights: String,
        /// retained samples
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// sweeps between retained samples
        #[arg(long, default_value_t = 16)]
        sweeps: usize,
        /// burn-in sweeps (default 10 n^2)
        #[arg(long)]
        burnin: Option<usize>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Subcommand)]
enum RmtCmd {
    /// Tracy-Widom F2 values
    F2 {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        order: usize,
    },
    /// GUE corners samples
    Corners {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// rescaled largest GUE eigenvalue vs F2
    Edge {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage problems exit 1 (clap would default to 2, which is
            // reserved for tolerance failures here)
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let started = Instant::now();
    let out_dir = cli.out_dir.clone();
    std::fs::create_dir_all(&out_dir)?;
    let (manifest, summary, exit) = match cli.command {
        Command::Verify { which } => run_verify(which, &out_dir)?,
        Command::Enum(args) => run_enum(args, &out_dir)?,
        Command::Schur { which } => run_schur(which)?,
        Command::Contour { which } => run_contour(which, &out_dir)?,
        Command::Sample { which } => run_sample(which, &out_dir)?,
        Command::Mcmc { which } => run_mcmc(which, &out_dir)?,
        Command::Rmt { which } => run_rmt(which, &out_dir)?,
        Command::Suite { quick } => run_suite_cmd(quick, &out_dir)?,
    };
    let manifest_path = manifest.write(&out_dir, started.elapsed().as_millis())?;
    let mut summary = summary;
    summary["manifest"] = json!(manifest_path.display().to_string());
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(ExitCode::from(exit))
}

fn reals(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

type CmdResult = Result<(Manifest, Value, u8), Box<dyn std::error::Error>>;

fn run_verify(cmd: VerifyCmd, _out: &PathBuf) -> CmdResult {
    match cmd {
        VerifyCmd::Ybe { u, v, t, draws, seed, tol } => {
            let seed = seed.unwrap_or_else(default_seed);
            let mut worst = 0.0f64;
            let mut worst_boundary = (0, 0, 0, 0, 0, 0);
            let mut checked = 0usize;
            let mut eval = |u: f64, v: f64, t: f64| -> Result<(), Box<dyn std::error::Error>> {
                let (m, b) = yang_baxter::ybe_max_residual(
                    Complex64::new(u, 0.0),
                    Complex64::new(v, 0.0),
                    Complex64::new(t, 0.0),
                )?;
                if m > worst {
                    worst = m;
                    worst_boundary = b;
                }
                checked += 1;
                Ok(())
            };
            if let (Some(u), Some(v), Some(t)) = (u, v, t) {
                eval(u, v, t)?;
            }
            let mut rng = CounterRng::new(seed, 0);
            let mut done = 0;
            while done < draws {
                let (u, v, t) = (0.02 + 0.96 * rng.uniform(), 0.02 + 0.96 * rng.uniform(), 0.02 + 0.96 * rng.uniform());
                if (1.0 - t * u / v).abs() < 1e-3 {
                    continue;
                }
                eval(u, v, t)?;
                done += 1;
            }
            if checked == 0 {
                return Err("provide --u/--v/--t or --draws".into());
            }
            let pass = worst < tol;
            let summary = json!({
                "max_residual": worst,
                "worst_boundary": format!("{worst_boundary:?}"),
                "parameter_sets": checked,
                "tolerance": tol,
                "pass": pass,
            });
            let manifest = Manifest::new(
                "verify ybe",
                json!({"u": u, "v": v, "t": t, "draws": draws, "tol": tol}),
                Some(seed),
            );
            Ok((manifest, summary, if pass { 0 } else { EXIT_TOLERANCE }))
        }
        VerifyCmd::Ik { n, draws, t, seed, tol } => {
            let seed = seed.unwrap_or_else(default_seed);
            let mut rng = CounterRng::new(seed, 0);
            let mut max_rel = 0.0f64;
            let mut worst_draw = json!(null);
            for d in 0..draws {
                let x = draw_sep(&mut rng, n);
                let y = draw_sep(&mut rng, n);
                let tv = Complex64::new(t.unwrap_or_else(|| 0.05 + 0.85 * rng.uniform()), 0.0);
                let sv = SpectralVectors::new(x.clone(), y.clone(), tv)?;
                let det = ik_determinants::ik_rhs(&sv)?;
                let enumd = exact_enum::dwbc_partition(n, &x, &y, tv)?;
                let rel = (det - enumd).norm() / enumd.norm();
                if rel > max_rel {
                    max_rel = rel;
                    worst_draw = json!({"draw": d, "t": tv.re});
                }
            }
            let pass = max_rel < tol;
            let summary = json!({"max_rel_err": max_rel, "worst_draw": worst_draw, "tolerance": tol, "pass": pass});
            let manifest =
                Manifest::new("verify ik", json!({"n": n, "draws": draws, "t": t, "tol": tol}), Some(seed));
            Ok((manifest, summary, if pass { 0 } else { EXIT_TOLERANCE }))
        }
        VerifyCmd::Ikfree { n, draws, t, seed, tol } => {
            let seed = seed.unwrap_or_else(default_seed);
            let mut rng = CounterRng::new(seed, 0);
            let mut max_rel = 0.0f64;
            let mut worst_draw = json!(null);
            for d in 0..draws {
                let x = draw_sep(&mut rng, n);
                let y = draw_sep(&mut rng, n);
                let tv = Complex64::new(t.unwrap_or_else(|| 0.05 + 0.85 * rng.uniform()), 0.0);
                let w = Complex64::from_polar(2.0 * rng.uniform(), 6.283 * rng.uniform());
                let sv = SpectralVectors::new(x.clone(), y.clone(), tv)?;
                let det = ik_determinants::free_ik_rhs(&sv, w)?;
                let obs = exact_enum::stochastic_free_observable(n, &x, &y, tv, w)?;
                let rel = (det - obs).norm() / obs.norm().max(1e-30);
                if rel > max_rel {
                    max_rel = rel;
                    worst_draw = json!({"draw": d, "w_re": w.re, "w_im": w.im});
                }
            }
            let pass = max_rel < tol;
            let summary = json!({"max_rel_err": max_rel, "worst_draw": worst_draw, "tolerance": tol, "pass": pass});
            let manifest = Manifest::new(
                "verify ikfree",
                json!({"n": n, "draws": draws, "t": t, "tol": tol}),
                Some(seed),
            );
            Ok((manifest, summary, if pass { 0 } else { EXIT_TOLERANCE }))
        }
    }
}

fn draw_sep(rng: &mut CounterRng, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| 0.05 + 0.8 * rng.uniform()).collect();
        let mut ok = true;
        for i in 0..n {
            for j in i + 1..n {
                if (v[i] - v[j]).abs() < 1e-3 {
                    ok = false;
                }
            }
        }
        if ok {
            return reals(&v);
        }
    }
}

fn run_enum(args: EnumArgs, out: &PathBuf) -> CmdResult {
    let n = args.n;
    let x = reals(&args.x.clone().unwrap_or_else(|| vec![1.0; n]));
    let y = reals(&args.y.clone().unwrap_or_else(|| vec![1.0; n]));
    if x.len() != n || y.len() != n {
        return Err("x and y must have length n".into());
    }
    let t = Complex64::new(args.t, 0.0);
    let field = WeightField::spectral(&x, &y, t);
    let bc = match args.bc.as_str() {
        "dwbc" => BoundaryCondition::Fixed(BoundaryData::dwbc(n)),
        "free" => BoundaryCondition::StepFree,
        other => return Err(format!("unknown boundary condition '{other}'").into()),
    };
    let result = exact_enum::enumerate(n, n, &bc, &field)?;
    let mut observables = serde_json::Map::new();
    for (k, v) in &result.observables {
        observables.insert(k.clone(), json!({"re": v.re, "im": v.im}));
    }
    if let Some(w) = args.w {
        if matches!(bc, BoundaryCondition::StepFree) {
            let obs =
                exact_enum::stochastic_free_observable(n, &x, &y, t, Complex64::new(w, 0.0))?;
            observables.insert("free_observable".into(), json!({"re": obs.re, "im": obs.im}));
        }
    }
    let mut manifest = Manifest::new(
        "enum",
        json!({"bc": args.bc, "n": n, "t": args.t, "x": args.x, "y": args.y, "w": args.w,
               "list_configs": args.list_configs}),
        None,
    );
    let mut configs_path = None;
    if args.list_configs {
        let listing = exact_enum::enumerate_with_configs(n, n, &bc, &field)?;
        let mut text = String::new();
        for (cfg, weight) in &listing {
            text.push_str(&cfg.to_grid_string());
            text.push_str(&format!("weight {} {}\n\n", fmt_f64(weight.re), fmt_f64(weight.im)));
        }
        let path = out.join("configs.txt");
        write_atomic(&path, &text)?;
        manifest.record_output(&path);
        configs_path = Some(path.display().to_string());
    }
    let summary = json!({
        "count": result.count,
        "Z": {"re": result.partition_function.re, "im": result.partition_function.im},
        "observables": observables,
        "configs": configs_path,
        "error_estimate": "exact",
    });
    Ok((manifest, summary, 0))
}

fn run_schur(cmd: SchurCmd) -> CmdResult {
    match cmd {
        SchurCmd::Expect { n, x, y, f, q, w, t, cutoff } => {
            let xs = reals(&x);
            let ys = reals(&y);
            let (value, tail) = match f.as_str() {
                "qsum" => {
                    let qs = q.clone().ok_or("qsum needs --q")?;
                    schur_engine::laplace_observable_bruteforce(n, &xs, &ys, &qs, cutoff)?
                }
                "wprod" => {
                    let wv = Complex64::new(w.ok_or("wprod needs --w")?, 0.0);
                    let tv = Complex64::new(t.ok_or("wprod needs --t")?, 0.0);
                    ik_determinants::schur_sum_form(n, &xs, &ys, tv, wv, cutoff)?
                }
                other => return Err(format!("unknown functional '{other}'").into()),
            };
            let summary = json!({
                "value": {"re": value.re, "im": value.im},
                "tail_bound": tail,
            });
            let manifest = Manifest::new(
                "schur expect",
                json!({"n": n, "x": x, "y": y, "f": f, "q": q, "w": w, "t": t, "cutoff": cutoff}),
                None,
            );
            Ok((manifest, summary, 0))
        }
    }
}

fn run_contour(cmd: ContourCmd, out: &PathBuf) -> CmdResult {
    match cmd {
        ContourCmd::Qsum { x, y, q, form } => {
            let form_e = match form.as_str() {
                "particles" => QsumForm::Particles,
                "complement" => QsumForm::Complement,
                other => return Err(format!("unknown form '{other}'").into()),
            };
            let value =
                contour_asymptotics::schur_qsum_contour(&reals(&x), &reals(&y), &q, form_e)?;
            let mut csv = Csv::new(&["k", "value_re", "value_im", "error_estimate"]);
            csv.row(vec![
                q.len().to_string(),
                fmt_f64(value.re),
                fmt_f64(value.im),
                fmt_f64(1e-9),
            ]);
            let path = out.join("contour_qsum.csv");
            csv.write(&path)?;
            let mut manifest = Manifest::new(
                "contour qsum",
                json!({"x": x, "y": y, "q": q, "form": form}),
                None,
            );
            manifest.record_output(&path);
            let summary = json!({"value": {"re": value.re, "im": value.im}, "csv": path.display().to_string()});
            Ok((manifest, summary, 0))
        }
        ContourCmd::Oneq { s, u, ns } => {
            let limit = contour_asymptotics::oneq_limit_value(s, u)?;
            let seq = contour_asymptotics::oneq_scaling_sequence(s, u, &ns)?;
            let mut csv = Csv::new(&["n", "scaled_value", "limit_value"]);
            for (n, v) in &seq {
                csv.row(vec![n.to_string(), fmt_f64(*v), fmt_f64(limit.value)]);
            }
            let path = out.join("contour_oneq.csv");
            csv.write(&path)?;
            let last = seq.last().map(|(_, v)| *v).unwrap_or(f64::NAN);
            let mut manifest = Manifest::new("contour oneq", json!({"s": s, "u": u, "ns": ns}), None);
            manifest.record_output(&path);
            let summary = json!({
                "limit_value": limit.value,
                "alpha": limit.alpha,
                "sigma": limit.sigma,
                "last_scaled": last,
                "csv": path.display().to_string(),
            });
            Ok((manifest, summary, 0))
        }
        ContourCmd::Airy { s, v, nodes } => {
            let k = s.len();
            let vs = v.clone().unwrap_or_else(|| {
                // spread the contours to satisfy the ordering conditions
                let mut acc = 0.0;
                (0..k)
                    .map(|i| {
                        if i == 0 {
                            0.0
                        } else {
                            acc += s[i - 1] / 2.0 + s[i] / 2.0 + 0.2;
                            acc
                        }
                    })
                    .collect()
            });
            let smin = s.iter().cloned().fold(f64::INFINITY, f64::min);
            let height = (34.0 / smin).sqrt();
            let value = contour_asymptotics::airy_laplace_rhs(&s, &vs, height, nodes)?;
            let mut csv = Csv::new(&["k", "value", "error_estimate"]);
            csv.row(vec![k.to_string(), fmt_f64(value), fmt_f64(1e-9)]);
            let path = out.join("contour_airy.csv");
            csv.write(&path)?;
            let mut manifest =
                Manifest::new("contour airy", json!({"s": s, "v": vs, "nodes": nodes}), None);
            manifest.record_output(&path);
            let summary = json!({"value": value, "csv": path.display().to_string()});
            Ok((manifest, summary, 0))
        }
    }
}

fn run_sample(cmd: SampleCmd, out: &PathBuf) -> CmdResult {
    match cmd {
        SampleCmd::Stochastic { n, u, t, samples, seed } => {
            let seed = seed.unwrap_or_else(default_seed);
            let params = StochasticParams::new(n, u, t, seed, samples)?;
            let hs = stochastic_simulator::height_statistics(&params)?;
            let h = hs.batch.column("h").unwrap();
            let std = hs.batch.column("standardized").unwrap();
            let mut csv = Csv::new(&["sample_id", "h", "standardized"]);
            for i in 0..h.len() {
                csv.row(vec![i.to_string(), (h[i] as u64).to_string(), fmt_f64(std[i])]);
            }
            let path = out.join("stochastic_heights.csv");
            csv.write(&path)?;
            // empirical CDF grid for plotting
            let mut ecdf = Csv::new(&["s", "F_hat"]);
            for (s, f) in &hs.ecdf {
                ecdf.row(vec![fmt_f64(*s), fmt_f64(*f)]);
            }
            let ecdf_path = out.join("stochastic_ecdf.csv");
            ecdf.write(&ecdf_path)?;
            let ks = ks_vs_f2(std)?;
            let mut manifest = Manifest::new(
                "sample stochastic",
                json!({"n": n, "u": u, "t": t, "samples": samples}),
                Some(seed),
            );
            manifest.record_output(&path);
            manifest.record_output(&ecdf_path);
            let se_mean = (hs.var_std / samples as f64).sqrt();
            let summary = json!({
                "mean": hs.mean_std,
                "var": hs.var_std,
                "mean_h": hs.mean_h,
                "var_h": hs.var_h,
                "ks_vs_F2": ks,
                "error_estimate": se_mean,
                "csv": path.display().to_string(),
            });
            Ok((manifest, summary, 0))
        }
    }
}

fn ks_vs_f2(std: &[f64]) -> Result<f64, Box<dyn std::error::Error>> {
    let lo = -10.0;
    let hi = 8.0;
    let step = 0.05;
    let npts = ((hi - lo) / step) as usize + 1;
    let vals: Vec<f64> = (0..npts)
        .map(|i| rmt_reference::tracy_widom_f2(lo + i as f64 * step, 48))
        .collect::<icelab_core::Result<_>>()?;
    let f2 = move |x: f64| -> f64 {
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        let pos = (x - lo) / step;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        vals[i] * (1.0 - frac) + vals[(i + 1).min(npts - 1)] * frac
    };
    Ok(stats::ks_distance(std, move |s| 1.0 - f2(-s)))
}

fn run_mcmc(cmd: McmcCmd, out: &PathBuf) -> CmdResult {
    match cmd {
        McmcCmd::Dwbc { n, weights, samples, sweeps, burnin, k, seed } => {
            let seed = seed.unwrap_or_else(default_seed);
            let spec = parse_weights(&weights)?;
            let mut params = McmcParams::new(n, spec, seed);
            params.thin_sweeps = sweeps;
            params.samples = samples;
            if let Some(b) = burnin {
                params.burnin_sweeps = b;
            }
            let gamma = spec.gamma();
            let scale = spec.corner_scale(n);
            let mut csv = Csv::new(&["sample_id", "j", "i", "xi", "cap_xi", "generic"]);
            let mut row1 = Vec::with_capacity(samples);
            let mut chain = McmcChain::new(&params)?;
            for _ in 0..params.burnin_sweeps {
                chain.sweep();
            }
            for s in 0..samples {
                for _ in 0..params.thin_sweeps {
                    chain.sweep();
                }
                let cfg = chain.to_config();
                let obs = dwbc_mcmc::corners_extract(&cfg, k, gamma)?;
                row1.push((chain.row1_corner_position() as f64 - gamma * n as f64) / scale);
                for j in 1..=k {
                    let cap = &obs.cap_xi[j - 1];
                    for i in 1..=j {
                        // xi is only well-defined when row j has exactly j
                        // c1 vertices; emit -1 otherwise
                        let xi_val = if obs.xi[j - 1].len() == j {
                            obs.xi[j - 1][i - 1] as i64
                        } else {
                            -1
                        };
                        csv.row(vec![
                            s.to_string(),
                            j.to_string(),
                            i.to_string(),
                            xi_val.to_string(),
                            cap[i - 1].to_string(),
                            (obs.generic as u8).to_string(),
                        ]);
                    }
                }
            }
            let path = out.join("mcmc_corners.csv");
            csv.write(&path)?;
            let ks_row1 = stats::ks_distance(&row1, stats::normal_cdf);
            let (mean_row1, var_row1) = stats::mean_var(&row1);
            let tau = stats::integrated_autocorrelation_time(&row1);
            let mut manifest = Manifest::new(
                "mcmc dwbc",
                json!({
                    "n": n, "weights": weights, "samples": samples,
                    "thin_sweeps": sweeps, "burnin_sweeps": params.burnin_sweeps, "k": k,
                }),
                Some(seed),
            );
            manifest.record_output(&path);
            let summary = json!({
                "samples": samples,
                "effective_samples": samples as f64 / tau,
                "acceptance_rate": chain.accepted as f64 / chain.proposals as f64,
                "row1_standardized_mean": mean_row1,
                "row1_standardized_var": var_row1,
                "row1_ks_vs_normal": ks_row1,
                "csv": path.display().to_string(),
            });
            Ok((manifest, summary, 0))
        }
    }
}

fn parse_weights(s: &str) -> Result<WeightSpec, Box<dyn std::error::Error>> {
    if s == "uniform" {
        return Ok(WeightSpec::Uniform);
    }
    if let Some(theta) = s.strip_prefix("dz:") {
        let theta: f64 = theta.parse()?;
        if !(0.0 < theta && theta < std::f64::consts::PI) {
            return Err("theta must be in (0, pi)".into());
        }
        return Ok(WeightSpec::DeltaZero { theta });
    }
    Err(format!("unknown weight spec '{s}' (use uniform or dz:<theta>)").into())
}

fn run_rmt(cmd: RmtCmd, out: &PathBuf) -> CmdResult {
    match cmd {
        RmtCmd::F2 { s, order } => {
            let mut csv = Csv::new(&["s", "F2"]);
            let mut values = Vec::new();
            for &sv in &s {
                let f = rmt_reference::tracy_widom_f2_checked(sv, order, 1e-8)?;
                values.push(json!({"s": sv, "F2": f, "error_estimate": 1e-8}));
                csv.row(vec![fmt_f64(sv), fmt_f64(f)]);
            }
            let path = out.join("rmt_f2.csv");
            csv.write(&path)?;
            let mut manifest = Manifest::new("rmt f2", json!({"s": s, "order": order}), None);
            manifest.record_output(&path);
            Ok((manifest, json!({"values": values}), 0))
        }
        RmtCmd::Corners { k, samples, seed } => {
            let seed = seed.unwrap_or_else(default_seed);
            let mut csv = Csv::new(&["sample", "j", "i", "value"]);
            let mut interlacing_ok = true;
            for s in 0..samples {
                let m = rmt_reference::sample_gue(k, seed, s as u64);
                let c = rmt_reference::corners_process(&m, k)?;
                interlacing_ok &= c.check_interlacing(1e-9);
                for j in 1..=k {
                    for (i, v) in c.level(j).iter().enumerate() {
                        csv.row(vec![
                            s.to_string(),
                            j.to_string(),
                            (i + 1).to_string(),
                            fmt_f64(*v),
                        ]);
                    }
                }
            }
            let path = out.join("rmt_corners.csv");
            csv.write(&path)?;
            let mut manifest =
                Manifest::new("rmt corners", json!({"k": k, "samples": samples}), Some(seed));
            manifest.record_output(&path);
            Ok((manifest, json!({"interlacing_ok": interlacing_ok, "csv": path.display().to_string()}), 0))
        }
        RmtCmd::Edge { n, samples, seed } => {
            let seed = seed.unwrap_or_else(default_seed);
            let report = rmt_reference::gue_edge_check(n, samples, seed)?;
            let manifest = Manifest::new("rmt edge", json!({"n": n, "samples": samples}), Some(seed));
            let summary = json!({
                "ks_vs_F2": report.ks_distance,
                "mean_rescaled": report.mean_rescaled,
                "min_top_gap": report.min_top_gap,
                "samples": report.samples,
            });
            Ok((manifest, summary, 0))
        }
    }
}

fn run_suite_cmd(quick: bool, out: &PathBuf) -> CmdResult {
    let outcomes = suite::run_suite(quick);
    let mut lines = String::new();
    let mut all_pass = true;
    let mut crit_json = Vec::new();
    for o in &outcomes {
        let line = o.verdict_line();
        println!("{line}");
        lines.push_str(&line);
        lines.push('\n');
        all_pass &= o.passed;
        crit_json.push(json!({
            "id": o.id,
            "name": o.name,
            "passed": o.passed,
            "millis": o.millis,
            "details": o.details,
        }));
    }
    let path = out.join("suite_report.txt");
    write_atomic(&path, &lines)?;
    let mut manifest = Manifest::new("suite", json!({"quick": quick}), None);
    manifest.record_output(&path);
    let summary = json!({"all_pass": all_pass, "criteria": crit_json});
    Ok((manifest, summary, if all_pass { 0 } else { EXIT_TOLERANCE }))
}
