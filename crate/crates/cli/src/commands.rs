use std::io::Write;
use std::path::{Path, PathBuf};

use ergm_core::model::boundary_samples;
use ergm_core::perturbation::{
    ground_state_compare, optimize_psi, sweep, write_sweep_csv, Cone, GroundStateDecision,
    PerturbationResult, Preference,
};
use ergm_core::sampler::{
    classify_sample, exact_distribution, exact_free_energy, pairs, run_chains,
    write_trajectory_csv, ChainSummary, InitialState, SampleClassification, SamplerConfig,
    GENERATOR_ID,
};
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::manifest::{manifest_path_for, RunManifest};
use crate::output::{full, sig, write_json, write_with};
use crate::Format;

/// Settings shared by every command.
pub struct Context {
    pub out_dir: PathBuf,
    pub format: Format,
    pub args: Vec<String>,
}

impl Context {
    fn primary(&self, out: Option<PathBuf>, stem: &str) -> PathBuf {
        out.unwrap_or_else(|| self.out_dir.join(format!("{stem}.{}", self.format.extension())))
    }

    fn finish(&self, mut manifest: RunManifest, outputs: Vec<PathBuf>, primary: &Path) -> Result<(), CliError> {
        manifest.outputs = outputs;
        let path = manifest_path_for(primary);
        manifest.write(&path)?;
        println!("manifest: {}", path.display());
        Ok(())
    }
}

fn preference_text(p: Preference) -> String {
    match p {
        Preference::Classes(c) => format!("{c} classes"),
        Preference::Indeterminate => "indeterminate".into(),
    }
}

pub fn table1(ctx: &Context, r: f64, k: u32, out: Option<PathBuf>) -> Result<(), CliError> {
    if !(r.is_finite() && r > 0.0) {
        return Err(CliError::Usage(format!("--r must be positive, got {r}")));
    }
    let rows: Vec<PerturbationResult> = Cone::both()
        .into_iter()
        .map(|cone| optimize_psi(k, r, cone))
        .collect::<Result<_, _>>()?;
    let path = ctx.primary(out, "table1");
    match ctx.format {
        Format::Csv => write_with(&path, |w| {
            writeln!(
                w,
                "cone_classes,a,b,psi,a_opt,b_opt,psi_opt,one_minus_a,one_minus_a_opt,psi_lemma,converged,in_regime"
            )?;
            for x in &rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    x.classes,
                    full(x.a_star),
                    full(x.b_star),
                    full(x.psi_first),
                    full(x.a_opt),
                    full(x.b_opt),
                    full(x.psi_opt),
                    full(x.one_minus_a_star),
                    full(x.one_minus_a_opt),
                    full(x.psi_lemma),
                    x.converged,
                    x.in_regime
                )?;
            }
            Ok(())
        })?,
        Format::Json => write_json(&path, &rows)?,
    }

    println!("perturbation around Turán graphons, k = {k}, r = {r}");
    println!(
        "{:>8} {:>12} {:>10} {:>8} {:>12} {:>10} {:>8}",
        "classes", "a", "b", "psi", "a_opt", "b_opt", "psi_opt"
    );
    for x in &rows {
        println!(
            "{:>8} {:>12.9} {:>10} {:>8.4} {:>12.9} {:>10} {:>8.4}",
            x.classes,
            x.a_star,
            sig(x.b_star, 3),
            x.psi_first,
            x.a_opt,
            sig(x.b_opt, 3),
            x.psi_opt
        );
    }
    let decision = ground_state_compare(k, r)?;
    println!("preferred: {}", preference_text(decision.preferred));
    if rows.iter().any(|x| !x.in_regime) {
        println!("note: r is below the perturbative regime threshold");
    }

    let manifest = RunManifest::new("table1", &ctx.args, json!({"r": r, "k": k, "format": ctx.format}));
    ctx.finish(manifest, vec![path.clone()], &path)
}

pub fn boundary(ctx: &Context, resolution: usize, out: Option<PathBuf>) -> Result<(), CliError> {
    let samples = boundary_samples(resolution)?;
    let path = ctx.primary(out, "boundary");
    match ctx.format {
        Format::Csv => write_with(&path, |w| {
            writeln!(w, "e,t_lower,t_upper,k")?;
            for s in &samples {
                let k = s.k.map(|k| k.to_string()).unwrap_or_default();
                writeln!(w, "{},{},{},{}", full(s.e), full(s.t_lower), full(s.t_upper), k)?;
            }
            Ok(())
        })?,
        Format::Json => write_json(&path, &samples)?,
    }
    println!("{} boundary samples written to {}", samples.len(), path.display());
    let manifest = RunManifest::new(
        "boundary",
        &ctx.args,
        json!({"resolution": resolution, "format": ctx.format}),
    );
    ctx.finish(manifest, vec![path.clone()], &path)
}

fn write_decisions(ctx: &Context, path: &Path, rows: &[GroundStateDecision]) -> Result<(), CliError> {
    match ctx.format {
        Format::Csv => write_with(path, |w| write_sweep_csv(rows, w)),
        Format::Json => write_json(path, &rows),
    }
}

pub fn compare(ctx: &Context, k: u32, r: f64, out: Option<PathBuf>) -> Result<(), CliError> {
    let d = ground_state_compare(k, r)?;
    let path = ctx.primary(out, "compare");
    write_decisions(ctx, &path, std::slice::from_ref(&d))?;
    println!("k = {k}, r = {r}");
    println!("psi_opt({} classes) = {:.10}", d.lower.classes, d.psi_lower);
    println!("psi_opt({} classes) = {:.10}", d.upper.classes, d.psi_upper);
    println!("margin = {:e}", d.margin);
    println!("preferred: {}", preference_text(d.preferred));
    println!("in_regime={}", d.in_regime);
    if d.decided_asymptotically {
        println!("note: corrections underflow; decided on leading exponentials");
    }
    let manifest = RunManifest::new(
        "compare",
        &ctx.args,
        json!({"k": k, "r": r, "format": ctx.format}),
    );
    ctx.finish(manifest, vec![path.clone()], &path)
}

/// `"a..b"` (inclusive) or a comma list.
pub fn parse_k_range(s: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse k range {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if a == 0 || b < a {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse::<u32>().ok().filter(|&k| k > 0).ok_or_else(bad))
        .collect()
}

/// `"a..b"` sampled at `points` evenly spaced values (inclusive), or a comma list.
pub fn parse_r_range(s: &str, points: usize) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse r range {s:?}"));
    let positive = |x: f64| x.is_finite() && x > 0.0;
    if let Some((a, b)) = s.split_once("..") {
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        if !(positive(a) && positive(b) && b >= a) || points == 0 {
            return Err(bad());
        }
        if points == 1 || a == b {
            return Ok(vec![a]);
        }
        return Ok((0..points)
            .map(|i| a + (b - a) * i as f64 / (points - 1) as f64)
            .collect());
    }
    s.split(',')
        .map(|x| x.trim().parse::<f64>().ok().filter(|&r| positive(r)).ok_or_else(bad))
        .collect()
}

pub fn sweep_cmd(ctx: &Context, k: &str, r: &str, r_points: usize, out: Option<PathBuf>) -> Result<(), CliError> {
    let ks = parse_k_range(k)?;
    let rs = parse_r_range(r, r_points)?;
    let rows = sweep(&ks, &rs)?;
    let path = ctx.primary(out, "sweep");
    write_decisions(ctx, &path, &rows)?;
    let in_regime = rows.iter().filter(|d| d.in_regime).count();
    let agree = rows
        .iter()
        .filter(|d| d.in_regime && d.preferred == Preference::Classes(d.k + 1))
        .count();
    println!("{} grid points, {} in regime", rows.len(), in_regime);
    println!("in-regime rows preferring k+1 classes: {agree}/{in_regime}");
    for d in rows.iter().filter(|d| d.in_regime && d.preferred != Preference::Classes(d.k + 1)) {
        println!("  k={} r={}: preferred {}", d.k, d.r, preference_text(d.preferred));
    }
    let manifest = RunManifest::new(
        "sweep",
        &ctx.args,
        json!({"k": ks, "r": rs, "format": ctx.format}),
    );
    ctx.finish(manifest, vec![path.clone()], &path)
}

#[derive(Serialize)]
struct ChainReport {
    chain: usize,
    initial: String,
    summary: ChainSummary,
    classification: SampleClassification,
    trajectory_file: PathBuf,
    edges_file: PathBuf,
}

#[derive(Serialize)]
struct SampleReport<'a> {
    config: &'a SamplerConfig,
    generator: &'a str,
    chains: Vec<ChainReport>,
}

pub fn parse_initials(s: &str) -> Result<Vec<InitialState>, CliError> {
    // Commas inside "random(p)" never occur, so a plain split is enough.
    s.split(',')
        .map(|x| InitialState::parse(x.trim()).map_err(CliError::from))
        .collect()
}

pub fn sample(ctx: &Context, config: SamplerConfig, prefix: &str) -> Result<(), CliError> {
    let results = run_chains(&config)?;
    let mut outputs = Vec::new();
    let mut reports = Vec::new();
    for res in &results {
        let trajectory_file = ctx.out_dir.join(format!("{prefix}_chain{}.trajectory.csv", res.chain));
        let edges_file = ctx.out_dir.join(format!("{prefix}_chain{}.edges", res.chain));
        write_with(&trajectory_file, |w| write_trajectory_csv(&res.trajectory, w))?;
        write_with(&edges_file, |w| res.final_state.write_edge_list(w))?;
        outputs.push(trajectory_file.clone());
        outputs.push(edges_file.clone());
        reports.push(ChainReport {
            chain: res.chain,
            initial: res.initial.label(),
            summary: res.summary,
            classification: classify_sample(&res.final_state),
            trajectory_file,
            edges_file,
        });
    }
    println!(
        "n = {}, beta = ({}, {}), {} steps, burn-in {}, thin {}, seed {}",
        config.n, config.beta[0], config.beta[1], config.steps, config.burn_in, config.thin, config.seed
    );
    println!(
        "{:>5} {:>16} {:>18} {:>18} {:>7} {:>4} {:>8}",
        "chain", "initial", "edge density", "triangle density", "accept", "k", "bipart"
    );
    for c in &reports {
        let s = &c.summary;
        println!(
            "{:>5} {:>16} {:>9.4} ± {:<6.4} {:>9.4} ± {:<6.4} {:>7.3} {:>4} {:>8.4}",
            c.chain,
            c.initial,
            s.mean_edge_density,
            s.stderr_edge_density,
            s.mean_triangle_density,
            s.stderr_triangle_density,
            s.acceptance_rate,
            c.classification.nearest_k,
            c.classification.bipartiteness_score,
        );
    }
    let summary_path = ctx.out_dir.join(format!("{prefix}.classification.json"));
    write_json(
        &summary_path,
        &SampleReport {
            config: &config,
            generator: GENERATOR_ID,
            chains: reports,
        },
    )?;
    outputs.push(summary_path.clone());

    let mut manifest = RunManifest::new(
        "sample",
        &ctx.args,
        serde_json::to_value(&config).map_err(CliError::Json)?,
    );
    manifest.seed = Some(config.seed);
    manifest.generator = Some(GENERATOR_ID.to_string());
    ctx.finish(manifest, outputs, &ctx.out_dir.join(format!("{prefix}.json")))
}

pub fn exact(ctx: &Context, n: usize, beta: [f64; 2], distribution: bool, out: Option<PathBuf>) -> Result<(), CliError> {
    let psi = exact_free_energy(n, beta)?;
    let path = ctx.primary(out, "exact");
    match ctx.format {
        Format::Csv => write_with(&path, |w| {
            writeln!(w, "n,beta1,beta2,psi_n")?;
            writeln!(w, "{n},{},{},{}", full(beta[0]), full(beta[1]), full(psi))
        })?,
        Format::Json => write_json(&path, &json!({"n": n, "beta": beta, "psi_n": psi}))?,
    }
    let mut outputs = vec![path.clone()];
    if distribution {
        let probs = exact_distribution(n, beta)?;
        let edges = pairs(n);
        let dist_path = path.with_file_name(format!(
            "{}_distribution.csv",
            path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
        ));
        write_with(&dist_path, |w| {
            writeln!(w, "mask,edges,probability")?;
            for (mask, p) in probs.iter().enumerate() {
                let count = (0..edges.len()).filter(|b| mask >> b & 1 == 1).count();
                writeln!(w, "{mask},{count},{}", full(*p))?;
            }
            Ok(())
        })?;
        outputs.push(dist_path);
    }
    println!("psi_{n} = {psi:.15}");
    let manifest = RunManifest::new(
        "exact",
        &ctx.args,
        json!({"n": n, "beta": beta, "distribution": distribution, "format": ctx.format}),
    );
    ctx.finish(manifest, outputs, &path)
}
