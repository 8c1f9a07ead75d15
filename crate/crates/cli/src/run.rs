use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use rayon::prelude::*;
use serde_json::{json, Value};

use winterbottom_lab::anisotropy::{validate, Anisotropy, Gauge};
use winterbottom_lab::geometry::svg::{ShapeClass, SvgScene};
use winterbottom_lab::geometry::{align_horizontally, random_polygon, HalfPlanePolygon};
use winterbottom_lab::minimize::{minimize, verify_inequality_sample, witness_sequence, MinimizeConfig};
use winterbottom_lab::vec2::Vec2;
use winterbottom_lab::winterbottom::{
    build_psi, energy_identity_residual, horizontal_shift_vector, regime, winterbottom, wulff, wulff_translation_check,
};
use winterbottom_lab::Sign;

use crate::config::{ExperimentConfig, Format};
use crate::emit::{to_value, write_csv, write_json};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Wulff,
    Winterbottom,
    Energy,
    Identity,
    Minimize,
    Verify,
    Witness,
    Regime,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Wulff => "wulff",
            Command::Winterbottom => "winterbottom",
            Command::Energy => "energy",
            Command::Identity => "identity",
            Command::Minimize => "minimize",
            Command::Verify => "verify",
            Command::Witness => "witness",
            Command::Regime => "regime",
        }
    }

    fn per_beta(self) -> bool {
        !matches!(self, Command::Validate | Command::Wulff)
    }
}

pub struct Options {
    pub out: PathBuf,
    pub quiet: bool,
}

/// Exit 1 for usage, config and regime errors; exit 2 for violations.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Violation(String),
}

/// Output of one job (one beta, or the single run of a beta-free command).
#[derive(Default)]
struct Job {
    result: Value,
    rows: Vec<Vec<Value>>,
    svg: Option<String>,
    line: String,
    violation: Option<String>,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn header(cmd: Command) -> &'static [&'static str] {
    match cmd {
        Command::Validate => &["anisotropy_id", "c_lower", "C_upper", "homogeneity_residual", "convexity_residual", "samples"],
        Command::Wulff => &["anisotropy_id", "boundary_samples", "vertex_count", "area", "discretization_bound"],
        Command::Winterbottom => &[
            "anisotropy_id",
            "beta",
            "area",
            "energy",
            "relative_perimeter",
            "wetted_length",
            "discretization_bound",
        ],
        Command::Energy => &["anisotropy_id", "beta", "polygon", "area", "energy", "relative_perimeter", "wetted_length", "ratio"],
        Command::Identity => &[
            "anisotropy_id",
            "beta",
            "identity_residual",
            "translation_residual",
            "translation_tolerance",
            "horizontality_residual",
        ],
        Command::Minimize => &[
            "anisotropy_id",
            "beta",
            "mode",
            "vertex_count",
            "restarts",
            "best_ratio",
            "winterbottom_ratio",
            "relative_gap",
            "hausdorff_mod_translation",
            "seconds",
        ],
        Command::Verify => &["anisotropy_id", "beta", "samples", "seed", "violations", "worst_margin"],
        Command::Witness => &["anisotropy_id", "beta", "k", "h", "energy", "formula"],
        Command::Regime => &["anisotropy_id", "beta", "regime"],
    }
}

pub fn run(cmd: Command, cfg: &ExperimentConfig, config_path: &Path, opts: &Options) -> Result<(), Failure> {
    let started = Instant::now();
    let phi: Anisotropy<f64> = cfg.anisotropy.build().map_err(|e| Failure::Config(format!("anisotropy: {e}")))?;
    std::fs::create_dir_all(&opts.out).map_err(|e| Failure::Config(format!("{}: {e}", opts.out.display())))?;

    let betas = if cmd.per_beta() { cfg.betas() } else { vec![f64::NAN] };
    let single = betas.len() == 1;
    let jobs: Vec<Result<Job, String>> = betas
        .par_iter()
        .enumerate()
        .map(|(j, &beta)| {
            let job = dispatch(cmd, cfg, &phi, beta)?;
            if let (Some(svg), true) = (&job.svg, cfg.wants(Format::Svg)) {
                let name = if single {
                    format!("{}.svg", cmd.name())
                } else {
                    format!("{}_{j:03}.svg", cmd.name())
                };
                std::fs::write(opts.out.join(name), svg).map_err(err)?;
            }
            Ok(job)
        })
        .collect();
    let jobs: Vec<Job> = jobs.into_iter().collect::<Result<_, _>>().map_err(Failure::Config)?;

    if cfg.wants(Format::Json) {
        let report = json!({
            "command": cmd.name(),
            "anisotropy_id": cfg.anisotropy_id(),
            "anisotropy": cfg.anisotropy,
            "results": jobs.iter().map(|j| j.result.clone()).collect::<Vec<_>>(),
        });
        write_json(&opts.out.join("report.json"), &report).map_err(|e| Failure::Config(e.to_string()))?;
    }
    if cfg.wants(Format::Csv) {
        let id = Value::String(cfg.anisotropy_id());
        let rows: Vec<Vec<Value>> = jobs
            .iter()
            .flat_map(|j| j.rows.iter())
            .map(|r| std::iter::once(id.clone()).chain(r.iter().cloned()).collect())
            .collect();
        write_csv(&opts.out.join("results.csv"), header(cmd), &rows).map_err(Failure::Config)?;
    }
    if !opts.quiet {
        for j in &jobs {
            println!("{}", j.line);
        }
    }
    let violations: Vec<String> = jobs.iter().filter_map(|j| j.violation.clone()).collect();
    let status = if violations.is_empty() { "ok" } else { "violation" };
    let log = format!(
        "{} command={} config={} jobs={} status={} seconds={:.3}\n",
        chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        cmd.name(),
        config_path.display(),
        jobs.len(),
        status,
        started.elapsed().as_secs_f64()
    );
    use std::io::Write;
    std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(opts.out.join("run.log"))
        .and_then(|mut f| f.write_all(log.as_bytes()))
        .map_err(|e| Failure::Config(e.to_string()))?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violation(violations.join("; ")))
    }
}

fn dispatch(cmd: Command, cfg: &ExperimentConfig, phi: &Anisotropy<f64>, beta: f64) -> Result<Job, String> {
    match cmd {
        Command::Validate => run_validate(cfg, phi),
        Command::Wulff => run_wulff(cfg, phi),
        Command::Winterbottom => run_winterbottom(cfg, phi, beta),
        Command::Energy => run_energy(cfg, phi, beta),
        Command::Identity => run_identity(cfg, phi, beta),
        Command::Minimize => run_minimize(cfg, phi, beta),
        Command::Verify => run_verify(cfg, phi, beta),
        Command::Witness => run_witness(cfg, phi, beta),
        Command::Regime => run_regime(phi, beta),
    }
}

fn run_validate(cfg: &ExperimentConfig, phi: &Anisotropy<f64>) -> Result<Job, String> {
    let s = &cfg.validate;
    let r = validate(phi, s.samples, s.seed).map_err(err)?;
    let mut result = to_value(&r);
    result["seed"] = json!(s.seed);
    Ok(Job {
        line: format!("c_lower {:.6} C_upper {:.6}", r.c_lower, r.c_upper),
        rows: vec![vec![
            json!(r.c_lower),
            json!(r.c_upper),
            json!(r.homogeneity_residual),
            json!(r.convexity_residual),
            json!(r.sample_count),
        ]],
        result,
        ..Default::default()
    })
}

fn run_wulff(cfg: &ExperimentConfig, phi: &Anisotropy<f64>) -> Result<Job, String> {
    let w = wulff(phi, cfg.boundary_samples).map_err(err)?;
    let area = w.area();
    let mut scene = SvgScene::new();
    scene.add(ShapeClass::Wulff, &w.vertices);
    Ok(Job {
        line: format!("wulff: {} vertices, area {area:.9}", w.vertices.len()),
        rows: vec![vec![
            json!(cfg.boundary_samples),
            json!(w.vertices.len()),
            json!(area),
            json!(w.discretization_bound),
        ]],
        result: to_value(&json!({
            "boundary_samples": cfg.boundary_samples,
            "area": area,
            "discretization_bound": w.discretization_bound,
            "vertices": w.vertices.iter().map(|v| [v.x, v.y]).collect::<Vec<_>>(),
        })),
        svg: Some(scene.render()),
        ..Default::default()
    })
}

fn ghost_and_shape(shape: &winterbottom_lab::winterbottom::WinterbottomShape<f64>) -> SvgScene {
    let mut scene = SvgScene::new();
    scene.add(ShapeClass::Wulff, &shape.wulff.translated(Vec2::new(0.0, -shape.beta)).vertices);
    scene.add(ShapeClass::Winterbottom, shape.polygon.vertices());
    scene
}

fn run_winterbottom(cfg: &ExperimentConfig, phi: &Anisotropy<f64>, beta: f64) -> Result<Job, String> {
    let w = winterbottom(phi, beta, cfg.boundary_samples).map_err(err)?;
    let e = w.energy;
    Ok(Job {
        line: format!("beta {beta}: area {:.9} energy {:.9}", e.area, e.total),
        rows: vec![vec![
            json!(beta),
            json!(e.area),
            json!(e.total),
            json!(e.relative_perimeter),
            json!(e.wetted_length),
            json!(w.discretization_bound),
        ]],
        result: to_value(&json!({
            "beta": beta,
            "regime": regime(phi, beta).as_str(),
            "area": e.area,
            "energy": e,
            "discretization_bound": w.discretization_bound,
            "boundary_samples": w.boundary_samples,
            "polygon": w.polygon,
        })),
        svg: Some(ghost_and_shape(&w).render()),
        ..Default::default()
    })
}

fn run_energy(cfg: &ExperimentConfig, phi: &Anisotropy<f64>, beta: f64) -> Result<Job, String> {
    let polygons: Vec<HalfPlanePolygon<f64>> = match &cfg.energy {
        Some(block) if !block.polygons.is_empty() => block
            .polygons
            .iter()
            .enumerate()
            .map(|(i, p)| HalfPlanePolygon::from_json(p).map_err(|e| format!("energy.polygons[{i}]: {e}")))
            .collect::<Result<_, _>>()?,
        _ => vec![winterbottom(phi, beta, cfg.boundary_samples).map_err(err)?.polygon],
    };
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for (i, p) in polygons.iter().enumerate() {
        let e = p.capillary_energy(phi, beta);
        let ratio = e.total / e.area.sqrt();
        rows.push(vec![
            json!(beta),
            json!(i),
            json!(e.area),
            json!(e.total),
            json!(e.relative_perimeter),
            json!(e.wetted_length),
            json!(ratio),
        ]);
        entries.push(json!({"energy": e, "ratio": ratio}));
    }
    Ok(Job {
        line: format!(
            "beta {beta}: {}",
            entries
                .iter()
                .map(|e| format!("{:.9}", e["energy"]["total"].as_f64().unwrap_or(f64::NAN)))
                .collect::<Vec<_>>()
                .join(" ")
        ),
        rows,
        result: to_value(&json!({"beta": beta, "polygons": entries})),
        ..Default::default()
    })
}

fn run_identity(cfg: &ExperimentConfig, phi: &Anisotropy<f64>, beta: f64) -> Result<Job, String> {
    let psi = build_psi(phi, beta, &cfg.eta_policy).map_err(err)?;
    let w = winterbottom(phi, beta, cfg.boundary_samples).map_err(err)?;
    let s = &cfg.identity;
    let area = w.polygon.area();
    let mut identity = energy_identity_residual(&psi, &w.polygon) / (1.0 + w.energy.total.abs());
    for k in 0..s.samples {
        let seed = s.seed.wrapping_add(k as u64);
        let p = random_polygon(seed, 4 + k % 37, area, k % 2 == 0).map_err(err)?;
        let c = p.capillary_energy(phi, beta).total;
        identity = identity.max(energy_identity_residual(&psi, &p) / (1.0 + c.abs()));
    }
    let t = wulff_translation_check(phi, beta, &cfg.eta_policy, cfg.boundary_samples).map_err(err)?;
    let tol = if phi.is_polyhedral() { 1e-9 } else { 5.0 * t.discretization_bound };
    let (b, horizontality) = horizontal_shift_vector(phi, beta, &cfg.eta_policy).map_err(err)?;
    let mut bad = Vec::new();
    if identity > 1e-9 {
        bad.push(format!("identity residual {identity:e}"));
    }
    if t.residual > tol {
        bad.push(format!("translation residual {:e} > {tol:e}", t.residual));
    }
    if horizontality > 1e-12 {
        bad.push(format!("horizontality {horizontality:e}"));
    }
    Ok(Job {
        line: format!(
            "beta {beta}: identity {identity:.3e} translation {:.3e} (tol {tol:.3e}) horizontality {horizontality:.3e}",
            t.residual
        ),
        rows: vec![vec![json!(beta), json!(identity), json!(t.residual), json!(tol), json!(horizontality)]],
        result: to_value(&json!({
            "beta": beta,
            "eta": psi.eta(),
            "shift_vector": b,
            "identity_residual": identity,
            "identity_samples": s.samples + 1,
            "translation_residual": t.residual,
            "translation_tolerance": tol,
            "horizontality_residual": horizontality,
            "nominal_c": psi.nominal_c,
            "nominal_c_upper": psi.nominal_c_upper,
            "safe_c_upper": psi.safe_c_upper,
        })),
        violation: (!bad.is_empty()).then(|| format!("beta {beta}: {}", bad.join(", "))),
        ..Default::default()
    })
}

fn run_minimize(cfg: &ExperimentConfig, phi: &Anisotropy<f64>, beta: f64) -> Result<Job, String> {
    let mc: &MinimizeConfig<f64> = &cfg.minimize;
    let t = Instant::now();
    let r = minimize(phi, beta, cfg.volume, mc).map_err(err)?;
    let seconds = t.elapsed().as_secs_f64();
    let shape = winterbottom(phi, beta, winterbottom_lab::minimize::REFERENCE_SAMPLES).map_err(err)?;
    let reference = shape.polygon.scaled_to_area(r.best_polygon.area()).map_err(err)?;
    let shift = align_horizontally(&r.best_polygon, &reference).shift;
    let mut scene = SvgScene::new();
    scene.add(ShapeClass::Winterbottom, reference.vertices());
    scene.add(ShapeClass::Candidate, r.best_polygon.translated_horizontally(shift).vertices());
    let violation = (r.relative_gap < -1e-7).then(|| {
        format!("beta {beta}: best ratio undercuts the Winterbottom ratio (gap {:e})", r.relative_gap)
    });
    Ok(Job {
        line: format!(
            "beta {beta}: best_ratio {:.9} winterbottom_ratio {:.9} gap {:.3e} hausdorff {:.3e}",
            r.best_ratio, r.winterbottom_ratio, r.relative_gap, r.hausdorff_mod_translation
        ),
        rows: vec![vec![
            json!(beta),
            json!(r.mode.as_str()),
            json!(mc.vertex_count),
            json!(mc.restarts),
            json!(r.best_ratio),
            json!(r.winterbottom_ratio),
            json!(r.relative_gap),
            json!(r.hausdorff_mod_translation),
            json!((seconds * 1e3).round() / 1e3),
        ]],
        result: {
            let mut v = to_value(&r);
            v["beta"] = json!(beta);
            v
        },
        svg: Some(scene.render()),
        violation,
    })
}

fn run_verify(cfg: &ExperimentConfig, phi: &Anisotropy<f64>, beta: f64) -> Result<Job, String> {
    let s = &cfg.verify;
    let r = verify_inequality_sample(phi, beta, s.samples, s.seed).map_err(err)?;
    Ok(Job {
        line: format!("beta {beta}: violations {} worst_margin {:.6e}", r.violations, r.worst_margin),
        rows: vec![vec![json!(beta), json!(s.samples), json!(s.seed), json!(r.violations), json!(r.worst_margin)]],
        result: to_value(&json!({
            "beta": beta,
            "samples": s.samples,
            "seed": s.seed,
            "violations": r.violations,
            "worst_margin": r.worst_margin,
        })),
        violation: (r.violations > 0).then(|| format!("beta {beta}: {} violations", r.violations)),
        ..Default::default()
    })
}

fn run_witness(cfg: &ExperimentConfig, phi: &Anisotropy<f64>, beta: f64) -> Result<Job, String> {
    let pts = witness_sequence(phi, beta, cfg.witness.k_max).map_err(err)?;
    let last = pts.last().map(|p| p.energy).unwrap_or(f64::NAN);
    Ok(Job {
        line: format!("beta {beta}: {} pancakes, last energy {last:.9e}", pts.len()),
        rows: pts
            .iter()
            .map(|p| vec![json!(beta), json!(p.k), json!(p.h), json!(p.energy), json!(p.formula)])
            .collect(),
        result: to_value(&json!({
            "beta": beta,
            "regime": regime(phi, beta).as_str(),
            "k_max": cfg.witness.k_max,
            "points": pts,
        })),
        ..Default::default()
    })
}

fn run_regime(phi: &Anisotropy<f64>, beta: f64) -> Result<Job, String> {
    let r = regime(phi, beta);
    Ok(Job {
        line: r.as_str().to_string(),
        rows: vec![vec![json!(beta), json!(r.as_str())]],
        result: to_value(&json!({
            "beta": beta,
            "regime": r.as_str(),
            "phi_up": phi.along_vertical(Sign::Plus),
            "phi_down": phi.along_vertical(Sign::Minus),
        })),
        ..Default::default()
    })
}
