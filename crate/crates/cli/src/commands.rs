use hakdyn::annulus::{hak_verify, parse_bits, rotation_estimate, rotation_family};
use hakdyn::chains::{horseshoe_extract, kfold, parse_links, render_chains, Pattern, RenderStyle};
use hakdyn::num::{format_g, Coord};
use hakdyn::suspension::{Ball, DenseBounds, DEFAULT_BUDGET};
use hakdyn::{ExactMap, Suspension};

use crate::config::{read_source, RunConfig};
use crate::error::{config, CliError, CliResult};
use crate::levels::parse_levels;

/// Artifact plus summary lines of one subcommand run.
#[derive(Debug, Default)]
pub struct Report {
    pub artifact: String,
    pub summary: Vec<String>,
    /// Set when the run completed but its check failed.
    pub failure: Option<String>,
}

impl Report {
    fn new(artifact: String) -> Self {
        Self { artifact, ..Self::default() }
    }

    fn line(mut self, text: impl Into<String>) -> Self {
        self.summary.push(text.into());
        self
    }

    fn fail_if(mut self, failed: bool, msg: impl Into<String>) -> Self {
        if failed {
            self.failure = Some(msg.into());
        }
        self
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

const ROTATION_SAMPLES: usize = 1000;

fn start(cfg: &RunConfig) -> CliResult<(f64, f64)> {
    Ok((cfg.real_or("experiment", "t", 0.5)?, cfg.real_or("experiment", "r", 0.5)?))
}

fn suspension(cfg: &RunConfig) -> CliResult<Suspension> {
    Ok(Suspension::new(cfg.map()?, cfg.cantor()?, cfg.radius()?))
}

fn list<T: std::str::FromStr>(cfg: &RunConfig, key: &str, default: T) -> CliResult<Vec<T>> {
    match cfg.get("experiment", key) {
        None => Ok(vec![default]),
        Some(text) => text
            .split(',')
            .map(|v| {
                v.trim().parse::<T>().map_err(|_| {
                    config(format!("{}: key `{key}` in [experiment] has invalid value `{text}`", cfg.source()))
                })
            })
            .collect(),
    }
}

pub fn rotation(cfg: &RunConfig) -> CliResult<Report> {
    let map = cfg.map()?;
    let (t, r) = start(cfg)?;
    let n = cfg.value_or("experiment", "n", ROTATION_SAMPLES)?;
    let rows = rotation_estimate(&map, t, r, n)?;
    let mut csv = String::from("n,estimate\n");
    for (k, est) in &rows {
        csv.push_str(&format!("{k},{}\n", format_g(*est)));
    }
    let last = rows.last().map_or(f64::NAN, |(_, e)| *e);
    Ok(Report::new(csv).line(format!(
        "rotation estimate {} after {n} steps from ({}, {})",
        format_g(last),
        format_g(t),
        format_g(r)
    )))
}

pub fn rigidity(cfg: &RunConfig) -> CliResult<Report> {
    let grid = cfg.value_or("experiment", "grid", 8usize)?;
    let horizon = cfg.value_or("experiment", "horizon", 50usize)?;
    let eps = cfg.real_or("experiment", "eps", 0.1)?;
    let band = cfg.pair("experiment", "band")?.unwrap_or((0.0, 1.0));
    let hits = if cfg.has_section("cantor") {
        suspension(cfg)?.rigidity_suspension(grid, horizon, eps, band)?
    } else {
        hakdyn::annulus::rigidity_scan(&cfg.map()?, grid, horizon, eps, band)?
    };
    let mut csv = String::from("n,sup_displacement\n");
    for (n, d) in &hits {
        csv.push_str(&format!("{n},{}\n", format_g(*d)));
    }
    let times: Vec<String> = hits.iter().take(8).map(|(n, _)| n.to_string()).collect();
    Ok(Report::new(csv).line(format!(
        "{} rigidity times below eps {} up to n = {horizon}{}",
        hits.len(),
        format_g(eps),
        if times.is_empty() { String::new() } else { format!(", first: {}", times.join(" ")) }
    )))
}

pub fn hak_verify_cmd(cfg: &RunConfig) -> CliResult<Report> {
    let stages = cfg.stages()?;
    let grid = cfg.value_or("experiment", "grid", 32usize)?;
    let tail = cfg.real("experiment", "tail")?;
    let report = hak_verify(&stages, grid, tail)?;
    let mut csv = String::from("condition,stage,what,observed,bound,margin,passed\n");
    for c in &report.checks {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.condition,
            c.stage,
            csv_field(c.what),
            format_g(c.observed),
            format_g(c.bound),
            format_g(c.margin()),
            c.passed
        ));
    }
    let failed = report.failed_conditions();
    let min_margin = report.checks.iter().map(|c| c.margin()).fold(f64::INFINITY, f64::min);
    let summary = if failed.is_empty() {
        format!(
            "all {} checks pass over {} stages, smallest margin {}",
            report.checks.len(),
            stages.len(),
            format_g(min_margin)
        )
    } else {
        format!("failed conditions: {}", failed.join(" "))
    };
    Ok(Report::new(csv)
        .line(summary)
        .fail_if(!failed.is_empty(), format!("HAK conditions violated: {}", failed.join(" "))))
}

pub fn suspend_entropy(cfg: &RunConfig) -> CliResult<Report> {
    let sys = suspension(cfg)?;
    let seed = cfg.seed()?;
    let eps_list: Vec<f64> = cfg.reals("experiment", "eps")?.unwrap_or(vec![1.0 / 16.0]);
    let n_list = list(cfg, "n", 12usize)?;
    let budget = cfg.value_or("experiment", "budget", DEFAULT_BUDGET)?;
    let alpha = match cfg.real("experiment", "alpha")? {
        Some(a) => a,
        None => {
            let (t, r) = start(cfg)?;
            rotation_estimate(sys.map(), t, r, ROTATION_SAMPLES)?.last().map_or(0.0, |(_, e)| *e)
        }
    };
    let report = sys.product_formula_report(alpha, &eps_list, &n_list, budget, seed)?;
    let mut out = Report::new(report.to_csv());
    for row in &report.rows {
        out = out.line(format!(
            "eps {} n {}: bracket [{}, {}] around target {}",
            format_g(row.eps),
            row.n,
            format_g(row.lower),
            format_g(row.upper),
            format_g(row.target)
        ));
    }
    Ok(out)
}

pub fn suspend_orbit(cfg: &RunConfig) -> CliResult<Report> {
    let mut sys = suspension(cfg)?;
    let seed = sys.register_random_seed(cfg.seed()?);
    let (t, r) = start(cfg)?;
    let n = cfg.value_or("experiment", "n", 100usize)?;
    let orbit = sys.orbit(&sys.point(seed, t, r)?, n)?;
    let mut csv = String::from("k,t,r,w,component\n");
    for (k, p) in orbit.iter().enumerate() {
        csv.push_str(&format!("{k},{},{},{},{}\n", format_g(p.t), format_g(p.r), p.winding, p.seed));
    }
    let last = orbit.last().expect("orbit includes the start point");
    Ok(Report::new(csv).line(format!("{} steps, final winding {}", orbit.len() - 1, last.winding)))
}

pub fn mixing_witness(cfg: &RunConfig) -> CliResult<Report> {
    let mut sys = suspension(cfg)?;
    let seed = cfg.seed()?;
    let u_at = cfg.pair("experiment", "u")?.unwrap_or((0.5, 0.25));
    let v_at = cfg.pair("experiment", "v")?.unwrap_or((0.5, 0.25));
    let radius = cfg.real_or("experiment", "radius", 0.3)?;
    let horizon = cfg.value_or("experiment", "horizon", 50usize)?;
    let cloud = cfg.value_or("experiment", "cloud", 64usize)?;
    let v_shift = cfg.value_or("experiment", "v_shift", 1i64)?;
    let s = sys.register_random_seed(seed);
    let u = Ball { center: sys.point(s, u_at.0, u_at.1)?, radius };
    let mut v_center = sys.point(s, v_at.0, v_at.1)?;
    v_center.c = sys.cantor().iterate(&v_center.c, v_shift);
    let v = Ball { center: v_center, radius };
    let found = sys.weak_mixing_witness(&u, &v, horizon, cloud, seed)?;
    let csv = format!(
        "u_t,u_r,v_t,v_r,v_shift,radius,horizon,l\n{},{},{},{},{v_shift},{},{horizon},{}\n",
        format_g(u_at.0),
        format_g(u_at.1),
        format_g(v_at.0),
        format_g(v_at.1),
        format_g(radius),
        found.map_or("none".to_string(), |l| l.to_string())
    );
    let report = Report::new(csv);
    Ok(match found {
        Some(l) => report.line(format!("return to U and visit to V at step {l}")),
        None => report
            .line(format!("no witness up to step {horizon}"))
            .fail_if(true, format!("no weak-mixing witness within horizon {horizon}")),
    })
}

pub fn dense_orbit(cfg: &RunConfig) -> CliResult<Report> {
    let sys = suspension(cfg)?;
    let seed = cfg.seed()?;
    let start = (cfg.real_or("experiment", "t", 0.5)?, cfg.real_or("experiment", "r", 0.0)?);
    let eps = cfg.real_or("experiment", "eps", 0.125)?;
    let bounds = DenseBounds {
        k_max: cfg.value_or("experiment", "k_max", 8usize)?,
        s_max: cfg.value_or("experiment", "s_max", 4usize)?,
        p_max: cfg.value_or("experiment", "p_max", 400usize)?,
    };
    let c = sys.cantor().random_point(seed, sys.point_radius());
    let witness = sys.dense_orbit_check(&c, start, eps, bounds)?;
    let mut csv = String::from("k,s,p\n");
    Ok(match witness {
        Some(w) => {
            csv.push_str(&format!("{},{},{}\n", w.k, w.s, w.p));
            Report::new(csv).line(format!("dense-orbit witness k = {} s = {} p = {}", w.k, w.s, w.p))
        }
        None => Report::new(csv)
            .line("no dense-orbit witness")
            .fail_if(true, format!("no dense-orbit witness with k <= {} and s <= {}", bounds.k_max, bounds.s_max)),
    })
}

pub fn rotation_family_cmd(cfg: &RunConfig) -> CliResult<Report> {
    let eps = cfg.real_or("experiment", "eps", 0.1)?;
    let words: Vec<Vec<u8>> = match cfg.get("experiment", "word") {
        Some(w) => {
            vec![parse_bits(w).map_err(|e| config(format!("{}: key `word` in [experiment]: {e}", cfg.source())))?]
        }
        None => {
            let bits = cfg.value_or("experiment", "bits", 8usize)?;
            if bits == 0 || bits > 20 {
                return Err(config(format!("{}: key `bits` in [experiment] must be in 1..=20", cfg.source())));
            }
            (0..1usize << bits).map(|x| (0..bits).map(|j| ((x >> (bits - 1 - j)) & 1) as u8).collect()).collect()
        }
    };
    let mut csv = String::from("word,alpha\n");
    let mut values = Vec::with_capacity(words.len());
    let mut schedule = Vec::new();
    for w in &words {
        let (alpha, b) = rotation_family(w, eps)?;
        let text: String = w.iter().map(|b| char::from(b'0' + b)).collect();
        csv.push_str(&format!("{text},{}\n", format_g(alpha)));
        values.push(alpha);
        schedule = b;
    }
    values.sort_by(f64::total_cmp);
    let gap = values.windows(2).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min);
    let need = schedule.last().copied().unwrap_or(0.0) / 2.0;
    let report = Report::new(csv);
    if values.len() < 2 {
        return Ok(report.line(format!("{} word", values.len())));
    }
    Ok(report
        .line(format!("{} words, minimum gap {} against b_L / 2 = {}", values.len(), format_g(gap), format_g(need)))
        .fail_if(gap < need, format!("minimum gap {} is below b_L / 2 = {}", format_g(gap), format_g(need))))
}

pub fn pattern(kfold_k: Option<usize>, values: Option<&str>) -> CliResult<Report> {
    let p = match (kfold_k, values) {
        (Some(k), None) => kfold(k)?,
        (None, Some(v)) => Pattern::parse(v)?,
        _ => return Err(config("pattern needs exactly one of --kfold or --values")),
    };
    Ok(Report::new(format!("{p}\n")))
}

pub fn horseshoe(map_src: &str, k: usize, depth: usize, m_bound: usize) -> CliResult<Report> {
    let cfg = RunConfig::load(map_src)?;
    let g = ExactMap::parse(cfg.require("map", "breakpoints")?)
        .map_err(|e| config(format!("{map_src}: key `breakpoints` in [map]: {e}")))?;
    let chain = parse_links(cfg.require("chain", "links")?)
        .map_err(|e| config(format!("{map_src}: key `links` in [chain]: {e}")))?;
    let cert = match horseshoe_extract(&g, &chain, k, depth, m_bound) {
        Err(hakdyn::Error::EmptyBranch { word }) => {
            let named: Vec<String> = word.iter().map(usize::to_string).collect();
            return Err(CliError::Check(format!(
                "horseshoe certificate for k = {k}: empty branch {}",
                named.join("-")
            )));
        }
        other => other?,
    };
    let mut csv = String::from("word,lo,hi\n");
    for (word, set) in &cert.words {
        let name: Vec<String> = word.iter().map(usize::to_string).collect();
        let name = name.join("-");
        for (lo, hi) in set {
            csv.push_str(&format!("{name},{},{}\n", format_g(lo.to_f64()), format_g(hi.to_f64())));
        }
    }
    Ok(Report::new(csv)
        .line(format!(
            "certificate k = {} m = {} depth = {} orientation = {:?}: {} of {} itinerary intervals nonempty",
            cert.k,
            cert.m,
            cert.depth,
            cert.orientation,
            cert.nonempty_count(),
            cert.words.len()
        ))
        .line(format!("entropy lower bound ln(k)/m = {}", format_g(cert.bound()))))
}

pub fn render(levels_src: &str) -> CliResult<Report> {
    let levels = parse_levels(&read_source(levels_src)?, levels_src)?;
    let svg = render_chains(&levels, &RenderStyle::default());
    let sizes: Vec<String> = levels.iter().map(|l| l.len().to_string()).collect();
    Ok(Report::new(svg).line(format!("rendered {} levels with {} links", levels.len(), sizes.join("/"))))
}
