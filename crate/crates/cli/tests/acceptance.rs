//! Acceptance criteria, one PASS/FAIL line each.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use hakdyn::annulus::{conjugacy_invariance_check, displacement_bound, rotation_estimate, rotation_family};
use hakdyn::cantor::{spectral_radius, CantorSystem, SymbolSequence};
use hakdyn::chains::{horseshoe_extract, kfold, parse_links, refine_chain, Pattern};
use hakdyn::num::Rational;
use hakdyn::{AnnulusMap, ExactChain, ExactMap, Point, Suspension};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hakdyn(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_hakdyn")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `(lower, upper)` from the first data row of a `suspend-entropy` CSV.
fn bracket(args: &[&str]) -> Result<(f64, f64), String> {
    let run = hakdyn(args);
    ensure(run.code == 0, || format!("exit {} for {args:?}: {}", run.code, run.stderr))?;
    let row = run.stdout.lines().nth(1).ok_or("missing data row")?;
    let cols: Vec<f64> = row.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect();
    Ok((cols[3], cols[4]))
}

fn entropy_bracket() -> Outcome {
    let (lo, hi) = bracket(&["suspend-entropy", "--config", "fixture:fullshift2"])?;
    ensure(lo >= 0.20 && hi <= 0.55, || format!("alpha 0.5 bracket [{lo}, {hi}]"))?;
    let (_, hi0) = bracket(&["suspend-entropy", "--config", "fixture:fullshift2", "--set", "map.map=rotation:0.0"])?;
    ensure(hi0 <= 0.05, || format!("alpha 0 upper {hi0}"))?;
    let bases = format!("cantor.bases={}", ["2"; 12].join(","));
    let (_, hio) = bracket(&["suspend-entropy", "--config", "fixture:odometer222", "--set", &bases, "--eps", "1/16"])?;
    ensure(hio <= 0.05, || format!("odometer upper {hio}"))?;
    Ok(format!("full shift [{lo:.4}, {hi:.4}] around 0.3466; alpha 0 upper {hi0:.4}; odometer upper {hio:.4}"))
}

fn linearity() -> Outcome {
    let (l1, u1) = bracket(&["suspend-entropy", "--config", "fixture:fullshift2", "--set", "map.map=rotation:1.0"])?;
    let (lh, uh) = bracket(&["suspend-entropy", "--config", "fixture:fullshift2"])?;
    let ratio = (l1 + u1) / (lh + uh);
    ensure((1.5..=2.5).contains(&ratio), || format!("ratio {ratio}"))?;
    Ok(format!("midpoint ratio {ratio:.3}"))
}

fn rotation_convergence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let beta: f64 = rng.gen_range(-3.0..3.0);
        let est = rotation_estimate(&AnnulusMap::rotation(beta), 0.3, 0.1, 1000).map_err(|e| e.to_string())?;
        if let Some((n, e)) = est.iter().find(|(_, e)| (e - beta).abs() > 1e-12) {
            return Err(format!("beta {beta}: estimate {e} at n {n}"));
        }
    }
    let pipelines = [
        "rotation:0.3 | twist:0,0.05;1,0.4 | reparam:0,0;0.5,0.3;1,1",
        "twist:0,0.618;1,0.2 | rotation:0.1",
        "reparam:0,0;0.2,0.6;1,1 | twist:0,-0.25;0.7,0.1;1,0.9",
    ];
    let n = 10_000;
    for text in pipelines {
        let map = AnnulusMap::parse(text).map_err(|e| e.to_string())?;
        for t0 in [0.0, 1.0] {
            let est = rotation_estimate(&map, t0, 0.1, n).map_err(|e| e.to_string())?;
            let sys = Suspension::new(map.clone(), CantorSystem::odometer(vec![2; 6]).unwrap(), 32);
            let p = Point { t: t0, r: 0.1, c: SymbolSequence::digits(vec![0; 6], vec![2; 6]), seed: 0, winding: 0 };
            let rate = sys.winding_rate(&p, n).map_err(|e| e.to_string())?;
            for ((k, w), (_, e)) in rate.iter().zip(&est) {
                ensure((w - e).abs() <= 2.0 / *k as f64, || format!("`{text}` t = {t0}: k = {k}, {w} vs {e}"))?;
            }
        }
    }
    Ok(format!("50 rigid rotations exact; winding within 2/k up to k = {n} on 3 pipelines"))
}

fn hak_verifier() -> Outcome {
    let run = hakdyn(&["hak-verify", "--config", "fixture:hak3"]);
    ensure(run.code == 0, || format!("toy exit {}: {}", run.code, run.stderr))?;
    let rows: Vec<&str> = run.stdout.lines().skip(1).filter(|l| !l.starts_with('#')).collect();
    for cond in ["(1)", "(2)", "(3)", "(4)", "(5)", "(6)", "(7)", "(8)"] {
        ensure(rows.iter().any(|r| r.starts_with(&format!("{cond},"))), || format!("toy report lacks {cond}"))?;
    }
    for row in &rows {
        let cols: Vec<&str> = row.rsplitn(3, ',').collect();
        let margin: f64 = cols[1].parse().map_err(|_| format!("bad margin in `{row}`"))?;
        ensure(cols[0] == "true" && margin > 0.0, || format!("toy row `{row}`"))?;
    }
    for (fixture, cond) in [("hak3-wide-support", "(3)"), ("hak3-tall-box", "(2)"), ("hak3-wide-band", "(1)")] {
        let run = hakdyn(&["hak-verify", "--config", &format!("fixture:{fixture}")]);
        ensure(run.code == 2, || format!("{fixture} exit {}", run.code))?;
        let failed: Vec<&str> =
            run.stdout.lines().filter(|l| l.ends_with(",false")).map(|l| l.split(',').next().unwrap_or("")).collect();
        ensure(!failed.is_empty() && failed.iter().all(|c| *c == cond), || format!("{fixture} failed {failed:?}"))?;
        ensure(run.stderr.contains(cond), || format!("{fixture} message `{}`", run.stderr.trim()))?;
    }
    Ok(format!("toy passes {} checks with positive margins; mutants fail (3), (2), (1) with exit 2", rows.len()))
}

fn suspension_algebra() -> Outcome {
    let maps =
        ["rotation:0.37", "rotation:0.3 | twist:0,0.05;1,0.4 | reparam:0,0;0.5,0.3;1,1", "twist:0,-0.6;0.5,1.7;1,0.2"];
    let cantors = || {
        vec![
            CantorSystem::full_shift(2).unwrap(),
            CantorSystem::golden_mean(),
            CantorSystem::thue_morse(),
            CantorSystem::odometer(vec![2, 3, 2]).unwrap(),
        ]
    };
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let samples = 1000;
    let err = |e: hakdyn::Error| e.to_string();
    for i in 0..samples {
        let map = AnnulusMap::parse(maps[i % maps.len()]).map_err(err)?;
        let mut sys = Suspension::new(map.clone(), cantors().swap_remove((i / maps.len()) % 4), 24);
        let s = sys.register_random_seed(rng.gen());
        let radius = sys.seeds()[s].radius().min(8);
        let (t, r): (f64, f64) = (rng.gen_range(0.0..=1.0), rng.gen_range(0.0..1.0));
        let base = sys.normalize(t, r, sys.seeds()[s].clone(), s, 0).map_err(err)?;
        for m in -3i64..=3 {
            let c = sys.cantor().iterate(&sys.seeds()[s], -m);
            let other = sys.normalize(t, r + m as f64, c, s, -m).map_err(err)?;
            ensure(sys.quotient_distance(&other, &base) < 1e-9 && other.c.agrees_within(&base.c, radius), || {
                format!("sample {i}: representative shifted by {m} is a different point")
            })?;
        }
        let shift = rng.gen_range(-3i64..=3);
        let (t1, r1) = map.apply(t, r + shift as f64).map_err(err)?;
        let late = sys.normalize(t1, r1, sys.cantor().iterate(&sys.seeds()[s], -shift), s, -shift).map_err(err)?;
        let early = sys.step(&base).map_err(err)?;
        ensure(sys.quotient_distance(&early, &late) < 1e-9, || format!("sample {i}: step and normalize disagree"))?;
        ensure(early.seed == late.seed && early.seed == s, || format!("sample {i}: component changed"))?;
        let (ht, hr) = map.apply(base.t, base.r).map_err(err)?;
        let dr = (early.r - (hr - hr.floor())).abs();
        ensure((early.t - ht).abs() < 1e-9 && !(1e-9..=1.0 - 1e-9).contains(&dr), || {
            format!("sample {i}: fiber moved")
        })?;
    }
    Ok(format!("{samples} samples: quotient, commutation, component and fiber checks hold"))
}

fn kfold_patterns() -> Outcome {
    let run = hakdyn(&["pattern", "--kfold", "3"]);
    ensure(run.code == 0 && run.stdout.trim() == "1,2,3,4,5,4,3,4,5,6,7", || {
        format!("kfold 3 printed `{}`", run.stdout.trim())
    })?;
    for k in (3..=21).step_by(2) {
        let p = kfold(k).map_err(|e| format!("kfold({k}): {e}"))?;
        Pattern::new(p.values().to_vec()).map_err(|e| format!("kfold({k}) invalid: {e}"))?;
        let parent = ExactChain::essential(p.range(), Rational::new(1, 50)).map_err(|e| e.to_string())?;
        let child = refine_chain(&parent, &p).map_err(|e| format!("refining by kfold({k}): {e}"))?;
        ensure(child.follows(&parent, &p), || format!("kfold({k}) refinement does not follow its pattern"))?;
    }
    ensure(kfold(4).is_err(), || "kfold(4) accepted".into())?;
    let run = hakdyn(&["pattern", "--kfold", "4"]);
    ensure(run.code == 3, || format!("pattern --kfold 4 exit {}", run.code))?;
    Ok("kfold(3) exact, odd k <= 21 valid and realized by refinement, kfold(4) rejected".into())
}

fn fixture_key(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.trim().strip_prefix(key).and_then(|r| r.trim().strip_prefix('=')))
        .map(|v| v.trim().to_string())
        .unwrap_or_default()
}

fn markov_entropy(g: &ExactMap) -> f64 {
    let xs: Vec<Rational> = g.points().iter().map(|p| p.0).collect();
    let laps = xs.len() - 1;
    let a: Vec<Vec<f64>> = (0..laps)
        .map(|i| {
            let img = g.image(&(xs[i], xs[i + 1]));
            (0..laps).map(|j| if img.0 < img.1 && img.0 <= xs[j] && xs[j + 1] <= img.1 { 1.0 } else { 0.0 }).collect()
        })
        .collect();
    spectral_radius(&a).ln()
}

fn horseshoe_certificate() -> Outcome {
    let text = include_str!("../fixtures/pl3.ini");
    let g = ExactMap::parse(&fixture_key(text, "breakpoints")).map_err(|e| e.to_string())?;
    let chain = parse_links(&fixture_key(text, "links")).map_err(|e| e.to_string())?;
    let cert = horseshoe_extract(&g, &chain, 3, 5, 4).map_err(|e| e.to_string())?;
    let oracle = markov_entropy(&g);
    ensure(cert.nonempty_count() == 729, || format!("{} nonempty intervals", cert.nonempty_count()))?;
    ensure((cert.bound() - oracle).abs() < 1e-9, || format!("bound {} vs oracle {oracle}", cert.bound()))?;
    let run = hakdyn(&["horseshoe", "--map", "fixture:pl3", "--k", "3", "--depth", "5"]);
    ensure(run.code == 0, || format!("pl3 exit {}", run.code))?;
    let mut words: Vec<&str> =
        run.stdout.lines().skip(1).filter(|l| !l.starts_with('#')).map(|l| l.split(',').next().unwrap_or("")).collect();
    words.dedup();
    ensure(words.len() == 729, || format!("CLI listed {} words", words.len()))?;
    let run = hakdyn(&["horseshoe", "--map", "fixture:tent", "--k", "3", "--depth", "5"]);
    ensure(run.code == 2 && run.stderr.contains("empty branch"), || format!("tent exit {}: {}", run.code, run.stderr))?;
    Ok(format!("729 words, bound {:.12} = oracle {oracle:.12}; tent: {}", cert.bound(), run.stderr.trim()))
}

fn rotation_family_gaps() -> Outcome {
    let eps = 0.1;
    let mut values = Vec::new();
    let mut b8 = 0.0;
    for x in 0..256u32 {
        let bits: Vec<u8> = (0..8).map(|j| ((x >> (7 - j)) & 1) as u8).collect();
        let (alpha, schedule) = rotation_family(&bits, eps).map_err(|e| e.to_string())?;
        b8 = schedule[7];
        values.push(alpha);
    }
    ensure((b8 - eps / 4.0 * 8f64.powi(-8)).abs() < 1e-20, || format!("schedule b_8 = {b8}"))?;
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).abs());
        }
    }
    ensure(gap >= b8 / 2.0, || format!("minimum gap {gap} below {}", b8 / 2.0))?;
    let run = hakdyn(&["rotation-family", "--eps", "0.1", "--set", "experiment.bits=8"]);
    let rows = run.stdout.lines().skip(1).filter(|l| !l.starts_with('#')).count();
    ensure(run.code == 0 && rows == 256, || format!("CLI exit {} with {rows} rows", run.code))?;
    Ok(format!("256 words, minimum gap {gap:.4e} >= b_8/2 = {:.4e}", b8 / 2.0))
}

fn conjugacy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = AnnulusMap::parse("twist:0,0.1;0.5,0.4;1,0.25 | reparam:0,0;0.5,0.6;1,1").map_err(|e| e.to_string())?;
    let n = 1000;
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let prof = format!(
            "0,{:.3};0.5,{:.3};1,{:.3}",
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0)
        );
        let g = AnnulusMap::parse(&format!("twist:{prof} | rotation:0.4")).map_err(|e| e.to_string())?;
        let rep = conjugacy_invariance_check(&f, &g, n, (rng.gen_range(0.0..=1.0), 0.0)).map_err(|e| e.to_string())?;
        let bound = 2.0 * displacement_bound(&g) / n as f64;
        ensure(rep.difference() <= bound, || format!("pair {i}: difference {} > {bound}", rep.difference()))?;
        worst = worst.max(rep.difference() / bound);
    }
    Ok(format!("20 pairs at n = {n}, worst difference {:.3} of the bound", worst))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cases: Vec<(&str, Vec<&str>)> = vec![
        (
            "rotation",
            vec!["rotation", "--config", "fixture:golden-mean", "--set", "map.map=rotation:0.3 | twist:0,0;1,0.25"],
        ),
        ("rigidity", vec!["rigidity", "--config", "fixture:fullshift2", "--horizon", "8"]),
        ("hak-verify", vec!["hak-verify", "--config", "fixture:hak3", "--grid", "16"]),
        (
            "suspend-entropy",
            vec!["suspend-entropy", "--config", "fixture:golden-mean", "--budget", "4000", "--n", "8,10"],
        ),
        ("suspend-orbit", vec!["suspend-orbit", "--config", "fixture:thue-morse", "--n", "50"]),
        ("mixing-witness", vec!["mixing-witness", "--config", "fixture:fullshift2", "--horizon", "20"]),
        ("dense-orbit", vec!["dense-orbit", "--config", "fixture:odometer222"]),
        ("rotation-family", vec!["rotation-family", "--set", "experiment.bits=6"]),
        ("horseshoe", vec!["horseshoe", "--map", "fixture:pl5", "--k", "5", "--depth", "3"]),
        ("render", vec!["render", "--levels", "fixture:kfold3"]),
    ];
    for (name, args) in &cases {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path = dir.path().join(format!("{name}-{rep}.out"));
            let path = path.to_str().expect("utf-8 temp path");
            let mut full = args.clone();
            full.extend(["--out", path]);
            let run = hakdyn(&full);
            ensure(run.code == 0, || format!("{name} exit {}: {}", run.code, run.stderr.trim()))?;
            outputs.push(std::fs::read(Path::new(path)).map_err(|e| e.to_string())?);
        }
        ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || format!("{name} output differs between runs"))?;
    }
    let a = hakdyn(&["pattern", "--kfold", "7"]);
    let b = hakdyn(&["pattern", "--kfold", "7"]);
    ensure(a.code == 0 && a.stdout == b.stdout, || "pattern output differs".into())?;
    Ok(format!("{} subcommands byte-identical across reruns", cases.len() + 1))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("entropy bracket", entropy_bracket),
        ("linearity in alpha", linearity),
        ("rotation-number convergence", rotation_convergence),
        ("HAK verifier", hak_verifier),
        ("pseudo-suspension algebra", suspension_algebra),
        ("k-fold patterns", kfold_patterns),
        ("horseshoe certificate", horseshoe_certificate),
        ("rotation family", rotation_family_gaps),
        ("conjugacy invariance", conjugacy),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
