use hakdyn::chains::{kfold, refine_chain, Pattern, Rect};
use hakdyn::num::{parse_rational, Rational};
use hakdyn::ExactChain;

use crate::error::{config, CliResult};

/// Parses a levels file into a list of chain covers, coarsest first.
///
/// Lines: `essential N DELTA`, `refine kfold K`, `refine pattern 1,2,...`,
/// or `level closed|open` followed by `link t0 t1 r0 r1` lines.
pub fn parse_levels(text: &str, source: &str) -> CliResult<Vec<ExactChain>> {
    let mut levels: Vec<ExactChain> = Vec::new();
    let mut pending: Option<(bool, Vec<Rect<Rational>>)> = None;
    let at = |line: usize, msg: String| config(format!("{source} line {line}: {msg}"));
    let flush = |pending: &mut Option<(bool, Vec<Rect<Rational>>)>, levels: &mut Vec<ExactChain>, line: usize| {
        if let Some((closed, links)) = pending.take() {
            levels.push(ExactChain::new(links, closed).map_err(|e| at(line, e.to_string()))?);
        }
        CliResult::Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let rational = |s: &str| parse_rational(s).ok_or_else(|| at(line, format!("`{s}` is not a rational number")));
        match words.as_slice() {
            ["link", t0, t1, r0, r1] => match pending.as_mut() {
                Some((_, links)) => links.push(Rect::new(rational(t0)?, rational(t1)?, rational(r0)?, rational(r1)?)),
                None => return Err(at(line, "`link` outside a `level` block".into())),
            },
            _ => {
                flush(&mut pending, &mut levels, line)?;
                match words.as_slice() {
                    ["essential", n, delta] => {
                        let n: usize = n.parse().map_err(|_| at(line, format!("`{n}` is not a link count")))?;
                        levels.push(ExactChain::essential(n, rational(delta)?).map_err(|e| at(line, e.to_string()))?);
                    }
                    ["level", kind @ ("closed" | "open")] => pending = Some((*kind == "closed", Vec::new())),
                    ["refine", "kfold", k] => {
                        let k: usize = k.parse().map_err(|_| at(line, format!("`{k}` is not a fold count")))?;
                        let f = kfold(k).map_err(|e| at(line, e.to_string()))?;
                        refine_last(&mut levels, &f).map_err(|e| at(line, e))?;
                    }
                    ["refine", "pattern", values] => {
                        let f = Pattern::parse(values).map_err(|e| at(line, e.to_string()))?;
                        refine_last(&mut levels, &f).map_err(|e| at(line, e))?;
                    }
                    _ => return Err(at(line, format!("unrecognized directive `{content}`"))),
                }
            }
        }
    }
    flush(&mut pending, &mut levels, text.lines().count())?;
    if levels.is_empty() {
        return Err(config(format!("{source}: no chain levels")));
    }
    Ok(levels)
}

fn refine_last(levels: &mut Vec<ExactChain>, f: &Pattern) -> Result<(), String> {
    let parent = levels.last().ok_or_else(|| "`refine` before any level".to_string())?;
    let child = refine_chain(parent, f).map_err(|e| e.to_string())?;
    levels.push(child);
    Ok(())
}
