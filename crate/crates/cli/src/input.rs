//! Weight shorthands and triple files: one polynomial per line, blank lines
//! separating the two triples of a pair, `#` starting a comment line.

use std::fmt;
use std::io::Read;
use std::path::Path;

use tame3_core::endo::Endo3;
use tame3_core::text::parse_polynomial_at;
use tame3_core::univariate::AuxPoly;
use tame3_core::Polynomial;
use tame3_core::WeightSystem;

#[derive(Debug)]
pub struct InputError(String);

impl InputError {
    pub fn new(msg: String) -> Self {
        InputError(msg)
    }
}

impl From<tame3_core::Error> for InputError {
    fn from(e: tame3_core::Error) -> Self {
        InputError(e.to_string())
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `total` is `(1,1,1)`, `nagata-lex` is `(e1, e2, e3)` under lex order, and
/// explicit vectors are `;`-separated with `,`-separated coordinates.
pub fn parse_weight(spec: &str) -> Result<WeightSystem, InputError> {
    match spec.trim() {
        "total" => Ok(WeightSystem::total_degree(3)),
        "nagata-lex" => Ok(WeightSystem::lex_unit(3)),
        s => {
            let vectors = s
                .split(';')
                .map(|v| v.split(',').map(|c| c.trim().parse::<i64>()).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| InputError(format!("weight '{s}': {e}")))?;
            if vectors.len() != 3 {
                return Err(InputError(format!("weight '{s}': expected 3 vectors, found {}", vectors.len())));
            }
            Ok(WeightSystem::new(vectors)?)
        }
    }
}

fn read_source(path: &Path) -> Result<String, InputError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| InputError(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }
}

/// Blocks of nonblank lines with their 1-based line numbers.
fn blocks(src: &str) -> Vec<Vec<(usize, &str)>> {
    let mut out: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    for (k, line) in src.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('#') {
            continue;
        }
        if t.is_empty() {
            if !out.last().expect("nonempty").is_empty() {
                out.push(Vec::new());
            }
        } else {
            out.last_mut().expect("nonempty").push((k + 1, line));
        }
    }
    out.retain(|b| !b.is_empty());
    out
}

fn triple_from(block: &[(usize, &str)]) -> Result<Endo3, InputError> {
    if block.len() != 3 {
        let line = block.first().map_or(1, |l| l.0);
        return Err(InputError(format!("line {line}: expected 3 polynomials, found {}", block.len())));
    }
    let polys = block.iter().map(|(n, s)| parse_polynomial_at(s, 3, *n)).collect::<Result<Vec<_>, _>>()?;
    Ok(Endo3::from_vec(polys)?)
}

pub fn parse_triple_text(src: &str) -> Result<Endo3, InputError> {
    let bs = blocks(src);
    match bs.as_slice() {
        [b] => triple_from(b),
        _ => Err(InputError(format!("expected one triple, found {} blocks", bs.len()))),
    }
}

pub fn read_triple(path: &Path) -> Result<Endo3, InputError> {
    parse_triple_text(&read_source(path)?)
}

/// A pair `(F, G)`; with `single_ok` a lone triple is accepted as `(F, F)`.
pub fn read_pair(path: &Path, single_ok: bool) -> Result<(Endo3, Endo3), InputError> {
    let src = read_source(path)?;
    let bs = blocks(&src);
    match bs.as_slice() {
        [f, g] => Ok((triple_from(f)?, triple_from(g)?)),
        [f] if single_ok => {
            let f = triple_from(f)?;
            Ok((f.clone(), f))
        }
        _ => Err(InputError(format!("expected a pair of triples separated by a blank line, found {} blocks", bs.len()))),
    }
}

/// Components separated by `;`.
pub fn parse_inline(src: &str) -> Result<Endo3, InputError> {
    let parts: Vec<&str> = src.split(';').collect();
    if parts.len() != 3 {
        return Err(InputError(format!("expected 3 components separated by ';', found {}", parts.len())));
    }
    let polys = parts.iter().map(|s| parse_polynomial_at(s, 3, 1)).collect::<Result<Vec<_>, _>>()?;
    Ok(Endo3::from_vec(polys)?)
}

/// Three blocks: the generators `f_1, ..., f_r` one per line, the
/// coefficients of `Φ` as `i: φ_i` lines, and `g` on one line.
pub fn read_inequality(path: &Path) -> Result<(Vec<Polynomial>, AuxPoly, Polynomial), InputError> {
    parse_inequality_text(&read_source(path)?)
}

pub fn parse_inequality_text(src: &str) -> Result<(Vec<Polynomial>, AuxPoly, Polynomial), InputError> {
    let bs = blocks(src);
    let [fs, phi, g] = bs.as_slice() else {
        return Err(InputError(format!("expected 3 blocks (generators, coefficients, g), found {}", bs.len())));
    };
    if fs.len() > 3 {
        return Err(InputError(format!("line {}: at most 3 generators, found {}", fs[0].0, fs.len())));
    }
    let fs = fs.iter().map(|(n, s)| parse_polynomial_at(s, 3, *n)).collect::<Result<Vec<_>, _>>()?;
    let mut coeffs = Vec::with_capacity(phi.len());
    for (n, line) in phi {
        let (i, p) = line
            .split_once(':')
            .ok_or_else(|| InputError(format!("line {n}: expected 'i: polynomial'")))?;
        let i: u32 = i.trim().parse().map_err(|e| InputError(format!("line {n}: power '{}': {e}", i.trim())))?;
        coeffs.push((i, parse_polynomial_at(p, 3, *n)?));
    }
    if g.len() != 1 {
        return Err(InputError(format!("line {}: expected one polynomial g, found {}", g[0].0, g.len())));
    }
    let gp = parse_polynomial_at(g[0].1, 3, g[0].0)?;
    Ok((fs, AuxPoly::from_coeffs(3, coeffs), gp))
}

pub fn write_triple(path: &Path, f: &Endo3) -> Result<(), InputError> {
    let text: String = f.to_strings().iter().map(|s| format!("{s}\n")).collect();
    std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}
