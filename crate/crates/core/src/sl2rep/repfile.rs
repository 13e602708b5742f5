//! Text format for representations.
//!
//! ```text
//! # comments start with '#'
//! generators 2
//! relation abAB
//! a 2.718281828459045,0 0,0 0,0 0.36787944117144233,0
//! b 1.5430806348152437,0 1.1752011936438014,0 1.1752011936438014,0 1.5430806348152437,0
//! ```
//!
//! `generators <n>` is optional and defaults to the number of matrix lines.
//! Each matrix line is a generator letter followed by the entries `p q r s`
//! of `[[p, q], [r, s]]`, each written `re,im`. Every generator needs exactly
//! one line. The writer uses shortest round-trip float formatting, so
//! `write(parse(write(rep)))` reproduces the file byte for byte.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::{make_rep, Matrix2C, RepError, Representation};
use crate::fpgroup::{Letter, Presentation, Word};

fn parse_err(line: usize, message: impl Into<String>) -> RepError {
    RepError::Parse { line, message: message.into() }
}

fn parse_complex(tok: &str, line: usize) -> Result<Complex64, RepError> {
    let (re, im) = tok.split_once(',').ok_or_else(|| parse_err(line, format!("expected re,im, found {tok:?}")))?;
    let num = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| parse_err(line, format!("bad number {s:?}")))
    };
    Ok(Complex64::new(num(re)?, num(im)?))
}

pub fn parse(text: &str) -> Result<Representation, RepError> {
    let mut declared: Option<usize> = None;
    let mut relations = Vec::new();
    let mut images: Vec<Option<Matrix2C>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "generators" => {
                let n = toks
                    .get(1)
                    .and_then(|t| t.parse::<usize>().ok())
                    .filter(|_| toks.len() == 2)
                    .ok_or_else(|| parse_err(line_no, "expected `generators <n>`"))?;
                declared = Some(n);
            }
            "relation" => {
                if toks.len() != 2 {
                    return Err(parse_err(line_no, "expected `relation <word>`"));
                }
                relations.push(toks[1].parse::<Word>().map_err(|e| parse_err(line_no, e.to_string()))?);
            }
            head => {
                let mut chars = head.chars();
                let letter = match (chars.next(), chars.next()) {
                    (Some(c), None) if c.is_ascii_lowercase() => Letter::from_char(c)?,
                    _ => return Err(parse_err(line_no, format!("unknown record {head:?}"))),
                };
                if toks.len() != 5 {
                    return Err(parse_err(line_no, "expected a letter and four re,im entries"));
                }
                let e = toks[1..]
                    .iter()
                    .map(|t| parse_complex(t, line_no))
                    .collect::<Result<Vec<_>, _>>()?;
                let g = letter.generator;
                if images.len() <= g {
                    images.resize(g + 1, None);
                }
                if images[g].replace(Matrix2C::new(e[0], e[1], e[2], e[3])).is_some() {
                    return Err(parse_err(line_no, format!("generator {head} given twice")));
                }
            }
        }
    }
    let n = declared.unwrap_or(images.len());
    if images.len() > n {
        return Err(parse_err(0, format!("matrix for generator {} exceeds declared rank {n}", images.len() - 1)));
    }
    images.resize(n, None);
    let matrices = images
        .into_iter()
        .enumerate()
        .map(|(g, m)| m.ok_or_else(|| parse_err(0, format!("missing matrix for generator {}", Letter::gen(g).to_char()))))
        .collect::<Result<Vec<_>, _>>()?;
    make_rep(Presentation::new(n, relations)?, matrices)
}

pub fn write(rep: &Representation) -> String {
    let mut out = String::new();
    writeln!(out, "generators {}", rep.rank()).unwrap();
    for r in rep.presentation().relations() {
        writeln!(out, "relation {r}").unwrap();
    }
    for (g, m) in rep.images().iter().enumerate() {
        write!(out, "{}", Letter::gen(g).to_char()).unwrap();
        for z in m.entries() {
            write!(out, " {:?},{:?}", z.re, z.im).unwrap();
        }
        out.push('\n');
    }
    out
}
