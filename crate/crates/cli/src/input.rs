use std::fs;
use std::io::{self, Read};
use std::path::Path;

use anyhow::{bail, Context, Result};
use nazeta::cone::parse_rational;
use nazeta::lattice::LatticeRecord;
use nazeta::polygon::Polygon;
use nazeta::{ApartmentVector, ParabolicIndex, Rational};
use num_complex::Complex64;

pub fn read_text(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("cannot read stdin")?;
            Ok(s)
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty())
}

pub fn rationals(line: &str) -> Result<Vec<Rational>> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|w| !w.is_empty())
        .map(|w| parse_rational(w).map_err(Into::into))
        .collect()
}

/// One line of `r + 1` rationals.
pub fn polygon(text: &str) -> Result<Polygon<Rational>> {
    let mut lines = content_lines(text);
    let Some(line) = lines.next() else { bail!("empty polygon file") };
    if lines.next().is_some() {
        bail!("polygon file must contain a single line");
    }
    Ok(Polygon::new(rationals(line)?)?)
}

/// First line `r`, then `r` rows of the Gram matrix.
pub fn lattice(text: &str) -> Result<LatticeRecord> {
    let mut lines = content_lines(text);
    let Some(first) = lines.next() else { bail!("empty lattice file") };
    let r: usize = first.parse().with_context(|| format!("bad rank {first:?}"))?;
    let rows = lines.map(rationals).collect::<Result<Vec<_>>>()?;
    if rows.len() != r || rows.iter().any(|row| row.len() != r) {
        bail!("expected {r} rows of {r} entries after the rank line");
    }
    Ok(LatticeRecord::new(rows)?)
}

/// Block sizes such as `1,2,1` or `1 2 1`.
pub fn parabolic(s: &str) -> Result<ParabolicIndex> {
    let blocks = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|w| !w.is_empty())
        .map(|w| w.parse::<usize>().with_context(|| format!("bad block size {w:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(ParabolicIndex::new(&blocks)?)
}

pub fn apartment(s: &str) -> Result<ApartmentVector<Rational>> {
    Ok(ApartmentVector::new(rationals(s)?)?)
}

/// `a`, `a+bi`, `a-bi`, `bi` or `i`.
pub fn complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let num = |x: &str| x.parse::<f64>().with_context(|| format!("bad complex number {s:?}"));
    let Some(body) = t.strip_suffix('i') else { return Ok(Complex64::new(num(&t)?, 0.0)) };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(k, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (num(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => num(x)?,
    };
    Ok(Complex64::new(re, im))
}
