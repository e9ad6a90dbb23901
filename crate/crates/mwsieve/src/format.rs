//! Curve and generator input files.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use mwsieve_core::sieve::GeneratorSet;
use mwsieve_core::{CurveSpec, JacobianQ, MumfordDivisor, Poly, Rationals};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{CliError, Result};

/// How a generator line enters the generator set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorTag {
    Free,
    Torsion,
    Offset,
}

impl GeneratorTag {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorTag::Free => "free",
            GeneratorTag::Torsion => "torsion",
            GeneratorTag::Offset => "offset",
        }
    }
}

impl FromStr for GeneratorTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "free" => Ok(GeneratorTag::Free),
            "torsion" => Ok(GeneratorTag::Torsion),
            "offset" => Ok(GeneratorTag::Offset),
            _ => Err(format!("unknown generator tag `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorLine {
    pub tag: GeneratorTag,
    pub divisor: MumfordDivisor<BigRational>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_curve(text: &str, path: &Path) -> Result<CurveSpec> {
    let err = |line, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = content_lines(text);
    let (line, body) = lines.next().ok_or_else(|| err(1, "no coefficient line".into()))?;
    let coeffs = body
        .split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|_| err(line, format!("bad integer `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    if let Some((extra, _)) = lines.next() {
        return Err(err(extra, "unexpected second coefficient line".into()));
    }
    CurveSpec::new(coeffs).map_err(|e| err(line, e.to_string()))
}

pub fn parse_curve_file(path: &Path) -> Result<CurveSpec> {
    parse_curve(&read(path)?, path)
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (BigInt::from_str(n).ok()?, BigInt::from_str(d).ok()?),
        None => (BigInt::from_str(s).ok()?, BigInt::one()),
    };
    (!den.is_zero()).then(|| BigRational::new(num, den))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_poly(body: &str) -> std::result::Result<Poly<BigRational>, String> {
    let coeffs = body
        .split_whitespace()
        .map(|t| parse_rational(t).ok_or_else(|| format!("bad rational `{t}`")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(Poly::from_coeffs(&Rationals, coeffs))
}

/// `[tag] u: c0 c1 ... ; v: c0 c1 ...`
fn parse_generator_line(jac: &JacobianQ, body: &str) -> std::result::Result<GeneratorLine, String> {
    let (tag, rest) = match body.split_once(char::is_whitespace) {
        Some((first, rest)) if !first.starts_with("u:") => (first.parse()?, rest.trim_start()),
        _ => (GeneratorTag::Free, body),
    };
    let (u_part, v_part) = rest.split_once(';').ok_or("expected `u: ... ; v: ...`")?;
    let u = u_part.trim().strip_prefix("u:").ok_or("expected `u:`")?;
    let v = v_part.trim().strip_prefix("v:").ok_or("expected `v:`")?;
    let divisor = jac.divisor(parse_poly(u)?, parse_poly(v)?).map_err(|e| e.to_string())?;
    Ok(GeneratorLine { tag, divisor })
}

pub fn parse_generators(text: &str, curve: &CurveSpec, path: &Path) -> Result<Vec<GeneratorLine>> {
    let jac = JacobianQ::over_rationals(curve);
    let mut out = Vec::new();
    let mut offsets = 0;
    for (line, body) in content_lines(text) {
        let g = parse_generator_line(&jac, body).map_err(|message| CliError::Parse {
            path: path.to_path_buf(),
            line,
            message,
        })?;
        if g.tag == GeneratorTag::Offset {
            offsets += 1;
            if offsets > 1 {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: "at most one offset line".into(),
                });
            }
        }
        out.push(g);
    }
    Ok(out)
}

pub fn generator_set(curve: &CurveSpec, lines: &[GeneratorLine]) -> Result<GeneratorSet> {
    let pick = |tag| {
        lines
            .iter()
            .filter(|g| g.tag == tag)
            .map(|g| g.divisor.clone())
            .collect::<Vec<_>>()
    };
    let offset = pick(GeneratorTag::Offset).into_iter().next();
    Ok(GeneratorSet::new(
        curve,
        pick(GeneratorTag::Free),
        pick(GeneratorTag::Torsion),
        offset,
    )?)
}

pub fn load_generators(path: &Path, curve: &CurveSpec) -> Result<(Vec<GeneratorLine>, GeneratorSet)> {
    let lines = parse_generators(&read(path)?, curve, path)?;
    let set = generator_set(curve, &lines)?;
    Ok((lines, set))
}

/// A generator line in input syntax.
pub fn format_generator(g: &GeneratorLine) -> String {
    let poly = |p: &Poly<BigRational>| {
        if p.is_zero() {
            "0".to_string()
        } else {
            p.coeffs().iter().map(format_rational).collect::<Vec<_>>().join(" ")
        }
    };
    format!("{} u: {} ; v: {}", g.tag.name(), poly(&g.divisor.u), poly(&g.divisor.v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mwsieve_core::Error;

    fn p() -> &'static Path {
        Path::new("test.txt")
    }

    #[test]
    fn curves() {
        assert_eq!(parse_curve("1 0 0 0 0 1\n", p()).unwrap().genus(), 2);
        assert_eq!(parse_curve("# x^3 + 1\n\n1 0 0 1", p()).unwrap().genus(), 1);
        let e = parse_curve("1 0 1", p()).unwrap_err();
        assert!(matches!(&e, CliError::Parse { line: 1, .. }));
        assert!(e.to_string().contains(&Error::EvenDegree(2).to_string()));
        assert!(matches!(
            parse_curve("# c\n1 x 1", p()),
            Err(CliError::Parse { line: 2, .. })
        ));
        assert!(parse_curve("0 0 1 1", p())
            .unwrap_err()
            .to_string()
            .contains("squarefree"));
        assert!(parse_curve("1 0 0 1\n1 0 0 1", p()).is_err());
    }

    #[test]
    fn generators() {
        let c = parse_curve("1 0 0 0 0 1", p()).unwrap();
        let text = "# points (0, 1) and (-1, 0)\nu: 0 1 ; v: 1\ntorsion u: 1 1 ; v: 0\noffset u: 0 1 ; v: -1\n";
        let lines = parse_generators(text, &c, p()).unwrap();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1].tag, GeneratorTag::Torsion);
        let set = generator_set(&c, &lines).unwrap();
        assert_eq!(set.rank(), 1);
        assert_eq!(set.torsion_elements().len(), 2);
        assert!(set.offset().is_some());
        for g in &lines {
            let again = parse_generators(&format_generator(g), &c, p()).unwrap();
            assert_eq!(&again[0], g);
        }
        let bad = parse_generators("u: 0 1 ; v: 1\nu: 0 1 ; v: 2\n", &c, p()).unwrap_err();
        assert!(matches!(bad, CliError::Parse { line: 2, .. }));
        assert!(matches!(
            parse_generators("u: 0 1 v: 1", &c, p()),
            Err(CliError::Parse { line: 1, .. })
        ));
        assert_eq!(parse_rational("-3/6"), Some(BigRational::new((-1).into(), 2.into())));
        assert_eq!(parse_rational("1/0"), None);
    }
}
