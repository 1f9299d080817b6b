//! Text form of field specifications.
//!
//! ```text
//! field   := family | "prod(" field ("," field)+ ")" | "compose(" outer "," field ")"
//!          | "radial(P=[c0,c1,...], p=<poly>)" | <poly in x, y>
//! family  := ("cassini" | "anti") "(" ["alpha="] rational ")"
//!          | ("cassini" | "anti") "(a=" rational ")"
//! outer   := "exp" | "pow:" int | "poly:" <poly in t> | "affine:" rational ":" rational
//! ```
//!
//! `alpha` is the exact parameter a²; `a=` takes a itself.

use num::{BigRational, ToPrimitive};

use crate::error::{Error, Result};
use crate::field::{OuterMap, ScalarField};
use crate::poly::{parse_univariate, BivariatePoly, FamilySpec};

#[derive(Debug, Clone)]
pub struct ParsedField {
    pub text: String,
    pub field: ScalarField,
    /// Present when the expression is a member of the radial family (or a
    /// product of members).
    pub family: Option<FamilySpec>,
    pub exact: Option<BivariatePoly>,
}

impl ParsedField {
    /// The Cassini parameter a when every factor is cassini/anti with one shared α.
    pub fn family_scale(&self) -> Option<f64> {
        fn alpha(spec: &FamilySpec) -> Option<BigRational> {
            match spec {
                FamilySpec::Cassini(a) | FamilySpec::AntiCassini(a) => Some(a.clone()),
                FamilySpec::Product(fs) => {
                    let mut it = fs.iter().map(alpha);
                    let first = it.next()??;
                    it.all(|a| a.as_ref() == Some(&first)).then_some(first)
                }
                FamilySpec::RadialPlus(_) => None,
            }
        }
        alpha(self.family.as_ref()?)?.to_f64().map(f64::sqrt)
    }
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn shift(e: Error, offset: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
        other => other,
    }
}

/// Trimmed slice with its byte offset in the original text.
fn trim_at(s: &str, offset: usize) -> (&str, usize) {
    let lead = s.len() - s.trim_start().len();
    (s.trim(), offset + lead)
}

/// Splits at top-level commas, tracking byte offsets.
fn split_args(s: &str, offset: usize) -> Result<Vec<(&str, usize)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth < 0 {
                    return Err(err(offset + i, "unbalanced closing bracket"));
                }
            }
            ',' if depth == 0 => {
                out.push(trim_at(&s[start..i], offset + start));
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(err(offset + s.len(), "unbalanced opening bracket"));
    }
    out.push(trim_at(&s[start..], offset + start));
    Ok(out)
}

fn parse_rational(s: &str, offset: usize) -> Result<BigRational> {
    let coeffs = parse_univariate(s, 't').map_err(|e| shift(e.into(), offset))?;
    if coeffs.len() != 1 {
        return Err(err(offset, format!("expected a number, found '{s}'")));
    }
    Ok(coeffs.into_iter().next().expect("one coefficient"))
}

fn parse_family_arg(args: &[(&str, usize)], at: usize) -> Result<BigRational> {
    let [(arg, off)] = args else {
        return Err(err(at, "expected one parameter"));
    };
    if let Some(v) = arg.strip_prefix("alpha") {
        let v = v.trim_start().strip_prefix('=').ok_or_else(|| err(off + 5, "expected '='"))?;
        let pos = off + (arg.len() - v.len());
        let (v, pos) = trim_at(v, pos);
        return parse_rational(v, pos);
    }
    if let Some(v) = arg.strip_prefix('a') {
        let v = v.trim_start().strip_prefix('=').ok_or_else(|| err(off + 1, "expected '=' after 'a'"))?;
        let pos = off + (arg.len() - v.len());
        let (v, pos) = trim_at(v, pos);
        let a = parse_rational(v, pos)?;
        return Ok(&a * &a);
    }
    parse_rational(arg, *off)
}

fn parse_outer(s: &str, offset: usize) -> Result<OuterMap> {
    if s == "exp" {
        return Ok(OuterMap::Exp);
    }
    if let Some(rest) = s.strip_prefix("pow:") {
        let k: i32 = rest.trim().parse().map_err(|_| err(offset + 4, format!("invalid exponent '{rest}'")))?;
        return Ok(OuterMap::power(k));
    }
    if let Some(rest) = s.strip_prefix("poly:") {
        let coeffs = parse_univariate(rest, 't').map_err(|e| shift(e.into(), offset + 5))?;
        return Ok(OuterMap::polynomial(coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()));
    }
    if let Some(rest) = s.strip_prefix("affine:") {
        let (m, b) = rest.split_once(':').ok_or_else(|| err(offset + 7, "expected affine:<slope>:<offset>"))?;
        let slope = parse_rational(m.trim(), offset + 7)?;
        let shift_v = parse_rational(b.trim(), offset + 8 + m.len())?;
        return Ok(OuterMap::affine(slope.to_f64().unwrap_or(f64::NAN), shift_v.to_f64().unwrap_or(f64::NAN)));
    }
    Err(err(offset, format!("unknown outer map '{s}' (expected exp, pow:k, poly:<t>, affine:m:b)")))
}

fn parse_radial(args: &[(&str, usize)], at: usize) -> Result<FamilySpec> {
    let mut radial = None;
    let mut rest = None;
    for &(arg, off) in args {
        if let Some(v) = arg.strip_prefix("P=") {
            let (v, voff) = trim_at(v, off + 2);
            let inner = v
                .strip_prefix('[')
                .and_then(|v| v.strip_suffix(']'))
                .ok_or_else(|| err(voff, "expected P=[c0,c1,...]"))?;
            let coeffs = split_args(inner, voff + 1)?
                .into_iter()
                .map(|(c, o)| parse_rational(c, o))
                .collect::<Result<Vec<_>>>()?;
            radial = Some(coeffs);
        } else if let Some(v) = arg.strip_prefix("p=") {
            let (v, voff) = trim_at(v, off + 2);
            rest = Some(v.parse::<BivariatePoly>().map_err(|e| shift(e.into(), voff))?);
        } else {
            return Err(err(off, "expected P=[...] or p=<poly>"));
        }
    }
    match (radial, rest) {
        (Some(r), Some(p)) => Ok(FamilySpec::radial_plus(r, p)),
        _ => Err(err(at, "radial(...) needs both P=[...] and p=<poly>")),
    }
}

fn from_family(text: &str, spec: FamilySpec) -> Result<ParsedField> {
    let poly = spec.build()?;
    Ok(ParsedField {
        text: text.to_string(),
        field: ScalarField::named_family(spec.label(), poly.clone()),
        family: Some(spec),
        exact: Some(poly),
    })
}

fn parse_at(s: &str, offset: usize) -> Result<ParsedField> {
    let (s, offset) = trim_at(s, offset);
    if s.is_empty() {
        return Err(err(offset, "empty expression"));
    }
    let head_len = s.find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(s.len());
    let head = &s[..head_len];
    let call = s[head_len..].trim_start().starts_with('(');
    let known = matches!(head, "cassini" | "anti" | "prod" | "compose" | "radial");
    if !(call && known) {
        if call {
            return Err(err(offset, format!("unknown function '{head}'")));
        }
        let poly: BivariatePoly = s.parse().map_err(|e: crate::poly::ParsePolyError| shift(e.into(), offset))?;
        return Ok(ParsedField {
            text: s.to_string(),
            field: ScalarField::polynomial(poly.clone()),
            family: None,
            exact: Some(poly),
        });
    }
    let open = s.find('(').expect("call");
    if !s.ends_with(')') {
        return Err(err(offset + s.len(), "expected ')' at end"));
    }
    let inner_off = offset + open + 1;
    let args = split_args(&s[open + 1..s.len() - 1], inner_off)?;
    match head {
        "cassini" => from_family(s, FamilySpec::cassini(parse_family_arg(&args, inner_off)?)),
        "anti" => from_family(s, FamilySpec::anti_cassini(parse_family_arg(&args, inner_off)?)),
        "radial" => from_family(s, parse_radial(&args, inner_off)?),
        "prod" => {
            if args.len() < 2 {
                return Err(err(inner_off, "prod(...) needs at least two factors"));
            }
            let parts = args.iter().map(|&(a, o)| parse_at(a, o)).collect::<Result<Vec<_>>>()?;
            if parts.iter().all(|p| p.family.is_some()) {
                let spec = FamilySpec::product(parts.into_iter().map(|p| p.family.expect("checked")).collect());
                return from_family(s, spec);
            }
            let mut field = parts[0].field.clone();
            let mut exact = parts[0].exact.clone();
            for p in &parts[1..] {
                exact = match (exact, &p.exact) {
                    (Some(a), Some(b)) => Some(&a * b),
                    _ => None,
                };
                field = ScalarField::product(&field, &p.field)?;
            }
            if let Some(poly) = &exact {
                field = ScalarField::named_family(s, poly.clone());
            }
            Ok(ParsedField { text: s.to_string(), field, family: None, exact })
        }
        "compose" => {
            let [(phi, po), (inner, io)] = args[..] else {
                return Err(err(inner_off, "compose(...) takes an outer map and a field"));
            };
            let phi = parse_outer(phi, po)?;
            let inner = parse_at(inner, io)?;
            Ok(ParsedField {
                text: s.to_string(),
                field: ScalarField::compose(phi, &inner.field),
                family: None,
                exact: None,
            })
        }
        _ => unreachable!(),
    }
}

/// Parses a field specification; errors carry a byte offset into `text`.
pub fn parse_field(text: &str) -> Result<ParsedField> {
    parse_at(text, 0)
}

/// `text` with a caret line under the byte offset `pos`.
pub fn caret_message(text: &str, pos: usize, msg: &str) -> String {
    let col = text.get(..pos.min(text.len())).map_or(0, |p| p.chars().count());
    format!("{text}\n{}^ {msg}", " ".repeat(col))
}
