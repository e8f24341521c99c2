//! Text names for the built-in families, e.g. `Bst:1/2:0` or `3.1.1:4:nonunital`.

use super::*;
use crate::error::Error;
use crate::exactnum::Mat;

/// Every family name accepted by [`parse_family`].
pub const FAMILY_NAMES: [&str; 16] = [
    "3.1.1", "3.1.2", "3.1.6", "3.2.2", "3.2.5", "3.2.9", "B", "C", "D", "Bst", "Cr", "Drst", "LR", "T3", "full",
    "scalar",
];

fn scalar_param(s: &str) -> Result<Q> {
    s.parse::<Q>().map_err(|e| Error::Parse(format!("parameter '{s}': {e}")))
}

fn size_param(s: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(n) if (1..=8).contains(&n) => Ok(n),
        _ => Err(Error::Parse(format!("matrix size '{s}' must be an integer in 1..=8"))),
    }
}

fn arity(name: &str, params: &[&str], allowed: &[usize]) -> Result<()> {
    if allowed.contains(&params.len()) {
        Ok(())
    } else {
        Err(Error::Parse(format!("family '{name}' takes {allowed:?} parameters, got {}", params.len())))
    }
}

/// Diagonal 0/1 projection from a pattern such as `110`.
fn diagonal_pattern(s: &str) -> Result<Mat> {
    let entries: Result<Vec<Q>> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(Q::zero()),
            '1' => Ok(Q::from_int(1)),
            _ => Err(Error::Parse(format!("LR pattern '{s}' must consist of 0 and 1"))),
        })
        .collect();
    let entries = entries?;
    if entries.is_empty() || entries.len() > 8 {
        return Err(Error::Parse(format!("LR pattern '{s}' must have length 1..=8")));
    }
    Ok(Mat::diag(&entries))
}

/// Projection-triple family at size `n` with `Q1`, `Q2` of rank one.
fn triple_family(name: &str, params: &[&str]) -> Result<Family> {
    arity(name, params, &[0, 1, 2])?;
    let n = params.first().map_or(Ok(3), |s| size_param(s))?;
    if n < 3 {
        return Err(Error::Parse(format!("family '{name}' needs n >= 3")));
    }
    let unital = match params.get(1) {
        None => true,
        Some(&"nonunital") => false,
        Some(other) => return Err(Error::Parse(format!("unknown flag '{other}'"))),
    };
    let t = ProjectionTriple::coordinate(n, 1, 1)?;
    let span = match name {
        "3.1.1" => family_3_1_1(&t, unital),
        "3.1.2" => family_3_1_2(&t, unital)?,
        _ => family_3_1_6(&t, unital)?,
    };
    Ok(Family::new(name, span, Some(t)))
}

/// Resolves `name[:param[:param...]]` to a family.
pub fn parse_family(spec: &str) -> Result<Family> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default();
    let params: Vec<&str> = parts.collect();
    let fixed = |span: Span| -> Result<Family> {
        arity(name, &params, &[0])?;
        Ok(Family::new(name, span, None))
    };
    match name {
        "3.1.1" | "3.1.2" | "3.1.6" => triple_family(name, &params),
        "3.2.2" | "3.2.5" | "3.2.9" => {
            arity(name, &params, &[0])?;
            coordinate_family(name)
        }
        "B" => fixed(canonical_b()),
        "C" => fixed(canonical_c()),
        "D" => fixed(canonical_d()),
        "T3" => fixed(t3()),
        "Bst" => {
            arity(name, &params, &[2])?;
            Ok(Family::new(name, b_st(&scalar_param(params[0])?, &scalar_param(params[1])?), None))
        }
        "Cr" => {
            arity(name, &params, &[1])?;
            Ok(Family::new(name, c_r(&scalar_param(params[0])?)?, None))
        }
        "Drst" => {
            arity(name, &params, &[3])?;
            let [r, s, t] = [params[0], params[1], params[2]].map(scalar_param);
            Ok(Family::new(name, d_rst(&r?, &s?, &t?), None))
        }
        "LR" => {
            arity(name, &params, &[2, 3])?;
            let p = diagonal_pattern(params[0])?;
            let q = diagonal_pattern(params[1])?;
            if p.rows() != q.rows() {
                return Err(Error::Parse("LR patterns must have equal length".into()));
            }
            let mut span = lr_algebra(&p, &q)?;
            match params.get(2) {
                None => {}
                Some(&"unital") => span = span.unitize()?,
                Some(other) => return Err(Error::Parse(format!("unknown flag '{other}'"))),
            }
            Ok(Family::new(name, span, None))
        }
        "full" | "scalar" => {
            arity(name, &params, &[0, 1])?;
            let n = params.first().map_or(Ok(3), |s| size_param(s))?;
            let span = if name == "full" { Span::full(n) } else { Span::scalars(n) };
            Ok(Family::new(name, span, None))
        }
        other => Err(Error::Parse(format!("unknown family '{other}'; expected one of {FAMILY_NAMES:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_name_resolves() {
        let samples = [
            "3.1.1", "3.1.2", "3.1.6", "3.2.2", "3.2.5", "3.2.9", "B", "C", "D", "Bst:1:0", "Cr:2", "Drst:0:0:0",
            "LR:110:011", "T3", "full", "scalar",
        ];
        for (name, spec) in FAMILY_NAMES.iter().zip(samples) {
            let f = parse_family(spec).unwrap();
            assert_eq!(&f.name, name);
            assert!(f.span.is_mult_closed().unwrap(), "{spec}");
        }
    }

    #[test]
    fn parameters_are_honored() {
        assert_eq!(parse_family("3.1.1:4").unwrap().span.n(), 4);
        assert_eq!(parse_family("3.1.2:3:nonunital").unwrap().span.dim(), 4);
        assert_eq!(parse_family("full:2").unwrap().span.dim(), 4);
        assert_eq!(parse_family("LR:110:011:unital").unwrap().span.dim(), 5);
        assert_eq!(parse_family("Cr:1/2+i").unwrap().span.dim(), 3);
        assert!(parse_family("3.2.9").unwrap().triple.is_some());
    }

    #[test]
    fn malformed_specs_are_errors() {
        for s in ["", "E", "Cr", "Cr:0", "Cr:x", "Bst:1", "3.1.1:2", "3.1.1:3:maybe", "LR:12:01", "LR:10:011", "full:0", "D:1"] {
            assert!(parse_family(s).is_err(), "{s}");
        }
    }
}
