use serde::{Deserialize, Serialize};

use crate::algebra::{CPoly, MotionPolynomial, Scalar};
use crate::io::text::{parse_cpoly, parse_motion};
use crate::{Error, Result};

pub const INPUT_SCHEMA: &str = "linkforge.input/1";

/// What to realize: a rational curve (f/h, g/h) traced by a translation, or
/// a motion polynomial given directly.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveSpec<S: Scalar> {
    Curve { f: CPoly<S>, g: CPoly<S>, h: CPoly<S> },
    Motion(MotionPolynomial<S>),
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    f: String,
    g: String,
    h: String,
}

#[derive(Serialize, Deserialize)]
struct InputJson {
    schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    motion: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    curve: Option<CurveJson>,
}

impl<S: Scalar> CurveSpec<S> {
    /// Parses `{"schema": …, "motion": "…"}`, `{"schema": …, "curve":
    /// {"f": …, "g": …, "h": …}}`, `curve(f; g; h)`, or a bare motion
    /// polynomial such as `(t^2+1)+(i t-2)e`.
    pub fn parse(src: &str) -> Result<Self> {
        let src = src.trim();
        if src.starts_with('{') {
            let doc: InputJson = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
            if doc.schema != INPUT_SCHEMA {
                return Err(Error::Parse(format!("unknown schema `{}`", doc.schema)));
            }
            return match (doc.motion, doc.curve) {
                (Some(m), None) => Ok(CurveSpec::Motion(parse_motion(&m)?)),
                (None, Some(c)) => {
                    Ok(CurveSpec::Curve { f: parse_cpoly(&c.f)?, g: parse_cpoly(&c.g)?, h: parse_cpoly(&c.h)? })
                }
                _ => Err(Error::Parse("input needs exactly one of `motion` and `curve`".into())),
            };
        }
        if let Some(body) = src.strip_prefix("curve(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = body.split(';').collect();
            let [f, g, h] = parts[..] else {
                return Err(Error::Parse("curve(f; g; h) needs three polynomials".into()));
            };
            return Ok(CurveSpec::Curve { f: parse_cpoly(f)?, g: parse_cpoly(g)?, h: parse_cpoly(h)? });
        }
        Ok(CurveSpec::Motion(parse_motion(src)?))
    }

    /// The motion to factor. Curves become translations h + η(f + i g),
    /// normalized so that h is monic.
    pub fn motion(&self) -> Result<MotionPolynomial<S>> {
        match self {
            CurveSpec::Motion(m) => {
                if !m.is_monic() {
                    return Err(Error::Invalid("motion polynomial must be monic".into()));
                }
                Ok(m.clone())
            }
            CurveSpec::Curve { f, g, h } => {
                if !(f.is_real() && g.is_real() && h.is_real()) {
                    return Err(Error::Invalid("curve polynomials must be real".into()));
                }
                if h.deg() <= f.deg().max(g.deg()) {
                    return Err(Error::NotBounded("curve has deg h ≤ max(deg f, deg g)".into()));
                }
                let lc = h.lc();
                let inv = num_complex::Complex::new(S::one() / lc.re, S::zero());
                Ok(MotionPolynomial::translation(&f.scale(&inv), &g.scale(&inv), &h.scale(&inv)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Q;

    #[test]
    fn input_forms_agree() {
        let a = CurveSpec::<Q>::parse("curve(-2; 2t; 2t^2+2)").unwrap().motion().unwrap();
        let b =
            CurveSpec::<Q>::parse(r#"{"schema": "linkforge.input/1", "curve": {"f": "-1", "g": "t", "h": "t^2+1"}}"#)
                .unwrap()
                .motion()
                .unwrap();
        let c = CurveSpec::<Q>::parse("(t^2+1)+(-1+i t)e").unwrap().motion().unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(CurveSpec::<Q>::parse("curve(1; 2)"), Err(Error::Parse(_))));
        assert!(matches!(CurveSpec::<Q>::parse(r#"{"schema": "x/9", "motion": "t"}"#), Err(Error::Parse(_))));
        assert!(CurveSpec::<Q>::parse("curve(t^2; 1; t^2+1)").unwrap().motion().is_err());
        assert!(CurveSpec::<Q>::parse("2t+1").unwrap().motion().is_err());
    }
}
