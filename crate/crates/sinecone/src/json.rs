//! JSON forms of exact numbers and spectra.
//!
//! A [`QuadReal`] is written as `{"a": "p/q", "b": "p/q", "s": N}`. When
//! reading, a bare integer, a `"p/q"` string, or an object with `b`/`s`
//! omitted are also accepted.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};
use sinecone_core::exactreal::{QuadReal, Rational};
use sinecone_core::spectra::{GeometricSpectrum, Origin, SpectralLine, Spectrum};

/// Serde adapter for [`QuadReal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadJson(pub QuadReal);

impl Serialize for QuadJson {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("QuadReal", 3)?;
        st.serialize_field("a", &self.0.a().to_string())?;
        st.serialize_field("b", &self.0.b().to_string())?;
        // radicands that do not fit a JSON number exactly go as strings
        match u64::try_from(self.0.s().clone()) {
            Ok(s) if s < (1 << 53) => st.serialize_field("s", &s)?,
            _ => st.serialize_field("s", &self.0.s().to_string())?,
        }
        st.end()
    }
}

fn parse_rational<E: de::Error>(s: &str) -> Result<Rational, E> {
    let t = s.trim();
    Rational::from_str(t).map_err(|_| E::custom(format!("invalid rational {s:?}; expected \"p\" or \"p/q\"")))
}

fn rational_from_value<E: de::Error>(v: &serde_json::Value) -> Result<Rational, E> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(E::custom(format!(
            "invalid rational {other}; use an integer or a \"p/q\" string"
        ))),
    }
}

struct QuadVisitor;

impl<'de> Visitor<'de> for QuadVisitor {
    type Value = QuadJson;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "an integer, a \"p/q\" string, or {{\"a\", \"b\", \"s\"}}")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<QuadJson, E> {
        Ok(QuadJson(QuadReal::integer(v)))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<QuadJson, E> {
        parse_rational(&v.to_string()).map(|r| QuadJson(QuadReal::rational(r)))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<QuadJson, E> {
        parse_rational(v).map(|r| QuadJson(QuadReal::rational(r)))
    }

    fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<QuadJson, A::Error> {
        let (mut a, mut b, mut s) = (None, None, None);
        while let Some(key) = map.next_key::<String>()? {
            let value: serde_json::Value = map.next_value()?;
            let slot = match key.as_str() {
                "a" => &mut a,
                "b" => &mut b,
                "s" => &mut s,
                other => return Err(de::Error::unknown_field(other, &["a", "b", "s"])),
            };
            *slot = Some(rational_from_value::<A::Error>(&value)?);
        }
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        let q = QuadReal::new(a.unwrap_or(zero.clone()), b.unwrap_or(zero), s.unwrap_or(one))
            .map_err(de::Error::custom)?;
        Ok(QuadJson(q))
    }
}

impl<'de> Deserialize<'de> for QuadJson {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        de.deserialize_any(QuadVisitor)
    }
}

/// Parses a command-line number: an integer, `p/q`, or QuadReal JSON.
pub fn parse_quad(text: &str) -> Result<QuadReal, String> {
    let t = text.trim();
    if t.starts_with('{') {
        return serde_json::from_str::<QuadJson>(t)
            .map(|q| q.0)
            .map_err(|e| e.to_string());
    }
    Rational::from_str(t)
        .map(QuadReal::rational)
        .map_err(|_| format!("invalid number {text:?}; expected an integer, p/q, or QuadReal JSON"))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LineJson {
    pub value: QuadJson,
    pub mult: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CutoffsJson {
    pub spec0: QuadJson,
    #[serde(rename = "spec1D")]
    pub spec1d: QuadJson,
    #[serde(rename = "specE_TT")]
    pub spec_tt: QuadJson,
}

/// On-disk form of a [`GeometricSpectrum`]. `cutoff` applies to all three
/// spectra unless `cutoffs` gives them individually.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpectrumFile {
    pub n: u32,
    pub normalized: bool,
    pub spec0: Vec<LineJson>,
    #[serde(rename = "spec1D")]
    pub spec1d: Vec<LineJson>,
    #[serde(rename = "specE_TT")]
    pub spec_tt: Vec<LineJson>,
    pub cutoff: QuadJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoffs: Option<CutoffsJson>,
}

fn lines_json(s: &Spectrum) -> Vec<LineJson> {
    s.lines()
        .iter()
        .map(|l| LineJson {
            value: QuadJson(l.value.clone()),
            mult: l.multiplicity,
        })
        .collect()
}

fn spectrum_of(lines: &[LineJson], cutoff: &QuadReal) -> Spectrum {
    Spectrum::from_pairs(lines.iter().map(|l| (l.value.0.clone(), l.mult)), cutoff.clone())
}

impl SpectrumFile {
    pub fn from_geometric(gs: &GeometricSpectrum) -> Self {
        let c0 = gs.spec0.cutoff();
        let c1 = gs.spec1d.cutoff();
        let ct = gs.spec_tt.cutoff();
        let common = c0.min(c1).min(ct).clone();
        let uniform = c0 == c1 && c1 == ct;
        SpectrumFile {
            n: gs.n,
            normalized: gs.normalized,
            spec0: lines_json(&gs.spec0),
            spec1d: lines_json(&gs.spec1d),
            spec_tt: lines_json(&gs.spec_tt),
            cutoff: QuadJson(common),
            cutoffs: (!uniform).then(|| CutoffsJson {
                spec0: QuadJson(c0.clone()),
                spec1d: QuadJson(c1.clone()),
                spec_tt: QuadJson(ct.clone()),
            }),
        }
    }

    /// Builds the spectrum without validation; lines above a cutoff are
    /// dropped by the merge.
    pub fn to_geometric(&self) -> GeometricSpectrum {
        let (c0, c1, ct) = match &self.cutoffs {
            Some(c) => (c.spec0.0.clone(), c.spec1d.0.clone(), c.spec_tt.0.clone()),
            None => (self.cutoff.0.clone(), self.cutoff.0.clone(), self.cutoff.0.clone()),
        };
        GeometricSpectrum {
            n: self.n,
            normalized: self.normalized,
            spec0: spectrum_of(&self.spec0, &c0),
            spec1d: spectrum_of(&self.spec1d, &c1),
            spec_tt: spectrum_of(&self.spec_tt, &ct),
        }
    }

    /// Lines listed above the cutoff they are supposed to be complete to.
    pub fn lines_above_cutoff(&self) -> Vec<(&'static str, QuadReal)> {
        let gs_cut = |name: &'static str| match (&self.cutoffs, name) {
            (Some(c), "spec0") => c.spec0.0.clone(),
            (Some(c), "spec1D") => c.spec1d.0.clone(),
            (Some(c), _) => c.spec_tt.0.clone(),
            (None, _) => self.cutoff.0.clone(),
        };
        let mut out = Vec::new();
        for (name, lines) in [("spec0", &self.spec0), ("spec1D", &self.spec1d), ("specE_TT", &self.spec_tt)] {
            let cut = gs_cut(name);
            out.extend(lines.iter().filter(|l| l.value.0 > cut).map(|l| (name, l.value.0.clone())));
        }
        out
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct OriginJson {
    pub family: &'static str,
    pub index: usize,
    pub shift: u64,
    pub mult: u64,
}

impl From<&Origin> for OriginJson {
    fn from(o: &Origin) -> Self {
        OriginJson {
            family: o.family.as_str(),
            index: o.index,
            shift: o.shift,
            mult: o.multiplicity,
        }
    }
}

/// A line with its origins, for computed spectra.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DetailedLineJson {
    pub value: QuadJson,
    pub decimal: String,
    pub mult: u64,
    pub origins: Vec<OriginJson>,
}

impl From<&SpectralLine> for DetailedLineJson {
    fn from(l: &SpectralLine) -> Self {
        DetailedLineJson {
            value: QuadJson(l.value.clone()),
            decimal: l.value.to_decimal(6),
            mult: l.multiplicity,
            origins: l.origins.iter().map(OriginJson::from).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DetailedSpectrumJson {
    pub cutoff: QuadJson,
    pub lines: Vec<DetailedLineJson>,
}

impl From<&Spectrum> for DetailedSpectrumJson {
    fn from(s: &Spectrum) -> Self {
        DetailedSpectrumJson {
            cutoff: QuadJson(s.cutoff().clone()),
            lines: s.lines().iter().map(DetailedLineJson::from).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sinecone_core::exactreal::{int, rat};

    #[test]
    fn quad_round_trip() {
        let q = QuadReal::new(rat(45, 2), rat(-3, 2), int(17)).unwrap();
        let text = serde_json::to_string(&QuadJson(q.clone())).unwrap();
        assert_eq!(text, r#"{"a":"45/2","b":"-3/2","s":17}"#);
        assert_eq!(serde_json::from_str::<QuadJson>(&text).unwrap().0, q);
    }

    #[test]
    fn shorthand_forms() {
        assert_eq!(parse_quad("-16").unwrap(), QuadReal::integer(-16));
        assert_eq!(parse_quad("3/6").unwrap(), QuadReal::rational(rat(1, 2)));
        assert_eq!(serde_json::from_str::<QuadJson>("7").unwrap().0, QuadReal::integer(7));
        assert_eq!(
            serde_json::from_str::<QuadJson>(r#"{"b": 2, "s": 8}"#).unwrap().0,
            QuadReal::new(rat(0, 1), rat(4, 1), int(2)).unwrap()
        );
        assert!(parse_quad("{\"a\": 1, \"s\": -3, \"b\": 1}").is_err());
        assert!(parse_quad("x").is_err());
    }
}
