//! Versioned JSON documents. Every number of the exact backend is written as
//! a rational string, so documents round-trip losslessly.

use serde::{Deserialize, Serialize};

use crate::algebra::{Backend, KElement, MotionPolynomial, Scalar};
use crate::collision::{CollisionEvent, EventTime, LayerAssignment, RealRoot};
use crate::factor::FactorizationResult;
use crate::flip::LadderMeta;
use crate::io::text::{
    format_complex, format_cpoly, format_kelement, format_motion, parse_complex, parse_kelement, parse_motion,
};
use crate::linkage::{Joint, Linkage, LinkageKind, SynthesisMeta};
use crate::roots::Warning;
use crate::{Error, Result};

pub const LINKAGE_SCHEMA: &str = "linkforge.linkage/1";
pub const FACTORIZATION_SCHEMA: &str = "linkforge.factorization/1";
pub const COLLISIONS_SCHEMA: &str = "linkforge.collisions/1";

fn check_header<S: Scalar>(schema: &str, want: &str, backend: Backend) -> Result<()> {
    if schema != want {
        return Err(Error::Parse(format!("expected schema `{want}`, found `{schema}`")));
    }
    if backend != S::BACKEND {
        return Err(Error::BackendMismatch { expected: S::BACKEND.to_string(), found: backend.to_string() });
    }
    Ok(())
}

fn kstrs<S: Scalar>(ks: &[KElement<S>]) -> Vec<String> {
    ks.iter().map(format_kelement).collect()
}

fn parse_ks<S: Scalar>(ks: &[String]) -> Result<Vec<KElement<S>>> {
    ks.iter().map(|s| parse_kelement(s)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationDocument {
    pub schema: String,
    pub backend: Backend,
    pub motion: String,
    pub r: String,
    pub factors: Vec<String>,
    /// Primal parts of the factors, in order.
    pub permutation: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl FactorizationDocument {
    pub fn new<S: Scalar>(motion: &MotionPolynomial<S>, f: &FactorizationResult<S>) -> Self {
        FactorizationDocument {
            schema: FACTORIZATION_SCHEMA.into(),
            backend: S::BACKEND,
            motion: format_motion(motion),
            r: format_cpoly(&f.r),
            factors: kstrs(&f.factors),
            permutation: f.permutation.iter().map(format_complex).collect(),
            warnings: f
                .warnings
                .iter()
                .map(|w| match w {
                    Warning::BoundednessUncertain { re, im } => {
                        format!("root {re}{im:+}i of the primal part is nearly real")
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeJson {
    Exact { value: String },
    Isolated { lo: String, hi: String, approx: f64 },
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventJson {
    pub joint: usize,
    pub joint_links: [usize; 2],
    pub link: usize,
    pub segment: [usize; 2],
    pub t: TimeJson,
    pub s: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub persistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollisionReport {
    pub schema: String,
    pub backend: Backend,
    pub ordering: Vec<usize>,
    pub finite: usize,
    pub infinite: usize,
    pub events: Vec<EventJson>,
}

impl CollisionReport {
    pub fn new<S: Scalar>(ordering: &[usize], events: &[CollisionEvent<S>]) -> Self {
        let infinite = events.iter().filter(|e| e.t.is_infinite()).count();
        CollisionReport {
            schema: COLLISIONS_SCHEMA.into(),
            backend: S::BACKEND,
            ordering: ordering.to_vec(),
            finite: events.len() - infinite,
            infinite,
            events: events.iter().map(event_json).collect(),
        }
    }

    pub fn events<S: Scalar>(&self) -> Result<Vec<CollisionEvent<S>>> {
        check_header::<S>(&self.schema, COLLISIONS_SCHEMA, self.backend)?;
        self.events.iter().map(event_from_json).collect()
    }
}

fn event_json<S: Scalar>(e: &CollisionEvent<S>) -> EventJson {
    EventJson {
        joint: e.joint,
        joint_links: [e.joint_links.0, e.joint_links.1],
        link: e.link,
        segment: [e.segment.0, e.segment.1],
        t: match &e.t {
            EventTime::Infinity => TimeJson::Infinity,
            EventTime::Finite(RealRoot::Exact(v)) => TimeJson::Exact { value: v.fmt_lit() },
            EventTime::Finite(RealRoot::Isolated { lo, hi, approx }) => {
                TimeJson::Isolated { lo: lo.fmt_lit(), hi: hi.fmt_lit(), approx: *approx }
            }
        },
        s: e.s,
        persistent: e.persistent,
    }
}

fn lit<S: Scalar>(s: &str) -> Result<S> {
    S::parse_lit(s).ok_or_else(|| Error::Parse(format!("bad number `{s}`")))
}

fn event_from_json<S: Scalar>(e: &EventJson) -> Result<CollisionEvent<S>> {
    let t = match &e.t {
        TimeJson::Infinity => EventTime::Infinity,
        TimeJson::Exact { value } => EventTime::Finite(RealRoot::Exact(lit(value)?)),
        TimeJson::Isolated { lo, hi, approx } => {
            EventTime::Finite(RealRoot::Isolated { lo: lit(lo)?, hi: lit(hi)?, approx: *approx })
        }
    };
    Ok(CollisionEvent {
        joint: e.joint,
        joint_links: (e.joint_links[0], e.joint_links[1]),
        link: e.link,
        segment: (e.segment[0], e.segment[1]),
        t,
        s: e.s,
        persistent: e.persistent,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointJson {
    pub a: usize,
    pub b: usize,
    pub center: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderJson {
    pub l: Vec<String>,
    pub ktilde: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisJson {
    pub factors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<LadderJson>,
    pub base_link: usize,
    pub drawing_link: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkageDocument {
    pub schema: String,
    pub backend: Backend,
    pub kind: LinkageKind,
    /// The realized motion of the drawing link relative to the base.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motion: Option<String>,
    pub n_links: usize,
    pub joints: Vec<JointJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthesis: Option<SynthesisJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<LayerAssignment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collisions: Option<CollisionReport>,
}

impl LinkageDocument {
    pub fn new<S: Scalar>(l: &Linkage<S>, motion: Option<&MotionPolynomial<S>>) -> Self {
        LinkageDocument {
            schema: LINKAGE_SCHEMA.into(),
            backend: S::BACKEND,
            kind: l.kind,
            motion: motion.map(format_motion),
            n_links: l.n_links,
            joints: l
                .joints
                .iter()
                .map(|j| JointJson {
                    a: j.a,
                    b: j.b,
                    center: format_complex(&j.center),
                    factor: j.factor.as_ref().map(format_kelement),
                })
                .collect(),
            synthesis: l.meta.as_ref().map(|m| SynthesisJson {
                factors: kstrs(&m.factors),
                ladder: m.ladder.as_ref().map(|ld| LadderJson { l: kstrs(&ld.l), ktilde: kstrs(&ld.ktilde) }),
                base_link: m.base_link,
                drawing_link: m.drawing_link,
            }),
            layers: None,
            collisions: None,
        }
    }

    pub fn linkage<S: Scalar>(&self) -> Result<Linkage<S>> {
        check_header::<S>(&self.schema, LINKAGE_SCHEMA, self.backend)?;
        let joints = self
            .joints
            .iter()
            .map(|j| {
                Ok(Joint {
                    a: j.a,
                    b: j.b,
                    center: parse_complex(&j.center)?,
                    factor: j.factor.as_deref().map(parse_kelement).transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let meta = match &self.synthesis {
            None => None,
            Some(m) => Some(SynthesisMeta {
                factors: parse_ks(&m.factors)?,
                ladder: match &m.ladder {
                    None => None,
                    Some(ld) => Some(LadderMeta { l: parse_ks(&ld.l)?, ktilde: parse_ks(&ld.ktilde)? }),
                },
                base_link: m.base_link,
                drawing_link: m.drawing_link,
            }),
        };
        let l = Linkage { n_links: self.n_links, joints, kind: self.kind, meta };
        l.validate().map_err(|e| Error::Parse(format!("invalid linkage: {e}")))?;
        if let Some(m) = &l.meta {
            if m.base_link == 0 || m.base_link > l.n_links || m.drawing_link == 0 || m.drawing_link > l.n_links {
                return Err(Error::Parse("base or drawing link out of range".into()));
            }
        }
        Ok(l)
    }

    pub fn motion<S: Scalar>(&self) -> Result<Option<MotionPolynomial<S>>> {
        check_header::<S>(&self.schema, LINKAGE_SCHEMA, self.backend)?;
        self.motion.as_deref().map(parse_motion).transpose()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Q;
    use crate::collision::{assign_layers, detect_collisions};
    use crate::factor::drawing_motion;
    use crate::linkage::construct_strong;

    fn doc<S: Scalar>() -> (Linkage<S>, LinkageDocument) {
        let p = drawing_motion(&parse_motion::<S>("(t^2+1)+(i t-2)e").unwrap()).unwrap();
        let s = construct_strong(&p, None).unwrap();
        let mut d = LinkageDocument::new(&s.linkage, Some(&s.motion));
        d.layers = Some(assign_layers(&s.linkage).unwrap());
        let ord = [5, 1, 6, 2, 7, 8, 4, 3];
        d.collisions = Some(CollisionReport::new(&ord, &detect_collisions(&s.linkage, &ord).unwrap()));
        (s.linkage, d)
    }

    #[test]
    fn exact_round_trip() {
        let (l, d) = doc::<Q>();
        let back = LinkageDocument::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.linkage::<Q>().unwrap(), l);
        let again = LinkageDocument {
            layers: d.layers.clone(),
            collisions: d.collisions.clone(),
            ..LinkageDocument::new(&l, back.motion::<Q>().unwrap().as_ref())
        };
        assert_eq!(again.to_json(), d.to_json());
        let evs = d.collisions.as_ref().unwrap().events::<Q>().unwrap();
        assert_eq!(CollisionReport::new(&d.collisions.as_ref().unwrap().ordering, &evs), d.collisions.unwrap());
    }

    #[test]
    fn approx_round_trip() {
        let (l, d) = doc::<f64>();
        let back = LinkageDocument::from_json(&d.to_json()).unwrap();
        assert_eq!(back.linkage::<f64>().unwrap(), l);
    }

    #[test]
    fn backend_and_schema_are_checked() {
        let (_, d) = doc::<Q>();
        assert_eq!(
            d.linkage::<f64>().unwrap_err(),
            Error::BackendMismatch { expected: "approx".into(), found: "exact".into() }
        );
        let mut bad = d.clone();
        bad.schema = "linkforge.linkage/0".into();
        assert!(matches!(bad.linkage::<Q>(), Err(Error::Parse(_))));
        assert!(LinkageDocument::from_json("{").is_err());
        let mut bad = d;
        bad.joints[0].b = 99;
        assert!(matches!(bad.linkage::<Q>(), Err(Error::Parse(_))));
    }
}
