//! Browser bindings: synthesize a linkage from a curve, pose it at any t,
//! count collisions for a stacking order. Uses the float backend so any
//! bounded input works.
//!
//! Every exported method has a plain-Rust twin returning `Result<_, String>`
//! so the logic is testable off the browser.

use linkforge::collision::{assign_layers, collision_table, default_ordering, CollisionTable};
use linkforge::factor::drawing_motion;
use linkforge::io::svg::{render_frame, render_trace, view_box, RenderOptions, ViewBox};
use linkforge::io::CurveSpec;
use linkforge::linkage::{construct_strong, construct_weak, Linkage};
use linkforge::Param;
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Demo {
    linkage: Linkage<f64>,
    view: ViewBox,
    opts: RenderOptions,
    table: Option<CollisionTable<f64>>,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

impl Demo {
    pub fn try_new(input: &str, strong: bool, drawing: bool) -> Result<Demo, String> {
        let mut p = CurveSpec::<f64>::parse(input).and_then(|c| c.motion()).map_err(err)?;
        if drawing {
            p = drawing_motion(&p).map_err(err)?;
        }
        let syn = if strong { construct_strong(&p, None) } else { construct_weak(&p) }.map_err(err)?;
        let linkage = syn.linkage;
        let view = view_box(&linkage).map_err(err)?;
        let opts = RenderOptions { layers: assign_layers(&linkage).ok(), ..RenderOptions::default() };
        Ok(Demo { linkage, view, opts, table: None })
    }

    /// Frame at t = tan(θ/2); θ = ±π is t = ∞.
    pub fn try_frame(&self, theta: f64, trace: bool) -> Result<String, String> {
        let t = if (theta.abs() - std::f64::consts::PI).abs() < 1e-12 {
            Param::Infinity
        } else {
            Param::Finite((theta / 2.0).tan())
        };
        let opts = RenderOptions { trace, ..self.opts.clone() };
        render_frame(&self.linkage, &t, &opts, &self.view).map_err(err)
    }

    pub fn try_trace(&self) -> Result<String, String> {
        render_trace(&self.linkage, &self.opts, &self.view).map_err(err)
    }

    /// "finite infinite" event counts for a comma- or space-separated order.
    pub fn try_collisions(&mut self, ordering: &str) -> Result<String, String> {
        let ord = ordering
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<usize>().map_err(|_| format!("bad link number `{s}`")))
            .collect::<Result<Vec<_>, _>>()?;
        if self.table.is_none() {
            self.table = Some(collision_table(&self.linkage).map_err(err)?);
        }
        let (f, i) = self.table.as_ref().expect("just built").count(&ord).map_err(err)?;
        Ok(format!("{f} {i}"))
    }
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(input: &str, strong: bool, drawing: bool) -> Result<Demo, JsError> {
        Demo::try_new(input, strong, drawing).map_err(|e| JsError::new(&e))
    }

    pub fn links(&self) -> usize {
        self.linkage.n_links
    }

    pub fn joints(&self) -> usize {
        self.linkage.joints.len()
    }

    #[wasm_bindgen(js_name = defaultOrdering)]
    pub fn default_ordering(&self) -> String {
        default_ordering(&self.linkage).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn frame(&self, theta: f64, trace: bool) -> Result<String, JsError> {
        self.try_frame(theta, trace).map_err(|e| JsError::new(&e))
    }

    pub fn trace(&self) -> Result<String, JsError> {
        self.try_trace().map_err(|e| JsError::new(&e))
    }

    pub fn collisions(&mut self, ordering: &str) -> Result<String, JsError> {
        self.try_collisions(ordering).map_err(|e| JsError::new(&e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ELLIPSE: &str = "(t^2+1)+(i t-2)e";

    #[test]
    fn ellipse_demo() {
        let mut d = Demo::try_new(ELLIPSE, true, true).unwrap();
        assert_eq!((d.links(), d.joints()), (8, 10));
        let svg = d.try_frame(1.0, true).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("class=\"pen\""));
        assert!(d.try_frame(std::f64::consts::PI, false).unwrap().contains("t = inf"));
        assert!(d.try_trace().unwrap().contains("polyline"));
        let counts = d.try_collisions("5,1,6,2,7,8,4,3").unwrap();
        assert_eq!(counts, "0 2");
        assert!(d.try_collisions("1 2 3").is_err());
    }

    #[test]
    fn weak_and_errors() {
        let d = Demo::try_new("curve(-1; t; t^2+1)", false, false).unwrap();
        assert_eq!(d.links(), 3);
        assert!(Demo::try_new("curve(1; t; t^2-1)", true, false).is_err());
        assert!(Demo::try_new("(t^2", true, false).is_err());
    }
}
