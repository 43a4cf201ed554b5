//! SVG frames of linkage poses and traced curves.
//!
//! Output is deterministic: the view box depends only on the linkage (the
//! union of all joint paths, padded 10%), numbers carry 12 significant
//! digits, and y points up (SVG y = −y).

use std::fmt::Write as _;

use crate::algebra::{cf, Param, Scalar};
use crate::collision::{LayerAssignment, LinkLayer};
use crate::linkage::Linkage;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ViewBox {
    pub min_x: f64,
    pub min_y: f64,
    pub width: f64,
    pub height: f64,
}

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Draw the pen's curve under the frame.
    pub trace: bool,
    /// Samples of the full curve; t = tan(θ/2) over a uniform θ grid.
    pub samples: usize,
    /// Lower layers are drawn first and darker.
    pub layers: Option<LayerAssignment>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { trace: false, samples: 720, layers: None }
    }
}

/// 12 significant digits, shortest form.
pub fn fmt_num(v: f64) -> String {
    let r: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

fn theta_grid(samples: usize) -> impl Iterator<Item = f64> {
    let n = samples.max(4);
    // θ ∈ (−π, π]; θ = π is t = ∞
    (1..=n).map(move |i| {
        let th = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
        if i == n {
            f64::INFINITY
        } else {
            (th / 2.0).tan()
        }
    })
}

/// Pen positions over one period of the parametrization, closing at t = ∞.
pub fn trace_points<S: Scalar>(l: &Linkage<S>, samples: usize) -> Result<Vec<(f64, f64)>> {
    let tr = l.pen_trajectory()?;
    Ok(theta_grid(samples).filter_map(|t| tr.eval_f64(t)).collect())
}

pub fn view_box<S: Scalar>(l: &Linkage<S>) -> Result<ViewBox> {
    let mut pts = Vec::new();
    for e in 0..l.joints.len() {
        let tr = l.joint_trajectory(e)?;
        pts.extend(theta_grid(360).filter_map(|t| tr.eval_f64(t)));
    }
    if l.meta.is_some() {
        pts.extend(trace_points(l, 360)?);
    }
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts.into_iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(-y);
        y1 = y1.max(-y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    let pad = 0.1 * (x1 - x0).max(y1 - y0).max(1e-9);
    Ok(ViewBox { min_x: x0 - pad, min_y: y0 - pad, width: x1 - x0 + 2.0 * pad, height: y1 - y0 + 2.0 * pad })
}

fn header(vb: &ViewBox) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"800\" height=\"{}\">\n",
        fmt_num(vb.min_x),
        fmt_num(vb.min_y),
        fmt_num(vb.width),
        fmt_num(vb.height),
        fmt_num((800.0 * vb.height / vb.width).round()),
    )
}

fn polyline(out: &mut String, pts: &[(f64, f64)], stroke: f64) {
    let mut d = String::new();
    for (x, y) in pts {
        let _ = write!(d, "{},{} ", fmt_num(*x), fmt_num(-*y));
    }
    let _ = writeln!(
        out,
        "<polyline class=\"trace\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"{}\" points=\"{}\"/>",
        fmt_num(stroke),
        d.trim_end()
    );
}

/// Only the traced curve.
pub fn render_trace<S: Scalar>(l: &Linkage<S>, opts: &RenderOptions, vb: &ViewBox) -> Result<String> {
    let mut out = header(vb);
    polyline(&mut out, &trace_points(l, opts.samples)?, vb.width / 400.0);
    out.push_str("</svg>\n");
    Ok(out)
}

fn link_key(layers: Option<&LayerAssignment>, link: usize) -> (usize, Option<f64>) {
    match layers.and_then(|a| a.links.get(link - 1).map(|x| (x, a.n_layers))) {
        Some((x, n)) => {
            let top = match *x {
                LinkLayer::F(a) => a,
                LinkLayer::U(_, b) | LinkLayer::Z(_, b) => b,
            };
            (top, Some(top as f64 / (n.max(2) - 1) as f64))
        }
        None => (link, None),
    }
}

/// One pose at parameter t.
pub fn render_frame<S: Scalar>(l: &Linkage<S>, t: &Param<S>, opts: &RenderOptions, vb: &ViewBox) -> Result<String> {
    let pose = l.pose_at(t)?;
    let pos: Vec<(f64, f64)> = pose
        .joints
        .iter()
        .map(|p| {
            let z = cf(p);
            (z.re, z.im)
        })
        .collect();
    let stroke = vb.width / 250.0;
    let mut out = header(vb);
    let _ = writeln!(
        out,
        "<desc>t = {}</desc>",
        match t {
            Param::Finite(v) => v.fmt_lit(),
            Param::Infinity => "inf".into(),
        }
    );
    if opts.trace && l.meta.is_some() {
        polyline(&mut out, &trace_points(l, opts.samples)?, stroke / 2.0);
    }
    let mut order: Vec<usize> = (1..=l.n_links).collect();
    order.sort_by_key(|&k| link_key(opts.layers.as_ref(), k).0);
    let base = l.base_link();
    for k in order {
        let joints = l.incident(k);
        let color = match link_key(opts.layers.as_ref(), k).1 {
            Some(b) => {
                let g = (40.0 + 180.0 * b).round() as u8;
                format!("#{:02x}{:02x}{:02x}", g / 3, g / 2, g)
            }
            None => "#2c5d8f".into(),
        };
        let mut d = String::new();
        for &e in &joints {
            let _ = write!(d, "{},{} ", fmt_num(pos[e].0), fmt_num(-pos[e].1));
        }
        let tag = if joints.len() > 2 { "polygon" } else { "polyline" };
        let fill = if joints.len() > 2 { format!("{color}55") } else { "none".into() };
        let _ = writeln!(
            out,
            "<{tag} class=\"link{}\" data-link=\"{k}\" fill=\"{fill}\" stroke=\"{color}\" stroke-width=\"{}\" stroke-linejoin=\"round\" points=\"{}\"/>",
            if k == base { " base" } else { "" },
            fmt_num(if k == base { stroke * 1.8 } else { stroke }),
            d.trim_end()
        );
    }
    for (e, p) in pos.iter().enumerate() {
        let _ = writeln!(
            out,
            "<circle class=\"joint\" data-joint=\"{e}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#fff\" stroke=\"#222\" stroke-width=\"{}\"/>",
            fmt_num(p.0),
            fmt_num(-p.1),
            fmt_num(stroke * 1.5),
            fmt_num(stroke / 2.0)
        );
    }
    if let Some(m) = &l.meta {
        let pen = cf(&pose.links[m.drawing_link - 1].act(&num_complex::Complex::new(S::zero(), S::zero()))?);
        // the pen is rigidly attached to the drawing link
        for e in l.incident(m.drawing_link) {
            let _ = writeln!(
                out,
                "<line class=\"pen-arm\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#c0392b\" stroke-width=\"{}\" stroke-dasharray=\"{}\"/>",
                fmt_num(pen.re),
                fmt_num(-pen.im),
                fmt_num(pos[e].0),
                fmt_num(-pos[e].1),
                fmt_num(stroke / 2.0),
                fmt_num(stroke * 2.0)
            );
        }
        let _ = writeln!(
            out,
            "<circle class=\"pen\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#c0392b\"/>",
            fmt_num(pen.re),
            fmt_num(-pen.im),
            fmt_num(stroke * 2.0)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Q;
    use crate::factor::drawing_motion;
    use crate::io::text::parse_motion;
    use crate::linkage::construct_strong;

    fn ellipse() -> Linkage<Q> {
        let p = drawing_motion(&parse_motion::<Q>("(t^2+1)+(i t-2)e").unwrap()).unwrap();
        construct_strong(&p, None).unwrap().linkage
    }

    #[test]
    fn numbers() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333");
    }

    #[test]
    fn frame_joints_match_pose() {
        let l = ellipse();
        let vb = view_box(&l).unwrap();
        let t = Param::Finite(Q::from_i64(2));
        let svg = render_frame(&l, &t, &RenderOptions::default(), &vb).unwrap();
        let pose = l.pose_at(&t).unwrap();
        for (e, p) in pose.joints.iter().enumerate() {
            let z = cf(p);
            let needle = format!("data-joint=\"{e}\" cx=\"{}\" cy=\"{}\"", fmt_num(z.re), fmt_num(-z.im));
            assert!(svg.contains(&needle), "{needle}");
        }
        assert_eq!(svg, render_frame(&l, &t, &RenderOptions::default(), &vb).unwrap());
    }

    #[test]
    fn trace_is_the_ellipse() {
        let l = ellipse();
        let pts = trace_points(&l, 720).unwrap();
        assert_eq!(pts.len(), 720);
        let worst = pts.iter().map(|(x, y)| ((x + 1.0).powi(2) + 4.0 * y * y - 1.0).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-12, "{worst}");
    }
}
