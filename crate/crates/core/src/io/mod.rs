//! Text grammar, JSON documents, SVG rendering.

pub mod input;
pub mod json;
pub mod svg;
pub mod text;

pub use input::CurveSpec;
pub use json::{CollisionReport, FactorizationDocument, LinkageDocument};
pub use svg::{render_frame, render_trace, RenderOptions, ViewBox};
