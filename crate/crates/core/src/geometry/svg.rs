//! Static SVG figures: one model unit is 100 px, the y axis points up, and
//! the substrate `x2 = 0` is drawn across the full width.

use std::fmt::Write;

use crate::scalar::{to_f64, Scalar};
use crate::vec2::Vec2;

const PX_PER_UNIT: f64 = 100.0;
const MARGIN: f64 = 0.25;

/// Style class of a drawn shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeClass {
    Wulff,
    Winterbottom,
    Candidate,
}

impl ShapeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Wulff => "wulff",
            Self::Winterbottom => "winterbottom",
            Self::Candidate => "candidate",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SvgScene {
    shapes: Vec<(ShapeClass, Vec<(f64, f64)>)>,
}

impl SvgScene {
    pub fn new() -> Self {
        Self::default()
    }

    /// Shapes are painted in insertion order.
    pub fn add<T: Scalar>(&mut self, class: ShapeClass, vertices: &[Vec2<T>]) -> &mut Self {
        self.shapes.push((
            class,
            vertices.iter().map(|v| (to_f64(v.x), to_f64(v.y))).collect(),
        ));
        self
    }

    pub fn render(&self) -> String {
        let (mut x0, mut x1, mut y0, mut y1) = (-1.0f64, 1.0f64, 0.0f64, 1.0f64);
        for (_, pts) in &self.shapes {
            for &(x, y) in pts {
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
        let (x0, x1, y0, y1) = (x0 - MARGIN, x1 + MARGIN, y0 - MARGIN, y1 + MARGIN);
        let px = |v: f64| v * PX_PER_UNIT;
        let (w, h) = (px(x1 - x0), px(y1 - y0));
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.3} {:.3} {:.3} {:.3}" width="{:.0}" height="{:.0}">"#,
            px(x0),
            px(-y1),
            w,
            h,
            w.ceil(),
            h.ceil()
        );
        s.push_str(
            "<style>\
.substrate{stroke:#444;stroke-width:2}\
.wulff{fill:#9ab;fill-opacity:0.25;stroke:#678;stroke-dasharray:6 4}\
.winterbottom{fill:#e95;fill-opacity:0.6;stroke:#a51}\
.candidate{fill:none;stroke:#26c;stroke-width:1.5}\
</style>\n",
        );
        let _ = writeln!(
            s,
            r#"<line class="substrate" x1="{:.3}" y1="0.000" x2="{:.3}" y2="0.000"/>"#,
            px(x0),
            px(x1)
        );
        for (class, pts) in &self.shapes {
            let mut d = String::new();
            for (k, &(x, y)) in pts.iter().enumerate() {
                let _ = write!(d, "{}{:.3} {:.3} ", if k == 0 { "M" } else { "L" }, px(x), px(-y) + 0.0);
            }
            d.push('Z');
            let _ = writeln!(s, r#"<path class="{}" d="{}"/>"#, class.as_str(), d);
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_flipped_coordinates() {
        let mut scene = SvgScene::new();
        scene.add(
            ShapeClass::Winterbottom,
            &[
                Vec2::new(-1.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(1.0, 0.5),
                Vec2::new(-1.0, 0.5),
            ],
        );
        let svg = scene.render();
        assert!(svg.contains(r#"class="winterbottom""#));
        assert!(svg.contains("L100.000 -50.000"));
        assert!(svg.contains(r#"class="substrate""#));
        assert_eq!(svg, scene.render());
    }
}
