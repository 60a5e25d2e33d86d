//! Self-contained SVG figures of curve snapshots.

use csf_core::asymptotics::cs_rescale;
use csf_core::Snapshot64;

use crate::HarnessError;

/// What a figure shows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PlotMode {
    /// Curves in their own coordinates.
    Cartesian,
    /// Each curve normalized to the square, with the reference graphs
    /// `y = +-xi^(n-1)` overlaid.
    CsRescaled { n: usize },
}

const VIEW: f64 = 640.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2",
];

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn to_svg(&self, x: f64, y: f64) -> (f64, f64) {
        let w = self.x_max - self.x_min;
        let h = self.y_max - self.y_min;
        let scale = (VIEW - 2.0 * MARGIN) / w.max(h);
        let cx = 0.5 * (self.x_min + self.x_max);
        let cy = 0.5 * (self.y_min + self.y_max);
        // y axis points up in the data, down in SVG
        (
            VIEW / 2.0 + (x - cx) * scale,
            VIEW / 2.0 - (y - cy) * scale,
        )
    }
}

fn polyline(frame: &Frame, points: &[(f64, f64)], style: &str) -> String {
    let mut attr = String::with_capacity(points.len() * 16);
    for (i, &(x, y)) in points.iter().enumerate() {
        if i > 0 {
            attr.push(' ');
        }
        let (sx, sy) = frame.to_svg(x, y);
        attr.push_str(&format!("{sx:.3},{sy:.3}"));
    }
    format!("  <polyline fill=\"none\" {style} points=\"{attr}\"/>\n")
}

/// Renders the snapshots into one standalone SVG document.
pub fn render_plot(snapshots: &[&Snapshot64], mode: PlotMode) -> Result<String, HarnessError> {
    if snapshots.is_empty() {
        return Err(HarnessError::Config("nothing to plot".into()));
    }

    let mut curves: Vec<Vec<(f64, f64)>> = Vec::with_capacity(snapshots.len());
    match mode {
        PlotMode::Cartesian => {
            for s in snapshots {
                let mut pts: Vec<(f64, f64)> =
                    s.curve.vertices().iter().map(|p| (p.x, p.y)).collect();
                pts.push(pts[0]); // close the curve
                curves.push(pts);
            }
        }
        PlotMode::CsRescaled { .. } => {
            for s in snapshots {
                let rescaled = cs_rescale(&s.curve)?;
                let mut pts: Vec<(f64, f64)> =
                    rescaled.vertices().iter().map(|p| (p.x, p.y)).collect();
                pts.push(pts[0]);
                curves.push(pts);
            }
        }
    }

    let frame = match mode {
        PlotMode::Cartesian => {
            let mut f = Frame {
                x_min: f64::INFINITY,
                x_max: f64::NEG_INFINITY,
                y_min: f64::INFINITY,
                y_max: f64::NEG_INFINITY,
            };
            for pts in &curves {
                for &(x, y) in pts {
                    f.x_min = f.x_min.min(x);
                    f.x_max = f.x_max.max(x);
                    f.y_min = f.y_min.min(y);
                    f.y_max = f.y_max.max(y);
                }
            }
            f
        }
        PlotMode::CsRescaled { .. } => Frame {
            x_min: -1.0,
            x_max: 1.0,
            y_min: -1.0,
            y_max: 1.0,
        },
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{VIEW}\" height=\"{VIEW}\" \
         viewBox=\"0 0 {VIEW} {VIEW}\">\n"
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    if let PlotMode::CsRescaled { n } = mode {
        // the square frame and the reference graphs y = +-xi^(n-1)
        let corners = [
            (-1.0, -1.0),
            (1.0, -1.0),
            (1.0, 1.0),
            (-1.0, 1.0),
            (-1.0, -1.0),
        ];
        svg.push_str(&polyline(
            &frame,
            &corners,
            "stroke=\"#888888\" stroke-width=\"1\"",
        ));
        let m = 257;
        let mut upper = Vec::with_capacity(m);
        let mut lower = Vec::with_capacity(m);
        for j in 0..m {
            let xi = -1.0 + 2.0 * j as f64 / (m - 1) as f64;
            let y = xi.powi((n as i32) - 1);
            upper.push((xi, y));
            lower.push((xi, -y));
        }
        let style = "stroke=\"#1f77b4\" stroke-width=\"1.5\" stroke-dasharray=\"6,3\"";
        svg.push_str(&polyline(&frame, &upper, style));
        svg.push_str(&polyline(&frame, &lower, style));
    }

    for (i, pts) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let style = format!("stroke=\"{color}\" stroke-width=\"1.5\"");
        svg.push_str(&polyline(&frame, pts, &style));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
