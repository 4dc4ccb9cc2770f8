//! Minimal self-contained SVG line plots: polylines, axes with ticks, and
//! optional reference grid lines. No external renderer assumptions beyond
//! plain SVG 1.1.

pub struct Series {
    pub name: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

pub const PALETTE: [&str; 6] = ["#1f6fb2", "#c44e52", "#2e8b57", "#8172b2", "#cc7a16", "#4c4c4c"];

const W: f64 = 840.0;
const H: f64 = 560.0;
const ML: f64 = 70.0; // margins
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 55.0;

pub fn line_plot(
    title: &str,
    xlabel: &str,
    ylabel: &str,
    series: &[Series],
    vlines: &[f64],
    hlines: &[f64],
) -> String {
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        if x.is_finite() && y.is_finite() {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    for &x in vlines {
        x0 = x0.min(x);
        x1 = x1.max(x);
    }
    for &y in hlines {
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 >= x1 {
        x1 = x0 + 1.0;
    }
    if y0 >= y1 {
        y1 = y0 + 1.0;
    }
    // pad the value range a little so curves do not hug the frame
    let ypad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - ypad, y1 + ypad);
    let sx = move |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
    let sy = move |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"13\">\n"
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        W / 2.0,
        escape(title)
    ));

    // frame and ticks
    out.push_str(&format!(
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        W - ML - MR,
        H - MT - MB
    ));
    for i in 0..=5 {
        let fx = x0 + (x1 - x0) * i as f64 / 5.0;
        let px = sx(fx);
        out.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>\n",
            H - MB,
            H - MB + 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{px}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            H - MB + 20.0,
            fmt_tick(fx)
        ));
        let fy = y0 + (y1 - y0) * i as f64 / 5.0;
        let py = sy(fy);
        out.push_str(&format!(
            "<line x1=\"{}\" y1=\"{py}\" x2=\"{ML}\" y2=\"{py}\" stroke=\"black\"/>\n",
            ML - 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            ML - 9.0,
            py + 4.5,
            fmt_tick(fy)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        H - 12.0,
        escape(xlabel)
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    ));

    // reference grid lines
    for &x in vlines {
        let px = sx(x);
        out.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{MT}\" x2=\"{px}\" y2=\"{}\" stroke=\"#999\" stroke-dasharray=\"3 4\"/>\n",
            H - MB
        ));
    }
    for &y in hlines {
        let py = sy(y);
        out.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{py}\" x2=\"{}\" y2=\"{py}\" stroke=\"#999\" stroke-dasharray=\"3 4\"/>\n",
            W - MR
        ));
    }

    for s in series {
        let path: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let dash = if s.dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"{dash} points=\"{}\"/>\n",
            s.color,
            path.join(" ")
        ));
    }

    // legend
    for (i, s) in series.iter().enumerate() {
        let ly = MT + 16.0 + 18.0 * i as f64;
        let lx = ML + 14.0;
        out.push_str(&format!(
            "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            lx + 24.0,
            s.color
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\">{}</text>\n",
            lx + 30.0,
            ly + 4.5,
            escape(&s.name)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if a >= 1000.0 || a < 0.01 {
        format!("{v:.1e}")
    } else if a >= 10.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
