use std::fmt::Write as _;
use std::io::{self, Write};

use crate::analysis::RegionGrid;
use crate::integrator::{EventKind, Trajectory};

pub const TRAJECTORY_HEADER: &str = "t,r,alpha,beta,c1,c2,v,p,region";

/// CSV text for a trajectory. `t` and `r` use 12 decimal places; parameters
/// use the shortest representation that round-trips.
pub fn format_trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * (trajectory.samples.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &trajectory.samples {
        let _ = writeln!(
            out,
            "{:.12},{:.12},{},{},{},{},{},{},{}",
            s.t, s.r, s.alpha, s.beta, s.c1, s.c2, s.v, s.p, s.region
        );
    }
    for e in &trajectory.events {
        let _ = writeln!(out, "#event,{:.12},{},{}", e.t, e.kind, e.detail);
    }
    out
}

/// Writes [`format_trajectory_csv`] output and returns the byte count.
pub fn write_trajectory_csv<W: Write>(trajectory: &Trajectory, mut dest: W) -> io::Result<usize> {
    let text = format_trajectory_csv(trajectory);
    dest.write_all(text.as_bytes())?;
    dest.flush()?;
    Ok(text.len())
}

/// One `alpha,beta,region` row per cell.
pub fn write_grid_csv<W: Write>(grid: &RegionGrid, mut dest: W) -> io::Result<usize> {
    let mut out = String::from("alpha,beta,region\n");
    for (a, b, label) in grid.iter() {
        let _ = writeln!(out, "{a},{b},{label}");
    }
    dest.write_all(out.as_bytes())?;
    dest.flush()?;
    Ok(out.len())
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// A line chart of `r` against `t` with dashed markers at shocks and
/// crossings.
pub fn write_trajectory_svg<W: Write>(
    trajectory: &Trajectory,
    title: &str,
    mut dest: W,
) -> io::Result<usize> {
    let t_max = trajectory
        .samples
        .last()
        .map_or(1.0, |s| s.t)
        .max(f64::MIN_POSITIVE);
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let x = |t: f64| MARGIN + t / t_max * plot_w;
    let y = |r: f64| HEIGHT - MARGIN - r * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0,
        escape_xml(title)
    );
    // axes
    let _ = writeln!(
        out,
        r#"<path d="M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2}" stroke="black" fill="none"/>"#,
        x(0.0),
        y(1.0),
        x(0.0),
        y(0.0),
        x(t_max),
        y(0.0)
    );
    for k in 0..=4 {
        let r = k as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="end">{r}</text>"#,
            x(0.0) - 4.0,
            y(r) + 3.0
        );
        let t = t_max * r;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="middle">{t:.3}</text>"#,
            x(t),
            y(0.0) + 14.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">t (months)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 10.0
    );
    for e in &trajectory.events {
        let colour = match e.kind {
            EventKind::Shock => "red",
            EventKind::ThresholdCrossing => "gray",
            EventKind::RegionChange => "blue",
        };
        let _ = writeln!(
            out,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="{colour}" stroke-dasharray="4 3" stroke-width="0.8"/>"#,
            x(e.t),
            y(0.0),
            y(1.0)
        );
    }
    out.push_str(r#"<polyline fill="none" stroke="black" stroke-width="1.5" points=""#);
    for (i, s) in trajectory.samples.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.2},{:.2}", x(s.t), y(s.r));
    }
    out.push_str("\"/>\n</svg>\n");

    dest.write_all(out.as_bytes())?;
    dest.flush()?;
    Ok(out.len())
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::{Event, Sample};
    use crate::model::RegionLabel;

    fn sample(t: f64, r: f64) -> Sample {
        Sample {
            t,
            r,
            alpha: 0.96,
            beta: 0.06,
            c1: 2.3,
            c2: 69.1,
            v: 0,
            p: 1,
            region: RegionLabel::III0,
        }
    }

    #[test]
    fn empty_trajectory_is_header_only() {
        let mut buf = Vec::new();
        let n = write_trajectory_csv(&Trajectory::default(), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            format!("{TRAJECTORY_HEADER}\n")
        );
        assert_eq!(n, TRAJECTORY_HEADER.len() + 1);
    }

    #[test]
    fn rows_and_events() {
        let traj = Trajectory {
            samples: vec![sample(0.0, 0.0), sample(0.5, 0.25), sample(1.0, 0.125)],
            events: vec![Event {
                t: 0.5,
                kind: EventKind::Shock,
                detail: "delta_r=0.25".into(),
            }],
        };
        let text = format_trajectory_csv(&traj);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(
            lines[1],
            "0.000000000000,0.000000000000,0.96,0.06,2.3,69.1,0,1,III0"
        );
        assert_eq!(lines[4], "#event,0.500000000000,shock,delta_r=0.25");
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let traj = Trajectory {
            samples: vec![sample(0.0, 0.0), sample(1.0, 1.0)],
            events: vec![],
        };
        let mut buf = Vec::new();
        write_trajectory_svg(&traj, "a <b>", &mut buf).unwrap();
        let svg = String::from_utf8(buf).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a &lt;b&gt;"));
        assert!(svg.contains("points=\"50.00,350.00 750.00,50.00\""));
    }
}
