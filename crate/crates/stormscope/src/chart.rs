//! Deterministic SVG emission: timeline bars, stacked stance areas,
//! toxicity bars. Plain string assembly, fixed palette, no timestamps or
//! randomness anywhere — identical inputs give byte-identical documents,
//! which keeps plots diffable in tests.

use crate::corpus::CoarseStance;
use crate::groups::GroupDistribution;
use crate::timeline::TimelineSeries;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 300.0;
const MARGIN_LEFT: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 40.0;
const MARGIN_TOP: f64 = 30.0;

fn stance_color(s: CoarseStance) -> &'static str {
    match s {
        CoarseStance::SupportTarget => "#2166ac",
        CoarseStance::SupportBoth => "#67a9cf",
        CoarseStance::OpposeTarget => "#b2182b",
        CoarseStance::OpposeBoth => "#ef8a62",
        CoarseStance::Neutral => "#999999",
        CoarseStance::OffTopic => "#d9d9d9",
    }
}

fn header(title: &str) -> String {
    format!(
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" "#,
            r#"viewBox="0 0 {w} {h}">"#,
            "\n",
            r#"<rect width="{w}" height="{h}" fill="white"/>"#,
            "\n",
            r#"<text x="{tx}" y="20" font-family="sans-serif" font-size="14">{title}</text>"#,
            "\n"
        ),
        w = WIDTH,
        h = HEIGHT,
        tx = MARGIN_LEFT,
        title = title
    )
}

fn x_of(i: usize, n: usize) -> f64 {
    let plot_w = WIDTH - MARGIN_LEFT - 10.0;
    MARGIN_LEFT + plot_w * (i as f64 + 0.5) / n.max(1) as f64
}

fn bar_width(n: usize) -> f64 {
    let plot_w = WIDTH - MARGIN_LEFT - 10.0;
    (plot_w / n.max(1) as f64 * 0.8).max(1.0)
}

fn y_of(v: f64, max: f64) -> f64 {
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    HEIGHT - MARGIN_BOTTOM - plot_h * (v / max.max(1e-9))
}

fn axis_labels(out: &mut String, labels: &[String]) {
    let n = labels.len();
    let step = (n / 10).max(1);
    for (i, label) in labels.iter().enumerate() {
        if i % step != 0 {
            continue;
        }
        out.push_str(&format!(
            concat!(
                r#"<text x="{x:.1}" y="{y}" font-family="sans-serif" font-size="9" "#,
                r#"text-anchor="middle">{label}</text>"#,
                "\n"
            ),
            x = x_of(i, n),
            y = HEIGHT - MARGIN_BOTTOM + 14.0,
            label = label
        ));
    }
}

/// Per-bin message counts as a bar chart, with peak bins marked.
pub fn timeline_svg(series: &TimelineSeries, peaks: &[usize], title: &str) -> String {
    let n = series.n_bins();
    let max = series.counts.iter().copied().max().unwrap_or(0) as f64;
    let mut out = header(title);
    for (i, &c) in series.counts.iter().enumerate() {
        let x = x_of(i, n);
        let y = y_of(c as f64, max);
        let w = bar_width(n);
        out.push_str(&format!(
            concat!(
                r#"<rect x="{x:.1}" y="{y:.1}" width="{w:.1}" height="{h:.1}" "#,
                r##"fill="#4477aa"/>"##,
                "\n"
            ),
            x = x - w / 2.0,
            y = y,
            w = w,
            h = (HEIGHT - MARGIN_BOTTOM) - y,
        ));
    }
    for &p in peaks {
        out.push_str(&format!(
            concat!(
                r##"<circle cx="{x:.1}" cy="{y:.1}" r="4" fill="#cc3311"/>"##,
                "\n"
            ),
            x = x_of(p, n),
            y = y_of(series.counts[p] as f64, max) - 8.0,
        ));
    }
    let labels: Vec<String> = (0..n).map(|i| series.bin_label(i)).collect();
    axis_labels(&mut out, &labels);
    out.push_str(&format!(
        concat!(
            r#"<text x="8" y="{y}" font-family="sans-serif" font-size="9">{max}</text>"#,
            "\n</svg>\n"
        ),
        y = MARGIN_TOP + 8.0,
        max = max as u64
    ));
    out
}

/// Stacked per-bin stance fractions; bins without labeled messages stay
/// blank.
pub fn stacked_area_svg(
    series: &TimelineSeries,
    dist: &GroupDistribution,
    title: &str,
) -> String {
    let n = dist.bins.len();
    let mut out = header(title);
    for (i, bin) in dist.bins.iter().enumerate() {
        let Some(fracs) = bin else { continue };
        let x = x_of(i, n);
        let w = bar_width(n);
        let mut acc = 0.0;
        for stance in CoarseStance::ALL {
            let f = fracs.get(&stance).copied().unwrap_or(0.0);
            if f <= 0.0 {
                continue;
            }
            let y_top = y_of(acc + f, 1.0);
            let y_bottom = y_of(acc, 1.0);
            out.push_str(&format!(
                concat!(
                    r#"<rect x="{x:.1}" y="{y:.1}" width="{w:.1}" height="{h:.1}" "#,
                    r#"fill="{color}"><title>{stance}</title></rect>"#,
                    "\n"
                ),
                x = x - w / 2.0,
                y = y_top,
                w = w,
                h = y_bottom - y_top,
                color = stance_color(stance),
                stance = stance.as_str(),
            ));
            acc += f;
        }
    }
    // legend
    for (k, stance) in CoarseStance::ALL.iter().enumerate() {
        let y = MARGIN_TOP + 14.0 * k as f64;
        out.push_str(&format!(
            concat!(
                r#"<rect x="{x}" y="{y:.1}" width="10" height="10" fill="{color}"/>"#,
                r#"<text x="{tx}" y="{ty:.1}" font-family="sans-serif" font-size="9">{name}</text>"#,
                "\n"
            ),
            x = WIDTH - 130.0,
            y = y,
            color = stance_color(*stance),
            tx = WIDTH - 116.0,
            ty = y + 9.0,
            name = stance.as_str(),
        ));
    }
    let labels: Vec<String> = (0..n).map(|i| series.bin_label(i)).collect();
    axis_labels(&mut out, &labels);
    out.push_str("</svg>\n");
    out
}

/// Simple labeled bar chart for rates in [0, 1] (toxicity share per bin).
pub fn rate_bars_svg(bins: &[(String, f64)], title: &str) -> String {
    let n = bins.len();
    let mut out = header(title);
    for (i, (_, rate)) in bins.iter().enumerate() {
        let x = x_of(i, n);
        let y = y_of(*rate, 1.0);
        let w = bar_width(n);
        out.push_str(&format!(
            concat!(
                r#"<rect x="{x:.1}" y="{y:.1}" width="{w:.1}" height="{h:.1}" "#,
                r##"fill="#ee7733"/>"##,
                "\n"
            ),
            x = x - w / 2.0,
            y = y,
            w = w,
            h = (HEIGHT - MARGIN_BOTTOM) - y,
        ));
    }
    let labels: Vec<String> = bins.iter().map(|(l, _)| l.clone()).collect();
    axis_labels(&mut out, &labels);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeline::BinWidth;

    fn series(counts: Vec<u64>) -> TimelineSeries {
        TimelineSeries {
            width: BinWidth::Ordinal(1),
            origin: None,
            counts,
            group_splits: None,
        }
    }

    #[test]
    fn timeline_svg_is_deterministic_and_wellformed() {
        let s = series(vec![5, 1, 3]);
        let a = timeline_svg(&s, &[0, 2], "t");
        let b = timeline_svg(&s, &[0, 2], "t");
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<circle").count(), 2);
    }

    #[test]
    fn stacked_area_skips_empty_bins() {
        use std::collections::BTreeMap;
        let s = series(vec![2, 0]);
        let mut fracs = BTreeMap::new();
        fracs.insert(CoarseStance::OpposeTarget, 1.0);
        let dist = GroupDistribution {
            bins: vec![Some(fracs), None],
            n_unlabeled: 0,
        };
        let svg = stacked_area_svg(&s, &dist, "groups");
        // one data rect plus six legend rects plus background
        assert_eq!(svg.matches("<rect").count(), 1 + 6 + 1);
    }
}
