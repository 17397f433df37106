//! Text and SVG pictures of parallelogram polyominoes.
//!
//! ASCII layout, origin bottom-left: a `+---+` top border, then one text row
//! per unit band from `y = n−1` down to `y = 0`, then a bottom border with
//! `o` under the origin. Inside a row, even columns hold vertical lattice
//! lines and odd columns hold cells. North steps of the upper path are drawn
//! as `|`, its east steps as `_` at the foot of the band they sit on (the
//! steps along the top edge merge with the border), and cells as `#`.

use std::fmt::Write;

use crate::frames::Polyomino;
use crate::words::Step;

type Steps = Vec<(i64, i64)>;

/// Upper-path north steps as `(x, y)` of their lower end, and east steps as
/// `(x, y)` of their left end.
fn upper_steps(p: &Polyomino) -> (Steps, Steps) {
    let (mut x, mut y) = (0i64, 0i64);
    let (mut north, mut east) = (Vec::new(), Vec::new());
    for s in p.upper().letters() {
        match s {
            Step::N => {
                north.push((x, y));
                y += 1;
            }
            Step::E => {
                east.push((x, y));
                x += 1;
            }
        }
    }
    (north, east)
}

pub fn ascii(p: &Polyomino) -> String {
    let (m, n) = (p.m() as i64, p.n() as i64);
    let width = (2 * m + 1) as usize;
    let columns = p.columns();
    let (north, east) = upper_steps(p);
    let mut out = String::new();
    let _ = writeln!(out, "+{}+", "-".repeat(width));
    for y in (0..n).rev() {
        let mut row = vec![' '; width];
        for (x, &(bottom, top)) in columns.iter().enumerate() {
            if (bottom..top).contains(&y) {
                row[2 * x + 1] = '#';
            }
        }
        for &(x, yy) in &east {
            if yy == y && yy > 0 {
                row[(2 * x + 1) as usize] = '_';
            }
        }
        for &(x, yy) in &north {
            if yy == y {
                row[(2 * x) as usize] = '|';
            }
        }
        let _ = writeln!(out, "|{}|", row.into_iter().collect::<String>());
    }
    let mut bottom = vec!['-'; width];
    bottom[0] = 'o';
    let _ = writeln!(out, "+{}+", bottom.into_iter().collect::<String>());
    out
}

const UNIT: i64 = 20;
const MARGIN: i64 = 10;

fn path_points(word: &crate::words::BinomialWord, n: i64) -> String {
    word.vertices()
        .iter()
        .map(|&(x, y)| format!("{},{}", MARGIN + x * UNIT, MARGIN + (n - y) * UNIT))
        .collect::<Vec<_>>()
        .join(" ")
}

/// SVG with one unit square per cell, the upper path in red, the lower path
/// in green and the origin marked by a small circle.
pub fn svg(p: &Polyomino) -> String {
    let (m, n) = (p.m() as i64, p.n() as i64);
    let (w, h) = (m * UNIT + 2 * MARGIN, n * UNIT + 2 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="#999" stroke-dasharray="2,2"/>"##,
        m * UNIT,
        n * UNIT
    );
    for (x, &(bottom, top)) in p.columns().iter().enumerate() {
        for y in bottom..top {
            let _ = writeln!(
                out,
                r##"<rect x="{}" y="{}" width="{UNIT}" height="{UNIT}" fill="#ddd" stroke="#888"/>"##,
                MARGIN + x as i64 * UNIT,
                MARGIN + (n - y - 1) * UNIT
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="red" stroke-width="2"/>"#,
        path_points(p.upper(), n)
    );
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="green" stroke-width="2"/>"#,
        path_points(p.lower(), n)
    );
    let _ = writeln!(
        out,
        r#"<circle cx="{MARGIN}" cy="{}" r="3" fill="black"/>"#,
        MARGIN + n * UNIT
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(u: &str, l: &str) -> Polyomino {
        Polyomino::new(u.parse().unwrap(), l.parse().unwrap()).unwrap()
    }

    #[test]
    fn unit_square() {
        assert_eq!(ascii(&poly("NE", "EN")), "+---+\n||# |\n+o--+\n");
    }

    #[test]
    fn two_by_two() {
        let got = ascii(&poly("NENE", "EENN"));
        assert_eq!(got, "+-----+\n| _|# |\n||# # |\n+o----+\n");
    }

    #[test]
    fn svg_is_well_formed() {
        let s = svg(&poly("NNEE", "EENN"));
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<rect").count(), 1 + 4);
    }
}
