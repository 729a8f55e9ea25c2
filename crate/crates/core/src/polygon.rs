//! Lower-left boundary of the cloud, supporting lines and elements of a co-slope.

use std::cmp::Ordering;
use std::fmt::Write as _;

use crate::equation::{CloudEntry, CloudPoint};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentBasis};
use crate::scalar::SymbolTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Side {
    pub coslope: Exponent,
    pub hi: CloudPoint,
    pub lo: CloudPoint,
}

/// `E_mu(P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolygonElement {
    Vertex(CloudPoint),
    Side(Side),
}

impl PolygonElement {
    pub fn top(&self) -> &CloudPoint {
        match self {
            PolygonElement::Vertex(v) => v,
            PolygonElement::Side(s) => &s.hi,
        }
    }

    pub fn bot(&self) -> &CloudPoint {
        match self {
            PolygonElement::Vertex(v) => v,
            PolygonElement::Side(s) => &s.lo,
        }
    }

    pub fn is_side(&self) -> bool {
        matches!(self, PolygonElement::Side(_))
    }

    pub fn to_string_with(&self, table: &SymbolTable) -> String {
        match self {
            PolygonElement::Vertex(v) => format!("vertex {}", v.to_string_with(table)),
            PolygonElement::Side(s) => format!(
                "side {}-{} (co-slope {})",
                s.hi.to_string_with(table),
                s.lo.to_string_with(table),
                s.coslope.display(table)
            ),
        }
    }
}

/// Hull vertices from the highest to the lowest; co-slopes strictly increase along `sides`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub hull: Vec<CloudPoint>,
    pub sides: Vec<Side>,
}

/// `(alpha_lo - alpha_hi) / (r_hi - r_lo)`
pub fn coslope(hi: &CloudPoint, lo: &CloudPoint) -> Exponent {
    let dr = num_rational::BigRational::from_integer(((hi.height - lo.height) as i64).into());
    lo.alpha.sub(&hi.alpha).scale(&num_traits::Inv::inv(dr))
}

pub fn build_polygon(points: &[CloudPoint], basis: &ExponentBasis) -> Result<NewtonPolygon> {
    if points.is_empty() {
        return Err(Error::EmptyCloud);
    }
    // Leftmost point per height; equal abscissae at a lower height are kept separately.
    let mut per_height: Vec<CloudPoint> = Vec::new();
    for p in points {
        match per_height.iter_mut().find(|q| q.height == p.height) {
            Some(q) => {
                if basis.lt(&p.alpha, &q.alpha)? {
                    *q = p.clone();
                }
            }
            None => per_height.push(p.clone()),
        }
    }
    per_height.sort_by_key(|p| std::cmp::Reverse(p.height));
    let mut hull: Vec<CloudPoint> = Vec::new();
    for p in per_height {
        while hull.len() >= 2 {
            let a = &hull[hull.len() - 2];
            let b = &hull[hull.len() - 1];
            if basis.compare(&coslope(a, b), &coslope(b, &p))? != Ordering::Less {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let sides = hull
        .windows(2)
        .map(|w| Side { coslope: coslope(&w[0], &w[1]), hi: w[0].clone(), lo: w[1].clone() })
        .collect();
    Ok(NewtonPolygon { hull, sides })
}

fn line_value(p: &CloudPoint, mu: &Exponent) -> Exponent {
    p.alpha.add(&mu.scale_int(p.height as i64))
}

impl NewtonPolygon {
    /// `alpha0 = min (alpha + mu r)` over the hull vertices.
    pub fn supporting_line(&self, mu: &Exponent, basis: &ExponentBasis) -> Result<Exponent> {
        let mut best = line_value(&self.hull[0], mu);
        for v in &self.hull[1..] {
            let x = line_value(v, mu);
            if basis.lt(&x, &best)? {
                best = x;
            }
        }
        Ok(best)
    }

    pub fn element_of_coslope(&self, mu: &Exponent, basis: &ExponentBasis) -> Result<PolygonElement> {
        let a0 = self.supporting_line(mu, basis)?;
        let on: Vec<&CloudPoint> = self.hull.iter().filter(|v| line_value(v, mu) == a0).collect();
        Ok(match on.as_slice() {
            [v] => PolygonElement::Vertex((*v).clone()),
            [hi, lo] => PolygonElement::Side(Side { coslope: mu.clone(), hi: (*hi).clone(), lo: (*lo).clone() }),
            _ => return Err(Error::InvariantViolation("supporting line meets more than two hull vertices".into())),
        })
    }

    /// Sides with co-slope strictly above `nu_prev` (all of them for `None`), ascending.
    pub fn sides_above(&self, nu_prev: Option<&Exponent>, basis: &ExponentBasis) -> Result<Vec<Side>> {
        let mut out = Vec::new();
        for s in &self.sides {
            let keep = match nu_prev {
                None => true,
                Some(v) => basis.lt(v, &s.coslope)?,
            };
            if keep {
                out.push(s.clone());
            }
        }
        Ok(out)
    }

    pub fn meets_axis(&self) -> bool {
        self.hull.last().is_some_and(|v| v.height == 0)
    }

    pub fn lowest(&self) -> &CloudPoint {
        self.hull.last().expect("nonempty hull")
    }

    pub fn to_ascii(&self, cloud: &[CloudPoint], table: &SymbolTable, level: u32) -> String {
        ascii_sketch(self, cloud, table, level)
    }
}

/// Every cloud entry on `L_mu`, i.e. the points of `E_mu`.
pub fn element_entries(cloud: &[CloudEntry], mu: &Exponent, basis: &ExponentBasis) -> Result<Vec<CloudEntry>> {
    let pts: Vec<CloudPoint> = cloud.iter().map(|e| e.point.clone()).collect();
    let poly = build_polygon(&pts, basis)?;
    let a0 = poly.supporting_line(mu, basis)?;
    Ok(cloud.iter().filter(|e| line_value(&e.point, mu) == a0).cloned().collect())
}

fn approx(e: &Exponent, table: &SymbolTable, level: u32) -> f64 {
    e.enclosure(table, level).midpoint_f64()
}

fn ascii_sketch(poly: &NewtonPolygon, cloud: &[CloudPoint], table: &SymbolTable, level: u32) -> String {
    let xs: Vec<f64> = cloud.iter().map(|p| approx(&p.alpha, table, level)).collect();
    let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min).min(0.0);
    let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max).max(lo + 1.0);
    let top = cloud.iter().map(|p| p.height).max().unwrap_or(0);
    let width = 48usize;
    let col = |x: f64| (((x - lo) / (hi - lo)) * (width - 1) as f64).round() as usize;
    let mut out = String::new();
    for h in (0..=top).rev() {
        let mut row = vec![' '; width];
        for (p, &x) in cloud.iter().zip(&xs) {
            if p.height == h {
                let c = col(x);
                if row[c] == ' ' {
                    row[c] = '.';
                }
            }
        }
        for v in poly.hull.iter().filter(|v| v.height == h) {
            row[col(approx(&v.alpha, table, level))] = 'o';
        }
        let line: String = row.into_iter().collect();
        let _ = writeln!(out, "{h:>3} |{}", line.trim_end());
    }
    let _ = writeln!(out, "    +{}", "-".repeat(width));
    let _ = writeln!(out, "     alpha from {lo:.2} to {hi:.2}");
    for v in &poly.hull {
        let _ = writeln!(out, "vertex {}", v.to_string_with(table));
    }
    for s in &poly.sides {
        let _ = writeln!(
            out,
            "side {} - {}  co-slope {}",
            s.hi.to_string_with(table),
            s.lo.to_string_with(table),
            s.coslope.display(table)
        );
    }
    out
}

/// Deterministic SVG in the style of the usual polygon figures: shaded region, hull,
/// labelled sides, dashed supporting lines for the requested co-slopes.
pub fn to_svg(
    poly: &NewtonPolygon,
    cloud: &[CloudPoint],
    lines: &[Exponent],
    basis: &ExponentBasis,
) -> Result<String> {
    let table = &basis.table;
    let level = basis.budget();
    let xs: Vec<f64> = cloud.iter().map(|p| approx(&p.alpha, table, level)).collect();
    let xmin = xs.iter().cloned().fold(0.0, f64::min) - 1.0;
    let xmax = xs.iter().cloned().fold(1.0, f64::max) + 2.0;
    let top = cloud.iter().map(|p| p.height).max().unwrap_or(0).max(1) as f64 + 1.0;
    let scale = 40.0;
    let (w, h) = ((xmax - xmin) * scale, top * scale + 20.0);
    let px = |x: f64| (x - xmin) * scale;
    let py = |r: f64| h - 20.0 - r * scale;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    // axes
    let _ = writeln!(s, r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#, px(xmin), py(0.0), px(xmax), py(0.0));
    let _ = writeln!(s, r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#, px(0.0), py(0.0), px(0.0), py(top));
    // shaded region
    let hv: Vec<(f64, f64)> = poly.hull.iter().map(|v| (approx(&v.alpha, table, level), v.height as f64)).collect();
    let mut region = String::new();
    let first = hv[0];
    let last = hv[hv.len() - 1];
    let _ = write!(region, "{:.1},{:.1} ", px(xmax), py(first.1));
    for (x, r) in &hv {
        let _ = write!(region, "{:.1},{:.1} ", px(*x), py(*r));
    }
    let _ = write!(region, "{:.1},{:.1}", px(xmax), py(last.1));
    let _ = writeln!(s, r##"<polygon points="{region}" fill="#d8d8d8" stroke="none"/>"##);
    for side in &poly.sides {
        let (x1, r1) = (approx(&side.hi.alpha, table, level), side.hi.height as f64);
        let (x2, r2) = (approx(&side.lo.alpha, table, level), side.lo.height as f64);
        let _ = writeln!(s, r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black" stroke-width="2"/>"#, px(x1), py(r1), px(x2), py(r2));
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12">E_{}</text>"#,
            px((x1 + x2) / 2.0) + 6.0,
            py((r1 + r2) / 2.0) - 6.0,
            xml_escape(&side.coslope.to_string_with(table))
        );
    }
    for mu in lines {
        let a0 = poly.supporting_line(mu, basis)?;
        let (a, m) = (approx(&a0, table, level), approx(mu, table, level));
        // alpha = a0 - mu r
        let (ra, rb) = (0.0, top);
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black" stroke-dasharray="4 3"/>"#,
            px(a - m * ra),
            py(ra),
            px(a - m * rb),
            py(rb)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="12">L_{}</text>"#,
            px(a - m * rb) + 4.0,
            py(rb) + 12.0,
            xml_escape(&mu.to_string_with(table))
        );
    }
    for (p, x) in cloud.iter().zip(&xs) {
        let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="black"/>"#, px(*x), py(p.height as f64));
    }
    for v in &poly.hull {
        let x = approx(&v.alpha, table, level);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
            px(x) + 5.0,
            py(v.height as f64) + 14.0,
            xml_escape(&v.to_string_with(table))
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn xml_escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
