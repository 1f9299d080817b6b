//! CSV, SVG and JSON views of a level curve.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{convexity_via_d, regularity, DSign, GeometricVerdict, LevelCurve};
use crate::critical::CriticalSet;
use crate::error::Result;
use crate::field::ScalarField;
use crate::grid::Box2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub vertices: usize,
    pub closed: bool,
    pub d_sign: DSign,
    pub geometric: Option<GeometricVerdict>,
    pub d_min: f64,
    pub d_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: f64,
    pub bounds: Box2,
    pub cells: usize,
    pub component_count: usize,
    pub regular: bool,
    pub min_gradient_norm: Option<f64>,
    pub convex: bool,
    pub components: Vec<ComponentReport>,
}

pub fn level_report(f: &ScalarField, curve: &LevelCurve, cs: &CriticalSet, delta: f64) -> Result<LevelReport> {
    let reg = regularity(f, curve, cs, delta)?;
    let conv = convexity_via_d(f, curve, 0)?;
    let components: Vec<ComponentReport> = curve
        .components
        .iter()
        .zip(conv.components)
        .map(|(c, v)| ComponentReport {
            vertices: c.points.len(),
            closed: c.closed,
            d_sign: v.d_sign,
            geometric: v.geometric,
            d_min: v.d_min,
            d_max: v.d_max,
        })
        .collect();
    let convex =
        reg.regular && components.len() == 1 && components[0].closed && components[0].d_sign == DSign::AllNegative;
    Ok(LevelReport {
        level: curve.level,
        bounds: curve.bounds,
        cells: curve.nx,
        component_count: components.len(),
        regular: reg.regular,
        min_gradient_norm: reg.min_gradient_norm.is_finite().then_some(reg.min_gradient_norm),
        convex,
        components,
    })
}

/// `x,y,component_id` rows; closed components repeat their first vertex.
pub fn to_csv(curve: &LevelCurve) -> String {
    let mut out = String::from("x,y,component_id\n");
    for (id, comp) in curve.components.iter().enumerate() {
        let closing = comp.closed.then(|| &comp.points[0]);
        for p in comp.points.iter().chain(closing) {
            let _ = writeln!(out, "{},{},{}", p.x(), p.y(), id);
        }
    }
    out
}

/// One `<path>` per component inside a group, y axis pointing up.
pub fn to_svg(curve: &LevelCurve) -> String {
    let b = &curve.bounds;
    let stroke = 0.002 * b.width().max(b.height());
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="600" height="600">"#,
        b.xmin,
        -b.ymax,
        b.width(),
        b.height()
    );
    let _ = writeln!(
        out,
        r#"<g id="level" data-level="{}" fill="none" stroke="black" stroke-width="{stroke}" transform="scale(1,-1)">"#,
        curve.level
    );
    for (id, comp) in curve.components.iter().enumerate() {
        let mut d = String::new();
        for (k, p) in comp.points.iter().enumerate() {
            let _ = write!(d, "{}{:.6},{:.6} ", if k == 0 { "M" } else { "L" }, p.x(), p.y());
        }
        if comp.closed {
            d.push('Z');
        }
        let _ = writeln!(out, r#"<path id="component-{id}" d="{}"/>"#, d.trim_end());
    }
    out.push_str("</g>\n</svg>\n");
    out
}
