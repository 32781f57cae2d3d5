//! Browser bindings. Every entry point returns a JSON string.

use locally_lattice::cayley::{build_example_group, verify_counterexample};
use locally_lattice::cover::{
    classify_2d, default_radius, extend_cover, recover_deck_group, seed_map, CoverStatus,
};
use locally_lattice::families::{FamilyKind, FamilyTag};
use locally_lattice::local::{is_r_locally, is_weakly_r_locally};
use locally_lattice::surface::{find_wheel_family, glue_surface, WheelSearch};
use locally_lattice::{Error, Graph};
use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest half-width of the drawn window.
const VIEW: i64 = 14;

#[derive(Serialize)]
struct CoverView {
    half: i64,
    /// Row-major images for `y = half..=-half`, `x = -half..=half`; `-1` when unassigned.
    cells: Vec<i64>,
}

fn family(name: &str, params: &str) -> Result<FamilyTag, Error> {
    let p = params
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| Error::BadParameters(format!("not an integer: {s}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let tag = match name {
        "torus" => FamilyTag::new(FamilyKind::Torus, &p),
        "klein" => {
            if p.len() != 3 || !(0..=2).contains(&p[2]) {
                return Err(Error::BadParameters("klein takes p, q, t with t in 0..=2".into()));
            }
            FamilyTag::klein(p[0], p[1], p[2] as u8)
        }
        "strange" => FamilyTag::new(FamilyKind::Strange, &p),
        "gentorus" => FamilyTag::new(FamilyKind::GenTorus, &p),
        "proc1" => FamilyTag::new(FamilyKind::ProcI, &p),
        "proc2" => FamilyTag::new(FamilyKind::ProcII, &p),
        other => return Err(Error::BadParameters(format!("unknown family {other}"))),
    };
    Ok(tag)
}

fn fail(e: Error) -> String {
    json!({"error": e.code(), "message": e.to_string()}).to_string()
}

fn summary(g: &Graph) -> Value {
    json!({"vertices": g.vertex_count(), "edges": g.edge_count()})
}

fn cover_json(g: &Graph, r: usize) -> Result<Value, Error> {
    let strong = is_r_locally(g, 2, r)?;
    let weak = is_weakly_r_locally(g, 2, r)?;
    let seed = seed_map(g, 0, 2)?;
    let pc = extend_cover(g, &seed, default_radius(g, 0))?;
    let half = (pc.radius() as i64 + 1).min(VIEW);
    let mut cells = Vec::new();
    for y in (-half..=half).rev() {
        for x in -half..=half {
            cells.push(pc.get(&[x, y]).map_or(-1, |v| v as i64));
        }
    }
    let mut out = json!({
        "graph": summary(g),
        "radius": r,
        "strong": strong.holds,
        "weak": weak.holds,
        "view": CoverView { half, cells },
        "status": pc.status,
        "obstruction": pc.obstruction,
    });
    if pc.status == CoverStatus::Valid {
        let dg = recover_deck_group(&pc, g)?;
        out["generators"] = dg.generators.iter().map(|a| a.to_string()).collect();
        out["classification"] = json!(classify_2d(&dg)?);
    }
    Ok(out)
}

/// Builds a family graph, checks `r`-locality and draws the covering map.
#[wasm_bindgen]
pub fn cover_family(name: &str, params: &str, r: usize) -> String {
    family(name, params)
        .and_then(|t| t.build())
        .and_then(|g| cover_json(&g, r))
        .map_or_else(fail, |v| v.to_string())
}

/// Searches for a wheel family and reports the glued surface.
#[wasm_bindgen]
pub fn wheel_family(name: &str, params: &str) -> String {
    let run = || -> Result<Value, Error> {
        let g = family(name, params)?.build()?;
        Ok(match find_wheel_family(&g) {
            WheelSearch::Found(cert) => json!({
                "graph": summary(&g),
                "wheel": true,
                "faces": cert.family.len(),
                "surface": glue_surface(&cert)?,
            }),
            WheelSearch::NotWheel => json!({"graph": summary(&g), "wheel": false}),
            WheelSearch::Indeterminate => json!({"graph": summary(&g), "wheel": null}),
        })
    };
    run().map_or_else(fail, |v| v.to_string())
}

/// The 112-vertex Cayley graph in dimension 3.
#[wasm_bindgen]
pub fn counterexample() -> String {
    let eg = build_example_group();
    verify_counterexample(&eg.cayley, 3)
        .map(|r| json!({"order": eg.elements.len(), "report": r}))
        .map_or_else(fail, |v| v.to_string())
}
