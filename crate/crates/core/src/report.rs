//! Machine-readable and human-readable renderings of results.
//!
//! JSON output is deterministic: struct field order is fixed, maps are
//! ordered, and exact values (torsion invariants, field scalars) render as
//! decimal or `a/b` strings so arbitrary precision survives. Identical jobs
//! produce byte-identical documents.

use serde::Serialize;
use serde_json::Value;

use crate::exact::{HomologyGroup, Scalar};
use crate::koszul::{CohomologyResult, RingPresentation};
use crate::oracle::OracleReport;

/// Echo of the resolved job inputs, embedded in every JSON document.
#[derive(Clone, Debug, Serialize)]
pub struct ParamsJson {
    pub complex: Value,
    pub subtorus: Value,
    pub ring: String,
    pub max_degree: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeJson {
    pub n: usize,
    pub betti: usize,
    pub torsion: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorJson {
    pub degree: usize,
    pub index: usize,
    /// Sparse cocycle representative: (slice coordinate, scalar).
    pub representative: Vec<(usize, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductJson {
    pub a: [usize; 2],
    pub b: [usize; 2],
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingJson {
    pub generators: Vec<GeneratorJson>,
    pub products: Vec<ProductJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultJson {
    pub params: ParamsJson,
    pub degrees: Vec<DegreeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingJson>,
}

pub fn degrees_json(groups: &[HomologyGroup]) -> Vec<DegreeJson> {
    groups
        .iter()
        .enumerate()
        .map(|(n, g)| DegreeJson {
            n,
            betti: g.betti,
            torsion: g.torsion.iter().map(|t| t.to_string()).collect(),
        })
        .collect()
}

pub fn ring_json(ring: &RingPresentation) -> RingJson {
    let mut generators = Vec::new();
    for (degree, classes) in ring.basis.iter().enumerate() {
        for (index, class) in classes.iter().enumerate() {
            generators.push(GeneratorJson {
                degree,
                index,
                representative: class
                    .representative
                    .iter()
                    .map(|(i, s)| (*i, s.to_string()))
                    .collect(),
            });
        }
    }
    let products = ring
        .products
        .iter()
        .map(|(&((p, i), (q, j)), coeffs)| ProductJson {
            a: [p, i],
            b: [q, j],
            coefficients: coeffs.iter().map(Scalar::to_string).collect(),
        })
        .collect();
    RingJson { generators, products }
}

pub fn result_json(
    params: ParamsJson,
    result: &CohomologyResult,
    ring: Option<&RingPresentation>,
) -> ResultJson {
    ResultJson {
        params,
        degrees: degrees_json(&result.groups),
        ring: ring.map(ring_json),
    }
}

fn torsion_text(torsion: &[String]) -> String {
    if torsion.is_empty() {
        "-".to_string()
    } else {
        torsion.join(",")
    }
}

/// Aligned per-degree table of Betti numbers and torsion.
pub fn betti_text(groups: &[HomologyGroup]) -> String {
    let degrees = degrees_json(groups);
    let mut out = String::from("degree  betti  torsion\n");
    for d in degrees {
        out.push_str(&format!("{:<7} {:<6} {}\n", d.n, d.betti, torsion_text(&d.torsion)));
    }
    out
}

/// Generators-by-degree list followed by the multiplication table.
pub fn ring_text(ring: &RingPresentation) -> String {
    let mut out = String::new();
    out.push_str("generators by degree\n");
    for (degree, classes) in ring.basis.iter().enumerate() {
        if classes.is_empty() {
            continue;
        }
        let names: Vec<String> =
            (0..classes.len()).map(|i| format!("g{degree}_{i}")).collect();
        out.push_str(&format!("  degree {degree}: {}\n", names.join(", ")));
    }
    out.push_str("products (a · b = coefficients in the target degree basis)\n");
    for (&((p, i), (q, j)), coeffs) in &ring.products {
        if p == 0 || q == 0 {
            continue; // unit rows are noise
        }
        let rendered: Vec<String> = coeffs.iter().map(Scalar::to_string).collect();
        out.push_str(&format!(
            "  g{p}_{i} · g{q}_{j} = [{}]\n",
            rendered.join(", ")
        ));
    }
    out
}

/// Aligned comparison table for oracle runs.
pub fn oracle_text(report: &OracleReport) -> String {
    let mut out = format!("oracle: {}\n", report.target);
    if let Some(note) = &report.note {
        out.push_str(&format!("note: {note}\n"));
    }
    if !report.rows.is_empty() {
        out.push_str("degree  engine          oracle          match\n");
        for row in &report.rows {
            let engine = format!(
                "{} {}",
                row.engine_betti,
                torsion_text(&row.engine_torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>())
            );
            let oracle = format!(
                "{} {}",
                row.oracle_betti,
                torsion_text(&row.oracle_torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>())
            );
            out.push_str(&format!(
                "{:<7} {:<15} {:<15} {}\n",
                row.degree,
                engine,
                oracle,
                if row.matched { "yes" } else { "NO" }
            ));
        }
    }
    out.push_str(&format!(
        "agreement: {}\n",
        match report.agreement {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "undefined (no applicable oracle)",
        }
    ));
    out
}
