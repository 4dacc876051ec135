// JSON documents and plain tables for every command.

use std::fmt::Write as _;

use clap::ValueEnum;
use rbcm_core::cayley::{CayleyMapRecord, MapStats};
use rbcm_core::classify::{FamilyMap, ReconciliationReport};
use rbcm_core::factorlift::LabeledFactor;
use rbcm_core::ideals::IdealPresentation;
use rbcm_core::poly::Poly;
use rbcm_core::structure::AbelianType;
use serde_json::{json, Value};

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

pub struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

pub enum Doc {
    Data(Value, Table),
    Text(String),
}

impl Doc {
    pub fn to_string(&self, format: Format) -> String {
        match (self, format) {
            (Doc::Text(s), _) => s.clone(),
            (Doc::Data(v, _), Format::Json) => format!("{}\n", serde_json::to_string_pretty(v).expect("serialisable")),
            (Doc::Data(_, t), Format::Table) => t.render(),
        }
    }
}

impl Table {
    fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            format!("{}\n", padded.join("  ").trim_end())
        };
        let mut out = line(self.headers.clone());
        out += &line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(String::as_str).collect());
        for row in &self.rows {
            out += &line(row.iter().map(String::as_str).collect());
        }
        out
    }
}

fn coeffs(p: &Poly) -> Value {
    json!(p.coeffs())
}

fn ideal_json(q: &IdealPresentation) -> Value {
    json!({
        "modulus": q.modulus().value(),
        "context": coeffs(q.context()),
        "rows": q.rows(),
        "order": q.quotient_order().map(|o| o.to_string()),
    })
}

fn group_json(t: &AbelianType) -> Value {
    json!({ "invariants": t.invariant_factors(), "name": t.to_string() })
}

pub fn map_json(m: &CayleyMapRecord, stats: &MapStats) -> Value {
    let g = m.group();
    json!({
        "group": group_json(g.group_type()),
        "type": m.map_type().to_string(),
        "valence": m.valence(),
        "omega": m.omega().iter().map(|&w| g.label(w)).collect::<Vec<_>>(),
        "rho": m.rho_cycle().iter().map(|&w| g.label(w)).collect::<Vec<_>>(),
        "genus": stats.genus,
        "faces": stats.faces,
        "ideal": m.ideal().map(ideal_json),
    })
}

pub fn factors(p: u64, k: u32, n: u64, target: &str, fs: &[LabeledFactor], ok: bool) -> Doc {
    let list: Vec<Value> = fs
        .iter()
        .map(|f| json!({ "d": f.label.d, "l": f.label.l, "level": f.label.level, "multiplicity": f.multiplicity, "coeffs": coeffs(&f.poly) }))
        .collect();
    let v = json!({ "p": p, "k": k, "n": n, "target": target, "modulus": p.pow(k), "product_ok": ok, "factors": list });
    let rows = fs
        .iter()
        .map(|f| vec![f.label.d.to_string(), f.label.l.to_string(), f.label.level.to_string(), f.multiplicity.to_string(), f.poly.to_string()])
        .collect();
    Doc::Data(v, Table { headers: vec!["d", "l", "level", "mult", "factor"], rows })
}

pub fn lift(base: &Poly, target: &Poly, lift: &Poly) -> Doc {
    let v = json!({ "modulus": lift.modulus().value(), "base": coeffs(base), "target": coeffs(target), "lift": coeffs(lift) });
    let rows = vec![vec![base.to_string(), target.to_string(), lift.to_string()]];
    Doc::Data(v, Table { headers: vec!["base", "target", "lift"], rows })
}

pub fn ideals(qs: &[IdealPresentation]) -> Doc {
    let v = json!({ "ideals": qs.iter().map(ideal_json).collect::<Vec<_>>() });
    let rows = qs
        .iter()
        .map(|q| {
            let gens: Vec<String> = q.row_polys().iter().map(|r| r.to_string()).collect();
            vec![q.quotient_order().map_or("?".into(), |o| o.to_string()), if gens.is_empty() { "(0)".to_string() } else { format!("({})", gens.join(", ")) }]
        })
        .collect();
    Doc::Data(v, Table { headers: vec!["index", "ideal"], rows })
}

fn params_cell(fm: &FamilyMap) -> String {
    let p = &fm.params;
    let mut parts = Vec::new();
    if let Some(c) = p.case_tag {
        parts.push(format!("case {c}"));
    }
    for (name, val) in [("μ", p.mu), ("μ1", p.mu1), ("μ2", p.mu2), ("α", p.alpha), ("ν", p.nu)] {
        if let Some(v) = val {
            parts.push(format!("{name}={v}"));
        }
    }
    if !p.k_fn.is_empty() {
        parts.push(format!("K={:?}", p.k_fn.iter().map(|x| x.1).collect::<Vec<_>>()));
    }
    if !p.j_fn.is_empty() {
        parts.push(format!("J={:?}", p.j_fn.iter().map(|x| x.1).collect::<Vec<_>>()));
    }
    if let Some(q) = &p.quadratic {
        parts.push(format!("g={q:?}"));
    }
    parts.join(" ")
}

pub fn family(name: &str, maps: &[FamilyMap]) -> Doc {
    let mut list = Vec::new();
    let mut rows = Vec::new();
    for fm in maps {
        let stats = rbcm_core::cayley::trace_faces(&fm.map);
        let mut m = map_json(&fm.map, &stats);
        m["params"] = serde_json::to_value(&fm.params).expect("serialisable");
        list.push(m);
        rows.push(vec![
            params_cell(fm),
            fm.map.group().group_type().to_string(),
            stats.genus.to_string(),
            fm.ideal.row_polys().iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "),
        ]);
    }
    let v = json!({ "family": name, "count": maps.len(), "maps": list });
    Doc::Data(v, Table { headers: vec!["params", "group", "genus", "ideal"], rows })
}

pub fn oracle(t: &AbelianType, valence: u64, maps: &[CayleyMapRecord]) -> Doc {
    let mut list = Vec::new();
    let mut rows = Vec::new();
    for m in maps {
        let stats = rbcm_core::cayley::trace_faces(m);
        list.push(map_json(m, &stats));
        let g = m.group();
        rows.push(vec![m.rho_cycle().iter().map(|&w| g.label(w)).collect::<Vec<_>>().join(" "), stats.genus.to_string()]);
    }
    let v = json!({ "group": group_json(t), "valence": valence, "count": maps.len(), "maps": list });
    Doc::Data(v, Table { headers: vec!["rho", "genus"], rows })
}

pub fn crosscheck(rep: &ReconciliationReport) -> Doc {
    let v = serde_json::to_value(rep).expect("serialisable");
    let mut rows = vec![
        vec!["group".into(), rep.group.clone()],
        vec!["valence".into(), rep.valence.to_string()],
        vec!["family".into(), rep.variant.name().into()],
        vec!["family count".into(), rep.family_count.to_string()],
        vec!["oracle count".into(), rep.oracle_count.to_string()],
        vec!["agree".into(), rep.agree.to_string()],
    ];
    for d in &rep.discrepancies {
        rows.push(vec![
            format!("{}: {}", d.topic, d.reading),
            format!("{} vs oracle {}{}", d.count, d.oracle_count, if d.implemented { " (implemented)" } else { "" }),
        ]);
    }
    Doc::Data(v, Table { headers: vec!["item", "value"], rows })
}

/// Header `V E F genus`, then `v: a_1 … a_d` listing the arc targets `v + ω`
/// in `ρ`-order, vertices numbered as in the residue enumeration.
pub fn rotation_system(m: &CayleyMapRecord, s: &MapStats) -> String {
    let g = m.group();
    let mut out = format!("{} {} {} {}\n", s.vertices, s.edges, s.faces, s.genus);
    for v in 0..g.order() {
        let targets: Vec<String> = m.rho_cycle().iter().map(|&w| g.add(v, w).to_string()).collect();
        let _ = writeln!(out, "{v}: {}", targets.join(" "));
    }
    out
}
