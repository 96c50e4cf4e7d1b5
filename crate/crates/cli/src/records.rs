//! Point records: one sampled strategy with everything derived from it, in
//! CSV (fixed header per model) or JSON lines.
//!
//! Column order is `model`, the strategy coordinates (`p0..p7` classical,
//! `x0..x15` prequantized, `x1 x2 x3` quantized), then `alpha beta gamma d
//! q0 q1 q2 class`. The `q` columns are empty when the strategy is optimal
//! for no frequency triple. Reals are written in the shortest decimal form
//! that parses back to the same `f64`.

use std::io::Write;

use catdilemma::{map_strategy, Model, Strategy, TransitivityClass};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::config::model_from_name;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub model: Model,
    pub coords: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub d: f64,
    pub q: Option<[f64; 3]>,
    pub class: TransitivityClass,
}

impl PointRecord {
    pub fn from_strategy(s: &Strategy) -> Self {
        let m = map_strategy(s);
        PointRecord {
            model: m.model,
            coords: s.coords().to_vec(),
            alpha: m.conditionals.alpha,
            beta: m.conditionals.beta,
            gamma: m.conditionals.gamma,
            d: m.d,
            q: m.q.map(|q| q.as_array()),
            class: m.class,
        }
    }
}

pub fn coordinate_names(model: Model) -> Vec<String> {
    match model {
        Model::Classical => (0..8).map(|i| format!("p{i}")).collect(),
        Model::Prequant => (0..16).map(|i| format!("x{i}")).collect(),
        Model::Quant => (1..=3).map(|i| format!("x{i}")).collect(),
    }
}

pub fn header(model: Model) -> Vec<String> {
    let mut h = vec!["model".to_string()];
    h.extend(coordinate_names(model));
    h.extend(
        ["alpha", "beta", "gamma", "d", "q0", "q1", "q2", "class"]
            .iter()
            .map(|s| s.to_string()),
    );
    h
}

pub fn class_from_name(name: &str) -> Option<TransitivityClass> {
    [
        TransitivityClass::IntransitiveCycleA,
        TransitivityClass::IntransitiveCycleB,
        TransitivityClass::Transitive,
    ]
    .into_iter()
    .find(|c| c.name() == name)
}

fn fields(r: &PointRecord) -> Vec<String> {
    let mut f = vec![r.model.name().to_string()];
    f.extend(r.coords.iter().map(f64::to_string));
    f.extend([r.alpha, r.beta, r.gamma, r.d].map(|v| v.to_string()));
    match r.q {
        Some(q) => f.extend(q.map(|v| v.to_string())),
        None => f.extend([String::new(), String::new(), String::new()]),
    }
    f.push(r.class.name().to_string());
    f
}

pub fn write_csv<W: Write>(
    out: W,
    model: Model,
    records: impl IntoIterator<Item = PointRecord>,
) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header(model))?;
    for r in records {
        w.write_record(fields(&r))?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a CSV written by [`write_csv`].
pub fn read_csv(text: &str) -> Result<Vec<PointRecord>, CliError> {
    let bad = |msg: String| CliError::usage(format!("malformed point file: {msg}"));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let head: Vec<String> = reader
        .headers()
        .map_err(|e| bad(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        let model = model_from_name(&row[0]).ok_or_else(|| bad(format!("model {:?}", &row[0])))?;
        if head != header(model) {
            return Err(bad("header does not match the model".into()));
        }
        let num = |i: usize| -> Result<f64, CliError> {
            row[i]
                .parse()
                .map_err(|_| bad(format!("column {i}: {:?}", &row[i])))
        };
        let k = model.coordinate_count();
        let coords = (1..=k).map(num).collect::<Result<Vec<_>, _>>()?;
        let q = if row[k + 5].is_empty() {
            None
        } else {
            Some([num(k + 5)?, num(k + 6)?, num(k + 7)?])
        };
        out.push(PointRecord {
            model,
            coords,
            alpha: num(k + 1)?,
            beta: num(k + 2)?,
            gamma: num(k + 3)?,
            d: num(k + 4)?,
            q,
            class: class_from_name(&row[k + 8])
                .ok_or_else(|| bad(format!("class {:?}", &row[k + 8])))?,
        });
    }
    Ok(out)
}

impl Serialize for PointRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coords.len() + 9))?;
        map.serialize_entry("model", self.model.name())?;
        for (name, v) in coordinate_names(self.model).iter().zip(&self.coords) {
            map.serialize_entry(name, v)?;
        }
        map.serialize_entry("alpha", &self.alpha)?;
        map.serialize_entry("beta", &self.beta)?;
        map.serialize_entry("gamma", &self.gamma)?;
        map.serialize_entry("d", &self.d)?;
        for (i, name) in ["q0", "q1", "q2"].iter().enumerate() {
            map.serialize_entry(name, &self.q.map(|q| q[i]))?;
        }
        map.serialize_entry("class", self.class.name())?;
        map.end()
    }
}

/// One JSON object per line, keys in CSV column order.
pub fn write_json_lines<W: Write>(
    mut out: W,
    records: impl IntoIterator<Item = PointRecord>,
) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, &r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}
