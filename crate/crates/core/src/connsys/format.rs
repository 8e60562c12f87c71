//! The `connsys-v1` JSON input format.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigInt, BigRational};
use serde::Deserialize;

use super::{ConnectivitySystem, GroundSet, Order, SubsetMask};
use crate::error::{input, Result};
use crate::matroid::{Field, Matroid};

pub const FORMAT_TAG: &str = "connsys-v1";

#[derive(Clone, Debug, Deserialize)]
pub struct ConnsysFile {
    pub format: String,
    pub ground: Vec<String>,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Clone, Debug, Deserialize)]
pub struct TableEntry {
    pub set: Vec<String>,
    pub order: Order,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Table {
        empty: Order,
        #[serde(default)]
        entries: Vec<TableEntry>,
        #[serde(default)]
        default: Option<Order>,
        /// Entries may be any set; symmetry is cross-checked instead of implied.
        #[serde(default)]
        strict: bool,
    },
    GraphEdges {
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
    },
    LinearMatroid {
        field: String,
        columns: BTreeMap<String, Vec<serde_json::Value>>,
    },
    GraphicMatroid {
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
    },
    Uniform {
        rank: usize,
        size: usize,
    },
}

pub fn parse_connsys(text: &str) -> Result<ConnectivitySystem> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    parse_connsys_value(value)
}

pub fn parse_connsys_value(value: serde_json::Value) -> Result<ConnectivitySystem> {
    let file: ConnsysFile = serde_json::from_value(value)?;
    file.build()
}

impl ConnsysFile {
    pub fn build(&self) -> Result<ConnectivitySystem> {
        if self.format != FORMAT_TAG {
            return input(format!("unsupported format {:?}, expected {FORMAT_TAG:?}", self.format));
        }
        let ground = GroundSet::new(self.ground.iter().cloned())?;
        match &self.body {
            Body::Table { empty, entries, default, strict } => build_table(ground, *empty, entries, *default, *strict),
            Body::GraphEdges { vertices, edges } => {
                let ends = edge_ends(&ground, vertices, edges)?;
                ConnectivitySystem::from_graph(ground, vertices.clone(), ends)
            }
            Body::GraphicMatroid { vertices, edges } => {
                let ends = edge_ends(&ground, vertices, edges)?;
                Ok(ConnectivitySystem::from_matroid(Matroid::graphic(ground, vertices.len(), ends)?))
            }
            Body::Uniform { rank, size } => {
                if *size != ground.len() {
                    return input(format!("uniform size {size} does not match ground set size {}", ground.len()));
                }
                Ok(ConnectivitySystem::from_matroid(Matroid::uniform(ground, *rank)?))
            }
            Body::LinearMatroid { field, columns } => {
                let field = parse_field(field)?;
                let mut cols = vec![None; ground.len()];
                for (label, entries) in columns {
                    let Some(i) = ground.index_of(label) else {
                        return input(format!("column for unknown label {label:?}"));
                    };
                    cols[i] = Some(entries.iter().map(parse_scalar).collect::<Result<Vec<_>>>()?);
                }
                let cols: Vec<Vec<BigRational>> = cols
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| c.ok_or(()).or_else(|_| input(format!("missing column for {:?}", ground.label(i)))))
                    .collect::<Result<_>>()?;
                let m: Arc<Matroid> = Matroid::linear(ground, field, cols)?;
                Ok(ConnectivitySystem::from_matroid(m))
            }
        }
    }
}

fn build_table(
    ground: GroundSet,
    empty: Order,
    entries: &[TableEntry],
    default: Option<Order>,
    strict: bool,
) -> Result<ConnectivitySystem> {
    let size = 1usize << ground.len();
    let full = ground.full();
    let mut table: Vec<Option<Order>> = vec![None; size];
    table[0] = Some(empty);
    if !strict {
        table[full.0 as usize] = Some(empty);
    }
    for e in entries {
        let m = ground.mask(&e.set)?;
        let targets: Vec<SubsetMask> = if strict {
            vec![m]
        } else {
            if !m.contains(0) {
                return input(format!(
                    "entry {:?} lacks the first ground element; list its complement or use strict mode",
                    e.set
                ));
            }
            vec![m, m.complement(full)]
        };
        for t in targets {
            match table[t.0 as usize] {
                Some(old) if old != e.order => {
                    return input(format!("conflicting orders for {:?}", ground.labels_of(t)));
                }
                Some(_) if t != full && t != SubsetMask::EMPTY => {
                    return input(format!("duplicate entry for {:?}", ground.labels_of(t)));
                }
                _ => table[t.0 as usize] = Some(e.order),
            }
        }
    }
    let table: Vec<Order> = table
        .into_iter()
        .enumerate()
        .map(|(m, v)| match v.or(default) {
            Some(o) => Ok(o),
            None => input(format!("no order for {:?} and no default", ground.labels_of(SubsetMask(m as u32)))),
        })
        .collect::<Result<_>>()?;
    if strict {
        if let Some(m) = (0..size).find(|&m| table[m] != table[full.0 as usize & !m]) {
            return input(format!("strict table is not symmetric at {:?}", ground.labels_of(SubsetMask(m as u32))));
        }
    }
    ConnectivitySystem::from_table(ground, table)
}

fn edge_ends(
    ground: &GroundSet,
    vertices: &[String],
    edges: &[(String, String, String)],
) -> Result<Vec<(usize, usize)>> {
    let vix = |v: &str| match vertices.iter().position(|x| x == v) {
        Some(i) => Ok(i),
        None => input(format!("unknown vertex {v:?}")),
    };
    let mut ends = vec![None; ground.len()];
    for (u, v, label) in edges {
        let Some(i) = ground.index_of(label) else {
            return input(format!("edge label {label:?} is not in the ground set"));
        };
        if ends[i].replace((vix(u)?, vix(v)?)).is_some() {
            return input(format!("edge label {label:?} used twice"));
        }
    }
    ends.into_iter()
        .enumerate()
        .map(|(i, e)| e.ok_or(()).or_else(|_| input(format!("ground element {:?} has no edge", ground.label(i)))))
        .collect()
}

fn parse_field(s: &str) -> Result<Field> {
    match s {
        "gf2" => Ok(Field::Prime(2)),
        "rational" => Ok(Field::Rational),
        _ => match s.strip_prefix("gfp:").and_then(|p| p.parse::<u64>().ok()) {
            Some(p) => Field::prime(p),
            None => input(format!("unknown field {s:?}")),
        },
    }
}

fn parse_scalar(v: &serde_json::Value) -> Result<BigRational> {
    let text = match v {
        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        serde_json::Value::String(s) => s.trim().to_string(),
        _ => return input(format!("matrix entry {v} must be an integer or a \"p/q\" string")),
    };
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.as_str(), "1"),
    };
    let (Ok(a), Ok(b)) = (num.parse::<BigInt>(), den.parse::<BigInt>()) else {
        return input(format!("bad matrix entry {text:?}"));
    };
    if b == BigInt::from(0) {
        return input(format!("zero denominator in {text:?}"));
    }
    Ok(BigRational::new(a, b))
}
