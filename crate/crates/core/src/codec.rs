//! Lossless encoding of a graph as bi-cliques, their missing edges, and the
//! remaining uncovered edges.
//!
//! Text carrier, one record per line:
//!
//! ```text
//! cutnpeel-model 1
//! dims <|S|> <|D|> <|T|>
//! labels <S|D|T> <count>      (optional, followed by one label per line)
//! bicliques <count>
//! B <s,s,..> <d,d,..> <t,t,..> <missing count>
//! M <s> <d> <t>               (missing triples of the preceding B)
//! remaining <count>
//! R <s> <d> <t>
//! ```
//!
//! Empty index lists are written as `-`.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::cost::{relative_cost, total_cost, CostBreakdown, Universe};
use crate::error::{Error, Result};
use crate::graph::{ObjectKind, ObjectSubset, TemporalGraph, Triple};

const MAGIC: &str = "cutnpeel-model 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicliqueRecord {
    pub objects: ObjectSubset,
    /// Span triples absent from the graph, canonical order.
    pub missing: Vec<Triple>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelStream {
    pub counts: [u32; 3],
    pub labels: Option<[Vec<String>; 3]>,
    pub bicliques: Vec<BicliqueRecord>,
    /// Graph edges covered by no bi-clique, canonical order.
    pub remaining: Vec<Triple>,
}

pub fn encode(graph: &TemporalGraph, bicliques: &[ObjectSubset]) -> Result<ModelStream> {
    let mut covered = vec![false; graph.num_edges()];
    let mut records = Vec::with_capacity(bicliques.len());
    for subset in bicliques {
        let induced = graph.induced_edges(subset)?;
        let present: HashSet<Triple> = induced.iter().map(|&id| graph.edge(id)).collect();
        let missing = subset.span().filter(|e| !present.contains(e)).collect();
        for id in induced {
            covered[id as usize] = true;
        }
        records.push(BicliqueRecord {
            objects: subset.clone(),
            missing,
        });
    }
    let remaining = graph
        .edges()
        .iter()
        .zip(&covered)
        .filter(|(_, &c)| !c)
        .map(|(e, _)| *e)
        .collect();
    Ok(ModelStream {
        counts: graph.counts(),
        labels: graph.labels().cloned(),
        bicliques: records,
        remaining,
    })
}

fn decode_error(record: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Decode {
        record: record.into(),
        message: message.into(),
    }
}

fn check_triple(counts: [u32; 3], e: &Triple, record: &str) -> Result<()> {
    for kind in ObjectKind::ALL {
        let p = kind.position();
        if e[p] >= counts[p] {
            return Err(decode_error(
                record,
                format!("{:?} index {} out of range (count {})", kind, e[p], counts[p]),
            ));
        }
    }
    Ok(())
}

/// Rebuilds the graph: every bi-clique span minus its missing triples,
/// together with the remaining edges.
pub fn decode(stream: &ModelStream) -> Result<TemporalGraph> {
    let counts = stream.counts;
    let mut edges: Vec<Triple> = Vec::new();
    for (i, rec) in stream.bicliques.iter().enumerate() {
        let name = format!("bi-clique {i}");
        for kind in ObjectKind::ALL {
            let p = kind.position();
            let members = rec.objects.get(kind);
            if let Some(&bad) = members.iter().find(|&&x| x >= counts[p]) {
                return Err(decode_error(
                    &name,
                    format!("{kind:?} index {bad} out of range (count {})", counts[p]),
                ));
            }
            if members.windows(2).any(|w| w[0] >= w[1]) {
                return Err(decode_error(&name, format!("{kind:?} indices not strictly ascending")));
            }
        }
        let missing: HashSet<Triple> = rec.missing.iter().copied().collect();
        if let Some(bad) = rec.missing.iter().find(|e| !rec.objects.contains_triple(e)) {
            return Err(decode_error(
                &name,
                format!("missing triple {bad:?} lies outside the span"),
            ));
        }
        edges.extend(rec.objects.span().filter(|e| !missing.contains(e)));
    }
    for (i, e) in stream.remaining.iter().enumerate() {
        check_triple(counts, e, &format!("remaining edge {i}"))?;
    }
    edges.extend_from_slice(&stream.remaining);
    let graph = TemporalGraph::from_edges(counts, edges)?;
    match &stream.labels {
        Some(l) => graph.with_labels(l.clone()),
        None => Ok(graph),
    }
}

fn join(xs: &[u32]) -> String {
    if xs.is_empty() {
        "-".to_string()
    } else {
        xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

pub fn write_model<W: Write>(stream: &ModelStream, mut out: W) -> Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(
        out,
        "dims {} {} {}",
        stream.counts[0], stream.counts[1], stream.counts[2]
    )?;
    if let Some(labels) = &stream.labels {
        for kind in ObjectKind::ALL {
            let table = &labels[kind.position()];
            writeln!(out, "labels {} {}", kind.short_name(), table.len())?;
            for l in table {
                writeln!(out, "{l}")?;
            }
        }
    }
    writeln!(out, "bicliques {}", stream.bicliques.len())?;
    for rec in &stream.bicliques {
        writeln!(
            out,
            "B {} {} {} {}",
            join(&rec.objects.sources),
            join(&rec.objects.destinations),
            join(&rec.objects.timestamps),
            rec.missing.len()
        )?;
        for m in &rec.missing {
            writeln!(out, "M {} {} {}", m[0], m[1], m[2])?;
        }
    }
    writeln!(out, "remaining {}", stream.remaining.len())?;
    for e in &stream.remaining {
        writeln!(out, "R {} {} {}", e[0], e[1], e[2])?;
    }
    Ok(())
}

pub fn model_to_string(stream: &ModelStream) -> String {
    let mut buf = Vec::new();
    write_model(stream, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("model text is UTF-8")
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    number: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self, expect: &str) -> Result<String> {
        self.number += 1;
        match self.inner.next() {
            Some(line) => Ok(line?),
            None => Err(decode_error(
                format!("line {}", self.number),
                format!("unexpected end of input, expected {expect}"),
            )),
        }
    }

    fn record(&self) -> String {
        format!("line {}", self.number)
    }

    fn tagged(&mut self, tag: &str, fields: usize) -> Result<Vec<String>> {
        let line = self.next_line(tag)?;
        let parts: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        if parts.first().map(String::as_str) != Some(tag) || parts.len() != fields + 1 {
            return Err(decode_error(
                self.record(),
                format!("expected `{tag}` with {fields} fields, found {line:?}"),
            ));
        }
        Ok(parts[1..].to_vec())
    }

    fn number<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse()
            .map_err(|_| decode_error(self.record(), format!("invalid number {s:?}")))
    }

    fn triple(&mut self, tag: &str) -> Result<Triple> {
        let f = self.tagged(tag, 3)?;
        Ok([self.number(&f[0])?, self.number(&f[1])?, self.number(&f[2])?])
    }

    fn list(&self, s: &str) -> Result<Vec<u32>> {
        if s == "-" {
            return Ok(Vec::new());
        }
        s.split(',').map(|x| self.number(x)).collect()
    }
}

pub fn read_model<R: BufRead>(reader: R) -> Result<ModelStream> {
    let mut lines = Lines {
        inner: reader.lines(),
        number: 0,
    };
    let header = lines.next_line("header")?;
    if header.trim() != MAGIC {
        return Err(decode_error("line 1", format!("bad header {header:?}")));
    }
    let dims = lines.tagged("dims", 3)?;
    let counts = [
        lines.number(&dims[0])?,
        lines.number(&dims[1])?,
        lines.number(&dims[2])?,
    ];

    let mut next = lines.next_line("labels or bicliques")?;
    let mut labels = None;
    if next.starts_with("labels ") {
        let mut tables: [Vec<String>; 3] = Default::default();
        for kind in ObjectKind::ALL {
            let parts: Vec<&str> = next.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "labels" || parts[1] != kind.short_name() {
                return Err(decode_error(lines.record(), format!("expected labels for {kind:?}")));
            }
            let n: usize = lines.number(parts[2])?;
            for _ in 0..n {
                tables[kind.position()].push(lines.next_line("label")?);
            }
            if kind != ObjectKind::Timestamp {
                next = lines.next_line("labels")?;
            }
        }
        labels = Some(tables);
        next = lines.next_line("bicliques")?;
    }

    let parts: Vec<&str> = next.split_whitespace().collect();
    if parts.len() != 2 || parts[0] != "bicliques" {
        return Err(decode_error(lines.record(), "expected `bicliques <count>`"));
    }
    let nb: usize = lines.number(parts[1])?;
    let mut bicliques = Vec::with_capacity(nb);
    for _ in 0..nb {
        let f = lines.tagged("B", 4)?;
        let objects = ObjectSubset {
            sources: lines.list(&f[0])?,
            destinations: lines.list(&f[1])?,
            timestamps: lines.list(&f[2])?,
        };
        let nm: usize = lines.number(&f[3])?;
        let missing = (0..nm).map(|_| lines.triple("M")).collect::<Result<Vec<_>>>()?;
        bicliques.push(BicliqueRecord { objects, missing });
    }
    let nr = lines.tagged("remaining", 1)?;
    let nr: usize = lines.number(&nr[0])?;
    let remaining = (0..nr).map(|_| lines.triple("R")).collect::<Result<Vec<_>>>()?;
    Ok(ModelStream {
        counts,
        labels,
        bicliques,
        remaining,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompressionReport {
    pub cost: CostBreakdown,
    pub baseline_bits: f64,
    pub relative_cost: f64,
    /// `100 · relative_cost`.
    pub rate_percent: f64,
    /// Informational: size of the text model.
    pub model_bytes: usize,
    /// Informational: size of the canonical edge list.
    pub edge_list_bytes: usize,
}

pub fn compression_report(graph: &TemporalGraph, bicliques: &[ObjectSubset]) -> Result<CompressionReport> {
    let universe = Universe::of(graph);
    let cost = total_cost(graph, bicliques)?;
    let rel = relative_cost(&cost, &universe)?;
    let model_bytes = model_to_string(&encode(graph, bicliques)?).len();
    let mut edge_list = Vec::new();
    graph.write_edge_list(&mut edge_list)?;
    Ok(CompressionReport {
        cost,
        baseline_bits: universe.baseline_bits(),
        relative_cost: rel,
        rate_percent: 100.0 * rel,
        model_bytes,
        edge_list_bytes: edge_list.len(),
    })
}
