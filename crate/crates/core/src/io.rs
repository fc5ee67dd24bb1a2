//! JSON file formats.
//!
//! Vertices are keyed by `"part:index"` strings. Parse errors name the
//! offending key path.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::conditions::ParamVector;
use crate::correspondence::{CorrespondenceCover, CoverColor, CoverViolation};
use crate::hypergraph::{PartiteHypergraph, RawHypergraph, VertexId, VertexMap, Violation, Warning};
use crate::lists::{Color, ListAssignment, PartialColoring};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("at `{path}`: {message}")]
    Json { path: String, message: String },
    #[error("at `{path}`: bad vertex key {key:?} (expected \"part:index\")")]
    BadKey { path: String, key: String },
    #[error("at `{path}`: vertex {vertex} is not in the hypergraph")]
    UnknownVertex { path: String, vertex: VertexId },
    #[error("at `{path}`: vertex {vertex} is missing")]
    MissingVertex { path: String, vertex: VertexId },
    #[error("invalid hypergraph: {0}")]
    Graph(#[from] Violation),
    #[error("invalid cover: {0}")]
    Cover(#[from] CoverViolation),
}

/// Deserializes `text`, reporting the key path of the first error.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        IoError::Json { path, message: e.into_inner().to_string() }
    })
}

pub fn parse_vertex_key(key: &str) -> Option<VertexId> {
    let (p, i) = key.split_once(':')?;
    Some(VertexId::new(p.trim().parse().ok()?, i.trim().parse().ok()?))
}

pub fn vertex_key(v: VertexId) -> String {
    v.to_string()
}

/// Serializes a vertex map as `{"p:i": value}` in part-major order.
pub struct Keyed<'a, T>(pub &'a VertexMap<T>);

impl<T: Serialize> Serialize for Keyed<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        for (v, x) in self.0.iter() {
            map.serialize_entry(&vertex_key(v), x)?;
        }
        map.end()
    }
}

/// Like [`Keyed`], skipping `None` entries.
pub struct KeyedSome<'a, T>(pub &'a VertexMap<Option<T>>);

impl<T: Serialize> Serialize for KeyedSome<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(None)?;
        for (v, x) in self.0.iter() {
            if let Some(x) = x {
                map.serialize_entry(&vertex_key(v), x)?;
            }
        }
        map.end()
    }
}

/// Resolves `"p:i"` keys against `h`. With `total`, every vertex must
/// appear.
fn keyed_map<T: Clone>(
    h: &PartiteHypergraph,
    field: &str,
    entries: BTreeMap<String, T>,
    total: bool,
) -> Result<VertexMap<Option<T>>, IoError> {
    let mut map = VertexMap::from_fn(h.part_sizes(), |_| None);
    for (key, value) in entries {
        let path = format!("{field}.{key}");
        let v = parse_vertex_key(&key).ok_or_else(|| IoError::BadKey { path: path.clone(), key })?;
        if !h.contains_vertex(v) {
            return Err(IoError::UnknownVertex { path, vertex: v });
        }
        map[v] = Some(value);
    }
    if total {
        if let Some((v, _)) = map.iter().find(|(_, x)| x.is_none()) {
            return Err(IoError::MissingVertex { path: format!("{field}.{v}"), vertex: v });
        }
    }
    Ok(map)
}

pub fn read_graph(text: &str) -> Result<(PartiteHypergraph, Vec<Warning>), IoError> {
    let raw: RawHypergraph = parse_json(text)?;
    let warnings = crate::hypergraph::validate(&raw)?;
    Ok((PartiteHypergraph::from_raw(&raw)?, warnings))
}

pub fn write_graph(h: &PartiteHypergraph) -> String {
    serde_json::to_string(&h.to_raw()).expect("graphs serialize")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ListsFile {
    lists: BTreeMap<String, Vec<Color>>,
}

pub fn read_lists(h: &PartiteHypergraph, text: &str) -> Result<ListAssignment, IoError> {
    let file: ListsFile = parse_json(text)?;
    let map = keyed_map(h, "lists", file.lists, true)?;
    let lists = map.map(|_, l| l.clone().expect("total map"));
    Ok(ListAssignment::new(h, lists).expect("shape checked"))
}

pub fn write_lists(lists: &ListAssignment) -> String {
    #[derive(Serialize)]
    struct Out<'a> {
        lists: Keyed<'a, Vec<Color>>,
    }
    serde_json::to_string(&Out { lists: Keyed(lists.as_map()) }).expect("lists serialize")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringFile {
    colors: BTreeMap<String, Color>,
}

/// Reads a possibly partial coloring.
pub fn read_coloring(h: &PartiteHypergraph, text: &str) -> Result<PartialColoring, IoError> {
    let file: ColoringFile = parse_json(text)?;
    Ok(PartialColoring::from_map(keyed_map(h, "colors", file.colors, false)?))
}

pub fn write_coloring(colors: &VertexMap<Option<Color>>) -> String {
    #[derive(Serialize)]
    struct Out<'a> {
        colors: KeyedSome<'a, Color>,
    }
    serde_json::to_string(&Out { colors: KeyedSome(colors) }).expect("colorings serialize")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverFile {
    list_sizes: BTreeMap<String, usize>,
    cover_edges: Vec<Vec<[usize; 3]>>,
}

pub fn read_cover(h: &PartiteHypergraph, text: &str) -> Result<CorrespondenceCover, IoError> {
    let file: CoverFile = parse_json(text)?;
    let sizes = keyed_map(h, "list_sizes", file.list_sizes, true)?.map(|_, s| s.expect("total map"));
    let edges = file
        .cover_edges
        .iter()
        .map(|e| e.iter().map(|&[p, i, s]| CoverColor::new(VertexId::new(p, i), s)).collect())
        .collect();
    Ok(CorrespondenceCover::new(h, sizes, edges)?)
}

pub fn write_cover(cover: &CorrespondenceCover) -> String {
    #[derive(Serialize)]
    struct Out<'a> {
        list_sizes: Keyed<'a, usize>,
        cover_edges: Vec<Vec<[usize; 3]>>,
    }
    let cover_edges = cover
        .edges()
        .iter()
        .map(|e| e.iter().map(|c| [c.owner.part, c.owner.index, c.slot]).collect())
        .collect();
    serde_json::to_string(&Out { list_sizes: Keyed(cover.list_sizes()), cover_edges })
        .expect("covers serialize")
}

pub fn read_params(text: &str) -> Result<ParamVector, IoError> {
    parse_json(text)
}
