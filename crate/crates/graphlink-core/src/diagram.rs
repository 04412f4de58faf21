//! The splice-diagram data model: identifiers, validation, structural queries.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Error;

/// An internal edge between two vertices, weighted at both ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalEdge {
    pub id: String,
    pub ends: (String, String),
    /// Weights at `ends.0` and `ends.1` respectively.
    pub weights: (BigInt, BigInt),
}

/// An arrowhead: a link component based at a vertex, with a weight at the
/// vertex end and an integer multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub base: String,
    pub weight: BigInt,
    pub multiplicity: BigInt,
}

/// A bare leaf (exceptional fiber): weighted at the vertex end only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stub {
    pub id: String,
    pub base: String,
    pub weight: BigInt,
}

/// A weighted forest with internal vertices, internal edges, arrows and
/// stubs. Immutable after construction; all queries are pure.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpliceDiagram {
    vertices: Vec<String>,
    edges: Vec<InternalEdge>,
    arrows: Vec<Arrow>,
    stubs: Vec<Stub>,
}

/// The multiplicity vector: one integer per arrow of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiplicityAssignment {
    pub values: BTreeMap<String, BigInt>,
}

/// An endpoint of a geodesic: a vertex or a leaf item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Vertex(String),
    Arrow(String),
    Stub(String),
}

/// One element of a tree path, alternating vertices and incident items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathElement {
    Vertex(String),
    Edge(String),
    Arrow(String),
    Stub(String),
}

/// The unique tree path between two endpoints, endpoints included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramPath {
    pub elements: Vec<PathElement>,
}

impl DiagramPath {
    /// Vertices on the path, in order.
    pub fn vertices(&self) -> impl Iterator<Item = &String> {
        self.elements.iter().filter_map(|e| match e {
            PathElement::Vertex(v) => Some(v),
            _ => None,
        })
    }

    /// Ids of the non-vertex items (edges, arrows, stubs) lying on the path.
    pub fn item_ids(&self) -> BTreeSet<&String> {
        self.elements
            .iter()
            .filter_map(|e| match e {
                PathElement::Edge(id) | PathElement::Arrow(id) | PathElement::Stub(id) => Some(id),
                PathElement::Vertex(_) => None,
            })
            .collect()
    }

    pub fn reversed(&self) -> DiagramPath {
        let mut elements = self.elements.clone();
        elements.reverse();
        DiagramPath { elements }
    }
}

/// A violation found by [`SpliceDiagram::validate`]. Violations are data,
/// not failures: an invalid diagram can be held and inspected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateId { id: String },
    UnknownVertex { referrer: String, vertex: String },
    SelfLoopEdge { edge: String },
    EdgeCycle { edge: String },
    ZeroWeight { item: String },
    /// Strict mode only: two items at one vertex with non-coprime weights.
    NonCoprimeWeights { vertex: String, item_a: String, item_b: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId { id } => write!(f, "DuplicateId: id `{id}` declared twice"),
            Violation::UnknownVertex { referrer, vertex } => {
                write!(f, "UnknownVertex: `{referrer}` refers to undeclared vertex `{vertex}`")
            }
            Violation::SelfLoopEdge { edge } => {
                write!(f, "SelfLoopEdge: edge `{edge}` joins a vertex to itself")
            }
            Violation::EdgeCycle { edge } => {
                write!(f, "EdgeCycle: edge `{edge}` closes a cycle; the diagram must be a forest")
            }
            Violation::ZeroWeight { item } => {
                write!(f, "ZeroWeight: item `{item}` carries weight 0")
            }
            Violation::NonCoprimeWeights { vertex, item_a, item_b } => write!(
                f,
                "NonCoprimeWeights: at vertex `{vertex}`, weights of `{item_a}` and `{item_b}` \
                 are not coprime"
            ),
        }
    }
}

/// One incidence at a vertex: the item id and its weight at that vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incidence<'a> {
    pub item_id: &'a String,
    pub weight: &'a BigInt,
}

impl SpliceDiagram {
    /// Builds a diagram from raw parts. The parts are stored sorted by id;
    /// edge ends are oriented so the lexicographically smaller vertex comes
    /// first. No validation happens here — see [`SpliceDiagram::validate`].
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<InternalEdge>,
        arrows: Vec<Arrow>,
        stubs: Vec<Stub>,
    ) -> Self {
        let mut vertices = vertices;
        vertices.sort();
        let mut edges = edges;
        for e in edges.iter_mut() {
            if e.ends.1 < e.ends.0 {
                core::mem::swap(&mut e.ends.0, &mut e.ends.1);
                core::mem::swap(&mut e.weights.0, &mut e.weights.1);
            }
        }
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        let mut arrows = arrows;
        arrows.sort_by(|a, b| a.id.cmp(&b.id));
        let mut stubs = stubs;
        stubs.sort_by(|a, b| a.id.cmp(&b.id));
        SpliceDiagram { vertices, edges, arrows, stubs }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[InternalEdge] {
        &self.edges
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn stubs(&self) -> &[Stub] {
        &self.stubs
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.vertices.iter().any(|v| v == id)
    }

    pub fn edge(&self, id: &str) -> Option<&InternalEdge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.id == id)
    }

    pub fn stub(&self, id: &str) -> Option<&Stub> {
        self.stubs.iter().find(|s| s.id == id)
    }

    /// True when some id (of any kind) equals `id`.
    pub fn has_id(&self, id: &str) -> bool {
        self.has_vertex(id)
            || self.edge(id).is_some()
            || self.arrow(id).is_some()
            || self.stub(id).is_some()
    }

    /// All ids occurring in the diagram, any kind.
    pub fn all_ids(&self) -> impl Iterator<Item = &String> {
        self.vertices
            .iter()
            .chain(self.edges.iter().map(|e| &e.id))
            .chain(self.arrows.iter().map(|a| &a.id))
            .chain(self.stubs.iter().map(|s| &s.id))
    }

    /// Every incidence at `v`: edge ends, arrows, stubs, with the weight
    /// each item carries at `v`.
    pub fn incidences_at<'a>(&'a self, v: &str) -> Vec<Incidence<'a>> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.ends.0 == v {
                out.push(Incidence { item_id: &e.id, weight: &e.weights.0 });
            }
            if e.ends.1 == v {
                out.push(Incidence { item_id: &e.id, weight: &e.weights.1 });
            }
        }
        for a in &self.arrows {
            if a.base == v {
                out.push(Incidence { item_id: &a.id, weight: &a.weight });
            }
        }
        for s in &self.stubs {
            if s.base == v {
                out.push(Incidence { item_id: &s.id, weight: &s.weight });
            }
        }
        out
    }

    /// Total valence of `v`: number of incident items of any kind.
    pub fn valence(&self, v: &str) -> usize {
        self.incidences_at(v).len()
    }

    /// Checks all structural invariants; `strict` adds the pairwise
    /// coprimality of weights at each vertex (a realizability heuristic).
    /// Returns the empty list iff the diagram is valid. Idempotent and
    /// side-effect free.
    pub fn validate(&self, strict: bool) -> Vec<Violation> {
        let mut out = Vec::new();

        let mut seen: BTreeSet<&String> = BTreeSet::new();
        for id in self.all_ids() {
            if !seen.insert(id) {
                out.push(Violation::DuplicateId { id: id.clone() });
            }
        }

        for e in &self.edges {
            for end in [&e.ends.0, &e.ends.1] {
                if !self.has_vertex(end) {
                    out.push(Violation::UnknownVertex {
                        referrer: e.id.clone(),
                        vertex: end.clone(),
                    });
                }
            }
            if e.ends.0 == e.ends.1 {
                out.push(Violation::SelfLoopEdge { edge: e.id.clone() });
            }
            if e.weights.0.is_zero() || e.weights.1.is_zero() {
                out.push(Violation::ZeroWeight { item: e.id.clone() });
            }
        }
        for a in &self.arrows {
            if !self.has_vertex(&a.base) {
                out.push(Violation::UnknownVertex { referrer: a.id.clone(), vertex: a.base.clone() });
            }
            if a.weight.is_zero() {
                out.push(Violation::ZeroWeight { item: a.id.clone() });
            }
        }
        for s in &self.stubs {
            if !self.has_vertex(&s.base) {
                out.push(Violation::UnknownVertex { referrer: s.id.clone(), vertex: s.base.clone() });
            }
            if s.weight.is_zero() {
                out.push(Violation::ZeroWeight { item: s.id.clone() });
            }
        }

        // Forest check: union-find over vertices; an edge joining two
        // already-connected vertices closes a cycle.
        let mut parent: BTreeMap<&String, &String> = BTreeMap::new();
        fn find<'a>(parent: &BTreeMap<&'a String, &'a String>, mut x: &'a String) -> &'a String {
            while let Some(p) = parent.get(x) {
                if *p == x {
                    break;
                }
                x = p;
            }
            x
        }
        for v in &self.vertices {
            parent.insert(v, v);
        }
        for e in &self.edges {
            if !self.has_vertex(&e.ends.0) || !self.has_vertex(&e.ends.1) {
                continue;
            }
            let ra = find(&parent, &e.ends.0);
            let rb = find(&parent, &e.ends.1);
            if ra == rb {
                out.push(Violation::EdgeCycle { edge: e.id.clone() });
            } else {
                parent.insert(ra, rb);
            }
        }

        if strict {
            for v in &self.vertices {
                let inc = self.incidences_at(v);
                for i in 0..inc.len() {
                    for j in (i + 1)..inc.len() {
                        let g = inc[i].weight.gcd(inc[j].weight);
                        if !g.is_one() {
                            out.push(Violation::NonCoprimeWeights {
                                vertex: v.clone(),
                                item_a: inc[i].item_id.clone(),
                                item_b: inc[j].item_id.clone(),
                            });
                        }
                    }
                }
            }
        }

        out
    }

    /// Connected components of the forest. Each part lists its vertices;
    /// arrows and stubs belong to the part of their base vertex.
    pub fn components(&self) -> Vec<BTreeSet<String>> {
        let mut remaining: BTreeSet<&String> = self.vertices.iter().collect();
        let mut out = Vec::new();
        while let Some(start) = remaining.iter().next().copied() {
            let mut comp = BTreeSet::new();
            let mut stack = alloc::vec![start];
            while let Some(v) = stack.pop() {
                if !remaining.remove(v) {
                    continue;
                }
                comp.insert(v.clone());
                for e in &self.edges {
                    if e.ends.0 == *v {
                        stack.push(&e.ends.1);
                    } else if e.ends.1 == *v {
                        stack.push(&e.ends.0);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// The set of vertices reachable from `start` without crossing the edge
    /// `excluded`. This is the "branch" of the forest on `start`'s side.
    pub fn side_of(&self, start: &str, excluded: &str) -> BTreeSet<String> {
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut stack = alloc::vec![String::from(start)];
        while let Some(v) = stack.pop() {
            if !seen.insert(v.clone()) {
                continue;
            }
            for e in &self.edges {
                if e.id == excluded {
                    continue;
                }
                if e.ends.0 == v {
                    stack.push(e.ends.1.clone());
                } else if e.ends.1 == v {
                    stack.push(e.ends.0.clone());
                }
            }
        }
        seen
    }

    /// The sub-diagram induced by a set of vertices: all edges with both
    /// ends inside, all arrows and stubs based inside.
    pub fn restricted_to(&self, keep: &BTreeSet<String>) -> SpliceDiagram {
        SpliceDiagram::new(
            self.vertices.iter().filter(|v| keep.contains(*v)).cloned().collect(),
            self.edges
                .iter()
                .filter(|e| keep.contains(&e.ends.0) && keep.contains(&e.ends.1))
                .cloned()
                .collect(),
            self.arrows.iter().filter(|a| keep.contains(&a.base)).cloned().collect(),
            self.stubs.iter().filter(|s| keep.contains(&s.base)).cloned().collect(),
        )
    }

    /// Disjoint union. Fails with [`Error::DuplicateId`] when id sets collide.
    pub fn disjoint_union(&self, other: &SpliceDiagram) -> Result<SpliceDiagram, Error> {
        let mine: BTreeSet<&String> = self.all_ids().collect();
        if let Some(id) = other.all_ids().find(|id| mine.contains(id)) {
            return Err(Error::DuplicateId { id: id.clone() });
        }
        Ok(SpliceDiagram::new(
            self.vertices.iter().chain(&other.vertices).cloned().collect(),
            self.edges.iter().chain(&other.edges).cloned().collect(),
            self.arrows.iter().chain(&other.arrows).cloned().collect(),
            self.stubs.iter().chain(&other.stubs).cloned().collect(),
        ))
    }

    /// Returns a copy with the given arrow renamed. The new id must be free.
    pub fn with_arrow_renamed(&self, old: &str, new: &str) -> Result<SpliceDiagram, Error> {
        if self.has_id(new) {
            return Err(Error::DuplicateId { id: String::from(new) });
        }
        let mut d = self.clone();
        let arrow = d
            .arrows
            .iter_mut()
            .find(|a| a.id == old)
            .ok_or_else(|| Error::UnknownArrow { id: String::from(old) })?;
        arrow.id = String::from(new);
        d.arrows.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(d)
    }

    /// Returns a copy with the multiplicities replaced by `m`. The domain of
    /// `m` must be exactly the arrow set.
    pub fn with_multiplicities(&self, m: &MultiplicityAssignment) -> Result<SpliceDiagram, Error> {
        if m.values.len() != self.arrows.len()
            || !self.arrows.iter().all(|a| m.values.contains_key(&a.id))
        {
            return Err(Error::MultiplicityDomainMismatch);
        }
        let mut d = self.clone();
        for a in d.arrows.iter_mut() {
            a.multiplicity = m.values[&a.id].clone();
        }
        Ok(d)
    }

    /// True when every arrow multiplicity is zero (also true with no arrows).
    pub fn multiplicities_all_zero(&self) -> bool {
        self.arrows.iter().all(|a| a.multiplicity.is_zero())
    }

    /// Overwrites the multiplicities following the arrows' sorted-id order.
    /// Internal fast path for sweeps.
    pub(crate) fn set_multiplicities_in_order(&mut self, values: &[BigInt]) {
        debug_assert_eq!(values.len(), self.arrows.len());
        for (a, m) in self.arrows.iter_mut().zip(values) {
            a.multiplicity = m.clone();
        }
    }

    /// Resolves an endpoint id to its base vertex.
    fn endpoint_base<'a>(&'a self, e: &'a Endpoint) -> Result<&'a String, Error> {
        match e {
            Endpoint::Vertex(v) => self
                .vertices
                .iter()
                .find(|x| *x == v)
                .ok_or_else(|| Error::UnknownVertex { id: v.clone() }),
            Endpoint::Arrow(a) => self
                .arrow(a)
                .map(|a| &a.base)
                .ok_or_else(|| Error::UnknownArrow { id: a.clone() }),
            Endpoint::Stub(s) => self
                .stub(s)
                .map(|s| &s.base)
                .ok_or_else(|| Error::UnknownId { id: s.clone() }),
        }
    }

    /// The unique tree path between `a` and `b`, both included. For a vertex
    /// paired with itself the path is that single vertex; a leaf paired with
    /// itself is rejected, as is a pair in different components.
    pub fn geodesic(&self, a: &Endpoint, b: &Endpoint) -> Result<DiagramPath, Error> {
        let base_a = self.endpoint_base(a)?.clone();
        let base_b = self.endpoint_base(b)?.clone();

        if a == b {
            return match a {
                Endpoint::Vertex(v) => {
                    Ok(DiagramPath { elements: alloc::vec![PathElement::Vertex(v.clone())] })
                }
                _ => Err(Error::SelfPathOnLeaf),
            };
        }

        // BFS on vertices to find the vertex chain from base_a to base_b.
        let mut prev: BTreeMap<String, (String, String)> = BTreeMap::new(); // v -> (parent, edge)
        let mut queue: Vec<String> = alloc::vec![base_a.clone()];
        let mut seen: BTreeSet<String> = BTreeSet::new();
        seen.insert(base_a.clone());
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head].clone();
            head += 1;
            if v == base_b {
                break;
            }
            for e in &self.edges {
                let next = if e.ends.0 == v {
                    &e.ends.1
                } else if e.ends.1 == v {
                    &e.ends.0
                } else {
                    continue;
                };
                if seen.insert(next.clone()) {
                    prev.insert(next.clone(), (v.clone(), e.id.clone()));
                    queue.push(next.clone());
                }
            }
        }
        if !seen.contains(&base_b) {
            return Err(Error::DifferentComponents);
        }

        let mut chain: Vec<PathElement> = Vec::new();
        let mut cur = base_b.clone();
        chain.push(PathElement::Vertex(cur.clone()));
        while cur != base_a {
            let (p, e) = prev[&cur].clone();
            chain.push(PathElement::Edge(e));
            chain.push(PathElement::Vertex(p.clone()));
            cur = p;
        }
        chain.reverse();

        let lead = |ep: &Endpoint| match ep {
            Endpoint::Vertex(_) => None,
            Endpoint::Arrow(a) => Some(PathElement::Arrow(a.clone())),
            Endpoint::Stub(s) => Some(PathElement::Stub(s.clone())),
        };
        let mut elements = Vec::new();
        if let Some(x) = lead(a) {
            elements.push(x);
        }
        elements.extend(chain);
        if let Some(x) = lead(b) {
            elements.push(x);
        }
        Ok(DiagramPath { elements })
    }
}

impl MultiplicityAssignment {
    /// Extracts the multiplicities currently carried by a diagram's arrows.
    pub fn of(diagram: &SpliceDiagram) -> Self {
        MultiplicityAssignment {
            values: diagram
                .arrows()
                .iter()
                .map(|a| (a.id.clone(), a.multiplicity.clone()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|m| m.is_zero())
    }
}
