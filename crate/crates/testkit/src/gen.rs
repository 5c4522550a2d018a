//! Random annotation graphs.
//!
//! Token text is drawn from a small pool so that hypothesis and reference
//! graphs share surface forms often enough to exercise partial matches.

use proptest::prelude::*;
use radreward::annotation::{AnnotationGraph, Entity, EntityLabel, Relation, RelationLabel};

pub const TOKEN_POOL: [&str; 8] =
    ["opacity", "lobe", "right", "left lower", "effusion", "heart", "pneumothorax", "Mild  Edema"];

/// Plain description of a graph: `(token, label)` per node and
/// `(source, target, relation)` per edge, all as indices.
#[derive(Debug, Clone)]
pub struct GraphSpec {
    pub nodes: Vec<(usize, usize)>,
    pub edges: Vec<(usize, usize, usize)>,
}

impl GraphSpec {
    pub fn build(&self) -> AnnotationGraph {
        self.build_ordered(&(0..self.nodes.len()).collect::<Vec<_>>(), &(0..self.edges.len()).collect::<Vec<_>>())
    }

    /// Builds with entities and relations listed in the given orders.
    pub fn build_ordered(&self, node_order: &[usize], edge_order: &[usize]) -> AnnotationGraph {
        let entities = node_order
            .iter()
            .map(|&i| {
                let (tok, lab) = self.nodes[i];
                Entity::new(format!("e{i}"), TOKEN_POOL[tok], EntityLabel::ALL[lab], i, i).unwrap()
            })
            .collect();
        let relations = edge_order
            .iter()
            .map(|&k| {
                let (s, t, l) = self.edges[k];
                Relation::new(format!("e{s}"), format!("e{t}"), RelationLabel::ALL[l])
            })
            .collect();
        AnnotationGraph::new(Some("g".into()), entities, relations).unwrap()
    }
}

fn dedup_edges(n: usize, raw: Vec<(usize, usize, usize)>) -> Vec<(usize, usize, usize)> {
    let mut out: Vec<(usize, usize, usize)> = Vec::new();
    if n < 2 {
        return out;
    }
    for (s, t, l) in raw {
        let (s, t) = (s % n, t % n);
        if s != t && !out.contains(&(s, t, l)) {
            out.push((s, t, l));
        }
    }
    out
}

pub fn graph_spec(max_nodes: usize) -> impl Strategy<Value = GraphSpec> {
    prop::collection::vec((0..TOKEN_POOL.len(), 0..4usize), 0..=max_nodes).prop_flat_map(|nodes| {
        let n = nodes.len();
        prop::collection::vec((0..16usize, 0..16usize, 0..3usize), 0..=2 * n)
            .prop_map(move |raw| GraphSpec { nodes: nodes.clone(), edges: dedup_edges(n, raw) })
    })
}

pub fn graph(max_nodes: usize) -> impl Strategy<Value = AnnotationGraph> {
    graph_spec(max_nodes).prop_map(|s| s.build())
}

/// A graph spec together with shuffled node and edge orders.
pub fn graph_with_permutation(max_nodes: usize) -> impl Strategy<Value = (GraphSpec, Vec<usize>, Vec<usize>)> {
    graph_spec(max_nodes).prop_flat_map(|s| {
        let nodes = Just((0..s.nodes.len()).collect::<Vec<_>>()).prop_shuffle();
        let edges = Just((0..s.edges.len()).collect::<Vec<_>>()).prop_shuffle();
        (Just(s), nodes, edges)
    })
}
