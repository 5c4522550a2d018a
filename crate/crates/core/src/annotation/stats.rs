use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use serde::{Serialize, Serializer};

use super::{AnnotationGraph, EntityLabel, RelationLabel};

/// Entity and relation counts per label over a corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphStats {
    pub entities: [usize; 4],
    pub relations: [usize; 3],
}

impl GraphStats {
    pub fn entity_count(&self, label: EntityLabel) -> usize {
        self.entities[label.index()]
    }

    pub fn relation_count(&self, label: RelationLabel) -> usize {
        self.relations[label.index()]
    }

    /// All seven counts keyed by label string.
    pub fn as_map(&self) -> BTreeMap<&'static str, usize> {
        let ents = EntityLabel::ALL.iter().map(|&l| (l.as_str(), self.entity_count(l)));
        let rels = RelationLabel::ALL.iter().map(|&l| (l.as_str(), self.relation_count(l)));
        ents.chain(rels).collect()
    }
}

impl AddAssign for GraphStats {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.entities.iter_mut().zip(rhs.entities) {
            *a += b;
        }
        for (a, b) in self.relations.iter_mut().zip(rhs.relations) {
            *a += b;
        }
    }
}

impl Add for GraphStats {
    type Output = GraphStats;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl Serialize for GraphStats {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.as_map().serialize(serializer)
    }
}

pub fn graph_stats<'a, I>(corpus: I) -> GraphStats
where
    I: IntoIterator<Item = &'a AnnotationGraph>,
{
    let mut stats = GraphStats::default();
    for g in corpus {
        for e in g.entities() {
            stats.entities[e.label.index()] += 1;
        }
        for r in g.relations() {
            stats.relations[r.label.index()] += 1;
        }
    }
    stats
}
