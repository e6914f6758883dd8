//! Grouping of erasures that share a TSCC check.
//!
//! Every check any stage uses lives inside the support of some `W2^f`, so
//! clusters built from those supports can be decoded independently.

use crate::code::TsccCode;

use super::peel::w2_support;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    /// Erased qubits, ascending.
    pub qubits: Vec<usize>,
    /// Faces whose checks touch the cluster, ascending.
    pub faces: Vec<usize>,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        // Keep the smaller index as root so labels follow scan order.
        if ra < rb {
            self.parent[rb as usize] = ra;
        } else if rb < ra {
            self.parent[ra as usize] = rb;
        }
    }
}

/// Clusters of `erased` (ascending), ordered by their lowest qubit.
pub fn cluster(code: &TsccCode, erased: &[usize]) -> Vec<Cluster> {
    if erased.is_empty() {
        return Vec::new();
    }
    let mut slot = vec![u32::MAX; code.n()];
    for (i, &q) in erased.iter().enumerate() {
        slot[q] = i as u32;
    }
    let mut uf = UnionFind::new(erased.len());
    let mut face_hits: Vec<(usize, u32)> = Vec::new();
    for f in 0..code.num_faces() {
        let mut first = None;
        for q in w2_support(code, f) {
            let s = slot[q];
            if s == u32::MAX {
                continue;
            }
            match first {
                None => first = Some(s),
                Some(a) => uf.union(a, s),
            }
        }
        if let Some(a) = first {
            face_hits.push((f, a));
        }
    }

    let mut label = vec![usize::MAX; erased.len()];
    let mut clusters: Vec<Cluster> = Vec::new();
    for (i, &q) in erased.iter().enumerate() {
        let root = uf.find(i as u32) as usize;
        if label[root] == usize::MAX {
            label[root] = clusters.len();
            clusters.push(Cluster {
                qubits: Vec::new(),
                faces: Vec::new(),
            });
        }
        clusters[label[root]].qubits.push(q);
    }
    for (f, a) in face_hits {
        let root = uf.find(a) as usize;
        clusters[label[root]].faces.push(f);
    }
    clusters
}
