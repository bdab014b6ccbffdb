use std::collections::HashMap;

use crate::kinetic::{Edge, Triangulation};

use super::Level;

/// Admissible colourings of a triangulation's edges, in lexicographic order
/// of the colour vector over the sorted edge list.
#[derive(Debug, Clone)]
pub struct ColouringBasis {
    triangulation: Triangulation,
    edges: Vec<Edge>,
    colourings: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl ColouringBasis {
    pub fn new(triangulation: &Triangulation, level: &Level) -> ColouringBasis {
        let edges: Vec<Edge> = triangulation.edges().into_iter().collect();
        let pos: HashMap<Edge, usize> = edges.iter().enumerate().map(|(k, e)| (*e, k)).collect();
        let tris: Vec<[usize; 3]> = triangulation
            .triangles()
            .map(|t| {
                [
                    pos[&Edge::new(t[0], t[1])],
                    pos[&Edge::new(t[1], t[2])],
                    pos[&Edge::new(t[2], t[0])],
                ]
            })
            .collect();
        // A triangle is checked once its last edge (by position) is assigned.
        let mut closing: Vec<Vec<[usize; 3]>> = vec![Vec::new(); edges.len()];
        for t in &tris {
            closing[*t.iter().max().expect("three edges")].push(*t);
        }
        let mut colourings = Vec::new();
        let mut current = vec![0u32; edges.len()];
        extend(0, &mut current, &closing, level, &mut colourings);
        let index = colourings
            .iter()
            .enumerate()
            .map(|(k, c)| (c.clone(), k))
            .collect();
        ColouringBasis {
            triangulation: triangulation.clone(),
            edges,
            colourings,
            index,
        }
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.colourings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colourings.is_empty()
    }

    pub fn colourings(&self) -> &[Vec<u32>] {
        &self.colourings
    }

    pub fn get(&self, k: usize) -> Option<&[u32]> {
        self.colourings.get(k).map(Vec::as_slice)
    }

    pub fn index_of(&self, colouring: &[u32]) -> Option<usize> {
        self.index.get(colouring).copied()
    }

    pub fn edge_position(&self, edge: Edge) -> Option<usize> {
        self.edges.binary_search(&edge).ok()
    }
}

fn extend(
    k: usize,
    current: &mut Vec<u32>,
    closing: &[Vec<[usize; 3]>],
    level: &Level,
    out: &mut Vec<Vec<u32>>,
) {
    if k == current.len() {
        out.push(current.clone());
        return;
    }
    for c in 0..=level.max_colour() {
        current[k] = c;
        if closing[k]
            .iter()
            .all(|t| level.admissible(current[t[0]], current[t[1]], current[t[2]]))
        {
            extend(k + 1, current, closing, level, out);
        }
    }
}

pub fn enumerate_colourings(triangulation: &Triangulation, level: &Level) -> ColouringBasis {
    ColouringBasis::new(triangulation, level)
}

/// Number of admissible colourings of `triangulation` at level `r`.
pub fn count_colourings(triangulation: &Triangulation, level: &Level) -> usize {
    ColouringBasis::new(triangulation, level).len()
}
