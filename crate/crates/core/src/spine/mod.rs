//! The GF(2) Ptolemy algebra of a special spine.
//!
//! Each true vertex of a spine carries a butterfly whose six wings split
//! into three opposite pairs; its Ptolemy relation is the sum of the three
//! pair products. The module builds the ideal of these relations, solves
//! relations that are linear in a cell, and checks the local identities
//! behind invariance under the Matveev–Piergallini and bubble moves.

mod moves;
mod poly;
mod rational;

pub use moves::{
    bubble_move, mp_source_spine, mp_target_spine, verify_mp_move, verify_second_mp_move, MpReport,
    SecondMpReport,
};
pub use poly::{Monomial, PolyGF2};
pub use rational::{substitute_poly, RationalGF2};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpineError {
    #[error("wing references unknown cell {0:?}")]
    UnknownCell(String),
    #[error("cell {0:?} listed twice")]
    DuplicateCell(String),
    #[error("no generator is linear in {0:?}")]
    NotLinear(String),
    #[error("cofactor of {0:?} is zero")]
    ZeroCofactor(String),
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Three pairs of opposite wings at a true vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Butterfly {
    pub pairs: [[String; 2]; 3],
}

impl Butterfly {
    pub fn new(pairs: [[&str; 2]; 3]) -> Butterfly {
        Butterfly {
            pairs: pairs.map(|p| p.map(str::to_string)),
        }
    }

    pub fn wings(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().flatten().map(String::as_str)
    }
}

/// A special spine: its 2-cells and the butterflies at its true vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spine {
    pub cells: Vec<String>,
    pub vertices: Vec<Butterfly>,
    /// Optional count of triple lines, kept for bookkeeping only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple_lines: Option<usize>,
}

impl Spine {
    pub fn new(cells: &[&str], vertices: Vec<Butterfly>) -> Result<Spine, SpineError> {
        let s = Spine {
            cells: cells.iter().map(|c| c.to_string()).collect(),
            vertices,
            triple_lines: None,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Spine, SpineError> {
        let s: Spine = serde_json::from_str(text).map_err(|e| SpineError::Parse(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spine serializes")
    }

    pub fn validate(&self) -> Result<(), SpineError> {
        let mut seen = BTreeSet::new();
        for c in &self.cells {
            if !seen.insert(c.as_str()) {
                return Err(SpineError::DuplicateCell(c.clone()));
            }
        }
        for b in &self.vertices {
            if let Some(w) = b.wings().find(|w| !seen.contains(w)) {
                return Err(SpineError::UnknownCell(w.to_string()));
            }
        }
        Ok(())
    }
}

/// Sum of the three opposite-pair products.
pub fn ptolemy_relation(b: &Butterfly) -> PolyGF2 {
    b.pairs
        .iter()
        .map(|[x, y]| PolyGF2::var(x).mul(&PolyGF2::var(y)))
        .fold(PolyGF2::zero(), |acc, t| acc.add(&t))
}

/// Relations over the variables `cells`. Generators keep vertex order;
/// elimination removes entries from both lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtolemyIdeal {
    pub cells: Vec<String>,
    pub generators: Vec<PolyGF2>,
}

impl PtolemyIdeal {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

pub fn build_ideal(s: &Spine) -> PtolemyIdeal {
    PtolemyIdeal {
        cells: s.cells.clone(),
        generators: s.vertices.iter().map(ptolemy_relation).collect(),
    }
}

/// `cell = value`, solved from `generator`.
#[derive(Debug, Clone)]
pub struct Substitution {
    pub cell: String,
    pub value: RationalGF2,
    pub generator: PolyGF2,
}

impl Substitution {
    /// The removed generator evaluated at the substitution; zero when sound.
    pub fn residual(&self) -> Result<RationalGF2, SpineError> {
        RationalGF2::from_poly(self.generator.clone()).substitute(&self.cell, &self.value)
    }
}

/// Solves `p = 0` for `var` when `p = C·var + R` with `C ≠ 0`: `var = R/C`.
pub fn solve_linear(p: &PolyGF2, var: &str) -> Result<RationalGF2, SpineError> {
    let coeffs = p.coefficients(var);
    match coeffs.as_slice() {
        [_] => Err(SpineError::ZeroCofactor(var.to_string())),
        [rest, cofactor] => RationalGF2::new(rest.clone(), cofactor.clone()),
        _ => Err(SpineError::NotLinear(var.to_string())),
    }
}

/// Solves the first generator that is linear in `cell`, substitutes into
/// the others and clears denominators. Generators that become zero are
/// dropped.
pub fn eliminate(
    ideal: &PtolemyIdeal,
    cell: &str,
) -> Result<(PtolemyIdeal, Substitution), SpineError> {
    if !ideal.cells.iter().any(|c| c == cell) {
        return Err(SpineError::UnknownCell(cell.to_string()));
    }
    let k = ideal
        .generators
        .iter()
        .position(|g| g.degree_in(cell) == 1)
        .ok_or_else(|| SpineError::NotLinear(cell.to_string()))?;
    let generator = ideal.generators[k].clone();
    let value = solve_linear(&generator, cell)?;
    let mut generators = Vec::with_capacity(ideal.generators.len() - 1);
    for (idx, g) in ideal.generators.iter().enumerate() {
        if idx == k {
            continue;
        }
        let cleared = substitute_poly(g, cell, &value).num().primitive();
        if !cleared.is_zero() {
            generators.push(cleared);
        }
    }
    let cells = ideal.cells.iter().filter(|c| *c != cell).cloned().collect();
    Ok((
        PtolemyIdeal { cells, generators },
        Substitution {
            cell: cell.to_string(),
            value,
            generator,
        },
    ))
}

/// Expresses every eliminated cell in the variables that remain free by
/// back-substituting later solutions into earlier ones.
pub fn resolve(record: &[Substitution]) -> Result<BTreeMap<String, RationalGF2>, SpineError> {
    let mut out: BTreeMap<String, RationalGF2> = BTreeMap::new();
    for s in record.iter().rev() {
        let mut v = s.value.clone();
        for (cell, value) in &out {
            v = v.substitute(cell, value)?;
        }
        out.insert(s.cell.clone(), v);
    }
    Ok(out)
}

/// Result of greedy elimination.
#[derive(Debug, Clone)]
pub struct Signature {
    pub free_variables: usize,
    pub eliminated: usize,
    pub residual: PtolemyIdeal,
    pub record: Vec<Substitution>,
}

/// Greedily eliminates the first cell (in cell order) that some generator
/// is linear in, up to `max_steps` times. This is a coarse summary of the
/// fraction field, not a proof of isomorphism.
pub fn stable_class_signature(s: &Spine, max_steps: usize) -> Signature {
    let mut ideal = build_ideal(s);
    let mut record = Vec::new();
    while record.len() < max_steps {
        let next = ideal.cells.iter().find_map(|c| eliminate(&ideal, c).ok());
        let Some((reduced, sub)) = next else {
            break;
        };
        ideal = reduced;
        record.push(sub);
    }
    Signature {
        free_variables: s.cells.len() - record.len(),
        eliminated: record.len(),
        residual: ideal,
        record,
    }
}
