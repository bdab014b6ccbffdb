use std::collections::BTreeSet;

use super::{
    build_ideal, eliminate, resolve, Butterfly, PolyGF2, RationalGF2, Spine, SpineError,
    Substitution,
};

/// Solutions for the cells of both sides of a Matveev–Piergallini move.
#[derive(Debug, Clone)]
pub struct MpReport {
    pub x_before: RationalGF2,
    pub y_before: RationalGF2,
    pub x_after: RationalGF2,
    pub y_after: RationalGF2,
    pub z_after: RationalGF2,
    pub record_before: Vec<Substitution>,
    pub record_after: Vec<Substitution>,
}

impl MpReport {
    /// Both sides agree on `x` and `y`, and these match the closed forms
    /// `x = (ad' + by')/c'`, `y = (acd' + ac'd + bcy')/(bc')`.
    pub fn holds(&self) -> bool {
        let (x, y, z) = mp_closed_forms();
        self.x_before == x
            && self.x_after == x
            && self.y_before == y
            && self.y_after == y
            && self.z_after == z
    }
}

fn poly(text: &str) -> PolyGF2 {
    PolyGF2::parse(text).expect("valid literal")
}

fn ratio(num: &str, den: &str) -> RationalGF2 {
    RationalGF2::new(poly(num), poly(den)).expect("nonzero literal")
}

/// Closed forms for `x`, `y` and the new cell `z`.
pub(crate) fn mp_closed_forms() -> (RationalGF2, RationalGF2, RationalGF2) {
    (
        ratio("a*d' + b*y'", "c'"),
        ratio("a*c*d' + a*c'*d + b*c*y'", "b*c'"),
        ratio("c*d' + c'*d", "b"),
    )
}

const SHARED_CELLS: [&str; 9] = ["a", "b", "c", "d", "c'", "d'", "x", "y", "y'"];

/// The two vertices of the move's source side.
pub fn mp_source_spine() -> Spine {
    Spine::new(
        &SHARED_CELLS,
        vec![
            Butterfly::new([["a", "d'"], ["b", "y'"], ["c'", "x"]]),
            Butterfly::new([["a", "d"], ["b", "y"], ["c", "x"]]),
        ],
    )
    .expect("cells listed")
}

/// The three vertices of the move's target side, with the extra cell `z`.
pub fn mp_target_spine() -> Spine {
    let mut cells = SHARED_CELLS.to_vec();
    cells.push("z");
    Spine::new(
        &cells,
        vec![
            Butterfly::new([["b", "z"], ["c", "d'"], ["c'", "d"]]),
            Butterfly::new([["a", "z"], ["c", "y'"], ["c'", "y"]]),
            Butterfly::new([["d", "y'"], ["d'", "y"], ["x", "z"]]),
        ],
    )
    .expect("cells listed")
}

fn eliminate_in_order(spine: &Spine, order: &[&str]) -> Result<Vec<Substitution>, SpineError> {
    let mut ideal = build_ideal(spine);
    let mut record = Vec::new();
    for cell in order {
        let (next, sub) = eliminate(&ideal, cell)?;
        ideal = next;
        record.push(sub);
    }
    if !ideal.is_empty() {
        return Err(SpineError::NotLinear(format!(
            "relations remain after eliminating {order:?}"
        )));
    }
    Ok(record)
}

/// Solves the source side for `x` then `y`, and the target side for `z`,
/// `y`, `x`, then compares the results as rational functions.
pub fn verify_mp_move() -> Result<MpReport, SpineError> {
    let record_before = eliminate_in_order(&mp_source_spine(), &["x", "y"])?;
    let record_after = eliminate_in_order(&mp_target_spine(), &["z", "y", "x"])?;
    let before = resolve(&record_before)?;
    let after = resolve(&record_after)?;
    for s in record_before.iter().chain(&record_after) {
        if !s.residual()?.is_zero() {
            return Err(SpineError::NotLinear(format!(
                "unsound substitution for {}",
                s.cell
            )));
        }
    }
    Ok(MpReport {
        x_before: before["x"].clone(),
        y_before: before["y"].clone(),
        x_after: after["x"].clone(),
        y_after: after["y"].clone(),
        z_after: after["z"].clone(),
        record_before,
        record_after,
    })
}

/// Outcome of the second move's check.
#[derive(Debug, Clone)]
pub struct SecondMpReport {
    /// Sum of the two relations.
    pub difference: PolyGF2,
    pub z: RationalGF2,
    pub forces_b_equal: bool,
}

impl SecondMpReport {
    pub fn holds(&self) -> bool {
        self.forces_b_equal
            && self.z == ratio("a*c + x*y", "b")
            && self.difference == poly("b*z + b'*z")
    }
}

/// Relations `ac + bz + xy` and `ac + b'z + xy`: solving the first for `z`
/// and substituting into the second leaves `(b + b')(ac + xy)`, whose
/// second factor is nonzero, so `b' = b`.
pub fn verify_second_mp_move() -> Result<SecondMpReport, SpineError> {
    let first = poly("a*c + b*z + x*y");
    let second = poly("a*c + b'*z + x*y");
    let z = super::solve_linear(&first, "z")?;
    let substituted = super::substitute_poly(&second, "z", &z);
    let expected = poly("b + b'").mul(&poly("a*c + x*y"));
    let b_equal =
        RationalGF2::from_poly(expected).div(&RationalGF2::from_poly(poly("b")))? == substituted;
    let with_b = super::substitute_poly(&second, "b'", &RationalGF2::var("b"));
    let consistent = super::substitute_poly(with_b.num(), "z", &z).is_zero();
    Ok(SecondMpReport {
        difference: first.add(&second),
        z,
        forces_b_equal: b_equal && consistent,
    })
}

/// Adds two fresh cells and no vertices.
pub fn bubble_move(s: &Spine) -> Spine {
    let taken: BTreeSet<&str> = s.cells.iter().map(String::as_str).collect();
    let fresh: Vec<String> = (1..)
        .map(|k| format!("bubble{k}"))
        .filter(|c| !taken.contains(c.as_str()))
        .take(2)
        .collect();
    let mut out = s.clone();
    out.cells.extend(fresh);
    out
}
