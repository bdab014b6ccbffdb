//! Deterministic text reports and number formatting shared with the CLI.

use std::fmt::Write;

use thiserror::Error;

use crate::braid::{map_generator, relator_report};
use crate::example::rotating_pair_scene;
use crate::gamma::{abelianize, GammaError};
use crate::kinetic::{flip_word, KineticError, ScanSettings};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Kinetic(#[from] KineticError),
}

/// `x` with 12 significant digits, without trailing zeros.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 {
            "0".to_string()
        } else {
            x.to_string()
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// Abelianized images of the PB₄ relators under `f_4`, and `f_5(b₁₂)`
/// compared with the flip word of the rotating-pair example. Agreement is
/// reported, not asserted.
pub fn consistency_report() -> Result<String, ReportError> {
    let mut out = relator_report(4)?;
    let image = map_generator(1, 2, 5)?;
    let ab_image = abelianize(&image);
    let scene = rotating_pair_scene(1.0);
    let run = flip_word(&scene, &ScanSettings::default())?;
    let ab_flip = abelianize(&run.word);
    let sum = ab_image.add(&ab_flip)?;
    let w = |out: &mut String, line: String| writeln!(out, "{line}").expect("string write");
    w(
        &mut out,
        "# f_5(b12) against the rotating-pair flip word".into(),
    );
    w(&mut out, format!("f_5(b12) = {}", image.to_text()));
    w(
        &mut out,
        format!(
            "f_5(b12) length={} abelian={}",
            image.len(),
            ab_image.bitstring()
        ),
    );
    w(&mut out, format!("flip word = {}", run.word.to_text()));
    let times: Vec<String> = run.events.iter().map(|e| sig12(e.time)).collect();
    w(&mut out, format!("flip times = {}", times.join(" ")));
    w(
        &mut out,
        format!(
            "flip word length={} abelian={}",
            run.word.len(),
            ab_flip.bitstring()
        ),
    );
    w(
        &mut out,
        format!("abelian_difference_weight={}", sum.weight()),
    );
    w(&mut out, format!("abelian_agree={}", sum.is_zero()));
    Ok(out)
}
