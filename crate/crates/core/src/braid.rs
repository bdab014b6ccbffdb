//! Pure braid words and the homomorphism `f_n: PB_n -> Γ_n^4`.
//!
//! The factor products are implemented literally. Their printed index ranges
//! can leave `1..=n` or repeat an index; such factors are skipped and listed
//! in [`GammaFactor::skipped`]. In the second factor the inner product index
//! does not occur in the factor, so the factor is emitted once per outer
//! index whenever the inner range is non-empty.

use std::fmt;

use crate::gamma::{
    abelianize, canonicalize_generator, free_reduce, GammaError, GammaGenerator, GammaWord,
};

/// `b_ij^{±1}` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BraidGenerator {
    i: usize,
    j: usize,
    inverse: bool,
}

impl BraidGenerator {
    pub fn new(i: usize, j: usize, exponent: i32) -> Result<Self, GammaError> {
        if i == 0 || j == 0 || i >= j || (exponent != 1 && exponent != -1) {
            return Err(GammaError::Parse(format!("b({i},{j})^{exponent}")));
        }
        Ok(BraidGenerator {
            i,
            j,
            inverse: exponent == -1,
        })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn exponent(&self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        BraidGenerator {
            inverse: !self.inverse,
            ..self
        }
    }
}

impl fmt::Display for BraidGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i < 10 && self.j < 10 {
            write!(f, "b{}{}", self.i, self.j)?;
        } else {
            write!(f, "b({},{})", self.i, self.j)?;
        }
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    n: usize,
    letters: Vec<BraidGenerator>,
}

impl BraidWord {
    pub fn identity(n: usize) -> Self {
        BraidWord {
            n,
            letters: Vec::new(),
        }
    }

    pub fn new(n: usize, letters: Vec<BraidGenerator>) -> Result<Self, GammaError> {
        for g in &letters {
            if g.j > n {
                return Err(GammaError::IndexOutOfRange { index: g.j, n });
            }
        }
        Ok(BraidWord { n, letters })
    }

    /// Shorthand for tests and relator tables: `(i, j, ±1)` triples.
    pub fn from_triples(n: usize, triples: &[(usize, usize, i32)]) -> Result<Self, GammaError> {
        let letters = triples
            .iter()
            .map(|&(i, j, e)| BraidGenerator::new(i, j, e))
            .collect::<Result<Vec<_>, _>>()?;
        BraidWord::new(n, letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[BraidGenerator] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, GammaError> {
        if self.n != other.n {
            return Err(GammaError::MismatchedN(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { n: self.n, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        let letters = self.letters.iter().rev().map(|g| g.inv()).collect();
        BraidWord { n: self.n, letters }
    }

    /// Parses tokens `bij`, `bij^-1`, and `b(i,j)` / `b(i,j)^-1` for indices
    /// above 9.
    pub fn parse(n: usize, text: &str) -> Result<BraidWord, GammaError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            letters.push(parse_braid_token(token)?);
        }
        BraidWord::new(n, letters)
    }

    pub fn to_text(&self) -> String {
        self.letters
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_braid_token(token: &str) -> Result<BraidGenerator, GammaError> {
    let bad = || GammaError::Parse(token.to_string());
    let body = token.strip_prefix('b').ok_or_else(bad)?;
    let (body, exponent) = match body.strip_suffix("^-1") {
        Some(b) => (b, -1),
        None => (body.strip_suffix("^1").unwrap_or(body), 1),
    };
    let (i, j) = if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
        let mut parts = inner.split(',').map(|s| s.trim().parse::<usize>());
        match (parts.next(), parts.next(), parts.next()) {
            (Some(Ok(i)), Some(Ok(j)), None) => (i, j),
            _ => return Err(bad()),
        }
    } else {
        let digits: Vec<u32> = body
            .chars()
            .map(|c| c.to_digit(10))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        if digits.len() != 2 {
            return Err(bad());
        }
        (digits[0] as usize, digits[1] as usize)
    };
    BraidGenerator::new(i, j, exponent).map_err(|_| bad())
}

/// Relators `u·v⁻¹` for every equality `u = v` in the standard presentation
/// of `PB_n`, in the order: far commutations, triple relations, quadruple
/// relations.
pub fn pb_relator_words(n: usize) -> Vec<BraidWord> {
    let b = |i: usize, j: usize| BraidGenerator {
        i,
        j,
        inverse: false,
    };
    let relator = |u: Vec<BraidGenerator>, v: Vec<BraidGenerator>| {
        let u = BraidWord { n, letters: u };
        let v = BraidWord { n, letters: v };
        u.concat(&v.inverse()).expect("same n")
    };
    let mut out = Vec::new();
    // b_ij b_kl = b_kl b_ij for i<j<k<l or i<k<l<j.
    for i in 1..=n {
        for j in i + 1..=n {
            for k in i + 1..=n {
                for l in k + 1..=n {
                    if (j < k) || (l < j) {
                        out.push(relator(vec![b(i, j), b(k, l)], vec![b(k, l), b(i, j)]));
                    }
                }
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let u = vec![b(i, j), b(i, k), b(j, k)];
                let v = vec![b(i, k), b(j, k), b(i, j)];
                let w = vec![b(j, k), b(i, j), b(i, k)];
                out.push(relator(u, v.clone()));
                out.push(relator(v, w));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    out.push(relator(
                        vec![b(i, k), b(j, k), b(j, l), b(j, k)],
                        vec![b(j, k), b(j, l), b(j, k), b(i, k)],
                    ));
                }
            }
        }
    }
    out
}

/// The generator `d{p,q,(r,s)_s}`: four points on a circle in the order of
/// `p, q, s`, with `r` placed just before `s`.
pub fn selector_d(
    p: usize,
    q: usize,
    r: usize,
    s: usize,
    n: usize,
) -> Result<GammaGenerator, GammaError> {
    selector_tuple(p, q, r, s, s, n)
}

/// `d{p,q,(s,r)_s}`: same case split on `p, q, s` as [`selector_d`], with
/// the placements of `r` and `s` exchanged.
pub fn selector_d_swapped(
    p: usize,
    q: usize,
    r: usize,
    s: usize,
    n: usize,
) -> Result<GammaGenerator, GammaError> {
    selector_tuple(p, q, s, r, s, n)
}

// `first, second` fill the two adjacent slots; `pivot` drives the case split.
fn selector_tuple(
    p: usize,
    q: usize,
    first: usize,
    second: usize,
    pivot: usize,
    n: usize,
) -> Result<GammaGenerator, GammaError> {
    let (r, s) = (first, second);
    let t = if p < q && q < pivot {
        [p, q, r, s]
    } else if p < pivot && pivot < q {
        [p, r, s, q]
    } else if pivot < p && p < q {
        [r, s, p, q]
    } else if q < p && p < pivot {
        [q, p, r, s]
    } else if q < pivot && pivot < p {
        [q, r, s, p]
    } else {
        // pivot < q < p, or a repeated index which canonicalization rejects.
        [r, s, q, p]
    };
    canonicalize_generator(n, t)
}

/// Which factor product a skipped term came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorPart {
    First,
    Second,
    Third,
}

/// A term `d{p,q,(moving,fixed)_fixed}` dropped because its indices are not
/// four distinct values in `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkippedFactor {
    pub part: FactorPart,
    pub p: i64,
    pub q: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaFactor {
    pub first: GammaWord,
    pub second: GammaWord,
    pub third: GammaWord,
    pub skipped: Vec<SkippedFactor>,
}

impl GammaFactor {
    /// `second · first · third`.
    pub fn word(&self) -> GammaWord {
        self.second
            .concat(&self.first)
            .and_then(|w| w.concat(&self.third))
            .expect("factors share n")
    }
}

/// Expands `γ_{·,(moving, fixed)}` as three products of selector terms.
/// The point `moving` turns around `fixed`.
pub fn gamma_factor_parts(
    moving: usize,
    fixed: usize,
    n: usize,
) -> Result<GammaFactor, GammaError> {
    for x in [moving, fixed] {
        if x == 0 || x > n {
            return Err(GammaError::IndexOutOfRange { index: x, n });
        }
    }
    if moving == fixed {
        return Err(GammaError::DegenerateTuple(vec![moving, fixed]));
    }
    let (ni, fi, mi) = (n as i64, fixed as i64, moving as i64);
    let mut skipped = Vec::new();
    let mut emit = |word: &mut GammaWord, part: FactorPart, a: i64, b: i64, p: i64, q: i64| {
        let ok = [a, b].iter().all(|&x| x >= 1 && x <= ni)
            && a != b
            && ![a, b].contains(&mi)
            && ![a, b].contains(&fi);
        if ok {
            let g = selector_d(a as usize, b as usize, moving, fixed, n)
                .expect("checked distinct and in range");
            word.push(g).expect("same n");
        } else {
            skipped.push(SkippedFactor { part, p, q });
        }
    };

    let mut first = GammaWord::identity(n);
    for p in 2..fi {
        for q in 1..p {
            emit(&mut first, FactorPart::First, p, q, p, q);
        }
    }

    let mut second = GammaWord::identity(n);
    if ni - fi >= 1 {
        for p in 1..fi {
            emit(&mut second, FactorPart::Second, fi - p, fi + p, p, 1);
        }
    }

    let mut third = GammaWord::identity(n);
    for p in 1..=(ni - fi + 1) {
        for q in 0..=(ni - p + 1) {
            emit(&mut third, FactorPart::Third, ni - p, ni - q, p, q);
        }
    }

    Ok(GammaFactor {
        first,
        second,
        third,
        skipped,
    })
}

/// `γ_{·,(moving, fixed)} = γ^II · γ^I · γ^III`.
pub fn gamma_factor(moving: usize, fixed: usize, n: usize) -> Result<GammaWord, GammaError> {
    Ok(gamma_factor_parts(moving, fixed, n)?.word())
}

/// Image of a single positive generator `b_ij`.
pub fn map_generator(i: usize, j: usize, n: usize) -> Result<GammaWord, GammaError> {
    if i == 0 || j > n || i >= j {
        return Err(GammaError::IndexOutOfRange {
            index: if i == 0 { i } else { j },
            n,
        });
    }
    let mut w = GammaWord::identity(n);
    for k in i + 1..=j {
        w = w.concat(&gamma_factor(i, k, n)?)?;
    }
    w = w.concat(&gamma_factor(j, i, n)?)?;
    for k in (i + 1..j).rev() {
        w = w.concat(&gamma_factor(k, i, n)?.inverse())?;
    }
    Ok(w)
}

/// `f_n` applied letter by letter, then freely reduced.
pub fn map_f(w: &BraidWord) -> Result<GammaWord, GammaError> {
    let n = w.n;
    let mut out = GammaWord::identity(n);
    for g in &w.letters {
        let img = map_generator(g.i, g.j, n)?;
        let img = if g.inverse { img.inverse() } else { img };
        out = out.concat(&img)?;
    }
    Ok(free_reduce(&out))
}

/// One line per relator of `PB_n`: whether its image under `f_n` vanishes in
/// the abelianization, plus a summary of skipped factor terms.
pub fn relator_report(n: usize) -> Result<String, GammaError> {
    let mut out = String::new();
    let relators = pb_relator_words(n);
    let mut zero = 0usize;
    out.push_str(&format!(
        "# PB_{n} relators under f_{n}: {} relators\n",
        relators.len()
    ));
    for (k, rel) in relators.iter().enumerate() {
        let img = map_f(rel)?;
        let ab = abelianize(&img);
        if ab.is_zero() {
            zero += 1;
        }
        out.push_str(&format!(
            "relator {k}: [{}] image_len={} abelian_weight={} abelian_zero={}\n",
            rel.to_text(),
            img.len(),
            ab.weight(),
            ab.is_zero()
        ));
    }
    out.push_str(&format!("abelian_zero_count={zero}/{}\n", relators.len()));
    for moving in 1..=n {
        for fixed in 1..=n {
            if moving == fixed {
                continue;
            }
            let parts = gamma_factor_parts(moving, fixed, n)?;
            let count = |part| parts.skipped.iter().filter(|s| s.part == part).count();
            out.push_str(&format!(
                "factor ({moving},{fixed}): emitted={}/{}/{} skipped={}/{}/{}\n",
                parts.first.len(),
                parts.second.len(),
                parts.third.len(),
                count(FactorPart::First),
                count(FactorPart::Second),
                count(FactorPart::Third)
            ));
        }
    }
    Ok(out)
}
