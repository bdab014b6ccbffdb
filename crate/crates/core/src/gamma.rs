//! Word calculus for the groups Γₙ⁴.
//!
//! Generators `d(i,j,k,l)` are indexed by ordered quadruples of distinct
//! points. The dihedral symmetry relation identifies eight orderings of each
//! quadruple; every [`GammaGenerator`] is stored as the lexicographically
//! least member of that orbit, so structural equality is group equality of
//! generators.
//!
//! The word problem for Γₙ⁴ is open. [`abelianize`] is the guaranteed
//! invariant exposed here; [`is_trivial_heuristic`] can only ever certify
//! triviality.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("indices {0:?} are not pairwise distinct")]
    DegenerateTuple(Vec<usize>),
    #[error("point counts differ: {0} vs {1}")]
    MismatchedN(usize, usize),
    #[error("Γ_n^4 needs n >= 4, got {0}")]
    TooFewPoints(usize),
    #[error("cannot parse word token {0:?}")]
    Parse(String),
}

/// A generator `d(i,j,k,l)` in dihedral-canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaGenerator {
    n: usize,
    tuple: [usize; 4],
}

/// The eight images of `(i,j,k,l)` under the symmetry relation.
pub fn symmetry_orbit([i, j, k, l]: [usize; 4]) -> [[usize; 4]; 8] {
    [
        [i, j, k, l],
        [j, i, l, k],
        [k, l, i, j],
        [k, j, i, l],
        [i, l, k, j],
        [j, k, l, i],
        [l, k, j, i],
        [l, i, j, k],
    ]
}

fn check_indices(n: usize, idx: &[usize]) -> Result<(), GammaError> {
    if n < 4 {
        return Err(GammaError::TooFewPoints(n));
    }
    for &x in idx {
        if x == 0 || x > n {
            return Err(GammaError::IndexOutOfRange { index: x, n });
        }
    }
    for a in 0..idx.len() {
        for b in a + 1..idx.len() {
            if idx[a] == idx[b] {
                return Err(GammaError::DegenerateTuple(idx.to_vec()));
            }
        }
    }
    Ok(())
}

/// Returns the canonical generator for `tuple`, the least element of its
/// symmetry orbit.
pub fn canonicalize_generator(n: usize, tuple: [usize; 4]) -> Result<GammaGenerator, GammaError> {
    check_indices(n, &tuple)?;
    let tuple = symmetry_orbit(tuple)
        .into_iter()
        .min()
        .expect("orbit is non-empty");
    Ok(GammaGenerator { n, tuple })
}

impl GammaGenerator {
    pub fn new(n: usize, tuple: [usize; 4]) -> Result<Self, GammaError> {
        canonicalize_generator(n, tuple)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tuple(&self) -> [usize; 4] {
        self.tuple
    }

    fn support(&self) -> [usize; 4] {
        let mut s = self.tuple;
        s.sort_unstable();
        s
    }
}

impl fmt::Display for GammaGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k, l] = self.tuple;
        write!(f, "d({i},{j},{k},{l})")
    }
}

/// True iff the supports of `g` and `h` share fewer than three points.
pub fn commutes(g: &GammaGenerator, h: &GammaGenerator) -> Result<bool, GammaError> {
    if g.n != h.n {
        return Err(GammaError::MismatchedN(g.n, h.n));
    }
    Ok(support_overlap(g, h) < 3)
}

fn support_overlap(g: &GammaGenerator, h: &GammaGenerator) -> usize {
    let hs = h.support();
    g.support().iter().filter(|x| hs.contains(x)).count()
}

/// A word in the generators of Γₙ⁴. Letters are involutions, so a word's
/// inverse is its reversal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaWord {
    n: usize,
    letters: Vec<GammaGenerator>,
}

impl GammaWord {
    pub fn identity(n: usize) -> Self {
        GammaWord {
            n,
            letters: Vec::new(),
        }
    }

    pub fn from_letters(n: usize, letters: Vec<GammaGenerator>) -> Result<Self, GammaError> {
        if let Some(bad) = letters.iter().find(|g| g.n != n) {
            return Err(GammaError::MismatchedN(n, bad.n));
        }
        Ok(GammaWord { n, letters })
    }

    /// Builds a word from raw quadruples, canonicalizing each letter.
    pub fn from_tuples(n: usize, tuples: &[[usize; 4]]) -> Result<Self, GammaError> {
        let letters = tuples
            .iter()
            .map(|&t| canonicalize_generator(n, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GammaWord { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[GammaGenerator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, g: GammaGenerator) -> Result<(), GammaError> {
        if g.n != self.n {
            return Err(GammaError::MismatchedN(self.n, g.n));
        }
        self.letters.push(g);
        Ok(())
    }

    /// Concatenation `self · other`, without reduction.
    pub fn concat(&self, other: &GammaWord) -> Result<GammaWord, GammaError> {
        if self.n != other.n {
            return Err(GammaError::MismatchedN(self.n, other.n));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(GammaWord { n: self.n, letters })
    }

    pub fn inverse(&self) -> GammaWord {
        let mut letters = self.letters.clone();
        letters.reverse();
        GammaWord { n: self.n, letters }
    }

    /// Text form: whitespace-separated `d(i,j,k,l)` tokens; empty for the identity.
    pub fn to_text(&self) -> String {
        self.letters
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses the text form. Letters are canonicalized on the way in.
    pub fn parse(n: usize, text: &str) -> Result<GammaWord, GammaError> {
        let mut letters = Vec::new();
        for token in tokenize_letters(text)? {
            letters.push(parse_letter(n, &token)?);
        }
        Ok(GammaWord { n, letters })
    }
}

impl fmt::Display for GammaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

// Splits on whitespace outside parentheses so that `d(1, 2, 3, 4)` survives.
fn tokenize_letters(text: &str) -> Result<Vec<String>, GammaError> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(GammaError::Parse(text.to_string()));
                }
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(GammaError::Parse(text.to_string()));
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    Ok(tokens)
}

fn parse_letter(n: usize, token: &str) -> Result<GammaGenerator, GammaError> {
    let inner = token
        .strip_prefix("d(")
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| GammaError::Parse(token.to_string()))?;
    let idx: Vec<usize> = inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| GammaError::Parse(token.to_string()))
        })
        .collect::<Result<_, _>>()?;
    let tuple: [usize; 4] = idx
        .try_into()
        .map_err(|_| GammaError::Parse(token.to_string()))?;
    canonicalize_generator(n, tuple)
}

impl FromStr for GammaGenerator {
    type Err = GammaError;

    /// Parses `d(i,j,k,l)` with `n` taken as the largest index (at least 4).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let g = parse_letter(usize::MAX, s.trim())?;
        let n = g.tuple.iter().copied().max().unwrap_or(4).max(4);
        Ok(GammaGenerator { n, tuple: g.tuple })
    }
}

/// Deletes adjacent equal letters until none remain.
pub fn free_reduce(w: &GammaWord) -> GammaWord {
    let mut out: Vec<GammaGenerator> = Vec::with_capacity(w.letters.len());
    for &g in &w.letters {
        if out.last() == Some(&g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    GammaWord {
        n: w.n,
        letters: out,
    }
}

/// The pentagon relator `d(ijkl) d(ijlm) d(jklm) d(ijkm) d(iklm)`.
pub fn pentagon_word(idx: [usize; 5], n: usize) -> Result<GammaWord, GammaError> {
    check_indices(n, &idx)?;
    let [i, j, k, l, m] = idx;
    GammaWord::from_tuples(
        n,
        &[
            [i, j, k, l],
            [i, j, l, m],
            [j, k, l, m],
            [i, j, k, m],
            [i, k, l, m],
        ],
    )
}

/// All canonical generators for `n` points, sorted lexicographically. There
/// are `3·C(n,4)` of them.
pub fn canonical_classes(n: usize) -> Vec<GammaGenerator> {
    let mut out = Vec::new();
    if n < 4 {
        return out;
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for l in 1..=n {
                    if i == j || i == k || i == l || j == k || j == l || k == l {
                        continue;
                    }
                    let t = [i, j, k, l];
                    if symmetry_orbit(t).into_iter().min() == Some(t) {
                        out.push(GammaGenerator { n, tuple: t });
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn ordered_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in 1..=n {
            if !cur.contains(&x) {
                cur.push(x);
                rec(n, len, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, len, &mut Vec::with_capacity(len), &mut out);
    out
}

type Bits = Vec<u64>;

fn bit_get(b: &Bits, i: usize) -> bool {
    (b[i / 64] >> (i % 64)) & 1 == 1
}

fn bit_flip(b: &mut Bits, i: usize) {
    b[i / 64] ^= 1u64 << (i % 64);
}

fn xor_into(dst: &mut Bits, src: &Bits) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// Precomputed class ordering and pentagon row space for one `n`.
#[derive(Debug)]
pub struct PentagonSubspace {
    n: usize,
    classes: Vec<GammaGenerator>,
    class_index: HashMap<GammaGenerator, usize>,
    /// Echelon rows keyed by their leading (lowest) bit, sorted by pivot.
    rows: Vec<(usize, Bits)>,
}

impl PentagonSubspace {
    fn build(n: usize) -> Self {
        let classes = canonical_classes(n);
        let class_index: HashMap<_, _> = classes.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        let words = classes.len().div_ceil(64);
        let mut seen: HashSet<Bits> = HashSet::new();
        let mut pivots: HashMap<usize, Bits> = HashMap::new();
        if n >= 5 {
            for t in ordered_tuples(n, 5) {
                let w = pentagon_word([t[0], t[1], t[2], t[3], t[4]], n).expect("distinct indices");
                let mut v = vec![0u64; words];
                for g in w.letters() {
                    bit_flip(&mut v, class_index[g]);
                }
                if !seen.insert(v.clone()) {
                    continue;
                }
                // Insert into the echelon form.
                loop {
                    let lead = (0..classes.len()).find(|&i| bit_get(&v, i));
                    match lead {
                        None => break,
                        Some(p) => match pivots.get(&p) {
                            Some(row) => xor_into(&mut v, row),
                            None => {
                                pivots.insert(p, v);
                                break;
                            }
                        },
                    }
                }
            }
        }
        let mut rows: Vec<(usize, Bits)> = pivots.into_iter().collect();
        rows.sort_by_key(|(p, _)| *p);
        PentagonSubspace {
            n,
            classes,
            class_index,
            rows,
        }
    }

    /// Shared, lazily built table for `n`.
    pub fn for_n(n: usize) -> Arc<PentagonSubspace> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PentagonSubspace>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("pentagon cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(PentagonSubspace::build(n)))
            .clone()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[GammaGenerator] {
        &self.classes
    }

    /// Dimension of the pentagon row space.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut Bits) {
        for (p, row) in &self.rows {
            if bit_get(v, *p) {
                xor_into(v, row);
            }
        }
    }
}

/// Image of a word in the GF(2) abelianization, as the reduced
/// representative modulo the pentagon row space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianVector {
    n: usize,
    bits: Vec<bool>,
}

impl AbelianVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    /// Sum in GF(2). Both operands are already reduced, and the reduction is
    /// linear, so the sum is reduced as well.
    pub fn add(&self, other: &AbelianVector) -> Result<AbelianVector, GammaError> {
        if self.n != other.n {
            return Err(GammaError::MismatchedN(self.n, other.n));
        }
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(AbelianVector { n: self.n, bits })
    }

    pub fn bitstring(&self) -> String {
        self.bits
            .iter()
            .map(|b| if *b { '1' } else { '0' })
            .collect()
    }

    /// Two lines: the class ordering header, then the bitstring.
    pub fn to_text(&self) -> String {
        let sub = PentagonSubspace::for_n(self.n);
        let header: Vec<String> = sub.classes.iter().map(|g| g.to_string()).collect();
        format!(
            "# n={} classes: {}\n{}",
            self.n,
            header.join(" "),
            self.bitstring()
        )
    }
}

/// GF(2) abelianization of `w` modulo the pentagon relators.
pub fn abelianize(w: &GammaWord) -> AbelianVector {
    let sub = PentagonSubspace::for_n(w.n);
    let words = sub.classes.len().div_ceil(64);
    let mut v = vec![0u64; words];
    for g in &w.letters {
        bit_flip(&mut v, sub.class_index[g]);
    }
    sub.reduce(&mut v);
    let bits = (0..sub.classes.len()).map(|i| bit_get(&v, i)).collect();
    AbelianVector { n: w.n, bits }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    Unknown,
}

/// Rewriting tables for the pentagon substitutions.
struct PentagonMoves {
    /// Four consecutive letters of a relator rotation, mapped to the letter they equal.
    contract: HashMap<[GammaGenerator; 4], GammaGenerator>,
    /// For each letter, the four-letter words equal to it.
    expand: HashMap<GammaGenerator, Vec<[GammaGenerator; 4]>>,
}

impl PentagonMoves {
    fn for_n(n: usize) -> Arc<PentagonMoves> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PentagonMoves>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("pentagon move cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(PentagonMoves::build(n)))
            .clone()
    }

    fn build(n: usize) -> Self {
        let mut contract = HashMap::new();
        let mut expand: HashMap<GammaGenerator, HashSet<[GammaGenerator; 4]>> = HashMap::new();
        if n >= 5 {
            for t in ordered_tuples(n, 5) {
                let w = pentagon_word([t[0], t[1], t[2], t[3], t[4]], n).expect("distinct indices");
                let fwd = w.letters().to_vec();
                let mut rev = fwd.clone();
                rev.reverse();
                for rel in [fwd, rev] {
                    for s in 0..5 {
                        let window = [rel[s], rel[(s + 1) % 5], rel[(s + 2) % 5], rel[(s + 3) % 5]];
                        let rest = rel[(s + 4) % 5];
                        contract.insert(window, rest);
                        expand.entry(rest).or_default().insert(window);
                    }
                }
            }
        }
        let expand = expand
            .into_iter()
            .map(|(k, v)| {
                let mut v: Vec<_> = v.into_iter().collect();
                v.sort();
                (k, v)
            })
            .collect();
        PentagonMoves { contract, expand }
    }
}

/// Searches for a derivation of the empty word using free cancellation,
/// far-commutation swaps and pentagon substitutions (four letters of a relator
/// replaced by the fifth, or the reverse). `effort` caps the number of words
/// expanded. Never reports non-triviality.
pub fn is_trivial_heuristic(w: &GammaWord, effort: usize) -> Triviality {
    let start = free_reduce(w);
    if start.is_empty() {
        return Triviality::Trivial;
    }
    // Pentagon moves preserve the abelian image, so a nonzero image settles it.
    if !abelianize(&start).is_zero() {
        return Triviality::Unknown;
    }
    let moves = PentagonMoves::for_n(w.n);
    let n = w.n;
    let mut seen: HashSet<Vec<GammaGenerator>> = HashSet::new();
    let mut queue: BinaryHeap<Reverse<(usize, usize, Vec<GammaGenerator>)>> = BinaryHeap::new();
    let mut tick = 0usize;
    seen.insert(start.letters.clone());
    queue.push(Reverse((start.len(), tick, start.letters)));
    let mut expanded = 0usize;

    while let Some(Reverse((_, _, word))) = queue.pop() {
        if expanded >= effort {
            break;
        }
        expanded += 1;
        let mut push = |cand: Vec<GammaGenerator>| -> bool {
            let reduced = free_reduce(&GammaWord { n, letters: cand }).letters;
            if reduced.is_empty() {
                return true;
            }
            if seen.insert(reduced.clone()) {
                tick += 1;
                queue.push(Reverse((reduced.len(), tick, reduced)));
            }
            false
        };
        for p in 0..word.len().saturating_sub(1) {
            let (a, b) = (word[p], word[p + 1]);
            if a != b && support_overlap(&a, &b) < 3 {
                let mut c = word.clone();
                c.swap(p, p + 1);
                if push(c) {
                    return Triviality::Trivial;
                }
            }
        }
        for p in 0..word.len().saturating_sub(3) {
            let window = [word[p], word[p + 1], word[p + 2], word[p + 3]];
            if let Some(&g) = moves.contract.get(&window) {
                let mut c = word[..p].to_vec();
                c.push(g);
                c.extend_from_slice(&word[p + 4..]);
                if push(c) {
                    return Triviality::Trivial;
                }
            }
        }
        for p in 0..word.len() {
            if let Some(options) = moves.expand.get(&word[p]) {
                for window in options {
                    let mut c = word[..p].to_vec();
                    c.extend_from_slice(window);
                    c.extend_from_slice(&word[p + 1..]);
                    if push(c) {
                        return Triviality::Trivial;
                    }
                }
            }
        }
    }
    Triviality::Unknown
}
