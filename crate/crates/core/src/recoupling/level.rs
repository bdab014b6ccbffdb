use std::f64::consts::PI;

use num_complex::Complex64;

use super::RecouplingError;

/// Quantum parameters at `q = e^{iπ/r}`.
///
/// Quantum integers `[n] = sin(nπ/r)/sin(π/r)` are real; `[n]` is set to
/// exactly zero when `r | n`. Factorials are cached products of quantum
/// integers, so `[n]! = 0` exactly for `n >= r`.
#[derive(Debug, Clone)]
pub struct Level {
    r: u32,
    q: Complex64,
    ints: Vec<f64>,
    facts: Vec<f64>,
}

impl Level {
    pub fn new(r: u32) -> Result<Level, RecouplingError> {
        if r < 3 {
            return Err(RecouplingError::InvalidLevel(r));
        }
        let cap = 3 * r as usize + 4;
        let s1 = (PI / r as f64).sin();
        let ints: Vec<f64> = (0..=cap)
            .map(|n| {
                if n % r as usize == 0 {
                    0.0
                } else {
                    (n as f64 * PI / r as f64).sin() / s1
                }
            })
            .collect();
        let mut facts = vec![1.0; cap + 1];
        for n in 1..=cap {
            facts[n] = facts[n - 1] * ints[n];
        }
        Ok(Level {
            r,
            q: Complex64::from_polar(1.0, PI / r as f64),
            ints,
            facts,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    /// Largest colour that can appear in an admissible triple, `r − 2`.
    pub fn max_colour(&self) -> u32 {
        self.r - 2
    }

    pub fn quantum_int(&self, n: u32) -> f64 {
        match self.ints.get(n as usize) {
            Some(v) => *v,
            None if n.is_multiple_of(self.r) => 0.0,
            None => (n as f64 * PI / self.r as f64).sin() / (PI / self.r as f64).sin(),
        }
    }

    fn fact(&self, n: u32) -> f64 {
        self.facts[n as usize]
    }

    /// Denominator factorial; zero would mean an inadmissible network.
    fn fact_nonzero(&self, n: u32) -> Result<f64, RecouplingError> {
        if n >= self.r {
            return Err(RecouplingError::VanishingDenominator(n));
        }
        Ok(self.facts[n as usize])
    }

    /// Parity, triangle inequalities, and `a + b + c <= 2r − 4`.
    pub fn admissible(&self, a: u32, b: u32, c: u32) -> bool {
        (a + b + c).is_multiple_of(2)
            && a + b >= c
            && b + c >= a
            && a + c >= b
            && a + b + c <= 2 * self.r - 4
    }

    /// Loop value `Δ_n = (−1)^n [n+1]`.
    pub fn delta(&self, n: u32) -> f64 {
        sign(n) * self.quantum_int(n + 1)
    }

    /// Theta network value.
    pub fn theta(&self, a: u32, b: u32, c: u32) -> Result<f64, RecouplingError> {
        if !self.admissible(a, b, c) {
            return Err(RecouplingError::InadmissibleLabels(vec![a, b, c]));
        }
        let m = (a + b - c) / 2;
        let n = (b + c - a) / 2;
        let p = (a + c - b) / 2;
        let num = self.fact(m + n + p + 1) * self.fact(m) * self.fact(n) * self.fact(p);
        let den =
            self.fact_nonzero(m + n)? * self.fact_nonzero(n + p)? * self.fact_nonzero(m + p)?;
        Ok(sign(m + n + p) * num / den)
    }

    /// Tetrahedral network with faces `(a,d,e), (b,c,e), (a,b,f), (c,d,f)`.
    /// Opposite edge pairs are `(a,c)`, `(b,d)` and `(e,f)`.
    pub fn tet(
        &self,
        a: u32,
        b: u32,
        e: u32,
        c: u32,
        d: u32,
        f: u32,
    ) -> Result<f64, RecouplingError> {
        for t in [[a, d, e], [b, c, e], [a, b, f], [c, d, f]] {
            if !self.admissible(t[0], t[1], t[2]) {
                return Err(RecouplingError::InadmissibleLabels(vec![a, b, e, c, d, f]));
            }
        }
        let lower = [
            (a + d + e) / 2,
            (b + c + e) / 2,
            (a + b + f) / 2,
            (c + d + f) / 2,
        ];
        let upper = [
            (b + d + e + f) / 2,
            (a + c + e + f) / 2,
            (a + b + c + d) / 2,
        ];
        let mut inner = 1.0;
        for &u in &upper {
            for &l in &lower {
                inner *= self.fact_nonzero(u - l)?;
            }
        }
        let mut edges = 1.0;
        for x in [a, b, c, d, e, f] {
            edges *= self.fact_nonzero(x)?;
        }
        let lo = *lower.iter().max().expect("four faces");
        let hi = *upper.iter().min().expect("three quads");
        let mut sum = 0.0;
        for s in lo..=hi {
            let mut den = 1.0;
            for &l in &lower {
                den *= self.fact_nonzero(s - l)?;
            }
            for &u in &upper {
                den *= self.fact_nonzero(u - s)?;
            }
            sum += sign(s) * self.fact(s + 1) / den;
        }
        Ok(inner / edges * sum)
    }

    /// Recoupling coefficient `{a b i; c d j}`: the coefficient of the basis
    /// vector with internal edge `i` (vertices `(a,d,i)`, `(b,c,i)`) in the
    /// expansion of the one with internal edge `j` (vertices `(a,b,j)`,
    /// `(c,d,j)`). Zero if any of those triples is inadmissible.
    pub fn six_j(&self, a: u32, b: u32, i: u32, c: u32, d: u32, j: u32) -> Complex64 {
        let ok = self.admissible(a, d, i)
            && self.admissible(b, c, i)
            && self.admissible(a, b, j)
            && self.admissible(c, d, j);
        if !ok {
            return Complex64::new(0.0, 0.0);
        }
        let value = (|| -> Result<f64, RecouplingError> {
            Ok(self.tet(a, b, i, c, d, j)? * self.delta(i)
                / (self.theta(a, d, i)? * self.theta(b, c, i)?))
        })()
        .expect("admissible labels give finite network values");
        Complex64::new(value, 0.0)
    }

    /// Tetrahedrally symmetric butterfly weight `[a b c; d e f]` with triads
    /// `(a,b,c), (a,e,f), (d,b,f), (d,e,c)`: the tetrahedron divided by the
    /// square root of the absolute product of its four face thetas. Zero if
    /// a triad is inadmissible.
    pub fn butterfly_weight(&self, a: u32, b: u32, c: u32, d: u32, e: u32, f: u32) -> f64 {
        let triads = [[a, b, c], [a, e, f], [d, b, f], [d, e, c]];
        if !triads.iter().all(|t| self.admissible(t[0], t[1], t[2])) {
            return 0.0;
        }
        let tet = self.tet(a, e, c, d, b, f).expect("admissible");
        let norm: f64 = triads
            .iter()
            .map(|t| self.theta(t[0], t[1], t[2]).expect("admissible").abs())
            .product();
        tet / norm.sqrt()
    }
}

fn sign(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_integers() {
        let l4 = Level::new(4).unwrap();
        assert_eq!(l4.quantum_int(0), 0.0);
        assert!((l4.quantum_int(1) - 1.0).abs() < 1e-15);
        assert!((l4.quantum_int(2) - 2f64.sqrt()).abs() < 1e-12);
        for r in 3..=6 {
            assert_eq!(Level::new(r).unwrap().quantum_int(r), 0.0);
        }
    }

    #[test]
    fn quantum_int_matches_complex_ratio() {
        for r in 3..=8 {
            let l = Level::new(r).unwrap();
            let q = l.q();
            assert!((q.norm() - 1.0).abs() < 1e-15);
            for n in 0..=2 * r {
                let direct = (q.powu(n) - q.powu(n).inv()) / (q - q.inv());
                assert!(direct.im.abs() < 1e-12);
                assert!((direct.re - l.quantum_int(n)).abs() < 1e-12, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn level_bounds() {
        assert!(matches!(
            Level::new(2),
            Err(RecouplingError::InvalidLevel(2))
        ));
    }

    #[test]
    fn admissibility() {
        let l4 = Level::new(4).unwrap();
        assert!(l4.admissible(0, 0, 0));
        assert!(l4.admissible(1, 1, 2));
        assert!(!l4.admissible(1, 1, 1));
        assert!(!l4.admissible(2, 2, 2));
        assert!(!l4.admissible(0, 1, 3));
    }

    #[test]
    fn small_networks() {
        let l = Level::new(5).unwrap();
        assert_eq!(l.delta(0), 1.0);
        assert!((l.delta(1) + l.quantum_int(2)).abs() < 1e-15);
        assert!((l.theta(0, 0, 0).unwrap() - 1.0).abs() < 1e-15);
        // θ(a, a, 0) = Δ_a.
        for a in 0..=3 {
            assert!((l.theta(a, a, 0).unwrap() - l.delta(a)).abs() < 1e-12);
        }
        assert!(matches!(
            l.theta(1, 1, 1),
            Err(RecouplingError::InadmissibleLabels(_))
        ));
    }

    #[test]
    fn theta_is_symmetric() {
        let l = Level::new(5).unwrap();
        let m = l.max_colour();
        for a in 0..=m {
            for b in 0..=m {
                for c in 0..=m {
                    if !l.admissible(a, b, c) {
                        continue;
                    }
                    let t = l.theta(a, b, c).unwrap();
                    for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        assert!((l.theta(x, y, z).unwrap() - t).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_six_j() {
        for r in 3..=6 {
            let l = Level::new(r).unwrap();
            assert!((l.six_j(0, 0, 0, 0, 0, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        // Inadmissible labels give zero.
        let l = Level::new(4).unwrap();
        assert_eq!(l.six_j(1, 1, 1, 1, 1, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn tet_with_a_zero_edge_is_theta() {
        // Tet with f = 0 forces a = b, c = d and collapses to θ(a, c, e).
        let l = Level::new(6).unwrap();
        let m = l.max_colour();
        for a in 0..=m {
            for c in 0..=m {
                for e in 0..=m {
                    if l.admissible(a, c, e) {
                        let tet = l.tet(a, a, e, c, c, 0).unwrap();
                        assert!(
                            (tet - l.theta(a, c, e).unwrap()).abs() < 1e-10,
                            "{a} {c} {e}"
                        );
                    }
                }
            }
        }
    }
}
