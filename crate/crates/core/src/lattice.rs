//! Integer star coordinates and period lattices.
//!
//! A vertex of a Σ-complex is an integer combination of the star vectors, so
//! it is stored as a [`Coord4`] rather than a point in space. Periodic
//! complexes carry a [`PeriodLattice`] of translations, kept in Hermite normal
//! form so that every coset of the lattice has one canonical representative.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Integer coefficients of `v1..v4`. Ordered lexicographically.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coord4(pub [i64; 4]);

impl Coord4 {
    pub const ZERO: Coord4 = Coord4([0; 4]);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Coord4([a, b, c, d])
    }

    /// Unit vector `e_k` for a star index `k` in `1..=4`.
    pub fn unit(k: usize) -> Self {
        assert!((1..=4).contains(&k), "star index {k} out of range");
        let mut n = [0; 4];
        n[k - 1] = 1;
        Coord4(n)
    }

    pub fn get(&self, k: usize) -> i64 {
        self.0[k - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    /// Swap the coefficients of two star indices.
    pub fn swapped(self, a: usize, b: usize) -> Self {
        let mut n = self.0;
        n.swap(a - 1, b - 1);
        Coord4(n)
    }
}

impl fmt::Display for Coord4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl Index<usize> for Coord4 {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for Coord4 {
    type Output = Coord4;
    fn add(self, o: Coord4) -> Coord4 {
        Coord4(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl AddAssign for Coord4 {
    fn add_assign(&mut self, o: Coord4) {
        *self = *self + o;
    }
}

impl Sub for Coord4 {
    type Output = Coord4;
    fn sub(self, o: Coord4) -> Coord4 {
        Coord4(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Coord4 {
    type Output = Coord4;
    fn neg(self) -> Coord4 {
        Coord4(self.0.map(|x| -x))
    }
}

impl Mul<Coord4> for i64 {
    type Output = Coord4;
    fn mul(self, c: Coord4) -> Coord4 {
        Coord4(c.0.map(|x| self * x))
    }
}

impl From<[i64; 4]> for Coord4 {
    fn from(n: [i64; 4]) -> Self {
        Coord4(n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("period vectors are linearly dependent")]
    Dependent,
    #[error("at most 3 period vectors are allowed, got {0}")]
    TooMany(usize),
    #[error("vector {0} is not in the period lattice")]
    NotInLattice(Coord4),
    #[error("sublattice has rank {got}, expected {want}")]
    RankDeficient { got: usize, want: usize },
}

/// A lattice of translations in star coordinates, of rank 0 to 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodLattice {
    generators: Vec<Coord4>,
    hnf: Vec<Coord4>,
    pivots: Vec<usize>,
    // hnf[r] = sum_c transform[r][c] * generators[c]
    transform: Vec<Vec<i64>>,
}

impl PeriodLattice {
    pub fn trivial() -> Self {
        Self { generators: Vec::new(), hnf: Vec::new(), pivots: Vec::new(), transform: Vec::new() }
    }

    pub fn new(generators: &[Coord4]) -> Result<Self, LatticeError> {
        if generators.len() > 3 {
            return Err(LatticeError::TooMany(generators.len()));
        }
        let (hnf, pivots, transform) = hermite(generators);
        if hnf.len() != generators.len() {
            return Err(LatticeError::Dependent);
        }
        Ok(Self { generators: generators.to_vec(), hnf, pivots, transform })
    }

    pub fn generators(&self) -> &[Coord4] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Canonical representative of `c + L`.
    pub fn reduce(&self, c: Coord4) -> Coord4 {
        self.reduce_with_quotient(c).0
    }

    /// Canonical representative together with the Hermite-basis coefficients
    /// that were subtracted.
    fn reduce_with_quotient(&self, c: Coord4) -> (Coord4, Vec<i64>) {
        let mut v = c;
        let mut q = Vec::with_capacity(self.hnf.len());
        for (row, &p) in self.hnf.iter().zip(&self.pivots) {
            let k = v.0[p].div_euclid(row.0[p]);
            v = v - k * *row;
            q.push(k);
        }
        (v, q)
    }

    pub fn contains(&self, c: Coord4) -> bool {
        self.reduce(c).is_zero()
    }

    pub fn equivalent(&self, a: Coord4, b: Coord4) -> bool {
        self.contains(a - b)
    }

    /// Integer coefficients of `c` in terms of the generators as supplied.
    pub fn coefficients(&self, c: Coord4) -> Result<Vec<i64>, LatticeError> {
        let (rem, q) = self.reduce_with_quotient(c);
        if !rem.is_zero() {
            return Err(LatticeError::NotInLattice(c));
        }
        let mut out = vec![0; self.generators.len()];
        for (r, &qr) in q.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                *o += qr * self.transform[r][c];
            }
        }
        Ok(out)
    }

    pub fn combine(&self, coeffs: &[i64]) -> Coord4 {
        coeffs.iter().zip(&self.generators).fold(Coord4::ZERO, |acc, (&k, &g)| acc + k * g)
    }

    /// Coset representatives of `self / sub`, where `sub` must be a full-rank
    /// sublattice. The first representative is always zero.
    pub fn coset_representatives(&self, sub: &PeriodLattice) -> Result<Vec<Coord4>, LatticeError> {
        if sub.rank() != self.rank() {
            return Err(LatticeError::RankDeficient { got: sub.rank(), want: self.rank() });
        }
        let k = self.rank();
        if k == 0 {
            return Ok(vec![Coord4::ZERO]);
        }
        // Express the sublattice in our coordinates; pad to Coord4 so the same
        // Hermite routine applies.
        let mut rows = Vec::with_capacity(k);
        for g in sub.generators() {
            let c = self.coefficients(*g)?;
            let mut n = [0i64; 4];
            n[..k].copy_from_slice(&c);
            rows.push(Coord4(n));
        }
        let (h, piv, _) = hermite(&rows);
        if h.len() != k {
            return Err(LatticeError::RankDeficient { got: h.len(), want: k });
        }
        let diag: Vec<i64> = h.iter().zip(&piv).map(|(r, &p)| r.0[p]).collect();
        let mut reps = vec![Coord4::ZERO];
        for (axis, &d) in diag.iter().enumerate() {
            let step = self.generators[piv[axis]];
            let mut next = Vec::with_capacity(reps.len() * d as usize);
            for i in 0..d {
                for r in &reps {
                    next.push(*r + i * step);
                }
            }
            reps = next;
        }
        Ok(reps)
    }

    /// Index of a full-rank sublattice.
    pub fn index_of(&self, sub: &PeriodLattice) -> Result<usize, LatticeError> {
        Ok(self.coset_representatives(sub)?.len())
    }
}

/// Row-style Hermite normal form. Returns the nonzero rows, their pivot
/// columns, and the integer transform expressing each row in the input.
fn hermite(input: &[Coord4]) -> (Vec<Coord4>, Vec<usize>, Vec<Vec<i64>>) {
    let m = input.len();
    let mut a: Vec<Coord4> = input.to_vec();
    let mut u: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..4 {
        if r == m {
            break;
        }
        loop {
            let Some(i) = (r..m).filter(|&i| a[i].0[c] != 0).min_by_key(|&i| a[i].0[c].abs()) else {
                break;
            };
            a.swap(r, i);
            u.swap(r, i);
            let mut clean = true;
            for k in r + 1..m {
                let q = a[k].0[c].div_euclid(a[r].0[c]);
                if q != 0 {
                    a[k] = a[k] - q * a[r];
                    let ur = u[r].clone();
                    for (x, y) in u[k].iter_mut().zip(ur) {
                        *x -= q * y;
                    }
                }
                if a[k].0[c] != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a[r].0[c] != 0 {
            if a[r].0[c] < 0 {
                a[r] = -a[r];
                for x in u[r].iter_mut() {
                    *x = -*x;
                }
            }
            for k in 0..r {
                let q = a[k].0[c].div_euclid(a[r].0[c]);
                if q != 0 {
                    a[k] = a[k] - q * a[r];
                    let ur = u[r].clone();
                    for (x, y) in u[k].iter_mut().zip(ur) {
                        *x -= q * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    a.truncate(r);
    u.truncate(r);
    (a, pivots, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(a: i64, b: i64, cc: i64, d: i64) -> Coord4 {
        Coord4::new(a, b, cc, d)
    }

    #[test]
    fn dependent_generators_rejected() {
        assert_eq!(PeriodLattice::new(&[c(1, 0, -1, 0), c(2, 0, -2, 0)]), Err(LatticeError::Dependent));
        assert_eq!(PeriodLattice::new(&[c(1, 0, 0, 0), c(0, 1, 0, 0), c(1, 1, 0, 0)]), Err(LatticeError::Dependent));
        assert!(matches!(
            PeriodLattice::new(&[c(1, 0, 0, 0), c(0, 1, 0, 0), c(0, 0, 1, 0), c(0, 0, 0, 1)]),
            Err(LatticeError::TooMany(4))
        ));
    }

    #[test]
    fn reduce_identifies_translates() {
        let l = PeriodLattice::new(&[c(1, -1, 0, 0), c(0, 0, 1, -1)]).unwrap();
        assert_eq!(l.reduce(c(1, 0, 0, 0)), l.reduce(c(0, 1, 0, 0)));
        assert_ne!(l.reduce(c(1, 0, 0, 0)), l.reduce(c(0, 0, 1, 0)));
        assert!(l.contains(c(3, -3, -2, 2)));
    }

    #[test]
    fn coefficients_roundtrip() {
        let l = PeriodLattice::new(&[c(1, 0, -1, 0), c(0, 1, 0, -1), c(1, 0, 1, 0)]).unwrap();
        let v = c(2, 0, 0, 0);
        let k = l.coefficients(v).unwrap();
        assert_eq!(l.combine(&k), v);
        assert!(l.coefficients(c(1, 0, 0, 0)).is_err());
    }

    #[test]
    fn coset_reps_count_index() {
        let l = PeriodLattice::new(&[c(1, 0, -1, 0), c(0, 1, 0, -1), c(1, 0, 1, 0)]).unwrap();
        let s = PeriodLattice::new(&[c(1, 0, -1, 0), c(0, 2, 0, -2), c(1, 0, 1, 0)]).unwrap();
        let reps = l.coset_representatives(&s).unwrap();
        assert_eq!(reps.len(), 2);
        assert!(!s.equivalent(reps[0], reps[1]));
        let s3 = PeriodLattice::new(&[c(3, 0, -3, 0), c(0, 2, 0, -2), c(1, 0, 1, 0)]).unwrap();
        assert_eq!(l.index_of(&s3).unwrap(), 6);
    }

    proptest! {
        #[test]
        fn reduce_is_canonical(
            v in prop::array::uniform4(-20i64..20),
            k in prop::array::uniform3(-5i64..5),
        ) {
            let l = PeriodLattice::new(&[c(1, 0, -1, 0), c(0, 1, 0, -1), c(1, 0, 1, 0)]).unwrap();
            let v = Coord4(v);
            let shifted = v + l.combine(&k);
            prop_assert_eq!(l.reduce(v), l.reduce(shifted));
            prop_assert_eq!(l.reduce(l.reduce(v)), l.reduce(v));
            prop_assert!(l.contains(v - l.reduce(v)));
        }
    }
}
