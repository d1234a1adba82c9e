//! Cosine Gram matrix `B(s, t) = −cos(π / m(s, t))` and its signature.
//!
//! Crystallographic systems are handled exactly in `Q(√2, √3)`; any other
//! finite label goes through outward-rounded interval arithmetic, which may
//! fail to decide a sign and then reports [`CoreError::Undecided`].

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::field::Biquadratic;
use crate::system::{CoxeterLabel, CoxeterSystem};

/// Inertia of the Gram matrix: counts of positive, zero and negative
/// eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

impl Signature {
    pub fn new(n_plus: usize, n_zero: usize, n_minus: usize) -> Self {
        Self {
            n_plus,
            n_zero,
            n_minus,
        }
    }

    pub fn rank(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }

    pub fn is_positive_definite(&self) -> bool {
        self.n_zero == 0 && self.n_minus == 0
    }

    /// `(n − 1, 1, 0)`: the signature of an irreducible affine diagram.
    pub fn is_affine(&self) -> bool {
        self.n_zero == 1 && self.n_minus == 0 && self.rank() >= 1
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n_plus, self.n_zero, self.n_minus)
    }
}

/// A closed interval `[lo, hi]` of reals with outward-rounded operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    fn widened(x: f64, ulps: u32) -> Self {
        let (mut lo, mut hi) = (x, x);
        for _ in 0..ulps {
            lo = lo.next_down();
            hi = hi.next_up();
        }
        Self { lo, hi }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }

    fn sign(&self) -> Option<Ordering> {
        if self.lo > 0.0 {
            Some(Ordering::Greater)
        } else if self.hi < 0.0 {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    /// Distance of the interval from zero (0 when it straddles zero).
    fn magnitude(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    fn add(self, o: Self) -> Self {
        Self {
            lo: (self.lo + o.lo).next_down(),
            hi: (self.hi + o.hi).next_up(),
        }
    }

    fn sub(self, o: Self) -> Self {
        self.add(Self {
            lo: -o.hi,
            hi: -o.lo,
        })
    }

    fn mul(self, o: Self) -> Self {
        let p = [
            self.lo * o.lo,
            self.lo * o.hi,
            self.hi * o.lo,
            self.hi * o.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }

    fn div(self, o: Self) -> Self {
        debug_assert!(!o.contains_zero());
        let p = [
            self.lo / o.lo,
            self.lo / o.hi,
            self.hi / o.lo,
            self.hi / o.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            lo: lo.next_down(),
            hi: hi.next_up(),
        }
    }
}

/// The symmetric bilinear form of the geometric representation.
#[derive(Debug, Clone, PartialEq)]
pub enum GramMatrix {
    /// Crystallographic systems: exact entries in `Q(√2, √3)`.
    Exact {
        rank: usize,
        entries: Vec<Biquadratic>,
    },
    /// Other systems: enclosures of the true entries.
    Approximate { rank: usize, entries: Vec<Interval> },
}

impl GramMatrix {
    pub fn rank(&self) -> usize {
        match self {
            Self::Exact { rank, .. } | Self::Approximate { rank, .. } => *rank,
        }
    }

    /// Midpoint approximation of entry `(s, t)`.
    pub fn approx(&self, s: usize, t: usize) -> f64 {
        match self {
            Self::Exact { rank, entries } => entries[s * rank + t].to_f64(),
            Self::Approximate { rank, entries } => {
                let e = entries[s * rank + t];
                (e.lo + e.hi) / 2.0
            }
        }
    }

    /// Largest width of any interval entry (0 for exact matrices).
    pub fn error_bound(&self) -> f64 {
        match self {
            Self::Exact { .. } => 0.0,
            Self::Approximate { entries, .. } => {
                entries.iter().map(|e| e.hi - e.lo).fold(0.0, f64::max)
            }
        }
    }
}

/// `−cos(π/m)` exactly, for crystallographic labels.
pub fn exact_entry(m: CoxeterLabel) -> Option<Biquadratic> {
    Some(match m {
        CoxeterLabel::Finite(1) => Biquadratic::from_int(1),
        CoxeterLabel::Finite(2) => Biquadratic::from_int(0),
        CoxeterLabel::Finite(3) => Biquadratic::from_ratio(-1, 2),
        CoxeterLabel::Finite(4) => Biquadratic::sqrt2_times(-1, 2),
        CoxeterLabel::Finite(6) => Biquadratic::sqrt3_times(-1, 2),
        CoxeterLabel::Infinity => Biquadratic::from_int(-1),
        CoxeterLabel::Finite(_) => return None,
    })
}

fn interval_entry(m: CoxeterLabel) -> Interval {
    match m {
        CoxeterLabel::Finite(1) => Interval::point(1.0),
        CoxeterLabel::Finite(2) => Interval::point(0.0),
        CoxeterLabel::Finite(3) => Interval::point(-0.5),
        CoxeterLabel::Infinity => Interval::point(-1.0),
        CoxeterLabel::Finite(k) => {
            // libm cos is accurate to well under 2 ulps; 4 is a safe enclosure.
            Interval::widened(-(std::f64::consts::PI / f64::from(k)).cos(), 4)
        }
    }
}

pub fn gram_matrix(system: &CoxeterSystem) -> GramMatrix {
    let rank = system.rank();
    if system.is_crystallographic() {
        GramMatrix::Exact {
            rank,
            entries: system
                .labels()
                .iter()
                .map(|&m| exact_entry(m).expect("crystallographic label"))
                .collect(),
        }
    } else {
        GramMatrix::Approximate {
            rank,
            entries: system.labels().iter().map(|&m| interval_entry(m)).collect(),
        }
    }
}

/// Signature of the Gram matrix of `system`.
///
/// Exact for crystallographic systems: interval enclosures are tried first
/// and exact arithmetic decides whatever they leave open. Otherwise returns
/// [`CoreError::Undecided`] when the enclosures cannot separate a pivot from
/// zero.
pub fn signature(system: &CoxeterSystem) -> Result<Signature> {
    match gram_matrix(system) {
        GramMatrix::Exact { rank, entries } => {
            // Certified intervals settle nonsingular forms cheaply; exact
            // elimination handles the rest.
            let enclosures = system.labels().iter().map(|&m| interval_entry(m)).collect();
            Ok(interval_inertia(rank, enclosures).unwrap_or_else(|| exact_inertia(rank, entries)))
        }
        GramMatrix::Approximate { rank, entries } => {
            interval_inertia(rank, entries).ok_or(CoreError::Undecided)
        }
    }
}

/// Inertia of a symmetric matrix over `Q(√2, √3)` by symmetric elimination
/// (Sylvester's law), using 1×1 pivots where a diagonal entry is nonzero and
/// hyperbolic 2×2 pivots `[[0, b], [b, 0]]` otherwise.
pub fn exact_inertia(rank: usize, entries: Vec<Biquadratic>) -> Signature {
    let mut sig = Signature::new(0, 0, 0);
    let mut n = rank;
    let mut a = entries;
    while n > 0 {
        let at = |a: &[Biquadratic], i: usize, j: usize| a[i * n + j].clone();
        if let Some(i) = (0..n).find(|&i| !a[i * n + i].is_zero()) {
            let p = at(&a, i, i);
            match p.signum() {
                Ordering::Greater => sig.n_plus += 1,
                _ => sig.n_minus += 1,
            }
            let inv = p.inverse().expect("nonzero pivot");
            let rest: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            let scaled: Vec<Biquadratic> = rest.iter().map(|&r| &a[r * n + i] * &inv).collect();
            let m = n - 1;
            let mut next = vec![Biquadratic::from_int(0); m * m];
            for (x, &r) in rest.iter().enumerate() {
                for (y, &s) in rest.iter().enumerate().skip(x) {
                    let v = if a[i * n + s].is_zero() || scaled[x].is_zero() {
                        at(&a, r, s)
                    } else {
                        &a[r * n + s] - &(&scaled[x] * &a[i * n + s])
                    };
                    next[y * m + x] = v.clone();
                    next[x * m + y] = v;
                }
            }
            a = next;
            n = m;
        } else if let Some((i, j)) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i * n + j].is_zero())
        {
            sig.n_plus += 1;
            sig.n_minus += 1;
            let inv_b = a[i * n + j].inverse().expect("nonzero pivot");
            let rest: Vec<usize> = (0..n).filter(|&r| r != i && r != j).collect();
            let m = n - 2;
            let mut next = vec![Biquadratic::from_int(0); m * m];
            for (x, &r) in rest.iter().enumerate() {
                for (y, &s) in rest.iter().enumerate().skip(x) {
                    let cross = &(&a[r * n + i] * &a[j * n + s]) + &(&a[r * n + j] * &a[i * n + s]);
                    let v = &a[r * n + s] - &(&cross * &inv_b);
                    next[y * m + x] = v.clone();
                    next[x * m + y] = v;
                }
            }
            a = next;
            n = m;
        } else {
            sig.n_zero += n;
            break;
        }
    }
    sig
}

/// Interval version of [`exact_inertia`]; `None` when undecidable.
fn interval_inertia(rank: usize, entries: Vec<Interval>) -> Option<Signature> {
    let mut sig = Signature::new(0, 0, 0);
    let mut n = rank;
    let mut a = entries;
    while n > 0 {
        let pivot = (0..n)
            .filter(|&i| !a[i * n + i].contains_zero())
            .max_by(|&i, &j| {
                a[i * n + i]
                    .magnitude()
                    .total_cmp(&a[j * n + j].magnitude())
            });
        if let Some(i) = pivot {
            let p = a[i * n + i];
            match p.sign()? {
                Ordering::Greater => sig.n_plus += 1,
                _ => sig.n_minus += 1,
            }
            let rest: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            let m = n - 1;
            let mut next = vec![Interval::point(0.0); m * m];
            for (x, &r) in rest.iter().enumerate() {
                for (y, &s) in rest.iter().enumerate().skip(x) {
                    let v = a[r * n + s].sub(a[r * n + i].mul(a[i * n + s]).div(p));
                    next[x * m + y] = v;
                    next[y * m + x] = v;
                }
            }
            a = next;
            n = m;
            continue;
        }
        // A 2×2 block with certified negative determinant has inertia (1,0,1).
        let block = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| {
                let det = a[i * n + i]
                    .mul(a[j * n + j])
                    .sub(a[i * n + j].mul(a[i * n + j]));
                det.hi < 0.0
            });
        if let Some((i, j)) = block {
            sig.n_plus += 1;
            sig.n_minus += 1;
            let (p, b, q) = (a[i * n + i], a[i * n + j], a[j * n + j]);
            let det = p.mul(q).sub(b.mul(b));
            let rest: Vec<usize> = (0..n).filter(|&r| r != i && r != j).collect();
            let m = n - 2;
            let mut next = vec![Interval::point(0.0); m * m];
            for (x, &r) in rest.iter().enumerate() {
                for (y, &s) in rest.iter().enumerate().skip(x) {
                    let (ri, rj) = (a[r * n + i], a[r * n + j]);
                    let (si, sj) = (a[s * n + i], a[s * n + j]);
                    let quad = ri
                        .mul(q.mul(si).sub(b.mul(sj)))
                        .add(rj.mul(p.mul(sj).sub(b.mul(si))));
                    let v = a[r * n + s].sub(quad.div(det));
                    next[x * m + y] = v;
                    next[y * m + x] = v;
                }
            }
            a = next;
            n = m;
            continue;
        }
        if a.iter().all(Interval::is_exact_zero) {
            sig.n_zero += n;
            break;
        }
        return None;
    }
    Some(sig)
}
