//! Integer geometry of the face-centred cubic lattice.
//!
//! Points are integer triples. Every basis step changes exactly two axes by
//! one unit, so all points reachable from the origin satisfy
//! `(x + y + z) % 2 == 0` and one step has squared Euclidean length 2.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A point of the FCC lattice (or a difference of two points).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { x: 0, y: 0, z: 0 };

    #[inline]
    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        Self { x, y, z }
    }

    /// Squared Euclidean norm.
    #[inline]
    pub fn norm_sq(self) -> i64 {
        let (x, y, z) = (self.x as i64, self.y as i64, self.z as i64);
        x * x + y * y + z * z
    }

    /// Whether the coordinate sum is even (the sublattice reachable from the origin).
    #[inline]
    pub fn has_even_parity(self) -> bool {
        (self.x + self.y + self.z).rem_euclid(2) == 0
    }

    /// The point one basis step away in direction `d`.
    #[inline]
    pub fn step(self, d: Direction) -> Self {
        self + d.vector()
    }

    /// All 12 lattice neighbours, in basis order.
    pub fn neighbors(self) -> impl Iterator<Item = LatticePoint> {
        BASIS.iter().map(move |&v| self + v)
    }
}

impl Add for LatticePoint {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for LatticePoint {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for LatticePoint {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// The 12 FCC basis vectors `v_1..v_12`. The order is fixed so that
/// generator-string enumeration is reproducible.
pub const BASIS: [LatticePoint; 12] = [
    LatticePoint::new(1, 1, 0),
    LatticePoint::new(-1, -1, 0),
    LatticePoint::new(-1, 1, 0),
    LatticePoint::new(1, -1, 0),
    LatticePoint::new(0, 1, 1),
    LatticePoint::new(0, 1, -1),
    LatticePoint::new(0, -1, -1),
    LatticePoint::new(0, -1, 1),
    LatticePoint::new(1, 0, 1),
    LatticePoint::new(-1, 0, 1),
    LatticePoint::new(-1, 0, -1),
    LatticePoint::new(1, 0, -1),
];

/// Index of one basis vector, `0..12` for `v_1..v_12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(u8);

impl Direction {
    pub const COUNT: usize = 12;

    pub fn new(index: usize) -> Option<Self> {
        (index < Self::COUNT).then_some(Direction(index as u8))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn vector(self) -> LatticePoint {
        BASIS[self.0 as usize]
    }

    /// The direction whose vector is the negation of this one.
    pub fn opposite(self) -> Self {
        let neg = -self.vector();
        Self::from_vector(neg).expect("basis is closed under negation")
    }

    /// The direction of a unit step, if `v` is a basis vector.
    pub fn from_vector(v: LatticePoint) -> Option<Self> {
        BASIS.iter().position(|&b| b == v).map(|i| Direction(i as u8))
    }

    pub fn all() -> impl Iterator<Item = Direction> {
        (0..Self::COUNT as u8).map(Direction)
    }
}

/// The basis vectors `v_1..v_12` in their canonical order.
pub fn basis_vectors() -> [LatticePoint; 12] {
    BASIS
}

/// True iff `q - p` is a basis vector.
#[inline]
pub fn is_neighbor(p: LatticePoint, q: LatticePoint) -> bool {
    let d = q - p;
    let (ax, ay, az) = (d.x.abs(), d.y.abs(), d.z.abs());
    // Exactly two axes differ by one.
    ax <= 1 && ay <= 1 && az <= 1 && ax + ay + az == 2
}

#[inline]
pub fn squared_distance(p: LatticePoint, q: LatticePoint) -> i64 {
    (q - p).norm_sq()
}

/// Graph distance on the lattice (minimum number of basis steps) between two
/// points of the same parity class.
#[inline]
pub fn lattice_distance(p: LatticePoint, q: LatticePoint) -> i64 {
    let d = q - p;
    let (ax, ay, az) = (d.x.abs() as i64, d.y.abs() as i64, d.z.abs() as i64);
    ax.max(ay).max(az).max((ax + ay + az) / 2)
}

/// All points adjacent to both `p` and `q`, sorted lexicographically.
pub fn common_neighbors(p: LatticePoint, q: LatticePoint) -> Vec<LatticePoint> {
    let mut out: Vec<LatticePoint> = p.neighbors().filter(|&r| is_neighbor(q, r)).collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i32, y: i32, z: i32) -> LatticePoint {
        LatticePoint::new(x, y, z)
    }

    #[test]
    fn basis_matches_listing() {
        let b = basis_vectors();
        assert_eq!(b.len(), 12);
        assert_eq!(b[0], p(1, 1, 0));
        assert_eq!(b[11], p(1, 0, -1));
        for v in b {
            assert!(b.contains(&-v));
            assert_eq!(v.norm_sq(), 2);
            assert!(v.has_even_parity());
        }
    }

    #[test]
    fn opposite_is_involution() {
        for d in Direction::all() {
            assert_eq!(d.opposite().vector(), -d.vector());
            assert_eq!(d.opposite().opposite(), d);
        }
    }

    #[test]
    fn neighbor_examples() {
        assert!(is_neighbor(p(0, 0, 0), p(1, 1, 0)));
        assert!(!is_neighbor(p(0, 0, 0), p(2, 0, 0)));
        assert!(!is_neighbor(p(0, 0, 0), p(0, 0, 0)));
    }

    #[test]
    fn squared_distance_examples() {
        assert_eq!(squared_distance(p(0, 0, 0), p(1, 1, 0)), 2);
        assert_eq!(squared_distance(p(0, 0, 0), p(0, 0, 0)), 0);
        assert_eq!(squared_distance(p(0, 0, 0), p(2, 0, 2)), 8);
    }

    /// Enumerates every pair of basis steps from `p` and keeps the endpoints
    /// that are one step from `q`.
    fn common_neighbors_by_pairs(a: LatticePoint, b: LatticePoint) -> Vec<LatticePoint> {
        let mut out = Vec::new();
        for u in BASIS {
            for v in BASIS {
                if a + u == b + v && !out.contains(&(a + u)) {
                    out.push(a + u);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn common_neighbors_examples() {
        let got = common_neighbors(p(0, 0, 0), p(1, 1, 0));
        assert_eq!(got, vec![p(0, 1, -1), p(0, 1, 1), p(1, 0, -1), p(1, 0, 1)]);
        assert_eq!(got, common_neighbors_by_pairs(p(0, 0, 0), p(1, 1, 0)));

        let same = common_neighbors(p(0, 0, 0), p(0, 0, 0));
        assert_eq!(same.len(), 12);
        assert!(same.iter().all(|&r| is_neighbor(p(0, 0, 0), r)));

        assert!(common_neighbors(p(0, 0, 0), p(10, 10, 0)).is_empty());
    }

    #[test]
    fn common_neighbor_counts_over_small_differences() {
        let mut seen = std::collections::BTreeSet::new();
        for dx in -4..=4 {
            for dy in -4..=4 {
                for dz in -4..=4 {
                    let q = p(dx, dy, dz);
                    if !q.has_even_parity() {
                        continue;
                    }
                    let got = common_neighbors(LatticePoint::ORIGIN, q);
                    assert_eq!(got, common_neighbors_by_pairs(LatticePoint::ORIGIN, q));
                    let n = got.len();
                    if q == LatticePoint::ORIGIN {
                        assert_eq!(n, 12);
                    } else if is_neighbor(LatticePoint::ORIGIN, q) {
                        assert_eq!(n, 4);
                    }
                    seen.insert(n);
                }
            }
        }
        // (2,2,0) shares only (1,1,0) with the origin; (1,1,2) shares two points.
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![0, 1, 2, 4, 12]);
        assert_eq!(common_neighbors(LatticePoint::ORIGIN, p(2, 2, 0)), vec![p(1, 1, 0)]);
    }

    #[test]
    fn lattice_distance_matches_bfs() {
        use std::collections::{HashMap, VecDeque};
        let mut dist = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert(LatticePoint::ORIGIN, 0i64);
        queue.push_back(LatticePoint::ORIGIN);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            if du == 5 {
                continue;
            }
            for v in u.neighbors() {
                dist.entry(v).or_insert_with(|| {
                    queue.push_back(v);
                    du + 1
                });
            }
        }
        for (&q, &d) in &dist {
            assert_eq!(lattice_distance(LatticePoint::ORIGIN, q), d, "at {q}");
        }
    }
}
