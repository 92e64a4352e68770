//! Addresses, ultrametric distance and balls in the depth-`K` truncation of
//! the hierarchical group of order `N`.
//!
//! A vertex is a digit string `(x_1, ..., x_K)` with each digit in `0..N`.
//! It is stored as the integer `x_1 + x_2 N + ... + x_K N^(K-1)`, so the
//! level-`k` ball of a vertex is obtained by dividing its id by `N^k`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex ids are plain integers in `0..N^K`.
pub type VertexId = u64;

/// Largest admissible vertex count (exclusive): `N^K` must stay below `2^63`.
pub const MAX_VERTICES: u64 = 1 << 63;

/// The `(N, K)` parameters of a truncated hierarchical group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hierarchy {
    order: u64,
    depth: u32,
}

impl Hierarchy {
    /// Creates the depth-`depth` truncation of the group of order `order`.
    pub fn new(order: u64, depth: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::Config(format!("group order N must be >= 2, got {order}")));
        }
        if depth < 1 {
            return Err(Error::Config("truncation depth K must be >= 1".into()));
        }
        match order.checked_pow(depth) {
            Some(v) if v < MAX_VERTICES => Ok(Self { order, depth }),
            _ => Err(Error::Config(format!(
                "N^K = {order}^{depth} does not fit below 2^63"
            ))),
        }
    }

    /// `N`.
    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    /// `K`.
    #[inline]
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `N^k` for `k <= K`.
    #[inline]
    pub fn pow(&self, k: u32) -> u64 {
        debug_assert!(k <= self.depth);
        self.order.pow(k)
    }

    /// Number of vertices `N^K`.
    #[inline]
    pub fn vertex_count(&self) -> u64 {
        self.pow(self.depth)
    }

    /// Number of level-`k` balls in the truncation, `N^(K-k)`.
    #[inline]
    pub fn ball_count(&self, k: u32) -> u64 {
        self.pow(self.depth - k)
    }

    /// Ultrametric distance between two vertex ids, without range checks.
    #[inline]
    pub fn distance_ids(&self, u: VertexId, v: VertexId) -> u32 {
        let (mut a, mut b, mut k) = (u, v, 0);
        while a != b {
            a /= self.order;
            b /= self.order;
            k += 1;
        }
        k
    }

    /// Checks that `v` is a vertex of this truncation.
    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                what: "vertex id",
                value: v,
                allowed: format!("0..{}", self.vertex_count()),
            })
        }
    }

    /// Checks `k <= K`.
    pub fn check_level(&self, k: u32) -> Result<()> {
        if k <= self.depth {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                what: "ball level",
                value: k as u64,
                allowed: format!("0..={}", self.depth),
            })
        }
    }

    /// Address of vertex `id`.
    pub fn address(&self, id: VertexId) -> Result<HierAddress> {
        self.check_vertex(id)?;
        Ok(HierAddress { space: *self, id })
    }

    /// Address from digits `x_1, ..., x_K` (least significant first).
    pub fn from_digits(&self, digits: &[u64]) -> Result<HierAddress> {
        if digits.len() != self.depth as usize {
            return Err(Error::Config(format!(
                "expected {} digits, got {}",
                self.depth,
                digits.len()
            )));
        }
        let mut id = 0u64;
        for (i, &d) in digits.iter().enumerate().rev() {
            if d >= self.order {
                return Err(Error::OutOfRange {
                    what: "digit",
                    value: d,
                    allowed: format!("0..{} (coordinate {})", self.order, i + 1),
                });
            }
            id = id * self.order + d;
        }
        Ok(HierAddress { space: *self, id })
    }

    /// The origin `0`.
    pub fn origin(&self) -> HierAddress {
        HierAddress { space: *self, id: 0 }
    }

    /// The level-`k` ball with the given suffix index.
    pub fn ball(&self, level: u32, suffix: u64) -> Result<BallId> {
        self.check_level(level)?;
        if suffix >= self.ball_count(level) {
            return Err(Error::OutOfRange {
                what: "ball suffix",
                value: suffix,
                allowed: format!("0..{}", self.ball_count(level)),
            });
        }
        Ok(BallId { level, suffix })
    }

    /// The level-`k` ball containing vertex `v`, without range checks.
    #[inline]
    pub fn ball_of_id(&self, v: VertexId, k: u32) -> BallId {
        BallId {
            level: k,
            suffix: v / self.pow(k),
        }
    }

    /// Vertex ids of a ball, as a contiguous range.
    #[inline]
    pub fn members(&self, ball: BallId) -> std::ops::Range<VertexId> {
        let size = self.pow(ball.level);
        ball.suffix * size..(ball.suffix + 1) * size
    }

    /// The `N` sub-balls one level down. Empty for a 0-ball.
    pub fn sub_balls(&self, ball: BallId) -> impl Iterator<Item = BallId> {
        let n = if ball.level == 0 { 0 } else { self.order };
        let level = ball.level.saturating_sub(1);
        let order = self.order;
        (0..n).map(move |i| BallId {
            level,
            suffix: ball.suffix * order + i,
        })
    }
}

impl fmt::Display for Hierarchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Omega_{} truncated at depth {}", self.order, self.depth)
    }
}

/// A vertex of a truncated hierarchical group together with its `(N, K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HierAddress {
    space: Hierarchy,
    id: VertexId,
}

impl HierAddress {
    pub fn hierarchy(&self) -> Hierarchy {
        self.space
    }

    /// The integer encoding in `0..N^K`.
    pub fn id(&self) -> VertexId {
        self.id
    }

    /// Digits `x_1, ..., x_K`, least significant first.
    pub fn digits(&self) -> Vec<u64> {
        let n = self.space.order;
        let mut rest = self.id;
        (0..self.space.depth)
            .map(|_| {
                let d = rest % n;
                rest /= n;
                d
            })
            .collect()
    }

    fn same_space(&self, other: &HierAddress) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "addresses belong to different groups ({} vs {})",
                self.space, other.space
            )))
        }
    }

    /// `0` if equal, otherwise the largest coordinate index where the digits differ.
    pub fn distance(&self, other: &HierAddress) -> Result<u32> {
        self.same_space(other)?;
        Ok(self.space.distance_ids(self.id, other.id))
    }

    /// The level-`k` ball containing this address.
    pub fn ball_of(&self, k: u32) -> Result<BallId> {
        self.space.check_level(k)?;
        Ok(self.space.ball_of_id(self.id, k))
    }

    /// Componentwise addition mod `N`.
    pub fn add_mod(&self, other: &HierAddress) -> Result<HierAddress> {
        self.same_space(other)?;
        let n = self.space.order;
        let (mut a, mut b) = (self.id, other.id);
        let mut id = 0u64;
        let mut scale = 1u64;
        for level in 0..self.space.depth {
            id += ((a % n + b % n) % n) * scale;
            a /= n;
            b /= n;
            if level + 1 < self.space.depth {
                scale *= n;
            }
        }
        Ok(HierAddress { space: self.space, id })
    }
}

/// A `k`-ball: all vertices sharing digits `k+1..K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BallId {
    pub level: u32,
    /// Encoding of the shared digits `x_{k+1}, ..., x_K`, in `0..N^(K-k)`.
    pub suffix: u64,
}
