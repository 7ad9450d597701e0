use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use serde::{Deserialize, Serialize};

/// Index of a vertex in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn pos(self) -> SignedVertex {
        SignedVertex::new(self, Sign::Pos)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> SignedVertex {
        SignedVertex::new(self, Sign::Neg)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// An element of V ∪ V⁻¹. Encoded as `2 * vertex + (sign == Neg)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedVertex(u8);

impl SignedVertex {
    pub fn new(vertex: VertexId, sign: Sign) -> Self {
        debug_assert!(vertex.0 < 64);
        SignedVertex((vertex.0 as u8) << 1 | matches!(sign, Sign::Neg) as u8)
    }

    pub fn from_index(index: usize) -> Self {
        debug_assert!(index < 128);
        SignedVertex(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn vertex(self) -> VertexId {
        VertexId((self.0 >> 1) as usize)
    }

    pub fn sign(self) -> Sign {
        if self.0 & 1 == 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn inverse(self) -> Self {
        SignedVertex(self.0 ^ 1)
    }
}

impl fmt::Debug for SignedVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign() {
            Sign::Pos => write!(f, "{}", self.vertex().0),
            Sign::Neg => write!(f, "{}^-1", self.vertex().0),
        }
    }
}

macro_rules! bitset_ops {
    ($ty:ident) => {
        impl BitOr for $ty {
            type Output = $ty;
            fn bitor(self, rhs: $ty) -> $ty {
                $ty(self.0 | rhs.0)
            }
        }
        impl BitAnd for $ty {
            type Output = $ty;
            fn bitand(self, rhs: $ty) -> $ty {
                $ty(self.0 & rhs.0)
            }
        }
        impl Sub for $ty {
            type Output = $ty;
            fn sub(self, rhs: $ty) -> $ty {
                $ty(self.0 & !rhs.0)
            }
        }
        impl Not for $ty {
            type Output = $ty;
            fn not(self) -> $ty {
                $ty(!self.0)
            }
        }
    };
}

/// A set of vertices of a graph with at most 64 vertices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSet(pub u64);

bitset_ops!(VertexSet);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: VertexId) -> Self {
        VertexSet(1 << v.0)
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.0 >> v.0 & 1 == 1
    }

    pub fn insert(&mut self, v: VertexId) {
        self.0 |= 1 << v.0;
    }

    pub fn remove(&mut self, v: VertexId) {
        self.0 &= !(1 << v.0);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: VertexSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn first(self) -> Option<VertexId> {
        (self.0 != 0).then(|| VertexId(self.0.trailing_zeros() as usize))
    }

    pub fn iter(self) -> impl Iterator<Item = VertexId> {
        BitIter(self.0 as u128).map(VertexId)
    }

    /// The doubled set S± = S ∪ S⁻¹.
    pub fn doubled(self) -> SignedVertexSet {
        let mut out = 0u128;
        for v in self.iter() {
            out |= 0b11 << (2 * v.0);
        }
        SignedVertexSet(out)
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

/// A subset of V± for a graph with at most 64 vertices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedVertexSet(pub u128);

bitset_ops!(SignedVertexSet);

const POS_MASK: u128 = 0x5555_5555_5555_5555_5555_5555_5555_5555;

impl SignedVertexSet {
    pub const EMPTY: SignedVertexSet = SignedVertexSet(0);

    /// All of V± for an `n`-vertex graph.
    pub fn universe(n: usize) -> Self {
        VertexSet::full(n).doubled()
    }

    pub fn singleton(x: SignedVertex) -> Self {
        SignedVertexSet(1 << x.index())
    }

    pub fn contains(self, x: SignedVertex) -> bool {
        self.0 >> x.index() & 1 == 1
    }

    pub fn insert(&mut self, x: SignedVertex) {
        self.0 |= 1 << x.index();
    }

    pub fn remove(&mut self, x: SignedVertex) {
        self.0 &= !(1 << x.index());
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: SignedVertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: SignedVertexSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn first(self) -> Option<SignedVertex> {
        (self.0 != 0).then(|| SignedVertex::from_index(self.0.trailing_zeros() as usize))
    }

    pub fn iter(self) -> impl Iterator<Item = SignedVertex> {
        BitIter(self.0).map(SignedVertex::from_index)
    }

    /// Complement relative to `universe`.
    pub fn complement_in(self, universe: SignedVertexSet) -> Self {
        universe - self
    }

    /// Elementwise inverse: x ∈ S ⇔ x⁻¹ ∈ result.
    pub fn inverse(self) -> Self {
        let pos = self.0 & POS_MASK;
        let neg = self.0 & (POS_MASK << 1);
        SignedVertexSet(pos << 1 | neg >> 1)
    }

    /// Vertices v with at least one of v, v⁻¹ in the set.
    pub fn touched(self) -> VertexSet {
        let folded = (self.0 | self.0 >> 1) & POS_MASK;
        VertexSet(compress_even(folded))
    }

    /// Vertices v with both v and v⁻¹ in the set.
    pub fn both_signs(self) -> VertexSet {
        let both = self.0 & self.0 >> 1 & POS_MASK;
        VertexSet(compress_even(both))
    }

    /// Vertices v with exactly one of v, v⁻¹ in the set.
    pub fn one_sign(self) -> VertexSet {
        self.touched() - self.both_signs()
    }
}

fn compress_even(x: u128) -> u64 {
    let mut out = 0u64;
    let mut bits = x;
    while bits != 0 {
        let i = bits.trailing_zeros();
        out |= 1 << (i / 2);
        bits &= bits - 1;
    }
    out
}

impl Ord for SignedVertexSet {
    /// Lexicographic order on the sorted element lists.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for SignedVertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<SignedVertex> for SignedVertexSet {
    fn from_iter<I: IntoIterator<Item = SignedVertex>>(iter: I) -> Self {
        let mut s = SignedVertexSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl fmt::Debug for SignedVertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterates the set bits of a word in ascending order.
#[derive(Clone)]
pub(crate) struct BitIter(pub u128);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}
