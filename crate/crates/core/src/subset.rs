use std::fmt;

/// A subset of the encoder indices `{0, .., K-1}`, stored as a bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const MAX_ENCODERS: usize = 63;

    pub const fn empty() -> Self {
        Subset(0)
    }

    pub fn full(k: usize) -> Self {
        assert!(k <= Self::MAX_ENCODERS, "at most {} encoders", Self::MAX_ENCODERS);
        Subset((1u64 << k) - 1)
    }

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Subset(indices.into_iter().fold(0, |m, i| m | (1u64 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Complement within `{0, .., k-1}`.
    pub fn complement(self, k: usize) -> Self {
        Subset(!self.0 & Self::full(k).0)
    }

    pub fn fits(self, k: usize) -> bool {
        self.0 & !Self::full(k).0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    /// All `2^k` subsets of `{0, .., k-1}` in bit-mask order.
    pub fn all(k: usize) -> impl Iterator<Item = Subset> {
        (0..=Self::full(k).0).map(Subset)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.indices().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_and_count() {
        let s = Subset::from_indices([0, 2]);
        assert_eq!(s.complement(4), Subset::from_indices([1, 3]));
        assert_eq!(s.len(), 2);
        assert_eq!(Subset::all(3).count(), 8);
        assert_eq!(s.to_string(), "{1,3}");
        assert!(!Subset::from_indices([4]).fits(4));
    }
}
