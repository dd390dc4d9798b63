//! Color lists as small bitmasks, and the adjacency of the color graph they
//! live in.

use std::fmt;

/// Colors are small integers. 3-coloring uses the values `1..=3`; list
/// homomorphism uses target vertex ids `0..k`.
pub type Color = u8;

/// Largest supported number of colors (bit width of [`ColorSet`]).
pub const MAX_COLORS: usize = 64;

/// A set of colors stored as a 64-bit mask, bit `c` for color `c`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ColorSet(u64);

impl ColorSet {
    pub const EMPTY: ColorSet = ColorSet(0);
    /// `{1, 2, 3}`.
    pub const THREE: ColorSet = ColorSet(0b1110);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        ColorSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn singleton(c: Color) -> Self {
        ColorSet(1 << c)
    }

    /// `{0, .., k-1}`.
    pub fn first_k(k: usize) -> Self {
        assert!(k <= MAX_COLORS);
        if k == MAX_COLORS {
            ColorSet(u64::MAX)
        } else {
            ColorSet((1u64 << k) - 1)
        }
    }

    pub fn from_colors<I: IntoIterator<Item = Color>>(colors: I) -> Self {
        colors.into_iter().fold(Self::EMPTY, |s, c| s.with(c))
    }

    #[inline]
    pub fn contains(self, c: Color) -> bool {
        (c as usize) < MAX_COLORS && self.0 >> c & 1 == 1
    }

    #[inline]
    pub fn with(self, c: Color) -> Self {
        ColorSet(self.0 | 1 << c)
    }

    #[inline]
    pub fn without(self, c: Color) -> Self {
        ColorSet(self.0 & !(1 << c))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn intersect(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & other.0)
    }

    #[inline]
    pub fn union(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 | other.0)
    }

    #[inline]
    pub fn minus(self, other: ColorSet) -> ColorSet {
        ColorSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: ColorSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn min(self) -> Option<Color> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Color)
    }

    /// The sole member of a singleton set.
    #[inline]
    pub fn single(self) -> Option<Color> {
        (self.len() == 1).then(|| self.0.trailing_zeros() as Color)
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = Color> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let c = rest.trailing_zeros() as Color;
            rest &= rest - 1;
            Some(c)
        })
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The color graph: which pairs of colors may sit on the two ends of an edge.
/// For proper 3-coloring this is `K_3` on `{1,2,3}`; for list homomorphism it
/// is the target `H`, loops included.
#[derive(Clone, PartialEq, Eq)]
pub struct Palette {
    colors: ColorSet,
    compatible: Vec<ColorSet>,
}

impl Palette {
    /// `K_3` on colors `{1, 2, 3}`.
    pub fn three() -> Self {
        let colors = ColorSet::THREE;
        let mut compatible = vec![ColorSet::EMPTY; 4];
        for c in colors.iter() {
            compatible[c as usize] = colors.without(c);
        }
        Palette { colors, compatible }
    }

    /// Builds a palette from per-color neighbor masks (`compatible[c]` is the
    /// set of colors allowed next to `c`). Must be symmetric.
    pub fn from_compatibility(colors: ColorSet, compatible: Vec<ColorSet>) -> Self {
        debug_assert!(colors.iter().all(|a| compatible[a as usize]
            .iter()
            .all(|b| compatible[b as usize].contains(a))));
        Palette { colors, compatible }
    }

    #[inline]
    pub fn colors(&self) -> ColorSet {
        self.colors
    }

    /// Colors allowed on a neighbor of a vertex colored `c`.
    #[inline]
    pub fn compatible(&self, c: Color) -> ColorSet {
        self.compatible[c as usize]
    }

    #[inline]
    pub fn allows(&self, a: Color, b: Color) -> bool {
        self.compatible(a).contains(b)
    }

    /// Whether the palette is exactly the proper-coloring clique on its colors.
    pub fn is_clique(&self) -> bool {
        self.colors
            .iter()
            .all(|c| self.compatible(c) == self.colors.without(c))
    }
}

impl fmt::Debug for Palette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for c in self.colors.iter() {
            m.entry(&c, &self.compatible(c));
        }
        m.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn color_set_basics() {
        let s = ColorSet::from_colors([3, 1]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(s.len(), 2);
        assert_eq!(s.min(), Some(1));
        assert_eq!(s.single(), None);
        assert_eq!(ColorSet::singleton(2).single(), Some(2));
        assert_eq!(ColorSet::THREE.without(2), s);
        assert!(s.is_subset(ColorSet::THREE));
        assert_eq!(
            ColorSet::first_k(3).iter().collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        assert_eq!(ColorSet::first_k(64).len(), 64);
    }

    #[test]
    fn three_palette_is_k3() {
        let p = Palette::three();
        assert!(p.is_clique());
        assert_eq!(p.compatible(1), ColorSet::from_colors([2, 3]));
        assert!(!p.allows(2, 2));
    }
}
