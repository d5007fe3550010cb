use std::fmt;

/// Half-open range `[lo, hi)` over leaf positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub lo: u32,
    pub hi: u32,
}

impl Span {
    pub fn new(lo: u32, hi: u32) -> Self {
        debug_assert!(lo <= hi);
        Span { lo, hi }
    }

    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn overlap(&self, other: &Span) -> u64 {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        hi.saturating_sub(lo) as u64
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn cover(&self, other: &Span) -> Span {
        Span::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.lo, self.hi)
    }
}

/// Sorted, pairwise disjoint, non-adjacent spans.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet(Vec<Span>);

impl IntervalSet {
    pub fn single(span: Span) -> Self {
        IntervalSet(vec![span])
    }

    /// Normalises arbitrary spans: sorts, merges overlapping and adjacent ones.
    pub fn from_spans(mut spans: Vec<Span>) -> Self {
        spans.retain(|s| !s.is_empty());
        spans.sort_unstable();
        let mut out: Vec<Span> = Vec::with_capacity(spans.len());
        for s in spans {
            match out.last_mut() {
                Some(last) if s.lo <= last.hi => last.hi = last.hi.max(s.hi),
                _ => out.push(s),
            }
        }
        IntervalSet(out)
    }

    pub fn spans(&self) -> &[Span] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of leaves covered.
    pub fn measure(&self) -> u64 {
        self.0.iter().map(Span::len).sum()
    }

    /// Smallest span enclosing every member.
    pub fn hull(&self) -> Option<Span> {
        Some(Span::new(self.0.first()?.lo, self.0.last()?.hi))
    }

    pub fn intersection_measure(&self, other: &IntervalSet) -> u64 {
        let (a, b) = (&self.0, &other.0);
        if a.len() == 1 && b.len() == 1 {
            return a[0].overlap(&b[0]);
        }
        let (mut i, mut j, mut total) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            total += a[i].overlap(&b[j]);
            if a[i].hi <= b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        total
    }

    /// Leaves of `self` falling inside `range`.
    pub fn overlap_with_span(&self, range: &Span) -> u64 {
        self.0.iter().map(|s| s.overlap(range)).sum()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut spans = self.0.clone();
        spans.extend_from_slice(&other.0);
        IntervalSet::from_spans(spans)
    }

    pub fn is_normalized(&self) -> bool {
        self.0.iter().all(|s| !s.is_empty()) && self.0.windows(2).all(|w| w[0].hi < w[1].lo)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Leaf-set sizes of two hierarchy values and of their intersection and union.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cardinalities {
    pub x: u64,
    pub y: u64,
    pub intersection: u64,
    pub union: u64,
}

pub fn set_cardinalities(x: &IntervalSet, y: &IntervalSet) -> Cardinalities {
    let (cx, cy) = (x.measure(), y.measure());
    let inter = x.intersection_measure(y);
    Cardinalities {
        x: cx,
        y: cy,
        intersection: inter,
        union: cx + cy - inter,
    }
}
