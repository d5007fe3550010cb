use std::fmt;
use std::sync::Arc;

use crate::hierarchy::Cardinalities;

/// A matching function over leaf-set cardinalities.
///
/// `upper_bound` receives the size of the user's value and an upper bound on
/// the intersection with any value confined to an index range; it must not
/// underestimate `degree` for any such value. The default bound of 1 is
/// always safe.
pub trait SetSimilarity: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn degree(&self, c: &Cardinalities) -> f64;

    fn upper_bound(&self, _user_size: u64, _intersection_ub: u64) -> f64 {
        1.0
    }

    /// Slack applied when comparing degrees produced by this function.
    fn tolerance(&self) -> f64 {
        1e-12
    }
}

#[derive(Debug, Clone, Default)]
pub enum Similarity {
    #[default]
    Jaccard,
    Overlap,
    Dice,
    Custom(Arc<dyn SetSimilarity>),
}

impl Similarity {
    pub fn name(&self) -> &str {
        match self {
            Similarity::Jaccard => "jaccard",
            Similarity::Overlap => "overlap",
            Similarity::Dice => "dice",
            Similarity::Custom(f) => f.name(),
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "jaccard" => Some(Similarity::Jaccard),
            "overlap" => Some(Similarity::Overlap),
            "dice" => Some(Similarity::Dice),
            _ => None,
        }
    }

    /// Exact value as `(numerator, denominator)` for the built-in functions.
    pub fn ratio(&self, c: &Cardinalities) -> Option<(u64, u64)> {
        match self {
            Similarity::Jaccard => Some((c.intersection, c.union)),
            Similarity::Overlap => Some((c.intersection, c.x.min(c.y))),
            Similarity::Dice => Some((2 * c.intersection, c.x + c.y)),
            Similarity::Custom(_) => None,
        }
    }

    pub fn degree(&self, c: &Cardinalities) -> f64 {
        match self.ratio(c) {
            // one correctly rounded division: equal rationals give equal floats
            Some((n, d)) => n as f64 / d as f64,
            None => match self {
                Similarity::Custom(f) => f.degree(c).clamp(0.0, 1.0),
                _ => unreachable!(),
            },
        }
    }

    /// Largest degree any value inside an index range can reach against a
    /// user value of `user_size` leaves, given at most `intersection_ub`
    /// shared leaves. Intersection is at most `intersection_ub`, union at
    /// least `user_size`, and the object side has at least one leaf.
    pub fn upper_bound(&self, user_size: u64, intersection_ub: u64) -> f64 {
        if let Similarity::Custom(f) = self {
            return f.upper_bound(user_size, intersection_ub).clamp(0.0, 1.0);
        }
        if intersection_ub == 0 {
            return 0.0;
        }
        let ub = intersection_ub as f64;
        let bound = match self {
            Similarity::Jaccard => ub / user_size as f64,
            Similarity::Overlap => ub / user_size.min(1) as f64,
            Similarity::Dice => 2.0 * ub / (user_size + 1) as f64,
            Similarity::Custom(_) => unreachable!(),
        };
        bound.min(1.0)
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            Similarity::Custom(f) => f.tolerance(),
            _ => 0.0,
        }
    }
}

impl fmt::Display for Similarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How per-pair degrees of multi-valued attributes are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MultiValueMode {
    #[default]
    Max,
    Min,
    Avg,
}
