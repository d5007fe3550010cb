//! Synthetic workloads: every attribute shares one complete binary hierarchy,
//! objects and users take one value per attribute from a fixed level.

use std::fmt::Write as _;

use gmco_core::hierarchy::{Hierarchy, NodeId};
use gmco_core::model::{Domain, Matcher, ObjectRecord, Problem, Similarity, UserPrefs};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::WorkbenchError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    pub objects: usize,
    pub attributes: usize,
    pub users: usize,
    /// Height of the binary hierarchy; it has `2^height` leaves.
    pub height: u32,
    /// Level of object values, 1 being the leaves.
    pub object_level: u32,
    pub user_level: u32,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            objects: 100_000,
            attributes: 4,
            users: 8,
            height: 8,
            object_level: 1,
            user_level: 2,
            seed: 1,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<(), WorkbenchError> {
        let bad = |m: String| Err(WorkbenchError::Config(m));
        if self.objects == 0 || self.attributes == 0 || self.users == 0 {
            return bad("objects, attributes and users must be positive".into());
        }
        if !(1..=20).contains(&self.height) {
            return bad(format!("height {} outside 1..=20", self.height));
        }
        if self.object_level < 1 || (self.object_level >= self.height && self.height > 1) {
            return bad(format!("object level {} outside 1..{}", self.object_level, self.height));
        }
        if self.user_level < 1 || self.user_level > self.height {
            return bad(format!("user level {} outside 1..={}", self.user_level, self.height));
        }
        Ok(())
    }
}

/// Label of the `i`-th node (left to right) at `level` of attribute `attr`.
pub fn node_label(attr: usize, height: u32, level: u32, i: usize) -> String {
    if level == height + 1 {
        format!("A{attr}")
    } else {
        format!("A{attr}.{level}.{i}")
    }
}

/// Complete binary hierarchy of the given height in document form.
pub fn binary_document(attr: usize, height: u32) -> String {
    let mut out = String::new();
    let mut stack = vec![(height + 1, 0usize)];
    while let Some((level, i)) = stack.pop() {
        let depth = height + 1 - level;
        let _ = writeln!(out, "{depth}\t{}", node_label(attr, height, level, i));
        if level > 1 {
            stack.push((level - 1, 2 * i + 1));
            stack.push((level - 1, 2 * i));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SyntheticData {
    pub hierarchies: Vec<Hierarchy>,
    pub objects: Vec<ObjectRecord>,
    pub users: Vec<UserPrefs>,
}

impl SyntheticData {
    pub fn into_problem(self, similarity: Similarity) -> Problem {
        let domain = Domain::new(self.hierarchies).expect("distinct attribute names");
        Problem::new(domain, self.objects, self.users, Matcher::new(similarity)).expect("generated data is valid")
    }
}

pub fn gen_synthetic(cfg: &SyntheticConfig) -> Result<SyntheticData, WorkbenchError> {
    cfg.validate()?;
    let h = cfg.height;
    let hierarchies: Vec<Hierarchy> = (0..cfg.attributes)
        .map(|k| Hierarchy::parse(&binary_document(k, h)).expect("binary hierarchy parses"))
        .collect();
    // Node ids of every level, resolved once.
    let level_nodes = |level: u32| -> Vec<Vec<NodeId>> {
        let width = 1usize << (h + 1 - level);
        hierarchies
            .iter()
            .enumerate()
            .map(|(k, hk)| {
                (0..width)
                    .map(|i| hk.lookup(&node_label(k, h, level, i)).expect("label exists"))
                    .collect()
            })
            .collect()
    };
    let on = level_nodes(cfg.object_level);
    let un = level_nodes(cfg.user_level);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let objects = (0..cfg.objects)
        .map(|i| ObjectRecord {
            id: format!("o{}", i + 1),
            values: on.iter().map(|ns| vec![ns[rng.gen_range(0..ns.len())]]).collect(),
            objective: Vec::new(),
        })
        .collect();
    let users = (0..cfg.users)
        .map(|j| UserPrefs {
            id: format!("u{}", j + 1),
            prefs: un.iter().map(|ns| Some(vec![ns[rng.gen_range(0..ns.len())]])).collect(),
        })
        .collect();
    Ok(SyntheticData {
        hierarchies,
        objects,
        users,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_binary_hierarchy() {
        let cfg = SyntheticConfig {
            objects: 4,
            attributes: 1,
            height: 2,
            user_level: 2,
            ..SyntheticConfig::default()
        };
        let d = gen_synthetic(&cfg).unwrap();
        let h = &d.hierarchies[0];
        assert_eq!(h.leaf_count(), 4);
        assert_eq!(h.len(), 7);
        for o in &d.objects {
            assert!(h.is_leaf(o.values[0][0]));
        }
    }

    #[test]
    fn levels_are_checked() {
        let ok = SyntheticConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            SyntheticConfig { object_level: 0, ..ok.clone() },
            SyntheticConfig { object_level: 8, ..ok.clone() },
            SyntheticConfig { user_level: 9, ..ok.clone() },
            SyntheticConfig { users: 0, ..ok.clone() },
        ] {
            assert!(gen_synthetic(&bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn values_sit_on_requested_levels() {
        let cfg = SyntheticConfig {
            objects: 300,
            height: 5,
            object_level: 2,
            user_level: 3,
            ..SyntheticConfig::default()
        };
        let d = gen_synthetic(&cfg).unwrap();
        let level_of = |h: &Hierarchy, n: NodeId| h.label(n).split('.').nth(1).unwrap().parse::<u32>().unwrap();
        for o in &d.objects {
            for (k, v) in o.values.iter().enumerate() {
                assert_eq!(level_of(&d.hierarchies[k], v[0]), 2);
            }
        }
        for u in &d.users {
            for (k, v) in u.prefs.iter().enumerate() {
                assert_eq!(level_of(&d.hierarchies[k], v.as_ref().unwrap()[0]), 3);
            }
        }
    }
}
