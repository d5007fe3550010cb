//! The four-restaurant, three-user example bundled with the crate.

use crate::hierarchy::Hierarchy;
use crate::model::{io, Domain, Matcher, Problem, Similarity};

const DIR: &str = "running_example";

pub const HIERARCHIES: [(&str, &str); 5] = [
    ("cuisine.hier", include_str!("../fixtures/running_example/cuisine.hier")),
    ("attire.hier", include_str!("../fixtures/running_example/attire.hier")),
    ("place.hier", include_str!("../fixtures/running_example/place.hier")),
    ("price.hier", include_str!("../fixtures/running_example/price.hier")),
    ("parking.hier", include_str!("../fixtures/running_example/parking.hier")),
];
pub const OBJECTS: &str = include_str!("../fixtures/running_example/objects.csv");
pub const USERS: &str = include_str!("../fixtures/running_example/users.csv");

pub fn running_example_domain() -> Domain {
    let hs = HIERARCHIES
        .iter()
        .map(|(_, text)| Hierarchy::parse(text).expect("bundled hierarchy"))
        .collect();
    Domain::new(hs).expect("bundled domain")
}

/// Running example under Jaccard matching.
pub fn running_example() -> Problem {
    let mut domain = running_example_domain();
    let objects = io::parse_objects(OBJECTS, &mut domain, &format!("{DIR}/objects.csv"))
        .expect("bundled objects");
    let users = io::parse_users(USERS, &domain, &format!("{DIR}/users.csv")).expect("bundled users");
    Problem::new(domain, objects, users, Matcher::new(Similarity::Jaccard)).expect("bundled problem")
}
