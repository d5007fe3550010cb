//! Objects, user preferences and matching degrees.

pub mod io;
mod similarity;
mod table;

pub use similarity::{MultiValueMode, SetSimilarity, Similarity};
pub use table::{DegreeTable, Profile};

use crate::error::{Error, Result};
use crate::hierarchy::{
    label_dag, set_cardinalities, Hierarchy, IntervalLabeling, IntervalSet, NodeId,
};
use crate::par::Parallelism;

#[derive(Debug, Clone)]
pub struct Attribute {
    pub hierarchy: Hierarchy,
    pub labeling: IntervalLabeling,
}

impl Attribute {
    pub fn new(hierarchy: Hierarchy) -> Self {
        let labeling = label_dag(&hierarchy);
        Attribute {
            hierarchy,
            labeling,
        }
    }

    pub fn name(&self) -> &str {
        self.hierarchy.name()
    }

    pub fn intervals(&self, node: NodeId) -> &IntervalSet {
        self.labeling.intervals(node)
    }
}

/// The subjective attributes (one hierarchy each) and the names of the
/// objective attributes, where larger values are better.
#[derive(Debug, Clone, Default)]
pub struct Domain {
    attributes: Vec<Attribute>,
    objective: Vec<String>,
}

impl Domain {
    pub fn new(hierarchies: Vec<Hierarchy>) -> Result<Self> {
        let mut attributes: Vec<Attribute> = Vec::with_capacity(hierarchies.len());
        for h in hierarchies {
            if attributes.iter().any(|a| a.name() == h.name()) {
                return Err(Error::Config(format!("attribute `{}` declared twice", h.name())));
            }
            attributes.push(Attribute::new(h));
        }
        Ok(Domain {
            attributes,
            objective: Vec::new(),
        })
    }

    pub fn with_objective(mut self, names: Vec<String>) -> Self {
        self.objective = names;
        self
    }

    pub fn set_objective(&mut self, names: Vec<String>) {
        self.objective = names;
    }

    pub fn dims(&self) -> usize {
        self.attributes.len()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, k: usize) -> &Attribute {
        &self.attributes[k]
    }

    pub fn objective(&self) -> &[String] {
        &self.objective
    }

    pub fn attribute_index(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|a| a.name() == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn intervals(&self, k: usize, node: NodeId) -> &IntervalSet {
        self.attributes[k].intervals(node)
    }

    fn check_values(&self, id: &str, k: usize, values: &[NodeId]) -> Result<()> {
        let h = &self.attributes[k].hierarchy;
        if values.is_empty() {
            return Err(Error::InvalidRecord {
                id: id.to_string(),
                msg: format!("no value for `{}`", h.name()),
            });
        }
        if let Some(v) = values.iter().find(|v| v.index() >= h.len()) {
            return Err(Error::InvalidRecord {
                id: id.to_string(),
                msg: format!("node {} does not exist in `{}`", v.0, h.name()),
            });
        }
        Ok(())
    }

    pub fn check_object(&self, o: &ObjectRecord) -> Result<()> {
        if o.values.len() != self.dims() {
            return Err(Error::Dimension {
                expected: self.dims(),
                got: o.values.len(),
            });
        }
        if o.objective.len() != self.objective.len() {
            return Err(Error::Dimension {
                expected: self.objective.len(),
                got: o.objective.len(),
            });
        }
        if let Some(x) = o.objective.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidRecord {
                id: o.id.clone(),
                msg: format!("objective value {x} is not finite"),
            });
        }
        for (k, vals) in o.values.iter().enumerate() {
            self.check_values(&o.id, k, vals)?;
        }
        Ok(())
    }

    pub fn check_user(&self, u: &UserPrefs) -> Result<()> {
        if u.prefs.len() != self.dims() {
            return Err(Error::Dimension {
                expected: self.dims(),
                got: u.prefs.len(),
            });
        }
        if u.specified().next().is_none() {
            return Err(Error::InvalidRecord {
                id: u.id.clone(),
                msg: "indifferent on every attribute".into(),
            });
        }
        for (k, p) in u.prefs.iter().enumerate() {
            if let Some(vals) = p {
                self.check_values(&u.id, k, vals)?;
            }
        }
        Ok(())
    }

    fn resolve(&self, k: usize, labels: &[&str]) -> Result<Vec<NodeId>> {
        labels
            .iter()
            .map(|l| self.attributes[k].hierarchy.require(l))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectRecord {
    pub id: String,
    /// One non-empty value set per subjective attribute.
    pub values: Vec<Vec<NodeId>>,
    pub objective: Vec<f64>,
}

impl ObjectRecord {
    /// Builds a record from labels, one slice of labels per attribute.
    pub fn from_labels(
        domain: &Domain,
        id: &str,
        labels: &[&[&str]],
        objective: Vec<f64>,
    ) -> Result<Self> {
        if labels.len() != domain.dims() {
            return Err(Error::Dimension {
                expected: domain.dims(),
                got: labels.len(),
            });
        }
        let values = labels
            .iter()
            .enumerate()
            .map(|(k, ls)| domain.resolve(k, ls))
            .collect::<Result<_>>()?;
        let o = ObjectRecord {
            id: id.to_string(),
            values,
            objective,
        };
        domain.check_object(&o)?;
        Ok(o)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserPrefs {
    pub id: String,
    /// `None` marks indifference.
    pub prefs: Vec<Option<Vec<NodeId>>>,
}

impl UserPrefs {
    pub fn from_labels(domain: &Domain, id: &str, labels: &[Option<&[&str]>]) -> Result<Self> {
        if labels.len() != domain.dims() {
            return Err(Error::Dimension {
                expected: domain.dims(),
                got: labels.len(),
            });
        }
        let prefs = labels
            .iter()
            .enumerate()
            .map(|(k, ls)| ls.map(|ls| domain.resolve(k, ls)).transpose())
            .collect::<Result<_>>()?;
        let u = UserPrefs {
            id: id.to_string(),
            prefs,
        };
        domain.check_user(&u)?;
        Ok(u)
    }

    /// Indices of the attributes this user cares about.
    pub fn specified(&self) -> impl Iterator<Item = usize> + '_ {
        self.prefs
            .iter()
            .enumerate()
            .filter_map(|(k, p)| p.as_ref().map(|_| k))
    }

    pub fn is_indifferent(&self, k: usize) -> bool {
        self.prefs[k].is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingVector {
    pub degrees: Vec<f64>,
    pub norm: f64,
}

impl MatchingVector {
    pub fn new(degrees: Vec<f64>) -> Self {
        let norm = degrees.iter().sum();
        MatchingVector { degrees, norm }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Matcher {
    pub similarity: Similarity,
    pub multi: MultiValueMode,
}

impl Matcher {
    pub fn new(similarity: Similarity) -> Self {
        Matcher {
            similarity,
            multi: MultiValueMode::Max,
        }
    }

    pub fn pair_degree(&self, x: &IntervalSet, y: &IntervalSet) -> f64 {
        self.similarity.degree(&set_cardinalities(x, y))
    }

    /// Degree of object values `ov` against user values `uv` on attribute `k`.
    pub fn combine(&self, domain: &Domain, k: usize, ov: &[NodeId], uv: &[NodeId]) -> f64 {
        let pairs = ov.iter().flat_map(|&a| {
            uv.iter()
                .map(move |&b| self.pair_degree(domain.intervals(k, a), domain.intervals(k, b)))
        });
        match self.multi {
            MultiValueMode::Max => pairs.fold(0.0, f64::max),
            MultiValueMode::Min => pairs.fold(1.0, f64::min),
            MultiValueMode::Avg => {
                let (s, n) = pairs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
                s / n as f64
            }
        }
    }

    pub fn degree(&self, domain: &Domain, o: &ObjectRecord, u: &UserPrefs, k: usize) -> f64 {
        match &u.prefs[k] {
            None => 1.0,
            Some(uv) => self.combine(domain, k, &o.values[k], uv),
        }
    }

    pub fn fill(&self, domain: &Domain, o: &ObjectRecord, u: &UserPrefs, out: &mut [f64]) {
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.degree(domain, o, u, k);
        }
    }

    pub fn vector(&self, domain: &Domain, o: &ObjectRecord, u: &UserPrefs) -> MatchingVector {
        let mut d = vec![0.0; domain.dims()];
        self.fill(domain, o, u, &mut d);
        MatchingVector::new(d)
    }
}

/// Everything a query needs: domain, catalog, group and matching function.
#[derive(Debug, Clone)]
pub struct Problem {
    pub domain: Domain,
    pub objects: Vec<ObjectRecord>,
    pub users: Vec<UserPrefs>,
    pub matcher: Matcher,
}

impl Problem {
    pub fn new(
        domain: Domain,
        objects: Vec<ObjectRecord>,
        users: Vec<UserPrefs>,
        matcher: Matcher,
    ) -> Result<Self> {
        for o in &objects {
            domain.check_object(o)?;
        }
        for u in &users {
            domain.check_user(u)?;
        }
        Ok(Problem {
            domain,
            objects,
            users,
            matcher,
        })
    }

    pub fn dims(&self) -> usize {
        self.domain.dims()
    }

    /// Degree of object `o` to user `u` on the attribute called `attribute`.
    pub fn matching_degree(&self, o: usize, u: usize, attribute: &str) -> Result<f64> {
        let k = self.domain.attribute_index(attribute)?;
        Ok(self
            .matcher
            .degree(&self.domain, &self.objects[o], &self.users[u], k))
    }

    pub fn matching_vector(&self, o: usize, u: usize) -> MatchingVector {
        self.matcher
            .vector(&self.domain, &self.objects[o], &self.users[u])
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.id == id)
    }

    pub fn ids(&self, objects: &[usize]) -> Vec<String> {
        objects.iter().map(|&i| self.objects[i].id.clone()).collect()
    }

    pub fn degree_table(&self, mode: Parallelism) -> DegreeTable {
        DegreeTable::build(self, mode)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn business_casual_against_casual() {
        let p = fixtures::running_example();
        assert_eq!(p.matching_degree(0, 0, "Attire").unwrap(), 0.5);
        assert!(matches!(
            p.matching_degree(0, 0, "Colour"),
            Err(Error::UnknownAttribute(_))
        ));
    }

    #[test]
    fn indifferent_is_one() {
        let p = fixtures::running_example();
        // u2 only specifies cuisine and parking
        let v = p.matching_vector(3, 1);
        assert_eq!(&v.degrees[1..4], &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn multi_value_takes_best_pair() {
        let p = fixtures::running_example();
        let d = &p.domain;
        let o = ObjectRecord::from_labels(
            d,
            "m",
            &[&["French", "Greek"], &["Formal"], &["Astoria"], &["$"], &["No"]],
            vec![],
        )
        .unwrap();
        let u = UserPrefs::from_labels(d, "v", &[Some(&["French"]), None, None, None, None])
            .unwrap();
        assert_eq!(p.matcher.degree(d, &o, &u, 0), 1.0);

        let mut m = p.matcher.clone();
        m.multi = MultiValueMode::Min;
        assert_eq!(m.degree(d, &o, &u, 0), 0.0);
        m.multi = MultiValueMode::Avg;
        assert_eq!(m.degree(d, &o, &u, 0), 0.5);
    }

    #[test]
    fn rejects_bad_records() {
        let p = fixtures::running_example();
        let d = &p.domain;
        let none: Option<&[&str]> = None;
        assert!(UserPrefs::from_labels(d, "x", &[none; 5]).is_err());
        assert!(ObjectRecord::from_labels(d, "x", &[&["French"]], vec![]).is_err());
        assert!(ObjectRecord::from_labels(
            d,
            "x",
            &[&["Pizza"], &["Formal"], &["Astoria"], &["$"], &["No"]],
            vec![]
        )
        .is_err());
        let bad = ObjectRecord {
            id: "x".into(),
            values: vec![vec![], vec![], vec![], vec![], vec![]],
            objective: vec![],
        };
        assert!(d.check_object(&bad).is_err());
    }
}
