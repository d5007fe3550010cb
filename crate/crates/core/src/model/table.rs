use super::Problem;
use crate::par::{for_each_chunk_mut, Parallelism};

/// Precomputed matching vectors for every (object, user) pair, laid out
/// object-major: `degrees[(o * users + u) * dims + k]`.
///
/// Rows can be injected or edited directly, which is how the ranking axiom
/// suites build instances without going through hierarchies.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeTable {
    objects: usize,
    users: usize,
    dims: usize,
    degrees: Vec<f64>,
    objective_dims: usize,
    objective: Vec<f64>,
    specified: Vec<Vec<usize>>,
    tolerance: f64,
}

/// One object's matching vectors for all users plus its objective values.
#[derive(Debug, Clone, Copy)]
pub struct Profile<'a> {
    pub degrees: &'a [f64],
    pub objective: &'a [f64],
}

impl DegreeTable {
    /// Zero-filled table. `specified[u]` lists the attributes user `u` cares
    /// about.
    pub fn new(objects: usize, dims: usize, specified: Vec<Vec<usize>>, objective_dims: usize) -> Self {
        let users = specified.len();
        DegreeTable {
            objects,
            users,
            dims,
            degrees: vec![0.0; objects * users * dims],
            objective_dims,
            objective: vec![0.0; objects * objective_dims],
            specified,
            tolerance: 0.0,
        }
    }

    pub fn build(p: &Problem, mode: Parallelism) -> Self {
        let specified = p.users.iter().map(|u| u.specified().collect()).collect();
        let mut t = DegreeTable::new(p.objects.len(), p.dims(), specified, p.domain.objective().len());
        t.tolerance = p.matcher.similarity.tolerance();
        let (users, dims) = (t.users, t.dims);
        if users * dims > 0 {
            for_each_chunk_mut(mode, &mut t.degrees, users * dims, |o, row| {
                for (u, user) in p.users.iter().enumerate() {
                    let out = &mut row[u * dims..(u + 1) * dims];
                    p.matcher.fill(&p.domain, &p.objects[o], user, out);
                }
            });
        }
        for (o, rec) in p.objects.iter().enumerate() {
            t.objective_mut(o).copy_from_slice(&rec.objective);
        }
        t
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn objective_dims(&self) -> usize {
        self.objective_dims
    }

    /// Slack for degree comparisons; zero for exact built-in functions.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn set_tolerance(&mut self, tol: f64) {
        self.tolerance = tol;
    }

    pub fn specified(&self, u: usize) -> &[usize] {
        &self.specified[u]
    }

    pub fn vector(&self, o: usize, u: usize) -> &[f64] {
        let at = (o * self.users + u) * self.dims;
        &self.degrees[at..at + self.dims]
    }

    pub fn vector_mut(&mut self, o: usize, u: usize) -> &mut [f64] {
        let at = (o * self.users + u) * self.dims;
        &mut self.degrees[at..at + self.dims]
    }

    pub fn set_vector(&mut self, o: usize, u: usize, v: &[f64]) {
        assert_eq!(v.len(), self.dims);
        self.vector_mut(o, u).copy_from_slice(v);
    }

    pub fn objective(&self, o: usize) -> &[f64] {
        let at = o * self.objective_dims;
        &self.objective[at..at + self.objective_dims]
    }

    pub fn objective_mut(&mut self, o: usize) -> &mut [f64] {
        let at = o * self.objective_dims;
        &mut self.objective[at..at + self.objective_dims]
    }

    pub fn profile(&self, o: usize) -> Profile<'_> {
        let w = self.users * self.dims;
        Profile {
            degrees: &self.degrees[o * w..(o + 1) * w],
            objective: self.objective(o),
        }
    }

    /// `‖m_o^u‖`, indifferent attributes included.
    pub fn norm(&self, o: usize, u: usize) -> f64 {
        self.vector(o, u).iter().sum()
    }

    /// Sum of the norms over all users.
    pub fn total_norm(&self, o: usize) -> f64 {
        let w = self.users * self.dims;
        self.degrees[o * w..(o + 1) * w].iter().sum()
    }

    /// Mean of the degrees user `u` actually specified.
    pub fn user_score(&self, o: usize, u: usize) -> f64 {
        let v = self.vector(o, u);
        let s = &self.specified[u];
        if s.is_empty() {
            return 1.0;
        }
        s.iter().map(|&k| v[k]).sum::<f64>() / s.len() as f64
    }

    /// Appends an object; `degrees` is its full row (`users * dims`).
    pub fn push_object(&mut self, degrees: &[f64], objective: &[f64]) -> usize {
        assert_eq!(degrees.len(), self.users * self.dims);
        assert_eq!(objective.len(), self.objective_dims);
        self.degrees.extend_from_slice(degrees);
        self.objective.extend_from_slice(objective);
        self.objects += 1;
        self.objects - 1
    }

    /// Appends a user; `row(o)` supplies its vector for object `o`.
    pub fn push_user(&mut self, specified: Vec<usize>, row: impl Fn(usize) -> Vec<f64>) -> usize {
        let old = self.users;
        let mut degrees = Vec::with_capacity(self.objects * (old + 1) * self.dims);
        for o in 0..self.objects {
            let at = o * old * self.dims;
            degrees.extend_from_slice(&self.degrees[at..at + old * self.dims]);
            let v = row(o);
            assert_eq!(v.len(), self.dims);
            degrees.extend_from_slice(&v);
        }
        self.degrees = degrees;
        self.specified.push(specified);
        self.users += 1;
        old
    }

    /// New table holding the given objects, in the given order.
    pub fn select_objects(&self, keep: &[usize]) -> DegreeTable {
        let w = self.users * self.dims;
        let mut t = DegreeTable {
            objects: keep.len(),
            degrees: Vec::with_capacity(keep.len() * w),
            objective: Vec::with_capacity(keep.len() * self.objective_dims),
            specified: self.specified.clone(),
            ..self.empty_like()
        };
        for &o in keep {
            t.degrees.extend_from_slice(&self.degrees[o * w..(o + 1) * w]);
            t.objective.extend_from_slice(self.objective(o));
        }
        t
    }

    /// New table holding the given users, in the given order.
    pub fn select_users(&self, keep: &[usize]) -> DegreeTable {
        let mut t = DegreeTable {
            users: keep.len(),
            degrees: Vec::with_capacity(self.objects * keep.len() * self.dims),
            objective: self.objective.clone(),
            specified: keep.iter().map(|&u| self.specified[u].clone()).collect(),
            ..self.empty_like()
        };
        for o in 0..self.objects {
            for &u in keep {
                t.degrees.extend_from_slice(self.vector(o, u));
            }
        }
        t
    }

    fn empty_like(&self) -> DegreeTable {
        DegreeTable {
            objects: self.objects,
            users: self.users,
            dims: self.dims,
            degrees: Vec::new(),
            objective_dims: self.objective_dims,
            objective: Vec::new(),
            specified: Vec::new(),
            tolerance: self.tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn modes_build_same_table() {
        let p = fixtures::running_example();
        let a = DegreeTable::build(&p, Parallelism::Sequential);
        let b = DegreeTable::build(&p, Parallelism::Parallel);
        assert_eq!(a, b);
        assert_eq!(a.vector(0, 0), p.matching_vector(0, 0).degrees.as_slice());
    }

    #[test]
    fn no_users_gives_zero_columns() {
        let mut p = fixtures::running_example();
        p.users.clear();
        let t = DegreeTable::build(&p, Parallelism::Parallel);
        assert_eq!((t.objects(), t.users()), (4, 0));
        assert!(t.profile(2).degrees.is_empty());
    }

    #[test]
    fn edit_operations() {
        let mut t = DegreeTable::new(2, 2, vec![vec![0], vec![0, 1]], 0);
        t.set_vector(0, 1, &[0.5, 1.0]);
        assert_eq!(t.user_score(0, 1), 0.75);
        assert_eq!(t.user_score(0, 0), 0.0);
        let o = t.push_object(&[1.0, 1.0, 0.25, 0.25], &[]);
        assert_eq!(o, 2);
        let u = t.push_user(vec![1], |o| vec![0.0, o as f64 / 4.0]);
        assert_eq!(u, 2);
        assert_eq!(t.vector(2, 2), &[0.0, 0.5]);
        assert_eq!(t.vector(2, 1), &[0.25, 0.25]);
        let s = t.select_users(&[2, 1, 0]);
        assert_eq!(s.vector(0, 1), &[0.5, 1.0]);
        assert_eq!(s.specified(0), &[1]);
        let r = t.select_objects(&[2, 0]);
        assert_eq!(r.vector(1, 1), &[0.5, 1.0]);
        assert_eq!(r.objects(), 2);
    }
}
