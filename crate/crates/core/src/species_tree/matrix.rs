use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Hierarchy, Label, RootedTree};

/// Binary species × cluster matrix; column p lists the members of cluster p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMatrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl ClusterMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        ClusterMatrix { rows, cols, data: vec![false; rows * cols] }
    }

    /// Build from column member lists (row indices).
    pub fn from_columns(rows: usize, columns: &[Vec<usize>]) -> Self {
        let mut m = ClusterMatrix::new(rows, columns.len());
        for (p, col) in columns.iter().enumerate() {
            for &a in col {
                m.set(a, p, true);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, a: usize, p: usize) -> bool {
        self.data[a * self.cols + p]
    }

    pub fn set(&mut self, a: usize, p: usize, v: bool) {
        self.data[a * self.cols + p] = v;
    }

    pub fn column(&self, p: usize) -> Vec<usize> {
        (0..self.rows).filter(|&a| self.get(a, p)).collect()
    }

    pub fn is_trivial(&self, p: usize) -> bool {
        (0..self.rows).all(|a| !self.get(a, p))
    }

    /// Columns p and q pass the three-gamete test.
    pub fn compatible(&self, p: usize, q: usize) -> bool {
        let mut seen = [false; 3];
        for a in 0..self.rows {
            match (self.get(a, p), self.get(a, q)) {
                (false, true) => seen[0] = true,
                (true, false) => seen[1] = true,
                (true, true) => seen[2] = true,
                _ => {}
            }
        }
        !(seen[0] && seen[1] && seen[2])
    }
}

/// Tree whose clusters are the non-trivial columns, the singletons and the
/// whole species set.
pub fn decode_matrix(m: &ClusterMatrix, species: &[Label]) -> Result<RootedTree> {
    if species.len() != m.rows() {
        return Err(Error::Internal(format!("matrix has {} rows for {} species", m.rows(), species.len())));
    }
    for p in 0..m.cols() {
        for q in p + 1..m.cols() {
            if !m.compatible(p, q) {
                return Err(Error::GameteConflict { p, q });
            }
        }
    }
    let clusters = (0..m.cols())
        .filter(|&p| !m.is_trivial(p))
        .map(|p| m.column(p).into_iter().map(|a| species[a].clone()).collect::<BTreeSet<Label>>());
    let h = Hierarchy::new(species.iter().cloned().collect(), clusters)?;
    RootedTree::from_hierarchy(&h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{label, newick};

    fn sp() -> Vec<Label> {
        ["a", "b", "c", "d"].iter().map(|s| label(s)).collect()
    }

    #[test]
    fn zero_matrix_is_star() {
        let t = decode_matrix(&ClusterMatrix::new(4, 2), &sp()).unwrap();
        assert_eq!(newick::write(&t), "(a,b,c,d);");
    }

    #[test]
    fn one_cluster() {
        let m = ClusterMatrix::from_columns(4, &[vec![0, 1], vec![]]);
        assert_eq!(newick::write(&decode_matrix(&m, &sp()).unwrap()), "((a,b),c,d);");
    }

    #[test]
    fn gamete_conflict() {
        let m = ClusterMatrix::from_columns(4, &[vec![0, 1], vec![0, 2]]);
        assert!(matches!(decode_matrix(&m, &sp()), Err(Error::GameteConflict { p: 0, q: 1 })));
    }
}
