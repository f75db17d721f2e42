use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// An r x n table of shaded boxes.
///
/// Box (i, j) is shaded when the constraint `y_i + z_j <= v_ij` is tight,
/// equivalently when x_ij does not divide the face label. The derived
/// ordering is lexicographic on the row-major boolean string, which is the
/// canonical order used for vertices and faces.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Grid {
    rows: usize,
    cols: usize,
    cells: Vec<bool>,
}

impl Grid {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Grid {
            rows,
            cols,
            cells: vec![false; rows * cols],
        }
    }

    pub fn full(rows: usize, cols: usize) -> Self {
        Grid {
            rows,
            cols,
            cells: vec![true; rows * cols],
        }
    }

    pub fn from_shaded(rows: usize, cols: usize, shaded: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(rows, cols);
        for &(i, j) in shaded {
            g.set(i, j, true);
        }
        g
    }

    /// Parses a row-major bitstring, `'1'` = shaded.
    pub fn from_bits(rows: usize, cols: usize, bits: &str) -> Result<Self> {
        let cells: Vec<bool> = bits
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '|')
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                other => Err(Error::Input(format!("invalid grid character {other:?}"))),
            })
            .collect::<Result<_>>()?;
        if cells.len() != rows * cols {
            return Err(Error::Input(format!(
                "grid bitstring has {} cells, expected {}",
                cells.len(),
                rows * cols
            )));
        }
        Ok(Grid { rows, cols, cells })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_shaded(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, shaded: bool) {
        self.cells[i * self.cols + j] = shaded;
    }

    pub fn with(&self, i: usize, j: usize, shaded: bool) -> Self {
        let mut g = self.clone();
        g.set(i, j, shaded);
        g
    }

    pub fn shaded_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn unshaded_count(&self) -> usize {
        self.cells.len() - self.shaded_count()
    }

    pub fn shaded(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.boxes().filter(|&(i, j)| self.is_shaded(i, j))
    }

    pub fn unshaded(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.boxes().filter(|&(i, j)| !self.is_shaded(i, j))
    }

    fn boxes(&self) -> impl Iterator<Item = (usize, usize)> {
        let cols = self.cols;
        (0..self.rows).flat_map(move |i| (0..cols).map(move |j| (i, j)))
    }

    pub fn row_shaded(&self, i: usize) -> bool {
        (0..self.cols).any(|j| self.is_shaded(i, j))
    }

    pub fn col_shaded(&self, j: usize) -> bool {
        (0..self.rows).any(|i| self.is_shaded(i, j))
    }

    /// Rows shaded in column j.
    pub fn col_rows(&self, j: usize) -> Vec<usize> {
        (0..self.rows).filter(|&i| self.is_shaded(i, j)).collect()
    }

    /// Every row and every column has a shaded box (the bounded-face condition).
    pub fn covers_all_lines(&self) -> bool {
        (0..self.rows).all(|i| self.row_shaded(i)) && (0..self.cols).all(|j| self.col_shaded(j))
    }

    /// Whether the subgrid `self` is contained in `other` (shaded boxes subset).
    pub fn is_subset_of(&self, other: &Grid) -> bool {
        self.cells.iter().zip(&other.cells).all(|(&a, &b)| !a || b)
    }

    /// Component id per node of the bipartite graph on rows (0..r) and
    /// columns (r..r+n) whose edges are the shaded boxes.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let (r, n) = (self.rows, self.cols);
        let mut comp = vec![usize::MAX; r + n];
        let mut count = 0;
        for start in 0..r + n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            let mut queue = VecDeque::from([start]);
            while let Some(node) = queue.pop_front() {
                for next in self.neighbours(node) {
                    if comp[next] == usize::MAX {
                        comp[next] = count;
                        queue.push_back(next);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    /// Neighbours of a bipartite node (rows 0..r, columns r..r+n).
    pub fn neighbours(&self, node: usize) -> Vec<usize> {
        let r = self.rows;
        if node < r {
            (0..self.cols)
                .filter(|&j| self.is_shaded(node, j))
                .map(|j| r + j)
                .collect()
        } else {
            let j = node - r;
            (0..r).filter(|&i| self.is_shaded(i, j)).collect()
        }
    }

    /// r + n - 1 shaded boxes forming a connected, hence acyclic, graph.
    pub fn is_spanning_tree(&self) -> bool {
        self.shaded_count() + 1 == self.rows + self.cols && self.components().0 == 1
    }

    pub fn transpose(&self) -> Grid {
        let mut t = Grid::empty(self.cols, self.rows);
        for (i, j) in self.shaded() {
            t.set(j, i, true);
        }
        t
    }

    /// Row-major bitstring, `'1'` = shaded.
    pub fn bits(&self) -> String {
        self.cells.iter().map(|&c| if c { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bits_round_trip_and_order() {
        let g = Grid::from_bits(2, 3, "101|011").unwrap();
        assert_eq!(g.bits(), "101011");
        assert!(g.is_shaded(0, 0) && !g.is_shaded(0, 1));
        assert!(Grid::from_bits(2, 2, "10").is_err());
        assert!(Grid::from_bits(1, 2, "1x").is_err());
        let a = Grid::from_bits(1, 3, "011").unwrap();
        let b = Grid::from_bits(1, 3, "100").unwrap();
        assert!(a < b);
    }

    #[test]
    fn spanning_trees() {
        let tree = Grid::from_bits(2, 2, "11|01").unwrap();
        assert!(tree.is_spanning_tree());
        let cycle = Grid::full(2, 2);
        assert!(!cycle.is_spanning_tree());
        let forest = Grid::from_bits(2, 3, "110|001").unwrap();
        assert!(!forest.is_spanning_tree());
        assert_eq!(forest.components().0, 2);
        assert!(forest.covers_all_lines());
        assert!(!Grid::from_bits(2, 2, "11|00").unwrap().covers_all_lines());
    }

    #[test]
    fn transpose_swaps_boxes() {
        let g = Grid::from_bits(2, 3, "100|011").unwrap();
        let t = g.transpose();
        assert_eq!(t.bits(), "100101");
        assert_eq!(t.transpose(), g);
    }
}
