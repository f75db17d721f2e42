//! Exact min-plus arithmetic over the rationals.
//!
//! Points of tropical projective space are stored by their canonical
//! representative (first coordinate zero). Tropical determinants report how
//! many permutations attain the minimum so that singularity (a tie) is an
//! exact predicate.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, GenericityWitness, Result};

pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-1.25"`.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let s = text.trim();
    let bad = || Error::Input(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Input(format!("zero denominator in {text:?}")));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut numer = BigInt::from_str(&digits).map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let denom = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(Rat::new(numer, denom));
    }
    BigInt::from_str(s).map(Rat::from_integer).map_err(|_| bad())
}

/// Tropical sum: the minimum.
pub fn trop_add(a: &Rat, b: &Rat) -> Rat {
    a.min(b).clone()
}

/// Tropical product: ordinary addition.
pub fn trop_mul(a: &Rat, b: &Rat) -> Rat {
    a + b
}

/// A point of TP^{n-1}, stored with first coordinate 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointTP {
    coords: Vec<Rat>,
}

impl PointTP {
    pub fn new(coords: Vec<Rat>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Input(format!(
                "a point of tropical projective space needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        let shift = coords[0].clone();
        let coords = coords.into_iter().map(|c| c - &shift).collect();
        Ok(PointTP { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Number of ambient coordinates n.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

impl fmt::Display for PointTP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coords.iter().join(","))
    }
}

/// The r x n matrix of input coordinates; row i is the representative of v_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl WeightMatrix {
    pub fn new(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::Input("at least one point is required".into()));
        }
        let n = rows[0].len();
        if n < 2 {
            return Err(Error::Input(format!(
                "points need at least 2 coordinates, got {n}"
            )));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != n) {
            return Err(Error::Input(format!(
                "point {} has {} coordinates, expected {n}",
                i + 1,
                row.len()
            )));
        }
        Ok(WeightMatrix {
            rows: r,
            cols: n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|row| row.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn from_points(points: &[PointTP]) -> Result<Self> {
        Self::new(points.iter().map(|p| p.coords.clone()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn point(&self, i: usize) -> PointTP {
        PointTP::new(self.row(i).to_vec()).expect("rows have at least two entries")
    }

    pub fn points(&self) -> Vec<PointTP> {
        (0..self.rows).map(|i| self.point(i)).collect()
    }

    /// Transpose, as r points in TP^{n-1} become n points in TP^{r-1}.
    ///
    /// Fails when r = 1, since the result would live in TP^0.
    pub fn transpose(&self) -> Result<Self> {
        Self::new(
            (0..self.cols)
                .map(|j| (0..self.rows).map(|i| self.get(i, j).clone()).collect())
                .collect(),
        )
    }

    /// Adds `c` to every entry of row `i` (a change of projective representative).
    pub fn shift_row(&self, i: usize, c: &Rat) -> Self {
        let mut out = self.clone();
        for j in 0..self.cols {
            out.entries[i * self.cols + j] += c;
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|&i| cols.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// `(c_1 ⊙ p_1) ⊕ ... ⊕ (c_m ⊙ p_m)`, normalized.
pub fn trop_combination(points: &[PointTP], coeffs: &[Rat]) -> Result<PointTP> {
    if points.is_empty() || points.len() != coeffs.len() {
        return Err(Error::Input(format!(
            "need equally many points and coefficients (got {} and {})",
            points.len(),
            coeffs.len()
        )));
    }
    let n = points[0].len();
    if points.iter().any(|p| p.len() != n) {
        return Err(Error::Input("points have different dimensions".into()));
    }
    let coords = (0..n)
        .map(|j| {
            points
                .iter()
                .zip(coeffs)
                .map(|(p, c)| trop_mul(c, &p.coords[j]))
                .reduce(|a, b| trop_add(&a, &b))
                .expect("non-empty")
        })
        .collect();
    PointTP::new(coords)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TDetResult {
    pub value: Rat,
    /// Number of permutations attaining the minimum.
    pub multiplicity: u64,
}

impl TDetResult {
    pub fn is_singular(&self) -> bool {
        self.multiplicity >= 2
    }
}

const EXHAUSTIVE_LIMIT: usize = 8;
const MATCHING_COUNT_LIMIT: usize = 26;

/// Tropical determinant `min_σ Σ_i m[i][σ(i)]` with the number of minimizers.
///
/// Up to 8x8 every permutation is scanned. Larger matrices go through an
/// exact assignment solver; the minimizing permutations are then exactly the
/// perfect matchings of the zero-reduced-cost subgraph, which are counted
/// with a subset table.
pub fn trop_det(m: &[Vec<Rat>]) -> Result<TDetResult> {
    let k = m.len();
    if k == 0 {
        return Err(Error::Input("tropical determinant of an empty matrix".into()));
    }
    if let Some(row) = m.iter().find(|row| row.len() != k) {
        return Err(Error::Input(format!(
            "tropical determinant needs a square matrix, got a row of length {} in a {k}-row matrix",
            row.len()
        )));
    }
    if k <= EXHAUSTIVE_LIMIT {
        Ok(trop_det_exhaustive(m))
    } else {
        trop_det_assignment(m)
    }
}

fn trop_det_exhaustive(m: &[Vec<Rat>]) -> TDetResult {
    let k = m.len();
    let mut best: Option<Rat> = None;
    let mut count = 0u64;
    for perm in (0..k).permutations(k) {
        let sum: Rat = perm.iter().enumerate().map(|(i, &j)| &m[i][j]).sum();
        match &best {
            Some(b) if sum > *b => {}
            Some(b) if sum == *b => count += 1,
            _ => {
                best = Some(sum);
                count = 1;
            }
        }
    }
    TDetResult {
        value: best.expect("k >= 1"),
        multiplicity: count,
    }
}

fn trop_det_assignment(m: &[Vec<Rat>]) -> Result<TDetResult> {
    let k = m.len();
    if k > MATCHING_COUNT_LIMIT {
        return Err(Error::Config(format!(
            "tropical determinant multiplicity counting supports at most {MATCHING_COUNT_LIMIT}x{MATCHING_COUNT_LIMIT} matrices, got {k}x{k}"
        )));
    }
    let (value, row_pot, col_pot) = hungarian(m);
    // Zero-reduced-cost edges as column bitmasks per row.
    let tight: Vec<u32> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| m[i][j] == &row_pot[i] + &col_pot[j])
                .fold(0u32, |acc, j| acc | (1 << j))
        })
        .collect();
    let mut ways = vec![0u64; 1 << k];
    ways[0] = 1;
    for mask in 0u32..(1 << k) {
        let w = ways[mask as usize];
        if w == 0 {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == k {
            continue;
        }
        let mut free = tight[i] & !mask;
        while free != 0 {
            let j = free.trailing_zeros();
            free &= free - 1;
            let next = (mask | (1 << j)) as usize;
            ways[next] = ways[next].saturating_add(w);
        }
    }
    let multiplicity = ways[(1usize << k) - 1];
    if multiplicity == 0 {
        return Err(Error::Internal(
            "assignment potentials admit no tight perfect matching".into(),
        ));
    }
    Ok(TDetResult {
        value,
        multiplicity,
    })
}

/// Min-cost assignment with exact potentials: returns (optimum, u, v) with
/// `u_i + v_j <= m[i][j]` everywhere and equality on an optimal matching.
fn hungarian(m: &[Vec<Rat>]) -> (Rat, Vec<Rat>, Vec<Rat>) {
    let k = m.len();
    // 1-based arrays; index 0 is the virtual column.
    let mut u = vec![Rat::zero(); k + 1];
    let mut v = vec![Rat::zero(); k + 1];
    let mut matched_row = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for i in 1..=k {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<Rat>> = vec![None; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta: Option<Rat> = None;
            let mut j1 = 0usize;
            for j in 1..=k {
                if used[j] {
                    continue;
                }
                let cur = &m[i0 - 1][j - 1] - &u[i0] - &v[j];
                if minv[j].as_ref().map_or(true, |mv| cur < *mv) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("set above");
                if delta.as_ref().map_or(true, |d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=k {
                if used[j] {
                    u[matched_row[j]] += &delta;
                    v[j] -= &delta;
                } else if let Some(mv) = minv[j].as_mut() {
                    *mv -= &delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let value: Rat = (1..=k)
        .map(|j| &m[matched_row[j] - 1][j - 1])
        .sum();
    (value, u[1..].to_vec(), v[1..].to_vec())
}

/// Whether the minimum over permutations of a square matrix is attained once.
///
/// Aggregates all k! permutations in a 2^k table of (minimum, capped count).
fn has_unique_min_permutation(m: &[Vec<Rat>]) -> bool {
    let k = m.len();
    let mut table: Vec<Option<(Rat, u8)>> = vec![None; 1 << k];
    table[0] = Some((Rat::zero(), 1));
    for mask in 0usize..(1 << k) {
        let Some((base, count)) = table[mask].clone() else {
            continue;
        };
        let i = mask.count_ones() as usize;
        if i == k {
            continue;
        }
        for j in 0..k {
            if mask & (1 << j) != 0 {
                continue;
            }
            let next = mask | (1 << j);
            let cand = &base + &m[i][j];
            match &mut table[next] {
                slot @ None => *slot = Some((cand, count)),
                Some((best, c)) => {
                    if cand < *best {
                        *best = cand;
                        *c = count;
                    } else if cand == *best {
                        *c = (*c + count).min(2);
                    }
                }
            }
        }
    }
    matches!(table[(1 << k) - 1], Some((_, 1)))
}

/// Finds a tropically singular k x k submatrix (2 <= k <= min(r, n)), if any.
pub fn find_singular_minor(v: &WeightMatrix) -> Option<GenericityWitness> {
    let max_k = v.rows().min(v.cols());
    for k in 2..=max_k {
        for rows in (0..v.rows()).combinations(k) {
            for cols in (0..v.cols()).combinations(k) {
                if !has_unique_min_permutation(&v.submatrix(&rows, &cols)) {
                    return Some(GenericityWitness { rows, cols });
                }
            }
        }
    }
    None
}

/// True iff no square submatrix of size at least 2 is tropically singular.
pub fn is_generic(v: &WeightMatrix) -> bool {
    find_singular_minor(v).is_none()
}

pub fn ensure_generic(v: &WeightMatrix) -> Result<()> {
    match find_singular_minor(v) {
        None => Ok(()),
        Some(w) => Err(Error::NonGeneric(w)),
    }
}

/// Least common multiple of all entry denominators.
pub fn common_denominator(v: &WeightMatrix) -> BigInt {
    use num_integer::Integer;
    (0..v.rows())
        .flat_map(|i| v.row(i).iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn max_abs(values: impl IntoIterator<Item = Rat>) -> Rat {
    values
        .into_iter()
        .map(|x| x.abs())
        .max()
        .unwrap_or_else(Rat::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex4pt() -> WeightMatrix {
        WeightMatrix::from_ints(&[
            vec![0, 3, 4],
            vec![0, 5, 2],
            vec![0, 1, 1],
            vec![0, 4, -1],
        ])
        .unwrap()
    }

    #[test]
    fn semiring_operations() {
        assert_eq!(trop_add(&int(3), &int(5)), int(3));
        assert_eq!(trop_add(&int(0), &int(0)), int(0));
        assert_eq!(trop_add(&rat(-1, 2), &rat(1, 3)), rat(-1, 2));
        assert_eq!(trop_mul(&int(3), &int(5)), int(8));
        assert_eq!(trop_mul(&rat(7, 3), &int(0)), rat(7, 3));
        assert_eq!(trop_mul(&rat(1, 2), &rat(-1, 2)), int(0));
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rat("3").unwrap(), int(3));
        assert_eq!(parse_rat(" -4/6 ").unwrap(), rat(-2, 3));
        assert_eq!(parse_rat("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rat("0.5").unwrap(), rat(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("").is_err());
        assert!(parse_rat("1.").is_err());
    }

    #[test]
    fn combinations() {
        let p = PointTP::from_ints(&[0, 3, 4]).unwrap();
        let q = PointTP::from_ints(&[0, 5, 2]).unwrap();
        assert_eq!(trop_combination(&[p.clone()], &[int(5)]).unwrap(), p);
        assert_eq!(
            trop_combination(&[p.clone(), q], &[int(0), int(0)]).unwrap(),
            PointTP::from_ints(&[0, 3, 2]).unwrap()
        );
        let a = PointTP::from_ints(&[0, 0]).unwrap();
        let b = PointTP::from_ints(&[0, 1]).unwrap();
        assert_eq!(
            trop_combination(&[a, b], &[int(0), int(-2)]).unwrap(),
            PointTP::from_ints(&[0, 1]).unwrap()
        );
        let short = PointTP::from_ints(&[0, 1]).unwrap();
        assert!(trop_combination(&[p, short], &[int(0), int(0)]).is_err());
        assert!(trop_combination(&[], &[]).is_err());
    }

    #[test]
    fn point_normalization() {
        let p = PointTP::new(vec![int(2), int(5), int(-1)]).unwrap();
        assert_eq!(p.coords(), &[int(0), int(3), int(-3)]);
        assert!(PointTP::new(vec![int(1)]).is_err());
    }

    #[test]
    fn small_determinants() {
        let d = trop_det(&[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(d, TDetResult { value: int(0), multiplicity: 1 });
        let d = trop_det(&[vec![int(0), int(0)], vec![int(0), int(0)]]).unwrap();
        assert_eq!(d, TDetResult { value: int(0), multiplicity: 2 });
        assert!(d.is_singular());
        assert!(trop_det(&[vec![int(0), int(1)]]).is_err());
    }

    #[test]
    fn cyclic_minor_is_attained_by_antidiagonal_only() {
        let m: Vec<Vec<Rat>> = (0..3)
            .map(|i| (0..3).map(|j| int(i * j)).collect())
            .collect();
        let d = trop_det(&m).unwrap();
        // Antidiagonal: (0,2),(1,1),(2,0) -> 0 + 1 + 0.
        assert_eq!(d, TDetResult { value: int(1), multiplicity: 1 });
    }

    #[test]
    fn assignment_path_agrees_with_scan() {
        // 9x9 all-equal matrix: every permutation ties.
        let flat = vec![vec![int(1); 9]; 9];
        let d = trop_det(&flat).unwrap();
        assert_eq!(d.value, int(9));
        assert_eq!(d.multiplicity, 362_880);
        // 9x9 cyclic matrix: unique antidiagonal minimum.
        let cyc: Vec<Vec<Rat>> = (0..9)
            .map(|i| (0..9).map(|j| int(i * j)).collect())
            .collect();
        let d = trop_det(&cyc).unwrap();
        let anti: i64 = (0..9).map(|i| i * (8 - i)).sum();
        assert_eq!(d, TDetResult { value: int(anti), multiplicity: 1 });
    }

    #[test]
    fn example_and_degenerate_genericity() {
        assert!(is_generic(&ex4pt()));
        let dup = WeightMatrix::from_ints(&[vec![0, 1, 2], vec![0, 1, 2], vec![0, 5, 1]]).unwrap();
        let w = find_singular_minor(&dup).unwrap();
        assert_eq!(w.rows, vec![0, 1]);
        assert_eq!(w.cols.len(), 2);
        assert!(matches!(ensure_generic(&dup), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn single_row_is_vacuously_generic() {
        let v = WeightMatrix::from_ints(&[vec![0, 1, 2]]).unwrap();
        assert!(is_generic(&v));
    }

    #[test]
    fn matrix_validation() {
        assert!(WeightMatrix::new(vec![]).is_err());
        assert!(WeightMatrix::from_ints(&[vec![0]]).is_err());
        assert!(WeightMatrix::from_ints(&[vec![0, 1], vec![0, 1, 2]]).is_err());
        let v = ex4pt();
        let t = v.transpose().unwrap();
        assert_eq!(t.rows(), 3);
        assert_eq!(t.get(2, 3), &int(-1));
        assert!(WeightMatrix::from_ints(&[vec![0, 1]]).unwrap().transpose().is_err());
    }
}
