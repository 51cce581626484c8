use std::fmt;

use crate::error::{Error, Result};
use crate::groebner::{FreeModuleElement, IdealBasis};
use crate::linalg::FpMatrix;
use crate::polyring::{OrdValue, Poly, Ring};

/// Matrix of polynomials describing a map `⊕ Q(-col_twists) -> ⊕ Q(-row_twists)`.
///
/// A nonzero entry `(i, j)` of a homogeneous matrix is a form of degree
/// `col_twists[j] - row_twists[i]`.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
    row_twists: Vec<i64>,
    col_twists: Vec<i64>,
}

impl fmt::Debug for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {:?}->{:?}", self.to_strings(), self.col_twists, self.row_twists)
    }
}

impl GradedMatrix {
    /// Builds a matrix without checking homogeneity.
    pub fn new(ring: &Ring, entries: Vec<Vec<Poly>>, row_twists: Vec<i64>, col_twists: Vec<i64>) -> Result<Self> {
        let rows = row_twists.len();
        let cols = col_twists.len();
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape(format!("expected a {rows}x{cols} array of entries")));
        }
        if entries.iter().flatten().any(|p| !p.ring().same(ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(GradedMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: entries.into_iter().flatten().collect(),
            row_twists,
            col_twists,
        })
    }

    /// Builds a matrix and checks that every entry is homogeneous of the
    /// degree its twists prescribe.
    pub fn homogeneous(ring: &Ring, entries: Vec<Vec<Poly>>, row_twists: Vec<i64>, col_twists: Vec<i64>) -> Result<Self> {
        let m = Self::new(ring, entries, row_twists, col_twists)?;
        if let Some((i, j)) = m.inhomogeneous_entry() {
            return Err(Error::NotHomogeneous(format!(
                "entry ({i},{j}) = {} does not have degree {}",
                m.entry(i, j),
                m.col_twists[j] - m.row_twists[i]
            )));
        }
        Ok(m)
    }

    /// Infers column twists from `row_twists` (default all zero): a column
    /// takes the degree of its first nonzero entry, a zero column the largest
    /// row twist.
    pub fn with_row_twists(ring: &Ring, entries: Vec<Vec<Poly>>, row_twists: Option<Vec<i64>>) -> Result<Self> {
        let rows = entries.len();
        let row_twists = row_twists.unwrap_or_else(|| vec![0; rows]);
        if row_twists.len() != rows {
            return Err(Error::Shape(format!("{} row twists for {rows} rows", row_twists.len())));
        }
        let cols = entries.first().map_or(0, Vec::len);
        let default = row_twists.iter().copied().max().unwrap_or(0);
        let col_twists = (0..cols)
            .map(|j| {
                (0..rows)
                    .find_map(|i| {
                        let p = entries[i].get(j)?;
                        p.degree().map(|d| row_twists[i] + d as i64)
                    })
                    .unwrap_or(default)
            })
            .collect();
        Self::homogeneous(ring, entries, row_twists, col_twists)
    }

    pub fn from_strings<S: AsRef<str>>(ring: &Ring, rows: &[Vec<S>], row_twists: Option<Vec<i64>>) -> Result<Self> {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|s| ring.parse(s.as_ref())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::with_row_twists(ring, entries, row_twists)
    }

    pub fn from_columns(ring: &Ring, cols: &[FreeModuleElement], row_twists: Vec<i64>, col_twists: Vec<i64>) -> Result<Self> {
        let rows = row_twists.len();
        if cols.iter().any(|c| c.rank() != rows) || cols.len() != col_twists.len() {
            return Err(Error::Shape("column ranks do not match row twists".into()));
        }
        let entries = (0..rows)
            .map(|i| cols.iter().map(|c| c.component(i).clone()).collect())
            .collect();
        Self::new(ring, entries, row_twists, col_twists)
    }

    pub fn zero(ring: &Ring, row_twists: Vec<i64>, col_twists: Vec<i64>) -> Self {
        let (rows, cols) = (row_twists.len(), col_twists.len());
        GradedMatrix { ring: ring.clone(), rows, cols, entries: vec![ring.zero(); rows * cols], row_twists, col_twists }
    }

    pub fn identity(ring: &Ring, twists: Vec<i64>) -> Self {
        let mut m = Self::zero(ring, twists.clone(), twists);
        for i in 0..m.rows {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row_twists(&self) -> &[i64] {
        &self.row_twists
    }

    pub fn col_twists(&self) -> &[i64] {
        &self.col_twists
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly> {
        self.entries.iter()
    }

    pub fn rows_vec(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> FreeModuleElement {
        let comps = (0..self.rows).map(|i| self.entry(i, j).clone()).collect();
        FreeModuleElement::new(&self.ring, comps).expect("same ring")
    }

    pub fn with_twists(mut self, row_twists: Vec<i64>, col_twists: Vec<i64>) -> Self {
        assert_eq!((row_twists.len(), col_twists.len()), (self.rows, self.cols));
        self.row_twists = row_twists;
        self.col_twists = col_twists;
        self
    }

    fn inhomogeneous_entry(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.entry(i, j);
                if p.is_zero() {
                    continue;
                }
                let d = self.col_twists[j] - self.row_twists[i];
                if !p.is_homogeneous() || p.degree().map(|x| x as i64) != Some(d) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_homogeneous(&self) -> bool {
        self.inhomogeneous_entry().is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn mul(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(&self.ring, self.row_twists.clone(), other.col_twists.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.entry(k, j);
                    if !b.is_zero() {
                        let v = out.entry(i, j).add(&a.mul(b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &GradedMatrix, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<GradedMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape("matrix sizes differ".into()));
        }
        let mut out = self.clone();
        out.entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(out)
    }

    pub fn add(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        self.zip_with(other, Poly::add)
    }

    pub fn sub(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        self.zip_with(other, Poly::sub)
    }

    pub fn map_entries(&self, f: impl Fn(&Poly) -> Poly) -> GradedMatrix {
        let mut out = self.clone();
        out.entries = self.entries.iter().map(f).collect();
        out
    }

    pub fn scale_poly(&self, p: &Poly) -> GradedMatrix {
        self.map_entries(|a| a.mul(p))
    }

    /// Entry-wise normal form modulo `modulus`.
    pub fn reduce(&self, modulus: &IdealBasis) -> GradedMatrix {
        self.map_entries(|a| modulus.reduce(a))
    }

    pub fn is_zero_mod(&self, modulus: &IdealBasis) -> bool {
        self.entries.iter().all(|a| modulus.contains(a))
    }

    pub fn transpose(&self) -> GradedMatrix {
        let mut out = Self::zero(
            &self.ring,
            self.col_twists.iter().map(|t| -t).collect(),
            self.row_twists.iter().map(|t| -t).collect(),
        );
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.entry(i, j).clone());
            }
        }
        out
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> GradedMatrix {
        let entries = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.entry(i, j).clone()).collect())
            .collect();
        let rt = rows.iter().map(|&i| self.row_twists[i]).collect();
        let ct = cols.iter().map(|&j| self.col_twists[j]).collect();
        Self::new(&self.ring, entries, rt, ct).expect("consistent selection")
    }

    pub fn select_cols(&self, cols: &[usize]) -> GradedMatrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> GradedMatrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &GradedMatrix, b: &GradedMatrix, c: &GradedMatrix, d: &GradedMatrix) -> Result<GradedMatrix> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Shape("block sizes do not fit".into()));
        }
        let mut entries = a.rows_vec();
        for (row, extra) in entries.iter_mut().zip(b.rows_vec()) {
            row.extend(extra);
        }
        for (mut row, extra) in c.rows_vec().into_iter().zip(d.rows_vec()) {
            row.extend(extra);
            entries.push(row);
        }
        let rt = a.row_twists.iter().chain(&c.row_twists).copied().collect();
        let ct = a.col_twists.iter().chain(&b.col_twists).copied().collect();
        Self::new(&a.ring, entries, rt, ct)
    }

    /// Matrix of constant terms, i.e. the induced map after tensoring with `k`.
    pub fn constant_part(&self) -> FpMatrix {
        let mut m = FpMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.entry(i, j).constant_term());
            }
        }
        m
    }

    pub fn from_fp(ring: &Ring, m: &FpMatrix, row_twists: Vec<i64>, col_twists: Vec<i64>) -> GradedMatrix {
        let mut out = Self::zero(ring, row_twists, col_twists);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, ring.term(crate::polyring::Monomial::one(), m.get(i, j)));
            }
        }
        out
    }

    /// Minimum order of the entries, `inf` for the zero matrix.
    pub fn ord(&self) -> OrdValue {
        self.entries.iter().map(Poly::ord).min().unwrap_or(OrdValue::Infinite)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j).to_string()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::DEFAULT_CHARACTERISTIC;

    #[test]
    fn twists_are_inferred() {
        let r = Ring::new(DEFAULT_CHARACTERISTIC, &["x", "y"]).unwrap();
        let m = GradedMatrix::from_strings(&r, &[vec!["x", "y^2"], vec!["0", "x"]], Some(vec![0, 1])).unwrap();
        assert_eq!(m.col_twists(), &[1, 2]);
        assert!(GradedMatrix::from_strings(&r, &[vec!["x", "y^2"]], None).unwrap().col_twists() == [1, 2]);
        assert!(GradedMatrix::from_strings(&r, &[vec!["x", "y"], vec!["y", "x^2"]], None).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let r = Ring::new(DEFAULT_CHARACTERISTIC, &["x", "y"]).unwrap();
        let a = GradedMatrix::from_strings(&r, &[vec!["x", "-y"], vec!["y", "x"]], None).unwrap();
        let b = GradedMatrix::from_strings(&r, &[vec!["x", "y"], vec!["-y", "x"]], Some(vec![1, 1])).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.to_strings(), [["x^2+y^2", "0"], ["0", "x^2+y^2"]]);
        assert!(p.is_homogeneous());
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.ord(), OrdValue::Finite(1));
    }
}
