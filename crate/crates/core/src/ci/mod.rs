//! Eisenbud operators of a resolution over a complete intersection, their
//! change of basis, the induced action on `Ext_A(M, k)` and the
//! kernel-complex construction for a filter-regular operator.

mod ext;
mod section;

use serde::Serialize;

pub use ext::{filter_regular_search, ExtAction, DEFAULT_ATTEMPTS};
pub use section::{section_construction, SectionData};

use crate::error::{Error, Result};
use crate::groebner::IdealBasis;
use crate::linalg::FpMatrix;
use crate::polyring::{Poly, Ring};
use crate::resolution::{CIPresentation, GradedMatrix, MinimalResolution};

/// Canonical lift of every differential: entries replaced by their normal
/// forms modulo `f`, read as polynomials of `Q`.
pub fn lift_resolution(res: &MinimalResolution) -> Vec<GradedMatrix> {
    res.differentials().iter().map(|d| d.reduce(res.ci().ideal())).collect()
}

/// Lifted differentials `d~_1..d~_N` over `Q` together with operators
/// `t~_j^(i) : F_i -> F_{i-2}` such that `d~_{i-1} d~_i = sum_j g_j t~_j^(i)`
/// for the sequence `g` of [`OperatorFamily::relations`].
#[derive(Clone, Debug)]
pub struct OperatorFamily {
    ci: CIPresentation,
    relations: Vec<Poly>,
    lifted: Vec<GradedMatrix>,
    ops: Vec<Vec<GradedMatrix>>,
}

impl OperatorFamily {
    pub fn ci(&self) -> &CIPresentation {
        &self.ci
    }

    /// The sequence the operators are attached to; `f` itself unless the
    /// family came out of a change of basis.
    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn codim(&self) -> usize {
        self.relations.len()
    }

    pub fn length(&self) -> usize {
        self.lifted.len()
    }

    /// `d~_i` for `1 <= i <= length`.
    pub fn lifted(&self, i: usize) -> &GradedMatrix {
        &self.lifted[i - 1]
    }

    pub fn lifted_all(&self) -> &[GradedMatrix] {
        &self.lifted
    }

    /// `t~_j^(i)` for `0 <= j < c` and `2 <= i <= length`.
    pub fn operator(&self, j: usize, i: usize) -> &GradedMatrix {
        &self.ops[i - 2][j]
    }

    pub fn betti(&self) -> Vec<usize> {
        let mut b = vec![self.lifted[0].nrows()];
        b.extend(self.lifted.iter().map(GradedMatrix::ncols));
        b
    }

    /// `d~_{i-1} d~_i - sum_j g_j t~_j^(i)` over `Q`.
    pub fn identity_defect(&self, i: usize) -> Result<GradedMatrix> {
        let mut lhs = self.lifted(i - 1).mul(self.lifted(i))?;
        for (j, g) in self.relations.iter().enumerate() {
            lhs = lhs.sub(&self.operator(j, i).scale_poly(g))?;
        }
        Ok(lhs)
    }

    /// Exact check of the defining identity at every homological degree.
    pub fn identity_holds(&self) -> Result<bool> {
        for i in 2..=self.length() {
            if !self.identity_defect(i)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `d_{i-2} t_j^(i) - t_j^(i-1) d_i` modulo `f`, for `3 <= i <= length`.
    pub fn chain_map_defect(&self, j: usize, i: usize) -> Result<GradedMatrix> {
        let a = self.lifted(i - 2).mul(self.operator(j, i))?;
        let b = self.operator(j, i - 1).mul(self.lifted(i))?;
        Ok(a.sub(&b)?.reduce(self.ci.ideal()))
    }

    pub fn is_chain_map(&self) -> Result<bool> {
        for i in 3..=self.length() {
            for j in 0..self.codim() {
                if !self.chain_map_defect(j, i)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> OperatorFamilyJson {
        let mat = |i: usize, j: Option<usize>, m: &GradedMatrix| MatrixJson {
            i,
            j,
            matrix: m.to_strings(),
            row_twists: m.row_twists().to_vec(),
            col_twists: m.col_twists().to_vec(),
        };
        let lifted = self.lifted.iter().enumerate().map(|(k, m)| mat(k + 1, None, m)).collect();
        let mut operators = Vec::new();
        for (k, per) in self.ops.iter().enumerate() {
            for (j, m) in per.iter().enumerate() {
                operators.push(mat(k + 2, Some(j + 1), m));
            }
        }
        OperatorFamilyJson {
            variables: self.ci.ring().var_names().to_vec(),
            relations: self.relations.iter().map(|p| p.to_string()).collect(),
            lifted,
            operators,
        }
    }
}

/// Serialized form of an operator family: matrices as arrays of polynomial
/// strings.
#[derive(Clone, Debug, Serialize)]
pub struct OperatorFamilyJson {
    pub variables: Vec<String>,
    pub relations: Vec<String>,
    pub lifted: Vec<MatrixJson>,
    pub operators: Vec<MatrixJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixJson {
    pub i: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub matrix: Vec<Vec<String>>,
    pub row_twists: Vec<i64>,
    pub col_twists: Vec<i64>,
}

/// Operators for the relations `f` of `ci`.
pub fn eisenbud_operators(lifted: &[GradedMatrix], ci: &CIPresentation) -> Result<OperatorFamily> {
    operators_for_relations(lifted, ci, ci.relations())
}

/// Operators relative to another generating sequence `g` of `(f)`. Each
/// entry of `d~_{i-1} d~_i` is divided by a Gröbner basis of `(g)` and the
/// quotients are mapped back to `g` through the recorded representation.
pub fn operators_for_relations(lifted: &[GradedMatrix], ci: &CIPresentation, g: &[Poly]) -> Result<OperatorFamily> {
    let ring = ci.ring();
    let basis = IdealBasis::new(ring, g)?;
    if basis != *ci.ideal() {
        return Err(Error::Precondition("relations do not generate (f)".into()));
    }
    let degrees: Vec<i64> = g.iter().map(|p| p.degree().unwrap_or(0) as i64).collect();
    let mut ops = Vec::new();
    for i in 2..=lifted.len() {
        let sq = lifted[i - 2].mul(&lifted[i - 1])?;
        let mut per: Vec<GradedMatrix> = degrees
            .iter()
            .map(|s| {
                let rt = sq.row_twists().iter().map(|t| t + s).collect();
                GradedMatrix::zero(ring, rt, sq.col_twists().to_vec())
            })
            .collect();
        for r in 0..sq.nrows() {
            for c in 0..sq.ncols() {
                let e = sq.entry(r, c);
                if e.is_zero() {
                    continue;
                }
                let cof = basis.generator_cofactors(e).map_err(|_| {
                    Error::NonzeroRemainder(format!("entry ({r},{c}) of d~_{} d~_{i} is not in (f): {e}", i - 1))
                })?;
                for (j, q) in cof.into_iter().enumerate() {
                    per[j].set(r, c, q);
                }
            }
        }
        ops.push(per);
    }
    Ok(OperatorFamily { ci: ci.clone(), relations: g.to_vec(), lifted: lifted.to_vec(), ops })
}

/// Operators of the lifted minimal resolution.
pub fn resolution_operators(res: &MinimalResolution) -> Result<OperatorFamily> {
    eisenbud_operators(&lift_resolution(res), res.ci())
}

pub fn poly_det(m: &[Vec<Poly>], ring: &Ring) -> Poly {
    match m.len() {
        0 => ring.one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = ring.zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let t = m[0][j].mul(&poly_det(&minor(m, 0, j), ring));
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

fn minor(m: &[Vec<Poly>], row: usize, col: usize) -> Vec<Vec<Poly>> {
    m.iter()
        .enumerate()
        .filter(|&(r, _)| r != row)
        .map(|(_, r)| r.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, p)| p.clone()).collect())
        .collect()
}

/// Classical adjugate: `adj(m) m = m adj(m) = det(m) I`.
pub fn adjugate(m: &[Vec<Poly>], ring: &Ring) -> Vec<Vec<Poly>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![ring.one()]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = poly_det(&minor(m, j, i), ring);
                    if (i + j) % 2 == 0 { d } else { d.neg() }
                })
                .collect()
        })
        .collect()
}

/// Inverse of a square polynomial matrix whose determinant is a nonzero
/// constant, as `adj / det`.
pub fn poly_matrix_inverse(m: &[Vec<Poly>], ring: &Ring) -> Result<Vec<Vec<Poly>>> {
    if m.iter().any(|r| r.len() != m.len()) {
        return Err(Error::Shape("matrix must be square".into()));
    }
    let det = poly_det(m, ring);
    if det.is_zero() || !det.is_constant() {
        return Err(Error::NotInvertible(format!("determinant {det} is not a unit")));
    }
    let inv = ring.field().inv(det.constant_term());
    Ok(adjugate(m, ring).into_iter().map(|r| r.into_iter().map(|p| p.scale(inv)).collect()).collect())
}

/// Change of basis of the relations: `f = alpha g`, and the operators for `g`
/// are `t' = alpha^tr t`, i.e. `t'_k = sum_j alpha_{jk} t_j`.
pub fn operators_change_basis(ops: &OperatorFamily, alpha: &[Vec<Poly>]) -> Result<OperatorFamily> {
    let ring = ops.ci.ring();
    let c = ops.codim();
    if alpha.len() != c || alpha.iter().any(|r| r.len() != c) {
        return Err(Error::Shape(format!("alpha must be {c}x{c}")));
    }
    let inv = poly_matrix_inverse(alpha, ring)?;
    let g: Vec<Poly> = (0..c)
        .map(|i| (0..c).fold(ring.zero(), |acc, k| acc.add(&inv[i][k].mul(&ops.relations[k]))))
        .collect();
    let degrees: Vec<i64> = g.iter().map(|p| p.degree().unwrap_or(0) as i64).collect();
    let mut new_ops = Vec::with_capacity(ops.ops.len());
    for (idx, per) in ops.ops.iter().enumerate() {
        let i = idx + 2;
        let base = &ops.lifted[i - 2];
        let mut out = Vec::with_capacity(c);
        for (k, s) in degrees.iter().enumerate() {
            let rt = base.row_twists().iter().map(|t| t + s).collect();
            let mut acc = GradedMatrix::zero(ring, rt, ops.lifted[i - 1].col_twists().to_vec());
            for (j, t) in per.iter().enumerate() {
                if !alpha[j][k].is_zero() {
                    acc = acc.add(&t.scale_poly(&alpha[j][k]))?;
                }
            }
            out.push(acc);
        }
        new_ops.push(out);
    }
    Ok(OperatorFamily { ci: ops.ci.clone(), relations: g, lifted: ops.lifted.clone(), ops: new_ops })
}

/// Realizes `xi_i = sum_j beta_{ij} t_j` as the operators of a new generating
/// sequence `g = alpha^{-1} f` with `alpha = beta^tr`, checking `(g) = (f)`.
pub fn realize_cohomology_element(ops: &OperatorFamily, beta: &FpMatrix) -> Result<(Vec<Poly>, OperatorFamily)> {
    let c = ops.codim();
    if beta.rows() != c || beta.cols() != c {
        return Err(Error::Shape(format!("beta must be {c}x{c}")));
    }
    let ring = ops.ci.ring();
    if beta.inverse(ring.field()).is_none() {
        return Err(Error::NotInvertible("beta is singular".into()));
    }
    let alpha: Vec<Vec<Poly>> = (0..c)
        .map(|i| (0..c).map(|j| ring.term(crate::polyring::Monomial::one(), beta.get(j, i))).collect())
        .collect();
    let new = operators_change_basis(ops, &alpha)?;
    if IdealBasis::new(ring, new.relations())? != IdealBasis::new(ring, ops.relations())? {
        return Err(Error::Precondition("(g) differs from (f)".into()));
    }
    Ok((new.relations.clone(), new))
}
