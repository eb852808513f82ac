//! The finite pieces `K_{i,μ}` of the Koszul complex and their differentials.

use std::collections::HashMap;

use serde_json::json;

use crate::chain::{ChainElement, ChainError, EdgeSet, Multidegree, QuotientSpec, WedgeTerm};
use crate::field::{Field, Scalar};
use crate::graph::Graph;
use crate::linalg::Matrix;

/// Basis of `K_{i,μ}` (in the quotient by `quotient`): edge sets `S` with
/// `|S| = i`, `deg S ≤ μ`, no killed edge, and residual monomial `μ − deg S`
/// not divisible by a killed edge monomial. Ordered lexicographically by `S`.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub i: usize,
    pub mu: Multidegree,
    pub quotient: QuotientSpec,
    basis: Vec<EdgeSet>,
    residuals: Vec<Multidegree>,
    index: HashMap<EdgeSet, usize>,
}

pub fn stratum_basis(g: &Graph, i: usize, mu: &Multidegree, q: &QuotientSpec) -> Result<Stratum, ChainError> {
    if mu.len() != g.vertex_count() {
        return Err(ChainError::MonoLength { expected: g.vertex_count(), got: mu.len() });
    }
    let mut basis = Vec::new();
    let mut residuals = Vec::new();
    let mut rest = mu.clone();
    collect(g, q, i, 0, EdgeSet::EMPTY, &mut rest, &mut basis, &mut residuals);
    let index = basis.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    Ok(Stratum { i, mu: mu.clone(), quotient: q.clone(), basis, residuals, index })
}

#[allow(clippy::too_many_arguments)]
fn collect(
    g: &Graph,
    q: &QuotientSpec,
    left: usize,
    start: usize,
    cur: EdgeSet,
    rest: &mut Multidegree,
    basis: &mut Vec<EdgeSet>,
    residuals: &mut Vec<Multidegree>,
) {
    if left == 0 {
        if !q.kills_mono(g, rest) {
            basis.push(cur);
            residuals.push(rest.clone());
        }
        return;
    }
    for e in start..g.edge_count() {
        if g.edge_count() - e < left {
            break;
        }
        let (a, b) = g.edge(e);
        if q.kills_edge(e) || rest.0[a] == 0 || rest.0[b] == 0 {
            continue;
        }
        rest.0[a] -= 1;
        rest.0[b] -= 1;
        collect(g, q, left - 1, e + 1, cur.with(e), rest, basis, residuals);
        rest.0[a] += 1;
        rest.0[b] += 1;
    }
}

impl Stratum {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn edge_sets(&self) -> &[EdgeSet] {
        &self.basis
    }

    pub fn residual(&self, k: usize) -> &Multidegree {
        &self.residuals[k]
    }

    pub fn index_of(&self, s: EdgeSet) -> Option<usize> {
        self.index.get(&s).copied()
    }

    /// Basis element `k` as a chain with coefficient one.
    pub fn basis_chain(&self, field: Field, k: usize) -> ChainElement {
        ChainElement::term(field.one(), self.residuals[k].clone(), self.basis[k])
    }

    /// Coordinates of a chain of this bidegree.
    pub fn vector_of(&self, g: &Graph, field: Field, z: &ChainElement) -> Result<Vec<Scalar>, ChainError> {
        let mut v = vec![field.zero(); self.len()];
        for t in z.terms() {
            if t.edges.len() != self.i || t.multidegree(g) != self.mu {
                return Err(ChainError::NotHomogeneous);
            }
            let k = self.index_of(t.edges).ok_or(ChainError::OutsideStratum(t.edges))?;
            v[k] = &v[k] + &t.coeff;
        }
        Ok(v)
    }

    pub fn chain_of(&self, v: &[Scalar]) -> ChainElement {
        ChainElement::new(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| WedgeTerm {
            coeff: c.clone(),
            mono: self.residuals[k].clone(),
            edges: self.basis[k],
        }))
    }

    /// Matrix of `d: K_{i,μ} → K_{i−1,μ}`; rows follow the basis of the
    /// lower stratum. For `i = 0` the matrix has no rows.
    pub fn differential_matrix(&self, g: &Graph, field: Field) -> Matrix {
        if self.i == 0 {
            return Matrix::zeros(field, 0, self.len());
        }
        let lower = stratum_basis(g, self.i - 1, &self.mu, &self.quotient).expect("same multidegree length");
        self.differential_matrix_into(field, &lower)
    }

    pub fn differential_matrix_into(&self, field: Field, lower: &Stratum) -> Matrix {
        let mut m = Matrix::zeros(field, lower.len(), self.len());
        for (col, &s) in self.basis.iter().enumerate() {
            for (pos, e) in s.iter().enumerate() {
                if let Some(row) = lower.index_of(s.without(e)) {
                    m.set(row, col, field.sign(pos));
                }
            }
        }
        m
    }

    pub fn to_json(&self, g: &Graph, field: Field) -> serde_json::Value {
        let basis: Vec<serde_json::Value> = self
            .basis
            .iter()
            .zip(&self.residuals)
            .map(|(s, m)| json!({"edges": s.to_vec(), "mono": m.0}))
            .collect();
        let matrix: Vec<serde_json::Value> = self
            .differential_matrix(g, field)
            .triplets()
            .into_iter()
            .map(|(r, c, x)| json!([r, c, x.to_json()]))
            .collect();
        json!({
            "degree": self.i,
            "multidegree": self.mu.0,
            "killed": self.quotient.killed(),
            "basis": basis,
            "differential": matrix,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn none() -> QuotientSpec {
        QuotientSpec::none()
    }

    #[test]
    fn triangle_strata() {
        let g = Graph::cycle(3).unwrap();
        let mu = Multidegree::ones(3);
        let s1 = stratum_basis(&g, 1, &mu, &none()).unwrap();
        assert_eq!(s1.len(), 3);
        for k in 0..3 {
            // each edge carries the opposite vertex
            let (a, b) = g.edge(s1.edge_sets()[k].to_vec()[0]);
            let opposite = 3 - a - b;
            assert_eq!(s1.residual(k), &Multidegree::unit(3, opposite));
        }
        assert!(stratum_basis(&g, 2, &mu, &none()).unwrap().is_empty());
        let d = s1.differential_matrix(&g, Field::Rational);
        assert_eq!((d.rows(), d.cols()), (1, 3));
        assert!((0..3).all(|j| d.get(0, j).is_one()));
    }

    #[test]
    fn degree_zero_and_empty() {
        let g = Graph::cycle(4).unwrap();
        let s = stratum_basis(&g, 0, &Multidegree::zeros(4), &none()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.residual(0), &Multidegree::zeros(4));
        let e = stratum_basis(&g, 3, &Multidegree::ones(4), &none()).unwrap();
        let d = e.differential_matrix(&g, Field::Rational);
        assert_eq!((d.rows(), d.cols()), (2, 0));
        assert!(stratum_basis(&g, 0, &Multidegree::zeros(3), &none()).is_err());
    }

    #[test]
    fn single_edge_matrix() {
        let g = Graph::path(2).unwrap();
        let s = stratum_basis(&g, 1, &Multidegree::ones(2), &none()).unwrap();
        let d = s.differential_matrix(&g, Field::Rational);
        assert_eq!(d.rank(), 1);
        assert_eq!((d.rows(), d.cols()), (1, 1));
    }

    #[test]
    fn quotient_basis_excludes_killed() {
        let g = Graph::cycle(4).unwrap();
        let q = QuotientSpec::new(&g, [0]).unwrap();
        let mu = Multidegree(vec![1, 1, 1, 1]);
        let s = stratum_basis(&g, 1, &mu, &q).unwrap();
        for k in 0..s.len() {
            assert!(!s.edge_sets()[k].contains(0));
            assert!(!q.kills_mono(&g, s.residual(k)));
        }
        // residual t1 t2 of edge t3t4 is killed, so only the two remaining edges survive
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn matrix_agrees_with_chain_differential_and_squares_to_zero() {
        let g = Graph::figure_eight(3, 3).unwrap();
        let field = Field::Rational;
        for mu in Multidegree(vec![2, 1, 1, 1, 1]).lower_set() {
            for i in 1..=3 {
                let s = stratum_basis(&g, i, &mu, &none()).unwrap();
                let lower = stratum_basis(&g, i - 1, &mu, &none()).unwrap();
                let d = s.differential_matrix_into(field, &lower);
                for k in 0..s.len() {
                    let dz = s.basis_chain(field, k).differential(&g, &none());
                    assert_eq!(lower.vector_of(&g, field, &dz).unwrap(), d.column(k));
                }
                assert!(lower.differential_matrix(&g, field).mul(&d).is_zero());
            }
        }
    }
}
