//! Multigraded homology of the Koszul complex: per-stratum homology with
//! chosen representatives, class arithmetic, annihilators, ideal and
//! subalgebra spans, minimal generators and the improper ideal.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chain::{ChainElement, ChainError, Multidegree, QuotientSpec};
use crate::field::{Field, Scalar};
use crate::graph::{Graph, GraphError};
use crate::linalg::{is_zero_vector, unit, Matrix, Subspace};
use crate::stratum::{stratum_basis, Stratum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("multidegree has {got} entries, graph has {expected} vertices")]
    MuLength { expected: usize, got: usize },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("chain is not homogeneous")]
    NotHomogeneous,
    #[error("not an induced subgraph: {0}")]
    NotInducedSubgraph(String),
    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),
    #[error(transparent)]
    Chain(ChainError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<ChainError> for HomologyError {
    fn from(e: ChainError) -> Self {
        match e {
            ChainError::NotHomogeneous => HomologyError::NotHomogeneous,
            ChainError::MonoLength { expected, got } => HomologyError::MuLength { expected, got },
            other => HomologyError::Chain(other),
        }
    }
}

/// Homology of one stratum `(i, μ)`.
#[derive(Debug)]
pub struct HomologyStratum {
    pub stratum: Stratum,
    pub field: Field,
    pub cycle_dim: usize,
    pub boundary_rank: usize,
    pub dim: usize,
    d_out: Matrix,
    reps: Vec<Vec<Scalar>>,
    /// Boundaries inserted first, then representatives.
    solver: Subspace,
}

impl HomologyStratum {
    pub fn compute(g: &Graph, i: usize, mu: &Multidegree, q: &QuotientSpec, field: Field) -> Result<Self, HomologyError> {
        let lower = if i == 0 { None } else { Some(stratum_basis(g, i - 1, mu, q)?) };
        let st = stratum_basis(g, i, mu, q)?;
        let upper = stratum_basis(g, i + 1, mu, q)?;
        let d_out = match &lower {
            None => Matrix::zeros(field, 0, st.len()),
            Some(l) => st.differential_matrix_into(field, l),
        };
        let d_in = upper.differential_matrix_into(field, &st);
        Self::from_parts(st, d_out, &d_in, field)
    }

    /// Homology in every degree `0..=top` at `μ`, sharing bases and matrices.
    pub fn compute_all(
        g: &Graph,
        top: usize,
        mu: &Multidegree,
        q: &QuotientSpec,
        field: Field,
    ) -> Result<Vec<Self>, HomologyError> {
        let bases: Vec<Stratum> = (0..=top + 1).map(|i| stratum_basis(g, i, mu, q)).collect::<Result<_, _>>()?;
        let mut mats: Vec<Matrix> = Vec::with_capacity(top + 2);
        mats.push(Matrix::zeros(field, 0, bases[0].len()));
        for i in 1..=top + 1 {
            mats.push(bases[i].differential_matrix_into(field, &bases[i - 1]));
        }
        let mut out = Vec::with_capacity(top + 1);
        let mut mats = mats.into_iter();
        let mut d_out = mats.next().expect("degree zero matrix");
        for st in bases.into_iter().take(top + 1) {
            let d_in = mats.next().expect("one matrix per degree");
            out.push(Self::from_parts(st, d_out, &d_in, field)?);
            d_out = d_in;
        }
        Ok(out)
    }

    fn from_parts(st: Stratum, d_out: Matrix, d_in: &Matrix, field: Field) -> Result<Self, HomologyError> {
        let (i, mu) = (st.i, st.mu.clone());
        if !d_out.mul(d_in).is_zero() {
            return Err(HomologyError::InvariantBreach(format!("d∘d ≠ 0 at ({i}, {mu})")));
        }
        let (echelon, pivots) = d_out.rref();
        let cycles = Matrix::nullspace_from_rref(&echelon, &pivots);
        if pivots.len() + cycles.len() != st.len() {
            return Err(HomologyError::InvariantBreach(format!("rank-nullity fails at ({i}, {mu})")));
        }
        let mut solver = Subspace::new(field, st.len());
        for col in d_in.columns() {
            solver.insert(&col);
        }
        let boundary_rank = solver.dim();
        let mut reps = Vec::new();
        for z in cycles.iter() {
            if solver.insert(z) {
                reps.push(z.clone());
            }
        }
        if boundary_rank + reps.len() != cycles.len() {
            return Err(HomologyError::InvariantBreach(format!("boundaries not inside cycles at ({i}, {mu})")));
        }
        Ok(HomologyStratum {
            stratum: st,
            field,
            cycle_dim: cycles.len(),
            boundary_rank,
            dim: reps.len(),
            d_out,
            reps,
            solver,
        })
    }

    pub fn degree(&self) -> usize {
        self.stratum.i
    }

    pub fn multidegree(&self) -> &Multidegree {
        &self.stratum.mu
    }

    pub fn representative_vectors(&self) -> &[Vec<Scalar>] {
        &self.reps
    }

    pub fn representatives(&self) -> Vec<ChainElement> {
        self.reps.iter().map(|v| self.stratum.chain_of(v)).collect()
    }

    /// Cycle of the class with the given coordinates.
    pub fn chain_of_coords(&self, coords: &[Scalar]) -> ChainElement {
        let mut v = vec![self.field.zero(); self.stratum.len()];
        for (c, r) in coords.iter().zip(&self.reps) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x = &*x + &(c * y);
                }
            }
        }
        self.stratum.chain_of(&v)
    }

    pub fn is_cycle_vector(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.d_out.mul_vec(v))
    }

    /// Coordinates of a cycle modulo boundaries in the representative basis.
    pub fn coordinates_of_vector(&self, v: &[Scalar]) -> Result<Vec<Scalar>, HomologyError> {
        if !self.is_cycle_vector(v) {
            return Err(HomologyError::NotACycle);
        }
        let combo = self
            .solver
            .express(v)
            .ok_or_else(|| HomologyError::InvariantBreach("cycle outside cycle space".into()))?;
        Ok(combo[self.boundary_rank..].to_vec())
    }

    pub fn is_boundary_vector(&self, v: &[Scalar]) -> Result<bool, HomologyError> {
        Ok(is_zero_vector(&self.coordinates_of_vector(v)?))
    }

    /// Classes of cycles that avoid edge `e`, as a subspace of coordinates.
    pub fn edge_free_image(&self, e: usize) -> Subspace {
        let cols: Vec<usize> = (0..self.stratum.len()).filter(|&k| !self.stratum.edge_sets()[k].contains(e)).collect();
        let mut sub = Matrix::zeros(self.field, self.d_out.rows(), cols.len());
        for (j, &k) in cols.iter().enumerate() {
            for r in 0..self.d_out.rows() {
                sub.set(r, j, self.d_out.get(r, k).clone());
            }
        }
        let mut out = Subspace::new(self.field, self.dim);
        for w in sub.nullspace() {
            let mut v = vec![self.field.zero(); self.stratum.len()];
            for (j, &k) in cols.iter().enumerate() {
                v[k] = w[j].clone();
            }
            out.insert(&self.coordinates_of_vector(&v).expect("restricted kernel vector is a cycle"));
        }
        out
    }
}

/// A homology class: bidegree plus coordinates in the representative basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomClass {
    pub i: usize,
    pub mu: Multidegree,
    pub coords: Vec<Scalar>,
}

impl HomClass {
    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.coords)
    }
}

/// Multidegree bound `μ_v ≤ max(valence(v), 1)`. Above it every class is
/// divisible by the variable of the offending vertex.
pub fn default_box(g: &Graph) -> Multidegree {
    Multidegree(g.valences().into_iter().map(|v| v.max(1) as u32).collect())
}

/// Default box widened by `k` in every coordinate.
pub fn widened_box(g: &Graph, k: u32) -> Multidegree {
    Multidegree(default_box(g).0.into_iter().map(|x| x + k).collect())
}

/// One row of a generator table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorRow {
    pub i: usize,
    pub mu: Multidegree,
    pub dim: usize,
    pub decomposable: usize,
    pub new_generators: usize,
}

/// Minimal algebra generators found stratum by stratum inside a box.
#[derive(Clone, Debug)]
pub struct GeneratorTable {
    pub bound: Multidegree,
    /// Rows for every stratum with nonzero homology, positive degree.
    pub rows: Vec<GeneratorRow>,
    /// Chosen generator cycles `(i, μ, z)`.
    pub generators: Vec<(usize, Multidegree, ChainElement)>,
    decomposables: HashMap<(usize, Multidegree), Subspace>,
}

impl GeneratorTable {
    pub fn new_generators_at(&self, i: usize, mu: &Multidegree) -> usize {
        self.rows.iter().find(|r| r.i == i && &r.mu == mu).map_or(0, |r| r.new_generators)
    }

    /// `𝔪²` at a stratum, in coordinates of its homology.
    pub fn decomposable(&self, i: usize, mu: &Multidegree) -> Option<&Subspace> {
        self.decomposables.get(&(i, mu.clone()))
    }

    pub fn total_new(&self) -> usize {
        self.rows.iter().map(|r| r.new_generators).sum()
    }
}

/// One row of the #-class table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharpRow {
    pub i: usize,
    pub mu: Multidegree,
    pub dim: usize,
    pub improper: usize,
    pub sharp: usize,
}

type Key = (usize, Multidegree);

/// A stratum together with the coordinate vector of a chain in its basis.
type Located = (Arc<HomologyStratum>, Vec<Scalar>);

/// Homology of one graph (optionally modulo a matching) over one field,
/// with an insert-once cache of computed strata.
pub struct HomologyEngine {
    graph: Graph,
    quotient: QuotientSpec,
    field: Field,
    cache: RwLock<HashMap<Key, Arc<HomologyStratum>>>,
}

impl HomologyEngine {
    pub fn new(graph: Graph, field: Field) -> Self {
        Self::with_quotient(graph, QuotientSpec::none(), field)
    }

    pub fn with_quotient(graph: Graph, quotient: QuotientSpec, field: Field) -> Self {
        HomologyEngine { graph, quotient, field, cache: RwLock::new(HashMap::new()) }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn quotient(&self) -> &QuotientSpec {
        &self.quotient
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Largest homological degree that can be nonzero at `μ`.
    pub fn max_degree(&self, mu: &Multidegree) -> usize {
        (self.graph.edge_count() - self.quotient.killed().len()).min(mu.total() as usize / 2)
    }

    fn check_mu(&self, mu: &Multidegree) -> Result<(), HomologyError> {
        if mu.len() != self.vertex_count() {
            return Err(HomologyError::MuLength { expected: self.vertex_count(), got: mu.len() });
        }
        Ok(())
    }

    pub fn homology(&self, i: usize, mu: &Multidegree) -> Result<Arc<HomologyStratum>, HomologyError> {
        self.check_mu(mu)?;
        let key = (i, mu.clone());
        if let Some(h) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(h.clone());
        }
        let top = self.max_degree(mu);
        if i > top {
            let h = Arc::new(HomologyStratum::compute(&self.graph, i, mu, &self.quotient, self.field)?);
            return Ok(self.cache.write().expect("cache lock").entry(key).or_insert(h).clone());
        }
        let all = HomologyStratum::compute_all(&self.graph, top, mu, &self.quotient, self.field)?;
        let mut cache = self.cache.write().expect("cache lock");
        for h in all {
            cache.entry((h.degree(), mu.clone())).or_insert_with(|| Arc::new(h));
        }
        Ok(cache[&key].clone())
    }

    pub fn dim(&self, i: usize, mu: &Multidegree) -> Result<usize, HomologyError> {
        Ok(self.homology(i, mu)?.dim)
    }

    /// `(i, dim H_{i,μ})` for every possible degree at `μ`.
    pub fn dims(&self, mu: &Multidegree) -> Result<Vec<(usize, usize)>, HomologyError> {
        (0..=self.max_degree(mu)).map(|i| Ok((i, self.dim(i, mu)?))).collect()
    }

    /// All strata `(i, μ)` with `μ ≤ bound`, ordered by `|μ|`, then `μ`, then `i`.
    pub fn strata_in_box(&self, bound: &Multidegree) -> Vec<Key> {
        bound.lower_set().into_iter().flat_map(|mu| (0..=self.max_degree(&mu)).map(move |i| (i, mu.clone()))).collect()
    }

    /// Computes every stratum of the box in parallel.
    pub fn precompute(&self, bound: &Multidegree) -> Result<(), HomologyError> {
        self.check_mu(bound)?;
        let missing: Vec<Multidegree> = {
            let cache = self.cache.read().expect("cache lock");
            bound.lower_set().into_iter().filter(|mu| !cache.contains_key(&(0, mu.clone()))).collect()
        };
        missing.par_iter().try_for_each(|mu| self.homology(0, mu).map(|_| ()))
    }

    /// Reduces by the quotient and locates the stratum of a homogeneous chain.
    fn locate(&self, z: &ChainElement) -> Result<Option<Located>, HomologyError> {
        z.check_against(&self.graph)?;
        let z = z.reduce(&self.graph, &self.quotient);
        if z.is_zero() {
            return Ok(None);
        }
        let (i, mu) = z.bidegree(&self.graph)?;
        let h = self.homology(i, &mu)?;
        let v = h.stratum.vector_of(&self.graph, self.field, &z)?;
        Ok(Some((h, v)))
    }

    pub fn class_of(&self, z: &ChainElement) -> Result<Option<HomClass>, HomologyError> {
        Ok(match self.locate(z)? {
            None => None,
            Some((h, v)) => Some(HomClass { i: h.degree(), mu: h.multidegree().clone(), coords: h.coordinates_of_vector(&v)? }),
        })
    }

    pub fn is_cycle(&self, z: &ChainElement) -> bool {
        z.reduce(&self.graph, &self.quotient).differential(&self.graph, &self.quotient).is_zero()
    }

    pub fn is_boundary(&self, z: &ChainElement) -> Result<bool, HomologyError> {
        Ok(self.class_of(z)?.is_none_or(|c| c.is_zero()))
    }

    pub fn classes_equal(&self, z1: &ChainElement, z2: &ChainElement) -> Result<bool, HomologyError> {
        self.is_boundary(&z1.sub(z2))
    }

    /// Equality up to a global sign.
    pub fn classes_equal_up_to_sign(&self, z1: &ChainElement, z2: &ChainElement) -> Result<bool, HomologyError> {
        Ok(self.classes_equal(z1, z2)? || self.classes_equal(z1, &z2.neg())?)
    }

    /// Every homogeneous component is a boundary (accepts inhomogeneous chains).
    pub fn components_are_boundaries(&self, z: &ChainElement) -> Result<bool, HomologyError> {
        for (_, c) in z.homogeneous_components(&self.graph) {
            if !self.is_boundary(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coordinates at `(i, μ)` of a cycle known to live there (zero allowed).
    pub fn coords_in(&self, z: &ChainElement, i: usize, mu: &Multidegree) -> Result<Vec<Scalar>, HomologyError> {
        let h = self.homology(i, mu)?;
        match self.class_of(z)? {
            None => Ok(vec![self.field.zero(); h.dim]),
            Some(c) if c.i == i && &c.mu == mu => Ok(c.coords),
            Some(_) => Err(HomologyError::NotHomogeneous),
        }
    }

    /// Product of two cycles, reduced into the quotient.
    pub fn multiply(&self, a: &ChainElement, b: &ChainElement) -> ChainElement {
        a.wedge(b).reduce(&self.graph, &self.quotient)
    }

    /// Classes at `(i, μ)` killed by the monomial `m`, as coordinates.
    pub fn annihilator_of_monomial(&self, m: &Multidegree, i: usize, mu: &Multidegree) -> Result<Subspace, HomologyError> {
        let h = self.homology(i, mu)?;
        let target_mu = mu.add(m);
        let target = self.homology(i, &target_mu)?;
        let cols: Vec<Vec<Scalar>> = h
            .representatives()
            .iter()
            .map(|r| self.coords_in(&r.mul_mono(m), i, &target_mu))
            .collect::<Result<_, _>>()?;
        let mat = Matrix::from_columns(self.field, target.dim, &cols);
        Ok(Subspace::spanned_by(self.field, h.dim, &mat.nullspace()))
    }

    /// `(0 : t_v)` at `(i, μ)`.
    pub fn annihilator_stratum(&self, v: usize, i: usize, mu: &Multidegree) -> Result<Subspace, HomologyError> {
        self.annihilator_of_monomial(&Multidegree::unit(self.vertex_count(), v), i, mu)
    }

    /// Span at `(i, μ)` of `g ∧ h` over generators `g` and homology basis
    /// elements `h` of complementary bidegree (including `h = 1`).
    pub fn ideal_span(&self, gens: &[ChainElement], i: usize, mu: &Multidegree) -> Result<Subspace, HomologyError> {
        let h = self.homology(i, mu)?;
        let mut span = Subspace::new(self.field, h.dim);
        for g in gens {
            let g = g.reduce(&self.graph, &self.quotient);
            if g.is_zero() {
                continue;
            }
            let (ig, mg) = g.bidegree(&self.graph)?;
            let Some(rest) = mu.checked_sub(&mg) else { continue };
            if ig > i {
                continue;
            }
            for r in self.homology(i - ig, &rest)?.representatives() {
                span.insert(&self.coords_in(&self.multiply(&g, &r), i, mu)?);
            }
        }
        Ok(span)
    }

    /// Subalgebra generated by `gens` (and 1), stratum by stratum over the box.
    pub fn subalgebra_spans(&self, gens: &[ChainElement], bound: &Multidegree) -> Result<BTreeMap<Key, Subspace>, HomologyError> {
        self.precompute(bound)?;
        let mut graded = Vec::new();
        for g in gens {
            let g = g.reduce(&self.graph, &self.quotient);
            if !g.is_zero() {
                let (i, mu) = g.bidegree(&self.graph)?;
                graded.push((i, mu, g));
            }
        }
        let mut spans: BTreeMap<Key, Subspace> = BTreeMap::new();
        for (i, mu) in self.strata_in_box(bound) {
            let h = self.homology(i, &mu)?;
            let mut span = Subspace::new(self.field, h.dim);
            if mu.is_zero() {
                if i == 0 {
                    span = Subspace::whole(self.field, h.dim);
                }
                spans.insert((i, mu), span);
                continue;
            }
            for (ig, mg, g) in &graded {
                let Some(rest) = mu.checked_sub(mg) else { continue };
                if *ig > i {
                    continue;
                }
                // degrees above max_degree(rest) are absent: they vanish
                let Some(below) = spans.get(&(i - ig, rest.clone())) else { continue };
                let hr = self.homology(i - ig, &rest)?;
                for w in below.basis() {
                    let prod = self.multiply(g, &hr.chain_of_coords(w));
                    span.insert(&self.coords_in(&prod, i, &mu)?);
                }
            }
            spans.insert((i, mu), span);
        }
        Ok(spans)
    }

    /// Minimal generators inside `bound`, found bottom-up: at each stratum
    /// `𝔪²` is spanned by products of earlier generators with positive-degree
    /// homology, and representatives independent of it become generators.
    pub fn minimal_generator_counts(&self, bound: &Multidegree) -> Result<GeneratorTable, HomologyError> {
        self.precompute(bound)?;
        let mut rows = Vec::new();
        let mut generators: Vec<(usize, Multidegree, ChainElement)> = Vec::new();
        let mut decomposables = HashMap::new();
        for mu in bound.lower_set() {
            if mu.is_zero() {
                continue;
            }
            let mut found = Vec::new();
            for i in 0..=self.max_degree(&mu) {
                let h = self.homology(i, &mu)?;
                let mut dec = Subspace::new(self.field, h.dim);
                if h.dim > 0 {
                    for (ig, mg, g) in &generators {
                        if *ig > i || !mg.le(&mu) {
                            continue;
                        }
                        let rest = mu.checked_sub(mg).expect("checked above");
                        for r in self.homology(i - ig, &rest)?.representatives() {
                            dec.insert(&self.coords_in(&self.multiply(g, &r), i, &mu)?);
                        }
                    }
                }
                let decomposable = dec.dim();
                let mut ext = dec.clone();
                let reps = h.representatives();
                for (k, r) in reps.into_iter().enumerate() {
                    if ext.insert(&unit(self.field, h.dim, k)) {
                        found.push((i, mu.clone(), r));
                    }
                }
                if h.dim > 0 {
                    rows.push(GeneratorRow { i, mu: mu.clone(), dim: h.dim, decomposable, new_generators: h.dim - decomposable });
                }
                decomposables.insert((i, mu.clone()), dec);
            }
            generators.extend(found);
        }
        Ok(GeneratorTable { bound: bound.clone(), rows, generators, decomposables })
    }

    /// `𝔪²` at `(i, μ)`, computed from the generators of the box below `μ`.
    pub fn decomposable_subspace(&self, i: usize, mu: &Multidegree) -> Result<Subspace, HomologyError> {
        let table = self.minimal_generator_counts(mu)?;
        Ok(table.decomposable(i, mu).cloned().unwrap_or_else(|| Subspace::new(self.field, 0)))
    }

    /// The improper ideal `ℌ` at `(i, μ)`: products `c ∧ h` where `c` is the
    /// image of a positive-degree class of a proper subgraph. A class whose
    /// support misses a vertex already lives on the induced subgraph without
    /// it; at full support, images come from the graphs with one edge removed.
    fn improper_subspace(
        &self,
        i: usize,
        mu: &Multidegree,
        table: &GeneratorTable,
        edge_free: &mut HashMap<Key, Vec<ChainElement>>,
    ) -> Result<Subspace, HomologyError> {
        let h = self.homology(i, mu)?;
        let mut span = Subspace::new(self.field, h.dim);
        if h.dim == 0 {
            return Ok(span);
        }
        if !mu.has_full_support() {
            return Ok(Subspace::whole(self.field, h.dim));
        }
        for (ig, mg, g) in &table.generators {
            if mg.has_full_support() || *ig > i || !mg.le(mu) {
                continue;
            }
            let rest = mu.checked_sub(mg).expect("checked above");
            for r in self.homology(i - ig, &rest)?.representatives() {
                span.insert(&self.coords_in(&self.multiply(g, &r), i, mu)?);
            }
        }
        for sub_mu in mu.lower_set() {
            if !sub_mu.has_full_support() {
                continue;
            }
            let rest = mu.checked_sub(&sub_mu).expect("lower set");
            for si in 0..=i.min(self.max_degree(&sub_mu)) {
                let key = (si, sub_mu.clone());
                if !edge_free.contains_key(&key) {
                    let hs = self.homology(si, &sub_mu)?;
                    let mut img = Subspace::new(self.field, hs.dim);
                    for e in 0..self.graph.edge_count() {
                        img = img.sum(&hs.edge_free_image(e));
                    }
                    edge_free.insert(key.clone(), img.basis().iter().map(|w| hs.chain_of_coords(w)).collect());
                }
                let cs = &edge_free[&key];
                if cs.is_empty() {
                    continue;
                }
                for r in self.homology(i - si, &rest)?.representatives() {
                    for c in cs {
                        span.insert(&self.coords_in(&self.multiply(c, &r), i, mu)?);
                    }
                }
            }
        }
        Ok(span)
    }

    /// `dim H_{i,μ} − dim ℌ_{i,μ}`.
    pub fn sharp_dimension(&self, i: usize, mu: &Multidegree) -> Result<usize, HomologyError> {
        let table = self.minimal_generator_counts(mu)?;
        let h = self.homology(i, mu)?;
        let imp = self.improper_subspace(i, mu, &table, &mut HashMap::new())?;
        Ok(h.dim - imp.dim())
    }

    /// #-class dimensions at every full-support stratum of the box with
    /// nonzero homology.
    pub fn sharp_table(&self, bound: &Multidegree) -> Result<Vec<SharpRow>, HomologyError> {
        let table = self.minimal_generator_counts(bound)?;
        let mut edge_free = HashMap::new();
        let mut rows = Vec::new();
        for (i, mu) in self.strata_in_box(bound) {
            if !mu.has_full_support() {
                continue;
            }
            let h = self.homology(i, &mu)?;
            if h.dim == 0 {
                continue;
            }
            let imp = self.improper_subspace(i, &mu, &table, &mut edge_free)?;
            rows.push(SharpRow { i, mu, dim: h.dim, improper: imp.dim(), sharp: h.dim - imp.dim() });
        }
        Ok(rows)
    }
}

/// Both sides of the Künneth identity for a disjoint union.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KunnethCheck {
    pub union_dim: usize,
    pub convolution: usize,
}

impl KunnethCheck {
    pub fn holds(&self) -> bool {
        self.union_dim == self.convolution
    }
}

/// Compares `dim H_{i,μ}(g1 ⊔ g2)` with `Σ_{i1+i2=i} dim H_{i1,μ1}(g1)·dim H_{i2,μ2}(g2)`,
/// where `μ = μ1 ⊕ μ2` along the vertex split of the union.
pub fn kunneth_check(
    e1: &HomologyEngine,
    e2: &HomologyEngine,
    union: &HomologyEngine,
    i: usize,
    mu: &Multidegree,
) -> Result<KunnethCheck, HomologyError> {
    let n1 = e1.vertex_count();
    if mu.len() != n1 + e2.vertex_count() {
        return Err(HomologyError::MuLength { expected: n1 + e2.vertex_count(), got: mu.len() });
    }
    let mu1 = Multidegree(mu.0[..n1].to_vec());
    let mu2 = Multidegree(mu.0[n1..].to_vec());
    let mut convolution = 0;
    for i1 in 0..=i {
        let d1 = e1.dim(i1, &mu1)?;
        if d1 > 0 {
            convolution += d1 * e2.dim(i - i1, &mu2)?;
        }
    }
    Ok(KunnethCheck { union_dim: union.dim(i, mu)?, convolution })
}

/// Maps the representatives of `H_{i,μ}(sub)` into `big` through
/// `vertex_map` and checks that they stay independent modulo boundaries.
pub fn subgraph_embedding_check(
    big: &HomologyEngine,
    sub: &HomologyEngine,
    vertex_map: &[usize],
    i: usize,
    mu: &Multidegree,
) -> Result<bool, HomologyError> {
    big.graph()
        .check_induced(sub.graph(), vertex_map)
        .map_err(|e| HomologyError::NotInducedSubgraph(e.to_string()))?;
    let h = sub.homology(i, mu)?;
    if h.dim == 0 {
        return Ok(true);
    }
    let edge_map = embedding_edge_map(big.graph(), sub.graph(), vertex_map);
    let mut big_mu = Multidegree::zeros(big.vertex_count());
    for (v, &x) in mu.0.iter().enumerate() {
        big_mu.0[vertex_map[v]] += x;
    }
    let mut span = Subspace::new(big.field(), big.homology(i, &big_mu)?.dim);
    for r in h.representatives() {
        let z = r.relabel(big.vertex_count(), vertex_map, &edge_map);
        span.insert(&big.coords_in(&z, i, &big_mu)?);
    }
    Ok(span.dim() == h.dim)
}

/// Edge indices of `sub` inside `big` under an injective vertex map.
pub fn embedding_edge_map(big: &Graph, sub: &Graph, vertex_map: &[usize]) -> Vec<usize> {
    sub.edges()
        .iter()
        .map(|&(a, b)| big.edge_index(vertex_map[a], vertex_map[b]).expect("edge present in the supergraph"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(g: Graph) -> HomologyEngine {
        HomologyEngine::new(g, Field::Rational)
    }

    #[test]
    fn small_dimensions() {
        let tri = engine(Graph::cycle(3).unwrap());
        assert_eq!(tri.dim(1, &Multidegree::ones(3)).unwrap(), 2);
        let pent = engine(Graph::cycle(5).unwrap());
        assert_eq!(pent.dim(2, &Multidegree::ones(5)).unwrap(), 1);
        let edge = engine(Graph::path(2).unwrap());
        assert_eq!(edge.dim(1, &Multidegree::ones(2)).unwrap(), 0);
        assert_eq!(edge.dim(0, &Multidegree::ones(2)).unwrap(), 0);
        assert_eq!(edge.dim(0, &Multidegree(vec![1, 0])).unwrap(), 1);
        assert!(matches!(edge.dim(0, &Multidegree::ones(3)), Err(HomologyError::MuLength { .. })));
    }

    #[test]
    fn boundaries_and_non_cycles() {
        let e = engine(Graph::path(3).unwrap());
        let g = e.graph().clone();
        let z = ChainElement::wedge_of_edges(Field::Rational, 3, &[0, 1]).unwrap();
        assert!(e.is_boundary(&z.differential(&g, &QuotientSpec::none())).unwrap());
        assert_eq!(e.is_boundary(&z), Err(HomologyError::NotACycle));
        let inhom = z.add(&ChainElement::variable(Field::Rational, 3, 0));
        assert_eq!(e.is_boundary(&inhom), Err(HomologyError::NotHomogeneous));
    }

    #[test]
    fn variables_are_generators() {
        let e = engine(Graph::cycle(4).unwrap());
        let t = e.minimal_generator_counts(&default_box(e.graph())).unwrap();
        for v in 0..4 {
            assert_eq!(t.new_generators_at(0, &Multidegree::unit(4, v)), 1);
        }
    }

    #[test]
    fn isolated_vertex_is_regular() {
        let e = engine(Graph::with_vertex_count(3, [(0, 1)]).unwrap());
        for mu in Multidegree(vec![1, 1, 2]).lower_set() {
            for i in 0..=e.max_degree(&mu) {
                if mu.get(2) == 0 {
                    continue;
                }
                let below = Multidegree(vec![mu.get(0), mu.get(1), mu.get(2) - 1]);
                if i <= e.max_degree(&below) {
                    assert_eq!(e.annihilator_stratum(2, i, &below).unwrap().dim(), 0);
                }
            }
        }
    }

    #[test]
    fn kunneth_two_edges() {
        let p2 = Graph::path(2).unwrap();
        let u = Graph::disjoint_union(&p2, &p2);
        let (e1, e2, eu) = (engine(p2.clone()), engine(p2), engine(u));
        let k = kunneth_check(&e1, &e2, &eu, 0, &Multidegree::ones(4)).unwrap();
        assert!(k.holds());
    }

    #[test]
    fn embedding_rejects_non_induced() {
        let big = engine(Graph::cycle(3).unwrap());
        let sub = engine(Graph::path(3).unwrap());
        assert!(matches!(
            subgraph_embedding_check(&big, &sub, &[0, 1, 2], 0, &Multidegree::zeros(3)),
            Err(HomologyError::NotInducedSubgraph(_))
        ));
    }

    #[test]
    fn prime_field_agrees_on_small_cycles() {
        for n in 3..=7 {
            let g = Graph::cycle(n).unwrap();
            let a = HomologyEngine::new(g.clone(), Field::Rational);
            let b = HomologyEngine::new(g, Field::Prime(crate::field::DEFAULT_PRIME));
            let mu = Multidegree::ones(n);
            assert_eq!(a.dims(&mu).unwrap(), b.dims(&mu).unwrap());
        }
    }
}
