//! Distinguished classes (stars, circles, the figure-eight witness) and the
//! chain-level maps between graphs: edge deletion `u`/`v`, glue and split.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainElement, ChainError, Divisor, Multidegree, QuotientSpec};
use crate::field::Field;
use crate::graph::{EdgeAssignment, GlueMap, Graph, GraphError, SplitMap};
use crate::homology::{HomologyEngine, HomologyError};
use crate::linalg::{Matrix, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("no edge between center {0} and leaf {1}")]
    MissingEdge(usize, usize),
    #[error("leaf {0} repeated")]
    RepeatedLeaf(usize),
    #[error("a star needs at least one leaf")]
    NoLeaves,
    #[error("circle length {0} is not 2 mod 3")]
    BadLength(usize),
    #[error("figure-eight lengths ({0}, {1}) are not both 1 mod 3")]
    BadLengths(usize, usize),
    #[error("edge {0} is not a bridge")]
    NotABridge(usize),
    #[error("cannot parse class descriptor {0:?}")]
    Descriptor(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// Center and ordered leaves of a star.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StarSpec {
    pub center: usize,
    pub leaves: Vec<usize>,
}

impl StarSpec {
    pub fn new(center: usize, leaves: impl IntoIterator<Item = usize>) -> Self {
        StarSpec { center, leaves: leaves.into_iter().collect() }
    }

    pub fn validate(&self, g: &Graph) -> Result<(), ClassError> {
        if self.leaves.is_empty() {
            return Err(ClassError::NoLeaves);
        }
        for (k, &y) in self.leaves.iter().enumerate() {
            if self.leaves[..k].contains(&y) {
                return Err(ClassError::RepeatedLeaf(y));
            }
            if self.center >= g.vertex_count() || !g.is_adjacent(self.center, y) {
                return Err(ClassError::MissingEdge(self.center, y));
            }
        }
        Ok(())
    }

    pub fn display(&self, g: &Graph) -> String {
        let leaves: Vec<&str> = self.leaves.iter().map(|&y| g.name(y)).collect();
        format!("star_{}({})", g.name(self.center), leaves.join(","))
    }
}

/// `★_x(y_1..y_k) = d(e_{xy_1} ∧ … ∧ e_{xy_k}) / t_x`.
pub fn star(g: &Graph, field: Field, spec: &StarSpec) -> Result<ChainElement, ClassError> {
    spec.validate(g)?;
    let edges: Vec<usize> = spec.leaves.iter().map(|&y| g.edge_index(spec.center, y).expect("validated")).collect();
    let w = ChainElement::wedge_of_edges(field, g.vertex_count(), &edges)?;
    Ok(w.differential(g, &QuotientSpec::none()).divide_exact(Divisor::Variable(spec.center))?)
}

/// Every star with at most `max_leaves` leaves (leaves ascending), with
/// duplicate one-leaf stars (`★_x(y) = t_y`) kept once at the smallest
/// center, and for each triangle `a < b < c` the star `★_a(b, c)` dropped.
pub fn minimal_star_system(g: &Graph, max_leaves: usize) -> Vec<StarSpec> {
    let triangles = g.triangles();
    let mut seen_vars = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for x in 0..g.vertex_count() {
        let nb = g.neighbors(x);
        for k in 1..=max_leaves.min(nb.len()) {
            for leaves in subsets(&nb, k) {
                if k == 1 {
                    if seen_vars[leaves[0]] {
                        continue;
                    }
                    seen_vars[leaves[0]] = true;
                }
                if k == 2 && triangles.contains(&(x, leaves[0], leaves[1])) {
                    continue;
                }
                out.push(StarSpec { center: x, leaves });
            }
        }
    }
    out
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Every star at `x` (all nonempty leaf subsets, ascending).
pub fn stars_at(g: &Graph, x: usize) -> Vec<StarSpec> {
    let nb = g.neighbors(x);
    (1..=nb.len()).flat_map(|k| subsets(&nb, k)).map(|leaves| StarSpec { center: x, leaves }).collect()
}

/// The circle class on `cycle(n)`, `n ≡ 2 (mod 3)`, with vertices
/// `t1..tn` at indices `0..n-1`.
#[derive(Clone, Debug)]
pub struct Circle {
    pub graph: Graph,
    /// Edges `t_{3i-2} t_{3i-1}`, `0 < i ≤ (n+1)/3`, in increasing `i`.
    pub killed: Vec<usize>,
    /// `e_{t1 tn} ∧ ⋀_{0<i<(n+1)/3} ★_{3i}(3i−1, 3i+1)` reduced modulo all killed edges.
    pub reduced: ChainElement,
    /// Cycle of the full complex obtained by lifting through the killed edges.
    pub lifted: ChainElement,
}

pub fn circle(n: usize, field: Field) -> Result<Circle, ClassError> {
    if n < 3 || n % 3 != 2 {
        return Err(ClassError::BadLength(n));
    }
    let g = Graph::cycle(n)?;
    let t = |k: usize| k - 1;
    let levels = (n + 1) / 3;
    let killed: Vec<usize> =
        (1..=levels).map(|i| g.edge_index(t(3 * i - 2), t(3 * i - 1)).expect("cycle edge")).collect();
    let full = QuotientSpec::new(&g, killed.iter().copied())?;
    let first = g.edge_index(t(1), t(n)).expect("closing edge");
    let mut z = ChainElement::wedge_of_edges(field, n, &[first])?;
    for i in 1..levels {
        let s = star(&g, field, &StarSpec::new(t(3 * i), [t(3 * i - 1), t(3 * i + 1)]))?;
        z = z.wedge(&s);
    }
    let reduced = z.reduce(&g, &full);
    let mut lifted = reduced.clone();
    for i in (1..=levels).rev() {
        let before = QuotientSpec::new(&g, killed[..i].iter().copied())?;
        let after = QuotientSpec::new(&g, killed[..i - 1].iter().copied())?;
        lifted = lifted.lift_through_reduction(killed[i - 1], &g, &before, &after)?;
    }
    Ok(Circle { graph: g, killed, reduced, lifted })
}

/// Edge index map from `big` minus `removed` into `big`.
fn small_to_big(big: &Graph, removed: usize) -> Vec<usize> {
    (0..big.edge_count() - 1).map(|k| if k < removed { k } else { k + 1 }).collect()
}

/// `u`: a chain of `big − removed` read as a chain of `big`.
pub fn delete_edge_u(z: &ChainElement, big: &Graph, removed: usize) -> ChainElement {
    let n = big.vertex_count();
    let ident: Vec<usize> = (0..n).collect();
    z.relabel(n, &ident, &small_to_big(big, removed))
}

/// `v`: writes `z = e ∧ z₁ + z₂` with `z₁, z₂` free of `e = removed` and
/// returns `z₁` as a chain of `big − removed`.
pub fn delete_edge_v(z: &ChainElement, big: &Graph, removed: usize) -> ChainElement {
    let n = big.vertex_count();
    let ident: Vec<usize> = (0..n).collect();
    let to_small: Vec<usize> = (0..big.edge_count()).map(|k| if k <= removed { k } else { k - 1 }).collect();
    let parts: Vec<ChainElement> = z
        .terms()
        .iter()
        .filter(|t| t.edges.contains(removed))
        .map(|t| {
            let c = if t.edges.count_below(removed) % 2 == 1 { -&t.coeff } else { t.coeff.clone() };
            ChainElement::term(c, t.mono.clone(), t.edges.without(removed))
        })
        .collect();
    let z1 = parts.iter().fold(ChainElement::zero(), |acc, p| acc.add(p));
    z1.relabel(n, &ident, &to_small)
}

/// Rank data of `H'_{i,μ} →u H_{i,μ} →v (0 : x_e)_{H'_{i−1, μ−x_e}} → 0` at one stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletionExactness {
    pub dim_small: usize,
    pub dim_big: usize,
    pub rank_u: usize,
    pub rank_v: usize,
    pub annihilator_dim: usize,
    pub v_after_u_zero: bool,
    pub image_v_in_annihilator: bool,
}

impl DeletionExactness {
    /// `im u = ker v` and `im v = (0 : x_e)`.
    pub fn holds(&self) -> bool {
        self.v_after_u_zero
            && self.rank_u == self.dim_big - self.rank_v
            && self.image_v_in_annihilator
            && self.rank_v == self.annihilator_dim
    }
}

/// Checks exactness of the edge-deletion sequence at `(i, μ)`; `small`
/// must be the engine of `big` with edge `e` removed.
pub fn edge_deletion_exactness(
    big: &HomologyEngine,
    small: &HomologyEngine,
    e: usize,
    i: usize,
    mu: &Multidegree,
) -> Result<DeletionExactness, ClassError> {
    let g = big.graph();
    let field = big.field();
    let hb = big.homology(i, mu)?;
    let hs = small.homology(i, mu)?;
    let u_cols: Vec<_> = hs
        .representatives()
        .iter()
        .map(|r| big.coords_in(&delete_edge_u(r, g, e), i, mu))
        .collect::<Result<_, _>>()?;
    let u = Matrix::from_columns(field, hb.dim, &u_cols);
    let xe = Multidegree::of_edge(g.vertex_count(), g.edge(e));
    let (v, ann_dim, ann) = match (i.checked_sub(1), mu.checked_sub(&xe)) {
        (Some(j), Some(rest)) => {
            let ht = small.homology(j, &rest)?;
            let cols: Vec<_> = hb
                .representatives()
                .iter()
                .map(|r| small.coords_in(&delete_edge_v(r, g, e), j, &rest))
                .collect::<Result<_, _>>()?;
            let ann = small.annihilator_of_monomial(&xe, j, &rest)?;
            (Matrix::from_columns(field, ht.dim, &cols), ann.dim(), ann)
        }
        _ => (Matrix::zeros(field, 0, hb.dim), 0, Subspace::new(field, 0)),
    };
    Ok(DeletionExactness {
        dim_small: hs.dim,
        dim_big: hb.dim,
        rank_u: u.rank(),
        rank_v: v.rank(),
        annihilator_dim: ann_dim,
        v_after_u_zero: v.mul(&u).is_zero(),
        image_v_in_annihilator: v.columns().iter().all(|c| ann.contains(c)),
    })
}

/// Pushes a chain of `g` to the graph with `a`, `b` identified.
pub fn glue_map(z: &ChainElement, g: &Graph, a: usize, b: usize) -> Result<(GlueMap, ChainElement), ClassError> {
    let gm = g.glue_vertices(a, b)?;
    let image = z.relabel(gm.glued.vertex_count(), &gm.vertex_map, &gm.edge_map);
    Ok((gm, image))
}

/// Split map of a cycle `z` of the glued graph: rename per the assignment
/// (monomial occurrences of γ go to α), apply `d` in the split graph and
/// divide exactly by `α − β`.
pub fn split_map(z: &ChainElement, glued: &Graph, assignment: &EdgeAssignment) -> Result<(SplitMap, ChainElement), ClassError> {
    let sm = glued.split_vertex(assignment)?;
    let n = sm.split.vertex_count();
    let ident: Vec<usize> = (0..glued.vertex_count()).collect();
    let v1 = z.relabel(n, &ident, &sm.edge_map);
    let d = v1.differential(&sm.split, &QuotientSpec::none());
    let out = d.divide_exact(Divisor::Binomial(sm.alpha, sm.beta))?;
    Ok((sm, out))
}

/// `(deg_α, deg_β)` of every homogeneous component of a split-map output.
pub fn component_exponents(z: &ChainElement, split: &SplitMap) -> Vec<(u32, u32, ChainElement)> {
    z.homogeneous_components(&split.split)
        .into_iter()
        .map(|(mu, c)| (mu.get(split.alpha), mu.get(split.beta), c))
        .collect()
}

/// The figure-eight `figure_eight(n, m)` with its split at the shared vertex:
/// the α side keeps the first link, the β side the second.
pub fn figure_eight_split(n: usize, m: usize) -> Result<(Graph, EdgeAssignment, SplitMap), ClassError> {
    let g = Graph::figure_eight(n, m)?;
    let alpha_edges = vec![g.edge_index(0, 1).expect("a1"), g.edge_index(0, n - 1).expect("a(n-1)")];
    let beta_edges = vec![g.edge_index(0, n).expect("b1"), g.edge_index(0, n + m - 2).expect("b(m-1)")];
    let mut alpha_edges = alpha_edges;
    let mut beta_edges = beta_edges;
    alpha_edges.sort_unstable();
    beta_edges.sort_unstable();
    let assignment = EdgeAssignment { gamma: 0, alpha_edges, beta_edges };
    let sm = g.split_vertex(&assignment)?;
    Ok((g, assignment, sm))
}

/// `(α+β) ∧ ⋀_{i ≤ (n−1)/3} ★_{α_{3i−1}}(α_{3i−2}, α_{3i}) ∧ ⋀_{i ≤ (m−1)/3} ★_{β_{3i−1}}(β_{3i−2}, β_{3i})`
/// on the split figure-eight (two disjoint cycles), `n ≡ m ≡ 1 (mod 3)`.
pub fn figure_eight_witness(n: usize, m: usize, field: Field) -> Result<(SplitMap, ChainElement), ClassError> {
    if n < 4 || m < 4 || n % 3 != 1 || m % 3 != 1 {
        return Err(ClassError::BadLengths(n, m));
    }
    let (_, _, sm) = figure_eight_split(n, m)?;
    let g = &sm.split;
    let alpha_link = |k: usize| k;
    let beta_link = |k: usize| n - 1 + k;
    let mut z = ChainElement::one(field, g.vertex_count());
    for i in 1..=(n - 1) / 3 {
        let spec = StarSpec::new(alpha_link(3 * i - 1), [alpha_link(3 * i - 2), alpha_link(3 * i)]);
        z = z.wedge(&star(g, field, &spec)?);
    }
    for i in 1..=(m - 1) / 3 {
        let spec = StarSpec::new(beta_link(3 * i - 1), [beta_link(3 * i - 2), beta_link(3 * i)]);
        z = z.wedge(&star(g, field, &spec)?);
    }
    let witness = z.mul_var(sm.alpha).add(&z.mul_var(sm.beta));
    Ok((sm, witness))
}

/// Candidate generators for a graph with a bridge `e = xy`: homology bases of
/// both sides (inside `bound`) embedded into `g`, and every star at `x` and `y`.
pub fn bridge_generators(g: &Graph, e: usize, field: Field, bound: &Multidegree) -> Result<Vec<ChainElement>, ClassError> {
    if !g.is_bridge(e) {
        return Err(ClassError::NotABridge(e));
    }
    let (x, y) = g.edge(e);
    let (cut, _) = g.delete_edge(e)?;
    let mut gens = Vec::new();
    for side in cut.connected_components() {
        if !side.contains(&x) && !side.contains(&y) {
            continue;
        }
        let sub = g.induced(&side)?;
        let edge_map = crate::homology::embedding_edge_map(g, &sub, &side);
        let engine = HomologyEngine::new(sub, field);
        let side_bound = Multidegree(side.iter().map(|&v| bound.get(v)).collect());
        for (i, mu) in engine.strata_in_box(&side_bound) {
            if mu.is_zero() {
                continue;
            }
            for r in engine.homology(i, &mu)?.representatives() {
                gens.push(r.relabel(g.vertex_count(), &side, &edge_map));
            }
        }
    }
    for spec in stars_at(g, x).into_iter().chain(stars_at(g, y)) {
        gens.push(star(g, field, &spec)?);
    }
    Ok(gens)
}

/// Named class descriptors: `star:x=2,leaves=1,3`, `circle:n=5`,
/// `witness:n=4,m=4`. Vertex numbers in star descriptors are indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassDescriptor {
    Star(StarSpec),
    Circle(usize),
    Witness(usize, usize),
}

impl std::str::FromStr for ClassDescriptor {
    type Err = ClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ClassError::Descriptor(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let mut fields: Vec<(String, Vec<usize>)> = Vec::new();
        for part in rest.split(',') {
            match part.split_once('=') {
                Some((k, v)) => fields.push((k.trim().to_string(), vec![v.trim().parse().map_err(|_| bad())?])),
                None => fields.last_mut().ok_or_else(bad)?.1.push(part.trim().parse().map_err(|_| bad())?),
            }
        }
        let get = |k: &str| fields.iter().find(|(name, _)| name == k).map(|(_, v)| v.clone()).ok_or_else(bad);
        let single = |k: &str| -> Result<usize, ClassError> {
            match get(k)?.as_slice() {
                [x] => Ok(*x),
                _ => Err(bad()),
            }
        };
        match kind.trim() {
            "star" => Ok(ClassDescriptor::Star(StarSpec { center: single("x")?, leaves: get("leaves")? })),
            "circle" => Ok(ClassDescriptor::Circle(single("n")?)),
            "witness" => Ok(ClassDescriptor::Witness(single("n")?, single("m")?)),
            _ => Err(bad()),
        }
    }
}
