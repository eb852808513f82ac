//! Chains of the Koszul complex of an edge ideal.
//!
//! A chain is a finite sum of terms `c · m · e_{i1} ∧ … ∧ e_{ik}` with `m` a
//! monomial in the vertex variables and `i1 < … < ik` edge indices. Polynomial
//! coefficients are flattened into several terms sharing an edge set.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldError, Scalar};
use crate::graph::{Graph, GraphError, Matching};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("chain is not homogeneous")]
    NotHomogeneous,
    #[error("the zero chain has no degree")]
    ZeroChain,
    #[error("split failed: term {mono} {edges} neither contains the edge nor is divisible by its monomial")]
    SplitFailed { mono: Multidegree, edges: EdgeSet },
    #[error("coefficient of {0} is not divisible by the divisor")]
    NotDivisible(EdgeSet),
    #[error("edge {0} is not killed in the source quotient")]
    EdgeNotKilled(usize),
    #[error("quotients do not differ by exactly edge {0}")]
    QuotientMismatch(usize),
    #[error("monomial has {got} exponents, graph has {expected} vertices")]
    MonoLength { expected: usize, got: usize },
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("repeated edge {0} in a wedge")]
    RepeatedEdge(usize),
    #[error("term with edges {0} is not a basis element of the stratum")]
    OutsideStratum(EdgeSet),
    #[error("invalid chain json: {0}")]
    Json(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Exponent vector over the vertices of a graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn zeros(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        Multidegree(vec![1; n])
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut m = Self::zeros(n);
        m.0[v] = 1;
        m
    }

    /// Degree `t_a t_b` of the edge `(a, b)`.
    pub fn of_edge(n: usize, (a, b): (usize, usize)) -> Self {
        let mut m = Self::zeros(n);
        m.0[a] += 1;
        m.0[b] += 1;
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> u32 {
        self.0[v]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Self) -> Self {
        Multidegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(Multidegree)
    }

    pub fn add_edge(&mut self, (a, b): (usize, usize)) {
        self.0[a] += 1;
        self.0[b] += 1;
    }

    pub fn divisible_by_edge(&self, (a, b): (usize, usize)) -> bool {
        self.0[a] >= 1 && self.0[b] >= 1
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&v| self.0[v] > 0).collect()
    }

    pub fn has_full_support(&self) -> bool {
        self.0.iter().all(|&x| x > 0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    /// Every multidegree `ν ≤ self`, ordered by total degree then lexicographically.
    pub fn lower_set(&self) -> Vec<Multidegree> {
        let mut out = vec![Multidegree(Vec::with_capacity(self.len()))];
        for &b in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (b as usize + 1));
            for m in &out {
                for x in 0..=b {
                    let mut m2 = m.clone();
                    m2.0.push(x);
                    next.push(m2);
                }
            }
            out = next;
        }
        out.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
        out
    }

    /// Human-readable monomial using vertex names, `1` for the empty monomial.
    pub fn monomial_string(&self, g: &Graph) -> String {
        let parts: Vec<String> = (0..self.len())
            .filter(|&v| self.0[v] > 0)
            .map(|v| if self.0[v] == 1 { g.name(v).to_string() } else { format!("{}^{}", g.name(v), self.0[v]) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Multidegree {
    type Err = String;

    /// Parses `1,0,2` (parentheses optional).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Multidegree(Vec::new()));
        }
        s.split(',')
            .map(|x| x.trim().parse::<u32>().map_err(|e| format!("bad exponent {x:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(Multidegree)
    }
}

/// Strictly increasing set of edge indices, stored as a bit mask.
///
/// Ordered lexicographically as sorted index sequences.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EdgeSet(u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn from_bits(bits: u64) -> Self {
        EdgeSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn single(e: usize) -> Self {
        EdgeSet(1 << e)
    }

    /// Sorts `edges` given in wedge order; returns the set and the parity
    /// of the sorting permutation, or the first repeated edge.
    pub fn from_wedge_order(edges: &[usize]) -> Result<(EdgeSet, usize), usize> {
        let mut bits = 0u64;
        let mut inversions = 0;
        for &e in edges {
            if bits >> e & 1 == 1 {
                return Err(e);
            }
            inversions += (bits >> e >> 1).count_ones() as usize;
            bits |= 1 << e;
        }
        Ok((EdgeSet(bits), inversions % 2))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn with(self, e: usize) -> Self {
        EdgeSet(self.0 | 1 << e)
    }

    pub fn without(self, e: usize) -> Self {
        EdgeSet(self.0 & !(1 << e))
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        EdgeSet(self.0 | other.0)
    }

    /// Number of members smaller than `e`.
    pub fn count_below(self, e: usize) -> usize {
        (self.0 & ((1u64 << e) - 1)).count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(e)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Parity of the shuffle placing `self` before `other` (both disjoint).
    pub fn merge_parity(self, other: Self) -> usize {
        other.iter().map(|b| (self.0 >> b >> 1).count_ones() as usize).sum::<usize>() % 2
    }
}

impl Ord for EdgeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let diff = self.0 ^ other.0;
        let low = diff & diff.wrapping_neg();
        let above = !((low << 1).wrapping_sub(1));
        let self_holds = self.0 & low != 0;
        let rest = if self_holds { other.0 } else { self.0 };
        // The set holding `low` is smaller unless the other one ends before it.
        let holder_smaller = rest & above != 0;
        if self_holds == holder_smaller {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for EdgeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One term `coeff · mono · e_S`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WedgeTerm {
    pub coeff: Scalar,
    pub mono: Multidegree,
    pub edges: EdgeSet,
}

impl WedgeTerm {
    pub fn multidegree(&self, g: &Graph) -> Multidegree {
        let mut m = self.mono.clone();
        for e in self.edges.iter() {
            m.add_edge(g.edge(e));
        }
        m
    }
}

/// Edges whose monomials are set to zero; always a matching.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuotientSpec {
    killed: Matching,
}

impl QuotientSpec {
    pub fn none() -> Self {
        QuotientSpec::default()
    }

    pub fn new(g: &Graph, edges: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        Ok(QuotientSpec { killed: Matching::new(g, edges)? })
    }

    pub fn from_matching(m: Matching) -> Self {
        QuotientSpec { killed: m }
    }

    pub fn killed(&self) -> &[usize] {
        self.killed.edges()
    }

    pub fn matching(&self) -> &Matching {
        &self.killed
    }

    pub fn is_trivial(&self) -> bool {
        self.killed.is_empty()
    }

    pub fn kills_edge(&self, e: usize) -> bool {
        self.killed.contains(e)
    }

    pub fn kills_mono(&self, g: &Graph, mono: &Multidegree) -> bool {
        self.killed.edges().iter().any(|&e| mono.divisible_by_edge(g.edge(e)))
    }

    fn kills_term(&self, g: &Graph, t: &WedgeTerm) -> bool {
        self.killed.edges().iter().any(|&e| t.edges.contains(e) || t.mono.divisible_by_edge(g.edge(e)))
    }
}

/// Exact divisors supported by [`ChainElement::divide_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Divisor {
    Variable(usize),
    /// `t_a − t_b`
    Binomial(usize, usize),
}

/// Canonical finite sum of wedge terms: sorted by (edge set, monomial),
/// merged and free of zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct ChainElement {
    terms: Vec<WedgeTerm>,
}

impl ChainElement {
    pub fn zero() -> Self {
        ChainElement { terms: Vec::new() }
    }

    pub fn new(terms: impl IntoIterator<Item = WedgeTerm>) -> Self {
        let mut terms: Vec<WedgeTerm> = terms.into_iter().filter(|t| !t.coeff.is_zero()).collect();
        terms.sort_by(|a, b| a.edges.cmp(&b.edges).then_with(|| a.mono.cmp(&b.mono)));
        let mut out: Vec<WedgeTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.edges == t.edges && last.mono == t.mono => {
                    last.coeff = &last.coeff + &t.coeff;
                    if last.coeff.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(t),
            }
        }
        ChainElement { terms: out }
    }

    pub fn term(coeff: Scalar, mono: Multidegree, edges: EdgeSet) -> Self {
        Self::new([WedgeTerm { coeff, mono, edges }])
    }

    /// The constant `1` of homological degree zero.
    pub fn one(field: Field, n: usize) -> Self {
        Self::term(field.one(), Multidegree::zeros(n), EdgeSet::EMPTY)
    }

    pub fn variable(field: Field, n: usize, v: usize) -> Self {
        Self::term(field.one(), Multidegree::unit(n, v), EdgeSet::EMPTY)
    }

    /// `e_{i1} ∧ … ∧ e_{ik}` with the edges in the given (wedge) order.
    pub fn wedge_of_edges(field: Field, n: usize, edges: &[usize]) -> Result<Self, ChainError> {
        let (set, parity) = EdgeSet::from_wedge_order(edges).map_err(ChainError::RepeatedEdge)?;
        Ok(Self::term(field.sign(parity), Multidegree::zeros(n), set))
    }

    pub fn terms(&self) -> &[WedgeTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ChainElement {
            terms: self.terms.iter().map(|t| WedgeTerm { coeff: -&t.coeff, ..t.clone() }).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.terms.iter().map(|t| WedgeTerm { coeff: &t.coeff * c, ..t.clone() }))
    }

    pub fn mul_mono(&self, m: &Multidegree) -> Self {
        ChainElement {
            terms: self.terms.iter().map(|t| WedgeTerm { mono: t.mono.add(m), ..t.clone() }).collect(),
        }
    }

    pub fn mul_var(&self, v: usize) -> Self {
        ChainElement {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut mono = t.mono.clone();
                    mono.0[v] += 1;
                    WedgeTerm { mono, ..t.clone() }
                })
                .collect(),
        }
    }

    /// Multiplies by the edge monomial `x_e`.
    pub fn mul_edge_mono(&self, g: &Graph, e: usize) -> Self {
        ChainElement {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut mono = t.mono.clone();
                    mono.add_edge(g.edge(e));
                    WedgeTerm { mono, ..t.clone() }
                })
                .collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                if !a.edges.is_disjoint(b.edges) {
                    continue;
                }
                let c = &a.coeff * &b.coeff;
                out.push(WedgeTerm {
                    coeff: if a.edges.merge_parity(b.edges) == 1 { -c } else { c },
                    mono: a.mono.add(&b.mono),
                    edges: a.edges.union(b.edges),
                });
            }
        }
        Self::new(out)
    }

    /// Koszul differential, computed in the quotient `q`.
    pub fn differential(&self, g: &Graph, q: &QuotientSpec) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            for (pos, e) in t.edges.iter().enumerate() {
                let mut mono = t.mono.clone();
                mono.add_edge(g.edge(e));
                let term = WedgeTerm {
                    coeff: if pos % 2 == 1 { -&t.coeff } else { t.coeff.clone() },
                    mono,
                    edges: t.edges.without(e),
                };
                if !q.kills_term(g, &term) {
                    out.push(term);
                }
            }
        }
        Self::new(out)
    }

    /// Generalized reduction: drops terms using a killed edge or whose
    /// monomial is divisible by a killed edge monomial.
    pub fn reduce(&self, g: &Graph, q: &QuotientSpec) -> Self {
        ChainElement { terms: self.terms.iter().filter(|t| !q.kills_term(g, t)).cloned().collect() }
    }

    pub fn hom_degree(&self) -> Result<usize, ChainError> {
        let first = self.terms.first().ok_or(ChainError::ZeroChain)?.edges.len();
        if self.terms.iter().all(|t| t.edges.len() == first) {
            Ok(first)
        } else {
            Err(ChainError::NotHomogeneous)
        }
    }

    pub fn multidegree(&self, g: &Graph) -> Result<Multidegree, ChainError> {
        let first = self.terms.first().ok_or(ChainError::ZeroChain)?.multidegree(g);
        if self.terms.iter().all(|t| t.multidegree(g) == first) {
            Ok(first)
        } else {
            Err(ChainError::NotHomogeneous)
        }
    }

    /// Both degrees at once; errors on zero or inhomogeneous chains.
    pub fn bidegree(&self, g: &Graph) -> Result<(usize, Multidegree), ChainError> {
        Ok((self.hom_degree()?, self.multidegree(g)?))
    }

    /// Maximal homogeneous summands by multidegree, in multidegree order.
    pub fn homogeneous_components(&self, g: &Graph) -> Vec<(Multidegree, ChainElement)> {
        let mut parts: BTreeMap<Multidegree, Vec<WedgeTerm>> = BTreeMap::new();
        for t in &self.terms {
            parts.entry(t.multidegree(g)).or_default().push(t.clone());
        }
        parts.into_iter().map(|(m, ts)| (m, ChainElement::new(ts))).collect()
    }

    /// Lifts `self` through the killing of edge `e`: `q_before` must be
    /// `q_after` plus `e`, and the reduction of `self` by `q_before` a cycle.
    /// Returns `a − e ∧ a₂` where `da = e ∧ a₁ + x_e a₂` in the `q_after` quotient.
    pub fn lift_through_reduction(
        &self,
        e: usize,
        g: &Graph,
        q_before: &QuotientSpec,
        q_after: &QuotientSpec,
    ) -> Result<Self, ChainError> {
        if !q_before.kills_edge(e) {
            return Err(ChainError::EdgeNotKilled(e));
        }
        if q_after.kills_edge(e) || q_before.matching().without(e) != *q_after.matching() {
            return Err(ChainError::QuotientMismatch(e));
        }
        let xe = g.edge(e);
        let mut a2 = Vec::new();
        for t in self.differential(g, q_after).terms {
            if t.edges.contains(e) {
                continue;
            }
            if !t.mono.divisible_by_edge(xe) {
                return Err(ChainError::SplitFailed { mono: t.mono, edges: t.edges });
            }
            let mut mono = t.mono;
            mono.0[xe.0] -= 1;
            mono.0[xe.1] -= 1;
            a2.push(WedgeTerm { mono, ..t });
        }
        let a2 = ChainElement::new(a2);
        let n = g.vertex_count();
        let field = match self.terms.first() {
            Some(t) => t.coeff.field(),
            None => return Ok(Self::zero()),
        };
        let e_chain = Self::term(field.one(), Multidegree::zeros(n), EdgeSet::single(e));
        Ok(self.sub(&e_chain.wedge(&a2)).reduce(g, q_after))
    }

    /// Exact division of every coefficient polynomial (terms grouped by
    /// edge set) by a variable or by `t_a − t_b`.
    pub fn divide_exact(&self, d: Divisor) -> Result<Self, ChainError> {
        match d {
            Divisor::Variable(v) => {
                let mut out = Vec::with_capacity(self.terms.len());
                for t in &self.terms {
                    if t.mono.get(v) == 0 {
                        return Err(ChainError::NotDivisible(t.edges));
                    }
                    let mut mono = t.mono.clone();
                    mono.0[v] -= 1;
                    out.push(WedgeTerm { mono, ..t.clone() });
                }
                Ok(ChainElement { terms: out })
            }
            Divisor::Binomial(a, b) => {
                let mut out = Vec::new();
                let mut i = 0;
                while i < self.terms.len() {
                    let edges = self.terms[i].edges;
                    let mut j = i;
                    // Remaining dividend keyed by (exponent of t_a, monomial).
                    let mut rest: BTreeMap<(u32, Multidegree), Scalar> = BTreeMap::new();
                    while j < self.terms.len() && self.terms[j].edges == edges {
                        let t = &self.terms[j];
                        rest.insert((t.mono.get(a), t.mono.clone()), t.coeff.clone());
                        j += 1;
                    }
                    while let Some(((ea, mono), c)) = rest.pop_last() {
                        if ea == 0 {
                            return Err(ChainError::NotDivisible(edges));
                        }
                        let mut q = mono;
                        q.0[a] -= 1;
                        let mut qb = q.clone();
                        qb.0[b] += 1;
                        let key = (qb.get(a), qb);
                        let updated = match rest.remove(&key) {
                            Some(old) => &old + &c,
                            None => c.clone(),
                        };
                        if !updated.is_zero() {
                            rest.insert(key, updated);
                        }
                        out.push(WedgeTerm { coeff: c, mono: q, edges });
                    }
                    i = j;
                }
                Ok(ChainElement::new(out))
            }
        }
    }

    /// Renames vertices and edges; `edge_map[e]` is the new index of edge `e`.
    /// Edge sets are re-sorted with the permutation sign.
    pub fn relabel(&self, n_new: usize, vertex_map: &[usize], edge_map: &[usize]) -> Self {
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut mono = Multidegree::zeros(n_new);
            for (v, &x) in t.mono.0.iter().enumerate() {
                mono.0[vertex_map[v]] += x;
            }
            let mapped: Vec<usize> = t.edges.iter().map(|e| edge_map[e]).collect();
            let (edges, parity) = EdgeSet::from_wedge_order(&mapped).expect("edge map is injective");
            out.push(WedgeTerm { coeff: if parity == 1 { -&t.coeff } else { t.coeff.clone() }, mono, edges });
        }
        Self::new(out)
    }

    pub fn max_edge(&self) -> Option<usize> {
        self.terms.iter().filter_map(|t| t.edges.iter().last()).max()
    }

    /// Checks monomial lengths and edge indices against `g`.
    pub fn check_against(&self, g: &Graph) -> Result<(), ChainError> {
        for t in &self.terms {
            if t.mono.len() != g.vertex_count() {
                return Err(ChainError::MonoLength { expected: g.vertex_count(), got: t.mono.len() });
            }
            if let Some(e) = t.edges.iter().find(|&e| e >= g.edge_count()) {
                return Err(ChainError::EdgeOutOfRange(e));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|t| {
                    serde_json::json!({
                        "coeff": t.coeff.to_json(),
                        "mono": t.mono.0,
                        "edges": t.edges.to_vec(),
                    })
                })
                .collect(),
        )
    }

    pub fn from_json(v: &serde_json::Value, field: Field, g: &Graph) -> Result<Self, ChainError> {
        #[derive(Deserialize)]
        struct RawTerm {
            coeff: serde_json::Value,
            mono: Vec<u32>,
            edges: Vec<usize>,
        }
        let raw: Vec<RawTerm> =
            serde_json::from_value(v.clone()).map_err(|e| ChainError::Json(e.to_string()))?;
        let mut terms = Vec::with_capacity(raw.len());
        for r in raw {
            let coeff = Scalar::from_json(&r.coeff, field)?;
            if let Some(&e) = r.edges.iter().find(|&&e| e >= g.edge_count()) {
                return Err(ChainError::EdgeOutOfRange(e));
            }
            let (edges, parity) = EdgeSet::from_wedge_order(&r.edges).map_err(ChainError::RepeatedEdge)?;
            terms.push(WedgeTerm { coeff: if parity == 1 { -coeff } else { coeff }, mono: Multidegree(r.mono), edges });
        }
        let z = ChainElement::new(terms);
        z.check_against(g)?;
        Ok(z)
    }

    /// Renders with vertex names, e.g. `t2*e[t3t4] - t4*e[t2t3]`.
    pub fn display(&self, g: &Graph) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            let c = t.coeff.to_string();
            let (sign, mag) = match c.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", c.clone()),
            };
            if k == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            let mut factors = Vec::new();
            if !t.coeff.is_one() && !(-&t.coeff).is_one() {
                factors.push(mag.to_string());
            }
            if !t.mono.is_zero() {
                factors.push(t.mono.monomial_string(g));
            }
            if !t.edges.is_empty() {
                let es: Vec<String> = t
                    .edges
                    .iter()
                    .map(|e| {
                        let (a, b) = g.edge(e);
                        format!("{}{}", g.name(a), g.name(b))
                    })
                    .collect();
                factors.push(format!("e[{}]", es.join("^")));
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::Rational
    }

    fn var(n: usize, v: usize) -> ChainElement {
        ChainElement::variable(q(), n, v)
    }

    fn edge(g: &Graph, a: usize, b: usize) -> ChainElement {
        ChainElement::wedge_of_edges(q(), g.vertex_count(), &[g.edge_index(a, b).unwrap()]).unwrap()
    }

    #[test]
    fn edge_set_order_is_lexicographic() {
        let sets: Vec<Vec<usize>> = vec![vec![], vec![0], vec![0, 1], vec![0, 1, 5], vec![0, 3], vec![1], vec![1, 2], vec![63]];
        for (i, a) in sets.iter().enumerate() {
            for (j, b) in sets.iter().enumerate() {
                let ea = EdgeSet::from_wedge_order(a).unwrap().0;
                let eb = EdgeSet::from_wedge_order(b).unwrap().0;
                assert_eq!(ea.cmp(&eb), a.cmp(b), "{a:?} vs {b:?}");
                assert_eq!(ea.cmp(&eb), i.cmp(&j));
            }
        }
    }

    #[test]
    fn wedge_signs() {
        let g = Graph::path(4).unwrap();
        let e01 = edge(&g, 0, 1);
        let e23 = edge(&g, 2, 3);
        assert!(e01.wedge(&e01).is_zero());
        let ab = e01.wedge(&e23);
        assert!(ab.terms()[0].coeff.is_one());
        assert_eq!(e23.wedge(&e01), ab.neg());
    }

    #[test]
    fn differential_of_single_edge() {
        let g = Graph::path(2).unwrap();
        let d = edge(&g, 0, 1).differential(&g, &QuotientSpec::none());
        assert_eq!(d, ChainElement::term(q().one(), Multidegree(vec![1, 1]), EdgeSet::EMPTY));
    }

    #[test]
    fn middle_star_on_path3_is_a_cycle() {
        let g = Graph::path(3).unwrap();
        let z = var(3, 2).wedge(&edge(&g, 0, 1)).sub(&var(3, 0).wedge(&edge(&g, 1, 2)));
        assert!(z.differential(&g, &QuotientSpec::none()).is_zero());
        assert_eq!(z.bidegree(&g).unwrap(), (1, Multidegree::ones(3)));
    }

    #[test]
    fn reduce_drops_killed_terms() {
        let g = Graph::path(4).unwrap();
        let qs = QuotientSpec::new(&g, [0]).unwrap();
        let killed_edge = edge(&g, 0, 1).mul_var(3);
        assert!(killed_edge.reduce(&g, &qs).is_zero());
        let killed_mono = edge(&g, 2, 3).mul_mono(&Multidegree(vec![1, 1, 0, 0]));
        assert!(killed_mono.reduce(&g, &qs).is_zero());
        let kept = edge(&g, 1, 2).mul_var(0);
        assert_eq!(kept.reduce(&g, &qs), kept);
    }

    #[test]
    fn quotient_rejects_non_matchings() {
        let g = Graph::path(3).unwrap();
        assert!(QuotientSpec::new(&g, [0, 1]).is_err());
    }

    #[test]
    fn divide_by_binomial() {
        let g = Graph::path(3).unwrap();
        let e = edge(&g, 0, 1);
        let (a, b) = (0, 2);
        // (t_a^2 - t_b^2) e / (t_a - t_b) = (t_a + t_b) e
        let num = e.mul_mono(&Multidegree(vec![2, 0, 0])).sub(&e.mul_mono(&Multidegree(vec![0, 0, 2])));
        let quo = num.divide_exact(Divisor::Binomial(a, b)).unwrap();
        assert_eq!(quo, e.mul_var(a).add(&e.mul_var(b)));
        let z = e.mul_var(1).add(&edge(&g, 1, 2).mul_mono(&Multidegree(vec![1, 0, 1])));
        let prod = z.mul_var(a).sub(&z.mul_var(b));
        assert_eq!(prod.divide_exact(Divisor::Binomial(a, b)).unwrap(), z);
        assert_eq!(e.mul_var(a).divide_exact(Divisor::Binomial(a, b)), Err(ChainError::NotDivisible(e.terms()[0].edges)));
        assert!(e.divide_exact(Divisor::Variable(0)).is_err());
    }

    #[test]
    fn lift_of_cycle_is_unchanged() {
        let g = Graph::path(3).unwrap();
        let z = var(3, 2).wedge(&edge(&g, 0, 1)).sub(&var(3, 0).wedge(&edge(&g, 1, 2)));
        let before = QuotientSpec::new(&g, [1]).unwrap();
        let lifted = z.lift_through_reduction(1, &g, &before, &QuotientSpec::none()).unwrap();
        assert_eq!(lifted, z);
    }

    #[test]
    fn lift_fails_when_reduction_is_not_a_cycle() {
        let g = Graph::path(3).unwrap();
        let a = edge(&g, 0, 1);
        let before = QuotientSpec::new(&g, [1]).unwrap();
        assert!(matches!(
            a.lift_through_reduction(1, &g, &before, &QuotientSpec::none()),
            Err(ChainError::SplitFailed { .. })
        ));
        assert_eq!(a.lift_through_reduction(0, &g, &before, &QuotientSpec::none()), Err(ChainError::EdgeNotKilled(0)));
    }

    #[test]
    fn degrees_error_on_inhomogeneous() {
        let g = Graph::path(3).unwrap();
        let z = edge(&g, 0, 1).add(&var(3, 0));
        assert_eq!(z.hom_degree(), Err(ChainError::NotHomogeneous));
        assert_eq!(ChainElement::zero().multidegree(&g), Err(ChainError::ZeroChain));
        assert_eq!(z.homogeneous_components(&g).len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let g = Graph::cycle(4).unwrap();
        let z = edge(&g, 0, 1).wedge(&edge(&g, 2, 3)).scale(&Scalar::rational(3, 2).unwrap()).add(&var(4, 2));
        let back = ChainElement::from_json(&z.to_json(), q(), &g).unwrap();
        assert_eq!(back, z);
        assert_eq!(z.display(&g), "t3 + 3/2*e[t1t2^t3t4]");
    }

    fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
        match rng.gen_range(0..4) {
            0 => Graph::cycle(rng.gen_range(3..7)).unwrap(),
            1 => Graph::path(rng.gen_range(2..7)).unwrap(),
            2 => Graph::figure_eight(3, 3).unwrap(),
            _ => Graph::star(rng.gen_range(1..5)).unwrap(),
        }
    }

    fn random_chain(rng: &mut ChaCha8Rng, g: &Graph) -> ChainElement {
        let n = g.vertex_count();
        let terms = (0..rng.gen_range(0..6)).map(|_| WedgeTerm {
            coeff: q().from_i64(rng.gen_range(-3..=3)),
            mono: Multidegree((0..n).map(|_| rng.gen_range(0..2)).collect()),
            edges: EdgeSet::from_bits(rng.gen::<u64>() & ((1u64 << g.edge_count()) - 1) & rng.gen::<u64>()),
        });
        ChainElement::new(terms)
    }

    proptest! {
        #[test]
        fn d_squared_is_zero(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng);
            let z = random_chain(&mut rng, &g);
            let none = QuotientSpec::none();
            prop_assert!(z.differential(&g, &none).differential(&g, &none).is_zero());
        }

        #[test]
        fn leibniz_rule(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng);
            let a = random_chain(&mut rng, &g);
            let b = random_chain(&mut rng, &g);
            let none = QuotientSpec::none();
            // Split `a` by homological degree so the sign is well defined.
            let mut rhs = a.differential(&g, &none).wedge(&b);
            for k in 0..=g.edge_count() {
                let ak = ChainElement::new(a.terms().iter().filter(|t| t.edges.len() == k).cloned());
                let part = ak.wedge(&b.differential(&g, &none));
                rhs = if k % 2 == 0 { rhs.add(&part) } else { rhs.sub(&part) };
            }
            prop_assert_eq!(a.wedge(&b).differential(&g, &none), rhs);
        }

        #[test]
        fn reduction_commutes_with_d(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng);
            let ms = g.enumerate_matchings(g.edge_count());
            let qs = QuotientSpec::from_matching(ms[rng.gen_range(0..ms.len())].clone());
            let z = random_chain(&mut rng, &g);
            let lhs = z.differential(&g, &QuotientSpec::none()).reduce(&g, &qs);
            let rhs = z.reduce(&g, &qs).differential(&g, &qs);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn graded_commutativity(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng);
            let a = random_chain(&mut rng, &g);
            let b = random_chain(&mut rng, &g);
            let (Ok(da), Ok(db)) = (a.hom_degree(), b.hom_degree()) else { return Ok(()); };
            let ba = b.wedge(&a);
            let expect = if da * db % 2 == 1 { ba.neg() } else { ba };
            prop_assert_eq!(a.wedge(&b), expect);
        }

        #[test]
        fn binomial_division_inverts_multiplication(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(&mut rng);
            let z = random_chain(&mut rng, &g);
            let (a, b) = (0, g.vertex_count() - 1);
            let prod = z.mul_var(a).sub(&z.mul_var(b));
            prop_assert_eq!(prod.divide_exact(Divisor::Binomial(a, b)).unwrap(), z);
        }
    }
}
