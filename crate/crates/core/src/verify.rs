//! Named verification suites over the families of graphs with known
//! homology, producing a deterministic machine-readable report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::chain::Multidegree;
use crate::classes::{
    bridge_generators, circle, component_exponents, edge_deletion_exactness, figure_eight_split, figure_eight_witness,
    minimal_star_system, split_map, star, stars_at, ClassError, StarSpec,
};
use crate::field::Field;
use crate::graph::{Graph, GraphError};
use crate::homology::{default_box, kunneth_check, HomologyEngine, HomologyError};
use crate::linalg::Subspace;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Paths,
    Cycles,
    Trees,
    Bridge,
    Eight,
    Exactness,
    Kunneth,
    All,
}

impl Suite {
    pub const SINGLE: [Suite; 7] =
        [Suite::Paths, Suite::Cycles, Suite::Trees, Suite::Bridge, Suite::Eight, Suite::Exactness, Suite::Kunneth];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Paths => "paths",
            Suite::Cycles => "cycles",
            Suite::Trees => "trees",
            Suite::Bridge => "bridge",
            Suite::Eight => "eight",
            Suite::Exactness => "exactness",
            Suite::Kunneth => "kunneth",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::SINGLE
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

/// One verified statement: what was expected, what was computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: String,
    pub graph: String,
    pub check: String,
    /// Stratum `(i, μ)` when the check concerns a single one, or the first failing one.
    pub stratum: Option<String>,
    /// The rule the expected value comes from.
    pub rule: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub field: String,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
    /// Wall time; the only field that varies between identical runs.
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// The report with timing removed, for byte-identical comparisons.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("suite\tgraph\tcheck\tstratum\texpected\tcomputed\tpass\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                c.suite,
                c.graph,
                c.check,
                c.stratum.as_deref().unwrap_or("-"),
                c.expected,
                c.computed,
                if c.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder {
    fn record(&mut self, graph: &str, check: &str, stratum: Option<String>, rule: &str, expected: String, computed: String) {
        let pass = expected == computed;
        self.checks.push(Check {
            suite: self.suite.name().to_string(),
            graph: graph.to_string(),
            check: check.to_string(),
            stratum,
            rule: rule.to_string(),
            expected,
            computed,
            pass,
        });
    }

    /// Records a check over many strata: expected all to hold.
    fn record_all(&mut self, graph: &str, check: &str, rule: &str, total: usize, failures: &[String]) {
        self.record(
            graph,
            check,
            failures.first().cloned(),
            rule,
            format!("{total}/{total} strata"),
            format!("{}/{total} strata", total - failures.len()),
        );
    }
}

fn stratum_label(i: usize, mu: &Multidegree) -> String {
    format!("({i}, {mu})")
}

pub fn run_suite(suite: Suite, field: Field) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let suites: Vec<Suite> = if suite == Suite::All { Suite::SINGLE.to_vec() } else { vec![suite] };
    for s in suites {
        let mut rec = Recorder { suite: s, checks: Vec::new() };
        match s {
            Suite::Paths => paths(&mut rec, field)?,
            Suite::Cycles => cycles(&mut rec, field)?,
            Suite::Trees => trees(&mut rec, field)?,
            Suite::Bridge => bridge(&mut rec, field)?,
            Suite::Eight => eight(&mut rec, field)?,
            Suite::Exactness => exactness(&mut rec, field)?,
            Suite::Kunneth => kunneth(&mut rec, field)?,
            Suite::All => unreachable!("expanded above"),
        }
        checks.extend(rec.checks);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    Ok(VerificationReport {
        suite: suite.name().to_string(),
        field: field.to_string(),
        passed: checks.len() - failed,
        failed,
        checks,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

fn total_dim(e: &HomologyEngine, mu: &Multidegree) -> Result<usize, HomologyError> {
    Ok(e.dims(mu)?.iter().map(|&(_, d)| d).sum())
}

fn paths(rec: &mut Recorder, field: Field) -> Result<(), VerifyError> {
    for n in 2..=10 {
        let e = HomologyEngine::new(Graph::path(n)?, field);
        let mu = Multidegree::ones(n);
        let expected = if n % 3 == 2 { 0 } else { 1 };
        rec.record(
            &format!("path({n})"),
            "total dim H at all-ones",
            None,
            "zero iff n = 2 mod 3, else one",
            expected.to_string(),
            total_dim(&e, &mu)?.to_string(),
        );
    }
    let e = HomologyEngine::new(Graph::path(1)?, field);
    let higher: usize = e.strata_in_box(&default_box(e.graph())).iter().filter(|(i, _)| *i > 0).count();
    rec.record("path(1)", "strata above degree 0", None, "no edges", "0".into(), higher.to_string());
    Ok(())
}

fn cycles(rec: &mut Recorder, field: Field) -> Result<(), VerifyError> {
    for n in 3..=9 {
        let e = HomologyEngine::new(Graph::cycle(n)?, field);
        let expected = if n % 3 == 0 { 2 } else { 1 };
        rec.record(
            &format!("cycle({n})"),
            "total dim H at all-ones",
            None,
            "two iff n = 0 mod 3, else one",
            expected.to_string(),
            total_dim(&e, &Multidegree::ones(n))?.to_string(),
        );
    }

    let tri = Graph::cycle(3)?;
    let e = HomologyEngine::new(tri.clone(), field);
    let mu = Multidegree::ones(3);
    let mut span = Subspace::new(field, e.dim(1, &mu)?);
    for x in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&y| y != x).collect();
        span.insert(&e.coords_in(&star(&tri, field, &StarSpec::new(x, others))?, 1, &mu)?);
    }
    rec.record("cycle(3)", "span of the three 2-stars", Some(stratum_label(1, &mu)), "one linear relation", "2".into(), span.dim().to_string());

    for n in 4..=8 {
        let g = Graph::cycle(n)?;
        let e = HomologyEngine::new(g.clone(), field);
        let table = e.minimal_generator_counts(&default_box(&g))?;
        let mut expected: Vec<(usize, Multidegree, usize)> = Vec::new();
        for v in 0..n {
            expected.push((0, Multidegree::unit(n, v), 1));
            let mut mu = Multidegree::unit(n, v);
            for y in g.neighbors(v) {
                mu = mu.add(&Multidegree::unit(n, y));
            }
            expected.push((1, mu, 1));
        }
        if n % 3 == 2 {
            expected.push(((n + 1) / 3, Multidegree::ones(n), 1));
        }
        expected.sort();
        let mut found: Vec<(usize, Multidegree, usize)> = table
            .rows
            .iter()
            .filter(|r| r.new_generators > 0)
            .map(|r| (r.i, r.mu.clone(), r.new_generators))
            .collect();
        found.sort();
        let show = |v: &[(usize, Multidegree, usize)]| {
            v.iter().map(|(i, mu, k)| format!("{k}@{}", stratum_label(*i, mu))).collect::<Vec<_>>().join(" ")
        };
        rec.record(
            &format!("cycle({n})"),
            "new generator locations in the default box",
            None,
            "variables, 2-stars, and one circle iff n = 2 mod 3",
            show(&expected),
            show(&found),
        );
    }

    for n in [5, 8] {
        let c = circle(n, field)?;
        let e = HomologyEngine::new(c.graph.clone(), field);
        let k = (n + 1) / 3;
        let mu = Multidegree::ones(n);
        let graph = format!("cycle({n})");
        let label = Some(stratum_label(k, &mu));
        let rule = "circle class";
        rec.record(&graph, "circle is a cycle", None, rule, "true".into(), e.is_cycle(&c.lifted).to_string());
        let bideg = c.lifted.bidegree(&c.graph).map(|(i, m)| stratum_label(i, &m)).unwrap_or_else(|e| e.to_string());
        rec.record(&graph, "circle bidegree", None, rule, stratum_label(k, &mu), bideg);
        rec.record(&graph, "circle is a boundary", label.clone(), rule, "false".into(), e.is_boundary(&c.lifted)?.to_string());
        let dec = e.decomposable_subspace(k, &mu)?;
        let coords = e.coords_in(&c.lifted, k, &mu)?;
        rec.record(&graph, "circle lies in the decomposables", label.clone(), rule, "false".into(), dec.contains(&coords).to_string());
        let mut full = dec.clone();
        full.insert(&coords);
        rec.record(&graph, "decomposables plus circle fill H", label, rule, e.dim(k, &mu)?.to_string(), full.dim().to_string());
    }
    Ok(())
}

fn trees(rec: &mut Recorder, field: Field) -> Result<(), VerifyError> {
    for n in 2..=6 {
        for (k, tree) in Graph::nonisomorphic_trees(n).into_iter().enumerate() {
            let max_valence = (0..n).map(|v| tree.valence(v)).max().unwrap_or(0);
            let gens = minimal_star_system(&tree, max_valence)
                .iter()
                .map(|s| star(&tree, field, s))
                .collect::<Result<Vec<_>, _>>()?;
            let e = HomologyEngine::new(tree.clone(), field);
            let spans = e.subalgebra_spans(&gens, &default_box(&tree))?;
            let mut failures = Vec::new();
            for ((i, mu), s) in &spans {
                if s.dim() != e.dim(*i, mu)? {
                    failures.push(stratum_label(*i, mu));
                }
            }
            rec.record_all(&format!("tree({n}#{k})"), "stars generate H", "trees are generated by stars", spans.len(), &failures);
        }
    }
    Ok(())
}

/// Triangle, bridge, triangle.
pub fn triangle_bridge_triangle() -> Result<Graph, GraphError> {
    let t = Graph::cycle(3)?;
    Graph::bridge_join(&t, &t, 2, 0)
}

fn bridge(rec: &mut Recorder, field: Field) -> Result<(), VerifyError> {
    let g = triangle_bridge_triangle()?;
    let e_bridge = (0..g.edge_count()).find(|&e| g.is_bridge(e)).expect("bridge present");
    let bound = default_box(&g);
    let gens = bridge_generators(&g, e_bridge, field, &bound)?;
    let e = HomologyEngine::new(g, field);
    let spans = e.subalgebra_spans(&gens, &bound)?;
    let mut failures = Vec::new();
    for ((i, mu), s) in &spans {
        if s.dim() != e.dim(*i, mu)? {
            failures.push(stratum_label(*i, mu));
        }
    }
    rec.record_all(
        "triangle-bridge-triangle",
        "side classes and endpoint stars generate H",
        "bridge decomposition",
        spans.len(),
        &failures,
    );
    Ok(())
}

fn exactness(rec: &mut Recorder, field: Field) -> Result<(), VerifyError> {
    for n in [5, 6] {
        let g = Graph::cycle(n)?;
        let big = HomologyEngine::new(g.clone(), field);
        let bound = default_box(&g);
        let mut failures = Vec::new();
        let mut total = 0;
        for e in 0..g.edge_count() {
            let small = HomologyEngine::new(g.delete_edge(e)?.0, field);
            for (i, mu) in big.strata_in_box(&bound) {
                total += 1;
                if !edge_deletion_exactness(&big, &small, e, i, &mu)?.holds() {
                    failures.push(format!("edge {e} {}", stratum_label(i, &mu)));
                }
            }
        }
        rec.record_all(&format!("cycle({n})"), "edge deletion sequence exact", "im u = ker v, v onto (0 : x_e)", total, &failures);
    }

    let graphs = [
        ("path(4)", Graph::path(4)?),
        ("cycle(5)", Graph::cycle(5)?),
        ("star(3)", Graph::star(3)?),
        ("triangle-bridge-triangle", triangle_bridge_triangle()?),
    ];
    for (name, g) in graphs {
        let e = HomologyEngine::new(g.clone(), field);
        let bound = default_box(&g);
        let mut failures = Vec::new();
        let mut total = 0;
        for v in 0..g.vertex_count() {
            let gens = stars_at(&g, v).iter().map(|s| star(&g, field, s)).collect::<Result<Vec<_>, _>>()?;
            for (i, mu) in e.strata_in_box(&bound) {
                total += 1;
                if !e.annihilator_stratum(v, i, &mu)?.same_span(&e.ideal_span(&gens, i, &mu)?) {
                    failures.push(format!("vertex {v} {}", stratum_label(i, &mu)));
                }
            }
        }
        rec.record_all(name, "annihilator of t_v is the ideal of stars at v", "(0 : t_v) = (stars at v)", total, &failures);
    }
    Ok(())
}

fn kunneth(rec: &mut Recorder, field: Field) -> Result<(), VerifyError> {
    let pairs = [
        ("path(3)+path(3)", Graph::path(3)?, Graph::path(3)?),
        ("path(2)+cycle(3)", Graph::path(2)?, Graph::cycle(3)?),
    ];
    for (name, g1, g2) in pairs {
        let union = Graph::disjoint_union(&g1, &g2);
        let (e1, e2, eu) = (HomologyEngine::new(g1, field), HomologyEngine::new(g2, field), HomologyEngine::new(union, field));
        let mut failures = Vec::new();
        let strata = eu.strata_in_box(&default_box(eu.graph()));
        for (i, mu) in &strata {
            if !kunneth_check(&e1, &e2, &eu, *i, mu)?.holds() {
                failures.push(stratum_label(*i, mu));
            }
        }
        rec.record_all(name, "dimension convolution", "H of a disjoint union is the tensor product", strata.len(), &failures);
    }
    Ok(())
}

/// Link-length pairs checked for #-classes and the expected box-wide total.
pub const EIGHT_CASES: [(usize, usize, usize); 5] = [(3, 3, 0), (3, 4, 0), (4, 4, 1), (4, 5, 0), (3, 5, 0)];

fn eight(rec: &mut Recorder, field: Field) -> Result<(), VerifyError> {
    for (n, m, expected) in EIGHT_CASES {
        let g = Graph::figure_eight(n, m)?;
        let e = HomologyEngine::new(g.clone(), field);
        let rows = e.sharp_table(&default_box(&g))?;
        let nonzero: Vec<String> = rows.iter().filter(|r| r.sharp > 0).map(|r| stratum_label(r.i, &r.mu)).collect();
        let total: usize = rows.iter().map(|r| r.sharp).sum();
        rec.record(
            &format!("figure_eight({n},{m})"),
            "#-classes in the default box",
            (!nonzero.is_empty()).then(|| nonzero.join(" ")),
            "one iff both links are 1 mod 3",
            expected.to_string(),
            total.to_string(),
        );
    }

    let (sm, w) = figure_eight_witness(4, 4, field)?;
    let e = HomologyEngine::new(sm.split.clone(), field);
    let rule = "figure-eight witness";
    rec.record("split figure_eight(4,4)", "witness is a cycle", None, rule, "true".into(), e.is_cycle(&w).to_string());
    let diff = w.mul_var(sm.alpha).sub(&w.mul_var(sm.beta));
    rec.record(
        "split figure_eight(4,4)",
        "(alpha - beta) * witness is a boundary",
        None,
        rule,
        "true".into(),
        e.components_are_boundaries(&diff)?.to_string(),
    );
    rec.record(
        "split figure_eight(4,4)",
        "alpha * witness is a boundary",
        None,
        rule,
        "false".into(),
        e.components_are_boundaries(&w.mul_var(sm.alpha))?.to_string(),
    );

    let (g, assignment, sm) = figure_eight_split(4, 4)?;
    let split_engine = HomologyEngine::new(sm.split.clone(), field);
    let glued_engine = HomologyEngine::new(g.clone(), field);
    let side = |v: usize| -> Vec<Vec<usize>> {
        let nb = sm.split.neighbors(v);
        vec![vec![nb[0]], vec![nb[1]], nb.clone()]
    };
    let mut failures = Vec::new();
    let mut total = 0;
    for r in side(sm.alpha) {
        for s in side(sm.beta) {
            total += 1;
            let leaves: Vec<usize> = r.iter().chain(&s).copied().collect();
            let z = star(&g, field, &StarSpec::new(assignment.gamma, leaves))?;
            let (_, out) = split_map(&z, &g, &assignment)?;
            let prod = star(&sm.split, field, &StarSpec::new(sm.alpha, r.clone()))?
                .wedge(&star(&sm.split, field, &StarSpec::new(sm.beta, s.clone()))?);
            let equal = split_engine.components_are_boundaries(&out.sub(&prod))?
                || split_engine.components_are_boundaries(&out.add(&prod))?;
            if !equal {
                failures.push(format!("r={r:?} s={s:?}"));
            }
        }
    }
    rec.record(
        "figure_eight(4,4)",
        "split of a star at the center is a product of stars up to sign",
        failures.first().cloned(),
        "star splitting",
        format!("{total}/{total}"),
        format!("{}/{total}", total - failures.len()),
    );

    let (s_alpha, s_beta) = (sm.split.valence(sm.alpha) as u32, sm.split.valence(sm.beta) as u32);
    let mut sampled = 0;
    let mut violations = Vec::new();
    'outer: for (i, mu) in glued_engine.strata_in_box(&default_box(&g)) {
        if mu.get(assignment.gamma) == 0 {
            continue;
        }
        for z in glued_engine.homology(i, &mu)?.representatives() {
            if sampled == 20 {
                break 'outer;
            }
            sampled += 1;
            let (_, out) = split_map(&z, &g, &assignment)?;
            for (ra, rb, c) in component_exponents(&out, &sm) {
                if !(ra < s_alpha && rb < s_beta) && !split_engine.is_boundary(&c)? {
                    violations.push(format!("{} -> ({ra},{rb})", stratum_label(i, &mu)));
                }
            }
        }
    }
    rec.record(
        "figure_eight(4,4)",
        "split components stay below the valences",
        violations.first().cloned(),
        "component bound",
        format!("0 violations in {sampled} classes"),
        format!("{} violations in {sampled} classes", violations.len()),
    );
    Ok(())
}
