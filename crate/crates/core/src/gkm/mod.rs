//! Stacky GKM graphs. Vertices carry finite isotropy groups, edges carry
//! stabilizer groups with a chosen splitting of their Z-extension (a
//! monodromy automorphism plus lift images at both ends), and flags carry
//! tangent weights together with isotropy characters.
//!
//! A graph is plain data until `validate` has passed; after that every
//! downstream module treats it as immutable ground truth and all queries
//! here are pure. Weight conventions for built-in examples live in
//! `catalog`.

use crate::groups::{Character, FiniteGroup, GroupError, GroupHom};
use crate::qfield::{frac, rat_i, Poly, Rat};
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

pub mod catalog;
pub mod io;

#[derive(Debug, Clone, thiserror::Error)]
pub enum GkmError {
    #[error("unknown catalog entry '{0}'")]
    UnknownExample(String),
    #[error("malformed graph file: {0}")]
    Parse(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("bad graph data: {0}")]
    BadGraph(String),
}

/// Rational cocharacter-pairing vector: an element of Q^m for a rank-m torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight(pub Vec<Rat>);

impl Weight {
    pub fn zero(m: usize) -> Self {
        Weight(vec![Rat::zero(); m])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(&rat_i(-1))
    }

    pub fn scale(&self, c: &Rat) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    /// True when the two vectors are linearly dependent over Q.
    pub fn dependent_with(&self, o: &Weight) -> bool {
        let n = self.0.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if &self.0[i] * &o.0[j] != &self.0[j] * &o.0[i] {
                    return false;
                }
            }
        }
        true
    }

    /// True when r times every entry is an integer.
    pub fn integral_times(&self, r: usize) -> bool {
        let r = rat_i(r as i64);
        self.0.iter().all(|c| (c * &r).is_integer())
    }

    /// The corresponding linear polynomial in u1..um.
    pub fn to_poly(&self) -> Poly {
        Poly::linear(&self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// Decoration of one flag (edge end at a vertex): the tangent weight, the
/// vertex-group character of the tangent direction, and the embedding of the
/// edge stabilizer. `r` is the character order, so r * weight is integral on
/// valid graphs.
#[derive(Debug, Clone)]
pub struct FlagData {
    pub weight: Weight,
    pub phi: Character,
    pub j: GroupHom,
    pub r: usize,
}

impl FlagData {
    pub fn new(weight: Weight, phi: Character, j: GroupHom) -> Self {
        let r = phi.order();
        FlagData { weight, phi, j, r }
    }
}

/// One paired normal direction along a compact edge: the connection sends
/// edge `at_x` (at the x end) to edge `at_y` (at the y end), and `a` is the
/// degree of the corresponding normal line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalPair {
    pub at_x: String,
    pub at_y: String,
    pub a: Rat,
}

/// Extra decoration present only on compact edges.
#[derive(Debug, Clone)]
pub struct CompactEdge {
    pub y: String,
    /// Monodromy automorphism of the edge group, as a permutation.
    pub alpha: Vec<u16>,
    /// Image in the x-end vertex group of the degree-1 generator.
    pub t_x: u16,
    /// Image in the y-end vertex group of the degree-1 generator.
    pub t_y: u16,
    pub d_eps: u64,
    pub normals: Vec<NormalPair>,
}

#[derive(Debug, Clone)]
pub struct EdgeData {
    pub x: String,
    pub group: Arc<FiniteGroup>,
    /// None for rays (noncompact directions).
    pub compact: Option<CompactEdge>,
}

impl EdgeData {
    pub fn is_compact(&self) -> bool {
        self.compact.is_some()
    }

    pub fn y(&self) -> Option<&str> {
        self.compact.as_ref().map(|c| c.y.as_str())
    }

    pub fn has_end(&self, v: &str) -> bool {
        self.x == v || self.y() == Some(v)
    }

    pub fn other_end(&self, v: &str) -> Option<&str> {
        if self.x == v {
            self.y()
        } else if self.y() == Some(v) {
            Some(&self.x)
        } else {
            None
        }
    }
}

/// Element (g, d) of the split extension of Z by the edge group, with
/// multiplication (g,d)(g',d') = (g * alpha^d(g'), d + d').
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct HElement {
    pub g: u16,
    pub d: i64,
}

impl HElement {
    pub fn new(g: u16, d: i64) -> Self {
        HElement { g, d }
    }
}

impl fmt::Display for HElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.g, self.d)
    }
}

/// Effective curve class: nonnegative multiplicities on compact edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct EffClass(pub BTreeMap<String, u64>);

impl EffClass {
    pub fn is_zero(&self) -> bool {
        self.0.values().all(|&d| d == 0)
    }

    /// Total degree weighted by the per-edge degree markers d_eps.
    pub fn weighted_total(&self, graph: &StackyGKMGraph) -> u64 {
        self.0
            .iter()
            .map(|(e, &d)| d * graph.edge(e).compact.as_ref().map_or(1, |c| c.d_eps))
            .sum()
    }
}

impl fmt::Display for EffClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(e, d)| format!("{}:{}", e, d))
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// A single failed axiom, with enough context to locate and reproduce it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub location: String,
    pub witness: String,
}

impl Violation {
    fn new(rule: &'static str, location: impl Into<String>, witness: impl Into<String>) -> Self {
        Violation { rule, location: location.into(), witness: witness.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.rule, self.location, self.witness)
    }
}

#[derive(Debug, Clone)]
pub struct StackyGKMGraph {
    pub name: String,
    /// Torus rank.
    pub m: usize,
    /// Valence of every vertex; equals the dimension.
    pub r: usize,
    pub vertices: BTreeMap<String, Arc<FiniteGroup>>,
    pub edges: BTreeMap<String, EdgeData>,
    pub flags: BTreeMap<(String, String), FlagData>,
}

impl StackyGKMGraph {
    pub fn vertex_group(&self, v: &str) -> &Arc<FiniteGroup> {
        &self.vertices[v]
    }

    pub fn edge(&self, e: &str) -> &EdgeData {
        &self.edges[e]
    }

    pub fn flag(&self, e: &str, v: &str) -> &FlagData {
        &self.flags[&(e.to_string(), v.to_string())]
    }

    /// Edge ids incident to a vertex, sorted.
    pub fn edges_at(&self, v: &str) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|(_, d)| d.has_end(v))
            .map(|(id, _)| id.as_str())
            .collect()
    }

    /// Flags at a vertex in sorted edge order.
    pub fn flags_at(&self, v: &str) -> Vec<(&str, &FlagData)> {
        self.edges_at(v).into_iter().map(|e| (e, self.flag(e, v))).collect()
    }

    pub fn compact_edge_ids(&self) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|(_, d)| d.is_compact())
            .map(|(id, _)| id.as_str())
            .collect()
    }

    fn compact_data(&self, e: &str) -> &CompactEdge {
        self.edges[e].compact.as_ref().expect("compact edge required")
    }

    pub fn alpha_ord(&self, e: &str) -> usize {
        self.edge(e).group.automorphism_order(&self.compact_data(e).alpha)
    }

    /// Applies the monodromy automorphism k times (negative k runs the
    /// inverse permutation).
    pub fn alpha_pow(&self, e: &str, k: i64, g: u16) -> u16 {
        let alpha = &self.compact_data(e).alpha;
        let ord = self.alpha_ord(e) as i64;
        let k = k.rem_euclid(ord);
        let mut x = g;
        for _ in 0..k {
            x = alpha[x as usize];
        }
        x
    }

    pub fn h_mul(&self, e: &str, a: HElement, b: HElement) -> HElement {
        let group = &self.edge(e).group;
        HElement::new(group.mul(a.g, self.alpha_pow(e, a.d, b.g)), a.d + b.d)
    }

    pub fn h_inv(&self, e: &str, a: HElement) -> HElement {
        let group = &self.edge(e).group;
        HElement::new(self.alpha_pow(e, -a.d, group.inv(a.g)), -a.d)
    }

    /// a b a^-1 in the split extension.
    pub fn h_conj(&self, e: &str, a: HElement, b: HElement) -> HElement {
        self.h_mul(e, self.h_mul(e, a, b), self.h_inv(e, a))
    }

    /// Conjugacy classes of degree-d elements, as their smallest
    /// representatives in increasing order.
    pub fn degree_d_classes(&self, e: &str, d: i64) -> Vec<HElement> {
        let n = self.edge(e).group.order();
        let mut seen = vec![false; n];
        let mut reps = Vec::new();
        for g in 0..n as u16 {
            if seen[g as usize] {
                continue;
            }
            reps.push(HElement::new(g, d));
            for x in self.h_class_orbit(e, HElement::new(g, d)) {
                seen[x as usize] = true;
            }
        }
        reps
    }

    fn h_class_orbit(&self, e: &str, gamma: HElement) -> BTreeSet<u16> {
        let group = &self.edge(e).group;
        let ord = self.alpha_ord(e) as i64;
        let mut orbit = BTreeSet::new();
        for h in 0..group.order() as u16 {
            for k in 0..ord {
                let conj = self.h_conj(e, HElement::new(h, k), gamma);
                debug_assert_eq!(conj.d, gamma.d);
                orbit.insert(conj.g);
            }
        }
        orbit
    }

    /// Smallest conjugate of gamma within its degree layer.
    pub fn h_class_canonical(&self, e: &str, gamma: HElement) -> HElement {
        let g = *self.h_class_orbit(e, gamma).iter().next().unwrap();
        HElement::new(g, gamma.d)
    }

    /// Order of the deck group of the degree-d orbifold cover of the edge
    /// determined by gamma: the centralizer of gamma modulo the cyclic group
    /// gamma generates.
    pub fn aut_fe_order(&self, e: &str, gamma: HElement) -> u64 {
        assert!(gamma.d >= 1, "cover degree must be positive");
        let group = &self.edge(e).group;
        let d = gamma.d;
        let g = gamma.g;
        let c0 = (0..group.order() as u16)
            .filter(|&h| group.mul(h, g) == group.mul(g, self.alpha_pow(e, d, h)))
            .count() as u64;
        let centralizes_at = |c: i64| {
            (0..group.order() as u16)
                .any(|h| group.mul(h, self.alpha_pow(e, c, g)) == group.mul(g, self.alpha_pow(e, d, h)))
        };
        let c = (1..=d).find(|c| d % c == 0 && centralizes_at(*c)).expect("gamma centralizes itself");
        c0 * (d as u64) / (c as u64)
    }

    /// Image of gamma = (g, d) in the vertex group at the given end:
    /// j(g) * t^d.
    pub fn project_flag(&self, e: &str, v: &str, gamma: HElement) -> u16 {
        let data = self.compact_data(e);
        let t = if self.edge(e).x == v {
            data.t_x
        } else {
            assert_eq!(data.y, v, "vertex is not an end of the edge");
            data.t_y
        };
        let flag = self.flag(e, v);
        let gv = self.vertex_group(v);
        gv.mul(flag.j.apply(gamma.g), gv.pow(t, gamma.d))
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Checks every axiom; an empty list means the graph is valid. Structural
    /// defects (dangling ids, size mismatches) are reported alone since the
    /// remaining checks assume a well-formed graph.
    pub fn validate(&self) -> Vec<Violation> {
        let structural = self.validate_structure();
        if !structural.is_empty() {
            return structural;
        }
        let mut out = Vec::new();
        self.check_valence_and_connectivity(&mut out);
        self.check_flags(&mut out);
        self.check_edges(&mut out);
        out
    }

    fn validate_structure(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut expected_flags: BTreeSet<(String, String)> = BTreeSet::new();
        for (id, edge) in &self.edges {
            for end in [Some(edge.x.as_str()), edge.y()].into_iter().flatten() {
                if !self.vertices.contains_key(end) {
                    out.push(Violation::new("dangling-id", format!("edge {}", id), format!("vertex {}", end)));
                } else {
                    expected_flags.insert((id.clone(), end.to_string()));
                }
            }
            if let Some(c) = &edge.compact {
                if c.y == edge.x {
                    out.push(Violation::new("self-loop", format!("edge {}", id), "both ends coincide"));
                }
                if c.alpha.len() != edge.group.order() {
                    out.push(Violation::new("edge-structure", format!("edge {}", id), "monodromy size mismatch"));
                }
                if c.d_eps == 0 {
                    out.push(Violation::new("edge-structure", format!("edge {}", id), "degree marker must be positive"));
                }
                for (end, t) in [(edge.x.as_str(), c.t_x), (c.y.as_str(), c.t_y)] {
                    if let Some(gv) = self.vertices.get(end) {
                        if t as usize >= gv.order() {
                            out.push(Violation::new("edge-structure", format!("edge {}", id), format!("lift {} out of range at {}", t, end)));
                        }
                    }
                }
                for pair in &c.normals {
                    for other in [&pair.at_x, &pair.at_y] {
                        if !self.edges.contains_key(other) {
                            out.push(Violation::new("dangling-id", format!("edge {}", id), format!("normal edge {}", other)));
                        }
                    }
                }
            }
        }
        let actual_flags: BTreeSet<(String, String)> = self.flags.keys().cloned().collect();
        for missing in expected_flags.difference(&actual_flags) {
            out.push(Violation::new("flag-coverage", format!("flag ({},{})", missing.0, missing.1), "missing"));
        }
        for extra in actual_flags.difference(&expected_flags) {
            out.push(Violation::new("flag-coverage", format!("flag ({},{})", extra.0, extra.1), "no incident edge end"));
        }
        for ((e, v), flag) in &self.flags {
            let loc = format!("flag ({},{})", e, v);
            if flag.weight.rank() != self.m {
                out.push(Violation::new("torus-rank", loc.clone(), format!("weight has {} entries, torus rank is {}", flag.weight.rank(), self.m)));
            }
            if let (Some(gv), Some(edge)) = (self.vertices.get(v), self.edges.get(e)) {
                if flag.phi.domain_order() != gv.order() {
                    out.push(Violation::new("flag-structure", loc.clone(), "character size mismatch"));
                }
                if flag.j.map_slice().len() != edge.group.order()
                    || flag.j.map_slice().iter().any(|&x| x as usize >= gv.order())
                {
                    out.push(Violation::new("flag-structure", loc, "embedding size mismatch"));
                }
            }
        }
        out
    }

    fn check_valence_and_connectivity(&self, out: &mut Vec<Violation>) {
        for v in self.vertices.keys() {
            let deg = self.edges_at(v).len();
            if deg != self.r {
                out.push(Violation::new("valence", format!("vertex {}", v), format!("{} incident edges, expected {}", deg, self.r)));
            }
        }
        let mut reached: BTreeSet<&str> = BTreeSet::new();
        if let Some(start) = self.vertices.keys().next() {
            let mut stack = vec![start.as_str()];
            reached.insert(start);
            while let Some(v) = stack.pop() {
                for e in self.edges_at(v) {
                    if let Some(w) = self.edge(e).other_end(v) {
                        if reached.insert(w) {
                            stack.push(w);
                        }
                    }
                }
            }
        }
        if reached.len() != self.vertices.len() {
            out.push(Violation::new("connectivity", "graph", format!("{} of {} vertices reachable", reached.len(), self.vertices.len())));
        }
    }

    fn check_flags(&self, out: &mut Vec<Violation>) {
        for (v, _) in &self.vertices {
            let flags = self.flags_at(v);
            for i in 0..flags.len() {
                if flags[i].1.weight.is_zero() {
                    out.push(Violation::new("gkm-independence", format!("vertex {}", v), format!("edge {} has zero weight", flags[i].0)));
                }
                for jdx in (i + 1)..flags.len() {
                    if flags[i].1.weight.dependent_with(&flags[jdx].1.weight) {
                        out.push(Violation::new(
                            "gkm-independence",
                            format!("vertex {}", v),
                            format!("edges {} and {} have dependent weights {} and {}", flags[i].0, flags[jdx].0, flags[i].1.weight, flags[jdx].1.weight),
                        ));
                    }
                }
            }
        }
        for ((e, v), flag) in &self.flags {
            let loc = format!("flag ({},{})", e, v);
            if !flag.j.injective() {
                out.push(Violation::new("flag-injectivity", loc.clone(), "edge group does not embed"));
            }
            if flag.j.image() != flag.phi.kernel() {
                out.push(Violation::new("flag-kernel", loc.clone(), format!("image {:?} differs from character kernel {:?}", flag.j.image(), flag.phi.kernel())));
            }
            if flag.r != flag.phi.order() {
                out.push(Violation::new("flag-order", loc.clone(), format!("stored order {} but character has order {}", flag.r, flag.phi.order())));
            }
            if !flag.weight.integral_times(flag.r) {
                out.push(Violation::new("flag-integrality", loc, format!("{} times {} is not integral", flag.r, flag.weight)));
            }
        }
    }

    fn check_edges(&self, out: &mut Vec<Violation>) {
        for (id, edge) in &self.edges {
            let Some(c) = &edge.compact else { continue };
            let loc = format!("edge {}", id);
            let group = &edge.group;
            if group.automorphism_check(&c.alpha).is_err() {
                out.push(Violation::new("edge-monodromy", loc.clone(), "monodromy is not an automorphism"));
                continue;
            }
            let (x, y) = (edge.x.as_str(), c.y.as_str());
            let fx = self.flag(id, x);
            let fy = self.flag(id, y);
            // Balanced weights along the edge.
            let balance = fx.weight.scale(&rat_i(fx.r as i64)).add(&fy.weight.scale(&rat_i(fy.r as i64)));
            if !balance.is_zero() {
                out.push(Violation::new("edge-weight-balance", loc.clone(), format!("r_x w_x + r_y w_y = {}", balance)));
            }
            for (end, t, flag) in [(x, c.t_x, fx), (y, c.t_y, fy)] {
                let gv = self.vertex_group(end);
                let want = frac(&Rat::new(num::BigInt::one(), num::BigInt::from(flag.r)));
                if *flag.phi.value(t) != want {
                    out.push(Violation::new("lift-charge", loc.clone(), format!("character value {} at the lift over {}, expected {}", flag.phi.value(t), end, want)));
                }
                for g in 0..group.order() as u16 {
                    let lhs = gv.conj(t, flag.j.apply(g));
                    let rhs = flag.j.apply(c.alpha[g as usize]);
                    if lhs != rhs {
                        out.push(Violation::new("lift-conjugation", loc.clone(), format!("conjugation by the lift over {} does not realize the monodromy at edge element {}", end, g)));
                        break;
                    }
                }
                let mut gens: Vec<u16> = flag.j.image();
                gens.push(t);
                if gv.subgroup_closure(&gens).len() != gv.order() {
                    out.push(Violation::new("lift-generation", loc.clone(), format!("edge group and lift do not generate the vertex group at {}", end)));
                }
            }
            self.check_normals(id, edge, c, out);
        }
    }

    fn check_normals(&self, id: &str, edge: &EdgeData, c: &CompactEdge, out: &mut Vec<Violation>) {
        let loc = format!("edge {}", id);
        let (x, y) = (edge.x.as_str(), c.y.as_str());
        let fx = self.flag(id, x);
        let fy = self.flag(id, y);
        let others_x: BTreeSet<&str> = self.edges_at(x).into_iter().filter(|e| *e != id).collect();
        let others_y: BTreeSet<&str> = self.edges_at(y).into_iter().filter(|e| *e != id).collect();
        let listed_x: Vec<&str> = c.normals.iter().map(|p| p.at_x.as_str()).collect();
        let listed_y: Vec<&str> = c.normals.iter().map(|p| p.at_y.as_str()).collect();
        let set_x: BTreeSet<&str> = listed_x.iter().copied().collect();
        let set_y: BTreeSet<&str> = listed_y.iter().copied().collect();
        if set_x != others_x || set_y != others_y || listed_x.len() != set_x.len() || listed_y.len() != set_y.len() {
            out.push(Violation::new("normal-pairing", loc, "normal pairs do not match the other incident edges exactly once each"));
            return;
        }
        let a_eps = num::integer::gcd(fx.r, fy.r);
        for pair in &c.normals {
            let ploc = format!("edge {} normal ({} -> {})", id, pair.at_x, pair.at_y);
            let nx = self.flag(&pair.at_x, x);
            let ny = self.flag(&pair.at_y, y);
            // Weight transport along the edge.
            let transported = nx.weight.sub(&fx.weight.scale(&(pair.a.clone() * rat_i(fx.r as i64))));
            if transported != ny.weight {
                out.push(Violation::new("normal-weight-relation", ploc.clone(), format!("transported weight {} differs from {}", transported, ny.weight)));
            }
            // a_i r_x r_y d_eps / gcd(r_x, r_y) must be an integer.
            let di = pair.a.clone() * rat_i((fx.r * fy.r) as i64) * rat_i(c.d_eps as i64) / rat_i(a_eps as i64);
            if !di.is_integer() {
                out.push(Violation::new("normal-degree-integrality", ploc.clone(), format!("normal degree {} is not integral", di)));
            }
            // The edge group acts on a normal line by the same character seen
            // from either end.
            for g in 0..edge.group.order() as u16 {
                if nx.phi.value(fx.j.apply(g)) != ny.phi.value(fy.j.apply(g)) {
                    out.push(Violation::new("normal-character-match", ploc.clone(), format!("edge element {} acts with different characters at the two ends", g)));
                    break;
                }
            }
            // Lift charges on a normal line balance against its degree.
            let got = frac(&(nx.phi.value(c.t_x).clone() + ny.phi.value(c.t_y)));
            if got != frac(&pair.a) {
                out.push(Violation::new("normal-age-balance", ploc, format!("lift charges sum to {}, degree demands {}", got, frac(&pair.a))));
            }
        }
    }
}
