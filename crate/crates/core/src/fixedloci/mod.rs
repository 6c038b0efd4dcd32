//! Enumeration of the decorated graphs indexing torus-fixed loci in the
//! moduli of twisted stable maps to a stacky GKM target: vertex and edge
//! decorations, graph automorphisms, and the rational prefactor of each
//! term of the graph sum.

use crate::gkm::{EffClass, HElement, StackyGKMGraph};
use crate::groups::GroupError;
use crate::qfield::{rat_i, Rat};
use num::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;


/// Allowed (vertex label, conjugacy class) pairs for one marking.
pub type SectorSet = BTreeSet<(String, usize)>;

#[derive(Debug, Error)]
pub enum FixedLociError {
    #[error("no stable map exists: {0}")]
    Unstable(String),
    #[error("degree class touches `{0}`, which is not a compact edge")]
    BadDegree(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A vertex of a decorated graph: its label in the target graph, a genus,
/// and the markings it carries with their monodromy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecVertex {
    pub sigma: String,
    pub genus: usize,
    /// Sorted zero-based marking indices.
    pub markings: Vec<usize>,
    /// Conjugacy classes in the vertex group, parallel to `markings`.
    pub classes: Vec<usize>,
}

/// An edge of a decorated graph: a compact target edge and a degree class.
/// The `x`/`y` vertex indices sit over the corresponding target ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecEdge {
    pub eps: String,
    pub x: usize,
    pub y: usize,
    pub gamma: HElement,
}

/// Stability type of a decorated vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexKind {
    Stable,
    OneFlag,
    TwoFlags,
    OneFlagOneMarking,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedGraph {
    pub vertices: Vec<DecVertex>,
    pub edges: Vec<DecEdge>,
}

impl DecoratedGraph {
    /// Incident flags of a vertex as (edge index, vertex is the x end).
    pub fn flags_of(&self, v: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.x == v {
                out.push((i, true));
            }
            if e.y == v {
                out.push((i, false));
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.flags_of(v).len()
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        let vx = &self.vertices[v];
        let val = self.valence(v);
        let n = vx.markings.len();
        if vx.genus == 0 && val + n <= 2 {
            match (val, n) {
                (1, 0) => VertexKind::OneFlag,
                (2, 0) => VertexKind::TwoFlags,
                (1, 1) => VertexKind::OneFlagOneMarking,
                _ => VertexKind::Stable,
            }
        } else {
            VertexKind::Stable
        }
    }

    /// The group element the edge cover's deck generator projects to at one
    /// end of the edge.
    pub fn flag_element(&self, target: &StackyGKMGraph, ei: usize, at_x: bool) -> u16 {
        let e = &self.edges[ei];
        let end = if at_x { &self.vertices[e.x].sigma } else { &self.vertices[e.y].sigma };
        target.project_flag(&e.eps, end, e.gamma)
    }

    /// First Betti number plus the vertex genera.
    pub fn graph_genus(&self) -> usize {
        let b1 = self.edges.len() + self.components() - self.vertices.len();
        b1 + self.vertices.iter().map(|v| v.genus).sum::<usize>()
    }

    pub fn graph_degree(&self) -> EffClass {
        let mut map: BTreeMap<String, u64> = BTreeMap::new();
        for e in &self.edges {
            *map.entry(e.eps.clone()).or_insert(0) += e.gamma.d as u64;
        }
        EffClass(map)
    }

    fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut Vec<usize>, mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        for e in &self.edges {
            let (ra, rb) = (find(&mut parent, e.x), find(&mut parent, e.y));
            parent[ra] = rb;
        }
        (0..self.vertices.len()).filter(|&v| find(&mut parent, v) == v).count()
    }

    fn vertex_key(&self, v: usize) -> String {
        let vx = &self.vertices[v];
        let marks: Vec<String> = vx
            .markings
            .iter()
            .zip(&vx.classes)
            .map(|(m, c)| format!("{}:{}", m, c))
            .collect();
        format!("{}~g{}~[{}]", vx.sigma, vx.genus, marks.join(","))
    }

    /// Canonical certificate: lexicographically minimal edge listing over
    /// all vertex relabelings that preserve the vertex decorations.
    pub fn certificate(&self) -> String {
        let keys: Vec<String> = (0..self.vertices.len()).map(|v| self.vertex_key(v)).collect();
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let header: Vec<&str> = order.iter().map(|&v| keys[v].as_str()).collect();
        let mut best: Option<String> = None;
        for_each_relabeling(&keys, &order, &mut |pos| {
            let mut lines: Vec<String> = self
                .edges
                .iter()
                .map(|e| format!("{}~{}~{}~{}~{}", pos[e.x], pos[e.y], e.eps, e.gamma.g, e.gamma.d))
                .collect();
            lines.sort();
            let cand = lines.join("|");
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        });
        format!("{} // {}", header.join(";"), best.unwrap_or_default())
    }

    /// Order of the decoration-preserving automorphism group, including
    /// swaps of identically decorated parallel edges.
    pub fn aut_order(&self) -> u64 {
        let keys: Vec<String> = (0..self.vertices.len()).map(|v| self.vertex_key(v)).collect();
        let order: Vec<usize> = {
            let mut o: Vec<usize> = (0..self.vertices.len()).collect();
            o.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
            o
        };
        let edge_multiset = |pos: &[usize]| {
            let mut m: Vec<(usize, usize, &str, u16, i64)> = self
                .edges
                .iter()
                .map(|e| (pos[e.x], pos[e.y], e.eps.as_str(), e.gamma.g, e.gamma.d))
                .collect();
            m.sort();
            m
        };
        let identity: Vec<usize> = {
            let mut pos = vec![0; self.vertices.len()];
            for (p, &v) in order.iter().enumerate() {
                pos[v] = p;
            }
            pos
        };
        let reference = edge_multiset(&identity);
        let mut vertex_perms = 0u64;
        for_each_relabeling(&keys, &order, &mut |pos| {
            if edge_multiset(pos) == reference {
                vertex_perms += 1;
            }
        });
        let mut parallel = 1u64;
        let mut counts: BTreeMap<(usize, usize, &str, u16, i64), u64> = BTreeMap::new();
        for item in &reference {
            *counts.entry(*item).or_insert(0) += 1;
        }
        for m in counts.values() {
            for k in 2..=*m {
                parallel *= k;
            }
        }
        vertex_perms * parallel
    }
}

/// Visit every position map that sends vertices to slots `0..n`, permuting
/// only within runs of equal keys in `order`.
fn for_each_relabeling(keys: &[String], order: &[usize], visit: &mut impl FnMut(&[usize])) {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &v in order {
        let same = groups.last().is_some_and(|g| keys[g[0]] == keys[v]);
        if same {
            groups.last_mut().unwrap().push(v);
        } else {
            groups.push(vec![v]);
        }
    }
    let slots: Vec<Vec<usize>> = {
        let mut start = 0;
        groups
            .iter()
            .map(|g| {
                let s: Vec<usize> = (start..start + g.len()).collect();
                start += g.len();
                s
            })
            .collect()
    };
    let mut pos = vec![0usize; keys.len()];
    fn rec(
        groups: &[Vec<usize>],
        slots: &[Vec<usize>],
        gi: usize,
        pos: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if gi == groups.len() {
            visit(pos);
            return;
        }
        permute(&groups[gi], &mut |perm| {
            for (k, &v) in perm.iter().enumerate() {
                pos[v] = slots[gi][k];
            }
            rec(groups, slots, gi + 1, pos, visit);
        });
    }
    rec(&groups, &slots, 0, &mut pos, visit);
}

fn permute(items: &[usize], visit: &mut impl FnMut(&[usize])) {
    let mut v = items.to_vec();
    fn heap(v: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            visit(v);
            return;
        }
        for i in 0..k {
            heap(v, k - 1, visit);
            if k % 2 == 0 {
                v.swap(i, k - 1);
            } else {
                v.swap(0, k - 1);
            }
        }
    }
    let len = v.len();
    heap(&mut v, len, visit);
}

impl fmt::Display for DecoratedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| {
                let marks: Vec<String> = v
                    .markings
                    .iter()
                    .zip(&v.classes)
                    .map(|(m, c)| format!("{}@{}", m + 1, c))
                    .collect();
                if marks.is_empty() {
                    format!("({},g{})", v.sigma, v.genus)
                } else {
                    format!("({},g{},{})", v.sigma, v.genus, marks.join(","))
                }
            })
            .collect();
        let es: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{}[{}]{}~{}", e.eps, e.gamma, e.x, e.y))
            .collect();
        write!(f, "{} ; {}", vs.join(" "), es.join(" "))
    }
}

/// The monodromy class list admissibility tests at one vertex: inverse
/// classes of the incident edge flags, then the marking classes.
pub fn vertex_class_list(
    graph: &DecoratedGraph,
    target: &StackyGKMGraph,
    v: usize,
) -> Vec<usize> {
    let group = target.vertex_group(&graph.vertices[v].sigma);
    let mut classes = Vec::new();
    for (ei, at_x) in graph.flags_of(v) {
        let k = graph.flag_element(target, ei, at_x);
        classes.push(group.inverse_class(group.class_of(k)));
    }
    classes.extend(graph.vertices[v].classes.iter().copied());
    classes
}

fn admissible(graph: &DecoratedGraph, target: &StackyGKMGraph, v: usize) -> bool {
    let group = target.vertex_group(&graph.vertices[v].sigma);
    let classes = vertex_class_list(graph, target, v);
    !group.count_covers(graph.vertices[v].genus, &classes).is_zero()
}

/// The combinatorial prefactor of one graph: automorphisms of the graph and
/// of the edge covers in the denominator, centralizer-to-order ratios of the
/// projected flag elements in the numerator.
pub fn c_gamma(graph: &DecoratedGraph, target: &StackyGKMGraph) -> Rat {
    let mut c = Rat::one() / rat_i(graph.aut_order() as i64);
    for e in &graph.edges {
        c /= rat_i(target.aut_fe_order(&e.eps, e.gamma) as i64);
    }
    for (v, _) in graph.vertices.iter().enumerate() {
        let group = target.vertex_group(&graph.vertices[v].sigma);
        for (ei, at_x) in graph.flags_of(v) {
            let k = graph.flag_element(target, ei, at_x);
            c *= rat_i(group.centralizer_order(k) as i64)
                / rat_i(group.element_order(k) as i64);
        }
    }
    c
}

/// All multisets of degree classes on one target edge with total degree
/// `total`, as non-increasing sequences of (degree, class) items.
fn edge_multisets(target: &StackyGKMGraph, eps: &str, total: i64) -> Vec<Vec<HElement>> {
    let mut items: Vec<HElement> = Vec::new();
    for d in 1..=total {
        items.extend(target.degree_d_classes(eps, d));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        items: &[HElement],
        first: usize,
        left: i64,
        current: &mut Vec<HElement>,
        out: &mut Vec<Vec<HElement>>,
    ) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for i in first..items.len() {
            if items[i].d > left {
                continue;
            }
            current.push(items[i]);
            rec(items, i, left - items[i].d, current, out);
            current.pop();
        }
    }
    rec(&items, 0, total, &mut current, &mut out);
    out
}

/// Restricted growth strings: all set partitions of `0..k` as block
/// assignment vectors.
fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut a = vec![0usize; k];
    fn rec(a: &mut Vec<usize>, i: usize, maxu: usize, out: &mut Vec<Vec<usize>>) {
        if i == a.len() {
            out.push(a.clone());
            return;
        }
        for b in 0..=maxu + 1 {
            a[i] = b;
            rec(a, i + 1, maxu.max(b), out);
        }
    }
    rec(&mut a, 1, 0, &mut out);
    out
}

pub(crate) fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; parts];
    fn rec(cur: &mut Vec<usize>, i: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(cur, i + 1, left - v, out);
        }
    }
    if parts == 0 {
        if total == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(&mut cur, 0, total, &mut out);
    out
}

/// Complete, duplicate-free list of decorated graphs with the given genus,
/// markings, and degree. `allowed` optionally restricts each marking to a
/// set of (vertex label, class) sectors. Output is sorted by certificate.
pub fn enumerate(
    target: &StackyGKMGraph,
    genus: usize,
    n: usize,
    beta: &EffClass,
    allowed: Option<&[SectorSet]>,
) -> Result<Vec<DecoratedGraph>, FixedLociError> {
    if let Some(a) = allowed {
        assert_eq!(a.len(), n, "one sector set per marking");
    }
    let marking_ok = |sigma: &str, j: usize, class: usize| match allowed {
        None => true,
        Some(sets) => sets[j].contains(&(sigma.to_string(), class)),
    };

    if beta.is_zero() {
        if 2 * genus + n <= 2 {
            return Err(FixedLociError::Unstable(format!(
                "degree zero with g={} and n={}",
                genus, n
            )));
        }
        let mut out = Vec::new();
        for (sigma, group) in &target.vertices {
            let nc = group.conjugacy_classes().len();
            let mut tuple = vec![0usize; n];
            'outer: loop {
                if (0..n).all(|j| marking_ok(sigma, j, tuple[j]))
                    && !group.count_covers(genus, &tuple).is_zero()
                {
                    out.push(DecoratedGraph {
                        vertices: vec![DecVertex {
                            sigma: sigma.clone(),
                            genus,
                            markings: (0..n).collect(),
                            classes: tuple.clone(),
                        }],
                        edges: vec![],
                    });
                }
                for j in (0..n).rev() {
                    tuple[j] += 1;
                    if tuple[j] < nc {
                        continue 'outer;
                    }
                    tuple[j] = 0;
                }
                break;
            }
        }
        return Ok(out);
    }

    let mut eps_choices: Vec<(String, Vec<Vec<HElement>>)> = Vec::new();
    for (eps, &d) in &beta.0 {
        if d == 0 {
            continue;
        }
        if !target.edges.contains_key(eps) || !target.edge(eps).is_compact() {
            return Err(FixedLociError::BadDegree(eps.clone()));
        }
        eps_choices.push((eps.clone(), edge_multisets(target, eps, d as i64)));
    }

    let mut found: BTreeMap<String, DecoratedGraph> = BTreeMap::new();
    let mut choice = vec![0usize; eps_choices.len()];
    'edge_sets: loop {
        let mut edge_list: Vec<(String, HElement)> = Vec::new();
        for (i, (eps, sets)) in eps_choices.iter().enumerate() {
            for h in &sets[choice[i]] {
                edge_list.push((eps.clone(), *h));
            }
        }
        assemble(target, genus, n, &edge_list, &marking_ok, &mut found);
        for i in (0..eps_choices.len()).rev() {
            choice[i] += 1;
            if choice[i] < eps_choices[i].1.len() {
                continue 'edge_sets;
            }
            choice[i] = 0;
        }
        break;
    }
    Ok(found.into_values().collect())
}

/// Expand one fixed edge multiset into decorated graphs: partition the edge
/// ends over each target vertex, distribute leftover genus and markings,
/// filter by connectivity and admissibility, and record canonical forms.
fn assemble(
    target: &StackyGKMGraph,
    genus: usize,
    n: usize,
    edge_list: &[(String, HElement)],
    marking_ok: &impl Fn(&str, usize, usize) -> bool,
    found: &mut BTreeMap<String, DecoratedGraph>,
) {
    // Ends grouped by target vertex, in sorted vertex order.
    let mut ends: BTreeMap<&str, Vec<(usize, bool)>> = BTreeMap::new();
    for (i, (eps, _)) in edge_list.iter().enumerate() {
        let e = target.edge(eps);
        ends.entry(&e.x).or_default().push((i, true));
        ends.entry(e.y().expect("compact edge")).or_default().push((i, false));
    }
    let sigmas: Vec<&str> = ends.keys().copied().collect();
    let partition_sets: Vec<Vec<Vec<usize>>> =
        sigmas.iter().map(|s| set_partitions(ends[s].len())).collect();

    let mut pick = vec![0usize; sigmas.len()];
    'partitions: loop {
        // Vertex blocks in deterministic order across sorted sigmas.
        let mut vertices: Vec<DecVertex> = Vec::new();
        let mut edges: Vec<DecEdge> =
            edge_list.iter().map(|(eps, h)| DecEdge { eps: eps.clone(), x: 0, y: 0, gamma: *h }).collect();
        for (si, sigma) in sigmas.iter().enumerate() {
            let assignment = &partition_sets[si][pick[si]];
            let base = vertices.len();
            let blocks = assignment.iter().max().map_or(0, |&m| m + 1);
            for _ in 0..blocks {
                vertices.push(DecVertex {
                    sigma: sigma.to_string(),
                    genus: 0,
                    markings: vec![],
                    classes: vec![],
                });
            }
            for (t, &(ei, is_x)) in ends[*sigma].iter().enumerate() {
                let v = base + assignment[t];
                if is_x {
                    edges[ei].x = v;
                } else {
                    edges[ei].y = v;
                }
            }
        }
        let skeleton = DecoratedGraph { vertices, edges };
        if skeleton.components() == 1 {
            // Connectivity bounds the vertex count by edges + 1.
            let b1 = skeleton.edges.len() + 1 - skeleton.vertices.len();
            if b1 <= genus {
                distribute(target, genus - b1, n, &skeleton, marking_ok, found);
            }
        }
        for i in (0..pick.len()).rev() {
            pick[i] += 1;
            if pick[i] < partition_sets[i].len() {
                continue 'partitions;
            }
            pick[i] = 0;
        }
        break;
    }
}

/// Spread leftover genus over vertices and markings over (vertex, class)
/// slots, then admissibility-check and record.
fn distribute(
    target: &StackyGKMGraph,
    extra_genus: usize,
    n: usize,
    skeleton: &DecoratedGraph,
    marking_ok: &impl Fn(&str, usize, usize) -> bool,
    found: &mut BTreeMap<String, DecoratedGraph>,
) {
    let nv = skeleton.vertices.len();
    // Per-marking options.
    let mut options: Vec<Vec<(usize, usize)>> = Vec::new();
    for j in 0..n {
        let mut opts = Vec::new();
        for (v, vx) in skeleton.vertices.iter().enumerate() {
            let nc = target.vertex_group(&vx.sigma).conjugacy_classes().len();
            for c in 0..nc {
                if marking_ok(&vx.sigma, j, c) {
                    opts.push((v, c));
                }
            }
        }
        if opts.is_empty() {
            return;
        }
        options.push(opts);
    }

    for genera in weak_compositions(extra_genus, nv) {
        let mut pick = vec![0usize; n];
        'marks: loop {
            let mut graph = skeleton.clone();
            for (v, g) in genera.iter().enumerate() {
                graph.vertices[v].genus = *g;
            }
            for j in 0..n {
                let (v, c) = options[j][pick[j]];
                graph.vertices[v].markings.push(j);
                graph.vertices[v].classes.push(c);
            }
            if (0..nv).all(|v| admissible(&graph, target, v)) {
                let cert = graph.certificate();
                found.entry(cert).or_insert(graph);
            }
            for j in (0..n).rev() {
                pick[j] += 1;
                if pick[j] < options[j].len() {
                    continue 'marks;
                }
                pick[j] = 0;
            }
            break;
        }
    }
}
