//! Virtual localization over the decorated-graph fixed loci: tangent and
//! obstruction weights of edge covers and vertex moduli, the per-graph
//! contribution with its audit trace, and the graph sum computing exact
//! equivariant orbifold invariants, symbolically or at sampled points.

use crate::crcoh::{self, EqCRClass, InertiaIndex};
use crate::fixedloci::{
    self, weak_compositions, DecoratedGraph, FixedLociError, SectorSet, VertexKind,
};
use crate::gkm::{EffClass, StackyGKMGraph};
use crate::groups::{Character, FiniteGroup, GroupError};
use crate::psihodge::{psi_mgn, BGIntegralRequest, HodgeTable, LambdaFactor, PsiError};
use crate::qfield::{rat_i, Rat, RatFunc};
use num::{BigInt, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;


#[derive(Debug, Error)]
pub enum LocalizeError {
    #[error(transparent)]
    FixedLoci(#[from] FixedLociError),
    #[error(transparent)]
    Psi(#[from] PsiError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("degenerate weight: {0}")]
    DegenerateWeight(String),
    #[error("sample point hits a pole: {0}")]
    Pole(String),
    #[error("bad query: {0}")]
    BadQuery(String),
}

impl LocalizeError {
    /// Pole errors come from an unlucky sample point and go away on resampling.
    fn is_retryable(&self) -> bool {
        matches!(self, LocalizeError::Pole(_))
    }
}

/// One insertion of a query: a psi-class power and an equivariant class.
#[derive(Debug, Clone)]
pub struct Insertion {
    pub psi: usize,
    pub class: EqCRClass,
}

/// A single invariant to compute: genus, degree class, and insertions.
#[derive(Debug, Clone)]
pub struct InvariantQuery {
    pub genus: usize,
    pub degree: EffClass,
    pub insertions: Vec<Insertion>,
}

/// Engine switches. The two booleans select conventions that the literature
/// leaves to the reader; the defaults are pinned by the degree-zero pairing
/// checks and must not change silently.
///
/// Values in `table` are full normalized integrals over the component named
/// by the request key, including the covering-count normalization, so the
/// engine multiplies them only by weight and sign data.
#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Multiply each marking by the order of its monodromy class.
    pub weighted_markings: bool,
    /// Read insertion coefficients at the inverse of the marking class.
    pub pair_inverse: bool,
    /// Lookup table for integrals with nontrivial dual-bundle factors.
    pub table: Option<HodgeTable>,
    /// Seed for evaluation-mode sample points.
    pub seed: u64,
    /// Resampling budget before a persistent pole is reported.
    pub max_attempts: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            weighted_markings: false,
            pair_inverse: false,
            table: None,
            seed: 17,
            max_attempts: 64,
        }
    }
}

/// One graph's term of the localization sum, with its factored audit trail.
/// The product of the trace entries equals `value`.
#[derive(Debug, Clone)]
pub struct GraphContribution {
    pub graph: DecoratedGraph,
    pub value: RatFunc,
    pub trace: Vec<(String, RatFunc)>,
}

/// Symbolic result of a query.
#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub value: RatFunc,
    pub graphs: usize,
    pub vdim: Option<Rat>,
    /// Set when the value is independent of the torus variables.
    pub constant: Option<Rat>,
}

/// Evaluation-mode result of a query: the graph sum at one sample point.
#[derive(Debug, Clone)]
pub struct EvalReport {
    pub value: Rat,
    pub graphs: usize,
    pub point: Vec<Rat>,
    pub attempts: u32,
}

/// Degree-fiber decomposition of a query's value.
#[derive(Debug, Clone)]
pub struct PushforwardReport {
    pub total: RatFunc,
    pub per_class: Vec<(EffClass, RatFunc)>,
}

/// A value in either computation mode. Symbolic values are rational
/// functions; evaluated values are rationals at a fixed sample point. The
/// mode is fixed per computation by `Ctx` and never mixes.
#[derive(Debug, Clone)]
enum Val {
    Sym(RatFunc),
    Num(Rat),
}

#[derive(Clone, Copy)]
struct Ctx<'a> {
    nvars: usize,
    point: Option<&'a [Rat]>,
}

fn rat_pow(x: &Rat, e: i64) -> Result<Rat, LocalizeError> {
    if e == 0 {
        return Ok(Rat::one());
    }
    if x.is_zero() {
        if e < 0 {
            return Err(LocalizeError::Pole("zero weight under inversion".into()));
        }
        return Ok(Rat::zero());
    }
    let mut p = Rat::one();
    for _ in 0..e.unsigned_abs() {
        p *= x;
    }
    if e < 0 {
        p = Rat::one() / p;
    }
    Ok(p)
}

impl Val {
    fn one(ctx: Ctx<'_>) -> Val {
        match ctx.point {
            None => Val::Sym(RatFunc::one(ctx.nvars)),
            Some(_) => Val::Num(Rat::one()),
        }
    }

    fn zero(ctx: Ctx<'_>) -> Val {
        match ctx.point {
            None => Val::Sym(RatFunc::zero(ctx.nvars)),
            Some(_) => Val::Num(Rat::zero()),
        }
    }

    fn lift(f: &RatFunc, ctx: Ctx<'_>) -> Result<Val, LocalizeError> {
        match ctx.point {
            None => Ok(Val::Sym(f.clone())),
            Some(pt) => match f.eval(pt) {
                Ok(v) => Ok(Val::Num(v)),
                Err(_) => Err(LocalizeError::Pole("denominator vanishes at the point".into())),
            },
        }
    }

    fn from_rat(c: &Rat, ctx: Ctx<'_>) -> Val {
        match ctx.point {
            None => Val::Sym(RatFunc::from_rat(ctx.nvars, c.clone())),
            Some(_) => Val::Num(c.clone()),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Val::Sym(f) => f.is_zero(),
            Val::Num(r) => r.is_zero(),
        }
    }

    fn add(&self, o: &Val) -> Val {
        match (self, o) {
            (Val::Sym(a), Val::Sym(b)) => Val::Sym(a.add(b)),
            (Val::Num(a), Val::Num(b)) => Val::Num(a + b),
            _ => unreachable!("mixed value modes"),
        }
    }

    fn mul(&self, o: &Val) -> Val {
        match (self, o) {
            (Val::Sym(a), Val::Sym(b)) => Val::Sym(a.mul(b)),
            (Val::Num(a), Val::Num(b)) => Val::Num(a * b),
            _ => unreachable!("mixed value modes"),
        }
    }

    fn neg(&self) -> Val {
        match self {
            Val::Sym(a) => Val::Sym(a.neg()),
            Val::Num(a) => Val::Num(-a),
        }
    }

    fn scale(&self, c: &Rat) -> Val {
        match self {
            Val::Sym(a) => Val::Sym(a.scale(c)),
            Val::Num(a) => Val::Num(a * c),
        }
    }

    fn powi(&self, e: i64) -> Result<Val, LocalizeError> {
        match self {
            Val::Sym(a) => a
                .pow(e)
                .map(Val::Sym)
                .map_err(|_| LocalizeError::DegenerateWeight("zero weight under inversion".into())),
            Val::Num(a) => rat_pow(a, e).map(Val::Num),
        }
    }

    fn div(&self, o: &Val) -> Result<Val, LocalizeError> {
        match (self, o) {
            (Val::Sym(a), Val::Sym(b)) => a
                .div(b)
                .map(Val::Sym)
                .map_err(|_| LocalizeError::DegenerateWeight("division by a zero weight".into())),
            (Val::Num(a), Val::Num(b)) => {
                if b.is_zero() {
                    Err(LocalizeError::Pole("division by zero at the point".into()))
                } else {
                    Ok(Val::Num(a / b))
                }
            }
            _ => unreachable!("mixed value modes"),
        }
    }

    fn into_ratfunc(self) -> RatFunc {
        match self {
            Val::Sym(f) => f,
            Val::Num(_) => unreachable!("numeric value where a symbolic one was requested"),
        }
    }
}

/// Tangent weight of the edge cover at one end: the flag weight rescaled by
/// the flag order over the end's stabilizer order times the degree.
pub fn flag_weight(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    ei: usize,
    at_x: bool,
) -> RatFunc {
    let e = &graph.edges[ei];
    let end = if at_x { e.x } else { e.y };
    let sigma = graph.vertices[end].sigma.as_str();
    let fd = target.flag(&e.eps, sigma);
    let k = graph.flag_element(target, ei, at_x);
    let rk = target.vertex_group(sigma).element_order(k) as i64;
    let c = rat_i(fd.r as i64) / (rat_i(rk) * rat_i(e.gamma.d));
    RatFunc::from_poly(fd.weight.to_poly()).scale(&c)
}

/// Product of the vertex tangent weights fixed by the flag's group element.
pub fn h_flag(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    ei: usize,
    at_x: bool,
) -> RatFunc {
    let e = &graph.edges[ei];
    let end = if at_x { e.x } else { e.y };
    let sigma = graph.vertices[end].sigma.as_str();
    let k = graph.flag_element(target, ei, at_x);
    let class = target.vertex_group(sigma).class_of(k);
    crcoh::e_class(target, sigma, class)
}

fn flag_weight_ctx(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    ei: usize,
    at_x: bool,
    ctx: Ctx<'_>,
) -> Result<Val, LocalizeError> {
    Val::lift(&flag_weight(target, graph, ei, at_x), ctx)
}

fn h_flag_ctx(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    ei: usize,
    at_x: bool,
    ctx: Ctx<'_>,
) -> Result<Val, LocalizeError> {
    Val::lift(&h_flag(target, graph, ei, at_x), ctx)
}

/// Moving-part contribution of one edge cover: the two tangent-space
/// factorials along the edge direction and one finite product per normal
/// direction, with the branch picked by the sign of the normal degree.
pub fn h_edge(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    ei: usize,
) -> Result<RatFunc, LocalizeError> {
    let ctx = Ctx { nvars: target.m, point: None };
    h_edge_ctx(target, graph, ei, ctx).map(Val::into_ratfunc)
}

fn h_edge_ctx(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    ei: usize,
    ctx: Ctx<'_>,
) -> Result<Val, LocalizeError> {
    let e = &graph.edges[ei];
    let sx = graph.vertices[e.x].sigma.as_str();
    let sy = graph.vertices[e.y].sigma.as_str();
    let fx = target.flag(&e.eps, sx);
    let fy = target.flag(&e.eps, sy);
    let d = e.gamma.d;

    // Weight on the canonical degree-one cover; u = r_x w_x = -r_y w_y.
    let u_poly = fx.weight.to_poly().scale(&rat_i(fx.r as i64));
    let u = Val::lift(&RatFunc::from_poly(u_poly.clone()), ctx)?;

    let ex = (d as u64 / fx.r as u64) as i64;
    let ey = (d as u64 / fy.r as u64) as i64;
    let mut head = rat_pow(&rat_i(d), ex)?;
    head *= rat_pow(&rat_i(-d), ey)?;
    let mut fact = Rat::one();
    for j in 1..=ex {
        fact *= rat_i(j);
    }
    for j in 1..=ey {
        fact *= rat_i(j);
    }
    let mut out = u.powi(-(ex + ey))?.scale(&(head / fact));

    let kx = graph.flag_element(target, ei, true);
    let normals = &target.edge(&e.eps).compact.as_ref().expect("compact edge").normals;
    for np in normals {
        let nf = target.flag(&np.at_x, sx);
        let alpha = nf.phi.value(kx).clone();
        let w_poly = nf.weight.to_poly();
        if np.a >= Rat::zero() {
            // Sections: invert each positive-part weight.
            let bound = (rat_i(d) * &np.a - &alpha).floor().to_integer().to_i64().unwrap();
            for j in 0..=bound {
                if j < 0 {
                    break;
                }
                let c = -(rat_i(j) + &alpha) / rat_i(d);
                let f = w_poly.add(&u_poly.scale(&c));
                if f.is_zero() {
                    return Err(LocalizeError::DegenerateWeight(format!(
                        "edge {} normal {} has a vanishing section weight",
                        e.eps, np.at_x
                    )));
                }
                out = out.div(&Val::lift(&RatFunc::from_poly(f), ctx)?)?;
            }
        } else {
            // Obstructions: multiply each negative-part weight.
            let cnt = (&alpha - rat_i(d) * &np.a - rat_i(1)).ceil().to_integer().to_i64().unwrap();
            for j in 1..=cnt {
                let c = (rat_i(j) - &alpha) / rat_i(d);
                let f = w_poly.add(&u_poly.scale(&c));
                if f.is_zero() {
                    return Err(LocalizeError::DegenerateWeight(format!(
                        "edge {} normal {} has a vanishing obstruction weight",
                        e.eps, np.at_x
                    )));
                }
                out = out.mul(&Val::lift(&RatFunc::from_poly(f), ctx)?);
            }
        }
    }
    Ok(out)
}

/// Insertion coefficient seen by a marking with monodromy class `cm` at the
/// target vertex `sigma`, after the configured sector reading.
fn marking_coeff(
    target: &StackyGKMGraph,
    sigma: &str,
    cm: usize,
    ins: &Insertion,
    config: &EngineConfig,
    ctx: Ctx<'_>,
) -> Result<Val, LocalizeError> {
    let group = target.vertex_group(sigma);
    let lookup = if config.pair_inverse { group.inverse_class(cm) } else { cm };
    let rf = ins.class.coeff(&InertiaIndex::new(sigma, lookup), target.m);
    Val::lift(&rf, ctx)
}

fn marking_class_order(group: &FiniteGroup, cm: usize) -> i64 {
    group.element_order(group.class_rep(cm)) as i64
}

/// Net factor of one vertex, unstable conventions and insertion data
/// included. For unstable kinds the reciprocal of the flag factor is folded
/// in here, so the global flag product stays uniform over all flags.
pub fn h_vertex(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    v: usize,
    query: &InvariantQuery,
    config: &EngineConfig,
) -> Result<RatFunc, LocalizeError> {
    let ctx = Ctx { nvars: target.m, point: None };
    vertex_value(target, graph, v, query, config, ctx).map(Val::into_ratfunc)
}

fn vertex_value(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    v: usize,
    query: &InvariantQuery,
    config: &EngineConfig,
    ctx: Ctx<'_>,
) -> Result<Val, LocalizeError> {
    let dec = &graph.vertices[v];
    let sigma = dec.sigma.as_str();
    let group = target.vertex_group(sigma).clone();
    let flags = graph.flags_of(v);
    match graph.kind(v) {
        VertexKind::OneFlag => {
            let (ei, at_x) = flags[0];
            debug_assert_eq!(group.class_of(graph.flag_element(target, ei, at_x)), 0);
            let w = flag_weight_ctx(target, graph, ei, at_x, ctx)?;
            let h = h_flag_ctx(target, graph, ei, at_x, ctx)?;
            Ok(w.div(&h)?.scale(&(Rat::one() / rat_i(group.order() as i64))))
        }
        VertexKind::TwoFlags => {
            let (e0, x0) = flags[0];
            let (e1, x1) = flags[1];
            let k = graph.flag_element(target, e0, x0);
            let r = group.element_order(k) as i64;
            let cent = group.class_centralizer_order(group.class_of(k)) as i64;
            let w0 = flag_weight_ctx(target, graph, e0, x0, ctx)?;
            let w1 = flag_weight_ctx(target, graph, e1, x1, ctx)?;
            let h = h_flag_ctx(target, graph, e0, x0, ctx)?;
            let denom = w0.add(&w1).mul(&h);
            Val::one(ctx).scale(&(rat_i(r) / rat_i(cent))).div(&denom)
        }
        VertexKind::OneFlagOneMarking => {
            let (ei, at_x) = flags[0];
            let cm = dec.classes[0];
            let ins = &query.insertions[dec.markings[0]];
            let k = graph.flag_element(target, ei, at_x);
            debug_assert_eq!(group.class_of(k), cm);
            let r = group.element_order(k) as i64;
            let cent = group.class_centralizer_order(group.class_of(k)) as i64;
            let mut coeff = marking_coeff(target, sigma, cm, ins, config, ctx)?;
            if coeff.is_zero() {
                return Ok(Val::zero(ctx));
            }
            if config.weighted_markings {
                coeff = coeff.scale(&rat_i(marking_class_order(&group, cm)));
            }
            let w = flag_weight_ctx(target, graph, ei, at_x, ctx)?;
            let h = h_flag_ctx(target, graph, ei, at_x, ctx)?;
            let a = ins.psi;
            let num = coeff
                .mul(&w.neg().powi(a as i64)?)
                .scale(&(rat_pow(&rat_i(r), 1 + a as i64)? / rat_i(cent)));
            num.div(&h)
        }
        VertexKind::Stable => stable_vertex(target, graph, v, query, config, ctx),
    }
}

/// Stable vertex integral: for each monodromy-subgroup component, expand the
/// dual bundle factors of every direction at the vertex, the psi series of
/// every flag to the moduli dimension, and integrate.
fn stable_vertex(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    v: usize,
    query: &InvariantQuery,
    config: &EngineConfig,
    ctx: Ctx<'_>,
) -> Result<Val, LocalizeError> {
    let dec = &graph.vertices[v];
    let sigma = dec.sigma.as_str();
    let group = target.vertex_group(sigma).clone();
    let g_v = dec.genus;
    let flags = graph.flags_of(v);
    let classes = fixedloci::vertex_class_list(graph, target, v);
    let dim = 3 * g_v + classes.len() - 3;

    // Insertion data carried by the markings.
    let mut pre = Val::one(ctx);
    let mut psi_marks: Vec<usize> = Vec::new();
    for (j, &mj) in dec.markings.iter().enumerate() {
        let cm = dec.classes[j];
        let ins = &query.insertions[mj];
        let coeff = marking_coeff(target, sigma, cm, ins, config, ctx)?;
        if coeff.is_zero() {
            return Ok(Val::zero(ctx));
        }
        pre = pre.mul(&coeff);
        if config.weighted_markings {
            pre = pre.scale(&rat_i(marking_class_order(&group, cm)));
        }
        psi_marks.push(ins.psi);
    }
    let sum_a: usize = psi_marks.iter().sum();

    // Cover tangent weights and stabilizer orders of the incident flags.
    let mut fw: Vec<Val> = Vec::new();
    let mut fr: Vec<i64> = Vec::new();
    for &(ei, at_x) in &flags {
        fw.push(flag_weight_ctx(target, graph, ei, at_x, ctx)?);
        fr.push(group.element_order(graph.flag_element(target, ei, at_x)) as i64);
    }

    let dirs = target.flags_at(sigma);
    let by_sub = group.count_covers_by_subgroup(g_v, &classes)?;
    let order = rat_i(group.order() as i64);

    let mut total = Val::zero(ctx);
    for (members, count) in &by_sub {
        let norm = Rat::from(BigInt::from(count.clone())) / &order;

        // Componentwise rank and kernel data per direction at sigma.
        let mut ranks: Vec<(bool, i64)> = Vec::new();
        for (_, fd) in &dirs {
            let in_ker = members.iter().all(|&x| fd.phi.value(x).is_zero());
            let rank = if in_ker {
                g_v as i64
            } else {
                let mut s = rat_i(g_v as i64 - 1);
                for &c in &classes {
                    s += fd.phi.value(group.class_rep(c));
                }
                debug_assert!(s.is_integer(), "non-integral character rank");
                s.to_integer().to_i64().unwrap()
            };
            ranks.push((in_ker, rank));
        }

        // Odometer over the dual-bundle expansion indices, one per direction.
        let cap = dim.saturating_sub(sum_a);
        let mut idx = vec![0i64; dirs.len()];
        'combos: loop {
            let l: i64 = idx.iter().sum();
            if l as usize <= cap {
                let budget = cap - l as usize;
                let mut wfac = Val::one(ctx);
                let mut parity = 0i64;
                let mut lam: BTreeMap<Vec<Rat>, (Character, Vec<usize>)> = BTreeMap::new();
                for (di, &(in_ker, rank)) in ranks.iter().enumerate() {
                    let i = idx[di];
                    parity += i;
                    let ex = rank - i - if in_ker { 1 } else { 0 };
                    if ex != 0 {
                        let wv = Val::lift(
                            &RatFunc::from_poly(dirs[di].1.weight.to_poly()),
                            ctx,
                        )?;
                        wfac = wfac.mul(&wv.powi(ex)?);
                    }
                    if i > 0 {
                        let phi = &dirs[di].1.phi;
                        let key: Vec<Rat> =
                            (0..group.order() as u16).map(|x| phi.value(x).clone()).collect();
                        let entry = lam
                            .entry(key)
                            .or_insert_with(|| (phi.clone(), Vec::new()));
                        let slot = i as usize - 1;
                        if entry.1.len() <= slot {
                            entry.1.resize(slot + 1, 0);
                        }
                        entry.1[slot] += 1;
                    }
                }

                for b in weak_compositions(budget, flags.len()) {
                    let mut exps = b.clone();
                    exps.extend(psi_marks.iter().copied());
                    let integral: Rat = if lam.is_empty() {
                        let base = psi_mgn(g_v, &exps);
                        if base.is_zero() {
                            continue;
                        }
                        base * &norm
                    } else {
                        let req = BGIntegralRequest {
                            group: group.clone(),
                            genus: g_v,
                            classes: classes.clone(),
                            subgroup: Some(members.clone()),
                            psi: exps.clone(),
                            lambda: lam.values().cloned().map(|(phi, powers)| LambdaFactor {
                                phi,
                                powers,
                            }).collect(),
                        };
                        let key = req.canonical_key();
                        match config.table.as_ref().and_then(|t| t.get(&key)) {
                            Some(val) => val.clone(),
                            None => {
                                return Err(LocalizeError::Psi(PsiError::UnsupportedIntegral(
                                    key,
                                )))
                            }
                        }
                    };
                    if integral.is_zero() {
                        continue;
                    }
                    let mut term = wfac.scale(&integral);
                    if parity % 2 != 0 {
                        term = term.neg();
                    }
                    for (fi, &be) in b.iter().enumerate() {
                        term = term.mul(&fw[fi].powi(-(be as i64 + 1))?);
                        if be > 0 {
                            term = term.scale(&(Rat::one() / rat_pow(&rat_i(fr[fi]), be as i64)?));
                        }
                    }
                    total = total.add(&term);
                }
            }
            // Advance the odometer, bounding each index by its rank.
            for di in (0..dirs.len()).rev() {
                idx[di] += 1;
                if idx[di] <= ranks[di].1 {
                    continue 'combos;
                }
                idx[di] = 0;
            }
            break;
        }
    }
    Ok(pre.mul(&total))
}

fn kind_str(kind: VertexKind) -> &'static str {
    match kind {
        VertexKind::Stable => "stable",
        VertexKind::OneFlag => "end",
        VertexKind::TwoFlags => "node",
        VertexKind::OneFlagOneMarking => "marked end",
    }
}

fn graph_value_inner(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    query: &InvariantQuery,
    config: &EngineConfig,
    ctx: Ctx<'_>,
    mut trace: Option<&mut Vec<(String, RatFunc)>>,
) -> Result<Val, LocalizeError> {
    let push = |label: String, val: &Val, trace: &mut Option<&mut Vec<(String, RatFunc)>>| {
        if let (Some(t), Val::Sym(rf)) = (trace.as_deref_mut(), val) {
            t.push((label, rf.clone()));
        }
    };

    let c = fixedloci::c_gamma(graph, target);
    let mut value = Val::from_rat(&c, ctx);
    push("prefactor".into(), &value, &mut trace);

    for (ei, e) in graph.edges.iter().enumerate() {
        let he = h_edge_ctx(target, graph, ei, ctx)?;
        push(format!("edge {} {} {}", ei, e.eps, e.gamma), &he, &mut trace);
        value = value.mul(&he);
    }
    for v in 0..graph.vertices.len() {
        for (ei, at_x) in graph.flags_of(v) {
            let hf = h_flag_ctx(target, graph, ei, at_x, ctx)?;
            push(
                format!("flag e{} at v{} ({})", ei, v, graph.vertices[v].sigma),
                &hf,
                &mut trace,
            );
            value = value.mul(&hf);
        }
    }
    for v in 0..graph.vertices.len() {
        let hv = vertex_value(target, graph, v, query, config, ctx)?;
        push(
            format!(
                "vertex v{} ({}, {})",
                v,
                graph.vertices[v].sigma,
                kind_str(graph.kind(v))
            ),
            &hv,
            &mut trace,
        );
        value = value.mul(&hv);
        if value.is_zero() {
            // A vanishing insertion coefficient kills the whole term.
            return Ok(value);
        }
    }
    Ok(value)
}

/// One graph's contribution with the audit trace of its factors.
pub fn contribution(
    target: &StackyGKMGraph,
    graph: &DecoratedGraph,
    query: &InvariantQuery,
    config: &EngineConfig,
) -> Result<GraphContribution, LocalizeError> {
    let ctx = Ctx { nvars: target.m, point: None };
    let mut trace = Vec::new();
    let _ = graph_value_inner(target, graph, query, config, ctx, Some(&mut trace))?;
    let mut value = RatFunc::one(target.m);
    for (_, f) in &trace {
        value = value.mul(f);
    }
    Ok(GraphContribution { graph: graph.clone(), value, trace })
}

fn validate_query(
    target: &StackyGKMGraph,
    query: &InvariantQuery,
) -> Result<(), LocalizeError> {
    for (eps, _) in &query.degree.0 {
        match target.edges.get(eps) {
            Some(e) if e.is_compact() => {}
            Some(_) => {
                return Err(LocalizeError::BadQuery(format!(
                    "degree on the non-compact edge `{}`",
                    eps
                )))
            }
            None => {
                return Err(LocalizeError::BadQuery(format!("degree on unknown edge `{}`", eps)))
            }
        }
    }
    for (j, ins) in query.insertions.iter().enumerate() {
        for (idx, rf) in &ins.class.coeffs {
            let group = target.vertices.get(&idx.vertex).ok_or_else(|| {
                LocalizeError::BadQuery(format!(
                    "insertion {} touches unknown vertex `{}`",
                    j, idx.vertex
                ))
            })?;
            if idx.class >= group.conjugacy_classes().len() {
                return Err(LocalizeError::BadQuery(format!(
                    "insertion {} names class {} at `{}`, which has {} classes",
                    j,
                    idx.class,
                    idx.vertex,
                    group.conjugacy_classes().len()
                )));
            }
            if rf.nvars() != target.m {
                return Err(LocalizeError::BadQuery(format!(
                    "insertion {} coefficient uses {} variables, target has {}",
                    j,
                    rf.nvars(),
                    target.m
                )));
            }
        }
    }
    Ok(())
}

/// Sectors each marking may decorate, deduced from its insertion's support
/// and the configured sector reading.
fn allowed_sectors(
    target: &StackyGKMGraph,
    query: &InvariantQuery,
    config: &EngineConfig,
) -> Vec<SectorSet> {
    query
        .insertions
        .iter()
        .map(|ins| {
            let mut set = SectorSet::new();
            for (idx, rf) in &ins.class.coeffs {
                if rf.is_zero() {
                    continue;
                }
                let group = target.vertex_group(&idx.vertex);
                let cm = if config.pair_inverse {
                    group.inverse_class(idx.class)
                } else {
                    idx.class
                };
                set.insert((idx.vertex.clone(), cm));
            }
            set
        })
        .collect()
}

/// Decorated graphs relevant to a query: enumeration restricted to the
/// sectors the insertions actually touch.
pub fn enumerate_for(
    target: &StackyGKMGraph,
    query: &InvariantQuery,
    config: &EngineConfig,
) -> Result<Vec<DecoratedGraph>, LocalizeError> {
    validate_query(target, query)?;
    let allowed = allowed_sectors(target, query, config);
    Ok(fixedloci::enumerate(
        target,
        query.genus,
        query.insertions.len(),
        &query.degree,
        Some(&allowed),
    )?)
}

/// Expected dimension of the query's moduli problem, when every insertion
/// sits in sectors of one common age. Fractional values are meaningful.
pub fn virtual_dimension(target: &StackyGKMGraph, query: &InvariantQuery) -> Option<Rat> {
    let mut total = Rat::zero();
    for (eps, &d) in &query.degree.0 {
        let edge = target.edges.get(eps)?;
        let compact = edge.compact.as_ref()?;
        let rx = target.flag(eps, &edge.x).r as i64;
        let ry = target.flag(eps, &compact.y).r as i64;
        let mut deg = rat_i(1) / rat_i(rx) + rat_i(1) / rat_i(ry);
        for np in &compact.normals {
            deg += &np.a;
        }
        total += rat_i(d as i64) * deg;
    }
    total += rat_i(target.r as i64 - 3) * rat_i(1 - query.genus as i64);
    total += rat_i(query.insertions.len() as i64);
    for ins in &query.insertions {
        let mut ages: BTreeSet<Rat> = BTreeSet::new();
        for (idx, rf) in &ins.class.coeffs {
            if !rf.is_zero() {
                ages.insert(crcoh::age(target, &idx.vertex, idx.class));
            }
        }
        if ages.len() != 1 {
            return None;
        }
        total -= ages.into_iter().next().unwrap();
    }
    Some(total)
}

/// Exact graph sum of the query, with constancy detection.
pub fn invariant(
    target: &StackyGKMGraph,
    query: &InvariantQuery,
    config: &EngineConfig,
) -> Result<InvariantReport, LocalizeError> {
    let graphs = enumerate_for(target, query, config)?;
    let ctx = Ctx { nvars: target.m, point: None };
    let value = graphs
        .par_iter()
        .map(|g| graph_value_inner(target, g, query, config, ctx, None))
        .try_reduce(
            || Val::zero(ctx),
            |a, b| Ok(a.add(&b)),
        )?
        .into_ratfunc();
    let constant = value.constant_value();
    Ok(InvariantReport {
        constant,
        vdim: virtual_dimension(target, query),
        graphs: graphs.len(),
        value,
    })
}

fn sample_point(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rat> {
    (0..m)
        .map(|_| {
            let mut v: i64 = 0;
            while v == 0 {
                v = rng.gen_range(-4096..=4096);
            }
            Rat::from_integer(BigInt::from(v))
        })
        .collect()
}

/// Shared evaluation loop: sums the graphs at seeded sample points,
/// resampling while a factor lands on a pole.
fn eval_sum(
    target: &StackyGKMGraph,
    graphs: &[DecoratedGraph],
    query: &InvariantQuery,
    config: &EngineConfig,
) -> Result<EvalReport, LocalizeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut last = None;
    for attempt in 0..config.max_attempts.max(1) {
        let point = sample_point(&mut rng, target.m);
        let ctx = Ctx { nvars: target.m, point: Some(&point) };
        let result = graphs
            .par_iter()
            .map(|g| graph_value_inner(target, g, query, config, ctx, None))
            .try_reduce(|| Val::zero(ctx), |a, b| Ok(a.add(&b)));
        match result {
            Ok(Val::Num(value)) => {
                return Ok(EvalReport {
                    value,
                    graphs: graphs.len(),
                    point,
                    attempts: attempt + 1,
                })
            }
            Ok(Val::Sym(_)) => unreachable!("evaluation mode produced a symbolic value"),
            Err(e) if e.is_retryable() => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| LocalizeError::Pole("no sample point found".into())))
}

/// Graph sum at a random rational point, resampling away from poles. Far
/// cheaper than the symbolic sum on large queries; for compact targets with
/// saturated insertions the value is the constant itself.
pub fn invariant_eval(
    target: &StackyGKMGraph,
    query: &InvariantQuery,
    config: &EngineConfig,
) -> Result<EvalReport, LocalizeError> {
    let graphs = enumerate_for(target, query, config)?;
    eval_sum(target, &graphs, query, config)
}

/// All effective classes on compact edges with the given weighted total:
/// the fiber of the degree bookkeeping map over one honest class.
pub fn fiber_classes(target: &StackyGKMGraph, total: u64) -> Vec<EffClass> {
    let edges: Vec<(String, u64)> = target
        .compact_edge_ids()
        .into_iter()
        .map(|e| (e.to_string(), target.edge(e).compact.as_ref().unwrap().d_eps))
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<u64> = vec![0; edges.len()];
    fn rec(
        edges: &[(String, u64)],
        i: usize,
        left: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<EffClass>,
    ) {
        if i == edges.len() {
            if left == 0 {
                let map: BTreeMap<String, u64> = edges
                    .iter()
                    .zip(cur.iter())
                    .filter(|(_, &d)| d > 0)
                    .map(|((e, _), &d)| (e.clone(), d))
                    .collect();
                out.push(EffClass(map));
            }
            return;
        }
        let w = edges[i].1;
        let mut d = 0;
        loop {
            let used = d * w;
            if used > left {
                break;
            }
            cur[i] = d;
            rec(edges, i + 1, left - used, cur, out);
            d += 1;
        }
        cur[i] = 0;
    }
    rec(&edges, 0, total, &mut cur, &mut out);
    out
}

/// Sum of the query's value over every degree class with the same weighted
/// total, reported per class. This is the comparison against an honest
/// target's invariant when several formal classes share one image class.
pub fn pushforward_check(
    target: &StackyGKMGraph,
    query: &InvariantQuery,
    config: &EngineConfig,
) -> Result<PushforwardReport, LocalizeError> {
    let total_degree = query.degree.weighted_total(target);
    let mut per_class = Vec::new();
    let mut total = RatFunc::zero(target.m);
    for beta in fiber_classes(target, total_degree) {
        let sub = InvariantQuery {
            genus: query.genus,
            degree: beta.clone(),
            insertions: query.insertions.clone(),
        };
        let report = invariant(target, &sub, config)?;
        total = total.add(&report.value);
        per_class.push((beta, report.value));
    }
    Ok(PushforwardReport { total, per_class })
}

/// Evaluation-mode fiber sum. All classes' graphs are evaluated at one
/// shared sample point, so cancellation across classes is exact even when
/// no single class is constant on its own.
pub fn pushforward_eval(
    target: &StackyGKMGraph,
    query: &InvariantQuery,
    config: &EngineConfig,
) -> Result<EvalReport, LocalizeError> {
    let total_degree = query.degree.weighted_total(target);
    let mut graphs = Vec::new();
    for beta in fiber_classes(target, total_degree) {
        let sub = InvariantQuery {
            genus: query.genus,
            degree: beta,
            insertions: query.insertions.clone(),
        };
        graphs.extend(enumerate_for(target, &sub, config)?);
    }
    eval_sum(target, &graphs, query, config)
}
