//! Equivariant orbifold cohomology in the fixed-point basis: inertia
//! sectors indexed by (vertex, conjugacy class), ages, fixed-direction Euler
//! classes, the Poincare pairing, and the cup product of a single affine
//! chart.
//!
//! Classes are always stored by their restrictions to fixed points; a global
//! class of a projective target is entered directly as its restriction
//! image.

use crate::gkm::{StackyGKMGraph, Weight};
use crate::groups::{Character, FiniteGroup};
use crate::qfield::{rat, Poly, Rat, RatFunc};
use num::{ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[cfg(test)]
mod tests;

/// One inertia sector: a vertex of the graph and a conjugacy class index of
/// its group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct InertiaIndex {
    pub vertex: String,
    pub class: usize,
}

impl InertiaIndex {
    pub fn new(vertex: impl Into<String>, class: usize) -> Self {
        InertiaIndex { vertex: vertex.into(), class }
    }
}

impl fmt::Display for InertiaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.vertex, self.class)
    }
}

/// Finitely supported cohomology class in the sector basis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EqCRClass {
    pub coeffs: BTreeMap<InertiaIndex, RatFunc>,
}

impl EqCRClass {
    pub fn zero() -> Self {
        EqCRClass::default()
    }

    pub fn unit(idx: InertiaIndex, nvars: usize) -> Self {
        let mut c = EqCRClass::zero();
        c.add_term(idx, RatFunc::one(nvars));
        c
    }

    pub fn add_term(&mut self, idx: InertiaIndex, coeff: RatFunc) {
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.remove(&idx) {
            None => {
                self.coeffs.insert(idx, coeff);
            }
            Some(old) => {
                let sum = old.add(&coeff);
                if !sum.is_zero() {
                    self.coeffs.insert(idx, sum);
                }
            }
        }
    }

    pub fn add(&self, other: &EqCRClass) -> EqCRClass {
        let mut out = self.clone();
        for (idx, c) in &other.coeffs {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, f: &RatFunc) -> EqCRClass {
        let mut out = EqCRClass::zero();
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), c.mul(f));
        }
        out
    }

    pub fn coeff(&self, idx: &InertiaIndex, nvars: usize) -> RatFunc {
        self.coeffs.get(idx).cloned().unwrap_or_else(|| RatFunc::zero(nvars))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for EqCRClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().map(|(idx, c)| format!("[{}] {}", idx, c)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Age of the sector: the sum of fractional character values of the flags at
/// the vertex, evaluated on the class. Constant on the class since
/// characters are class functions.
pub fn age(graph: &StackyGKMGraph, vertex: &str, class: usize) -> Rat {
    let group = graph.vertex_group(vertex);
    let h = group.class_rep(class);
    let mut total = Rat::zero();
    for (_, flag) in graph.flags_at(vertex) {
        total += flag.phi.value(h);
    }
    debug_assert!(group.conjugacy_classes()[class].iter().all(|&x| {
        graph.flags_at(vertex).iter().map(|(_, f)| f.phi.value(x).clone()).sum::<Rat>() == total
    }));
    total
}

/// Cohomological degree of a sector class: twice the age plus the shift.
pub fn cr_degree(graph: &StackyGKMGraph, vertex: &str, class: usize, shift: i64) -> Rat {
    age(graph, vertex, class) * rat(2, 1) + rat(shift, 1)
}

/// Product of the tangent weights the class acts trivially on: the Euler
/// class of the sector's fixed directions.
pub fn e_class(graph: &StackyGKMGraph, vertex: &str, class: usize) -> RatFunc {
    let group = graph.vertex_group(vertex);
    let h = group.class_rep(class);
    let mut prod = Poly::one(graph.m);
    for (_, flag) in graph.flags_at(vertex) {
        if flag.phi.value(h).is_zero() {
            prod = prod.mul(&flag.weight.to_poly());
        }
    }
    RatFunc::from_poly(prod)
}

/// Number of flag directions at the vertex moved by the class.
pub fn moved_directions(graph: &StackyGKMGraph, vertex: &str, class: usize) -> usize {
    let group = graph.vertex_group(vertex);
    let h = group.class_rep(class);
    graph.flags_at(vertex).iter().filter(|(_, f)| !f.phi.value(h).is_zero()).count()
}

/// Poincare pairing: sectors pair against their inverse sectors with weight
/// 1/(centralizer order times fixed-direction Euler class).
pub fn pairing(graph: &StackyGKMGraph, a: &EqCRClass, b: &EqCRClass) -> RatFunc {
    let mut total = RatFunc::zero(graph.m);
    for (idx, ac) in &a.coeffs {
        let group = graph.vertex_group(&idx.vertex);
        let inv_idx = InertiaIndex::new(idx.vertex.clone(), group.inverse_class(idx.class));
        let bc = b.coeff(&inv_idx, graph.m);
        if bc.is_zero() {
            continue;
        }
        let cent = group.class_centralizer_order(idx.class) as i64;
        let denom = e_class(graph, &idx.vertex, idx.class).scale(&rat(cent, 1));
        total = total.add(&ac.mul(&bc).div(&denom).expect("sector Euler class is nonzero"));
    }
    total
}

/// Cup product of two sector units of one affine chart, as coefficients on
/// target classes. The discrete data is the group with one character and one
/// weight per coordinate direction.
pub fn cup_classes(
    group: &FiniteGroup,
    chars: &[Character],
    weights: &[Weight],
    c: usize,
    cp: usize,
) -> BTreeMap<usize, RatFunc> {
    assert_eq!(chars.len(), weights.len());
    let m = weights.first().map_or(0, |w| w.rank());
    let order = rat(group.order() as i64, 1);
    let mut out: BTreeMap<usize, RatFunc> = BTreeMap::new();
    for &h in &group.conjugacy_classes()[c] {
        for &hp in &group.conjugacy_classes()[cp] {
            let z = group.mul(h, hp);
            let zc = group.class_of(z);
            // Obstruction exponent per direction: the carry of the two
            // fractional ages, always 0 or 1.
            let mut factor = Poly::one(m);
            for (chi, w) in chars.iter().zip(weights) {
                let sum = chi.value(h) + chi.value(hp);
                let carry = sum.floor().to_integer().to_i64().expect("carry is 0 or 1");
                debug_assert!(carry == 0 || carry == 1);
                if carry == 1 {
                    factor = factor.mul(&w.to_poly());
                }
            }
            let coeff = rat(group.centralizer_order(z) as i64, 1) / &order;
            let term = RatFunc::from_poly(factor).scale(&coeff);
            let entry = out.entry(zc).or_insert_with(|| RatFunc::zero(m));
            *entry = entry.add(&term);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Cup product of sector units at an affine vertex of the graph.
pub fn cup_affine(graph: &StackyGKMGraph, vertex: &str, c: usize, cp: usize) -> EqCRClass {
    let group = graph.vertex_group(vertex);
    let flags = graph.flags_at(vertex);
    let chars: Vec<Character> = flags.iter().map(|(_, f)| f.phi.clone()).collect();
    let weights: Vec<Weight> = flags.iter().map(|(_, f)| f.weight.clone()).collect();
    let mut out = EqCRClass::zero();
    for (zc, coeff) in cup_classes(group, &chars, &weights, c, cp) {
        out.add_term(InertiaIndex::new(vertex, zc), coeff);
    }
    out
}

/// Cup product of two classes supported at one affine vertex, extended
/// bilinearly from the sector units.
pub fn cup_affine_classes(
    graph: &StackyGKMGraph,
    vertex: &str,
    a: &EqCRClass,
    b: &EqCRClass,
) -> EqCRClass {
    let mut out = EqCRClass::zero();
    for (ia, ca) in &a.coeffs {
        assert_eq!(ia.vertex, vertex, "class is supported away from the chart");
        for (ib, cb) in &b.coeffs {
            assert_eq!(ib.vertex, vertex, "class is supported away from the chart");
            let prod = cup_affine(graph, vertex, ia.class, ib.class);
            out = out.add(&prod.scale(&ca.mul(cb)));
        }
    }
    out
}

/// The equivariant point class at a vertex: the Euler class of all tangent
/// directions on the untwisted sector unit.
pub fn point_class(graph: &StackyGKMGraph, vertex: &str) -> EqCRClass {
    let idx = InertiaIndex::new(vertex, 0);
    let euler = e_class(graph, vertex, 0);
    EqCRClass::unit(idx, graph.m).scale(&euler)
}

/// The untwisted unit at a vertex.
pub fn sector_unit(graph: &StackyGKMGraph, vertex: &str, class: usize) -> EqCRClass {
    EqCRClass::unit(InertiaIndex::new(vertex, class), graph.m)
}

/// Sum of untwisted units over all vertices: the restriction image of 1.
pub fn global_unit(graph: &StackyGKMGraph) -> EqCRClass {
    let mut out = EqCRClass::zero();
    for v in graph.vertices.keys() {
        out.add_term(InertiaIndex::new(v.clone(), 0), RatFunc::one(graph.m));
    }
    out
}
