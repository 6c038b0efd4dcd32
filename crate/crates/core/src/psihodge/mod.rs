//! Exact integrals over moduli of stable curves and their finite-group
//! analogues: psi intersection numbers by recursion, the cover-count
//! reduction for classifying-stack targets, closed-form conventions for the
//! unstable low-point cases, twisted bundle ranks, and a user-supplied table
//! for integrals the built-in rules decline.

use crate::groups::{Character, FiniteGroup, GroupError};
use crate::qfield::{rat, rat_i, Rat, RatFunc};
use num::{BigInt, BigUint, One, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

#[cfg(test)]
mod tests;

#[derive(Debug, Error)]
pub enum PsiError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("no built-in rule or table entry for `{0}`")]
    UnsupportedIntegral(String),
    #[error("degenerate weight: {0}")]
    DegenerateWeight(String),
    #[error("bad integral table: {0}")]
    BadTable(String),
}

fn factorial(n: usize) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= k;
    }
    f
}

/// (2k+1)!! with the empty-product conventions (-1)!! = 1!! = 1.
fn odd_double_factorial(k: i64) -> BigInt {
    let mut f = BigInt::one();
    let mut m = 2 * k + 1;
    while m >= 3 {
        f *= m;
        m -= 2;
    }
    f
}

fn big_rat(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

type PsiKey = (usize, Vec<usize>);

fn psi_cache() -> &'static Mutex<HashMap<PsiKey, Rat>> {
    static CACHE: OnceLock<Mutex<HashMap<PsiKey, Rat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Intersection number of psi powers on the moduli of stable genus-g curves
/// with marked points. Zero for unstable (g,n) and off-dimension requests.
pub fn psi_mgn(g: usize, exps: &[usize]) -> Rat {
    let n = exps.len();
    if 2 * g + n <= 2 {
        return Rat::zero();
    }
    let dim = 3 * g + n - 3;
    if exps.iter().sum::<usize>() != dim {
        return Rat::zero();
    }
    if g == 0 {
        // Closed form: multinomial count of the top monomial.
        let mut v = big_rat(factorial(n - 3));
        for &a in exps {
            v /= big_rat(factorial(a));
        }
        return v;
    }
    let mut key_exps = exps.to_vec();
    key_exps.sort_unstable();
    let key = (g, key_exps);
    if let Some(v) = psi_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let v = psi_recurse(g, &key.1);
    psi_cache().lock().unwrap().insert(key, v.clone());
    v
}

/// One step of the Virasoro-style recursion on the largest exponent. The
/// (g, exps) pair is stable, on-dimension, of positive genus, and sorted.
fn psi_recurse(g: usize, exps: &[usize]) -> Rat {
    if g == 1 && exps == [1] {
        return rat(1, 24);
    }
    let (j, &aj) = exps.iter().enumerate().max_by_key(|&(_, a)| a).unwrap();
    debug_assert!(aj >= 1, "positive genus on dimension forces a positive exponent");
    let k = (aj - 1) as i64;
    let rest: Vec<usize> = exps.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &a)| a).collect();

    let mut rhs = Rat::zero();
    for (i, &ai) in rest.iter().enumerate() {
        let mut sub = rest.clone();
        sub[i] = k as usize + ai;
        let coeff = big_rat(odd_double_factorial(k + ai as i64))
            / big_rat(odd_double_factorial(ai as i64 - 1));
        rhs += coeff * psi_mgn(g, &sub);
    }
    for b1 in 0..=(k - 1) {
        let b2 = k - 1 - b1;
        let coeff = rat(1, 2)
            * big_rat(odd_double_factorial(b1))
            * big_rat(odd_double_factorial(b2));
        let mut glued = rest.clone();
        glued.push(b1 as usize);
        glued.push(b2 as usize);
        let mut term = psi_mgn(g - 1, &glued);
        for g1 in 0..=g {
            let g2 = g - g1;
            // Distribute the remaining markings over the two components.
            for mask in 0..(1u32 << rest.len()) {
                let mut left = vec![b1 as usize];
                let mut right = vec![b2 as usize];
                for (i, &a) in rest.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        left.push(a);
                    } else {
                        right.push(a);
                    }
                }
                term += psi_mgn(g1, &left) * psi_mgn(g2, &right);
            }
        }
        rhs += coeff * term;
    }
    rhs / big_rat(odd_double_factorial(k + 1))
}

/// Psi integral over the moduli of covers: the cover count divided by the
/// group order times the downstairs integral. With `subgroup` set, only
/// solutions generating that subgroup class are counted; the key is a
/// canonical member list as produced by `count_covers_by_subgroup`.
pub fn psi_bg(
    group: &FiniteGroup,
    g: usize,
    classes: &[usize],
    exps: &[usize],
    subgroup: Option<&[u16]>,
) -> Result<Rat, PsiError> {
    assert_eq!(classes.len(), exps.len(), "one psi exponent per marking");
    let n = classes.len();
    if 2 * g + n <= 2 {
        return Ok(Rat::zero());
    }
    let downstairs = psi_mgn(g, exps);
    if downstairs.is_zero() {
        return Ok(Rat::zero());
    }
    let count: BigUint = match subgroup {
        None => group.count_covers(g, classes),
        Some(key) => {
            let canon = group.canonical_subgroup(key);
            group
                .count_covers_by_subgroup(g, classes)?
                .remove(&canon)
                .unwrap_or_else(BigUint::zero)
        }
    };
    let count = big_rat(BigInt::from(count));
    Ok(count / rat_i(group.order() as i64) * downstairs)
}

/// Convention for the valence-one vertex with no marking: a formally
/// (-2)-dimensional moduli, assigned w/|G|.
pub fn unstable_one_flag(group_order: usize, w: &RatFunc) -> RatFunc {
    w.scale(&rat(1, group_order as i64))
}

/// Convention for the vertex with two special points: a formally
/// (-1)-dimensional moduli, assigned 1/(|C|(w1+w2)).
pub fn unstable_two_flags(
    centralizer: usize,
    w1: &RatFunc,
    w2: &RatFunc,
) -> Result<RatFunc, PsiError> {
    let sum = w1.add(w2).scale(&rat_i(centralizer as i64));
    RatFunc::one(w1.nvars())
        .div(&sum)
        .map_err(|_| PsiError::DegenerateWeight("opposite weights at a two-point vertex".into()))
}

/// Convention for the valence-one vertex with one marking carrying a psi
/// power: (-w)^a/|C|.
pub fn unstable_one_flag_psi(centralizer: usize, w: &RatFunc, a: usize) -> RatFunc {
    let mut p = RatFunc::one(w.nvars());
    let neg = w.scale(&rat_i(-1));
    for _ in 0..a {
        p = p.mul(&neg);
    }
    p.scale(&rat(1, centralizer as i64))
}

/// Rank of the character-isotypic part of the dual Hodge bundle on the
/// moduli of covers: g for the trivial character, else (g-1) plus the sum of
/// fractional character values over the markings. Integral whenever the
/// monodromy data is consistent; panics otherwise.
pub fn hodge_rank(group: &FiniteGroup, phi: &Character, g: usize, classes: &[usize]) -> i64 {
    if phi.order() == 1 {
        return g as i64;
    }
    let mut r = rat_i(g as i64 - 1);
    for &c in classes {
        r += phi.value(group.class_rep(c));
    }
    assert!(r.is_integer(), "character does not balance over the markings");
    r.to_integer().to_i64().expect("rank fits in i64")
}

/// One twisted Hodge factor of an integrand: the lambda multi-index applied
/// to the character-isotypic bundle, with powers[i] the exponent of the
/// (i+1)-st Chern class.
#[derive(Debug, Clone)]
pub struct LambdaFactor {
    pub phi: Character,
    pub powers: Vec<usize>,
}

impl LambdaFactor {
    pub fn is_trivial(&self) -> bool {
        self.powers.iter().all(|&p| p == 0)
    }
}

/// A fully specified integral over the moduli of covers.
#[derive(Debug, Clone)]
pub struct BGIntegralRequest {
    pub group: std::sync::Arc<FiniteGroup>,
    pub genus: usize,
    pub classes: Vec<usize>,
    pub subgroup: Option<Vec<u16>>,
    pub psi: Vec<usize>,
    pub lambda: Vec<LambdaFactor>,
}

impl BGIntegralRequest {
    /// Deterministic key: markings sorted as (class, psi) pairs, subgroup in
    /// canonical member form, lambda factors sorted by character values.
    pub fn canonical_key(&self) -> String {
        let mut pts: Vec<(usize, usize)> =
            self.classes.iter().copied().zip(self.psi.iter().copied()).collect();
        pts.sort_unstable();
        let pts: Vec<String> = pts.iter().map(|(c, a)| format!("{}^{}", c, a)).collect();
        let sub = match &self.subgroup {
            None => "-".to_string(),
            Some(key) => {
                let canon = self.group.canonical_subgroup(key);
                canon.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            }
        };
        let mut lams: Vec<String> = self
            .lambda
            .iter()
            .filter(|f| !f.is_trivial())
            .map(|f| {
                let sig: Vec<String> =
                    (0..f.phi.domain_order()).map(|x| f.phi.value(x as u16).to_string()).collect();
                let pow: Vec<String> = f.powers.iter().map(|p| p.to_string()).collect();
                format!("({})^({})", sig.join(","), pow.join(","))
            })
            .collect();
        lams.sort();
        let lam = if lams.is_empty() { "-".to_string() } else { lams.join(";") };
        format!(
            "{}|g{}|pts:{}|sub:{}|lam:{}",
            self.group.name,
            self.genus,
            pts.join(","),
            sub,
            lam
        )
    }
}

pub const HODGE_TABLE_HEADER: &str = "gkmgw hodge v1";

/// User-supplied values for integrals outside the built-in rules, keyed by
/// `BGIntegralRequest::canonical_key`.
#[derive(Debug, Clone, Default)]
pub struct HodgeTable {
    entries: BTreeMap<String, Rat>,
}

impl HodgeTable {
    pub fn new() -> Self {
        HodgeTable::default()
    }

    pub fn insert(&mut self, key: String, value: Rat) {
        self.entries.insert(key, value);
    }

    pub fn get(&self, key: &str) -> Option<&Rat> {
        self.entries.get(key)
    }

    /// Parse the line format: a header, then `key = p/q` per line. Blank
    /// lines and lines starting with '#' are skipped.
    pub fn parse(text: &str) -> Result<Self, PsiError> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == HODGE_TABLE_HEADER => {}
            _ => return Err(PsiError::BadTable(format!("missing `{}` header", HODGE_TABLE_HEADER))),
        }
        let mut table = HodgeTable::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, val) = line
                .rsplit_once(" = ")
                .ok_or_else(|| PsiError::BadTable(format!("line {}: expected `key = value`", i + 2)))?;
            let value = crate::qfield::parse_rat(val.trim())
                .map_err(|e| PsiError::BadTable(format!("line {}: {}", i + 2, e)))?;
            table.insert(key.trim().to_string(), value);
        }
        Ok(table)
    }
}

/// Integral dispatch: pure psi requests go to the recursion, lambda factors
/// on rank-zero bundles are vacuous, a lambda power above the bundle rank
/// kills the integral, anything else must come from the table.
pub fn lambda_integral(req: &BGIntegralRequest, table: Option<&HodgeTable>) -> Result<Rat, PsiError> {
    let mut needs_table = false;
    for f in &req.lambda {
        if f.is_trivial() {
            continue;
        }
        let rank = hodge_rank(&req.group, &f.phi, req.genus, &req.classes);
        if rank < 0 {
            return Err(PsiError::UnsupportedIntegral(req.canonical_key()));
        }
        if rank == 0 {
            continue;
        }
        if f.powers.iter().enumerate().any(|(i, &p)| p > 0 && (i as i64) + 1 > rank) {
            // A Chern class above the rank vanishes.
            return Ok(Rat::zero());
        }
        needs_table = true;
    }
    if !needs_table {
        return psi_bg(&req.group, req.genus, &req.classes, &req.psi, req.subgroup.as_deref());
    }
    let key = req.canonical_key();
    match table.and_then(|t| t.get(&key)) {
        Some(v) => Ok(v.clone()),
        None => Err(PsiError::UnsupportedIntegral(key)),
    }
}
