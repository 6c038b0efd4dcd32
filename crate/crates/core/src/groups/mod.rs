//! Finite groups as explicit Cayley tables, with the class and character
//! bookkeeping the localization engine needs: conjugacy classes, centralizers,
//! Q/Z-valued characters, homomorphisms, and counts of homomorphisms from
//! punctured surface groups (cover counts).
//!
//! Invariants: element 0 is the identity; `mul` is a validated associative
//! Latin square; conjugacy classes are sorted by (size, smallest member) and
//! each class lists its members in increasing order, so class indices are
//! reproducible across runs.

use crate::qfield::{frac, Rat};
use num::{BigUint, One, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

/// Brute-force iteration cap for cover-count enumeration, |G|^(2g+n).
const ENUM_GUARD: f64 = 1e8;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("enumeration too large: |G|^(2g+n) = {0} exceeds {1}")]
    TooLarge(String, String),
    #[error("not a homomorphism at ({0}, {1})")]
    NotAHomomorphism(usize, usize),
    #[error("map is not injective")]
    NotInjective,
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    n: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    classes: Vec<Vec<u16>>,
    class_of: Vec<u32>,
    abelian: bool,
}

impl FiniteGroup {
    pub fn from_table(name: &str, table: &[Vec<usize>]) -> Result<Arc<Self>, GroupError> {
        let n = table.len();
        if n == 0 || n > u16::MAX as usize {
            return Err(GroupError::InvalidTable(format!("order {} out of range", n)));
        }
        let mut mul = vec![0u16; n * n];
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!("row {} has length {}", i, row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::InvalidTable(format!("entry ({},{}) = {}", i, j, v)));
                }
                mul[i * n + j] = v as u16;
            }
        }
        // Identity must be element 0.
        for i in 0..n {
            if mul[i] as usize != i || mul[i * n] as usize != i {
                return Err(GroupError::InvalidTable("element 0 is not the identity".into()));
            }
        }
        // Latin square.
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                let r = mul[i * n + j] as usize;
                let c = mul[j * n + i] as usize;
                if seen_row[r] || seen_col[c] {
                    return Err(GroupError::InvalidTable(format!("row/column {} repeats", i)));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        // Associativity.
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b] as usize;
                for c in 0..n {
                    let bc = mul[b * n + c] as usize;
                    if mul[ab * n + c] != mul[a * n + bc] {
                        return Err(GroupError::InvalidTable(format!(
                            "not associative at ({},{},{})",
                            a, b, c
                        )));
                    }
                }
            }
        }
        let mut inv = vec![0u16; n];
        for a in 0..n {
            let mut found = false;
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as u16;
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(GroupError::InvalidTable(format!("element {} has no inverse", a)));
            }
        }
        let abelian = (0..n).all(|a| (0..n).all(|b| mul[a * n + b] == mul[b * n + a]));
        let mut g = FiniteGroup {
            name: name.to_string(),
            n,
            mul,
            inv,
            classes: Vec::new(),
            class_of: vec![0; n],
            abelian,
        };
        g.compute_classes();
        Ok(Arc::new(g))
    }

    fn compute_classes(&mut self) {
        let n = self.n;
        let mut assigned = vec![false; n];
        let mut classes: Vec<Vec<u16>> = Vec::new();
        for x in 0..n as u16 {
            if assigned[x as usize] {
                continue;
            }
            let mut cls: Vec<u16> = (0..n as u16)
                .map(|h| self.conj(h, x))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            cls.sort_unstable();
            for &y in &cls {
                assigned[y as usize] = true;
            }
            classes.push(cls);
        }
        classes.sort_by_key(|c| (c.len(), c[0]));
        for (i, c) in classes.iter().enumerate() {
            for &y in c {
                self.class_of[y as usize] = i as u32;
            }
        }
        self.classes = classes;
    }

    pub fn trivial() -> Arc<Self> {
        Self::from_table("1", &[vec![0]]).unwrap()
    }

    pub fn cyclic(k: usize) -> Arc<Self> {
        assert!(k >= 1);
        let table: Vec<Vec<usize>> = (0..k).map(|i| (0..k).map(|j| (i + j) % k).collect()).collect();
        Self::from_table(&format!("Z{}", k), &table).unwrap()
    }

    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Arc<Self> {
        let n = a.n * b.n;
        let idx = |x: usize, y: usize| x * b.n + y;
        let mut table = vec![vec![0usize; n]; n];
        for x1 in 0..a.n {
            for y1 in 0..b.n {
                for x2 in 0..a.n {
                    for y2 in 0..b.n {
                        table[idx(x1, y1)][idx(x2, y2)] =
                            idx(a.mul(x1 as u16, x2 as u16) as usize, b.mul(y1 as u16, y2 as u16) as usize);
                    }
                }
            }
        }
        Self::from_table(&format!("{}x{}", a.name, b.name), &table).unwrap()
    }

    /// Symmetric group on k letters, k <= 4; permutations enumerated in
    /// lexicographic one-line order with the identity first.
    pub fn symmetric(k: usize) -> Arc<Self> {
        assert!((1..=4).contains(&k), "symmetric groups are built up to S4");
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut cur: Vec<usize> = (0..k).collect();
        loop {
            perms.push(cur.clone());
            // Next lexicographic permutation.
            let mut i = k.wrapping_sub(2);
            while i != usize::MAX && cur[i] >= cur[i + 1] {
                i = i.wrapping_sub(1);
            }
            if i == usize::MAX {
                break;
            }
            let mut j = k - 1;
            while cur[j] <= cur[i] {
                j -= 1;
            }
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        let pos: BTreeMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let n = perms.len();
        let mut table = vec![vec![0usize; n]; n];
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                // (p*q)(x) = p(q(x)).
                let comp: Vec<usize> = (0..k).map(|x| p[q[x]]).collect();
                table[i][j] = pos[&comp];
            }
        }
        Self::from_table(&format!("S{}", k), &table).unwrap()
    }

    /// Quaternion group of order 8: elements 1,-1,i,-i,j,-j,k,-k in that order.
    pub fn quaternion8() -> Arc<Self> {
        // Encode q = s * b with sign s in {+,-} and basis b in {1,i,j,k}.
        // index = 2*b + (s == -1).
        let basis_mul = |a: usize, b: usize| -> (usize, bool) {
            // Returns (basis, negative) for the product of basis elements.
            match (a, b) {
                (0, x) => (x, false),
                (x, 0) => (x, false),
                (1, 1) => (0, true),
                (2, 2) => (0, true),
                (3, 3) => (0, true),
                (1, 2) => (3, false),
                (2, 1) => (3, true),
                (2, 3) => (1, false),
                (3, 2) => (1, true),
                (3, 1) => (2, false),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let mut table = vec![vec![0usize; 8]; 8];
        for x in 0..8 {
            for y in 0..8 {
                let (bx, sx) = (x / 2, x % 2 == 1);
                let (by, sy) = (y / 2, y % 2 == 1);
                let (bz, neg) = basis_mul(bx, by);
                let sz = (sx ^ sy) ^ neg;
                table[x][y] = 2 * bz + sz as usize;
            }
        }
        Self::from_table("Q8", &table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn is_trivial(&self) -> bool {
        self.n == 1
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.n + b as usize]
    }

    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn conj(&self, h: u16, x: u16) -> u16 {
        self.mul(self.mul(h, x), self.inv(h))
    }

    pub fn pow(&self, a: u16, k: i64) -> u16 {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut r = 0u16;
        for _ in 0..k.unsigned_abs() {
            r = self.mul(r, base);
        }
        r
    }

    pub fn element_order(&self, a: u16) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.n as u16
    }

    pub fn conjugacy_classes(&self) -> &[Vec<u16>] {
        &self.classes
    }

    pub fn class_of(&self, x: u16) -> usize {
        self.class_of[x as usize] as usize
    }

    pub fn class_rep(&self, c: usize) -> u16 {
        self.classes[c][0]
    }

    pub fn class_size(&self, c: usize) -> usize {
        self.classes[c].len()
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.class_of(self.inv(self.class_rep(c)))
    }

    pub fn centralizer(&self, x: u16) -> Vec<u16> {
        (0..self.n as u16).filter(|&h| self.mul(h, x) == self.mul(x, h)).collect()
    }

    pub fn centralizer_order(&self, x: u16) -> usize {
        // |C(x)| * |class(x)| = |G|.
        self.n / self.classes[self.class_of(x)].len()
    }

    /// Centralizer order is constant on a class.
    pub fn class_centralizer_order(&self, c: usize) -> usize {
        self.n / self.classes[c].len()
    }

    pub fn subgroup_closure(&self, gens: &[u16]) -> Vec<u16> {
        let mut member = vec![false; self.n];
        member[0] = true;
        let mut frontier = vec![0u16];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if !member[y as usize] {
                        member[y as usize] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        (0..self.n as u16).filter(|&x| member[x as usize]).collect()
    }

    /// Canonical representative of the conjugacy class of a subgroup: the
    /// lexicographically smallest sorted member list among all conjugates.
    pub fn canonical_subgroup(&self, members: &[u16]) -> Vec<u16> {
        let mut best: Option<Vec<u16>> = None;
        for h in 0..self.n as u16 {
            let mut img: Vec<u16> = members.iter().map(|&x| self.conj(h, x)).collect();
            img.sort_unstable();
            if best.as_ref().map_or(true, |b| img < *b) {
                best = Some(img);
            }
        }
        best.unwrap_or_default()
    }

    /// True when `perm` (a bijection on element indices) preserves the table.
    pub fn automorphism_check(&self, perm: &[u16]) -> Result<(), GroupError> {
        if perm.len() != self.n {
            return Err(GroupError::NotAnAutomorphism("length mismatch".into()));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p as usize >= self.n || seen[p as usize] {
                return Err(GroupError::NotAnAutomorphism("not a bijection".into()));
            }
            seen[p as usize] = true;
        }
        for a in 0..self.n as u16 {
            for b in 0..self.n as u16 {
                if perm[self.mul(a, b) as usize] != self.mul(perm[a as usize], perm[b as usize]) {
                    return Err(GroupError::NotAnAutomorphism(format!("fails at ({},{})", a, b)));
                }
            }
        }
        Ok(())
    }

    /// Order of an automorphism given as a permutation.
    pub fn automorphism_order(&self, perm: &[u16]) -> usize {
        let mut cur: Vec<u16> = (0..self.n as u16).collect();
        for k in 1..=usize::MAX {
            cur = cur.iter().map(|&x| perm[x as usize]).collect();
            if cur.iter().enumerate().all(|(i, &x)| x as usize == i) {
                return k;
            }
        }
        unreachable!()
    }

    /// Abstract group structure on a multiplicatively closed member list,
    /// together with the embedding homomorphism. The members are sorted, so
    /// the identity lands at index 0.
    pub fn subgroup(
        &self,
        name: &str,
        members: &[u16],
    ) -> Result<(Arc<FiniteGroup>, GroupHom), GroupError> {
        let mut members: Vec<u16> = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(GroupError::InvalidTable("subgroup misses the identity".into()));
        }
        let pos: BTreeMap<u16, usize> =
            members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let k = members.len();
        let mut table = vec![vec![0usize; k]; k];
        for (i, &x) in members.iter().enumerate() {
            for (j, &y) in members.iter().enumerate() {
                let z = self.mul(x, y);
                table[i][j] = *pos
                    .get(&z)
                    .ok_or_else(|| GroupError::InvalidTable("member list not closed".into()))?;
            }
        }
        let sub = Self::from_table(name, &table)?;
        let hom = GroupHom::new(&sub, self, members)?;
        Ok((sub, hom))
    }

    /// Content fingerprint, used as a cache key for equal tables.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        for &v in &self.mul {
            h ^= v as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h ^ self.n as u64
    }

    /// Number of tuples (a_1,b_1,...,a_g,b_g,e_1,...,e_n) with
    /// prod [a_i,b_i] = prod e_j and e_j in the j-th listed class, computed by
    /// convolution in the group algebra: the commutator-product distribution
    /// convolved with the inverse-class indicators, read off at the identity.
    pub fn count_covers(&self, genus: usize, classes: &[usize]) -> BigUint {
        if self.abelian {
            // Classes are singletons; the commutator product is trivial.
            let mut prod = 0u16;
            for &c in classes {
                prod = self.mul(prod, self.class_rep(c));
            }
            return if prod == 0 {
                num::pow::pow(BigUint::from(self.n), 2 * genus)
            } else {
                BigUint::zero()
            };
        }
        let mut v = vec![BigUint::zero(); self.n];
        v[0] = BigUint::one();
        if genus > 0 {
            let mut comm = vec![BigUint::zero(); self.n];
            for a in 0..self.n as u16 {
                for b in 0..self.n as u16 {
                    let z = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                    comm[z as usize] += BigUint::one();
                }
            }
            for _ in 0..genus {
                v = self.convolve(&v, &comm);
            }
        }
        for &c in classes.iter().rev() {
            let inv_c = self.inverse_class(c);
            let mut ind = vec![BigUint::zero(); self.n];
            for &x in &self.classes[inv_c] {
                ind[x as usize] = BigUint::one();
            }
            v = self.convolve(&v, &ind);
        }
        v[0].clone()
    }

    fn convolve(&self, f: &[BigUint], g: &[BigUint]) -> Vec<BigUint> {
        let mut r = vec![BigUint::zero(); self.n];
        for x in 0..self.n as u16 {
            if f[x as usize].is_zero() {
                continue;
            }
            for y in 0..self.n as u16 {
                if g[y as usize].is_zero() {
                    continue;
                }
                let z = self.mul(x, y);
                let t = &f[x as usize] * &g[y as usize];
                r[z as usize] += t;
            }
        }
        r
    }

    fn enum_guard(&self, genus: usize, n_args: usize) -> Result<(), GroupError> {
        let total = (self.n as f64).powi((2 * genus + n_args) as i32);
        if total > ENUM_GUARD {
            return Err(GroupError::TooLarge(format!("{:e}", total), format!("{:e}", ENUM_GUARD)));
        }
        Ok(())
    }

    /// Direct enumeration of the same count; the oracle for `count_covers`.
    pub fn count_covers_bruteforce(
        &self,
        genus: usize,
        classes: &[usize],
    ) -> Result<BigUint, GroupError> {
        self.enum_guard(genus, classes.len())?;
        let mut total = BigUint::zero();
        self.for_each_solution(genus, classes, |_| total += BigUint::one())?;
        Ok(total)
    }

    /// Solution counts refined by the conjugacy class of the subgroup
    /// generated by all tuple entries. Keys are canonical subgroup
    /// representatives (sorted member lists, minimal among conjugates).
    pub fn count_covers_by_subgroup(
        &self,
        genus: usize,
        classes: &[usize],
    ) -> Result<BTreeMap<Vec<u16>, BigUint>, GroupError> {
        self.enum_guard(genus, classes.len())?;
        let mut by_sub: BTreeMap<Vec<u16>, BigUint> = BTreeMap::new();
        let mut closure_cache: BTreeMap<Vec<u16>, Vec<u16>> = BTreeMap::new();
        self.for_each_solution(genus, classes, |tuple| {
            let mut gens: Vec<u16> = tuple.to_vec();
            gens.sort_unstable();
            gens.dedup();
            let canon = closure_cache
                .entry(gens.clone())
                .or_insert_with(|| self.canonical_subgroup(&self.subgroup_closure(&gens)))
                .clone();
            *by_sub.entry(canon).or_insert_with(BigUint::zero) += BigUint::one();
        })?;
        Ok(by_sub)
    }

    fn for_each_solution(
        &self,
        genus: usize,
        classes: &[usize],
        mut visit: impl FnMut(&[u16]),
    ) -> Result<(), GroupError> {
        let n_args = classes.len();
        let k = 2 * genus + n_args;
        let mut tuple = vec![0u16; k];
        // Mixed-radix odometer: a/b entries range over G, e_j over class j.
        loop {
            let mut prod = 0u16;
            for i in 0..genus {
                let (a, b) = (tuple[2 * i], tuple[2 * i + 1]);
                let comm = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                prod = self.mul(prod, comm);
            }
            let mut rhs = 0u16;
            let mut es = Vec::with_capacity(n_args);
            for (j, &c) in classes.iter().enumerate() {
                let e = self.classes[c][tuple[2 * genus + j] as usize];
                es.push(e);
                rhs = self.mul(rhs, e);
            }
            if prod == rhs {
                let mut all = tuple[..2 * genus].to_vec();
                all.extend_from_slice(&es);
                visit(&all);
            }
            // Increment.
            let mut pos = k;
            loop {
                if pos == 0 {
                    return Ok(());
                }
                pos -= 1;
                let radix = if pos < 2 * genus {
                    self.n
                } else {
                    self.classes[classes[pos - 2 * genus]].len()
                };
                if (tuple[pos] as usize) + 1 < radix {
                    tuple[pos] += 1;
                    break;
                }
                tuple[pos] = 0;
            }
        }
    }

    /// Render in the plain text table format: first line the order, then one
    /// row of the table per line.
    pub fn to_table_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.n);
        for i in 0..self.n {
            let row: Vec<String> =
                (0..self.n).map(|j| self.mul[i * self.n + j].to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn parse_table_text(name: &str, text: &str) -> Result<Arc<Self>, GroupError> {
        let mut nums = text.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|_| GroupError::InvalidTable(format!("bad integer '{}'", t)))
        });
        let n = nums.next().ok_or_else(|| GroupError::InvalidTable("empty input".into()))??;
        let mut table = vec![vec![0usize; n]; n];
        for row in table.iter_mut() {
            for v in row.iter_mut() {
                *v = nums
                    .next()
                    .ok_or_else(|| GroupError::InvalidTable("table truncated".into()))??;
            }
        }
        if nums.next().is_some() {
            return Err(GroupError::InvalidTable("trailing entries".into()));
        }
        Self::from_table(name, &table)
    }
}

/// Character with values in Q/Z: the stored rational x stands for e^(2*pi*i*x).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    values: Vec<Rat>,
}

impl Character {
    pub fn new(group: &FiniteGroup, values: Vec<Rat>) -> Result<Self, GroupError> {
        if values.len() != group.order() {
            return Err(GroupError::InvalidCharacter(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        let values: Vec<Rat> = values.iter().map(frac).collect();
        if !values[0].is_zero() {
            return Err(GroupError::InvalidCharacter("nonzero value at the identity".into()));
        }
        for a in 0..group.order() as u16 {
            for b in 0..group.order() as u16 {
                let expect = frac(&(values[a as usize].clone() + &values[b as usize]));
                if values[group.mul(a, b) as usize] != expect {
                    return Err(GroupError::InvalidCharacter(format!(
                        "additivity fails at ({}, {})",
                        a, b
                    )));
                }
            }
        }
        Ok(Character { values })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Character { values: vec![Rat::zero(); group.order()] }
    }

    /// On a cyclic group of order k presented by `FiniteGroup::cyclic`, the
    /// character sending the distinguished generator to num/k.
    pub fn cyclic_power(group: &FiniteGroup, num: i64) -> Self {
        let k = group.order() as i64;
        let values =
            (0..group.order()).map(|i| frac(&crate::qfield::rat(num * i as i64, k))).collect();
        Character { values }
    }

    pub fn value(&self, x: u16) -> &Rat {
        &self.values[x as usize]
    }

    /// Order of the group the character is defined on.
    pub fn domain_order(&self) -> usize {
        self.values.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    /// Order of the image in Q/Z: the lcm of value denominators.
    pub fn order(&self) -> usize {
        let mut l = num::BigInt::one();
        for v in &self.values {
            l = num::Integer::lcm(&l, v.denom());
        }
        use num::ToPrimitive;
        l.to_usize().expect("character order fits usize")
    }

    pub fn kernel(&self) -> Vec<u16> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(i, _)| i as u16)
            .collect()
    }

    /// True when the character vanishes on every listed element.
    pub fn trivial_on(&self, members: &[u16]) -> bool {
        members.iter().all(|&x| self.values[x as usize].is_zero())
    }
}

/// Homomorphism between explicit groups, as an element-index map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    map: Vec<u16>,
}

impl GroupHom {
    pub fn new(dom: &FiniteGroup, cod: &FiniteGroup, map: Vec<u16>) -> Result<Self, GroupError> {
        if map.len() != dom.order() {
            return Err(GroupError::InvalidTable("hom map length mismatch".into()));
        }
        for &v in &map {
            if v as usize >= cod.order() {
                return Err(GroupError::InvalidTable("hom image out of range".into()));
            }
        }
        for a in 0..dom.order() as u16 {
            for b in 0..dom.order() as u16 {
                if map[dom.mul(a, b) as usize] != cod.mul(map[a as usize], map[b as usize]) {
                    return Err(GroupError::NotAHomomorphism(a as usize, b as usize));
                }
            }
        }
        Ok(GroupHom { map })
    }

    pub fn injective(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.map.iter().all(|&v| seen.insert(v))
    }

    pub fn apply(&self, x: u16) -> u16 {
        self.map[x as usize]
    }

    pub fn image(&self) -> Vec<u16> {
        let mut img: Vec<u16> = self.map.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn map_slice(&self) -> &[u16] {
        &self.map
    }
}

#[cfg(test)]
mod tests;
