//! Built-in example graphs.
//!
//! Torus weights use coordinates u1..um. Conventions per entry:
//! - `P1`: vertices p0, p1; tangent weights u1 and -u1.
//! - `P2`: standard action with fixed points p0, p1, p2; weights at p0 are
//!   u1, u2 and the remaining weights are the usual differences. All normal
//!   degrees are 1.
//! - `P1xP1`: product action, horizontal weights +-u1, vertical +-u2, all
//!   normal degrees 0.
//! - `F(m,n)` (football): two cyclic vertex groups of orders m and n,
//!   trivial edge group, weights u1/m and -u1/n.
//! - `P(m,n)`: weighted projective line; the edge group is cyclic of order
//!   gcd(m,n), weights -(n/m) u1 and u1.
//! - `Conifold`: one compact edge with weights +-u1 and two normal rays per
//!   vertex, Calabi-Yau weights, both normal degrees -1.
//! - `LocalP1(a,b)`: two normal rays of degrees a and b over a P1; rejected
//!   by the validator when a + b = 1 (dependent normal weights at y).
//! - `BananaFormal`: two vertices joined by three edges with Calabi-Yau
//!   weights; the connection along each edge swaps the other two.
//! - `S3Football`: both vertex groups S3 acting through the sign character,
//!   edge group the rotation subgroup, lifts are transpositions and the
//!   monodromy is inversion.
//! - `AffineZ2`, `AffineZ3`, `AffineS3`: one vertex with rays only, built by
//!   `affine`.

use super::*;
use crate::qfield::rat;

/// Names accepted by `catalog`, with parameter placeholders.
pub fn list_catalog() -> Vec<&'static str> {
    vec![
        "P1",
        "P2",
        "P1xP1",
        "F(m,n)",
        "P(m,n)",
        "Conifold",
        "LocalP1(a,b)",
        "BananaFormal",
        "S3Football",
        "AffineZ2",
        "AffineZ3",
        "AffineS3",
    ]
}

pub fn catalog(name: &str) -> Result<StackyGKMGraph, GkmError> {
    let s = name.trim();
    if let Some(idx) = s.find('(') {
        if !s.ends_with(')') {
            return Err(GkmError::UnknownExample(s.to_string()));
        }
        let head = &s[..idx];
        let args: Result<Vec<i64>, _> =
            s[idx + 1..s.len() - 1].split(',').map(|t| t.trim().parse::<i64>()).collect();
        let args = args.map_err(|_| GkmError::UnknownExample(s.to_string()))?;
        return match (head, args.len()) {
            ("F", 2) if args[0] >= 1 && args[1] >= 1 => {
                football(args[0] as usize, args[1] as usize)
            }
            ("P", 2) if args[0] >= 1 && args[1] >= 1 => {
                weighted_p1(args[0] as usize, args[1] as usize)
            }
            ("LocalP1", 2) => Ok(local_p1(args[0], args[1])),
            _ => Err(GkmError::UnknownExample(s.to_string())),
        };
    }
    match s {
        "P1" => Ok(p1()),
        "P2" => Ok(p2()),
        "P1xP1" => Ok(p1xp1()),
        "Conifold" => Ok(conifold()),
        "Banana" | "BananaFormal" => Ok(banana()),
        "S3Football" => Ok(s3_football()),
        "AffineZ2" => affine_z2(),
        "AffineZ3" => affine_z3(),
        "AffineS3" => affine_s3(),
        _ => Err(GkmError::UnknownExample(s.to_string())),
    }
}

fn wz(coeffs: &[i64]) -> Weight {
    Weight(coeffs.iter().map(|&c| rat_i(c)).collect())
}

fn np(at_x: &str, at_y: &str, a: Rat) -> NormalPair {
    NormalPair { at_x: at_x.into(), at_y: at_y.into(), a }
}

fn triv_flag(triv: &Arc<FiniteGroup>, weight: Weight) -> FlagData {
    FlagData::new(weight, Character::trivial(triv), GroupHom::new(triv, triv, vec![0]).unwrap())
}

fn triv_edge(triv: &Arc<FiniteGroup>, x: &str, y: &str, normals: Vec<NormalPair>) -> EdgeData {
    EdgeData {
        x: x.into(),
        group: triv.clone(),
        compact: Some(CompactEdge { y: y.into(), alpha: vec![0], t_x: 0, t_y: 0, d_eps: 1, normals }),
    }
}

fn triv_ray(triv: &Arc<FiniteGroup>, x: &str) -> EdgeData {
    EdgeData { x: x.into(), group: triv.clone(), compact: None }
}

pub fn p1() -> StackyGKMGraph {
    let triv = FiniteGroup::trivial();
    let mut g = StackyGKMGraph {
        name: "P1".into(),
        m: 1,
        r: 1,
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        flags: BTreeMap::new(),
    };
    g.vertices.insert("p0".into(), triv.clone());
    g.vertices.insert("p1".into(), triv.clone());
    g.edges.insert("e".into(), triv_edge(&triv, "p0", "p1", vec![]));
    g.flags.insert(("e".into(), "p0".into()), triv_flag(&triv, wz(&[1])));
    g.flags.insert(("e".into(), "p1".into()), triv_flag(&triv, wz(&[-1])));
    g
}

pub fn p2() -> StackyGKMGraph {
    let triv = FiniteGroup::trivial();
    let mut g = StackyGKMGraph {
        name: "P2".into(),
        m: 2,
        r: 2,
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        flags: BTreeMap::new(),
    };
    for v in ["p0", "p1", "p2"] {
        g.vertices.insert(v.into(), triv.clone());
    }
    g.edges.insert("e01".into(), triv_edge(&triv, "p0", "p1", vec![np("e02", "e12", rat_i(1))]));
    g.edges.insert("e02".into(), triv_edge(&triv, "p0", "p2", vec![np("e01", "e12", rat_i(1))]));
    g.edges.insert("e12".into(), triv_edge(&triv, "p1", "p2", vec![np("e01", "e02", rat_i(1))]));
    let flags = [
        ("e01", "p0", wz(&[1, 0])),
        ("e01", "p1", wz(&[-1, 0])),
        ("e02", "p0", wz(&[0, 1])),
        ("e02", "p2", wz(&[0, -1])),
        ("e12", "p1", wz(&[-1, 1])),
        ("e12", "p2", wz(&[1, -1])),
    ];
    for (e, v, w) in flags {
        g.flags.insert((e.into(), v.into()), triv_flag(&triv, w));
    }
    g
}

pub fn p1xp1() -> StackyGKMGraph {
    let triv = FiniteGroup::trivial();
    let mut g = StackyGKMGraph {
        name: "P1xP1".into(),
        m: 2,
        r: 2,
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        flags: BTreeMap::new(),
    };
    for v in ["p00", "p01", "p10", "p11"] {
        g.vertices.insert(v.into(), triv.clone());
    }
    g.edges.insert("h0".into(), triv_edge(&triv, "p00", "p10", vec![np("v0", "v1", rat_i(0))]));
    g.edges.insert("h1".into(), triv_edge(&triv, "p01", "p11", vec![np("v0", "v1", rat_i(0))]));
    g.edges.insert("v0".into(), triv_edge(&triv, "p00", "p01", vec![np("h0", "h1", rat_i(0))]));
    g.edges.insert("v1".into(), triv_edge(&triv, "p10", "p11", vec![np("h0", "h1", rat_i(0))]));
    let flags = [
        ("h0", "p00", wz(&[1, 0])),
        ("h0", "p10", wz(&[-1, 0])),
        ("h1", "p01", wz(&[1, 0])),
        ("h1", "p11", wz(&[-1, 0])),
        ("v0", "p00", wz(&[0, 1])),
        ("v0", "p01", wz(&[0, -1])),
        ("v1", "p10", wz(&[0, 1])),
        ("v1", "p11", wz(&[0, -1])),
    ];
    for (e, v, w) in flags {
        g.flags.insert((e.into(), v.into()), triv_flag(&triv, w));
    }
    g
}

pub fn conifold() -> StackyGKMGraph {
    let triv = FiniteGroup::trivial();
    let mut g = StackyGKMGraph {
        name: "Conifold".into(),
        m: 2,
        r: 3,
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        flags: BTreeMap::new(),
    };
    g.vertices.insert("vx".into(), triv.clone());
    g.vertices.insert("vy".into(), triv.clone());
    g.edges.insert(
        "e".into(),
        triv_edge(&triv, "vx", "vy", vec![np("n1x", "n1y", rat_i(-1)), np("n2x", "n2y", rat_i(-1))]),
    );
    for ray in ["n1x", "n2x"] {
        g.edges.insert(ray.into(), triv_ray(&triv, "vx"));
    }
    for ray in ["n1y", "n2y"] {
        g.edges.insert(ray.into(), triv_ray(&triv, "vy"));
    }
    let flags = [
        ("e", "vx", wz(&[1, 0])),
        ("e", "vy", wz(&[-1, 0])),
        ("n1x", "vx", wz(&[0, 1])),
        ("n2x", "vx", wz(&[-1, -1])),
        ("n1y", "vy", wz(&[1, 1])),
        ("n2y", "vy", wz(&[0, -1])),
    ];
    for (e, v, w) in flags {
        g.flags.insert((e.into(), v.into()), triv_flag(&triv, w));
    }
    g
}

pub fn local_p1(a: i64, b: i64) -> StackyGKMGraph {
    let triv = FiniteGroup::trivial();
    let mut g = StackyGKMGraph {
        name: format!("LocalP1({},{})", a, b),
        m: 2,
        r: 3,
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        flags: BTreeMap::new(),
    };
    g.vertices.insert("vx".into(), triv.clone());
    g.vertices.insert("vy".into(), triv.clone());
    g.edges.insert(
        "e".into(),
        triv_edge(&triv, "vx", "vy", vec![np("n1x", "n1y", rat_i(a)), np("n2x", "n2y", rat_i(b))]),
    );
    for ray in ["n1x", "n2x"] {
        g.edges.insert(ray.into(), triv_ray(&triv, "vx"));
    }
    for ray in ["n1y", "n2y"] {
        g.edges.insert(ray.into(), triv_ray(&triv, "vy"));
    }
    let flags = [
        ("e", "vx", wz(&[1, 0])),
        ("e", "vy", wz(&[-1, 0])),
        ("n1x", "vx", wz(&[0, 1])),
        ("n2x", "vx", wz(&[1, -1])),
        ("n1y", "vy", wz(&[-a, 1])),
        ("n2y", "vy", wz(&[1 - b, -1])),
    ];
    for (e, v, w) in flags {
        g.flags.insert((e.into(), v.into()), triv_flag(&triv, w));
    }
    g
}

pub fn banana() -> StackyGKMGraph {
    let triv = FiniteGroup::trivial();
    let mut g = StackyGKMGraph {
        name: "BananaFormal".into(),
        m: 2,
        r: 3,
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        flags: BTreeMap::new(),
    };
    g.vertices.insert("vx".into(), triv.clone());
    g.vertices.insert("vy".into(), triv.clone());
    // Along each edge the connection swaps the other two edges.
    g.edges.insert(
        "e1".into(),
        triv_edge(&triv, "vx", "vy", vec![np("e2", "e3", rat_i(-1)), np("e3", "e2", rat_i(-1))]),
    );
    g.edges.insert(
        "e2".into(),
        triv_edge(&triv, "vx", "vy", vec![np("e1", "e3", rat_i(-1)), np("e3", "e1", rat_i(-1))]),
    );
    g.edges.insert(
        "e3".into(),
        triv_edge(&triv, "vx", "vy", vec![np("e1", "e2", rat_i(-1)), np("e2", "e1", rat_i(-1))]),
    );
    let weights = [("e1", wz(&[1, 0])), ("e2", wz(&[0, 1])), ("e3", wz(&[-1, -1]))];
    for (e, w) in weights {
        g.flags.insert((e.into(), "vx".into()), triv_flag(&triv, w.clone()));
        g.flags.insert((e.into(), "vy".into()), triv_flag(&triv, w.neg()));
    }
    g
}

pub fn football(m: usize, n: usize) -> Result<StackyGKMGraph, GkmError> {
    if m == 0 || n == 0 {
        return Err(GkmError::BadGraph("football orders must be positive".into()));
    }
    let triv = FiniteGroup::trivial();
    let gx = FiniteGroup::cyclic(m);
    let gy = FiniteGroup::cyclic(n);
    let mut g = StackyGKMGraph {
        name: format!("F({},{})", m, n),
        m: 1,
        r: 1,
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        flags: BTreeMap::new(),
    };
    g.vertices.insert("x".into(), gx.clone());
    g.vertices.insert("y".into(), gy.clone());
    g.edges.insert(
        "e".into(),
        EdgeData {
            x: "x".into(),
            group: triv.clone(),
            compact: Some(CompactEdge {
                y: "y".into(),
                alpha: vec![0],
                t_x: if m == 1 { 0 } else { 1 },
                t_y: if n == 1 { 0 } else { 1 },
                d_eps: 1,
                normals: vec![],
            }),
        },
    );
    g.flags.insert(
        ("e".into(), "x".into()),
        FlagData::new(
            Weight(vec![rat(1, m as i64)]),
            Character::cyclic_power(&gx, 1),
            GroupHom::new(&triv, &gx, vec![0])?,
        ),
    );
    g.flags.insert(
        ("e".into(), "y".into()),
        FlagData::new(
            Weight(vec![rat(-1, n as i64)]),
            Character::cyclic_power(&gy, 1),
            GroupHom::new(&triv, &gy, vec![0])?,
        ),
    );
    Ok(g)
}

pub fn weighted_p1(m: usize, n: usize) -> Result<StackyGKMGraph, GkmError> {
    if m == 0 || n == 0 {
        return Err(GkmError::BadGraph("weights must be positive".into()));
    }
    let d = num::integer::gcd(m, n);
    let gx = FiniteGroup::cyclic(m);
    let gy = FiniteGroup::cyclic(n);
    let ge = FiniteGroup::cyclic(d);
    let jx: Vec<u16> = (0..d).map(|i| ((i * (m / d)) % m) as u16).collect();
    let jy: Vec<u16> = (0..d).map(|i| ((i * (n / d)) % n) as u16).collect();
    let t_x = (0..m).find(|k| (k * n) % m == d % m).expect("gcd is attained") as u16;
    let t_y = (0..n).find(|l| (l * m) % n == d % n).expect("gcd is attained") as u16;
    let mut g = StackyGKMGraph {
        name: format!("P({},{})", m, n),
        m: 1,
        r: 1,
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        flags: BTreeMap::new(),
    };
    g.vertices.insert("x".into(), gx.clone());
    g.vertices.insert("y".into(), gy.clone());
    g.edges.insert(
        "e".into(),
        EdgeData {
            x: "x".into(),
            group: ge.clone(),
            compact: Some(CompactEdge {
                y: "y".into(),
                alpha: (0..d as u16).collect(),
                t_x,
                t_y,
                d_eps: 1,
                normals: vec![],
            }),
        },
    );
    g.flags.insert(
        ("e".into(), "x".into()),
        FlagData::new(
            Weight(vec![rat(-(n as i64), m as i64)]),
            Character::cyclic_power(&gx, n as i64),
            GroupHom::new(&ge, &gx, jx)?,
        ),
    );
    g.flags.insert(
        ("e".into(), "y".into()),
        FlagData::new(
            Weight(vec![rat_i(1)]),
            Character::cyclic_power(&gy, m as i64),
            GroupHom::new(&ge, &gy, jy)?,
        ),
    );
    Ok(g)
}

pub fn s3_football() -> StackyGKMGraph {
    let gs = FiniteGroup::symmetric(3);
    let ge = FiniteGroup::cyclic(3);
    // Rotations sit at indices 0, 3, 4; all transpositions have sign 1/2.
    let j = GroupHom::new(&ge, &gs, vec![0, 3, 4]).unwrap();
    let mut sign_vals = vec![Rat::zero(); 6];
    for t in [1usize, 2, 5] {
        sign_vals[t] = rat(1, 2);
    }
    let sign = Character::new(&gs, sign_vals).unwrap();
    let mut g = StackyGKMGraph {
        name: "S3Football".into(),
        m: 1,
        r: 1,
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        flags: BTreeMap::new(),
    };
    g.vertices.insert("x".into(), gs.clone());
    g.vertices.insert("y".into(), gs.clone());
    g.edges.insert(
        "e".into(),
        EdgeData {
            x: "x".into(),
            group: ge,
            compact: Some(CompactEdge {
                y: "y".into(),
                // Conjugation by a transposition inverts rotations.
                alpha: vec![0, 2, 1],
                t_x: 1,
                t_y: 1,
                d_eps: 1,
                normals: vec![],
            }),
        },
    );
    g.flags.insert(
        ("e".into(), "x".into()),
        FlagData::new(Weight(vec![rat(1, 2)]), sign.clone(), j.clone()),
    );
    g.flags.insert(
        ("e".into(), "y".into()),
        FlagData::new(Weight(vec![rat(-1, 2)]), sign, j),
    );
    g
}

/// One vertex with the given group and rays decorated by the listed
/// characters and weights. Each ray's edge group is the character kernel.
pub fn affine(
    name: &str,
    group: Arc<FiniteGroup>,
    rays: Vec<(Character, Weight)>,
) -> Result<StackyGKMGraph, GkmError> {
    if rays.is_empty() {
        return Err(GkmError::BadGraph("at least one ray is required".into()));
    }
    let m = rays[0].1.rank();
    if rays.iter().any(|(_, w)| w.rank() != m) {
        return Err(GkmError::BadGraph("ray weights have mixed ranks".into()));
    }
    let mut g = StackyGKMGraph {
        name: name.into(),
        m,
        r: rays.len(),
        vertices: BTreeMap::new(),
        edges: BTreeMap::new(),
        flags: BTreeMap::new(),
    };
    g.vertices.insert("v".into(), group.clone());
    for (i, (phi, weight)) in rays.into_iter().enumerate() {
        let id = format!("n{}", i + 1);
        let (sub, j) = group.subgroup(&format!("{}-ker{}", name, i + 1), &phi.kernel())?;
        g.edges.insert(id.clone(), EdgeData { x: "v".into(), group: sub, compact: None });
        g.flags.insert((id, "v".into()), FlagData::new(weight, phi, j));
    }
    Ok(g)
}

pub fn affine_z2() -> Result<StackyGKMGraph, GkmError> {
    let z2 = FiniteGroup::cyclic(2);
    let chi = Character::cyclic_power(&z2, 1);
    affine(
        "AffineZ2",
        z2,
        vec![(chi.clone(), wz(&[1, 0])), (chi, wz(&[0, 1]))],
    )
}

pub fn affine_z3() -> Result<StackyGKMGraph, GkmError> {
    let z3 = FiniteGroup::cyclic(3);
    let chi = Character::cyclic_power(&z3, 1);
    affine(
        "AffineZ3",
        z3,
        vec![
            (chi.clone(), wz(&[1, 0, 0])),
            (chi.clone(), wz(&[0, 1, 0])),
            (chi, wz(&[0, 0, 1])),
        ],
    )
}

pub fn affine_s3() -> Result<StackyGKMGraph, GkmError> {
    let gs = FiniteGroup::symmetric(3);
    let mut sign_vals = vec![Rat::zero(); 6];
    for t in [1usize, 2, 5] {
        sign_vals[t] = rat(1, 2);
    }
    let sign = Character::new(&gs, sign_vals).map_err(GkmError::Group)?;
    affine("AffineS3", gs, vec![(sign.clone(), wz(&[1, 0])), (sign, wz(&[0, 1]))])
}
