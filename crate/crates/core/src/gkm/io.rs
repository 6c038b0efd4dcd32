//! Graph file format: a fixed header line followed by one JSON object with
//! sections "torus", "vertices", "edges", "flags" and "connection".
//!
//! Serialization is canonical (sorted keys, groups written inline with their
//! tables, rationals as "p/q" strings), so parse followed by serialize is the
//! identity on serialized output. Parsing additionally accepts groups by
//! reference name ("Z4", "S3", "Q8", "Z2xZ2", "trivial") and treats the
//! "connection" section as optional, cross-checking it against the normal
//! pairs when present.

use super::*;
use serde_json::{json, Map, Value};
use std::str::FromStr;

pub const HEADER: &str = "gkmgw graph v1";

pub fn to_text(g: &StackyGKMGraph) -> String {
    let mut root = Map::new();
    root.insert("name".into(), json!(g.name));
    root.insert("torus".into(), json!({ "rank": g.m, "valence": g.r }));

    let mut vertices = Map::new();
    for (id, group) in &g.vertices {
        vertices.insert(id.clone(), json!({ "group": group_value(group) }));
    }
    root.insert("vertices".into(), Value::Object(vertices));

    let mut edges = Map::new();
    for (id, edge) in &g.edges {
        let mut e = Map::new();
        e.insert("x".into(), json!(edge.x));
        e.insert("group".into(), group_value(&edge.group));
        if let Some(c) = &edge.compact {
            e.insert("y".into(), json!(c.y));
            e.insert("alpha".into(), json!(c.alpha));
            e.insert("t_x".into(), json!(c.t_x));
            e.insert("t_y".into(), json!(c.t_y));
            e.insert("d".into(), json!(c.d_eps));
            let normals: Vec<Value> = c
                .normals
                .iter()
                .map(|p| json!({ "x_edge": p.at_x, "y_edge": p.at_y, "a": p.a.to_string() }))
                .collect();
            e.insert("normals".into(), Value::Array(normals));
        }
        edges.insert(id.clone(), Value::Object(e));
    }
    root.insert("edges".into(), Value::Object(edges));

    let mut flags = Map::new();
    for ((e, v), flag) in &g.flags {
        let weight: Vec<String> = flag.weight.0.iter().map(|c| c.to_string()).collect();
        let phi: Vec<String> =
            (0..flag.phi.domain_order()).map(|x| flag.phi.value(x as u16).to_string()).collect();
        flags.insert(
            format!("{}@{}", e, v),
            json!({ "weight": weight, "phi": phi, "j": flag.j.map_slice() }),
        );
    }
    root.insert("flags".into(), Value::Object(flags));

    let mut connection = Map::new();
    for (id, edge) in &g.edges {
        if let Some(c) = &edge.compact {
            let mut theta = Map::new();
            for p in &c.normals {
                theta.insert(p.at_x.clone(), json!(p.at_y));
            }
            connection.insert(id.clone(), Value::Object(theta));
        }
    }
    root.insert("connection".into(), Value::Object(connection));

    format!("{}\n{}\n", HEADER, serde_json::to_string_pretty(&Value::Object(root)).unwrap())
}

pub fn parse_text(text: &str) -> Result<StackyGKMGraph, GkmError> {
    let (first, rest) = text
        .split_once('\n')
        .ok_or_else(|| GkmError::Parse("missing header line".into()))?;
    if first.trim() != HEADER {
        return Err(GkmError::Parse(format!("expected header '{}', found '{}'", HEADER, first.trim())));
    }
    let root: Value =
        serde_json::from_str(rest).map_err(|e| GkmError::Parse(format!("invalid JSON: {}", e)))?;
    let root = as_obj(&root, "top level")?;

    let name = match root.get("name") {
        Some(v) => as_str(v, "name")?.to_string(),
        None => "unnamed".to_string(),
    };
    let torus = as_obj(req(root, "torus")?, "torus")?;
    let m = as_usize(req(torus, "rank")?, "torus.rank")?;
    let r = as_usize(req(torus, "valence")?, "torus.valence")?;

    let mut vertices = BTreeMap::new();
    for (id, v) in as_obj(req(root, "vertices")?, "vertices")? {
        let obj = as_obj(v, &format!("vertex {}", id))?;
        let group = group_from_value(req(obj, "group")?, &format!("vertex {}", id))?;
        vertices.insert(id.clone(), group);
    }

    let mut edges = BTreeMap::new();
    for (id, v) in as_obj(req(root, "edges")?, "edges")? {
        let ctx = format!("edge {}", id);
        let obj = as_obj(v, &ctx)?;
        let x = as_str(req(obj, "x")?, &ctx)?.to_string();
        let group = group_from_value(req(obj, "group")?, &ctx)?;
        let compact = if let Some(y) = obj.get("y") {
            let y = as_str(y, &ctx)?.to_string();
            let alpha = as_u16_array(req(obj, "alpha")?, &ctx)?;
            let t_x = as_usize(req(obj, "t_x")?, &ctx)? as u16;
            let t_y = as_usize(req(obj, "t_y")?, &ctx)? as u16;
            let d_eps = as_usize(req(obj, "d")?, &ctx)? as u64;
            let mut normals = Vec::new();
            for (k, p) in as_array(req(obj, "normals")?, &ctx)?.iter().enumerate() {
                let pctx = format!("{} normal {}", ctx, k);
                let p = as_obj(p, &pctx)?;
                normals.push(NormalPair {
                    at_x: as_str(req(p, "x_edge")?, &pctx)?.to_string(),
                    at_y: as_str(req(p, "y_edge")?, &pctx)?.to_string(),
                    a: parse_rat_str(req(p, "a")?, &pctx)?,
                });
            }
            Some(CompactEdge { y, alpha, t_x, t_y, d_eps, normals })
        } else {
            None
        };
        edges.insert(id.clone(), EdgeData { x, group, compact });
    }

    let mut flags = BTreeMap::new();
    for (key, v) in as_obj(req(root, "flags")?, "flags")? {
        let ctx = format!("flag {}", key);
        let (e, vert) = key
            .split_once('@')
            .ok_or_else(|| GkmError::Parse(format!("{}: key must look like edge@vertex", ctx)))?;
        let obj = as_obj(v, &ctx)?;
        let weight = Weight(parse_rat_array(req(obj, "weight")?, &ctx)?);
        let phi_vals = parse_rat_array(req(obj, "phi")?, &ctx)?;
        let jmap = as_u16_array(req(obj, "j")?, &ctx)?;
        let gv = vertices
            .get(vert)
            .ok_or_else(|| GkmError::Parse(format!("{}: unknown vertex {}", ctx, vert)))?;
        let ge = edges
            .get(e)
            .map(|d| d.group.clone())
            .ok_or_else(|| GkmError::Parse(format!("{}: unknown edge {}", ctx, e)))?;
        let phi = Character::new(gv, phi_vals)
            .map_err(|err| GkmError::Parse(format!("{}: {}", ctx, err)))?;
        let j = GroupHom::new(&ge, gv, jmap)
            .map_err(|err| GkmError::Parse(format!("{}: {}", ctx, err)))?;
        flags.insert((e.to_string(), vert.to_string()), FlagData::new(weight, phi, j));
    }

    let graph = StackyGKMGraph { name, m, r, vertices, edges, flags };

    if let Some(conn) = root.get("connection") {
        for (id, theta) in as_obj(conn, "connection")? {
            let edge = graph
                .edges
                .get(id)
                .ok_or_else(|| GkmError::Parse(format!("connection names unknown edge {}", id)))?;
            let Some(c) = &edge.compact else {
                return Err(GkmError::Parse(format!("connection on noncompact edge {}", id)));
            };
            let theta = as_obj(theta, &format!("connection {}", id))?;
            let from_normals: BTreeMap<&str, &str> =
                c.normals.iter().map(|p| (p.at_x.as_str(), p.at_y.as_str())).collect();
            if theta.len() != from_normals.len() {
                return Err(GkmError::Parse(format!("connection for {} has {} entries, normals list {}", id, theta.len(), from_normals.len())));
            }
            for (ax, ay) in theta {
                let ay = as_str(ay, &format!("connection {}", id))?;
                if from_normals.get(ax.as_str()) != Some(&ay) {
                    return Err(GkmError::Parse(format!("connection for {} maps {} to {}, normals disagree", id, ax, ay)));
                }
            }
        }
    }
    Ok(graph)
}

fn group_value(g: &FiniteGroup) -> Value {
    let n = g.order();
    let table: Vec<Vec<u16>> =
        (0..n as u16).map(|a| (0..n as u16).map(|b| g.mul(a, b)).collect()).collect();
    json!({ "name": g.name, "table": table })
}

fn group_from_value(v: &Value, ctx: &str) -> Result<Arc<FiniteGroup>, GkmError> {
    match v {
        Value::String(s) => named_group(s)
            .ok_or_else(|| GkmError::Parse(format!("{}: unknown group reference '{}'", ctx, s))),
        Value::Object(obj) => {
            let name = as_str(req(obj, "name")?, ctx)?;
            let rows = as_array(req(obj, "table")?, ctx)?;
            let mut table = Vec::with_capacity(rows.len());
            for row in rows {
                let row = as_array(row, ctx)?;
                let mut out = Vec::with_capacity(row.len());
                for x in row {
                    out.push(as_usize(x, ctx)?);
                }
                table.push(out);
            }
            FiniteGroup::from_table(name, &table).map_err(GkmError::Group)
        }
        _ => Err(GkmError::Parse(format!("{}: group must be a name or an inline table", ctx))),
    }
}

fn named_group(s: &str) -> Option<Arc<FiniteGroup>> {
    match s {
        "1" | "trivial" => return Some(FiniteGroup::trivial()),
        "Q8" => return Some(FiniteGroup::quaternion8()),
        "S2" | "S3" | "S4" => return Some(FiniteGroup::symmetric(s[1..].parse().ok()?)),
        _ => {}
    }
    // "Zk" possibly as a product "Z2xZ4".
    let mut parts = Vec::new();
    for part in s.split('x') {
        let k: usize = part.strip_prefix('Z')?.parse().ok()?;
        if k == 0 || k > 1024 {
            return None;
        }
        parts.push(FiniteGroup::cyclic(k));
    }
    let mut iter = parts.into_iter();
    let mut acc = iter.next()?;
    for next in iter {
        acc = FiniteGroup::product(&acc, &next);
    }
    // Product renames as it folds; restore the reference spelling.
    if acc.name != s {
        let table: Vec<Vec<usize>> = (0..acc.order() as u16)
            .map(|a| (0..acc.order() as u16).map(|b| acc.mul(a, b) as usize).collect())
            .collect();
        return FiniteGroup::from_table(s, &table).ok();
    }
    Some(acc)
}

fn req<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, GkmError> {
    obj.get(key).ok_or_else(|| GkmError::Parse(format!("missing field '{}'", key)))
}

fn as_obj<'a>(v: &'a Value, ctx: &str) -> Result<&'a Map<String, Value>, GkmError> {
    v.as_object().ok_or_else(|| GkmError::Parse(format!("{}: expected an object", ctx)))
}

fn as_array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>, GkmError> {
    v.as_array().ok_or_else(|| GkmError::Parse(format!("{}: expected an array", ctx)))
}

fn as_str<'a>(v: &'a Value, ctx: &str) -> Result<&'a str, GkmError> {
    v.as_str().ok_or_else(|| GkmError::Parse(format!("{}: expected a string", ctx)))
}

fn as_usize(v: &Value, ctx: &str) -> Result<usize, GkmError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| GkmError::Parse(format!("{}: expected a nonnegative integer", ctx)))
}

fn as_u16_array(v: &Value, ctx: &str) -> Result<Vec<u16>, GkmError> {
    as_array(v, ctx)?.iter().map(|x| as_usize(x, ctx).map(|n| n as u16)).collect()
}

fn parse_rat_str(v: &Value, ctx: &str) -> Result<Rat, GkmError> {
    let s = as_str(v, ctx)?;
    Rat::from_str(s.trim())
        .map_err(|_| GkmError::Parse(format!("{}: '{}' is not a rational", ctx, s)))
}

fn parse_rat_array(v: &Value, ctx: &str) -> Result<Vec<Rat>, GkmError> {
    as_array(v, ctx)?.iter().map(|x| parse_rat_str(x, ctx)).collect()
}
