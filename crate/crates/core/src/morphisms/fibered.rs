use std::collections::HashMap;
use std::sync::Arc;

use crate::category::FiniteCategory;
use crate::groupoid::FiniteGroupoid;

use super::hom::{validate_hom, GroupoidHom, NatTrans};
use super::MorphismError;

/// `H ×_G K` with its projections and the transformation
/// `φ∘π₁ ⇒ ψ∘π₂` whose component at `(y, g, z)` is `g`.
#[derive(Debug, Clone)]
pub struct FiberedProduct {
    pub groupoid: Arc<FiniteGroupoid>,
    pub pi1: GroupoidHom,
    pub pi2: GroupoidHom,
    pub square: NatTrans,
}

/// Objects are triples `(y, g, z)` with `g: φ(y) -> ψ(z)`, named
/// `[y,g,z]`; arrows `(h, k): (y, g, z) -> (y', g', z')` satisfy
/// `g'φ(h) = ψ(k)g` and are named `[h,k]:[y,g,z]`.
pub fn fibered_product(phi: &GroupoidHom, psi: &GroupoidHom) -> Result<FiberedProduct, MorphismError> {
    if *phi.target() != *psi.target() {
        return Err(MorphismError::MismatchedTargets);
    }
    for f in [phi, psi] {
        let report = validate_hom(f);
        if !report.is_valid() {
            return Err(MorphismError::InvalidHom(report.to_string()));
        }
    }
    let (h, k, g) = (&**phi.source(), &**psi.source(), &**phi.target());
    let mut triples = Vec::new();
    let mut triple_id = HashMap::new();
    for y in 0..h.num_objects() {
        for z in 0..k.num_objects() {
            for a in g.hom(phi.obj(y), psi.obj(z)) {
                triple_id.insert((y, a, z), triples.len());
                triples.push((y, a, z));
            }
        }
    }
    let objects: Vec<String> = triples
        .iter()
        .map(|&(y, a, z)| format!("[{},{},{}]", h.object_name(y), g.arrow_name(a), k.object_name(z)))
        .collect();
    let mut arrows = Vec::new();
    let (mut src, mut tgt) = (Vec::new(), Vec::new());
    let (mut proj1, mut proj2) = (Vec::new(), Vec::new());
    let mut arrow_id = HashMap::new();
    for (o, &(y, a, z)) in triples.iter().enumerate() {
        for &p in h.outgoing(y) {
            for &q in k.outgoing(z) {
                // g' = ψ(q) g φ(p)^{-1}
                let a2 = g.comp(g.comp(psi.arr(q), a), g.inv(phi.arr(p)));
                let t = triple_id[&(h.tgt(p), a2, k.tgt(q))];
                arrow_id.insert((o, p, q), arrows.len());
                arrows.push(format!("[{},{}]:{}", h.arrow_name(p), k.arrow_name(q), objects[o]));
                src.push(o);
                tgt.push(t);
                proj1.push(p);
                proj2.push(q);
            }
        }
    }
    let mut compose = HashMap::new();
    for (&(o, p, q), &first) in &arrow_id {
        let mid = tgt[first];
        let (y2, _, z2) = triples[mid];
        for &p2 in h.outgoing(y2) {
            for &q2 in k.outgoing(z2) {
                let second = arrow_id[&(mid, p2, q2)];
                compose.insert((second, first), arrow_id[&(o, h.comp(p2, p), k.comp(q2, q))]);
            }
        }
    }
    let unit = triples
        .iter()
        .enumerate()
        .map(|(o, &(y, _, z))| arrow_id[&(o, h.unit(y), k.unit(z))])
        .collect();
    let inv = (0..arrows.len())
        .map(|a| arrow_id[&(tgt[a], h.inv(proj1[a]), k.inv(proj2[a]))])
        .collect();
    let obj1 = triples.iter().map(|t| t.0).collect();
    let obj2 = triples.iter().map(|t| t.2).collect();
    let components = triples.iter().map(|t| t.1).collect();
    let build = |e: crate::category::StructureError| MorphismError::Construction(e.to_string());
    let cat = FiniteCategory::from_parts(objects, arrows, src, tgt, unit, compose).map_err(build)?;
    let fp = Arc::new(FiniteGroupoid::from_parts(cat, inv).map_err(build)?);
    let pi1 = GroupoidHom::new(fp.clone(), phi.source().clone(), obj1, proj1).map_err(build)?;
    let pi2 = GroupoidHom::new(fp.clone(), psi.source().clone(), obj2, proj2).map_err(build)?;
    let square = NatTrans::new(pi1.then(phi).map_err(build)?, pi2.then(psi).map_err(build)?, components)
        .map_err(build)?;
    Ok(FiberedProduct {
        groupoid: fp,
        pi1,
        pi2,
        square,
    })
}
