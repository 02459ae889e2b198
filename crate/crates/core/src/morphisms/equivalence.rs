use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::category::FiniteCategory;
use crate::groupoid::FiniteGroupoid;

use super::hom::{hom_counts, validate_hom, GroupoidHom};
use super::iso::{groups_isomorphic, GroupIso};
use super::MorphismError;

/// Why a homomorphism fails to be an equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivalenceFailure {
    /// No object in the image is connected to this target object.
    NotEssentiallySurjective { object: String },
    /// `H(y, z) -> G(φy, φz)` is not a bijection.
    HomSetNotBijective {
        from: String,
        to: String,
        source_size: usize,
        image_size: usize,
        target_size: usize,
    },
}

impl std::fmt::Display for EquivalenceFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EquivalenceFailure::NotEssentiallySurjective { object } => {
                write!(f, "object {object} is not connected to the image")
            }
            EquivalenceFailure::HomSetNotBijective {
                from,
                to,
                source_size,
                image_size,
                target_size,
            } => write!(
                f,
                "H({from},{to}) has {source_size} arrows, {image_size} distinct images, target hom-set has {target_size}"
            ),
        }
    }
}

/// Essentially surjective on objects and bijective on every hom-set.
pub fn is_equivalence(phi: &GroupoidHom) -> Result<Result<(), EquivalenceFailure>, MorphismError> {
    let report = validate_hom(phi);
    if !report.is_valid() {
        return Err(MorphismError::InvalidHom(report.to_string()));
    }
    let (h, g) = (&**phi.source(), &**phi.target());
    // (i): every object of G is reached by an arrow from the image
    let labels = g.orbit_labels();
    let reached: HashSet<usize> = phi.obj_map().iter().map(|&x| labels[x]).collect();
    if let Some(x) = (0..g.num_objects()).find(|&x| !reached.contains(&labels[x])) {
        return Ok(Err(EquivalenceFailure::NotEssentiallySurjective {
            object: g.object_name(x).to_string(),
        }));
    }
    // (ii): H(y,z) -> G(φy,φz) bijective for every pair
    let target_counts = hom_counts(g);
    let mut images: HashMap<(usize, usize), (usize, HashSet<usize>)> = HashMap::new();
    for a in 0..h.num_arrows() {
        let e = images.entry((h.src(a), h.tgt(a))).or_default();
        e.0 += 1;
        e.1.insert(phi.arr(a));
    }
    for y in 0..h.num_objects() {
        for z in 0..h.num_objects() {
            let (source_size, image_size) = images
                .get(&(y, z))
                .map(|(n, s)| (*n, s.len()))
                .unwrap_or((0, 0));
            let target_size = target_counts
                .get(&(phi.obj(y), phi.obj(z)))
                .copied()
                .unwrap_or(0);
            if source_size != image_size || image_size != target_size {
                return Ok(Err(EquivalenceFailure::HomSetNotBijective {
                    from: h.object_name(y).to_string(),
                    to: h.object_name(z).to_string(),
                    source_size,
                    image_size,
                    target_size,
                }));
            }
        }
    }
    Ok(Ok(()))
}

/// One object per orbit (the least one), the full subgroupoid on them,
/// and its inclusion into `g`.
pub fn skeleton(g: &Arc<FiniteGroupoid>) -> (Arc<FiniteGroupoid>, GroupoidHom) {
    let reps: Vec<usize> = g.orbits().iter().map(|o| o[0]).collect();
    let sk = Arc::new(g.restrict(&reps).expect("orbit representatives"));
    let obj_map = reps.clone();
    let arr_map = (0..sk.num_arrows())
        .map(|a| g.arrow_index(sk.arrow_name(a)).expect("restricted arrow"))
        .collect();
    let inclusion = GroupoidHom::new(sk.clone(), g.clone(), obj_map, arr_map).expect("inclusion");
    (sk, inclusion)
}

/// Orbit representatives of two Morita equivalent groupoids matched with
/// an isomorphism between their isotropy groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitMatch {
    pub left: String,
    pub right: String,
    pub iso: GroupIso,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoritaVerdict {
    Equivalent(Vec<OrbitMatch>),
    /// First obstruction found.
    NotEquivalent(String),
}

impl MoritaVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, MoritaVerdict::Equivalent(_))
    }
}

/// Decides Morita equivalence by comparing orbit-indexed isotropy types:
/// a finite groupoid is equivalent to the disjoint sum of its isotropy
/// groups, one per orbit.
pub fn morita_equivalent(g: &FiniteGroupoid, h: &FiniteGroupoid) -> MoritaVerdict {
    let (go, ho) = (g.orbits(), h.orbits());
    if go.len() != ho.len() {
        return MoritaVerdict::NotEquivalent(format!(
            "orbit counts differ: {} vs {}",
            go.len(),
            ho.len()
        ));
    }
    let iso_left: Vec<_> = go.iter().map(|o| g.isotropy(o[0]).expect("valid groupoid")).collect();
    let iso_right: Vec<_> = ho.iter().map(|o| h.isotropy(o[0]).expect("valid groupoid")).collect();
    let mut used = vec![false; ho.len()];
    let mut matches = Vec::with_capacity(go.len());
    // isomorphism is an equivalence relation, so greedy matching suffices
    for (i, a) in iso_left.iter().enumerate() {
        let found = (0..ho.len())
            .filter(|&j| !used[j] && iso_right[j].order() == a.order())
            .find_map(|j| groups_isomorphic(a, &iso_right[j]).map(|iso| (j, iso)));
        match found {
            Some((j, iso)) => {
                used[j] = true;
                matches.push(OrbitMatch {
                    left: g.object_name(go[i][0]).to_string(),
                    right: h.object_name(ho[j][0]).to_string(),
                    iso,
                });
            }
            None => {
                return MoritaVerdict::NotEquivalent(format!(
                    "no orbit of the second groupoid has isotropy isomorphic to that at {} (order {})",
                    g.object_name(go[i][0]),
                    a.order()
                ))
            }
        }
    }
    MoritaVerdict::Equivalent(matches)
}

/// The groupoid `H_𝒰` of a covering family of object subsets, with the
/// map `ε: H_𝒰 -> H` forgetting the index. Object `(x, i)` is named
/// `x@i`; arrow `g: x -> y` between `(x, i)` and `(y, j)` is `g@i>j`.
pub fn cover_groupoid(
    h: &Arc<FiniteGroupoid>,
    cover: &[Vec<usize>],
) -> Result<(Arc<FiniteGroupoid>, GroupoidHom), MorphismError> {
    let n = h.num_objects();
    let mut covered = vec![false; n];
    for u in cover {
        for &x in u {
            if x >= n {
                return Err(MorphismError::UnknownObject(x.to_string()));
            }
            covered[x] = true;
        }
    }
    if let Some(x) = covered.iter().position(|&c| !c) {
        return Err(MorphismError::NotCovering(h.object_name(x).to_string()));
    }
    let mut objects = Vec::new();
    let mut obj_map = Vec::new();
    let mut obj_cover = Vec::new();
    let mut obj_id: HashMap<(usize, usize), usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, u) in cover.iter().enumerate() {
        let mut u = u.clone();
        u.sort_unstable();
        u.dedup();
        for x in u {
            obj_id.insert((x, i), objects.len());
            members[x].push(i);
            objects.push(format!("{}@{}", h.object_name(x), i));
            obj_map.push(x);
            obj_cover.push(i);
        }
    }
    let mut arrows = Vec::new();
    let (mut src, mut tgt, mut arr_map) = (Vec::new(), Vec::new(), Vec::new());
    let mut arr_id: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for g in 0..h.num_arrows() {
        for &i in &members[h.src(g)] {
            for &j in &members[h.tgt(g)] {
                arr_id.insert((g, i, j), arrows.len());
                arrows.push(format!("{}@{}>{}", h.arrow_name(g), i, j));
                src.push(obj_id[&(h.src(g), i)]);
                tgt.push(obj_id[&(h.tgt(g), j)]);
                arr_map.push(g);
            }
        }
    }
    let mut compose = HashMap::new();
    for (&(g, i, j), &a) in &arr_id {
        for &f in h.outgoing(h.tgt(g)) {
            for &k in &members[h.tgt(f)] {
                let b = arr_id[&(f, j, k)];
                compose.insert((b, a), arr_id[&(h.comp(f, g), i, k)]);
            }
        }
    }
    let unit = (0..objects.len())
        .map(|o| arr_id[&(h.unit(obj_map[o]), obj_cover[o], obj_cover[o])])
        .collect();
    let inv = (0..arrows.len())
        .map(|a| {
            let (i, j) = (obj_cover[src[a]], obj_cover[tgt[a]]);
            arr_id[&(h.inv(arr_map[a]), j, i)]
        })
        .collect();
    let cat = FiniteCategory::from_parts(objects, arrows, src, tgt, unit, compose)
        .map_err(|e| MorphismError::Construction(e.to_string()))?;
    let hu = Arc::new(
        FiniteGroupoid::from_parts(cat, inv).map_err(|e| MorphismError::Construction(e.to_string()))?,
    );
    let eps = GroupoidHom::new(hu.clone(), h.clone(), obj_map, arr_map)
        .map_err(|e| MorphismError::Construction(e.to_string()))?;
    Ok((hu, eps))
}
