//! Finite truncations of Auslander–Reiten quivers of CM modules over a cusp
//! and over `T_pq` curves, plus DOT and structured graph export.
//!
//! Over a cusp every non-free indecomposable lies in a homogeneous tube
//! `T(d, λ)` with `τ = id`; the special tube `T(B, 1)` also carries the free
//! module `A`. Over `T_pq`, tubes of σ-symmetric `d` with `λ = ±1` have
//! period 2 and `τ` swaps the branches `N_1`, `N_2`; `A'` sits in the middle
//! term of the sequence starting at `N_2(B, 1, 1)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::cohomology::{kahn_condition, BundleTriple, CuspGeometry};
use crate::cusp::{classify_label, enumerate_rank, CmKind, CmModuleLabel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequences::SSeq;
use crate::tpq::{descend, iso_class, Branch, TpqGeometry, TpqKind, TpqModuleLabel};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum NodeLabel {
    Cusp(CmModuleLabel),
    Tpq(TpqModuleLabel),
}

impl NodeLabel {
    pub fn is_free(&self) -> bool {
        match self {
            NodeLabel::Cusp(l) => l.is_free(),
            NodeLabel::Tpq(l) => l.is_free(),
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            NodeLabel::Cusp(l) => match l.kind() {
                CmKind::Free => "free",
                CmKind::Param(_) => "param",
            },
            NodeLabel::Tpq(l) => match l.kind {
                TpqKind::FreeCurve => "free_curve",
                TpqKind::Single { .. } => "single",
                TpqKind::Split { .. } => "split",
            },
        }
    }

    fn name(&self) -> String {
        match self {
            NodeLabel::Cusp(l) => l.to_string(),
            NodeLabel::Tpq(l) => l.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverNode {
    /// Canonical label serialization, unique within a quiver.
    pub id: String,
    pub label: NodeLabel,
    pub rank: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arrow {
    pub src: usize,
    pub dst: usize,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tube {
    pub id: usize,
    pub name: String,
    pub period: u8,
    pub members: Vec<usize>,
}

/// Arrow counts at the free module for hypersurfaces of higher dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ArrowMultiplicity {
    pub at_free: u64,
    pub per_arrow_added: u64,
}

/// `n` even: the tube of the free module starts with `2^{n/2}` arrows (half
/// in, half out). `n` odd: `2^{⌊(n-1)/2⌋}` arrows of alternating direction are
/// added to each arrow at the free module.
///
/// `n` is passed through as given; callers working with a hypersurface in
/// `k + 3` variables decide whether that is `k + 2` or `k + 3`.
pub fn arrow_multiplicity(n: u32) -> Result<ArrowMultiplicity> {
    if n < 1 {
        return Err(Error::NonPositive { what: "dimension" });
    }
    Ok(if n.is_multiple_of(2) {
        ArrowMultiplicity {
            at_free: 1u64 << (n / 2),
            per_arrow_added: 0,
        }
    } else {
        ArrowMultiplicity {
            at_free: 2,
            per_arrow_added: 1u64 << ((n - 1) / 2),
        }
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ARQuiver {
    pub nodes: Vec<QuiverNode>,
    pub arrows: Vec<Arrow>,
    pub tubes: Vec<Tube>,
    /// `(X, τX)` pairs; the free module is never in the domain.
    pub translate: Vec<(usize, usize)>,
    /// `(n, multiplicities)` when the quiver is read for a hypersurface of dimension `n`.
    pub decoration: Option<(u32, ArrowMultiplicity)>,
    index: BTreeMap<String, usize>,
}

impl ARQuiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    fn add_node(&mut self, label: NodeLabel, rank: Option<u64>) -> usize {
        let id = label.name();
        if let Some(&i) = self.index.get(&id) {
            return i;
        }
        let i = self.nodes.len();
        self.index.insert(id.clone(), i);
        self.nodes.push(QuiverNode { id, label, rank });
        i
    }

    fn add_arrow(&mut self, src: usize, dst: usize) {
        self.arrows.push(Arrow { src, dst, mult: 1 });
    }

    fn add_tube(&mut self, name: String, period: u8, members: Vec<usize>) {
        let id = self.tubes.len();
        self.tubes.push(Tube {
            id,
            name,
            period,
            members,
        });
    }

    fn has_tube(&self, name: &str) -> bool {
        self.tubes.iter().any(|t| t.name == name)
    }

    /// Appends the tubes of `other`, renumbering nodes and tube ids.
    pub fn merge(&mut self, other: ARQuiver) {
        let map: Vec<usize> = other
            .nodes
            .into_iter()
            .map(|n| self.add_node(n.label, n.rank))
            .collect();
        for a in other.arrows {
            self.arrows.push(Arrow {
                src: map[a.src],
                dst: map[a.dst],
                mult: a.mult,
            });
        }
        for t in other.tubes {
            let members = t.members.iter().map(|&m| map[m]).collect();
            self.add_tube(t.name, t.period, members);
        }
        for (a, b) in other.translate {
            self.translate.push((map[a], map[b]));
        }
        if self.decoration.is_none() {
            self.decoration = other.decoration;
        }
    }

    pub fn decorate(&mut self, n: u32) -> Result<()> {
        self.decoration = Some((n, arrow_multiplicity(n)?));
        Ok(())
    }

    pub fn tube_of(&self, node: usize) -> Vec<usize> {
        self.tubes
            .iter()
            .filter(|t| t.members.contains(&node))
            .map(|t| t.id)
            .collect()
    }

    pub fn translate_of(&self, node: usize) -> Option<usize> {
        self.translate
            .iter()
            .find(|(a, _)| *a == node)
            .map(|(_, b)| *b)
    }

    /// Checks the structural invariants: tube partition, τ on each tube kind,
    /// free module outside the τ domain and in at most one tube.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for (i, node) in self.nodes.iter().enumerate() {
            let tubes = self.tube_of(i);
            if node.label.is_free() {
                if tubes.len() > 1 {
                    return Err(format!("free node {} in {} tubes", node.id, tubes.len()));
                }
                if self.translate_of(i).is_some() {
                    return Err(format!("free node {} has a translate", node.id));
                }
                continue;
            }
            if tubes.len() != 1 {
                return Err(format!("node {} in {} tubes", node.id, tubes.len()));
            }
            let tube = &self.tubes[tubes[0]];
            let Some(t) = self.translate_of(i) else {
                return Err(format!("node {} has no translate", node.id));
            };
            match tube.period {
                1 if t != i => return Err(format!("tau moves {} in a homogeneous tube", node.id)),
                2 if t == i || self.translate_of(t) != Some(i) => {
                    return Err(format!("tau is not a column swap at {}", node.id))
                }
                1 | 2 => {}
                p => return Err(format!("unsupported period {p}")),
            }
        }
        Ok(())
    }

    pub fn export(&self) -> GraphExport {
        let id = |i: usize| self.nodes[i].id.clone();
        GraphExport {
            nodes: self
                .nodes
                .iter()
                .map(|n| ExportNode {
                    id: n.id.clone(),
                    kind: n.label.kind_name(),
                    rank: n.rank,
                })
                .collect(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ExportArrow {
                    src: id(a.src),
                    dst: id(a.dst),
                    mult: a.mult,
                })
                .collect(),
            tubes: self
                .tubes
                .iter()
                .map(|t| ExportTube {
                    id: t.id,
                    name: t.name.clone(),
                    period: t.period,
                    members: t.members.iter().map(|&m| id(m)).collect(),
                })
                .collect(),
            translate: self
                .translate
                .iter()
                .map(|&(a, b)| ExportTranslate {
                    from: id(a),
                    to: id(b),
                })
                .collect(),
            decoration: self.decoration.map(|(n, mult)| ExportDecoration {
                n,
                at_free: mult.at_free,
                per_arrow_added: mult.per_arrow_added,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphExport {
    pub nodes: Vec<ExportNode>,
    pub arrows: Vec<ExportArrow>,
    pub tubes: Vec<ExportTube>,
    pub translate: Vec<ExportTranslate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decoration: Option<ExportDecoration>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExportNode {
    pub id: String,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExportArrow {
    pub src: String,
    pub dst: String,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExportTube {
    pub id: usize,
    pub name: String,
    pub period: u8,
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExportTranslate {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExportDecoration {
    pub n: u32,
    pub at_free: u64,
    pub per_arrow_added: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArSequence {
    pub left: CmModuleLabel,
    pub middle: Vec<CmModuleLabel>,
    pub right: CmModuleLabel,
}

fn is_special(geom: &CuspGeometry, seq: &SSeq, lambda: Scalar) -> bool {
    lambda.is_one() && seq.canonical_form() == geom.b_sequence()
}

/// The AR sequence `0 → M → E → M → 0` ending at a non-free indecomposable.
pub fn ar_sequence(geom: &CuspGeometry, label: &CmModuleLabel) -> Result<ArSequence> {
    if label.geometry() != geom {
        return Err(Error::GeometryMismatch);
    }
    let t = match label.kind() {
        CmKind::Free => return Err(Error::FreeModule),
        CmKind::Param(t) => t,
    };
    let at = |m: u32| classify_label(&t.with_m(m)?, geom);
    let middle = if t.m() == 1 {
        if is_special(geom, t.seq(), t.lambda()) {
            vec![CmModuleLabel::free(geom), at(2)?]
        } else {
            vec![at(2)?]
        }
    } else {
        vec![at(t.m() + 1)?, at(t.m() - 1)?]
    };
    Ok(ArSequence {
        left: label.clone(),
        middle,
        right: label.clone(),
    })
}

fn cusp_tube_name(seq: &SSeq, lambda: Scalar) -> String {
    format!("T({seq},{lambda})")
}

/// The tube `T(d, λ)` truncated at `m ≤ depth`.
pub fn build_tube(geom: &CuspGeometry, seq: &SSeq, lambda: Scalar, depth: u32) -> Result<ARQuiver> {
    if depth == 0 {
        return Err(Error::NonPositive { what: "depth" });
    }
    let base = BundleTriple::new(seq.clone(), 1, lambda)?;
    if !kahn_condition(&base) {
        return Err(Error::KahnViolation(base.to_string()));
    }
    let mut q = ARQuiver::new();
    let mut members = Vec::new();
    if is_special(geom, base.seq(), lambda) {
        let free = CmModuleLabel::free(geom);
        members.push(q.add_node(NodeLabel::Cusp(free), Some(1)));
    }
    let mut levels = Vec::new();
    for m in 1..=depth {
        let label = classify_label(&base.with_m(m)?, geom)?;
        let rank = label.rank();
        let i = q.add_node(NodeLabel::Cusp(label), Some(rank));
        q.translate.push((i, i));
        levels.push(i);
    }
    if let Some(&free) = members.first() {
        q.add_arrow(free, levels[0]);
        q.add_arrow(levels[0], free);
    }
    for w in levels.windows(2) {
        q.add_arrow(w[0], w[1]);
        q.add_arrow(w[1], w[0]);
    }
    members.extend(levels);
    q.add_tube(cusp_tube_name(base.seq(), lambda), 1, members);
    Ok(q)
}

/// `(d, λ)` with `M(d, 1, λ)` of rank at most `max_rank`, `λ ∈ lambdas`,
/// ordered by (rank, d, λ).
pub fn tube_bases(
    geom: &CuspGeometry,
    max_rank: u64,
    lambdas: &[Scalar],
) -> Result<Vec<(u64, SSeq, Scalar)>> {
    let mut lambdas = lambdas.to_vec();
    lambdas.sort();
    lambdas.dedup();
    let mut out = Vec::new();
    for r in 1..=max_rank {
        let e = enumerate_rank(geom, r)?;
        for fam in e.families.iter().filter(|f| f.m == 1) {
            for &l in lambdas.iter().filter(|&&l| fam.base.contains(l)) {
                out.push((r, fam.seq.clone(), l));
            }
        }
        for ex in &e.exceptional {
            let t = ex.triple().expect("exceptional modules are parametrized");
            if t.m() == 1 && lambdas.iter().any(|l| l.is_one()) {
                out.push((r, t.seq().clone(), t.lambda()));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// All cusp tubes with base rank at most `max_rank` and `λ ∈ lambdas`.
pub fn cusp_quiver(
    geom: &CuspGeometry,
    max_rank: u64,
    depth: u32,
    lambdas: &[Scalar],
) -> Result<ARQuiver> {
    let mut q = ARQuiver::new();
    for (_, seq, l) in tube_bases(geom, max_rank, lambdas)? {
        q.merge(build_tube(geom, &seq, l, depth)?);
    }
    Ok(q)
}

fn tpq_node(label: TpqModuleLabel) -> NodeLabel {
    NodeLabel::Tpq(label)
}

/// Adds the tube of `T_pq` modules lying over the cusp tube `T(d, λ)` unless
/// an isomorphic tube is already present.
fn add_tpq_tube(
    q: &mut ARQuiver,
    geom: &TpqGeometry,
    seq: &SSeq,
    lambda: Scalar,
    depth: u32,
) -> Result<()> {
    let base = classify_label(&BundleTriple::new(seq.clone(), 1, lambda)?, &geom.cusp)?;
    let images = descend(geom, &base)?;
    match &images[0].kind {
        TpqKind::Single { .. } => {
            let rep = iso_class(geom, &images[0])?;
            let TpqKind::Single { seq, lambda, .. } = &rep.kind else {
                unreachable!("iso class of a single label is single")
            };
            let name = format!("T~({seq},{lambda})");
            if q.has_tube(&name) {
                return Ok(());
            }
            let mut levels = Vec::new();
            for m in 1..=depth {
                let label = TpqModuleLabel {
                    p: geom.p,
                    q: geom.q,
                    kind: TpqKind::Single {
                        seq: seq.clone(),
                        m,
                        lambda: *lambda,
                    },
                };
                let i = q.add_node(tpq_node(label), None);
                q.translate.push((i, i));
                levels.push(i);
            }
            for w in levels.windows(2) {
                q.add_arrow(w[0], w[1]);
                q.add_arrow(w[1], w[0]);
            }
            q.add_tube(name, 1, levels);
        }
        TpqKind::Split { seq, sign, .. } => {
            let name = format!("T~({seq},{sign})");
            if q.has_tube(&name) {
                return Ok(());
            }
            let at = |m: u32, branch: Branch| TpqModuleLabel {
                p: geom.p,
                q: geom.q,
                kind: TpqKind::Split {
                    seq: seq.clone(),
                    m,
                    sign: *sign,
                    branch,
                },
            };
            let mut members = Vec::new();
            let special = sign.scalar().is_one() && *seq == geom.cusp.b_sequence();
            let free = special.then(|| q.add_node(tpq_node(TpqModuleLabel::free(geom)), None));
            members.extend(free);
            let mut cols: Vec<[usize; 2]> = Vec::new();
            for m in 1..=depth {
                let one = q.add_node(tpq_node(at(m, Branch::One)), None);
                let two = q.add_node(tpq_node(at(m, Branch::Two)), None);
                q.translate.push((one, two));
                q.translate.push((two, one));
                cols.push([one, two]);
                members.extend([one, two]);
            }
            if let Some(free) = free {
                // middle term of the sequence starting at N_2(B,1,1)
                q.add_arrow(cols[0][1], free);
                q.add_arrow(free, cols[0][0]);
            }
            for w in cols.windows(2) {
                for b in 0..2 {
                    // N_i(m) -> N_i(m+1) -> N_{3-i}(m)
                    q.add_arrow(w[0][b], w[1][b]);
                    q.add_arrow(w[1][b], w[0][1 - b]);
                }
            }
            q.add_tube(name, 2, members);
        }
        TpqKind::FreeCurve => unreachable!("tube bases are never free"),
    }
    Ok(())
}

/// AR quiver of the `T_pq` curve over the cusp tube bases of rank at most
/// `max_rank` with `λ ∈ lambdas`, each tube truncated at `m ≤ depth`.
pub fn tpq_quiver(
    geom: &TpqGeometry,
    max_rank: u64,
    depth: u32,
    lambdas: &[Scalar],
) -> Result<ARQuiver> {
    if depth == 0 {
        return Err(Error::NonPositive { what: "depth" });
    }
    let mut q = ARQuiver::new();
    for (_, seq, l) in tube_bases(&geom.cusp, max_rank, lambdas)? {
        add_tpq_tube(&mut q, geom, &seq, l, depth)?;
    }
    Ok(q)
}

/// The special period-2 tube `T~(B, 1)` enlarged by `A'`.
pub fn tpq_special_tube(geom: &TpqGeometry, depth: u32) -> Result<ARQuiver> {
    if depth == 0 {
        return Err(Error::NonPositive { what: "depth" });
    }
    let mut q = ARQuiver::new();
    add_tpq_tube(&mut q, geom, &geom.cusp.b_sequence(), Scalar::one(), depth)?;
    Ok(q)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph, one cluster per tube, multiplicities as edge labels.
pub fn export_dot(quiver: &ARQuiver) -> String {
    let mut out = String::new();
    out.push_str("digraph ar_quiver {\n");
    out.push_str("  rankdir=LR;\n  node [shape=box];\n");
    if let Some((n, mult)) = quiver.decoration {
        let _ = writeln!(
            out,
            "  // dimension {n}: arrows at free module {}, added per arrow {}",
            mult.at_free, mult.per_arrow_added
        );
    }
    let node_line = |out: &mut String, indent: &str, i: usize| {
        let n = &quiver.nodes[i];
        let id = dot_escape(&n.id);
        let _ = match n.rank {
            Some(r) => writeln!(out, "{indent}\"{id}\" [label=\"{id}\\nrank {r}\"];"),
            None => writeln!(out, "{indent}\"{id}\";"),
        };
    };
    let mut placed = vec![false; quiver.nodes.len()];
    for tube in &quiver.tubes {
        let _ = writeln!(out, "  subgraph cluster_{} {{", tube.id);
        let _ = writeln!(
            out,
            "    label=\"{} period {}\";",
            dot_escape(&tube.name),
            tube.period
        );
        for &m in &tube.members {
            if !placed[m] {
                placed[m] = true;
                node_line(&mut out, "    ", m);
            }
        }
        out.push_str("  }\n");
    }
    for i in (0..quiver.nodes.len()).filter(|&i| !placed[i]) {
        node_line(&mut out, "  ", i);
    }
    for a in &quiver.arrows {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            dot_escape(&quiver.nodes[a.src].id),
            dot_escape(&quiver.nodes[a.dst].id),
            a.mult
        );
    }
    out.push_str("}\n");
    out
}
