//! The Setup construction, adjacency on W?(ρ̄), the weight graph and chains
//! to obvious weights.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::affine_weyl::{w_h, ExtAffineElement, TupleElement, A1, A2, A3};
use crate::error::{invalid, invariant, Error, Result};
use crate::gsp4_base::FiniteWeyl;
use crate::serre_weights::{
    f_rhobar, intersect_w_jh, jh_factors, outer_weight, type_from_target, w_question, ApPair, PresentationKind,
    SerreWeight, TamePresentation,
};

/// The simple reflection s_{i,j}: s_i at embedding j, identity elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimpleLabel {
    pub i: u8,
    pub j: usize,
}

impl SimpleLabel {
    pub fn reflection(self) -> FiniteWeyl {
        if self.i == 1 {
            FiniteWeyl::S1
        } else {
            FiniteWeyl::S2
        }
    }

    pub fn tuple(self, f: usize) -> Vec<FiniteWeyl> {
        (0..f).map(|j| if j == self.j { self.reflection() } else { FiniteWeyl::E }).collect()
    }

    pub fn all(f: usize) -> Vec<SimpleLabel> {
        (0..f).flat_map(|j| [1, 2].map(|i| SimpleLabel { i, j })).collect()
    }
}

impl std::fmt::Display for SimpleLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "s{},{}", self.i, self.j)
    }
}

/// Depth floors applied to the inputs and the derived presentations.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DepthFloors {
    pub rhobar: i64,
    pub tau: i64,
}

impl Default for DepthFloors {
    fn default() -> Self {
        DepthFloors { rhobar: 9, tau: 6 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdjacencyInstance {
    pub pair: ApPair,
    pub s: SimpleLabel,
    pub tau: TamePresentation,
    pub rhobar0: TamePresentation,
    pub sigma1: SerreWeight,
    pub sigma2: SerreWeight,
    pub tau_depth: i64,
    pub rhobar0_depth: i64,
    /// τ and ρ̄₀ both meet the τ floor.
    pub derived_generic: bool,
    /// W?(ρ̄₀) ∩ JH(σ̄(τ)) ⊆ W?(ρ̄) ∩ JH(σ̄(τ)).
    pub inclusion_holds: bool,
}

/// The Setup exclusion: s ≠ s_{2,j} when w̃_{1,j} ∈ Ω and w̃_{1,j} ≠ w̃_j.
pub fn is_valid_choice(pair: &ApPair, s: SimpleLabel) -> bool {
    let j = s.j;
    !(s.i == 2 && pair.w1[j].in_omega() && pair.w1[j] != pair.w2[j])
}

/// w̃⁻¹w̃_h⁻¹w₀ s x per embedding.
fn setup_target(w: &[ExtAffineElement], x: &[ExtAffineElement], s: &[FiniteWeyl]) -> TupleElement {
    let hw0 = w_h().inverse() * ExtAffineElement::finite(FiniteWeyl::W0);
    w.iter().zip(x).zip(s).map(|((&wj, &xj), &sj)| wj.inverse() * hw0 * ExtAffineElement::finite(sj) * xj).collect()
}

pub fn build_instance(
    rhobar: &TamePresentation,
    pair: &ApPair,
    s: SimpleLabel,
    floors: DepthFloors,
) -> Result<AdjacencyInstance> {
    let f = rhobar.f();
    if pair.w1.len() != f || s.j >= f {
        return invalid("pair or reflection does not match the number of embeddings");
    }
    if rhobar.depth() < floors.rhobar {
        return Err(Error::Genericity(format!("ρ̄ has depth {}, the Setup needs {}", rhobar.depth(), floors.rhobar)));
    }
    if !is_valid_choice(pair, s) {
        return invalid(format!("s = {s} is excluded: w̃₁ is in Ω at embedding {} and differs from w̃ there", s.j));
    }
    let st = s.tuple(f);
    let w = &pair.w2;
    let g = setup_target(w, &pair.w1, &st);
    let g0 = setup_target(w, w, &st);
    let tt = type_from_target(rhobar, &g, floors.tau)?;
    let tau = tt.tau;
    let r0: TupleElement = tau.w_tilde().iter().zip(&g0).map(|(&a, &b)| a * b).collect();
    let rhobar0 = TamePresentation::from_element(&r0, rhobar.p, PresentationKind::Parameter)?;
    let wf: Vec<FiniteWeyl> = w.iter().map(|x| x.w).collect();
    let swf: Vec<FiniteWeyl> = wf.iter().zip(&st).map(|(&a, &b)| b * a).collect();
    let sigma1 = outer_weight(&tau, &wf)?;
    let sigma2 = outer_weight(&tau, &swf)?;
    let inter = intersect_w_jh(&rhobar0, &tau)?;
    let expected: BTreeSet<_> = [sigma1.clone(), sigma2.clone()].into_iter().collect();
    if sigma1 == sigma2 || inter != expected {
        return invariant(format!("W?(ρ̄₀) ∩ JH(σ̄(τ)) has {} elements, expected {{σ₁, σ₂}} for {s}", inter.len()));
    }
    let big = intersect_w_jh(rhobar, &tau)?;
    let rhobar0_depth = rhobar0.depth();
    Ok(AdjacencyInstance {
        pair: pair.clone(),
        s,
        tau_depth: tt.depth,
        rhobar0_depth,
        derived_generic: tt.depth >= floors.tau && rhobar0_depth >= floors.tau,
        inclusion_holds: inter.is_subset(&big),
        tau,
        rhobar0,
        sigma1,
        sigma2,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub pair: usize,
    pub s: SimpleLabel,
}

#[derive(Clone, Debug)]
pub struct WeightGraph {
    pub rhobar: TamePresentation,
    pub pairs: Vec<ApPair>,
    /// Vertices with their AP′ labels, sorted by weight.
    pub vertices: Vec<SerreWeight>,
    pub label: HashMap<SerreWeight, usize>,
    pub obvious: BTreeSet<SerreWeight>,
    pub edges: BTreeMap<(SerreWeight, SerreWeight), Vec<Witness>>,
    pub instances: Vec<AdjacencyInstance>,
}

impl WeightGraph {
    pub fn neighbors(&self) -> HashMap<&SerreWeight, Vec<&SerreWeight>> {
        let mut adj: HashMap<&SerreWeight, Vec<&SerreWeight>> = HashMap::new();
        for (a, b) in self.edges.keys() {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let adj = self.neighbors();
        let mut seen: BTreeSet<&SerreWeight> = BTreeSet::new();
        let mut count = 0;
        for v in &self.vertices {
            if seen.insert(v) {
                count += 1;
                let mut queue = VecDeque::from([v]);
                while let Some(u) = queue.pop_front() {
                    for &n in adj.get(u).map(|x| x.as_slice()).unwrap_or(&[]) {
                        if seen.insert(n) {
                            queue.push_back(n);
                        }
                    }
                }
            }
        }
        count
    }

    /// Whether the subgraph on obvious weights, using only (w⋄,w⋄) witnesses, is connected.
    pub fn obvious_subgraph_connected(&self) -> bool {
        let mut adj: HashMap<&SerreWeight, Vec<&SerreWeight>> = HashMap::new();
        for ((a, b), ws) in &self.edges {
            let via_obvious = ws.iter().any(|w| self.pairs[w.pair].w1 == self.pairs[w.pair].w2);
            if via_obvious && self.obvious.contains(a) && self.obvious.contains(b) {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
        }
        let Some(start) = self.obvious.iter().next() else { return true };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &n in adj.get(u).map(|x| x.as_slice()).unwrap_or(&[]) {
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == self.obvious.len()
    }

    pub fn instance_for(&self, pair: usize, s: SimpleLabel) -> Option<&AdjacencyInstance> {
        self.instances.iter().find(|i| i.s == s && i.pair == self.pairs[pair])
    }
}

pub fn build_graph(rhobar: &TamePresentation, floors: DepthFloors) -> Result<WeightGraph> {
    let f = rhobar.f();
    let labelled = w_question(rhobar)?;
    let pairs: Vec<ApPair> = labelled.iter().map(|(p, _)| p.clone()).collect();
    let mut label = HashMap::new();
    for (k, (_, s)) in labelled.iter().enumerate() {
        if label.insert(s.clone(), k).is_some() {
            return invariant(format!("F_ρ̄ is not injective at {s}"));
        }
    }
    let mut vertices: Vec<SerreWeight> = labelled.iter().map(|(_, s)| s.clone()).collect();
    vertices.sort();
    let obvious: BTreeSet<SerreWeight> =
        labelled.iter().filter(|(p, _)| p.w1 == p.w2).map(|(_, s)| s.clone()).collect();
    let jobs: Vec<(usize, SimpleLabel)> = (0..pairs.len())
        .flat_map(|k| SimpleLabel::all(f).into_iter().map(move |s| (k, s)))
        .filter(|&(k, s)| is_valid_choice(&pairs[k], s))
        .collect();
    let instances: Vec<AdjacencyInstance> =
        jobs.par_iter().map(|&(k, s)| build_instance(rhobar, &pairs[k], s, floors)).collect::<Result<_>>()?;
    let mut edges: BTreeMap<(SerreWeight, SerreWeight), Vec<Witness>> = BTreeMap::new();
    for (inst, &(k, s)) in instances.iter().zip(&jobs) {
        for v in [&inst.sigma1, &inst.sigma2] {
            if !label.contains_key(v) {
                return invariant(format!("edge endpoint {v} is not in W?(ρ̄)"));
            }
        }
        let key = if inst.sigma1 < inst.sigma2 {
            (inst.sigma1.clone(), inst.sigma2.clone())
        } else {
            (inst.sigma2.clone(), inst.sigma1.clone())
        };
        edges.entry(key).or_default().push(Witness { pair: k, s });
    }
    Ok(WeightGraph { rhobar: rhobar.clone(), pairs, vertices, label, obvious, edges, instances })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainStep {
    pub from: SerreWeight,
    pub to: SerreWeight,
    pub s: SimpleLabel,
    pub pair: ApPair,
}

/// Shortest path from σ to an obvious weight.
pub fn bfs_chain(graph: &WeightGraph, sigma: &SerreWeight) -> Result<Vec<ChainStep>> {
    if !graph.label.contains_key(sigma) {
        return invalid(format!("{sigma} is not in W?(ρ̄)"));
    }
    let mut prev: HashMap<SerreWeight, (SerreWeight, usize, SimpleLabel)> = HashMap::new();
    let mut adj: HashMap<&SerreWeight, Vec<(&SerreWeight, &Witness)>> = HashMap::new();
    for ((a, b), ws) in &graph.edges {
        adj.entry(a).or_default().push((b, &ws[0]));
        adj.entry(b).or_default().push((a, &ws[0]));
    }
    let mut queue = VecDeque::from([sigma.clone()]);
    let mut seen = BTreeSet::from([sigma.clone()]);
    while let Some(u) = queue.pop_front() {
        if graph.obvious.contains(&u) {
            let mut steps = Vec::new();
            let mut cur = u;
            while let Some((p, k, s)) = prev.get(&cur) {
                steps.push(ChainStep { from: p.clone(), to: cur.clone(), s: *s, pair: graph.pairs[*k].clone() });
                cur = p.clone();
            }
            steps.reverse();
            return Ok(steps);
        }
        for &(n, w) in adj.get(&u).map(|x| x.as_slice()).unwrap_or(&[]) {
            if seen.insert(n.clone()) {
                prev.insert(n.clone(), (u.clone(), w.pair, w.s));
                queue.push_back(n.clone());
            }
        }
    }
    invariant(format!("no path from {sigma} to an obvious weight"))
}

/// The reflection the connectivity argument picks for a non-obvious label.
pub fn steer(pair: &ApPair) -> Option<SimpleLabel> {
    let j = (0..pair.w1.len()).find(|&j| pair.w1[j] != pair.w2[j])?;
    let a = pair.w2[j].alcove();
    let i = if a == A2 || a == A1 {
        1
    } else if a == A3 {
        if pair.w1[j].in_omega() {
            1
        } else {
            2
        }
    } else {
        return None;
    };
    Some(SimpleLabel { i, j })
}

/// The deterministic chain following [`steer`] until an obvious weight is reached.
pub fn steered_chain(graph: &WeightGraph, sigma: &SerreWeight) -> Result<Vec<ChainStep>> {
    let Some(&start) = graph.label.get(sigma) else {
        return invalid(format!("{sigma} is not in W?(ρ̄)"));
    };
    let limit = 3 * graph.rhobar.f() + 1;
    let mut steps = Vec::new();
    let mut k = start;
    let mut cur = sigma.clone();
    while !graph.obvious.contains(&cur) {
        if steps.len() >= limit {
            return invariant(format!("steered chain from {sigma} did not terminate"));
        }
        let pair = &graph.pairs[k];
        let Some(s) = steer(pair) else {
            return invariant(format!("no steering rule applies at {cur}"));
        };
        let inst = build_instance(&graph.rhobar, pair, s, DepthFloors { rhobar: 0, tau: 0 })?;
        let next = if inst.sigma1 == cur {
            inst.sigma2.clone()
        } else if inst.sigma2 == cur {
            inst.sigma1.clone()
        } else {
            return invariant(format!("the Setup at {cur} does not contain it"));
        };
        steps.push(ChainStep { from: cur.clone(), to: next.clone(), s, pair: pair.clone() });
        k = *graph.label.get(&next).ok_or_else(|| Error::Invariant(format!("{next} is not in W?(ρ̄)")))?;
        cur = next;
    }
    Ok(steps)
}

/// σ₁ = F_ρ̄(w̃₁,w̃) for the instance's own label.
pub fn sigma1_is_label(rhobar: &TamePresentation, inst: &AdjacencyInstance) -> Result<bool> {
    Ok(f_rhobar(rhobar, &inst.pair)? == inst.sigma1)
}

/// Both endpoints are outer weights of τ.
pub fn endpoints_outer(inst: &AdjacencyInstance) -> Result<bool> {
    let f = inst.tau.f();
    let outer: BTreeSet<_> =
        crate::serre_weights::weyl_tuples(f).into_iter().map(|w| outer_weight(&inst.tau, &w)).collect::<Result<_>>()?;
    let jh: BTreeSet<_> = jh_factors(&inst.tau)?.into_iter().map(|(_, s)| s).collect();
    Ok(outer.contains(&inst.sigma1) && outer.contains(&inst.sigma2) && outer.is_subset(&jh))
}
