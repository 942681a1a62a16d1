//! Prime graphs, their components and cocliques, and the n-value formulas
//! of the simple classical groups with disconnected prime graph.

mod table1;

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intarith::{abs_nat, factor_nat};
use crate::polyring::cyclotomic_value;
use crate::specgen::{Family, SpectrumGenerators};

pub use table1::{linear_prime_plus_one_printed, n_value, NParams, Table1Row};

/// Vertices are primes; r ~ s iff rs divides some spectrum generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeGraph {
    vertices: Vec<BigUint>,
    adj: Vec<Vec<bool>>,
}

impl PrimeGraph {
    pub fn from_edges(vertices: Vec<BigUint>, edges: &[(usize, usize)]) -> Self {
        let n = vertices.len();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a != b {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
        PrimeGraph { vertices, adj }
    }

    pub fn vertices(&self) -> &[BigUint] {
        &self.vertices
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn index_of(&self, p: &BigUint) -> Option<usize> {
        self.vertices.binary_search(p).ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.iter().filter(|&&x| x).count()).sum::<usize>() / 2
    }
}

/// Primes dividing the group order, via the cyclotomic factors of q^i − ε^i.
fn candidate_primes(s: &SpectrumGenerators) -> BTreeSet<BigUint> {
    let g = &s.group;
    if g.family != Family::LinearUnitary {
        return s.generators().iter().flat_map(|x| factor_nat(x).primes().cloned().collect::<Vec<_>>()).collect();
    }
    let x = BigInt::from(g.q().clone()) * BigInt::from(g.sign.value());
    let mut out: BTreeSet<BigUint> = BTreeSet::new();
    out.insert(g.field.p.clone());
    for j in 1..=g.dim {
        let v = abs_nat(&cyclotomic_value(j, &x));
        if !v.is_zero() {
            out.extend(factor_nat(&v).primes().cloned());
        }
    }
    out
}

pub fn build_prime_graph(s: &SpectrumGenerators) -> PrimeGraph {
    let vertices: Vec<BigUint> = candidate_primes(s)
        .into_iter()
        .filter(|p| s.generators().iter().any(|g| (g % p).is_zero()))
        .collect();
    let n = vertices.len();
    let mut adj = vec![vec![false; n]; n];
    for g in s.generators() {
        let support: Vec<usize> = (0..n).filter(|&i| (g % &vertices[i]).is_zero()).collect();
        for (k, &a) in support.iter().enumerate() {
            for &b in &support[k + 1..] {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
    }
    PrimeGraph { vertices, adj }
}

/// Connected components, each sorted; the component of 2 first, the rest by least prime.
pub fn components(g: &PrimeGraph) -> Vec<Vec<BigUint>> {
    let n = g.vertices.len();
    let mut uf = UnionFind::<usize>::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if g.adj[a][b] {
                uf.union(a, b);
            }
        }
    }
    let labels = uf.into_labeling();
    let mut comps: Vec<Vec<BigUint>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        match seen.iter().position(|&x| x == l) {
            Some(k) => comps[k].push(g.vertices[i].clone()),
            None => {
                seen.push(l);
                comps.push(vec![g.vertices[i].clone()]);
            }
        }
    }
    let two = BigUint::from(2u32);
    comps.sort_by(|a, b| (!a.contains(&two), &a[0]).cmp(&(!b.contains(&two), &b[0])));
    comps
}

/// Exact maximum coclique size, optionally forced to contain `anchor`.
pub fn independence_number(g: &PrimeGraph, anchor: Option<&BigUint>) -> Result<usize> {
    let n = g.vertices.len();
    let mut cand: Vec<usize> = (0..n).collect();
    let mut base = 0;
    if let Some(a) = anchor {
        let ai = g.index_of(a).ok_or_else(|| Error::Unknown { kind: "anchor vertex", name: a.to_string() })?;
        cand.retain(|&v| v != ai && !g.adj[ai][v]);
        base = 1;
    }
    let mut best = greedy(g, &cand);
    branch(g, &cand, 0, &mut best);
    Ok(base + best)
}

fn greedy(g: &PrimeGraph, cand: &[usize]) -> usize {
    let mut rest: Vec<usize> = cand.to_vec();
    let mut size = 0;
    while !rest.is_empty() {
        let &v = rest
            .iter()
            .min_by_key(|&&v| rest.iter().filter(|&&w| g.adj[v][w]).count())
            .unwrap();
        size += 1;
        rest.retain(|&w| w != v && !g.adj[v][w]);
    }
    size
}

fn branch(g: &PrimeGraph, cand: &[usize], size: usize, best: &mut usize) {
    if cand.is_empty() {
        *best = (*best).max(size);
        return;
    }
    if size + cand.len() <= *best {
        return;
    }
    let &v = cand
        .iter()
        .max_by_key(|&&v| cand.iter().filter(|&&w| g.adj[v][w]).count())
        .unwrap();
    let with: Vec<usize> = cand.iter().copied().filter(|&w| w != v && !g.adj[v][w]).collect();
    branch(g, &with, size + 1, best);
    let without: Vec<usize> = cand.iter().copied().filter(|&w| w != v).collect();
    branch(g, &without, size, best);
}

/// Maximal π_i-parts of spectrum elements for a non-first component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentOrder {
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub component: Vec<BigUint>,
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub maximal: Vec<BigUint>,
}

impl ComponentOrder {
    pub fn is_singleton(&self) -> bool {
        self.maximal.len() == 1
    }
}

pub fn component_orders(s: &SpectrumGenerators, g: &PrimeGraph) -> Vec<ComponentOrder> {
    components(g)
        .into_iter()
        .skip(1)
        .map(|comp| {
            let parts: BTreeSet<BigUint> = s
                .generators()
                .iter()
                .map(|x| {
                    let mut part = BigUint::one();
                    let mut rest = x.clone();
                    for p in &comp {
                        while (&rest % p).is_zero() {
                            rest /= p;
                            part *= p;
                        }
                    }
                    part
                })
                .filter(|p| !p.is_one())
                .collect();
            let maximal = parts
                .iter()
                .filter(|a| !parts.iter().any(|b| b != *a && (b % *a).is_zero()))
                .cloned()
                .collect();
            ComponentOrder { component: comp, maximal }
        })
        .collect()
}
