//! Explicit graph families, scale volumes and prime spectra.
//!
//! The scale volume of a basis is the product of the scales of its members.
//! For a quotient graph we take, per spanning tree, the product over non-tree
//! edges of the smaller of the two orientations' scales, then the minimum over
//! trees. Over a rank this is maximized across all graphs. Only bases coming
//! from spanning trees and only full automorphism groups of covering trees are
//! searched, so the rank value is a lower bound for the supremum over all
//! envelopes, and each graph value an upper bound for the minimum over all
//! generating sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::primes_up_to;
use crate::colors::{refine_dart_colors, DartColoring};
use crate::enumerate::{self, degree_census};
use crate::multigraph::{CanonicalKey, Dart, Multigraph};
use crate::scale::{
    ramification_profile, scale_hyperbolic, serialize_decimal, serialize_decimal_vec, AxisWalk,
    ScaleValue,
};
use crate::schottky::{spanning_trees, SchottkyElement, SpanningTree};
use crate::{Error, Result};

fn check_rank(rank: usize) -> Result<()> {
    if rank < 2 {
        return Err(Error::RankTooSmall(rank));
    }
    Ok(())
}

/// One vertex with `rank` loops; its cover is the homogeneous tree of degree `2·rank`.
pub fn build_rose(rank: usize) -> Result<Multigraph> {
    check_rank(rank)?;
    Multigraph::new(1, &vec![(0, 0); rank])
}

/// The two-vertex graph carrying a length-one element of scale `s`.
///
/// Vertex 0 gets `(s + 1) / 2` loops, vertex 1 the remaining loops, joined by
/// one edge (two when `s = rank - 1`). For `s = 2·rank - 1` this is the rose.
pub fn build_bs(s: usize, rank: usize) -> Result<Multigraph> {
    check_rank(rank)?;
    if s.is_multiple_of(2) || s < 3 || s > 2 * rank - 1 {
        return Err(Error::InvalidArgument(format!(
            "s must be odd with 3 <= s <= {}, got {s}",
            2 * rank - 1
        )));
    }
    if s == 2 * rank - 1 {
        return build_rose(rank);
    }
    let v0_loops = s.div_ceil(2);
    let (bridges, v1_loops) = if s == rank - 1 {
        (2, rank / 2 - 1)
    } else {
        (1, rank - v0_loops)
    };
    let mut edges = vec![(0, 1); bridges];
    edges.extend(std::iter::repeat_n((0, 0), v0_loops));
    edges.extend(std::iter::repeat_n((1, 1), v1_loops));
    Multigraph::new(2, &edges)
}

/// `2(rank - 1)` vertices on a cycle, consecutive vertices joined
/// alternately by one and two edges. Cubic.
pub fn build_cycle_gadget(rank: usize) -> Result<Multigraph> {
    check_rank(rank)?;
    let v = 2 * (rank - 1);
    let mut edges = Vec::new();
    for i in 0..v {
        let j = (i + 1) % v;
        let multiplicity = if i % 2 == 0 { 1 } else { 2 };
        edges.extend(std::iter::repeat_n((i, j), multiplicity));
    }
    Multigraph::new(v, &edges)
}

/// Scales of one generator in both orientations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ElementScales {
    pub edge: usize,
    pub translation_length: usize,
    pub forward: ScaleValue,
    pub backward: ScaleValue,
}

impl ElementScales {
    pub fn min(&self) -> &ScaleValue {
        (&self.forward).min(&self.backward)
    }
}

/// Scale computations for one graph, with a cache keyed by axis rotation.
pub struct GraphScales<'g> {
    graph: &'g Multigraph,
    colors: DartColoring,
    cache: HashMap<Vec<Dart>, ScaleValue>,
}

impl<'g> GraphScales<'g> {
    pub fn new(graph: &'g Multigraph) -> Result<Self> {
        Ok(GraphScales {
            graph,
            colors: refine_dart_colors(graph)?,
            cache: HashMap::new(),
        })
    }

    pub fn colors(&self) -> &DartColoring {
        &self.colors
    }

    pub fn axis_scale(&mut self, axis: &AxisWalk) -> Result<ScaleValue> {
        let key = axis.rotation_key();
        if let Some(s) = self.cache.get(&key) {
            return Ok(s.clone());
        }
        let s = scale_hyperbolic(&ramification_profile(self.graph, &self.colors, axis)?);
        self.cache.insert(key, s.clone());
        Ok(s)
    }

    /// Both orientations of every generator of the basis of `tree`.
    pub fn tree_elements(&mut self, tree: &SpanningTree) -> Result<Vec<ElementScales>> {
        let mask = tree.mask(self.graph);
        tree.complement(self.graph)
            .into_iter()
            .map(|e| {
                let fwd = SchottkyElement::new(self.graph, &mask, 2 * e)?;
                let forward = self.axis_scale(&fwd.axis)?;
                let backward = self.axis_scale(&fwd.axis.reversed())?;
                Ok(ElementScales {
                    edge: e,
                    translation_length: fwd.translation_length,
                    forward,
                    backward,
                })
            })
            .collect()
    }
}

/// Volume data of one quotient graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphVolume {
    pub key: CanonicalKey,
    pub vertices: usize,
    pub edges: usize,
    /// Per spanning tree (in [`spanning_trees`] order): product over the basis
    /// of the smaller orientation scale.
    #[serde(serialize_with = "serialize_decimal_vec")]
    pub tree_volumes: Vec<BigUint>,
    /// Minimum of `tree_volumes`.
    #[serde(serialize_with = "serialize_decimal")]
    pub volume: BigUint,
    pub best_tree: usize,
    /// Primes dividing the scale of some basis element, either orientation.
    pub primes: BTreeSet<u64>,
    pub max_translation_length: usize,
}

pub fn schottky_volume(g: &Multigraph) -> Result<GraphVolume> {
    let key = g.canonical_key()?;
    let mut scales = GraphScales::new(g)?;
    let mut tree_volumes = Vec::new();
    let mut primes = BTreeSet::new();
    let mut max_len = 0;
    for tree in spanning_trees(g)? {
        let mut volume = BigUint::one();
        for el in scales.tree_elements(&tree)? {
            primes.extend(el.forward.primes());
            primes.extend(el.backward.primes());
            max_len = max_len.max(el.translation_length);
            volume *= el.min().value();
        }
        tree_volumes.push(volume);
    }
    let (best_tree, volume) = tree_volumes
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, v)| (i, v.clone()))
        .expect("a connected graph has a spanning tree");
    Ok(GraphVolume {
        key,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        tree_volumes,
        volume,
        best_tree,
        primes,
        max_translation_length: max_len,
    })
}

/// Volumes of every graph of the rank, in enumeration order.
pub fn rank_volumes(rank: usize) -> Result<Vec<GraphVolume>> {
    let graphs = enumerate::enumerate_rank(rank)?;
    volumes_of(&graphs)
}

pub fn volumes_of(graphs: &[Multigraph]) -> Result<Vec<GraphVolume>> {
    graphs.par_iter().map(schottky_volume).collect()
}

pub const CONJECTURE_STATUS: &str = "conjecture, non-normative";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureValue {
    pub value: f64,
    pub status: &'static str,
}

/// `2^{n(2 log2(n/3) + 3)}`, reported for comparison only.
pub fn conjectured_volume(rank: usize) -> ConjectureValue {
    let n = rank as f64;
    ConjectureValue {
        value: 2f64.powf(n * (2.0 * (n / 3.0).log2() + 3.0)),
        status: CONJECTURE_STATUS,
    }
}

pub fn volume_lower_bound(rank: usize) -> BigUint {
    BigUint::from(2 * rank - 1).pow(rank as u32)
}

pub fn volume_upper_bound(rank: usize) -> BigUint {
    BigUint::from(2 * rank - 1).pow((2 * rank * (rank - 1)) as u32)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeReport {
    pub rank: usize,
    pub graphs: Vec<GraphVolume>,
    /// Maximum graph volume over the rank.
    #[serde(serialize_with = "serialize_decimal")]
    pub svol_schottky: BigUint,
    pub svol_graph: CanonicalKey,
    #[serde(serialize_with = "serialize_decimal")]
    pub lower_bound: BigUint,
    #[serde(serialize_with = "serialize_decimal")]
    pub upper_bound: BigUint,
    pub in_bracket: bool,
    #[serde(serialize_with = "serialize_decimal")]
    pub rose_volume: BigUint,
    pub conjecture: ConjectureValue,
    pub primes: BTreeSet<u64>,
}

pub fn svol_report(rank: usize) -> Result<VolumeReport> {
    let graphs = rank_volumes(rank)?;
    volume_report(rank, graphs)
}

pub fn volume_report(rank: usize, graphs: Vec<GraphVolume>) -> Result<VolumeReport> {
    check_rank(rank)?;
    let best = graphs
        .iter()
        .max_by(|a, b| a.volume.cmp(&b.volume).then_with(|| b.key.cmp(&a.key)))
        .ok_or_else(|| Error::InvalidArgument("no graphs to aggregate".into()))?;
    let svol_schottky = best.volume.clone();
    let svol_graph = best.key.clone();
    let lower_bound = volume_lower_bound(rank);
    let upper_bound = volume_upper_bound(rank);
    let rose_key = build_rose(rank)?.canonical_key()?;
    let rose_volume = match graphs.iter().find(|g| g.key == rose_key) {
        Some(g) => g.volume.clone(),
        None => schottky_volume(&build_rose(rank)?)?.volume,
    };
    let primes = graphs
        .iter()
        .flat_map(|g| g.primes.iter().copied())
        .collect();
    Ok(VolumeReport {
        rank,
        in_bracket: lower_bound <= svol_schottky && svol_schottky <= upper_bound,
        svol_schottky,
        svol_graph,
        lower_bound,
        upper_bound,
        rose_volume,
        conjecture: conjectured_volume(rank),
        primes,
        graphs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeWitness {
    pub prime: u64,
    pub family: String,
    pub translation_length: usize,
    pub scale: ScaleValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSpectrum {
    pub rank: usize,
    /// Primes dividing some basis-element scale over the whole rank.
    pub primes: BTreeSet<u64>,
    /// `{p prime : p <= 2·rank - 1}`.
    pub expected: BTreeSet<u64>,
    pub witnesses: Vec<PrimeWitness>,
}

impl PrimeSpectrum {
    pub fn matches(&self) -> bool {
        self.primes == self.expected
            && self.witnesses.len() == self.expected.len()
            && self
                .witnesses
                .iter()
                .all(|w| w.scale.factors().contains_key(&w.prime))
    }
}

pub fn prime_spectrum(rank: usize) -> Result<PrimeSpectrum> {
    let graphs = rank_volumes(rank)?;
    prime_spectrum_of(rank, &graphs)
}

pub fn prime_spectrum_of(rank: usize, graphs: &[GraphVolume]) -> Result<PrimeSpectrum> {
    check_rank(rank)?;
    let primes = graphs
        .iter()
        .flat_map(|g| g.primes.iter().copied())
        .collect();
    let expected: BTreeSet<u64> = primes_up_to(2 * rank as u64 - 1).into_iter().collect();
    let mut witnesses = Vec::new();
    for &p in &expected {
        let (family, g) = if p == 2 {
            ("cycle".to_string(), build_cycle_gadget(rank)?)
        } else {
            (format!("bs(s={p})"), build_bs(p as usize, rank)?)
        };
        let mut scales = GraphScales::new(&g)?;
        let tree = spanning_trees(&g)?.remove(0);
        let best = scales
            .tree_elements(&tree)?
            .into_iter()
            .filter(|el| el.forward.factors().contains_key(&p))
            .max_by_key(|el| el.translation_length);
        if let Some(el) = best {
            witnesses.push(PrimeWitness {
                prime: p,
                family,
                translation_length: el.translation_length,
                scale: el.forward,
            });
        }
    }
    Ok(PrimeSpectrum {
        rank,
        primes,
        expected,
        witnesses,
    })
}

/// Spanning trees of `g` up to graph automorphism, as the number of distinct
/// canonical keys of the graph with tree edges marked.
pub fn tree_kinds(g: &Multigraph) -> Result<usize> {
    let n = g.vertex_count();
    let kinds: BTreeSet<CanonicalKey> = spanning_trees(g)?
        .iter()
        .map(|tree| {
            let mut m = vec![vec![0u32; n]; n];
            for e in 0..g.edge_count() {
                let (a, b) = g.endpoints(e);
                let add = if tree.contains(e) { 1 << 16 } else { 1 };
                m[a][b] += add;
                if a != b {
                    m[b][a] += add;
                }
            }
            CanonicalKey::from_matrix(&m)
        })
        .collect();
    Ok(kinds.len())
}

/// One verified claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub part: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub rank: usize,
    pub checks: Vec<Check>,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, part: u8, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            part,
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

/// Ranks up to this sweep every graph of the class for the translation-length bound.
pub const FULL_SWEEP_RANK: usize = 5;

/// Runs the three explicit families through the pipeline and checks their
/// quantitative claims at `rank`.
pub fn verify_explicit_bounds(rank: usize) -> Result<BoundsReport> {
    check_rank(rank)?;
    let mut report = BoundsReport {
        rank,
        checks: Vec::new(),
    };
    verify_rose(rank, &mut report)?;
    for s in (3..=2 * rank - 1).step_by(2) {
        verify_bs(s, rank, &mut report)?;
    }
    verify_cycle(rank, &mut report)?;
    Ok(report)
}

fn verify_rose(rank: usize, report: &mut BoundsReport) -> Result<()> {
    let rose = build_rose(rank)?;
    let rose_key = rose.canonical_key()?;
    let one_vertex = enumerate::enumerate_vertex_count(rank, 1)?;
    report.push(
        1,
        "rose is the unique one-vertex graph",
        one_vertex.len() == 1 && one_vertex[0].canonical_key()? == rose_key,
        format!("{} one-vertex class(es)", one_vertex.len()),
    );
    let census = degree_census(rank)?;
    let others = census[1..].iter().map(|&(_, d)| d).max().unwrap_or(0);
    report.push(
        1,
        "maximal degree 2n attained only by the rose",
        rose.max_degree() == 2 * rank && others < 2 * rank,
        format!(
            "rose degree {}, largest degree with two or more vertices {}",
            rose.max_degree(),
            others
        ),
    );
    let mut scales = GraphScales::new(&rose)?;
    let tree = SpanningTree::new(&rose, [])?;
    let elements = scales.tree_elements(&tree)?;
    let expected = ScaleValue::from_u64(2 * rank as u64 - 1);
    let ok = elements.len() == rank
        && elements.iter().all(|el| {
            el.translation_length == 1 && el.forward == expected && el.backward == expected
        });
    report.push(
        1,
        "rose generators: translation length 1, scale 2n-1",
        ok,
        format!(
            "{} generators, scales {:?}",
            elements.len(),
            elements
                .iter()
                .map(|e| e.forward.to_string())
                .collect::<Vec<_>>()
        ),
    );
    Ok(())
}

fn verify_bs(s: usize, rank: usize, report: &mut BoundsReport) -> Result<()> {
    let g = build_bs(s, rank)?;
    let name = format!("B({s})");
    let admissible = g.is_admissible(rank);
    let degrees = g.degrees();
    let distinct = s > 2 * rank - 3 || degrees[0] != degrees[1];
    report.push(
        2,
        format!("{name} is admissible of rank n"),
        admissible && distinct,
        format!("degrees {degrees:?}"),
    );
    let mut scales = GraphScales::new(&g)?;
    let trees = spanning_trees(&g)?;
    let target = ScaleValue::from_u64(s as u64);
    let mut failures = Vec::new();
    for (t, tree) in trees.iter().enumerate() {
        let elements = scales.tree_elements(tree)?;
        let hit = elements.iter().any(|el| {
            let (a, b) = g.endpoints(el.edge);
            a == 0
                && b == 0
                && el.translation_length == 1
                && el.forward == target
                && el.backward == target
        });
        if !hit {
            failures.push(t);
        }
    }
    report.push(
        2,
        format!("{name}: every basis has a length-1 loop generator of scale {s}"),
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} spanning trees checked", trees.len())
        } else {
            format!("failing trees {failures:?}")
        },
    );
    // ramification of the subtree spanned by axes through the attracting end
    let loop_edge = (0..g.edge_count())
        .find(|&e| g.endpoints(e) == (0, 0))
        .expect("B(s) has a loop at vertex 0");
    let axis = AxisWalk::new(&g, vec![2 * loop_edge])?;
    let profile = ramification_profile(&g, scales.colors(), &axis)?;
    report.push(
        2,
        format!("{name}: axis subtree is regular of degree s+1"),
        profile.values() == [s as u64],
        format!("profile {:?}", profile.values()),
    );
    Ok(())
}

fn verify_cycle(rank: usize, report: &mut BoundsReport) -> Result<()> {
    let g = build_cycle_gadget(rank)?;
    let length = 2 * (rank - 1);
    report.push(
        3,
        "cycle gadget is cubic and admissible",
        g.is_admissible(rank) && g.max_degree() == 3,
        format!("{} vertices, {} edges", g.vertex_count(), g.edge_count()),
    );
    let mut scales = GraphScales::new(&g)?;
    let target = ScaleValue::from_u64(2).pow(length as u32);
    let trees = spanning_trees(&g)?;
    let mut failures = Vec::new();
    let mut longest = 0;
    for (t, tree) in trees.iter().enumerate() {
        let elements = scales.tree_elements(tree)?;
        longest = elements
            .iter()
            .map(|el| el.translation_length)
            .max()
            .unwrap_or(0)
            .max(longest);
        if !elements.iter().any(|el| {
            el.translation_length == length && el.forward == target && el.backward == target
        }) {
            failures.push(t);
        }
    }
    report.push(
        3,
        "cycle gadget: every basis has an element of length 2(n-1) and scale 2^(2(n-1))",
        failures.is_empty() && longest == length,
        if failures.is_empty() {
            format!("{} spanning trees checked, longest {longest}", trees.len())
        } else {
            format!("failing trees {failures:?}")
        },
    );
    let kinds = tree_kinds(&g)?;
    let expected_kinds = if rank == 2 { 1 } else { 2 };
    report.push(
        3,
        "cycle gadget: kinds of maximal subtree up to automorphism",
        kinds == expected_kinds,
        format!("{kinds} kind(s), expected {expected_kinds}"),
    );
    if rank <= FULL_SWEEP_RANK {
        let graphs = enumerate::enumerate_rank(rank)?;
        let cert = enumerate::certificate_for(rank, &graphs)?;
        report.push(
            3,
            "no basis element of any rank-n graph exceeds length 2(n-1)",
            cert.max_translation_length == length,
            format!(
                "maximum {} over {} graphs",
                cert.max_translation_length, cert.graph_count
            ),
        );
    } else {
        // a tree path has at most v - 1 <= 2n - 3 edges
        let census = degree_census(rank)?;
        let max_vertices = census.last().map_or(0, |&(v, _)| v);
        report.push(
            3,
            "no basis element of any rank-n graph exceeds length 2(n-1)",
            max_vertices == length,
            format!(
                "vertex bound {max_vertices}; tree paths have at most {} edges",
                max_vertices - 1
            ),
        );
    }
    Ok(())
}

/// Brute-force volume over explicit bases: for every tree and every choice of
/// orientation per generator. Exponential in the rank; meant for small graphs.
pub fn exhaustive_volume(g: &Multigraph) -> Result<BigUint> {
    let colors = refine_dart_colors(g)?;
    let mut best: Option<BigUint> = None;
    for tree in spanning_trees(g)? {
        let mask = tree.mask(g);
        let complement = tree.complement(g);
        for choice in 0u64..(1 << complement.len()) {
            let mut volume = BigUint::one();
            for (i, &e) in complement.iter().enumerate() {
                let dart = 2 * e + ((choice >> i) & 1) as usize;
                let el = SchottkyElement::new(g, &mask, dart)?;
                volume *= scale_hyperbolic(&ramification_profile(g, &colors, &el.axis)?).value();
            }
            if best.as_ref().is_none_or(|b| volume < *b) {
                best = Some(volume);
            }
        }
    }
    best.ok_or(Error::Disconnected)
}

/// Summary counts per prime, used by reports.
pub fn prime_counts(graphs: &[GraphVolume]) -> BTreeMap<u64, usize> {
    let mut counts = BTreeMap::new();
    for g in graphs {
        for &p in &g.primes {
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    counts
}
