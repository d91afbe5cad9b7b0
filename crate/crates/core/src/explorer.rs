//! Exhaustive and random exploration of the tree of C-semigroups.
//!
//! Counting runs breadth-first until the frontier is wide enough to keep the
//! workers busy, then finishes every frontier subtree depth-first in a rayon
//! pool. Per-level tallies are merged by addition and minimum, so results do
//! not depend on scheduling. Nodes on the deepest level are never built:
//! their number is the parent's count of effective generators, and their
//! embedding dimension is computed in scratch buffers.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::LatticePoint;
use crate::semigroup::{Ambient, CSemigroup};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExploreError {
    /// The expansion budget ran out; `partial` holds the levels that were
    /// fully counted before stopping.
    #[error("node budget of {budget} expansions exhausted after {} complete levels", partial.rows.len())]
    ResourceLimit { budget: u64, partial: GenusReport },
    #[error("failed to start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy)]
pub struct ExploreConfig {
    pub workers: usize,
    /// Maximum number of nodes whose sons are generated.
    pub budget: u64,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            budget: DEFAULT_BUDGET,
        }
    }
}

impl ExploreConfig {
    pub fn with_workers(workers: usize) -> Self {
        ExploreConfig {
            workers,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenusRow {
    pub genus: usize,
    pub count: u64,
    /// `n_g / n_{g-1}`, from genus 1 on.
    pub ratio: Option<f64>,
    /// `(n_{g-1} + n_{g-2}) / n_g`, from genus 2 on.
    pub fib_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenusReport {
    pub rows: Vec<GenusRow>,
    pub partial: bool,
}

impl GenusReport {
    pub fn from_counts(counts: &[u64], partial: bool) -> GenusReport {
        let rows = counts
            .iter()
            .enumerate()
            .map(|(g, &count)| GenusRow {
                genus: g,
                count,
                ratio: (g >= 1 && counts[g - 1] > 0).then(|| count as f64 / counts[g - 1] as f64),
                fib_ratio: (g >= 2 && count > 0)
                    .then(|| (counts[g - 1] + counts[g - 2]) as f64 / count as f64),
            })
            .collect();
        GenusReport { rows, partial }
    }

    pub fn counts(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.count).collect()
    }

    /// CSV with header `genus,count,ratio,fib_ratio`; ratios use six
    /// significant digits and are empty where undefined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("genus,count,ratio,fib_ratio\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.genus,
                r.count,
                r.ratio.map(format_sig6).unwrap_or_default(),
                r.fib_ratio.map(format_sig6).unwrap_or_default()
            ));
        }
        out
    }
}

/// Formats like C's `%g`: six significant digits, trailing zeros dropped.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&exp) {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').unwrap();
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        let e: i32 = e.parse().unwrap();
        let sign = if e < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", e.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Count,
    Edim,
}

#[derive(Debug, Clone)]
struct Tally {
    counts: Vec<u64>,
    min_edim: Vec<usize>,
}

impl Tally {
    fn new(levels: usize) -> Tally {
        Tally {
            counts: vec![0; levels],
            min_edim: vec![usize::MAX; levels],
        }
    }

    fn record(&mut self, level: usize, edim: usize) {
        self.counts[level] += 1;
        self.min_edim[level] = self.min_edim[level].min(edim);
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        for (a, b) in self.min_edim.iter_mut().zip(other.min_edim) {
            *a = (*a).min(b);
        }
        self
    }
}

struct Node {
    gaps: Vec<LatticePoint>,
    gens: Vec<LatticePoint>,
}

struct Walker<'a> {
    ambient: &'a Ambient,
    max_genus: usize,
    mode: Mode,
    budget: u64,
    expanded: AtomicU64,
    aborted: AtomicBool,
    /// Smallest embedding dimension seen so far on the deepest level, shared
    /// by all workers so that hopeless parents can be skipped.
    deepest_min: AtomicUsize,
}

const FLUSH_EVERY: u64 = 1024;

impl Walker<'_> {
    fn charge(&self, n: u64) -> bool {
        let total = self.expanded.fetch_add(n, AtomicOrdering::Relaxed) + n;
        if total > self.budget {
            self.aborted.store(true, AtomicOrdering::Relaxed);
        }
        !self.aborted.load(AtomicOrdering::Relaxed)
    }

    /// Tallies the sons of a node on level `max_genus - 1`.
    fn leaf_level(&self, node: &Node, tally: &mut Tally, scratch: &mut (Vec<LatticePoint>, Vec<LatticePoint>)) {
        let r = self.ambient.first_effective(&node.gaps, &node.gens);
        let level = self.max_genus;
        match self.mode {
            Mode::Count => tally.counts[level] += (node.gens.len() - r) as u64,
            Mode::Edim => {
                // a son keeps every generator but the removed one, so it
                // cannot go below the current minimum
                if node.gens.len() > self.deepest_min.load(AtomicOrdering::Relaxed) {
                    tally.counts[level] += (node.gens.len() - r) as u64;
                    return;
                }
                for i in r..node.gens.len() {
                    let e = self
                        .ambient
                        .son_embedding_dimension(&node.gaps, &node.gens, i, &mut scratch.0, &mut scratch.1);
                    tally.record(level, e);
                    self.deepest_min.fetch_min(e, AtomicOrdering::Relaxed);
                }
            }
        }
    }

    fn son(&self, node: &Node, i: usize) -> Node {
        let (gaps, gens) = self.ambient.son(&node.gaps, &node.gens, i);
        Node { gaps, gens }
    }

    fn depth_first(&self, node: &Node, depth: usize, tally: &mut Tally, pending: &mut u64, scratch: &mut (Vec<LatticePoint>, Vec<LatticePoint>)) {
        if self.aborted.load(AtomicOrdering::Relaxed) {
            return;
        }
        if depth + 1 == self.max_genus {
            self.leaf_level(node, tally, scratch);
            return;
        }
        *pending += 1;
        if *pending >= FLUSH_EVERY {
            self.charge(std::mem::take(pending));
        }
        let r = self.ambient.first_effective(&node.gaps, &node.gens);
        for i in r..node.gens.len() {
            let child = self.son(node, i);
            tally.record(depth + 1, child.gens.len());
            self.depth_first(&child, depth + 1, tally, pending, scratch);
        }
    }

    fn run(&self, workers: usize) -> Result<(Tally, bool, usize), ExploreError> {
        let levels = self.max_genus + 1;
        let mut tally = Tally::new(levels);
        let root = Node {
            gaps: Vec::new(),
            gens: self.ambient.hilbert_basis().to_vec(),
        };
        tally.record(0, root.gens.len());
        if self.max_genus == 0 {
            return Ok((tally, false, levels));
        }

        let target = 256 * workers.max(1);
        let mut frontier = vec![root];
        let mut depth = 0;
        while depth + 1 < self.max_genus && frontier.len() < target {
            if !self.charge(frontier.len() as u64) {
                return Ok((tally, true, depth + 1));
            }
            let mut next = Vec::new();
            for node in &frontier {
                let r = self.ambient.first_effective(&node.gaps, &node.gens);
                for i in r..node.gens.len() {
                    let child = self.son(node, i);
                    tally.record(depth + 1, child.gens.len());
                    next.push(child);
                }
            }
            frontier = next;
            depth += 1;
        }
        let complete = depth + 1;

        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .map_err(|e| ExploreError::Pool(e.to_string()))?;
        let deep = pool.install(|| {
            frontier
                .par_iter()
                .map(|node| {
                    let mut local = Tally::new(levels);
                    let mut pending = 0;
                    let mut scratch = (Vec::new(), Vec::new());
                    self.depth_first(node, depth, &mut local, &mut pending, &mut scratch);
                    self.charge(pending);
                    local
                })
                .reduce(|| Tally::new(levels), Tally::merge)
        });
        let aborted = self.aborted.load(AtomicOrdering::Relaxed);
        Ok((tally.merge(deep), aborted, complete))
    }
}

fn walk(ambient: &Ambient, max_genus: usize, mode: Mode, config: ExploreConfig) -> Result<Tally, ExploreError> {
    let walker = Walker {
        ambient,
        max_genus,
        mode,
        budget: config.budget,
        expanded: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        deepest_min: AtomicUsize::new(usize::MAX),
    };
    let (tally, aborted, complete) = walker.run(config.workers)?;
    if aborted {
        return Err(ExploreError::ResourceLimit {
            budget: config.budget,
            partial: GenusReport::from_counts(&tally.counts[..complete], true),
        });
    }
    Ok(tally)
}

/// Number of semigroups of each genus `0..=max_genus` in the tree.
pub fn count_by_genus(ambient: &Ambient, max_genus: usize, config: ExploreConfig) -> Result<GenusReport, ExploreError> {
    let tally = walk(ambient, max_genus, Mode::Count, config)?;
    Ok(GenusReport::from_counts(&tally.counts, false))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdimRow {
    pub genus: usize,
    pub count: u64,
    pub min_edim: usize,
}

/// Smallest embedding dimension on each level `0..=max_genus`.
pub fn min_edim_by_genus(ambient: &Ambient, max_genus: usize, config: ExploreConfig) -> Result<Vec<EdimRow>, ExploreError> {
    let tally = walk(ambient, max_genus, Mode::Edim, config)?;
    Ok(tally
        .counts
        .iter()
        .zip(&tally.min_edim)
        .enumerate()
        .map(|(genus, (&count, &min_edim))| EdimRow { genus, count, min_edim })
        .collect())
}

/// Every node of the tree up to `max_genus`, level by level.
pub fn enumerate_levels(ambient: &Arc<Ambient>, max_genus: usize, budget: u64) -> Result<Vec<Vec<CSemigroup>>, ExploreError> {
    let mut levels = vec![vec![CSemigroup::root(ambient.clone())]];
    let mut expanded = 0u64;
    for _ in 0..max_genus {
        let last = levels.last().unwrap();
        expanded += last.len() as u64;
        if expanded > budget {
            let counts: Vec<u64> = levels.iter().map(|l| l.len() as u64).collect();
            return Err(ExploreError::ResourceLimit {
                budget,
                partial: GenusReport::from_counts(&counts, true),
            });
        }
        let next: Vec<CSemigroup> = last.iter().flat_map(|s| s.effective_sons()).collect();
        levels.push(next);
    }
    Ok(levels)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchStep {
    pub genus: usize,
    pub removed: LatticePoint,
    pub e: u64,
    pub n: u64,
    pub g: u64,
    pub frobenius_number: u64,
    pub wilf_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchReport {
    pub rays: Vec<LatticePoint>,
    pub order: Vec<Vec<i64>>,
    pub seed: u64,
    pub steps: Vec<BranchStep>,
}

impl BranchReport {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.wilf_holds)
    }
}

/// Follows one uniformly random effective son per level down to
/// `max_genus`, checking the Wilf inequality at every step.
///
/// A node without effective sons (these exist, e.g. `<3,5>` in `N`) is left
/// by removing a uniformly random minimal generator instead, which still
/// yields a subsemigroup of the next genus.
pub fn random_branch(ambient: &Arc<Ambient>, max_genus: usize, seed: u64) -> BranchReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = CSemigroup::root(ambient.clone());
    let mut steps = Vec::with_capacity(max_genus);
    for genus in 1..=max_genus {
        let effective = current.effective_generators().len();
        let (removed, next) = if effective > 0 {
            let k = rng.gen_range(0..effective);
            let removed = current.effective_generators()[k];
            (removed, current.effective_son(k).expect("index in range"))
        } else {
            let i = rng.gen_range(0..current.embedding_dimension());
            (current.generators()[i], current.remove_generator(i))
        };
        current = next;
        let w = current.wilf_check().expect("genus is positive");
        steps.push(BranchStep {
            genus,
            removed,
            e: w.e,
            n: w.n,
            g: w.g,
            frobenius_number: w.frobenius_number,
            wilf_holds: w.holds,
        });
    }
    BranchReport {
        rays: ambient.cone().rays().to_vec(),
        order: ambient.order().matrix(),
        seed,
        steps,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub genus: usize,
    /// `n_g >= n_{g-1}`
    pub nondecreasing: bool,
    /// `n_g >= n_{g-1} + n_{g-2}`
    pub fibonacci: bool,
    pub ratio: f64,
}

/// Growth flags for every genus `g >= 2` of a report.
pub fn conjecture_scan(report: &GenusReport) -> Vec<ScanRow> {
    let n = report.counts();
    (2..n.len())
        .map(|g| ScanRow {
            genus: g,
            nondecreasing: n[g] >= n[g - 1],
            fibonacci: n[g] >= n[g - 1] + n[g - 2],
            ratio: n[g] as f64 / n[g - 1] as f64,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Cone;
    use crate::order::MatrixOrder;

    fn amb(rays: &[&[i64]]) -> Arc<Ambient> {
        let rays: Vec<_> = rays.iter().map(|r| LatticePoint::new(r).unwrap()).collect();
        let cone = Cone::new(&rays).unwrap();
        let dim = cone.dim();
        Ambient::new(cone, MatrixOrder::grlex(dim)).unwrap()
    }

    #[test]
    fn numerical_semigroup_counts() {
        let a = amb(&[&[1]]);
        let r = count_by_genus(&a, 8, ExploreConfig::with_workers(2)).unwrap();
        assert_eq!(r.counts(), vec![1, 1, 2, 4, 7, 12, 23, 39, 67]);
    }

    #[test]
    fn plane_prefix_and_levels_agree() {
        let a = amb(&[&[1, 0], &[0, 1]]);
        let r = count_by_genus(&a, 6, ExploreConfig::with_workers(1)).unwrap();
        assert_eq!(r.counts(), vec![1, 2, 7, 23, 71, 210, 638]);
        let levels = enumerate_levels(&a, 5, DEFAULT_BUDGET).unwrap();
        let sizes: Vec<u64> = levels.iter().map(|l| l.len() as u64).collect();
        assert_eq!(sizes, r.counts()[..6]);
    }

    #[test]
    fn genus_zero_only() {
        let a = amb(&[&[3, 1], &[1, 2]]);
        let r = count_by_genus(&a, 0, ExploreConfig::with_workers(1)).unwrap();
        assert_eq!(r.counts(), vec![1]);
        let e = min_edim_by_genus(&a, 0, ExploreConfig::with_workers(1)).unwrap();
        assert_eq!(e[0].min_edim, 4);
    }

    #[test]
    fn budget_reports_partial_levels() {
        let a = amb(&[&[1, 0], &[0, 1]]);
        let err = count_by_genus(&a, 12, ExploreConfig { workers: 1, budget: 50 }).unwrap_err();
        let ExploreError::ResourceLimit { partial, .. } = err else {
            panic!("expected budget error");
        };
        assert!(partial.partial);
        let got = partial.counts();
        assert_eq!(got[..], [1, 2, 7, 23, 71, 210, 638][..got.len()]);
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(386354.0 / 134856.0), "2.86494");
        assert_eq!(format_sig6(9.0 / 23.0), "0.391304");
        assert_eq!(format_sig6(3.5), "3.5");
        assert_eq!(format_sig6(2.0), "2");
        assert_eq!(format_sig6(638.0 / 210.0), "3.0381");
        assert_eq!(format_sig6(1234567.0), "1.23457e+06");
    }

    #[test]
    fn csv_layout() {
        let r = GenusReport::from_counts(&[1, 2, 7], false);
        assert_eq!(r.to_csv(), "genus,count,ratio,fib_ratio\n0,1,,\n1,2,2,\n2,7,3.5,0.428571\n");
    }

    #[test]
    fn branch_is_reproducible() {
        let a = amb(&[&[1, 0], &[0, 1]]);
        let b1 = random_branch(&a, 15, 7);
        let b2 = random_branch(&a, 15, 7);
        assert_eq!(b1, b2);
        assert_eq!(b1.steps.len(), 15);
        for (k, s) in b1.steps.iter().enumerate() {
            assert_eq!(s.genus, k + 1);
            assert_eq!(s.g, k as u64 + 1);
        }
    }

    #[test]
    fn classical_wilf_along_numerical_branches() {
        let a = amb(&[&[1]]);
        for seed in 0..20 {
            assert!(random_branch(&a, 25, seed).all_hold());
        }
    }

    #[test]
    fn scan_flags() {
        let r = GenusReport::from_counts(&[1, 2, 7, 23, 71], false);
        let scan = conjecture_scan(&r);
        assert_eq!(scan.len(), 3);
        assert!(scan.iter().all(|s| s.nondecreasing && s.fibonacci));
    }
}
