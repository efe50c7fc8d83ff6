//! Label-selection policies: given a budget of labels to reveal, decide
//! which nodes the trainer gets to see.
//!
//! Four policies: `df` draws a class-stratified random sample, `mc` takes
//! the most central nodes, `lc` the least central, and `ecm` spends half
//! the budget on each extreme. All choices are deterministic given
//! (scores, labels, policy, budget, seed); ranking ties break toward the
//! lower node index.

use crate::centrality::CentralityScores;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    /// Class-stratified seeded-uniform draw ("default" selection).
    Default,
    MostCentral,
    LeastCentral,
    /// Half the budget from the top of the centrality ranking, half from
    /// the bottom.
    EqualCombined,
}

impl Policy {
    pub const ALL: [Policy; 4] = [
        Policy::Default,
        Policy::MostCentral,
        Policy::LeastCentral,
        Policy::EqualCombined,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Policy::Default => "df",
            Policy::MostCentral => "mc",
            Policy::LeastCentral => "lc",
            Policy::EqualCombined => "ecm",
        }
    }

    pub fn needs_centrality(&self) -> bool {
        !matches!(self, Policy::Default)
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "df" => Ok(Policy::Default),
            "mc" => Ok(Policy::MostCentral),
            "lc" => Ok(Policy::LeastCentral),
            "ecm" => Ok(Policy::EqualCombined),
            other => Err(format!(
                "unknown policy '{other}' (expected df, mc, lc or ecm)"
            )),
        }
    }
}

/// Disjoint, exhaustive train/validation/test masks.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train_mask: Vec<bool>,
    pub val_mask: Vec<bool>,
    pub test_mask: Vec<bool>,
    pub budget: usize,
    pub labeling_rate: f64,
}

impl Split {
    pub fn num_nodes(&self) -> usize {
        self.train_mask.len()
    }

    pub fn train_count(&self) -> usize {
        self.train_mask.iter().filter(|&&b| b).count()
    }

    pub fn val_count(&self) -> usize {
        self.val_mask.iter().filter(|&&b| b).count()
    }

    pub fn test_count(&self) -> usize {
        self.test_mask.iter().filter(|&&b| b).count()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SelectOptions {
    /// Apply per-class quotas to mc/lc/ecm as well (df is always
    /// stratified).
    pub stratify: bool,
}

/// Labels-to-reveal count for a labeling rate, rounded half-up.
pub fn budget_for_rate(rate: f64, num_nodes: usize) -> usize {
    (rate * num_nodes as f64).round() as usize
}

/// Node indices ordered most-central first, ties toward lower index.
fn rank_descending(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then_with(|| a.cmp(&b)));
    order
}

/// Node indices ordered least-central first, ties toward lower index.
fn rank_ascending(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then_with(|| a.cmp(&b)));
    order
}

/// Per-class quotas: floor(budget / num_classes) each, remainder handed
/// round-robin to classes by index.
fn class_quotas(budget: usize, num_classes: usize) -> Vec<usize> {
    let base = budget / num_classes;
    let remainder = budget % num_classes;
    (0..num_classes)
        .map(|c| base + usize::from(c < remainder))
        .collect()
}

/// Pick `budget` training nodes under `policy`. Returns ascending node
/// indices.
pub fn select_train_nodes(
    scores: &CentralityScores,
    labels: &[usize],
    policy: Policy,
    budget: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    select_train_nodes_with(
        scores,
        labels,
        policy,
        budget,
        seed,
        &SelectOptions::default(),
    )
}

pub fn select_train_nodes_with(
    scores: &CentralityScores,
    labels: &[usize],
    policy: Policy,
    budget: usize,
    seed: u64,
    opts: &SelectOptions,
) -> Result<Vec<usize>> {
    let num_nodes = labels.len();
    if scores.scores.len() != num_nodes {
        return Err(Error::DimensionMismatch {
            context: "centrality scores vs labels",
            expected: num_nodes,
            actual: scores.scores.len(),
        });
    }
    if budget == 0 || budget > num_nodes {
        return Err(Error::BudgetOutOfRange { budget, num_nodes });
    }

    let mut chosen = match policy {
        Policy::Default => stratified_random(labels, budget, seed),
        _ if opts.stratify => stratified_ranked(&scores.scores, labels, policy, budget),
        Policy::MostCentral => rank_descending(&scores.scores)[..budget].to_vec(),
        Policy::LeastCentral => rank_ascending(&scores.scores)[..budget].to_vec(),
        Policy::EqualCombined => equal_combined(&scores.scores, budget),
    };
    chosen.sort_unstable();
    debug_assert_eq!(chosen.len(), budget);
    debug_assert!(chosen.windows(2).all(|w| w[0] < w[1]));
    Ok(chosen)
}

/// floor(budget/2) nodes from the top of the ranking, the rest from the
/// bottom; when the two ends meet on tiny graphs, the bottom walk simply
/// skips nodes the top half already claimed.
fn equal_combined(scores: &[f64], budget: usize) -> Vec<usize> {
    let top_half = budget / 2;
    let descending = rank_descending(scores);
    let ascending = rank_ascending(scores);
    let mut taken = vec![false; scores.len()];
    let mut chosen = Vec::with_capacity(budget);
    for &node in descending.iter().take(top_half) {
        taken[node] = true;
        chosen.push(node);
    }
    for &node in &ascending {
        if chosen.len() == budget {
            break;
        }
        if !taken[node] {
            taken[node] = true;
            chosen.push(node);
        }
    }
    chosen
}

/// Seeded stratified draw for the default policy. Classes that cannot
/// fill their quota spill the deficit onto the remaining pool.
fn stratified_random(labels: &[usize], budget: usize, seed: u64) -> Vec<usize> {
    let num_classes = labels.iter().copied().max().map_or(1, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); num_classes];
    for (node, &class) in labels.iter().enumerate() {
        members[class].push(node);
    }
    let quotas = class_quotas(budget, num_classes);

    let mut rng = SplitMix64::new(seed);
    let mut chosen = Vec::with_capacity(budget);
    let mut deficit = 0usize;
    let mut leftover: Vec<usize> = Vec::new();
    for (class, quota) in quotas.iter().enumerate() {
        let pool = &mut members[class];
        if pool.len() < *quota {
            log::warn!(
                "class {class} has only {} members for a quota of {quota}; spilling",
                pool.len()
            );
            deficit += quota - pool.len();
            chosen.extend_from_slice(pool);
        } else {
            rng.partial_shuffle(pool, *quota);
            chosen.extend_from_slice(&pool[..*quota]);
            leftover.extend_from_slice(&pool[*quota..]);
        }
    }
    if deficit > 0 {
        leftover.sort_unstable();
        rng.partial_shuffle(&mut leftover, deficit);
        chosen.extend_from_slice(&leftover[..deficit]);
    }
    chosen
}

/// Ranked selection with per-class quotas (the --stratify variant of
/// mc/lc/ecm). Deficits spill onto the global ranking.
fn stratified_ranked(
    scores: &[f64],
    labels: &[usize],
    policy: Policy,
    budget: usize,
) -> Vec<usize> {
    let num_classes = labels.iter().copied().max().map_or(1, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); num_classes];
    for (node, &class) in labels.iter().enumerate() {
        members[class].push(node);
    }
    let quotas = class_quotas(budget, num_classes);

    let mut taken = vec![false; scores.len()];
    let mut chosen = Vec::with_capacity(budget);
    for (class, quota) in quotas.iter().enumerate() {
        let class_scores: Vec<f64> = members[class].iter().map(|&n| scores[n]).collect();
        let local = match policy {
            Policy::MostCentral => rank_descending(&class_scores),
            Policy::LeastCentral => rank_ascending(&class_scores),
            Policy::EqualCombined => {
                equal_combined(&class_scores, (*quota).min(class_scores.len()))
            }
            Policy::Default => unreachable!("df handled by stratified_random"),
        };
        for local_idx in local.into_iter().take(*quota) {
            let node = members[class][local_idx];
            taken[node] = true;
            chosen.push(node);
        }
    }
    // Spill any deficit onto the policy's global ranking.
    if chosen.len() < budget {
        let global = match policy {
            Policy::LeastCentral => rank_ascending(scores),
            _ => rank_descending(scores),
        };
        for node in global {
            if chosen.len() == budget {
                break;
            }
            if !taken[node] {
                taken[node] = true;
                chosen.push(node);
            }
        }
    }
    chosen
}

/// Carve validation and test masks out of the non-train nodes: a seeded
/// uniform draw of `val_size` nodes validates, everything else tests.
pub fn make_split(
    num_nodes: usize,
    train_nodes: &[usize],
    val_size: usize,
    seed: u64,
) -> Result<Split> {
    let mut train_mask = vec![false; num_nodes];
    for &node in train_nodes {
        if node >= num_nodes {
            return Err(Error::NodeOutOfRange {
                index: node,
                num_nodes,
            });
        }
        train_mask[node] = true;
    }
    let budget = train_mask.iter().filter(|&&b| b).count();
    let mut rest: Vec<usize> = (0..num_nodes).filter(|&i| !train_mask[i]).collect();
    if val_size > rest.len() {
        return Err(Error::ValidationTooLarge {
            requested: val_size,
            available: rest.len(),
        });
    }
    let mut rng = SplitMix64::new(seed);
    rng.partial_shuffle(&mut rest, val_size);
    let mut val_mask = vec![false; num_nodes];
    for &node in &rest[..val_size] {
        val_mask[node] = true;
    }
    let test_mask: Vec<bool> = (0..num_nodes)
        .map(|i| !train_mask[i] && !val_mask[i])
        .collect();
    Ok(Split {
        labeling_rate: budget as f64 / num_nodes as f64,
        train_mask,
        val_mask,
        test_mask,
        budget,
    })
}
