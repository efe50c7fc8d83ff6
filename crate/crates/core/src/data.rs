//! Dataset loading, saving, and synthesis.
//!
//! On-disk layout is a plain-text directory:
//!   - `nodes.tsv`: `node_id<TAB>label<TAB>features`, features either
//!     dense (`f0 f1 ...`) or sparse (`idx:val idx:val ...`);
//!   - `edges.tsv`: `src<TAB>dst`, interpreted undirected;
//!   - `meta.tsv` (optional): expected `nodes`/`edges`/`components`/
//!     `classes`/`features` counts, validated after loading.
//!
//! All files are UTF-8 with LF endings; `#` starts a comment line.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::SplitMix64;
use ndarray::Array2;
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub graph: Graph,
    pub features: Array2<f64>,
    /// Dense class index per node; class names sort lexicographically.
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub name: String,
    /// Number of edge lines in the source file, before symmetrization and
    /// dedup. Table-style edge counts may follow either convention.
    pub raw_edge_pairs: usize,
}

impl DatasetBundle {
    pub fn num_nodes(&self) -> usize {
        self.graph.num_nodes()
    }

    pub fn num_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn num_features(&self) -> usize {
        self.features.ncols()
    }

    /// One-line dataset summary in the node/edge/component/class/feature
    /// column order.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} nodes, {} edge pairs ({} undirected), {} components, {} classes, {} features",
            self.name,
            self.num_nodes(),
            self.raw_edge_pairs,
            self.graph.num_edges(),
            self.graph.connected_components().num_components,
            self.num_classes(),
            self.num_features()
        )
    }
}

fn parse_error(file: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        file: file.display().to_string(),
        line,
        msg: msg.into(),
    }
}

struct NodeRow {
    line: usize,
    id: usize,
    label: String,
    dense: Option<Vec<f64>>,
    sparse: Option<Vec<(usize, f64)>>,
}

fn parse_node_line(path: &Path, line_no: usize, line: &str) -> Result<NodeRow> {
    let mut fields = line.split('\t');
    let id_field = fields
        .next()
        .ok_or_else(|| parse_error(path, line_no, "missing node id"))?;
    let label = fields
        .next()
        .ok_or_else(|| parse_error(path, line_no, "missing label field"))?
        .to_string();
    let feature_field = fields.next().unwrap_or("");
    if fields.next().is_some() {
        return Err(parse_error(path, line_no, "too many tab-separated fields"));
    }
    let id: usize = id_field
        .parse()
        .map_err(|_| parse_error(path, line_no, format!("bad node id '{id_field}'")))?;

    let tokens: Vec<&str> = feature_field.split_whitespace().collect();
    if tokens.is_empty() {
        // all-zero sparse row; says nothing about the dimension
        return Ok(NodeRow {
            line: line_no,
            id,
            label,
            dense: None,
            sparse: Some(Vec::new()),
        });
    }
    let is_sparse = tokens.iter().any(|t| t.contains(':'));
    if is_sparse {
        let mut entries = Vec::with_capacity(tokens.len());
        for token in tokens {
            let (idx_str, val_str) = token
                .split_once(':')
                .ok_or_else(|| parse_error(path, line_no, format!("bad token '{token}'")))?;
            let idx: usize = idx_str.parse().map_err(|_| {
                parse_error(path, line_no, format!("bad feature index '{idx_str}'"))
            })?;
            let val: f64 = val_str.parse().map_err(|_| {
                parse_error(path, line_no, format!("bad feature value '{val_str}'"))
            })?;
            if !val.is_finite() {
                return Err(parse_error(path, line_no, "non-finite feature value"));
            }
            entries.push((idx, val));
        }
        Ok(NodeRow {
            line: line_no,
            id,
            label,
            dense: None,
            sparse: Some(entries),
        })
    } else {
        let mut values = Vec::with_capacity(tokens.len());
        for token in tokens {
            let val: f64 = token
                .parse()
                .map_err(|_| parse_error(path, line_no, format!("bad feature value '{token}'")))?;
            if !val.is_finite() {
                return Err(parse_error(path, line_no, "non-finite feature value"));
            }
            values.push(val);
        }
        Ok(NodeRow {
            line: line_no,
            id,
            label,
            dense: Some(values),
            sparse: None,
        })
    }
}

fn data_lines(content: &str) -> impl Iterator<Item = (usize, &str)> {
    content
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

/// Load a dataset directory and validate it against `meta.tsv` when that
/// file is present.
pub fn load_dataset(dir: &Path) -> Result<DatasetBundle> {
    let nodes_path = dir.join("nodes.tsv");
    let edges_path = dir.join("edges.tsv");
    if !nodes_path.is_file() {
        return Err(Error::MissingFile(nodes_path.display().to_string()));
    }
    if !edges_path.is_file() {
        return Err(Error::MissingFile(edges_path.display().to_string()));
    }

    let meta = read_meta(&dir.join("meta.tsv"))?;

    // nodes
    let nodes_content = fs::read_to_string(&nodes_path)?;
    let mut rows = Vec::new();
    for (line_no, line) in data_lines(&nodes_content) {
        rows.push(parse_node_line(&nodes_path, line_no, line)?);
    }
    let num_nodes = rows.len();
    if num_nodes == 0 {
        return Err(parse_error(&nodes_path, 1, "no node rows"));
    }

    // feature dimension: dense rows fix it; otherwise meta or max index
    let mut dense_dim: Option<(usize, usize)> = None; // (dim, first line)
    let mut max_sparse_idx: Option<usize> = None;
    for row in &rows {
        if let Some(values) = &row.dense {
            match dense_dim {
                None => dense_dim = Some((values.len(), row.line)),
                Some((dim, first_line)) => {
                    if values.len() != dim {
                        return Err(parse_error(
                            &nodes_path,
                            row.line,
                            format!(
                                "ragged feature row: {} values but line {first_line} has {dim}",
                                values.len()
                            ),
                        ));
                    }
                }
            }
        }
        if let Some(entries) = &row.sparse {
            for &(idx, _) in entries {
                max_sparse_idx = Some(max_sparse_idx.map_or(idx, |m| m.max(idx)));
            }
        }
    }
    let num_features = match (dense_dim, meta.get("features")) {
        (Some((dim, first_line)), declared) => {
            if let Some(&meta_dim) = declared {
                if meta_dim != dim {
                    return Err(parse_error(
                        &nodes_path,
                        first_line,
                        format!("dense rows have {dim} features but meta.tsv declares {meta_dim}"),
                    ));
                }
            }
            dim
        }
        (None, Some(&meta_dim)) => meta_dim,
        (None, None) => max_sparse_idx
            .map(|m| m + 1)
            .ok_or_else(|| parse_error(&nodes_path, 1, "cannot determine feature dimension"))?,
    };

    let mut seen_line = vec![0usize; num_nodes];
    let mut features = Array2::<f64>::zeros((num_nodes, num_features));
    let mut label_strings = vec![String::new(); num_nodes];
    for row in &rows {
        if row.id >= num_nodes {
            return Err(parse_error(
                &nodes_path,
                row.line,
                format!("node id {} not in contiguous range 0..{num_nodes}", row.id),
            ));
        }
        if seen_line[row.id] != 0 {
            return Err(parse_error(
                &nodes_path,
                row.line,
                format!(
                    "duplicate node id {} (first at line {})",
                    row.id, seen_line[row.id]
                ),
            ));
        }
        seen_line[row.id] = row.line;
        label_strings[row.id] = row.label.clone();
        if let Some(values) = &row.dense {
            for (j, &v) in values.iter().enumerate() {
                features[[row.id, j]] = v;
            }
        }
        if let Some(entries) = &row.sparse {
            for &(idx, v) in entries {
                if idx >= num_features {
                    return Err(parse_error(
                        &nodes_path,
                        row.line,
                        format!("feature index {idx} exceeds dimension {num_features}"),
                    ));
                }
                features[[row.id, idx]] = v;
            }
        }
    }

    // lexicographic class ids
    let mut class_names: Vec<String> = label_strings.clone();
    class_names.sort();
    class_names.dedup();
    let class_index: BTreeMap<&str, usize> = class_names
        .iter()
        .enumerate()
        .map(|(i, name)| (name.as_str(), i))
        .collect();
    let labels: Vec<usize> = label_strings
        .iter()
        .map(|name| class_index[name.as_str()])
        .collect();

    // edges
    let edges_content = fs::read_to_string(&edges_path)?;
    let mut edges = Vec::new();
    for (line_no, line) in data_lines(&edges_content) {
        let (src_str, dst_str) = line
            .split_once('\t')
            .ok_or_else(|| parse_error(&edges_path, line_no, "expected src<TAB>dst"))?;
        let src: usize = src_str
            .trim()
            .parse()
            .map_err(|_| parse_error(&edges_path, line_no, format!("bad node id '{src_str}'")))?;
        let dst: usize = dst_str
            .trim()
            .parse()
            .map_err(|_| parse_error(&edges_path, line_no, format!("bad node id '{dst_str}'")))?;
        if src >= num_nodes || dst >= num_nodes {
            return Err(parse_error(
                &edges_path,
                line_no,
                format!("edge ({src}, {dst}) dangles outside 0..{num_nodes}"),
            ));
        }
        edges.push((src, dst));
    }
    let raw_edge_pairs = edges.len();
    let graph = Graph::from_edge_list(&edges, num_nodes)?;

    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_string());
    let bundle = DatasetBundle {
        graph,
        features,
        labels,
        class_names,
        name,
        raw_edge_pairs,
    };
    validate_meta(&bundle, &meta)?;
    Ok(bundle)
}

fn read_meta(path: &Path) -> Result<BTreeMap<String, usize>> {
    let mut meta = BTreeMap::new();
    if !path.is_file() {
        return Ok(meta);
    }
    let content = fs::read_to_string(path)?;
    for (line_no, line) in data_lines(&content) {
        let (key, value) = line
            .split_once('\t')
            .ok_or_else(|| parse_error(path, line_no, "expected key<TAB>value"))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| parse_error(path, line_no, format!("bad count '{}'", value.trim())))?;
        meta.insert(key.trim().to_string(), value);
    }
    Ok(meta)
}

fn validate_meta(bundle: &DatasetBundle, meta: &BTreeMap<String, usize>) -> Result<()> {
    let components = bundle.graph.connected_components().num_components;
    let checks: [(&str, usize, Option<usize>); 5] = [
        ("nodes", bundle.num_nodes(), None),
        // either raw pair count or undirected count may be declared
        (
            "edges",
            bundle.raw_edge_pairs,
            Some(bundle.graph.num_edges()),
        ),
        ("components", components, None),
        ("classes", bundle.num_classes(), None),
        ("features", bundle.num_features(), None),
    ];
    for (field, actual, alternative) in checks {
        if let Some(&expected) = meta.get(field) {
            let ok = actual == expected || alternative == Some(expected);
            if !ok {
                return Err(Error::MetaMismatch {
                    field: field.to_string(),
                    expected,
                    actual,
                });
            }
        }
    }
    Ok(())
}

/// Write a dataset directory that `load_dataset` reads back identically.
/// Feature rows denser than one entry in four are written dense,
/// otherwise sparse.
pub fn save_dataset(bundle: &DatasetBundle, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;

    let mut nodes = String::new();
    let num_features = bundle.num_features();
    for i in 0..bundle.num_nodes() {
        let row = bundle.features.row(i);
        let nonzero = row.iter().filter(|&&v| v != 0.0).count();
        let rendered = if num_features > 0 && nonzero * 4 > num_features {
            row.iter()
                .map(|v| format!("{v}"))
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            row.iter()
                .enumerate()
                .filter(|(_, &v)| v != 0.0)
                .map(|(j, v)| format!("{j}:{v}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        nodes.push_str(&format!(
            "{i}\t{}\t{rendered}\n",
            bundle.class_names[bundle.labels[i]]
        ));
    }

    let mut edges = String::new();
    for i in 0..bundle.num_nodes() {
        for &j in bundle.graph.neighbors(i) {
            if i < j {
                edges.push_str(&format!("{i}\t{j}\n"));
            }
        }
    }

    let meta = format!(
        "nodes\t{}\nedges\t{}\ncomponents\t{}\nclasses\t{}\nfeatures\t{}\n",
        bundle.num_nodes(),
        bundle.graph.num_edges(),
        bundle.graph.connected_components().num_components,
        bundle.num_classes(),
        num_features,
    );

    fs::File::create(dir.join("nodes.tsv"))?.write_all(nodes.as_bytes())?;
    fs::File::create(dir.join("edges.tsv"))?.write_all(edges.as_bytes())?;
    fs::File::create(dir.join("meta.tsv"))?.write_all(meta.as_bytes())?;
    Ok(())
}

/// Divide each nonzero row by its L1 norm; all-zero rows stay zero.
pub fn row_normalize_features(features: &Array2<f64>) -> Array2<f64> {
    let mut out = features.clone();
    for mut row in out.rows_mut() {
        let norm: f64 = row.iter().map(|v| v.abs()).sum();
        if norm > 0.0 {
            for v in row.iter_mut() {
                *v /= norm;
            }
        }
    }
    out
}

/// Stochastic-block-model generator configuration. Nodes split into
/// `num_classes` contiguous blocks; an edge joins two nodes with
/// probability `p_in` inside a block and `p_out` across blocks. Features
/// are a per-class one-hot template scaled by `feature_signal` plus unit
/// Gaussian noise.
#[derive(Debug, Clone)]
pub struct SbmConfig {
    pub num_nodes: usize,
    pub num_classes: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub feature_dim: usize,
    pub feature_signal: f64,
    pub seed: u64,
}

impl Default for SbmConfig {
    fn default() -> Self {
        Self {
            num_nodes: 200,
            num_classes: 2,
            p_in: 0.2,
            p_out: 0.01,
            feature_dim: 16,
            feature_signal: 1.0,
            seed: 0,
        }
    }
}

pub fn generate_sbm(cfg: &SbmConfig) -> Result<DatasetBundle> {
    for (name, value) in [("p_in", cfg.p_in), ("p_out", cfg.p_out)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidProbability { name, value });
        }
    }
    if cfg.p_out > cfg.p_in {
        return Err(Error::InvalidProbability {
            name: "p_out > p_in",
            value: cfg.p_out,
        });
    }
    for (context, value) in [
        ("num_nodes", cfg.num_nodes),
        ("num_classes", cfg.num_classes),
        ("feature_dim", cfg.feature_dim),
    ] {
        if value == 0 {
            return Err(Error::ZeroDimension { context });
        }
    }
    if cfg.num_classes > cfg.num_nodes {
        return Err(Error::DimensionMismatch {
            context: "classes vs nodes",
            expected: cfg.num_nodes,
            actual: cfg.num_classes,
        });
    }

    let n = cfg.num_nodes;
    let block_of = |i: usize| i * cfg.num_classes / n;
    let mut rng = SplitMix64::new(cfg.seed);

    // edges first, then features, in a fixed order from one stream
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if block_of(i) == block_of(j) {
                cfg.p_in
            } else {
                cfg.p_out
            };
            if rng.next_f64() < p {
                edges.push((i, j));
            }
        }
    }
    let graph = Graph::from_edge_list(&edges, n)?;

    let mut features = Array2::<f64>::zeros((n, cfg.feature_dim));
    for i in 0..n {
        let template = block_of(i) % cfg.feature_dim;
        for j in 0..cfg.feature_dim {
            let base = if j == template {
                cfg.feature_signal
            } else {
                0.0
            };
            features[[i, j]] = base + rng.next_gaussian();
        }
    }

    let labels: Vec<usize> = (0..n).map(block_of).collect();
    // zero-padded names keep lexicographic order equal to class order
    let width = (cfg.num_classes - 1).max(1).to_string().len();
    let class_names: Vec<String> = (0..cfg.num_classes)
        .map(|c| format!("c{c:0width$}"))
        .collect();

    Ok(DatasetBundle {
        graph,
        features,
        labels,
        class_names,
        name: format!("sbm-n{}-k{}", n, cfg.num_classes),
        raw_edge_pairs: edges.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use std::fs;

    fn write_toy(dir: &Path) {
        fs::create_dir_all(dir).unwrap();
        fs::write(
            dir.join("nodes.tsv"),
            "# toy dataset\n0\tred\t1 0\n1\tblue\t0 2\n",
        )
        .unwrap();
        fs::write(dir.join("edges.tsv"), "0\t1\n").unwrap();
    }

    #[test]
    fn load_toy_dataset() {
        let dir = tempfile::tempdir().unwrap();
        write_toy(dir.path());
        let bundle = load_dataset(dir.path()).unwrap();
        assert_eq!(bundle.num_nodes(), 2);
        assert_eq!(bundle.num_features(), 2);
        assert_eq!(bundle.class_names, vec!["blue", "red"]);
        assert_eq!(bundle.labels, vec![1, 0]); // lexicographic: blue=0, red=1
        assert_eq!(bundle.graph.num_edges(), 1);
        assert_eq!(bundle.raw_edge_pairs, 1);
        assert_eq!(bundle.features, array![[1.0, 0.0], [0.0, 2.0]]);
    }

    #[test]
    fn load_save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        write_toy(dir.path());
        let bundle = load_dataset(dir.path()).unwrap();

        let copy_dir = tempfile::tempdir().unwrap();
        let copy_path = copy_dir.path().join(dir.path().file_name().unwrap());
        save_dataset(&bundle, &copy_path).unwrap();
        let reloaded = load_dataset(&copy_path).unwrap();
        assert_eq!(bundle, reloaded);
    }

    #[test]
    fn sparse_feature_rows() {
        let dir = tempfile::tempdir().unwrap();
        fs::create_dir_all(dir.path()).unwrap();
        fs::write(
            dir.path().join("nodes.tsv"),
            "0\ta\t3:1.5\n1\tb\t\n2\ta\t0:2 4:0.25\n",
        )
        .unwrap();
        fs::write(dir.path().join("edges.tsv"), "0\t1\n1\t2\n").unwrap();
        let bundle = load_dataset(dir.path()).unwrap();
        assert_eq!(bundle.num_features(), 5);
        assert_eq!(bundle.features[[0, 3]], 1.5);
        assert_eq!(bundle.features[[2, 4]], 0.25);
        assert_eq!(bundle.features.row(1).sum(), 0.0);
    }

    #[test]
    fn ragged_rows_rejected_with_line() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("nodes.tsv"), "0\ta\t1 2\n1\tb\t1 2 3\n").unwrap();
        fs::write(dir.path().join("edges.tsv"), "").unwrap();
        let err = load_dataset(dir.path()).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
        assert!(err.to_string().contains("ragged"), "{err}");
    }

    #[test]
    fn dangling_edge_rejected_with_line() {
        let dir = tempfile::tempdir().unwrap();
        write_toy(dir.path());
        fs::write(dir.path().join("edges.tsv"), "0\t1\n0\t7\n").unwrap();
        let err = load_dataset(dir.path()).unwrap_err();
        assert!(err.to_string().contains(":2:"), "{err}");
        assert!(err.to_string().contains("dangles"), "{err}");
    }

    #[test]
    fn duplicate_node_id_rejected() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("nodes.tsv"), "0\ta\t1\n0\tb\t2\n").unwrap();
        fs::write(dir.path().join("edges.tsv"), "").unwrap();
        let err = load_dataset(dir.path()).unwrap_err();
        assert!(err.to_string().contains("duplicate node id"), "{err}");
    }

    #[test]
    fn missing_file_named() {
        let dir = tempfile::tempdir().unwrap();
        let err = load_dataset(dir.path()).unwrap_err();
        assert!(matches!(err, Error::MissingFile(_)));
    }

    #[test]
    fn meta_mismatch_aborts_with_field() {
        let dir = tempfile::tempdir().unwrap();
        write_toy(dir.path());
        fs::write(
            dir.path().join("meta.tsv"),
            "nodes\t2\nedges\t1\ncomponents\t5\n",
        )
        .unwrap();
        let err = load_dataset(dir.path()).unwrap_err();
        match err {
            Error::MetaMismatch {
                field,
                expected,
                actual,
            } => {
                assert_eq!(field, "components");
                assert_eq!(expected, 5);
                assert_eq!(actual, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn meta_accepts_either_edge_convention() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("nodes.tsv"), "0\ta\t1\n1\tb\t2\n").unwrap();
        // the same undirected edge listed in both directions: raw 2, undirected 1
        fs::write(dir.path().join("edges.tsv"), "0\t1\n1\t0\n").unwrap();
        for declared in [1usize, 2usize] {
            fs::write(dir.path().join("meta.tsv"), format!("edges\t{declared}\n")).unwrap();
            assert!(load_dataset(dir.path()).is_ok(), "edges={declared}");
        }
        fs::write(dir.path().join("meta.tsv"), "edges\t3\n").unwrap();
        assert!(load_dataset(dir.path()).is_err());
    }

    #[test]
    fn row_normalize_examples() {
        let m = array![[2.0, 2.0, 0.0], [0.0, 0.0, 0.0], [-1.0, 3.0, 0.0]];
        let normalized = row_normalize_features(&m);
        assert_eq!(normalized.row(0).to_vec(), vec![0.5, 0.5, 0.0]);
        assert_eq!(normalized.row(1).to_vec(), vec![0.0, 0.0, 0.0]);
        // L1 norm uses absolute values
        assert_eq!(normalized.row(2).to_vec(), vec![-0.25, 0.75, 0.0]);
    }

    #[test]
    fn row_normalize_random_rows_sum_to_one() {
        let mut rng = SplitMix64::new(6);
        let m = Array2::from_shape_fn((30, 8), |_| rng.next_f64());
        let normalized = row_normalize_features(&m);
        for row in normalized.rows() {
            let sum: f64 = row.iter().map(|v| v.abs()).sum();
            assert!((sum - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sbm_edgeless_when_probabilities_zero() {
        let bundle = generate_sbm(&SbmConfig {
            num_nodes: 10,
            num_classes: 2,
            p_in: 0.0,
            p_out: 0.0,
            ..SbmConfig::default()
        })
        .unwrap();
        assert_eq!(bundle.graph.num_edges(), 0);
        assert_eq!(bundle.graph.connected_components().num_components, 10);
    }

    #[test]
    fn sbm_two_cliques() {
        let bundle = generate_sbm(&SbmConfig {
            num_nodes: 10,
            num_classes: 2,
            p_in: 1.0,
            p_out: 0.0,
            ..SbmConfig::default()
        })
        .unwrap();
        assert_eq!(bundle.graph.connected_components().num_components, 2);
        assert_eq!(bundle.graph.num_edges(), 2 * (5 * 4 / 2));
    }

    #[test]
    fn sbm_within_block_density_near_p_in() {
        let cfg = SbmConfig {
            num_nodes: 200,
            num_classes: 2,
            p_in: 0.2,
            p_out: 0.01,
            seed: 31,
            ..SbmConfig::default()
        };
        let bundle = generate_sbm(&cfg).unwrap();
        let mut within = 0usize;
        for i in 0..200 {
            for &j in bundle.graph.neighbors(i) {
                if i < j && bundle.labels[i] == bundle.labels[j] {
                    within += 1;
                }
            }
        }
        let pairs_within = 2.0 * (100.0 * 99.0 / 2.0);
        let density = within as f64 / pairs_within;
        assert!((density - cfg.p_in).abs() < 0.05, "density {density}");
    }

    #[test]
    fn sbm_deterministic() {
        let cfg = SbmConfig {
            seed: 9,
            ..SbmConfig::default()
        };
        let a = generate_sbm(&cfg).unwrap();
        let b = generate_sbm(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sbm_rejects_bad_probabilities() {
        assert!(generate_sbm(&SbmConfig {
            p_in: 1.5,
            ..SbmConfig::default()
        })
        .is_err());
        assert!(generate_sbm(&SbmConfig {
            p_in: 0.1,
            p_out: 0.2,
            ..SbmConfig::default()
        })
        .is_err());
    }

    #[test]
    fn sbm_round_trips_through_disk() {
        let bundle = generate_sbm(&SbmConfig {
            num_nodes: 30,
            num_classes: 3,
            p_in: 0.3,
            p_out: 0.05,
            feature_dim: 4,
            feature_signal: 2.0,
            seed: 12,
        })
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(&bundle.name);
        save_dataset(&bundle, &path).unwrap();
        let reloaded = load_dataset(&path).unwrap();
        assert_eq!(bundle, reloaded);
    }
}
