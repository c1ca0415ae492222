//! Built-in coupling maps.

use super::{CouplingMap, LayoutError};

/// 27-qubit heavy-hex (Falcon family).
const FALCON_27: [(usize, usize); 28] = [
    (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8),
    (6, 7), (7, 10), (8, 9), (8, 11), (10, 12), (11, 14), (12, 13),
    (12, 15), (13, 14), (14, 16), (15, 18), (16, 19), (17, 18), (18, 21),
    (19, 20), (19, 22), (21, 23), (22, 25), (23, 24), (24, 25), (25, 26),
];

/// One chain of a heavy-hex lattice: `len` qubits starting at column `first_col`.
struct Row {
    len: usize,
    first_col: usize,
}

/// Chains of qubits joined between consecutive rows by single bridge
/// qubits. Gaps alternate bridge columns `0, 4, 8, …` and `2, 6, 10, …`.
/// Qubits are numbered row by row, each row followed by its bridges.
fn heavy_hex(name: &str, rows: &[Row]) -> Result<CouplingMap, LayoutError> {
    let span = rows.iter().map(|r| r.first_col + r.len).max().unwrap_or(0);
    let mut edges = Vec::new();
    let mut next = 0usize;
    let mut row_start = Vec::with_capacity(rows.len());
    let mut bridge_blocks: Vec<Vec<(usize, usize)>> = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        row_start.push(next);
        for i in 1..row.len {
            edges.push((next + i - 1, next + i));
        }
        next += row.len;
        if r + 1 < rows.len() {
            let first = if r % 2 == 0 { 0 } else { 2 };
            let bridges: Vec<(usize, usize)> = (first..span)
                .step_by(4)
                .enumerate()
                .map(|(i, col)| (next + i, col))
                .collect();
            next += bridges.len();
            bridge_blocks.push(bridges);
        }
    }
    let at = |r: usize, col: usize| -> Option<usize> {
        let row = &rows[r];
        (col >= row.first_col && col < row.first_col + row.len).then(|| row_start[r] + col - row.first_col)
    };
    for (gap, bridges) in bridge_blocks.iter().enumerate() {
        for &(q, col) in bridges {
            let above = at(gap, col);
            let below = at(gap + 1, col);
            match (above, below) {
                (Some(a), Some(b)) => {
                    edges.push((a, q));
                    edges.push((q, b));
                }
                _ => {
                    return Err(LayoutError::InvalidMap(format!(
                        "{name}: bridge column {col} misses a row"
                    )))
                }
            }
        }
    }
    CouplingMap::new(name, next, edges)
}

fn rows(spec: &[(usize, usize)]) -> Vec<Row> {
    spec.iter().map(|&(len, first_col)| Row { len, first_col }).collect()
}

/// Loads `heavy-hex-27`, `heavy-hex-65`, `heavy-hex-127`, `line-K` or
/// `grid-RxC`.
pub fn load_builtin_map(name: &str) -> Result<CouplingMap, LayoutError> {
    let unknown = || LayoutError::UnknownMap(name.to_string());
    match name {
        "heavy-hex-27" => CouplingMap::new(name, 27, FALCON_27),
        "heavy-hex-65" => heavy_hex(name, &rows(&[(10, 0), (11, 0), (11, 0), (11, 0), (10, 1)])),
        "heavy-hex-127" => heavy_hex(
            name,
            &rows(&[(14, 0), (15, 0), (15, 0), (15, 0), (15, 0), (15, 0), (14, 1)]),
        ),
        _ => {
            if let Some(k) = name.strip_prefix("line-") {
                let k: usize = k.parse().map_err(|_| unknown())?;
                if k == 0 {
                    return Err(unknown());
                }
                CouplingMap::new(name, k, (1..k).map(|i| (i - 1, i)))
            } else if let Some(dims) = name.strip_prefix("grid-") {
                let (r, c) = dims.split_once('x').ok_or_else(unknown)?;
                let r: usize = r.parse().map_err(|_| unknown())?;
                let c: usize = c.parse().map_err(|_| unknown())?;
                if r == 0 || c == 0 {
                    return Err(unknown());
                }
                let mut edges = Vec::new();
                for i in 0..r {
                    for j in 0..c {
                        let q = i * c + j;
                        if j + 1 < c {
                            edges.push((q, q + 1));
                        }
                        if i + 1 < r {
                            edges.push((q, q + c));
                        }
                    }
                }
                CouplingMap::new(name, r * c, edges)
            } else {
                Err(unknown())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn connected(map: &CouplingMap) -> bool {
        let d = map.distances_from(&[0]);
        d.iter().all(|x| x.is_some())
    }

    #[test]
    fn heavy_hex_sizes() {
        for (name, qubits, edges) in [
            ("heavy-hex-27", 27, 28),
            ("heavy-hex-65", 65, 72),
            ("heavy-hex-127", 127, 144),
        ] {
            let m = load_builtin_map(name).unwrap();
            assert_eq!(m.qubit_count(), qubits, "{name}");
            assert_eq!(m.edges().len(), edges, "{name}");
            assert!((0..qubits).all(|q| m.neighbors(q).len() <= 3), "{name} degree");
            assert!(connected(&m), "{name} connectivity");
        }
    }

    #[test]
    fn eagle_bridges_land_where_expected() {
        let m = load_builtin_map("heavy-hex-127").unwrap();
        for (a, b) in [(0, 14), (14, 18), (20, 33), (33, 39), (58, 71), (71, 77), (108, 112), (112, 126)] {
            assert!(m.has_edge(a, b), "{a}-{b}");
        }
        let m = load_builtin_map("heavy-hex-65").unwrap();
        for (a, b) in [(0, 10), (10, 13), (23, 26), (26, 37), (51, 54), (54, 64)] {
            assert!(m.has_edge(a, b), "{a}-{b}");
        }
    }

    #[test]
    fn parametric_maps() {
        let m = load_builtin_map("line-5").unwrap();
        assert_eq!(m.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
        let g = load_builtin_map("grid-2x3").unwrap();
        assert_eq!(g.qubit_count(), 6);
        assert_eq!(g.edges().len(), 7);
        for bad in ["ring-4", "line-x", "grid-3", "line-0", "heavy-hex-28"] {
            assert!(matches!(load_builtin_map(bad), Err(LayoutError::UnknownMap(_))), "{bad}");
        }
    }
}
