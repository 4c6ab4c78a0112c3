//! Marching-squares isolines on a rectangular lattice of samples.

use std::collections::HashMap;

pub type Polyline = Vec<[f64; 2]>;

#[derive(Debug, Clone, PartialEq)]
pub struct ContourLevel {
    pub level: f64,
    pub polylines: Vec<Polyline>,
}

/// Lattice edge: horizontal edges join `(i, j)`–`(i+1, j)`, vertical ones
/// `(i, j)`–`(i, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    H(usize, usize),
    V(usize, usize),
}

/// Isolines of `values` (row-major, `values[j * xs.len() + i]` at
/// `(xs[i], ys[j])`) at `level`, joined into polylines.
pub fn isolines(values: &[f64], xs: &[f64], ys: &[f64], level: f64) -> Vec<Polyline> {
    let (nx, ny) = (xs.len(), ys.len());
    assert_eq!(values.len(), nx * ny, "value lattice does not match coordinates");
    let at = |i: usize, j: usize| values[j * nx + i];
    let above = |i: usize, j: usize| at(i, j) > level;

    let point = |e: Edge| -> [f64; 2] {
        let ((i0, j0), (i1, j1)) = match e {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        };
        let (a, b) = (at(i0, j0), at(i1, j1));
        let s = if a == b { 0.5 } else { (level - a) / (b - a) };
        [xs[i0] + s * (xs[i1] - xs[i0]), ys[j0] + s * (ys[j1] - ys[j0])]
    };

    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let case = above(i, j) as u8
                | (above(i + 1, j) as u8) << 1
                | (above(i + 1, j + 1) as u8) << 2
                | (above(i, j + 1) as u8) << 3;
            let (b, r, t, l) = (Edge::H(i, j), Edge::V(i + 1, j), Edge::H(i, j + 1), Edge::V(i, j));
            let center_above =
                (at(i, j) + at(i + 1, j) + at(i + 1, j + 1) + at(i, j + 1)) / 4.0 > level;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((l, b)),
                2 | 13 => segments.push((b, r)),
                3 | 12 => segments.push((l, r)),
                4 | 11 => segments.push((r, t)),
                6 | 9 => segments.push((b, t)),
                7 | 8 => segments.push((l, t)),
                5 => {
                    if center_above {
                        segments.extend([(b, r), (t, l)]);
                    } else {
                        segments.extend([(l, b), (r, t)]);
                    }
                }
                10 => {
                    if center_above {
                        segments.extend([(l, b), (r, t)]);
                    } else {
                        segments.extend([(b, r), (t, l)]);
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // Each lattice edge is shared by at most two segments, so chains are
    // walked through an edge -> segments map.
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, (e0, e1)) in segments.iter().enumerate() {
        by_edge.entry(*e0).or_default().push(k);
        by_edge.entry(*e1).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let (e0, e1) = segments[start];
        let mut forward = vec![e0, e1];
        extend_chain(&mut forward, &segments, &by_edge, &mut used);
        let mut backward = vec![e0];
        extend_chain(&mut backward, &segments, &by_edge, &mut used);
        backward.reverse();
        backward.pop();
        backward.extend(forward);
        lines.push(backward.into_iter().map(point).collect());
    }
    lines
}

fn extend_chain(
    chain: &mut Vec<Edge>,
    segments: &[(Edge, Edge)],
    by_edge: &HashMap<Edge, Vec<usize>>,
    used: &mut [bool],
) {
    loop {
        let tip = *chain.last().expect("chain is never empty");
        let next = by_edge[&tip].iter().copied().find(|&k| !used[k]);
        match next {
            Some(k) => {
                used[k] = true;
                let (a, b) = segments[k];
                chain.push(if a == tip { b } else { a });
            }
            None => return,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(n: usize, f: impl Fn(f64, f64) -> f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let xs: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        let ys = xs.clone();
        let v = ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).map(|(x, y)| f(x, y)).collect();
        (v, xs, ys)
    }

    #[test]
    fn circle_is_one_closed_loop() {
        let (v, xs, ys) = lattice(41, |x, y| x * x + y * y);
        let lines = isolines(&v, &xs, &ys, 0.25);
        assert_eq!(lines.len(), 1);
        let line = &lines[0];
        assert_eq!(line.first(), line.last());
        for p in line {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!((r - 0.5).abs() < 5e-3, "{r}");
        }
    }

    #[test]
    fn straight_front() {
        let (v, xs, ys) = lattice(21, |x, _| x);
        let lines = isolines(&v, &xs, &ys, 0.33);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), 21);
        assert!(lines[0].iter().all(|p| (p[0] - 0.33).abs() < 1e-12));
    }

    #[test]
    fn empty_when_level_outside_range() {
        let (v, xs, ys) = lattice(11, |x, y| x + y);
        assert!(isolines(&v, &xs, &ys, 5.0).is_empty());
        assert!(isolines(&v, &xs, &ys, -5.0).is_empty());
    }

    #[test]
    fn saddle_gives_two_lines() {
        let (v, xs, ys) = lattice(21, |x, y| x * y);
        let lines = isolines(&v, &xs, &ys, 0.1);
        assert_eq!(lines.len(), 2);
    }
}
