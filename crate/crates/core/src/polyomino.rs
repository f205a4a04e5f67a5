//! Fixed polyominoes (edge-connected cell sets of Z² up to translation) by
//! Redelmeier's method: grow from the lowest, leftmost cell and never add a
//! cell twice along one branch, so each shape appears exactly once.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::lattice::{LatticeDomain, LatticePoint};

/// Sizes above this are refused; the count at 16 is already ~2.6e8.
pub const MAX_POLYOMINO_SIZE: usize = 14;

type Cell = (i32, i32);

fn admissible(c: Cell) -> bool {
    c.1 > 0 || (c.1 == 0 && c.0 >= 0)
}

fn grow(
    untried: &mut Vec<Cell>,
    poly: &mut Vec<Cell>,
    seen: &mut HashSet<Cell>,
    max: usize,
    visit: &mut dyn FnMut(&[Cell]),
) {
    while let Some(c) = untried.pop() {
        poly.push(c);
        visit(poly);
        if poly.len() < max {
            let mut added = Vec::new();
            for nb in [
                (c.0 + 1, c.1),
                (c.0 - 1, c.1),
                (c.0, c.1 + 1),
                (c.0, c.1 - 1),
            ] {
                if admissible(nb) && !poly.contains(&nb) && seen.insert(nb) {
                    added.push(nb);
                }
            }
            let mut next = untried.clone();
            next.extend_from_slice(&added);
            grow(&mut next, poly, seen, max, visit);
            for a in added {
                seen.remove(&a);
            }
        }
        poly.pop();
    }
}

/// Calls `visit` once per fixed polyomino of size `1..=k` (cells in
/// insertion order, not normalised).
pub fn for_each_polyomino(k: usize, mut visit: impl FnMut(&[Cell])) -> Result<()> {
    if k > MAX_POLYOMINO_SIZE {
        return Err(Error::TooLarge(format!(
            "polyomino size {k} exceeds {MAX_POLYOMINO_SIZE}"
        )));
    }
    if k == 0 {
        return Ok(());
    }
    let mut seen = HashSet::from([(0, 0)]);
    grow(&mut vec![(0, 0)], &mut Vec::new(), &mut seen, k, &mut visit);
    Ok(())
}

pub fn polyomino_counts(k: usize) -> Vec<usize> {
    let mut counts = vec![0; k.min(MAX_POLYOMINO_SIZE)];
    let _ = for_each_polyomino(k.min(MAX_POLYOMINO_SIZE), |p| counts[p.len() - 1] += 1);
    counts
}

/// All fixed polyominoes of size `1..=k`, grouped by size, each translated
/// so its bounding box starts at the origin, in lexicographic order of the
/// sorted cell list.
pub fn fixed_polyominoes(k: usize) -> Result<Vec<Vec<LatticeDomain>>> {
    let mut shapes: Vec<Vec<Vec<Cell>>> = vec![Vec::new(); k];
    for_each_polyomino(k, |p| {
        let mx = p.iter().map(|c| c.0).min().unwrap_or(0);
        let my = p.iter().map(|c| c.1).min().unwrap_or(0);
        let mut cells: Vec<Cell> = p.iter().map(|&(x, y)| (x - mx, y - my)).collect();
        cells.sort_unstable();
        shapes[p.len() - 1].push(cells);
    })?;
    shapes
        .into_iter()
        .map(|mut level| {
            level.sort_unstable();
            level
                .into_iter()
                .map(|cells| {
                    LatticeDomain::new(
                        2,
                        cells
                            .into_iter()
                            .map(|(x, y)| LatticePoint::new(vec![x, y])),
                    )
                })
                .collect()
        })
        .collect()
}
