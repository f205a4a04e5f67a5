//! Naive breadth-first growth with translation normalisation, compared
//! against the Redelmeier enumerator.

use std::collections::BTreeSet;

use steklov::polyomino::{fixed_polyominoes, polyomino_counts};

type Shape = Vec<(i32, i32)>;

fn normalise(cells: &BTreeSet<(i32, i32)>) -> Shape {
    let mx = cells.iter().map(|c| c.0).min().unwrap();
    let my = cells.iter().map(|c| c.1).min().unwrap();
    let mut v: Shape = cells.iter().map(|&(x, y)| (x - mx, y - my)).collect();
    v.sort();
    v
}

fn naive(k: usize) -> Vec<BTreeSet<Shape>> {
    let mut levels = vec![BTreeSet::from([vec![(0, 0)]])];
    while levels.len() < k {
        let mut next = BTreeSet::new();
        for shape in levels.last().unwrap() {
            let set: BTreeSet<(i32, i32)> = shape.iter().copied().collect();
            for &(x, y) in shape {
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let c = (x + dx, y + dy);
                    if !set.contains(&c) {
                        let mut grown = set.clone();
                        grown.insert(c);
                        next.insert(normalise(&grown));
                    }
                }
            }
        }
        levels.push(next);
    }
    levels
}

#[test]
fn counts_match_naive_growth() {
    let oracle = naive(8);
    let counts = polyomino_counts(8);
    let expected: Vec<usize> = oracle.iter().map(|s| s.len()).collect();
    assert_eq!(counts, expected);
    assert_eq!(expected, vec![1, 2, 6, 19, 63, 216, 760, 2725]);
    assert_eq!(counts.iter().sum::<usize>(), 3792);
}

#[test]
fn shapes_match_naive_growth() {
    let oracle = naive(7);
    let found = fixed_polyominoes(7).unwrap();
    for (size, level) in found.iter().enumerate() {
        let shapes: BTreeSet<Shape> = level
            .iter()
            .map(|d| {
                let cells: BTreeSet<(i32, i32)> =
                    d.points().iter().map(|p| (p.0[0], p.0[1])).collect();
                assert_eq!(
                    normalise(&cells),
                    d.points()
                        .iter()
                        .map(|p| (p.0[0], p.0[1]))
                        .collect::<Shape>()
                );
                normalise(&cells)
            })
            .collect();
        assert_eq!(shapes.len(), level.len(), "duplicates at size {}", size + 1);
        assert_eq!(shapes, oracle[size]);
    }
}
