//! Optimal one-to-one stroke matching on a rectangular similarity matrix.

use bezier_glyph::metrics::{assign_optimal, SimilarityMatrix};

fn main() {
    let sim = SimilarityMatrix::from_rows(&[
        vec![0.10, 0.90, 0.20, 0.05],
        vec![0.80, 0.20, 0.30, 0.10],
        vec![0.30, 0.85, 0.60, 0.40],
    ])
    .unwrap();
    let m = assign_optimal(&sim);
    for (gt, gen) in &m.pairs {
        println!("gt {gt} <- gen {gen}  ({:.2})", sim.get(*gt, *gen));
    }
    println!("total {:.2}", m.total);

    // Equal-weight ties resolve to the lexicographically smallest pairing.
    let flat = SimilarityMatrix::new(2, 2, vec![0.5; 4]).unwrap();
    println!("ties -> {:?}", assign_optimal(&flat).pairs);
}

#[cfg(test)]
#[test]
fn example_runs() {
    main();
}
