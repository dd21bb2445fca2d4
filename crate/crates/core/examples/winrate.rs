//! Per-annotator and pooled win rates from pairwise preference counts.

use bezier_glyph::metrics::{format_percent, Tally};

fn main() {
    let annotators = [
        Tally::new(142, 7, 1),
        Tally::new(138, 10, 2),
        Tally::new(131, 15, 4),
        Tally::new(121, 16, 13),
        Tally::new(114, 34, 2),
    ];
    for (i, t) in annotators.iter().enumerate() {
        println!("annotator {}: {}", i + 1, format_percent(t.win_rate().unwrap()));
    }
    let pooled: Tally = annotators.iter().copied().sum();
    println!("pooled: {}", format_percent(pooled.win_rate().unwrap()));
}

#[cfg(test)]
#[test]
fn example_runs() {
    main();
}
