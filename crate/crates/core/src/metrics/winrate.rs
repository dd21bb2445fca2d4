//! Pairwise human-preference win rate.

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

/// Wins, ties and losses of one annotator (or any pooled group).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tally {
    pub wins: u64,
    pub ties: u64,
    pub losses: u64,
}

impl Tally {
    pub const fn new(wins: u64, ties: u64, losses: u64) -> Self {
        Self { wins, ties, losses }
    }

    pub fn total(&self) -> u64 {
        self.wins + self.ties + self.losses
    }

    /// Win rate in percent; a tie counts as half a win.
    pub fn win_rate(&self) -> Result<f64> {
        win_rate(self.wins, self.ties, self.losses)
    }
}

impl std::ops::Add for Tally {
    type Output = Tally;

    fn add(self, o: Tally) -> Tally {
        Tally::new(self.wins + o.wins, self.ties + o.ties, self.losses + o.losses)
    }
}

impl std::iter::Sum for Tally {
    fn sum<I: Iterator<Item = Tally>>(iter: I) -> Tally {
        iter.fold(Tally::default(), |a, b| a + b)
    }
}

/// `(wins + 0.5 · ties) / total`, as a percentage.
pub fn win_rate(wins: u64, ties: u64, losses: u64) -> Result<f64> {
    let total = wins + ties + losses;
    if total == 0 {
        return Err(precondition("win rate needs at least one comparison"));
    }
    Ok(100.0 * (wins as f64 + 0.5 * ties as f64) / total as f64)
}

/// Two-decimal percentage, e.g. `97.00%`.
pub fn format_percent(percent: f64) -> String {
    format!("{percent:.2}%")
}
