//! Benchmark inputs shared by the criterion benches.

use ecorec_core::ContingencyTable;

/// A deterministic `rows x cols` table with every cell non-zero.
pub fn grid(rows: usize, cols: usize) -> ContingencyTable {
    let observed = (0..rows).map(|i| (0..cols).map(|j| ((i * 31 + j * 17) % 97 + 1) as u64).collect()).collect();
    ContingencyTable::new(observed).expect("grid is valid")
}

/// `n` copies of a short paragraph.
pub fn corpus(n: usize) -> String {
    "Plastic pollution is pointless to ignore, and plastic bans need government action. ".repeat(n)
}
