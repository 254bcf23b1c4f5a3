//! Time the pooling strategies over growing synthetic LS buffers and print
//! the plot-ready CSV. The interesting shape: mean needs one sweep, SD and
//! MAD two each, while the joint path produces SD, MAD and their blend for
//! the price of one two-sweep pass.
//!
//! Sizes here are kept small so the example finishes quickly; the `deviqa
//! bench` command defaults to 2^20..2^24.
//!
//! ```bash
//! cargo run --release -p deviqa --example bench_poolings
//! ```

use deviqa::bench::{run_pooling_bench, write_bench_csv, BenchConfig};

fn main() {
    let config = BenchConfig {
        sizes: vec![1 << 16, 1 << 18, 1 << 20],
        runs: 10,
        ..BenchConfig::default()
    };
    let rows = run_pooling_bench(&config).expect("bench config is valid");
    write_bench_csv(&rows, std::io::stdout().lock()).expect("stdout");

    let at_largest: Vec<_> = rows.iter().filter(|r| r.ls_size == 1 << 20).collect();
    let mean = at_largest.iter().find(|r| r.strategy.to_string() == "mean").unwrap();
    let joint = at_largest.iter().find(|r| r.strategy.to_string() == "dd-joint").unwrap();
    eprintln!(
        "\nat 2^20 elements: mean {:.2} ms, dd-joint {:.2} ms (sd + mad + blend in one pass)",
        mean.median_seconds * 1e3,
        joint.median_seconds * 1e3
    );
}
