//! Accuracy grid on a simulated folksonomy: every weighting scheme, three
//! training-set sizes, repeated random subsampling.
//!
//!     cargo run --release --example classify_grid -- [policy] [acceptance]

use folksonomy::{evaluate, generate, EvalConfig, Policy, SimConfig};

fn main() -> folksonomy::Result<()> {
    let mut args = std::env::args().skip(1);
    let policy: Policy = args.next().as_deref().unwrap_or("none").parse()?;
    let acceptance = args.next().map_or(Ok(0.5), |a| a.parse()).expect("acceptance must be a number");
    let cfg = SimConfig { policy, suggestion_acceptance: acceptance, n_users: 800, n_resources: 800, ..SimConfig::default() };
    let sim = generate(&cfg)?;
    println!("{} labeled resources, {} categories", sim.labels.len(), sim.labels.n_categories());

    let eval = EvalConfig { sizes: vec![100, 200, 400], runs: 3, ..EvalConfig::default() };
    let grid = evaluate(&sim.folksonomy, &sim.labels, &eval)?;
    grid.write_csv(std::io::stdout())?;
    Ok(())
}
