//! How suggestion policies reshape a folksonomy: the same seed generated under
//! each policy, compared on describe() summaries and novelty.

use folksonomy::stats::novelty_curve;
use folksonomy::{describe, generate, EntityKind, Policy, SimConfig};

fn main() -> folksonomy::Result<()> {
    println!("{:<18} {:>6} {:>8} {:>8} {:>9} {:>8}", "policy", "accept", "tags/bm", "tags/usr", "top10%bm", "novelty");
    for (policy, acceptance) in [
        (Policy::None, 0.0),
        (Policy::ResourceSuggest, 0.3),
        (Policy::ResourceSuggest, 0.7),
        (Policy::PersonomySuggest, 0.3),
        (Policy::PersonomySuggest, 0.7),
    ] {
        let cfg = SimConfig {
            policy,
            suggestion_acceptance: acceptance,
            n_users: 600,
            n_resources: 600,
            bookmarks_per_user: 30.0,
            ..SimConfig::default()
        };
        let f = generate(&cfg)?.folksonomy;
        let s = describe(&f)?;
        let novelty = novelty_curve(&f, 50)?.mean_over_ranks(2, 50);
        println!(
            "{:<18} {:>6.1} {:>8.2} {:>8.2} {:>9.2} {:>8.3}",
            policy.name(),
            acceptance,
            s.averages.per_bookmark,
            s.averages.per_user,
            s.top_decile(EntityKind::Bookmarks),
            novelty
        );
    }
    Ok(())
}
