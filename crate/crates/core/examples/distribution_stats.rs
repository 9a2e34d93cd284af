//! Tag distribution statistics of a simulated folksonomy: distinct-tag
//! averages, head of each rank-usage curve, r/u/b relations and novelty.

use folksonomy::stats::{avg_distinct_tags, novelty_curve, rank_usage_curve, rub_comparison};
use folksonomy::{generate, EntityKind, SimConfig};

fn main() -> folksonomy::Result<()> {
    let cfg = SimConfig { n_users: 500, n_resources: 500, bookmarks_per_user: 20.0, ..SimConfig::delicious_like() };
    let f = generate(&cfg)?.folksonomy;

    let avg = avg_distinct_tags(&f)?;
    println!("distinct tags: resource {:.2}, user {:.2}, bookmark {:.2}", avg.per_resource, avg.per_user, avg.per_bookmark);

    for kind in EntityKind::ALL {
        let curve = rank_usage_curve(&f, kind)?;
        print!("{:<9}", kind.name());
        for p in curve.points.iter().take(5) {
            print!("  {} {:.1}%", f.tag_name(p.tag), p.coverage_percent);
        }
        println!();
    }

    let rub = rub_comparison(&f)?;
    let rel = |name, r: folksonomy::stats::RelationFractions| {
        println!("{name}: > {:.3}  = {:.3}  < {:.3}", r.greater, r.equal, r.less)
    };
    rel("b vs u", rub.bookmarks_users);
    rel("r vs u", rub.resources_users);
    rel("b vs r", rub.bookmarks_resources);

    let novelty = novelty_curve(&f, 20)?;
    for k in [1, 2, 5, 10, 20] {
        if let Some(p) = novelty.at_rank(k) {
            println!("novelty at rank {k:>2}: {:.3} over {} resources", p.mean_novelty, p.n_resources);
        }
    }
    Ok(())
}
