//! Synthetic folksonomies with ground-truth categories under different tag
//! suggestion policies.
//!
//! Every resource belongs to one category, and every category owns a disjoint
//! pool of tags drawn from the global vocabulary. Users bookmark random
//! resources one at a time. Each tag slot of a bookmark either accepts one of
//! the tags the system suggests (with probability `suggestion_acceptance`) or
//! is drawn fresh, from the resource's category pool with probability
//! `signal_strength` and otherwise from a Zipfian distribution over the
//! whole vocabulary.

use std::collections::HashMap;
use std::fmt;
use std::io;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;

use crate::classifier::LabeledSet;
use crate::error::{Error, Result};
use crate::store::{EntityKind, Folksonomy};
use crate::ingest::{build_folksonomy, write_jsonl, IngestOptions, OrderHint, RawRecord};
use crate::stats::{avg_distinct_tags, rank_usage_curve, rub_comparison, AverageTagCounts, RubComparison};

/// What the system offers the user while tagging.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Policy {
    /// No suggestions.
    None,
    /// Most frequent tags of the resource's earlier bookmarks.
    ResourceSuggest,
    /// Most frequent tags of the user's own personomy.
    PersonomySuggest,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::None => "none",
            Policy::ResourceSuggest => "resource_suggest",
            Policy::PersonomySuggest => "personomy_suggest",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "none" => Ok(Policy::None),
            "resource_suggest" | "resource" => Ok(Policy::ResourceSuggest),
            "personomy_suggest" | "personomy" => Ok(Policy::PersonomySuggest),
            other => Err(Error::InvalidConfig(format!("unknown suggestion policy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub policy: Policy,
    pub n_users: usize,
    pub n_resources: usize,
    pub n_categories: usize,
    /// Mean bookmarks per user.
    pub bookmarks_per_user: f64,
    /// Mean tags per bookmark (at least 1).
    pub tags_per_bookmark: f64,
    pub vocab_size: usize,
    pub zipf_exponent: f64,
    pub suggestion_acceptance: f64,
    pub n_suggestions: usize,
    pub signal_strength: f64,
    /// Tags per category pool.
    pub category_pool_size: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            policy: Policy::None,
            n_users: 2000,
            n_resources: 2000,
            n_categories: 10,
            bookmarks_per_user: 50.0,
            tags_per_bookmark: 2.46,
            vocab_size: 5000,
            zipf_exponent: 1.0,
            suggestion_acceptance: 0.5,
            n_suggestions: 10,
            signal_strength: 0.1,
            category_pool_size: 50,
            seed: 42,
        }
    }
}

impl SimConfig {
    /// Resource-based suggestions and the per-bookmark tag count of a
    /// general-purpose bookmarking site.
    pub fn delicious_like() -> Self {
        SimConfig { policy: Policy::ResourceSuggest, tags_per_bookmark: 3.75, ..Default::default() }
    }

    /// No suggestions, as on a catalog site without them.
    pub fn librarything_like() -> Self {
        SimConfig { policy: Policy::None, tags_per_bookmark: 2.46, ..Default::default() }
    }

    /// Personomy-based suggestions and few tags per bookmark.
    pub fn goodreads_like() -> Self {
        SimConfig { policy: Policy::PersonomySuggest, tags_per_bookmark: 1.55, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_owned()));
        if self.n_users == 0 || self.n_resources == 0 || self.n_categories == 0 || self.vocab_size == 0 {
            return bad("n_users, n_resources, n_categories and vocab_size must be at least 1");
        }
        if self.n_suggestions == 0 || self.category_pool_size == 0 {
            return bad("n_suggestions and category_pool_size must be at least 1");
        }
        if !(self.bookmarks_per_user >= 1.0) || !self.bookmarks_per_user.is_finite() {
            return bad("bookmarks_per_user must be at least 1");
        }
        if !(self.tags_per_bookmark >= 1.0) || !self.tags_per_bookmark.is_finite() {
            return bad("tags_per_bookmark must be at least 1");
        }
        if !(self.zipf_exponent > 0.0) || !self.zipf_exponent.is_finite() {
            return bad("zipf_exponent must be positive");
        }
        for (name, p) in [("suggestion_acceptance", self.suggestion_acceptance), ("signal_strength", self.signal_strength)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("{name} must lie in [0, 1]")));
            }
        }
        if self.n_categories * self.category_pool_size > self.vocab_size {
            return bad("category pools do not fit in the vocabulary");
        }
        Ok(())
    }
}

/// Generated data plus the raw records it was built from.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub folksonomy: Folksonomy,
    pub labels: LabeledSet,
    pub records: Vec<RawRecord>,
}

impl Simulation {
    pub fn write_jsonl<W: io::Write>(&self, out: W) -> Result<()> {
        write_jsonl(out, &self.records)
    }

    pub fn write_labels<W: io::Write>(&self, out: W) -> Result<()> {
        self.labels.write_tsv(&self.folksonomy, out)
    }
}

fn width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

/// Tag counts with an on-demand top-n view; ties go to the lower tag index.
#[derive(Default)]
struct TagCounter {
    counts: HashMap<u32, u32>,
}

impl TagCounter {
    fn bump(&mut self, tag: u32) {
        *self.counts.entry(tag).or_insert(0) += 1;
    }

    fn top(&self, n: usize, out: &mut Vec<u32>) {
        out.clear();
        let mut all: Vec<(u32, u32)> = self.counts.iter().map(|(&t, &c)| (t, c)).collect();
        all.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        out.extend(all.into_iter().take(n).map(|(t, _)| t));
    }
}

const MAX_REDRAWS: usize = 20;

pub fn generate(cfg: &SimConfig) -> Result<Simulation> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let zipf = WeightedIndex::new((1..=cfg.vocab_size).map(|k| (k as f64).powf(-cfg.zipf_exponent)))
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut perm: Vec<u32> = (0..cfg.vocab_size as u32).collect();
    perm.shuffle(&mut rng);
    let pools: Vec<&[u32]> = perm.chunks(cfg.category_pool_size).take(cfg.n_categories).collect();
    let categories: Vec<usize> = (0..cfg.n_resources).map(|_| rng.random_range(0..cfg.n_categories)).collect();
    let extra_tags = if cfg.tags_per_bookmark > 1.0 {
        Some(Poisson::new(cfg.tags_per_bookmark - 1.0).map_err(|e| Error::InvalidConfig(e.to_string()))?)
    } else {
        None
    };

    let total = (cfg.n_users as f64 * cfg.bookmarks_per_user).round() as usize;
    let mut resource_counts: Vec<TagCounter> = (0..cfg.n_resources).map(|_| TagCounter::default()).collect();
    let mut user_counts: Vec<TagCounter> = (0..cfg.n_users).map(|_| TagCounter::default()).collect();
    let mut bookmarked: std::collections::HashSet<(u32, u32)> = std::collections::HashSet::new();
    let mut suggestions = Vec::with_capacity(cfg.n_suggestions);
    let mut chosen: Vec<u32> = Vec::new();
    let mut records = Vec::with_capacity(total);

    let (uw, rw, tw) = (width(cfg.n_users), width(cfg.n_resources), width(cfg.vocab_size));
    for seq in 0..total {
        let user = rng.random_range(0..cfg.n_users);
        let mut resource = rng.random_range(0..cfg.n_resources);
        for _ in 0..MAX_REDRAWS {
            if !bookmarked.contains(&(user as u32, resource as u32)) {
                break;
            }
            resource = rng.random_range(0..cfg.n_resources);
        }
        bookmarked.insert((user as u32, resource as u32));

        let n_tags = 1 + extra_tags.map_or(0, |p| p.sample(&mut rng) as usize);
        match cfg.policy {
            Policy::None => suggestions.clear(),
            Policy::ResourceSuggest => resource_counts[resource].top(cfg.n_suggestions, &mut suggestions),
            Policy::PersonomySuggest => user_counts[user].top(cfg.n_suggestions, &mut suggestions),
        }
        let pool = pools[categories[resource]];
        chosen.clear();
        for _ in 0..n_tags {
            // The acceptance coin is always tossed so that acceptance 0 reproduces
            // the no-suggestion stream exactly.
            let accept = rng.random::<f64>() < cfg.suggestion_acceptance;
            let open: Vec<u32> = suggestions.iter().copied().filter(|t| !chosen.contains(t)).collect();
            let tag = if accept && !open.is_empty() {
                Some(open[rng.random_range(0..open.len())])
            } else {
                (0..MAX_REDRAWS)
                    .map(|_| {
                        if rng.random::<f64>() < cfg.signal_strength {
                            pool[rng.random_range(0..pool.len())]
                        } else {
                            zipf.sample(&mut rng) as u32
                        }
                    })
                    .find(|t| !chosen.contains(t))
            };
            if let Some(t) = tag {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            resource_counts[resource].bump(t);
            user_counts[user].bump(t);
        }
        records.push(RawRecord {
            user: format!("u{user:0uw$}"),
            resource: format!("r{resource:0rw$}"),
            tags: chosen.iter().map(|t| format!("t{t:0tw$}")).collect(),
            order_hint: Some(OrderHint::Seq(seq as u64)),
        });
    }

    let (folksonomy, _) = build_folksonomy(records.iter().cloned(), &IngestOptions::default());
    let cw = width(cfg.n_categories);
    let (labels, _) = LabeledSet::from_pairs(
        &folksonomy,
        (0..cfg.n_resources).map(|r| (format!("r{r:0rw$}"), format!("c{:0cw$}", categories[r]))),
    );
    Ok(Simulation { folksonomy, labels, records })
}

/// Table-style summary of a folksonomy.
#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub n_users: u64,
    pub n_resources: u64,
    pub n_bookmarks: u64,
    pub n_tags: u64,
    pub averages: AverageTagCounts,
    pub rub: RubComparison,
    /// Top-decile mean coverage percent for resources, users, bookmarks.
    pub top_decile: [f64; 3],
}

impl Summary {
    pub fn top_decile(&self, kind: EntityKind) -> f64 {
        match kind {
            EntityKind::Resources => self.top_decile[0],
            EntityKind::Users => self.top_decile[1],
            EntityKind::Bookmarks => self.top_decile[2],
        }
    }
}

pub fn describe(f: &Folksonomy) -> Result<Summary> {
    let mut top_decile = [0.0; 3];
    for (slot, kind) in top_decile.iter_mut().zip(EntityKind::ALL) {
        *slot = rank_usage_curve(f, kind)?.top_decile_coverage();
    }
    Ok(Summary {
        n_users: f.n_users(),
        n_resources: f.n_resources(),
        n_bookmarks: f.n_bookmarks(),
        n_tags: f.n_tags() as u64,
        averages: avg_distinct_tags(f)?,
        rub: rub_comparison(f)?,
        top_decile,
    })
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "users {}  resources {}  bookmarks {}  tags {}",
            self.n_users, self.n_resources, self.n_bookmarks, self.n_tags
        )?;
        writeln!(
            f,
            "distinct tags per resource {:.2}  per user {:.2}  per bookmark {:.2}",
            self.averages.per_resource, self.averages.per_user, self.averages.per_bookmark
        )?;
        let r = &self.rub;
        writeln!(
            f,
            "b>u {:.3} b=u {:.3} | r>u {:.3} r=u {:.3} r<u {:.3} | b>r {:.3} b=r {:.3}",
            r.bookmarks_users.greater,
            r.bookmarks_users.equal,
            r.resources_users.greater,
            r.resources_users.equal,
            r.resources_users.less,
            r.bookmarks_resources.greater,
            r.bookmarks_resources.equal
        )?;
        write!(
            f,
            "top-decile coverage %  resources {:.3}  users {:.3}  bookmarks {:.3}",
            self.top_decile[0], self.top_decile[1], self.top_decile[2]
        )
    }
}
