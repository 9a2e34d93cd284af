//! Brute-force recounts and fixture builders shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use folksonomy::{EntityKind, Folksonomy, ResourceId, TagFrequencies};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// (user, resource, tags) with tags already normalized and non-empty.
pub type Triple = (String, String, Vec<String>);

pub fn build(triples: &[Triple]) -> Folksonomy {
    let mut f = Folksonomy::new();
    for (u, r, tags) in triples {
        f.add_bookmark(u, r, tags).unwrap();
    }
    f
}

pub fn random_triples(seed: u64, max_users: u32, max_resources: u32, max_tags: u32, max_bookmarks: usize) -> Vec<Triple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_bookmarks);
    (0..n)
        .map(|_| {
            let u = rng.random_range(0..max_users);
            let r = rng.random_range(0..max_resources);
            let k = rng.random_range(1..=4);
            let tags = (0..k).map(|_| format!("t{}", rng.random_range(0..max_tags))).collect();
            (format!("u{u}"), format!("r{r}"), tags)
        })
        .collect()
}

fn distinct(tags: &[String]) -> BTreeSet<&str> {
    tags.iter().map(String::as_str).collect()
}

/// Tag -> (rf, uf, bf) counted directly from the triples.
pub fn recount_frequencies(triples: &[Triple]) -> BTreeMap<String, TagFrequencies> {
    let mut resources: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut users: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut bookmarks: BTreeMap<&str, u64> = BTreeMap::new();
    for (u, r, tags) in triples {
        for t in distinct(tags) {
            resources.entry(t).or_default().insert(r);
            users.entry(t).or_default().insert(u);
            *bookmarks.entry(t).or_default() += 1;
        }
    }
    bookmarks
        .iter()
        .map(|(&t, &bf)| {
            let freq = TagFrequencies { rf: resources[t].len() as u64, uf: users[t].len() as u64, bf };
            (t.to_owned(), freq)
        })
        .collect()
}

/// tf(t, r): number of bookmarks of r carrying t.
pub fn recount_tf(triples: &[Triple]) -> BTreeMap<(String, String), u64> {
    let mut tf = BTreeMap::new();
    for (_, r, tags) in triples {
        for t in distinct(tags) {
            *tf.entry((t.to_owned(), r.clone())).or_default() += 1;
        }
    }
    tf
}

pub fn recount_user_tags(triples: &[Triple]) -> BTreeMap<(String, String), u64> {
    let mut m = BTreeMap::new();
    for (u, _, tags) in triples {
        for t in distinct(tags) {
            *m.entry((t.to_owned(), u.clone())).or_default() += 1;
        }
    }
    m
}

/// Every incremental index against a recount; returns the first mismatch.
pub fn check_indices(f: &Folksonomy, triples: &[Triple]) -> Result<(), String> {
    let users: BTreeSet<&str> = triples.iter().map(|t| t.0.as_str()).collect();
    let resources: BTreeSet<&str> = triples.iter().map(|t| t.1.as_str()).collect();
    if f.n_users() != users.len() as u64 || f.n_resources() != resources.len() as u64 {
        return Err("entity totals".into());
    }
    if f.n_bookmarks() != triples.len() as u64 || f.total(EntityKind::Bookmarks) != triples.len() as u64 {
        return Err("bookmark total".into());
    }
    let freqs = recount_frequencies(triples);
    if f.n_tags() != freqs.len() {
        return Err(format!("tag count {} vs {}", f.n_tags(), freqs.len()));
    }
    for (tag, want) in &freqs {
        let got = f.frequencies_by_name(tag);
        if got != *want {
            return Err(format!("frequencies({tag}) {got:?} vs {want:?}"));
        }
        if got.bf < got.uf || got.bf < got.rf {
            return Err(format!("bf bound violated for {tag}"));
        }
    }
    for ((tag, r), want) in recount_tf(triples) {
        if f.tf_by_name(&tag, &r) != want {
            return Err(format!("tf({tag}, {r})"));
        }
    }
    let mut union_sizes = 0;
    for r in f.resources() {
        union_sizes += f.resource_tags(r).len();
        let n = f.resource_bookmarks(r).count() as u64;
        if f.resource_tags(r).values().any(|&c| c == 0 || c > n) {
            return Err("tf out of bounds".into());
        }
    }
    if union_sizes != recount_tf(triples).len() {
        return Err("resource unions".into());
    }
    let user_tags = recount_user_tags(triples);
    let mut personomy_sizes = 0;
    for u in f.users() {
        for (&t, &c) in f.user_tags(u) {
            personomy_sizes += 1;
            if user_tags.get(&(f.tag_name(t).to_owned(), f.user_name(u).to_owned())) != Some(&c) {
                return Err("user tags".into());
            }
        }
    }
    if personomy_sizes != user_tags.len() {
        return Err("personomy sizes".into());
    }
    Ok(())
}

/// Novelty of each (resource, rank) computed from the triples in insertion order.
pub fn recount_novelty(triples: &[Triple], max_rank: usize) -> Vec<(usize, f64, u64)> {
    let mut seen: BTreeMap<&str, (usize, BTreeSet<&str>)> = BTreeMap::new();
    let mut sums: Vec<(f64, u64)> = vec![(0.0, 0); max_rank];
    for (_, r, tags) in triples {
        let (rank, union) = seen.entry(r.as_str()).or_default();
        *rank += 1;
        let tags = distinct(tags);
        if *rank <= max_rank {
            let new = tags.iter().filter(|t| !union.contains(*t)).count();
            sums[*rank - 1].0 += new as f64 / tags.len() as f64;
            sums[*rank - 1].1 += 1;
        }
        union.extend(tags);
    }
    sums.iter()
        .enumerate()
        .filter(|(_, s)| s.1 > 0)
        .map(|(i, &(sum, n))| (i + 1, sum / n as f64, n))
        .collect()
}

pub fn resource(f: &Folksonomy, name: &str) -> ResourceId {
    f.resource_id(name).unwrap()
}

/// `n` resources in `k` classes with disjoint tag signatures: every bookmark
/// draws three tags from its class's own 20-tag vocabulary.
pub fn signature_set(n: usize, k: usize, seed: u64) -> (Folksonomy, folksonomy::LabeledSet) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = Folksonomy::new();
    let mut pairs = Vec::new();
    for i in 0..n {
        let c = i % k;
        let r = format!("r{i:05}");
        for _ in 0..rng.random_range(1..=3) {
            let user = format!("u{}", rng.random_range(0..200));
            let tags: Vec<String> = (0..3).map(|_| format!("c{c}-{}", rng.random_range(0..20))).collect();
            f.add_bookmark(&user, &r, &tags).unwrap();
        }
        pairs.push((r, c.to_string()));
    }
    let (labels, unknown) = folksonomy::LabeledSet::from_pairs(&f, pairs);
    assert_eq!(unknown, 0);
    (f, labels)
}

/// Dense random 5-class, 20-feature instance with random weights.
pub fn dense_instance(seed: u64) -> (Vec<Vec<f64>>, Vec<folksonomy::classifier::Example>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = (0..5).map(|_| (0..20).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let examples = (0..40)
        .map(|i| folksonomy::classifier::Example {
            features: (0..20).map(|j| (j, rng.random_range(-1.0..1.0))).collect(),
            label: i % 5,
        })
        .collect();
    (weights, examples)
}

/// Largest relative deviation between the analytic subgradient and central
/// differences of the objective.
pub fn finite_difference_error(weights: &[Vec<f64>], examples: &[folksonomy::classifier::Example], lambda: f64) -> f64 {
    use folksonomy::classifier::{cs_objective, cs_subgradient};
    let h = 1e-6;
    let grad = cs_subgradient(weights, examples, lambda);
    let mut numeric = grad.clone();
    let mut w = weights.to_vec();
    for c in 0..w.len() {
        for j in 0..w[c].len() {
            let orig = w[c][j];
            w[c][j] = orig + h;
            let up = cs_objective(&w, examples, lambda);
            w[c][j] = orig - h;
            let down = cs_objective(&w, examples, lambda);
            w[c][j] = orig;
            numeric[c][j] = (up - down) / (2.0 * h);
        }
    }
    let diff: f64 = grad.iter().flatten().zip(numeric.iter().flatten()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = numeric.iter().flatten().map(|b| b * b).sum::<f64>().sqrt();
    diff / scale
}
