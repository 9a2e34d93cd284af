mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/shelves_100.tsv");

fn folksonomy<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_folksonomy")).args(args).output().unwrap()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn ingest_fixture_counts() {
    let out = ok(&folksonomy(["ingest", "--format", "tsv", "--strip-goodreads", FIXTURE]));
    let rows: Vec<Vec<&str>> = out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert!(rows.contains(&vec!["Users", "10", "10", "100.00%"]), "{out}");
    assert!(rows.contains(&vec!["Bookmarks", "80", "100", "80.00%"]), "{out}");
    assert!(rows.contains(&vec!["Resources", "24", "30", "80.00%"]), "{out}");
    assert!(rows.contains(&vec!["Tags", "5", "-"]), "{out}");
    assert!(out.contains("auto tags stripped: 37"));

    let out = ok(&folksonomy(["ingest", "--format", "tsv", FIXTURE]));
    assert!(out.contains("Bookmarks") && out.contains("90.00%"), "{out}");
    assert!(out.contains("auto tags stripped: 0"));
}

#[test]
fn ingest_header_echoes_config() {
    let out = ok(&folksonomy(["ingest", "--format", "tsv", FIXTURE]));
    assert!(out.starts_with("# folksonomy "));
    assert!(out.contains("# ") && out.contains("strip_goodreads: false"), "{out}");
}

#[test]
fn malformed_input_fails_with_line_numbers() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.tsv", "u1\tr1\ta\nonly-one-field\nu2\tr2\tb\n{oops\n");
    let out = folksonomy(["ingest", "--format", "tsv", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2:") && err.contains("line 4:"), "{err}");

    let out = ok(&folksonomy(["ingest", "--format", "tsv", "--allow-malformed", bad.to_str().unwrap()]));
    assert!(out.contains("malformed lines: 2"));
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(folksonomy(["stats", "--out", "x"]).status.code(), Some(2));
    assert_eq!(folksonomy(["classify", "--input", "a", "--cache", "b", "--labels", "l", "--out", "o", "--sizes", "1"]).status.code(), Some(2));
    assert_eq!(folksonomy(["simulate", "--out", "o", "--policy", "random"]).status.code(), Some(2));
}

#[test]
fn missing_input_is_an_error() {
    let dir = TempDir::new().unwrap();
    let out = folksonomy(["stats", "--input", "/nonexistent.jsonl", "--out", dir.path().join("s").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("s").join("averages.csv").exists());
}

#[test]
fn stats_on_novelty_fixture() {
    let dir = TempDir::new().unwrap();
    let input = write(
        dir.path(),
        "two.jsonl",
        "{\"user\":\"u1\",\"resource\":\"r1\",\"tags\":[\"tag1\",\"tag2\"]}\n{\"user\":\"u2\",\"resource\":\"r1\",\"tags\":[\"tag2\",\"tag3\"]}\n",
    );
    let out = dir.path().join("stats");
    ok(&folksonomy(["stats", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--max-rank", "3"]));
    assert_eq!(
        read(&out, "novelty.csv"),
        "rank,mean_novelty,n_resources\n1,1.000000,1\n2,0.500000,1\n3,0.000000,0\n"
    );
    assert_eq!(read(&out, "rank_usage_bookmarks.csv").lines().nth(1).unwrap(), "1,tag2,2,33.333333,100.000000");
    assert_eq!(
        read(&out, "availability.csv"),
        "kind,annotated,total,percent\nUsers,2,2,100.00\nBookmarks,2,2,100.00\nResources,1,1,100.00\nTags,,3,\n"
    );
    for name in ["averages.csv", "rank_usage_resources.csv", "rank_usage_users.csv", "rub.csv"] {
        assert!(out.join(name).exists(), "{name}");
    }
}

#[test]
fn stats_singleton() {
    let dir = TempDir::new().unwrap();
    let input = write(dir.path(), "one.tsv", "u\tr\tt\n");
    let out = dir.path().join("stats");
    ok(&folksonomy(["stats", "--format", "tsv", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    assert_eq!(read(&out, "rank_usage_resources.csv"), "rank,tag,count,rank_percent,coverage_percent\n1,t,1,100.000000,100.000000\n");
    assert!(read(&out, "averages.csv").contains("1.000000"));
}

#[test]
fn stats_parity_with_recount_on_random_fixture() {
    let dir = TempDir::new().unwrap();
    let triples = common::random_triples(11, 6, 8, 10, 60);
    let text: String = triples.iter().map(|(u, r, t)| format!("{u}\t{r}\t{}\n", t.join(","))).collect();
    let input = write(dir.path(), "rand.tsv", &text);
    let out = dir.path().join("stats");
    ok(&folksonomy(["stats", "--format", "tsv", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]));

    let freqs = common::recount_frequencies(&triples);
    for (kind, pick) in [("resources", 0), ("users", 1), ("bookmarks", 2)] {
        let csv = read(&out, &format!("rank_usage_{kind}.csv"));
        let mut rows = 0;
        for line in csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            let f = freqs[cols[1]];
            let want = [f.rf, f.uf, f.bf][pick];
            assert_eq!(cols[2].parse::<u64>().unwrap(), want, "{kind} {line}");
            rows += 1;
        }
        assert_eq!(rows, freqs.len());
    }
    let novelty = read(&out, "novelty.csv");
    for (rank, mean, n) in common::recount_novelty(&triples, 100) {
        let line = novelty.lines().nth(rank).unwrap();
        assert_eq!(line, format!("{rank},{mean:.6},{n}"));
    }
}

#[test]
fn unordered_input_skips_novelty() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("stats");
    let stdout = ok(&folksonomy([
        "stats", "--format", "tsv", "--strip-goodreads", "--unordered", "--input", FIXTURE, "--out", out.to_str().unwrap(),
    ]));
    assert!(stdout.contains("novelty skipped"));
    assert!(!out.join("novelty.csv").exists());
    assert!(out.join("rub.csv").exists());
}

#[test]
fn cache_round_trip() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("shelves.cache");
    ok(&folksonomy([
        "ingest", "--format", "tsv", "--strip-goodreads", FIXTURE, "--write-cache", cache.to_str().unwrap(),
    ]));
    let from_cache = dir.path().join("a");
    let from_input = dir.path().join("b");
    ok(&folksonomy(["stats", "--cache", cache.to_str().unwrap(), "--out", from_cache.to_str().unwrap()]));
    ok(&folksonomy([
        "stats", "--format", "tsv", "--strip-goodreads", "--input", FIXTURE, "--out", from_input.to_str().unwrap(),
    ]));
    for name in ["averages.csv", "rank_usage_users.csv", "rank_usage_bookmarks.csv", "rub.csv", "novelty.csv"] {
        assert_eq!(read(&from_cache, name), read(&from_input, name), "{name}");
    }

    let stale = write(dir.path(), "old.cache", "{\"format_version\":99,\"ordered\":true,\"bookmarks\":[]}");
    let out = folksonomy(["stats", "--cache", stale.to_str().unwrap(), "--out", dir.path().join("c").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("version 99"));
}

/// Two categories with disjoint tag vocabularies and users, plus a shared tag.
fn separable(dir: &Path, per_class: usize) -> (PathBuf, PathBuf) {
    let mut bookmarks = String::new();
    let mut labels = String::new();
    for i in 0..2 * per_class {
        let c = i % 2;
        bookmarks.push_str(&format!("u{c}-{}\tr{i:03}\tshared,sig{c},sig{c}-{}\n", i % 3, i % 3));
        labels.push_str(&format!("r{i:03}\t{c}\n"));
    }
    (write(dir, "sep.tsv", &bookmarks), write(dir, "sep_labels.tsv", &labels))
}

#[test]
fn classify_separable_fixture() {
    let dir = TempDir::new().unwrap();
    let (input, labels) = separable(dir.path(), 20);
    let out = dir.path().join("grid");
    ok(&folksonomy([
        "classify", "--format", "tsv", "--input", input.to_str().unwrap(), "--labels", labels.to_str().unwrap(),
        "--out", out.to_str().unwrap(), "--sizes", "10,20", "--runs", "1", "--jobs", "1",
    ]));
    assert_eq!(
        read(&out, "grid.csv"),
        "scheme,10,20\ntf,1.000000,1.000000\ntf-irf,1.000000,1.000000\ntf-iuf,1.000000,1.000000\ntf-ibf,1.000000,1.000000\n"
    );
    assert_eq!(read(&out, "grid_runs.csv").lines().count(), 1 + 4 * 2);
}

#[test]
fn classify_accepts_table_size_list_and_rejects_oversized() {
    let dir = TempDir::new().unwrap();
    let (input, labels) = separable(dir.path(), 20);
    let out = folksonomy([
        "classify", "--format", "tsv", "--input", input.to_str().unwrap(), "--labels", labels.to_str().unwrap(),
        "--out", dir.path().join("g").to_str().unwrap(), "--sizes", "600,1400,2200,3000,4000,5000,6000",
    ]);
    assert_eq!(out.status.code(), Some(1), "sizes parse, then fail against 40 labels");
    assert!(String::from_utf8_lossy(&out.stderr).contains("600"));
    assert!(!dir.path().join("g").join("grid.csv").exists());
}

#[test]
fn classify_taxonomy_check() {
    let dir = TempDir::new().unwrap();
    let (input, labels) = separable(dir.path(), 10);
    let out = folksonomy([
        "classify", "--format", "tsv", "--input", input.to_str().unwrap(), "--labels", labels.to_str().unwrap(),
        "--out", dir.path().join("g").to_str().unwrap(), "--sizes", "5", "--taxonomy", "ddc",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_then_stats_and_classify() {
    let dir = TempDir::new().unwrap();
    let sim = dir.path().join("sim");
    let stdout = ok(&folksonomy([
        "simulate", "--out", sim.to_str().unwrap(), "--users", "60", "--resources", "80", "--categories", "4",
        "--bookmarks-per-user", "8", "--vocab", "300", "--signal", "0.6", "--policy", "resource_suggest",
    ]));
    assert!(stdout.contains("policy: ResourceSuggest"), "{stdout}");
    assert_eq!(read(&sim, "labels.tsv").lines().count(), 80);
    let bookmarks = sim.join("bookmarks.jsonl");
    let stats = dir.path().join("stats");
    ok(&folksonomy(["stats", "--input", bookmarks.to_str().unwrap(), "--out", stats.to_str().unwrap()]));
    assert!(stats.join("novelty.csv").exists());
    let grid = dir.path().join("grid");
    ok(&folksonomy([
        "classify", "--input", bookmarks.to_str().unwrap(), "--labels", sim.join("labels.tsv").to_str().unwrap(),
        "--out", grid.to_str().unwrap(), "--sizes", "20,40", "--runs", "2", "--schemes", "tf,tf-iuf",
    ]));
    assert_eq!(read(&grid, "grid.csv").lines().count(), 3);
}

#[test]
fn simulate_rejects_invalid_config() {
    let dir = TempDir::new().unwrap();
    let out = folksonomy(["simulate", "--out", dir.path().join("s").to_str().unwrap(), "--acceptance", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("s").join("bookmarks.jsonl").exists());
}
