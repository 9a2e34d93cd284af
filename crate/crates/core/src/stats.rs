//! Dataset analyses: tag availability, average distinct-tag counts, tag
//! rank-usage curves, resource/user/bookmark frequency relations and tag
//! novelty per bookmark rank. Every result can be exported as CSV.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::io;

use crate::error::{Error, Result};
use crate::store::{EntityKind, Folksonomy, TagId};
use crate::ingest::IngestReport;

fn ensure_non_empty(f: &Folksonomy) -> Result<()> {
    if f.is_empty() {
        Err(Error::EmptyFolksonomy)
    } else {
        Ok(())
    }
}

fn real(x: f64) -> String {
    format!("{x:.6}")
}

/// Mean number of distinct tags per resource, per user and per bookmark.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AverageTagCounts {
    pub per_resource: f64,
    pub per_user: f64,
    pub per_bookmark: f64,
}

impl AverageTagCounts {
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["entity", "mean_distinct_tags"])?;
        w.write_record(["resource", &real(self.per_resource)])?;
        w.write_record(["user", &real(self.per_user)])?;
        w.write_record(["bookmark", &real(self.per_bookmark)])?;
        w.flush()?;
        Ok(())
    }
}

pub fn avg_distinct_tags(f: &Folksonomy) -> Result<AverageTagCounts> {
    ensure_non_empty(f)?;
    let mean = |sum: usize, n: u64| sum as f64 / n as f64;
    let resources: usize = f.resources().map(|r| f.resource_tags(r).len()).sum();
    let users: usize = f.users().map(|u| f.user_tags(u).len()).sum();
    let bookmarks: usize = f.bookmarks().iter().map(|b| b.tags.len()).sum();
    Ok(AverageTagCounts {
        per_resource: mean(resources, f.n_resources()),
        per_user: mean(users, f.n_users()),
        per_bookmark: mean(bookmarks, f.n_bookmarks()),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankUsagePoint {
    pub tag: TagId,
    pub count: u64,
    pub rank_percent: f64,
    pub coverage_percent: f64,
}

/// Percent of entities carrying each tag, tags sorted by descending coverage.
#[derive(Clone, Debug, PartialEq)]
pub struct RankUsageCurve {
    pub kind: EntityKind,
    pub points: Vec<RankUsagePoint>,
}

impl RankUsageCurve {
    /// Mean coverage percent over the top 10% of ranked tags (at least one tag).
    pub fn top_decile_coverage(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        let n = self.points.len().div_ceil(10);
        self.points[..n].iter().map(|p| p.coverage_percent).sum::<f64>() / n as f64
    }

    pub fn write_csv<W: io::Write>(&self, f: &Folksonomy, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["rank", "tag", "count", "rank_percent", "coverage_percent"])?;
        for (i, p) in self.points.iter().enumerate() {
            w.write_record([
                &(i + 1).to_string(),
                f.tag_name(p.tag),
                &p.count.to_string(),
                &real(p.rank_percent),
                &real(p.coverage_percent),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn rank_usage_curve(f: &Folksonomy, kind: EntityKind) -> Result<RankUsageCurve> {
    ensure_non_empty(f)?;
    let mut counted: Vec<(TagId, u64)> = f
        .used_tags()
        .map(|t| (t, f.frequencies(t).get(kind)))
        .collect();
    counted.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| f.tag_name(a.0).cmp(f.tag_name(b.0))));
    let n_tags = counted.len() as f64;
    let total = f.total(kind) as f64;
    let points = counted
        .into_iter()
        .enumerate()
        .map(|(i, (tag, count))| RankUsagePoint {
            tag,
            count,
            rank_percent: 100.0 * (i + 1) as f64 / n_tags,
            coverage_percent: 100.0 * count as f64 / total,
        })
        .collect();
    Ok(RankUsageCurve { kind, points })
}

/// Fractions of tags for which one frequency is greater than, equal to, or
/// less than another.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RelationFractions {
    pub greater: f64,
    pub equal: f64,
    pub less: f64,
}

impl RelationFractions {
    fn tally(counts: [u64; 3], n: f64) -> Self {
        RelationFractions {
            greater: counts[0] as f64 / n,
            equal: counts[1] as f64 / n,
            less: counts[2] as f64 / n,
        }
    }
}

/// Pairwise comparison of rf (r), uf (u) and bf (b) over all tags.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RubComparison {
    /// b vs u
    pub bookmarks_users: RelationFractions,
    /// r vs u
    pub resources_users: RelationFractions,
    /// b vs r
    pub bookmarks_resources: RelationFractions,
}

impl RubComparison {
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["relation", "fraction"])?;
        let rows = [
            ("b>u", self.bookmarks_users.greater),
            ("b=u", self.bookmarks_users.equal),
            ("b<u", self.bookmarks_users.less),
            ("r>u", self.resources_users.greater),
            ("r=u", self.resources_users.equal),
            ("r<u", self.resources_users.less),
            ("b>r", self.bookmarks_resources.greater),
            ("b=r", self.bookmarks_resources.equal),
            ("b<r", self.bookmarks_resources.less),
        ];
        for (name, value) in rows {
            w.write_record([name, &real(value)])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn slot(ord: Ordering) -> usize {
    match ord {
        Ordering::Greater => 0,
        Ordering::Equal => 1,
        Ordering::Less => 2,
    }
}

pub fn rub_comparison(f: &Folksonomy) -> Result<RubComparison> {
    ensure_non_empty(f)?;
    let mut bu = [0u64; 3];
    let mut ru = [0u64; 3];
    let mut br = [0u64; 3];
    let mut n = 0u64;
    for t in f.used_tags() {
        let q = f.frequencies(t);
        bu[slot(q.bf.cmp(&q.uf))] += 1;
        ru[slot(q.rf.cmp(&q.uf))] += 1;
        br[slot(q.bf.cmp(&q.rf))] += 1;
        n += 1;
    }
    let n = n as f64;
    Ok(RubComparison {
        bookmarks_users: RelationFractions::tally(bu, n),
        resources_users: RelationFractions::tally(ru, n),
        bookmarks_resources: RelationFractions::tally(br, n),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoveltyPoint {
    /// 1-based.
    pub rank: usize,
    pub mean_novelty: f64,
    pub n_resources: u64,
}

/// Mean share of a bookmark's tags not seen in the resource's earlier
/// bookmarks, per bookmark rank.
#[derive(Clone, Debug, PartialEq)]
pub struct NoveltyCurve {
    pub points: Vec<NoveltyPoint>,
}

impl NoveltyCurve {
    pub fn at_rank(&self, rank: usize) -> Option<&NoveltyPoint> {
        self.points.get(rank.checked_sub(1)?).filter(|p| p.n_resources > 0)
    }

    /// Mean of per-rank means over ranks `from..=to` that have data.
    pub fn mean_over_ranks(&self, from: usize, to: usize) -> f64 {
        let vals: Vec<f64> = (from..=to).filter_map(|k| self.at_rank(k)).map(|p| p.mean_novelty).collect();
        if vals.is_empty() {
            0.0
        } else {
            vals.iter().sum::<f64>() / vals.len() as f64
        }
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["rank", "mean_novelty", "n_resources"])?;
        for p in &self.points {
            w.write_record([&p.rank.to_string(), &real(p.mean_novelty), &p.n_resources.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub const DEFAULT_MAX_RANK: usize = 100;

/// Points are emitted for ranks 1..=max_rank; ranks no resource reaches
/// carry `n_resources = 0` and a mean of 0.
pub fn novelty_curve(f: &Folksonomy, max_rank: usize) -> Result<NoveltyCurve> {
    if !f.is_ordered() {
        return Err(Error::Unordered);
    }
    let mut sums = vec![0.0f64; max_rank];
    let mut counts = vec![0u64; max_rank];
    for r in f.resources() {
        let mut seen: BTreeSet<TagId> = BTreeSet::new();
        for (k, b) in f.resource_bookmarks(r).take(max_rank).enumerate() {
            let new = b.tags.iter().filter(|t| !seen.contains(t)).count();
            sums[k] += new as f64 / b.tags.len() as f64;
            counts[k] += 1;
            seen.extend(b.tags.iter().copied());
        }
    }
    let points = (0..max_rank)
        .map(|k| NoveltyPoint {
            rank: k + 1,
            mean_novelty: if counts[k] == 0 { 0.0 } else { sums[k] / counts[k] as f64 },
            n_resources: counts[k],
        })
        .collect();
    Ok(NoveltyCurve { points })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AvailabilityRow {
    pub kind: &'static str,
    pub annotated: u64,
    pub total: u64,
    pub percent: f64,
}

/// Annotated/total/percent table in the layout of a tag-availability table,
/// followed by the distinct tag count.
#[derive(Clone, Debug, PartialEq)]
pub struct AvailabilityTable {
    pub rows: Vec<AvailabilityRow>,
    pub tags: u64,
}

pub fn availability_report(report: &IngestReport) -> AvailabilityTable {
    let row = |kind, a: &crate::ingest::Availability| AvailabilityRow {
        kind,
        annotated: a.annotated,
        total: a.total,
        percent: a.percent(),
    };
    AvailabilityTable {
        rows: vec![
            row("Users", &report.users),
            row("Bookmarks", &report.bookmarks),
            row("Resources", &report.resources),
        ],
        tags: report.distinct_tags,
    }
}

impl fmt::Display for AvailabilityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>14} {:>14} {:>8}", "", "Annotated", "Total", "Percent")?;
        for r in &self.rows {
            writeln!(f, "{:<10} {:>14} {:>14} {:>7.2}%", r.kind, r.annotated, r.total, r.percent)?;
        }
        write!(f, "{:<10} {:>14} {:>14} {:>8}", "Tags", "", self.tags, "-")
    }
}

impl AvailabilityTable {
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["kind", "annotated", "total", "percent"])?;
        for r in &self.rows {
            w.write_record([r.kind, &r.annotated.to_string(), &r.total.to_string(), &format!("{:.2}", r.percent)])?;
        }
        w.write_record(["Tags", "", &self.tags.to_string(), ""])?;
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::Availability;

    fn worked_example() -> Folksonomy {
        let mut f = Folksonomy::new();
        f.add_bookmark("u1", "r1", ["social-tagging", "research", "paper"]).unwrap();
        f.add_bookmark("u2", "r1", ["classification", "paper", "social-tagging", "social-bookmarking"])
            .unwrap();
        f
    }

    #[test]
    fn averages_on_worked_example() {
        let a = avg_distinct_tags(&worked_example()).unwrap();
        assert_eq!(a, AverageTagCounts { per_resource: 5.0, per_user: 3.5, per_bookmark: 3.5 });
    }

    #[test]
    fn averages_single_bookmark() {
        let mut f = Folksonomy::new();
        f.add_bookmark("u", "r", ["a", "b", "c", "d"]).unwrap();
        let a = avg_distinct_tags(&f).unwrap();
        assert_eq!((a.per_resource, a.per_user, a.per_bookmark), (4.0, 4.0, 4.0));
    }

    #[test]
    fn empty_folksonomy_errors() {
        let f = Folksonomy::new();
        assert!(matches!(avg_distinct_tags(&f), Err(Error::EmptyFolksonomy)));
        assert!(rank_usage_curve(&f, EntityKind::Users).is_err());
        assert!(rub_comparison(&f).is_err());
    }

    #[test]
    fn single_point_fifty_percent() {
        // Every stored resource is annotated, so the other half carry their own tags.
        let mut f = Folksonomy::new();
        for r in 0..10 {
            if r < 5 {
                f.add_bookmark("u", &format!("r{r}"), ["a"]).unwrap();
            } else {
                f.add_bookmark("u", &format!("r{r}"), [format!("z{r}")]).unwrap();
            }
        }
        let c = rank_usage_curve(&f, EntityKind::Resources).unwrap();
        let a = c.points.iter().find(|p| f.tag_name(p.tag) == "a").unwrap();
        assert_eq!(a.coverage_percent, 50.0);
        assert_eq!(a.rank_percent, 100.0 / 6.0);
    }

    #[test]
    fn uniform_curve_is_flat() {
        let mut f = Folksonomy::new();
        for r in 0..8 {
            f.add_bookmark("u", &format!("r{r}"), [format!("t{r}")]).unwrap();
        }
        let c = rank_usage_curve(&f, EntityKind::Resources).unwrap();
        assert!(c.points.iter().all(|p| p.coverage_percent == 100.0 / 8.0));
        // Ties by tag name.
        let names: Vec<&str> = c.points.iter().map(|p| f.tag_name(p.tag)).collect();
        assert_eq!(names, vec!["t0", "t1", "t2", "t3", "t4", "t5", "t6", "t7"]);
        assert_eq!(c.points.last().unwrap().rank_percent, 100.0);
    }

    #[test]
    fn rub_on_worked_example() {
        let f = worked_example();
        let q = f.frequencies_by_name("paper");
        assert_eq!((q.rf, q.uf, q.bf), (1, 2, 2));
        let rub = rub_comparison(&f).unwrap();
        // paper and social-tagging: r<u, b=u, b>r. Other three: all equal.
        assert_eq!(rub.resources_users.less, 2.0 / 5.0);
        assert_eq!(rub.bookmarks_users.equal, 1.0);
        assert_eq!(rub.bookmarks_resources.greater, 2.0 / 5.0);
        assert_eq!(rub.bookmarks_users.less, 0.0);
        assert_eq!(rub.bookmarks_resources.less, 0.0);
    }

    #[test]
    fn rub_single_bookmark() {
        let mut f = Folksonomy::new();
        f.add_bookmark("u", "r", ["a", "b"]).unwrap();
        let rub = rub_comparison(&f).unwrap();
        assert_eq!(rub.bookmarks_users.equal, 1.0);
        assert_eq!(rub.resources_users.equal, 1.0);
        assert_eq!(rub.bookmarks_resources.equal, 1.0);
    }

    #[test]
    fn novelty_fifty_percent() {
        let mut f = Folksonomy::new();
        f.add_bookmark("u1", "r", ["tag1", "tag2"]).unwrap();
        f.add_bookmark("u2", "r", ["tag2", "tag3"]).unwrap();
        let c = novelty_curve(&f, DEFAULT_MAX_RANK).unwrap();
        assert_eq!(c.points.len(), 100);
        assert_eq!(c.at_rank(1).unwrap().mean_novelty, 1.0);
        assert_eq!(c.at_rank(2).unwrap().mean_novelty, 0.5);
        assert!(c.at_rank(3).is_none());
        assert_eq!(c.points[2].n_resources, 0);
    }

    #[test]
    fn novelty_full_overlap() {
        let mut f = Folksonomy::new();
        f.add_bookmark("u1", "r", ["a", "b"]).unwrap();
        f.add_bookmark("u2", "r", ["b", "a"]).unwrap();
        let c = novelty_curve(&f, 5).unwrap();
        assert_eq!(c.at_rank(2).unwrap().mean_novelty, 0.0);
    }

    #[test]
    fn novelty_refused_when_unordered() {
        let mut f = worked_example();
        f.mark_unordered();
        assert!(matches!(novelty_curve(&f, 10), Err(Error::Unordered)));
    }

    #[test]
    fn availability_rows() {
        let report = IngestReport {
            users: Availability { annotated: 1_618_635, total: 1_855_792 },
            bookmarks: Availability { annotated: 87, total: 100 },
            resources: Availability { annotated: 5, total: 5 },
            distinct_tags: 3,
            ..Default::default()
        };
        let table = availability_report(&report);
        assert_eq!(format!("{:.2}", table.rows[0].percent), "87.22");
        assert_eq!(format!("{:.2}", table.rows[1].percent), "87.00");
        assert_eq!(format!("{:.2}", table.rows[2].percent), "100.00");
        let text = table.to_string();
        assert!(text.contains("87.22%"));
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let csv = String::from_utf8(buf).unwrap();
        assert!(csv.starts_with("kind,annotated,total,percent\nUsers,1618635,1855792,87.22\n"));
    }

    #[test]
    fn csv_six_decimals() {
        let mut buf = Vec::new();
        avg_distinct_tags(&worked_example()).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "entity,mean_distinct_tags\nresource,5.000000\nuser,3.500000\nbookmark,3.500000\n"
        );
    }
}
