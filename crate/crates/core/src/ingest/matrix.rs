use std::collections::HashMap;

use super::{EdgeList, IngestError, PageId, PageIndex, ViewRecord};

/// Dense pages × hours count matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewMatrix {
    index: PageIndex,
    start_hour: i64,
    n_hours: usize,
    counts: Vec<u32>,
}

impl ViewMatrix {
    pub fn zeros(index: PageIndex, start_hour: i64, n_hours: usize) -> Result<Self, IngestError> {
        if n_hours == 0 {
            return Err(IngestError::EmptyRange {
                start: start_hour,
                end: start_hour,
            });
        }
        let counts = vec![0; index.len() * n_hours];
        Ok(ViewMatrix {
            index,
            start_hour,
            n_hours,
            counts,
        })
    }

    pub fn from_rows(
        index: PageIndex,
        start_hour: i64,
        n_hours: usize,
        counts: Vec<u32>,
    ) -> Result<Self, IngestError> {
        if n_hours == 0 {
            return Err(IngestError::EmptyRange {
                start: start_hour,
                end: start_hour,
            });
        }
        if counts.len() != index.len() * n_hours {
            return Err(IngestError::BadCache(format!(
                "{} counts for {} pages × {} hours",
                counts.len(),
                index.len(),
                n_hours
            )));
        }
        Ok(ViewMatrix {
            index,
            start_hour,
            n_hours,
            counts,
        })
    }

    pub fn index(&self) -> &PageIndex {
        &self.index
    }

    pub fn start_hour(&self) -> i64 {
        self.start_hour
    }

    pub fn end_hour(&self) -> i64 {
        self.start_hour + self.n_hours as i64
    }

    pub fn n_pages(&self) -> usize {
        self.index.len()
    }

    pub fn n_hours(&self) -> usize {
        self.n_hours
    }

    pub fn row(&self, page: PageId) -> &[u32] {
        let s = page.index() * self.n_hours;
        &self.counts[s..s + self.n_hours]
    }

    pub fn row_mut(&mut self, page: PageId) -> &mut [u32] {
        let s = page.index() * self.n_hours;
        &mut self.counts[s..s + self.n_hours]
    }

    pub fn get(&self, page: PageId, hour_offset: usize) -> u32 {
        self.row(page)[hour_offset]
    }

    pub fn rows(&self) -> impl Iterator<Item = (PageId, &[u32])> {
        self.counts
            .chunks_exact(self.n_hours)
            .enumerate()
            .map(|(i, r)| (PageId(i as u32), r))
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Adds one record; returns false when it is outside the hour range or
    /// its title is unknown.
    pub fn add_record(&mut self, rec: &ViewRecord) -> bool {
        if rec.hour < self.start_hour || rec.hour >= self.end_hour() {
            return false;
        }
        let Some(page) = self.index.id(&rec.title) else {
            return false;
        };
        let t = (rec.hour - self.start_hour) as usize;
        let cell = &mut self.row_mut(page)[t];
        *cell = cell.saturating_add(u32::try_from(rec.views).unwrap_or(u32::MAX));
        true
    }

    /// Element-wise sum with a matrix over the same index and range.
    pub fn merge(&mut self, other: &ViewMatrix) {
        assert_eq!(self.counts.len(), other.counts.len(), "merging mismatched matrices");
        assert_eq!(self.start_hour, other.start_hour);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a = a.saturating_add(*b);
        }
    }
}

/// Aggregates records into a matrix over `[start_hour, end_hour)`.
pub fn build_view_matrix(
    records: impl IntoIterator<Item = ViewRecord>,
    index: PageIndex,
    start_hour: i64,
    end_hour: i64,
) -> Result<ViewMatrix, IngestError> {
    if end_hour <= start_hour {
        return Err(IngestError::EmptyRange {
            start: start_hour,
            end: end_hour,
        });
    }
    let mut m = ViewMatrix::zeros(index, start_hour, (end_hour - start_hour) as usize)?;
    for rec in records {
        m.add_record(&rec);
    }
    Ok(m)
}

/// Keeps pages with at least `min_total_views` views and at least
/// `min_degree` incident hyperlinks (either direction), re-densifying ids in
/// their original order.
pub fn prefilter(
    matrix: &ViewMatrix,
    edges: &EdgeList,
    min_total_views: u64,
    min_degree: usize,
) -> (ViewMatrix, EdgeList) {
    let mut degree = vec![0usize; matrix.n_pages()];
    for (s, t) in edges.iter() {
        degree[s.index()] += 1;
        degree[t.index()] += 1;
    }
    let keep: Vec<PageId> = matrix
        .rows()
        .filter(|(p, row)| {
            degree[p.index()] >= min_degree
                && row.iter().map(|&c| c as u64).sum::<u64>() >= min_total_views
        })
        .map(|(p, _)| p)
        .collect();
    let mut remap = HashMap::with_capacity(keep.len());
    let mut index = PageIndex::new(matrix.index().language());
    let mut counts = Vec::with_capacity(keep.len() * matrix.n_hours());
    for &p in &keep {
        let new_id = index.insert(matrix.index().title(p).expect("id from matrix"));
        remap.insert(p, new_id);
        counts.extend_from_slice(matrix.row(p));
    }
    let edges = EdgeList::from_pairs(
        edges
            .iter()
            .filter_map(|(s, t)| Some((*remap.get(&s)?, *remap.get(&t)?))),
    );
    let m = ViewMatrix::from_rows(index, matrix.start_hour(), matrix.n_hours(), counts)
        .expect("shape preserved");
    (m, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rec(title: &str, hour: i64, views: u64) -> ViewRecord {
        ViewRecord {
            project: "en".into(),
            title: title.into(),
            views,
            hour,
        }
    }

    #[test]
    fn aggregates_additively() {
        let idx = PageIndex::from_titles("en", ["Cat", "Dog"]);
        let m = build_view_matrix([rec("Cat", 5, 3), rec("Cat", 5, 4)], idx, 0, 10).unwrap();
        assert_eq!(m.get(PageId(0), 5), 7);
        assert_eq!(m.total(), 7);
    }

    #[test]
    fn empty_input_gives_zero_matrix() {
        let idx = PageIndex::from_titles("en", ["Cat"]);
        let m = build_view_matrix(Vec::new(), idx, 10, 14).unwrap();
        assert_eq!(m.counts(), &[0, 0, 0, 0]);
    }

    #[test]
    fn out_of_range_and_unknown_records_are_skipped() {
        let idx = PageIndex::from_titles("en", ["Cat"]);
        let m = build_view_matrix(
            [rec("Cat", 9, 1), rec("Cat", 14, 1), rec("Dog", 11, 1), rec("Cat", 13, 2)],
            idx,
            10,
            14,
        )
        .unwrap();
        assert_eq!(m.row(PageId(0)), &[0, 0, 0, 2]);
    }

    #[test]
    fn empty_range_is_an_error() {
        let idx = PageIndex::from_titles("en", ["Cat"]);
        assert!(matches!(
            build_view_matrix(Vec::new(), idx, 5, 5),
            Err(IngestError::EmptyRange { .. })
        ));
    }

    #[test]
    fn merge_adds_elementwise() {
        let idx = PageIndex::from_titles("en", ["Cat"]);
        let mut a = build_view_matrix([rec("Cat", 0, 2)], idx.clone(), 0, 2).unwrap();
        let b = build_view_matrix([rec("Cat", 0, 3), rec("Cat", 1, 1)], idx, 0, 2).unwrap();
        a.merge(&b);
        assert_eq!(a.row(PageId(0)), &[5, 1]);
    }

    #[test]
    fn prefilter_reindexes() {
        let idx = PageIndex::from_titles("en", ["A", "B", "C"]);
        let m = ViewMatrix::from_rows(idx, 0, 2, vec![5, 5, 0, 1, 9, 9]).unwrap();
        let e = EdgeList::from_pairs([(PageId(0), PageId(2)), (PageId(1), PageId(2))]);
        let (m2, e2) = prefilter(&m, &e, 2, 1);
        assert_eq!(m2.index().title(PageId(0)), Some("A"));
        assert_eq!(m2.index().title(PageId(1)), Some("C"));
        assert_eq!(m2.row(PageId(1)), &[9, 9]);
        assert_eq!(e2.as_slice(), &[(PageId(0), PageId(1))]);
    }

    proptest! {
        #[test]
        fn total_equals_in_range_resolvable_views(
            recs in proptest::collection::vec((0usize..4, -3i64..15, 0u64..1000), 0..80)
        ) {
            let titles = ["A", "B", "C", "D"];
            let idx = PageIndex::from_titles("en", titles[..3].iter().copied());
            let records: Vec<_> = recs.iter().map(|&(t, h, v)| rec(titles[t], h, v)).collect();
            let expected: u64 = recs.iter().filter(|&&(t, h, _)| t < 3 && (0..12).contains(&h)).map(|r| r.2).sum();
            let m = build_view_matrix(records, idx, 0, 12).unwrap();
            prop_assert_eq!(m.total(), expected);
        }
    }
}
