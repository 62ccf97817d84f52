use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Dense 0-based page identifier within one [`PageIndex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PageId(pub u32);

impl PageId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Bijection between page titles (underscores preserved) and dense ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PageIndex {
    language: String,
    titles: Vec<String>,
    ids: HashMap<String, PageId>,
}

impl PageIndex {
    pub fn new(language: impl Into<String>) -> Self {
        PageIndex {
            language: language.into(),
            ..Default::default()
        }
    }

    /// Builds an index from titles in iteration order; repeated titles keep
    /// their first id.
    pub fn from_titles<I, S>(language: impl Into<String>, titles: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut index = PageIndex::new(language);
        for t in titles {
            index.insert(t);
        }
        index
    }

    /// Returns the id of `title`, assigning the next free id if it is new.
    pub fn insert(&mut self, title: impl Into<String>) -> PageId {
        let title = title.into();
        if let Some(&id) = self.ids.get(&title) {
            return id;
        }
        let id = PageId(u32::try_from(self.titles.len()).expect("more than u32::MAX pages"));
        self.ids.insert(title.clone(), id);
        self.titles.push(title);
        id
    }

    pub fn id(&self, title: &str) -> Option<PageId> {
        self.ids.get(title).copied()
    }

    pub fn title(&self, id: PageId) -> Option<&str> {
        self.titles.get(id.index()).map(String::as_str)
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn len(&self) -> usize {
        self.titles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.titles.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PageId, &str)> {
        self.titles
            .iter()
            .enumerate()
            .map(|(i, t)| (PageId(i as u32), t.as_str()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insert_is_idempotent() {
        let mut idx = PageIndex::new("en");
        let a = idx.insert("Cat");
        let b = idx.insert("Dog");
        assert_eq!(idx.insert("Cat"), a);
        assert_eq!((a, b), (PageId(0), PageId(1)));
        assert_eq!(idx.title(b), Some("Dog"));
        assert_eq!(idx.id("Tour_Eiffel"), None);
    }

    proptest! {
        #[test]
        fn bijection(titles in proptest::collection::vec("[A-Za-z_]{1,8}", 0..40)) {
            let idx = PageIndex::from_titles("en", titles);
            for (id, title) in idx.iter() {
                prop_assert_eq!(idx.id(title), Some(id));
            }
            let ids: Vec<u32> = idx.iter().map(|(id, _)| id.0).collect();
            prop_assert_eq!(ids, (0..idx.len() as u32).collect::<Vec<_>>());
        }
    }
}
