use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Label, LabelError};

/// Title-parenthetical and keyword-conjunction rules. Keyword sets are tried
/// in file order and the first fully matching set wins.
///
/// On disk (TOML):
///
/// ```toml
/// [title_patterns]
/// album = "music"
///
/// [[keyword_sets]]
/// label = "politics"
/// keywords = ["political", "party", "republican"]
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LabelRules {
    #[serde(default)]
    pub title_patterns: BTreeMap<String, Label>,
    #[serde(default)]
    pub keyword_sets: Vec<KeywordSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordSet {
    pub label: Label,
    pub keywords: Vec<String>,
}

impl LabelRules {
    pub fn new(title_patterns: impl IntoIterator<Item = (String, Label)>, keyword_sets: Vec<(Label, Vec<String>)>) -> Result<Self, LabelError> {
        let rules = LabelRules {
            title_patterns: title_patterns.into_iter().map(|(p, l)| (p.to_lowercase(), l)).collect(),
            keyword_sets: keyword_sets
                .into_iter()
                .map(|(label, kws)| KeywordSet {
                    label,
                    keywords: kws.into_iter().map(|k| k.to_lowercase()).collect(),
                })
                .collect(),
        };
        rules.validate()?;
        Ok(rules)
    }

    pub fn from_toml(text: &str) -> Result<Self, LabelError> {
        let mut rules: LabelRules = toml::from_str(text).map_err(|e| LabelError::InvalidRules(e.to_string()))?;
        rules.title_patterns = std::mem::take(&mut rules.title_patterns)
            .into_iter()
            .map(|(p, l)| (p.to_lowercase(), l))
            .collect();
        for set in &mut rules.keyword_sets {
            for k in &mut set.keywords {
                *k = k.to_lowercase();
            }
        }
        rules.validate()?;
        Ok(rules)
    }

    pub fn load(path: &Path) -> Result<Self, LabelError> {
        let text = std::fs::read_to_string(path).map_err(|source| LabelError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    fn validate(&self) -> Result<(), LabelError> {
        if let Some(i) = self.keyword_sets.iter().position(|s| s.keywords.is_empty()) {
            return Err(LabelError::InvalidRules(format!("keyword set {i} is empty")));
        }
        Ok(())
    }
}

/// Text inside a trailing `(...)` of a title, lowercased. Works for both
/// `Nevermind (album)` and `Nevermind_(album)`.
fn title_parenthetical(title: &str) -> Option<String> {
    let inner = title.trim_end().strip_suffix(')')?;
    let open = inner.rfind('(')?;
    Some(inner[open + 1..].trim().replace('_', " ").to_lowercase())
}

/// Rule label of a page, if any rule fires. Keywords match whole tokens of
/// the lowercased summary.
pub fn rule_label(title: &str, summary: &str, rules: &LabelRules) -> Option<Label> {
    if let Some(p) = title_parenthetical(title) {
        if let Some(&l) = rules.title_patterns.get(&p) {
            return Some(l);
        }
    }
    let lower = summary.to_lowercase();
    let tokens: BTreeSet<&str> = lower.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).collect();
    rules
        .keyword_sets
        .iter()
        .find(|set| set.keywords.iter().all(|k| tokens.contains(k.as_str())))
        .map(|set| set.label)
}
