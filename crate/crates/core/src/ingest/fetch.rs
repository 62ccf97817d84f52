//! Summary client for the Wikipedia REST API.

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::Deserialize;

/// `{lang}` is replaced by the edition code.
pub const DEFAULT_ENDPOINT: &str = "https://{lang}.wikipedia.org/api/rest_v1";

const TITLE_SEGMENT: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'_')
    .remove(b'-')
    .remove(b'.')
    .remove(b'~');

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("page not found: {0}")]
    NotFound(String),
    #[error("rate limited by server, back off before retrying")]
    RateLimited,
    #[error("transport error: {0}")]
    Transport(String),
}

#[derive(Deserialize)]
struct SummaryDoc {
    extract: String,
}

pub(crate) fn summary_url(title: &str, lang: &str, endpoint: &str) -> String {
    let base = endpoint.trim_end_matches('/');
    let base = if base.contains("{lang}") {
        base.replace("{lang}", lang)
    } else {
        format!("{base}/{lang}")
    };
    format!(
        "{base}/page/summary/{}",
        utf8_percent_encode(title, TITLE_SEGMENT)
    )
}

/// Fetches the plain-text extract of `title`.
///
/// Without a `{lang}` placeholder the request goes to
/// `{endpoint}/{lang}/page/summary/{title}`.
pub fn fetch_summary(title: &str, lang: &str, endpoint: &str) -> Result<String, FetchError> {
    let url = summary_url(title, lang, endpoint);
    let mut resp = match ureq::get(&url).header("Accept", "application/json").call() {
        Ok(r) => r,
        Err(ureq::Error::StatusCode(404)) => return Err(FetchError::NotFound(title.to_owned())),
        Err(ureq::Error::StatusCode(429)) => return Err(FetchError::RateLimited),
        Err(e) => return Err(FetchError::Transport(e.to_string())),
    };
    let body = resp
        .body_mut()
        .read_to_string()
        .map_err(|e| FetchError::Transport(e.to_string()))?;
    let doc: SummaryDoc =
        serde_json::from_str(&body).map_err(|e| FetchError::Transport(format!("bad body: {e}")))?;
    Ok(doc.extract)
}
