use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;
use std::sync::OnceLock;

use chrono::NaiveDate;
use flate2::read::MultiGzDecoder;
use regex::Regex;

use super::IngestError;

/// One line of an hourly pageview dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewRecord {
    pub project: String,
    pub title: String,
    pub views: u64,
    /// Hours since the Unix epoch, taken from the dump file name.
    pub hour: i64,
}

impl ViewRecord {
    /// Serializes back to dump layout. The byte count is not retained and is
    /// written as 0.
    pub fn to_line(&self) -> String {
        format!("{} {} {} 0", self.project, self.title, self.views)
    }
}

/// Parses `project title views bytes`.
pub fn parse_pageview_line(line: &str, hour: i64) -> Result<ViewRecord, IngestError> {
    let malformed = |reason| IngestError::MalformedLine {
        line: line.to_owned(),
        reason,
    };
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    let mut fields = line.split(' ');
    let (Some(project), Some(title), Some(views), Some(bytes), None) = (
        fields.next(),
        fields.next(),
        fields.next(),
        fields.next(),
        fields.next(),
    ) else {
        return Err(malformed("expected exactly 4 space-separated fields"));
    };
    if project.is_empty() || title.is_empty() {
        return Err(malformed("empty project or title"));
    }
    let views = views
        .parse::<u64>()
        .map_err(|_| malformed("views is not a non-negative integer"))?;
    // bytes column is ignored, but must still be numeric
    bytes
        .parse::<u64>()
        .map_err(|_| malformed("bytes is not a non-negative integer"))?;
    Ok(ViewRecord {
        project: project.to_owned(),
        title: title.to_owned(),
        views,
        hour,
    })
}

fn file_hour_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(\d{4})(\d{2})(\d{2})-(\d{2})").unwrap())
}

/// Extracts the hour (since epoch, UTC) from a name containing `YYYYMMDD-HH`,
/// e.g. `pageviews-20180901-130000.gz`.
pub fn hour_from_file_name(name: &str) -> Option<i64> {
    let caps = file_hour_re().captures(name)?;
    let num = |i: usize| caps[i].parse::<u32>().ok();
    let date = NaiveDate::from_ymd_opt(num(1)? as i32, num(2)?, num(3)?)?;
    let hour = num(4)?;
    if hour > 23 {
        return None;
    }
    let dt = date.and_hms_opt(hour, 0, 0)?;
    Some(dt.and_utc().timestamp().div_euclid(3600))
}

/// Streams the records of one dump file (plain text or gzip) into `sink`,
/// keeping only lines whose project equals `project`. Malformed lines are
/// skipped; their count is returned.
pub fn read_pageview_file(
    path: &Path,
    hour: i64,
    project: &str,
    mut sink: impl FnMut(ViewRecord),
) -> Result<usize, IngestError> {
    let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
    let reader: Box<dyn Read> = if path.extension().is_some_and(|e| e == "gz") {
        Box::new(MultiGzDecoder::new(file))
    } else {
        Box::new(file)
    };
    let mut reader = BufReader::new(reader);
    let mut buf = Vec::new();
    let mut malformed = 0;
    loop {
        buf.clear();
        let n = reader
            .read_until(b'\n', &mut buf)
            .map_err(|e| IngestError::io(path, e))?;
        if n == 0 {
            break;
        }
        // dumps are not guaranteed to be valid UTF-8
        let line = String::from_utf8_lossy(&buf);
        let line = line.trim_end_matches(['\n', '\r']);
        if line.is_empty() {
            continue;
        }
        let prefix_ok = line
            .strip_prefix(project)
            .is_some_and(|rest| rest.starts_with(' '));
        if !prefix_ok {
            continue;
        }
        match parse_pageview_line(line, hour) {
            Ok(rec) => sink(rec),
            Err(_) => malformed += 1,
        }
    }
    if malformed > 0 {
        log::warn!("{}: skipped {malformed} malformed lines", path.display());
    }
    Ok(malformed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_well_formed_lines() {
        let r = parse_pageview_line("en Cat 12 0", 5).unwrap();
        assert_eq!((r.project.as_str(), r.title.as_str(), r.views, r.hour), ("en", "Cat", 12, 5));
        let r = parse_pageview_line("fr Tour_Eiffel 300 0", 0).unwrap();
        assert_eq!((r.project.as_str(), r.title.as_str(), r.views), ("fr", "Tour_Eiffel", 300));
    }

    #[test]
    fn rejects_malformed_lines() {
        for bad in ["en Cat", "en Cat 1 0 9", "en Cat -3 0", "en Cat x 0", "", "en  3 0"] {
            assert!(
                matches!(parse_pageview_line(bad, 0), Err(IngestError::MalformedLine { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn hour_from_dump_names() {
        assert_eq!(hour_from_file_name("pageviews-19700101-000000.gz"), Some(0));
        assert_eq!(hour_from_file_name("pageviews-19700102-030000"), Some(27));
        // 2018-09-01T00:00Z = 1535760000 s
        assert_eq!(hour_from_file_name("x/pageviews-20180901-00.txt"), Some(1535760000 / 3600));
        assert_eq!(hour_from_file_name("pageviews-20181301-00"), None);
        assert_eq!(hour_from_file_name("pageviews-20180901-24"), None);
        assert_eq!(hour_from_file_name("nothing"), None);
    }

    #[test]
    fn reads_plain_and_gzip_files() {
        use std::io::Write;
        let dir = tempfile::tempdir().unwrap();
        let body = "en Cat 3 0\nfr Chat 9 0\nen.m Cat 4 0\nen bad\nen Dog 2 10\n";
        let plain = dir.path().join("pageviews-20180901-000000");
        std::fs::write(&plain, body).unwrap();
        let gz = dir.path().join("pageviews-20180901-010000.gz");
        let mut enc = flate2::write::GzEncoder::new(
            File::create(&gz).unwrap(),
            flate2::Compression::fast(),
        );
        enc.write_all(body.as_bytes()).unwrap();
        enc.finish().unwrap();
        for p in [plain, gz] {
            let mut got = Vec::new();
            let bad = read_pageview_file(&p, 7, "en", |r| got.push((r.title, r.views))).unwrap();
            assert_eq!(bad, 1);
            assert_eq!(got, vec![("Cat".to_string(), 3), ("Dog".to_string(), 2)]);
        }
    }

    proptest! {
        #[test]
        fn parse_serialize_parse(project in "[a-z]{2,3}(\\.m)?", title in "[^ \\n\\r]{1,20}", views in 0u64..10_000_000) {
            let line = format!("{project} {title} {views} 123");
            let r = parse_pageview_line(&line, 0).unwrap();
            let again = parse_pageview_line(&r.to_line(), 0).unwrap();
            prop_assert_eq!(r, again);
        }
    }
}
