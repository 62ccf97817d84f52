//! Binary matrix cache: `WKTS1`, u32 pages, u32 hours, i64 start hour, then
//! row-major u32 counts, all little-endian. The index is a separate
//! `id<TAB>title` text file.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::{IngestError, PageIndex, ViewMatrix};

pub const MATRIX_MAGIC: &[u8; 5] = b"WKTS1";

pub fn write_matrix(matrix: &ViewMatrix, out: &mut impl Write) -> std::io::Result<()> {
    let mut w = BufWriter::new(out);
    w.write_all(MATRIX_MAGIC)?;
    w.write_u32::<LittleEndian>(matrix.n_pages() as u32)?;
    w.write_u32::<LittleEndian>(matrix.n_hours() as u32)?;
    w.write_i64::<LittleEndian>(matrix.start_hour())?;
    for &c in matrix.counts() {
        w.write_u32::<LittleEndian>(c)?;
    }
    w.flush()
}

pub fn read_matrix(input: &mut impl Read, index: PageIndex) -> Result<ViewMatrix, IngestError> {
    let bad = |e: std::io::Error| IngestError::BadCache(e.to_string());
    let mut r = BufReader::new(input);
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic).map_err(bad)?;
    if &magic != MATRIX_MAGIC {
        return Err(IngestError::BadCache("wrong magic".into()));
    }
    let n_pages = r.read_u32::<LittleEndian>().map_err(bad)? as usize;
    let n_hours = r.read_u32::<LittleEndian>().map_err(bad)? as usize;
    let start = r.read_i64::<LittleEndian>().map_err(bad)?;
    if n_pages != index.len() {
        return Err(IngestError::BadCache(format!(
            "matrix has {n_pages} rows but index has {} pages",
            index.len()
        )));
    }
    let mut counts = vec![0u32; n_pages * n_hours];
    r.read_u32_into::<LittleEndian>(&mut counts).map_err(bad)?;
    let mut rest = [0u8; 1];
    if r.read(&mut rest).map_err(bad)? != 0 {
        return Err(IngestError::BadCache("trailing bytes".into()));
    }
    ViewMatrix::from_rows(index, start, n_hours, counts)
}

pub fn write_index(index: &PageIndex, out: &mut impl Write) -> std::io::Result<()> {
    let mut w = BufWriter::new(out);
    for (id, title) in index.iter() {
        writeln!(w, "{id}\t{title}")?;
    }
    w.flush()
}

pub fn read_index(path: &Path, language: &str) -> Result<PageIndex, IngestError> {
    let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
    let mut index = PageIndex::new(language);
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| IngestError::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let parse_err = |reason: &str| IngestError::Parse {
            path: path.to_path_buf(),
            line_no: i + 1,
            reason: reason.into(),
        };
        let (id, title) = line.split_once('\t').ok_or_else(|| parse_err("missing tab"))?;
        let id: u32 = id.parse().map_err(|_| parse_err("bad id"))?;
        if id as usize != index.len() || index.id(title).is_some() {
            return Err(parse_err("ids must be contiguous and titles unique"));
        }
        index.insert(title);
    }
    Ok(index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PageId;

    #[test]
    fn header_layout() {
        let idx = PageIndex::from_titles("en", ["A", "B"]);
        let m = ViewMatrix::from_rows(idx, -2, 3, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let mut buf = Vec::new();
        write_matrix(&m, &mut buf).unwrap();
        assert_eq!(&buf[..5], b"WKTS1");
        assert_eq!(&buf[5..9], &2u32.to_le_bytes());
        assert_eq!(&buf[9..13], &3u32.to_le_bytes());
        assert_eq!(&buf[13..21], &(-2i64).to_le_bytes());
        assert_eq!(&buf[21..25], &1u32.to_le_bytes());
        assert_eq!(buf.len(), 21 + 6 * 4);
        let back = read_matrix(&mut buf.as_slice(), m.index().clone()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.row(PageId(1)), &[4, 5, 6]);
    }

    #[test]
    fn rejects_corrupt_caches() {
        let idx = PageIndex::from_titles("en", ["A"]);
        let m = ViewMatrix::from_rows(idx.clone(), 0, 2, vec![1, 2]).unwrap();
        let mut buf = Vec::new();
        write_matrix(&m, &mut buf).unwrap();
        let mut wrong = buf.clone();
        wrong[0] = b'X';
        assert!(read_matrix(&mut wrong.as_slice(), idx.clone()).is_err());
        let truncated = &buf[..buf.len() - 1];
        assert!(read_matrix(&mut &truncated[..], idx.clone()).is_err());
        buf.push(0);
        assert!(read_matrix(&mut buf.as_slice(), idx).is_err());
    }

    #[test]
    fn index_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("index.tsv");
        let idx = PageIndex::from_titles("fr", ["Tour_Eiffel", "Chat_(animal)"]);
        write_index(&idx, &mut File::create(&p).unwrap()).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "0\tTour_Eiffel\n1\tChat_(animal)\n");
        assert_eq!(read_index(&p, "fr").unwrap(), idx);
    }
}
