//! External merge sort over opaque byte records, ordered bytewise.
//!
//! Records are buffered up to `max_in_memory_records`, sorted, and spilled
//! to run files in a private temporary directory. Runs are merged
//! `fan_in` at a time until at most `fan_in` remain; the last merge is
//! streamed to the caller. The directory is removed when the sorted stream
//! is dropped, on success and on error alike.
//!
//! Run file format (internal, not stable): a sequence of records, each a
//! little-endian `u32` length followed by that many bytes.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;

use tempfile::TempDir;

/// Environment variable overriding the temporary directory.
pub const TEMP_DIR_ENV: &str = "TRUSTYURI_TMPDIR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortConfig {
    pub max_in_memory_records: usize,
    pub temp_dir: PathBuf,
    pub fan_in: usize,
}

impl Default for SortConfig {
    fn default() -> Self {
        SortConfig {
            max_in_memory_records: 1_000_000,
            temp_dir: std::env::var_os(TEMP_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(std::env::temp_dir),
            fan_in: 16,
        }
    }
}

impl SortConfig {
    pub fn validate(&self) -> io::Result<()> {
        if self.max_in_memory_records == 0 || self.fan_in < 2 {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                "max_in_memory_records must be positive and fan_in at least 2",
            ));
        }
        Ok(())
    }
}

/// Counters describing one sort.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SortStats {
    pub records: u64,
    pub initial_runs: usize,
    pub merge_passes: usize,
    /// Largest number of records held in memory at once.
    pub peak_resident_records: usize,
}

/// A sorted run on disk.
#[derive(Debug)]
pub struct SortRun {
    pub path: PathBuf,
    pub record_count: u64,
}

fn write_record<W: Write>(w: &mut W, rec: &[u8]) -> io::Result<()> {
    let len = u32::try_from(rec.len()).map_err(|_| io::Error::new(io::ErrorKind::InvalidInput, "record too large"))?;
    w.write_all(&len.to_le_bytes())?;
    w.write_all(rec)
}

fn read_record<R: Read>(r: &mut R) -> io::Result<Option<Vec<u8>>> {
    let mut len = [0u8; 4];
    match r.read_exact(&mut len) {
        Ok(()) => {}
        Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => return Ok(None),
        Err(e) => return Err(e),
    }
    let mut rec = vec![0u8; u32::from_le_bytes(len) as usize];
    r.read_exact(&mut rec)?;
    Ok(Some(rec))
}

struct RunReader {
    input: BufReader<File>,
}

impl RunReader {
    fn open(run: &SortRun) -> io::Result<Self> {
        Ok(RunReader {
            input: BufReader::with_capacity(64 * 1024, File::open(&run.path)?),
        })
    }

    fn next_record(&mut self) -> io::Result<Option<Vec<u8>>> {
        read_record(&mut self.input)
    }
}

/// k-way merge of run readers.
struct Merger {
    readers: Vec<RunReader>,
    heap: BinaryHeap<Reverse<(Vec<u8>, usize)>>,
}

impl Merger {
    fn new(runs: &[SortRun]) -> io::Result<Self> {
        let mut readers = runs.iter().map(RunReader::open).collect::<io::Result<Vec<_>>>()?;
        let mut heap = BinaryHeap::with_capacity(readers.len());
        for (i, r) in readers.iter_mut().enumerate() {
            if let Some(rec) = r.next_record()? {
                heap.push(Reverse((rec, i)));
            }
        }
        Ok(Merger { readers, heap })
    }

    fn next_record(&mut self) -> io::Result<Option<Vec<u8>>> {
        let Some(Reverse((rec, i))) = self.heap.pop() else {
            return Ok(None);
        };
        if let Some(next) = self.readers[i].next_record()? {
            self.heap.push(Reverse((next, i)));
        }
        Ok(Some(rec))
    }
}

enum Source {
    Memory(std::vec::IntoIter<Vec<u8>>),
    Merge(Merger),
}

/// The sorted output. Owns the temporary directory.
pub struct SortedRecords {
    source: Source,
    stats: SortStats,
    _dir: Option<TempDir>,
}

impl SortedRecords {
    pub fn stats(&self) -> SortStats {
        self.stats
    }
}

impl Iterator for SortedRecords {
    type Item = io::Result<Vec<u8>>;

    fn next(&mut self) -> Option<Self::Item> {
        match &mut self.source {
            Source::Memory(it) => it.next().map(Ok),
            Source::Merge(m) => m.next_record().transpose(),
        }
    }
}

pub struct ExternalSorter {
    cfg: SortConfig,
}

impl ExternalSorter {
    pub fn new(cfg: SortConfig) -> io::Result<Self> {
        cfg.validate()?;
        Ok(ExternalSorter { cfg })
    }

    pub fn config(&self) -> &SortConfig {
        &self.cfg
    }

    /// Sorts all records of `input`. Input errors abort the sort and
    /// remove any run files written so far.
    pub fn sort<I, E>(&self, input: I) -> Result<SortedRecords, E>
    where
        I: IntoIterator<Item = Result<Vec<u8>, E>>,
        E: From<io::Error>,
    {
        let mut stats = SortStats::default();
        let mut dir: Option<TempDir> = None;
        let mut runs = Vec::new();
        let mut buf: Vec<Vec<u8>> = Vec::new();
        for rec in input {
            buf.push(rec?);
            stats.records += 1;
            stats.peak_resident_records = stats.peak_resident_records.max(buf.len());
            if buf.len() >= self.cfg.max_in_memory_records {
                let d = self.dir(&mut dir)?;
                runs.push(self.spill(d, runs.len(), &mut buf)?);
            }
        }
        if runs.is_empty() {
            buf.sort_unstable();
            return Ok(SortedRecords {
                source: Source::Memory(buf.into_iter()),
                stats,
                _dir: dir,
            });
        }
        if !buf.is_empty() {
            let d = self.dir(&mut dir)?;
            runs.push(self.spill(d, runs.len(), &mut buf)?);
        }
        drop(buf);
        stats.initial_runs = runs.len();
        let d = dir.as_ref().expect("runs live in the temp dir");
        let mut next_id = runs.len();
        while runs.len() > self.cfg.fan_in {
            stats.merge_passes += 1;
            let mut merged = Vec::new();
            for group in runs.chunks(self.cfg.fan_in) {
                if group.len() == 1 {
                    merged.push(SortRun {
                        path: group[0].path.clone(),
                        record_count: group[0].record_count,
                    });
                    continue;
                }
                let path = d.path().join(format!("run-{next_id}"));
                next_id += 1;
                let mut out = BufWriter::with_capacity(64 * 1024, File::create(&path)?);
                let mut m = Merger::new(group)?;
                stats.peak_resident_records = stats.peak_resident_records.max(group.len());
                let mut record_count = 0;
                while let Some(rec) = m.next_record()? {
                    write_record(&mut out, &rec)?;
                    record_count += 1;
                }
                out.flush()?;
                for r in group {
                    std::fs::remove_file(&r.path)?;
                }
                merged.push(SortRun { path, record_count });
            }
            runs = merged;
        }
        stats.merge_passes += 1;
        stats.peak_resident_records = stats.peak_resident_records.max(runs.len());
        let merger = Merger::new(&runs)?;
        Ok(SortedRecords {
            source: Source::Merge(merger),
            stats,
            _dir: dir,
        })
    }

    fn dir<'a>(&self, dir: &'a mut Option<TempDir>) -> io::Result<&'a TempDir> {
        if dir.is_none() {
            std::fs::create_dir_all(&self.cfg.temp_dir)?;
            *dir = Some(tempfile::Builder::new().prefix("trustyuri-sort-").tempdir_in(&self.cfg.temp_dir)?);
        }
        Ok(dir.as_ref().expect("just created"))
    }

    fn spill(&self, dir: &TempDir, id: usize, buf: &mut Vec<Vec<u8>>) -> io::Result<SortRun> {
        buf.sort_unstable();
        let path = dir.path().join(format!("run-{id}"));
        let mut out = BufWriter::with_capacity(64 * 1024, File::create(&path)?);
        for rec in buf.iter() {
            write_record(&mut out, rec)?;
        }
        out.flush()?;
        let record_count = buf.len() as u64;
        buf.clear();
        Ok(SortRun { path, record_count })
    }
}
