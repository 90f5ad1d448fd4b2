//! File-based working repository: content-addressed artifacts under
//! `versions/`, `matches/` and `diffs/`, plus a tab-separated index.
//!
//! The index is append-only; a name given several entries resolves to the
//! latest. Writers hold an exclusive lock on `index.lock`, readers a shared one.

use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

const INDEX: &str = "index.tsv";
const LOCK: &str = "index.lock";

#[derive(Debug, thiserror::Error)]
pub enum RepoError {
    #[error("{0} is not a repository (run `repo init`)")]
    NotInitialized(PathBuf),
    #[error("name {0:?} already stored with different content (use --force-new-entry)")]
    DuplicateName(String),
    #[error("no entry named {0:?}")]
    NotFound(String),
    #[error("artifact {name:?} is corrupt: expected sha256 {expected}, found {found}")]
    Corrupt { name: String, expected: String, found: String },
    #[error("malformed index line {line}: {message}")]
    BadIndex { line: usize, message: String },
    #[error("invalid name {0:?}: names must be non-empty and free of tabs and line breaks")]
    BadName(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArtifactKind {
    Version,
    Match,
    Diff,
}

impl ArtifactKind {
    pub fn name(self) -> &'static str {
        match self {
            ArtifactKind::Version => "version",
            ArtifactKind::Match => "match",
            ArtifactKind::Diff => "diff",
        }
    }

    fn dir(self) -> &'static str {
        match self {
            ArtifactKind::Version => "versions",
            ArtifactKind::Match => "matches",
            ArtifactKind::Diff => "diffs",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        [ArtifactKind::Version, ArtifactKind::Match, ArtifactKind::Diff].into_iter().find(|k| k.name() == s)
    }

    /// Guesses the kind from content: diff files carry a header, match
    /// files are two-column.
    pub fn sniff(content: &[u8]) -> Self {
        let text = String::from_utf8_lossy(content);
        if text.starts_with("#evomap-diff") {
            return ArtifactKind::Diff;
        }
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).peekable();
        let is_native = lines.peek().is_some_and(|l| l.starts_with('['));
        if !is_native && lines.all(|l| l.split('\t').count() == 2) {
            ArtifactKind::Match
        } else {
            ArtifactKind::Version
        }
    }
}

impl fmt::Display for ArtifactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    pub kind: ArtifactKind,
    pub hash: String,
    pub size: u64,
}

impl Entry {
    fn rel_path(&self) -> PathBuf {
        Path::new(self.kind.dir()).join(&self.hash)
    }
}

pub struct Repository {
    root: PathBuf,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Repository {
    /// Creates the directory layout; idempotent.
    pub fn init(root: &Path) -> Result<Self, RepoError> {
        for kind in [ArtifactKind::Version, ArtifactKind::Match, ArtifactKind::Diff] {
            fs::create_dir_all(root.join(kind.dir()))?;
        }
        let index = root.join(INDEX);
        if !index.exists() {
            File::create(index)?;
        }
        Ok(Self { root: root.to_path_buf() })
    }

    pub fn open(root: &Path) -> Result<Self, RepoError> {
        if !root.join(INDEX).is_file() {
            return Err(RepoError::NotInitialized(root.to_path_buf()));
        }
        Ok(Self { root: root.to_path_buf() })
    }

    fn lock_file(&self) -> Result<File, RepoError> {
        Ok(OpenOptions::new().create(true).truncate(false).write(true).open(self.root.join(LOCK))?)
    }

    fn read_index(&self) -> Result<Vec<Entry>, RepoError> {
        let text = fs::read_to_string(self.root.join(INDEX))?;
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let bad = |message: &str| RepoError::BadIndex { line: i + 1, message: message.to_string() };
            let [name, kind, hash, size] = line.split('\t').collect::<Vec<_>>()[..] else {
                return Err(bad("expected 4 fields"));
            };
            out.push(Entry {
                name: name.to_string(),
                kind: ArtifactKind::from_name(kind).ok_or_else(|| bad("unknown kind"))?,
                hash: hash.to_string(),
                size: size.parse().map_err(|_| bad("bad size"))?,
            });
        }
        Ok(out)
    }

    fn latest<'a>(entries: &'a [Entry], name: &str) -> Option<&'a Entry> {
        entries.iter().rev().find(|e| e.name == name)
    }

    /// Stores `content` under `name`. Re-storing identical content is a
    /// no-op; different content needs `force_new_entry`.
    pub fn put(&self, name: &str, kind: ArtifactKind, content: &[u8], force_new_entry: bool) -> Result<Entry, RepoError> {
        if name.is_empty() || name.contains(['\t', '\n', '\r']) {
            return Err(RepoError::BadName(name.to_string()));
        }
        let lock = self.lock_file()?;
        lock.lock()?;
        let entries = self.read_index()?;
        let entry = Entry { name: name.to_string(), kind, hash: sha256_hex(content), size: content.len() as u64 };
        if let Some(prev) = Self::latest(&entries, name) {
            if prev.hash == entry.hash && prev.kind == kind {
                return Ok(prev.clone());
            }
            if !force_new_entry {
                return Err(RepoError::DuplicateName(name.to_string()));
            }
        }
        let path = self.root.join(entry.rel_path());
        if !path.exists() {
            // Write then rename so a crash never leaves a partial artifact.
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, content)?;
            fs::rename(&tmp, &path)?;
        }
        let mut index = OpenOptions::new().append(true).open(self.root.join(INDEX))?;
        writeln!(index, "{}\t{}\t{}\t{}", entry.name, entry.kind, entry.hash, entry.size)?;
        index.sync_all()?;
        Ok(entry)
    }

    /// Content of the latest entry named `name`, verified against its hash.
    pub fn get(&self, name: &str) -> Result<(Entry, Vec<u8>), RepoError> {
        let lock = self.lock_file()?;
        lock.lock_shared()?;
        let entries = self.read_index()?;
        let entry = Self::latest(&entries, name).ok_or_else(|| RepoError::NotFound(name.to_string()))?.clone();
        let content = fs::read(self.root.join(entry.rel_path()))?;
        let found = sha256_hex(&content);
        if found != entry.hash {
            return Err(RepoError::Corrupt { name: name.to_string(), expected: entry.hash, found });
        }
        Ok((entry, content))
    }

    /// Every index entry in insertion order.
    pub fn list(&self) -> Result<Vec<Entry>, RepoError> {
        let lock = self.lock_file()?;
        lock.lock_shared()?;
        self.read_index()
    }
}
