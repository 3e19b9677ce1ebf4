use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, PoisonError};

use chrono::{DateTime, Duration, Utc};
use serde::{Deserialize, Serialize};

use super::{CodingSchema, Sample, SampleItem};
use crate::corpus::SentenceId;
use crate::{assets, io, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Label {
    pub level1: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level2: Option<String>,
}

/// One annotator's labels over one sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingSession {
    pub session_id: String,
    pub annotator_id: String,
    pub schema: String,
    pub sample_id: String,
    pub labels: BTreeMap<SentenceId, Label>,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

impl CodingSession {
    pub fn new(session_id: &str, annotator_id: &str, schema: &str, sample_id: &str, now: DateTime<Utc>) -> Self {
        Self {
            session_id: session_id.to_string(),
            annotator_id: annotator_id.to_string(),
            schema: schema.to_string(),
            sample_id: sample_id.to_string(),
            labels: BTreeMap::new(),
            created_at: now,
            updated_at: now,
        }
    }

    /// Upserts a label. On error the session is left untouched.
    pub fn record_label(
        &mut self,
        sample: &Sample,
        schema: &CodingSchema,
        sentence: &SentenceId,
        level1: &str,
        level2: Option<&str>,
        now: DateTime<Utc>,
    ) -> Result<()> {
        if schema.name != self.schema {
            return Err(Error::SchemaMismatch(self.schema.clone(), schema.name.clone()));
        }
        if sample.sample_id != self.sample_id {
            return Err(Error::SampleMismatch(self.sample_id.clone(), sample.sample_id.clone()));
        }
        if !sample.contains(sentence) {
            return Err(Error::unknown("sentence", sentence.to_string()));
        }
        schema.check(level1, level2)?;
        self.labels.insert(
            sentence.clone(),
            Label {
                level1: level1.to_string(),
                level2: level2.map(str::to_string),
            },
        );
        self.updated_at = if now > self.updated_at {
            now
        } else {
            self.updated_at + Duration::microseconds(1)
        };
        Ok(())
    }

    /// (labeled, total) over the sample.
    pub fn progress(&self, sample: &Sample) -> (usize, usize) {
        let labeled = sample.items().filter(|i| self.labels.contains_key(&i.sentence_id)).count();
        (labeled, sample.len())
    }

    /// First unlabeled item in sample order.
    pub fn next_unlabeled<'s>(&self, sample: &'s Sample) -> Option<&'s SampleItem> {
        sample.items().find(|i| !self.labels.contains_key(&i.sentence_id))
    }
}

/// Ids double as file names.
pub fn validate_id(kind: &'static str, id: &str) -> Result<()> {
    let ok = !id.is_empty()
        && !id.starts_with('.')
        && id.len() <= 128
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "{kind} id `{id}` must be 1-128 characters of [A-Za-z0-9._-] not starting with `.`"
        )))
    }
}

/// Samples, sessions and schema overrides under one directory:
/// `samples/<id>.json`, `sessions/<id>.json`, `schemas/<name>.json`.
///
/// Label writes to a session are serialized and each write is atomic.
#[derive(Debug)]
pub struct SessionStore {
    root: PathBuf,
    schemas: PathBuf,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

impl SessionStore {
    pub fn open(root: &Path) -> Result<Self> {
        for sub in ["samples", "sessions"] {
            let dir = root.join(sub);
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        }
        Ok(Self {
            root: root.to_path_buf(),
            schemas: root.join("schemas"),
            locks: Mutex::new(HashMap::new()),
        })
    }

    /// Looks for schema overrides in `dir` instead of `<root>/schemas`.
    pub fn with_schema_dir(mut self, dir: &Path) -> Self {
        self.schemas = dir.to_path_buf();
        self
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn sample_path(&self, id: &str) -> PathBuf {
        self.root.join("samples").join(format!("{id}.json"))
    }

    fn session_path(&self, id: &str) -> PathBuf {
        self.root.join("sessions").join(format!("{id}.json"))
    }

    fn lock_for(&self, id: &str) -> Arc<Mutex<()>> {
        let mut map = self.locks.lock().unwrap_or_else(PoisonError::into_inner);
        map.entry(id.to_string()).or_default().clone()
    }

    pub fn save_sample(&self, sample: &Sample) -> Result<PathBuf> {
        validate_id("sample", &sample.sample_id)?;
        let path = self.sample_path(&sample.sample_id);
        io::write_json(&path, sample)?;
        Ok(path)
    }

    pub fn load_sample(&self, id: &str) -> Result<Sample> {
        validate_id("sample", id)?;
        let path = self.sample_path(id);
        if !path.exists() {
            return Err(Error::unknown("sample", id));
        }
        io::read_json(&path)
    }

    /// A schema from the override directory if present, else a shipped one.
    pub fn schema(&self, name: &str) -> Result<CodingSchema> {
        validate_id("schema", name)?;
        let path = self.schemas.join(format!("{name}.json"));
        if path.exists() {
            return CodingSchema::load(&path);
        }
        assets::schema(name).ok_or_else(|| Error::unknown("schema", name))
    }

    pub fn create_session(
        &self,
        sample_id: &str,
        annotator_id: &str,
        schema: &str,
        session_id: Option<&str>,
    ) -> Result<CodingSession> {
        validate_id("annotator", annotator_id)?;
        self.load_sample(sample_id)?;
        self.schema(schema)?;
        let id = session_id.map_or_else(|| format!("{sample_id}-{annotator_id}"), str::to_string);
        validate_id("session", &id)?;
        let lock = self.lock_for(&id);
        let _guard = lock.lock().unwrap_or_else(PoisonError::into_inner);
        let path = self.session_path(&id);
        if path.exists() {
            return Err(Error::Exists { kind: "session", id });
        }
        let session = CodingSession::new(&id, annotator_id, schema, sample_id, Utc::now());
        io::write_json(&path, &session)?;
        Ok(session)
    }

    pub fn load(&self, id: &str) -> Result<CodingSession> {
        validate_id("session", id)?;
        let path = self.session_path(id);
        if !path.exists() {
            return Err(Error::unknown("session", id));
        }
        io::read_json(&path)
    }

    pub fn save(&self, session: &CodingSession) -> Result<()> {
        validate_id("session", &session.session_id)?;
        let lock = self.lock_for(&session.session_id);
        let _guard = lock.lock().unwrap_or_else(PoisonError::into_inner);
        io::write_json(&self.session_path(&session.session_id), session)
    }

    /// All sessions, sorted by id.
    pub fn list(&self) -> Result<Vec<CodingSession>> {
        let dir = self.root.join("sessions");
        let mut ids = Vec::new();
        for entry in fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))? {
            let path = entry.map_err(|e| Error::io(&dir, e))?.path();
            if path.extension().is_some_and(|x| x == "json") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    ids.push(stem.to_string());
                }
            }
        }
        ids.sort();
        ids.iter().map(|id| self.load(id)).collect()
    }

    /// Loads, labels and atomically rewrites a session under its lock.
    pub fn label(&self, session_id: &str, sentence: &SentenceId, level1: &str, level2: Option<&str>) -> Result<CodingSession> {
        validate_id("session", session_id)?;
        let lock = self.lock_for(session_id);
        let _guard = lock.lock().unwrap_or_else(PoisonError::into_inner);
        let mut session = self.load(session_id)?;
        let sample = self.load_sample(&session.sample_id)?;
        let schema = self.schema(&session.schema)?;
        session.record_label(&sample, &schema, sentence, level1, level2, Utc::now())?;
        io::write_json(&self.session_path(session_id), &session)?;
        Ok(session)
    }
}
