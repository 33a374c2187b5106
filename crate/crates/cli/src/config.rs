//! Config loading, dotted-path overrides and output locations.

use std::fs;
use std::path::{Path, PathBuf};

use plurispec_core::{Error, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const OUT_DIR_ENV: &str = "PLURISPEC_OUT_DIR";

/// Reads a JSON document and applies `key.path=value` overrides in order.
pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Value> {
    let mut doc = match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
        }
        None => Value::Object(Default::default()),
    };
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    Ok(doc)
}

/// `a.b.0.c=value`. The value is parsed as JSON when possible and taken as a
/// string otherwise.
pub fn apply_override(doc: &mut Value, text: &str) -> Result<()> {
    let (key, raw) = text
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{text}` is not of the form key=value")))?;
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(Error::Config(format!(
            "override key `{key}` has an empty segment"
        )));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cur = doc;
    let segments: Vec<&str> = key.split('.').collect();
    for (i, seg) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        cur = match cur {
            Value::Array(items) => {
                let idx: usize = seg.parse().map_err(|_| {
                    Error::Config(format!("override `{key}`: `{seg}` indexes an array"))
                })?;
                let len = items.len();
                items.get_mut(idx).ok_or_else(|| {
                    Error::Config(format!(
                        "override `{key}`: index {idx} out of range ({len})"
                    ))
                })?
            }
            Value::Object(map) => map.entry(seg.to_string()).or_insert(if last {
                Value::Null
            } else {
                Value::Object(Default::default())
            }),
            _ => {
                return Err(Error::Config(format!(
                    "override `{key}`: `{seg}` is below a scalar"
                )))
            }
        };
    }
    *cur = value;
    Ok(())
}

pub fn parse<T: DeserializeOwned>(doc: &Value) -> Result<T> {
    T::deserialize(doc).map_err(|e| Error::Config(format!("invalid config: {e}")))
}

/// Where a command writes its files.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Directory; defaults to `$PLURISPEC_OUT_DIR`, then the working directory.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// File stem; defaults to the command name.
    #[serde(default)]
    pub stem: Option<String>,
}

impl OutputSpec {
    pub fn path(&self, command: &str, extension: &str) -> PathBuf {
        let dir = self
            .dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        let stem = self.stem.clone().unwrap_or_else(|| command.to_string());
        dir.join(format!("{stem}.{extension}"))
    }
}

/// A file written under `<path>.partial` and renamed on [`Artifact::commit`].
/// Dropped without committing, the partial file stays for inspection.
pub struct Artifact {
    final_path: PathBuf,
    partial: PathBuf,
    file: Option<fs::File>,
}

impl Artifact {
    pub fn create(path: PathBuf) -> Result<Self> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        let mut partial = path.clone().into_os_string();
        partial.push(".partial");
        let partial = PathBuf::from(partial);
        let file = fs::File::create(&partial)?;
        Ok(Artifact {
            final_path: path,
            partial,
            file: Some(file),
        })
    }

    pub fn file(&mut self) -> &mut fs::File {
        self.file.as_mut().expect("artifact already committed")
    }

    pub fn commit(mut self) -> Result<PathBuf> {
        if let Some(f) = self.file.take() {
            f.sync_all()?;
        }
        fs::rename(&self.partial, &self.final_path)?;
        Ok(self.final_path.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn overrides() {
        let mut v = json!({"space": {"lambda": 1.0}, "lambdas": [1, 2]});
        apply_override(&mut v, "space.lambda=2.5").unwrap();
        apply_override(&mut v, "lambdas.1=7").unwrap();
        apply_override(&mut v, "f=re(z)").unwrap();
        apply_override(&mut v, "output.dir=\"out\"").unwrap();
        assert_eq!(
            v,
            json!({"space": {"lambda": 2.5}, "lambdas": [1, 7], "f": "re(z)", "output": {"dir": "out"}})
        );
        assert!(apply_override(&mut v, "novalue").is_err());
        assert!(apply_override(&mut v, "lambdas.9=1").is_err());
        assert!(apply_override(&mut v, "f.x=1").is_err());
        assert!(apply_override(&mut v, "a..b=1").is_err());
    }

    #[test]
    fn artifact_commit_and_partial() {
        use std::io::Write;
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("x.csv");
        let mut a = Artifact::create(p.clone()).unwrap();
        writeln!(a.file(), "a,b").unwrap();
        assert!(dir.path().join("sub/x.csv.partial").exists());
        a.commit().unwrap();
        assert!(p.exists() && !dir.path().join("sub/x.csv.partial").exists());
        let q = dir.path().join("y.csv");
        drop(Artifact::create(q.clone()).unwrap());
        assert!(!q.exists() && dir.path().join("y.csv.partial").exists());
    }
}
