use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rtg::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot open {}: {source}", path.display())]
    Open { path: PathBuf, source: io::Error },
    #[error("write failed: {0}")]
    Write(#[from] io::Error),
    /// The run completed but its outcome is a failure.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 2 for bad flags, inputs or preconditions; 1 for runtime failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e {
                rtg::Error::Contract(_) | rtg::Error::Domain(_) | rtg::Error::Parse { .. } => 2,
                _ => 1,
            },
            CliError::Usage(_) | CliError::Open { .. } => 2,
            CliError::Write(_) | CliError::Failed(_) => 1,
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Open {
        path: path.to_path_buf(),
        source,
    })
}

/// Buffered output to a file or stdout.
pub struct Sink(Box<dyn Write>);

impl Sink {
    pub fn open(path: Option<&Path>) -> CliResult<Self> {
        Ok(Sink(match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
                CliError::Open {
                    path: p.to_path_buf(),
                    source,
                }
            })?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        }))
    }

    pub fn line(&mut self, s: impl AsRef<str>) -> CliResult {
        self.0.write_all(s.as_ref().as_bytes())?;
        self.0.write_all(b"\n")?;
        Ok(())
    }

    pub fn raw(&mut self, s: &str) -> CliResult {
        self.0.write_all(s.as_bytes())?;
        Ok(())
    }

    /// `# <config as compact JSON>`.
    pub fn config_comment(&mut self, config: &Value) -> CliResult {
        self.line(format!("# {config}"))
    }

    pub fn json(&mut self, doc: &Value) -> CliResult {
        let text = serde_json::to_string_pretty(doc).expect("json values serialize");
        self.line(text)
    }

    pub fn finish(mut self) -> CliResult {
        self.0.flush()?;
        Ok(())
    }
}

/// Empty for a missing value, so unreached milestones leave a blank CSV field.
pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}
