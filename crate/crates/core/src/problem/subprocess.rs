//! External executable as a blackbox.
//!
//! Wire protocol: the point is written to the child's stdin as one line of
//! space-separated decimals; the child prints one line `f c1 ... cm` on stdout
//! and exits with status 0. Anything else counts as a failed evaluation.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::Mutex;
use std::time::Duration;

use wait_timeout::ChildExt;

use super::{Blackbox, BlackboxOutput, EvalFailure, ProblemError};

pub struct SubprocessBlackbox {
    executable: PathBuf,
    timeout: Duration,
    expected_constraints: Option<usize>,
    // One child at a time per adapter.
    lock: Mutex<()>,
}

impl SubprocessBlackbox {
    pub fn new(executable: impl AsRef<Path>, timeout: Duration) -> Result<Self, ProblemError> {
        let executable = executable.as_ref().to_path_buf();
        if !executable.is_file() {
            return Err(ProblemError::MissingExecutable(
                executable.display().to_string(),
            ));
        }
        Ok(Self {
            executable,
            timeout,
            expected_constraints: None,
            lock: Mutex::new(()),
        })
    }

    /// Require exactly `m` constraint values per output line.
    pub fn expect_constraints(mut self, m: usize) -> Self {
        self.expected_constraints = Some(m);
        self
    }

    pub fn executable(&self) -> &Path {
        &self.executable
    }
}

/// Formats a point as one protocol line, full round-trip precision.
pub(crate) fn format_input_line(x: &[f64]) -> String {
    let mut line = x
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    line.push('\n');
    line
}

pub(crate) fn parse_output_line(
    stdout: &str,
    expected_constraints: Option<usize>,
) -> Result<BlackboxOutput, EvalFailure> {
    let line = stdout
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| EvalFailure::BadOutput("empty output".into()))?;
    let values = line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| EvalFailure::BadOutput(format!("not a number: `{tok}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let (&objective, constraints) = values
        .split_first()
        .ok_or_else(|| EvalFailure::BadOutput("empty output".into()))?;
    if let Some(m) = expected_constraints {
        if constraints.len() != m {
            return Err(EvalFailure::BadOutput(format!(
                "expected {m} constraint values, got {}",
                constraints.len()
            )));
        }
    }
    Ok(BlackboxOutput {
        objective,
        constraints: constraints.to_vec(),
    })
}

impl Blackbox for SubprocessBlackbox {
    fn evaluate(&self, x: &[f64]) -> Result<BlackboxOutput, EvalFailure> {
        let _guard = self.lock.lock().unwrap_or_else(|e| e.into_inner());

        let mut cmd = Command::new(&self.executable);
        cmd.stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null());
        #[cfg(unix)]
        {
            use std::os::unix::process::CommandExt;
            cmd.process_group(0);
        }
        let mut child = cmd
            .spawn()
            .map_err(|e| EvalFailure::Crashed(e.to_string()))?;

        let mut stdout = child.stdout.take().expect("stdout is piped");
        let reader = std::thread::spawn(move || {
            let mut buf = String::new();
            stdout.read_to_string(&mut buf).map(|_| buf)
        });

        if let Some(mut stdin) = child.stdin.take() {
            // A child that exits without reading its input closes the pipe;
            // its exit status decides the outcome.
            let _ = stdin.write_all(format_input_line(x).as_bytes());
        }

        let status = match child
            .wait_timeout(self.timeout)
            .map_err(|e| EvalFailure::Crashed(e.to_string()))?
        {
            Some(status) => status,
            None => {
                kill_tree(&mut child);
                // The reader may stay blocked on descendants that inherited the
                // pipe; it is left detached.
                return Err(EvalFailure::Timeout);
            }
        };
        if !status.success() {
            return Err(EvalFailure::Crashed(format!("exit status {status}")));
        }
        let out = reader
            .join()
            .map_err(|_| EvalFailure::Crashed("stdout reader panicked".into()))?
            .map_err(|e| EvalFailure::BadOutput(e.to_string()))?;
        parse_output_line(&out, self.expected_constraints)
    }
}

fn kill_tree(child: &mut std::process::Child) {
    #[cfg(unix)]
    {
        let pgid = child.id() as libc::pid_t;
        // SAFETY: signalling a process group we created; no memory is touched.
        unsafe {
            libc::kill(-pgid, libc::SIGKILL);
        }
    }
    let _ = child.kill();
    let _ = child.wait();
}
