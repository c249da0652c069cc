use std::fmt;

use crate::forms::ExteriorForm;
use crate::symbolic::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

/// Outcome of an identity check: `PASS` iff the canonical residual is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub check: String,
    pub status: Status,
    /// Canonical residual, one line per term.
    pub residual: Vec<String>,
    /// Sizes of the objects involved, for display.
    pub term_counts: Vec<(String, usize)>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn from_lines(check: impl Into<String>, residual: Vec<String>) -> Self {
        let status = if residual.is_empty() { Status::Pass } else { Status::Fail };
        VerificationReport { check: check.into(), status, residual, term_counts: Vec::new(), notes: Vec::new() }
    }

    pub fn from_form(check: impl Into<String>, residual: &ExteriorForm) -> Self {
        let lines = if residual.is_zero() {
            Vec::new()
        } else {
            residual.to_string().lines().map(str::to_string).collect()
        };
        Self::from_lines(check, lines)
    }

    /// Residual given as labelled polynomials, one line per monomial; zero
    /// entries are dropped.
    pub fn from_polynomials<'a>(
        check: impl Into<String>,
        residual: impl IntoIterator<Item = (String, &'a Polynomial)>,
    ) -> Self {
        let mut lines = Vec::new();
        for (label, p) in residual {
            for (m, c) in p.terms() {
                lines.push(format!("{label} : {}", Polynomial::term(c.clone(), m.clone())));
            }
        }
        Self::from_lines(check, lines)
    }

    pub fn error(check: impl Into<String>, message: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            status: Status::Error,
            residual: vec![message.into()],
            term_counts: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_count(mut self, label: impl Into<String>, count: usize) -> Self {
        self.term_counts.push((label.into(), count));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Status line followed by at most `max_lines` residual lines.
    pub fn render(&self, max_lines: usize) -> String {
        let mut out = format!("{} {}\n", self.status, self.check);
        for line in self.residual.iter().take(max_lines) {
            out.push_str(line);
            out.push('\n');
        }
        if self.residual.len() > max_lines {
            out.push_str(&format!("... {} more residual terms\n", self.residual.len() - max_lines));
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(usize::MAX))
    }
}
