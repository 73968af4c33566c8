//! JSON report. Field names are stable; `elapsed_ms` and `total_ms` are the
//! only fields that vary between identical runs.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::charspec::CharEcho;

pub const SCHEMA: &str = "symsq-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
    InsufficientPrecision,
    Skipped,
    Info,
}

/// Where the expected value of an entry comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// A stored literal value with its locator.
    Fixture,
    /// A second, independent computation.
    Oracle,
    /// No expected value; the entry records a computed quantity.
    Computed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub status: Status,
    pub origin: Origin,
    pub locator: Option<String>,
    pub expected: Option<String>,
    pub computed: Option<String>,
    pub tolerance: Option<String>,
    pub radius: Option<String>,
    pub note: Option<String>,
}

impl Entry {
    pub fn info(name: &str, computed: impl ToString) -> Entry {
        Entry {
            name: name.to_string(),
            status: Status::Info,
            origin: Origin::Computed,
            locator: None,
            expected: None,
            computed: Some(computed.to_string()),
            tolerance: None,
            radius: None,
            note: None,
        }
    }

    pub fn compare(name: &str, origin: Origin, expected: impl ToString, computed: impl ToString, ok: bool) -> Entry {
        Entry {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            origin,
            locator: None,
            expected: Some(expected.to_string()),
            computed: Some(computed.to_string()),
            tolerance: None,
            radius: None,
            note: None,
        }
    }

    /// A comparison that cannot be decided at the working precision.
    pub fn insufficient(name: &str, origin: Origin, expected: impl ToString, why: impl ToString) -> Entry {
        Entry {
            name: name.to_string(),
            status: Status::InsufficientPrecision,
            origin,
            locator: None,
            expected: Some(expected.to_string()),
            computed: None,
            tolerance: None,
            radius: None,
            note: Some(why.to_string()),
        }
    }

    pub fn skipped(name: &str, why: impl ToString) -> Entry {
        Entry {
            name: name.to_string(),
            status: Status::Skipped,
            origin: Origin::Computed,
            locator: None,
            expected: None,
            computed: None,
            tolerance: None,
            radius: None,
            note: Some(why.to_string()),
        }
    }

    pub fn failed(name: &str, err: impl ToString) -> Entry {
        Entry {
            name: name.to_string(),
            status: Status::Error,
            origin: Origin::Computed,
            locator: None,
            expected: None,
            computed: None,
            tolerance: None,
            radius: None,
            note: Some(err.to_string()),
        }
    }

    pub fn at(mut self, locator: &str) -> Entry {
        self.locator = Some(locator.to_string());
        self
    }

    pub fn tol(mut self, t: impl ToString) -> Entry {
        self.tolerance = Some(t.to_string());
        self
    }

    pub fn rad(mut self, r: impl ToString) -> Entry {
        self.radius = Some(r.to_string());
        self
    }

    pub fn note(mut self, n: impl ToString) -> Entry {
        self.note = Some(n.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub status: Status,
    pub elapsed_ms: u64,
    pub error: Option<String>,
    pub values: BTreeMap<String, String>,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn new(name: &str) -> Section {
        Section {
            name: name.to_string(),
            status: Status::Info,
            elapsed_ms: 0,
            error: None,
            values: BTreeMap::new(),
            entries: Vec::new(),
        }
    }

    pub fn value(&mut self, k: &str, v: impl ToString) {
        self.values.insert(k.to_string(), v.to_string());
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn entry(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    fn settle(&mut self) {
        let has = |s: Status| self.entries.iter().any(|e| e.status == s);
        self.status = if self.error.is_some() || has(Status::Error) {
            Status::Error
        } else if has(Status::Fail) {
            Status::Fail
        } else if has(Status::InsufficientPrecision) {
            Status::InsufficientPrecision
        } else if has(Status::Pass) {
            Status::Pass
        } else if !self.entries.is_empty() && self.entries.iter().all(|e| e.status == Status::Skipped) {
            Status::Skipped
        } else {
            Status::Info
        };
    }
}

/// Runs `body` as a section; an `Err` is recorded on the section, which is kept.
pub fn run_section<F>(name: &str, body: F) -> Section
where
    F: FnOnce(&mut Section) -> Result<(), String>,
{
    let start = Instant::now();
    let mut sec = Section::new(name);
    if let Err(e) = body(&mut sec) {
        sec.error = Some(e);
    }
    sec.elapsed_ms = start.elapsed().as_millis() as u64;
    sec.settle();
    sec
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub insufficient_precision: usize,
    pub skipped: usize,
    pub info: usize,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub character: Option<CharEcho>,
    pub sections: Vec<Section>,
    pub summary: Summary,
    pub total_ms: u64,
}

impl Report {
    pub fn new(command: &str, config: BTreeMap<String, String>, character: Option<CharEcho>) -> Report {
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            character,
            sections: Vec::new(),
            summary: Summary::default(),
            total_ms: 0,
        }
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Counts entries; a section error counts once as an error.
    pub fn finish(&mut self, total_ms: u64) {
        let mut s = Summary::default();
        for sec in &self.sections {
            if sec.error.is_some() {
                s.error += 1;
            }
            for e in &sec.entries {
                match e.status {
                    Status::Pass => s.pass += 1,
                    Status::Fail => s.fail += 1,
                    Status::Error => s.error += 1,
                    Status::InsufficientPrecision => s.insufficient_precision += 1,
                    Status::Skipped => s.skipped += 1,
                    Status::Info => s.info += 1,
                }
            }
        }
        s.exit_code = if s.fail > 0 {
            crate::EXIT_MISMATCH
        } else if s.error > 0 || s.insufficient_precision > 0 {
            crate::EXIT_FAILURE
        } else {
            crate::EXIT_OK
        };
        self.summary = s;
        self.total_ms = total_ms;
    }

    /// Copy with every timing field zeroed.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        r.total_ms = 0;
        for s in &mut r.sections {
            s.elapsed_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_status_and_exit_codes() {
        let s = run_section("a", |s| {
            s.push(Entry::compare("x", Origin::Fixture, 1, 1, true));
            s.push(Entry::info("y", 2));
            Ok(())
        });
        assert_eq!(s.status, Status::Pass);
        let t = run_section("b", |s| {
            s.push(Entry::insufficient("x", Origin::Fixture, 1, "K too small"));
            Ok(())
        });
        assert_eq!(t.status, Status::InsufficientPrecision);
        let u = run_section("c", |_| Err(String::from("boom")));
        assert_eq!(u.status, Status::Error);

        let mut r = Report::new("t", BTreeMap::new(), None);
        r.sections.push(s.clone());
        r.finish(0);
        assert_eq!(r.summary.exit_code, crate::EXIT_OK);
        r.sections.push(t);
        r.finish(0);
        assert_eq!(r.summary.exit_code, crate::EXIT_FAILURE);
        r.sections.push(run_section("d", |s| {
            s.push(Entry::compare("x", Origin::Fixture, 1, 2, false));
            Ok(())
        }));
        r.finish(0);
        assert_eq!(r.summary.exit_code, crate::EXIT_MISMATCH);
    }

    #[test]
    fn fields_are_always_present() {
        let e = Entry::info("x", 1);
        let v: serde_json::Value = serde_json::to_value(&e).unwrap();
        for k in ["name", "status", "origin", "locator", "expected", "computed", "tolerance", "radius", "note"] {
            assert!(v.get(k).is_some(), "{}", k);
        }
        assert_eq!(v["status"], "info");
    }
}
