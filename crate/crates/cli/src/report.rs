//! Versioned reports: JSON for machines, aligned tables for people, and a
//! parser taking the text back to the same value.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "sseq-engine.report/1";

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Ambiguous,
    Inconsistent,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Ambiguous => 1,
            Status::Inconsistent => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Ambiguous => "ambiguous",
            Status::Inconsistent => "inconsistent",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [Status::Ok, Status::Ambiguous, Status::Inconsistent].into_iter().find(|x| x.name() == s)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table { title: one_line(&title.into()), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.title);
        self.rows.push(row.iter().map(|c| one_line(c)).collect());
    }

    /// Cell of `column` in the first row whose leading cells equal `key`.
    pub fn lookup(&self, key: &[&str], column: &str) -> Option<&str> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.iter().find(|r| r.iter().zip(key).all(|(a, b)| a == b)).map(|r| r[j].as_str())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub config_hash: String,
    pub instance: String,
    pub status: Status,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
    pub log: Vec<String>,
}

fn one_line(s: &str) -> String {
    s.split('\n').map(str::trim_end).collect::<Vec<_>>().join(" / ")
}

impl Report {
    pub fn new(command: &str, config_hash: &str, instance: impl Into<String>) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            config_hash: config_hash.into(),
            instance: one_line(&instance.into()),
            status: Status::Ok,
            tables: Vec::new(),
            notes: Vec::new(),
            log: Vec::new(),
        }
    }

    pub fn note(&mut self, s: impl AsRef<str>) {
        self.notes.push(one_line(s.as_ref()));
    }

    pub fn log(&mut self, s: impl AsRef<str>) {
        self.log.push(one_line(s.as_ref()));
    }

    /// Never lowers a status.
    pub fn raise(&mut self, s: Status) {
        if s.exit_code() > self.status.exit_code() {
            self.status = s;
        }
    }

    pub fn table(&self, title: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.title == title)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let r: Report = serde_json::from_str(s).map_err(|e| e.to_string())?;
        if r.schema != SCHEMA {
            return Err(format!("schema {} is not {SCHEMA}", r.schema));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out += &format!("schema: {}\ncommand: {}\nconfig: {}\ninstance: {}\nstatus: {}\n", self.schema, self.command, self.config_hash, self.instance, self.status.name());
        for t in &self.tables {
            out += &format!("\n== {} ==\n", t.title);
            let width: Vec<usize> = (0..t.columns.len())
                .map(|j| t.rows.iter().map(|r| r[j].chars().count()).chain([t.columns[j].chars().count(), 1]).max().unwrap())
                .collect();
            let line = |cells: Vec<&str>| {
                let mut l = String::new();
                for (j, c) in cells.iter().enumerate() {
                    l += c;
                    if j + 1 < cells.len() {
                        l += &" ".repeat(width[j] - c.chars().count() + 2);
                    }
                }
                l.trim_end().to_string() + "\n"
            };
            out += &line(t.columns.iter().map(String::as_str).collect());
            let rules: Vec<String> = width.iter().map(|&w| "-".repeat(w)).collect();
            out += &line(rules.iter().map(String::as_str).collect());
            for r in &t.rows {
                out += &line(r.iter().map(String::as_str).collect());
            }
        }
        for (name, items) in [("notes", &self.notes), ("log", &self.log)] {
            out += &format!("\n{name}:\n");
            for i in items {
                out += &format!("- {i}\n");
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().peekable();
        let mut header = |key: &str| -> Result<String, String> {
            let l = lines.next().ok_or_else(|| format!("missing {key}"))?;
            l.strip_prefix(&format!("{key}: ")).map(str::to_string).ok_or_else(|| format!("expected `{key}: `, got {l:?}"))
        };
        let schema = header("schema")?;
        let command = header("command")?;
        let config_hash = header("config")?;
        let instance = header("instance")?;
        let status = header("status")?;
        let status = Status::parse(&status).ok_or_else(|| format!("unknown status {status}"))?;
        let mut report = Report { schema, command, config_hash, instance, status, tables: Vec::new(), notes: Vec::new(), log: Vec::new() };
        let mut list: Option<&str> = None;
        while let Some(l) = lines.next() {
            if l.is_empty() {
                continue;
            }
            if let Some(title) = l.strip_prefix("== ").and_then(|t| t.strip_suffix(" ==")) {
                let head = lines.next().ok_or("table without header")?;
                let rule = lines.next().ok_or("table without rule")?;
                let starts = column_starts(rule);
                let cut = |l: &str| -> Vec<String> {
                    let chars: Vec<char> = l.chars().collect();
                    (0..starts.len())
                        .map(|j| {
                            let a = starts[j].min(chars.len());
                            let b = starts.get(j + 1).copied().unwrap_or(chars.len()).min(chars.len());
                            chars[a..b].iter().collect::<String>().trim().to_string()
                        })
                        .collect()
                };
                let mut t = Table { title: title.to_string(), columns: cut(head), rows: Vec::new() };
                while let Some(row) = lines.peek().filter(|l| !l.is_empty()) {
                    t.rows.push(cut(row));
                    lines.next();
                }
                report.tables.push(t);
                list = None;
                continue;
            }
            match l {
                "notes:" | "log:" => list = Some(if l == "notes:" { "notes" } else { "log" }),
                _ => {
                    let item = l.strip_prefix("- ").ok_or_else(|| format!("unexpected line {l:?}"))?.to_string();
                    match list {
                        Some("notes") => report.notes.push(item),
                        Some(_) => report.log.push(item),
                        None => return Err(format!("list item outside a list: {l:?}")),
                    }
                }
            }
        }
        Ok(report)
    }
}

/// Column starts are read off the dashed rule under the header.
fn column_starts(rule: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let mut prev = ' ';
    for (i, c) in rule.chars().enumerate() {
        if c == '-' && prev == ' ' {
            out.push(i);
        }
        prev = c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_with_wide_cells() {
        let mut r = Report::new("solve", "abc", "BPGL_3");
        let mut t = Table::new("H^{p,q}(BPGL_3)", &["p", "q", "group", "rule"]);
        t.push(vec!["4".into(), "2".into(), "Z ⊕ K/3".into(), "extension".into()]);
        t.push(vec!["5".into(), "2".into(), "".into(), "".into()]);
        r.tables.push(t);
        r.tables.push(Table::new("empty", &["a", "b"]));
        r.note("two\nlines");
        r.log("[seed] H^{0,0} = Z");
        r.raise(Status::Ambiguous);
        r.raise(Status::Ok);
        assert_eq!(r.status, Status::Ambiguous);
        assert_eq!(Report::from_text(&r.to_text()).unwrap(), r);
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }
}
