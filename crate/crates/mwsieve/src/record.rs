//! Line-delimited `key=value` records. Values holding whitespace are written
//! in double quotes.

use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record::default().with("kind", kind)
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl fmt::Display) {
        self.fields.push((key.to_string(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn fields(&self) -> &[(String, String)] {
        &self.fields
    }

    pub fn require(&self, key: &str) -> Result<&str, String> {
        self.get(key).ok_or_else(|| format!("missing field `{key}`"))
    }

    pub fn parse_field<T: std::str::FromStr>(&self, key: &str) -> Result<T, String> {
        let raw = self.require(key)?;
        raw.parse().map_err(|_| format!("bad value `{raw}` for `{key}`"))
    }

    pub fn parse(line: &str) -> Result<Record, String> {
        let mut fields = Vec::new();
        let mut rest = line.trim();
        while !rest.is_empty() {
            let eq = rest
                .find('=')
                .ok_or_else(|| format!("expected key=value near `{rest}`"))?;
            let key = &rest[..eq];
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(format!("bad key `{key}`"));
            }
            rest = &rest[eq + 1..];
            let value;
            if let Some(quoted) = rest.strip_prefix('"') {
                let end = quoted.find('"').ok_or("unterminated quote")?;
                value = &quoted[..end];
                rest = &quoted[end + 1..];
            } else {
                let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                value = &rest[..end];
                rest = &rest[end..];
            }
            fields.push((key.to_string(), value.to_string()));
            rest = rest.trim_start();
        }
        if fields.is_empty() {
            return Err("empty record".into());
        }
        Ok(Record { fields })
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if v.is_empty() || v.contains(char::is_whitespace) {
                write!(f, "{k}=\"{}\"", v.replace('"', "'"))?;
            } else {
                write!(f, "{k}={v}")?;
            }
        }
        Ok(())
    }
}

/// `a,b,c`, or `-` for an empty list.
pub fn join<T: fmt::Display>(items: &[T]) -> String {
    if items.is_empty() {
        return "-".into();
    }
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn split<T: std::str::FromStr>(raw: &str) -> Result<Vec<T>, String> {
    if raw == "-" {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|s| s.parse().map_err(|_| format!("bad list entry `{s}`")))
        .collect()
}
