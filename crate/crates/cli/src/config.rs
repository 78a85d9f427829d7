//! Flat `key=value` configuration files. Keys are flag names without the
//! leading dashes; flags given on the command line win.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<ConfigFile, CliError> {
        let Some(path) = path else { return Ok(ConfigFile::default()) };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        ConfigFile::parse(&text)
    }

    pub fn parse(text: &str) -> Result<ConfigFile, CliError> {
        let mut values = BTreeMap::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", ln + 1)))?;
            values.insert(k.trim().replace('_', "-"), v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    /// The flag if given, else the file's value, else `None`.
    pub fn pick<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("cannot parse {key}={v}"))),
        }
    }

    pub fn pick_or<T: FromStr>(&self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError> {
        Ok(self.pick(key, flag)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str, flag: Option<T>) -> Result<T, CliError> {
        self.pick(key, flag)?.ok_or_else(|| CliError::Config(format!("missing required setting {key}")))
    }

    pub fn flag(&self, key: &str, flag: bool) -> Result<bool, CliError> {
        Ok(flag || self.pick::<bool>(key, None)?.unwrap_or(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let c = ConfigFile::parse("# run\nknot = 8_20\nevents=100\nburn_in=5\n").unwrap();
        assert_eq!(c.require::<String>("knot", None).unwrap(), "8_20");
        assert_eq!(c.require::<u64>("events", Some(7)).unwrap(), 7);
        assert_eq!(c.pick::<u64>("burn-in", None).unwrap(), Some(5));
        assert_eq!(c.pick_or::<u64>("absent", None, 3).unwrap(), 3);
        assert!(c.require::<u64>("absent", None).is_err());
        assert!(ConfigFile::parse("novalue").is_err());
    }
}
