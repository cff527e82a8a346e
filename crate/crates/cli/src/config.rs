//! Layered option lookup: flag, then the `[command]` section of the config
//! file, then its top level, then the built-in default.

use std::path::Path;
use std::str::FromStr;

use ini::Ini;

use crate::error::CliError;

#[derive(Debug, Default)]
pub struct Config {
    ini: Option<Ini>,
    section: String,
}

impl Config {
    pub fn load(path: Option<&Path>, section: &str) -> Result<Self, CliError> {
        let ini = match path {
            Some(p) => Some(
                Ini::load_from_file(p).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?,
            ),
            None => None,
        };
        Ok(Config {
            ini,
            section: section.to_string(),
        })
    }

    /// Raw string for `key`, section first. Keys match the flag names
    /// without the leading dashes; underscores and dashes are interchangeable.
    pub fn raw(&self, key: &str) -> Option<String> {
        let ini = self.ini.as_ref()?;
        let alt = key.replace('-', "_");
        let look = |props: &ini::Properties| props.get(key).or_else(|| props.get(&alt)).map(|s| s.trim().to_string());
        ini.section(Some(self.section.as_str()))
            .and_then(look)
            .or_else(|| ini.general_section().get(key).or_else(|| ini.general_section().get(&alt)).map(|s| s.trim().to_string()))
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|s| s.parse::<T>().map_err(|e| CliError::Usage(format!("config key {key} = {s:?}: {e}"))))
            .transpose()
    }

    /// `flag` if given, else the config value, else `None`.
    pub fn opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.parsed(key),
        }
    }

    pub fn or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.opt(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("missing --{key} (flag or config key)")))
    }

    /// Boolean switches can only be turned on by the flag.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.parsed::<bool>(key)?.unwrap_or(false))
    }
}
