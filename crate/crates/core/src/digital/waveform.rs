use thiserror::Error;

use super::Value;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WaveformError {
    #[error("unknown input `{0}`")]
    UnknownInput(String),
    #[error("input `{0}` is given twice")]
    Duplicate(String),
    #[error("input `{0}` has no value")]
    Missing(String),
    #[error("`{0}` is not a digital value (0, 1 or #)")]
    BadValue(char),
    #[error("`{0}` is not of the form name=bits")]
    BadItem(String),
    #[error("network has {expected} Entries but the waveform drives {got}")]
    Count { expected: usize, got: usize },
}

/// One value sequence per Entry; the last value is held.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Waveform {
    pub signals: Vec<Vec<Value>>,
}

impl Waveform {
    pub fn new(signals: Vec<Vec<Value>>) -> Waveform {
        Waveform { signals }
    }

    /// Constant inputs.
    pub fn constant(values: &[Value]) -> Waveform {
        Waveform { signals: values.iter().map(|&v| vec![v]).collect() }
    }

    pub fn value(&self, entry: usize, step: usize) -> Value {
        let s = &self.signals[entry];
        s[step.min(s.len() - 1)]
    }

    /// Steps after which every signal holds its last value.
    pub fn len(&self) -> usize {
        self.signals.iter().map(Vec::len).max().unwrap_or(1)
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    /// Parses `A=011,B=1`. `names` lists the Entry names in order; the
    /// positional names `Entry1`, `Entry2`, ... are always accepted.
    pub fn parse(src: &str, names: &[String]) -> Result<Waveform, WaveformError> {
        let mut signals: Vec<Option<Vec<Value>>> = vec![None; names.len()];
        for item in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, bits) = item.split_once('=').ok_or_else(|| WaveformError::BadItem(item.to_string()))?;
            let name = name.trim();
            let idx = names
                .iter()
                .position(|n| n == name)
                .or_else(|| {
                    let k: usize = name.strip_prefix("Entry")?.parse().ok()?;
                    (1..=names.len()).contains(&k).then(|| k - 1)
                })
                .ok_or_else(|| WaveformError::UnknownInput(name.to_string()))?;
            if signals[idx].is_some() {
                return Err(WaveformError::Duplicate(name.to_string()));
            }
            let vals = bits
                .trim()
                .chars()
                .map(|c| Value::from_char(c).ok_or(WaveformError::BadValue(c)))
                .collect::<Result<Vec<_>, _>>()?;
            if vals.is_empty() {
                return Err(WaveformError::Missing(name.to_string()));
            }
            signals[idx] = Some(vals);
        }
        let signals = signals
            .into_iter()
            .zip(names)
            .map(|(s, n)| s.ok_or_else(|| WaveformError::Missing(n.clone())))
            .collect::<Result<_, _>>()?;
        Ok(Waveform { signals })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_hold() {
        let names = vec!["A".to_string(), "B".to_string()];
        let w = Waveform::parse("A=01, Entry2=1", &names).unwrap();
        assert_eq!(w.value(0, 0), Value::Zero);
        assert_eq!(w.value(0, 9), Value::One);
        assert_eq!(w.value(1, 3), Value::One);
        assert_eq!(w.len(), 2);
        assert_eq!(Waveform::parse("A=1", &names), Err(WaveformError::Missing("B".into())));
        assert_eq!(Waveform::parse("A=1,B=2", &names), Err(WaveformError::BadValue('2')));
        assert_eq!(Waveform::parse("C=1", &names), Err(WaveformError::UnknownInput("C".into())));
    }
}
