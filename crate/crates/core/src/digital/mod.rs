//! Digital concretization: three-valued gates and unit-delay simulation of
//! reconstructed networks, Off/Set feedback included.

mod sim;
mod waveform;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use sim::{simulate, simulate_network, Behaviour, Simulator, StepRecord, Timing, Trace};
pub use waveform::{Waveform, WaveformError};

use crate::network::ReconstructError;
use crate::term::AtomClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Zero,
    One,
    Undef,
}

impl Value {
    pub const ALL: [Value; 3] = [Value::Zero, Value::One, Value::Undef];

    pub fn from_char(c: char) -> Option<Value> {
        match c {
            '0' => Some(Value::Zero),
            '1' => Some(Value::One),
            '#' => Some(Value::Undef),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Value::Zero => '0',
            Value::One => '1',
            Value::Undef => '#',
        }
    }

    pub fn is_defined(self) -> bool {
        self != Value::Undef
    }

    pub fn from_bool(b: bool) -> Value {
        if b {
            Value::One
        } else {
            Value::Zero
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_char(self.as_char())
    }
}

#[derive(Debug, Error)]
pub enum DigitalError {
    #[error("`{0}` has no digital behaviour")]
    NonDigital(String),
    #[error("`{atom}` takes {expected} inputs, got {got}")]
    Arity { atom: String, expected: usize, got: usize },
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
    #[error(transparent)]
    Waveform(#[from] WaveformError),
}

pub fn is_digital(class: AtomClass) -> bool {
    use AtomClass::*;
    matches!(class, Entry | Exit | Up | Down | Set | Off | Fork | And | Or | Not | Wire)
}

/// Output values of one atom. Heads take their value from `external`.
pub fn eval_atom(class: AtomClass, inputs: &[Value], external: Value) -> Result<Vec<Value>, DigitalError> {
    use AtomClass::*;
    use Value::*;
    let name = || format!("{class:?}");
    let arity = |n: usize| {
        if inputs.len() == n {
            Ok(())
        } else {
            Err(DigitalError::Arity { atom: name(), expected: n, got: inputs.len() })
        }
    };
    match class {
        And => {
            arity(2)?;
            Ok(vec![match (inputs[0], inputs[1]) {
                (One, One) => One,
                (Zero, _) | (_, Zero) => Zero,
                _ => Undef,
            }])
        }
        Or => {
            arity(2)?;
            Ok(vec![match (inputs[0], inputs[1]) {
                (Zero, Zero) => Zero,
                (One, _) | (_, One) => One,
                _ => Undef,
            }])
        }
        Not => {
            arity(1)?;
            Ok(vec![match inputs[0] {
                Zero => One,
                One => Zero,
                Undef => Undef,
            }])
        }
        Wire => {
            arity(1)?;
            Ok(vec![inputs[0]])
        }
        Fork => {
            arity(1)?;
            Ok(vec![inputs[0], inputs[0]])
        }
        Entry | Up | Set => {
            arity(0)?;
            Ok(vec![external])
        }
        Exit | Down | Off => {
            arity(1)?;
            Ok(Vec::new())
        }
        _ => Err(DigitalError::NonDigital(name())),
    }
}
