use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{eval_atom, is_digital, DigitalError, Value, Waveform, WaveformError};
use crate::network::{reconstruct, EdgeKind, Mode, Network};
use crate::term::{AtomClass, AtomRegistry, Term};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Timing {
    /// Every atom delays by one step.
    #[default]
    Unit,
    /// Gates settle within a step; only Off to Set transfer is delayed.
    Settle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Behaviour {
    /// State repeats with period 1 from `from` on.
    Steady { from: usize },
    Oscillating { from: usize, period: usize },
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    /// One value per network edge; cut edges stay `#`.
    pub values: Vec<Value>,
    /// Values arriving at the Exits, in Exit order.
    pub outputs: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub timing: Timing,
    pub behaviour: Behaviour,
    pub records: Vec<StepRecord>,
    #[serde(skip)]
    normal_edges: Vec<usize>,
}

impl Trace {
    pub fn last(&self) -> &StepRecord {
        self.records.last().expect("trace has the initial state")
    }

    pub fn outputs(&self) -> &[Value] {
        &self.last().outputs
    }

    pub fn period(&self) -> Option<usize> {
        match self.behaviour {
            Behaviour::Steady { .. } => Some(1),
            Behaviour::Oscillating { period, .. } => Some(period),
            Behaviour::Truncated => None,
        }
    }

    /// `step,edge,value` rows for every normal edge.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,edge,value\n");
        for r in &self.records {
            for &e in &self.normal_edges {
                writeln!(s, "{},{},{}", r.step, e, r.values[e]).unwrap();
            }
        }
        s
    }
}

#[derive(Clone, Debug)]
struct Cell {
    class: AtomClass,
    ins: Vec<usize>,
    outs: Vec<usize>,
    /// Input edge of the matching tail for Up and Set.
    partner: Option<usize>,
    entry: usize,
}

/// Precompiled network ready for stepping.
#[derive(Clone, Debug)]
pub struct Simulator {
    cells: Vec<Cell>,
    edges: usize,
    normal_edges: Vec<usize>,
    exits: Vec<usize>,
    entries: usize,
    /// Up output edge and the non-Up edge it mirrors.
    mirrors: Vec<(usize, usize)>,
    timing: Timing,
}

impl Simulator {
    pub fn new(net: &Network, reg: &AtomRegistry, timing: Timing) -> Result<Simulator, DigitalError> {
        let index: HashMap<_, usize> = net.edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut cells = Vec::with_capacity(net.nodes.len());
        let mut entries = 0;
        for n in &net.nodes {
            let class = reg
                .class_of(&n.atom)
                .filter(|&c| is_digital(c))
                .ok_or_else(|| DigitalError::NonDigital(n.atom.clone()))?;
            let ins: Vec<usize> = net.in_edges(n.id).into_iter().map(|e| index[e]).collect();
            let outs: Vec<usize> = net.out_edges(n.id).into_iter().map(|e| index[e]).collect();
            let partner = net
                .edges
                .iter()
                .find(|e| e.kind.is_cut() && e.to.0 == n.id)
                .and_then(|cut| net.in_edges(cut.from.0).first().map(|e| index[*e]));
            let entry = entries;
            if class == AtomClass::Entry {
                entries += 1;
            }
            cells.push(Cell { class, ins, outs, partner, entry });
        }
        let mut mirrors = Vec::new();
        for (id, c) in cells.iter().enumerate() {
            if c.class != AtomClass::Up {
                continue;
            }
            let (Some(&out), Some(mut src)) = (c.outs.first(), c.partner) else { continue };
            for _ in 0..cells.len() {
                let from = net.edges[src].from.0;
                match (cells[from].class, cells[from].partner) {
                    (AtomClass::Up, Some(p)) if from != id => src = p,
                    _ => break,
                }
            }
            mirrors.push((out, src));
        }
        let exits = cells.iter().filter(|c| c.class == AtomClass::Exit).map(|c| c.ins[0]).collect();
        let normal_edges = net.edges.iter().enumerate().filter(|(_, e)| e.kind == EdgeKind::Normal).map(|(i, _)| i).collect();
        Ok(Simulator { cells, edges: net.edges.len(), normal_edges, exits, entries, mirrors, timing })
    }

    pub fn entries(&self) -> usize {
        self.entries
    }

    pub fn initial(&self) -> Vec<Value> {
        vec![Value::Undef; self.edges]
    }

    fn eval_gates(&self, read: &[Value], write: &mut [Value]) -> bool {
        let mut changed = false;
        for c in &self.cells {
            if matches!(c.class, AtomClass::And | AtomClass::Or | AtomClass::Not | AtomClass::Wire | AtomClass::Fork) {
                let ins: Vec<Value> = c.ins.iter().map(|&e| read[e]).collect();
                let outs = eval_atom(c.class, &ins, Value::Undef).expect("arity fixed by the network");
                for (&e, v) in c.outs.iter().zip(outs) {
                    changed |= write[e] != v;
                    write[e] = v;
                }
            }
        }
        changed
    }

    fn mirror(&self, vals: &mut [Value]) -> bool {
        let mut changed = false;
        for &(out, src) in &self.mirrors {
            changed |= vals[out] != vals[src];
            vals[out] = vals[src];
        }
        changed
    }

    /// State after one step driven by the inputs of step `step`.
    pub fn step(&self, cur: &[Value], step: usize, w: &Waveform) -> Vec<Value> {
        let mut next = match self.timing {
            Timing::Unit => self.initial(),
            Timing::Settle => cur.to_vec(),
        };
        for c in &self.cells {
            match c.class {
                AtomClass::Entry => next[c.outs[0]] = w.value(c.entry, step),
                AtomClass::Set => next[c.outs[0]] = c.partner.map_or(Value::Undef, |p| cur[p]),
                _ => {}
            }
        }
        match self.timing {
            Timing::Unit => {
                self.eval_gates(cur, &mut next);
                self.mirror(&mut next);
            }
            Timing::Settle => {
                self.mirror(&mut next);
                for _ in 0..=self.cells.len() + 1 {
                    let snapshot = next.clone();
                    let a = self.eval_gates(&snapshot, &mut next);
                    let b = self.mirror(&mut next);
                    if !a && !b {
                        break;
                    }
                }
            }
        }
        next
    }

    fn record(&self, step: usize, values: &[Value]) -> StepRecord {
        StepRecord { step, values: values.to_vec(), outputs: self.exits.iter().map(|&e| values[e]).collect() }
    }

    /// Steps until a state repeats under held inputs or `max_steps` is hit.
    pub fn run(&self, w: &Waveform, max_steps: usize) -> Result<Trace, DigitalError> {
        if w.signals.len() != self.entries {
            return Err(WaveformError::Count { expected: self.entries, got: w.signals.len() }.into());
        }
        let hold = w.len().saturating_sub(1);
        let mut seen: HashMap<(Vec<Value>, usize), usize> = HashMap::new();
        let mut state = self.initial();
        let mut records = Vec::new();
        let mut behaviour = Behaviour::Truncated;
        for i in 0..=max_steps {
            records.push(self.record(i, &state));
            if let Some(&j) = seen.get(&(state.clone(), i.min(hold))) {
                behaviour = match i - j {
                    1 => Behaviour::Steady { from: j },
                    p => Behaviour::Oscillating { from: j, period: p },
                };
                break;
            }
            seen.insert((state.clone(), i.min(hold)), i);
            if i < max_steps {
                state = self.step(&state, i, w);
            }
        }
        Ok(Trace { timing: self.timing, behaviour, records, normal_edges: self.normal_edges.clone() })
    }
}

pub fn simulate_network(
    net: &Network,
    reg: &AtomRegistry,
    w: &Waveform,
    max_steps: usize,
    timing: Timing,
) -> Result<Trace, DigitalError> {
    Simulator::new(net, reg, timing)?.run(w, max_steps)
}

/// Reconstructs `t` keeping its cuts and simulates it.
pub fn simulate(
    t: &Term,
    reg: &AtomRegistry,
    w: &Waveform,
    max_steps: usize,
    timing: Timing,
) -> Result<Trace, DigitalError> {
    let net = reconstruct(t, reg, Mode::KeepCuts)?;
    simulate_network(&net, reg, w, max_steps, timing)
}
