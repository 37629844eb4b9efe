//! Node values, variable spaces and (partial) instantiations.

use std::fmt;

/// A value taken by one node.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Discrete(i64),
    Real(f64),
    Vector(Vec<f64>),
}

impl Value {
    pub fn as_discrete(&self) -> Option<i64> {
        match self {
            Value::Discrete(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Real(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[f64]> {
        match self {
            Value::Vector(v) => Some(v),
            _ => None,
        }
    }

    /// Coordinates of a continuous value, `None` for discrete ones.
    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            Value::Discrete(_) => None,
            Value::Real(x) => Some(std::slice::from_ref(x)),
            Value::Vector(v) => Some(v),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Discrete(x) => write!(f, "{x}"),
            Value::Real(x) => write!(f, "{x}"),
            Value::Vector(v) => {
                write!(f, "[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// The set of values a node may take.
///
/// A one-dimensional continuous space holds [`Value::Real`]; higher
/// dimensions hold [`Value::Vector`].
#[derive(Debug, Clone, PartialEq)]
pub enum VariableSpace {
    Discrete(Vec<i64>),
    Continuous { lower: Vec<f64>, upper: Vec<f64> },
}

impl VariableSpace {
    pub fn discrete<I: IntoIterator<Item = i64>>(values: I) -> Self {
        VariableSpace::Discrete(values.into_iter().collect())
    }

    pub fn binary() -> Self {
        VariableSpace::Discrete(vec![0, 1])
    }

    pub fn interval(lower: f64, upper: f64) -> Self {
        VariableSpace::Continuous {
            lower: vec![lower],
            upper: vec![upper],
        }
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        VariableSpace::Continuous { lower, upper }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, VariableSpace::Discrete(_))
    }

    /// Enumerated values of a discrete space.
    pub fn values(&self) -> Option<&[i64]> {
        match self {
            VariableSpace::Discrete(v) => Some(v),
            VariableSpace::Continuous { .. } => None,
        }
    }

    pub fn contains(&self, value: &Value) -> bool {
        match (self, value) {
            (VariableSpace::Discrete(vals), Value::Discrete(x)) => vals.contains(x),
            (VariableSpace::Continuous { lower, upper }, Value::Real(x)) => {
                lower.len() == 1 && x.is_finite() && *x >= lower[0] && *x <= upper[0]
            }
            (VariableSpace::Continuous { lower, upper }, Value::Vector(v)) => {
                lower.len() > 1
                    && v.len() == lower.len()
                    && v.iter()
                        .zip(lower.iter().zip(upper))
                        .all(|(x, (lo, hi))| x.is_finite() && x >= lo && x <= hi)
            }
            _ => false,
        }
    }

    /// Everything wrong with this space; empty when it is well formed.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            VariableSpace::Discrete(vals) => {
                if vals.len() < 2 {
                    out.push(format!(
                        "discrete space has {} element(s), needs at least 2",
                        vals.len()
                    ));
                }
                let mut sorted = vals.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != vals.len() {
                    out.push("discrete space lists a value twice".to_string());
                }
            }
            VariableSpace::Continuous { lower, upper } => {
                if lower.is_empty() {
                    out.push("continuous space has dimension 0".to_string());
                }
                if lower.len() != upper.len() {
                    out.push(format!(
                        "bound lengths differ ({} vs {})",
                        lower.len(),
                        upper.len()
                    ));
                }
                for (i, (lo, hi)) in lower.iter().zip(upper).enumerate() {
                    if !lo.is_finite() || !hi.is_finite() {
                        out.push(format!("coordinate {i} has a non-finite bound"));
                    } else if lo >= hi {
                        out.push(format!("coordinate {i} has lower {lo} >= upper {hi}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for VariableSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VariableSpace::Discrete(vals) => {
                write!(f, "discrete{{")?;
                for (i, v) in vals.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
            VariableSpace::Continuous { lower, upper } if lower.len() == 1 && upper.len() == 1 => {
                write!(f, "real[{},{}]", lower[0], upper[0])
            }
            VariableSpace::Continuous { lower, .. } => write!(f, "box[dim={}]", lower.len()),
        }
    }
}

/// Values for some or all nodes of a net, indexed by node index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Instantiation {
    values: Vec<Option<Value>>,
}

impl Instantiation {
    /// An empty instantiation for a net with `len` nodes.
    pub fn empty(len: usize) -> Self {
        Instantiation {
            values: vec![None; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, node: usize) -> Option<&Value> {
        self.values.get(node).and_then(Option::as_ref)
    }

    pub fn set(&mut self, node: usize, value: Value) {
        self.values[node] = Some(value);
    }

    pub fn unset(&mut self, node: usize) {
        self.values[node] = None;
    }

    pub fn is_assigned(&self, node: usize) -> bool {
        self.get(node).is_some()
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// `(node, value)` for every assigned node, in index order.
    pub fn assigned(&self) -> impl Iterator<Item = (usize, &Value)> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.as_ref().map(|v| (i, v)))
    }
}
