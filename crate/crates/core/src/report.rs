use std::fmt;

/// Upper bound on the number of witnesses a single report keeps.
pub const MAX_WITNESSES: usize = 256;

/// Outcome of an exhaustive axiom check: the list of violated axioms,
/// each carrying a witness tuple. Empty means every axiom holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport<V> {
    violations: Vec<V>,
    truncated: bool,
}

impl<V> Default for ValidationReport<V> {
    fn default() -> Self {
        Self {
            violations: Vec::new(),
            truncated: false,
        }
    }
}

impl<V> ValidationReport<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, v: V) {
        if self.violations.len() < MAX_WITNESSES {
            self.violations.push(v);
        } else {
            self.truncated = true;
        }
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// True when more violations existed than were recorded.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn violations(&self) -> &[V] {
        &self.violations
    }

    pub fn iter(&self) -> std::slice::Iter<'_, V> {
        self.violations.iter()
    }

    pub fn extend(&mut self, other: ValidationReport<V>) {
        self.truncated |= other.truncated;
        for v in other.violations {
            self.push(v);
        }
    }

    pub fn map<W>(self, f: impl FnMut(V) -> W) -> ValidationReport<W> {
        ValidationReport {
            violations: self.violations.into_iter().map(f).collect(),
            truncated: self.truncated,
        }
    }
}

impl<V: fmt::Display> fmt::Display for ValidationReport<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        if self.truncated {
            write!(f, "\n(further violations omitted)")?;
        }
        Ok(())
    }
}

impl<'a, V> IntoIterator for &'a ValidationReport<V> {
    type Item = &'a V;
    type IntoIter = std::slice::Iter<'a, V>;
    fn into_iter(self) -> Self::IntoIter {
        self.violations.iter()
    }
}
