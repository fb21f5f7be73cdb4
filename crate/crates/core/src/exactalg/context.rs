//! Variable contexts and truncation specifications.

use smallvec::SmallVec;
use std::sync::Arc;

/// Total-degree truncation over series-flagged variables.
///
/// Most contexts use a single degree group (`TruncationSpec::total`). A
/// context may split its series variables into independent groups, each with
/// its own total-degree bound; the piecewise lattice-sum check needs one bound
/// for the lattice markers and another for the auxiliary pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationSpec {
    pub bounds: SmallVec<[u32; 2]>,
}

impl TruncationSpec {
    pub fn total(n: u32) -> Self {
        TruncationSpec {
            bounds: SmallVec::from_slice(&[n]),
        }
    }

    pub fn groups(bounds: &[u32]) -> Self {
        TruncationSpec {
            bounds: SmallVec::from_slice(bounds),
        }
    }
}

#[derive(Debug)]
pub struct VarContextData {
    pub names: Vec<String>,
    /// Laurent variables may carry negative exponents (torus coordinates).
    pub laurent: Vec<bool>,
    /// Series group index per variable; `None` for variables exempt from
    /// truncation. A variable is never both Laurent and series.
    pub group: Vec<Option<usize>>,
    pub trunc: Option<TruncationSpec>,
}

/// Shared, immutable variable context.
#[derive(Clone, Debug)]
pub struct VarContext(Arc<VarContextData>);

impl PartialEq for VarContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.names == other.0.names
                && self.0.laurent == other.0.laurent
                && self.0.group == other.0.group
                && self.0.trunc == other.0.trunc)
    }
}
impl Eq for VarContext {}

/// Builder: each variable is declared ordinary, Laurent, or series.
pub enum VarKind {
    Ordinary,
    Laurent,
    Series(usize),
}

impl VarContext {
    pub fn new(vars: Vec<(String, VarKind)>, trunc: Option<TruncationSpec>) -> Self {
        let mut names = Vec::with_capacity(vars.len());
        let mut laurent = Vec::with_capacity(vars.len());
        let mut group = Vec::with_capacity(vars.len());
        for (name, kind) in vars {
            assert!(
                !names.contains(&name),
                "duplicate variable name {name:?} in context"
            );
            names.push(name);
            match kind {
                VarKind::Ordinary => {
                    laurent.push(false);
                    group.push(None);
                }
                VarKind::Laurent => {
                    laurent.push(true);
                    group.push(None);
                }
                VarKind::Series(g) => {
                    laurent.push(false);
                    group.push(Some(g));
                }
            }
        }
        if let (Some(t), Some(maxg)) = (
            &trunc,
            group.iter().filter_map(|g| *g).max(),
        ) {
            assert!(maxg < t.bounds.len(), "truncation bounds missing a group");
        }
        VarContext(Arc::new(VarContextData {
            names,
            laurent,
            group,
            trunc,
        }))
    }

    /// Series variables in one degree group, all remaining vars ordinary.
    pub fn series(series_vars: &[&str], other_vars: &[&str], n: Option<u32>) -> Self {
        let mut vars: Vec<(String, VarKind)> = Vec::new();
        for v in series_vars {
            vars.push((v.to_string(), VarKind::Series(0)));
        }
        for v in other_vars {
            vars.push((v.to_string(), VarKind::Ordinary));
        }
        VarContext::new(vars, n.map(TruncationSpec::total))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn index(&self, name: &str) -> usize {
        self.0
            .names
            .iter()
            .position(|n| n == name)
            .unwrap_or_else(|| panic!("unknown variable {name:?}"))
    }

    pub fn try_index(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn is_laurent(&self, i: usize) -> bool {
        self.0.laurent[i]
    }

    pub fn series_group(&self, i: usize) -> Option<usize> {
        self.0.group[i]
    }

    pub fn trunc(&self) -> Option<&TruncationSpec> {
        self.0.trunc.as_ref()
    }

    /// Same variables, different (or no) truncation.
    pub fn with_trunc(&self, trunc: Option<TruncationSpec>) -> Self {
        VarContext(Arc::new(VarContextData {
            names: self.0.names.clone(),
            laurent: self.0.laurent.clone(),
            group: self.0.group.clone(),
            trunc,
        }))
    }
}
