use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An ordered list of named variables shared by a family of polynomials.
#[derive(Debug, Clone)]
pub struct Registry {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for Registry {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for Registry {}

impl Registry {
    pub fn new<I, S>(names: I) -> Result<Arc<Registry>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut reg = Registry {
            names: Vec::new(),
            index: HashMap::new(),
        };
        for n in names {
            reg.push(n.into())?;
        }
        Ok(Arc::new(reg))
    }

    fn push(&mut self, name: String) -> Result<usize> {
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateVariable(name));
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok(i)
    }

    /// A new registry with `extra` appended after the existing variables.
    pub fn extended<I, S>(&self, extra: I) -> Result<Arc<Registry>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut reg = self.clone();
        for n in extra {
            reg.push(n.into())?;
        }
        Ok(Arc::new(reg))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, var: usize) -> &str {
        &self.names[var]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn var(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}

pub(crate) fn same(a: &Arc<Registry>, b: &Arc<Registry>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
