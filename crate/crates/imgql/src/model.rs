//! Models: named scalar channels over a grid space.
//!
//! A model binds attribute names to one value per point (image
//! intensities, widened to `f64` regardless of the source bit depth) and
//! provides the built-in `border` predicate. Assertions `[a ⋈ c]` are
//! evaluated here.

use std::sync::Arc;

use crate::error::{EvalError, Result};
use crate::formula::Cmp;
use crate::space::{GridSpace, PointSet};

/// Reserved predicate names that channels may not shadow.
pub const RESERVED: &[&str] = &["border"];

/// An assertion `[attr ⋈ c]` comparing a channel against a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub attr: String,
    pub cmp: Cmp,
    pub value: f64,
}

#[derive(Debug, Clone)]
struct Channel {
    name: String,
    values: Vec<f64>,
}

/// A grid space plus named scalar channels.
#[derive(Debug, Clone)]
pub struct Model {
    space: Arc<GridSpace>,
    channels: Vec<Channel>,
}

impl Model {
    pub fn new(space: Arc<GridSpace>) -> Self {
        Model {
            space,
            channels: Vec::new(),
        }
    }

    pub fn space(&self) -> &Arc<GridSpace> {
        &self.space
    }

    pub fn channel_names(&self) -> impl Iterator<Item = &str> {
        self.channels.iter().map(|c| c.name.as_str())
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.channels
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn has_channel(&self, name: &str) -> bool {
        self.channels.iter().any(|c| c.name == name)
    }

    /// Binds a new channel. The value vector must cover every grid point
    /// and the name must be fresh and not reserved.
    pub fn attach_channel(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if RESERVED.contains(&name.as_str()) {
            return Err(EvalError::ReservedName { name }.into());
        }
        if self.has_channel(&name) {
            return Err(EvalError::DuplicateChannel { name }.into());
        }
        if values.len() != self.space.len() {
            return Err(EvalError::ChannelLength {
                name,
                expected: self.space.len(),
                found: values.len(),
            }
            .into());
        }
        self.channels.push(Channel { name, values });
        Ok(())
    }

    /// The points whose channel value satisfies the comparison. The
    /// comparison is on the stored floating values, with no tolerance.
    pub fn eval_assertion(&self, assn: &Assertion) -> Result<PointSet> {
        let values = self
            .channel(&assn.attr)
            .ok_or_else(|| EvalError::UnknownAttribute {
                name: assn.attr.clone(),
                loc: None,
            })?;
        let mut set = PointSet::empty(self.space.clone());
        for (i, &v) in values.iter().enumerate() {
            if assn.cmp.eval(v, assn.value) {
                set.insert(i);
            }
        }
        Ok(set)
    }

    /// The built-in `border` predicate.
    pub fn border(&self) -> PointSet {
        self.space.border_set()
    }
}
