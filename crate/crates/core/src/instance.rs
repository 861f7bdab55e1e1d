//! Model-finder instances: sigs, atoms and the fields relating them.
//!
//! The on-disk form is a small JSON document:
//!
//! ```json
//! {"sigs":[{"name":"Node"}],
//!  "atoms":[{"id":"N0","sig":"Node"},{"id":"N1","sig":"Node"}],
//!  "fields":[{"name":"left","owner":"Node","arity":2,"tuples":[["N0","N1"]]}]}
//! ```
//!
//! Unknown keys are rejected. Atom and tuple order is preserved and is the
//! only source of ordering for everything downstream.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::InputError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub builtin: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom {
    pub id: String,
    pub sig: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Field {
    pub name: String,
    pub owner: String,
    pub arity: usize,
    pub tuples: Vec<Vec<String>>,
}

impl Field {
    pub fn is_binary(&self) -> bool {
        self.arity == 2
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    sigs: Vec<Sig>,
    atoms: Vec<Atom>,
    fields: Vec<Field>,
}

/// A referentially intact instance. Immutable once built.
#[derive(Debug, Clone, Default)]
pub struct Instance {
    sigs: Vec<Sig>,
    atoms: Vec<Atom>,
    fields: Vec<Field>,
    sig_index: HashMap<String, usize>,
    atom_index: HashMap<String, usize>,
    field_index: HashMap<String, usize>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.sigs == other.sigs && self.atoms == other.atoms && self.fields == other.fields
    }
}

impl Eq for Instance {}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            sigs: &'a [Sig],
            atoms: &'a [Atom],
            fields: &'a [Field],
        }
        View {
            sigs: &self.sigs,
            atoms: &self.atoms,
            fields: &self.fields,
        }
        .serialize(serializer)
    }
}

impl Instance {
    /// Parse and validate an instance document.
    pub fn parse(text: &str) -> Result<Instance, InputError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawInstance = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            InputError::new(format!("invalid instance at `{path}`: {}", e.inner()))
        })?;
        Instance::new(raw.sigs, raw.atoms, raw.fields)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    /// Build an instance from its parts, checking referential integrity.
    pub fn new(sigs: Vec<Sig>, atoms: Vec<Atom>, fields: Vec<Field>) -> Result<Instance, InputError> {
        let mut sig_index = HashMap::new();
        for (i, sig) in sigs.iter().enumerate() {
            if sig_index.insert(sig.name.clone(), i).is_some() {
                return Err(InputError::new(format!("duplicate sig `{}`", sig.name)));
            }
        }
        for sig in &sigs {
            if let Some(parent) = &sig.parent {
                if sig.builtin {
                    return Err(InputError::new(format!(
                        "builtin sig `{}` cannot have a parent",
                        sig.name
                    )));
                }
                if !sig_index.contains_key(parent) {
                    return Err(InputError::new(format!(
                        "sig `{}` has unknown parent `{parent}`",
                        sig.name
                    )));
                }
            }
        }
        for sig in &sigs {
            let mut seen = HashSet::new();
            let mut cur = Some(sig);
            while let Some(s) = cur {
                if !seen.insert(s.name.as_str()) {
                    return Err(InputError::new(format!(
                        "sig `{}` has a cyclic parent chain",
                        sig.name
                    )));
                }
                cur = s.parent.as_ref().map(|p| &sigs[sig_index[p]]);
            }
        }

        let mut atom_index = HashMap::new();
        for (i, atom) in atoms.iter().enumerate() {
            if atom_index.insert(atom.id.clone(), i).is_some() {
                return Err(InputError::new(format!("duplicate atom `{}`", atom.id)));
            }
            if !sig_index.contains_key(&atom.sig) {
                return Err(InputError::new(format!(
                    "atom `{}` has unknown sig `{}`",
                    atom.id, atom.sig
                )));
            }
        }

        let mut field_index = HashMap::new();
        for (i, field) in fields.iter().enumerate() {
            if field_index.insert(field.name.clone(), i).is_some() {
                return Err(InputError::new(format!("duplicate field `{}`", field.name)));
            }
            if !sig_index.contains_key(&field.owner) {
                return Err(InputError::new(format!(
                    "field `{}` has unknown owner `{}`",
                    field.name, field.owner
                )));
            }
            if field.arity < 2 {
                return Err(InputError::new(format!(
                    "field `{}` has arity {}; fields relate at least two atoms",
                    field.name, field.arity
                )));
            }
            let mut seen = HashSet::new();
            for tuple in &field.tuples {
                if tuple.len() != field.arity {
                    return Err(InputError::new(format!(
                        "field `{}` has a tuple of length {} but arity {}",
                        field.name,
                        tuple.len(),
                        field.arity
                    )));
                }
                for id in tuple {
                    if !atom_index.contains_key(id) {
                        return Err(InputError::new(format!(
                            "field `{}` references unknown atom `{id}`",
                            field.name
                        )));
                    }
                }
                if !seen.insert(tuple) {
                    return Err(InputError::new(format!(
                        "field `{}` lists tuple ({}) twice",
                        field.name,
                        tuple.join(", ")
                    )));
                }
            }
        }

        Ok(Instance {
            sigs,
            atoms,
            fields,
            sig_index,
            atom_index,
            field_index,
        })
    }

    pub fn sigs(&self) -> &[Sig] {
        &self.sigs
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn sig(&self, name: &str) -> Option<&Sig> {
        self.sig_index.get(name).map(|&i| &self.sigs[i])
    }

    /// Position of a sig in the instance's sig list.
    pub fn sig_ordinal(&self, name: &str) -> Option<usize> {
        self.sig_index.get(name).copied()
    }

    pub fn atom(&self, id: &str) -> Option<&Atom> {
        self.atom_index.get(id).map(|&i| &self.atoms[i])
    }

    /// Position of an atom in the instance's atom list.
    pub fn atom_ordinal(&self, id: &str) -> Option<usize> {
        self.atom_index.get(id).copied()
    }

    pub fn field(&self, name: &str) -> Option<&Field> {
        self.field_index.get(name).map(|&i| &self.fields[i])
    }

    /// The sig and all its ancestors, most specific first.
    pub fn lineage<'a>(&'a self, sig: &'a str) -> impl Iterator<Item = &'a Sig> + 'a {
        let mut cur = self.sig(sig);
        std::iter::from_fn(move || {
            let s = cur?;
            cur = s.parent.as_deref().and_then(|p| self.sig(p));
            Some(s)
        })
    }

    /// Whether `sig` is `ancestor` or one of its descendants.
    pub fn is_subsig(&self, sig: &str, ancestor: &str) -> bool {
        self.lineage(sig).any(|s| s.name == ancestor)
    }

    pub fn is_builtin_atom(&self, id: &str) -> bool {
        self.atom(id)
            .map(|a| self.lineage(&a.sig).any(|s| s.builtin))
            .unwrap_or(false)
    }

    /// Atoms of `sig` or any of its subsigs, in instance order.
    pub fn atoms_of<'a>(&'a self, sig: &'a str) -> impl Iterator<Item = &'a Atom> + 'a {
        self.atoms.iter().filter(move |a| self.is_subsig(&a.sig, sig))
    }

    /// Number of tuples, across all fields, that mention `atom` in any position.
    pub fn degree(&self, atom: &str) -> Result<usize, InputError> {
        if !self.atom_index.contains_key(atom) {
            return Err(InputError::new(format!("unknown atom `{atom}`")));
        }
        Ok(self
            .fields
            .iter()
            .flat_map(|f| &f.tuples)
            .filter(|t| t.iter().any(|a| a == atom))
            .count())
    }
}
