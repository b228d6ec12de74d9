//! Shared symmetry data for one ring size N with memoized degrees.

use crate::burnside::BurnsideElement;
use crate::degrees;
use crate::error::Result;
use crate::groups::{gamma_prime, SubgroupClassLattice};
use crate::reps::{DressedIrrep, GIrrep};
use crate::twisted::{TwistedLattice, TwistedSum};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Subgroup lattice of Γ' = Z₂×Z₂×D_N, its twisted pair classes and degree caches.
pub struct SymmetryContext {
    n: usize,
    lattice: Arc<SubgroupClassLattice>,
    twisted: TwistedLattice,
    basic: Mutex<HashMap<DressedIrrep, BurnsideElement>>,
    twisted_degrees: Mutex<HashMap<GIrrep, TwistedSum>>,
}

impl SymmetryContext {
    pub fn new(n: usize) -> Result<Self> {
        let lattice = Arc::new(SubgroupClassLattice::new(gamma_prime(n)?)?);
        let twisted = TwistedLattice::new(Arc::clone(&lattice), n)?;
        Ok(SymmetryContext {
            n,
            lattice,
            twisted,
            basic: Mutex::new(HashMap::new()),
            twisted_degrees: Mutex::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lattice(&self) -> &SubgroupClassLattice {
        &self.lattice
    }

    pub fn twisted(&self) -> &TwistedLattice {
        &self.twisted
    }

    pub fn basic_degree(&self, v: &DressedIrrep) -> Result<BurnsideElement> {
        if let Some(d) = self.basic.lock().expect("cache lock").get(v) {
            return Ok(d.clone());
        }
        let d = degrees::basic_degree(&self.lattice, v, self.n)?;
        self.basic.lock().expect("cache lock").insert(*v, d.clone());
        Ok(d)
    }

    pub fn twisted_basic_degree(&self, v: &GIrrep) -> Result<TwistedSum> {
        if let Some(d) = self.twisted_degrees.lock().expect("cache lock").get(v) {
            return Ok(d.clone());
        }
        let d = degrees::twisted_basic_degree(&self.twisted, v)?;
        self.twisted_degrees
            .lock()
            .expect("cache lock")
            .insert(*v, d.clone());
        Ok(d)
    }
}
