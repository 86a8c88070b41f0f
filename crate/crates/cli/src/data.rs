//! Dataset and catalog sources: a file when a path is given, the bundled copy otherwise.

use std::fs::File;
use std::path::Path;

use ecorec_core::{bundled_catalog, bundled_dataset, load_catalog, load_dataset, Catalog, CountryRecord};

pub fn dataset(path: Option<&Path>) -> Result<Vec<CountryRecord>, String> {
    match path {
        None => Ok(bundled_dataset()),
        Some(p) => {
            let file = File::open(p).map_err(|e| format!("{}: {e}", p.display()))?;
            load_dataset(file).map_err(|e| format!("{}: {e}", p.display()))
        }
    }
}

pub fn catalog(path: Option<&Path>) -> Result<Catalog, String> {
    match path {
        None => Ok(bundled_catalog()),
        Some(p) => {
            let file = File::open(p).map_err(|e| format!("{}: {e}", p.display()))?;
            load_catalog(file).map_err(|e| format!("{}: {e}", p.display()))
        }
    }
}
