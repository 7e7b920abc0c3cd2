use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use super::GraphStore;

/// A store shared across request handlers: many readers or one writer.
#[derive(Clone, Debug, Default)]
pub struct SharedStore(Arc<RwLock<GraphStore>>);

impl SharedStore {
    pub fn new(store: GraphStore) -> Self {
        SharedStore(Arc::new(RwLock::new(store)))
    }

    pub fn read(&self) -> RwLockReadGuard<'_, GraphStore> {
        self.0.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn write(&self) -> RwLockWriteGuard<'_, GraphStore> {
        self.0.write().unwrap_or_else(|e| e.into_inner())
    }
}
