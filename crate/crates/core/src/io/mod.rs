//! Meshes, file formats, data files and verification reports.

pub mod datafile;
pub mod export;
pub mod mesh;
pub mod report;
pub mod selector;

pub use datafile::{ConfigFile, DataFile};
pub use export::{load_mesh, read_obj, read_ply, save_mesh, write_obj, write_ply, MeshFormat};
pub use mesh::{build_bjorling_mesh, build_mesh, Mesh, MeshMetadata, SamplingSpec};
pub use report::{VerificationReport, REPORT_SCHEMA};
pub use selector::{limit_m2_data, Selector};
