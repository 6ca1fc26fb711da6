//! Wrapper/TAM co-optimization and test scheduling for core-based SOCs.
//!
//! Each core gets a set of wrapper designs (TAM width against test time).
//! Those become rectangles that are packed greedily under a total TAM width
//! and an optional power budget.
//!
//! ```
//! use soctam::{load_design, schedule, validate, Limits};
//!
//! let design = load_design("core 1\ninputs 4\noutputs 4\nscan 20 18\npatterns 50\n", None).unwrap();
//! let limits = Limits::width(4);
//! let s = schedule(&design, &limits).unwrap();
//! assert!(validate(&s, &design, &limits).is_empty());
//! ```

pub mod benchmark;
pub mod cli;
pub mod design;
pub mod error;
pub mod oracle;
pub mod rectangles;
pub mod render;
pub mod report;
pub mod scheduler;
pub mod wrapper;

pub use benchmark::{load_design, parse_design};
pub use design::{CoreSpec, SocDesign};
pub use error::{Error, Result};
pub use oracle::{
    brute_force_optimal, enumerate_optimal, random_instance, validate, InstanceBounds, Violation,
    ViolationKind,
};
pub use rectangles::{prepare, Packing, RectangleSet};
pub use scheduler::{schedule, schedule_run, Limits, Placement, Schedule};
pub use wrapper::{design_wrapper, tam_time_table, test_time, WrapperConfig};
