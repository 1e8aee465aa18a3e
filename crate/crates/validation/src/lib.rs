//! Holds the `acceptance` test target. It lives in its own package so a
//! failing criterion does not stop the other suites from running under
//! `cargo test --workspace`.
