//! Batch commands and structure file I/O.
