//! Acceptance criteria for `mcso-core`, run by the `acceptance` test target.
