//! Doc-test bridge for the book: every fenced Rust block in `book/src/*.md`
//! is compiled and run by `cargo test --doc`, so the guide cannot drift from
//! the library.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/quadratic-orders.md")]
mod quadratic_orders {}

#[doc = include_str!("../../../book/src/class-numbers.md")]
mod class_numbers {}

#[doc = include_str!("../../../book/src/cyclotomic-extensions.md")]
mod cyclotomic_extensions {}

#[doc = include_str!("../../../book/src/units-and-orbits.md")]
mod units_and_orbits {}

#[doc = include_str!("../../../book/src/ideals-and-class-groups.md")]
mod ideals_and_class_groups {}

#[doc = include_str!("../../../book/src/finite-order-matrices.md")]
mod finite_order_matrices {}

#[doc = include_str!("../../../book/src/cohomology.md")]
mod cohomology_chapter {}

#[doc = include_str!("../../../book/src/cli.md")]
mod cli_chapter {}
