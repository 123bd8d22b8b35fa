pub mod eval;
pub mod lattice;
pub mod protect;
pub mod syntax;
pub mod typecheck;
pub mod oracles;
pub mod transform;
pub mod enumerate;
pub mod par;
pub mod corpus;
pub mod harness;
pub mod cli;
