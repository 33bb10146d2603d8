pub mod cli;
pub mod corpus;
pub mod layout;
pub mod model;
pub mod render;
pub mod schema;
pub mod validate;
pub mod xml;
