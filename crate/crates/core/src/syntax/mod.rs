mod ast;
mod charset;
mod desugar;
pub mod interp;
mod parser;

pub use ast::{quantifier_op, Node, NodeKind, Span};
pub use charset::{digit, dot, escape_char, render_class, space, word, Alphabet, CharSet};
pub use desugar::{desugar, is_wrapper_loop, wrap_for_match_mode, MatchMode, MAX_POSITIONS};
pub use parser::{parse, ParseOptions};
