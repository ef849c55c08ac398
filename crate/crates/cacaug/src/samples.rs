//! Bundled sample inputs used by tests, examples and documentation.

use crate::cactus::CacapInstance;
use crate::marking::RootedSteinerTree;

pub const CACTUS12_TEXT: &str = include_str!("../assets/cactus12.cacap");
pub const STEINER17_TEXT: &str = include_str!("../assets/steiner17.tree");

/// Twelve-node cactus with eight links: three 2-cycles and the 5-cycle hang
/// off node 0, two triangles hang off node 7. Ten nodes have degree 2.
pub fn cactus12() -> CacapInstance {
    crate::io::parse_instance(CACTUS12_TEXT)
        .expect("bundled instance parses")
        .instance
}

/// Seventeen-node well-structured rooted Steiner tree (7 Steiner nodes,
/// 10 terminal leaves).
pub fn steiner17() -> RootedSteinerTree {
    crate::io::parse_tree(STEINER17_TEXT).expect("bundled tree parses")
}
