//! Small groups used as negative controls.

#![allow(dead_code)]

pub const D32: &str = "prime 2\ngen s 2\ngen r 2\ngen r2 2\ngen r4 2\ngen r8 2\npow r = r2\npow r2 = r4\npow r4 = r8\n\
conj r s = r r2 r4 r8\nconj r2 s = r2 r4 r8\nconj r4 s = r4 r8\n";

/// `C_5 wr C_5`: class 5, generated by elements of order 5.
pub const WREATH_5: &str = "prime 5\ngen t 5\ngen b1 5\ngen b2 5\ngen b3 5\ngen b4 5\ngen b5 5\n\
conj b1 t = b1 b2\nconj b2 t = b2 b3\nconj b3 t = b3 b4\nconj b4 t = b4 b5\n";

/// A group of order 64 in which a product of two squares is not a square
/// times a central element.
pub const SQUARES_64: &str = "prime 2\ngen g1 2\ngen g2 2\ngen g3 2\ngen g4 2\ngen g5 2\ngen g6 2\n\
pow g1 = g5\npow g2 = g4 g5\npow g3 = g5 g6\nconj g2 g1 = g2 g4\nconj g3 g1 = g3 g6\nconj g4 g1 = g4 g6\n\
conj g3 g2 = g3 g4\nconj g4 g2 = g4 g6\nconj g5 g2 = g5 g6\nconj g4 g3 = g4 g6\n";
