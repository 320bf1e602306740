//! The finite-group interface shared by pc groups, quotients and subgroups.
//!
//! Elements are dense indices `0..order()` with the identity at index 0.

use crate::word::Word;

/// Dense element handle of a [`GroupView`].
pub type Elem = u32;

pub trait GroupView: Sync {
    fn prime(&self) -> u32;

    fn order(&self) -> usize;

    fn identity(&self) -> Elem {
        0
    }

    fn multiply(&self, x: Elem, y: Elem) -> Elem;

    fn inverse(&self, x: Elem) -> Elem;

    /// A generating set of the whole group.
    fn generators(&self) -> Vec<Elem>;

    /// The element as a word over the names returned by [`generator_names`](Self::generator_names).
    fn word(&self, x: Elem) -> Word;

    fn generator_names(&self) -> Vec<String>;

    fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order() as Elem
    }

    fn power(&self, x: Elem, k: i64) -> Elem {
        let mut base = if k < 0 { self.inverse(x) } else { x };
        let mut k = k.unsigned_abs();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.multiply(acc, base);
            }
            base = self.multiply(base, base);
            k >>= 1;
        }
        acc
    }

    /// `x^{-1} y^{-1} x y`.
    fn commutator(&self, x: Elem, y: Elem) -> Elem {
        let xy = self.multiply(x, y);
        let yx = self.multiply(y, x);
        self.multiply(self.inverse(yx), xy)
    }

    /// `y^{-1} x y`.
    fn conjugate(&self, x: Elem, y: Elem) -> Elem {
        self.multiply(self.multiply(self.inverse(y), x), y)
    }

    /// Order of `x`, found by repeated `p`-th powering.
    fn element_order(&self, x: Elem) -> u64 {
        let p = self.prime() as i64;
        let mut y = x;
        let mut ord = 1u64;
        while y != self.identity() {
            y = self.power(y, p);
            ord *= p as u64;
        }
        ord
    }

    /// Text of the element's word.
    fn describe(&self, x: Elem) -> String {
        self.word(x).display(&self.generator_names()).to_string()
    }
}

impl<G: GroupView + ?Sized> GroupView for &G {
    fn prime(&self) -> u32 {
        (**self).prime()
    }
    fn order(&self) -> usize {
        (**self).order()
    }
    fn identity(&self) -> Elem {
        (**self).identity()
    }
    fn multiply(&self, x: Elem, y: Elem) -> Elem {
        (**self).multiply(x, y)
    }
    fn inverse(&self, x: Elem) -> Elem {
        (**self).inverse(x)
    }
    fn generators(&self) -> Vec<Elem> {
        (**self).generators()
    }
    fn word(&self, x: Elem) -> Word {
        (**self).word(x)
    }
    fn generator_names(&self) -> Vec<String> {
        (**self).generator_names()
    }
    fn element_order(&self, x: Elem) -> u64 {
        (**self).element_order(x)
    }
}

/// `log_p n` for an exact power of `p`.
pub fn log_p(n: u64, p: u32) -> u32 {
    let mut n = n;
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n % p as u64, 0, "{n} is not a power of {p}");
        n /= p as u64;
        k += 1;
    }
    k
}

/// Per-element tables that most sweeps need: `x^p` and `o(x)`.
pub struct PowerTables {
    pub prime: u32,
    pub pth_power: Vec<Elem>,
    pub order: Vec<u64>,
}

impl PowerTables {
    pub fn new<G: GroupView + ?Sized>(g: &G) -> Self {
        let p = g.prime();
        let pth_power: Vec<Elem> = g.elements().map(|x| g.power(x, p as i64)).collect();
        let mut order = vec![0u64; pth_power.len()];
        for x in 0..pth_power.len() {
            let mut y = x;
            let mut o = 1u64;
            while y != 0 {
                y = pth_power[y] as usize;
                o *= p as u64;
            }
            order[x] = o;
        }
        Self {
            prime: p,
            pth_power,
            order,
        }
    }

    /// `x^{p^i}` by iterating the `p`-th power map.
    pub fn power_p(&self, x: Elem, i: u32) -> Elem {
        let mut y = x;
        for _ in 0..i {
            y = self.pth_power[y as usize];
        }
        y
    }

    pub fn exponent(&self) -> u64 {
        self.order.iter().copied().max().unwrap_or(1)
    }

    /// `o(x) <= p^i`, where a negative `i` means `x` is the identity.
    pub fn order_at_most(&self, x: Elem, i: i64) -> bool {
        if i < 0 {
            return x == 0;
        }
        let mut bound = 1u64;
        for _ in 0..i {
            bound = bound.saturating_mul(self.prime as u64);
        }
        self.order[x as usize] <= bound
    }
}
