//! Conjugacy classes of the main cardioids `M_0 .. M_{n-2}`.
//!
//! Rotation by `nu^g` (with `g = gcd(n-1, d+1)`) and complex conjugation generate a
//! dihedral group of order `2a`, `a = (n-1)/g`, acting on cardioid indices by
//! `r: k -> k + g` and `s: k -> -k (mod n-1)`. Its orbits are the conjugacy classes.
//! They are counted three ways: closed form, Burnside's lemma, and explicit orbits.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check(n: u32, d: u32) -> Result<()> {
    if n < 2 || d < 1 {
        return Err(Error::InvalidParams(format!("need n >= 2 and d >= 1, got n = {n}, d = {d}")));
    }
    Ok(())
}

/// `gcd(n-1, d+1)`, which equals `gcd(n-1, n+d)` since `n+d = (n-1) + (d+1)`.
pub fn family_gcd(n: u32, d: u32) -> Result<u32> {
    check(n, d)?;
    let g = (n - 1).gcd(&(d + 1));
    let alt = (n - 1).gcd(&(n + d));
    if g != alt {
        return Err(Error::InvariantViolation(format!("gcd(n-1, d+1) = {g} but gcd(n-1, n+d) = {alt}")));
    }
    Ok(g)
}

/// `1 + g/2` for even `g`, `(g+1)/2` for odd `g`.
pub fn count_closed_form(n: u32, d: u32) -> Result<u32> {
    let g = family_gcd(n, d)?;
    Ok(if g % 2 == 0 { 1 + g / 2 } else { g.div_ceil(2) })
}

/// Group element `s^reflect r^rotation`: rotate first, then reflect if `reflect`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Element {
    pub reflect: bool,
    pub rotation: u32,
}

impl Element {
    pub const IDENTITY: Element = Element {
        reflect: false,
        rotation: 0,
    };
}

/// The dihedral group `D_{2a}` acting on `Z/(n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralAction {
    pub modulus: u32,
    pub g: u32,
    pub a: u32,
}

impl DihedralAction {
    pub fn new(n: u32, d: u32) -> Result<Self> {
        let g = family_gcd(n, d)?;
        Ok(DihedralAction {
            modulus: n - 1,
            g,
            a: (n - 1) / g,
        })
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        [false, true]
            .into_iter()
            .flat_map(move |reflect| (0..self.a).map(move |rotation| Element { reflect, rotation }))
    }

    pub fn apply(&self, e: Element, k: u32) -> u32 {
        let m = self.modulus as u64;
        let rotated = (k as u64 + e.rotation as u64 * self.g as u64) % m;
        if e.reflect {
            ((m - rotated) % m) as u32
        } else {
            rotated as u32
        }
    }

    /// `x` after `y`, computed on the index set and matched back to a group element.
    pub fn compose(&self, x: Element, y: Element) -> Element {
        let image: Vec<u32> = (0..self.modulus).map(|k| self.apply(x, self.apply(y, k))).collect();
        self.elements()
            .find(|&e| (0..self.modulus).all(|k| self.apply(e, k) == image[k as usize]))
            .expect("the action is closed under composition")
    }

    fn same_action(&self, x: Element, y: Element) -> bool {
        (0..self.modulus).all(|k| self.apply(x, k) == self.apply(y, k))
    }

    /// `r^a = 1`, `s^2 = 1` and `s r s = r^-1`, checked on every index.
    pub fn relations_hold(&self) -> bool {
        let r = Element {
            reflect: false,
            rotation: 1 % self.a.max(1),
        };
        let s = Element {
            reflect: true,
            rotation: 0,
        };
        let r_inv = Element {
            reflect: false,
            rotation: (self.a - 1) % self.a,
        };
        let r_pow_a = (0..self.modulus).all(|k| {
            let mut x = k;
            for _ in 0..self.a {
                x = self.apply(r, x);
            }
            x == k
        });
        let s_squared = self.same_action(self.compose(s, s), Element::IDENTITY);
        let conj = self.same_action(self.compose(s, self.compose(r, s)), r_inv);
        r_pow_a && s_squared && conj
    }

    pub fn fixed_points(&self, e: Element) -> usize {
        (0..self.modulus).filter(|&k| self.apply(e, k) == k).count()
    }
}

/// Fix counts per group element, in the order of [`DihedralAction::elements`].
pub fn burnside_fix_counts(n: u32, d: u32) -> Result<Vec<(Element, usize)>> {
    let action = DihedralAction::new(n, d)?;
    Ok(action.elements().map(|e| (e, action.fixed_points(e))).collect())
}

/// Number of orbits by Burnside's lemma.
pub fn count_burnside(n: u32, d: u32) -> Result<u32> {
    let action = DihedralAction::new(n, d)?;
    let total: usize = burnside_fix_counts(n, d)?.iter().map(|(_, f)| f).sum();
    let order = 2 * action.a as usize;
    if !total.is_multiple_of(order) {
        return Err(Error::InvariantViolation(format!("fix-count sum {total} not divisible by {order}")));
    }
    Ok((total / order) as u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPartition {
    pub n: u32,
    pub d: u32,
    pub g: u32,
    pub a: u32,
    /// Sorted classes, ordered by smallest member.
    pub classes: Vec<Vec<u32>>,
    pub count: u32,
}

/// Orbits of the action, by closure under the two generators.
pub fn enumerate_partition(n: u32, d: u32) -> Result<ClassPartition> {
    let action = DihedralAction::new(n, d)?;
    let m = action.modulus;
    let generators = [
        Element {
            reflect: false,
            rotation: 1,
        },
        Element {
            reflect: true,
            rotation: 0,
        },
    ];
    let mut seen = vec![false; m as usize];
    let mut classes = Vec::new();
    for start in 0..m {
        if seen[start as usize] {
            continue;
        }
        seen[start as usize] = true;
        let mut class = vec![start];
        let mut frontier = vec![start];
        while let Some(k) = frontier.pop() {
            for g in generators {
                let image = action.apply(g, k);
                if !seen[image as usize] {
                    seen[image as usize] = true;
                    class.push(image);
                    frontier.push(image);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    Ok(ClassPartition {
        n,
        d,
        g: action.g,
        a: action.a,
        count: classes.len() as u32,
        classes,
    })
}

/// JSON summary of the three counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub n: u32,
    pub d: u32,
    pub g: u32,
    pub a: u32,
    pub count_closed_form: u32,
    pub count_burnside: u32,
    pub classes: Vec<Vec<u32>>,
}

/// All three counts; disagreement is an invariant violation.
pub fn class_report(n: u32, d: u32) -> Result<ClassReport> {
    let partition = enumerate_partition(n, d)?;
    let closed = count_closed_form(n, d)?;
    let burnside = count_burnside(n, d)?;
    if closed != burnside || burnside != partition.count {
        return Err(Error::InvariantViolation(format!(
            "({n}, {d}): closed form {closed}, Burnside {burnside}, orbits {}",
            partition.count
        )));
    }
    Ok(ClassReport {
        n,
        d,
        g: partition.g,
        a: partition.a,
        count_closed_form: closed,
        count_burnside: burnside,
        classes: partition.classes,
    })
}
