//! Is the ternary discriminator a term operation?
//!
//! Every algebra here has a lattice reduct, so the median is a majority
//! term. By the Baker-Pixley theorem an operation is then a term operation
//! exactly when it preserves every subuniverse of the square.

use serde::Serialize;

use crate::algebra::{direct_product, enumerate_subalgebras_in, Element, FiniteAlgebra, Fragment, ProductShape};
use crate::error::Result;
use crate::limits::{guard, Limits};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminatorReport {
    pub holds: bool,
    pub subuniverses_checked: usize,
    /// A subuniverse of the square, as coordinate pairs, that the
    /// discriminator does not preserve.
    pub violated: Option<Vec<(Element, Element)>>,
}

fn discriminator(x: Element, y: Element, z: Element) -> Element {
    if x == y {
        z
    } else {
        x
    }
}

pub fn discriminator_is_term_op(algebra: &FiniteAlgebra, limits: &Limits) -> Result<DiscriminatorReport> {
    discriminator_is_term_op_in(algebra, Fragment::Full, limits)
}

/// With `Fragment::Lattice` the question is asked of the bounded lattice
/// reduct.
pub fn discriminator_is_term_op_in(algebra: &FiniteAlgebra, fragment: Fragment, limits: &Limits) -> Result<DiscriminatorReport> {
    let n = algebra.size();
    guard("discriminator check", n as u128, limits.discriminator_elements as u128)?;
    let inner = Limits {
        subalgebra_elements: limits.subalgebra_elements.max(n * n),
        ..*limits
    };
    let square = direct_product(&[algebra, algebra], &inner)?;
    let shape = ProductShape::new(vec![n, n]);
    let subs = enumerate_subalgebras_in(&square, fragment, &inner)?;
    let checked = subs.len();
    for r in subs {
        let mut member = vec![false; n * n];
        r.iter().for_each(|&e| member[e] = true);
        let pairs: Vec<Vec<Element>> = r.iter().map(|&e| shape.coords(e)).collect();
        let closed = pairs.iter().all(|p| {
            pairs.iter().all(|q| {
                pairs.iter().all(|s| {
                    let img = [discriminator(p[0], q[0], s[0]), discriminator(p[1], q[1], s[1])];
                    member[shape.index(&img)]
                })
            })
        });
        if !closed {
            return Ok(DiscriminatorReport {
                holds: false,
                subuniverses_checked: checked,
                violated: Some(pairs.iter().map(|p| (p[0], p[1])).collect()),
            });
        }
    }
    Ok(DiscriminatorReport {
        holds: true,
        subuniverses_checked: checked,
        violated: None,
    })
}
