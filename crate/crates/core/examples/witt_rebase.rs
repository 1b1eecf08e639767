//! Rebase a Witt basis and watch `(id, 0, 0, 0)` pick up `X` and `C` blocks,
//! then clean a given `(id, 0, X, C)` back to `(id, 0, 0, 0)`.

use bergerkit::lie::{decorated_project, DecoratedElement, DecoratedFrame};
use bergerkit::linalg::{rat, RatMatrix};
use bergerkit::quadratic::{change_basis, standard_witt, verify_witt, witt_rebase, RebaseData, SplitSignature};

fn main() {
    let split = SplitSignature::new(2, 1, 1);
    let frame = DecoratedFrame::from_split(split);
    let (space, basis) = standard_witt(split);

    let x = RatMatrix::from_i64(&[&[1, 2], &[0, -1]]);
    let c = RatMatrix::from_rows(vec![vec![rat(0, 1), rat(3, 2)], vec![rat(-3, 2), rat(0, 1)]]).unwrap();
    let data = RebaseData::new(x.clone(), c.clone());
    let rebased = witt_rebase(&basis, &data).unwrap();
    println!("rebased basis is Witt: {}", verify_witt(&rebased, &space));

    let id = DecoratedElement {
        b: RatMatrix::identity(2),
        ..DecoratedElement::zero(&frame)
    };
    let eta = change_basis(&id.assemble(&frame), &basis, &rebased);
    let eta = decorated_project(&frame, &eta).unwrap();
    println!("(id,0,0,0) in the new basis:\n  X = {:?}\n  C = {:?}", eta.x, eta.c);

    let xi = DecoratedElement { x: x.clone(), c: c.clone(), ..id.clone() };
    let cleaning = RebaseData::cleaning(&xi.x, &xi.c);
    let clean_basis = witt_rebase(&basis, &cleaning).unwrap();
    let xi_new = decorated_project(&frame, &change_basis(&xi.assemble(&frame), &basis, &clean_basis)).unwrap();
    println!("cleaned element: X zero {}, C zero {}", xi_new.x.is_zero(), xi_new.c.is_zero());
}
