//! Recovering the carousel labelling of a shuffled carousel, and the witness
//! produced once an arc is flipped.

use rand::seq::SliceRandom;
use tourney::generators::{carousel, rng_from_seed};
use tourney::loctrans::{brouwer_order, carousel_isomorphism, find_obstruction, flip_distance_given_order};

fn main() -> tourney::Result<()> {
    let m = 15;
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(&mut rng_from_seed(42));
    let t = carousel(m)?.relabel(&perm)?;

    let order = brouwer_order(&t)?;
    println!("cyclic order: {:?}", order.as_slice());
    let map = carousel_isomorphism(&t)?;
    println!("map to carousel labels: {map:?}");
    println!("flip distance to that order: {}", flip_distance_given_order(&t, &order)?);

    let flipped = t.with_reversed(perm[0], perm[2])?;
    match find_obstruction(&flipped) {
        Some(ob) => println!("after flipping {}->{}: {ob}", perm[0], perm[2]),
        None => println!("still locally transitive"),
    }

    // reversing an arc between antipodal points keeps local transitivity,
    // only the balance is lost
    let half = (m - 1) / 2;
    let far = t.with_reversed(perm[0], perm[half])?;
    println!("antipodal flip locally transitive: {}", find_obstruction(&far).is_none());
    println!("carousel_isomorphism: {:?}", carousel_isomorphism(&far).unwrap_err());
    Ok(())
}
