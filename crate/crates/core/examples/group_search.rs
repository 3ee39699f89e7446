//! Searching for a group whose orbit of a seed state is a storage code.
use frcode::fixtures::{good_triple_newcomer, good_triple_params, good_triple};
use frcode::groupsearch::{ltgc_search, SearchOptions};
use frcode::storage::RepairingCollection;

fn main() -> frcode::Result<()> {
    let collection = RepairingCollection::new(good_triple());
    let opts = SearchOptions {
        group_cap: 100_000,
        orbit_cap: 1_000,
        ..SearchOptions::default()
    };
    let outcome = ltgc_search(&collection, &good_triple_newcomer(), &good_triple_params(), &opts)?;
    for line in &outcome.log {
        println!("{line}");
    }
    if let Some(best) = outcome.results.first() {
        println!("best: group order {}, orbit {}", best.group.order(), best.orbit_size());
    }
    Ok(())
}
