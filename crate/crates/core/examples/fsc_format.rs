//! Writing a state set as `.fsc` text and reading it back.
use frcode::fixtures::{four_node_params, four_node_spaces};
use frcode::fsc::{emit_fsc, parse_fsc, FscDocument};
use frcode::storage::exact_to_states;

fn main() -> frcode::Result<()> {
    let states = exact_to_states(&four_node_spaces(), &four_node_params())?;
    let text = emit_fsc(&FscDocument::from_state_set(&states, &[]));
    print!("{text}");
    let back = parse_fsc(&text)?;
    assert_eq!(emit_fsc(&back), text);
    assert_eq!(back.to_state_set()?.key_set(), states.key_set());
    match parse_fsc("FSC 1\nfield 2 1\nambient 4\nsubspace A\nrow 1 0 1\nend\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
