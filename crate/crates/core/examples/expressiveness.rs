//! Bounded searches for a composition of operators that expresses the
//! conditional `a <| b |> c`.

use propalg::expressive::{phi_abc, search_equivalent, OperatorCatalog, SearchBounds};
use propalg::{atom, parse_term, Variety};

fn main() -> propalg::Result<()> {
    let abc = [atom("a"), atom("b"), atom("c")];
    let target = parse_term("a <| b |> c")?;

    let out = search_equivalent(&target, Variety::Wm, &abc, &OperatorCatalog::connectives(), &SearchBounds::default())?;
    match &out.witness {
        Some(w) => println!("wm: {} = {}", w, w.term),
        None => println!("wm: nothing found"),
    }
    println!("  {}", out.bounds_line());

    let small = SearchBounds { max_2p: 1, ..SearchBounds::default() };
    let out = search_equivalent(&target, Variety::Cr, &abc, &OperatorCatalog::from_bodies(2), &small)?;
    println!("cr with one binary operator: found {}", out.witness.is_some());
    println!("  {}", out.bounds_line());

    for text in ["a <| b |> c", "(a <| a |> F) <| b |> c", "a land c"] {
        println!("phi({text}) = {}", phi_abc(&parse_term(text)?, &abc[0], &abc[1], &abc[2]));
    }
    Ok(())
}
