//! Canonical forms under each valuation congruence, and the equalities
//! that separate neighbouring congruences.

use propalg::congruence::{equal, normalize};
use propalg::{parse_term, print, Variety};

fn main() -> propalg::Result<()> {
    let t = parse_term("((a <| a |> F) <| b |> F) <| a |> (b <| a |> c)")?;
    println!("{t}");
    for k in Variety::CHAIN {
        println!("  {k:>4}: {}", print(&normalize(&t, k)));
    }

    let pairs = [
        ("a <| a |> F", "a"),
        ("b <| (a <| a |> F) |> F", "b <| a |> F"),
        ("(a <| b |> F) <| a |> F", "b <| a |> F"),
        ("(T <| b |> (F <| a |> T)) <| a |> F", "b <| a |> F"),
        ("a <| b |> a", "a"),
    ];
    println!();
    for (p, q) in pairs {
        let (p, q) = (parse_term(p)?, parse_term(q)?);
        let finest = Variety::CHAIN.into_iter().find(|&k| equal(&p, &q, k));
        println!("{p}  =  {q}  from {}", finest.map_or("nowhere".to_string(), |k| k.to_string()));
    }
    Ok(())
}
