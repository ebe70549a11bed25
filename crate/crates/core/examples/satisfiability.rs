//! Satisfiability per congruence, with witness tables that replay.

use propalg::sat::{acc, pmem_reduction_holds, sat_witnessed};
use propalg::valuation::evaluate;
use propalg::{desugar, parse, parse_term, Variety};

fn main() -> propalg::Result<()> {
    let s = parse("a land not a")?;
    let p = desugar(&s);
    for k in Variety::CHAIN {
        let v = sat_witnessed(&p, k)?;
        println!("{k:>4}: satisfiable {}, falsifiable {}", v.satisfiable, v.falsifiable);
        if let Some(h) = v.sat_witness.filter(|_| k == Variety::Fr) {
            print!("{}", h.to_file_string());
            println!("replayed: {}", evaluate(&p, &h)?.value);
        }
    }
    println!("acc: {:?}", acc(&parse("F land b lor c")?)?);
    let q = parse_term("(a <| b |> F) <| a |> (F <| b |> T)")?;
    println!("Pmem reduction on {q}: {}", pmem_reduction_holds(&q)?);
    Ok(())
}
